//! Edge-colored flag graphs: premaniplexes and maniplexes.
//!
//! A rank-`n` premaniplex on flags `0..F` is given by `n` involutions
//! (one per color); `perm[i][f] == f` encodes a semi-edge at flag `f`.
//! Non-consecutive colors must commute, and the graph must be connected.
//! A maniplex additionally forbids semi-edges and parallel edges.

use crate::unionfind::UnionFind;
use std::ops::Deref;
use thiserror::Error;

pub type Flag = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlagGraphError {
    #[error("ZeroRank: rank must be at least 1")]
    ZeroRank,
    #[error("EmptyFlagSet: at least one flag is required")]
    EmptyFlagSet,
    #[error("RankMismatch: expected {expected} permutations, got {got}")]
    PermCountMismatch { expected: usize, got: usize },
    #[error("BadSize: permutation for color {color} has wrong length")]
    BadSize { color: usize },
    #[error("NotBijective: color {0} image out of range or repeated")]
    NotBijective(usize),
    #[error("NotInvolution: color {0} squared is not the identity")]
    NotInvolution(usize),
    #[error("CommutationFail: colors {i} and {j} do not commute at flag {flag}")]
    CommutationFail { i: usize, j: usize, flag: Flag },
    #[error("Disconnected: the colored graph is not connected")]
    Disconnected,
    #[error("SemiEdge: color {color} fixes flag {flag}")]
    SemiEdge { color: usize, flag: Flag },
    #[error("ParallelEdge: colors {i} and {j} agree at flag {flag}")]
    ParallelEdge { i: usize, j: usize, flag: Flag },
    #[error("RankNotThree: operation requires rank 3, got {0}")]
    RankNotThree(usize),
    #[error("RankMismatch: ranks {0} and {1} differ")]
    RankMismatch(usize, usize),
    #[error("ColorOutOfRange: color {color} invalid for rank {rank}")]
    ColorOutOfRange { color: usize, rank: usize },
}

/// A validated premaniplex. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Premaniplex {
    rank: usize,
    perms: Vec<Vec<Flag>>,
}

/// A premaniplex that also passed the maniplex axioms
/// (no semi-edges, no parallel edges).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Maniplex(Premaniplex);

impl Deref for Maniplex {
    type Target = Premaniplex;
    fn deref(&self) -> &Premaniplex {
        &self.0
    }
}

/// Result of [`validate`]: the object classified as strongly as possible.
#[derive(Debug, Clone)]
pub enum Validated {
    Maniplex(Maniplex),
    Premaniplex(Premaniplex),
}

impl Validated {
    pub fn premaniplex(self) -> Premaniplex {
        match self {
            Validated::Maniplex(m) => m.0,
            Validated::Premaniplex(p) => p,
        }
    }

    pub fn as_premaniplex(&self) -> &Premaniplex {
        match self {
            Validated::Maniplex(m) => m,
            Validated::Premaniplex(p) => p,
        }
    }

    pub fn maniplex(self) -> Option<Maniplex> {
        match self {
            Validated::Maniplex(m) => Some(m),
            Validated::Premaniplex(_) => None,
        }
    }

    pub fn is_maniplex(&self) -> bool {
        matches!(self, Validated::Maniplex(_))
    }
}

/// Checks the premaniplex axioms, then classifies the result as a maniplex
/// when the no-semi-edge and simplicity conditions also hold.
pub fn validate(rank: usize, perms: Vec<Vec<Flag>>) -> Result<Validated, FlagGraphError> {
    let p = Premaniplex::new(rank, perms)?;
    match p.maniplex_violation() {
        None => Ok(Validated::Maniplex(Maniplex(p))),
        Some(_) => Ok(Validated::Premaniplex(p)),
    }
}

impl Premaniplex {
    pub fn new(rank: usize, perms: Vec<Vec<Flag>>) -> Result<Self, FlagGraphError> {
        if rank == 0 {
            return Err(FlagGraphError::ZeroRank);
        }
        if perms.len() != rank {
            return Err(FlagGraphError::PermCountMismatch {
                expected: rank,
                got: perms.len(),
            });
        }
        let f = perms[0].len();
        if f == 0 {
            return Err(FlagGraphError::EmptyFlagSet);
        }
        for (i, p) in perms.iter().enumerate() {
            if p.len() != f {
                return Err(FlagGraphError::BadSize { color: i });
            }
            let mut seen = vec![false; f];
            for &img in p {
                if (img as usize) >= f || seen[img as usize] {
                    return Err(FlagGraphError::NotBijective(i));
                }
                seen[img as usize] = true;
            }
            for x in 0..f {
                if p[p[x] as usize] as usize != x {
                    return Err(FlagGraphError::NotInvolution(i));
                }
            }
        }
        for i in 0..rank {
            for j in i + 2..rank {
                for x in 0..f as Flag {
                    let a = perms[j][perms[i][x as usize] as usize];
                    let b = perms[i][perms[j][x as usize] as usize];
                    if a != b {
                        return Err(FlagGraphError::CommutationFail { i, j, flag: x });
                    }
                }
            }
        }
        let pm = Premaniplex { rank, perms };
        if !pm.is_connected_under(&(0..rank).collect::<Vec<_>>()) {
            return Err(FlagGraphError::Disconnected);
        }
        Ok(pm)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn flag_count(&self) -> usize {
        self.perms[0].len()
    }

    pub fn perm(&self, color: usize) -> &[Flag] {
        &self.perms[color]
    }

    pub fn perms(&self) -> &[Vec<Flag>] {
        &self.perms
    }

    /// The color-`i` neighbor of `f` (equal to `f` on a semi-edge).
    pub fn adj(&self, color: usize, f: Flag) -> Flag {
        self.perms[color][f as usize]
    }

    fn maniplex_violation(&self) -> Option<FlagGraphError> {
        let f = self.flag_count();
        for i in 0..self.rank {
            for x in 0..f as Flag {
                if self.perms[i][x as usize] == x {
                    return Some(FlagGraphError::SemiEdge { color: i, flag: x });
                }
            }
        }
        for i in 0..self.rank {
            for j in i + 1..self.rank {
                for x in 0..f as Flag {
                    if self.perms[i][x as usize] == self.perms[j][x as usize] {
                        return Some(FlagGraphError::ParallelEdge { i, j, flag: x });
                    }
                }
            }
        }
        None
    }

    pub fn is_maniplex(&self) -> bool {
        self.maniplex_violation().is_none()
    }

    pub fn to_maniplex(&self) -> Result<Maniplex, FlagGraphError> {
        match self.maniplex_violation() {
            None => Ok(Maniplex(self.clone())),
            Some(e) => Err(e),
        }
    }

    fn is_connected_under(&self, colors: &[usize]) -> bool {
        let f = self.flag_count();
        let mut seen = vec![false; f];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 1usize;
        while let Some(x) = stack.pop() {
            for &c in colors {
                let y = self.perms[c][x as usize];
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == f
    }

    /// Connected components under the given colors; component ids are dense
    /// and ordered by smallest member flag.
    pub fn components_under(&self, colors: &[usize]) -> FacePartition {
        let f = self.flag_count();
        let mut uf = UnionFind::new(f);
        for &c in colors {
            for x in 0..f as Flag {
                uf.union(x, self.perms[c][x as usize]);
            }
        }
        let mut component_id = vec![u32::MAX; f];
        let mut face_sizes: Vec<u32> = Vec::new();
        for x in 0..f as Flag {
            let root = uf.find(x);
            if component_id[root as usize] == u32::MAX {
                component_id[root as usize] = face_sizes.len() as u32;
                face_sizes.push(0);
            }
            component_id[x as usize] = component_id[root as usize];
            face_sizes[component_id[x as usize] as usize] += 1;
        }
        FacePartition {
            color_set: colors.to_vec(),
            component_id,
            face_sizes,
        }
    }

    /// `i`-faces: components after deleting color `i`.
    pub fn faces(&self, i: usize) -> Result<FacePartition, FlagGraphError> {
        if i >= self.rank {
            return Err(FlagGraphError::ColorOutOfRange {
                color: i,
                rank: self.rank,
            });
        }
        let colors: Vec<usize> = (0..self.rank).filter(|&c| c != i).collect();
        Ok(self.components_under(&colors))
    }

    pub fn faces_by_colors(&self, color_set: &[usize]) -> Result<FacePartition, FlagGraphError> {
        for &c in color_set {
            if c >= self.rank {
                return Err(FlagGraphError::ColorOutOfRange {
                    color: c,
                    rank: self.rank,
                });
            }
        }
        Ok(self.components_under(color_set))
    }

    /// Color-reversal: color `i` becomes color `n-1-i`.
    pub fn dual(&self) -> Premaniplex {
        let mut perms = self.perms.clone();
        perms.reverse();
        Premaniplex {
            rank: self.rank,
            perms,
        }
    }

    /// Some `(i, flag)` with `(r_i r_{i+1})^2` fixing `flag`, if any.
    pub fn degeneracy_witness(&self) -> Option<(usize, Flag)> {
        let f = self.flag_count();
        for i in 0..self.rank.saturating_sub(1) {
            let a = &self.perms[i];
            let b = &self.perms[i + 1];
            for x in 0..f as Flag {
                let y = a[b[a[b[x as usize] as usize] as usize] as usize];
                if y == x {
                    return Some((i, x));
                }
            }
        }
        None
    }

    pub fn is_degenerate(&self) -> bool {
        self.degeneracy_witness().is_some()
    }

    /// Orbits of flags under `ω_π = r_{n−1}···r_0` (apply `r_0` first),
    /// with per-orbit length and simplicity (pairwise distinct 0-faces).
    pub fn petrie_polygons(&self) -> PetrieReport {
        let f = self.flag_count();
        let mut omega: Vec<Flag> = (0..f as Flag).collect();
        for i in 0..self.rank {
            // ω_π applies r_0 first, then r_1, ..., r_{n−1}.
            for x in 0..f {
                omega[x] = self.perms[i][omega[x] as usize];
            }
        }
        let vertices = self.faces(0).expect("rank >= 1");
        let mut orbit_of = vec![u32::MAX; f];
        let mut lengths = Vec::new();
        let mut simple = Vec::new();
        for start in 0..f as Flag {
            if orbit_of[start as usize] != u32::MAX {
                continue;
            }
            let id = lengths.len() as u32;
            let mut len = 0u32;
            let mut vertex_ids = Vec::new();
            let mut x = start;
            loop {
                orbit_of[x as usize] = id;
                vertex_ids.push(vertices.component_id[x as usize]);
                len += 1;
                x = omega[x as usize];
                if x == start {
                    break;
                }
            }
            vertex_ids.sort_unstable();
            let distinct = vertex_ids.windows(2).all(|w| w[0] != w[1]);
            lengths.push(len);
            simple.push(distinct);
        }
        PetrieReport {
            orbit_of,
            lengths,
            simple,
        }
    }

    /// Proper 2-coloring check: orientable iff the flag graph is bipartite
    /// with every colored edge crossing the bipartition. Rank 3 only, since
    /// the genus/crosscap computation needs V − E + F.
    pub fn orientability(&self) -> Result<OrientabilityReport, FlagGraphError> {
        if self.rank != 3 {
            return Err(FlagGraphError::RankNotThree(self.rank));
        }
        let f = self.flag_count();
        let mut side = vec![u8::MAX; f];
        side[0] = 0;
        let mut queue = std::collections::VecDeque::from([0u32]);
        let mut orientable = true;
        'bfs: while let Some(x) = queue.pop_front() {
            for c in 0..self.rank {
                let y = self.perms[c][x as usize];
                let want = 1 - side[x as usize];
                if side[y as usize] == u8::MAX {
                    side[y as usize] = want;
                    queue.push_back(y);
                } else if side[y as usize] != want {
                    orientable = false;
                    break 'bfs;
                }
            }
        }
        let v = self.faces(0)?.face_count() as i64;
        let e = self.faces(1)?.face_count() as i64;
        let fc = self.faces(2)?.face_count() as i64;
        let euler = v - e + fc;
        let (genus, crosscap) = if orientable {
            ((2 - euler) / 2, None)
        } else {
            (0, Some(2 - euler))
        };
        Ok(OrientabilityReport {
            orientable,
            euler,
            genus: if orientable { Some(genus) } else { None },
            crosscap,
        })
    }

    /// Per-flag vector of ⟨r_i, r_{i+1}⟩-orbit sizes, used to prune
    /// candidate images in isomorphism and automorphism searches.
    pub fn local_invariants(&self) -> Vec<Vec<u32>> {
        let f = self.flag_count();
        let mut inv = vec![Vec::with_capacity(self.rank.saturating_sub(1)); f];
        for i in 0..self.rank.saturating_sub(1) {
            let part = self.components_under(&[i, i + 1]);
            for x in 0..f {
                inv[x].push(part.face_sizes[part.component_id[x] as usize]);
            }
        }
        // Distinguish semi-edge patterns too (relevant for premaniplexes).
        for x in 0..f {
            let mut mask = 0u32;
            for i in 0..self.rank.min(32) {
                if self.perms[i][x] == x as Flag {
                    mask |= 1 << i;
                }
            }
            inv[x].push(mask);
        }
        inv
    }

    /// Attempts to extend `base ↦ candidate` (flag 0 of `self` to `candidate`
    /// in `other`) to a color-preserving isomorphism. The extension is forced;
    /// returns the full flag bijection on success.
    fn try_extend(&self, other: &Premaniplex, candidate: Flag) -> Option<Vec<Flag>> {
        let f = self.flag_count();
        let mut map = vec![u32::MAX; f];
        let mut used = vec![false; f];
        map[0] = candidate;
        used[candidate as usize] = true;
        let mut queue = std::collections::VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            let mx = map[x as usize];
            for c in 0..self.rank {
                let y = self.perms[c][x as usize];
                let my = other.perms[c][mx as usize];
                if map[y as usize] == u32::MAX {
                    if used[my as usize] {
                        return None;
                    }
                    map[y as usize] = my;
                    used[my as usize] = true;
                    queue.push_back(y);
                } else if map[y as usize] != my {
                    return None;
                }
            }
        }
        Some(map)
    }

    /// The unique color-preserving bijection onto `other` sending flag 0 to
    /// `candidate`, if one exists (connectivity makes the extension forced).
    pub fn isomorphism_with_base_image(
        &self,
        other: &Premaniplex,
        candidate: Flag,
    ) -> Option<Vec<Flag>> {
        if self.rank != other.rank || self.flag_count() != other.flag_count() {
            return None;
        }
        self.try_extend(other, candidate)
    }

    /// A color-preserving flag bijection onto `other`, or None.
    pub fn isomorphism(&self, other: &Premaniplex) -> Result<Option<Vec<Flag>>, FlagGraphError> {
        if self.rank != other.rank {
            return Err(FlagGraphError::RankMismatch(self.rank, other.rank));
        }
        if self.flag_count() != other.flag_count() {
            return Ok(None);
        }
        let inv_a = self.local_invariants();
        let inv_b = other.local_invariants();
        let target = &inv_a[0];
        for c in 0..other.flag_count() as Flag {
            if &inv_b[c as usize] != target {
                continue;
            }
            if let Some(map) = self.try_extend(other, c) {
                return Ok(Some(map));
            }
        }
        Ok(None)
    }

    pub fn is_isomorphic(&self, other: &Premaniplex) -> bool {
        matches!(self.isomorphism(other), Ok(Some(_)))
    }

    /// Relabels flags by BFS discovery order from `start` (neighbors explored
    /// in color order) and returns the flattened permutation tables.
    fn bfs_certificate(&self, start: Flag) -> Vec<Flag> {
        let f = self.flag_count();
        let mut label = vec![u32::MAX; f];
        let mut order = Vec::with_capacity(f);
        label[start as usize] = 0;
        order.push(start);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for c in 0..self.rank {
                let y = self.perms[c][x as usize];
                if label[y as usize] == u32::MAX {
                    label[y as usize] = order.len() as u32;
                    order.push(y);
                }
            }
        }
        let mut cert = Vec::with_capacity(f * self.rank);
        for c in 0..self.rank {
            for &old in &order {
                cert.push(label[self.perms[c][old as usize] as usize]);
            }
        }
        cert
    }

    /// Lexicographically minimal BFS relabeling over all start flags.
    /// Equal certificates ⇔ isomorphic (given equal rank and flag count).
    pub fn canonical_form(&self) -> CanonicalForm {
        let mut best: Option<Vec<Flag>> = None;
        for start in 0..self.flag_count() as Flag {
            let cert = self.bfs_certificate(start);
            match &best {
                Some(b) if *b <= cert => {}
                _ => best = Some(cert),
            }
        }
        CanonicalForm {
            rank: self.rank,
            tables: best.unwrap(),
        }
    }
}

impl Maniplex {
    pub fn from_premaniplex(p: Premaniplex) -> Result<Maniplex, FlagGraphError> {
        p.to_maniplex()
    }

    pub fn as_premaniplex(&self) -> &Premaniplex {
        &self.0
    }

    pub fn into_premaniplex(self) -> Premaniplex {
        self.0
    }

    pub fn dual_maniplex(&self) -> Maniplex {
        Maniplex(self.0.dual())
    }

    /// Rank-3 Petrial: replaces `r_0` by `r_2 ∘ r_0`. The result may have
    /// semi-edges or parallel edges, so it is returned classified.
    pub fn petrial(&self) -> Result<Validated, FlagGraphError> {
        if self.rank() != 3 {
            return Err(FlagGraphError::RankNotThree(self.rank()));
        }
        let f = self.flag_count();
        let mut new_r0 = Vec::with_capacity(f);
        for x in 0..f {
            new_r0.push(self.0.perms[2][self.0.perms[0][x] as usize]);
        }
        validate(
            3,
            vec![new_r0, self.0.perms[1].clone(), self.0.perms[2].clone()],
        )
    }

    /// Rank-3 opposite: dual ∘ petrial ∘ dual.
    pub fn opposite(&self) -> Result<Validated, FlagGraphError> {
        if self.rank() != 3 {
            return Err(FlagGraphError::RankNotThree(self.rank()));
        }
        let d = Maniplex(self.0.dual());
        let p = d.petrial()?.premaniplex();
        validate(3, {
            let mut perms = p.perms;
            perms.reverse();
            perms
        })
    }
}

/// Connected components of the flag graph restricted to `color_set`.
#[derive(Debug, Clone)]
pub struct FacePartition {
    pub color_set: Vec<usize>,
    /// flag → dense component id (ordered by smallest member flag).
    pub component_id: Vec<u32>,
    pub face_sizes: Vec<u32>,
}

impl FacePartition {
    pub fn face_count(&self) -> usize {
        self.face_sizes.len()
    }
}

#[derive(Debug, Clone)]
pub struct PetrieReport {
    pub orbit_of: Vec<u32>,
    pub lengths: Vec<u32>,
    pub simple: Vec<bool>,
}

impl PetrieReport {
    pub fn all_simple(&self) -> bool {
        self.simple.iter().all(|&s| s)
    }

    pub fn orbit_count(&self) -> usize {
        self.lengths.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientabilityReport {
    pub orientable: bool,
    pub euler: i64,
    pub genus: Option<i64>,
    pub crosscap: Option<i64>,
}

/// Isomorphism certificate: equal certificates ⇔ isomorphic flag graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub rank: usize,
    pub tables: Vec<Flag>,
}
