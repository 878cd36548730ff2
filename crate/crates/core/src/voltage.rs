//! Voltage premaniplexes and derived-graph covers.
//!
//! A voltage premaniplex (X, Γ, ξ) labels each dart of a premaniplex X with
//! an element of a group Γ, inverse darts carrying inverse labels. The
//! derived graph has flags X × Γ with the color-i neighbor of (x, γ) equal
//! to (y, ξ(d)γ), giving a covering of X with Γ acting on fibers.

use crate::group::{homomorphism_well_defined, Elem, FreeActionGroup, GroupError};
use crate::premaniplex::{validate, Flag, FlagGraphError, Premaniplex, Validated};
use crate::unionfind::UnionFind;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VoltageError {
    #[error("InverseMismatch: dart ({flag}, {color}) and its inverse carry non-inverse voltages")]
    InverseMismatch { flag: Flag, color: usize },
    #[error("NoTrivialSpanningTree: trivial-voltage darts do not span the base")]
    NoTrivialSpanningTree,
    #[error("VoltagesDoNotGenerate: cotree voltages generate a proper subgroup")]
    VoltagesDoNotGenerate,
    #[error("SemiEdgeVoltageOrder: semi-edge at ({flag}, {color}) has voltage of order > 2")]
    SemiEdgeVoltageOrder { flag: Flag, color: usize },
    #[error("ParallelSameVoltage: parallel darts at flag {flag}, colors {i} and {j}, share a voltage")]
    ParallelSameVoltage { flag: Flag, i: usize, j: usize },
    #[error("AlternatingPathNonTrivial: colors {i},{j} 4-path at flag {flag} has non-trivial voltage")]
    AlternatingPathNonTrivial { flag: Flag, i: usize, j: usize },
    #[error("ShapeMismatch: voltage table does not match the base graph")]
    ShapeMismatch,
    #[error("NotAutomorphism: the supplied flag map is not a base automorphism")]
    NotAutomorphism,
    #[error("NotFreeAction: the subgroup does not act freely on the flags")]
    NotFreeAction,
    #[error("group error: {0}")]
    Group(#[from] GroupError),
    #[error("flag graph error: {0}")]
    FlagGraph(#[from] FlagGraphError),
}

#[derive(Debug, Clone)]
pub struct VoltagePremaniplex {
    base: Premaniplex,
    group: FreeActionGroup,
    /// xi[color][flag] = voltage of the dart (flag, color).
    xi: Vec<Vec<Elem>>,
}

impl VoltagePremaniplex {
    /// Validates all voltage-premaniplex axioms.
    pub fn new(
        base: Premaniplex,
        group: FreeActionGroup,
        xi: Vec<Vec<Elem>>,
    ) -> Result<VoltagePremaniplex, VoltageError> {
        let n = base.rank();
        let f = base.flag_count();
        if xi.len() != n || xi.iter().any(|row| row.len() != f) {
            return Err(VoltageError::ShapeMismatch);
        }
        for row in &xi {
            for &e in row {
                group.position_of(e)?;
            }
        }
        // ξ(d⁻¹) = ξ(d)⁻¹.
        for i in 0..n {
            for x in 0..f as Flag {
                let y = base.adj(i, x);
                let inv = group.inverse(xi[i][x as usize])?;
                if xi[i][y as usize] != inv {
                    return Err(VoltageError::InverseMismatch { flag: x, color: i });
                }
            }
        }
        // Semi-edge voltages have order dividing 2 (self-inverse).
        for i in 0..n {
            for x in 0..f as Flag {
                if base.adj(i, x) == x {
                    let v = xi[i][x as usize];
                    if !group.is_identity(group.compose(v, v)?) {
                        return Err(VoltageError::SemiEdgeVoltageOrder { flag: x, color: i });
                    }
                }
            }
        }
        // Parallel darts (same endpoints, different colors) carry distinct voltages.
        for x in 0..f as Flag {
            for i in 0..n {
                for j in i + 1..n {
                    if base.adj(i, x) == base.adj(j, x) && xi[i][x as usize] == xi[j][x as usize] {
                        return Err(VoltageError::ParallelSameVoltage { flag: x, i, j });
                    }
                }
            }
        }
        // Alternating 4-paths of non-consecutive colors have trivial voltage.
        let v = VoltagePremaniplex { base, group, xi };
        for i in 0..n {
            for j in i + 2..n {
                for x in 0..v.base.flag_count() as Flag {
                    let mut acc = v.group.identity();
                    let mut cur = x;
                    for &c in &[i, j, i, j] {
                        acc = v.group.compose(v.xi[c][cur as usize], acc)?;
                        cur = v.base.adj(c, cur);
                    }
                    if !v.group.is_identity(acc) {
                        return Err(VoltageError::AlternatingPathNonTrivial { flag: x, i, j });
                    }
                }
            }
        }
        // Spanning tree of trivial-voltage darts.
        let tree = v.trivial_spanning_tree()?;
        // Cotree voltages generate Γ.
        let cotree: Vec<Elem> = v
            .cotree_darts(&tree)
            .iter()
            .map(|&(x, c)| v.xi[c][x as usize])
            .collect();
        if !v.subgroup_is_whole(&cotree)? {
            return Err(VoltageError::VoltagesDoNotGenerate);
        }
        Ok(v)
    }

    pub fn base(&self) -> &Premaniplex {
        &self.base
    }

    pub fn group(&self) -> &FreeActionGroup {
        &self.group
    }

    pub fn voltage(&self, flag: Flag, color: usize) -> Elem {
        self.xi[color][flag as usize]
    }

    pub fn xi(&self) -> &[Vec<Elem>] {
        &self.xi
    }

    /// BFS spanning tree over trivial-voltage darts, rooted at flag 0.
    /// Returns parent dart per flag: `tree[f] = Some((parent_flag, color))`.
    fn trivial_spanning_tree(&self) -> Result<Vec<Option<(Flag, usize)>>, VoltageError> {
        let f = self.base.flag_count();
        let mut tree: Vec<Option<(Flag, usize)>> = vec![None; f];
        let mut seen = vec![false; f];
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0u32]);
        let mut count = 1usize;
        while let Some(x) = queue.pop_front() {
            for c in 0..self.base.rank() {
                if !self.group.is_identity(self.xi[c][x as usize]) {
                    continue;
                }
                let y = self.base.adj(c, x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    tree[y as usize] = Some((x, c));
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        if count != f {
            return Err(VoltageError::NoTrivialSpanningTree);
        }
        Ok(tree)
    }

    /// Darts not used by the tree, one per unordered edge
    /// (the dart (x, c) with x ≤ its endpoint).
    fn cotree_darts(&self, tree: &[Option<(Flag, usize)>]) -> Vec<(Flag, usize)> {
        let f = self.base.flag_count();
        let is_tree = |x: Flag, c: usize| {
            let y = self.base.adj(c, x);
            tree[x as usize] == Some((y, c)) || tree[y as usize] == Some((x, c))
        };
        let mut darts = Vec::new();
        for x in 0..f as Flag {
            for c in 0..self.base.rank() {
                let y = self.base.adj(c, x);
                if x <= y && !is_tree(x, c) {
                    darts.push((x, c));
                }
            }
        }
        darts
    }

    fn subgroup_is_whole(&self, gens: &[Elem]) -> Result<bool, VoltageError> {
        let order = self.group.order();
        let tables: Vec<Vec<u32>> = gens
            .iter()
            .map(|&g| self.group.right_mul_positions(g))
            .collect::<Result<_, _>>()?;
        let inverses: Vec<Vec<u32>> = tables
            .iter()
            .map(|t| {
                let mut inv = vec![0u32; t.len()];
                for (x, &y) in t.iter().enumerate() {
                    inv[y as usize] = x as u32;
                }
                inv
            })
            .collect();
        let mut seen = vec![false; order];
        seen[0] = true;
        let mut stack = vec![0u32];
        let mut count = 1usize;
        while let Some(p) = stack.pop() {
            for (t, ti) in tables.iter().zip(&inverses) {
                for q in [t[p as usize], ti[p as usize]] {
                    if !seen[q as usize] {
                        seen[q as usize] = true;
                        count += 1;
                        stack.push(q);
                    }
                }
            }
        }
        Ok(count == order)
    }

    /// Voltage of a walk given as a dart sequence (first dart walked first):
    /// ξ(W) = ξ(d_k)···ξ(d_1).
    pub fn path_voltage(&self, darts: &[(Flag, usize)]) -> Result<Elem, VoltageError> {
        let mut acc = self.group.identity();
        for &(x, c) in darts {
            acc = self.group.compose(self.xi[c][x as usize], acc)?;
        }
        Ok(acc)
    }

    /// The derived graph: flags = base flags × Γ, indexed `x·|Γ| + pos(γ)`
    /// with Γ in Cayley BFS order; color-i neighbor of (x, γ) is (y, ξ(d)γ).
    pub fn derived_graph(&self) -> Result<Cover, VoltageError> {
        let n = self.base.rank();
        let bf = self.base.flag_count();
        let order = self.group.order();
        let total = bf * order;
        let mut perms = Vec::with_capacity(n);
        for i in 0..n {
            // Left-multiplication tables, one per distinct voltage in color i.
            let mut tables: std::collections::HashMap<u32, Vec<u32>> =
                std::collections::HashMap::new();
            for x in 0..bf {
                let e = self.xi[i][x];
                tables
                    .entry(e.0)
                    .or_insert_with(|| self.group.left_mul_positions(e));
            }
            let mut perm = vec![0u32; total];
            for x in 0..bf {
                let y = self.base.adj(i, x as Flag) as usize;
                let lmul = &tables[&self.xi[i][x].0];
                for p in 0..order {
                    perm[x * order + p] = (y * order) as u32 + lmul[p];
                }
            }
            perms.push(perm);
        }
        let validated = validate(n, perms)?;
        Ok(Cover {
            voltage: self.clone(),
            total: validated,
        })
    }

    /// Lift criterion: `tau` (a base automorphism given as a flag
    /// bijection) lifts to the derived graph iff ξ(W) ↦ ξ(Wτ) is a
    /// well-defined homomorphism on fundamental-cycle voltages.
    pub fn lift_check(&self, tau: &[Flag]) -> Result<bool, VoltageError> {
        let f = self.base.flag_count();
        if tau.len() != f {
            return Err(VoltageError::NotAutomorphism);
        }
        let mut seen = vec![false; f];
        for &t in tau {
            if (t as usize) >= f || seen[t as usize] {
                return Err(VoltageError::NotAutomorphism);
            }
            seen[t as usize] = true;
        }
        for i in 0..self.base.rank() {
            for x in 0..f {
                if tau[self.base.adj(i, x as Flag) as usize]
                    != self.base.adj(i, tau[x])
                {
                    return Err(VoltageError::NotAutomorphism);
                }
            }
        }
        let tree = self.trivial_spanning_tree()?;
        // Dart path from the root (flag 0) to x along the tree.
        let path_to = |x: Flag| -> Vec<(Flag, usize)> {
            let mut back = Vec::new();
            let mut cur = x;
            while let Some((par, c)) = tree[cur as usize] {
                // Walk par → cur uses the dart (par, c).
                back.push((par, c));
                cur = par;
            }
            back.reverse();
            back
        };
        let mut source_gens = Vec::new();
        let mut target_elems = Vec::new();
        for (x, c) in self.cotree_darts(&tree) {
            let y = self.base.adj(c, x);
            // Fundamental closed walk at the root: root → x, dart (x,c), y → root.
            let mut walk = path_to(x);
            walk.push((x, c));
            let mut tail = path_to(y);
            tail.reverse();
            walk.extend(tail.iter().map(|&(par, cc)| {
                // Reversed tree dart: from child towards parent.
                (self.base.adj(cc, par), cc)
            }));
            // Tree darts are trivial, so the walk voltage is ξ(x, c).
            let g = self.xi[c][x as usize];
            debug_assert_eq!(self.path_voltage(&walk).unwrap(), g);
            let image_walk: Vec<(Flag, usize)> =
                walk.iter().map(|&(v, cc)| (tau[v as usize], cc)).collect();
            let t = self.path_voltage(&image_walk)?;
            source_gens.push(g);
            target_elems.push(t);
        }
        Ok(homomorphism_well_defined(
            &self.group,
            &source_gens,
            &self.group,
            &target_elems,
        )?)
    }
}

/// A derived-graph covering: the total space plus the voltage data that
/// produced it. The projection sends flag `x·|Γ| + p` to base flag `x`.
#[derive(Debug, Clone)]
pub struct Cover {
    pub voltage: VoltagePremaniplex,
    pub total: Validated,
}

impl Cover {
    pub fn total_premaniplex(&self) -> &Premaniplex {
        self.total.as_premaniplex()
    }

    pub fn group_order(&self) -> usize {
        self.voltage.group().order()
    }

    pub fn project(&self, flag: Flag) -> Flag {
        flag / self.group_order() as u32
    }

    pub fn fiber_position(&self, flag: Flag) -> usize {
        (flag as usize) % self.group_order()
    }
}

/// Result of quotienting a premaniplex by a free subgroup of automorphisms:
/// the orbit premaniplex plus a voltage reconstruction whose derived graph
/// is isomorphic to the original.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub voltage: VoltagePremaniplex,
    /// original flag → (orbit id, fiber element).
    pub flag_decomposition: Vec<(u32, Elem)>,
}

/// Quotients `m` by the subgroup `gamma` (a free-action group whose
/// permutation domain is the flag set of `m`).
/// Regauges a voltage assignment so that a spanning tree carries trivial
/// voltages: replaces ξ(d: u→v) by a_v ξ(d) a_u⁻¹ for a flag-indexed family
/// a with a_0 = 1.  The derived graph is unchanged up to isomorphism
/// ((u, γ) ↦ (u, a_u γ)), so this is safe to apply before validation.
pub fn normalize_voltages(
    base: &Premaniplex,
    group: &FreeActionGroup,
    xi: &mut [Vec<Elem>],
) -> Result<(), VoltageError> {
    let f = base.flag_count();
    let mut a = vec![group.identity(); f];
    let mut seen = vec![false; f];
    seen[0] = true;
    // Two passes: grow the tree over trivial darts first so already-normalized
    // assignments keep a ≡ 1 and come out untouched, then over anything left.
    for trivial_only in [true, false] {
        let mut queue: std::collections::VecDeque<u32> = (0..f as Flag)
            .filter(|&x| seen[x as usize])
            .collect();
        while let Some(x) = queue.pop_front() {
            for (c, row) in xi.iter().enumerate() {
                let y = base.adj(c, x);
                let g = row[x as usize];
                if seen[y as usize] || (trivial_only && !group.is_identity(g)) {
                    continue;
                }
                seen[y as usize] = true;
                a[y as usize] = group.compose(a[x as usize], group.inverse(g)?)?;
                queue.push_back(y);
            }
        }
    }
    for (c, row) in xi.iter_mut().enumerate() {
        for x in 0..f {
            let y = base.adj(c, x as Flag) as usize;
            let mid = group.compose(row[x], group.inverse(a[x])?)?;
            row[x] = group.compose(a[y], mid)?;
        }
    }
    Ok(())
}

pub fn quotient(m: &Premaniplex, gamma: &FreeActionGroup) -> Result<Quotient, VoltageError> {
    let f = m.flag_count();
    if gamma.degree() != f {
        return Err(VoltageError::NotFreeAction);
    }
    // Generators must be automorphisms: commute with every color involution.
    for gi in 0..gamma.generator_count() {
        let g = gamma.generator_perm(gi);
        for i in 0..m.rank() {
            for x in 0..f as Flag {
                if g.apply(m.adj(i, x)) != m.adj(i, g.apply(x)) {
                    return Err(VoltageError::NotAutomorphism);
                }
            }
        }
    }
    // Orbits of the subgroup on flags.
    let mut uf = UnionFind::new(f);
    for gi in 0..gamma.generator_count() {
        let g = gamma.generator_perm(gi);
        for x in 0..f as Flag {
            uf.union(x, g.apply(x));
        }
    }
    // Pick orbit representatives along a BFS of the quotient so that the
    // section is connected by trivial-voltage darts (rep(o') = adj(rep(o)));
    // the reconstructed voltage then has its trivial spanning tree.
    let mut reps: Vec<Flag> = vec![0];
    {
        let mut root_seen = std::collections::HashSet::new();
        root_seen.insert(uf.find(0));
        let mut head = 0usize;
        while head < reps.len() {
            let r = reps[head];
            head += 1;
            for i in 0..m.rank() {
                let y = m.adj(i, r);
                let root = uf.find(y);
                if root_seen.insert(root) {
                    reps.push(y);
                }
            }
        }
    }
    // Freeness and the section: every flag is rep·γ for a unique γ.
    let mut decomposition: Vec<(u32, Elem)> = vec![(u32::MAX, gamma.identity()); f];
    let mut hit = vec![false; f];
    for (o, &r) in reps.iter().enumerate() {
        for g in gamma.elements() {
            let img = gamma.apply(g, r)?;
            if hit[img as usize] {
                return Err(VoltageError::NotFreeAction);
            }
            hit[img as usize] = true;
            decomposition[img as usize] = (o as u32, g);
        }
    }
    if hit.iter().any(|&h| !h) {
        // Orbit sizes below |Γ| mean a non-trivial stabilizer somewhere.
        return Err(VoltageError::NotFreeAction);
    }
    // Quotient graph and voltages from the section: the color-i dart of
    // orbit o leads to (o', γ) with adj_i(rep_o) = rep_{o'}·γ, voltage γ.
    let oc = reps.len();
    let mut perms = vec![vec![0u32; oc]; m.rank()];
    let mut xi = vec![vec![gamma.identity(); oc]; m.rank()];
    for (o, &r) in reps.iter().enumerate() {
        for i in 0..m.rank() {
            let y = m.adj(i, r);
            let (o2, g) = decomposition[y as usize];
            perms[i][o] = o2;
            xi[i][o] = g;
        }
    }
    let base = Premaniplex::new(m.rank(), perms)?;
    let voltage = VoltagePremaniplex::new(base, gamma.clone(), xi)?;
    Ok(Quotient {
        voltage,
        flag_decomposition: decomposition,
    })
}
