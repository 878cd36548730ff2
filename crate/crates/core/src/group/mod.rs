//! Finite groups realized by permutations acting freely on a point set.
//!
//! Elements are identified with points of the base orbit (valid because all
//! groups used here act freely); full permutations are stored only for
//! generators, and arithmetic goes through spanning-tree transport words.
//!
//! Composition convention: `compose(g, h)` means "apply g, then h". This
//! matches right actions written as juxtaposition: `p·(gh) = (p·g)·h`.

pub mod presentation;
pub mod todd_coxeter;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("NotFree: point {point} is fixed by the non-identity element {word}")]
    NotFree { point: u32, word: String },
    #[error("ForeignElement: point {0} is not in the base orbit")]
    ForeignElement(u32),
    #[error("DegreeMismatch: generators act on sets of different sizes")]
    DegreeMismatch,
    #[error("NotBijective: generator {0} is not a permutation")]
    NotBijective(usize),
    #[error("LengthMismatch: {0} source generators but {1} targets")]
    LengthMismatch(usize, usize),
    #[error("NoGenerators: at least one generator is required")]
    NoGenerators,
}

/// A permutation of `{0..m-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn new(images: Vec<u32>) -> Option<Perm> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &x in &images {
            if (x as usize) >= m || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm { images })
    }

    pub fn identity(m: usize) -> Perm {
        Perm {
            images: (0..m as u32).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Perm { images: inv }
    }

    /// `self` then `other` (right-action composition order).
    pub fn then(&self, other: &Perm) -> Perm {
        Perm {
            images: self
                .images
                .iter()
                .map(|&y| other.images[y as usize])
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }
}

/// A group element, identified with the image of the base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Elem(pub u32);

/// One letter of a transport word: generator index and direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

/// A finite group given by named generator permutations acting freely on the
/// orbit of a base point.
#[derive(Debug, Clone)]
pub struct FreeActionGroup {
    gen_names: Vec<String>,
    gens: Vec<Perm>,
    inv_gens: Vec<Perm>,
    base: u32,
    /// Orbit points in BFS discovery order; `orbit[0] == base`.
    orbit: Vec<u32>,
    /// point → position in `orbit`, `u32::MAX` when outside.
    pos_of: Vec<u32>,
    /// Per orbit position (except 0): (parent position, BFS move).
    parent: Vec<(u32, Letter)>,
}

impl FreeActionGroup {
    /// Breadth-first closure of the base orbit with deterministic move order
    /// (gen 0, gen 0⁻¹, gen 1, ...). Errors when the action is not free.
    pub fn close(
        gen_names: Vec<String>,
        gens: Vec<Perm>,
        base: u32,
    ) -> Result<FreeActionGroup, GroupError> {
        if gens.is_empty() {
            return Err(GroupError::NoGenerators);
        }
        let degree = gens[0].degree();
        if gens.iter().any(|g| g.degree() != degree) {
            return Err(GroupError::DegreeMismatch);
        }
        if (base as usize) >= degree {
            return Err(GroupError::ForeignElement(base));
        }
        let inv_gens: Vec<Perm> = gens.iter().map(Perm::inverse).collect();
        let mut pos_of = vec![u32::MAX; degree];
        let mut orbit = vec![base];
        let mut parent = vec![(
            0,
            Letter {
                gen: 0,
                inverse: false,
            },
        )];
        pos_of[base as usize] = 0;
        let mut head = 0usize;
        while head < orbit.len() {
            let x = orbit[head];
            for g in 0..gens.len() {
                for (perm, inverse) in [(&gens[g], false), (&inv_gens[g], true)] {
                    let y = perm.apply(x);
                    if pos_of[y as usize] == u32::MAX {
                        pos_of[y as usize] = orbit.len() as u32;
                        orbit.push(y);
                        parent.push((head as u32, Letter { gen: g, inverse }));
                    }
                }
            }
            head += 1;
        }
        let group = FreeActionGroup {
            gen_names,
            gens,
            inv_gens,
            base,
            orbit,
            pos_of,
            parent,
        };
        group.check_free()?;
        Ok(group)
    }

    /// Exact freeness test in O(|orbit|·gens²): for each generator `s`,
    /// propagate the candidate left-multiplication map λ_s (λ_s(base) = base·s,
    /// λ_s(p·t) = λ_s(p)·t along the BFS tree) and verify it commutes with
    /// every generator on the whole orbit. The maps λ_s generate a transitive
    /// system commuting with the action iff the action is free on the orbit.
    fn check_free(&self) -> Result<(), GroupError> {
        let n = self.orbit.len();
        for s in 0..self.gens.len() {
            let lambda = self.left_mul_positions(Elem(self.gens[s].apply(self.base)));
            for pos in 0..n {
                let p = self.orbit[pos];
                let lp = self.orbit[lambda[pos] as usize];
                for t in 0..self.gens.len() {
                    let pt_pos = self.pos_of[self.gens[t].apply(p) as usize] as usize;
                    let lhs = self.orbit[lambda[pt_pos] as usize];
                    let rhs = self.gens[t].apply(lp);
                    if lhs != rhs {
                        return Err(self.freeness_witness());
                    }
                }
            }
        }
        Ok(())
    }

    /// Slow path, only on failure: scan Schreier generators for one that is
    /// non-trivial on the orbit despite fixing the base.
    fn freeness_witness(&self) -> GroupError {
        for pos in 0..self.orbit.len() {
            let p = self.orbit[pos];
            for (g, inverse) in (0..self.gens.len()).flat_map(|g| [(g, false), (g, true)]) {
                let perm = if inverse { &self.inv_gens[g] } else { &self.gens[g] };
                let q = perm.apply(p);
                // Schreier generator w_p · g^{±1} · w_q⁻¹ fixes the base.
                let mut word = self.word_to(pos as u32);
                word.push(Letter { gen: g, inverse });
                let back = self.word_to(self.pos_of[q as usize]);
                word.extend(back.iter().rev().map(|l| Letter {
                    gen: l.gen,
                    inverse: !l.inverse,
                }));
                for &x in &self.orbit {
                    if self.apply_word(&word, x) != x {
                        return GroupError::NotFree {
                            point: x,
                            word: self.format_word(&word),
                        };
                    }
                }
            }
        }
        // check_free failed, so some Schreier generator must be non-trivial;
        // reaching here would indicate an internal inconsistency.
        GroupError::NotFree {
            point: self.base,
            word: "<unidentified>".into(),
        }
    }

    pub fn order(&self) -> usize {
        self.orbit.len()
    }

    pub fn degree(&self) -> usize {
        self.gens[0].degree()
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn generator_perm(&self, i: usize) -> &Perm {
        &self.gens[i]
    }

    pub fn generator(&self, i: usize) -> Elem {
        Elem(self.gens[i].apply(self.base))
    }

    pub fn identity(&self) -> Elem {
        Elem(self.base)
    }

    pub fn is_identity(&self, g: Elem) -> bool {
        g.0 == self.base
    }

    /// Orbit points in BFS order; the element at position `k` is the one
    /// mapping the base to `orbit()[k]`.
    pub fn orbit(&self) -> &[u32] {
        &self.orbit
    }

    pub fn contains_point(&self, p: u32) -> bool {
        (p as usize) < self.pos_of.len() && self.pos_of[p as usize] != u32::MAX
    }

    pub fn elem_at(&self, position: usize) -> Elem {
        Elem(self.orbit[position])
    }

    pub fn position_of(&self, g: Elem) -> Result<usize, GroupError> {
        if !self.contains_point(g.0) {
            return Err(GroupError::ForeignElement(g.0));
        }
        Ok(self.pos_of[g.0 as usize] as usize)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.orbit.iter().map(|&p| Elem(p))
    }

    /// Transport word from the base to orbit position `pos`.
    fn word_to(&self, pos: u32) -> Vec<Letter> {
        let mut word = Vec::new();
        let mut cur = pos;
        while cur != 0 {
            let (par, letter) = self.parent[cur as usize];
            word.push(letter);
            cur = par;
        }
        word.reverse();
        word
    }

    fn apply_word(&self, word: &[Letter], mut x: u32) -> u32 {
        for &l in word {
            let perm = if l.inverse {
                &self.inv_gens[l.gen]
            } else {
                &self.gens[l.gen]
            };
            x = perm.apply(x);
        }
        x
    }

    fn format_word(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        word.iter()
            .map(|l| {
                let name = &self.gen_names[l.gen];
                if l.inverse {
                    format!("{name}^-1")
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Expresses `g` as a word in the generators (spanning-tree transport).
    pub fn word_of(&self, g: Elem) -> Result<Vec<Letter>, GroupError> {
        Ok(self.word_to(self.position_of(g)? as u32))
    }

    pub fn word_string(&self, g: Elem) -> Result<String, GroupError> {
        Ok(self.format_word(&self.word_of(g)?))
    }

    /// Free right action of `g` on any point of the permutation domain.
    pub fn apply(&self, g: Elem, point: u32) -> Result<u32, GroupError> {
        let word = self.word_of(g)?;
        Ok(self.apply_word(&word, point))
    }

    /// `g` then `h`.
    pub fn compose(&self, g: Elem, h: Elem) -> Result<Elem, GroupError> {
        if !self.contains_point(g.0) {
            return Err(GroupError::ForeignElement(g.0));
        }
        Ok(Elem(self.apply(h, g.0)?))
    }

    pub fn inverse(&self, g: Elem) -> Result<Elem, GroupError> {
        let word = self.word_of(g)?;
        let mut x = self.base;
        for l in word.iter().rev() {
            let perm = if l.inverse {
                &self.gens[l.gen]
            } else {
                &self.inv_gens[l.gen]
            };
            x = perm.apply(x);
        }
        Ok(Elem(x))
    }

    /// Left-multiplication table by `g` over orbit positions:
    /// `result[pos(γ)] = pos(g·γ)`. Computed by tree propagation in O(|orbit|).
    pub fn left_mul_positions(&self, g: Elem) -> Vec<u32> {
        let n = self.orbit.len();
        let mut table = vec![u32::MAX; n];
        // g·identity = g.
        table[0] = self.pos_of[g.0 as usize];
        // Positions are in BFS order, so parents are always filled first.
        for pos in 1..n {
            let (par, letter) = self.parent[pos];
            let perm = if letter.inverse {
                &self.inv_gens[letter.gen]
            } else {
                &self.gens[letter.gen]
            };
            let lp = self.orbit[table[par as usize] as usize];
            table[pos] = self.pos_of[perm.apply(lp) as usize];
        }
        table
    }

    /// Right-multiplication table by `g` over orbit positions:
    /// `result[pos(γ)] = pos(γ·g)`.
    pub fn right_mul_positions(&self, g: Elem) -> Result<Vec<u32>, GroupError> {
        let word = self.word_of(g)?;
        Ok(self
            .orbit
            .iter()
            .map(|&p| self.pos_of[self.apply_word(&word, p) as usize])
            .collect())
    }

    /// The full permutation of the domain realized by `g`.
    pub fn full_perm(&self, g: Elem) -> Result<Perm, GroupError> {
        let word = self.word_of(g)?;
        let images = (0..self.degree() as u32)
            .map(|x| self.apply_word(&word, x))
            .collect();
        Ok(Perm { images })
    }

    /// True iff `g² = 1`, `g ≠ 1`, and `g` commutes with every generator.
    pub fn is_central_involution(&self, g: Elem) -> Result<bool, GroupError> {
        if self.is_identity(g) {
            return Ok(false);
        }
        if !self.is_identity(self.compose(g, g)?) {
            return Ok(false);
        }
        for i in 0..self.gens.len() {
            let s = self.generator(i);
            if self.compose(g, s)? != self.compose(s, g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Order of the cyclic subgroup generated by `g`.
    pub fn element_order(&self, g: Elem) -> Result<usize, GroupError> {
        let mut x = g;
        let mut n = 1usize;
        while !self.is_identity(x) {
            x = self.compose(x, g)?;
            n += 1;
        }
        Ok(n)
    }
}

/// True iff `g_i ↦ t_i` extends to a group homomorphism Γ → Δ, where both
/// groups present their elements as free-action groups. Implemented by
/// closing the subgroup of Γ×Δ generated by the pairs `(g_i, t_i)` and
/// checking it has exactly |Γ| elements (graph-of-a-function criterion).
pub fn homomorphism_well_defined(
    source: &FreeActionGroup,
    source_gens: &[Elem],
    target: &FreeActionGroup,
    target_elems: &[Elem],
) -> Result<bool, GroupError> {
    if source_gens.len() != target_elems.len() {
        return Err(GroupError::LengthMismatch(
            source_gens.len(),
            target_elems.len(),
        ));
    }
    // The pairs must generate all of Γ on the left for the criterion below;
    // callers guarantee this (fundamental-cycle voltages generate Γ).
    let src_tables: Vec<Vec<u32>> = source_gens
        .iter()
        .map(|&g| {
            source.position_of(g)?;
            source.right_mul_positions(g)
        })
        .collect::<Result<_, _>>()?;
    let tgt_tables: Vec<Vec<u32>> = target_elems
        .iter()
        .map(|&t| {
            target.position_of(t)?;
            target.right_mul_positions(t)
        })
        .collect::<Result<_, _>>()?;
    let src_inv: Vec<Vec<u32>> = src_tables.iter().map(|t| invert_table(t)).collect();
    let tgt_inv: Vec<Vec<u32>> = tgt_tables.iter().map(|t| invert_table(t)).collect();

    let limit = source.order();
    let mut seen = std::collections::HashSet::with_capacity(limit * 2);
    let start = (0u32, 0u32);
    seen.insert(start);
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some((a, b)) = queue.pop_front() {
        for k in 0..src_tables.len() {
            for (st, tt) in [
                (&src_tables[k], &tgt_tables[k]),
                (&src_inv[k], &tgt_inv[k]),
            ] {
                let next = (st[a as usize], tt[b as usize]);
                if seen.insert(next) {
                    if seen.len() > limit {
                        // More pairs than |Γ|: some γ has two images.
                        return Ok(false);
                    }
                    queue.push_back(next);
                }
            }
        }
    }
    // The closure is the graph of a map Γ ⊇ ⟨g_i⟩ → Δ exactly when no γ
    // appears with two images; with ≤ |Γ| pairs that is automatic.
    let mut first_coords = std::collections::HashSet::with_capacity(seen.len());
    for &(a, _) in &seen {
        if !first_coords.insert(a) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn invert_table(t: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; t.len()];
    for (x, &y) in t.iter().enumerate() {
        inv[y as usize] = x as u32;
    }
    inv
}
