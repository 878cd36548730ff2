//! Todd–Coxeter coset enumeration, HLT strategy.
//!
//! Deterministic: cosets are processed in creation order, relators in file
//! order, and gaps are filled at the first undefined position; the final
//! table is renumbered by BFS from coset 0 with columns in generator order,
//! so coset ids are stable across runs.

use super::presentation::{GenLetter, Presentation};
use super::Perm;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TcError {
    #[error("Incomplete: coset limit {0} exceeded")]
    Incomplete(usize),
    #[error("EmptyPresentation")]
    EmptyPresentation,
}

/// A complete coset table. With a trivial subgroup this is the regular
/// representation: coset 0 is the identity and column `g` is right
/// multiplication by generator `g`.
#[derive(Debug, Clone)]
pub struct CosetTable {
    gen_count: usize,
    /// cosets × (2·gen_count), column 2g = generator g, 2g+1 = its inverse.
    table: Vec<u32>,
    cosets: usize,
}

impl CosetTable {
    pub fn coset_count(&self) -> usize {
        self.cosets
    }

    pub fn gen_count(&self) -> usize {
        self.gen_count
    }

    /// `coset · g^{±1}`.
    pub fn apply(&self, coset: u32, gen: usize, inverse: bool) -> u32 {
        let col = 2 * gen + usize::from(inverse);
        self.table[coset as usize * 2 * self.gen_count + col]
    }

    pub fn apply_letter(&self, coset: u32, l: GenLetter) -> u32 {
        self.apply(coset, l.gen, l.inverse)
    }

    /// Right multiplication by generator `g` as a permutation of cosets.
    pub fn right_mul_perm(&self, gen: usize) -> Perm {
        Perm::new(
            (0..self.cosets as u32)
                .map(|c| self.apply(c, gen, false))
                .collect(),
        )
        .expect("complete table columns are permutations")
    }

    /// Left multiplication by generator `g` as a permutation of cosets,
    /// computed by propagation: L(0) = 0·g, L(c·t) = L(c)·t.
    pub fn left_mul_perm(&self, gen: usize) -> Perm {
        let n = self.cosets;
        let mut images = vec![u32::MAX; n];
        images[0] = self.apply(0, gen, false);
        // Canonical numbering is a BFS order from 0, so scanning cosets in
        // increasing order always finds a defined predecessor.
        let mut pending = n - 1;
        while pending > 0 {
            let before = pending;
            for c in 0..n as u32 {
                if images[c as usize] == u32::MAX {
                    continue;
                }
                for g in 0..self.gen_count {
                    for inv in [false, true] {
                        let d = self.apply(c, g, inv);
                        if images[d as usize] == u32::MAX {
                            images[d as usize] = self.apply(images[c as usize], g, inv);
                            pending -= 1;
                        }
                    }
                }
            }
            assert!(pending < before, "table not connected");
        }
        Perm::new(images).expect("left multiplication is a permutation")
    }
}

struct Enumerator {
    ncols: usize,
    table: Vec<i32>,
    /// Union-find over cosets; p[c] <= c, and c is live iff p[c] == c.
    p: Vec<u32>,
    live: usize,
    max_cosets: usize,
}

impl Enumerator {
    fn new(gen_count: usize, max_cosets: usize) -> Self {
        Enumerator {
            ncols: 2 * gen_count,
            table: vec![-1; 2 * gen_count],
            p: vec![0],
            live: 1,
            max_cosets,
        }
    }

    fn ncosets(&self) -> usize {
        self.p.len()
    }

    fn get(&self, c: u32, col: usize) -> i32 {
        self.table[c as usize * self.ncols + col]
    }

    fn set(&mut self, c: u32, col: usize, v: i32) {
        self.table[c as usize * self.ncols + col] = v;
    }

    fn rep(&mut self, mut c: u32) -> u32 {
        while self.p[c as usize] != c {
            c = self.p[c as usize];
        }
        c
    }

    fn define(&mut self, alpha: u32, col: usize) -> Result<u32, TcError> {
        if self.live >= self.max_cosets {
            return Err(TcError::Incomplete(self.max_cosets));
        }
        let beta = self.p.len() as u32;
        self.p.push(beta);
        self.table.extend(std::iter::repeat(-1).take(self.ncols));
        self.live += 1;
        self.set(alpha, col, beta as i32);
        self.set(beta, col ^ 1, alpha as i32);
        Ok(beta)
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let ra = self.rep(a);
        let rb = self.rep(b);
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.p[hi as usize] = lo;
        self.live -= 1;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        while let Some(gamma) = queue.pop() {
            for col in 0..self.ncols {
                let delta = self.get(gamma, col);
                if delta < 0 {
                    continue;
                }
                let delta = delta as u32;
                // Drop the paired entry; gamma's row is being retired.
                self.set(delta, col ^ 1, -1);
                self.set(gamma, col, -1);
                let mu = self.rep(gamma);
                let nu = self.rep(delta);
                let existing = self.get(mu, col);
                if existing >= 0 {
                    self.merge(nu, existing as u32, &mut queue);
                } else {
                    let back = self.get(nu, col ^ 1);
                    if back >= 0 {
                        self.merge(mu, back as u32, &mut queue);
                    } else {
                        self.set(mu, col, nu as i32);
                        self.set(nu, col ^ 1, mu as i32);
                    }
                }
            }
        }
    }

    /// Scans relator `w` (as column indices) at coset `alpha`, defining new
    /// cosets to fill the gap (HLT).
    fn scan_and_fill(&mut self, alpha: u32, w: &[usize]) -> Result<(), TcError> {
        let mut f = alpha;
        let mut i = 0usize;
        let mut b = alpha;
        let mut j = w.len();
        loop {
            while i < j {
                let next = self.get(f, w[i]);
                if next < 0 {
                    break;
                }
                f = next as u32;
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                let prev = self.get(b, w[j - 1] ^ 1);
                if prev < 0 {
                    break;
                }
                b = prev as u32;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.set(f, w[i], b as i32);
                self.set(b, w[i] ^ 1, f as i32);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// Enumerates cosets of the subgroup generated by `subgroup_words` in the
/// presented group, up to `max_cosets` live cosets.
pub fn todd_coxeter(
    pres: &Presentation,
    subgroup_words: &[Vec<GenLetter>],
    max_cosets: usize,
) -> Result<CosetTable, TcError> {
    if pres.generator_names.is_empty() {
        return Err(TcError::EmptyPresentation);
    }
    let gen_count = pres.generator_names.len();
    let col = |l: &GenLetter| 2 * l.gen + usize::from(l.inverse);
    let relator_cols: Vec<Vec<usize>> = pres.relators.iter().map(|r| r.iter().map(col).collect()).collect();
    let subgroup_cols: Vec<Vec<usize>> = subgroup_words.iter().map(|r| r.iter().map(col).collect()).collect();

    let mut e = Enumerator::new(gen_count, max_cosets);
    for w in &subgroup_cols {
        e.scan_and_fill(0, w)?;
    }
    let mut alpha = 0u32;
    while (alpha as usize) < e.ncosets() {
        if e.rep(alpha) != alpha {
            alpha += 1;
            continue;
        }
        let mut died = false;
        for w in &relator_cols {
            e.scan_and_fill(alpha, w)?;
            if e.rep(alpha) != alpha {
                died = true;
                break;
            }
        }
        if !died {
            for colx in 0..e.ncols {
                if e.get(alpha, colx) < 0 {
                    e.define(alpha, colx)?;
                }
            }
        }
        alpha += 1;
    }

    // Canonical renumbering: BFS from coset 0, columns in order.
    let root = e.rep(0);
    let mut number = vec![u32::MAX; e.ncosets()];
    let mut order = vec![root];
    number[root as usize] = 0;
    let mut head = 0usize;
    while head < order.len() {
        let c = order[head];
        head += 1;
        for colx in 0..e.ncols {
            let d = e.get(c, colx);
            debug_assert!(d >= 0, "HLT leaves live rows complete");
            let d = d as u32;
            if number[d as usize] == u32::MAX {
                number[d as usize] = order.len() as u32;
                order.push(d);
            }
        }
    }
    let cosets = order.len();
    let mut table = vec![0u32; cosets * e.ncols];
    for (new_c, &old_c) in order.iter().enumerate() {
        for colx in 0..e.ncols {
            table[new_c * e.ncols + colx] = number[e.get(old_c, colx) as usize];
        }
    }
    Ok(CosetTable {
        gen_count,
        table,
        cosets,
    })
}
