//! Voltage operators: premaniplexes with darts labeled by words in the
//! universal Coxeter group Wⁿ (free product of involutions r_0..r_{n−1}
//! with (r_i r_j)² = 1 for |i−j| > 1).
//!
//! An (n,m)-operator acts on any rank-n premaniplex X through its monodromies:
//! the product X⋊Y has flags (x, y) with r_i(x, y) = (η(^i y)·x, r_i(y)).

use crate::group::Elem;
use crate::premaniplex::{validate, Flag, FlagGraphError, Premaniplex, Validated};
use crate::voltage::{VoltageError, VoltagePremaniplex};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperatorError {
    #[error("RankMismatch: operator expects source rank {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("BadWord: letter r_{letter} out of range for source rank {rank}")]
    BadWord { letter: usize, rank: usize },
    #[error("InverseMismatch: dart ({flag}, {color}) voltages are not inverse words")]
    InverseMismatch { flag: Flag, color: usize },
    #[error("UnknownOperator: {0}")]
    UnknownOperator(String),
    #[error("BadParams: {0}")]
    BadParams(String),
    #[error("flag graph error: {0}")]
    FlagGraph(#[from] FlagGraphError),
    #[error("voltage error: {0}")]
    Voltage(#[from] VoltageError),
}

/// A word in Wⁿ. Letters are color indices; when acting on flags (a left
/// monodromy action) the rightmost letter applies first. Stored reduced by
/// free cancellation of adjacent equal letters only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CoxWord(Vec<u8>);

impl CoxWord {
    pub fn identity() -> CoxWord {
        CoxWord(Vec::new())
    }

    pub fn letter(i: usize) -> CoxWord {
        CoxWord(vec![i as u8])
    }

    pub fn from_letters(letters: &[usize]) -> CoxWord {
        let mut w = CoxWord(letters.iter().map(|&l| l as u8).collect());
        w.cancel();
        w
    }

    pub fn letters(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.0.iter().map(|&l| l as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn cancel(&mut self) {
        let mut out: Vec<u8> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        self.0 = out;
    }

    /// Inverse word: letters are involutions, so just the reverse.
    pub fn inverse(&self) -> CoxWord {
        CoxWord(self.0.iter().rev().copied().collect())
    }

    /// Product `self · other`: with the left action convention
    /// (uv)·x = u·(v·x), so `other` acts first and sits on the right.
    pub fn then_apply_self_after(&self, other: &CoxWord) -> CoxWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        let mut w = CoxWord(v);
        w.cancel();
        w
    }

    /// Normal form under free cancellation plus commutation of letters with
    /// |i−j| > 1 (sorted within commuting runs). Canonical for the short
    /// words used by built-in operators; used only for validation equality.
    pub fn commutation_normal_form(&self) -> CoxWord {
        let mut w = self.0.clone();
        loop {
            let mut changed = false;
            let mut i = 0;
            while i + 1 < w.len() {
                if w[i] == w[i + 1] {
                    w.drain(i..i + 2);
                    changed = true;
                    if i > 0 {
                        i -= 1;
                    }
                } else if w[i] > w[i + 1] && w[i].abs_diff(w[i + 1]) > 1 {
                    w.swap(i, i + 1);
                    changed = true;
                    i += 1;
                } else {
                    i += 1;
                }
            }
            if !changed {
                return CoxWord(w);
            }
        }
    }

    /// Left monodromy action on a flag of `x` (rightmost letter first).
    pub fn apply(&self, x: &Premaniplex, flag: Flag) -> Flag {
        let mut f = flag;
        for &l in self.0.iter().rev() {
            f = x.adj(l as usize, f);
        }
        f
    }

    /// The dart walk realizing `^w x`: starting at `flag`, follow the colors
    /// of the word rightmost-first. Returns the darts in walk order.
    pub fn walk(&self, x: &Premaniplex, flag: Flag) -> Vec<(Flag, usize)> {
        let mut darts = Vec::with_capacity(self.0.len());
        let mut f = flag;
        for &l in self.0.iter().rev() {
            darts.push((f, l as usize));
            f = x.adj(l as usize, f);
        }
        darts
    }
}

/// An (n,m)-voltage operator: rank-m base premaniplex with Wⁿ-word voltages.
#[derive(Debug, Clone)]
pub struct VoltageOperator {
    base: Premaniplex,
    source_rank: usize,
    /// eta[color][flag] = η of the dart (flag, color).
    eta: Vec<Vec<CoxWord>>,
}

impl VoltageOperator {
    pub fn new(
        base: Premaniplex,
        source_rank: usize,
        eta: Vec<Vec<CoxWord>>,
    ) -> Result<VoltageOperator, OperatorError> {
        let m = base.rank();
        let f = base.flag_count();
        if eta.len() != m || eta.iter().any(|row| row.len() != f) {
            return Err(OperatorError::BadParams("voltage table shape".into()));
        }
        for row in &eta {
            for w in row {
                for l in w.letters() {
                    if l >= source_rank {
                        return Err(OperatorError::BadWord {
                            letter: l,
                            rank: source_rank,
                        });
                    }
                }
            }
        }
        for i in 0..m {
            for x in 0..f as Flag {
                let y = base.adj(i, x);
                let fwd = eta[i][x as usize].inverse().commutation_normal_form();
                let back = eta[i][y as usize].commutation_normal_form();
                if fwd != back {
                    return Err(OperatorError::InverseMismatch { flag: x, color: i });
                }
            }
        }
        Ok(VoltageOperator {
            base,
            source_rank,
            eta,
        })
    }

    pub fn base(&self) -> &Premaniplex {
        &self.base
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.base.rank()
    }

    pub fn eta(&self, flag: Flag, color: usize) -> &CoxWord {
        &self.eta[color][flag as usize]
    }
}

/// The operator product X ⋊_η Y, possibly restricted to the component of
/// the base pair (0, 0).
#[derive(Debug, Clone)]
pub struct OperatorProduct {
    pub result: Validated,
    /// true when the full product was disconnected and a component was taken.
    pub disconnected: bool,
    /// component flag → (x-flag, y-flag) pair in the full product.
    pub pairs: Vec<(Flag, Flag)>,
}

fn product_perms(
    x: &Premaniplex,
    o: &VoltageOperator,
) -> Result<Vec<Vec<Flag>>, OperatorError> {
    if x.rank() != o.source_rank {
        return Err(OperatorError::RankMismatch {
            expected: o.source_rank,
            got: x.rank(),
        });
    }
    let fx = x.flag_count();
    let fy = o.base.flag_count();
    let m = o.base.rank();
    let idx = |xf: usize, yf: usize| xf * fy + yf;
    let mut perms = vec![vec![0u32; fx * fy]; m];
    for i in 0..m {
        for yf in 0..fy {
            let w = &o.eta[i][yf];
            let y2 = o.base.adj(i, yf as Flag) as usize;
            for xf in 0..fx {
                let x2 = w.apply(x, xf as Flag) as usize;
                perms[i][idx(xf, yf)] = idx(x2, y2) as u32;
            }
        }
    }
    Ok(perms)
}

/// Component of flag `start` in the graph given by `perms`; returns the
/// flags in BFS order.
fn component(perms: &[Vec<Flag>], start: Flag) -> Vec<Flag> {
    let f = perms[0].len();
    let mut seen = vec![false; f];
    let mut order = vec![start];
    seen[start as usize] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for p in perms {
            let u = p[v as usize];
            if !seen[u as usize] {
                seen[u as usize] = true;
                order.push(u);
            }
        }
    }
    order
}

/// Applies the operator to a premaniplex: r_i(x, y) = (η(^i y)·x, r_i(y)).
pub fn operator_apply(
    x: &Premaniplex,
    o: &VoltageOperator,
) -> Result<OperatorProduct, OperatorError> {
    let perms = product_perms(x, o)?;
    let fy = o.base.flag_count();
    let total = perms[0].len();
    let comp = component(&perms, 0);
    let disconnected = comp.len() != total;
    let (sub_perms, pairs) = restrict(&perms, &comp, fy);
    let result = validate(o.base.rank(), sub_perms)?;
    Ok(OperatorProduct {
        result,
        disconnected,
        pairs,
    })
}

fn restrict(
    perms: &[Vec<Flag>],
    comp: &[Flag],
    fy: usize,
) -> (Vec<Vec<Flag>>, Vec<(Flag, Flag)>) {
    let total = perms[0].len();
    let mut new_id = vec![u32::MAX; total];
    for (k, &v) in comp.iter().enumerate() {
        new_id[v as usize] = k as u32;
    }
    let sub = perms
        .iter()
        .map(|p| comp.iter().map(|&v| new_id[p[v as usize] as usize]).collect())
        .collect();
    let pairs = comp
        .iter()
        .map(|&v| ((v as usize / fy) as Flag, (v as usize % fy) as Flag))
        .collect();
    (sub, pairs)
}

/// Voltage transfer: a voltage assignment θ on X̄⋊Y (X̄ = V.base)
/// with θ(^i(x,y)) = ξ(^{η(^i y)} x), whose derived graph is isomorphic to
/// operator_apply(derived(V), O).
pub fn operator_theta(
    v: &VoltagePremaniplex,
    o: &VoltageOperator,
) -> Result<(VoltagePremaniplex, OperatorProduct), OperatorError> {
    let x = v.base();
    let perms = product_perms(x, o)?;
    let fy = o.base.flag_count();
    let total = perms[0].len();
    let comp = component(&perms, 0);
    let disconnected = comp.len() != total;
    let (sub_perms, pairs) = restrict(&perms, &comp, fy);
    let result = validate(o.base.rank(), sub_perms)?;
    let m = o.base.rank();
    let mut theta = vec![vec![v.group().identity(); pairs.len()]; m];
    for (new_flag, &(xf, yf)) in pairs.iter().enumerate() {
        for (i, theta_row) in theta.iter_mut().enumerate() {
            let walk = o.eta[i][yf as usize].walk(x, xf);
            theta_row[new_flag] = v.path_voltage(&walk)?;
        }
    }
    // The transferred voltages need not carry a trivial spanning tree, so
    // regauge them (derived graph unchanged up to isomorphism).
    crate::voltage::normalize_voltages(result.as_premaniplex(), v.group(), &mut theta)?;
    let voltage =
        VoltagePremaniplex::new(result.as_premaniplex().clone(), v.group().clone(), theta)?;
    Ok((
        voltage,
        OperatorProduct {
            result,
            disconnected,
            pairs,
        },
    ))
}

/// Operator composition: an (n,ℓ)-operator on Y1⋊Y2 with word voltages
/// θ(^i(y1,y2)) = η1(^{η2(^i y2)} y1).
pub fn operator_compose(
    o1: &VoltageOperator,
    o2: &VoltageOperator,
) -> Result<(VoltageOperator, OperatorProduct), OperatorError> {
    if o1.target_rank() != o2.source_rank {
        return Err(OperatorError::RankMismatch {
            expected: o2.source_rank,
            got: o1.target_rank(),
        });
    }
    let y1 = &o1.base;
    let perms = product_perms(y1, o2)?;
    let fy2 = o2.base.flag_count();
    let total = perms[0].len();
    let comp = component(&perms, 0);
    let disconnected = comp.len() != total;
    let (sub_perms, pairs) = restrict(&perms, &comp, fy2);
    let result = validate(o2.base.rank(), sub_perms)?;
    let l = o2.base.rank();
    let mut eta = vec![vec![CoxWord::identity(); pairs.len()]; l];
    for (new_flag, &(y1f, y2f)) in pairs.iter().enumerate() {
        for (i, eta_row) in eta.iter_mut().enumerate() {
            let walk = o2.eta[i][y2f as usize].walk(y1, y1f);
            // ξ(W) = ξ(d_k)···ξ(d_1): later darts multiply on the left.
            let mut acc = CoxWord::identity();
            for &(flag, color) in &walk {
                acc = o1.eta[color][flag as usize].then_apply_self_after(&acc);
            }
            eta_row[new_flag] = acc;
        }
    }
    let op = VoltageOperator::new(result.as_premaniplex().clone(), o1.source_rank, eta)?;
    Ok((
        op,
        OperatorProduct {
            result,
            disconnected,
            pairs,
        },
    ))
}

/// The n-gon flag graph used by family operators: flags L_i = 2i, R_i = 2i+1
/// on edge e_i; color 0 swaps L_i/R_i, color 1 joins R_i to L_{i+1}.
pub fn polygon_perms01(n: usize) -> (Vec<Flag>, Vec<Flag>) {
    let f = 2 * n;
    let mut p0 = vec![0u32; f];
    let mut p1 = vec![0u32; f];
    for i in 0..n {
        p0[2 * i] = (2 * i + 1) as u32;
        p0[2 * i + 1] = (2 * i) as u32;
        let j = (i + 1) % n;
        p1[2 * i + 1] = (2 * j) as u32;
        p1[2 * j] = (2 * i + 1) as u32;
    }
    (p0, p1)
}

/// The standard voltage operators.
pub fn builtin_operator(name: &str, param: Option<usize>) -> Result<VoltageOperator, OperatorError> {
    let one_vertex = |rank: usize, source: usize, words: Vec<CoxWord>| {
        let perms = vec![vec![0u32]; rank];
        let base = Premaniplex::new(rank, perms).expect("one-vertex premaniplex");
        let eta = words.into_iter().map(|w| vec![w]).collect();
        VoltageOperator::new(base, source, eta)
    };
    match name {
        // One vertex, η(^i) = r_{n−1−i}.
        "dual" => {
            let n = param.ok_or_else(|| OperatorError::BadParams("dual needs a rank".into()))?;
            if n < 1 {
                return Err(OperatorError::BadParams("rank must be ≥ 1".into()));
            }
            one_vertex(
                n,
                n,
                (0..n).map(|i| CoxWord::letter(n - 1 - i)).collect(),
            )
        }
        "identity" => {
            let n =
                param.ok_or_else(|| OperatorError::BadParams("identity needs a rank".into()))?;
            one_vertex(n, n, (0..n).map(CoxWord::letter).collect())
        }
        // One vertex, η(^0) = r_2r_0 (apply r_0 first), η(^1) = r_1, η(^2) = r_2.
        "petrial" => one_vertex(
            3,
            3,
            vec![
                CoxWord::from_letters(&[2, 0]),
                CoxWord::letter(1),
                CoxWord::letter(2),
            ],
        ),
        // One vertex, η(^0) = r_0, η(^1) = r_1, η(^2) = r_0r_2 (apply r_2 first).
        "opposite" => one_vertex(
            3,
            3,
            vec![
                CoxWord::letter(0),
                CoxWord::letter(1),
                CoxWord::from_letters(&[0, 2]),
            ],
        ),
        // n-gon with color-2 edges parallel to color-0 edges; the darts on
        // edge e_i carry r_i.
        "family1" => {
            let n = param.ok_or_else(|| OperatorError::BadParams("family1 needs n".into()))?;
            if n < 1 {
                return Err(OperatorError::BadParams("family1 needs n ≥ 1".into()));
            }
            let (p0, p1) = polygon_perms01(n);
            let p2 = p0.clone();
            let base = Premaniplex::new(3, vec![p0, p1, p2])?;
            let f = base.flag_count();
            let mut eta = vec![vec![CoxWord::identity(); f]; 3];
            for i in 0..n {
                eta[2][2 * i] = CoxWord::letter(i);
                eta[2][2 * i + 1] = CoxWord::letter(i);
            }
            VoltageOperator::new(base, n, eta)
        }
        // Same but with color-2 semi-edges: rank-3 case is the barycentric
        // subdivision.
        "family1_prime" => {
            let n =
                param.ok_or_else(|| OperatorError::BadParams("family1_prime needs n".into()))?;
            if n < 1 {
                return Err(OperatorError::BadParams("family1_prime needs n ≥ 1".into()));
            }
            let (p0, p1) = polygon_perms01(n);
            let p2 = (0..2 * n as u32).collect();
            let base = Premaniplex::new(3, vec![p0, p1, p2])?;
            let f = base.flag_count();
            let mut eta = vec![vec![CoxWord::identity(); f]; 3];
            for i in 0..n {
                eta[2][2 * i] = CoxWord::letter(i);
                eta[2][2 * i + 1] = CoxWord::letter(i);
            }
            VoltageOperator::new(base, n, eta)
        }
        // 2k-gon with color-2 edges parallel to color-0 edges, darts on edge
        // e_i carrying r_{i+1}, and r_0 on the color-1 edge closing the
        // polygon.  Applied to a flag graph with two flag orbits the product
        // doubles the polygon, which is how the 4k-gonal facets arise.
        "family2" | "family2_prime" => {
            let k = param.ok_or_else(|| OperatorError::BadParams("family2 needs k".into()))?;
            if k < 1 {
                return Err(OperatorError::BadParams("family2 needs k ≥ 1".into()));
            }
            let n = 2 * k;
            let source = 2 * k + 1;
            let (p0, p1) = polygon_perms01(n);
            let p2 = if name == "family2" {
                p0.clone()
            } else {
                (0..2 * n as u32).collect() // semi-edges
            };
            let base = Premaniplex::new(3, vec![p0, p1, p2])?;
            let f = base.flag_count();
            let mut eta = vec![vec![CoxWord::identity(); f]; 3];
            for i in 0..n {
                eta[2][2 * i] = CoxWord::letter(i + 1);
                eta[2][2 * i + 1] = CoxWord::letter(i + 1);
            }
            // Closing color-1 edge: darts (R_{2k−1}, 1) and (L_0, 1).
            eta[1][2 * (n - 1) + 1] = CoxWord::letter(0);
            eta[1][0] = CoxWord::letter(0);
            VoltageOperator::new(base, source, eta)
        }
        other => Err(OperatorError::UnknownOperator(other.into())),
    }
}

/// Substitutes group elements for the letters of every η-word, turning an
/// operator base into a voltage premaniplex over `group`: every occurrence
/// of the letter r_i is replaced by the chosen generator image.
pub fn substitute_letters(
    o: &VoltageOperator,
    group: &crate::group::FreeActionGroup,
    images: &[Elem],
) -> Result<VoltagePremaniplex, OperatorError> {
    if images.len() != o.source_rank {
        return Err(OperatorError::BadParams(format!(
            "need {} letter images, got {}",
            o.source_rank,
            images.len()
        )));
    }
    let f = o.base.flag_count();
    let m = o.base.rank();
    let mut xi = vec![vec![group.identity(); f]; m];
    for i in 0..m {
        for x in 0..f {
            // Word product u_1…u_ℓ (rightmost acts first on flags) maps to
            // the group element acting on the right in the same order, i.e.
            // the path product: accumulate leftmost letter last.
            let mut acc = group.identity();
            for l in o.eta[i][x].letters().rev() {
                acc = group
                    .compose(images[l], acc)
                    .map_err(VoltageError::Group)?;
            }
            xi[i][x] = acc;
        }
    }
    Ok(VoltagePremaniplex::new(
        o.base.clone(),
        group.clone(),
        xi,
    )?)
}
