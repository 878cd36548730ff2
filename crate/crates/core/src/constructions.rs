//! Catalog builders, classical polytopes from presentations, and the
//! family-1 / family-2 / alternating / higher-rank pipelines.

use crate::analysis::{self, automorphisms, classify, Classification, DualityType};
use crate::group::presentation::{parse_word, Presentation, PresentationError};
use crate::group::todd_coxeter::{todd_coxeter, TcError};
use crate::group::{Elem, FreeActionGroup, GroupError, Perm};
use crate::operators::{builtin_operator, operator_theta, polygon_perms01, OperatorError};
use crate::premaniplex::{validate, Flag, FlagGraphError, Premaniplex, Validated};
use crate::voltage::{quotient, Cover, VoltageError, VoltagePremaniplex};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("flag graph error: {0}")]
    FlagGraph(#[from] FlagGraphError),
    #[error("group error: {0}")]
    Group(#[from] GroupError),
    #[error("presentation error: {0}")]
    Presentation(#[from] PresentationError),
    #[error("coset enumeration error: {0}")]
    Tc(#[from] TcError),
    #[error("voltage error: {0}")]
    Voltage(#[from] VoltageError),
    #[error("operator error: {0}")]
    Operator(#[from] OperatorError),
    #[error("analysis error: {0}")]
    Analysis(#[from] analysis::AnalysisError),
    #[error("input is not a regular maniplex")]
    NotRegular,
    #[error("input is not chiral (a reflection exists)")]
    NotChiral,
    #[error("rank must be odd for this construction")]
    RankNotOdd,
    #[error("sigma is not a central involution of the facet group")]
    SigmaNotCentral,
    #[error("facets are not mutually isomorphic")]
    FacetsNotIsomorphic,
    #[error("the extended graph minus color 0 is disconnected")]
    XZeroDisconnected,
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
}

// ---------------------------------------------------------------------------
// Small catalog premaniplexes
// ---------------------------------------------------------------------------

/// The n-gon as a 2-maniplex (2n flags).
pub fn catalog_polygon(n: usize) -> Result<Validated, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::BadParams("polygon needs n ≥ 1".into()));
    }
    let (p0, p1) = polygon_perms01(n);
    Ok(validate(2, vec![p0, p1])?)
}

/// One flag with a semi-edge of every color.
pub fn catalog_one_n(n: usize) -> Result<Validated, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::BadParams("rank must be ≥ 1".into()));
    }
    Ok(validate(n, vec![vec![0]; n])?)
}

/// Two flags; colors in `semi` are semi-edges at both flags, all other
/// colors join the two flags.
pub fn catalog_two_n(n: usize, semi: &[usize]) -> Result<Validated, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::BadParams("rank must be ≥ 1".into()));
    }
    if semi.iter().any(|&c| c >= n) {
        return Err(ConstructionError::BadParams("semi-edge color out of range".into()));
    }
    let perms = (0..n)
        .map(|c| if semi.contains(&c) { vec![0, 1] } else { vec![1, 0] })
        .collect();
    Ok(validate(n, perms)?)
}

/// Rank-3 premaniplex: an n-gon in colors 0/1 with color-2 edges parallel
/// to the color-0 edges.
pub fn catalog_family1_pm(n: usize) -> Result<Premaniplex, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::BadParams("needs n ≥ 1".into()));
    }
    let (p0, p1) = polygon_perms01(n);
    let p2 = p0.clone();
    Ok(Premaniplex::new(3, vec![p0, p1, p2])?)
}

/// Rank-3 premaniplex on a 4k-gon with color-2 edges joining each flag of
/// edge e_i to the 0-adjacent flag of the opposite edge e_{2k+i}.
pub fn catalog_family2_pm(sides: usize) -> Result<Premaniplex, ConstructionError> {
    if sides == 0 || sides % 4 != 0 {
        return Err(ConstructionError::BadParams(
            "side count must be a positive multiple of 4".into(),
        ));
    }
    let n = sides;
    let (p0, p1) = polygon_perms01(n);
    let mut p2 = vec![0u32; 2 * n];
    for i in 0..n {
        let j = (i + n / 2) % n;
        p2[2 * i] = (2 * j + 1) as u32;
        p2[2 * i + 1] = (2 * j) as u32;
    }
    Ok(Premaniplex::new(3, vec![p0, p1, p2])?)
}

/// The sporadic 4-flag premaniplex: a digon with color-2 edges between
/// opposite flags.
pub fn catalog_sporadic_xs() -> Result<Premaniplex, ConstructionError> {
    let (p0, p1) = polygon_perms01(2);
    let p2 = vec![2, 3, 0, 1];
    Ok(Premaniplex::new(3, vec![p0, p1, p2])?)
}

// ---------------------------------------------------------------------------
// Regular polytopes from presentations
// ---------------------------------------------------------------------------

/// A maniplex together with its automorphism group acting (freely and, for
/// honest regular polytopes, regularly) on the flags; generator i is the
/// automorphism mapping the base flag to its i-adjacent flag.
#[derive(Debug, Clone)]
pub struct RegularPolytope {
    pub flag_graph: Validated,
    pub group: FreeActionGroup,
}

impl RegularPolytope {
    pub fn premaniplex(&self) -> &Premaniplex {
        self.flag_graph.as_premaniplex()
    }

    pub fn rank(&self) -> usize {
        self.premaniplex().rank()
    }

    pub fn rho(&self, i: usize) -> Elem {
        self.group.generator(i)
    }
}

/// Flags = cosets of the trivial subgroup: color-i adjacency is left
/// multiplication by generator i, the automorphism ρ_i is right
/// multiplication.
pub fn regular_polytope(
    pres: &Presentation,
    max_cosets: usize,
) -> Result<RegularPolytope, ConstructionError> {
    let table = todd_coxeter(pres, &[], max_cosets)?;
    let g = table.gen_count();
    let perms: Vec<Vec<Flag>> = (0..g)
        .map(|i| table.left_mul_perm(i).images().to_vec())
        .collect();
    let flag_graph = validate(g, perms)?;
    let rho: Vec<Perm> = (0..g).map(|i| table.right_mul_perm(i)).collect();
    let group = FreeActionGroup::close(pres.generator_names.clone(), rho, 0)?;
    Ok(RegularPolytope { flag_graph, group })
}

pub fn regular_polytope_schlafli(
    orders: &[usize],
    max_cosets: usize,
) -> Result<RegularPolytope, ConstructionError> {
    if orders.is_empty() || orders.iter().any(|&p| p == 0) {
        return Err(ConstructionError::BadParams(
            "Schläfli symbol needs positive entries".into(),
        ));
    }
    regular_polytope(&Presentation::coxeter_string(orders), max_cosets)
}

/// Recovers the distinguished generators ρ_i from a regular maniplex given
/// only as a flag graph.
pub fn regular_from_maniplex(m: &Premaniplex) -> Result<RegularPolytope, ConstructionError> {
    let aut = automorphisms(m);
    if !aut.is_regular() {
        return Err(ConstructionError::NotRegular);
    }
    let base = aut.group.base();
    let names: Vec<String> = (0..m.rank()).map(|i| format!("r{i}")).collect();
    let mut gens = Vec::with_capacity(m.rank());
    for i in 0..m.rank() {
        let g = Elem(m.adj(i, base));
        gens.push(aut.group.full_perm(g)?);
    }
    let group = FreeActionGroup::close(names, gens, base)?;
    Ok(RegularPolytope {
        flag_graph: validate(m.rank(), m.perms().to_vec())?,
        group,
    })
}

/// The regular map {2, k} with k digonal faces (4k flags).
pub fn hosohedron(k: usize) -> Result<RegularPolytope, ConstructionError> {
    if k < 2 {
        return Err(ConstructionError::BadParams("hosohedron needs k ≥ 2".into()));
    }
    regular_polytope_schlafli(&[2, k], 100 * k + 100)
}

/// The antipodal quotient of {2, 2k}: the unique central involution of the
/// automorphism group whose orbit premaniplex is a non-orientable maniplex.
pub fn hemi_hosohedron(k: usize) -> Result<Validated, ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::BadParams("needs k ≥ 1".into()));
    }
    let full = regular_polytope_schlafli(&[2, 2 * k], 400 * k + 400)?;
    let m = full.premaniplex();
    for g in full.group.elements() {
        if !full.group.is_central_involution(g)? {
            continue;
        }
        let perm = full.group.full_perm(g)?;
        let sub = FreeActionGroup::close(vec!["z".into()], vec![perm], 0)?;
        let q = match quotient(m, &sub) {
            Ok(q) => q,
            Err(_) => continue,
        };
        let v = validate(3, q.voltage.base().perms().to_vec())?;
        if !v.is_maniplex() {
            continue;
        }
        if let Ok(report) = v.as_premaniplex().orientability() {
            if !report.orientable {
                return Ok(v);
            }
        }
    }
    Err(ConstructionError::BadParams(
        "no antipodal quotient found".into(),
    ))
}

// ---------------------------------------------------------------------------
// Chiral polytopes
// ---------------------------------------------------------------------------

/// A group Γ acting freely on the flags of a chiral polytope (or realized
/// abstractly on itself), with the distinguished elements τ_i: τ_0 = 1 and
/// τ_i maps the base flag Φ to r_i r_0 Φ.
#[derive(Debug, Clone)]
pub struct ChiralGroup {
    pub group: FreeActionGroup,
    pub taus: Vec<Elem>,
    pub rank: usize,
}

/// Two flags joined by one edge of every color, with voltage τ_i on the
/// color-i darts leaving the base vertex.
pub fn nu_voltage(cg: &ChiralGroup) -> Result<VoltagePremaniplex, ConstructionError> {
    let base = catalog_two_n(cg.rank, &[])?.premaniplex();
    let mut xi = vec![vec![cg.group.identity(); 2]; cg.rank];
    for i in 0..cg.rank {
        xi[i][0] = cg.taus[i];
        xi[i][1] = cg.group.inverse(cg.taus[i])?;
    }
    Ok(VoltagePremaniplex::new(base, cg.group.clone(), xi)?)
}

/// Builds a chiral polytope from a presentation of its rotation group on
/// generators σ_1..σ_{n−1}: the flag graph is the derived graph of the
/// two-vertex voltage premaniplex above. Errors with NotChiral when the
/// vertex-swap of the base lifts (the group admits the reflection).
pub fn chiral_polytope(
    pres: &Presentation,
    max_cosets: usize,
) -> Result<(Cover, ChiralGroup), ConstructionError> {
    let table = todd_coxeter(pres, &[], max_cosets)?;
    let g = table.gen_count();
    let rank = g + 1;
    let sigma: Vec<Perm> = (0..g).map(|i| table.right_mul_perm(i)).collect();
    let group = FreeActionGroup::close(pres.generator_names.clone(), sigma, 0)?;
    // τ_i = σ_i⁻¹ σ_{i−1}⁻¹ ⋯ σ_1⁻¹ (σ_i⁻¹ applied first).
    let mut taus = vec![group.identity()];
    for i in 0..g {
        let inv = group.inverse(group.generator(i))?;
        taus.push(group.compose(inv, taus[i])?);
    }
    let provisional = ChiralGroup {
        group: group.clone(),
        taus,
        rank,
    };
    let v = nu_voltage(&provisional)?;
    if v.lift_check(&[1, 0])? {
        return Err(ConstructionError::NotChiral);
    }
    let cover = v.derived_graph()?;
    // Re-extract the τ's from the flag graph so that they are exactly the
    // automorphisms with Φ ↦ r_i r_0 Φ under the group's own composition
    // convention (the fiber over the base vertex is indexed by Γ).
    let total = cover.total_premaniplex();
    let mut taus = vec![group.identity()];
    for i in 1..rank {
        let image = total.adj(i, total.adj(0, 0));
        debug_assert_eq!(cover.project(image), 0);
        taus.push(group.elem_at(cover.fiber_position(image)));
    }
    Ok((cover, ChiralGroup { group, taus, rank }))
}

/// Recovers the rotation data from a chiral maniplex given as a flag graph:
/// Γ is the full automorphism group and τ_i is the automorphism with
/// base-flag image r_i r_0 Φ.
pub fn chiral_from_maniplex(m: &Premaniplex) -> Result<ChiralGroup, ConstructionError> {
    let aut = automorphisms(m);
    if classify(m, &aut) != Classification::Chiral {
        return Err(ConstructionError::NotChiral);
    }
    let base = aut.group.base();
    let mut taus = vec![aut.group.identity()];
    for i in 1..m.rank() {
        let target = m.adj(i, m.adj(0, base));
        if !aut.group.contains_point(target) {
            return Err(ConstructionError::NotChiral);
        }
        taus.push(Elem(target));
    }
    Ok(ChiralGroup {
        group: aut.group,
        taus,
        rank: m.rank(),
    })
}

// ---------------------------------------------------------------------------
// Family 1 / family 2 / alternating / higher rank
// ---------------------------------------------------------------------------

/// Hypotheses of the family constructions, evaluated and reported; failures
/// warn rather than abort, since the constructions still run (with larger
/// facet stabilizers).
#[derive(Debug, Clone, Serialize)]
pub struct ConstructionPreconditions {
    pub non_degenerate: bool,
    pub non_self_dual: bool,
    pub simple_petrie: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_odd: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_bound: Option<bool>,
    pub warnings: Vec<String>,
}

/// The family-1 voltage graph for a rank-n regular polytope: the n-gon base
/// with a color-2 edge on each polygon edge e_i carrying ρ_i.
pub fn family1_voltage(p: &RegularPolytope) -> Result<VoltagePremaniplex, ConstructionError> {
    let n = p.rank();
    let base = catalog_family1_pm(n)?;
    let f = base.flag_count();
    let mut xi = vec![vec![p.group.identity(); f]; 3];
    for i in 0..n {
        xi[2][2 * i] = p.rho(i);
        xi[2][2 * i + 1] = p.rho(i);
    }
    Ok(VoltagePremaniplex::new(base, p.group.clone(), xi)?)
}

pub fn build_family1(
    p: &RegularPolytope,
) -> Result<(Cover, ConstructionPreconditions), ConstructionError> {
    let pm = p.premaniplex();
    let aut = automorphisms(pm);
    let non_degenerate = !pm.is_degenerate();
    let non_self_dual = analysis::self_duality(pm, &aut) == DualityType::NotSelfDual;
    let simple_petrie = pm.petrie_polygons().all_simple();
    let mut warnings = Vec::new();
    if !non_degenerate {
        warnings.push("input polytope is degenerate".into());
    }
    if !non_self_dual {
        warnings.push(
            "input polytope is self-dual; the output facet stabilizer will be non-trivial".into(),
        );
    }
    if !simple_petrie {
        warnings.push("input polytope has non-simple Petrie polygons".into());
    }
    let cover = family1_voltage(p)?.derived_graph()?;
    Ok((
        cover,
        ConstructionPreconditions {
            non_degenerate,
            non_self_dual,
            simple_petrie,
            rank_odd: None,
            k_bound: None,
            warnings,
        },
    ))
}

/// The family-2 voltage graph for a chiral (2k+1)-polytope: the 4k-gon base
/// with color-2 cross edges where the darts leaving edge e_i carry τ_{i+1}
/// for i < 2k.
pub fn family2_voltage(cg: &ChiralGroup) -> Result<VoltagePremaniplex, ConstructionError> {
    if cg.rank % 2 == 0 {
        return Err(ConstructionError::RankNotOdd);
    }
    let k = (cg.rank - 1) / 2;
    if k == 0 {
        return Err(ConstructionError::BadParams("rank must be ≥ 3".into()));
    }
    let n = 4 * k;
    let base = catalog_family2_pm(n)?;
    let f = base.flag_count();
    let mut xi = vec![vec![cg.group.identity(); f]; 3];
    for i in 0..2 * k {
        let t = cg.taus[i + 1];
        let t_inv = cg.group.inverse(t)?;
        xi[2][2 * i] = t;
        xi[2][2 * i + 1] = t;
        let j = i + 2 * k;
        xi[2][2 * j] = t_inv;
        xi[2][2 * j + 1] = t_inv;
    }
    Ok(VoltagePremaniplex::new(base, cg.group.clone(), xi)?)
}

/// `p_flags` is the flag graph of the chiral polytope itself, used to
/// evaluate the Petrie precondition.
pub fn build_family2(
    p_flags: &Premaniplex,
    cg: &ChiralGroup,
) -> Result<(Cover, ConstructionPreconditions), ConstructionError> {
    let v = family2_voltage(cg)?;
    let k = (cg.rank - 1) / 2;
    let simple_petrie = p_flags.petrie_polygons().all_simple();
    let k_bound = k >= 2;
    let mut warnings = Vec::new();
    if !simple_petrie {
        warnings.push("input polytope has non-simple Petrie polygons".into());
    }
    if !k_bound {
        warnings.push(
            "k = 1: a base reflection lifts and the facet stabilizer is non-trivial".into(),
        );
    }
    let cover = v.derived_graph()?;
    Ok((
        cover,
        ConstructionPreconditions {
            non_degenerate: !p_flags.is_degenerate(),
            non_self_dual: true,
            simple_petrie,
            rank_odd: Some(cg.rank % 2 == 1),
            k_bound: Some(k_bound),
            warnings,
        },
    ))
}

/// The alternating construction: the family-1 operator applied to the
/// two-vertex voltage presentation of a chiral n-polytope. The base of the
/// resulting voltage graph is two n-gons with crossed color-2 edges.
pub fn build_alternating(cg: &ChiralGroup) -> Result<Cover, ConstructionError> {
    let v = nu_voltage(cg)?;
    let op = builtin_operator("family1", Some(cg.rank))?;
    let (theta, _product) = operator_theta(&v, &op)?;
    Ok(theta.derived_graph()?)
}

#[derive(Debug, Clone, Serialize)]
pub struct AlternatingReport {
    pub facet_orbit_count: usize,
    /// Every pair of facets sharing a ridge lies in different orbits.
    pub edges_between_orbits: bool,
    pub polytope: bool,
    pub facet_stabilizers_trivial: bool,
    pub duality_type: DualityType,
}

/// Full report for the alternating construction; `duality_type` is the
/// self-duality kind of the input chiral polytope, computed by the caller.
pub fn alternating_report(
    cover: &Cover,
    duality_type: DualityType,
) -> Result<AlternatingReport, ConstructionError> {
    let report = analysis::analyze_cover(cover)?;
    let stg = crate::io::parse_premaniplex(&report.stg)
        .expect("report embeds a valid premaniplex")
        .premaniplex();
    let n = stg.rank();
    let stg_facets = stg.faces(n - 1)?;
    let facet_orbit_count = stg_facets.face_count();
    let edges_between_orbits = (0..stg.flag_count() as Flag).all(|o| {
        stg_facets.component_id[o as usize] != stg_facets.component_id[stg.adj(n - 1, o) as usize]
    });
    Ok(AlternatingReport {
        facet_orbit_count,
        edges_between_orbits,
        polytope: report.polytope,
        facet_stabilizers_trivial: report.facet_stabilizer_orders.iter().all(|&s| s == 1),
        duality_type,
    })
}

/// Extends a regular n-maniplex M by a color n: each flag is joined to its
/// opposite in its facet (transport to the reference facet K, apply the
/// central involution `sigma` of Γ(K), transport back), then color-n darts
/// in the i-th facet receive voltage ρ_i from the rank-N regular polytope
/// `p`, where N is the facet count of M.
pub fn build_higher_rank(
    m: &Premaniplex,
    sigma_word: &str,
    p: &RegularPolytope,
) -> Result<Cover, ConstructionError> {
    let n = m.rank();
    if n < 2 {
        return Err(ConstructionError::BadParams("rank must be ≥ 2".into()));
    }
    let facets = m.faces(n - 1)?;
    let facet_count = facets.face_count();
    let colors: Vec<usize> = (0..n - 1).collect();
    let (k_graph, k_members) = analysis::face_subgraph(m, &facets, 0, &colors)?;
    let k_reg = regular_from_maniplex(&k_graph)?;
    // σ as an element of Γ(K), given as a word in r0..r_{n-2}.
    let letters = parse_word(sigma_word, k_reg.group.generator_names(), 0)?;
    let mut sigma = k_reg.group.identity();
    for l in letters {
        let mut g = k_reg.group.generator(l.gen);
        if l.inverse {
            g = k_reg.group.inverse(g)?;
        }
        sigma = k_reg.group.compose(sigma, g)?;
    }
    if !k_reg.group.is_central_involution(sigma)? {
        return Err(ConstructionError::SigmaNotCentral);
    }
    let sigma_perm = k_reg.group.full_perm(sigma)?;
    // Map each facet back to K and conjugate σ through the transport.
    let mut perm_n = vec![0u32; m.flag_count()];
    let mut facet_of = vec![0u32; m.flag_count()];
    for face in 0..facet_count as u32 {
        let (sub, members) = if face == 0 {
            (k_graph.clone(), k_members.clone())
        } else {
            analysis::face_subgraph(m, &facets, face, &colors)?
        };
        let iso = k_graph
            .isomorphism(&sub)?
            .ok_or(ConstructionError::FacetsNotIsomorphic)?;
        // Global flag of K-flag j is members[iso[j]].
        let mut local_of = std::collections::HashMap::new();
        for (j, &img) in iso.iter().enumerate() {
            local_of.insert(members[img as usize], j as u32);
        }
        for (&global, &kflag) in &local_of {
            let opp = iso[sigma_perm.apply(kflag) as usize];
            perm_n[global as usize] = members[opp as usize];
            facet_of[global as usize] = face;
        }
    }
    let mut perms = m.perms().to_vec();
    perms.push(perm_n);
    let x = Premaniplex::new(n + 1, perms)?;
    let all_but_zero: Vec<usize> = (1..=n).collect();
    if x.components_under(&all_but_zero).face_count() != 1 {
        return Err(ConstructionError::XZeroDisconnected);
    }
    if p.rank() != facet_count {
        return Err(ConstructionError::RankMismatch {
            expected: facet_count,
            got: p.rank(),
        });
    }
    let f = x.flag_count();
    let mut xi = vec![vec![p.group.identity(); f]; n + 1];
    for flag in 0..f {
        xi[n][flag] = p.rho(facet_of[flag] as usize);
    }
    let v = VoltagePremaniplex::new(x, p.group.clone(), xi)?;
    Ok(v.derived_graph()?)
}

// ---------------------------------------------------------------------------
// A small chiral map for tests and catalog coverage
// ---------------------------------------------------------------------------

/// Builds a rank-3 maniplex from a face list: every face is a cyclic vertex
/// sequence and every edge must be traversed exactly twice overall.
pub fn map_from_faces(faces: &[Vec<u32>]) -> Result<Validated, ConstructionError> {
    // Flag (face f, position i, side s): s = 0 is the corner at v_i, s = 1
    // the corner at v_{i+1}, both on the edge {v_i, v_{i+1}}.
    let mut offsets = Vec::with_capacity(faces.len());
    let mut total = 0usize;
    for face in faces {
        if face.len() < 2 {
            return Err(ConstructionError::BadParams("face needs ≥ 2 vertices".into()));
        }
        offsets.push(total);
        total += 2 * face.len();
    }
    let id = |f: usize, i: usize, s: usize| (offsets[f] + 2 * i + s) as u32;
    let mut p0 = vec![0u32; total];
    let mut p1 = vec![0u32; total];
    let mut p2 = vec![u32::MAX; total];
    let mut edge_slots: std::collections::HashMap<(u32, u32), Vec<(usize, usize)>> =
        std::collections::HashMap::new();
    for (f, face) in faces.iter().enumerate() {
        let m = face.len();
        for i in 0..m {
            p0[id(f, i, 0) as usize] = id(f, i, 1);
            p0[id(f, i, 1) as usize] = id(f, i, 0);
            let j = (i + 1) % m;
            p1[id(f, i, 1) as usize] = id(f, j, 0);
            p1[id(f, j, 0) as usize] = id(f, i, 1);
            let a = face[i];
            let b = face[j];
            let key = (a.min(b), a.max(b));
            edge_slots.entry(key).or_default().push((f, i));
        }
    }
    for (key, slots) in &edge_slots {
        if slots.len() != 2 {
            return Err(ConstructionError::BadParams(format!(
                "edge {:?} used {} times, expected 2",
                key,
                slots.len()
            )));
        }
        let (f1, i1) = slots[0];
        let (f2, i2) = slots[1];
        // Match flags by vertex.
        let v1_start = faces[f1][i1];
        let v2_start = faces[f2][i2];
        if v1_start == v2_start {
            p2[id(f1, i1, 0) as usize] = id(f2, i2, 0);
            p2[id(f2, i2, 0) as usize] = id(f1, i1, 0);
            p2[id(f1, i1, 1) as usize] = id(f2, i2, 1);
            p2[id(f2, i2, 1) as usize] = id(f1, i1, 1);
        } else {
            p2[id(f1, i1, 0) as usize] = id(f2, i2, 1);
            p2[id(f2, i2, 1) as usize] = id(f1, i1, 0);
            p2[id(f1, i1, 1) as usize] = id(f2, i2, 0);
            p2[id(f2, i2, 0) as usize] = id(f1, i1, 1);
        }
    }
    Ok(validate(3, vec![p0, p1, p2])?)
}

/// A chiral torus map of type {4,4} on 5 vertices (40 flags): faces are
/// the translates of [v, v+1, v+3, v+2] over Z₅.
pub fn torus_chiral_44() -> Result<Validated, ConstructionError> {
    let faces: Vec<Vec<u32>> = (0..5u32)
        .map(|v| vec![v, (v + 1) % 5, (v + 3) % 5, (v + 2) % 5])
        .collect();
    map_from_faces(&faces)
}

// ---------------------------------------------------------------------------
// Catalog dispatch and manifest
// ---------------------------------------------------------------------------

pub const EXAMPLE420_GRP: &str = include_str!("../data/example420.grp");
pub const CATALOG_MANIFEST_JSON: &str = include_str!("../data/catalog.json");

pub fn example420_presentation() -> Result<Presentation, ConstructionError> {
    Ok(Presentation::parse(EXAMPLE420_GRP)?)
}

/// Builds a catalog entry by name, e.g. `polygon:5`, `two_n:3:0,2`,
/// `family1_pm:4`, `family2_pm:8`, `sporadic_xs`, `hosohedron:3`,
/// `hemi_hosohedron:2`, `schlafli:4,3`, `torus_44_12`.
pub fn catalog(name: &str) -> Result<Validated, ConstructionError> {
    let mut parts = name.split(':');
    let kind = parts.next().unwrap_or("");
    let arg1 = parts.next();
    let arg2 = parts.next();
    let num = |s: Option<&str>| -> Result<usize, ConstructionError> {
        s.and_then(|t| t.parse().ok())
            .ok_or_else(|| ConstructionError::BadParams(format!("bad catalog name `{name}`")))
    };
    match kind {
        "polygon" => catalog_polygon(num(arg1)?),
        "one_n" => catalog_one_n(num(arg1)?),
        "two_n" => {
            let n = num(arg1)?;
            let semi: Vec<usize> = match arg2 {
                None | Some("") => Vec::new(),
                Some(list) => list
                    .split(',')
                    .map(|t| t.trim().parse())
                    .collect::<Result<_, _>>()
                    .map_err(|_| {
                        ConstructionError::BadParams(format!("bad color list in `{name}`"))
                    })?,
            };
            catalog_two_n(n, &semi)
        }
        "family1_pm" => Ok(validate(3, catalog_family1_pm(num(arg1)?)?.perms().to_vec())?),
        "family2_pm" => Ok(validate(3, catalog_family2_pm(num(arg1)?)?.perms().to_vec())?),
        "sporadic_xs" => Ok(validate(3, catalog_sporadic_xs()?.perms().to_vec())?),
        "hosohedron" => Ok(hosohedron(num(arg1)?)?.flag_graph),
        "hemi_hosohedron" => hemi_hosohedron(num(arg1)?),
        "schlafli" => {
            let orders: Vec<usize> = arg1
                .unwrap_or("")
                .split(',')
                .map(|t| t.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| ConstructionError::BadParams(format!("bad symbol in `{name}`")))?;
            Ok(regular_polytope_schlafli(&orders, 10_000_000)?.flag_graph)
        }
        "torus_44_12" => torus_chiral_44(),
        _ => Err(ConstructionError::BadParams(format!(
            "unknown catalog entry `{name}`"
        ))),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub flags: usize,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polytope: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<i64>,
    pub source: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogManifest {
    pub entries: Vec<CatalogEntry>,
}

pub fn catalog_manifest() -> CatalogManifest {
    serde_json::from_str(CATALOG_MANIFEST_JSON).expect("bundled manifest is valid JSON")
}

/// Named voltage premaniplexes used by the lift-check and round-trip test
/// batteries; every derived graph stays small.
pub fn catalog_voltage_graphs() -> Result<Vec<(String, VoltagePremaniplex)>, ConstructionError> {
    let mut out = Vec::new();
    for sym in [vec![3usize, 3], vec![4, 3], vec![3, 4], vec![5, 3]] {
        let p = regular_polytope_schlafli(&sym, 10_000)?;
        let name = format!(
            "family1_over_{}",
            sym.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("_")
        );
        out.push((name, family1_voltage(&p)?));
    }
    let torus = torus_chiral_44()?.premaniplex();
    let cg = chiral_from_maniplex(&torus)?;
    out.push(("nu_torus_44".into(), nu_voltage(&cg)?));
    out.push(("family2_torus_44".into(), family2_voltage(&cg)?));
    {
        let op = builtin_operator("family1", Some(3))?;
        let (theta, _) = operator_theta(&nu_voltage(&cg)?, &op)?;
        out.push(("alternating_torus_44".into(), theta));
    }
    {
        let cube = regular_polytope_schlafli(&[4, 3], 10_000)?;
        let q = quotient(cube.premaniplex(), &cube.group)?;
        out.push(("cube_over_full_group".into(), q.voltage));
    }
    {
        let hoso = hosohedron(4)?;
        let aut = automorphisms(hoso.premaniplex());
        // Quotient by a central involution giving the antipodal map.
        for g in aut.group.elements() {
            if !aut.group.is_central_involution(g)? {
                continue;
            }
            let perm = aut.group.full_perm(g)?;
            let sub = FreeActionGroup::close(vec!["z".into()], vec![perm], 0)?;
            if let Ok(q) = quotient(hoso.premaniplex(), &sub) {
                out.push(("hosohedron4_antipodal".into(), q.voltage));
                break;
            }
        }
    }
    Ok(out)
}
