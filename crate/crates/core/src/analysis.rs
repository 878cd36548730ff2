//! Automorphism groups, symmetry type graphs, polytopality, and the
//! JSON analysis report.

use crate::group::{FreeActionGroup, Perm};
use crate::io::serialize_premaniplex;
use crate::premaniplex::{Flag, FlagGraphError, Premaniplex};
use crate::unionfind::UnionFind;
use crate::voltage::{Cover, VoltageError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("flag graph error: {0}")]
    FlagGraph(#[from] FlagGraphError),
    #[error("voltage error: {0}")]
    Voltage(#[from] VoltageError),
}

/// The full automorphism group of a premaniplex, acting freely on flags
/// (an automorphism fixing any flag is the identity, by connectivity).
#[derive(Debug, Clone)]
pub struct AutReport {
    pub group: FreeActionGroup,
    /// flag → dense orbit id, ordered by smallest member flag.
    pub orbit_of: Vec<u32>,
    pub orbit_count: usize,
}

impl AutReport {
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn is_regular(&self) -> bool {
        self.orbit_count == 1
    }
}

/// All color-preserving automorphisms, by candidate-base-image extension
/// with local-invariant pruning. Only generators outside the orbit closure
/// of previously found ones are extended, so the work stays near-linear
/// when the group is large.
pub fn automorphisms(pm: &Premaniplex) -> AutReport {
    let f = pm.flag_count();
    let inv = pm.local_invariants();
    let mut gens: Vec<Perm> = Vec::new();
    let mut known = vec![false; f];
    known[0] = true;
    let recompute = |gens: &[Perm], known: &mut Vec<bool>| {
        let invs: Vec<Perm> = gens.iter().map(Perm::inverse).collect();
        for k in known.iter_mut() {
            *k = false;
        }
        known[0] = true;
        let mut stack = vec![0u32];
        while let Some(x) = stack.pop() {
            for g in gens.iter().chain(invs.iter()) {
                let y = g.apply(x);
                if !known[y as usize] {
                    known[y as usize] = true;
                    stack.push(y);
                }
            }
        }
    };
    for c in 1..f as Flag {
        if known[c as usize] || inv[c as usize] != inv[0] {
            continue;
        }
        if let Some(map) = pm.isomorphism_with_base_image(pm, c) {
            gens.push(Perm::new(map).expect("automorphism is a bijection"));
            recompute(&gens, &mut known);
        }
    }
    let names: Vec<String> = (0..gens.len().max(1)).map(|i| format!("a{i}")).collect();
    if gens.is_empty() {
        gens.push(Perm::identity(f));
    }
    let mut uf = UnionFind::new(f);
    for g in &gens {
        for x in 0..f as Flag {
            uf.union(x, g.apply(x));
        }
    }
    let mut orbit_of = vec![u32::MAX; f];
    let mut orbit_count = 0u32;
    for x in 0..f as Flag {
        let r = uf.find(x);
        if orbit_of[r as usize] == u32::MAX {
            orbit_of[r as usize] = orbit_count;
            orbit_count += 1;
        }
        orbit_of[x as usize] = orbit_of[r as usize];
    }
    let group = FreeActionGroup::close(names, gens, 0)
        .expect("automorphisms act freely on a connected flag graph");
    AutReport {
        group,
        orbit_of,
        orbit_count: orbit_count as usize,
    }
}

/// The quotient of the flag graph by the automorphism orbits.
#[derive(Debug, Clone)]
pub struct SymmetryTypeGraph {
    pub premaniplex: Premaniplex,
    pub orbit_of: Vec<u32>,
    pub orbit_count: usize,
}

/// Builds the STG from an orbit partition (the quotient is well defined for
/// any partition into automorphism orbits).
pub fn stg_from_orbits(
    pm: &Premaniplex,
    orbit_of: &[u32],
    orbit_count: usize,
) -> Result<SymmetryTypeGraph, FlagGraphError> {
    let mut rep = vec![u32::MAX; orbit_count];
    for x in 0..pm.flag_count() as Flag {
        let o = orbit_of[x as usize] as usize;
        if rep[o] == u32::MAX {
            rep[o] = x;
        }
    }
    let mut perms = vec![vec![0u32; orbit_count]; pm.rank()];
    for (o, &r) in rep.iter().enumerate() {
        for (i, perm_row) in perms.iter_mut().enumerate() {
            perm_row[o] = orbit_of[pm.adj(i, r) as usize];
        }
    }
    Ok(SymmetryTypeGraph {
        premaniplex: Premaniplex::new(pm.rank(), perms)?,
        orbit_of: orbit_of.to_vec(),
        orbit_count,
    })
}

pub fn symmetry_type_graph(
    pm: &Premaniplex,
    aut: &AutReport,
) -> Result<SymmetryTypeGraph, FlagGraphError> {
    stg_from_orbits(pm, &aut.orbit_of, aut.orbit_count)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopalityReport {
    pub is_polytope: bool,
    /// (Φ, Ψ, (k, m)) violating the path intersection property.
    pub witness: Option<(Flag, Flag, (usize, usize))>,
}

/// Path intersection property: flags connected within colors [0, m] and
/// within colors [k, n−1] must be connected within colors [k, m].
pub fn check_polytopality(pm: &Premaniplex) -> PolytopalityReport {
    let n = pm.rank();
    let f = pm.flag_count();
    for k in 0..n {
        for m in k..n {
            let low = pm.components_under(&(0..=m).collect::<Vec<_>>());
            let high = pm.components_under(&(k..n).collect::<Vec<_>>());
            let mid = pm.components_under(&(k..=m).collect::<Vec<_>>());
            let mut first: std::collections::HashMap<(u32, u32), (u32, Flag)> =
                std::collections::HashMap::new();
            for x in 0..f {
                let key = (low.component_id[x], high.component_id[x]);
                let val = mid.component_id[x];
                match first.entry(key) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert((val, x as Flag));
                    }
                    std::collections::hash_map::Entry::Occupied(e) => {
                        if e.get().0 != val {
                            return PolytopalityReport {
                                is_polytope: false,
                                witness: Some((e.get().1, x as Flag, (k, m))),
                            };
                        }
                    }
                }
            }
        }
    }
    PolytopalityReport {
        is_polytope: true,
        witness: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Regular,
    Chiral,
    Other(usize),
}

impl Classification {
    pub fn label(&self) -> String {
        match self {
            Classification::Regular => "regular".into(),
            Classification::Chiral => "chiral".into(),
            Classification::Other(k) => format!("other({k})"),
        }
    }
}

/// Regular = one flag orbit; chiral = two orbits with adjacent flags always
/// in different orbits.
pub fn classify_orbits(pm: &Premaniplex, orbit_of: &[u32], orbit_count: usize) -> Classification {
    match orbit_count {
        1 => Classification::Regular,
        2 => {
            for x in 0..pm.flag_count() as Flag {
                for i in 0..pm.rank() {
                    if orbit_of[x as usize] == orbit_of[pm.adj(i, x) as usize] {
                        return Classification::Other(2);
                    }
                }
            }
            Classification::Chiral
        }
        k => Classification::Other(k),
    }
}

pub fn classify(pm: &Premaniplex, aut: &AutReport) -> Classification {
    classify_orbits(pm, &aut.orbit_of, aut.orbit_count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualityType {
    NotSelfDual,
    ProperlySelfDual,
    ImproperlySelfDual,
    SelfDualRegular,
}

/// Classifies isomorphisms onto the dual by whether the base flag's image
/// stays in its own automorphism orbit (proper) or not (improper). Any one
/// isomorphism decides: two of different kinds would compose to an
/// automorphism moving a flag across its own orbit, which cannot exist.
pub fn self_duality(pm: &Premaniplex, aut: &AutReport) -> DualityType {
    self_duality_orbits(pm, &aut.orbit_of, aut.orbit_count)
}

/// Same as [`self_duality`] but over a precomputed flag-orbit partition
/// (only consulted when an isomorphism onto the dual is actually found).
pub fn self_duality_orbits(pm: &Premaniplex, orbit_of: &[u32], orbit_count: usize) -> DualityType {
    let d = pm.dual();
    let inv_a = pm.local_invariants();
    let inv_b = d.local_invariants();
    for c in 0..d.flag_count() as Flag {
        if inv_b[c as usize] != inv_a[0] {
            continue;
        }
        if pm.isomorphism_with_base_image(&d, c).is_some() {
            if orbit_count == 1 {
                return DualityType::SelfDualRegular;
            }
            // The dual shares the flag set and the automorphism orbits.
            return if orbit_of[c as usize] == orbit_of[0] {
                DualityType::ProperlySelfDual
            } else {
                DualityType::ImproperlySelfDual
            };
        }
    }
    DualityType::NotSelfDual
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FaceSummary {
    pub count: usize,
    /// face flag-size → number of faces of that size.
    pub sizes: BTreeMap<u32, u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PetrieSummary {
    pub lengths: BTreeMap<u32, u32>,
    pub all_simple: bool,
}

/// Stable JSON report over a premaniplex.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AnalysisReport {
    pub rank: usize,
    pub flags: usize,
    /// Indexed by face rank 0..n−1.
    pub faces: Vec<FaceSummary>,
    /// degree → vertex count (rank 3 only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_degrees: Option<BTreeMap<u32, u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub genus: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crosscap: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler: Option<i64>,
    pub polytope: bool,
    pub classification: String,
    pub flag_orbits: usize,
    pub automorphism_order: u64,
    pub facet_stabilizer_orders: Vec<u64>,
    /// Symmetry type graph, embedded as .mpx text.
    pub stg: String,
    pub petrie: PetrieSummary,
}

fn face_summary(pm: &Premaniplex, i: usize) -> FaceSummary {
    let part = pm.faces(i).expect("color in range");
    let mut sizes = BTreeMap::new();
    for &s in &part.face_sizes {
        *sizes.entry(s).or_insert(0) += 1;
    }
    FaceSummary {
        count: part.face_count(),
        sizes,
    }
}

fn petrie_summary(pm: &Premaniplex) -> PetrieSummary {
    let rep = pm.petrie_polygons();
    let mut lengths = BTreeMap::new();
    for &l in &rep.lengths {
        *lengths.entry(l).or_insert(0) += 1;
    }
    PetrieSummary {
        lengths,
        all_simple: rep.all_simple(),
    }
}

/// Facet-stabilizer order per facet orbit when the automorphism action is
/// free: facet flag count divided by the number of flag orbits in the
/// facet's STG component (= |Aut|·s / flags-in-orbit-region).
fn facet_stabilizers(pm: &Premaniplex, stg: &SymmetryTypeGraph) -> Vec<u64> {
    let n = pm.rank();
    if n == 0 {
        return Vec::new();
    }
    let facets = pm.faces(n - 1).expect("rank ≥ 1");
    let stg_facets = stg.premaniplex.faces(n - 1).expect("rank ≥ 1");
    // Orbit region sizes per STG facet component.
    let mut orbits_per_component = vec![0u64; stg_facets.face_count()];
    for o in 0..stg.orbit_count {
        orbits_per_component[stg_facets.component_id[o] as usize] += 1;
    }
    // Representative facet size per STG facet component.
    let mut rep_size = vec![0u64; stg_facets.face_count()];
    for x in 0..pm.flag_count() {
        let comp = stg_facets.component_id[stg.orbit_of[x] as usize] as usize;
        if rep_size[comp] == 0 {
            rep_size[comp] = facets.face_sizes[facets.component_id[x] as usize] as u64;
        }
    }
    (0..stg_facets.face_count())
        .map(|c| rep_size[c] / orbits_per_component[c])
        .collect()
}

#[derive(Debug, Clone)]
pub struct TransitivityReport {
    /// Per-rank face-orbit counts (components of STG minus color i).
    pub face_orbit_counts: Vec<usize>,
    pub vertex_transitive: bool,
    pub facet_transitive: bool,
    pub facet_stabilizer_orders: Vec<u64>,
    pub semiregular: bool,
}

/// Extracts the flags of one face as a premaniplex over the given colors,
/// together with the original flag ids in relabeling order.
pub fn face_subgraph(
    pm: &Premaniplex,
    part: &crate::premaniplex::FacePartition,
    face: u32,
    colors: &[usize],
) -> Result<(Premaniplex, Vec<Flag>), FlagGraphError> {
    let mut ids = vec![u32::MAX; pm.flag_count()];
    let mut members = Vec::new();
    for x in 0..pm.flag_count() as Flag {
        if part.component_id[x as usize] == face {
            ids[x as usize] = members.len() as u32;
            members.push(x);
        }
    }
    let perms = colors
        .iter()
        .map(|&c| {
            members
                .iter()
                .map(|&x| ids[pm.adj(c, x) as usize])
                .collect()
        })
        .collect();
    Ok((Premaniplex::new(colors.len(), perms)?, members))
}

pub fn transitivity_report(pm: &Premaniplex, stg: &SymmetryTypeGraph) -> TransitivityReport {
    let n = pm.rank();
    let face_orbit_counts: Vec<usize> = (0..n)
        .map(|i| stg.premaniplex.faces(i).expect("in range").face_count())
        .collect();
    let vertex_transitive = face_orbit_counts[0] == 1;
    let facet_transitive = face_orbit_counts[n - 1] == 1;
    let facet_stabilizer_orders = facet_stabilizers(pm, stg);
    // Semiregular: vertex-transitive with regular facets (one facet tested
    // per facet orbit; facets in one orbit are isomorphic).
    let semiregular = vertex_transitive && n >= 2 && {
        let facets = pm.faces(n - 1).expect("rank ≥ 2");
        let stg_facets = stg.premaniplex.faces(n - 1).expect("rank ≥ 2");
        let colors: Vec<usize> = (0..n - 1).collect();
        let mut seen_comp = vec![false; stg_facets.face_count()];
        let mut all_regular = true;
        for x in 0..pm.flag_count() {
            let comp = stg_facets.component_id[stg.orbit_of[x] as usize] as usize;
            if seen_comp[comp] {
                continue;
            }
            seen_comp[comp] = true;
            let face = part_face(&facets, x);
            match face_subgraph(pm, &facets, face, &colors) {
                Ok((sub, _)) => {
                    if !automorphisms(&sub).is_regular() {
                        all_regular = false;
                        break;
                    }
                }
                Err(_) => {
                    all_regular = false;
                    break;
                }
            }
        }
        all_regular
    };
    TransitivityReport {
        face_orbit_counts,
        vertex_transitive,
        facet_transitive,
        facet_stabilizer_orders,
        semiregular,
    }
}

fn part_face(part: &crate::premaniplex::FacePartition, flag: usize) -> u32 {
    part.component_id[flag]
}

fn assemble_report(
    pm: &Premaniplex,
    orbit_of: &[u32],
    orbit_count: usize,
    aut_order: u64,
) -> Result<AnalysisReport, AnalysisError> {
    let n = pm.rank();
    let faces: Vec<FaceSummary> = (0..n).map(|i| face_summary(pm, i)).collect();
    let stg = stg_from_orbits(pm, orbit_of, orbit_count)?;
    let (vertex_degrees, orientable, genus, crosscap, euler) = if n == 3 {
        let vparts = pm.faces(0)?;
        let mut degs = BTreeMap::new();
        for &s in &vparts.face_sizes {
            *degs.entry(s / 2).or_insert(0) += 1;
        }
        let orient = pm.orientability()?;
        (
            Some(degs),
            Some(orient.orientable),
            orient.genus,
            orient.crosscap,
            Some(orient.euler),
        )
    } else {
        (None, None, None, None, None)
    };
    let polytope = check_polytopality(pm).is_polytope;
    let classification = classify_orbits(pm, orbit_of, orbit_count).label();
    let facet_stabilizer_orders = facet_stabilizers(pm, &stg);
    Ok(AnalysisReport {
        rank: n,
        flags: pm.flag_count(),
        faces,
        vertex_degrees,
        orientable,
        genus,
        crosscap,
        euler,
        polytope,
        classification,
        flag_orbits: orbit_count,
        automorphism_order: aut_order,
        facet_stabilizer_orders,
        stg: serialize_premaniplex(&stg.premaniplex),
        petrie: petrie_summary(pm),
    })
}

/// Full report via direct automorphism search; suitable up to ~10⁴ flags.
pub fn analyze(pm: &Premaniplex) -> Result<AnalysisReport, AnalysisError> {
    let aut = automorphisms(pm);
    assemble_report(pm, &aut.orbit_of, aut.orbit_count, aut.order() as u64)
}

/// The subgroup of base automorphisms that lift to the cover, as full base
/// flag permutations, together with the orbit partition they induce.
pub struct LiftingSubgroup {
    pub elements: Vec<Perm>,
    pub base_orbit_of: Vec<u32>,
    pub base_orbit_count: usize,
}

pub fn lifting_subgroup(cover: &Cover) -> Result<LiftingSubgroup, AnalysisError> {
    let base = cover.voltage.base();
    let aut = automorphisms(base);
    let mut elements = Vec::new();
    for g in aut.group.elements() {
        let perm = aut.group.full_perm(g).expect("element of own group");
        if cover.voltage.lift_check(perm.images())? {
            elements.push(perm);
        }
    }
    let f = base.flag_count();
    let mut uf = UnionFind::new(f);
    for p in &elements {
        for x in 0..f as Flag {
            uf.union(x, p.apply(x));
        }
    }
    let mut base_orbit_of = vec![u32::MAX; f];
    let mut count = 0u32;
    for x in 0..f as Flag {
        let r = uf.find(x);
        if base_orbit_of[r as usize] == u32::MAX {
            base_orbit_of[r as usize] = count;
            count += 1;
        }
        base_orbit_of[x as usize] = base_orbit_of[r as usize];
    }
    Ok(LiftingSubgroup {
        elements,
        base_orbit_of,
        base_orbit_count: count as usize,
    })
}

/// Report for a derived graph over a *regular* base, using the projection
/// theorem: every automorphism of the cover projects, so the flag orbits of
/// the cover are the fibers over the orbits of the lifting subgroup, and
/// |Aut(cover)| = |Γ| · |lifting subgroup|. Falls back to the direct path
/// when the base is not regular.
pub fn analyze_cover(cover: &Cover) -> Result<AnalysisReport, AnalysisError> {
    let base = cover.voltage.base();
    let base_aut = automorphisms(base);
    let total = cover.total.as_premaniplex();
    if !base_aut.is_regular() {
        return analyze(total);
    }
    let lifting = lifting_subgroup(cover)?;
    let order = cover.group_order() as u64 * lifting.elements.len() as u64;
    let g = cover.group_order();
    let mut orbit_of = vec![0u32; total.flag_count()];
    for x in 0..total.flag_count() {
        orbit_of[x] = lifting.base_orbit_of[x / g];
    }
    // Re-densify in order of smallest total flag (= order of smallest base
    // flag, since fibers are contiguous).
    assemble_report(total, &orbit_of, lifting.base_orbit_count, order)
}
