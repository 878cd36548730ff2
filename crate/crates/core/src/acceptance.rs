//! End-to-end acceptance suite: eleven independent criteria, each with a
//! pass/fail outcome and a wall-clock budget. The heavyweight coset
//! enumeration for the rank-5 chiral example is shared across criteria.

use crate::analysis::{analyze_cover, automorphisms, self_duality_orbits, DualityType};
use crate::constructions::{
    alternating_report, build_alternating, build_family1, build_family2, catalog,
    catalog_family1_pm, catalog_family2_pm, catalog_manifest, catalog_sporadic_xs,
    catalog_voltage_graphs, chiral_polytope, example420_presentation, hemi_hosohedron,
    hosohedron, regular_polytope_schlafli, ChiralGroup,
};
use crate::group::Perm;
use crate::io::parse_premaniplex;
use crate::operators::{
    builtin_operator, operator_apply, operator_theta, polygon_perms01, substitute_letters,
};
use crate::premaniplex::{validate, CanonicalForm, Flag, Premaniplex};
use crate::voltage::{quotient, Cover};
use std::collections::{BTreeMap, HashSet};
use std::sync::OnceLock;
use std::time::Instant;

pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub outcome: Result<(), String>,
    pub seconds: f64,
    pub limit_seconds: Option<f64>,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.outcome.is_ok() && self.within_budget()
    }

    pub fn within_budget(&self) -> bool {
        self.limit_seconds.map_or(true, |l| self.seconds <= l)
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    type C = fn() -> Result<(), String>;
    let criteria: [(&'static str, Option<f64>, C); 11] = [
        ("family-1 cube invariants", Some(1.0), c01_family1_cube),
        ("family-1 octahedron matches cube", Some(1.0), c02_family1_octahedron),
        ("family-1 icosahedron/dodecahedron", Some(5.0), c03_family1_icosa_dodeca),
        ("family-1 tetrahedron invariants", Some(1.0), c04_family1_tetrahedron),
        ("rank-5 chiral example pipeline", Some(600.0), c05_rank5_pipeline),
        ("exhaustive small classification", Some(60.0), c06_classification),
        ("all-digonal maniplexes are hosohedral", None, c07_digonal),
        ("operator algebra", Some(10.0), c08_operator_algebra),
        ("lift-check oracle equivalence", None, c09_lift_oracle),
        ("tau-product and Petrie identities", None, c10_identities),
        ("alternating construction properties", Some(900.0), c11_alternating),
    ];
    criteria
        .iter()
        .enumerate()
        .map(|(idx, &(name, limit, f))| {
            let start = Instant::now();
            let outcome = f();
            CriterionResult {
                id: idx + 1,
                name,
                outcome,
                seconds: start.elapsed().as_secs_f64(),
                limit_seconds: limit,
            }
        })
        .collect()
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// -- shared heavy artifacts -------------------------------------------------

fn ex420() -> Result<&'static (Cover, ChiralGroup), String> {
    static CELL: OnceLock<Result<(Cover, ChiralGroup), String>> = OnceLock::new();
    CELL.get_or_init(|| {
        let pres = example420_presentation().map_err(s)?;
        chiral_polytope(&pres, 10_000_000).map_err(s)
    })
    .as_ref()
    .map_err(Clone::clone)
}

fn alternating_cover() -> Result<&'static Cover, String> {
    static CELL: OnceLock<Result<Cover, String>> = OnceLock::new();
    CELL.get_or_init(|| {
        let (_, cg) = ex420()?;
        build_alternating(cg).map_err(s)
    })
    .as_ref()
    .map_err(Clone::clone)
}

fn family1_report(
    sym: &[usize],
) -> Result<(Cover, crate::analysis::AnalysisReport), String> {
    let p = regular_polytope_schlafli(sym, 100_000).map_err(s)?;
    let (cover, _pre) = build_family1(&p).map_err(s)?;
    let report = analyze_cover(&cover).map_err(s)?;
    Ok((cover, report))
}

/// Isomorphism test that first tries the natural base-flag correspondence
/// (covers built from the same data usually match at the origin).
fn iso_fast(a: &Premaniplex, b: &Premaniplex) -> bool {
    a.flag_count() == b.flag_count()
        && (a.isomorphism_with_base_image(b, 0).is_some() || a.is_isomorphic(b))
}

fn histogram(pairs: &[(u32, u32)]) -> BTreeMap<u32, u32> {
    pairs.iter().copied().collect()
}

// -- criteria ---------------------------------------------------------------

fn c01_family1_cube() -> Result<(), String> {
    let (_, r) = family1_report(&[4, 3])?;
    check(r.flags == 288, format!("expected 288 flags, got {}", r.flags))?;
    check(
        r.faces[2].count == 48 && r.faces[2].sizes == histogram(&[(6, 48)]),
        format!("2-faces: {:?}", r.faces[2]),
    )?;
    check(r.faces[1].count == 72, format!("edges: {}", r.faces[1].count))?;
    check(r.faces[0].count == 8, format!("vertices: {}", r.faces[0].count))?;
    check(
        r.vertex_degrees == Some(histogram(&[(18, 8)])),
        format!("vertex degrees: {:?}", r.vertex_degrees),
    )?;
    check(
        r.orientable == Some(true) && r.genus == Some(9),
        format!("orientable {:?} genus {:?}", r.orientable, r.genus),
    )?;
    check(r.polytope, "polytopality check failed")?;
    check(r.flag_orbits == 6, format!("flag orbits: {}", r.flag_orbits))?;
    check(
        r.facet_stabilizer_orders.iter().all(|&o| o == 1),
        format!("facet stabilizers: {:?}", r.facet_stabilizer_orders),
    )?;
    let stg = parse_premaniplex(&r.stg).map_err(s)?.premaniplex();
    let expected = catalog_family1_pm(3).map_err(s)?;
    check(stg.is_isomorphic(&expected), "STG is not the triangle member of family 1")
}

fn c02_family1_octahedron() -> Result<(), String> {
    let (cube, _) = family1_report(&[4, 3])?;
    let (octa, _) = family1_report(&[3, 4])?;
    check(
        iso_fast(cube.total_premaniplex(), octa.total_premaniplex()),
        "cube and octahedron family-1 outputs differ",
    )
}

fn c03_family1_icosa_dodeca() -> Result<(), String> {
    for sym in [[3usize, 5], [5, 3]] {
        let (_, r) = family1_report(&sym)?;
        check(
            r.faces[2].count == 120
                && r.faces[1].count == 180
                && r.faces[0].count == 12
                && r.vertex_degrees == Some(histogram(&[(30, 12)]))
                && r.genus == Some(25),
            format!(
                "{:?}: faces {}/{}/{} degrees {:?} genus {:?}",
                sym, r.faces[2].count, r.faces[1].count, r.faces[0].count,
                r.vertex_degrees, r.genus
            ),
        )?;
    }
    let (ico, _) = family1_report(&[3, 5])?;
    let (dod, _) = family1_report(&[5, 3])?;
    check(
        iso_fast(ico.total_premaniplex(), dod.total_premaniplex()),
        "icosahedron and dodecahedron family-1 outputs differ",
    )
}

fn c04_family1_tetrahedron() -> Result<(), String> {
    let (_, r) = family1_report(&[3, 3])?;
    check(
        r.faces[2].count == 24 && r.faces[1].count == 36 && r.faces[0].count == 6,
        format!(
            "faces {}/{}/{}",
            r.faces[2].count, r.faces[1].count, r.faces[0].count
        ),
    )?;
    check(
        r.vertex_degrees == Some(histogram(&[(12, 6)])),
        format!("vertex degrees: {:?}", r.vertex_degrees),
    )?;
    check(r.genus == Some(4), format!("genus: {:?}", r.genus))?;
    check(r.flag_orbits == 3, format!("flag orbits: {}", r.flag_orbits))?;
    check(
        r.facet_stabilizer_orders.iter().all(|&o| o == 2),
        format!("facet stabilizers: {:?}", r.facet_stabilizer_orders),
    )
}

fn c05_rank5_pipeline() -> Result<(), String> {
    let (cover, cg) = ex420()?;
    check(
        cg.group.order() == 20736,
        format!("rotation group order {}", cg.group.order()),
    )?;
    let total = cover.total_premaniplex();
    check(
        total.flag_count() == 41472,
        format!("chiral polytope has {} flags", total.flag_count()),
    )?;
    let rep = analyze_cover(cover).map_err(s)?;
    check(rep.flag_orbits == 2, format!("flag orbits: {}", rep.flag_orbits))?;
    check(
        rep.petrie.all_simple && rep.petrie.lengths.keys().eq([&12u32]),
        format!("petrie: {:?}", rep.petrie),
    )?;
    let (cover2, _pre) = build_family2(total, cg).map_err(s)?;
    let r = analyze_cover(&cover2).map_err(s)?;
    check(
        r.faces[2].count == 20736 && r.faces[2].sizes == histogram(&[(16, 20736)]),
        format!("2-faces: {:?}", r.faces[2]),
    )?;
    check(r.faces[1].count == 82944, format!("edges: {}", r.faces[1].count))?;
    check(
        r.faces[0].count == 3456 && r.vertex_degrees == Some(histogram(&[(48, 3456)])),
        format!("vertices: {} degrees {:?}", r.faces[0].count, r.vertex_degrees),
    )?;
    check(r.genus == Some(29377), format!("genus: {:?}", r.genus))?;
    check(r.polytope, "family-2 output failed the polytopality check")?;
    let stg = parse_premaniplex(&r.stg).map_err(s)?.premaniplex();
    let expected = catalog_family2_pm(8).map_err(s)?;
    check(stg.is_isomorphic(&expected), "family-2 STG is not the octagon member")
}

fn c06_classification() -> Result<(), String> {
    // All regular 3-premaniplexes whose colors 0,1 form an n-gon (n = 2..6,
    // ≤ 12 flags) with connected subgraph on colors 1,2: enumerate every
    // involution as the color-2 permutation.
    let mut found: HashSet<CanonicalForm> = HashSet::new();
    for n in 2..=6usize {
        let (p0, p1) = polygon_perms01(n);
        let f = 2 * n;
        let mut p2 = vec![u32::MAX; f];
        enumerate_involutions(&mut p2, 0, &mut |p2| {
            let Ok(v) = validate(3, vec![p0.clone(), p1.clone(), p2.to_vec()]) else {
                return;
            };
            let pm = v.as_premaniplex();
            if pm.components_under(&[1, 2]).face_count() != 1 {
                return;
            }
            if automorphisms(pm).is_regular() {
                found.insert(pm.canonical_form());
            }
        });
    }
    let mut expected: HashSet<CanonicalForm> = HashSet::new();
    for n in 2..=6usize {
        expected.insert(catalog_family1_pm(n).map_err(s)?.canonical_form());
    }
    expected.insert(catalog_family2_pm(4).map_err(s)?.canonical_form());
    expected.insert(catalog_sporadic_xs().map_err(s)?.canonical_form());
    check(
        found == expected,
        format!(
            "classification mismatch: found {} graphs, expected {} (sizes found {:?})",
            found.len(),
            expected.len(),
            {
                let mut v: Vec<usize> = found.iter().map(|c| c.tables.len() / 3).collect();
                v.sort_unstable();
                v
            }
        ),
    )
}

fn enumerate_involutions(p2: &mut [u32], from: usize, visit: &mut impl FnMut(&[u32])) {
    let Some(i) = (from..p2.len()).find(|&i| p2[i] == u32::MAX) else {
        visit(p2);
        return;
    };
    p2[i] = i as u32; // semi-edge
    enumerate_involutions(p2, i + 1, visit);
    for j in i + 1..p2.len() {
        if p2[j] != u32::MAX {
            continue;
        }
        p2[i] = j as u32;
        p2[j] = i as u32;
        enumerate_involutions(p2, i + 1, visit);
        p2[j] = u32::MAX;
    }
    p2[i] = u32::MAX;
}

fn c07_digonal() -> Result<(), String> {
    let mut references: Vec<Premaniplex> = Vec::new();
    for k in 2..=6 {
        references.push(hosohedron(k).map_err(s)?.flag_graph.premaniplex());
    }
    for k in 1..=6 {
        references.push(hemi_hosohedron(k).map_err(s)?.premaniplex());
    }
    let mut qualifying = 0;
    for entry in &catalog_manifest().entries {
        let built = catalog(&entry.name).map_err(s)?;
        if built.as_premaniplex().rank() != 3 || !built.is_maniplex() {
            continue;
        }
        let pm = built.as_premaniplex();
        let faces = pm.faces(2).map_err(s)?;
        if !faces.face_sizes.iter().all(|&sz| sz == 4) {
            continue;
        }
        qualifying += 1;
        check(
            automorphisms(pm).is_regular(),
            format!("{} is all-digonal but not regular", entry.name),
        )?;
        check(
            references.iter().any(|r| pm.is_isomorphic(r)),
            format!("{} is all-digonal but not hosohedral", entry.name),
        )?;
    }
    check(
        qualifying >= 12,
        format!("only {qualifying} all-digonal catalog maniplexes found"),
    )
}

fn apply_ops(pm: &Premaniplex, specs: &[(&str, Option<usize>)]) -> Result<Premaniplex, String> {
    let mut current = pm.clone();
    for &(name, param) in specs {
        let op = builtin_operator(name, param).map_err(s)?;
        current = operator_apply(&current, &op).map_err(s)?.result.premaniplex();
    }
    Ok(current)
}

fn c08_operator_algebra() -> Result<(), String> {
    let cube = regular_polytope_schlafli(&[4, 3], 10_000).map_err(s)?;
    let tetra = regular_polytope_schlafli(&[3, 3], 10_000).map_err(s)?;
    for (label, p) in [("cube", &cube), ("tetrahedron", &tetra)] {
        let pm = p.premaniplex();
        for op in ["dual", "petrial", "opposite"] {
            let param = if op == "dual" { Some(3) } else { None };
            let twice = apply_ops(pm, &[(op, param), (op, param)])?;
            check(
                twice.is_isomorphic(pm),
                format!("{op} applied twice to the {label} is not the identity"),
            )?;
        }
    }
    let dpd = apply_ops(cube.premaniplex(), &[("dual", Some(3)), ("petrial", None), ("dual", Some(3))])?;
    let opp = apply_ops(cube.premaniplex(), &[("opposite", None)])?;
    check(
        dpd.is_isomorphic(&opp),
        "dual∘petrial∘dual differs from opposite on the cube",
    )?;

    // Commutation square on the one-vertex quotient of the cube.
    let q = quotient(cube.premaniplex(), &cube.group).map_err(s)?;
    let op3 = builtin_operator("family1", Some(3)).map_err(s)?;
    let (theta, _) = operator_theta(&q.voltage, &op3).map_err(s)?;
    let via_theta = theta.derived_graph().map_err(s)?;
    let derived = q.voltage.derived_graph().map_err(s)?;
    let via_apply = operator_apply(derived.total_premaniplex(), &op3).map_err(s)?;
    check(
        iso_fast(
            via_theta.total_premaniplex(),
            via_apply.result.as_premaniplex(),
        ),
        "theta/derive square does not commute on the cube quotient",
    )?;

    // Commutation square on the two-vertex rank-5 chiral presentation.
    let (cover5, cg) = ex420()?;
    let v5 = crate::constructions::nu_voltage(cg).map_err(s)?;
    let op5 = builtin_operator("family1", Some(5)).map_err(s)?;
    let (theta5, _) = operator_theta(&v5, &op5).map_err(s)?;
    let via_theta5 = theta5.derived_graph().map_err(s)?;
    let via_apply5 = operator_apply(cover5.total_premaniplex(), &op5).map_err(s)?;
    check(
        iso_fast(
            via_theta5.total_premaniplex(),
            via_apply5.result.as_premaniplex(),
        ),
        "theta/derive square does not commute on the rank-5 chiral case",
    )?;

    // The operator's letter words, substituted with the cube generators,
    // reproduce the family-1 voltage graph exactly.
    let rhos: Vec<_> = (0..3).map(|i| cube.rho(i)).collect();
    let substituted = substitute_letters(&op3, &cube.group, &rhos).map_err(s)?;
    let direct = crate::constructions::family1_voltage(&cube).map_err(s)?;
    check(
        substituted.base().perms() == direct.base().perms() && substituted.xi() == direct.xi(),
        "substituted operator voltages differ from the direct family-1 voltages",
    )
}

fn brute_lift(cover: &Cover, tau: &Perm) -> bool {
    let total = cover.total_premaniplex();
    let f = total.flag_count();
    let target_base = tau.apply(cover.project(0));
    for c in 0..f as Flag {
        if cover.project(c) != target_base {
            continue;
        }
        if let Some(map) = total.isomorphism_with_base_image(total, c) {
            if (0..f as Flag).all(|x| cover.project(map[x as usize]) == tau.apply(cover.project(x)))
            {
                return true;
            }
        }
    }
    false
}

fn c09_lift_oracle() -> Result<(), String> {
    for (name, v) in catalog_voltage_graphs().map_err(s)? {
        if v.base().flag_count() * v.group().order() > 2000 {
            continue;
        }
        let cover = v.derived_graph().map_err(s)?;
        let base_aut = automorphisms(v.base());
        for g in base_aut.group.elements() {
            let tau = base_aut.group.full_perm(g).map_err(s)?;
            let fast = v.lift_check(tau.images()).map_err(s)?;
            let brute = brute_lift(&cover, &tau);
            check(
                fast == brute,
                format!("{name}: lift_check={fast} but brute force={brute}"),
            )?;
        }
    }
    Ok(())
}

fn c10_identities() -> Result<(), String> {
    // τ-product vs. Petrie-word walk on the rank-5 chiral example, k = 2.
    let (cover, cg) = ex420()?;
    let total = cover.total_premaniplex();
    let group = &cg.group;
    let k = 2usize;
    let rank = 2 * k + 1;
    for j in 1..=8 * k {
        // Left side: the product τ_j^{ε_j} ⋯ τ_1^{ε_1} applied to the base
        // flag, subscripts modulo 2k.
        let mut acc = group.identity();
        for i in (1..=j).rev() {
            let sub = ((i - 1) % (2 * k)) + 1;
            let mut t = cg.taus[sub];
            if i % (4 * k) == 2 * k + 1 {
                t = group.inverse(t).map_err(s)?;
            }
            acc = group.compose(acc, t).map_err(s)?;
        }
        let lhs = group.position_of(acc).map_err(s)? as Flag;
        // Right side: apply r_0, r_1, ..., r_m (subscripts modulo 2k+1),
        // with one extra r_0 at the end in the congruent case.
        let m = j + (j - 1) / (2 * k);
        let mut rhs: Flag = 0;
        for i in 0..=m {
            rhs = total.adj(i % rank, rhs);
        }
        if j % 2 == ((j - 1) / (2 * k)) % 2 {
            rhs = total.adj(0, rhs);
        }
        check(lhs == rhs, format!("tau-product identity fails at j = {j}"))?;
    }

    // Simple Petrie polygons: walking the colors cyclically for n·ℓ steps
    // visits pairwise-distinct flags, from every start.
    for entry in &catalog_manifest().entries {
        let built = catalog(&entry.name).map_err(s)?;
        let pm = built.as_premaniplex();
        if !built.is_maniplex() || pm.rank() < 2 {
            continue;
        }
        let petrie = pm.petrie_polygons();
        if !petrie.all_simple() {
            continue;
        }
        let n = pm.rank();
        for start in 0..pm.flag_count() as Flag {
            let len = petrie.lengths[petrie.orbit_of[start as usize] as usize] as usize;
            let mut seen = HashSet::new();
            let mut flag = start;
            for t in 0..n * len {
                check(
                    seen.insert(flag),
                    format!("{}: Petrie walk from flag {start} repeats", entry.name),
                )?;
                flag = pm.adj(t % n, flag);
            }
            check(
                flag == start,
                format!("{}: Petrie walk from flag {start} does not close", entry.name),
            )?;
        }
    }
    Ok(())
}

fn c11_alternating() -> Result<(), String> {
    let (cover, _cg) = ex420()?;
    let alt = alternating_cover()?;
    let total = alt.total_premaniplex();
    check(
        total.flag_count() == 414_720,
        format!("alternating output has {} flags", total.flag_count()),
    )?;
    // The input's flag orbits are its fibers (it is chiral), which is all
    // the duality computation needs.
    let g = cover.group_order();
    let p_flags = cover.total_premaniplex();
    let orbit_of: Vec<u32> = (0..p_flags.flag_count()).map(|x| (x / g) as u32).collect();
    let duality = self_duality_orbits(p_flags, &orbit_of, 2);
    let report = alternating_report(alt, duality).map_err(s)?;
    check(
        report.facet_orbit_count == 2,
        format!("facet orbit count {}", report.facet_orbit_count),
    )?;
    check(
        report.edges_between_orbits,
        "some facet-adjacency stays within one orbit",
    )?;
    check(report.polytope, "alternating output failed the polytopality check")?;
    check(
        report.facet_stabilizers_trivial == (duality == DualityType::NotSelfDual),
        format!(
            "facet stabilizers trivial = {} inconsistent with duality {:?}",
            report.facet_stabilizers_trivial, duality
        ),
    )
}
