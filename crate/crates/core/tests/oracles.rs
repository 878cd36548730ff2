//! Independent re-computations of the core invariants, checked against the
//! library on every bundled catalog entry.

use maniforge::analysis::{analyze, automorphisms, classify, Classification};
use maniforge::constructions::{
    catalog, catalog_manifest, catalog_two_n, regular_polytope_schlafli, torus_chiral_44,
};
use maniforge::group::presentation::Presentation;
use maniforge::group::todd_coxeter::todd_coxeter;
use maniforge::premaniplex::{Flag, Premaniplex};

fn catalog_graphs() -> Vec<(String, Premaniplex)> {
    catalog_manifest()
        .entries
        .iter()
        .map(|e| (e.name.clone(), catalog(&e.name).unwrap().premaniplex()))
        .collect()
}

/// Plain DFS component labeling, no union-find.
fn brute_components(pm: &Premaniplex, colors: &[usize]) -> Vec<u32> {
    let f = pm.flag_count();
    let mut comp = vec![u32::MAX; f];
    let mut next = 0u32;
    for start in 0..f as Flag {
        if comp[start as usize] != u32::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start as usize] = next;
        while let Some(x) = stack.pop() {
            for &c in colors {
                let y = pm.adj(c, x);
                if comp[y as usize] == u32::MAX {
                    comp[y as usize] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    comp
}

#[test]
fn face_partitions_match_brute_force() {
    for (name, pm) in catalog_graphs() {
        for i in 0..pm.rank() {
            let colors: Vec<usize> = (0..pm.rank()).filter(|&c| c != i).collect();
            let brute = brute_components(&pm, &colors);
            let part = pm.faces(i).unwrap();
            let brute_count = brute.iter().max().map_or(0, |&m| m + 1) as usize;
            assert_eq!(part.face_count(), brute_count, "{name} rank {i}");
            // Same partition up to relabeling: compare per-flag fingerprints.
            for x in 0..pm.flag_count() {
                for y in 0..pm.flag_count() {
                    assert_eq!(
                        part.component_id[x] == part.component_id[y],
                        brute[x] == brute[y],
                        "{name} rank {i} flags {x},{y}"
                    );
                }
            }
            let mut sizes = vec![0u32; brute_count];
            for &c in &brute {
                sizes[c as usize] += 1;
            }
            let mut a = part.face_sizes.clone();
            a.sort_unstable();
            sizes.sort_unstable();
            assert_eq!(a, sizes, "{name} rank {i} sizes");
        }
    }
}

#[test]
fn petrie_polygons_match_brute_force() {
    for (name, pm) in catalog_graphs() {
        let n = pm.rank();
        let report = pm.petrie_polygons();
        let step = |mut x: Flag| {
            for i in 0..n {
                x = pm.adj(i, x);
            }
            x
        };
        let vertices = pm.faces(0).unwrap();
        let mut seen = vec![false; pm.flag_count()];
        for start in 0..pm.flag_count() as Flag {
            if seen[start as usize] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start as usize] = true;
            let mut x = step(start);
            while x != start {
                seen[x as usize] = true;
                orbit.push(x);
                x = step(x);
            }
            let id = report.orbit_of[start as usize] as usize;
            assert_eq!(report.lengths[id] as usize, orbit.len(), "{name} length");
            for &y in &orbit {
                assert_eq!(report.orbit_of[y as usize] as usize, id, "{name} orbit");
            }
            let mut vs: Vec<u32> = orbit
                .iter()
                .map(|&y| vertices.component_id[y as usize])
                .collect();
            vs.sort_unstable();
            vs.dedup();
            assert_eq!(
                report.simple[id],
                vs.len() == orbit.len(),
                "{name} simplicity"
            );
        }
    }
}

/// Extends the image of flag 0 over the whole graph by BFS, then verifies
/// every edge; completely independent of the library's pruning logic.
fn brute_automorphism_from(pm: &Premaniplex, image0: Flag) -> Option<Vec<Flag>> {
    let f = pm.flag_count();
    let mut map = vec![u32::MAX; f];
    map[0] = image0;
    let mut queue = vec![0u32];
    while let Some(x) = queue.pop() {
        for c in 0..pm.rank() {
            let y = pm.adj(c, x);
            let want = pm.adj(c, map[x as usize]);
            if map[y as usize] == u32::MAX {
                map[y as usize] = want;
                queue.push(y);
            }
        }
    }
    let mut hit = vec![false; f];
    for &m in &map {
        if m == u32::MAX || hit[m as usize] {
            return None;
        }
        hit[m as usize] = true;
    }
    for x in 0..f as Flag {
        for c in 0..pm.rank() {
            if map[pm.adj(c, x) as usize] != pm.adj(c, map[x as usize]) {
                return None;
            }
        }
    }
    Some(map)
}

#[test]
fn automorphism_groups_match_brute_force() {
    for (name, pm) in catalog_graphs() {
        if pm.flag_count() > 48 {
            continue;
        }
        let brute: Vec<Vec<Flag>> = (0..pm.flag_count() as Flag)
            .filter_map(|c| brute_automorphism_from(&pm, c))
            .collect();
        let aut = automorphisms(&pm);
        assert_eq!(aut.order(), brute.len(), "{name} group order");
        // Orbit of flag 0 = set of valid images of flag 0.
        let images: std::collections::HashSet<Flag> = brute.iter().map(|m| m[0]).collect();
        let orbit0: std::collections::HashSet<Flag> = (0..pm.flag_count() as Flag)
            .filter(|&x| aut.orbit_of[x as usize] == aut.orbit_of[0])
            .collect();
        assert_eq!(images, orbit0, "{name} orbit of flag 0");
    }
}

#[test]
fn coxeter_group_orders() {
    for (orders, expected) in [
        (vec![3usize, 3], 24usize),
        (vec![4, 3], 48),
        (vec![3, 4], 48),
        (vec![5, 3], 120),
        (vec![3, 5], 120),
        (vec![2, 6], 24),
    ] {
        let pres = Presentation::coxeter_string(&orders);
        let table = todd_coxeter(&pres, &[], 100_000).unwrap();
        assert_eq!(table.coset_count(), expected, "{orders:?}");
    }
}

#[test]
fn torus_map_invariants() {
    let torus = torus_chiral_44().unwrap().premaniplex();
    let report = analyze(&torus).unwrap();
    assert_eq!(report.flags, 40);
    assert_eq!(report.faces[0].count, 5);
    assert_eq!(report.faces[1].count, 10);
    assert_eq!(report.faces[2].count, 5);
    assert_eq!(report.genus, Some(1));
    assert_eq!(report.classification, "chiral");
    assert_eq!(report.automorphism_order, 20);
    assert!(report.polytope);
    // Chiral STG is the two-vertex graph with all colors linking.
    let stg = maniforge::io::parse_premaniplex(&report.stg)
        .unwrap()
        .premaniplex();
    let two_n = catalog_two_n(3, &[]).unwrap().premaniplex();
    assert!(stg.is_isomorphic(&two_n));
}

#[test]
fn regular_entries_have_point_stg() {
    for entry in &catalog_manifest().entries {
        if entry.classification.as_deref() != Some("regular") {
            continue;
        }
        let pm = catalog(&entry.name).unwrap().premaniplex();
        let aut = automorphisms(&pm);
        assert_eq!(classify(&pm, &aut), Classification::Regular, "{}", entry.name);
        let stg = maniforge::analysis::symmetry_type_graph(&pm, &aut).unwrap();
        assert_eq!(stg.premaniplex.flag_count(), 1, "{}", entry.name);
    }
}

struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
}

#[test]
fn group_arithmetic_properties() {
    let cube = regular_polytope_schlafli(&[4, 3], 10_000).unwrap();
    let g = &cube.group;
    let elems: Vec<_> = g.elements().collect();
    let mut rng = XorShift(0x9e3779b97f4a7c15);
    let pick = |rng: &mut XorShift| elems[(rng.next() % elems.len() as u64) as usize];
    for _ in 0..500 {
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let ab_c = g.compose(g.compose(a, b).unwrap(), c).unwrap();
        let a_bc = g.compose(a, g.compose(b, c).unwrap()).unwrap();
        assert_eq!(ab_c, a_bc);
        let inv = g.inverse(a).unwrap();
        assert!(g.is_identity(g.compose(a, inv).unwrap()));
        assert_eq!(g.compose(a, g.identity()).unwrap(), a);
        // full_perm is the right-multiplication action.
        let pa = g.full_perm(a).unwrap();
        let pb = g.full_perm(b).unwrap();
        assert_eq!(
            pa.then(&pb).images(),
            g.full_perm(g.compose(a, b).unwrap()).unwrap().images()
        );
        let ord = g.element_order(a).unwrap();
        assert!(ord >= 1 && g.order() % ord == 0);
    }
}

#[test]
fn degeneracy_detection() {
    let cube = regular_polytope_schlafli(&[4, 3], 10_000).unwrap();
    assert!(!cube.premaniplex().is_degenerate());
    let hoso = regular_polytope_schlafli(&[2, 4], 10_000).unwrap();
    assert!(hoso.premaniplex().is_degenerate());
}
