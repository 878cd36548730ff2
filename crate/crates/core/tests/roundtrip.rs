//! Serialization round-trips for the .mpx/.vpx/.grp formats and the
//! quotient/derived-graph round-trip.

use maniforge::constructions::{
    catalog, catalog_manifest, catalog_voltage_graphs, example420_presentation,
};
use maniforge::group::presentation::{GenLetter, Presentation};
use maniforge::group::FreeActionGroup;
use maniforge::io::{parse_premaniplex, parse_voltage, serialize_premaniplex, serialize_voltage};
use maniforge::voltage::{quotient, Cover};
use proptest::prelude::*;

#[test]
fn mpx_round_trip() {
    for entry in &catalog_manifest().entries {
        let pm = catalog(&entry.name).unwrap().premaniplex();
        let text = serialize_premaniplex(&pm);
        let back = parse_premaniplex(&text).unwrap().premaniplex();
        assert_eq!(pm.perms(), back.perms(), "{}", entry.name);
        // Determinism.
        assert_eq!(text, serialize_premaniplex(&back), "{}", entry.name);
    }
}

#[test]
fn vpx_round_trip() {
    for (name, v) in catalog_voltage_graphs().unwrap() {
        let text = serialize_voltage(&v);
        let back = parse_voltage(&text).unwrap();
        assert_eq!(v.base().perms(), back.base().perms(), "{name}");
        assert_eq!(
            v.group().generator_names(),
            back.group().generator_names(),
            "{name}"
        );
        for i in 0..v.group().generator_count() {
            assert_eq!(
                v.group().generator_perm(i).images(),
                back.group().generator_perm(i).images(),
                "{name} generator {i}"
            );
        }
        assert_eq!(v.xi(), back.xi(), "{name}");
    }
}

#[test]
fn grp_round_trip() {
    let mut presentations = vec![
        example420_presentation().unwrap(),
        Presentation::coxeter_string(&[4, 3]),
        Presentation::coxeter_string(&[3, 5, 2]),
    ];
    for pres in presentations.drain(..) {
        let text = pres.serialize();
        let back = Presentation::parse(&text).unwrap();
        assert_eq!(pres.generator_names, back.generator_names);
        assert_eq!(pres.relators, back.relators);
    }
}

fn deck_group(cover: &Cover) -> FreeActionGroup {
    let g = cover.voltage.group();
    let order = g.order();
    let total = cover.total_premaniplex().flag_count();
    let mut gens = Vec::new();
    let mut names = Vec::new();
    for i in 0..g.generator_count() {
        let gi = g.generator(i);
        let images: Vec<u32> = (0..total)
            .map(|x| {
                let fiber = x / order;
                let elem = g.elem_at(x % order);
                let moved = g.compose(elem, gi).unwrap();
                (fiber * order + g.position_of(moved).unwrap()) as u32
            })
            .collect();
        gens.push(maniforge::group::Perm::new(images).unwrap());
        names.push(format!("d{i}"));
    }
    FreeActionGroup::close(names, gens, 0).unwrap()
}

#[test]
fn quotient_inverts_derived_graph() {
    for (name, v) in catalog_voltage_graphs().unwrap() {
        if v.base().flag_count() * v.group().order() > 2000 {
            continue;
        }
        let cover = v.derived_graph().unwrap();
        let deck = deck_group(&cover);
        assert_eq!(deck.order(), v.group().order(), "{name} deck order");
        let q = quotient(cover.total_premaniplex(), &deck).unwrap();
        assert!(
            q.voltage.base().is_isomorphic(v.base()),
            "{name}: quotient base differs from the original base"
        );
        // And deriving the quotient recovers the cover.
        let rederived = q.voltage.derived_graph().unwrap();
        assert!(
            rederived
                .total_premaniplex()
                .is_isomorphic(cover.total_premaniplex()),
            "{name}: re-derived graph differs from the cover"
        );
    }
}

prop_compose! {
    fn word()(letters in prop::collection::vec((0usize..3, any::<bool>()), 1..8)) -> Vec<GenLetter> {
        letters.into_iter().map(|(gen, inverse)| GenLetter { gen, inverse }).collect()
    }
}

proptest! {
    #[test]
    fn presentation_text_round_trip(relators in prop::collection::vec(word(), 0..6)) {
        let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        let pres = Presentation::new(names, relators).unwrap();
        let back = Presentation::parse(&pres.serialize()).unwrap();
        prop_assert_eq!(pres.relators, back.relators);
    }
}
