//! File formats: round trips and error locations.

use framecalc::catalog::{corpus, named};
use framecalc::format::{self, parse_bif, parse_cng, parse_hom, parse_lat, parse_pairs, parse_spc};
use framecalc::spatial::skula_biframe;
use framecalc::{Congruence, FiniteSpace};

#[test]
fn corpus_round_trips_byte_identically() {
    let c = corpus().unwrap();
    for e in &c.lattices {
        let text = format::write_lat(&e.name, e.frame().unwrap());
        let doc = parse_lat(&text).unwrap();
        assert_eq!(format::write_lat(&doc.name, &doc.build().unwrap()), text, "{}", e.name);
    }
    for e in &c.spaces {
        let text = format::write_spc(&e.name, e.space().unwrap());
        let doc = parse_spc(&text).unwrap();
        assert_eq!(format::write_spc(&doc.name, &doc.build().unwrap()), text, "{}", e.name);
    }
    for (e, &(i, j)) in c.homs.iter().zip(&c.hom_ends).take(200) {
        let (s, t) = (&c.lattices[i], &c.lattices[j]);
        let framecalc::catalog::Payload::Hom(f) = &e.payload else { unreachable!() };
        let text = format::write_hom(&s.name, &t.name, f);
        let doc = parse_hom(&text).unwrap();
        let back = doc.build(s.frame().unwrap().clone(), t.frame().unwrap().clone()).unwrap();
        assert_eq!(format::write_hom(&s.name, &t.name, &back), text);
    }
}

#[test]
fn biframe_and_congruence_round_trip() {
    let b = skula_biframe(&FiniteSpace::sierpinski(), false).unwrap();
    let text = format::write_bif("skula", &b);
    assert_eq!(format::write_bif("skula", &parse_bif(&text).unwrap().build(false).unwrap()), text);

    let f = named("chain(4)").unwrap().frame().unwrap().clone();
    let c = Congruence::generated(&f, &[(1, 2)]).unwrap();
    let text = format::write_cng("chain4", &c);
    let (_, back) = parse_cng(&text).unwrap().build().unwrap();
    assert_eq!(format::write_cng("chain4", &back.unwrap()), text);
}

#[test]
fn json_keys_are_sorted() {
    let f = named("chain(3)").unwrap().frame().unwrap().clone();
    let s = serde_json::to_string(&format::frame_json("c", &f)).unwrap();
    assert_eq!(s, r#"{"covers":[[0,1],[1,2]],"name":"c","size":3}"#);
}

#[test]
fn errors_carry_locations() {
    let e = parse_lat("lat x 3\ncover 0 7\n").unwrap_err();
    assert_eq!((e.line, e.column), (2, 9));
    let e = parse_lat("# nothing\n\nlattice x 3\n").unwrap_err();
    assert_eq!(e.line, 3);
    let e = parse_spc("spc s 2\nopen 0 2\n").unwrap_err();
    assert_eq!(e.line, 2);
    let e = parse_bif("lat b 2\ncover 0 1\npart1 0 1\n").unwrap_err();
    assert!(e.message.contains("part2"));
    let e = parse_pairs("0,1;2").unwrap_err();
    assert_eq!(e.column, 5);
    assert_eq!(parse_pairs(" 0, 1 ; 2,3").unwrap(), vec![(0, 1), (2, 3)]);
}

#[test]
fn validation_follows_parsing() {
    let n5 = "lat n5 5\ncover 0 1\ncover 1 2\ncover 2 4\ncover 0 3\ncover 3 4\n";
    let err = parse_lat(n5).unwrap().build().unwrap_err();
    assert!(matches!(err, framecalc::Error::NotDistributive { .. }), "{err}");
    let bad = "lat c 3\ncover 0 1\ncover 1 2\nnucleus 0 0 2\n";
    let (_, c) = parse_cng(bad).unwrap().build().unwrap();
    assert!(c.unwrap_err().to_string().contains("inflationary"));
}

#[test]
fn fuzz_seeds_parse_without_panicking() {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fuzz/corpus");
    let mut seen = 0;
    for target in std::fs::read_dir(root).unwrap() {
        let target = target.unwrap();
        let name = target.file_name().into_string().unwrap();
        for seed in std::fs::read_dir(target.path()).unwrap() {
            let text = std::fs::read_to_string(seed.unwrap().path()).unwrap();
            let parsed = match name.as_str() {
                "parse_lat" => parse_lat(&text).is_ok(),
                "parse_hom" => parse_hom(&text).is_ok(),
                "parse_spc" => parse_spc(&text).is_ok(),
                "parse_bif" => parse_bif(&text).is_ok(),
                "parse_cng" => parse_cng(&text).is_ok(),
                "parse_pairs" => parse_pairs(&text).is_ok(),
                other => panic!("seed directory for unknown target {other}"),
            };
            assert!(parsed, "{name} seed does not parse: {text}");
            seen += 1;
        }
    }
    assert!(seen >= 12);
}
