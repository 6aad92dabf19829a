//! Serialization round trips for every file format the crate speaks.

mod common;

use proptest::prelude::*;

use latcon::fca::context::{parse_cxt, write_cxt};
use latcon::fca::fuzzy::{FiniteChain, Frac, FuzzyContext, FuzzyContextFile};
use latcon::lattice::{FiniteLattice, LatticeFile};
use latcon::partition::{Partition, PartitionFile};

#[test]
fn fixture_lattices_round_trip() {
    for name in ["pinwheel.json", "no_sup.json", "rotor.json", "diamond.json", "chain3.json"] {
        let lat = common::load_lattice(name);
        let text = serde_json::to_string(&lat.to_file()).unwrap();
        let back: LatticeFile = serde_json::from_str(&text).unwrap();
        let lat2 = FiniteLattice::from_file(&back).unwrap();
        assert_eq!(lat.covers(), lat2.covers(), "{name}");
        assert_eq!(lat.labels(), lat2.labels(), "{name}");
    }
}

#[test]
fn fixture_partitions_round_trip() {
    for (lattice, partition) in [
        ("pinwheel.json", "pinwheel_delta.json"),
        ("no_sup.json", "no_sup_delta.json"),
        ("rotor.json", "rotor_blocks.json"),
    ] {
        let lat = common::load_lattice(lattice);
        let p = common::load_partition(&lat, partition);
        let text = serde_json::to_string(&p.to_file(&lat)).unwrap();
        let back: PartitionFile = serde_json::from_str(&text).unwrap();
        assert_eq!(Partition::from_file(&lat, &back).unwrap(), p);
    }
}

#[test]
fn partition_file_errors() {
    let lat = common::load_lattice("chain3.json");
    let missing: PartitionFile = serde_json::from_str(r#"{"blocks": [["a"], ["b"]]}"#).unwrap();
    assert!(Partition::from_file(&lat, &missing).is_err());
    let dup: PartitionFile =
        serde_json::from_str(r#"{"blocks": [["a", "b"], ["b", "c"]]}"#).unwrap();
    assert!(Partition::from_file(&lat, &dup).is_err());
    let unknown: PartitionFile =
        serde_json::from_str(r#"{"blocks": [["a", "b"], ["q"]]}"#).unwrap();
    assert!(Partition::from_file(&lat, &unknown).is_err());
}

#[test]
fn fuzzy_fixture_round_trip() {
    let ctx = common::load_fuzzy_context();
    let text = serde_json::to_string_pretty(&ctx.to_file()).unwrap();
    let back: FuzzyContextFile = serde_json::from_str(&text).unwrap();
    assert_eq!(FuzzyContext::from_file(&back).unwrap(), ctx);
}

#[test]
fn planets_cxt_round_trip() {
    let ctx = common::load_planets();
    assert_eq!(ctx.objects().len(), 9);
    assert_eq!(ctx.attributes().len(), 7);
    let back = parse_cxt(&write_cxt(&ctx)).unwrap();
    assert_eq!(back, ctx);
}

proptest! {
    #[test]
    fn random_contexts_round_trip_through_cxt(seed in 0u64..500, na in 1usize..7, nb in 1usize..7) {
        let ctx = common::random_context(seed, na, nb);
        let back = parse_cxt(&write_cxt(&ctx)).unwrap();
        prop_assert_eq!(back, ctx);
    }

    #[test]
    fn catalog_lattices_round_trip_through_json(idx in 0usize..25, seed in 0u64..100) {
        let catalog = common::lattice_catalog(6);
        let lat = &catalog[idx % catalog.len()];
        let _ = seed;
        let text = serde_json::to_string(&lat.to_file()).unwrap();
        let back = FiniteLattice::from_file(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(lat.covers(), back.covers());
    }

    #[test]
    fn decimal_fracs_round_trip(num in 0i64..10_000, exp in 0u32..5) {
        let den = 10i64.pow(exp);
        let f = Frac::new(num, den);
        let text = f.to_decimal_string();
        prop_assert_eq!(Frac::from_decimal_str(&text).unwrap(), f);
        // And through JSON number form.
        let json = serde_json::to_string(&f).unwrap();
        let back: Frac = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn random_two_grade_contexts_round_trip_as_fuzzy_json(seed in 0u64..200) {
        let ctx = common::random_context(seed, 3, 3);
        let chain = FiniteChain::new(vec![Frac::zero(), Frac::one()]).unwrap();
        let rows: Vec<Vec<Frac>> = (0..3)
            .map(|a| (0..3).map(|b| if ctx.incidence(a, b) { Frac::one() } else { Frac::zero() }).collect())
            .collect();
        let fctx = FuzzyContext::new(
            ctx.attributes().to_vec(),
            ctx.objects().to_vec(),
            chain,
            &rows,
        ).unwrap();
        let text = serde_json::to_string(&fctx.to_file()).unwrap();
        let back = FuzzyContext::from_file(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, fctx);
    }
}
