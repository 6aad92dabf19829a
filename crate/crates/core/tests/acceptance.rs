//! Acceptance suite: one test per criterion, each printing a PASS line and
//! holding its stated time budget. Run with `--nocapture` to see the lines.

mod common;

use std::time::{Duration, Instant};

use latcon::bitset::BitSet;
use latcon::closure::{
    enumerate_partitions, join_of_partitions, least_congruence, least_local_congruence,
    principal_local_congruence, JoinMode,
};
use latcon::fca::context::FormalContext;
use latcon::lattice::Quadrilateral;
use latcon::partition::Partition;
use latcon::quotient::{all_cycles_closed, class_preorder, quotient_poset, CycleCheck};
use latcon::reduce::reduce_partition;

fn finish(n: usize, name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("acceptance {n} ({name}): PASS ({elapsed:.2?})");
    assert!(
        elapsed < budget,
        "criterion {n} exceeded its {budget:?} budget: {elapsed:?}"
    );
}

/// The eight graded concepts, extents over (b1,b2,b3) and intents over
/// (a1,a2,a3,a4).
const FUZZY_TABLE: [([&str; 3], [&str; 4]); 8] = [
    (["0", "0", "0"], ["1", "1", "1", "1"]),
    (["1", "0", "0"], ["1", "0", "0", "0"]),
    (["0", "0.5", "0"], ["0", "1", "0", "1"]),
    (["0", "0", "1"], ["0", "0", "1", "1"]),
    (["1", "1", "1"], ["0", "0", "0", "0"]),
    (["0", "1", "0"], ["0", "0.5", "0", "0.5"]),
    (["0", "0.5", "1"], ["0", "0", "0", "1"]),
    (["0", "1", "1"], ["0", "0", "0", "0.5"]),
];

/// Concept index in the computed lattice for each table row.
fn fuzzy_row_indices(
    ctx: &latcon::FuzzyContext,
    cl: &latcon::FuzzyConceptLattice,
) -> Vec<usize> {
    FUZZY_TABLE
        .iter()
        .map(|(extent, _)| {
            let grades: Vec<latcon::Frac> = extent.iter().map(|s| common::frac(s)).collect();
            let idx = ctx.grades_from(&grades).unwrap();
            cl.index_of_extent(&idx).expect("table row present")
        })
        .collect()
}

#[test]
fn criterion_1_fuzzy_concept_enumeration() {
    let start = Instant::now();
    let ctx = common::load_fuzzy_context();
    let cl = ctx.concepts().unwrap();
    assert_eq!(cl.len(), 8, "exactly eight concepts");
    let rows = fuzzy_row_indices(&ctx, &cl);
    for ((extent, intent), &idx) in FUZZY_TABLE.iter().zip(&rows) {
        let concept = &cl.concepts[idx];
        let want_extent: Vec<usize> = ctx
            .grades_from(&extent.iter().map(|s| common::frac(s)).collect::<Vec<_>>())
            .unwrap();
        let want_intent: Vec<usize> = ctx
            .grades_from(&intent.iter().map(|s| common::frac(s)).collect::<Vec<_>>())
            .unwrap();
        assert_eq!(concept.extent, want_extent);
        assert_eq!(concept.intent, want_intent, "intent of extent {extent:?}");
    }
    // Eight distinct rows found among eight concepts: a bijection.
    let mut sorted = rows.clone();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), 8);
    finish(1, "fuzzy concept enumeration", start, Duration::from_secs(1));
}

#[test]
fn criterion_2_fuzzy_reduction() {
    let start = Instant::now();
    let ctx = common::load_fuzzy_context();
    let cl = ctx.concepts().unwrap();
    let rows = fuzzy_row_indices(&ctx, &cl); // rows[k] = index of table row k
    let d1 = ctx.attribute_set(&["a1", "a2"]).unwrap();
    let induced = cl.induced_relation(&ctx, &d1).unwrap();

    let want = Partition::from_blocks(
        8,
        &[
            vec![rows[0]],
            vec![rows[1]],
            vec![rows[2]],
            vec![rows[5]],
            vec![rows[3], rows[4], rows[6], rows[7]],
        ],
    )
    .unwrap();
    assert_eq!(induced, want, "induced classes");

    // A local congruence already: the closure fixpoint returns it unchanged.
    assert!(induced.is_local_congruence(&cl.lattice));
    let (closed, trace) = least_local_congruence(&cl.lattice, &induced);
    assert_eq!(closed, induced);
    assert!(trace.steps.is_empty());

    // Not quadrilateral-closed, witnessed by the quadrilateral on table
    // rows 0,2 (split) against 3,6 (together).
    let quad = Quadrilateral {
        a: rows[0],
        b: rows[2],
        c: rows[3],
        d: rows[6],
    };
    assert!(cl.lattice.quadrilaterals().contains(&quad));
    assert!(!induced.is_quadrilateral_closed(&cl.lattice));
    let witness = induced.quadrilateral_witness(&cl.lattice).unwrap();
    let together = [witness.a, witness.b];
    let split = [witness.c, witness.d];
    assert_eq!(
        {
            let mut t = together;
            t.sort_unstable();
            t
        },
        {
            let mut t = [rows[3], rows[6]];
            t.sort_unstable();
            t
        }
    );
    assert_eq!(
        {
            let mut s = split;
            s.sort_unstable();
            s
        },
        {
            let mut s = [rows[0], rows[2]];
            s.sort_unstable();
            s
        }
    );

    // The congruence comparison collapses everything.
    let (cong, _) = least_congruence(&cl.lattice, &induced);
    assert_eq!(cong, Partition::single_block(8));
    finish(2, "fuzzy reduction", start, Duration::from_secs(1));
}

/// Extents of the twelve planet concepts, frozen from the exhaustive
/// closure scan.
const PLANET_EXTENTS: [&[&str]; 12] = [
    &[],
    &["P"],
    &["U", "N"],
    &["J", "S"],
    &["J", "S", "U", "N", "P"],
    &["E", "Ma"],
    &["E", "Ma", "P"],
    &["E", "Ma", "J", "S", "U", "N", "P"],
    &["M", "V"],
    &["M", "V", "E", "Ma"],
    &["M", "V", "E", "Ma", "P"],
    &["M", "V", "E", "Ma", "J", "S", "U", "N", "P"],
];

/// The induced classes for D1 = {ss, ms, ns, my}, frozen from the same
/// scan, as indices into `PLANET_EXTENTS`.
const PLANET_D1_CLASSES: [&[usize]; 8] = [
    &[0],
    &[1, 6],
    &[2],
    &[3, 4, 7],
    &[5],
    &[8, 9],
    &[10],
    &[11],
];

#[test]
fn criterion_3_planets_reduction() {
    let start = Instant::now();
    let ctx = common::load_planets();
    let cl = ctx.concepts().unwrap();
    assert_eq!(cl.len(), 12, "frozen concept count");
    for (i, labels) in PLANET_EXTENTS.iter().enumerate() {
        let extent = ctx.object_set(labels).unwrap();
        assert_eq!(cl.concepts[i].extent, extent, "extent of concept {i}");
    }

    let d1 = ctx.attribute_set(&["ss", "ms", "ns", "my"]).unwrap();
    let induced = cl.induced_relation(&ctx, &d1).unwrap();
    let want = Partition::from_blocks(
        12,
        &PLANET_D1_CLASSES.map(|c| c.to_vec()),
    )
    .unwrap();
    assert_eq!(induced, want, "frozen class membership");

    // Already a local congruence.
    assert!(induced.is_local_congruence(&cl.lattice));
    let (closed, _) = least_local_congruence(&cl.lattice, &induced);
    assert_eq!(closed, induced);

    // The least congruence containing it has exactly two classes: concepts
    // whose extents avoid M versus the rest.
    let (cong, _) = least_congruence(&cl.lattice, &induced);
    assert_eq!(cong.block_count(), 2);
    let lower: Vec<usize> = (0..8).collect();
    let upper: Vec<usize> = (8..12).collect();
    assert_eq!(cong, Partition::from_blocks(12, &[lower, upper]).unwrap());
    assert!(cong.compatibility_check(&cl.lattice));
    finish(3, "planets reduction", start, Duration::from_secs(5));
}

#[test]
fn criterion_4_non_antisymmetry() {
    let start = Instant::now();
    let lat = common::load_lattice("pinwheel.json");
    let delta = common::load_partition(&lat, "pinwheel_delta.json");
    let digraph = class_preorder(&lat, &delta).unwrap();
    let bx = delta.block_of(lat.index_of("x1").unwrap());
    let by = delta.block_of(lat.index_of("y1").unwrap());
    assert_ne!(bx, by);
    assert!(digraph.reaches(bx, by) && digraph.reaches(by, bx));

    match all_cycles_closed(&lat, &delta).unwrap() {
        CycleCheck::Open(cycle) => {
            // Reconstructible witness: a genuine alternating cycle crossing
            // block boundaries.
            assert_eq!(cycle.first(), cycle.last());
            assert!(cycle.len() >= 3);
            for w in cycle.windows(2) {
                assert!(
                    delta.same_block(w[0], w[1]) || lat.leq(w[0], w[1]),
                    "invalid step {} -> {}",
                    lat.label(w[0]),
                    lat.label(w[1])
                );
            }
            let blocks: std::collections::HashSet<usize> =
                cycle.iter().map(|&e| delta.block_of(e)).collect();
            assert!(blocks.len() >= 2, "cycle is not closed");
        }
        CycleCheck::AllClosed => panic!("expected open cycles"),
    }
    finish(4, "non-antisymmetry witness", start, Duration::from_secs(1));
}

#[test]
fn criterion_5_non_lattice_quotient() {
    let start = Instant::now();
    let lat = common::load_lattice("no_sup.json");
    let delta = common::load_partition(&lat, "no_sup_delta.json");
    assert!(all_cycles_closed(&lat, &delta).unwrap().is_closed());
    let q = quotient_poset(&lat, &delta).unwrap();
    assert_eq!(q.len(), 8);
    assert!(!q.is_lattice());
    let (i, j) = q.lattice_defect().unwrap();
    let x_class = delta.block_of(lat.index_of("x").unwrap());
    let y_class = delta.block_of(lat.index_of("y").unwrap());
    assert_eq!((i, j), (x_class.min(y_class), x_class.max(y_class)));
    finish(5, "non-lattice quotient", start, Duration::from_secs(1));
}

#[test]
fn criterion_6_pipeline_end_to_end() {
    let start = Instant::now();
    let lat = common::load_lattice("rotor.json");
    let blocks = common::load_partition(&lat, "rotor_blocks.json");
    let report = reduce_partition(&lat, blocks, "rotor", None);

    // The first closure has exactly the expected open cycle.
    assert_eq!(report.repair_rounds(), 1);
    let round = &report.iterations[0];
    let cycle: Vec<&str> = round.open_cycle.iter().map(|&e| lat.label(e)).collect();
    assert_eq!(cycle, vec!["p0", "p5", "p1", "p7", "p2", "p3", "p0"]);

    // The strongly-connected merge pools the three cycling classes and is
    // not a local congruence.
    assert!(!round.was_local_congruence);
    assert!(!round.scc_merged.is_local_congruence(&lat));
    let pooled: Vec<usize> = (1..=12).collect();
    assert_eq!(
        round.scc_merged,
        Partition::from_blocks(
            19,
            &[
                vec![0],
                pooled,
                vec![13],
                vec![14],
                vec![15, 17],
                vec![16, 18],
            ],
        )
        .unwrap()
    );

    // Final quotient is a four-element chain.
    assert_eq!(report.quotient.len(), 4);
    let covers = report.quotient.covers();
    assert_eq!(covers, &[(0, 1), (1, 2), (2, 3)]);
    assert!(report.quotient.is_lattice());
    let class_names: Vec<Vec<&str>> = report
        .quotient
        .classes
        .iter()
        .map(|c| c.iter().map(|&e| lat.label(e)).collect())
        .collect();
    assert_eq!(class_names[1], vec!["p13"]);
    assert_eq!(class_names[2], vec!["p14", "p16"]);
    assert_eq!(class_names[3], vec!["p15", "top"]);
    assert_eq!(class_names[0].len(), 14);
    finish(6, "pipeline end to end", start, Duration::from_secs(1));
}

#[test]
fn criterion_7_oracle_equivalence() {
    let start = Instant::now();
    let catalog = common::lattice_catalog(7);
    assert!(
        catalog.len() >= 50,
        "catalog has {} non-isomorphic lattices",
        catalog.len()
    );

    for lat in &catalog {
        let n = lat.n();
        let all: Vec<Partition> = enumerate_partitions(n).collect();

        // (a), (b): predicate pairs agree on every partition.
        for p in &all {
            assert_eq!(
                p.local_compatibility_check(lat),
                p.is_local_congruence(lat),
                "(a) on {lat:?} {p:?}"
            );
            assert_eq!(
                p.compatibility_check(lat),
                p.is_congruence(lat),
                "(b) on {lat:?} {p:?}"
            );
        }

        let lcons: Vec<Partition> = all
            .iter()
            .filter(|p| p.local_compatibility_check(lat))
            .cloned()
            .collect();

        // (c): the forced-merge fixpoint equals the exhaustive meet.
        for p in &all {
            let (fast, trace) = least_local_congruence(lat, p);
            let slow = common::oracle_least_local_congruence(lat, p, &lcons);
            assert_eq!(fast, slow, "(c) on {lat:?} {p:?}");
            assert_eq!(trace.replay(p), fast);
        }

        for delta in &lcons {
            // (d): cycle closure matches antisymmetry of the element-level
            // reachability, computed by an independent closure.
            let closed = all_cycles_closed(lat, delta).unwrap().is_closed();
            let reach = common::delta_reach_direct(lat, delta);
            let antisym = (0..n).all(|x| {
                (0..n).all(|y| {
                    !(reach[x].contains(y)
                        && reach[y].contains(x)
                        && !delta.same_block(x, y))
                })
            });
            assert_eq!(closed, antisym, "(d) on {lat:?} {delta:?}");

            // (f): principal local congruences factorize every local
            // congruence.
            let pairs = delta.related_pairs();
            if pairs.is_empty() {
                assert_eq!(delta, &Partition::identity(n));
            } else {
                let principals: Vec<Partition> = pairs
                    .iter()
                    .map(|&(a, b)| principal_local_congruence(lat, a, b))
                    .collect();
                let joined = join_of_partitions(lat, &principals, JoinMode::Local).unwrap();
                assert_eq!(&joined, delta, "(f) on {lat:?} {delta:?}");
            }
        }

        // (e): intersections of local congruences are local congruences.
        for (i, p) in lcons.iter().enumerate() {
            for q in &lcons[i..] {
                let meet = p.common_refinement(q);
                assert!(meet.is_local_congruence(lat), "(e) on {lat:?} {p:?} {q:?}");
            }
        }
    }
    finish(7, "oracle equivalence", start, Duration::from_secs(300));
}

#[test]
fn criterion_8_induced_classes_are_join_semilattices() {
    let start = Instant::now();

    fn check_context(ctx: &FormalContext, tag: &str) {
        let cl = ctx.concepts().unwrap();
        let m = ctx.attributes().len();
        for mask in 1u32..(1 << m) {
            let d = BitSet::from_indices(m, (0..m).filter(|&a| mask & (1 << a) != 0));
            let induced = cl.induced_relation(ctx, &d).unwrap();
            for block in induced.blocks() {
                // Join-closed with a maximum.
                let max = cl.class_max(block).unwrap_or_else(|_| {
                    panic!("{tag}: block without maximum for d={d:?}")
                });
                for &x in block {
                    for &y in block {
                        let j = cl.lattice.join(x, y);
                        assert!(
                            block.contains(&j),
                            "{tag}: block not join-closed for d={d:?}"
                        );
                    }
                    assert!(cl.lattice.leq(x, max));
                    // The maximum is the closure of each member through
                    // the restricted operators.
                    let closure = ctx.down(&cl.concepts[x].intent.intersection(&d));
                    assert_eq!(
                        closure, cl.concepts[max].extent,
                        "{tag}: closure formula for d={d:?}"
                    );
                }
            }
        }
    }

    check_context(&common::load_planets(), "planets");

    // The fuzzy fixture, via the graded closure formula.
    {
        let ctx = common::load_fuzzy_context();
        let cl = ctx.concepts().unwrap();
        let m = ctx.attributes().len();
        for mask in 1u32..(1 << m) {
            let d = BitSet::from_indices(m, (0..m).filter(|&a| mask & (1 << a) != 0));
            let induced = cl.induced_relation(&ctx, &d).unwrap();
            for block in induced.blocks() {
                let max = cl.class_max(block).unwrap();
                for &x in block {
                    for &y in block {
                        assert!(block.contains(&cl.lattice.join(x, y)));
                    }
                    let closure = ctx.extent_closure_restricted(&cl.concepts[x].extent, &d);
                    assert_eq!(closure, cl.concepts[max].extent);
                }
            }
        }
    }

    for seed in 0..100u64 {
        let (na, nb) = if seed % 2 == 0 { (4, 4) } else { (5, 5) };
        let ctx = common::random_context(0xACCE97 + seed, na, nb);
        check_context(&ctx, &format!("random context {seed}"));
    }
    finish(8, "induced classes", start, Duration::from_secs(60));
}
