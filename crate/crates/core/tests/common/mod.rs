//! Shared test scaffolding: a catalog of every small lattice up to
//! isomorphism, independent brute-force oracles, deterministic random
//! generators and fixture loading.

#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use latcon::bitset::BitSet;
use latcon::closure::enumerate_partitions;
use latcon::fca::context::{parse_cxt, FormalContext};
use latcon::fca::fuzzy::{Frac, FuzzyContext, FuzzyContextFile};
use latcon::lattice::{FiniteLattice, LatticeFile};
use latcon::partition::{Partition, PartitionFile};

// ----- fixtures -----

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name))
        .unwrap_or_else(|e| panic!("reading fixture {name}: {e}"))
}

pub fn load_lattice(name: &str) -> FiniteLattice {
    let file: LatticeFile = serde_json::from_str(&fixture_text(name)).unwrap();
    FiniteLattice::from_file(&file).unwrap()
}

pub fn load_partition(lat: &FiniteLattice, name: &str) -> Partition {
    let file: PartitionFile = serde_json::from_str(&fixture_text(name)).unwrap();
    Partition::from_file(lat, &file).unwrap()
}

pub fn load_planets() -> FormalContext {
    parse_cxt(&fixture_text("planets.cxt")).unwrap()
}

pub fn load_fuzzy_context() -> FuzzyContext {
    let file: FuzzyContextFile = serde_json::from_str(&fixture_text("fuzzy_chain3.json")).unwrap();
    FuzzyContext::from_file(&file).unwrap()
}

pub fn frac(s: &str) -> Frac {
    Frac::from_decimal_str(s).unwrap()
}

// ----- deterministic pseudo-random numbers -----

pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.next() % den < num
    }
}

pub fn random_context(seed: u64, attributes: usize, objects: usize) -> FormalContext {
    let mut rng = SplitMix(seed);
    let attr_labels: Vec<String> = (0..attributes).map(|i| format!("a{i}")).collect();
    let obj_labels: Vec<String> = (0..objects).map(|i| format!("b{i}")).collect();
    let incidence: Vec<Vec<bool>> = (0..attributes)
        .map(|_| (0..objects).map(|_| rng.chance(1, 2)).collect())
        .collect();
    FormalContext::new(attr_labels, obj_labels, &incidence).unwrap()
}

// ----- catalog of all small lattices up to isomorphism -----

/// Every lattice with at most `max_n` elements, one representative per
/// isomorphism class, elements labeled `e0..` in some linear extension.
pub fn lattice_catalog(max_n: usize) -> Vec<FiniteLattice> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for down in naturally_labeled_lattices(n) {
            let labels: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
            let mut pairs = Vec::new();
            for (i, &mask) in down.iter().enumerate() {
                for j in 0..i {
                    if mask & (1 << j) != 0 {
                        pairs.push((j, i));
                    }
                }
            }
            out.push(FiniteLattice::from_order(labels, &pairs).unwrap());
        }
    }
    out
}

/// Strict down-set masks of every lattice on `{0..n-1}` where the labeling
/// is a linear extension, deduplicated up to isomorphism.
fn naturally_labeled_lattices(n: usize) -> Vec<Vec<u32>> {
    let mut results = Vec::new();
    let mut seen = HashSet::new();
    let mut strict_down: Vec<u32> = vec![0];
    enumerate_orders(n, &mut strict_down, &mut results, &mut seen);
    results
}

fn enumerate_orders(
    n: usize,
    strict_down: &mut Vec<u32>,
    results: &mut Vec<Vec<u32>>,
    seen: &mut HashSet<u64>,
) {
    let i = strict_down.len();
    if i == n {
        if is_lattice_masks(strict_down) {
            let key = canonical_key(strict_down);
            if seen.insert(key) {
                results.push(strict_down.clone());
            }
        }
        return;
    }
    let full = (1u32 << i) - 1;
    // The last element must be the top; every other element sits above the
    // bottom, element 0.
    let candidates: Vec<u32> = if i == n - 1 {
        vec![full]
    } else {
        (0..=full).filter(|s| s & 1 == 1).collect()
    };
    for s in candidates {
        let down_closed = (0..i).all(|j| s & (1 << j) == 0 || strict_down[j] & !s == 0);
        if down_closed {
            strict_down.push(s);
            enumerate_orders(n, strict_down, results, seen);
            strict_down.pop();
        }
    }
}

fn is_lattice_masks(strict_down: &[u32]) -> bool {
    let n = strict_down.len();
    let down: Vec<u32> = strict_down
        .iter()
        .enumerate()
        .map(|(i, &m)| m | (1 << i))
        .collect();
    let mut up = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            if down[j] & (1 << i) != 0 {
                up[i] |= 1 << j;
            }
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let uppers = up[a] & up[b];
            if !(0..n).any(|u| uppers & (1 << u) != 0 && uppers & !up[u] == 0) {
                return false;
            }
            let lowers = down[a] & down[b];
            if !(0..n).any(|v| lowers & (1 << v) != 0 && lowers & !down[v] == 0) {
                return false;
            }
        }
    }
    true
}

/// Isomorphism-invariant key: the minimal order-matrix bit string over all
/// permutations that respect the (down-size, up-size) signature sort.
fn canonical_key(strict_down: &[u32]) -> u64 {
    let n = strict_down.len();
    let down: Vec<u32> = strict_down
        .iter()
        .enumerate()
        .map(|(i, &m)| m | (1 << i))
        .collect();
    let mut up = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            if down[j] & (1 << i) != 0 {
                up[i] |= 1 << j;
            }
        }
    }
    let sig = |e: usize| (down[e].count_ones(), up[e].count_ones());
    let mut base: Vec<usize> = (0..n).collect();
    base.sort_by_key(|&e| sig(e));
    // Runs of equal signature may be permuted among themselves.
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || sig(base[k]) != sig(base[start]) {
            runs.push((start, k));
            start = k;
        }
    }
    let leq = |a: usize, b: usize| down[b] & (1 << a) != 0;
    let mut best = u64::MAX;
    permute_runs(&mut base, &runs, 0, &mut |order| {
        let mut key = 0u64;
        for (new_a, &old_a) in order.iter().enumerate() {
            for (new_b, &old_b) in order.iter().enumerate() {
                if leq(old_a, old_b) {
                    key |= 1u64 << (new_a * order.len() + new_b);
                }
            }
        }
        best = best.min(key);
    });
    best
}

fn permute_runs(
    order: &mut Vec<usize>,
    runs: &[(usize, usize)],
    run: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if run == runs.len() {
        visit(order);
        return;
    }
    let (lo, hi) = runs[run];
    permute_range(order, lo, hi, run, runs, visit);
}

fn permute_range(
    order: &mut Vec<usize>,
    lo: usize,
    hi: usize,
    run: usize,
    runs: &[(usize, usize)],
    visit: &mut impl FnMut(&[usize]),
) {
    if lo + 1 >= hi {
        permute_runs(order, runs, run + 1, visit);
        return;
    }
    for k in lo..hi {
        order.swap(lo, k);
        permute_range(order, lo + 1, hi, run, runs, visit);
        order.swap(lo, k);
    }
}

// ----- independent oracles -----

/// Every local congruence, judged by the pointwise compatibility route.
pub fn oracle_local_congruences(lat: &FiniteLattice) -> Vec<Partition> {
    enumerate_partitions(lat.n())
        .filter(|p| p.local_compatibility_check(lat))
        .collect()
}

/// Every congruence, judged by the pointwise compatibility route.
pub fn oracle_congruences(lat: &FiniteLattice) -> Vec<Partition> {
    enumerate_partitions(lat.n())
        .filter(|p| p.compatibility_check(lat))
        .collect()
}

/// Least local congruence above `p` as the blockwise intersection of every
/// local congruence containing it.
pub fn oracle_least_local_congruence(
    lat: &FiniteLattice,
    p: &Partition,
    lcons: &[Partition],
) -> Partition {
    intersect_containing(lat, p, lcons)
}

pub fn oracle_least_congruence(
    lat: &FiniteLattice,
    p: &Partition,
    cons: &[Partition],
) -> Partition {
    intersect_containing(lat, p, cons)
}

fn intersect_containing(lat: &FiniteLattice, p: &Partition, family: &[Partition]) -> Partition {
    let mut acc = Partition::single_block(lat.n());
    let mut found = false;
    for q in family.iter().filter(|q| p.refines(q)) {
        acc = acc.common_refinement(q);
        found = true;
    }
    assert!(found, "the one-block relation always contains p");
    acc
}

/// Congruence closure by translation merges: for every related pair and
/// every element, unite the joins and unite the meets. An implementation
/// route independent of the quadrilateral-based one.
pub fn translation_congruence_closure(lat: &FiniteLattice, p: &Partition) -> Partition {
    let n = lat.n();
    let mut current = p.clone();
    loop {
        let mut raw: Vec<usize> = (0..n).map(|e| current.block_of(e)).collect();
        let mut changed = false;
        for (a, b) in current.related_pairs() {
            for c in 0..n {
                for (x, y) in [(lat.join(a, c), lat.join(b, c)), (lat.meet(a, c), lat.meet(b, c))]
                {
                    if raw[x] != raw[y] {
                        let (from, to) = (raw[x].max(raw[y]), raw[x].min(raw[y]));
                        for v in raw.iter_mut() {
                            if *v == from {
                                *v = to;
                            }
                        }
                        changed = true;
                    }
                }
            }
        }
        current = Partition::from_block_of(raw);
        if !changed {
            return current;
        }
    }
}

/// Element-level reachability of alternating sequences: the transitive
/// closure of "same block or below". Direct route for the class preorder.
pub fn delta_reach_direct(lat: &FiniteLattice, p: &Partition) -> Vec<BitSet> {
    let n = lat.n();
    let mut reach: Vec<BitSet> = (0..n)
        .map(|e| {
            let mut row = lat.up_set(e).clone();
            row.union_with(&BitSet::from_indices(n, p.block(p.block_of(e)).iter().copied()));
            row
        })
        .collect();
    for k in 0..n {
        for i in 0..n {
            if i != k && reach[i].contains(k) {
                let row = reach[k].clone();
                reach[i].union_with(&row);
            }
        }
    }
    reach
}
