//! Least congruences and least local congruences containing a given
//! partition, computed as fixpoints of forced merges.
//!
//! Every merge performed is necessary: if two elements share a block of any
//! (local) congruence containing the input, the rules below force their
//! meets, joins, intervals and (for congruences) opposite quadrilateral
//! sides into shared blocks too. The fixpoint is therefore the least
//! (local) congruence above the input, independent of merge order; the
//! exhaustive enumeration oracle in the test suite checks exactly that.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::FiniteLattice;
use crate::partition::{LocalViolation, Partition, PartitionError, UnionFind};

/// Ceiling for exhaustive enumeration over all partitions of the lattice.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClosureError {
    #[error("lattice with {n} elements exceeds the enumeration cap {cap}")]
    LatticeTooLarge { n: usize, cap: usize },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("no partitions given")]
    NoInput,
}

/// Why a merge was forced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MergeRule {
    SublatticeMeet,
    SublatticeJoin,
    Convexity,
    Quadrilateral,
}

/// One forced merge: uniting the blocks of `united.0` and `united.1`,
/// justified by `rule` applied to the `witness` elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeStep {
    pub rule: MergeRule,
    pub witness: Vec<usize>,
    pub united: (usize, usize),
}

/// The ordered merge log of one closure run. Replaying the steps on the
/// input partition reproduces the output.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureTrace {
    pub steps: Vec<MergeStep>,
}

impl ClosureTrace {
    pub fn replay(&self, start: &Partition) -> Partition {
        let mut uf = UnionFind::new(start.n());
        for block in start.blocks() {
            for w in block.windows(2) {
                uf.unite(w[0], w[1]);
            }
        }
        for step in &self.steps {
            uf.unite(step.united.0, step.united.1);
        }
        uf.into_partition()
    }

    /// One JSON object per merge, with element labels resolved.
    pub fn to_json_lines(&self, lat: &FiniteLattice) -> String {
        let mut out = String::new();
        for step in &self.steps {
            let line = serde_json::json!({
                "rule": step.rule,
                "witness": step.witness.iter().map(|&e| lat.label(e)).collect::<Vec<_>>(),
                "united": [lat.label(step.united.0), lat.label(step.united.1)],
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }
}

/// How pending merges are picked. `Scan` takes the first violation in block
/// order; `Seeded` picks pseudo-randomly, used to exercise confluence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeOrder {
    Scan,
    Seeded(u64),
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn violation_steps(
    lat: &FiniteLattice,
    p: &Partition,
    quads: Option<&[crate::lattice::Quadrilateral]>,
    all: bool,
) -> Vec<MergeStep> {
    let mut steps = Vec::new();
    if !all {
        if let Some(v) = p.local_violation(lat) {
            steps.push(local_step(v));
        }
        if steps.is_empty() {
            if let Some(q) = quads
                .into_iter()
                .flatten()
                .find(|q| p.same_block(q.a, q.b) && !p.same_block(q.c, q.d))
            {
                steps.push(quad_step(*q));
            }
        }
        return steps;
    }
    for b in 0..p.block_count() {
        if let Some(s) = p.sublattice_violation(lat, b) {
            steps.push(local_step(LocalViolation::Sublattice(s)));
        }
        if let Some(c) = p.convexity_violation(lat, b) {
            steps.push(local_step(LocalViolation::Convexity(c)));
        }
    }
    for q in quads.into_iter().flatten() {
        if p.same_block(q.a, q.b) && !p.same_block(q.c, q.d) {
            steps.push(quad_step(*q));
        }
    }
    steps
}

fn local_step(v: LocalViolation) -> MergeStep {
    match v {
        LocalViolation::Sublattice(s) => MergeStep {
            rule: if s.is_meet {
                MergeRule::SublatticeMeet
            } else {
                MergeRule::SublatticeJoin
            },
            witness: vec![s.a, s.b],
            united: (s.a, s.escaped),
        },
        LocalViolation::Convexity(c) => MergeStep {
            rule: MergeRule::Convexity,
            witness: vec![c.a, c.b],
            united: (c.a, c.missing),
        },
    }
}

fn quad_step(q: crate::lattice::Quadrilateral) -> MergeStep {
    MergeStep {
        rule: MergeRule::Quadrilateral,
        witness: vec![q.a, q.b],
        united: (q.c, q.d),
    }
}

fn close(
    lat: &FiniteLattice,
    start: &Partition,
    quadrilaterals: bool,
    order: MergeOrder,
) -> (Partition, ClosureTrace) {
    assert_eq!(start.n(), lat.n());
    let quads = quadrilaterals.then(|| lat.quadrilaterals());
    let mut current = start.clone();
    let mut trace = ClosureTrace::default();
    let mut rng = match order {
        MergeOrder::Scan => None,
        MergeOrder::Seeded(s) => Some(s),
    };
    loop {
        let candidates = violation_steps(lat, &current, quads.as_deref(), rng.is_some());
        if candidates.is_empty() {
            break;
        }
        let pick = match rng.as_mut() {
            None => 0,
            Some(state) => (splitmix(state) % candidates.len() as u64) as usize,
        };
        let step = candidates[pick].clone();
        let mut uf = UnionFind::new(current.n());
        for block in current.blocks() {
            for w in block.windows(2) {
                uf.unite(w[0], w[1]);
            }
        }
        uf.unite(step.united.0, step.united.1);
        current = uf.into_partition();
        trace.steps.push(step);
    }
    (current, trace)
}

/// The least partition above `p` whose classes are all convex sublattices.
pub fn least_local_congruence(lat: &FiniteLattice, p: &Partition) -> (Partition, ClosureTrace) {
    close(lat, p, false, MergeOrder::Scan)
}

/// The least congruence containing `p`: local closure plus quadrilateral
/// closure.
pub fn least_congruence(lat: &FiniteLattice, p: &Partition) -> (Partition, ClosureTrace) {
    close(lat, p, true, MergeOrder::Scan)
}

/// Same fixpoints with a randomized merge schedule.
pub fn least_local_congruence_with(
    lat: &FiniteLattice,
    p: &Partition,
    order: MergeOrder,
) -> (Partition, ClosureTrace) {
    close(lat, p, false, order)
}

pub fn least_congruence_with(
    lat: &FiniteLattice,
    p: &Partition,
    order: MergeOrder,
) -> (Partition, ClosureTrace) {
    close(lat, p, true, order)
}

/// Least local congruence putting `a` and `b` in one class.
pub fn principal_local_congruence(lat: &FiniteLattice, a: usize, b: usize) -> Partition {
    least_local_congruence(lat, &Partition::from_pairs(lat.n(), &[(a, b)])).0
}

/// Least congruence putting `a` and `b` in one class.
pub fn principal_congruence(lat: &FiniteLattice, a: usize, b: usize) -> Partition {
    least_congruence(lat, &Partition::from_pairs(lat.n(), &[(a, b)])).0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinMode {
    Local,
    Congruence,
}

/// Least (local) congruence containing every given partition: glue blocks
/// that share elements, then close.
pub fn join_of_partitions(
    lat: &FiniteLattice,
    parts: &[Partition],
    mode: JoinMode,
) -> Result<Partition, ClosureError> {
    let mut iter = parts.iter();
    let first = iter.next().ok_or(ClosureError::NoInput)?;
    let mut glued = first.clone();
    for p in iter {
        glued = glued.transitive_join(p)?;
    }
    if glued.n() != lat.n() {
        return Err(PartitionError::MixedLattices(glued.n(), lat.n()).into());
    }
    Ok(match mode {
        JoinMode::Local => least_local_congruence(lat, &glued).0,
        JoinMode::Congruence => least_congruence(lat, &glued).0,
    })
}

/// Iterates every partition of `{0,..,n-1}` via restricted growth strings,
/// in lexicographic string order.
pub fn enumerate_partitions(n: usize) -> impl Iterator<Item = Partition> {
    let mut rgs: Option<Vec<usize>> = if n == 0 { None } else { Some(vec![0; n]) };
    std::iter::from_fn(move || {
        let current = rgs.clone()?;
        let out = Partition::from_block_of(current.clone());
        // Advance to the next restricted growth string.
        let s = rgs.as_mut().unwrap();
        let mut i = n;
        loop {
            if i == 1 {
                rgs = None;
                break;
            }
            i -= 1;
            let max_prefix = s[..i].iter().copied().max().unwrap_or(0);
            if s[i] <= max_prefix {
                s[i] += 1;
                for v in s[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
            s[i] = 0;
        }
        Some(out)
    })
}

/// Every local congruence of the lattice, finest first (sorted by
/// descending block count, then by canonical block list), so the order is a
/// linear extension of block-wise inclusion.
pub fn enumerate_local_congruences(lat: &FiniteLattice) -> Result<Vec<Partition>, ClosureError> {
    enumerate_local_congruences_capped(lat, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_local_congruences_capped(
    lat: &FiniteLattice,
    cap: usize,
) -> Result<Vec<Partition>, ClosureError> {
    let n = lat.n();
    if n > cap {
        return Err(ClosureError::LatticeTooLarge { n, cap });
    }
    let mut out: Vec<Partition> = enumerate_partitions(n)
        .filter(|p| p.is_local_congruence(lat))
        .collect();
    out.sort_by(|a, b| {
        b.block_count()
            .cmp(&a.block_count())
            .then_with(|| a.blocks().cmp(b.blocks()))
    });
    Ok(out)
}
