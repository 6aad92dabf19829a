//! The end-to-end reduction pipeline: from a concept lattice (or any
//! lattice with a starting partition) to the least cycle-closed local
//! congruence and its ordered quotient.
//!
//! Steps: close the starting partition to its least local congruence; while
//! some class cycle is open, merge the strongly connected classes and close
//! again. Each round strictly coarsens the partition, so the loop ends. One
//! round is expected to suffice; the report counts rounds so that claim
//! stays observable.

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::closure::{least_congruence, least_local_congruence, ClosureTrace};
use crate::fca::context::{ConceptLattice, FormalContext};
use crate::fca::fuzzy::{FuzzyConceptLattice, FuzzyContext};
use crate::fca::FcaError;
use crate::lattice::{FiniteLattice, LatticeFile};
use crate::partition::{Partition, PartitionFile};
use crate::quotient::{all_cycles_closed, quotient_poset, rho_delta, CycleCheck, QuotientPoset};

/// One round of the cycle-repair loop.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    /// The open cycle that triggered the round.
    pub open_cycle: Vec<usize>,
    /// Blocks merged along strongly connected classes.
    pub scc_merged: Partition,
    /// Whether that merge already was a local congruence.
    pub was_local_congruence: bool,
    /// The round's resulting local congruence.
    pub closed: Partition,
    pub trace: ClosureTrace,
}

/// Everything one reduction run produces.
#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub input: String,
    pub d_labels: Option<Vec<String>>,
    /// The starting partition (induced by the attribute subset, or given).
    pub start: Partition,
    /// Least local congruence containing the start.
    pub least_local: Partition,
    pub least_local_trace: ClosureTrace,
    pub iterations: Vec<IterationRecord>,
    pub final_delta: Partition,
    pub quotient: QuotientPoset,
    /// Least congruence containing the start, for the information-loss
    /// comparison.
    pub congruence: Partition,
}

impl ReductionReport {
    pub fn local_class_count(&self) -> usize {
        self.final_delta.block_count()
    }

    pub fn congruence_class_count(&self) -> usize {
        self.congruence.block_count()
    }

    /// Rounds of cycle repair beyond the first closure.
    pub fn repair_rounds(&self) -> usize {
        self.iterations.len()
    }

    pub fn to_file(&self, lat: &FiniteLattice) -> ReductionReportFile {
        let quad = self.final_delta.quadrilateral_witness(lat);
        ReductionReportFile {
            input: self.input.clone(),
            attributes: self.d_labels.clone(),
            induced_partition: self.start.to_file(lat),
            least_local_congruence: self.least_local.to_file(lat),
            iterations: self
                .iterations
                .iter()
                .map(|it| IterationFile {
                    open_cycle: it.open_cycle.iter().map(|&e| lat.label(e).to_string()).collect(),
                    scc_merged: it.scc_merged.to_file(lat),
                    was_local_congruence: it.was_local_congruence,
                    closed: it.closed.to_file(lat),
                })
                .collect(),
            final_partition: self.final_delta.to_file(lat),
            final_is_congruence: self.final_delta.is_congruence(lat),
            quadrilateral_witness: quad.map(|q| {
                [q.a, q.b, q.c, q.d]
                    .map(|e| lat.label(e).to_string())
                    .to_vec()
            }),
            quotient: self.quotient.to_file(),
            quotient_is_lattice: self.quotient.is_lattice(),
            class_counts: ClassCounts {
                local: self.local_class_count(),
                congruence: self.congruence_class_count(),
            },
            congruence_partition: self.congruence.to_file(lat),
        }
    }

    /// All closure traces of the run, in order, with a stage tag each.
    pub fn traces(&self) -> Vec<(String, &ClosureTrace)> {
        let mut out = vec![("least-local-congruence".to_string(), &self.least_local_trace)];
        for (i, it) in self.iterations.iter().enumerate() {
            out.push((format!("repair-round-{}", i + 1), &it.trace));
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassCounts {
    pub local: usize,
    pub congruence: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IterationFile {
    pub open_cycle: Vec<String>,
    pub scc_merged: PartitionFile,
    pub was_local_congruence: bool,
    pub closed: PartitionFile,
}

/// Serialized report, with every element rendered through its label.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReductionReportFile {
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attributes: Option<Vec<String>>,
    pub induced_partition: PartitionFile,
    pub least_local_congruence: PartitionFile,
    pub iterations: Vec<IterationFile>,
    pub final_partition: PartitionFile,
    pub final_is_congruence: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadrilateral_witness: Option<Vec<String>>,
    pub quotient: LatticeFile,
    pub quotient_is_lattice: bool,
    pub class_counts: ClassCounts,
    pub congruence_partition: PartitionFile,
}

/// Runs the pipeline from an arbitrary starting partition.
pub fn reduce_partition(
    lat: &FiniteLattice,
    start: Partition,
    input: impl Into<String>,
    d_labels: Option<Vec<String>>,
) -> ReductionReport {
    let (least_local, least_local_trace) = least_local_congruence(lat, &start);
    let mut delta = least_local.clone();
    let mut iterations = Vec::new();
    loop {
        match all_cycles_closed(lat, &delta).expect("delta is a local congruence") {
            CycleCheck::AllClosed => break,
            CycleCheck::Open(open_cycle) => {
                let scc_merged = rho_delta(lat, &delta).expect("delta is a local congruence");
                let was_local_congruence = scc_merged.is_local_congruence(lat);
                let (closed, trace) = if was_local_congruence {
                    (scc_merged.clone(), ClosureTrace::default())
                } else {
                    least_local_congruence(lat, &scc_merged)
                };
                iterations.push(IterationRecord {
                    open_cycle,
                    scc_merged,
                    was_local_congruence,
                    closed: closed.clone(),
                    trace,
                });
                delta = closed;
            }
        }
    }
    let quotient = quotient_poset(lat, &delta).expect("all cycles closed");
    let (congruence, _) = least_congruence(lat, &start);
    ReductionReport {
        input: input.into(),
        d_labels,
        start,
        least_local,
        least_local_trace,
        iterations,
        final_delta: delta,
        quotient,
        congruence,
    }
}

/// Full pipeline for a crisp context and attribute subset.
pub fn reduce(
    cl: &ConceptLattice,
    ctx: &FormalContext,
    d_labels: &[&str],
    input: impl Into<String>,
) -> Result<ReductionReport, FcaError> {
    let d = ctx.attribute_set(d_labels)?;
    let start = cl.induced_relation(ctx, &d)?;
    Ok(reduce_partition(
        &cl.lattice,
        start,
        input,
        Some(d_labels.iter().map(|s| s.to_string()).collect()),
    ))
}

/// Full pipeline for a fuzzy context and attribute subset.
pub fn reduce_fuzzy(
    cl: &FuzzyConceptLattice,
    ctx: &FuzzyContext,
    d_labels: &[&str],
    input: impl Into<String>,
) -> Result<ReductionReport, FcaError> {
    let d = ctx.attribute_set(d_labels)?;
    let start = cl.induced_relation(ctx, &d)?;
    Ok(reduce_partition(
        &cl.lattice,
        start,
        input,
        Some(d_labels.iter().map(|s| s.to_string()).collect()),
    ))
}

/// Class counts of the local-congruence reduction versus the congruence
/// reduction for the same attribute subset.
pub fn compare_with_congruence(
    cl: &ConceptLattice,
    ctx: &FormalContext,
    d_labels: &[&str],
) -> Result<(usize, usize), FcaError> {
    let report = reduce(cl, ctx, d_labels, "compare")?;
    Ok((report.local_class_count(), report.congruence_class_count()))
}

pub fn compare_with_congruence_fuzzy(
    cl: &FuzzyConceptLattice,
    ctx: &FuzzyContext,
    d_labels: &[&str],
) -> Result<(usize, usize), FcaError> {
    let report = reduce_fuzzy(cl, ctx, d_labels, "compare")?;
    Ok((report.local_class_count(), report.congruence_class_count()))
}

/// Restricts an attribute label list against a context-sized universe.
pub fn attribute_subset(labels: &[String], universe: &[String]) -> Result<BitSet, FcaError> {
    let mut d = BitSet::new(universe.len());
    for l in labels {
        let i = universe
            .iter()
            .position(|a| a == l)
            .ok_or_else(|| FcaError::UnknownAttribute(l.clone()))?;
        d.insert(i);
    }
    Ok(d)
}
