//! Concept lattices and their reduction by local congruences.
//!
//! The crate builds concept lattices from crisp and finite-chain fuzzy
//! formal contexts, computes the equivalence relation a reduced attribute
//! set induces on the concepts, closes it to the least local congruence
//! (every class a convex sublattice), repairs open class cycles, and emits
//! the resulting quotient poset. Congruence closures are available
//! alongside for comparing how much each kind of reduction collapses.

pub mod bitset;
pub mod closure;
pub mod fca;
pub mod lattice;
pub mod partition;
pub mod quotient;
pub mod reduce;

pub use bitset::BitSet;
pub use closure::{
    enumerate_local_congruences, enumerate_local_congruences_capped, enumerate_partitions,
    join_of_partitions, least_congruence, least_local_congruence, principal_congruence,
    principal_local_congruence, ClosureError, ClosureTrace, JoinMode, MergeOrder, MergeRule,
    MergeStep,
};
pub use fca::context::{parse_cxt, write_cxt, Concept, ConceptLattice, FormalContext};
pub use fca::fuzzy::{
    FiniteChain, Frac, FuzzyConcept, FuzzyConceptLattice, FuzzyContext, FuzzyContextFile,
};
pub use fca::FcaError;
pub use lattice::{FiniteLattice, LatticeDefect, LatticeError, LatticeFile, Quadrilateral, RawOrder};
pub use partition::{Partition, PartitionError, PartitionFile};
pub use quotient::{
    all_cycles_closed, class_preorder, find_delta_sequence, quotient_poset, rho_delta,
    ClassDigraph, CycleCheck, QuotientError, QuotientPoset,
};
pub use reduce::{
    compare_with_congruence, compare_with_congruence_fuzzy, reduce, reduce_fuzzy,
    reduce_partition, ReductionReport, ReductionReportFile,
};
