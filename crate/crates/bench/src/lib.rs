//! Fixture loading shared by the benchmarks.

use std::path::PathBuf;

use latcon::fca::context::{parse_cxt, FormalContext};
use latcon::fca::fuzzy::{FuzzyContext, FuzzyContextFile};
use latcon::lattice::{FiniteLattice, LatticeFile};
use latcon::partition::{Partition, PartitionFile};

pub fn fixture_text(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

pub fn planets() -> FormalContext {
    parse_cxt(&fixture_text("planets.cxt")).unwrap()
}

pub fn fuzzy_context() -> FuzzyContext {
    let file: FuzzyContextFile = serde_json::from_str(&fixture_text("fuzzy_chain3.json")).unwrap();
    FuzzyContext::from_file(&file).unwrap()
}

pub fn rotor() -> (FiniteLattice, Partition) {
    let file: LatticeFile = serde_json::from_str(&fixture_text("rotor.json")).unwrap();
    let lat = FiniteLattice::from_file(&file).unwrap();
    let blocks: PartitionFile = serde_json::from_str(&fixture_text("rotor_blocks.json")).unwrap();
    let p = Partition::from_file(&lat, &blocks).unwrap();
    (lat, p)
}
