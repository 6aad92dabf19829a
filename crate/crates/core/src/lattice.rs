//! Finite lattices: order queries, meet/join tables, covering relation and
//! the quadrilateral listing used by congruence predicates.
//!
//! Elements are identified by index; labels are display-only. The order is
//! stored densely as one bit row per element (`up_sets[i]` holds every `j`
//! with `i` below-or-equal `j`), which keeps meet/join table construction a
//! straightforward scan at the sizes this crate targets.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

use crate::bitset::BitSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("not a lattice: {0}")]
    NotALattice(LatticeDefect),
    #[error("elements {a:?} and {b:?} are not comparable")]
    NotComparable { a: String, b: String },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("label {0:?} not found")]
    UnknownLabel(String),
    #[error("element index {index} out of range for {n} elements")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("a lattice needs at least one element")]
    Empty,
}

/// One violated lattice invariant, reported by [`RawOrder::defects`] and
/// [`FiniteLattice::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeDefect {
    NotAntisymmetric(String, String),
    MissingMeet(String, String),
    MissingJoin(String, String),
    MeetTableMismatch(String, String),
    JoinTableMismatch(String, String),
    HasseMismatch(String, String),
}

impl fmt::Display for LatticeDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeDefect::NotAntisymmetric(a, b) => {
                write!(f, "order not antisymmetric on ({a},{b})")
            }
            LatticeDefect::MissingMeet(a, b) => write!(f, "meet({a},{b}) missing"),
            LatticeDefect::MissingJoin(a, b) => write!(f, "join({a},{b}) missing"),
            LatticeDefect::MeetTableMismatch(a, b) => {
                write!(f, "meet table disagrees with the order on ({a},{b})")
            }
            LatticeDefect::JoinTableMismatch(a, b) => {
                write!(f, "join table disagrees with the order on ({a},{b})")
            }
            LatticeDefect::HasseMismatch(a, b) => {
                write!(f, "hasse edge set wrong at ({a},{b})")
            }
        }
    }
}

/// A reflexively and transitively closed binary relation, not yet checked to
/// be a lattice. [`RawOrder::defects`] reports what is wrong with it.
#[derive(Clone)]
pub struct RawOrder {
    labels: Vec<String>,
    up: Vec<BitSet>,
}

impl RawOrder {
    /// Builds the reflexive-transitive closure of the given pairs.
    pub fn from_pairs<S: Into<String>>(
        labels: Vec<S>,
        pairs: &[(usize, usize)],
    ) -> Result<Self, LatticeError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        for i in 0..n {
            for j in i + 1..n {
                if labels[i] == labels[j] {
                    return Err(LatticeError::DuplicateLabel(labels[i].clone()));
                }
            }
        }
        let mut up: Vec<BitSet> = (0..n).map(|i| BitSet::from_indices(n, [i])).collect();
        for &(a, b) in pairs {
            for (index, v) in [(a, a), (b, b)] {
                if v >= n {
                    return Err(LatticeError::IndexOutOfRange { index, n });
                }
            }
            up[a].insert(b);
        }
        // Warshall closure on bit rows.
        for k in 0..n {
            for i in 0..n {
                if i != k && up[i].contains(k) {
                    let row = up[k].clone();
                    up[i].union_with(&row);
                }
            }
        }
        Ok(RawOrder { labels, up })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    /// Lists every violated lattice invariant; an empty list means the
    /// relation is a finite lattice.
    pub fn defects(&self) -> Vec<LatticeDefect> {
        let n = self.n();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if self.leq(a, b) && self.leq(b, a) {
                    out.push(LatticeDefect::NotAntisymmetric(
                        self.labels[a].clone(),
                        self.labels[b].clone(),
                    ));
                }
            }
        }
        if !out.is_empty() {
            // Meets and joins are not well defined without antisymmetry.
            return out;
        }
        let down = transpose(&self.up);
        for a in 0..n {
            for b in a..n {
                if least_of(&self.up[a].intersection(&self.up[b]), &self.up).is_none() {
                    out.push(LatticeDefect::MissingJoin(
                        self.labels[a].clone(),
                        self.labels[b].clone(),
                    ));
                }
                if greatest_of(&down[a].intersection(&down[b]), &down).is_none() {
                    out.push(LatticeDefect::MissingMeet(
                        self.labels[a].clone(),
                        self.labels[b].clone(),
                    ));
                }
            }
        }
        out
    }
}

fn transpose(up: &[BitSet]) -> Vec<BitSet> {
    let n = up.len();
    let mut down: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
    for i in 0..n {
        for j in up[i].iter() {
            down[j].insert(i);
        }
    }
    down
}

/// The least element of `set`, if one exists: the member below every other
/// member. `up[u]` is the up-set of `u`.
fn least_of(set: &BitSet, up: &[BitSet]) -> Option<usize> {
    set.iter().find(|&u| set.is_subset(&up[u]))
}

fn greatest_of(set: &BitSet, down: &[BitSet]) -> Option<usize> {
    set.iter().find(|&u| set.is_subset(&down[u]))
}

/// Two strictly ordered pairs forming opposite sides of a quadrilateral:
/// `(a,b)` and `(c,d)` with `a` strictly below `b`, `c` strictly below `d`,
/// and either `a v d = b, a ^ d = c` or `b v c = d, b ^ c = a`.
///
/// Sides are strict order pairs, not covering pairs: congruence classes
/// must respect the wider family (restricting to covers breaks the
/// equivalence with pointwise compatibility on the pentagon).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quadrilateral {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

/// A finite lattice. Valid by construction: every constructor checks the
/// order axioms and the existence of all binary meets and joins.
#[derive(Clone)]
pub struct FiniteLattice {
    labels: Vec<String>,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
    meet: Vec<usize>,
    join: Vec<usize>,
    hasse: Vec<(usize, usize)>,
    bottom: usize,
    top: usize,
}

/// The JSON file form: labels plus Hasse edges, lower element first.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct LatticeFile {
    pub labels: Vec<String>,
    pub covers: Vec<(usize, usize)>,
}

impl FiniteLattice {
    /// Builds a lattice from arbitrary order pairs (closure is taken first).
    pub fn from_order<S: Into<String>>(
        labels: Vec<S>,
        pairs: &[(usize, usize)],
    ) -> Result<Self, LatticeError> {
        let raw = RawOrder::from_pairs(labels, pairs)?;
        Self::from_raw(raw)
    }

    /// Builds a lattice from Hasse edges. Redundant (transitive) input edges
    /// are tolerated; the stored covering relation is recomputed.
    pub fn from_covers<S: Into<String>>(
        labels: Vec<S>,
        covers: &[(usize, usize)],
    ) -> Result<Self, LatticeError> {
        Self::from_order(labels, covers)
    }

    pub fn from_raw(raw: RawOrder) -> Result<Self, LatticeError> {
        if let Some(defect) = raw.defects().into_iter().next() {
            return Err(LatticeError::NotALattice(defect));
        }
        let n = raw.n();
        let up = raw.up;
        let down = transpose(&up);
        let mut meet = vec![0usize; n * n];
        let mut join = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                join[a * n + b] =
                    least_of(&up[a].intersection(&up[b]), &up).expect("checked by defects");
                meet[a * n + b] =
                    greatest_of(&down[a].intersection(&down[b]), &down).expect("checked by defects");
            }
        }
        let hasse = hasse_of(&up);
        let bottom = (0..n).find(|&i| down[i].count() == 1).expect("lattice has a bottom");
        let top = (0..n).find(|&i| up[i].count() == 1).expect("lattice has a top");
        Ok(FiniteLattice {
            labels: raw.labels,
            up,
            down,
            meet,
            join,
            hasse,
            bottom,
            top,
        })
    }

    pub fn from_file(file: &LatticeFile) -> Result<Self, LatticeError> {
        Self::from_covers(file.labels.clone(), &file.covers)
    }

    pub fn to_file(&self) -> LatticeFile {
        LatticeFile {
            labels: self.labels.clone(),
            covers: self.hasse.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, LatticeError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| LatticeError::UnknownLabel(label.to_string()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n() + b]
    }

    pub fn up_set(&self, a: usize) -> &BitSet {
        &self.up[a]
    }

    pub fn down_set(&self, a: usize) -> &BitSet {
        &self.down[a]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Covering pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    pub fn covered_by(&self, a: usize, b: usize) -> bool {
        self.hasse.binary_search(&(a, b)).is_ok()
    }

    /// All `c` with `a` below-or-equal `c` below-or-equal `b`.
    pub fn interval(&self, a: usize, b: usize) -> Result<BitSet, LatticeError> {
        if !self.leq(a, b) {
            return Err(LatticeError::NotComparable {
                a: self.labels[a].clone(),
                b: self.labels[b].clone(),
            });
        }
        Ok(self.up[a].intersection(&self.down[b]))
    }

    /// Every ordered pair of strict order pairs that forms a quadrilateral,
    /// one entry per side orientation (the two conditions are mutually
    /// exclusive, so no pair is listed twice).
    pub fn quadrilaterals(&self) -> Vec<Quadrilateral> {
        let strict = self.strict_pairs();
        let mut out = Vec::new();
        for &(a, b) in &strict {
            for &(c, d) in &strict {
                if a == c || a == d || b == c || b == d {
                    continue;
                }
                let first = self.join(a, d) == b && self.meet(a, d) == c;
                let second = self.join(b, c) == d && self.meet(b, c) == a;
                if first || second {
                    out.push(Quadrilateral { a, b, c, d });
                }
            }
        }
        out
    }

    /// Re-checks every structural invariant; empty means valid. Constructors
    /// guarantee validity, so this is a diagnostics entry point.
    pub fn validate(&self) -> Vec<LatticeDefect> {
        let raw = RawOrder {
            labels: self.labels.clone(),
            up: self.up.clone(),
        };
        let mut out = raw.defects();
        let n = self.n();
        let down = transpose(&self.up);
        for a in 0..n {
            for b in 0..n {
                if least_of(&self.up[a].intersection(&self.up[b]), &self.up)
                    != Some(self.join(a, b))
                {
                    out.push(LatticeDefect::JoinTableMismatch(
                        self.labels[a].clone(),
                        self.labels[b].clone(),
                    ));
                }
                if greatest_of(&down[a].intersection(&down[b]), &down) != Some(self.meet(a, b)) {
                    out.push(LatticeDefect::MeetTableMismatch(
                        self.labels[a].clone(),
                        self.labels[b].clone(),
                    ));
                }
            }
        }
        let expected = hasse_of(&self.up);
        if expected != self.hasse {
            let (a, b) = *expected
                .iter()
                .find(|e| !self.hasse.contains(e))
                .or_else(|| self.hasse.iter().find(|e| !expected.contains(e)))
                .unwrap_or(&(0, 0));
            out.push(LatticeDefect::HasseMismatch(
                self.labels[a].clone(),
                self.labels[b].clone(),
            ));
        }
        out
    }

    /// All order pairs `(a, b)` with `a` strictly below `b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for a in 0..n {
            for b in self.up[a].iter() {
                if a != b {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

impl fmt::Debug for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteLattice")
            .field("labels", &self.labels)
            .field("covers", &self.hasse)
            .finish()
    }
}

/// Transitive reduction: `(i, j)` is a cover when nothing sits strictly
/// between them.
fn hasse_of(up: &[BitSet]) -> Vec<(usize, usize)> {
    let n = up.len();
    let down = transpose(up);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in up[i].iter() {
            if i == j {
                continue;
            }
            let mut between = up[i].intersection(&down[j]);
            between.remove(i);
            between.remove(j);
            if between.is_empty() {
                edges.push((i, j));
            }
        }
    }
    edges.sort_unstable();
    edges
}
