//! Partitions of lattice elements and the predicates that classify them:
//! convex classes, sublattice classes, quadrilateral closure, and the
//! pointwise compatibility tests they are equivalent to.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{FiniteLattice, Quadrilateral};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("label {0:?} not found in the lattice")]
    UnknownLabel(String),
    #[error("label {0:?} listed twice")]
    DuplicateLabel(String),
    #[error("blocks cover {covered} of {n} elements")]
    NotCovering { covered: usize, n: usize },
    #[error("partitions belong to lattices of different sizes ({0} vs {1})")]
    MixedLattices(usize, usize),
}

/// An equivalence relation on `{0, .., n-1}`, materialized as blocks.
///
/// Canonical form: blocks are sorted internally and ordered by their least
/// element, so equal relations compare equal and serialize identically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    n: usize,
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

/// JSON form: one list of element labels per block.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionFile {
    pub blocks: Vec<Vec<String>>,
}

impl Partition {
    pub fn identity(n: usize) -> Self {
        Self::from_block_of((0..n).collect())
    }

    pub fn single_block(n: usize) -> Self {
        Self::from_block_of(vec![0; n])
    }

    /// Normalizes an arbitrary element-to-class map into canonical form.
    pub fn from_block_of(raw: Vec<usize>) -> Self {
        let n = raw.len();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut seen: Vec<(usize, usize)> = Vec::new(); // raw id -> block id
        for (e, &r) in raw.iter().enumerate() {
            match seen.iter().find(|&&(id, _)| id == r) {
                Some(&(_, b)) => members[b].push(e),
                None => {
                    seen.push((r, members.len()));
                    members.push(vec![e]);
                }
            }
        }
        members.sort_by_key(|b| b[0]);
        let mut block_of = vec![0; n];
        for (b, block) in members.iter().enumerate() {
            for &e in block {
                block_of[e] = b;
            }
        }
        Partition {
            n,
            block_of,
            blocks: members,
        }
    }

    /// Builds the finest partition in which each listed pair is together.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut uf = UnionFind::new(n);
        for &(a, b) in pairs {
            uf.unite(a, b);
        }
        uf.into_partition()
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self, PartitionError> {
        let mut block_of = vec![usize::MAX; n];
        let mut covered = 0;
        for (b, block) in blocks.iter().enumerate() {
            for &e in block {
                if e >= n || block_of[e] != usize::MAX {
                    return Err(PartitionError::NotCovering { covered, n });
                }
                block_of[e] = b;
                covered += 1;
            }
        }
        if covered != n {
            return Err(PartitionError::NotCovering { covered, n });
        }
        Ok(Self::from_block_of(block_of))
    }

    pub fn from_file(lat: &FiniteLattice, file: &PartitionFile) -> Result<Self, PartitionError> {
        let n = lat.n();
        let mut block_of = vec![usize::MAX; n];
        for (b, block) in file.blocks.iter().enumerate() {
            for label in block {
                let e = lat
                    .index_of(label)
                    .map_err(|_| PartitionError::UnknownLabel(label.clone()))?;
                if block_of[e] != usize::MAX {
                    return Err(PartitionError::DuplicateLabel(label.clone()));
                }
                block_of[e] = b;
            }
        }
        let covered = block_of.iter().filter(|&&b| b != usize::MAX).count();
        if covered != n {
            return Err(PartitionError::NotCovering { covered, n });
        }
        Ok(Self::from_block_of(block_of))
    }

    pub fn to_file(&self, lat: &FiniteLattice) -> PartitionFile {
        PartitionFile {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.iter().map(|&e| lat.label(e).to_string()).collect())
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, e: usize) -> usize {
        self.block_of[e]
    }

    pub fn block(&self, b: usize) -> &[usize] {
        &self.blocks[b]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.block_of[a] == self.block_of[b]
    }

    /// Block-wise inclusion: every block of `self` lies inside a block of
    /// `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.n == other.n
            && self
                .blocks
                .iter()
                .all(|b| b.iter().all(|&e| other.block_of[e] == other.block_of[b[0]]))
    }

    /// The coarsest partition refining both (blockwise intersection).
    pub fn common_refinement(&self, other: &Partition) -> Partition {
        assert_eq!(self.n, other.n);
        let raw: Vec<usize> = (0..self.n)
            .map(|e| self.block_of[e] * other.n + other.block_of[e])
            .collect();
        Self::from_block_of(raw)
    }

    /// The finest partition containing both (transitive gluing of blocks).
    pub fn transitive_join(&self, other: &Partition) -> Result<Partition, PartitionError> {
        if self.n != other.n {
            return Err(PartitionError::MixedLattices(self.n, other.n));
        }
        let mut uf = UnionFind::new(self.n);
        for p in [self, other] {
            for block in &p.blocks {
                for w in block.windows(2) {
                    uf.unite(w[0], w[1]);
                }
            }
        }
        Ok(uf.into_partition())
    }

    /// All unordered in-block pairs `(a, b)` with `a < b`.
    pub fn related_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for block in &self.blocks {
            for i in 0..block.len() {
                for j in i + 1..block.len() {
                    out.push((block[i], block[j]));
                }
            }
        }
        out
    }

    // ----- classification predicates -----

    /// First meet or join of two block members that escapes the block.
    pub fn sublattice_violation(
        &self,
        lat: &FiniteLattice,
        b: usize,
    ) -> Option<SublatticeViolation> {
        self.check_n(lat);
        let block = &self.blocks[b];
        for i in 0..block.len() {
            for j in i + 1..block.len() {
                let (x, y) = (block[i], block[j]);
                let m = lat.meet(x, y);
                if self.block_of[m] != b {
                    return Some(SublatticeViolation { a: x, b: y, escaped: m, is_meet: true });
                }
                let u = lat.join(x, y);
                if self.block_of[u] != b {
                    return Some(SublatticeViolation { a: x, b: y, escaped: u, is_meet: false });
                }
            }
        }
        None
    }

    /// First element of an in-block interval that escapes the block.
    pub fn convexity_violation(&self, lat: &FiniteLattice, b: usize) -> Option<ConvexityViolation> {
        self.check_n(lat);
        let block = &self.blocks[b];
        for &x in block {
            for &y in block {
                if x != y && lat.leq(x, y) {
                    let between = lat.interval(x, y).expect("comparable");
                    for c in between.iter() {
                        if self.block_of[c] != b {
                            return Some(ConvexityViolation { a: x, b: y, missing: c });
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_class_sublattice(&self, lat: &FiniteLattice, b: usize) -> bool {
        self.sublattice_violation(lat, b).is_none()
    }

    pub fn is_class_convex(&self, lat: &FiniteLattice, b: usize) -> bool {
        self.convexity_violation(lat, b).is_none()
    }

    /// First block failing sublattice closure or convexity, with a witness.
    pub fn local_violation(&self, lat: &FiniteLattice) -> Option<LocalViolation> {
        for b in 0..self.blocks.len() {
            if let Some(v) = self.sublattice_violation(lat, b) {
                return Some(LocalViolation::Sublattice(v));
            }
        }
        for b in 0..self.blocks.len() {
            if let Some(v) = self.convexity_violation(lat, b) {
                return Some(LocalViolation::Convexity(v));
            }
        }
        None
    }

    /// Every class is a convex sublattice.
    pub fn is_local_congruence(&self, lat: &FiniteLattice) -> bool {
        self.local_violation(lat).is_none()
    }

    /// First quadrilateral with one side in a single block and the opposite
    /// side split across blocks.
    pub fn quadrilateral_witness(&self, lat: &FiniteLattice) -> Option<Quadrilateral> {
        self.check_n(lat);
        lat.quadrilaterals()
            .into_iter()
            .find(|q| self.same_block(q.a, q.b) && !self.same_block(q.c, q.d))
    }

    pub fn is_quadrilateral_closed(&self, lat: &FiniteLattice) -> bool {
        self.quadrilateral_witness(lat).is_none()
    }

    pub fn is_congruence(&self, lat: &FiniteLattice) -> bool {
        self.is_local_congruence(lat) && self.is_quadrilateral_closed(lat)
    }

    /// Direct pointwise compatibility with meet and join: related pairs stay
    /// related under componentwise meet and join. Equivalent to
    /// [`Partition::is_congruence`]; kept separate as the cross-check route.
    pub fn compatibility_check(&self, lat: &FiniteLattice) -> bool {
        self.check_n(lat);
        let pairs: Vec<(usize, usize)> = self
            .related_pairs()
            .into_iter()
            .chain((0..self.n).map(|e| (e, e)))
            .collect();
        for &(a, b) in &pairs {
            for &(c, d) in &pairs {
                if !self.same_block(lat.join(a, c), lat.join(b, d))
                    || !self.same_block(lat.meet(a, c), lat.meet(b, d))
                {
                    return false;
                }
            }
        }
        true
    }

    /// Pointwise compatibility restricted to elements between the meet and
    /// the join of the related pair. Equivalent to
    /// [`Partition::is_local_congruence`]; kept separate as the cross-check
    /// route.
    pub fn local_compatibility_check(&self, lat: &FiniteLattice) -> bool {
        self.check_n(lat);
        for (a, b) in self.related_pairs() {
            let lo = lat.meet(a, b);
            let hi = lat.join(a, b);
            let between = lat.interval(lo, hi).expect("meet below join");
            for c in between.iter() {
                if !self.same_block(lat.join(a, c), lat.join(b, c))
                    || !self.same_block(lat.meet(a, c), lat.meet(b, c))
                {
                    return false;
                }
            }
        }
        true
    }

    fn check_n(&self, lat: &FiniteLattice) {
        assert_eq!(
            self.n,
            lat.n(),
            "partition over {} elements used with a lattice of {}",
            self.n,
            lat.n()
        );
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SublatticeViolation {
    pub a: usize,
    pub b: usize,
    pub escaped: usize,
    pub is_meet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvexityViolation {
    pub a: usize,
    pub b: usize,
    pub missing: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalViolation {
    Sublattice(SublatticeViolation),
    Convexity(ConvexityViolation),
}

/// Plain union-find with path compression, used to assemble partitions.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn unite(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // Smaller root wins so representatives stay stable.
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let raw: Vec<usize> = (0..n).map(|e| self.find(e)).collect();
        Partition::from_block_of(raw)
    }
}
