//! Ordering the classes of a local congruence.
//!
//! The class preorder is realized as reachability in a digraph on blocks: an
//! edge from one block to another records that some element of the first
//! lies below some element of the second. A walk in this digraph contracts
//! exactly to an alternating sequence of in-block steps and order steps, so
//! reachability coincides with the sequence-based class relation; the test
//! suite checks this against a direct element-level search.

use thiserror::Error;

use crate::bitset::BitSet;
use crate::lattice::{FiniteLattice, LatticeFile};
use crate::partition::Partition;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuotientError {
    #[error("the partition is not a local congruence")]
    NotLocalCongruence,
    #[error("class cycles are not closed; witness cycle through {0:?}")]
    CyclesNotClosed(Vec<String>),
}

/// Digraph on the blocks of a partition with its reachability closure.
#[derive(Debug, Clone)]
pub struct ClassDigraph {
    /// Edges between distinct blocks.
    pub edges: Vec<(usize, usize)>,
    /// `reach[i]` holds every block reachable from block `i` (reflexive).
    reach: Vec<BitSet>,
    block_count: usize,
}

impl ClassDigraph {
    pub fn block_count(&self) -> usize {
        self.block_count
    }

    /// The class preorder: block `i` relates to block `j`.
    pub fn reaches(&self, i: usize, j: usize) -> bool {
        self.reach[i].contains(j)
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.block_count).all(|i| {
            (i + 1..self.block_count).all(|j| !(self.reaches(i, j) && self.reaches(j, i)))
        })
    }

    /// Strongly connected components, each sorted, listed by least block.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.block_count];
        for &(a, b) in &self.edges {
            adj[a].push(b);
        }
        let mut comps = tarjan(&adj);
        for c in &mut comps {
            c.sort_unstable();
        }
        comps.sort_by_key(|c| c[0]);
        comps
    }
}

/// Iterative Tarjan over an adjacency list.
fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0usize;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // Call frames: (node, next child position).
        let mut frames = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut child)) = frames.last_mut() {
            if *child == 0 {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = adj[v].get(*child) {
                *child += 1;
                if index[w] == usize::MAX {
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("scc stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
                frames.pop();
                if let Some(&mut (parent, _)) = frames.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }
    comps
}

/// The digraph whose reachability is the class preorder of `p`.
pub fn class_preorder(lat: &FiniteLattice, p: &Partition) -> Result<ClassDigraph, QuotientError> {
    if !p.is_local_congruence(lat) {
        return Err(QuotientError::NotLocalCongruence);
    }
    Ok(class_digraph_unchecked(lat, p))
}

fn class_digraph_unchecked(lat: &FiniteLattice, p: &Partition) -> ClassDigraph {
    let k = p.block_count();
    let mut edge_set = vec![false; k * k];
    for (a, b) in lat.strict_pairs() {
        let (ba, bb) = (p.block_of(a), p.block_of(b));
        if ba != bb {
            edge_set[ba * k + bb] = true;
        }
    }
    let mut edges = Vec::new();
    let mut reach: Vec<BitSet> = (0..k).map(|i| BitSet::from_indices(k, [i])).collect();
    for i in 0..k {
        for j in 0..k {
            if edge_set[i * k + j] {
                edges.push((i, j));
                reach[i].insert(j);
            }
        }
    }
    for via in 0..k {
        for i in 0..k {
            if i != via && reach[i].contains(via) {
                let row = reach[via].clone();
                reach[i].union_with(&row);
            }
        }
    }
    ClassDigraph {
        edges,
        reach,
        block_count: k,
    }
}

/// Smallest witness pair for a block edge: elements `(u, v)` with `u` in
/// `from`, `v` in `to`, `u` strictly below `v`, minimizing `(u, v)`.
fn edge_witness(lat: &FiniteLattice, p: &Partition, from: usize, to: usize) -> Option<(usize, usize)> {
    for &u in p.block(from) {
        for &v in p.block(to) {
            if lat.lt(u, v) {
                return Some((u, v));
            }
        }
    }
    None
}

/// A shortest alternating sequence witnessing that the class of `x` relates
/// to the class of `y`: consecutive entries are either in one block or
/// ordered upward. Returns `vec![x]` when `x == y`.
pub fn find_delta_sequence(
    lat: &FiniteLattice,
    p: &Partition,
    x: usize,
    y: usize,
) -> Result<Option<Vec<usize>>, QuotientError> {
    if !p.is_local_congruence(lat) {
        return Err(QuotientError::NotLocalCongruence);
    }
    if x == y {
        return Ok(Some(vec![x]));
    }
    let n = lat.n();
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    seen[x] = true;
    queue.push_back(x);
    let target = p.block_of(y);
    while let Some(e) = queue.pop_front() {
        if p.block_of(e) == target {
            let mut path = vec![e];
            let mut cur = e;
            while prev[cur] != usize::MAX {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return Ok(Some(path));
        }
        let mut nexts: Vec<usize> = p.block(p.block_of(e)).to_vec();
        nexts.extend(lat.up_set(e).iter());
        for nxt in nexts {
            if nxt != e && !seen[nxt] {
                seen[nxt] = true;
                prev[nxt] = e;
                queue.push_back(nxt);
            }
        }
    }
    Ok(None)
}

/// Outcome of the cycle-closure test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleCheck {
    AllClosed,
    /// An alternating cycle of elements spanning at least two blocks.
    Open(Vec<usize>),
}

impl CycleCheck {
    pub fn is_closed(&self) -> bool {
        matches!(self, CycleCheck::AllClosed)
    }
}

/// Checks that every alternating cycle stays inside one block, which is
/// exactly antisymmetry of the class preorder. On failure the returned
/// cycle starts and ends at the same element and crosses block boundaries.
pub fn all_cycles_closed(lat: &FiniteLattice, p: &Partition) -> Result<CycleCheck, QuotientError> {
    let digraph = class_preorder(lat, p)?;
    let sccs = digraph.sccs();
    let Some(comp) = sccs.iter().find(|c| c.len() > 1) else {
        return Ok(CycleCheck::AllClosed);
    };
    // Walk a shortest block cycle inside the component, starting from its
    // least block, then expand each hop to its element witness.
    let inside = BitSet::from_indices(digraph.block_count(), comp.iter().copied());
    let start = comp[0];
    let cycle_blocks = shortest_cycle(&digraph, &inside, start);
    let mut elems = Vec::new();
    let k = cycle_blocks.len();
    for i in 0..k {
        let from = cycle_blocks[i];
        let to = cycle_blocks[(i + 1) % k];
        let (u, v) = edge_witness(lat, p, from, to).expect("edge witness exists");
        if elems.last() != Some(&u) {
            elems.push(u);
        }
        elems.push(v);
    }
    // Close the cycle back at the starting element.
    if elems.last() != elems.first() {
        elems.push(elems[0]);
    }
    Ok(CycleCheck::Open(elems))
}

/// Shortest directed cycle through `start` staying inside `inside`.
fn shortest_cycle(digraph: &ClassDigraph, inside: &BitSet, start: usize) -> Vec<usize> {
    let k = digraph.block_count();
    let mut adj = vec![Vec::new(); k];
    for &(a, b) in &digraph.edges {
        if inside.contains(a) && inside.contains(b) {
            adj[a].push(b);
        }
    }
    let mut prev = vec![usize::MAX; k];
    let mut seen = vec![false; k];
    let mut queue = std::collections::VecDeque::new();
    seen[start] = true;
    queue.push_back(start);
    while let Some(b) = queue.pop_front() {
        for &nxt in &adj[b] {
            if nxt == start {
                let mut path = vec![b];
                let mut cur = b;
                while prev[cur] != usize::MAX {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return path;
            }
            if !seen[nxt] {
                seen[nxt] = true;
                prev[nxt] = b;
                queue.push_back(nxt);
            }
        }
    }
    unreachable!("a multi-block component always contains a cycle through each block")
}

/// Merges the blocks of every strongly connected component of the class
/// digraph. Contains `p`; the result need not be a local congruence.
pub fn rho_delta(lat: &FiniteLattice, p: &Partition) -> Result<Partition, QuotientError> {
    let digraph = class_preorder(lat, p)?;
    let mut block_map = vec![0usize; p.block_count()];
    for (cid, comp) in digraph.sccs().into_iter().enumerate() {
        for b in comp {
            block_map[b] = cid;
        }
    }
    let raw: Vec<usize> = (0..p.n()).map(|e| block_map[p.block_of(e)]).collect();
    Ok(Partition::from_block_of(raw))
}

/// The classes of a local congruence ordered by class reachability, which
/// the cycle-closure precondition makes a partial order.
#[derive(Debug, Clone)]
pub struct QuotientPoset {
    /// Element indices per class, canonical partition order.
    pub classes: Vec<Vec<usize>>,
    /// Rendered class labels.
    pub labels: Vec<String>,
    leq: Vec<BitSet>,
    hasse: Vec<(usize, usize)>,
}

impl QuotientPoset {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i].contains(j)
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    /// First pair of classes lacking a least upper bound or a greatest
    /// lower bound, scanning pairs in index order.
    pub fn lattice_defect(&self) -> Option<(usize, usize)> {
        let k = self.len();
        let down: Vec<BitSet> = (0..k)
            .map(|j| BitSet::from_indices(k, (0..k).filter(|&i| self.leq(i, j))))
            .collect();
        for i in 0..k {
            for j in i + 1..k {
                let uppers = self.leq[i].intersection(&self.leq[j]);
                if !uppers.iter().any(|u| uppers.is_subset(&self.leq[u])) {
                    return Some((i, j));
                }
                let lowers = down[i].intersection(&down[j]);
                if !lowers.iter().any(|u| lowers.is_subset(&down[u])) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_lattice(&self) -> bool {
        self.lattice_defect().is_none()
    }

    /// The same file shape lattices use; class labels list their members.
    pub fn to_file(&self) -> LatticeFile {
        LatticeFile {
            labels: self.labels.clone(),
            covers: self.hasse.clone(),
        }
    }
}

/// Builds the quotient poset of a local congruence whose cycles are all
/// closed.
pub fn quotient_poset(lat: &FiniteLattice, p: &Partition) -> Result<QuotientPoset, QuotientError> {
    match all_cycles_closed(lat, p)? {
        CycleCheck::AllClosed => {}
        CycleCheck::Open(cycle) => {
            return Err(QuotientError::CyclesNotClosed(
                cycle.into_iter().map(|e| lat.label(e).to_string()).collect(),
            ));
        }
    }
    let digraph = class_digraph_unchecked(lat, p);
    let k = p.block_count();
    let leq: Vec<BitSet> = (0..k)
        .map(|i| BitSet::from_indices(k, (0..k).filter(|&j| digraph.reaches(i, j))))
        .collect();
    let mut hasse = Vec::new();
    for i in 0..k {
        for j in leq[i].iter() {
            if i == j {
                continue;
            }
            let strictly_between = (0..k)
                .any(|m| m != i && m != j && leq[i].contains(m) && leq[m].contains(j));
            if !strictly_between {
                hasse.push((i, j));
            }
        }
    }
    hasse.sort_unstable();
    let labels = (0..k)
        .map(|b| {
            let mut names: Vec<&str> = p.block(b).iter().map(|&e| lat.label(e)).collect();
            names.sort_unstable();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    Ok(QuotientPoset {
        classes: p.blocks().to_vec(),
        labels,
        leq,
        hasse,
    })
}
