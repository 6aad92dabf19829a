//! Crisp formal contexts: derivation operators, concept enumeration and the
//! equivalence relation induced on concepts by an attribute subset.

use std::fmt::Write as _;

use crate::bitset::BitSet;
use crate::fca::FcaError;
use crate::lattice::FiniteLattice;
use crate::partition::Partition;

/// An attribute-object incidence table. Rows are attribute-major: row `a`
/// is the set of objects carrying attribute `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalContext {
    attributes: Vec<String>,
    objects: Vec<String>,
    rows: Vec<BitSet>,
}

impl FormalContext {
    pub fn new<S: Into<String>>(
        attributes: Vec<S>,
        objects: Vec<S>,
        incidence: &[Vec<bool>],
    ) -> Result<Self, FcaError> {
        let attributes: Vec<String> = attributes.into_iter().map(Into::into).collect();
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        if incidence.len() != attributes.len() {
            return Err(FcaError::Malformed(format!(
                "{} incidence rows for {} attributes",
                incidence.len(),
                attributes.len()
            )));
        }
        let mut rows = Vec::with_capacity(attributes.len());
        for row in incidence {
            if row.len() != objects.len() {
                return Err(FcaError::Malformed(format!(
                    "incidence row of width {} for {} objects",
                    row.len(),
                    objects.len()
                )));
            }
            rows.push(BitSet::from_indices(
                objects.len(),
                row.iter().enumerate().filter(|(_, &v)| v).map(|(i, _)| i),
            ));
        }
        Ok(FormalContext {
            attributes,
            objects,
            rows,
        })
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn incidence(&self, attribute: usize, object: usize) -> bool {
        self.rows[attribute].contains(object)
    }

    pub fn object_set(&self, labels: &[&str]) -> Result<BitSet, FcaError> {
        let mut s = BitSet::new(self.objects.len());
        for l in labels {
            let i = self
                .objects
                .iter()
                .position(|o| o == l)
                .ok_or_else(|| FcaError::UnknownObject(l.to_string()))?;
            s.insert(i);
        }
        Ok(s)
    }

    pub fn attribute_set(&self, labels: &[&str]) -> Result<BitSet, FcaError> {
        let mut s = BitSet::new(self.attributes.len());
        for l in labels {
            let i = self
                .attributes
                .iter()
                .position(|a| a == l)
                .ok_or_else(|| FcaError::UnknownAttribute(l.to_string()))?;
            s.insert(i);
        }
        Ok(s)
    }

    /// Attributes common to every object of `x`; all attributes for empty `x`.
    pub fn up(&self, x: &BitSet) -> BitSet {
        BitSet::from_indices(
            self.attributes.len(),
            (0..self.attributes.len()).filter(|&a| x.is_subset(&self.rows[a])),
        )
    }

    /// Objects carrying every attribute of `y`; all objects for empty `y`.
    pub fn down(&self, y: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.objects.len());
        for a in y.iter() {
            out.intersect_with(&self.rows[a]);
        }
        out
    }

    pub fn extent_closure(&self, x: &BitSet) -> BitSet {
        self.down(&self.up(x))
    }

    pub fn intent_closure(&self, y: &BitSet) -> BitSet {
        self.up(&self.down(y))
    }

    /// Every concept, by exhaustive closure of all object subsets. The
    /// trusted slow path; `concepts_next_closure` must agree with it.
    pub fn concepts(&self) -> Result<ConceptLattice, FcaError> {
        let n = self.objects.len();
        if n > 20 {
            return Err(FcaError::ContextTooLarge(1u128 << n));
        }
        let mut extents: Vec<BitSet> = Vec::new();
        for mask in 0u32..(1u32 << n) {
            let x = BitSet::from_indices(n, (0..n).filter(|&i| mask & (1 << i) != 0));
            let closed = self.extent_closure(&x);
            if !extents.contains(&closed) {
                extents.push(closed);
            }
        }
        self.lattice_from_extents(extents)
    }

    /// Lectic-order closure enumeration over intents, the faster route.
    pub fn concepts_next_closure(&self) -> Result<ConceptLattice, FcaError> {
        let mut extents = Vec::new();
        let mut current = self.intent_closure(&BitSet::new(self.attributes.len()));
        loop {
            extents.push(self.down(&current));
            match self.next_closed_intent(&current) {
                Some(next) => current = next,
                None => break,
            }
        }
        self.lattice_from_extents(extents)
    }

    fn next_closed_intent(&self, current: &BitSet) -> Option<BitSet> {
        let m = self.attributes.len();
        for i in (0..m).rev() {
            if current.contains(i) {
                continue;
            }
            let mut candidate = BitSet::new(m);
            for a in current.iter().take_while(|&a| a < i) {
                candidate.insert(a);
            }
            candidate.insert(i);
            let closed = self.intent_closure(&candidate);
            if closed.iter().filter(|&a| a < i).all(|a| current.contains(a)) {
                return Some(closed);
            }
        }
        None
    }

    fn lattice_from_extents(&self, mut extents: Vec<BitSet>) -> Result<ConceptLattice, FcaError> {
        extents.sort();
        extents.dedup();
        let concepts: Vec<Concept> = extents
            .into_iter()
            .map(|extent| {
                let intent = self.up(&extent);
                Concept { extent, intent }
            })
            .collect();
        let k = concepts.len();
        let labels: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
        let mut pairs = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i != j && concepts[i].extent.is_subset(&concepts[j].extent) {
                    pairs.push((i, j));
                }
            }
        }
        let lattice = FiniteLattice::from_order(labels, &pairs)
            .expect("concept order always forms a lattice");
        Ok(ConceptLattice { concepts, lattice })
    }
}

/// A closed extent/intent pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Concept {
    pub extent: BitSet,
    pub intent: BitSet,
}

/// All concepts of a context, sorted by extent, together with the lattice
/// they form under extent inclusion.
#[derive(Debug, Clone)]
pub struct ConceptLattice {
    pub concepts: Vec<Concept>,
    pub lattice: FiniteLattice,
}

impl ConceptLattice {
    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn index_of_extent(&self, extent: &BitSet) -> Option<usize> {
        self.concepts.iter().position(|c| &c.extent == extent)
    }

    /// Groups concepts by the closure of their extents through the
    /// operators restricted to the attribute subset `d`.
    pub fn induced_relation(
        &self,
        ctx: &FormalContext,
        d: &BitSet,
    ) -> Result<Partition, FcaError> {
        if d.is_empty() {
            return Err(FcaError::EmptyAttributeSet);
        }
        let keys: Vec<BitSet> = self
            .concepts
            .iter()
            .map(|c| ctx.down(&c.intent.intersection(d)))
            .collect();
        let mut reps: Vec<(BitSet, usize)> = Vec::new();
        let mut block_of = Vec::with_capacity(keys.len());
        for key in keys {
            match reps.iter().find(|(k, _)| *k == key) {
                Some(&(_, b)) => block_of.push(b),
                None => {
                    let b = reps.len();
                    reps.push((key, b));
                    block_of.push(b);
                }
            }
        }
        Ok(Partition::from_block_of(block_of))
    }

    /// The unique maximum concept of a block of concept indices.
    pub fn class_max(&self, block: &[usize]) -> Result<usize, FcaError> {
        super::block_maximum(&self.lattice, block)
    }
}

// ----- Burmeister .cxt reading and writing -----

/// Parses the Burmeister exchange format: a `B` header, object and
/// attribute counts, the two name lists, then one `X`/`.` row per object.
pub fn parse_cxt(text: &str) -> Result<FormalContext, FcaError> {
    let mut lines = text.lines().map(str::trim_end);
    let magic = lines
        .next()
        .ok_or_else(|| FcaError::Malformed("empty file".into()))?;
    if magic.trim() != "B" {
        return Err(FcaError::Malformed(format!(
            "expected header line 'B', found {magic:?}"
        )));
    }
    let mut rest: Vec<&str> = lines.collect();
    rest.retain(|l| !l.trim().is_empty());
    let mut at = 0usize;
    fn next<'a>(rest: &[&'a str], at: &mut usize, what: &str) -> Result<&'a str, FcaError> {
        let line = rest
            .get(*at)
            .copied()
            .ok_or_else(|| FcaError::Malformed(format!("missing {what}")))?;
        *at += 1;
        Ok(line)
    }
    let first = next(&rest, &mut at, "object count")?;
    let objects_n: usize = match first.trim().parse::<usize>() {
        Ok(n) => n,
        // A non-numeric line right after the header is the context name.
        Err(_) => next(&rest, &mut at, "object count")?
            .trim()
            .parse::<usize>()
            .map_err(|_| FcaError::Malformed("object count not a number".into()))?,
    };
    let attributes_n = next(&rest, &mut at, "attribute count")?
        .trim()
        .parse::<usize>()
        .map_err(|_| FcaError::Malformed("attribute count not a number".into()))?;
    let mut objects = Vec::with_capacity(objects_n);
    for _ in 0..objects_n {
        objects.push(next(&rest, &mut at, "object name")?.trim().to_string());
    }
    let mut attributes = Vec::with_capacity(attributes_n);
    for _ in 0..attributes_n {
        attributes.push(next(&rest, &mut at, "attribute name")?.trim().to_string());
    }
    // Rows are object-major in the file; storage is attribute-major.
    let mut incidence = vec![vec![false; objects_n]; attributes_n];
    for obj in 0..objects_n {
        let row = next(&rest, &mut at, "incidence row")?.trim();
        let cells: Vec<char> = row.chars().collect();
        if cells.len() != attributes_n {
            return Err(FcaError::Malformed(format!(
                "incidence row {} has {} cells, expected {}",
                obj + 1,
                cells.len(),
                attributes_n
            )));
        }
        for (attr, &ch) in cells.iter().enumerate() {
            incidence[attr][obj] = match ch {
                'X' | 'x' => true,
                '.' => false,
                other => {
                    return Err(FcaError::Malformed(format!(
                        "unexpected incidence character {other:?}"
                    )))
                }
            };
        }
    }
    FormalContext::new(attributes, objects, &incidence)
}

pub fn write_cxt(ctx: &FormalContext) -> String {
    let mut out = String::from("B\n\n");
    let _ = writeln!(out, "{}", ctx.objects().len());
    let _ = writeln!(out, "{}", ctx.attributes().len());
    out.push('\n');
    for o in ctx.objects() {
        let _ = writeln!(out, "{o}");
    }
    for a in ctx.attributes() {
        let _ = writeln!(out, "{a}");
    }
    for obj in 0..ctx.objects().len() {
        for attr in 0..ctx.attributes().len() {
            out.push(if ctx.incidence(attr, obj) { 'X' } else { '.' });
        }
        out.push('\n');
    }
    out
}
