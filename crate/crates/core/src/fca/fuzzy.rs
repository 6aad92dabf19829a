//! Fuzzy contexts over a finite chain of truth grades with the Goedel
//! adjoint pair. Grades are exact rationals; internally everything works on
//! chain indices, so no floating point enters any comparison.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bitset::BitSet;
use crate::fca::FcaError;
use crate::lattice::FiniteLattice;
use crate::partition::Partition;

/// An exact rational, reduced, with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Frac {
    num: i64,
    den: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Frac {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den);
        let sign = if den < 0 { -1 } else { 1 };
        Frac {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn zero() -> Self {
        Frac { num: 0, den: 1 }
    }

    pub fn one() -> Self {
        Frac { num: 1, den: 1 }
    }

    /// Parses a plain decimal such as `1`, `0.5` or `-0.25`.
    pub fn from_decimal_str(s: &str) -> Option<Self> {
        let s = s.trim();
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1, s),
        };
        if body.is_empty() {
            return None;
        }
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || (int_part.is_empty() && frac_part.is_empty())
        {
            return None;
        }
        let int_val: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().ok()?
        };
        let mut num = int_val;
        let mut den = 1i64;
        for c in frac_part.chars() {
            num = num.checked_mul(10)?.checked_add((c as u8 - b'0') as i64)?;
            den = den.checked_mul(10)?;
        }
        Some(Frac::new(sign * num, den))
    }

    /// Decimal rendering; exact whenever the denominator divides a power of
    /// ten, which holds for every value parsed from a decimal.
    pub fn to_decimal_string(&self) -> String {
        let mut den = self.den;
        let mut twos = 0u32;
        let mut fives = 0u32;
        while den % 2 == 0 {
            den /= 2;
            twos += 1;
        }
        while den % 5 == 0 {
            den /= 5;
            fives += 1;
        }
        if den != 1 {
            return format!("{}/{}", self.num, self.den);
        }
        let digits = twos.max(fives);
        let scale = 10i128.pow(digits);
        let scaled = self.num as i128 * scale / self.den as i128;
        if digits == 0 {
            return scaled.to_string();
        }
        let sign = if scaled < 0 { "-" } else { "" };
        let mag = scaled.abs();
        let int = mag / scale;
        let frac = format!("{:0width$}", mag % scale, width = digits as usize);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_string())
    }
}

impl Serialize for Frac {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let text = self.to_decimal_string();
        match serde_json::Number::from_str(&text) {
            Ok(n) => n.serialize(serializer),
            Err(_) => text.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for Frac {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        let text = match &value {
            serde_json::Value::Number(n) => n.to_string(),
            serde_json::Value::String(s) => s.clone(),
            other => return Err(D::Error::custom(format!("expected a grade, found {other}"))),
        };
        Frac::from_decimal_str(&text)
            .ok_or_else(|| D::Error::custom(format!("cannot parse grade {text:?}")))
    }
}

/// A totally ordered finite set of truth grades containing 0 and 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteChain {
    values: Vec<Frac>,
}

impl FiniteChain {
    pub fn new(mut values: Vec<Frac>) -> Result<Self, FcaError> {
        values.sort();
        values.dedup();
        if values.first() != Some(&Frac::zero()) {
            return Err(FcaError::InvalidChain("must contain 0 as its least grade".into()));
        }
        if values.last() != Some(&Frac::one()) {
            return Err(FcaError::InvalidChain("must contain 1 as its greatest grade".into()));
        }
        Ok(FiniteChain { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[Frac] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> Frac {
        self.values[idx]
    }

    pub fn top_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn index_of(&self, v: &Frac) -> Result<usize, FcaError> {
        self.values
            .iter()
            .position(|x| x == v)
            .ok_or_else(|| FcaError::GradeNotInChain(v.to_string()))
    }

    /// Goedel residuum on chain indices: the whole truth when `x` is at
    /// most `y`, otherwise `y` itself.
    pub fn residuum_idx(&self, x: usize, y: usize) -> usize {
        if x <= y {
            self.top_index()
        } else {
            y
        }
    }

    pub fn residuum(&self, x: &Frac, y: &Frac) -> Result<Frac, FcaError> {
        let xi = self.index_of(x)?;
        let yi = self.index_of(y)?;
        Ok(self.value(self.residuum_idx(xi, yi)))
    }
}

/// The conjunctor of the fixed adjoint pair. Only the Goedel pair on a
/// finite chain is supported.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Conjunctor {
    #[default]
    Goedel,
}

/// A graded incidence table over a finite chain, attribute-major like its
/// crisp counterpart. Grades are stored as chain indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzyContext {
    attributes: Vec<String>,
    objects: Vec<String>,
    chain: FiniteChain,
    grades: Vec<Vec<usize>>,
    pub conjunctor: Conjunctor,
}

/// JSON form mirroring the incidence table, attribute-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FuzzyContextFile {
    pub chain: Vec<Frac>,
    pub attributes: Vec<String>,
    pub objects: Vec<String>,
    #[serde(rename = "R")]
    pub relation: Vec<Vec<Frac>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjunctor: Option<Conjunctor>,
}

impl FuzzyContext {
    pub fn new<S: Into<String>>(
        attributes: Vec<S>,
        objects: Vec<S>,
        chain: FiniteChain,
        relation: &[Vec<Frac>],
    ) -> Result<Self, FcaError> {
        let attributes: Vec<String> = attributes.into_iter().map(Into::into).collect();
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        if relation.len() != attributes.len() {
            return Err(FcaError::Malformed(format!(
                "{} relation rows for {} attributes",
                relation.len(),
                attributes.len()
            )));
        }
        let mut grades = Vec::with_capacity(attributes.len());
        for row in relation {
            if row.len() != objects.len() {
                return Err(FcaError::Malformed(format!(
                    "relation row of width {} for {} objects",
                    row.len(),
                    objects.len()
                )));
            }
            grades.push(
                row.iter()
                    .map(|v| chain.index_of(v))
                    .collect::<Result<Vec<usize>, FcaError>>()?,
            );
        }
        Ok(FuzzyContext {
            attributes,
            objects,
            chain,
            grades,
            conjunctor: Conjunctor::Goedel,
        })
    }

    pub fn from_file(file: &FuzzyContextFile) -> Result<Self, FcaError> {
        let chain = FiniteChain::new(file.chain.clone())?;
        Self::new(
            file.attributes.clone(),
            file.objects.clone(),
            chain,
            &file.relation,
        )
    }

    pub fn to_file(&self) -> FuzzyContextFile {
        FuzzyContextFile {
            chain: self.chain.values().to_vec(),
            attributes: self.attributes.clone(),
            objects: self.objects.clone(),
            relation: self
                .grades
                .iter()
                .map(|row| row.iter().map(|&g| self.chain.value(g)).collect())
                .collect(),
            conjunctor: Some(self.conjunctor),
        }
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn chain(&self) -> &FiniteChain {
        &self.chain
    }

    pub fn grade_idx(&self, attribute: usize, object: usize) -> usize {
        self.grades[attribute][object]
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

    /// Degree to which each attribute is shared by the graded object set:
    /// the pointwise infimum of residua into the incidence row.
    pub fn up(&self, g: &[usize]) -> Vec<usize> {
        self.up_restricted(g, None)
    }

    pub fn down(&self, f: &[usize]) -> Vec<usize> {
        self.down_restricted(f, None)
    }

    fn up_restricted(&self, g: &[usize], within: Option<&BitSet>) -> Vec<usize> {
        assert_eq!(g.len(), self.objects.len());
        (0..self.attributes.len())
            .map(|a| {
                if within.is_some_and(|d| !d.contains(a)) {
                    return usize::MAX; // placeholder, filtered by caller
                }
                (0..self.objects.len())
                    .map(|b| self.chain.residuum_idx(g[b], self.grades[a][b]))
                    .min()
                    .unwrap_or(self.chain.top_index())
            })
            .collect()
    }

    fn down_restricted(&self, f: &[usize], within: Option<&BitSet>) -> Vec<usize> {
        assert_eq!(f.len(), self.attributes.len());
        (0..self.objects.len())
            .map(|b| {
                (0..self.attributes.len())
                    .filter(|&a| within.is_none_or(|d| d.contains(a)))
                    .map(|a| self.chain.residuum_idx(f[a], self.grades[a][b]))
                    .min()
                    .unwrap_or(self.chain.top_index())
            })
            .collect()
    }

    pub fn extent_closure(&self, g: &[usize]) -> Vec<usize> {
        self.down(&self.up(g))
    }

    /// Closure of a graded object set through the subcontext restricted to
    /// the attribute subset `d`.
    pub fn extent_closure_restricted(&self, g: &[usize], d: &BitSet) -> Vec<usize> {
        self.down_restricted(&self.up_restricted(g, Some(d)), Some(d))
    }

    pub fn grades_from(&self, values: &[Frac]) -> Result<Vec<usize>, FcaError> {
        values.iter().map(|v| self.chain.index_of(v)).collect()
    }

    pub fn values_of(&self, idxs: &[usize]) -> Vec<Frac> {
        idxs.iter().map(|&i| self.chain.value(i)).collect()
    }

    /// Every concept, by exhaustive closure over all graded object sets.
    pub fn concepts(&self) -> Result<FuzzyConceptLattice, FcaError> {
        let k = self.chain.len() as u128;
        let n = self.objects.len() as u32;
        let total = k
            .checked_pow(n)
            .filter(|&t| t <= 2_000_000)
            .ok_or_else(|| FcaError::ContextTooLarge(k.saturating_pow(n)))?;
        let mut extents: Vec<Vec<usize>> = Vec::new();
        let mut g = vec![0usize; self.objects.len()];
        for _ in 0..total {
            if self.extent_closure(&g) == g {
                extents.push(g.clone());
            }
            // Odometer over chain indices, least significant object last.
            let mut pos = self.objects.len();
            while pos > 0 {
                pos -= 1;
                if g[pos] + 1 < self.chain.len() {
                    g[pos] += 1;
                    break;
                }
                g[pos] = 0;
            }
        }
        extents.sort();
        let concepts: Vec<FuzzyConcept> = extents
            .into_iter()
            .map(|extent| {
                let intent = self.up(&extent);
                FuzzyConcept { extent, intent }
            })
            .collect();
        let m = concepts.len();
        let labels: Vec<String> = (0..m).map(|i| format!("c{i}")).collect();
        let mut pairs = Vec::new();
        for i in 0..m {
            for j in 0..m {
                if i != j
                    && concepts[i]
                        .extent
                        .iter()
                        .zip(&concepts[j].extent)
                        .all(|(a, b)| a <= b)
                {
                    pairs.push((i, j));
                }
            }
        }
        let lattice = FiniteLattice::from_order(labels, &pairs)
            .expect("fuzzy concept order always forms a lattice");
        Ok(FuzzyConceptLattice {
            concepts,
            lattice,
            chain: self.chain.clone(),
        })
    }
}

/// A graded extent/intent pair, as chain indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzyConcept {
    pub extent: Vec<usize>,
    pub intent: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct FuzzyConceptLattice {
    pub concepts: Vec<FuzzyConcept>,
    pub lattice: FiniteLattice,
    pub chain: FiniteChain,
}

impl FuzzyConceptLattice {
    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn index_of_extent(&self, extent: &[usize]) -> Option<usize> {
        self.concepts.iter().position(|c| c.extent == extent)
    }

    /// Groups concepts by the closure of their extents through the
    /// subcontext restricted to `d`.
    pub fn induced_relation(
        &self,
        ctx: &FuzzyContext,
        d: &BitSet,
    ) -> Result<Partition, FcaError> {
        if d.is_empty() {
            return Err(FcaError::EmptyAttributeSet);
        }
        let keys: Vec<Vec<usize>> = self
            .concepts
            .iter()
            .map(|c| ctx.extent_closure_restricted(&c.extent, d))
            .collect();
        let mut reps: Vec<(Vec<usize>, usize)> = Vec::new();
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

    pub fn class_max(&self, block: &[usize]) -> Result<usize, FcaError> {
        super::block_maximum(&self.lattice, block)
    }
}
