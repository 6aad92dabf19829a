//! Dense bit sets backing order relations, extents and attribute sets.

use std::fmt;

const WORD: usize = 64;

/// A fixed-capacity set of small integers stored as machine words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    nbits: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(nbits: usize) -> Self {
        BitSet {
            nbits,
            words: vec![0; nbits.div_ceil(WORD)],
        }
    }

    pub fn full(nbits: usize) -> Self {
        let mut s = Self::new(nbits);
        for w in &mut s.words {
            *w = u64::MAX;
        }
        s.clear_tail();
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(nbits: usize, indices: I) -> Self {
        let mut s = Self::new(nbits);
        for i in indices {
            s.insert(i);
        }
        s
    }

    fn clear_tail(&mut self) {
        let used = self.nbits % WORD;
        if used != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
        if self.nbits == 0 {
            self.words.clear();
        }
    }

    pub fn capacity(&self) -> usize {
        self.nbits
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.nbits);
        self.words[i / WORD] & (1u64 << (i % WORD)) != 0
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.nbits);
        self.words[i / WORD] |= 1u64 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.nbits);
        self.words[i / WORD] &= !(1u64 << (i % WORD));
    }

    pub fn union_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.nbits, other.nbits);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn first(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let t = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * WORD + t)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

// Lexicographic on the membership vector: the first index where the sets
// differ decides, and the set missing that index is smaller.
impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = 1u64 << diff.trailing_zeros();
                return if a & bit == 0 {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                };
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = BitSet::new(70);
        s.insert(0);
        s.insert(65);
        assert!(s.contains(0) && s.contains(65) && !s.contains(1));
        assert_eq!(s.count(), 2);
        assert_eq!(s.to_vec(), vec![0, 65]);
        s.remove(0);
        assert_eq!(s.first(), Some(65));
    }

    #[test]
    fn subset_and_order() {
        let a = BitSet::from_indices(5, [1, 2]);
        let b = BitSet::from_indices(5, [1, 2, 4]);
        assert!(a.is_subset(&b));
        assert!(!b.is_subset(&a));
        // {1,2} < {1,2,4}: index 4 differs, a misses it.
        assert!(a < b);
        // {0} > {} and {1} < {0}.
        let empty = BitSet::new(5);
        let zero = BitSet::from_indices(5, [0]);
        let one = BitSet::from_indices(5, [1]);
        assert!(empty < zero);
        assert!(one < zero);
    }

    #[test]
    fn full_set() {
        let f = BitSet::full(67);
        assert_eq!(f.count(), 67);
        assert!(f.contains(66));
    }
}
