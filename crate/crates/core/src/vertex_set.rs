//! Bitset representation of faces: subsets of the ground set `{1..n}`.

use std::fmt;

use smallvec::SmallVec;

/// A subset of `{1..n}`, stored as a bitmask. Vertex `v` occupies bit `v-1`.
///
/// Trailing zero words are trimmed so that equality and hashing are
/// representation-independent. The ground-set size is not stored; operations
/// that need it (complement, range checks) take `n` explicitly.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet {
    words: SmallVec<[u64; 2]>,
}

impl VertexSet {
    pub fn empty() -> Self {
        VertexSet::default()
    }

    pub fn singleton(v: u32) -> Self {
        let mut s = VertexSet::empty();
        s.insert(v);
        s
    }

    /// Builds a set from 1-based vertex labels.
    pub fn from_vertices<I: IntoIterator<Item = u32>>(vs: I) -> Self {
        let mut s = VertexSet::empty();
        for v in vs {
            s.insert(v);
        }
        s
    }

    fn trim(&mut self) {
        while matches!(self.words.last(), Some(0)) {
            self.words.pop();
        }
    }

    pub fn insert(&mut self, v: u32) {
        assert!(v >= 1, "vertices are 1-based");
        let (w, b) = (((v - 1) / 64) as usize, (v - 1) % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1u64 << b;
    }

    pub fn remove(&mut self, v: u32) {
        let (w, b) = (((v - 1) / 64) as usize, (v - 1) % 64);
        if w < self.words.len() {
            self.words[w] &= !(1u64 << b);
            self.trim();
        }
    }

    pub fn contains(&self, v: u32) -> bool {
        let (w, b) = (((v - 1) / 64) as usize, (v - 1) % 64);
        w < self.words.len() && self.words[w] >> b & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        if self.words.len() > other.words.len() {
            return false;
        }
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(short.words.iter()) {
            *w |= s;
        }
        VertexSet { words }
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let n = self.words.len().min(other.words.len());
        let mut words: SmallVec<[u64; 2]> = self.words[..n]
            .iter()
            .zip(other.words[..n].iter())
            .map(|(a, b)| a & b)
            .collect();
        while matches!(words.last(), Some(0)) {
            words.pop();
        }
        VertexSet { words }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut words = self.words.clone();
        for (w, s) in words.iter_mut().zip(other.words.iter()) {
            *w &= !s;
        }
        let mut out = VertexSet { words };
        out.trim();
        out
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        let n = self.words.len().min(other.words.len());
        self.words[..n]
            .iter()
            .zip(other.words[..n].iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Complement within the ground set `{1..n}`.
    pub fn complement(&self, n: usize) -> VertexSet {
        let mut out = VertexSet::empty();
        for v in 1..=n as u32 {
            if !self.contains(v) {
                out.insert(v);
            }
        }
        out
    }

    pub fn max_vertex(&self) -> Option<u32> {
        let w = self.words.len().checked_sub(1)?;
        Some((w as u32) * 64 + 64 - self.words[w].leading_zeros())
    }

    /// 1-based vertex labels in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let base = wi as u32 * 64;
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                Some(base + b + 1)
            })
        })
    }

    pub fn vertices(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

impl FromIterator<u32> for VertexSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        VertexSet::from_vertices(iter)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Convenience macro for literal sets in tests: `vset![1,2,3]`.
#[macro_export]
macro_rules! vset {
    ($($v:expr),* $(,)?) => {
        $crate::VertexSet::from_vertices([$($v as u32),*])
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = vset![1, 2, 3];
        let b = vset![2, 3, 4];
        assert_eq!(a.len(), 3);
        assert_eq!(a.intersection(&b), vset![2, 3]);
        assert_eq!(a.union(&b), vset![1, 2, 3, 4]);
        assert_eq!(a.difference(&b), vset![1]);
        assert_eq!(a.intersection_len(&b), 2);
        assert!(vset![2].is_subset(&a));
        assert!(!a.is_subset(&b));
        assert_eq!(a.vertices(), vec![1, 2, 3]);
    }

    #[test]
    fn trim_keeps_equality_canonical() {
        let mut a = vset![1, 70];
        a.remove(70);
        assert_eq!(a, vset![1]);
        assert_eq!(a.max_vertex(), Some(1));
    }

    #[test]
    fn complement_within_ground_set() {
        assert_eq!(vset![1, 3].complement(4), vset![2, 4]);
        assert_eq!(VertexSet::empty().complement(3), vset![1, 2, 3]);
    }

    #[test]
    fn high_vertices_cross_word_boundary() {
        let s = vset![64, 65, 129];
        assert_eq!(s.len(), 3);
        assert_eq!(s.vertices(), vec![64, 65, 129]);
        assert_eq!(s.max_vertex(), Some(129));
    }
}
