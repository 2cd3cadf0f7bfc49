//! Small combinatorial utilities: binomial tables, exact big-integer
//! binomials, k-subset enumeration and the combinatorial number system
//! (ranking/unranking of k-subsets in colex order).

use num_bigint::BigUint;
use num_traits::One;

use crate::VertexSet;

/// Pascal-triangle lookup table with saturating u64 entries.
pub struct BinomTable {
    n_max: usize,
    k_max: usize,
    table: Vec<u64>,
}

impl BinomTable {
    pub fn new(n_max: usize, k_max: usize) -> Self {
        let mut table = vec![0u64; (n_max + 1) * (k_max + 1)];
        for n in 0..=n_max {
            for k in 0..=k_max.min(n) {
                let v = if k == 0 || k == n {
                    1
                } else {
                    table[(n - 1) * (k_max + 1) + k - 1]
                        .saturating_add(table[(n - 1) * (k_max + 1) + k])
                };
                table[n * (k_max + 1) + k] = v;
            }
        }
        BinomTable { n_max, k_max, table }
    }

    #[inline]
    pub fn get(&self, n: usize, k: usize) -> u64 {
        if k > n {
            return 0;
        }
        debug_assert!(n <= self.n_max && k <= self.k_max);
        self.table[n * (self.k_max + 1) + k]
    }

    /// Colex rank of a k-subset given by ascending 0-based elements.
    #[inline]
    pub fn rank(&self, elems0: &[usize]) -> u64 {
        elems0
            .iter()
            .enumerate()
            .map(|(i, &c)| self.get(c, i + 1))
            .sum()
    }

    /// Inverse of [`BinomTable::rank`]: ascending 0-based elements of the
    /// k-subset with the given colex rank.
    pub fn unrank(&self, mut r: u64, k: usize, n: usize) -> Vec<usize> {
        let mut out = vec![0usize; k];
        let mut hi = n;
        for i in (1..=k).rev() {
            // largest c with binom(c, i) <= r
            let mut c = i - 1;
            for cand in (i - 1..hi).rev() {
                if self.get(cand, i) <= r {
                    c = cand;
                    break;
                }
            }
            r -= self.get(c, i);
            out[i - 1] = c;
            hi = c;
        }
        out
    }
}

/// Exact binomial coefficient as a big integer.
pub fn binomial_exact(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Binomial coefficient as f64, via log-gamma free product (exact for small
/// arguments, good to ~1e-12 relative otherwise).
pub fn binomial_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc *= (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Enumerates all k-subsets of `{1..n}` as [`VertexSet`]s in lexicographic
/// order of ascending vertex lists.
pub fn k_subsets(n: usize, k: usize) -> Vec<VertexSet> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    if k == 0 {
        out.push(VertexSet::empty());
        return out;
    }
    let mut cur: Vec<u32> = (1..=k as u32).collect();
    loop {
        out.push(VertexSet::from_vertices(cur.iter().copied()));
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < (n - k + i + 1) as u32 {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All k-subsets of the vertices of `base`.
pub fn k_subsets_of(base: &VertexSet, k: usize) -> Vec<VertexSet> {
    let verts = base.vertices();
    if k > verts.len() {
        return Vec::new();
    }
    k_subsets(verts.len(), k)
        .into_iter()
        .map(|idx| idx.iter().map(|i| verts[(i - 1) as usize]).collect())
        .collect()
}
