//! Monotone Boolean functions, the face-complex correspondence, exact
//! decision-tree complexity, and the evasiveness census.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::homology::reduced_betti_numbers;
use crate::{SimplicialComplex, VertexSet};

/// Exact decision-tree computation refuses arities above this; the memo
/// table is keyed on sub-word truth tables.
pub const ARITY_BUDGET: usize = 6;

/// Monotone function `{0,1}^n -> {0,1}`, stored as a truth-table bitmap:
/// bit `m` of the table is the value on the input whose i-th coordinate is
/// bit i of `m` (variable 1 least significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonotoneBooleanFunction {
    n: usize,
    bits: Vec<u64>,
}

impl MonotoneBooleanFunction {
    /// Validates monotonicity bit-by-bit; the error carries a violating
    /// input pair (a ⊆ b with f(a)=1, f(b)=0).
    pub fn from_bits(n: usize, bits: Vec<u64>) -> Result<Self> {
        if n > 20 {
            return Err(Error::InvalidParameter(format!(
                "arity {n} too large for truth-table storage"
            )));
        }
        let words = ((1usize << n) + 63) / 64;
        if bits.len() != words {
            return Err(Error::InvalidParameter(format!(
                "truth table needs {words} words for arity {n}, got {}",
                bits.len()
            )));
        }
        let f = MonotoneBooleanFunction { n, bits };
        for m in 0..1u64 << n {
            if !f.value(m) {
                continue;
            }
            for i in 0..n {
                let up = m | 1 << i;
                if up != m && !f.value(up) {
                    return Err(Error::NotMonotone(m, up));
                }
            }
        }
        Ok(f)
    }

    fn from_table_unchecked(n: usize, table: u64) -> Self {
        debug_assert!(n <= 6);
        MonotoneBooleanFunction { n, bits: vec![table] }
    }

    pub fn constant(n: usize, value: bool) -> Self {
        let words = ((1usize << n) + 63) / 64;
        let fill = if value { u64::MAX } else { 0 };
        let mut bits = vec![fill; words];
        if value && n < 6 {
            bits[0] = (1u64 << (1 << n)) - 1;
        }
        MonotoneBooleanFunction { n, bits }
    }

    pub fn and(n: usize) -> Self {
        let mut f = Self::constant(n, false);
        f.set(((1u64 << n) - 1) as u64, true);
        f
    }

    pub fn or(n: usize) -> Self {
        let mut f = Self::constant(n, true);
        f.set(0, false);
        f
    }

    /// The projection onto variable `i` (1-based).
    pub fn projection(n: usize, i: usize) -> Self {
        assert!(1 <= i && i <= n);
        let mut f = Self::constant(n, false);
        for m in 0..1u64 << n {
            if m >> (i - 1) & 1 == 1 {
                f.set(m, true);
            }
        }
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, input: u64) -> bool {
        self.bits[(input / 64) as usize] >> (input % 64) & 1 == 1
    }

    fn set(&mut self, input: u64, v: bool) {
        let word = &mut self.bits[(input / 64) as usize];
        if v {
            *word |= 1 << (input % 64);
        } else {
            *word &= !(1 << (input % 64));
        }
    }

    pub fn is_constant(&self) -> bool {
        self.value(0) == self.value((1u64 << self.n) - 1)
    }

    /// Truth table as a single word; arity 6 at most.
    pub fn table_word(&self) -> Option<u64> {
        (self.n <= 6).then(|| self.bits[0])
    }

    /// The dual `¬f(¬x)`; monotone whenever f is.
    pub fn dual(&self) -> Self {
        let full = (1u64 << self.n) - 1;
        let mut out = Self::constant(self.n, false);
        for m in 0..=full {
            out.set(m, !self.value(full ^ m));
        }
        out
    }

    /// Relabels variables: new variable i reads old variable `perm[i-1]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut out = Self::constant(self.n, false);
        for m in 0..1u64 << self.n {
            let mut old = 0u64;
            for (new_i, &old_i) in perm.iter().enumerate() {
                if m >> new_i & 1 == 1 {
                    old |= 1 << (old_i - 1);
                }
            }
            out.set(m, self.value(old));
        }
        out
    }
}

fn mask_to_set(mask: u64) -> VertexSet {
    let mut s = VertexSet::empty();
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        s.insert(i as u32 + 1);
        m &= m - 1;
    }
    s
}

/// The complex whose faces are the nonempty zero-inputs of `f`. The
/// constant-1 function maps to the empty complex, constant-0 to the full
/// simplex.
pub fn complex_of_function(f: &MonotoneBooleanFunction) -> SimplicialComplex {
    let n = f.n;
    // zero set is a down-set; facets are zeros all of whose one-bit
    // extensions are ones
    let mut facets = Vec::new();
    for m in 1..1u64 << n {
        if f.value(m) {
            continue;
        }
        let maximal = (0..n).all(|i| m >> i & 1 == 1 || f.value(m | 1 << i));
        if maximal {
            facets.push(mask_to_set(m));
        }
    }
    if facets.is_empty() {
        SimplicialComplex::empty(n)
    } else {
        SimplicialComplex::from_generators_unchecked(&facets, n)
    }
}

/// Inverse of [`complex_of_function`]: `f(x_A) = 0` iff A is a face or A
/// is empty.
pub fn function_of_complex(complex: &SimplicialComplex) -> MonotoneBooleanFunction {
    let n = complex.n();
    let mut f = MonotoneBooleanFunction::constant(n, true);
    f.set(0, false);
    for m in 1..1u64 << n {
        let s = mask_to_set(m);
        if complex.facets().iter().any(|fac| s.is_subset(fac)) {
            f.set(m, false);
        }
    }
    f
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecisionTreeStats {
    /// Query count of the best adaptive algorithm.
    pub d: usize,
    /// `d == n`.
    pub evasive: bool,
    pub nodes_memoized: u64,
}

/// Exact minimax decision-tree complexity:
/// `D(f) = 0` for constant f, else `1 + min_i max(D(f|x_i=0), D(f|x_i=1))`.
pub fn decision_tree_complexity(f: &MonotoneBooleanFunction) -> Result<DecisionTreeStats> {
    if f.n > ARITY_BUDGET {
        return Err(Error::ArityBudget(f.n as u32, ARITY_BUDGET as u32));
    }
    let table = f.bits[0];
    let mut memo: HashMap<(usize, u64), usize> = HashMap::new();
    let d = minimax(f.n, table, &mut memo);
    Ok(DecisionTreeStats { d, evasive: d == f.n, nodes_memoized: memo.len() as u64 })
}

fn table_mask(k: usize) -> u64 {
    if k == 6 { u64::MAX } else { (1u64 << (1 << k)) - 1 }
}

/// Restricts a k-variable table by fixing variable `i` (0-based) to `b`,
/// compressing out the fixed variable.
fn restrict(k: usize, table: u64, i: usize, b: bool) -> u64 {
    let mut out = 0u64;
    for m in 0..1u64 << (k - 1) {
        let low = m & ((1 << i) - 1);
        let high = (m >> i) << (i + 1);
        let full = low | high | (b as u64) << i;
        out |= (table >> full & 1) << m;
    }
    out
}

fn minimax(k: usize, table: u64, memo: &mut HashMap<(usize, u64), usize>) -> usize {
    let table = table & table_mask(k);
    if table == 0 || table == table_mask(k) {
        return 0;
    }
    if let Some(&d) = memo.get(&(k, table)) {
        return d;
    }
    let mut best = usize::MAX;
    for i in 0..k {
        let d0 = minimax(k - 1, restrict(k, table, i, false), memo);
        let d1 = minimax(k - 1, restrict(k, table, i, true), memo);
        best = best.min(1 + d0.max(d1));
    }
    memo.insert((k, table), best);
    best
}

/// Every monotone function of arity `n ≤ 5`, deterministically ordered.
/// Built recursively: f on n variables is a pair (f0, f1) of monotone
/// functions on n−1 variables with f0 ≤ f1 pointwise.
pub fn enumerate_monotone(n: usize) -> Result<Vec<MonotoneBooleanFunction>> {
    if n > 5 {
        return Err(Error::InvalidParameter(format!(
            "monotone enumeration at arity {n} is out of desk scale"
        )));
    }
    let mut tables: Vec<u64> = vec![0, 1];
    for k in 1..=n {
        let half = 1u64 << (k - 1);
        let mut next = Vec::new();
        for &f1 in &tables {
            for &f0 in &tables {
                if f0 & !f1 == 0 {
                    next.push(f0 | f1 << half);
                }
            }
        }
        next.sort_unstable();
        tables = next;
    }
    Ok(tables
        .into_iter()
        .map(|t| MonotoneBooleanFunction::from_table_unchecked(n, t))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvasiveCensus {
    pub n: usize,
    pub total: u64,
    pub constants: u64,
    pub evasive: u64,
    /// Non-constant functions whose face complex has some nonzero reduced
    /// Betti number over GF(2).
    pub nontrivial_homology: u64,
    /// Functions failing [`kss_consistency`]; anything nonzero is a bug.
    pub kss_violations: u64,
}

impl EvasiveCensus {
    pub fn evasive_fraction(&self) -> f64 {
        self.evasive as f64 / self.total as f64
    }
}

/// Full census at arity `n ≤ 5`: evasive counts, homology profile of the
/// associated complexes, and the contractibility cross-check.
pub fn evasive_census(n: usize) -> Result<EvasiveCensus> {
    let functions = enumerate_monotone(n)?;
    let mut census = EvasiveCensus {
        n,
        total: functions.len() as u64,
        constants: 0,
        evasive: 0,
        nontrivial_homology: 0,
        kss_violations: 0,
    };
    for f in &functions {
        if f.is_constant() {
            census.constants += 1;
            continue;
        }
        let stats = decision_tree_complexity(f)?;
        if stats.evasive {
            census.evasive += 1;
        }
        let complex = complex_of_function(f);
        let reduced = reduced_betti_numbers(&complex, 2)?;
        let nontrivial = reduced.betti.iter().any(|&b| b != 0);
        if nontrivial {
            census.nontrivial_homology += 1;
        }
        if !stats.evasive && nontrivial {
            census.kss_violations += 1;
        }
    }
    Ok(census)
}

/// The contractibility cross-check for one non-constant function: either
/// f is evasive, or its face complex has trivial reduced GF(2) homology.
/// A `false` return indicates an implementation bug, never mathematics.
pub fn kss_consistency(f: &MonotoneBooleanFunction) -> Result<bool> {
    if f.is_constant() {
        return Err(Error::InvalidParameter(
            "contractibility check needs a non-constant function".into(),
        ));
    }
    let stats = decision_tree_complexity(f)?;
    if stats.evasive {
        return Ok(true);
    }
    let reduced = reduced_betti_numbers(&complex_of_function(f), 2)?;
    Ok(reduced.betti.iter().all(|&b| b == 0))
}
