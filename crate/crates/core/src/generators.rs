//! Samplers for the two random models: the uniform-layer model built from
//! an admissible pair via free-set coin flips, and the pure random model
//! where every t-set is a facet independently with probability p.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::combinat::{k_subsets, BinomTable};
use crate::error::{Error, Result};
use crate::{SimplicialComplex, VertexSet};

/// Which random model a sample comes from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModelKind {
    UniformLayer,
    PureRandom,
}

/// Parameters of a sampling run. The uniform-layer model fixes the facet
/// probability at 1/2; `p` is only meaningful for the pure model.
#[derive(Clone, Debug)]
pub struct ModelParams {
    pub model: ModelKind,
    pub n: usize,
    pub t: usize,
    pub p: f64,
    pub seed: u64,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        if self.t < 1 || self.t > self.n {
            return Err(Error::InvalidParameter(format!(
                "t={} must satisfy 1 <= t <= n={}",
                self.t, self.n
            )));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(format!("p={} outside [0,1]", self.p)));
        }
        Ok(())
    }
}

/// A partition of an equal-size set family into bundles: connected
/// components of the graph joining sets whose intersection has all but one
/// element.
pub fn decompose_bundles(family: &[VertexSet]) -> Result<Vec<Vec<VertexSet>>> {
    if family.is_empty() {
        return Ok(Vec::new());
    }
    let k = family[0].len();
    for s in family {
        if s.len() != k {
            return Err(Error::MixedSizes(k, s.len()));
        }
    }
    // union-find over indices
    let mut parent: Vec<usize> = (0..family.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        if parent[i] != i {
            parent[i] = find(parent, parent[i]);
        }
        parent[i]
    }
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            if family[i].intersection_len(&family[j]) == k - 1 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut classes: std::collections::BTreeMap<usize, Vec<VertexSet>> = Default::default();
    for i in 0..family.len() {
        let r = find(&mut parent, i);
        classes.entry(r).or_default().push(family[i].clone());
    }
    Ok(classes.into_values().collect())
}

/// An admissible pair `(A, B)` of (t−1)- and (t+1)-set families, with its
/// bundle decompositions.
#[derive(Clone, Debug)]
pub struct AdmissiblePair {
    pub n: usize,
    pub t: usize,
    pub a: Vec<VertexSet>,
    pub b: Vec<VertexSet>,
    pub bundles_a: Vec<Vec<VertexSet>>,
    pub bundles_b: Vec<Vec<VertexSet>>,
}

/// One violated admissibility clause, reported as data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdmissibilityViolation {
    WrongMemberSize { family: char, expected: usize, got: usize },
    FamilyTooLarge { family: char, size: usize },
    ContainmentAcrossFamilies { a: VertexSet, b: VertexSet },
    BundleTooLarge { family: char, size: usize },
    TooManyTwoBundles { family: char, count: usize },
}

#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    pub ok: bool,
    pub violations: Vec<AdmissibilityViolation>,
}

/// The operative size bound `2^{n/2}`, capped to avoid overflow; the cap is
/// far beyond any family size that can be materialized.
fn size_bound(n: usize) -> u64 {
    if n >= 126 {
        u64::MAX
    } else {
        (2f64).powf(n as f64 / 2.0) as u64
    }
}

/// Checks every admissibility clause and reports the violated ones.
pub fn check_admissible(n: usize, t: usize, a: &[VertexSet], b: &[VertexSet]) -> AdmissibilityReport {
    let mut violations = Vec::new();
    for (family, sets, expected) in [('A', a, t.wrapping_sub(1)), ('B', b, t + 1)] {
        for s in sets {
            if s.len() != expected {
                violations.push(AdmissibilityViolation::WrongMemberSize {
                    family,
                    expected,
                    got: s.len(),
                });
            }
            if let Some(m) = s.max_vertex() {
                if m as usize > n {
                    violations.push(AdmissibilityViolation::WrongMemberSize {
                        family,
                        expected,
                        got: s.len(),
                    });
                }
            }
        }
        if sets.len() as u64 > size_bound(n) {
            violations.push(AdmissibilityViolation::FamilyTooLarge { family, size: sets.len() });
        }
    }
    for ax in a {
        for bx in b {
            if ax.is_subset(bx) {
                violations.push(AdmissibilityViolation::ContainmentAcrossFamilies {
                    a: ax.clone(),
                    b: bx.clone(),
                });
            }
        }
    }
    let max_two_bundles = 16 * (n as u64).pow(4);
    for (family, sets) in [('A', a), ('B', b)] {
        if let Ok(bundles) = decompose_bundles(sets) {
            let mut two = 0u64;
            for bundle in &bundles {
                match bundle.len() {
                    1 => {}
                    2 => two += 1,
                    sz => violations.push(AdmissibilityViolation::BundleTooLarge { family, size: sz }),
                }
            }
            if two > max_two_bundles {
                violations.push(AdmissibilityViolation::TooManyTwoBundles {
                    family,
                    count: two as usize,
                });
            }
        }
    }
    AdmissibilityReport { ok: violations.is_empty(), violations }
}

impl AdmissiblePair {
    /// Validates and packages an `(A, B)` family pair.
    pub fn new(n: usize, t: usize, a: Vec<VertexSet>, b: Vec<VertexSet>) -> Result<Self> {
        let report = check_admissible(n, t, &a, &b);
        if !report.ok {
            return Err(Error::InvalidParameter(format!(
                "pair not admissible: {:?}",
                report.violations
            )));
        }
        let bundles_a = decompose_bundles(&a)?;
        let bundles_b = decompose_bundles(&b)?;
        Ok(AdmissiblePair { n, t, a, b, bundles_a, bundles_b })
    }

    pub fn trivial(n: usize, t: usize) -> Self {
        AdmissiblePair {
            n,
            t,
            a: Vec::new(),
            b: Vec::new(),
            bundles_a: Vec::new(),
            bundles_b: Vec::new(),
        }
    }
}

/// The t-sets containing no member of `A` and contained in no member of
/// `B`: the independent coin flips of the uniform-layer model.
#[derive(Clone, Debug)]
pub struct FreeSetFamily {
    pub n: usize,
    pub t: usize,
    pub members: Vec<VertexSet>,
}

pub fn free_sets(pair: &AdmissiblePair) -> FreeSetFamily {
    let members = k_subsets(pair.n, pair.t)
        .into_iter()
        .filter(|x| {
            pair.a.iter().all(|a| !a.is_subset(x)) && pair.b.iter().all(|b| !x.is_subset(b))
        })
        .collect();
    FreeSetFamily { n: pair.n, t: pair.t, members }
}

/// Rejection-samples an admissible pair with the requested family sizes
/// and two-element bundle counts. This is *a* distribution over admissible
/// pairs (singleton and paired bundles drawn uniformly, retry on clause
/// violations), not the weight-correct marginal of the uniform model.
pub fn sample_admissible_pair(
    n: usize,
    t: usize,
    size_a: usize,
    size_b: usize,
    two_bundles_a: usize,
    two_bundles_b: usize,
    rng: &mut ChaCha8Rng,
) -> Result<AdmissiblePair> {
    const RETRY_BUDGET: u64 = 10_000;
    for (label, size, two) in [("A", size_a, two_bundles_a), ("B", size_b, two_bundles_b)] {
        if size as u64 > size_bound(n) {
            return Err(Error::InvalidParameter(format!(
                "requested |{label}| = {size} exceeds the admissibility bound 2^(n/2)"
            )));
        }
        if 2 * two > size {
            return Err(Error::InvalidParameter(format!(
                "{label}: {two} two-element bundles need at least {} members, got {size}",
                2 * two
            )));
        }
        if two as u64 > 16 * (n as u64).pow(4) {
            return Err(Error::InvalidParameter(format!(
                "{label}: {two} two-element bundles exceed the 16n^4 bound"
            )));
        }
    }
    let draw_set = |rng: &mut ChaCha8Rng, k: usize| -> VertexSet {
        let mut verts: Vec<u32> = Vec::with_capacity(k);
        while verts.len() < k {
            let v = rng.gen_range(1..=n as u32);
            if !verts.contains(&v) {
                verts.push(v);
            }
        }
        VertexSet::from_vertices(verts)
    };
    // a partner differing in exactly one element
    let draw_partner = |rng: &mut ChaCha8Rng, base: &VertexSet| -> VertexSet {
        let verts = base.vertices();
        loop {
            let out = verts[rng.gen_range(0..verts.len())];
            let inn = rng.gen_range(1..=n as u32);
            if !base.contains(inn) {
                let mut s = base.clone();
                s.remove(out);
                s.insert(inn);
                return s;
            }
        }
    };
    let draw_family =
        |rng: &mut ChaCha8Rng, k: usize, size: usize, two: usize| -> Option<Vec<VertexSet>> {
            if k == 0 || k > n {
                return if size == 0 { Some(Vec::new()) } else { None };
            }
            let mut fam: Vec<VertexSet> = Vec::with_capacity(size);
            for _ in 0..two {
                let s = draw_set(rng, k);
                let p = draw_partner(rng, &s);
                fam.push(s);
                fam.push(p);
            }
            while fam.len() < size {
                fam.push(draw_set(rng, k));
            }
            fam.sort();
            fam.dedup();
            if fam.len() != size {
                return None;
            }
            // bundle structure must come out exactly as requested
            let bundles = decompose_bundles(&fam).ok()?;
            let twos = bundles.iter().filter(|b| b.len() == 2).count();
            let ones = bundles.iter().filter(|b| b.len() == 1).count();
            (twos == two && ones + 2 * twos == size).then_some(fam)
        };
    for _ in 0..RETRY_BUDGET {
        let Some(a) = draw_family(rng, t.wrapping_sub(1), size_a, two_bundles_a) else {
            continue;
        };
        let Some(b) = draw_family(rng, t + 1, size_b, two_bundles_b) else {
            continue;
        };
        let report = check_admissible(n, t, &a, &b);
        if report.ok {
            return AdmissiblePair::new(n, t, a, b);
        }
    }
    Err(Error::RetryBudget(
        RETRY_BUDGET,
        format!("no admissible pair with |A|={size_a}, |B|={size_b} found for n={n}, t={t}"),
    ))
}

/// Draws from the uniform-layer model: each free set is a facet
/// independently with probability 1/2; the facet set of the result is
/// exactly `A ∪ B ∪ S`.
pub fn sample_uniform_layer(pair: &AdmissiblePair, rng: &mut ChaCha8Rng) -> SimplicialComplex {
    let free = free_sets(pair);
    sample_uniform_layer_from(pair, &free, rng)
}

/// Same as [`sample_uniform_layer`] but reuses a precomputed free-set
/// family across trials.
pub fn sample_uniform_layer_from(
    pair: &AdmissiblePair,
    free: &FreeSetFamily,
    rng: &mut ChaCha8Rng,
) -> SimplicialComplex {
    let mut facets: Vec<VertexSet> =
        Vec::with_capacity(pair.a.len() + pair.b.len() + free.members.len() / 2 + 8);
    facets.extend(pair.a.iter().cloned());
    facets.extend(pair.b.iter().cloned());
    for s in &free.members {
        if rng.gen_bool(0.5) {
            facets.push(s.clone());
        }
    }
    // freeness plus clause 4 make A ∪ B ∪ S an antichain already
    SimplicialComplex::from_antichain_unchecked(facets, pair.n)
}

/// Draws from the pure random model RP(n, t, p): every t-set is a facet
/// independently with probability p. Geometric skipping over the colex
/// order keeps the cost proportional to the number of chosen facets.
pub fn sample_pure_random(n: usize, t: usize, p: f64, rng: &mut ChaCha8Rng) -> Result<SimplicialComplex> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p={p} outside [0,1]")));
    }
    if t < 1 || t > n {
        return Err(Error::InvalidParameter(format!("t={t} outside 1..={n}")));
    }
    let table = BinomTable::new(n, t);
    let total = table.get(n, t);
    let mut facets: Vec<VertexSet> = Vec::new();
    if p >= 1.0 {
        facets = k_subsets(n, t);
    } else if p > 0.0 {
        let log1p = (1.0 - p).ln();
        let mut idx: u64 = 0;
        loop {
            let u: f64 = rng.gen::<f64>();
            // number of failures before the next success
            let skip = ((1.0 - u).ln() / log1p).floor() as u64;
            idx = idx.saturating_add(skip);
            if idx >= total {
                break;
            }
            let elems0 = table.unrank(idx, t, n);
            facets.push(elems0.iter().map(|&e| e as u32 + 1).collect());
            idx += 1;
        }
    }
    Ok(SimplicialComplex::from_antichain_unchecked(facets, n))
}

/// Derives the per-trial RNG for a (stream, trial) cell from the master
/// seed via splitmix64, so each record is independently replayable.
pub fn trial_rng(master_seed: u64, stream: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master_seed, stream, trial))
}

pub fn derive_seed(master_seed: u64, stream: u64, trial: u64) -> u64 {
    let mut x = master_seed ^ splitmix64(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    x ^= splitmix64(trial.wrapping_add(0x2545_F491_4F6C_DD1D));
    splitmix64(x)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vset;

    #[test]
    fn bundles_examples() {
        let fam = vec![vset![1, 2], vset![2, 3], vset![4, 5]];
        let bundles = decompose_bundles(&fam).unwrap();
        assert_eq!(bundles.len(), 2);
        let sizes: Vec<usize> = bundles.iter().map(|b| b.len()).collect();
        assert!(sizes.contains(&2) && sizes.contains(&1));

        // transitivity joins a chain into one bundle
        let fam = vec![vset![1, 2], vset![2, 3], vset![3, 4]];
        assert_eq!(decompose_bundles(&fam).unwrap().len(), 1);

        assert!(decompose_bundles(&[]).unwrap().is_empty());
        assert!(decompose_bundles(&[vset![1], vset![1, 2]]).is_err());
    }

    #[test]
    fn bundles_partition_the_input() {
        let fam: Vec<VertexSet> = k_subsets(6, 3);
        let bundles = decompose_bundles(&fam).unwrap();
        let mut all: Vec<VertexSet> = bundles.into_iter().flatten().collect();
        all.sort();
        let mut orig = fam.clone();
        orig.sort();
        assert_eq!(all, orig);
    }

    #[test]
    fn admissibility_examples() {
        assert!(check_admissible(8, 4, &[], &[]).ok);

        let rep = check_admissible(6, 3, &[vset![1, 2]], &[vset![1, 2, 3, 4]]);
        assert!(!rep.ok);
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, AdmissibilityViolation::ContainmentAcrossFamilies { .. })));

        // a three-element bundle violates clause 5
        let rep = check_admissible(8, 3, &[vset![1, 2], vset![2, 3], vset![3, 4]], &[]);
        assert!(!rep.ok);
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, AdmissibilityViolation::BundleTooLarge { family: 'A', size: 3 })));
    }

    #[test]
    fn free_sets_examples() {
        let pair = AdmissiblePair::trivial(6, 3);
        assert_eq!(free_sets(&pair).members.len(), 20);

        let pair = AdmissiblePair::new(4, 2, vec![vset![1]], vec![vset![2, 3, 4]]).unwrap();
        assert!(free_sets(&pair).members.is_empty());
    }

    #[test]
    fn free_set_lower_bound() {
        // each a kills at most n-t+1 supersets, each b kills t+1 subsets
        for trial in 0..20 {
            let mut r = trial_rng(7, 1, trial);
            let Ok(pair) = sample_admissible_pair(10, 5, 3, 2, 1, 1, &mut r) else {
                continue;
            };
            let free = free_sets(&pair);
            let n = pair.n as i64;
            let t = pair.t as i64;
            let lower = crate::combinat::binomial_f64(10, 5) as i64
                - (n - t + 1) * pair.a.len() as i64
                - (t + 1) * pair.b.len() as i64;
            assert!(free.members.len() as i64 >= lower);
        }
    }

    #[test]
    fn sample_admissible_pair_examples() {
        let mut rng = trial_rng(42, 0, 0);
        let pair = sample_admissible_pair(12, 6, 0, 0, 0, 0, &mut rng).unwrap();
        assert!(pair.a.is_empty() && pair.b.is_empty());

        let pair = sample_admissible_pair(12, 6, 2, 0, 1, 0, &mut rng).unwrap();
        assert_eq!(pair.a.len(), 2);
        let bundles = decompose_bundles(&pair.a).unwrap();
        assert_eq!(bundles.len(), 1);
        assert_eq!(bundles[0].len(), 2);
        assert!(check_admissible(12, 6, &pair.a, &pair.b).ok);

        // bound exceeded: |A| > 2^(n/2)
        let err = sample_admissible_pair(8, 4, 17, 0, 0, 0, &mut rng);
        assert!(err.is_err());
    }

    #[test]
    fn uniform_layer_facets_are_generators() {
        let pair = AdmissiblePair::trivial(8, 4);
        let free = free_sets(&pair);
        let mut rng = trial_rng(3, 0, 0);
        for _ in 0..20 {
            let c = sample_uniform_layer_from(&pair, &free, &mut rng);
            // with A=B=∅ the facets are exactly the chosen free sets
            assert!(c.facets().iter().all(|f| f.len() == 4));
        }
    }

    #[test]
    fn uniform_layer_extremes() {
        let pair = AdmissiblePair::trivial(5, 2);
        let free = free_sets(&pair);
        // all-heads and all-tails behaviour via p-extremes of the pure model
        // (the uniform sampler itself flips fair coins; emptiness still has
        // positive probability at this size, so look for both outcomes)
        let mut rng = trial_rng(11, 0, 0);
        let mut seen_sizes = std::collections::HashSet::new();
        for _ in 0..200 {
            let c = sample_uniform_layer_from(&pair, &free, &mut rng);
            seen_sizes.insert(c.facets().len());
        }
        assert!(seen_sizes.len() > 3);
    }

    #[test]
    fn pure_random_extremes() {
        let mut rng = trial_rng(1, 0, 0);
        let c = sample_pure_random(5, 2, 1.0, &mut rng).unwrap();
        assert_eq!(c.facets().len(), 10);
        assert!(c.has_complete_skeleton(2));

        let c = sample_pure_random(5, 2, 0.0, &mut rng).unwrap();
        assert!(c.facets().is_empty());
    }

    #[test]
    fn pure_random_facet_count_moments() {
        // mean facet count over 1000 draws within 3 sigma of p*binom(20,3)
        let n = 20;
        let t = 3;
        let p = 0.3;
        let total = crate::combinat::binomial_f64(20, 3);
        let mut sum = 0f64;
        let trials = 1000;
        for trial in 0..trials {
            let mut rng = trial_rng(99, 5, trial);
            let c = sample_pure_random(n, t, p, &mut rng).unwrap();
            sum += c.facets().len() as f64;
        }
        let mean = sum / trials as f64;
        let expect = p * total;
        let sigma = (total * p * (1.0 - p)).sqrt() / (trials as f64).sqrt();
        assert!((mean - expect).abs() < 3.0 * sigma, "mean={mean} expect={expect}");
    }

    #[test]
    fn samplers_are_reproducible() {
        let pair = AdmissiblePair::trivial(10, 5);
        let free = free_sets(&pair);
        let a = sample_uniform_layer_from(&pair, &free, &mut trial_rng(5, 2, 7));
        let b = sample_uniform_layer_from(&pair, &free, &mut trial_rng(5, 2, 7));
        assert_eq!(a, b);
        let a = sample_pure_random(30, 4, 0.2, &mut trial_rng(5, 3, 7)).unwrap();
        let b = sample_pure_random(30, 4, 0.2, &mut trial_rng(5, 3, 7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn uniform_layer_b_facets_show_up_exactly() {
        let b = vec![vset![1, 2, 3, 4]];
        let pair = AdmissiblePair::new(8, 3, vec![], b.clone()).unwrap();
        let free = free_sets(&pair);
        let mut rng = trial_rng(13, 0, 0);
        for _ in 0..20 {
            let c = sample_uniform_layer_from(&pair, &free, &mut rng);
            let f = c.f_vector();
            assert_eq!(f.get(4), 1, "faces of size t+1 equal |B|");
            assert_eq!(f.max_face_size(), 4);
        }
    }
}
