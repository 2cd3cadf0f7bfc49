//! Closed-form theory curves: entropy, binomial asymptotics, skeleton
//! thresholds, expected hole counts and the h_t sign-change location.
//! These feed the experiment harness as prediction columns.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinat::{binomial_exact, binomial_f64};
use crate::error::{Error, Result};

/// A computed prediction together with the formula that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct PredictionValue {
    pub value: f64,
    pub formula: &'static str,
    pub divergent: bool,
}

impl PredictionValue {
    fn finite(value: f64, formula: &'static str) -> Self {
        PredictionValue { value, formula, divergent: !value.is_finite() }
    }
}

/// Parameters of the linear-regime skeleton threshold: layer ratio
/// `c = t/n`, skeleton gap `k = t - t'`, slack constant `q`, ground size
/// `n`.
#[derive(Clone, Copy, Debug)]
pub struct ThresholdSpec {
    pub c: f64,
    pub k: u32,
    pub q: f64,
    pub n: usize,
}

/// The two sides of a threshold: above `complete` the skeleton is complete
/// with high probability, below `incomplete` it is not.
#[derive(Clone, Copy, Debug)]
pub struct ThresholdPair {
    pub complete: f64,
    pub incomplete: f64,
}

/// Natural-log entropy `α(c) = −c ln c − (1−c) ln(1−c)`, with the
/// endpoints defined as 0 by continuity.
pub fn entropy(c: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::InvalidParameter(format!("entropy ratio {c} outside [0,1]")));
    }
    if c == 0.0 || c == 1.0 {
        return Ok(0.0);
    }
    Ok(-c * c.ln() - (1.0 - c) * (1.0 - c).ln())
}

/// Leading-order approximation of `binom(n, cn)`:
/// `exp(α(c)·n − ½·ln(2(1−c)c·n·π))`. `cn` is rounded to the nearest
/// integer only by the caller comparing against exact values; the formula
/// itself is evaluated at the real ratio.
pub fn binom_asymptotic(n: usize, c: f64) -> Result<f64> {
    if !(0.0 < c && c < 1.0) {
        return Err(Error::InvalidParameter(format!("ratio {c} outside (0,1)")));
    }
    let a = entropy(c)?;
    let nf = n as f64;
    Ok((a * nf - 0.5 * (2.0 * (1.0 - c) * c * nf * std::f64::consts::PI).ln()).exp())
}

/// Thresholds for a complete t'-skeleton of RP(n, t, p) with t = cn and
/// t' = t − k, k constant. For k > 1 the pair is
/// `(C ± q(1−c)^{-k} k! ln n / n) / n^{k−1}` with `C = α(c)·k!/(1−c)^k`;
/// for k = 1 it is `1 − exp(−α(c)/(1−c) ∓ q ln n/((1−c)n))`.
pub fn skeleton_threshold_linear(spec: &ThresholdSpec) -> Result<ThresholdPair> {
    if spec.k < 1 {
        return Err(Error::InvalidParameter("skeleton gap k must be >= 1".into()));
    }
    let a = entropy(spec.c)?;
    let c = spec.c;
    let n = spec.n as f64;
    let k = spec.k;
    if k == 1 {
        let base = -a / (1.0 - c);
        let slack = spec.q * n.ln() / ((1.0 - c) * n);
        Ok(ThresholdPair {
            complete: 1.0 - (base - slack).exp(),
            incomplete: 1.0 - (base + slack).exp(),
        })
    } else {
        let factorial: f64 = (1..=k as u64).product::<u64>() as f64;
        let big_c = a * factorial / (1.0 - c).powi(k as i32);
        let slack = spec.q * (1.0 - c).powi(-(k as i32)) * factorial * n.ln() / n;
        let scale = n.powi(k as i32 - 1);
        Ok(ThresholdPair {
            complete: (big_c + slack) / scale,
            incomplete: (big_c - slack) / scale,
        })
    }
}

/// Threshold for a complete t'-skeleton of RP(n, t, p) at constant t:
/// `(1+ω)·t'·(t−t')!·ln n / n^(t−t')`.
pub fn skeleton_threshold_constant_t(n: usize, t: usize, t_prime: usize, omega: f64) -> Result<f64> {
    if t_prime >= t {
        return Err(Error::InvalidParameter(format!("t'={t_prime} must be below t={t}")));
    }
    let gap = (t - t_prime) as u32;
    let factorial: f64 = (1..=gap as u64).product::<u64>() as f64;
    let nf = n as f64;
    Ok((1.0 + omega) * t_prime as f64 * factorial * nf.ln() / nf.powi(gap as i32))
}

/// Boundary slack below which the t'-skeleton is incomplete with high
/// probability in the constant-t regime: `ω = −2(t/t' − 1)`.
pub fn skeleton_omega_incomplete_boundary(t: usize, t_prime: usize) -> f64 {
    -2.0 * (t as f64 / t_prime as f64 - 1.0)
}

/// Expected hole count `binom(n, t+1) p^{t+1}` for RP(n, t, p); at
/// `p = 1/2`, `t = n/2` this is the uniform-model mean
/// `binom(n, n/2+1)·2^{−n/2−1}`.
pub fn expected_holes(n: usize, t: usize, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p={p} outside [0,1]")));
    }
    Ok(binomial_f64(n as u64, t as u64 + 1) * p.powi(t as i32 + 1))
}

/// Both closed forms of the alternating binomial identity
/// `Σ_{i=1}^{j−1} (−1)^{i−1} binom(n,i) = (−1)^j (j/n) binom(n,j) + 1`,
/// computed exactly; any mismatch is an internal invariant breach.
pub fn alternating_binomial(n: u64, j: u64) -> Result<BigInt> {
    if j < 1 || j > n {
        return Err(Error::InvalidParameter(format!("need 1 <= j={j} <= n={n}")));
    }
    let mut lhs = BigInt::from(0);
    for i in 1..j {
        let term = BigInt::from(binomial_exact(n, i));
        if i % 2 == 1 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let scaled = BigInt::from(binomial_exact(n, j)) * BigInt::from(j);
    let divisor = BigInt::from(n);
    let (q, r) = (&scaled / &divisor, &scaled % &divisor);
    if !r.is_zero() {
        return Err(Error::Internal(format!("n does not divide j*binom(n,j) at n={n}, j={j}")));
    }
    let mut rhs = if j % 2 == 1 { -q } else { q };
    rhs += 1;
    if lhs != rhs {
        return Err(Error::Internal(format!(
            "alternating binomial identity mismatch at n={n}, j={j}: {lhs} vs {rhs}"
        )));
    }
    Ok(lhs)
}

/// Predicted sign-change location of `h_t` for RP(n, t, p): `p = t/n`.
pub fn h_t_sign_threshold(n: usize, t: usize) -> f64 {
    t as f64 / n as f64
}

/// Tagged evaluation used by the CLI `predict` subcommand.
pub fn entropy_prediction(c: f64) -> Result<PredictionValue> {
    Ok(PredictionValue::finite(entropy(c)?, "entropy"))
}

pub fn expected_holes_prediction(n: usize, t: usize, p: f64) -> Result<PredictionValue> {
    Ok(PredictionValue::finite(expected_holes(n, t, p)?, "expected_holes"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        assert!((entropy(0.5).unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
        assert_eq!(entropy(0.0).unwrap(), 0.0);
        assert_eq!(entropy(1.0).unwrap(), 0.0);
        let direct = -(0.25f64.ln()) * 0.25 - 0.75 * 0.75f64.ln();
        assert!((entropy(0.25).unwrap() - direct).abs() < 1e-12);
        assert!(entropy(1.5).is_err());
    }

    #[test]
    fn entropy_matches_binomial_growth() {
        // ln binom(n, n/4) / n -> α(1/4) for large n
        let n = 10_000u64;
        let exact = binomial_exact(n, n / 4);
        let ln_exact = exact.to_string().len() as f64; // digits as a sanity check only
        assert!(ln_exact > 0.0);
        let approx: f64 = {
            let mut acc = 0f64;
            for i in 0..n / 4 {
                acc += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
            }
            acc
        };
        assert!((approx / n as f64 - entropy(0.25).unwrap()).abs() < 1e-3);
    }

    #[test]
    fn binom_asymptotic_accuracy() {
        let exact: f64 = binomial_exact(100, 50).to_string().parse().unwrap();
        let approx = binom_asymptotic(100, 0.5).unwrap();
        assert!((approx / exact - 1.0).abs() < 0.01);

        let exact: f64 = binomial_exact(20, 5).to_string().parse().unwrap();
        let approx = binom_asymptotic(20, 0.25).unwrap();
        assert!((approx / exact - 1.0).abs() < 0.05);
    }

    #[test]
    fn binom_asymptotic_converges_monotonically() {
        let mut last_err = f64::INFINITY;
        for n in [20u64, 50, 100, 200] {
            let exact: f64 = binomial_exact(n, n / 2).to_string().parse().unwrap();
            let approx = binom_asymptotic(n as usize, 0.5).unwrap();
            let err = (approx / exact - 1.0).abs();
            assert!(err < last_err, "error should shrink with n");
            last_err = err;
        }
    }

    #[test]
    fn skeleton_linear_examples() {
        // c=1/2, k=2, q=0: both thresholds collapse to 8 ln2 / n
        let spec = ThresholdSpec { c: 0.5, k: 2, q: 0.0, n: 100 };
        let pair = skeleton_threshold_linear(&spec).unwrap();
        let expect = 8.0 * std::f64::consts::LN_2 / 100.0;
        assert!((pair.complete - expect).abs() < 1e-12);
        assert!((pair.incomplete - expect).abs() < 1e-12);

        // k=1, c=1/2, q=0: p = 1 - exp(-2 ln 2) = 3/4
        let spec = ThresholdSpec { c: 0.5, k: 1, q: 0.0, n: 100 };
        let pair = skeleton_threshold_linear(&spec).unwrap();
        assert!((pair.complete - 0.75).abs() < 1e-12);

        assert!(skeleton_threshold_linear(&ThresholdSpec { c: 0.5, k: 0, q: 1.0, n: 10 }).is_err());
    }

    #[test]
    fn skeleton_linear_slack_ordering() {
        let spec = ThresholdSpec { c: 0.4, k: 3, q: 2.0, n: 50 };
        let pair = skeleton_threshold_linear(&spec).unwrap();
        assert!(pair.complete > pair.incomplete);
        let spec = ThresholdSpec { c: 0.4, k: 1, q: 2.0, n: 50 };
        let pair = skeleton_threshold_linear(&spec).unwrap();
        assert!(pair.complete > pair.incomplete);
    }

    #[test]
    fn skeleton_constant_examples() {
        let n = std::f64::consts::E.powi(10).round() as usize;
        let p = skeleton_threshold_constant_t(n, 3, 2, 0.0).unwrap();
        let expect = 2.0 * 1.0 * (n as f64).ln() / (n as f64);
        assert!((p - expect).abs() / expect < 1e-9);

        let p = skeleton_threshold_constant_t(1000, 2, 1, 0.0).unwrap();
        assert!((p - (1000f64).ln() / 1000.0).abs() < 1e-12);

        assert!((skeleton_omega_incomplete_boundary(3, 2) + 1.0).abs() < 1e-12);
        assert!(skeleton_threshold_constant_t(10, 2, 2, 0.0).is_err());
    }

    #[test]
    fn expected_holes_examples() {
        assert!((expected_holes(12, 6, 0.5).unwrap() - 6.1875).abs() < 1e-12);
        assert_eq!(expected_holes(9, 3, 0.0).unwrap(), 0.0);
        assert!((expected_holes(10, 2, 0.3).unwrap() - 3.24).abs() < 1e-12);
    }

    #[test]
    fn alternating_binomial_examples() {
        assert_eq!(alternating_binomial(6, 3).unwrap(), BigInt::from(-9));
        assert_eq!(alternating_binomial(10, 1).unwrap(), BigInt::from(0));
        assert_eq!(alternating_binomial(10, 5).unwrap(), BigInt::from(-125));
    }

    #[test]
    fn alternating_binomial_exhaustive() {
        for n in 1..=64u64 {
            for j in 1..=n {
                alternating_binomial(n, j).unwrap();
            }
        }
    }

    #[test]
    fn h_t_threshold_examples() {
        assert!((h_t_sign_threshold(200, 4) - 0.02).abs() < 1e-15);
        assert!((h_t_sign_threshold(10, 5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn entropy_shape() {
        let mut prev = 0.0;
        for i in 1..=50 {
            let c = i as f64 / 100.0;
            let v = entropy(c).unwrap();
            assert!(v >= prev, "increasing on [0, 1/2]");
            let sym = entropy(1.0 - c).unwrap();
            assert!((v - sym).abs() < 1e-12, "symmetric about 1/2");
            prev = v;
        }
        assert!(prev <= std::f64::consts::LN_2 + 1e-12);
    }
}
