//! Monte Carlo experiment drivers: one function per scan, all seeded
//! through the same per-trial derivation so any record replays alone.

use rand_chacha::rand_core::SeedableRng;
use rayon::prelude::*;
use serde_json::json;

use uniplex::generators::{
    derive_seed, free_sets, sample_pure_random, sample_uniform_layer_from, AdmissiblePair,
    FreeSetFamily,
};
use uniplex::homology::verify_lower_bound;
use uniplex::predictions::{
    expected_holes, h_t_sign_threshold, skeleton_threshold_constant_t, skeleton_threshold_linear,
    ThresholdSpec,
};
use uniplex::shellability::{
    h_top, is_shellable, layer_bundle_obstruction, shelling_obstruction, ShellingVerdict,
};
use uniplex::SimplicialComplex;

use crate::config::{ExperimentConfig, ModelName};
use crate::records::{sort_records, Record, RunOutput};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] uniplex::Error),
    #[error(transparent)]
    Format(#[from] crate::format::FormatError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

type Result<T> = std::result::Result<T, RunError>;

/// Exact-search facet ceiling for shellability scans; above it only the
/// obstruction and h-vector statistics are collected.
const EXACT_SHELL_FACETS: usize = 12;
/// Obstruction-scan facet ceiling (the G_x scan is quadratic in facets).
const OBSTRUCTION_FACETS: usize = 300;

/// Samples one trial. The record seed is the exact value fed to the
/// generator, so `replay_sample` reproduces the complex bit-for-bit.
pub fn sample_trial(
    cfg: &ExperimentConfig,
    n: usize,
    p: f64,
    seed: u64,
    free: Option<&FreeSetFamily>,
) -> Result<SimplicialComplex> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    match cfg.model {
        ModelName::Pure => Ok(sample_pure_random(n, cfg.t, p, &mut rng)?),
        ModelName::Uniform => {
            let owned;
            let free = match free {
                Some(f) => f,
                None => {
                    owned = free_sets(&AdmissiblePair::trivial(n, cfg.t));
                    &owned
                }
            };
            let pair = AdmissiblePair::trivial(n, cfg.t);
            Ok(sample_uniform_layer_from(&pair, free, &mut rng))
        }
    }
}

/// Replays one record from its config coordinates alone.
pub fn replay_sample(cfg: &ExperimentConfig, record: &Record) -> Result<SimplicialComplex> {
    sample_trial(cfg, record.n, record.p, record.seed, None)
}

/// Runs `measure` for every (grid point, trial) on the worker pool and
/// returns records in canonical order.
fn drive<F>(cfg: &ExperimentConfig, measure: F) -> Result<Vec<Record>>
where
    F: Fn(&mut Record, &SimplicialComplex) + Sync,
{
    cfg.validate().map_err(RunError::Config)?;
    let grid = cfg.grid();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| RunError::Config(e.to_string()))?;
    // free sets are shared across a grid point's trials
    let free_families: Vec<Option<FreeSetFamily>> = grid
        .iter()
        .map(|&(n, _)| {
            (cfg.model == ModelName::Uniform)
                .then(|| free_sets(&AdmissiblePair::trivial(n, cfg.t)))
        })
        .collect();
    let work: Vec<(usize, usize, f64, u64)> = grid
        .iter()
        .enumerate()
        .flat_map(|(gi, &(n, p))| (0..cfg.trials).map(move |trial| (gi, n, p, trial)))
        .collect();
    let mut records: Vec<Record> = pool.install(|| {
        work.into_par_iter()
            .map(|(gi, n, p, trial)| {
                let free = free_families[gi].as_ref();
                let seed = derive_seed(cfg.seed, gi as u64, trial);
                let mut record = Record {
                    experiment: cfg.experiment.clone(),
                    n,
                    t: cfg.t,
                    p,
                    trial,
                    seed,
                    t_prime: cfg.t_prime,
                    ..Default::default()
                };
                match sample_trial(cfg, n, p, seed, free) {
                    Ok(complex) => measure(&mut record, &complex),
                    Err(e) => record.error = Some(e.to_string()),
                }
                record
            })
            .collect()
    });
    sort_records(&mut records);
    Ok(records)
}

fn soft_fail(record: &mut Record, err: uniplex::Error) {
    if matches!(err, uniplex::Error::ResourceBudget(_)) {
        record.budget_exceeded = true;
    }
    record.error = Some(err.to_string());
}

fn skeleton_prediction(cfg: &ExperimentConfig, n: usize) -> Option<f64> {
    let t_prime = cfg.t_prime?;
    let k = cfg.t.checked_sub(t_prime).filter(|&k| k >= 1)?;
    let c = cfg.t as f64 / n as f64;
    if c < 0.25 {
        skeleton_threshold_constant_t(n, cfg.t, t_prime, 0.0).ok()
    } else {
        let spec = ThresholdSpec { c, k: k as u32, q: 0.0, n };
        skeleton_threshold_linear(&spec).ok().map(|pair| pair.complete)
    }
}

/// Complete-t'-skeleton fraction across the grid.
pub fn run_skeleton_scan(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let t_prime = cfg
        .t_prime
        .ok_or_else(|| RunError::Config("skeleton scan needs t_prime".into()))?;
    if t_prime >= cfg.t {
        return Err(RunError::Config(format!("t_prime={t_prime} must be below t={}", cfg.t)));
    }
    let records = drive(cfg, |record, complex| {
        record.skeleton_complete = Some(complex.has_complete_skeleton(t_prime));
        record.prediction = skeleton_prediction(cfg, record.n);
    })?;
    let summary = grid_summary(cfg, &records, |point| {
        let complete = point.iter().filter(|r| r.skeleton_complete == Some(true)).count();
        json!({
            "fraction_complete": complete as f64 / point.len() as f64,
            "threshold": point[0].prediction,
        })
    });
    Ok(RunOutput { config: cfg.clone(), summary, records })
}

/// Per-trial Euler characteristics with concentration / anti-concentration
/// summaries on the scale `n·2^(n/2)`.
pub fn run_euler_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let records = drive(cfg, |record, complex| {
        record.chi = Some(complex.euler_characteristic());
    })?;
    let summary = grid_summary(cfg, &records, |point| {
        let mut chis: Vec<i64> = point.iter().filter_map(|r| r.chi).collect();
        chis.sort_unstable();
        let median = chis[chis.len() / 2];
        let scale = point[0].n as f64 * (2f64).powf(point[0].n as f64 / 2.0);
        let mut deviations: Vec<f64> =
            chis.iter().map(|&c| (c - median).abs() as f64 / scale).collect();
        deviations.sort_by(f64::total_cmp);
        let p99 = deviations[(deviations.len() - 1).min(deviations.len() * 99 / 100)];
        let max_mass = {
            let mut best = 0usize;
            let mut i = 0;
            while i < chis.len() {
                let j = chis[i..].iter().take_while(|&&c| c == chis[i]).count();
                best = best.max(j);
                i += j;
            }
            best as f64 / chis.len() as f64
        };
        json!({
            "median_chi": median,
            "max_point_mass": max_mass,
            "p99_normalized_deviation": p99,
        })
    });
    Ok(RunOutput { config: cfg.clone(), summary, records })
}

/// Betti / hole-certificate runs: records `(β_(s−2), X, Y)` per trial and
/// checks the certificate inequality.
pub fn run_homology_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let q = cfg.field.unwrap_or(2);
    let records = drive(cfg, |record, complex| {
        let s = cfg.holes_size.unwrap_or(cfg.t + 1);
        match verify_lower_bound(complex, s, q, None) {
            Ok(report) => {
                record.betti = Some(report.betti);
                record.holes_x = Some(report.x);
                record.holes_y = Some(report.y);
                record.bound_holds = Some(report.holds);
                record.prediction = expected_holes(record.n, cfg.t, record.p).ok();
            }
            Err(e) => soft_fail(record, e),
        }
    })?;
    let summary = grid_summary(cfg, &records, |point| {
        let xs: Vec<f64> = point.iter().filter_map(|r| r.holes_x).map(|x| x as f64).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1).max(1) as f64;
        let violations = point.iter().filter(|r| r.bound_holds == Some(false)).count();
        json!({
            "mean_x": mean,
            "stderr_x": (var / xs.len() as f64).sqrt(),
            "expected_x": point[0].prediction,
            "bound_violations": violations,
        })
    });
    Ok(RunOutput { config: cfg.clone(), summary, records })
}

/// Shellability scan: h_t sign always; obstruction and exact verdicts on
/// instances under the facet ceilings.
pub fn run_shellability_scan(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let node_budget = cfg.budgets.shelling_nodes;
    let records = drive(cfg, |record, complex| {
        match h_top(complex) {
            Ok(h) => record.h_top = Some(h as i64),
            Err(e) => soft_fail(record, e),
        }
        let facets = complex.facets().len();
        if facets <= OBSTRUCTION_FACETS {
            match shelling_obstruction(complex) {
                Ok(found) => record.obstruction = Some(found.is_some()),
                Err(e) => soft_fail(record, e),
            }
        }
        if cfg.model == ModelName::Uniform {
            if let Ok(true) = layer_bundle_obstruction(complex, cfg.t + 1) {
                record.shell_verdict = Some("not-shellable".into());
            }
        }
        if facets <= EXACT_SHELL_FACETS {
            let result = is_shellable(complex, node_budget);
            record.shell_verdict = Some(
                match result.verdict {
                    ShellingVerdict::Shellable => "shellable",
                    ShellingVerdict::NotShellable => "not-shellable",
                    ShellingVerdict::BudgetExceeded => {
                        record.budget_exceeded = true;
                        "budget-exceeded"
                    }
                }
                .into(),
            );
        }
        record.prediction = Some(h_t_sign_threshold(record.n, cfg.t));
    })?;
    let summary = grid_summary(cfg, &records, |point| {
        let with_h = point.iter().filter_map(|r| r.h_top).collect::<Vec<_>>();
        let neg = with_h.iter().filter(|&&h| h < 0).count();
        let pos = with_h.iter().filter(|&&h| h > 0).count();
        let obstructed = point.iter().filter(|r| r.obstruction == Some(true)).count();
        let scanned = point.iter().filter(|r| r.obstruction.is_some()).count();
        json!({
            "fraction_h_top_negative": neg as f64 / with_h.len().max(1) as f64,
            "fraction_h_top_positive": pos as f64 / with_h.len().max(1) as f64,
            "obstruction_fraction": if scanned > 0 { Some(obstructed as f64 / scanned as f64) } else { None },
            "sign_threshold_p": point[0].prediction,
        })
    });
    Ok(RunOutput { config: cfg.clone(), summary, records })
}

/// Induced-copy counts of a fixed target complex.
pub fn run_subcomplex_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let target_text = cfg
        .target
        .as_ref()
        .ok_or_else(|| RunError::Config("subcomplex scan needs a target complex".into()))?;
    let target = crate::format::parse_complex(target_text)?;
    if target.n() > 12 {
        return Err(RunError::Config(format!(
            "target on {} vertices exceeds the induced-copy ceiling of 12",
            target.n()
        )));
    }
    let records = drive(cfg, |record, complex| {
        record.copies = Some(complex.count_induced_copies(&target));
    })?;
    let summary = grid_summary(cfg, &records, |point| {
        let copies: Vec<u64> = point.iter().filter_map(|r| r.copies).collect();
        let hit = copies.iter().filter(|&&c| c > 0).count();
        json!({
            "fraction_with_copy": hit as f64 / copies.len() as f64,
            "mean_copies": copies.iter().sum::<u64>() as f64 / copies.len() as f64,
        })
    });
    Ok(RunOutput { config: cfg.clone(), summary, records })
}

/// Exact evasiveness census per arity in the n-grid.
pub fn run_evasive_census(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate().map_err(RunError::Config)?;
    let mut records = Vec::new();
    let mut per_arity = Vec::new();
    for &n in &cfg.n {
        let census = uniplex::boolean::evasive_census(n)?;
        per_arity.push(json!({
            "n": n,
            "total": census.total,
            "constants": census.constants,
            "evasive": census.evasive,
            "fraction": census.evasive_fraction(),
            "nontrivial_homology": census.nontrivial_homology,
            "kss_violations": census.kss_violations,
        }));
        records.push(Record {
            experiment: cfg.experiment.clone(),
            n,
            t: cfg.t,
            seed: cfg.seed,
            total: Some(census.total),
            evasive: Some(census.evasive),
            kss_violations: Some(census.kss_violations),
            prediction: Some(census.evasive_fraction()),
            ..Default::default()
        });
    }
    Ok(RunOutput {
        config: cfg.clone(),
        summary: json!({ "census": per_arity }),
        records,
    })
}

/// Groups records by grid point (records must already be sorted) and maps
/// each group through `f`; summaries stay recomputable from the CSV alone.
fn grid_summary<F>(cfg: &ExperimentConfig, records: &[Record], f: F) -> serde_json::Value
where
    F: Fn(&[Record]) -> serde_json::Value,
{
    let mut points = Vec::new();
    let mut i = 0;
    while i < records.len() {
        let (n, p) = (records[i].n, records[i].p);
        let j = records[i..]
            .iter()
            .take_while(|r| r.n == n && r.p == p)
            .count();
        let group = &records[i..i + j];
        let mut v = f(group);
        v["n"] = json!(n);
        v["p"] = json!(p);
        v["trials"] = json!(group.len());
        points.push(v);
        i += j;
    }
    json!({ "experiment": cfg.experiment, "points": points })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pure_config(n: usize, t: usize, p: f64, trials: u64) -> ExperimentConfig {
        serde_json::from_str(&format!(
            r#"{{"experiment":"test","model":"pure","n":[{n}],"t":{t},"p":[{p}],"trials":{trials},"seed":7}}"#
        ))
        .unwrap()
    }

    #[test]
    fn skeleton_scan_p_one_is_complete() {
        let mut cfg = pure_config(12, 4, 1.0, 5);
        cfg.t_prime = Some(3);
        let out = run_skeleton_scan(&cfg).unwrap();
        assert!(out.records.iter().all(|r| r.skeleton_complete == Some(true)));
        assert_eq!(out.summary["points"][0]["fraction_complete"], 1.0);
    }

    #[test]
    fn homology_scan_p_zero_is_silent() {
        let out = run_homology_experiment(&pure_config(10, 4, 0.0, 3)).unwrap();
        for r in &out.records {
            assert_eq!(r.holes_x, Some(0));
            assert_eq!(r.betti, Some(0));
            assert_eq!(r.bound_holds, Some(true));
        }
    }

    #[test]
    fn records_replay_bit_identically() {
        let out = run_euler_experiment(&pure_config(10, 4, 0.5, 4)).unwrap();
        for r in &out.records {
            let complex = replay_sample(&out.config, r).unwrap();
            assert_eq!(complex.euler_characteristic(), r.chi.unwrap());
        }
    }

    #[test]
    fn worker_count_does_not_change_records() {
        let mut cfg = pure_config(10, 4, 0.5, 6);
        let a = run_euler_experiment(&cfg).unwrap();
        cfg.workers = 4;
        let b = run_euler_experiment(&cfg).unwrap();
        let chis = |o: &RunOutput| o.records.iter().map(|r| r.chi).collect::<Vec<_>>();
        assert_eq!(chis(&a), chis(&b));
    }

    #[test]
    fn subcomplex_full_simplex_target_counts_facets() {
        // an induced full simplex on t vertices is exactly a facet
        let mut cfg = pure_config(8, 3, 0.4, 4);
        cfg.target = Some("n=3\n1,2,3\n".into());
        let out = run_subcomplex_experiment(&cfg).unwrap();
        for r in &out.records {
            let complex = replay_sample(&cfg, r).unwrap();
            assert_eq!(r.copies, Some(complex.facets().len() as u64));
        }
    }

    #[test]
    fn evasive_census_refuses_large_arity() {
        let cfg: ExperimentConfig = serde_json::from_str(
            r#"{"experiment":"census","model":"pure","n":[6],"t":1,"p":[0.5],"trials":1,"seed":1}"#,
        )
        .unwrap();
        assert!(run_evasive_census(&cfg).is_err());
    }

    #[test]
    fn shell_scan_uniform_bundle_obstruction() {
        let cfg: ExperimentConfig = serde_json::from_str(
            r#"{"experiment":"shell","model":"uniform","n":[8],"t":4,"trials":5,"seed":3}"#,
        )
        .unwrap();
        let out = run_shellability_scan(&cfg).unwrap();
        assert_eq!(out.records.len(), 5);
        assert!(out.records.iter().all(|r| r.h_top.is_some()));
    }
}
