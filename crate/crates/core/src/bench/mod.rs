//! Recovery-rate experiments on random binary linear systems.
//!
//! Each trial draws `x_true` with exactly `k` ones on a uniform support and a
//! standard Gaussian `A` with `m` rows, then asks every method to recover
//! `x_true` from `b = A x_true`. Randomness comes from `ChaCha8Rng`; normal
//! variates use the ziggurat sampler of `rand_distr::StandardNormal`. A
//! trial's seed is a SplitMix64 hash of `(seed, m, k, trial)`, so records do
//! not depend on scheduling or worker count.

mod report;

use std::time::Instant;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::descent::{run_method, DescentConfig, HMode, Method};
use crate::error::{Error, Result};
use crate::oracle::brute_force;
use crate::problem::BooleanQpInstance;

pub use report::{
    read_csv, render_svg, summarize, write_csv, write_csv_to, write_svg, RateRow, CSV_HEADER,
};

/// Instances at or below this size have their uniqueness checked by brute force.
pub const ORACLE_SCALE: usize = 12;

const MAX_REGENERATIONS: usize = 1000;

/// Draws `(instance, x_true)`; with `known_k` the row `1^T x = k` is appended.
pub fn gen_instance<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    k: usize,
    known_k: bool,
    rng: &mut R,
) -> Result<(BooleanQpInstance, Vec<u8>)> {
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("n and m must be positive".into()));
    }
    let mut x_true = vec![0u8; n];
    for i in index::sample(rng, n, k) {
        x_true[i] = 1;
    }
    let a: Vec<f64> = (0..m * n).map(|_| rng.sample(StandardNormal)).collect();
    let b: Vec<f64> = (0..m)
        .map(|i| {
            (0..n)
                .filter(|&j| x_true[j] == 1)
                .map(|j| a[i * n + j])
                .sum()
        })
        .collect();
    let mut inst = BooleanQpInstance::linear_system(n, m, a, b)?;
    if known_k {
        inst = inst.with_cardinality_row(k);
    }
    inst.x_true = Some(x_true.clone());
    Ok((inst, x_true))
}

/// Like [`gen_instance`], but for `n <= ORACLE_SCALE` redraws until the
/// planted vector is the unique binary solution.
pub fn gen_unique_instance<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    k: usize,
    known_k: bool,
    rng: &mut R,
) -> Result<(BooleanQpInstance, Vec<u8>)> {
    if n > ORACLE_SCALE {
        return gen_instance(n, m, k, known_k, rng);
    }
    for _ in 0..MAX_REGENERATIONS {
        let (inst, x) = gen_instance(n, m, k, known_k, rng)?;
        let oracle = brute_force(&inst)?;
        if oracle.unique && oracle.x_opt == x {
            return Ok((inst, x));
        }
    }
    Err(Error::InvalidParameter(format!(
        "no instance with a unique solution after {MAX_REGENERATIONS} draws (n={n}, m={m}, k={k})"
    )))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_seed(seed: u64, m: usize, k: usize, trial: usize) -> u64 {
    [m as u64, k as u64, trial as u64]
        .iter()
        .fold(splitmix64(seed), |h, &v| splitmix64(h ^ v))
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n: usize,
    pub m_values: Vec<usize>,
    pub k_values: Vec<usize>,
    pub trials: usize,
    pub methods: Vec<Method>,
    pub known_k: bool,
    pub seed: u64,
    /// Template for every run; `seed` and `h_mode` are set per trial.
    pub descent: DescentConfig,
    /// Worker threads; `None` uses rayon's default pool.
    pub jobs: Option<usize>,
    /// When false, `runtime_ms` is written as 0 so output is byte-stable.
    pub record_timing: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m_values.is_empty() || self.k_values.is_empty() || self.methods.is_empty() {
            return Err(Error::InvalidParameter(
                "m values, k values and methods must be nonempty".into(),
            ));
        }
        if let Some(&k) = self.k_values.iter().find(|&&k| k > self.n) {
            return Err(Error::InvalidParameter(format!(
                "k = {k} exceeds n = {}",
                self.n
            )));
        }
        if self.m_values.contains(&0) {
            return Err(Error::InvalidParameter("m must be positive".into()));
        }
        self.descent.validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub method: Method,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub trial: usize,
    pub seed: u64,
    pub success: bool,
    pub certified: bool,
    pub hamming_error: usize,
    pub runtime_ms: f64,
    pub sdp_iterations: usize,
    pub reinits: usize,
    #[serde(skip)]
    pub error: Option<String>,
    /// Monotone-descent steps checked, and how many rose beyond the slack.
    #[serde(skip)]
    pub descent_steps: usize,
    #[serde(skip)]
    pub descent_violations: usize,
}

impl ExperimentRecord {
    /// Equality ignoring wall-clock time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        let mut a = self.clone();
        a.runtime_ms = other.runtime_ms;
        a == *other
    }
}

/// Slack used when counting monotone-descent violations.
pub const DESCENT_SLACK: f64 = 1e-5;

fn run_trial(cfg: &ExperimentConfig, m: usize, k: usize, trial: usize) -> Vec<ExperimentRecord> {
    let seed = trial_seed(cfg.seed, m, k, trial);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let generated = gen_unique_instance(cfg.n, m, k, cfg.known_k, &mut rng);
    let mut descent = cfg.descent;
    descent.seed = seed;
    descent.h_mode = if cfg.known_k {
        HMode::KnownK(k)
    } else {
        HMode::Unknown
    };

    cfg.methods
        .iter()
        .map(|&method| {
            let mut rec = ExperimentRecord {
                method,
                n: cfg.n,
                m,
                k,
                trial,
                seed,
                success: false,
                certified: false,
                hamming_error: k,
                runtime_ms: 0.0,
                sdp_iterations: 0,
                reinits: 0,
                error: None,
                descent_steps: 0,
                descent_violations: 0,
            };
            let (inst, x_true) = match &generated {
                Ok(g) => g,
                Err(e) => {
                    rec.error = Some(e.to_string());
                    return rec;
                }
            };
            let start = Instant::now();
            let outcome = run_method(method, inst, &descent);
            if cfg.record_timing {
                rec.runtime_ms = (start.elapsed().as_secs_f64() * 1e4).round() / 10.0;
            }
            match outcome {
                Ok(res) => {
                    let x = res.rounded();
                    rec.hamming_error = x.iter().zip(x_true).filter(|(a, b)| a != b).count();
                    rec.certified = res.certified;
                    rec.success = res.certified && rec.hamming_error == 0;
                    rec.sdp_iterations = res.sdp_iterations;
                    rec.reinits = res.trace.reinit_count;
                    if method.is_kbe() {
                        rec.descent_steps = res.trace.step_count();
                        rec.descent_violations =
                            res.trace.monotonicity_violations(DESCENT_SLACK).len();
                    }
                }
                Err(e) => {
                    log::warn!("{method} m={m} k={k} trial={trial}: {e}");
                    rec.reinits = e.trace.reinit_count;
                    rec.error = Some(e.to_string());
                }
            }
            rec
        })
        .collect()
}

/// Runs every `(m, k, trial)` cell for every method. Records come back
/// ordered by `m`, then `k`, then trial, then method order in the config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.validate()?;
    let cells: Vec<(usize, usize, usize)> = cfg
        .m_values
        .iter()
        .flat_map(|&m| {
            cfg.k_values
                .iter()
                .flat_map(move |&k| (0..cfg.trials).map(move |t| (m, k, t)))
        })
        .collect();
    let work = || -> Vec<ExperimentRecord> {
        cells
            .par_iter()
            .flat_map_iter(|&(m, k, t)| run_trial(cfg, m, k, t))
            .collect()
    };
    match cfg.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_sparsity_levels() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (inst, x) = gen_instance(6, 3, 0, false, &mut rng).unwrap();
        assert_eq!(x, vec![0; 6]);
        assert!(inst.b().iter().all(|&v| v == 0.0));
        let (inst, x) = gen_instance(6, 3, 6, false, &mut rng).unwrap();
        assert_eq!(x, vec![1; 6]);
        for i in 0..3 {
            assert_eq!(inst.b()[i], inst.a_row(i).iter().sum::<f64>());
        }
        assert!(gen_instance(6, 3, 7, false, &mut rng).is_err());
        assert!(gen_instance(6, 0, 2, false, &mut rng).is_err());
    }

    #[test]
    fn known_k_appends_one_feasible_row() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (inst, x) = gen_instance(10, 4, 3, true, &mut rng).unwrap();
        assert_eq!(inst.m(), 5);
        assert_eq!(inst.k, Some(3));
        let xf: Vec<f64> = x.iter().map(|&v| f64::from(v)).collect();
        assert!(inst.residual(&xf).iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn trial_seeds_differ_per_cell() {
        let s = trial_seed(7, 30, 25, 0);
        assert_eq!(s, trial_seed(7, 30, 25, 0));
        assert_ne!(s, trial_seed(7, 30, 25, 1));
        assert_ne!(s, trial_seed(7, 30, 24, 0));
        assert_ne!(s, trial_seed(8, 30, 25, 0));
    }

    #[test]
    fn zero_trials_give_no_records() {
        let cfg = ExperimentConfig {
            n: 8,
            m_values: vec![4],
            k_values: vec![2],
            trials: 0,
            methods: vec![Method::Kbe2],
            known_k: false,
            seed: 1,
            descent: DescentConfig::default(),
            jobs: Some(1),
            record_timing: true,
        };
        assert!(run_experiment(&cfg).unwrap().is_empty());
    }
}
