//! Descent drivers for the penalized relaxations, plus the baselines.
//!
//! The concave term `-lambda/2 <X, X>` is handled by linearizing it at the
//! previous iterate, so each step is a plain SDP over the relaxation's own
//! constraint set. A step never increases
//! `F(X) = f(X) - lambda/2 <X, X>`, where `f` is the linear part of the
//! penalized objective. When a segment stalls without reaching a certified
//! rank-one binary point the driver restarts from a random rank-one lift.
//!
//! The log-det baseline reuses the same loop with the weight
//! `(X_prev + eps I)^{-1}`; the nuclear-norm and plain relaxations are single
//! solves.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::{certify_report, extract_boolean, extract_spin, ExtractionReport, Tolerances};
use crate::matrix::SymMatrix;
use crate::problem::{
    build_homogenized, build_spin, BooleanQpInstance, HomogenizedProblem, SpinProblem,
};
use crate::relax::{
    boolean_constraints, kbe_objective_boolean, kbe_objective_spin, logdet_objective,
    nuclear_objective, restore_unit_diagonal, spin_constraints, PenaltyParams,
};
use crate::sdp::{
    eig_call_count, eig_sym, SdpConfig, SdpSolution, SdpSolver, SdpStatus, WarmStart,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    SdrBool,
    SdrSpin,
    Kbe1,
    Kbe2,
    Nuclear,
    Logdet,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::SdrBool,
        Method::SdrSpin,
        Method::Kbe1,
        Method::Kbe2,
        Method::Nuclear,
        Method::Logdet,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::SdrBool => "sdr-bool",
            Method::SdrSpin => "sdr-spin",
            Method::Kbe1 => "kbe1",
            Method::Kbe2 => "kbe2",
            Method::Nuclear => "nuclear",
            Method::Logdet => "logdet",
        }
    }

    /// Whether the method runs the penalized descent loop (and so is subject
    /// to the monotone-descent property).
    pub fn is_kbe(self) -> bool {
        matches!(self, Method::Kbe1 | Method::Kbe2)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown method '{s}' (expected one of sdr-bool, sdr-spin, kbe1, kbe2, nuclear, logdet)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HMode {
    KnownK(usize),
    Unknown,
}

impl HMode {
    pub fn known_k(self) -> Option<usize> {
        match self {
            HMode::KnownK(k) => Some(k),
            HMode::Unknown => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentConfig {
    pub lambda: f64,
    /// Linearized steps per segment.
    pub iterations: usize,
    pub max_reinits: usize,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub h_mode: HMode,
    pub early_stop_tol: f64,
    /// Log-det regularizer.
    pub epsilon: f64,
    pub sdp: SdpConfig,
}

impl Default for DescentConfig {
    fn default() -> Self {
        Self {
            lambda: 1e-4,
            iterations: 3,
            max_reinits: 5,
            tolerances: Tolerances::default(),
            seed: 0,
            h_mode: HMode::Unknown,
            early_stop_tol: 1e-8,
            epsilon: 1e-6,
            sdp: SdpConfig::default(),
        }
    }
}

impl DescentConfig {
    pub fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter("lambda must be positive".into()));
        }
        if !(t.binarity > 0.0 && t.rank_ratio > 0.0 && t.residual > 0.0) {
            return Err(Error::InvalidParameter(
                "tolerances must be positive".into(),
            ));
        }
        if !(self.early_stop_tol > 0.0 && self.epsilon > 0.0) {
            return Err(Error::InvalidParameter(
                "early_stop_tol and epsilon must be positive".into(),
            ));
        }
        self.sdp.validate()
    }
}

/// Which relaxation an iterate lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Boolean,
    Spin,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    /// 0 for the run started from the plain relaxation, then one per restart.
    pub attempt: usize,
    pub t: usize,
    /// Linear part of the objective at the iterate.
    pub f_value: f64,
    /// The quantity the descent decreases (`f - lambda/2 <X,X>` for KBE).
    pub penalized: f64,
    pub second_eigenvalue: f64,
    pub solver_iterations: usize,
    /// Eigendecompositions spent building this step's objective matrix.
    pub objective_eigs: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DescentTrace {
    pub records: Vec<IterationRecord>,
    pub reinit_count: usize,
}

impl DescentTrace {
    /// Steps `(attempt, t)` where the penalized value rose by more than
    /// `rel_slack * (1 + |previous|)`.
    pub fn monotonicity_violations(&self, rel_slack: f64) -> Vec<(usize, usize, f64, f64)> {
        self.records
            .windows(2)
            .filter(|w| w[0].attempt == w[1].attempt)
            .filter(|w| w[1].penalized > w[0].penalized + rel_slack * (1.0 + w[0].penalized.abs()))
            .map(|w| (w[1].attempt, w[1].t, w[0].penalized, w[1].penalized))
            .collect()
    }

    /// Number of consecutive-iterate pairs inside segments.
    pub fn step_count(&self) -> usize {
        self.records
            .windows(2)
            .filter(|w| w[0].attempt == w[1].attempt)
            .count()
    }
}

#[derive(Debug, Clone)]
pub struct RecoveryResult {
    pub method: Method,
    /// Rounded binary vector when certified, else the raw relaxed candidate.
    pub x_hat: Vec<f64>,
    pub x_binary: Option<Vec<u8>>,
    pub certified: bool,
    pub rank1: bool,
    /// Original objective at the (rounded) candidate.
    pub objective: f64,
    pub trace: DescentTrace,
    pub sdp_iterations: usize,
    pub report: ExtractionReport,
    pub solution: SymMatrix,
}

impl RecoveryResult {
    /// Candidate rounded at 0.5, whether or not it was certified.
    pub fn rounded(&self) -> Vec<u8> {
        match &self.x_binary {
            Some(x) => x.clone(),
            None => self.x_hat.iter().map(|&v| u8::from(v >= 0.5)).collect(),
        }
    }
}

/// A failed run, with everything recorded before the failure.
#[derive(Debug, thiserror::Error)]
#[error("{source}")]
pub struct DescentError {
    pub source: Error,
    pub trace: DescentTrace,
}

impl From<DescentError> for Error {
    fn from(e: DescentError) -> Self {
        e.source
    }
}

/// `f - lambda/2 <X, X>`.
pub fn penalized_value(f_linear: f64, x: &SymMatrix, lambda: f64) -> f64 {
    f_linear - 0.5 * lambda * x.dot(x)
}

/// Random rank-one lift `u u^T` with `u_0 = 1` and the other entries uniform
/// over {0, 1} (Boolean) or {-1, 1} (spin).
pub fn reinitialize<R: Rng + ?Sized>(rng: &mut R, order: usize, form: Form) -> SymMatrix {
    let mut u = vec![1.0; order];
    for v in u.iter_mut().skip(1) {
        let bit: bool = rng.gen();
        *v = match (form, bit) {
            (Form::Boolean, b) => f64::from(u8::from(b)),
            (Form::Spin, true) => 1.0,
            (Form::Spin, false) => -1.0,
        };
    }
    SymMatrix::outer(&u)
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Kbe1(PenaltyParams),
    Kbe2(PenaltyParams),
    LogDet { lambda: f64, epsilon: f64 },
}

struct Driver<'a> {
    method: Method,
    form: Form,
    base: &'a SymMatrix,
    solver: SdpSolver,
    instance: Option<&'a BooleanQpInstance>,
    cfg: &'a DescentConfig,
    trace: DescentTrace,
    sdp_iterations: usize,
}

impl<'a> Driver<'a> {
    fn new(
        method: Method,
        form: Form,
        base: &'a SymMatrix,
        n: usize,
        instance: Option<&'a BooleanQpInstance>,
        cfg: &'a DescentConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        if let Some(inst) = instance {
            if inst.n() != n {
                return Err(Error::Dimension(format!(
                    "instance has n = {}, relaxation has n = {n}",
                    inst.n()
                )));
            }
        }
        let constraints = match form {
            Form::Boolean => boolean_constraints(n, cfg.h_mode.known_k())?,
            Form::Spin => spin_constraints(n),
        };
        Ok(Self {
            method,
            form,
            base,
            solver: SdpSolver::new(n + 1, constraints, cfg.sdp)?,
            instance,
            cfg,
            trace: DescentTrace::default(),
            sdp_iterations: 0,
        })
    }

    fn fail(self, source: Error) -> DescentError {
        DescentError {
            source,
            trace: self.trace,
        }
    }

    fn solve(&mut self, objective: &SymMatrix, warm: Option<&WarmStart>) -> Result<SdpSolution> {
        let sol = self.solver.solve(objective, warm)?;
        self.sdp_iterations += sol.iterations;
        match sol.status {
            SdpStatus::Optimal => {}
            SdpStatus::MaxIterations => log::warn!(
                "{}: SDP stopped at {} iterations (primal residual {:.3e})",
                self.method,
                sol.iterations,
                sol.primal_residual
            ),
            SdpStatus::Infeasible => {
                return Err(Error::Solver {
                    status: sol.status.as_str(),
                    iterations: sol.iterations,
                })
            }
        }
        Ok(sol)
    }

    /// Puts spin iterates exactly on the unit-diagonal constraint set.
    fn postprocess(&self, x: SymMatrix) -> SymMatrix {
        match self.form {
            Form::Boolean => x,
            Form::Spin => restore_unit_diagonal(&x),
        }
    }

    fn extract(&self, x: &SymMatrix) -> Result<(ExtractionReport, bool)> {
        let tol = &self.cfg.tolerances;
        let report = match self.form {
            Form::Boolean => extract_boolean(x, tol)?,
            Form::Spin => extract_spin(x, tol)?,
        };
        let certified = certify_report(&report, self.instance, tol)?;
        Ok((report, certified))
    }

    fn measure(&self, step: Option<&Step>, x: &SymMatrix) -> Result<(f64, f64)> {
        Ok(match step {
            Some(Step::Kbe1(p)) => {
                let f = self.base.dot(x) + p.lambda * p.h * x.trace();
                (f, penalized_value(f, x, p.lambda))
            }
            Some(Step::Kbe2(p)) => {
                let f = self.base.dot(x);
                (f, penalized_value(f, x, p.lambda))
            }
            Some(Step::LogDet { lambda, epsilon }) => {
                let f = self.base.dot(x);
                let logdet: f64 = eig_sym(x)?
                    .eigenvalues
                    .iter()
                    .map(|&v| (v.max(0.0) + epsilon).ln())
                    .sum();
                (f, f + lambda * logdet)
            }
            None => {
                let f = self.base.dot(x);
                (f, f)
            }
        })
    }

    fn objective(&self, step: &Step, prev: &SymMatrix) -> Result<SymMatrix> {
        match step {
            Step::Kbe1(p) => kbe_objective_boolean(self.base, prev, p),
            Step::Kbe2(p) => kbe_objective_spin(self.base, prev, p),
            Step::LogDet { lambda, epsilon } => {
                logdet_objective(self.base, prev, *lambda, *epsilon)
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn record(
        &mut self,
        step: Option<&Step>,
        attempt: usize,
        t: usize,
        x: &SymMatrix,
        second_eigenvalue: f64,
        solver_iterations: usize,
        objective_eigs: u64,
    ) -> Result<()> {
        let (f_value, penalized) = self.measure(step, x)?;
        self.trace.records.push(IterationRecord {
            attempt,
            t,
            f_value,
            penalized,
            second_eigenvalue,
            solver_iterations,
            objective_eigs,
        });
        Ok(())
    }

    fn finish(
        self,
        solution: SymMatrix,
        report: ExtractionReport,
        certified: bool,
    ) -> Result<RecoveryResult> {
        let rounded: Vec<u8> = match (&report.rounded, certified) {
            (Some(x), true) => x.clone(),
            _ => report
                .x_candidate
                .iter()
                .map(|&v| u8::from(v >= 0.5))
                .collect(),
        };
        let objective = match self.instance {
            Some(inst) => {
                inst.objective(&rounded.iter().map(|&v| f64::from(v)).collect::<Vec<_>>())?
            }
            None => {
                let lifted: Vec<f64> = std::iter::once(1.0)
                    .chain(rounded.iter().map(|&v| match self.form {
                        Form::Boolean => f64::from(v),
                        Form::Spin => 2.0 * f64::from(v) - 1.0,
                    }))
                    .collect();
                self.base.quad_form(&lifted)
            }
        };
        let x_hat = if certified {
            rounded.iter().map(|&v| f64::from(v)).collect()
        } else {
            report.x_candidate.clone()
        };
        Ok(RecoveryResult {
            method: self.method,
            x_hat,
            x_binary: certified.then_some(rounded),
            certified,
            rank1: report.rank1,
            objective,
            trace: self.trace,
            sdp_iterations: self.sdp_iterations,
            report,
            solution,
        })
    }

    fn run_single(mut self, objective: &SymMatrix) -> Result<RecoveryResult, DescentError> {
        let out = (|| {
            let sol = self.solve(objective, None)?;
            let x = self.postprocess(sol.x);
            let (report, certified) = self.extract(&x)?;
            let f = objective.dot(&x);
            self.trace.records.push(IterationRecord {
                attempt: 0,
                t: 0,
                f_value: f,
                penalized: f,
                second_eigenvalue: report.lambda2,
                solver_iterations: sol.iterations,
                objective_eigs: 0,
            });
            Ok::<_, Error>((x, report, certified))
        })();
        match out {
            Ok((x, report, certified)) => {
                let trace = self.trace.clone();
                self.finish(x, report, certified)
                    .map_err(|source| DescentError { source, trace })
            }
            Err(e) => Err(self.fail(e)),
        }
    }

    fn run_iterative(mut self, step: Step) -> Result<RecoveryResult, DescentError> {
        match self.iterate(&step) {
            Ok((x, report, certified)) => {
                let trace = self.trace.clone();
                self.finish(x, report, certified)
                    .map_err(|source| DescentError { source, trace })
            }
            Err(e) => Err(self.fail(e)),
        }
    }

    fn iterate(&mut self, step: &Step) -> Result<(SymMatrix, ExtractionReport, bool)> {
        let cfg = self.cfg;
        let order = self.solver.order();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

        let sdr = self.solve(self.base, None)?;
        let base_warm = sdr.warm_start();
        let x0 = self.postprocess(sdr.x.clone());
        let (report0, certified0) = self.extract(&x0)?;
        self.record(Some(step), 0, 0, &x0, report0.lambda2, sdr.iterations, 0)?;
        if certified0 {
            return Ok((x0, report0, true));
        }

        let mut best: Option<(SymMatrix, ExtractionReport)> = None;
        for attempt in 0..=cfg.max_reinits {
            let (mut current, mut report, mut warm) = if attempt == 0 {
                let warm = WarmStart {
                    x: x0.clone(),
                    ..base_warm.clone()
                };
                (x0.clone(), Some(report0.clone()), warm)
            } else {
                self.trace.reinit_count += 1;
                let start = reinitialize(&mut rng, order, self.form);
                self.record(Some(step), attempt, 0, &start, 0.0, 0, 0)?;
                let warm = WarmStart {
                    x: start.clone(),
                    ..base_warm.clone()
                };
                (start, None, warm)
            };

            for t in 1..=cfg.iterations {
                let eigs_before = eig_call_count();
                let objective = self.objective(step, &current)?;
                let objective_eigs = eig_call_count() - eigs_before;
                let sol = self.solve(&objective, Some(&warm))?;
                let next = self.postprocess(sol.x.clone());
                let (rep, certified) = self.extract(&next)?;
                self.record(
                    Some(step),
                    attempt,
                    t,
                    &next,
                    rep.lambda2,
                    sol.iterations,
                    objective_eigs,
                )?;
                let change = next.distance(&current);
                let scale = 1.0 + current.frobenius_norm();
                warm = WarmStart {
                    x: next.clone(),
                    dual: Some(sol.dual),
                    rho: Some(sol.rho),
                };
                current = next;
                if certified {
                    return Ok((current, rep, true));
                }
                report = Some(rep);
                if change <= cfg.early_stop_tol * scale {
                    break;
                }
            }

            let report = match report {
                Some(r) => r,
                None => self.extract(&current)?.0,
            };
            if best
                .as_ref()
                .is_none_or(|(_, b)| report.lambda2 < b.lambda2)
            {
                best = Some((current, report));
            }
            if cfg.iterations == 0 {
                break;
            }
        }
        let (x, report) = best.expect("at least one attempt runs");
        Ok((x, report, false))
    }
}

fn penalty(n: usize, cfg: &DescentConfig) -> Result<PenaltyParams> {
    PenaltyParams::new(n, cfg.h_mode.known_k(), cfg.lambda, cfg.epsilon)
}

/// Descent on the Shor relaxation with the `h tr(X) - <X, X>` penalty.
pub fn run_kbe1(
    hom: &HomogenizedProblem,
    instance: Option<&BooleanQpInstance>,
    cfg: &DescentConfig,
) -> Result<RecoveryResult, DescentError> {
    let params = penalty(hom.n, cfg).map_err(|source| DescentError {
        source,
        trace: DescentTrace::default(),
    })?;
    Driver::new(Method::Kbe1, Form::Boolean, &hom.q, hom.n, instance, cfg)
        .map_err(|source| DescentError {
            source,
            trace: DescentTrace::default(),
        })?
        .run_iterative(Step::Kbe1(params))
}

/// Descent on the spin relaxation with the `-<Z, Z>` penalty.
pub fn run_kbe2(
    spin: &SpinProblem,
    instance: Option<&BooleanQpInstance>,
    cfg: &DescentConfig,
) -> Result<RecoveryResult, DescentError> {
    let params = penalty(spin.n, cfg).map_err(|source| DescentError {
        source,
        trace: DescentTrace::default(),
    })?;
    Driver::new(Method::Kbe2, Form::Spin, &spin.r, spin.n, instance, cfg)
        .map_err(|source| DescentError {
            source,
            trace: DescentTrace::default(),
        })?
        .run_iterative(Step::Kbe2(params))
}

/// Reweighted trace iteration with weight `(X_prev + eps I)^{-1}`.
pub fn run_logdet(
    hom: &HomogenizedProblem,
    instance: Option<&BooleanQpInstance>,
    cfg: &DescentConfig,
) -> Result<RecoveryResult, DescentError> {
    let step = Step::LogDet {
        lambda: cfg.lambda,
        epsilon: cfg.epsilon,
    };
    Driver::new(Method::Logdet, Form::Boolean, &hom.q, hom.n, instance, cfg)
        .map_err(|source| DescentError {
            source,
            trace: DescentTrace::default(),
        })?
        .run_iterative(step)
}

/// One solve of the Shor relaxation with objective `Q + lambda I`.
pub fn run_nuclear(
    hom: &HomogenizedProblem,
    instance: Option<&BooleanQpInstance>,
    lambda: f64,
    cfg: &DescentConfig,
) -> Result<RecoveryResult, DescentError> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(DescentError {
            source: Error::InvalidParameter(format!("lambda must be nonnegative, got {lambda}")),
            trace: DescentTrace::default(),
        });
    }
    let objective = nuclear_objective(&hom.q, lambda);
    let method = if lambda == 0.0 {
        Method::SdrBool
    } else {
        Method::Nuclear
    };
    Driver::new(method, Form::Boolean, &hom.q, hom.n, instance, cfg)
        .map_err(|source| DescentError {
            source,
            trace: DescentTrace::default(),
        })?
        .run_single(&objective)
}

pub fn run_sdr_boolean(
    hom: &HomogenizedProblem,
    instance: Option<&BooleanQpInstance>,
    cfg: &DescentConfig,
) -> Result<RecoveryResult, DescentError> {
    run_nuclear(hom, instance, 0.0, cfg)
}

pub fn run_sdr_spin(
    spin: &SpinProblem,
    instance: Option<&BooleanQpInstance>,
    cfg: &DescentConfig,
) -> Result<RecoveryResult, DescentError> {
    Driver::new(Method::SdrSpin, Form::Spin, &spin.r, spin.n, instance, cfg)
        .map_err(|source| DescentError {
            source,
            trace: DescentTrace::default(),
        })?
        .run_single(&spin.r)
}

/// Builds the relaxation `method` needs from `instance` and runs it.
pub fn run_method(
    method: Method,
    instance: &BooleanQpInstance,
    cfg: &DescentConfig,
) -> Result<RecoveryResult, DescentError> {
    let hom = build_homogenized(instance);
    match method {
        Method::SdrBool => run_sdr_boolean(&hom, Some(instance), cfg),
        Method::SdrSpin => run_sdr_spin(&build_spin(&hom), Some(instance), cfg),
        Method::Kbe1 => run_kbe1(&hom, Some(instance), cfg),
        Method::Kbe2 => run_kbe2(&build_spin(&hom), Some(instance), cfg),
        Method::Nuclear => run_nuclear(&hom, Some(instance), cfg.lambda, cfg),
        Method::Logdet => run_logdet(&hom, Some(instance), cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!("kbe3".parse::<Method>().is_err());
    }

    #[test]
    fn penalized_value_cases() {
        let i3 = SymMatrix::identity(3);
        assert_eq!(penalized_value(1.5, &i3, 0.0), 1.5);
        assert_eq!(penalized_value(1.5, &SymMatrix::zeros(3), 2.0), 1.5);
        assert_eq!(penalized_value(0.0, &i3, 2.0), -3.0);
    }

    #[test]
    fn reinitialization_is_feasible_rank_one_and_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let x = reinitialize(&mut a, 6, Form::Boolean);
            assert_eq!(x, reinitialize(&mut b, 6, Form::Boolean));
            let cons = boolean_constraints(5, None).unwrap();
            assert!(cons.iter().all(|c| c.apply(&x) == c.rhs));
            let z = reinitialize(&mut a, 6, Form::Spin);
            reinitialize(&mut b, 6, Form::Spin);
            assert!(spin_constraints(5).iter().all(|c| c.apply(&z) == c.rhs));
            let eigs = eig_sym(&z).unwrap();
            assert!(eigs.eigenvalues[1].abs() < 1e-9);
        }
    }

    #[test]
    fn boolean_outer_product_example() {
        let u = [1.0, 1.0, 0.0];
        assert_eq!(
            SymMatrix::outer(&u).as_slice(),
            &[1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn monotonicity_check_respects_segments() {
        let rec = |attempt, t, penalized| IterationRecord {
            attempt,
            t,
            f_value: 0.0,
            penalized,
            second_eigenvalue: 0.0,
            solver_iterations: 0,
            objective_eigs: 0,
        };
        let trace = DescentTrace {
            records: vec![
                rec(0, 0, 1.0),
                rec(0, 1, 0.5),
                rec(1, 0, 9.0),
                rec(1, 1, 9.5),
            ],
            reinit_count: 1,
        };
        assert_eq!(trace.step_count(), 2);
        let v = trace.monotonicity_violations(1e-5);
        assert_eq!(v, vec![(1, 1, 9.0, 9.5)]);
    }
}
