use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::eig::{eig_sym, project_psd_with_spectrum, SpectralInfo};
use super::ipm;
use crate::error::{Error, Result};
use crate::matrix::SymMatrix;

/// `<A, X> = rhs` with `A` given as upper-triangle triples; an off-diagonal
/// triple `(i, j, v)` stands for `A[i][j] = A[j][i] = v`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    entries: Vec<(usize, usize, f64)>,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn new(entries: impl IntoIterator<Item = (usize, usize, f64)>, rhs: f64) -> Result<Self> {
        let mut merged: Vec<(usize, usize, f64)> = Vec::new();
        for (i, j, v) in entries {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            match merged.iter_mut().find(|e| e.0 == i && e.1 == j) {
                Some(e) => e.2 += v,
                None => merged.push((i, j, v)),
            }
        }
        merged.retain(|e| e.2 != 0.0);
        if merged.is_empty() {
            return Err(Error::InvalidParameter(
                "constraint has no nonzero coefficient".into(),
            ));
        }
        if !rhs.is_finite() || merged.iter().any(|e| !e.2.is_finite()) {
            return Err(Error::NonFinite("constraint data".into()));
        }
        merged.sort_by_key(|e| (e.0, e.1));
        Ok(Self {
            entries: merged,
            rhs,
        })
    }

    /// `X[i][i] = value`.
    pub fn diagonal(i: usize, value: f64) -> Self {
        Self::new([(i, i, 1.0)], value).expect("nonzero coefficient")
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// `<A, X>`.
    pub fn apply(&self, x: &SymMatrix) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| {
                if i == j {
                    v * x.get(i, i)
                } else {
                    2.0 * v * x.get(i, j)
                }
            })
            .sum()
    }

    /// `X += alpha A`.
    pub fn add_scaled_to(&self, alpha: f64, x: &mut SymMatrix) {
        for &(i, j, v) in &self.entries {
            x.add_at(i, j, alpha * v);
        }
    }

    /// Frobenius inner product of two coefficient matrices.
    pub fn coeff_dot(&self, other: &LinearConstraint) -> f64 {
        let mut acc = 0.0;
        let (mut a, mut b) = (0, 0);
        // Both lists are sorted, so a merge walk finds the shared positions.
        while a < self.entries.len() && b < other.entries.len() {
            let (ia, ja, va) = self.entries[a];
            let (ib, jb, vb) = other.entries[b];
            match (ia, ja).cmp(&(ib, jb)) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    acc += if ia == ja { va * vb } else { 2.0 * va * vb };
                    a += 1;
                    b += 1;
                }
            }
        }
        acc
    }

    pub fn to_dense(&self, order: usize) -> SymMatrix {
        let mut m = SymMatrix::zeros(order);
        self.add_scaled_to(1.0, &mut m);
        m
    }

    fn max_index(&self) -> usize {
        self.entries.iter().map(|e| e.1).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub objective: SymMatrix,
    pub constraints: Vec<LinearConstraint>,
}

impl SdpProblem {
    pub fn order(&self) -> usize {
        self.objective.order()
    }

    /// Largest `|<A_j, X> - b_j|`.
    pub fn max_violation(&self, x: &SymMatrix) -> f64 {
        self.constraints
            .iter()
            .map(|c| (c.apply(x) - c.rhs).abs())
            .fold(0.0, f64::max)
    }
}

/// Which algorithm [`SdpSolver`] runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SdpBackend {
    /// Primal-dual interior point, falling back to ADMM when it stalls.
    #[default]
    InteriorPoint,
    Admm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpConfig {
    pub backend: SdpBackend,
    pub rho: f64,
    pub eps_abs: f64,
    pub eps_rel: f64,
    pub max_iter: usize,
    pub over_relaxation: f64,
}

impl Default for SdpConfig {
    fn default() -> Self {
        Self {
            backend: SdpBackend::default(),
            rho: 1.0,
            eps_abs: 1e-7,
            eps_rel: 1e-7,
            max_iter: 50_000,
            over_relaxation: 1.6,
        }
    }
}

impl SdpConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return bad("rho must be positive");
        }
        if !(self.eps_abs > 0.0 && self.eps_rel > 0.0) {
            return bad("tolerances must be positive");
        }
        if self.max_iter == 0 {
            return bad("max_iter must be positive");
        }
        if !(1.0..2.0).contains(&self.over_relaxation) {
            return bad("over_relaxation must lie in [1, 2)");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    MaxIterations,
    Infeasible,
}

impl SdpStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SdpStatus::Optimal => "optimal",
            SdpStatus::MaxIterations => "max-iterations",
            SdpStatus::Infeasible => "infeasible",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    /// The PSD iterate (exactly PSD up to eigensolver roundoff).
    pub x: SymMatrix,
    pub status: SdpStatus,
    pub objective_value: f64,
    /// Primal infeasibility at termination: `||X_affine - X_psd||_F` for
    /// ADMM, `||b - A(X)||` for the interior-point method.
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    /// Dual slack estimate `S = C - A^*(y)`, in the units of the objective.
    pub dual: SymMatrix,
    pub rho: f64,
    /// Spectrum of the last pre-projection iterate, reused by callers that
    /// need eigenvalues of `x`.
    pub(crate) spectrum: Option<SpectralInfo>,
}

impl SdpSolution {
    /// Eigenvalues of `x`, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match &self.spectrum {
            Some(s) => s.eigenvalues.iter().map(|&v| v.max(0.0)).collect(),
            None => Vec::new(),
        }
    }

    pub fn warm_start(&self) -> WarmStart {
        WarmStart {
            x: self.x.clone(),
            dual: Some(self.dual.clone()),
            rho: Some(self.rho),
        }
    }
}

/// Initial point for [`SdpSolver::solve`].
#[derive(Debug, Clone)]
pub struct WarmStart {
    pub x: SymMatrix,
    pub dual: Option<SymMatrix>,
    pub rho: Option<f64>,
}

impl WarmStart {
    pub fn primal(x: SymMatrix) -> Self {
        Self {
            x,
            dual: None,
            rho: None,
        }
    }
}

/// Euclidean projection onto `{X : <A_j, X> = b_j}`.
pub struct AffineProjector {
    order: usize,
    constraints: Vec<LinearConstraint>,
    gram: Cholesky<f64, Dyn>,
}

impl AffineProjector {
    pub fn new(order: usize, constraints: Vec<LinearConstraint>) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::InvalidParameter("no constraints".into()));
        }
        if let Some(c) = constraints.iter().find(|c| c.max_index() >= order) {
            return Err(Error::Dimension(format!(
                "constraint index {} out of range for order {order}",
                c.max_index()
            )));
        }
        let p = constraints.len();
        let g = DMatrix::from_fn(p, p, |i, j| constraints[i].coeff_dot(&constraints[j]));
        let gram = Cholesky::new(g).ok_or_else(|| {
            Error::DegenerateConstraints("constraint matrices are linearly dependent".into())
        })?;
        Ok(Self {
            order,
            constraints,
            gram,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn project(&self, w: &mut SymMatrix) {
        let r = DVector::from_iterator(
            self.constraints.len(),
            self.constraints.iter().map(|c| c.apply(w) - c.rhs),
        );
        let y = self.gram.solve(&r);
        for (c, &yj) in self.constraints.iter().zip(y.iter()) {
            c.add_scaled_to(-yj, w);
        }
    }
}

/// ADMM solver bound to one constraint set; the objective varies per call.
pub struct SdpSolver {
    projector: AffineProjector,
    config: SdpConfig,
}

const RHO_MIN: f64 = 1e-6;
const RHO_MAX: f64 = 1e6;
const ADAPT_EVERY: usize = 25;
const STALL_WINDOW: usize = 1000;
const IPM_MAX_ITER: usize = 100;
/// The interior-point method keeps going to `tol * IPM_REFINE` when it can,
/// since the tail of the spectrum shrinks only with the duality gap.
const IPM_REFINE: f64 = 1e-5;

impl SdpSolver {
    pub fn new(
        order: usize,
        constraints: Vec<LinearConstraint>,
        config: SdpConfig,
    ) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            projector: AffineProjector::new(order, constraints)?,
            config,
        })
    }

    pub fn config(&self) -> &SdpConfig {
        &self.config
    }

    pub fn order(&self) -> usize {
        self.projector.order
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.projector.constraints
    }

    pub fn solve(&self, objective: &SymMatrix, warm: Option<&WarmStart>) -> Result<SdpSolution> {
        let n = self.order();
        objective.ensure_order(n, "SDP objective")?;
        if !objective.is_finite() {
            return Err(Error::NonFinite("SDP objective".into()));
        }
        match self.config.backend {
            SdpBackend::Admm => self.solve_admm(objective, warm),
            SdpBackend::InteriorPoint => match self.solve_ipm(objective, warm)? {
                Some(sol) => Ok(sol),
                None => {
                    log::debug!("interior point did not converge, falling back to ADMM");
                    self.solve_admm(objective, warm)
                }
            },
        }
    }

    /// `None` when the interior-point iteration fails to reach tolerance.
    fn solve_ipm(
        &self,
        objective: &SymMatrix,
        warm: Option<&WarmStart>,
    ) -> Result<Option<SdpSolution>> {
        let n = self.order();
        let cfg = &self.config;
        let c_norm = objective.frobenius_norm();
        let c_scale = if c_norm > 0.0 { c_norm } else { 1.0 };
        let c = DMatrix::from_column_slice(n, n, objective.as_slice()) / c_scale;
        let tol = cfg.eps_abs.min(cfg.eps_rel);
        let out = ipm::solve(
            &c,
            &self.projector.constraints,
            tol,
            tol * IPM_REFINE,
            cfg.max_iter.min(IPM_MAX_ITER),
        );
        if !out.converged {
            return Ok(None);
        }
        let x = SymMatrix::from_lower_fn(n, |i, j| 0.5 * (out.x[(i, j)] + out.x[(j, i)]));
        let dual =
            SymMatrix::from_lower_fn(n, |i, j| 0.5 * c_scale * (out.z[(i, j)] + out.z[(j, i)]));
        let spectrum = eig_sym(&x)?;
        Ok(Some(SdpSolution {
            objective_value: objective.dot(&x),
            x,
            status: SdpStatus::Optimal,
            primal_residual: out.primal_infeasibility,
            dual_residual: out.dual_infeasibility * c_scale,
            iterations: out.iterations,
            dual,
            rho: warm.and_then(|w| w.rho).unwrap_or(cfg.rho),
            spectrum: Some(spectrum),
        }))
    }

    fn solve_admm(&self, objective: &SymMatrix, warm: Option<&WarmStart>) -> Result<SdpSolution> {
        let n = self.order();
        let cfg = &self.config;
        let alpha = cfg.over_relaxation;

        // Work with a unit-norm objective; the dual is rescaled on the way out.
        let c_norm = objective.frobenius_norm();
        let c_scale = if c_norm > 0.0 { c_norm } else { 1.0 };
        let cs = objective.scaled(1.0 / c_scale);

        let mut rho = warm
            .and_then(|w| w.rho)
            .unwrap_or(cfg.rho)
            .clamp(RHO_MIN, RHO_MAX);
        let mut y = match warm {
            Some(w) => {
                w.x.ensure_order(n, "warm start")?;
                w.x.clone()
            }
            None => {
                let mut z = SymMatrix::zeros(n);
                self.projector.project(&mut z);
                z
            }
        };
        // Scaled dual: S = -rho * U (in units of the normalized objective).
        let mut u = match warm.and_then(|w| w.dual.as_ref()) {
            Some(s) => {
                s.ensure_order(n, "warm dual")?;
                s.scaled(-1.0 / (rho * c_scale))
            }
            None => SymMatrix::zeros(n),
        };

        let mut x = SymMatrix::zeros(n);
        let mut w = SymMatrix::zeros(n);
        let mut status = SdpStatus::MaxIterations;
        let mut spectrum = None;
        let (mut r_norm, mut s_norm) = (f64::INFINITY, f64::INFINITY);
        let mut iterations = 0;
        let mut stall_ref = f64::INFINITY;

        for it in 1..=cfg.max_iter {
            iterations = it;
            // x = Proj_affine(y - u - cs / rho)
            {
                let xd = x.data_mut();
                let (yd, ud, cd) = (y.as_slice(), u.as_slice(), cs.as_slice());
                for k in 0..xd.len() {
                    xd[k] = yd[k] - ud[k] - cd[k] / rho;
                }
            }
            self.projector.project(&mut x);

            // w = alpha x + (1 - alpha) y + u, then y_new = Proj_psd(w).
            {
                let wd = w.data_mut();
                let (xd, yd, ud) = (x.as_slice(), y.as_slice(), u.as_slice());
                for k in 0..wd.len() {
                    wd[k] = alpha * xd[k] + (1.0 - alpha) * yd[k] + ud[k];
                }
            }
            let (y_new, eigs) = project_psd_with_spectrum(&w)?;
            spectrum = Some(eigs);

            // u += x_hat - y_new, where x_hat + u = w.
            {
                let ud = u.data_mut();
                let (wd, yd) = (w.as_slice(), y_new.as_slice());
                for k in 0..ud.len() {
                    ud[k] = wd[k] - yd[k];
                }
            }

            r_norm = x.distance(&y_new);
            s_norm = rho * y_new.distance(&y);
            y = y_new;

            let eps_pri = cfg.eps_abs + cfg.eps_rel * x.frobenius_norm().max(y.frobenius_norm());
            let dual_scale = rho * u.frobenius_norm();
            let eps_dual = cfg.eps_abs + cfg.eps_rel * dual_scale;
            if it % 1000 == 0 {
                log::trace!("admm it={it} r={r_norm:.3e}/{eps_pri:.1e} s={s_norm:.3e}/{eps_dual:.1e} rho={rho:.2e}");
            }
            if r_norm <= eps_pri && s_norm <= eps_dual {
                status = SdpStatus::Optimal;
                break;
            }

            // Infeasible affine/PSD pairs converge to a fixed positive gap with
            // a vanishing dual step.
            if it % STALL_WINDOW == 0 {
                if it >= 2 * STALL_WINDOW
                    && s_norm <= eps_dual
                    && r_norm > 1e3 * eps_pri
                    && r_norm > 0.99 * stall_ref
                {
                    status = SdpStatus::Infeasible;
                    break;
                }
                stall_ref = r_norm;
            }

            if it % ADAPT_EVERY == 0 {
                let ratio = (r_norm / eps_pri) / (s_norm / eps_dual).max(1e-300);
                if !(0.2..=5.0).contains(&ratio) {
                    let new_rho = (rho * ratio.sqrt())
                        .clamp(rho / 10.0, rho * 10.0)
                        .clamp(RHO_MIN, RHO_MAX);
                    if new_rho != rho {
                        u.scale(rho / new_rho);
                        rho = new_rho;
                    }
                }
            }
        }

        if status == SdpStatus::MaxIterations {
            let eps_pri = cfg.eps_abs + cfg.eps_rel * x.frobenius_norm().max(y.frobenius_norm());
            let eps_dual = cfg.eps_abs + cfg.eps_rel * rho * u.frobenius_norm();
            if s_norm <= eps_dual && r_norm > 1e3 * eps_pri {
                status = SdpStatus::Infeasible;
            }
        }

        let objective_value = objective.dot(&y);
        Ok(SdpSolution {
            objective_value,
            x: y,
            status,
            primal_residual: r_norm,
            dual_residual: s_norm * c_scale,
            iterations,
            dual: u.scaled(-rho * c_scale),
            rho,
            spectrum,
        })
    }
}

pub fn solve(problem: &SdpProblem, config: &SdpConfig) -> Result<SdpSolution> {
    solve_warm(problem, config, None)
}

pub fn solve_warm(
    problem: &SdpProblem,
    config: &SdpConfig,
    warm: Option<&WarmStart>,
) -> Result<SdpSolution> {
    let solver = SdpSolver::new(problem.order(), problem.constraints.clone(), *config)?;
    solver.solve(&problem.objective, warm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn admm() -> SdpConfig {
        SdpConfig {
            backend: SdpBackend::Admm,
            ..SdpConfig::default()
        }
    }

    fn unit_diagonal(n: usize) -> Vec<LinearConstraint> {
        (0..n).map(|i| LinearConstraint::diagonal(i, 1.0)).collect()
    }

    #[test]
    fn trace_minimization_with_pinned_entry() {
        let p = SdpProblem {
            objective: SymMatrix::identity(2),
            constraints: vec![LinearConstraint::diagonal(0, 1.0)],
        };
        for cfg in [SdpConfig::default(), admm()] {
            let sol = solve(&p, &cfg).unwrap();
            assert_eq!(sol.status, SdpStatus::Optimal);
            assert!((sol.objective_value - 1.0).abs() <= 1e-5);
            assert!(sol.x.distance(&SymMatrix::from_diagonal(&[1.0, 0.0])) < 1e-5);
        }
    }

    #[test]
    fn two_spin_maxcut() {
        let mut obj = SymMatrix::zeros(2);
        obj.set(0, 1, -1.0);
        let p = SdpProblem {
            objective: obj,
            constraints: unit_diagonal(2),
        };
        for cfg in [SdpConfig::default(), admm()] {
            let sol = solve(&p, &cfg).unwrap();
            assert_eq!(sol.status, SdpStatus::Optimal);
            assert!((sol.objective_value + 2.0).abs() <= 2e-5);
            assert!(
                sol.x
                    .distance(&SymMatrix::from_row_major(2, &[1.0; 4]).unwrap())
                    < 1e-4
            );
        }
    }

    #[test]
    fn zero_objective_is_optimal_at_zero() {
        let p = SdpProblem {
            objective: SymMatrix::zeros(3),
            constraints: unit_diagonal(3),
        };
        for cfg in [SdpConfig::default(), admm()] {
            let sol = solve(&p, &cfg).unwrap();
            assert_eq!(sol.status, SdpStatus::Optimal);
            assert_eq!(sol.objective_value, 0.0);
            assert!(p.max_violation(&sol.x) < 1e-6);
        }
    }

    #[test]
    fn negative_diagonal_is_infeasible() {
        let p = SdpProblem {
            objective: SymMatrix::identity(2),
            constraints: vec![LinearConstraint::diagonal(0, -1.0)],
        };
        let cfg = SdpConfig {
            max_iter: 5000,
            ..SdpConfig::default()
        };
        let sol = solve(&p, &cfg).unwrap();
        assert_eq!(sol.status, SdpStatus::Infeasible);
    }

    #[test]
    fn dependent_constraints_rejected() {
        let c = LinearConstraint::diagonal(0, 1.0);
        assert!(matches!(
            AffineProjector::new(2, vec![c.clone(), c]),
            Err(Error::DegenerateConstraints(_))
        ));
        assert!(LinearConstraint::new([(0, 1, 0.0)], 1.0).is_err());
        assert!(AffineProjector::new(2, vec![LinearConstraint::diagonal(2, 1.0)]).is_err());
    }

    #[test]
    fn affine_projection_hits_constraints() {
        let cons = vec![
            LinearConstraint::diagonal(0, 1.0),
            LinearConstraint::new([(1, 1, 1.0), (0, 1, -0.5)], 0.0).unwrap(),
            LinearConstraint::new([(1, 1, 1.0), (2, 2, 1.0)], 1.0).unwrap(),
        ];
        let proj = AffineProjector::new(3, cons.clone()).unwrap();
        let mut w = SymMatrix::from_lower_fn(3, |i, j| (i * 3 + j) as f64 * 0.37 - 1.0);
        proj.project(&mut w);
        for c in &cons {
            assert!((c.apply(&w) - c.rhs).abs() < 1e-12);
        }
        let dense = cons[1].to_dense(3);
        assert_eq!(dense.get(0, 1), -0.5);
        assert!((cons[1].apply(&w) - dense.dot(&w)).abs() < 1e-12);
    }

    #[test]
    fn admm_warm_start_from_optimum_converges_fast() {
        let mut obj = SymMatrix::from_lower_fn(4, |i, j| ((i + 2 * j) % 5) as f64 - 2.0);
        obj.add_at(0, 0, 1.0);
        let p = SdpProblem {
            objective: obj,
            constraints: unit_diagonal(4),
        };
        let cold = solve(&p, &admm()).unwrap();
        assert_eq!(cold.status, SdpStatus::Optimal);
        let warm = solve_warm(&p, &admm(), Some(&cold.warm_start())).unwrap();
        assert_eq!(warm.status, SdpStatus::Optimal);
        assert!(warm.iterations < cold.iterations / 2 + 2);
        assert!((warm.objective_value - cold.objective_value).abs() < 1e-5);
        let min_eig = eig_sym(&warm.x).unwrap().min_eigenvalue();
        assert!(min_eig >= -1e-6);
    }
}
