//! SDP builders for the Boolean (Shor) and spin (MAX-CUT) relaxations and the
//! objective matrices of the penalized subproblems.
//!
//! Every penalized subproblem keeps the constraint set of its relaxation and
//! only swaps the objective matrix, so one [`SdpSolver`](crate::sdp::SdpSolver)
//! serves a whole descent run.

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::problem::{HomogenizedProblem, SpinProblem};
use crate::sdp::{eig_sym, LinearConstraint, SdpProblem};

/// Weights of the concave eigenvalue penalty and the log-det baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyParams {
    pub lambda: f64,
    /// Nonzero eigenvalue of the target: `k + 1` for known sparsity, else `n + 1`.
    pub h: f64,
    pub epsilon: f64,
    pub k: Option<usize>,
}

impl PenaltyParams {
    pub fn new(n: usize, k: Option<usize>, lambda: f64, epsilon: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        if let Some(k) = k {
            if k > n {
                return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
            }
        }
        let h = k.map_or(n + 1, |k| k + 1) as f64;
        Ok(Self {
            lambda,
            h,
            epsilon,
            k,
        })
    }
}

/// Shor relaxation constraints: `X00 = 1`, `Xii = X0i`, and with known `k`
/// also `sum_{i>=1} Xii = k`.
pub fn boolean_constraints(n: usize, known_k: Option<usize>) -> Result<Vec<LinearConstraint>> {
    let mut cons = Vec::with_capacity(n + 2);
    cons.push(LinearConstraint::diagonal(0, 1.0));
    for i in 1..=n {
        cons.push(LinearConstraint::new([(i, i, 1.0), (0, i, -0.5)], 0.0)?);
    }
    if let Some(k) = known_k {
        if k > n {
            return Err(Error::InvalidParameter(format!(
                "known k = {k} exceeds n = {n}"
            )));
        }
        if n > 0 {
            cons.push(LinearConstraint::new(
                (1..=n).map(|i| (i, i, 1.0)),
                k as f64,
            )?);
        }
    }
    Ok(cons)
}

pub fn spin_constraints(n: usize) -> Vec<LinearConstraint> {
    (0..=n)
        .map(|i| LinearConstraint::diagonal(i, 1.0))
        .collect()
}

pub fn sdr_boolean(hom: &HomogenizedProblem, known_k: Option<usize>) -> Result<SdpProblem> {
    Ok(SdpProblem {
        objective: hom.q.clone(),
        constraints: boolean_constraints(hom.n, known_k)?,
    })
}

pub fn sdr_spin(spin: &SpinProblem) -> SdpProblem {
    SdpProblem {
        objective: spin.r.clone(),
        constraints: spin_constraints(spin.n),
    }
}

/// `Q + lambda h I - lambda X_prev`.
pub fn kbe_objective_boolean(
    q: &SymMatrix,
    x_prev: &SymMatrix,
    params: &PenaltyParams,
) -> Result<SymMatrix> {
    x_prev.ensure_order(q.order(), "previous iterate")?;
    let mut m = q.plus_scaled(-params.lambda, x_prev);
    for i in 0..m.order() {
        m.add_at(i, i, params.lambda * params.h);
    }
    Ok(m)
}

/// `R - lambda Z_prev`.
pub fn kbe_objective_spin(
    r: &SymMatrix,
    z_prev: &SymMatrix,
    params: &PenaltyParams,
) -> Result<SymMatrix> {
    z_prev.ensure_order(r.order(), "previous iterate")?;
    Ok(r.plus_scaled(-params.lambda, z_prev))
}

/// `Q + lambda I`.
pub fn nuclear_objective(q: &SymMatrix, lambda: f64) -> SymMatrix {
    let mut m = q.clone();
    for i in 0..m.order() {
        m.add_at(i, i, lambda);
    }
    m
}

/// `Q + lambda (X_prev + eps I)^{-1}`, inverting through the eigenvalues of
/// `X_prev`.
pub fn logdet_objective(
    q: &SymMatrix,
    x_prev: &SymMatrix,
    lambda: f64,
    epsilon: f64,
) -> Result<SymMatrix> {
    x_prev.ensure_order(q.order(), "previous iterate")?;
    let eigs = eig_sym(x_prev)?;
    if let Some(&v) = eigs.eigenvalues.iter().find(|&&v| v + epsilon <= 0.0) {
        return Err(Error::NonPsdIterate {
            eigenvalue: v,
            epsilon,
        });
    }
    let mut m = q.clone();
    for (k, &v) in eigs.eigenvalues.iter().enumerate() {
        m.add_outer(lambda / (v + epsilon), eigs.vector(k));
    }
    Ok(m)
}

/// `h tr(X) - <X, X>`: zero exactly when every eigenvalue of `X` is `0` or
/// `h`, and nonnegative when the spectrum lies in `[0, h]`.
pub fn binary_eigen_penalty(x: &SymMatrix, h: f64) -> f64 {
    h * x.trace() - x.dot(x)
}

/// Rescales a PSD matrix to unit diagonal, `D^{-1/2} Z D^{-1/2}`.
///
/// The result stays PSD and lands exactly on the spin-relaxation constraint
/// set. Rows with a nonpositive diagonal are left untouched.
pub fn restore_unit_diagonal(z: &SymMatrix) -> SymMatrix {
    let scale: Vec<f64> = z
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d.sqrt() } else { 1.0 })
        .collect();
    let mut out = SymMatrix::from_lower_fn(z.order(), |i, j| z.get(i, j) * scale[i] * scale[j]);
    for i in 0..z.order() {
        if z.get(i, i) > 0.0 {
            out.set(i, i, 1.0);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{build_homogenized, build_spin, BooleanQpInstance};

    fn hom2() -> HomogenizedProblem {
        build_homogenized(
            &BooleanQpInstance::linear_system(2, 1, vec![1.0, 1.0], vec![1.0]).unwrap(),
        )
    }

    #[test]
    fn shor_constraint_counts() {
        let p = sdr_boolean(&hom2(), None).unwrap();
        assert_eq!(p.constraints.len(), 3);
        let p = sdr_boolean(&hom2(), Some(1)).unwrap();
        assert_eq!(p.constraints.len(), 4);
        let last = p.constraints.last().unwrap();
        assert_eq!(last.to_dense(3), SymMatrix::from_diagonal(&[0.0, 1.0, 1.0]));
        assert_eq!(last.rhs, 1.0);
        assert!(sdr_boolean(&hom2(), Some(3)).is_err());
    }

    #[test]
    fn rank_one_binary_lifts_are_feasible() {
        for x in [[0u8, 0], [0, 1], [1, 0], [1, 1]] {
            let xb = crate::problem::augment(&x);
            let k = x.iter().map(|&v| v as usize).sum();
            let p = sdr_boolean(&hom2(), Some(k)).unwrap();
            assert_eq!(p.max_violation(&SymMatrix::outer(&xb)), 0.0);
        }
    }

    #[test]
    fn spin_relaxation_constraints() {
        let spin = build_spin(&hom2());
        let p = sdr_spin(&spin);
        assert_eq!(p.constraints.len(), 3);
        let z = SymMatrix::outer(&[1.0, -1.0, 1.0]);
        assert_eq!(p.max_violation(&z), 0.0);
        assert_eq!(z.trace(), 3.0);
    }

    #[test]
    fn kbe_boolean_objective_cases() {
        let q = hom2().q;
        let params = PenaltyParams::new(2, Some(1), 1e-4, 1e-6).unwrap();
        assert_eq!(params.h, 2.0);
        let cancel =
            kbe_objective_boolean(&q, &SymMatrix::identity(3).scaled(2.0), &params).unwrap();
        assert!(cancel.distance(&q) < 1e-15);
        let tiny = PenaltyParams {
            lambda: 1e-300,
            ..params
        };
        let m = kbe_objective_boolean(&q, &SymMatrix::outer(&[1.0, 1.0, 0.0]), &tiny).unwrap();
        assert_eq!(m, q);
        assert!(kbe_objective_boolean(&q, &SymMatrix::zeros(2), &params).is_err());
        assert_eq!(PenaltyParams::new(2, None, 1e-4, 1e-6).unwrap().h, 3.0);
    }

    #[test]
    fn kbe_spin_objective_cases() {
        let r = build_spin(&hom2()).r;
        let params = PenaltyParams::new(2, None, 1.0, 1e-6).unwrap();
        assert_eq!(
            kbe_objective_spin(&r, &SymMatrix::zeros(3), &params).unwrap(),
            r
        );
        let zz = SymMatrix::outer(&[1.0, -1.0, -1.0]);
        let m = kbe_objective_spin(&SymMatrix::zeros(3), &zz, &params).unwrap();
        assert_eq!(m, zz.scaled(-1.0));
    }

    #[test]
    fn nuclear_and_logdet_objectives() {
        assert_eq!(
            nuclear_objective(&SymMatrix::zeros(2), 1.0),
            SymMatrix::identity(2)
        );
        let q = hom2().q;
        assert_eq!(nuclear_objective(&q, 0.0), q);
        let l = 1e-4;
        let m = logdet_objective(&q, &SymMatrix::identity(3), l, 1.0).unwrap();
        assert!(m.distance(&nuclear_objective(&q, l / 2.0)) < 1e-15);
        let m = logdet_objective(&q, &SymMatrix::zeros(3), l, 1e-6).unwrap();
        assert!(m.distance(&nuclear_objective(&q, l / 1e-6)) < 1e-9);
        let bad = SymMatrix::from_diagonal(&[1.0, -1.0, 0.0]);
        assert!(matches!(
            logdet_objective(&q, &bad, l, 1e-6),
            Err(Error::NonPsdIterate { .. })
        ));
    }

    #[test]
    fn unit_diagonal_restoration() {
        let z = SymMatrix::from_row_major(2, &[4.0, 1.0, 1.0, 1.0]).unwrap();
        let r = restore_unit_diagonal(&z);
        assert_eq!(r.diagonal(), vec![1.0, 1.0]);
        assert_eq!(r.get(0, 1), 0.5);
    }
}
