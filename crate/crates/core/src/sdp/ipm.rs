//! Infeasible primal-dual path following with the HKM search direction and a
//! Mehrotra predictor-corrector step.
//!
//! Every constraint matrix here has a handful of nonzeros, so the Schur
//! complement `M_ab = tr(A_a X A_b Z^-1)` is assembled entrywise from `X`
//! and `Z^-1` and the cost of an iteration is a few dense `O(N^3)` products.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::solver::LinearConstraint;

pub(crate) struct IpmOutcome {
    pub x: DMatrix<f64>,
    pub z: DMatrix<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
}

/// `(row, col, value)` for both orientations of every off-diagonal triple.
fn oriented(c: &LinearConstraint) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::with_capacity(2 * c.entries().len());
    for &(i, j, v) in c.entries() {
        out.push((i, j, v));
        if i != j {
            out.push((j, i, v));
        }
    }
    out
}

/// `tr(A W)` for a possibly nonsymmetric `W`.
fn apply(a: &[(usize, usize, f64)], w: &DMatrix<f64>) -> f64 {
    a.iter().map(|&(r, s, v)| v * w[(s, r)]).sum()
}

fn add_scaled(a: &[(usize, usize, f64)], alpha: f64, w: &mut DMatrix<f64>) {
    for &(r, s, v) in a {
        w[(r, s)] += alpha * v;
    }
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

fn dot(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Largest `alpha` keeping `X + alpha dX` PSD, given `X = L L^T`.
fn max_step(l: &DMatrix<f64>, dx: &DMatrix<f64>) -> Option<f64> {
    let mut w = l.solve_lower_triangular(dx)?;
    w = l.solve_lower_triangular(&w.transpose())?;
    symmetrize(&mut w);
    let lmin = w.symmetric_eigenvalues().min();
    Some(if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    })
}

/// Iterates until every relative measure is below `target`. The outcome is
/// `converged` once they are below `tol`; after that, a breakdown on the way
/// to `target` returns the last accepted iterate.
pub(crate) fn solve(
    c: &DMatrix<f64>,
    constraints: &[LinearConstraint],
    tol: f64,
    target: f64,
    max_iter: usize,
) -> IpmOutcome {
    let n = c.nrows();
    let p = constraints.len();
    let a: Vec<Vec<(usize, usize, f64)>> = constraints.iter().map(oriented).collect();
    let b = DVector::from_iterator(p, constraints.iter().map(|c| c.rhs));
    let b_norm = b.norm();
    let c_norm = c.norm();

    let nf = n as f64;
    let a_norms: Vec<f64> = a
        .iter()
        .map(|ai| ai.iter().map(|e| e.2 * e.2).sum::<f64>().sqrt())
        .collect();
    let xi = (0..p)
        .map(|i| nf * (1.0 + b[i].abs()) / (1.0 + a_norms[i]))
        .fold(10f64.max(nf.sqrt()), f64::max);
    let eta = a_norms
        .iter()
        .copied()
        .fold(10f64.max(nf.sqrt()).max(c_norm), f64::max);
    let mut x = DMatrix::<f64>::identity(n, n) * xi;
    let mut z = DMatrix::<f64>::identity(n, n) * eta;
    let mut y = DVector::<f64>::zeros(p);

    let mut out = IpmOutcome {
        x: x.clone(),
        z: z.clone(),
        converged: false,
        iterations: 0,
        primal_infeasibility: f64::INFINITY,
        dual_infeasibility: f64::INFINITY,
    };

    for it in 0..=max_iter {
        let rp = DVector::from_iterator(p, (0..p).map(|i| b[i] - apply(&a[i], &x)));
        let mut rd = c - &z;
        for (ai, &yi) in a.iter().zip(y.iter()) {
            add_scaled(ai, -yi, &mut rd);
        }
        let pobj = dot(c, &x);
        let dobj = b.dot(&y);
        let pinf = rp.norm() / (1.0 + b_norm);
        let dinf = rd.norm() / (1.0 + c_norm);
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        if !(pinf.is_finite() && dinf.is_finite() && gap.is_finite()) {
            return out;
        }
        let worst = pinf.max(dinf).max(gap);
        if out.converged && worst > tol {
            // Roundoff has taken over; keep the last good iterate.
            return out;
        }
        out.iterations = it;
        out.primal_infeasibility = rp.norm();
        out.dual_infeasibility = rd.norm();
        out.x.clone_from(&x);
        out.z.clone_from(&z);
        out.converged = worst <= tol;
        if worst <= target || it == max_iter {
            return out;
        }

        let mu = dot(&x, &z) / nf;
        let (Some(xc), Some(zc)) = (Cholesky::new(x.clone()), Cholesky::new(z.clone())) else {
            return out;
        };
        let lx = xc.l();
        let lz = zc.l();
        let zinv = zc.inverse();

        let mut m = DMatrix::<f64>::zeros(p, p);
        for i in 0..p {
            for j in i..p {
                // tr(e_r e_s^T X e_u e_v^T Zinv) = X[s][u] Zinv[v][r]
                let mut acc = 0.0;
                for &(r, s, va) in &a[i] {
                    for &(u, v, vb) in &a[j] {
                        acc += va * vb * x[(s, u)] * zinv[(v, r)];
                    }
                }
                m[(i, j)] = acc;
                m[(j, i)] = acc;
            }
        }
        let Some(mc) = Cholesky::<f64, Dyn>::new(m) else {
            return out;
        };
        let x_rd_zinv = &x * &rd * &zinv;
        let base_rhs = DVector::from_iterator(p, (0..p).map(|i| rp[i] + apply(&a[i], &x_rd_zinv)));

        let direction = |k: &DMatrix<f64>| {
            let rhs = DVector::from_iterator(p, (0..p).map(|i| base_rhs[i] - apply(&a[i], k)));
            let dy = mc.solve(&rhs);
            let mut dz = rd.clone();
            for (ai, &v) in a.iter().zip(dy.iter()) {
                add_scaled(ai, -v, &mut dz);
            }
            symmetrize(&mut dz);
            let mut dx = k - &x * &dz * &zinv;
            symmetrize(&mut dx);
            (dx, dy, dz)
        };

        let (dx_p, _, dz_p) = direction(&(-&x));
        let (Some(sp), Some(sd)) = (max_step(&lx, &dx_p), max_step(&lz, &dz_p)) else {
            return out;
        };
        let (ap, ad) = (sp.min(1.0), sd.min(1.0));
        let mu_aff = dot(&(&x + &dx_p * ap), &(&z + &dz_p * ad)) / nf;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        let k = &zinv * (sigma * mu) - &x - &dx_p * &dz_p * &zinv;
        let (dx, dy, dz) = direction(&k);
        let (Some(sp), Some(sd)) = (max_step(&lx, &dx), max_step(&lz, &dz)) else {
            return out;
        };
        let gamma = 0.9 + 0.09 * ap.min(ad);
        let ap = (gamma * sp).min(1.0);
        let ad = (gamma * sd).min(1.0);
        x += &dx * ap;
        y += &dy * ad;
        z += &dz * ad;
        symmetrize(&mut x);
        symmetrize(&mut z);
    }
    out
}
