//! Checks shared by the property suites and the acceptance run. Each returns
//! `Err` with a description of the first violation.
#![allow(dead_code)]

use boolsdr::matrix::SymMatrix;
use boolsdr::problem::{augment, build_homogenized, build_spin, BooleanQpInstance};
use boolsdr::relax::{
    binary_eigen_penalty, kbe_objective_boolean, restore_unit_diagonal, PenaltyParams,
};
use boolsdr::sdp::{eig_sym, project_psd};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

pub type Check = Result<(), String>;

pub fn gaussian_sym<R: Rng>(rng: &mut R, order: usize, scale: f64) -> SymMatrix {
    SymMatrix::from_lower_fn(order, |_, _| scale * rng.sample::<f64, _>(StandardNormal))
}

pub fn random_bits<R: Rng>(rng: &mut R, n: usize) -> Vec<u8> {
    (0..n).map(|_| u8::from(rng.gen::<bool>())).collect()
}

pub fn random_spins<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
        .collect()
}

/// A general quadratic instance with random `C`, `d`, `A`, `b` and `mu`.
pub fn random_qp<R: Rng>(rng: &mut R, n: usize, m: usize) -> BooleanQpInstance {
    let c = gaussian_sym(rng, n, 1.0);
    let d = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let a = (0..m * n).map(|_| rng.sample(StandardNormal)).collect();
    let b = (0..m)
        .map(|_| 3.0 * rng.sample::<f64, _>(StandardNormal))
        .collect();
    let mu = rng.gen_range(0.1..10.0);
    BooleanQpInstance::new(c, d, m, a, b, mu).unwrap()
}

/// `V diag(v) V^T` with `V` a random orthogonal matrix.
pub fn with_spectrum<R: Rng>(rng: &mut R, v: &[f64]) -> SymMatrix {
    let n = v.len();
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let q = g.qr().q();
    let m = &q * DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(v)) * q.transpose();
    SymMatrix::from_lower_fn(n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

/// Nearby point of `{Z PSD, diag(Z) = 1}`: clamp the spectrum, then rescale
/// to unit diagonal.
pub fn unit_diagonal_psd(m: &SymMatrix) -> SymMatrix {
    restore_unit_diagonal(&project_psd(m).unwrap())
}

pub fn homogenization_identity(inst: &BooleanQpInstance, x: &[u8]) -> Check {
    let hom = build_homogenized(inst);
    let xbar = augment(x);
    let lhs = hom.q.quad_form(&xbar);
    let xf: Vec<f64> = x.iter().map(|&v| f64::from(v)).collect();
    let rhs = inst.objective(&xf).unwrap();
    let scale = 1.0
        + (0..xbar.len())
            .flat_map(|i| (0..xbar.len()).map(move |j| (i, j)))
            .map(|(i, j)| (hom.q.get(i, j) * xbar[i] * xbar[j]).abs())
            .sum::<f64>();
    if (lhs - rhs).abs() > 1e-10 * scale {
        return Err(format!("xbar'Qxbar = {lhs}, objective = {rhs}"));
    }
    Ok(())
}

pub fn spin_identity(inst: &BooleanQpInstance, x: &[u8]) -> Check {
    let hom = build_homogenized(inst);
    let spin = build_spin(&hom);
    let xbar = augment(x);
    let z: Vec<f64> = xbar.iter().map(|&v| 2.0 * v - 1.0).collect();
    let lhs = 4.0 * hom.q.quad_form(&xbar);
    let rhs = spin.r.quad_form(&z) + spin.offset;
    let abs_sum = |m: &SymMatrix| m.as_slice().iter().map(|v| v.abs()).sum::<f64>();
    let scale = 1.0 + 4.0 * abs_sum(&hom.q) + abs_sum(&spin.r) + spin.offset.abs();
    if (lhs - rhs).abs() > 1e-10 * scale {
        return Err(format!("4 xbar'Qxbar = {lhs}, z'Rz + offset = {rhs}"));
    }
    for m in [&hom.q, &spin.r] {
        let n = m.order();
        for i in 0..n {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(format!("asymmetric at ({i},{j})"));
                }
            }
        }
    }
    Ok(())
}

pub fn projection_properties(m1: &SymMatrix, m2: &SymMatrix) -> Check {
    let p1 = project_psd(m1).unwrap();
    let p2 = project_psd(m2).unwrap();
    let pp = project_psd(&p1).unwrap();
    let drift = pp.distance(&p1);
    if drift > 1e-8 * (1.0 + p1.frobenius_norm()) {
        return Err(format!("projection moved a projected point by {drift:e}"));
    }
    let lhs = p1.distance(&p2);
    let rhs = m1.distance(m2);
    if lhs > rhs + 1e-8 {
        return Err(format!("|P(M1)-P(M2)| = {lhs} > |M1-M2| = {rhs}"));
    }
    let lmin = eig_sym(&p1).unwrap().min_eigenvalue();
    if lmin < -1e-10 * (1.0 + p1.frobenius_norm()) {
        return Err(format!("projection has eigenvalue {lmin:e}"));
    }
    Ok(())
}

fn spectrum_is(z: &SymMatrix, top: f64, tol: f64) -> bool {
    let v = eig_sym(z).unwrap().eigenvalues;
    (v[0] - top).abs() <= tol && v[1..].iter().all(|x| x.abs() <= tol)
}

/// `<Z,Z> <= (n+1)^2` on a unit-diagonal PSD `Z`, with equality exactly at
/// the spectrum `(n+1, 0, ..., 0)`. `rank_one` marks samples known to be
/// `z z^T`, where equality must hold.
pub fn energy_bound(z: &SymMatrix, rank_one: bool) -> Check {
    let order = z.order() as f64;
    let bound = order * order;
    let energy = z.dot(z);
    if energy > bound + 1e-6 {
        return Err(format!("<Z,Z> = {energy} exceeds {bound}"));
    }
    let at_max = (energy - bound).abs() <= 1e-6;
    if at_max && !spectrum_is(z, order, 1e-4) {
        return Err(format!("<Z,Z> = {energy} at the maximum without rank one"));
    }
    if rank_one && !at_max {
        return Err(format!("rank-one Z has <Z,Z> = {energy}, expected {bound}"));
    }
    Ok(())
}

/// `h tr(X) - <X,X> >= 0` for spectra in `[0, h]`, vanishing exactly on
/// spectra in `{0, h}`. `snapped` marks samples whose spectrum was drawn
/// from `{0, h}`.
pub fn penalty_nonnegativity(x: &SymMatrix, eigenvalues: &[f64], h: f64, snapped: bool) -> Check {
    let p = binary_eigen_penalty(x, h);
    let expanded: f64 = eigenvalues.iter().map(|v| h * v - v * v).sum();
    if (p - expanded).abs() > 1e-8 * (1.0 + h * h * eigenvalues.len() as f64) {
        return Err(format!("penalty {p} differs from spectral sum {expanded}"));
    }
    if p < -1e-8 {
        return Err(format!("penalty {p} is negative"));
    }
    let zero = p.abs() <= 1e-6;
    let binary = eigenvalues
        .iter()
        .all(|&v| v.abs() <= 1e-4 || (v - h).abs() <= 1e-4);
    if zero && !binary {
        return Err(format!("penalty vanishes on spectrum {eigenvalues:?}"));
    }
    if snapped && !zero {
        return Err(format!("penalty {p} nonzero on spectrum {eigenvalues:?}"));
    }
    Ok(())
}

pub fn inner_product_inequality(a: &SymMatrix, b: &SymMatrix) -> Check {
    let (ab, aa, bb) = (a.dot(b), a.dot(a), b.dot(b));
    if 2.0 * ab > aa + bb + 1e-10 * (1.0 + aa + bb) {
        return Err(format!("2<A,B> = {} > {}", 2.0 * ab, aa + bb));
    }
    Ok(())
}

pub fn kbe_objective_identity(
    q: &SymMatrix,
    prev: &SymMatrix,
    x: &SymMatrix,
    params: &PenaltyParams,
) -> Check {
    let m = kbe_objective_boolean(q, prev, params).unwrap();
    let lhs = m.dot(x);
    let (qx, tr, px) = (q.dot(x), x.trace(), prev.dot(x));
    let rhs = qx + params.lambda * (params.h * tr - px);
    let scale = 1.0 + qx.abs() + params.lambda * (params.h * tr.abs() + px.abs());
    if (lhs - rhs).abs() > 1e-10 * scale {
        return Err(format!("<M,X> = {lhs}, expanded = {rhs}"));
    }
    Ok(())
}

/// Over `v0 + v1 = 2` on a grid, `v0^2 + v1^2` peaks only at the endpoints.
pub fn two_d_energy_grid(steps: usize) -> Check {
    let energies: Vec<(f64, f64)> = (0..=steps)
        .map(|i| {
            let v0 = 2.0 * i as f64 / steps as f64;
            let v1 = 2.0 - v0;
            (v0, v0 * v0 + v1 * v1)
        })
        .collect();
    let max = energies.iter().map(|e| e.1).fold(f64::MIN, f64::max);
    for &(v0, e) in &energies {
        let endpoint = v0 == 0.0 || v0 == 2.0;
        if endpoint != (e == max) {
            return Err(format!("energy {e} at v0 = {v0}, max {max}"));
        }
    }
    Ok(())
}
