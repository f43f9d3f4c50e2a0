//! Reading binary candidates off relaxed solutions, and certifying them.
//!
//! On an exact rank-one solution the candidate is column 0 of the matrix
//! (entries `1..n`); in the Boolean form the diagonal carries the same values,
//! and any disagreement between the two is folded into the binarity defect.

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;
use crate::problem::BooleanQpInstance;
use crate::sdp::eig_sym;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Rank one when `lambda2 <= rank_ratio * max(lambda1, 1)`.
    pub rank_ratio: f64,
    /// Largest accepted distance of a candidate entry from the alphabet.
    pub binarity: f64,
    /// Certification bound on `||A x - b|| / (1 + ||b||)`.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_ratio: 1e-4,
            binarity: 1e-3,
            residual: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionReport {
    pub x_candidate: Vec<f64>,
    /// Candidate rounded to {0,1}, present only when the defect is within
    /// tolerance.
    pub rounded: Option<Vec<u8>>,
    pub rank1: bool,
    pub lambda1: f64,
    pub lambda2: f64,
    pub binarity_defect: f64,
    /// Rank one and within binarity tolerance. Callers with linear-system
    /// data tighten this with [`certify`].
    pub certified: bool,
}

fn leading_pair(x: &SymMatrix) -> Result<(f64, f64)> {
    let eigs = eig_sym(x)?;
    let l1 = eigs.eigenvalues.first().copied().unwrap_or(0.0);
    let l2 = eigs.eigenvalues.get(1).copied().unwrap_or(0.0);
    Ok((l1, l2))
}

fn is_rank1(l1: f64, l2: f64, tol: f64) -> bool {
    l1 > tol && l2 <= tol * l1.max(1.0)
}

pub fn extract_boolean(x: &SymMatrix, tol: &Tolerances) -> Result<ExtractionReport> {
    let n = x.order().saturating_sub(1);
    let candidate: Vec<f64> = (1..=n).map(|i| x.get(i, 0)).collect();
    let mut defect = candidate
        .iter()
        .map(|&c| c.abs().min((c - 1.0).abs()))
        .fold(0.0, f64::max);
    let diag_gap = (1..=n)
        .map(|i| (x.get(i, i) - x.get(i, 0)).abs())
        .fold(0.0, f64::max);
    defect = defect.max(diag_gap);
    let (l1, l2) = leading_pair(x)?;
    let rank1 = is_rank1(l1, l2, tol.rank_ratio);
    let rounded =
        (defect <= tol.binarity).then(|| candidate.iter().map(|&c| u8::from(c >= 0.5)).collect());
    Ok(ExtractionReport {
        certified: rank1 && rounded.is_some(),
        x_candidate: candidate,
        rounded,
        rank1,
        lambda1: l1,
        lambda2: l2,
        binarity_defect: defect,
    })
}

pub fn extract_spin(z: &SymMatrix, tol: &Tolerances) -> Result<ExtractionReport> {
    let n = z.order().saturating_sub(1);
    let sign = if z.get(0, 0) < 0.0 { -1.0 } else { 1.0 };
    let column: Vec<f64> = (0..=n).map(|i| sign * z.get(i, 0)).collect();
    let defect = column
        .iter()
        .map(|&c| (c - 1.0).abs().min((c + 1.0).abs()))
        .fold(0.0, f64::max);
    let (l1, l2) = leading_pair(z)?;
    let rank1 = is_rank1(l1, l2, tol.rank_ratio);
    let candidate: Vec<f64> = column[1..].iter().map(|&c| 0.5 * (c + 1.0)).collect();
    let rounded =
        (defect <= tol.binarity).then(|| column[1..].iter().map(|&c| u8::from(c >= 0.0)).collect());
    Ok(ExtractionReport {
        certified: rank1 && rounded.is_some(),
        x_candidate: candidate,
        rounded,
        rank1,
        lambda1: l1,
        lambda2: l2,
        binarity_defect: defect,
    })
}

/// Exact check that a binary `x` solves the instance's linear system, and
/// matches the known cardinality when one is attached.
pub fn certify(x: &[u8], instance: &BooleanQpInstance, residual_tol: f64) -> Result<bool> {
    if x.len() != instance.n() {
        return Err(Error::Dimension(format!(
            "candidate has {} entries, n = {}",
            x.len(),
            instance.n()
        )));
    }
    if let Some(i) = x.iter().position(|&v| v > 1) {
        return Err(Error::NotBinary {
            index: i,
            value: f64::from(x[i]),
            expected: "0 or 1",
        });
    }
    let xf: Vec<f64> = x.iter().map(|&v| f64::from(v)).collect();
    let r = instance.residual(&xf);
    let r_norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    let b_norm = instance.b().iter().map(|v| v * v).sum::<f64>().sqrt();
    if r_norm > residual_tol * (1.0 + b_norm) {
        return Ok(false);
    }
    if let Some(k) = instance.k {
        if x.iter().map(|&v| usize::from(v)).sum::<usize>() != k {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Final certification of an extraction report.
///
/// With linear-system data the rounded candidate must also pass [`certify`];
/// otherwise rank one plus binarity is the certificate.
pub fn certify_report(
    report: &ExtractionReport,
    instance: Option<&BooleanQpInstance>,
    tol: &Tolerances,
) -> Result<bool> {
    if !report.certified {
        return Ok(false);
    }
    match (instance, &report.rounded) {
        (Some(inst), Some(x)) if inst.is_linear_system() => certify(x, inst, tol.residual),
        (_, Some(_)) => Ok(true),
        (_, None) => Ok(false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::augment;

    #[test]
    fn exact_rank_one_boolean() {
        let x = SymMatrix::outer(&augment(&[1, 0, 1]));
        let r = extract_boolean(&x, &Tolerances::default()).unwrap();
        assert_eq!(r.x_candidate, vec![1.0, 0.0, 1.0]);
        assert!(r.rank1);
        assert_eq!(r.binarity_defect, 0.0);
        assert_eq!(r.rounded, Some(vec![1, 0, 1]));
        assert!(r.certified);
    }

    #[test]
    fn identity_is_not_rank_one() {
        let r = extract_boolean(&SymMatrix::identity(3), &Tolerances::default()).unwrap();
        assert_eq!(r.lambda2, 1.0);
        assert!(!r.rank1);
        assert!(!r.certified);
        let r = extract_spin(&SymMatrix::identity(3), &Tolerances::default()).unwrap();
        assert!(!r.rank1);
    }

    #[test]
    fn zero_matrix_is_degenerate() {
        let r = extract_boolean(&SymMatrix::zeros(3), &Tolerances::default()).unwrap();
        assert!(!r.rank1);
    }

    #[test]
    fn two_point_mixture_is_fractional() {
        let mut x = SymMatrix::outer(&augment(&[1, 0, 1]));
        x.scale(0.5);
        x.add_outer(0.5, &augment(&[0, 1, 1]));
        let r = extract_boolean(&x, &Tolerances::default()).unwrap();
        assert!(!r.rank1);
        assert!(r.binarity_defect > 0.4);
        assert!(r.rounded.is_none());
    }

    #[test]
    fn spin_extraction_and_sign_invariance() {
        let z = [1.0, -1.0, 1.0];
        let r = extract_spin(&SymMatrix::outer(&z), &Tolerances::default()).unwrap();
        assert_eq!(r.x_candidate, vec![0.0, 1.0]);
        assert!(r.rank1);
        let neg: Vec<f64> = z.iter().map(|v| -v).collect();
        let r2 = extract_spin(&SymMatrix::outer(&neg), &Tolerances::default()).unwrap();
        assert_eq!(r, r2);
    }

    #[test]
    fn certify_linear_systems() {
        let inst = BooleanQpInstance::linear_system(2, 1, vec![1.0, 2.0], vec![2.0]).unwrap();
        assert!(certify(&[0, 1], &inst, 1e-6).unwrap());
        assert!(!certify(&[1, 1], &inst, 1e-6).unwrap());
        assert!(certify(&[2, 1], &inst, 1e-6).is_err());
        let zero = BooleanQpInstance::linear_system(2, 1, vec![1.0, 2.0], vec![0.0]).unwrap();
        assert!(certify(&[0, 0], &zero, 1e-6).unwrap());
        let mut with_k = inst.clone();
        with_k.k = Some(2);
        assert!(!certify(&[0, 1], &with_k, 1e-6).unwrap());
    }
}
