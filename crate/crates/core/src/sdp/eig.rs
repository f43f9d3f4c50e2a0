//! Symmetric eigendecomposition and projection onto the PSD cone.

use std::cell::Cell;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;

thread_local! {
    static EIG_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Number of [`eig_sym`] calls made on the current thread so far.
///
/// Callers measure work by differencing two readings around an operation.
pub fn eig_call_count() -> u64 {
    EIG_CALLS.with(Cell::get)
}

/// Eigenpairs of a symmetric matrix, eigenvalues sorted in descending order.
#[derive(Debug, Clone)]
pub struct SpectralInfo {
    pub eigenvalues: Vec<f64>,
    order: usize,
    /// Eigenvector `k` occupies `vectors[k * order..(k + 1) * order]`.
    vectors: Vec<f64>,
}

impl SpectralInfo {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.order..(k + 1) * self.order]
    }

    /// `sum_k f(v_k) u_k u_k^T` over the eigenpairs selected by `keep`.
    pub fn reconstruct_with(&self, mut f: impl FnMut(f64) -> Option<f64>) -> SymMatrix {
        let mut out = SymMatrix::zeros(self.order);
        for (k, &v) in self.eigenvalues.iter().enumerate() {
            if let Some(w) = f(v) {
                if w != 0.0 {
                    out.add_outer(w, self.vector(k));
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> SymMatrix {
        self.reconstruct_with(Some)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

pub fn eig_sym(m: &SymMatrix) -> Result<SpectralInfo> {
    if !m.is_finite() {
        return Err(Error::NonFinite("eigendecomposition input".into()));
    }
    EIG_CALLS.with(|c| c.set(c.get() + 1));
    let n = m.order();
    if n == 0 {
        return Ok(SpectralInfo {
            eigenvalues: Vec::new(),
            order: 0,
            vectors: Vec::new(),
        });
    }
    // Row-major and column-major layouts coincide for a symmetric matrix.
    let dm = DMatrix::from_column_slice(n, n, m.as_slice());
    let eig = dm.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &idx {
        vectors.extend_from_slice(eig.eigenvectors.column(k).as_slice());
    }
    Ok(SpectralInfo {
        eigenvalues: idx.iter().map(|&k| eig.eigenvalues[k]).collect(),
        order: n,
        vectors,
    })
}

/// Frobenius-nearest PSD matrix: clamps negative eigenvalues to zero.
pub fn project_psd(m: &SymMatrix) -> Result<SymMatrix> {
    Ok(project_psd_with_spectrum(m)?.0)
}

/// Same as [`project_psd`], also returning the spectrum of the input.
pub(crate) fn project_psd_with_spectrum(m: &SymMatrix) -> Result<(SymMatrix, SpectralInfo)> {
    let eigs = eig_sym(m)?;
    let positives = eigs.eigenvalues.iter().filter(|&&v| v > 0.0).count();
    // Sum whichever side of the spectrum has fewer terms.
    let out = if 2 * positives <= eigs.order {
        eigs.reconstruct_with(|v| (v > 0.0).then_some(v))
    } else {
        let mut out = m.clone();
        for (k, &v) in eigs.eigenvalues.iter().enumerate() {
            if v < 0.0 {
                out.add_outer(-v, eigs.vector(k));
            }
        }
        out
    };
    Ok((out, eigs))
}
