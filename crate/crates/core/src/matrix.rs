//! Dense symmetric matrices.
//!
//! [`SymMatrix`] stores the full `N x N` array in row-major order, but every
//! mutating entry point writes both triangles at once, so `m[(i, j)] ==
//! m[(j, i)]` holds bit-for-bit for every value that can be observed.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            data: vec![0.0; order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_diagonal(&vec![1.0; order])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * m.order + i] = v;
        }
        m
    }

    /// Builds a matrix from `f(i, j)` evaluated on the lower triangle only.
    pub fn from_lower_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in 0..=i {
                let v = f(i, j);
                m.data[i * order + j] = v;
                m.data[j * order + i] = v;
            }
        }
        m
    }

    /// Rank-one outer product `v v^T`.
    pub fn outer(v: &[f64]) -> Self {
        Self::from_lower_fn(v.len(), |i, j| v[i] * v[j])
    }

    /// Builds from a row-major slice. The slice must be exactly symmetric and
    /// finite.
    pub fn from_row_major(order: usize, values: &[f64]) -> Result<Self> {
        if values.len() != order * order {
            return Err(Error::Dimension(format!(
                "expected {} entries for an order-{order} matrix, got {}",
                order * order,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("matrix entry {v}")));
        }
        for i in 0..order {
            for j in 0..i {
                if values[i * order + j] != values[j * order + i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self {
            order,
            data: values.to_vec(),
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    /// Sets entries `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.order + j] = value;
        self.data[j * self.order + i] = value;
    }

    /// Adds `value` to `(i, j)` and, off the diagonal, to `(j, i)`.
    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.order + j] += value;
        if i != j {
            self.data[j * self.order + i] += value;
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.order).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Frobenius inner product `<self, other>`.
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        debug_assert_eq!(self.order, other.order);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.order);
        (0..self.order)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v^T self v`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&mut self, alpha: f64) {
        self.data.iter_mut().for_each(|v| *v *= alpha);
    }

    pub fn scaled(&self, alpha: f64) -> SymMatrix {
        let mut out = self.clone();
        out.scale(alpha);
        out
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: f64, other: &SymMatrix) {
        debug_assert_eq!(self.order, other.order);
        self.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(a, b)| *a += alpha * b);
    }

    /// `self + alpha * other`, as a new matrix.
    pub fn plus_scaled(&self, alpha: f64, other: &SymMatrix) -> SymMatrix {
        let mut out = self.clone();
        out.axpy(alpha, other);
        out
    }

    /// `self += alpha * v v^T`, computed on one triangle so the result stays
    /// exactly symmetric.
    pub fn add_outer(&mut self, alpha: f64, v: &[f64]) {
        let n = self.order;
        debug_assert_eq!(v.len(), n);
        for i in 0..n {
            let s = alpha * v[i];
            for (j, &vj) in v.iter().enumerate().take(i + 1) {
                let value = self.data[i * n + j] + s * vj;
                self.data[i * n + j] = value;
                self.data[j * n + i] = value;
            }
        }
    }

    /// Frobenius distance `||self - other||_F`.
    pub fn distance(&self, other: &SymMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn ensure_order(&self, order: usize, what: &str) -> Result<()> {
        if self.order != order {
            return Err(Error::Dimension(format!(
                "{what}: expected order {order}, got {}",
                self.order
            )));
        }
        Ok(())
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.order + j]
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix({})[", self.order)?;
        for i in 0..self.order {
            writeln!(f, "  {:?},", self.row(i))?;
        }
        write!(f, "]")
    }
}
