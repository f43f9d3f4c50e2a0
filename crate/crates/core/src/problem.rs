//! Boolean quadratic programs and their exact reformulations.
//!
//! An instance describes
//!
//! ```text
//! min_{x in {0,1}^n}  x^T C x + 2 d^T x + mu ||A x - b||^2
//! ```
//!
//! Appending a slack coordinate `x0 = 1` folds everything into one quadratic
//! form `xbar^T Q xbar` ([`HomogenizedProblem`]); substituting `z = 2 xbar - 1`
//! gives the equivalent +-1 problem `min z^T R z` ([`SpinProblem`]).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct BooleanQpInstance {
    n: usize,
    m: usize,
    c: SymMatrix,
    d: Vec<f64>,
    /// Row-major `m x n`.
    a: Vec<f64>,
    b: Vec<f64>,
    mu: f64,
    /// Planted solution, when the instance came from a generator.
    pub x_true: Option<Vec<u8>>,
    /// Known number of ones in the solution.
    pub k: Option<usize>,
    pub seed: Option<u64>,
}

impl BooleanQpInstance {
    pub fn new(
        c: SymMatrix,
        d: Vec<f64>,
        m: usize,
        a: Vec<f64>,
        b: Vec<f64>,
        mu: f64,
    ) -> Result<Self> {
        let n = c.order();
        if d.len() != n {
            return Err(Error::Dimension(format!(
                "d has {} entries, C has order {n}",
                d.len()
            )));
        }
        if a.len() != m * n {
            return Err(Error::Dimension(format!(
                "A has {} entries, expected m*n = {m}*{n}",
                a.len()
            )));
        }
        if b.len() != m {
            return Err(Error::Dimension(format!(
                "b has {} entries, A has {m} rows",
                b.len()
            )));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "mu must be positive, got {mu}"
            )));
        }
        if !c.is_finite() || d.iter().chain(&a).chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("instance data".into()));
        }
        Ok(Self {
            n,
            m,
            c,
            d,
            a,
            b,
            mu,
            x_true: None,
            k: None,
            seed: None,
        })
    }

    /// The pure least-squares instance `min ||A x - b||^2` (C = 0, d = 0, mu = 1).
    pub fn linear_system(n: usize, m: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Self::new(SymMatrix::zeros(n), vec![0.0; n], m, a, b, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn c(&self) -> &SymMatrix {
        &self.c
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn a_row(&self, i: usize) -> &[f64] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// True when C and d vanish, so the objective is `mu ||A x - b||^2` and a
    /// zero residual certifies a global minimizer.
    pub fn is_linear_system(&self) -> bool {
        self.c.as_slice().iter().all(|&v| v == 0.0) && self.d.iter().all(|&v| v == 0.0)
    }

    /// `A x - b`.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        (0..self.m)
            .map(|i| dot(self.a_row(i), x) - self.b[i])
            .collect()
    }

    /// `x^T C x + 2 d^T x + mu ||A x - b||^2`.
    pub fn objective(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::Dimension(format!(
                "vector has {} entries, instance has n = {}",
                x.len(),
                self.n
            )));
        }
        let r = self.residual(x);
        Ok(self.c.quad_form(x) + 2.0 * dot(&self.d, x) + self.mu * dot(&r, &r))
    }

    /// Appends the row `1^T x = k` to `A x = b`.
    pub fn with_cardinality_row(&self, k: usize) -> Self {
        let mut out = self.clone();
        out.a.extend(std::iter::repeat_n(1.0, self.n));
        out.b.push(k as f64);
        out.m += 1;
        out.k = Some(k);
        out
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json_str(&text).map_err(|e| Error::Parse {
            path: path.to_owned(),
            message: e.to_string(),
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        file.try_into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&InstanceFile::from(self)).expect("instance serializes")
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_string()).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })
    }
}

/// On-disk instance layout. Matrices are row-major flat arrays.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: usize,
    m: usize,
    #[serde(rename = "A")]
    a: Vec<f64>,
    b: Vec<f64>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    c: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x_true: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

impl TryFrom<InstanceFile> for BooleanQpInstance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        let c = match f.c {
            Some(values) => SymMatrix::from_row_major(f.n, &values)?,
            None => SymMatrix::zeros(f.n),
        };
        let d = f.d.unwrap_or_else(|| vec![0.0; f.n]);
        let mut inst = Self::new(c, d, f.m, f.a, f.b, f.mu.unwrap_or(1.0))?;
        if let Some(x) = &f.x_true {
            if x.len() != f.n {
                return Err(Error::Dimension(format!(
                    "x_true has {} entries, n = {}",
                    x.len(),
                    f.n
                )));
            }
            if let Some(i) = x.iter().position(|&v| v > 1) {
                return Err(Error::NotBinary {
                    index: i,
                    value: f64::from(x[i]),
                    expected: "0 or 1",
                });
            }
        }
        if let Some(k) = f.k {
            if k > f.n {
                return Err(Error::InvalidParameter(format!(
                    "k = {k} exceeds n = {}",
                    f.n
                )));
            }
        }
        inst.x_true = f.x_true;
        inst.k = f.k;
        inst.seed = f.seed;
        Ok(inst)
    }
}

impl From<&BooleanQpInstance> for InstanceFile {
    fn from(inst: &BooleanQpInstance) -> Self {
        let has_c = inst.c.as_slice().iter().any(|&v| v != 0.0);
        let has_d = inst.d.iter().any(|&v| v != 0.0);
        Self {
            n: inst.n,
            m: inst.m,
            a: inst.a.clone(),
            b: inst.b.clone(),
            c: has_c.then(|| inst.c.as_slice().to_vec()),
            d: has_d.then(|| inst.d.clone()),
            mu: (inst.mu != 1.0).then_some(inst.mu),
            x_true: inst.x_true.clone(),
            k: inst.k,
            seed: inst.seed,
        }
    }
}

/// `min xbar^T Q xbar` over `xbar = (1, x)`, `x` binary.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogenizedProblem {
    pub q: SymMatrix,
    pub n: usize,
}

/// `min z^T R z` over spin vectors; `4 xbar^T Q xbar = z^T R z + offset`
/// whenever `z = 2 xbar - 1` and `xbar_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinProblem {
    pub r: SymMatrix,
    pub offset: f64,
    pub n: usize,
}

/// `Q = [[0, d^T], [d, C]] + mu (-b | A)^T (-b | A)`.
pub fn build_homogenized(inst: &BooleanQpInstance) -> HomogenizedProblem {
    let n = inst.n;
    let mut q = SymMatrix::zeros(n + 1);
    for i in 0..n {
        q.set(0, i + 1, inst.d[i]);
        for j in 0..=i {
            q.set(i + 1, j + 1, inst.c.get(i, j));
        }
    }
    let mut row = vec![0.0; n + 1];
    for r in 0..inst.m {
        row[0] = -inst.b[r];
        row[1..].copy_from_slice(inst.a_row(r));
        q.add_outer(inst.mu, &row);
    }
    HomogenizedProblem { q, n }
}

/// `R = Q + e0 q^T + q e0^T` with `q = Q 1`, and `offset = 1^T Q 1`.
pub fn build_spin(hom: &HomogenizedProblem) -> SpinProblem {
    let order = hom.q.order();
    let q1 = hom.q.mul_vec(&vec![1.0; order]);
    let mut r = hom.q.clone();
    for (j, &qj) in q1.iter().enumerate() {
        r.add_at(0, j, qj);
    }
    // (0, 0) picks up q_0 from both rank-one terms.
    r.add_at(0, 0, q1[0]);
    SpinProblem {
        r,
        offset: q1.iter().sum(),
        n: hom.n,
    }
}

pub fn boolean_to_spin(x: &[u8]) -> Result<Vec<i8>> {
    x.iter()
        .enumerate()
        .map(|(i, &v)| match v {
            0 => Ok(-1),
            1 => Ok(1),
            _ => Err(Error::NotBinary {
                index: i,
                value: f64::from(v),
                expected: "0 or 1",
            }),
        })
        .collect()
}

pub fn spin_to_boolean(z: &[i8]) -> Result<Vec<u8>> {
    z.iter()
        .enumerate()
        .map(|(i, &v)| match v {
            -1 => Ok(0),
            1 => Ok(1),
            _ => Err(Error::NotBinary {
                index: i,
                value: f64::from(v),
                expected: "-1 or 1",
            }),
        })
        .collect()
}

/// `v^T M v`, with a dimension check.
pub fn objective_quadratic(m: &SymMatrix, v: &[f64]) -> Result<f64> {
    if v.len() != m.order() {
        return Err(Error::Dimension(format!(
            "vector has {} entries, matrix has order {}",
            v.len(),
            m.order()
        )));
    }
    Ok(m.quad_form(v))
}

/// `(1, x)` as reals.
pub fn augment(x: &[u8]) -> Vec<f64> {
    std::iter::once(1.0)
        .chain(x.iter().map(|&v| f64::from(v)))
        .collect()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
