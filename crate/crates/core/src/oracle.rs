//! Exhaustive minimization over `{0,1}^n`.
//!
//! Candidates are visited in Gray-code order so each step flips one bit and
//! updates `C x`, `A x - b` and the objective incrementally. The running
//! vectors are recomputed from scratch periodically to bound drift, and the
//! reported optimum is re-evaluated exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::problem::BooleanQpInstance;

pub const MAX_ORACLE_N: usize = 24;

const RESYNC_EVERY: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub x_opt: Vec<u8>,
    pub value: f64,
    /// The runner-up value exceeds the optimum by more than `1e-9 (1 + |best|)`.
    pub unique: bool,
    pub evaluated: u64,
}

struct State {
    x: Vec<u8>,
    cx: Vec<f64>,
    r: Vec<f64>,
    quad: f64,
    lin: f64,
}

impl State {
    fn fresh(inst: &BooleanQpInstance, x: Vec<u8>) -> Self {
        let xf: Vec<f64> = x.iter().map(|&v| f64::from(v)).collect();
        let cx = inst.c().mul_vec(&xf);
        let quad = cx.iter().zip(&xf).map(|(a, b)| a * b).sum();
        let lin = 2.0 * inst.d().iter().zip(&xf).map(|(a, b)| a * b).sum::<f64>();
        Self {
            r: inst.residual(&xf),
            x,
            cx,
            quad,
            lin,
        }
    }

    fn value(&self, mu: f64) -> f64 {
        self.quad + self.lin + mu * self.r.iter().map(|v| v * v).sum::<f64>()
    }

    fn flip(&mut self, inst: &BooleanQpInstance, j: usize) {
        let delta = if self.x[j] == 0 { 1.0 } else { -1.0 };
        self.x[j] ^= 1;
        let c = inst.c();
        self.quad += 2.0 * delta * self.cx[j] + c.get(j, j);
        for (i, v) in self.cx.iter_mut().enumerate() {
            *v += delta * c.get(i, j);
        }
        self.lin += 2.0 * delta * inst.d()[j];
        let n = inst.n();
        for (i, v) in self.r.iter_mut().enumerate() {
            *v += delta * inst.a()[i * n + j];
        }
    }
}

pub fn brute_force(inst: &BooleanQpInstance) -> Result<OracleResult> {
    let n = inst.n();
    if n > MAX_ORACLE_N {
        return Err(Error::OracleTooLarge {
            n,
            max: MAX_ORACLE_N,
        });
    }
    let mu = inst.mu();
    let mut state = State::fresh(inst, vec![0; n]);
    let mut best_x = state.x.clone();
    let mut best = state.value(mu);
    let mut second = f64::INFINITY;
    let total: u64 = 1 << n;

    for step in 1..total {
        // Gray code: step s flips the bit at the position of s's lowest set bit.
        let j = step.trailing_zeros() as usize;
        state.flip(inst, j);
        if step % RESYNC_EVERY == 0 {
            state = State::fresh(inst, std::mem::take(&mut state.x));
        }
        let v = state.value(mu);
        if v < best || (v == best && state.x < best_x) {
            second = second.min(best);
            best = v;
            best_x.clone_from(&state.x);
        } else {
            second = second.min(v);
        }
    }

    let xf: Vec<f64> = best_x.iter().map(|&v| f64::from(v)).collect();
    let value = inst.objective(&xf)?;
    Ok(OracleResult {
        unique: second - value > 1e-9 * (1.0 + value.abs()),
        x_opt: best_x,
        value,
        evaluated: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SymMatrix;

    #[test]
    fn unique_least_squares_solution() {
        let inst = BooleanQpInstance::linear_system(2, 1, vec![1.0, 2.0], vec![2.0]).unwrap();
        let r = brute_force(&inst).unwrap();
        assert_eq!(r.x_opt, vec![0, 1]);
        assert_eq!(r.value, 0.0);
        assert!(r.unique);
        assert_eq!(r.evaluated, 4);
    }

    #[test]
    fn tie_reports_non_unique_and_lexicographic_argmin() {
        let inst = BooleanQpInstance::linear_system(2, 1, vec![1.0, 1.0], vec![1.0]).unwrap();
        let r = brute_force(&inst).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(!r.unique);
        assert_eq!(r.x_opt, vec![0, 1]);
    }

    #[test]
    fn psd_form_with_zero_rhs_is_minimized_at_zero() {
        let c = SymMatrix::from_row_major(3, &[2., 1., 0., 1., 2., 1., 0., 1., 2.]).unwrap();
        let inst = BooleanQpInstance::new(c, vec![0.0; 3], 1, vec![1.0, -1.0, 2.0], vec![0.0], 1.0)
            .unwrap();
        let r = brute_force(&inst).unwrap();
        assert_eq!(r.x_opt, vec![0, 0, 0]);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn too_large_is_rejected() {
        let n = MAX_ORACLE_N + 1;
        let inst = BooleanQpInstance::linear_system(n, 1, vec![1.0; n], vec![0.0]).unwrap();
        assert!(matches!(
            brute_force(&inst),
            Err(Error::OracleTooLarge { n: 25, max: 24 })
        ));
    }
}
