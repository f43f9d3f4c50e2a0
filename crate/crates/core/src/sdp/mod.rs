//! Solvers for standard-form semidefinite programs
//!
//! ```text
//! min <C, X>   s.t.  <A_j, X> = b_j  (j = 1..p),   X PSD
//! ```
//!
//! The default backend is a primal-dual interior-point method. When it
//! does not reach tolerance the solve is repeated with ADMM, which also
//! serves as the infeasibility detector.
//!
//! ADMM alternates an affine projection (closed form, via a Cholesky factor
//! of the constraint Gram matrix computed once per constraint set) with an
//! eigenvalue-clamping projection onto the cone and a scaled dual update.

mod eig;
mod ipm;
mod solver;

pub use eig::{eig_call_count, eig_sym, project_psd, SpectralInfo};
pub use solver::{
    solve, solve_warm, AffineProjector, LinearConstraint, SdpBackend, SdpConfig, SdpProblem,
    SdpSolution, SdpSolver, SdpStatus, WarmStart,
};
