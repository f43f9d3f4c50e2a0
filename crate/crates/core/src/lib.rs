//! Semidefinite relaxations of Boolean quadratic programs, with a concave
//! eigenvalue penalty that steers relaxed solutions toward rank one.

pub mod bench;
pub mod cli;
pub mod descent;
pub mod error;
pub mod extract;
pub mod matrix;
pub mod oracle;
pub mod problem;
pub mod relax;
pub mod sdp;

pub use descent::{run_method, DescentConfig, HMode, Method, RecoveryResult};
pub use error::{Error, Result};
pub use matrix::SymMatrix;
pub use oracle::{brute_force, OracleResult};
pub use problem::BooleanQpInstance;
