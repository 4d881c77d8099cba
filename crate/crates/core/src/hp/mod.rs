//! Configurable-precision reals, symmetric eigensolvers and the
//! precision-doubling driver.

pub mod adaptive;
pub mod decimal;
pub mod eigen;
mod real;

pub use adaptive::{adaptive_eval, AdaptiveConfig, AdaptiveError, AdaptiveOutcome};
pub use eigen::{
    eigenvalues_sym, jacobi_eigenvalues, lambda_max_psd, lambda_max_sym, EigenError, EigenResult, RealSymMatrix,
    MAX_SWEEPS,
};
pub use real::{rel_close, HpContext, HpReal, Precision, Real};
