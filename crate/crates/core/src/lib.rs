//! Extremal eigenvalues of `XXᵀ` over nonsingular lower triangular
//! (0,1)-matrices.
//!
//! The crate computes the Hong–Loewy numbers `c_n` (smallest eigenvalue) and
//! the Ilmonen–Haukkanen–Merikoski numbers `C_n` (largest eigenvalue), the
//! closed-form lower bounds on `c_n`, and the exact Fibonacci/Lucas identities
//! those bounds rest on. Everything here is `no_std` + `alloc`; file formats,
//! the CLI and thread-parallel drivers live in the `extremal` crate.
//!
//! Layout:
//!
//! * [`exact`]: big integers, rationals, Fibonacci/Lucas caches and the
//!   identity verification suites.
//! * [`matrices`]: exact integer matrices `Z_n`, `W_n`, `B_n`, `A_n` and
//!   Frobenius-norm quantities.
//! * [`hp`]: configurable-precision reals, the Jacobi eigensolver and the
//!   precision-doubling driver.
//! * [`bounds`]: `c_n`, `C_n` and every closed-form bound.
//! * [`oracle`]: exhaustive enumeration of `K_n`.
//! * [`applications`]: power GCD matrices and the Jordan totient.

#![no_std]

extern crate alloc;

pub mod applications;
pub mod bounds;
pub mod exact;
pub mod hp;
pub mod matrices;
pub mod oracle;

pub use bounds::BoundKind;
pub use exact::{ExactInt, ExactRational, FibCache};
pub use hp::{EigenError, EigenResult, HpReal, Precision};
pub use matrices::IntSymMatrix;
pub use oracle::{ExtremalRecord, TriBitMatrix};
