//! Exact-arithmetic oracle for homeostasis blocks and patterns.

pub mod det;
pub mod jacobian;
pub mod symbolic;
pub mod verify;

pub use det::{det_exact, solve_exact, Matrix};
pub use jacobian::{
    check_product_identity, force_block_singular, numeric_pattern, sample_jacobian,
    RationalJacobian,
};
pub use symbolic::{symbolic_factorization, Polynomial, SymbolicFactorization};
pub use verify::{verify, VerifyReport};
