//! Numerical witness: admissible ODE models, equilibrium continuation in the
//! input parameter and detection of infinitesimal homeostasis points.

pub mod continuation;
pub mod detect;
pub mod model;
pub mod tune;

pub use continuation::{continue_equilibrium, EquilibriumBranch, Sample};
pub use detect::{detect_homeostasis, EventKind, HomeostasisEvent};
pub use model::{synthesize_ode, AdmissibleODE, System};

/// Numerical tolerances used across the harness.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Newton stops once ‖f‖∞ is at most this.
    pub residual: f64,
    pub newton_max_iter: usize,
    /// Eigenvalues with |Re| below this make a sample non-hyperbolic.
    pub hyperbolic: f64,
    /// Root refinement stops at |h| ≤ bisection · max |h| over the branch.
    pub bisection: f64,
    /// κ is homeostatic when |x′_κ| ≤ pattern · max |x′|.
    pub pattern: f64,
    pub fd_step: f64,
    /// Relative threshold on x_o″ and x_o‴.
    pub fd_threshold: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-12,
            newton_max_iter: 200,
            hyperbolic: 1e-8,
            bisection: 1e-10,
            pattern: 1e-8,
            fd_step: 1e-4,
            fd_threshold: 1e-6,
        }
    }
}
