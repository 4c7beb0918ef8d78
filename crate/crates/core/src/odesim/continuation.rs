use nalgebra::{DMatrix, DVector};

use super::model::System;
use super::Tolerances;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Sample {
    pub input: f64,
    pub x: DVector<f64>,
    pub residual: f64,
    pub hyperbolic: bool,
}

#[derive(Debug, Clone, Default)]
pub struct EquilibriumBranch {
    pub samples: Vec<Sample>,
    /// Input value of the first non-hyperbolic sample, where the branch stops.
    pub truncated_at: Option<f64>,
}

/// Equilibrium at fixed I: damped Newton, falling back to pseudo-transient
/// continuation when the line search stalls.
pub fn newton<S: System + ?Sized>(
    sys: &S,
    x0: &DVector<f64>,
    i: f64,
    tol: &Tolerances,
) -> Result<DVector<f64>> {
    damped_newton(sys, x0, i, tol).or_else(|_| {
        let x = pseudo_transient(sys, x0, i, tol)?;
        damped_newton(sys, &x, i, tol)
    })
}

fn damped_newton<S: System + ?Sized>(
    sys: &S,
    x0: &DVector<f64>,
    i: f64,
    tol: &Tolerances,
) -> Result<DVector<f64>> {
    let mut x = x0.clone();
    let mut f = sys.rhs(&x, i);
    for _ in 0..tol.newton_max_iter {
        if f.amax() <= tol.residual {
            return Ok(x);
        }
        let step = sys
            .jacobian(&x, i)
            .lu()
            .solve(&(-&f))
            .ok_or(Error::NewtonDivergence(i))?;
        let mut lambda = 1.0;
        loop {
            let trial = &x + &step * lambda;
            let ft = sys.rhs(&trial, i);
            if ft.norm() < f.norm() {
                x = trial;
                f = ft;
                break;
            }
            lambda *= 0.5;
            if lambda < 1e-8 {
                return Err(Error::NewtonDivergence(i));
            }
        }
    }
    if f.amax() <= tol.residual {
        Ok(x)
    } else {
        Err(Error::NewtonDivergence(i))
    }
}

/// Implicit Euler steps of ẋ = f(x, I) with a growing step size (switched
/// evolution relaxation), stopped once the residual is small enough to hand
/// back to Newton.
fn pseudo_transient<S: System + ?Sized>(
    sys: &S,
    x0: &DVector<f64>,
    i: f64,
    tol: &Tolerances,
) -> Result<DVector<f64>> {
    let n = sys.dim();
    let mut x = x0.clone();
    let mut f = sys.rhs(&x, i);
    let mut dt = 0.1;
    for _ in 0..20 * tol.newton_max_iter {
        if f.amax() <= 1e-8 {
            return Ok(x);
        }
        let m = DMatrix::<f64>::identity(n, n) / dt - sys.jacobian(&x, i);
        let step = m.lu().solve(&f).ok_or(Error::NewtonDivergence(i))?;
        x += step;
        let fnew = sys.rhs(&x, i);
        dt = (dt * f.norm() / fnew.norm()).clamp(1e-3, 1e6);
        f = fnew;
    }
    Err(Error::NewtonDivergence(i))
}

/// Solves J x′ = −∂f/∂I at an equilibrium.
pub fn tangent<S: System + ?Sized>(sys: &S, x: &DVector<f64>, i: f64) -> Option<DVector<f64>> {
    sys.jacobian(x, i).lu().solve(&(-sys.input_sensitivity(x, i)))
}

pub fn is_hyperbolic(j: &DMatrix<f64>, tol: &Tolerances) -> bool {
    j.complex_eigenvalues()
        .iter()
        .all(|ev| ev.re.abs() >= tol.hyperbolic)
}

/// Equilibria at `steps` evenly spaced inputs from `range.0` to `range.1`
/// inclusive. The first point is found by damped Newton from the origin.
pub fn continue_equilibrium<S: System + ?Sized>(
    sys: &S,
    range: (f64, f64),
    steps: usize,
    tol: &Tolerances,
) -> Result<EquilibriumBranch> {
    let mut branch = EquilibriumBranch::default();
    let (a, b) = range;
    if steps == 0 || !(a <= b) {
        return Ok(branch);
    }
    let at = |k: usize| {
        if steps == 1 {
            a
        } else {
            a + (b - a) * k as f64 / (steps - 1) as f64
        }
    };
    let mut guess = DVector::zeros(sys.dim());
    let mut prev: Option<(f64, DVector<f64>)> = None;
    for k in 0..steps {
        let i = at(k);
        if let Some((pi, px)) = &prev {
            guess = px.clone();
            if let Some(t) = tangent(sys, px, *pi) {
                guess += t * (i - pi);
            }
        }
        let x = newton(sys, &guess, i, tol)?;
        let residual = sys.rhs(&x, i).amax();
        let hyperbolic = is_hyperbolic(&sys.jacobian(&x, i), tol);
        branch.samples.push(Sample {
            input: i,
            x: x.clone(),
            residual,
            hyperbolic,
        });
        if !hyperbolic {
            branch.truncated_at = Some(i);
            break;
        }
        prev = Some((i, x));
    }
    Ok(branch)
}
