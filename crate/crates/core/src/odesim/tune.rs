use nalgebra::{DMatrix, DVector};

use super::continuation::continue_equilibrium;
use super::model::{AdmissibleODE, System};
use super::Tolerances;
use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::network::NodeId;
use crate::subnetworks::HomeostasisSubnetwork;

/// Floating-point determinant of each homeostasis block, in decomposition order.
pub fn block_determinants(an: &Analysis, j: &DMatrix<f64>) -> Vec<f64> {
    an.subnetworks()
        .iter()
        .map(|k| block_determinant(k, j))
        .collect()
}

pub fn block_determinant(k: &HomeostasisSubnetwork, j: &DMatrix<f64>) -> f64 {
    let b = k.block();
    let rows: Vec<NodeId> = b.row_nodes.into_iter().collect();
    let cols: Vec<NodeId> = b.col_nodes.into_iter().collect();
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| j[(rows[r], cols[c])]).determinant()
}

/// Gives `node` a self-term with gain `ratio`·d (ratio > 1) and moves its shift by secant
/// iteration until the diagonal Jacobian entry of `node` vanishes at the
/// midpoint of `window` on the branch continued from the window start.
pub fn tune_diagonal_crossing(
    ode: &AdmissibleODE,
    node: NodeId,
    window: (f64, f64),
    ratio: f64,
    tol: &Tolerances,
) -> Result<AdmissibleODE> {
    // −d + ratio·d·sech²(u) = 0
    let crossing = (1.0 / ratio).sqrt().recip().acosh();
    let mut tuned = ode.clone();
    tuned.self_gain[node] = ratio * ode.decay[node];
    let mid = 0.5 * (window.0 + window.1);
    let mut offset = |shift: f64| -> Result<f64> {
        tuned.self_shift[node] = shift;
        let br = continue_equilibrium(&tuned, (window.0, mid), 101, tol)?;
        let last = br
            .samples
            .last()
            .filter(|_| br.truncated_at.is_none())
            .ok_or(Error::NewtonDivergence(mid))?;
        Ok(last.x[node] - shift - crossing)
    };
    let (mut b0, mut b1) = (-crossing, -crossing + 0.1);
    let (mut f0, mut f1) = (offset(b0)?, offset(b1)?);
    for _ in 0..60 {
        if f1.abs() < 1e-12 {
            break;
        }
        let denom = f1 - f0;
        if denom == 0.0 {
            break;
        }
        let b2 = b1 - f1 * (b1 - b0) / denom;
        b0 = b1;
        f0 = f1;
        b1 = b2;
        f1 = offset(b1)?;
    }
    if f1.abs() > 1e-9 {
        return Err(Error::TuningFailed(format!(
            "secant on the self-shift did not converge (offset {f1:e})"
        )));
    }
    let mut out = ode.clone();
    out.self_gain[node] = ratio * ode.decay[node];
    out.self_shift[node] = b1;
    Ok(out)
}

/// Value of the tuned diagonal entry along a sample.
pub fn diagonal_entry<S: System + ?Sized>(sys: &S, x: &DVector<f64>, i: f64, node: NodeId) -> f64 {
    sys.jacobian(x, i)[(node, node)]
}
