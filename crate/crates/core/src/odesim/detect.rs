use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::continuation::{newton, tangent, EquilibriumBranch};
use super::model::System;
use super::Tolerances;
use crate::network::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Simple,
    Chair,
    /// x_o″ and x_o‴ both below threshold.
    Degenerate,
}

#[derive(Debug, Clone)]
pub struct HomeostasisEvent {
    pub input: f64,
    pub x: DVector<f64>,
    pub kind: EventKind,
    pub empirical_pattern: BTreeSet<NodeId>,
    /// x′ at the event, indexed by node.
    pub sensitivity: DVector<f64>,
    pub det_h: f64,
}

/// Matrix with one row and one column deleted.
pub fn delete(j: &DMatrix<f64>, row: usize, col: usize) -> DMatrix<f64> {
    j.clone().remove_row(row).remove_column(col)
}

pub fn det_h<S: System + ?Sized>(sys: &S, x: &DVector<f64>, i: f64) -> f64 {
    delete(&sys.jacobian(x, i), sys.input(), sys.output()).determinant()
}

struct Tracker<'a, S: System + ?Sized> {
    sys: &'a S,
    tol: &'a Tolerances,
}

impl<S: System + ?Sized> Tracker<'_, S> {
    /// Equilibrium at `i` reached from a nearby equilibrium `(i0, x0)`.
    fn equilibrium(&self, i0: f64, x0: &DVector<f64>, i: f64) -> Option<DVector<f64>> {
        let mut guess = x0.clone();
        if let Some(t) = tangent(self.sys, x0, i0) {
            guess += t * (i - i0);
        }
        newton(self.sys, &guess, i, self.tol).ok()
    }

    fn h(&self, i0: f64, x0: &DVector<f64>, i: f64) -> Option<(f64, DVector<f64>)> {
        let x = self.equilibrium(i0, x0, i)?;
        Some((det_h(self.sys, &x, i), x))
    }

    fn bisect(&self, lo: (f64, DVector<f64>, f64), hi_i: f64, scale: f64) -> Option<(f64, DVector<f64>)> {
        let (mut a, mut xa, mut ha) = lo;
        let mut b = hi_i;
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            let (hm, xm) = self.h(a, &xa, m)?;
            if hm.abs() <= self.tol.bisection * scale || (b - a) <= 1e-15 * (1.0 + m.abs()) {
                return Some((m, xm));
            }
            if hm.signum() == ha.signum() {
                a = m;
                xa = xm;
                ha = hm;
            } else {
                b = m;
            }
        }
        None
    }

    /// Golden-section minimization of |h| on [a, c] around an interior grid minimum.
    fn golden(&self, a: f64, xa: &DVector<f64>, c: f64) -> Option<(f64, DVector<f64>, f64)> {
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut lo, mut hi) = (a, c);
        let mut anchor = (a, xa.clone());
        let mut best: Option<(f64, DVector<f64>, f64)> = None;
        for _ in 0..120 {
            if hi - lo <= 1e-14 * (1.0 + lo.abs()) {
                break;
            }
            let p = hi - g * (hi - lo);
            let q = lo + g * (hi - lo);
            let (hp, xp) = self.h(anchor.0, &anchor.1, p)?;
            let (hq, xq) = self.h(anchor.0, &anchor.1, q)?;
            for (i, x, h) in [(p, &xp, hp), (q, &xq, hq)] {
                if best.as_ref().is_none_or(|b| h.abs() < b.2.abs()) {
                    best = Some((i, x.clone(), h));
                }
            }
            if hp.abs() < hq.abs() {
                hi = q;
                anchor = (p, xp);
            } else {
                lo = p;
                anchor = (q, xq);
            }
        }
        best
    }

    fn event(&self, i: f64, x: DVector<f64>) -> Option<HomeostasisEvent> {
        let o = self.sys.output();
        let xp = tangent(self.sys, &x, i)?;
        let scale = xp.amax();
        let empirical_pattern = (0..xp.len())
            .filter(|&k| xp[k].abs() <= self.tol.pattern * scale)
            .collect();
        let d = self.tol.fd_step;
        let slope = |s: f64| {
            let xs = self.equilibrium(i, &x, s)?;
            tangent(self.sys, &xs, s).map(|t| t[o])
        };
        let (up, down) = (slope(i + d)?, slope(i - d)?);
        let second = (up - down) / (2.0 * d);
        let third = (up - 2.0 * xp[o] + down) / (d * d);
        let thr = self.tol.fd_threshold * scale;
        let kind = if second.abs() > thr {
            EventKind::Simple
        } else if third.abs() > thr {
            EventKind::Chair
        } else {
            EventKind::Degenerate
        };
        Some(HomeostasisEvent {
            input: i,
            det_h: det_h(self.sys, &x, i),
            x,
            kind,
            empirical_pattern,
            sensitivity: xp,
        })
    }
}

/// Zeros of det H along the branch: sign changes are bisected, exact grid
/// zeros are taken as they are, and interior local minima of |h| without a
/// sign change are refined by golden section and kept when they reach the
/// bisection tolerance.
pub fn detect_homeostasis<S: System + ?Sized>(
    branch: &EquilibriumBranch,
    sys: &S,
    tol: &Tolerances,
) -> Vec<HomeostasisEvent> {
    let tr = Tracker { sys, tol };
    let s = &branch.samples;
    let h: Vec<f64> = s.iter().map(|p| det_h(sys, &p.x, p.input)).collect();
    let scale = h.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut roots: Vec<(f64, DVector<f64>)> = Vec::new();
    for k in 0..s.len() {
        if h[k] == 0.0 {
            roots.push((s[k].input, s[k].x.clone()));
            continue;
        }
        if k + 1 < s.len() && h[k + 1] != 0.0 && h[k].signum() != h[k + 1].signum() {
            if let Some(r) = tr.bisect((s[k].input, s[k].x.clone(), h[k]), s[k + 1].input, scale) {
                roots.push(r);
            }
            continue;
        }
        let interior_min = k > 0
            && k + 1 < s.len()
            && h[k - 1] != 0.0
            && h[k + 1] != 0.0
            && h[k - 1].signum() == h[k].signum()
            && h[k + 1].signum() == h[k].signum()
            && h[k].abs() < h[k - 1].abs()
            && h[k].abs() <= h[k + 1].abs();
        if interior_min {
            if let Some((i, x, hm)) = tr.golden(s[k - 1].input, &s[k - 1].x, s[k + 1].input) {
                if hm.abs() <= tol.bisection * scale {
                    roots.push((i, x));
                }
            }
        }
    }
    roots
        .into_iter()
        .filter_map(|(i, x)| tr.event(i, x))
        .collect()
}
