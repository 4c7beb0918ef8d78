use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::{IONetwork, NodeId};

/// A smooth vector field f(X, I) with its derivatives, indexed by node id.
pub trait System {
    fn dim(&self) -> usize;
    fn input(&self) -> NodeId;
    fn output(&self) -> NodeId;
    fn rhs(&self, x: &DVector<f64>, i: f64) -> DVector<f64>;
    fn jacobian(&self, x: &DVector<f64>, i: f64) -> DMatrix<f64>;
    /// ∂f/∂I.
    fn input_sensitivity(&self, x: &DVector<f64>, i: f64) -> DVector<f64>;
}

/// ẋ_j = −d_j x_j + s_j tanh(x_j − b_j) + Σ_{ℓ→j} w_jℓ tanh(x_ℓ) (+ I on the input node).
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleODE {
    pub input: NodeId,
    pub output: NodeId,
    pub decay: Vec<f64>,
    pub self_gain: Vec<f64>,
    pub self_shift: Vec<f64>,
    /// (head j, tail ℓ) → w_jℓ.
    pub weights: BTreeMap<(NodeId, NodeId), f64>,
}

/// Seeded admissible model: decay in [1, 2], weights of magnitude [0.5, 1.5]
/// with random sign, no self-coupling.
pub fn synthesize_ode(net: &IONetwork, seed: u64) -> AdmissibleODE {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = net.len();
    let decay: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..2.0)).collect();
    let mut weights = BTreeMap::new();
    let mut arrows: Vec<(NodeId, NodeId)> = net.arrows().collect();
    arrows.sort_by_key(|&(t, h)| (net.rank(h), net.rank(t)));
    for (t, h) in arrows {
        let mag: f64 = rng.gen_range(0.5..1.5);
        let w = if rng.gen_bool(0.5) { mag } else { -mag };
        weights.insert((h, t), w);
    }
    AdmissibleODE {
        input: net.input(),
        output: net.output(),
        decay,
        self_gain: vec![0.0; n],
        self_shift: vec![0.0; n],
        weights,
    }
}

fn sech2(u: f64) -> f64 {
    let c = u.cosh();
    1.0 / (c * c)
}

impl AdmissibleODE {
    /// Argument list of f_j: j itself plus every tail ℓ of an arrow ℓ→j.
    pub fn arguments(&self, j: NodeId) -> Vec<NodeId> {
        let mut args: Vec<NodeId> = self
            .weights
            .keys()
            .filter(|&&(h, _)| h == j)
            .map(|&(_, t)| t)
            .collect();
        args.push(j);
        args.sort_unstable();
        args
    }
}

impl System for AdmissibleODE {
    fn dim(&self) -> usize {
        self.decay.len()
    }

    fn input(&self) -> NodeId {
        self.input
    }

    fn output(&self) -> NodeId {
        self.output
    }

    fn rhs(&self, x: &DVector<f64>, i: f64) -> DVector<f64> {
        let mut f = DVector::from_fn(self.dim(), |j, _| {
            -self.decay[j] * x[j] + self.self_gain[j] * (x[j] - self.self_shift[j]).tanh()
        });
        for (&(h, t), &w) in &self.weights {
            f[h] += w * x[t].tanh();
        }
        f[self.input] += i;
        f
    }

    fn jacobian(&self, x: &DVector<f64>, _i: f64) -> DMatrix<f64> {
        let n = self.dim();
        let mut j = DMatrix::zeros(n, n);
        for k in 0..n {
            j[(k, k)] = -self.decay[k] + self.self_gain[k] * sech2(x[k] - self.self_shift[k]);
        }
        for (&(h, t), &w) in &self.weights {
            j[(h, t)] += w * sech2(x[t]);
        }
        j
    }

    fn input_sensitivity(&self, _x: &DVector<f64>, _i: f64) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim());
        v[self.input] = 1.0;
        v
    }
}
