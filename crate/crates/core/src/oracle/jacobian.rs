//! Sampled rational Jacobians, block forcing and exact homeostasis patterns.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::det::{det_exact, solve_exact, Matrix};
use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::network::{IONetwork, NodeId};
use crate::subnetworks::{BlockIndexSets, HomeostasisSubnetwork};

pub const DEFAULT_RETRIES: u64 = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalJacobian {
    /// Input first, output last, the rest in declaration order.
    pub order: Vec<NodeId>,
    position: Vec<usize>,
    /// (row node, column node) → value. Present for every arrow col→row and every diagonal.
    pub entries: BTreeMap<(NodeId, NodeId), BigRational>,
    pub input_sensitivity: BigRational,
}

impl RationalJacobian {
    fn empty(net: &IONetwork) -> Self {
        let mut order = vec![net.input()];
        order.extend((0..net.len()).filter(|&v| v != net.input() && v != net.output()));
        order.push(net.output());
        let mut position = vec![0; net.len()];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        RationalJacobian {
            order,
            position,
            entries: BTreeMap::new(),
            input_sensitivity: BigRational::one(),
        }
    }

    /// Builds a Jacobian from a value for each stored slot, visited in
    /// (row position, column position) order.
    pub fn from_fn(net: &IONetwork, mut value: impl FnMut(NodeId, NodeId) -> BigRational) -> Self {
        let mut jac = Self::empty(net);
        for (r, c) in stored_slots(net, &jac) {
            jac.entries.insert((r, c), value(r, c));
        }
        jac
    }

    pub fn position(&self, v: NodeId) -> usize {
        self.position[v]
    }

    pub fn get(&self, row: NodeId, col: NodeId) -> BigRational {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Nodes sorted by Jacobian position.
    pub fn arrange(&self, nodes: &BTreeSet<NodeId>) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = nodes.iter().copied().collect();
        v.sort_by_key(|&x| self.position[x]);
        v
    }

    pub fn submatrix(&self, rows: &[NodeId], cols: &[NodeId]) -> Matrix {
        rows.iter()
            .map(|&r| cols.iter().map(|&c| self.get(r, c)).collect())
            .collect()
    }

    pub fn full(&self) -> Matrix {
        self.submatrix(&self.order, &self.order)
    }

    pub fn det_j(&self) -> BigRational {
        det_exact(&self.full()).expect("square")
    }

    /// Jacobian with row `drop_row` and column `drop_col` removed.
    pub fn minor(&self, drop_row: NodeId, drop_col: NodeId) -> Matrix {
        let rows: Vec<NodeId> = self.order.iter().copied().filter(|&v| v != drop_row).collect();
        let cols: Vec<NodeId> = self.order.iter().copied().filter(|&v| v != drop_col).collect();
        self.submatrix(&rows, &cols)
    }

    /// Homeostasis matrix: input row and output column removed.
    pub fn det_h(&self) -> BigRational {
        let (i, o) = (self.order[0], *self.order.last().unwrap());
        det_exact(&self.minor(i, o)).expect("square")
    }

    pub fn block_matrix(&self, block: &BlockIndexSets) -> Matrix {
        self.submatrix(&self.arrange(&block.row_nodes), &self.arrange(&block.col_nodes))
    }

    pub fn block_det(&self, k: &HomeostasisSubnetwork) -> BigRational {
        det_exact(&self.block_matrix(&k.block())).expect("blocks are square")
    }
}

fn stored_slots(net: &IONetwork, jac: &RationalJacobian) -> Vec<(NodeId, NodeId)> {
    let mut slots: Vec<(NodeId, NodeId)> = (0..net.len()).map(|v| (v, v)).collect();
    slots.extend(net.arrows().map(|(t, h)| (h, t)));
    slots.sort_by_key(|&(r, c)| (jac.position[r], jac.position[c]));
    slots
}

fn nonzero_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let mut draw = || {
        let v: i64 = rng.gen_range(1..=999);
        if rng.gen_bool(0.5) {
            -v
        } else {
            v
        }
    };
    let (n, d) = (draw(), draw());
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Random Jacobian on the network's sparsity pattern with nonsingular J and
/// nonsingular homeostasis blocks. Attempt `t` reseeds stream `t` of the generator.
pub fn sample_jacobian(an: &Analysis, seed: u64) -> Result<RationalJacobian> {
    sample_jacobian_with_retries(an, seed, DEFAULT_RETRIES)
}

pub fn sample_jacobian_with_retries(an: &Analysis, seed: u64, retries: u64) -> Result<RationalJacobian> {
    let subs = an.subnetworks();
    for attempt in 0..retries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let mut jac = RationalJacobian::from_fn(&an.net, |_, _| nonzero_rational(&mut rng));
        jac.input_sensitivity = nonzero_rational(&mut rng);
        if !jac.det_j().is_zero() && subs.iter().all(|k| !jac.block_det(k).is_zero()) {
            return Ok(jac);
        }
    }
    Err(Error::DegenerateSampling(retries as usize))
}

/// Sets one entry of K's block so that its determinant vanishes exactly.
///
/// The entry is the first stored slot of the block, in (row position, column
/// position) order, whose cofactor is nonzero. Every other block must keep a
/// nonzero determinant and J must stay nonsingular.
pub fn force_block_singular(
    jac: &RationalJacobian,
    an: &Analysis,
    k: &HomeostasisSubnetwork,
) -> Result<(RationalJacobian, (NodeId, NodeId))> {
    let block = an.dec.block(k)?;
    let rows = jac.arrange(&block.row_nodes);
    let cols = jac.arrange(&block.col_nodes);
    for &r in &rows {
        for &c in &cols {
            if !jac.entries.contains_key(&(r, c)) {
                continue;
            }
            let mut probe = jac.clone();
            probe.entries.insert((r, c), BigRational::zero());
            let a = det_exact(&probe.submatrix(&rows, &cols))?;
            probe.entries.insert((r, c), BigRational::one());
            let b = det_exact(&probe.submatrix(&rows, &cols))? - &a;
            if b.is_zero() {
                continue;
            }
            probe.entries.insert((r, c), -a / b);
            if !det_exact(&probe.submatrix(&rows, &cols))?.is_zero() {
                return Err(Error::Invariant("forced block determinant is nonzero".into()));
            }
            for other in an.subnetworks() {
                if !other.same_as(k) && probe.block_det(&other).is_zero() {
                    return Err(Error::Invariant(format!(
                        "forcing {} also zeroed {}",
                        k.label(&an.net),
                        other.label(&an.net)
                    )));
                }
            }
            if probe.det_j().is_zero() {
                return Err(Error::SingularJacobian);
            }
            return Ok((probe, (r, c)));
        }
    }
    Err(Error::NoAdjustableEntry)
}

/// Nodes κ whose minor (input row, column κ removed) vanishes exactly.
pub fn numeric_pattern_det(jac: &RationalJacobian) -> Result<BTreeSet<NodeId>> {
    if jac.det_j().is_zero() {
        return Err(Error::SingularJacobian);
    }
    let input = jac.order[0];
    let mut out = BTreeSet::new();
    for &kappa in &jac.order {
        if det_exact(&jac.minor(input, kappa))?.is_zero() {
            out.insert(kappa);
        }
    }
    Ok(out)
}

/// Exact equilibrium sensitivity x′ solving J x′ = −(f_ι,I, 0, …, 0)ᵀ, indexed by node.
pub fn sensitivity(jac: &RationalJacobian) -> Result<Vec<BigRational>> {
    let mut rhs = vec![BigRational::zero(); jac.order.len()];
    rhs[0] = -jac.input_sensitivity.clone();
    let x = solve_exact(&jac.full(), &rhs)?.ok_or(Error::SingularJacobian)?;
    let mut by_node = vec![BigRational::zero(); jac.order.len()];
    for (i, &v) in jac.order.iter().enumerate() {
        by_node[v] = x[i].clone();
    }
    Ok(by_node)
}

pub fn numeric_pattern_solve(jac: &RationalJacobian) -> Result<BTreeSet<NodeId>> {
    Ok(sensitivity(jac)?
        .iter()
        .enumerate()
        .filter(|(_, x)| x.is_zero())
        .map(|(v, _)| v)
        .collect())
}

/// Homeostatic nodes read off exact zeros; the determinant and linear-solve
/// routes must agree.
pub fn numeric_pattern(jac: &RationalJacobian) -> Result<BTreeSet<NodeId>> {
    let by_det = numeric_pattern_det(jac)?;
    let by_solve = numeric_pattern_solve(jac)?;
    if by_det != by_solve {
        return Err(Error::Invariant(
            "determinant and linear-solve patterns differ".into(),
        ));
    }
    Ok(by_det)
}

/// Sign of the simultaneous row/column permutation that groups the
/// homeostasis matrix into its blocks.
pub fn block_permutation_sign(an: &Analysis, jac: &RationalJacobian) -> i32 {
    let (input, output) = (an.net.input(), an.net.output());
    let h_rows: Vec<NodeId> = jac.order.iter().copied().filter(|&v| v != input).collect();
    let h_cols: Vec<NodeId> = jac.order.iter().copied().filter(|&v| v != output).collect();
    let mut g_rows = Vec::new();
    let mut g_cols = Vec::new();
    for k in an.subnetworks() {
        let b = k.block();
        g_rows.extend(jac.arrange(&b.row_nodes));
        g_cols.extend(jac.arrange(&b.col_nodes));
    }
    permutation_sign(&h_rows, &g_rows) * permutation_sign(&h_cols, &g_cols)
}

fn permutation_sign(reference: &[NodeId], permuted: &[NodeId]) -> i32 {
    let idx: Vec<usize> = permuted
        .iter()
        .map(|v| reference.iter().position(|r| r == v).expect("same node set"))
        .collect();
    let mut inversions = 0usize;
    for i in 0..idx.len() {
        for j in i + 1..idx.len() {
            if idx[i] > idx[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Checks det H = sign · ∏ det B_η exactly; returns the sign.
pub fn check_product_identity(an: &Analysis, jac: &RationalJacobian) -> Result<i32> {
    let sign = block_permutation_sign(an, jac);
    let product = an
        .subnetworks()
        .iter()
        .fold(BigRational::one(), |acc, k| acc * jac.block_det(k));
    let det_h = jac.det_h();
    if product == det_h * BigRational::from_integer(BigInt::from(sign)) {
        Ok(sign)
    } else {
        Err(Error::Invariant(
            "product of block determinants differs from det H".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::induction::homeostasis_pattern;

    fn e8() -> Analysis {
        Analysis::new(fixtures::e8()).unwrap()
    }

    #[test]
    fn e8_sample_shape() {
        let an = e8();
        let jac = sample_jacobian(&an, 1).unwrap();
        assert_eq!(jac.order.len(), 6);
        assert_eq!(jac.entries.len(), 15);
        assert!(jac.entries.values().all(|v| !v.is_zero()));
        assert!(!jac.input_sensitivity.is_zero());
        assert_eq!(jac.order[0], an.net.input());
        assert_eq!(*jac.order.last().unwrap(), an.net.output());
    }

    #[test]
    fn haldane_sample_and_determinism() {
        let an = Analysis::new(fixtures::haldane()).unwrap();
        let a = sample_jacobian(&an, 42).unwrap();
        assert_eq!(a.entries.len(), 3);
        assert_eq!(a, sample_jacobian(&an, 42).unwrap());
        assert_ne!(a, sample_jacobian(&an, 43).unwrap());
    }

    #[test]
    fn e8_structural_block_is_the_two_by_two() {
        let an = e8();
        let jac = sample_jacobian(&an, 3).unwrap();
        let id = |s| an.net.id(s).unwrap();
        let l1 = &an.subnetworks()[0];
        let v = |r, c| jac.get(id(r), id(c));
        let expect = v("σ", "ι") * v("o", "σ") - v("σ", "σ") * v("o", "ι");
        assert_eq!(jac.block_det(l1), expect);
    }

    #[test]
    fn e8_forcing_examples() {
        let an = e8();
        let jac = sample_jacobian(&an, 5).unwrap();
        let id = |s| an.net.id(s).unwrap();
        let subs = an.subnetworks();

        let t3 = &subs[3];
        let (forced, slot) = force_block_singular(&jac, &an, t3).unwrap();
        assert_eq!(slot, (id("τ3"), id("τ3")));
        assert!(forced.get(id("τ3"), id("τ3")).is_zero());

        let l1 = &subs[0];
        let (forced, slot) = force_block_singular(&jac, &an, l1).unwrap();
        assert_eq!(slot, (id("σ"), id("ι")));
        let v = |r, c| jac.get(id(r), id(c));
        assert_eq!(
            forced.get(id("σ"), id("ι")),
            v("σ", "σ") * v("o", "ι") / v("o", "σ")
        );
    }

    #[test]
    fn e8_numeric_patterns_match_engine() {
        let an = e8();
        for seed in 0..5 {
            let jac = sample_jacobian(&an, seed).unwrap();
            for k in an.subnetworks() {
                let (forced, _) = force_block_singular(&jac, &an, &k).unwrap();
                let got = numeric_pattern(&forced).unwrap();
                assert_eq!(got, homeostasis_pattern(&an, &k).unwrap().nodes);
            }
        }
    }

    #[test]
    fn unforced_jacobian_has_no_homeostatic_node() {
        let an = e8();
        let jac = sample_jacobian(&an, 9).unwrap();
        assert!(numeric_pattern(&jac).unwrap().is_empty());
    }

    #[test]
    fn product_identity_on_fixtures() {
        for net in [fixtures::e8(), fixtures::diamond(), fixtures::linked_diamond(), fixtures::linked_loop()] {
            let an = Analysis::new(net).unwrap();
            for seed in 0..3 {
                let jac = sample_jacobian(&an, seed).unwrap();
                let s = check_product_identity(&an, &jac).unwrap();
                assert!(s == 1 || s == -1);
            }
        }
    }
}
