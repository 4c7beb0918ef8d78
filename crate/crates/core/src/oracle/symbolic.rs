//! Symbolic determinants over entry symbols f(row, col).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Mul, Neg};

use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::network::{IONetwork, NodeId};
use crate::subnetworks::HomeostasisSubnetwork;

pub const DEFAULT_SYMBOLIC_CAP: usize = 10;

/// A monomial is a sorted list of entry symbols (row, col).
pub type Monomial = Vec<(NodeId, NodeId)>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    pub terms: BTreeMap<Monomial, i64>,
}

impl Polynomial {
    pub fn one() -> Self {
        Polynomial {
            terms: BTreeMap::from([(Vec::new(), 1)]),
        }
    }

    pub fn var(row: NodeId, col: NodeId) -> Self {
        Polynomial {
            terms: BTreeMap::from([(vec![(row, col)], 1)]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, mono: Monomial, coeff: i64) {
        let c = self.terms.entry(mono.clone()).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&mono);
        }
    }

    /// Terms sorted by name, e.g. `f(σ,ι)*f(o,σ) - f(o,ι)*f(σ,σ)`.
    pub fn render(&self, net: &IONetwork) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut rendered: Vec<(String, i64)> = self
            .terms
            .iter()
            .map(|(mono, &c)| {
                let mut syms: Vec<String> = mono
                    .iter()
                    .map(|&(r, c)| format!("f({},{})", net.name(r), net.name(c)))
                    .collect();
                syms.sort();
                (if syms.is_empty() { "1".into() } else { syms.join("*") }, c)
            })
            .collect();
        rendered.sort();
        let mut out = String::new();
        for (i, (body, c)) in rendered.iter().enumerate() {
            let sign = if *c < 0 { "-" } else { "+" };
            if i == 0 {
                if *c < 0 {
                    out.push('-');
                }
            } else {
                let _ = write!(out, " {sign} ");
            }
            if c.abs() != 1 {
                let _ = write!(out, "{}*", c.abs());
            }
            out.push_str(body);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::default();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &rhs.terms {
                let mut m: Monomial = ma.iter().chain(mb).copied().collect();
                m.sort_unstable();
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(mut self) -> Polynomial {
        for c in self.terms.values_mut() {
            *c = -*c;
        }
        self
    }
}

/// Symbolic determinant of the submatrix on `rows` × `cols`, where `stored`
/// says which slots carry a symbol.
pub fn symbolic_det(
    rows: &[NodeId],
    cols: &[NodeId],
    stored: &dyn Fn(NodeId, NodeId) -> bool,
) -> Polynomial {
    let n = rows.len();
    let mut poly = Polynomial::default();
    let mut used = vec![false; n];
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    expand(rows, cols, stored, &mut used, &mut chosen, &mut poly);
    poly
}

fn expand(
    rows: &[NodeId],
    cols: &[NodeId],
    stored: &dyn Fn(NodeId, NodeId) -> bool,
    used: &mut Vec<bool>,
    chosen: &mut Vec<usize>,
    poly: &mut Polynomial,
) {
    let i = chosen.len();
    if i == rows.len() {
        let mut inversions = 0;
        for a in 0..chosen.len() {
            for b in a + 1..chosen.len() {
                if chosen[a] > chosen[b] {
                    inversions += 1;
                }
            }
        }
        let mut mono: Monomial = chosen
            .iter()
            .enumerate()
            .map(|(r, &c)| (rows[r], cols[c]))
            .collect();
        mono.sort_unstable();
        poly.add_term(mono, if inversions % 2 == 0 { 1 } else { -1 });
        return;
    }
    for j in 0..cols.len() {
        if !used[j] && stored(rows[i], cols[j]) {
            used[j] = true;
            chosen.push(j);
            expand(rows, cols, stored, used, chosen, poly);
            chosen.pop();
            used[j] = false;
        }
    }
}

#[derive(Debug, Clone)]
pub struct SymbolicFactorization {
    /// One factor per homeostasis subnetwork, in decomposition order.
    pub factors: Vec<(HomeostasisSubnetwork, Polynomial)>,
    pub det_h: Polynomial,
    /// ∏ factors = sign · det H.
    pub sign: i32,
}

fn jacobian_order(net: &IONetwork) -> Vec<NodeId> {
    let mut order = vec![net.input()];
    order.extend((0..net.len()).filter(|&v| v != net.input() && v != net.output()));
    order.push(net.output());
    order
}

pub fn symbolic_factorization(an: &Analysis, max_nodes: usize) -> Result<SymbolicFactorization> {
    let net = &an.net;
    if net.len() > max_nodes {
        return Err(Error::SymbolicCap {
            cap: max_nodes,
            nodes: net.len(),
        });
    }
    let stored = |r: NodeId, c: NodeId| r == c || net.has_arrow(c, r);
    let order = jacobian_order(net);
    let mut position = vec![0; net.len()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let arrange = |set: &std::collections::BTreeSet<NodeId>| {
        let mut v: Vec<NodeId> = set.iter().copied().collect();
        v.sort_by_key(|&x| position[x]);
        v
    };

    let rows: Vec<NodeId> = order.iter().copied().filter(|&v| v != net.input()).collect();
    let cols: Vec<NodeId> = order.iter().copied().filter(|&v| v != net.output()).collect();
    let det_h = symbolic_det(&rows, &cols, &stored);

    let mut factors = Vec::new();
    let mut product = Polynomial::one();
    for k in an.subnetworks() {
        let b = k.block();
        let f = symbolic_det(&arrange(&b.row_nodes), &arrange(&b.col_nodes), &stored);
        product = &product * &f;
        factors.push((k, f));
    }
    let sign = if product == det_h {
        1
    } else if product == -det_h.clone() {
        -1
    } else {
        return Err(Error::Invariant(
            "expanded block product differs from symbolic det H".into(),
        ));
    };
    Ok(SymbolicFactorization {
        factors,
        det_h,
        sign,
    })
}
