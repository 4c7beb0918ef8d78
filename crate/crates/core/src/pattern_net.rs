//! The homeostasis pattern network: backbone chain, appendage components and
//! the V_max / V_min arrows joining them.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::classify::NodeClassification;
use crate::error::{Error, Result};
use crate::network::{dot_id, IONetwork, NodeId};
use crate::subnetworks::{Decomposition, HomeostasisSubnetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternNode {
    /// ρ_k, k = 0..=q+1.
    SuperSimple(usize),
    /// L̃_j, j = 1..=q+1.
    Backbone(usize),
    /// Ã_i, 0-based index into the component list.
    Appendage(usize),
}

impl PatternNode {
    /// Chain position of a backbone-chain node.
    pub fn chain_position(self) -> Option<usize> {
        match self {
            PatternNode::SuperSimple(k) => Some(2 * k),
            PatternNode::Backbone(j) => Some(2 * j - 1),
            PatternNode::Appendage(_) => None,
        }
    }

    pub fn from_position(pos: usize) -> PatternNode {
        if pos % 2 == 0 {
            PatternNode::SuperSimple(pos / 2)
        } else {
            PatternNode::Backbone(pos.div_ceil(2))
        }
    }
}

#[derive(Debug, Clone)]
pub struct PatternNetwork {
    /// [ρ0, L̃1, ρ1, ..., L̃_{q+1}, ρ_{q+1}].
    pub backbone: Vec<PatternNode>,
    pub super_simple: Vec<NodeId>,
    /// Interior node set of each L̃_j (index j-1).
    pub backbone_contents: Vec<BTreeSet<NodeId>>,
    pub components: Vec<BTreeSet<NodeId>>,
    pub appendage_arrows: BTreeSet<(usize, usize)>,
    /// Chain position of V_max for each component.
    pub vmax: Vec<usize>,
    /// Chain position of V_min for each component.
    pub vmin: Vec<usize>,
    node_of: Vec<PatternNode>,
}

pub fn build_pattern_network(
    net: &IONetwork,
    cls: &NodeClassification,
    dec: &Decomposition,
) -> Result<PatternNetwork> {
    let n = net.len();
    let q1 = cls.segments();
    let backbone: Vec<PatternNode> = (0..=2 * q1).map(PatternNode::from_position).collect();

    let mut node_of: Vec<Option<PatternNode>> = vec![None; n];
    for (k, &r) in cls.super_simple.iter().enumerate() {
        node_of[r] = Some(PatternNode::SuperSimple(k));
    }
    let mut backbone_contents = Vec::with_capacity(q1);
    for s in &dec.structural {
        for v in s.interior() {
            node_of[v] = Some(PatternNode::Backbone(s.index));
        }
        backbone_contents.push(s.interior());
    }
    let components: Vec<BTreeSet<NodeId>> = dec.appendage.iter().map(|a| a.nodes.clone()).collect();
    for (i, c) in components.iter().enumerate() {
        for &v in c {
            node_of[v] = Some(PatternNode::Appendage(i));
        }
    }
    let node_of: Vec<PatternNode> = node_of
        .into_iter()
        .enumerate()
        .map(|(v, p)| p.ok_or_else(|| Error::Invariant(format!("node `{}` has no pattern node", net.name(v)))))
        .collect::<Result<_>>()?;

    let mut appendage_arrows = BTreeSet::new();
    for (t, h) in net.arrows() {
        if let (PatternNode::Appendage(a), PatternNode::Appendage(b)) = (node_of[t], node_of[h]) {
            if a != b {
                appendage_arrows.insert((a, b));
            }
        }
    }

    let mut vmax = Vec::with_capacity(components.len());
    let mut vmin = Vec::with_capacity(components.len());
    for c in &components {
        let down = appendage_path_positions(net, cls, &node_of, c, true);
        let up = appendage_path_positions(net, cls, &node_of, c, false);
        match (down.iter().max(), up.iter().min()) {
            (Some(&hi), Some(&lo)) => {
                vmax.push(hi);
                vmin.push(lo);
            }
            _ => {
                return Err(Error::Invariant(format!(
                    "appendage component {{{}}} has no appendage path to or from the backbone",
                    net.sorted_names(c.iter().copied()).join(",")
                )))
            }
        }
    }

    let pnet = PatternNetwork {
        backbone,
        super_simple: cls.super_simple.clone(),
        backbone_contents,
        components,
        appendage_arrows,
        vmax,
        vmin,
        node_of,
    };
    pnet.check_order()?;
    Ok(pnet)
}

/// Chain positions of simple endpoints reachable from (`forward`) or reaching
/// the component through appendage nodes only.
fn appendage_path_positions(
    net: &IONetwork,
    cls: &NodeClassification,
    node_of: &[PatternNode],
    component: &BTreeSet<NodeId>,
    forward: bool,
) -> BTreeSet<usize> {
    let adj = if forward {
        net.successors()
    } else {
        net.predecessors()
    };
    let mut seen = vec![false; net.len()];
    let mut queue: VecDeque<NodeId> = component.iter().copied().collect();
    for &v in component {
        seen[v] = true;
    }
    let mut found = BTreeSet::new();
    while let Some(v) = queue.pop_front() {
        if let PatternNode::Backbone(j) = node_of[v] {
            // linked appendage node, part of L̃_j
            found.insert(2 * j - 1);
        }
        for &w in &adj[v] {
            if cls.is_simple(w) {
                found.insert(node_of[w].chain_position().expect("simple nodes lie on the chain"));
            } else if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    found
}

impl PatternNetwork {
    pub fn pattern_node_of(&self, v: NodeId) -> PatternNode {
        self.node_of[v]
    }

    pub fn pattern_node_of_name(&self, net: &IONetwork, name: &str) -> Result<PatternNode> {
        Ok(self.node_of[net.id(name)?])
    }

    /// Pattern node standing for a homeostasis subnetwork.
    pub fn node_for(&self, k: &HomeostasisSubnetwork) -> Result<PatternNode> {
        match k {
            HomeostasisSubnetwork::Structural(s) => {
                if s.index >= 1 && s.index <= self.backbone_contents.len() {
                    Ok(PatternNode::Backbone(s.index))
                } else {
                    Err(Error::ForeignSubnetwork)
                }
            }
            HomeostasisSubnetwork::Appendage(a) => self
                .components
                .iter()
                .position(|c| *c == a.nodes)
                .map(PatternNode::Appendage)
                .ok_or(Error::ForeignSubnetwork),
        }
    }

    /// Graph nodes carried by a pattern node.
    pub fn contents(&self, p: PatternNode) -> BTreeSet<NodeId> {
        match p {
            PatternNode::SuperSimple(k) => BTreeSet::from([self.super_simple[k]]),
            PatternNode::Backbone(j) => self.backbone_contents[j - 1].clone(),
            PatternNode::Appendage(i) => self.components[i].clone(),
        }
    }

    /// All pattern nodes: chain first, then components.
    pub fn nodes(&self) -> Vec<PatternNode> {
        self.backbone
            .iter()
            .copied()
            .chain((0..self.components.len()).map(PatternNode::Appendage))
            .collect()
    }

    /// Dense index used by [`PatternNetwork::adjacency`].
    pub fn dense(&self, p: PatternNode) -> usize {
        match p {
            PatternNode::Appendage(i) => self.backbone.len() + i,
            other => other.chain_position().unwrap(),
        }
    }

    /// Successor lists over dense indices: chain arrows, appendage arrows,
    /// Ã → V_max(Ã) and V_min(Ã) → Ã.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let b = self.backbone.len();
        let mut adj = vec![Vec::new(); b + self.components.len()];
        for p in 0..b.saturating_sub(1) {
            adj[p].push(p + 1);
        }
        for &(x, y) in &self.appendage_arrows {
            adj[b + x].push(b + y);
        }
        for i in 0..self.components.len() {
            adj[b + i].push(self.vmax[i]);
            adj[self.vmin[i]].push(b + i);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    pub fn label(&self, net: &IONetwork, p: PatternNode) -> String {
        match p {
            PatternNode::SuperSimple(k) => net.name(self.super_simple[k]).to_string(),
            PatternNode::Backbone(j) => format!("L̃{j}"),
            PatternNode::Appendage(i) => format!("Ã{}", i + 1),
        }
    }

    fn check_order(&self) -> Result<()> {
        for i in 0..self.components.len() {
            let (hi, lo) = (self.vmax[i], self.vmin[i]);
            if !(hi < lo || (hi == lo && hi % 2 == 0)) {
                return Err(Error::Invariant(format!(
                    "component Ã{} has V_max at {} after V_min at {}",
                    i + 1,
                    hi,
                    lo
                )));
            }
        }
        Ok(())
    }

    /// Graphviz rendering: chain left to right, components on a second rank.
    pub fn to_dot(&self, net: &IONetwork) -> String {
        let mut out = String::from("digraph P {\n  rankdir=LR;\n  { rank=same;");
        for &p in &self.backbone {
            let _ = write!(out, " {}", dot_id(&self.label(net, p)));
        }
        out.push_str(" }\n");
        for &p in &self.backbone {
            let shape = match p {
                PatternNode::SuperSimple(_) => "circle",
                _ => "box",
            };
            let _ = writeln!(out, "  {} [shape={}];", dot_id(&self.label(net, p)), shape);
        }
        if !self.components.is_empty() {
            out.push_str("  { rank=same;");
            for i in 0..self.components.len() {
                let _ = write!(out, " {}", dot_id(&self.label(net, PatternNode::Appendage(i))));
            }
            out.push_str(" }\n");
        }
        for (i, c) in self.components.iter().enumerate() {
            let members = net.sorted_names(c.iter().copied()).join(",");
            let _ = writeln!(
                out,
                "  {} [shape=ellipse, members={}];",
                dot_id(&self.label(net, PatternNode::Appendage(i))),
                dot_id(&members)
            );
        }
        let nodes = self.nodes();
        let adj = self.adjacency();
        for (a, succ) in adj.iter().enumerate() {
            for &b in succ {
                let kind = match (nodes[a], nodes[b]) {
                    (PatternNode::Appendage(_), PatternNode::Appendage(_)) => "appendage",
                    (PatternNode::Appendage(_), _) => "vmax",
                    (_, PatternNode::Appendage(_)) => "vmin",
                    _ => "chain",
                };
                let _ = writeln!(
                    out,
                    "  {} -> {} [kind={}];",
                    dot_id(&self.label(net, nodes[a])),
                    dot_id(&self.label(net, nodes[b])),
                    kind
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::classify_nodes;
    use crate::fixtures;
    use crate::subnetworks::decompose;

    fn build(net: &IONetwork) -> PatternNetwork {
        let cls = classify_nodes(net).unwrap();
        let dec = decompose(net, &cls).unwrap();
        build_pattern_network(net, &cls, &dec).unwrap()
    }

    #[test]
    fn e8_pattern_network() {
        let net = fixtures::e8();
        let p = build(&net);
        let labels: Vec<String> = p.backbone.iter().map(|&b| p.label(&net, b)).collect();
        assert_eq!(labels, vec!["ι", "L̃1", "o"]);
        let comps: Vec<Vec<String>> = p
            .components
            .iter()
            .map(|c| net.sorted_names(c.iter().copied()))
            .collect();
        assert_eq!(comps, vec![vec!["τ1"], vec!["τ2"], vec!["τ3"]]);
        assert_eq!(p.appendage_arrows, BTreeSet::from([(2, 1)]));
        assert_eq!(p.vmax, vec![0, 1, 1]);
        assert_eq!(p.vmin, vec![1, 2, 2]);
    }

    #[test]
    fn haldane_pattern_network() {
        let net = fixtures::haldane();
        let p = build(&net);
        assert_eq!(p.backbone.len(), 3);
        assert!(p.components.is_empty());
    }

    #[test]
    fn loop_through_super_simple_node() {
        let net = fixtures::linked_loop();
        let p = build(&net);
        let labels: Vec<String> = p.backbone.iter().map(|&b| p.label(&net, b)).collect();
        assert_eq!(labels, vec!["ι", "L̃1", "s", "L̃2", "o"]);
        assert_eq!(p.components.len(), 1);
        assert_eq!(p.vmax, vec![2]);
        assert_eq!(p.vmin, vec![2]);
    }

    #[test]
    fn linked_node_lives_in_backbone() {
        let net = fixtures::linked_diamond();
        let p = build(&net);
        assert!(p.components.is_empty());
        assert_eq!(p.pattern_node_of(net.id("t").unwrap()), PatternNode::Backbone(1));
    }

    #[test]
    fn pattern_node_lookup() {
        let net = fixtures::e8();
        let p = build(&net);
        assert_eq!(p.pattern_node_of_name(&net, "σ").unwrap(), PatternNode::Backbone(1));
        assert_eq!(p.pattern_node_of_name(&net, "ι").unwrap(), PatternNode::SuperSimple(0));
        assert_eq!(p.pattern_node_of_name(&net, "τ2").unwrap(), PatternNode::Appendage(1));
        assert!(p.pattern_node_of_name(&net, "nope").is_err());
    }

    #[test]
    fn dot_output() {
        let net = fixtures::e8();
        let p = build(&net);
        let dot = p.to_dot(&net);
        assert!(dot.contains("\"Ã3\" -> \"Ã2\" [kind=appendage];"));
        assert!(dot.contains("\"Ã1\" -> \"ι\" [kind=vmax];"));
        assert!(dot.contains("\"o\" -> \"Ã3\" [kind=vmin];"));
    }
}
