//! Input-output networks: ingestion, serialization, the core property and reachability.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph;

/// Index of a node in declaration order.
pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Directed graph with a distinguished input and output node.
///
/// Self-arrows are never stored; every node is implicitly self-coupled.
#[derive(Debug, Clone)]
pub struct IONetwork {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
    input: NodeId,
    output: NodeId,
    arrows: BTreeSet<(NodeId, NodeId)>,
    succ: Vec<Vec<NodeId>>,
    pred: Vec<Vec<NodeId>>,
    rank: Vec<usize>,
}

impl PartialEq for IONetwork {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.input == other.input
            && self.output == other.output
            && self.arrows == other.arrows
    }
}

impl Eq for IONetwork {}

#[derive(Debug, Serialize, Deserialize)]
struct Document {
    nodes: Vec<String>,
    input: String,
    output: String,
    #[serde(default)]
    arrows: Vec<(String, String)>,
}

/// Result of [`parse_network`].
#[derive(Debug, Clone)]
pub struct Parsed {
    pub network: IONetwork,
    /// Names of nodes whose self-arrow was dropped.
    pub dropped_self_arrows: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreReport {
    pub is_core: bool,
    pub unreachable_from_input: Vec<String>,
    pub cannot_reach_output: Vec<String>,
}

pub fn parse_network(text: &str) -> Result<Parsed> {
    let doc: Document = serde_json::from_str(text)?;
    let mut dropped = Vec::new();
    for (t, h) in &doc.arrows {
        if t == h && !dropped.contains(t) {
            dropped.push(t.clone());
        }
    }
    let arrows: Vec<(&str, &str)> = doc
        .arrows
        .iter()
        .map(|(t, h)| (t.as_str(), h.as_str()))
        .collect();
    let nodes: Vec<&str> = doc.nodes.iter().map(String::as_str).collect();
    let network = IONetwork::new(&nodes, &doc.input, &doc.output, &arrows)?;
    Ok(Parsed {
        network,
        dropped_self_arrows: dropped,
    })
}

impl IONetwork {
    /// Builds a network, deduplicating arrows and dropping self-arrows.
    pub fn new(nodes: &[&str], input: &str, output: &str, arrows: &[(&str, &str)]) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, &name) in nodes.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::EmptyNodeId);
            }
            if index.insert(name.to_string(), i).is_some() {
                return Err(Error::DuplicateNode(name.to_string()));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownNode(name.to_string()))
        };
        let input_id = lookup(input)?;
        let output_id = lookup(output)?;
        if input_id == output_id {
            return Err(Error::InputEqualsOutput(input.to_string()));
        }
        let mut set = BTreeSet::new();
        for &(t, h) in arrows {
            let (t, h) = (lookup(t)?, lookup(h)?);
            if t != h {
                set.insert((t, h));
            }
        }
        Ok(Self::assemble(
            nodes.iter().map(|s| s.to_string()).collect(),
            index,
            input_id,
            output_id,
            set,
        ))
    }

    fn assemble(
        names: Vec<String>,
        index: HashMap<String, NodeId>,
        input: NodeId,
        output: NodeId,
        arrows: BTreeSet<(NodeId, NodeId)>,
    ) -> Self {
        let n = names.len();
        let mut by_name: Vec<NodeId> = (0..n).collect();
        by_name.sort_by(|&a, &b| names[a].cmp(&names[b]));
        let mut rank = vec![0; n];
        for (r, &v) in by_name.iter().enumerate() {
            rank[v] = r;
        }
        let mut succ = vec![Vec::new(); n];
        let mut pred = vec![Vec::new(); n];
        for &(t, h) in &arrows {
            succ[t].push(h);
            pred[h].push(t);
        }
        for list in succ.iter_mut().chain(pred.iter_mut()) {
            list.sort_by_key(|&v| rank[v]);
        }
        IONetwork {
            names,
            index,
            input,
            output,
            arrows,
            succ,
            pred,
            rank,
        }
    }

    /// Same graph with `output` moved to `kappa`. Requires `kappa != input`.
    pub fn with_output(&self, kappa: NodeId) -> Result<Self> {
        if kappa == self.input {
            return Err(Error::InputEqualsOutput(self.names[kappa].clone()));
        }
        let mut net = self.clone();
        net.output = kappa;
        Ok(net)
    }

    pub fn to_json(&self) -> String {
        let doc = Document {
            nodes: self.names.clone(),
            input: self.names[self.input].clone(),
            output: self.names[self.output].clone(),
            arrows: self
                .arrows
                .iter()
                .map(|&(t, h)| (self.names[t].clone(), self.names[h].clone()))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("network document serializes")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn input(&self) -> NodeId {
        self.input
    }

    pub fn output(&self) -> NodeId {
        self.output
    }

    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Result<NodeId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    /// Successors sorted by name.
    pub fn succ(&self, v: NodeId) -> &[NodeId] {
        &self.succ[v]
    }

    /// Predecessors sorted by name.
    pub fn pred(&self, v: NodeId) -> &[NodeId] {
        &self.pred[v]
    }

    pub fn successors(&self) -> &[Vec<NodeId>] {
        &self.succ
    }

    pub fn predecessors(&self) -> &[Vec<NodeId>] {
        &self.pred
    }

    pub fn arrows(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.arrows.iter().copied()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn has_arrow(&self, tail: NodeId, head: NodeId) -> bool {
        self.arrows.contains(&(tail, head))
    }

    /// Position of `v` in lexicographic name order.
    pub fn rank(&self, v: NodeId) -> usize {
        self.rank[v]
    }

    /// Node ids sorted by name.
    pub fn sorted<I: IntoIterator<Item = NodeId>>(&self, nodes: I) -> Vec<NodeId> {
        let mut v: Vec<NodeId> = nodes.into_iter().collect();
        v.sort_by_key(|&x| self.rank[x]);
        v.dedup();
        v
    }

    pub fn sorted_names<I: IntoIterator<Item = NodeId>>(&self, nodes: I) -> Vec<String> {
        self.sorted(nodes)
            .into_iter()
            .map(|v| self.names[v].clone())
            .collect()
    }

    pub fn reachable(&self, from: NodeId, direction: Direction) -> Vec<bool> {
        let adj = match direction {
            Direction::Forward => &self.succ,
            Direction::Backward => &self.pred,
        };
        graph::bfs(adj, from, &vec![true; self.len()])
    }

    /// Name-level reachability, sorted lexicographically.
    pub fn reachable_names(&self, from: &str, direction: Direction) -> Result<Vec<String>> {
        let seen = self.reachable(self.id(from)?, direction);
        Ok(self.sorted_names((0..self.len()).filter(|&v| seen[v])))
    }

    pub fn validate_core(&self) -> CoreReport {
        let down = self.reachable(self.input, Direction::Forward);
        let up = self.reachable(self.output, Direction::Backward);
        let unreachable = self.sorted_names((0..self.len()).filter(|&v| !down[v]));
        let stuck = self.sorted_names((0..self.len()).filter(|&v| !up[v]));
        CoreReport {
            is_core: unreachable.is_empty() && stuck.is_empty(),
            unreachable_from_input: unreachable,
            cannot_reach_output: stuck,
        }
    }

    pub fn require_core(&self) -> Result<()> {
        let report = self.validate_core();
        if report.is_core {
            Ok(())
        } else {
            Err(Error::NotCore {
                unreachable: report.unreachable_from_input,
                stuck: report.cannot_reach_output,
            })
        }
    }

    /// Graphviz rendering. The input node carries `shape=invhouse, role="input"`,
    /// the output node `shape=house, role="output"`, all others `shape=ellipse`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n  rankdir=LR;\n");
        for v in self.sorted(0..self.len()) {
            let attrs = if v == self.input {
                "shape=invhouse, role=\"input\""
            } else if v == self.output {
                "shape=house, role=\"output\""
            } else {
                "shape=ellipse"
            };
            let _ = writeln!(out, "  {} [{}];", dot_id(&self.names[v]), attrs);
        }
        let mut arrows: Vec<_> = self.arrows.iter().copied().collect();
        arrows.sort_by_key(|&(t, h)| (self.rank[t], self.rank[h]));
        for (t, h) in arrows {
            let _ = writeln!(
                out,
                "  {} -> {};",
                dot_id(&self.names[t]),
                dot_id(&self.names[h])
            );
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn dot_id(name: &str) -> String {
    let escaped = name.replace('\\', "\\\\").replace('"', "\\\"");
    format!("\"{escaped}\"")
}
