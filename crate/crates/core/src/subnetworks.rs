//! Structural and appendage subnetworks and their determinant-block index sets.

use std::collections::BTreeSet;

use crate::classify::{components_without_super_simple, NodeClassification};
use crate::error::{Error, Result};
use crate::graph;
use crate::network::{IONetwork, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuralSubnetwork {
    /// 1-based.
    pub index: usize,
    pub rho_prev: NodeId,
    pub rho_next: NodeId,
    pub simple_core: BTreeSet<NodeId>,
    pub linked_appendage: BTreeSet<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendageSubnetwork {
    pub nodes: BTreeSet<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomeostasisSubnetwork {
    Structural(StructuralSubnetwork),
    Appendage(AppendageSubnetwork),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockIndexSets {
    pub row_nodes: BTreeSet<NodeId>,
    pub col_nodes: BTreeSet<NodeId>,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub structural: Vec<StructuralSubnetwork>,
    pub appendage: Vec<AppendageSubnetwork>,
}

impl StructuralSubnetwork {
    /// Simple core plus linked appendage nodes.
    pub fn interior(&self) -> BTreeSet<NodeId> {
        self.simple_core
            .union(&self.linked_appendage)
            .copied()
            .collect()
    }

    pub fn all_nodes(&self) -> BTreeSet<NodeId> {
        let mut s = self.interior();
        s.insert(self.rho_prev);
        s.insert(self.rho_next);
        s
    }

    pub fn is_haldane(&self) -> bool {
        self.simple_core.is_empty() && self.linked_appendage.is_empty()
    }
}

impl HomeostasisSubnetwork {
    pub fn all_nodes(&self) -> BTreeSet<NodeId> {
        match self {
            HomeostasisSubnetwork::Structural(s) => s.all_nodes(),
            HomeostasisSubnetwork::Appendage(a) => a.nodes.clone(),
        }
    }

    /// Nodes owned by this subnetwork alone (bounding super-simple nodes excluded).
    pub fn owned_nodes(&self) -> BTreeSet<NodeId> {
        match self {
            HomeostasisSubnetwork::Structural(s) => s.interior(),
            HomeostasisSubnetwork::Appendage(a) => a.nodes.clone(),
        }
    }

    /// Equality ignoring the structural index.
    pub fn same_as(&self, other: &HomeostasisSubnetwork) -> bool {
        match (self, other) {
            (HomeostasisSubnetwork::Structural(a), HomeostasisSubnetwork::Structural(b)) => {
                a.rho_prev == b.rho_prev
                    && a.rho_next == b.rho_next
                    && a.simple_core == b.simple_core
                    && a.linked_appendage == b.linked_appendage
            }
            (HomeostasisSubnetwork::Appendage(a), HomeostasisSubnetwork::Appendage(b)) => {
                a.nodes == b.nodes
            }
            _ => false,
        }
    }

    pub fn block(&self) -> BlockIndexSets {
        match self {
            HomeostasisSubnetwork::Appendage(a) => BlockIndexSets {
                row_nodes: a.nodes.clone(),
                col_nodes: a.nodes.clone(),
            },
            HomeostasisSubnetwork::Structural(s) => {
                let all = s.all_nodes();
                let mut rows = all.clone();
                rows.remove(&s.rho_prev);
                let mut cols = all;
                cols.remove(&s.rho_next);
                BlockIndexSets {
                    row_nodes: rows,
                    col_nodes: cols,
                }
            }
        }
    }

    /// Short human label such as `L1` or `{τ1}`.
    pub fn label(&self, net: &IONetwork) -> String {
        match self {
            HomeostasisSubnetwork::Structural(s) => format!("L{}", s.index),
            HomeostasisSubnetwork::Appendage(a) => {
                format!("{{{}}}", net.sorted_names(a.nodes.iter().copied()).join(","))
            }
        }
    }
}

pub fn structural_subnetworks(
    net: &IONetwork,
    cls: &NodeClassification,
) -> Result<Vec<StructuralSubnetwork>> {
    let q1 = cls.segments();
    let mut out: Vec<StructuralSubnetwork> = (1..=q1)
        .map(|j| StructuralSubnetwork {
            index: j,
            rho_prev: cls.super_simple[j - 1],
            rho_next: cls.super_simple[j],
            simple_core: BTreeSet::new(),
            linked_appendage: BTreeSet::new(),
        })
        .collect();

    for &v in &cls.simple {
        let pos = cls.position[v].expect("simple nodes have a position");
        if pos % 2 == 1 {
            out[pos / 2].simple_core.insert(v);
        }
    }

    let (comp, ncomp) = components_without_super_simple(net, cls);
    let mut segment_of_comp: Vec<Option<usize>> = vec![None; ncomp];
    for s in &out {
        for &v in &s.simple_core {
            match segment_of_comp[comp[v]] {
                Some(j) if j != s.index => {
                    return Err(Error::Invariant(format!(
                        "cycle joins simple nodes of L{} and L{}",
                        j, s.index
                    )))
                }
                _ => segment_of_comp[comp[v]] = Some(s.index),
            }
        }
    }
    for &t in &cls.appendage {
        if cls.is_super_appendage(t) {
            continue;
        }
        match segment_of_comp[comp[t]] {
            Some(j) => {
                out[j - 1].linked_appendage.insert(t);
            }
            None => {
                return Err(Error::Invariant(format!(
                    "appendage node `{}` is neither super-appendage nor linked",
                    net.name(t)
                )))
            }
        }
    }
    Ok(out)
}

pub fn appendage_subnetworks(net: &IONetwork, cls: &NodeClassification) -> Vec<AppendageSubnetwork> {
    let mut alive = vec![false; net.len()];
    for &t in &cls.super_appendage {
        alive[t] = true;
    }
    let (comp, ncomp) = graph::scc(net.successors(), &alive);
    let mut groups = vec![BTreeSet::new(); ncomp];
    for &t in &cls.super_appendage {
        groups[comp[t]].insert(t);
    }
    groups.sort_by_key(|g| g.iter().map(|&v| net.rank(v)).min());
    groups
        .into_iter()
        .map(|nodes| AppendageSubnetwork { nodes })
        .collect()
}

pub fn decompose(net: &IONetwork, cls: &NodeClassification) -> Result<Decomposition> {
    let dec = Decomposition {
        structural: structural_subnetworks(net, cls)?,
        appendage: appendage_subnetworks(net, cls),
    };
    dec.check_partition(net, cls)?;
    Ok(dec)
}

impl Decomposition {
    /// Structural subnetworks by index, then appendage subnetworks by smallest member.
    pub fn all(&self) -> Vec<HomeostasisSubnetwork> {
        self.structural
            .iter()
            .cloned()
            .map(HomeostasisSubnetwork::Structural)
            .chain(self.appendage.iter().cloned().map(HomeostasisSubnetwork::Appendage))
            .collect()
    }

    pub fn contains(&self, k: &HomeostasisSubnetwork) -> bool {
        self.all().iter().any(|x| x.same_as(k))
    }

    pub fn block(&self, k: &HomeostasisSubnetwork) -> Result<BlockIndexSets> {
        if self.contains(k) {
            Ok(k.block())
        } else {
            Err(Error::ForeignSubnetwork)
        }
    }

    fn check_partition(&self, net: &IONetwork, cls: &NodeClassification) -> Result<()> {
        let mut hits = vec![0usize; net.len()];
        for &r in &cls.super_simple {
            hits[r] += 1;
        }
        for s in &self.structural {
            for v in s.interior() {
                hits[v] += 1;
            }
        }
        for a in &self.appendage {
            for &v in &a.nodes {
                hits[v] += 1;
            }
        }
        if let Some(v) = hits.iter().position(|&h| h != 1) {
            return Err(Error::Invariant(format!(
                "node `{}` is covered {} times by the decomposition",
                net.name(v),
                hits[v]
            )));
        }
        for k in self.all() {
            let b = k.block();
            if b.row_nodes.len() != b.col_nodes.len() {
                return Err(Error::Invariant("non-square homeostasis block".into()));
            }
        }
        Ok(())
    }
}

/// Row and column nodes of the determinant block belonging to `k`.
pub fn block_index_sets(net: &IONetwork, k: &HomeostasisSubnetwork) -> Result<BlockIndexSets> {
    let cls = crate::classify::classify_nodes(net)?;
    decompose(net, &cls)?.block(k)
}
