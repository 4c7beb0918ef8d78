//! Simple-path enumeration and node classification.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph;
use crate::network::{IONetwork, NodeId};

pub const DEFAULT_PATH_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeClassification {
    pub simple: BTreeSet<NodeId>,
    /// ρ0 = input, ..., ρ_{q+1} = output.
    pub super_simple: Vec<NodeId>,
    pub appendage: BTreeSet<NodeId>,
    pub super_appendage: BTreeSet<NodeId>,
    pub io_paths: Vec<Vec<NodeId>>,
    /// Chain position of each simple node: ρ_k sits at 2k, nodes strictly
    /// between ρ_{j-1} and ρ_j at 2j-1. `None` for appendage nodes.
    pub position: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreceqVerdict {
    StrictlyPrecedes,
    EqualSuperSimple,
    SameSimpleSubnetwork,
    StrictlyFollows,
}

/// All simple paths from `from` to `to`, depth first with successors in name order.
/// A path from a node to itself is the single-node path.
pub fn simple_paths(
    net: &IONetwork,
    from: NodeId,
    to: NodeId,
    cap: usize,
) -> Result<Vec<Vec<NodeId>>> {
    if from == to {
        return Ok(vec![vec![from]]);
    }
    let mut paths = Vec::new();
    let mut on_path = vec![false; net.len()];
    let mut path = vec![from];
    on_path[from] = true;
    let mut cursor: Vec<usize> = vec![0];

    while let Some(&v) = path.last() {
        let i = *cursor.last().unwrap();
        let succ = net.succ(v);
        if i == succ.len() {
            path.pop();
            cursor.pop();
            on_path[v] = false;
            continue;
        }
        *cursor.last_mut().unwrap() += 1;
        let w = succ[i];
        if on_path[w] {
            continue;
        }
        if w == to {
            if paths.len() == cap {
                return Err(Error::PathExplosion { cap });
            }
            let mut p = path.clone();
            p.push(w);
            paths.push(p);
        } else {
            on_path[w] = true;
            path.push(w);
            cursor.push(0);
        }
    }
    Ok(paths)
}

pub fn enumerate_io_simple_paths(net: &IONetwork, cap: usize) -> Result<Vec<Vec<NodeId>>> {
    simple_paths(net, net.input(), net.output(), cap)
}

/// Nodes common to every path, ordered as on the first one.
/// Fails if some path visits them in a different order.
pub fn common_nodes_in_order(paths: &[Vec<NodeId>], n: usize) -> Result<Vec<NodeId>> {
    let Some(first) = paths.first() else {
        return Err(Error::Invariant("no paths to intersect".into()));
    };
    let mut count = vec![0usize; n];
    for p in paths {
        for &v in p {
            count[v] += 1;
        }
    }
    let common: Vec<NodeId> = first
        .iter()
        .copied()
        .filter(|&v| count[v] == paths.len())
        .collect();
    for p in &paths[1..] {
        let order: Vec<NodeId> = p.iter().copied().filter(|&v| count[v] == paths.len()).collect();
        if order != common {
            return Err(Error::Invariant(
                "super-simple nodes appear in different orders on two paths".into(),
            ));
        }
    }
    Ok(common)
}

pub fn classify_nodes(net: &IONetwork) -> Result<NodeClassification> {
    classify_nodes_with_cap(net, DEFAULT_PATH_CAP)
}

pub fn classify_nodes_with_cap(net: &IONetwork, cap: usize) -> Result<NodeClassification> {
    net.require_core()?;
    let n = net.len();
    let io_paths = enumerate_io_simple_paths(net, cap)?;
    let simple: BTreeSet<NodeId> = io_paths.iter().flatten().copied().collect();
    let appendage: BTreeSet<NodeId> = (0..n).filter(|v| !simple.contains(v)).collect();
    let super_simple = common_nodes_in_order(&io_paths, n)?;
    if super_simple.first() != Some(&net.input()) || super_simple.last() != Some(&net.output()) {
        return Err(Error::Invariant("input and output must be super-simple".into()));
    }

    let mut position: Vec<Option<usize>> = vec![None; n];
    let mut is_super = vec![false; n];
    for (k, &rho) in super_simple.iter().enumerate() {
        position[rho] = Some(2 * k);
        is_super[rho] = true;
    }
    for p in &io_paths {
        let mut seg = 0;
        for &v in p {
            if is_super[v] {
                seg = position[v].unwrap() / 2 + 1;
                continue;
            }
            let pos = 2 * seg - 1;
            match position[v] {
                None => position[v] = Some(pos),
                Some(old) if old != pos => {
                    return Err(Error::Invariant(format!(
                        "node `{}` lies between different super-simple pairs",
                        net.name(v)
                    )))
                }
                _ => {}
            }
        }
    }

    let super_appendage = per_path_super_appendage(net, &io_paths, &appendage);
    Ok(NodeClassification {
        simple,
        super_simple,
        appendage,
        super_appendage,
        io_paths,
        position,
    })
}

/// Appendage nodes whose component in every complementary subnetwork is all appendage.
fn per_path_super_appendage(
    net: &IONetwork,
    paths: &[Vec<NodeId>],
    appendage: &BTreeSet<NodeId>,
) -> BTreeSet<NodeId> {
    let n = net.len();
    let mut candidate: BTreeSet<NodeId> = appendage.clone();
    for p in paths {
        if candidate.is_empty() {
            break;
        }
        let mut alive = vec![true; n];
        for &v in p {
            alive[v] = false;
        }
        let (comp, ncomp) = graph::scc(net.successors(), &alive);
        let mut dirty = vec![false; ncomp];
        for v in 0..n {
            if alive[v] && !appendage.contains(&v) {
                dirty[comp[v]] = true;
            }
        }
        candidate.retain(|&t| !dirty[comp[t]]);
    }
    candidate
}

/// Super-appendage test via components of the graph with super-simple nodes removed.
pub fn fast_super_appendage(net: &IONetwork, cls: &NodeClassification) -> BTreeSet<NodeId> {
    let (comp, ncomp) = components_without_super_simple(net, cls);
    let mut dirty = vec![false; ncomp];
    for &s in &cls.simple {
        if comp[s] != usize::MAX {
            dirty[comp[s]] = true;
        }
    }
    cls.appendage
        .iter()
        .copied()
        .filter(|&t| !dirty[comp[t]])
        .collect()
}

/// SCC labelling of the graph with all super-simple nodes deleted.
pub fn components_without_super_simple(
    net: &IONetwork,
    cls: &NodeClassification,
) -> (Vec<usize>, usize) {
    let mut alive = vec![true; net.len()];
    for &r in &cls.super_simple {
        alive[r] = false;
    }
    graph::scc(net.successors(), &alive)
}

impl NodeClassification {
    pub fn is_simple(&self, v: NodeId) -> bool {
        self.simple.contains(&v)
    }

    pub fn is_super_simple(&self, v: NodeId) -> bool {
        self.super_simple.contains(&v)
    }

    pub fn is_super_appendage(&self, v: NodeId) -> bool {
        self.super_appendage.contains(&v)
    }

    /// Number of structural subnetworks (q + 1).
    pub fn segments(&self) -> usize {
        self.super_simple.len() - 1
    }
}

pub fn preceq(
    net: &IONetwork,
    cls: &NodeClassification,
    a: NodeId,
    b: NodeId,
) -> Result<PreceqVerdict> {
    let pos = |v: NodeId| cls.position[v].ok_or_else(|| Error::NotSimple(net.name(v).to_string()));
    let (pa, pb) = (pos(a)?, pos(b)?);
    Ok(match pa.cmp(&pb) {
        std::cmp::Ordering::Less => PreceqVerdict::StrictlyPrecedes,
        std::cmp::Ordering::Greater => PreceqVerdict::StrictlyFollows,
        std::cmp::Ordering::Equal if pa % 2 == 0 => PreceqVerdict::EqualSuperSimple,
        std::cmp::Ordering::Equal => PreceqVerdict::SameSimpleSubnetwork,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn names(net: &IONetwork, vs: impl IntoIterator<Item = NodeId>) -> Vec<String> {
        net.sorted_names(vs)
    }

    fn path_names(net: &IONetwork, paths: &[Vec<NodeId>]) -> Vec<Vec<String>> {
        paths
            .iter()
            .map(|p| p.iter().map(|&v| net.name(v).to_string()).collect())
            .collect()
    }

    #[test]
    fn e8_paths() {
        let net = fixtures::e8();
        let paths = enumerate_io_simple_paths(&net, 100).unwrap();
        assert_eq!(path_names(&net, &paths), vec![vec!["ι", "o"], vec!["ι", "σ", "o"]]);
    }

    #[test]
    fn haldane_and_diamond_paths() {
        let h = fixtures::haldane();
        assert_eq!(
            path_names(&h, &enumerate_io_simple_paths(&h, 10).unwrap()),
            vec![vec!["ι", "o"]]
        );
        let d = fixtures::diamond();
        assert_eq!(
            path_names(&d, &enumerate_io_simple_paths(&d, 10).unwrap()),
            vec![vec!["ι", "a", "o"], vec!["ι", "b", "o"]]
        );
    }

    #[test]
    fn cap_enforced() {
        let d = fixtures::diamond();
        assert!(matches!(
            enumerate_io_simple_paths(&d, 1),
            Err(Error::PathExplosion { cap: 1 })
        ));
        assert_eq!(enumerate_io_simple_paths(&d, 2).unwrap().len(), 2);
    }

    #[test]
    fn e8_classification() {
        let net = fixtures::e8();
        let c = classify_nodes(&net).unwrap();
        assert_eq!(names(&net, c.simple.iter().copied()), vec!["o", "ι", "σ"]);
        assert_eq!(
            c.super_simple.iter().map(|&v| net.name(v)).collect::<Vec<_>>(),
            vec!["ι", "o"]
        );
        assert_eq!(names(&net, c.appendage.iter().copied()), vec!["τ1", "τ2", "τ3"]);
        assert_eq!(names(&net, c.super_appendage.iter().copied()), vec!["τ1", "τ2", "τ3"]);
        assert_eq!(fast_super_appendage(&net, &c), c.super_appendage);
    }

    #[test]
    fn haldane_classification() {
        let net = fixtures::haldane();
        let c = classify_nodes(&net).unwrap();
        assert_eq!(c.simple.len(), 2);
        assert_eq!(c.super_simple, vec![0, 1]);
        assert!(c.appendage.is_empty());
        assert!(fast_super_appendage(&net, &c).is_empty());
    }

    #[test]
    fn loop_through_super_simple_node_is_super_appendage() {
        let net = fixtures::linked_loop();
        let c = classify_nodes(&net).unwrap();
        assert_eq!(names(&net, c.appendage.iter().copied()), vec!["t"]);
        assert_eq!(names(&net, c.super_appendage.iter().copied()), vec!["t"]);
        assert_eq!(fast_super_appendage(&net, &c), c.super_appendage);
        assert_eq!(
            c.super_simple.iter().map(|&v| net.name(v)).collect::<Vec<_>>(),
            vec!["ι", "s", "o"]
        );
    }

    #[test]
    fn linked_appendage_is_not_super_appendage() {
        let net = fixtures::linked_diamond();
        let c = classify_nodes(&net).unwrap();
        assert_eq!(names(&net, c.appendage.iter().copied()), vec!["t"]);
        assert!(c.super_appendage.is_empty());
        assert!(fast_super_appendage(&net, &c).is_empty());
    }

    #[test]
    fn no_appendage_nodes_means_empty_fast_set() {
        let net = fixtures::diamond();
        let c = classify_nodes(&net).unwrap();
        assert!(fast_super_appendage(&net, &c).is_empty());
    }

    #[test]
    fn non_core_rejected() {
        let net = IONetwork::new(&["i", "a", "o"], "i", "o", &[("i", "o")]).unwrap();
        assert!(matches!(classify_nodes(&net), Err(Error::NotCore { .. })));
    }

    #[test]
    fn preceq_verdicts() {
        let net = fixtures::e8();
        let c = classify_nodes(&net).unwrap();
        let id = |s| net.id(s).unwrap();
        assert_eq!(preceq(&net, &c, id("ι"), id("σ")).unwrap(), PreceqVerdict::StrictlyPrecedes);
        assert_eq!(preceq(&net, &c, id("o"), id("o")).unwrap(), PreceqVerdict::EqualSuperSimple);
        assert_eq!(preceq(&net, &c, id("o"), id("σ")).unwrap(), PreceqVerdict::StrictlyFollows);
        assert!(matches!(preceq(&net, &c, id("τ1"), id("σ")), Err(Error::NotSimple(_))));

        let d = fixtures::diamond();
        let cd = classify_nodes(&d).unwrap();
        assert_eq!(
            preceq(&d, &cd, d.id("a").unwrap(), d.id("b").unwrap()).unwrap(),
            PreceqVerdict::SameSimpleSubnetwork
        );
    }
}
