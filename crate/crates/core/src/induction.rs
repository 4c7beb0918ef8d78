//! Homeostasis induction: a pattern-network engine and an output-repositioning engine.

use std::collections::{BTreeSet, VecDeque};

use crate::analysis::Analysis;
use crate::classify::{classify_nodes_with_cap, common_nodes_in_order, simple_paths, DEFAULT_PATH_CAP};
use crate::error::{Error, Result};
use crate::graph;
use crate::network::{IONetwork, NodeId};
use crate::pattern_net::{PatternNetwork, PatternNode};
use crate::subnetworks::{decompose, HomeostasisSubnetwork};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomeostasisPattern {
    pub source: HomeostasisSubnetwork,
    pub nodes: BTreeSet<NodeId>,
}

pub fn induces_theorem(pnet: &PatternNetwork, source: PatternNode, target: PatternNode) -> Result<bool> {
    match source {
        PatternNode::SuperSimple(k) => Err(Error::SuperSimpleSource(format!("ρ{k}"))),
        PatternNode::Backbone(j) => {
            let p = 2 * j - 1;
            Ok(match target {
                PatternNode::Appendage(b) => pnet.vmin[b] > p,
                chain => chain.chain_position().unwrap() > p,
            })
        }
        PatternNode::Appendage(a) => {
            let m = pnet.vmax[a];
            Ok(match target {
                PatternNode::SuperSimple(k) => 2 * k >= m,
                PatternNode::Backbone(j) => 2 * j - 1 > m,
                PatternNode::Appendage(b) => b != a && appendage_window_blocks(pnet, a, b),
            })
        }
    }
}

/// True iff Ã_b is reachable from Ã_a in the pattern network and every such
/// path meets a super-simple node ρ with V_max(Ã_a) ⪯ ρ ⪯ V_min(Ã_b).
fn appendage_window_blocks(pnet: &PatternNetwork, a: usize, b: usize) -> bool {
    let adj = pnet.adjacency();
    let (from, to) = (
        pnet.dense(PatternNode::Appendage(a)),
        pnet.dense(PatternNode::Appendage(b)),
    );
    let mut alive = vec![true; adj.len()];
    if !graph::bfs(&adj, from, &alive)[to] {
        return false;
    }
    let (lo, hi) = (pnet.vmax[a], pnet.vmin[b]);
    for pos in (lo..=hi).filter(|p| p % 2 == 0) {
        alive[pos] = false;
    }
    !graph::bfs(&adj, from, &alive)[to]
}

/// Pattern induced by `k`, computed on the pattern network.
pub fn homeostasis_pattern(an: &Analysis, k: &HomeostasisSubnetwork) -> Result<HomeostasisPattern> {
    let src = an.pnet.node_for(k)?;
    let mut nodes = BTreeSet::from([an.net.output()]);
    for target in an.pnet.nodes() {
        if induces_theorem(&an.pnet, src, target)? {
            nodes.extend(an.pnet.contents(target));
        }
    }
    Ok(HomeostasisPattern {
        source: k.clone(),
        nodes,
    })
}

/// One pattern per homeostasis subnetwork; fails if two coincide.
pub fn all_patterns(an: &Analysis) -> Result<Vec<HomeostasisPattern>> {
    let pats = an
        .subnetworks()
        .iter()
        .map(|k| homeostasis_pattern(an, k))
        .collect::<Result<Vec<_>>>()?;
    for (i, a) in pats.iter().enumerate() {
        for b in &pats[i + 1..] {
            if a.nodes == b.nodes {
                return Err(Error::Invariant(format!(
                    "subnetworks {} and {} share a pattern",
                    a.source.label(&an.net),
                    b.source.label(&an.net)
                )));
            }
        }
    }
    Ok(pats)
}

/// Whether `k` forces `kappa` to be homeostatic, decided by moving the output to
/// `kappa` and decomposing the resulting network from scratch.
pub fn induces_reposition(net: &IONetwork, k: &HomeostasisSubnetwork, kappa: NodeId) -> Result<bool> {
    if kappa == net.output() {
        return Ok(true);
    }
    if kappa == net.input() {
        return Ok(induces_input(net, k));
    }
    let moved = net.with_output(kappa)?;
    if !moved.validate_core().is_core {
        return Err(Error::NonCoreReposition(net.name(kappa).to_string()));
    }
    let cls = classify_nodes_with_cap(&moved, DEFAULT_PATH_CAP)?;
    let dec = decompose(&moved, &cls)?;
    Ok(dec.contains(k))
}

/// With the input row and column both removed, the homeostasis matrix is the
/// principal submatrix on every other node, whose irreducible factors are the
/// components of the graph with the input deleted.
fn induces_input(net: &IONetwork, k: &HomeostasisSubnetwork) -> bool {
    let HomeostasisSubnetwork::Appendage(a) = k else {
        return false;
    };
    let mut alive = vec![true; net.len()];
    alive[net.input()] = false;
    let (comp, _) = graph::scc(net.successors(), &alive);
    let Some(&first) = a.nodes.iter().next() else {
        return false;
    };
    let c = comp[first];
    (0..net.len()).all(|v| (comp[v] == c) == a.nodes.contains(&v))
}

/// Chain position of σ^u(κ): κ's own position if simple, otherwise the most
/// upstream simple node with an appendage path into κ.
pub fn sigma_u_position(an: &Analysis, kappa: NodeId) -> Result<usize> {
    if let Some(p) = an.cls.position[kappa] {
        return Ok(p);
    }
    let net = &an.net;
    let mut seen = vec![false; net.len()];
    seen[kappa] = true;
    let mut queue = VecDeque::from([kappa]);
    let mut best: Option<usize> = None;
    while let Some(v) = queue.pop_front() {
        for &w in net.pred(v) {
            if let Some(p) = an.cls.position[w] {
                best = Some(best.map_or(p, |b| b.min(p)));
            } else if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    best.ok_or_else(|| Error::Invariant(format!("no simple node upstream of `{}`", net.name(kappa))))
}

/// Super-simple nodes of the network with its output moved to `kappa`
/// (no core requirement).
pub fn super_simple_toward(net: &IONetwork, kappa: NodeId, cap: usize) -> Result<Vec<NodeId>> {
    let paths = simple_paths(net, net.input(), kappa, cap)?;
    if paths.is_empty() {
        return Err(Error::Invariant(format!("`{}` unreachable from input", net.name(kappa))));
    }
    common_nodes_in_order(&paths, net.len())
}

#[derive(Debug, Clone, Default)]
pub struct EngineReport {
    pub checked: usize,
    /// (subnetwork label, node name) pairs skipped because the repositioned network is not core.
    pub skipped: Vec<(String, String)>,
    /// (subnetwork label, node name, theorem verdict, reposition verdict).
    pub disagreements: Vec<(String, String, bool, bool)>,
}

impl EngineReport {
    pub fn agree(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Runs both engines on every (subnetwork, node) pair.
pub fn check_engines(an: &Analysis) -> Result<EngineReport> {
    let mut report = EngineReport::default();
    let order = an.net.sorted(0..an.net.len());
    for k in an.subnetworks() {
        let pattern = homeostasis_pattern(an, &k)?;
        let label = k.label(&an.net);
        for &kappa in &order {
            let name = an.net.name(kappa).to_string();
            match induces_reposition(&an.net, &k, kappa) {
                Ok(r) => {
                    report.checked += 1;
                    let t = pattern.nodes.contains(&kappa);
                    if t != r {
                        report.disagreements.push((label.clone(), name, t, r));
                    }
                }
                Err(Error::NonCoreReposition(_)) => report.skipped.push((label.clone(), name)),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn analysis(net: IONetwork) -> Analysis {
        Analysis::new(net).unwrap()
    }

    fn pattern_names(an: &Analysis, k: &HomeostasisSubnetwork) -> Vec<String> {
        an.net.sorted_names(homeostasis_pattern(an, k).unwrap().nodes)
    }

    fn sorted(v: &[&str]) -> Vec<String> {
        let mut s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        s.sort();
        s
    }

    #[test]
    fn e8_induction_rules() {
        let an = analysis(fixtures::e8());
        let p = &an.pnet;
        use PatternNode::*;
        assert!(!induces_theorem(p, Appendage(2), Appendage(1)).unwrap());
        assert!(induces_theorem(p, Appendage(1), Appendage(2)).unwrap());
        assert!(!induces_theorem(p, Backbone(1), Appendage(0)).unwrap());
        assert!(matches!(
            induces_theorem(p, SuperSimple(0), Backbone(1)),
            Err(Error::SuperSimpleSource(_))
        ));
    }

    #[test]
    fn e8_patterns() {
        let an = analysis(fixtures::e8());
        let subs = an.subnetworks();
        assert_eq!(pattern_names(&an, &subs[0]), sorted(&["τ2", "τ3", "o"]));
        assert_eq!(pattern_names(&an, &subs[1]), sorted(&["ι", "σ", "τ2", "τ3", "o"]));
        assert_eq!(pattern_names(&an, &subs[2]), sorted(&["τ3", "o"]));
        assert_eq!(pattern_names(&an, &subs[3]), sorted(&["o"]));
        assert_eq!(all_patterns(&an).unwrap().len(), 4);
    }

    #[test]
    fn haldane_and_diamond_patterns() {
        let an = analysis(fixtures::haldane());
        let pats = all_patterns(&an).unwrap();
        assert_eq!(pats.len(), 1);
        assert_eq!(an.net.sorted_names(pats[0].nodes.clone()), vec!["o"]);

        let an = analysis(fixtures::diamond());
        let pats = all_patterns(&an).unwrap();
        assert_eq!(pats.len(), 1);
        assert_eq!(an.net.sorted_names(pats[0].nodes.clone()), vec!["o"]);
    }

    #[test]
    fn e8_reposition_examples() {
        let an = analysis(fixtures::e8());
        let subs = an.subnetworks();
        let t2 = an.net.id("τ2").unwrap();
        assert!(!induces_reposition(&an.net, &subs[3], t2).unwrap());
        assert!(induces_reposition(&an.net, &subs[0], t2).unwrap());
        for k in &subs {
            assert!(induces_reposition(&an.net, k, an.net.output()).unwrap());
        }
        assert!(induces_reposition(&an.net, &subs[1], an.net.input()).unwrap());
        assert!(!induces_reposition(&an.net, &subs[0], an.net.input()).unwrap());
    }

    #[test]
    fn engines_agree_on_fixtures() {
        for net in [
            fixtures::e8(),
            fixtures::haldane(),
            fixtures::diamond(),
            fixtures::linked_loop(),
            fixtures::linked_diamond(),
            fixtures::appendage_pair(),
        ] {
            let an = analysis(net);
            let r = check_engines(&an).unwrap();
            assert!(r.agree(), "{:?}", r.disagreements);
        }
    }

    #[test]
    fn non_core_reposition_reported() {
        let an = analysis(fixtures::diamond());
        let k = &an.subnetworks()[0];
        let a = an.net.id("a").unwrap();
        assert!(matches!(
            induces_reposition(&an.net, k, a),
            Err(Error::NonCoreReposition(_))
        ));
    }

    /// Literal path enumeration for the appendage-to-appendage rule.
    fn window_by_paths(p: &PatternNetwork, a: usize, b: usize) -> bool {
        let adj = p.adjacency();
        let from = p.dense(PatternNode::Appendage(a));
        let to = p.dense(PatternNode::Appendage(b));
        let (lo, hi) = (p.vmax[a], p.vmin[b]);
        let mut any = false;
        let mut all = true;
        let mut stack = vec![(from, vec![from])];
        while let Some((v, path)) = stack.pop() {
            for &w in &adj[v] {
                if path.contains(&w) {
                    continue;
                }
                let mut next = path.clone();
                next.push(w);
                if w == to {
                    any = true;
                    let hit = next.iter().any(|&x| x < p.backbone.len() && x % 2 == 0 && x >= lo && x <= hi);
                    all &= hit;
                } else {
                    stack.push((w, next));
                }
            }
        }
        any && all
    }

    #[test]
    fn window_rule_matches_path_enumeration() {
        for seed in 0..300u64 {
            let net = crate::corpus::random_core_network(seed, 3..=8);
            let an = analysis(net);
            let m = an.pnet.components.len();
            for a in 0..m {
                for b in 0..m {
                    if a != b {
                        assert_eq!(
                            appendage_window_blocks(&an.pnet, a, b),
                            window_by_paths(&an.pnet, a, b),
                            "seed {seed}"
                        );
                    }
                }
            }
        }
    }
}
