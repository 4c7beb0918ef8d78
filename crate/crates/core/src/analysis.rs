use crate::classify::{classify_nodes_with_cap, NodeClassification, DEFAULT_PATH_CAP};
use crate::error::Result;
use crate::network::IONetwork;
use crate::pattern_net::{build_pattern_network, PatternNetwork};
use crate::subnetworks::{decompose, Decomposition, HomeostasisSubnetwork};

/// A network together with its classification, decomposition and pattern network.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub net: IONetwork,
    pub cls: NodeClassification,
    pub dec: Decomposition,
    pub pnet: PatternNetwork,
}

impl Analysis {
    pub fn new(net: IONetwork) -> Result<Self> {
        Self::with_cap(net, DEFAULT_PATH_CAP)
    }

    pub fn with_cap(net: IONetwork, cap: usize) -> Result<Self> {
        let cls = classify_nodes_with_cap(&net, cap)?;
        let dec = decompose(&net, &cls)?;
        let pnet = build_pattern_network(&net, &cls, &dec)?;
        Ok(Analysis { net, cls, dec, pnet })
    }

    pub fn subnetworks(&self) -> Vec<HomeostasisSubnetwork> {
        self.dec.all()
    }
}
