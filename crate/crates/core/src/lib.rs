//! Homeostasis analysis of input-output networks.
//!
//! A network is decomposed into structural and appendage subnetworks, each of
//! which owns one irreducible block of the homeostasis matrix. The pattern
//! network over those subnetworks decides which nodes become homeostatic when a
//! given block determinant vanishes. Two independent checks back this up: an
//! exact rational determinant oracle and a numerical equilibrium continuation.

pub mod analysis;
pub mod classify;
pub mod corpus;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod induction;
pub mod network;
pub mod odesim;
pub mod oracle;
pub mod pattern_net;
pub mod subnetworks;

pub use analysis::Analysis;
pub use error::{Error, Result};
pub use network::{parse_network, IONetwork, NodeId};
