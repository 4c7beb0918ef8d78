//! Seeded random core networks for property checks.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::enumerate_io_simple_paths;
use crate::network::IONetwork;

/// Path cap used when screening random networks.
pub const CORPUS_PATH_CAP: usize = 10_000;

/// A random core network with node count drawn from `sizes`. Nodes are named
/// `i`, `o` and `x1`, `x2`, ...; each ordered pair carries an arrow with a
/// probability drawn once per candidate from [0.12, 0.3). Candidates that are
/// not core or exceed the path cap are discarded.
pub fn random_core_network(seed: u64, sizes: RangeInclusive<usize>) -> IONetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.gen_range(sizes.clone()).max(2);
        let p: f64 = rng.gen_range(0.12..0.3);
        let mut names = vec!["i".to_string(), "o".to_string()];
        names.extend((1..n - 1).map(|k| format!("x{k}")));
        let mut arrows = Vec::new();
        for t in 0..n {
            for h in 0..n {
                if t != h && rng.gen_bool(p) {
                    arrows.push((names[t].as_str(), names[h].as_str()));
                }
            }
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let net = IONetwork::new(&refs, "i", "o", &arrows).expect("generated names are valid");
        if net.validate_core().is_core && enumerate_io_simple_paths(&net, CORPUS_PATH_CAP).is_ok() {
            return net;
        }
    }
}

/// `count` networks from consecutive seeds starting at `base_seed`.
pub fn corpus(count: usize, base_seed: u64, sizes: RangeInclusive<usize>) -> Vec<IONetwork> {
    (0..count as u64)
        .map(|k| random_core_network(base_seed.wrapping_add(k), sizes.clone()))
        .collect()
}
