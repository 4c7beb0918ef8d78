//! Oracle agreement suite over a range of seeds.

use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::induction::homeostasis_pattern;
use crate::subnetworks::HomeostasisSubnetwork;

use super::jacobian::{check_product_identity, force_block_singular, numeric_pattern, sample_jacobian, RationalJacobian};

/// Redraws for a seed whose forced Jacobian turns singular.
pub const RESAMPLE_LIMIT: u64 = 16;

#[derive(Debug, Clone)]
pub struct SubnetworkVerdict {
    pub label: String,
    /// Seeds on which the oracle pattern differed from the theorem pattern.
    pub failed_seeds: Vec<u64>,
}

impl SubnetworkVerdict {
    pub fn passed(&self) -> bool {
        self.failed_seeds.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub seeds: u64,
    pub subnetworks: Vec<SubnetworkVerdict>,
    /// Seeds where the block product did not equal ±det H.
    pub product_failures: Vec<u64>,
}

impl VerifyReport {
    pub fn verified(&self) -> usize {
        self.subnetworks.iter().filter(|s| s.passed()).count()
    }

    pub fn disagreements(&self) -> usize {
        self.subnetworks.iter().map(|s| s.failed_seeds.len()).sum::<usize>() + self.product_failures.len()
    }
}

/// Forces K singular on the sample for `seed`, redrawing from derived seeds
/// when the forced Jacobian is singular.
pub fn forced_sample(an: &Analysis, k: &HomeostasisSubnetwork, seed: u64) -> Result<RationalJacobian> {
    for attempt in 0..RESAMPLE_LIMIT {
        let jac = sample_jacobian(an, seed.wrapping_add(attempt.wrapping_mul(1_000_003)))?;
        match force_block_singular(&jac, an, k) {
            Ok((forced, _)) => return Ok(forced),
            Err(Error::SingularJacobian) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateSampling(RESAMPLE_LIMIT as usize))
}

/// Checks every subnetwork's forced pattern against the theorem engine, and
/// the block product identity, for seeds `0..seeds`.
pub fn verify(an: &Analysis, seeds: u64) -> Result<VerifyReport> {
    let mut product_failures = Vec::new();
    for seed in 0..seeds {
        let jac = sample_jacobian(an, seed)?;
        match check_product_identity(an, &jac) {
            Ok(_) => {}
            Err(Error::Invariant(_)) => product_failures.push(seed),
            Err(e) => return Err(e),
        }
    }
    let mut subnetworks = Vec::new();
    for k in an.subnetworks() {
        let want = homeostasis_pattern(an, &k)?.nodes;
        let mut failed_seeds = Vec::new();
        for seed in 0..seeds {
            if numeric_pattern(&forced_sample(an, &k, seed)?)? != want {
                failed_seeds.push(seed);
            }
        }
        subnetworks.push(SubnetworkVerdict {
            label: k.label(&an.net),
            failed_seeds,
        });
    }
    Ok(VerifyReport {
        seeds,
        subnetworks,
        product_failures,
    })
}
