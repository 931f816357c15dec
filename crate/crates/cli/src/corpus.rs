//! Corpus manifests: named groups of seeds, each expanded through
//! `random_instance` with the group's parameter template.
//!
//! Instances are drawn with ChaCha8 (`rand_chacha`) seeded by `seed_from_u64`,
//! so a manifest regenerates the same operators on every platform.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use schrograph_core::{random_instance, CorpusParams, Flavor, OperatorCoefficients};

use crate::error::{CliError, Result};
use crate::io::read_text;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub groups: Vec<Group>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Group {
    pub name: String,
    /// Groups sharing a suite name run together.
    pub suite: String,
    /// Every field except `seed`, which comes from `seeds`.
    pub params: CorpusParams,
    pub seeds: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub group: String,
    pub seed: u64,
    pub op: OperatorCoefficients,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse { path: path.display().to_string(), message: e.to_string() })
    }

    pub fn suites(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for g in &self.groups {
            if !out.contains(&g.suite.as_str()) {
                out.push(&g.suite);
            }
        }
        out
    }

    /// All instances of `suite`, in manifest order.
    pub fn instances(&self, suite: &str) -> Result<Vec<Instance>> {
        let groups: Vec<&Group> = self.groups.iter().filter(|g| g.suite == suite).collect();
        if groups.is_empty() {
            return Err(CliError::Usage(format!("manifest has no suite `{suite}`")));
        }
        let mut out = Vec::new();
        for g in groups {
            for &seed in &g.seeds {
                let params = CorpusParams { seed, ..g.params.clone() };
                let (_, op) = random_instance(&params)?;
                out.push(Instance { group: g.name.clone(), seed, op });
            }
        }
        Ok(out)
    }
}

/// The first `count` seeds from `start` for which the template is satisfiable.
pub fn satisfiable_seeds(template: &CorpusParams, start: u64, count: usize) -> Vec<u64> {
    (start..)
        .filter(|&seed| random_instance(&CorpusParams { seed, ..template.clone() }).is_ok())
        .take(count)
        .collect()
}

/// Random spectral parameters for one instance. The stream depends only on the
/// run seed and the instance seed.
pub fn lambda_rng(run_seed: u64, instance_seed: u64, flavor: Flavor) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    rng.set_stream(instance_seed.wrapping_mul(2).wrapping_add(matches!(flavor, Flavor::Edge) as u64));
    rng
}

/// `λ` uniform in `(-limit, limit)`, at least `margin` away from the band edges.
pub fn draw_lambda(rng: &mut ChaCha8Rng, limit: f64, margin: f64) -> f64 {
    loop {
        let l = rng.random_range(-limit..limit);
        if (l.abs() - 2.0).abs() > margin && l.abs() < limit - margin {
            return l;
        }
    }
}
