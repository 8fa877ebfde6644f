use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Budget for a single prover run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ResourceLimits {
    /// Longest connection path, and the largest world count tried in model search.
    pub max_depth: u32,
    pub time_budget_ms: u64,
    /// Bound on `atoms * worlds + 2 * worlds^2` for the finite model search.
    pub max_ground_atoms: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("resource limit `{0}` must be strictly positive")]
pub struct InvalidLimits(pub &'static str);

impl ResourceLimits {
    pub fn new(
        max_depth: u32,
        time_budget_ms: u64,
        max_ground_atoms: usize,
    ) -> Result<Self, InvalidLimits> {
        let limits = ResourceLimits {
            max_depth,
            time_budget_ms,
            max_ground_atoms,
        };
        limits.validate()?;
        Ok(limits)
    }

    pub fn validate(&self) -> Result<(), InvalidLimits> {
        if self.max_depth == 0 {
            return Err(InvalidLimits("maxDepth"));
        }
        if self.time_budget_ms == 0 {
            return Err(InvalidLimits("timeBudget"));
        }
        if self.max_ground_atoms == 0 {
            return Err(InvalidLimits("maxGroundAtoms"));
        }
        Ok(())
    }

    /// Componentwise `>=`.
    pub fn dominates(&self, other: &ResourceLimits) -> bool {
        self.max_depth >= other.max_depth
            && self.time_budget_ms >= other.time_budget_ms
            && self.max_ground_atoms >= other.max_ground_atoms
    }
}

impl Default for ResourceLimits {
    fn default() -> Self {
        ResourceLimits {
            max_depth: 30,
            time_budget_ms: 5000,
            max_ground_atoms: 512,
        }
    }
}
