//! Resource caps shared by the computations.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// maximum number of paths (or representatives) in one degree
    pub path_cap: usize,
    /// maximum number of variables in one seminorm LP
    pub lp_var_cap: usize,
    /// highest cohomological degree computed
    pub degree: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            path_cap: 20_000,
            lp_var_cap: 5_000,
            degree: 3,
        }
    }
}
