//! Enumeration caps. `HAPPY_MAX_SUBSETS` overrides every default.

use std::env;

pub const ENV_MAX_SUBSETS: &str = "HAPPY_MAX_SUBSETS";

/// Colorings the brute-force oracle may enumerate.
pub const DEFAULT_BRUTE_CAP: u64 = 20_000_000;
/// Largest ground set the partition solvers accept.
pub const DEFAULT_PARTITION_CAP: usize = 25;
/// Cells (u64) per ranked-transform table: 256 MiB.
pub const DEFAULT_TRANSFORM_CELLS: u64 = 1 << 25;
/// Estimated multiply-adds the ranked transform may spend before the
/// caller falls back to the layered subset DP.
pub const DEFAULT_TRANSFORM_OPS: u64 = 1 << 30;

fn env_override() -> Option<u64> {
    env::var(ENV_MAX_SUBSETS).ok().and_then(|s| s.trim().parse().ok())
}

pub fn brute_cap() -> u64 {
    env_override().unwrap_or(DEFAULT_BRUTE_CAP)
}

/// Ground-set cap; the override is read as a subset count `2^n`.
pub fn partition_cap() -> usize {
    match env_override() {
        Some(s) if s > 0 => (63 - s.leading_zeros()) as usize,
        _ => DEFAULT_PARTITION_CAP,
    }
}

/// Entries a single tree-decomposition table may hold.
pub const DEFAULT_TABLE_STATES: u64 = 1 << 22;
/// Reachable states summed over all decomposition tables.
pub const DEFAULT_TOTAL_STATES: u64 = 1 << 23;
