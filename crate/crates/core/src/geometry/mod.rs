//! Finite fields and the block designs built from them.

mod circle;
mod field;
mod packing;
mod planes;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::setfam::{for_each_combination, Family};

pub use circle::circle_geometry;
pub use field::{is_prime, prime_power, FieldElem, FiniteField, MAX_FIELD_ORDER};
pub use packing::greedy_packing;
pub use planes::{affine_plane, projective_plane};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("GF({p}^{k}) exceeds the supported field order {max}")]
    FieldTooLarge { p: u64, k: u32, max: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("construction produced {found} blocks, expected {expected}")]
    BlockCount { expected: u64, found: u64 },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignKind {
    Design,
    Packing,
}

impl DesignKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DesignKind::Design => "design",
            DesignKind::Packing => "packing",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "design" => Some(DesignKind::Design),
            "packing" => Some(DesignKind::Packing),
            _ => None,
        }
    }
}

/// A block system on `v` points with strength `t` and index `lambda`.
///
/// Block sizes are whatever the blocks have; uniform designs are the common
/// case but mixed sizes are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    pub t: usize,
    pub v: usize,
    pub lambda: usize,
    pub blocks: Family,
    pub kind: DesignKind,
}

impl Design {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// The common block size, if all blocks agree.
    pub fn uniform_block_size(&self) -> Option<usize> {
        let mut sizes = self.blocks.iter().map(|b| b.len());
        let first = sizes.next()?;
        sizes.all(|s| s == first).then_some(first)
    }

    /// Checks the property named by `kind`.
    pub fn is_valid(&self) -> bool {
        match self.kind {
            DesignKind::Design => is_design(self),
            DesignKind::Packing => is_packing(self),
        }
    }
}

/// Dense rank of a t-subset in colex order: `sum C(c_i, i + 1)`.
struct SubsetRanker {
    binom: Vec<Vec<u64>>,
}

impl SubsetRanker {
    fn new(v: usize, t: usize) -> Self {
        let mut binom = vec![vec![0u64; t + 1]; v + 1];
        for n in 0..=v {
            binom[n][0] = 1;
            for k in 1..=t.min(n) {
                binom[n][k] = binom[n - 1][k - 1] + if k < n { binom[n - 1][k] } else { 0 };
            }
        }
        SubsetRanker { binom }
    }

    fn total(&self, v: usize, t: usize) -> u64 {
        self.binom[v][t]
    }

    /// `subset` holds increasing 0-based points.
    #[cfg(test)]
    fn rank(&self, subset: &[usize]) -> u64 {
        subset
            .iter()
            .enumerate()
            .map(|(i, &c)| self.binom[c][i + 1])
            .sum()
    }

    /// Rank of `{points[j] : j in idx}`.
    fn rank_indexed(&self, idx: &[usize], points: &[usize]) -> u64 {
        idx.iter()
            .enumerate()
            .map(|(i, &j)| self.binom[points[j]][i + 1])
            .sum()
    }
}

const DENSE_LIMIT: u64 = 1 << 27;

/// Number of blocks over each t-subset, exhaustively: `(min, max, covered)`
/// over all `C(v, t)` t-subsets, where `covered` counts t-subsets with at
/// least one block.
fn t_subset_coverage(d: &Design) -> Option<(u64, u64, u64)> {
    let (v, t) = (d.v, d.t);
    if d.blocks.ground() != v || d.blocks.iter().any(|b| b.len() < t) {
        return None;
    }
    let ranker = SubsetRanker::new(v, t);
    let total = ranker.total(v, t);
    let mut pts = Vec::new();
    if total <= DENSE_LIMIT {
        let mut counts = vec![0u32; total as usize];
        for b in &d.blocks {
            pts.clear();
            pts.extend(b.points().map(|p| p - 1));
            for_each_combination(pts.len(), t, |c| {
                counts[ranker.rank_indexed(c, &pts) as usize] += 1;
            });
        }
        let min = counts.iter().copied().min().unwrap_or(0) as u64;
        let max = counts.iter().copied().max().unwrap_or(0) as u64;
        let covered = counts.iter().filter(|&&c| c > 0).count() as u64;
        Some((min, max, covered))
    } else {
        let mut counts: HashMap<u64, u64> = HashMap::new();
        for b in &d.blocks {
            pts.clear();
            pts.extend(b.points().map(|p| p - 1));
            for_each_combination(pts.len(), t, |c| {
                *counts.entry(ranker.rank_indexed(c, &pts)).or_default() += 1;
            });
        }
        let covered = counts.len() as u64;
        let max = counts.values().copied().max().unwrap_or(0);
        let min = if covered < total {
            0
        } else {
            counts.values().copied().min().unwrap_or(0)
        };
        Some((min, max, covered))
    }
}

/// Every t-subset of points lies in exactly `lambda` blocks.
pub fn is_design(d: &Design) -> bool {
    matches!(t_subset_coverage(d), Some((min, max, _)) if min == d.lambda as u64 && max == d.lambda as u64)
}

/// Every t-subset of points lies in at most `lambda` blocks.
pub fn is_packing(d: &Design) -> bool {
    matches!(t_subset_coverage(d), Some((_, max, _)) if max <= d.lambda as u64)
}
