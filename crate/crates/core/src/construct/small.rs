//! Best explicit 2-laminar family on a small ground set from three moves:
//! extend a family on `[m]` by every pair leaving `[m]` and the universe, or
//! nest into a projective or affine plane.

use super::{nested_uniform, ConstructError};
use crate::geometry::{affine_plane, prime_power, projective_plane};
use crate::rat::choose2;
use crate::setfam::{Block, Family};

/// Largest ground size [`small_construction`] builds.
pub const SMALL_MAX: usize = 64;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SmallPlan {
    /// `n <= 2`: the universe alone, if it has two points.
    Trivial,
    /// A best family on `[m]`, every pair not inside `[m]`, and `[n]`.
    Extend { m: usize },
    /// Nest into the projective plane of order `q`, `n = q^2 + q + 1`.
    Projective { q: usize },
    /// Nest into the affine plane of order `q`, `n = q^2`.
    Affine { q: usize },
}

fn plans(n: usize) -> (Vec<u64>, Vec<SmallPlan>) {
    let mut g = vec![0u64; n + 1];
    let mut how = vec![SmallPlan::Trivial; n + 1];
    if n >= 2 {
        g[2] = 1;
    }
    for k in 3..=n {
        let mut best = (0u64, SmallPlan::Trivial);
        for (m, &g_m) in g.iter().enumerate().take(k).skip(2) {
            let v = 1 + g_m + choose2(k as u64) - choose2(m as u64);
            if v > best.0 {
                best = (v, SmallPlan::Extend { m });
            }
        }
        for q in 2..k {
            if prime_power(q as u64).is_none() {
                continue;
            }
            if q * q + q + 1 == k {
                let v = k as u64 * g[q + 1] + 1;
                if v > best.0 {
                    best = (v, SmallPlan::Projective { q });
                }
            }
            if q * q == k {
                let v = (q * q + q) as u64 * g[q] + 1;
                if v > best.0 {
                    best = (v, SmallPlan::Affine { q });
                }
            }
        }
        g[k] = best.0;
        how[k] = best.1;
    }
    (g, how)
}

/// Number of members of size at least 2 in [`small_construction`]`(n)`,
/// and the move that attains it.
pub fn small_construction_size(n: usize) -> (u64, SmallPlan) {
    let (g, how) = plans(n.max(2));
    if n < 2 {
        return (0, SmallPlan::Trivial);
    }
    (g[n], how[n])
}

/// The family counted by [`small_construction_size`].
pub fn small_construction(n: usize) -> Result<Family, ConstructError> {
    if n > SMALL_MAX {
        return Err(ConstructError::Unsupported(format!(
            "small constructions are limited to n <= {SMALL_MAX}"
        )));
    }
    let (_, how) = plans(n.max(2));
    build(n, &how)
}

fn build(n: usize, how: &[SmallPlan]) -> Result<Family, ConstructError> {
    if n < 2 {
        return Ok(Family::new(n));
    }
    let mut f = match how[n] {
        SmallPlan::Trivial => Family::new(n),
        SmallPlan::Extend { m } => {
            let inner = build(m, how)?;
            let image: Vec<usize> = (1..=m).collect();
            let mut sets: Vec<Block> = inner.iter().map(|b| b.relabel(&image, n)).collect();
            for b in Family::all_subsets_of_size(n, 2).into_sets() {
                if b.points().any(|p| p > m) {
                    sets.push(b);
                }
            }
            Family::from_blocks(n, sets).expect("distinct by construction")
        }
        SmallPlan::Projective { q } => {
            nested_uniform(&projective_plane(q as u64)?, &build(q + 1, how)?)?
        }
        SmallPlan::Affine { q } => nested_uniform(&affine_plane(q as u64)?, &build(q, how)?)?,
    };
    if !f.contains(&Block::full(n)) {
        f.insert(Block::full(n)).expect("universe is new");
    }
    Ok(f)
}
