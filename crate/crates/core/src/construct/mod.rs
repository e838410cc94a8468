//! Lower bounds: nesting laminar families into the blocks of a packing.
//!
//! If every t-subset lies in at most one block of a packing `P` and each
//! block carries a t-laminar family, the union of those families is t-laminar
//! on the whole ground set: two members from different blocks meet in fewer
//! than `t` points.

mod small;
mod tower;

use thiserror::Error;

use crate::geometry::{is_packing, Design, GeometryError};
use crate::rat::Rat;
use crate::setfam::{is_t_laminar, Block, Family};

pub use small::{small_construction, small_construction_size, SmallPlan};
pub use tower::{
    certify_circle_tower, certify_fano_tower, circle_tower, fano_tower, seven_series,
    three_series_report, Certificate, ThreeSeriesReport, Tower, TowerOptions, TowerReport,
    DEFAULT_SET_LIMIT, LARGE_SET_LIMIT,
};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("the input is not a valid {t}-wise packing")]
    InvalidPacking { t: usize },
    #[error("replacement for block {block} has ground size {found}, expected {expected}")]
    GroundMismatch {
        block: String,
        expected: usize,
        found: usize,
    },
    #[error("replacement for block {block} is not {t}-laminar")]
    NotLaminar { block: String, t: usize },
    #[error("packing blocks must have a common size smaller than n")]
    BlockSize,
    #[error("materializing {sets} sets exceeds the limit of {limit}; counts are still available")]
    TooLarge { sets: String, limit: usize },
    #[error("{0}")]
    Unsupported(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Replaces every block `K` of `packing` by `replacement(K)`, a family on
/// `[|K|]`, relabelled so that point `i` becomes the `i`-th smallest point
/// of `K`. The union is deduplicated.
pub fn nested<F>(packing: &Design, mut replacement: F) -> Result<Family, ConstructError>
where
    F: FnMut(&Block) -> Family,
{
    check_packing(packing)?;
    let t = packing.t;
    let mut out = Vec::new();
    for k in packing.blocks.iter() {
        let fam = replacement(k);
        check_replacement(k, &fam, t)?;
        relabel_into(k, &fam, packing.v, &mut out);
    }
    Ok(Family::from_blocks_dedup(packing.v, out).expect("relabelled blocks lie in [v]"))
}

/// [`nested`] with the same replacement for every block, checked once.
pub fn nested_uniform(packing: &Design, replacement: &Family) -> Result<Family, ConstructError> {
    check_packing(packing)?;
    let t = packing.t;
    let mut checked = false;
    let mut out = Vec::new();
    for k in packing.blocks.iter() {
        if !checked {
            check_replacement(k, replacement, t)?;
            checked = true;
        } else if k.len() != replacement.ground() {
            check_replacement(k, replacement, t)?;
        }
        relabel_into(k, replacement, packing.v, &mut out);
    }
    Ok(Family::from_blocks_dedup(packing.v, out).expect("relabelled blocks lie in [v]"))
}

fn check_packing(packing: &Design) -> Result<(), ConstructError> {
    if !is_packing(packing) {
        return Err(ConstructError::InvalidPacking { t: packing.t });
    }
    Ok(())
}

fn check_replacement(k: &Block, fam: &Family, t: usize) -> Result<(), ConstructError> {
    if fam.ground() != k.len() {
        return Err(ConstructError::GroundMismatch {
            block: k.to_string(),
            expected: k.len(),
            found: fam.ground(),
        });
    }
    if !is_t_laminar(fam, t) {
        return Err(ConstructError::NotLaminar {
            block: k.to_string(),
            t,
        });
    }
    Ok(())
}

fn relabel_into(k: &Block, fam: &Family, v: usize, out: &mut Vec<Block>) {
    let image = k.to_vec();
    out.extend(fam.iter().map(|b| b.relabel(&image, v)));
}

/// `b g(k) + 1` for a 2-(n, k, 1) packing with `b` blocks of common size
/// `k < n`, given a lower bound `g(k)` for ground size `k`.
pub fn general_n_lower_bound(packing: &Design, g_k: &Rat) -> Result<Rat, ConstructError> {
    if packing.t != 2 || !is_packing(packing) {
        return Err(ConstructError::InvalidPacking { t: 2 });
    }
    match packing.uniform_block_size() {
        Some(k) if k < packing.v => {}
        _ => return Err(ConstructError::BlockSize),
    }
    Ok(Rat::from_integer(packing.block_count() as u64) * g_k + Rat::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{affine_plane, greedy_packing, projective_plane, DesignKind};

    fn pairs_and_top(k: usize) -> Family {
        let mut f = Family::all_subsets_of_size(k, 2);
        if k > 2 {
            f.insert(Block::full(k)).unwrap();
        }
        f
    }

    #[test]
    fn fano_blocks_alone() {
        let p = projective_plane(2).unwrap();
        let f = nested(&p, |k| Family::from_blocks(k.len(), vec![Block::full(k.len())]).unwrap())
            .unwrap();
        assert_eq!(f, p.blocks);
        assert!(is_t_laminar(&f, 2));
    }

    #[test]
    fn fano_blocks_with_pairs() {
        let p = projective_plane(2).unwrap();
        let f = nested(&p, |k| pairs_and_top(k.len())).unwrap();
        assert_eq!(f.len(), 28);
        assert_eq!(f.count_at_least(3), 7);
        assert!(is_t_laminar(&f, 2));
    }

    #[test]
    fn relabelling_follows_block_order() {
        let blocks = Family::from_point_lists(6, [vec![2, 4, 6]]).unwrap();
        let d = Design {
            t: 2,
            v: 6,
            lambda: 1,
            blocks,
            kind: DesignKind::Packing,
        };
        let rep = Family::from_point_lists(3, [vec![1, 3]]).unwrap();
        let f = nested_uniform(&d, &rep).unwrap();
        assert_eq!(f.point_lists(), vec![vec![2, 6]]);
    }

    #[test]
    fn rejects_bad_replacements() {
        let p = projective_plane(2).unwrap();
        let err = nested(&p, |_| Family::new(4)).unwrap_err();
        assert!(matches!(err, ConstructError::GroundMismatch { expected: 3, found: 4, .. }));
        let bad = Family::from_point_lists(4, [vec![1, 2, 3], vec![1, 2, 4]]).unwrap();
        let a = affine_plane(2).unwrap();
        assert!(nested_uniform(&a, &bad).is_err());
    }

    #[test]
    fn rejects_non_packings() {
        let blocks = Family::from_point_lists(4, [vec![1, 2, 3], vec![1, 2, 4]]).unwrap();
        let d = Design {
            t: 2,
            v: 4,
            lambda: 1,
            blocks,
            kind: DesignKind::Packing,
        };
        assert!(matches!(
            nested_uniform(&d, &pairs_and_top(3)),
            Err(ConstructError::InvalidPacking { t: 2 })
        ));
    }

    #[test]
    fn lower_bound_from_packings() {
        let fano = projective_plane(2).unwrap();
        assert_eq!(general_n_lower_bound(&fano, &Rat::from_integer(4)).unwrap(), Rat::from_integer(29));

        let whole = Design {
            t: 2,
            v: 7,
            lambda: 1,
            blocks: Family::from_blocks(7, vec![Block::full(7)]).unwrap(),
            kind: DesignKind::Packing,
        };
        assert!(matches!(
            general_n_lower_bound(&whole, &Rat::from_integer(29)),
            Err(ConstructError::BlockSize)
        ));

        let g = greedy_packing(13, 3, 2, 5).unwrap();
        let b = g.block_count() as i64;
        assert_eq!(general_n_lower_bound(&g, &Rat::from_integer(4)).unwrap(), Rat::from_integer(4 * b + 1));
        // the bound is realised by nesting
        let f = nested(&g, |k| pairs_and_top(k.len())).unwrap();
        assert!(is_t_laminar(&f, 2));
        assert_eq!(f.count_at_least(2) as i64, 4 * b);
    }
}
