//! Desarguesian affine and projective planes over GF(q).

use super::{prime_power, Design, DesignKind, FieldElem, FiniteField, GeometryError};
use crate::setfam::{Block, Family};

pub(crate) fn field_of_order(q: u64) -> Result<FiniteField, GeometryError> {
    let (p, k) = prime_power(q).ok_or(GeometryError::NotPrimePower(q))?;
    FiniteField::new(p, k)
}

/// The 2-(q^2, q, 1) design on GF(q)^2. Point `(x, y)` has label
/// `x*q + y + 1`; blocks are the lines `y = m x + b` and `x = c`.
pub fn affine_plane(q: u64) -> Result<Design, GeometryError> {
    let f = field_of_order(q)?;
    let q = q as usize;
    let v = q * q;
    let label = |x: FieldElem, y: FieldElem| x.index() * q + y.index() + 1;

    let mut blocks = Vec::with_capacity(q * q + q);
    for m in f.elements() {
        for b in f.elements() {
            let mut blk = Block::empty(v);
            for x in f.elements() {
                blk.insert(label(x, f.add(f.mul(m, x), b)));
            }
            blocks.push(blk);
        }
    }
    for c in f.elements() {
        let mut blk = Block::empty(v);
        for y in f.elements() {
            blk.insert(label(c, y));
        }
        blocks.push(blk);
    }
    let blocks = Family::from_blocks_dedup(v, blocks).expect("labels lie in [1, q^2]");
    check_count(blocks.len(), (q * q + q) as u64)?;
    Ok(Design {
        t: 2,
        v,
        lambda: 1,
        blocks,
        kind: DesignKind::Design,
    })
}

/// Normalised nonzero vectors of GF(q)^3 (first nonzero coordinate is 1) in
/// lexicographic order of element indices.
fn projective_points(f: &FiniteField) -> Vec<[FieldElem; 3]> {
    let mut pts = Vec::new();
    for a in f.elements() {
        for b in f.elements() {
            for c in f.elements() {
                let v = [a, b, c];
                if v.iter().find(|e| **e != f.zero()) == Some(&f.one()) {
                    pts.push(v);
                }
            }
        }
    }
    pts
}

/// The 2-(q^2+q+1, q+1, 1) design: points and lines of PG(2, q). Point
/// labels follow [`projective_points`] order.
pub fn projective_plane(q: u64) -> Result<Design, GeometryError> {
    let f = field_of_order(q)?;
    let pts = projective_points(&f);
    let v = pts.len();
    let dot = |u: &[FieldElem; 3], w: &[FieldElem; 3]| {
        u.iter()
            .zip(w)
            .fold(f.zero(), |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    };

    let mut blocks = Vec::with_capacity(v);
    for line in &pts {
        let mut blk = Block::empty(v);
        for (i, p) in pts.iter().enumerate() {
            if dot(line, p) == f.zero() {
                blk.insert(i + 1);
            }
        }
        blocks.push(blk);
    }
    let blocks = Family::from_blocks_dedup(v, blocks).expect("labels lie in [1, v]");
    check_count(blocks.len(), v as u64)?;
    Ok(Design {
        t: 2,
        v,
        lambda: 1,
        blocks,
        kind: DesignKind::Design,
    })
}

fn check_count(found: usize, expected: u64) -> Result<(), GeometryError> {
    if found as u64 != expected {
        return Err(GeometryError::BlockCount {
            expected,
            found: found as u64,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::is_design;
    use crate::rat::choose2;

    #[test]
    fn affine_order_two_is_all_pairs() {
        let d = affine_plane(2).unwrap();
        assert_eq!((d.v, d.block_count()), (4, 6));
        assert!(d.blocks.iter().all(|b| b.len() == 2));
        assert!(is_design(&d));
    }

    #[test]
    fn affine_order_seven() {
        let d = affine_plane(7).unwrap();
        assert_eq!((d.v, d.block_count()), (49, 56));
        assert_eq!(d.block_count() as u64, choose2(49) / choose2(7));
        assert_eq!(d.uniform_block_size(), Some(7));
        assert!(is_design(&d));
    }

    #[test]
    fn fano_plane() {
        let d = projective_plane(2).unwrap();
        assert_eq!((d.v, d.block_count()), (7, 7));
        assert_eq!(d.uniform_block_size(), Some(3));
        assert!(is_design(&d));
    }

    #[test]
    fn projective_order_three_and_four() {
        let d = projective_plane(3).unwrap();
        assert_eq!((d.v, d.block_count(), d.uniform_block_size()), (13, 13, Some(4)));
        assert!(is_design(&d));
        let d = projective_plane(4).unwrap();
        assert_eq!((d.v, d.block_count(), d.uniform_block_size()), (21, 21, Some(5)));
        assert!(is_design(&d));
    }

    #[test]
    fn non_prime_power_orders_fail() {
        assert_eq!(projective_plane(6).unwrap_err(), GeometryError::NotPrimePower(6));
        assert_eq!(affine_plane(6).unwrap_err(), GeometryError::NotPrimePower(6));
        assert_eq!(affine_plane(10).unwrap_err(), GeometryError::NotPrimePower(10));
    }

    #[test]
    fn deterministic_output() {
        assert_eq!(projective_plane(3).unwrap(), projective_plane(3).unwrap());
    }
}
