//! Circle geometries (Möbius planes of order q).
//!
//! Points are GF(q^2) together with a point at infinity. The blocks are the
//! images of the sub-line GF(q) ∪ {∞} under the fractional linear maps
//! `z -> (a z + b) / (c z + d)` with `ad - bc != 0`, which yields a
//! 3-(q^2+1, q+1, 1) design with `q(q^2+1)` blocks.

use std::collections::HashSet;

use super::{prime_power, Design, DesignKind, FieldElem, FiniteField, GeometryError};
use crate::setfam::{Block, Family};

/// Orders beyond this make the `O(q^6)` map enumeration impractical.
pub const MAX_CIRCLE_ORDER: u64 = 16;

/// A point of the projective line: a field element or infinity.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum LinePoint {
    Finite(FieldElem),
    Infinity,
}

/// One representative per projective class: `(a, b, 1, d)` with
/// `ad - b != 0`, and `(a, b, 0, 1)` with `a != 0`.
struct Mobius {
    a: FieldElem,
    b: FieldElem,
    /// `Some(d)` means `c = 1`; `None` means `c = 0, d = 1`.
    d: Option<FieldElem>,
}

impl Mobius {
    fn apply(&self, f: &FiniteField, z: LinePoint) -> LinePoint {
        match (self.d, z) {
            (None, LinePoint::Infinity) => LinePoint::Infinity,
            (None, LinePoint::Finite(z)) => LinePoint::Finite(f.add(f.mul(self.a, z), self.b)),
            (Some(_), LinePoint::Infinity) => LinePoint::Finite(self.a),
            (Some(d), LinePoint::Finite(z)) => {
                let den = f.add(z, d);
                match f.div(f.add(f.mul(self.a, z), self.b), den) {
                    Some(w) => LinePoint::Finite(w),
                    None => LinePoint::Infinity,
                }
            }
        }
    }
}

pub fn circle_geometry(q: u64) -> Result<Design, GeometryError> {
    let (p, e) = prime_power(q).ok_or(GeometryError::NotPrimePower(q))?;
    if q > MAX_CIRCLE_ORDER {
        return Err(GeometryError::InvalidParameters(format!(
            "circle geometry of order {q} exceeds the supported maximum {MAX_CIRCLE_ORDER}"
        )));
    }
    let f = FiniteField::new(p, 2 * e)?;
    let v = (q * q + 1) as usize;
    let label = |pt: LinePoint| match pt {
        LinePoint::Finite(x) => x.index() + 1,
        LinePoint::Infinity => v,
    };

    let mut subline: Vec<LinePoint> = f
        .elements()
        .filter(|&x| f.pow(x, q) == x)
        .map(LinePoint::Finite)
        .collect();
    subline.push(LinePoint::Infinity);
    debug_assert_eq!(subline.len() as u64, q + 1);

    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut blocks = Vec::new();
    let mut image: Vec<u32> = Vec::with_capacity(subline.len());
    let mut consider = |m: Mobius, seen: &mut HashSet<Vec<u32>>, blocks: &mut Vec<Block>| {
        image.clear();
        image.extend(subline.iter().map(|&z| label(m.apply(&f, z)) as u32));
        image.sort_unstable();
        if !seen.contains(&image) {
            seen.insert(image.clone());
            let mut blk = Block::empty(v);
            for &pt in &image {
                blk.insert(pt as usize);
            }
            blocks.push(blk);
        }
    };

    for a in f.elements() {
        for b in f.elements() {
            if a != f.zero() {
                consider(Mobius { a, b, d: None }, &mut seen, &mut blocks);
            }
            for d in f.elements() {
                if f.mul(a, d) != b {
                    consider(Mobius { a, b, d: Some(d) }, &mut seen, &mut blocks);
                }
            }
        }
    }

    let blocks = Family::from_blocks_dedup(v, blocks).expect("labels lie in [1, v]");
    let expected = q * (q * q + 1);
    if blocks.len() as u64 != expected {
        return Err(GeometryError::BlockCount {
            expected,
            found: blocks.len() as u64,
        });
    }
    Ok(Design {
        t: 3,
        v,
        lambda: 1,
        blocks,
        kind: DesignKind::Design,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::is_design;

    #[test]
    fn order_two() {
        // 3-(5,3,1): all 10 triples of 5 points
        let d = circle_geometry(2).unwrap();
        assert_eq!((d.v, d.block_count()), (5, 10));
        assert!(is_design(&d));
    }

    #[test]
    fn order_three() {
        let d = circle_geometry(3).unwrap();
        assert_eq!((d.v, d.block_count(), d.uniform_block_size()), (10, 30, Some(4)));
        assert!(is_design(&d));
    }

    #[test]
    fn order_four() {
        let d = circle_geometry(4).unwrap();
        assert_eq!((d.v, d.block_count()), (17, 68));
        assert!(is_design(&d));
    }

    #[test]
    fn rejects_bad_orders() {
        assert_eq!(circle_geometry(6).unwrap_err(), GeometryError::NotPrimePower(6));
        assert!(matches!(circle_geometry(17), Err(GeometryError::InvalidParameters(_))));
    }
}
