//! The two iterated constructions: Fano/affine planes for t = 2 and circle
//! geometries for t = 3.
//!
//! Level 0 of the Fano tower lives on 7 points: all pairs, the seven lines
//! and `[7]`. Level `r` nests level `r - 1` into the affine plane of order
//! `m = 7^(2^(r-1))` and adds the universe, so `g_r = m(m+1) g_(r-1) + 1`.
//!
//! Level 0 of the circle tower lives on 10 points: every subset of size at
//! most 3, the 30 circles of order 3 and `[10]`. Level `r` nests level
//! `r - 1` into the circle geometry of order `q = 3^(2^r)`, whose circles
//! have `q + 1` points, the ground size one level down.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use super::{nested_uniform, ConstructError};
use crate::bounds::DECIMAL_DIGITS;
use crate::geometry::{affine_plane, circle_geometry, is_design, projective_plane};
use crate::rat::Rat;
use crate::setfam::{is_t_laminar, Block, Family};

/// Sets materialized without opting in.
pub const DEFAULT_SET_LIMIT: usize = 200_000;
/// Sets materialized with `allow_large`.
pub const LARGE_SET_LIMIT: usize = 5_000_000;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct TowerOptions {
    pub materialize: bool,
    pub allow_large: bool,
}

impl TowerOptions {
    pub fn counts_only() -> Self {
        TowerOptions::default()
    }

    pub fn materialized() -> Self {
        TowerOptions {
            materialize: true,
            allow_large: false,
        }
    }

    fn limit(&self) -> usize {
        if self.allow_large {
            LARGE_SET_LIMIT
        } else {
            DEFAULT_SET_LIMIT
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerReport {
    pub t: usize,
    pub r: u32,
    pub n: BigUint,
    /// Members of size at least `t`, the universe included.
    pub count_geq_t: BigUint,
    /// Members of size below `t` (singletons and pairs of the circle tower).
    pub lower_layers: BigUint,
    pub formula_value: Rat,
    pub ratio: Rat,
}

fn big_json(v: &BigUint) -> Value {
    match v.to_u64() {
        Some(x) => json!(x),
        None => json!(v.to_string()),
    }
}

impl TowerReport {
    /// `{t, r, n, count_geq_t, lower_layers, formula_value, ratio, ratio_decimal}`;
    /// integers beyond `u64` are strings.
    pub fn to_json(&self) -> Value {
        json!({
            "t": self.t,
            "r": self.r,
            "n": big_json(&self.n),
            "count_geq_t": big_json(&self.count_geq_t),
            "lower_layers": big_json(&self.lower_layers),
            "formula_value": self.formula_value.to_string(),
            "ratio": self.ratio.to_string(),
            "ratio_decimal": self.ratio.to_decimal(DECIMAL_DIGITS),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Tower {
    pub report: TowerReport,
    pub family: Option<Family>,
}

/// How a tower level was shown to be t-laminar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Every pair of members was checked.
    Exhaustive { sets: usize },
    /// The outer design was validated and the inner level checked pairwise;
    /// nesting into a packing preserves t-laminarity.
    Structural { design: String, inner_sets: usize },
}

fn fano_n(r: u32) -> BigUint {
    BigUint::from(7u32).pow(1u32 << r)
}

fn circle_q(r: u32) -> BigUint {
    BigUint::from(3u32).pow(1u32 << r)
}

fn circle_n(r: u32) -> BigUint {
    let q = circle_q(r);
    &q * &q + 1u32
}

fn check_level(r: u32) -> Result<(), ConstructError> {
    if r > 16 {
        return Err(ConstructError::Unsupported(format!("tower level {r} is out of range")));
    }
    Ok(())
}

fn choose(n: &BigUint, k: u32) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
    }
    let mut fact = BigUint::one();
    for i in 2..=k {
        fact *= i;
    }
    acc / fact
}

/// `1 + 1/C(3,2) + Σ_{i=0..=r} 1/C(7^(2^i), 2)`.
pub fn seven_series(r: u32) -> Rat {
    let mut s = Rat::one() + Rat::new(1, 3);
    for i in 0..=r {
        s += Rat::one() / Rat::from_biguint(&choose(&fano_n(i), 2));
    }
    s
}

/// `1 + 1/C(4,3) + Σ_{i=0..=r} 1/C(3^(2^i)+1, 3)`, the size-≥3 density of
/// circle tower level `r`.
fn circle_series(r: u32) -> Rat {
    let mut s = Rat::one() + Rat::new(1, 4);
    for i in 0..=r {
        s += Rat::one() / Rat::from_biguint(&choose(&circle_n(i), 3));
    }
    s
}

fn fano_counts(r: u32) -> BigUint {
    let mut g = BigUint::from(29u32);
    for i in 1..=r {
        let m = fano_n(i - 1);
        g = &m * (&m + 1u32) * g + 1u32;
    }
    g
}

fn circle_counts(r: u32) -> BigUint {
    let mut h = BigUint::from(151u32);
    for i in 1..=r {
        let q = circle_q(i);
        h = &q * (&q * &q + 1u32) * h + 1u32;
    }
    h
}

fn fano_base() -> Family {
    let mut f = Family::all_subsets_of_size(7, 2);
    for line in projective_plane(2).expect("order 2").blocks.into_sets() {
        f.insert(line).expect("lines are new");
    }
    f.insert(Block::full(7)).expect("universe is new");
    f
}

fn circle_base() -> Family {
    let mut f = Family::new(10);
    for k in 1..=3 {
        f.union_with(Family::all_subsets_of_size(10, k)).expect("same ground");
    }
    for c in circle_geometry(3).expect("order 3").blocks.into_sets() {
        f.insert(c).expect("circles are new");
    }
    f.insert(Block::full(10)).expect("universe is new");
    f
}

fn check_limit(sets: &BigUint, opts: &TowerOptions) -> Result<(), ConstructError> {
    let limit = opts.limit();
    if *sets > BigUint::from(limit) {
        return Err(ConstructError::TooLarge {
            sets: sets.to_string(),
            limit,
        });
    }
    Ok(())
}

fn add_universe(mut f: Family) -> Family {
    let n = f.ground();
    f.insert(Block::full(n)).expect("nested blocks are proper subsets");
    f
}

fn materialize_fano(r: u32) -> Result<Family, ConstructError> {
    let mut f = fano_base();
    for i in 1..=r {
        let m = fano_n(i - 1).to_u64().expect("checked against the set limit");
        let plane = affine_plane(m)?;
        f = add_universe(nested_uniform(&plane, &f)?);
    }
    Ok(f)
}

fn materialize_circle(r: u32) -> Result<Family, ConstructError> {
    let mut f = circle_base();
    for i in 1..=r {
        let q = circle_q(i).to_u64().expect("checked against the set limit");
        let geo = circle_geometry(q)?;
        f = add_universe(nested_uniform(&geo, &f)?);
    }
    Ok(f)
}

pub fn fano_tower(r: u32, opts: &TowerOptions) -> Result<Tower, ConstructError> {
    check_level(r)?;
    let n = fano_n(r);
    let count = fano_counts(r);
    let c2 = Rat::from_biguint(&choose(&n, 2));
    let report = TowerReport {
        t: 2,
        r,
        formula_value: &c2 * seven_series(r),
        ratio: Rat::from_biguint(&count) / &c2,
        n,
        count_geq_t: count,
        lower_layers: BigUint::default(),
    };
    let family = if opts.materialize {
        check_limit(&report.count_geq_t, opts)?;
        Some(materialize_fano(r)?)
    } else {
        None
    };
    Ok(Tower { report, family })
}

pub fn circle_tower(r: u32, opts: &TowerOptions) -> Result<Tower, ConstructError> {
    check_level(r)?;
    let n = circle_n(r);
    let count = circle_counts(r);
    let c3 = Rat::from_biguint(&choose(&n, 3));
    let lower = &n + choose(&n, 2);
    let report = TowerReport {
        t: 3,
        r,
        formula_value: &c3 * circle_series(r),
        ratio: Rat::from_biguint(&count) / &c3,
        n,
        count_geq_t: count,
        lower_layers: lower,
    };
    let family = if opts.materialize {
        check_limit(&(&report.count_geq_t + &report.lower_layers), opts)?;
        Some(materialize_circle(r)?)
    } else {
        None
    };
    Ok(Tower { report, family })
}

fn exhaustive(f: &Family, t: usize, expected: &BigUint) -> Result<usize, ConstructError> {
    if BigUint::from(f.count_at_least(t)) != *expected {
        return Err(ConstructError::CertificationFailed(format!(
            "family has {} members of size >= {t}, expected {expected}",
            f.count_at_least(t)
        )));
    }
    if !is_t_laminar(f, t) {
        return Err(ConstructError::CertificationFailed(format!("family is not {t}-laminar")));
    }
    Ok(f.len())
}

/// Checks Fano tower level `r <= 2`: pairwise for `r <= 1`, structurally at
/// `r = 2` through the 2-(2401, 49, 1) affine plane.
pub fn certify_fano_tower(r: u32) -> Result<Certificate, ConstructError> {
    match r {
        0 | 1 => {
            let f = materialize_fano(r)?;
            Ok(Certificate::Exhaustive {
                sets: exhaustive(&f, 2, &fano_counts(r))?,
            })
        }
        2 => {
            let plane = affine_plane(49)?;
            if !is_design(&plane) || plane.block_count() != 2450 {
                return Err(ConstructError::CertificationFailed(
                    "affine plane of order 49 is not a 2-(2401,49,1) design".into(),
                ));
            }
            let inner = materialize_fano(1)?;
            Ok(Certificate::Structural {
                design: "2-(2401,49,1)".into(),
                inner_sets: exhaustive(&inner, 2, &fano_counts(1))?,
            })
        }
        _ => Err(ConstructError::Unsupported(format!(
            "certification of Fano tower level {r} is not supported"
        ))),
    }
}

/// Checks circle tower level `r <= 1`: pairwise at `r = 0`, structurally at
/// `r = 1` through the 3-(82, 10, 1) circle geometry.
pub fn certify_circle_tower(r: u32) -> Result<Certificate, ConstructError> {
    match r {
        0 => {
            let f = materialize_circle(0)?;
            Ok(Certificate::Exhaustive {
                sets: exhaustive(&f, 3, &circle_counts(0))?,
            })
        }
        1 => {
            let geo = circle_geometry(9)?;
            if !is_design(&geo) || geo.block_count() != 738 {
                return Err(ConstructError::CertificationFailed(
                    "circle geometry of order 9 is not a 3-(82,10,1) design".into(),
                ));
            }
            let inner = materialize_circle(0)?;
            Ok(Certificate::Structural {
                design: "3-(82,10,1)".into(),
                inner_sets: exhaustive(&inner, 3, &circle_counts(0))?,
            })
        }
        _ => Err(ConstructError::Unsupported(format!(
            "certification of circle tower level {r} is not supported"
        ))),
    }
}

/// A closed form for the 3-laminar tower size next to the value the
/// construction actually achieves.
///
/// The closed form is `1 + n + C(n,2) + C(n,3) [1 + 1/C(4,3) + 1/C(10,3) + ... + 1/C(n,2)]`,
/// whose last term is in `C(n,2)` rather than `C(n,3)`, with a bracket limit
/// of about 1.5083. The recursive count gives a limit near 1.2583.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeSeriesReport {
    pub r: u32,
    pub n: BigUint,
    /// `1 + 1/C(4,3) + 1/C(n_j,3)` over the ground sizes `n_j < n` below.
    pub bracket_prefix: Rat,
    /// The prefix plus the closed form's final term `1/C(n,2)`.
    pub printed_bracket: Rat,
    pub printed_value: Rat,
    /// The prefix plus `1/C(n,3)`: the size-≥3 count over `C(n,3)`.
    pub derived_bracket: Rat,
    pub recursive_count_geq_3: BigUint,
    /// `1 + n + C(n,2) + recursive_count_geq_3`; the 1 is the empty set.
    pub recursive_value: Rat,
    /// The derived bracket summed to convergence.
    pub derived_limit: Rat,
    pub printed_limit: &'static str,
}

impl ThreeSeriesReport {
    /// The closed-form value and the recursively counted value.
    pub fn pair(&self) -> (Rat, Rat) {
        (self.printed_value.clone(), self.recursive_value.clone())
    }

    /// Whether the closed-form limit disagrees with the derived one by more
    /// than rounding in its last digit.
    pub fn limit_discrepancy(&self) -> bool {
        let printed: Rat = "15083/10000".parse().expect("literal");
        (printed - &self.derived_limit).abs() > Rat::new(1, 1000)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "r": self.r,
            "n": big_json(&self.n),
            "bracket_prefix": self.bracket_prefix.to_string(),
            "printed_bracket": self.printed_bracket.to_string(),
            "printed_value": self.printed_value.to_string(),
            "derived_bracket": self.derived_bracket.to_string(),
            "recursive_count_geq_3": big_json(&self.recursive_count_geq_3),
            "recursive_value": self.recursive_value.to_string(),
            "derived_limit_decimal": self.derived_limit.to_decimal(DECIMAL_DIGITS),
            "printed_limit": self.printed_limit,
            "limit_discrepancy": self.limit_discrepancy(),
        })
    }
}

pub fn three_series_report(r: u32) -> ThreeSeriesReport {
    let n = circle_n(r);
    let mut prefix = Rat::one() + Rat::new(1, 4);
    for j in 0..r {
        prefix += Rat::one() / Rat::from_biguint(&choose(&circle_n(j), 3));
    }
    let c1 = Rat::from_biguint(&n);
    let c2 = Rat::from_biguint(&choose(&n, 2));
    let c3 = Rat::from_biguint(&choose(&n, 3));
    let printed_bracket = &prefix + c2.recip();
    let derived_bracket = &prefix + c3.recip();
    let base = Rat::one() + &c1 + &c2;
    let count = circle_counts(r);
    ThreeSeriesReport {
        r,
        printed_value: &base + &c3 * &printed_bracket,
        recursive_value: &base + Rat::from_biguint(&count),
        n,
        bracket_prefix: prefix,
        printed_bracket,
        derived_bracket,
        recursive_count_geq_3: count,
        // terms past j = 4 are below 1e-40
        derived_limit: circle_series(4),
        printed_limit: "1.5083",
    }
}
