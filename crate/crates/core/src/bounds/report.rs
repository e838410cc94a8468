use serde::Serialize;

use super::BoundTable;
use crate::rat::{choose2, Rat};

/// Significant digits in every decimal rendering.
pub const DECIMAL_DIGITS: usize = 20;

/// `Σ_{k > n} 1 / C(k, 2)`, which telescopes to `2 / n`.
pub fn tail_sum(n: usize) -> Rat {
    assert!(n >= 2, "tail sum needs n >= 2");
    Rat::new(2u64, n as u64)
}

/// `obf(n) / C(n, 2) + tail_sum(n)`, an upper bound on the limiting ratio.
pub fn upper_limit(table: &BoundTable, n: usize) -> Rat {
    ratio(table, n) + tail_sum(n)
}

fn ratio(table: &BoundTable, n: usize) -> Rat {
    table.obf(n) / Rat::from_integer(choose2(n as u64))
}

/// `3, 7, 43, 1807, ...` under `k -> k^2 - k + 1`; `terms` entries.
pub fn projective_indices(terms: usize) -> Vec<u128> {
    let mut out = Vec::with_capacity(terms);
    let mut k: u128 = 3;
    for _ in 0..terms {
        out.push(k);
        k = k.checked_mul(k - 1).and_then(|v| v.checked_add(1)).unwrap_or(u128::MAX);
    }
    out
}

/// `1 + Σ 1 / C(k_i, 2)` over the first `terms` projective indices.
pub fn projective_series(terms: usize) -> Rat {
    assert!(terms >= 1, "need at least one term");
    let mut sum = Rat::one();
    let mut k = num_bigint::BigInt::from(3);
    for _ in 0..terms {
        let c2: num_bigint::BigInt = &k * (&k - 1) / 2;
        sum += Rat::one() / Rat::from(c2);
        k = &k * (&k - 1) + 1;
    }
    sum
}

/// `obf(n)/C(n,2) <= 1/C(n,2) + max_{2 <= k < n} obf(k)/C(k,2)`.
/// Vacuously true for `n <= 2`.
pub fn rec_bound_check(table: &BoundTable, n: usize) -> bool {
    if n <= 2 {
        return true;
    }
    let best = (2..n).map(|k| ratio(table, k)).max().expect("k = 2 exists");
    ratio(table, n) <= Rat::new(1u64, choose2(n as u64)) + best
}

/// Runs [`rec_bound_check`] for every `n` in the table in linear time;
/// returns the first failing `n`.
pub fn rec_bound_sweep(table: &BoundTable) -> Result<(), usize> {
    let mut best: Option<Rat> = None;
    for n in 2..=table.max_n() {
        let r = ratio(table, n);
        if let Some(b) = &best {
            if r > Rat::new(1u64, choose2(n as u64)) + b {
                return Err(n);
            }
        }
        best = Some(match best {
            Some(b) => b.max(r),
            None => r,
        });
    }
    Ok(())
}

/// Summary of a table at `n`; serialises with exact values as `"p/q"`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ObfReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "obf_N")]
    pub obf_n: String,
    pub ratio: String,
    pub ratio_decimal: String,
    pub tail: String,
    pub upper_limit: String,
    pub upper_limit_decimal: String,
    pub critical: Vec<usize>,
    pub frontier_log: Vec<(usize, Vec<usize>)>,
}

pub fn upper_limit_report(table: &BoundTable, n: usize) -> ObfReport {
    let r = ratio(table, n);
    let up = upper_limit(table, n);
    let critical = table
        .frontier_at(n)
        .map(|f| f.critical())
        .unwrap_or_default();
    let frontier_log = table
        .frontier_log()
        .iter()
        .filter(|(k, _)| *k <= n)
        .cloned()
        .collect();
    ObfReport {
        n,
        obf_n: table.obf(n).to_string(),
        ratio: r.to_string(),
        ratio_decimal: r.to_decimal(DECIMAL_DIGITS),
        tail: tail_sum(n).to_string(),
        upper_limit: up.to_string(),
        upper_limit_decimal: up.to_decimal(DECIMAL_DIGITS),
        critical,
        frontier_log,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{obf_table, ScanMode};

    #[test]
    fn tails() {
        assert_eq!(tail_sum(50000), Rat::new(1, 25000));
        assert_eq!(tail_sum(2), Rat::one());
        assert_eq!(tail_sum(4), Rat::new(1, 2));
    }

    #[test]
    fn series() {
        assert_eq!(projective_series(1), Rat::new(4, 3));
        assert_eq!(projective_series(2), Rat::new(29, 21));
        let four = projective_series(4);
        assert!(four >= Rat::new(138206, 100000) && four <= Rat::new(138207, 100000));
        assert_eq!(projective_indices(4), vec![3, 7, 43, 1807]);
    }

    #[test]
    fn upper_limit_at_four() {
        let t = obf_table(4, ScanMode::Exact).unwrap();
        assert_eq!(upper_limit(&t, 4), Rat::new(11, 6));
        let r = upper_limit_report(&t, 4);
        assert_eq!(r.obf_n, "8/1");
        assert_eq!(r.tail, "1/2");
        assert_eq!(r.critical, vec![1, 2, 3]);
    }

    #[test]
    fn recursion_audit() {
        let t = obf_table(200, ScanMode::Exact).unwrap();
        assert!(rec_bound_check(&t, 3));
        assert!(rec_bound_check(&t, 4));
        assert_eq!(rec_bound_sweep(&t), Ok(()));
        for n in 2..=200 {
            assert!(rec_bound_check(&t, n), "n={n}");
        }
    }

    #[test]
    fn report_json_keys() {
        let t = obf_table(10, ScanMode::Exact).unwrap();
        let v = serde_json::to_value(upper_limit_report(&t, 10)).unwrap();
        for key in ["N", "obf_N", "ratio_decimal", "tail", "upper_limit_decimal", "critical", "frontier_log"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["frontier_log"][0], serde_json::json!([2, [1, 2]]));
    }
}
