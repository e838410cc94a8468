//! The recursive LP upper bound `obf(n)` on 2-laminar families.
//!
//! `obf(2) = 1`, `obf(3) = 4` and for `n >= 4`
//! `obf(n) = 1 + max_{2 <= m < n} LP(n, m)`, where `LP(n, m)` is
//! `obf(m)` plus the minimum of `C(n-m,2) x + (C(n,2) - C(m,2)) y` over the
//! region `Θ_m` cut out by the halfspaces η_1..η_m. All values are exact.

mod cache;
mod frontier;
mod report;

use thiserror::Error;

use crate::rat::{choose2, Rat};

pub use cache::{load_cache, save_cache, CacheError, CacheReport};
pub use frontier::{Frontier, Halfspace, StageError, UpdateOutcome};
pub use report::{
    projective_indices, projective_series, rec_bound_check, rec_bound_sweep, tail_sum,
    upper_limit, upper_limit_report, ObfReport, DECIMAL_DIGITS,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("need 2 <= m < n, got n={n} m={m}")]
    BadIndices { n: usize, m: usize },
    #[error("obf({0}) is not in the table")]
    NotComputed(usize),
    #[error("table size must be at least {min}, got {got}")]
    TooSmall { min: usize, got: usize },
    #[error("primal infeasible for n={n} m={m}")]
    Infeasible { n: usize, m: usize },
    #[error(transparent)]
    Stage(#[from] StageError),
}

/// How the maximum over `m` is found.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum ScanMode {
    /// Every `LP(n, m)` evaluated in exact arithmetic.
    #[default]
    Exact,
    /// Every `LP(n, m)` evaluated in `f64`; only the candidates that could
    /// be the maximum are recomputed exactly.
    Prefilter,
}

/// Candidates recomputed exactly regardless of the float ranking.
pub const PREFILTER_TOP: usize = 32;

/// Relative width of the window around the float maximum inside which every
/// candidate is recomputed exactly. Float evaluation error is a few ulps.
const PREFILTER_WINDOW: f64 = 1e-12;

/// A frontier recorded at the index where it last changed, with its vertices
/// in floating point for the prefilter.
#[derive(Clone, Debug)]
struct Snapshot {
    at: usize,
    frontier: Frontier,
    approx: Vec<(f64, f64)>,
}

impl Snapshot {
    fn new(frontier: Frontier) -> Self {
        let approx = frontier
            .vertices()
            .iter()
            .map(|(x, y)| (x.to_f64(), y.to_f64()))
            .collect();
        Snapshot {
            at: frontier.stage(),
            frontier,
            approx,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BoundTable {
    /// `values[n]` is `obf(n)`; indices 0 and 1 hold zero.
    values: Vec<Rat>,
    approx: Vec<f64>,
    /// `argmax[n]` is the smallest `m` attaining `obf(n)`; 0 below 4.
    argmax: Vec<usize>,
    snapshots: Vec<Snapshot>,
    current: Frontier,
    frontier_log: Vec<(usize, Vec<usize>)>,
}

impl BoundTable {
    /// The table holding `obf(2)` and `obf(3)`.
    pub fn base() -> Self {
        let mut t = BoundTable {
            values: vec![Rat::zero(), Rat::zero(), Rat::one()],
            approx: vec![0.0, 0.0, 1.0],
            argmax: vec![0, 0, 0],
            snapshots: vec![Snapshot::new(Frontier::initial())],
            current: Frontier::initial(),
            frontier_log: vec![(2, vec![1, 2])],
        };
        t.push(Rat::from_integer(4), 0).expect("stage 3 follows 2");
        t
    }

    /// Largest `n` in the table.
    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&Rat> {
        (2..self.values.len()).contains(&n).then(|| &self.values[n])
    }

    /// `obf(n)`; panics if absent.
    pub fn obf(&self, n: usize) -> &Rat {
        self.get(n).unwrap_or_else(|| panic!("obf({n}) not computed"))
    }

    /// `(n, obf(n))` for `n = 2..=max_n`.
    pub fn values(&self) -> impl Iterator<Item = (usize, &Rat)> + '_ {
        self.values.iter().enumerate().skip(2)
    }

    /// Smallest `m` attaining the maximum in the recursion for `obf(n)`.
    pub fn argmax(&self, n: usize) -> Option<usize> {
        self.argmax.get(n).copied().filter(|&m| m >= 2)
    }

    /// `(n, critical indices)` each time the critical set changed.
    pub fn frontier_log(&self) -> &[(usize, Vec<usize>)] {
        &self.frontier_log
    }

    /// The current region `Θ_max_n`.
    pub fn frontier(&self) -> &Frontier {
        &self.current
    }

    /// `Θ_m`, i.e. the frontier as of the last change at or before `m`.
    pub fn frontier_at(&self, m: usize) -> Option<&Frontier> {
        if !(2..=self.max_n()).contains(&m) {
            return None;
        }
        let i = self.snapshots.partition_point(|s| s.at <= m);
        Some(&self.snapshots[i - 1].frontier)
    }

    fn push(&mut self, v: Rat, argmax: usize) -> Result<(), BoundsError> {
        let n = self.values.len();
        let outcome = self.current.update(n, v.clone())?;
        self.approx.push(v.to_f64());
        self.values.push(v);
        self.argmax.push(argmax);
        if let UpdateOutcome::Cut { .. } = outcome {
            self.frontier_log.push((n, self.current.critical()));
            self.snapshots.push(Snapshot::new(self.current.clone()));
        }
        Ok(())
    }

    /// Rebuilds the frontiers from a list of values `obf(2), obf(3), ...`
    /// without recomputing them.
    pub fn from_values(values: Vec<Rat>) -> Result<Self, BoundsError> {
        if values.len() < 2 {
            return Err(BoundsError::TooSmall { min: 3, got: values.len() + 1 });
        }
        let mut t = BoundTable {
            values: vec![Rat::zero(), Rat::zero(), values[0].clone()],
            approx: vec![0.0, 0.0, values[0].to_f64()],
            argmax: vec![0, 0, 0],
            snapshots: vec![Snapshot::new(Frontier::initial())],
            current: Frontier::initial(),
            frontier_log: vec![(2, vec![1, 2])],
        };
        for v in values.into_iter().skip(1) {
            t.push(v, 0)?;
        }
        Ok(t)
    }

    /// Computes `obf(n)` for `n = max_n + 1` from the table without storing
    /// it. Returns the value and the smallest maximising `m`.
    pub fn compute_next(&self, mode: ScanMode) -> (Rat, usize) {
        self.compute_at(self.max_n() + 1, mode)
    }

    /// Recomputes `obf(n)` from the entries below `n`; needs `4 <= n <= max_n + 1`.
    pub fn compute_at(&self, n: usize, mode: ScanMode) -> (Rat, usize) {
        assert!(n >= 4 && n <= self.max_n() + 1, "cannot compute obf({n})");
        let (best, m) = match mode {
            ScanMode::Exact => self.scan_exact(n),
            ScanMode::Prefilter => self.scan_prefilter(n),
        };
        (best + Rat::one(), m)
    }

    /// Appends `obf(n)` up to `n = big_n`, calling `progress(n)` after each.
    pub fn extend_to(&mut self, big_n: usize, mode: ScanMode, mut progress: impl FnMut(usize)) {
        while self.max_n() < big_n {
            let (v, m) = self.compute_next(mode);
            self.push(v, m).expect("stages advance in order");
            progress(self.max_n());
        }
    }

    fn scan_exact(&self, n: usize) -> (Rat, usize) {
        let mut best: Option<(Rat, usize)> = None;
        let mut snap = 0;
        for m in 2..n {
            while snap + 1 < self.snapshots.len() && self.snapshots[snap + 1].at <= m {
                snap += 1;
            }
            let v = dual_on(n, m, &self.snapshots[snap].frontier, &self.values[m]);
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, m));
            }
        }
        best.expect("n >= 4 has at least two choices of m")
    }

    fn scan_prefilter(&self, n: usize) -> (Rat, usize) {
        let cn = choose2(n as u64) as f64;
        let mut approx: Vec<(f64, usize)> = Vec::with_capacity(n - 2);
        let mut snap = 0;
        for m in 2..n {
            while snap + 1 < self.snapshots.len() && self.snapshots[snap + 1].at <= m {
                snap += 1;
            }
            let alpha = choose2((n - m) as u64) as f64;
            let beta = cn - choose2(m as u64) as f64;
            let min = self.snapshots[snap]
                .approx
                .iter()
                .map(|&(x, y)| alpha * x + beta * y)
                .fold(f64::INFINITY, f64::min);
            approx.push((self.approx[m] + min, m));
        }
        let fmax = approx.iter().map(|a| a.0).fold(f64::NEG_INFINITY, f64::max);
        let cutoff = fmax - PREFILTER_WINDOW * fmax.abs().max(1.0);
        let mut candidates: Vec<usize> =
            approx.iter().filter(|a| a.0 >= cutoff).map(|a| a.1).collect();
        if approx.len() > PREFILTER_TOP {
            approx.select_nth_unstable_by(PREFILTER_TOP - 1, |a, b| b.0.total_cmp(&a.0));
            approx.truncate(PREFILTER_TOP);
        }
        candidates.extend(approx.iter().map(|a| a.1));
        candidates.sort_unstable();
        candidates.dedup();

        let mut best: Option<(Rat, usize)> = None;
        for m in candidates {
            let f = self.frontier_at(m).expect("m < n is in the table");
            let v = dual_on(n, m, f, &self.values[m]);
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, m));
            }
        }
        best.expect("candidate list is nonempty")
    }
}

fn dual_on(n: usize, m: usize, theta_m: &Frontier, obf_m: &Rat) -> Rat {
    let alpha = Rat::from_integer(choose2((n - m) as u64));
    let beta = Rat::from_integer(choose2(n as u64) - choose2(m as u64));
    obf_m + theta_m.min_objective(&alpha, &beta)
}

/// Builds `obf(2..=big_n)`.
pub fn obf_table(big_n: usize, mode: ScanMode) -> Result<BoundTable, BoundsError> {
    obf_table_with_progress(big_n, mode, |_| {})
}

pub fn obf_table_with_progress(
    big_n: usize,
    mode: ScanMode,
    progress: impl FnMut(usize),
) -> Result<BoundTable, BoundsError> {
    if big_n < 3 {
        return Err(BoundsError::TooSmall { min: 3, got: big_n });
    }
    let mut t = BoundTable::base();
    t.extend_to(big_n, mode, progress);
    Ok(t)
}

/// `LP(n, m)` through the dual: `obf(m)` plus the minimum of the objective
/// over the vertices of `theta_m`.
pub fn lp_dual_value(
    n: usize,
    m: usize,
    theta_m: &Frontier,
    table: &BoundTable,
) -> Result<Rat, BoundsError> {
    if m < 2 || m >= n {
        return Err(BoundsError::BadIndices { n, m });
    }
    let obf_m = table.get(m).ok_or(BoundsError::NotComputed(m))?;
    Ok(dual_on(n, m, theta_m, obf_m))
}

/// `LP(n, m)` through the primal, by enumerating basic solutions.
///
/// Writing `b_m = 1 + b'` the program is: maximise
/// `obf(m) + Σ_{k=2..m} obf(k) b_k` subject to `b >= 0`,
/// `Σ C(k,2) b_k <= C(n,2) - C(m,2)` and `Σ C(k-1,2) b_k <= C(n-m,2)`.
/// With two constraints some optimum has at most two nonzero variables.
pub fn lp_primal_oracle(n: usize, m: usize, table: &BoundTable) -> Result<Rat, BoundsError> {
    if m < 2 || m >= n {
        return Err(BoundsError::BadIndices { n, m });
    }
    let r1 = choose2(n as u64) as i128 - choose2(m as u64) as i128;
    let r2 = choose2((n - m) as u64) as i128;
    if r1 < 0 {
        return Err(BoundsError::Infeasible { n, m });
    }
    let obf = |k: usize| table.get(k).cloned().ok_or(BoundsError::NotComputed(k));
    let p = |k: usize| choose2(k as u64) as i128;
    let q = |k: usize| choose2(k as u64 - 1) as i128;

    let mut best = Rat::zero();
    for k in 2..=m {
        // largest b_k alone
        let mut cap = Rat::new(r1, p(k));
        if q(k) > 0 {
            cap = cap.min(Rat::new(r2, q(k)));
        }
        let v = obf(k)? * cap;
        if v > best {
            best = v;
        }
    }
    for k1 in 2..=m {
        for k2 in (k1 + 1)..=m {
            let det = p(k1) * q(k2) - p(k2) * q(k1);
            if det == 0 {
                continue;
            }
            let b1 = Rat::new(r1 * q(k2) - r2 * p(k2), det);
            let b2 = Rat::new(p(k1) * r2 - q(k1) * r1, det);
            if b1.is_negative() || b2.is_negative() {
                continue;
            }
            let v = obf(k1)? * b1 + obf(k2)? * b2;
            if v > best {
                best = v;
            }
        }
    }
    Ok(obf(m)? + best)
}
