//! The feasible region of the two-variable dual program.
//!
//! Constraint `k >= 2` reads `C(k-1,2) x + C(k,2) y >= obf(k)`; constraint 1
//! is `x >= 0`. Constraint 2 is therefore `y >= 1`. Because the slope
//! `-(k-2)/k` gets steeper with `k`, the boundary is a convex chain that
//! runs from the horizontal `y = 1` ray on the right, through the critical
//! lines in increasing `k`, to the vertical `x = 0` ray on the left.

use crate::rat::{choose2, Rat};

/// `a x + b y >= c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub k: usize,
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl Halfspace {
    /// The constraint `x >= 0`.
    pub fn nonnegative_x() -> Self {
        Halfspace {
            k: 1,
            a: Rat::one(),
            b: Rat::zero(),
            c: Rat::zero(),
        }
    }

    /// The constraint for index `k >= 2` with right-hand side `obf_k`.
    pub fn for_index(k: usize, obf_k: Rat) -> Self {
        assert!(k >= 2, "halfspace index must be at least 2");
        Halfspace {
            k,
            a: Rat::from_integer(choose2(k as u64 - 1)),
            b: Rat::from_integer(choose2(k as u64)),
            c: obf_k,
        }
    }

    /// `a x + b y - c`; nonnegative iff the point is inside.
    pub fn slack(&self, x: &Rat, y: &Rat) -> Rat {
        &(&(&self.a * x) + &(&self.b * y)) - &self.c
    }

    pub fn contains(&self, x: &Rat, y: &Rat) -> bool {
        !self.slack(x, y).is_negative()
    }

    /// Intersection of the two boundary lines; `None` when parallel.
    pub fn meet(&self, other: &Halfspace) -> Option<(Rat, Rat)> {
        let det = &(&self.a * &other.b) - &(&other.a * &self.b);
        if det.is_zero() {
            return None;
        }
        let x = &(&(&self.c * &other.b) - &(&other.c * &self.b)) / &det;
        let y = &(&(&self.a * &other.c) - &(&other.a * &self.c)) / &det;
        Some((x, y))
    }
}

/// What [`Frontier::update`] did with a new constraint.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum UpdateOutcome {
    /// The region already satisfies it (possibly touching a vertex).
    Redundant,
    /// It cut the region; `evicted` earlier critical constraints dropped out.
    Cut { evicted: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frontier {
    n: usize,
    /// Boundary order: `[η_2, ..., η_max, η_1]`.
    chain: Vec<Halfspace>,
    /// `vertices[i]` joins `chain[i]` and `chain[i + 1]`; decreasing `x`.
    vertices: Vec<(Rat, Rat)>,
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
#[error("frontier is at stage {current}; next index must be {expected}, got {got}")]
pub struct StageError {
    pub current: usize,
    pub expected: usize,
    pub got: usize,
}

impl Frontier {
    /// The region `{x >= 0, y >= 1}` at stage 2.
    pub fn initial() -> Self {
        Frontier {
            n: 2,
            chain: vec![Halfspace::for_index(2, Rat::one()), Halfspace::nonnegative_x()],
            vertices: vec![(Rat::zero(), Rat::one())],
        }
    }

    pub fn stage(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[(Rat, Rat)] {
        &self.vertices
    }

    /// Critical constraints in boundary order.
    pub fn chain(&self) -> &[Halfspace] {
        &self.chain
    }

    /// Indices of the retained halfspaces, ascending.
    pub fn critical(&self) -> Vec<usize> {
        let mut ks: Vec<usize> = self.chain.iter().map(|h| h.k).collect();
        ks.sort_unstable();
        ks
    }

    pub fn contains(&self, x: &Rat, y: &Rat) -> bool {
        self.chain.iter().all(|h| h.contains(x, y))
    }

    /// Minimum of `alpha x + beta y` over the region for `alpha, beta >= 0`.
    /// The recession cone is the nonnegative quadrant, so some vertex attains
    /// it.
    pub fn min_objective(&self, alpha: &Rat, beta: &Rat) -> Rat {
        debug_assert!(!alpha.is_negative() && !beta.is_negative());
        self.vertices
            .iter()
            .map(|(x, y)| &(alpha * x) + &(beta * y))
            .min()
            .expect("frontier has at least one vertex")
    }

    /// Intersects the region with η_k for `k = stage + 1`.
    ///
    /// A constraint that every vertex satisfies is dropped, including one
    /// that is tight at a vertex without cutting. Otherwise the violated
    /// vertices, which form a tail of the list since η_k is steeper than
    /// every retained line, are cut away, the lines that only bounded them
    /// are evicted, and two new vertices are computed exactly.
    pub fn update(&mut self, k: usize, obf_k: Rat) -> Result<UpdateOutcome, StageError> {
        if k != self.n + 1 {
            return Err(StageError {
                current: self.n,
                expected: self.n + 1,
                got: k,
            });
        }
        self.n = k;
        let h = Halfspace::for_index(k, obf_k);
        let slacks: Vec<Rat> = self.vertices.iter().map(|(x, y)| h.slack(x, y)).collect();
        let Some(first_bad) = slacks.iter().position(|s| s.is_negative()) else {
            return Ok(UpdateOutcome::Redundant);
        };
        debug_assert!(slacks[first_bad..].iter().all(|s| s.is_negative()));

        let old_len = self.chain.len();
        // Line chain[first_bad] carries the last surviving piece of boundary,
        // unless η_k passes exactly through the vertex before it, in which
        // case that line no longer touches the region except at one point.
        let touches = first_bad > 0 && slacks[first_bad - 1].is_zero();
        let keep_lines = if touches { first_bad } else { first_bad + 1 };
        self.chain.truncate(keep_lines);
        self.vertices.truncate(first_bad);
        if !touches {
            let meet = self.chain[keep_lines - 1]
                .meet(&h)
                .expect("critical lines have distinct slopes");
            self.vertices.push(meet);
        }
        let top = (Rat::zero(), &h.c / &h.b);
        self.chain.push(h);
        self.chain.push(Halfspace::nonnegative_x());
        self.vertices.push(top);

        // old chain had old_len lines, we kept keep_lines of the non-η_1 ones
        let evicted = (old_len - 1) - keep_lines;
        Ok(UpdateOutcome::Cut { evicted })
    }

    /// A point that satisfies every critical constraint except η_k, proving
    /// η_k cannot be dropped. `None` if `k` is not critical.
    pub fn removal_witness(&self, k: usize) -> Option<(Rat, Rat)> {
        let pos = self.chain.iter().position(|h| h.k == k)?;
        let last = self.chain.len() - 1;
        if pos == 0 {
            // step right along the next line, below y = 1
            let next = &self.chain[1];
            let (x, y) = &self.vertices[0];
            return Some((x + &next.b, y - &next.a));
        }
        if pos == last {
            // step left along the preceding line, past x = 0
            let prev = &self.chain[last - 1];
            let (x, y) = &self.vertices[last - 1];
            return Some((x - &prev.b, y + &prev.a));
        }
        self.chain[pos - 1].meet(&self.chain[pos + 1])
    }
}
