//! Exact maximum t-laminar families on small ground sets.
//!
//! t-laminarity is a pairwise condition, so a t-laminar family among the
//! eligible subsets of `[n]` is exactly a clique in the graph joining two
//! subsets when they meet in fewer than `t` points or are nested.

mod clique;

use std::time::Duration;

use thiserror::Error;

use crate::bounds::BoundTable;
use crate::construct::small_construction;
use crate::rat::Rat;
use crate::setfam::{Block, Family};

pub use clique::{max_clique, Bitset, CliqueResult};

/// Largest ground set the search accepts.
pub const MAX_SEARCH_N: usize = 10;
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(60);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search supports 1 <= n <= {MAX_SEARCH_N}, got {0}")]
    GroundTooLarge(usize),
    #[error("t must be at least 1")]
    ZeroT,
}

/// Which subsets are vertices.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Convention {
    /// Sizes at least `max(t, 2)`: singletons are never counted.
    #[default]
    AtLeastTwo,
    /// Sizes at least `t`.
    AtLeastT,
}

impl Convention {
    pub fn min_size(self, t: usize) -> usize {
        match self {
            Convention::AtLeastTwo => t.max(2),
            Convention::AtLeastT => t.max(1),
        }
    }
}

/// Subsets of `[n]` of size at least `min_size`, with `a ~ b` when
/// `|a ∩ b| < t` or one contains the other.
#[derive(Clone, Debug)]
pub struct CompatGraph {
    pub n: usize,
    pub t: usize,
    vertices: Vec<Block>,
    adj: Vec<Bitset>,
}

impl CompatGraph {
    pub fn new(n: usize, t: usize, min_size: usize) -> Result<Self, SearchError> {
        if n == 0 || n > MAX_SEARCH_N {
            return Err(SearchError::GroundTooLarge(n));
        }
        if t == 0 {
            return Err(SearchError::ZeroT);
        }
        let mut vertices: Vec<Block> = (1u64..(1u64 << n))
            .map(|mask| Block::from_mask(n, mask))
            .filter(|b| b.len() >= min_size)
            .collect();
        let compatible = |a: &Block, b: &Block| a.intersection_len(b) < t || a.is_comparable(b);
        let degree = |v: &Block, all: &[Block]| all.iter().filter(|w| *w != v && compatible(v, w)).count();
        // degree descending, then canonical order
        let degrees: Vec<usize> = vertices.iter().map(|v| degree(v, &vertices)).collect();
        let mut idx: Vec<usize> = (0..vertices.len()).collect();
        idx.sort_by(|&i, &j| degrees[j].cmp(&degrees[i]).then(vertices[i].cmp(&vertices[j])));
        vertices = idx.into_iter().map(|i| vertices[i].clone()).collect();

        let len = vertices.len();
        let mut adj = vec![Bitset::new(len); len];
        for i in 0..len {
            for j in (i + 1)..len {
                if compatible(&vertices[i], &vertices[j]) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        Ok(CompatGraph { n, t, vertices, adj })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &Block {
        &self.vertices[i]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    pub fn index_of(&self, b: &Block) -> Option<usize> {
        self.vertices.iter().position(|v| v == b)
    }

    /// True iff every member is a vertex and all pairs are adjacent.
    pub fn is_clique(&self, family: &Family) -> bool {
        let Some(idx) = family.iter().map(|b| self.index_of(b)).collect::<Option<Vec<_>>>() else {
            return false;
        };
        idx.iter()
            .enumerate()
            .all(|(a, &i)| idx[a + 1..].iter().all(|&j| self.adjacent(i, j)))
    }

    pub fn adjacency(&self) -> &[Bitset] {
        &self.adj
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: Duration,
    pub convention: Convention,
    /// Start from the best known explicit family (t = 2 only).
    pub seed_with_construction: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_BUDGET,
            convention: Convention::AtLeastTwo,
            seed_with_construction: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub n: usize,
    pub t: usize,
    pub size: usize,
    pub family: Family,
    /// False when the budget ran out; `size` is then only a lower bound.
    pub exact: bool,
    pub nodes: u64,
}

pub fn max_laminar_exact(n: usize, t: usize, opts: &SearchOptions) -> Result<SearchResult, SearchError> {
    let g = CompatGraph::new(n, t, opts.convention.min_size(t))?;
    let mut seed = Vec::new();
    if opts.seed_with_construction && t == 2 && n >= 2 {
        if let Ok(f) = small_construction(n) {
            seed = f.iter().filter_map(|b| g.index_of(b)).collect();
        }
    }
    let res = max_clique(g.adjacency(), &seed, opts.budget);
    let sets = res.clique.iter().map(|&i| g.vertex(i).clone()).collect();
    let family = Family::from_blocks_dedup(n, sets).expect("vertices are distinct subsets of [n]");
    Ok(SearchResult {
        n,
        t,
        size: family.len(),
        family,
        exact: res.exact,
        nodes: res.nodes,
    })
}

/// Maximum laminar family counting every nonempty member.
pub fn max_laminar_classic(n: usize) -> Result<SearchResult, SearchError> {
    let opts = SearchOptions {
        convention: Convention::AtLeastT,
        seed_with_construction: false,
        ..SearchOptions::default()
    };
    max_laminar_exact(n, 1, &opts)
}

/// `construction <= search <= obf(n)` at one ground size.
#[derive(Clone, Debug)]
pub struct GapReport {
    pub n: usize,
    pub construction: u64,
    pub search: usize,
    pub search_exact: bool,
    pub obf: Option<Rat>,
}

impl GapReport {
    pub fn holds(&self) -> bool {
        let low = self.construction <= self.search as u64;
        let high = self
            .obf
            .as_ref()
            .is_none_or(|o| Rat::from_integer(self.search as u64) <= *o);
        low && high
    }
}

/// Runs the t = 2 search at `n` and compares it with the explicit
/// construction and, when the table reaches `n`, with `obf(n)`.
pub fn verify_gap(n: usize, table: Option<&BoundTable>, budget: Duration) -> Result<GapReport, SearchError> {
    let opts = SearchOptions {
        budget,
        ..SearchOptions::default()
    };
    let res = max_laminar_exact(n, 2, &opts)?;
    let construction = crate::construct::small_construction_size(n).0;
    Ok(GapReport {
        n,
        construction,
        search: res.size,
        search_exact: res.exact,
        obf: table.and_then(|t| t.get(n).cloned()),
    })
}
