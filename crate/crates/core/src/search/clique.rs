//! Branch and bound maximum clique with greedy colouring bounds.

use std::time::{Duration, Instant};

/// Fixed-width bitset over vertex indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset {
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Bitset::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn and(&self, other: &Bitset) -> Bitset {
        Bitset {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn and_not_assign(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueResult {
    pub clique: Vec<usize>,
    /// False if the budget ran out before the search space was exhausted.
    pub exact: bool,
    pub nodes: u64,
}

struct Search<'a> {
    adj: &'a [Bitset],
    best: Vec<usize>,
    nodes: u64,
    deadline: Instant,
    timed_out: bool,
}

impl Search<'_> {
    /// Vertices of `cand` with greedy colour classes, in increasing colour.
    fn colour(&self, cand: &Bitset) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(cand.count());
        let mut uncoloured = cand.clone();
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut q = uncoloured.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                uncoloured.remove(v);
                q.and_not_assign(&self.adj[v]);
                out.push((v, colour));
            }
        }
        out
    }

    fn expand(&mut self, clique: &mut Vec<usize>, mut cand: Bitset) {
        self.nodes += 1;
        if self.nodes % 1024 == 1 && Instant::now() >= self.deadline {
            self.timed_out = true;
        }
        if self.timed_out {
            return;
        }
        let order = self.colour(&cand);
        for &(v, c) in order.iter().rev() {
            if clique.len() + c <= self.best.len() || self.timed_out {
                return;
            }
            clique.push(v);
            let next = cand.and(&self.adj[v]);
            if next.is_empty() {
                if clique.len() > self.best.len() {
                    self.best = clique.clone();
                }
            } else {
                self.expand(clique, next);
            }
            clique.pop();
            cand.remove(v);
        }
    }
}

/// Maximum clique of the graph with adjacency rows `adj`. `seed` must be a
/// clique; it is the starting incumbent.
pub fn max_clique(adj: &[Bitset], seed: &[usize], budget: Duration) -> CliqueResult {
    debug_assert!(seed
        .iter()
        .enumerate()
        .all(|(i, &a)| seed[i + 1..].iter().all(|&b| adj[a].contains(b))));
    let n = adj.len();
    let mut s = Search {
        adj,
        best: seed.to_vec(),
        nodes: 0,
        deadline: Instant::now() + budget,
        timed_out: false,
    };
    if n > 0 {
        s.expand(&mut Vec::new(), Bitset::full(n));
    }
    let mut clique = s.best;
    clique.sort_unstable();
    CliqueResult {
        clique,
        exact: !s.timed_out,
        nodes: s.nodes,
    }
}
