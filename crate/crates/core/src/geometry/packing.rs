use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Design, DesignKind, GeometryError};
use crate::rat::binomial;
use crate::setfam::{for_each_combination, Block, Family};

/// Up to this many k-subsets are enumerated and shuffled, which makes the
/// result a maximal packing. Beyond it, random k-subsets are sampled.
const ENUMERATION_LIMIT: u64 = 1 << 21;

/// A t-(n, k, 1) packing built greedily: k-subsets are visited in a seeded
/// random order and accepted when they share fewer than `t` points with
/// every accepted block.
pub fn greedy_packing(n: usize, k: usize, t: usize, seed: u64) -> Result<Design, GeometryError> {
    if t == 0 || t > k || k > n {
        return Err(GeometryError::InvalidParameters(format!(
            "greedy packing needs 1 <= t <= k <= n, got t={t} k={k} n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut covered = CoverSet::new(t);
    let mut blocks: Vec<Block> = Vec::new();
    let try_add = |pts: &[usize], covered: &mut CoverSet, blocks: &mut Vec<Block>| {
        if covered.is_free(pts) {
            covered.mark(pts);
            blocks.push(Block::from_points(n, pts.iter().map(|p| p + 1)).expect("in range"));
        }
    };

    let total = binomial(n as u64, k as u64);
    if total <= ENUMERATION_LIMIT.into() {
        let mut all: Vec<Vec<usize>> = Vec::new();
        for_each_combination(n, k, |c| all.push(c.to_vec()));
        all.shuffle(&mut rng);
        for pts in &all {
            try_add(pts, &mut covered, &mut blocks);
        }
    } else {
        // Stop after a long run of rejections; not guaranteed maximal.
        let patience = 64 * (n as u64) * (n as u64);
        let mut misses = 0u64;
        let mut pts: Vec<usize> = Vec::with_capacity(k);
        while misses < patience {
            pts.clear();
            pts.extend(rand::seq::index::sample(&mut rng, n, k));
            pts.sort_unstable();
            let before = blocks.len();
            try_add(&pts, &mut covered, &mut blocks);
            if blocks.len() == before {
                misses += 1;
            } else {
                misses = 0;
            }
        }
    }

    let blocks = Family::from_blocks(n, blocks).expect("accepted blocks are distinct");
    Ok(Design {
        t,
        v: n,
        lambda: 1,
        blocks,
        kind: DesignKind::Packing,
    })
}

/// Which t-subsets of `0..n` are already inside an accepted block.
struct CoverSet {
    t: usize,
    set: std::collections::HashSet<Vec<u16>>,
}

impl CoverSet {
    fn new(t: usize) -> Self {
        CoverSet {
            t,
            set: Default::default(),
        }
    }

    fn is_free(&self, pts: &[usize]) -> bool {
        let mut free = true;
        for_each_combination(pts.len(), self.t, |c| {
            if free && self.set.contains(&key(c, pts)) {
                free = false;
            }
        });
        free
    }

    fn mark(&mut self, pts: &[usize]) {
        let set = &mut self.set;
        for_each_combination(pts.len(), self.t, |c| {
            set.insert(key(c, pts));
        });
    }
}

fn key(idx: &[usize], pts: &[usize]) -> Vec<u16> {
    idx.iter().map(|&i| pts[i] as u16).collect()
}
