use std::cmp::Ordering;
use std::fmt;

use super::FamilyError;

const WORD: usize = 64;

/// A subset of the ground set `{1, ..., n}`, stored as a bit vector.
///
/// Point `i` lives in bit `i - 1`. Blocks order canonically by cardinality
/// first, then by the numeric value of the bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Block {
    n: usize,
    words: Box<[u64]>,
}

impl Block {
    pub fn empty(n: usize) -> Self {
        Block {
            n,
            words: vec![0u64; n.div_ceil(WORD)].into_boxed_slice(),
        }
    }

    /// The universe `[n]`.
    pub fn full(n: usize) -> Self {
        let mut b = Block::empty(n);
        for (i, w) in b.words.iter_mut().enumerate() {
            let lo = i * WORD;
            let bits = (n - lo).min(WORD);
            *w = if bits == WORD { u64::MAX } else { (1u64 << bits) - 1 };
        }
        b
    }

    pub fn from_points<I>(n: usize, points: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut b = Block::empty(n);
        for p in points {
            if p == 0 || p > n {
                return Err(FamilyError::PointOutOfRange { point: p, n });
            }
            b.insert(p);
        }
        Ok(b)
    }

    /// Builds a block from a bit mask (bit `i` is point `i + 1`); `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        debug_assert!(n <= WORD);
        let mut b = Block::empty(n);
        if n > 0 {
            let keep = if n == WORD { u64::MAX } else { (1u64 << n) - 1 };
            b.words[0] = mask & keep;
        }
        b
    }

    pub fn ground(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n
    }

    pub fn contains(&self, point: usize) -> bool {
        if point == 0 || point > self.n {
            return false;
        }
        let i = point - 1;
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    /// Panics if `point` is outside `1..=n`.
    pub fn insert(&mut self, point: usize) {
        assert!(point >= 1 && point <= self.n, "point {point} outside [1, {}]", self.n);
        let i = point - 1;
        self.words[i / WORD] |= 1u64 << (i % WORD);
    }

    pub fn remove(&mut self, point: usize) {
        if point >= 1 && point <= self.n {
            let i = point - 1;
            self.words[i / WORD] &= !(1u64 << (i % WORD));
        }
    }

    /// Points in increasing order, 1-based.
    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + tz + 1)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.points().collect()
    }

    pub fn intersection_len(&self, other: &Block) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &Block) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_comparable(&self, other: &Block) -> bool {
        self.is_subset(other) || other.is_subset(self)
    }

    pub fn union(&self, other: &Block) -> Block {
        let words = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| a | b)
            .collect();
        Block { n: self.n, words }
    }

    /// Maps point `i` of this block's ground set to `image[i - 1]` in a
    /// ground set of size `n_new`.
    pub fn relabel(&self, image: &[usize], n_new: usize) -> Block {
        let mut b = Block::empty(n_new);
        for p in self.points() {
            b.insert(image[p - 1]);
        }
        b
    }

    fn cmp_numeric(&self, other: &Block) -> Ordering {
        self.words
            .iter()
            .rev()
            .cmp(other.words.iter().rev())
    }
}

impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.cmp_numeric(other))
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.points().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}
