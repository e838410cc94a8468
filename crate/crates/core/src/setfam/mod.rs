//! Set families over `[n]` and the t-laminar property.
//!
//! A family is t-laminar when any two members meeting in at least `t`
//! points are nested. Three equivalent tests are provided: the pairwise
//! definition ([`is_t_laminar`]), avoidance of the 2 x (t+2) forbidden
//! configuration in the incidence matrix ([`matrix`]), and the chain
//! condition above every t-subset ([`unique_chain_check`]).

mod block;
pub mod matrix;

use std::collections::{HashMap, HashSet};

use thiserror::Error;

pub use block::Block;
pub use matrix::{
    contains_config, find_config, find_forbidden_in_family, forbidden_matrix, incidence_matrix, BinaryMatrix,
    ConfigEmbedding,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("point {point} is outside the ground set [1, {n}]")]
    PointOutOfRange { point: usize, n: usize },
    #[error("block {block} has ground size {found}, family has {expected}")]
    GroundMismatch {
        block: String,
        expected: usize,
        found: usize,
    },
    #[error("duplicate block {0}")]
    Duplicate(String),
}

/// A duplicate-free list of blocks over a common ground set `[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    n: usize,
    sets: Vec<Block>,
}

impl Family {
    pub fn new(n: usize) -> Self {
        Family { n, sets: Vec::new() }
    }

    /// Rejects blocks over a different ground set and duplicates.
    pub fn from_blocks(n: usize, sets: Vec<Block>) -> Result<Self, FamilyError> {
        check_ground(n, &sets)?;
        let mut seen = HashSet::with_capacity(sets.len());
        for b in &sets {
            if !seen.insert(b) {
                return Err(FamilyError::Duplicate(b.to_string()));
            }
        }
        Ok(Family { n, sets })
    }

    /// Like [`Family::from_blocks`] but silently drops duplicates; the result
    /// is in canonical order.
    pub fn from_blocks_dedup(n: usize, mut sets: Vec<Block>) -> Result<Self, FamilyError> {
        check_ground(n, &sets)?;
        sets.sort_unstable();
        sets.dedup();
        Ok(Family { n, sets })
    }

    /// Convenience constructor from point lists.
    pub fn from_point_lists<I, S>(n: usize, lists: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let sets = lists
            .into_iter()
            .map(|s| Block::from_points(n, s.as_ref().iter().copied()))
            .collect::<Result<Vec<_>, _>>()?;
        Family::from_blocks(n, sets)
    }

    /// All `k`-subsets of `[n]` in canonical order.
    pub fn all_subsets_of_size(n: usize, k: usize) -> Family {
        let mut sets = Vec::new();
        for_each_combination(n, k, |c| {
            let mut b = Block::empty(n);
            for &p in c {
                b.insert(p + 1);
            }
            sets.push(b);
        });
        sets.sort_unstable();
        Family { n, sets }
    }

    pub fn ground(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[Block] {
        &self.sets
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Block> {
        self.sets.iter()
    }

    pub fn into_sets(self) -> Vec<Block> {
        self.sets
    }

    pub fn contains(&self, b: &Block) -> bool {
        self.sets.contains(b)
    }

    pub fn sort_canonical(&mut self) {
        self.sets.sort_unstable();
    }

    /// Number of members with cardinality at least `k`.
    pub fn count_at_least(&self, k: usize) -> usize {
        self.sets.iter().filter(|b| b.len() >= k).count()
    }

    /// Merges `other` in, dropping duplicates, and re-sorts canonically.
    pub fn union_with(&mut self, other: Family) -> Result<(), FamilyError> {
        check_ground(self.n, other.sets())?;
        self.sets.extend(other.sets);
        self.sets.sort_unstable();
        self.sets.dedup();
        Ok(())
    }

    /// Adds a block not already present.
    pub fn insert(&mut self, b: Block) -> Result<(), FamilyError> {
        check_ground(self.n, std::slice::from_ref(&b))?;
        if self.sets.contains(&b) {
            return Err(FamilyError::Duplicate(b.to_string()));
        }
        self.sets.push(b);
        Ok(())
    }

    pub fn point_lists(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(Block::to_vec).collect()
    }
}

impl<'a> IntoIterator for &'a Family {
    type Item = &'a Block;
    type IntoIter = std::slice::Iter<'a, Block>;
    fn into_iter(self) -> Self::IntoIter {
        self.sets.iter()
    }
}

fn check_ground(n: usize, sets: &[Block]) -> Result<(), FamilyError> {
    for b in sets {
        if b.ground() != n {
            return Err(FamilyError::GroundMismatch {
                block: b.to_string(),
                expected: n,
                found: b.ground(),
            });
        }
    }
    Ok(())
}

/// Calls `f` with each increasing `k`-combination of `0..n`.
pub(crate) fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn violates(a: &Block, b: &Block, t: usize) -> bool {
    a.intersection_len(b) >= t && !a.is_comparable(b)
}

/// True iff every two members meeting in at least `t` points are nested.
pub fn is_t_laminar(family: &Family, t: usize) -> bool {
    laminarity_witness(family, t).is_none()
}

/// The first offending pair in family order, if any.
pub fn laminarity_witness(family: &Family, t: usize) -> Option<(&Block, &Block)> {
    let sets = family.sets();
    // Members smaller than t can never be part of a violation.
    let big: Vec<&Block> = sets.iter().filter(|b| b.len() >= t).collect();
    for (i, a) in big.iter().enumerate() {
        for b in &big[i + 1..] {
            if violates(a, b, t) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Members not strictly contained in another eligible member. With
/// `exclude_universe`, `[n]` is removed first.
pub fn maximal_sets(family: &Family, exclude_universe: bool) -> Family {
    let eligible: Vec<&Block> = family
        .iter()
        .filter(|b| !(exclude_universe && b.is_full()))
        .collect();
    let sets = eligible
        .iter()
        .filter(|a| {
            !eligible
                .iter()
                .any(|b| a.len() < b.len() && a.is_subset(b))
        })
        .map(|b| (*b).clone())
        .collect();
    Family {
        n: family.ground(),
        sets,
    }
}

/// The chain condition: after adding every t-subset of `[n]`, the members of
/// size at least `t` above each t-subset form a chain.
///
/// Only t-subsets that lie in some member are inspected; an uncovered
/// t-subset sits below nothing but itself.
pub fn unique_chain_check(family: &Family, t: usize) -> bool {
    if t > family.ground() {
        return true;
    }
    let mut above: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
    for (i, b) in family.iter().enumerate() {
        if b.len() < t {
            continue;
        }
        let pts = b.to_vec();
        for_each_combination(pts.len(), t, |c| {
            let key: Vec<u32> = c.iter().map(|&j| pts[j] as u32).collect();
            above.entry(key).or_default().push(i);
        });
    }
    let sets = family.sets();
    above.values_mut().all(|members| {
        members.sort_by_key(|&i| sets[i].len());
        members
            .windows(2)
            .all(|w| sets[w[0]].len() < sets[w[1]].len() && sets[w[0]].is_subset(&sets[w[1]]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: usize, lists: &[&[usize]]) -> Family {
        Family::from_point_lists(n, lists.iter().copied()).unwrap()
    }

    pub(crate) fn fano_family() -> Family {
        let lines: [&[usize]; 7] = [
            &[1, 2, 3],
            &[1, 4, 5],
            &[1, 6, 7],
            &[2, 4, 6],
            &[2, 5, 7],
            &[3, 4, 7],
            &[3, 5, 6],
        ];
        let mut f = Family::all_subsets_of_size(7, 2);
        for l in lines {
            f.insert(Block::from_points(7, l.iter().copied()).unwrap()).unwrap();
        }
        f.insert(Block::full(7)).unwrap();
        f
    }

    #[test]
    fn f3_family_is_two_laminar() {
        let f = fam(3, &[&[1, 2], &[1, 3], &[2, 3], &[1, 2, 3]]);
        assert!(is_t_laminar(&f, 2));
        assert!(unique_chain_check(&f, 2));
    }

    #[test]
    fn crossing_triples() {
        let f = fam(4, &[&[1, 2, 3], &[1, 2, 4]]);
        assert!(!is_t_laminar(&f, 2));
        let (a, b) = laminarity_witness(&f, 2).unwrap();
        assert_eq!((a.to_vec(), b.to_vec()), (vec![1, 2, 3], vec![1, 2, 4]));
        assert!(is_t_laminar(&f, 3));
        assert!(!unique_chain_check(&f, 2));
        assert!(unique_chain_check(&f, 3));
    }

    #[test]
    fn classic_laminarity_witness() {
        let f = fam(3, &[&[1, 2], &[2, 3]]);
        let (a, b) = laminarity_witness(&f, 1).unwrap();
        assert_eq!((a.to_vec(), b.to_vec()), (vec![1, 2], vec![2, 3]));
    }

    #[test]
    fn fano_family_checks() {
        let f = fano_family();
        assert_eq!(f.len(), 29);
        assert!(is_t_laminar(&f, 2));
        assert!(laminarity_witness(&f, 2).is_none());
        assert!(unique_chain_check(&f, 2));
        let maxi = maximal_sets(&f, true);
        assert_eq!(maxi.len(), 7);
        assert!(maxi.iter().all(|b| b.len() == 3));
    }

    #[test]
    fn empty_family_is_laminar() {
        assert!(is_t_laminar(&Family::new(5), 1));
        assert!(unique_chain_check(&Family::new(5), 2));
    }

    #[test]
    fn chain_check_at_t_equals_n() {
        let f = fam(3, &[&[1, 2], &[2, 3], &[1, 2, 3]]);
        assert!(unique_chain_check(&f, 3));
    }

    #[test]
    fn maximal_sets_examples() {
        let f = fam(5, &[&[1, 2], &[1, 2, 3], &[4, 5]]);
        assert_eq!(maximal_sets(&f, false).point_lists(), vec![vec![1, 2, 3], vec![4, 5]]);
        let f = fam(5, &[&[1, 2, 3, 4, 5], &[1, 2], &[3, 4]]);
        assert_eq!(maximal_sets(&f, true).point_lists(), vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(maximal_sets(&f, false).point_lists(), vec![vec![1, 2, 3, 4, 5]]);
    }

    #[test]
    fn duplicates_rejected() {
        let err = Family::from_point_lists(3, [[1, 2], [1, 2]]).unwrap_err();
        assert_eq!(err, FamilyError::Duplicate("{1,2}".into()));
        let f = Family::from_blocks_dedup(3, vec![Block::full(3), Block::full(3)]).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn ground_mismatch_rejected() {
        let err = Family::from_blocks(3, vec![Block::full(4)]).unwrap_err();
        assert!(matches!(err, FamilyError::GroundMismatch { expected: 3, found: 4, .. }));
    }

    #[test]
    fn combinations_count() {
        let mut c = 0;
        for_each_combination(7, 3, |_| c += 1);
        assert_eq!(c, 35);
        let mut c = 0;
        for_each_combination(4, 0, |x| {
            assert!(x.is_empty());
            c += 1
        });
        assert_eq!(c, 1);
        let mut c = 0;
        for_each_combination(2, 3, |_| c += 1);
        assert_eq!(c, 0);
    }
}
