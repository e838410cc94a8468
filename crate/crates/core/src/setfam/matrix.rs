//! Zero-one matrices and forbidden-configuration search.

use std::collections::HashMap;
use std::fmt;

use super::{Block, Family};

#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    data: Vec<bool>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix {
            rows,
            cols,
            data: vec![false; rows * cols],
        }
    }

    /// Panics on ragged input.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = BinaryMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix rows");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v != 0);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(r, c) as u8).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The `|F| x n` incidence matrix: entry `(A, i)` is 1 iff `i` is in `A`.
pub fn incidence_matrix(family: &Family) -> BinaryMatrix {
    let n = family.ground();
    let mut m = BinaryMatrix::zeros(family.len(), n);
    for (r, b) in family.iter().enumerate() {
        for p in b.points() {
            m.set(r, p - 1, true);
        }
    }
    m
}

/// The 2 x (t+2) configuration with one (0,1) column, one (1,0) column and
/// `t` (1,1) columns.
pub fn forbidden_matrix(t: usize) -> BinaryMatrix {
    let mut m = BinaryMatrix::zeros(2, t + 2);
    m.set(1, 0, true);
    m.set(0, 1, true);
    for c in 2..t + 2 {
        m.set(0, c, true);
        m.set(1, c, true);
    }
    m
}

/// Where a configuration sits inside a larger matrix: row `i` of the
/// pattern is row `rows[i]` of the host, column `j` is column `cols[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigEmbedding {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

pub fn contains_config(host: &BinaryMatrix, pattern: &BinaryMatrix) -> bool {
    find_config(host, pattern).is_some()
}

/// Exhaustive search for a row- and column-permuted copy of `pattern` as a
/// submatrix of `host`.
///
/// Ordered tuples of distinct host rows absorb the row permutation; once
/// rows are fixed, a column embedding exists iff every column pattern of
/// `pattern` occurs at least as often among the host's restricted columns.
pub fn find_config(host: &BinaryMatrix, pattern: &BinaryMatrix) -> Option<ConfigEmbedding> {
    let (pr, pc) = (pattern.rows(), pattern.cols());
    if pr > host.rows() || pc > host.cols() {
        return None;
    }
    if pr == 0 {
        return Some(ConfigEmbedding {
            rows: vec![],
            cols: (0..pc).collect(),
        });
    }
    assert!(pr <= 64, "pattern with more than 64 rows");

    let identity: Vec<usize> = (0..pr).collect();
    let mut need: HashMap<u64, Vec<usize>> = HashMap::new();
    for c in 0..pc {
        need.entry(column_key(pattern, c, &identity)).or_default().push(c);
    }

    let mut chosen = Vec::with_capacity(pr);
    let mut used = vec![false; host.rows()];
    search_rows(host, pattern, &need, &mut chosen, &mut used)
}

/// Bit `i` of the key is the entry in the `i`-th selected row of column `c`.
fn column_key(m: &BinaryMatrix, c: usize, rows: &[usize]) -> u64 {
    rows.iter()
        .enumerate()
        .filter(|(_, &r)| m.get(r, c))
        .fold(0u64, |key, (i, _)| key | 1 << i)
}

fn search_rows(
    host: &BinaryMatrix,
    pattern: &BinaryMatrix,
    need: &HashMap<u64, Vec<usize>>,
    chosen: &mut Vec<usize>,
    used: &mut [bool],
) -> Option<ConfigEmbedding> {
    if chosen.len() == pattern.rows() {
        return match_columns(host, chosen, need, pattern.cols());
    }
    for r in 0..host.rows() {
        if used[r] {
            continue;
        }
        used[r] = true;
        chosen.push(r);
        if let Some(e) = search_rows(host, pattern, need, chosen, used) {
            return Some(e);
        }
        chosen.pop();
        used[r] = false;
    }
    None
}

fn match_columns(
    host: &BinaryMatrix,
    rows: &[usize],
    need: &HashMap<u64, Vec<usize>>,
    pc: usize,
) -> Option<ConfigEmbedding> {
    let mut have: HashMap<u64, Vec<usize>> = HashMap::new();
    for c in 0..host.cols() {
        have.entry(column_key(host, c, rows)).or_default().push(c);
    }
    let mut cols = vec![0usize; pc];
    for (key, pcols) in need {
        let hcols = have.get(key)?;
        if hcols.len() < pcols.len() {
            return None;
        }
        for (&p, &h) in pcols.iter().zip(hcols) {
            cols[p] = h;
        }
    }
    Some(ConfigEmbedding {
        rows: rows.to_vec(),
        cols,
    })
}

/// Forbidden-configuration search specialised to a family and the 2-row
/// configuration of strength `t`, using popcounts instead of a dense matrix.
/// Returns the same kind of embedding as [`find_config`] on
/// `incidence_matrix(family)` and `forbidden_matrix(t)`.
pub fn find_forbidden_in_family(family: &Family, t: usize) -> Option<ConfigEmbedding> {
    let sets = family.sets();
    for (i, a) in sets.iter().enumerate() {
        if a.len() < t + 1 {
            continue;
        }
        for (j, b) in sets.iter().enumerate() {
            if i == j || b.len() < t + 1 {
                continue;
            }
            if let Some(cols) = two_row_embedding(a, b, t) {
                return Some(ConfigEmbedding { rows: vec![i, j], cols });
            }
        }
    }
    None
}

/// Columns realising the pattern with row 0 = `a`, row 1 = `b`.
fn two_row_embedding(a: &Block, b: &Block, t: usize) -> Option<Vec<usize>> {
    // column 0 of the pattern is (0,1): a point of b outside a
    let both = a.intersection_len(b);
    if both < t || a.is_subset(b) || b.is_subset(a) {
        return None;
    }
    let only_b = b.points().find(|&p| !a.contains(p))?;
    let only_a = a.points().find(|&p| !b.contains(p))?;
    let mut cols = vec![only_b - 1, only_a - 1];
    cols.extend(a.points().filter(|&p| b.contains(p)).take(t).map(|p| p - 1));
    Some(cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setfam::Family;

    #[test]
    fn incidence_examples() {
        let f = Family::from_point_lists(2, [vec![1], vec![1, 2]]).unwrap();
        assert_eq!(incidence_matrix(&f).to_rows(), vec![vec![1, 0], vec![1, 1]]);
        let m = incidence_matrix(&Family::new(3));
        assert_eq!((m.rows(), m.cols()), (0, 3));
        let f = Family::from_point_lists(3, [vec![2, 3]]).unwrap();
        assert_eq!(incidence_matrix(&f).to_rows(), vec![vec![0, 1, 1]]);
    }

    #[test]
    fn forbidden_examples() {
        assert_eq!(forbidden_matrix(2).to_rows(), vec![vec![0, 1, 1, 1], vec![1, 0, 1, 1]]);
        assert_eq!(forbidden_matrix(1).to_rows(), vec![vec![0, 1, 1], vec![1, 0, 1]]);
        let z3 = forbidden_matrix(3);
        assert_eq!((z3.rows(), z3.cols()), (2, 5));
        assert_eq!(z3.to_rows()[0].iter().filter(|&&v| v == 1).count(), 4);
    }

    fn check_embedding(host: &BinaryMatrix, pat: &BinaryMatrix, e: &ConfigEmbedding) {
        let mut cols = e.cols.clone();
        cols.sort_unstable();
        cols.dedup();
        assert_eq!(cols.len(), pat.cols(), "column images must be distinct");
        for i in 0..pat.rows() {
            for j in 0..pat.cols() {
                assert_eq!(host.get(e.rows[i], e.cols[j]), pat.get(i, j));
            }
        }
    }

    #[test]
    fn crossing_triples_contain_z() {
        let f = Family::from_point_lists(4, [vec![1, 2, 3], vec![1, 2, 4]]).unwrap();
        let m = incidence_matrix(&f);
        let z = forbidden_matrix(2);
        let e = find_config(&m, &z).expect("configuration present");
        check_embedding(&m, &z, &e);
        let e2 = find_forbidden_in_family(&f, 2).unwrap();
        check_embedding(&m, &z, &e2);
    }

    #[test]
    fn identity_embedding() {
        let z = forbidden_matrix(2);
        assert!(contains_config(&z, &z));
        let z3 = forbidden_matrix(3);
        assert!(!contains_config(&z, &z3));
    }

    #[test]
    fn laminar_family_avoids_z() {
        let f = crate::setfam::tests::fano_family();
        assert!(!contains_config(&incidence_matrix(&f), &forbidden_matrix(2)));
        assert!(find_forbidden_in_family(&f, 2).is_none());
    }

    #[test]
    fn general_pattern_with_three_rows() {
        let host = BinaryMatrix::from_rows(&[[1u8, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]]);
        let pat = BinaryMatrix::from_rows(&[[0u8, 1], [1, 0], [0, 0]]);
        let e = find_config(&host, &pat).unwrap();
        check_embedding(&host, &pat, &e);
        let pat2 = BinaryMatrix::from_rows(&[[1u8, 1], [1, 1]]);
        assert!(!contains_config(&host, &pat2));
    }
}
