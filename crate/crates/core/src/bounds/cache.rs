//! Append-only text cache of `obf` values, one `n<TAB>p/q` line per entry.

use std::fmt::Write as _;
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use super::{rec_bound_check, BoundTable, ScanMode};
use crate::rat::{choose2, Rat};

/// Every this many lines, plus the last, is recomputed on load.
const AUDIT_STRIDE: usize = 100;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
    #[error("cache line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cache line {line} (n={n}) failed audit: {reason}\n- {n}\t{found}\n+ {n}\t{expected}")]
    Corrupt {
        line: usize,
        n: usize,
        found: String,
        expected: String,
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheReport {
    pub entries: usize,
    /// Values of `n` that were recomputed and matched.
    pub audited: Vec<usize>,
}

fn parse_lines(src: &str) -> Result<Vec<Rat>, CacheError> {
    let mut values = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let (n, v) = raw.split_once('\t').ok_or_else(|| CacheError::Parse {
            line,
            msg: "expected n<TAB>p/q".into(),
        })?;
        let n: usize = n.trim().parse().map_err(|_| CacheError::Parse {
            line,
            msg: format!("bad index {n:?}"),
        })?;
        if n != values.len() + 2 {
            return Err(CacheError::Parse {
                line,
                msg: format!("expected n={}, found n={n}", values.len() + 2),
            });
        }
        let v: Rat = v.trim().parse().map_err(|e| CacheError::Parse {
            line,
            msg: format!("bad value: {e}"),
        })?;
        values.push(v);
    }
    Ok(values)
}

fn corrupt(n: usize, found: &Rat, expected: String, reason: &str) -> CacheError {
    CacheError::Corrupt {
        line: n - 1,
        n,
        found: found.to_string(),
        expected,
        reason: reason.into(),
    }
}

/// Reads and audits a cache. `Ok(None)` if the file does not exist.
///
/// The audit checks the two base values, monotonicity and `obf(n) <=
/// 2 C(n,2)` on every line, and recomputes every hundredth line and the last
/// one, which must also pass the ratio recursion check.
pub fn load_cache(path: &Path) -> Result<Option<(BoundTable, CacheReport)>, CacheError> {
    let src = match fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let values = parse_lines(&src)?;
    if values.len() < 2 {
        return Err(CacheError::Parse {
            line: values.len() + 1,
            msg: "cache must hold at least obf(2) and obf(3)".into(),
        });
    }
    for (n, want) in [(2usize, 1i64), (3, 4)] {
        if values[n - 2] != Rat::from_integer(want) {
            return Err(corrupt(n, &values[n - 2], format!("{want}/1"), "base value"));
        }
    }
    for (i, v) in values.iter().enumerate() {
        let n = i + 2;
        if i > 0 && *v < values[i - 1] {
            return Err(corrupt(n, v, format!(">= {}", values[i - 1]), "decreasing"));
        }
        let cap = Rat::from_integer(2 * choose2(n as u64));
        if n > 2 && *v > cap {
            return Err(corrupt(n, v, format!("<= {cap}"), "exceeds 2 C(n,2)"));
        }
    }

    let table = BoundTable::from_values(values).map_err(|e| CacheError::Parse {
        line: 1,
        msg: e.to_string(),
    })?;
    let last = table.max_n();
    let mut audited = Vec::new();
    let mut targets: Vec<usize> = (4..=last).filter(|n| (n - 1) % AUDIT_STRIDE == 0).collect();
    if last >= 4 && targets.last() != Some(&last) {
        targets.push(last);
    }
    for n in targets {
        let found = table.obf(n);
        let (expected, _) = table.compute_at(n, ScanMode::Prefilter);
        if *found != expected {
            return Err(corrupt(n, found, expected.to_string(), "recomputed value differs"));
        }
        if !rec_bound_check(&table, n) {
            return Err(corrupt(n, found, expected.to_string(), "ratio recursion check"));
        }
        audited.push(n);
    }
    let report = CacheReport {
        entries: last - 1,
        audited,
    };
    Ok(Some((table, report)))
}

/// Appends the entries of `table` that the file does not hold yet. Existing
/// lines are never rewritten, so saving the same table twice is a no-op.
/// Returns the number of lines written.
pub fn save_cache(path: &Path, table: &BoundTable) -> Result<usize, CacheError> {
    let existing = match fs::read_to_string(path) {
        Ok(s) => parse_lines(&s)?,
        Err(e) if e.kind() == io::ErrorKind::NotFound => Vec::new(),
        Err(e) => return Err(e.into()),
    };
    for (i, v) in existing.iter().enumerate() {
        let n = i + 2;
        if let Some(mine) = table.get(n) {
            if mine != v {
                return Err(corrupt(n, v, mine.to_string(), "cache disagrees with table"));
            }
        }
    }
    let start = existing.len() + 2;
    let mut out = String::new();
    for n in start..=table.max_n() {
        writeln!(out, "{n}\t{}", table.obf(n)).expect("string write");
    }
    if out.is_empty() {
        return Ok(0);
    }
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    f.write_all(out.as_bytes())?;
    Ok(table.max_n() + 1 - start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::obf_table;

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("obf.tsv");
        assert!(load_cache(&path).unwrap().is_none());

        let t = obf_table(250, ScanMode::Exact).unwrap();
        assert_eq!(save_cache(&path, &t).unwrap(), 249);
        let before = fs::read_to_string(&path).unwrap();
        assert!(before.starts_with("2\t1/1\n3\t4/1\n4\t8/1\n"));
        assert_eq!(save_cache(&path, &t).unwrap(), 0);
        assert_eq!(fs::read_to_string(&path).unwrap(), before);

        let (loaded, report) = load_cache(&path).unwrap().unwrap();
        assert_eq!(loaded.max_n(), 250);
        assert_eq!(report.audited, vec![101, 201, 250]);
        assert_eq!(loaded.frontier(), t.frontier());
    }

    #[test]
    fn extension_appends_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("obf.tsv");
        save_cache(&path, &obf_table(20, ScanMode::Exact).unwrap()).unwrap();
        let short = fs::read_to_string(&path).unwrap();
        save_cache(&path, &obf_table(30, ScanMode::Exact).unwrap()).unwrap();
        let long = fs::read_to_string(&path).unwrap();
        assert!(long.starts_with(&short));
        assert_eq!(long.lines().count(), 29);
    }

    #[test]
    fn corrupt_value_is_reported_with_diff() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("obf.tsv");
        let t = obf_table(120, ScanMode::Exact).unwrap();
        save_cache(&path, &t).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let good = format!("101\t{}", t.obf(101));
        let bad = format!("101\t{}", t.obf(101) + Rat::new(1, 1000000));
        fs::write(&path, text.replace(&good, &bad)).unwrap();
        let err = load_cache(&path).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, CacheError::Corrupt { n: 101, .. }), "{msg}");
        assert!(msg.contains(&format!("- {bad}")), "{msg}");
        assert!(msg.contains(&format!("+ {good}")), "{msg}");
    }

    #[test]
    fn bad_base_and_gaps() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("obf.tsv");
        fs::write(&path, "2\t1/1\n3\t5/1\n").unwrap();
        assert!(matches!(load_cache(&path), Err(CacheError::Corrupt { n: 3, .. })));
        fs::write(&path, "2\t1/1\n4\t8/1\n").unwrap();
        assert!(matches!(load_cache(&path), Err(CacheError::Parse { line: 2, .. })));
        fs::write(&path, "2\t1/1\n3\tfour\n").unwrap();
        assert!(matches!(load_cache(&path), Err(CacheError::Parse { line: 2, .. })));
    }
}
