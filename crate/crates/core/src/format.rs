//! Family files.
//!
//! Text form: an optional run of `#` comment lines, then a header
//! `n=<int>` optionally followed by ` t=<int>`, then one block per line as a
//! strictly increasing, space-separated list of points. Blank lines are
//! ignored, so the empty block has no text form.
//!
//! JSON form: `{"n": 7, "t": 2, "sets": [[1,2], ...]}` with `t` optional.
//!
//! Designs use the same layout preceded by a comment line
//! `# design t=<t> v=<v> lambda=<l> kind=<design|packing>`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Design, DesignKind};
use crate::setfam::{Block, Family, FamilyError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Family {
        line: usize,
        #[source]
        source: FamilyError,
    },
    #[error("missing `n=<int>` header")]
    MissingHeader,
    #[error("the empty block cannot be written in text form")]
    EmptyBlock,
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(#[from] FamilyError),
}

/// A parsed family file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyFile {
    pub family: Family,
    pub t: Option<usize>,
    /// Present when the file carried a `# design ...` header.
    pub design: Option<DesignHeader>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignHeader {
    pub t: usize,
    pub v: usize,
    pub lambda: usize,
    pub kind: DesignKind,
}

impl DesignHeader {
    pub fn of(d: &Design) -> Self {
        DesignHeader {
            t: d.t,
            v: d.v,
            lambda: d.lambda,
            kind: d.kind,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonFamily {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    design: Option<DesignHeader>,
    sets: Vec<Vec<usize>>,
}

pub fn write_text(family: &Family, t: Option<usize>) -> Result<String, FormatError> {
    write_text_with_comment(family, t, None)
}

pub fn write_design_text(design: &Design) -> Result<String, FormatError> {
    let h = DesignHeader::of(design);
    let comment = format!(
        "design t={} v={} lambda={} kind={}",
        h.t,
        h.v,
        h.lambda,
        h.kind.as_str()
    );
    write_text_with_comment(&design.blocks, Some(design.t), Some(&comment))
}

fn write_text_with_comment(
    family: &Family,
    t: Option<usize>,
    comment: Option<&str>,
) -> Result<String, FormatError> {
    let mut out = String::new();
    if let Some(c) = comment {
        writeln!(out, "# {c}").unwrap();
    }
    match t {
        Some(t) => writeln!(out, "n={} t={}", family.ground(), t).unwrap(),
        None => writeln!(out, "n={}", family.ground()).unwrap(),
    }
    for b in family {
        if b.is_empty() {
            return Err(FormatError::EmptyBlock);
        }
        let line: Vec<String> = b.points().map(|p| p.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_text(src: &str) -> Result<FamilyFile, FormatError> {
    let mut header: Option<(usize, Option<usize>)> = None;
    let mut design = None;
    let mut sets = Vec::new();

    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if header.is_none() {
                if let Some(h) = parse_design_comment(comment.trim(), line_no)? {
                    design = Some(h);
                }
            }
            continue;
        }
        let Some((n, _)) = header else {
            header = Some(parse_header(line, line_no)?);
            continue;
        };
        let mut pts = Vec::new();
        for tok in line.split_whitespace() {
            let p: usize = tok.parse().map_err(|_| FormatError::Syntax {
                line: line_no,
                msg: format!("`{tok}` is not a point index"),
            })?;
            if let Some(&last) = pts.last() {
                if p <= last {
                    return Err(FormatError::Syntax {
                        line: line_no,
                        msg: "points must be strictly increasing".into(),
                    });
                }
            }
            pts.push(p);
        }
        let b = Block::from_points(n, pts).map_err(|source| FormatError::Family {
            line: line_no,
            source,
        })?;
        sets.push((line_no, b));
    }

    let (n, t) = header.ok_or(FormatError::MissingHeader)?;
    let mut seen = std::collections::HashSet::new();
    for (line, b) in &sets {
        if !seen.insert(b) {
            return Err(FormatError::Family {
                line: *line,
                source: FamilyError::Duplicate(b.to_string()),
            });
        }
    }
    let family = Family::from_blocks(n, sets.into_iter().map(|(_, b)| b).collect())?;
    Ok(FamilyFile { family, t, design })
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, Option<usize>), FormatError> {
    let syntax = |msg: String| FormatError::Syntax { line: line_no, msg };
    let mut n = None;
    let mut t = None;
    for tok in line.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| syntax(format!("expected `key=value`, found `{tok}`")))?;
        let val: usize = val
            .parse()
            .map_err(|_| syntax(format!("`{val}` is not a non-negative integer")))?;
        match key {
            "n" => n = Some(val),
            "t" => t = Some(val),
            other => return Err(syntax(format!("unknown header key `{other}`"))),
        }
    }
    let n = n.ok_or(FormatError::MissingHeader)?;
    Ok((n, t))
}

fn parse_design_comment(comment: &str, line_no: usize) -> Result<Option<DesignHeader>, FormatError> {
    let Some(rest) = comment.strip_prefix("design") else {
        return Ok(None);
    };
    let syntax = |msg: String| FormatError::Syntax { line: line_no, msg };
    let (mut t, mut v, mut lambda, mut kind) = (None, None, None, None);
    for tok in rest.split_whitespace() {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| syntax(format!("expected `key=value`, found `{tok}`")))?;
        let num = || {
            val.parse::<usize>()
                .map_err(|_| syntax(format!("`{val}` is not a non-negative integer")))
        };
        match key {
            "t" => t = Some(num()?),
            "v" => v = Some(num()?),
            "lambda" => lambda = Some(num()?),
            "kind" => {
                kind = Some(
                    DesignKind::parse(val).ok_or_else(|| syntax(format!("unknown kind `{val}`")))?,
                )
            }
            other => return Err(syntax(format!("unknown design key `{other}`"))),
        }
    }
    match (t, v, lambda, kind) {
        (Some(t), Some(v), Some(lambda), Some(kind)) => Ok(Some(DesignHeader { t, v, lambda, kind })),
        _ => Err(syntax("design header needs t, v, lambda and kind".into())),
    }
}

pub fn write_json(family: &Family, t: Option<usize>, design: Option<DesignHeader>) -> String {
    let jf = JsonFamily {
        n: family.ground(),
        t,
        design,
        sets: family.point_lists(),
    };
    serde_json::to_string(&jf).expect("family serialises")
}

pub fn parse_json(src: &str) -> Result<FamilyFile, FormatError> {
    let jf: JsonFamily = serde_json::from_str(src)?;
    let family = Family::from_point_lists(jf.n, &jf.sets)?;
    Ok(FamilyFile {
        family,
        t: jf.t,
        design: jf.design,
    })
}

/// Dispatches on the first non-blank character: `{` means JSON.
pub fn parse_any(src: &str) -> Result<FamilyFile, FormatError> {
    if src.trim_start().starts_with('{') {
        parse_json(src)
    } else {
        parse_text(src)
    }
}
