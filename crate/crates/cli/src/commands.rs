use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use laminar_core::bounds::{
    load_cache, obf_table, projective_series, rec_bound_sweep, save_cache, tail_sum,
    upper_limit, upper_limit_report, BoundTable, ScanMode, DECIMAL_DIGITS,
};
use laminar_core::construct::{
    certify_circle_tower, certify_fano_tower, circle_tower, fano_tower, small_construction_size,
    Certificate, Tower, TowerOptions,
};
use laminar_core::format::{parse_any, write_design_text, write_json, write_text, DesignHeader};
use laminar_core::geometry::{
    affine_plane, circle_geometry, greedy_packing, is_design, is_packing, projective_plane, Design,
};
use laminar_core::rat::{choose2, Rat};
use laminar_core::search::{max_laminar_exact, Convention, SearchOptions};
use laminar_core::setfam::{
    find_config, find_forbidden_in_family, forbidden_matrix, incidence_matrix,
    laminarity_witness, unique_chain_check, Family,
};
use serde_json::json;

use crate::error::CliError;
use crate::ConstructKind;

const PROGRESS_EVERY: usize = 1000;
/// Cache is flushed this often during long runs so they can resume.
const SAVE_EVERY: usize = 5000;
/// Families up to this many members also get the dense matrix search.
const DENSE_VERIFY_LIMIT: usize = 2000;

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn open_cache(path: Option<&Path>) -> Result<Option<BoundTable>, CliError> {
    let Some(path) = path else { return Ok(None) };
    match load_cache(path)? {
        Some((table, report)) => {
            eprintln!(
                "cache {}: {} entries, audited n = {:?}",
                path.display(),
                report.entries,
                report.audited
            );
            Ok(Some(table))
        }
        None => Ok(None),
    }
}

pub fn obf(big_n: usize, cache: Option<PathBuf>, prefilter: bool, json: bool) -> Result<ExitCode, CliError> {
    if big_n < 2 {
        return Err(CliError::Usage(format!("N must be at least 2, got {big_n}")));
    }
    let mode = if prefilter { ScanMode::Prefilter } else { ScanMode::Exact };
    let mut table = match open_cache(cache.as_deref())? {
        Some(t) => t,
        None => obf_table(3, mode).expect("3 is a valid size"),
    };

    let start = Instant::now();
    let mut since_save = 0;
    while table.max_n() < big_n {
        let next = (table.max_n() / PROGRESS_EVERY + 1) * PROGRESS_EVERY;
        let target = next.min(big_n);
        since_save += target - table.max_n();
        table.extend_to(target, mode, |_| {});
        if target.is_multiple_of(PROGRESS_EVERY) {
            eprintln!("obf: n={target}/{big_n} elapsed {:.1}s", start.elapsed().as_secs_f64());
        }
        if since_save >= SAVE_EVERY {
            if let Some(p) = &cache {
                save_cache(p, &table)?;
            }
            since_save = 0;
        }
    }
    if let Some(p) = &cache {
        let written = save_cache(p, &table)?;
        if written > 0 {
            eprintln!("cache {}: appended {written} entries", p.display());
        }
    }

    let report = upper_limit_report(&table, big_n);
    if json {
        print_json(&serde_json::to_value(&report).expect("report serializes"));
    } else {
        println!("N            {}", report.n);
        println!("obf(N)       {}", report.obf_n);
        println!("ratio        {}  ({})", report.ratio_decimal, report.ratio);
        println!("tail         {}", report.tail);
        println!("upper limit  {}  ({})", report.upper_limit_decimal, report.upper_limit);
        println!("critical     {:?}", report.critical);
        println!("frontier log");
        for (n, crit) in &report.frontier_log {
            println!("  {n:>8}  {crit:?}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn default_out(kind: ConstructKind, r: u32, q: Option<u64>) -> PathBuf {
    let name = match kind {
        ConstructKind::FanoTower => format!("fano-tower-r{r}.txt"),
        ConstructKind::CircleTower => format!("circle-tower-r{r}.txt"),
        ConstructKind::Affine => format!("affine-q{}.txt", q.unwrap_or(0)),
        ConstructKind::Projective => format!("projective-q{}.txt", q.unwrap_or(0)),
        ConstructKind::Circle => format!("circle-q{}.txt", q.unwrap_or(0)),
    };
    PathBuf::from(name)
}

fn is_json_path(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "json")
}

/// Writes a family file and reads it back; the result must match.
fn write_checked(
    path: &Path,
    family: &Family,
    t: usize,
    design: Option<&Design>,
) -> Result<(), CliError> {
    let header = design.map(DesignHeader::of);
    let text = if is_json_path(path) {
        write_json(family, Some(t), header.clone()) + "\n"
    } else if let Some(d) = design {
        write_design_text(d)?
    } else {
        write_text(family, Some(t))?
    };
    fs::write(path, &text)?;
    let back = parse_any(&fs::read_to_string(path)?)
        .map_err(|e| CliError::Corrupt(format!("re-reading {}: {e}", path.display())))?;
    if back.family != *family || back.t != Some(t) || back.design != header {
        return Err(CliError::Corrupt(format!(
            "{} does not read back to the value written",
            path.display()
        )));
    }
    Ok(())
}

fn certificate_json(c: &Certificate) -> serde_json::Value {
    match c {
        Certificate::Exhaustive { sets } => json!({"kind": "exhaustive", "sets": sets}),
        Certificate::Structural { design, inner_sets } => {
            json!({"kind": "structural", "design": design, "inner_sets": inner_sets})
        }
    }
}

fn certificate_text(c: &Certificate) -> String {
    match c {
        Certificate::Exhaustive { sets } => format!("all pairs of {sets} sets checked"),
        Certificate::Structural { design, inner_sets } => {
            format!("{design} design validated; inner level of {inner_sets} sets checked pairwise")
        }
    }
}

pub fn construct(
    kind: ConstructKind,
    r: u32,
    q: Option<u64>,
    out: Option<PathBuf>,
    materialize: bool,
    counts_only: bool,
    json: bool,
) -> Result<ExitCode, CliError> {
    match kind {
        ConstructKind::FanoTower | ConstructKind::CircleTower => {
            let opts = TowerOptions {
                materialize: !counts_only,
                allow_large: materialize,
            };
            let (tower, t): (Tower, usize) = if kind == ConstructKind::FanoTower {
                (fano_tower(r, &opts)?, 2)
            } else {
                (circle_tower(r, &opts)?, 3)
            };
            let mut out_json = json!({"report": tower.report.to_json()});
            let mut lines = vec![
                format!("t            {}", tower.report.t),
                format!("r            {}", tower.report.r),
                format!("n            {}", tower.report.n),
                format!("count >= t   {}", tower.report.count_geq_t),
                format!("lower layers {}", tower.report.lower_layers),
                format!("formula      {}", tower.report.formula_value),
                format!("ratio        {}  ({})", tower.report.ratio.to_decimal(DECIMAL_DIGITS), tower.report.ratio),
            ];
            if let Some(family) = &tower.family {
                let cert = if kind == ConstructKind::FanoTower {
                    certify_fano_tower(r)?
                } else {
                    certify_circle_tower(r)?
                };
                let path = out.unwrap_or_else(|| default_out(kind, r, q));
                write_checked(&path, family, t, None)?;
                lines.push(format!("certified    {}", certificate_text(&cert)));
                lines.push(format!("written      {} ({} sets)", path.display(), family.len()));
                out_json["certificate"] = certificate_json(&cert);
                out_json["file"] = json!(path.display().to_string());
                out_json["sets"] = json!(family.len());
            }
            if json {
                print_json(&out_json);
            } else {
                for l in lines {
                    println!("{l}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        ConstructKind::Affine | ConstructKind::Projective | ConstructKind::Circle => {
            let q = q.ok_or_else(|| CliError::Usage("--q is required for this construction".into()))?;
            let d = match kind {
                ConstructKind::Affine => affine_plane(q)?,
                ConstructKind::Projective => projective_plane(q)?,
                _ => circle_geometry(q)?,
            };
            if !is_design(&d) {
                return Err(CliError::Corrupt(format!("constructed blocks are not a {}-design", d.t)));
            }
            let path = out.unwrap_or_else(|| default_out(kind, 0, Some(q)));
            write_checked(&path, &d.blocks, d.t, Some(&d))?;
            let k = d.uniform_block_size().unwrap_or(0);
            if json {
                print_json(&json!({
                    "t": d.t, "v": d.v, "k": k, "lambda": d.lambda,
                    "blocks": d.block_count(), "valid": true,
                    "file": path.display().to_string(),
                }));
            } else {
                println!("{}-({},{},{}) design with {} blocks, validated", d.t, d.v, k, d.lambda, d.block_count());
                println!("written {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

pub fn verify(file: &Path, t: Option<usize>, json: bool) -> Result<ExitCode, CliError> {
    let src = fs::read_to_string(file)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))?;
    let parsed = parse_any(&src)?;
    let t = t
        .or(parsed.t)
        .ok_or_else(|| CliError::Usage("no t given and the file header has none".into()))?;
    if t == 0 {
        return Err(CliError::Usage("t must be at least 1".into()));
    }
    let family = &parsed.family;

    let witness = laminarity_witness(family, t);
    let embedding = if family.len() <= DENSE_VERIFY_LIMIT {
        find_config(&incidence_matrix(family), &forbidden_matrix(t))
    } else {
        find_forbidden_in_family(family, t)
    };
    let chain = unique_chain_check(family, t);
    let pairwise = witness.is_none();
    let matrix = embedding.is_none();
    if pairwise != matrix || pairwise != chain {
        return Err(CliError::Corrupt(format!(
            "checks disagree: pairwise={pairwise} forbidden-matrix={matrix} chain={chain}"
        )));
    }

    // report the configuration found for the witness pair itself
    let pair_embedding = witness.and_then(|(a, b)| {
        let sub = Family::from_blocks(family.ground(), vec![a.clone(), b.clone()]).ok()?;
        let e = find_forbidden_in_family(&sub, t)?;
        let idx = |blk| family.iter().position(|x| x == blk).expect("member");
        let rows: Vec<usize> = e.rows.iter().map(|&r| idx(&sub.sets()[r]) + 1).collect();
        let cols: Vec<usize> = e.cols.iter().map(|c| c + 1).collect();
        Some((rows, cols))
    });

    if json {
        let mut v = json!({
            "n": family.ground(), "t": t, "sets": family.len(),
            "laminar": pairwise,
            "checks": {"pairwise": pairwise, "forbidden_matrix": matrix, "unique_chain": chain},
        });
        if let (Some((a, b)), Some((rows, cols))) = (witness, &pair_embedding) {
            v["witness"] = json!({
                "sets": [a.to_vec(), b.to_vec()],
                "rows": rows, "columns": cols,
            });
        }
        print_json(&v);
    } else {
        println!("n={} t={t} sets={}", family.ground(), family.len());
        println!("pairwise        {}", if pairwise { "ok" } else { "fails" });
        println!("forbidden matrix {}", if matrix { "absent" } else { "present" });
        println!("unique chain    {}", if chain { "ok" } else { "fails" });
        if let (Some((a, b)), Some((rows, cols))) = (witness, &pair_embedding) {
            println!("witness {a} {b}");
            println!("submatrix rows {rows:?} columns {cols:?}");
        }
    }
    Ok(if pairwise { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

pub fn search(
    n: usize,
    t: usize,
    budget: u64,
    all_sizes: bool,
    gap: bool,
    json: bool,
) -> Result<ExitCode, CliError> {
    let opts = SearchOptions {
        budget: Duration::from_secs(budget),
        convention: if all_sizes { Convention::AtLeastT } else { Convention::AtLeastTwo },
        seed_with_construction: true,
    };
    let start = Instant::now();
    let res = max_laminar_exact(n, t, &opts)?;
    let elapsed = start.elapsed().as_secs_f64();
    let mut gap_ok = true;
    let mut gap_json = serde_json::Value::Null;
    let mut gap_line = None;
    if gap && t == 2 {
        let table = obf_table(n.max(3), ScanMode::Exact).expect("n >= 3");
        let construction = small_construction_size(n).0;
        let obf = table.get(n).cloned();
        gap_ok = construction <= res.size as u64
            && obf.as_ref().is_none_or(|o| Rat::from_integer(res.size as u64) <= *o);
        gap_json = json!({
            "construction": construction,
            "search": res.size,
            "obf": obf.as_ref().map(|o| o.to_string()),
            "holds": gap_ok,
        });
        gap_line = Some(format!(
            "gap          {construction} <= {} <= {}  {}",
            res.size,
            obf.map_or("-".into(), |o| o.to_string()),
            if gap_ok { "holds" } else { "FAILS" }
        ));
    }
    let witness = write_text(&res.family, Some(t))?;
    if json {
        print_json(&json!({
            "n": n, "t": t, "size": res.size, "exact": res.exact,
            "nodes": res.nodes, "seconds": elapsed,
            "gap": gap_json,
            "witness": res.family.point_lists(),
        }));
    } else {
        let marker = if res.exact { "exact" } else { "lower bound (budget exhausted)" };
        println!("n={n} t={t} size={} {marker}", res.size);
        println!("nodes {} in {elapsed:.2}s", res.nodes);
        if let Some(l) = gap_line {
            println!("{l}");
        }
        print!("{witness}");
    }
    if !gap_ok {
        return Ok(ExitCode::from(1));
    }
    Ok(if res.exact { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

/// Largest Fano tower level whose ground set fits in `n` points, at least 0.
fn tower_level_within(n: usize) -> u32 {
    let mut r = 0;
    while 7usize.checked_pow(1 << (r + 1)).is_some_and(|m| m <= n) {
        r += 1;
    }
    r
}

pub fn summary(cache: Option<PathBuf>, json: bool) -> Result<ExitCode, CliError> {
    let table = open_cache(cache.as_deref())?;
    let r = match &table {
        Some(t) => tower_level_within(t.max_n()),
        None => 2,
    };
    let tower = fano_tower(r, &TowerOptions::counts_only())?;
    let lower = tower.report.ratio.clone();
    let series = projective_series(4);

    let mut v = json!({
        "construction": {"r": r, "n": tower.report.n.to_string(), "ratio": lower.to_string(),
                          "ratio_decimal": lower.to_decimal(DECIMAL_DIGITS)},
        "projective_series": {"terms": 4, "value": series.to_string(),
                              "decimal": series.to_decimal(DECIMAL_DIGITS)},
    });
    let mut lines = vec![
        format!(
            "lower  {}  Fano tower r={r} (n={})",
            lower.to_decimal(DECIMAL_DIGITS),
            tower.report.n
        ),
        format!("series {}  projective indices 3, 7, 43, 1807", series.to_decimal(DECIMAL_DIGITS)),
    ];
    let mut audit_ok = true;
    if let Some(t) = &table {
        let n = t.max_n();
        let up = upper_limit(t, n);
        let ratio = t.obf(n) / Rat::from_integer(choose2(n as u64));
        let sweep = rec_bound_sweep(t);
        let cap_ok = t
            .values()
            .skip(1)
            .all(|(k, v)| *v <= Rat::from_integer(2 * choose2(k as u64)));
        audit_ok = sweep.is_ok() && cap_ok;
        v["obf"] = json!({
            "N": n, "ratio_decimal": ratio.to_decimal(DECIMAL_DIGITS),
            "tail": tail_sum(n).to_string(),
            "upper_limit": up.to_string(),
            "upper_limit_decimal": up.to_decimal(DECIMAL_DIGITS),
            "audit": {"rec_bound": sweep.is_ok(), "two_binomial_cap": cap_ok},
        });
        v["bracket"] = json!([lower.to_decimal(DECIMAL_DIGITS), up.to_decimal(DECIMAL_DIGITS)]);
        lines.push(format!("obf    {}  obf(N)/C(N,2) at N={n}", ratio.to_decimal(DECIMAL_DIGITS)));
        lines.push(format!("tail   {}", tail_sum(n)));
        lines.push(format!("upper  {}", up.to_decimal(DECIMAL_DIGITS)));
        lines.push(format!(
            "audit  recursion check {}, obf(n) <= 2 C(n,2) {}",
            if sweep.is_ok() { "ok" } else { "FAILS" },
            if cap_ok { "ok" } else { "FAILS" }
        ));
        lines.push(format!(
            "bracket [{}, {}]",
            lower.to_decimal(8),
            up.to_decimal(8)
        ));
    } else {
        lines.push("no obf cache; construction side only".into());
    }
    if json {
        print_json(&v);
    } else {
        for l in lines {
            println!("{l}");
        }
    }
    Ok(if audit_ok { ExitCode::SUCCESS } else { ExitCode::from(4) })
}

pub fn packing(
    n: usize,
    k: usize,
    t: usize,
    seed: u64,
    out: Option<PathBuf>,
    json: bool,
) -> Result<ExitCode, CliError> {
    let d = greedy_packing(n, k, t, seed)?;
    if !is_packing(&d) {
        return Err(CliError::Corrupt("greedy result is not a packing".into()));
    }
    let path = out.unwrap_or_else(|| PathBuf::from(format!("packing-{t}-{n}-{k}.txt")));
    write_checked(&path, &d.blocks, t, Some(&d))?;
    if json {
        print_json(&json!({"n": n, "k": k, "t": t, "seed": seed, "blocks": d.block_count(),
                           "file": path.display().to_string()}));
    } else {
        println!("{t}-({n},{k},1) packing with {} blocks (seed {seed})", d.block_count());
        println!("written {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}
