use std::path::Path;
use std::time::Instant;

use serde_json::json;

use permbound::bounds::baseline::{hadamard, krauter, opnorm, singular, Applicability, NormKind};
use permbound::bounds::report::{csv_field, BoundReport, BoundRow};
use permbound::bounds::unit_circle::{unit_circle_avg_bound, unit_circle_pair_bound, unit_circle_theta_bound};
use permbound::bounds::{permanent_bound_composition, permanent_bound_partition};
use permbound::charfn::{avg_bound_charfn, exact_charfn, monte_carlo_charfn, pair_bound_charfn, EXACT_LIMIT};
use permbound::combinatorics::{factorial, Composition, IndexSet, OrderedPartition};
use permbound::exact::{hafnian, hyperhafnian, multidim_permanent, permanent, ComplexMatrix, C64};
use permbound::io::{parse_composition, parse_model, parse_partition, parse_permutation, MatrixFile};
use permbound::suites::{run_suite, Suite};
use permbound::table1;
use permbound::{Error, Result};

use crate::{Format, Kind, P};

pub const PER_LIMIT: usize = 24;
pub const HAF_LIMIT: usize = 20;
pub const PER_ELL_LIMIT: usize = 6;
pub const HAF_ELL_LIMIT: usize = 18;

/// A real number or a multiple of pi: `1.5`, `pi`, `-pi/4`, `3pi/4`, `2*pi`.
pub fn parse_real(text: &str) -> std::result::Result<f64, String> {
    let s = text.trim().to_ascii_lowercase();
    let Some(at) = s.find("pi") else {
        return s.parse().map_err(|_| format!("\"{text}\" is not a number"));
    };
    let (head, tail) = (s[..at].trim_end_matches('*').trim(), s[at + 2..].trim());
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse().map_err(|_| format!("bad coefficient in \"{text}\""))?,
    };
    let div = match tail.strip_prefix('/') {
        None if tail.is_empty() => 1.0,
        None => return Err(format!("unexpected \"{tail}\" in \"{text}\"")),
        Some(d) => d.trim().parse().map_err(|_| format!("bad divisor in \"{text}\""))?,
    };
    Ok(coef * std::f64::consts::PI / div)
}

pub fn parse_real_list(text: &str) -> std::result::Result<Vec<f64>, String> {
    text.split(',').map(parse_real).collect()
}

fn load(input: &Path, t: Option<f64>) -> Result<MatrixFile> {
    let file = MatrixFile::load(input)?;
    Ok(match (file, t) {
        (MatrixFile::UnitCircle(u), Some(t)) => MatrixFile::UnitCircle(u.at(t)),
        (_, Some(_)) => return Err(Error::domain("--t needs unit-circle input")),
        (f, None) => f,
    })
}

fn emit(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json values serialize"));
}

fn feasible(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        return Err(Error::Feasibility { what, size, limit });
    }
    Ok(())
}

pub fn exact(input: &Path, kind: Kind, t: Option<f64>, format: Format) -> Result<bool> {
    let file = load(input, t)?;
    let start = Instant::now();
    let (name, value) = match kind {
        Kind::Per => {
            let z = file.matrix()?;
            feasible("permanent", z.rows(), PER_LIMIT)?;
            ("per", permanent(&z)?)
        }
        Kind::Haf => {
            let z = file.matrix()?;
            feasible("hafnian", z.rows(), HAF_LIMIT)?;
            ("haf", hafnian(&z)?)
        }
        Kind::PerEll => {
            let z = file.tensor()?;
            feasible("multidimensional permanent", z.dims().first().copied().unwrap_or(0), PER_ELL_LIMIT)?;
            ("per_ell", multidim_permanent(&z)?)
        }
        Kind::HafEll => {
            let z = file.tensor()?;
            feasible("hyperhafnian", z.dims().first().copied().unwrap_or(0), HAF_ELL_LIMIT)?;
            ("haf_ell", hyperhafnian(&z, z.order())?)
        }
    };
    let seconds = start.elapsed().as_secs_f64();
    match format {
        Format::Json => emit(&json!({
            "kind": name,
            "value": {"re": value.re, "im": value.im},
            "abs": value.norm(),
            "seconds": seconds,
        })),
        Format::Csv => {
            println!("kind,re,im,abs,seconds");
            println!("{name},{:.17e},{:.17e},{:.17e},{seconds:.6}", value.re, value.im, value.norm());
        }
    }
    Ok(true)
}

pub struct BoundsRequest {
    pub t: Option<f64>,
    pub partitions: Vec<String>,
    pub compositions: Vec<String>,
    pub p: Option<P>,
    pub s_perm: Option<String>,
    pub all_baselines: bool,
    pub unit_circle_bounds: bool,
}

/// `"1,2|3,4|..."` with blocks of `size` consecutive columns.
fn consecutive_blocks(n: usize, size: usize) -> String {
    (0..n)
        .collect::<Vec<_>>()
        .chunks(size)
        .map(|c| c.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("|")
}

fn parts_of(n: usize, size: usize) -> String {
    let mut parts = vec![size.to_string(); n / size];
    if !n.is_multiple_of(size) {
        parts.push((n % size).to_string());
    }
    parts.join(",")
}

fn norm_row(z: &ComplexMatrix, p: P, nf: f64, exact: Option<f64>) -> Result<BoundRow> {
    let (kind, label) = match p {
        P::One => (NormKind::One, "p=1"),
        P::Two => (NormKind::Two, "p=2"),
        P::Inf => (NormKind::Infinity, "p=inf"),
    };
    Ok(BoundRow::value("opnorm", label, opnorm(z, kind)? / nf, exact))
}

fn hadamard_row(file: &MatrixFile, z: &ComplexMatrix, nf: f64, exact: Option<f64>) -> Result<BoundRow> {
    let v = match file.polar() {
        Some(p) => p.hadamard_over_factorial()?,
        None => hadamard(z)? / nf,
    };
    Ok(BoundRow::value("hadamard", "", v, exact))
}

fn krauter_row(z: &ComplexMatrix, nf: f64, exact: Option<f64>) -> Result<BoundRow> {
    let v = match krauter(z)? {
        Applicability::Value(v) => Applicability::Value(v / nf),
        na => na,
    };
    Ok(BoundRow::new("krauter", "", v, exact))
}

fn partition_row(z: &ComplexMatrix, spec: &str, nf: f64, exact: Option<f64>) -> Result<BoundRow> {
    let w = parse_partition(spec, z.cols())?;
    Ok(BoundRow::value("partition", spec, permanent_bound_partition(z, &w)? / nf, exact))
}

fn composition_row(z: &ComplexMatrix, spec: &str, nf: f64, exact: Option<f64>) -> Result<BoundRow> {
    let w: Composition = parse_composition(spec)?;
    Ok(BoundRow::value("composition", spec, permanent_bound_composition(z, &w)? / nf, exact))
}

/// Pairs `(s(1), s(2)), (s(3), s(4)), ...`, with a trailing singleton for odd `n`.
fn pair_partition(s: &[usize]) -> Result<OrderedPartition> {
    let blocks = s
        .chunks(2)
        .map(|c| IndexSet::new(c.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    OrderedPartition::new(blocks, IndexSet::range(s.len()))
}

pub fn bounds(input: &Path, req: &BoundsRequest, format: Format) -> Result<bool> {
    let file = load(input, req.t)?;
    let z = file.matrix()?;
    if !z.is_square() || z.rows() == 0 {
        return Err(Error::domain(format!("bounds need a non-empty square matrix, got {}x{}", z.rows(), z.cols())));
    }
    let n = z.rows();
    let nf = factorial(n);
    let exact = if n <= PER_LIMIT { Some(permanent(&z)?.norm() / nf) } else { None };
    let explicit = !req.partitions.is_empty() || !req.compositions.is_empty() || req.p.is_some() || req.s_perm.is_some();
    let mut rows = Vec::new();
    if !explicit {
        for p in [P::One, P::Inf, P::Two] {
            rows.push(norm_row(&z, p, nf, exact)?);
        }
        rows.push(BoundRow::value("singular", "", singular(&z)? / nf, exact));
        rows.push(hadamard_row(&file, &z, nf, exact)?);
        rows.push(partition_row(&z, &consecutive_blocks(n, 2), nf, exact)?);
        rows.push(composition_row(&z, &parts_of(n, 2), nf, exact)?);
        rows.push(krauter_row(&z, nf, exact)?);
        rows.push(partition_row(&z, &consecutive_blocks(n, 3), nf, exact)?);
        rows.push(composition_row(&z, &parts_of(n, 3), nf, exact)?);
    } else {
        if req.all_baselines {
            for p in [P::One, P::Inf, P::Two] {
                rows.push(norm_row(&z, p, nf, exact)?);
            }
            rows.push(BoundRow::value("singular", "", singular(&z)? / nf, exact));
            rows.push(hadamard_row(&file, &z, nf, exact)?);
            rows.push(krauter_row(&z, nf, exact)?);
        } else if let Some(p) = req.p {
            rows.push(norm_row(&z, p, nf, exact)?);
        }
        for spec in &req.partitions {
            rows.push(partition_row(&z, spec, nf, exact)?);
        }
        for spec in &req.compositions {
            rows.push(composition_row(&z, spec, nf, exact)?);
        }
    }
    let s = match &req.s_perm {
        Some(spec) => parse_permutation(spec, n)?,
        None => (0..n).collect(),
    };
    if req.s_perm.is_some() && !req.unit_circle_bounds {
        let w = pair_partition(&s)?;
        rows.push(BoundRow::value(
            "pairs",
            req.s_perm.clone().unwrap_or_default(),
            permanent_bound_partition(&z, &w)? / nf,
            exact,
        ));
    }
    if req.unit_circle_bounds {
        let MatrixFile::UnitCircle(spec) = &file else {
            return Err(Error::domain("--unit-circle-bounds needs unit-circle input"));
        };
        let label = req.s_perm.clone().unwrap_or_default();
        rows.push(BoundRow::value("unit_circle_pair", label, unit_circle_pair_bound(spec, &s)?, exact));
        rows.push(BoundRow::value("unit_circle_avg", "", unit_circle_avg_bound(spec)?, exact));
        rows.push(BoundRow::value("unit_circle_theta", "", unit_circle_theta_bound(spec)?, exact));
    }
    let t = match &file {
        MatrixFile::UnitCircle(u) => Some(u.t),
        _ => None,
    };
    let report = BoundReport { n, t, exact, rows };
    match format {
        Format::Json => emit(&serde_json::to_value(&report)?),
        Format::Csv => print!("{}", report.to_csv()),
    }
    Ok(true)
}

pub fn table1(format: Format) -> Result<bool> {
    let out = table1::reproduce()?;
    match format {
        Format::Json => emit(&serde_json::to_value(&out)?),
        Format::Csv => {
            println!("row,t,printed,computed,raw_value,pass");
            for c in &out.cells {
                println!(
                    "{},{},{},{},{},{}",
                    csv_field(&c.row),
                    c.t,
                    c.printed,
                    c.computed,
                    c.raw.map_or_else(String::new, |x| format!("{x:.17e}")),
                    c.pass
                );
            }
        }
    }
    let failed = out.cells.iter().filter(|c| !c.pass).count();
    eprintln!(
        "{}: {} of {} cells match",
        if out.pass { "PASS" } else { "FAIL" },
        out.cells.len() - failed,
        out.cells.len()
    );
    Ok(out.pass)
}

pub fn verify(suite: Suite, seed: u64, trials: usize) -> Result<bool> {
    let report = run_suite(suite, seed, trials);
    emit(&serde_json::to_value(&report)?);
    eprintln!(
        "{}: suite {suite}, seed {seed}, {trials} trials, {} checks, {} failed",
        if report.pass { "PASS" } else { "FAIL" },
        report.checks,
        report.failed
    );
    Ok(report.pass)
}

pub fn charfn(input: &Path, ts: &[f64], mc: usize, seed: u64, s_perm: Option<&str>, format: Format) -> Result<bool> {
    let model = parse_model(&std::fs::read_to_string(input)?)?;
    let n = model.n();
    let s = match s_perm {
        Some(spec) => parse_permutation(spec, n)?,
        None => (0..n).collect(),
    };
    let mut rows = Vec::new();
    for &t in ts {
        let exact: Option<C64> = if n <= EXACT_LIMIT { Some(exact_charfn(&model, t)?) } else { None };
        let (pair, avg) = if n >= 2 {
            (Some(pair_bound_charfn(&model, t, &s)?), Some(avg_bound_charfn(&model, t)?))
        } else {
            (None, None)
        };
        let est = if mc > 0 { Some(monte_carlo_charfn(&model, t, mc, seed)?) } else { None };
        rows.push(json!({
            "t": t,
            "exact": exact.map(|e| json!({"re": e.re, "im": e.im})),
            "exact_abs": exact.map(|e| e.norm()),
            "pair_bound": pair,
            "avg_bound": avg,
            "monte_carlo": est,
        }));
    }
    match format {
        Format::Json => emit(&json!({"n": n, "seed": seed, "s": s.iter().map(|x| x + 1).collect::<Vec<_>>(), "rows": rows})),
        Format::Csv => {
            println!("t,exact_abs,pair_bound,avg_bound,mc_re,mc_im,stderr_re,stderr_im");
            let f = |v: &serde_json::Value| v.as_f64().map_or_else(String::new, |x| format!("{x:.17e}"));
            for r in &rows {
                let m = &r["monte_carlo"];
                println!(
                    "{},{},{},{},{},{},{},{}",
                    f(&r["t"]),
                    f(&r["exact_abs"]),
                    f(&r["pair_bound"]),
                    f(&r["avg_bound"]),
                    f(&m["mean"][0]),
                    f(&m["mean"][1]),
                    f(&m["stderr_re"]),
                    f(&m["stderr_im"]),
                );
            }
        }
    }
    Ok(true)
}
