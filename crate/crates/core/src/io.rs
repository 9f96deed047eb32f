//! File formats and command-line syntaxes: matrix files, characteristic
//! function models, and 1-based partition, composition and permutation specs.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::bounds::unit_circle::{PolarMatrix, UnitCircleSpec};
use crate::charfn::{CharFnMatrix, DiagonalSumModel, Distribution, Independence};
use crate::combinatorics::{Composition, IndexSet, OrderedPartition};
use crate::error::{Error, Result};
use crate::exact::{ComplexMatrix, ComplexTensor, C64};

/// A matrix or tensor input in one of four JSON layouts:
///
/// - `{"rows": n, "cols": m, "entries": [[{"re": .., "im": ..}, ..], ..]}`
///   (a bare number is accepted for a real entry),
/// - `{"unit_circle": {"x": [[..]], "t": t}}` for `z_jr = exp(i t x_jr)`,
/// - `{"polar": {"a": [[..]], "x": [[..]]}}` for `z_jr = a_jr exp(i x_jr)`,
/// - `{"tensor": {"dims": [..], "entries": [..]}}` with entries in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixFile {
    Entries(ComplexMatrix),
    UnitCircle(UnitCircleSpec),
    Polar(PolarMatrix),
    Tensor(ComplexTensor),
}

fn cell(v: &Value, at: &str) -> Result<C64> {
    match v {
        Value::Number(x) => Ok(C64::new(x.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Object(o) => {
            let part = |k: &str| -> Result<f64> {
                match o.get(k) {
                    None => Ok(0.0),
                    Some(x) => x.as_f64().ok_or_else(|| Error::parse(at, format!("\"{k}\" is not a number"))),
                }
            };
            if let Some(k) = o.keys().find(|k| *k != "re" && *k != "im") {
                return Err(Error::parse(at, format!("unknown field \"{k}\"")));
            }
            Ok(C64::new(part("re")?, part("im")?))
        }
        _ => Err(Error::parse(at, "expected a number or {\"re\", \"im\"}")),
    }
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(at, "expected an array"))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value> {
    o.get(key).ok_or_else(|| Error::parse(at, format!("missing \"{key}\"")))
}

fn usize_field(o: &Map<String, Value>, key: &str, at: &str) -> Result<usize> {
    field(o, key, at)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::parse(format!("{at}.{key}"), "expected a non-negative integer"))
}

fn real_grid(v: &Value, at: &str) -> Result<Vec<Vec<f64>>> {
    array(v, at)?
        .iter()
        .enumerate()
        .map(|(j, row)| {
            array(row, &format!("{at}[{j}]"))?
                .iter()
                .enumerate()
                .map(|(r, x)| {
                    x.as_f64()
                        .ok_or_else(|| Error::parse(format!("{at}[{j}][{r}]"), "expected a number"))
                })
                .collect()
        })
        .collect()
}

fn complex_json(z: C64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string()))
}

impl MatrixFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_value(&parse_value(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let o = v.as_object().ok_or_else(|| Error::parse("$", "expected a JSON object"))?;
        let shape = |e: Error| match e {
            Error::Domain(m) => Error::parse("$", m),
            e => e,
        };
        if let Some(u) = o.get("unit_circle") {
            let u = u.as_object().ok_or_else(|| Error::parse("unit_circle", "expected an object"))?;
            let x = real_grid(field(u, "x", "unit_circle")?, "unit_circle.x")?;
            let t = field(u, "t", "unit_circle")?
                .as_f64()
                .ok_or_else(|| Error::parse("unit_circle.t", "expected a number"))?;
            return UnitCircleSpec::new(x, t).map(MatrixFile::UnitCircle).map_err(shape);
        }
        if let Some(p) = o.get("polar") {
            let p = p.as_object().ok_or_else(|| Error::parse("polar", "expected an object"))?;
            let a = real_grid(field(p, "a", "polar")?, "polar.a")?;
            let x = real_grid(field(p, "x", "polar")?, "polar.x")?;
            return PolarMatrix::new(a, x).map(MatrixFile::Polar).map_err(shape);
        }
        if let Some(t) = o.get("tensor") {
            let t = t.as_object().ok_or_else(|| Error::parse("tensor", "expected an object"))?;
            let dims = array(field(t, "dims", "tensor")?, "tensor.dims")?
                .iter()
                .enumerate()
                .map(|(i, d)| {
                    d.as_u64()
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::parse(format!("tensor.dims[{i}]"), "expected a non-negative integer"))
                })
                .collect::<Result<Vec<_>>>()?;
            let data = array(field(t, "entries", "tensor")?, "tensor.entries")?
                .iter()
                .enumerate()
                .map(|(i, c)| cell(c, &format!("tensor.entries[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            return ComplexTensor::new(dims, data).map(MatrixFile::Tensor).map_err(shape);
        }
        let rows = usize_field(o, "rows", "$")?;
        let cols = usize_field(o, "cols", "$")?;
        let grid = array(field(o, "entries", "$")?, "entries")?;
        if grid.len() != rows {
            return Err(Error::parse("entries", format!("expected {rows} rows, got {}", grid.len())));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for (j, row) in grid.iter().enumerate() {
            let row = array(row, &format!("entries[{j}]"))?;
            if row.len() != cols {
                return Err(Error::parse(
                    format!("entries[{j}]"),
                    format!("expected {cols} entries, got {}", row.len()),
                ));
            }
            for (r, c) in row.iter().enumerate() {
                data.push(cell(c, &format!("entries[{j}][{r}]"))?);
            }
        }
        ComplexMatrix::new(rows, cols, data).map(MatrixFile::Entries).map_err(shape)
    }

    pub fn to_value(&self) -> Value {
        match self {
            MatrixFile::Entries(z) => json!({
                "rows": z.rows(),
                "cols": z.cols(),
                "entries": z.to_rows().iter().map(|r| r.iter().map(|&c| complex_json(c)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
            MatrixFile::UnitCircle(u) => json!({"unit_circle": {"x": u.exponents, "t": u.t}}),
            MatrixFile::Polar(p) => {
                let grid = |f: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<f64>> {
                    (0..p.rows()).map(|j| (0..p.cols()).map(|r| f(j, r)).collect()).collect()
                };
                json!({"polar": {"a": grid(&|j, r| p.modulus(j, r)), "x": grid(&|j, r| p.phase(j, r))}})
            }
            MatrixFile::Tensor(t) => json!({
                "tensor": {"dims": t.dims(), "entries": t.entries().iter().map(|&c| complex_json(c)).collect::<Vec<_>>()}
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("json values serialize")
    }

    /// The matrix of any two-dimensional form.
    pub fn matrix(&self) -> Result<ComplexMatrix> {
        match self {
            MatrixFile::Entries(z) => Ok(z.clone()),
            MatrixFile::UnitCircle(u) => Ok(u.matrix()),
            MatrixFile::Polar(p) => Ok(p.to_matrix()),
            MatrixFile::Tensor(t) if t.order() == 2 => t.to_matrix(),
            MatrixFile::Tensor(t) => Err(Error::domain(format!("expected a matrix, got a tensor of order {}", t.order()))),
        }
    }

    /// The tensor of any form; matrices have order 2.
    pub fn tensor(&self) -> Result<ComplexTensor> {
        match self {
            MatrixFile::Tensor(t) => Ok(t.clone()),
            other => Ok(ComplexTensor::from_matrix(&other.matrix()?)),
        }
    }

    /// Polar data when the input was given in polar or unit-circle form.
    pub fn polar(&self) -> Option<PolarMatrix> {
        match self {
            MatrixFile::UnitCircle(u) => Some(u.polar()),
            MatrixFile::Polar(p) => Some(p.clone()),
            _ => None,
        }
    }
}

/// Reads a model given either as a bare grid of `{family, params}` cells or
/// as `{"grid": [...], "independence": ...}`. Errors name 1-based cells.
pub fn parse_model(text: &str) -> Result<DiagonalSumModel> {
    let v = parse_value(text)?;
    let (grid, independence) = match &v {
        Value::Array(_) => (&v, Independence::default()),
        Value::Object(o) => {
            let ind = match o.get("independence") {
                None => Independence::default(),
                Some(i) => serde_json::from_value(i.clone()).map_err(|e| Error::parse("independence", e.to_string()))?,
            };
            (field(o, "grid", "$")?, ind)
        }
        _ => return Err(Error::parse("$", "expected a grid or an object with \"grid\"")),
    };
    let rows = array(grid, "grid")?;
    let mut cells = Vec::with_capacity(rows.len());
    for (j, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::parse(format!("row {}", j + 1), "expected an array of cells"))?;
        let mut out = Vec::with_capacity(row.len());
        for (r, c) in row.iter().enumerate() {
            let at = format!("cell ({}, {})", j + 1, r + 1);
            let d: Distribution = serde_json::from_value(c.clone()).map_err(|e| Error::parse(&at, e.to_string()))?;
            d.validate().map_err(|e| Error::parse(&at, e.to_string()))?;
            out.push(d);
        }
        cells.push(out);
    }
    let grid = CharFnMatrix::new(cells).map_err(|e| match e {
        Error::Domain(m) => Error::parse("grid", m),
        e => e,
    })?;
    Ok(DiagonalSumModel { grid, independence })
}

/// Comma-separated 1-based numbers; `offset` is the position of `text` in the
/// whole spec, used in error messages.
fn numbers(text: &str, offset: usize, full: &str) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    if text.trim().is_empty() {
        return Ok(out);
    }
    let mut pos = offset;
    for item in text.split(',') {
        let lead = item.len() - item.trim_start().len();
        let at = pos + lead + 1;
        let v: usize = item.trim().parse().map_err(|_| {
            Error::parse(
                format!("character {at} of \"{full}\""),
                format!("expected a positive integer, found \"{}\"", item.trim()),
            )
        })?;
        if v == 0 {
            return Err(Error::parse(format!("character {at} of \"{full}\""), "indices are 1-based"));
        }
        out.push((v - 1, at));
        pos += item.len() + 1;
    }
    Ok(out)
}

/// `"1,2|3,4|5,6|7,8"` as an ordered partition of `0..n`.
pub fn parse_partition(spec: &str, n: usize) -> Result<OrderedPartition> {
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    let mut pos = 0;
    for block in spec.split('|') {
        let mut elems = Vec::new();
        for (v, at) in numbers(block, pos, spec)? {
            let position = format!("character {at} of \"{spec}\"");
            if v >= n {
                return Err(Error::parse(position, format!("index {} exceeds {n}", v + 1)));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::parse(position, format!("index {} appears twice", v + 1)));
            }
            elems.push(v);
        }
        blocks.push(IndexSet::new(elems)?);
        pos += block.len() + 1;
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(Error::parse(
            format!("end of \"{spec}\""),
            format!("index {} is not covered", missing + 1),
        ));
    }
    OrderedPartition::new(blocks, IndexSet::range(n))
}

/// `"3,3,2"` as a composition (parts may be zero).
pub fn parse_composition(spec: &str) -> Result<Composition> {
    let mut parts = Vec::new();
    let mut pos = 0;
    for item in spec.split(',') {
        let lead = item.len() - item.trim_start().len();
        let part = item.trim().parse().map_err(|_| {
            Error::parse(
                format!("character {} of \"{spec}\"", pos + lead + 1),
                format!("expected a non-negative integer, found \"{}\"", item.trim()),
            )
        })?;
        parts.push(part);
        pos += item.len() + 1;
    }
    Composition::new(parts)
}

/// `"2,1,3"` as a 0-based permutation of `0..n`.
pub fn parse_permutation(spec: &str, n: usize) -> Result<Vec<usize>> {
    let items = numbers(spec, 0, spec)?;
    let mut seen = vec![false; n];
    for &(v, at) in &items {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::parse(
                format!("character {at} of \"{spec}\""),
                format!("{} is out of range or repeated", v + 1),
            ));
        }
    }
    if items.len() != n {
        return Err(Error::parse(
            format!("end of \"{spec}\""),
            format!("expected {n} indices, got {}", items.len()),
        ));
    }
    Ok(items.into_iter().map(|p| p.0).collect())
}
