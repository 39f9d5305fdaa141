//! Line-oriented text formats for modules, bundles and triples.
//!
//! Every file starts with `field p=<prime>` or `field rationals` and a kind
//! line (`module`, `triple`, `bundle gamma`, `bundle monad`). Matrices are
//! row-major, rows separated by `;` and entries by `,`. Blank lines and
//! text after `#` are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::bipoly::{BiDegree, BiForm};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, Vector};
use crate::flmod::{FamilyKind, FinLengthModule, GradedSubspace};
use crate::horrocks::{BundleRep, HorrocksTriple};
use crate::linecoh::{FormMatrix, SplitBundle};
use crate::presheaf::{KerPresentation, MonadPresentation};

/// Any of the three file kinds.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum FileData {
    Module(FinLengthModule),
    Bundle(BundleRep),
    Triple(HorrocksTriple),
}

fn perr(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Lines<'a> {
        let items = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { items }
    }
}

fn parse_header(lines: &Lines) -> Result<(Field, String)> {
    let mut it = lines.items.iter();
    let (n, first) = it.next().ok_or_else(|| Error::Parse("empty file".into()))?;
    let field = first
        .strip_prefix("field")
        .ok_or_else(|| perr(*n, "expected `field p=<prime>` or `field rationals`"))?
        .trim()
        .parse::<Field>()?;
    let (_, kind) = it.next().ok_or_else(|| Error::Parse("missing kind line".into()))?;
    Ok((field, kind.to_string()))
}

fn parse_vector(field: Field, text: &str, line: usize) -> Result<Vector> {
    text.split(',')
        .map(|e| field.parse_elem(e.trim()).map_err(|err| perr(line, err)))
        .collect()
}

/// Rows separated by `;`; an empty string is the empty list.
fn parse_rows(field: Field, text: &str, line: usize) -> Result<Vec<Vector>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';').map(|r| parse_vector(field, r, line)).collect()
}

fn print_vector(v: &[crate::exactla::FieldElem]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
}

fn print_rows(rows: &[Vector]) -> String {
    rows.iter().map(|r| print_vector(r)).collect::<Vec<_>>().join("; ")
}

fn parse_degree_key(text: &str, line: usize) -> Result<i64> {
    text.trim().parse().map_err(|_| perr(line, format!("bad degree `{text}`")))
}

/// Splits `key rest: value` into (key, rest, value).
fn split_keyed(l: &str) -> Option<(&str, &str, &str)> {
    let (head, value) = l.split_once(':')?;
    let head = head.trim();
    let (key, rest) = head.split_once(char::is_whitespace).unwrap_or((head, ""));
    Some((key, rest.trim(), value.trim()))
}

/// A `W`/`V` line left over after the module body: line number, tag, degree, rows.
type ExtraLine = (usize, &'static str, i64, String);

fn parse_module_body(field: Field, lines: &[(usize, &str)]) -> Result<(FinLengthModule, Vec<ExtraLine>)> {
    let mut range: Option<(i64, i64)> = None;
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    let mut ops: BTreeMap<(usize, i64), (usize, Vec<Vector>)> = BTreeMap::new();
    let mut extra = Vec::new();
    for &(n, l) in lines {
        if let Some(r) = l.strip_prefix("degrees") {
            let (a, b) = r
                .trim()
                .split_once("..")
                .ok_or_else(|| perr(n, "expected `degrees lo..hi`"))?;
            range = Some((parse_degree_key(a, n)?, parse_degree_key(b, n)?));
            continue;
        }
        let (key, rest, value) = split_keyed(l).ok_or_else(|| perr(n, format!("unrecognized line `{l}`")))?;
        match key {
            "dim" => {
                let d = parse_degree_key(rest, n)?;
                let k = value.parse().map_err(|_| perr(n, format!("bad dimension `{value}`")))?;
                dims.insert(d, k);
            }
            "x0" | "x1" | "x2" | "x3" => {
                let i = key[1..].parse::<usize>().unwrap();
                let d = parse_degree_key(rest, n)?;
                ops.insert((i, d), (n, parse_rows(field, value, n)?));
            }
            "W" | "V" => {
                let d = parse_degree_key(rest, n)?;
                extra.push((n, if key == "W" { "W" } else { "V" }, d, value.to_string()));
            }
            _ => return Err(perr(n, format!("unknown key `{key}`"))),
        }
    }
    let (lo, hi) = match range {
        Some(r) => r,
        None if dims.is_empty() => (0, -1),
        None => (*dims.keys().next().unwrap(), *dims.keys().last().unwrap()),
    };
    if let Some(d) = dims.keys().find(|&&d| d < lo || d > hi) {
        return Err(Error::Parse(format!("dim given for degree {d} outside {lo}..{hi}")));
    }
    let dvec: Vec<usize> = (lo..=hi).map(|d| dims.get(&d).copied().unwrap_or(0)).collect();
    let dim = |d: i64| dims.get(&d).copied().unwrap_or(0);
    let mut blocks = Vec::new();
    for d in lo..=hi {
        let block: [Matrix; 4] = std::array::from_fn(|_| Matrix::zeros(field, dim(d + 1), dim(d)));
        blocks.push(block);
    }
    for ((i, d), (n, rows)) in ops {
        if d < lo || d > hi {
            return Err(perr(n, format!("x{i} given in degree {d} outside {lo}..{hi}")));
        }
        let (r, c) = (dim(d + 1), dim(d));
        if rows.len() != r || rows.iter().any(|row| row.len() != c) {
            return Err(perr(n, format!("x{i} in degree {d} must be {r}x{c}")));
        }
        let entries = rows.into_iter().flatten().collect();
        blocks[(d - lo) as usize][i] = Matrix::from_rows(field, r, c, entries);
    }
    let m = FinLengthModule::new(field, lo, dvec, blocks)?;
    m.validate()?;
    Ok((m, extra))
}

fn write_module_body(out: &mut String, m: &FinLengthModule) {
    let Some((lo, hi)) = m.support() else {
        return;
    };
    writeln!(out, "degrees {lo}..{hi}").unwrap();
    for d in lo..=hi {
        writeln!(out, "dim {d}: {}", m.dim(d)).unwrap();
    }
    for d in lo..hi {
        if m.dim(d) == 0 || m.dim(d + 1) == 0 {
            continue;
        }
        for i in 0..4 {
            let op = m.op(i, d);
            let rows: Vec<Vector> = (0..op.rows()).map(|r| op.row(r).to_vec()).collect();
            writeln!(out, "x{i} {d}: {}", print_rows(&rows)).unwrap();
        }
    }
}

pub fn parse_module(text: &str) -> Result<FinLengthModule> {
    match parse_file(text)? {
        FileData::Module(m) => Ok(m),
        _ => Err(Error::Parse("expected a module file".into())),
    }
}

pub fn print_module(m: &FinLengthModule) -> String {
    let mut out = format!("field {}\nmodule\n", m.field());
    write_module_body(&mut out, m);
    out
}

pub fn print_triple(t: &HorrocksTriple) -> String {
    let mut out = format!("field {}\ntriple\n", t.field());
    write_module_body(&mut out, t.module());
    for (name, sub) in [("W", &t.w), ("V", &t.v)] {
        for d in sub.degrees() {
            if sub.dim(d) > 0 {
                writeln!(out, "{name} {d}: {}", print_rows(sub.basis(d))).unwrap();
            }
        }
    }
    out
}

pub fn parse_triple(text: &str) -> Result<HorrocksTriple> {
    match parse_file(text)? {
        FileData::Triple(t) => Ok(t),
        _ => Err(Error::Parse("expected a triple file".into())),
    }
}

fn parse_twists(text: &str, line: usize) -> Result<SplitBundle> {
    let text = text.trim();
    if text.is_empty() || text == "0" {
        return Ok(SplitBundle::empty());
    }
    let mut out = Vec::new();
    for part in text.split(')') {
        let part = part.trim().trim_start_matches(['+', ',']).trim();
        if part.is_empty() {
            continue;
        }
        let inner = part
            .trim_start_matches('O')
            .strip_prefix('(')
            .ok_or_else(|| perr(line, format!("bad twist `{part})`")))?;
        let (a, b) = inner.split_once(',').ok_or_else(|| perr(line, format!("bad twist `{part})`")))?;
        let p = |s: &str| s.trim().parse::<i64>().map_err(|_| perr(line, format!("bad twist `{part})`")));
        out.push(BiDegree::new(p(a)?, p(b)?));
    }
    Ok(SplitBundle::new(out))
}

fn print_twists(b: &SplitBundle) -> String {
    b.twists().iter().map(|t| format!("({},{})", t.a, t.b)).collect::<Vec<_>>().join(" ")
}

fn parse_form_matrix(field: Field, src: &SplitBundle, dst: &SplitBundle, text: &str, line: usize) -> Result<FormMatrix> {
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| perr(line, "matrix must be enclosed in [ ]"))?
        .trim();
    let rows: Vec<&str> = if inner.is_empty() { Vec::new() } else { inner.split(';').collect() };
    if rows.len() != dst.rank() && !(dst.rank() == 0 && rows.is_empty()) {
        return Err(perr(line, format!("{} rows for a target of rank {}", rows.len(), dst.rank())));
    }
    let mut entries = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = if row.trim().is_empty() { Vec::new() } else { row.split(',').collect() };
        if cells.len() != src.rank() {
            return Err(perr(line, format!("row {i} has {} entries, source has rank {}", cells.len(), src.rank())));
        }
        for (j, c) in cells.iter().enumerate() {
            let deg = dst.twists()[i] - src.twists()[j];
            entries.push(BiForm::parse(field, c, Some(deg)).map_err(|e| perr(line, e))?);
        }
    }
    FormMatrix::new(field, src.clone(), dst.clone(), entries)
}

pub fn print_bundle(rep: &BundleRep) -> String {
    let mut out = format!("field {}\n", rep.field());
    match rep {
        BundleRep::Gamma(p) => {
            writeln!(out, "bundle gamma").unwrap();
            writeln!(out, "A: {}", print_twists(p.a())).unwrap();
            writeln!(out, "B: {}", print_twists(p.b())).unwrap();
            writeln!(out, "g: {}", p.g()).unwrap();
        }
        BundleRep::Monad(m) => {
            writeln!(out, "bundle monad").unwrap();
            writeln!(out, "K: {}", print_twists(m.k())).unwrap();
            writeln!(out, "A: {}", print_twists(m.a())).unwrap();
            writeln!(out, "B: {}", print_twists(m.b())).unwrap();
            writeln!(out, "kappa: {}", m.kappa()).unwrap();
            writeln!(out, "psi: {}", m.psibar()).unwrap();
        }
    }
    out
}

fn parse_bundle_body(field: Field, monad: bool, lines: &[(usize, &str)]) -> Result<BundleRep> {
    let mut kv: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for &(n, l) in lines {
        let (key, value) = l.split_once(':').ok_or_else(|| perr(n, format!("unrecognized line `{l}`")))?;
        let key = key.trim();
        let allowed: &[&str] = if monad { &["K", "A", "B", "kappa", "psi"] } else { &["A", "B", "g"] };
        if !allowed.contains(&key) {
            return Err(perr(n, format!("unknown key `{key}`")));
        }
        if kv.insert(key, (n, value.trim())).is_some() {
            return Err(perr(n, format!("duplicate key `{key}`")));
        }
    }
    let get = |k: &str| kv.get(k).copied().ok_or_else(|| Error::Parse(format!("missing `{k}:` line")));
    let twists = |k: &str| -> Result<SplitBundle> {
        let (n, v) = get(k)?;
        parse_twists(v, n)
    };
    let a = twists("A")?;
    let b = twists("B")?;
    if monad {
        let k = twists("K")?;
        let (n, v) = get("kappa")?;
        let kappa = parse_form_matrix(field, &k, &a, v, n)?;
        let (n, v) = get("psi")?;
        let psi = parse_form_matrix(field, &a, &b, v, n)?;
        Ok(BundleRep::Monad(MonadPresentation::new(kappa, psi)?))
    } else {
        let (n, v) = get("g")?;
        let g = parse_form_matrix(field, &a, &b, v, n)?;
        Ok(BundleRep::Gamma(KerPresentation::new(g)?))
    }
}

pub fn parse_bundle(text: &str) -> Result<BundleRep> {
    match parse_file(text)? {
        FileData::Bundle(b) => Ok(b),
        _ => Err(Error::Parse("expected a bundle file".into())),
    }
}

/// Parses any of the file kinds, validating module relations, bundle
/// surjectivity and socle conditions.
pub fn parse_file(text: &str) -> Result<FileData> {
    let lines = Lines::new(text);
    let (field, kind) = parse_header(&lines)?;
    let body = &lines.items[2..];
    match kind.as_str() {
        "module" | "triple" => {
            let (m, extra) = parse_module_body(field, body)?;
            if kind == "module" {
                if let Some((n, ..)) = extra.first() {
                    return Err(perr(*n, "W/V lines belong in a triple file"));
                }
                return Ok(FileData::Module(m));
            }
            let mut w = BTreeMap::new();
            let mut v = BTreeMap::new();
            for (n, which, d, value) in extra {
                let vecs = parse_rows(field, &value, n)?;
                let target = if which == "W" { &mut w } else { &mut v };
                if target.insert(d, vecs).is_some() {
                    return Err(perr(n, format!("{which} given twice in degree {d}")));
                }
            }
            let w = GradedSubspace::from_spanning(field, FamilyKind::M10, w);
            let v = GradedSubspace::from_spanning(field, FamilyKind::M01, v);
            Ok(FileData::Triple(HorrocksTriple::new(&m, w, v)?))
        }
        "bundle gamma" => parse_bundle_body(field, false, body).map(FileData::Bundle),
        "bundle monad" => parse_bundle_body(field, true, body).map(FileData::Bundle),
        other => Err(perr(lines.items[1].0, format!("unknown file kind `{other}`"))),
    }
}
