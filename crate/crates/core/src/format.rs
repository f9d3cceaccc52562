//! The `leibalg v1` text format for multiplication tables.
//!
//! ```text
//! leibalg v1
//! field GF(3)          # or: field Q
//! dim 4
//! basis x1 x2 x3 x4    # optional
//! [1,1] = 1*3          # [e1,e1] = e3
//! [2,1] = 1*3 + 1*4
//! ```
//!
//! Indices are 1-based, omitted products are zero and `#` starts a comment.
//! A term is `coeff*index`; a bare index means coefficient 1. The
//! parametric variant also accepts parameter names inside coefficients
//! (`[3,3] = gamma*6 - 2*d*6`) and an optional `params` line fixing the
//! variable order; without one, variables are ordered by first appearance.

use std::fmt::{self, Write as _};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::LeibnizAlgebra;
use crate::constraints::ParametricAlgebra;
use crate::field::Field;
use crate::linalg::Vector;
use crate::poly::{parse_product, split_terms, MultiPoly, PolyError};

pub const HEADER: &str = "leibalg v1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    /// 1-based line number, or 0 for errors about the file as a whole.
    pub line: usize,
    pub message: String,
}

impl FormatError {
    fn at(line: usize, message: impl Into<String>) -> FormatError {
        FormatError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for FormatError {}

struct ProductLine {
    line: usize,
    i: usize,
    j: usize,
    rhs: String,
}

#[derive(Default)]
struct Raw {
    field: Option<Field>,
    dim: Option<usize>,
    basis: Option<Vec<String>>,
    params: Option<(usize, Vec<String>)>,
    products: Vec<ProductLine>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((k + 1, l))
    })
}

fn scan(text: &str) -> Result<Raw, FormatError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, HEADER)) => {}
        Some((n, other)) => return Err(FormatError::at(n, format!("expected `{HEADER}`, found `{other}`"))),
        None => return Err(FormatError::at(0, "empty input")),
    }
    let mut raw = Raw::default();
    for (n, line) in lines {
        if line.starts_with('[') {
            raw.products.push(product_line(n, line, raw.dim)?);
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let duplicate = || FormatError::at(n, format!("repeated `{key}` line"));
        match key {
            "field" => {
                if raw.field.is_some() {
                    return Err(duplicate());
                }
                raw.field = Some(rest.parse().map_err(|e| FormatError::at(n, format!("{e}")))?);
            }
            "dim" => {
                if raw.dim.is_some() {
                    return Err(duplicate());
                }
                let d: usize = rest
                    .parse()
                    .map_err(|_| FormatError::at(n, format!("bad dimension `{rest}`")))?;
                raw.dim = Some(d);
            }
            "basis" => {
                if raw.basis.is_some() {
                    return Err(duplicate());
                }
                let names = names(n, rest, "basis")?;
                raw.basis = Some(names);
            }
            "params" => {
                if raw.params.is_some() {
                    return Err(duplicate());
                }
                raw.params = Some((n, names(n, rest, "parameter")?));
            }
            _ => return Err(FormatError::at(n, format!("unknown directive `{key}`"))),
        }
    }
    let dim = raw.dim.ok_or_else(|| FormatError::at(0, "missing `dim` line"))?;
    if let Some(b) = &raw.basis {
        if b.len() != dim {
            return Err(FormatError::at(0, format!("basis has {} names but dim is {dim}", b.len())));
        }
    }
    let mut seen = vec![false; dim * dim];
    for p in &raw.products {
        let slot = (p.i - 1) * dim + (p.j - 1);
        if seen[slot] {
            return Err(FormatError::at(p.line, format!("product [{},{}] given twice", p.i, p.j)));
        }
        seen[slot] = true;
    }
    Ok(raw)
}

fn names(n: usize, rest: &str, what: &str) -> Result<Vec<String>, FormatError> {
    let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
    for (k, a) in names.iter().enumerate() {
        if names[..k].contains(a) {
            return Err(FormatError::at(n, format!("repeated {what} name `{a}`")));
        }
        if !a.starts_with(|c: char| c.is_alphabetic() || c == '_') || !a.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(FormatError::at(n, format!("bad {what} name `{a}`")));
        }
    }
    Ok(names)
}

fn product_line(n: usize, line: &str, dim: Option<usize>) -> Result<ProductLine, FormatError> {
    let dim = dim.ok_or_else(|| FormatError::at(n, "product before `dim` line"))?;
    let bad = || FormatError::at(n, format!("expected `[i,j] = terms`, found `{line}`"));
    let close = line.find(']').ok_or_else(bad)?;
    let (i, j) = line[1..close].split_once(',').ok_or_else(bad)?;
    let index = |s: &str| -> Result<usize, FormatError> {
        let s = s.trim();
        let k: usize = s.parse().map_err(|_| FormatError::at(n, format!("bad index `{s}`")))?;
        if k == 0 || k > dim {
            return Err(FormatError::at(n, format!("index {k} out of range 1..={dim}")));
        }
        Ok(k)
    };
    let (i, j) = (index(i)?, index(j)?);
    let rhs = line[close + 1..].trim().strip_prefix('=').ok_or_else(bad)?.trim();
    Ok(ProductLine {
        line: n,
        i,
        j,
        rhs: rhs.to_string(),
    })
}

/// Parses a right-hand side into one polynomial coefficient per basis
/// index.
fn terms(p: &ProductLine, dim: usize, vars: &[String]) -> Result<Vec<MultiPoly>, FormatError> {
    let mut out = vec![MultiPoly::zero(vars); dim];
    if p.rhs == "0" {
        return Ok(out);
    }
    let err = |e: PolyError| FormatError::at(p.line, e.to_string());
    for t in split_terms(&p.rhs).map_err(err)? {
        let (coeff, index) = match t.body.rsplit_once('*') {
            Some((c, k)) => (Some(c), k),
            None => (None, t.body.as_str()),
        };
        let k: usize = index
            .parse()
            .map_err(|_| FormatError::at(p.line, format!("term `{}` does not end in a basis index", t.body)))?;
        if k == 0 || k > dim {
            return Err(FormatError::at(p.line, format!("index {k} out of range 1..={dim}")));
        }
        let mut c = match coeff {
            Some(c) => {
                let (q, m) = parse_product(vars, c).map_err(err)?;
                let mut mono = MultiPoly::constant(vars, q);
                for (v, &e) in m.0.iter().enumerate() {
                    for _ in 0..e {
                        mono = mono.mul(&MultiPoly::var(vars, v));
                    }
                }
                mono
            }
            None => MultiPoly::constant(vars, BigRational::one()),
        };
        if t.negative {
            c = c.scale(&-BigRational::one());
        }
        out[k - 1] = out[k - 1].add(&c);
    }
    Ok(out)
}

/// Parses a numeric table. The `field` line is required.
pub fn parse_algebra(text: &str) -> Result<LeibnizAlgebra, FormatError> {
    let raw = scan(text)?;
    if let Some((n, _)) = raw.params {
        return Err(FormatError::at(n, "`params` is only allowed in parametric tables"));
    }
    let field = raw.field.ok_or_else(|| FormatError::at(0, "missing `field` line"))?;
    let dim = raw.dim.expect("checked by scan");
    let mut table = Vec::with_capacity(raw.products.len());
    for p in &raw.products {
        let coords = terms(p, dim, &[])?
            .iter()
            .map(|c| {
                let q = c.terms().next().map(|(_, q)| q.clone()).unwrap_or_else(BigRational::zero);
                field
                    .from_rational(&q)
                    .map_err(|_| FormatError::at(p.line, format!("coefficient {q} is not defined in {field}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        table.push((p.i - 1, p.j - 1, Vector::new(coords)));
    }
    let a = LeibnizAlgebra::from_table(dim, field, &table).map_err(|e| FormatError::at(0, e.to_string()))?;
    Ok(match raw.basis {
        Some(b) => a.with_labels(b),
        None => a,
    })
}

/// Parses a parametric table, returning the field if one was declared.
pub fn parse_parametric(text: &str) -> Result<(ParametricAlgebra, Option<Field>), FormatError> {
    let raw = scan(text)?;
    let dim = raw.dim.expect("checked by scan");
    let vars = match raw.params {
        Some((_, v)) => v,
        None => {
            let mut v: Vec<String> = Vec::new();
            for p in &raw.products {
                for name in MultiPoly::scan_variables(&p.rhs) {
                    if !v.contains(&name) {
                        v.push(name);
                    }
                }
            }
            v
        }
    };
    let mut out = ParametricAlgebra::new(dim, vars.clone());
    for p in &raw.products {
        out.set_product(p.i - 1, p.j - 1, terms(p, dim, &vars)?);
    }
    if let Some(b) = raw.basis {
        out = out.with_labels(b);
    }
    Ok((out, raw.field))
}

/// Parses one polynomial per non-blank line.
pub fn parse_relations(vars: &[String], text: &str) -> Result<Vec<MultiPoly>, FormatError> {
    content_lines(text)
        .map(|(n, l)| MultiPoly::parse(vars, l).map_err(|e| FormatError::at(n, e.to_string())))
        .collect()
}

fn write_header(out: &mut String, field: Option<Field>, dim: usize, labels: Option<&[String]>) {
    let _ = writeln!(out, "{HEADER}");
    if let Some(f) = field {
        let _ = writeln!(out, "field {f}");
    }
    let _ = writeln!(out, "dim {dim}");
    if let Some(l) = labels {
        let _ = writeln!(out, "basis {}", l.join(" "));
    }
}

/// Writes a numeric table. Only nonzero products are listed.
pub fn write_algebra(a: &LeibnizAlgebra) -> String {
    let mut out = String::new();
    write_header(&mut out, Some(a.field()), a.dim(), a.labels());
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let v = a.product(i, j);
            if v.is_zero() {
                continue;
            }
            let terms: Vec<String> = v
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| format!("{c}*{}", k + 1))
                .collect();
            let _ = writeln!(out, "[{},{}] = {}", i + 1, j + 1, terms.join(" + "));
        }
    }
    out
}

/// Writes a parametric table.
pub fn write_parametric(p: &ParametricAlgebra, field: Option<Field>) -> String {
    let mut out = String::new();
    write_header(&mut out, field, p.dim(), p.labels());
    if !p.vars().is_empty() {
        let _ = writeln!(out, "params {}", p.vars().join(" "));
    }
    for i in 0..p.dim() {
        for j in 0..p.dim() {
            let mut rhs = String::new();
            for (k, c) in p.product(i, j).iter().enumerate() {
                for (m, q) in c.terms() {
                    let mut mono = MultiPoly::constant(p.vars(), q.clone());
                    for (v, &e) in m.0.iter().enumerate() {
                        for _ in 0..e {
                            mono = mono.mul(&MultiPoly::var(p.vars(), v));
                        }
                    }
                    let s = mono.to_string();
                    let (neg, body) = match s.strip_prefix('-') {
                        Some(b) => (true, b),
                        None => (false, s.as_str()),
                    };
                    if rhs.is_empty() {
                        if neg {
                            rhs.push('-');
                        }
                    } else {
                        rhs.push_str(if neg { " - " } else { " + " });
                    }
                    let _ = write!(rhs, "{body}*{}", k + 1);
                }
            }
            if !rhs.is_empty() {
                let _ = writeln!(out, "[{},{}] = {rhs}", i + 1, j + 1);
            }
        }
    }
    out
}
