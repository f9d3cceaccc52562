//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Monomials are ordered graded-lexicographically with respect to the
//! declared variable order. Text syntax: terms joined by `+` or `-`, each a
//! `*`-separated product of rational literals and variables, optionally
//! raised to a power with `^`: `2*d*f^2 - 3/4*gamma + 1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::field::{parse_rational, Field, FieldElement, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("no value for variable `{0}`")]
    MissingVariable(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Exponent vector, ordered by total degree and then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl MultiPoly {
    pub fn zero(vars: &[String]) -> MultiPoly {
        MultiPoly {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: BigRational) -> MultiPoly {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; vars.len()]), c);
        }
        p
    }

    pub fn from_int(vars: &[String], c: i64) -> MultiPoly {
        MultiPoly::constant(vars, BigRational::from_integer(c.into()))
    }

    /// The polynomial `vars[i]`.
    pub fn var(vars: &[String], i: usize) -> MultiPoly {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = MultiPoly::zero(vars);
        p.terms.insert(Monomial(e), BigRational::one());
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Terms from the largest monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    fn check_vars(&self, other: &MultiPoly) {
        assert_eq!(self.vars, other.vars, "polynomials over different variables");
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.check_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> MultiPoly {
        if s.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.check_vars(other);
        let mut out = MultiPoly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let e = m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(e), c1 * c2);
            }
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Scaled so that the leading coefficient is 1.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Degree-one part: coefficient of each variable, plus the constant.
    /// `None` when the polynomial is not affine-linear.
    pub fn linear_parts(&self) -> Option<(Vec<BigRational>, BigRational)> {
        if self.degree() > 1 {
            return None;
        }
        let mut coeffs = vec![BigRational::zero(); self.vars.len()];
        let mut constant = BigRational::zero();
        for (m, c) in &self.terms {
            match m.0.iter().position(|&e| e == 1) {
                Some(i) => coeffs[i] = c.clone(),
                None => constant = c.clone(),
            }
        }
        Some((coeffs, constant))
    }

    /// Value at a point of `field`; `values[i]` is the value of `vars[i]`.
    pub fn eval(&self, field: Field, values: &[FieldElement]) -> Result<FieldElement, FieldError> {
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = field.from_rational(c)?;
            for (v, &e) in values.iter().zip(&m.0) {
                if e > 0 {
                    t = t.checked_mul(&v.pow(u64::from(e)))?;
                }
            }
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }

    /// Substitutes `vars[i] -> images[i]`; the images share a variable list
    /// that may differ from this one.
    pub fn substitute(&self, images: &[MultiPoly]) -> MultiPoly {
        let target = images[0].vars.clone();
        let mut out = MultiPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (img, &e) in images.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t.mul(img);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Parses with respect to a fixed variable list.
    pub fn parse(vars: &[String], s: &str) -> Result<MultiPoly, PolyError> {
        let mut out = MultiPoly::zero(vars);
        for term in split_terms(s)? {
            let (coeff, mono) = parse_product(vars, &term.body)?;
            let sign = if term.negative { -coeff } else { coeff };
            out.add_term(mono, sign);
        }
        Ok(out)
    }

    /// Names appearing in `s`, in order of first appearance.
    pub fn scan_variables(s: &str) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        let mut cur = String::new();
        let flush = |cur: &mut String, out: &mut Vec<String>| {
            if cur.chars().next().is_some_and(is_ident_start) && !out.contains(cur) {
                out.push(cur.clone());
            }
            cur.clear();
        };
        for ch in s.chars() {
            if ch.is_alphanumeric() || ch == '_' {
                cur.push(ch);
            } else {
                flush(&mut cur, &mut out);
            }
        }
        flush(&mut cur, &mut out);
        out
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub(crate) struct RawTerm {
    pub negative: bool,
    pub body: String,
}

/// Splits at top-level `+` and `-`, folding leading signs into each term.
pub(crate) fn split_terms(s: &str) -> Result<Vec<RawTerm>, PolyError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(PolyError::Parse("empty expression".into()));
    }
    let mut terms = Vec::new();
    let mut negative = false;
    let mut body = String::new();
    let mut prev_significant: Option<char> = None;
    for ch in s.chars() {
        let sign_position = matches!(prev_significant, None | Some('+') | Some('-') | Some('*') | Some('^'));
        match ch {
            '+' | '-' if !sign_position => {
                terms.push(RawTerm {
                    negative,
                    body: std::mem::take(&mut body),
                });
                negative = ch == '-';
                prev_significant = Some(ch);
            }
            '+' | '-' if prev_significant != Some('*') && prev_significant != Some('^') => {
                if ch == '-' {
                    negative = !negative;
                }
                prev_significant = Some(ch);
            }
            c if c.is_whitespace() => {}
            c => {
                body.push(c);
                prev_significant = Some(c);
            }
        }
    }
    terms.push(RawTerm { negative, body });
    if terms.iter().any(|t| t.body.is_empty()) {
        return Err(PolyError::Parse(format!("dangling sign in `{s}`")));
    }
    Ok(terms)
}

/// Parses a `*`-separated product of literals and variables.
pub(crate) fn parse_product(vars: &[String], body: &str) -> Result<(BigRational, Monomial), PolyError> {
    let mut coeff = BigRational::one();
    let mut exps = vec![0u32; vars.len()];
    for factor in body.split('*') {
        if factor.is_empty() {
            return Err(PolyError::Parse(format!("empty factor in `{body}`")));
        }
        let (base, power) = match factor.split_once('^') {
            Some((b, e)) => {
                let e: u32 = e
                    .parse()
                    .map_err(|_| PolyError::Parse(format!("bad exponent in `{factor}`")))?;
                (b, e)
            }
            None => (factor, 1),
        };
        if base.starts_with(|c: char| c.is_ascii_digit()) {
            let q = parse_rational(base).map_err(|_| PolyError::Parse(format!("bad number `{base}`")))?;
            for _ in 0..power {
                coeff *= &q;
            }
        } else if let Some(i) = vars.iter().position(|v| v == base) {
            exps[i] += power;
        } else if base.chars().next().is_some_and(is_ident_start)
            && base.chars().all(|c| c.is_alphanumeric() || c == '_')
        {
            return Err(PolyError::UnknownVariable(base.to_string()));
        } else {
            return Err(PolyError::Parse(format!("bad factor `{factor}`")));
        }
    }
    Ok((coeff, Monomial(exps)))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(if abs.is_integer() {
                    abs.numer().to_string()
                } else {
                    format!("{}/{}", abs.numer(), abs.denom())
                });
            }
            for (name, &e) in self.vars.iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compares term by term from the largest monomial.
impl Ord for MultiPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        let a: Vec<_> = self.terms().collect();
        let b: Vec<_> = other.terms().collect();
        a.cmp(&b)
    }
}
