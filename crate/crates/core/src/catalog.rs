//! Named algebras and parametric families with field-dependent validity
//! conditions.
//!
//! Every family is stored as a parametric table; instantiation checks the
//! entry's conditions in the chosen field, evaluates the table and confirms
//! the Leibniz identity.

use std::fmt;

use thiserror::Error;

use crate::algebra::LeibnizAlgebra;
use crate::constraints::{Assignment, ParametricAlgebra};
use crate::field::{Field, FieldElement};
use crate::format::parse_parametric;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("no catalog entry named `{0}`")]
    NoSuchEntry(String),
    #[error("`{entry}` has no parameter `{name}`")]
    UnknownParam { entry: String, name: String },
    #[error("`{entry}` needs a value for `{name}`")]
    MissingParam { entry: String, name: String },
    #[error("parameter `{0}` given twice")]
    DuplicateParam(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("internal error: {0}")]
    InternalError(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Scalar,
    Dimension,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub description: &'static str,
    pub kind: ParamKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamData {
    Scalar(FieldElement),
    Dimension(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamValue {
    pub name: String,
    pub value: ParamData,
}

impl ParamValue {
    pub fn scalar(name: &str, value: FieldElement) -> ParamValue {
        ParamValue {
            name: name.to_string(),
            value: ParamData::Scalar(value),
        }
    }

    pub fn dimension(name: &str, n: usize) -> ParamValue {
        ParamValue {
            name: name.to_string(),
            value: ParamData::Dimension(n),
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            ParamData::Scalar(x) => write!(f, "{}={x}", self.name),
            ParamData::Dimension(n) => write!(f, "{}={n}", self.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintReport {
    pub description: String,
    pub holds: bool,
    pub evidence: String,
}

impl fmt::Display for ConstraintReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.holds { "pass" } else { "FAIL" };
        write!(f, "{mark}  {}  ({})", self.description, self.evidence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// `None` when the dimension is itself a parameter.
    pub dim: Option<usize>,
    pub params: &'static [ParamSpec],
    pub constraints: &'static [&'static str],
    pub source: &'static str,
    table: Option<&'static str>,
}

impl CatalogEntry {
    /// The multiplication table with its parameters left symbolic.
    pub fn table(&self) -> Option<ParametricAlgebra> {
        self.table
            .map(|t| parse_parametric(t).expect("catalog tables parse").0)
    }
}

const fn scalar(name: &'static str, description: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        description,
        kind: ParamKind::Scalar,
    }
}

const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "abelian",
        dim: None,
        params: &[ParamSpec {
            name: "n",
            description: "dimension",
            kind: ParamKind::Dimension,
        }],
        constraints: &["n >= 1"],
        source: "coclass 1 classification, abelian case (any dimension allowed)",
        table: None,
    },
    CatalogEntry {
        name: "cyclic_example4",
        dim: Some(4),
        params: &[],
        constraints: &[],
        source: "cyclic worked example of dimension 4 and coclass 0",
        table: Some("leibalg v1\ndim 4\nbasis x1 x2 x3 x4\n[1,1] = 1*2\n[1,2] = 1*3\n[1,3] = 1*4\n"),
    },
    CatalogEntry {
        name: "heisenberg3",
        dim: Some(3),
        params: &[],
        constraints: &[],
        source: "coclass 1 classification, Heisenberg Lie algebra",
        table: Some("leibalg v1\ndim 3\nbasis x y z\n[1,2] = 1*3\n[2,1] = -1*3\n"),
    },
    CatalogEntry {
        name: "cc1_case2",
        dim: Some(3),
        params: &[
            scalar("tau", "coefficient of [y,y]"),
            scalar("lambda", "coefficient of [x,y]"),
            scalar("epsilon", "coefficient of [y,x]"),
        ],
        constraints: &["tau != 0", "(lambda+epsilon)^2 - 4*tau is not a square"],
        source: "coclass 1 classification, non-split family with z central; \
                 the discriminant uses tau (the tau = 1 normalization gives the short form)",
        table: Some(
            "leibalg v1\ndim 3\nbasis x y z\nparams tau lambda epsilon\n\
             [1,1] = 1*3\n[2,2] = tau*3\n[1,2] = lambda*3\n[2,1] = epsilon*3\n",
        ),
    },
    CatalogEntry {
        name: "cc2_split4",
        dim: Some(4),
        params: &[],
        constraints: &[],
        source: "coclass 2 classification, direct sum of two 2-dimensional cyclic algebras",
        table: Some("leibalg v1\ndim 4\nbasis x1 x2 x3 x4\n[1,1] = 1*3\n[2,2] = 1*4\n"),
    },
    CatalogEntry {
        name: "A18",
        dim: Some(4),
        params: &[scalar("alpha", "coefficient of [x1,x2]")],
        constraints: &["alpha != -1"],
        source: "coclass 2 classification, 4-dimensional family A18(alpha)",
        table: Some(
            "leibalg v1\ndim 4\nbasis x1 x2 x3 x4\nparams alpha\n\
             [1,1] = 1*3\n[1,2] = alpha*3\n[2,1] = 1*4\n[2,2] = -1*4\n",
        ),
    },
    CatalogEntry {
        name: "A19",
        dim: Some(4),
        params: &[],
        constraints: &[],
        source: "coclass 2 classification, 4-dimensional algebra A19",
        table: Some(
            "leibalg v1\ndim 4\nbasis x1 x2 x3 x4\n\
             [1,1] = 1*3\n[1,2] = 1*3\n[2,1] = 1*3 + 1*4\n[2,2] = 1*4\n",
        ),
    },
    CatalogEntry {
        name: "A1_6dim",
        dim: Some(6),
        params: &[
            scalar("c", "coefficient of [t,x]"),
            scalar("g", "coefficient of [u,y]"),
            scalar("d", "coefficient of [t,y]"),
            scalar("shat", "second coordinate of the left-central direction rhat*x + shat*y"),
            scalar("rhat", "first coordinate of the left-central direction rhat*x + shat*y"),
        ],
        constraints: &[
            "c != 0",
            "g != 0",
            "d != 0",
            "shat != 0",
            "rhat != 0",
            "characteristic is not 2 or 3",
            "shat*(-3*d) = rhat*c",
            "9*d^2 - 4*c*g is not a square",
        ],
        source: "coclass 2 classification, 6-dimensional final table A1 \
                 closed under the Leibniz identity by gamma = -d, f = 2d, dhat = -3d",
        table: Some(
            "leibalg v1\ndim 6\nbasis t u w x y z\nparams c g d\n\
             [1,2] = 1*3\n[2,1] = -1*3\n[1,3] = 1*4\n[3,1] = -1*4\n[2,3] = 1*5\n[3,2] = -1*5\n\
             [3,3] = -d*6\n[1,4] = c*6\n[4,1] = -c*6\n[1,5] = d*6\n[5,1] = -3*d*6\n\
             [2,4] = 2*d*6\n[2,5] = g*6\n[5,2] = -g*6\n",
        ),
    },
    CatalogEntry {
        name: "A3_6dim",
        dim: Some(6),
        params: &[
            scalar("d", "coefficient of [t,y]"),
            scalar("dhat", "coefficient of [y,t]"),
        ],
        constraints: &["characteristic is not 2", "d != 0", "dhat = 3*d"],
        source: "coclass 2 classification, 6-dimensional final table A3 \
                 with f = -d, fhat = -dhat, gamma = (d+dhat)/2",
        table: Some(
            "leibalg v1\ndim 6\nbasis t u w x y z\nparams d dhat\n\
             [1,2] = 1*3\n[2,1] = -1*3\n[1,3] = 1*4\n[3,1] = -1*4\n[2,3] = 1*5\n[3,2] = -1*5\n\
             [3,3] = 1/2*d*6 + 1/2*dhat*6\n[1,5] = d*6\n[5,1] = dhat*6\n\
             [2,4] = -d*6\n[4,2] = -dhat*6\n",
        ),
    },
    CatalogEntry {
        name: "table6_generic",
        dim: Some(6),
        params: &[
            scalar("alpha", "coefficient of [t,t]"),
            scalar("beta", "coefficient of [u,u]"),
            scalar("abar", "z-coefficient of [u,t]"),
            scalar("gamma", "coefficient of [w,w]"),
            scalar("c", "coefficient of [t,x]"),
            scalar("d", "coefficient of [t,y]"),
            scalar("f", "coefficient of [u,x]"),
            scalar("g", "coefficient of [u,y]"),
            scalar("dhat", "coefficient of [y,t]"),
            scalar("fhat", "coefficient of [x,u]"),
        ],
        constraints: &[],
        source: "coclass 2 classification, updated 6-dimensional table before the Leibniz relations",
        table: Some(
            "leibalg v1\ndim 6\nbasis t u w x y z\nparams alpha beta abar gamma c d f g dhat fhat\n\
             [1,1] = alpha*6\n[1,2] = 1*3\n[1,3] = 1*4\n[1,4] = c*6\n[1,5] = d*6\n\
             [2,1] = -1*3 + abar*6\n[2,2] = beta*6\n[2,3] = 1*5\n[2,4] = f*6\n[2,5] = g*6\n\
             [3,1] = -1*4\n[3,2] = -1*5\n[3,3] = gamma*6\n\
             [4,1] = -c*6\n[4,2] = fhat*6\n[5,1] = dhat*6\n[5,2] = -g*6\n",
        ),
    },
    CatalogEntry {
        name: "table1_case1",
        dim: Some(4),
        params: &[
            scalar("alpha", "coefficient of [w,w]"),
            scalar("beta", "coefficient of [x,x]"),
            scalar("gamma", "coefficient of [y,y]"),
            scalar("a", "z-coefficient of [w,x]"),
            scalar("ahat", "z-coefficient of [x,w]"),
            scalar("b", "coefficient of [w,y]"),
            scalar("c", "coefficient of [x,y]"),
        ],
        constraints: &["gamma = 0"],
        source: "coclass 1 classification, 4-dimensional table in the P2-failure argument \
                 with bhat = -b and chat = -c",
        table: Some(
            "leibalg v1\ndim 4\nbasis w x y z\nparams alpha beta gamma a ahat b c\n\
             [1,1] = alpha*4\n[1,2] = 1*3 + a*4\n[1,3] = b*4\n\
             [2,1] = -1*3 + ahat*4\n[2,2] = beta*4\n[2,3] = c*4\n\
             [3,1] = -b*4\n[3,2] = -c*4\n[3,3] = gamma*4\n",
        ),
    },
    CatalogEntry {
        name: "holmes_ii",
        dim: Some(5),
        params: &[],
        constraints: &[],
        source: "coclass 2 Lie algebras with P1, 5-dimensional case",
        table: Some(
            "leibalg v1\ndim 5\nbasis x y z a b\n\
             [1,2] = 1*3\n[2,1] = -1*3\n[1,3] = 1*4\n[3,1] = -1*4\n[2,3] = 1*5\n[3,2] = -1*5\n",
        ),
    },
    CatalogEntry {
        name: "holmes_iii",
        dim: Some(6),
        params: &[scalar("gamma", "coefficient of [b,y]")],
        constraints: &["-gamma is not a square"],
        source: "coclass 2 Lie algebras with P1, 6-dimensional case",
        table: Some(
            "leibalg v1\ndim 6\nbasis a b c x y z\nparams gamma\n\
             [1,2] = 1*3\n[2,1] = -1*3\n[1,3] = 1*4\n[3,1] = -1*4\n[2,3] = 1*5\n[3,2] = -1*5\n\
             [1,4] = 1*6\n[4,1] = -1*6\n[2,5] = gamma*6\n[5,2] = -gamma*6\n",
        ),
    },
    CatalogEntry {
        name: "cex_fourdim_A1",
        dim: Some(4),
        params: &[],
        constraints: &[],
        source: "counterexample: 4-dimensional algebra without P2",
        table: Some("leibalg v1\ndim 4\nbasis x1 x2 x3 x4\n[1,3] = 1*4\n[3,2] = 1*4\n"),
    },
    CatalogEntry {
        name: "cex_A8",
        dim: Some(5),
        params: &[],
        constraints: &[],
        source: "counterexample: 5-dimensional algebra A8 without P1",
        table: Some(
            "leibalg v1\ndim 5\nbasis x1 x2 x3 x4 x5\n\
             [1,1] = 1*5\n[1,2] = 1*3\n[2,1] = -1*3\n[1,3] = 1*4\n[3,1] = -1*4\n[2,3] = 1*5\n[3,2] = -1*5\n",
        ),
    },
];

/// The 4-dimensional coclass-1 table before the Leibniz identity is
/// imposed: `bhat`, `chat` and `gamma` are free.
pub fn table1_parametric() -> ParametricAlgebra {
    parse_parametric(
        "leibalg v1\ndim 4\nbasis w x y z\nparams alpha beta gamma a ahat b bhat c chat\n\
         [1,1] = alpha*4\n[1,2] = 1*3 + a*4\n[1,3] = b*4\n\
         [2,1] = -1*3 + ahat*4\n[2,2] = beta*4\n[2,3] = c*4\n\
         [3,1] = bhat*4\n[3,2] = chat*4\n[3,3] = gamma*4\n",
    )
    .expect("table parses")
    .0
}

/// The 6-dimensional updated table with `alpha = beta = abar = 0`.
pub fn table6_reduced() -> ParametricAlgebra {
    entry("table6_generic")
        .expect("entry exists")
        .table()
        .expect("has a table")
        .fix(&[("alpha", 0), ("beta", 0), ("abar", 0)])
}

/// Every entry, in a fixed order.
pub fn list() -> &'static [CatalogEntry] {
    CATALOG
}

pub fn entry(name: &str) -> Result<&'static CatalogEntry, CatalogError> {
    CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CatalogError::NoSuchEntry(name.to_string()))
}

/// Parses `name=value` for the given entry.
pub fn parse_param(entry_name: &str, field: Field, text: &str) -> Result<ParamValue, CatalogError> {
    let e = entry(entry_name)?;
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| CatalogError::BadParam(format!("expected `name=value`, found `{text}`")))?;
    let (k, v) = (k.trim(), v.trim());
    let spec = e.params.iter().find(|p| p.name == k).ok_or_else(|| CatalogError::UnknownParam {
        entry: e.name.to_string(),
        name: k.to_string(),
    })?;
    match spec.kind {
        ParamKind::Scalar => field
            .parse_element(v)
            .map(|x| ParamValue::scalar(k, x))
            .map_err(|err| CatalogError::BadParam(format!("{k}: {err}"))),
        ParamKind::Dimension => v
            .parse()
            .map(|n| ParamValue::dimension(k, n))
            .map_err(|_| CatalogError::BadParam(format!("{k}: `{v}` is not a dimension"))),
    }
}

struct Values<'a> {
    field: Field,
    params: &'a [ParamValue],
}

impl Values<'_> {
    fn scalar(&self, name: &str) -> FieldElement {
        match self.params.iter().find(|p| p.name == name).map(|p| &p.value) {
            Some(ParamData::Scalar(x)) => x.clone(),
            _ => unreachable!("checked by bind"),
        }
    }

    fn dimension(&self, name: &str) -> usize {
        match self.params.iter().find(|p| p.name == name).map(|p| &p.value) {
            Some(ParamData::Dimension(n)) => *n,
            _ => unreachable!("checked by bind"),
        }
    }

    fn int(&self, n: i64) -> FieldElement {
        self.field.from_i64(n)
    }
}

fn bind<'a>(e: &CatalogEntry, field: Field, params: &'a [ParamValue]) -> Result<Values<'a>, CatalogError> {
    for (k, p) in params.iter().enumerate() {
        if params[..k].iter().any(|q| q.name == p.name) {
            return Err(CatalogError::DuplicateParam(p.name.clone()));
        }
        let spec = e.params.iter().find(|s| s.name == p.name).ok_or_else(|| CatalogError::UnknownParam {
            entry: e.name.to_string(),
            name: p.name.clone(),
        })?;
        match (&p.value, spec.kind) {
            (ParamData::Scalar(x), ParamKind::Scalar) if x.field() == field => {}
            (ParamData::Scalar(x), ParamKind::Scalar) => {
                return Err(CatalogError::BadParam(format!(
                    "{} lies in {}, expected {field}",
                    p.name,
                    x.field()
                )))
            }
            (ParamData::Dimension(_), ParamKind::Dimension) => {}
            _ => return Err(CatalogError::BadParam(format!("{} has the wrong kind", p.name))),
        }
    }
    for spec in e.params {
        if !params.iter().any(|p| p.name == spec.name) {
            return Err(CatalogError::MissingParam {
                entry: e.name.to_string(),
                name: spec.name.to_string(),
            });
        }
    }
    Ok(Values { field, params })
}

fn report(description: &str, holds: bool, evidence: String) -> ConstraintReport {
    ConstraintReport {
        description: description.to_string(),
        holds,
        evidence,
    }
}

fn nonzero(v: &Values, description: &str, name: &str) -> ConstraintReport {
    let x = v.scalar(name);
    report(description, !x.is_zero(), format!("{name} = {x}"))
}

fn non_square(description: &str, label: &str, x: &FieldElement, field: Field) -> ConstraintReport {
    let evidence = match x.sqrt() {
        Some(r) => format!("{label} = {x} = ({r})^2 in {field}"),
        None => format!("{label} = {x} has no square root in {field}"),
    };
    report(description, !x.is_square(), evidence)
}

fn characteristic_avoids(description: &str, field: Field, bad: &[u64]) -> ConstraintReport {
    let ch = field.characteristic();
    report(description, !bad.contains(&ch), format!("characteristic {ch}"))
}

/// Evaluates every condition of the entry at the given parameters.
pub fn validate_params(name: &str, field: Field, params: &[ParamValue]) -> Result<Vec<ConstraintReport>, CatalogError> {
    let e = entry(name)?;
    let v = bind(e, field, params)?;
    let c = e.constraints;
    let out = match e.name {
        "abelian" => {
            let n = v.dimension("n");
            vec![report(c[0], n >= 1, format!("n = {n}"))]
        }
        "cc1_case2" => {
            let (tau, lambda, epsilon) = (v.scalar("tau"), v.scalar("lambda"), v.scalar("epsilon"));
            let s = &lambda + &epsilon;
            let disc = &(&s * &s) - &(&v.int(4) * &tau);
            vec![
                nonzero(&v, c[0], "tau"),
                non_square(c[1], "(lambda+epsilon)^2 - 4*tau", &disc, field),
            ]
        }
        "A18" => {
            let alpha = v.scalar("alpha");
            let minus_one = v.int(-1);
            vec![report(c[0], alpha != minus_one, format!("alpha = {alpha}, -1 = {minus_one}"))]
        }
        "A1_6dim" => {
            let lhs = &v.scalar("shat") * &(&v.int(-3) * &v.scalar("d"));
            let rhs = &v.scalar("rhat") * &v.scalar("c");
            let d = v.scalar("d");
            let disc = &(&v.int(9) * &(&d * &d)) - &(&v.int(4) * &(&v.scalar("c") * &v.scalar("g")));
            vec![
                nonzero(&v, c[0], "c"),
                nonzero(&v, c[1], "g"),
                nonzero(&v, c[2], "d"),
                nonzero(&v, c[3], "shat"),
                nonzero(&v, c[4], "rhat"),
                characteristic_avoids(c[5], field, &[2, 3]),
                report(c[6], lhs == rhs, format!("shat*(-3*d) = {lhs}, rhat*c = {rhs}")),
                non_square(c[7], "9*d^2 - 4*c*g", &disc, field),
            ]
        }
        "A3_6dim" => {
            let (d, dhat) = (v.scalar("d"), v.scalar("dhat"));
            let three_d = &v.int(3) * &d;
            vec![
                characteristic_avoids(c[0], field, &[2]),
                nonzero(&v, c[1], "d"),
                report(c[2], dhat == three_d, format!("dhat = {dhat}, 3*d = {three_d}")),
            ]
        }
        "table1_case1" => {
            let gamma = v.scalar("gamma");
            vec![report(c[0], gamma.is_zero(), format!("gamma = {gamma}"))]
        }
        "holmes_iii" => {
            let m = -v.scalar("gamma");
            vec![non_square(c[0], "-gamma", &m, field)]
        }
        _ => Vec::new(),
    };
    debug_assert_eq!(out.len(), c.len());
    Ok(out)
}

/// Builds the algebra after checking every condition.
pub fn instantiate(name: &str, field: Field, params: &[ParamValue]) -> Result<LeibnizAlgebra, CatalogError> {
    let reports = validate_params(name, field, params)?;
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.holds)
        .map(|r| format!("{} ({})", r.description, r.evidence))
        .collect();
    if !failed.is_empty() {
        return Err(CatalogError::ConstraintViolated(failed.join("; ")));
    }
    let e = entry(name)?;
    let a = match e.table() {
        None => {
            let n = Values { field, params }.dimension("n");
            LeibnizAlgebra::abelian(field, n).with_labels((1..=n).map(|i| format!("x{i}")))
        }
        Some(table) => {
            let assignment: Assignment = params
                .iter()
                .filter_map(|p| match &p.value {
                    ParamData::Scalar(x) => Some((p.name.clone(), x.clone())),
                    ParamData::Dimension(_) => None,
                })
                .collect();
            table
                .eval_at(&assignment, field)
                .map_err(|err| CatalogError::InternalError(format!("{name}: {err}")))?
        }
    };
    let violations = a.check_leibniz();
    if let Some(first) = violations.first() {
        return Err(CatalogError::InternalError(format!(
            "{name} violates the Leibniz identity at ({}, {}, {}) in {} places",
            first.i + 1,
            first.j + 1,
            first.k + 1,
            violations.len()
        )));
    }
    Ok(a)
}

/// Parameters that satisfy every condition of the entry in `field`, or
/// `None` when the conditions cannot be met there. Searches small values
/// in a fixed order.
pub fn sample_params(name: &str, field: Field) -> Result<Option<Vec<ParamValue>>, CatalogError> {
    let e = entry(name)?;
    let f = |n: i64| field.from_i64(n);
    let scalars = |pairs: &[(&str, i64)]| -> Vec<ParamValue> {
        pairs.iter().map(|&(k, x)| ParamValue::scalar(k, f(x))).collect()
    };
    let candidate = match e.name {
        "abelian" => Some(vec![ParamValue::dimension("n", 3)]),
        "cc1_case2" => {
            let bound = field.modulus().map_or(6, |p| p.min(12) as i64);
            let mut found = None;
            'search: for tau in 1..bound {
                for lambda in 0..bound {
                    for epsilon in 0..bound {
                        let p = scalars(&[("tau", tau), ("lambda", lambda), ("epsilon", epsilon)]);
                        if validate_params(name, field, &p)?.iter().all(|r| r.holds) {
                            found = Some(p);
                            break 'search;
                        }
                    }
                }
            }
            found
        }
        "A18" => Some(scalars(&[("alpha", 0)])),
        "A1_6dim" => {
            let bound = field.modulus().map_or(6, |p| p.min(12) as i64);
            let mut found = None;
            'search: for c in 1..bound {
                for g in 1..bound {
                    let Ok(shat) = f(-3).inv().map(|x| &x * &f(c)) else { break 'search };
                    let mut p = scalars(&[("c", c), ("g", g), ("d", 1), ("rhat", 1)]);
                    p.insert(3, ParamValue::scalar("shat", shat));
                    if validate_params(name, field, &p)?.iter().all(|r| r.holds) {
                        found = Some(p);
                        break 'search;
                    }
                }
            }
            found
        }
        "A3_6dim" => Some(scalars(&[("d", 1), ("dhat", 3)])),
        "table6_generic" => Some(scalars(&[
            ("alpha", 0),
            ("beta", 0),
            ("abar", 0),
            ("gamma", 1),
            ("c", 1),
            ("d", 3),
            ("f", 2),
            ("g", 1),
            ("dhat", -1),
            ("fhat", -4),
        ])),
        "table1_case1" => Some(scalars(&[
            ("alpha", 1),
            ("beta", 1),
            ("gamma", 0),
            ("a", 0),
            ("ahat", 0),
            ("b", 1),
            ("c", 1),
        ])),
        "holmes_iii" => {
            let bound = field.modulus().map_or(6, |p| p.min(12) as i64);
            (1..bound)
                .map(|g| scalars(&[("gamma", g)]))
                .find(|p| validate_params(name, field, p).is_ok_and(|r| r.iter().all(|c| c.holds)))
        }
        _ => Some(Vec::new()),
    };
    Ok(match candidate {
        Some(p) if validate_params(name, field, &p)?.iter().all(|r| r.holds) => Some(p),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::leibniz_constraints;
    use crate::poly::MultiPoly;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn params(name: &str, field: Field, kv: &[&str]) -> Vec<ParamValue> {
        kv.iter().map(|s| parse_param(name, field, s).unwrap()).collect()
    }

    #[test]
    fn fifteen_unique_entries() {
        let names: Vec<_> = list().iter().map(|e| e.name).collect();
        assert_eq!(names.len(), 15);
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 15);
        assert!(list().iter().all(|e| !e.source.is_empty()));
    }

    #[test]
    fn tables_match_declared_params_and_dims() {
        for e in list() {
            let Some(t) = e.table() else { continue };
            assert_eq!(Some(t.dim()), e.dim, "{}", e.name);
            for v in t.vars() {
                assert!(e.params.iter().any(|p| p.name == v), "{}: {v}", e.name);
            }
            assert!(t.labels().is_some(), "{}", e.name);
        }
    }

    #[test]
    fn samples_are_leibniz_over_small_fields() {
        for p in [3, 5, 7] {
            let field = gf(p);
            for e in list() {
                let Some(ps) = sample_params(e.name, field).unwrap() else {
                    continue;
                };
                let a = instantiate(e.name, field, &ps).unwrap();
                assert!(a.check_leibniz().is_empty(), "{} over GF({p})", e.name);
            }
        }
    }

    #[test]
    fn unsatisfiable_fields() {
        assert_eq!(sample_params("A1_6dim", gf(3)).unwrap(), None);
        assert_eq!(sample_params("A1_6dim", gf(2)).unwrap(), None);
        assert_eq!(sample_params("A3_6dim", gf(2)).unwrap(), None);
        assert_eq!(sample_params("cc1_case2", gf(2)).unwrap(), None);
        assert_eq!(sample_params("holmes_iii", gf(2)).unwrap(), None);
        assert!(sample_params("cc1_case2", Field::rationals()).unwrap().is_some());
        assert!(sample_params("nope", gf(3)).is_err());
    }

    #[test]
    fn cc1_discriminant() {
        let g3 = gf(3);
        let ok = params("cc1_case2", g3, &["tau=1", "lambda=0", "epsilon=0"]);
        assert!(instantiate("cc1_case2", g3, &ok).is_ok());
        let g5 = gf(5);
        let square = params("cc1_case2", g5, &["tau=1", "lambda=1", "epsilon=1"]);
        let r = validate_params("cc1_case2", g5, &square).unwrap();
        assert!(r[0].holds && !r[1].holds);
        assert!(r[1].evidence.contains("= 0 = (0)^2"), "{}", r[1].evidence);
        assert!(matches!(
            instantiate("cc1_case2", g5, &square),
            Err(CatalogError::ConstraintViolated(_))
        ));
        let fine = params("cc1_case2", g5, &["tau=1", "lambda=2", "epsilon=2"]);
        assert!(instantiate("cc1_case2", g5, &fine).is_ok());
    }

    #[test]
    fn a18_rejects_minus_one() {
        let g7 = gf(7);
        let bad = params("A18", g7, &["alpha=6"]);
        assert!(matches!(instantiate("A18", g7, &bad), Err(CatalogError::ConstraintViolated(_))));
        let good = params("A18", g7, &["alpha=2"]);
        assert!(instantiate("A18", g7, &good).is_ok());
    }

    #[test]
    fn holmes_iii_field_dependence() {
        let g5 = gf(5);
        let r = validate_params("holmes_iii", g5, &params("holmes_iii", g5, &["gamma=2"])).unwrap();
        assert!(r[0].holds);
        let q = Field::rationals();
        let r = validate_params("holmes_iii", q, &params("holmes_iii", q, &["gamma=-4"])).unwrap();
        assert!(!r[0].holds);
        assert!(r[0].evidence.contains("(2)^2"));
    }

    #[test]
    fn a1_6dim_needs_characteristic_at_least_5() {
        let g3 = gf(3);
        let ps = params("A1_6dim", g3, &["c=1", "g=1", "d=1", "shat=1", "rhat=1"]);
        let r = validate_params("A1_6dim", g3, &ps).unwrap();
        assert!(r.iter().any(|c| !c.holds));
        assert!(!r[5].holds);
    }

    #[test]
    fn a1_closure_is_forced_by_the_identity() {
        let e = entry("table6_generic").unwrap();
        let t = e.table().unwrap().fix(&[("alpha", 0), ("beta", 0), ("abar", 0), ("fhat", 0)]);
        let cs = leibniz_constraints(&t);
        let g = Field::prime(101).unwrap();
        let v = |s: &str| MultiPoly::parse(t.vars(), s).unwrap();
        let closure = [v("gamma + d"), v("f - 2*d"), v("dhat + 3*d")];
        let report = crate::constraints::verify_implied_relations(&t, &closure, 50, g, 3).unwrap();
        assert!(report.holds(), "{report}\n{cs:?}");
    }

    #[test]
    fn a3_closure_is_forced_by_the_identity() {
        let t = entry("A3_6dim").unwrap().table().unwrap();
        let cs = leibniz_constraints(&t);
        let strs: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
        assert_eq!(strs, ["d - 1/3*dhat"]);
    }

    #[test]
    fn table_relations_are_equivalent_to_the_identity() {
        let g = Field::prime(101).unwrap();
        let t6 = table6_reduced();
        let v = |p: &ParametricAlgebra, s: &str| MultiPoly::parse(p.vars(), s).unwrap();
        let rel6 = [v(&t6, "gamma - d + f"), v(&t6, "gamma + d + fhat"), v(&t6, "gamma - dhat - f")];
        let r = crate::constraints::verify_implied_relations(&t6, &rel6, 100, g, 0).unwrap();
        assert!(r.holds(), "{r}");
        let t1 = table1_parametric();
        let rel1 = [v(&t1, "bhat + b"), v(&t1, "chat + c"), v(&t1, "gamma")];
        let r = crate::constraints::verify_implied_relations(&t1, &rel1, 100, g, 0).unwrap();
        assert!(r.holds(), "{r}");
        let fake = [v(&t6, "gamma - d - f")];
        let r = crate::constraints::verify_implied_relations(&t6, &fake, 100, g, 0).unwrap();
        assert!(!r.sufficient());
    }

    #[test]
    fn parameter_errors() {
        let g = gf(5);
        assert!(matches!(parse_param("A18", g, "beta=1"), Err(CatalogError::UnknownParam { .. })));
        assert!(matches!(parse_param("A18", g, "alpha"), Err(CatalogError::BadParam(_))));
        assert!(matches!(parse_param("abelian", g, "n=x"), Err(CatalogError::BadParam(_))));
        assert!(matches!(instantiate("A18", g, &[]), Err(CatalogError::MissingParam { .. })));
        let twice = params("A18", g, &["alpha=1", "alpha=2"]);
        assert!(matches!(instantiate("A18", g, &twice), Err(CatalogError::DuplicateParam(_))));
        let wrong = vec![ParamValue::scalar("alpha", Field::rationals().one())];
        assert!(matches!(instantiate("A18", g, &wrong), Err(CatalogError::BadParam(_))));
        assert!(matches!(instantiate("zzz", g, &[]), Err(CatalogError::NoSuchEntry(_))));
        let zero = params("abelian", g, &["n=0"]);
        assert!(matches!(instantiate("abelian", g, &zero), Err(CatalogError::ConstraintViolated(_))));
    }

    #[test]
    fn labels_follow_the_tables() {
        let g = gf(5);
        let a = instantiate("holmes_ii", g, &[]).unwrap();
        assert_eq!(a.labels().unwrap().join(" "), "x y z a b");
        let a = instantiate("abelian", g, &params("abelian", g, &["n=2"])).unwrap();
        assert_eq!(a.labels().unwrap().join(" "), "x1 x2");
    }
}
