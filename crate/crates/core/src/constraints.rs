//! Multiplication tables with polynomial structure constants, the
//! polynomial conditions the Leibniz identity imposes on them, and a
//! sampling check that a proposed set of relations cuts out exactly the
//! same locus.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::LeibnizAlgebra;
use crate::field::{Field, FieldElement, FieldError};
use crate::linalg::{rref, Vector};
use crate::poly::MultiPoly;
use crate::random::random_element;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstraintError {
    #[error("no value for parameter `{0}`")]
    IncompleteAssignment(String),
    #[error("coefficient does not embed in the field: {0}")]
    FieldMismatch(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("relation is over variables {got:?}, expected {expected:?}")]
    VariableMismatch { got: Vec<String>, expected: Vec<String> },
}

impl From<FieldError> for ConstraintError {
    fn from(e: FieldError) -> Self {
        ConstraintError::FieldMismatch(e.to_string())
    }
}

pub type Assignment = BTreeMap<String, FieldElement>;

/// An algebra whose structure constants are polynomials in named parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricAlgebra {
    dim: usize,
    vars: Vec<String>,
    products: Vec<Vec<MultiPoly>>,
    labels: Option<Vec<String>>,
}

impl ParametricAlgebra {
    /// All products zero.
    pub fn new(dim: usize, vars: Vec<String>) -> ParametricAlgebra {
        let zero = vec![MultiPoly::zero(&vars); dim];
        ParametricAlgebra {
            dim,
            products: vec![zero; dim * dim],
            vars,
            labels: None,
        }
    }

    /// Lifts a numeric table over ℚ.
    pub fn from_algebra(a: &LeibnizAlgebra, vars: Vec<String>) -> Option<ParametricAlgebra> {
        let mut p = ParametricAlgebra::new(a.dim(), vars);
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let cell = a
                    .product(i, j)
                    .coords()
                    .iter()
                    .map(|c| c.as_rational().map(|q| MultiPoly::constant(&p.vars, q.clone())))
                    .collect::<Option<Vec<_>>>()?;
                p.products[i * a.dim() + j] = cell;
            }
        }
        p.labels = a.labels().map(<[String]>::to_vec);
        Some(p)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim, "one label per basis vector");
        self.labels = Some(labels);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Coordinates of `[e_i, e_j]`.
    pub fn product(&self, i: usize, j: usize) -> &[MultiPoly] {
        &self.products[i * self.dim + j]
    }

    pub fn set_product(&mut self, i: usize, j: usize, coords: Vec<MultiPoly>) {
        assert_eq!(coords.len(), self.dim);
        assert!(coords.iter().all(|c| c.vars() == self.vars.as_slice()));
        self.products[i * self.dim + j] = coords;
    }

    /// Substitutes every variable in `fixed`, keeping the rest as
    /// parameters.
    pub fn specialize(&self, fixed: &BTreeMap<String, MultiPoly>) -> ParametricAlgebra {
        let keep: Vec<String> = self.vars.iter().filter(|v| !fixed.contains_key(*v)).cloned().collect();
        let images: Vec<MultiPoly> = self
            .vars
            .iter()
            .map(|v| match fixed.get(v) {
                Some(p) => p.clone(),
                None => MultiPoly::var(&keep, keep.iter().position(|k| k == v).expect("kept")),
            })
            .collect();
        let substitute = |p: &MultiPoly| {
            if images.is_empty() {
                p.clone()
            } else {
                p.substitute(&images)
            }
        };
        ParametricAlgebra {
            dim: self.dim,
            products: self
                .products
                .iter()
                .map(|cell| cell.iter().map(substitute).collect())
                .collect(),
            vars: keep,
            labels: self.labels.clone(),
        }
    }

    /// Fixes variables to rational constants.
    pub fn fix(&self, values: &[(&str, i64)]) -> ParametricAlgebra {
        let keep: Vec<String> = self
            .vars
            .iter()
            .filter(|v| !values.iter().any(|(n, _)| n == v))
            .cloned()
            .collect();
        let fixed = values
            .iter()
            .map(|&(n, c)| (n.to_string(), MultiPoly::from_int(&keep, c)))
            .collect();
        self.specialize(&fixed)
    }

    fn combine(&self, coeffs: &[MultiPoly], row: impl Fn(usize) -> usize) -> Vec<MultiPoly> {
        let mut out = vec![MultiPoly::zero(&self.vars); self.dim];
        for (l, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&self.products[row(l)]) {
                if !p.is_zero() {
                    *o = o.add(&c.mul(p));
                }
            }
        }
        out
    }

    /// Symbolic residual of the Leibniz identity on `(e_i, e_j, e_k)`.
    pub fn residual(&self, i: usize, j: usize, k: usize) -> Vec<MultiPoly> {
        let n = self.dim;
        let left = self.combine(self.product(j, k), |l| i * n + l);
        let first = self.combine(self.product(i, j), |l| l * n + k);
        let second = self.combine(self.product(i, k), |l| j * n + l);
        left.iter()
            .zip(&first)
            .zip(&second)
            .map(|((a, b), c)| a.sub(b).sub(c))
            .collect()
    }

    /// Numeric algebra at a full assignment; extra keys are ignored.
    pub fn eval_at(&self, assignment: &Assignment, field: Field) -> Result<LeibnizAlgebra, ConstraintError> {
        let values = self.values(assignment, field)?;
        let products = self
            .products
            .iter()
            .map(|cell| {
                cell.iter()
                    .map(|p| p.eval(field, &values))
                    .collect::<Result<Vec<_>, _>>()
                    .map(Vector::new)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let a = LeibnizAlgebra::from_products(self.dim, field, products);
        Ok(match &self.labels {
            Some(l) => a.with_labels(l.clone()),
            None => a,
        })
    }

    fn values(&self, assignment: &Assignment, field: Field) -> Result<Vec<FieldElement>, ConstraintError> {
        self.vars
            .iter()
            .map(|v| {
                let x = assignment
                    .get(v)
                    .ok_or_else(|| ConstraintError::IncompleteAssignment(v.clone()))?;
                if x.field() != field {
                    return Err(ConstraintError::FieldMismatch(format!("value of `{v}` lies in {}", x.field())));
                }
                Ok(x.clone())
            })
            .collect()
    }
}

/// Every nonzero coordinate of every residual, made monic, deduplicated
/// and sorted.
pub fn leibniz_constraints(p: &ParametricAlgebra) -> Vec<MultiPoly> {
    let n = p.dim;
    let set: BTreeSet<MultiPoly> = (0..n * n * n)
        .into_par_iter()
        .flat_map_iter(|t| {
            let (i, j, k) = (t / (n * n), (t / n) % n, t % n);
            p.residual(i, j, k).into_iter().filter(|r| !r.is_zero()).map(|r| r.monic())
        })
        .collect();
    set.into_iter().collect()
}

/// One point of parameter space, printed as `name=value` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point(pub Assignment);

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Outcome of sampling the locus where one relation fails and the others
/// hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Necessity {
    /// Some constraint is nonzero at `witness`.
    Necessary { witness: Point, broken: MultiPoly },
    /// Every sampled violating point still satisfied all constraints.
    NotNecessary { witness: Point },
    /// No violating point could be sampled.
    Inconclusive(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationCheck {
    pub relation: MultiPoly,
    pub verdict: Necessity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationsReport {
    pub field: Field,
    pub seed: u64,
    pub trials: usize,
    pub constraint_count: usize,
    /// First sampled zero of the relations where some constraint is nonzero.
    pub sufficiency_failure: Option<(Point, MultiPoly)>,
    pub relations: Vec<RelationCheck>,
}

impl RelationsReport {
    pub fn sufficient(&self) -> bool {
        self.sufficiency_failure.is_none()
    }

    pub fn holds(&self) -> bool {
        self.sufficient()
            && self
                .relations
                .iter()
                .all(|r| matches!(r.verdict, Necessity::Necessary { .. }))
    }
}

impl fmt::Display for RelationsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "field {} seed {} trials {} constraints {}",
            self.field, self.seed, self.trials, self.constraint_count
        )?;
        match &self.sufficiency_failure {
            None => writeln!(f, "sufficient: pass")?,
            Some((pt, c)) => writeln!(f, "sufficient: FAIL at {pt}: {c} != 0")?,
        }
        for r in &self.relations {
            match &r.verdict {
                Necessity::Necessary { witness, broken } => {
                    writeln!(f, "necessary {}: pass at {witness}: {broken} != 0", r.relation)?
                }
                Necessity::NotNecessary { witness } => {
                    writeln!(f, "necessary {}: FAIL, identity holds at {witness}", r.relation)?
                }
                Necessity::Inconclusive(why) => writeln!(f, "necessary {}: INCONCLUSIVE ({why})", r.relation)?,
            }
        }
        write!(f, "verdict: {}", if self.holds() { "pass" } else { "fail" })
    }
}

/// Checks, by seeded sampling over `field`, that `relations` are
/// equivalent to the Leibniz constraints of `p`: random zeros of the
/// relations satisfy every constraint, and for each relation some point
/// violating only that relation breaks a constraint.
pub fn verify_implied_relations(
    p: &ParametricAlgebra,
    relations: &[MultiPoly],
    trials: usize,
    field: Field,
    seed: u64,
) -> Result<RelationsReport, ConstraintError> {
    for r in relations {
        if r.vars() != p.vars() {
            return Err(ConstraintError::VariableMismatch {
                got: r.vars().to_vec(),
                expected: p.vars().to_vec(),
            });
        }
    }
    let constraints = leibniz_constraints(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = p.vars();

    let mut sufficiency_failure = None;
    for _ in 0..trials {
        let Some(values) = sample_zero(vars, relations, None, field, &mut rng, trials)? else {
            return Err(ConstraintError::Inconclusive("could not sample a zero of the relations".into()));
        };
        if let Some(c) = first_nonzero(&constraints, field, &values)? {
            sufficiency_failure = Some((point(vars, &values), c));
            break;
        }
    }

    let mut checks = Vec::with_capacity(relations.len());
    for (idx, r) in relations.iter().enumerate() {
        let others: Vec<MultiPoly> = relations
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, q)| q.clone())
            .collect();
        let mut verdict = Necessity::Inconclusive(format!("no sampled point violates {r} alone"));
        for _ in 0..trials {
            let Some(values) = sample_zero(vars, &others, Some(r), field, &mut rng, trials)? else {
                break;
            };
            match first_nonzero(&constraints, field, &values)? {
                Some(c) => {
                    verdict = Necessity::Necessary {
                        witness: point(vars, &values),
                        broken: c,
                    };
                    break;
                }
                None => {
                    verdict = Necessity::NotNecessary {
                        witness: point(vars, &values),
                    }
                }
            }
        }
        checks.push(RelationCheck {
            relation: r.clone(),
            verdict,
        });
    }

    Ok(RelationsReport {
        field,
        seed,
        trials,
        constraint_count: constraints.len(),
        sufficiency_failure,
        relations: checks,
    })
}

fn point(vars: &[String], values: &[FieldElement]) -> Point {
    Point(vars.iter().cloned().zip(values.iter().cloned()).collect())
}

fn first_nonzero(
    polys: &[MultiPoly],
    field: Field,
    values: &[FieldElement],
) -> Result<Option<MultiPoly>, ConstraintError> {
    for c in polys {
        if !c.eval(field, values)?.is_zero() {
            return Ok(Some(c.clone()));
        }
    }
    Ok(None)
}

/// A random zero of `relations` at which `avoid` (if given) is nonzero.
/// Affine-linear systems are solved by elimination; otherwise each
/// relation must be linear in a variable of its own and the system is
/// solved by back-substitution. Gives up after `attempts` draws.
fn sample_zero(
    vars: &[String],
    relations: &[MultiPoly],
    avoid: Option<&MultiPoly>,
    field: Field,
    rng: &mut ChaCha8Rng,
    attempts: usize,
) -> Result<Option<Vec<FieldElement>>, ConstraintError> {
    let linear: Option<Vec<_>> = relations.iter().map(MultiPoly::linear_parts).collect();
    for _ in 0..attempts.max(1) {
        let values = match &linear {
            Some(rows) => solve_linear(vars.len(), rows, field, rng)?,
            None => back_substitute(vars, relations, field, rng)?,
        };
        let Some(values) = values else {
            return Ok(None);
        };
        if let Some(a) = avoid {
            if a.eval(field, &values)?.is_zero() {
                continue;
            }
        }
        return Ok(Some(values));
    }
    Ok(None)
}

type LinearRow = (Vec<num_rational::BigRational>, num_rational::BigRational);

fn solve_linear(
    n: usize,
    rows: &[LinearRow],
    field: Field,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<FieldElement>>, ConstraintError> {
    let mut m = Vec::with_capacity(rows.len());
    for (coeffs, constant) in rows {
        let mut c = coeffs
            .iter()
            .map(|q| field.from_rational(q))
            .collect::<Result<Vec<_>, _>>()?;
        c.push(-field.from_rational(constant)?);
        m.push(Vector::new(c));
    }
    let pivots = rref(&mut m, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut values: Vec<FieldElement> = (0..n).map(|_| random_element(field, rng)).collect();
    for (row, &pc) in m.iter().zip(&pivots) {
        let mut v = row[n].clone();
        for (col, x) in values.iter().enumerate() {
            if col != pc && !pivots.contains(&col) {
                v -= &(&row[col] * x);
            }
        }
        values[pc] = v;
    }
    Ok(Some(values))
}

/// Splits `p` as `a * vars[v] + b` when `p` has degree at most one in
/// `vars[v]`.
fn linear_in(p: &MultiPoly, v: usize) -> Option<(MultiPoly, MultiPoly)> {
    let vars = p.vars();
    let mut a = MultiPoly::zero(vars);
    let mut b = MultiPoly::zero(vars);
    for (m, c) in p.terms() {
        match m.0[v] {
            0 => b = b.add(&monomial(vars, &m.0, c)),
            1 => {
                let mut e = m.0.clone();
                e[v] = 0;
                a = a.add(&monomial(vars, &e, c));
            }
            _ => return None,
        }
    }
    (!a.is_zero()).then_some((a, b))
}

fn monomial(vars: &[String], e: &[u32], c: &num_rational::BigRational) -> MultiPoly {
    let mut out = MultiPoly::constant(vars, c.clone());
    for (i, &k) in e.iter().enumerate() {
        for _ in 0..k {
            out = out.mul(&MultiPoly::var(vars, i));
        }
    }
    out
}

fn back_substitute(
    vars: &[String],
    relations: &[MultiPoly],
    field: Field,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<FieldElement>>, ConstraintError> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut splits = Vec::new();
    for r in relations {
        let Some((v, split)) = (0..vars.len())
            .rev()
            .filter(|v| !pivots.contains(v))
            .find_map(|v| linear_in(r, v).map(|s| (v, s)))
        else {
            return Err(ConstraintError::Inconclusive(format!("{r} is not linear in a free variable")));
        };
        pivots.push(v);
        splits.push(split);
    }
    let mut values: Vec<Option<FieldElement>> = (0..vars.len())
        .map(|v| (!pivots.contains(&v)).then(|| random_element(field, rng)))
        .collect();
    let mut pending: Vec<usize> = (0..relations.len()).collect();
    while !pending.is_empty() {
        let before = pending.len();
        let mut still = Vec::new();
        for idx in pending {
            let (a, b) = &splits[idx];
            let ready = a.support().iter().chain(b.support().iter()).all(|&u| values[u].is_some());
            if !ready {
                still.push(idx);
                continue;
            }
            let known: Vec<FieldElement> = values.iter().map(|x| x.clone().unwrap_or_else(|| field.zero())).collect();
            let av = a.eval(field, &known)?;
            if av.is_zero() {
                return Ok(None);
            }
            let bv = b.eval(field, &known)?;
            values[pivots[idx]] = Some((-bv).checked_div(&av)?);
        }
        if still.len() == before {
            return Err(ConstraintError::Inconclusive("relations are not triangular".into()));
        }
        pending = still;
    }
    Ok(Some(values.into_iter().map(|v| v.expect("all solved")).collect()))
}

/// Degree of the highest-degree constraint.
pub fn max_degree(constraints: &[MultiPoly]) -> u32 {
    constraints.iter().map(MultiPoly::degree).max().unwrap_or(0)
}
