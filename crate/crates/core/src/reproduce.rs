//! The batch of checkable claims behind `leibalg reproduce`, producing a
//! deterministic plain-text report.

use std::fmt::Write as _;
use std::time::Instant;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::LeibnizAlgebra;
use crate::catalog::{self, ParamData, ParamValue};
use crate::constraints::{verify_implied_relations, ParametricAlgebra};
use crate::field::{Field, FieldElement};
use crate::iso::{is_isomorphic, IsoVerdict, NonIsoWitness};
use crate::linalg::{enumerate_subspaces, Subspace, Vector};
use crate::maximal::{check_p1_seeded, check_p2, enumerate_maximal, frattini_by_intersection};
use crate::poly::MultiPoly;
use crate::random::random_nilpotent;
use crate::series::{is_cyclic, nilpotency_data, upper_central_term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

impl Verdict {
    fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Skipped => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportEntry {
    pub claim_id: String,
    /// Which statement the claim checks.
    pub context: String,
    pub verdict: Verdict,
    pub evidence: String,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone)]
pub struct ReproduceConfig {
    pub fields: Vec<Field>,
    pub seed: u64,
    /// Catalog entry whose table is deliberately broken, as a negative
    /// control.
    pub corrupt: Option<String>,
}

impl Default for ReproduceConfig {
    fn default() -> Self {
        ReproduceConfig {
            fields: [3, 5, 7].iter().map(|&p| Field::prime(p).expect("prime")).collect(),
            seed: 0,
            corrupt: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub fields: Vec<Field>,
    pub seed: u64,
    pub entries: Vec<ReportEntry>,
}

impl Report {
    pub fn count(&self, v: Verdict) -> usize {
        self.entries.iter().filter(|e| e.verdict == v).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Verdict::Fail) == 0
    }

    pub fn get(&self, claim_id: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.claim_id == claim_id)
    }

    /// One line per claim and a summary; timings only when asked for, so
    /// the default output is reproducible byte for byte.
    pub fn render(&self, timings: bool) -> String {
        let mut out = String::new();
        let fields: Vec<String> = self.fields.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "leibalg reproduce report");
        let _ = writeln!(out, "fields {} seed {}", fields.join(","), self.seed);
        for e in &self.entries {
            let _ = write!(out, "{} {} | {} | {}", e.verdict.label(), e.claim_id, e.context, e.evidence);
            if timings {
                let _ = write!(out, " | {} ms", e.elapsed_ms);
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "summary: {} pass, {} fail, {} skipped",
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Skipped)
        );
        out
    }
}

enum Outcome {
    Pass(String),
    Fail(String),
    Skipped(String),
}

fn expect(ok: bool, evidence: String) -> Outcome {
    if ok {
        Outcome::Pass(evidence)
    } else {
        Outcome::Fail(evidence)
    }
}

type Run = Box<dyn Fn(&Ctx) -> Result<Outcome, String> + Send + Sync>;

struct Claim {
    id: String,
    context: &'static str,
    run: Run,
}

fn claim(id: impl Into<String>, context: &'static str, run: impl Fn(&Ctx) -> Result<Outcome, String> + Send + Sync + 'static) -> Claim {
    Claim {
        id: id.into(),
        context,
        run: Box::new(run),
    }
}

struct Ctx {
    seed: u64,
    corrupt: Option<String>,
}

fn gf(p: u64) -> Field {
    Field::prime(p).expect("prime")
}

fn field_tag(f: Field) -> String {
    match f.modulus() {
        Some(p) => format!("gf{p}"),
        None => "q".to_string(),
    }
}

/// Adds `e_k` to the first product `[e_i, e_j]` (in lexicographic order of
/// `(i, j, k)`) for which this breaks the Leibniz identity.
pub fn corrupt(a: &LeibnizAlgebra) -> LeibnizAlgebra {
    let n = a.dim();
    let field = a.field();
    let perturbed = |s: usize, k: usize| {
        let entries: Vec<(usize, usize, Vector)> = (0..n * n)
            .map(|t| {
                let v = a.product(t / n, t % n).clone();
                let v = if t == s { v.add(&Vector::unit(field, n, k)) } else { v };
                (t / n, t % n, v)
            })
            .collect();
        let b = LeibnizAlgebra::from_table(n, field, &entries).expect("same shape");
        match a.labels() {
            Some(l) => b.with_labels(l.to_vec()),
            None => b,
        }
    };
    (0..n * n)
        .flat_map(|s| (0..n).map(move |k| (s, k)))
        .map(|(s, k)| perturbed(s, k))
        .find(|b| !b.is_leibniz())
        .unwrap_or_else(|| a.clone())
}

impl Ctx {
    fn finish(&self, name: &str, a: LeibnizAlgebra) -> LeibnizAlgebra {
        if self.corrupt.as_deref() == Some(name) {
            corrupt(&a)
        } else {
            a
        }
    }

    fn make(&self, name: &str, field: Field, kv: &[(&str, i64)]) -> Result<LeibnizAlgebra, String> {
        let params: Vec<ParamValue> = kv.iter().map(|&(k, v)| ParamValue::scalar(k, field.from_i64(v))).collect();
        let a = catalog::instantiate(name, field, &params).map_err(|e| e.to_string())?;
        Ok(self.finish(name, a))
    }

    fn sample(&self, name: &str, field: Field) -> Result<Option<(String, LeibnizAlgebra)>, String> {
        let Some(params) = catalog::sample_params(name, field).map_err(|e| e.to_string())? else {
            return Ok(None);
        };
        let a = catalog::instantiate(name, field, &params).map_err(|e| e.to_string())?;
        let shown: Vec<String> = params.iter().map(ToString::to_string).collect();
        Ok(Some((shown.join(" "), self.finish(name, a))))
    }
}

fn num(x: Option<usize>) -> String {
    x.map_or_else(|| "undefined".into(), |v| v.to_string())
}

fn show_params(p: &str) -> String {
    if p.is_empty() {
        "no parameters".into()
    } else {
        p.to_string()
    }
}

/// `r^2 = s` with `t` central.
pub fn reference_r2s(field: Field) -> LeibnizAlgebra {
    LeibnizAlgebra::from_sparse(3, field, &[(0, 0, &[(1, 1)])])
        .expect("valid table")
        .with_labels(["r", "s", "t"])
}

/// The 6-dimensional table of the second final case, with
/// `gamma = f`, `d = 2f`, `fhat = -3f` and `dhat = 0`.
pub fn a2_table() -> ParametricAlgebra {
    crate::format::parse_parametric(
        "leibalg v1\ndim 6\nbasis t u w x y z\nparams c g f\n\
         [1,2] = 1*3\n[2,1] = -1*3\n[1,3] = 1*4\n[3,1] = -1*4\n[2,3] = 1*5\n[3,2] = -1*5\n\
         [3,3] = f*6\n[1,4] = c*6\n[4,1] = -c*6\n[1,5] = 2*f*6\n\
         [2,4] = f*6\n[4,2] = -3*f*6\n[2,5] = g*6\n[5,2] = -g*6\n",
    )
    .expect("table parses")
    .0
}

fn leibniz_claims(fields: &[Field]) -> Vec<Claim> {
    let mut out = Vec::new();
    for e in catalog::list() {
        for &f in fields {
            let name = e.name;
            out.push(claim(
                format!("identity.{name}.{}", field_tag(f)),
                "every catalog entry satisfies the Leibniz identity",
                move |ctx| {
                    let Some((params, a)) = ctx.sample(name, f)? else {
                        return Ok(Outcome::Skipped(format!("no parameters satisfy the conditions in {f}")));
                    };
                    let v = a.check_leibniz();
                    let n = a.dim();
                    Ok(expect(
                        v.is_empty(),
                        format!("{}: {} violations over {} triples", show_params(&params), v.len(), n * n * n),
                    ))
                },
            ));
        }
    }
    out
}

fn cyclic_claims(fields: &[Field]) -> Vec<Claim> {
    let mut out = vec![claim(
        "cyclic_example4.series",
        "cyclic 4-dimensional example: Z = span{x4}, Z2 = span{x3,x4}, class 4, coclass 0",
        |ctx| {
            let a = ctx.make("cyclic_example4", Field::rationals(), &[])?;
            let f = a.field();
            let e = |i| a.basis_vector(i);
            let z1 = upper_central_term(&a, 1);
            let z2 = upper_central_term(&a, 2);
            let prof = nilpotency_data(&a);
            let ok = a.center() == Subspace::span(f, 4, [e(3)])
                && z1 == a.center()
                && z2 == Subspace::span(f, 4, [e(2), e(3)])
                && prof.class == Some(4)
                && prof.coclass == Some(0);
            Ok(expect(
                ok,
                format!(
                    "Z = {}, Z2 = {}, class {}, coclass {}",
                    a.center(),
                    z2,
                    num(prof.class),
                    num(prof.coclass)
                ),
            ))
        },
    )];
    for &f in fields {
        out.push(claim(
            format!("cyclic_example4.p1.{}", field_tag(f)),
            "a cyclic algebra has a single maximal subalgebra, so P1 holds",
            move |ctx| {
                let a = ctx.make("cyclic_example4", f, &[])?;
                let r = check_p1_seeded(&a, ctx.seed).map_err(|e| e.to_string())?;
                Ok(expect(r.holds && r.maximal_count == 1, r.to_string()))
            },
        ));
    }
    out
}

fn cc1_claims() -> Vec<Claim> {
    let mut out = Vec::new();
    for (p, lambda) in [(3u64, 0i64), (5, 1)] {
        out.push(claim(
            format!("cc1_case2.p1.gf{p}"),
            "coclass 1: non-square discriminant gives P1",
            move |ctx| {
                let f = gf(p);
                let a = ctx.make("cc1_case2", f, &[("tau", 1), ("lambda", lambda), ("epsilon", 0)])?;
                let prof = nilpotency_data(&a);
                let r = check_p1_seeded(&a, ctx.seed).map_err(|e| e.to_string())?;
                let expected = (p * p - 1) / (p - 1);
                let ok = r.holds
                    && r.maximal_count as u64 == expected
                    && prof.class == Some(2)
                    && prof.coclass == Some(1)
                    && a.center().dim() == 1;
                Ok(expect(
                    ok,
                    format!(
                        "tau=1 lambda={lambda} epsilon=0: {r} (expected {expected}), class {}, coclass {}, dim Z {}",
                        num(prof.class),
                        num(prof.coclass),
                        a.center().dim()
                    ),
                ))
            },
        ));
    }
    out.push(claim(
        "cc1_case2.square_discriminant.gf5",
        "coclass 1: a square discriminant is rejected and the raw table fails P1",
        |ctx| {
            let f = gf(5);
            let params: Vec<ParamValue> = [("tau", 1), ("lambda", 1), ("epsilon", 1)]
                .iter()
                .map(|&(k, v)| ParamValue::scalar(k, f.from_i64(v)))
                .collect();
            let reports = catalog::validate_params("cc1_case2", f, &params).map_err(|e| e.to_string())?;
            let rejected = reports.iter().any(|r| !r.holds);
            let raw = LeibnizAlgebra::from_sparse(
                3,
                f,
                &[(0, 0, &[(2, 1)]), (1, 1, &[(2, 1)]), (0, 1, &[(2, 1)]), (1, 0, &[(2, 1)])],
            )
            .map_err(|e| e.to_string())?;
            let raw = ctx.finish("cc1_case2", raw);
            let r = check_p1_seeded(&raw, ctx.seed).map_err(|e| e.to_string())?;
            let failing: Vec<String> = reports.iter().filter(|r| !r.holds).map(|r| r.evidence.clone()).collect();
            Ok(expect(
                rejected && !r.holds && r.witness.is_some(),
                format!("rejected: {}; raw table: {r}", failing.join("; ")),
            ))
        },
    ));
    out
}

fn all_maximals_match_reference(a: &LeibnizAlgebra) -> Result<(bool, String), String> {
    let reference = reference_r2s(a.field());
    let ms = enumerate_maximal(a).map_err(|e| e.to_string())?;
    for m in &ms {
        match is_isomorphic(&m.induced, &reference).map_err(|e| e.to_string())? {
            IsoVerdict::Yes(map) if m.induced.is_isomorphism_onto(&reference, &map.images) => {}
            other => {
                return Ok((false, format!("M{} is not r^2=s: {other:?}", m.tag_string())));
            }
        }
    }
    Ok((true, format!("all {} maximals map onto r^2=s", ms.len())))
}

fn cc2_dim4_claims() -> Vec<Claim> {
    let mut out = Vec::new();
    for p in [3u64, 5] {
        let mut cases: Vec<(String, &'static str, Option<i64>)> = vec![("cc2_split4".into(), "cc2_split4", None)];
        for alpha in 0..3 {
            cases.push((format!("A18.alpha{alpha}"), "A18", Some(alpha)));
        }
        cases.push(("A19".into(), "A19", None));
        for (id, name, alpha) in cases {
            out.push(claim(
                format!("cc2.{id}.gf{p}"),
                "coclass 2, dimension 4: P1 holds and every maximal is r^2=s",
                move |ctx| {
                    let f = gf(p);
                    if let Some(al) = alpha {
                        if f.from_i64(al) == f.from_i64(-1) {
                            return Ok(Outcome::Skipped(format!("alpha={al} is -1 in {f}")));
                        }
                    }
                    let kv: Vec<(&str, i64)> = alpha.map(|al| ("alpha", al)).into_iter().collect();
                    let a = ctx.make(name, f, &kv)?;
                    let prof = nilpotency_data(&a);
                    let r = check_p1_seeded(&a, ctx.seed).map_err(|e| e.to_string())?;
                    let mut ok = r.holds && prof.coclass == Some(2) && a.dim() == 4;
                    let mut evidence = format!("{r}, coclass {}", num(prof.coclass));
                    if name != "cc2_split4" {
                        let (matched, why) = all_maximals_match_reference(&a)?;
                        ok &= matched;
                        evidence = format!("{evidence}; {why}");
                    }
                    Ok(expect(ok, evidence))
                },
            ));
        }
    }
    out
}

fn scalar_of(params: &[ParamValue], name: &str) -> Result<FieldElement, String> {
    params
        .iter()
        .find_map(|v| match (&v.value, v.name == name) {
            (ParamData::Scalar(x), true) => Some(x.clone()),
            _ => None,
        })
        .ok_or_else(|| format!("no parameter {name}"))
}

fn sampled(ctx: &Ctx, name: &str, f: Field) -> Result<(Vec<ParamValue>, LeibnizAlgebra), String> {
    let params = catalog::sample_params(name, f)
        .map_err(|e| e.to_string())?
        .ok_or_else(|| format!("no admissible parameters for {name} in {f}"))?;
    let a = catalog::instantiate(name, f, &params).map_err(|e| e.to_string())?;
    Ok((params, ctx.finish(name, a)))
}

fn shown(params: &[ParamValue]) -> String {
    params.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn cc2_dim6_claims() -> Vec<Claim> {
    let mut out = Vec::new();
    let six = |p: u64, name: &'static str| {
        claim(
            format!("cc2.{name}.gf{p}"),
            "coclass 2, dimension 6: P1 holds, coclass 2, dim Z2 = 3",
            move |ctx| {
                let (params, a) = sampled(ctx, name, gf(p))?;
                let prof = nilpotency_data(&a);
                let z2 = upper_central_term(&a, 2).dim();
                let r = check_p1_seeded(&a, ctx.seed).map_err(|e| e.to_string())?;
                Ok(expect(
                    r.holds && prof.coclass == Some(2) && z2 == 3,
                    format!("{}: {r}, coclass {}, dim Z2 {z2}", shown(&params), num(prof.coclass)),
                ))
            },
        )
    };
    out.push(six(5, "A1_6dim"));
    out.push(six(7, "A1_6dim"));
    out.push(six(5, "A3_6dim"));
    out.push(claim(
        "cc2.A1_6dim.square_discriminant.gf5",
        "A1_6dim with 9d^2 - 4cg a square: rejected, and the table fails P1",
        |ctx| {
            let f = gf(5);
            let kv = [("c", -3), ("g", 1), ("d", 1), ("shat", 1), ("rhat", 1)];
            let params: Vec<ParamValue> = kv.iter().map(|&(k, v)| ParamValue::scalar(k, f.from_i64(v))).collect();
            let reports = catalog::validate_params("A1_6dim", f, &params).map_err(|e| e.to_string())?;
            let failing: Vec<String> = reports.iter().filter(|r| !r.holds).map(|r| r.evidence.clone()).collect();
            let table = catalog::entry("A1_6dim").map_err(|e| e.to_string())?.table().ok_or("no table")?;
            let assignment = kv[..3].iter().map(|&(k, v)| (k.to_string(), f.from_i64(v))).collect();
            let raw = table.eval_at(&assignment, f).map_err(|e| e.to_string())?;
            let raw = ctx.finish("A1_6dim", raw);
            let r = check_p1_seeded(&raw, ctx.seed).map_err(|e| e.to_string())?;
            Ok(expect(
                failing.len() == 1 && !r.holds,
                format!("c=-3 g=1 d=1 rejected: {}; raw table: {r}", failing.join("; ")),
            ))
        },
    ));
    for p in [5u64, 7] {
        out.push(claim(
            format!("cc2.A2_iso_A1.gf{p}"),
            "the second final 6-dimensional table is isomorphic to the first",
            move |ctx| {
                let f = gf(p);
                let (params, a1) = sampled(ctx, "A1_6dim", f)?;
                let (c, g, d) = (scalar_of(&params, "c")?, scalar_of(&params, "g")?, scalar_of(&params, "d")?);
                let images = [("c", -&g), ("g", -&c), ("f", -&d)];
                let assignment = images.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
                let a2 = a2_table().eval_at(&assignment, f).map_err(|e| e.to_string())?;
                if !a2.is_leibniz() {
                    return Ok(Outcome::Fail("A2 instance violates the Leibniz identity".into()));
                }
                let a2_params = images.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ");
                match is_isomorphic(&a2, &a1).map_err(|e| e.to_string())? {
                    IsoVerdict::Yes(map) => Ok(expect(
                        a2.is_isomorphism_onto(&a1, &map.images),
                        format!(
                            "{a2_params} maps onto A1_6dim({}): images {}",
                            shown(&params),
                            show_map(&map.images)
                        ),
                    )),
                    other => Ok(Outcome::Fail(format!("{other:?}"))),
                }
            },
        ));
    }
    out
}

fn show_map(images: &[Vector]) -> String {
    let parts: Vec<String> = images.iter().map(ToString::to_string).collect();
    parts.join(" ")
}

fn counterexample_claims(fields: &[Field]) -> Vec<Claim> {
    let mut out = Vec::new();
    for &f in fields {
        out.push(claim(
            format!("cex_fourdim_A1.p2.{}", field_tag(f)),
            "4-dimensional counterexample: one maximal is abelian, another is not, so P2 fails",
            move |ctx| {
                let a = ctx.make("cex_fourdim_A1", f, &[])?;
                let r = check_p2(&a).map_err(|e| e.to_string())?;
                let ok = !r.holds && r.witness.as_ref().is_some_and(|w| w.abelian.0 != w.abelian.1);
                Ok(expect(ok, r.to_string()))
            },
        ));
        out.push(claim(
            format!("cex_A8.p1.{}", field_tag(f)),
            "A8: maximals differ in dim Leib (1 vs 0), so P1 fails",
            move |ctx| {
                let a = ctx.make("cex_A8", f, &[])?;
                let r = check_p1_seeded(&a, ctx.seed).map_err(|e| e.to_string())?;
                let ok = !r.holds
                    && r.witness.as_ref().is_some_and(|w| {
                        matches!(&w.witness, NonIsoWitness::Invariant(d)
                            if d.invariant == "leib_dim" && d.left == "1" && d.right == "0")
                    });
                Ok(expect(ok, r.to_string()))
            },
        ));
    }
    out
}

fn relations_claims() -> Vec<Claim> {
    let run = |table: fn() -> ParametricAlgebra, rels: &'static [&'static str], expect_hold: bool| {
        move |ctx: &Ctx| -> Result<Outcome, String> {
            let t = table();
            let rs = rels
                .iter()
                .map(|s| MultiPoly::parse(t.vars(), s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            let r = verify_implied_relations(&t, &rs, 100, gf(101), ctx.seed).map_err(|e| e.to_string())?;
            let summary = r.to_string().replace('\n', "; ");
            Ok(if expect_hold {
                expect(r.holds(), summary)
            } else {
                expect(!r.sufficient(), summary)
            })
        }
    };
    vec![
        claim(
            "relations.table6",
            "Leibniz identity on the updated 6-dimensional table: gamma = d-f = -d-fhat = dhat+f",
            run(catalog::table6_reduced, &["gamma - d + f", "gamma + d + fhat", "gamma - dhat - f"], true),
        ),
        claim(
            "relations.table1",
            "Leibniz identity on the 4-dimensional coclass-1 table: bhat = -b, chat = -c, gamma = 0",
            run(catalog::table1_parametric, &["bhat + b", "chat + c", "gamma"], true),
        ),
        claim(
            "relations.fake_rejected",
            "a wrong relation gamma = d+f is caught by sampling",
            run(catalog::table6_reduced, &["gamma - d - f"], false),
        ),
    ]
}

/// The random algebras of the structural suite: 120 over each of GF(2)
/// and GF(3), dimensions cycling through 1..=5.
pub fn random_suite(seed: u64) -> Vec<LeibnizAlgebra> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(240);
    for p in [2, 3] {
        for k in 0..120 {
            out.push(random_nilpotent(gf(p), 1 + k % 5, &mut rng));
        }
    }
    out
}

fn strict_steps(dims: &[usize]) -> usize {
    dims.windows(2).filter(|w| w[0] != w[1]).count()
}

type Property = fn(&LeibnizAlgebra) -> Result<Option<String>, String>;

fn series_lengths(a: &LeibnizAlgebra) -> Result<Option<String>, String> {
    let p = nilpotency_data(a);
    let (l, u) = (strict_steps(&p.lower_dims), strict_steps(&p.upper_dims));
    Ok((l != u || Some(l) != p.class).then(|| format!("lower {:?} upper {:?}", p.lower_dims, p.upper_dims)))
}

fn frattini_agrees(a: &LeibnizAlgebra) -> Result<Option<String>, String> {
    let phi = crate::series::frattini(a).map_err(|e| e.to_string())?;
    let cap = frattini_by_intersection(a).map_err(|e| e.to_string())?;
    Ok((phi != a.derived() || cap != phi).then(|| format!("A^2 {} vs intersection {}", phi, cap)))
}

fn upper_term_in_frattini(a: &LeibnizAlgebra) -> Result<Option<String>, String> {
    if !check_p2(a).map_err(|e| e.to_string())?.holds {
        return Ok(None);
    }
    let c = nilpotency_data(a).class.expect("nilpotent");
    if c == 0 {
        return Ok(None);
    }
    let z = upper_central_term(a, c - 1);
    let phi = a.derived();
    Ok((z != phi).then(|| format!("Z_{} = {} but A^2 = {}", c - 1, z, phi)))
}

fn cyclic_criterion(a: &LeibnizAlgebra) -> Result<Option<String>, String> {
    let c = is_cyclic(a).map_err(|e| e.to_string())?;
    let by_codim = a.dim() <= 1 || a.derived().codim() == 1;
    let generates = match &c.generator {
        Some(g) => a.generated_subalgebra(std::slice::from_ref(g)).is_full(),
        None => true,
    };
    Ok((c.cyclic != by_codim || (c.cyclic && !generates)).then(|| format!("cyclic {} vs codim {}", c.cyclic, a.derived().codim())))
}

fn central_quotients(a: &LeibnizAlgebra) -> Result<Option<String>, String> {
    let z = a.center();
    let cc = nilpotency_data(a).coclass.expect("nilpotent");
    for k in 2..=z.dim() {
        for s in enumerate_subspaces(a.field(), z.dim(), k) {
            let vectors = s.basis().iter().map(|c| {
                let mut v = Vector::zero(a.field(), a.dim());
                for (coef, b) in c.coords().iter().zip(z.basis()) {
                    v.add_scaled(coef, b);
                }
                v
            });
            let n = a.span(vectors);
            let q = a.quotient(&n).map_err(|e| e.to_string())?;
            let qc = nilpotency_data(&q.algebra).coclass.expect("quotient of nilpotent");
            if qc + 1 > cc {
                return Ok(Some(format!("N = {n}: coclass {qc} vs {cc}")));
            }
        }
    }
    Ok(None)
}

fn codim1_split(a: &LeibnizAlgebra) -> Result<Option<String>, String> {
    let n = a.dim();
    if n == 0 || a.center().dim() + 1 != n {
        return Ok(None);
    }
    let (i, j) = a.split_codim1_center().map_err(|e| e.to_string())?;
    let ok = i.dim() == 2
        && i.dim() + j.dim() == n
        && i.sum(&j).is_full()
        && i.intersection(&j).is_zero()
        && a.is_ideal(&i)
        && a.is_ideal(&j)
        && a.span_products(&i, &j).is_zero()
        && a.span_products(&j, &i).is_zero();
    Ok((!ok).then(|| format!("I = {i}, J = {j}")))
}

fn structure_claims() -> Vec<Claim> {
    let props: [(&str, &'static str, Property); 6] = [
        ("series_lengths", "upper and lower central series have the same number of strict steps", series_lengths),
        ("frattini", "phi(A) = A^2 = intersection of the maximal subalgebras", frattini_agrees),
        ("upper_term_p2", "with P2, Z_{c-1} = phi(A)", upper_term_in_frattini),
        ("cyclic", "cyclic iff A^2 has codimension 1, with a generating witness", cyclic_criterion),
        ("central_quotients", "central ideals of dimension > 1 lower the coclass", central_quotients),
        ("codim1_split", "a center of codimension 1 splits A as span{a, a^2} + J", codim1_split),
    ];
    props
        .into_iter()
        .map(|(id, context, prop)| {
            claim(format!("structure.{id}"), context, move |ctx| {
                let suite = random_suite(ctx.seed);
                let results: Vec<Result<Option<String>, String>> = suite.par_iter().map(prop).collect();
                let mut applicable = 0;
                for (k, r) in results.into_iter().enumerate() {
                    match r? {
                        Some(why) => return Ok(Outcome::Fail(format!("algebra #{k}: {why}"))),
                        None => applicable += 1,
                    }
                }
                Ok(Outcome::Pass(format!("{applicable} random algebras over GF(2), GF(3), dim <= 5")))
            })
        })
        .collect()
}

fn holmes_claims() -> Vec<Claim> {
    vec![claim(
        "holmes_iii.field_dependence",
        "holmes_iii needs -gamma to be a non-square, impossible over a closed field",
        |ctx| {
            let g5 = gf(5);
            let a = ctx.make("holmes_iii", g5, &[("gamma", 2)]);
            let q = Field::rationals();
            let mut rejected = 0;
            let fractions = [(1, 1), (2, 1), (3, 2), (1, 2), (9, 4), (5, 3), (7, 1)];
            for (n, d) in fractions {
                let r = BigRational::new(n.into(), d.into());
                let gamma = q.from_rational(&(-(&r * &r))).map_err(|e| e.to_string())?;
                let reports = catalog::validate_params("holmes_iii", q, &[ParamValue::scalar("gamma", gamma)])
                    .map_err(|e| e.to_string())?;
                if reports.iter().any(|c| !c.holds) {
                    rejected += 1;
                }
            }
            let lie = a.as_ref().is_ok_and(|a| a.is_lie());
            Ok(expect(
                a.is_ok() && lie && rejected == fractions.len(),
                format!(
                    "GF(5), gamma=2: {}; Q: {rejected}/{} values gamma = -q^2 rejected",
                    if a.is_ok() { "instantiated" } else { "rejected" },
                    fractions.len()
                ),
            ))
        },
    )]
}

fn catalog_claims(fields: &[Field]) -> Vec<Claim> {
    let fields = fields.to_vec();
    let fields2 = fields.clone();
    vec![
        claim(
            "catalog.maximal_counts",
            "(p^d - 1)/(p - 1) maximals, each containing A^2, meeting in A^2",
            move |ctx| {
                let mut checked = 0;
                for e in catalog::list() {
                    for &f in &fields {
                        let Some((_, a)) = ctx.sample(e.name, f)? else { continue };
                        if !crate::series::is_nilpotent(&a) {
                            return Ok(Outcome::Fail(format!("{} over {f} is not nilpotent", e.name)));
                        }
                        let p = f.modulus().expect("finite");
                        let d = a.derived().codim() as u32;
                        let ms = enumerate_maximal(&a).map_err(|err| err.to_string())?;
                        let expected = (p.pow(d) - 1) / (p - 1);
                        let contains = ms.iter().all(|m| a.derived().is_subspace_of(&m.subspace));
                        let cap = frattini_by_intersection(&a).map_err(|err| err.to_string())?;
                        if ms.len() as u64 != expected || !contains || cap != a.derived() {
                            return Ok(Outcome::Fail(format!(
                                "{} over {f}: {} maximals, expected {expected}",
                                e.name,
                                ms.len()
                            )));
                        }
                        checked += 1;
                    }
                }
                Ok(Outcome::Pass(format!("{checked} entry/field pairs")))
            },
        ),
        claim(
            "catalog.p1_implies_p2",
            "P1 implies P2 on every catalog sample",
            move |ctx| {
                let mut p1_count = 0;
                let mut checked = 0;
                for e in catalog::list() {
                    for &f in &fields2 {
                        if f.modulus() != Some(3) {
                            continue;
                        }
                        let Some((_, a)) = ctx.sample(e.name, f)? else { continue };
                        let p1 = check_p1_seeded(&a, ctx.seed).map_err(|err| format!("{}: {err}", e.name))?;
                        let p2 = check_p2(&a).map_err(|err| err.to_string())?;
                        if p1.holds {
                            p1_count += 1;
                            if !p2.holds {
                                return Ok(Outcome::Fail(format!("{} over {f}: P1 without P2", e.name)));
                            }
                        }
                        checked += 1;
                    }
                }
                if checked == 0 {
                    return Ok(Outcome::Skipped("GF(3) is not among the fields".into()));
                }
                Ok(Outcome::Pass(format!("{checked} samples over GF(3), {p1_count} with P1")))
            },
        ),
        claim("catalog.lie_entries", "the listed Lie algebras have Leib(A) = 0", |ctx| {
            let f = gf(5);
            let mut names = Vec::new();
            for name in ["heisenberg3", "holmes_ii", "holmes_iii"] {
                let Some((_, a)) = ctx.sample(name, f)? else { continue };
                if !a.is_lie() {
                    return Ok(Outcome::Fail(format!("{name}: Leib has dimension {}", a.leib_ideal().dim())));
                }
                names.push(name);
            }
            Ok(Outcome::Pass(format!("{} over GF(5)", names.join(", "))))
        }),
    ]
}

fn claims(config: &ReproduceConfig) -> Vec<Claim> {
    let mut all = leibniz_claims(&config.fields);
    all.extend(cyclic_claims(&config.fields));
    all.extend(cc1_claims());
    all.extend(cc2_dim4_claims());
    all.extend(cc2_dim6_claims());
    all.extend(counterexample_claims(&config.fields));
    all.extend(relations_claims());
    all.extend(structure_claims());
    all.extend(holmes_claims());
    all.extend(catalog_claims(&config.fields));
    all
}

/// Claim identifiers in report order.
pub fn claim_ids(config: &ReproduceConfig) -> Vec<String> {
    claims(config).into_iter().map(|c| c.id).collect()
}

/// Runs every claim (concurrently) and reports them in fixed order.
pub fn run(config: &ReproduceConfig) -> Report {
    run_matching(config, |_| true)
}

/// Runs the claims whose id satisfies `filter`.
pub fn run_matching(config: &ReproduceConfig, filter: impl Fn(&str) -> bool + Sync) -> Report {
    let ctx = Ctx {
        seed: config.seed,
        corrupt: config.corrupt.clone(),
    };
    let selected: Vec<Claim> = claims(config).into_iter().filter(|c| filter(&c.id)).collect();
    let entries = selected
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let outcome = (c.run)(&ctx).unwrap_or_else(|e| Outcome::Fail(format!("error: {e}")));
            let (verdict, evidence) = match outcome {
                Outcome::Pass(e) => (Verdict::Pass, e),
                Outcome::Fail(e) => (Verdict::Fail, e),
                Outcome::Skipped(e) => (Verdict::Skipped, e),
            };
            ReportEntry {
                claim_id: c.id.clone(),
                context: c.context.to_string(),
                verdict,
                evidence,
                elapsed_ms: start.elapsed().as_millis(),
            }
        })
        .collect();
    Report {
        fields: config.fields.clone(),
        seed: config.seed,
        entries,
    }
}
