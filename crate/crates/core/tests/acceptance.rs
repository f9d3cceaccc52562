use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;

use leibalg::catalog::{self, ParamValue};
use leibalg::iso::IsoVerdict;
use leibalg::linalg::{enumerate_subspaces, Subspace, Vector};
use leibalg::maximal::{check_p1_seeded, check_p2, enumerate_maximal};
use leibalg::reproduce::{a2_table, random_suite, reference_r2s};
use leibalg::series::{is_cyclic, nilpotency_data, upper_central_term};
use leibalg::{is_isomorphic, verify_implied_relations, Field, LeibnizAlgebra, MultiPoly, NonIsoWitness};

const SEED: u64 = 0;
const RELATION_TRIALS: usize = 100;
const RELATION_PRIME: u64 = 101;
const RANDOM_ALGEBRAS_MIN: usize = 200;

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn make(name: &str, f: Field, kv: &[(&str, i64)]) -> Result<LeibnizAlgebra, String> {
    let params: Vec<ParamValue> = kv.iter().map(|&(k, v)| ParamValue::scalar(k, f.from_i64(v))).collect();
    catalog::instantiate(name, f, &params).map_err(|e| format!("{name} over {f}: {e}"))
}

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < budget, || format!("{what} took {t:?}, budget {budget:?}"))
}

fn c1_identity() -> Result<String, String> {
    let start = Instant::now();
    let (mut checked, mut skipped) = (0, Vec::new());
    for p in [3, 5, 7] {
        let f = gf(p);
        for e in catalog::list() {
            let Some(params) = catalog::sample_params(e.name, f).map_err(|e| e.to_string())? else {
                skipped.push(format!("{}@{p}", e.name));
                continue;
            };
            let a = catalog::instantiate(e.name, f, &params).map_err(|e| e.to_string())?;
            let v = a.check_leibniz();
            ensure(v.is_empty(), || format!("{} over {f}: {} violations", e.name, v.len()))?;
            checked += 1;
        }
    }
    ensure(skipped == ["A1_6dim@3"], || format!("unexpected skips {skipped:?}"))?;
    within(start, Duration::from_secs(1), "identity suite")?;
    Ok(format!("{checked} instances, skipped {}", skipped.join(",")))
}

fn c2_cyclic_example() -> Result<String, String> {
    let q = Field::rationals();
    let a = make("cyclic_example4", q, &[])?;
    let e = |i| a.basis_vector(i);
    ensure(a.center() == Subspace::span(q, 4, [e(3)]), || format!("Z = {}", a.center()))?;
    let z2 = upper_central_term(&a, 2);
    ensure(z2 == Subspace::span(q, 4, [e(2), e(3)]), || format!("Z2 = {z2}"))?;
    let prof = nilpotency_data(&a);
    ensure(prof.class == Some(4) && prof.coclass == Some(0), || format!("{prof:?}"))?;
    for p in [2, 3, 5, 7, 11, 13] {
        let b = make("cyclic_example4", gf(p), &[])?;
        let r = check_p1_seeded(&b, SEED).map_err(|e| e.to_string())?;
        ensure(r.holds && r.maximal_count == 1, || format!("GF({p}): {r}"))?;
    }
    Ok("Z = span{x4}, Z2 = span{x3,x4}, class 4, coclass 0, one maximal over GF(2..13)".into())
}

fn c3_coclass_one_positive() -> Result<String, String> {
    let start = Instant::now();
    let mut out = Vec::new();
    for (p, lambda) in [(3u64, 0), (5, 1)] {
        let f = gf(p);
        let disc = f.from_i64(lambda * lambda - 4);
        ensure(!disc.is_square(), || format!("discriminant {disc} is a square in GF({p})"))?;
        let a = make("cc1_case2", f, &[("tau", 1), ("lambda", lambda), ("epsilon", 0)])?;
        let r = check_p1_seeded(&a, SEED).map_err(|e| e.to_string())?;
        let expected = ((p * p - 1) / (p - 1)) as usize;
        ensure(r.holds && r.maximal_count == expected, || format!("GF({p}): {r}"))?;
        out.push(format!("GF({p}) {} maximals", r.maximal_count));
    }
    within(start, Duration::from_secs(1), "coclass-1 P1 checks")?;
    Ok(out.join(", "))
}

fn c4_coclass_one_negative() -> Result<String, String> {
    let f = gf(5);
    let params: Vec<ParamValue> = [("tau", 1), ("lambda", 1), ("epsilon", 1)]
        .iter()
        .map(|&(k, v)| ParamValue::scalar(k, f.from_i64(v)))
        .collect();
    let reports = catalog::validate_params("cc1_case2", f, &params).map_err(|e| e.to_string())?;
    ensure(reports.iter().any(|r| !r.holds), || "square discriminant accepted".into())?;
    ensure(catalog::instantiate("cc1_case2", f, &params).is_err(), || "instantiated".into())?;
    let raw = LeibnizAlgebra::from_sparse(
        3,
        f,
        &[(0, 0, &[(2, 1)]), (0, 1, &[(2, 1)]), (1, 0, &[(2, 1)]), (1, 1, &[(2, 1)])],
    )
    .map_err(|e| e.to_string())?;
    let r = check_p1_seeded(&raw, SEED).map_err(|e| e.to_string())?;
    let w = r.witness.as_ref().ok_or("P1 holds on the raw table")?;
    ensure(!r.holds, || "P1 holds".into())?;
    let ms = enumerate_maximal(&raw).map_err(|e| e.to_string())?;
    let verdict = is_isomorphic(&ms[w.first].induced, &ms[w.second].induced).map_err(|e| e.to_string())?;
    ensure(verdict.is_no(), || format!("witness pair is isomorphic: {verdict:?}"))?;
    Ok(format!("rejected; raw table {r}"))
}

fn c5_coclass_two_dim4() -> Result<String, String> {
    let mut count = 0;
    for p in [3u64, 5] {
        let f = gf(p);
        let reference = reference_r2s(f);
        let mut cases: Vec<(&str, Vec<(&str, i64)>)> = vec![("cc2_split4", vec![]), ("A19", vec![])];
        for alpha in 0..3 {
            if f.from_i64(alpha) != f.from_i64(-1) {
                cases.push(("A18", vec![("alpha", alpha)]));
            }
        }
        for (name, kv) in cases {
            let a = make(name, f, &kv)?;
            let r = check_p1_seeded(&a, SEED).map_err(|e| e.to_string())?;
            let cc = nilpotency_data(&a).coclass;
            ensure(r.holds && cc == Some(2), || format!("{name}{kv:?} over GF({p}): {r}, coclass {cc:?}"))?;
            if name != "cc2_split4" {
                for m in enumerate_maximal(&a).map_err(|e| e.to_string())? {
                    match is_isomorphic(&m.induced, &reference).map_err(|e| e.to_string())? {
                        IsoVerdict::Yes(map) if m.induced.is_isomorphism_onto(&reference, &map.images) => {}
                        other => return Err(format!("{name} M{}: {other:?}", m.tag_string())),
                    }
                }
            }
            count += 1;
        }
    }
    Ok(format!("{count} algebras, maximals of A18/A19 map onto r^2 = s"))
}

fn c6_coclass_two_dim6() -> Result<String, String> {
    let mut out = Vec::new();
    for (p, c, g, shat) in [(5u64, 1, 3, 3), (7, 1, 1, 2)] {
        let f = gf(p);
        let start = Instant::now();
        let kv = [("c", c), ("g", g), ("d", 1), ("shat", shat), ("rhat", 1)];
        ensure(f.from_i64(shat) * f.from_i64(-3) == f.from_i64(c), || "shat*(-3d) != rhat*c".into())?;
        let a1 = make("A1_6dim", f, &kv)?;
        let r = check_p1_seeded(&a1, SEED).map_err(|e| e.to_string())?;
        let cc = nilpotency_data(&a1).coclass;
        let z2 = upper_central_term(&a1, 2).dim();
        ensure(r.holds && cc == Some(2) && z2 == 3, || format!("A1 over GF({p}): {r}, coclass {cc:?}, dim Z2 {z2}"))?;
        let assignment = [("c", -g), ("g", -c), ("f", -1)]
            .iter()
            .map(|&(k, v)| (k.to_string(), f.from_i64(v)))
            .collect();
        let a2 = a2_table().eval_at(&assignment, f).map_err(|e| e.to_string())?;
        ensure(a2.is_leibniz(), || "A2 is not Leibniz".into())?;
        ensure(is_isomorphic(&a2, &a1).map_err(|e| e.to_string())?.is_yes(), || {
            format!("A2 not isomorphic to A1 over GF({p})")
        })?;
        if p == 5 {
            let a3 = make("A3_6dim", f, &[("d", 1), ("dhat", 3)])?;
            let r3 = check_p1_seeded(&a3, SEED).map_err(|e| e.to_string())?;
            let cc3 = nilpotency_data(&a3).coclass;
            let z3 = upper_central_term(&a3, 2).dim();
            ensure(r3.holds && cc3 == Some(2) && z3 == 3, || format!("A3: {r3}, coclass {cc3:?}, dim Z2 {z3}"))?;
        }
        within(start, Duration::from_secs(30), &format!("GF({p})"))?;
        out.push(format!("GF({p}) {:.1}s", start.elapsed().as_secs_f64()));
    }
    Ok(out.join(", "))
}

fn c7_counterexamples() -> Result<String, String> {
    for p in [3, 5, 7] {
        let f = gf(p);
        let a = make("cex_fourdim_A1", f, &[])?;
        let r = check_p2(&a).map_err(|e| e.to_string())?;
        let w = r.witness.as_ref().ok_or("P2 holds")?;
        ensure(!r.holds && w.abelian.0 != w.abelian.1, || format!("GF({p}): {r}"))?;
        let b = make("cex_A8", f, &[])?;
        let r = check_p1_seeded(&b, SEED).map_err(|e| e.to_string())?;
        let ok = matches!(
            r.witness.as_ref().map(|w| &w.witness),
            Some(NonIsoWitness::Invariant(d)) if d.invariant == "leib_dim" && d.left == "1" && d.right == "0"
        );
        ensure(!r.holds && ok, || format!("A8 over GF({p}): {r}"))?;
    }
    Ok("P2 fails with abelian vs non-abelian; A8 P1 fails on leib_dim 1 vs 0".into())
}

fn c8_relations() -> Result<String, String> {
    let start = Instant::now();
    let f = gf(RELATION_PRIME);
    let run = |table: leibalg::ParametricAlgebra, rels: &[&str]| -> Result<leibalg::RelationsReport, String> {
        let rs = rels
            .iter()
            .map(|s| MultiPoly::parse(table.vars(), s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        verify_implied_relations(&table, &rs, RELATION_TRIALS, f, SEED).map_err(|e| e.to_string())
    };
    let six = run(catalog::table6_reduced(), &["gamma - d + f", "gamma + d + fhat", "gamma - dhat - f"])?;
    ensure(six.holds(), || six.to_string())?;
    let one = run(catalog::table1_parametric(), &["bhat + b", "chat + c", "gamma"])?;
    ensure(one.holds(), || one.to_string())?;
    let fake = run(catalog::table6_reduced(), &["gamma - d - f"])?;
    ensure(!fake.sufficient(), || "a wrong relation passed".into())?;
    within(start, Duration::from_secs(1), "relation checks")?;
    Ok(format!("{RELATION_TRIALS} samples over GF({RELATION_PRIME}), both directions"))
}

/// Brute force: every hyperplane that is a subalgebra.
fn hyperplane_subalgebras(a: &LeibnizAlgebra) -> Vec<Subspace> {
    enumerate_subspaces(a.field(), a.dim(), a.dim() - 1)
        .into_iter()
        .filter(|s| a.is_subalgebra(s))
        .collect()
}

fn all_vectors(f: Field, n: usize) -> Vec<Vector> {
    let elems: Vec<_> = f.elements().unwrap().collect();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                elems.iter().map(move |x| {
                    let mut w = v.clone();
                    w.push(x.clone());
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(Vector::new).collect()
}

fn strict_steps(dims: &[usize]) -> usize {
    dims.windows(2).filter(|w| w[0] != w[1]).count()
}

fn c9_structure() -> Result<String, String> {
    let start = Instant::now();
    let suite = random_suite(SEED);
    ensure(suite.len() >= RANDOM_ALGEBRAS_MIN && suite.iter().all(|a| a.dim() <= 5), || "suite shape".into())?;
    let (mut p2_count, mut split_count, mut quotient_count, mut cyclic_count) = (0, 0, 0, 0);
    for (k, a) in suite.iter().enumerate() {
        let f = a.field();
        let n = a.dim();
        let tag = |what: &str| format!("algebra #{k} over {f}, dim {n}: {what}");
        let prof = nilpotency_data(a);
        let c = prof.class.ok_or_else(|| tag("not nilpotent"))?;
        ensure(strict_steps(&prof.lower_dims) == c && strict_steps(&prof.upper_dims) == c, || {
            tag(&format!("series {:?} / {:?}", prof.lower_dims, prof.upper_dims))
        })?;

        let a2 = a.derived();
        let hyper = hyperplane_subalgebras(a);
        let cap = hyper.iter().cloned().reduce(|x, y| x.intersection(&y)).unwrap_or_else(|| a.full_space());
        let phi = leibalg::series::frattini(a).map_err(|e| e.to_string())?;
        let by_enum = leibalg::maximal::frattini_by_intersection(a).map_err(|e| e.to_string())?;
        let cap = if n == 0 { a2.clone() } else { cap };
        ensure(phi == a2 && cap == a2 && by_enum == a2, || tag(&format!("A^2 {a2}, intersection {cap}")))?;

        if check_p2(a).map_err(|e| e.to_string())?.holds && c >= 1 {
            let z = upper_central_term(a, c - 1);
            ensure(z.is_subspace_of(&phi) && z == phi, || tag(&format!("Z_(c-1) = {z}, phi = {phi}")))?;
            p2_count += 1;
        }

        let brute = n <= 1 || all_vectors(f, n).iter().any(|v| a.generated_subalgebra(std::slice::from_ref(v)).is_full());
        let cy = is_cyclic(a).map_err(|e| e.to_string())?;
        ensure(cy.cyclic == brute && cy.cyclic == (n <= 1 || a2.codim() == 1), || tag("cyclicity"))?;
        if cy.cyclic {
            cyclic_count += 1;
        }

        let z = a.center();
        let cc = prof.coclass.unwrap();
        for d in 2..=z.dim() {
            for s in enumerate_subspaces(f, z.dim(), d) {
                let vectors = s.basis().iter().map(|coef| {
                    let mut v = Vector::zero(f, n);
                    for (x, b) in coef.coords().iter().zip(z.basis()) {
                        v.add_scaled(x, b);
                    }
                    v
                });
                let ideal = a.span(vectors);
                let q = a.quotient(&ideal).map_err(|e| e.to_string())?;
                let qc = nilpotency_data(&q.algebra).coclass.unwrap();
                ensure(qc < cc, || tag(&format!("quotient by {ideal}: coclass {qc} vs {cc}")))?;
                quotient_count += 1;
            }
        }

        if n >= 2 && z.dim() + 1 == n {
            let (i, j) = a.split_codim1_center().map_err(|e| tag(&e.to_string()))?;
            let ok = i.dim() == 2
                && a.is_ideal(&i)
                && a.is_ideal(&j)
                && i.sum(&j).is_full()
                && i.intersection(&j).is_zero()
                && a.span_products(&i, &j).is_zero()
                && a.span_products(&j, &i).is_zero();
            ensure(ok, || tag(&format!("split I = {i}, J = {j}")))?;
            split_count += 1;
        }
    }
    within(start, Duration::from_secs(60), "structural suite")?;
    Ok(format!(
        "{} algebras; Z_(c-1) = phi on {p2_count} with P2; {cyclic_count} cyclic; {quotient_count} central quotients; {split_count} splits",
        suite.len()
    ))
}

fn c10_field_dependence() -> Result<String, String> {
    let a = make("holmes_iii", gf(5), &[("gamma", 2)])?;
    ensure(a.is_leibniz() && a.is_lie(), || "holmes_iii over GF(5) is not a Lie algebra".into())?;
    let q = Field::rationals();
    let witnesses: Vec<BigRational> = [(0, 1), (1, 1), (2, 1), (3, 2), (1, 3), (7, 5), (12, 7)]
        .iter()
        .map(|&(n, d)| BigRational::new(n.into(), d.into()))
        .collect();
    for r in &witnesses {
        let gamma = q.from_rational(&(-(r * r))).unwrap();
        let reports = catalog::validate_params("holmes_iii", q, &[ParamValue::scalar("gamma", gamma.clone())])
            .map_err(|e| e.to_string())?;
        ensure(reports.iter().any(|c| !c.holds), || format!("gamma = {gamma} accepted over Q"))?;
    }
    Ok(format!("GF(5) gamma=2 accepted; {} values gamma = -q^2 rejected over Q", witnesses.len()))
}

type Criterion = fn() -> Result<String, String>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("identity suite (<1s)", c1_identity),
        ("cyclic 4-dimensional example (exact)", c2_cyclic_example),
        ("coclass 1 positive (exact, <1s)", c3_coclass_one_positive),
        ("coclass 1 negative (exact)", c4_coclass_one_negative),
        ("coclass 2, dimension 4 (exact)", c5_coclass_two_dim4),
        ("coclass 2, dimension 6 (<30s per field)", c6_coclass_two_dim6),
        ("counterexamples (exact)", c7_counterexamples),
        ("constraint derivations (exact, <1s)", c8_relations),
        ("structural property suite (<60s)", c9_structure),
        ("field dependence (exact)", c10_field_dependence),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(evidence) => println!("PASS criterion {} {name}: {evidence}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
