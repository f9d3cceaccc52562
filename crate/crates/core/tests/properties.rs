use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use leibalg::linalg::{inverse, Vector};
use leibalg::random::{random_invertible, random_nilpotent};
use leibalg::reproduce::{run_matching, ReproduceConfig};
use leibalg::{fingerprint, is_isomorphic, nilpotency_data, parse_algebra, write_algebra, Field, IsoVerdict, LeibnizAlgebra};

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn algebra(p: u64, dim: usize, seed: u64) -> LeibnizAlgebra {
    random_nilpotent(gf(p), dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Every n x n matrix over a small field, as row lists.
fn all_matrices(f: Field, n: usize) -> Vec<Vec<Vector>> {
    let elems: Vec<_> = f.elements().unwrap().collect();
    let cells = n * n;
    let total = elems.len().pow(cells as u32);
    (0..total)
        .map(|mut code| {
            let mut flat = Vec::with_capacity(cells);
            for _ in 0..cells {
                flat.push(elems[code % elems.len()].clone());
                code /= elems.len();
            }
            flat.chunks(n).map(|r| Vector::new(r.to_vec())).collect()
        })
        .collect()
}

fn brute_isomorphic(a: &LeibnizAlgebra, b: &LeibnizAlgebra) -> bool {
    a.dim() == b.dim()
        && all_matrices(a.field(), a.dim())
            .iter()
            .any(|m| inverse(a.field(), m).is_some() && a.is_isomorphism_onto(b, m))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_algebras_are_nilpotent_leibniz(p in prop::sample::select(vec![2u64, 3, 5]), dim in 1usize..6, seed: u64) {
        let a = algebra(p, dim, seed);
        prop_assert!(a.is_leibniz());
        let prof = nilpotency_data(&a);
        let class = prof.class.unwrap();
        prop_assert_eq!(prof.coclass, Some(dim - class));
        prop_assert!(a.leib_ideal().is_subspace_of(&a.derived()));
    }

    #[test]
    fn change_of_basis_is_found(p in prop::sample::select(vec![2u64, 3]), dim in 1usize..5, seed: u64) {
        let a = algebra(p, dim, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let basis = random_invertible(a.field(), dim, &mut rng);
        let b = a.change_basis(&basis).unwrap();
        prop_assert_eq!(fingerprint(&a), fingerprint(&b));
        match is_isomorphic(&a, &b).unwrap() {
            IsoVerdict::Yes(map) => prop_assert!(a.is_isomorphism_onto(&b, &map.images)),
            other => prop_assert!(false, "expected an isomorphism, got {:?}", other),
        }
    }

    #[test]
    fn text_format_roundtrips(p in prop::sample::select(vec![2u64, 5, 7]), dim in 0usize..6, seed: u64) {
        let a = algebra(p, dim, seed);
        let text = write_algebra(&a);
        let b = parse_algebra(&text).unwrap();
        prop_assert_eq!(write_algebra(&b), text);
        prop_assert!(a.is_isomorphism_onto(&b, &(0..dim).map(|i| a.basis_vector(i)).collect::<Vec<_>>()));
    }
}

#[test]
fn search_agrees_with_brute_force_over_gf2() {
    let mut pairs = 0;
    for dim in 1..=3 {
        let suite: Vec<_> = (0..12).map(|s| algebra(2, dim, 1000 * dim as u64 + s)).collect();
        for (i, a) in suite.iter().enumerate() {
            for b in &suite[i..] {
                let verdict = is_isomorphic(a, b).unwrap();
                assert_eq!(verdict.is_yes(), brute_isomorphic(a, b), "\n{}\n{}", write_algebra(a), write_algebra(b));
                assert!(verdict.is_yes() || verdict.is_no());
                pairs += 1;
            }
        }
    }
    assert!(pairs > 200);
}

#[test]
fn report_is_deterministic() {
    let config = ReproduceConfig { seed: 3, ..ReproduceConfig::default() };
    let cheap = |id: &str| id.starts_with("identity.") || id.starts_with("structure.") || id.starts_with("relations.");
    let first = run_matching(&config, cheap).render(false);
    let second = run_matching(&config, cheap).render(false);
    assert_eq!(first, second);
    assert!(first.lines().count() > 40);
    assert!(!first.contains("\nFAIL "));
}
