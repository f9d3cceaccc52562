//! Seeded random nilpotent Leibniz algebras, built as iterated central
//! extensions of an abelian algebra and then presented in a random basis.

use rand::Rng;

use crate::algebra::LeibnizAlgebra;
use crate::field::{Field, FieldElement};
use crate::linalg::{inverse, null_space, Vector};

/// Uniform over GF(p); integers in `-9..=9` over ℚ.
pub fn random_element<R: Rng + ?Sized>(field: Field, rng: &mut R) -> FieldElement {
    match field.modulus() {
        Some(p) => field.from_residue(rng.random_range(0..p)),
        None => field.from_i64(rng.random_range(-9..=9)),
    }
}

pub fn random_vector<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Vector {
    Vector::new((0..n).map(|_| random_element(field, rng)).collect())
}

/// Rows of a random invertible `n x n` matrix.
pub fn random_invertible<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Vec<Vector> {
    loop {
        let rows: Vec<Vector> = (0..n).map(|_| random_vector(field, n, rng)).collect();
        if inverse(field, &rows).is_some() {
            return rows;
        }
    }
}

/// Basis of the bilinear forms `c` with
/// `c(a,[b,x]) = c([a,b],x) + c(b,[a,x])`, as vectors indexed by `i*n + j`.
/// With `skew`, only alternating forms are kept.
pub fn central_cocycles(a: &LeibnizAlgebra, skew: bool) -> Vec<Vector> {
    let n = a.dim();
    let field = a.field();
    let mut equations = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut row = vec![field.zero(); n * n];
                for (l, c) in a.product(j, k).coords().iter().enumerate() {
                    row[i * n + l] += c;
                }
                for (l, c) in a.product(i, j).coords().iter().enumerate() {
                    row[l * n + k] -= c;
                }
                for (l, c) in a.product(i, k).coords().iter().enumerate() {
                    row[j * n + l] -= c;
                }
                if row.iter().any(|x| !x.is_zero()) {
                    equations.push(Vector::new(row));
                }
            }
        }
    }
    if skew {
        for i in 0..n {
            for j in i..n {
                let mut row = vec![field.zero(); n * n];
                row[i * n + j] = field.one();
                if i != j {
                    row[j * n + i] = field.one();
                }
                equations.push(Vector::new(row));
            }
        }
    }
    null_space(field, &equations, n * n)
}

/// Adjoins a central basis vector `z` with `[e_i, e_j] += c[i*n+j] z`.
pub fn central_extension(a: &LeibnizAlgebra, cocycle: &Vector) -> LeibnizAlgebra {
    let n = a.dim();
    let field = a.field();
    let mut products = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        for j in 0..=n {
            let v = if i < n && j < n {
                let mut coords = a.product(i, j).coords().to_vec();
                coords.push(cocycle[i * n + j].clone());
                Vector::new(coords)
            } else {
                Vector::zero(field, n + 1)
            };
            products.push(v);
        }
    }
    LeibnizAlgebra::from_products(n + 1, field, products)
}

/// A random nilpotent Leibniz algebra of dimension `dim`: an abelian algebra
/// of random dimension, extended centrally by random cocycles, then
/// rewritten in a random basis. One draw in four is a Lie algebra.
pub fn random_nilpotent<R: Rng + ?Sized>(field: Field, dim: usize, rng: &mut R) -> LeibnizAlgebra {
    if dim == 0 {
        return LeibnizAlgebra::abelian(field, 0);
    }
    let start = rng.random_range(1..=dim.min(3));
    let skew = rng.random_range(0..4) == 0;
    let mut a = LeibnizAlgebra::abelian(field, start);
    while a.dim() < dim {
        let basis = central_cocycles(&a, skew);
        let mut c = Vector::zero(field, a.dim() * a.dim());
        for b in &basis {
            c.add_scaled(&random_element(field, rng), b);
        }
        a = central_extension(&a, &c);
    }
    let rows = random_invertible(field, dim, rng);
    a.change_basis(&rows).expect("invertible basis")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::is_nilpotent;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_algebras_are_nilpotent_leibniz() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [2, 3] {
            let f = Field::prime(p).unwrap();
            for dim in 1..=5 {
                for _ in 0..10 {
                    let a = random_nilpotent(f, dim, &mut rng);
                    assert_eq!(a.dim(), dim);
                    assert!(a.is_leibniz());
                    assert!(is_nilpotent(&a));
                }
            }
        }
    }

    #[test]
    fn generation_is_seeded() {
        let f = Field::prime(3).unwrap();
        let a = random_nilpotent(f, 5, &mut ChaCha8Rng::seed_from_u64(4));
        let b = random_nilpotent(f, 5, &mut ChaCha8Rng::seed_from_u64(4));
        assert_eq!(a, b);
    }

    #[test]
    fn generates_non_lie_and_non_abelian_examples() {
        let f = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let algebras: Vec<_> = (0..40).map(|_| random_nilpotent(f, 4, &mut rng)).collect();
        assert!(algebras.iter().any(|a| !a.is_lie()));
        assert!(algebras.iter().any(|a| a.is_lie() && !a.is_abelian()));
    }

    #[test]
    fn cocycles_of_a_line() {
        let f = Field::prime(5).unwrap();
        let line = LeibnizAlgebra::abelian(f, 1);
        assert_eq!(central_cocycles(&line, false).len(), 1);
        assert!(central_cocycles(&line, true).is_empty());
        let cyclic = central_extension(&line, &Vector::from_i64s(f, &[1]));
        assert_eq!(cyclic.square(&cyclic.basis_vector(0)), cyclic.basis_vector(1));
        assert!(cyclic.is_leibniz());
    }

    #[test]
    fn rational_sampling() {
        let q = Field::rationals();
        let a = random_nilpotent(q, 4, &mut ChaCha8Rng::seed_from_u64(0));
        assert!(a.is_leibniz() && is_nilpotent(&a));
    }
}
