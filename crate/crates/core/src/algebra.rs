//! Left Leibniz algebras given by structure constants.
//!
//! The bracket of basis vectors is `[e_i, e_j] = sum_k c[i][j][k] e_k` and
//! the left Leibniz identity reads
//! `[a, [b, c]] = [[a, b], c] + [b, [a, c]]`.
//! By bilinearity it is enough to test it on basis triples.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldError};
use crate::linalg::{null_space, vec_mat, Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("basis index {index} out of range for dimension {dim}")]
    BadIndex { index: usize, dim: usize },
    #[error("product [e{i}, e{j}] given twice")]
    DuplicateEntry { i: usize, j: usize },
    #[error("vector of length {got} in an algebra of dimension {dim}")]
    BadVector { got: usize, dim: usize },
    #[error("scalars from different fields: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("subspace is not an ideal")]
    NotAnIdeal,
    #[error("subspace is not closed under the bracket")]
    NotASubalgebra,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// One basis triple on which the Leibniz identity fails, with the residual
/// `[e_i, [e_j, e_k]] - [[e_i, e_j], e_k] - [e_j, [e_i, e_k]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub residual: Vector,
}

/// `(i, j, terms)`: `[e_i, e_j]` is the sum of `c * e_k` over `(k, c)` in `terms`.
pub type SparseProduct<'a> = (usize, usize, &'a [(usize, i64)]);

/// A finite-dimensional algebra over an exact field, stored as the table of
/// basis products. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LeibnizAlgebra {
    dim: usize,
    field: Field,
    products: Vec<Vector>,
    labels: Option<Vec<String>>,
}

impl LeibnizAlgebra {
    /// Abelian algebra of dimension `n`.
    pub fn abelian(field: Field, n: usize) -> LeibnizAlgebra {
        LeibnizAlgebra {
            dim: n,
            field,
            products: vec![Vector::zero(field, n); n * n],
            labels: None,
        }
    }

    /// Builds an algebra from the nonzero products `[e_i, e_j] = v`.
    /// Products not listed are zero.
    pub fn from_table(
        dim: usize,
        field: Field,
        entries: &[(usize, usize, Vector)],
    ) -> Result<LeibnizAlgebra, AlgebraError> {
        let mut alg = LeibnizAlgebra::abelian(field, dim);
        let mut seen = vec![false; dim * dim];
        for (i, j, v) in entries {
            for &index in [i, j] {
                if index >= dim {
                    return Err(AlgebraError::BadIndex { index, dim });
                }
            }
            if v.len() != dim {
                return Err(AlgebraError::BadVector { got: v.len(), dim });
            }
            if let Some(c) = v.coords().iter().find(|c| c.field() != field) {
                return Err(AlgebraError::FieldMismatch(field, c.field()));
            }
            let slot = i * dim + j;
            if seen[slot] {
                return Err(AlgebraError::DuplicateEntry { i: *i, j: *j });
            }
            seen[slot] = true;
            alg.products[slot] = v.clone();
        }
        Ok(alg)
    }

    /// Shorthand for tables with integer coefficients:
    /// each entry is `(i, j, &[(k, coeff), ...])`.
    pub fn from_sparse(
        dim: usize,
        field: Field,
        entries: &[SparseProduct],
    ) -> Result<LeibnizAlgebra, AlgebraError> {
        let mut table = Vec::with_capacity(entries.len());
        for &(i, j, terms) in entries {
            let mut v = Vector::zero(field, dim);
            for &(k, c) in terms {
                if k >= dim {
                    return Err(AlgebraError::BadIndex { index: k, dim });
                }
                let mut coords = v.into_coords();
                coords[k] = &coords[k] + &field.from_i64(c);
                v = Vector::new(coords);
            }
            table.push((i, j, v));
        }
        LeibnizAlgebra::from_table(dim, field, &table)
    }

    /// Builds an algebra from a complete `dim x dim` table of products.
    pub(crate) fn from_products(dim: usize, field: Field, products: Vec<Vector>) -> LeibnizAlgebra {
        debug_assert_eq!(products.len(), dim * dim);
        LeibnizAlgebra {
            dim,
            field,
            products,
            labels: None,
        }
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        assert_eq!(labels.len(), self.dim, "one label per basis vector");
        self.labels = Some(labels);
        self
    }

    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Name of basis vector `i`: its label, or `e{i+1}`.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("e{}", i + 1),
        }
    }

    /// `[e_i, e_j]`
    pub fn product(&self, i: usize, j: usize) -> &Vector {
        &self.products[i * self.dim + j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &crate::FieldElement {
        &self.product(i, j)[k]
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        Vector::unit(self.field, self.dim, i)
    }

    pub fn zero_vector(&self) -> Vector {
        Vector::zero(self.field, self.dim)
    }

    pub fn full_space(&self) -> Subspace {
        Subspace::full(self.field, self.dim)
    }

    pub fn zero_space(&self) -> Subspace {
        Subspace::zero(self.field, self.dim)
    }

    pub fn span<I: IntoIterator<Item = Vector>>(&self, vectors: I) -> Subspace {
        Subspace::span(self.field, self.dim, vectors)
    }

    fn check_vector(&self, v: &Vector) -> Result<(), AlgebraError> {
        if v.len() != self.dim {
            return Err(AlgebraError::BadVector {
                got: v.len(),
                dim: self.dim,
            });
        }
        if let Some(c) = v.coords().iter().find(|c| c.field() != self.field) {
            return Err(AlgebraError::FieldMismatch(self.field, c.field()));
        }
        Ok(())
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector, AlgebraError> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = self.zero_vector();
        for (i, xi) in x.coords().iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coords().iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let p = self.product(i, j);
                if !p.is_zero() {
                    out.add_scaled(&(xi * yj), p);
                }
            }
        }
        out
    }

    /// `[x, x]`
    pub fn square(&self, x: &Vector) -> Vector {
        self.bracket_unchecked(x, x)
    }

    /// Every basis triple where the Leibniz identity fails.
    pub fn check_leibniz(&self) -> Vec<Violation> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let eij = self.product(i, j);
                for k in 0..n {
                    let ejk = self.product(j, k);
                    let eik = self.product(i, k);
                    let lhs = self.bracket_unchecked(&self.basis_vector(i), ejk);
                    let r1 = self.bracket_unchecked(eij, &self.basis_vector(k));
                    let r2 = self.bracket_unchecked(&self.basis_vector(j), eik);
                    let residual = lhs.sub(&r1).sub(&r2);
                    if !residual.is_zero() {
                        out.push(Violation { i, j, k, residual });
                    }
                }
            }
        }
        out
    }

    pub fn is_leibniz(&self) -> bool {
        self.check_leibniz().is_empty()
    }

    pub fn is_abelian(&self) -> bool {
        self.products.iter().all(Vector::is_zero)
    }

    /// `span{[u, v] : u in U, v in V}`
    pub fn span_products(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let mut prods = Vec::new();
        for a in u.basis() {
            for b in v.basis() {
                prods.push(self.bracket_unchecked(a, b));
            }
        }
        self.span(prods)
    }

    /// `[A, A]`
    pub fn derived(&self) -> Subspace {
        self.span(self.products.iter().cloned())
    }

    /// Span of all squares `[v, v]`, via polarization:
    /// the squares `[e_i, e_i]` together with `[e_i, e_j] + [e_j, e_i]`.
    pub fn leib_ideal(&self) -> Subspace {
        let n = self.dim;
        let mut gens = Vec::new();
        for i in 0..n {
            gens.push(self.product(i, i).clone());
            for j in (i + 1)..n {
                gens.push(self.product(i, j).add(self.product(j, i)));
            }
        }
        self.span(gens)
    }

    /// A Lie algebra here means `Leib(A) = 0`.
    pub fn is_lie(&self) -> bool {
        self.leib_ideal().is_zero()
    }

    /// Elements annihilated by bracketing against everything, on both sides.
    pub fn center(&self) -> Subspace {
        self.annihilator(true)
    }

    /// `{x : [x, A] = 0}`
    pub fn left_center(&self) -> Subspace {
        self.annihilator(false)
    }

    fn annihilator(&self, both_sides: bool) -> Subspace {
        let n = self.dim;
        // Unknown x = sum x_a e_a; [x, e_i] coordinate k is sum_a x_a c[a][i][k].
        let mut eqs = Vec::new();
        for i in 0..n {
            for k in 0..n {
                eqs.push(Vector::new(
                    (0..n).map(|a| self.product(a, i)[k].clone()).collect(),
                ));
                if both_sides {
                    eqs.push(Vector::new(
                        (0..n).map(|a| self.product(i, a)[k].clone()).collect(),
                    ));
                }
            }
        }
        self.span(null_space(self.field, &eqs, n))
    }

    /// Elements `x` with `[x, A]` and `[A, x]` inside `inner`; the preimage
    /// of the center of `A / inner`.
    pub fn relative_center(&self, inner: &Subspace) -> Subspace {
        let n = self.dim;
        let keep = inner.non_pivots();
        // reduction modulo `inner` followed by projection is linear in x
        let mut eqs = Vec::new();
        for i in 0..n {
            let left: Vec<Vector> = (0..n).map(|a| inner.reduce(self.product(a, i))).collect();
            let right: Vec<Vector> = (0..n).map(|a| inner.reduce(self.product(i, a))).collect();
            for &k in &keep {
                eqs.push(Vector::new(left.iter().map(|v| v[k].clone()).collect()));
                eqs.push(Vector::new(right.iter().map(|v| v[k].clone()).collect()));
            }
        }
        self.span(null_space(self.field, &eqs, n))
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        self.span_products(s, s).is_subspace_of(s)
    }

    pub fn is_ideal(&self, u: &Subspace) -> bool {
        let full = self.full_space();
        self.span_products(&full, u).is_subspace_of(u)
            && self.span_products(u, &full).is_subspace_of(u)
    }

    /// Smallest subalgebra containing `gens`.
    pub fn generated_subalgebra(&self, gens: &[Vector]) -> Subspace {
        let mut s = self.span(gens.iter().cloned());
        loop {
            let next = s.sum(&self.span_products(&s, &s));
            if next == s {
                return s;
            }
            s = next;
        }
    }

    /// Induced structure on a subalgebra, in the echelon basis of `s`.
    pub fn restrict(&self, s: &Subspace) -> Result<LeibnizAlgebra, AlgebraError> {
        if s.ambient_dim() != self.dim {
            return Err(AlgebraError::BadVector {
                got: s.ambient_dim(),
                dim: self.dim,
            });
        }
        if !self.is_subalgebra(s) {
            return Err(AlgebraError::NotASubalgebra);
        }
        let m = s.dim();
        let basis = s.basis();
        let mut products = Vec::with_capacity(m * m);
        for a in basis {
            for b in basis {
                let prod = self.bracket_unchecked(a, b);
                let coords = s.coordinates(&prod).expect("closed under bracket");
                products.push(Vector::new(coords));
            }
        }
        Ok(LeibnizAlgebra::from_products(m, self.field, products))
    }

    /// `A / I` on the complement spanned by the non-pivot coordinates of `I`.
    pub fn quotient(&self, ideal: &Subspace) -> Result<Quotient, AlgebraError> {
        if ideal.ambient_dim() != self.dim {
            return Err(AlgebraError::BadVector {
                got: ideal.ambient_dim(),
                dim: self.dim,
            });
        }
        if !self.is_ideal(ideal) {
            return Err(AlgebraError::NotAnIdeal);
        }
        let kept = ideal.non_pivots();
        let m = kept.len();
        let mut products = Vec::with_capacity(m * m);
        for &a in &kept {
            for &b in &kept {
                products.push(ideal.quotient_coords(self.product(a, b)));
            }
        }
        let mut algebra = LeibnizAlgebra::from_products(m, self.field, products);
        if let Some(labels) = &self.labels {
            algebra = algebra.with_labels(kept.iter().map(|&k| labels[k].clone()));
        }
        Ok(Quotient {
            algebra,
            ideal: ideal.clone(),
            kept,
        })
    }

    /// Block-diagonal sum; the basis of `other` follows the basis of `self`.
    pub fn direct_sum(&self, other: &LeibnizAlgebra) -> Result<LeibnizAlgebra, AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch(self.field, other.field));
        }
        let (n, m) = (self.dim, other.dim);
        let t = n + m;
        let mut products = vec![Vector::zero(self.field, t); t * t];
        let embed = |v: &Vector, offset: usize| {
            let mut coords = vec![self.field.zero(); t];
            for (k, c) in v.coords().iter().enumerate() {
                coords[offset + k] = c.clone();
            }
            Vector::new(coords)
        };
        for i in 0..n {
            for j in 0..n {
                products[i * t + j] = embed(self.product(i, j), 0);
            }
        }
        for i in 0..m {
            for j in 0..m {
                products[(n + i) * t + (n + j)] = embed(other.product(i, j), n);
            }
        }
        let mut sum = LeibnizAlgebra::from_products(t, self.field, products);
        if let (Some(a), Some(b)) = (&self.labels, &other.labels) {
            sum = sum.with_labels(a.iter().chain(b).cloned());
        }
        Ok(sum)
    }

    /// For a nilpotent algebra whose center has codimension 1, writes
    /// `A = I + J` with `I = span{a, a^2}` and `J` a complement of
    /// `span{a^2}` inside the center. `a` is the first basis vector outside
    /// the center.
    pub fn split_codim1_center(&self) -> Result<(Subspace, Subspace), AlgebraError> {
        let n = self.dim;
        let z = self.center();
        if n == 0 || z.dim() + 1 != n {
            return Err(AlgebraError::NotApplicable(format!(
                "center has dimension {} in an algebra of dimension {n}",
                z.dim()
            )));
        }
        if !crate::series::nilpotency_data(self).nilpotent {
            return Err(AlgebraError::NotApplicable("algebra is not nilpotent".into()));
        }
        let a_index = (0..n)
            .find(|&i| !z.contains(&self.basis_vector(i)))
            .expect("center is a proper subspace");
        let a = self.basis_vector(a_index);
        let a2 = self.square(&a);
        if a2.is_zero() || !z.contains(&a2) {
            return Err(AlgebraError::NotApplicable(
                "square of the chosen element is not a nonzero central element".into(),
            ));
        }
        // drop the first center row that a^2 actually uses
        let coords = z.coordinates(&a2).expect("a^2 is central");
        let drop = coords.iter().position(|c| !c.is_zero()).unwrap();
        let j = self.span(
            z.basis()
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != drop)
                .map(|(_, v)| v.clone()),
        );
        let i = self.span([a, a2]);
        let ok = self.is_ideal(&i)
            && self.is_ideal(&j)
            && i.intersection(&j).is_zero()
            && i.sum(&j).is_full();
        if !ok {
            return Err(AlgebraError::NotApplicable(
                "decomposition does not split the algebra".into(),
            ));
        }
        Ok((i, j))
    }

    /// Rational structure constants read in another field (reduction mod p
    /// for a prime field). Fails when a denominator vanishes there.
    pub fn over(&self, field: Field) -> Result<LeibnizAlgebra, AlgebraError> {
        if field == self.field {
            return Ok(self.clone());
        }
        if self.field.is_finite() {
            return Err(AlgebraError::FieldMismatch(self.field, field));
        }
        let products = self
            .products
            .iter()
            .map(|v| {
                let coords = v
                    .coords()
                    .iter()
                    .map(|c| field.from_rational(c.as_rational().expect("rational field")))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Vector::new(coords))
            })
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        Ok(LeibnizAlgebra {
            dim: self.dim,
            field,
            products,
            labels: self.labels.clone(),
        })
    }

    /// The same algebra in a new basis: row `r` of `basis` is the new basis
    /// vector `b_r` in old coordinates. Returns `None` when `basis` is
    /// singular.
    pub fn change_basis(&self, basis: &[Vector]) -> Option<LeibnizAlgebra> {
        let n = self.dim;
        let inv = crate::linalg::inverse(self.field, basis)?;
        let mut products = Vec::with_capacity(n * n);
        for a in basis {
            for b in basis {
                let prod = self.bracket_unchecked(a, b);
                products.push(vec_mat(self.field, &prod, &inv, n));
            }
        }
        Some(LeibnizAlgebra::from_products(n, self.field, products))
    }

    /// Whether the linear map sending `e_i` to `images[i]` (vectors of
    /// `other`) is a bijective homomorphism `self -> other`.
    pub fn is_isomorphism_onto(&self, other: &LeibnizAlgebra, images: &[Vector]) -> bool {
        let n = self.dim;
        if other.dim != n || images.len() != n || self.field != other.field {
            return false;
        }
        if crate::linalg::rank(images, n) != n {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = vec_mat(self.field, self.product(i, j), images, n);
                let rhs = other.bracket_unchecked(&images[i], &images[j]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Result of [`LeibnizAlgebra::quotient`] together with the projection data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub algebra: LeibnizAlgebra,
    pub ideal: Subspace,
    /// Ambient coordinates that index the quotient basis.
    pub kept: Vec<usize>,
}

impl Quotient {
    pub fn project(&self, v: &Vector) -> Vector {
        self.ideal.quotient_coords(v)
    }

    /// Preimage of a subspace of the quotient.
    pub fn preimage(&self, s: &Subspace) -> Subspace {
        let n = self.ideal.ambient_dim();
        let field = self.ideal.field();
        let lifted = s.basis().iter().map(|v| {
            let mut coords = vec![field.zero(); n];
            for (c, &k) in v.coords().iter().zip(&self.kept) {
                coords[k] = c.clone();
            }
            Vector::new(coords)
        });
        Subspace::span(field, n, lifted).sum(&self.ideal)
    }
}

impl fmt::Display for LeibnizAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-dimensional algebra over {}", self.dim, self.field)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let p = self.product(i, j);
                if p.is_zero() {
                    continue;
                }
                write!(f, "\n  [{}, {}] = ", self.label(i), self.label(j))?;
                let mut first = true;
                for (k, c) in p.coords().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    if c.is_one() {
                        write!(f, "{}", self.label(k))?;
                    } else {
                        write!(f, "{}*{}", c, self.label(k))?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn heisenberg(f: Field) -> LeibnizAlgebra {
        LeibnizAlgebra::from_sparse(3, f, &[(0, 1, &[(2, 1)]), (1, 0, &[(2, -1)])]).unwrap()
    }

    fn cyclic4(f: Field) -> LeibnizAlgebra {
        LeibnizAlgebra::from_sparse(
            4,
            f,
            &[(0, 0, &[(1, 1)]), (0, 1, &[(2, 1)]), (0, 2, &[(3, 1)])],
        )
        .unwrap()
    }

    fn v(f: Field, c: &[i64]) -> Vector {
        Vector::from_i64s(f, c)
    }

    #[test]
    fn table_errors() {
        let f = q();
        assert!(matches!(
            LeibnizAlgebra::from_table(2, f, &[(2, 0, v(f, &[1, 0]))]),
            Err(AlgebraError::BadIndex { index: 2, .. })
        ));
        assert!(matches!(
            LeibnizAlgebra::from_table(2, f, &[(0, 0, v(f, &[0, 1])), (0, 0, v(f, &[0, 1]))]),
            Err(AlgebraError::DuplicateEntry { i: 0, j: 0 })
        ));
        let g5 = Field::prime(5).unwrap();
        assert!(matches!(
            LeibnizAlgebra::from_table(2, f, &[(0, 0, v(g5, &[0, 1]))]),
            Err(AlgebraError::FieldMismatch(_, _))
        ));
        let a = LeibnizAlgebra::from_table(2, f, &[]).unwrap();
        assert!(a.is_abelian() && a.is_leibniz());
    }

    #[test]
    fn bracket_examples() {
        let f = q();
        let h = heisenberg(f);
        assert_eq!(
            h.bracket(&h.basis_vector(0), &h.basis_vector(1)).unwrap(),
            h.basis_vector(2)
        );
        assert!(h.bracket(&h.zero_vector(), &v(f, &[1, 2, 3])).unwrap().is_zero());
        assert!(matches!(
            h.bracket(&v(f, &[1, 0]), &h.basis_vector(0)),
            Err(AlgebraError::BadVector { got: 2, dim: 3 })
        ));
    }

    #[test]
    fn leibniz_checks() {
        let f = q();
        assert!(cyclic4(f).check_leibniz().is_empty());
        assert!(LeibnizAlgebra::abelian(f, 3).check_leibniz().is_empty());
        // Heisenberg with [x, z] = x; the triple (y, x, z) gives
        // [y, x] - [[y, x], z] - [x, [y, z]] = -z.
        let perturbed = LeibnizAlgebra::from_sparse(
            3,
            f,
            &[(0, 1, &[(2, 1)]), (1, 0, &[(2, -1)]), (0, 2, &[(0, 1)])],
        )
        .unwrap();
        let viol = perturbed.check_leibniz();
        assert!(!viol.is_empty());
        let hit = viol.iter().find(|x| (x.i, x.j, x.k) == (1, 0, 2)).unwrap();
        assert_eq!(hit.residual, v(f, &[0, 0, -1]));
    }

    #[test]
    fn products_of_subspaces() {
        let f = q();
        let h = heisenberg(f);
        let full = h.full_space();
        assert_eq!(h.span_products(&full, &full), h.span([h.basis_vector(2)]));
        let a = LeibnizAlgebra::abelian(f, 3);
        assert!(a.span_products(&a.full_space(), &a.full_space()).is_zero());
        let c = cyclic4(f);
        let a2 = c.span_products(&c.full_space(), &c.full_space());
        let a3 = c.span_products(&c.full_space(), &a2);
        assert_eq!(a3, c.span([c.basis_vector(2), c.basis_vector(3)]));
    }

    #[test]
    fn leib_and_centers() {
        let f = q();
        assert!(heisenberg(f).leib_ideal().is_zero());
        let c = cyclic4(f);
        // (x1 + x2)^2 = x2 + x3 and (x1 + x3)^2 = x2 + x4
        assert_eq!(c.leib_ideal(), c.derived());
        assert_eq!(heisenberg(f).center(), heisenberg(f).span([v(f, &[0, 0, 1])]));
        assert_eq!(c.center(), c.span([c.basis_vector(3)]));
        let a = LeibnizAlgebra::abelian(f, 2);
        assert!(a.center().is_full());
        assert!(c.center().is_subspace_of(&c.left_center()));
    }

    #[test]
    fn ideals_and_quotients() {
        let f = q();
        let h = heisenberg(f);
        let z = h.span([h.basis_vector(2)]);
        assert!(h.is_ideal(&z));
        assert!(h.is_ideal(&h.zero_space()));
        let c = cyclic4(f);
        assert!(!c.is_ideal(&c.span([c.basis_vector(0)])));

        let hq = h.quotient(&z).unwrap();
        assert_eq!(hq.algebra, LeibnizAlgebra::abelian(f, 2));

        let cq = c.quotient(&c.span([c.basis_vector(3)])).unwrap().algebra;
        let expect =
            LeibnizAlgebra::from_sparse(3, f, &[(0, 0, &[(1, 1)]), (0, 1, &[(2, 1)])]).unwrap();
        assert_eq!(cq, expect);
        assert!(cq.is_leibniz());

        assert_eq!(c.quotient(&c.zero_space()).unwrap().algebra, c);
        assert_eq!(
            c.quotient(&c.span([c.basis_vector(0)])),
            Err(AlgebraError::NotAnIdeal)
        );
    }

    #[test]
    fn direct_sums() {
        let f = q();
        let cyc2 = LeibnizAlgebra::from_sparse(2, f, &[(0, 0, &[(1, 1)])]).unwrap();
        let s = cyc2.direct_sum(&cyc2).unwrap();
        assert_eq!(s.dim(), 4);
        assert!(s.is_leibniz());
        let h1 = heisenberg(f).direct_sum(&LeibnizAlgebra::abelian(f, 1)).unwrap();
        assert_eq!(h1.center().dim(), 2);
        assert_eq!(cyc2.direct_sum(&LeibnizAlgebra::abelian(f, 0)).unwrap(), cyc2);
        let g3 = Field::prime(3).unwrap();
        assert!(matches!(
            cyc2.direct_sum(&LeibnizAlgebra::abelian(g3, 1)),
            Err(AlgebraError::FieldMismatch(_, _))
        ));
    }

    #[test]
    fn codim_one_center_split() {
        let f = q();
        let cyc2 = LeibnizAlgebra::from_sparse(2, f, &[(0, 0, &[(1, 1)])]).unwrap();
        let (i, j) = cyc2.split_codim1_center().unwrap();
        assert!(i.is_full() && j.is_zero());

        let a = LeibnizAlgebra::from_sparse(3, f, &[(0, 0, &[(2, 1)])]).unwrap();
        let (i, j) = a.split_codim1_center().unwrap();
        assert_eq!(i, a.span([a.basis_vector(0), a.basis_vector(2)]));
        assert_eq!(j, a.span([a.basis_vector(1)]));

        assert!(matches!(
            heisenberg(f).split_codim1_center(),
            Err(AlgebraError::NotApplicable(_))
        ));
    }

    #[test]
    fn restriction() {
        let f = q();
        let c = cyclic4(f);
        let s = c.span([c.basis_vector(1), c.basis_vector(2), c.basis_vector(3)]);
        assert!(c.restrict(&s).unwrap().is_abelian());
        assert_eq!(c.restrict(&c.full_space()).unwrap(), c.clone().without_labels());
        let not_closed = c.span([c.basis_vector(0)]);
        assert_eq!(c.restrict(&not_closed), Err(AlgebraError::NotASubalgebra));
    }

    #[test]
    fn basis_change_is_isomorphism() {
        let f = Field::prime(5).unwrap();
        let c = cyclic4(f);
        let basis = vec![
            v(f, &[1, 2, 0, 0]),
            v(f, &[0, 1, 0, 3]),
            v(f, &[0, 0, 1, 1]),
            v(f, &[0, 0, 0, 2]),
        ];
        let d = c.change_basis(&basis).unwrap();
        assert!(d.is_leibniz());
        assert!(d.is_isomorphism_onto(&c, &basis));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn gf5_vec(n: usize) -> impl Strategy<Value = Vector> {
            proptest::collection::vec(0u64..5, n).prop_map(|c| {
                let f = Field::prime(5).unwrap();
                Vector::new(c.into_iter().map(|x| f.from_residue(x)).collect())
            })
        }

        proptest! {
            #[test]
            fn bracket_is_bilinear(u in gf5_vec(4), w in gf5_vec(4), x in gf5_vec(4), s in 0u64..5) {
                let f = Field::prime(5).unwrap();
                let a = cyclic4(f).direct_sum(&LeibnizAlgebra::abelian(f, 0)).unwrap();
                let s = f.from_residue(s);
                let mut su = u.scale(&s);
                su = su.add(&w);
                let lhs = a.bracket(&su, &x).unwrap();
                let rhs = a.bracket(&u, &x).unwrap().scale(&s).add(&a.bracket(&w, &x).unwrap());
                prop_assert_eq!(lhs, rhs);
                let lhs = a.bracket(&x, &su).unwrap();
                let rhs = a.bracket(&x, &u).unwrap().scale(&s).add(&a.bracket(&x, &w).unwrap());
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn reading_rational_tables_mod_p() {
        let q = Field::rationals();
        let f = Field::prime(3).unwrap();
        let a = LeibnizAlgebra::from_sparse(2, q, &[(0, 0, &[(1, 4)])]).unwrap();
        let b = a.over(f).unwrap();
        assert_eq!(b.field(), f);
        assert_eq!(b.product(0, 0), &Vector::from_i64s(f, &[0, 1]));
        assert!(matches!(b.over(q), Err(AlgebraError::FieldMismatch(..))));
        let half = LeibnizAlgebra::from_table(1, q, &[(0, 0, Vector::new(vec![q.parse_element("1/3").unwrap()]))]).unwrap();
        assert!(half.over(f).is_err());
    }
}
