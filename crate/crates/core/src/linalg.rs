//! Exact linear algebra over a [`Field`]: vectors, canonical subspaces,
//! row reduction and null spaces.

use std::fmt;

use crate::field::{Field, FieldElement};

/// A coordinate vector over one field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vector {
    coords: Vec<FieldElement>,
}

impl Vector {
    pub fn new(coords: Vec<FieldElement>) -> Vector {
        Vector { coords }
    }

    pub fn zero(field: Field, n: usize) -> Vector {
        Vector {
            coords: vec![field.zero(); n],
        }
    }

    pub fn unit(field: Field, n: usize, i: usize) -> Vector {
        let mut v = Vector::zero(field, n);
        v.coords[i] = field.one();
        v
    }

    /// Builds a vector from integer coordinates.
    pub fn from_i64s(field: Field, coords: &[i64]) -> Vector {
        Vector {
            coords: coords.iter().map(|&c| field.from_i64(c)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<FieldElement> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElement::is_zero)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.len(), other.len());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.len(), other.len());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &FieldElement) -> Vector {
        Vector {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: &FieldElement, other: &Vector) {
        if s.is_zero() {
            return;
        }
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            if !b.is_zero() {
                *a += &(s * b);
            }
        }
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.coords.iter().position(|c| !c.is_zero())
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = FieldElement;
    fn index(&self, i: usize) -> &FieldElement {
        &self.coords[i]
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Reduces `rows` in place to reduced row-echelon form and returns the pivot
/// columns. Zero rows are dropped.
pub fn rref(rows: &mut Vec<Vector>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][col].inv().expect("pivot is nonzero");
        rows[r] = rows[r].scale(&inv);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let factor = -&row[col];
                row.add_scaled(&factor, &pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vector], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{x : row . x = 0 for every row}` in `field^ncols`, in the order
/// of the free columns.
pub fn null_space(field: Field, equations: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut m = equations.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = Vector::unit(field, ncols, fc);
            for (row, &pc) in m.iter().zip(&pivots) {
                v.coords[pc] = -&row[fc];
            }
            v
        })
        .collect()
}

/// Solves `sum_i x_i * columns[i] = target`, when possible.
pub fn solve_combination(
    field: Field,
    columns: &[Vector],
    target: &Vector,
) -> Option<Vec<FieldElement>> {
    let n = target.len();
    let k = columns.len();
    // augmented system: one equation per coordinate
    let mut rows: Vec<Vector> = (0..n)
        .map(|r| {
            let mut coords: Vec<FieldElement> = columns.iter().map(|c| c[r].clone()).collect();
            coords.push(target[r].clone());
            Vector::new(coords)
        })
        .collect();
    let pivots = rref(&mut rows, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut x = vec![field.zero(); k];
    for (row, &pc) in rows.iter().zip(&pivots) {
        x[pc] = row[k].clone();
    }
    Some(x)
}

/// Inverse of a square matrix given by rows.
pub fn inverse(field: Field, rows: &[Vector]) -> Option<Vec<Vector>> {
    let n = rows.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut aug: Vec<Vector> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut c = r.coords.clone();
            c.extend(Vector::unit(field, n, i).coords);
            Vector::new(c)
        })
        .collect();
    let pivots = rref(&mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(
        aug.into_iter()
            .map(|r| Vector::new(r.coords[n..].to_vec()))
            .collect(),
    )
}

/// `v * M` for a row vector and a matrix given by rows.
pub fn vec_mat(field: Field, v: &Vector, m: &[Vector], ncols: usize) -> Vector {
    let mut out = Vector::zero(field, ncols);
    for (c, row) in v.coords.iter().zip(m) {
        out.add_scaled(c, row);
    }
    out
}

/// A linear subspace of `field^n`, stored as its reduced row-echelon basis.
/// Equality of subspaces is equality of these canonical matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient_dim: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, n: usize) -> Subspace {
        Subspace {
            field,
            ambient_dim: n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, n: usize) -> Subspace {
        Subspace {
            field,
            ambient_dim: n,
            rows: (0..n).map(|i| Vector::unit(field, n, i)).collect(),
            pivots: (0..n).collect(),
        }
    }

    pub fn span<I>(field: Field, n: usize, vectors: I) -> Subspace
    where
        I: IntoIterator<Item = Vector>,
    {
        let mut rows: Vec<Vector> = vectors.into_iter().filter(|v| !v.is_zero()).collect();
        debug_assert!(rows.iter().all(|v| v.len() == n));
        let pivots = rref(&mut rows, n);
        Subspace {
            field,
            ambient_dim: n,
            rows,
            pivots,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// The canonical echelon rows.
    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.ambient_dim)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }

    /// Remainder of `v` modulo the subspace; it vanishes on every pivot column.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut r = v.clone();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if !r[pc].is_zero() {
                let factor = -&r[pc];
                r.add_scaled(&factor, row);
            }
        }
        r
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &Vector) -> Option<Vec<FieldElement>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc].clone()).collect())
    }

    /// Image of `v` in the quotient `field^n / self`, as the coordinates of
    /// its reduction on the non-pivot columns.
    pub fn quotient_coords(&self, v: &Vector) -> Vector {
        let r = self.reduce(v);
        Vector::new(self.non_pivots().into_iter().map(|c| r[c].clone()).collect())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(
            self.field,
            self.ambient_dim,
            self.rows.iter().chain(&other.rows).cloned(),
        )
    }

    /// Zassenhaus: reduce `[u | u]` and `[v | 0]` together; the rows whose
    /// left half vanishes span the intersection in their right half.
    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let n = self.ambient_dim;
        let zero = Vector::zero(self.field, n);
        let mut rows: Vec<Vector> = self
            .rows
            .iter()
            .map(|u| Vector::new([u.coords.clone(), u.coords.clone()].concat()))
            .chain(
                other
                    .rows
                    .iter()
                    .map(|v| Vector::new([v.coords.clone(), zero.coords.clone()].concat())),
            )
            .collect();
        let pivots = rref(&mut rows, 2 * n);
        let inter = rows
            .into_iter()
            .zip(pivots)
            .filter(|(_, pc)| *pc >= n)
            .map(|(r, _)| Vector::new(r.coords[n..].to_vec()));
        Subspace::span(self.field, n, inter)
    }

    /// Image of each echelon row under a linear map given by the images of
    /// the standard basis vectors.
    pub fn image(&self, images: &[Vector], target_dim: usize) -> Subspace {
        Subspace::span(
            self.field,
            target_dim,
            self.rows
                .iter()
                .map(|r| vec_mat(self.field, r, images, target_dim)),
        )
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

/// Every `k`-dimensional subspace of `GF(p)^n`, enumerated through their
/// reduced echelon forms. Only meant for small `p^n`.
pub fn enumerate_subspaces(field: Field, n: usize, k: usize) -> Vec<Subspace> {
    let p = field.modulus().expect("subspace enumeration needs a finite field");
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    choose_pivots(n, k, 0, &mut pivots, &mut |piv| {
        // free entries: row r, columns > piv[r] that are not pivots
        let slots: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                ((piv[r] + 1)..n)
                    .filter(|c| !piv.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let total = p.checked_pow(slots.len() as u32).expect("too many subspaces");
        for code in 0..total {
            let mut rows: Vec<Vector> = piv.iter().map(|&pc| Vector::unit(field, n, pc)).collect();
            let mut rest = code;
            for &(r, c) in &slots {
                rows[r].coords[c] = field.from_residue(rest % p);
                rest /= p;
            }
            out.push(Subspace {
                field,
                ambient_dim: n,
                rows,
                pivots: piv.to_vec(),
            });
        }
    });
    out
}

fn choose_pivots(
    n: usize,
    k: usize,
    start: usize,
    acc: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]),
) {
    if acc.len() == k {
        f(acc);
        return;
    }
    for c in start..n {
        acc.push(c);
        choose_pivots(n, k, c + 1, acc, f);
        acc.pop();
    }
}
