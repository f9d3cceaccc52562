//! Dense arithmetic mod a word-sized prime, used by the finite-field search
//! loops. Vectors are `Vec<u64>` of canonical residues.

use crate::algebra::LeibnizAlgebra;
use crate::field::{inv_mod, Field};
use crate::linalg::Vector;

#[inline]
pub(crate) fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub(crate) fn mul(a: u64, b: u64, p: u64) -> u64 {
    (a * b) % p
}

pub(crate) fn to_dense(v: &Vector) -> Vec<u64> {
    v.coords()
        .iter()
        .map(|c| c.residue_value().expect("finite field vector"))
        .collect()
}

pub(crate) fn to_vector(field: Field, v: &[u64]) -> Vector {
    Vector::new(v.iter().map(|&x| field.from_residue(x)).collect())
}

/// Structure constants as a flat table `c[(i * n + j) * n + k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct DenseAlgebra {
    pub n: usize,
    pub p: u64,
    pub c: Vec<u64>,
}

impl DenseAlgebra {
    pub fn new(a: &LeibnizAlgebra) -> Option<DenseAlgebra> {
        let p = a.field().modulus()?;
        let n = a.dim();
        let mut c = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                c.extend(to_dense(a.product(i, j)));
            }
        }
        Some(DenseAlgebra { n, p, c })
    }

    #[cfg(test)]
    pub fn to_algebra(&self, field: Field) -> LeibnizAlgebra {
        let n = self.n;
        let products = (0..n * n)
            .map(|ij| to_vector(field, &self.c[ij * n..(ij + 1) * n]))
            .collect();
        LeibnizAlgebra::from_products(n, field, products)
    }

    #[inline]
    pub fn row(&self, i: usize, j: usize) -> &[u64] {
        let s = (i * self.n + j) * self.n;
        &self.c[s..s + self.n]
    }

    /// `out += [x, y]`
    pub fn bracket_into(&self, x: &[u64], y: &[u64], out: &mut [u64]) {
        let (n, p) = (self.n, self.p);
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let s = mul(xi, yj, p);
                let row = &self.c[(i * n + j) * n..(i * n + j + 1) * n];
                for (o, &r) in out.iter_mut().zip(row) {
                    if r != 0 {
                        *o = (*o + s * r) % p;
                    }
                }
            }
        }
    }

    pub fn bracket(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.n];
        self.bracket_into(x, y, &mut out);
        out
    }

    /// Matrix of `y -> [v, y]` (as rows `[v, e_j]`).
    pub fn left_mult(&self, v: &[u64]) -> Vec<Vec<u64>> {
        (0..self.n)
            .map(|j| {
                let mut out = vec![0; self.n];
                for (i, &vi) in v.iter().enumerate() {
                    if vi != 0 {
                        axpy(&mut out, vi, self.row(i, j), self.p);
                    }
                }
                out
            })
            .collect()
    }

    /// Matrix of `y -> [y, v]`.
    pub fn right_mult(&self, v: &[u64]) -> Vec<Vec<u64>> {
        (0..self.n)
            .map(|i| {
                let mut out = vec![0; self.n];
                for (j, &vj) in v.iter().enumerate() {
                    if vj != 0 {
                        axpy(&mut out, vj, self.row(i, j), self.p);
                    }
                }
                out
            })
            .collect()
    }

    /// The same structure in the basis given by the rows of `basis`.
    pub fn change_basis(&self, basis: &[Vec<u64>], inverse: &[Vec<u64>]) -> DenseAlgebra {
        let n = self.n;
        let mut c = Vec::with_capacity(n * n * n);
        for a in basis {
            for b in basis {
                let prod = self.bracket(a, b);
                c.extend(vec_mat(&prod, inverse, self.p));
            }
        }
        DenseAlgebra { n, p: self.p, c }
    }
}

/// `out += s * v`
#[inline]
pub(crate) fn axpy(out: &mut [u64], s: u64, v: &[u64], p: u64) {
    for (o, &x) in out.iter_mut().zip(v) {
        if x != 0 {
            *o = (*o + s * x) % p;
        }
    }
}

/// Row vector times matrix.
pub(crate) fn vec_mat(v: &[u64], m: &[Vec<u64>], p: u64) -> Vec<u64> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut out = vec![0; ncols];
    for (&vi, row) in v.iter().zip(m) {
        if vi != 0 {
            axpy(&mut out, vi, row, p);
        }
    }
    out
}

pub(crate) fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    a.iter().map(|row| vec_mat(row, b, p)).collect()
}

/// In-place reduced row echelon form; zero rows are dropped and the pivot
/// columns returned.
pub(crate) fn rref(rows: &mut Vec<Vec<u64>>, ncols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(found) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let inv = inv_mod(rows[r][col], p);
        for x in rows[r].iter_mut() {
            *x = mul(*x, inv, p);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] != 0 {
                let f = p - row[col];
                axpy(row, f, &pivot_row, p);
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub(crate) fn rank(rows: &[Vec<u64>], ncols: usize, p: u64) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols, p).len()
}

pub(crate) fn inverse(rows: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = rows.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let mut aug: Vec<Vec<u64>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    let pivots = rref(&mut aug, 2 * n, p);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// An echelon basis kept reduced, for incremental independence tests.
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    pub p: u64,
    pub rows: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(p: u64) -> Echelon {
        Echelon {
            p,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows(rows: &[Vec<u64>], ncols: usize, p: u64) -> Echelon {
        let mut rows = rows.to_vec();
        let pivots = rref(&mut rows, ncols, p);
        Echelon { p, rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if v[c] != 0 {
                let f = self.p - v[c];
                axpy(&mut v, f, row, self.p);
            }
        }
        v
    }

    /// Adds `v` if it is independent; returns whether it was.
    pub fn insert(&mut self, v: &[u64]) -> bool {
        let r = self.reduce(v);
        let Some(col) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(r[col], self.p);
        let r: Vec<u64> = r.iter().map(|&x| mul(x, inv, self.p)).collect();
        for row in self.rows.iter_mut() {
            if row[col] != 0 {
                let f = self.p - row[col];
                axpy(row, f, &r, self.p);
            }
        }
        let at = self.pivots.partition_point(|&c| c < col);
        self.pivots.insert(at, col);
        self.rows.insert(at, r);
        true
    }
}

/// Solves `sum_u t_u cols[u] = target`. Returns a particular solution and a
/// basis of the homogeneous solutions, or `None` when inconsistent.
pub(crate) fn solve_affine(
    cols: &[Vec<u64>],
    target: &[u64],
    p: u64,
) -> Option<(Vec<u64>, Vec<Vec<u64>>)> {
    let nvars = cols.len();
    let neq = target.len();
    let mut rows: Vec<Vec<u64>> = (0..neq)
        .filter_map(|e| {
            let mut row: Vec<u64> = cols.iter().map(|c| c[e]).collect();
            row.push(target[e]);
            (row.iter().any(|&x| x != 0)).then_some(row)
        })
        .collect();
    let pivots = rref(&mut rows, nvars + 1, p);
    if pivots.last() == Some(&nvars) {
        return None;
    }
    let mut particular = vec![0; nvars];
    for (row, &c) in rows.iter().zip(&pivots) {
        particular[c] = row[nvars];
    }
    let mut kernel = Vec::new();
    for free in (0..nvars).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; nvars];
        v[free] = 1;
        for (row, &c) in rows.iter().zip(&pivots) {
            v[c] = (p - row[free]) % p;
        }
        kernel.push(v);
    }
    Some((particular, kernel))
}
