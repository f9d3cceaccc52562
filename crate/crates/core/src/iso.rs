//! Isomorphism invariants and isomorphism search.
//!
//! Over a prime field the search is exhaustive. Both algebras are rewritten
//! in a basis adapted to the lower central series in which every
//! non-generator is a bracket `[g, w]` of a generator with a basis vector of
//! the previous layer. A homomorphism is then fixed by the images of the
//! generators, and the homomorphism equations split by layer: the layer-`s`
//! part of the residual only sees the generator images up to layer `s - 1`,
//! and it is affine in the layer `s - 1` part once `s >= 3`. The layer-one
//! parts are enumerated by backtracking; deeper layers are solved as linear
//! systems.

use std::collections::HashMap;
use std::fmt;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::LeibnizAlgebra;
use crate::dense::{self, DenseAlgebra, Echelon};
use crate::field::Field;
use crate::linalg::{vec_mat, Vector};
use crate::series;

/// Largest dimension for which the finite-field search runs.
pub const MAX_SEARCH_DIM: usize = 7;
/// Largest `dim A / A^2` for which the finite-field search runs.
pub const MAX_SEARCH_GENERATORS: usize = 3;
/// The square profile is skipped above this many vectors.
pub const MAX_PROFILE_POINTS: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("scalars from different fields: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("a finite field is required")]
    NeedsFiniteField,
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("algebra does not satisfy the Leibniz identity")]
    NotLeibniz,
    #[error(
        "search bound exceeded: dimension {dim} with {generators} generators \
         (limits {MAX_SEARCH_DIM} and {MAX_SEARCH_GENERATORS})"
    )]
    SearchBoundExceeded { dim: usize, generators: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

/// One class of the square profile: how many projective points `v` have the
/// given square and multiplication ranks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SquareClass {
    pub square_zero: bool,
    pub left_rank: usize,
    pub right_rank: usize,
    pub count: u64,
}

/// Invariants that agree on isomorphic algebras.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub dim: usize,
    pub abelian: bool,
    pub leib_dim: usize,
    pub derived_dim: usize,
    pub center_dim: usize,
    pub left_center_dim: usize,
    pub lower_dims: Vec<usize>,
    pub upper_dims: Vec<usize>,
    /// Finite fields with at most [`MAX_PROFILE_POINTS`] vectors only.
    pub square_rank_profile: Option<Vec<SquareClass>>,
}

/// The first invariant on which two fingerprints disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantDiff {
    pub invariant: &'static str,
    pub left: String,
    pub right: String,
}

impl fmt::Display for InvariantDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant == "abelian" {
            let name = |s: &str| if s == "true" { "abelian" } else { "non-abelian" };
            return write!(f, "{} vs {}", name(&self.left), name(&self.right));
        }
        write!(f, "{} {} vs {}", self.invariant, self.left, self.right)
    }
}

pub fn fingerprint(a: &LeibnizAlgebra) -> Fingerprint {
    let profile = series::nilpotency_data(a);
    Fingerprint {
        dim: a.dim(),
        abelian: a.is_abelian(),
        leib_dim: a.leib_ideal().dim(),
        derived_dim: a.derived().dim(),
        center_dim: a.center().dim(),
        left_center_dim: a.left_center().dim(),
        lower_dims: profile.lower_dims,
        upper_dims: profile.upper_dims,
        square_rank_profile: square_rank_profile(a),
    }
}

fn square_rank_profile(a: &LeibnizAlgebra) -> Option<Vec<SquareClass>> {
    let d = DenseAlgebra::new(a)?;
    let (n, p) = (d.n, d.p);
    let total = p.checked_pow(n as u32)?;
    if total > MAX_PROFILE_POINTS {
        return None;
    }
    let mut counts = std::collections::BTreeMap::<(bool, usize, usize), u64>::new();
    // projective points: leading coordinate 1 at position `lead`
    for lead in 0..n {
        let tail = n - lead - 1;
        let mut v = vec![0u64; n];
        v[lead] = 1;
        for code in 0..p.pow(tail as u32) {
            let mut c = code;
            for x in &mut v[lead + 1..] {
                *x = c % p;
                c /= p;
            }
            let sq = d.bracket(&v, &v).iter().all(|&x| x == 0);
            let l = dense::rank(&d.left_mult(&v), n, p);
            let r = dense::rank(&d.right_mult(&v), n, p);
            *counts.entry((sq, l, r)).or_default() += 1;
        }
    }
    Some(
        counts
            .into_iter()
            .map(|((square_zero, left_rank, right_rank), count)| SquareClass {
                square_zero,
                left_rank,
                right_rank,
                count,
            })
            .collect(),
    )
}

impl Fingerprint {
    pub fn first_difference(&self, other: &Fingerprint) -> Option<InvariantDiff> {
        fn diff<T: PartialEq + fmt::Debug>(
            name: &'static str,
            a: &T,
            b: &T,
        ) -> Option<InvariantDiff> {
            (a != b).then(|| InvariantDiff {
                invariant: name,
                left: format!("{a:?}"),
                right: format!("{b:?}"),
            })
        }
        diff("dim", &self.dim, &other.dim)
            .or_else(|| diff("abelian", &self.abelian, &other.abelian))
            .or_else(|| diff("leib_dim", &self.leib_dim, &other.leib_dim))
            .or_else(|| diff("derived_dim", &self.derived_dim, &other.derived_dim))
            .or_else(|| diff("center_dim", &self.center_dim, &other.center_dim))
            .or_else(|| diff("left_center_dim", &self.left_center_dim, &other.left_center_dim))
            .or_else(|| diff("lower_dims", &self.lower_dims, &other.lower_dims))
            .or_else(|| diff("upper_dims", &self.upper_dims, &other.upper_dims))
            .or_else(|| {
                match (&self.square_rank_profile, &other.square_rank_profile) {
                    (Some(a), Some(b)) => diff("square_rank_profile", a, b),
                    _ => None,
                }
            })
    }

    /// Short hex digest of the whole fingerprint.
    pub fn digest(&self) -> String {
        let text = format!("{self:?}");
        Sha256::digest(text.as_bytes())
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// A linear map given by the images of the basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoMap {
    pub images: Vec<Vector>,
}

impl IsoMap {
    pub fn identity(field: Field, n: usize) -> IsoMap {
        IsoMap {
            images: (0..n).map(|i| Vector::unit(field, n, i)).collect(),
        }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let n = self.images.first().map_or(0, Vector::len);
        let field = v.coords().first().map_or(Field::rationals(), |c| c.field());
        vec_mat(field, v, &self.images, n)
    }

    /// `other ∘ self`
    pub fn then(&self, other: &IsoMap) -> IsoMap {
        IsoMap {
            images: self.images.iter().map(|v| other.apply(v)).collect(),
        }
    }

    pub fn inverse(&self) -> Option<IsoMap> {
        let field = self.images.first()?.coords().first()?.field();
        crate::linalg::inverse(field, &self.images).map(|images| IsoMap { images })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonIsoWitness {
    Invariant(InvariantDiff),
    /// The exhaustive search finished; `candidates` counts the generator
    /// images it tried.
    Exhausted { candidates: u64 },
}

impl fmt::Display for NonIsoWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonIsoWitness::Invariant(d) => write!(f, "{d}"),
            NonIsoWitness::Exhausted { candidates } => {
                write!(f, "exhaustive search over {candidates} generator images")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoVerdict {
    Yes(IsoMap),
    No(NonIsoWitness),
    Unknown(String),
}

impl IsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, IsoVerdict::No(_))
    }
}

/// Decides whether `a` and `b` are isomorphic. A `Yes` map is checked on all
/// basis pairs before it is returned.
pub fn is_isomorphic(a: &LeibnizAlgebra, b: &LeibnizAlgebra) -> Result<IsoVerdict, SearchError> {
    is_isomorphic_with(a, b, &fingerprint(a), &fingerprint(b))
}

/// [`is_isomorphic`] with precomputed fingerprints.
pub fn is_isomorphic_with(
    a: &LeibnizAlgebra,
    b: &LeibnizAlgebra,
    fa: &Fingerprint,
    fb: &Fingerprint,
) -> Result<IsoVerdict, SearchError> {
    let field = a.field();
    if b.field() != field {
        return Err(SearchError::FieldMismatch(field, b.field()));
    }
    if a.dim() == b.dim() && (0..a.dim()).all(|i| (0..a.dim()).all(|j| a.product(i, j) == b.product(i, j)))
    {
        return Ok(IsoVerdict::Yes(IsoMap::identity(field, a.dim())));
    }
    if let Some(d) = fa.first_difference(fb) {
        return Ok(IsoVerdict::No(NonIsoWitness::Invariant(d)));
    }
    if fa.abelian {
        return Ok(IsoVerdict::Yes(IsoMap::identity(field, a.dim())));
    }
    if !field.is_finite() {
        return Ok(IsoVerdict::Unknown(
            "all invariants agree; no search over an infinite field".into(),
        ));
    }
    if !a.is_leibniz() || !b.is_leibniz() {
        return Err(SearchError::NotLeibniz);
    }
    if *fa.lower_dims.last().unwrap() != 0 {
        return Err(SearchError::NotNilpotent);
    }
    let generators = fa.dim - fa.derived_dim;
    if fa.dim > MAX_SEARCH_DIM || generators > MAX_SEARCH_GENERATORS {
        return Err(SearchError::SearchBoundExceeded {
            dim: fa.dim,
            generators,
        });
    }
    Ok(match graded_search(a, b)? {
        Ok(map) => IsoVerdict::Yes(map),
        Err(candidates) => IsoVerdict::No(NonIsoWitness::Exhausted { candidates }),
    })
}

/// The exhaustive search on its own, for nilpotent Leibniz algebras over a
/// prime field. Returns the verified map, or the number of layer-one
/// candidates examined.
fn graded_search(a: &LeibnizAlgebra, b: &LeibnizAlgebra) -> Result<Result<IsoMap, u64>, SearchError> {
    let field = a.field();
    let (Some(da), Some(db)) = (DenseAlgebra::new(a), DenseAlgebra::new(b)) else {
        return Err(SearchError::NeedsFiniteField);
    };
    let (Some(ga), Some(gb)) = (Graded::new(&da), Graded::new(&db)) else {
        return Err(SearchError::NotNilpotent);
    };
    if ga.starts != gb.starts {
        return Ok(Err(0));
    }
    let mut search = Search::new(&ga, &gb);
    let Some(graded_map) = search.run() else {
        return Ok(Err(search.leaves));
    };
    let p = da.p;
    let m = dense::mat_mul(&dense::mat_mul(&ga.inverse, &graded_map, p), &gb.basis, p);
    let images: Vec<Vector> = m.iter().map(|r| dense::to_vector(field, r)).collect();
    if !a.is_isomorphism_onto(b, &images) {
        return Err(SearchError::Internal("search produced a non-isomorphism".into()));
    }
    Ok(Ok(IsoMap { images }))
}

/// An algebra rewritten in a basis adapted to its lower central series.
struct Graded {
    alg: DenseAlgebra,
    /// basis vectors in original coordinates
    basis: Vec<Vec<u64>>,
    inverse: Vec<Vec<u64>>,
    /// 1-based layer of each basis vector
    level: Vec<usize>,
    /// `starts[k]` is the first index of layer `k`; `starts[0] = 0` and
    /// `starts[c + 1] = n`
    starts: Vec<usize>,
    /// `(generator, previous-layer index)` for each non-generator
    words: Vec<(usize, usize)>,
    gens: usize,
    class: usize,
}

impl Graded {
    fn new(a: &DenseAlgebra) -> Option<Graded> {
        let (n, p) = (a.n, a.p);
        let unit = |i: usize| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        };
        // lower central series as echelon bases
        let mut lower = vec![Echelon::from_rows(&(0..n).map(unit).collect::<Vec<_>>(), n, p)];
        while lower.last().unwrap().dim() > 0 {
            let last = lower.last().unwrap();
            let mut prods = Vec::new();
            for i in 0..n {
                for w in &last.rows {
                    prods.push(a.bracket(&unit(i), w));
                }
            }
            let next = Echelon::from_rows(&prods, n, p);
            if next.dim() == last.dim() {
                return None;
            }
            lower.push(next);
        }
        let class = lower.len() - 1;
        let mut basis: Vec<Vec<u64>> = Vec::new();
        let mut level = Vec::new();
        let mut words = Vec::new();
        let mut starts = vec![0, 0];

        let mut ech = lower.get(1).cloned().unwrap_or_else(|| Echelon::new(p));
        for i in 0..n {
            if ech.insert(&unit(i)) {
                basis.push(unit(i));
                level.push(1);
            }
        }
        let gens = basis.len();
        starts.push(gens);
        for k in 2..=class {
            let mut ech = lower.get(k).cloned().unwrap_or_else(|| Echelon::new(p));
            let (prev_lo, prev_hi) = (starts[k - 1], starts[k]);
            for g in 0..gens {
                for b in prev_lo..prev_hi {
                    let w = a.bracket(&basis[g], &basis[b]);
                    if ech.insert(&w) {
                        basis.push(w);
                        level.push(k);
                        words.push((g, b));
                    }
                }
            }
            if basis.len() - prev_hi != lower[k - 1].dim() - lower[k].dim() {
                return None;
            }
            starts.push(basis.len());
        }
        if basis.len() != n {
            return None;
        }
        let inverse = dense::inverse(&basis, p)?;
        let alg = a.change_basis(&basis, &inverse);
        for i in 0..n {
            for j in 0..n {
                for (m, &c) in alg.row(i, j).iter().enumerate() {
                    if c != 0 && level[m] < level[i] + level[j] {
                        return None;
                    }
                }
            }
        }
        Some(Graded {
            alg,
            basis,
            inverse,
            level,
            starts,
            words,
            gens,
            class,
        })
    }

    fn layer(&self, k: usize) -> std::ops::Range<usize> {
        self.starts[k]..self.starts[k + 1]
    }
}

struct Search<'a> {
    a: &'a Graded,
    b: &'a Graded,
    p: u64,
    n: usize,
    /// generator images in the graded coordinates of `b`
    h: Vec<Vec<u64>>,
    /// layer-two checks on generator pairs, grouped by the last generator
    /// they depend on
    ready: Vec<Vec<(usize, usize)>>,
    /// layer-two signature of each generator of `a`
    wanted: Vec<Signature>,
    /// signatures of candidate images, by code
    seen: HashMap<u64, Signature>,
    leaves: u64,
}

/// For `x` in the first layer: the ranks of `y -> [x,y]` and `y -> [y,x]`
/// from layer one to layer two, and whether `[x,x]` has a layer-two part.
type Signature = (usize, usize, bool);

fn signature(g: &Graded, x: &[u64]) -> Signature {
    let (n, p, d) = (g.alg.n, g.alg.p, g.gens);
    let two = g.layer(2);
    let unit = |i: usize| {
        let mut v = vec![0; n];
        v[i] = 1;
        v
    };
    let cut = |v: Vec<u64>| v[two.clone()].to_vec();
    let left: Vec<Vec<u64>> = (0..d).map(|y| cut(g.alg.bracket(x, &unit(y)))).collect();
    let right: Vec<Vec<u64>> = (0..d).map(|y| cut(g.alg.bracket(&unit(y), x))).collect();
    let square = cut(g.alg.bracket(x, x)).iter().any(|&c| c != 0);
    (
        Echelon::from_rows(&left, two.len(), p).dim(),
        Echelon::from_rows(&right, two.len(), p).dim(),
        square,
    )
}

impl<'a> Search<'a> {
    fn new(a: &'a Graded, b: &'a Graded) -> Search<'a> {
        let n = a.alg.n;
        let d = a.gens;
        let mut ready = vec![Vec::new(); d];
        for i in 0..d {
            for j in 0..d {
                let mut r = i.max(j);
                for m in a.layer(2) {
                    if a.alg.row(i, j)[m] != 0 {
                        let (g, w) = a.words[m - d];
                        r = r.max(g).max(w);
                    }
                }
                ready[r].push((i, j));
            }
        }
        let wanted = (0..d)
            .map(|g| {
                let mut x = vec![0; n];
                x[g] = 1;
                signature(a, &x)
            })
            .collect();
        Search {
            a,
            b,
            p: a.alg.p,
            n,
            h: vec![vec![0; n]; d],
            ready,
            wanted,
            seen: HashMap::new(),
            leaves: 0,
        }
    }

    fn run(&mut self) -> Option<Vec<Vec<u64>>> {
        self.assign_generator(0, &Echelon::new(self.p))
    }

    fn images(&self) -> Vec<Vec<u64>> {
        let d = self.a.gens;
        let mut f = self.h.clone();
        for m in d..self.n {
            let (g, w) = self.a.words[m - d];
            let img = self.b.alg.bracket(&f[g], &f[w]);
            f.push(img);
        }
        f
    }

    /// Layer-`s` coordinates of `f([e_i, e_j]) - [f e_i, f e_j]` over all
    /// pairs with `level(i) + level(j) <= s`.
    fn residual(&self, f: &[Vec<u64>], s: usize) -> Vec<u64> {
        let (n, p) = (self.n, self.p);
        let range = self.b.layer(s);
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.a.level[i] + self.a.level[j] > s {
                    continue;
                }
                let mut r = vec![0; n];
                for (m, &c) in self.a.alg.row(i, j).iter().enumerate() {
                    if c != 0 {
                        dense::axpy(&mut r, c, &f[m], p);
                    }
                }
                let br = self.b.alg.bracket(&f[i], &f[j]);
                for k in range.clone() {
                    out.push(dense::sub(r[k], br[k], p));
                }
            }
        }
        out
    }

    fn layer_two_ok(&self, g: usize) -> bool {
        let p = self.p;
        let d = self.a.gens;
        let range = self.b.layer(2);
        for &(i, j) in &self.ready[g] {
            let br = self.b.alg.bracket(&self.h[i], &self.h[j]);
            let mut r = vec![0; self.n];
            for m in self.a.layer(2) {
                let c = self.a.alg.row(i, j)[m];
                if c != 0 {
                    let (x, y) = self.a.words[m - d];
                    let img = self.b.alg.bracket(&self.h[x], &self.h[y]);
                    dense::axpy(&mut r, c, &img, p);
                }
            }
            if range.clone().any(|k| r[k] != br[k]) {
                return false;
            }
        }
        true
    }

    fn assign_generator(&mut self, g: usize, chosen: &Echelon) -> Option<Vec<Vec<u64>>> {
        let d = self.a.gens;
        if g == d {
            return self.lift(3);
        }
        let p = self.p;
        let total = p.pow(d as u32);
        for code in 0..total {
            let mut x = vec![0; d];
            let mut c = code;
            for k in (0..d).rev() {
                x[k] = c % p;
                c /= p;
            }
            let mut candidate = vec![0; self.n];
            candidate[..d].copy_from_slice(&x);
            let b = self.b;
            let sig = *self.seen.entry(code).or_insert_with(|| signature(b, &candidate));
            if sig != self.wanted[g] {
                continue;
            }
            let mut next = chosen.clone();
            if !next.insert(&x) {
                continue;
            }
            self.leaves += 1;
            self.h[g] = candidate;
            if !self.layer_two_ok(g) {
                continue;
            }
            if let Some(f) = self.assign_generator(g + 1, &next) {
                return Some(f);
            }
        }
        self.h[g] = vec![0; self.n];
        None
    }

    /// Solves for the layer `s - 1` components of the generator images.
    fn lift(&mut self, s: usize) -> Option<Vec<Vec<u64>>> {
        let c = self.a.class;
        if s > c {
            return Some(self.images());
        }
        let p = self.p;
        let d = self.a.gens;
        let unknowns: Vec<(usize, usize)> = (0..d)
            .flat_map(|g| self.b.layer(s - 1).map(move |q| (g, q)))
            .collect();
        let r0 = self.residual(&self.images(), s);
        let mut cols = Vec::with_capacity(unknowns.len());
        for &(g, q) in &unknowns {
            self.h[g][q] = 1;
            let r = self.residual(&self.images(), s);
            self.h[g][q] = 0;
            cols.push(r.iter().zip(&r0).map(|(&x, &y)| dense::sub(x, y, p)).collect::<Vec<_>>());
        }
        let target: Vec<u64> = r0.iter().map(|&x| (p - x) % p).collect();
        let (particular, kernel) = dense::solve_affine(&cols, &target, p)?;
        let set = |h: &mut Vec<Vec<u64>>, t: &[u64]| {
            for (&(g, q), &v) in unknowns.iter().zip(t) {
                h[g][q] = v;
            }
        };
        if s == c {
            set(&mut self.h, &particular);
            let f = self.images();
            set(&mut self.h, &vec![0; unknowns.len()]);
            return Some(f);
        }
        let k = kernel.len();
        for code in 0..p.pow(k as u32) {
            let mut t = particular.clone();
            let mut c = code;
            for v in &kernel {
                dense::axpy(&mut t, c % p, v, p);
                c /= p;
            }
            set(&mut self.h, &t);
            if let Some(f) = self.lift(s + 1) {
                set(&mut self.h, &vec![0; unknowns.len()]);
                return Some(f);
            }
        }
        set(&mut self.h, &vec![0; unknowns.len()]);
        None
    }
}
