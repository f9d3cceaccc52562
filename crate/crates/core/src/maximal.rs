//! Maximal subalgebras of nilpotent algebras over prime fields and the
//! properties P1 (all maximal subalgebras isomorphic) and P2 (all maximal
//! subalgebras have the same upper central series dimensions).
//!
//! In a nilpotent algebra the maximal subalgebras are the hyperplanes that
//! contain `A^2`, so they correspond to the points of the projective space
//! of `(A / A^2)^*`.

use std::fmt;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::LeibnizAlgebra;
use crate::iso::{
    fingerprint, is_isomorphic_with, Fingerprint, InvariantDiff, IsoMap, IsoVerdict,
    NonIsoWitness, SearchError,
};
use crate::linalg::{null_space, Subspace, Vector};
use crate::series;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalSubalgebra {
    pub subspace: Subspace,
    /// Structure on the echelon basis of `subspace`.
    pub induced: LeibnizAlgebra,
    /// Covector on `A / A^2` (in the coordinates that are not pivots of
    /// `A^2`) whose kernel is the hyperplane; first nonzero entry is 1.
    pub hyperplane_tag: Vector,
}

impl MaximalSubalgebra {
    pub fn tag_string(&self) -> String {
        let parts: Vec<String> = self
            .hyperplane_tag
            .coords()
            .iter()
            .map(ToString::to_string)
            .collect();
        format!("[{}]", parts.join(","))
    }
}

fn require_finite_nilpotent(a: &LeibnizAlgebra) -> Result<(), SearchError> {
    if !a.field().is_finite() {
        return Err(SearchError::NeedsFiniteField);
    }
    if !series::is_nilpotent(a) {
        return Err(SearchError::NotNilpotent);
    }
    Ok(())
}

/// All maximal subalgebras, sorted by hyperplane tag.
pub fn enumerate_maximal(a: &LeibnizAlgebra) -> Result<Vec<MaximalSubalgebra>, SearchError> {
    require_finite_nilpotent(a)?;
    let field = a.field();
    let p = field.modulus().unwrap();
    let n = a.dim();
    let a2 = a.derived();
    let kept = a2.non_pivots();
    let d = kept.len();
    let mut tags = Vec::new();
    for code in 0..p.pow(d as u32) {
        let mut c = code;
        let mut x = vec![0u64; d];
        for k in (0..d).rev() {
            x[k] = c % p;
            c /= p;
        }
        if x.iter().find(|&&v| v != 0) == Some(&1) {
            tags.push(Vector::new(x.into_iter().map(|v| field.from_residue(v)).collect()));
        }
    }
    Ok(tags
        .into_par_iter()
        .map(|tag| {
            let kernel = null_space(field, std::slice::from_ref(&tag), d);
            let lifted = kernel.into_iter().map(|k| {
                let mut coords = vec![field.zero(); n];
                for (c, &pos) in k.into_coords().into_iter().zip(&kept) {
                    coords[pos] = c;
                }
                Vector::new(coords)
            });
            let subspace = a.span(lifted).sum(&a2);
            let induced = a.restrict(&subspace).expect("hyperplanes over A^2 are subalgebras");
            MaximalSubalgebra {
                subspace,
                induced,
                hyperplane_tag: tag,
            }
        })
        .collect())
}

/// Intersection of all maximal subalgebras.
pub fn frattini_by_intersection(a: &LeibnizAlgebra) -> Result<Subspace, SearchError> {
    let maximals = enumerate_maximal(a)?;
    Ok(maximals
        .iter()
        .map(|m| m.subspace.clone())
        .reduce(|x, y| x.intersection(&y))
        .unwrap_or_else(|| a.zero_space()))
}

/// Two maximal subalgebras that were told apart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub first: usize,
    pub second: usize,
    pub first_tag: String,
    pub second_tag: String,
    pub witness: NonIsoWitness,
    pub abelian: (bool, bool),
}

impl fmt::Display for PairWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{} vs M{}: {}", self.first_tag, self.second_tag, self.witness)?;
        let is_abelian_diff = matches!(
            &self.witness,
            NonIsoWitness::Invariant(d) if d.invariant == "abelian"
        );
        if self.abelian.0 != self.abelian.1 && !is_abelian_diff {
            let (ab, non) = if self.abelian.0 {
                (&self.first_tag, &self.second_tag)
            } else {
                (&self.second_tag, &self.first_tag)
            };
            write!(f, "; M{ab} abelian, M{non} non-abelian")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub holds: bool,
    pub maximal_count: usize,
    pub witness: Option<PairWitness>,
    /// For P1: maps from the first maximal subalgebra onto each of them.
    pub maps: Vec<IsoMap>,
    /// Indices of the triple whose composed maps were checked.
    pub transitivity_triple: Option<(usize, usize, usize)>,
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} maximal subalgebras", self.maximal_count)?;
        if let Some(w) = &self.witness {
            write!(f, "; {w}")?;
        }
        Ok(())
    }
}

fn pair(ms: &[MaximalSubalgebra], i: usize, j: usize, witness: NonIsoWitness) -> PairWitness {
    PairWitness {
        first: i,
        second: j,
        first_tag: ms[i].tag_string(),
        second_tag: ms[j].tag_string(),
        witness,
        abelian: (ms[i].induced.is_abelian(), ms[j].induced.is_abelian()),
    }
}

pub fn check_p1(a: &LeibnizAlgebra) -> Result<PropertyReport, SearchError> {
    check_p1_seeded(a, 0)
}

/// P1 by comparing every maximal subalgebra with the first one. When there
/// are at least three, a random triple (from `seed`) is also checked by
/// composing the maps found.
pub fn check_p1_seeded(a: &LeibnizAlgebra, seed: u64) -> Result<PropertyReport, SearchError> {
    let ms = enumerate_maximal(a)?;
    let m = ms.len();
    if m <= 1 {
        return Ok(PropertyReport {
            holds: true,
            maximal_count: m,
            witness: None,
            maps: ms
                .iter()
                .map(|x| IsoMap::identity(a.field(), x.induced.dim()))
                .collect(),
            transitivity_triple: None,
        });
    }
    let fps: Vec<Fingerprint> = ms.par_iter().map(|x| fingerprint(&x.induced)).collect();
    let verdicts: Vec<Result<IsoVerdict, SearchError>> = (1..m)
        .into_par_iter()
        .map(|j| is_isomorphic_with(&ms[0].induced, &ms[j].induced, &fps[0], &fps[j]))
        .collect();
    let mut maps = vec![IsoMap::identity(a.field(), ms[0].induced.dim())];
    for (offset, v) in verdicts.into_iter().enumerate() {
        let j = offset + 1;
        match v? {
            IsoVerdict::Yes(map) => maps.push(map),
            IsoVerdict::No(w) => {
                return Ok(PropertyReport {
                    holds: false,
                    maximal_count: m,
                    witness: Some(pair(&ms, 0, j, w)),
                    maps: Vec::new(),
                    transitivity_triple: None,
                })
            }
            IsoVerdict::Unknown(why) => return Err(SearchError::Internal(why)),
        }
    }
    let mut triple = None;
    if m >= 3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx = sample(&mut rng, m, 3).into_vec();
        idx.sort_unstable();
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        let between = |x: usize, y: usize| {
            maps[x]
                .inverse()
                .map(|inv| inv.then(&maps[y]))
                .ok_or_else(|| SearchError::Internal("singular map".into()))
        };
        let ij = between(i, j)?;
        let jk = between(j, k)?;
        let ik = ij.then(&jk);
        for (x, y, map) in [(i, j, &ij), (j, k, &jk), (i, k, &ik)] {
            if !ms[x].induced.is_isomorphism_onto(&ms[y].induced, &map.images) {
                return Err(SearchError::Internal(format!(
                    "composed map M{x} -> M{y} is not an isomorphism"
                )));
            }
        }
        triple = Some((i, j, k));
    }
    Ok(PropertyReport {
        holds: true,
        maximal_count: m,
        witness: None,
        maps,
        transitivity_triple: triple,
    })
}

/// P2: every maximal subalgebra has the upper central series dimensions of
/// the first one.
pub fn check_p2(a: &LeibnizAlgebra) -> Result<PropertyReport, SearchError> {
    let ms = enumerate_maximal(a)?;
    let m = ms.len();
    let dims: Vec<Vec<usize>> = ms
        .par_iter()
        .map(|x| series::nilpotency_data(&x.induced).upper_dims)
        .collect();
    let witness = (1..m).find(|&j| dims[j] != dims[0]).map(|j| {
        let diff = InvariantDiff {
            invariant: "upper_dims",
            left: format!("{:?}", dims[0]),
            right: format!("{:?}", dims[j]),
        };
        pair(&ms, 0, j, NonIsoWitness::Invariant(diff))
    });
    Ok(PropertyReport {
        holds: witness.is_none(),
        maximal_count: m,
        witness,
        maps: Vec::new(),
        transitivity_triple: None,
    })
}
