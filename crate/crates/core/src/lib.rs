//! Exact computations with finite-dimensional left Leibniz algebras.
//!
//! Algebras are given by structure constants over the rationals or a prime
//! field. The crate computes central series, class and coclass, centers and
//! the span of squares, enumerates maximal subalgebras of nilpotent algebras
//! over `GF(p)`, searches for isomorphisms and checks whether all maximal
//! subalgebras are isomorphic (P1) or share their upper central series
//! dimensions (P2).
//!
//! ```
//! use leibalg::{check_p2, Field, LeibnizAlgebra};
//!
//! let f = Field::prime(3).unwrap();
//! let h = LeibnizAlgebra::from_sparse(3, f, &[(0, 1, &[(2, 1)]), (1, 0, &[(2, -1)])]).unwrap();
//! assert!(check_p2(&h).unwrap().holds);
//! ```
//!
//! The guide in `book/` walks through each module.

pub mod algebra;
pub mod catalog;
pub mod constraints;
mod dense;
pub mod field;
pub mod format;
pub mod iso;
pub mod linalg;
pub mod maximal;
pub mod poly;
pub mod random;
pub mod reproduce;
pub mod series;

pub use algebra::{AlgebraError, LeibnizAlgebra, Quotient, SparseProduct, Violation};
pub use field::{Field, FieldElement, FieldError, FieldKind};
pub use linalg::{Subspace, Vector};
pub use series::{nilpotency_data, SeriesError, SeriesProfile};
pub use iso::{fingerprint, is_isomorphic, Fingerprint, IsoMap, IsoVerdict, NonIsoWitness, SearchError};
pub use maximal::{check_p1, check_p2, enumerate_maximal, MaximalSubalgebra, PropertyReport};
pub use catalog::{CatalogEntry, CatalogError, ParamValue};
pub use constraints::{leibniz_constraints, verify_implied_relations, ParametricAlgebra, RelationsReport};
pub use format::{parse_algebra, parse_parametric, write_algebra, FormatError};
pub use poly::MultiPoly;
pub use reproduce::{ReproduceConfig, Report, Verdict};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/maximals.md")]
    mod maximals {}
    #[doc = include_str!("../../../book/src/isomorphism.md")]
    mod isomorphism {}
    #[doc = include_str!("../../../book/src/catalog.md")]
    mod catalog {}
    #[doc = include_str!("../../../book/src/constraints.md")]
    mod constraints {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
