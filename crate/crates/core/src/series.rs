//! Central series, nilpotency class and coclass, Frattini subalgebra and
//! cyclicity.

use thiserror::Error;

use crate::algebra::LeibnizAlgebra;
use crate::linalg::{Subspace, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("algebra is not nilpotent")]
    NotNilpotent,
}

/// Dimensions of both central series with the derived class data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeriesProfile {
    /// `dim A^1, dim A^2, ...` up to the first repeated term.
    pub lower_dims: Vec<usize>,
    /// `dim Z_0, dim Z_1, ...` up to the first repeated term.
    pub upper_dims: Vec<usize>,
    pub nilpotent: bool,
    pub class: Option<usize>,
    pub coclass: Option<usize>,
}

/// `A^1 = A`, `A^{i+1} = [A, A^i]`. The last term is the stable one; when
/// it is nonzero it appears twice.
pub fn lower_central_series(a: &LeibnizAlgebra) -> Vec<Subspace> {
    let full = a.full_space();
    let mut out = vec![full.clone()];
    loop {
        let last = out.last().unwrap();
        if last.is_zero() {
            return out;
        }
        let next = a.span_products(&full, last);
        let stable = &next == last;
        out.push(next);
        if stable {
            return out;
        }
    }
}

/// `Z_0 = 0`, `Z_i` the preimage of the center of `A / Z_{i-1}`. Ends with
/// the whole space, or with a repeated proper term.
pub fn upper_central_series(a: &LeibnizAlgebra) -> Vec<Subspace> {
    let mut out = vec![a.zero_space()];
    loop {
        let last = out.last().unwrap();
        if last.is_full() {
            return out;
        }
        let next = a.relative_center(last);
        let stable = &next == last;
        out.push(next);
        if stable {
            return out;
        }
    }
}

/// The `i`-th term `Z_i`, padding with the stable term.
pub fn upper_central_term(a: &LeibnizAlgebra, i: usize) -> Subspace {
    let series = upper_central_series(a);
    series[i.min(series.len() - 1)].clone()
}

pub fn nilpotency_data(a: &LeibnizAlgebra) -> SeriesProfile {
    let lower = lower_central_series(a);
    let upper = upper_central_series(a);
    let lower_dims: Vec<usize> = lower.iter().map(Subspace::dim).collect();
    let upper_dims: Vec<usize> = upper.iter().map(Subspace::dim).collect();
    let nilpotent = lower.last().unwrap().is_zero();
    debug_assert_eq!(nilpotent, upper.last().unwrap().is_full());
    let (class, coclass) = if nilpotent {
        let c = lower.len() - 1;
        (Some(c), Some(a.dim() - c))
    } else {
        (None, None)
    };
    SeriesProfile {
        lower_dims,
        upper_dims,
        nilpotent,
        class,
        coclass,
    }
}

pub fn is_nilpotent(a: &LeibnizAlgebra) -> bool {
    lower_central_series(a).last().unwrap().is_zero()
}

/// For nilpotent algebras the Frattini subalgebra is `A^2`.
pub fn frattini(a: &LeibnizAlgebra) -> Result<Subspace, SeriesError> {
    if !is_nilpotent(a) {
        return Err(SeriesError::NotNilpotent);
    }
    Ok(a.derived())
}

/// Cyclicity test with a generator when the answer is yes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclicity {
    pub cyclic: bool,
    pub generator: Option<Vector>,
}

/// A nilpotent algebra is cyclic exactly when `A^2` has codimension at most
/// one. The generator is the first basis vector outside `A^2`, and it is
/// checked to generate the algebra.
pub fn is_cyclic(a: &LeibnizAlgebra) -> Result<Cyclicity, SeriesError> {
    let phi = frattini(a)?;
    if a.dim() == 0 {
        return Ok(Cyclicity {
            cyclic: true,
            generator: Some(a.zero_vector()),
        });
    }
    if phi.codim() != 1 {
        return Ok(Cyclicity {
            cyclic: false,
            generator: None,
        });
    }
    let g = (0..a.dim())
        .map(|i| a.basis_vector(i))
        .find(|v| !phi.contains(v))
        .expect("codimension one");
    assert!(
        a.generated_subalgebra(std::slice::from_ref(&g)).is_full(),
        "generator witness must generate"
    );
    Ok(Cyclicity {
        cyclic: true,
        generator: Some(g),
    })
}
