//! Exact scalars: the rationals and prime fields `GF(p)`.
//!
//! A [`FieldElement`] always carries the [`Field`] it lives in, so mixing
//! scalars from different fields is caught at the operation that would mix
//! them. Rationals are kept in lowest terms with a positive denominator and
//! residues are kept in `[0, p)`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Primes below this bound get their square roots by exhaustive search.
const EXHAUSTIVE_SQRT_BOUND: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("cannot construct field: {0}")]
    ConstructionError(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("cannot parse {0:?} as a scalar")]
    BadLiteral(String),
    #[error("cannot parse {0:?} as a field (expected `Q` or `GF(p)`)")]
    BadFieldLiteral(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Rationals,
    PrimeField,
}

/// Descriptor of the base field. `GF(p)` moduli are checked for primality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    modulus: Option<u64>,
}

impl Field {
    pub fn make(kind: FieldKind, modulus: Option<u64>) -> Result<Field, FieldError> {
        match (kind, modulus) {
            (FieldKind::Rationals, None) => Ok(Field::rationals()),
            (FieldKind::Rationals, Some(_)) => Err(FieldError::ConstructionError(
                "the rationals take no modulus".into(),
            )),
            (FieldKind::PrimeField, None) => Err(FieldError::ConstructionError(
                "a prime field needs a modulus".into(),
            )),
            (FieldKind::PrimeField, Some(p)) => Field::prime(p),
        }
    }

    pub const fn rationals() -> Field {
        Field { modulus: None }
    }

    /// `GF(p)`. Moduli must be prime and below `2^32` so that products of
    /// residues fit in a `u64`.
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if p < 2 {
            return Err(FieldError::ConstructionError(format!(
                "modulus {p} is smaller than 2"
            )));
        }
        if p > u32::MAX as u64 {
            return Err(FieldError::ConstructionError(format!(
                "modulus {p} exceeds 2^32"
            )));
        }
        if !is_prime(p) {
            return Err(FieldError::ConstructionError(format!(
                "modulus {p} is not prime"
            )));
        }
        Ok(Field { modulus: Some(p) })
    }

    pub fn kind(&self) -> FieldKind {
        match self.modulus {
            None => FieldKind::Rationals,
            Some(_) => FieldKind::PrimeField,
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    /// 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        self.modulus.unwrap_or(0)
    }

    pub fn is_finite(&self) -> bool {
        self.modulus.is_some()
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        match self.modulus {
            None => FieldElement::rational(BigRational::from_integer(BigInt::from(n))),
            Some(p) => FieldElement::residue(n.rem_euclid(p as i64) as u64, p),
        }
    }

    pub fn from_residue(&self, n: u64) -> FieldElement {
        match self.modulus {
            None => self.from_bigint(&BigInt::from(n)),
            Some(p) => FieldElement::residue(n % p, p),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        match self.modulus {
            None => FieldElement::rational(BigRational::from_integer(n.clone())),
            Some(p) => FieldElement::residue(reduce_bigint(n, p), p),
        }
    }

    /// Embeds a rational into this field; fails when the denominator
    /// vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement, FieldError> {
        match self.modulus {
            None => Ok(FieldElement::rational(q.clone())),
            Some(p) => {
                let num = reduce_bigint(q.numer(), p);
                let den = reduce_bigint(q.denom(), p);
                if den == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                Ok(FieldElement::residue(mul_mod(num, inv_mod(den, p), p), p))
            }
        }
    }

    /// Parses a scalar literal: an integer `-12` or a fraction `3/4`.
    /// In `GF(p)` integers are reduced mod p and fractions become
    /// quotients of residues.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement, FieldError> {
        let q = parse_rational(s)?;
        self.from_rational(&q).map_err(|_| FieldError::BadLiteral(s.into()))
    }

    /// All elements in canonical order, for finite fields.
    pub fn elements(&self) -> Option<impl Iterator<Item = FieldElement> + '_> {
        let p = self.modulus?;
        Some((0..p).map(move |v| FieldElement::residue(v, p)))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            None => write!(f, "Q"),
            Some(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for Field {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Q" {
            return Ok(Field::rationals());
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| FieldError::BadFieldLiteral(s.into()))?;
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| FieldError::BadFieldLiteral(s.into()))?;
        Field::prime(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

/// An exact scalar together with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    repr: Repr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
    Inv,
    Div,
}

/// Dispatches one field operation. Binary operations need `y`.
pub fn arith(
    op: ArithOp,
    x: &FieldElement,
    y: Option<&FieldElement>,
) -> Result<FieldElement, FieldError> {
    let need = || {
        y.ok_or_else(|| FieldError::ConstructionError(format!("{op:?} needs two operands")))
    };
    match op {
        ArithOp::Add => x.checked_add(need()?),
        ArithOp::Sub => x.checked_sub(need()?),
        ArithOp::Mul => x.checked_mul(need()?),
        ArithOp::Div => x.checked_div(need()?),
        ArithOp::Neg => Ok(-x),
        ArithOp::Inv => x.inv(),
    }
}

impl FieldElement {
    fn rational(q: BigRational) -> Self {
        // BigRational keeps itself reduced with positive denominator.
        FieldElement {
            repr: Repr::Rational(q),
        }
    }

    fn residue(value: u64, modulus: u64) -> Self {
        debug_assert!(value < modulus);
        FieldElement {
            repr: Repr::Residue { value, modulus },
        }
    }

    pub fn field(&self) -> Field {
        match &self.repr {
            Repr::Rational(_) => Field::rationals(),
            Repr::Residue { modulus, .. } => Field {
                modulus: Some(*modulus),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => q.is_zero(),
            Repr::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => q.is_one(),
            Repr::Residue { value, .. } => *value == 1,
        }
    }

    /// The canonical residue, for elements of `GF(p)`.
    pub fn residue_value(&self) -> Option<u64> {
        match &self.repr {
            Repr::Residue { value, .. } => Some(*value),
            Repr::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rational(q) => Some(q),
            Repr::Residue { .. } => None,
        }
    }

    /// Rebuilds the canonical form from the stored value.
    pub fn normalized(&self) -> FieldElement {
        match &self.repr {
            Repr::Rational(q) => FieldElement::rational(BigRational::new(
                q.numer().clone(),
                q.denom().clone(),
            )),
            Repr::Residue { value, modulus } => FieldElement::residue(value % modulus, *modulus),
        }
    }

    fn same_field(&self, other: &FieldElement) -> Result<(), FieldError> {
        let (a, b) = (self.field(), other.field());
        if a == b {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch(a, b))
        }
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => FieldElement::rational(a + b),
            (Repr::Residue { value: a, modulus }, Repr::Residue { value: b, .. }) => {
                FieldElement::residue((a + b) % modulus, *modulus)
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        Ok(match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => FieldElement::rational(a * b),
            (Repr::Residue { value: a, modulus }, Repr::Residue { value: b, .. }) => {
                FieldElement::residue(mul_mod(*a, *b, *modulus), *modulus)
            }
            _ => unreachable!(),
        })
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.same_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.repr {
            Repr::Rational(q) => FieldElement::rational(q.recip()),
            Repr::Residue { value, modulus } => {
                FieldElement::residue(inv_mod(*value, *modulus), *modulus)
            }
        })
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Whether some `y` in the same field has `y^2 = self`.
    pub fn is_square(&self) -> bool {
        match &self.repr {
            Repr::Residue { value, modulus } => is_square_mod(*value, *modulus),
            Repr::Rational(q) => {
                if q.is_negative() {
                    return false;
                }
                is_perfect_square(q.numer()) && is_perfect_square(q.denom())
            }
        }
    }

    /// A square root when one exists. In `GF(p)` the smaller of the two
    /// canonical residues is returned; over `Q` the nonnegative root.
    pub fn sqrt(&self) -> Option<FieldElement> {
        if !self.is_square() {
            return None;
        }
        match &self.repr {
            Repr::Residue { value, modulus } => {
                let r = sqrt_mod(*value, *modulus)?;
                Some(FieldElement::residue(r, *modulus))
            }
            Repr::Rational(q) => Some(FieldElement::rational(BigRational::new(
                q.numer().sqrt(),
                q.denom().sqrt(),
            ))),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Repr::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

// Operator impls panic on field mismatch; the checked_* methods report it.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident, $assign_tr:ident, $assign:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field mismatch in scalar arithmetic")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $assign_tr<&FieldElement> for FieldElement {
            fn $assign(&mut self, rhs: &FieldElement) {
                *self = (&*self).$method(rhs);
            }
        }
    };
}

binop!(Add, add, checked_add, AddAssign, add_assign);
binop!(Sub, sub, checked_sub, SubAssign, sub_assign);
binop!(Mul, mul, checked_mul, MulAssign, mul_assign);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match &self.repr {
            Repr::Rational(q) => FieldElement::rational(-q),
            Repr::Residue { value, modulus } => {
                FieldElement::residue((modulus - value) % modulus, *modulus)
            }
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Parses `-12`, `7`, `3/4`, `-3/4` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational, FieldError> {
    let bad = || FieldError::BadLiteral(s.into());
    let t = s.trim();
    if t.is_empty() {
        return Err(bad());
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let valid = |x: &str| {
        let digits = x.strip_prefix('-').unwrap_or(x);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) || den.starts_with('-') {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue via Fermat.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((n % &m) + &m) % &m;
    r.to_u64().expect("residue fits in u64")
}

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// Euler's criterion; every residue is a square in characteristic 2.
pub(crate) fn is_square_mod(x: u64, p: u64) -> bool {
    let x = x % p;
    if x == 0 || p == 2 {
        return true;
    }
    pow_mod(x, (p - 1) / 2, p) == 1
}

pub(crate) fn sqrt_mod(x: u64, p: u64) -> Option<u64> {
    let x = x % p;
    if !is_square_mod(x, p) {
        return None;
    }
    if x == 0 {
        return Some(0);
    }
    if p < EXHAUSTIVE_SQRT_BOUND {
        return (1..p).find(|&y| mul_mod(y, y, p) == x);
    }
    let r = tonelli_shanks(x, p);
    Some(r.min(p - r))
}

fn tonelli_shanks(n: u64, p: u64) -> u64 {
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while is_square_mod(z, p) {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(n, q, p);
    let mut r = pow_mod(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(
            Field::make(FieldKind::PrimeField, Some(5)).unwrap(),
            gf(5)
        );
        assert!(matches!(
            Field::make(FieldKind::PrimeField, Some(4)),
            Err(FieldError::ConstructionError(_))
        ));
        assert!(matches!(Field::prime(1), Err(FieldError::ConstructionError(_))));
        assert_eq!(
            Field::make(FieldKind::Rationals, None).unwrap(),
            Field::rationals()
        );
        assert!(Field::make(FieldKind::PrimeField, None).is_err());
        assert!(Field::make(FieldKind::Rationals, Some(3)).is_err());
    }

    #[test]
    fn field_literals() {
        assert_eq!("GF(7)".parse::<Field>().unwrap(), gf(7));
        assert_eq!("Q".parse::<Field>().unwrap(), Field::rationals());
        assert!("GF(9)".parse::<Field>().is_err());
        assert!("GF7".parse::<Field>().is_err());
        assert_eq!(gf(13).to_string(), "GF(13)");
    }

    #[test]
    fn arithmetic_examples() {
        let f7 = gf(7);
        let x = arith(ArithOp::Mul, &f7.from_i64(2), Some(&f7.from_i64(4))).unwrap();
        assert_eq!(x, f7.one());

        let q = Field::rationals();
        assert_eq!(
            arith(ArithOp::Inv, &q.zero(), None),
            Err(FieldError::DivisionByZero)
        );
        let half = q.parse_element("1/2").unwrap();
        let third = q.parse_element("1/3").unwrap();
        let sum = arith(ArithOp::Add, &half, Some(&third)).unwrap();
        assert_eq!(sum, q.parse_element("5/6").unwrap());
        assert_eq!(sum.to_string(), "5/6");
    }

    #[test]
    fn mismatch_is_rejected() {
        let a = gf(5).one();
        let b = gf(7).one();
        assert!(matches!(
            a.checked_add(&b),
            Err(FieldError::FieldMismatch(_, _))
        ));
        assert!(a.checked_mul(&Field::rationals().one()).is_err());
    }

    #[test]
    fn literal_parsing() {
        let f5 = gf(5);
        assert_eq!(f5.parse_element("-12").unwrap(), f5.from_i64(3));
        assert_eq!(f5.parse_element("3/4").unwrap(), f5.from_i64(2));
        assert!(f5.parse_element("1/5").is_err());
        assert!(f5.parse_element("x").is_err());
        assert!(Field::rationals().parse_element("1/0").is_err());
        let q = Field::rationals();
        assert!(q.parse_element("6/-4").is_err());
        assert_eq!(q.parse_element("-6/4").unwrap().to_string(), "-3/2");
    }

    #[test]
    fn squares_and_roots() {
        // squares mod 3 are {0, 1}; 3^2 = 9 = 2 mod 7
        assert!(!gf(3).from_i64(2).is_square());
        assert!(gf(7).from_i64(2).is_square());
        assert_eq!(gf(7).from_i64(2).sqrt(), Some(gf(7).from_i64(3)));
        assert_eq!(gf(3).from_i64(2).sqrt(), None);
        let q = Field::rationals();
        assert!(q.parse_element("4/9").unwrap().is_square());
        assert_eq!(
            q.parse_element("4/9").unwrap().sqrt(),
            Some(q.parse_element("2/3").unwrap())
        );
        assert!(!q.from_i64(-4).is_square());
        assert!(!q.parse_element("2/9").unwrap().is_square());
        for f in [gf(2), gf(3), gf(7), q] {
            assert_eq!(f.zero().sqrt(), Some(f.zero()));
        }
    }

    #[test]
    fn tonelli_shanks_matches_exhaustive() {
        let p = 10_007;
        for x in [2u64, 3, 5, 9, 1234, 10_006] {
            let fast = sqrt_mod(x, p);
            let slow = (0..p).find(|&y| mul_mod(y, y, p) == x);
            assert_eq!(fast, slow, "x = {x}");
        }
    }

    #[test]
    fn quadratic_residue_count() {
        for p in (3..=97).filter(|&p| is_prime(p)) {
            let f = gf(p);
            let count = f
                .elements()
                .unwrap()
                .filter(|x| !x.is_zero() && x.is_square())
                .count();
            assert_eq!(count as u64, (p - 1) / 2, "p = {p}");
        }
    }

    #[test]
    fn inverses_exhaustive_small_primes() {
        for p in [2, 3, 5, 7, 11] {
            let f = gf(p);
            for x in f.elements().unwrap().filter(|x| !x.is_zero()) {
                assert!((&x * &x.inv().unwrap()).is_one());
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rational() -> impl Strategy<Value = FieldElement> {
            (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| {
                Field::rationals()
                    .from_rational(&BigRational::new(n.into(), d.into()))
                    .unwrap()
            })
        }

        fn residue() -> impl Strategy<Value = FieldElement> {
            prop_oneof![Just(2u64), Just(3), Just(5), Just(13), Just(10_007)]
                .prop_flat_map(|p| (0..p).prop_map(move |v| gf(p).from_residue(v)))
        }

        proptest! {
            #[test]
            fn rational_inverse(x in rational()) {
                prop_assume!(!x.is_zero());
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }

            #[test]
            fn residue_inverse(x in residue()) {
                prop_assume!(!x.is_zero());
                prop_assert!((&x * &x.inv().unwrap()).is_one());
            }

            #[test]
            fn squares_are_squares(x in prop_oneof![rational(), residue()]) {
                let sq = &x * &x;
                prop_assert!(sq.is_square());
                let root = sq.sqrt().unwrap();
                prop_assert_eq!(&root * &root, sq);
            }

            #[test]
            fn normalization_is_idempotent(x in prop_oneof![rational(), residue()]) {
                prop_assert_eq!(x.normalized(), x.clone());
                prop_assert_eq!(x.normalized().normalized(), x);
            }

            #[test]
            fn stored_rationals_are_reduced(x in rational()) {
                let q = x.as_rational().unwrap();
                prop_assert!(q.denom().is_positive());
                prop_assert!(num_integer::Integer::gcd(q.numer(), q.denom()).is_one());
            }
        }
    }
}
