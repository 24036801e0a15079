use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Commutative ring element used as a coefficient by [`Poly`](super::Poly)
/// and by the dense linear algebra helpers.
///
/// Arithmetic goes through `&self` methods instead of `std::ops` so generic
/// code never has to spell out higher-ranked operator bounds.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_int(n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn add_assign(&mut self, other: &Self) {
        *self = Scalar::add(&*self, other);
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Heuristic size used when choosing elimination pivots. Zero means
    /// "cheap and exact to divide by".
    fn pivot_cost(&self) -> usize {
        0
    }
}

/// A [`Scalar`] in which nonzero elements (or units, for local rings) can be
/// inverted.
pub trait FieldScalar: Scalar {
    /// Inverse, or `None` when the element is not a unit.
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
}

impl FieldScalar for BigRational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Writes a rational as `p` or `p/q`, wrapping negatives in parentheses when
/// `paren_neg` is set.
pub(crate) fn fmt_rational(q: &BigRational, paren_neg: bool) -> String {
    let s = if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    };
    if paren_neg && q.is_negative() {
        format!("({s})")
    } else {
        s
    }
}
