//! Polynomials in formal τ-parameters truncated at a fixed total degree,
//! i.e. elements of ℚ(ζ)[τ]/(τ)^K.

use std::fmt;

use super::cyclotomic::Cyclotomic;
use super::poly::{Monomial, Poly};
use super::scalar::{FieldScalar, Scalar};

/// Truncation order used for first-order deformation checks.
pub const DEFAULT_ORDER: u32 = 2;

/// Order tag for exact constants: they combine with any truncated series.
const EXACT: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    order: u32,
    poly: Poly<Cyclotomic>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("exponential needs a series without constant term")]
    NonzeroConstantTerm,
}

impl TruncatedSeries {
    pub fn new(order: u32, poly: Poly<Cyclotomic>) -> Self {
        TruncatedSeries { order, poly: poly.truncate(order) }
    }

    pub fn constant(c: Cyclotomic) -> Self {
        TruncatedSeries { order: EXACT, poly: Poly::constant(c) }
    }

    /// The variable τ_index at truncation order `order`.
    pub fn tau(index: usize, order: u32) -> Self {
        Self::new(order, Poly::var(index))
    }

    pub fn zero_with_order(order: u32) -> Self {
        TruncatedSeries { order, poly: Poly::zero() }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn poly(&self) -> &Poly<Cyclotomic> {
        &self.poly
    }

    pub fn constant_term(&self) -> Cyclotomic {
        self.poly.constant_term()
    }

    /// Coefficient of `τ_index` in the linear part.
    pub fn linear_coeff(&self, index: usize) -> Cyclotomic {
        self.poly.coeff(&Monomial::var(index))
    }

    /// Drops all positive-degree terms, i.e. reduces mod (τ).
    pub fn at_zero(&self) -> Cyclotomic {
        self.constant_term()
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        TruncatedSeries { order: self.order, poly: self.poly.scale(c) }
    }

    /// `Σ_{k<K} s^k / k!`, exact because `s` is nilpotent mod (τ)^K.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let order = self.order;
        let mut acc = TruncatedSeries::new(order, Poly::one());
        if order == EXACT {
            // only the zero series is both exact and constant-free
            return Ok(acc);
        }
        let mut power = acc.clone();
        for k in 1..order {
            power = power.mul(self);
            if power.poly.is_zero() {
                break;
            }
            acc = acc.add(&power.scale(&Cyclotomic::rational(1, factorial(k))));
        }
        Ok(acc)
    }
}

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        let order = self.order.min(other.order);
        self.poly.truncate(order) == other.poly.truncate(order)
    }
}

impl Scalar for TruncatedSeries {
    fn zero() -> Self {
        TruncatedSeries { order: EXACT, poly: Poly::zero() }
    }
    fn one() -> Self {
        TruncatedSeries { order: EXACT, poly: Poly::one() }
    }
    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        TruncatedSeries::new(self.order.min(other.order), self.poly.add(&other.poly))
    }
    fn sub(&self, other: &Self) -> Self {
        TruncatedSeries::new(self.order.min(other.order), self.poly.sub(&other.poly))
    }
    fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = Poly::zero();
        for (m1, c1) in self.poly.terms() {
            for (m2, c2) in other.poly.terms() {
                if m1.degree() + m2.degree() < order {
                    out.add_term(m1.mul(m2), &c1.mul(c2));
                }
            }
        }
        TruncatedSeries { order, poly: out }
    }
    fn neg(&self) -> Self {
        TruncatedSeries { order: self.order, poly: self.poly.neg() }
    }
    fn from_int(n: i64) -> Self {
        Self::constant(Cyclotomic::from_int(n))
    }
    fn pivot_cost(&self) -> usize {
        self.poly.len()
    }
}

impl FieldScalar for TruncatedSeries {
    /// Units are exactly the series with nonzero constant term.
    fn inv(&self) -> Option<Self> {
        let a0 = self.constant_term();
        let a0_inv = a0.inv()?;
        // a = a0 (1 + n) with n nilpotent; 1/(1+n) = Σ (−n)^k
        let n = self.scale(&a0_inv).sub(&Self::one());
        let order = self.order;
        let mut acc = TruncatedSeries::new(order, Poly::one());
        let mut power = acc.clone();
        let neg_n = n.neg();
        let steps = if order == EXACT { 0 } else { order };
        for _ in 1..steps.max(1) {
            power = power.mul(&neg_n);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Some(acc.scale(&a0_inv))
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.poly.fmt_with(&|i| format!("tau{}", i + 1));
        if self.order == EXACT {
            write!(f, "{body}")
        } else {
            write!(f, "{body} + O(tau^{})", self.order)
        }
    }
}
