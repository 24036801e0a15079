//! Rational functions in the formal deformation parameters.

use std::fmt;

use num_rational::BigRational;

use super::cyclotomic::Cyclotomic;
use super::poly::{Monomial, Poly};
use super::scalar::{FieldScalar, Scalar};

/// A formal parameter. Each maps to a fixed variable slot so parameter
/// polynomials from different contexts can be mixed freely.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    T,
    Eta,
    /// Reflection-class parameter `c_κ`, 0-based class label.
    C(usize),
}

impl Param {
    pub fn slot(self) -> usize {
        match self {
            Param::T => 0,
            Param::Eta => 1,
            Param::C(k) => 2 + k,
        }
    }

    pub fn from_slot(slot: usize) -> Param {
        match slot {
            0 => Param::T,
            1 => Param::Eta,
            k => Param::C(k - 2),
        }
    }

    pub fn name(self) -> String {
        match self {
            Param::T => "t".into(),
            Param::Eta => "eta".into(),
            Param::C(k) => format!("c{}", k + 1),
        }
    }
}

pub type ParamPoly = Poly<Cyclotomic>;

/// Quotient of two parameter polynomials with cyclotomic coefficients.
///
/// Stored with a monic denominator. No gcd is taken; the representation is
/// kept small by folding constant denominators into the numerator and
/// cancelling exactly divisible quotients. Equality cross-multiplies.
#[derive(Clone, Debug)]
pub struct ParamScalar {
    num: ParamPoly,
    den: ParamPoly,
}

impl ParamScalar {
    pub fn param(p: Param) -> Self {
        Self::from_poly(Poly::var(p.slot()))
    }

    pub fn t() -> Self {
        Self::param(Param::T)
    }

    pub fn eta() -> Self {
        Self::param(Param::Eta)
    }

    pub fn c(class: usize) -> Self {
        Self::param(Param::C(class))
    }

    pub fn from_poly(num: ParamPoly) -> Self {
        ParamScalar { num, den: Poly::one() }
    }

    pub fn from_cyclotomic(c: Cyclotomic) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Self::from_cyclotomic(Cyclotomic::rational(n, d))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_cyclotomic(Cyclotomic::from_rational(q))
    }

    /// Builds `num / den`; fails when `den` is zero.
    pub fn fraction(num: ParamPoly, den: ParamPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(ParamScalar { num, den }.normalized())
    }

    fn normalized(self) -> Self {
        let ParamScalar { num, den } = self;
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let d = den.constant_term().inv().expect("nonzero denominator");
            return Self::from_poly(num.scale(&d));
        }
        let (den, lc) = den.make_monic();
        let num = num.scale(&lc.inv().expect("nonzero leading coefficient"));
        if let Ok(q) = num.divide_exact(&den) {
            return Self::from_poly(q);
        }
        if let Ok(q) = den.divide_exact(&num) {
            let (q, lc) = q.make_monic();
            return ParamScalar { num: Poly::constant(lc.inv().unwrap()), den: q };
        }
        ParamScalar { num, den }
    }

    pub fn numerator(&self) -> &ParamPoly {
        &self.num
    }

    pub fn denominator(&self) -> &ParamPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_constant() && self.num.is_constant()
    }

    /// The value when this is a constant.
    pub fn as_constant(&self) -> Option<Cyclotomic> {
        self.is_constant().then(|| self.num.constant_term())
    }

    /// Replaces the listed parameters by values; the result may still
    /// contain the others. Fails if the denominator vanishes.
    pub fn specialize(&self, values: &[(Param, ParamScalar)]) -> Option<Self> {
        let nvars = self.num.nvars().max(self.den.nvars());
        let slots = values.iter().map(|(p, _)| p.slot()).max().map_or(0, |s| s + 1).max(nvars);
        let mut num_images: Vec<ParamScalar> = (0..slots).map(|s| Self::param(Param::from_slot(s))).collect();
        for (p, v) in values {
            num_images[p.slot()] = v.clone();
        }
        let eval = |p: &ParamPoly| -> ParamScalar {
            let mut acc = ParamScalar::zero();
            for (m, c) in p.terms() {
                let mut t = ParamScalar::from_cyclotomic(c.clone());
                for (i, &e) in m.exps().iter().enumerate() {
                    if e > 0 {
                        t = t.mul(&num_images[i].pow(e));
                    }
                }
                acc.add_assign(&t);
            }
            acc
        };
        eval(&self.num).div(&eval(&self.den))
    }

    /// Complex value given complex values for every parameter slot that
    /// occurs.
    pub fn eval_complex(&self, value: &dyn Fn(Param) -> num_complex::Complex64) -> num_complex::Complex64 {
        let ev = |p: &ParamPoly| {
            p.terms()
                .map(|(m, c)| {
                    let mut t = c.to_complex();
                    for (i, &e) in m.exps().iter().enumerate() {
                        if e > 0 {
                            t *= value(Param::from_slot(i)).powu(e);
                        }
                    }
                    t
                })
                .sum::<num_complex::Complex64>()
        };
        ev(&self.num) / ev(&self.den)
    }

    /// Coefficient of a parameter in a polynomial value, e.g. the linear
    /// coefficient of `c_1` in `2c_1 + η`.
    pub fn linear_coeff(&self, p: Param) -> Option<Cyclotomic> {
        self.is_polynomial().then(|| self.num.coeff(&Monomial::var(p.slot())))
    }
}

impl PartialEq for ParamScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.den.is_constant() && other.den.is_constant() {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Scalar for ParamScalar {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num == self.den
    }
    fn add(&self, other: &Self) -> Self {
        if self.den.is_constant() && other.den.is_constant() {
            return Self::from_poly(self.num.add(&other.num));
        }
        if self.den == other.den {
            return ParamScalar { num: self.num.add(&other.num), den: self.den.clone() }.normalized();
        }
        ParamScalar {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
        .normalized()
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.den.is_constant() && other.den.is_constant() {
            return Self::from_poly(self.num.mul(&other.num));
        }
        ParamScalar { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }.normalized()
    }
    fn neg(&self) -> Self {
        ParamScalar { num: self.num.neg(), den: self.den.clone() }
    }
    fn from_int(n: i64) -> Self {
        Self::from_cyclotomic(Cyclotomic::from_int(n))
    }
    fn add_assign(&mut self, other: &Self) {
        if self.den.is_constant() && other.den.is_constant() {
            self.num.add_assign(&other.num);
        } else {
            *self = Scalar::add(&*self, other);
        }
    }
    fn pivot_cost(&self) -> usize {
        if self.is_constant() {
            0
        } else {
            self.num.len() + self.den.len()
        }
    }
}

impl FieldScalar for ParamScalar {
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(ParamScalar { num: self.den.clone(), den: self.num.clone() }.normalized())
    }
}

fn param_names(i: usize) -> String {
    Param::from_slot(i).name()
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.num.fmt_with(&param_names);
        if self.den.is_constant() {
            if self.num.len() > 1 {
                write!(f, "({num})")
            } else {
                write!(f, "{num}")
            }
        } else {
            write!(f, "({num})/({})", self.den.fmt_with(&param_names))
        }
    }
}
