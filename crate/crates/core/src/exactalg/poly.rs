//! Sparse multivariate polynomials over a [`Scalar`] coefficient ring.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::scalar::{FieldScalar, Scalar};

/// Exponent vector with trailing zeros trimmed, so the number of variables
/// never has to be fixed up front.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    /// The single variable `var`.
    pub fn var(var: usize) -> Self {
        Self::var_pow(var, 1)
    }

    pub fn var_pow(var: usize, exp: u32) -> Self {
        let mut v = vec![0; var + 1];
        v[var] = exp;
        Self::new(v)
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.0.get(var).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Monomial::new((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut out = self.0.clone();
        for (i, e) in other.0.iter().enumerate() {
            out[i] = out[i].checked_sub(*e)?;
        }
        Some(Monomial::new(out))
    }

    /// Lowers the exponent of `var` by one, if positive.
    pub fn lower(&self, var: usize) -> Option<Self> {
        if self.exp(var) == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[var] -= 1;
        Some(Monomial::new(v))
    }

    pub fn raise(&self, var: usize) -> Self {
        self.mul(&Monomial::var(var))
    }

    /// All monomials in `nvars` variables of total degree exactly `deg`,
    /// in ascending order.
    pub fn all_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
        fn rec(nvars: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == nvars {
                prefix.push(deg);
                out.push(Monomial::new(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in 0..=deg {
                prefix.push(e);
                rec(nvars, deg - e, prefix, out);
                prefix.pop();
            }
        }
        if nvars == 0 {
            return if deg == 0 { vec![Monomial::one()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        rec(nvars, deg, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    pub fn all_up_to_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
        (0..=deg).flat_map(|d| Monomial::all_of_degree(nvars, d)).collect()
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_one() {
            return "1".into();
        }
        self.0
            .iter()
            .enumerate()
            .filter(|(_, e)| **e > 0)
            .map(|(i, e)| match e {
                1 => names(i),
                _ => format!("{}^{}", names(i), e),
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Graded order: total degree first, then lexicographic with variable 0
/// most significant.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            (0..n)
                .map(|i| self.exp(i).cmp(&other.exp(i)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial stored as monomial → nonzero coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C: Scalar> {
    terms: BTreeMap<Monomial, C>,
}

/// Returned by [`Poly::divide_exact`] when the divisor does not divide.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("polynomial division is not exact")]
pub struct NotDivisible;

impl<C: Scalar> Default for Poly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: usize) -> Self {
        Self::term(Monomial::var(v), C::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> C {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, C)> {
        self.terms.into_iter()
    }

    /// Largest monomial in the graded order, with its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Number of variable slots in use.
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(|m| m.exps().len()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                existing.add_assign(c);
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        self.map_coeffs(|c| c.mul(s))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &c1.mul(c2));
            }
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly {
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let d = f(c);
                    (!d.is_zero()).then(|| (m.clone(), d))
                })
                .collect(),
        }
    }

    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if let Some(lowered) = m.lower(var) {
                out.add_term(lowered, &c.mul(&C::from_int(e as i64)));
            }
        }
        out
    }

    /// Substitutes `images[i]` for variable `i`; variables past the end of
    /// `images` are left alone.
    pub fn substitute(&self, images: &[Poly<C>]) -> Self {
        let mut cache: Vec<Vec<Poly<C>>> = vec![Vec::new(); images.len()];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            let mut rest = Vec::new();
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if i < images.len() {
                    let powers = &mut cache[i];
                    if powers.is_empty() {
                        powers.push(Poly::one());
                    }
                    while powers.len() <= e as usize {
                        let next = powers.last().unwrap().mul(&images[i]);
                        powers.push(next);
                    }
                    term = term.mul(&powers[e as usize]);
                } else {
                    rest.resize(i + 1, 0);
                    rest[i] = e;
                }
            }
            out.add_assign(&term.mul_monomial(&Monomial::new(rest)));
        }
        out
    }

    /// Evaluates with `values[i]` for variable `i`; missing variables count
    /// as zero.
    pub fn eval(&self, values: &[C]) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = match values.get(i) {
                        Some(v) => t.mul(&v.pow(e)),
                        None => C::zero(),
                    };
                }
            }
            acc.add_assign(&t);
        }
        acc
    }

    /// Keeps only monomials of total degree `< order`.
    pub fn truncate(&self, order: u32) -> Self {
        self.filter_terms(|m| m.degree() < order)
    }

    pub fn fmt_with(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .rev()
            .map(|(m, c)| {
                if m.is_one() {
                    c.to_string()
                } else if c.is_one() {
                    m.fmt_with(names)
                } else {
                    format!("{}*{}", c, m.fmt_with(names))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<C: FieldScalar> Poly<C> {
    /// Quotient `r` with `self = divisor · r`, or [`NotDivisible`].
    pub fn divide_exact(&self, divisor: &Self) -> Result<Self, NotDivisible> {
        let (lead_m, lead_c) = divisor.leading().ok_or(NotDivisible)?;
        let lead_m = lead_m.clone();
        let lead_inv = lead_c.inv().ok_or(NotDivisible)?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(&lead_m).ok_or(NotDivisible)?;
            let qc = c.mul(&lead_inv);
            rem = rem.sub(&divisor.mul_monomial(&qm).scale(&qc));
            quot.add_term(qm, &qc);
        }
        Ok(quot)
    }

    /// Makes the leading coefficient one; returns the factor divided out.
    pub fn make_monic(&self) -> (Self, C) {
        match self.leading() {
            Some((_, lc)) => {
                let lc = lc.clone();
                (self.scale(&lc.inv().expect("leading coefficient is invertible")), lc)
            }
            None => (Self::zero(), C::one()),
        }
    }
}

impl<C: Scalar> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&|i| format!("v{i}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type P = Poly<BigRational>;

    fn x() -> P {
        P::var(0)
    }

    fn c(n: i64) -> P {
        P::constant(BigRational::from_int(n))
    }

    #[test]
    fn even_plus_reflected_divides_by_x() {
        // (x² − x·(−x)) ÷ x = 2x
        let p = x().mul(&x()).sub(&x().mul(&x().neg()));
        assert_eq!(p.divide_exact(&x()).unwrap(), c(2).mul(&x()));
    }

    #[test]
    fn zero_divides_to_zero() {
        assert!(P::zero().divide_exact(&x()).unwrap().is_zero());
    }

    #[test]
    fn odd_part_division() {
        // (x³ − (−x)³) ÷ x = 2x²
        let p = x().pow(3).sub(&x().neg().pow(3));
        assert_eq!(p.divide_exact(&x()).unwrap(), c(2).mul(&x().pow(2)));
    }

    #[test]
    fn non_exact_division_is_reported() {
        let p = x().add(&c(1));
        assert_eq!(p.divide_exact(&x()), Err(NotDivisible));
        assert_eq!(x().divide_exact(&P::zero()), Err(NotDivisible));
    }

    #[test]
    fn multivariate_exact_division() {
        let y = P::var(1);
        let a = x().sub(&y);
        let b = x().mul(&x()).add(&c(3).mul(&y)).add(&c(1));
        assert_eq!(a.mul(&b).divide_exact(&a).unwrap(), b);
    }

    #[test]
    fn derivative_and_substitution() {
        let y = P::var(1);
        let p = x().pow(3).mul(&y);
        assert_eq!(p.derivative(0), c(3).mul(&x().pow(2)).mul(&y));
        // x ↦ −x
        assert_eq!(p.substitute(&[x().neg()]), p.neg());
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(Monomial::all_up_to_degree(2, 2).len(), 6);
        assert_eq!(Monomial::all_up_to_degree(6, 2).len(), 28);
        assert_eq!(Monomial::all_of_degree(3, 6).len(), 28);
    }
}
