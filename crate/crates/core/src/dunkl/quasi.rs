//! Rank-one quasi-invariants for ℤ/2 acting on ℂ by x ↦ −x.
//!
//! Q_m consists of polynomials f with f(x) − f(−x) divisible by x^{2m+1}.
//! The radial part of the Dunkl Laplacian (at t = 1) is
//! L_c = d²/dx² − (2c/x) d/dx, and Q_m is L_m-stable.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactalg::upoly;

/// Finite sum of c_k x^k with k ∈ ℤ.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly(BTreeMap<i64, BigRational>);

impl LaurentPoly {
    pub fn monomial(k: i64, c: BigRational) -> Self {
        let mut p = LaurentPoly::default();
        p.add_term(k, c);
        p
    }

    pub fn x_pow(k: i64) -> Self {
        Self::monomial(k, BigRational::one())
    }

    pub fn add_term(&mut self, k: i64, c: BigRational) {
        let e = self.0.entry(k).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.0 {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, k: i64) -> BigRational {
        self.0.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.0.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.keys().all(|&k| k >= 0)
    }

    /// f(−x).
    pub fn reflect(&self) -> Self {
        LaurentPoly(
            self.0.iter().map(|(&k, c)| (k, if k % 2 == 0 { c.clone() } else { -c.clone() })).collect(),
        )
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .rev()
            .map(|(&k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// L_c = d²/dx² − (2c/x) d/dx on Laurent polynomials.
#[derive(Clone, Debug)]
pub struct RadialOperator {
    pub c: BigRational,
}

impl RadialOperator {
    pub fn new(c: BigRational) -> Self {
        RadialOperator { c }
    }

    pub fn apply(&self, f: &LaurentPoly) -> LaurentPoly {
        let two = BigRational::from_integer(2.into());
        let mut out = LaurentPoly::default();
        for (k, a) in f.terms() {
            let kq = BigRational::from_integer(k.into());
            let factor = &kq * (&kq - BigRational::one() - &two * &self.c);
            out.add_term(k - 2, factor * a);
        }
        out
    }
}

/// Membership in Q_m: a polynomial whose odd part starts at degree ≥ 2m+1.
pub fn is_quasi_invariant(f: &LaurentPoly, m: u32) -> bool {
    if !f.is_polynomial() {
        return false;
    }
    let diff = f.add(&f.reflect().scaled(&-BigRational::one()));
    let ok = diff.terms().all(|(k, _)| k > 2 * m as i64);
    ok
}

impl LaurentPoly {
    fn scaled(&self, s: &BigRational) -> Self {
        let mut out = LaurentPoly::default();
        for (k, c) in self.terms() {
            out.add_term(k, c * s);
        }
        out
    }
}

/// Monomial exponents spanning Q_m in degrees ≤ `max_degree`: all even
/// powers and the odd powers from 2m+1 on.
pub fn quasi_exponents(m: u32, max_degree: u32) -> Vec<u32> {
    (0..=max_degree).filter(|k| k % 2 == 0 || *k > 2 * m).collect()
}

pub fn quasi_basis(m: u32, max_degree: u32) -> Vec<LaurentPoly> {
    quasi_exponents(m, max_degree).into_iter().map(|k| LaurentPoly::x_pow(k as i64)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiReport {
    pub m: u32,
    pub max_degree: u32,
    pub c: String,
    pub basis_size: usize,
    /// Every L_c(b), b in the basis, lies in Q_m.
    pub stable: bool,
    /// First basis element whose image leaves Q_m, with that image.
    pub witness: Option<(String, String)>,
}

/// Checks L_c(Q_m ∩ deg ≤ d) ⊂ Q_m ∩ deg ≤ d−2.
pub fn quasi_invariance_check(m: u32, max_degree: u32, c: &BigRational) -> QuasiReport {
    let op = RadialOperator::new(c.clone());
    let basis = quasi_basis(m, max_degree);
    let mut report = QuasiReport {
        m,
        max_degree,
        c: c.to_string(),
        basis_size: basis.len(),
        stable: true,
        witness: None,
    };
    for b in &basis {
        let image = op.apply(b);
        if !is_quasi_invariant(&image, m) {
            report.stable = false;
            report.witness = Some((b.to_string(), image.to_string()));
            break;
        }
    }
    report
}

/// Coefficient of x^{2m−1} in L_c(x^{2m+1}), i.e. (2m+1)(2m−2c); zero
/// exactly when c = m.
pub fn obstruction_coefficient(m: u32, c: &BigRational) -> BigRational {
    let k = BigRational::from_integer((2 * m as i64 + 1).into());
    let two_m = BigRational::from_integer((2 * m as i64).into());
    k * (two_m - BigRational::from_integer(2.into()) * c)
}

/// Hilbert series of Q_m as a rational function in q.
#[derive(Clone, Debug, Serialize)]
pub struct HilbertSeries {
    /// Numerator over denominator 1 − q², lowest degree first.
    pub numerator: Vec<i64>,
    pub denominator: Vec<i64>,
    /// The same function after cancelling common factors.
    pub reduced_numerator: Vec<String>,
    pub reduced_denominator: Vec<String>,
    pub palindromic: bool,
    /// Dimensions dim Q_m[k] for k below the checked bound.
    pub graded_dims: Vec<u64>,
}

/// Computes the Hilbert series from graded dimensions of the basis up to a
/// degree well past the point where the numerator stabilizes.
pub fn quasi_hilbert_series(m: u32) -> HilbertSeries {
    let bound = 4 * m + 8;
    let mut dims = vec![0u64; bound as usize + 1];
    for k in quasi_exponents(m, bound) {
        dims[k as usize] += 1;
    }
    // (1 − q²) H(q), valid below `bound`
    let mut num: Vec<i64> =
        (0..=bound as usize).map(|k| dims[k] as i64 - if k >= 2 { dims[k - 2] as i64 } else { 0 }).collect();
    // entries above bound−1 see the truncation; the rest must vanish past deg 2m+1
    num.truncate(bound as usize - 1);
    while num.last() == Some(&0) {
        num.pop();
    }
    let palindromic = num.iter().eq(num.iter().rev());
    let den = vec![1, 0, -1];

    let to_q = |v: &[i64]| -> upoly::UPoly { v.iter().map(|&x| BigRational::from_integer(x.into())).collect() };
    let (nq, dq) = (to_q(&num), to_q(&den));
    let g = upoly::gcd(&nq, &dq);
    let (rn, _) = upoly::divrem(&nq, &g);
    let (rd, _) = upoly::divrem(&dq, &g);
    // normalize so the reduced denominator has constant term 1
    let lead = rd[0].clone();
    let show = |p: &upoly::UPoly| -> Vec<String> { p.iter().map(|c| (c / &lead).to_string()).collect() };
    HilbertSeries {
        numerator: num,
        denominator: den,
        reduced_numerator: show(&rn),
        reduced_denominator: show(&rd),
        palindromic,
        graded_dims: dims[..bound as usize - 1].to_vec(),
    }
}

impl HilbertSeries {
    /// The expected closed form (1 + q^{2m+1}) / (1 − q²).
    pub fn matches_closed_form(&self, m: u32) -> bool {
        let mut expected = vec![0i64; 2 * m as usize + 2];
        expected[0] += 1;
        expected[2 * m as usize + 1] += 1;
        self.numerator == expected && self.denominator == [1, 0, -1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::rat;

    fn q(n: i64) -> BigRational {
        rat(n, 1)
    }

    #[test]
    fn radial_operator_examples() {
        let l1 = RadialOperator::new(q(1));
        assert!(l1.apply(&LaurentPoly::x_pow(3)).is_zero());
        assert_eq!(l1.apply(&LaurentPoly::x_pow(5)), LaurentPoly::monomial(3, q(10)));
        assert_eq!(l1.apply(&LaurentPoly::x_pow(2)), LaurentPoly::monomial(0, q(-2)));
    }

    #[test]
    fn stability_at_matching_parameter() {
        for m in 0..4 {
            let r = quasi_invariance_check(m, 2 * m + 12, &q(m as i64));
            assert!(r.stable, "{r:?}");
        }
    }

    #[test]
    fn failure_off_parameter() {
        for m in 0..4 {
            let c = rat(2 * m as i64 + 1, 2);
            let r = quasi_invariance_check(m, 2 * m + 4, &c);
            assert!(!r.stable);
            assert!(!obstruction_coefficient(m, &c).is_zero());
        }
        assert!(obstruction_coefficient(3, &q(3)).is_zero());
    }

    #[test]
    fn hilbert_series_closed_form() {
        for m in 0..5 {
            let h = quasi_hilbert_series(m);
            assert!(h.matches_closed_form(m), "{h:?}");
            assert!(h.palindromic);
        }
        let h0 = quasi_hilbert_series(0);
        assert_eq!(h0.reduced_numerator, vec!["1"]);
        assert_eq!(h0.reduced_denominator, vec!["1", "-1"]);
    }
}
