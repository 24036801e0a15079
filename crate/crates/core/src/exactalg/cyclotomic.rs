//! Exact arithmetic in cyclotomic fields ℚ(ζ_N).
//!
//! An element is stored in the power basis `1, ζ, …, ζ^{φ(N)-1}` of
//! ℚ(ζ_N), reduced modulo the cyclotomic polynomial Φ_N. That basis is a
//! ℚ-basis of the field, so the reduced coefficient vector is canonical and
//! equality is decided coefficientwise once both sides share a conductor.
//! Mixed-conductor arithmetic lifts both operands into ℚ(ζ_lcm).

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::scalar::{fmt_rational, FieldScalar, Scalar};
use super::upoly::{self, UPoly};

static CYCLOTOMIC_POLYS: OnceLock<Mutex<HashMap<u32, Arc<UPoly>>>> = OnceLock::new();

/// Φ_n with rational (in fact integer) coefficients, cached per process.
pub fn cyclotomic_polynomial(n: u32) -> Arc<UPoly> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    let cache = CYCLOTOMIC_POLYS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // Φ_n = (x^n - 1) / ∏_{d | n, d < n} Φ_d
    let mut num: UPoly = vec![BigRational::zero(); n as usize + 1];
    num[0] = -BigRational::one();
    num[n as usize] = BigRational::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let (q, r) = upoly::divrem(&num, &cyclotomic_polynomial(d));
        debug_assert!(r.is_empty());
        num = q;
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

/// Euler's totient, equal to `deg Φ_n`.
pub fn totient(n: u32) -> usize {
    cyclotomic_polynomial(n).len() - 1
}

/// Element of ℚ(ζ_N) with ζ_N = e^{2πi/N}.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u32,
    /// Power-basis coefficients, trimmed, length ≤ φ(conductor).
    coeffs: Vec<BigRational>,
}

fn reduce_mod_phi(mut v: UPoly, n: u32) -> UPoly {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    upoly::trim(&mut v);
    while v.len() > deg {
        let top = v.len() - 1;
        let c = v[top].clone();
        if !c.is_zero() {
            let shift = top - deg;
            for (i, pc) in phi.iter().enumerate() {
                if !pc.is_zero() {
                    v[shift + i] -= &c * pc;
                }
            }
        }
        v.pop();
        upoly::trim(&mut v);
    }
    v
}

impl Cyclotomic {
    fn from_parts(conductor: u32, coeffs: UPoly) -> Self {
        let coeffs = reduce_mod_phi(coeffs, conductor);
        let conductor = if coeffs.len() <= 1 { 1 } else { conductor };
        Cyclotomic { conductor, coeffs }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_parts(1, vec![q])
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Self::from_rational(super::scalar::rat(n, d))
    }

    /// `ζ_n^k`, with `k` taken mod `n`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let k = k.rem_euclid(n as i64) as usize;
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        Self::from_parts(n, v)
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Coefficients of this element in ℚ(ζ_target); `conductor` must divide
    /// `target`.
    fn lifted(&self, target: u32) -> UPoly {
        if self.conductor == target {
            return self.coeffs.clone();
        }
        assert_eq!(target % self.conductor, 0);
        let step = (target / self.conductor) as usize;
        if self.coeffs.is_empty() {
            return Vec::new();
        }
        let mut v = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * step] = c.clone();
        }
        reduce_mod_phi(v, target)
    }

    /// Power-basis coefficients in ℚ(ζ_n); the conductor must divide `n`.
    pub fn coeffs_at(&self, n: u32) -> Vec<BigRational> {
        self.lifted(n)
    }

    fn common(&self, other: &Self) -> (u32, UPoly, UPoly) {
        let n = self.conductor.lcm(&other.conductor);
        (n, self.lifted(n), other.lifted(n))
    }

    /// Embedding into ℂ sending ζ_N to e^{2πi/N}.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), TAU * k as f64 / n))
            .sum()
    }

    /// Complex conjugate, i.e. the Galois automorphism ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let n = self.conductor as i64;
        let mut acc = Cyclotomic::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let term = Cyclotomic::root_of_unity(n as u32, -(k as i64))
                    .mul(&Cyclotomic::from_rational(c.clone()));
                acc = acc.add(&term);
            }
        }
        acc
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = self.common(other);
        a == b
    }
}

impl Eq for Cyclotomic {}

impl Scalar for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic { conductor: 1, coeffs: Vec::new() }
    }
    fn one() -> Self {
        Cyclotomic { conductor: 1, coeffs: vec![BigRational::one()] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
    fn add(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let (n, mut a, b) = self.common(other);
        if a.len() < b.len() {
            a.resize(b.len(), BigRational::zero());
        }
        for (x, y) in a.iter_mut().zip(b.iter()) {
            *x += y;
        }
        Self::from_parts(n, a)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_rational() {
            let q = &self.coeffs[0];
            return Cyclotomic {
                conductor: other.conductor,
                coeffs: other.coeffs.iter().map(|c| c * q).collect(),
            };
        }
        if other.is_rational() {
            return other.mul(self);
        }
        let (n, a, b) = self.common(other);
        Self::from_parts(n, upoly::mul(&a, &b))
    }
    fn neg(&self) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn from_int(n: i64) -> Self {
        Self::rational(n, 1)
    }
}

impl FieldScalar for Cyclotomic {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(Self::from_rational(self.coeffs[0].recip()));
        }
        let phi = cyclotomic_polynomial(self.conductor);
        let (g, s) = upoly::ext_gcd(&self.coeffs, &phi);
        // Φ_N is irreducible, so a nonzero reduced element is coprime to it.
        debug_assert_eq!(g.len(), 1);
        Some(Self::from_parts(self.conductor, s))
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        if self.is_rational() {
            return write!(f, "{}", fmt_rational(&self.coeffs[0], false));
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let z = match k {
                    0 => String::new(),
                    1 => format!("z{}", self.conductor),
                    _ => format!("z{}^{}", self.conductor, k),
                };
                match (k, c.is_one()) {
                    (0, _) => fmt_rational(c, true),
                    (_, true) => z,
                    _ => format!("{}*{}", fmt_rational(c, true), z),
                }
            })
            .collect();
        write!(f, "({})", parts.join(" + "))
    }
}
