//! Dense univariate polynomials over ℚ, coefficient `i` multiplies `x^i`.
//! Used internally for cyclotomic reduction and inversion and for Hilbert
//! series bookkeeping.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type UPoly = Vec<BigRational>;

pub fn trim(p: &mut UPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &UPoly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn sub(a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    let mut out: UPoly = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(&mut out);
    out
}

pub fn mul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; panics on a zero divisor.
pub fn divrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = b[db].recip();
    let mut rem = a.clone();
    trim(&mut rem);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let coef = &rem[dr] * &lead_inv;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            rem[shift + i] -= &coef * bc;
        }
        quot[shift] = coef;
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// Returns `(g, s)` with `g = gcd(a, m)` monic and `s·a ≡ g (mod m)`.
pub fn ext_gcd(a: &UPoly, m: &UPoly) -> (UPoly, UPoly) {
    let (mut r0, mut r1) = (m.clone(), a.clone());
    let (mut s0, mut s1): (UPoly, UPoly) = (Vec::new(), vec![BigRational::one()]);
    trim(&mut r0);
    trim(&mut r1);
    while degree(&r1).is_some() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if let Some(d) = degree(&r0) {
        let lc = r0[d].recip();
        for c in r0.iter_mut() {
            *c *= &lc;
        }
        for c in s0.iter_mut() {
            *c *= &lc;
        }
    }
    (r0, s0)
}

pub fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
    ext_gcd(a, b).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::rat;

    fn p(c: &[i64]) -> UPoly {
        c.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn divrem_reconstructs() {
        let a = p(&[1, 0, 0, 1]);
        let b = p(&[1, 1]);
        let (q, r) = divrem(&a, &b);
        assert_eq!(q, p(&[1, -1, 1]));
        assert!(r.is_empty());
    }

    #[test]
    fn gcd_of_q_series_numerators() {
        // (1+q)(1-q) and (1+q)
        assert_eq!(gcd(&p(&[1, 0, -1]), &p(&[1, 1])), p(&[1, 1]));
    }
}
