//! Orbifold fundamental groups of 2-orbifolds, their Hecke deformations and
//! the determinant obstruction to flatness on the sphere.

mod algebra;
mod coset;

pub use algebra::{
    hecke_dimension, specialize_tau_zero, HeckeAlgebraPresentation, HeckeDimensionReport, LocalRelation,
    SpecializationReport, Status,
};
pub use coset::{todd_coxeter, Overflow, PermutationRep};

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Cyclotomic, Scalar, TruncatedSeries};

/// Default bound for coset enumeration.
pub const DEFAULT_MAX_COSETS: usize = 10_000;

/// Genus and cone-point orders of a closed 2-orbifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbifoldSignature {
    pub genus: u32,
    pub orders: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl OrbifoldSignature {
    pub fn new(genus: u32, orders: Vec<u32>) -> Result<Self> {
        if let Some(&n) = orders.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidSignature(format!("cone order {n} < 2")));
        }
        Ok(OrbifoldSignature { genus, orders })
    }

    /// χ^orb = 2 − 2g − Σ (1 − 1/n_j).
    pub fn chi_orb(&self) -> BigRational {
        let mut chi = BigRational::from_integer((2 - 2 * self.genus as i64).into());
        for &n in &self.orders {
            chi -= BigRational::new((n as i64 - 1).into(), (n as i64).into());
        }
        chi
    }

    pub fn geometry(&self) -> Geometry {
        let chi = self.chi_orb();
        if chi.is_positive() {
            Geometry::Spherical
        } else if chi == BigRational::from_integer(0.into()) {
            Geometry::Euclidean
        } else {
            Geometry::Hyperbolic
        }
    }
}

impl fmt::Display for OrbifoldSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders: Vec<String> = self.orders.iter().map(u32::to_string).collect();
        write!(f, "g={};{}", self.genus, orders.join(","))
    }
}

impl FromStr for OrbifoldSignature {
    type Err = Error;

    /// Accepts `g=0;2,3,5`, `g=1;` and `g=1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSignature(s.to_string());
        let s = s.trim();
        let (head, tail) = match s.split_once(';') {
            Some((h, t)) => (h, t),
            None => (s, ""),
        };
        let genus = head.trim().strip_prefix("g=").ok_or_else(bad)?.trim().parse::<u32>().map_err(|_| bad())?;
        let orders = tail
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(genus, orders).map_err(|_| bad())
    }
}

/// Finite presentation. Letters are ±(k+1) for generator k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Vec<i32>>,
}

/// Cancels adjacent inverse pairs.
pub fn free_reduce(word: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn invert_word(word: &[i32]) -> Vec<i32> {
    word.iter().rev().map(|l| -l).collect()
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Vec<i32>>) -> Self {
        let relators = relators.iter().map(|r| free_reduce(r)).filter(|r| !r.is_empty()).collect();
        GroupPresentation { generators, relators }
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn format_word(&self, word: &[i32]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        word.iter()
            .map(|&l| {
                let name = &self.generators[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    name.clone()
                } else {
                    format!("{name}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

/// Generator indices: a_l = 2l, b_l = 2l+1, then c_j = 2g + j.
pub(crate) fn letter(index: usize) -> i32 {
    index as i32 + 1
}

/// The product relator c_1 ⋯ c_m (Π_l a_l b_l a_l⁻¹ b_l⁻¹)⁻¹.
pub(crate) fn product_relator(sig: &OrbifoldSignature) -> Vec<i32> {
    let g = sig.genus as usize;
    let mut commutators = Vec::new();
    for l in 0..g {
        let (a, b) = (letter(2 * l), letter(2 * l + 1));
        commutators.extend([a, b, -a, -b]);
    }
    let mut word: Vec<i32> = (0..sig.orders.len()).map(|j| letter(2 * g + j)).collect();
    word.extend(invert_word(&commutators));
    word
}

pub(crate) fn orbifold_generators(sig: &OrbifoldSignature) -> Vec<String> {
    let mut gens = Vec::new();
    for l in 1..=sig.genus {
        gens.push(format!("a{l}"));
        gens.push(format!("b{l}"));
    }
    gens.extend((1..=sig.orders.len()).map(|j| format!("c{j}")));
    gens
}

/// ⟨a_l, b_l, c_j | c_j^{n_j}, c_1⋯c_m = Π_l [a_l, b_l]⟩.
pub fn orbifold_presentation(sig: &OrbifoldSignature) -> GroupPresentation {
    let g = sig.genus as usize;
    let mut relators: Vec<Vec<i32>> =
        sig.orders.iter().enumerate().map(|(j, &n)| vec![letter(2 * g + j); n as usize]).collect();
    relators.push(product_relator(sig));
    GroupPresentation::new(orbifold_generators(sig), relators)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExpectedFlat,
    ExpectedNotFlat,
    /// Spherical orbifolds with trivial group: the non-flatness argument
    /// needs Γ ≠ 1 and the flatness argument needs π₂ = 0.
    NoPrediction,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub signature: String,
    pub group_order: usize,
    /// τ_{k,j} labels in the order of `coefficients`.
    pub labels: Vec<String>,
    /// Coefficients of the linear form ℓ(τ) forced to vanish by det = 1.
    pub coefficients: Vec<i64>,
    /// Root-of-unity factor of the determinant.
    pub epsilon: String,
    pub epsilon_is_one: bool,
    /// In the τ = 0 regular representation each c_j has |Γ|/n_j cycles of
    /// length n_j and the signs multiply to det(c_1⋯c_m) = 1.
    pub permutation_check: bool,
    /// ℓ(τ) from the first-order expansion of the determinant agrees with
    /// the multiplicity count.
    pub series_check: bool,
    pub verdict: Verdict,
}

impl ObstructionReport {
    pub fn form_nonzero(&self) -> bool {
        self.coefficients.iter().any(|&c| c != 0)
    }

    pub fn passed(&self) -> bool {
        self.form_nonzero() && self.epsilon_is_one && self.permutation_check && self.series_check
    }
}

/// Index of τ_{k,j} (k = 1..n_j) in the flattened parameter list.
pub fn tau_index(sig: &OrbifoldSignature, k: usize, j: usize) -> usize {
    sig.orders[..j].iter().map(|&n| n as usize).sum::<usize>() + (k - 1)
}

pub fn tau_labels(sig: &OrbifoldSignature) -> Vec<String> {
    sig.orders
        .iter()
        .enumerate()
        .flat_map(|(j, &n)| (1..=n).map(move |k| format!("tau_{k},{}", j + 1)))
        .collect()
}

/// det(c_1⋯c_m) in the deformed regular representation, taking the
/// eigenvalues of c_j to be e^{2πik/n_j} e^{τ_{k,j}} with multiplicity
/// |Γ|/n_j. The determinant must be 1, which imposes ℓ(τ) = 0.
pub fn sphere_obstruction(sig: &OrbifoldSignature, max_cosets: usize) -> Result<ObstructionReport> {
    if sig.genus != 0 || sig.geometry() != Geometry::Spherical {
        return Err(Error::Precondition(format!("{sig} is not a spherical genus-0 signature")));
    }
    let pres = orbifold_presentation(sig);
    let rep = todd_coxeter(&pres, max_cosets)
        .map_err(|o| Error::Precondition(format!("coset enumeration overflowed at {} cosets", o.max_cosets)))?;
    let order = rep.degree;
    if order == 1 {
        return Err(Error::Precondition(format!("{sig} has trivial orbifold group")));
    }
    // the multiplicity rule needs c_j of order exactly n_j in Γ
    for (j, &n) in sig.orders.iter().enumerate() {
        let n = n as usize;
        if order % n != 0 || rep.cycle_type(j) != vec![n; order / n] {
            return Err(Error::Precondition(format!("c{} does not have order {n} in the orbifold group of {sig}", j + 1)));
        }
    }

    let labels = tau_labels(sig);
    let mut coefficients = vec![0i64; labels.len()];
    let mut epsilon = Cyclotomic::one();
    let mut det = TruncatedSeries::one();
    for (j, &n) in sig.orders.iter().enumerate() {
        let mult = order / n as usize;
        for k in 1..=n as usize {
            let idx = tau_index(sig, k, j);
            coefficients[idx] = mult as i64;
            let root = Cyclotomic::root_of_unity(n, k as i64);
            epsilon = epsilon.mul(&root.pow(mult as u32));
            let eigen = TruncatedSeries::tau(idx, 2).exp().expect("τ has no constant term").scale(&root);
            det = det.mul(&eigen.pow(mult as u32));
        }
    }
    let closed_form: i64 = sig
        .orders
        .iter()
        .map(|&n| ((n as usize + 1) * (order / n as usize)) as i64)
        .sum::<i64>();
    let epsilon_closed = if closed_form % 2 == 0 { 1 } else { -1 };
    let epsilon_is_one = epsilon == Cyclotomic::one() && epsilon_closed == 1;

    // det = ε (1 + ℓ(τ)) to first order
    let series_check = det.constant_term() == epsilon
        && (0..labels.len()).all(|i| det.linear_coeff(i) == epsilon.mul(&Cyclotomic::from_int(coefficients[i])));

    let m = sig.orders.len();
    let c_gen = |j: usize| j; // genus 0: c_j is generator j
    let cycles_ok = (0..m).all(|j| {
        let n = sig.orders[j] as usize;
        rep.cycle_type(c_gen(j)) == vec![n; order / n]
    });
    let sign_product: i32 = (0..m).map(|j| rep.sign(c_gen(j))).product();
    let product_is_identity = rep.is_identity(&(1..=m as i32).collect::<Vec<_>>());
    let permutation_check = cycles_ok && sign_product == 1 && product_is_identity;

    Ok(ObstructionReport {
        signature: sig.to_string(),
        group_order: order,
        labels,
        coefficients,
        epsilon: epsilon.to_string(),
        epsilon_is_one,
        permutation_check,
        series_check,
        verdict: Verdict::ExpectedNotFlat,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictReport {
    pub signature: String,
    pub chi_orb: String,
    pub geometry: Geometry,
    /// None when enumeration overflowed (group possibly infinite).
    pub group_order: Option<usize>,
    pub obstruction_form: Option<Vec<i64>>,
    pub verdict: Verdict,
    /// The obstruction computation, where it applies, agrees with the verdict.
    pub consistent: bool,
}

/// Flat for euclidean and hyperbolic signatures (π₂ = 0); not flat for
/// spherical ones with nontrivial group.
pub fn signature_verdict(sig: &OrbifoldSignature, max_cosets: usize) -> VerdictReport {
    let geometry = sig.geometry();
    let group_order = todd_coxeter(&orbifold_presentation(sig), max_cosets).ok().map(|r| r.degree);
    let verdict = match (geometry, group_order) {
        (Geometry::Spherical, Some(1)) => Verdict::NoPrediction,
        (Geometry::Spherical, _) => Verdict::ExpectedNotFlat,
        _ => Verdict::ExpectedFlat,
    };
    let obstruction = if geometry == Geometry::Spherical && sig.genus == 0 && group_order.is_some_and(|o| o > 1) {
        sphere_obstruction(sig, max_cosets).ok()
    } else {
        None
    };
    let consistent = match (&obstruction, verdict) {
        (Some(o), Verdict::ExpectedNotFlat) => o.passed(),
        (None, Verdict::ExpectedNotFlat) => false,
        // infinite groups must not close
        (None, Verdict::ExpectedFlat) => group_order.is_none(),
        (None, Verdict::NoPrediction) => true,
        _ => false,
    };
    VerdictReport {
        signature: sig.to_string(),
        chi_orb: sig.chi_orb().to_string(),
        geometry,
        group_order,
        obstruction_form: obstruction.map(|o| o.coefficients),
        verdict,
        consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(s: &str) -> OrbifoldSignature {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_classify() {
        assert_eq!(sig("g=0;2,3,5").orders, vec![2, 3, 5]);
        assert_eq!(sig("g=1;").geometry(), Geometry::Euclidean);
        assert_eq!(sig("g=1").orders, Vec::<u32>::new());
        assert_eq!(sig("g=0;2,2,2,2").geometry(), Geometry::Euclidean);
        assert_eq!(sig("g=0;2,3,7").geometry(), Geometry::Hyperbolic);
        assert_eq!(sig("g=0;2,3,3").geometry(), Geometry::Spherical);
        for bad in ["0;2,3", "g=0;1,2", "g=x;2", "g=0;2,,a"] {
            assert!(matches!(bad.parse::<OrbifoldSignature>(), Err(Error::InvalidSignature(_))), "{bad}");
        }
    }

    #[test]
    fn presentation_shapes() {
        let p = orbifold_presentation(&sig("g=0;2,3,3"));
        assert_eq!(p.to_string(), "< c1, c2, c3 | c1*c1, c2*c2*c2, c3*c3*c3, c1*c2*c3 >");
        let t = orbifold_presentation(&sig("g=1"));
        assert_eq!(t.to_string(), "< a1, b1 | b1*a1*b1^-1*a1^-1 >");
        let one = orbifold_presentation(&sig("g=0;5"));
        assert_eq!(one.relators, vec![vec![1; 5], vec![1]]);
    }

    #[test]
    fn coset_enumeration_orders() {
        let cases = [("g=0;2,3,3", 12), ("g=0;2,3,4", 24), ("g=0;2,3,5", 60), ("g=0;2,2,5", 10), ("g=0;7", 1)];
        for (s, n) in cases {
            let p = orbifold_presentation(&sig(s));
            let rep = todd_coxeter(&p, DEFAULT_MAX_COSETS).unwrap();
            assert_eq!(rep.degree, n, "{s}");
            assert!(rep.relators_trivial(&p));
        }
        assert!(todd_coxeter(&orbifold_presentation(&sig("g=0;2,3,7")), DEFAULT_MAX_COSETS).is_err());
        assert!(todd_coxeter(&orbifold_presentation(&sig("g=1")), 500).is_err());
    }

    #[test]
    fn obstruction_233() {
        let r = sphere_obstruction(&sig("g=0;2,3,3"), DEFAULT_MAX_COSETS).unwrap();
        assert_eq!(r.coefficients, vec![6, 6, 4, 4, 4, 4, 4, 4]);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn verdicts() {
        assert_eq!(signature_verdict(&sig("g=0;2,3,5"), DEFAULT_MAX_COSETS).verdict, Verdict::ExpectedNotFlat);
        let h = signature_verdict(&sig("g=0;2,3,7"), DEFAULT_MAX_COSETS);
        assert_eq!(h.verdict, Verdict::ExpectedFlat);
        assert!(h.consistent);
        assert_eq!(signature_verdict(&sig("g=0;2,2,2,2"), 2000).verdict, Verdict::ExpectedFlat);
        assert_eq!(signature_verdict(&sig("g=0;3"), 100).verdict, Verdict::NoPrediction);
    }
}
