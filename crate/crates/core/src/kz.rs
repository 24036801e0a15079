//! Rank-one cyclic local model of the KZ functor.
//!
//! Near a reflection hypersurface with stabilizer ℤ/n the Dunkl connection
//! reduces to
//!
//!   ∂_z + (1/z) (Σ_m κ_m (1 − g^m) + η),   κ_m = 2c_m / (1 − e^{−2πim/n}),
//!
//! acting on the regular representation of ℤ/n. On the character line v_j
//! the residue is the flat exponent β_j, and the monodromy around the loop
//! is ζ_j = exp(2πi (j − β_j)/n). Exponents of e are kept as exact
//! multiples of 2πi.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::linalg::solve;
use crate::exactalg::{Cyclotomic, FieldScalar, Param, ParamScalar, Scalar};

const TWO_PI: f64 = std::f64::consts::TAU;

/// The local model with stabilizer ℤ/n, parameters c_1..c_{n−1} (c_m
/// attached to g^m) and η, at t = 1.
#[derive(Clone, Debug)]
pub struct LocalModel {
    pub n: u32,
    pub c: Vec<ParamScalar>,
    pub eta: ParamScalar,
}

impl LocalModel {
    pub fn new(n: u32, c: Vec<ParamScalar>, eta: ParamScalar) -> Result<Self> {
        if n < 2 {
            return Err(Error::Precondition(format!("local model needs n ≥ 2, got {n}")));
        }
        if c.len() != n as usize - 1 {
            return Err(Error::Precondition(format!("expected {} values of c, got {}", n - 1, c.len())));
        }
        Ok(LocalModel { n, c, eta })
    }

    /// c_m and η all formal.
    pub fn formal(n: u32) -> Result<Self> {
        Self::new(n, (0..n as usize - 1).map(ParamScalar::c).collect(), ParamScalar::eta())
    }

    pub fn is_numeric(&self) -> bool {
        self.c.iter().chain(std::iter::once(&self.eta)).all(ParamScalar::is_constant)
    }

    fn root(&self, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(self.n, k)
    }

    /// (1 − ω^{−jm}) / (1 − ω^{−m}) with ω = e^{2πi/n}.
    fn weight(&self, j: i64, m: i64) -> Cyclotomic {
        let one = Cyclotomic::one();
        one.sub(&self.root(-j * m)).div(&one.sub(&self.root(-m))).expect("ω^m ≠ 1 for 0 < m < n")
    }

    /// β_j = 2 Σ_m c_m (1 − ω^{−jm})/(1 − ω^{−m}) + η.
    pub fn flat_exponent(&self, j: i64) -> ParamScalar {
        let mut beta = self.eta.clone();
        for (idx, cm) in self.c.iter().enumerate() {
            let w = self.weight(j, idx as i64 + 1);
            beta = beta.add(&cm.mul(&ParamScalar::from_cyclotomic(w.mul(&Cyclotomic::from_int(2)))));
        }
        beta
    }

    /// (j − β_j)/n, so that ζ_j = exp(2πi · this).
    pub fn zeta_exponent(&self, j: i64) -> ParamScalar {
        ParamScalar::from_int(j).sub(&self.flat_exponent(j)).mul(&ParamScalar::rational(1, self.n as i64))
    }

    pub fn zeta_character(&self, j: i64) -> Result<Complex64> {
        Ok(exp_2pi_i(numeric(&self.zeta_exponent(j))?))
    }

    /// Matrix of (c_1..c_{n−1}, η) ↦ (T_1..T_n), where τ_j = 2πi T_j.
    pub fn tau_matrix(&self) -> Vec<Vec<Cyclotomic>> {
        let n = self.n as i64;
        let scale = Cyclotomic::rational(-1, n);
        (1..=n)
            .map(|j| {
                let mut row: Vec<Cyclotomic> = (1..n)
                    .map(|m| self.weight(j, m).mul(&Cyclotomic::from_int(2)).mul(&scale))
                    .collect();
                row.push(scale.clone());
                row
            })
            .collect()
    }

    /// τ_j / 2πi = −β_j / n for j = 1..n, with j = n read as j = 0.
    pub fn tau(&self) -> TauParameters {
        let n = self.n as i64;
        TauParameters {
            n: self.n,
            coeffs: (1..=n).map(|j| self.flat_exponent(j % n).mul(&ParamScalar::rational(-1, n))).collect(),
        }
    }

    /// Recovers (c, η) from τ by solving with [`tau_matrix`](Self::tau_matrix).
    pub fn c_eta_from_tau(n: u32, tau: &TauParameters) -> Result<(Vec<ParamScalar>, ParamScalar)> {
        let shape = LocalModel::formal(n)?;
        if tau.coeffs.len() != n as usize {
            return Err(Error::Precondition(format!("expected {n} τ values")));
        }
        let a: Vec<Vec<ParamScalar>> = shape
            .tau_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(ParamScalar::from_cyclotomic).collect())
            .collect();
        let mut sol = solve(&a, &tau.coeffs).ok_or_else(|| Error::Singular(format!("τ map for n = {n}")))?;
        let eta = sol.pop().expect("n ≥ 2 unknowns");
        Ok((sol, eta))
    }

    /// Applies [`tau_matrix`](Self::tau_matrix) to the parameter vector.
    pub fn tau_via_matrix(&self) -> TauParameters {
        let mut v = self.c.clone();
        v.push(self.eta.clone());
        let coeffs = self
            .tau_matrix()
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&v)
                    .fold(ParamScalar::zero(), |acc, (a, x)| acc.add(&x.mul(&ParamScalar::from_cyclotomic(a.clone()))))
            })
            .collect();
        TauParameters { n: self.n, coeffs }
    }

    /// Residue Σ_m κ_m (1 − R^m) + η on the regular representation, with R
    /// the cyclic shift (eigenvalue ω^{−j} on v_j).
    pub fn residue_matrix(&self) -> Result<DMatrix<Complex64>> {
        let n = self.n as usize;
        let shift = shift_matrix(n);
        let mut a = DMatrix::<Complex64>::identity(n, n) * numeric(&self.eta)?;
        let mut power = DMatrix::<Complex64>::identity(n, n);
        for (idx, cm) in self.c.iter().enumerate() {
            power = &shift * &power;
            let m = idx as i64 + 1;
            let kappa = Cyclotomic::from_int(2).div(&Cyclotomic::one().sub(&self.root(-m))).expect("ω^m ≠ 1");
            let k = numeric(cm)? * kappa.to_complex();
            a += (DMatrix::identity(n, n) - &power) * k;
        }
        Ok(a)
    }
}

/// S e_k = e_{k+1 mod n}.
fn shift_matrix(n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |r, c| if r == (c + 1) % n { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
}

fn numeric(p: &ParamScalar) -> Result<Complex64> {
    p.as_constant()
        .map(|c| c.to_complex())
        .ok_or_else(|| Error::Precondition(format!("numeric value needed, got formal {p}")))
}

fn exp_2pi_i(e: Complex64) -> Complex64 {
    (Complex64::new(0.0, TWO_PI) * e).exp()
}

/// τ_j = 2πi · coeffs[j−1], j = 1..n.
#[derive(Clone, Debug, PartialEq)]
pub struct TauParameters {
    pub n: u32,
    pub coeffs: Vec<ParamScalar>,
}

impl TauParameters {
    pub fn numeric(&self) -> Result<Vec<Complex64>> {
        self.coeffs.iter().map(|c| Ok(numeric(c)? * Complex64::new(0.0, TWO_PI))).collect()
    }

    /// Exponent of the Hecke root e^{2πij/n} e^{τ_j} in units of 2πi.
    pub fn root_exponent(&self, j: usize) -> ParamScalar {
        ParamScalar::rational(j as i64, self.n as i64).add(&self.coeffs[j - 1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonodromyMethod {
    ExactExponent,
    OdeNumeric,
}

#[derive(Clone, Debug)]
pub struct MonodromyResult {
    pub method: MonodromyMethod,
    /// Eigenvalue on the character line j, j = 0..n−1.
    pub eigenvalues: Vec<Complex64>,
    /// Exact exponents (units of 2πi) when available.
    pub exponents: Option<Vec<ParamScalar>>,
    /// Two exponents differ by an integer, so eigenvalues collide.
    pub resonant: bool,
    /// max_j |eigenvalue_j − ζ_j| for numeric results.
    pub max_deviation: Option<f64>,
    /// ‖Π_j (T − ζ_j)‖ for numeric results.
    pub hecke_residual: Option<f64>,
}

fn is_integer(p: &ParamScalar) -> bool {
    p.as_constant().and_then(|c| c.to_rational()).is_some_and(|q| q.is_integer())
}

/// T acts on v_j by exp(−2πiβ_j/n) from continuation and by ω^j from the
/// deck transformation.
pub fn monodromy_exact(model: &LocalModel) -> Result<MonodromyResult> {
    let n = model.n as i64;
    let exponents: Vec<ParamScalar> = (0..n).map(|j| model.zeta_exponent(j)).collect();
    let mut resonant = false;
    for (a, ea) in exponents.iter().enumerate() {
        for eb in &exponents[a + 1..] {
            resonant |= is_integer(&ea.sub(eb));
        }
    }
    let eigenvalues = if model.is_numeric() {
        exponents.iter().map(|e| Ok(exp_2pi_i(numeric(e)?))).collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    Ok(MonodromyResult {
        method: MonodromyMethod::ExactExponent,
        eigenvalues,
        exponents: Some(exponents),
        resonant,
        max_deviation: None,
        hecke_residual: None,
    })
}

/// Classical RK4 for Φ′ = M Φ over [0, 2π] with Φ(0) = I.
fn rk4_propagator(m: &DMatrix<Complex64>, steps: usize) -> DMatrix<Complex64> {
    let n = m.nrows();
    let h = Complex64::new(TWO_PI / steps as f64, 0.0);
    let half = h * 0.5;
    let mut phi = DMatrix::<Complex64>::identity(n, n);
    for _ in 0..steps {
        let k1 = m * &phi;
        let k2 = m * (&phi + &k1 * half);
        let k3 = m * (&phi + &k2 * half);
        let k4 = m * (&phi + &k3 * h);
        let two = Complex64::new(2.0, 0.0);
        phi += (k1 + k2 * two + k3 * two + k4) * (h / 6.0);
    }
    phi
}

/// Integrates f′ = −(A/z) f along z = e^{iθ/n}, θ ∈ [0, 2π], then applies
/// the deck transformation; eigenvalues are matched to ζ_j.
pub fn monodromy_numeric(model: &LocalModel, steps: usize) -> Result<MonodromyResult> {
    if steps == 0 {
        return Err(Error::Precondition("steps must be positive".into()));
    }
    let n = model.n as usize;
    let a = model.residue_matrix()?;
    // df/dθ = −(i/n) A f
    let generator = a * Complex64::new(0.0, -1.0 / n as f64);
    let transport = rk4_propagator(&generator, steps);
    let shift_inv = shift_matrix(n).transpose();
    let t = &shift_inv * &transport;
    let raw = eigenvalues(&t)?;
    let exact = monodromy_exact(model)?;
    let zetas = exact.eigenvalues;
    let assignment = match_eigenvalues(&zetas, &raw);
    let eigenvalues: Vec<Complex64> = assignment.iter().map(|&k| raw[k]).collect();
    let max_deviation = eigenvalues.iter().zip(&zetas).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);

    let mut poly = DMatrix::<Complex64>::identity(n, n);
    for z in &zetas {
        poly *= &t - DMatrix::<Complex64>::identity(n, n) * *z;
    }
    Ok(MonodromyResult {
        method: MonodromyMethod::OdeNumeric,
        eigenvalues,
        exponents: None,
        resonant: exact.resonant,
        max_deviation: Some(max_deviation),
        hecke_residual: Some(poly.norm()),
    })
}

/// Eigenvalues via complex Schur. Unshifted QR can stall when eigenvalues
/// share a modulus (a monodromy is close to unitary), so the matrix is
/// shifted off the unit circle first.
fn eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    const SHIFTS: [(f64, f64); 4] = [(0.37, 0.21), (-0.29, 0.43), (0.61, -0.17), (0.0, 0.0)];
    let n = m.nrows();
    for (re, im) in SHIFTS {
        let sigma = Complex64::new(re, im);
        let shifted = m + DMatrix::<Complex64>::identity(n, n) * sigma;
        if let Some(schur) = Schur::try_new(shifted, 1e-15, 20_000) {
            let (_, tri) = schur.unpack();
            return Ok((0..n).map(|i| tri[(i, i)] - sigma).collect());
        }
    }
    Err(Error::Singular("Schur iteration for the monodromy did not converge".into()))
}

/// For each target, the index of its partner in `found`, minimizing the
/// largest distance (exhaustive for n ≤ 8, greedy beyond).
fn match_eigenvalues(targets: &[Complex64], found: &[Complex64]) -> Vec<usize> {
    let n = targets.len();
    let cost = |perm: &[usize]| perm.iter().enumerate().map(|(i, &k)| (targets[i] - found[k]).norm()).fold(0.0, f64::max);
    if n <= 8 {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = perm.clone();
        let mut best_cost = cost(&perm);
        while next_permutation(&mut perm) {
            let c = cost(&perm);
            if c < best_cost {
                best_cost = c;
                best = perm.clone();
            }
        }
        best
    } else {
        let mut used = vec![false; found.len()];
        targets
            .iter()
            .map(|z| {
                let k = (0..found.len())
                    .filter(|&k| !used[k])
                    .min_by(|&a, &b| (found[a] - z).norm().total_cmp(&(found[b] - z).norm()))
                    .expect("as many eigenvalues as targets");
                used[k] = true;
                k
            })
            .collect()
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct RootCheckReport {
    pub n: u32,
    /// (character index j, Hecke root index in 1..n, integer offset)
    pub matching: Vec<(usize, usize, String)>,
    pub passed: bool,
}

/// {ζ_j} = {e^{2πij/n} e^{τ_j}} as exponents modulo ℤ, exactly.
pub fn hecke_root_check(model: &LocalModel) -> RootCheckReport {
    let tau = model.tau();
    let n = model.n as usize;
    let mut used = vec![false; n];
    let mut matching = Vec::new();
    let mut passed = true;
    for j in 0..n {
        let e = model.zeta_exponent(j as i64);
        let hit = (1..=n).find(|&k| !used[k - 1] && is_integer(&e.sub(&tau.root_exponent(k))));
        match hit {
            Some(k) => {
                used[k - 1] = true;
                matching.push((j, k, e.sub(&tau.root_exponent(k)).to_string()));
            }
            None => passed = false,
        }
    }
    RootCheckReport { n: model.n, matching, passed }
}

/// Serialized form of a monodromy computation.
#[derive(Clone, Debug, Serialize)]
pub struct KzReport {
    pub n: u32,
    pub c: Vec<String>,
    pub eta: String,
    pub method: MonodromyMethod,
    pub eigenvalues: Vec<[f64; 2]>,
    pub zeta_exact: Vec<String>,
    pub max_deviation: Option<f64>,
    pub resonant: bool,
}

impl KzReport {
    pub fn new(model: &LocalModel, result: &MonodromyResult) -> Self {
        KzReport {
            n: model.n,
            c: model.c.iter().map(ToString::to_string).collect(),
            eta: model.eta.to_string(),
            method: result.method,
            eigenvalues: result.eigenvalues.iter().map(|z| [z.re, z.im]).collect(),
            zeta_exact: (0..model.n as i64).map(|j| format!("exp(2*pi*i*({}))", model.zeta_exponent(j))).collect(),
            max_deviation: result.max_deviation,
            resonant: result.resonant,
        }
    }
}

/// Substitutes numeric values for formal parameters of a τ expression.
pub fn evaluate_tau(tau: &TauParameters, c: &[ParamScalar], eta: &ParamScalar) -> Option<Vec<ParamScalar>> {
    let mut values: Vec<(Param, ParamScalar)> = c.iter().enumerate().map(|(k, v)| (Param::C(k), v.clone())).collect();
    values.push((Param::Eta, eta.clone()));
    tau.coeffs.iter().map(|x| x.specialize(&values)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ParamScalar {
        ParamScalar::rational(n, d)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn exponents_n2() {
        let m = LocalModel::formal(2).unwrap();
        assert_eq!(m.flat_exponent(0), ParamScalar::eta());
        assert_eq!(m.flat_exponent(1), ParamScalar::c(0).mul(&ParamScalar::from_int(2)).add(&ParamScalar::eta()));
        // τ_1 = −πi(2c+η), τ_2 = −πiη
        let tau = m.tau();
        assert_eq!(tau.coeffs[0], m.flat_exponent(1).mul(&q(-1, 2)));
        assert_eq!(tau.coeffs[1], ParamScalar::eta().mul(&q(-1, 2)));
    }

    #[test]
    fn zeta_examples() {
        let m = LocalModel::new(2, vec![q(1, 10)], ParamScalar::zero()).unwrap();
        assert!(close(m.zeta_character(1).unwrap(), Complex64::from_polar(1.0, 0.8 * std::f64::consts::PI), 1e-14));
        assert!(close(m.zeta_character(0).unwrap(), Complex64::new(1.0, 0.0), 1e-14));
        let m3 = LocalModel::new(3, vec![ParamScalar::zero(); 2], q(3, 10)).unwrap();
        assert!(close(m3.zeta_character(0).unwrap(), Complex64::from_polar(1.0, -0.2 * std::f64::consts::PI), 1e-14));
    }

    #[test]
    fn undeformed_is_roots_of_unity() {
        for n in 2..7 {
            let m = LocalModel::new(n, vec![ParamScalar::zero(); n as usize - 1], ParamScalar::zero()).unwrap();
            let r = monodromy_numeric(&m, 64).unwrap();
            for (j, z) in r.eigenvalues.iter().enumerate() {
                assert!(close(*z, Complex64::from_polar(1.0, TWO_PI * j as f64 / n as f64), 1e-10));
            }
        }
    }

    #[test]
    fn tau_matrix_agrees_with_formula() {
        for n in 2..7 {
            let m = LocalModel::formal(n).unwrap();
            assert_eq!(m.tau(), m.tau_via_matrix());
        }
    }

    #[test]
    fn roots_match_formally() {
        for n in 2..7 {
            assert!(hecke_root_check(&LocalModel::formal(n).unwrap()).passed);
        }
    }

    #[test]
    fn numeric_n2() {
        let m = LocalModel::new(2, vec![q(1, 10)], ParamScalar::zero()).unwrap();
        let r = monodromy_numeric(&m, 4096).unwrap();
        assert!(r.max_deviation.unwrap() < 1e-8);
        assert!(r.hecke_residual.unwrap() < 1e-8);
    }

    #[test]
    fn resonance_flagged() {
        // β_1 − β_0 = 2c = 1 makes both exponents agree mod ℤ
        let m = LocalModel::new(2, vec![q(1, 2)], ParamScalar::zero()).unwrap();
        assert!(monodromy_exact(&m).unwrap().resonant);
        let m = LocalModel::new(2, vec![q(1, 10)], ParamScalar::zero()).unwrap();
        assert!(!monodromy_exact(&m).unwrap().resonant);
    }
}
