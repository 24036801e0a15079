//! Dunkl–Opdam operators on the polynomial representation ℂ[𝔥]:
//!
//! D_y = t ∂_y + Σ_{s∈S} (2c_s / (1 − λ_s)) · ((α_s, y) / α_s) · (s − 1)

pub mod quasi;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Cyclotomic, FieldScalar, Monomial, MultiPoly, ParamScalar, Poly, Scalar};
use crate::reflgroup::ReflectionGroup;

/// Parameter assignment for H_{t,c}: `t` and one `c` per reflection class.
/// Values may be formal ([`ParamScalar::t`], [`ParamScalar::c`]) or
/// specialized constants.
#[derive(Clone, Debug)]
pub struct Params {
    pub t: ParamScalar,
    pub c: Vec<ParamScalar>,
}

impl Params {
    /// Fully formal parameters t, c_1..c_k for `group`.
    pub fn formal(group: &ReflectionGroup) -> Self {
        Params { t: ParamScalar::t(), c: group.formal_c() }
    }

    /// Formal c with `t` specialized.
    pub fn with_t(group: &ReflectionGroup, t: ParamScalar) -> Self {
        Params { t, c: group.formal_c() }
    }
}

#[derive(Clone, Debug)]
struct ReflectionTerm {
    element: usize,
    /// 2c_s / (1 − λ_s)
    kappa: ParamScalar,
    root: Vec<Cyclotomic>,
    root_poly: MultiPoly,
}

/// The family of Dunkl operators D_y, y ∈ 𝔥, for a group and parameters.
#[derive(Clone, Debug)]
pub struct DunklOperators<'g> {
    group: &'g ReflectionGroup,
    params: Params,
    terms: Vec<ReflectionTerm>,
}

pub(crate) fn lift(c: &Cyclotomic) -> ParamScalar {
    ParamScalar::from_cyclotomic(c.clone())
}

fn linear_poly(coeffs: &[Cyclotomic]) -> MultiPoly {
    let mut p = Poly::zero();
    for (i, c) in coeffs.iter().enumerate() {
        p.add_term(Monomial::var(i), &lift(c));
    }
    p
}

fn pairing(root: &[Cyclotomic], y: &[Cyclotomic]) -> Cyclotomic {
    root.iter().zip(y).fold(Cyclotomic::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
}

/// Basis vector y_i ∈ 𝔥.
pub fn basis_vector(dim: usize, i: usize) -> Vec<Cyclotomic> {
    (0..dim).map(|j| if i == j { Cyclotomic::one() } else { Cyclotomic::zero() }).collect()
}

impl<'g> DunklOperators<'g> {
    pub fn new(group: &'g ReflectionGroup, params: Params) -> Self {
        assert_eq!(params.c.len(), group.param_count(), "one c per reflection class");
        let terms = group
            .reflections()
            .iter()
            .map(|r| {
                let denom = Cyclotomic::one().sub(&r.eigenvalue);
                let factor = Cyclotomic::from_int(2).div(&denom).expect("λ_s ≠ 1");
                ReflectionTerm {
                    element: r.element,
                    kappa: params.c[r.class].mul(&lift(&factor)),
                    root: r.root.clone(),
                    root_poly: linear_poly(&r.root),
                }
            })
            .collect();
        DunklOperators { group, params, terms }
    }

    pub fn formal(group: &'g ReflectionGroup) -> Self {
        Self::new(group, Params::formal(group))
    }

    pub fn group(&self) -> &'g ReflectionGroup {
        self.group
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    /// D_y p for y ∈ 𝔥 given by coefficients on the basis y_1..y_ℓ.
    pub fn apply(&self, y: &[Cyclotomic], p: &MultiPoly) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero();
        for (i, yi) in y.iter().enumerate() {
            if !yi.is_zero() {
                out.add_assign(&p.derivative(i).scale(&lift(yi)));
            }
        }
        out = out.scale(&self.params.t);
        for term in &self.terms {
            let ay = pairing(&term.root, y);
            if ay.is_zero() || term.kappa.is_zero() {
                continue;
            }
            let diff = self.group.act_poly(term.element, p).sub(p);
            let quotient = diff
                .divide_exact(&term.root_poly)
                .map_err(|_| Error::InexactDunklDivision { element: term.element })?;
            out.add_assign(&quotient.scale(&term.kappa.mul(&lift(&ay))));
        }
        Ok(out)
    }

    /// D_{y_i} p.
    pub fn apply_basis(&self, i: usize, p: &MultiPoly) -> Result<MultiPoly> {
        self.apply(&basis_vector(self.group.dim(), i), p)
    }

    /// Applies D_{y_1}^{b_1} ⋯ D_{y_ℓ}^{b_ℓ}; the order is irrelevant since
    /// Dunkl operators commute.
    pub fn apply_monomial(&self, b: &Monomial, p: &MultiPoly) -> Result<MultiPoly> {
        let mut out = p.clone();
        for (i, &e) in b.exps().iter().enumerate() {
            for _ in 0..e {
                if out.is_zero() {
                    return Ok(out);
                }
                out = self.apply_basis(i, &out)?;
            }
        }
        Ok(out)
    }

    /// [D_y, x] p computed from the operators.
    pub fn commutator_with_x(&self, y: &[Cyclotomic], x: &[Cyclotomic], p: &MultiPoly) -> Result<MultiPoly> {
        let xp = linear_poly(x);
        Ok(self.apply(y, &xp.mul(p))?.sub(&xp.mul(&self.apply(y, p)?)))
    }

    /// t (y,x) p − Σ_s c_s (y,α_s)(x,α_s^∨) s·p: the action of the right-hand
    /// side of the main commutation relation.
    pub fn commutation_rhs(&self, y: &[Cyclotomic], x: &[Cyclotomic], p: &MultiPoly) -> MultiPoly {
        let yx = pairing(x, y);
        let mut out = p.scale(&self.params.t.mul(&lift(&yx)));
        for r in self.group.reflections() {
            let coef = pairing(&r.root, y).mul(&pairing(x, &r.coroot));
            if coef.is_zero() {
                continue;
            }
            let sp = self.group.act_poly(r.element, p);
            out = out.sub(&sp.scale(&self.params.c[r.class].mul(&lift(&coef))));
        }
        out
    }
}

/// Outcome of [`commute_check`].
#[derive(Clone, Debug, Serialize)]
pub struct CommuteReport {
    pub group: String,
    pub max_degree: u32,
    pub pairs_checked: usize,
    pub monomials_checked: usize,
    /// First failure: (i, j, monomial, nonzero value of [D_i, D_j] p).
    pub failure: Option<(usize, usize, String, String)>,
}

impl CommuteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn monomial_poly(m: &Monomial) -> MultiPoly {
    Poly::term(m.clone(), ParamScalar::one())
}

pub(crate) fn x_names(i: usize) -> String {
    format!("x{}", i + 1)
}

/// Checks [D_y, D_{y'}] p = 0 exactly for all monomials p of degree ≤
/// `max_degree`, for each requested pair of directions.
pub fn commute_check_pairs(
    ops: &DunklOperators<'_>,
    pairs: &[(Vec<Cyclotomic>, Vec<Cyclotomic>)],
    max_degree: u32,
) -> Result<CommuteReport> {
    let dim = ops.group().dim();
    let monomials = Monomial::all_up_to_degree(dim, max_degree);
    let mut report = CommuteReport {
        group: ops.group().kind.to_string(),
        max_degree,
        pairs_checked: pairs.len(),
        monomials_checked: monomials.len(),
        failure: None,
    };
    for (pi, (y1, y2)) in pairs.iter().enumerate() {
        for m in &monomials {
            let p = monomial_poly(m);
            let a = ops.apply(y1, &ops.apply(y2, &p)?)?;
            let b = ops.apply(y2, &ops.apply(y1, &p)?)?;
            let d = a.sub(&b);
            if !d.is_zero() {
                report.failure = Some((pi, pi, m.fmt_with(&x_names), d.to_string()));
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// [D_{y_i}, D_{y_j}] = 0 for all basis pairs i < j, with t and c formal.
pub fn commute_check(group: &ReflectionGroup, max_degree: u32) -> Result<CommuteReport> {
    let ops = DunklOperators::formal(group);
    let dim = group.dim();
    let idx: Vec<(usize, usize)> = (0..dim).flat_map(|i| (i + 1..dim).map(move |j| (i, j))).collect();
    let pairs: Vec<_> = idx.iter().map(|&(i, j)| (basis_vector(dim, i), basis_vector(dim, j))).collect();
    let mut report = commute_check_pairs(&ops, &pairs, max_degree)?;
    if let Some(f) = report.failure.as_mut() {
        let (i, j) = idx[f.0];
        f.0 = i;
        f.1 = j;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflgroup::GroupKind;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(i)
    }

    fn k(n: i64) -> ParamScalar {
        ParamScalar::from_int(n)
    }

    #[test]
    fn z2_on_x() {
        let g = ReflectionGroup::build(GroupKind::Cyclic(2)).unwrap();
        let d = DunklOperators::formal(&g);
        // D(x) = t − 2c
        let expected = ParamScalar::t().sub(&ParamScalar::c(0).mul(&k(2)));
        assert_eq!(d.apply_basis(0, &x(0)).unwrap(), MultiPoly::constant(expected));
    }

    #[test]
    fn z2_kills_reflection_term_on_even() {
        let g = ReflectionGroup::build(GroupKind::Cyclic(2)).unwrap();
        let d = DunklOperators::formal(&g);
        let expected = x(0).scale(&ParamScalar::t().mul(&k(2)));
        assert_eq!(d.apply_basis(0, &x(0).pow(2)).unwrap(), expected);
    }

    #[test]
    fn constants_are_killed() {
        for key in ["Z3", "S3", "B2", "I2(5)"] {
            let g = ReflectionGroup::build(key.parse().unwrap()).unwrap();
            let d = DunklOperators::formal(&g);
            for i in 0..g.dim() {
                assert!(d.apply_basis(i, &MultiPoly::one()).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn rank_one_commutes_vacuously() {
        let g = ReflectionGroup::build(GroupKind::Cyclic(5)).unwrap();
        let r = commute_check(&g, 4).unwrap();
        assert!(r.passed());
        assert_eq!(r.pairs_checked, 0);
    }

    #[test]
    fn s3_commutes_low_degree() {
        let g = ReflectionGroup::build(GroupKind::Symmetric(3)).unwrap();
        assert!(commute_check(&g, 4).unwrap().passed());
    }

    #[test]
    fn main_relation_in_polynomial_representation() {
        for key in ["Z2", "Z3", "S3", "I2(4)", "B2"] {
            let g = ReflectionGroup::build(key.parse().unwrap()).unwrap();
            let d = DunklOperators::formal(&g);
            let dim = g.dim();
            for m in Monomial::all_up_to_degree(dim, 3) {
                let p = monomial_poly(&m);
                for i in 0..dim {
                    for j in 0..dim {
                        let y = basis_vector(dim, i);
                        let xv = basis_vector(dim, j);
                        assert_eq!(
                            d.commutator_with_x(&y, &xv, &p).unwrap(),
                            d.commutation_rhs(&y, &xv, &p),
                            "{key} i={i} j={j} p={m:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn leibniz_on_invariants() {
        // f = x1² + x2² + x3² is S3-invariant
        let g = ReflectionGroup::build(GroupKind::Symmetric(3)).unwrap();
        let d = DunklOperators::formal(&g);
        let f = x(0).pow(2).add(&x(1).pow(2)).add(&x(2).pow(2));
        for m in Monomial::all_up_to_degree(3, 3) {
            let p = monomial_poly(&m);
            for i in 0..3 {
                let lhs = d.apply_basis(i, &f.mul(&p)).unwrap().sub(&f.mul(&d.apply_basis(i, &p).unwrap()));
                let rhs = f.derivative(i).mul(&p).scale(&ParamScalar::t());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn root_rescaling_is_invisible() {
        let g = ReflectionGroup::build(GroupKind::Dihedral(4)).unwrap();
        let mu = Cyclotomic::root_of_unity(4, 1).add(&Cyclotomic::from_int(3));
        let g2 = g.rescale_roots(&mu);
        let d1 = DunklOperators::formal(&g);
        let d2 = DunklOperators::formal(&g2);
        for m in Monomial::all_up_to_degree(2, 4) {
            let p = monomial_poly(&m);
            for i in 0..2 {
                assert_eq!(d1.apply_basis(i, &p).unwrap(), d2.apply_basis(i, &p).unwrap());
            }
        }
    }
}
