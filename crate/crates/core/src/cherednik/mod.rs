//! The rational Cherednik algebra H_{t,c}(𝔥, G) in PBW normal form
//! x^a · g · y^b, with multiplication by memoized rewriting.

mod center;
mod polyrep;

pub use center::{
    center_basis_t0, euler_check, keys_up_to_degree, pbw_dimension, satake_check_t0, EulerReport, PbwDimensionReport, SatakeReport,
};
pub use polyrep::{dunkl_consistency, faithfulness_check, random_word, word_element, FaithfulnessReport, Generator, PolynomialRep};

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::dunkl::{lift, Params};
use crate::exactalg::{Cyclotomic, FieldScalar, Monomial, ParamScalar, Poly, Scalar};
use crate::reflgroup::ReflectionGroup;

/// A PBW basis vector x^a · g · y^b.
///
/// Ordered by total degree |a| + |b| first, so the largest key of an element
/// belongs to its top symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PbwKey {
    pub x: Monomial,
    pub g: usize,
    pub y: Monomial,
}

impl PbwKey {
    pub fn new(x: Monomial, g: usize, y: Monomial) -> Self {
        PbwKey { x, g, y }
    }

    /// Total degree in x and y.
    pub fn degree(&self) -> u32 {
        self.x.degree() + self.y.degree()
    }
}

impl Ord for PbwKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.x.cmp(&other.x))
            .then_with(|| self.g.cmp(&other.g))
            .then_with(|| self.y.cmp(&other.y))
    }
}

impl PartialOrd for PbwKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite linear combination of PBW basis vectors.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PBWElement {
    terms: BTreeMap<PbwKey, ParamScalar>,
}

impl PBWElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: ParamScalar) -> Self {
        Self::term(PbwKey::new(Monomial::one(), 0, Monomial::one()), c)
    }

    pub fn one() -> Self {
        Self::scalar(ParamScalar::one())
    }

    pub fn term(key: PbwKey, c: ParamScalar) -> Self {
        let mut e = Self::zero();
        e.add_term(key, &c);
        e
    }

    pub fn x(i: usize) -> Self {
        Self::term(PbwKey::new(Monomial::var(i), 0, Monomial::one()), ParamScalar::one())
    }

    pub fn y(i: usize) -> Self {
        Self::term(PbwKey::new(Monomial::one(), 0, Monomial::var(i)), ParamScalar::one())
    }

    pub fn group(g: usize) -> Self {
        Self::term(PbwKey::new(Monomial::one(), g, Monomial::one()), ParamScalar::one())
    }

    pub fn add_term(&mut self, key: PbwKey, c: &ParamScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = v.add(c);
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c);
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&ParamScalar::from_int(-1))
    }

    pub fn scale(&self, s: &ParamScalar) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        PBWElement { terms: self.terms.iter().map(|(k, c)| (k.clone(), c.mul(s))).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwKey, &ParamScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &PbwKey) -> ParamScalar {
        self.terms.get(key).cloned().unwrap_or_else(ParamScalar::zero)
    }

    pub fn as_map(&self) -> &BTreeMap<PbwKey, ParamScalar> {
        &self.terms
    }

    pub fn from_map(terms: BTreeMap<PbwKey, ParamScalar>) -> Self {
        let mut e = Self::zero();
        for (k, c) in terms {
            e.add_term(k, &c);
        }
        e
    }

    /// Filtration degree in the grading deg 𝔥* = deg 𝔥 = 1, deg G = 0.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(PbwKey::degree).max()
    }

    /// Degree in the filtration where only 𝔥 has degree one.
    pub fn y_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.y.degree()).max()
    }

    /// Terms of maximal total degree.
    pub fn top_symbol(&self) -> PBWElement {
        let Some(d) = self.degree() else { return Self::zero() };
        PBWElement { terms: self.terms.iter().filter(|(k, _)| k.degree() == d).map(|(k, c)| (k.clone(), c.clone())).collect() }
    }

    /// Substitutes values for parameters in every coefficient.
    pub fn specialize(&self, values: &[(crate::exactalg::Param, ParamScalar)]) -> Option<Self> {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &c.specialize(values)?);
        }
        Some(out)
    }

    /// Sorted, exact text form used for regression diffs.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

fn fmt_key(k: &PbwKey) -> String {
    let mut factors = Vec::new();
    if !k.x.is_one() {
        factors.push(k.x.fmt_with(&|i| format!("x{}", i + 1)));
    }
    if k.g != 0 {
        factors.push(format!("g{}", k.g));
    }
    if !k.y.is_one() {
        factors.push(k.y.fmt_with(&|i| format!("y{}", i + 1)));
    }
    factors.join("*")
}

impl fmt::Display for PBWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let body = fmt_key(k);
                match (body.is_empty(), c == &ParamScalar::one()) {
                    (true, _) => format!("({c})"),
                    (false, true) => body,
                    (false, false) => format!("({c})*{body}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

type Cache<K> = Mutex<HashMap<K, PBWElement>>;

/// H_{t,c}(𝔥, G) for a fixed group and parameter assignment.
pub struct CherednikAlgebra {
    group: Arc<ReflectionGroup>,
    params: Params,
    /// [y_i, x_j] = Σ_g bracket[i][j][g] · g
    bracket: Vec<Vec<Vec<(usize, ParamScalar)>>>,
    yx_cache: Cache<(usize, Monomial)>,
    yy_cache: Cache<(Monomial, Monomial)>,
    x_act: Mutex<HashMap<(usize, Monomial), Poly<Cyclotomic>>>,
    y_act: Mutex<HashMap<(usize, Monomial), Poly<Cyclotomic>>>,
}

impl fmt::Debug for CherednikAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CherednikAlgebra").field("group", &self.group.kind).field("params", &self.params).finish()
    }
}

impl CherednikAlgebra {
    pub fn new(group: Arc<ReflectionGroup>, params: Params) -> Self {
        assert_eq!(params.c.len(), group.param_count(), "one c per reflection class");
        let dim = group.dim();
        let mut bracket = vec![vec![Vec::new(); dim]; dim];
        for (i, row) in bracket.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                if i == j && !params.t.is_zero() {
                    entry.push((0, params.t.clone()));
                }
                for r in group.reflections() {
                    let coef = r.root[i].mul(&r.coroot[j]);
                    let c = params.c[r.class].mul(&lift(&coef));
                    if !c.is_zero() {
                        entry.push((r.element, c.neg()));
                    }
                }
            }
        }
        CherednikAlgebra {
            group,
            params,
            bracket,
            yx_cache: Mutex::default(),
            yy_cache: Mutex::default(),
            x_act: Mutex::default(),
            y_act: Mutex::default(),
        }
    }

    /// Formal t and c.
    pub fn formal(group: Arc<ReflectionGroup>) -> Self {
        let params = Params::formal(&group);
        Self::new(group, params)
    }

    /// t specialized, c formal.
    pub fn with_t(group: Arc<ReflectionGroup>, t: ParamScalar) -> Self {
        let params = Params::with_t(&group, t);
        Self::new(group, params)
    }

    pub fn group(&self) -> &ReflectionGroup {
        &self.group
    }

    pub fn group_arc(&self) -> Arc<ReflectionGroup> {
        self.group.clone()
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    /// [y_i, x_j] as an element of the group algebra.
    pub fn bracket(&self, i: usize, j: usize) -> PBWElement {
        let mut out = PBWElement::zero();
        for (g, c) in &self.bracket[i][j] {
            out.add_term(PbwKey::new(Monomial::one(), *g, Monomial::one()), c);
        }
        out
    }

    /// The symmetrizing idempotent e = |G|⁻¹ Σ_g g.
    pub fn idempotent(&self) -> PBWElement {
        let w = ParamScalar::rational(1, self.group.order() as i64);
        let mut e = PBWElement::zero();
        for g in 0..self.group.order() {
            e.add_term(PbwKey::new(Monomial::one(), g, Monomial::one()), &w);
        }
        e
    }

    /// h = Σ_i x_i y_i + ℓt/2 − Σ_s (2c_s/(1 − λ_s)) s.
    pub fn euler_element(&self) -> PBWElement {
        let dim = self.dim();
        let mut h = PBWElement::zero();
        for i in 0..dim {
            h.add_term(PbwKey::new(Monomial::var(i), 0, Monomial::var(i)), &ParamScalar::one());
        }
        h.add_term(
            PbwKey::new(Monomial::one(), 0, Monomial::one()),
            &self.params.t.mul(&ParamScalar::rational(dim as i64, 2)),
        );
        for r in self.group.reflections() {
            let factor = Cyclotomic::from_int(2).div(&Cyclotomic::one().sub(&r.eigenvalue)).expect("λ_s ≠ 1");
            let kappa = self.params.c[r.class].mul(&lift(&factor));
            h.add_term(PbwKey::new(Monomial::one(), r.element, Monomial::one()), &kappa.neg());
        }
        h
    }

    fn x_image(&self, g: usize, a: &Monomial) -> Poly<Cyclotomic> {
        let key = (g, a.clone());
        if let Some(p) = self.x_act.lock().unwrap().get(&key) {
            return p.clone();
        }
        let p = self.group.act_x(g, &Poly::term(a.clone(), Cyclotomic::one()), Cyclotomic::clone);
        self.x_act.lock().unwrap().insert(key, p.clone());
        p
    }

    fn y_image(&self, g: usize, b: &Monomial) -> Poly<Cyclotomic> {
        let key = (g, b.clone());
        if let Some(p) = self.y_act.lock().unwrap().get(&key) {
            return p.clone();
        }
        let p = self.group.act_y(g, &Poly::term(b.clone(), Cyclotomic::one()), Cyclotomic::clone);
        self.y_act.lock().unwrap().insert(key, p.clone());
        p
    }

    /// Adds coef · x^{x_pre} · (g·x^a) · g · (g'·y^b) · y^{y_post} where the
    /// group images are supplied as polynomials.
    #[allow(clippy::too_many_arguments)]
    fn place(
        out: &mut PBWElement,
        coef: &ParamScalar,
        x_pre: &Monomial,
        xs: &Poly<Cyclotomic>,
        g: usize,
        ys: &Poly<Cyclotomic>,
        y_post: &Monomial,
    ) {
        for (mx, cx) in xs.terms() {
            for (my, cy) in ys.terms() {
                let c = coef.mul(&lift(&cx.mul(cy)));
                out.add_term(PbwKey::new(x_pre.mul(mx), g, my.mul(y_post)), &c);
            }
        }
    }

    /// Normal form of y_i · x^a, by moving y_i past one x at a time.
    fn y_times_x(&self, i: usize, a: &Monomial) -> PBWElement {
        if a.is_one() {
            return PBWElement::y(i);
        }
        let key = (i, a.clone());
        if let Some(e) = self.yx_cache.lock().unwrap().get(&key) {
            return e.clone();
        }
        let j = a.exps().iter().position(|&e| e > 0).expect("non-constant monomial");
        let rest = a.lower(j).expect("x_j divides x^a");
        // y_i x_j x^rest = x_j (y_i x^rest) + [y_i, x_j] x^rest
        let mut out = PBWElement::zero();
        for (k, c) in self.y_times_x(i, &rest).terms() {
            out.add_term(PbwKey::new(k.x.raise(j), k.g, k.y.clone()), c);
        }
        let one = Poly::one();
        for (g, c) in &self.bracket[i][j] {
            // g x^rest = (g·x^rest) g
            Self::place(&mut out, c, &Monomial::one(), &self.x_image(*g, &rest), *g, &one, &Monomial::one());
        }
        self.yx_cache.lock().unwrap().insert(key, out.clone());
        out
    }

    /// Normal form of y^b · x^a.
    fn y_pow_times_x_pow(&self, b: &Monomial, a: &Monomial) -> PBWElement {
        if b.is_one() || a.is_one() {
            return PBWElement::term(PbwKey::new(a.clone(), 0, b.clone()), ParamScalar::one());
        }
        let key = (b.clone(), a.clone());
        if let Some(e) = self.yy_cache.lock().unwrap().get(&key) {
            return e.clone();
        }
        let i = b.exps().iter().position(|&e| e > 0).expect("non-constant monomial");
        let rest = b.lower(i).expect("y_i divides y^b");
        let mut out = PBWElement::zero();
        // y_i · (x^α h y^β) = (y_i x^α) h y^β and y^{β'} h = h (h⁻¹·y^{β'})
        for (k, c) in self.y_pow_times_x_pow(&rest, a).terms() {
            let h_inv = self.group.inverse(k.g);
            for (k2, c2) in self.y_times_x(i, &k.x).terms() {
                let g = self.group.mul(k2.g, k.g);
                let ys = self.y_image(h_inv, &k2.y);
                Self::place(&mut out, &c.mul(c2), &k2.x, &Poly::one(), g, &ys, &k.y);
            }
        }
        self.yy_cache.lock().unwrap().insert(key, out.clone());
        out
    }

    /// Product of two basis vectors in normal form.
    pub fn key_product(&self, left: &PbwKey, right: &PbwKey) -> PBWElement {
        let mut out = PBWElement::zero();
        let g2_inv = self.group.inverse(right.g);
        // x^a1 g1 [y^b1 x^a2] g2 y^b2
        for (k, c) in self.y_pow_times_x_pow(&left.y, &right.x).terms() {
            let xs = self.x_image(left.g, &k.x);
            let ys = self.y_image(g2_inv, &k.y);
            let g = self.group.mul(self.group.mul(left.g, k.g), right.g);
            Self::place(&mut out, c, &left.x, &xs, g, &ys, &right.y);
        }
        out
    }

    pub fn mul(&self, a: &PBWElement, b: &PBWElement) -> PBWElement {
        let mut out = PBWElement::zero();
        for (k1, c1) in a.terms() {
            for (k2, c2) in b.terms() {
                let c = c1.mul(c2);
                for (k, v) in self.key_product(k1, k2).terms() {
                    out.add_term(k.clone(), &v.mul(&c));
                }
            }
        }
        out
    }

    pub fn commutator(&self, a: &PBWElement, b: &PBWElement) -> PBWElement {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    pub fn pow(&self, a: &PBWElement, n: u32) -> PBWElement {
        (0..n).fold(PBWElement::one(), |acc, _| self.mul(&acc, a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Param;
    use crate::reflgroup::GroupKind;

    fn alg(key: &str) -> CherednikAlgebra {
        CherednikAlgebra::formal(Arc::new(ReflectionGroup::build(key.parse().unwrap()).unwrap()))
    }

    fn reflection(a: &CherednikAlgebra) -> usize {
        a.group().reflections()[0].element
    }

    #[test]
    fn z2_single_rewrite() {
        let a = alg("Z2");
        let s = reflection(&a);
        let yx = a.mul(&PBWElement::y(0), &PBWElement::x(0));
        let expected = PBWElement::term(PbwKey::new(Monomial::var(0), 0, Monomial::var(0)), ParamScalar::one())
            .add(&PBWElement::scalar(ParamScalar::t()))
            .add(&PBWElement::group(s).scale(&ParamScalar::c(0).mul(&ParamScalar::from_int(-2))));
        assert_eq!(yx, expected);
    }

    #[test]
    fn z2_reflection_terms_cancel_in_y_squared_x() {
        let a = alg("Z2");
        let y2x = a.mul(&a.pow(&PBWElement::y(0), 2), &PBWElement::x(0));
        let expected = PBWElement::term(PbwKey::new(Monomial::var(0), 0, Monomial::var_pow(0, 2)), ParamScalar::one())
            .add(&PBWElement::y(0).scale(&ParamScalar::t().mul(&ParamScalar::from_int(2))));
        assert_eq!(y2x, expected);
    }

    #[test]
    fn group_moves_past_x() {
        let a = alg("S3");
        for g in 0..a.group().order() {
            for i in 0..3 {
                let gx = a.mul(&PBWElement::group(g), &PBWElement::x(i));
                let mut expected = PBWElement::zero();
                for (m, c) in a.group().x_image(g, i).terms() {
                    expected.add_term(PbwKey::new(m.clone(), g, Monomial::one()), &lift(c));
                }
                assert_eq!(gx, expected);
            }
        }
    }

    #[test]
    fn euler_z2_shape() {
        let a = alg("Z2");
        let s = reflection(&a);
        let h = a.euler_element();
        let expected = PBWElement::term(PbwKey::new(Monomial::var(0), 0, Monomial::var(0)), ParamScalar::one())
            .add(&PBWElement::scalar(ParamScalar::t().mul(&ParamScalar::rational(1, 2))))
            .sub(&PBWElement::group(s).scale(&ParamScalar::c(0)));
        assert_eq!(h, expected);
    }

    #[test]
    fn idempotent_squares_to_itself() {
        for key in ["Z3", "S3", "B2"] {
            let a = alg(key);
            let e = a.idempotent();
            assert_eq!(a.mul(&e, &e), e);
        }
    }

    #[test]
    fn weyl_algebra_when_trivial() {
        let a = CherednikAlgebra::formal(Arc::new(ReflectionGroup::build(GroupKind::Trivial(1)).unwrap()));
        let c = a.commutator(&PBWElement::y(0), &PBWElement::x(0).add(&PBWElement::x(0)));
        assert_eq!(c, PBWElement::scalar(ParamScalar::t().mul(&ParamScalar::from_int(2))));
    }

    #[test]
    fn specialization_and_text() {
        let a = alg("Z2");
        let yx = a.mul(&PBWElement::y(0), &PBWElement::x(0));
        let at_zero = yx.specialize(&[(Param::C(0), ParamScalar::zero())]).unwrap();
        assert_eq!(at_zero.to_canonical_string(), "(t) + x1*y1");
    }
}
