//! Hecke algebras over ℚ(ζ)[τ]/(τ)^K given by generators, local polynomial
//! relations Π_k (T − e^{2πik/n} e^{τ_k}) = 0 and positive word relations.
//! Ranks are computed from normal forms under a deglex rewriting system.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

use super::{orbifold_generators, orbifold_presentation, product_relator, todd_coxeter, GroupPresentation, OrbifoldSignature};
use crate::error::{Error, Result};
use crate::exactalg::linalg::SparseEchelon;
use crate::exactalg::{Cyclotomic, Scalar, TruncatedSeries};

/// Π_{k=1}^{n} (T_g − e^{2πik/n} e^{τ_{start+k−1}}) = 0, stored as the
/// coefficients of the monic polynomial, lowest degree first.
#[derive(Clone, Debug)]
pub struct LocalRelation {
    pub generator: usize,
    pub order: u32,
    pub tau_start: usize,
    pub coefficients: Vec<TruncatedSeries>,
}

impl LocalRelation {
    pub fn new(generator: usize, order: u32, tau_start: usize, truncation: u32) -> Self {
        let mut poly = vec![TruncatedSeries::one()];
        for k in 1..=order as usize {
            let root = TruncatedSeries::tau(tau_start + k - 1, truncation)
                .exp()
                .expect("τ has no constant term")
                .scale(&Cyclotomic::root_of_unity(order, k as i64));
            // poly ← poly · (T − root)
            let mut next = vec![TruncatedSeries::zero(); poly.len() + 1];
            for (i, a) in poly.iter().enumerate() {
                next[i + 1] = next[i + 1].add(a);
                next[i] = next[i].sub(&a.mul(&root));
            }
            poly = next;
        }
        LocalRelation { generator, order, tau_start, coefficients: poly }
    }

    pub fn at_tau_zero(&self) -> Vec<Cyclotomic> {
        self.coefficients.iter().map(TruncatedSeries::at_zero).collect()
    }

    /// The τ = 0 relation is T^n − 1.
    pub fn is_unipotent_at_zero(&self) -> bool {
        let n = self.order as usize;
        self.at_tau_zero().iter().enumerate().all(|(i, c)| {
            let expected = match i {
                0 => Cyclotomic::from_int(-1),
                i if i == n => Cyclotomic::one(),
                _ => Cyclotomic::zero(),
            };
            *c == expected
        })
    }
}

/// Presentation of a Hecke algebra together with the group-level data it
/// deforms.
#[derive(Clone, Debug)]
pub struct HeckeAlgebraPresentation {
    pub name: String,
    pub generators: Vec<String>,
    /// Group relators other than the local ones.
    pub relators: Vec<Vec<i32>>,
    /// The same relations as equalities of positive words, when they have
    /// that form; required for rank computations.
    pub positive_relations: Option<Vec<(Vec<usize>, Vec<usize>)>>,
    pub local: Vec<LocalRelation>,
    pub truncation: u32,
    pub tau_labels: Vec<String>,
    pub signature: Option<OrbifoldSignature>,
}

impl HeckeAlgebraPresentation {
    /// ⟨T | Π_{j=1}^{n} (T − e^{2πij/n} e^{τ_j})⟩.
    pub fn cyclic(n: u32, truncation: u32) -> Self {
        HeckeAlgebraPresentation {
            name: format!("cyclic({n})"),
            generators: vec!["T".into()],
            relators: Vec::new(),
            positive_relations: Some(Vec::new()),
            local: vec![LocalRelation::new(0, n, 0, truncation)],
            truncation,
            tau_labels: (1..=n).map(|j| format!("tau_{j}")).collect(),
            signature: None,
        }
    }

    /// Braid relation T1 T2 T1 = T2 T1 T2 with the quadratic relation
    /// (T + e^{τ_1})(T − e^{τ_2}) = 0 on both (conjugate) generators.
    pub fn type_a2(truncation: u32) -> Self {
        HeckeAlgebraPresentation {
            name: "A2".into(),
            generators: vec!["T1".into(), "T2".into()],
            relators: vec![vec![1, 2, 1, -2, -1, -2]],
            positive_relations: Some(vec![(vec![0, 1, 0], vec![1, 0, 1])]),
            local: vec![LocalRelation::new(0, 2, 0, truncation), LocalRelation::new(1, 2, 0, truncation)],
            truncation,
            tau_labels: vec!["tau_1".into(), "tau_2".into()],
            signature: None,
        }
    }

    /// Hecke algebra of a 2-orbifold: the orbifold presentation with
    /// c_j^{n_j} = 1 replaced by local relations in τ_{k,j}.
    pub fn from_signature(sig: &OrbifoldSignature, truncation: u32) -> Self {
        let g = sig.genus as usize;
        let mut local = Vec::new();
        let mut start = 0;
        for (j, &n) in sig.orders.iter().enumerate() {
            local.push(LocalRelation::new(2 * g + j, n, start, truncation));
            start += n as usize;
        }
        let positive = (g == 0).then(|| vec![((0..sig.orders.len()).collect(), Vec::new())]);
        HeckeAlgebraPresentation {
            name: sig.to_string(),
            generators: orbifold_generators(sig),
            relators: vec![product_relator(sig)],
            positive_relations: positive,
            local,
            truncation,
            tau_labels: super::tau_labels(sig),
            signature: Some(sig.clone()),
        }
    }

    /// τ = 0 group presentation: local relators T^n followed by the others.
    pub fn group_at_tau_zero(&self) -> GroupPresentation {
        let mut relators: Vec<Vec<i32>> =
            self.local.iter().map(|l| vec![l.generator as i32 + 1; l.order as usize]).collect();
        relators.extend(self.relators.iter().cloned());
        GroupPresentation::new(self.generators.clone(), relators)
    }

    fn format_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&i| self.generators[i].clone()).collect::<Vec<_>>().join("*")
    }
}

/// Word ordered by length, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Word(Vec<usize>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

type NcPoly = BTreeMap<Word, TruncatedSeries>;

fn add_term(p: &mut NcPoly, w: Word, c: &TruncatedSeries) {
    let e = p.entry(w.clone()).or_insert_with(TruncatedSeries::zero);
    *e = e.add(c);
    if e.is_zero() {
        p.remove(&w);
    }
}

#[derive(Clone, Debug)]
struct Rule {
    lhs: Vec<usize>,
    rhs: NcPoly,
}

fn find(hay: &[usize], needle: &[usize]) -> Option<usize> {
    if needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| hay[i..i + needle.len()] == *needle)
}

struct Rewriter {
    rules: Vec<Rule>,
}

impl Rewriter {
    fn new(h: &HeckeAlgebraPresentation) -> Result<Self> {
        let positive = h
            .positive_relations
            .as_ref()
            .ok_or_else(|| Error::Precondition(format!("{} has no positive-word presentation", h.name)))?;
        let mut rules = Vec::new();
        for l in &h.local {
            let n = l.order as usize;
            let mut rhs = NcPoly::new();
            for (i, a) in l.coefficients.iter().take(n).enumerate() {
                add_term(&mut rhs, Word(vec![l.generator; i]), &a.neg());
            }
            rules.push(Rule { lhs: vec![l.generator; n], rhs });
        }
        for (u, v) in positive {
            let (big, small) = match Word(u.clone()).cmp(&Word(v.clone())) {
                Ordering::Greater => (u, v),
                Ordering::Less => (v, u),
                Ordering::Equal => continue,
            };
            let mut rhs = NcPoly::new();
            add_term(&mut rhs, Word(small.clone()), &TruncatedSeries::one());
            rules.push(Rule { lhs: big.clone(), rhs });
        }
        Ok(Rewriter { rules })
    }

    fn is_reducible(&self, w: &[usize]) -> bool {
        self.rules.iter().any(|r| find(w, &r.lhs).is_some())
    }

    fn normal_form(&self, mut p: NcPoly) -> NcPoly {
        loop {
            let hit = p.iter().rev().find_map(|(w, c)| {
                self.rules.iter().find_map(|r| find(&w.0, &r.lhs).map(|pos| (w.clone(), c.clone(), r, pos)))
            });
            let Some((w, c, rule, pos)) = hit else { return p };
            p.remove(&w);
            let (pre, post) = (&w.0[..pos], &w.0[pos + rule.lhs.len()..]);
            for (rw, rc) in &rule.rhs {
                let mut nw = pre.to_vec();
                nw.extend_from_slice(&rw.0);
                nw.extend_from_slice(post);
                add_term(&mut p, Word(nw), &c.mul(rc));
            }
        }
    }

    fn word(&self, w: Vec<usize>) -> NcPoly {
        let mut p = NcPoly::new();
        add_term(&mut p, Word(w), &TruncatedSeries::one());
        p
    }

    /// Replaces the occurrence of `rule.lhs` at `pos` in `w` by its right side.
    fn apply_at(&self, w: &[usize], rule: &Rule, pos: usize) -> NcPoly {
        let mut p = NcPoly::new();
        for (rw, rc) in &rule.rhs {
            let mut nw = w[..pos].to_vec();
            nw.extend_from_slice(&rw.0);
            nw.extend_from_slice(&w[pos + rule.lhs.len()..]);
            add_term(&mut p, Word(nw), rc);
        }
        p
    }

    /// All overlap and inclusion ambiguities resolve. Returns the first
    /// unresolved ambiguity word otherwise.
    fn check_confluence(&self) -> std::result::Result<(), Vec<usize>> {
        for (a, r1) in self.rules.iter().enumerate() {
            for (b, r2) in self.rules.iter().enumerate() {
                // suffix of r1.lhs = prefix of r2.lhs
                let max = r1.lhs.len().min(r2.lhs.len());
                for k in 1..max {
                    if r1.lhs[r1.lhs.len() - k..] != r2.lhs[..k] {
                        continue;
                    }
                    let mut w = r1.lhs.clone();
                    w.extend_from_slice(&r2.lhs[k..]);
                    let left = self.normal_form(self.apply_at(&w, r1, 0));
                    let right = self.normal_form(self.apply_at(&w, r2, r1.lhs.len() - k));
                    if left != right {
                        return Err(w);
                    }
                }
                if a != b {
                    if let Some(pos) = find(&r1.lhs, &r2.lhs) {
                        let w = r1.lhs.clone();
                        let left = self.normal_form(self.apply_at(&w, r1, 0));
                        let right = self.normal_form(self.apply_at(&w, r2, pos));
                        if left != right {
                            return Err(w);
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn words_up_to(ngens: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..len {
        level = level
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..ngens).map(move |g| {
                    let mut v = w.clone();
                    v.push(g);
                    v
                })
            })
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeckeDimensionReport {
    pub name: String,
    pub truncation: u32,
    pub cap: usize,
    pub rank_at_cap: usize,
    pub rank_at_cap_plus_one: usize,
    pub confluent: bool,
    /// First ambiguity that failed to resolve, if any.
    pub unresolved: Option<String>,
    /// Irreducible words of length ≤ cap.
    pub normal_words: Vec<String>,
    /// Order of the τ = 0 group when coset enumeration closes.
    pub group_algebra_dim: Option<usize>,
    pub status: Status,
}

impl HeckeDimensionReport {
    pub fn rank(&self) -> usize {
        self.rank_at_cap
    }
}

/// Rank over ℚ(ζ)[τ]/(τ)^K of the span of words of length ≤ cap, with a
/// stabilization check at cap + 1 and comparison to the τ = 0 group order.
pub fn hecke_dimension(h: &HeckeAlgebraPresentation, cap: usize, max_cosets: usize) -> Result<HeckeDimensionReport> {
    let rw = Rewriter::new(h)?;
    let unresolved = rw.check_confluence().err();
    let ngens = h.generators.len();
    let rank_at = |len: usize| {
        let mut ech: SparseEchelon<Word, TruncatedSeries> = SparseEchelon::new();
        for w in words_up_to(ngens, len) {
            ech.insert(rw.normal_form(rw.word(w)));
        }
        ech.rank()
    };
    let (r0, r1) = (rank_at(cap), rank_at(cap + 1));
    let normal_words: Vec<String> =
        words_up_to(ngens, cap).into_iter().filter(|w| !rw.is_reducible(w)).map(|w| h.format_word(&w)).collect();
    let group_algebra_dim = todd_coxeter(&h.group_at_tau_zero(), max_cosets).ok().map(|r| r.degree);
    let confluent = unresolved.is_none();
    let status = if !confluent || r0 != r1 {
        Status::Inconclusive
    } else if group_algebra_dim == Some(r0) {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(HeckeDimensionReport {
        name: h.name.clone(),
        truncation: h.truncation,
        cap,
        rank_at_cap: r0,
        rank_at_cap_plus_one: r1,
        confluent,
        unresolved: unresolved.map(|w| h.format_word(&w)),
        normal_words,
        group_algebra_dim,
        status,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecializationReport {
    pub name: String,
    /// Every local relation becomes T^n − 1 at τ = 0.
    pub local_relations_unipotent: bool,
    pub presentation: String,
    /// Agreement with the orbifold presentation, for orbifold Hecke algebras.
    pub matches_orbifold: Option<bool>,
    pub group_order: Option<usize>,
}

pub fn specialize_tau_zero(h: &HeckeAlgebraPresentation, max_cosets: usize) -> SpecializationReport {
    let pres = h.group_at_tau_zero();
    SpecializationReport {
        name: h.name.clone(),
        local_relations_unipotent: h.local.iter().all(LocalRelation::is_unipotent_at_zero),
        presentation: pres.to_string(),
        matches_orbifold: h.signature.as_ref().map(|s| orbifold_presentation(s) == pres),
        group_order: todd_coxeter(&pres, max_cosets).ok().map(|r| r.degree),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_rank() {
        for n in 2..7 {
            let r = hecke_dimension(&HeckeAlgebraPresentation::cyclic(n, 2), n as usize, 1000).unwrap();
            assert_eq!(r.rank(), n as usize);
            assert_eq!(r.status, Status::Pass);
        }
        let r = hecke_dimension(&HeckeAlgebraPresentation::cyclic(4, 2), 4, 1000).unwrap();
        assert_eq!(r.normal_words, vec!["1", "T", "T*T", "T*T*T"]);
    }

    #[test]
    fn a2_rank_six() {
        let r = hecke_dimension(&HeckeAlgebraPresentation::type_a2(2), 4, 1000).unwrap();
        assert!(r.confluent, "{r:?}");
        assert_eq!(r.rank(), 6);
        assert_eq!(r.group_algebra_dim, Some(6));
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.normal_words, vec!["1", "T1", "T2", "T1*T2", "T2*T1", "T1*T2*T1"]);
    }

    #[test]
    fn tau_zero_specializations() {
        let c3 = specialize_tau_zero(&HeckeAlgebraPresentation::cyclic(3, 2), 100);
        assert!(c3.local_relations_unipotent);
        assert_eq!(c3.group_order, Some(3));
        let sig: OrbifoldSignature = "g=0;2,3,3".parse().unwrap();
        let s = specialize_tau_zero(&HeckeAlgebraPresentation::from_signature(&sig, 2), 1000);
        assert_eq!(s.matches_orbifold, Some(true));
        assert_eq!(s.group_order, Some(12));
        let torus: OrbifoldSignature = "g=1".parse().unwrap();
        let t = specialize_tau_zero(&HeckeAlgebraPresentation::from_signature(&torus, 2), 200);
        assert!(t.local_relations_unipotent);
        assert_eq!(t.matches_orbifold, Some(true));
        assert_eq!(t.group_order, None);
    }
}
