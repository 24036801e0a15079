//! The faithful representation ρ on ℂ[𝔥]: x acts by multiplication, G by
//! its linear action, y by Dunkl operators.

use std::cell::RefCell;
use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use super::{CherednikAlgebra, PBWElement, PbwKey};
use crate::dunkl::DunklOperators;
use crate::error::Result;
use crate::exactalg::{Monomial, MultiPoly, ParamScalar, Poly, Scalar};

/// Algebra generators, used to spell unnormalized words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Generator {
    X(usize),
    Y(usize),
    G(usize),
}

impl Generator {
    pub fn element(self) -> PBWElement {
        match self {
            Generator::X(i) => PBWElement::x(i),
            Generator::Y(i) => PBWElement::y(i),
            Generator::G(g) => PBWElement::group(g),
        }
    }
}

/// Normal form of a word g_1 g_2 ⋯ g_k.
pub fn word_element(alg: &CherednikAlgebra, word: &[Generator]) -> PBWElement {
    word.iter().fold(PBWElement::one(), |acc, g| alg.mul(&acc, &g.element()))
}

/// Uniform random word of length ≤ `max_len` in x_i, y_i and the group
/// generators.
pub fn random_word<R: Rng>(rng: &mut R, alg: &CherednikAlgebra, max_len: usize) -> Vec<Generator> {
    let dim = alg.dim();
    let mut alphabet: Vec<Generator> = (0..dim).flat_map(|i| [Generator::X(i), Generator::Y(i)]).collect();
    alphabet.extend(alg.group().generators().iter().map(|&g| Generator::G(g)));
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
}

pub struct PolynomialRep<'a> {
    alg: &'a CherednikAlgebra,
    ops: DunklOperators<'a>,
    dunkl_cache: RefCell<HashMap<(usize, Monomial), MultiPoly>>,
}

impl<'a> PolynomialRep<'a> {
    pub fn new(alg: &'a CherednikAlgebra) -> Self {
        PolynomialRep {
            alg,
            ops: DunklOperators::new(alg.group(), alg.params().clone()),
            dunkl_cache: RefCell::default(),
        }
    }

    pub fn operators(&self) -> &DunklOperators<'a> {
        &self.ops
    }

    /// D_{y_i} p, memoized per monomial.
    pub fn dunkl(&self, i: usize, p: &MultiPoly) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero();
        for (m, c) in p.terms() {
            let key = (i, m.clone());
            let cached = self.dunkl_cache.borrow().get(&key).cloned();
            let image = match cached {
                Some(v) => v,
                None => {
                    let v = self.ops.apply_basis(i, &Poly::term(m.clone(), ParamScalar::one()))?;
                    self.dunkl_cache.borrow_mut().insert(key, v.clone());
                    v
                }
            };
            out.add_assign(&image.scale(c));
        }
        Ok(out)
    }

    /// ρ(x^a g y^b) p = x^a · g·(D^b p).
    pub fn act_key(&self, key: &PbwKey, p: &MultiPoly) -> Result<MultiPoly> {
        let mut q = p.clone();
        for (i, &e) in key.y.exps().iter().enumerate() {
            for _ in 0..e {
                q = self.dunkl(i, &q)?;
            }
        }
        Ok(self.alg.group().act_poly(key.g, &q).mul_monomial(&key.x))
    }

    pub fn act(&self, a: &PBWElement, p: &MultiPoly) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero();
        for (k, c) in a.terms() {
            out.add_assign(&self.act_key(k, p)?.scale(c));
        }
        Ok(out)
    }

    pub fn act_generator(&self, g: Generator, p: &MultiPoly) -> Result<MultiPoly> {
        match g {
            Generator::X(i) => Ok(p.mul_monomial(&Monomial::var(i))),
            Generator::Y(i) => self.dunkl(i, p),
            Generator::G(g) => Ok(self.alg.group().act_poly(g, p)),
        }
    }

    /// Applies the word letter by letter, rightmost first.
    pub fn act_word(&self, word: &[Generator], p: &MultiPoly) -> Result<MultiPoly> {
        word.iter().rev().try_fold(p.clone(), |q, &g| self.act_generator(g, &q))
    }
}

/// ρ(word) p computed letter by letter equals ρ(normal form of word) p.
pub fn dunkl_consistency(rep: &PolynomialRep<'_>, word: &[Generator], p: &MultiPoly) -> Result<bool> {
    let normal = word_element(rep.alg, word);
    Ok(rep.act_word(word, p)? == rep.act(&normal, p)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct FaithfulnessReport {
    pub group: String,
    pub pairs: usize,
    pub max_word_length: usize,
    pub max_degree: u32,
    pub seed: u64,
    /// First pair (a, b, p) with ρ(ab) p ≠ ρ(a) ρ(b) p.
    pub failure: Option<(String, String, String)>,
}

impl FaithfulnessReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn format_word(word: &[Generator]) -> String {
    if word.is_empty() {
        return "1".into();
    }
    let names: Vec<String> = word
        .iter()
        .map(|g| match g {
            Generator::X(i) => format!("x{}", i + 1),
            Generator::Y(i) => format!("y{}", i + 1),
            Generator::G(g) => format!("g{g}"),
        })
        .collect();
    names.join("*")
}

/// ρ(a·b) p = ρ(a) ρ(b) p for seeded random words a, b of length ≤
/// `max_len` and random monomials p of degree ≤ `max_degree`, where a·b is
/// the product of normal forms.
pub fn faithfulness_check(
    alg: &CherednikAlgebra,
    pairs: usize,
    max_len: usize,
    max_degree: u32,
    seed: u64,
) -> Result<FaithfulnessReport> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let rep = PolynomialRep::new(alg);
    let monomials = Monomial::all_up_to_degree(alg.dim(), max_degree);
    let mut report = FaithfulnessReport {
        group: alg.group().kind.to_string(),
        pairs,
        max_word_length: max_len,
        max_degree,
        seed,
        failure: None,
    };
    for _ in 0..pairs {
        let a = random_word(&mut rng, alg, max_len);
        let b = random_word(&mut rng, alg, max_len);
        let m = &monomials[rng.gen_range(0..monomials.len())];
        let p = Poly::term(m.clone(), ParamScalar::one());
        let (ea, eb) = (word_element(alg, &a), word_element(alg, &b));
        let lhs = rep.act(&alg.mul(&ea, &eb), &p)?;
        let rhs = rep.act(&ea, &rep.act(&eb, &p)?)?;
        if lhs != rhs {
            report.failure = Some((format_word(&a), format_word(&b), p.to_string()));
            break;
        }
    }
    Ok(report)
}
