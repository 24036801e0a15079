//! Degree-truncated structure checks: PBW dimension count, Euler element,
//! center at t = 0 and the map z ↦ z·e.

use std::collections::BTreeMap;

use num_integer::binomial;
use serde::Serialize;

use super::{CherednikAlgebra, PBWElement, PbwKey};
use crate::error::{Error, Result};
use crate::exactalg::linalg::{nullspace, Insert, SparseEchelon};
use crate::exactalg::{Monomial, ParamScalar, Scalar};

#[derive(Clone, Debug, Serialize)]
pub struct PbwDimensionReport {
    pub group: String,
    pub degree: u32,
    pub words: usize,
    pub rank: usize,
    /// |G| · dim ℂ[𝔥 ⊕ 𝔥*]_{≤d}
    pub expected: usize,
}

impl PbwDimensionReport {
    pub fn passed(&self) -> bool {
        self.rank == self.expected
    }
}

/// Rank of the span of all words of length ≤ d in x_i, y_i, each followed
/// by a group element, computed from their normal forms.
pub fn pbw_dimension(alg: &CherednikAlgebra, d: u32) -> PbwDimensionReport {
    let dim = alg.dim();
    let order = alg.group().order();
    let letters: Vec<PBWElement> = (0..dim).flat_map(|i| [PBWElement::x(i), PBWElement::y(i)]).collect();
    let group_elems: Vec<PBWElement> = (0..order).map(PBWElement::group).collect();
    let mut echelon: SparseEchelon<PbwKey, ParamScalar> = SparseEchelon::new();
    let mut level = vec![PBWElement::one()];
    let mut words = 0;
    for len in 0..=d {
        if len > 0 {
            level = level.iter().flat_map(|w| letters.iter().map(move |u| (w, u))).map(|(w, u)| alg.mul(w, u)).collect();
        }
        for w in &level {
            for g in &group_elems {
                words += 1;
                let v = alg.mul(w, g);
                let r = echelon.insert(v.as_map().clone());
                debug_assert_ne!(r, Insert::NonUnitPivot);
            }
        }
    }
    PbwDimensionReport {
        group: alg.group().kind.to_string(),
        degree: d,
        words,
        rank: echelon.rank(),
        expected: order * binomial(2 * dim + d as usize, d as usize),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EulerReport {
    pub group: String,
    pub euler_element: String,
    /// (relation, holds)
    pub relations: Vec<(String, bool)>,
}

impl EulerReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|(_, ok)| *ok)
    }
}

/// Checks [h, x_i] = t x_i, [h, y_i] = −t y_i and [h, g] = 0.
pub fn euler_check(alg: &CherednikAlgebra) -> EulerReport {
    let h = alg.euler_element();
    let t = alg.params().t.clone();
    let mut relations = Vec::new();
    for i in 0..alg.dim() {
        let x = PBWElement::x(i);
        let y = PBWElement::y(i);
        relations.push((format!("[h,x{}] = t*x{}", i + 1, i + 1), alg.commutator(&h, &x) == x.scale(&t)));
        relations.push((format!("[h,y{}] = -t*y{}", i + 1, i + 1), alg.commutator(&h, &y) == y.scale(&t.neg())));
    }
    for &g in alg.group().generators() {
        relations.push((format!("[h,g{g}] = 0"), alg.commutator(&h, &PBWElement::group(g)).is_zero()));
    }
    EulerReport { group: alg.group().kind.to_string(), euler_element: h.to_string(), relations }
}

fn require_t_zero(alg: &CherednikAlgebra) -> Result<()> {
    if alg.params().t.is_zero() {
        Ok(())
    } else {
        Err(Error::Precondition("center computation needs t = 0".into()))
    }
}

/// All basis vectors x^a g y^b with |a| + |b| ≤ d.
pub fn keys_up_to_degree(dim: usize, order: usize, d: u32) -> Vec<PbwKey> {
    let mut keys = Vec::new();
    for total in 0..=d {
        for dx in 0..=total {
            for a in Monomial::all_of_degree(dim, dx) {
                for b in Monomial::all_of_degree(dim, total - dx) {
                    for g in 0..order {
                        keys.push(PbwKey::new(a.clone(), g, b.clone()));
                    }
                }
            }
        }
    }
    keys
}

/// Basis of the elements of filtration degree ≤ d commuting with every x_i,
/// y_i and group generator, at t = 0.
pub fn center_basis_t0(alg: &CherednikAlgebra, d: u32) -> Result<Vec<PBWElement>> {
    require_t_zero(alg)?;
    let unknowns = keys_up_to_degree(alg.dim(), alg.group().order(), d);
    let mut gens: Vec<PBWElement> = (0..alg.dim()).flat_map(|i| [PBWElement::x(i), PBWElement::y(i)]).collect();
    gens.extend(alg.group().generators().iter().map(|&g| PBWElement::group(g)));

    // row index per (generator, output key)
    let mut row_of: BTreeMap<(usize, PbwKey), usize> = BTreeMap::new();
    let mut columns: Vec<Vec<(usize, ParamScalar)>> = Vec::with_capacity(unknowns.len());
    for k in &unknowns {
        let z = PBWElement::term(k.clone(), ParamScalar::one());
        let mut col = Vec::new();
        for (gi, u) in gens.iter().enumerate() {
            for (out_key, c) in alg.commutator(&z, u).terms() {
                let next = row_of.len();
                let r = *row_of.entry((gi, out_key.clone())).or_insert(next);
                col.push((r, c.clone()));
            }
        }
        columns.push(col);
    }
    let mut rows = vec![vec![ParamScalar::zero(); unknowns.len()]; row_of.len()];
    for (j, col) in columns.into_iter().enumerate() {
        for (r, c) in col {
            rows[r][j] = c;
        }
    }
    let basis = nullspace(rows, unknowns.len());
    Ok(basis
        .into_iter()
        .map(|v| {
            let mut z = PBWElement::zero();
            for (k, c) in unknowns.iter().zip(v) {
                z.add_term(k.clone(), &c);
            }
            z
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct SatakeReport {
    pub group: String,
    pub degree: u32,
    pub center_dim: usize,
    /// rank of {z·e}
    pub image_rank: usize,
    /// dim e·F_d·e
    pub spherical_dim: usize,
    pub image_in_spherical: bool,
    pub idempotent: bool,
    /// e·F_d·e is commutative (pairwise products of its spanning set).
    pub spherical_commutative: bool,
}

impl SatakeReport {
    pub fn passed(&self) -> bool {
        self.image_rank == self.center_dim
            && self.image_rank == self.spherical_dim
            && self.image_in_spherical
            && self.idempotent
            && self.spherical_commutative
    }
}

/// z ↦ z·e from the degree-≤d center onto e·F_d·e at t = 0.
pub fn satake_check_t0(alg: &CherednikAlgebra, d: u32) -> Result<SatakeReport> {
    let center = center_basis_t0(alg, d)?;
    let e = alg.idempotent();

    let mut spherical: SparseEchelon<PbwKey, ParamScalar> = SparseEchelon::new();
    let mut spanning = Vec::new();
    for k in keys_up_to_degree(alg.dim(), 1, d) {
        let v = alg.mul(&alg.mul(&e, &PBWElement::term(k, ParamScalar::one())), &e);
        if spherical.insert(v.as_map().clone()) == Insert::Independent {
            spanning.push(v);
        }
    }

    let mut image: SparseEchelon<PbwKey, ParamScalar> = SparseEchelon::new();
    let mut image_in_spherical = true;
    for z in &center {
        let ze = alg.mul(z, &e);
        image_in_spherical &= spherical.contains(ze.as_map().clone());
        image.insert(ze.as_map().clone());
    }

    let mut commutative = true;
    'outer: for (i, a) in spanning.iter().enumerate() {
        for b in &spanning[i + 1..] {
            if !alg.commutator(a, b).is_zero() {
                commutative = false;
                break 'outer;
            }
        }
    }

    Ok(SatakeReport {
        group: alg.group().kind.to_string(),
        degree: d,
        center_dim: center.len(),
        image_rank: image.rank(),
        spherical_dim: spherical.rank(),
        image_in_spherical,
        idempotent: alg.mul(&e, &e) == e,
        spherical_commutative: commutative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reflgroup::ReflectionGroup;
    use std::sync::Arc;

    fn alg_t0(key: &str) -> CherednikAlgebra {
        CherednikAlgebra::with_t(Arc::new(ReflectionGroup::build(key.parse().unwrap()).unwrap()), ParamScalar::zero())
    }

    #[test]
    fn pbw_small_cases() {
        let a = CherednikAlgebra::formal(Arc::new(ReflectionGroup::build("Z2".parse().unwrap()).unwrap()));
        let r = pbw_dimension(&a, 2);
        assert_eq!((r.rank, r.expected), (12, 12));
        let w = CherednikAlgebra::formal(Arc::new(ReflectionGroup::build("trivial".parse().unwrap()).unwrap()));
        for d in 0..4 {
            assert_eq!(pbw_dimension(&w, d).rank, ((d + 1) * (d + 2) / 2) as usize);
        }
    }

    #[test]
    fn euler_relations_z2_and_trivial() {
        for key in ["Z2", "trivial"] {
            let a = CherednikAlgebra::formal(Arc::new(ReflectionGroup::build(key.parse().unwrap()).unwrap()));
            assert!(euler_check(&a).passed());
        }
    }

    #[test]
    fn z2_center_low_degree() {
        let a = alg_t0("Z2");
        assert_eq!(center_basis_t0(&a, 1).unwrap().len(), 1);
        // 1, x², xy + yx, y²
        let basis = center_basis_t0(&a, 2).unwrap();
        assert_eq!(basis.len(), 4);
        let xy_plus_yx = a.mul(&PBWElement::x(0), &PBWElement::y(0)).add(&a.mul(&PBWElement::y(0), &PBWElement::x(0)));
        let mut ech: SparseEchelon<PbwKey, ParamScalar> = SparseEchelon::new();
        for z in &basis {
            ech.insert(z.as_map().clone());
        }
        assert!(ech.contains(xy_plus_yx.as_map().clone()));
        assert!(ech.contains(a.pow(&PBWElement::x(0), 2).as_map().clone()));
    }

    #[test]
    fn center_needs_t_zero() {
        let a = CherednikAlgebra::formal(Arc::new(ReflectionGroup::build("Z2".parse().unwrap()).unwrap()));
        assert!(matches!(center_basis_t0(&a, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn satake_z2() {
        let r = satake_check_t0(&alg_t0("Z2"), 2).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.center_dim, 4);
    }
}
