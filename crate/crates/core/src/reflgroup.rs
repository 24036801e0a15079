//! Finite complex reflection groups given by explicit matrices over a
//! cyclotomic field, with their reflections, reflection classes and
//! normalized roots and coroots.
//!
//! Conventions: an element `g` with matrix `M` acts on 𝔥 = ℂ^ℓ (the `y`
//! side) by `y ↦ M y`, and on 𝔥* (the `x` side, coordinate functions) by
//! `(g·f)(v) = f(g⁻¹ v)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactalg::linalg;
use crate::exactalg::{Cyclotomic, FieldScalar, ParamScalar, Poly, Scalar};

pub type Matrix = Vec<Vec<Cyclotomic>>;

/// Group families available from the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// The trivial group acting on ℂ^ℓ.
    Trivial(usize),
    /// ℤ/n acting on ℂ by ζ_n.
    Cyclic(u32),
    /// S_n permuting the coordinates of ℂⁿ.
    Symmetric(usize),
    /// I₂(m) = G(m,m,2) on ℂ², rotations diag(ζ_m, ζ_m⁻¹) and the swap.
    Dihedral(u32),
    /// Signed permutations of ℂⁿ.
    TypeB(usize),
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Trivial(1) => write!(f, "trivial"),
            GroupKind::Trivial(l) => write!(f, "trivial({l})"),
            GroupKind::Cyclic(n) => write!(f, "Z{n}"),
            GroupKind::Symmetric(n) => write!(f, "S{n}"),
            GroupKind::Dihedral(m) => write!(f, "I2({m})"),
            GroupKind::TypeB(n) => write!(f, "B{n}"),
        }
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    /// Catalog keys: `Z4`, `S3`, `I2(5)`, `B2`, `trivial`, `trivial(2)`.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim();
        let bad = || Error::UnknownGroup(s.to_string());
        let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
        if key.eq_ignore_ascii_case("trivial") || key == "1" {
            return Ok(GroupKind::Trivial(1));
        }
        if let Some(rest) = key.strip_prefix("trivial(").and_then(|r| r.strip_suffix(')')) {
            return Ok(GroupKind::Trivial(num(rest)? as usize));
        }
        if let Some(rest) = key.strip_prefix("I2(").and_then(|r| r.strip_suffix(')')) {
            return Ok(GroupKind::Dihedral(num(rest)?));
        }
        let (head, tail) = key.split_at(1.min(key.len()));
        let tail = tail.strip_prefix('_').unwrap_or(tail);
        match head {
            "Z" => Ok(GroupKind::Cyclic(num(tail)?)),
            "S" => Ok(GroupKind::Symmetric(num(tail)? as usize)),
            "B" => Ok(GroupKind::TypeB(num(tail)? as usize)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroupElement {
    pub matrix: Matrix,
    pub order: u32,
}

/// A complex reflection `s` with its normalized root data.
#[derive(Clone, Debug)]
pub struct Reflection {
    /// Index of `s` in [`ReflectionGroup::elements`].
    pub element: usize,
    /// Label κ of the conjugacy class of `s`.
    pub class: usize,
    /// Nontrivial eigenvalue λ_s of `s` on 𝔥*.
    pub eigenvalue: Cyclotomic,
    /// α_s ∈ 𝔥* as coefficients on x_1..x_ℓ.
    pub root: Vec<Cyclotomic>,
    /// α_s^∨ ∈ 𝔥 as coefficients on y_1..y_ℓ, scaled so ⟨α_s, α_s^∨⟩ = 2.
    pub coroot: Vec<Cyclotomic>,
}

/// A conjugacy class of reflections.
#[derive(Clone, Debug)]
pub struct ReflectionClass {
    pub label: usize,
    pub representative: usize,
    pub members: Vec<usize>,
    pub eigenvalue: Cyclotomic,
    pub root: Vec<Cyclotomic>,
    pub coroot: Vec<Cyclotomic>,
}

#[derive(Clone, Debug)]
pub struct ReflectionGroup {
    pub kind: GroupKind,
    dim: usize,
    elements: Vec<GroupElement>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    generators: Vec<usize>,
    conjugacy_classes: Vec<Vec<usize>>,
    reflections: Vec<Reflection>,
    classes: Vec<ReflectionClass>,
    /// `x_images[g][i]` is g·x_i as a linear form.
    x_images: Vec<Vec<Poly<Cyclotomic>>>,
    /// `y_images[g][i]` is g·y_i as a linear form.
    y_images: Vec<Vec<Poly<Cyclotomic>>>,
}

const MAX_ORDER: usize = 5000;

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Cyclotomic::one() } else { Cyclotomic::zero() }).collect())
        .collect()
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Cyclotomic::zero();
                    for (k, aik) in a[i].iter().enumerate() {
                        if !aik.is_zero() && !b[k][j].is_zero() {
                            acc.add_assign(&aik.mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

impl ReflectionGroup {
    pub fn build(kind: GroupKind) -> Result<Self> {
        let (dim, gens) = match kind {
            GroupKind::Trivial(l) => {
                if l == 0 {
                    return Err(Error::UnsupportedGroup("rank 0".into()));
                }
                (l, Vec::new())
            }
            GroupKind::Cyclic(n) => {
                if n < 2 {
                    return Err(Error::UnsupportedGroup(format!("cyclic({n}) needs n ≥ 2")));
                }
                (1, vec![vec![vec![Cyclotomic::root_of_unity(n, 1)]]])
            }
            GroupKind::Symmetric(n) => {
                if !(2..=6).contains(&n) {
                    return Err(Error::UnsupportedGroup(format!("symmetric({n}) needs 2 ≤ n ≤ 6")));
                }
                let gens = (0..n - 1).map(|i| permutation_matrix(n, &swap(n, i, i + 1), &vec![1; n])).collect();
                (n, gens)
            }
            GroupKind::Dihedral(m) => {
                if m < 2 {
                    return Err(Error::UnsupportedGroup(format!("dihedral({m}) needs m ≥ 2")));
                }
                let z = Cyclotomic::root_of_unity(m, 1);
                let zi = Cyclotomic::root_of_unity(m, -1);
                let rot = vec![vec![z, Cyclotomic::zero()], vec![Cyclotomic::zero(), zi]];
                let flip = vec![vec![Cyclotomic::zero(), Cyclotomic::one()], vec![Cyclotomic::one(), Cyclotomic::zero()]];
                (2, vec![rot, flip])
            }
            GroupKind::TypeB(n) => {
                if !(2..=4).contains(&n) {
                    return Err(Error::UnsupportedGroup(format!("typeB({n}) needs 2 ≤ n ≤ 4")));
                }
                let mut gens: Vec<Matrix> =
                    (0..n - 1).map(|i| permutation_matrix(n, &swap(n, i, i + 1), &vec![1; n])).collect();
                let mut signs = vec![1; n];
                signs[n - 1] = -1;
                gens.push(permutation_matrix(n, &(0..n).collect::<Vec<_>>(), &signs));
                (n, gens)
            }
        };
        Self::from_generators(kind, dim, gens)
    }

    fn from_generators(kind: GroupKind, dim: usize, gens: Vec<Matrix>) -> Result<Self> {
        // entries of every product live in ℚ(ζ_N) for N the lcm of the
        // generators' conductors, where coefficient vectors are canonical
        let conductor = gens
            .iter()
            .flatten()
            .flatten()
            .fold(1u32, |acc, c| num_integer::Integer::lcm(&acc, &c.conductor()));
        let key = |m: &Matrix| -> Vec<Vec<Vec<BigRational>>> {
            m.iter()
                .map(|row| row.iter().map(|c| c.coeffs_at(conductor)).collect())
                .collect()
        };
        let mut elements: Vec<Matrix> = vec![identity(dim)];
        let mut index: HashMap<_, usize> = HashMap::new();
        index.insert(key(&elements[0]), 0);
        let mut generators = Vec::new();
        for g in &gens {
            let k = key(g);
            let idx = match index.get(&k) {
                Some(&i) => i,
                None => {
                    elements.push(g.clone());
                    index.insert(k, elements.len() - 1);
                    elements.len() - 1
                }
            };
            generators.push(idx);
        }
        // breadth-first closure under right multiplication by generators
        let mut frontier = 0;
        while frontier < elements.len() {
            for g in &gens {
                let prod = mat_mul(&elements[frontier], g);
                let k = key(&prod);
                if let std::collections::hash_map::Entry::Vacant(e) = index.entry(k) {
                    elements.push(prod);
                    e.insert(elements.len() - 1);
                    if elements.len() > MAX_ORDER {
                        return Err(Error::UnsupportedGroup(format!("{kind} exceeds {MAX_ORDER} elements")));
                    }
                }
            }
            frontier += 1;
        }
        let n = elements.len();
        let table: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| index[&key(&mat_mul(&elements[i], &elements[j]))]).collect())
            .collect();
        let inverse: Vec<usize> = (0..n).map(|i| (0..n).find(|&j| table[i][j] == 0).expect("finite group")).collect();
        let orders: Vec<u32> = (0..n)
            .map(|i| {
                let mut k = 1;
                let mut p = i;
                while p != 0 {
                    p = table[p][i];
                    k += 1;
                }
                k
            })
            .collect();
        let elements: Vec<GroupElement> =
            elements.into_iter().zip(orders).map(|(matrix, order)| GroupElement { matrix, order }).collect();

        let mut class_of = vec![usize::MAX; n];
        let mut conjugacy_classes: Vec<Vec<usize>> = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..n).map(|h| table[table[h][g]][inverse[h]]).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = conjugacy_classes.len();
            }
            conjugacy_classes.push(members);
        }

        let x_images: Vec<Vec<Poly<Cyclotomic>>> = (0..n)
            .map(|g| {
                let inv = &elements[inverse[g]].matrix;
                (0..dim).map(|i| linear_form(&inv[i])).collect()
            })
            .collect();
        let y_images: Vec<Vec<Poly<Cyclotomic>>> = (0..n)
            .map(|g| {
                let m = &elements[g].matrix;
                (0..dim).map(|i| linear_form(&(0..dim).map(|j| m[j][i].clone()).collect::<Vec<_>>())).collect()
            })
            .collect();

        let mut group = ReflectionGroup {
            kind,
            dim,
            elements,
            table,
            inverse,
            generators,
            conjugacy_classes,
            reflections: Vec::new(),
            classes: Vec::new(),
            x_images,
            y_images,
        };
        group.detect_reflections(&class_of)?;
        Ok(group)
    }

    fn detect_reflections(&mut self, class_of: &[usize]) -> Result<()> {
        let dim = self.dim;
        let mut label_of_class: HashMap<usize, usize> = HashMap::new();
        let mut found = Vec::new();
        for (g, element) in self.elements.iter().enumerate().skip(1) {
            let m = &element.matrix;
            let diff: Matrix = (0..dim)
                .map(|i| (0..dim).map(|j| if i == j { m[i][j].sub(&Cyclotomic::one()) } else { m[i][j].clone() }).collect())
                .collect();
            if linalg::rank(diff.clone(), dim) != 1 {
                continue;
            }
            let row = diff.iter().find(|row| row.iter().any(|c| !c.is_zero())).unwrap();
            let lead = row.iter().find(|c| !c.is_zero()).unwrap().inv().unwrap();
            let root: Vec<Cyclotomic> = row.iter().map(|c| c.mul(&lead)).collect();
            let column = (0..dim)
                .map(|j| (0..dim).map(|i| diff[i][j].clone()).collect::<Vec<_>>())
                .find(|col| col.iter().any(|c| !c.is_zero()))
                .unwrap();
            let pairing = dot(&root, &column);
            let scale = Cyclotomic::from_int(2).div(&pairing).ok_or(Error::NonDiagonalizable { element: g })?;
            let coroot: Vec<Cyclotomic> = column.iter().map(|c| c.mul(&scale)).collect();

            // eigenvalue of s on 𝔥*: s·α = λ α
            let image = self.act_x_linear(g, &root);
            let pos = root.iter().position(|c| !c.is_zero()).unwrap();
            let eigenvalue = image[pos].div(&root[pos]).unwrap();
            let proportional = image.iter().zip(&root).all(|(a, b)| *a == b.mul(&eigenvalue));
            // conormal eigenvalue: inverse of the nontrivial eigenvalue on 𝔥
            let trace = (0..dim).fold(Cyclotomic::zero(), |acc, i| acc.add(&m[i][i]));
            let normal = trace.sub(&Cyclotomic::from_int(dim as i64 - 1));
            let conormal = normal.inv().ok_or(Error::NonDiagonalizable { element: g })?;
            if !proportional || conormal != eigenvalue || eigenvalue.is_one() {
                return Err(Error::NonDiagonalizable { element: g });
            }
            let next = label_of_class.len();
            let class = *label_of_class.entry(class_of[g]).or_insert(next);
            found.push(Reflection { element: g, class, eigenvalue, root, coroot });
        }
        self.reflections.extend(found);
        let mut classes: Vec<ReflectionClass> = Vec::new();
        for r in &self.reflections {
            match classes.get_mut(r.class) {
                Some(c) => c.members.push(r.element),
                None => classes.push(ReflectionClass {
                    label: r.class,
                    representative: r.element,
                    members: vec![r.element],
                    eigenvalue: r.eigenvalue.clone(),
                    root: r.root.clone(),
                    coroot: r.coroot.clone(),
                }),
            }
        }
        self.classes = classes;
        Ok(())
    }

    /// Coefficients of g·α for α = Σ a_i x_i.
    fn act_x_linear(&self, g: usize, a: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let inv = &self.elements[self.inverse[g]].matrix;
        (0..self.dim)
            .map(|j| a.iter().enumerate().fold(Cyclotomic::zero(), |acc, (i, ai)| acc.add(&ai.mul(&inv[i][j]))))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, g: usize) -> &GroupElement {
        &self.elements[g]
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.conjugacy_classes
    }

    pub fn reflections(&self) -> &[Reflection] {
        &self.reflections
    }

    pub fn reflection_classes(&self) -> &[ReflectionClass] {
        &self.classes
    }

    /// Number of independent deformation parameters c: one per conjugacy
    /// class of reflections (𝔥 is a vector space, so there is no
    /// cohomological contribution).
    pub fn param_count(&self) -> usize {
        self.classes.len()
    }

    /// The class label of reflection `g`, if `g` is a reflection.
    pub fn reflection_class_of(&self, g: usize) -> Option<usize> {
        self.reflections.iter().find(|r| r.element == g).map(|r| r.class)
    }

    /// Formal class parameters c_1..c_k.
    pub fn formal_c(&self) -> Vec<ParamScalar> {
        (0..self.param_count()).map(ParamScalar::c).collect()
    }

    /// g·x_i as a linear form in the x's.
    pub fn x_image(&self, g: usize, i: usize) -> &Poly<Cyclotomic> {
        &self.x_images[g][i]
    }

    /// g·y_i as a linear form in the y's.
    pub fn y_image(&self, g: usize, i: usize) -> &Poly<Cyclotomic> {
        &self.y_images[g][i]
    }

    /// Action of g on a polynomial in the x's (the representation on ℂ[𝔥]).
    pub fn act_x<C: Scalar>(&self, g: usize, p: &Poly<C>, lift: impl Fn(&Cyclotomic) -> C) -> Poly<C> {
        if g == 0 {
            return p.clone();
        }
        let images: Vec<Poly<C>> = self.x_images[g].iter().map(|f| f.map_coeffs(&lift)).collect();
        p.substitute(&images)
    }

    /// Action of g on a polynomial in the y's (on ℂ[𝔥*] = S𝔥).
    pub fn act_y<C: Scalar>(&self, g: usize, p: &Poly<C>, lift: impl Fn(&Cyclotomic) -> C) -> Poly<C> {
        if g == 0 {
            return p.clone();
        }
        let images: Vec<Poly<C>> = self.y_images[g].iter().map(|f| f.map_coeffs(&lift)).collect();
        p.substitute(&images)
    }

    /// Action on the polynomial representation ℂ[𝔥] with parameter
    /// coefficients.
    pub fn act_poly(&self, g: usize, p: &crate::exactalg::MultiPoly) -> crate::exactalg::MultiPoly {
        self.act_x(g, p, |c| ParamScalar::from_cyclotomic(c.clone()))
    }

    /// Index of the element with matrix `m`.
    pub fn find_matrix(&self, m: &Matrix) -> Option<usize> {
        self.elements.iter().position(|e| e.matrix == *m)
    }

    /// Reflection data with α and α^∨ rescaled by μ and μ⁻¹.
    pub fn rescale_roots(&self, mu: &Cyclotomic) -> ReflectionGroup {
        let mu_inv = mu.inv().expect("nonzero rescaling");
        let mut out = self.clone();
        for r in out.reflections.iter_mut() {
            r.root = r.root.iter().map(|c| c.mul(mu)).collect();
            r.coroot = r.coroot.iter().map(|c| c.mul(&mu_inv)).collect();
        }
        out
    }
}

fn dot(a: &[Cyclotomic], b: &[Cyclotomic]) -> Cyclotomic {
    a.iter().zip(b).fold(Cyclotomic::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

fn linear_form(coeffs: &[Cyclotomic]) -> Poly<Cyclotomic> {
    let mut p = Poly::zero();
    for (j, c) in coeffs.iter().enumerate() {
        p.add_term(crate::exactalg::Monomial::var(j), c);
    }
    p
}

fn swap(n: usize, i: usize, j: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.swap(i, j);
    p
}

/// Matrix sending e_j to signs[j]·e_{perm[j]}.
fn permutation_matrix(n: usize, perm: &[usize], signs: &[i64]) -> Matrix {
    let mut m = vec![vec![Cyclotomic::zero(); n]; n];
    for j in 0..n {
        m[perm[j]][j] = Cyclotomic::from_int(signs[j]);
    }
    m
}
