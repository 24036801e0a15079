//! Exact linear algebra over a [`FieldScalar`].

use std::collections::BTreeMap;

use super::scalar::FieldScalar;

/// Reduced row echelon form of a dense matrix.
#[derive(Clone, Debug)]
pub struct Rref<C> {
    pub rows: Vec<Vec<C>>,
    /// Pivot column of row `i`, for the first `pivots.len()` rows.
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan elimination. Among candidate pivots in a column the one
/// with the smallest [`pivot_cost`](super::Scalar::pivot_cost) wins, which
/// keeps parameter-dependent entries out of denominators whenever possible.
pub fn rref<C: FieldScalar>(mut rows: Vec<Vec<C>>, ncols: usize) -> Rref<C> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| rows[i][col].pivot_cost());
        let Some(p) = best else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot is invertible");
        rows[r] = rows[r].iter().map(|x| x.mul(&inv)).collect();
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(pivot_row.iter()).skip(col) {
                if !p.is_zero() {
                    *x = x.sub(&f.mul(p));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    Rref { rows, pivots }
}

pub fn rank<C: FieldScalar>(rows: Vec<Vec<C>>, ncols: usize) -> usize {
    rref(rows, ncols).pivots.len()
}

/// Basis of `{v : A v = 0}`.
pub fn nullspace<C: FieldScalar>(rows: Vec<Vec<C>>, ncols: usize) -> Vec<Vec<C>> {
    let Rref { rows, pivots } = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![C::zero(); ncols];
            v[f] = C::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = rows[i][f].neg();
            }
            v
        })
        .collect()
}

/// Solves `A x = b` for square invertible `A`; `None` if singular.
pub fn solve<C: FieldScalar>(a: &[Vec<C>], b: &[C]) -> Option<Vec<C>> {
    let n = a.len();
    let aug: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let Rref { rows, pivots } = rref(aug, n);
    if pivots.len() < n {
        return None;
    }
    Some(rows.iter().take(n).map(|r| r[n].clone()).collect())
}

/// Outcome of adding a vector to a [`SparseEchelon`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Insert {
    /// The vector enlarged the span.
    Independent,
    /// The vector was already in the span.
    Dependent,
    /// Reduction stalled on a coefficient that is not a unit (only possible
    /// over non-fields such as truncated series rings).
    NonUnitPivot,
}

/// Incrementally built echelon basis of sparse vectors indexed by ordered
/// keys. Each stored row is normalized so its largest key has coefficient 1.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord + Clone, C: FieldScalar> {
    rows: BTreeMap<K, BTreeMap<K, C>>,
}

impl<K: Ord + Clone, C: FieldScalar> Default for SparseEchelon<K, C> {
    fn default() -> Self {
        SparseEchelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone, C: FieldScalar> SparseEchelon<K, C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Reduces `v` against the basis; what remains has a leading key that is
    /// not a pivot (or is empty).
    pub fn reduce(&self, mut v: BTreeMap<K, C>) -> Result<BTreeMap<K, C>, BTreeMap<K, C>> {
        v.retain(|_, c| !c.is_zero());
        // walk keys from the top; `bound` is the largest key not yet settled
        let mut bound: Option<K> = None;
        loop {
            let next = match &bound {
                None => v.keys().next_back().cloned(),
                Some(b) => v.range(..b.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(k) = next else { return Ok(v) };
            match self.rows.get(&k) {
                Some(row) => {
                    let f = v[&k].clone();
                    for (rk, rc) in row {
                        let e = v.entry(rk.clone()).or_insert_with(C::zero);
                        *e = e.sub(&f.mul(rc));
                        if e.is_zero() {
                            v.remove(rk);
                        }
                    }
                }
                None => {
                    if v[&k].inv().is_none() {
                        return Err(v);
                    }
                    bound = Some(k);
                }
            }
        }
    }

    pub fn contains(&self, v: BTreeMap<K, C>) -> bool {
        matches!(self.reduce(v), Ok(r) if r.is_empty())
    }

    pub fn insert(&mut self, v: BTreeMap<K, C>) -> Insert {
        let r = match self.reduce(v) {
            Ok(r) => r,
            Err(_) => return Insert::NonUnitPivot,
        };
        let Some((k, lead)) = r.iter().next_back() else { return Insert::Dependent };
        let k = k.clone();
        let inv = lead.inv().expect("reduce leaves a unit leading coefficient");
        let row: BTreeMap<K, C> = r.into_iter().map(|(key, c)| (key, c.mul(&inv))).collect();
        self.rows.insert(k, row);
        Insert::Independent
    }
}
