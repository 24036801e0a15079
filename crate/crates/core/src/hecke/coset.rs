//! Todd–Coxeter coset enumeration (HLT strategy with coincidence handling)
//! over the trivial subgroup, giving the regular permutation representation.

use serde::Serialize;

use super::GroupPresentation;

/// Letters are ±(k+1) for generator k; this maps them to table columns.
fn column(letter: i32) -> usize {
    let k = letter.unsigned_abs() as usize - 1;
    if letter > 0 {
        2 * k
    } else {
        2 * k + 1
    }
}

fn inverse_column(col: usize) -> usize {
    col ^ 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Overflow {
    pub max_cosets: usize,
    pub defined: usize,
}

/// Permutation action on 0..degree, one permutation per generator
/// (image of point i under generator k is `perms[k][i]`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermutationRep {
    pub degree: usize,
    pub perms: Vec<Vec<usize>>,
}

impl PermutationRep {
    fn inverse(p: &[usize]) -> Vec<usize> {
        let mut inv = vec![0; p.len()];
        for (i, &j) in p.iter().enumerate() {
            inv[j] = i;
        }
        inv
    }

    /// Right action: the point i·w, reading w left to right.
    pub fn apply_word(&self, word: &[i32]) -> Vec<usize> {
        let inverses: Vec<Vec<usize>> = self.perms.iter().map(|p| Self::inverse(p)).collect();
        (0..self.degree)
            .map(|mut i| {
                for &l in word {
                    let k = l.unsigned_abs() as usize - 1;
                    i = if l > 0 { self.perms[k][i] } else { inverses[k][i] };
                }
                i
            })
            .collect()
    }

    pub fn is_identity(&self, word: &[i32]) -> bool {
        self.apply_word(word).iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn relators_trivial(&self, p: &GroupPresentation) -> bool {
        p.relators.iter().all(|r| self.is_identity(r))
    }

    /// Sorted cycle lengths of the permutation of generator k.
    pub fn cycle_type(&self, k: usize) -> Vec<usize> {
        let p = &self.perms[k];
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for s in 0..self.degree {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = p[i];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    /// Sign of the permutation of generator k, i.e. its determinant as a
    /// permutation matrix.
    pub fn sign(&self, k: usize) -> i32 {
        let even_cycles = self.cycle_type(k).iter().filter(|&&l| l % 2 == 0).count();
        if even_cycles % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

struct Enumeration {
    ncols: usize,
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    live: usize,
    max_cosets: usize,
}

impl Enumeration {
    fn rep(&mut self, mut c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[c] != root {
            let next = self.parent[c];
            self.parent[c] = root;
            c = next;
        }
        root
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, col: usize) -> Result<usize, Overflow> {
        if self.live >= self.max_cosets {
            return Err(Overflow { max_cosets: self.max_cosets, defined: self.table.len() });
        }
        let d = self.table.len();
        self.table.push(vec![None; self.ncols]);
        self.parent.push(d);
        self.live += 1;
        self.table[c][col] = Some(d);
        self.table[d][inverse_column(col)] = Some(c);
        Ok(d)
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, drop) = (a.min(b), a.max(b));
        self.parent[drop] = keep;
        self.live -= 1;
        queue.push(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut head = 0;
        while head < queue.len() {
            let e = queue[head];
            head += 1;
            for col in 0..self.ncols {
                let Some(f) = self.table[e][col] else { continue };
                let inv = inverse_column(col);
                if self.table[f][inv] == Some(e) {
                    self.table[f][inv] = None;
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if let Some(x) = self.table[e1][col] {
                    self.merge(f1, x, &mut queue);
                } else if let Some(x) = self.table[f1][inv] {
                    self.merge(e1, x, &mut queue);
                } else {
                    self.table[e1][col] = Some(f1);
                    self.table[f1][inv] = Some(e1);
                }
            }
        }
    }

    /// Scans c·word = c from both ends, defining cosets as needed.
    fn scan_and_fill(&mut self, c: usize, word: &[i32]) -> Result<(), Overflow> {
        let cols: Vec<usize> = word.iter().map(|&l| column(l)).collect();
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0isize, cols.len() as isize - 1);
        loop {
            while i <= j {
                let Some(next) = self.table[f][cols[i as usize]] else { break };
                f = next;
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i {
                let Some(prev) = self.table[b][inverse_column(cols[j as usize])] else { break };
                b = prev;
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                // deduction closes the cycle
                let col = cols[i as usize];
                self.table[f][col] = Some(b);
                self.table[b][inverse_column(col)] = Some(f);
                return Ok(());
            }
            self.define(f, cols[i as usize])?;
        }
    }
}

/// Enumerates cosets of the trivial subgroup. Returns the regular
/// representation when the table closes within `max_cosets` live cosets.
pub fn todd_coxeter(p: &GroupPresentation, max_cosets: usize) -> Result<PermutationRep, Overflow> {
    let ncols = 2 * p.generators.len();
    let mut e = Enumeration { ncols, table: vec![vec![None; ncols]], parent: vec![0], live: 1, max_cosets };
    loop {
        let before = (e.table.len(), e.live);
        let mut c = 0;
        while c < e.table.len() {
            for r in &p.relators {
                if !e.alive(c) {
                    break;
                }
                e.scan_and_fill(c, r)?;
            }
            for col in 0..ncols {
                if e.alive(c) && e.table[c][col].is_none() {
                    e.define(c, col)?;
                }
            }
            c += 1;
        }
        // repeat until a full pass over a complete table changes nothing, so
        // coincidences found late cannot leave earlier rows unchecked
        let complete = (0..e.table.len()).filter(|&c| e.alive(c)).all(|c| e.table[c].iter().all(Option::is_some));
        if complete && before == (e.table.len(), e.live) {
            break;
        }
    }
    let live: Vec<usize> = (0..e.table.len()).filter(|&c| e.alive(c)).collect();
    let mut index = vec![usize::MAX; e.table.len()];
    for (k, &c) in live.iter().enumerate() {
        index[c] = k;
    }
    let perms = (0..p.generators.len())
        .map(|g| {
            live.iter()
                .map(|&c| {
                    let target = e.table[c][2 * g].expect("closed table is complete");
                    index[e.rep(target)]
                })
                .collect()
        })
        .collect();
    Ok(PermutationRep { degree: live.len(), perms })
}
