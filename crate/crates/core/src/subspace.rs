//! Subspaces of `F_q^n` in reduced row-echelon form, and their enumeration.

use serde_json::Value;

use crate::field::{Fe, Fq};

/// A subspace of `F_q^n`, stored by its unique reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vec<Fe>>,
}

/// Reduced row-echelon form of the given rows, zero rows dropped.
pub fn rref(fq: &Fq, n: usize, vecs: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let mut m: Vec<Vec<Fe>> = vecs.to_vec();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = fq.inv(m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = fq.mul(*x, inv);
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..n {
                    let t = fq.mul(f, m[r][j]);
                    m[i][j] = fq.sub(m[i][j], t);
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m
}

/// Basis of `{x : A x = 0}` for `A` given by rows.
pub fn nullspace(fq: &Fq, n: usize, rows: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let e = rref(fq, n, rows);
    let pivots: Vec<usize> = e.iter().map(|row| row.iter().position(|&x| x != 0).unwrap()).collect();
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0 as Fe; n];
            v[free] = 1;
            for (row, &pc) in e.iter().zip(&pivots) {
                v[pc] = fq.neg(row[free]);
            }
            v
        })
        .collect()
}

impl Subspace {
    pub fn from_vectors(fq: &Fq, n: usize, vecs: &[Vec<Fe>]) -> Self {
        Subspace { n, rows: rref(fq, n, vecs) }
    }

    /// Wraps rows already in reduced row-echelon form.
    pub fn from_rref_unchecked(n: usize, rows: Vec<Vec<Fe>>) -> Self {
        Subspace { n, rows }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { n, rows: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as Fe).collect())
            .collect();
        Subspace { n, rows }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Fe>] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect()
    }

    /// Coordinates not occupied by pivots, spanning a standard complement.
    pub fn free_positions(&self) -> Vec<usize> {
        let piv = self.pivots();
        (0..self.n).filter(|c| !piv.contains(c)).collect()
    }

    /// Reduces `v` against the basis, zeroing its pivot coordinates.
    pub fn reduce(&self, fq: &Fq, v: &[Fe]) -> Vec<Fe> {
        let mut v = v.to_vec();
        for (row, pc) in self.rows.iter().zip(self.pivots()) {
            let f = v[pc];
            if f != 0 {
                for j in 0..self.n {
                    v[j] = fq.sub(v[j], fq.mul(f, row[j]));
                }
            }
        }
        v
    }

    pub fn contains_vec(&self, fq: &Fq, v: &[Fe]) -> bool {
        self.reduce(fq, v).iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, fq: &Fq, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains_vec(fq, r))
    }

    pub fn sum(&self, fq: &Fq, other: &Subspace) -> Subspace {
        let mut v = self.rows.clone();
        v.extend(other.rows.iter().cloned());
        Subspace::from_vectors(fq, self.n, &v)
    }

    /// Annihilator under the plain dot product.
    pub fn annihilator(&self, fq: &Fq) -> Subspace {
        Subspace::from_vectors(fq, self.n, &nullspace(fq, self.n, &self.rows))
    }

    pub fn intersect(&self, fq: &Fq, other: &Subspace) -> Subspace {
        self.annihilator(fq).sum(fq, &other.annihilator(fq)).annihilator(fq)
    }

    /// Coordinatewise `x ↦ x^{p^power}`.
    pub fn frobenius(&self, fq: &Fq, power: i64) -> Subspace {
        let v: Vec<Vec<Fe>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|&x| fq.frob_pow(x, power)).collect())
            .collect();
        Subspace::from_vectors(fq, self.n, &v)
    }

    /// Rows with entries written as coordinate vectors over `F_p`.
    pub fn to_json(&self, fq: &Fq) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Array(r.iter().map(|&x| Value::from(fq.coords(x))).collect()))
                .collect(),
        )
    }

    pub fn from_json(fq: &Fq, n: usize, v: &Value) -> Option<Self> {
        let rows = v.as_array()?;
        let mut vecs = Vec::with_capacity(rows.len());
        for r in rows {
            let mut row = Vec::with_capacity(n);
            for e in r.as_array()? {
                let c: Option<Vec<u32>> = e.as_array()?.iter().map(|x| x.as_u64().map(|y| y as u32)).collect();
                row.push(fq.from_coords(&c?));
            }
            vecs.push(row);
        }
        Some(Subspace::from_vectors(fq, n, &vecs))
    }
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(q: f64, n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (q.powi((n - i) as i32) - 1.0) / (q.powi((i + 1) as i32) - 1.0))
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Visits every `k`-dimensional subspace of `F_q^n` whose echelon entries lie
/// in `alphabet`, in a fixed order.
///
/// Rows are chosen top to bottom; `row_ok(prefix, row)` may reject a partial
/// basis, pruning every completion of it. Since the echelon rows for a fixed
/// pivot set are independent, a pairwise condition on rows is checked
/// exactly by testing each new row against the prefix.
pub fn for_each_rref(
    n: usize,
    k: usize,
    alphabet: &[Fe],
    row_ok: &mut dyn FnMut(&[Vec<Fe>], &[Fe]) -> bool,
    emit: &mut dyn FnMut(&[Vec<Fe>]),
) {
    debug_assert!(alphabet.first() == Some(&0) && alphabet.contains(&1));
    if k > n {
        return;
    }
    combinations(n, k, &mut |piv: &[usize]| {
        let mut rows: Vec<Vec<Fe>> = Vec::with_capacity(k);
        fill_row(n, piv, alphabet, &mut rows, row_ok, emit);
    });
}

fn fill_row(
    n: usize,
    piv: &[usize],
    alphabet: &[Fe],
    rows: &mut Vec<Vec<Fe>>,
    row_ok: &mut dyn FnMut(&[Vec<Fe>], &[Fe]) -> bool,
    emit: &mut dyn FnMut(&[Vec<Fe>]),
) {
    let i = rows.len();
    if i == piv.len() {
        emit(rows);
        return;
    }
    let free: Vec<usize> = (piv[i] + 1..n).filter(|c| !piv.contains(c)).collect();
    let mut row = vec![0 as Fe; n];
    row[piv[i]] = 1;
    let mut idx = vec![0usize; free.len()];
    loop {
        for (slot, &c) in free.iter().enumerate() {
            row[c] = alphabet[idx[slot]];
        }
        if row_ok(rows, &row) {
            rows.push(row.clone());
            fill_row(n, piv, alphabet, rows, row_ok, emit);
            rows.pop();
        }
        let mut t = free.len();
        loop {
            if t == 0 {
                return;
            }
            t -= 1;
            idx[t] += 1;
            if idx[t] < alphabet.len() {
                break;
            }
            idx[t] = 0;
        }
    }
}

/// All `k`-dimensional subspaces of `F_q^n`.
pub fn grassmannian(fq: &Fq, n: usize, k: usize) -> Vec<Subspace> {
    let alphabet: Vec<Fe> = fq.elements().collect();
    let mut out = Vec::new();
    for_each_rref(n, k, &alphabet, &mut |_, _| true, &mut |rows| {
        out.push(Subspace::from_rref_unchecked(n, rows.to_vec()))
    });
    out
}

/// All `k`-dimensional subspaces of `w`.
pub fn subspaces_within(fq: &Fq, w: &Subspace, k: usize) -> Vec<Subspace> {
    let d = w.dim();
    grassmannian(fq, d, k)
        .into_iter()
        .map(|s| {
            let vecs: Vec<Vec<Fe>> = s.rows().iter().map(|c| combine(fq, w.rows(), c)).collect();
            Subspace::from_vectors(fq, w.ambient(), &vecs)
        })
        .collect()
}

/// `Σ c_i basis_i`.
pub fn combine(fq: &Fq, basis: &[Vec<Fe>], c: &[Fe]) -> Vec<Fe> {
    let n = basis.first().map_or(0, |b| b.len());
    let mut v = vec![0 as Fe; n];
    for (b, &ci) in basis.iter().zip(c) {
        if ci == 0 {
            continue;
        }
        for j in 0..n {
            v[j] = fq.add(v[j], fq.mul(ci, b[j]));
        }
    }
    v
}
