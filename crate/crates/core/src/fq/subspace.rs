use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::FqField;
use crate::error::{Error, Result};

/// Bring `rows` to reduced row echelon form in place, dropping zero rows.
/// Returns the pivot columns.
pub(crate) fn rref(field: &FqField, rows: &mut Vec<Vec<u32>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, i);
        let inv = field.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c] == 0 {
                continue;
            }
            let f = field.neg(rows[i][c]);
            for j in 0..ncols {
                let v = field.mul(f, rows[r][j]);
                rows[i][j] = field.add(rows[i][j], v);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// A subspace of `F_q^n`, stored by its reduced row echelon basis.
#[derive(Clone)]
pub struct FqSubspace {
    field: Arc<FqField>,
    ambient: usize,
    rows: Vec<Vec<u32>>,
}

impl PartialEq for FqSubspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.rows == other.rows
    }
}

impl Eq for FqSubspace {}

impl std::hash::Hash for FqSubspace {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.rows.hash(state);
    }
}

impl PartialOrd for FqSubspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Pivot sets first (lexicographically), then the echelon entries.
impl Ord for FqSubspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ambient, self.pivots(), &self.rows).cmp(&(other.ambient, other.pivots(), &other.rows))
    }
}

impl fmt::Debug for FqSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{:?}", self.rows)
    }
}

impl FqSubspace {
    pub fn span(field: &Arc<FqField>, ambient: usize, vectors: &[Vec<u32>]) -> Self {
        let mut rows: Vec<Vec<u32>> = vectors.to_vec();
        assert!(rows.iter().all(|r| r.len() == ambient), "vector length must equal the ambient dimension");
        rref(field, &mut rows);
        FqSubspace { field: Arc::clone(field), ambient, rows }
    }

    /// Wrap rows already known to be in reduced row echelon form.
    pub(crate) fn from_rref(field: &Arc<FqField>, ambient: usize, rows: Vec<Vec<u32>>) -> Self {
        FqSubspace { field: Arc::clone(field), ambient, rows }
    }

    pub fn zero(field: &Arc<FqField>, ambient: usize) -> Self {
        FqSubspace { field: Arc::clone(field), ambient, rows: Vec::new() }
    }

    pub fn whole(field: &Arc<FqField>, ambient: usize) -> Self {
        let rows = (0..ambient).map(|i| unit_vector(ambient, i)).collect();
        FqSubspace { field: Arc::clone(field), ambient, rows }
    }

    pub fn field(&self) -> &Arc<FqField> {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.iter().position(|&x| x != 0).expect("echelon rows are nonzero")).collect()
    }

    pub fn contains_vector(&self, v: &[u32]) -> bool {
        let f = &self.field;
        let mut w = v.to_vec();
        for (row, piv) in self.rows.iter().zip(self.pivots()) {
            let c = w[piv];
            if c == 0 {
                continue;
            }
            let c = f.neg(c);
            for (x, &y) in w.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        w.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, other: &FqSubspace) -> bool {
        other.rows.iter().all(|r| self.contains_vector(r))
    }

    pub fn sum(&self, other: &FqSubspace) -> FqSubspace {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        FqSubspace::span(&self.field, self.ambient, &rows)
    }

    /// Zassenhaus: echelonize `[[u, u], [w, 0]]`; the rows whose first half
    /// vanishes carry the intersection in their second half.
    pub fn intersection(&self, other: &FqSubspace) -> FqSubspace {
        let n = self.ambient;
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(self.dim() + other.dim());
        for u in &self.rows {
            rows.push(u.iter().chain(u.iter()).copied().collect());
        }
        for w in &other.rows {
            rows.push(w.iter().copied().chain(std::iter::repeat_n(0, n)).collect());
        }
        rref(&self.field, &mut rows);
        let meet: Vec<Vec<u32>> =
            rows.into_iter().filter(|r| r[..n].iter().all(|&x| x == 0)).map(|r| r[n..].to_vec()).collect();
        FqSubspace::span(&self.field, n, &meet)
    }

    /// Entry-wise `p`-th power of the echelon basis. The result is again in
    /// reduced row echelon form, since Frobenius fixes `0` and `1`.
    pub fn frobenius(&self) -> FqSubspace {
        let f = &self.field;
        let rows = self.rows.iter().map(|r| r.iter().map(|&x| f.frobenius(x)).collect()).collect();
        FqSubspace { field: Arc::clone(f), ambient: self.ambient, rows }
    }

    pub fn frobenius_pow(&self, j: u32) -> FqSubspace {
        let f = &self.field;
        let e = (f.p() as u64).pow(j % f.k());
        let rows = self.rows.iter().map(|r| r.iter().map(|&x| f.pow(x, e)).collect()).collect();
        FqSubspace { field: Arc::clone(f), ambient: self.ambient, rows }
    }

    /// Defined over `F_p`: equivalently `Φ(U) = U`.
    pub fn is_rational(&self) -> bool {
        self.rows.iter().flatten().all(|&x| self.field.is_prime_field_element(x))
    }

    /// The same subspace viewed over another extension of the same prime
    /// field; only possible for rational subspaces.
    pub fn base_change(&self, field: &Arc<FqField>) -> Result<FqSubspace> {
        if field.p() != self.field.p() {
            return Err(Error::InvalidParams("fields have different characteristic".into()));
        }
        if !self.is_rational() {
            return Err(Error::NotRational);
        }
        Ok(FqSubspace { field: Arc::clone(field), ambient: self.ambient, rows: self.rows.clone() })
    }

    pub fn to_record(&self) -> SubspaceRecord {
        let f = &self.field;
        SubspaceRecord {
            p: f.p(),
            k: f.k(),
            modulus: f.modulus().to_vec(),
            dim: self.dim(),
            basis: self.rows.iter().map(|r| r.iter().map(|&x| f.coefficients(x)).collect()).collect(),
        }
    }

    pub fn from_record(field: &Arc<FqField>, ambient: usize, rec: &SubspaceRecord) -> Result<FqSubspace> {
        if rec.p != field.p() || rec.k != field.k() || rec.modulus != field.modulus() {
            return Err(Error::Parse("subspace record uses a different field".into()));
        }
        let rows: Vec<Vec<u32>> = rec
            .basis
            .iter()
            .map(|r| r.iter().map(|c| field.from_coefficients(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        if rows.iter().any(|r| r.len() != ambient) {
            return Err(Error::Parse("basis vector length does not match the ambient dimension".into()));
        }
        let s = FqSubspace::span(field, ambient, &rows);
        if s.dim() != rec.dim {
            return Err(Error::Parse("basis rank does not match dim".into()));
        }
        Ok(s)
    }
}

pub(crate) fn unit_vector(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// JSON form of a subspace: field data plus the echelon basis with each entry
/// written as its coefficient list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceRecord {
    pub p: u32,
    pub k: u32,
    pub modulus: Vec<u32>,
    pub dim: usize,
    pub basis: Vec<Vec<Vec<u32>>>,
}

/// Solutions of `A x = b` over `F_q`, as a particular solution and a kernel
/// basis; `None` when the system is inconsistent.
pub(crate) fn solve_affine(field: &FqField, a: &[Vec<u32>], b: &[u32], nvars: usize) -> Option<(Vec<u32>, Vec<Vec<u32>>)> {
    let mut aug: Vec<Vec<u32>> = a.iter().zip(b).map(|(row, &rhs)| row.iter().copied().chain([rhs]).collect()).collect();
    let pivots = if aug.is_empty() { Vec::new() } else { rref(field, &mut aug) };
    if pivots.last() == Some(&nvars) {
        return None;
    }
    let mut x0 = vec![0; nvars];
    for (row, &c) in aug.iter().zip(&pivots) {
        x0[c] = row[nvars];
    }
    let free: Vec<usize> = (0..nvars).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&fc| {
            let mut v = vec![0; nvars];
            v[fc] = 1;
            for (row, &c) in aug.iter().zip(&pivots) {
                v[c] = field.neg(row[fc]);
            }
            v
        })
        .collect();
    Some((x0, kernel))
}

/// All vectors `x0 + Σ t_i k_i`.
pub(crate) fn affine_points(field: &FqField, x0: &[u32], kernel: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let q = field.order();
    let total = (q as usize).pow(kernel.len() as u32);
    let mut out = Vec::with_capacity(total);
    let mut t = vec![0u32; kernel.len()];
    loop {
        let mut v = x0.to_vec();
        for (ti, k) in t.iter().zip(kernel) {
            if *ti == 0 {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(k) {
                *x = field.add(*x, field.mul(*ti, y));
            }
        }
        out.push(v);
        let mut i = 0;
        loop {
            if i == t.len() {
                return out;
            }
            t[i] += 1;
            if t[i] < q {
                break;
            }
            t[i] = 0;
            i += 1;
        }
    }
}

/// Linear functionals each new row must satisfy, given the earlier rows.
pub(crate) type Constraint<'a> = dyn Fn(&[Vec<u32>]) -> Vec<Vec<u32>> + 'a;

/// Enumerate the `j`-dimensional subspaces of `F_q^n` whose echelon rows
/// satisfy `constraint(previous_rows) · row = 0`, in subspace order.
///
/// `constraint` returns linear functionals that the next row must annihilate,
/// given the rows already chosen. Counts every partial and complete candidate
/// against `budget`.
pub(crate) fn enumerate_constrained(
    field: &Arc<FqField>,
    n: usize,
    j: usize,
    budget: u64,
    constraint: &Constraint<'_>,
) -> Result<Vec<FqSubspace>> {
    let mut out = Vec::new();
    let mut work = 0u64;
    for pivots in combinations(n, j) {
        let mut rows = Vec::with_capacity(j);
        extend_rows(field, n, &pivots, &mut rows, &mut out, &mut work, budget, constraint)?;
    }
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend_rows(
    field: &Arc<FqField>,
    n: usize,
    pivots: &[usize],
    rows: &mut Vec<Vec<u32>>,
    out: &mut Vec<FqSubspace>,
    work: &mut u64,
    budget: u64,
    constraint: &Constraint<'_>,
) -> Result<()> {
    *work += 1;
    if *work > budget {
        return Err(Error::SearchTooLarge { budget });
    }
    let r = rows.len();
    if r == pivots.len() {
        out.push(FqSubspace::from_rref(field, n, rows.clone()));
        return Ok(());
    }
    let piv = pivots[r];
    let free: Vec<usize> = (piv + 1..n).filter(|c| !pivots.contains(c)).collect();
    let functionals = constraint(rows);
    let a: Vec<Vec<u32>> = functionals.iter().map(|f| free.iter().map(|&c| f[c]).collect()).collect();
    let b: Vec<u32> = functionals.iter().map(|f| field.neg(f[piv])).collect();
    let Some((x0, kernel)) = solve_affine(field, &a, &b, free.len()) else {
        return Ok(());
    };
    for x in affine_points(field, &x0, &kernel) {
        let mut row = vec![0u32; n];
        row[piv] = 1;
        for (&c, &v) in free.iter().zip(&x) {
            row[c] = v;
        }
        rows.push(row);
        extend_rows(field, n, pivots, rows, out, work, budget, constraint)?;
        rows.pop();
    }
    Ok(())
}

/// `j`-element subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(j);
    fn rec(start: usize, n: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < j - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, j, cur, out);
            cur.pop();
        }
    }
    rec(0, n, j, &mut cur, &mut out);
    out
}

/// All `j`-dimensional subspaces of `F_q^n`.
pub fn enumerate_subspaces(field: &Arc<FqField>, n: usize, j: usize, budget: u64) -> Result<Vec<FqSubspace>> {
    enumerate_constrained(field, n, j, budget, &|_| Vec::new())
}

/// The lines of `F_q^d` as normalized vectors (first nonzero entry `1`).
pub(crate) fn projective_points(field: &FqField, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for lead in 0..d {
        let free = d - lead - 1;
        let x0 = vec![0u32; free];
        let kernel: Vec<Vec<u32>> = (0..free).map(|i| unit_vector(free, i)).collect();
        for tail in affine_points(field, &x0, &kernel) {
            let mut v = vec![0u32; d];
            v[lead] = 1;
            v[lead + 1..].copy_from_slice(&tail);
            out.push(v);
        }
    }
    out
}
