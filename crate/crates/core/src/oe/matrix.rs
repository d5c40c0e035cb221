use std::fmt;
use std::ops::{Index, IndexMut};

use super::{FieldParams, OEElement};

/// Dense row-major matrix over `O_E`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OEMatrix {
    params: FieldParams,
    rows: usize,
    cols: usize,
    entries: Vec<OEElement>,
}

impl OEMatrix {
    pub fn zeros(params: &FieldParams, rows: usize, cols: usize) -> Self {
        OEMatrix {
            params: *params,
            rows,
            cols,
            entries: vec![OEElement::zero(params); rows * cols],
        }
    }

    pub fn identity(params: &FieldParams, n: usize) -> Self {
        let mut m = Self::zeros(params, n, n);
        for i in 0..n {
            m[(i, i)] = OEElement::one(params);
        }
        m
    }

    pub fn from_fn(params: &FieldParams, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> OEElement) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        OEMatrix { params: *params, rows, cols, entries }
    }

    /// Build from `(a, b)` pairs meaning `a + bπ`.
    pub fn from_pairs(params: &FieldParams, rows: &[Vec<(i64, i64)>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(params, r, c, |i, j| {
            let (a, b) = rows[i][j];
            OEElement::new(params, a, b)
        })
    }

    pub fn from_ints(params: &FieldParams, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        Self::from_fn(params, r, c, |i, j| OEElement::from_int(params, rows[i][j]))
    }

    /// Square block-diagonal matrix.
    pub fn block_diagonal(params: &FieldParams, blocks: &[OEMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(params, n, n);
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(offset + i, offset + j)] = b[(i, j)];
                }
            }
            offset += b.rows;
        }
        m
    }

    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[OEElement] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<OEElement> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[OEElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn from_columns(params: &FieldParams, rows: usize, columns: &[Vec<OEElement>]) -> Self {
        Self::from_fn(params, rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.params, self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Entry-wise conjugate.
    pub fn conj(&self) -> Self {
        Self::from_fn(&self.params, self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(&self.params, self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, rhs: &OEMatrix) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        Self::from_fn(&self.params, self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(OEElement::zero(&self.params), |acc, k| acc + self[(i, k)] * rhs[(k, j)])
        })
    }

    pub fn scale(&self, c: OEElement) -> Self {
        Self::from_fn(&self.params, self.rows, self.cols, |i, j| self[(i, j)] * c)
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, rhs: &OEMatrix) -> Self {
        assert_eq!(self.rows, rhs.rows);
        Self::from_fn(&self.params, self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                rhs[(i, j - self.cols)]
            }
        })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += c · row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: OEElement) {
        for j in 0..self.cols {
            let v = self[(src, j)] * c;
            self[(dst, j)] = self[(dst, j)] + v;
        }
    }

    /// `col[dst] += c · col[src]`
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: OEElement) {
        for i in 0..self.rows {
            let v = self[(i, src)] * c;
            self[(i, dst)] = self[(i, dst)] + v;
        }
    }

    pub fn scale_row(&mut self, i: usize, c: OEElement) {
        for j in 0..self.cols {
            self[(i, j)] = self[(i, j)] * c;
        }
    }

    pub fn scale_col(&mut self, j: usize, c: OEElement) {
        for i in 0..self.rows {
            self[(i, j)] = self[(i, j)] * c;
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.conj_transpose()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Determinant by valuation-pivoted elimination.
    ///
    /// Row operations use exact chosen multipliers, so the value is exact in
    /// `O_E / π^{2N}`.
    pub fn determinant(&self) -> OEElement {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = OEElement::one(&self.params);
        for k in 0..n {
            let pivot = (k..n)
                .filter_map(|i| m[(i, k)].valuation().map(|v| (v, i)))
                .min();
            let Some((v, i)) = pivot else {
                return OEElement::zero(&self.params);
            };
            if i != k {
                m.swap_rows(i, k);
                det = -det;
            }
            let p = m[(k, k)];
            let unit_inv = p.div_pi_pow_lift(v).and_then(|u| u.inv()).expect("pivot has valuation v");
            for r in k + 1..n {
                let x = m[(r, k)];
                if x.is_zero() {
                    continue;
                }
                let f = x.div_pi_pow_lift(v).expect("pivot is minimal") * unit_inv;
                m.add_row_multiple(r, k, -f);
            }
            det = det * p;
        }
        det
    }

    /// Drop precision bookkeeping on entries that are known to be exact.
    pub(crate) fn assume_exact(&self) -> Self {
        Self::from_fn(&self.params, self.rows, self.cols, |i, j| self[(i, j)].assume_exact())
    }
}

impl Index<(usize, usize)> for OEMatrix {
    type Output = OEElement;
    fn index(&self, (i, j): (usize, usize)) -> &OEElement {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for OEMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut OEElement {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for OEMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| format!("{}+{}π", x.a(), x.b())).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
