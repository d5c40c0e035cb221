//! Smith and Hermite normal forms over the discrete valuation ring `O_E`.
//!
//! All computations happen in `O_E / π^{2N}`. Quotients used as row or column
//! multipliers are chosen lifts, which keeps `U·M·V = D` exact in that ring.
//! A lattice whose Hermite pivots all stay below `π^{2N}` contains
//! `π^{2N} O_E^n`, so its canonical form computed in the quotient ring is the
//! canonical form of the lattice itself.

use super::{OEElement, OEMatrix};
use crate::error::{Error, Result};

/// `U · M · V = D` with `D = diag(π^{a_1}, …, π^{a_n})`, `a_1 ≤ … ≤ a_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: OEMatrix,
    pub d: OEMatrix,
    pub v: OEMatrix,
    pub exponents: Vec<u32>,
}

fn exhausted_or(block: impl Iterator<Item = OEElement>, otherwise: Error) -> Error {
    let mut block = block;
    if block.any(|x| !x.is_full_precision()) {
        Error::PrecisionExhausted("every remaining pivot candidate vanishes to its known precision".into())
    } else {
        otherwise
    }
}

/// Smith normal form of a square matrix that is nonsingular over `E`.
///
/// Pivots are chosen as the entry of least valuation in the remaining block,
/// ties broken by the lowest `(row, col)` in row-major order.
pub fn smith_normal_form(m: &OEMatrix) -> Result<SmithForm> {
    if !m.is_square() {
        return Err(Error::InvalidParams("Smith normal form needs a square matrix".into()));
    }
    let params = *m.params();
    let n = m.rows();
    let mut d = m.clone();
    let mut u = OEMatrix::identity(&params, n);
    let mut v = OEMatrix::identity(&params, n);
    let mut exponents = Vec::with_capacity(n);

    for k in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if let Some(val) = d[(i, j)].valuation() {
                    if best.is_none_or(|(b, _, _)| val < b) {
                        best = Some((val, i, j));
                    }
                }
            }
        }
        let Some((e, i, j)) = best else {
            let block = (k..n).flat_map(|i| (k..n).map(move |j| (i, j))).map(|ij| d[ij]);
            return Err(exhausted_or(block, Error::Singular));
        };
        d.swap_rows(i, k);
        u.swap_rows(i, k);
        d.swap_cols(j, k);
        v.swap_cols(j, k);

        let unit_inv = d[(k, k)].div_pi_pow_lift(e)?.inv()?;
        d.scale_row(k, unit_inv);
        u.scale_row(k, unit_inv);
        d[(k, k)] = OEElement::pi_pow(&params, e);

        for r in k + 1..n {
            let x = d[(r, k)];
            if x.is_zero() {
                continue;
            }
            let f = -x.div_pi_pow_lift(e)?;
            d.add_row_multiple(r, k, f);
            u.add_row_multiple(r, k, f);
        }
        for c in k + 1..n {
            let x = d[(k, c)];
            if x.is_zero() {
                continue;
            }
            let f = -x.div_pi_pow_lift(e)?;
            d.add_col_multiple(c, k, f);
            v.add_col_multiple(c, k, f);
        }
        exponents.push(e);
    }
    Ok(SmithForm { u, d, v, exponents })
}

/// Column-style Hermite form of the module spanned by the columns of `b`.
///
/// Returns an upper-triangular `n × n` matrix whose diagonal entries are
/// exact powers `π^{e_i}` and whose entry `(i, j)`, `i < j`, is the canonical
/// residue modulo `π^{e_i}`, together with the exponents `e_i`.
pub(crate) fn column_hermite(b: &OEMatrix) -> Result<(OEMatrix, Vec<u32>)> {
    let params = *b.params();
    let n = b.rows();
    let full = params.pi_precision();
    let mut m = b.clone();
    let mut active: Vec<usize> = (0..m.cols()).collect();
    let mut placed: Vec<Option<usize>> = vec![None; n];
    let mut exps = vec![0u32; n];

    for i in (0..n).rev() {
        let mut best: Option<(u32, usize)> = None;
        for &c in &active {
            if let Some(val) = m[(i, c)].valuation() {
                if best.is_none_or(|(bv, _)| val < bv) {
                    best = Some((val, c));
                }
            }
        }
        let Some((e, c)) = best else {
            let row = active.iter().map(|&c| m[(i, c)]);
            return Err(exhausted_or(row, Error::RankDeficient));
        };
        if e >= full {
            return Err(Error::PrecisionExhausted("Hermite pivot reached pi^2N".into()));
        }
        let unit_inv = m[(i, c)].div_pi_pow_lift(e)?.inv()?;
        m.scale_col(c, unit_inv);
        m[(i, c)] = OEElement::pi_pow(&params, e);
        for &c2 in &active {
            if c2 == c || m[(i, c2)].is_zero() {
                continue;
            }
            let f = -m[(i, c2)].div_pi_pow_lift(e)?;
            m.add_col_multiple(c2, c, f);
        }
        active.retain(|&x| x != c);
        placed[i] = Some(c);
        exps[i] = e;
    }

    let cols: Vec<Vec<OEElement>> = placed.iter().map(|c| m.column(c.expect("pivot placed"))).collect();
    let mut h = OEMatrix::from_columns(&params, n, &cols);
    for i in 0..n {
        for r in i + 1..n {
            h[(r, i)] = OEElement::zero(&params);
        }
    }
    for j in 0..n {
        for i in (0..j).rev() {
            let x = h[(i, j)];
            let r = x.truncate(exps[i]);
            let q = (x - r).div_pi_pow_lift(exps[i])?;
            if !q.is_zero() {
                h.add_col_multiple(j, i, -q);
            }
            h[(i, j)] = r;
        }
    }
    Ok((h.assume_exact(), exps))
}

/// Canonical representative `(B', s')` of the lattice `π^{-scale} · colspan(B)`.
///
/// `B'` is the column Hermite form and `s'` is chosen so that `B'` is not
/// divisible by `π`; equal lattices give identical pairs.
pub fn hermite_canonical(b: &OEMatrix, scale: i64) -> Result<(OEMatrix, i64)> {
    let (h, _) = column_hermite(b)?;
    let shift = h.entries().iter().filter_map(|x| x.valuation()).min().unwrap_or(0);
    if shift == 0 {
        return Ok((h, scale));
    }
    let params = *h.params();
    let shifted = OEMatrix::from_fn(&params, h.rows(), h.cols(), |i, j| {
        h[(i, j)].div_pi_pow_lift(shift).expect("every entry divisible by the minimum valuation")
    });
    let (h2, _) = column_hermite(&shifted)?;
    Ok((h2, scale - shift as i64))
}
