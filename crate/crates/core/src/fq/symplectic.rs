use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::subspace::{enumerate_constrained, rref, solve_affine};
use super::{FqField, FqSubspace};
use crate::error::{Error, Result};

/// A nondegenerate alternating form on `F_p^{2m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymplecticSpace {
    p: u32,
    m: usize,
    gram: Vec<Vec<u32>>,
}

impl SymplecticSpace {
    pub fn new(p: u32, gram: Vec<Vec<u32>>) -> Result<Self> {
        let prime = FqField::new(p as u64, 1)?;
        let n = gram.len();
        if n % 2 == 1 || gram.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParams("Gram matrix must be square of even size".into()));
        }
        let gram: Vec<Vec<u32>> = gram.into_iter().map(|r| r.into_iter().map(|x| x % p).collect()).collect();
        for i in 0..n {
            if gram[i][i] != 0 {
                return Err(Error::InvalidParams("alternating form has a nonzero diagonal".into()));
            }
            for j in 0..i {
                if prime.add(gram[i][j], gram[j][i]) != 0 {
                    return Err(Error::InvalidParams("Gram matrix is not skew-symmetric".into()));
                }
            }
        }
        let mut rows = gram.clone();
        if rref(&prime, &mut rows).len() != n {
            return Err(Error::Singular);
        }
        Ok(SymplecticSpace { p, m: n / 2, gram })
    }

    /// `⟨e_i, e_{2m+1−i}⟩ = 1` for `i ≤ m` and `−1` for `i > m` (1-based).
    pub fn standard(p: u32, m: usize) -> Result<Self> {
        let n = 2 * m;
        let mut gram = vec![vec![0u32; n]; n];
        for i in 0..n {
            gram[i][n - 1 - i] = if i < m { 1 } else { p - 1 };
        }
        Self::new(p, gram)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        2 * self.m
    }

    pub fn gram(&self) -> &[Vec<u32>] {
        &self.gram
    }

    pub fn field(&self, k: u32) -> Result<Arc<FqField>> {
        Ok(Arc::new(FqField::new(self.p as u64, k)?))
    }

    /// `⟨u, v⟩` for vectors over `F_q`.
    pub fn pair(&self, field: &FqField, u: &[u32], v: &[u32]) -> u32 {
        let f = self.functional(field, v);
        u.iter().zip(&f).fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
    }

    /// The functional `x ↦ ⟨x, v⟩` as the vector `G v`.
    pub fn functional(&self, field: &FqField, v: &[u32]) -> Vec<u32> {
        self.gram
            .iter()
            .map(|row| row.iter().zip(v).fold(0, |acc, (&g, &x)| field.add(acc, field.mul(g, x))))
            .collect()
    }

    pub fn perp(&self, u: &FqSubspace) -> FqSubspace {
        let field = u.field();
        let n = self.dim();
        let a: Vec<Vec<u32>> = u.basis().iter().map(|r| self.functional(field, r)).collect();
        let b = vec![0; a.len()];
        let (_, kernel) = solve_affine(field, &a, &b, n).expect("homogeneous systems are consistent");
        FqSubspace::span(field, n, &kernel)
    }

    pub fn is_isotropic(&self, u: &FqSubspace) -> bool {
        let f = u.field();
        let b = u.basis();
        (0..b.len()).all(|i| (0..i).all(|j| self.pair(f, &b[i], &b[j]) == 0))
    }

    pub fn is_lagrangian(&self, u: &FqSubspace) -> bool {
        u.dim() == self.m && self.is_isotropic(u)
    }

    /// All isotropic `j`-dimensional subspaces of `V ⊗ F_{p^k}`, in subspace
    /// order. Each echelon row is solved for against the functionals of the
    /// rows already chosen, so only isotropic candidates are ever built.
    pub fn enumerate_isotropic(&self, j: usize, k: u32, budget: u64) -> Result<Vec<FqSubspace>> {
        if j > self.m {
            return Err(Error::InvalidParams(format!("isotropic subspaces have dimension at most m = {}", self.m)));
        }
        let field = self.field(k)?;
        self.enumerate_isotropic_in(&field, j, budget)
    }

    pub fn enumerate_isotropic_in(&self, field: &Arc<FqField>, j: usize, budget: u64) -> Result<Vec<FqSubspace>> {
        let constraint = |rows: &[Vec<u32>]| rows.iter().map(|r| self.functional(field, r)).collect();
        enumerate_constrained(field, self.dim(), j, budget, &constraint)
    }

    pub fn lagrangians(&self, k: u32, budget: u64) -> Result<Vec<FqSubspace>> {
        self.enumerate_isotropic(self.m, k, budget)
    }

    /// The rational isotropic subspaces of dimension `j` (over `F_p`).
    pub fn rational_isotropic(&self, j: usize, budget: u64) -> Result<Vec<FqSubspace>> {
        self.enumerate_isotropic(j, 1, budget)
    }

    pub fn quotient(&self, w: &FqSubspace) -> Result<SymplecticQuotient> {
        SymplecticQuotient::new(self, w)
    }
}

/// `W^⊥/W` for a rational isotropic `W`, with maps between its subspaces and
/// the subspaces `U` of `V` with `W ⊆ U ⊆ W^⊥`.
///
/// The complement of `W` in `W^⊥` is spanned by rational vectors, so both
/// maps commute with Frobenius.
#[derive(Debug, Clone)]
pub struct SymplecticQuotient {
    parent: SymplecticSpace,
    w: FqSubspace,
    w_perp: FqSubspace,
    complement: Vec<Vec<u32>>,
    space: SymplecticSpace,
}

impl SymplecticQuotient {
    fn new(parent: &SymplecticSpace, w: &FqSubspace) -> Result<Self> {
        if !w.is_rational() {
            return Err(Error::NotRational);
        }
        if !parent.is_isotropic(w) {
            return Err(Error::NotIsotropic);
        }
        let prime = parent.field(1)?;
        let w = w.base_change(&prime)?;
        let w_perp = parent.perp(&w);
        let mut complement: Vec<Vec<u32>> = Vec::new();
        let mut acc = w.clone();
        for v in w_perp.basis() {
            if !acc.contains_vector(v) {
                complement.push(v.clone());
                acc = acc.sum(&FqSubspace::span(&prime, parent.dim(), std::slice::from_ref(v)));
            }
        }
        let gram = complement.iter().map(|a| complement.iter().map(|b| parent.pair(&prime, a, b)).collect()).collect();
        let space = SymplecticSpace::new(parent.p, gram)?;
        Ok(SymplecticQuotient { parent: parent.clone(), w, w_perp, complement, space })
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn parent(&self) -> &SymplecticSpace {
        &self.parent
    }

    pub fn w(&self) -> &FqSubspace {
        &self.w
    }

    pub fn w_perp(&self) -> &FqSubspace {
        &self.w_perp
    }

    /// Image in `W^⊥/W` of a subspace `U` with `W ⊆ U ⊆ W^⊥`.
    pub fn project(&self, u: &FqSubspace) -> Result<FqSubspace> {
        let field = u.field();
        let w = self.w.base_change(field)?;
        let w_perp = self.w_perp.base_change(field)?;
        if !u.contains(&w) || !w_perp.contains(u) {
            return Err(Error::InvalidParams("subspace does not lie between W and its perpendicular".into()));
        }
        // Coordinates of each basis vector in the basis (complement, W).
        let basis: Vec<&Vec<u32>> = self.complement.iter().chain(w.basis()).collect();
        let n = self.parent.dim();
        let a: Vec<Vec<u32>> = (0..n).map(|r| basis.iter().map(|v| v[r]).collect()).collect();
        let c = self.complement.len();
        let mut rows = Vec::with_capacity(u.dim());
        for v in u.basis() {
            let (x, _) = solve_affine(field, &a, v, basis.len()).expect("vector lies in the perpendicular");
            rows.push(x[..c].to_vec());
        }
        Ok(FqSubspace::span(field, c, &rows))
    }

    /// Preimage in `W^⊥` of a subspace of `W^⊥/W`.
    pub fn lift(&self, ubar: &FqSubspace) -> Result<FqSubspace> {
        let field = ubar.field();
        let w = self.w.base_change(field)?;
        let n = self.parent.dim();
        let mut rows: Vec<Vec<u32>> = w.basis().to_vec();
        for r in ubar.basis() {
            let mut v = vec![0u32; n];
            for (&coef, cvec) in r.iter().zip(&self.complement) {
                for (x, &y) in v.iter_mut().zip(cvec) {
                    *x = field.add(*x, field.mul(coef, y));
                }
            }
            rows.push(v);
        }
        Ok(FqSubspace::span(field, n, &rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::enumerate_subspaces;

    fn lagrangian_count(q: u64, m: u32) -> u64 {
        (1..=m).map(|i| q.pow(i) + 1).product()
    }

    #[test]
    fn standard_form_signs() {
        let s = SymplecticSpace::standard(5, 2).unwrap();
        assert_eq!(s.gram()[0][3], 1);
        assert_eq!(s.gram()[1][2], 1);
        assert_eq!(s.gram()[2][1], 4);
        assert_eq!(s.gram()[3][0], 4);
    }

    #[test]
    fn rejects_bad_forms() {
        assert!(SymplecticSpace::new(3, vec![vec![1, 0], vec![0, 0]]).is_err());
        assert_eq!(SymplecticSpace::new(3, vec![vec![0, 0], vec![0, 0]]).unwrap_err(), Error::Singular);
    }

    #[test]
    fn every_line_is_isotropic() {
        let s = SymplecticSpace::standard(3, 2).unwrap();
        assert_eq!(s.enumerate_isotropic(1, 1, 1 << 20).unwrap().len(), 40);
        let s = SymplecticSpace::standard(3, 1).unwrap();
        assert_eq!(s.lagrangians(1, 1 << 20).unwrap().len(), 4);
    }

    #[test]
    fn lagrangian_count_by_naive_filter() {
        for (p, k, m) in [(2, 1, 2), (3, 1, 2), (2, 2, 2), (3, 2, 1), (2, 1, 1)] {
            let s = SymplecticSpace::standard(p, m).unwrap();
            let f = s.field(k).unwrap();
            let naive = enumerate_subspaces(&f, 2 * m, m, 1 << 22)
                .unwrap()
                .into_iter()
                .filter(|u| s.is_isotropic(u))
                .collect::<Vec<_>>();
            let fast = s.enumerate_isotropic_in(&f, m, 1 << 22).unwrap();
            assert_eq!(fast, naive);
            assert_eq!(fast.len() as u64, lagrangian_count(f.order() as u64, m as u32));
        }
    }

    #[test]
    fn perp_of_lagrangian_is_itself() {
        let s = SymplecticSpace::standard(3, 2).unwrap();
        for u in s.lagrangians(1, 1 << 20).unwrap() {
            assert_eq!(s.perp(&u), u);
        }
        let f = s.field(1).unwrap();
        assert_eq!(s.perp(&FqSubspace::zero(&f, 4)), FqSubspace::whole(&f, 4));
    }

    #[test]
    fn quotient_by_rational_line() {
        let s = SymplecticSpace::standard(3, 2).unwrap();
        let f = s.field(1).unwrap();
        let w = FqSubspace::span(&f, 4, &[vec![1, 0, 0, 0]]);
        let q = s.quotient(&w).unwrap();
        assert_eq!(q.space().m(), 1);
        let through_w: Vec<_> = s.lagrangians(1, 1 << 20).unwrap().into_iter().filter(|u| u.contains(&w)).collect();
        assert_eq!(through_w.len(), 4);
        let mut images: Vec<_> = through_w.iter().map(|u| q.project(u).unwrap()).collect();
        images.sort();
        assert_eq!(images, q.space().lagrangians(1, 1 << 20).unwrap());
        for u in &through_w {
            assert_eq!(&q.lift(&q.project(u).unwrap()).unwrap(), u);
        }
    }

    #[test]
    fn quotient_by_zero_and_lagrangian() {
        let s = SymplecticSpace::standard(3, 1).unwrap();
        let f = s.field(1).unwrap();
        let q0 = s.quotient(&FqSubspace::zero(&f, 2)).unwrap();
        assert_eq!(q0.space(), &s);
        let l = FqSubspace::span(&f, 2, &[vec![1, 0]]);
        assert_eq!(s.quotient(&l).unwrap().space().dim(), 0);
        let f9 = s.field(2).unwrap();
        let irr = FqSubspace::span(&f9, 2, &[vec![1, f9.x()]]);
        assert_eq!(s.quotient(&irr).unwrap_err(), Error::NotRational);
    }
}
