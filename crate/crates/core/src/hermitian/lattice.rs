use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::HermitianSpace;
use crate::error::{Error, Result, VertexFailure};
use crate::oe::normal_form::column_hermite;
use crate::oe::{hermite_canonical, smith_normal_form, OEElement, OEMatrix};

/// The `O_E`-lattice `π^{-scale} · colspan(basis)` in a hermitian space.
///
/// `basis` is always in column Hermite form and not divisible by `π`, so two
/// lattices are equal exactly when their `(scale, basis)` pairs are.
#[derive(Clone)]
pub struct HermitianLattice {
    space: Arc<HermitianSpace>,
    basis: OEMatrix,
    scale: i64,
}

impl PartialEq for HermitianLattice {
    fn eq(&self, other: &Self) -> bool {
        self.scale == other.scale && self.basis == other.basis
    }
}

impl Eq for HermitianLattice {}

impl std::hash::Hash for HermitianLattice {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.scale.hash(state);
        self.basis.hash(state);
    }
}

impl PartialOrd for HermitianLattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HermitianLattice {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.scale, &self.basis).cmp(&(other.scale, &other.basis))
    }
}

impl fmt::Debug for HermitianLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "π^{}·\n{}", -self.scale, self.basis)
    }
}

impl HermitianLattice {
    /// Lattice spanned by the columns of `generators`, scaled by `π^{-scale}`.
    pub fn from_generators(space: &Arc<HermitianSpace>, generators: &OEMatrix, scale: i64) -> Result<Self> {
        if generators.rows() != space.dim() {
            return Err(Error::InvalidParams("generator rows must equal the space dimension".into()));
        }
        let (basis, scale) = hermite_canonical(generators, scale)?;
        Ok(HermitianLattice { space: Arc::clone(space), basis, scale })
    }

    /// `O_E^n` in the coordinates of the space.
    pub fn standard(space: &Arc<HermitianSpace>) -> Self {
        HermitianLattice {
            space: Arc::clone(space),
            basis: OEMatrix::identity(space.params(), space.dim()),
            scale: 0,
        }
    }

    pub fn space(&self) -> &Arc<HermitianSpace> {
        &self.space
    }

    pub fn basis(&self) -> &OEMatrix {
        &self.basis
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Exponents of the Hermite pivots.
    pub fn pivot_exponents(&self) -> Vec<u32> {
        (0..self.dim())
            .map(|i| self.basis[(i, i)].valuation().expect("Hermite pivots are nonzero"))
            .collect()
    }

    /// `Σ e_i − n·scale`: the length of `O_E^n / Λ` when `Λ ⊆ O_E^n`, extended
    /// additively to all lattices.
    pub fn volume(&self) -> i64 {
        self.pivot_exponents().iter().map(|&e| e as i64).sum::<i64>() - self.dim() as i64 * self.scale
    }

    /// Basis of `π^{s-scale}Λ`, i.e. `Λ` written with denominator `π^{-s}`.
    fn basis_at_scale(&self, s: i64) -> OEMatrix {
        debug_assert!(s >= self.scale);
        self.basis.scale(OEElement::pi_pow(self.space.params(), (s - self.scale) as u32))
    }

    /// `π^k · Λ`; `k` may be negative.
    pub fn pi_multiple(&self, k: i64) -> Self {
        HermitianLattice { space: Arc::clone(&self.space), basis: self.basis.clone(), scale: self.scale - k }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        let s = self.scale.max(other.scale);
        let gens = self.basis_at_scale(s).hstack(&other.basis_at_scale(s));
        Self::from_generators(&self.space, &gens, s)
    }

    /// `Λ₁ ∩ Λ₂` by column echelon reduction of `[[B₁, 0], [B₁, B₂]]`: the
    /// columns whose lower half vanishes span the intersection.
    pub fn intersection(&self, other: &Self) -> Result<Self> {
        let s = self.scale.max(other.scale);
        let params = *self.space.params();
        let n = self.dim();
        let b1 = self.basis_at_scale(s);
        let b2 = other.basis_at_scale(s);
        let stacked = OEMatrix::from_fn(&params, 2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => b1[(i, j)],
            (true, false) => OEElement::zero(&params),
            (false, true) => b1[(i - n, j)],
            (false, false) => b2[(i - n, j - n)],
        });
        let (h, _) = column_hermite(&stacked)?;
        let top = OEMatrix::from_fn(&params, n, n, |i, j| h[(i, j)]);
        Self::from_generators(&self.space, &top, s)
    }

    pub fn contains(&self, other: &Self) -> Result<bool> {
        Ok(self.sum(other)? == *self)
    }

    /// `Λ^♯ = {x ∈ C | (x, Λ) ⊆ O_E}`.
    ///
    /// With `Λ = π^{-s} H O^n` the condition reads `A x ∈ π^s O^n` for
    /// `A = H̄ᵀ Gᵀ`; a Smith form `U A V = D` gives
    /// `A^{-1} O^n = V D^{-1} O^n`.
    pub fn dual(&self) -> Result<Self> {
        let params = *self.space.params();
        let a = self.basis.conj().transpose().mul(&self.space.gram().transpose());
        let smith = smith_normal_form(&a)?;
        let k = *smith.exponents.iter().max().unwrap_or(&0);
        let mut gens = smith.v.clone();
        for (j, &e) in smith.exponents.iter().enumerate() {
            gens.scale_col(j, OEElement::pi_pow(&params, k - e));
        }
        Self::from_generators(&self.space, &gens, k as i64 - self.scale)
    }

    /// Signed index `[L : M] = [L : L∩M] − [M : L∩M]`.
    pub fn index(&self, other: &Self) -> Result<i64> {
        let meet = self.intersection(other)?;
        Ok((meet.volume() - self.volume()) - (meet.volume() - other.volume()))
    }

    /// `t(Λ) = dim_{F_p} Λ/Λ^♯` if `πΛ ⊆ Λ^♯ ⊆ Λ`.
    pub fn vertex_type(&self) -> Result<usize> {
        let dual = self.dual()?;
        self.vertex_type_with_dual(&dual)
    }

    pub(crate) fn vertex_type_with_dual(&self, dual: &Self) -> Result<usize> {
        if !self.contains(dual)? {
            return Err(Error::NotVertex(VertexFailure::DualNotContained));
        }
        if !dual.contains(&self.pi_multiple(1))? {
            return Err(Error::NotVertex(VertexFailure::PiMultipleNotInDual));
        }
        Ok((dual.volume() - self.volume()) as usize)
    }

    pub fn is_vertex(&self) -> Result<bool> {
        match self.vertex_type() {
            Ok(_) => Ok(true),
            Err(Error::NotVertex(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// `Λ₁^♯ ⊆ Λ₂`, which for vertex lattices holds iff `Λ₁ ∩ Λ₂` is a vertex
    /// lattice.
    pub fn is_vertex_intersection(&self, other: &Self) -> Result<bool> {
        other.contains(&self.dual()?)
    }

    /// Column `j` of the basis of `π^{scale} Λ`, i.e. the `j`-th basis vector
    /// of `Λ` multiplied by `π^{scale}`.
    pub fn basis_vector(&self, j: usize) -> Vec<OEElement> {
        self.basis.column(j)
    }

    /// `(h_i, h_j)` for the columns of the stored basis (without the
    /// `π^{-scale}` factor).
    pub fn basis_gram(&self) -> OEMatrix {
        self.basis.transpose().mul(self.space.gram()).mul(&self.basis.conj())
    }

    /// Coordinates of `π^{-scale}·y` in the lattice basis, i.e. `c` with
    /// `H c = y`. Fails when `y` does not lie in `π^{scale}Λ`.
    pub fn coordinates(&self, y: &[OEElement]) -> Result<Vec<OEElement>> {
        let n = self.dim();
        let exps = self.pivot_exponents();
        let mut rest = y.to_vec();
        let mut c = vec![OEElement::zero(self.space.params()); n];
        for i in (0..n).rev() {
            let ci = rest[i].div_pi_pow(exps[i]).map_err(|_| Error::InvalidParams("vector not in lattice".into()))?;
            for (r, v) in rest.iter_mut().enumerate().take(i + 1) {
                *v = *v - self.basis[(r, i)] * ci;
            }
            c[i] = ci;
        }
        Ok(c)
    }

    /// `π^{-scale} Σ c_j h_j` for small integer coefficients, returned as
    /// generators at this lattice's scale.
    pub fn combination(&self, coeffs: &[u64]) -> Vec<OEElement> {
        let params = *self.space.params();
        let n = self.dim();
        let mut v = vec![OEElement::zero(&params); n];
        for (j, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = OEElement::from_int(&params, c as i64);
            for (i, vi) in v.iter_mut().enumerate() {
                *vi = *vi + self.basis[(i, j)] * c;
            }
        }
        v
    }

    /// `Λ + Σ O_E·v` for vectors given at scale `scale`.
    pub fn extend(&self, vectors: &[Vec<OEElement>], scale: i64) -> Result<Self> {
        let s = self.scale.max(scale);
        let params = *self.space.params();
        let shift = OEElement::pi_pow(&params, (s - scale) as u32);
        let extra = OEMatrix::from_fn(&params, self.dim(), vectors.len(), |i, j| vectors[j][i] * shift);
        Self::from_generators(&self.space, &self.basis_at_scale(s).hstack(&extra), s)
    }

    pub fn to_record(&self) -> LatticeRecord {
        LatticeRecord {
            scale: self.scale,
            basis: (0..self.dim()).map(|i| self.basis.row(i).iter().map(|x| x.to_string()).collect()).collect(),
        }
    }

    pub fn from_record(space: &Arc<HermitianSpace>, rec: &LatticeRecord) -> Result<Self> {
        let eps = space.params().epsilon() as i64;
        let n = space.dim();
        if rec.basis.len() != n || rec.basis.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("lattice basis shape does not match the space".into()));
        }
        let mut m = OEMatrix::zeros(space.params(), n, n);
        for (i, row) in rec.basis.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                let x = OEElement::parse(s, eps)?;
                if x.params() != space.params() {
                    return Err(Error::Parse("lattice entries use different field parameters".into()));
                }
                m[(i, j)] = x;
            }
        }
        Self::from_generators(space, &m, rec.scale)
    }
}

/// JSON form `{scale, basis}` with the basis given row by row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeRecord {
    pub scale: i64,
    pub basis: Vec<Vec<String>>,
}

/// The standard vertex lattice of type `t`: spanned by `π^{-1}e_i` for odd
/// `i ≤ t` and by `e_j` for the remaining indices.
pub fn standard_vertex_lattice(space: &Arc<HermitianSpace>, t: usize) -> Result<HermitianLattice> {
    let variant = space.variant().ok_or(Error::NotStandard)?;
    let n = space.dim();
    let max = variant.max_type(n);
    if t % 2 == 1 || t > max {
        return Err(Error::TypeUnavailable { t, max });
    }
    let params = *space.params();
    let gens = OEMatrix::from_fn(&params, n, n, |i, j| {
        if i != j {
            OEElement::zero(&params)
        } else if i % 2 == 0 && i < t {
            OEElement::one(&params)
        } else {
            OEElement::pi(&params)
        }
    });
    HermitianLattice::from_generators(space, &gens, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{standard_space, Variant};
    use crate::oe::FieldParams;

    fn space(n: usize, v: Variant) -> Arc<HermitianSpace> {
        standard_space(n, v, &FieldParams::with_prime(3).unwrap()).unwrap().into_arc()
    }

    #[test]
    fn self_dual_standard_lattice() {
        let s = space(2, Variant::SplitEven);
        let l = HermitianLattice::standard(&s);
        assert_eq!(l.dual().unwrap(), l);
        assert_eq!(l.vertex_type().unwrap(), 0);
        assert_eq!(standard_vertex_lattice(&s, 0).unwrap(), l);
    }

    #[test]
    fn dual_of_type_two_lattice_is_pi_multiple() {
        let s = space(2, Variant::SplitEven);
        let l = standard_vertex_lattice(&s, 2).unwrap();
        let p = *s.params();
        let expected = OEMatrix::from_pairs(&p, &[vec![(1, 0), (0, 0)], vec![(0, 0), (0, 1)]]);
        assert_eq!(l, HermitianLattice::from_generators(&s, &expected, 1).unwrap());
        let d = l.dual().unwrap();
        let e1_pie2 = OEMatrix::from_pairs(&p, &[vec![(1, 0), (0, 0)], vec![(0, 0), (0, 1)]]);
        assert_eq!(d, HermitianLattice::from_generators(&s, &e1_pie2, 0).unwrap());
        assert_eq!(d, l.pi_multiple(1));
        assert_eq!(l.vertex_type().unwrap(), 2);
    }

    #[test]
    fn dual_of_pi_multiple() {
        let s = space(3, Variant::Odd);
        let l = standard_vertex_lattice(&s, 2).unwrap();
        assert_eq!(l.pi_multiple(1).dual().unwrap(), l.dual().unwrap().pi_multiple(-1));
    }

    #[test]
    fn index_examples() {
        let s = space(4, Variant::SplitEven);
        let l = standard_vertex_lattice(&s, 4).unwrap();
        assert_eq!(l.index(&l).unwrap(), 0);
        assert_eq!(l.index(&l.dual().unwrap()).unwrap(), 4);
        assert_eq!(l.index(&l.pi_multiple(1)).unwrap(), 4);
    }

    #[test]
    fn standard_types() {
        for (n, v) in [(2, Variant::SplitEven), (4, Variant::SplitEven), (4, Variant::NonSplitEven), (3, Variant::Odd), (5, Variant::Odd)] {
            let s = space(n, v);
            for t in (0..=v.max_type(n)).step_by(2) {
                assert_eq!(standard_vertex_lattice(&s, t).unwrap().vertex_type().unwrap(), t, "n={n} {v} t={t}");
            }
        }
        let s = space(2, Variant::NonSplitEven);
        assert_eq!(standard_vertex_lattice(&s, 2).unwrap_err(), Error::TypeUnavailable { t: 2, max: 0 });
    }

    #[test]
    fn scaled_self_dual_is_not_vertex() {
        let s = space(2, Variant::SplitEven);
        let l = HermitianLattice::standard(&s).pi_multiple(-1);
        assert_eq!(l.vertex_type().unwrap_err(), Error::NotVertex(VertexFailure::PiMultipleNotInDual));
        let small = HermitianLattice::standard(&s).pi_multiple(1);
        assert_eq!(small.vertex_type().unwrap_err(), Error::NotVertex(VertexFailure::DualNotContained));
    }

    #[test]
    fn intersection_with_itself_and_containment() {
        let s = space(3, Variant::Odd);
        let l = standard_vertex_lattice(&s, 2).unwrap();
        let l0 = HermitianLattice::standard(&s);
        assert_eq!(l.intersection(&l).unwrap(), l);
        assert_eq!(l.intersection(&l0).unwrap(), l0);
        assert!(l.contains(&l0).unwrap());
        assert!(!l0.contains(&l).unwrap());
        assert!(l.is_vertex_intersection(&l0).unwrap());
    }

    #[test]
    fn coordinates_invert_combination() {
        let s = space(3, Variant::Odd);
        let l = standard_vertex_lattice(&s, 2).unwrap();
        let v = l.combination(&[1, 2, 0]);
        let c = l.coordinates(&v).unwrap();
        let residues: Vec<u64> = c.iter().map(|x| x.residue()).collect();
        assert_eq!(residues, vec![1, 2, 0]);
    }

    #[test]
    fn lattice_record_round_trips() {
        let s = space(4, Variant::NonSplitEven);
        let l = standard_vertex_lattice(&s, 2).unwrap().dual().unwrap();
        let json = serde_json::to_string(&l.to_record()).unwrap();
        let rec: LatticeRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(HermitianLattice::from_record(&s, &rec).unwrap(), l);
    }
}
