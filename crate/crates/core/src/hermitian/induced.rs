use std::sync::Arc;

use super::HermitianLattice;
use crate::error::{Error, Result};
use crate::fq::{solve_affine, FqField, FqSubspace, SymplecticSpace};
use crate::oe::{inv_mod, pow_mod, OEElement};

/// `V = Λ/Λ^♯` for a vertex lattice `Λ`, with the alternating form
/// `⟨x̄, ȳ⟩ = p·β mod p` where `(x, y) = α + βπ`.
///
/// Vectors of `Λ/πΛ` are written in the Hermite basis of `Λ`. The radical
/// `Λ^♯/πΛ` is kept in echelon form; `V` is identified with the span of the
/// basis vectors at its non-pivot positions.
#[derive(Debug, Clone)]
pub struct LatticeQuotient {
    lattice: HermitianLattice,
    dual: HermitianLattice,
    radical: Vec<Vec<u32>>,
    radical_pivots: Vec<usize>,
    complement: Vec<usize>,
    space: SymplecticSpace,
    prime: Arc<FqField>,
}

/// The symplectic `F_p`-space `Λ/Λ^♯` attached to a vertex lattice.
pub fn induced_symplectic_space(lattice: &HermitianLattice) -> Result<LatticeQuotient> {
    LatticeQuotient::new(lattice)
}

impl LatticeQuotient {
    pub fn new(lattice: &HermitianLattice) -> Result<Self> {
        let dual = lattice.dual()?;
        let t = lattice.vertex_type_with_dual(&dual)?;
        let params = *lattice.space().params();
        let p = params.p();
        let n = lattice.dim();
        let s = lattice.scale();
        let prime = Arc::new(FqField::new(p, 1)?);

        // For basis vectors x = π^{-s}h_i, y = π^{-s}h_j:
        // (x, y) = (−1)^s (εp)^{-s} (h_i, h_j), so p·β = (−1)^s ε^{-s} p^{1−s} b
        // with b the π-coefficient of (h_i, h_j).
        let gram = lattice.basis_gram();
        let eps_inv = inv_mod(params.epsilon() % p, p).expect("ε is a unit");
        let mut unit = pow_mod(eps_inv, s.unsigned_abs(), p);
        if s < 0 {
            unit = pow_mod(params.epsilon() % p, s.unsigned_abs(), p);
        }
        if s.rem_euclid(2) == 1 {
            unit = (p - unit) % p;
        }
        let q: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| reduced_pi_coefficient(gram[(i, j)], s, unit, p))
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<_>>()?;

        let zero = vec![0; n];
        let (_, kernel) = solve_affine(&prime, &q, &zero, n).expect("homogeneous systems are consistent");
        let radical = FqSubspace::span(&prime, n, &kernel);
        if n - radical.dim() != t {
            return Err(Error::PrecisionExhausted(format!(
                "radical of the reduced form has dimension {}, expected {}",
                radical.dim(),
                n - t
            )));
        }
        let radical_pivots = radical.pivots();
        let complement: Vec<usize> = (0..n).filter(|c| !radical_pivots.contains(c)).collect();
        let vgram = complement.iter().map(|&a| complement.iter().map(|&b| q[a][b]).collect()).collect();
        let space = SymplecticSpace::new(p as u32, vgram)?;
        Ok(LatticeQuotient {
            lattice: lattice.clone(),
            dual,
            radical: radical.basis().to_vec(),
            radical_pivots,
            complement,
            space,
            prime,
        })
    }

    pub fn lattice(&self) -> &HermitianLattice {
        &self.lattice
    }

    pub fn dual(&self) -> &HermitianLattice {
        &self.dual
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn vertex_type(&self) -> usize {
        self.complement.len()
    }

    /// Image in `V` of a vector of `Λ/πΛ` given in Hermite coordinates.
    pub fn reduce(&self, coords: &[u32]) -> Vec<u32> {
        let f = &self.prime;
        let mut c = coords.to_vec();
        for (row, &piv) in self.radical.iter().zip(&self.radical_pivots) {
            let x = f.neg(c[piv]);
            if x == 0 {
                continue;
            }
            for (ci, &r) in c.iter_mut().zip(row) {
                *ci = f.add(*ci, f.mul(x, r));
            }
        }
        self.complement.iter().map(|&j| c[j]).collect()
    }

    /// A lift to `Λ` of a vector of `V`, as generators at the scale of `Λ`.
    pub fn section(&self, v: &[u32]) -> Vec<OEElement> {
        let mut coeffs = vec![0u64; self.lattice.dim()];
        for (&j, &x) in self.complement.iter().zip(v) {
            coeffs[j] = x as u64;
        }
        self.lattice.combination(&coeffs)
    }

    /// Preimage in `Λ` of a rational subspace of `V`.
    pub fn preimage(&self, t: &FqSubspace) -> Result<HermitianLattice> {
        if !t.is_rational() {
            return Err(Error::NotRational);
        }
        if t.ambient() != self.vertex_type() {
            return Err(Error::InvalidParams("subspace does not live in the induced space".into()));
        }
        let lifts: Vec<Vec<OEElement>> = t.basis().iter().map(|v| self.section(v)).collect();
        self.dual.extend(&lifts, self.lattice.scale())
    }

    /// Image in `V` of a lattice `M` with `Λ^♯ ⊆ M ⊆ Λ`.
    pub fn image(&self, m: &HermitianLattice) -> Result<FqSubspace> {
        if !self.lattice.contains(m)? || !m.contains(&self.dual)? {
            return Err(Error::InvalidParams("lattice is not between the dual and the lattice".into()));
        }
        let params = *self.lattice.space().params();
        let shift = OEElement::pi_pow(&params, (self.lattice.scale() - m.scale()) as u32);
        let mut rows = Vec::with_capacity(m.dim());
        for j in 0..m.dim() {
            let y: Vec<OEElement> = m.basis_vector(j).into_iter().map(|x| x * shift).collect();
            let c = self.lattice.coordinates(&y)?;
            let residues: Vec<u32> = c.iter().map(|x| x.residue() as u32).collect();
            rows.push(self.reduce(&residues));
        }
        Ok(FqSubspace::span(&self.prime, self.vertex_type(), &rows))
    }
}

fn reduced_pi_coefficient(x: OEElement, s: i64, unit: u64, p: u64) -> Result<u32> {
    if s <= 0 {
        return Ok(0);
    }
    let e = (s - 1) as u32;
    let pe = p.pow(e);
    if x.precision() < 2 * e + 2 {
        return Err(Error::PrecisionExhausted("pairing needs more digits than are known".into()));
    }
    let b = x.b();
    if !b.is_multiple_of(pe) {
        return Err(Error::InvalidParams("lattice pairing is not integral after scaling".into()));
    }
    Ok((((b / pe) % p) * unit % p) as u32)
}
