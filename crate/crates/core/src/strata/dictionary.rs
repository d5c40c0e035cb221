use super::{in_s, t_chain};
use crate::error::{Error, Result};
use crate::fq::FqSubspace;
use crate::hermitian::{HermitianLattice, LatticeQuotient};

/// The smallest vertex lattice attached to a point `U` of `S` for the
/// induced space of `Λ`: the preimage of the rational subspace `T_d(U)`.
pub fn minimal_vertex_of_point(quotient: &LatticeQuotient, u: &FqSubspace) -> Result<HermitianLattice> {
    let space = quotient.space();
    if u.ambient() != space.dim() {
        return Err(Error::InvalidParams("point does not live in the induced space".into()));
    }
    if !in_s(space, u)? {
        return Err(Error::InvalidParams("point does not lie on S".into()));
    }
    let chain = t_chain(space, u)?;
    let prime = space.field(1)?;
    quotient.preimage(&chain.top().base_change(&prime)?)
}
