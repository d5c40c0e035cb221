//! Finite fields `F_{p^k}`, subspaces of `F_q^n` in echelon form, and
//! alternating forms over `F_p` extended to `F_q`.

mod field;
mod subspace;
mod symplectic;

pub use field::FqField;
pub use subspace::{enumerate_subspaces, FqSubspace, SubspaceRecord};
pub use symplectic::{SymplecticQuotient, SymplecticSpace};

pub(crate) use subspace::{projective_points, solve_affine};
