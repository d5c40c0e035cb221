//! Vertex lattices in a hermitian space over a ramified quadratic extension
//! of `Q_p`, the complexes they form, and the Deligne-Lusztig strata of the
//! finite symplectic spaces attached to them.
//!
//! Layers, bottom up: [`oe`] (the ring `O_E = Z_p[π]`), [`hermitian`]
//! (spaces and lattices), [`complex`] (neighbours and balls), [`fq`] (finite
//! fields and symplectic linear algebra), [`strata`] (point censuses,
//! resolution and the Weyl group), and [`verify`] (acceptance checks).

#![allow(clippy::needless_range_loop)]

pub mod complex;
pub mod error;
pub mod fq;
pub mod hermitian;
pub mod oe;
pub mod strata;
pub mod verify;

pub use error::{Error, Result};
