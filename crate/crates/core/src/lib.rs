//! Exact lattice and flag models for the unitary Rapoport-Zink space of
//! signature `(2, n-2)` at an inert prime.
//!
//! The crate enumerates the point sets of the space and of its auxiliary
//! Deligne-Lusztig varieties over truncated Witt rings and finite fields, and
//! cross-checks the bijections between them.

pub mod cli;
pub mod coeff;
pub mod error;
pub mod field;
pub mod hermitian;
pub mod lattice;
pub mod moduli;
pub mod subspace;
pub mod verify;

pub use coeff::{make_ring, CoeffRing, RingElem, RingParams};
pub use error::{Error, Result};
pub use hermitian::HermitianSpace;
pub use lattice::{InvVector, Lattice};
pub use subspace::Subspace;
