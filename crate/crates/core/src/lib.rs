//! Exact arithmetic for hyperbolic planes over cyclic division algebras.
//!
//! The crate builds number-field towers, cyclic algebras with involutions and
//! the hermitian plane (D², h) with h = x₁ȳ₂ + x₂ȳ₁, then checks group
//! membership, isotropic completion, cusp classification by ideal classes,
//! local invariants of a degree-3 example, tube-domain actions and the
//! lattice structures of the associated moduli problem.

pub mod catalog;
pub mod cusps;
pub mod cycalg;
pub mod example7;
pub mod exactfield;
pub mod hermplane;
pub mod linalg;
pub mod moduli;
pub mod runner;
pub mod sampling;
pub mod tubedomain;
pub mod zlattice;
