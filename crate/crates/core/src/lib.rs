//! Gaussian-state model of squeezed light propagating through evanescently
//! coupled waveguide dimers and trimers.

pub mod channels;
pub mod coeffs;
pub mod error;
pub mod fock;
pub mod entangle;
pub mod gaussian;
pub mod wigner;

pub use coeffs::{CouplerSpec, SqueezeParam, TrimerCouplerSpec};
pub use error::{Error, Result};
pub use gaussian::{Component, GaussianState, QuadratureSpec, Symplectic};
