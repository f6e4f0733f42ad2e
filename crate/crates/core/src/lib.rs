//! Electromagnetic modes of a perfectly conducting circular cylindrical
//! cavity: Bessel zeros, mode spectrum, vector mode functions, numerical
//! certification of their properties, and classical field synthesis.

pub mod bessel;
pub mod cli;
pub mod error;
pub mod modefield;
pub mod quadrature;
pub mod spectrum;
pub mod statefile;
pub mod synthesis;
pub mod verify;

pub use error::{CavityError, Result};
pub use modefield::{CylPoint, CylVector};
pub use spectrum::{CavityGeometry, ModeData, ModeIndex, PhysicalConstants, Polarization};
pub use synthesis::FieldState;
