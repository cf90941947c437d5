//! Energies, designs, exact verification and Hessian analysis for 24-point
//! codes on S³, centred on the 24-cell and its deformations.

pub mod constructions;
pub mod designs;
pub mod dynamics;
pub mod energy;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod linalg;
pub mod par;
pub mod potentials;

pub use error::{Error, Result};
pub use geometry::{Code, UnitVec4};
pub use potentials::Potential;
