//! Weyl-Wigner calculus on finite phase spaces with twisted group algebras.

pub mod anglenum;
pub mod cocycle;
pub mod error;
pub mod fourier;
pub mod gaussian;
pub mod group;
pub mod linalg;
pub mod modmat;
pub mod phase;
pub mod positivity;
pub mod random;
pub mod symmetry;
pub mod weyl;

pub use cocycle::{Cocycle, CocycleKind, NormalizationXi, TabulatedCocycle, TwoCocycle};
pub use error::{Error, Result};
pub use group::{EpsTable, GroupElement, GroupSpec, HaarMeasure};
pub use modmat::ModMatrix;
pub use phase::RootOfUnity;
pub use weyl::WeylSystem;
pub use fourier::{PhaseFunction, StateMatrix};
