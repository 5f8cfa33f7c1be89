//! Pseudospectral dynamics of a closed inextensible elastic loop.
//!
//! The tangent field `u(s, t)` of an arclength-parametrized loop obeys a
//! constrained fourth-order wave equation. This crate evolves it two ways:
//! directly in `(u, ∂t u)` with an explicit scheme, and through a Hasimoto
//! change of variables to complex fields `(P, Q)` plus a scalar monodromy `β`,
//! where the stiff linear part is propagated exactly mode by mode and the
//! nonlinearity is handled by Picard iteration on the Duhamel integral.

pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod hasimoto;
pub mod output;
pub mod scenario;
pub mod spectral;
pub mod tension;
pub mod vec3;
pub mod verify;

pub use error::{ElasticaError, Result};
pub use spectral::{PeriodicField, SobolevIndex};
