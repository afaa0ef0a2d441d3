//! Spectra of the Laplacian on spherical domains built as joins of simple
//! factors, with heat-kernel asymptotics and scaling estimates for domains
//! whose spectrum is not known in closed form.

pub mod domain;
pub mod error;
pub mod geometry;
pub mod heat_kernel;
pub mod reproduction;
pub mod scaling;
pub mod special;
pub mod spectral;
pub mod verify;

pub use domain::{parse_domain, BoundaryCondition, DomainCapabilities, DomainExpr, NamedDomain};
pub use error::{Error, ParseError, Result};
