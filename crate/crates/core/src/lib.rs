//! Exact local Delaunay and Voronoi geometry of lattices given by a positive
//! definite Gram matrix, with laminae, rank-1 extensions and the secondary
//! cone of the L-type on top.
//!
//! All arithmetic is over the rationals.

pub mod audit;
pub mod cli;
pub mod cone;
pub mod cosets;
pub mod dd;
pub mod delaunay;
pub mod enumerate;
pub mod error;
pub mod form;
pub mod forms;
pub mod lamina;
pub mod lifting;
pub mod linalg;
pub mod rational;
pub mod voronoi;

pub use error::{Error, Result};
pub use form::GramForm;
pub use rational::{IntVector, RatMatrix, RatVector, Rational};
