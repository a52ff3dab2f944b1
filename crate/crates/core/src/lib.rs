//! Direction-space stratification for planar simplicial complexes.
//!
//! Lower-star persistence and Euler characteristic descriptors of a complex
//! change only when the sweep direction crosses a normal of some vertex
//! difference vector. This crate computes those normals, the cells between
//! them, which vertices each direction "observes", and whether a finite
//! direction set is rich enough to tell complexes apart.

pub mod cli;
pub mod complex;
pub mod constructions;
pub mod descriptors;
pub mod error;
pub mod geometry;
pub mod ingest;
pub mod sampling;
pub mod stratification;

pub use complex::SimplicialComplex2D;
pub use error::{Error, Result};
pub use geometry::{Arc, ArcSet, Direction, Point2};
