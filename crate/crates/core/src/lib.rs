//! Genus-0 Gromov-Witten invariants of rational and ruled surfaces and their
//! blow-ups, the operator of quantum multiplication by the Euler field, its
//! characteristic polynomial, Newton polygons along rays, and the behaviour
//! of its spectrum in the large radius limit.

pub mod bounds;
pub mod charpoly;
pub mod dubrovin;
pub mod error;
pub mod gw;
pub mod rings;
pub mod spectrum;
pub mod surfaces;

pub use error::{QspecError, Result};
