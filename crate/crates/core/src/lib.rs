//! Exact construction and verification of T-complexes of representable
//! matroids and of T-resolutions of multigraded presentations.

pub mod checks;
pub mod cli;
pub mod error;
pub mod field;
pub mod io;
pub mod linalg;
pub mod matroid;
pub mod multigraded;
pub mod multiplicity;
pub mod par;
pub mod report;
pub mod sym;
pub mod tcomplex;

pub use error::{Error, Result};
pub use field::{Field, FieldChoice, PrimeField, Rationals};
pub use linalg::{Matrix, Subspace};
pub use matroid::{ElementSet, Representation, TFlatRecord, TFlats};
