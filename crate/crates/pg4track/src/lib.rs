//! Tracks (4-general sets) in PG(4, q): sets of projective points with no
//! four on a common plane.
//!
//! The crate builds the 2q+1-point track N ∪ V — the normal rational curve
//! together with its derivative curve — over any prime field in which 3 is
//! not a square, certifies the track property and completeness by exhaustive
//! search, produces constructive cover certificates for affine points, and
//! analyzes the almost-MDS code whose parity-check columns are the track
//! points. All arithmetic is exact.

pub mod codes;
pub mod construct;
pub mod coverproof;
mod error;
pub mod gfield;
pub mod projgeom;
pub mod verify;

pub use error::{Error, Result};
pub use gfield::{admissible_moduli, Poly, PrimeField};
pub use projgeom::{PointSet, PointSetFile, ProjPoint};
