//! Open book monodromies on surfaces with boundary.
//!
//! The crate evaluates Dehn-twist words to exact mapping classes, computes the
//! first homology of the closed 3-manifold an open book describes, compiles
//! transverse surgeries into new monodromy words and searches for positive
//! factorisations over a finite curve alphabet.

mod builtin;
pub mod error;
pub mod factorsearch;
pub mod freegroup;
pub mod homology;
pub mod kirby;
pub mod matrix;
pub mod mcg;
pub mod surface;
pub mod surgery;

pub use error::{Error, Result};
pub use freegroup::{FreeAutomorphism, FreeWord};
pub use matrix::IntMatrix;
pub use surface::{CurveConfig, Relations, Stabilization, Surface, SurfaceSpec, ValidationReport};
pub use homology::{AbelianGroup, LinearTwistData};
pub use mcg::{evaluate, equal_classes, LetterWord, MappingClass, TwistWord};
pub use surgery::{NegCF, OpenBook, Rational};
