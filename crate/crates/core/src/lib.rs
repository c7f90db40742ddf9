//! Exact arithmetic toolkit for positive definite quadratic forms.
//!
//! Forms are symmetric matrices over arbitrary-precision rationals. The crate
//! computes arithmetical minima and minimal vectors, LLL and HKZ reductions
//! with recorded unimodular transforms, Voronoi domains and perfection
//! certificates, contiguous perfect forms (Voronoi's algorithm in low
//! dimension) and high-precision evaluations of the volumetric bounds on the
//! number of perfect forms.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line tool live in the companion `perfect-forms` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bounds;
pub mod catalog;
pub mod cone;
pub mod enumeration;
pub mod error;
pub mod form;
pub mod linalg;
pub mod perfection;
pub mod reduction;
pub mod sqrt2;
pub mod walk;

pub use enumeration::{arithmetical_minimum, successive_minima, vectors_below, MinimalVectorSet, SuccessiveMinima};
pub use error::{Error, Result};
pub use form::{IntVector, QuadForm, Rational, UnimodularMatrix, VectorizedForm};
pub use perfection::{IntegralSystem, PerfectionCertificate, VoronoiDomain};
pub use reduction::ReductionResult;
pub use sqrt2::QSqrt2;
pub use walk::{PerfectFormClass, WalkFrontier};
