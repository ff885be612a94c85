//! Numerical laboratory for Pleijel-type nodal domain bounds.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`] rasterizes planar domains and measures them (area, inradius,
//!   equal-area radius, smallest bounded hole).
//! * [`spectral`] assembles the 5-point Dirichlet Laplacian, computes its
//!   smallest eigenpairs and carries closed-form oracles (rectangle spectrum,
//!   `J0` and its first zero).
//! * [`nodal`] splits eigenfunctions into nodal domains and builds `N/n`
//!   sequences.
//! * [`pleijel`] holds the quantitative Faber-Krahn bound, the four-class
//!   partition of nodal domains, the aggregated inequality and the
//!   optimisation of the gain over the classical constant `(2/j)^2`.
//! * [`packing`] verifies disc packings on a torus or inside a domain and
//!   checks the radius-ratio density criterion.
//!
//! The guide under `book/` walks through the same material; its code
//! listings are compiled and run as doctests of this crate.

pub mod error;
pub mod format;
pub mod geometry;
pub mod nodal;
pub mod packing;
pub mod pleijel;
pub mod spectral;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub struct Readme;
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/domains.md")]
    pub struct Domains;
    #[doc = include_str!("../../../book/src/spectrum.md")]
    pub struct Spectrum;
    #[doc = include_str!("../../../book/src/nodal.md")]
    pub struct Nodal;
    #[doc = include_str!("../../../book/src/faber_krahn.md")]
    pub struct FaberKrahn;
    #[doc = include_str!("../../../book/src/classes.md")]
    pub struct Classes;
    #[doc = include_str!("../../../book/src/packing.md")]
    pub struct Packing;
    #[doc = include_str!("../../../book/src/gain.md")]
    pub struct Gain;
}
