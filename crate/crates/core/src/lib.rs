//! Numerical toolkit for desk-scale verification of Pleijel-type nodal
//! bounds for radial Schrodinger operators -Delta + v(r) on R^d.
//!
//! The crate is organized bottom-up:
//!
//! * [`constants`]: gamma function, Bessel J and its first zeros, the
//!   dimensional constant pack (ball volumes, Weyl constants, the Pleijel
//!   ratio bound gamma(d), spherical-harmonic multiplicities).
//! * [`quadrature`]: adaptive Gauss-Kronrod integration.
//! * [`potential`]: the radial potential family (harmonic, coulomb, and a
//!   two-term power class), growth classification and derived radii.
//! * [`radial`]: 1-D eigensolvers for the reduced operators, one scheme per
//!   growth class, with Sturm-count bisection and Richardson refinement.
//! * [`spectrum`]: assembly of the full d-dimensional spectrum from the
//!   radial ladders, degeneracy clustering, counting, Courant labels.
//! * [`weyl`]: phase-space volume, closed forms, and count/volume ratios.
//! * [`nodal`]: nodal-domain counts for separable eigenfunctions, annulus
//!   partitions with Faber-Krahn style bounds, inner-region estimates, and
//!   a grid flood-fill oracle.

pub mod constants;
pub mod error;
pub mod nodal;
pub mod potential;
pub mod quadrature;
pub mod radial;
pub mod spectrum;
pub mod weyl;

pub use error::{Error, Result};
