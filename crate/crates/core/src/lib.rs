//! Dynamical zeta functions of 3-dimensional foliated dynamical systems.
//!
//! This crate evaluates both sides of the regularized determinant identity
//!
//! ```text
//! ζ(s) = ∏_{n=0}^{2} det_∞( s·id − Θ | H̄ⁿ )^{(−1)^{n+1}}
//! ```
//!
//! for two concrete families of systems:
//!
//! * suspensions of hyperbolic toral automorphisms (closed orbits enumerated by
//!   Möbius inversion of fixed-point counts, spectra given by arithmetic ladders
//!   `log α + 2πiν`), and
//! * Morse-gradient suspensions over higher-genus surfaces (finitely many closed
//!   orbits of length one, indices determined by the Morse index).
//!
//! The left side is an Euler product over closed orbits ([`zeta`]); the right
//! side is assembled from zeta-regularized infinite products over ladder spectra
//! ([`regdet`]).  The bridge between them (spectral ξ-functions, the orbit
//! measure pairings, and the Hankel-contour representation of the alternating
//! ξ-sum) lives in [`trace`] and [`contour`], with truncation bounds carried
//! through every evaluation.
//!
//! ```
//! use num_complex::Complex64;
//! use zetalab_core::orbit_models::{toral_ensemble, ToralModel};
//! use zetalab_core::regdet::{assemble_determinant_formula, toral_spectrum};
//! use zetalab_core::zeta::{euler_product, toral_zeta_closed, Variant};
//!
//! let model = ToralModel::new(2, 1, 1, 1)?;
//! let s = Complex64::new(2.0, 0.0);
//!
//! // Orbit side: Euler product over primitive closed orbits up to period 25.
//! let ensemble = toral_ensemble(&model, 25)?;
//! let product = euler_product(&ensemble, s, Variant::Signed)?;
//!
//! // Spectral side: regularized determinants over the graded ladder spectrum.
//! let spectrum = toral_spectrum(&model)?;
//! let determinant = assemble_determinant_formula(&spectrum, s)?;
//!
//! let closed = toral_zeta_closed(&model, s)?;
//! assert!((product.value - closed).norm() <= product.error_bound);
//! assert!((determinant - closed).norm() <= 1e-12 * closed.norm());
//! # Ok::<(), zetalab_core::Error>(())
//! ```

pub mod contour;
pub mod error;
pub mod eval;
pub mod lefschetz;
pub mod numerics;
pub mod orbit_models;
pub mod regdet;
pub mod special;
pub mod trace;
pub mod zeta;

pub use error::{Error, Result};
pub use eval::EvalResult;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
