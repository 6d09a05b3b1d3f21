//! Numerical toolkit for contractive norm inequalities on weighted
//! Bergman spaces over the unit disk.
//!
//! The library is organized around the even moment sequence of a radial
//! weight, from which everything else is derived:
//!
//! * [`weights`] — weight families, adaptive quadrature and closed-form
//!   moments, the normalized [`weights::MomentSequence`];
//! * [`conditions`] — the ratio conditions on consecutive moments that
//!   govern contractivity, reported with per-index margins;
//! * [`analytic`] — power series on the disk, weighted norms, dilations,
//!   and the norm-power inequality checks (polynomials and zero-free
//!   exponentials);
//! * [`bernoulli`] — the Bernoulli-type series inequality `S(q) ≤ S(1)^q`,
//!   its derivatives, the convolution-sign machinery, and a modified-Bessel
//!   toolkit backing the base case;
//! * [`quadrature`], [`sum`] — Gauss–Legendre panels with certified error
//!   bounds and compensated/double-double accumulation;
//! * [`json`] — canonical (byte-deterministic) JSON rendering for reports.
//!
//! All public entry points validate their inputs and return
//! [`Error`](crate::error::Error) rather than panicking; numerical results
//! carry explicit error bounds wherever truncation or quadrature is
//! involved.

#![forbid(unsafe_code)]

pub mod analytic;
pub mod bernoulli;
pub mod conditions;
pub mod error;
pub mod json;
pub mod quadrature;
pub mod sum;
pub mod weights;

pub use error::{Error, Result};
