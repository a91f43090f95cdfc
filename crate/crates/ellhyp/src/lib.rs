//! Numerical building blocks for elliptic hypergeometric functions.
//!
//! The crate evaluates theta functions, elliptic gamma functions, terminating
//! very-well-poised series and contour integrals over the unit torus, and
//! checks the classical identities between them to a stated tolerance.
//!
//! It is `no_std` with `alloc`; the `std` feature only switches the float
//! backends of `num-complex`/`num-traits`/`twofloat` away from `libm`.

#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![deny(unsafe_code)]
#![allow(clippy::many_single_char_names, clippy::too_many_arguments)]

extern crate alloc;

pub mod contour_quad;
pub mod error;
mod extended;
pub mod gamma_funcs;
pub mod integral_identities;
pub mod numeric;
pub mod report;
pub mod sci_index;
pub mod series_engine;
pub mod special_core;

pub use error::{Error, Result};
pub use numeric::C64;
pub use report::IdentityReport;
pub use special_core::BasePair;
