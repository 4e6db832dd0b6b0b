//! Exact and numerical tools for blow-ups of Toda lattices.
//!
//! The crate is layered bottom-up:
//! [`rootdata`] (Cartan data) → [`weyl`] (group enumeration) → [`signflow`] (sign action, η)
//! → [`blowup_poly`] / [`todagraph`] / [`affine`], with [`schurtau`] (exact τ-functions) and
//! [`numtoda`] (floating-point flows) alongside. [`verify`] runs the acceptance matrix.

pub mod affine;
pub mod blowup_poly;
pub mod cache;
pub mod error;
pub mod numtoda;
pub mod rootdata;
pub mod schurtau;
pub mod signflow;
pub mod todagraph;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use rootdata::{CartanLike, CartanMatrix, ExtendedCartanMatrix, LieType, Series};
pub use signflow::{Sign, SignVector};
pub use weyl::WeylGroup;

/// Exact rational numbers used throughout the polynomial code.
pub type Rational = num_rational::BigRational;
