//! Exact computations for the lower central series of the free associative
//! algebra `A_n`, polynomial differential forms with the deformed product
//! `⋆`, and `gl_n` characters of the graded quotients.
//!
//! Everything is generic over the scalar field through [`scalar::Field`];
//! the aliases below fix the two fields used in practice.

pub mod chars;
pub mod error;
pub mod exactrank;
pub mod forms;
pub mod lcs;
pub mod ncpoly;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Field, FieldKind, Fp, Fp31, Rational};

/// Noncommutative polynomials mod `2^31 - 1`.
pub type FpPoly = ncpoly::NcPoly<Fp31>;
/// Noncommutative polynomials over `Q`.
pub type QPoly = ncpoly::NcPoly<Rational>;
/// Differential forms mod `2^31 - 1`.
pub type FpForm = forms::DifferentialForm<Fp31>;
/// Differential forms over `Q`.
pub type QForm = forms::DifferentialForm<Rational>;
/// Echelon basis mod `2^31 - 1`.
pub type FpEchelon = exactrank::EchelonBasis<Fp31>;
/// Echelon basis over `Q`.
pub type QEchelon = exactrank::EchelonBasis<Rational>;
/// Lower central series engine mod `2^31 - 1`.
pub type FpEngine = lcs::LcsEngine<Fp31>;
/// Lower central series engine over `Q`.
pub type QEngine = lcs::LcsEngine<Rational>;
