//! Numerical laboratory for van der Corput differencing over `Z/c`.
//!
//! The crate builds `c`-periodic kernels `K(m, n; c)` (additive twists,
//! inverse twists, hyper-Kloosterman sums), applies the correlation
//! operator `Lambda_l`, evaluates bilinear forms `S_K(M, N; c)` and every
//! bound in the differencing chain, and measures how sharp those bounds are.
//!
//! Everything numeric is generic over [`Real`]; the `*64` aliases below fix
//! the scalar to `f64`, which is what the audits run in.

pub mod bilinear;
pub mod bounds;
pub mod correlation;
pub mod error;
pub mod kernels;
pub mod residue;
pub mod scalar;
pub mod spectral;

pub use bilinear::{CoefficientSequence, Scheme};
pub use bounds::{BoundConfig, BoundReport};
pub use correlation::ShiftTuple;
pub use error::{Error, Result};
pub use kernels::{Family, Kernel};
pub use num_complex::Complex;
pub use residue::{Modulus, Residue};
pub use scalar::Real;

pub type Complex64 = Complex<f64>;
pub type PeriodicTable64 = spectral::PeriodicTable<f64>;
pub type SpectrumTable64 = spectral::SpectrumTable<f64>;
pub type TestFunction64 = spectral::TestFunction<f64>;
pub type Kernel64 = kernels::Kernel<f64>;
pub type CoefficientSequence64 = bilinear::CoefficientSequence<f64>;
pub type BoundReport64 = bounds::BoundReport<f64>;
pub type AuditRecord64 = bounds::AuditRecord<f64>;
