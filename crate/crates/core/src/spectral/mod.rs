//! Discrete Fourier analysis on `Z/c`, continuous transforms of smooth
//! weights, and the twisted Poisson summation check.

mod fft;
mod poisson;
mod quadrature;
mod test_function;

pub use fft::{cyclic_convolution, FftPlan};
pub use poisson::{continuous_ft, poisson_check, truncation_point, PoissonReport};
pub use quadrature::{gauss_legendre, integrate_refined, Refined};
pub use test_function::{Profile, TestFunction};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::residue::{character_table, Modulus};
use crate::scalar::Real;

/// A `c`-periodic function of one residue, stored as its `c` values.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicTable<T: Real> {
    modulus: Modulus,
    values: Vec<Complex<T>>,
}

/// Discrete Fourier transform of a [`PeriodicTable`]; again `c`-periodic.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumTable<T: Real> {
    modulus: Modulus,
    values: Vec<Complex<T>>,
}

macro_rules! table_common {
    ($ty:ident) => {
        impl<T: Real> $ty<T> {
            pub fn new(modulus: Modulus, values: Vec<Complex<T>>) -> Result<Self> {
                if values.len() != modulus.len() {
                    return Err(Error::InvalidArgument(format!(
                        "table of length {} for modulus {}",
                        values.len(),
                        modulus.get()
                    )));
                }
                Ok(Self { modulus, values })
            }

            pub fn from_fn(modulus: Modulus, f: impl FnMut(u64) -> Complex<T>) -> Self {
                let values = (0..modulus.get()).map(f).collect();
                Self { modulus, values }
            }

            pub fn modulus(&self) -> &Modulus {
                &self.modulus
            }

            pub fn values(&self) -> &[Complex<T>] {
                &self.values
            }

            pub fn into_values(self) -> Vec<Complex<T>> {
                self.values
            }

            /// Value at any integer, reduced mod `c`.
            #[inline]
            pub fn at(&self, a: i64) -> Complex<T> {
                self.values[self.modulus.reduce(a) as usize]
            }

            pub fn energy(&self) -> T {
                self.values.iter().map(|z| z.norm_sqr()).sum()
            }

            pub fn scale(&self, lambda: Complex<T>) -> Self {
                Self {
                    modulus: self.modulus.clone(),
                    values: self.values.iter().map(|z| z * lambda).collect(),
                }
            }
        }
    };
}

table_common!(PeriodicTable);
table_common!(SpectrumTable);

/// `K^(n) = sum_{a mod c} K(a) e(-an/c)` by the literal double loop.
pub fn dft_direct<T: Real>(f: &PeriodicTable<T>) -> SpectrumTable<T> {
    let c = f.modulus.get();
    let chars: Vec<Complex<T>> = character_table(c);
    let values = (0..c)
        .map(|n| {
            f.values
                .iter()
                .enumerate()
                .map(|(a, v)| {
                    let r = (a as u64 * n) % c;
                    // e(-r/c) = conj(e(r/c))
                    v * chars[r as usize].conj()
                })
                .sum()
        })
        .collect();
    SpectrumTable {
        modulus: f.modulus.clone(),
        values,
    }
}

/// Same contract as [`dft_direct`], in `O(c log c)` for every `c`.
pub fn dft_fast<T: Real>(f: &PeriodicTable<T>) -> SpectrumTable<T> {
    let mut values = f.values.clone();
    FftPlan::new(values.len()).forward(&mut values);
    SpectrumTable {
        modulus: f.modulus.clone(),
        values,
    }
}

/// Inverse transform: `f(a) = (1/c) sum_n F(n) e(an/c)`.
pub fn idft<T: Real>(spectrum: &SpectrumTable<T>) -> PeriodicTable<T> {
    let mut values = spectrum.values.clone();
    FftPlan::new(values.len()).inverse(&mut values);
    PeriodicTable {
        modulus: spectrum.modulus.clone(),
        values,
    }
}
