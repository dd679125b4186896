//! Coefficient sequences on dyadic intervals and the bilinear form
//! `S_K(M, N; c) = sum_{M <= m < 2M} sum_{N <= n < 2N} alpha_m beta_n K(m, n; c)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::residue::{primes_in, Modulus};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    AllOnes,
    RandomSigns,
    RandomPhases,
    /// `1` at primes coprime to the modulus, `0` elsewhere.
    PrimeSupported,
    Custom,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::AllOnes => "all-ones",
            Scheme::RandomSigns => "random-signs",
            Scheme::RandomPhases => "random-phases",
            Scheme::PrimeSupported => "prime-supported",
            Scheme::Custom => "custom",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all-ones" => Scheme::AllOnes,
            "random-signs" => Scheme::RandomSigns,
            "random-phases" => Scheme::RandomPhases,
            "prime-supported" => Scheme::PrimeSupported,
            "custom" => Scheme::Custom,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown coefficient scheme `{s}`"
                )))
            }
        })
    }
}

/// Coefficients supported on exactly `[start, 2 start)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSequence<T: Real> {
    start: u64,
    values: Vec<Complex<T>>,
    scheme: Scheme,
    seed: Option<u64>,
}

impl<T: Real> CoefficientSequence<T> {
    pub fn custom(start: u64, values: Vec<Complex<T>>) -> Result<Self> {
        if start == 0 || values.len() as u64 != start {
            return Err(Error::InvalidArgument(format!(
                "support [{start}, {}) needs {start} values, got {}",
                2 * start,
                values.len()
            )));
        }
        Ok(Self {
            start,
            values,
            scheme: Scheme::Custom,
            seed: None,
        })
    }

    /// Single coefficient `1` at `at`.
    pub fn spike(start: u64, at: u64) -> Result<Self> {
        if at < start || at >= 2 * start {
            return Err(Error::InvalidArgument(format!(
                "{at} lies outside [{start}, {})",
                2 * start
            )));
        }
        let mut values = vec![Complex::new(T::zero(), T::zero()); start as usize];
        values[(at - start) as usize] = Complex::new(T::one(), T::zero());
        Self::custom(start, values)
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    /// The support `start..2 start`.
    pub fn support(&self) -> std::ops::Range<u64> {
        self.start..2 * self.start
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `(index, value)` pairs over the support.
    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex<T>)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.start + i as u64, *v))
    }

    /// Plain `sum |alpha_n|^2`.
    pub fn energy(&self) -> T {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn l1(&self) -> T {
        self.values.iter().map(|z| z.norm()).sum()
    }

    pub fn scale(&self, lambda: Complex<T>) -> Self {
        Self {
            values: self.values.iter().map(|z| z * lambda).collect(),
            scheme: Scheme::Custom,
            ..self.clone()
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            values: self.values.iter().map(|z| z.conj()).collect(),
            scheme: Scheme::Custom,
            ..self.clone()
        }
    }

    /// Entrywise sum of two sequences on the same support.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.start != other.start {
            return Err(Error::InvalidArgument("supports differ".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Self::custom(self.start, values)
    }
}

/// Deterministic coefficients for `scheme` on `[start, 2 start)`.
pub fn gen_coefficients<T: Real>(
    start: u64,
    scheme: Scheme,
    seed: u64,
    modulus: &Modulus,
) -> Result<CoefficientSequence<T>> {
    if start == 0 {
        return Err(Error::InvalidArgument("support start must be >= 1".into()));
    }
    let one = Complex::new(T::one(), T::zero());
    let zero = Complex::new(T::zero(), T::zero());
    let len = start as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = match scheme {
        Scheme::AllOnes => vec![one; len],
        Scheme::RandomSigns => (0..len)
            .map(|_| if rng.gen::<bool>() { one } else { -one })
            .collect(),
        Scheme::RandomPhases => {
            let tau = T::lit(2.0) * T::PI();
            (0..len)
                .map(|_| {
                    let theta = T::lit(rng.gen::<f64>()) * tau;
                    Complex::new(theta.cos(), theta.sin())
                })
                .collect()
        }
        Scheme::PrimeSupported => {
            let mut values = vec![zero; len];
            let mut any = false;
            for p in primes_in(start, 2 * start) {
                if modulus.is_unit(p) {
                    values[(p - start) as usize] = one;
                    any = true;
                }
            }
            if !any {
                return Err(Error::EmptySupport {
                    start,
                    end: 2 * start,
                    modulus: modulus.get(),
                });
            }
            values
        }
        Scheme::Custom => {
            return Err(Error::InvalidArgument(
                "custom coefficients are built with CoefficientSequence::custom".into(),
            ))
        }
    };
    Ok(CoefficientSequence {
        start,
        values,
        scheme,
        seed: matches!(scheme, Scheme::RandomSigns | Scheme::RandomPhases).then_some(seed),
    })
}

/// `||alpha||_2 = ((1/N) sum_{N <= n < 2N} |alpha_n|^2)^{1/2}`.
pub fn seq_norm<T: Real>(alpha: &CoefficientSequence<T>) -> T {
    (alpha.energy() / T::from_u64(alpha.start).unwrap()).sqrt()
}

/// `S_K` together with its exact Cauchy-Schwarz bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BilinearValue<T: Real> {
    pub value: Complex<T>,
    pub m_start: u64,
    pub n_start: u64,
    pub c: u64,
    /// `sqrt(MN) ||alpha|| ||beta|| (sum_{m ~ M, n ~ N} |K(m, n)|^2)^{1/2}`.
    pub trivial_cs_bound: T,
}

/// The double sum alone.
pub fn bilinear_sum<T: Real>(
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
    kernel: &Kernel<T>,
) -> Complex<T> {
    let modulus = kernel.modulus();
    let beta_idx: Vec<(u64, Complex<T>)> = beta
        .iter()
        .map(|(n, b)| (modulus.reduce(n as i64), b))
        .collect();
    let mut total = Complex::new(T::zero(), T::zero());
    for (m, a) in alpha.iter() {
        let row = kernel.row(modulus.reduce(m as i64));
        let mut inner = Complex::new(T::zero(), T::zero());
        for &(n, b) in &beta_idx {
            inner += b * row[n as usize];
        }
        total += a * inner;
    }
    total
}

/// `sum_{m ~ M, n ~ N} |K(m, n)|^2` over the two supports, reduced mod `c`.
pub fn kernel_mass_on_box<T: Real>(kernel: &Kernel<T>, m_start: u64, n_start: u64) -> T {
    let modulus = kernel.modulus();
    let mut total = T::zero();
    for m in m_start..2 * m_start {
        let row = kernel.row(modulus.reduce(m as i64));
        for n in n_start..2 * n_start {
            total += row[modulus.reduce(n as i64) as usize].norm_sqr();
        }
    }
    total
}

pub fn eval_bilinear<T: Real>(
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
    kernel: &Kernel<T>,
) -> BilinearValue<T> {
    let value = bilinear_sum(alpha, beta, kernel);
    let mn = T::from_u64(alpha.start).unwrap() * T::from_u64(beta.start).unwrap();
    let trivial_cs_bound = mn.sqrt()
        * seq_norm(alpha)
        * seq_norm(beta)
        * kernel_mass_on_box(kernel, alpha.start, beta.start).sqrt();
    debug_assert!(
        value.norm() <= trivial_cs_bound * (T::one() + T::lit(1e-9)) + T::lit(1e-9),
        "Cauchy-Schwarz violated: |S| = {}, bound = {}",
        value.norm(),
        trivial_cs_bound
    );
    BilinearValue {
        value,
        m_start: alpha.start,
        n_start: beta.start,
        c: kernel.c(),
        trivial_cs_bound,
    }
}
