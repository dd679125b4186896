//! Normalized hyper-Kloosterman sums
//! `Kl_k(a; p) = p^{-(k-1)/2} sum_{x_1 ... x_k = a} e((x_1 + ... + x_k)/p)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::residue::{character_table, inverse_mod, DiscreteLog, Modulus};
use crate::scalar::Real;
use crate::spectral::FftPlan;

/// Per-point enumeration cap of the direct oracle (`p^(k-1)` terms).
pub const DIRECT_BUDGET: u128 = 10_000_000;

/// A function on `(Z/p)*`, stored over all of `Z/p` with the value at 0 fixed to 0.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitFunction<T: Real> {
    modulus: Modulus,
    values: Vec<Complex<T>>,
}

impl<T: Real> UnitFunction<T> {
    pub fn new(modulus: Modulus, mut values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != modulus.len() {
            return Err(Error::InvalidArgument(format!(
                "unit function of length {} for modulus {}",
                values.len(),
                modulus.get()
            )));
        }
        for (a, v) in values.iter_mut().enumerate() {
            if !modulus.is_unit(a as u64) {
                *v = Complex::new(T::zero(), T::zero());
            }
        }
        Ok(Self { modulus, values })
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    #[inline]
    pub fn at(&self, a: u64) -> Complex<T> {
        self.values[(a % self.modulus.get()) as usize]
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// Largest `|f(a)|` over units.
    pub fn sup_norm(&self) -> T {
        self.values.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }
}

fn normalization<T: Real>(p: u64, k: u32) -> T {
    T::from_u64(p)
        .unwrap()
        .powf(-T::from_u32(k - 1).unwrap() / T::lit(2.0))
}

fn check_args(p: &Modulus, k: u32) -> Result<()> {
    p.require_prime()?;
    if k == 0 {
        return Err(Error::InvalidArgument(
            "hyper-Kloosterman order k must be >= 1".into(),
        ));
    }
    Ok(())
}

fn direct_work(p: u64, k: u32) -> u128 {
    ((p - 1) as u128).saturating_pow(k - 1)
}

/// Full table by literal enumeration of all `k`-tuples of units.
///
/// Feasible while `(p-1)^(k-1) <= budget`; the full table costs `p - 1`
/// times that.
pub fn hyperkloosterman_direct<T: Real>(
    p: &Modulus,
    k: u32,
    budget: u128,
) -> Result<UnitFunction<T>> {
    check_args(p, k)?;
    let q = p.get();
    let work = direct_work(q, k);
    if work > budget {
        return Err(Error::Infeasible { work, budget });
    }
    let chars: Vec<Complex<T>> = character_table(q);
    let mut acc = vec![Complex::new(T::zero(), T::zero()); q as usize];
    // Odometer over (x_1, ..., x_{k-1}); x_k runs innermost.
    let free = (k - 1) as usize;
    let mut xs = vec![1u64; free];
    loop {
        let (prod, sum) = xs
            .iter()
            .fold((1u64, 0u64), |(pr, s), &x| (pr * x % q, (s + x) % q));
        for x in 1..q {
            acc[(prod * x % q) as usize] += chars[((sum + x) % q) as usize];
        }
        let mut i = 0;
        loop {
            if i == free {
                let norm = normalization::<T>(q, k);
                let values = acc.into_iter().map(|z| z * norm).collect();
                return UnitFunction::new(p.clone(), values);
            }
            xs[i] += 1;
            if xs[i] < q {
                break;
            }
            xs[i] = 1;
            i += 1;
        }
    }
}

/// `Kl_k(a; p)` at a single unit `a`, enumerating `(p-1)^(k-1)` terms.
pub fn hyperkloosterman_direct_at<T: Real>(
    p: &Modulus,
    k: u32,
    a: u64,
    budget: u128,
) -> Result<Complex<T>> {
    check_args(p, k)?;
    let q = p.get();
    let a = a % q;
    if a == 0 {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let work = direct_work(q, k);
    if work > budget {
        return Err(Error::Infeasible { work, budget });
    }
    let chars: Vec<Complex<T>> = character_table(q);
    let free = (k - 1) as usize;
    let mut xs = vec![1u64; free];
    let mut acc = Complex::new(T::zero(), T::zero());
    loop {
        let (prod, sum) = xs
            .iter()
            .fold((1u64, 0u64), |(pr, s), &x| (pr * x % q, (s + x) % q));
        let last = a * inverse_mod(prod, q)? % q;
        acc += chars[((sum + last) % q) as usize];
        let mut i = 0;
        loop {
            if i == free {
                return Ok(acc * normalization::<T>(q, k));
            }
            xs[i] += 1;
            if xs[i] < q {
                break;
            }
            xs[i] = 1;
            i += 1;
        }
    }
}

/// Full table in `O(p log p)`: `(Z/p)*` is cyclic of order `p - 1`, so in
/// discrete-log coordinates `Kl_k` is the `k`-fold cyclic self-convolution
/// of `t -> e(g^t / p)`.
pub fn hyperkloosterman_fast<T: Real>(p: &Modulus, k: u32) -> Result<UnitFunction<T>> {
    check_args(p, k)?;
    let q = p.get();
    let dlog = DiscreteLog::new(p)?;
    let order = dlog.order();
    let chars: Vec<Complex<T>> = character_table(q);
    let mut spectrum: Vec<Complex<T>> = (0..order).map(|t| chars[dlog.exp(t) as usize]).collect();
    let plan = FftPlan::new(order);
    plan.forward(&mut spectrum);
    for z in spectrum.iter_mut() {
        *z = z.powu(k);
    }
    plan.inverse(&mut spectrum);
    let norm = normalization::<T>(q, k);
    let mut values = vec![Complex::new(T::zero(), T::zero()); q as usize];
    for (t, z) in spectrum.into_iter().enumerate() {
        values[dlog.exp(t) as usize] = z * norm;
    }
    UnitFunction::new(p.clone(), values)
}

/// `Kl_2` through one length-`p` transform:
/// `Kl_2(a) = p^{-1/2} sum_y e(ybar / p) e(a y / p)`.
pub fn kloosterman_via_inverse_transform<T: Real>(p: &Modulus) -> Result<UnitFunction<T>> {
    check_args(p, 2)?;
    let q = p.get();
    let chars: Vec<Complex<T>> = character_table(q);
    let mut buf: Vec<Complex<T>> = (0..q)
        .map(|y| {
            if y == 0 {
                Complex::new(T::zero(), T::zero())
            } else {
                chars[inverse_mod(y, q).unwrap() as usize]
            }
        })
        .collect();
    // Forward transform gives sum_y w(y) e(-yn/p); read it at n = -a.
    FftPlan::new(q as usize).forward(&mut buf);
    let norm = normalization::<T>(q, 2);
    let values = (0..q).map(|a| buf[((q - a) % q) as usize] * norm).collect();
    UnitFunction::new(p.clone(), values)
}
