use num_complex::Complex;

use super::quadrature::integrate_refined;
use super::test_function::TestFunction;
use super::{dft_fast, PeriodicTable};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `V^(xi) = int V(t) e(-t xi) dt` by refined composite Gauss-Legendre.
pub fn continuous_ft<T: Real>(v: &TestFunction<T>, xi: T) -> Result<Complex<T>> {
    let (a, b) = v.support();
    let tau = T::lit(2.0) * T::PI();
    // Start with roughly one panel per oscillation.
    let initial = ((b - a) * xi.abs()).ceil().to_usize().unwrap_or(1).max(4);
    let tol = T::quadrature_tolerance() * v.l1_mass().max(T::one());
    let r = integrate_refined(
        |t| {
            let phase = -tau * t * xi;
            Complex::new(phase.cos(), phase.sin()) * v.eval(t)
        },
        a,
        b,
        initial,
        tol,
    );
    if !r.converged {
        return Err(Error::QuadratureNotConverged {
            xi: xi.as_f64(),
            delta: r.delta.as_f64(),
        });
    }
    Ok(r.value)
}

/// Outcome of a twisted Poisson summation check.
#[derive(Clone, Debug)]
pub struct PoissonReport<T: Real> {
    /// `sum_n K(n) V(n)` over integers in the support of `V`.
    pub lhs: Complex<T>,
    /// `(1/c) sum_{|n| <= n_max} K^(n) V^(-n/c)`; the sign is immaterial for even `V`.
    pub rhs: Complex<T>,
    pub residual: T,
    pub n_max: usize,
}

/// Transform values `V^(j/c)` for `j` in `0..`, collected while scanning.
fn scan_transform<T: Real>(v: &TestFunction<T>, c: u64, upto: usize) -> Result<Vec<Complex<T>>> {
    let cf = T::from_u64(c).unwrap();
    (0..=upto)
        .map(|j| continuous_ft(v, T::from_count(j) / cf))
        .collect()
}

/// Sampling window (in units of `j`) that must stay below the threshold.
fn decay_window(c: u64) -> usize {
    (c as usize).max(16)
}

/// Hard limit on the scan, in units of `1/c`.
const SCAN_LIMIT: usize = 1 << 20;

/// Smallest `n` such that `|V^(j/c)| < 1e-14 * c * max(1, |V|_1)` for every
/// `j` in `(n, n + window]`.
pub fn truncation_point<T: Real>(v: &TestFunction<T>, c: u64) -> Result<usize> {
    truncate(v, c).map(|(n, _)| n)
}

fn truncate<T: Real>(v: &TestFunction<T>, c: u64) -> Result<(usize, Vec<Complex<T>>)> {
    let threshold = T::lit(1e-14) * T::from_u64(c).unwrap() * v.l1_mass().max(T::one());
    let window = decay_window(c);
    let cf = T::from_u64(c).unwrap();
    let mut values = Vec::new();
    // `quiet` counts consecutive sub-threshold values ending at the last index.
    let mut quiet = 0usize;
    let mut j = 0usize;
    loop {
        let z = continuous_ft(v, T::from_count(j) / cf)?;
        values.push(z);
        if z.norm() < threshold {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= window {
            let n = j - window;
            values.truncate(n + 1);
            return Ok((n, values));
        }
        j += 1;
        if j > SCAN_LIMIT {
            return Err(Error::InvalidArgument(format!(
                "transform of {} does not decay below {threshold} within {SCAN_LIMIT}/c",
                v.name()
            )));
        }
    }
}

/// `|sum_n K(n) V(n) - (1/c) sum_{|n| <= n_max} K^(n) V^(-n/c)|`.
///
/// The left sum runs over every integer in the support of `V`, so for `V`
/// supported in `(0, inf)` it is the one-sided sum `n >= 1`. When `n_max`
/// is `None` the truncation point is chosen by [`truncation_point`].
pub fn poisson_check<T: Real>(
    k: &PeriodicTable<T>,
    v: &TestFunction<T>,
    n_max: Option<usize>,
) -> Result<PoissonReport<T>> {
    let c = k.modulus().get();
    let (n_max, vhat) = match n_max {
        Some(n) => (n, scan_transform(v, c, n)?),
        None => truncate(v, c)?,
    };

    let (s0, s1) = v.support();
    let lo = s0.ceil().to_i64().unwrap();
    let hi = s1.floor().to_i64().unwrap();
    let mut lhs = Complex::new(T::zero(), T::zero());
    for n in lo..=hi {
        lhs += k.at(n) * T::from_i64(n).map(|t| v.eval(t)).unwrap();
    }

    let khat = dft_fast(k);
    // Pairs K^(n) with V^(-n/c); V is real, so V^(-xi) = conj(V^(xi)).
    let mut rhs = khat.at(0) * vhat[0];
    for (j, z) in vhat.iter().enumerate().skip(1) {
        let j = j as i64;
        rhs += khat.at(j) * z.conj() + khat.at(-j) * z;
    }
    rhs /= T::from_u64(c).unwrap();

    Ok(PoissonReport {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        n_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::residue::Modulus;

    #[test]
    fn transform_at_zero_is_the_integral() {
        let v = TestFunction::<f64>::unit_bump();
        let z = continuous_ft(&v, 0.0).unwrap();
        assert!((z.re - v.l1_mass()).abs() < 1e-12);
        assert!(z.im.abs() < 1e-14);
    }

    #[test]
    fn even_bump_has_real_transform() {
        let v = TestFunction::<f64>::centered_bump(1.0).unwrap();
        for xi in [0.5, 1.0, 2.0] {
            assert!(continuous_ft(&v, xi).unwrap().im.abs() < 1e-10);
        }
    }

    #[test]
    fn refinement_oracle_at_xi_5() {
        // Compare against the same integral on twice the panel count, no adaptivity.
        let v = TestFunction::<f64>::unit_bump();
        let z = continuous_ft(&v, 5.0).unwrap();
        let fine = integrate_refined(
            |t: f64| Complex::new(0.0, -2.0 * std::f64::consts::PI * 5.0 * t).exp() * v.eval(t),
            1.0,
            2.0,
            256,
            1e-15,
        );
        assert!((z - fine.value).norm() < 1e-10);
    }

    #[test]
    fn constant_kernel_classical_poisson() {
        let k = PeriodicTable::from_fn(Modulus::new(3).unwrap(), |_| Complex::new(1.0, 0.0));
        let v = TestFunction::bump(0.5, 50.5).unwrap();
        let r = poisson_check(&k, &v, None).unwrap();
        assert!(r.residual < 1e-8, "{r:?}");
    }

    #[test]
    fn character_kernel_pairs_with_the_reflected_transform() {
        // K(n) = e(n/7) has K^ = 7 delta_1, so the sum sees V^(-1/7 + j) only.
        let c = Modulus::new(7).unwrap();
        let k = PeriodicTable::from_fn(c, |a| crate::residue::additive_character(a as i64, 7));
        let v = TestFunction::bump(0.5, 21.5).unwrap();
        let r = poisson_check(&k, &v, None).unwrap();
        assert!(r.residual < 1e-9, "{r:?}");
        let direct: Complex<f64> = (-12..=12)
            .map(|j| continuous_ft(&v, -1.0 / 7.0 + j as f64).unwrap())
            .sum();
        assert!((r.lhs - direct).norm() < 1e-9, "{r:?} {direct}");
    }

    #[test]
    fn delta_kernel_with_no_multiples_in_support() {
        let k = PeriodicTable::from_fn(Modulus::new(3).unwrap(), |a| {
            Complex::new(if a == 0 { 1.0 } else { 0.0 }, 0.0)
        });
        let v = TestFunction::<f64>::unit_bump();
        let r = poisson_check(&k, &v, None).unwrap();
        assert!(r.lhs.norm() < 1e-15);
        assert!(r.residual < 1e-8, "{r:?}");
    }

    #[test]
    fn residual_is_linear_in_the_kernel() {
        let m = Modulus::new(5).unwrap();
        let k = PeriodicTable::from_fn(m, |a| Complex::new(a as f64 * 0.3, 1.0 - a as f64 * 0.1));
        let v = TestFunction::bump(0.5, 15.5).unwrap();
        let n = truncation_point(&v, 5).unwrap();
        // Truncate early so the residual is dominated by the tail, not round-off.
        let short = (n / 4).max(1);
        let r1 = poisson_check(&k, &v, Some(short)).unwrap().residual;
        let r2 = poisson_check(&k.scale(Complex::new(2.0, 0.0)), &v, Some(short))
            .unwrap()
            .residual;
        assert!(r1 > 1e-9);
        assert!((r2 - 2.0 * r1).abs() <= 1e-12 * r2.max(1.0));
    }
}
