//! Arbitrary-length FFT: iterative radix-2 for powers of two, Bluestein's
//! chirp transform for everything else.

use num_complex::Complex;

use crate::residue::unit_phase;
use crate::scalar::Real;

/// A precomputed forward transform `X(k) = sum_j x(j) e(-jk/n)` of fixed length.
#[derive(Clone, Debug)]
pub struct FftPlan<T: Real> {
    len: usize,
    kind: PlanKind<T>,
}

#[derive(Clone, Debug)]
enum PlanKind<T: Real> {
    Radix2(Radix2<T>),
    Bluestein {
        inner: Radix2<T>,
        /// `w(j) = e(-j^2 / 2n)`.
        chirp: Vec<Complex<T>>,
        /// Forward transform of the zero-padded, wrapped `conj(w)` filter.
        filter: Vec<Complex<T>>,
    },
}

#[derive(Clone, Debug)]
struct Radix2<T: Real> {
    len: usize,
    /// `e(-j/len)` for `j < len / 2`.
    twiddles: Vec<Complex<T>>,
}

impl<T: Real> Radix2<T> {
    fn new(len: usize) -> Self {
        debug_assert!(len.is_power_of_two());
        let twiddles = (0..len / 2)
            .map(|j| unit_phase::<T>(j as u64, len as u64).conj())
            .collect();
        Self { len, twiddles }
    }

    fn forward(&self, buf: &mut [Complex<T>]) {
        let n = self.len;
        debug_assert_eq!(buf.len(), n);
        if n <= 1 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for chunk in buf.chunks_exact_mut(2 * half) {
                let (lo, hi) = chunk.split_at_mut(half);
                for k in 0..half {
                    let t = hi[k] * self.twiddles[k * stride];
                    hi[k] = lo[k] - t;
                    lo[k] += t;
                }
            }
            half *= 2;
        }
    }

    /// Unnormalized inverse via conjugation.
    fn backward(&self, buf: &mut [Complex<T>]) {
        buf.iter_mut().for_each(|z| *z = z.conj());
        self.forward(buf);
        buf.iter_mut().for_each(|z| *z = z.conj());
    }
}

impl<T: Real> FftPlan<T> {
    pub fn new(len: usize) -> Self {
        let kind = if len.is_power_of_two() || len == 0 {
            PlanKind::Radix2(Radix2::new(len.max(1)))
        } else {
            let inner_len = (2 * len - 1).next_power_of_two();
            let inner = Radix2::new(inner_len);
            let two_n = 2 * len as u64;
            let chirp: Vec<Complex<T>> = (0..len as u64)
                .map(|j| {
                    let r = ((j as u128 * j as u128) % two_n as u128) as u64;
                    unit_phase::<T>(r, two_n).conj()
                })
                .collect();
            let mut filter = vec![Complex::new(T::zero(), T::zero()); inner_len];
            filter[0] = chirp[0].conj();
            for j in 1..len {
                filter[j] = chirp[j].conj();
                filter[inner_len - j] = chirp[j].conj();
            }
            inner.forward(&mut filter);
            PlanKind::Bluestein {
                inner,
                chirp,
                filter,
            }
        };
        Self { len, kind }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// In-place forward transform.
    pub fn forward(&self, buf: &mut [Complex<T>]) {
        assert_eq!(buf.len(), self.len, "buffer length must match the plan");
        match &self.kind {
            PlanKind::Radix2(r) => {
                if self.len > 0 {
                    r.forward(buf)
                }
            }
            PlanKind::Bluestein {
                inner,
                chirp,
                filter,
            } => {
                let m = inner.len;
                let mut work = vec![Complex::new(T::zero(), T::zero()); m];
                for ((w, x), ch) in work.iter_mut().zip(buf.iter()).zip(chirp) {
                    *w = *x * ch;
                }
                inner.forward(&mut work);
                for (w, f) in work.iter_mut().zip(filter) {
                    *w *= f;
                }
                inner.backward(&mut work);
                let scale = T::one() / T::from_count(m);
                for ((out, w), ch) in buf.iter_mut().zip(&work).zip(chirp) {
                    *out = *w * ch * scale;
                }
            }
        }
    }

    /// In-place inverse transform, including the `1/n` normalization.
    pub fn inverse(&self, buf: &mut [Complex<T>]) {
        buf.iter_mut().for_each(|z| *z = z.conj());
        self.forward(buf);
        let scale = T::one() / T::from_count(self.len.max(1));
        buf.iter_mut().for_each(|z| *z = z.conj() * scale);
    }
}

/// Cyclic convolution `(a * b)(t) = sum_s a(s) b(t - s)` of equal-length inputs.
pub fn cyclic_convolution<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    assert_eq!(a.len(), b.len());
    let plan = FftPlan::new(a.len());
    let mut fa = a.to_vec();
    let mut fb = b.to_vec();
    plan.forward(&mut fa);
    plan.forward(&mut fb);
    fa.iter_mut().zip(&fb).for_each(|(x, y)| *x *= y);
    plan.inverse(&mut fa);
    fa
}
