use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use super::quadrature::integrate_refined;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Shape of a compactly supported smooth weight on its support `[s0, s1]`.
#[derive(Clone)]
pub enum Profile<T: Real> {
    /// `exp(1 - 1/(1 - u^2))` with `u` the support mapped onto `(-1, 1)`.
    Bump,
    /// Smooth step up on `[s0, flat_lo]`, identically one on `[flat_lo, flat_hi]`,
    /// smooth step down on `[flat_hi, s1]`.
    Plateau { flat_lo: T, flat_hi: T },
    /// Caller supplied; must vanish outside the support.
    Custom(Arc<dyn Fn(T) -> T + Send + Sync>),
}

impl<T: Real> fmt::Debug for Profile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Bump => write!(f, "Bump"),
            Profile::Plateau { flat_lo, flat_hi } => {
                write!(f, "Plateau[{flat_lo}, {flat_hi}]")
            }
            Profile::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Real-valued weight in `C_c^infinity` with its support and L1 mass.
#[derive(Clone, Debug)]
pub struct TestFunction<T: Real> {
    name: String,
    support: (T, T),
    profile: Profile<T>,
    amplitude: T,
    smoothness_class: &'static str,
    mass: T,
}

/// `exp(-1/x)` for `x > 0`, zero otherwise.
fn flat_exp<T: Real>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        (-x.recip()).exp()
    }
}

/// Smooth step: 0 for `x <= 0`, 1 for `x >= 1`.
fn smooth_step<T: Real>(x: T) -> T {
    if x >= T::one() {
        return T::one();
    }
    let a = flat_exp(x);
    let b = flat_exp(T::one() - x);
    a / (a + b)
}

impl<T: Real> TestFunction<T> {
    fn build(
        name: String,
        support: (T, T),
        profile: Profile<T>,
        smoothness_class: &'static str,
    ) -> Result<Self> {
        // Also rejects NaN endpoints.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(support.0 < support.1) {
            return Err(Error::InvalidArgument(format!(
                "empty support [{}, {}]",
                support.0, support.1
            )));
        }
        let mut v = Self {
            name,
            support,
            profile,
            amplitude: T::one(),
            smoothness_class,
            mass: T::zero(),
        };
        v.mass = v.compute_mass();
        Ok(v)
    }

    fn compute_mass(&self) -> T {
        let (a, b) = self.support;
        integrate_refined(
            |t| Complex::new(self.eval(t).abs(), T::zero()),
            a,
            b,
            8,
            T::quadrature_tolerance(),
        )
        .value
        .re
    }

    /// The standard bump supported on `[s0, s1]`.
    pub fn bump(s0: T, s1: T) -> Result<Self> {
        Self::build(
            format!("bump[{s0},{s1}]"),
            (s0, s1),
            Profile::Bump,
            "C_c^inf",
        )
    }

    /// The default weight: bump on `[1, 2]`.
    pub fn unit_bump() -> Self {
        Self::bump(T::one(), T::lit(2.0)).expect("valid support")
    }

    /// Bump on `[-h, h]`; even, so its transform is real.
    pub fn centered_bump(half_width: T) -> Result<Self> {
        Self::bump(-half_width, half_width)
    }

    pub fn plateau(outer: (T, T), flat: (T, T)) -> Result<Self> {
        if !(outer.0 < flat.0 && flat.0 <= flat.1 && flat.1 < outer.1) {
            return Err(Error::InvalidArgument(
                "plateau must satisfy s0 < flat_lo <= flat_hi < s1".into(),
            ));
        }
        Self::build(
            format!("plateau[{},{}]in[{},{}]", flat.0, flat.1, outer.0, outer.1),
            outer,
            Profile::Plateau {
                flat_lo: flat.0,
                flat_hi: flat.1,
            },
            "C_c^inf",
        )
    }

    /// Smooth majorant of the indicator of `[1, 2]`, supported on `[1/2, 5/2]`.
    pub fn majorant() -> Self {
        Self::plateau((T::lit(0.5), T::lit(2.5)), (T::one(), T::lit(2.0))).expect("valid plateau")
    }

    pub fn custom(
        name: impl Into<String>,
        support: (T, T),
        f: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::build(
            name.into(),
            support,
            Profile::Custom(Arc::new(f)),
            "unchecked",
        )
    }

    /// Pointwise multiple `lambda * V`.
    pub fn scaled(&self, lambda: T) -> Self {
        let mut v = self.clone();
        v.amplitude = self.amplitude * lambda;
        v.mass = self.mass * lambda.abs();
        v.name = format!("{}x{}", lambda, self.name);
        v
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support(&self) -> (T, T) {
        self.support
    }

    pub fn profile(&self) -> &Profile<T> {
        &self.profile
    }

    pub fn smoothness_class(&self) -> &'static str {
        self.smoothness_class
    }

    /// `int |V(t)| dt`.
    pub fn l1_mass(&self) -> T {
        self.mass
    }

    pub fn eval(&self, t: T) -> T {
        let (s0, s1) = self.support;
        if t <= s0 || t >= s1 {
            return T::zero();
        }
        let shape = match &self.profile {
            Profile::Bump => {
                let u = T::lit(2.0) * (t - s0) / (s1 - s0) - T::one();
                let q = T::one() - u * u;
                if q <= T::zero() {
                    T::zero()
                } else {
                    (T::one() - q.recip()).exp()
                }
            }
            Profile::Plateau { flat_lo, flat_hi } => {
                let rise = smooth_step((t - s0) / (*flat_lo - s0));
                let fall = smooth_step((s1 - t) / (s1 - *flat_hi));
                rise * fall
            }
            Profile::Custom(f) => f(t),
        };
        self.amplitude * shape
    }

    /// Checks `V >= 1` on `[1, 2]` and `V >= 0` on the support, on a grid.
    pub fn check_majorant(&self, samples: usize) -> Result<()> {
        let samples = samples.max(2);
        for i in 0..=samples {
            let t = T::one() + T::from_count(i) / T::from_count(samples);
            let v = self.eval(t);
            if v < T::one() {
                return Err(Error::NotMajorant {
                    at: t.as_f64(),
                    value: v.as_f64(),
                });
            }
        }
        let (s0, s1) = self.support;
        for i in 0..=samples {
            let t = s0 + (s1 - s0) * T::from_count(i) / T::from_count(samples);
            let v = self.eval(t);
            if v < T::zero() {
                return Err(Error::NotMajorant {
                    at: t.as_f64(),
                    value: v.as_f64(),
                });
            }
        }
        Ok(())
    }
}
