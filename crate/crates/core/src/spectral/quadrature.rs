//! Composite Gauss-Legendre quadrature with panel doubling.

use num_complex::Complex;

use crate::scalar::Real;

/// Nodes per panel of the composite rule.
pub const PANEL_ORDER: usize = 20;

/// Total node cap across all panels.
pub const NODE_CAP: usize = 1 << 16;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on `P_n`.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Work in f64 for the root search and round once at the end.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = T::lit(-x);
        nodes[n - 1 - i] = T::lit(x);
        weights[i] = T::lit(w);
        weights[n - 1 - i] = T::lit(w);
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of [`integrate_refined`].
#[derive(Clone, Copy, Debug)]
pub struct Refined<T: Real> {
    pub value: Complex<T>,
    pub panels: usize,
    /// Difference to the previous refinement level.
    pub delta: T,
    pub converged: bool,
}

fn composite<T: Real, F: Fn(T) -> Complex<T>>(
    f: &F,
    a: T,
    b: T,
    panels: usize,
    rule: &(Vec<T>, Vec<T>),
) -> Complex<T> {
    let h = (b - a) / T::from_count(panels);
    let half = h / T::lit(2.0);
    let mut total = Complex::new(T::zero(), T::zero());
    for p in 0..panels {
        let mid = a + h * T::from_count(p) + half;
        let mut acc = Complex::new(T::zero(), T::zero());
        for (x, w) in rule.0.iter().zip(&rule.1) {
            acc += f(mid + half * *x) * *w;
        }
        total += acc * half;
    }
    total
}

/// Integrates `f` over `[a, b]`, doubling the panel count from
/// `initial_panels` until two successive values differ by at most `tol`
/// or the node cap is reached.
pub fn integrate_refined<T: Real, F: Fn(T) -> Complex<T>>(
    f: F,
    a: T,
    b: T,
    initial_panels: usize,
    tol: T,
) -> Refined<T> {
    let rule = gauss_legendre::<T>(PANEL_ORDER);
    let mut panels = initial_panels.max(1);
    let mut prev = composite(&f, a, b, panels, &rule);
    loop {
        if 2 * panels * PANEL_ORDER > NODE_CAP {
            return Refined {
                value: prev,
                panels,
                delta: T::infinity(),
                converged: false,
            };
        }
        panels *= 2;
        let next = composite(&f, a, b, panels, &rule);
        let delta = (next - prev).norm();
        if delta <= tol {
            return Refined {
                value: next,
                panels,
                delta,
                converged: true,
            };
        }
        prev = next;
    }
}
