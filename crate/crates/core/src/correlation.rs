//! The correlation operator
//! `(Lambda_l K)(m, n) = c^{-1/2} sum_x K(m, x) conj(K(n, x)) e(-l x / c)`,
//! its iterates, and the norms `||K||_{2,inf}` and `||alpha||_2`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::{Family, Kernel};
use crate::residue::character_table;
use crate::scalar::Real;
use crate::spectral::FftPlan;

pub use crate::bilinear::seq_norm;

/// Default cap on `c^3 * chain length` for [`lambda_chain`].
pub const DEFAULT_CHAIN_WORK_CAP: u128 = 1 << 40;

/// Largest `c` for which [`lambda_all`] materializes the `c x c x c` tensor.
pub const LAMBDA_TENSOR_CAP: u64 = 160;

/// Shifts `(l_1, ..., l_j)` with every `|l_i| <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftTuple {
    shifts: Vec<i64>,
    bound: u64,
}

impl ShiftTuple {
    pub fn new(shifts: Vec<i64>, bound: u64) -> Result<Self> {
        if let Some(l) = shifts.iter().find(|l| l.unsigned_abs() > bound) {
            return Err(Error::InvalidArgument(format!(
                "shift {l} exceeds bound {bound}"
            )));
        }
        Ok(Self { shifts, bound })
    }

    /// A tuple with its bound set to the largest `|l_i|`.
    pub fn tight(shifts: Vec<i64>) -> Self {
        let bound = shifts.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0);
        Self { shifts, bound }
    }

    pub fn zeros(len: usize, bound: u64) -> Self {
        Self {
            shifts: vec![0; len],
            bound,
        }
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    /// Semicolon-separated shifts, e.g. `-1;0;2`.
    pub fn to_csv_field(&self) -> String {
        self.shifts
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// `Lambda_l K` as a full `c x c` kernel.
pub fn lambda_op<T: Real>(kernel: &Kernel<T>, shift: i64) -> Kernel<T> {
    let c = kernel.c();
    let cu = c as usize;
    let chars: Vec<Complex<T>> = character_table(c);
    let l = kernel.modulus().reduce(shift);
    // Rows of K twisted by e(-l x / c).
    let twisted: Vec<Complex<T>> = (0..c)
        .flat_map(|m| {
            let row = kernel.row(m);
            let chars = &chars;
            (0..c).map(move |x| row[x as usize] * chars[(l * x % c) as usize].conj())
        })
        .collect();
    let norm = T::from_u64(c).unwrap().sqrt().recip();
    let mut table = vec![Complex::new(T::zero(), T::zero()); cu * cu];
    table.par_chunks_mut(cu).enumerate().for_each(|(m, out)| {
        let a = &twisted[m * cu..(m + 1) * cu];
        for (n, slot) in out.iter_mut().enumerate() {
            let b = kernel.row(n as u64);
            let mut acc = Complex::new(T::zero(), T::zero());
            for (x, y) in a.iter().zip(b) {
                acc += x * y.conj();
            }
            *slot = acc * norm;
        }
    });
    Kernel::from_table(kernel.modulus().clone(), Family::Tabulated, table).expect("same shape")
}

/// `sum_x K(m, x) conj(K(n, x)) e(-l x / c)` for every `l` in `Z/c`, scaled
/// by `c^{-1/2}`: one product row and one transform.
pub fn lambda_pair_spectrum<T: Real>(
    kernel: &Kernel<T>,
    m: u64,
    n: u64,
    plan: &FftPlan<T>,
) -> Vec<Complex<T>> {
    let norm = T::from_u64(kernel.c()).unwrap().sqrt().recip();
    let mut buf: Vec<Complex<T>> = kernel
        .row(m)
        .iter()
        .zip(kernel.row(n))
        .map(|(a, b)| a * b.conj())
        .collect();
    plan.forward(&mut buf);
    buf.iter_mut().for_each(|z| *z *= norm);
    buf
}

/// All `Lambda_l K` at once, indexed `[l][m][n]`.
#[derive(Clone, Debug)]
pub struct LambdaTensor<T: Real> {
    c: u64,
    kernel: Kernel<T>,
    /// Pair-major: entry `(m * c + n) * c + l`.
    data: Vec<Complex<T>>,
}

impl<T: Real> LambdaTensor<T> {
    #[inline]
    pub fn at(&self, shift: i64, m: u64, n: u64) -> Complex<T> {
        let l = self.kernel.modulus().reduce(shift);
        self.data[((m * self.c + n) * self.c + l) as usize]
    }

    /// `Lambda_l K` as a kernel.
    pub fn slice(&self, shift: i64) -> Kernel<T> {
        let c = self.c;
        let mut table = Vec::with_capacity((c * c) as usize);
        for m in 0..c {
            for n in 0..c {
                table.push(self.at(shift, m, n));
            }
        }
        Kernel::from_table(self.kernel.modulus().clone(), Family::Tabulated, table)
            .expect("same shape")
    }
}

pub fn lambda_all<T: Real>(kernel: &Kernel<T>) -> Result<LambdaTensor<T>> {
    let c = kernel.c();
    if c > LAMBDA_TENSOR_CAP {
        return Err(Error::KernelTooLarge {
            c,
            cap: LAMBDA_TENSOR_CAP,
        });
    }
    let plan = FftPlan::new(c as usize);
    let data: Vec<Complex<T>> = (0..c * c)
        .into_par_iter()
        .flat_map_iter(|pair| lambda_pair_spectrum(kernel, pair / c, pair % c, &plan))
        .collect();
    Ok(LambdaTensor {
        c,
        kernel: kernel.clone(),
        data,
    })
}

/// `Lambda_{l_j} ... Lambda_{l_1} K`, applying `l_1` first.
pub fn lambda_chain<T: Real>(
    kernel: &Kernel<T>,
    tuple: &ShiftTuple,
    work_cap: u128,
) -> Result<Kernel<T>> {
    if tuple.is_empty() {
        return Err(Error::InvalidArgument(
            "lambda chain needs at least one shift".into(),
        ));
    }
    let work = chain_work(kernel.c(), tuple.len());
    if work > work_cap {
        return Err(Error::ChainBudgetExceeded {
            work,
            cap: work_cap,
        });
    }
    let mut current = lambda_op(kernel, tuple.shifts[0]);
    for &l in &tuple.shifts[1..] {
        current = lambda_op(&current, l);
    }
    Ok(current)
}

pub fn chain_work(c: u64, len: usize) -> u128 {
    (c as u128).pow(3) * len as u128
}

/// `||K||_{2,inf}` with the row attaining it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormReport<T: Real> {
    pub k2inf: T,
    pub argmax_row: u64,
    pub rows_scanned: usize,
}

/// `sup_{(m, c) = 1} ((1/c) sum_x |K(m, x)|^2)^{1/2}`, ties to the smallest `m`.
pub fn k2inf_norm<T: Real>(kernel: &Kernel<T>) -> NormReport<T> {
    let c = kernel.c();
    let cf = T::from_u64(c).unwrap();
    let mut best = T::neg_infinity();
    let mut argmax_row = 0;
    let mut rows_scanned = 0;
    for m in kernel.modulus().units() {
        rows_scanned += 1;
        let mass: T = kernel.row(m).iter().map(|z| z.norm_sqr()).sum::<T>() / cf;
        if mass > best {
            best = mass;
            argmax_row = m;
        }
    }
    NormReport {
        k2inf: best.sqrt(),
        argmax_row,
        rows_scanned,
    }
}

/// Memoized chain along a moving prefix. Feeding tuples in lexicographic
/// order evaluates every shared prefix once and keeps only `k` kernels alive.
#[derive(Debug)]
pub struct PrefixChain<'a, T: Real> {
    base: &'a Kernel<T>,
    shifts: Vec<i64>,
    levels: Vec<Kernel<T>>,
    norms: Vec<T>,
    evaluations: usize,
}

impl<'a, T: Real> PrefixChain<'a, T> {
    pub fn new(base: &'a Kernel<T>) -> Self {
        Self {
            base,
            shifts: Vec::new(),
            levels: Vec::new(),
            norms: Vec::new(),
            evaluations: 0,
        }
    }

    /// Brings the chain to `shifts`, reusing the longest common prefix.
    pub fn advance(&mut self, shifts: &[i64]) {
        let common = self
            .shifts
            .iter()
            .zip(shifts)
            .take_while(|(a, b)| a == b)
            .count();
        self.shifts.truncate(common);
        self.levels.truncate(common);
        self.norms.truncate(common);
        for &l in &shifts[common..] {
            let prev = self.levels.last().unwrap_or(self.base);
            let next = lambda_op(prev, l);
            self.norms.push(k2inf_norm(&next).k2inf);
            self.levels.push(next);
            self.shifts.push(l);
            self.evaluations += 1;
        }
    }

    /// `Lambda_{l_j} ... Lambda_{l_1} K` for `j = depth` (1-based).
    pub fn level(&self, depth: usize) -> &Kernel<T> {
        &self.levels[depth - 1]
    }

    /// `||Lambda_{l_j} ... Lambda_{l_1} K||_{2,inf}`.
    pub fn norm(&self, depth: usize) -> T {
        self.norms[depth - 1]
    }

    /// Number of `Lambda` applications performed so far.
    pub fn evaluations(&self) -> usize {
        self.evaluations
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{
        build_additive, build_constant, build_hyperkloosterman_kernel, build_random_unimodular,
        Combiner,
    };
    use crate::residue::{additive_character, Modulus};

    fn m(c: u64) -> Modulus {
        Modulus::new(c).unwrap()
    }

    /// Literal double loop.
    fn lambda_oracle(k: &Kernel<f64>, l: i64) -> Vec<Complex<f64>> {
        let c = k.c();
        let mut out = Vec::new();
        for a in 0..c {
            for b in 0..c {
                let mut acc = Complex::new(0.0, 0.0);
                for x in 0..c {
                    let e: Complex<f64> = additive_character(-l * x as i64, c);
                    acc += k.at(a, x) * k.at(b, x).conj() * e;
                }
                out.push(acc / (c as f64).sqrt());
            }
        }
        out
    }

    fn max_dev(a: &[Complex<f64>], b: &[Complex<f64>]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn constant_kernel() {
        let k = build_constant::<f64>(&m(7)).unwrap();
        let l0 = lambda_op(&k, 0);
        assert!(l0
            .table()
            .iter()
            .all(|z| (z.re - 7f64.sqrt()).abs() < 1e-14 && z.im.abs() < 1e-14));
        assert!(lambda_op(&k, 3).table().iter().all(|z| z.norm() < 1e-14));
        assert!((k2inf_norm(&l0).k2inf - 7f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn additive_kernel_closed_form() {
        let k = build_additive::<f64>(&m(5)).unwrap();
        for l in -5..=5i64 {
            let lk = lambda_op(&k, l);
            for a in 0..5u64 {
                for b in 0..5u64 {
                    let on = (a as i64 - b as i64 - l).rem_euclid(5) == 0;
                    let want = if on { 5f64.sqrt() } else { 0.0 };
                    assert!((lk.at(a, b) - Complex::new(want, 0.0)).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn matches_oracle_on_random_kernel() {
        let k = build_random_unimodular::<f64>(&m(8), 11).unwrap();
        assert!(max_dev(lambda_op(&k, 1).table(), &lambda_oracle(&k, 1)) < 1e-10);
    }

    #[test]
    fn additive_depth_two_chain() {
        // Lambda_2 Lambda_1 K(m, n) = sqrt 5 e(-2(m-1)/5) [m = n]
        let k = build_additive::<f64>(&m(5)).unwrap();
        let chain =
            lambda_chain(&k, &ShiftTuple::tight(vec![1, 2]), DEFAULT_CHAIN_WORK_CAP).unwrap();
        for a in 0..5u64 {
            for b in 0..5u64 {
                let want = if a == b {
                    additive_character::<f64>(-2 * (a as i64 - 1), 5) * 5f64.sqrt()
                } else {
                    Complex::new(0.0, 0.0)
                };
                assert!((chain.at(a, b) - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn chain_of_one_is_lambda_op() {
        let k = build_random_unimodular::<f64>(&m(9), 2).unwrap();
        let a = lambda_chain(&k, &ShiftTuple::tight(vec![-2]), DEFAULT_CHAIN_WORK_CAP).unwrap();
        assert_eq!(a, lambda_op(&k, -2));
    }

    #[test]
    fn depth_two_matches_composed_oracle() {
        let k = build_random_unimodular::<f64>(&m(16), 5).unwrap();
        let chain =
            lambda_chain(&k, &ShiftTuple::tight(vec![3, -1]), DEFAULT_CHAIN_WORK_CAP).unwrap();
        let first = Kernel::from_table(m(16), Family::Tabulated, lambda_oracle(&k, 3)).unwrap();
        assert!(max_dev(chain.table(), &lambda_oracle(&first, -1)) < 1e-9);
    }

    #[test]
    fn chain_budget() {
        let k = build_constant::<f64>(&m(10)).unwrap();
        assert!(matches!(
            lambda_chain(&k, &ShiftTuple::tight(vec![0, 0]), 1999),
            Err(Error::ChainBudgetExceeded {
                work: 2000,
                cap: 1999
            })
        ));
        assert!(lambda_chain(&k, &ShiftTuple::tight(vec![]), 10).is_err());
    }

    #[test]
    fn tensor_slices_match_lambda_op() {
        let k = build_random_unimodular::<f64>(&m(12), 3).unwrap();
        let t = lambda_all(&k).unwrap();
        for l in [-13i64, -1, 0, 5, 11] {
            assert!(max_dev(t.slice(l).table(), lambda_op(&k, l).table()) < 1e-12);
        }
    }

    #[test]
    fn norms() {
        let k = build_random_unimodular::<f64>(&m(15), 9).unwrap();
        let r = k2inf_norm(&k);
        assert!((r.k2inf - 1.0).abs() < 1e-14);
        assert_eq!(r.rows_scanned, 8);
        let kl = build_hyperkloosterman_kernel::<f64>(&m(7), 2, Combiner::Product).unwrap();
        let r = k2inf_norm(&kl);
        let best = (1..7)
            .map(|a| (0..7).map(|x| kl.at(a, x).norm_sqr()).sum::<f64>() / 7.0)
            .fold(0.0f64, f64::max);
        assert!((r.k2inf - best.sqrt()).abs() < 1e-14);
        let direct: f64 = (0..7)
            .map(|x| kl.at(r.argmax_row, x).norm_sqr())
            .sum::<f64>()
            / 7.0;
        assert!((r.k2inf.powi(2) - direct).abs() < 1e-12);
    }

    #[test]
    fn non_unit_rows_are_ignored() {
        let c = m(6);
        let k = Kernel::<f64>::from_fn(c, Family::Tabulated, |a, _| {
            Complex::new(if a == 2 { 100.0 } else { 1.0 }, 0.0)
        })
        .unwrap();
        let r = k2inf_norm(&k);
        assert_eq!(r.k2inf, 1.0);
        assert_eq!(r.argmax_row, 1);
        assert_eq!(r.rows_scanned, 2);
    }

    #[test]
    fn prefix_chain_reuses_prefixes() {
        let k = build_random_unimodular::<f64>(&m(10), 1).unwrap();
        let mut pc = PrefixChain::new(&k);
        pc.advance(&[0, 1]);
        pc.advance(&[0, 2]);
        pc.advance(&[1, -1]);
        assert_eq!(pc.evaluations(), 5);
        let direct =
            lambda_chain(&k, &ShiftTuple::tight(vec![1, -1]), DEFAULT_CHAIN_WORK_CAP).unwrap();
        assert_eq!(pc.level(2), &direct);
        assert_eq!(pc.norm(2), k2inf_norm(&direct).k2inf);
    }

    #[test]
    fn shift_tuple_bounds() {
        assert!(ShiftTuple::new(vec![1, -3], 2).is_err());
        let t = ShiftTuple::new(vec![-1, 0, 2], 2).unwrap();
        assert_eq!(t.to_csv_field(), "-1;0;2");
    }
}
