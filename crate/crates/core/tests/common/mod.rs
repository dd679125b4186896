//! Independent double-loop oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::TAU;

use vdc_core::bilinear::{gen_coefficients, CoefficientSequence, Scheme};
use vdc_core::kernels::{
    build_additive, build_constant, build_hyperkloosterman_kernel, build_inverse_twist,
    build_random_unimodular, Combiner, Family, Kernel,
};
use vdc_core::residue::{gcd, is_prime, Modulus};
use vdc_core::Complex64;

pub fn modulus(c: u64) -> Modulus {
    Modulus::new(c).unwrap()
}

pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * x)
}

/// Literal `c^{-1/2} sum_x K(m, x) conj K(n, x) e(-l x / c)`.
pub fn naive_lambda(k: &Kernel<f64>, l: i64) -> Kernel<f64> {
    let c = k.c();
    let mut table = Vec::with_capacity((c * c) as usize);
    for m in 0..c {
        for n in 0..c {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..c {
                let phase = (-(l as i128) * x as i128).rem_euclid(c as i128) as f64 / c as f64;
                acc += k.at(m, x) * k.at(n, x).conj() * e(phase);
            }
            table.push(acc / (c as f64).sqrt());
        }
    }
    Kernel::from_table(k.modulus().clone(), Family::Tabulated, table).unwrap()
}

/// `max over unit m of ((1/c) sum_x |K(m, x)|^2)^{1/2}`.
pub fn naive_norm(k: &Kernel<f64>) -> f64 {
    let c = k.c();
    (0..c)
        .filter(|&m| gcd(m, c) == 1)
        .map(|m| ((0..c).map(|x| k.at(m, x).norm_sqr()).sum::<f64>() / c as f64).sqrt())
        .fold(0.0, f64::max)
}

pub fn naive_bilinear(
    a: &CoefficientSequence<f64>,
    b: &CoefficientSequence<f64>,
    k: &Kernel<f64>,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, x) in a.values().iter().enumerate() {
        for (j, y) in b.values().iter().enumerate() {
            acc += x * y * k.get((a.start() + i as u64) as i64, (b.start() + j as u64) as i64);
        }
    }
    acc
}

pub fn l2(a: &CoefficientSequence<f64>) -> f64 {
    (a.values().iter().map(|z| z.norm_sqr()).sum::<f64>() / a.start() as f64).sqrt()
}

/// One of several families on `Z/c`, chosen by `pick`.
pub fn mixed_kernel(c: u64, pick: u64, seed: u64) -> Kernel<f64> {
    let m = modulus(c);
    match pick % 5 {
        0 => build_random_unimodular(&m, seed).unwrap(),
        1 => build_additive(&m).unwrap(),
        2 => build_inverse_twist(&m, 1 + (seed % c.max(2)) as i64).unwrap(),
        3 if is_prime(c) && c > 2 => {
            let combiner = if seed.is_multiple_of(2) {
                Combiner::Product
            } else {
                Combiner::Twist
            };
            build_hyperkloosterman_kernel(&m, 2, combiner).unwrap()
        }
        3 => build_constant(&m).unwrap(),
        _ => {
            let base = build_random_unimodular::<f64>(&m, seed).unwrap();
            base.scale(Complex64::new(0.5 + (seed % 7) as f64 / 3.0, 0.25))
        }
    }
}

pub fn scheme(pick: u64) -> Scheme {
    match pick % 3 {
        0 => Scheme::AllOnes,
        1 => Scheme::RandomSigns,
        _ => Scheme::RandomPhases,
    }
}

pub fn coefficients(start: u64, pick: u64, seed: u64, c: u64) -> CoefficientSequence<f64> {
    gen_coefficients(start, scheme(pick), seed, &modulus(c)).unwrap()
}
