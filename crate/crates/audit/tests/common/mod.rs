//! Double-loop oracles, independent of the crate's transform-based paths.
#![allow(dead_code)]

use std::f64::consts::TAU;

use vdc_core::kernels::{
    build_additive, build_constant, build_hyperkloosterman_kernel, build_inverse_twist,
    build_random_unimodular, Combiner, Family, Kernel,
};
use vdc_core::residue::{gcd, is_prime, Modulus};
use vdc_core::{Complex64, Kernel64};

pub fn modulus(c: u64) -> Modulus {
    Modulus::new(c).unwrap()
}

/// Literal `c^{-1/2} sum_x K(m, x) conj K(n, x) e(-l x / c)`.
pub fn naive_lambda(k: &Kernel64, l: i64) -> Kernel64 {
    let c = k.c();
    let mut table = Vec::with_capacity((c * c) as usize);
    for m in 0..c {
        for n in 0..c {
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..c {
                let r = (-(l as i128) * x as i128).rem_euclid(c as i128) as f64;
                acc +=
                    k.at(m, x) * k.at(n, x).conj() * Complex64::from_polar(1.0, TAU * r / c as f64);
            }
            table.push(acc / (c as f64).sqrt());
        }
    }
    Kernel::from_table(k.modulus().clone(), Family::Tabulated, table).unwrap()
}

/// `max over unit m of ((1/c) sum_x |K(m, x)|^2)^{1/2}`.
pub fn naive_norm(k: &Kernel64) -> f64 {
    let c = k.c();
    (0..c)
        .filter(|&m| gcd(m, c) == 1)
        .map(|m| ((0..c).map(|x| k.at(m, x).norm_sqr()).sum::<f64>() / c as f64).sqrt())
        .fold(0.0, f64::max)
}

/// One of the built families on `Z/c`, chosen by `pick`.
pub fn mixed_kernel(c: u64, pick: u64, seed: u64) -> Kernel64 {
    let m = modulus(c);
    match pick % 6 {
        0 => build_random_unimodular(&m, seed).unwrap(),
        1 => build_additive(&m).unwrap(),
        2 => build_inverse_twist(&m, 1 + (seed % c) as i64).unwrap(),
        3 | 4 if is_prime(c) && c > 2 => {
            let combiner = if pick % 6 == 3 {
                Combiner::Product
            } else {
                Combiner::Twist
            };
            build_hyperkloosterman_kernel(&m, 2 + (seed % 2) as u32, combiner).unwrap()
        }
        3 | 4 => build_constant(&m).unwrap(),
        _ => build_random_unimodular(&m, seed)
            .unwrap()
            .scale(Complex64::new(0.3 + (seed % 5) as f64 / 4.0, -0.2)),
    }
}

/// Deterministic stream of uniforms in `[0, 1)` (splitmix64).
pub struct Stream(u64);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}
