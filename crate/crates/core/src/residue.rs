//! Exact modular arithmetic on `Z/c` and the additive character `e(a/c)`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Exclusive upper bound on supported moduli.
pub const MAX_MODULUS: u64 = 1 << 31;

/// A period `c` together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Modulus {
    c: u64,
    is_prime: bool,
    factorization: Vec<(u64, u32)>,
}

impl Modulus {
    pub fn new(c: u64) -> Result<Self> {
        if c == 0 || c >= MAX_MODULUS {
            return Err(Error::InvalidModulus(c));
        }
        let factorization = factorize(c);
        let is_prime = factorization.len() == 1 && factorization[0].1 == 1;
        Ok(Self {
            c,
            is_prime,
            factorization,
        })
    }

    #[inline]
    pub fn get(&self) -> u64 {
        self.c
    }

    #[inline]
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.c as usize
    }

    #[inline]
    pub fn is_prime(&self) -> bool {
        self.is_prime
    }

    pub fn factorization(&self) -> &[(u64, u32)] {
        &self.factorization
    }

    /// Reduces any integer into `[0, c)`.
    #[inline]
    pub fn reduce(&self, a: i64) -> u64 {
        a.rem_euclid(self.c as i64) as u64
    }

    pub fn residue(&self, a: i64) -> Residue {
        Residue {
            value: self.reduce(a),
            modulus: self.c,
        }
    }

    #[inline]
    pub fn is_unit(&self, a: u64) -> bool {
        gcd(a % self.c, self.c) == 1
    }

    /// Units of `Z/c` in increasing order.
    pub fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.c).filter(move |&a| self.is_unit(a))
    }

    /// Euler's totient of `c`.
    pub fn totient(&self) -> u64 {
        self.factorization
            .iter()
            .fold(self.c, |acc, &(p, _)| acc / p * (p - 1))
    }

    /// Requires a prime modulus, returning `NotPrime` otherwise.
    pub fn require_prime(&self) -> Result<()> {
        if self.is_prime {
            Ok(())
        } else {
            Err(Error::NotPrime(self.c))
        }
    }
}

/// An element of `Z/c`, always stored reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn inverse(self) -> Result<Residue> {
        let value = inverse_mod(self.value, self.modulus)?;
        Ok(Residue {
            value,
            modulus: self.modulus,
        })
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, c: u64) -> u64 {
    ((a as u128 * b as u128) % c as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, c: u64) -> u64 {
    let mut acc = 1 % c;
    base %= c;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, c);
        }
        base = mul_mod(base, base, c);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `c` by the extended Euclidean algorithm.
pub fn inverse_mod(a: u64, c: u64) -> Result<u64> {
    let a = a % c;
    let (mut r0, mut r1) = (c as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        // c = 1: the zero ring, where 0 is its own inverse.
        if c == 1 {
            return Ok(0);
        }
        return Err(Error::NotInvertible {
            value: a,
            modulus: c,
        });
    }
    Ok(t0.rem_euclid(c as i64) as u64)
}

pub fn mod_inverse(a: Residue) -> Result<Residue> {
    a.inverse()
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Sieve of Eratosthenes: all primes in `[lo, hi)`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi <= 2 {
        return Vec::new();
    }
    let hi = hi as usize;
    let mut composite = vec![false; hi];
    let mut i = 2;
    while i * i < hi {
        if !composite[i] {
            let mut j = i * i;
            while j < hi {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (lo.max(2) as usize..hi)
        .filter(|&n| !composite[n])
        .map(|n| n as u64)
        .collect()
}

/// Smallest generator of `(Z/p)*`.
pub fn primitive_root(p: &Modulus) -> Result<u64> {
    p.require_prime()?;
    let p = p.get();
    if p == 2 {
        return Ok(1);
    }
    let order = p - 1;
    let prime_factors: Vec<u64> = factorize(order).into_iter().map(|(q, _)| q).collect();
    (2..p)
        .find(|&g| prime_factors.iter().all(|&q| pow_mod(g, order / q, p) != 1))
        .ok_or(Error::NotPrime(p))
}

/// Discrete logarithm tables for `(Z/p)*` relative to the smallest primitive root.
#[derive(Clone, Debug)]
pub struct DiscreteLog {
    pub root: u64,
    p: u64,
    /// `log[a]` for a unit `a`; `log[0]` is unused.
    log: Vec<u32>,
    /// `pow[t] = root^t`, `t` in `[0, p - 1)`.
    pow: Vec<u32>,
}

impl DiscreteLog {
    pub fn new(p: &Modulus) -> Result<Self> {
        let root = primitive_root(p)?;
        let p = p.get();
        let order = (p - 1) as usize;
        let mut log = vec![0u32; p as usize];
        let mut pow = Vec::with_capacity(order);
        let mut x = 1u64;
        for t in 0..order {
            pow.push(x as u32);
            log[x as usize] = t as u32;
            x = x * root % p;
        }
        Ok(Self { root, p, log, pow })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Length of the cyclic group, `p - 1`.
    pub fn order(&self) -> usize {
        self.pow.len()
    }

    /// `t` with `root^t = a`. Caller guarantees `a` is a unit.
    #[inline]
    pub fn log(&self, a: u64) -> usize {
        self.log[(a % self.p) as usize] as usize
    }

    #[inline]
    pub fn exp(&self, t: usize) -> u64 {
        self.pow[t % self.pow.len()] as u64
    }
}

pub fn discrete_log_table(p: &Modulus) -> Result<DiscreteLog> {
    DiscreteLog::new(p)
}

/// `e(a/c) = exp(2 pi i a / c)`, after exact reduction of `a` mod `c`.
///
/// The phase is folded into the first quadrant in integer arithmetic so
/// that quarter-period points come out exact.
pub fn additive_character<T: Real>(a: i64, c: u64) -> Complex<T> {
    let r = a.rem_euclid(c as i64) as u64;
    unit_phase(r, c)
}

/// `e(r/c)` for `r` already in `[0, c)`.
pub(crate) fn unit_phase<T: Real>(r: u64, c: u64) -> Complex<T> {
    let r4 = 4 * r as u128;
    let quadrant = (r4 / c as u128) as u8;
    let rem = (r4 % c as u128) as u64;
    let (cos, sin) = if rem == 0 {
        (T::one(), T::zero())
    } else {
        let theta = T::FRAC_PI_2() * T::from_u64(rem).unwrap() / T::from_u64(c).unwrap();
        (theta.cos(), theta.sin())
    };
    match quadrant {
        0 => Complex::new(cos, sin),
        1 => Complex::new(-sin, cos),
        2 => Complex::new(-cos, -sin),
        _ => Complex::new(sin, -cos),
    }
}

/// The table `r -> e(r/c)` for `r` in `[0, c)`.
pub fn character_table<T: Real>(c: u64) -> Vec<Complex<T>> {
    (0..c).map(|r| unit_phase(r, c)).collect()
}
