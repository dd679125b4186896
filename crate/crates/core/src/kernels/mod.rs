//! Dense `c`-periodic kernels `K(m, n; c)` and their constructors.

mod format;
pub mod kloosterman;

pub use format::{load_kernel, read_kernel, save_kernel, write_kernel};
pub use kloosterman::{
    hyperkloosterman_direct, hyperkloosterman_direct_at, hyperkloosterman_fast,
    kloosterman_via_inverse_transform, UnitFunction, DIRECT_BUDGET,
};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::residue::{character_table, gcd, inverse_mod, Modulus};
use crate::scalar::Real;

/// Largest modulus for which a dense `c x c` table is materialized.
pub const DENSE_KERNEL_CAP: u64 = 4096;

/// How a function on `(Z/p)*` is lifted to two variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Combiner {
    /// `K(m, n) = f(mn)`.
    Product,
    /// `K(m, n) = f(m nbar)`.
    Twist,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Constant,
    Additive,
    InverseTwist { a: i64 },
    HyperKloosterman { k: u32, combiner: Combiner },
    Tabulated,
    RandomUnimodular { seed: u64 },
}

impl Family {
    /// Whether the family vanishes off `gcd(mn, c) = 1`.
    pub fn unit_supported(&self) -> bool {
        matches!(self, Family::HyperKloosterman { .. })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Constant => write!(f, "constant"),
            Family::Additive => write!(f, "additive"),
            Family::InverseTwist { a } => write!(f, "inverse-twist({a})"),
            Family::HyperKloosterman { k, combiner } => {
                let c = match combiner {
                    Combiner::Product => "product",
                    Combiner::Twist => "twist",
                };
                write!(f, "hyper-kloosterman({k},{c})")
            }
            Family::Tabulated => write!(f, "tabulated"),
            Family::RandomUnimodular { seed } => write!(f, "random-unimodular({seed})"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Format(format!("unknown kernel family `{s}`"));
        let (head, args) = match s.split_once('(') {
            Some((h, rest)) => (h, Some(rest.strip_suffix(')').ok_or_else(bad)?)),
            None => (s, None),
        };
        Ok(match (head, args) {
            ("constant", None) => Family::Constant,
            ("additive", None) => Family::Additive,
            ("tabulated", None) => Family::Tabulated,
            ("inverse-twist", Some(a)) => Family::InverseTwist {
                a: a.parse().map_err(|_| bad())?,
            },
            ("random-unimodular", Some(seed)) => Family::RandomUnimodular {
                seed: seed.parse().map_err(|_| bad())?,
            },
            ("hyper-kloosterman", Some(args)) => {
                let (k, comb) = args.split_once(',').ok_or_else(bad)?;
                let combiner = match comb {
                    "product" => Combiner::Product,
                    "twist" => Combiner::Twist,
                    _ => return Err(bad()),
                };
                Family::HyperKloosterman {
                    k: k.parse().map_err(|_| bad())?,
                    combiner,
                }
            }
            _ => return Err(bad()),
        })
    }
}

/// Suprema of `|K|` recorded at construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MagnitudeProfile<T: Real> {
    /// Over `(m, n)` with `gcd(mn, c) = 1`.
    pub sup_on_units: T,
    pub sup_overall: T,
}

impl<T: Real> MagnitudeProfile<T> {
    fn measure(modulus: &Modulus, table: &[Complex<T>]) -> Self {
        let c = modulus.get();
        let mut sup_on_units = T::zero();
        let mut sup_overall = T::zero();
        for m in 0..c {
            let unit_row = gcd(m, c) == 1;
            for n in 0..c {
                let v = table[(m * c + n) as usize].norm();
                sup_overall = sup_overall.max(v);
                if unit_row && gcd(n, c) == 1 {
                    sup_on_units = sup_on_units.max(v);
                }
            }
        }
        Self {
            sup_on_units,
            sup_overall,
        }
    }

    /// The size assumption `|K| <= 1` on units and `|K| <= sqrt c` elsewhere,
    /// checked as an upper bound with slack `tol`.
    pub fn within_size_assumption(&self, c: u64, tol: T) -> bool {
        self.sup_on_units <= T::one() + tol
            && self.sup_overall <= T::from_u64(c).unwrap().sqrt() + tol
    }
}

/// A `c`-periodic kernel materialized as a row-major `c x c` table.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel<T: Real> {
    modulus: Modulus,
    table: Vec<Complex<T>>,
    family: Family,
    profile: MagnitudeProfile<T>,
}

impl<T: Real> Kernel<T> {
    pub fn from_table(modulus: Modulus, family: Family, table: Vec<Complex<T>>) -> Result<Self> {
        let c = modulus.get();
        if c > DENSE_KERNEL_CAP {
            return Err(Error::KernelTooLarge {
                c,
                cap: DENSE_KERNEL_CAP,
            });
        }
        if table.len() != (c * c) as usize {
            return Err(Error::InvalidArgument(format!(
                "kernel table has {} entries, expected {}",
                table.len(),
                c * c
            )));
        }
        let profile = MagnitudeProfile::measure(&modulus, &table);
        Ok(Self {
            modulus,
            table,
            family,
            profile,
        })
    }

    pub fn from_fn(
        modulus: Modulus,
        family: Family,
        mut f: impl FnMut(u64, u64) -> Complex<T>,
    ) -> Result<Self> {
        let c = modulus.get();
        if c > DENSE_KERNEL_CAP {
            return Err(Error::KernelTooLarge {
                c,
                cap: DENSE_KERNEL_CAP,
            });
        }
        let mut table = Vec::with_capacity((c * c) as usize);
        for m in 0..c {
            for n in 0..c {
                table.push(f(m, n));
            }
        }
        Self::from_table(modulus, family, table)
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    #[inline]
    pub fn c(&self) -> u64 {
        self.modulus.get()
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn magnitude_profile(&self) -> &MagnitudeProfile<T> {
        &self.profile
    }

    pub fn table(&self) -> &[Complex<T>] {
        &self.table
    }

    /// `K(m, n)` at reduced residues.
    #[inline]
    pub fn at(&self, m: u64, n: u64) -> Complex<T> {
        self.table[(m * self.c() + n) as usize]
    }

    /// `K(m, n)` at arbitrary integers, reduced mod `c`.
    #[inline]
    pub fn get(&self, m: i64, n: i64) -> Complex<T> {
        self.at(self.modulus.reduce(m), self.modulus.reduce(n))
    }

    #[inline]
    pub fn row(&self, m: u64) -> &[Complex<T>] {
        let c = self.c() as usize;
        &self.table[m as usize * c..(m as usize + 1) * c]
    }

    /// `lambda K`, tagged as tabulated.
    pub fn scale(&self, lambda: Complex<T>) -> Self {
        let table = self.table.iter().map(|z| z * lambda).collect();
        Self::from_table(self.modulus.clone(), Family::Tabulated, table).expect("same shape")
    }

    /// Entrywise conjugate, tagged as tabulated.
    pub fn conj(&self) -> Self {
        let table = self.table.iter().map(|z| z.conj()).collect();
        Self::from_table(self.modulus.clone(), Family::Tabulated, table).expect("same shape")
    }
}

/// `K(m, n) = 1`.
pub fn build_constant<T: Real>(c: &Modulus) -> Result<Kernel<T>> {
    Kernel::from_fn(c.clone(), Family::Constant, |_, _| {
        Complex::new(T::one(), T::zero())
    })
}

/// `K(m, n) = e(mn / c)`.
pub fn build_additive<T: Real>(c: &Modulus) -> Result<Kernel<T>> {
    let q = c.get();
    let chars: Vec<Complex<T>> = character_table(q);
    Kernel::from_fn(c.clone(), Family::Additive, |m, n| {
        chars[(m * n % q) as usize]
    })
}

/// `K(m, n) = e(a m nbar / c)` for `n` a unit, zero otherwise.
pub fn build_inverse_twist<T: Real>(c: &Modulus, a: i64) -> Result<Kernel<T>> {
    let q = c.get();
    let chars: Vec<Complex<T>> = character_table(q);
    let inverses: Vec<Option<u64>> = (0..q).map(|n| inverse_mod(n, q).ok()).collect();
    let a = c.reduce(a);
    Kernel::from_fn(
        c.clone(),
        Family::InverseTwist { a: a as i64 },
        |m, n| match inverses[n as usize] {
            Some(inv) => chars[((a as u128 * m as u128 * inv as u128) % q as u128) as usize],
            None => Complex::new(T::zero(), T::zero()),
        },
    )
}

/// Lifts `f` on `(Z/p)*` to `K(m, n) = f(mn)` or `f(m nbar)`, zero when `p | mn`.
pub fn assemble_kernel_from_1d<T: Real>(
    f: &UnitFunction<T>,
    combiner: Combiner,
    family: Family,
) -> Result<Kernel<T>> {
    let modulus = f.modulus().clone();
    let q = modulus.get();
    let inverses: Vec<u64> = (0..q).map(|n| inverse_mod(n, q).unwrap_or(0)).collect();
    Kernel::from_fn(modulus, family, |m, n| {
        if gcd(m * n % q, q) != 1 {
            return Complex::new(T::zero(), T::zero());
        }
        match combiner {
            Combiner::Product => f.at(m * n % q),
            Combiner::Twist => f.at(m * inverses[n as usize] % q),
        }
    })
}

/// `K(m, n) = Kl_k(mn; p)` (product) or `Kl_k(m nbar; p)` (twist), via the fast table.
pub fn build_hyperkloosterman_kernel<T: Real>(
    p: &Modulus,
    k: u32,
    combiner: Combiner,
) -> Result<Kernel<T>> {
    if p.get() > DENSE_KERNEL_CAP {
        return Err(Error::KernelTooLarge {
            c: p.get(),
            cap: DENSE_KERNEL_CAP,
        });
    }
    let table = hyperkloosterman_fast(p, k)?;
    assemble_kernel_from_1d(&table, combiner, Family::HyperKloosterman { k, combiner })
}

/// `K(m, n) = e(theta_{m,n})` with `theta` uniform on `[0, 1)` from a seeded ChaCha8 stream.
pub fn build_random_unimodular<T: Real>(c: &Modulus, seed: u64) -> Result<Kernel<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = T::lit(2.0) * T::PI();
    Kernel::from_fn(c.clone(), Family::RandomUnimodular { seed }, |_, _| {
        let theta = T::lit(rng.gen::<f64>()) * tau;
        Complex::new(theta.cos(), theta.sin())
    })
}
