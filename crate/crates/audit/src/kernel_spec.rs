//! Kernel names as typed on the command line and in grid specs.
//!
//! `constant`, `additive`, `inverse-twist[:a]`, `kl<k>-product`,
//! `kl<k>-twist`, `random-unimodular[:seed]`, `file:<path>`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use vdc_core::kernels::{
    build_additive, build_constant, build_hyperkloosterman_kernel, build_inverse_twist,
    build_random_unimodular, load_kernel, Combiner,
};
use vdc_core::{Kernel64, Modulus};

use crate::defaults;
use crate::error::{AuditError, AuditResult};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum KernelSpec {
    Constant,
    Additive,
    InverseTwist { a: i64 },
    HyperKloosterman { k: u32, combiner: Combiner },
    RandomUnimodular { seed: u64 },
    File(PathBuf),
}

impl KernelSpec {
    pub fn build(&self, c: u64) -> AuditResult<Kernel64> {
        let m = Modulus::new(c)?;
        let kernel = match self {
            KernelSpec::Constant => build_constant(&m)?,
            KernelSpec::Additive => build_additive(&m)?,
            KernelSpec::InverseTwist { a } => build_inverse_twist(&m, *a)?,
            KernelSpec::HyperKloosterman { k, combiner } => {
                build_hyperkloosterman_kernel(&m, *k, *combiner)?
            }
            KernelSpec::RandomUnimodular { seed } => build_random_unimodular(&m, *seed)?,
            KernelSpec::File(path) => {
                let kernel: Kernel64 = load_kernel(path)?;
                if kernel.c() != c {
                    return Err(AuditError::Config(format!(
                        "kernel file {} has modulus {}, expected {c}",
                        path.display(),
                        kernel.c()
                    )));
                }
                kernel
            }
        };
        Ok(kernel)
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Constant => write!(f, "constant"),
            KernelSpec::Additive => write!(f, "additive"),
            KernelSpec::InverseTwist { a } => write!(f, "inverse-twist:{a}"),
            KernelSpec::HyperKloosterman { k, combiner } => {
                let tag = match combiner {
                    Combiner::Product => "product",
                    Combiner::Twist => "twist",
                };
                write!(f, "kl{k}-{tag}")
            }
            KernelSpec::RandomUnimodular { seed } => write!(f, "random-unimodular:{seed}"),
            KernelSpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

impl FromStr for KernelSpec {
    type Err = AuditError;

    fn from_str(s: &str) -> AuditResult<Self> {
        let bad = || AuditError::Config(format!("unknown kernel `{s}`"));
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(KernelSpec::File(PathBuf::from(path)));
        }
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        Ok(match (head, arg) {
            ("constant", None) => KernelSpec::Constant,
            ("additive", None) => KernelSpec::Additive,
            ("inverse-twist", a) => KernelSpec::InverseTwist {
                a: a.map_or(Ok(1), str::parse).map_err(|_| bad())?,
            },
            ("random-unimodular", seed) => KernelSpec::RandomUnimodular {
                seed: seed
                    .map_or(Ok(defaults::KERNEL_SEED), str::parse)
                    .map_err(|_| bad())?,
            },
            (name, None) if name.starts_with("kl") => {
                let (k, tag) = name[2..].split_once('-').ok_or_else(bad)?;
                let combiner = match tag {
                    "product" => Combiner::Product,
                    "twist" => Combiner::Twist,
                    _ => return Err(bad()),
                };
                let k: u32 = k.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(bad());
                }
                KernelSpec::HyperKloosterman { k, combiner }
            }
            _ => return Err(bad()),
        })
    }
}
