//! Parameter-grid sweeps: a JSON spec in, one CSV row per cell out.
//!
//! Cells are enumerated in the order `c, kernel, scheme, seed, (M, N), k`
//! and run concurrently; rows are emitted in enumeration order, so the
//! output does not depend on the worker count.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;
use vdc_core::bounds::{AlphaExponentMode, BoundConfig, SearchMode, SupremumScope};
use vdc_core::{Kernel64, Scheme};

use crate::defaults;
use crate::error::{AuditError, AuditResult};
use crate::kernel_spec::KernelSpec;
use crate::record::{audit_cell, CellSpec};

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Seeds {
    List(Vec<u64>),
    /// Inclusive range.
    Range {
        from: u64,
        to: u64,
    },
}

impl Seeds {
    pub fn expand(&self) -> Vec<u64> {
        match self {
            Seeds::List(v) => v.clone(),
            Seeds::Range { from, to } => (*from..=*to).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SearchSpec {
    #[default]
    Exhaustive,
    Sampled {
        #[serde(default = "default_sample_count")]
        count: usize,
        #[serde(default)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaModeSpec {
    #[default]
    AsStated,
    Recomposed,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ScopeSpec {
    #[default]
    Joint,
    PerTerm,
}

fn default_sample_count() -> usize {
    defaults::SAMPLE_COUNT
}
fn default_depths() -> Vec<usize> {
    vec![1]
}
fn default_shift_cap() -> f64 {
    defaults::SHIFT_CAP_CONSTANT
}
fn default_band() -> f64 {
    defaults::RATIO_BAND
}
fn default_budget() -> u64 {
    defaults::BUDGET as u64
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub moduli: Vec<u64>,
    pub kernels: Vec<String>,
    pub schemes: Vec<String>,
    pub seeds: Seeds,
    /// Absolute `[M, N]` pairs.
    #[serde(default)]
    pub sizes: Vec<[u64; 2]>,
    /// `[a, b]` meaning `M = max(1, c / a)`, `N = max(1, c / b)`.
    #[serde(default)]
    pub size_divisors: Vec<[u64; 2]>,
    #[serde(default = "default_depths")]
    pub depths: Vec<usize>,
    #[serde(default = "default_shift_cap")]
    pub shift_cap_constant: f64,
    #[serde(default = "default_band")]
    pub ratio_band: f64,
    #[serde(default)]
    pub search: SearchSpec,
    #[serde(default)]
    pub alpha_exponent_mode: AlphaModeSpec,
    #[serde(default)]
    pub scope: ScopeSpec,
    #[serde(default = "default_budget")]
    pub budget: u64,
    /// Worker cap; all cores when absent.
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl GridSpec {
    pub fn from_json(text: &str) -> AuditResult<Self> {
        let spec: GridSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> AuditResult<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn bound_config(&self) -> BoundConfig {
        BoundConfig {
            depth: 1,
            shift_cap_constant: self.shift_cap_constant,
            search: match self.search {
                SearchSpec::Exhaustive => SearchMode::Exhaustive,
                SearchSpec::Sampled { count, seed } => SearchMode::Sampled { count, seed },
            },
            alpha_exponent: match self.alpha_exponent_mode {
                AlphaModeSpec::AsStated => AlphaExponentMode::AsStated,
                AlphaModeSpec::Recomposed => AlphaExponentMode::Recomposed,
            },
            scope: match self.scope {
                ScopeSpec::Joint => SupremumScope::Joint,
                ScopeSpec::PerTerm => SupremumScope::PerTerm,
            },
            budget: self.budget as u128,
        }
    }

    pub fn kernel_specs(&self) -> AuditResult<Vec<KernelSpec>> {
        self.kernels.iter().map(|k| k.parse()).collect()
    }

    pub fn scheme_list(&self) -> AuditResult<Vec<Scheme>> {
        self.schemes
            .iter()
            .map(|s| s.parse().map_err(AuditError::from))
            .collect()
    }

    /// `(M, N)` pairs for modulus `c`: absolute sizes first, then divisors.
    pub fn sizes_for(&self, c: u64) -> Vec<(u64, u64)> {
        let mut out: Vec<(u64, u64)> = self.sizes.iter().map(|&[m, n]| (m, n)).collect();
        out.extend(
            self.size_divisors
                .iter()
                .map(|&[a, b]| ((c / a).max(1), (c / b).max(1))),
        );
        out
    }

    pub fn validate(&self) -> AuditResult<()> {
        let fail = |msg: String| Err(AuditError::Config(msg));
        for (name, empty) in [
            ("moduli", self.moduli.is_empty()),
            ("kernels", self.kernels.is_empty()),
            ("schemes", self.schemes.is_empty()),
            ("seeds", self.seeds.expand().is_empty()),
            (
                "sizes",
                self.sizes.is_empty() && self.size_divisors.is_empty(),
            ),
            ("depths", self.depths.is_empty()),
        ] {
            if empty {
                return fail(format!("`{name}` must not be empty"));
            }
        }
        if self.depths.contains(&0) {
            return fail("depths must be >= 1".into());
        }
        if !(self.ratio_band >= 1.0) {
            return fail(format!("ratio_band must be >= 1, got {}", self.ratio_band));
        }
        if !(self.shift_cap_constant > 0.0) {
            return fail(format!(
                "shift_cap_constant must be > 0, got {}",
                self.shift_cap_constant
            ));
        }
        if self.size_divisors.iter().any(|&[a, b]| a == 0 || b == 0) {
            return fail("size divisors must be >= 1".into());
        }
        if self.workers == Some(0) {
            return fail("workers must be >= 1".into());
        }
        self.kernel_specs()?;
        self.scheme_list()?;
        for &c in &self.moduli {
            vdc_core::Modulus::new(c)?;
            for (m, n) in self.sizes_for(c) {
                if m == 0 || n == 0 {
                    return fail(format!("sizes must be >= 1, got ({m}, {n})"));
                }
                let r = m as f64 / n as f64;
                if r > self.ratio_band || r < 1.0 / self.ratio_band {
                    return fail(format!(
                        "(M, N) = ({m}, {n}) for c = {c} is outside the ratio band {}",
                        self.ratio_band
                    ));
                }
            }
        }
        Ok(())
    }

    /// Every cell, in output order.
    pub fn cells(&self) -> AuditResult<Vec<CellSpec>> {
        let kernels = self.kernel_specs()?;
        let schemes = self.scheme_list()?;
        let seeds = self.seeds.expand();
        let mut out = Vec::new();
        for &c in &self.moduli {
            for kernel in &kernels {
                for &scheme in &schemes {
                    for &seed in &seeds {
                        for (m, n) in self.sizes_for(c) {
                            for &depth in &self.depths {
                                out.push(CellSpec {
                                    c,
                                    kernel: kernel.clone(),
                                    scheme,
                                    seed,
                                    m,
                                    n,
                                    depth,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn max_depth(&self) -> usize {
        self.depths.iter().copied().max().unwrap_or(1)
    }
}

/// CSV header for chain columns `1..=kmax`.
pub fn header(kmax: usize) -> Vec<String> {
    let mut h: Vec<String> = [
        "c",
        "M",
        "N",
        "kernel",
        "scheme",
        "seed",
        "k",
        "L",
        "search_exhaustive",
        "lhs_abs",
        "rhs_total",
        "ratio",
        "trivial_ratio",
        "term_diag",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    h.extend((1..=kmax).map(|j| format!("term_chain_{j}")));
    h.extend(
        ["term_tail", "argmax_tuple", "error"]
            .iter()
            .map(|s| s.to_string()),
    );
    h
}

fn row(
    cell: &CellSpec,
    cfg: &BoundConfig,
    kmax: usize,
    kernel: Result<&Kernel64, &str>,
) -> Vec<String> {
    let mut out = vec![
        cell.c.to_string(),
        cell.m.to_string(),
        cell.n.to_string(),
        cell.kernel.to_string(),
        cell.scheme.to_string(),
        cell.seed.to_string(),
        cell.depth.to_string(),
        cell.shift_bound(cfg).to_string(),
    ];
    let width = 9 + kmax;
    // Budget errors take precedence over kernel errors, as in a single audit.
    let result = cell
        .precheck(cfg)
        .map_err(|e| e.to_string())
        .and_then(|_| kernel.map_err(str::to_string))
        .and_then(|k| audit_cell(k, cell, cfg).map_err(|e| e.to_string()));
    match result {
        Ok(a) => {
            let th = &a.theorem;
            out.push(th.search_exhaustive.to_string());
            out.push(a.lhs_abs.to_string());
            out.push(th.rhs_total.to_string());
            out.push(a.ratio.to_string());
            out.push(a.trivial_ratio.to_string());
            out.push(th.term("diag").map(|v| v.to_string()).unwrap_or_default());
            for j in 1..=kmax {
                out.push(
                    th.term(&format!("chain_{j}"))
                        .map(|v| v.to_string())
                        .unwrap_or_default(),
                );
            }
            out.push(th.term("tail").map(|v| v.to_string()).unwrap_or_default());
            out.push(th.argmax_tuple.to_csv_field());
            out.push(String::new());
        }
        Err(e) => {
            out.extend(std::iter::repeat_n(String::new(), width - 1));
            out.push(e);
        }
    }
    out
}

/// Runs every cell and returns the header and rows in output order.
pub fn run_grid(spec: &GridSpec) -> AuditResult<(Vec<String>, Vec<Vec<String>>)> {
    spec.validate()?;
    let cells = spec.cells()?;
    let cfg = spec.bound_config();
    let kmax = spec.max_depth();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = spec.workers {
        pool = pool.num_threads(w);
    }
    let pool = pool.build()?;

    pool.install(|| {
        // One kernel per (c, kernel), built only if some cell will use it.
        let mut groups: Vec<(u64, KernelSpec)> = Vec::new();
        for cell in &cells {
            let key = (cell.c, cell.kernel.clone());
            if !groups.contains(&key) && cell.precheck(&cfg).is_ok() {
                groups.push(key);
            }
        }
        let built: Vec<Result<Kernel64, String>> = groups
            .par_iter()
            .map(|(c, k)| k.build(*c).map_err(|e| e.to_string()))
            .collect();
        let index: HashMap<(u64, KernelSpec), usize> = groups
            .into_iter()
            .enumerate()
            .map(|(i, key)| (key, i))
            .collect();

        let rows = cells
            .par_iter()
            .map(|cell| {
                // A missing group means every cell in it fails its precheck.
                let kernel = match index.get(&(cell.c, cell.kernel.clone())) {
                    Some(&i) => built[i].as_ref().map_err(String::as_str),
                    None => Err("kernel not built"),
                };
                row(cell, &cfg, kmax, kernel)
            })
            .collect();
        Ok((header(kmax), rows))
    })
}

pub fn write_csv<W: Write>(header: &[String], rows: &[Vec<String>], out: W) -> AuditResult<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// The full CSV document for `spec`.
pub fn render_csv(spec: &GridSpec) -> AuditResult<Vec<u8>> {
    let (header, rows) = run_grid(spec)?;
    let mut buf = Vec::new();
    write_csv(&header, &rows, &mut buf)?;
    Ok(buf)
}
