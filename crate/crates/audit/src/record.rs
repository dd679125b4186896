//! One audited cell and its JSON record.

use serde::Serialize;
use vdc_core::bilinear::gen_coefficients;
use vdc_core::bounds::{ratio_audit, BoundConfig};
use vdc_core::{AuditRecord64, Kernel64, Modulus, Scheme};

use crate::defaults::BETA_SEED_OFFSET;
use crate::error::{AuditError, AuditResult};
use crate::kernel_spec::KernelSpec;

/// Coordinates of one cell; `m` and `n` are the dyadic starts `M` and `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CellSpec {
    pub c: u64,
    pub kernel: KernelSpec,
    pub scheme: Scheme,
    pub seed: u64,
    pub m: u64,
    pub n: u64,
    pub depth: usize,
}

/// Seed for `beta` given the cell seed used for `alpha`.
pub fn beta_seed(seed: u64) -> u64 {
    seed.wrapping_add(BETA_SEED_OFFSET)
}

impl CellSpec {
    pub fn shift_bound(&self, cfg: &BoundConfig) -> u64 {
        cfg.shift_bound(self.c, self.n)
    }

    /// Cheap checks that need no kernel: sizes, and the tuple budget.
    pub fn precheck(&self, cfg: &BoundConfig) -> AuditResult<()> {
        if self.m == 0 || self.n == 0 {
            return Err(AuditError::Config("M and N must be >= 1".into()));
        }
        cfg.with_depth(self.depth)
            .check_budget(self.shift_bound(cfg))?;
        Ok(())
    }
}

/// Runs the ratio audit for `cell` against an already built kernel.
pub fn audit_cell(
    kernel: &Kernel64,
    cell: &CellSpec,
    cfg: &BoundConfig,
) -> AuditResult<AuditRecord64> {
    cell.precheck(cfg)?;
    let modulus = Modulus::new(cell.c)?;
    let alpha = gen_coefficients(cell.m, cell.scheme, cell.seed, &modulus)?;
    let beta = gen_coefficients(cell.n, cell.scheme, beta_seed(cell.seed), &modulus)?;
    Ok(ratio_audit(
        kernel,
        &alpha,
        &beta,
        &cfg.with_depth(cell.depth),
    )?)
}

#[derive(Clone, Debug, Serialize)]
pub struct LabeledValue {
    pub label: String,
    pub value: f64,
}

/// JSON form of an audit: the cell coordinates plus every report field.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub c: u64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub kernel: String,
    pub scheme: String,
    pub seed: u64,
    pub k: usize,
    #[serde(rename = "L")]
    pub shift_bound: u64,
    pub prefactor: f64,
    pub terms: Vec<LabeledValue>,
    pub term_shares: Vec<LabeledValue>,
    pub argmax_tuple: Vec<i64>,
    pub rhs_total: f64,
    pub search_exhaustive: bool,
    pub tuples_evaluated: usize,
    pub lhs_abs: f64,
    pub ratio: f64,
    pub trivial_bound: f64,
    pub trivial_ratio: f64,
}

impl Record {
    pub fn new(cell: &CellSpec, audit: &AuditRecord64) -> Self {
        let labeled = |ts: &[vdc_core::bounds::Term<f64>]| {
            ts.iter()
                .map(|t| LabeledValue {
                    label: t.label.clone(),
                    value: t.value,
                })
                .collect()
        };
        let th = &audit.theorem;
        Self {
            c: cell.c,
            m: cell.m,
            n: cell.n,
            kernel: cell.kernel.to_string(),
            scheme: cell.scheme.to_string(),
            seed: cell.seed,
            k: cell.depth,
            shift_bound: audit.shift_bound,
            prefactor: th.prefactor,
            terms: labeled(&th.terms),
            term_shares: labeled(&audit.term_shares),
            argmax_tuple: th.argmax_tuple.shifts().to_vec(),
            rhs_total: th.rhs_total,
            search_exhaustive: th.search_exhaustive,
            tuples_evaluated: th.tuples_evaluated,
            lhs_abs: audit.lhs_abs,
            ratio: audit.ratio,
            trivial_bound: audit.trivial_bound,
            trivial_ratio: audit.trivial_ratio,
        }
    }

    /// Multi-line term breakdown for humans.
    pub fn breakdown(&self) -> String {
        let mut out = format!(
            "c={} M={} N={} kernel={} scheme={} seed={} k={} L={}\n",
            self.c, self.m, self.n, self.kernel, self.scheme, self.seed, self.k, self.shift_bound
        );
        out += &format!("  prefactor   {:.6e}\n", self.prefactor);
        for (t, s) in self.terms.iter().zip(&self.term_shares) {
            out += &format!(
                "  {:<11} {:.6e}  ({:5.1}%)\n",
                t.label,
                t.value,
                100.0 * s.value
            );
        }
        let tuple: Vec<String> = self.argmax_tuple.iter().map(i64::to_string).collect();
        out += &format!(
            "  argmax      ({}) over {} tuples{}\n",
            tuple.join(", "),
            self.tuples_evaluated,
            if self.search_exhaustive {
                ""
            } else {
                " (sampled)"
            }
        );
        out += &format!("  |S_K|       {:.6e}\n", self.lhs_abs);
        out += &format!(
            "  rhs         {:.6e}  ratio {:.6e}\n",
            self.rhs_total, self.ratio
        );
        out += &format!(
            "  trivial     {:.6e}  ratio {:.6e}\n",
            self.trivial_bound, self.trivial_ratio
        );
        out
    }
}
