//! Every bound in the differencing chain, evaluated numerically.
//!
//! Two kinds of inequality live here. The Cauchy-Schwarz steps
//! ([`trivial_bound`], [`cs_step_audit`]) hold with constant one and are
//! asserted. The Poisson-based bounds ([`one_step_bound`],
//! [`iteration_bound`], [`theorem_rhs`]) hide unspecified constants, so they
//! are only evaluated and their ratio to `|S_K|` is reported.
//!
//! All of the latter take a supremum over shift tuples `(l_1, ..., l_k)` with
//! `|l_i| <= L = floor(C_l c / N)`. Tuples are visited in lexicographic order
//! through a [`PrefixChain`], so each shared prefix of `Lambda` applications
//! is computed once; ties go to the lexicographically smallest tuple.

use num_complex::Complex;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bilinear::{
    bilinear_sum, eval_bilinear, kernel_mass_on_box, seq_norm, CoefficientSequence,
};
use crate::correlation::{k2inf_norm, PrefixChain, ShiftTuple};
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::residue::gcd;
use crate::scalar::Real;
use crate::spectral::TestFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    /// `count` distinct tuples drawn uniformly with a fixed seed, plus the zero tuple.
    Sampled {
        count: usize,
        seed: u64,
    },
}

/// Exponent of `||alpha||_2` in the final term of [`theorem_rhs`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaExponentMode {
    /// `-1/2^k`: the final term then has alpha-degree `1 - 1/2^k`.
    AsStated,
    /// `0`: what composing the iteration bound with the final trivial bound
    /// produces; makes the right side degree-1 homogeneous in `alpha`.
    Recomposed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupremumScope {
    /// One tuple governs every term.
    Joint,
    /// Each term takes its own supremum; an upper bound for `Joint`.
    PerTerm,
}

/// Which pairs enter the sum of `|K|^2` in [`trivial_bound`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GcdFilter {
    All,
    /// Only `(m, n) = (mn, c) = 1`; dominates `|S_K|` only when the
    /// coefficients vanish off those pairs.
    Coprime,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundConfig {
    pub depth: usize,
    pub shift_cap_constant: f64,
    pub search: SearchMode,
    pub alpha_exponent: AlphaExponentMode,
    pub scope: SupremumScope,
    /// Maximum number of shift tuples a search may evaluate.
    pub budget: u128,
}

impl Default for BoundConfig {
    fn default() -> Self {
        Self {
            depth: 1,
            shift_cap_constant: 1.0,
            search: SearchMode::Exhaustive,
            alpha_exponent: AlphaExponentMode::AsStated,
            scope: SupremumScope::Joint,
            budget: 10_000,
        }
    }
}

impl BoundConfig {
    pub fn with_depth(self, depth: usize) -> Self {
        Self { depth, ..self }
    }

    /// `L = floor(C_l c / N)`.
    pub fn shift_bound(&self, c: u64, n_start: u64) -> u64 {
        (self.shift_cap_constant * c as f64 / n_start as f64).floor() as u64
    }

    /// Size of the full lattice `(2L + 1)^k`.
    pub fn tuple_space(&self, bound: u64) -> u128 {
        (2 * bound as u128 + 1).saturating_pow(self.depth as u32)
    }

    /// Number of tuples a search with shift bound `bound` will visit.
    pub fn planned_tuples(&self, bound: u64) -> u128 {
        let space = self.tuple_space(bound);
        match self.search {
            SearchMode::Exhaustive => space,
            SearchMode::Sampled { count, .. } => space.min(count as u128 + 1),
        }
    }

    /// `BudgetExceeded` if the search would visit more tuples than allowed.
    pub fn check_budget(&self, bound: u64) -> Result<()> {
        if self.depth == 0 {
            return Err(Error::InvalidArgument("depth k must be >= 1".into()));
        }
        let tuples = self.planned_tuples(bound);
        if tuples > self.budget {
            return Err(Error::BudgetExceeded {
                tuples,
                budget: self.budget,
            });
        }
        Ok(())
    }
}

/// The tuples a search visits, in lexicographic order, and whether they cover
/// the whole lattice.
pub fn search_tuples(cfg: &BoundConfig, bound: u64) -> Result<(Vec<Vec<i64>>, bool)> {
    cfg.check_budget(bound)?;
    let base = 2 * bound + 1;
    let space = cfg.tuple_space(bound) as u64;
    let decode = |mut i: u64| {
        let mut t = vec![0i64; cfg.depth];
        for slot in t.iter_mut().rev() {
            *slot = (i % base) as i64 - bound as i64;
            i /= base;
        }
        t
    };
    let indices: Vec<u64> = match cfg.search {
        SearchMode::Sampled { count, seed } if (count as u64) < space => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut picked: Vec<u64> = index::sample(&mut rng, space as usize, count)
                .into_iter()
                .map(|i| i as u64)
                .collect();
            // Index of the all-zeros tuple: every digit equal to `bound`.
            let zero = (0..cfg.depth).fold(0u64, |acc, _| acc * base + bound);
            if !picked.contains(&zero) {
                picked.push(zero);
            }
            picked.sort_unstable();
            picked
        }
        _ => (0..space).collect(),
    };
    let exhaustive = indices.len() as u64 == space;
    Ok((indices.into_iter().map(decode).collect(), exhaustive))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term<T: Real> {
    pub label: String,
    pub value: T,
}

/// Per-term breakdown of one bound evaluation.
///
/// Term values are normalized by `prefactor`, so that
/// `rhs_total = prefactor * sum(terms)` up to rounding.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport<T: Real> {
    pub prefactor: T,
    pub terms: Vec<Term<T>>,
    pub argmax_tuple: ShiftTuple,
    pub rhs_total: T,
    pub search_exhaustive: bool,
    pub tuples_evaluated: usize,
    pub lhs_abs: T,
    pub ratio: T,
}

impl<T: Real> BoundReport<T> {
    pub fn term(&self, label: &str) -> Option<T> {
        self.terms
            .iter()
            .find(|t| t.label == label)
            .map(|t| t.value)
    }

    pub fn term_sum(&self) -> T {
        self.terms.iter().map(|t| t.value).sum()
    }
}

fn lit<T: Real>(x: u64) -> T {
    T::from_u64(x).unwrap()
}

/// `2^{-j}`.
fn dyadic<T: Real>(j: usize) -> T {
    T::lit(0.5).powi(j as i32)
}

/// `sqrt(c M N) ||alpha|| ||beta||`.
fn prefactor<T: Real>(c: u64, alpha: &CoefficientSequence<T>, beta: &CoefficientSequence<T>) -> T {
    (lit::<T>(c) * lit::<T>(alpha.start()) * lit::<T>(beta.start())).sqrt()
        * seq_norm(alpha)
        * seq_norm(beta)
}

fn term<T: Real>(label: impl Into<String>, value: T) -> Term<T> {
    Term {
        label: label.into(),
        value,
    }
}

fn chain_label(j: usize) -> String {
    format!("chain_{j}")
}

fn safe_div<T: Real>(a: T, b: T) -> T {
    if b == T::zero() {
        T::zero()
    } else {
        a / b
    }
}

/// `sqrt(MN) ||alpha|| ||beta|| (sum |K(m, n)|^2)^{1/2}`.
pub fn trivial_bound<T: Real>(
    kernel: &Kernel<T>,
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
    filter: GcdFilter,
) -> T {
    let (m0, n0) = (alpha.start(), beta.start());
    let mass = match filter {
        GcdFilter::All => kernel_mass_on_box(kernel, m0, n0),
        GcdFilter::Coprime => {
            let c = kernel.c();
            let mut total = T::zero();
            for m in m0..2 * m0 {
                for n in n0..2 * n0 {
                    if gcd(m, n) == 1 && gcd((m % c) * (n % c) % c, c) == 1 {
                        total += kernel.get(m as i64, n as i64).norm_sqr();
                    }
                }
            }
            total
        }
    };
    (lit::<T>(m0) * lit::<T>(n0)).sqrt() * seq_norm(alpha) * seq_norm(beta) * mass.sqrt()
}

/// The completed trivial bound and the constant that makes it dominate the exact one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FinalTrivialBound<T: Real> {
    /// `min(sqrt M, sqrt N) sqrt(c M N) ||alpha|| ||beta|| ||K||_{2,inf}`.
    pub value: T,
    /// [`trivial_bound`] with [`GcdFilter::All`].
    pub exact: T,
    /// `exact / value`: the implied constant needed on this instance.
    pub constant: T,
}

pub fn final_trivial_bound<T: Real>(
    kernel: &Kernel<T>,
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
) -> FinalTrivialBound<T> {
    let (m0, n0) = (lit::<T>(alpha.start()), lit::<T>(beta.start()));
    let value =
        m0.sqrt().min(n0.sqrt()) * prefactor(kernel.c(), alpha, beta) * k2inf_norm(kernel).k2inf;
    let exact = trivial_bound(kernel, alpha, beta, GcdFilter::All);
    FinalTrivialBound {
        value,
        exact,
        constant: safe_div(exact, value),
    }
}

/// `|S_K|` against `N ||beta|| ((1/N) sum_n |sum_m alpha_m K(m, n)|^2 V(n/N))^{1/2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CsAudit<T: Real> {
    pub lhs: T,
    pub rhs: T,
}

/// Grid resolution of the majorant check in [`cs_step_audit`].
pub const MAJORANT_SAMPLES: usize = 4096;

pub fn cs_step_audit<T: Real>(
    kernel: &Kernel<T>,
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
    weight: &TestFunction<T>,
) -> Result<CsAudit<T>> {
    weight.check_majorant(MAJORANT_SAMPLES)?;
    let n0 = beta.start();
    let nf = lit::<T>(n0);
    let (s0, s1) = weight.support();
    let lo = (s0 * nf).ceil().to_i64().unwrap().max(i64::MIN + 1);
    let hi = (s1 * nf).floor().to_i64().unwrap();
    let modulus = kernel.modulus();
    let mut weighted = T::zero();
    for n in lo..=hi {
        let w = weight.eval(T::from_i64(n).unwrap() / nf);
        if w == T::zero() {
            continue;
        }
        let col = modulus.reduce(n) as usize;
        let mut inner = Complex::new(T::zero(), T::zero());
        for (m, a) in alpha.iter() {
            inner += a * kernel.row(modulus.reduce(m as i64))[col];
        }
        weighted += inner.norm_sqr() * w;
    }
    let rhs = nf * seq_norm(beta) * (weighted / nf).sqrt();
    let lhs = bilinear_sum(alpha, beta, kernel).norm();
    Ok(CsAudit { lhs, rhs })
}

/// The two summands of the one-step bound at a fixed shift `l`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OneStepTerms<T: Real> {
    /// `sqrt(c M N) ||alpha|| ||beta|| ||K||_{2,inf}`.
    pub diagonal: T,
    /// `c^{1/4} sqrt N ||beta|| |S_{Lambda_l K}(M, M)|^{1/2}`.
    pub off_diagonal: T,
    /// `|S_{Lambda_l K}(M, M)|` with coefficients `(alpha, alpha)`.
    pub correlated_form: T,
}

impl<T: Real> OneStepTerms<T> {
    pub fn total(&self) -> T {
        self.diagonal + self.off_diagonal
    }
}

fn one_step_terms<T: Real>(
    kernel_norm: T,
    lambda_kernel: &Kernel<T>,
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
) -> OneStepTerms<T> {
    let c = lambda_kernel.c();
    let s = bilinear_sum(alpha, alpha, lambda_kernel).norm();
    let diagonal = prefactor(c, alpha, beta) * kernel_norm;
    let off_diagonal = lit::<T>(c).powf(T::lit(0.25))
        * lit::<T>(beta.start()).sqrt()
        * seq_norm(beta)
        * s.powf(T::lit(0.5));
    OneStepTerms {
        diagonal,
        off_diagonal,
        correlated_form: s,
    }
}

/// One-step bound evaluated at a single shift.
pub fn one_step_at<T: Real>(
    kernel: &Kernel<T>,
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
    shift: i64,
) -> OneStepTerms<T> {
    let lk = crate::correlation::lambda_op(kernel, shift);
    one_step_terms(k2inf_norm(kernel).k2inf, &lk, alpha, beta)
}

/// `sqrt(cMN) ||alpha|| ||beta|| ||K|| + c^{1/4} sqrt N ||beta|| sup_l |S_{Lambda_l K}(M, M)|^{1/2}`.
pub fn one_step_bound<T: Real>(
    kernel: &Kernel<T>,
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
    cfg: &BoundConfig,
) -> Result<BoundReport<T>> {
    let cfg = cfg.with_depth(1);
    let bound = cfg.shift_bound(kernel.c(), beta.start());
    let (tuples, exhaustive) = search_tuples(&cfg, bound)?;
    let norm = k2inf_norm(kernel).k2inf;
    let mut best: Option<(OneStepTerms<T>, i64)> = None;
    for t in &tuples {
        let lk = crate::correlation::lambda_op(kernel, t[0]);
        let terms = one_step_terms(norm, &lk, alpha, beta);
        if best.is_none_or(|(b, _)| terms.off_diagonal > b.off_diagonal) {
            best = Some((terms, t[0]));
        }
    }
    let (terms, shift) = best.expect("at least one tuple");
    let pre = prefactor(kernel.c(), alpha, beta);
    let rhs_total = terms.total();
    let lhs_abs = bilinear_sum(alpha, beta, kernel).norm();
    Ok(BoundReport {
        prefactor: pre,
        terms: vec![
            term("diag", safe_div(terms.diagonal, pre)),
            term("tail", safe_div(terms.off_diagonal, pre)),
        ],
        argmax_tuple: ShiftTuple::new(vec![shift], bound)?,
        rhs_total,
        search_exhaustive: exhaustive,
        tuples_evaluated: tuples.len(),
        lhs_abs,
        ratio: safe_div(lhs_abs, rhs_total),
    })
}

/// Components of the iteration bound at one tuple, before any supremum.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationTerms<T: Real> {
    pub prefactor: T,
    /// `||K||`, then `||Lambda_{l_j} ... Lambda_{l_1} K||^{1/2^j}` for `j < k`.
    pub norm_terms: Vec<T>,
    /// `|S_{Lambda_{l_k} ... Lambda_{l_1} K}(M, M)|` with coefficients `(alpha, alpha)`.
    pub correlated_form: T,
    /// `c^{1/2 - 1/2^{k+1}} sqrt N M^{1/2 - 1/2^k} ||alpha||^{1 - 1/2^{k-1}} ||beta|| S^{1/2^k}`.
    pub tail: T,
}

impl<T: Real> IterationTerms<T> {
    pub fn total(&self) -> T {
        let head: T = self.norm_terms.iter().copied().sum();
        self.prefactor * head + self.tail
    }
}

/// Coefficient of `S^{1/2^k}` in the iteration bound.
fn iteration_tail_coefficient<T: Real>(
    c: u64,
    depth: usize,
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
) -> T {
    let half = T::lit(0.5);
    lit::<T>(c).powf(half - dyadic::<T>(depth + 1))
        * lit::<T>(beta.start()).sqrt()
        * lit::<T>(alpha.start()).powf(half - dyadic::<T>(depth))
        * seq_norm(alpha).powf(T::one() - dyadic::<T>(depth - 1))
        * seq_norm(beta)
}

fn iteration_terms_from_chain<T: Real>(
    kernel_norm: T,
    chain: &PrefixChain<'_, T>,
    depth: usize,
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
    c: u64,
) -> IterationTerms<T> {
    let mut norm_terms = vec![kernel_norm];
    for j in 1..depth {
        norm_terms.push(chain.norm(j).powf(dyadic::<T>(j)));
    }
    let s = bilinear_sum(alpha, alpha, chain.level(depth)).norm();
    let tail = iteration_tail_coefficient(c, depth, alpha, beta) * s.powf(dyadic::<T>(depth));
    IterationTerms {
        prefactor: prefactor(c, alpha, beta),
        norm_terms,
        correlated_form: s,
        tail,
    }
}

/// The iteration bound at one fixed tuple.
pub fn iteration_at<T: Real>(
    kernel: &Kernel<T>,
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
    tuple: &[i64],
) -> Result<IterationTerms<T>> {
    if tuple.is_empty() {
        return Err(Error::InvalidArgument("depth k must be >= 1".into()));
    }
    let mut chain = PrefixChain::new(kernel);
    chain.advance(tuple);
    Ok(iteration_terms_from_chain(
        k2inf_norm(kernel).k2inf,
        &chain,
        tuple.len(),
        alpha,
        beta,
        kernel.c(),
    ))
}

fn iteration_report<T: Real>(
    best: IterationTerms<T>,
    tuple: Vec<i64>,
    bound: u64,
    exhaustive: bool,
    evaluated: usize,
    lhs_abs: T,
) -> Result<BoundReport<T>> {
    let pre = best.prefactor;
    let mut terms = vec![term("diag", best.norm_terms[0])];
    for (j, v) in best.norm_terms.iter().enumerate().skip(1) {
        terms.push(term(chain_label(j), *v));
    }
    terms.push(term("tail", safe_div(best.tail, pre)));
    let rhs_total = best.total();
    Ok(BoundReport {
        prefactor: pre,
        terms,
        argmax_tuple: ShiftTuple::new(tuple, bound)?,
        rhs_total,
        search_exhaustive: exhaustive,
        tuples_evaluated: evaluated,
        lhs_abs,
        ratio: safe_div(lhs_abs, rhs_total),
    })
}

/// Joint supremum over tuples of the iteration bound at depth `cfg.depth`.
pub fn iteration_bound<T: Real>(
    kernel: &Kernel<T>,
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
    cfg: &BoundConfig,
) -> Result<BoundReport<T>> {
    let depth = cfg.depth;
    let bound = cfg.shift_bound(kernel.c(), beta.start());
    let (tuples, exhaustive) = search_tuples(cfg, bound)?;
    let norm = k2inf_norm(kernel).k2inf;
    let mut chain = PrefixChain::new(kernel);
    let mut best: Option<(IterationTerms<T>, T, usize)> = None;
    for (i, t) in tuples.iter().enumerate() {
        chain.advance(t);
        let terms = iteration_terms_from_chain(norm, &chain, depth, alpha, beta, kernel.c());
        let total = terms.total();
        if best.as_ref().is_none_or(|(_, b, _)| total > *b) {
            best = Some((terms, total, i));
        }
    }
    let (terms, _, i) = best.expect("at least one tuple");
    let lhs = bilinear_sum(alpha, beta, kernel).norm();
    iteration_report(
        terms,
        tuples[i].clone(),
        bound,
        exhaustive,
        tuples.len(),
        lhs,
    )
}

/// Parenthesized terms of the theorem's right side at one tuple.
fn theorem_terms<T: Real>(
    kernel_norm: T,
    chain: &PrefixChain<'_, T>,
    depth: usize,
    alpha_factor: T,
) -> Vec<T> {
    let mut out = vec![kernel_norm];
    for j in 1..depth {
        out.push(chain.norm(j).powf(dyadic::<T>(j)));
    }
    out.push(alpha_factor * chain.norm(depth).powf(dyadic::<T>(depth)));
    out
}

fn theorem_alpha_factor<T: Real>(
    alpha: &CoefficientSequence<T>,
    depth: usize,
    mode: AlphaExponentMode,
) -> Result<T> {
    let alpha_norm = seq_norm(alpha);
    let alpha_power = match mode {
        AlphaExponentMode::AsStated => {
            if alpha_norm == T::zero() {
                return Err(Error::DegenerateCoefficients);
            }
            alpha_norm.powf(-dyadic::<T>(depth))
        }
        AlphaExponentMode::Recomposed => T::one(),
    };
    Ok(lit::<T>(alpha.start()).powf(dyadic::<T>(depth + 1)) * alpha_power)
}

/// The theorem's right side at one fixed tuple.
#[derive(Clone, Debug, PartialEq)]
pub struct TheoremTerms<T: Real> {
    pub prefactor: T,
    /// Diagonal, chain terms `j = 1..k-1`, tail.
    pub terms: Vec<T>,
}

impl<T: Real> TheoremTerms<T> {
    pub fn total(&self) -> T {
        self.prefactor * self.terms.iter().copied().sum::<T>()
    }
}

pub fn theorem_at<T: Real>(
    kernel: &Kernel<T>,
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
    tuple: &[i64],
    mode: AlphaExponentMode,
) -> Result<TheoremTerms<T>> {
    if tuple.is_empty() {
        return Err(Error::InvalidArgument("depth k must be >= 1".into()));
    }
    let factor = theorem_alpha_factor(alpha, tuple.len(), mode)?;
    let mut chain = PrefixChain::new(kernel);
    chain.advance(tuple);
    Ok(TheoremTerms {
        prefactor: prefactor(kernel.c(), alpha, beta),
        terms: theorem_terms(k2inf_norm(kernel).k2inf, &chain, tuple.len(), factor),
    })
}

/// `sqrt(cMN) ||alpha|| ||beta|| sup_tuple (||K|| + sum_{j<k} ||Lambda^j K||^{1/2^j}
///  + M^{1/2^{k+1}} ||alpha||^e ||Lambda^k K||^{1/2^k})`.
pub fn theorem_rhs<T: Real>(
    kernel: &Kernel<T>,
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
    cfg: &BoundConfig,
) -> Result<BoundReport<T>> {
    let depth = cfg.depth;
    let bound = cfg.shift_bound(kernel.c(), beta.start());
    let (tuples, exhaustive) = search_tuples(cfg, bound)?;
    let alpha_factor = theorem_alpha_factor(alpha, depth, cfg.alpha_exponent)?;
    let norm = k2inf_norm(kernel).k2inf;

    let mut chain = PrefixChain::new(kernel);
    let mut joint: Option<(Vec<T>, T, usize)> = None;
    let mut per_term: Vec<T> = vec![T::neg_infinity(); depth + 1];
    let mut per_term_tail_arg = 0usize;
    for (i, t) in tuples.iter().enumerate() {
        chain.advance(t);
        let terms = theorem_terms(norm, &chain, depth, alpha_factor);
        let sum: T = terms.iter().copied().sum();
        if joint.as_ref().is_none_or(|(_, b, _)| sum > *b) {
            joint = Some((terms.clone(), sum, i));
        }
        // Per-term mode reports the tuple maximizing the tail.
        if terms[depth] > per_term[depth] {
            per_term_tail_arg = i;
        }
        for (slot, v) in per_term.iter_mut().zip(&terms) {
            *slot = slot.max(*v);
        }
    }
    let (joint_terms, _, joint_arg) = joint.expect("at least one tuple");
    let (values, arg) = match cfg.scope {
        SupremumScope::Joint => (joint_terms, joint_arg),
        SupremumScope::PerTerm => (per_term, per_term_tail_arg),
    };
    let pre = prefactor(kernel.c(), alpha, beta);
    let mut terms = vec![term("diag", values[0])];
    for (j, v) in values.iter().enumerate().take(depth).skip(1) {
        terms.push(term(chain_label(j), *v));
    }
    terms.push(term("tail", values[depth]));
    let sum: T = values.iter().copied().sum();
    let rhs_total = pre * sum;
    let lhs_abs = bilinear_sum(alpha, beta, kernel).norm();
    Ok(BoundReport {
        prefactor: pre,
        terms,
        argmax_tuple: ShiftTuple::new(tuples[arg].clone(), bound)?,
        rhs_total,
        search_exhaustive: exhaustive,
        tuples_evaluated: tuples.len(),
        lhs_abs,
        ratio: safe_div(lhs_abs, rhs_total),
    })
}

/// Sharpness measurement for one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditRecord<T: Real> {
    pub c: u64,
    pub m_start: u64,
    pub n_start: u64,
    pub shift_bound: u64,
    pub lhs_abs: T,
    pub theorem: BoundReport<T>,
    /// `lhs_abs / theorem.rhs_total`.
    pub ratio: T,
    /// Each term's fraction of the parenthesized sum.
    pub term_shares: Vec<Term<T>>,
    pub trivial_bound: T,
    /// `lhs_abs / trivial_bound`; at most one.
    pub trivial_ratio: T,
}

pub fn ratio_audit<T: Real>(
    kernel: &Kernel<T>,
    alpha: &CoefficientSequence<T>,
    beta: &CoefficientSequence<T>,
    cfg: &BoundConfig,
) -> Result<AuditRecord<T>> {
    let theorem = theorem_rhs(kernel, alpha, beta, cfg)?;
    let value = eval_bilinear(alpha, beta, kernel);
    let lhs_abs = value.value.norm();
    let sum = theorem.term_sum();
    let term_shares = theorem
        .terms
        .iter()
        .map(|t| term(t.label.clone(), safe_div(t.value, sum)))
        .collect();
    Ok(AuditRecord {
        c: kernel.c(),
        m_start: alpha.start(),
        n_start: beta.start(),
        shift_bound: cfg.shift_bound(kernel.c(), beta.start()),
        lhs_abs,
        ratio: safe_div(lhs_abs, theorem.rhs_total),
        theorem,
        term_shares,
        trivial_bound: value.trivial_cs_bound,
        trivial_ratio: safe_div(lhs_abs, value.trivial_cs_bound),
    })
}
