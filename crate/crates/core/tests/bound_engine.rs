mod common;

use common::*;
use vdc_core::bilinear::bilinear_sum;
use vdc_core::bounds::{
    iteration_at, iteration_bound, one_step_at, one_step_bound, ratio_audit, theorem_at,
    theorem_rhs, AlphaExponentMode, BoundConfig,
};
use vdc_core::correlation::k2inf_norm;
use vdc_core::kernels::{build_constant, build_random_unimodular, Kernel};
use vdc_core::CoefficientSequence64;

/// Every tuple in `[-bound, bound]^depth`, lexicographic.
fn lattice(bound: i64, depth: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..depth {
        out = out
            .into_iter()
            .flat_map(|t| {
                (-bound..=bound).map(move |l| {
                    let mut t = t.clone();
                    t.push(l);
                    t
                })
            })
            .collect();
    }
    out
}

/// Parenthesized theorem sum at a tuple, from the naive operator alone.
fn naive_theorem_sum(
    k: &Kernel<f64>,
    a: &CoefficientSequence64,
    tuple: &[i64],
    recomposed: bool,
) -> f64 {
    let depth = tuple.len();
    let mut sum = naive_norm(k);
    let mut cur = k.clone();
    for (j, &l) in tuple.iter().enumerate() {
        cur = naive_lambda(&cur, l);
        let w = 0.5f64.powi(j as i32 + 1);
        let v = naive_norm(&cur).powf(w);
        if j + 1 < depth {
            sum += v;
        } else {
            let alpha = if recomposed { 1.0 } else { l2(a).powf(-w) };
            sum += (a.start() as f64).powf(w / 2.0) * alpha * v;
        }
    }
    sum
}

#[test]
fn exhaustive_supremum_matches_brute_force() {
    for (c, size, depth, seed) in [
        (16u64, 4u64, 2usize, 1u64),
        (30, 3, 2, 2),
        (11, 2, 3, 3),
        (40, 2, 1, 4),
        (9, 9, 3, 5),
    ] {
        let k = mixed_kernel(c, seed, seed);
        let a = coefficients(size, 1, seed, c);
        let b = coefficients(size, 2, seed + 9, c);
        let cfg = BoundConfig::default().with_depth(depth);
        let bound = cfg.shift_bound(c, size) as i64;
        let tuples = lattice(bound, depth);
        assert!(tuples.len() <= 2000);
        for recomposed in [false, true] {
            let cfg = BoundConfig {
                alpha_exponent: if recomposed {
                    AlphaExponentMode::Recomposed
                } else {
                    AlphaExponentMode::AsStated
                },
                ..cfg
            };
            let best = tuples
                .iter()
                .map(|t| naive_theorem_sum(&k, &a, t, recomposed))
                .fold(f64::NEG_INFINITY, f64::max);
            let r = theorem_rhs(&k, &a, &b, &cfg).unwrap();
            let sum = r.term_sum();
            assert!(
                (sum - best).abs() <= 1e-9 * best,
                "c = {c}: {sum} vs {best}"
            );
            let at_argmax = naive_theorem_sum(&k, &a, r.argmax_tuple.shifts(), recomposed);
            assert!((at_argmax - best).abs() <= 1e-9 * best);
            assert_eq!(r.tuples_evaluated, tuples.len());
        }
    }
}

#[test]
fn depth_one_iteration_is_the_one_step_bound() {
    for seed in 0..10u64 {
        let c = 5 + 3 * seed;
        let k = mixed_kernel(c, seed, seed);
        let a = coefficients(1 + seed % 5, seed, seed, c);
        let b = coefficients(2 + seed % 3, seed + 1, seed, c);
        let cfg = BoundConfig::default();
        let it = iteration_bound(&k, &a, &b, &cfg).unwrap();
        let os = one_step_bound(&k, &a, &b, &cfg).unwrap();
        assert_eq!(it.rhs_total, os.rhs_total);
        assert_eq!(it.argmax_tuple, os.argmax_tuple);
        assert_eq!(it.terms, os.terms);
    }
}

#[test]
fn depth_two_expands_depth_one() {
    // Expanding S_{Lambda_l1 K}(alpha, alpha) by one more step and using
    // (x + y)^{1/2} <= x^{1/2} + y^{1/2} termwise reproduces depth two exactly.
    let c = 16u64;
    for seed in 0..5u64 {
        let k = build_random_unimodular::<f64>(&modulus(c), seed).unwrap();
        let a = coefficients(4, 1 + seed, seed, c);
        let b = coefficients(4, 2, seed + 11, c);
        let (m, n) = (a.start() as f64, b.start() as f64);
        let (na, nb) = (l2(&a), l2(&b));
        for t in lattice(2, 2) {
            let one = iteration_at(&k, &a, &b, &t[..1]).unwrap();
            let two = iteration_at(&k, &a, &b, &t).unwrap();
            let pre = (c as f64 * m * n).sqrt() * na * nb;
            let k1 = naive_lambda(&k, t[0]);
            let inner = one_step_at(&k1, &a, &a, t[1]);
            // Depth-one tail coefficient, and the one-step bound applied to Lambda_l1 K on M x M.
            let coef = (c as f64).powf(0.25) * n.sqrt() * nb;
            let expanded = pre * naive_norm(&k)
                + coef * ((c as f64 * m * m).sqrt() * na * na * naive_norm(&k1)).sqrt()
                + coef
                    * ((c as f64).powf(0.25) * m.sqrt() * na).sqrt()
                    * inner.correlated_form.powf(0.25);
            assert!(
                (two.total() - expanded).abs() <= 1e-9 * expanded,
                "tuple {t:?}"
            );
            assert!((one.correlated_form - bilinear_sum(&a, &a, &k1).norm()).abs() < 1e-9);
        }
    }
}

#[test]
fn recomposed_theorem_is_iteration_with_trivial_tail() {
    // Replacing |S_{K_k}(M, M)| by sqrt(M) sqrt(c M M) ||alpha||^2 ||K_k|| in
    // the iteration bound gives the recomposed theorem.
    let c = 16u64;
    for seed in 0..5u64 {
        let k = build_random_unimodular::<f64>(&modulus(c), 40 + seed).unwrap();
        let a = coefficients(4, 2, seed, c);
        let b = coefficients(4, 1, seed + 3, c);
        let (m, n) = (a.start() as f64, b.start() as f64);
        let (na, nb) = (l2(&a), l2(&b));
        for depth in 1..=2usize {
            for t in lattice(1, depth) {
                let it = iteration_at(&k, &a, &b, &t).unwrap();
                let th = theorem_at(&k, &a, &b, &t, AlphaExponentMode::Recomposed).unwrap();
                let mut last = k.clone();
                for &l in &t {
                    last = naive_lambda(&last, l);
                }
                let w = 0.5f64.powi(depth as i32);
                let trivial = m.sqrt() * (c as f64 * m * m).sqrt() * na * na * naive_norm(&last);
                let coef = (c as f64).powf(0.5 - w / 2.0)
                    * n.sqrt()
                    * m.powf(0.5 - w)
                    * na.powf(1.0 - 2.0 * w)
                    * nb;
                let head: f64 = it.norm_terms.iter().sum();
                let want = it.prefactor * head + coef * trivial.powf(w);
                assert!(
                    (th.total() - want).abs() <= 1e-9 * want,
                    "depth {depth} tuple {t:?}"
                );
            }
        }
    }
}

#[test]
fn constant_kernel_audit_is_the_equality_case() {
    let c = modulus(64);
    let k = build_constant::<f64>(&c).unwrap();
    let a = coefficients(7, 0, 0, 64);
    let b = coefficients(9, 0, 0, 64);
    let r = ratio_audit(&k, &a, &b, &BoundConfig::default()).unwrap();
    assert!((r.lhs_abs - 63.0).abs() < 1e-12);
    assert!((r.trivial_ratio - 1.0).abs() < 1e-12);
    assert_eq!(k2inf_norm(&k).k2inf, 1.0);
}
