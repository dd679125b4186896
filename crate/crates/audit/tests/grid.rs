use vdc_audit::grid::{header, render_csv, run_grid, GridSpec};

const HEADER_K2: &str = "c,M,N,kernel,scheme,seed,k,L,search_exhaustive,lhs_abs,rhs_total,ratio,trivial_ratio,term_diag,term_chain_1,term_chain_2,term_tail,argmax_tuple,error";

fn spec(text: &str) -> GridSpec {
    GridSpec::from_json(text).unwrap()
}

#[test]
fn two_moduli_by_two_seeds() {
    let s = spec(
        r#"{"moduli": [101, 103], "kernels": ["kl2-product"], "schemes": ["random-signs"],
                    "seeds": [1, 2], "sizes": [[12, 12]]}"#,
    );
    let (h, rows) = run_grid(&s).unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(h.len(), 18);
    let order: Vec<(&str, &str)> = rows
        .iter()
        .map(|r| (r[0].as_str(), r[5].as_str()))
        .collect();
    assert_eq!(
        order,
        [("101", "1"), ("101", "2"), ("103", "1"), ("103", "2")]
    );
    assert!(rows.iter().all(|r| r.last().unwrap().is_empty()));
}

#[test]
fn header_is_fixed() {
    assert_eq!(header(2).join(","), HEADER_K2);
    let s = spec(
        r#"{"moduli": [31], "kernels": ["additive"], "schemes": ["all-ones"],
                    "seeds": [1], "sizes": [[4, 4]], "depths": [1, 2]}"#,
    );
    let csv = String::from_utf8(render_csv(&s).unwrap()).unwrap();
    assert_eq!(csv.lines().next().unwrap(), HEADER_K2);
    let rows: Vec<Vec<&str>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    // k = 1 leaves both chain columns empty; k = 2 fills only the first.
    assert_eq!((rows[0][14], rows[0][15]), ("", ""));
    assert!(!rows[1][14].is_empty() && rows[1][15].is_empty());
    assert_eq!(rows[1][17].split(';').count(), 2);
}

#[test]
fn constant_kernel_rows_have_unit_trivial_ratio() {
    let s = spec(
        r#"{"moduli": [40, 64], "kernels": ["constant", "random-unimodular:1"],
                    "schemes": ["all-ones"], "seeds": [1], "size_divisors": [[8, 8], [5, 8]]}"#,
    );
    let (_, rows) = run_grid(&s).unwrap();
    let constant: Vec<_> = rows.iter().filter(|r| r[3] == "constant").collect();
    assert_eq!(constant.len(), 4);
    for r in constant {
        let t: f64 = r[12].parse().unwrap();
        assert!((t - 1.0).abs() < 1e-12, "{r:?}");
    }
}

#[test]
fn cell_failures_do_not_abort() {
    let s = spec(
        r#"{"moduli": [12, 13], "kernels": ["kl2-product"], "schemes": ["random-signs"],
                    "seeds": [1], "sizes": [[2, 2]], "depths": [1, 3], "budget": 100}"#,
    );
    let (_, rows) = run_grid(&s).unwrap();
    assert_eq!(rows.len(), 4);
    let errors: Vec<&str> = rows.iter().map(|r| r.last().unwrap().as_str()).collect();
    assert!(errors[0].contains("not prime"), "{errors:?}");
    assert!(errors[1].contains("budget"), "{errors:?}");
    assert!(errors[2].is_empty());
    assert!(errors[3].contains("budget"));
    assert!(rows[0][9].is_empty() && rows[0][7] == "6");
}

#[test]
fn reruns_are_byte_identical() {
    let text = r#"{"moduli": [29, 37], "kernels": ["kl2-twist", "inverse-twist:3"],
                   "schemes": ["random-phases", "random-signs"], "seeds": {"from": 1, "to": 3},
                   "size_divisors": [[6, 6]], "depths": [1, 2],
                   "search": {"sampled": {"count": 20, "seed": 7}}}"#;
    let mut s = spec(text);
    let a = render_csv(&s).unwrap();
    s.workers = Some(1);
    let b = render_csv(&s).unwrap();
    s.workers = Some(6);
    let c = render_csv(&s).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    let text = String::from_utf8(a).unwrap();
    assert!(text.lines().skip(1).any(|l| l.contains(",false,")));
}

#[test]
fn invalid_specs_are_rejected() {
    for bad in [
        r#"{"moduli": [], "kernels": ["constant"], "schemes": ["all-ones"], "seeds": [1], "sizes": [[2, 2]]}"#,
        r#"{"moduli": [7], "kernels": ["bogus"], "schemes": ["all-ones"], "seeds": [1], "sizes": [[2, 2]]}"#,
        r#"{"moduli": [7], "kernels": ["constant"], "schemes": ["all-ones"], "seeds": [1], "sizes": [[2, 5]]}"#,
        r#"{"moduli": [7], "kernels": ["constant"], "schemes": ["all-ones"], "seeds": [1], "sizes": [[2, 2]], "ratio_band": 0.5}"#,
        r#"{"moduli": [7], "kernels": ["constant"], "schemes": ["all-ones"], "seeds": [1], "sizes": [[2, 2]], "typo": 1}"#,
        r#"{"moduli": [7], "kernels": ["constant"], "schemes": ["all-ones"], "seeds": [1], "sizes": [[2, 2]], "depths": [0]}"#,
    ] {
        assert!(GridSpec::from_json(bad).is_err(), "{bad}");
    }
    let wide = r#"{"moduli": [7], "kernels": ["constant"], "schemes": ["all-ones"], "seeds": [1],
                   "sizes": [[2, 5]], "ratio_band": 3}"#;
    assert!(GridSpec::from_json(wide).is_ok());
}
