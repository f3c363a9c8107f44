use dromion::ansatz::{check_admissibility, Verdict};
use dromion::catalog::{all_cases, build_case};
use dromion::field::{sample_field, FieldKind};

/// Peak of `4pq / (1 + p + q + 2pq)²` over `p, q > 0`: at `p = q = 1/√2`.
fn dromion_peak() -> f64 {
    let p = std::f64::consts::FRAC_1_SQRT_2;
    4.0 * p * p / (1.0 + 2.0 * p + 2.0 * p * p).powi(2)
}

#[test]
fn grid_maximum_converges_to_the_true_peak() {
    let e = build_case("dromion").unwrap();
    let peak = dromion_peak();
    let mut last = f64::INFINITY;
    for n in [16, 61, 251] {
        let g = sample_field(&e.spec, None, FieldKind::Intensity, &e.window, 0.0, (n, n)).unwrap();
        let gap = peak - g.global_max().unwrap().0;
        assert!(gap >= -1e-15, "grid exceeds the supremum at n = {n}");
        assert!(gap < last, "n = {n}: gap {gap} did not shrink from {last}");
        last = gap;
    }
    assert!(last < 1e-3 * peak);
}

#[test]
fn catalog_cases_are_admissible_except_known_singular() {
    for e in all_cases() {
        for &t in &e.reference_times {
            let r = check_admissibility(&e.spec, &e.window, t, (64, 64)).unwrap();
            if e.known_singular {
                assert_eq!(r.verdict, Verdict::Singular, "{} t = {t}", e.name);
            } else {
                assert_eq!(r.verdict, Verdict::Admissible, "{} t = {t}: {r:?}", e.name);
            }
        }
        for &t in &e.degenerate_times {
            let r = check_admissibility(&e.spec, &e.window, t, (32, 32)).unwrap();
            assert_eq!(r.verdict, Verdict::Degenerate, "{} t = {t}", e.name);
        }
    }
}
