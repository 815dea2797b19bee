//! Randomized properties of the normal-form algebra.

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use qdsym::qalg::{Algebra, AlgebraElement, Monomial, Mu};

fn algebra(mu: f64) -> Algebra {
    Algebra::new(Mu::new(mu).unwrap())
}

/// Raw `(α-exponent, γ, γ*, re, im)` descriptions of up to four terms of degree ≤ 3.
fn raw_terms() -> impl Strategy<Value = Vec<(i32, u32, u32, f64, f64)>> {
    prop::collection::vec(
        (-3i32..=3, 0u32..=3, 0u32..=3, -1.0..1.0f64, -1.0..1.0f64)
            .prop_filter("degree at most 3", |(a, g, gs, _, _)| {
                a.unsigned_abs() + g + gs <= 3
            }),
        1..=4,
    )
}

fn element(alg: &Algebra, raw: &[(i32, u32, u32, f64, f64)]) -> AlgebraElement {
    alg.from_terms(
        raw.iter()
            .map(|&(a, g, gs, re, im)| (Monomial::new(a, g, gs), Complex64::new(re, im))),
    )
}

fn mu_value() -> impl Strategy<Value = f64> {
    prop_oneof![-0.95..-0.05f64, 0.05..1.0f64]
}

fn relative_diff(x: &AlgebraElement, y: &AlgebraElement) -> f64 {
    let scale = x
        .max_abs_coefficient()
        .max(y.max_abs_coefficient())
        .max(1.0);
    x.max_abs_diff(y) / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classical_limit_is_commutative(x in raw_terms(), y in raw_terms()) {
        let alg = algebra(1.0);
        let (x, y) = (element(&alg, &x), element(&alg, &y));
        prop_assert!(relative_diff(&(&x * &y), &(&y * &x)) <= 1e-12);
    }

    #[test]
    fn adjoint_reverses_products(m in mu_value(), x in raw_terms(), y in raw_terms()) {
        let alg = algebra(m);
        let (x, y) = (element(&alg, &x), element(&alg, &y));
        prop_assert!(relative_diff(&(&x * &y).adjoint(), &(&y.adjoint() * &x.adjoint())) <= 1e-12);
    }

    #[test]
    fn multiplication_is_associative(m in mu_value(), x in raw_terms(), y in raw_terms(), z in raw_terms()) {
        let alg = algebra(m);
        let (x, y, z) = (element(&alg, &x), element(&alg, &y), element(&alg, &z));
        prop_assert!(relative_diff(&(&(&x * &y) * &z), &(&x * &(&y * &z))) <= 1e-12);
    }

    /// Reaching the same element by different orderings of factors gives
    /// identical normal forms.
    #[test]
    fn normal_form_is_unique(m in mu_value(), a in 0u32..3, g in 0u32..3) {
        let alg = algebra(m);
        let (alpha, gamma) = (alg.alpha(), alg.gamma());
        let direct = &alpha.pow(a) * &gamma.pow(g);
        let reordered = (m.powi((a * g) as i32)) * &(&gamma.pow(g) * &alpha.pow(a));
        prop_assert!(relative_diff(&direct, &reordered) <= 1e-12);
        prop_assert_eq!(direct.len(), 1);
    }

    #[test]
    fn counit_is_a_character(m in mu_value(), x in raw_terms(), y in raw_terms()) {
        let alg = algebra(m);
        let (x, y) = (element(&alg, &x), element(&alg, &y));
        let lhs = (&x * &y).counit();
        let rhs = x.counit() * y.counit();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
    }
}

#[test]
fn quantum_determinant_is_central_unit() {
    // α*α + γ*γ = 1 evaluated through the coproduct's counit legs.
    let alg = algebra(0.4);
    let det = &(&alg.alpha_star() * &alg.alpha()) + &(&alg.gamma_star() * &alg.gamma());
    assert_eq!(det, alg.one());
    assert_abs_diff_eq!(det.counit().re, 1.0, epsilon = 1e-15);
    let twisted =
        &(&alg.alpha() * &alg.alpha_star()) + &(0.16 * &(&alg.gamma_star() * &alg.gamma()));
    assert_abs_diff_eq!(twisted.max_abs_diff(&alg.one()), 0.0, epsilon = 1e-15);
}
