//! Randomized invariants: algebraic identities that must hold for every
//! admissible input, not just the tabulated cases.

use num_complex::Complex64;
use proptest::prelude::*;
use sl2r_fourier::group::GroupElement;
use sl2r_fourier::harmonics::{KTypeWindow, Parity};
use sl2r_fourier::intertwiner::{knapp_stein_eigen, ratio_c, ratio_quotient};
use sl2r_fourier::operator::TruncatedOperator;
use sl2r_fourier::quadrature::gauss_legendre_on;

fn window() -> KTypeWindow {
    KTypeWindow::new(Parity::Even, 6).unwrap()
}

/// Fills a window-square operator from a flat list of (re, im) pairs.
fn op_from(vals: &[(f64, f64)]) -> TruncatedOperator {
    let w = window();
    let mut it = vals.iter();
    TruncatedOperator::from_fn(w, w, |_, _| {
        let (re, im) = it.next().copied().unwrap_or((0.0, 0.0));
        Complex64::new(re, im)
    })
}

fn entry_pairs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    let dim = window().dim();
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim)
}

/// Random element assembled from the three generator families; products of
/// exactly unimodular factors stay unimodular to machine precision.
fn group_element() -> impl Strategy<Value = GroupElement> {
    (-3.0..3.0f64, -1.2..1.2f64, -2.0..2.0f64, -3.0..3.0f64, -1.2..1.2f64).prop_map(
        |(phi, t, x, phi2, t2)| {
            GroupElement::rotation(phi)
                .mul(&GroupElement::diag(t))
                .mul(&GroupElement::unipotent(x))
                .mul(&GroupElement::rotation(phi2))
                .mul(&GroupElement::diag(t2))
        },
    )
}

fn max_entry_diff(g: &GroupElement, h: &GroupElement) -> f64 {
    (g.a - h.a)
        .abs()
        .max((g.b - h.b).abs())
        .max((g.c - h.c).abs())
        .max((g.d - h.d).abs())
}

proptest! {
    #[test]
    fn eigenvalue_ratio_product_across_reflection_is_one(
        re in -1.9..1.9f64,
        im in 0.1..1.0f64,
        n in -12..=12i64,
    ) {
        // The recursion step for c_{n+2}/c_n at u is the reciprocal of the
        // step at -u, so the product telescopes to one for either parity.
        let u = Complex64::new(re, im);
        let p = ratio_c(n, u).unwrap() * ratio_c(n, -u).unwrap();
        prop_assert!((p - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn eigenvalue_ratio_chains_compose(
        re in -1.9..1.9f64,
        im in 0.1..1.0f64,
        i in -5..=5i64,
        j in -5..=5i64,
        k in -5..=5i64,
    ) {
        let u = Complex64::new(re, im);
        let (n, m, p) = (2 * i, 2 * j, 2 * k);
        let chained = ratio_quotient(n, m, u).unwrap() * ratio_quotient(m, p, u).unwrap();
        let direct = ratio_quotient(n, p, u).unwrap();
        prop_assert!((chained - direct).norm() <= 1e-10 * (1.0 + direct.norm()));
    }

    #[test]
    fn operator_norm_is_submultiplicative(a in entry_pairs(), b in entry_pairs()) {
        let (a, b) = (op_from(&a), op_from(&b));
        let ab = a.compose(&b).unwrap();
        prop_assert!(ab.op_norm() <= a.op_norm() * b.op_norm() + 1e-10);
    }

    #[test]
    fn adjoint_is_an_isometric_involution(a in entry_pairs()) {
        let a = op_from(&a);
        let adj = a.adjoint();
        prop_assert!((adj.op_norm() - a.op_norm()).abs() <= 1e-12 * (1.0 + a.op_norm()));
        prop_assert_eq!(adj.adjoint(), a);
    }

    #[test]
    fn operator_norm_sits_between_frobenius_bounds(a in entry_pairs()) {
        let a = op_from(&a);
        let dim = window().dim() as f64;
        prop_assert!(a.op_norm() <= a.frobenius_norm() + 1e-10);
        prop_assert!(a.frobenius_norm() <= dim.sqrt() * a.op_norm() + 1e-10);
    }

    #[test]
    fn masking_is_idempotent_and_contractive(a in entry_pairs(), cut in -6..=7i64) {
        let a = op_from(&a);
        let once = a.mask(|n| n >= cut);
        prop_assert_eq!(once.mask(|n| n >= cut), once.clone());
        prop_assert!(once.op_norm() <= a.op_norm() + 1e-10);
    }

    #[test]
    fn group_inverse_and_coordinate_round_trips(g in group_element()) {
        prop_assert!((g.det() - 1.0).abs() <= 1e-12);
        prop_assert!(max_entry_diff(&g.mul(&g.inv()), &GroupElement::identity()) <= 1e-12);
        let scale = 1.0 + g.norm_sq();
        prop_assert!(max_entry_diff(&GroupElement::from_iwasawa(g.iwasawa()), &g) <= 1e-9 * scale);
        prop_assert!(max_entry_diff(&GroupElement::from_cartan(g.cartan()), &g) <= 1e-9 * scale);
    }

    #[test]
    fn panel_rule_integrates_cubics_exactly(
        c0 in -2.0..2.0f64,
        c1 in -2.0..2.0f64,
        c2 in -2.0..2.0f64,
        c3 in -2.0..2.0f64,
        a in -3.0..-0.1f64,
        b in 0.1..3.0f64,
    ) {
        let (nodes, weights) = gauss_legendre_on(20, a, b);
        let num: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * (c0 + x * (c1 + x * (c2 + x * c3))))
            .sum();
        let anti = |x: f64| x * (c0 + x * (c1 / 2.0 + x * (c2 / 3.0 + x * c3 / 4.0)));
        prop_assert!((num - (anti(b) - anti(a))).abs() <= 1e-11);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quadrature_eigenvalues_match_the_rational_ratios(
        re in 0.6..2.4f64,
        im in -0.5..0.5f64,
        n in -6..=6i64,
    ) {
        // Direct integrals on the convergent half-plane against the
        // two-step rational continuation, through either parity base.
        let u = Complex64::new(re, im);
        let base = if n.rem_euclid(2) == 0 { 0 } else { 1 };
        let top = knapp_stein_eigen(n, u).unwrap();
        let bot = knapp_stein_eigen(base, u).unwrap();
        let numeric = top.value / bot.value;
        let defect = (numeric - ratio_c(n, u).unwrap()).norm();
        prop_assert!(defect <= 1e-8 + top.tail_bound + bot.tail_bound);
    }

    #[test]
    fn eigenvalue_integral_has_the_reflection_symmetry(
        re in 0.6..2.0f64,
        im in -1.0..1.0f64,
        n in -7..=7i64,
    ) {
        let u = Complex64::new(re, im);
        let plus = knapp_stein_eigen(n, u).unwrap();
        let minus = knapp_stein_eigen(-n, u).unwrap();
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let defect = (minus.value - plus.value * sign).norm();
        prop_assert!(defect <= 1e-10 + plus.tail_bound + minus.tail_bound);
    }
}
