use proptest::prelude::*;
use relnls::akns::{hierarchy_flow, lax_coefficients, lax_general, recursion_apply, FieldPair, LaxCoefficients};
use relnls::algebra::{integrate_exact, DiffPoly, DispersionSeries, Field, GaussianRational, MultiPoly, Var};

fn small_rational() -> impl Strategy<Value = MultiPoly> {
    (-6i64..=6, 1i64..=5).prop_map(|(a, b)| MultiPoly::constant(GaussianRational::from_ratio(a, b)))
}

/// `a p^n1 + b p^n2` with symbolic-free rational coefficients.
fn two_term_dispersion() -> impl Strategy<Value = DispersionSeries> {
    (1u32..=4, small_rational(), 1u32..=4, small_rational())
        .prop_map(|(n1, a, n2, b)| {
            let mut coeffs = std::collections::BTreeMap::new();
            coeffs.entry(n1).or_insert_with(MultiPoly::zero).add_assign_ref(&a);
            coeffs.entry(n2).or_insert_with(MultiPoly::zero).add_assign_ref(&b);
            DispersionSeries::from_coeffs(coeffs)
        })
}

fn combine(alpha: &MultiPoly, x: &LaxCoefficients, beta: &MultiPoly, y: &LaxCoefficients) -> LaxCoefficients {
    LaxCoefficients { c: x.c.scale(alpha).add(&y.c.scale(beta)), a: &x.a.scale(alpha) + &y.a.scale(beta) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lax_general_is_linear(
        e1 in two_term_dispersion(),
        e2 in two_term_dispersion(),
        alpha in small_rational(),
        beta in small_rational(),
    ) {
        let mixed = DispersionSeries::linear_combination(&alpha, &e1, &beta, &e2);
        let lhs = lax_general(&mixed).unwrap();
        let rhs = combine(&alpha, &lax_general(&e1).unwrap(), &beta, &lax_general(&e2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn divided_difference_matches_bracket_sum() {
    for n in 1..=5 {
        let single = DispersionSeries::from_coeffs([(n, MultiPoly::one())]);
        assert_eq!(lax_general(&single).unwrap(), lax_coefficients(n).unwrap(), "N = {n}");
    }
}

#[test]
fn recursion_preserves_conjugation_symmetry() {
    let mut v = FieldPair::seed();
    for k in 1..=6 {
        v = recursion_apply(&v).unwrap();
        assert!(v.is_conjugate_symmetric(), "after {k} applications");
        assert_eq!(hierarchy_flow(k).unwrap(), v);
    }
}

#[test]
fn linear_limit_of_every_flow() {
    for n in 1..=6u32 {
        let f = hierarchy_flow(n).unwrap().subs(Var::Kappa2, &MultiPoly::zero());
        let i_n = GaussianRational::i().powi(n as i32);
        // i^N sigma_3^N: the lower row carries (-i)^N.
        let lower = GaussianRational::i().powi(n as i32).conj();
        assert_eq!(f.upper, DiffPoly::jet(Field::Psi, n).scale_const(&i_n), "N = {n}");
        assert_eq!(f.lower, DiffPoly::jet(Field::PsiBar, n).scale_const(&lower), "N = {n}");
    }
}

/// The printed two-step recurrence
/// `C(n) = (1/2i) D C(n+1) + A(n+1) psi`, `A(n) = -i kappa^2 I(psibar C(n) - psi Cbar(n))`
/// from `C(N) = 0`, `A(N) = (-2)^(N-1)`, resummed as `sum_n C(n) (-p/2)^n`, and
/// the flow `psi_t = D C(0) + 2i A(0) psi`.
fn printed_recurrence(n_top: u32) -> (LaxCoefficients, DiffPoly) {
    let psi = DiffPoly::field(Field::Psi);
    let psibar = DiffPoly::field(Field::PsiBar);
    let i = MultiPoly::i();
    let k = MultiPoly::var(Var::Kappa2);
    let mut c = DiffPoly::zero();
    let mut a = DiffPoly::constant(MultiPoly::constant(GaussianRational::from_int((-2i64).pow(n_top - 1))));
    let minus_half_p = MultiPoly::var(Var::P).scale(&GaussianRational::from_ratio(-1, 2));
    let weight = |n: u32| (0..n).fold(MultiPoly::one(), |acc, _| &acc * &minus_half_p);
    let mut c_sum = DiffPoly::zero();
    let mut a_sum = a.scale(&weight(n_top));
    for n in (0..n_top).rev() {
        c = &c.total_x_derivative().scale(&i.scale(&GaussianRational::from_ratio(-1, 2))) + &(&a * &psi);
        let density = &(&psibar * &c) - &(&psi * &c.conj());
        a = integrate_exact(&density).unwrap().scale(&(&-&i * &k));
        c_sum = &c_sum + &c.scale(&weight(n));
        a_sum = &a_sum + &a.scale(&weight(n));
    }
    let flow = &c.total_x_derivative() + &(&a * &psi).scale(&i.scale(&GaussianRational::from_int(2)));
    let conj = c_sum.conj();
    (LaxCoefficients { c: FieldPair::new(c_sum, conj), a: a_sum }, flow)
}

#[test]
fn printed_recurrence_agrees_with_closed_forms() {
    for n in 1..=4 {
        let (coeffs, flow) = printed_recurrence(n);
        assert_eq!(coeffs, lax_coefficients(n).unwrap(), "N = {n}");
        // i psi_t = (R^N psi)_upper.
        assert_eq!(flow.scale(&MultiPoly::i()), hierarchy_flow(n).unwrap().upper, "N = {n}");
    }
}
