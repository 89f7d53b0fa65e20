mod common;

use hamel::duals::{
    derivative, double_dual_embed, eval_bracket, inflect, poly_multiply, restricted_dual_embed, schwartz_moments,
    translate, weak_limit, Functional, Horizon, ParametricMomentFamily, Piece, PiecewisePolynomial,
};
use hamel::finsupp::{linear_combine, Field, FinSuppVec, Index, Scalar};
use hamel::Polynomial;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;
use rand::Rng;

fn piecewise(seed: u64) -> PiecewisePolynomial {
    let mut r = common::rng(seed);
    let pieces = (0..r.gen_range(1..=3))
        .map(|_| {
            let a = common::rat(&mut r);
            let b = &a + common::nonzero_rat(&mut r).abs();
            Piece { a, b, poly: common::poly(&mut r, 1, 3, Field::Rational, 3) }
        })
        .collect();
    PiecewisePolynomial::new(pieces).unwrap()
}

proptest! {
    #[test]
    fn bracket_is_bilinear(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let f = common::field(&mut r);
        let t = common::functional(&mut r, 2, 5, f);
        let v = common::poly(&mut r, 2, 5, f, 6).into_vec();
        let w = common::poly(&mut r, 2, 5, f, 6).into_vec();
        let (a, b) = (common::scalar(&mut r, f), common::scalar(&mut r, f));
        let combo = linear_combine(&[(a.clone(), v.clone()), (b.clone(), w.clone())]).unwrap();
        let lhs = eval_bracket(&t, &combo).unwrap();
        let rhs = &(&a * &eval_bracket(&t, &v).unwrap()) + &(&b * &eval_bracket(&t, &w).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_embedding_is_faithful(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let f = common::field(&mut r);
        let v = common::poly(&mut r, 2, 2, f, 3).into_vec();
        let w = if r.gen_bool(0.3) { v.clone() } else { common::poly(&mut r, 2, 2, f, 3).into_vec() };
        let spectrum: std::collections::BTreeSet<Index> =
            v.spectrum().into_iter().chain(w.spectrum()).collect();
        let (iv, iw) = (double_dual_embed(&v), double_dual_embed(&w));
        let agree = spectrum.iter().all(|s| {
            let phi = Functional::indicator(2, s.clone(), f).unwrap();
            iv.apply(&phi).unwrap() == iw.apply(&phi).unwrap()
        });
        prop_assert_eq!(agree, v == w);
    }

    #[test]
    fn restricted_dual_embedding_is_the_inner_product(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let f = common::field(&mut r);
        let v = common::poly(&mut r, 2, 3, f, 4).into_vec();
        let w = common::poly(&mut r, 2, 3, f, 4).into_vec();
        let sigma = restricted_dual_embed(&v, 2).unwrap();
        let direct: Scalar = w.entries().iter().fold(f.zero(), |acc, (k, x)| &acc + &(x * &v.coeff(k)));
        prop_assert_eq!(eval_bracket(&sigma, &w).unwrap(), direct);
    }

    #[test]
    fn weyl_commutator(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let f = common::field(&mut r);
        let t = common::functional(&mut r, 1, 8, f);
        let x = Polynomial::var(1, 0, f);
        let x_d = poly_multiply(&x, &derivative(&[1], &t).unwrap()).unwrap();
        let d_x = derivative(&[1], &poly_multiply(&x, &t).unwrap()).unwrap();
        let diff = x_d.try_sub(&d_x).unwrap();
        let minus_t = Functional::combine(&f.from_int(-1), &t.truncate(7), &f.zero(), &t).unwrap();
        prop_assert_eq!(diff, minus_t);
    }

    #[test]
    fn inflect_is_an_involution(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let f = common::field(&mut r);
        let dims = r.gen_range(1..=3);
        let t = common::functional(&mut r, dims, 5, f);
        prop_assert_eq!(inflect(&inflect(&t).unwrap()).unwrap(), t);
    }

    #[test]
    fn translation_is_a_group_action(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let f = common::field(&mut r);
        let dims = r.gen_range(1..=2);
        let t = common::functional(&mut r, dims, 5, f);
        let g: Vec<Scalar> = (0..dims).map(|_| common::scalar(&mut r, f)).collect();
        let h: Vec<Scalar> = (0..dims).map(|_| common::scalar(&mut r, f)).collect();
        let gh: Vec<Scalar> = g.iter().zip(&h).map(|(a, b)| a + b).collect();
        let composed = translate(&g, &translate(&h, &t).unwrap()).unwrap();
        prop_assert_eq!(composed, translate(&gh, &t).unwrap());
        let zero = vec![f.zero(); dims];
        prop_assert_eq!(translate(&zero, &t).unwrap(), t);
    }

    #[test]
    fn schwartz_moments_are_linear(s1 in any::<u64>(), s2 in any::<u64>(), num in -5i64..5, den in 1i64..4) {
        let (f, g) = (piecewise(s1), piecewise(s2));
        let c = BigRational::new(num.into(), den.into());
        let n = 6;
        let lhs = schwartz_moments(&f.scale(&c).sum(&g), n).unwrap();
        let rhs = Functional::combine(
            &Scalar::Rational(c),
            &schwartz_moments(&f, n).unwrap(),
            &Scalar::integer(1),
            &schwartz_moments(&g, n).unwrap(),
        )
        .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let f = common::field(&mut r);
        let t = common::functional(&mut r, 2, 4, f);
        let text = serde_json::to_string(&t).unwrap();
        prop_assert_eq!(serde_json::from_str::<Functional>(&text).unwrap(), t);
    }
}

#[test]
fn box_limit_is_delta_at_every_horizon() {
    let family = ParametricMomentFamily::box_family();
    for n in 0..=10 {
        let limit = weak_limit(&family, n).unwrap();
        assert_eq!(limit, Functional::delta(1, Horizon::Finite(n), Field::Rational), "horizon {n}");
    }
}

#[test]
fn bracket_past_the_horizon_fails() {
    let t = Functional::delta(1, Horizon::Finite(3), Field::Rational);
    let v = FinSuppVec::basis_vector(Index::tuple(vec![4]), Field::Rational);
    assert!(eval_bracket(&t, &v).is_err());
}
