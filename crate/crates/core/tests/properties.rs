mod common;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use weaklg::catalog::load_catalog;
use weaklg::periods::constant_terms_series;
use weaklg::polytope::{newton_polytope, picard_rank, Fan};
use weaklg::scalar::{int, rational};
use weaklg::{parse, Axis, Exponent, LaurentPolynomial, UnimodularMatrix};

fn small_poly() -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec(((-2i64..=2, -2i64..=2, -2i64..=2), -5i64..=5, 1i64..=3), 0..6).prop_map(|terms| {
        LaurentPolynomial::from_terms(
            terms.into_iter().map(|((a, b, c), n, d)| (Exponent::new(a, b, c), rational(n, d))),
        )
    })
}

fn unimodular() -> impl Strategy<Value = UnimodularMatrix> {
    any::<u64>().prop_map(|seed| common::random_unimodular(&mut common::rng(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(f in small_poly(), g in small_poly(), h in small_poly()) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!(&f * &LaurentPolynomial::one(), f.clone());
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn print_parse_round_trip(f in small_poly()) {
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn constant_term_is_a_convolution(f in small_poly(), g in small_poly()) {
        let direct = f.terms().fold(BigRational::zero(), |acc, (e, c)| acc + c * g.coeff(&-*e));
        prop_assert_eq!((&f * &g).constant_term(), direct);
    }

    #[test]
    fn substitutions_compose(f in small_poly(), m1 in unimodular(), m2 in unimodular()) {
        let lhs = f.substitute_unimodular(&m1.compose(&m2));
        let rhs = f.substitute_unimodular(&m2).substitute_unimodular(&m1);
        prop_assert_eq!(lhs.len(), f.len());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_invariant_under_substitution(idx in 0usize..12, m in unimodular()) {
        let f = &load_catalog()[idx].polynomial;
        let g = f.substitute_unimodular(&m);
        prop_assert_eq!(constant_terms_series(&g, 12).unwrap(), constant_terms_series(f, 12).unwrap());
        for n in 0..=5 {
            prop_assert_eq!(g.pow(n).constant_term(), f.pow(n).constant_term());
        }
    }
}

#[test]
fn series_invariant_under_torus_scaling() {
    for e in load_catalog() {
        let base = constant_terms_series(&e.polynomial, 16).unwrap();
        for alpha in [int(2), int(-1), rational(1, 3)] {
            for axis in Axis::ALL {
                let g = e.polynomial.scale_variable(axis, &alpha).unwrap();
                assert_eq!(constant_terms_series(&g, 16).unwrap(), base, "{} {:?}", e.id, axis);
            }
        }
    }
}

#[test]
fn catalog_print_parse_round_trip() {
    for e in load_catalog() {
        assert_eq!(parse(&e.polynomial.to_string()).unwrap(), e.polynomial, "{}", e.id);
    }
}

#[test]
fn permutation_fixes_symmetric_model() {
    let f = parse("x+y+z+1/(x*y*z)").unwrap();
    let swap = UnimodularMatrix::new([[0, 1, 0], [1, 0, 0], [0, 0, 1]]).unwrap();
    assert_eq!(f.substitute_unimodular(&swap), f);
    assert_eq!(f.substitute_unimodular(&UnimodularMatrix::IDENTITY), f);
}

#[test]
fn positive_models_have_nonnegative_integer_series() {
    for e in load_catalog() {
        if e.polynomial.terms().all(|(_, c)| c > &BigRational::zero()) {
            for c in constant_terms_series(&e.polynomial, 20).unwrap().coeffs() {
                assert!(c.is_integer() && c >= &BigRational::zero(), "{}", e.id);
            }
        }
    }
}

#[test]
fn polytope_data_invariant_under_substitution() {
    let mut rng = common::rng(11);
    for e in load_catalog() {
        let p = newton_polytope(&e.polynomial).unwrap();
        let d = p.dual().unwrap();
        let rho = picard_rank(&Fan::from_polytope(&p).unwrap());
        for _ in 0..3 {
            let m = common::random_unimodular(&mut rng);
            let q = newton_polytope(&e.polynomial.substitute_unimodular(&m)).unwrap();
            assert_eq!(q.interior_lattice_points().len(), p.interior_lattice_points().len());
            assert_eq!(q.normalized_volume(), p.normalized_volume());
            assert_eq!(q.dual().unwrap().lattice_points_in_dilation(2), d.lattice_points_in_dilation(2));
            assert_eq!(picard_rank(&Fan::from_polytope(&q).unwrap()), rho);
        }
    }
}
