use num::rational::BigRational;
use num::traits::Pow;
use num::BigInt;
use proptest::prelude::*;

use cuspcount::numbers::{floor_quotient, floor_ratio, parse_rational, rational_to_string};
use cuspcount::{Error, PerturbedRational};

fn poly(max_degree: usize) -> impl Strategy<Value = PerturbedRational> {
    prop::collection::vec(-10i64..=10, 1..=max_degree + 1).prop_map(|c| {
        PerturbedRational::from_coeffs(
            c.into_iter()
                .map(|v| BigRational::from_integer(v.into()))
                .collect(),
        )
    })
}

fn positive_poly(max_degree: usize) -> impl Strategy<Value = PerturbedRational> {
    (
        1i64..=10,
        prop::collection::vec(-10i64..=10, 0..=max_degree),
    )
        .prop_map(|(head, tail)| {
            let coeffs = std::iter::once(head).chain(tail);
            PerturbedRational::from_coeffs(
                coeffs
                    .map(|v| BigRational::from_integer(v.into()))
                    .collect(),
            )
        })
}

/// A concrete `δ` small enough to decide signs of the generated polynomials.
fn tiny(exponent: u32) -> BigRational {
    BigRational::new(1.into(), BigInt::from(10).pow(exponent))
}

proptest! {
    #[test]
    fn order_matches_small_delta(x in poly(2), y in poly(2)) {
        let d = tiny(6);
        prop_assert_eq!(x.cmp(&y), x.eval(&d).cmp(&y.eval(&d)));
    }

    #[test]
    fn ring_laws(x in poly(2), y in poly(2), z in poly(2)) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert!((&x + &(-&x)).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(x in poly(2), y in poly(2)) {
        let d = BigRational::new(3.into(), 7.into());
        prop_assert_eq!((&x * &y).eval(&d), x.eval(&d) * y.eval(&d));
        prop_assert_eq!((&x + &y).eval(&d), x.eval(&d) + y.eval(&d));
    }

    #[test]
    fn products_of_positives_are_positive(x in positive_poly(2), y in positive_poly(2)) {
        prop_assert!((&x * &y).is_positive());
        prop_assert!((&x + &y).is_positive());
    }

    #[test]
    fn floor_quotient_matches_small_delta(x in poly(2), y in positive_poly(2)) {
        let d = tiny(9);
        let expected = (x.eval(&d) / y.eval(&d)).floor().to_integer();
        prop_assert_eq!(floor_quotient(&x, &y).unwrap(), expected);
    }

    #[test]
    fn floor_ratio_agrees_in_degree_one(x in poly(1), y in positive_poly(1)) {
        prop_assert_eq!(floor_ratio(&x, &y).unwrap(), floor_quotient(&x, &y).unwrap());
    }

    #[test]
    fn serde_round_trip(x in poly(3)) {
        let text = serde_json::to_string(&x).unwrap();
        let back: PerturbedRational = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn rational_strings_round_trip(n in -1000i64..=1000, d in 1i64..=1000) {
        let r = BigRational::new(n.into(), d.into());
        prop_assert_eq!(parse_rational(&rational_to_string(&r)).unwrap(), r);
    }
}

#[test]
fn floor_ratio_rejects_higher_degree() {
    let x = PerturbedRational::from_int(1) + PerturbedRational::delta_pow(2);
    let y = PerturbedRational::from_int(1);
    assert_eq!(
        floor_ratio(&x, &y),
        Err(Error::UnsupportedDegree { degree: 2 })
    );
    assert!(floor_quotient(&x, &y).is_ok());
}

#[test]
fn floor_at_integer_limits() {
    let delta = PerturbedRational::delta();
    let three = PerturbedRational::from_int(3);
    let one = PerturbedRational::from_int(1);
    assert_eq!(floor_quotient(&(&three - &delta), &one).unwrap(), 2.into());
    assert_eq!(floor_quotient(&(&three + &delta), &one).unwrap(), 3.into());
    assert_eq!(floor_quotient(&three, &(&one + &delta)).unwrap(), 2.into());
    assert!(floor_quotient(&one, &delta).is_err());
}
