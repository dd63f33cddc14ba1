use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use wildmckay_core::motivic::*;

fn poly_strategy(roots: &'static [u32]) -> impl Strategy<Value = MotPoly> {
    (prop::sample::select(roots), prop::collection::vec((-8i64..8, -5i64..6), 0..5)).prop_map(|(r, terms)| {
        let mut p = MotPoly::zero();
        for (k, c) in terms {
            let m = MotPoly::monomial(BigInt::from(c), Exponent::new(k, r as i64));
            p = &p + &m;
        }
        p.with_root_index(r)
    })
}

fn value_strategy(roots: &'static [u32]) -> impl Strategy<Value = MotValue> {
    (poly_strategy(roots), prop::collection::vec(1i64..4, 0..3)).prop_map(|(num, denoms)| {
        if denoms.is_empty() {
            MotValue::Poly(num)
        } else {
            MotValue::from(MotSeries::new(num, denoms.into_iter().map(Exponent::from_integer).collect()).unwrap())
        }
    })
}

const ALL_ROOTS: &[u32] = &[1, 2, 3, 4, 6, 12];

fn point_count(x: &MotValue, q: u64) -> BigRational {
    realize_point_count(x, q).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(a in value_strategy(ALL_ROOTS), b in value_strategy(ALL_ROOTS), c in value_strategy(ALL_ROOTS)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        let one = MotValue::Poly(MotPoly::one());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert_eq!(&a + &MotValue::zero(), a);
    }

    #[test]
    fn seminorm_inequalities(a in value_strategy(ALL_ROOTS), b in value_strategy(ALL_ROOTS)) {
        let (da, db) = (a.dim(), b.dim());
        prop_assert!((&a + &b).dim() <= da.max(db));
        let prod = (&a * &b).dim();
        match (da, db) {
            (Dim::Finite(x), Dim::Finite(y)) => prop_assert!(prod <= Dim::Finite(x + y)),
            _ => prop_assert_eq!(prod, Dim::NegInfinity),
        }
        prop_assert!((&a * &b).seminorm() <= a.seminorm() * b.seminorm() * (1.0 + 1e-12));
    }

    #[test]
    fn point_count_is_homomorphism(
        a in value_strategy(&[1]),
        b in value_strategy(&[1]),
        q in prop::sample::select(vec![2u64, 3, 4, 5]),
    ) {
        prop_assert_eq!(point_count(&(&a * &b), q), point_count(&a, q) * point_count(&b, q));
        prop_assert_eq!(point_count(&(&a + &b), q), point_count(&a, q) + point_count(&b, q));
    }

    #[test]
    fn square_roots_realize_at_square_q(a in value_strategy(&[1, 2]), b in value_strategy(&[1, 2])) {
        prop_assert_eq!(point_count(&(&a * &b), 4), point_count(&a, 4) * point_count(&b, 4));
    }

    #[test]
    fn representation_independence(
        num in poly_strategy(ALL_ROOTS),
        denoms in prop::collection::vec(1i64..4, 1..3),
        extra in 1i64..5,
        level in -10i64..4,
    ) {
        let ds: Vec<Exponent> = denoms.iter().copied().map(Exponent::from_integer).collect();
        let x = MotSeries::new(num.clone(), ds.clone()).unwrap();
        let factor = &MotPoly::one() - &MotPoly::l_pow(Exponent::from_integer(-extra));
        let mut ds2 = ds;
        ds2.push(Exponent::from_integer(extra));
        let y = MotSeries::new(&num * &factor, ds2).unwrap();
        prop_assert_eq!(&x, &y);
        let m = Exponent::from_integer(level);
        prop_assert_eq!(x.truncate(m), y.truncate(m));
    }
}

#[test]
fn roots_of_l_realize_exactly() {
    for r in 1..=12u32 {
        for base in 2..=3u64 {
            let q = base.pow(r);
            let x = MotValue::Poly(MotPoly::l_pow(Exponent::new(1, r as i64)));
            assert_eq!(point_count(&x, q), BigRational::from_integer(base.into()));
            let y = MotValue::Poly(MotPoly::l_pow(Exponent::new(-3, r as i64)));
            assert_eq!(point_count(&y, q), BigRational::new(1.into(), base.pow(3).into()));
        }
        if r > 1 {
            let x = MotValue::Poly(MotPoly::l_pow(Exponent::new(1, r as i64)));
            assert!(realize_point_count(&x, 2).is_err());
        }
    }
}

#[test]
fn geometric_series_realizes() {
    // 1 / (1 - L^{-1}) at q = 3 is 3/2
    let g = MotValue::from(MotSeries::geometric(Exponent::from_integer(1)).unwrap());
    assert_eq!(point_count(&g, 3), BigRational::new(3.into(), 2.into()));
    let trunc = g.truncate(Exponent::from_integer(3));
    let expected = (0..=3).fold(MotPoly::zero(), |acc, k| &acc + &MotPoly::l_pow(Exponent::from_integer(-k)));
    assert_eq!(trunc, expected);
}
