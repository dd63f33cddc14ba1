use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use wildmckay_core::covers::*;
use wildmckay_core::field::{Field, FiniteField};
use wildmckay_core::stringy::{wild_stratum_class, wild_stratum_exponent};
use wildmckay_core::tuning::sample_field;
use wildmckay_core::motivic::{realize_point_count, MotValue};

fn laurent(field: &FiniteField, raw: &[(i64, u32)]) -> LaurentPoly {
    let mut f = LaurentPoly::new();
    for &(k, c) in raw {
        let c = c % field.q() as u32;
        let e = f.entry(k).or_insert(0);
        *e = field.add(e, &c);
    }
    f.retain(|_, c| *c != 0);
    f
}

/// `f + g^p - g`.
fn wp_shift(field: &FiniteField, f: &LaurentPoly, g: &LaurentPoly) -> LaurentPoly {
    let p = field.p();
    let mut out = f.clone();
    for (&k, c) in g {
        let e = out.entry(k * p as i64).or_insert(0);
        *e = field.add(e, &field.pow(c, p));
        let e = out.entry(k).or_insert(0);
        *e = field.sub(e, c);
    }
    out.retain(|_, c| *c != 0);
    out
}

fn jump(r: &AsReduction) -> u64 {
    r.cover.as_ref().map_or(0, |c| c.jump())
}

fn check_shift_invariance(p: u64, f: &[(i64, u32)], g: &[(i64, u32)]) -> Result<(), TestCaseError> {
    let field = sample_field(p).unwrap();
    let f = laurent(&field, f);
    let g = laurent(&field, g);
    let shifted = wp_shift(&field, &f, &g);
    let a = as_reduce(&field, &f).unwrap();
    let b = as_reduce(&field, &shifted).unwrap();
    prop_assert!(a.verify(&field, &f, 24));
    prop_assert!(b.verify(&field, &shifted, 24));
    prop_assert_eq!(jump(&a), jump(&b));
    prop_assert_eq!(&a.normal_form, &b.normal_form);
    prop_assert!(jump(&a) == 0 || jump(&a) % p != 0);
    Ok(())
}

fn terms() -> impl Strategy<Value = Vec<(i64, u32)>> {
    prop::collection::vec((-12i64..4, any::<u32>()), 0..8)
}

fn shifts() -> impl Strategy<Value = Vec<(i64, u32)>> {
    prop::collection::vec((-4i64..3, any::<u32>()), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn jump_invariant_under_wp_shift_p2(f in terms(), g in shifts()) {
        check_shift_invariance(2, &f, &g)?;
    }

    #[test]
    fn jump_invariant_under_wp_shift_p3(f in terms(), g in shifts()) {
        check_shift_invariance(3, &f, &g)?;
    }

    #[test]
    fn jump_invariant_under_wp_shift_p5(f in terms(), g in shifts()) {
        check_shift_invariance(5, &f, &g)?;
    }
}

#[test]
fn models_satisfy_group_law() {
    for p in [2u64, 3] {
        let field = FiniteField::prime(p).unwrap();
        for j in (1..=9).filter(|j| j % p != 0) {
            let model = IntegralModel::artin_schreier(&ASCover::monomial(&field, j).unwrap(), 4 * (j as i64 + 2)).unwrap();
            model.check().unwrap();
        }
    }
    for l in [2u64, 3, 4, 5, 6] {
        let model = IntegralModel::kummer(&KummerCover::standard(l).unwrap(), 16).unwrap();
        model.check().unwrap();
    }
}

#[test]
fn conductor_matches_discriminant() {
    for p in [2u64, 3] {
        let field = FiniteField::prime(p).unwrap();
        let fams: Vec<EtaleAlgebraFamily> = enumerate_etale(p as u32, p)
            .unwrap()
            .into_iter()
            .filter(|f| f.factors.len() == 1 && f.factors[0].kind == FieldKind::ArtinSchreier)
            .collect();
        for j in (1..=9).filter(|j| j % p != 0) {
            let fam = fams.iter().find(|f| f.jumps().unwrap().start == j % p).unwrap();
            let k = j / p;
            let model = IntegralModel::artin_schreier(&ASCover::monomial(&field, j).unwrap(), 8 * (j as i64 + 2)).unwrap();
            let disc = uniformizer_disc_valuation(&model).unwrap();
            assert_eq!(artin_conductor(fam, k).unwrap(), disc, "p={p} j={j}");
            assert_eq!(disc, ((p - 1) * (j + 1)) as i64);
        }
    }
}

#[test]
fn serre_mass_formula() {
    for n in [2u32, 3] {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            assert_eq!(serre_mass_check(n, q).unwrap(), BigRational::from_integer(n.into()), "n={n} q={q}");
        }
    }
}

#[test]
fn wild_strata_match_weighted_torsor_counts() {
    // Z/p-torsors with jump exactly j, each weighted by 1/|Aut| = 1/p
    for p in [2u64, 3] {
        for q in [p, p * p] {
            let field = FiniteField::of_order(q).unwrap();
            for j in (1..=9).filter(|j| j % p != 0) {
                let exact = as_class_count(&field, j) - as_class_count(&field, j - 1);
                let weighted = BigRational::new(BigInt::from(exact), BigInt::from(p));
                let class = MotValue::Poly(wild_stratum_class(p, j));
                assert_eq!(realize_point_count(&class, q).unwrap(), weighted, "p={p} q={q} j={j}");
                let m = wild_stratum_exponent(p, j) as u32;
                assert_eq!(weighted, BigRational::from_integer(BigInt::from((q - 1) * q.pow(m - 1))));
            }
        }
    }
}

#[test]
fn enumeration_counts_agree_with_class_counts() {
    // p/(p-1) (q-1) q^{m_j - 1} fields per jump over F_q, each carrying p - 1
    // nontrivial characters
    for p in [2u64, 3] {
        for q in [p, p * p] {
            let field = FiniteField::of_order(q).unwrap();
            for fam in enumerate_fields(p as u32, q).unwrap().iter().filter(|f| f.kind == FieldKind::ArtinSchreier) {
                let prog = fam.jumps.unwrap();
                for k in 0..3 {
                    let j = prog.jump(k);
                    let torsors = as_class_count(&field, j) - as_class_count(&field, j - 1);
                    let fields = BigRational::new(BigInt::from(torsors), BigInt::from(p - 1));
                    assert_eq!(fam.count.eval(q, k), fields, "p={p} q={q} j={j}");
                }
            }
        }
    }
}
