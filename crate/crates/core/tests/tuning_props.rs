use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wildmckay_core::covers::*;
use wildmckay_core::field::FiniteField;
use wildmckay_core::groups::*;
use wildmckay_core::motivic::Exponent;
use wildmckay_core::tuning::*;

fn random_tame(rng: &mut ChaCha8Rng) -> TameCyclicAction {
    let l = rng.gen_range(2..=12u64);
    let d = rng.gen_range(1..=6usize);
    TameCyclicAction::new(l, (0..d).map(|_| rng.gen_range(0..l)).collect()).unwrap()
}

#[test]
fn v_equals_age_for_kummer_covers() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let opts = TuningOptions::default();
    for _ in 0..50 {
        let a = random_tame(&mut rng);
        let l = a.order();
        let cover = CoverSpec::Kummer(KummerCover::standard(l).unwrap());
        for k in 0..l {
            let exps = a.exponents().iter().map(|e| e * k % l).collect();
            let gk = LinearAction::Tame(TameCyclicAction::new(l, exps).unwrap());
            let r = v_invariant(&gk, &cover, &opts).unwrap();
            assert_eq!(r.v, a.age(k), "l={l} exps={:?} k={k}", a.exponents());
        }
    }
}

fn random_modular(rng: &mut ChaCha8Rng, p: u64, max_dim: usize) -> ModularCyclicAction {
    loop {
        let n = rng.gen_range(1..=3usize);
        let blocks: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=p as usize)).collect();
        if blocks.iter().sum::<usize>() <= max_dim {
            return ModularCyclicAction::new(p, blocks).unwrap();
        }
    }
}

fn random_jump(rng: &mut ChaCha8Rng, p: u64) -> u64 {
    loop {
        let j = rng.gen_range(1..=7u64);
        if j % p != 0 {
            return j;
        }
    }
}

#[test]
fn v_invariant_under_unramified_twist() {
    let opts = TuningOptions::default();
    for p in [2u64, 3] {
        let field = sample_field(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..20 {
            let a = LinearAction::Modular(random_modular(&mut rng, p, 6));
            let j = random_jump(&mut rng, p);
            let cover = random_as_cover(&field, j, &mut rng).unwrap();
            let twist = loop {
                let c = rng.gen_range(1..field.q()) as u32;
                if c != cover.f0() {
                    break c;
                }
            };
            let twisted = ASCover::new(&field, cover.terms().clone(), twist).unwrap();
            let v0 = v_invariant(&a, &CoverSpec::ArtinSchreier(cover), &opts).unwrap();
            let v1 = v_invariant(&a, &CoverSpec::ArtinSchreier(twisted), &opts).unwrap();
            assert_eq!(v0.v, v1.v);
        }
    }
}

#[test]
fn v_additive_under_direct_sum() {
    let opts = TuningOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..20 {
        let p = if i % 2 == 0 { 2 } else { 3 };
        let field = sample_field(p).unwrap();
        let a = random_modular(&mut rng, p, 3);
        let b = random_modular(&mut rng, p, 3);
        let j = random_jump(&mut rng, p);
        let cover = CoverSpec::ArtinSchreier(random_as_cover(&field, j, &mut rng).unwrap());
        let v = |m: ModularCyclicAction| v_invariant(&LinearAction::Modular(m), &cover, &opts).unwrap().v;
        let sum = a.direct_sum(&b).unwrap();
        assert_eq!(v(sum), v(a.clone()) + v(b.clone()), "{:?} + {:?}, j={j}", a.blocks(), b.blocks());
    }
    for _ in 0..20 {
        let a = random_tame(&mut rng);
        let exps = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..a.order())).collect();
        let b = TameCyclicAction::new(a.order(), exps).unwrap();
        let cover = CoverSpec::Kummer(KummerCover::standard(a.order()).unwrap());
        let v = |m: TameCyclicAction| v_invariant(&LinearAction::Tame(m), &cover, &opts).unwrap().v;
        assert_eq!(v(a.direct_sum(&b).unwrap()), v(a.clone()) + v(b.clone()));
    }
}

#[test]
fn regular_pairs_give_conductor() {
    let opts = TuningOptions::default();
    for p in [2u64, 3] {
        let field = FiniteField::prime(p).unwrap();
        let a = LinearAction::Modular(ModularCyclicAction::new(p, vec![p as usize, p as usize]).unwrap());
        for j in (1..=9).filter(|j| j % p != 0) {
            let r = v_invariant(&a, &CoverSpec::ArtinSchreier(ASCover::monomial(&field, j).unwrap()), &opts).unwrap();
            assert_eq!(r.v, Exponent::from_integer(((p - 1) * (j + 1)) as i64), "p={p} j={j}");
        }
    }
}

#[test]
fn v_independent_of_precision_once_stable() {
    let field = FiniteField::prime(3).unwrap();
    let a = LinearAction::Modular(ModularCyclicAction::new(3, vec![3, 2]).unwrap());
    for j in [1u64, 2, 4, 5] {
        let cover = CoverSpec::ArtinSchreier(ASCover::monomial(&field, j).unwrap());
        let r = v_invariant(&a, &cover, &TuningOptions::default()).unwrap();
        let more = TuningOptions { start_precision: Some(2 * r.precision_used), ..TuningOptions::default() };
        assert_eq!(v_invariant(&a, &cover, &more).unwrap().v, r.v);
    }
}

#[test]
fn jump_only_dependence_sampled() {
    let opts = TuningOptions::default();
    for (p, blocks) in [(2u64, vec![2usize, 1]), (3, vec![2, 2]), (3, vec![3, 1])] {
        let a = LinearAction::Modular(ModularCyclicAction::new(p, blocks).unwrap());
        for j in (1..=5).filter(|j| j % p != 0) {
            jump_only_v(&a, p, j, 3, 99, &opts).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn age_pairing(l in 1u64..=12, raw in prop::collection::vec(any::<u64>(), 1..7), k in any::<u64>()) {
        let a = TameCyclicAction::new(l, raw.iter().map(|e| e % l).collect()).unwrap();
        let k = k % l;
        let inv = (l - k) % l;
        let d = a.dim() as i64;
        prop_assert_eq!(a.age(k) + a.age(inv), Exponent::from_integer(d - a.fixed_dim(k) as i64));
    }

    #[test]
    fn jordan_type_is_conjugation_invariant(p in prop::sample::select(vec![2u64, 3, 5]), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_modular(&mut rng, p, 6);
        let g = a.matrix();
        let n = g.len();
        // random unipotent-triangular change of basis and its inverse
        let (c, cinv) = random_invertible(&mut rng, n, p);
        let h = mat_mul(&mat_mul(&c, &g, p), &cinv, p);
        let b = ModularCyclicAction::from_matrix(p, &h).unwrap();
        prop_assert_eq!(b.blocks(), a.blocks());
        prop_assert_eq!(b.fixed_dim(), a.fixed_dim());
    }
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum::<u64>() % p).collect()).collect()
}

/// `L U` with `L` unit lower and `U` unit upper triangular, and its inverse
/// built by back substitution.
fn random_invertible(rng: &mut ChaCha8Rng, n: usize, p: u64) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let mut lo = vec![vec![0u64; n]; n];
    let mut up = vec![vec![0u64; n]; n];
    for i in 0..n {
        lo[i][i] = 1;
        up[i][i] = 1;
        for j in 0..i {
            lo[i][j] = rng.gen_range(0..p);
            up[j][i] = rng.gen_range(0..p);
        }
    }
    let inv_unit_lower = |m: &Vec<Vec<u64>>| {
        let mut inv = vec![vec![0u64; n]; n];
        for col in 0..n {
            for i in 0..n {
                let mut s = if i == col { 1 } else { 0 };
                for k in 0..i {
                    s = (s + p * p - m[i][k] * inv[k][col] % p) % p;
                }
                inv[i][col] = s;
            }
        }
        inv
    };
    let t = |m: &Vec<Vec<u64>>| (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect::<Vec<Vec<u64>>>();
    let lo_inv = inv_unit_lower(&lo);
    let up_inv = t(&inv_unit_lower(&t(&up)));
    (mat_mul(&lo, &up, p), mat_mul(&up_inv, &lo_inv, p))
}
