//! One line per acceptance criterion; exits non-zero if any fails.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wildmckay_core::covers::*;
use wildmckay_core::field::{Field, FiniteField};
use wildmckay_core::groups::*;
use wildmckay_core::motivic::*;
use wildmckay_core::stringy::*;
use wildmckay_core::tuning::*;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hilbert() -> Check {
    for n in 1..=8 {
        ensure(stringy_sn(n) == hilb_class(n as u64), || format!("n={n}: {} vs {}", stringy_sn(n), hilb_class(n as u64)))?;
    }
    Ok("stringy_Sn(n) = hilb_class(n), n = 1..8".into())
}

fn bhargava() -> Check {
    let mut cases: Vec<(u64, u64)> = [2, 3, 4, 5, 7, 8, 9].iter().map(|&q| (2, q)).collect();
    cases.extend([2, 4, 5, 7].iter().map(|&q| (3, q)));
    for &(n, q) in &cases {
        let lhs = bhargava_lhs(n, q).map_err(|e| e.to_string())?;
        ensure(lhs == bhargava_rhs(n, q), || format!("n={n} q={q}: {lhs} vs {}", bhargava_rhs(n, q)))?;
    }
    let mut stretch = Vec::new();
    for q in [3u64, 9] {
        let ok = bhargava_lhs(3, q).map(|l| l == bhargava_rhs(3, q)).unwrap_or(false);
        stretch.push(format!("q={q} {}", if ok { "ok" } else { "fails" }));
    }
    Ok(format!("{} (n,q) pairs exact; stretch n=3: {}", cases.len(), stretch.join(", ")))
}

fn v_age() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let opts = TuningOptions::default();
    let mut covers = 0;
    for _ in 0..50 {
        let l = rng.gen_range(2..=12u64);
        let d = rng.gen_range(1..=6usize);
        let a = TameCyclicAction::new(l, (0..d).map(|_| rng.gen_range(0..l)).collect()).unwrap();
        let cover = CoverSpec::Kummer(KummerCover::standard(l).map_err(|e| e.to_string())?);
        for k in 0..l {
            let exps = a.exponents().iter().map(|e| e * k % l).collect();
            let gk = LinearAction::Tame(TameCyclicAction::new(l, exps).unwrap());
            let v = v_invariant(&gk, &cover, &opts).map_err(|e| e.to_string())?.v;
            ensure(v == a.age(k), || format!("l={l} exps={:?} k={k}: v={v} age={}", a.exponents(), a.age(k)))?;
            covers += 1;
        }
    }
    Ok(format!("50 actions, {covers} power covers, v = age"))
}

fn v_conductor() -> Check {
    let opts = TuningOptions::default();
    for (p, js, factor) in [(2u64, vec![1u64, 3, 5, 7, 9], 1u64), (3, vec![1, 2, 4, 5, 7, 8], 2)] {
        let field = FiniteField::prime(p).unwrap();
        let a = LinearAction::Modular(ModularCyclicAction::new(p, vec![p as usize, p as usize]).unwrap());
        for j in js {
            let cover = CoverSpec::ArtinSchreier(ASCover::monomial(&field, j).map_err(|e| e.to_string())?);
            let v = v_invariant(&a, &cover, &opts).map_err(|e| e.to_string())?.v;
            let want = Exponent::from_integer((factor * (j + 1)) as i64);
            ensure(v == want, || format!("p={p} j={j}: v={v}, expected {want}"))?;
        }
    }
    Ok("[2,2]: v = j+1; [3,3]: v = 2(j+1)".into())
}

fn wild_closed_form() -> Check {
    let a = ModularCyclicAction::new(2, vec![2, 2]).unwrap();
    let r = mckay_zp_integral(&a, 9, &McKayOptions::default()).map_err(|e| e.to_string())?;
    let want = MotValue::Poly(&MotPoly::l_pow(Exponent::from_integer(4)) + &MotPoly::l_pow(Exponent::from_integer(3)));
    ensure(r.converges == Some(true), || "integral not closed".into())?;
    ensure(r.value == want, || format!("value {}", r.value))?;
    Ok(format!("value {}", r.value))
}

fn discrepancies() -> Check {
    let opts = McKayOptions::default();
    let cases = [
        (2, vec![1u64, 1], Exponent::from_integer(0)),
        (3, vec![1, 1], Exponent::new(-1, 3)),
        (3, vec![1, 2], Exponent::from_integer(0)),
    ];
    let mut shown = Vec::new();
    for (l, e, want) in cases {
        let action = LinearAction::Tame(TameCyclicAction::new(l, e.clone()).unwrap());
        let r = discrepancy(&action, 0, &opts).map_err(|e| e.to_string())?;
        ensure(r.discrepancy == Discrepancy::Finite(want) && r.log_terminal, || format!("l={l} {e:?}: {:?}", r))?;
        shown.push(format!("{want}"));
    }
    Ok(format!("discrepancies {}", shown.join(", ")))
}

fn oracles() -> Check {
    let mut pairs = 0;
    for n in [2u32, 3] {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let m = serre_mass_check(n, q).map_err(|e| e.to_string())?;
            ensure(m == BigRational::from_integer(n.into()), || format!("serre n={n} q={q}: {m}"))?;
            pairs += 1;
        }
    }
    let mut strata = 0;
    for p in [2u64, 3] {
        for q in [p, p * p] {
            let field = FiniteField::of_order(q).unwrap();
            for j in (1..=9).filter(|j| j % p != 0) {
                let exact = as_class_count(&field, j) - as_class_count(&field, j - 1);
                let weighted = BigRational::new(BigInt::from(exact), BigInt::from(p));
                let class = realize_point_count(&MotValue::Poly(wild_stratum_class(p, j)), q).map_err(|e| e.to_string())?;
                ensure(class == weighted, || format!("stratum p={p} q={q} j={j}: {class} vs {weighted}"))?;
                strata += 1;
            }
        }
    }
    Ok(format!("Serre mass on {pairs} (n,q) pairs; {strata} wild strata match torsor counts"))
}

fn random_value(rng: &mut ChaCha8Rng) -> MotValue {
    let mut p = MotPoly::zero();
    for _ in 0..rng.gen_range(0..5) {
        let m = MotPoly::monomial(BigInt::from(rng.gen_range(-5i64..=5)), Exponent::from_integer(rng.gen_range(-6..=6)));
        p = &p + &m;
    }
    let denoms: Vec<Exponent> = (0..rng.gen_range(0..3)).map(|_| Exponent::from_integer(rng.gen_range(1..=3))).collect();
    if denoms.is_empty() {
        MotValue::Poly(p)
    } else {
        MotValue::from(MotSeries::new(p, denoms).unwrap())
    }
}

fn laurent(field: &FiniteField, rng: &mut ChaCha8Rng, lo: i64, hi: i64, n: usize) -> LaurentPoly {
    let mut f = LaurentPoly::new();
    for _ in 0..n {
        let k = rng.gen_range(lo..=hi);
        let c = rng.gen_range(0..field.q()) as u32;
        let e = f.entry(k).or_insert(0);
        *e = field.add(e, &c);
    }
    f.retain(|_, c| *c != 0);
    f
}

fn properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..200 {
        let (a, b, c) = (random_value(&mut rng), random_value(&mut rng), random_value(&mut rng));
        ensure(&(&a * &b) * &c == &a * &(&b * &c), || format!("associativity #{i}"))?;
        ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || format!("distributivity #{i}"))?;
        ensure(&a * &b == &b * &a && &a + &b == &b + &a, || format!("commutativity #{i}"))?;
        ensure((&a + &b).dim() <= a.dim().max(b.dim()), || format!("norm of sum #{i}"))?;
        if let (Dim::Finite(x), Dim::Finite(y)) = (a.dim(), b.dim()) {
            ensure((&a * &b).dim() <= Dim::Finite(x + y), || format!("norm of product #{i}"))?;
        }
        let q = [2u64, 3, 4, 5][i % 4];
        let phi = |x: &MotValue| realize_point_count(x, q).unwrap();
        ensure(phi(&(&a * &b)) == phi(&a) * phi(&b), || format!("phi(ab) #{i}"))?;
        ensure(phi(&(&a + &b)) == phi(&a) + phi(&b), || format!("phi(a+b) #{i}"))?;
    }
    for p in [2u64, 3, 5] {
        let field = sample_field(p).unwrap();
        for i in 0..100 {
            let f = laurent(&field, &mut rng, -12, 3, 8);
            let g = laurent(&field, &mut rng, -4, 2, 4);
            let mut shifted = f.clone();
            for (&k, c) in &g {
                let e = shifted.entry(k * p as i64).or_insert(0);
                *e = field.add(e, &field.pow(c, p));
                let e = shifted.entry(k).or_insert(0);
                *e = field.sub(e, c);
            }
            shifted.retain(|_, c| *c != 0);
            let jump = |x: &LaurentPoly| as_reduce(&field, x).map(|r| r.cover.map_or(0, |c| c.jump())).unwrap();
            ensure(jump(&f) == jump(&shifted), || format!("jump shift p={p} #{i}"))?;
        }
    }
    let opts = TuningOptions::default();
    let random_blocks = |rng: &mut ChaCha8Rng, p: u64, max: usize| loop {
        let blocks: Vec<usize> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(1..=p as usize)).collect();
        if blocks.iter().sum::<usize>() <= max {
            break ModularCyclicAction::new(p, blocks).unwrap();
        }
    };
    let random_jump = |rng: &mut ChaCha8Rng, p: u64| loop {
        let j = rng.gen_range(1..=7u64);
        if j % p != 0 {
            break j;
        }
    };
    for p in [2u64, 3] {
        let field = sample_field(p).unwrap();
        for i in 0..20 {
            let a = LinearAction::Modular(random_blocks(&mut rng, p, 6));
            let j = random_jump(&mut rng, p);
            let cover = random_as_cover(&field, j, &mut rng).map_err(|e| e.to_string())?;
            let twist = (cover.f0() + 1 + rng.gen_range(0..field.q() as u32 - 1)) % field.q() as u32;
            let twisted = ASCover::new(&field, cover.terms().clone(), twist).map_err(|e| e.to_string())?;
            let v0 = v_invariant(&a, &CoverSpec::ArtinSchreier(cover), &opts).map_err(|e| e.to_string())?.v;
            let v1 = v_invariant(&a, &CoverSpec::ArtinSchreier(twisted), &opts).map_err(|e| e.to_string())?.v;
            ensure(v0 == v1, || format!("twist p={p} #{i}: {v0} vs {v1}"))?;
        }
    }
    for i in 0..20 {
        let p = [2u64, 3][i % 2];
        let field = sample_field(p).unwrap();
        let (a, b) = (random_blocks(&mut rng, p, 3), random_blocks(&mut rng, p, 3));
        let j = random_jump(&mut rng, p);
        let cover = CoverSpec::ArtinSchreier(random_as_cover(&field, j, &mut rng).map_err(|e| e.to_string())?);
        let v = |m: ModularCyclicAction| v_invariant(&LinearAction::Modular(m), &cover, &opts).map(|r| r.v).map_err(|e| e.to_string());
        let sum = v(a.direct_sum(&b).unwrap())?;
        ensure(sum == v(a.clone())? + v(b.clone())?, || format!("additivity #{i}"))?;
    }
    Ok("200 ring cases, 300 shift cases, 40 twist cases, 20 sum cases".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("hilbert-scheme identity", hilbert),
        ("bhargava point counts", bhargava),
        ("v = age for tame covers", v_age),
        ("v = artin conductor", v_conductor),
        ("wild mckay closed form", wild_closed_form),
        ("discrepancy", discrepancies),
        ("oracle sanity", oracles),
        ("property suites", properties),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let ms = start.elapsed().as_millis();
        match res {
            Ok(msg) => println!("PASS {} {name}: {msg} ({ms} ms)", i + 1),
            Err(msg) => {
                println!("FAIL {} {name}: {msg} ({ms} ms)", i + 1);
                failures += 1;
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
