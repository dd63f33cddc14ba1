use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::gcd;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Pow, Zero};

use super::model::{uniformizer_disc_valuation, IntegralModel};
use super::{ASCover, CoverError};
use crate::field::{Field, FiniteField};
use crate::groups::factorial;

/// `j = start + step * k` for `k = 0, 1, 2, ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JumpProgression {
    pub start: u64,
    pub step: u64,
}

impl JumpProgression {
    pub fn jump(&self, k: u64) -> u64 {
        self.start + self.step * k
    }
}

/// `c0 + c1 * k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Affine {
    pub c0: i64,
    pub c1: i64,
}

impl Affine {
    pub const fn constant(c0: i64) -> Self {
        Affine { c0, c1: 0 }
    }

    pub fn eval(&self, k: u64) -> i64 {
        self.c0 + self.c1 * k as i64
    }

    fn plus(self, o: Affine) -> Affine {
        Affine { c0: self.c0 + o.c0, c1: self.c1 + o.c1 }
    }

    /// The same function written in `j` along `prog`.
    pub fn in_jump(&self, prog: Option<JumpProgression>) -> (Rational64, Rational64) {
        match prog {
            None => (Rational64::zero(), Rational64::from_integer(self.c0)),
            Some(pr) => {
                let slope = Rational64::new(self.c1, pr.step as i64);
                (slope, Rational64::from_integer(self.c0) - slope * pr.start as i64)
            }
        }
    }
}

/// `coeff * (q-1)^{q_minus_one} * q^{q_exp(k)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTerm {
    pub coeff: Rational64,
    pub q_minus_one: u32,
    pub q_exp: Affine,
}

impl CountTerm {
    fn one() -> Self {
        CountTerm { coeff: Rational64::one(), q_minus_one: 0, q_exp: Affine::default() }
    }

    fn times(&self, o: &CountTerm) -> CountTerm {
        CountTerm {
            coeff: self.coeff * o.coeff,
            q_minus_one: self.q_minus_one + o.q_minus_one,
            q_exp: self.q_exp.plus(o.q_exp),
        }
    }

    pub fn eval(&self, q: u64, k: u64) -> BigRational {
        big(self.coeff) * BigRational::from_integer(BigInt::from(q - 1).pow(self.q_minus_one)) * q_pow(q, self.q_exp.eval(k))
    }
}

fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn q_pow(q: u64, e: i64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(q).pow(e.unsigned_abs()));
    if e < 0 {
        m.recip()
    } else {
        m
    }
}

/// Quadratic resolvent of a non-Galois cubic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolvent {
    Unramified,
    /// `π^2 = u t`.
    Ramified { unit: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Unramified,
    /// `π^e = u t` with `p ∤ e`.
    Tame { unit: u32 },
    /// Cyclic of degree `p`, parametrized by the jump.
    ArtinSchreier,
    /// Cubic in characteristic 3 whose Galois closure has group `S_3`: a
    /// `Z/3` layer over the quadratic resolvent, parametrized by the jump of
    /// that layer.
    S3Tower { resolvent: Resolvent },
}

/// Isomorphism classes of separable field extensions of `F_q((t))`
/// sharing a shape; parametric families are indexed by `k >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldFamily {
    pub degree: u32,
    pub residue_degree: u32,
    pub kind: FieldKind,
    pub aut_order: u64,
    pub count: CountTerm,
    /// Discriminant valuation.
    pub conductor: Affine,
    pub jumps: Option<JumpProgression>,
}

impl FieldFamily {
    pub fn is_totally_ramified(&self) -> bool {
        self.residue_degree == 1 && self.degree > 1
    }
}

/// A family of étale algebras: a product of field families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaleAlgebraFamily {
    pub degree: u32,
    pub factors: Vec<FieldFamily>,
    pub aut_order: u64,
}

impl EtaleAlgebraFamily {
    pub fn jumps(&self) -> Option<JumpProgression> {
        self.factors.iter().find_map(|f| f.jumps)
    }

    pub fn count(&self) -> CountTerm {
        self.factors.iter().fold(CountTerm::one(), |acc, f| acc.times(&f.count))
    }

    pub fn conductor(&self) -> Affine {
        self.factors.iter().fold(Affine::default(), |acc, f| acc.plus(f.conductor))
    }

    /// `Σ_k count(k) q^{-conductor(k)} / |Aut|`, summed in closed form.
    pub fn mass(&self, q: u64) -> BigRational {
        let count = self.count();
        let cond = self.conductor();
        let base = count.eval(q, 0) * q_pow(q, -cond.c0) / BigRational::from_integer(self.aut_order.into());
        if self.jumps().is_none() {
            return base;
        }
        let ratio = count.q_exp.c1 - cond.c1;
        assert!(ratio < 0, "parametric family must have a convergent mass");
        base / (BigRational::one() - q_pow(q, ratio))
    }

    /// Count as an expression in `q` and `j`.
    pub fn count_expr(&self) -> String {
        let c = self.count();
        let mut parts = Vec::new();
        if !c.coeff.is_one() {
            parts.push(format!("{}", c.coeff));
        }
        match c.q_minus_one {
            0 => {}
            1 => parts.push(String::from("(q-1)")),
            n => parts.push(format!("(q-1)^{}", n)),
        }
        let (slope, cst) = c.q_exp.in_jump(self.jumps());
        if !(slope.is_zero() && cst.is_zero()) {
            parts.push(format!("q^({})", affine_j(slope, cst)));
        }
        if parts.is_empty() {
            String::from("1")
        } else {
            parts.join("*")
        }
    }

    pub fn conductor_expr(&self) -> String {
        let (slope, cst) = self.conductor().in_jump(self.jumps());
        affine_j(slope, cst)
    }
}

fn affine_j(slope: Rational64, cst: Rational64) -> String {
    let d = num_integer::lcm(*slope.denom(), *cst.denom());
    let a = *(slope * d).numer();
    let b = *(cst * d).numer();
    let mut s = match a {
        0 => format!("{}", b),
        1 => String::from("j"),
        -1 => String::from("-j"),
        _ => format!("{}*j", a),
    };
    if a != 0 && b != 0 {
        s = format!("{}{}{}", s, if b > 0 { "+" } else { "-" }, b.abs());
    }
    if d == 1 {
        s
    } else {
        format!("({})/{}", s, d)
    }
}

fn unramified(f: u32) -> FieldFamily {
    FieldFamily {
        degree: f,
        residue_degree: f,
        kind: FieldKind::Unramified,
        aut_order: u64::from(f),
        count: CountTerm::one(),
        conductor: Affine::constant(0),
        jumps: None,
    }
}

fn tame(field: &FiniteField, e: u32) -> Vec<FieldFamily> {
    let g = gcd(u64::from(e), field.q() - 1);
    let gamma = field.primitive_element();
    (0..g)
        .map(|i| FieldFamily {
            degree: e,
            residue_degree: 1,
            kind: FieldKind::Tame { unit: field.pow(&gamma, i) },
            aut_order: g,
            count: CountTerm::one(),
            conductor: Affine::constant(i64::from(e) - 1),
            jumps: None,
        })
        .collect()
}

/// Cyclic degree-`p` fields with jump `j = pk + r`: `p (q-1) q^{m_j - 1}`
/// torsor classes, `m_j = j - ⌊j/p⌋`, identified in groups of `p - 1`.
fn artin_schreier(p: u64) -> Vec<FieldFamily> {
    let pi = p as i64;
    (1..pi)
        .map(|r| FieldFamily {
            degree: p as u32,
            residue_degree: 1,
            kind: FieldKind::ArtinSchreier,
            aut_order: p,
            count: CountTerm {
                coeff: Rational64::new(pi, pi - 1),
                q_minus_one: 1,
                q_exp: Affine { c0: r - 1, c1: pi - 1 },
            },
            conductor: Affine { c0: (pi - 1) * (r + 1), c1: (pi - 1) * pi },
            jumps: Some(JumpProgression { start: r as u64, step: p }),
        })
        .collect()
}

/// Non-Galois cubics in characteristic 3. Over the resolvent `K` the
/// `Z/3` layer is a class of `K / ℘(K)` on which `Gal(K/F)` acts by `-1`;
/// a class and its negative give the same cubic.
fn s3_towers(field: &FiniteField) -> Vec<FieldFamily> {
    let mut out = Vec::new();
    // K unramified: every coefficient lies in a q-element eigenline of
    // Frobenius on F_{q^2}; constants carry no -1 part. Disc = 2(j+1).
    for r in [1i64, 2] {
        out.push(FieldFamily {
            degree: 3,
            residue_degree: 1,
            kind: FieldKind::S3Tower { resolvent: Resolvent::Unramified },
            aut_order: 1,
            count: CountTerm { coeff: Rational64::new(1, 2), q_minus_one: 1, q_exp: Affine { c0: r - 1, c1: 2 } },
            conductor: Affine { c0: 2 * (r + 1), c1: 6 },
            jumps: Some(JumpProgression { start: r as u64, step: 3 }),
        });
    }
    // K = F(π), π^2 = u t: the -1 part consists of odd pole orders, so
    // j ≡ ±1 (mod 6). Disc = v(d_K) + (j+1) = j + 2.
    let gamma = field.primitive_element();
    for unit in [field.one(), gamma] {
        for (r, below) in [(1i64, 0i64), (5, 1)] {
            out.push(FieldFamily {
                degree: 3,
                residue_degree: 1,
                kind: FieldKind::S3Tower { resolvent: Resolvent::Ramified { unit } },
                aut_order: 1,
                count: CountTerm { coeff: Rational64::new(1, 2), q_minus_one: 1, q_exp: Affine { c0: below, c1: 2 } },
                conductor: Affine { c0: r + 2, c1: 6 },
                jumps: Some(JumpProgression { start: r as u64, step: 6 }),
            });
        }
    }
    out
}

/// Checks the conductor of the first two members of a cyclic family
/// against the discriminant of the uniformizer's characteristic polynomial.
fn verify_artin_schreier(fam: &FieldFamily, p: u64) -> Result<(), CoverError> {
    let field = FiniteField::prime(p)?;
    let prog = fam.jumps.expect("parametric");
    for k in 0..2 {
        let j = prog.jump(k);
        let model = IntegralModel::artin_schreier(&ASCover::monomial(&field, j)?, 8 * (j as i64 + 2))?;
        if uniformizer_disc_valuation(&model)? != fam.conductor.eval(k) {
            return Err(CoverError::ModelCheckFailed("conductor formula"));
        }
    }
    Ok(())
}

/// Field families of degree `n <= 3` over `F_q((t))`.
pub fn enumerate_fields(n: u32, q: u64) -> Result<Vec<FieldFamily>, CoverError> {
    let field = FiniteField::of_order(q).map_err(|_| CoverError::UnsupportedDegree { n, q })?;
    let p = field.p();
    let mut out = vec![unramified(n)];
    match n {
        1 => {}
        2 | 3 if p != u64::from(n) => out.extend(tame(&field, n)),
        2 | 3 => {
            let fams = artin_schreier(p);
            for f in &fams {
                verify_artin_schreier(f, p)?;
            }
            out.extend(fams);
            if n == 3 {
                out.extend(s3_towers(&field));
            }
        }
        _ => return Err(CoverError::UnsupportedDegree { n, q }),
    }
    Ok(out)
}

/// Families of étale `F_q((t))`-algebras of degree `n <= 3`.
pub fn enumerate_etale(n: u32, q: u64) -> Result<Vec<EtaleAlgebraFamily>, CoverError> {
    if !(1..=3).contains(&n) {
        return Err(CoverError::UnsupportedDegree { n, q });
    }
    let mut out = Vec::new();
    for lambda in crate::groups::partitions(n as usize) {
        let ones = lambda.iter().filter(|&&k| k == 1).count() as u64;
        let mut combos: Vec<Vec<FieldFamily>> = vec![vec![unramified(1); ones as usize]];
        for &k in lambda.iter().filter(|&&k| k > 1) {
            let fields = enumerate_fields(k as u32, q)?;
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    fields.iter().map(move |f| {
                        let mut c = c.clone();
                        c.insert(0, f.clone());
                        c
                    })
                })
                .collect();
        }
        for factors in combos {
            let aut_order = factorial(ones) * factors.iter().filter(|f| f.degree > 1).map(|f| f.aut_order).product::<u64>();
            out.push(EtaleAlgebraFamily { degree: n, factors, aut_order });
        }
    }
    Ok(out)
}

/// Artin conductor of the member `k` of a family: the sum of the factor
/// discriminant valuations.
pub fn artin_conductor(family: &EtaleAlgebraFamily, k: u64) -> Result<i64, CoverError> {
    if family.degree > 3 {
        return Err(CoverError::UnsupportedTower);
    }
    Ok(family.conductor().eval(k))
}

/// `Σ count / |Aut| q^{-d}` over a field family.
pub fn field_mass(family: &FieldFamily, q: u64) -> BigRational {
    EtaleAlgebraFamily { degree: family.degree, factors: vec![family.clone()], aut_order: family.aut_order }.mass(q)
}

/// `Σ (n / |Aut|) q^{-(d - n + 1)}` over totally ramified extensions of
/// degree `n`; equals `n` by Serre's mass formula.
pub fn serre_mass_check(n: u32, q: u64) -> Result<BigRational, CoverError> {
    if !(2..=3).contains(&n) {
        return Err(CoverError::UnsupportedDegree { n, q });
    }
    let mut acc = BigRational::zero();
    for fam in enumerate_fields(n, q)?.iter().filter(|f| f.is_totally_ramified()) {
        acc += field_mass(fam, q);
    }
    Ok(acc * BigRational::from_integer(BigInt::from(n) * BigInt::from(q).pow(n - 1)))
}
