//! Stringy motives of linear quotient singularities: tame age sums, the
//! inertia-component formula, the wild `Z/p` McKay integral, discrepancies,
//! and the Hilbert-scheme and Bhargava identities.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use crate::covers::{enumerate_etale, CoverError};
use crate::groups::{partitions, perm_exponents, LinearAction, ModularCyclicAction, TameCyclicAction};
use crate::motivic::{Dim, Exponent, MotPoly, MotSeries, MotValue, MotivicError};
use crate::tuning::{jump_only_v, tame_v, TuningError, TuningOptions};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StringyError {
    #[error("the action contains a pseudo-reflection")]
    PseudoReflectionPresent,
    #[error("the group order is divisible by the characteristic")]
    WildGroup,
    #[error("the group acts trivially")]
    NotFaithful,
    #[error("the wild tail did not stabilize below the jump cap")]
    UndeterminedTail,
    #[error(transparent)]
    Tuning(#[from] TuningError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Motivic(#[from] MotivicError),
}

fn l_pow(e: Exponent) -> MotPoly {
    MotPoly::l_pow(e)
}

fn l_int(e: i64) -> MotPoly {
    MotPoly::l_pow(Exponent::from_integer(e))
}

fn check_tame(action: &LinearAction) -> Result<(), StringyError> {
    if matches!(action, LinearAction::Modular(_)) {
        return Err(StringyError::WildGroup);
    }
    if action.has_pseudo_reflection() {
        return Err(StringyError::PseudoReflectionPresent);
    }
    Ok(())
}

/// `Σ_{[g]} L^{d - age(g)}` over the conjugacy classes of the image group.
pub fn stringy_tame(action: &LinearAction) -> Result<MotPoly, StringyError> {
    check_tame(action)?;
    let d = action.dim() as i64;
    let mut acc = MotPoly::zero();
    match action {
        LinearAction::Tame(a) => {
            let a = a.effective();
            for k in 0..a.order() {
                acc = &acc + &l_pow(Exponent::from_integer(d) - a.age(k));
            }
        }
        LinearAction::Perm(p) => {
            for lambda in partitions(p.n) {
                let age = perm_exponents(&lambda, p.m).age(1);
                acc = &acc + &l_pow(Exponent::from_integer(d) - age);
            }
        }
        LinearAction::Modular(_) => unreachable!(),
    }
    Ok(acc)
}

/// `Σ_Z {C_Z} L^{c(Z) + s(Z)}` over the components of the inertia stack:
/// one per conjugacy class `[g]`, with `C_Z = A^{dim V^g}`,
/// `c(Z) = d - dim V^g` and `s(Z) = -v`, `v` computed from the tuning module
/// of `<g>` against its Kummer cover.
pub fn stringy_tame_inertia(action: &LinearAction, opts: &TuningOptions) -> Result<MotPoly, StringyError> {
    check_tame(action)?;
    let d = action.dim();
    let mut acc = MotPoly::zero();
    let mut component = |sub: TameCyclicAction| -> Result<(), StringyError> {
        let fixed = sub.fixed_dim(1);
        let v = tame_v(&sub, opts)?.v;
        let term = &(&l_int(fixed as i64) * &l_int((d - fixed) as i64)) * &l_pow(-v);
        acc = &acc + &term;
        Ok(())
    };
    match action {
        LinearAction::Tame(a) => {
            let a = a.effective();
            for k in 0..a.order() {
                component(a.power(k))?;
            }
        }
        LinearAction::Perm(p) => {
            for lambda in partitions(p.n) {
                component(perm_exponents(&lambda, p.m))?;
            }
        }
        LinearAction::Modular(_) => unreachable!(),
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StratumLabel {
    Trivial,
    Tame { l: u64, k: u64 },
    Wild { p: u64, jump: u64 },
    /// All jumps `j ≡ residue (mod p)` with `j >= from_jump`, summed in
    /// closed form.
    WildTail { p: u64, residue: u64, from_jump: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stratum {
    pub label: StratumLabel,
    pub coarse_class: MotPoly,
    /// `v` on the stratum; for a tail, its value at `from_jump`.
    pub v: Exponent,
    /// `dim C + d - v`; for a tail, its supremum.
    pub dim: Exponent,
    pub contribution: MotValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StringyReport {
    pub value: MotValue,
    /// `None` when the tail could not be closed below the jump cap.
    pub converges: Option<bool>,
    pub dim: Dim,
    pub d: usize,
    pub strata: Vec<Stratum>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McKayOptions {
    pub tuning: TuningOptions,
    /// Random covers per jump used to confirm that `v` depends only on the
    /// jump.
    pub samples: usize,
    pub seed: u64,
}

impl Default for McKayOptions {
    fn default() -> Self {
        McKayOptions { tuning: TuningOptions::default(), samples: 2, seed: 0x5eed }
    }
}

/// `m_j = j - ⌊j/p⌋`: the number of free Artin-Schreier coefficients of a
/// jump-`j` normal form; the stratum class is `L^{m_j} - L^{m_j - 1}`.
pub fn wild_stratum_exponent(p: u64, j: u64) -> u64 {
    j - j / p
}

pub fn wild_stratum_class(p: u64, j: u64) -> MotPoly {
    let m = wild_stratum_exponent(p, j) as i64;
    &l_int(m) - &l_int(m - 1)
}

/// `∫_{Δ_{Z/p}} L^{d - v}` for a `Z/p` action in characteristic `p`,
/// stratified by jump; strata above `jump_cap` are closed as geometric
/// series once `v` is affine in `j` on each residue class mod `p`.
pub fn mckay_zp_integral(
    action: &ModularCyclicAction,
    jump_cap: u64,
    opts: &McKayOptions,
) -> Result<StringyReport, StringyError> {
    if !action.is_faithful() {
        return Err(StringyError::NotFaithful);
    }
    if action.has_pseudo_reflection() {
        return Err(StringyError::PseudoReflectionPresent);
    }
    let p = action.p();
    let d = action.dim() as i64;
    let dq = Exponent::from_integer(d);
    let lin = LinearAction::Modular(action.clone());
    let mut strata = vec![Stratum {
        label: StratumLabel::Trivial,
        coarse_class: MotPoly::one(),
        v: Exponent::zero(),
        dim: dq,
        contribution: MotValue::Poly(l_int(d)),
    }];
    let mut by_residue: Vec<Vec<(u64, Exponent)>> = vec![Vec::new(); p as usize];
    for j in (1..=jump_cap).filter(|j| j % p != 0) {
        let v = jump_only_v(&lin, p, j, opts.samples, opts.seed, &opts.tuning)?.v;
        let class = wild_stratum_class(p, j);
        let m = Exponent::from_integer(wild_stratum_exponent(p, j) as i64);
        strata.push(Stratum {
            label: StratumLabel::Wild { p, jump: j },
            contribution: MotValue::Poly(&class * &l_pow(dq - v)),
            coarse_class: class,
            v,
            dim: m + dq - v,
        });
        by_residue[(j % p) as usize].push((j, v));
    }
    let mut converges = Some(true);
    if jump_cap == 0 {
        converges = None;
    }
    for r in 1..p {
        let vals = &by_residue[r as usize];
        if vals.len() < 3 {
            converges = None;
            continue;
        }
        let [(_, v1), (_, v2), (j3, v3)] = [vals[vals.len() - 3], vals[vals.len() - 2], vals[vals.len() - 1]];
        let step = v3 - v2;
        if v2 - v1 != step {
            converges = None;
            continue;
        }
        // each step in k raises m_j by p - 1 and v by `step`
        let slope = Exponent::from_integer(p as i64 - 1) - step;
        if slope >= Exponent::zero() {
            if converges.is_some() {
                converges = Some(false);
            }
            continue;
        }
        let j0 = j3 + p;
        let v0 = v3 + step;
        let m0 = Exponent::from_integer(wild_stratum_exponent(p, j0) as i64);
        let e0 = m0 + dq - v0;
        let num = &l_pow(e0) - &l_pow(e0 - 1);
        let tail = MotSeries::new(num, vec![-slope])?;
        strata.push(Stratum {
            label: StratumLabel::WildTail { p, residue: r, from_jump: j0 },
            coarse_class: wild_stratum_class(p, j0),
            v: v0,
            dim: e0,
            contribution: MotValue::from(tail),
        });
    }
    let mut value = MotValue::zero();
    for s in &strata {
        if converges == Some(true) || !matches!(s.label, StratumLabel::WildTail { .. }) {
            value = &value + &s.contribution;
        }
    }
    let value = value.simplify();
    let dim = value.dim();
    Ok(StringyReport { value, converges, dim, strata, d: action.dim() })
}

/// A discrepancy value; `NegInfinity` when the punctured integral diverges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discrepancy {
    Finite(Exponent),
    NegInfinity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub discrepancy: Discrepancy,
    pub singular_dim: usize,
    /// `sup (dim C + d - v)` over the nontrivial strata, `None` if infinite.
    pub punctured_dim: Option<Exponent>,
    pub log_terminal: bool,
}

/// `d - 1 - max{dim X_sing, dim ∫_{Δ_G \ {o}} L^{d-v}}`.
///
/// Tame strata are points with `v = age`; the wild integral is evaluated by
/// [`mckay_zp_integral`] up to `jump_cap`.
pub fn discrepancy(action: &LinearAction, jump_cap: u64, opts: &McKayOptions) -> Result<DiscrepancyReport, StringyError> {
    if action.has_pseudo_reflection() {
        return Err(StringyError::PseudoReflectionPresent);
    }
    let d = action.dim();
    let dq = Exponent::from_integer(d as i64);
    let (singular_dim, punctured) = match action {
        LinearAction::Tame(a) => {
            let a = a.effective();
            if a.order() == 1 {
                return Err(StringyError::NotFaithful);
            }
            let sing = (1..a.order()).map(|k| a.fixed_dim(k)).max().unwrap_or(0);
            let punct = (1..a.order()).map(|k| dq - a.age(k)).max();
            (sing, punct)
        }
        LinearAction::Perm(p) => {
            let nontrivial: Vec<Vec<usize>> = partitions(p.n).into_iter().filter(|l| l.len() < p.n).collect();
            if nontrivial.is_empty() {
                return Err(StringyError::NotFaithful);
            }
            let sing = nontrivial.iter().map(|l| p.fixed_dim(l)).max().unwrap_or(0);
            let punct = nontrivial.iter().map(|l| dq - perm_exponents(l, p.m).age(1)).max();
            (sing, punct)
        }
        LinearAction::Modular(a) => {
            let report = mckay_zp_integral(a, jump_cap, opts)?;
            match report.converges {
                None => return Err(StringyError::UndeterminedTail),
                Some(false) => (a.fixed_dim(), None),
                Some(true) => {
                    let punct = report
                        .strata
                        .iter()
                        .filter(|s| s.label != StratumLabel::Trivial)
                        .map(|s| s.dim)
                        .max();
                    (a.fixed_dim(), punct)
                }
            }
        }
    };
    let (discrepancy, log_terminal) = match punctured {
        None => (Discrepancy::NegInfinity, false),
        Some(pd) => {
            let m = pd.max(Exponent::from_integer(singular_dim as i64));
            (Discrepancy::Finite(dq - 1 - m), true)
        }
    };
    Ok(DiscrepancyReport { discrepancy, singular_dim, punctured_dim: punctured, log_terminal })
}

/// `P(n, m)`: partitions of `n` into exactly `m` parts.
pub fn partition_count(n: u64, m: u64) -> u64 {
    let (n, m) = (n as usize, m as usize);
    if m > n {
        return 0;
    }
    // table[a][b] = P(a, b)
    let mut table = vec![vec![0u64; m + 1]; n + 1];
    table[0][0] = 1;
    for a in 1..=n {
        for b in 1..=m.min(a) {
            table[a][b] = table[a - 1][b - 1] + table[a - b][b];
        }
    }
    table[n][m]
}

/// `{Hilb^n(A^2)} = Σ_i P(n, n-i) L^{2n-i}`.
pub fn hilb_class(n: u64) -> MotPoly {
    let mut acc = MotPoly::zero();
    for i in 0..n {
        let c = BigInt::from(partition_count(n, n - i));
        acc = &acc + &MotPoly::monomial(c, Exponent::from_integer((2 * n - i) as i64));
    }
    acc
}

/// `Σ_j P(n, n-j) L^{-j}`.
pub fn bhargava_rhs_motivic(n: u64) -> MotPoly {
    let mut acc = MotPoly::zero();
    for j in 0..n {
        let c = BigInt::from(partition_count(n, n - j));
        acc = &acc + &MotPoly::monomial(c, Exponent::from_integer(-(j as i64)));
    }
    acc
}

/// `Σ_j P(n, n-j) q^{-j}`.
pub fn bhargava_rhs(n: u64, q: u64) -> BigRational {
    let mut acc = BigRational::zero();
    for j in 0..n {
        let c = BigInt::from(partition_count(n, n - j));
        acc += BigRational::new(c, BigInt::from(q).pow(j as u32));
    }
    acc
}

/// `Σ_A q^{-a(A)} / |Aut A|` over étale algebras of degree `n` over
/// `F_q((t))`, `a` the Artin conductor.
pub fn bhargava_lhs(n: u64, q: u64) -> Result<BigRational, StringyError> {
    let mut acc = BigRational::zero();
    for fam in enumerate_etale(n as u32, q)? {
        acc += fam.mass(q);
    }
    Ok(acc)
}

/// Tame stringy motive of `S_n` on `(A^2)^n`: `Σ_λ L^{n + ℓ(λ)}`.
pub fn stringy_sn(n: usize) -> MotPoly {
    let mut acc = MotPoly::zero();
    for lambda in partitions(n) {
        acc = &acc + &l_int((n + lambda.len()) as i64);
    }
    acc
}
