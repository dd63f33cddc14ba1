use alloc::collections::BTreeMap;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use super::poly::fmt_exponent;
use super::{Exponent, MotPoly, MotValue, MotivicError};

/// `c` with `c^k = q`, if it exists.
pub fn exact_root(q: u64, k: u64) -> Option<u64> {
    if k == 1 || q <= 1 {
        return Some(q);
    }
    let (mut lo, mut hi) = (1u64, q);
    while lo <= hi {
        let mid = lo + (hi - lo) / 2;
        match mid.checked_pow(k as u32) {
            Some(v) if v == q => return Some(mid),
            Some(v) if v < q => lo = mid + 1,
            _ => hi = mid - 1,
        }
    }
    None
}

fn q_pow(q: u64, e: Exponent) -> Result<BigRational, MotivicError> {
    let den = *e.denom();
    let base = exact_root(q, den as u64).ok_or(MotivicError::NonIntegralRoot { q, root: den })?;
    let mag: BigUint = Pow::pow(BigUint::from(base), e.numer().unsigned_abs());
    let mag = BigRational::from_integer(BigInt::from(mag));
    Ok(if e.numer().is_negative() { mag.recip() } else { mag })
}

fn poly_at(p: &MotPoly, q: u64) -> Result<BigRational, MotivicError> {
    let mut acc = BigRational::zero();
    for (e, c) in p.terms() {
        acc += q_pow(q, *e)? * BigRational::from_integer(c.clone());
    }
    Ok(acc)
}

/// Point-count realization `L ↦ q`.
pub fn realize_point_count(a: &MotValue, q: u64) -> Result<BigRational, MotivicError> {
    if q == 0 {
        return Err(MotivicError::DivergentEvaluation(q));
    }
    match a {
        MotValue::Poly(p) => poly_at(p, q),
        MotValue::Series(s) => {
            let mut acc = poly_at(s.numerator(), q)?;
            for d in s.denominators() {
                let denom = BigRational::one() - q_pow(q, -*d)?;
                if denom.is_zero() {
                    return Err(MotivicError::DivergentEvaluation(q));
                }
                acc /= denom;
            }
            Ok(acc)
        }
    }
}

/// Laurent polynomial in `T^{1/r}`: image of the Poincaré realization.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TPoly {
    pub terms: BTreeMap<Exponent, BigInt>,
}

/// Polynomial in `u, v`: image of the E-polynomial realization.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EPoly {
    pub terms: BTreeMap<(Exponent, Exponent), BigInt>,
}

/// `L ↦ T^2`.
pub fn realize_poincare(a: &MotPoly) -> TPoly {
    TPoly { terms: a.terms().map(|(e, c)| (*e * 2, c.clone())).collect() }
}

/// `L ↦ uv`.
pub fn realize_e(a: &MotPoly) -> EPoly {
    EPoly { terms: a.terms().map(|(e, c)| ((*e, *e), c.clone())).collect() }
}

fn fmt_sign(first: bool, c: &BigInt, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match (first, c.is_negative()) {
        (true, true) => write!(f, "-"),
        (true, false) => Ok(()),
        (false, true) => write!(f, " - "),
        (false, false) => write!(f, " + "),
    }
}

fn fmt_var(name: &str, e: &Exponent, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.is_zero() {
        return Ok(());
    }
    write!(f, "{}", name)?;
    if !e.is_one() {
        write!(f, "^")?;
        fmt_exponent(e, f)?;
    }
    Ok(())
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            fmt_sign(i == 0, c, f)?;
            let mag = c.abs();
            if e.is_zero() || !mag.is_one() {
                write!(f, "{}", mag)?;
            }
            fmt_var("T", e, f)?;
        }
        Ok(())
    }
}

impl fmt::Display for EPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((eu, ev), c)) in self.terms.iter().rev().enumerate() {
            fmt_sign(i == 0, c, f)?;
            let mag = c.abs();
            if (eu.is_zero() && ev.is_zero()) || !mag.is_one() {
                write!(f, "{}", mag)?;
            }
            fmt_var("u", eu, f)?;
            fmt_var("v", ev, f)?;
        }
        Ok(())
    }
}
