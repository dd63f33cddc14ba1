use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{fmt_exponent, seminorm_of};
use super::{lcm_u32, Dim, Exponent, MotPoly, MotivicError};

/// `numerator · Π_i (1 - L^{-d_i})^{-1}` with every `d_i > 0`.
#[derive(Clone, Debug)]
pub struct MotSeries {
    numerator: MotPoly,
    denoms: Vec<Exponent>,
}

fn one_minus(d: Exponent) -> MotPoly {
    &MotPoly::one() - &MotPoly::l_pow(-d)
}

fn multiset(ds: &[Exponent]) -> BTreeMap<Exponent, usize> {
    let mut m = BTreeMap::new();
    for d in ds {
        *m.entry(*d).or_insert(0) += 1;
    }
    m
}

impl MotSeries {
    pub fn new(numerator: MotPoly, mut denoms: Vec<Exponent>) -> Result<Self, MotivicError> {
        if let Some(d) = denoms.iter().find(|d| **d <= Exponent::zero()) {
            return Err(MotivicError::NonPositiveDenominator(*d));
        }
        denoms.sort_unstable();
        Ok(MotSeries { numerator, denoms })
    }

    /// `1 / (1 - L^{-d})`.
    pub fn geometric(d: Exponent) -> Result<Self, MotivicError> {
        Self::new(MotPoly::one(), alloc::vec![d])
    }

    pub fn numerator(&self) -> &MotPoly {
        &self.numerator
    }

    pub fn denominators(&self) -> &[Exponent] {
        &self.denoms
    }

    pub fn root_index(&self) -> u32 {
        self.denoms
            .iter()
            .fold(self.numerator.root_index(), |r, d| lcm_u32(r, *d.denom() as u32))
    }

    /// Every geometric factor has leading term 1, so the dimension is the
    /// numerator's.
    pub fn dim(&self) -> Dim {
        self.numerator.dim()
    }

    /// Expansion with every term of exponent below `-level` dropped.
    pub fn truncate(&self, level: Exponent) -> MotPoly {
        let mut cur = self.numerator.truncate(level);
        for d in &self.denoms {
            let Some(Dim::Finite(top)) = Some(cur.dim()) else {
                return cur;
            };
            let mut geo = MotPoly::zero();
            let mut k = Exponent::zero();
            while top - k >= -level {
                geo = &geo + &MotPoly::l_pow(-k);
                k += *d;
            }
            cur = (&cur * &geo).truncate(level);
        }
        cur.with_root_index(self.root_index())
    }

    /// Cancels geometric factors that divide the numerator exactly.
    pub fn simplify(&self) -> MotValue {
        let mut num = self.numerator.clone();
        let mut kept = Vec::new();
        for d in &self.denoms {
            match num.div_one_minus(*d) {
                Some(q) => num = q,
                None => kept.push(*d),
            }
        }
        if kept.is_empty() {
            MotValue::Poly(num)
        } else {
            MotValue::Series(MotSeries { numerator: num, denoms: kept })
        }
    }

    /// Numerator rewritten over the denominator multiset `target`, which
    /// must contain this series' denominators.
    fn numerator_over(&self, target: &BTreeMap<Exponent, usize>) -> MotPoly {
        let own = multiset(&self.denoms);
        let mut num = self.numerator.clone();
        for (d, &k) in target {
            let have = own.get(d).copied().unwrap_or(0);
            for _ in have..k {
                num = &num * &one_minus(*d);
            }
        }
        num
    }

    fn from_multiset(numerator: MotPoly, m: &BTreeMap<Exponent, usize>) -> Self {
        let denoms = m.iter().flat_map(|(d, &k)| core::iter::repeat_n(*d, k)).collect();
        MotSeries { numerator, denoms }
    }
}

/// Cross-multiplied comparison, exact.
impl PartialEq for MotSeries {
    fn eq(&self, other: &Self) -> bool {
        let mut union = multiset(&self.denoms);
        for (d, k) in multiset(&other.denoms) {
            let e = union.entry(d).or_insert(0);
            *e = (*e).max(k);
        }
        self.numerator_over(&union) == other.numerator_over(&union)
    }
}

impl fmt::Display for MotSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/", self.numerator)?;
        if self.denoms.len() > 1 {
            write!(f, "(")?;
        }
        for d in &self.denoms {
            write!(f, "(1 - L^")?;
            fmt_exponent(&-*d, f)?;
            write!(f, ")")?;
        }
        if self.denoms.len() > 1 {
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// An element of the completed ring: a finite polynomial or a convergent
/// geometric series.
#[derive(Clone, Debug)]
pub enum MotValue {
    Poly(MotPoly),
    Series(MotSeries),
}

impl From<MotPoly> for MotValue {
    fn from(p: MotPoly) -> Self {
        MotValue::Poly(p)
    }
}

impl From<MotSeries> for MotValue {
    fn from(s: MotSeries) -> Self {
        MotValue::Series(s).normalized()
    }
}

impl MotValue {
    pub fn zero() -> Self {
        MotValue::Poly(MotPoly::zero())
    }

    fn as_series(&self) -> MotSeries {
        match self {
            MotValue::Poly(p) => MotSeries { numerator: p.clone(), denoms: Vec::new() },
            MotValue::Series(s) => s.clone(),
        }
    }

    fn normalized(self) -> Self {
        match self {
            MotValue::Series(s) if s.denoms.is_empty() => MotValue::Poly(s.numerator),
            v => v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            MotValue::Poly(p) => p.is_zero(),
            MotValue::Series(s) => s.numerator.is_zero(),
        }
    }

    pub fn as_poly(&self) -> Option<&MotPoly> {
        match self {
            MotValue::Poly(p) => Some(p),
            MotValue::Series(_) => None,
        }
    }

    pub fn root_index(&self) -> u32 {
        match self {
            MotValue::Poly(p) => p.root_index(),
            MotValue::Series(s) => s.root_index(),
        }
    }

    pub fn dim(&self) -> Dim {
        match self {
            MotValue::Poly(p) => p.dim(),
            MotValue::Series(s) => s.dim(),
        }
    }

    pub fn seminorm(&self) -> f64 {
        seminorm_of(self.dim())
    }

    pub fn truncate(&self, level: Exponent) -> MotPoly {
        match self {
            MotValue::Poly(p) => p.truncate(level),
            MotValue::Series(s) => s.truncate(level),
        }
    }

    /// Cancels removable denominators; polynomials are returned unchanged.
    pub fn simplify(&self) -> MotValue {
        match self {
            MotValue::Poly(p) => MotValue::Poly(p.clone()),
            MotValue::Series(s) => s.simplify(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> MotValue {
        match self {
            MotValue::Poly(p) => MotValue::Poly(p.scale(c)),
            MotValue::Series(s) => {
                MotValue::Series(MotSeries { numerator: s.numerator.scale(c), denoms: s.denoms.clone() })
            }
        }
    }
}

impl PartialEq for MotValue {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (MotValue::Poly(a), MotValue::Poly(b)) => a == b,
            _ => self.as_series() == other.as_series(),
        }
    }
}

impl<'a> Add<&'a MotValue> for &'a MotValue {
    type Output = MotValue;
    fn add(self, rhs: &'a MotValue) -> MotValue {
        if let (MotValue::Poly(a), MotValue::Poly(b)) = (self, rhs) {
            return MotValue::Poly(a + b);
        }
        let (a, b) = (self.as_series(), rhs.as_series());
        let mut union = multiset(&a.denoms);
        for (d, k) in multiset(&b.denoms) {
            let e = union.entry(d).or_insert(0);
            *e = (*e).max(k);
        }
        let num = &a.numerator_over(&union) + &b.numerator_over(&union);
        MotValue::Series(MotSeries::from_multiset(num, &union)).normalized()
    }
}

impl<'a> Mul<&'a MotValue> for &'a MotValue {
    type Output = MotValue;
    fn mul(self, rhs: &'a MotValue) -> MotValue {
        if let (MotValue::Poly(a), MotValue::Poly(b)) = (self, rhs) {
            return MotValue::Poly(a * b);
        }
        let (a, b) = (self.as_series(), rhs.as_series());
        let mut denoms = a.denoms;
        denoms.extend(b.denoms);
        denoms.sort_unstable();
        MotValue::Series(MotSeries { numerator: &a.numerator * &b.numerator, denoms }).normalized()
    }
}

impl Neg for &MotValue {
    type Output = MotValue;
    fn neg(self) -> MotValue {
        self.scale(&-BigInt::one())
    }
}

impl<'a> Sub<&'a MotValue> for &'a MotValue {
    type Output = MotValue;
    fn sub(self, rhs: &'a MotValue) -> MotValue {
        self + &(-rhs)
    }
}

impl fmt::Display for MotValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MotValue::Poly(p) => fmt::Display::fmt(p, f),
            MotValue::Series(s) => fmt::Display::fmt(s, f),
        }
    }
}
