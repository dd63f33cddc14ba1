use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{lcm_u32, Exponent, MotivicError};

/// Dimension of a motivic value: the top exponent of `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Dim {
    NegInfinity,
    Finite(Exponent),
}

impl Dim {
    pub fn finite(self) -> Option<Exponent> {
        match self {
            Dim::Finite(e) => Some(e),
            Dim::NegInfinity => None,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::NegInfinity => write!(f, "-inf"),
            Dim::Finite(e) => write!(f, "{}", e),
        }
    }
}

/// Level `m` of the dimension filtration: `F_m` holds the values of
/// dimension at most `-m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FiltrationIndex(pub Exponent);

impl FiltrationIndex {
    pub fn contains(&self, dim: Dim) -> bool {
        match dim {
            Dim::NegInfinity => true,
            Dim::Finite(d) => d <= -self.0,
        }
    }
}

/// A finite `Z`-combination of powers `L^e`, `e ∈ (1/r)Z`.
#[derive(Clone, Debug)]
pub struct MotPoly {
    root_index: u32,
    terms: BTreeMap<Exponent, BigInt>,
}

impl PartialEq for MotPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for MotPoly {}

impl Default for MotPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl MotPoly {
    pub fn zero() -> Self {
        MotPoly { root_index: 1, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::monomial(BigInt::from(n), Exponent::zero())
    }

    /// The Lefschetz class `L`.
    pub fn lefschetz() -> Self {
        Self::l_pow(Exponent::one())
    }

    /// `L^e`.
    pub fn l_pow(e: Exponent) -> Self {
        Self::monomial(BigInt::one(), e)
    }

    pub fn monomial(coeff: BigInt, e: Exponent) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(e, coeff);
        }
        MotPoly { root_index: *e.denom() as u32, terms }
    }

    /// Builds from `(exponent, coefficient)` pairs; every exponent denominator
    /// must divide `r`.
    pub fn from_terms<I>(r: u32, terms: I) -> Result<Self, MotivicError>
    where
        I: IntoIterator<Item = (Exponent, BigInt)>,
    {
        let mut p = MotPoly { root_index: r.max(1), terms: BTreeMap::new() };
        for (e, c) in terms {
            if p.root_index as i64 % e.denom() != 0 {
                return Err(MotivicError::BadRootIndex { den: *e.denom(), r: p.root_index });
            }
            p.add_term(e, &c);
        }
        Ok(p)
    }

    pub fn root_index(&self) -> u32 {
        self.root_index
    }

    /// Same value with the root index promoted to `lcm(r, self.r)`.
    pub fn with_root_index(mut self, r: u32) -> Self {
        self.root_index = lcm_u32(self.root_index, r.max(1));
        self
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        self.root_index = lcm_u32(self.root_index, *e.denom() as u32);
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: Exponent) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn dim(&self) -> Dim {
        self.terms.keys().next_back().map_or(Dim::NegInfinity, |e| Dim::Finite(*e))
    }

    /// Lowest exponent present.
    pub fn min_exponent(&self) -> Option<Exponent> {
        self.terms.keys().next().copied()
    }

    /// `‖a‖ = 2^{dim a}`, and 0 for the zero element.
    pub fn seminorm(&self) -> f64 {
        seminorm_of(self.dim())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero().with_root_index(self.root_index);
        }
        MotPoly {
            root_index: self.root_index,
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// Multiplication by `L^e`.
    pub fn shift(&self, e: Exponent) -> Self {
        MotPoly {
            root_index: lcm_u32(self.root_index, *e.denom() as u32),
            terms: self.terms.iter().map(|(k, c)| (*k + e, c.clone())).collect(),
        }
    }

    /// Drops every term of exponent below `-level`.
    pub fn truncate(&self, level: Exponent) -> Self {
        MotPoly {
            root_index: self.root_index,
            terms: self.terms.range(-level..).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one().with_root_index(self.root_index);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient by `1 - L^{-d}` if it exists.
    pub fn div_one_minus(&self, d: Exponent) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let lowest = self.min_exponent().unwrap();
        // q (1 - L^{-d}) = n  <=>  q (L^d - 1) = n L^d
        let mut rem = self.shift(d);
        let mut quot = MotPoly::zero().with_root_index(self.root_index);
        while let Some((&top, c)) = rem.terms.iter().next_back() {
            if top < lowest + d {
                return None;
            }
            let c = c.clone();
            quot.add_term(top - d, &c);
            rem.add_term(top, &-c.clone());
            rem.add_term(top - d, &c);
        }
        Some(quot.with_root_index(lcm_u32(self.root_index, *d.denom() as u32)))
    }
}

pub(crate) fn seminorm_of(d: Dim) -> f64 {
    match d {
        Dim::NegInfinity => 0.0,
        Dim::Finite(e) => libm::exp2(*e.numer() as f64 / *e.denom() as f64),
    }
}

impl<'a> Add<&'a MotPoly> for &'a MotPoly {
    type Output = MotPoly;
    fn add(self, rhs: &'a MotPoly) -> MotPoly {
        let mut out = self.clone().with_root_index(rhs.root_index);
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl<'a> Sub<&'a MotPoly> for &'a MotPoly {
    type Output = MotPoly;
    fn sub(self, rhs: &'a MotPoly) -> MotPoly {
        self + &(-rhs)
    }
}

impl Neg for &MotPoly {
    type Output = MotPoly;
    fn neg(self) -> MotPoly {
        MotPoly {
            root_index: self.root_index,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a MotPoly> for &'a MotPoly {
    type Output = MotPoly;
    fn mul(self, rhs: &'a MotPoly) -> MotPoly {
        let mut out = MotPoly::zero().with_root_index(lcm_u32(self.root_index, rhs.root_index));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(*ea + *eb, &(ca * cb));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MotPoly> for MotPoly {
            type Output = MotPoly;
            fn $m(self, rhs: MotPoly) -> MotPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MotPoly {
    type Output = MotPoly;
    fn neg(self) -> MotPoly {
        -&self
    }
}

pub(crate) fn fmt_exponent(e: &Exponent, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.is_integer() {
        write!(f, "{}", e.numer())
    } else {
        write!(f, "({}/{})", e.numer(), e.denom())
    }
}

/// `L^4 + L^3`, `-L^(1/2) + 2`, `L^-1`; descending exponents.
impl fmt::Display for MotPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if e.is_zero() {
                write!(f, "{}", mag)?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{}*", mag)?;
            }
            write!(f, "L")?;
            if !e.is_one() {
                write!(f, "^")?;
                fmt_exponent(e, f)?;
            }
        }
        Ok(())
    }
}

impl MotPoly {
    /// Collects terms into `(exponent, coefficient)` pairs, descending.
    pub fn to_descending(&self) -> Vec<(Exponent, BigInt)> {
        self.terms.iter().rev().map(|(e, c)| (*e, c.clone())).collect()
    }
}
