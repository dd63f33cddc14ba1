//! Truncated Laurent series over an exact field with pessimistic precision
//! tracking.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::field::{Field, FieldError};

pub mod poly;

pub use poly::{disc_valuation, hensel_root, resultant_valuation, SeriesPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series is zero to precision {0} and cannot be inverted")]
    NotInvertible(i64),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(&'static str),
    #[error("Hensel condition failed: v(g(x0)) = {value}, v(g'(x0)) = {derivative}")]
    HenselConditionFailed { value: i64, derivative: i64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Order of a truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Known(i64),
    /// Every known coefficient vanishes; the true order is at least this.
    Unknown(i64),
}

impl Valuation {
    pub fn known(self) -> Option<i64> {
        match self {
            Valuation::Known(v) => Some(v),
            Valuation::Unknown(_) => None,
        }
    }

    /// Lower bound for the true order.
    pub fn lower_bound(self) -> i64 {
        match self {
            Valuation::Known(v) | Valuation::Unknown(v) => v,
        }
    }
}

/// `Σ c_i t^i` known modulo `t^prec`.
///
/// Coefficients are stored densely from the valuation upward with trailing
/// zeros trimmed, so exact polynomials stay short even at high precision.
#[derive(Clone)]
pub struct TruncSeries<F: Field> {
    field: F,
    val: i64,
    coeffs: Vec<F::Elem>,
    prec: i64,
}

impl<F: Field> TruncSeries<F> {
    /// The zero series known modulo `t^prec`.
    pub fn zero(field: &F, prec: i64) -> Self {
        TruncSeries { field: field.clone(), val: prec, coeffs: Vec::new(), prec }
    }

    pub fn one(field: &F, prec: i64) -> Self {
        Self::monomial(field, field.one(), 0, prec)
    }

    pub fn constant(field: &F, c: F::Elem, prec: i64) -> Self {
        Self::monomial(field, c, 0, prec)
    }

    /// `c t^e` modulo `t^prec`.
    pub fn monomial(field: &F, c: F::Elem, e: i64, prec: i64) -> Self {
        if e >= prec {
            return Self::zero(field, prec);
        }
        Self::from_coeffs(field, e, vec![c], prec)
    }

    /// `Σ coeffs[i] t^{val+i}` modulo `t^prec`; coefficients at or beyond
    /// `prec` are dropped.
    pub fn from_coeffs(field: &F, val: i64, coeffs: Vec<F::Elem>, prec: i64) -> Self {
        let mut s = TruncSeries { field: field.clone(), val, coeffs, prec };
        s.normalize();
        s
    }

    pub fn from_i64_coeffs(field: &F, val: i64, coeffs: &[i64], prec: i64) -> Self {
        let c = coeffs.iter().map(|&x| field.from_i64(x)).collect();
        Self::from_coeffs(field, val, c, prec)
    }

    fn normalize(&mut self) {
        let keep = (self.prec - self.val).max(0) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().position(|c| !self.field.is_zero(c));
        match lead {
            None => {
                self.coeffs.clear();
                self.val = self.prec;
            }
            Some(k) => {
                if k > 0 {
                    self.coeffs.drain(..k);
                    self.val += k as i64;
                }
                while let Some(last) = self.coeffs.last() {
                    if self.field.is_zero(last) {
                        self.coeffs.pop();
                    } else {
                        break;
                    }
                }
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn valuation(&self) -> Valuation {
        if self.coeffs.is_empty() {
            Valuation::Unknown(self.prec)
        } else {
            Valuation::Known(self.val)
        }
    }

    /// True when every coefficient below the precision vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^i`, or `None` if `i` is beyond the precision.
    pub fn coeff(&self, i: i64) -> Option<F::Elem> {
        if i >= self.prec {
            return None;
        }
        if i < self.val || i >= self.val + self.coeffs.len() as i64 {
            return Some(self.field.zero());
        }
        Some(self.coeffs[(i - self.val) as usize].clone())
    }

    /// Leading coefficient, if the valuation is known.
    pub fn leading(&self) -> Option<&F::Elem> {
        self.coeffs.first()
    }

    /// Highest exponent carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val + self.coeffs.len() as i64 - 1)
        }
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &F::Elem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(move |(i, c)| (self.val + i as i64, c))
    }

    /// Dense coefficient list from `from` up to (excluding) the precision.
    pub fn dense(&self, from: i64) -> Vec<F::Elem> {
        (from..self.prec).map(|i| self.coeff(i).unwrap()).collect()
    }

    /// Lowers the precision to `prec` (no-op if already lower).
    pub fn truncate(&self, prec: i64) -> Self {
        let mut s = self.clone();
        if prec < s.prec {
            s.prec = prec;
            s.normalize();
        }
        s
    }

    /// Same coefficients, claimed to precision `prec`. Only sound for series
    /// known to be exact polynomials.
    pub fn with_precision(&self, prec: i64) -> Self {
        let mut s = self.clone();
        s.prec = prec;
        if s.coeffs.is_empty() {
            s.val = prec;
        }
        s.normalize();
        s
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.field.neg(c)).collect();
        TruncSeries { field: self.field.clone(), val: self.val, coeffs, prec: self.prec }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let f = &self.field;
        let prec = self.prec.min(other.prec);
        if other.coeffs.is_empty() {
            return self.truncate(prec);
        }
        if self.coeffs.is_empty() {
            let o = other.truncate(prec);
            return if subtract { o.neg() } else { o };
        }
        let lo = self.val.min(other.val);
        let hi = (self.val + self.coeffs.len() as i64)
            .max(other.val + other.coeffs.len() as i64)
            .min(prec);
        if hi <= lo {
            return Self::zero(f, prec);
        }
        let mut out = vec![f.zero(); (hi - lo) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.val + i as i64 - lo;
            if k < out.len() as i64 {
                out[k as usize] = c.clone();
            }
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let k = other.val + i as i64 - lo;
            if k < out.len() as i64 {
                let slot = &mut out[k as usize];
                *slot = if subtract { f.sub(slot, c) } else { f.add(slot, c) };
            }
        }
        Self::from_coeffs(f, lo, out, prec)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let va = self.valuation().lower_bound();
        let vb = other.valuation().lower_bound();
        let prec = (self.prec + vb).min(other.prec + va);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero(f, prec);
        }
        let val = va + vb;
        if val >= prec {
            return Self::zero(f, prec);
        }
        let len = ((prec - val) as usize).min(self.coeffs.len() + other.coeffs.len() - 1);
        let coeffs = f.mul_slices(&self.coeffs, &other.coeffs, len);
        Self::from_coeffs(f, val, coeffs, prec)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|x| self.field.mul(x, c)).collect();
        Self::from_coeffs(&self.field, self.val, coeffs, self.prec)
    }

    /// Multiplication by `t^k`, exact.
    pub fn shift(&self, k: i64) -> Self {
        TruncSeries {
            field: self.field.clone(),
            val: self.val + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec + k,
        }
    }

    /// Multiplicative inverse.
    ///
    /// For `f = t^v u` known modulo `t^N` the inverse is known modulo
    /// `t^{N-2v}`.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let v = self.valuation().known().ok_or(SeriesError::NotInvertible(self.prec))?;
        let f = &self.field;
        let rel = (self.prec - v) as usize;
        let c0inv = f.inv(&self.coeffs[0]).expect("leading coefficient is nonzero");
        // Solve (Σ a_i t^i)(Σ b_i t^i) = 1 term by term.
        let mut b: Vec<F::Elem> = Vec::with_capacity(rel);
        b.push(c0inv.clone());
        for n in 1..rel {
            let mut s = f.zero();
            for i in 1..=n.min(self.coeffs.len() - 1) {
                s = f.add(&s, &f.mul(&self.coeffs[i], &b[n - i]));
            }
            b.push(f.neg(&f.mul(&s, &c0inv)));
        }
        Ok(Self::from_coeffs(f, -v, b, self.prec - 2 * v))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power; negative exponents go through [`TruncSeries::inv`].
    pub fn pow(&self, e: i64) -> Result<Self, SeriesError> {
        if e == 0 {
            let v = self.valuation().lower_bound();
            return Ok(Self::one(&self.field, self.prec - v));
        }
        let mut b = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        loop {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => b.clone(),
                    Some(a) => a.mul(&b),
                });
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            b = b.mul(&b);
        }
        Ok(acc.expect("e != 0"))
    }

    /// Composition `self(g)` for `g` of positive valuation. `self` must have
    /// nonnegative valuation.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        let vg = g.valuation().lower_bound();
        if vg < 1 {
            return Err(SeriesError::PrecisionExhausted("composition needs v(g) >= 1"));
        }
        if self.val < 0 && !self.coeffs.is_empty() {
            return Err(SeriesError::PrecisionExhausted("composition needs v(f) >= 0"));
        }
        let f = &self.field;
        // Unknown terms x^i, i >= self.prec, contribute at order i * v(g).
        let cap = self.prec.saturating_mul(vg);
        let top = match self.degree() {
            Some(d) => d,
            None => return Ok(Self::zero(f, cap.min(g.prec))),
        };
        let mut acc = Self::constant(f, self.coeff(top).unwrap(), cap);
        for i in (0..top).rev() {
            acc = acc.mul(g).add(&Self::constant(f, self.coeff(i).unwrap(), cap));
        }
        Ok(acc.truncate(cap))
    }

    /// Evaluates the formal derivative.
    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| f.mul(c, &f.from_i64(self.val + i as i64)))
            .collect();
        Self::from_coeffs(f, self.val - 1, coeffs, self.prec - 1)
    }

    /// Equality of all coefficients below the smaller precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl<F: Field> PartialEq for TruncSeries<F> {
    fn eq(&self, other: &Self) -> bool {
        self.prec == other.prec && self.val == other.val && self.coeffs == other.coeffs
    }
}

impl<F: Field> fmt::Debug for TruncSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Diagnostic text form `c0 + c1*t + ... + O(t^N)`.
impl<F: Field> fmt::Display for TruncSeries<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            let show = self.field.show(c);
            match e {
                0 => write!(out, "{}", show)?,
                1 => write!(out, "{}*t", show)?,
                _ => write!(out, "{}*t^{}", show, e)?,
            }
        }
        if !first {
            write!(out, " + ")?;
        }
        write!(out, "O(t^{})", self.prec)
    }
}
