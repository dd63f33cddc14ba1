//! Polynomials with truncated-series coefficients.

use alloc::vec::Vec;

use super::{SeriesError, TruncSeries, Valuation};
use crate::field::Field;
use crate::linalg::{self, DvrMatrix, LinalgError};

/// `Σ c_i x^i` with `c_i ∈ K((t))`, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesPoly<F: Field> {
    coeffs: Vec<TruncSeries<F>>,
}

impl<F: Field> SeriesPoly<F> {
    pub fn new(coeffs: Vec<TruncSeries<F>>) -> Self {
        SeriesPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[TruncSeries<F>] {
        &self.coeffs
    }

    /// Formal degree (number of stored coefficients minus one).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &TruncSeries<F>) -> TruncSeries<F> {
        let mut it = self.coeffs.iter().rev();
        let mut acc = it.next().expect("nonempty polynomial").clone();
        for c in it {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&c.field().from_i64(i as i64)))
            .collect();
        SeriesPoly { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        SeriesPoly { coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs: Vec<Option<TruncSeries<F>>> = (0..n).map(|_| None).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let p = a.mul(b);
                coeffs[i + j] = Some(match coeffs[i + j].take() {
                    None => p,
                    Some(s) => s.add(&p),
                });
            }
        }
        SeriesPoly { coeffs: coeffs.into_iter().map(|c| c.unwrap()).collect() }
    }

    /// `self(x + a)`.
    pub fn translate(&self, a: &TruncSeries<F>) -> Self {
        let f = a.field();
        let prec = a.precision();
        let shift = SeriesPoly { coeffs: alloc::vec![a.clone(), TruncSeries::one(f, prec)] };
        let mut it = self.coeffs.iter().rev();
        let mut acc = SeriesPoly { coeffs: alloc::vec![it.next().unwrap().clone()] };
        for c in it {
            acc = acc.mul(&shift).add(&SeriesPoly { coeffs: alloc::vec![c.clone()] });
        }
        acc
    }

    /// Sylvester matrix of `self` (formal degree `m`) and `other` (formal
    /// degree `n`), size `(m+n) x (m+n)`.
    pub fn sylvester(&self, other: &Self) -> DvrMatrix<F> {
        let m = self.degree();
        let n = other.degree();
        let size = m + n;
        let field = self.coeffs[0].field().clone();
        let prec = self
            .coeffs
            .iter()
            .chain(&other.coeffs)
            .map(TruncSeries::precision)
            .min()
            .unwrap();
        let mut s = DvrMatrix::zeros(&field, size, size, prec);
        for r in 0..n {
            for (i, c) in self.coeffs.iter().rev().enumerate() {
                s.set(r, r + i, c.clone());
            }
        }
        for r in 0..m {
            for (i, c) in other.coeffs.iter().rev().enumerate() {
                s.set(n + r, r + i, c.clone());
            }
        }
        s
    }
}

fn from_linalg(e: LinalgError) -> SeriesError {
    match e {
        LinalgError::PrecisionExhausted(m) => SeriesError::PrecisionExhausted(m),
        _ => SeriesError::PrecisionExhausted("resultant elimination"),
    }
}

/// Valuation of `Res(g, h)` for the formal degrees of `g` and `h`.
pub fn resultant_valuation<F: Field>(
    g: &SeriesPoly<F>,
    h: &SeriesPoly<F>,
) -> Result<i64, SeriesError> {
    linalg::det_valuation(&g.sylvester(h)).map_err(from_linalg)
}

/// Valuation of the discriminant of a monic polynomial, computed as the
/// valuation of `Res(g, g')` with `g'` of formal degree `deg g - 1`.
pub fn disc_valuation<F: Field>(g: &SeriesPoly<F>) -> Result<i64, SeriesError> {
    resultant_valuation(g, &g.derivative())
}

/// Newton lifting of an approximate root.
///
/// Requires `v(g(x0)) > 2 v(g'(x0))`; returns `x` with `g(x) ≡ 0 mod t^target`,
/// the returned precision being the one to which `x` agrees with the true
/// root.
pub fn hensel_root<F: Field>(
    g: &SeriesPoly<F>,
    x0: &TruncSeries<F>,
    target: i64,
) -> Result<TruncSeries<F>, SeriesError> {
    let dg = g.derivative();
    let d0 = dg.eval(x0);
    let e = d0.valuation().known().ok_or(SeriesError::HenselConditionFailed {
        value: g.eval(x0).valuation().lower_bound(),
        derivative: d0.precision(),
    })?;
    let v0 = g.eval(x0).valuation().lower_bound();
    if v0 <= 2 * e {
        return Err(SeriesError::HenselConditionFailed { value: v0, derivative: e });
    }
    let mut x = x0.clone();
    for _ in 0..64 {
        let gx = g.eval(&x);
        match gx.valuation() {
            Valuation::Unknown(p) if p >= target => {
                let agree = (p - e).min(x.precision());
                return Ok(x.truncate(agree));
            }
            Valuation::Unknown(_) => {
                return Err(SeriesError::PrecisionExhausted("Hensel lifting"));
            }
            Valuation::Known(v) if v >= target => {
                return Ok(x.truncate((v - e).min(x.precision())));
            }
            Valuation::Known(_) => {}
        }
        let step = gx.div(&dg.eval(&x))?;
        x = x.sub(&step);
    }
    Err(SeriesError::PrecisionExhausted("Hensel lifting did not converge"))
}
