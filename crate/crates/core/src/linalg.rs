//! Matrices over a truncated discrete valuation ring `K[[t]]`: elementary
//! divisor valuations, saturated kernels and division-free characteristic
//! polynomials.

use alloc::vec::Vec;

use crate::field::Field;
use crate::series::{TruncSeries, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(&'static str),
    #[error("kernel has rank {found}, expected {expected}")]
    NonFreeDetected { expected: usize, found: usize },
    #[error("shape mismatch")]
    Shape,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DvrMatrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<TruncSeries<F>>,
}

impl<F: Field> DvrMatrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize, prec: i64) -> Self {
        DvrMatrix { rows, cols, data: (0..rows * cols).map(|_| TruncSeries::zero(field, prec)).collect() }
    }

    pub fn identity(field: &F, n: usize, prec: i64) -> Self {
        let mut m = Self::zeros(field, n, n, prec);
        for i in 0..n {
            m.set(i, i, TruncSeries::one(field, prec));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<TruncSeries<F>>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape);
        }
        Ok(DvrMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<TruncSeries<F>>]) -> Result<Self, LinalgError> {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|col| col.len() != r) {
            return Err(LinalgError::Shape);
        }
        let data = (0..r).flat_map(|i| cols.iter().map(move |col| col[i].clone())).collect();
        Ok(DvrMatrix { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncSeries<F> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: TruncSeries<F>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<TruncSeries<F>> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape);
        }
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Option<TruncSeries<F>> = None;
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    let term = a.mul(b);
                    acc = Some(match acc {
                        None => term,
                        Some(s) => s.add(&term),
                    });
                }
                data.push(acc.expect("inner dimension is positive"));
            }
        }
        Ok(DvrMatrix { rows: self.rows, cols: other.cols, data })
    }

    pub fn apply(&self, v: &[TruncSeries<F>]) -> Result<Vec<TruncSeries<F>>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Shape);
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.get(i, 0).mul(&v[0]);
                for (k, x) in v.iter().enumerate().skip(1) {
                    acc = acc.add(&self.get(i, k).mul(x));
                }
                acc
            })
            .collect())
    }

    /// Entrywise agreement to the tracked precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.agrees_with(b))
    }

    pub fn min_precision(&self) -> i64 {
        self.data.iter().map(TruncSeries::precision).min().unwrap_or(i64::MAX)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Position of the entry of least known valuation in the block
    /// `[r0..rows) x [c0..cols)`.
    fn min_valuation_entry(&self, r0: usize, c0: usize) -> Option<(usize, usize, i64)> {
        let mut best: Option<(usize, usize, i64)> = None;
        for i in r0..self.rows {
            for j in c0..self.cols {
                if let Valuation::Known(v) = self.get(i, j).valuation() {
                    if best.is_none_or(|(_, _, b)| v < b) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        best
    }
}

/// Valuations `a_1 <= ... <= a_k` of the elementary divisors `t^{a_i}`.
///
/// Pivots on an entry of minimal valuation in the remaining block; fails with
/// `PrecisionExhausted` once the remaining block is zero to precision, since
/// the missing divisors cannot be certified.
pub fn smith_valuations<F: Field>(m: &DvrMatrix<F>) -> Result<Vec<i64>, LinalgError> {
    let mut a = m.clone();
    let n = a.rows.min(a.cols);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (pi, pj, v) = a
            .min_valuation_entry(k, k)
            .ok_or(LinalgError::PrecisionExhausted("elementary divisor undetermined"))?;
        a.swap_rows(k, pi);
        a.swap_cols(k, pj);
        let pinv = a.get(k, k).inv().map_err(|_| LinalgError::PrecisionExhausted("pivot"))?;
        for i in k + 1..a.rows {
            if a.get(i, k).is_zero() {
                continue;
            }
            let factor = a.get(i, k).mul(&pinv);
            for j in k + 1..a.cols {
                let upd = a.get(i, j).sub(&factor.mul(a.get(k, j)));
                a.set(i, j, upd);
            }
        }
        out.push(v);
    }
    out.sort_unstable();
    Ok(out)
}

/// Valuation of the determinant of a square matrix.
pub fn det_valuation<F: Field>(m: &DvrMatrix<F>) -> Result<i64, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::Shape);
    }
    Ok(smith_valuations(m)?.iter().sum())
}

/// A basis of the saturated kernel `ker(m) ∩ K[[t]]^cols`, by column
/// echelon reduction with unimodular column operations.
///
/// The caller states the rank the kernel must have; a larger apparent kernel
/// means some entry could not be separated from zero at this precision, a
/// smaller one means the input contradicts the expected structure.
pub fn saturated_kernel<F: Field>(
    m: &DvrMatrix<F>,
    expected_dim: usize,
) -> Result<Vec<Vec<TruncSeries<F>>>, LinalgError> {
    let field = m.data.first().map(|s| s.field().clone());
    let Some(field) = field else {
        return Ok(Vec::new());
    };
    let mut a = m.clone();
    let prec = m.min_precision().max(1);
    let mut q = DvrMatrix::identity(&field, a.cols, prec);
    let mut next = 0;
    for i in 0..a.rows {
        if next == a.cols {
            break;
        }
        let mut best: Option<(usize, i64)> = None;
        for j in next..a.cols {
            if let Valuation::Known(v) = a.get(i, j).valuation() {
                if best.is_none_or(|(_, b)| v < b) {
                    best = Some((j, v));
                }
            }
        }
        let Some((pj, _)) = best else { continue };
        a.swap_cols(next, pj);
        q.swap_cols(next, pj);
        let pinv = a.get(i, next).inv().map_err(|_| LinalgError::PrecisionExhausted("pivot"))?;
        for j in next + 1..a.cols {
            if a.get(i, j).is_zero() {
                continue;
            }
            let factor = a.get(i, j).mul(&pinv);
            for r in i..a.rows {
                let upd = a.get(r, j).sub(&factor.mul(a.get(r, next)));
                a.set(r, j, upd);
            }
            for r in 0..q.rows {
                let upd = q.get(r, j).sub(&factor.mul(q.get(r, next)));
                q.set(r, j, upd);
            }
        }
        next += 1;
    }
    let found = a.cols - next;
    if found > expected_dim {
        return Err(LinalgError::PrecisionExhausted("kernel rank not separated from zero"));
    }
    if found < expected_dim {
        return Err(LinalgError::NonFreeDetected { expected: expected_dim, found });
    }
    Ok((next..a.cols).map(|j| q.column(j)).collect())
}

/// Characteristic polynomial `det(x I - m)` by Berkowitz's division-free
/// recurrence; coefficients lowest degree first, monic.
pub fn char_poly<F: Field>(m: &DvrMatrix<F>) -> Result<Vec<TruncSeries<F>>, LinalgError> {
    if m.rows != m.cols || m.rows == 0 {
        return Err(LinalgError::Shape);
    }
    let n = m.rows;
    let field = m.get(0, 0).field().clone();
    let prec = m.min_precision();
    let one = TruncSeries::one(&field, prec);
    // Highest degree first while iterating.
    let mut vect = alloc::vec![one.clone(), m.get(0, 0).neg()];
    for r in 1..n {
        // A_{r+1} = [[M, C], [R, a]]
        let a = m.get(r, r);
        let mut toeplitz = alloc::vec![one.clone(), a.neg()];
        // C, M C, M^2 C, ...
        let mut col: Vec<TruncSeries<F>> = (0..r).map(|i| m.get(i, r).clone()).collect();
        for k in 0..r {
            let mut dot = m.get(r, 0).mul(&col[0]);
            for i in 1..r {
                dot = dot.add(&m.get(r, i).mul(&col[i]));
            }
            toeplitz.push(dot.neg());
            if k + 1 < r {
                col = (0..r)
                    .map(|i| {
                        let mut acc = m.get(i, 0).mul(&col[0]);
                        for j in 1..r {
                            acc = acc.add(&m.get(i, j).mul(&col[j]));
                        }
                        acc
                    })
                    .collect();
            }
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = TruncSeries::zero(&field, prec);
            for (j, v) in vect.iter().enumerate() {
                if i >= j && i - j < toeplitz.len() {
                    acc = acc.add(&toeplitz[i - j].mul(v));
                }
            }
            next.push(acc);
        }
        vect = next;
    }
    vect.reverse();
    Ok(vect)
}
