//! Tuning modules `Ξ = Hom^G_{K[[t]]}(M, O_E)` and the v-invariant
//! `v(E) = length(Hom(M, O_E) / O_E Ξ) / #G`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::covers::{ASCover, CoverError, CoverSpec, IntegralModel, KummerCover};
use crate::field::{Field, FiniteField};
use crate::groups::LinearAction;
use crate::linalg::{det_valuation, saturated_kernel, smith_valuations, DvrMatrix, LinalgError};
use crate::motivic::Exponent;
use crate::series::TruncSeries;

type Series = TruncSeries<FiniteField>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TuningError {
    #[error("action of a group of order {action} does not match a cover of degree {cover}")]
    GroupMismatch { action: u64, cover: u64 },
    #[error("no tuning computation for this action and cover shape")]
    UnsupportedPair,
    #[error("result not stable after precision {last}")]
    PrecisionExhausted { last: i64 },
    #[error("tuning module is not free of rank {expected} (found {found})")]
    NonFreeDetected { expected: usize, found: usize },
    #[error("lengths over K[[t]] ({t_route}) and K[[s]] ({s_route}) disagree")]
    RouteDisagreement { t_route: i64, s_route: i64 },
    #[error("v depends on more than the jump {jump}: {expected} vs {found}")]
    JumpDependence { jump: u64, expected: Exponent, found: Exponent },
    #[error(transparent)]
    Cover(#[from] CoverError),
}

impl From<LinalgError> for TuningError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::NonFreeDetected { expected, found } => {
                TuningError::NonFreeDetected { expected, found }
            }
            other => TuningError::Cover(CoverError::Linalg(other)),
        }
    }
}

impl TuningError {
    /// Errors that more precision could cure.
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            TuningError::PrecisionExhausted { .. }
                | TuningError::RouteDisagreement { .. }
                | TuningError::Cover(CoverError::Linalg(LinalgError::PrecisionExhausted(_)))
                | TuningError::Cover(CoverError::Series(_))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuningResult {
    pub v: Exponent,
    /// Elementary divisors of `O_E Ξ` in `Hom(M, O_E) ≅ O_E^d`, as
    /// valuations in the uniformizer `s`.
    pub xi_valuations: Vec<i64>,
    pub precision_used: i64,
    pub stable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TuningOptions {
    /// Starting `t`-adic precision; a shape-based default when `None`.
    pub start_precision: Option<i64>,
    pub max_doublings: u32,
}

impl Default for TuningOptions {
    fn default() -> Self {
        TuningOptions { start_precision: None, max_doublings: 4 }
    }
}

/// The generator of the group on `M`, over the cover's field, paired with
/// the cover; checks that the shapes fit.
fn linear_matrix(action: &LinearAction, cover: &CoverSpec) -> Result<Vec<Vec<u32>>, TuningError> {
    match (action, cover) {
        (LinearAction::Tame(a), CoverSpec::Kummer(c)) => {
            if a.order() != c.l() {
                return Err(TuningError::GroupMismatch { action: a.order(), cover: c.l() });
            }
            let f = c.field();
            let zeta = c.zeta()?;
            let d = a.dim();
            let mut m = vec![vec![0u32; d]; d];
            for (k, &e) in a.exponents().iter().enumerate() {
                m[k][k] = f.pow(&zeta, e);
            }
            Ok(m)
        }
        (LinearAction::Modular(a), CoverSpec::ArtinSchreier(c)) => {
            if a.p() != c.p() {
                return Err(TuningError::GroupMismatch { action: a.p(), cover: c.p() });
            }
            Ok(a.matrix().into_iter().map(|r| r.into_iter().map(|x| x as u32).collect()).collect())
        }
        (a, c) => {
            if a.group_order() != c.degree() {
                Err(TuningError::GroupMismatch { action: a.group_order(), cover: c.degree() })
            } else {
                Err(TuningError::UnsupportedPair)
            }
        }
    }
}

/// A `K[[t]]`-basis of `Ξ`: `d` vectors of length `n d`, entry `k n + i`
/// being the coefficient of `e_i` in `φ(m_k)`.
///
/// `φ` is equivariant when `S Φ = Φ A`, with `S` the generator on `O_E` and
/// `A` the generator on `M`.
pub fn equivariant_hom_lattice(
    linear: &[Vec<u32>],
    model: &IntegralModel,
) -> Result<Vec<Vec<Series>>, TuningError> {
    let f = model.field();
    let n = model.degree();
    let d = linear.len();
    let prec = model.t_precision();
    let s = model.action();
    let mut b = DvrMatrix::zeros(f, n * d, n * d, prec);
    for k in 0..d {
        for r in 0..n {
            let row = k * n + r;
            for i in 0..n {
                let cur = b.get(row, k * n + i).add(s.get(r, i));
                b.set(row, k * n + i, cur);
            }
            for (l, lrow) in linear.iter().enumerate() {
                let a = lrow[k];
                if !f.is_zero(&a) {
                    let cur = b.get(row, l * n + r).sub(&TruncSeries::constant(f, a, prec));
                    b.set(row, l * n + r, cur);
                }
            }
        }
    }
    Ok(saturated_kernel(&b, d)?)
}

fn evaluate(linear: &[Vec<u32>], model: &IntegralModel) -> Result<(i64, Vec<i64>), TuningError> {
    let f = model.field();
    let n = model.degree();
    let d = linear.len();
    let prec = model.t_precision();
    let xi = equivariant_hom_lattice(linear, model)?;
    // O_E Ξ over K[[t]]: the vectors e_i ξ.
    let mut cols = Vec::with_capacity(n * d);
    for x in &xi {
        for i in 0..n {
            let mut col = vec![TruncSeries::zero(f, prec); n * d];
            for k in 0..d {
                for m in 0..n {
                    let c = &x[k * n + m];
                    if c.is_zero() {
                        continue;
                    }
                    for (r, e) in model.product(i, m).iter().enumerate() {
                        if !e.is_zero() {
                            col[k * n + r] = col[k * n + r].add(&c.mul(e));
                        }
                    }
                }
            }
            cols.push(col);
        }
    }
    let length = det_valuation(&DvrMatrix::from_columns(&cols)?)?;
    // The same module over K[[s]]: a d x d matrix.
    let s_cols = xi
        .iter()
        .map(|x| (0..d).map(|k| model.to_s(&x[k * n..(k + 1) * n])).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let divisors = smith_valuations(&DvrMatrix::from_columns(&s_cols)?)?;
    let s_len: i64 = divisors.iter().sum();
    if s_len != length {
        return Err(TuningError::RouteDisagreement { t_route: length, s_route: s_len });
    }
    Ok((length, divisors))
}

fn default_start(cover: &CoverSpec) -> i64 {
    match cover {
        CoverSpec::Kummer(_) => 8,
        CoverSpec::ArtinSchreier(c) => 4 * (c.jump() as i64 + 2),
    }
}

/// The v-invariant of a cyclic linear action against a cover of the same
/// group, by precision doubling until two successive levels agree.
pub fn v_invariant(
    action: &LinearAction,
    cover: &CoverSpec,
    opts: &TuningOptions,
) -> Result<TuningResult, TuningError> {
    let linear = linear_matrix(action, cover)?;
    let n = cover.degree() as i64;
    let mut prec = opts.start_precision.unwrap_or_else(|| default_start(cover)).max(2);
    let mut prev: Option<(i64, Vec<i64>)> = None;
    for _ in 0..=opts.max_doublings {
        let attempt = cover.integral_model(prec).map_err(TuningError::from).and_then(|m| evaluate(&linear, &m));
        match attempt {
            Ok(res) => {
                if prev.as_ref() == Some(&res) {
                    let (length, xi_valuations) = res;
                    return Ok(TuningResult {
                        v: Exponent::new(length, n),
                        xi_valuations,
                        precision_used: prec,
                        stable: true,
                    });
                }
                prev = Some(res);
            }
            Err(e) if e.is_precision() => prev = None,
            Err(e) => return Err(e),
        }
        prec *= 2;
    }
    Err(TuningError::PrecisionExhausted { last: prec / 2 })
}

/// Field used for randomized Artin-Schreier samples in characteristic `p`.
pub fn sample_field(p: u64) -> Result<FiniteField, CoverError> {
    let e = match p {
        2 => 4,
        3 => 2,
        _ => 1,
    };
    Ok(FiniteField::new(p, e)?)
}

/// A cover `y^p - y = f` with jump `j` and random lower coefficients.
pub fn random_as_cover(field: &FiniteField, j: u64, rng: &mut impl RngCore) -> Result<ASCover, CoverError> {
    let q = field.q();
    let p = field.p();
    let mut terms = BTreeMap::new();
    for i in (1..j).filter(|i| i % p != 0) {
        let c = (rng.next_u64() % q) as u32;
        if c != 0 {
            terms.insert(i, c);
        }
    }
    terms.insert(j, 1 + (rng.next_u64() % (q - 1)) as u32);
    let f0 = (rng.next_u64() % q) as u32;
    ASCover::new(field, terms, f0)
}

/// Checks that `samples` random covers with jump `j` give the same `v` as
/// `y^p - y = t^{-j}`; returns that value.
pub fn jump_only_v(
    action: &LinearAction,
    p: u64,
    j: u64,
    samples: usize,
    seed: u64,
    opts: &TuningOptions,
) -> Result<TuningResult, TuningError> {
    let base_field = FiniteField::prime(p).map_err(CoverError::from)?;
    let base = v_invariant(action, &CoverSpec::ArtinSchreier(ASCover::monomial(&base_field, j)?), opts)?;
    if samples == 0 {
        return Ok(base);
    }
    let field = sample_field(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 32) ^ j);
    for _ in 0..samples {
        let cover = random_as_cover(&field, j, &mut rng)?;
        let r = v_invariant(action, &CoverSpec::ArtinSchreier(cover), opts)?;
        if r.v != base.v {
            return Err(TuningError::JumpDependence { jump: j, expected: base.v, found: r.v });
        }
    }
    Ok(base)
}

/// `v` of a tame action against the standard Kummer cover of its order.
pub fn tame_v(action: &crate::groups::TameCyclicAction, opts: &TuningOptions) -> Result<TuningResult, TuningError> {
    if action.order() == 1 {
        return Ok(TuningResult { v: Exponent::from_integer(0), xi_valuations: vec![0; action.dim()], precision_used: 0, stable: true });
    }
    let cover = CoverSpec::Kummer(KummerCover::standard(action.order())?);
    v_invariant(&LinearAction::Tame(action.clone()), &cover, opts)
}
