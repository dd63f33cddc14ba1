use alloc::vec;
use alloc::vec::Vec;

use super::artin_schreier::{laurent_series, LaurentPoly};
use super::{ASCover, CoverError, KummerCover};
use crate::field::{Field, FiniteField};
use crate::linalg::{char_poly, DvrMatrix};
use crate::series::{disc_valuation, SeriesPoly, TruncSeries};

type Series = TruncSeries<FiniteField>;

/// The ring of integers `O_E = K[[s]]` of a cyclic cover of degree `n`,
/// as a free `K[[t]]`-module on a basis `e_0, ..., e_{n-1}` with
/// `v_s(e_i) = i`, together with the generator of the Galois group.
///
/// Series in `t` are known modulo `t^{t_prec}`, series in `s` modulo
/// `s^{n t_prec}`.
#[derive(Debug, Clone)]
pub struct IntegralModel {
    field: FiniteField,
    n: usize,
    t_prec: i64,
    t_image: Series,
    generator_image: Series,
    basis_in_s: Vec<Series>,
    action: DvrMatrix<FiniteField>,
    mult: Vec<Vec<Vec<Series>>>,
}

impl IntegralModel {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn t_precision(&self) -> i64 {
        self.t_prec
    }

    pub fn s_precision(&self) -> i64 {
        self.n as i64 * self.t_prec
    }

    /// `t` as a series in the uniformizer `s`: `s^n` times a unit.
    pub fn t_image(&self) -> &Series {
        &self.t_image
    }

    /// Image of `s` under the generator.
    pub fn generator_image(&self) -> &Series {
        &self.generator_image
    }

    /// `e_i` as series in `s`.
    pub fn basis_in_s(&self) -> &[Series] {
        &self.basis_in_s
    }

    /// The generator on the basis: column `i` holds the coordinates of
    /// `g(e_i)`.
    pub fn action(&self) -> &DvrMatrix<FiniteField> {
        &self.action
    }

    /// Coordinates of `e_i e_m`.
    pub fn product(&self, i: usize, m: usize) -> &[Series] {
        &self.mult[i][m]
    }

    /// Matrix of multiplication by the element with coordinates `x`.
    pub fn multiplication_matrix(&self, x: &[Series]) -> DvrMatrix<FiniteField> {
        let mut out = DvrMatrix::zeros(&self.field, self.n, self.n, self.t_prec);
        for i in 0..self.n {
            for r in 0..self.n {
                let mut acc = TruncSeries::zero(&self.field, self.t_prec);
                for (m, xm) in x.iter().enumerate() {
                    if !xm.is_zero() {
                        acc = acc.add(&xm.mul(&self.mult[m][i][r]));
                    }
                }
                out.set(r, i, acc);
            }
        }
        out
    }

    /// Substitutes `t = t(s)` into a series in `t`.
    pub fn t_to_s(&self, x: &Series) -> Result<Series, CoverError> {
        Ok(x.compose(&self.t_image)?)
    }

    /// The element with the given coordinates, as a series in `s`.
    pub fn to_s(&self, x: &[Series]) -> Result<Series, CoverError> {
        let sp = self.s_precision();
        let mut acc = TruncSeries::zero(&self.field, sp);
        for (xm, em) in x.iter().zip(&self.basis_in_s) {
            if !xm.is_zero() {
                acc = acc.add(&self.t_to_s(xm)?.mul(em));
            }
        }
        Ok(acc)
    }

    pub fn kummer(cover: &KummerCover, t_prec: i64) -> Result<Self, CoverError> {
        let field = cover.field().clone();
        let f = &field;
        let l = cover.l() as usize;
        let zeta = cover.zeta()?;
        let u = cover.unit();
        let sp = l as i64 * t_prec;
        let uinv = f.inv(&u).expect("unit");
        let t_image = TruncSeries::monomial(f, uinv, l as i64, sp);
        let generator_image = TruncSeries::monomial(f, zeta, 1, sp);
        let basis_in_s = (0..l).map(|i| TruncSeries::monomial(f, f.one(), i as i64, sp)).collect();
        let mut action = DvrMatrix::zeros(f, l, l, t_prec);
        for i in 0..l {
            action.set(i, i, TruncSeries::constant(f, f.pow(&zeta, i as u64), t_prec));
        }
        let mut mult = vec![vec![Vec::new(); l]; l];
        for (i, row) in mult.iter_mut().enumerate() {
            for (m, slot) in row.iter_mut().enumerate() {
                let mut coords = vec![TruncSeries::zero(f, t_prec); l];
                if i + m < l {
                    coords[i + m] = TruncSeries::one(f, t_prec);
                } else {
                    coords[i + m - l] = TruncSeries::monomial(f, u, 1, t_prec);
                }
                *slot = coords;
            }
        }
        Ok(IntegralModel { field, n: l, t_prec, t_image, generator_image, basis_in_s, action, mult })
    }

    /// Model of `y^p - y = f` with uniformizer `s = y^a t^b`, where
    /// `-a j + b p = 1` and `0 < a < p`. The basis is
    /// `e_i = y^{α_i} t^{β_i}` with `α_i ≡ i a (mod p)`.
    pub fn artin_schreier(cover: &ASCover, t_prec: i64) -> Result<Self, CoverError> {
        let field = cover.field().clone();
        let f = &field;
        let p = cover.p() as usize;
        let pi = p as i64;
        let j = cover.jump() as i64;
        let a = (1..pi).find(|a| (a * j + 1) % pi == 0).expect("j is prime to p");
        let b = (1 + a * j) / pi;
        let alpha: Vec<i64> = (0..pi).map(|i| i * a % pi).collect();
        let beta: Vec<i64> = (0..p).map(|i| (i as i64 + alpha[i] * j) / pi).collect();
        let idx = |al: i64| -> usize { ((-al * j).rem_euclid(pi)) as usize };

        // y^A t^B for 0 <= A <= 2p - 2, as coordinates.
        let fpoly = cover.laurent();
        let express = |big_a: i64, big_b: i64| -> Vec<LaurentPoly> {
            let mut coords = vec![LaurentPoly::new(); p];
            let mut put = |al: i64, e: i64, c: u32| {
                let i = idx(al);
                let slot = &mut coords[i];
                let k = e - beta[i];
                let cur = slot.get(&k).copied().unwrap_or(0);
                let s = f.add(&cur, &c);
                if f.is_zero(&s) {
                    slot.remove(&k);
                } else {
                    slot.insert(k, s);
                }
            };
            if big_a < pi {
                put(big_a, big_b, f.one());
            } else {
                let r = big_a - pi;
                put(r + 1, big_b, f.one());
                for (&k, &c) in &fpoly {
                    put(r, big_b + k, c);
                }
            }
            coords
        };
        let to_series = |coords: Vec<LaurentPoly>| -> Result<Vec<Series>, CoverError> {
            coords
                .iter()
                .map(|c| {
                    if c.keys().next().is_some_and(|&k| k < 0) {
                        return Err(CoverError::ModelCheckFailed("non-integral coordinate"));
                    }
                    Ok(laurent_series(f, c, t_prec))
                })
                .collect()
        };

        let mut action = DvrMatrix::zeros(f, p, p, t_prec);
        for i in 0..p {
            let mut binom = f.one();
            let mut total = vec![LaurentPoly::new(); p];
            for k in 0..=alpha[i] {
                if k > 0 {
                    binom = f.mul(&binom, &f.from_i64(alpha[i] - k + 1));
                    binom = f.mul(&binom, &f.inv(&f.from_i64(k)).expect("k < p"));
                }
                for (slot, part) in total.iter_mut().zip(express(alpha[i] - k, beta[i])) {
                    for (e, c) in part {
                        let cur = slot.get(&e).copied().unwrap_or(0);
                        let s = f.add(&cur, &f.mul(&c, &binom));
                        if f.is_zero(&s) {
                            slot.remove(&e);
                        } else {
                            slot.insert(e, s);
                        }
                    }
                }
            }
            for (r, x) in to_series(total)?.into_iter().enumerate() {
                action.set(r, i, x);
            }
        }
        let mut mult = vec![vec![Vec::new(); p]; p];
        for i in 0..p {
            for m in 0..p {
                mult[i][m] = to_series(express(alpha[i] + alpha[m], beta[i] + beta[m]))?;
            }
        }

        // s-expansions: t = s^p ρ^a, 1/y = s^j ρ^b, with ρ the fixed point of
        // ρ = (1 - (s^j ρ^b)^{p-1}) / F(s^p ρ^a), F(t) = t^j f(t).
        let sp = pi * t_prec;
        let mut big_f = TruncSeries::zero(f, sp);
        for (&k, &c) in &fpoly {
            big_f = big_f.add(&TruncSeries::monomial(f, c, j + k, sp));
        }
        let fj = cover.terms()[&(j as u64)];
        let s_mono = |e: i64| TruncSeries::monomial(f, f.one(), e, sp);
        let one = TruncSeries::one(f, sp);
        let mut rho = TruncSeries::constant(f, f.inv(&fj).expect("nonzero"), sp);
        let mut converged = false;
        for _ in 0..=sp {
            let t_s = s_mono(pi).mul(&rho.pow(a)?).truncate(sp);
            let w = s_mono(j).mul(&rho.pow(b)?).truncate(sp);
            let next = one.sub(&w.pow(pi - 1)?).div(&big_f.compose(&t_s)?)?.truncate(sp);
            if next.precision() < sp {
                return Err(CoverError::ModelCheckFailed("uniformizer expansion lost precision"));
            }
            let done = next == rho;
            rho = next;
            if done {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(CoverError::ModelCheckFailed("uniformizer expansion did not converge"));
        }
        let t_image = s_mono(pi).mul(&rho.pow(a)?).truncate(sp);
        let w = s_mono(j).mul(&rho.pow(b)?).truncate(sp);
        let generator_image = s_mono(1).mul(&one.add(&w).pow(a)?).truncate(sp);
        let basis_in_s = (0..p)
            .map(|i| Ok(s_mono(i as i64).mul(&rho.pow(a * beta[i] - b * alpha[i])?).truncate(sp)))
            .collect::<Result<Vec<_>, CoverError>>()?;
        Ok(IntegralModel { field, n: p, t_prec, t_image, generator_image, basis_in_s, action, mult })
    }

    /// Consistency of the model to its precision: `g^n = 1` on the basis,
    /// `g` fixes `t`, `g^n(s) = s`, and the basis action agrees with the
    /// substitution `s ↦ g(s)`.
    pub fn check(&self) -> Result<(), CoverError> {
        let f = &self.field;
        let mut power = DvrMatrix::identity(f, self.n, self.t_prec);
        for _ in 0..self.n {
            power = power.mul(&self.action)?;
        }
        if !power.agrees_with(&DvrMatrix::identity(f, self.n, self.t_prec)) {
            return Err(CoverError::ModelCheckFailed("g^n is not the identity"));
        }
        let g = &self.generator_image;
        if !self.t_image.compose(g)?.agrees_with(&self.t_image) {
            return Err(CoverError::ModelCheckFailed("g does not fix t"));
        }
        let mut it = g.clone();
        for _ in 1..self.n {
            it = it.compose(g)?;
        }
        if !it.agrees_with(&TruncSeries::monomial(f, f.one(), 1, self.s_precision())) {
            return Err(CoverError::ModelCheckFailed("g^n(s) is not s"));
        }
        for i in 0..self.n {
            let lhs = self.basis_in_s[i].compose(g)?;
            let rhs = self.to_s(&self.action.column(i))?;
            if !lhs.agrees_with(&rhs) {
                return Err(CoverError::ModelCheckFailed("basis action disagrees with g(s)"));
            }
            for m in 0..self.n {
                let lhs = self.basis_in_s[i].mul(&self.basis_in_s[m]);
                if !lhs.agrees_with(&self.to_s(&self.mult[i][m])?) {
                    return Err(CoverError::ModelCheckFailed("multiplication table"));
                }
            }
        }
        Ok(())
    }
}

/// Valuation of the discriminant of the characteristic polynomial of
/// multiplication by the uniformizer `e_1`; this is the discriminant of
/// `O_E` over `K[[t]]`.
pub fn uniformizer_disc_valuation(model: &IntegralModel) -> Result<i64, CoverError> {
    let f = model.field();
    let n = model.degree();
    let mut x = vec![TruncSeries::zero(f, model.t_precision()); n];
    if n == 1 {
        return Ok(0);
    }
    x[1] = TruncSeries::one(f, model.t_precision());
    let m = model.multiplication_matrix(&x);
    let g = SeriesPoly::new(char_poly(&m)?);
    Ok(disc_valuation(&g)?)
}
