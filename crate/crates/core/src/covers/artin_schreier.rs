use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::CoverError;
use crate::field::{Field, FiniteField};
use crate::series::TruncSeries;

/// `Σ c_k t^k` with finitely many nonzero terms.
pub type LaurentPoly = BTreeMap<i64, u32>;

fn add_term(f: &FiniteField, poly: &mut LaurentPoly, k: i64, c: u32) {
    let cur = poly.get(&k).copied().unwrap_or(0);
    let s = f.add(&cur, &c);
    if f.is_zero(&s) {
        poly.remove(&k);
    } else {
        poly.insert(k, s);
    }
}

/// The cover `y^p - y = f0 + Σ_j f_j t^{-j}`, all `j` prime to `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASCover {
    field: FiniteField,
    terms: BTreeMap<u64, u32>,
    f0: u32,
}

impl ASCover {
    pub fn new(field: &FiniteField, terms: BTreeMap<u64, u32>, f0: u32) -> Result<Self, CoverError> {
        let p = field.p();
        if terms.keys().any(|&j| j == 0 || j % p == 0) {
            return Err(CoverError::InvalidCover("pole orders must be positive and prime to p"));
        }
        if terms.values().any(|c| field.is_zero(c) || u64::from(*c) >= field.q()) {
            return Err(CoverError::InvalidCover("coefficients must be nonzero field elements"));
        }
        if u64::from(f0) >= field.q() {
            return Err(CoverError::InvalidCover("constant term is not a field element"));
        }
        if terms.is_empty() {
            return Err(CoverError::Unramified);
        }
        Ok(ASCover { field: field.clone(), terms, f0 })
    }

    /// `y^p - y = t^{-j}`.
    pub fn monomial(field: &FiniteField, j: u64) -> Result<Self, CoverError> {
        Self::new(field, BTreeMap::from([(j, 1)]), 0)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    /// Pole order `j ↦ f_j`.
    pub fn terms(&self) -> &BTreeMap<u64, u32> {
        &self.terms
    }

    pub fn f0(&self) -> u32 {
        self.f0
    }

    /// Largest pole order.
    pub fn jump(&self) -> u64 {
        *self.terms.keys().next_back().expect("ramified cover has a pole")
    }

    /// `f` as a Laurent polynomial in `t`.
    pub fn laurent(&self) -> LaurentPoly {
        let mut out: LaurentPoly = self.terms.iter().map(|(&j, &c)| (-(j as i64), c)).collect();
        if !self.field.is_zero(&self.f0) {
            out.insert(0, self.f0);
        }
        out
    }

    pub fn ram_datum(&self) -> RamDatum {
        RamDatum { p: self.p(), jump: self.jump() }
    }
}

/// Ramification datum of a `Z/p`-cover: its single jump.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RamDatum {
    pub p: u64,
    pub jump: u64,
}

/// Result of [`as_reduce`]: the normal form and a witness `w` with
/// `f - normal_form = w^p - w`.
#[derive(Debug, Clone)]
pub struct AsReduction {
    /// `None` when `f` lies in `℘(K((t)))` up to a constant class.
    pub cover: Option<ASCover>,
    pub normal_form: LaurentPoly,
    witness_principal: LaurentPoly,
    positive_part: LaurentPoly,
}

impl AsReduction {
    /// The witness modulo `t^prec`: the exact principal part plus
    /// `-Σ_i g^{p^i}` for the discarded positive part `g`.
    pub fn witness(&self, field: &FiniteField, prec: i64) -> TruncSeries<FiniteField> {
        let mut w = laurent_series(field, &self.witness_principal, prec);
        let g = laurent_series(field, &self.positive_part, prec);
        let mut gp = g;
        while !gp.is_zero() {
            w = w.sub(&gp);
            gp = frobenius(field, &gp);
        }
        w
    }

    /// Checks `f - normal_form ≡ ℘(witness) mod t^prec`.
    pub fn verify(&self, field: &FiniteField, f: &LaurentPoly, prec: i64) -> bool {
        let w = self.witness(field, prec);
        let lhs = laurent_series(field, f, prec).sub(&laurent_series(field, &self.normal_form, prec));
        let rhs = frobenius(field, &w).sub(&w);
        lhs.agrees_with(&rhs)
    }
}

pub(crate) fn laurent_series(
    field: &FiniteField,
    f: &LaurentPoly,
    prec: i64,
) -> TruncSeries<FiniteField> {
    let mut s = TruncSeries::zero(field, prec);
    for (&k, &c) in f {
        s = s.add(&TruncSeries::monomial(field, c, k, prec));
    }
    s
}

/// `g ↦ g^p`, coefficientwise Frobenius with exponents scaled by `p`.
fn frobenius(field: &FiniteField, g: &TruncSeries<FiniteField>) -> TruncSeries<FiniteField> {
    let p = field.p() as i64;
    let prec = g.precision();
    let mut out = TruncSeries::zero(field, prec);
    for (k, c) in g.terms() {
        out = out.add(&TruncSeries::monomial(field, field.pow(c, field.p()), k * p, prec));
    }
    out
}

/// Artin-Schreier normal form of `f` modulo `℘(K((t)))`.
///
/// Poles of order divisible by `p` are replaced by `p`-th roots of lower
/// order, positive powers of `t` are dropped, and the constant is replaced by
/// the smallest field element of the same absolute trace.
pub fn as_reduce(field: &FiniteField, f: &LaurentPoly) -> Result<AsReduction, CoverError> {
    let p = field.p() as i64;
    let mut g: LaurentPoly = BTreeMap::new();
    let mut positive_part = BTreeMap::new();
    for (&k, &c) in f {
        if field.is_zero(&c) {
            continue;
        }
        if k > 0 {
            positive_part.insert(k, c);
        } else {
            add_term(field, &mut g, k, c);
        }
    }
    let mut witness = BTreeMap::new();
    loop {
        let next = g.iter().find(|(&k, _)| k < 0 && k % p == 0).map(|(&k, &c)| (k, c));
        let Some((k, c)) = next else { break };
        let b = field.pth_root(&c)?;
        g.remove(&k);
        add_term(field, &mut g, k / p, b);
        add_term(field, &mut witness, k / p, b);
    }
    let c0 = g.remove(&0).unwrap_or(0);
    let tr = field.trace(&c0);
    let rep = field.elements().find(|x| field.trace(x) == tr).expect("trace is surjective");
    let diff = field.sub(&c0, &rep);
    if !field.is_zero(&diff) {
        let x = field
            .elements()
            .find(|x| field.sub(&field.pow(x, field.p()), x) == diff)
            .expect("trace-zero elements lie in the image of x^p - x");
        add_term(field, &mut witness, 0, x);
    }
    let mut normal_form = g.clone();
    if !field.is_zero(&rep) {
        normal_form.insert(0, rep);
    }
    let cover = if g.is_empty() {
        None
    } else {
        let terms = g.iter().map(|(&k, &c)| ((-k) as u64, c)).collect();
        Some(ASCover::new(field, terms, rep)?)
    };
    Ok(AsReduction { cover, normal_form, witness_principal: witness, positive_part })
}

/// Number of classes in `K((t)) / ℘(K((t)))` represented by Laurent
/// polynomials with pole order at most `j`, computed as
/// `|V_j| / |℘(V_{⌊j/p⌋})|` where `V_m` is the space of polynomials in
/// `t^{-1}` of degree at most `m`.
pub fn as_class_count(field: &FiniteField, j: u64) -> u64 {
    let p = field.p();
    let q = field.q();
    let m = (j / p) as usize;
    let mut image = alloc::collections::BTreeSet::new();
    let total = q.pow(m as u32 + 1);
    for idx in 0..total {
        let mut g = Vec::with_capacity(m + 1);
        let mut r = idx;
        for _ in 0..=m {
            g.push((r % q) as u32);
            r /= q;
        }
        // ℘(g) in the coordinates t^0, t^{-1}, ..., t^{-pm}
        let mut img = alloc::vec![0u32; p as usize * m + 1];
        for (i, c) in g.iter().enumerate() {
            let k = i * p as usize;
            img[k] = field.add(&img[k], &field.pow(c, p));
            img[i] = field.sub(&img[i], c);
        }
        image.insert(img);
    }
    q.pow(j as u32 + 1) / image.len() as u64
}
