//! Serde schemas for the core types. Exact numbers that may not fit a JSON
//! number (coefficients, rationals) are encoded as strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use wildmckay_core::covers::{ASCover, CoverSpec, EtaleAlgebraFamily, FieldKind, KummerCover, Resolvent};
use wildmckay_core::field::FiniteField;
use wildmckay_core::groups::{LinearAction, ModularCyclicAction, PermAction, TameCyclicAction};
use wildmckay_core::motivic::{Dim, Exponent, MotPoly, MotSeries, MotValue};
use wildmckay_core::series::TruncSeries;
use wildmckay_core::tuning::TuningResult;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid value: {0}")]
    Invalid(String),
}

fn invalid(e: impl std::fmt::Display) -> SchemaError {
    SchemaError::Invalid(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentJson {
    pub num: i64,
    pub den: i64,
}

impl From<Exponent> for ExponentJson {
    fn from(e: Exponent) -> Self {
        ExponentJson { num: *e.numer(), den: *e.denom() }
    }
}

impl TryFrom<&ExponentJson> for Exponent {
    type Error = SchemaError;

    fn try_from(e: &ExponentJson) -> Result<Self, SchemaError> {
        if e.den <= 0 {
            return Err(invalid(format!("exponent denominator {} must be positive", e.den)));
        }
        Ok(Rational64::new(e.num, e.den))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub num: i64,
    pub den: i64,
    pub coeff: String,
}

/// `{"r", "terms", "denoms"}`; terms by descending exponent, an empty
/// `denoms` meaning a polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotValueJson {
    pub r: u32,
    pub terms: Vec<TermJson>,
    pub denoms: Vec<ExponentJson>,
}

fn poly_terms(p: &MotPoly) -> Vec<TermJson> {
    p.to_descending()
        .into_iter()
        .map(|(e, c)| TermJson { num: *e.numer(), den: *e.denom(), coeff: c.to_string() })
        .collect()
}

impl From<&MotValue> for MotValueJson {
    fn from(v: &MotValue) -> Self {
        match v {
            MotValue::Poly(p) => MotValueJson { r: p.root_index(), terms: poly_terms(p), denoms: Vec::new() },
            MotValue::Series(s) => MotValueJson {
                r: s.root_index(),
                terms: poly_terms(s.numerator()),
                denoms: s.denominators().iter().map(|&d| d.into()).collect(),
            },
        }
    }
}

impl From<&MotPoly> for MotValueJson {
    fn from(p: &MotPoly) -> Self {
        MotValueJson::from(&MotValue::Poly(p.clone()))
    }
}

impl TryFrom<&MotValueJson> for MotValue {
    type Error = SchemaError;

    fn try_from(j: &MotValueJson) -> Result<Self, SchemaError> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            let e = Exponent::try_from(&ExponentJson { num: t.num, den: t.den })?;
            let c: BigInt = t.coeff.parse().map_err(|_| invalid(format!("coefficient {:?}", t.coeff)))?;
            terms.push((e, c));
        }
        let num = MotPoly::from_terms(j.r, terms).map_err(invalid)?;
        if j.denoms.is_empty() {
            return Ok(MotValue::Poly(num));
        }
        let denoms = j.denoms.iter().map(Exponent::try_from).collect::<Result<Vec<_>, _>>()?;
        Ok(MotValue::from(MotSeries::new(num, denoms).map_err(invalid)?))
    }
}

pub fn fmt_rational(e: Exponent) -> String {
    if *e.denom() == 1 {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Exponent, SchemaError> {
    let bad = || invalid(format!("rational {s:?}"));
    match s.split_once('/') {
        None => Ok(Exponent::from_integer(s.trim().parse().map_err(|_| bad())?)),
        Some((n, d)) => {
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Exponent::new(n.trim().parse().map_err(|_| bad())?, d))
        }
    }
}

pub fn fmt_dim(d: Dim) -> String {
    match d {
        Dim::Finite(e) => fmt_rational(e),
        Dim::NegInfinity => "-inf".into(),
    }
}

pub fn parse_dim(s: &str) -> Result<Dim, SchemaError> {
    if s == "-inf" {
        Ok(Dim::NegInfinity)
    } else {
        parse_rational(s).map(Dim::Finite)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ActionJson {
    Tame { l: u64, exp: Vec<u64> },
    Modp { p: u64, blocks: Vec<usize> },
    Perm { n: usize, m: usize },
}

impl TryFrom<&ActionJson> for LinearAction {
    type Error = SchemaError;

    fn try_from(a: &ActionJson) -> Result<Self, SchemaError> {
        Ok(match a {
            ActionJson::Tame { l, exp } => LinearAction::Tame(TameCyclicAction::new(*l, exp.clone()).map_err(invalid)?),
            ActionJson::Modp { p, blocks } => {
                LinearAction::Modular(ModularCyclicAction::new(*p, blocks.clone()).map_err(invalid)?)
            }
            ActionJson::Perm { n, m } => {
                if *n == 0 || *m == 0 {
                    return Err(invalid("perm action needs n, m >= 1"));
                }
                LinearAction::Perm(PermAction { n: *n, m: *m })
            }
        })
    }
}

impl From<&LinearAction> for ActionJson {
    fn from(a: &LinearAction) -> Self {
        match a {
            LinearAction::Tame(t) => ActionJson::Tame { l: t.order(), exp: t.exponents().to_vec() },
            LinearAction::Modular(m) => ActionJson::Modp { p: m.p(), blocks: m.blocks().to_vec() },
            LinearAction::Perm(p) => ActionJson::Perm { n: p.n, m: p.m },
        }
    }
}

/// Field elements are integers `0..q` in the base-`p` digit encoding of
/// the fixed modulus table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CoverJson {
    /// `x^l = unit * t` over `F_q`; without `q`, the smallest prime with
    /// `l | q - 1` and unit 1.
    Kummer {
        l: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        unit: Option<u32>,
    },
    /// `y^p - y = Σ f[i] t^{-i} + f0` over `F_q` (default `q = p`); the
    /// keys of `f` are pole orders written as strings.
    As {
        p: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        q: Option<u64>,
        f: BTreeMap<String, u32>,
        #[serde(default)]
        f0: u32,
    },
}

impl TryFrom<&CoverJson> for CoverSpec {
    type Error = SchemaError;

    fn try_from(c: &CoverJson) -> Result<Self, SchemaError> {
        Ok(match c {
            CoverJson::Kummer { l, q: None, unit: None } => CoverSpec::Kummer(KummerCover::standard(*l).map_err(invalid)?),
            CoverJson::Kummer { l, q, unit } => {
                let q = q.ok_or_else(|| invalid("kummer cover with a unit needs q"))?;
                let field = FiniteField::of_order(q).map_err(invalid)?;
                CoverSpec::Kummer(KummerCover::new(&field, *l, unit.unwrap_or(1)).map_err(invalid)?)
            }
            CoverJson::As { p, q, f, f0 } => {
                let q = q.unwrap_or(*p);
                let field = FiniteField::of_order(q).map_err(invalid)?;
                if field.p() != *p {
                    return Err(invalid(format!("q = {q} is not a power of p = {p}")));
                }
                let mut terms = BTreeMap::new();
                for (k, c) in f {
                    let k: u64 = k.parse().map_err(|_| invalid(format!("pole order {k:?}")))?;
                    terms.insert(k, *c);
                }
                CoverSpec::ArtinSchreier(ASCover::new(&field, terms, *f0).map_err(invalid)?)
            }
        })
    }
}

impl From<&CoverSpec> for CoverJson {
    fn from(c: &CoverSpec) -> Self {
        match c {
            CoverSpec::Kummer(k) => CoverJson::Kummer { l: k.l(), q: Some(k.field().q()), unit: Some(k.unit()) },
            CoverSpec::ArtinSchreier(a) => CoverJson::As {
                p: a.p(),
                q: Some(a.field().q()),
                f: a.terms().iter().map(|(k, c)| (k.to_string(), *c)).collect(),
                f0: a.f0(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldJson {
    pub p: u64,
    pub q: u64,
}

/// A truncated series `Σ coeffs[i] t^{val + i} + O(t^prec)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesJson {
    pub field: FieldJson,
    pub val: i64,
    pub coeffs: Vec<u32>,
    pub prec: i64,
}

impl From<&TruncSeries<FiniteField>> for SeriesJson {
    fn from(s: &TruncSeries<FiniteField>) -> Self {
        let f = s.field();
        let val = s.valuation().lower_bound();
        let mut coeffs = s.dense(val);
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        SeriesJson { field: FieldJson { p: f.p(), q: f.q() }, val, coeffs, prec: s.precision() }
    }
}

impl TryFrom<&SeriesJson> for TruncSeries<FiniteField> {
    type Error = SchemaError;

    fn try_from(j: &SeriesJson) -> Result<Self, SchemaError> {
        let field = FiniteField::of_order(j.field.q).map_err(invalid)?;
        if field.p() != j.field.p {
            return Err(invalid(format!("q = {} is not a power of p = {}", j.field.q, j.field.p)));
        }
        let coeffs = j.coeffs.iter().map(|&c| field.elem(u64::from(c)).map_err(invalid)).collect::<Result<_, _>>()?;
        Ok(TruncSeries::from_coeffs(&field, j.val, coeffs, j.prec))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuningJson {
    pub v: String,
    pub divisors: Vec<i64>,
    pub prec: i64,
}

impl From<&TuningResult> for TuningJson {
    fn from(r: &TuningResult) -> Self {
        TuningJson { v: fmt_rational(r.v), divisors: r.xi_valuations.clone(), prec: r.precision_used }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BhargavaJson {
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumJson {
    pub label: String,
    pub class: MotValueJson,
    pub v: String,
    pub dim: String,
    pub contribution: MotValueJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportJson {
    pub value: MotValueJson,
    /// `null` when the wild tail could not be closed.
    pub converges: Option<bool>,
    pub dim: String,
    pub strata: Vec<StratumJson>,
    pub realizations: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpsJson {
    pub start: u64,
    pub step: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyJson {
    pub degree: u32,
    pub factors: Vec<String>,
    pub aut: u64,
    pub count: String,
    pub conductor: String,
    pub jumps: Option<JumpsJson>,
    pub mass: String,
}

fn factor_label(f: &wildmckay_core::covers::FieldFamily) -> String {
    match f.kind {
        FieldKind::Unramified => format!("unramified({})", f.degree),
        FieldKind::Tame { unit } => format!("tame({},u={})", f.degree, unit),
        FieldKind::ArtinSchreier => format!("as({})", f.degree),
        FieldKind::S3Tower { resolvent: Resolvent::Unramified } => "s3(unramified resolvent)".into(),
        FieldKind::S3Tower { resolvent: Resolvent::Ramified { unit } } => format!("s3(ramified resolvent,u={unit})"),
    }
}

impl FamilyJson {
    pub fn new(f: &EtaleAlgebraFamily, q: u64) -> Self {
        let mass = f.mass(q);
        FamilyJson {
            degree: f.degree,
            factors: f.factors.iter().map(factor_label).collect(),
            aut: f.aut_order,
            count: f.count_expr(),
            conductor: f.conductor_expr(),
            jumps: f.jumps().map(|j| JumpsJson { start: j.start, step: j.step }),
            mass: mass.to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn motvalue_encoding() {
        let v = MotValue::Poly(&MotPoly::l_pow(Exponent::from_integer(2)) + &MotPoly::l_pow(Exponent::new(1, 2)));
        let j = MotValueJson::from(&v);
        let text = serde_json::to_string(&j).unwrap();
        assert_eq!(
            text,
            r#"{"r":2,"terms":[{"num":2,"den":1,"coeff":"1"},{"num":1,"den":2,"coeff":"1"}],"denoms":[]}"#
        );
        let back: MotValueJson = serde_json::from_str(&text).unwrap();
        assert_eq!(MotValue::try_from(&back).unwrap(), v);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<ActionJson>(r#"{"kind":"perm","n":2,"m":2,"x":1}"#).is_err());
        assert!(serde_json::from_str::<ActionJson>(r#"{"kind":"perm","n":2,"m":2}"#).is_ok());
        assert!(serde_json::from_str::<CoverJson>(r#"{"kind":"as","p":2,"f":{"3":1},"g":0}"#).is_err());
    }

    #[test]
    fn series_round_trip() {
        let f = FiniteField::of_order(9).unwrap();
        let s = TruncSeries::from_coeffs(&f, 2, vec![3, 0, 8], 10);
        let j = SeriesJson::from(&s);
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"field":{"p":3,"q":9},"val":2,"coeffs":[3,0,8],"prec":10}"#);
        assert_eq!(TruncSeries::try_from(&j).unwrap(), s);
        let bad = SeriesJson { coeffs: vec![9], ..j };
        assert!(TruncSeries::try_from(&bad).is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(fmt_rational(Exponent::new(-2, 6)), "-1/3");
        assert_eq!(parse_rational("-1/3").unwrap(), Exponent::new(-1, 3));
        assert_eq!(parse_rational("7").unwrap(), Exponent::from_integer(7));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(parse_dim("-inf").unwrap(), Dim::NegInfinity);
    }
}
