//! Exact coefficient fields: the rationals and small finite fields.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Field operations on an explicit element type.
///
/// A field value is a small descriptor (the finite fields carry shared
/// tables); elements never carry their field.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    /// Number of elements, `None` when infinite.
    fn order(&self) -> Option<u64>;
    /// The unique `x` with `x^p = a`, where `p` is the characteristic.
    fn pth_root(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    fn fmt_elem(&self, a: &Self::Elem, f: &mut fmt::Formatter<'_>) -> fmt::Result;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Truncated product of two coefficient slices: the first `len`
    /// coefficients of `a * b`.
    fn mul_slices(&self, a: &[Self::Elem], b: &[Self::Elem], len: usize) -> Vec<Self::Elem> {
        let mut out = vec![self.zero(); len];
        for (i, x) in a.iter().enumerate().take(len) {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                let p = self.mul(x, y);
                out[i + j] = self.add(&out[i + j], &p);
            }
        }
        out
    }

    /// Displayable wrapper for an element.
    fn show<'a>(&'a self, a: &'a Self::Elem) -> ShowElem<'a, Self> {
        ShowElem { field: self, elem: a }
    }
}

pub struct ShowElem<'a, F: Field> {
    field: &'a F,
    elem: &'a F::Elem,
}

impl<F: Field> fmt::Display for ShowElem<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.field.fmt_elem(self.elem, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("operation needs positive characteristic")]
    WrongCharacteristic,
    #[error("no finite field of order {p}^{e} in the modulus table")]
    UnsupportedField { p: u64, e: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("element {0} is out of range for this field")]
    BadElement(u64),
    #[error("the field has no primitive {0}-th root of unity")]
    NoRootOfUnity(u64),
}

/// The field of rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn pth_root(&self, _a: &BigRational) -> Result<BigRational, FieldError> {
        Err(FieldError::WrongCharacteristic)
    }
    fn fmt_elem(&self, a: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if a.is_integer() {
            write!(f, "{}", a.numer())
        } else if a.is_negative() {
            write!(f, "-{}/{}", -a.numer(), a.denom())
        } else {
            write!(f, "{}/{}", a.numer(), a.denom())
        }
    }
}

/// Irreducible moduli for the non-prime fields of order at most 16, lowest
/// coefficient first, leading 1 omitted.
const MODULUS_TABLE: &[(u64, u32, &[u64])] = &[
    (2, 2, &[1, 1]),    // w^2 + w + 1
    (2, 3, &[1, 1, 0]), // w^3 + w + 1
    (3, 2, &[1, 0]),    // w^2 + 1
    (2, 4, &[1, 1, 0, 0]), // w^4 + w + 1
];

/// Primes up to this bound are accepted for prime fields.
pub const MAX_PRIME: u64 = 1 << 16;

#[derive(Debug)]
struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

/// A finite field `F_q`, `q = p^e`.
///
/// Elements are integers in `0..q`; for `e > 1` the base-`p` digits of an
/// element are its coordinates in the basis `1, w, ..., w^{e-1}` where `w` is
/// a root of the tabulated modulus.
#[derive(Clone)]
pub struct FiniteField {
    p: u64,
    e: u32,
    q: u64,
    modulus: Vec<u64>,
    tables: Option<Arc<Tables>>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.e)
        }
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    /// `F_{p^e}`; for `e > 1` only the tabulated moduli are available.
    pub fn new(p: u64, e: u32) -> Result<Self, FieldError> {
        if !is_prime(p) || p >= MAX_PRIME {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::UnsupportedField { p, e });
        }
        if e == 1 {
            return Ok(FiniteField { p, e, q: p, modulus: Vec::new(), tables: None });
        }
        let modulus = MODULUS_TABLE
            .iter()
            .find(|(mp, me, _)| *mp == p && *me == e)
            .map(|(_, _, m)| m.to_vec())
            .ok_or(FieldError::UnsupportedField { p, e })?;
        let q = p.pow(e);
        let tables = build_tables(p, e, q, &modulus);
        Ok(FiniteField { p, e, q, modulus, tables: Some(Arc::new(tables)) })
    }

    /// The field with `q` elements, if `q` is a supported prime power.
    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrime(q))?;
        Self::new(p, e)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    /// Modulus coefficients below the leading term, lowest first (empty for prime fields).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn elem(&self, n: u64) -> Result<u32, FieldError> {
        if n < self.q {
            Ok(n as u32)
        } else {
            Err(FieldError::BadElement(n))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q as u32
    }

    /// Absolute trace to `F_p`.
    pub fn trace(&self, a: &u32) -> u32 {
        let mut acc = 0u32;
        let mut x = *a;
        for _ in 0..self.e {
            acc = self.add(&acc, &x);
            x = self.pow(&x, self.p);
        }
        acc
    }

    /// Smallest element generating the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        let n = self.q - 1;
        let factors = prime_factors(n);
        for g in 1..self.q as u32 {
            if factors.iter().all(|&r| !self.is_one(&self.pow(&g, n / r))) {
                return g;
            }
        }
        1
    }

    /// A fixed primitive `l`-th root of unity, `g^{(q-1)/l}` for the
    /// canonical primitive element `g`.
    pub fn root_of_unity(&self, l: u64) -> Result<u32, FieldError> {
        if l == 0 || (self.q - 1) % l != 0 {
            return Err(FieldError::NoRootOfUnity(l));
        }
        Ok(self.pow(&self.primitive_element(), (self.q - 1) / l))
    }
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `(p, e)` with `q = p^e`, or `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let f = prime_factors(q);
    if f.len() != 1 {
        return None;
    }
    let p = f[0];
    let mut e = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        e += 1;
    }
    Some((p, e))
}

fn digits(mut x: u64, p: u64, e: u32) -> Vec<u64> {
    let mut d = vec![0; e as usize];
    for slot in d.iter_mut() {
        *slot = x % p;
        x /= p;
    }
    d
}

fn undigits(d: &[u64], p: u64) -> u64 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn build_tables(p: u64, e: u32, q: u64, modulus: &[u64]) -> Tables {
    let n = q as usize;
    let mut add = vec![0u32; n * n];
    let mut mul = vec![0u32; n * n];
    for a in 0..q {
        let da = digits(a, p, e);
        for b in 0..q {
            let db = digits(b, p, e);
            let s: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[(a * q + b) as usize] = undigits(&s, p) as u32;
            let mut prod = vec![0u64; 2 * e as usize];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            // w^e = -(modulus)
            for k in (e as usize..prod.len()).rev() {
                let c = prod[k];
                if c == 0 {
                    continue;
                }
                prod[k] = 0;
                for (i, m) in modulus.iter().enumerate() {
                    let idx = k - e as usize + i;
                    prod[idx] = (prod[idx] + (p - c) * m) % p;
                }
            }
            mul[(a * q + b) as usize] = undigits(&prod[..e as usize], p) as u32;
        }
    }
    let mut inv = vec![0u32; n];
    for a in 1..q {
        for b in 1..q {
            if mul[(a * q + b) as usize] == 1 {
                inv[a as usize] = b as u32;
                break;
            }
        }
    }
    Tables { add, mul, inv }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p is prime, a != 0
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (s0, s1) = (s1, s0 - qt * s1);
    }
    s0.rem_euclid(p as i64) as u64
}

impl Field for FiniteField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        match &self.tables {
            None => ((*a as u64 + *b as u64) % self.p) as u32,
            Some(t) => t.add[(*a as u64 * self.q + *b as u64) as usize],
        }
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add(a, &self.neg(b))
    }
    fn neg(&self, a: &u32) -> u32 {
        match &self.tables {
            None => ((self.p - *a as u64) % self.p) as u32,
            Some(_) => {
                let d: Vec<u64> = digits(*a as u64, self.p, self.e)
                    .into_iter()
                    .map(|c| (self.p - c) % self.p)
                    .collect();
                undigits(&d, self.p) as u32
            }
        }
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        match &self.tables {
            None => ((*a as u64 * *b as u64) % self.p) as u32,
            Some(t) => t.mul[(*a as u64 * self.q + *b as u64) as usize],
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        match &self.tables {
            None => Some(mod_inv(*a as u64, self.p) as u32),
            Some(t) => Some(t.inv[*a as usize]),
        }
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> Option<u64> {
        Some(self.q)
    }
    fn pth_root(&self, a: &u32) -> Result<u32, FieldError> {
        // Frobenius has order e, so its inverse is x -> x^{p^{e-1}}.
        Ok(self.pow(a, self.q / self.p))
    }
    fn fmt_elem(&self, a: &u32, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", a)
    }

    fn mul_slices(&self, a: &[u32], b: &[u32], len: usize) -> Vec<u32> {
        if self.tables.is_some() {
            let mut out = vec![0u32; len];
            for (i, x) in a.iter().enumerate().take(len) {
                if *x == 0 {
                    continue;
                }
                for (j, y) in b.iter().enumerate().take(len - i) {
                    out[i + j] = self.add(&out[i + j], &self.mul(x, y));
                }
            }
            return out;
        }
        // Lazy reduction: p < 2^16 so each product is < 2^32 and a u64
        // accumulator absorbs 2^32 of them.
        let p = self.p;
        let mut acc = vec![0u64; len];
        for (i, x) in a.iter().enumerate().take(len) {
            if *x == 0 {
                continue;
            }
            let x = *x as u64;
            for (slot, y) in acc[i..].iter_mut().zip(b.iter()) {
                *slot += x * *y as u64;
            }
            if i % 1024 == 1023 {
                for slot in acc.iter_mut() {
                    *slot %= p;
                }
            }
        }
        acc.into_iter().map(|v| (v % p) as u32).collect()
    }
}
