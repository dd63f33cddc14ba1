//! Expressions like `L^2 + L`, `(L^3 - L^(1/2)) / (1 - L^-1)` evaluated to
//! motivic values.
//!
//! Division is limited to what the value ring holds: by `±L^e`, or by a
//! binomial `±L^a (1 - L^{-d})` with `d > 0`.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use wildmckay_core::motivic::{Exponent, MotPoly, MotSeries, MotValue};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("unexpected {found} at offset {pos}")]
    Unexpected { pos: usize, found: String },
    #[error("cannot divide by {0}")]
    Division(String),
    #[error("rational exponents apply only to L")]
    RootOfNonMonomial,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn l_pow(e: Exponent) -> MotValue {
    MotValue::Poly(MotPoly::l_pow(e))
}

pub fn parse(src: &str) -> Result<MotValue, ExprError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.unexpected());
    }
    Ok(v.simplify())
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self) -> ExprError {
        let found = match self.src.get(self.pos) {
            Some(&c) => format!("{:?}", c as char),
            None => "end of input".into(),
        };
        ExprError::Unexpected { pos: self.pos, found }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> Result<MotValue, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MotValue, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                let d = self.unary()?;
                acc = &acc * &reciprocal(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<MotValue, ExprError> {
        if self.eat(b'-') {
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<MotValue, ExprError> {
        self.skip_ws();
        let is_l = self.peek() == Some(b'L');
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        if is_l {
            return Ok(l_pow(e));
        }
        if !e.is_integer() {
            return Err(ExprError::RootOfNonMonomial);
        }
        let step = if e.numer().is_negative() { reciprocal(&base)? } else { base };
        let mut acc = MotValue::Poly(MotPoly::one());
        for _ in 0..e.numer().unsigned_abs() {
            acc = &acc * &step;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<MotValue, ExprError> {
        match self.peek() {
            Some(b'L') => {
                self.pos += 1;
                Ok(l_pow(Exponent::one()))
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                Ok(MotValue::Poly(MotPoly::monomial(n, Exponent::from_integer(0))))
            }
            _ => Err(self.unexpected()),
        }
    }

    fn digits(&mut self) -> Result<BigInt, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected());
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }

    fn small(&mut self) -> Result<i64, ExprError> {
        let start = self.pos;
        let n = self.digits()?;
        i64::try_from(n).map_err(|_| ExprError::Unexpected { pos: start, found: "oversized exponent".into() })
    }

    fn exponent(&mut self) -> Result<Exponent, ExprError> {
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        let num = self.small()?;
        let den = if paren && self.eat(b'/') { self.small()? } else { 1 };
        if den == 0 {
            return Err(self.unexpected());
        }
        if paren {
            self.expect(b')')?;
        }
        Ok(Exponent::new(if neg { -num } else { num }, den))
    }
}

fn reciprocal(d: &MotValue) -> Result<MotValue, ExprError> {
    let fail = || ExprError::Division(d.to_string());
    let Some(p) = d.simplify().as_poly().cloned() else { return Err(fail()) };
    let terms = p.to_descending();
    match terms.as_slice() {
        [(e, c)] if c.abs().is_one() => Ok(MotValue::Poly(MotPoly::monomial(c.clone(), -e))),
        // c L^a - c L^b = c L^a (1 - L^{-(a-b)})
        [(a, c1), (b, c2)] if c1.abs().is_one() && *c2 == -c1 => {
            let series = MotSeries::new(MotPoly::monomial(c1.clone(), -a), vec![a - b]).map_err(|_| fail())?;
            Ok(MotValue::from(series))
        }
        _ => Err(fail()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use wildmckay_core::motivic::realize_point_count;

    fn at(src: &str, q: u64) -> String {
        realize_point_count(&parse(src).unwrap(), q).unwrap().to_string()
    }

    #[test]
    fn evaluates() {
        assert_eq!(at("L^2+L", 4), "20");
        assert_eq!(at("2*L^(1/2) - 1", 9), "5");
        assert_eq!(at("(L - 1)^3", 3), "8");
        assert_eq!(at("1/(1 - L^-1)", 3), "3/2");
        assert_eq!(at("L^3 / (L - 1)", 2), "8");
        assert_eq!(at("-L^-2", 2), "-1/4");
    }

    #[test]
    fn series_simplify_back() {
        assert_eq!(parse("(L - 1) / (1 - L^-1)").unwrap(), parse("L").unwrap());
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("L +"), Err(ExprError::Unexpected { .. })));
        assert!(matches!(parse("1 / (L + 1)"), Err(ExprError::Division(_))));
        assert_eq!(parse("(L+1)^(1/2)"), Err(ExprError::RootOfNonMonomial));
        assert!(parse("L^(1/0)").is_err());
    }
}
