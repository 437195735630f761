//! Recursive-descent parser for element strings such as `-3/7`,
//! `a^2+1` (generator of `F_{p^k}`) or `(a+1)*t^2+2*t`.

use super::{Elem, Field, FieldError};

struct Parser<'a> {
    field: &'a Field,
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

pub(super) fn parse_element(field: &Field, input: &str) -> Result<Elem, FieldError> {
    let mut p = Parser {
        field,
        input,
        bytes: input.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

impl<'a> Parser<'a> {
    fn err(&self, reason: &str) -> FieldError {
        FieldError::Parse {
            input: self.input.to_string(),
            offset: self.pos,
            reason: reason.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Elem, FieldError> {
        let f = self.field;
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let t = self.term()?;
                f.neg(&t)
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = f.add(&acc, &t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = f.sub(&acc, &t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Elem, FieldError> {
        let f = self.field;
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let t = self.power()?;
                    acc = f.mul(&acc, &t);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let t = self.power()?;
                    acc = f.div(&acc, &t).ok_or_else(|| FieldError::Parse {
                        input: self.input.to_string(),
                        offset: at,
                        reason: "division by zero".into(),
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Elem, FieldError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: i64 = self.input[start..self.pos]
                .parse()
                .map_err(|_| self.err("expected an integer exponent"))?;
            let e = if neg { -e } else { e };
            return self.field.pow(&base, e).ok_or_else(|| self.err("negative power of zero"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Elem, FieldError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = &self.input[start..self.pos];
                Ok(self.integer(digits))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let name = &self.input[start..self.pos];
                self.identifier(name).ok_or_else(|| FieldError::Parse {
                    input: self.input.to_string(),
                    offset: start,
                    reason: format!("unknown symbol {name:?} for {}", self.field.descriptor()),
                })
            }
            _ => Err(self.err("expected a number, symbol or '('")),
        }
    }

    fn integer(&self, digits: &str) -> Elem {
        let f = self.field;
        if f.is_rationals() {
            let n: num_bigint::BigInt = digits.parse().expect("ascii digits");
            return Elem::Rat(num_rational::BigRational::from_integer(n));
        }
        let p = f.characteristic() as u64;
        let r = digits.bytes().fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
        f.from_i64(r as i64)
    }

    fn identifier(&self, name: &str) -> Option<Elem> {
        let f = self.field;
        if Some(name) == f.var() {
            return Some(f.t());
        }
        if name == "a" {
            let base = f.finite_part()?;
            if base.degree() > 1 {
                return Some(f.constant(base.generator()));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parses_rationals() {
        let q = Field::rationals();
        assert_eq!(q.format(&q.parse("-3/7").unwrap()), "-3/7");
        assert_eq!(q.format(&q.parse("6/4").unwrap()), "3/2");
        assert_eq!(q.format(&q.parse("2^-2").unwrap()), "1/4");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("t").is_err());
    }

    #[test]
    fn parses_function_field() {
        let f = Field::rat_func(3, 1);
        let e = f.parse("t^2+2*t").unwrap();
        assert_eq!(f.format(&e), "t^2+2*t");
        let e = f.parse("(t+1)/(t^2+2)").unwrap();
        assert_eq!(f.format(&e), "1/(t+2)");
        let f9 = Field::rat_func(3, 2);
        let e = f9.parse("(a+1)*t^2+t").unwrap();
        assert_eq!(f9.format(&e), "(a+1)*t^2+t");
    }

    #[test]
    fn error_offsets() {
        let q = Field::rationals();
        match q.parse("1+*2") {
            Err(FieldError::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn fields() -> Vec<Field> {
        vec![
            Field::rationals(),
            Field::gf(2, 1),
            Field::gf(2, 2),
            Field::gf(3, 2),
            Field::gf(5, 1),
            Field::rat_func(3, 1),
            Field::rat_func(2, 2),
            Field::laurent(5, 1),
        ]
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(seed in any::<u64>(), which in 0usize..8) {
            let f = &fields()[which];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = f.sample(&mut rng, 20.min(if f.is_rationals() { 20 } else { 3 }));
            let s = f.format(&x);
            prop_assert_eq!(f.parse(&s).unwrap(), x);
        }
    }
}
