//! Text syntax for exact polynomials: integer (or rational, see below)
//! coefficients, variables `z` and `w`, operators `+ - * ^`, parentheses,
//! and implicit multiplication (`2z`, `2(w - z)`). Floats are rejected.
//!
//! Rational coefficients like `1/2` are accepted and cleared on parse: the
//! returned scale is the factor by which the input was multiplied to make
//! it integral (1 for integer input).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::bipoly::BiPoly;
use crate::error::{CoreError, Result};

/// Bivariate polynomial with rational coefficients; parse-time only.
#[derive(Clone)]
struct RatPoly(Vec<Vec<BigRational>>);

impl RatPoly {
    fn zero() -> Self {
        RatPoly(Vec::new())
    }

    fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            RatPoly(vec![vec![c]])
        }
    }

    fn var(i: usize, j: usize) -> Self {
        let mut rows = vec![vec![BigRational::zero(); j + 1]; i + 1];
        rows[i][j] = BigRational::one();
        RatPoly(rows)
    }

    fn add(&self, rhs: &Self) -> Self {
        let nr = self.0.len().max(rhs.0.len());
        let nc = self
            .0
            .iter()
            .chain(rhs.0.iter())
            .map(Vec::len)
            .max()
            .unwrap_or(0);
        let mut rows = vec![vec![BigRational::zero(); nc]; nr];
        for (i, row) in self.0.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                rows[i][j] += c;
            }
        }
        for (i, row) in rhs.0.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                rows[i][j] += c;
            }
        }
        RatPoly(rows)
    }

    fn neg(&self) -> Self {
        RatPoly(
            self.0
                .iter()
                .map(|r| r.iter().map(|c| -c).collect())
                .collect(),
        )
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.0.is_empty() || rhs.0.is_empty() {
            return Self::zero();
        }
        let nr = self.0.len() + rhs.0.len() - 1;
        let nc = self.0.iter().map(Vec::len).max().unwrap_or(1)
            + rhs.0.iter().map(Vec::len).max().unwrap_or(1)
            - 1;
        let mut rows = vec![vec![BigRational::zero(); nc]; nr];
        for (i, ra) in self.0.iter().enumerate() {
            for (j, ca) in ra.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for (k, rb) in rhs.0.iter().enumerate() {
                    for (l, cb) in rb.iter().enumerate() {
                        if !cb.is_zero() {
                            rows[i + k][j + l] += ca * cb;
                        }
                    }
                }
            }
        }
        RatPoly(rows)
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(BigRational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> CoreError {
        CoreError::Parse(format!("{} at byte {}", msg.into(), self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<RatPoly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.bump();
                self.term()?.neg()
            }
            Some(b'+') => {
                self.bump();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.bump();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                // implicit multiplication: digit, variable or '('
                Some(c) if c == b'(' || c == b'z' || c == b'w' || c.is_ascii_digit() => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.bump();
            let e = self.uint()?;
            if e > 10_000 {
                return Err(self.err("exponent too large"));
            }
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RatPoly> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let inner = self.expr()?;
                if self.bump() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(inner)
            }
            Some(b'z') => {
                self.bump();
                Ok(RatPoly::var(1, 0))
            }
            Some(b'w') => {
                self.bump();
                Ok(RatPoly::var(0, 1))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.bigint()?;
                // rational literal `a/b`; division only between literals
                if self.peek() == Some(b'/') {
                    self.bump();
                    let den = self.bigint()?;
                    if den.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    Ok(RatPoly::constant(BigRational::new(num, den)))
                } else {
                    Ok(RatPoly::constant(BigRational::from_integer(num)))
                }
            }
            Some(c) => Err(self.err(format!("unexpected character `{}`", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn bigint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer"));
        }
        if self.src.get(self.pos) == Some(&b'.') {
            return Err(self.err("floating-point literals are not accepted"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<BigInt>()
            .map_err(|e| CoreError::Parse(e.to_string()))
    }

    fn uint(&mut self) -> Result<u32> {
        let n = self.bigint()?;
        u32::try_from(n).map_err(|_| CoreError::Parse("exponent out of range".into()))
    }
}

/// Parses polynomial text into an exact integer polynomial, clearing any
/// rational coefficients. Returns `(poly, scale)` where `poly` equals the
/// parsed expression times `scale`.
pub fn parse_bipoly(text: &str) -> Result<(BiPoly, BigInt)> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let rat = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.err("trailing input"));
    }
    // clear denominators: scale = lcm of all denominators
    let mut scale = BigInt::one();
    for row in &rat.0 {
        for c in row {
            if !c.is_zero() {
                scale = num_integer::lcm(scale, c.denom().abs());
            }
        }
    }
    let rows = rat
        .0
        .iter()
        .map(|r| {
            r.iter()
                .map(|c| {
                    let scaled = c * BigRational::from_integer(scale.clone());
                    debug_assert!(scaled.is_integer());
                    scaled.to_integer()
                })
                .collect()
        })
        .collect();
    Ok((BiPoly::from_rows(rows), scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_examples() {
        let (p, s) = parse_bipoly("w^2 - z^2 - 1").unwrap();
        assert_eq!(p.to_string(), "w^2 - z^2 - 1");
        assert!(s.is_one());
        assert_eq!(p.degrees(), Some((2, 2)));
    }

    #[test]
    fn implicit_multiplication() {
        let (p, _) = parse_bipoly("2z + 3(w - z)").unwrap();
        assert_eq!(p.to_string(), "3*w - z");
    }

    #[test]
    fn rational_coefficients_cleared() {
        let (p, s) = parse_bipoly("1/2 w^2 - z").unwrap();
        assert_eq!(s, BigInt::from(2));
        assert_eq!(p.to_string(), "w^2 - 2*z");
    }

    #[test]
    fn rejects_floats_and_junk() {
        assert!(parse_bipoly("0.5*w").is_err());
        assert!(parse_bipoly("w +").is_err());
        assert!(parse_bipoly("x^2").is_err());
        assert!(parse_bipoly("w^(2)").is_err());
        assert!(parse_bipoly("1/0").is_err());
    }

    #[test]
    fn powers_and_parens() {
        let (p, _) = parse_bipoly("(w - z^2)^2").unwrap();
        assert_eq!(p.degrees(), Some((4, 2)));
    }
}
