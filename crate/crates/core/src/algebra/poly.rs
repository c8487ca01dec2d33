//! Dense univariate polynomials over F_p in the indeterminate `t`.
//!
//! Coefficients are stored lowest-degree first with no trailing zeros, so
//! the zero polynomial is the empty vector and `degree()` is `None` for it
//! (the usual deg 0 = -infinity convention, kept out of the arithmetic by
//! using an `Option`).
//!
//! Text syntax, used by the CLI and the report formats: terms `c*t^k`
//! joined by `+` or `-`, where `*` is optional, `t` abbreviates `t^1` and a
//! bare integer is a degree-0 term. Integers are reduced mod p. Examples:
//! `2t^3+t+1`, `t^2+1`, `0`.

use super::field::{FieldElement, PrimeField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<u64>, // canonical values < p, lowest degree first, no trailing zeros
    p: u64,
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128) * (b as u128) % (p as u128)) as u64
}

impl Poly {
    pub fn zero(field: PrimeField) -> Poly {
        Poly {
            coeffs: Vec::new(),
            p: field.order(),
        }
    }

    pub fn one(field: PrimeField) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: FieldElement) -> Poly {
        let mut poly = Poly {
            coeffs: vec![c.value()],
            p: c.field().order(),
        };
        poly.normalize();
        poly
    }

    /// c * t^k
    pub fn monomial(field: PrimeField, c: u64, k: usize) -> Poly {
        let c = field.el(c);
        if c.is_zero() {
            return Poly::zero(field);
        }
        let mut coeffs = vec![0u64; k + 1];
        coeffs[k] = c.value();
        Poly {
            coeffs,
            p: field.order(),
        }
    }

    /// The indeterminate t.
    pub fn t(field: PrimeField) -> Poly {
        Poly::monomial(field, 1, 1)
    }

    /// From raw coefficient values, lowest degree first, reduced mod p.
    pub fn from_coeffs(field: PrimeField, coeffs: &[u64]) -> Poly {
        let p = field.order();
        let mut poly = Poly {
            coeffs: coeffs.iter().map(|&c| c % p).collect(),
            p,
        };
        poly.normalize();
        poly
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("modulus validated at construction")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with deg 0 = -infinity collapsed to an i64 floor; only valid
    /// for callers that have excluded zero.
    pub fn degree_i64(&self) -> i64 {
        self.degree().map(|d| d as i64).unwrap_or(i64::MIN)
    }

    pub fn lead(&self) -> Option<FieldElement> {
        self.coeffs.last().map(|&c| self.field().el(c))
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        self.field().el(self.coeffs.get(k).copied().unwrap_or(0))
    }

    pub fn coeff_values(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn checked_add(&self, rhs: &Poly) -> Result<Poly> {
        self.field().require_same(&rhs.field())?;
        Ok(self + rhs)
    }

    pub fn checked_sub(&self, rhs: &Poly) -> Result<Poly> {
        self.field().require_same(&rhs.field())?;
        Ok(self - rhs)
    }

    pub fn checked_mul(&self, rhs: &Poly) -> Result<Poly> {
        self.field().require_same(&rhs.field())?;
        Ok(self * rhs)
    }

    pub fn scale(&self, c: FieldElement) -> Poly {
        assert_eq!(self.p, c.field().order(), "field mismatch");
        let mut out = Poly {
            coeffs: self
                .coeffs
                .iter()
                .map(|&a| mul_mod(a, c.value(), self.p))
                .collect(),
            p: self.p,
        };
        out.normalize();
        out
    }

    /// Euclidean division: self = q * rhs + r with deg r < deg rhs.
    /// No normalization is applied to the divisor; the quotient and
    /// remainder are exactly the long-division results.
    pub fn divmod(&self, rhs: &Poly) -> Result<(Poly, Poly)> {
        self.field().require_same(&rhs.field())?;
        let d_rhs = rhs.degree().ok_or(Error::DivisionByZeroPolynomial)?;
        let p = self.p;
        let lead_inv = rhs.lead().expect("nonzero divisor").inv()?.value();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len().saturating_sub(d_rhs)];
        while rem.len() > d_rhs {
            let k = rem.len() - 1 - d_rhs;
            let f = mul_mod(rem[rem.len() - 1], lead_inv, p);
            if f != 0 {
                quot[k] = f;
                for (i, &b) in rhs.coeffs.iter().enumerate() {
                    let sub = mul_mod(f, b, p);
                    rem[k + i] = (rem[k + i] + p - sub) % p;
                }
            }
            debug_assert_eq!(rem[rem.len() - 1], 0);
            rem.pop();
        }
        let mut q = Poly { coeffs: quot, p };
        let mut r = Poly { coeffs: rem, p };
        q.normalize();
        r.normalize();
        Ok((q, r))
    }

    /// Monic greatest common divisor by the Euclidean algorithm; gcd(0,0) = 0.
    pub fn gcd(&self, rhs: &Poly) -> Result<Poly> {
        self.field().require_same(&rhs.field())?;
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b)?;
            a = b;
            b = r;
        }
        if let Some(lead) = a.lead() {
            a = a.scale(lead.inv()?);
        }
        Ok(a)
    }

    /// Parse the polynomial text syntax over the given field.
    pub fn parse(input: &str, field: PrimeField) -> Result<Poly> {
        let mut parser = PolyParser {
            bytes: input.as_bytes(),
            pos: 0,
        };
        let poly = parser.poly(field)?;
        parser.skip_ws();
        if parser.pos != parser.bytes.len() {
            return Err(parser.err("unexpected trailing input"));
        }
        Ok(poly)
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.p, rhs.p, "field mismatch");
        let p = self.p;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![0u64; n];
        for (i, slot) in coeffs.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = rhs.coeffs.get(i).copied().unwrap_or(0);
            *slot = (a + b) % p;
        }
        let mut out = Poly { coeffs, p };
        out.normalize();
        out
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &-rhs
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let p = self.p;
        Poly {
            coeffs: self.coeffs.iter().map(|&c| (p - c) % p).collect(),
            p,
        }
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.p, rhs.p, "field mismatch");
        let p = self.p as u128;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field());
        }
        let mut acc = vec![0u128; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                let slot = &mut acc[i + j];
                *slot = (*slot + (a as u128) * (b as u128)) % p;
            }
        }
        let mut out = Poly {
            coeffs: acc.into_iter().map(|c| c as u64).collect(),
            p: self.p,
        };
        out.normalize();
        out
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[k];
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ => {
                    if c != 1 {
                        write!(f, "{c}")?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

struct PolyParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PolyParser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("digits are utf8");
        text.parse::<u64>().map_err(|_| Error::Parse {
            pos: start,
            msg: "integer too large".to_string(),
        })
    }

    /// One term: `int`, `t`, `t^k`, `int t^k`, or `int * t^k`.
    fn term(&mut self, field: PrimeField) -> Result<Poly> {
        self.skip_ws();
        let mut coeff: Option<u64> = None;
        if self.peek().is_some_and(|b| b.is_ascii_digit()) {
            coeff = Some(self.integer()?);
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                if self.peek() != Some(b't') {
                    return Err(self.err("expected t after *"));
                }
            }
        }
        let mut power = 0usize;
        if self.peek() == Some(b't') {
            self.pos += 1;
            power = 1;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                self.skip_ws();
                let k = self.integer()?;
                power = usize::try_from(k).map_err(|_| self.err("exponent too large"))?;
                if power > 1_000_000 {
                    return Err(self.err("exponent too large"));
                }
            }
        } else if coeff.is_none() {
            return Err(self.err("expected a term"));
        }
        Ok(Poly::monomial(field, coeff.unwrap_or(1), power))
    }

    fn poly(&mut self, field: PrimeField) -> Result<Poly> {
        self.skip_ws();
        let mut negate = false;
        if self.peek() == Some(b'-') {
            negate = true;
            self.pos += 1;
        }
        let mut acc = self.term(field)?;
        if negate {
            acc = -&acc;
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term(field)?;
                    acc = &acc + &t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term(field)?;
                    acc = &acc - &t;
                }
                _ => break,
            }
        }
        Ok(acc)
    }
}

/// Parse `num/den` with optional parentheses around either side; a bare
/// polynomial is taken over the denominator 1. The `/` must sit at the top
/// level, outside any parentheses.
pub fn parse_rational(input: &str, field: PrimeField) -> Result<(Poly, Poly)> {
    let bytes = input.as_bytes();
    let mut depth = 0i32;
    let mut slash: Option<usize> = None;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse {
                        pos: i,
                        msg: "unbalanced parenthesis".to_string(),
                    });
                }
            }
            b'/' if depth == 0 => {
                if slash.is_some() {
                    return Err(Error::Parse {
                        pos: i,
                        msg: "more than one top-level /".to_string(),
                    });
                }
                slash = Some(i);
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse {
            pos: bytes.len(),
            msg: "unbalanced parenthesis".to_string(),
        });
    }
    let parse_side = |s: &str, offset: usize| -> Result<Poly> {
        let mut inner = s.trim();
        loop {
            let t = inner.trim();
            if t.len() >= 2 && t.starts_with('(') && t.ends_with(')') {
                // only strip when the outer parens actually match each other
                let body = &t[1..t.len() - 1];
                let mut d = 0i32;
                let mut matched = true;
                for b in body.bytes() {
                    match b {
                        b'(' => d += 1,
                        b')' => {
                            d -= 1;
                            if d < 0 {
                                matched = false;
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                if matched && d == 0 {
                    inner = body;
                    continue;
                }
            }
            break;
        }
        Poly::parse(inner, field).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse {
                pos: pos + offset,
                msg,
            },
            other => other,
        })
    };
    match slash {
        None => Ok((parse_side(input, 0)?, Poly::one(field))),
        Some(i) => {
            let num = parse_side(&input[..i], 0)?;
            let den = parse_side(&input[i + 1..], i + 1)?;
            if den.is_zero() {
                return Err(Error::DivisionByZeroPolynomial);
            }
            Ok((num, den))
        }
    }
}
