//! Arithmetic in the prime field F_p.
//!
//! A [`PrimeField`] is just a validated prime modulus; a [`FieldElement`] is
//! a canonical representative in `0..p` carrying its modulus so mixed-field
//! bugs are caught at the operation site. Elements implement the usual
//! operator traits and panic on a modulus mismatch; the checked entry points
//! on [`Poly`](crate::algebra::Poly) and the series types report
//! [`Error::FieldMismatch`](crate::Error::FieldMismatch) instead.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    /// Canonical element from an unsigned value, reduced mod p.
    pub fn el(&self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.p,
            p: self.p,
        }
    }

    /// Canonical element from a signed value; `-1` becomes `p - 1`.
    pub fn el_i(&self, v: i64) -> FieldElement {
        let p = self.p as i64;
        self.el(v.rem_euclid(p) as u64)
    }

    pub fn zero(&self) -> FieldElement {
        self.el(0)
    }

    pub fn one(&self) -> FieldElement {
        self.el(1)
    }

    /// All field elements in canonical order 0, 1, ..., p-1.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        let f = *self;
        (0..self.p).map(move |v| f.el(v))
    }

    pub fn require_same(&self, other: &PrimeField) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.p, other.p))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    p: u64,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> PrimeField {
        PrimeField { p: self.p }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let p = self.p as u128;
        let mut base = self.value as u128;
        let mut acc = 1u128 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        FieldElement {
            value: acc as u64,
            p: self.p,
        }
    }

    /// Multiplicative inverse; p is prime so x^(p-2) serves for x != 0.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(self.p - 2))
    }

    pub fn div(&self, rhs: FieldElement) -> Result<FieldElement> {
        Ok(*self * rhs.inv()?)
    }
}

fn check_same(a: &FieldElement, b: &FieldElement) {
    assert_eq!(a.p, b.p, "field mismatch: F_{} vs F_{}", a.p, b.p);
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        check_same(&self, &rhs);
        FieldElement {
            value: (self.value + rhs.value) % self.p,
            p: self.p,
        }
    }
}

impl std::ops::Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        check_same(&self, &rhs);
        FieldElement {
            value: (self.p + self.value - rhs.value) % self.p,
            p: self.p,
        }
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        check_same(&self, &rhs);
        let v = (self.value as u128) * (rhs.value as u128) % (self.p as u128);
        FieldElement {
            value: v as u64,
            p: self.p,
        }
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: (self.p - self.value) % self.p,
            p: self.p,
        }
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_gate() {
        for p in [2u64, 3, 5, 7, 11, 101] {
            assert!(PrimeField::new(p).is_ok());
        }
        for n in [0u64, 1, 4, 6, 9, 100] {
            assert_eq!(PrimeField::new(n), Err(Error::NotPrime(n)));
        }
    }

    #[test]
    fn inverse_of_three_mod_five() {
        // independent oracle: exhaustive search for y with 3y = 1 mod 5
        let f = PrimeField::new(5).unwrap();
        let x = f.el(3);
        let oracle = f
            .elements()
            .find(|y| (x * *y).value() == 1)
            .expect("inverse exists");
        assert_eq!(oracle.value(), 2);
        assert_eq!(x.inv().unwrap(), oracle);
    }

    #[test]
    fn zero_has_no_inverse() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.zero().inv(), Err(Error::ZeroInverse));
    }

    #[test]
    fn inverse_is_total_on_nonzero_elements() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            for x in f.elements().skip(1) {
                let y = x.inv().unwrap();
                assert_eq!((x * y).value(), 1, "p={p} x={x}");
                // inv is an involution
                assert_eq!(y.inv().unwrap(), x);
            }
        }
    }

    #[test]
    fn signed_reduction() {
        let f = PrimeField::new(3).unwrap();
        assert_eq!(f.el_i(-1).value(), 2);
        assert_eq!(f.el_i(-3).value(), 0);
        assert_eq!(f.el_i(5).value(), 2);
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixed_field_addition_panics() {
        let a = PrimeField::new(3).unwrap().el(1);
        let b = PrimeField::new(5).unwrap().el(1);
        let _ = a + b;
    }

    #[test]
    fn field_laws_small_primes() {
        for p in [2u64, 3, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    assert_eq!(a - b, a + (-b));
                    for c in f.elements() {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }
}
