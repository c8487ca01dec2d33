//! Truncated formal Laurent series in t^-1 over F_p.
//!
//! A series is a polynomial part (exactly known) plus fractional
//! coefficients a_1..a_N for t^-1..t^-N. N is the precision: coefficients
//! beyond index N are unknown, which is not the same as zero. Operations
//! track precision conservatively, and degree queries distinguish a known
//! degree from "every known coefficient is zero" via
//! [`SeriesDegree::BelowPrecision`].
//!
//! Text syntax: `poly ; c1 c2 ... cN @N`, e.g. `0 ; 1 0 2 0 1 0 @6`.

use crate::algebra::{FieldElement, Poly, PrimeField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    poly: Poly,
    frac: Vec<u64>, // frac[i] is the coefficient of t^-(i+1), canonical values < p
    p: u64,
}

/// Degree of a truncated series. `Known(d)` is an exact degree witnessed by
/// a nonzero coefficient; `BelowPrecision(b)` means every known coefficient
/// is zero, so all that is known is deg < b (with b = -N).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesDegree {
    Known(i64),
    BelowPrecision(i64),
}

impl LaurentSeries {
    pub fn zero(field: PrimeField, precision: usize) -> LaurentSeries {
        LaurentSeries {
            poly: Poly::zero(field),
            frac: vec![0; precision],
            p: field.order(),
        }
    }

    pub fn from_poly(poly: Poly, precision: usize) -> LaurentSeries {
        let p = poly.field().order();
        LaurentSeries {
            poly,
            frac: vec![0; precision],
            p,
        }
    }

    /// Build from a polynomial part and raw fractional values (reduced mod p).
    pub fn from_parts(field: PrimeField, poly: Poly, frac: &[u64]) -> Result<LaurentSeries> {
        field.require_same(&poly.field())?;
        let p = field.order();
        Ok(LaurentSeries {
            poly,
            frac: frac.iter().map(|&c| c % p).collect(),
            p,
        })
    }

    /// Expand num/den to N fractional coefficients. The polynomial part is
    /// the Euclidean quotient and is exact; the fractional coefficients are
    /// exact as far as they go, so precision here bounds length, not
    /// accuracy.
    pub fn from_rational(num: &Poly, den: &Poly, precision: usize) -> Result<LaurentSeries> {
        num.field().require_same(&den.field())?;
        let p = num.field().order();
        let (quot, rem) = num.divmod(den)?;
        let d = den.degree().expect("divisor nonzero");
        let lead_inv = den.lead().expect("divisor nonzero").inv()?.value();
        let bc = |j: i64| -> u64 {
            if j < 0 {
                0
            } else {
                den.coeff(j as usize).value()
            }
        };
        let rc = |j: i64| -> u64 {
            if j < 0 {
                0
            } else {
                rem.coeff(j as usize).value()
            }
        };
        // rem/den = sum c_n t^-n; matching the t^(d-n) coefficient of
        // rem = den * (that sum) gives a triangular recurrence for c_n.
        let mut frac = vec![0u64; precision];
        for n in 1..=precision {
            let mut acc = rc(d as i64 - n as i64) as u128;
            let lo = if n as i64 - d as i64 > 1 {
                (n as i64 - d as i64) as usize
            } else {
                1
            };
            for m in lo..n {
                let b = bc(d as i64 - n as i64 + m as i64);
                if b != 0 && frac[m - 1] != 0 {
                    let prod = (b as u128) * (frac[m - 1] as u128) % (p as u128);
                    acc = (acc + (p as u128) - prod) % (p as u128);
                }
            }
            frac[n - 1] = ((acc * (lead_inv as u128)) % (p as u128)) as u64;
        }
        Ok(LaurentSeries {
            poly: quot,
            frac,
            p,
        })
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("modulus validated at construction")
    }

    pub fn precision(&self) -> usize {
        self.frac.len()
    }

    pub fn poly_part(&self) -> &Poly {
        &self.poly
    }

    pub fn frac_values(&self) -> &[u64] {
        &self.frac
    }

    /// Known coefficient at exponent e, or None when e lies beyond the
    /// precision horizon. The polynomial part counts as exactly known.
    pub fn coeff_at(&self, e: i64) -> Option<FieldElement> {
        if e >= 0 {
            Some(self.poly.coeff(e as usize))
        } else {
            let n = (-e) as usize;
            if n <= self.frac.len() {
                Some(self.field().el(self.frac[n - 1]))
            } else {
                None
            }
        }
    }

    /// Fractional coefficient a_n for n >= 1, if within precision.
    pub fn frac_coeff(&self, n: usize) -> Option<FieldElement> {
        if n >= 1 {
            self.coeff_at(-(n as i64))
        } else {
            None
        }
    }

    pub fn degree(&self) -> SeriesDegree {
        if let Some(d) = self.poly.degree() {
            return SeriesDegree::Known(d as i64);
        }
        for (i, &c) in self.frac.iter().enumerate() {
            if c != 0 {
                return SeriesDegree::Known(-(i as i64) - 1);
            }
        }
        SeriesDegree::BelowPrecision(-(self.frac.len() as i64))
    }

    pub fn add(&self, rhs: &LaurentSeries) -> Result<LaurentSeries> {
        self.field().require_same(&rhs.field())?;
        let p = self.p;
        let n = self.frac.len().min(rhs.frac.len());
        let frac = (0..n).map(|i| (self.frac[i] + rhs.frac[i]) % p).collect();
        Ok(LaurentSeries {
            poly: &self.poly + &rhs.poly,
            frac,
            p,
        })
    }

    pub fn neg(&self) -> LaurentSeries {
        let p = self.p;
        LaurentSeries {
            poly: -&self.poly,
            frac: self.frac.iter().map(|&c| (p - c) % p).collect(),
            p,
        }
    }

    pub fn sub(&self, rhs: &LaurentSeries) -> Result<LaurentSeries> {
        self.add(&rhs.neg())
    }

    /// (polynomial part, purely fractional remainder at the same precision).
    pub fn split(&self) -> (Poly, LaurentSeries) {
        (
            self.poly.clone(),
            LaurentSeries {
                poly: Poly::zero(self.field()),
                frac: self.frac.clone(),
                p: self.p,
            },
        )
    }

    /// Reciprocal 1/x. Writing d = deg x, the result has degree -d and its
    /// fractional coefficients are determined through index N + 2d, which
    /// is a loss of 2|d| when x is purely fractional. When N + 2d < 0 even
    /// the polynomial part of the reciprocal would be uncertain, which the
    /// representation cannot express, so that is an error.
    pub fn invert(&self) -> Result<LaurentSeries> {
        let d = match self.degree() {
            SeriesDegree::Known(d) => d,
            SeriesDegree::BelowPrecision(_) => return Err(Error::ZeroSeries),
        };
        let n = self.frac.len() as i64;
        if n + 2 * d < 0 {
            return Err(Error::InsufficientPrecision {
                required: (-2 * d) as usize,
                available: self.frac.len(),
            });
        }
        let p = self.p as u128;
        // u = x * t^-d has unit degree; u_j is the coefficient of t^(d-j),
        // known for j <= m_max = N + d. v = 1/u by the standard recurrence.
        let m_max = (n + d) as usize;
        let u = |j: usize| -> u128 { self.coeff_at(d - j as i64).expect("within precision").value() as u128 };
        let u0_inv = self
            .coeff_at(d)
            .expect("degree witnessed")
            .inv()
            .expect("leading coefficient nonzero")
            .value() as u128;
        let mut v = vec![0u64; m_max + 1];
        v[0] = u0_inv as u64;
        for k in 1..=m_max {
            let mut acc = 0u128;
            for j in 1..=k {
                let uj = u(j);
                if uj != 0 && v[k - j] != 0 {
                    acc = (acc + uj * (v[k - j] as u128)) % p;
                }
            }
            // negate and divide by the unit term
            let neg = (p - acc) % p;
            v[k] = (neg * u0_inv % p) as u64;
        }
        // 1/x = sum_k v_k t^(-k-d); exponent e >= 0 comes from k = -d - e.
        let field = self.field();
        let mut poly_coeffs = vec![0u64; if d <= 0 { (-d) as usize + 1 } else { 0 }];
        let frac_len = (n + 2 * d) as usize;
        let mut frac = vec![0u64; frac_len];
        for (k, &vk) in v.iter().enumerate() {
            let e = -(k as i64) - d;
            if e >= 0 {
                poly_coeffs[e as usize] = vk;
            } else {
                let m = (-e) as usize;
                if m <= frac_len {
                    frac[m - 1] = vk;
                }
            }
        }
        Ok(LaurentSeries {
            poly: Poly::from_coeffs(field, &poly_coeffs),
            frac,
            p: self.p,
        })
    }

    /// Same series viewed at a lower precision.
    pub fn truncated(&self, precision: usize) -> LaurentSeries {
        let mut out = self.clone();
        out.frac.truncate(precision);
        out
    }

    /// Extend with further fractional coefficients (reduced mod p); the
    /// precision grows by `tail.len()`.
    pub fn with_tail(&self, tail: &[u64]) -> LaurentSeries {
        let mut out = self.clone();
        out.frac.extend(tail.iter().map(|&c| c % self.p));
        out
    }

    /// Parse the series text syntax over the given field.
    pub fn parse(input: &str, field: PrimeField) -> Result<LaurentSeries> {
        let semi = input.find(';').ok_or(Error::Parse {
            pos: input.len(),
            msg: "expected ';' between polynomial part and coefficients".to_string(),
        })?;
        let poly = Poly::parse(&input[..semi], field)?;
        let rest = &input[semi + 1..];
        let base = semi + 1;
        let mut frac: Vec<u64> = Vec::new();
        let mut declared: Option<usize> = None;
        for (off, tok) in split_tokens(rest) {
            let pos = base + off;
            if declared.is_some() {
                return Err(Error::Parse {
                    pos,
                    msg: "unexpected token after @N".to_string(),
                });
            }
            if let Some(num) = tok.strip_prefix('@') {
                let n: usize = num.parse().map_err(|_| Error::Parse {
                    pos,
                    msg: "expected @N with integer N".to_string(),
                })?;
                declared = Some(n);
            } else {
                let c: u64 = tok.parse().map_err(|_| Error::Parse {
                    pos,
                    msg: "expected an integer coefficient".to_string(),
                })?;
                frac.push(c % field.order());
            }
        }
        let declared = declared.ok_or(Error::Parse {
            pos: input.len(),
            msg: "missing @N precision marker".to_string(),
        })?;
        if declared != frac.len() {
            return Err(Error::Parse {
                pos: input.len(),
                msg: format!("declared precision {declared} but {} coefficients", frac.len()),
            });
        }
        Ok(LaurentSeries {
            poly,
            frac,
            p: field.order(),
        })
    }
}

fn split_tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(st) = start.take() {
                out.push((st, &s[st..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push((st, &s[st..]));
    }
    out
}

impl std::fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ;", self.poly)?;
        for c in &self.frac {
            write!(f, " {c}")?;
        }
        write!(f, " @{}", self.frac.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    /// Independent expansion oracle: the coefficient of t^e in num/den for
    /// e >= -n equals the coefficient of t^(e+n) in the Euclidean quotient
    /// of num * t^n by den, since the dropped remainder term has degree
    /// below -n.
    fn oracle_coeff(num: &Poly, den: &Poly, e: i64, n: usize) -> u64 {
        let field = num.field();
        let shifted = num * &Poly::monomial(field, 1, n);
        let (q, _) = shifted.divmod(den).unwrap();
        let idx = e + n as i64;
        assert!(idx >= 0);
        q.coeff(idx as usize).value()
    }

    #[test]
    fn expansion_of_t_over_t2_plus_1() {
        let field = f(3);
        let num = Poly::t(field);
        let den = Poly::parse("t^2+1", field).unwrap();
        let s = LaurentSeries::from_rational(&num, &den, 6).unwrap();
        assert!(s.poly_part().is_zero());
        assert_eq!(s.frac_values(), &[1, 0, 2, 0, 1, 0]);
        for e in -6..0 {
            assert_eq!(
                s.coeff_at(e).unwrap().value(),
                oracle_coeff(&num, &den, e, 6),
                "coefficient at exponent {e}"
            );
        }
    }

    #[test]
    fn expansion_with_polynomial_part() {
        let field = f(3);
        let num = Poly::monomial(field, 1, 3);
        let den = Poly::parse("t^2+1", field).unwrap();
        let s = LaurentSeries::from_rational(&num, &den, 4).unwrap();
        assert_eq!(s.poly_part(), &Poly::t(field));
        assert_eq!(s.frac_values(), &[2, 0, 1, 0]);
    }

    #[test]
    fn expansion_matches_oracle_on_random_rationals() {
        let mut rng = crate::rng::SplitMix64::new(0xA11CE);
        for p in [2u64, 3, 5, 7] {
            let field = f(p);
            for _ in 0..60 {
                let dd = rng.range(1, 6) as usize;
                let mut den_cs: Vec<u64> = (0..=dd).map(|_| rng.below(p)).collect();
                if den_cs[dd] == 0 {
                    den_cs[dd] = 1 + rng.below(p - 1).min(p - 2);
                }
                let den = Poly::from_coeffs(field, &den_cs);
                let num_cs: Vec<u64> = (0..=dd + 2).map(|_| rng.below(p)).collect();
                let num = Poly::from_coeffs(field, &num_cs);
                let n = rng.range(1, 12) as usize;
                let s = LaurentSeries::from_rational(&num, &den, n).unwrap();
                for e in -(n as i64)..=(s.poly_part().degree_i64().max(0)) {
                    assert_eq!(
                        s.coeff_at(e).unwrap().value(),
                        oracle_coeff(&num, &den, e, n),
                        "p={p} num={num} den={den} e={e}"
                    );
                }
            }
        }
    }

    #[test]
    fn addition_truncates_to_min_precision() {
        let field = f(3);
        let x = LaurentSeries::from_parts(field, Poly::zero(field), &[1, 0, 1, 0, 0, 0]).unwrap();
        let y = LaurentSeries::from_parts(field, Poly::zero(field), &[2, 0, 0, 0]).unwrap();
        let s = x.add(&y).unwrap();
        assert_eq!(s.precision(), 4);
        assert_eq!(s.frac_values(), &[0, 0, 1, 0]);
        assert_eq!(
            x.add(&LaurentSeries::zero(f(5), 4)),
            Err(Error::FieldMismatch(3, 5))
        );
    }

    #[test]
    fn split_separates_polynomial_part() {
        let field = f(3);
        let x = LaurentSeries::from_parts(field, Poly::parse("t+1", field).unwrap(), &[1, 0])
            .unwrap();
        let (a0, rest) = x.split();
        assert_eq!(a0, Poly::parse("t+1", field).unwrap());
        assert!(rest.poly_part().is_zero());
        assert_eq!(rest.frac_values(), &[1, 0]);
        assert_eq!(rest.precision(), 2);
    }

    #[test]
    fn degree_cases() {
        let field = f(3);
        let x = LaurentSeries::from_parts(field, Poly::monomial(field, 1, 3), &[1]).unwrap();
        assert_eq!(x.degree(), SeriesDegree::Known(3));
        let y = LaurentSeries::from_parts(field, Poly::zero(field), &[0, 1, 0, 0]).unwrap();
        assert_eq!(y.degree(), SeriesDegree::Known(-2));
        let z = LaurentSeries::zero(field, 5);
        assert_eq!(z.degree(), SeriesDegree::BelowPrecision(-5));
        let w = LaurentSeries::zero(field, 0);
        assert_eq!(w.degree(), SeriesDegree::BelowPrecision(0));
    }

    #[test]
    fn invert_geometric_series_over_f2() {
        let field = f(2);
        let x = LaurentSeries::from_parts(field, Poly::one(field), &[1, 0, 0, 0]).unwrap();
        let inv = x.invert().unwrap();
        assert_eq!(inv.poly_part(), &Poly::one(field));
        assert_eq!(inv.frac_values(), &[1, 1, 1, 1]);
        assert_eq!(inv.precision(), 4);
    }

    #[test]
    fn invert_fractional_series_loses_two_deg() {
        let field = f(3);
        let num = Poly::t(field);
        let den = Poly::parse("t^2+1", field).unwrap();
        let x = LaurentSeries::from_rational(&num, &den, 8).unwrap();
        let inv = x.invert().unwrap();
        assert_eq!(inv.precision(), 6);
        assert_eq!(inv, LaurentSeries::from_rational(&den, &num, 6).unwrap());
    }

    #[test]
    fn invert_monomial() {
        let field = f(5);
        let x = LaurentSeries::from_parts(field, Poly::zero(field), &[1, 0, 0, 0, 0]).unwrap();
        let inv = x.invert().unwrap();
        assert_eq!(inv.poly_part(), &Poly::t(field));
        assert_eq!(inv.precision(), 3);
        assert_eq!(inv.frac_values(), &[0, 0, 0]);
    }

    #[test]
    fn invert_error_cases() {
        let field = f(3);
        assert_eq!(LaurentSeries::zero(field, 4).invert(), Err(Error::ZeroSeries));
        let deep = LaurentSeries::from_parts(field, Poly::zero(field), &[0, 0, 1]).unwrap();
        assert_eq!(
            deep.invert(),
            Err(Error::InsufficientPrecision {
                required: 6,
                available: 3
            })
        );
    }

    #[test]
    fn invert_twice_returns_to_start() {
        // inversion maps precision N to N + 2d and degree d to -d, so the
        // round trip is precision-neutral and must reproduce x exactly
        let mut rng = crate::rng::SplitMix64::new(77);
        for p in [2u64, 3, 5] {
            let field = f(p);
            for _ in 0..60 {
                let dd = rng.range(1, 5) as usize;
                let mut den_cs: Vec<u64> = (0..=dd).map(|_| rng.below(p)).collect();
                den_cs[dd] = rng.range(1, p - 1);
                let den = Poly::from_coeffs(field, &den_cs);
                let nd = rng.below(dd as u64 + 3) as usize;
                let mut num_cs: Vec<u64> = (0..nd).map(|_| rng.below(p)).collect();
                num_cs.push(rng.range(1, p - 1));
                let num = Poly::from_coeffs(field, &num_cs);
                let x = LaurentSeries::from_rational(&num, &den, 16).unwrap();
                let back = x.invert().unwrap().invert().unwrap();
                assert_eq!(back.precision(), 16, "p={p} num={num} den={den}");
                assert_eq!(back, x, "p={p} num={num} den={den}");
            }
        }
    }

    proptest! {
        #[test]
        fn ultrametric_degree_inequality(p in prop::sample::select(vec![2u64, 3, 5]),
                                         seed in any::<u64>()) {
            let field = f(p);
            let mut rng = crate::rng::SplitMix64::new(seed);
            let n = 8usize;
            let gen = |rng: &mut crate::rng::SplitMix64| {
                let cs: Vec<u64> = (0..n).map(|_| rng.below(p)).collect();
                LaurentSeries::from_parts(field, Poly::zero(field), &cs).unwrap()
            };
            let x = gen(&mut rng);
            let y = gen(&mut rng);
            let s = x.add(&y).unwrap();
            if let (SeriesDegree::Known(dx), SeriesDegree::Known(dy)) = (x.degree(), y.degree()) {
                match s.degree() {
                    SeriesDegree::Known(ds) => {
                        prop_assert!(ds <= dx.max(dy));
                        if dx != dy {
                            prop_assert_eq!(ds, dx.max(dy));
                        }
                    }
                    SeriesDegree::BelowPrecision(b) => {
                        prop_assert!(b <= dx.max(dy));
                        prop_assert_eq!(dx, dy);
                    }
                }
            }
        }
    }

    #[test]
    fn parse_display_roundtrip() {
        let field = f(3);
        let s = LaurentSeries::parse("0 ; 1 0 2 0 1 0 @6", field).unwrap();
        assert!(s.poly_part().is_zero());
        assert_eq!(s.frac_values(), &[1, 0, 2, 0, 1, 0]);
        assert_eq!(s.to_string(), "0 ; 1 0 2 0 1 0 @6");
        let t = LaurentSeries::parse("t+1 ; @0", field).unwrap();
        assert_eq!(t.precision(), 0);
        assert_eq!(t.to_string(), "t+1 ; @0");
        assert_eq!(
            LaurentSeries::parse(&s.to_string(), field).unwrap(),
            s
        );
    }

    #[test]
    fn parse_rejects_bad_counts_and_tokens() {
        let field = f(3);
        assert!(LaurentSeries::parse("0 ; 1 0 @3", field).is_err());
        assert!(LaurentSeries::parse("0 ; 1 0 2", field).is_err());
        assert!(LaurentSeries::parse("1 0 2 @3", field).is_err());
        assert!(LaurentSeries::parse("0 ; 1 x 2 @3", field).is_err());
        assert!(LaurentSeries::parse("0 ; @1 7", field).is_err());
    }

    #[test]
    fn with_tail_extends_precision_only() {
        let field = f(3);
        let x = LaurentSeries::from_parts(field, Poly::zero(field), &[1, 2]).unwrap();
        let y = x.with_tail(&[4, 1]);
        assert_eq!(y.precision(), 4);
        assert_eq!(y.frac_values(), &[1, 2, 1, 1]);
        assert_eq!(y.truncated(2), x);
    }
}
