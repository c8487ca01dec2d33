//! Continued fractions of Laurent series and rational functions.
//!
//! A continued fraction here is a0 + 1/(a1 + 1/(a2 + ...)) with polynomial
//! partial quotients, deg(a_n) >= 1 for n >= 1. Rational functions have a
//! finite expansion computed by the Euclidean algorithm with no
//! normalization of quotients. Truncated series have a certified prefix:
//! a_1..a_n are emitted only while 2 deg(q_n) <= N, where q_n is the n-th
//! convergent denominator and N the precision. Any series sharing the first
//! N fractional coefficients has the same certified quotients, and the
//! expansion loop below enforces the bound structurally: extracting a_n
//! consumes exactly 2 deg(a_n) of precision.
//!
//! Text syntax: `[a0; a1, a2, ...]` with polynomial syntax inside, e.g.
//! `[0; t, t^2+1, 2t]`.

use crate::algebra::{Poly, PrimeField};
use crate::error::{Error, Result};
use crate::laurent::{LaurentSeries, SeriesDegree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    a0: Poly,
    partials: Vec<Poly>,
    certified: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub n: usize,
    pub num: Poly,
    pub den: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentTable {
    rows: Vec<Convergent>,
}

/// Membership flags for the bounded/unbounded partial-quotient classes,
/// judged on the certified prefix only. `in_f_k`: every certified degree is
/// <= k; `in_s_k`: every certified degree is >= k; `is_g_prime`: certified
/// degrees are strictly increasing. Finite evidence cannot settle
/// membership in the "degrees tend to infinity" class, so no flag claims
/// it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFlags {
    pub k: usize,
    pub degrees: Vec<usize>,
    pub in_f_k: bool,
    pub in_s_k: bool,
    pub is_g_prime: bool,
}

impl ContinuedFraction {
    /// Build from explicit quotients; every a_n with n >= 1 must be
    /// nonconstant. The result is treated as exact (fully certified).
    pub fn new(a0: Poly, partials: Vec<Poly>) -> Result<ContinuedFraction> {
        let field = a0.field();
        for (i, a) in partials.iter().enumerate() {
            field.require_same(&a.field())?;
            if a.degree().unwrap_or(0) < 1 {
                return Err(Error::InvalidPartialQuotient(i + 1));
            }
        }
        let certified = partials.len();
        Ok(ContinuedFraction {
            a0,
            partials,
            certified,
        })
    }

    /// Euclidean expansion of num/den. Finite, unique, and quotient
    /// degrees >= 1 after a0 fall out of deg(remainder) < deg(divisor).
    pub fn expand_rational(num: &Poly, den: &Poly) -> Result<ContinuedFraction> {
        num.field().require_same(&den.field())?;
        if den.is_zero() {
            return Err(Error::DivisionByZeroPolynomial);
        }
        let (a0, mut rem) = num.divmod(den)?;
        let mut cur = den.clone();
        let mut partials = Vec::new();
        while !rem.is_zero() {
            let (q, r) = cur.divmod(&rem)?;
            partials.push(q);
            cur = rem;
            rem = r;
        }
        ContinuedFraction::new(a0, partials)
    }

    /// Expansion of a truncated series. Emits exactly the certified
    /// quotients; uncertified ones are withheld rather than guessed. A
    /// series with no known nonzero fractional coefficient expands to
    /// [a0;].
    pub fn expand_series(x: &LaurentSeries) -> ContinuedFraction {
        ContinuedFraction::expand_series_limited(x, usize::MAX)
    }

    /// Same walk as [`ContinuedFraction::expand_series`] but stops after
    /// emitting `max_partials` quotients. Equals a prefix of the full
    /// expansion; useful when the input is far longer than the part of
    /// the expansion that matters.
    pub fn expand_series_limited(x: &LaurentSeries, max_partials: usize) -> ContinuedFraction {
        let (a0, mut y) = x.split();
        let mut partials = Vec::new();
        let mut deg_q: i64 = 0;
        while partials.len() < max_partials {
            if matches!(y.degree(), SeriesDegree::BelowPrecision(_)) {
                break;
            }
            let z = match y.invert() {
                Ok(z) => z,
                Err(Error::InsufficientPrecision { .. }) => break,
                Err(other) => unreachable!("degree known and nonzero: {other}"),
            };
            let (a, rest) = z.split();
            debug_assert!(a.degree().unwrap_or(0) >= 1);
            deg_q += a.degree_i64();
            debug_assert!(2 * deg_q <= x.precision() as i64);
            partials.push(a);
            y = rest;
        }
        let certified = partials.len();
        ContinuedFraction {
            a0,
            partials,
            certified,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.a0.field()
    }

    pub fn a0(&self) -> &Poly {
        &self.a0
    }

    pub fn partials(&self) -> &[Poly] {
        &self.partials
    }

    pub fn len(&self) -> usize {
        self.partials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partials.is_empty()
    }

    /// Number of leading partial quotients certified correct for every
    /// series extending the known coefficients. Equals len() for exact
    /// expansions.
    pub fn certified(&self) -> usize {
        self.certified
    }

    /// Degrees d_n of the certified partial quotients, n >= 1.
    pub fn degrees(&self) -> Vec<usize> {
        self.partials[..self.certified]
            .iter()
            .map(|a| a.degree().expect("partial quotients are nonconstant"))
            .collect()
    }

    /// Convergent recurrences seeded with (p, q) = (a0, 1); each row n >= 1
    /// satisfies p_n = a_n p_(n-1) + p_(n-2) and likewise for q.
    pub fn convergents(&self) -> ConvergentTable {
        let field = self.field();
        let mut rows = Vec::with_capacity(self.partials.len() + 1);
        let mut p_prev = Poly::one(field); // p_(-1)
        let mut q_prev = Poly::zero(field); // q_(-1)
        let mut p = self.a0.clone();
        let mut q = Poly::one(field);
        rows.push(Convergent {
            n: 0,
            num: p.clone(),
            den: q.clone(),
        });
        for (i, a) in self.partials.iter().enumerate() {
            let p_next = &(a * &p) + &p_prev;
            let q_next = &(a * &q) + &q_prev;
            // deg q_n = deg q_(n-1) + deg a_n: the leading terms cannot cancel
            assert_eq!(
                q_next.degree_i64(),
                q.degree_i64() + a.degree_i64(),
                "convergent degree law violated at row {}",
                i + 1
            );
            p_prev = p;
            q_prev = q;
            p = p_next;
            q = q_next;
            rows.push(Convergent {
                n: i + 1,
                num: p.clone(),
                den: q.clone(),
            });
        }
        ConvergentTable { rows }
    }

    /// Evaluate back to a series at the requested precision via the final
    /// convergent.
    pub fn eval(&self, precision: usize) -> LaurentSeries {
        let table = self.convergents();
        let last = table.rows.last().expect("row 0 always present");
        LaurentSeries::from_rational(&last.num, &last.den, precision)
            .expect("convergent denominators are nonzero")
    }

    /// Does deg(x - p_n/q_n) equal -(deg q_n + deg q_(n+1))? Requires row
    /// n+1 to be certified so the comparison is about true quotients.
    pub fn approx_error_check(&self, x: &LaurentSeries, n: usize) -> Result<bool> {
        if n + 1 > self.certified {
            return Err(Error::PreconditionViolated(format!(
                "approx_error_check needs row {} certified, have {}",
                n + 1,
                self.certified
            )));
        }
        let table = self.convergents();
        let expected = -(table.deg_den(n) + table.deg_den(n + 1));
        let row = table.row(n);
        let approx = LaurentSeries::from_rational(&row.num, &row.den, x.precision())?;
        let diff = x.sub(&approx)?;
        match diff.degree() {
            SeriesDegree::Known(d) => Ok(d == expected),
            SeriesDegree::BelowPrecision(b) => {
                if expected >= b {
                    Ok(false)
                } else {
                    Err(Error::InsufficientPrecision {
                        required: (-expected) as usize,
                        available: x.precision(),
                    })
                }
            }
        }
    }

    pub fn classify(&self, k: usize) -> ClassFlags {
        let degrees = self.degrees();
        let in_f_k = degrees.iter().all(|&d| d <= k);
        let in_s_k = degrees.iter().all(|&d| d >= k);
        let is_g_prime = degrees.windows(2).all(|w| w[0] < w[1]);
        ClassFlags {
            k,
            degrees,
            in_f_k,
            in_s_k,
            is_g_prime,
        }
    }

    /// Parse the `[a0; a1, a2, ...]` syntax over the given field.
    pub fn parse(input: &str, field: PrimeField) -> Result<ContinuedFraction> {
        let trimmed = input.trim();
        let inner = trimmed
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or(Error::Parse {
                pos: 0,
                msg: "expected [a0; a1, a2, ...]".to_string(),
            })?;
        let (a0_text, rest) = match inner.find(';') {
            Some(i) => (&inner[..i], Some(&inner[i + 1..])),
            None => (inner, None),
        };
        let a0 = Poly::parse(a0_text, field)?;
        let mut partials = Vec::new();
        if let Some(rest) = rest {
            if !rest.trim().is_empty() {
                for part in rest.split(',') {
                    partials.push(Poly::parse(part, field)?);
                }
            }
        }
        ContinuedFraction::new(a0, partials)
    }
}

impl ConvergentTable {
    pub fn rows(&self) -> &[Convergent] {
        &self.rows
    }

    pub fn row(&self, n: usize) -> &Convergent {
        &self.rows[n]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn deg_den(&self, n: usize) -> i64 {
        self.rows[n].den.degree_i64()
    }

    /// Denominator degrees of rows 1.., i.e. the candidate nonzero-Hankel
    /// orders.
    pub fn den_degree_set(&self) -> Vec<usize> {
        self.rows[1..]
            .iter()
            .map(|r| r.den.degree().expect("q_n nonzero with positive degree"))
            .collect()
    }
}

impl std::fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{};", self.a0)?;
        for (i, a) in self.partials.iter().enumerate() {
            if i == 0 {
                write!(f, " {a}")?;
            } else {
                write!(f, ", {a}")?;
            }
        }
        write!(f, "]")
    }
}
