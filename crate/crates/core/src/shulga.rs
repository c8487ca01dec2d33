//! Alternating sumset decomposition of a Laurent series into two
//! continued fractions.
//!
//! The loop builds beta = [0; b_1, b_2, ...] and gamma = [0; c_1, c_2, ...]
//! by turns: b_{n+1} is the (n+1)-st partial quotient of
//! alpha - [0; c_1..c_n], then c_{n+1} is the (n+1)-st partial quotient of
//! alpha - [0; b_1..b_{n+1}], stopping as soon as the two finite fractions
//! sum to alpha exactly. For rational alpha all stop tests are exact
//! cross-multiplied identities and the loop provably halts within
//! deg(denominator)/2 completed rounds. For a truncated series input each
//! extraction is taken only while the continued fraction certification
//! rule covers it, and the loop ends with `PrecisionExhausted` instead of
//! ever claiming exactness.
//!
//! One round means the pair (b_{n+1}, c_{n+1}); a stop right after
//! b_{n+1} leaves the final round with only its b half, so the c-sequence
//! is either as long as the b-sequence or one shorter.

use serde::Serialize;

use crate::algebra::{Poly, PrimeField};
use crate::contfrac::ContinuedFraction;
use crate::error::{Error, Result};
use crate::laurent::LaurentSeries;
use crate::report::CheckRecord;

/// Defensive bound on the number of rounds; the degree-gap growth makes a
/// genuine loop impossible, so hitting this indicates a bug rather than a
/// hard input.
pub const MAX_ROUNDS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The sum matched right after a b-extraction; the last round has no c.
    ExactSumAfterB,
    /// The sum matched at the top of the loop, with equally many b's and c's.
    ExactSumAfterC,
    /// A series input ran out of certified partial quotients.
    PrecisionExhausted,
    /// Safety cap; see [`MAX_ROUNDS`].
    MaxRounds,
}

/// Complete record of a decomposition run: the two quotient sequences and
/// the convergent tables of both sides. Row j of `pq` is the convergent
/// (p_j, q_j) of [0; b_1..b_j]; row j of `st` is (s_j, t_j) of
/// [0; c_1..c_j]. Row 0 is (0, 1) on both sides.
#[derive(Debug, Clone)]
pub struct ShulgaTrace {
    pub b: Vec<Poly>,
    pub c: Vec<Poly>,
    pub pq: Vec<(Poly, Poly)>,
    pub st: Vec<(Poly, Poly)>,
    pub stop: StopReason,
}

impl ShulgaTrace {
    /// Rebuild a trace from quotient sequences alone, recomputing the
    /// convergent tables. The c-sequence must be as long as the b-sequence
    /// or one element shorter.
    pub fn from_parts(
        field: PrimeField,
        b: Vec<Poly>,
        c: Vec<Poly>,
        stop: StopReason,
    ) -> Result<ShulgaTrace> {
        if c.len() != b.len() && c.len() + 1 != b.len() {
            return Err(Error::PreconditionViolated(format!(
                "c-sequence length {} must be {} or {}",
                c.len(),
                b.len().saturating_sub(1),
                b.len()
            )));
        }
        Ok(ShulgaTrace {
            pq: convergent_rows(field, &b),
            st: convergent_rows(field, &c),
            b,
            c,
            stop,
        })
    }

    pub fn b_count(&self) -> usize {
        self.b.len()
    }

    pub fn c_count(&self) -> usize {
        self.c.len()
    }

    /// Completed rounds: a round counts once its c half exists.
    pub fn completed_rounds(&self) -> usize {
        self.c.len()
    }

    pub fn deg_q(&self, j: usize) -> i64 {
        self.pq[j].1.degree_i64()
    }

    pub fn deg_t(&self, j: usize) -> i64 {
        self.st[j].1.degree_i64()
    }

    /// Per round j, the two degree gaps the proof interlaces:
    /// deg(q_j) - deg(t_(j-1)) on the left and deg(t_j) - deg(q_j) on the
    /// right (absent when the round has no c).
    pub fn interlacing_sides(&self) -> Vec<(i64, Option<i64>)> {
        (1..=self.b.len())
            .map(|j| {
                let left = self.deg_q(j) - self.deg_t(j - 1);
                let right = if j <= self.c.len() {
                    Some(self.deg_t(j) - self.deg_q(j))
                } else {
                    None
                };
                (left, right)
            })
            .collect()
    }

    pub fn to_json(&self) -> TraceJson {
        let rounds = (1..=self.b.len())
            .map(|j| RoundJson {
                n: j,
                b: self.b[j - 1].to_string(),
                deg_b: self.b[j - 1].degree_i64(),
                c: self.c.get(j - 1).map(|p| p.to_string()),
                deg_c: self.c.get(j - 1).map(|p| p.degree_i64()),
                deg_q: self.deg_q(j),
                deg_t: if j <= self.c.len() {
                    Some(self.deg_t(j))
                } else {
                    None
                },
            })
            .collect();
        TraceJson {
            rounds,
            stop: self.stop,
            checks: verify_gaps(self),
        }
    }
}

fn convergent_rows(field: PrimeField, quotients: &[Poly]) -> Vec<(Poly, Poly)> {
    let mut rows = vec![(Poly::zero(field), Poly::one(field))];
    let (mut n_prev, mut d_prev) = (Poly::one(field), Poly::zero(field));
    for a in quotients {
        let (n_cur, d_cur) = rows.last().unwrap().clone();
        let n_new = &(a * &n_cur) + &n_prev;
        let d_new = &(a * &d_cur) + &d_prev;
        n_prev = n_cur;
        d_prev = d_cur;
        rows.push((n_new, d_new));
    }
    rows
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundJson {
    pub n: usize,
    pub b: String,
    pub deg_b: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg_c: Option<i64>,
    pub deg_q: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg_t: Option<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceJson {
    pub rounds: Vec<RoundJson>,
    pub stop: StopReason,
    pub checks: GapReport,
}

#[derive(Debug, Clone)]
pub struct ShulgaOutcome {
    pub beta: ContinuedFraction,
    pub gamma: ContinuedFraction,
    /// Completed (b, c) rounds; the termination bound deg(den)/2 is about
    /// this count.
    pub rounds: usize,
    pub trace: ShulgaTrace,
}

/// Decompose num/den exactly. Requires deg(num) < deg(den): a nonzero
/// polynomial part must be split off by the caller first.
pub fn decompose_rational(num: &Poly, den: &Poly) -> Result<ShulgaOutcome> {
    if den.is_zero() {
        return Err(Error::DivisionByZeroPolynomial);
    }
    num.field().require_same(&den.field())?;
    if num.degree_i64() >= den.degree_i64() {
        return Err(Error::PreconditionViolated(
            "deg(num) < deg(den) required; split off the polynomial part first".to_string(),
        ));
    }
    let field = num.field();

    // num/den == bn/bd + cn/cd, cross-multiplied to avoid any division.
    let is_exact_sum = |bn: &Poly, bd: &Poly, cn: &Poly, cd: &Poly| -> bool {
        let lhs = num * &(bd * cd);
        let rhs = den * &(&(bn * cd) + &(cn * bd));
        lhs == rhs
    };

    let mut bs: Vec<Poly> = Vec::new();
    let mut cs: Vec<Poly> = Vec::new();
    let mut pq = vec![(Poly::zero(field), Poly::one(field))];
    let mut st = vec![(Poly::zero(field), Poly::one(field))];
    let (mut p_prev, mut q_prev) = (Poly::one(field), Poly::zero(field));
    let (mut s_prev, mut t_prev) = (Poly::one(field), Poly::zero(field));
    let (mut p_cur, mut q_cur) = (Poly::zero(field), Poly::one(field));
    let (mut s_cur, mut t_cur) = (Poly::zero(field), Poly::one(field));

    let mut stop = StopReason::MaxRounds;
    while cs.len() < MAX_ROUNDS {
        if is_exact_sum(&p_cur, &q_cur, &s_cur, &t_cur) {
            stop = StopReason::ExactSumAfterC;
            break;
        }
        let n = bs.len();

        // b_{n+1} = partial quotient n+1 of alpha - s_n/t_n.
        let dnum = &(num * &t_cur) - &(den * &s_cur);
        let dden = den * &t_cur;
        let cf = ContinuedFraction::expand_rational(&dnum, &dden)?;
        debug_assert!(cf.a0().is_zero(), "difference must be a proper fraction");
        debug_assert_eq!(&cf.partials()[..n], &bs[..n], "b-prefix must be stable");
        assert!(cf.len() > n, "stop tests missed an exact equality");
        let b_next = cf.partials()[n].clone();
        let p_new = &(&b_next * &p_cur) + &p_prev;
        let q_new = &(&b_next * &q_cur) + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_new);
        q_prev = std::mem::replace(&mut q_cur, q_new);
        bs.push(b_next);
        pq.push((p_cur.clone(), q_cur.clone()));

        if is_exact_sum(&p_cur, &q_cur, &s_cur, &t_cur) {
            stop = StopReason::ExactSumAfterB;
            break;
        }

        // c_{n+1} = partial quotient n+1 of alpha - p_{n+1}/q_{n+1}.
        let dnum = &(num * &q_cur) - &(den * &p_cur);
        let dden = den * &q_cur;
        let cf = ContinuedFraction::expand_rational(&dnum, &dden)?;
        debug_assert!(cf.a0().is_zero(), "difference must be a proper fraction");
        debug_assert_eq!(&cf.partials()[..n], &cs[..n], "c-prefix must be stable");
        assert!(cf.len() > n, "stop tests missed an exact equality");
        let c_next = cf.partials()[n].clone();
        let s_new = &(&c_next * &s_cur) + &s_prev;
        let t_new = &(&c_next * &t_cur) + &t_prev;
        s_prev = std::mem::replace(&mut s_cur, s_new);
        t_prev = std::mem::replace(&mut t_cur, t_new);
        cs.push(c_next);
        st.push((s_cur.clone(), t_cur.clone()));
    }

    build_outcome(field, bs, cs, pq, st, stop)
}

/// Decompose a truncated series. Partial quotients are extracted from the
/// exact differences alpha - [0; c_1..c_n] and alpha - [0; b_1..b_{n+1}]
/// only while certified; the run ends with `PrecisionExhausted` once the
/// next extraction is not.
pub fn decompose_series(alpha: &LaurentSeries) -> Result<ShulgaOutcome> {
    if !alpha.poly_part().is_zero() {
        return Err(Error::PreconditionViolated(
            "series must have zero polynomial part; split first".to_string(),
        ));
    }
    let field = alpha.field();
    let n_prec = alpha.precision();

    let mut bs: Vec<Poly> = Vec::new();
    let mut cs: Vec<Poly> = Vec::new();
    let mut pq = vec![(Poly::zero(field), Poly::one(field))];
    let mut st = vec![(Poly::zero(field), Poly::one(field))];
    let (mut p_prev, mut q_prev) = (Poly::one(field), Poly::zero(field));
    let (mut s_prev, mut t_prev) = (Poly::one(field), Poly::zero(field));
    let (mut p_cur, mut q_cur) = (Poly::zero(field), Poly::one(field));
    let (mut s_cur, mut t_cur) = (Poly::zero(field), Poly::one(field));

    let mut stop = StopReason::MaxRounds;
    while cs.len() < MAX_ROUNDS {
        let n = bs.len();

        let approx = LaurentSeries::from_rational(&s_cur, &t_cur, n_prec)?;
        let diff = alpha.sub(&approx)?;
        let cf = ContinuedFraction::expand_series(&diff);
        debug_assert!(cf.a0().is_zero());
        if cf.len() < n + 1 {
            stop = StopReason::PrecisionExhausted;
            break;
        }
        debug_assert_eq!(&cf.partials()[..n], &bs[..n], "b-prefix must be stable");
        let b_next = cf.partials()[n].clone();
        let p_new = &(&b_next * &p_cur) + &p_prev;
        let q_new = &(&b_next * &q_cur) + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, p_new);
        q_prev = std::mem::replace(&mut q_cur, q_new);
        bs.push(b_next);
        pq.push((p_cur.clone(), q_cur.clone()));

        let approx = LaurentSeries::from_rational(&p_cur, &q_cur, n_prec)?;
        let diff = alpha.sub(&approx)?;
        let cf = ContinuedFraction::expand_series(&diff);
        debug_assert!(cf.a0().is_zero());
        if cf.len() < n + 1 {
            stop = StopReason::PrecisionExhausted;
            break;
        }
        debug_assert_eq!(&cf.partials()[..n], &cs[..n], "c-prefix must be stable");
        let c_next = cf.partials()[n].clone();
        let s_new = &(&c_next * &s_cur) + &s_prev;
        let t_new = &(&c_next * &t_cur) + &t_prev;
        s_prev = std::mem::replace(&mut s_cur, s_new);
        t_prev = std::mem::replace(&mut t_cur, t_new);
        cs.push(c_next);
        st.push((s_cur.clone(), t_cur.clone()));
    }

    build_outcome(field, bs, cs, pq, st, stop)
}

fn build_outcome(
    field: PrimeField,
    bs: Vec<Poly>,
    cs: Vec<Poly>,
    pq: Vec<(Poly, Poly)>,
    st: Vec<(Poly, Poly)>,
    stop: StopReason,
) -> Result<ShulgaOutcome> {
    let beta = ContinuedFraction::new(Poly::zero(field), bs.clone())?;
    let gamma = ContinuedFraction::new(Poly::zero(field), cs.clone())?;
    let rounds = cs.len();
    Ok(ShulgaOutcome {
        beta,
        gamma,
        rounds,
        trace: ShulgaTrace {
            b: bs,
            c: cs,
            pq,
            st,
            stop,
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<String>,
    pub pass: bool,
}

/// Check every degree inequality the decomposition guarantees:
/// deg(c_1) >= 2 deg(b_1) + 1; deg(b_n) >= deg(c_(n-1)) + 2 and
/// deg(c_n) >= deg(b_n) + 2 for n >= 2; the interlacing of consecutive
/// gaps deg(t_(j-1)) - deg(q_(j-1)) < deg(q_j) - deg(t_(j-1)) <
/// deg(t_j) - deg(q_j); and the spread deg(t_j) - deg(q_j) >= 2j.
pub fn verify_gaps(trace: &ShulgaTrace) -> GapReport {
    let b_deg: Vec<i64> = trace.b.iter().map(|p| p.degree_i64()).collect();
    let c_deg: Vec<i64> = trace.c.iter().map(|p| p.degree_i64()).collect();
    let b_len = b_deg.len();
    let c_len = c_deg.len();

    // (rule name, first violating index and message, count of indices checked)
    let mut rules: Vec<(&str, Option<String>, usize)> = Vec::new();

    {
        let mut viol = None;
        let mut count = 0;
        if c_len >= 1 {
            count = 1;
            if c_deg[0] < 2 * b_deg[0] + 1 {
                viol = Some(format!(
                    "round 1: deg c_1 = {} < 2 deg b_1 + 1 = {}",
                    c_deg[0],
                    2 * b_deg[0] + 1
                ));
            }
        }
        rules.push(("initial_gap", viol, count));
    }
    {
        let mut viol = None;
        let mut count = 0;
        for n in 2..=b_len {
            count += 1;
            if b_deg[n - 1] < c_deg[n - 2] + 2 {
                viol = Some(format!(
                    "round {n}: deg b_{n} = {} < deg c_{} + 2 = {}",
                    b_deg[n - 1],
                    n - 1,
                    c_deg[n - 2] + 2
                ));
                break;
            }
        }
        rules.push(("b_gap", viol, count));
    }
    {
        let mut viol = None;
        let mut count = 0;
        for n in 2..=c_len {
            count += 1;
            if c_deg[n - 1] < b_deg[n - 1] + 2 {
                viol = Some(format!(
                    "round {n}: deg c_{n} = {} < deg b_{n} + 2 = {}",
                    c_deg[n - 1],
                    b_deg[n - 1] + 2
                ));
                break;
            }
        }
        rules.push(("c_gap", viol, count));
    }
    {
        let mut viol = None;
        for j in 1..=b_len {
            let prev = trace.deg_t(j - 1) - trace.deg_q(j - 1);
            let next = trace.deg_q(j) - trace.deg_t(j - 1);
            if prev >= next {
                viol = Some(format!(
                    "round {j}: gap before b_{j} is {prev}, after is {next}, not increasing"
                ));
                break;
            }
        }
        rules.push(("interlacing_b", viol, b_len));
    }
    {
        let mut viol = None;
        for j in 1..=c_len {
            let prev = trace.deg_q(j) - trace.deg_t(j - 1);
            let next = trace.deg_t(j) - trace.deg_q(j);
            if prev >= next {
                viol = Some(format!(
                    "round {j}: gap before c_{j} is {prev}, after is {next}, not increasing"
                ));
                break;
            }
        }
        rules.push(("interlacing_c", viol, c_len));
    }
    {
        let mut viol = None;
        for j in 1..=c_len {
            let spread = trace.deg_t(j) - trace.deg_q(j);
            if spread < 2 * j as i64 {
                viol = Some(format!(
                    "round {j}: deg t_{j} - deg q_{j} = {spread} < {}",
                    2 * j
                ));
                break;
            }
        }
        rules.push(("degree_spread", viol, c_len));
    }

    let mut checks = Vec::new();
    let mut first_violation = None;
    for (name, viol, count) in rules {
        match viol {
            None => checks.push(CheckRecord::new(
                name,
                true,
                format!("holds at all {count} applicable rounds"),
            )),
            Some(msg) => {
                if first_violation.is_none() {
                    first_violation = Some(format!("{name}: {msg}"));
                }
                checks.push(CheckRecord::new(name, false, msg));
            }
        }
    }
    let pass = checks.iter().all(|c| c.pass);
    GapReport {
        checks,
        first_violation,
        pass,
    }
}

/// Report for the zero-prefix decomposition guarantee: if the first
/// max(k, ceil((m-1)/2)) - 1 coefficients of alpha vanish, the two parts
/// land in the degree-bounded-below classes S(k) and S(m).
#[derive(Debug, Clone, Serialize)]
pub struct SClassReport {
    pub field: u64,
    pub k: usize,
    pub m: usize,
    /// Number of leading fractional coefficients that must vanish.
    pub zero_prefix_required: usize,
    /// The threshold max(k, (m-1)/2) need not be an integer; this records
    /// how the strict inequality n < threshold was turned into a count.
    pub interpretation: String,
    pub beta_degrees: Vec<usize>,
    pub gamma_degrees: Vec<usize>,
    pub beta_in_s_k: bool,
    pub gamma_in_s_m: bool,
    pub beta_g_prime: bool,
    pub gamma_g_prime: bool,
    pub stop: StopReason,
    pub pass: bool,
}

/// Validate the zero-prefix precondition, decompose, and judge the parts
/// against S(k) and S(m) on their certified quotients. Degrees must also
/// strictly increase on both sides.
pub fn check_s_classes(alpha: &LaurentSeries, k: usize, m: usize) -> Result<SClassReport> {
    if k < 1 || m < k {
        return Err(Error::PreconditionViolated(format!(
            "need 1 <= k <= m, got k = {k}, m = {m}"
        )));
    }
    if !alpha.poly_part().is_zero() {
        return Err(Error::PreconditionViolated(
            "series must have zero polynomial part".to_string(),
        ));
    }
    // Integers n with 1 <= n < max(k, (m-1)/2): the count is
    // max(k, ceil((m-1)/2)) - 1, and ceil((m-1)/2) = floor(m/2).
    let zero_prefix_required = k.max(m / 2) - 1;
    if alpha.precision() < zero_prefix_required {
        return Err(Error::InsufficientPrecision {
            required: zero_prefix_required,
            available: alpha.precision(),
        });
    }
    for n in 1..=zero_prefix_required {
        if alpha.frac_values()[n - 1] != 0 {
            return Err(Error::PreconditionViolated(format!(
                "alpha_{n} = {} but indices 1..{} must vanish",
                alpha.frac_values()[n - 1],
                zero_prefix_required
            )));
        }
    }

    let out = decompose_series(alpha)?;
    let fb = out.beta.classify(k);
    let fg = out.gamma.classify(m);
    let pass = fb.in_s_k && fg.in_s_k && fb.is_g_prime && fg.is_g_prime;
    Ok(SClassReport {
        field: alpha.field().order(),
        k,
        m,
        zero_prefix_required,
        interpretation: "count of vanishing coefficients = max(k, ceil((m-1)/2)) - 1, \
                         reading n < max(k, (m-1)/2) over the rationals"
            .to_string(),
        beta_degrees: fb.degrees,
        gamma_degrees: fg.degrees,
        beta_in_s_k: fb.in_s_k,
        gamma_in_s_m: fg.in_s_k,
        beta_g_prime: fb.is_g_prime,
        gamma_g_prime: fg.is_g_prime,
        stop: out.trace.stop,
        pass,
    })
}

/// For a series-mode run: alpha minus both finite fractions must be small
/// in the sense the convergent error law guarantees. A stop while
/// extracting b_(n+1) leaves a residual of degree below -2 deg(q_n); a
/// stop while extracting c_(n+1) leaves one below -2 deg(t_n). A residual
/// with no known nonzero coefficient cannot refute the bound and passes.
pub fn residual_check(alpha: &LaurentSeries, trace: &ShulgaTrace) -> Result<CheckRecord> {
    let n_prec = alpha.precision();
    let (pb, qb) = trace.pq.last().unwrap();
    let (sc, tc) = trace.st.last().unwrap();
    let beta_series = LaurentSeries::from_rational(pb, qb, n_prec)?;
    let gamma_series = LaurentSeries::from_rational(sc, tc, n_prec)?;
    let residual = alpha.sub(&beta_series)?.sub(&gamma_series)?;
    let bound = if trace.b_count() == trace.c_count() {
        -2 * trace.deg_q(trace.b_count())
    } else {
        -2 * trace.deg_t(trace.c_count())
    };
    Ok(match residual.degree() {
        crate::laurent::SeriesDegree::Known(d) => CheckRecord::new(
            "residual_within_bound",
            d < bound,
            format!("deg(alpha - beta - gamma) = {d}, bound {bound}"),
        ),
        crate::laurent::SeriesDegree::BelowPrecision(_) => CheckRecord::new(
            "residual_within_bound",
            true,
            format!("residual vanishes to precision {n_prec}, bound {bound}"),
        ),
    })
}

#[derive(Debug, Clone)]
pub struct CanonicalExample {
    pub alpha: LaurentSeries,
    pub expected_b: Vec<Poly>,
    pub expected_c: Vec<Poly>,
}

/// The showcase input: beta = [0; t, t^5, ..., t^(4n-3)] and
/// gamma = [0; t^3, t^7, ..., t^(4n-1)], returned alongside their sum at
/// the requested precision. Decomposing the sum gives the two quotient
/// sequences back, provided the precision covers the certification of all
/// n rounds: deg(q_(n+1)) + deg(t_n) = (2n+1)^2 coefficients.
pub fn canonical_example(
    field: PrimeField,
    rounds: usize,
    precision: usize,
) -> Result<CanonicalExample> {
    let required = (2 * rounds + 1) * (2 * rounds + 1);
    if precision < required {
        return Err(Error::InsufficientPrecision {
            required,
            available: precision,
        });
    }
    let expected_b: Vec<Poly> = (1..=rounds)
        .map(|i| Poly::monomial(field, 1, 4 * i - 3))
        .collect();
    let expected_c: Vec<Poly> = (1..=rounds)
        .map(|i| Poly::monomial(field, 1, 4 * i - 1))
        .collect();
    let beta = ContinuedFraction::new(Poly::zero(field), expected_b.clone())?;
    let gamma = ContinuedFraction::new(Poly::zero(field), expected_c.clone())?;
    let alpha = beta.eval(precision).add(&gamma.eval(precision))?;
    Ok(CanonicalExample {
        alpha,
        expected_b,
        expected_c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn poly(field: PrimeField, coeffs: &[u64]) -> Poly {
        Poly::from_coeffs(field, coeffs)
    }

    #[test]
    fn rational_worked_example() {
        // (t^2+1)/t^3 over F_3: b_1 = t, the sum 1/t is short of alpha, so
        // c_1 = first quotient of alpha - 1/t = 1/t^3, and then
        // 1/t + 1/t^3 = alpha exactly.
        let field = f(3);
        let num = poly(field, &[1, 0, 1]);
        let den = poly(field, &[0, 0, 0, 1]);
        let out = decompose_rational(&num, &den).unwrap();
        assert_eq!(out.trace.b, vec![Poly::t(field)]);
        assert_eq!(out.trace.c, vec![Poly::monomial(field, 1, 3)]);
        assert_eq!(out.trace.stop, StopReason::ExactSumAfterC);
        assert_eq!(out.rounds, 1);
        let gaps = verify_gaps(&out.trace);
        assert!(gaps.pass, "{:?}", gaps.first_violation);
        assert_eq!(out.trace.interlacing_sides(), vec![(1, Some(2))]);
    }

    #[test]
    fn single_quotient_stops_after_b() {
        for p in [2u64, 3, 7] {
            let field = f(p);
            let out = decompose_rational(&Poly::one(field), &Poly::t(field)).unwrap();
            assert_eq!(out.trace.b, vec![Poly::t(field)]);
            assert!(out.trace.c.is_empty());
            assert_eq!(out.trace.stop, StopReason::ExactSumAfterB);
            assert_eq!(out.rounds, 0);
            assert_eq!(out.gamma.len(), 0);
        }
    }

    #[test]
    fn zero_input_stops_immediately() {
        let field = f(5);
        let den = poly(field, &[0, 0, 1]);
        let out = decompose_rational(&Poly::zero(field), &den).unwrap();
        assert_eq!(out.trace.stop, StopReason::ExactSumAfterC);
        assert!(out.trace.b.is_empty() && out.trace.c.is_empty());
        assert_eq!(out.rounds, 0);
    }

    #[test]
    fn rejects_bad_rational_inputs() {
        let field = f(3);
        assert!(matches!(
            decompose_rational(&Poly::t(field), &Poly::zero(field)),
            Err(Error::DivisionByZeroPolynomial)
        ));
        assert!(matches!(
            decompose_rational(&Poly::t(field), &Poly::t(field)),
            Err(Error::PreconditionViolated(_))
        ));
    }

    fn random_proper_rational(field: PrimeField, rng: &mut SplitMix64, maxdeg: usize) -> (Poly, Poly) {
        let p = field.order();
        let dd = 1 + rng.below(maxdeg as u64) as usize;
        let mut den: Vec<u64> = (0..=dd).map(|_| rng.below(p)).collect();
        den[dd] = 1 + rng.below(p - 1);
        let nd = rng.below(dd as u64) as usize;
        let mut num: Vec<u64> = (0..=nd).map(|_| rng.below(p)).collect();
        if num[nd] == 0 {
            num[nd] = 1 + rng.below(p - 1);
        }
        (poly(field, &num), poly(field, &den))
    }

    #[test]
    fn random_rationals_terminate_and_reconstruct() {
        for p in [2u64, 3, 5] {
            let field = f(p);
            let mut rng = SplitMix64::new(0x5110 + p);
            for trial in 0..80 {
                let (num, den) = random_proper_rational(field, &mut rng, 12);
                let out = decompose_rational(&num, &den).unwrap();
                assert!(
                    2 * out.rounds as i64 <= den.degree_i64(),
                    "p={p} trial={trial}: rounds {} vs deg {}",
                    out.rounds,
                    den.degree_i64()
                );
                assert!(matches!(
                    out.trace.stop,
                    StopReason::ExactSumAfterB | StopReason::ExactSumAfterC
                ));
                let gaps = verify_gaps(&out.trace);
                assert!(gaps.pass, "p={p} trial={trial}: {:?}", gaps.first_violation);

                // Exact reconstruction through the final convergents.
                let (pb, qb) = out.trace.pq.last().unwrap();
                let (sc, tc) = out.trace.st.last().unwrap();
                let lhs = &num * &(qb * tc);
                let rhs = &den * &(&(pb * tc) + &(sc * qb));
                assert_eq!(lhs, rhs, "p={p} trial={trial}");

                // Both parts strictly increase in quotient degree.
                assert!(out.beta.classify(1).is_g_prime);
                assert!(out.gamma.classify(1).is_g_prime);
            }
        }
    }

    #[test]
    fn quotients_are_stable_under_reexpansion() {
        // Re-expanding the exact differences must reproduce the recorded
        // prefixes: alpha - [0;c_1..c_j] starts with b_1..b_j, and
        // alpha - [0;b_1..b_j] starts with c_1..c_(j-1).
        let field = f(3);
        let mut rng = SplitMix64::new(0xBEE);
        for _ in 0..40 {
            let (num, den) = random_proper_rational(field, &mut rng, 10);
            let out = decompose_rational(&num, &den).unwrap();
            for j in 0..=out.trace.c_count() {
                let (s, t) = &out.trace.st[j];
                let dnum = &(&num * t) - &(&den * s);
                let dden = &den * t;
                if dnum.is_zero() {
                    continue;
                }
                let cf = ContinuedFraction::expand_rational(&dnum, &dden).unwrap();
                let upto = j.min(out.trace.b_count()).min(cf.len());
                assert_eq!(&cf.partials()[..upto], &out.trace.b[..upto]);
            }
            for j in 0..=out.trace.b_count() {
                let (pp, qq) = &out.trace.pq[j];
                let dnum = &(&num * qq) - &(&den * pp);
                let dden = &den * qq;
                if dnum.is_zero() {
                    continue;
                }
                let cf = ContinuedFraction::expand_rational(&dnum, &dden).unwrap();
                let upto = j.saturating_sub(1).min(out.trace.c_count()).min(cf.len());
                assert_eq!(&cf.partials()[..upto], &out.trace.c[..upto]);
            }
        }
    }

    #[test]
    fn series_path_matches_rational_path() {
        let field = f(3);
        let num = poly(field, &[1, 0, 1]);
        let den = poly(field, &[0, 0, 0, 1]);
        let alpha = LaurentSeries::from_rational(&num, &den, 8).unwrap();
        let out = decompose_series(&alpha).unwrap();
        assert_eq!(out.trace.b, vec![Poly::t(field)]);
        assert_eq!(out.trace.c, vec![Poly::monomial(field, 1, 3)]);
        // The series path never claims exactness.
        assert_eq!(out.trace.stop, StopReason::PrecisionExhausted);
        assert_eq!(out.rounds, 1);
    }

    #[test]
    fn residual_bound_holds_on_series_runs() {
        let field = f(5);
        let mut rng = SplitMix64::new(0x0DD);
        for trial in 0..25 {
            let n = 10 + (trial % 15);
            let coeffs: Vec<u64> = (0..n).map(|_| rng.below(5)).collect();
            let alpha = LaurentSeries::from_parts(field, Poly::zero(field), &coeffs).unwrap();
            let out = decompose_series(&alpha).unwrap();
            let check = residual_check(&alpha, &out.trace).unwrap();
            assert!(check.pass, "trial {trial}: {}", check.detail);
        }
    }

    #[test]
    fn series_rejects_polynomial_part() {
        let field = f(3);
        let alpha = LaurentSeries::from_parts(field, Poly::t(field), &[1, 2]).unwrap();
        assert!(matches!(
            decompose_series(&alpha),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn all_zero_series_stops_empty() {
        let field = f(2);
        let alpha = LaurentSeries::zero(field, 5);
        let out = decompose_series(&alpha).unwrap();
        assert_eq!(out.trace.stop, StopReason::PrecisionExhausted);
        assert!(out.trace.b.is_empty());
        assert_eq!(out.rounds, 0);
    }

    #[test]
    fn canonical_example_round_trip() {
        for p in [2u64, 7] {
            let field = f(p);
            let ex = canonical_example(field, 2, 25).unwrap();
            let out = decompose_series(&ex.alpha).unwrap();
            assert_eq!(out.trace.b, ex.expected_b, "p={p}");
            assert_eq!(out.trace.c, ex.expected_c, "p={p}");
            assert_eq!(out.trace.stop, StopReason::PrecisionExhausted);
            assert_eq!(
                out.trace.interlacing_sides(),
                vec![(1, Some(2)), (3, Some(4))]
            );
        }
    }

    #[test]
    fn canonical_degrees_follow_closed_form() {
        let field = f(3);
        let ex = canonical_example(field, 3, 60).unwrap();
        let out = decompose_series(&ex.alpha).unwrap();
        assert_eq!(out.trace.b, ex.expected_b);
        assert_eq!(out.trace.c, ex.expected_c);
        // deg q_n = n(2n-1) and deg t_n = n(2n+1).
        for n in 0..=3i64 {
            assert_eq!(out.trace.deg_q(n as usize), n * (2 * n - 1));
            if n as usize <= out.trace.c_count() {
                assert_eq!(out.trace.deg_t(n as usize), n * (2 * n + 1));
            }
        }
        let gaps = verify_gaps(&out.trace);
        assert!(gaps.pass, "{:?}", gaps.first_violation);
    }

    #[test]
    fn canonical_example_precision_gate() {
        let field = f(2);
        match canonical_example(field, 5, 50) {
            Err(Error::InsufficientPrecision {
                required,
                available,
            }) => {
                assert_eq!(required, 121);
                assert_eq!(available, 50);
            }
            other => panic!("expected precision error, got {other:?}"),
        }
        assert!(canonical_example(field, 5, 121).is_ok());
    }

    #[test]
    fn synthetic_bad_trace_is_flagged() {
        let field = f(3);
        let trace = ShulgaTrace::from_parts(
            field,
            vec![Poly::t(field)],
            vec![Poly::monomial(field, 1, 2)],
            StopReason::ExactSumAfterC,
        )
        .unwrap();
        let report = verify_gaps(&trace);
        assert!(!report.pass);
        let first = report.first_violation.unwrap();
        assert!(first.starts_with("initial_gap"), "{first}");
        assert!(first.contains("round 1"), "{first}");
    }

    #[test]
    fn trace_from_parts_validates_lengths() {
        let field = f(3);
        assert!(ShulgaTrace::from_parts(
            field,
            vec![Poly::t(field)],
            vec![Poly::t(field), Poly::t(field)],
            StopReason::ExactSumAfterC,
        )
        .is_err());
    }

    #[test]
    fn s_class_trivial_case() {
        let field = f(3);
        let mut rng = SplitMix64::new(0x51);
        let coeffs: Vec<u64> = (0..12).map(|_| rng.below(3)).collect();
        let alpha = LaurentSeries::from_parts(field, Poly::zero(field), &coeffs).unwrap();
        let report = check_s_classes(&alpha, 1, 1).unwrap();
        assert_eq!(report.zero_prefix_required, 0);
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn s_class_k2_m3() {
        let field = f(3);
        // alpha_1 = 0, then a nonzero tail.
        let coeffs = [0, 1, 2, 0, 1, 1, 0, 2, 1, 0, 0, 1, 2, 2, 1, 0, 1, 0, 0, 2];
        let alpha = LaurentSeries::from_parts(field, Poly::zero(field), &coeffs).unwrap();
        let report = check_s_classes(&alpha, 2, 3).unwrap();
        assert_eq!(report.zero_prefix_required, 1);
        assert!(report.pass, "{report:?}");
        assert!(report.beta_degrees.iter().all(|&d| d >= 2));
        assert!(report.gamma_degrees.iter().all(|&d| d >= 5));
    }

    #[test]
    fn s_class_k3_m7_prefix_rule() {
        let field = f(5);
        // Needs alpha_1 = alpha_2 = 0.
        let mut coeffs = vec![0u64, 0];
        let mut rng = SplitMix64::new(0x737);
        coeffs.extend((0..30).map(|_| rng.below(5)));
        let alpha = LaurentSeries::from_parts(field, Poly::zero(field), &coeffs).unwrap();
        let report = check_s_classes(&alpha, 3, 7).unwrap();
        assert_eq!(report.zero_prefix_required, 2);
        assert!(report.pass, "{report:?}");
        if let Some(&d) = report.beta_degrees.first() {
            assert!(d >= 3);
        }
        if let Some(&d) = report.gamma_degrees.first() {
            assert!(d >= 7);
        }
    }

    #[test]
    fn s_class_rejects_bad_prefix() {
        let field = f(3);
        let alpha =
            LaurentSeries::from_parts(field, Poly::zero(field), &[1, 1, 1, 1]).unwrap();
        assert!(matches!(
            check_s_classes(&alpha, 2, 3),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            check_s_classes(&alpha, 2, 1),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn stop_reasons_serialize_snake_case() {
        assert_eq!(
            serde_json::to_string(&StopReason::ExactSumAfterC).unwrap(),
            "\"exact_sum_after_c\""
        );
        assert_eq!(
            serde_json::to_string(&StopReason::PrecisionExhausted).unwrap(),
            "\"precision_exhausted\""
        );
    }

    #[test]
    fn trace_json_shape() {
        let field = f(3);
        let out = decompose_rational(&Poly::one(field), &Poly::t(field)).unwrap();
        let json = serde_json::to_value(out.trace.to_json()).unwrap();
        assert_eq!(json["stop"], "exact_sum_after_b");
        assert_eq!(json["rounds"][0]["n"], 1);
        assert_eq!(json["rounds"][0]["b"], "t");
        assert_eq!(json["rounds"][0]["deg_b"], 1);
        assert_eq!(json["rounds"][0]["deg_q"], 1);
        // The partial round has no c-side keys at all.
        assert!(json["rounds"][0].get("c").is_none());
        assert!(json["rounds"][0].get("deg_t").is_none());
        assert!(json["checks"]["pass"].as_bool().unwrap());
    }
}
