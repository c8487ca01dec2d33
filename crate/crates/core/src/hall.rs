//! Coefficientwise sumset decomposition of a Laurent series.
//!
//! Given alpha with fractional coefficients alpha_1, alpha_2, ..., the
//! construction chooses beta_n and gamma_n = alpha_n - beta_n one pair of
//! indices (2n, 2n+1) at a time so that the Hankel determinants of both
//! parts stay under control. Over F_p with p >= 3 every determinant
//! Delta_h of both beta and gamma can be made nonzero, so both parts have
//! all partial quotients of degree 1. Over F_2 there are not enough field
//! elements to dodge every constraint; the fallback keeps gamma fully
//! nonzero while beta is allowed isolated zero determinants, never two in
//! a row.
//!
//! The determinant bookkeeping is incremental. With D_n the leading n x n
//! Hankel determinant of the chosen prefix and P_n its trailing-entry
//! cofactor expansion, D_{n+1} = x_{2n+1} D_n + P_n, so each step needs
//! one evaluation of P_n per part and no determinant is recomputed from
//! scratch.

use serde::Serialize;

use crate::algebra::{FieldElement, Poly, PrimeField};
use crate::error::{Error, Result};
use crate::hankel::{delta_profile, f_class_check, p_h_eval, q_h_eval};
use crate::laurent::LaurentSeries;
use crate::report::{CheckRecord, DecompositionReport};
use crate::rng::SplitMix64;

/// How free coefficients and constrained coefficients are picked.
///
/// `Smallest` is deterministic: free slots get 0 and constrained slots get
/// the smallest canonical representative outside the forbidden set.
/// `Seeded` draws uniformly from the allowed values instead, which is how
/// the randomized test batches exercise choice independence.
#[derive(Debug, Clone, Copy)]
pub enum ChooserPolicy {
    Smallest,
    Seeded(u64),
}

struct Chooser {
    rng: Option<SplitMix64>,
}

impl Chooser {
    fn new(policy: ChooserPolicy) -> Chooser {
        Chooser {
            rng: match policy {
                ChooserPolicy::Smallest => None,
                ChooserPolicy::Seeded(seed) => Some(SplitMix64::new(seed)),
            },
        }
    }

    fn free(&mut self, field: PrimeField) -> FieldElement {
        match &mut self.rng {
            None => field.zero(),
            Some(rng) => field.el(rng.below(field.order())),
        }
    }

    fn avoiding(&mut self, field: PrimeField, forbidden: &[FieldElement]) -> FieldElement {
        let allowed: Vec<FieldElement> = field
            .elements()
            .filter(|x| !forbidden.contains(x))
            .collect();
        assert!(!allowed.is_empty(), "forbidden set exhausts the field");
        match &mut self.rng {
            None => allowed[0],
            Some(rng) => allowed[rng.below(allowed.len() as u64) as usize],
        }
    }
}

/// Which variant of the construction produced a decomposition; determines
/// the class each part is verified against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// p >= 3: both parts get every Delta_h nonzero.
    Generic,
    /// F_2: gamma gets every Delta_h nonzero, beta avoids consecutive zeros.
    F2,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Generic => "hall",
            Mode::F2 => "hall-f2",
        }
    }

    fn beta_class(self) -> usize {
        match self {
            Mode::Generic => 1,
            Mode::F2 => 2,
        }
    }
}

/// One step of the construction. The row with `n = 0` records the initial
/// pair (beta_1, gamma_1); the row for step n >= 1 records the choices at
/// coefficient indices 2n and 2n+1 together with the determinants
/// D_{n+1}(beta) and D_{n+1}(gamma) they produce.
#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub n: usize,
    /// The unconstrained even-index choice beta_{2n}; null for the initial
    /// row and for the F_2 branch where that slot is forced.
    pub beta_free: Option<u64>,
    /// Values the constrained choices had to avoid.
    pub forbidden: Vec<u64>,
    pub beta: u64,
    pub gamma: u64,
    pub delta_beta: u64,
    pub delta_gamma: u64,
    pub branch: String,
}

#[derive(Debug, Clone)]
pub struct HallOutcome {
    pub beta: LaurentSeries,
    pub gamma: LaurentSeries,
    pub steps: Vec<StepRecord>,
}

fn dedup(values: Vec<FieldElement>) -> Vec<FieldElement> {
    let mut out: Vec<FieldElement> = Vec::with_capacity(values.len());
    for v in values {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

fn raw(values: &[FieldElement]) -> Vec<u64> {
    values.iter().map(|v| v.value()).collect()
}

/// Decompose alpha = beta + gamma over F_p, p >= 3, so that every Hankel
/// determinant of both fractional parts is nonzero as far as the precision
/// of alpha allows. The polynomial part of alpha goes to beta unchanged.
///
/// The first fractional coefficient beta_1 avoids {0, alpha_1}. At step n
/// the even coefficient beta_{2n} is a free choice; the odd coefficient
/// beta_{2n+1} must avoid one value per part:
///   -P_n(beta)/D_n(beta)  would kill D_{n+1}(beta),
///   alpha_{2n+1} + P_n(gamma)/D_n(gamma)  would kill D_{n+1}(gamma).
/// Any third value works, and p >= 3 guarantees one exists.
pub fn decompose(alpha: &LaurentSeries, policy: ChooserPolicy) -> Result<HallOutcome> {
    let field = alpha.field();
    let p = field.order();
    if p < 3 {
        return Err(Error::FieldTooSmall(p));
    }
    let n_prec = alpha.precision();
    let a: Vec<FieldElement> = alpha.frac_values().iter().map(|&v| field.el(v)).collect();
    let mut chooser = Chooser::new(policy);

    let mut b: Vec<FieldElement> = Vec::with_capacity(n_prec);
    let mut g: Vec<FieldElement> = Vec::with_capacity(n_prec);
    let mut steps: Vec<StepRecord> = Vec::new();

    if n_prec == 0 {
        return Ok(finish(alpha, &b, &g, steps));
    }

    let init_forbidden = dedup(vec![field.zero(), a[0]]);
    let b1 = chooser.avoiding(field, &init_forbidden);
    let g1 = a[0] - b1;
    // D_1 of each part is its first coefficient; both are nonzero by the
    // choice of beta_1.
    let mut db = b1;
    let mut dg = g1;
    assert!(!db.is_zero() && !dg.is_zero());
    b.push(b1);
    g.push(g1);
    steps.push(StepRecord {
        n: 0,
        beta_free: None,
        forbidden: raw(&init_forbidden),
        beta: b1.value(),
        gamma: g1.value(),
        delta_beta: db.value(),
        delta_gamma: dg.value(),
        branch: "generic".to_string(),
    });

    let mut n = 1usize;
    while b.len() < n_prec {
        // Coefficient index 2n. The choice is unconstrained.
        let beta_even = chooser.free(field);
        let gamma_even = a[2 * n - 1] - beta_even;
        b.push(beta_even);
        g.push(gamma_even);

        if 2 * n + 1 > n_prec {
            // alpha_{2n+1} is beyond the known coefficients; the step
            // cannot be completed, so the pair ends here.
            break;
        }

        let pb = p_h_eval(field, &raw(&b), n)?;
        let pg = p_h_eval(field, &raw(&g), n)?;
        let forb_beta = -pb.div(db)?;
        let forb_gamma = a[2 * n] + pg.div(dg)?;
        let forbidden = dedup(vec![forb_beta, forb_gamma]);

        let beta_odd = chooser.avoiding(field, &forbidden);
        let gamma_odd = a[2 * n] - beta_odd;
        b.push(beta_odd);
        g.push(gamma_odd);

        db = beta_odd * db + pb;
        dg = gamma_odd * dg + pg;
        assert!(!db.is_zero() && !dg.is_zero());

        steps.push(StepRecord {
            n,
            beta_free: Some(beta_even.value()),
            forbidden: raw(&forbidden),
            beta: beta_odd.value(),
            gamma: gamma_odd.value(),
            delta_beta: db.value(),
            delta_gamma: dg.value(),
            branch: "generic".to_string(),
        });
        n += 1;
    }

    Ok(finish(alpha, &b, &g, steps))
}

/// The F_2 variant. gamma_1 = 1 is forced (it is the only nonzero value),
/// and the generic dodge is impossible: a constrained choice over F_2 has
/// only one alternative. Instead the construction protects gamma
/// unconditionally and repairs beta lazily.
///
/// At step n, if D_n(beta) != 0 the step mirrors the generic one except
/// that only the gamma constraint is enforced (beta's determinant may go
/// to zero). If D_n(beta) = 0, the even choice is no longer free: picking
/// beta_{2n} != Q_n(beta)/D_{n-1}(beta) forces the cofactor
/// P_n(beta_1..beta_{2n}) to be nonzero, and since D_{n+1}(beta) =
/// beta_{2n+1} D_n(beta) + P_n(beta) = P_n(beta), the zero cannot repeat.
pub fn decompose_f2(alpha: &LaurentSeries, policy: ChooserPolicy) -> Result<HallOutcome> {
    let field = alpha.field();
    let p = field.order();
    if p != 2 {
        return Err(Error::WrongField { expected: 2, got: p });
    }
    let n_prec = alpha.precision();
    let a: Vec<FieldElement> = alpha.frac_values().iter().map(|&v| field.el(v)).collect();
    let mut chooser = Chooser::new(policy);
    let one = field.one();

    let mut b: Vec<FieldElement> = Vec::with_capacity(n_prec);
    let mut g: Vec<FieldElement> = Vec::with_capacity(n_prec);
    let mut steps: Vec<StepRecord> = Vec::new();

    if n_prec == 0 {
        return Ok(finish(alpha, &b, &g, steps));
    }

    let g1 = one;
    let b1 = a[0] - g1;
    let mut dg = g1;
    let mut db = b1;
    // D_{n-1}(beta), needed when D_n(beta) = 0. Starts at D_0 = 1.
    let mut db_prev = one;
    b.push(b1);
    g.push(g1);
    steps.push(StepRecord {
        n: 0,
        beta_free: None,
        forbidden: Vec::new(),
        beta: b1.value(),
        gamma: g1.value(),
        delta_beta: db.value(),
        delta_gamma: dg.value(),
        branch: "generic".to_string(),
    });

    let mut n = 1usize;
    while b.len() < n_prec {
        let case1 = db.is_zero();
        let (beta_even, beta_free, mut forbidden) = if case1 {
            // D_n(beta) = 0, so D_{n-1}(beta) != 0 and P_n(beta) =
            // beta_{2n}^2 D_{n-1}(beta) + Q_n(beta). The one bad value for
            // beta_{2n} is the root of that form.
            let qb = q_h_eval(field, &raw(&b), n)?;
            let bad = qb.div(db_prev)?;
            (bad + one, None, vec![bad])
        } else {
            let free = chooser.free(field);
            (free, Some(free.value()), Vec::new())
        };
        let gamma_even = a[2 * n - 1] - beta_even;
        b.push(beta_even);
        g.push(gamma_even);

        if 2 * n + 1 > n_prec {
            break;
        }

        let pb = p_h_eval(field, &raw(&b), n)?;
        let pg = p_h_eval(field, &raw(&g), n)?;
        // Protect gamma: gamma_{2n+1} must not be the root of
        // x * D_n(gamma) + P_n(gamma).
        let bad_gamma = pg.div(dg)?;
        forbidden.push(bad_gamma);
        let gamma_odd = bad_gamma + one;
        let beta_odd = a[2 * n] - gamma_odd;
        b.push(beta_odd);
        g.push(gamma_odd);

        db_prev = db;
        db = beta_odd * db + pb;
        dg = gamma_odd * dg + pg;
        assert!(!dg.is_zero());
        if case1 {
            assert_eq!(db, pb, "D_n(beta) was zero");
            assert!(!db.is_zero(), "consecutive zero determinants for beta");
        }

        steps.push(StepRecord {
            n,
            beta_free,
            forbidden: raw(&forbidden),
            beta: beta_odd.value(),
            gamma: gamma_odd.value(),
            delta_beta: db.value(),
            delta_gamma: dg.value(),
            branch: if case1 { "case1" } else { "generic" }.to_string(),
        });
        n += 1;
    }

    Ok(finish(alpha, &b, &g, steps))
}

fn finish(
    alpha: &LaurentSeries,
    b: &[FieldElement],
    g: &[FieldElement],
    steps: Vec<StepRecord>,
) -> HallOutcome {
    let field = alpha.field();
    let beta = LaurentSeries::from_parts(field, alpha.poly_part().clone(), &raw(b))
        .expect("parts share alpha's field");
    let gamma = LaurentSeries::from_parts(field, Poly::zero(field), &raw(g))
        .expect("parts share alpha's field");
    HallOutcome { beta, gamma, steps }
}

fn push_class_check(
    checks: &mut Vec<CheckRecord>,
    field: PrimeField,
    name: &str,
    part: &LaurentSeries,
    k: usize,
) -> Vec<usize> {
    let coeffs = part.frac_values();
    let res = f_class_check(field, coeffs, k);
    checks.push(CheckRecord::new(
        &format!("{name}_class"),
        res.ok,
        match res.witness {
            None => format!("no run of {k} consecutive zero determinants"),
            Some(h) => format!("Delta_{} .. Delta_{} all vanish", h + 1 - k, h),
        },
    ));
    delta_profile(field, coeffs).nonzero
}

fn push_degree_check(
    checks: &mut Vec<CheckRecord>,
    name: &str,
    part: &LaurentSeries,
    k: usize,
) {
    let cf = crate::contfrac::ContinuedFraction::expand_series(part);
    let flags = cf.classify(k);
    checks.push(CheckRecord::new(
        &format!("{name}_quotient_degrees"),
        flags.in_f_k,
        format!(
            "certified partial quotient degrees {:?}, bound {k}",
            flags.degrees
        ),
    ));
}

/// Check a claimed decomposition: the parts must sum back to alpha, each
/// part's Hankel determinant prefix must match the class the mode
/// promises, and the partial quotients certified by each part's continued
/// fraction must obey the corresponding degree bound.
pub fn verify(
    alpha: &LaurentSeries,
    beta: &LaurentSeries,
    gamma: &LaurentSeries,
    mode: Mode,
) -> DecompositionReport {
    let field = alpha.field();
    let mut checks: Vec<CheckRecord> = Vec::new();

    let sum_ok = match beta.add(gamma) {
        Ok(sum) => {
            let n = sum.precision().min(alpha.precision());
            sum.truncated(n) == alpha.truncated(n)
        }
        Err(_) => false,
    };
    checks.push(CheckRecord::new(
        "sum_matches",
        sum_ok,
        if sum_ok {
            "beta + gamma reproduces alpha"
        } else {
            "beta + gamma differs from alpha"
        },
    ));

    let nz_beta = push_class_check(&mut checks, field, "beta", beta, mode.beta_class());
    let nz_gamma = push_class_check(&mut checks, field, "gamma", gamma, 1);
    push_degree_check(&mut checks, "beta", beta, mode.beta_class());
    push_degree_check(&mut checks, "gamma", gamma, 1);

    let pass = checks.iter().all(|c| c.pass);
    DecompositionReport {
        field: field.order(),
        mode: mode.name().to_string(),
        precision: Some(alpha.precision()),
        alpha: alpha.to_string(),
        beta: beta.to_string(),
        gamma: gamma.to_string(),
        delta_nonzero_beta: Some(nz_beta),
        delta_nonzero_gamma: Some(nz_gamma),
        steps: None,
        trace: None,
        checks,
        pass,
    }
}

/// One branch of the exhaustive refutation for F_2.
#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleBranch {
    pub beta1: u64,
    pub gamma1: u64,
    pub delta1_beta: u64,
    pub delta1_gamma: u64,
    /// Which part already fails the all-determinants-nonzero condition.
    pub zero_part: String,
    pub refuted_at_h: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub field: u64,
    pub alpha: String,
    pub branches: Vec<CounterexampleBranch>,
    pub refuted: bool,
    pub conclusion: String,
}

/// Why the generic result cannot hold over F_2: alpha = 1/t admits no
/// decomposition with both parts having all Hankel determinants nonzero.
/// Delta_1 of a part is its first fractional coefficient, and the two
/// possible splits of alpha_1 = 1 are 0 + 1 and 1 + 0; either way one part
/// has Delta_1 = 0.
pub fn counterexample_f2() -> CounterexampleReport {
    let field = PrimeField::new(2).unwrap();
    let alpha = LaurentSeries::from_parts(field, Poly::zero(field), &[1]).unwrap();
    let mut branches = Vec::new();
    let mut refuted = true;
    for b1 in 0..2u64 {
        let g1 = (1 + 2 - b1) % 2;
        let delta_b = crate::hankel::hankel_delta(field, &[b1], 1).unwrap().value();
        let delta_g = crate::hankel::hankel_delta(field, &[g1], 1).unwrap().value();
        let zero_part = if delta_b == 0 { "beta" } else { "gamma" };
        refuted &= delta_b == 0 || delta_g == 0;
        branches.push(CounterexampleBranch {
            beta1: b1,
            gamma1: g1,
            delta1_beta: delta_b,
            delta1_gamma: delta_g,
            zero_part: zero_part.to_string(),
            refuted_at_h: 1,
        });
    }
    CounterexampleReport {
        field: 2,
        alpha: alpha.to_string(),
        branches,
        refuted,
        conclusion: "every split of the first coefficient 1 = beta_1 + gamma_1 over F_2 \
                     leaves one part with Delta_1 = 0"
            .to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contfrac::ContinuedFraction;
    use crate::hankel::hankel_delta;
    use crate::rng::derive_seed;

    fn series(field: PrimeField, frac: &[u64]) -> LaurentSeries {
        LaurentSeries::from_parts(field, Poly::zero(field), frac).unwrap()
    }

    #[test]
    fn worked_example_p3() {
        // alpha = 1/t over F_3 at precision 3. beta_1 avoids {0, 1}, so
        // beta_1 = 2 and gamma_1 = 2. Step 1: beta_2 = 0 (free), and the
        // forbidden set for beta_3 is {-P_1(2,0)/2, 0 + P_1(2,0)/2} =
        // {0} since P_1(x1,x2) = -x2^2 = 0 here. So beta_3 = 1 and
        // gamma_3 = 0 - 1 = 2.
        let field = PrimeField::new(3).unwrap();
        let alpha = series(field, &[1, 0, 0]);
        let out = decompose(&alpha, ChooserPolicy::Smallest).unwrap();
        assert_eq!(out.beta.frac_values(), &[2, 0, 1]);
        assert_eq!(out.gamma.frac_values(), &[2, 0, 2]);
        assert_eq!(out.steps.len(), 2);
        assert_eq!(out.steps[0].forbidden, vec![0, 1]);
        assert_eq!(out.steps[1].forbidden, vec![0]);
        assert_eq!(out.steps[1].beta_free, Some(0));
        assert_eq!(
            out.steps[1].delta_beta,
            hankel_delta(field, &[2, 0, 1], 2).unwrap().value()
        );
        assert_eq!(out.steps[1].delta_beta, 2);
        assert_eq!(out.steps[1].delta_gamma, 1);
        let report = verify(&alpha, &out.beta, &out.gamma, Mode::Generic);
        assert!(report.pass, "{:?}", report.checks);
        assert_eq!(report.delta_nonzero_beta, Some(vec![1, 2]));
    }

    #[test]
    fn worked_example_f2() {
        // alpha = 1/t over F_2 at precision 3. gamma_1 = 1 forces beta_1 = 0,
        // so D_1(beta) = 0 and step 1 takes the repair branch: Q_1 = 0, so
        // beta_2 must avoid 0/D_0 = 0, giving beta_2 = 1, gamma_2 = 0 + 1 = 1.
        // Then P_1(gamma) = -gamma_2^2 = 1, bad value 1/1 = 1, gamma_3 = 0,
        // beta_3 = 0 + 0 = 0.
        let field = PrimeField::new(2).unwrap();
        let alpha = series(field, &[1, 0, 0]);
        let out = decompose_f2(&alpha, ChooserPolicy::Smallest).unwrap();
        assert_eq!(out.gamma.frac_values(), &[1, 1, 0]);
        assert_eq!(out.beta.frac_values(), &[0, 1, 0]);
        assert_eq!(out.steps[1].branch, "case1");
        assert_eq!(out.steps[1].beta_free, None);
        assert_eq!(out.steps[1].delta_beta, 1);
        assert_eq!(out.steps[1].delta_gamma, 1);
        let report = verify(&alpha, &out.beta, &out.gamma, Mode::F2);
        assert!(report.pass, "{:?}", report.checks);
        // beta has Delta_1 = 0 but Delta_2 = 1: an isolated zero, allowed
        // when the degree bound is 2.
        assert_eq!(report.delta_nonzero_beta, Some(vec![2]));
        assert_eq!(report.delta_nonzero_gamma, Some(vec![1, 2]));
    }

    #[test]
    fn zero_input_gives_opposite_parts() {
        let field = PrimeField::new(5).unwrap();
        let alpha = series(field, &[0; 9]);
        let out = decompose(&alpha, ChooserPolicy::Smallest).unwrap();
        let b = out.beta.frac_values();
        let g = out.gamma.frac_values();
        for i in 0..9 {
            assert_eq!((b[i] + g[i]) % 5, 0);
        }
        assert!(verify(&alpha, &out.beta, &out.gamma, Mode::Generic).pass);
    }

    #[test]
    fn polynomial_part_goes_to_beta() {
        let field = PrimeField::new(3).unwrap();
        let poly = Poly::from_coeffs(field, &[1, 2]);
        let alpha = LaurentSeries::from_parts(field, poly.clone(), &[1, 1, 1, 1, 1]).unwrap();
        let out = decompose(&alpha, ChooserPolicy::Smallest).unwrap();
        assert_eq!(out.beta.poly_part(), &poly);
        assert!(out.gamma.poly_part().is_zero());
        assert!(verify(&alpha, &out.beta, &out.gamma, Mode::Generic).pass);
    }

    #[test]
    fn rejects_wrong_field_sizes() {
        let field = PrimeField::new(2).unwrap();
        let alpha = series(field, &[1, 0]);
        assert!(matches!(
            decompose(&alpha, ChooserPolicy::Smallest),
            Err(Error::FieldTooSmall(2))
        ));
        let field3 = PrimeField::new(3).unwrap();
        let alpha3 = series(field3, &[1, 0]);
        assert!(matches!(
            decompose_f2(&alpha3, ChooserPolicy::Smallest),
            Err(Error::WrongField { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn empty_precision_is_trivial() {
        let field = PrimeField::new(5).unwrap();
        let alpha = series(field, &[]);
        let out = decompose(&alpha, ChooserPolicy::Smallest).unwrap();
        assert_eq!(out.beta.precision(), 0);
        assert!(out.steps.is_empty());
    }

    #[test]
    fn random_batches_pass_verification() {
        for &p in &[3u64, 5, 7] {
            let field = PrimeField::new(p).unwrap();
            let mut rng = SplitMix64::new(derive_seed(0xA11CE, p));
            for trial in 0..60u64 {
                let n = 5 + (trial % 17) as usize;
                let coeffs: Vec<u64> = (0..n).map(|_| rng.below(p)).collect();
                let alpha = series(field, &coeffs);
                let policy = if trial % 2 == 0 {
                    ChooserPolicy::Smallest
                } else {
                    ChooserPolicy::Seeded(derive_seed(7, trial))
                };
                let out = decompose(&alpha, policy).unwrap();
                let report = verify(&alpha, &out.beta, &out.gamma, Mode::Generic);
                assert!(report.pass, "p={p} trial={trial}: {:?}", report.checks);
            }
        }
    }

    #[test]
    fn random_f2_batches_pass_verification() {
        let field = PrimeField::new(2).unwrap();
        let mut rng = SplitMix64::new(0xF2F2);
        for trial in 0..120u64 {
            let n = 4 + (trial % 20) as usize;
            let coeffs: Vec<u64> = (0..n).map(|_| rng.below(2)).collect();
            let alpha = series(field, &coeffs);
            let policy = if trial % 2 == 0 {
                ChooserPolicy::Smallest
            } else {
                ChooserPolicy::Seeded(derive_seed(11, trial))
            };
            let out = decompose_f2(&alpha, policy).unwrap();
            let report = verify(&alpha, &out.beta, &out.gamma, Mode::F2);
            assert!(report.pass, "trial={trial}: {:?}", report.checks);
        }
    }

    #[test]
    fn prefix_consistency_under_extension() {
        // Extending alpha with more coefficients must not change the part
        // of the decomposition already emitted: choices at indices <= N
        // depend only on alpha_1..alpha_N and the same chooser stream.
        for &(p, seed) in &[(3u64, 1u64), (5, 2), (2, 3)] {
            let field = PrimeField::new(p).unwrap();
            let mut rng = SplitMix64::new(seed);
            let coeffs: Vec<u64> = (0..24).map(|_| rng.below(p)).collect();
            for &n in &[7usize, 8, 15] {
                let short = series(field, &coeffs[..n]);
                let long = series(field, &coeffs);
                let run = |s: &LaurentSeries| {
                    if p == 2 {
                        decompose_f2(s, ChooserPolicy::Seeded(99)).unwrap()
                    } else {
                        decompose(s, ChooserPolicy::Seeded(99)).unwrap()
                    }
                };
                let a = run(&short);
                let b = run(&long);
                assert_eq!(a.beta.frac_values(), &b.beta.frac_values()[..n]);
                assert_eq!(a.gamma.frac_values(), &b.gamma.frac_values()[..n]);
            }
        }
    }

    #[test]
    fn seeded_choosers_differ_but_both_verify() {
        let field = PrimeField::new(5).unwrap();
        let alpha = series(field, &[3, 1, 4, 1, 0, 2, 4, 4, 0, 1, 3]);
        let a = decompose(&alpha, ChooserPolicy::Seeded(1)).unwrap();
        let b = decompose(&alpha, ChooserPolicy::Seeded(2)).unwrap();
        assert_ne!(a.beta.frac_values(), b.beta.frac_values());
        assert!(verify(&alpha, &a.beta, &a.gamma, Mode::Generic).pass);
        assert!(verify(&alpha, &b.beta, &b.gamma, Mode::Generic).pass);
    }

    #[test]
    fn quotient_degrees_match_class() {
        // All determinants nonzero forces every certified partial quotient
        // to have degree exactly 1.
        let field = PrimeField::new(7).unwrap();
        let mut rng = SplitMix64::new(0xD06);
        let coeffs: Vec<u64> = (0..15).map(|_| rng.below(7)).collect();
        let alpha = series(field, &coeffs);
        let out = decompose(&alpha, ChooserPolicy::Smallest).unwrap();
        for part in [&out.beta, &out.gamma] {
            let cf = ContinuedFraction::expand_series(part);
            assert!(cf.certified() >= 7, "certified {}", cf.certified());
            assert!(cf.degrees().iter().all(|&d| d == 1), "{:?}", cf.degrees());
        }
    }

    #[test]
    fn f2_counterexample_refutes_both_splits() {
        let report = counterexample_f2();
        assert!(report.refuted);
        assert_eq!(report.branches.len(), 2);
        assert_eq!(report.branches[0].delta1_beta, 0);
        assert_eq!(report.branches[0].zero_part, "beta");
        assert_eq!(report.branches[1].delta1_gamma, 0);
        assert_eq!(report.branches[1].refuted_at_h, 1);
    }

    #[test]
    fn step_records_serialize_with_expected_shape() {
        let field = PrimeField::new(3).unwrap();
        let alpha = series(field, &[1, 0, 0]);
        let out = decompose(&alpha, ChooserPolicy::Smallest).unwrap();
        let json = serde_json::to_value(&out.steps).unwrap();
        assert_eq!(json[0]["beta_free"], serde_json::Value::Null);
        assert_eq!(json[1]["n"], 1);
        assert_eq!(json[1]["branch"], "generic");
        assert_eq!(json[1]["forbidden"], serde_json::json!([0]));
    }
}
