//! Seeded randomized property suites. Each suite draws its inputs from a
//! per-trial generator seeded by `derive_seed(seed, trial)`, so a run is
//! fully determined by (suite, field, trials, seed) and reports are
//! byte-stable across machines. Failures never abort a run; they are
//! counted and the first few inputs are kept for reproduction.

use serde::Serialize;

use crate::algebra::{Poly, PrimeField};
use crate::contfrac::ContinuedFraction;
use crate::error::{Error, Result};
use crate::hankel::{delta_profile, hankel_delta, p_h_eval, q_h_eval};
use crate::laurent::LaurentSeries;
use crate::rng::{derive_seed, SplitMix64};
use crate::{hall, shulga};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Generic coefficientwise decomposition over F_p, p >= 3.
    Hall,
    /// The F_2 variant.
    HallF2,
    /// Nonzero Hankel orders equal convergent denominator degrees.
    HankelProfile,
    /// Alternating decomposition halts within deg(den)/2 rounds, with all
    /// degree gaps and exact reconstruction.
    ShulgaTermination,
    /// Re-expanding the exact differences reproduces the emitted prefixes.
    ShulgaWellDefined,
    /// Zero-prefix inputs decompose into the S(k) and S(m) classes.
    SClasses,
    /// Appending coefficients beyond the precision never changes a
    /// certified partial quotient.
    Certification,
    /// Exhaustive check of the determinant recurrences over F_2.
    HankelIdentities,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Hall => "hall",
            Suite::HallF2 => "hall-f2",
            Suite::HankelProfile => "detlem",
            Suite::ShulgaTermination => "shulga-termination",
            Suite::ShulgaWellDefined => "shulga-welldef",
            Suite::SClasses => "s-classes",
            Suite::Certification => "certification",
            Suite::HankelIdentities => "hankel-identities",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Some(match name {
            "hall" => Suite::Hall,
            "hall-f2" => Suite::HallF2,
            "detlem" => Suite::HankelProfile,
            "shulga-termination" => Suite::ShulgaTermination,
            "shulga-welldef" => Suite::ShulgaWellDefined,
            "s-classes" => Suite::SClasses,
            "certification" => Suite::Certification,
            "hankel-identities" => Suite::HankelIdentities,
            _ => return None,
        })
    }

    pub fn all() -> &'static [Suite] {
        &[
            Suite::Hall,
            Suite::HallF2,
            Suite::HankelProfile,
            Suite::ShulgaTermination,
            Suite::ShulgaWellDefined,
            Suite::SClasses,
            Suite::Certification,
            Suite::HankelIdentities,
        ]
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub field: u64,
    pub trials: usize,
    pub seed: u64,
    /// Series length for suites that generate series inputs.
    pub precision: usize,
    /// Upper bound on deg(den) for suites that generate rationals.
    pub maxdeg: usize,
    pub k: usize,
    pub m: usize,
}

impl SuiteConfig {
    pub fn new(field: u64, trials: usize, seed: u64) -> SuiteConfig {
        SuiteConfig {
            field,
            trials,
            seed,
            precision: 41,
            maxdeg: 10,
            k: 1,
            m: 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub field: u64,
    pub seed: u64,
    pub trials_requested: usize,
    pub trials_run: usize,
    pub failures: usize,
    /// First few failing inputs, for reproduction.
    pub counterexamples: Vec<String>,
    pub detail: String,
    pub pass: bool,
}

const MAX_COUNTEREXAMPLES: usize = 5;
const CERTIFICATION_TAIL: usize = 1000;

struct Tally {
    run: usize,
    failures: usize,
    counterexamples: Vec<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            run: 0,
            failures: 0,
            counterexamples: Vec::new(),
        }
    }

    fn record(&mut self, failure: Option<String>) {
        self.run += 1;
        if let Some(msg) = failure {
            self.failures += 1;
            if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
                self.counterexamples.push(msg);
            }
        }
    }

    fn into_report(self, suite: Suite, config: &SuiteConfig, detail: String) -> SuiteReport {
        SuiteReport {
            suite: suite.name().to_string(),
            field: config.field,
            seed: config.seed,
            trials_requested: config.trials,
            trials_run: self.run,
            failures: self.failures,
            pass: self.failures == 0,
            counterexamples: self.counterexamples,
            detail,
        }
    }
}

/// A polynomial of exactly the given degree (leading coefficient nonzero).
pub fn random_poly(field: PrimeField, rng: &mut SplitMix64, degree: usize) -> Poly {
    let p = field.order();
    let mut coeffs: Vec<u64> = (0..=degree).map(|_| rng.below(p)).collect();
    coeffs[degree] = 1 + rng.below(p - 1);
    Poly::from_coeffs(field, &coeffs)
}

/// A proper fraction num/den with 1 <= deg(den) <= maxdeg and
/// 0 <= deg(num) < deg(den); both leading coefficients are nonzero.
pub fn random_rational(field: PrimeField, rng: &mut SplitMix64, maxdeg: usize) -> (Poly, Poly) {
    let dd = 1 + rng.below(maxdeg as u64) as usize;
    let den = random_poly(field, rng, dd);
    let nd = rng.below(dd as u64) as usize;
    let num = random_poly(field, rng, nd);
    (num, den)
}

/// A series with zero polynomial part and iid uniform fractional
/// coefficients.
pub fn random_series(field: PrimeField, rng: &mut SplitMix64, precision: usize) -> LaurentSeries {
    let p = field.order();
    let coeffs: Vec<u64> = (0..precision).map(|_| rng.below(p)).collect();
    LaurentSeries::from_parts(field, Poly::zero(field), &coeffs).expect("same field")
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    let field = PrimeField::new(config.field)?;
    match suite {
        Suite::Hall => run_hall(field, config, hall::Mode::Generic),
        Suite::HallF2 => run_hall(field, config, hall::Mode::F2),
        Suite::HankelProfile => run_hankel_profile(field, config),
        Suite::ShulgaTermination => run_shulga_termination(field, config),
        Suite::ShulgaWellDefined => run_shulga_well_defined(field, config),
        Suite::SClasses => run_s_classes(field, config),
        Suite::Certification => run_certification(field, config),
        Suite::HankelIdentities => run_hankel_identities(field, config),
    }
}

fn first_failing_check(report: &crate::report::DecompositionReport) -> String {
    report
        .checks
        .iter()
        .find(|c| !c.pass)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .unwrap_or_else(|| "unknown".to_string())
}

fn run_hall(field: PrimeField, config: &SuiteConfig, mode: hall::Mode) -> Result<SuiteReport> {
    match mode {
        hall::Mode::Generic if field.order() < 3 => {
            return Err(Error::FieldTooSmall(field.order()))
        }
        hall::Mode::F2 if field.order() != 2 => {
            return Err(Error::WrongField {
                expected: 2,
                got: field.order(),
            })
        }
        _ => {}
    }
    let mut tally = Tally::new();
    for trial in 0..config.trials {
        let trial_seed = derive_seed(config.seed, trial as u64);
        let mut rng = SplitMix64::new(trial_seed);
        let alpha = random_series(field, &mut rng, config.precision);
        // Alternate the two chooser policies so both are exercised.
        let policy = if trial % 2 == 0 {
            hall::ChooserPolicy::Smallest
        } else {
            hall::ChooserPolicy::Seeded(derive_seed(trial_seed, 1))
        };
        let outcome = match mode {
            hall::Mode::Generic => hall::decompose(&alpha, policy),
            hall::Mode::F2 => hall::decompose_f2(&alpha, policy),
        };
        let failure = match outcome {
            Err(e) => Some(format!("trial {trial}: alpha = {alpha}: error {e}")),
            Ok(out) => {
                let report = hall::verify(&alpha, &out.beta, &out.gamma, mode);
                if report.pass {
                    None
                } else {
                    Some(format!(
                        "trial {trial}: alpha = {alpha}: {}",
                        first_failing_check(&report)
                    ))
                }
            }
        };
        tally.record(failure);
    }
    let suite = match mode {
        hall::Mode::Generic => Suite::Hall,
        hall::Mode::F2 => Suite::HallF2,
    };
    let detail = format!(
        "series of {} coefficients; sum, determinant profile, and quotient degree checks",
        config.precision
    );
    Ok(tally.into_report(suite, config, detail))
}

fn run_hankel_profile(field: PrimeField, config: &SuiteConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new();
    for trial in 0..config.trials {
        let mut rng = SplitMix64::new(derive_seed(config.seed, trial as u64));
        let (num, den) = random_rational(field, &mut rng, config.maxdeg);
        let n = 2 * den.degree().unwrap() - 1;
        let failure = (|| -> std::result::Result<(), String> {
            let series = LaurentSeries::from_rational(&num, &den, n).map_err(|e| e.to_string())?;
            let profile = delta_profile(field, series.frac_values());
            let cf = ContinuedFraction::expand_rational(&num, &den).map_err(|e| e.to_string())?;
            let expected = cf.convergents().den_degree_set();
            if profile.nonzero == expected {
                Ok(())
            } else {
                Err(format!(
                    "nonzero orders {:?} != denominator degrees {:?}",
                    profile.nonzero, expected
                ))
            }
        })()
        .err()
        .map(|msg| format!("trial {trial}: ({num})/({den}): {msg}"));
        tally.record(failure);
    }
    let detail = format!(
        "rationals with deg(den) <= {}; nonzero Hankel orders vs Euclidean convergent degrees",
        config.maxdeg
    );
    Ok(tally.into_report(Suite::HankelProfile, config, detail))
}

fn run_shulga_termination(field: PrimeField, config: &SuiteConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new();
    let mut max_rounds = 0usize;
    for trial in 0..config.trials {
        let mut rng = SplitMix64::new(derive_seed(config.seed, trial as u64));
        let (num, den) = random_rational(field, &mut rng, config.maxdeg);
        let failure = (|| -> std::result::Result<usize, String> {
            let out = shulga::decompose_rational(&num, &den).map_err(|e| e.to_string())?;
            if !matches!(
                out.trace.stop,
                shulga::StopReason::ExactSumAfterB | shulga::StopReason::ExactSumAfterC
            ) {
                return Err(format!("stop reason {:?} is not exact", out.trace.stop));
            }
            if 2 * out.rounds as i64 > den.degree_i64() {
                return Err(format!(
                    "{} rounds exceeds deg(den)/2 = {}/2",
                    out.rounds,
                    den.degree_i64()
                ));
            }
            let gaps = shulga::verify_gaps(&out.trace);
            if !gaps.pass {
                return Err(gaps.first_violation.unwrap_or_default());
            }
            let (pb, qb) = out.trace.pq.last().unwrap();
            let (sc, tc) = out.trace.st.last().unwrap();
            let lhs = &num * &(qb * tc);
            let rhs = &den * &(&(pb * tc) + &(sc * qb));
            if lhs != rhs {
                return Err("reconstruction mismatch".to_string());
            }
            if !out.beta.classify(1).is_g_prime || !out.gamma.classify(1).is_g_prime {
                return Err("quotient degrees not strictly increasing".to_string());
            }
            Ok(out.rounds)
        })();
        match failure {
            Ok(rounds) => {
                max_rounds = max_rounds.max(rounds);
                tally.record(None);
            }
            Err(msg) => tally.record(Some(format!("trial {trial}: ({num})/({den}): {msg}"))),
        }
    }
    let detail = format!(
        "rationals with deg(den) <= {}; max completed rounds observed: {max_rounds}",
        config.maxdeg
    );
    Ok(tally.into_report(Suite::ShulgaTermination, config, detail))
}

fn run_shulga_well_defined(field: PrimeField, config: &SuiteConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new();
    for trial in 0..config.trials {
        let mut rng = SplitMix64::new(derive_seed(config.seed, trial as u64));
        let (num, den) = random_rational(field, &mut rng, config.maxdeg);
        let failure = (|| -> std::result::Result<(), String> {
            let out = shulga::decompose_rational(&num, &den).map_err(|e| e.to_string())?;
            for j in 0..=out.trace.c_count() {
                let (s, t) = &out.trace.st[j];
                let dnum = &(&num * t) - &(&den * s);
                if dnum.is_zero() {
                    continue;
                }
                let dden = &den * t;
                let cf =
                    ContinuedFraction::expand_rational(&dnum, &dden).map_err(|e| e.to_string())?;
                let upto = j.min(out.trace.b_count());
                if cf.len() < upto || cf.partials()[..upto] != out.trace.b[..upto] {
                    return Err(format!("b-prefix changed after subtracting c_1..c_{j}"));
                }
            }
            for j in 1..=out.trace.b_count() {
                let (pp, qq) = &out.trace.pq[j];
                let dnum = &(&num * qq) - &(&den * pp);
                if dnum.is_zero() {
                    continue;
                }
                let dden = &den * qq;
                let cf =
                    ContinuedFraction::expand_rational(&dnum, &dden).map_err(|e| e.to_string())?;
                let upto = (j - 1).min(out.trace.c_count());
                if cf.len() < upto || cf.partials()[..upto] != out.trace.c[..upto] {
                    return Err(format!("c-prefix changed after subtracting b_1..b_{j}"));
                }
            }
            Ok(())
        })()
        .err()
        .map(|msg| format!("trial {trial}: ({num})/({den}): {msg}"));
        tally.record(failure);
    }
    let detail = format!(
        "rationals with deg(den) <= {}; prefix stability of re-expanded differences",
        config.maxdeg
    );
    Ok(tally.into_report(Suite::ShulgaWellDefined, config, detail))
}

fn run_s_classes(field: PrimeField, config: &SuiteConfig) -> Result<SuiteReport> {
    let (k, m) = (config.k, config.m);
    if k < 1 || m < k {
        return Err(Error::PreconditionViolated(format!(
            "need 1 <= k <= m, got k = {k}, m = {m}"
        )));
    }
    let zeros = k.max(m / 2) - 1;
    if config.precision <= zeros {
        return Err(Error::InsufficientPrecision {
            required: zeros + 1,
            available: config.precision,
        });
    }
    let p = field.order();
    let mut tally = Tally::new();
    for trial in 0..config.trials {
        let mut rng = SplitMix64::new(derive_seed(config.seed, trial as u64));
        let mut coeffs = vec![0u64; zeros];
        coeffs.extend((zeros..config.precision).map(|_| rng.below(p)));
        let alpha = LaurentSeries::from_parts(field, Poly::zero(field), &coeffs).expect("same field");
        let failure = match shulga::check_s_classes(&alpha, k, m) {
            Err(e) => Some(format!("trial {trial}: alpha = {alpha}: error {e}")),
            Ok(report) if !report.pass => Some(format!(
                "trial {trial}: alpha = {alpha}: beta degrees {:?}, gamma degrees {:?}",
                report.beta_degrees, report.gamma_degrees
            )),
            Ok(_) => None,
        };
        tally.record(failure);
    }
    let detail = format!(
        "k = {k}, m = {m}: {zeros} leading zeros, parts judged against S(k)/S(m) and strict growth"
    );
    Ok(tally.into_report(Suite::SClasses, config, detail))
}

fn run_certification(field: PrimeField, config: &SuiteConfig) -> Result<SuiteReport> {
    let p = field.order();
    let mut tally = Tally::new();
    for trial in 0..config.trials {
        let mut rng = SplitMix64::new(derive_seed(config.seed, trial as u64));
        let (num, den) = random_rational(field, &mut rng, config.maxdeg);
        let n = 2 * den.degree().unwrap() - 1;
        let failure = (|| -> std::result::Result<(), String> {
            let base = LaurentSeries::from_rational(&num, &den, n).map_err(|e| e.to_string())?;
            let cf = ContinuedFraction::expand_series(&base);
            let tail: Vec<u64> = (0..CERTIFICATION_TAIL).map(|_| rng.below(p)).collect();
            // Only the first cf.len() quotients of the extension matter;
            // expanding the long tail past them would be wasted work.
            let extended =
                ContinuedFraction::expand_series_limited(&base.with_tail(&tail), cf.len());
            if extended.len() < cf.len() {
                return Err(format!(
                    "extension lost quotients: {} -> {}",
                    cf.len(),
                    extended.len()
                ));
            }
            if &extended.partials()[..cf.len()] != cf.partials() {
                return Err("a certified quotient changed under extension".to_string());
            }
            Ok(())
        })()
        .err()
        .map(|msg| format!("trial {trial}: ({num})/({den}): {msg}"));
        tally.record(failure);
    }
    let detail = format!(
        "{CERTIFICATION_TAIL} random coefficients appended beyond each certified prefix"
    );
    Ok(tally.into_report(Suite::Certification, config, detail))
}

fn run_hankel_identities(field: PrimeField, config: &SuiteConfig) -> Result<SuiteReport> {
    if field.order() != 2 {
        return Err(Error::WrongField {
            expected: 2,
            got: field.order(),
        });
    }
    let mut tally = Tally::new();
    let mut points = 0usize;
    for h in 1..=4usize {
        let len = 2 * h + 1;
        for bits in 0..(1u64 << len) {
            let x: Vec<u64> = (0..len).map(|i| (bits >> i) & 1).collect();
            points += 1;
            let failure = (|| -> std::result::Result<(), String> {
                let lhs = hankel_delta(field, &x, h + 1).map_err(|e| e.to_string())?;
                let dh = hankel_delta(field, &x, h).map_err(|e| e.to_string())?;
                let ph = p_h_eval(field, &x[..2 * h], h).map_err(|e| e.to_string())?;
                if lhs != field.el(x[2 * h]) * dh + ph {
                    return Err(format!("trailing-entry split fails at h = {h}, x = {x:?}"));
                }
                let qh = q_h_eval(field, &x[..2 * h - 1], h).map_err(|e| e.to_string())?;
                let dhm1 = hankel_delta(field, &x, h - 1).map_err(|e| e.to_string())?;
                let sq = field.el(x[2 * h - 1]) * field.el(x[2 * h - 1]);
                if ph != sq * dhm1 + qh {
                    return Err(format!("cofactor split fails at h = {h}, x = {x:?}"));
                }
                Ok(())
            })()
            .err();
            tally.record(failure);
        }
    }
    let detail = format!("both determinant recurrences on all {points} points, h <= 4");
    Ok(tally.into_report(Suite::HankelIdentities, config, detail))
}
