//! Command-line front end: continued fraction expansion with
//! certification, the two sumset decompositions with their verifiers,
//! seeded property suites, and the showcase example, all reported as JSON.
//! A run is fully determined by its flags; identical invocations produce
//! byte-identical output. Exit code 0 means every check passed, 1 means a
//! verifier failed, 2 means the run could not be carried out at all.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sumcf::algebra::parse_rational;
use sumcf::fuzz::{run_suite, Suite, SuiteConfig};
use sumcf::shulga::{self, StopReason};
use sumcf::{
    delta_profile, hall, CheckRecord, ContinuedFraction, DecompositionReport, Error,
    LaurentSeries, Poly, PrimeField,
};

#[derive(Parser)]
#[command(
    name = "sumcf",
    version,
    about = "Continued fractions of Laurent series over F_p: expansion, Hankel profiles, and sumset decompositions"
)]
struct Cli {
    /// Prime order of the coefficient field.
    #[arg(long, global = true, default_value_t = 2)]
    field: u64,
    /// Seed determining every randomized choice in the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand an input to its continued fraction and cross-check the
    /// nonzero Hankel orders against the convergent denominator degrees.
    Expand {
        /// Rational input, e.g. "t/(t^2+1)".
        #[arg(long, conflicts_with = "series")]
        rational: Option<String>,
        /// Series input, e.g. "0 ; 1 0 2 0 @4".
        #[arg(long)]
        series: Option<String>,
        /// Fractional coefficients to work with; defaults to 2 deg(den)
        /// for rational inputs and the series' own precision otherwise.
        #[arg(long)]
        precision: Option<usize>,
    },
    /// Decompose the input into a sum of two parts and verify the result,
    /// or with --verify-only check parts supplied by hand.
    Decompose {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// How the coefficientwise modes pick their free coefficients.
        #[arg(long, value_enum, default_value_t = ChooserArg::Smallest)]
        chooser: ChooserArg,
        #[arg(long, conflicts_with = "series")]
        rational: Option<String>,
        #[arg(long)]
        series: Option<String>,
        #[arg(long)]
        precision: Option<usize>,
        /// Skip construction and run the verifiers on --beta and --gamma.
        #[arg(long, requires = "beta", requires = "gamma")]
        verify_only: bool,
        /// First part to verify: a series for the hall modes, a continued
        /// fraction like "[t; t, t^2]" for shulga.
        #[arg(long, requires = "verify_only")]
        beta: Option<String>,
        /// Second part to verify; same form as --beta, with zero
        /// polynomial part for shulga.
        #[arg(long, requires = "verify_only")]
        gamma: Option<String>,
    },
    /// Run a seeded property suite.
    Fuzz {
        /// One of: hall, hall-f2, detlem, shulga-termination,
        /// shulga-welldef, s-classes, certification, hankel-identities.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 41)]
        precision: usize,
        #[arg(long, default_value_t = 10)]
        maxdeg: usize,
        /// Lower degree bound required of the first part (s-classes suite).
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Lower degree bound required of the second part (s-classes suite).
        #[arg(long, default_value_t = 1)]
        m: usize,
    },
    /// Build the showcase decomposition input and round-trip it.
    Example {
        #[arg(long)]
        rounds: usize,
        #[arg(long)]
        precision: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    #[value(name = "hall")]
    Hall,
    #[value(name = "hall-f2")]
    HallF2,
    #[value(name = "shulga")]
    Shulga,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChooserArg {
    #[value(name = "smallest")]
    Smallest,
    #[value(name = "seeded")]
    Seeded,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    let field = PrimeField::new(cli.field).map_err(fmt_err)?;
    let (text, pass) = match cli.command {
        Command::Expand {
            rational,
            series,
            precision,
        } => {
            let (out, pass) = cmd_expand(field, rational, series, precision).map_err(fmt_err)?;
            (render(&out, cli.pretty), pass)
        }
        Command::Decompose {
            mode,
            chooser,
            rational,
            series,
            precision,
            verify_only,
            beta,
            gamma,
        } => {
            let (out, pass) = if verify_only {
                let beta = beta.expect("clap requires --beta");
                let gamma = gamma.expect("clap requires --gamma");
                cmd_verify(field, mode, rational, series, precision, &beta, &gamma)
                    .map_err(fmt_err)?
            } else {
                cmd_decompose(field, mode, chooser, cli.seed, rational, series, precision)
                    .map_err(fmt_err)?
            };
            (render(&out, cli.pretty), pass)
        }
        Command::Fuzz {
            suite,
            trials,
            precision,
            maxdeg,
            k,
            m,
        } => {
            let suite = Suite::from_name(&suite).ok_or_else(|| {
                let names: Vec<&str> = Suite::all().iter().map(|s| s.name()).collect();
                format!("unknown suite '{suite}'; available: {}", names.join(", "))
            })?;
            let config = SuiteConfig {
                field: cli.field,
                trials,
                seed: cli.seed,
                precision,
                maxdeg,
                k,
                m,
            };
            let report = run_suite(suite, &config).map_err(fmt_err)?;
            let pass = report.pass;
            (render(&report, cli.pretty), pass)
        }
        Command::Example { rounds, precision } => {
            let (out, pass) = cmd_example(field, rounds, precision).map_err(fmt_err)?;
            (render(&out, cli.pretty), pass)
        }
    };
    match cli.output {
        Some(path) => std::fs::write(&path, text + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(pass)
}

fn fmt_err(e: Error) -> String {
    match &e {
        Error::FieldTooSmall(_) => format!("{e} (--mode hall-f2)"),
        _ => e.to_string(),
    }
}

fn render<T: Serialize>(value: &T, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(value).expect("report serialization")
    } else {
        serde_json::to_string(value).expect("report serialization")
    }
}

enum Input {
    Rational(Poly, Poly),
    Series(LaurentSeries),
}

fn parse_input(
    field: PrimeField,
    rational: Option<String>,
    series: Option<String>,
    precision: Option<usize>,
) -> Result<(Input, String), Error> {
    match (rational, series) {
        (Some(text), None) => {
            let (num, den) = parse_rational(&text, field)?;
            if den.is_zero() {
                return Err(Error::DivisionByZeroPolynomial);
            }
            let label = format!("({})/({})", num, den);
            Ok((Input::Rational(num, den), label))
        }
        (None, Some(text)) => {
            let mut x = LaurentSeries::parse(&text, field)?;
            if let Some(p) = precision {
                if p > x.precision() {
                    return Err(Error::InsufficientPrecision {
                        required: p,
                        available: x.precision(),
                    });
                }
                x = x.truncated(p);
            }
            let label = x.to_string();
            Ok((Input::Series(x), label))
        }
        _ => Err(Error::PreconditionViolated(
            "provide exactly one of --rational or --series".to_string(),
        )),
    }
}

/// Series view of the input at the working precision: rationals default to
/// 2 deg(den) coefficients so every partial quotient is certified.
fn input_series(input: &Input, precision: Option<usize>) -> Result<LaurentSeries, Error> {
    match input {
        Input::Rational(num, den) => {
            let n = precision.unwrap_or(2 * den.degree().expect("nonzero denominator"));
            LaurentSeries::from_rational(num, den, n)
        }
        Input::Series(x) => Ok(x.clone()),
    }
}

#[derive(Serialize)]
struct ConvergentOut {
    n: usize,
    num: String,
    den: String,
}

#[derive(Serialize)]
struct ExpandOutput {
    command: &'static str,
    field: u64,
    input: String,
    precision: usize,
    cf: String,
    degrees: Vec<usize>,
    certified: usize,
    convergents: Vec<ConvergentOut>,
    delta_nonzero: Vec<usize>,
    checks: Vec<CheckRecord>,
    pass: bool,
}

fn cmd_expand(
    field: PrimeField,
    rational: Option<String>,
    series: Option<String>,
    precision: Option<usize>,
) -> Result<(ExpandOutput, bool), Error> {
    let (input, label) = parse_input(field, rational, series, precision)?;
    let x = input_series(&input, precision)?;
    let cf = match &input {
        Input::Rational(num, den) => ContinuedFraction::expand_rational(num, den)?,
        Input::Series(_) => ContinuedFraction::expand_series(&x),
    };
    let table = cf.convergents();
    let profile = delta_profile(field, x.frac_values());

    // The Hankel cross-check: within the window where both sides are
    // fully determined, the nonzero determinant orders must be exactly
    // the convergent denominator degrees.
    let window = match &input {
        Input::Rational(..) => x.precision().div_ceil(2),
        Input::Series(_) => table.deg_den(cf.len()).max(0) as usize,
    };
    let expected: Vec<usize> = table
        .den_degree_set()
        .into_iter()
        .filter(|&h| h <= window)
        .collect();
    let got: Vec<usize> = profile
        .nonzero
        .iter()
        .copied()
        .filter(|&h| h <= window)
        .collect();
    let check = CheckRecord::new(
        "hankel_profile_matches_convergents",
        got == expected,
        format!("window h <= {window}: nonzero orders {got:?}, denominator degrees {expected:?}"),
    );
    let pass = check.pass;

    let out = ExpandOutput {
        command: "expand",
        field: field.order(),
        input: label,
        precision: x.precision(),
        cf: cf.to_string(),
        degrees: cf.degrees(),
        certified: cf.certified(),
        convergents: table
            .rows()
            .iter()
            .map(|r| ConvergentOut {
                n: r.n,
                num: r.num.to_string(),
                den: r.den.to_string(),
            })
            .collect(),
        delta_nonzero: profile.nonzero,
        checks: vec![check],
        pass,
    };
    Ok((out, pass))
}

fn cmd_decompose(
    field: PrimeField,
    mode: ModeArg,
    chooser: ChooserArg,
    seed: u64,
    rational: Option<String>,
    series: Option<String>,
    precision: Option<usize>,
) -> Result<(DecompositionReport, bool), Error> {
    let (input, label) = parse_input(field, rational, series, precision)?;
    match mode {
        ModeArg::Hall | ModeArg::HallF2 => {
            let alpha = input_series(&input, precision)?;
            let policy = match chooser {
                ChooserArg::Smallest => hall::ChooserPolicy::Smallest,
                ChooserArg::Seeded => hall::ChooserPolicy::Seeded(seed),
            };
            let (out, hall_mode) = match mode {
                ModeArg::Hall => (hall::decompose(&alpha, policy)?, hall::Mode::Generic),
                _ => (hall::decompose_f2(&alpha, policy)?, hall::Mode::F2),
            };
            let mut report = hall::verify(&alpha, &out.beta, &out.gamma, hall_mode);
            report.steps = Some(out.steps);
            let pass = report.pass;
            Ok((report, pass))
        }
        ModeArg::Shulga => {
            let (report, pass) = shulga_report(field, &input, &label)?;
            Ok((report, pass))
        }
    }
}

fn shulga_report(
    field: PrimeField,
    input: &Input,
    label: &str,
) -> Result<(DecompositionReport, bool), Error> {
    let mut checks: Vec<CheckRecord> = Vec::new();
    let (outcome, beta, report_precision) = match input {
        Input::Rational(num, den) => {
            // The loop needs a proper fraction; fold the polynomial part
            // into beta's integer term afterwards.
            let (a0, rem) = num.divmod(den)?;
            let out = shulga::decompose_rational(&rem, den)?;
            let beta = ContinuedFraction::new(a0, out.trace.b.clone())?;
            let (pb, qb) = out.trace.pq.last().unwrap();
            let (sc, tc) = out.trace.st.last().unwrap();
            let lhs = &rem * &(qb * tc);
            let rhs = den * &(&(pb * tc) + &(sc * qb));
            checks.push(CheckRecord::new(
                "exact_reconstruction",
                lhs == rhs,
                "beta + gamma re-evaluates to the input".to_string(),
            ));
            (out, beta, None)
        }
        Input::Series(x) => {
            let (poly, frac) = x.split();
            let out = shulga::decompose_series(&frac)?;
            let beta = ContinuedFraction::new(poly, out.trace.b.clone())?;
            checks.push(shulga::residual_check(&frac, &out.trace)?);
            (out, beta, Some(x.precision()))
        }
    };
    let fb = outcome.beta.classify(1);
    let fg = outcome.gamma.classify(1);
    checks.push(CheckRecord::new(
        "beta_degrees_strictly_increase",
        fb.is_g_prime,
        format!("{:?}", fb.degrees),
    ));
    checks.push(CheckRecord::new(
        "gamma_degrees_strictly_increase",
        fg.is_g_prime,
        format!("{:?}", fg.degrees),
    ));
    let trace_json = outcome.trace.to_json();
    let pass = checks.iter().all(|c| c.pass) && trace_json.checks.pass;
    let report = DecompositionReport {
        field: field.order(),
        mode: "shulga".to_string(),
        precision: report_precision,
        alpha: label.to_string(),
        beta: beta.to_string(),
        gamma: outcome.gamma.to_string(),
        delta_nonzero_beta: None,
        delta_nonzero_gamma: None,
        steps: None,
        trace: Some(trace_json),
        checks,
        pass,
    };
    Ok((report, pass))
}

fn cmd_verify(
    field: PrimeField,
    mode: ModeArg,
    rational: Option<String>,
    series: Option<String>,
    precision: Option<usize>,
    beta_text: &str,
    gamma_text: &str,
) -> Result<(DecompositionReport, bool), Error> {
    let (input, label) = parse_input(field, rational, series, precision)?;
    match mode {
        ModeArg::Hall | ModeArg::HallF2 => {
            let alpha = input_series(&input, precision)?;
            let beta = LaurentSeries::parse(beta_text, field)?;
            let gamma = LaurentSeries::parse(gamma_text, field)?;
            let hall_mode = if mode == ModeArg::Hall {
                hall::Mode::Generic
            } else {
                hall::Mode::F2
            };
            let report = hall::verify(&alpha, &beta, &gamma, hall_mode);
            let pass = report.pass;
            Ok((report, pass))
        }
        ModeArg::Shulga => {
            let bcf = ContinuedFraction::parse(beta_text, field)?;
            let gcf = ContinuedFraction::parse(gamma_text, field)?;
            if !gcf.a0().is_zero() {
                return Err(Error::PreconditionViolated(
                    "gamma must have zero polynomial part in shulga mode".to_string(),
                ));
            }
            let b = bcf.partials().to_vec();
            let c = gcf.partials().to_vec();
            let stop = match &input {
                Input::Rational(..) if c.len() == b.len() => StopReason::ExactSumAfterC,
                Input::Rational(..) => StopReason::ExactSumAfterB,
                Input::Series(_) => StopReason::PrecisionExhausted,
            };
            let trace = shulga::ShulgaTrace::from_parts(field, b, c, stop)?;

            let mut checks: Vec<CheckRecord> = Vec::new();
            let report_precision = match &input {
                Input::Rational(num, den) => {
                    // alpha = a0 + [0; b...] + [0; c...] cleared of
                    // denominators.
                    let (pb, qb) = trace.pq.last().unwrap();
                    let (sc, tc) = trace.st.last().unwrap();
                    let folded = &(&(bcf.a0() * qb) + pb) * tc;
                    let lhs = num * &(qb * tc);
                    let rhs = den * &(&folded + &(sc * qb));
                    checks.push(CheckRecord::new(
                        "exact_reconstruction",
                        lhs == rhs,
                        "beta + gamma re-evaluates to the input".to_string(),
                    ));
                    None
                }
                Input::Series(x) => {
                    let (poly, frac) = x.split();
                    checks.push(CheckRecord::new(
                        "polynomial_part_matches",
                        bcf.a0() == &poly,
                        format!("beta integer term {}, input polynomial part {}", bcf.a0(), poly),
                    ));
                    checks.push(shulga::residual_check(&frac, &trace)?);
                    Some(x.precision())
                }
            };
            checks.push(CheckRecord::new(
                "beta_degrees_strictly_increase",
                bcf.classify(1).is_g_prime,
                format!("{:?}", bcf.classify(1).degrees),
            ));
            checks.push(CheckRecord::new(
                "gamma_degrees_strictly_increase",
                gcf.classify(1).is_g_prime,
                format!("{:?}", gcf.classify(1).degrees),
            ));
            let trace_json = trace.to_json();
            let pass = checks.iter().all(|c| c.pass) && trace_json.checks.pass;
            let report = DecompositionReport {
                field: field.order(),
                mode: "shulga".to_string(),
                precision: report_precision,
                alpha: label,
                beta: bcf.to_string(),
                gamma: gcf.to_string(),
                delta_nonzero_beta: None,
                delta_nonzero_gamma: None,
                steps: None,
                trace: Some(trace_json),
                checks,
                pass,
            };
            Ok((report, pass))
        }
    }
}

#[derive(Serialize)]
struct ExampleOutput {
    command: &'static str,
    field: u64,
    rounds: usize,
    precision: usize,
    expected_b: Vec<String>,
    expected_c: Vec<String>,
    got_b: Vec<String>,
    got_c: Vec<String>,
    /// Per round, the left and right interlacing gaps; the right one is
    /// null when the round has no c half.
    interlacing: Vec<(i64, Option<i64>)>,
    stop: StopReason,
    checks: Vec<CheckRecord>,
    pass: bool,
}

fn cmd_example(
    field: PrimeField,
    rounds: usize,
    precision: usize,
) -> Result<(ExampleOutput, bool), Error> {
    let ex = shulga::canonical_example(field, rounds, precision)?;
    let out = shulga::decompose_series(&ex.alpha)?;
    let sides = out.trace.interlacing_sides();

    let mut checks = vec![
        CheckRecord::new(
            "b_sequence",
            out.trace.b == ex.expected_b,
            format!("expected t, t^5, ..., t^{}", 4 * rounds - 3),
        ),
        CheckRecord::new(
            "c_sequence",
            out.trace.c == ex.expected_c,
            format!("expected t^3, t^7, ..., t^{}", 4 * rounds - 1),
        ),
    ];
    let expected_sides: Vec<(i64, Option<i64>)> = (1..=rounds as i64)
        .map(|n| (2 * n - 1, Some(2 * n)))
        .collect();
    checks.push(CheckRecord::new(
        "interlacing_sides",
        sides == expected_sides,
        "round n widens the gap by 2n-1 then 2n".to_string(),
    ));
    let pass = checks.iter().all(|c| c.pass);

    let out = ExampleOutput {
        command: "example",
        field: field.order(),
        rounds,
        precision,
        expected_b: ex.expected_b.iter().map(|p| p.to_string()).collect(),
        expected_c: ex.expected_c.iter().map(|p| p.to_string()).collect(),
        got_b: out.trace.b.iter().map(|p| p.to_string()).collect(),
        got_c: out.trace.c.iter().map(|p| p.to_string()).collect(),
        interlacing: sides,
        stop: out.trace.stop,
        checks,
        pass,
    };
    Ok((out, pass))
}
