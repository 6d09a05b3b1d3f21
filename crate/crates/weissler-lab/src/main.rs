//! Command-line front end for the weighted-Bergman inequality checks.
//!
//! Every subcommand computes its full result first and then emits exactly
//! one report (human text, canonical JSON, or sweep CSV). Exit codes are a
//! stable contract for scripting:
//!
//! * `0` — every checked inequality/condition holds,
//! * `1` — a mathematical violation was found (this is a finding, not an
//!   error; the payload says where),
//! * `2` — bad input (weight grammar, argument ranges, unreadable files),
//! * `3` — the numerics could not certify the requested tolerance.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use weissler_core::analytic::{weissler_even_check, PowerSeries};
use weissler_core::bernoulli::bernoulli_report;
use weissler_core::conditions::{
    check_cauchy_lower, check_h4_bound, check_lemma2_inequality, check_strong_condition,
    check_weak_condition, DEFAULT_TOL_REPORT,
};
use weissler_core::weights::{moment_sequence, parse_weight_spec, RadialWeight};
use weissler_core::{Error, Result};

mod output;
mod repro;

use output::{fmt_g6, render_csv, render_json, write_report, CsvRow};

const EXIT_HOLDS: u8 = 0;
const EXIT_VIOLATION: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "weissler-lab",
    version,
    about = "Moment, condition, and contractive-inequality checks for radial Bergman weights"
)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Weight under test: classical:alpha=<v>, power:m=<v>, counterexample,
    /// or table:<path> (CSV of rho,w pairs).
    #[arg(long, global = true)]
    weight: Option<String>,

    /// Absolute tolerance for quadrature and series tails.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tolerance: f64,

    /// Highest even-moment index computed for condition checks.
    #[arg(long, global = true, default_value_t = 60)]
    max_index: usize,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Write the report to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand)]
enum Command {
    /// Print the even moments h_0, h_2, …, h_{2N} with their provenance.
    Moments {
        /// Highest even-moment index N (defaults to --max-index).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Check one moment condition and report margins per index.
    Check {
        #[arg(long, value_enum)]
        condition: Condition,
    },
    /// Check the even-exponent contractive inequality for one polynomial.
    Weissler {
        /// Comma-separated nonnegative coefficients a_0,a_1,…
        #[arg(long)]
        coeffs: String,
        /// Exponent n ≥ 1 (the inequality compares ‖(f_r)^n‖ with ‖f‖^n).
        #[arg(long)]
        n: u32,
        /// Dilation radius, 0 < r ≤ 1.
        #[arg(long)]
        r: f64,
    },
    /// Evaluate the power-series inequality ψ(q) ≤ 0 at the given points.
    Bernoulli {
        /// Comma-separated exponents, all ≥ 1.
        #[arg(long)]
        q: String,
    },
    /// Re-derive the headline numbers and family properties in one table.
    ReproducePaper,
}

#[derive(ValueEnum, Clone, Copy)]
enum Condition {
    Weak,
    Strong,
    Lemma2,
    H4,
    Cauchy,
}

/// A fully assembled report, ready to render in any format.
struct CommandOutput {
    exit: u8,
    human: String,
    json: serde_json::Value,
    csv: Vec<CsvRow>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = match cli.config.format {
                Format::Human => out.human,
                Format::Json => render_json(&out.json),
                Format::Csv => render_csv(&out.csv),
            };
            if let Err(e) = write_report(&text, cli.config.out.as_deref()) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(EXIT_BAD_INPUT);
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::SequenceTooShort { .. } | Error::NonFiniteEvaluation { .. } => {
            EXIT_BAD_INPUT
        }
        Error::QuadratureNoConvergence { .. } | Error::InsufficientMoments { .. } => EXIT_NUMERICAL,
    }
}

fn run(cli: &Cli) -> Result<CommandOutput> {
    let cfg = &cli.config;
    if !(cfg.tolerance > 0.0 && cfg.tolerance.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "--tolerance must be positive, got {}",
            cfg.tolerance
        )));
    }
    if cfg.max_index < 2 {
        return Err(Error::InvalidInput(format!(
            "--max-index must be at least 2, got {}",
            cfg.max_index
        )));
    }
    match &cli.command {
        Command::Moments { n } => cmd_moments(cfg, n.unwrap_or(cfg.max_index)),
        Command::Check { condition } => cmd_check(cfg, *condition),
        Command::Weissler { coeffs, n, r } => cmd_weissler(cfg, coeffs, *n, *r),
        Command::Bernoulli { q } => cmd_bernoulli(cfg, q),
        Command::ReproducePaper => cmd_reproduce(cfg),
    }
}

/// The weight is parsed before anything is computed; subcommands that need
/// one fail fast when it is missing.
fn required_weight(cfg: &ConfigArgs) -> Result<(RadialWeight, &str)> {
    let spec = cfg
        .weight
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("--weight is required for this subcommand".into()))?;
    Ok((parse_weight_spec(spec)?, spec))
}

fn cmd_moments(cfg: &ConfigArgs, n: usize) -> Result<CommandOutput> {
    let (w, spec) = required_weight(cfg)?;
    let h = moment_sequence(&w, n, cfg.tolerance)?;

    let mut human = String::new();
    human.push_str(&format!("# weight: {}\n", w.description()));
    human.push_str(&format!(
        "# tolerance {:e}, max error bound {:e}\n",
        cfg.tolerance,
        h.max_error_bound()
    ));
    let width = format!("h_{}", 2 * n).len();
    for k in 0..=n {
        human.push_str(&format!(
            "{:<width$} = {}  ({})\n",
            format!("h_{}", 2 * k),
            fmt_g6(h.h(k)),
            h.provenance()[k].label(),
        ));
    }

    let json = serde_json::json!({
        "weight": spec,
        "tolerance": cfg.tolerance,
        "moments": h.values(),
        "provenance": h.provenance().iter().map(|p| p.label()).collect::<Vec<_>>(),
        "error_bounds": (0..=n).map(|k| h.error_bound(k)).collect::<Vec<_>>(),
    });

    let csv = (0..=n)
        .map(|k| {
            let v = h.h(k);
            CsvRow::new("moment", 2 * k as i64, v, 0.0, v, h.error_bound(k))
        })
        .collect();

    Ok(CommandOutput {
        exit: EXIT_HOLDS,
        human,
        json,
        csv,
    })
}

fn cmd_check(cfg: &ConfigArgs, condition: Condition) -> Result<CommandOutput> {
    let (w, spec) = required_weight(cfg)?;
    let h = moment_sequence(&w, cfg.max_index, cfg.tolerance)?;
    let achieved = h.max_error_bound();

    // The h4 comparison is a single inequality, not a margin-per-index
    // report, so it renders through the verdict path.
    if matches!(condition, Condition::H4) {
        let verdict = check_h4_bound(&h)?;
        let human = format!(
            "condition: h4_bound\nweight: {}\nlhs = {}  rhs = {}  gap = {}\nbound = {:e}\n{}\n",
            w.description(),
            fmt_g6(verdict.lhs),
            fmt_g6(verdict.rhs),
            fmt_g6(verdict.gap),
            verdict.truncation_bound,
            if verdict.holds { "HOLDS" } else { "VIOLATED" },
        );
        let json = serde_json::json!({
            "weight": spec,
            "tolerance": cfg.tolerance,
            "achieved_bound": achieved,
            "report": verdict.to_json(),
        });
        let csv = vec![CsvRow::new(
            "h4_bound",
            2,
            verdict.lhs,
            verdict.rhs,
            verdict.gap,
            verdict.truncation_bound,
        )];
        return Ok(CommandOutput {
            exit: if verdict.holds { EXIT_HOLDS } else { EXIT_VIOLATION },
            human,
            json,
            csv,
        });
    }

    let report = match condition {
        Condition::Weak => check_weak_condition(&h, DEFAULT_TOL_REPORT)?,
        Condition::Strong => check_strong_condition(&h, DEFAULT_TOL_REPORT)?,
        Condition::Cauchy => check_cauchy_lower(&h, DEFAULT_TOL_REPORT)?,
        Condition::Lemma2 => check_lemma2_inequality(&h, cfg.tolerance)?,
        Condition::H4 => unreachable!("handled above"),
    };

    let (worst, worst_at) = report
        .margins
        .iter()
        .enumerate()
        .map(|(i, &m)| (m, i + 1))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("margins are never empty");

    let mut human = String::new();
    human.push_str(&format!("condition: {}\n", report.condition_name));
    human.push_str(&format!("weight: {}\n", w.description()));
    human.push_str(&format!("indices checked: 1..={}\n", report.holds_up_to));
    human.push_str(&format!("worst margin: {} at m = {worst_at}\n", fmt_g6(worst)));
    match report.first_violation {
        Some(m) => human.push_str(&format!("first violation: m = {m}\nVIOLATED\n")),
        None => human.push_str("first violation: none\nHOLDS\n"),
    }

    let json = serde_json::json!({
        "weight": spec,
        "tolerance": cfg.tolerance,
        "achieved_bound": achieved,
        "report": report.to_json(),
    });

    let name = report.condition_name.as_str();
    let csv = report
        .margins
        .iter()
        .enumerate()
        .map(|(i, &m)| CsvRow::new(name, (i + 1) as i64, m, 0.0, m, achieved))
        .collect();

    Ok(CommandOutput {
        exit: if report.holds() { EXIT_HOLDS } else { EXIT_VIOLATION },
        human,
        json,
        csv,
    })
}

fn cmd_weissler(cfg: &ConfigArgs, coeffs: &str, n: u32, r: f64) -> Result<CommandOutput> {
    let (w, spec) = required_weight(cfg)?;
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidInput(format!(
            "--r must lie in (0, 1], got {r}"
        )));
    }
    let f = PowerSeries::parse(coeffs)?;
    let verdict = weissler_even_check(&f, &w, n, r, cfg.tolerance)?;

    let human = format!(
        "weight: {}\nf has {} coefficients, n = {n}, r = {}\nlhs = {}\nrhs = {}\ngap = {}\ntruncation bound = {:e}\n{}\n",
        w.description(),
        f.coeffs().len(),
        fmt_g6(r),
        fmt_g6(verdict.lhs),
        fmt_g6(verdict.rhs),
        fmt_g6(verdict.gap),
        verdict.truncation_bound,
        if verdict.holds { "HOLDS" } else { "VIOLATED" },
    );

    let json = serde_json::json!({
        "weight": spec,
        "tolerance": cfg.tolerance,
        "n": n,
        "r": r,
        "report": verdict.to_json(),
    });

    let csv = vec![CsvRow::new(
        "weissler",
        i64::from(n),
        verdict.lhs,
        verdict.rhs,
        verdict.gap,
        verdict.truncation_bound,
    )];

    Ok(CommandOutput {
        exit: if verdict.holds { EXIT_HOLDS } else { EXIT_VIOLATION },
        human,
        json,
        csv,
    })
}

fn parse_q_list(text: &str) -> Result<Vec<f64>> {
    let mut qs = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let q: f64 = part
            .parse()
            .map_err(|_| Error::InvalidInput(format!("cannot parse q value '{part}'")))?;
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::InvalidInput(format!("q must be ≥ 1, got {q}")));
        }
        qs.push(q);
    }
    Ok(qs)
}

fn cmd_bernoulli(cfg: &ConfigArgs, q: &str) -> Result<CommandOutput> {
    let (w, spec) = required_weight(cfg)?;
    let q_list = parse_q_list(q)?;
    let h = moment_sequence(&w, cfg.max_index, cfg.tolerance)?;
    let report = bernoulli_report(&h, &q_list, cfg.tolerance)?;

    let mut human = String::new();
    human.push_str(&format!("weight: {}\n", w.description()));
    human.push_str(&format!("S(1)        = {}\n", fmt_g6(report.s1)));
    human.push_str(&format!("psi_prime_1 = {}\n", fmt_g6(report.psi_prime_1)));
    for &(qv, psi) in &report.psi_at {
        human.push_str(&format!("psi({}) = {}\n", fmt_g6(qv), fmt_g6(psi)));
    }
    human.push_str(&format!(
        "tail bound {:e} with {} series terms\n",
        report.tail_bound, report.n_used
    ));
    if let Some(q0) = report.psi_zero_crossing {
        human.push_str(&format!("psi returns to zero near q = {}\n", fmt_g6(q0)));
    }
    human.push_str(if report.inequality_holds() {
        "inequality HOLDS at every requested q\n"
    } else {
        "inequality VIOLATED\n"
    });

    let json = serde_json::json!({
        "weight": spec,
        "tolerance": cfg.tolerance,
        "report": report.to_json(),
    });

    let csv = report
        .psi_at
        .iter()
        .enumerate()
        .map(|(i, &(qv, psi))| {
            CsvRow::new(
                format!("psi(q={})", fmt_g6(qv)),
                i as i64,
                psi,
                0.0,
                -psi,
                report.tail_bound,
            )
        })
        .collect();

    Ok(CommandOutput {
        exit: if report.inequality_holds() { EXIT_HOLDS } else { EXIT_VIOLATION },
        human,
        json,
        csv,
    })
}

fn cmd_reproduce(cfg: &ConfigArgs) -> Result<CommandOutput> {
    let report = repro::run(cfg.tolerance, cfg.weight.as_deref())?;

    let label_width = report
        .rows
        .iter()
        .map(|r| r.label.chars().count())
        .max()
        .unwrap_or(0);
    let mut human = String::new();
    human.push_str(&format!(
        "reproduction table ({} rows; worker threads: {})\n",
        report.rows.len(),
        report.threads
    ));
    for row in &report.rows {
        let pad = label_width.saturating_sub(row.label.chars().count());
        human.push_str(&format!(
            "{}{}  {}  {}\n",
            row.label,
            " ".repeat(pad),
            if row.pass { "PASS" } else { "FAIL" },
            row.detail,
        ));
    }
    human.push_str(if report.all_pass() {
        "all rows PASS\n"
    } else {
        "some rows FAILED\n"
    });
    if !report.all_pass() {
        eprintln!("FAILED rows: {}", report.failing_labels().join("; "));
    }

    let json = serde_json::json!({
        "all_pass": report.all_pass(),
        "rows": report.rows.iter().map(|r| serde_json::json!({
            "label": r.label,
            "detail": r.detail,
            "value": r.value,
            "reference": r.reference,
            "slack": r.slack,
            "bound": r.bound,
            "pass": r.pass,
        })).collect::<Vec<_>>(),
    });

    let csv = report
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            CsvRow::new(
                r.label.replace(',', ";"),
                i as i64,
                r.value,
                r.reference,
                r.slack,
                r.bound,
            )
        })
        .collect();

    Ok(CommandOutput {
        exit: if report.all_pass() { EXIT_HOLDS } else { EXIT_VIOLATION },
        human,
        json,
        csv,
    })
}
