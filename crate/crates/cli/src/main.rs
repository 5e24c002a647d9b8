//! `cyclo`: structure scans, single `(p, h)` queries, congruence reports and
//! reference-table verification.
//!
//! Exit status: 0 on success, 1 on usage or I/O errors, 2 when `verify`
//! finds a mismatch or a failing check.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use cyclo_core::arith::is_prime;
use cyclo_core::congruence::Check;
use cyclo_core::scan::records_to_csv;
use cyclo_core::{
    biquad_report, factor_mod, principality_test, psquare_report, quad_report, relative_gcd, run_suite, scan_range,
    CycloParams,
};

/// Largest accepted `p` for single-prime commands; keeps `h <= p^2` below 2^32.
const P_LIMIT: u64 = 65_535;
/// Largest accepted `--pmax`; the scan sieves up to `pmax^2`.
const PMAX_LIMIT: u64 = 5_000;

#[derive(Parser, Debug)]
#[command(name = "cyclo", version, about = "Relative class group structure of prime cyclotomic fields")]
#[command(disable_help_flag = true)]
struct Cli {
    /// Print help
    #[arg(long, action = ArgAction::Help, global = true)]
    help: Option<bool>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CommandKind {
    Scan,
    Gcd,
    Quad,
    Biquad,
    Psquare,
    Inertial,
    Verify,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Scan all odd primes p <= pmax (or just -p) and list every (p, h) with deg GCD > 0
    Scan(Opts),
    /// GCD(X) for one pair (p, h), factored over F_h
    Gcd(Opts),
    /// Alternating-sum checks for p = 3 mod 4 against the reduced-forms count
    Quad(Opts),
    /// Sum of squares S for p = 5 mod 8
    Biquad(Opts),
    /// Candidates mu = v_(2m+1) for the mod p and mod p^2 congruences
    Psquare(Opts),
    /// Principality criterion for a prime q of inertial degree f > 1
    Inertial(Opts),
    /// Full p < 500 scan against the reference table plus every congruence check
    Verify(Opts),
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Prime p
    #[arg(short = 'p')]
    p: Option<u64>,
    /// Odd prime h <= p^2
    #[arg(short = 'h')]
    h: Option<u64>,
    /// Prime q != p
    #[arg(short = 'q')]
    q: Option<u64>,
    /// Upper bound for p in `scan`
    #[arg(long, default_value_t = 500)]
    pmax: u64,
    /// Seed for the randomized factorization; results do not depend on it
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for `scan` and `verify` [default: available cores]
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
    Text,
}

/// Validated configuration.
#[derive(Debug, Clone)]
struct CliConfig {
    command: CommandKind,
    p: Option<u64>,
    h: Option<u64>,
    q: Option<u64>,
    pmax: u64,
    seed: u64,
    format: Format,
    out: Option<PathBuf>,
    jobs: usize,
}

enum Failure {
    Usage(String),
    /// Full report plus a one-line summary for stderr.
    Mismatch { body: String, summary: String },
}

impl From<cyclo_core::Error> for Failure {
    fn from(e: cyclo_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn odd_prime(name: &str, x: u64, limit: u64) -> Result<u64, Failure> {
    if x % 2 == 0 || !is_prime(x) {
        return Err(usage(format!("-{name} {x}: must be an odd prime")));
    }
    if x > limit {
        return Err(usage(format!("-{name} {x}: must be at most {limit}")));
    }
    Ok(x)
}

impl CliConfig {
    fn from_cli(cli: Cli) -> Result<Self, Failure> {
        let (command, o) = match cli.command {
            Command::Scan(o) => (CommandKind::Scan, o),
            Command::Gcd(o) => (CommandKind::Gcd, o),
            Command::Quad(o) => (CommandKind::Quad, o),
            Command::Biquad(o) => (CommandKind::Biquad, o),
            Command::Psquare(o) => (CommandKind::Psquare, o),
            Command::Inertial(o) => (CommandKind::Inertial, o),
            Command::Verify(o) => (CommandKind::Verify, o),
        };
        let jobs = match o.jobs {
            Some(0) => return Err(usage("--jobs must be positive")),
            Some(j) => j,
            None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
        };
        let p = o.p.map(|p| odd_prime("p", p, P_LIMIT)).transpose()?;
        let needs_p = !matches!(command, CommandKind::Scan | CommandKind::Verify);
        if needs_p && p.is_none() {
            return Err(usage(format!("{command:?} requires -p").to_lowercase()));
        }
        let h = match (command, o.h) {
            (CommandKind::Gcd, None) => return Err(usage("gcd requires -h")),
            (_, Some(h)) => {
                let h = odd_prime("h", h, u64::MAX)?;
                if let Some(p) = p {
                    if h > p * p {
                        return Err(usage(format!("-h {h}: must be at most p^2 = {}", p * p)));
                    }
                }
                Some(h)
            }
            (_, None) => None,
        };
        let q = match (command, o.q) {
            (CommandKind::Inertial, None) => return Err(usage("inertial requires -q")),
            (_, Some(q)) if !is_prime(q) || Some(q) == p => {
                return Err(usage(format!("-q {q}: must be a prime different from p")))
            }
            (_, q) => q,
        };
        if command == CommandKind::Scan && (o.pmax < 3 || o.pmax > PMAX_LIMIT) {
            return Err(usage(format!("--pmax {}: must lie in [3, {PMAX_LIMIT}]", o.pmax)));
        }
        Ok(Self { command, p, h, q, pmax: o.pmax, seed: o.seed, format: o.format, out: o.out, jobs })
    }

    fn p(&self) -> u64 {
        self.p.expect("validated")
    }

    fn params(&self) -> Result<CycloParams, Failure> {
        Ok(CycloParams::new(self.p())?)
    }
}

fn json<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("serializable")
}

fn lines(items: impl IntoIterator<Item = String>) -> String {
    items.into_iter().map(|l| l + "\n").collect()
}

fn checks_output(checks: &[Check], format: Format) -> String {
    match format {
        Format::Json => lines(checks.iter().map(json)),
        Format::Csv => {
            let mut out = String::from("theorem,kind,p,holds,detail\n");
            out.push_str(&lines(checks.iter().map(|c| {
                format!("{},{},{},{},\"{}\"", c.theorem, json(&c.kind).trim_matches('"'), c.p, c.holds, c.detail)
            })));
            out
        }
        Format::Text => lines(checks.iter().map(Check::to_text_line)),
    }
}

fn cmd_scan(cfg: &CliConfig) -> Outcome {
    let (lo, hi) = match cfg.p {
        Some(p) => (p, p),
        None => (3, cfg.pmax),
    };
    let report = scan_range(lo, hi, cfg.seed, cfg.jobs)?;
    Ok(match cfg.format {
        Format::Csv => records_to_csv(&report.records),
        Format::Json => lines(report.records.iter().map(|r| json(&r.to_json()))),
        Format::Text => lines(report.records.iter().map(|r| r.to_text_line())),
    })
}

fn cmd_gcd(cfg: &CliConfig) -> Outcome {
    let params = cfg.params()?;
    let h = cfg.h.expect("validated");
    let g = relative_gcd(&params, h)?;
    let factors = if g.deg() == 0 { None } else { Some(factor_mod(&g, cfg.seed)?) };
    let rho = factors.as_ref().map_or(0, |f| f.total_degree());
    let shown = factors.as_ref().map_or("1".to_string(), |f| f.to_string());
    Ok(match cfg.format {
        Format::Text => format!("rho={rho}  v={}  {shown}\n", params.v()),
        Format::Csv => format!(
            "p,h,rho,v,factors\n{},{h},{rho},{},{}\n",
            params.p(),
            params.v(),
            factors.as_ref().map_or(String::new(), |f| f.to_csv_field())
        ),
        Format::Json => {
            let fs = factors.as_ref().map(|f| f.to_json()).unwrap_or_default();
            json(&serde_json::json!({"p": params.p(), "h": h, "rho": rho, "v": params.v(), "factors": fs})) + "\n"
        }
    })
}

fn cmd_quad(cfg: &CliConfig) -> Outcome {
    let r = quad_report(&cfg.params()?)?;
    let checks = r.checks();
    Ok(match cfg.format {
        Format::Text => {
            let head = format!(
                "p={} v={} alt_sum={} class_number={} half_sum={} parity_sum={} oracle_count={}\n",
                r.p, r.v, r.alt_sum, r.class_number, r.half_sum, r.parity_sum, r.oracle_count
            );
            head + &checks_output(&checks, Format::Text)
        }
        Format::Json => json(&serde_json::json!({"report": r, "checks": checks})) + "\n",
        Format::Csv => checks_output(&checks, Format::Csv),
    })
}

fn cmd_biquad(cfg: &CliConfig) -> Outcome {
    let r = biquad_report(&cfg.params()?)?;
    let check = r.check();
    Ok(match cfg.format {
        Format::Text => {
            let q = r.s_div_p2.map_or("-".to_string(), |k| k.to_string());
            format!("p={} v={} s_even={} s_odd={} S={} S/p^2={q}\n{}\n", r.p, r.v, r.s_even, r.s_odd, r.s, check.to_text_line())
        }
        Format::Json => json(&serde_json::json!({"report": r, "checks": [check]})) + "\n",
        Format::Csv => format!(
            "p,v,s_even,s_odd,S,S_div_p2\n{},{},{},{},{},{}\n",
            r.p,
            r.v,
            r.s_even,
            r.s_odd,
            r.s,
            r.s_div_p2.map_or(String::new(), |k| k.to_string())
        ),
    })
}

fn cmd_psquare(cfg: &CliConfig) -> Outcome {
    let r = psquare_report(&cfg.params()?)?;
    let flag = |b: Option<bool>| b.map_or("-".to_string(), |b| b.to_string());
    Ok(match cfg.format {
        Format::Text => {
            let mut out = format!(
                "p={} v={} candidates={} roots_mod_p={} roots_mod_p2={}\n",
                r.p,
                r.v,
                r.candidates.len(),
                r.roots_mod_p().count(),
                r.roots_mod_p2().count()
            );
            for c in r.roots_mod_p() {
                out.push_str(&format!("m={} mu={} mod_p=true mod_p2={}\n", c.m, c.mu, flag(c.passes_mod_p2)));
            }
            out
        }
        Format::Json => json(&r) + "\n",
        Format::Csv => {
            let mut out = String::from("m,mu,passes_mod_p,passes_mod_p2\n");
            for c in &r.candidates {
                out.push_str(&format!("{},{},{},{}\n", c.m, c.mu, c.passes_mod_p, flag(c.passes_mod_p2)));
            }
            out
        }
    })
}

fn cmd_inertial(cfg: &CliConfig) -> Outcome {
    let r = principality_test(&cfg.params()?, cfg.q.expect("validated"))?;
    let verdict = if r.principal { "p-principal" } else { "not shown p-principal" };
    Ok(match cfg.format {
        Format::Text => {
            let mut out = format!("p={} q={} f={} m={} P_1 coefficients={:?}\n", r.p, r.q, r.f, r.m, r.coeffs);
            for (l, s) in &r.sums {
                out.push_str(&format!("l={l} sum mod p={s}{}\n", if *s == 0 { " (zero)" } else { "" }));
            }
            out.push_str(&format!("verdict: {verdict}\n"));
            out
        }
        Format::Json => json(&r) + "\n",
        Format::Csv => {
            let mut out = String::from("l,sum_mod_p\n");
            for (l, s) in &r.sums {
                out.push_str(&format!("{l},{s}\n"));
            }
            out
        }
    })
}

fn cmd_verify(cfg: &CliConfig) -> Outcome {
    let report = run_suite(cfg.seed, cfg.jobs)?;
    let mut out = String::new();
    match cfg.format {
        Format::Text => {
            out.push_str(&format!(
                "scan p < 500: {} records, {} mismatches against the reference table, {:.2}s\n",
                report.scan.records.len(),
                report.scan.mismatches.len(),
                report.scan.elapsed.as_secs_f64()
            ));
            for m in &report.scan.mismatches {
                out.push_str(&format!("{m}\n"));
            }
            let mut names: Vec<&str> = report.checks.iter().map(|c| c.theorem).collect();
            names.sort_unstable();
            names.dedup();
            for name in names {
                let of: Vec<&Check> = report.checks.iter().filter(|c| c.theorem == name).collect();
                let held = of.iter().filter(|c| c.holds).count();
                out.push_str(&format!("{name}: {held}/{} hold\n", of.len()));
            }
            let failures: Vec<&Check> = report.failures().collect();
            out.push_str(&lines(failures.iter().map(|c| c.to_text_line())));
        }
        Format::Json | Format::Csv => {
            out.push_str(&checks_output(&report.checks, cfg.format));
        }
    }
    if report.ok() {
        Ok(out)
    } else {
        let failures = report.failures().count();
        let first = report.failures().next().map(|c| c.to_text_line()).unwrap_or_default();
        let summary = format!(
            "verify: {} mismatches, {failures} failing checks{}",
            report.scan.mismatches.len(),
            if first.is_empty() { String::new() } else { format!("; first: {first}") }
        );
        Err(Failure::Mismatch { body: out, summary })
    }
}

fn emit(cfg: &CliConfig, text: &str) -> Result<(), String> {
    match &cfg.out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn run(cfg: &CliConfig) -> Outcome {
    match cfg.command {
        CommandKind::Scan => cmd_scan(cfg),
        CommandKind::Gcd => cmd_gcd(cfg),
        CommandKind::Quad => cmd_quad(cfg),
        CommandKind::Biquad => cmd_biquad(cfg),
        CommandKind::Psquare => cmd_psquare(cfg),
        CommandKind::Inertial => cmd_inertial(cfg),
        CommandKind::Verify => cmd_verify(cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let cfg = match CliConfig::from_cli(cli) {
        Ok(cfg) => cfg,
        Err(Failure::Usage(msg)) | Err(Failure::Mismatch { summary: msg, .. }) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    match run(&cfg) {
        Ok(text) => match emit(&cfg, &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Mismatch { body, summary }) => {
            if let Err(msg) = emit(&cfg, &body) {
                eprintln!("error: {msg}");
                return ExitCode::from(1);
            }
            eprintln!("{summary}");
            ExitCode::from(2)
        }
    }
}
