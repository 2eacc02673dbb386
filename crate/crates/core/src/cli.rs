//! Command-line driver. Data goes to stdout (or `--output`), diagnostics to
//! stderr. Exit status 0 on success, 1 on usage errors, 2 when a
//! computation fails.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::contfrac::{ContinuedFraction, Expansion};
use crate::error::Error;
use crate::linforms::{derive_initial_bounds, BoundLedger};
use crate::precision::{parse_decimal, Precision, RealExpr};
use crate::reduction::{FamilyBound, Outcome, Stage};
use crate::repdigits::{check_base, decompose};
use crate::sequences::SequenceKind;
use crate::solver::{reduce_base, solve, SolverReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

/// Smallest accepted `--precision-cap`.
pub const MIN_PRECISION_CAP: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Debug, Parser)]
#[command(name = "pellrep", version, about = "Pell and Pell-Lucas numbers that are concatenations of two repdigits")]
pub struct Cli {
    /// pell or pell-lucas
    #[arg(long, global = true, default_value = "pell", value_parser = parse_kind)]
    pub sequence: SequenceKind,

    #[arg(long, global = true, default_value_t = 2)]
    pub base_min: u32,

    #[arg(long, global = true, default_value_t = 10)]
    pub base_max: u32,

    /// Largest working precision in bits.
    #[arg(long, global = true, env = "PELLREP_PRECISION_CAP")]
    pub precision_cap: Option<u32>,

    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Write data here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full pipeline and solution list.
    Solve,
    /// Initial bounds from linear forms in logarithms.
    Bounds,
    /// Reduced bounds on l1 and n per base.
    Reduce,
    /// Continued fraction of log b / log alpha.
    Contfrac {
        #[arg(long)]
        base: u32,
        /// Number of partial quotients.
        #[arg(long, default_value_t = 20)]
        terms: usize,
        /// Expand past this denominator and report a(M), e.g. 1.17e30.
        #[arg(long)]
        threshold: Option<String>,
    },
    /// Two-block decomposition of one integer.
    Check { n: BigUint, b: u32 },
}

fn parse_kind(s: &str) -> Result<SequenceKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Cli {
    fn precision(&self) -> Precision {
        match self.precision_cap {
            Some(cap) => Precision::with_cap(cap),
            None => Precision::default(),
        }
    }

    fn validate(&self) -> Result<(), String> {
        for b in [self.base_min, self.base_max] {
            check_base(b).map_err(|e| e.to_string())?;
        }
        if self.base_min > self.base_max {
            return Err(format!("--base-min {} exceeds --base-max {}", self.base_min, self.base_max));
        }
        if let Some(cap) = self.precision_cap {
            if cap < MIN_PRECISION_CAP {
                return Err(format!("--precision-cap must be at least {MIN_PRECISION_CAP}"));
            }
        }
        Ok(())
    }
}

/// Parses `args` (program name first), runs, and writes data to stdout or
/// the `--output` file.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    if let Err(msg) = cli.validate() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    let text = match execute(&cli) {
        Ok(text) => text,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => out.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_FAILURE;
    }
    EXIT_OK
}

fn execute(cli: &Cli) -> Result<String, Error> {
    let precision = cli.precision();
    let bases = cli.base_min..=cli.base_max;
    match &cli.command {
        Command::Solve => {
            let report = solve(cli.sequence, bases, &precision)?;
            render_solve(&report, cli.format)
        }
        Command::Bounds => {
            let ledger = derive_initial_bounds(cli.sequence, &precision)?;
            render_bounds(&ledger, bases, cli.format)
        }
        Command::Reduce => {
            let ledger = derive_initial_bounds(cli.sequence, &precision)?;
            let mut families = Vec::new();
            for b in bases {
                let (l1, n) = reduce_base(cli.sequence, b, &ledger, &precision)?;
                families.push(l1);
                families.push(n);
            }
            render_reduce(&families, cli.format)
        }
        Command::Contfrac { base, terms, threshold } => {
            check_base(*base)?;
            let tau = RealExpr::log_ratio(*base);
            let report = match threshold {
                Some(t) => {
                    let m = parse_decimal(t)
                        .map(|r| r.floor().to_integer())
                        .filter(|m| m > &BigInt::from(0))
                        .ok_or_else(|| Error::InvalidParameter(format!("bad threshold {t:?}")))?;
                    let cf = ContinuedFraction::expand_until_q_exceeds(tau, &m, &precision)?;
                    let (index, a) = cf.a_max(&m)?;
                    let mut expansion = cf.to_expansion();
                    expansion.quotients.truncate(index + 1);
                    expansion.convergents.truncate(index + 1);
                    ContfracReport {
                        base: *base,
                        expansion,
                        a_max: Some(AMax { m, index, a }),
                    }
                }
                None => {
                    let mut expansion = ContinuedFraction::expand_terms(tau, *terms, &precision)?.to_expansion();
                    expansion.quotients.truncate(*terms);
                    expansion.convergents.truncate(*terms);
                    ContfracReport {
                        base: *base,
                        expansion,
                        a_max: None,
                    }
                }
            };
            render_contfrac(&report, cli.format)
        }
        Command::Check { n, b } => {
            check_base(*b)?;
            let found = decompose(n, *b).map(|r| CheckResult {
                d1: r.d1,
                l1: r.l1,
                d2: r.d2,
                l2: r.l2,
            });
            render_check(found, cli.format)
        }
    }
}

fn json<T: Serialize>(x: &T) -> Result<String, Error> {
    let mut s = serde_json::to_string_pretty(x).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, Error> {
    let io_err = |e: csv::Error| Error::InvalidParameter(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(&row).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn md_table(out: &mut String, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) {
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
    for row in rows {
        let cells: Vec<_> = row.iter().map(|c| c.replace('|', "\\|")).collect();
        let _ = writeln!(out, "| {} |", cells.join(" | "));
    }
}

fn render_solve(report: &SolverReport, format: Format) -> Result<String, Error> {
    let rows = report.solutions.iter().map(|s| {
        vec![
            s.value.to_string(),
            s.label(),
            format!("{} (base {})", s.repr.digit_string(), s.repr.b),
        ]
    });
    match format {
        Format::Json => json(report),
        Format::Csv => csv_rows(
            &["value", "term", "base", "digits", "d1", "l1", "d2", "l2"],
            report.solutions.iter().map(|s| {
                let r = s.repr;
                vec![
                    s.value.to_string(),
                    s.label(),
                    r.b.to_string(),
                    r.digit_string(),
                    r.d1.to_string(),
                    r.l1.to_string(),
                    r.d2.to_string(),
                    r.l2.to_string(),
                ]
            }),
        ),
        Format::Markdown => {
            let mut out = format!("## {} numbers, bases {}..{}\n\n", report.kind, report.bases.0, report.bases.1);
            md_table(&mut out, &["value", "term", "representation"], rows);
            let _ = writeln!(out, "\nSearched 0 <= n <= {}.\n", report.search_box.n_max);
            md_table(
                &mut out,
                &["b", "l1 <=", "l2 <=", "reduced n <="],
                report.search_box.per_base.iter().map(|b| {
                    vec![
                        b.base.to_string(),
                        b.l1_max.to_string(),
                        b.l2_max.to_string(),
                        b.n_bound.to_string(),
                    ]
                }),
            );
            Ok(out)
        }
    }
}

fn render_bounds(
    ledger: &BoundLedger,
    bases: std::ops::RangeInclusive<u32>,
    format: Format,
) -> Result<String, Error> {
    let mut rows = vec![
        vec!["first leading constant".to_string(), ledger.c_first.hi_sci(4)],
        vec!["second leading constant".to_string(), ledger.c_second.hi_sci(4)],
        vec!["n <".to_string(), ledger.n_max.to_string()],
    ];
    for b in bases {
        rows.push(vec![format!("l1 + l2 <= (base {b})"), ledger.m_for_base(b).to_string()]);
    }
    for c in &ledger.certificates {
        rows.push(vec![c.name.clone(), c.holds.to_string()]);
    }
    match format {
        Format::Json => json(ledger),
        Format::Csv => csv_rows(&["quantity", "value"], rows),
        Format::Markdown => {
            let mut out = format!("## Initial bounds for {} numbers\n\n", ledger.kind);
            md_table(&mut out, &["quantity", "value"], rows);
            Ok(out)
        }
    }
}

fn outcome_columns(o: &Outcome) -> [String; 4] {
    match o {
        Outcome::BakerDavenport(o) => [
            "baker-davenport".into(),
            o.q_used.to_string(),
            o.epsilon.lo_sci(4),
            String::new(),
        ],
        Outcome::Legendre(o) => ["legendre".into(), String::new(), String::new(), o.a_m.to_string()],
    }
}

fn stage_name(s: Stage) -> &'static str {
    match s {
        Stage::L1 => "l1",
        Stage::N => "n",
    }
}

fn render_reduce(families: &[FamilyBound], format: Format) -> Result<String, Error> {
    match format {
        Format::Json => json(&families),
        Format::Csv => csv_rows(
            &["kind", "base", "stage", "d1", "d2", "l1", "method", "q", "epsilon_lo", "a_m", "bound"],
            families.iter().flat_map(|f| {
                f.per_instance.iter().map(move |r| {
                    let opt = |x: Option<u32>| x.map(|v| v.to_string()).unwrap_or_default();
                    let [method, q, eps, a] = outcome_columns(&r.outcome);
                    vec![
                        f.kind.to_string(),
                        f.base.to_string(),
                        stage_name(f.stage).into(),
                        r.d1.to_string(),
                        opt(r.d2),
                        opt(r.l1),
                        method,
                        q,
                        eps,
                        a,
                        r.outcome.w_max().to_string(),
                    ]
                })
            }),
        ),
        Format::Markdown => {
            let mut out = String::new();
            for stage in [Stage::L1, Stage::N] {
                let _ = writeln!(out, "## {} stage\n", stage_name(stage));
                md_table(
                    &mut out,
                    &["b", "q", "epsilon >", "a(M)", "bound"],
                    families.iter().filter(|f| f.stage == stage).map(|f| {
                        let eps = f.weakest_epsilon();
                        let a_m = f.legendre_instances().map(|(_, o)| o.a_m.clone()).max();
                        vec![
                            f.base.to_string(),
                            eps.map(|o| o.q_used.to_string()).unwrap_or_default(),
                            eps.map(|o| o.epsilon.lo_sci(4)).unwrap_or_default(),
                            a_m.map(|a| a.to_string()).unwrap_or_default(),
                            f.bound.to_string(),
                        ]
                    }),
                );
                out.push('\n');
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct AMax {
    #[serde(serialize_with = "crate::serial::bigint")]
    m: BigInt,
    index: usize,
    #[serde(serialize_with = "crate::serial::bigint")]
    a: BigInt,
}

#[derive(Serialize)]
struct ContfracReport {
    base: u32,
    #[serde(flatten)]
    expansion: Expansion,
    #[serde(skip_serializing_if = "Option::is_none")]
    a_max: Option<AMax>,
}

fn render_contfrac(r: &ContfracReport, format: Format) -> Result<String, Error> {
    let rows = || {
        r.expansion
            .quotients
            .iter()
            .zip(&r.expansion.convergents)
            .enumerate()
            .map(|(k, (a, (p, q)))| vec![k.to_string(), a.to_string(), p.to_string(), q.to_string()])
    };
    match format {
        Format::Json => json(r),
        Format::Csv => csv_rows(&["k", "a", "p", "q"], rows()),
        Format::Markdown => {
            let mut out = format!("## {}\n\n", r.expansion.expr);
            md_table(&mut out, &["k", "a_k", "p_k", "q_k"], rows());
            if let Some(a) = &r.a_max {
                let _ = writeln!(out, "\na(M) = {} for M = {} (first q_k > M at k = {})", a.a, a.m, a.index);
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct CheckResult {
    d1: u32,
    l1: u32,
    d2: u32,
    l2: u32,
}

fn render_check(found: Option<CheckResult>, format: Format) -> Result<String, Error> {
    let row = |c: &CheckResult| vec![c.d1.to_string(), c.l1.to_string(), c.d2.to_string(), c.l2.to_string()];
    match format {
        Format::Json => json(&found),
        Format::Csv => csv_rows(&["d1", "l1", "d2", "l2"], found.iter().map(row)),
        Format::Markdown => {
            let mut out = String::new();
            match &found {
                Some(c) => md_table(&mut out, &["d1", "l1", "d2", "l2"], [row(c)]),
                None => out.push_str("not a concatenation of two repdigits\n"),
            }
            Ok(out)
        }
    }
}
