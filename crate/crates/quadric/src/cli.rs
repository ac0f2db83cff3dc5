//! The `quadric` command line.
//!
//! Exit codes: 0 when every check of the command passes, 1 when a check
//! fails, 2 for invalid arguments or parameters (and for resonant data
//! under `--strict`).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use quadric_core::bo::{self, BTables, MainLemmaOptions};
use quadric_core::complexes::GradedFilteredComplex;
use quadric_core::floer::{self, HamiltonianParams, LPlus};
use quadric_core::linalg::{format_rational, int, parse_rational, Rational};
use quadric_core::{quantum, semitoric};
use serde_json::{json, Value};

use crate::document::{complex_from_json, complex_to_json};
use crate::report::{Envelope, SpectralDump};
use crate::svg::moment_svg;
use crate::table::{area_csv, area_table, b_grid, b_homology_csv};

#[derive(Debug, Parser)]
#[command(name = "quadric", version, about = "Exact Floer-complex and semitoric computations on S2 x S2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Treat resonant parameters as invalid.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Record wall time in JSON reports.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Svg,
}

fn parse_signs(s: &str) -> Result<(i64, i64), String> {
    let sign = |t: &str| match t.trim() {
        "1" | "+1" | "+" => Ok(1),
        "-1" | "-" => Ok(-1),
        other => Err(format!("{other} is not a sign")),
    };
    let (a, b) = s.split_once(',').ok_or("expected two comma-separated signs")?;
    Ok((sign(a)?, sign(b)?))
}

fn parse_q(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A real given as `p/q` or as a decimal.
fn parse_real(s: &str) -> Result<f64, String> {
    match parse_rational(s) {
        Ok(q) => q.to_f64().ok_or_else(|| format!("{s} does not fit in f64")),
        Err(_) => s.parse::<f64>().map_err(|e| format!("{s}: {e}")),
    }
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long = "r", default_value = "2/5", value_parser = parse_q, allow_hyphen_values = true)]
    pub r: Rational,
    #[arg(long = "eps", default_value = "1/100", value_parser = parse_q, allow_hyphen_values = true)]
    pub eps: Rational,
    #[arg(long = "E", default_value = "100", value_parser = parse_q, allow_hyphen_values = true)]
    pub energy: Rational,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate generators of CZ 1..3 and check the action window lemma.
    Generators {
        #[command(flatten)]
        params: ParamArgs,
        /// Largest multiplicity enumerated (default: automatic).
        #[arg(long)]
        k_limit: Option<u64>,
    },
    /// Homology of (B, d0) in degrees 0..=j-max.
    HomologyB {
        #[arg(long, default_value_t = 40)]
        j_max: i64,
        #[arg(long)]
        k_max: Option<u64>,
    },
    /// Full verification of H2 = Q for QB/QB^(mu).
    MainLemma {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1)]
        mu: u32,
        #[arg(long)]
        k_max: Option<u64>,
        #[arg(long, default_value_t = 3)]
        max_page: u32,
        /// Skip the action-window check.
        #[arg(long)]
        no_squeeze: bool,
        /// Signs of d1 on the m-check and M-check rows, e.g. `1,-1`.
        #[arg(long, value_parser = parse_signs, allow_hyphen_values = true)]
        d1_signs: Option<(i64, i64)>,
    },
    /// Pages of the t-filtration spectral sequence.
    Spectral {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 3)]
        mu: u32,
        #[arg(long)]
        k_max: Option<u64>,
        #[arg(long, default_value_t = 3)]
        max_page: u32,
        /// Read the complex from a JSON document instead of building QB.
        #[arg(long)]
        complex: Option<PathBuf>,
        /// Also write the complex as a JSON document.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Solutions of the index and Chern number constraints.
    IndexCases,
    /// Idempotents and ring laws of QH4.
    Quantum,
    /// Classify the fiber N_{a,b} of the moment map.
    Fiber {
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true)]
        b: f64,
        /// Points sampled for the involution certificate.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sigma-area enclosed by alpha_b.
    AlphaArea {
        #[arg(long, value_parser = parse_real, allow_hyphen_values = true, conflicts_with = "grid")]
        b: Option<f64>,
        /// Tabulate on this many evenly spaced b in (-1, 1).
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Sample the moment image and draw it.
    MomentSvg {
        #[arg(long, default_value_t = 20000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        bins: usize,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("format {0:?} is not available for this command")]
    Format(Format),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// What a command produced, before formatting.
pub struct Outcome {
    pub command: &'static str,
    pub params: Value,
    pub bounds: Value,
    pub passed: bool,
    pub warnings: Vec<String>,
    pub report: Value,
    pub text: String,
    pub csv: Option<String>,
    pub svg: Option<String>,
    pub default_format: Format,
}

impl Outcome {
    fn new(command: &'static str, passed: bool, report: Value, text: String) -> Self {
        Self {
            command,
            params: Value::Object(Default::default()),
            bounds: Value::Object(Default::default()),
            passed,
            warnings: Vec::new(),
            report,
            text,
            csv: None,
            svg: None,
            default_format: Format::Text,
        }
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn hamiltonian(p: &ParamArgs, strict: bool, warnings: &mut Vec<String>) -> Result<HamiltonianParams, CliError> {
    let h = HamiltonianParams::new(p.r.clone(), p.eps.clone(), p.energy.clone()).map_err(|e| CliError::Invalid(e.to_string()))?;
    let res = h.resonances();
    if !res.is_empty() {
        let msg = res.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
        if strict {
            return Err(CliError::Invalid(format!("resonant parameters: {msg}")));
        }
        warnings.push(format!("resonant parameters: {msg}"));
    }
    Ok(h)
}

fn params_json(p: &HamiltonianParams) -> Value {
    json!({ "r": format_rational(&p.r), "eps": format_rational(&p.eps), "E": format_rational(&p.energy) })
}

fn bo_err(e: bo::BoError) -> CliError {
    CliError::Invalid(e.to_string())
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let mut warnings = Vec::new();
    let mut out = match &cli.command {
        Command::Generators { params, k_limit } => {
            let p = hamiltonian(params, cli.strict, &mut warnings)?;
            let limit = k_limit.unwrap_or_else(|| floer::enumeration_limit(&p));
            let report = floer::verify_lemma0_to(&p, limit);
            let mut text = format!(
                "k_limit {}, {} generators, kappa {}, mu- {}, mu+ {}\n",
                report.k_limit,
                report.generators,
                format_rational(&report.mu_window.kappa),
                report.mu_window.mu_minus,
                report.mu_window.mu_plus
            );
            for c in &report.clauses {
                let _ = writeln!(text, "{} {:<9} {} ({} checked, {} violations)", mark(c.passed()), c.name, c.statement, c.checked, c.violations);
            }
            let mut o = Outcome::new("generators", report.passed(), to_value(&report), text);
            o.params = params_json(&p);
            o.bounds = json!({ "k_limit": limit, "cz": [1, 3] });
            o
        }
        Command::HomologyB { j_max, k_max } => {
            let table = match k_max {
                Some(k) => bo::homology_of_b_with(*j_max, *k),
                None => bo::homology_of_b(*j_max),
            }
            .map_err(bo_err)?;
            let mut text = String::new();
            for r in &table.rows {
                let _ = writeln!(text, "{} H_{:<3} dim {}  {}  (expected {})", mark(r.dimension == 1 && r.matches), r.degree, r.dimension, r.representative, r.expected);
            }
            let mut o = Outcome::new("homology-b", table.passed(), to_value(&table), text);
            o.csv = Some(b_homology_csv(&table).map_err(|e| CliError::Invalid(e.to_string()))?);
            o.bounds = json!({ "j_max": table.j_max, "k_max": table.k_max, "degree_ceiling": table.degree_ceiling });
            o
        }
        Command::MainLemma { params, mu, k_max, max_page, no_squeeze, d1_signs } => {
            let p = hamiltonian(params, cli.strict, &mut warnings)?;
            let tables = match d1_signs {
                Some((a, b)) => BTables::with_signs(int(*a), int(*b)),
                None => BTables::default(),
            };
            let opts = MainLemmaOptions { k_max: *k_max, max_page: *max_page, squeeze: !no_squeeze, tables };
            let report = bo::verify_main_lemma_with(*mu, &p, &opts).map_err(bo_err)?;
            let mut text = format!(
                "mu {}, k_max {}, {} elements, degrees <= {}\nH2 dim {} generated by x2: {}  [{}]\ndegeneration page {}\n",
                report.mu,
                report.k_max,
                report.elements,
                report.degree_ceiling,
                report.h2_dimension,
                report.generated_by_x2,
                report.h2_representative,
                report.degeneration_page
            );
            for c in &report.checks {
                let _ = writeln!(text, "{} {:<24} {}", mark(c.passed), c.name, c.detail);
            }
            let mut o = Outcome::new("main-lemma", report.passed(), to_value(&report), text);
            o.params = params_json(&p);
            o.params["mu"] = json!(mu);
            if let Some((a, b)) = d1_signs {
                o.params["d1_signs"] = json!([a, b]);
            }
            o.bounds = json!({ "k_max": report.k_max, "degree_ceiling": report.degree_ceiling, "max_page": max_page });
            o
        }
        Command::Spectral { params, mu, k_max, max_page, complex, export } => {
            let (c, params_value, bounds): (GradedFilteredComplex, Value, Value) = match complex {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    let c = complex_from_json(&text).map_err(|e| CliError::Invalid(e.to_string()))?;
                    (c, json!({ "complex": path.display().to_string() }), json!({ "max_page": max_page }))
                }
                None => {
                    let p = hamiltonian(params, cli.strict, &mut warnings)?;
                    let k = k_max.unwrap_or(2 * *mu as u64 + 2);
                    let qb = bo::assemble_qb(k, *mu, &p).map_err(bo_err)?;
                    let mut pj = params_json(&p);
                    pj["mu"] = json!(mu);
                    (qb.complex, pj, json!({ "k_max": k, "degree_ceiling": qb.degrees.1, "max_page": max_page }))
                }
            };
            if let Some(path) = export {
                std::fs::write(path, complex_to_json(&c))?;
            }
            let ss = c.spectral_sequence(*max_page).map_err(|e| CliError::Invalid(e.to_string()))?;
            let betti = c.betti_numbers().map_err(|e| CliError::Invalid(e.to_string()))?;
            let dump = SpectralDump::from(&ss);
            let agrees = betti.iter().all(|(j, d)| dump.limit_totals.get(j).copied().unwrap_or(0) == *d);
            let mut text = format!("levels {}..{}, degeneration page {}\n", dump.min_level, dump.max_level, dump.degeneration_page);
            for page in &dump.pages {
                let _ = writeln!(text, "E{}: {:?}", page.r, page.totals);
            }
            let _ = writeln!(text, "{} limit equals homology {:?}", mark(agrees && ss.rank_consistent), betti);
            let mut o = Outcome::new("spectral", agrees && ss.rank_consistent, json!({ "spectral": dump, "betti": betti }), text);
            o.params = params_value;
            o.bounds = bounds;
            o
        }
        Command::IndexCases => {
            let zero = floer::index_case_analysis(LPlus::Zero);
            let one = floer::index_case_analysis(LPlus::AtLeast(1));
            let two = floer::index_case_analysis(LPlus::AtLeast(2));
            let key = |s: &floer::IndexSolution| (s.h, s.delta, s.l_plus, s.l_minus);
            let zero_keys: Vec<_> = zero.iter().map(key).collect();
            let one_keys: Vec<_> = floer::surviving(&one).iter().map(key).collect();
            let checks = [
                ("l+ = 0: three cases and the Morse case", zero_keys == [(-3, 0, 0, 2), (-3, 1, 0, 0), (-1, 0, 0, 1), (1, 0, 0, 0)]),
                ("l+ >= 1: unique survivor", one_keys == [(-1, 0, 1, 0)]),
                ("l+ >= 2: nothing survives", floer::surviving(&two).is_empty()),
            ];
            let mut text = String::new();
            for (name, sols) in [("l+ = 0", &zero), ("l+ >= 1", &one), ("l+ >= 2", &two)] {
                let _ = writeln!(text, "{name}:");
                for s in sols.iter() {
                    let _ = writeln!(
                        text,
                        "  h={:>2} delta={} l+={} l-={} weight={} k+-k-={} {:?}",
                        s.h, s.delta, s.l_plus, s.l_minus, s.weight, s.k_drop, s.flags
                    );
                }
            }
            for (name, ok) in checks {
                let _ = writeln!(text, "{} {name}", mark(ok));
            }
            let passed = checks.iter().all(|c| c.1);
            let report = json!({
                "l_plus_zero": zero,
                "l_plus_at_least_1": one,
                "l_plus_at_least_2": two,
                "checks": checks.iter().map(|(n, ok)| json!({ "name": n, "passed": ok })).collect::<Vec<_>>(),
            });
            Outcome::new("index-cases", passed, report, text)
        }
        Command::Quantum => {
            let checks = quantum::algebra_checks();
            let (ep, em) = quantum::idempotents();
            let mut text = format!("e+ = {ep}\ne- = {em}\n");
            for c in &checks {
                let _ = writeln!(text, "{} {}", mark(c.passed), c.name);
            }
            let report = json!({ "e_plus": ep, "e_minus": em, "pt_square": quantum::derive_pt_square(), "checks": checks });
            Outcome::new("quantum", checks.iter().all(|c| c.passed), report, text)
        }
        Command::Fiber { a, b, samples, seed } => {
            let fiber = semitoric::classify_fiber(*a, *b);
            let cert = semitoric::involution_displaces(*a, *b, *samples, *seed);
            let ok = cert.symbolic && cert.max_error <= semitoric::MANIFOLD_TOL;
            let text = format!(
                "N({a}, {b}): {:?}, displaceability {:?}\ninvolution: displaced {}, {} samples, max error {:.3e}\n",
                fiber.kind, fiber.displaceability, cert.displaced, cert.samples, cert.max_error
            );
            let mut o = Outcome::new("fiber", ok, json!({ "fiber": fiber, "involution": cert }), text);
            o.params = json!({ "a": a, "b": b, "samples": samples, "seed": seed });
            o
        }
        Command::AlphaArea { b, grid } => {
            let bs = match (b, grid) {
                (Some(b), _) => vec![*b],
                (None, Some(n)) => b_grid(*n),
                (None, None) => vec![-0.5],
            };
            let rows = area_table(&bs).map_err(|e| CliError::Invalid(e.to_string()))?;
            let decreasing = rows.windows(2).all(|w| w[1].area < w[0].area);
            let accurate = rows.iter().all(|r| r.error_estimate <= semitoric::QUADRATURE_TOL);
            let text = if rows.len() == 1 {
                format!("{:.10}\n", rows[0].area)
            } else {
                rows.iter().map(|r| format!("{:.6} {:.10}\n", r.b, r.area)).collect()
            };
            let mut o = Outcome::new("alpha-area", decreasing && accurate, json!({ "rows": rows, "decreasing": decreasing }), text);
            o.csv = Some(area_csv(&rows).map_err(|e| CliError::Invalid(e.to_string()))?);
            o.params = json!({ "b": bs });
            o.bounds = json!({ "tolerance": semitoric::QUADRATURE_TOL });
            o
        }
        Command::MomentSvg { samples, seed, bins } => {
            let cloud = semitoric::moment_image_sample_stream(*samples, *seed, 0, *bins);
            let bounded = cloud.points.iter().all(|(f, g)| f.abs() <= 2.0 + 1e-12 && g.abs() <= 1.0 + 1e-12);
            let text = format!("{} points, {} bins, all within |F| <= 2, |G| <= 1: {}\n", cloud.points.len(), cloud.sketch.len(), bounded);
            let mut o = Outcome::new("moment-svg", bounded, json!({ "points": cloud.points.len(), "sketch": cloud.sketch }), text);
            o.svg = Some(moment_svg(&cloud));
            o.default_format = Format::Svg;
            o.params = json!({ "samples": samples, "seed": seed, "bins": bins });
            o
        }
    };
    out.warnings = warnings;
    Ok(out)
}

fn render(cli: &Cli, o: &Outcome, elapsed_ms: f64) -> Result<String, CliError> {
    let format = cli.format.unwrap_or(o.default_format);
    Ok(match format {
        Format::Text => o.text.clone(),
        Format::Json => {
            let mut env = Envelope::new(o.command, o.params.clone(), o.bounds.clone(), o.passed, o.report.clone());
            env.warnings = o.warnings.clone();
            if cli.timing {
                env.wall_time_ms = Some(elapsed_ms);
            }
            env.to_json()
        }
        Format::Csv => o.csv.clone().ok_or(CliError::Format(format))?,
        Format::Svg => o.svg.clone().ok_or(CliError::Format(format))?,
    })
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let start = Instant::now();
    let result = execute(&cli).and_then(|o| {
        let text = render(&cli, &o, start.elapsed().as_secs_f64() * 1e3)?;
        match &cli.out {
            Some(path) => std::fs::write(path, text)?,
            None => stdout.write_all(text.as_bytes())?,
        }
        Ok(o)
    });
    match result {
        Ok(o) => {
            for w in &o.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            if o.passed {
                0
            } else {
                let _ = writeln!(stderr, "{}: checks failed", o.command);
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
