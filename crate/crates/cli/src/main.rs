//! `crjet`: verify the identity catalog, normalize expressions, check the
//! sum-of-squares coefficients and the explicit Yamabe solution.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crjet_core::identities::{
    check_positivity, compile_catalog, id_matches, run_catalog, third_order_identity_check, verify_sos_chain, OracleOptions,
    VerificationReport, VerifyOptions, SOS_S0_ID, SOS_S1_ID,
};
use crjet_core::oracle::{check_yamabe_solves, Complex, YamabeParams};
use crjet_core::parser::{parse_expression, print, Catalog, ParseOptions};
use crjet_core::scalar::parse_rational;
use crjet_core::{normalize, Definitions, Rational, RewriteConfig, TensorName, Var};

#[derive(Parser, Debug)]
#[command(name = "crjet", version, about = "Exact jet calculus on the Heisenberg group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for every randomized check.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Include wall-clock times in the output.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// One JSON object per line.
    Records,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify catalog identities symbolically and at random jet points.
    Verify(VerifyArgs),
    /// Print the canonical form of an expression.
    Normalize(NormalizeArgs),
    /// Check positivity of the sum-of-squares coefficients on an exact grid.
    Positivity(PositivityArgs),
    /// Check that the explicit Yamabe solution solves the critical equation.
    Yamabe(YamabeArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Glob on case ids (`*` and `?`).
    #[arg(default_value = "*")]
    filter: String,
    /// Catalog file; the builtin catalog when absent.
    #[arg(long, env = "CRJET_CATALOG")]
    catalog: Option<PathBuf>,
    /// Fix an indeterminate before normalizing, e.g. `p=0`. Repeatable.
    #[arg(long = "set", value_parser = parse_assignment)]
    set: Vec<(Var, Rational)>,
    /// Dimensions for the numeric oracle, comma separated.
    #[arg(long = "n", value_delimiter = ',', default_values_t = [1u8, 2])]
    n_values: Vec<u8>,
    /// Random jet points per dimension (each draws its own `p` and `s`).
    #[arg(long, default_value_t = 20)]
    points: usize,
    /// Skip the numeric oracle.
    #[arg(long)]
    no_oracle: bool,
    /// Abort normalization beyond this many monomials.
    #[arg(long)]
    term_cap: Option<usize>,
    /// Flip the sign of one summand of a tensor builder, e.g. `D1:0`.
    #[arg(long, value_parser = parse_flip)]
    flip: Option<(TensorName, usize)>,
}

#[derive(Args, Debug)]
struct NormalizeArgs {
    expression: String,
    /// Reduce Hessian traces with the equation (the default).
    #[arg(long, overrides_with = "no_pde")]
    pde: bool,
    /// Use only the commutation rules.
    #[arg(long)]
    no_pde: bool,
    #[arg(long = "set", value_parser = parse_assignment)]
    set: Vec<(Var, Rational)>,
    #[arg(long)]
    term_cap: Option<usize>,
}

#[derive(Args, Debug)]
struct PositivityArgs {
    #[arg(long, default_value_t = 100)]
    n_max: u32,
    /// Number of `p` values `−2k/(samples+1)` in `(−2, 0)`.
    #[arg(long, default_value_t = 199)]
    samples: u32,
}

#[derive(Args, Debug)]
struct YamabeArgs {
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Complex rational, e.g. `i`, `1/2+3i`.
    #[arg(long, default_value = "i", value_parser = parse_complex)]
    lambda: Complex,
    /// Comma-separated complex rationals; a single value is used for every
    /// component.
    #[arg(long, default_value = "0", value_delimiter = ',', value_parser = parse_complex)]
    mu: Vec<Complex>,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 50)]
    points: usize,
}

fn parse_assignment(s: &str) -> Result<(Var, Rational), String> {
    let (name, value) = s.split_once('=').ok_or("expected VAR=VALUE")?;
    let v = Var::from_name(name.trim()).ok_or_else(|| format!("unknown indeterminate '{name}'"))?;
    let x = parse_rational(value).ok_or_else(|| format!("bad rational '{value}'"))?;
    Ok((v, x))
}

fn parse_flip(s: &str) -> Result<(TensorName, usize), String> {
    let (name, k) = s.split_once(':').ok_or("expected NAME:SUMMAND")?;
    let t: TensorName = name.parse()?;
    let k: usize = k.parse().map_err(|_| format!("bad summand '{k}'"))?;
    if k >= t.summands() {
        return Err(format!("{t} has {} summands", t.summands()));
    }
    Ok((t, k))
}

/// `a`, `bi`, `a+bi`, `a-bi` with rational parts; `i` alone is `1i`.
fn parse_complex(s: &str) -> Result<Complex, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("bad complex number '{s}'");
    let part = |t: &str| -> Result<Rational, String> {
        match t {
            "" | "+" => Ok(Rational::from_integer(1.into())),
            "-" => Ok(Rational::from_integer((-1).into())),
            _ => parse_rational(t).ok_or_else(bad),
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex::real(parse_rational(&s).ok_or_else(bad)?));
    };
    // split at the last sign that is not leading
    match body.char_indices().rev().find(|(k, c)| *k > 0 && (*c == '+' || *c == '-')) {
        Some((k, _)) => Ok(Complex::new(parse_rational(&body[..k]).ok_or_else(bad)?, part(&body[k..])?)),
        None => Ok(Complex::new(Rational::from_integer(0.into()), part(body)?)),
    }
}

/// `println!` that stops quietly when stdout is closed (`crjet … | head`).
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout(), $($t)*).is_err() {
            std::process::exit(141);
        }
    }};
}

enum Failure {
    Usage(String),
    Checks,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(&cli, a),
        Command::Normalize(a) => cmd_normalize(a),
        Command::Positivity(a) => cmd_positivity(&cli, a),
        Command::Yamabe(a) => cmd_yamabe(&cli, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn emit_record(cli: &Cli, v: impl serde::Serialize) {
    let mut v = serde_json::to_value(v).expect("serializable");
    if !cli.timings {
        if let Value::Object(m) = &mut v {
            m.remove("wall_ms");
        }
    }
    say!("{v}");
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Result<(), Failure> {
    let cat = match &a.catalog {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Catalog::parse(&text).map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))?
        }
        None => Catalog::builtin(),
    };
    let defs = match a.flip {
        Some((t, k)) => Definitions::with_flip(t, k),
        None => Definitions::standard(),
    };
    let parse = ParseOptions { defs, ..ParseOptions::default() };
    let mut rewrite = RewriteConfig::default();
    if let Some(cap) = a.term_cap {
        rewrite.max_terms = cap;
    }
    if a.n_values.iter().any(|&n| n == 0 || n > 9) {
        return Err(Failure::Usage("oracle dimensions must be between 1 and 9".into()));
    }
    let oracle = (!a.no_oracle).then(|| OracleOptions { n_values: a.n_values.clone(), points: a.points, seed: cli.seed });
    let opts = VerifyOptions { rewrite, set: a.set.clone(), oracle };

    let cases = compile_catalog(&cat, &parse).map_err(|e| Failure::Usage(e.to_string()))?;
    let selected: Vec<_> = cases.into_iter().filter(|c| id_matches(&a.filter, &c.id)).collect();
    let mut reports: Vec<VerificationReport> = run_catalog(&selected, &opts);
    // checks outside the catalog grammar
    if [SOS_S0_ID, SOS_S1_ID].iter().any(|id| id_matches(&a.filter, id)) {
        let sos_opts = VerifyOptions { oracle: None, ..opts.clone() };
        let chain = verify_sos_chain(&cat, &parse, &sos_opts).map_err(|e| Failure::Usage(e.to_string()))?;
        reports.extend(chain.into_iter().filter(|r| (r.id == SOS_S0_ID || r.id == SOS_S1_ID) && id_matches(&a.filter, &r.id)));
    }
    if id_matches(&a.filter, "eq2.12.direct") {
        reports.push(third_order_identity_check(true));
    }
    if reports.is_empty() {
        return Err(Failure::Usage(format!("no case matches '{}'", a.filter)));
    }
    reports.sort_by(|x, y| x.id.cmp(&y.id));

    let failed = reports.iter().filter(|r| !r.ok()).count();
    for r in &reports {
        match cli.format {
            Format::Records => emit_record(cli, r),
            Format::Text => {
                let status = if r.ok() { "PASS" } else { "FAIL" };
                let mut line = format!("{status} {:<20} lhs={} rhs={} residual={}", r.id, r.lhs_terms, r.rhs_terms, r.residual_terms);
                if let Some(o) = &r.oracle {
                    let dims: Vec<String> = o.n_values.iter().map(|n| n.to_string()).collect();
                    line += &format!(
                        " oracle[n={} x{}] nonzero={}{}",
                        dims.join(","),
                        o.points,
                        o.nonzero,
                        if o.agrees { "" } else { " DISAGREES" }
                    );
                }
                if cli.timings {
                    line += &format!(" {}ms", r.wall_ms);
                }
                say!("{line}");
                if let Some(e) = &r.error {
                    say!("    error: {e}");
                }
                if !r.residual.is_empty() {
                    say!("    residual: {}", r.residual);
                }
            }
        }
    }
    if cli.format == Format::Text {
        say!("{} of {} checks passed", reports.len() - failed, reports.len());
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_normalize(a: &NormalizeArgs) -> Result<(), Failure> {
    let mut cfg = RewriteConfig::with_pde(!a.no_pde || a.pde);
    if let Some(cap) = a.term_cap {
        cfg.max_terms = cap;
    }
    let mut e = parse_expression::<Rational>(&a.expression, &ParseOptions::default()).map_err(|e| Failure::Usage(e.to_string()))?;
    for (v, x) in &a.set {
        e = e.specialize(*v, x);
    }
    let n = normalize(&e, &cfg).map_err(|e| Failure::Usage(e.to_string()))?;
    say!("{}", print(&n));
    Ok(())
}

fn cmd_positivity(cli: &Cli, a: &PositivityArgs) -> Result<(), Failure> {
    if a.n_max < 1 {
        return Err(Failure::Usage("--n-max must be at least 1".into()));
    }
    if a.samples < 2 {
        return Err(Failure::Usage("--samples must be at least 2".into()));
    }
    let r = check_positivity(a.n_max, a.samples);
    match cli.format {
        Format::Records => emit_record(cli, &r),
        Format::Text => {
            say!("{} grid points, n = 1..{}, {} p-samples in (-2, 0)", r.grid_points, r.n_max, r.samples);
            for c in &r.certificate {
                let open = if c.needs_open_interval { " (zero constant at p = -2)" } else { "" };
                say!(
                    "  {} = {}: p=0 -> {}, p=-2 -> {}  {}{open}",
                    c.name,
                    c.numerator,
                    c.at_p0,
                    c.at_p_minus2,
                    if c.holds { "ok" } else { "FAILS" }
                );
            }
            for (k, v) in &r.probes {
                say!("  {k} = {v}");
            }
            let tail: Vec<String> = r.c3_boundary.iter().map(|(p, c)| format!("{p}: {c}")).collect();
            say!("  c3 near p = -2 (n = 1): {}", tail.join("; "));
            for f in r.failures.iter().take(20) {
                say!("  FAIL n={} p={} {} = {}", f.n, f.p, f.coefficient, f.value);
            }
            say!("{}", if r.passed { "PASS" } else { "FAIL" });
        }
    }
    if r.passed {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_yamabe(cli: &Cli, a: &YamabeArgs) -> Result<(), Failure> {
    let mu = match a.mu.len() {
        1 => vec![a.mu[0].clone(); a.n],
        k if k == a.n => a.mu.clone(),
        k => return Err(Failure::Usage(format!("--mu has {k} components, expected 1 or {}", a.n))),
    };
    let params = YamabeParams::new(a.c, a.lambda.clone(), mu).map_err(|e| Failure::Usage(e.to_string()))?;
    let r = check_yamabe_solves(&params, a.points, cli.seed).map_err(|e| Failure::Usage(e.to_string()))?;
    match cli.format {
        Format::Records => emit_record(cli, &r),
        Format::Text => {
            say!("n = {}, C = {}, {} points", r.n, r.c, r.samples);
            say!("  -Δu/u^q* = {:.15} (spread {:.2e}, imaginary {:.2e})", r.ratio, r.spread, r.imaginary);
            match r.solved_c {
                Some(c) => say!("  C = {c:.15} gives 2n² = {} (error {:.2e})", r.target, r.solved_error),
                None => say!("  no positive C gives 2n² = {}", r.target),
            }
            say!("  transformed equation at p = 0: residual {:.2e}", r.transform_residual);
            if let Some([x, y]) = &r.discrepant {
                say!("  most discrepant: {x} | {y}");
            }
            say!("{}", if r.passed { "PASS" } else { "FAIL" });
        }
    }
    if r.passed {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}
