//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::builders::{
    build_sl3, build_sl5z, build_so32, congruence_order, default_sl3_rotations, default_so32_rotations,
    lattice_generator, power_scale, Axis, Configuration, PlaneRotation, RotationParam,
};
use crate::certify::{certify_configuration, conjugacy_fingerprint, faithfulness_smoke};
use crate::exactfield::json::element_to_json;
use crate::exactfield::{FieldElement, Rational};

#[derive(Parser, Debug)]
#[command(name = "raag-flats", version, about = "Exact RAAG representations from configurations of flats")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Power generators: one exponent for all vertices, or a comma-separated list.
    #[arg(long)]
    exps: Option<String>,
    /// Certify the configuration and print the certificate.
    #[arg(long)]
    certify: bool,
    /// Write the configuration JSON here.
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Five-cycle in SL(3, R).
    BuildSl3 {
        /// Rotation about x: `default` or `c:EXPR,s:EXPR`.
        #[arg(long, default_value = "default")]
        r1: String,
        /// Rotation about y.
        #[arg(long, default_value = "default")]
        r2: String,
        #[command(flatten)]
        out: Output,
    },
    /// Six-cycle in SO(3, 2).
    BuildSo32 {
        #[arg(long, default_value = "default")]
        r1: String,
        #[arg(long, default_value = "default")]
        r2: String,
        #[arg(long, default_value = "default")]
        r3: String,
        #[command(flatten)]
        out: Output,
    },
    /// Five-cycle in SL(5, Z).
    BuildSl5z {
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        out: Output,
    },
    /// Certify a configuration JSON file.
    Certify {
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check that short reduced words map to non-identity matrices.
    Smoke {
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        syllables: usize,
        #[arg(long, default_value_t = 1)]
        bound: i64,
    },
    /// Characteristic polynomials of the generators.
    Fingerprint { input: PathBuf },
    /// Orders of the lattice generators modulo a prime.
    Congruence {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        p: u64,
    },
    /// Write a construction with default parameters.
    Emit {
        #[arg(value_enum)]
        construction: Construction,
        #[arg(long, default_value_t = 2)]
        n: i64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Construction {
    Sl3,
    So32,
    Sl5z,
}

/// Input or usage problem, reported with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn parse_rational(s: &str) -> Result<Rational, UsageError> {
    s.trim().parse::<Rational>().map_err(|_| UsageError(format!("bad rational `{s}`")))
}

/// Parses `q` or `q*rP` terms joined by `+`, e.g. `1/2*r3` or `1/4*r6+-1/4*r2`.
/// `rP` stands for `√P` with `P ≥ 0` rational.
pub fn parse_element(s: &str) -> Result<FieldElement, String> {
    let mut acc = FieldElement::zero();
    for term in s.split('+') {
        let mut factors = term.split('*');
        let q = parse_rational(factors.next().unwrap_or("")).map_err(|e| e.0)?;
        let mut x = FieldElement::from_rational(q);
        for f in factors {
            let radicand = f
                .trim()
                .strip_prefix('r')
                .ok_or_else(|| format!("bad radical `{f}` in `{s}`"))
                .and_then(|d| parse_rational(d).map_err(|e| e.0))?;
            x = &x * &FieldElement::sqrt_rational(&radicand).map_err(|e| format!("`{f}` in `{s}`: {e}"))?;
        }
        acc = &acc + &x;
    }
    Ok(acc)
}

/// `c:EXPR,s:EXPR[,rad:P…]`; `rad` entries restrict which radicals may appear.
pub fn parse_rotation(token: &str) -> Result<PlaneRotation, String> {
    let (mut c, mut s, mut allowed) = (None, None, Vec::new());
    for part in token.split(',') {
        let (key, value) = part.split_once(':').ok_or_else(|| format!("expected key:value in `{part}`"))?;
        match key.trim() {
            "c" => c = Some(parse_element(value)?),
            "s" => s = Some(parse_element(value)?),
            "rad" => allowed.push(value.trim().parse::<u64>().map_err(|_| format!("bad radical `{value}`"))?),
            other => return Err(format!("unknown key `{other}` in rotation `{token}`")),
        }
    }
    let (c, s) = (c.ok_or("rotation needs c:")?, s.ok_or("rotation needs s:")?);
    if !allowed.is_empty() {
        let used = c.basis().union(&s.basis());
        if let Some(p) = used.primes().iter().find(|p| !allowed.contains(p)) {
            return Err(format!("radical {p} not declared by rad:"));
        }
    }
    PlaneRotation::new(c, s).map_err(|e| e.to_string())
}

fn rotation_or(token: &str, default: PlaneRotation) -> Result<PlaneRotation, UsageError> {
    if token == "default" {
        Ok(default)
    } else {
        parse_rotation(token).map_err(UsageError)
    }
}

fn parse_exps(s: &str, n: usize) -> Result<Vec<u32>, UsageError> {
    let parsed = s
        .split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| UsageError(format!("--exps: bad exponent `{x}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    match parsed.as_slice() {
        [k] => Ok(vec![*k; n]),
        list if list.len() == n => Ok(parsed),
        _ => Err(UsageError(format!("--exps: expected 1 or {n} exponents, got {}", parsed.len()))),
    }
}

fn render(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn write_to(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), UsageError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| UsageError(format!("{}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(UsageError::from),
    }
}

fn load(path: &Path) -> Result<Configuration, UsageError> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    Configuration::from_json(&value).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn finish_build(config: Configuration, out: &Output, stdout: &mut dyn Write) -> Result<i32, UsageError> {
    let config = match &out.exps {
        Some(s) => power_scale(&config, &parse_exps(s, config.graph().vertex_count())?)?,
        None => config,
    };
    if let Some(path) = &out.emit {
        write_to(Some(path), &render(&config.to_json()), stdout)?;
    }
    if out.certify {
        let cert = certify_configuration(&config);
        write_to(None, &render(&cert.to_json()), stdout)?;
        return Ok(if cert.verdict.is_pass() { 0 } else { 1 });
    }
    if out.emit.is_none() {
        write_to(None, &render(&config.to_json()), stdout)?;
    }
    Ok(0)
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<i32, UsageError> {
    match cli.command {
        Command::BuildSl3 { r1, r2, out } => {
            let (d1, d2) = default_sl3_rotations();
            let r1 = RotationParam { axis: Axis::X, rotation: rotation_or(&r1, d1.rotation)? };
            let r2 = RotationParam { axis: Axis::Y, rotation: rotation_or(&r2, d2.rotation)? };
            finish_build(build_sl3(&r1, &r2)?, &out, stdout)
        }
        Command::BuildSo32 { r1, r2, r3, out } => {
            let (d1, d2, d3) = default_so32_rotations();
            let config = build_so32(&rotation_or(&r1, d1)?, &rotation_or(&r2, d2)?, &rotation_or(&r3, d3)?)?;
            finish_build(config, &out, stdout)
        }
        Command::BuildSl5z { n, out } => finish_build(build_sl5z(n)?, &out, stdout),
        Command::Certify { input, output } => {
            let cert = certify_configuration(&load(&input)?);
            write_to(output.as_deref(), &render(&cert.to_json()), stdout)?;
            Ok(if cert.verdict.is_pass() { 0 } else { 1 })
        }
        Command::Smoke { input, syllables, bound } => {
            let report = faithfulness_smoke(&load(&input)?, syllables, bound);
            let v = json!({
                "words_checked": report.words_checked,
                "all_nonidentity": report.all_nonidentity,
                "counterexample": report.counterexample.map(|w| w.to_string()),
                "prime": report.prime,
            });
            write_to(None, &render(&v), stdout)?;
            Ok(if report.all_nonidentity { 0 } else { 1 })
        }
        Command::Fingerprint { input } => {
            let polys: Vec<Value> = conjugacy_fingerprint(&load(&input)?)
                .iter()
                .map(|p| p.iter().map(|x| element_to_json(x, &x.basis())).collect())
                .collect();
            write_to(None, &render(&json!({ "char_polys": polys })), stdout)?;
            Ok(0)
        }
        Command::Congruence { n, p } => {
            let orders = (1..=5)
                .map(|i| Ok(json!({"generator": format!("A{i}"), "order": congruence_order(&lattice_generator(i, n), p)?})))
                .collect::<Result<Vec<_>, UsageError>>()?;
            write_to(None, &render(&json!({"n": n, "p": p, "orders": orders})), stdout)?;
            Ok(0)
        }
        Command::Emit { construction, n, output } => {
            let config = match construction {
                Construction::Sl3 => {
                    let (r1, r2) = default_sl3_rotations();
                    build_sl3(&r1, &r2)?
                }
                Construction::So32 => {
                    let (r1, r2, r3) = default_so32_rotations();
                    build_so32(&r1, &r2, &r3)?
                }
                Construction::Sl5z => build_sl5z(n)?,
            };
            write_to(output.as_deref(), &render(&config.to_json()), stdout)?;
            Ok(0)
        }
    }
}

/// Parses arguments and runs the command. Returns the process exit code:
/// 0 on success, 1 when a certificate or smoke check fails, 2 on usage or input errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 2;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}
