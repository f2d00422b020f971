//! Command dispatch for the `qroot` binary.
//!
//! Every command reads JSON (from `--in` or stdin), writes one JSON document
//! (to `--out` or stdout) and reports through the exit code: 0 on success,
//! 2 when no root exists, 1 on usage errors, numerical errors and failed verification.

use std::ffi::OsString;
use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use qroot::canonical::{canonicalize_pair, Tolerances};
use qroot::json;
use qroot::omega::{default_omega_tol, omega_embed, omega_extract, omega_to_quat, OmegaMatrix};
use qroot::roots::{mth_root, root_exists, RootOptions, RootOutcome};
use qroot::verify::{random_instance, verify_root, EigenClass, Force, Profile};
use qroot::{QrootError, QuatMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO_ROOT: i32 = 2;

/// Residual tolerance used when neither `--tol` nor `QROOT_TOL` is given.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Quaternion matrix (or B/H pair) to its complex representation.
    Embed,
    /// Complex representation back to quaternion form.
    Extract,
    /// Canonical spec and similarity of a B/H pair.
    Canon,
    /// Decide whether an H-selfadjoint m-th root exists.
    Check,
    /// Compute an H-selfadjoint m-th root.
    Root,
    /// Check a root against its B/H pair.
    Verify,
    /// Write a seeded random instance.
    Gen,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Quaternion,
    Omega,
    Spec,
}

#[derive(Debug, Parser)]
#[command(name = "qroot", version, about = "H-selfadjoint m-th roots of quaternion matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Root order (required by check, root and gen).
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Residual tolerance (overrides QROOT_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Branch index for nonreal m-th roots.
    #[arg(long, global = true, default_value_t = 0, allow_negative_numbers = true)]
    branch: i64,
    /// Seed for gen.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Matrix representation of the input (output for embed and gen).
    #[arg(long, global = true, value_enum, default_value_t = Format::Quaternion)]
    format: Format,
    /// Input file (stdin when absent).
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

/// Validated command line.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandConfig {
    pub command: Command,
    pub m: Option<usize>,
    pub tol: f64,
    pub branch: i64,
    pub seed: u64,
    pub format: Format,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

/// Exit code and the text destined for stdout and stderr.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: String) -> Outcome {
        Outcome { code: EXIT_ERROR, stdout: String::new(), stderr: message }
    }

    fn error(e: &QrootError) -> Outcome {
        Outcome { code: EXIT_ERROR, stdout: line(&json::error_value(e)), stderr: format!("error: {e}\n") }
    }
}

fn line(v: &Value) -> String {
    let mut s = json::to_string(v);
    s.push('\n');
    s
}

/// Parses arguments (including the program name) with `env_tol` standing in for `QROOT_TOL`.
pub fn parse_args<I, T>(args: I, env_tol: Option<&str>) -> Result<CommandConfig, Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            return Err(if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome::usage(text)
            });
        }
    };
    let tol = match (cli.tol, env_tol) {
        (Some(t), _) => t,
        (None, Some(s)) => {
            s.trim().parse::<f64>().map_err(|_| Outcome::usage(format!("error: QROOT_TOL is not a number: {s:?}\n")))?
        }
        (None, None) => DEFAULT_TOL,
    };
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Outcome::usage(format!("error: tolerance must be positive and finite, got {tol}\n")));
    }
    if cli.m == Some(0) {
        return Err(Outcome::usage("error: --m must be at least 1\n".into()));
    }
    if matches!(cli.command, Command::Check | Command::Root) && cli.m.is_none() {
        return Err(Outcome::usage("error: --m is required for this command\n".into()));
    }
    if cli.format == Format::Spec && cli.command != Command::Check {
        return Err(Outcome::usage("error: --format spec is only accepted by check\n".into()));
    }
    Ok(CommandConfig {
        command: cli.command,
        m: cli.m,
        tol,
        branch: cli.branch,
        seed: cli.seed,
        format: cli.format,
        input: cli.input,
        output: cli.out,
    })
}

fn read_input(cfg: &CommandConfig, stdin: &mut dyn Read) -> Result<Value, QrootError> {
    let text = match &cfg.input {
        Some(p) => fs::read_to_string(p).map_err(|e| QrootError::Parse(format!("{}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| QrootError::Parse(format!("stdin: {e}")))?;
            s
        }
    };
    json::parse(&text)
}

fn matrix_from(v: &Value, format: Format) -> Result<QuatMatrix, QrootError> {
    match format {
        Format::Omega => Ok(omega_to_quat(&OmegaMatrix::from_complex_default(&json::parse_complex_matrix(v)?)?)),
        _ => json::parse_quat_matrix(v),
    }
}

fn pair_from(v: &Value, format: Format) -> Result<(QuatMatrix, QuatMatrix), QrootError> {
    let get = |k: &str| v.get(k).ok_or_else(|| QrootError::Parse(format!("missing field \"{k}\"")));
    Ok((matrix_from(get("B")?, format)?, matrix_from(get("H")?, format)?))
}

fn tolerances(tol: f64) -> Tolerances {
    Tolerances { residual: tol, ..Tolerances::default() }
}

fn is_pair(v: &Value) -> bool {
    v.get("B").is_some() || v.get("H").is_some()
}

fn embed(v: &Value, cfg: &CommandConfig) -> Result<Value, QrootError> {
    let one =
        |m: &Value| -> Result<Value, QrootError> { Ok(json::omega_value(&omega_embed(&json::parse_quat_matrix(m)?)?)) };
    if is_pair(v) {
        let (b, h) = pair_from(v, cfg.format)?;
        return Ok(json!({ "B": json::omega_value(&omega_embed(&b)?), "H": json::omega_value(&omega_embed(&h)?) }));
    }
    one(v)
}

fn extract(v: &Value) -> Result<Value, QrootError> {
    let one = |m: &Value| -> Result<Value, QrootError> {
        let c = json::parse_complex_matrix(m)?;
        Ok(json::quat_matrix_value(&omega_extract(&c, default_omega_tol(&c))?))
    };
    if is_pair(v) {
        let get = |k: &str| v.get(k).ok_or_else(|| QrootError::Parse(format!("missing field \"{k}\"")));
        return Ok(json!({ "B": one(get("B")?)?, "H": one(get("H")?)? }));
    }
    one(v)
}

fn canon(v: &Value, cfg: &CommandConfig) -> Result<Value, QrootError> {
    let (b, h) = pair_from(v, cfg.format)?;
    let out = canonicalize_pair(&omega_embed(&b)?, &omega_embed(&h)?, &tolerances(cfg.tol))?;
    Ok(json!({
        "spec": json::spec_value(&out.spec),
        "similarity": json::omega_value(&out.similarity),
        "residual_similarity": out.residual_similarity,
        "residual_congruence": out.residual_congruence,
    }))
}

fn check(v: &Value, cfg: &CommandConfig, m: usize) -> Result<(Value, bool), QrootError> {
    let spec = if cfg.format == Format::Spec {
        json::parse_spec(v)?
    } else {
        let (b, h) = pair_from(v, cfg.format)?;
        canonicalize_pair(&omega_embed(&b)?, &omega_embed(&h)?, &tolerances(cfg.tol))?.spec
    };
    let d = root_exists(&spec, m)?;
    Ok((json::decision_value(&d), d.exists))
}

fn root(v: &Value, cfg: &CommandConfig, m: usize) -> Result<(Value, bool), QrootError> {
    let (b, h) = pair_from(v, cfg.format)?;
    let opts = RootOptions { tolerances: tolerances(cfg.tol), branch: cfg.branch };
    match mth_root(&b, &h, m, &opts)? {
        RootOutcome::Root(r) => {
            let mut obj = match json::root_result_value(&r) {
                Value::Object(o) => o,
                _ => unreachable!("root result is an object"),
            };
            obj.insert("B".into(), json::quat_matrix_value(&b));
            obj.insert("H".into(), json::quat_matrix_value(&h));
            Ok((Value::Object(obj), true))
        }
        RootOutcome::NoRoot(d) => Ok((json::decision_value(&d), false)),
    }
}

fn verify(v: &Value, cfg: &CommandConfig) -> Result<(Value, bool), QrootError> {
    let (b, h) = pair_from(v, cfg.format)?;
    let a = matrix_from(v.get("root").ok_or_else(|| QrootError::Parse("missing field \"root\"".into()))?, cfg.format)?;
    let m = match (cfg.m, v.get("m")) {
        (Some(m), _) => m,
        (None, Some(x)) => {
            x.as_u64().filter(|&m| m >= 1).ok_or_else(|| QrootError::Parse("m must be a positive integer".into()))?
                as usize
        }
        (None, None) => return Err(QrootError::Parse("m is given neither by --m nor by the input".into())),
    };
    let rep = verify_root(&a, &b, &h, m, cfg.tol)?;
    Ok((json::report_value(&rep), rep.passed))
}

fn default_profile(m: usize) -> Profile {
    Profile {
        classes: vec![EigenClass::Positive, EigenClass::Nonreal, EigenClass::Negative, EigenClass::Zero],
        max_size: 6,
        m,
        force: Force::Admit,
    }
}

fn gen(cfg: &CommandConfig) -> Result<Value, QrootError> {
    let profile = match &cfg.input {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| QrootError::Parse(format!("{}: {e}", p.display())))?;
            let mut prof: Profile =
                serde_json::from_str(&text).map_err(|e| QrootError::Parse(format!("profile: {e}")))?;
            if let Some(m) = cfg.m {
                prof.m = m;
            }
            prof
        }
        None => default_profile(cfg.m.ok_or_else(|| QrootError::Parse("gen needs --m or a profile".into()))?),
    };
    let inst = random_instance(cfg.seed, &profile)?;
    let mut extra = Map::new();
    extra.insert("m".into(), json!(profile.m));
    extra.insert("seed".into(), json!(cfg.seed));
    extra.insert("spec".into(), json::spec_value(&inst.spec));
    if cfg.format == Format::Omega {
        let mut obj = extra;
        obj.insert("B".into(), json::omega_value(&omega_embed(&inst.b)?));
        obj.insert("H".into(), json::omega_value(&omega_embed(&inst.h)?));
        return Ok(Value::Object(obj));
    }
    Ok(json::instance_value(&inst.b, &inst.h, extra))
}

fn dispatch(cfg: &CommandConfig, stdin: &mut dyn Read) -> Result<(Value, i32), QrootError> {
    let code = |ok: bool| if ok { EXIT_OK } else { EXIT_NO_ROOT };
    if cfg.command == Command::Gen {
        return Ok((gen(cfg)?, EXIT_OK));
    }
    let v = read_input(cfg, stdin)?;
    Ok(match cfg.command {
        Command::Embed => (embed(&v, cfg)?, EXIT_OK),
        Command::Extract => (extract(&v)?, EXIT_OK),
        Command::Canon => (canon(&v, cfg)?, EXIT_OK),
        Command::Check => {
            let (out, ok) = check(&v, cfg, cfg.m.expect("validated"))?;
            (out, code(ok))
        }
        Command::Root => {
            let (out, ok) = root(&v, cfg, cfg.m.expect("validated"))?;
            (out, code(ok))
        }
        Command::Verify => {
            let (out, ok) = verify(&v, cfg)?;
            (out, if ok { EXIT_OK } else { EXIT_ERROR })
        }
        Command::Gen => unreachable!("handled above"),
    })
}

/// Runs one command; `stdin` is read only when no `--in` path is given.
pub fn run_command(cfg: &CommandConfig, stdin: &mut dyn Read) -> Outcome {
    let (value, code) = match dispatch(cfg, stdin) {
        Ok(x) => x,
        Err(e) => return Outcome::error(&e),
    };
    let text = line(&value);
    match &cfg.output {
        Some(p) => match fs::write(p, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
            Err(e) => Outcome::error(&QrootError::Parse(format!("{}: {e}", p.display()))),
        },
        None => Outcome { code, stdout: text, stderr: String::new() },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> CommandConfig {
        parse_args(std::iter::once("qroot").chain(args.iter().copied()), None).unwrap()
    }

    fn run(args: &[&str], input: &str) -> Outcome {
        run_command(&cfg(args), &mut input.as_bytes())
    }

    const SIXTEEN: &str = r#"{"B": {"n": 1, "entries": [[16, 0, 0, 0]]}, "H": {"n": 1, "entries": [[1, 0, 0, 0]]}}"#;
    const MINUS_ID: &str = r#"{"B": {"n": 2, "entries": [[-1,0,0,0],[0,0,0,0],[0,0,0,0],[-1,0,0,0]]},
                               "H": {"n": 2, "entries": [[1,0,0,0],[0,0,0,0],[0,0,0,0],[1,0,0,0]]}}"#;

    #[test]
    fn flag_validation() {
        let bad = |args: &[&str]| parse_args(std::iter::once("qroot").chain(args.iter().copied()), None).unwrap_err();
        assert_eq!(bad(&["root"]).code, EXIT_ERROR);
        assert_eq!(bad(&["root", "--m", "2", "--bogus"]).code, EXIT_ERROR);
        assert_eq!(bad(&["check", "--m", "0"]).code, EXIT_ERROR);
        assert_eq!(bad(&["root", "--m", "2", "--tol", "-1"]).code, EXIT_ERROR);
        assert_eq!(bad(&["root", "--m", "2", "--format", "spec"]).code, EXIT_ERROR);
        assert_eq!(bad(&["--help"]).code, EXIT_OK);
        assert_eq!(cfg(&["embed"]).tol, DEFAULT_TOL);
        let env = parse_args(["qroot", "embed"], Some("1e-6")).unwrap();
        assert_eq!(env.tol, 1e-6);
        let both = parse_args(["qroot", "embed", "--tol", "1e-9"], Some("1e-6")).unwrap();
        assert_eq!(both.tol, 1e-9);
        assert_eq!(parse_args(["qroot", "embed"], Some("x")).unwrap_err().code, EXIT_ERROR);
    }

    #[test]
    fn root_of_sixteen() {
        let out = run(&["root", "--m", "4"], SIXTEEN);
        assert_eq!(out.code, EXIT_OK, "{out:?}");
        let v = json::parse(&out.stdout).unwrap();
        let a = json::parse_quat_matrix(&v["root"]).unwrap();
        assert!((a[(0, 0)].w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn check_refuses_negative_identity() {
        let out = run(&["check", "--m", "2"], MINUS_ID);
        assert_eq!(out.code, EXIT_NO_ROOT);
        let v = json::parse(&out.stdout).unwrap();
        assert_eq!(v["certificate"]["kind"], "NegativeSignPairing");
        assert_eq!(run(&["root", "--m", "2"], MINUS_ID).code, EXIT_NO_ROOT);
    }

    #[test]
    fn check_accepts_spec_input() {
        let spec = r#"{"blocks": [{"lambda": [0, 0], "size": 2, "sign": 1}, {"lambda": [0, 0], "size": 1, "sign": -1}], "doubled": true}"#;
        let out = run(&["check", "--m", "2", "--format", "spec"], spec);
        assert_eq!(out.code, EXIT_NO_ROOT);
        assert_eq!(json::parse(&out.stdout).unwrap()["certificate"]["kind"], "SignPatternViolation");
    }

    #[test]
    fn tampered_root_fails_verification() {
        let out = run(&["root", "--m", "4"], SIXTEEN);
        let mut v = json::parse(&out.stdout).unwrap();
        assert_eq!(run(&["verify"], &out.stdout).code, EXIT_OK);
        v["root"]["entries"][0][0] = json!(2.5);
        let tampered = run(&["verify"], &json::to_string(&v));
        assert_eq!(tampered.code, EXIT_ERROR);
        assert_eq!(json::parse(&tampered.stdout).unwrap()["passed"], false);
    }

    #[test]
    fn errors_are_machine_readable() {
        let out = run(&["canon"], "{not json");
        assert_eq!(out.code, EXIT_ERROR);
        assert_eq!(json::parse(&out.stdout).unwrap()["error"], "ParseError");
        let not_sa = r#"{"B": {"n": 2, "entries": [[0,0,0,0],[1,0,0,0],[0,0,0,0],[0,0,0,0]]},
                        "H": {"n": 2, "entries": [[1,0,0,0],[0,0,0,0],[0,0,0,0],[1,0,0,0]]}}"#;
        let out = run(&["root", "--m", "2"], not_sa);
        assert_eq!(json::parse(&out.stdout).unwrap()["error"], "NotSelfadjoint");
    }

    #[test]
    fn embed_extract_round_trip() {
        let q = r#"{"n": 1, "entries": [[1, 2, 3, 4]]}"#;
        let e = run(&["embed"], q);
        assert_eq!(e.code, EXIT_OK);
        let x = run(&["extract"], &e.stdout);
        assert_eq!(
            json::parse_quat_matrix(&json::parse(&x.stdout).unwrap()).unwrap(),
            json::parse_quat_matrix(&json::parse(q).unwrap()).unwrap()
        );
    }

    #[test]
    fn gen_root_verify_compose() {
        let g = run(&["gen", "--m", "3", "--seed", "5"], "");
        assert_eq!(g.code, EXIT_OK, "{g:?}");
        let r = run(&["root", "--m", "3"], &g.stdout);
        assert_eq!(r.code, EXIT_OK, "{r:?}");
        let v = run(&["verify"], &r.stdout);
        assert_eq!(v.code, EXIT_OK, "{v:?}");
    }
}
