//! Command-line front end. [`run`] is pure: arguments and stdin in, exit code
//! and captured output back.
//!
//! Exit codes: 0 success, 1 input error, 2 certificate failure.

use std::fmt::Write as _;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::abnormal::{
    abnormal_generators_with, divergence_residuals, goh_matrix, stratify, AbnormalError, AbnormalGenerator,
    DivergenceCertificate, GohMatrix, StratifyConfig, JACOBI_ORDERING,
};
use crate::dynamics::{abnormal_trajectory, divergence_ratio_scan};
use crate::exactpoly::{parse_expression, rational_from_f64, Ambient, ParseError, Polynomial, Rational};
use crate::fixtures;
use crate::normalform::{check_rank_preservation, normalize_frame};
use crate::pfaffian::{calibration, skew_rank, IndexSet, PfaffianTable, SkewMatrix};
use crate::vectorfield::{Frame, VectorField};

/// Frame description accepted on input and emitted by `demo`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    pub dimension: usize,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fields: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputError {
    pub message: String,
    /// Byte offset into the document or the offending expression.
    pub offset: Option<usize>,
    /// JSON path of the offending expression, when applicable.
    pub location: Option<String>,
}

impl InputError {
    fn msg(message: impl Into<String>) -> Self {
        InputError {
            message: message.into(),
            offset: None,
            location: None,
        }
    }

    fn expr(location: String, e: &ParseError) -> Self {
        InputError {
            message: format!("{location}: {e}"),
            offset: Some(e.offset),
            location: Some(location),
        }
    }
}

impl FrameSpec {
    pub fn from_json(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| InputError {
            message: format!("invalid frame document: {e}"),
            offset: Some(byte_offset(text, e.line(), e.column())),
            location: None,
        })
    }

    pub fn from_fixture(f: &fixtures::Fixture) -> Self {
        FrameSpec {
            dimension: f.n,
            rank: f.n - 1,
            normal_form: Some(f.a.iter().map(ToString::to_string).collect()),
            fields: None,
            name: Some(f.name.to_string()),
            description: Some(f.description.to_string()),
        }
    }

    pub fn to_frame(&self) -> Result<Frame, InputError> {
        let n = self.dimension;
        if n == 0 {
            return Err(InputError::msg("dimension must be positive"));
        }
        let amb = Ambient::base(n);
        match (&self.normal_form, &self.fields) {
            (Some(a), None) => {
                if a.len() + 1 != n || self.rank + 1 != n {
                    return Err(InputError::msg(format!(
                        "normal_form needs dimension - 1 = {} expressions and rank {}; got {} and rank {}",
                        n - 1,
                        n - 1,
                        a.len(),
                        self.rank
                    )));
                }
                let polys = a
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse_expression(s, amb).map_err(|e| InputError::expr(format!("normal_form[{i}]"), &e)))
                    .collect::<Result<Vec<_>, _>>()?;
                Frame::corank_one(n, polys).map_err(|e| InputError::msg(e.to_string()))
            }
            (None, Some(fields)) => {
                if fields.len() != self.rank {
                    return Err(InputError::msg(format!("rank {} but {} fields", self.rank, fields.len())));
                }
                let mut out = Vec::new();
                for (k, f) in fields.iter().enumerate() {
                    if f.len() != n {
                        return Err(InputError::msg(format!("fields[{k}] has {} components, expected {n}", f.len())));
                    }
                    let comps = f
                        .iter()
                        .enumerate()
                        .map(|(i, s)| parse_expression(s, amb).map_err(|e| InputError::expr(format!("fields[{k}][{i}]"), &e)))
                        .collect::<Result<Vec<_>, _>>()?;
                    out.push(VectorField::base(n, comps).map_err(|e| InputError::msg(e.to_string()))?);
                }
                Frame::new(n, out).map_err(|e| InputError::msg(e.to_string()))
            }
            _ => Err(InputError::msg("exactly one of normal_form and fields is required")),
        }
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let mut offset = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len();
    }
    text.len()
}

#[derive(Debug, Parser)]
#[command(name = "gohkit", version, about = "Goh matrices, Pfaffian minors and abnormal-path diagnostics for polynomial frames")]
struct Cli {
    /// Emit a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Frame JSON file, or `-` for stdin.
    #[arg(default_value = "-")]
    input: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the Goh matrix H and, in corank-1 normal form, the reduced matrix.
    Goh(Input),
    /// Print the Pfaffian minors of a given size.
    Pfaffian {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        minors: usize,
        /// Use H on phase space even when the reduced matrix exists.
        #[arg(long)]
        phase: bool,
    },
    /// Print the generators Y_I (and Z_I) for a rank r.
    Generators {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Divergence certificates; exits 2 if any residual is nonzero.
    Certify {
        #[command(flatten)]
        input: Input,
        /// Single rank to certify (default: every even rank below m).
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Sample kernel dimensions and refine along vanishing loci.
    Stratify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        hi: f64,
        #[arg(long, default_value_t = 32)]
        locus_samples: usize,
    },
    /// Reduced minors whose common zeros form the singular set.
    SingularSet {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Jet normal form at the origin with a rank-preservation check.
    Normalform {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        order: u64,
        #[arg(long, default_value_t = 5)]
        checks: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Integrate Z_I and print the trajectory as CSV.
    Integrate {
        #[command(flatten)]
        input: Input,
        /// Index set I as comma-separated 1-based labels, e.g. 1,2,3.
        #[arg(long)]
        field: String,
        /// Start point, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long = "T")]
        t_end: f64,
        #[arg(long = "h")]
        h: f64,
    },
    /// Estimate sup |div Z| / |Z| on a box for every nonzero Z_I.
    ScanDiv {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-3)]
        cutoff: f64,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        hi: f64,
    },
    /// Rank of brackets up to a given length at a point (diagnostic only).
    BracketCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Point, comma-separated rationals (default: origin).
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Emit a built-in frame as JSON.
    Demo {
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(InputError),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

fn input_err<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(InputError::msg(e.to_string()))
}

struct Report {
    text: String,
    results: Value,
    inputs: Value,
    seed: Option<u64>,
    /// Certificate failure after producing a report.
    failed: Option<String>,
}

/// Run with `args` (including the program name) and the given stdin.
pub fn run<S: AsRef<str>>(args: &[S], stdin: &mut dyn Read) -> Outcome {
    let argv: Vec<&str> = args.iter().map(AsRef::as_ref).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: rendered,
                },
            };
        }
    };
    let json = cli.json;
    let name = command_name(&cli.command);
    match dispatch(cli.command, stdin) {
        Ok(Output::Raw(s)) => Outcome {
            code: 0,
            stdout: s,
            stderr: String::new(),
        },
        Ok(Output::Report(r)) => {
            let code = if r.failed.is_some() { 2 } else { 0 };
            let stdout = if json {
                let env = json!({
                    "command": name,
                    "inputs": r.inputs,
                    "results": r.results,
                    "calibration": calibration(),
                    "seed": r.seed,
                });
                serde_json::to_string_pretty(&env).expect("serializable") + "\n"
            } else {
                r.text
            };
            Outcome {
                code,
                stdout,
                stderr: r.failed.map(|m| format!("error: {m}\n")).unwrap_or_default(),
            }
        }
        Err(Failure::Input(e)) => failure_outcome(json, name, 1, "input", &e.message, e.offset, e.location),
    }
}

fn failure_outcome(
    json: bool,
    command: &str,
    code: i32,
    kind: &str,
    message: &str,
    offset: Option<usize>,
    location: Option<String>,
) -> Outcome {
    let stderr = match offset {
        Some(o) => format!("error: {message} (byte {o})\n"),
        None => format!("error: {message}\n"),
    };
    let stdout = if json {
        let v = json!({
            "command": command,
            "error": { "kind": kind, "message": message, "offset": offset, "location": location },
        });
        serde_json::to_string_pretty(&v).expect("serializable") + "\n"
    } else {
        String::new()
    };
    Outcome { code, stdout, stderr }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Goh(_) => "goh",
        Command::Pfaffian { .. } => "pfaffian",
        Command::Generators { .. } => "generators",
        Command::Certify { .. } => "certify",
        Command::Stratify { .. } => "stratify",
        Command::SingularSet { .. } => "singular-set",
        Command::Normalform { .. } => "normalform",
        Command::Integrate { .. } => "integrate",
        Command::ScanDiv { .. } => "scan-div",
        Command::BracketCheck { .. } => "bracket-check",
        Command::Demo { .. } => "demo",
    }
}

enum Output {
    Raw(String),
    Report(Report),
}

fn load(input: &Input, stdin: &mut dyn Read) -> Result<(FrameSpec, Frame), Failure> {
    let text = if input.input == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(input_err)?;
        s
    } else {
        std::fs::read_to_string(&input.input).map_err(|e| InputError::msg(format!("{}: {e}", input.input)))?
    };
    let spec = FrameSpec::from_json(&text)?;
    let frame = spec.to_frame()?;
    Ok((spec, frame))
}

fn frame_header(spec: &FrameSpec, frame: &Frame) -> String {
    let mut s = String::new();
    if let Some(name) = &spec.name {
        writeln!(s, "# {name}").unwrap();
    }
    if let Some(d) = &spec.description {
        writeln!(s, "# {d}").unwrap();
    }
    writeln!(s, "frame: n = {}, m = {}", frame.n(), frame.rank()).unwrap();
    s
}

fn generic_rank(goh: &GohMatrix) -> usize {
    let m = goh.reduced.as_ref().unwrap_or(&goh.h);
    skew_rank(m, None).expect("symbolic rank")
}

fn matrix_text(out: &mut String, label: &str, a: &SkewMatrix) {
    writeln!(out, "{label} =").unwrap();
    for row in a.rows() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        writeln!(out, "  [{}]", cells.join(", ")).unwrap();
    }
}

fn strings(v: &[Polynomial]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn parse_labels(s: &str) -> Result<IndexSet, Failure> {
    let labels = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| input_err(format!("bad index set '{s}': {e}")))?;
    if labels.iter().any(|&l| l == 0 || l > 32) {
        return Err(input_err(format!("index set '{s}' must use labels 1..32")));
    }
    Ok(IndexSet::from_labels(labels))
}

fn parse_point_f64(s: &str, n: usize) -> Result<Vec<f64>, Failure> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| input_err(format!("bad point '{s}': {e}")))?;
    if v.len() != n {
        return Err(input_err(format!("point '{s}' has {} coordinates, expected {n}", v.len())));
    }
    Ok(v)
}

fn parse_point_rational(s: &str, n: usize) -> Result<Vec<Rational>, Failure> {
    let amb = Ambient::base(0);
    let v = s
        .split(',')
        .map(|t| {
            parse_expression(t, amb)
                .map(|p| p.constant_term())
                .or_else(|e| t.trim().parse::<f64>().ok().and_then(rational_from_f64).ok_or(e))
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| input_err(format!("bad point '{s}': {e}")))?;
    if v.len() != n {
        return Err(input_err(format!("point '{s}' has {} coordinates, expected {n}", v.len())));
    }
    Ok(v)
}

fn abn(e: AbnormalError) -> Failure {
    input_err(e)
}

fn generator_json(g: &AbnormalGenerator) -> Value {
    json!({
        "set": g.index_set,
        "y": strings(g.y.components()),
        "z": g.z.as_ref().map(|z| strings(z.components())),
        "p_degree": g.p_degree,
    })
}

fn certificate_json(rank: usize, c: &DivergenceCertificate) -> Value {
    json!({
        "rank": rank,
        "subject": c.subject,
        "phase_divergence": c.phase_divergence.to_string(),
        "jacobi_expansion": c.jacobi_expansion.to_string(),
        "base_combination": c.base.as_ref().map(|b| json!({
            "divergence": b.divergence.to_string(),
            "lambda": b.lambda.as_ref().map(ToString::to_string),
            "coefficients": b.coefficients.iter().map(|(j, p)| json!([j + 1, p.to_string()])).collect::<Vec<_>>(),
            "residual": b.residual.to_string(),
        })),
        "valid": c.is_valid(),
    })
}

fn dispatch(cmd: Command, stdin: &mut dyn Read) -> Result<Output, Failure> {
    match cmd {
        Command::Demo { name, list } => {
            if list || name.is_none() {
                let mut s = String::new();
                for f in fixtures::FIXTURES {
                    writeln!(s, "{:<12} {}", f.name, f.description).unwrap();
                }
                return Ok(Output::Raw(s));
            }
            let name = name.unwrap();
            let f = fixtures::fixture(&name).ok_or_else(|| {
                input_err(format!("unknown demo '{name}'; available: {}", fixtures::names().join(", ")))
            })?;
            let spec = FrameSpec::from_fixture(f);
            Ok(Output::Raw(serde_json::to_string_pretty(&spec).expect("serializable") + "\n"))
        }
        Command::Goh(input) => {
            let (spec, frame) = load(&input, stdin)?;
            let goh = goh_matrix(&frame).map_err(abn)?;
            let mut text = frame_header(&spec, &frame);
            matrix_text(&mut text, "H", &goh.h);
            if let Some(red) = &goh.reduced {
                matrix_text(&mut text, &format!("H~ (H = p{} * H~)", frame.n()), red);
            }
            writeln!(text, "generic rank = {}", generic_rank(&goh)).unwrap();
            Ok(Output::Report(Report {
                text,
                results: json!({
                    "h": goh.strings(),
                    "reduced": goh.reduced_strings(),
                    "generic_rank": generic_rank(&goh),
                }),
                inputs: json!({ "frame": spec }),
                seed: None,
                failed: None,
            }))
        }
        Command::Pfaffian { input, minors, phase } => {
            let (spec, frame) = load(&input, stdin)?;
            let goh = goh_matrix(&frame).map_err(abn)?;
            let (matrix, label) = match (&goh.reduced, phase) {
                (Some(red), false) => (red, "reduced"),
                _ => (&goh.h, "phase"),
            };
            if minors > matrix.size() {
                return Err(input_err(format!("minor size {minors} exceeds m = {}", matrix.size())));
            }
            let table = PfaffianTable::new(matrix, minors);
            let list = table.minors(minors);
            let mut text = frame_header(&spec, &frame);
            writeln!(text, "Pfaffian minors of size {minors} ({label} matrix):").unwrap();
            for (s, p) in &list {
                writeln!(text, "  phi{s} = {p}").unwrap();
            }
            Ok(Output::Report(Report {
                text,
                results: json!({
                    "matrix": label,
                    "size": minors,
                    "minors": list.iter().map(|(s, p)| json!({"set": s, "value": p.to_string()})).collect::<Vec<_>>(),
                }),
                inputs: json!({ "frame": spec, "minors": minors, "phase": phase }),
                seed: None,
                failed: None,
            }))
        }
        Command::Generators { input, rank } => {
            let (spec, frame) = load(&input, stdin)?;
            let goh = goh_matrix(&frame).map_err(abn)?;
            let r = rank.unwrap_or_else(|| generic_rank(&goh));
            let gens = abnormal_generators_with(&frame, &goh, r).map_err(abn)?;
            let mut text = frame_header(&spec, &frame);
            writeln!(text, "rank r = {r}: {} generators", gens.len()).unwrap();
            for g in &gens {
                writeln!(
                    text,
                    "{} (p-degree x-block {}, p-block {})",
                    g,
                    fmt_deg(g.p_degree.x_block),
                    fmt_deg(g.p_degree.p_block)
                )
                .unwrap();
                if let Some(z) = &g.z {
                    writeln!(text, "  Z{} = {}", g.index_set, z).unwrap();
                }
            }
            Ok(Output::Report(Report {
                text,
                results: json!({ "rank": r, "generators": gens.iter().map(generator_json).collect::<Vec<_>>() }),
                inputs: json!({ "frame": spec, "rank": r }),
                seed: None,
                failed: None,
            }))
        }
        Command::Certify { input, rank } => {
            let (spec, frame) = load(&input, stdin)?;
            let goh = goh_matrix(&frame).map_err(abn)?;
            let m = frame.rank();
            let ranks: Vec<usize> = match rank {
                Some(r) => vec![r],
                None => (0..m).step_by(2).collect(),
            };
            let mut text = frame_header(&spec, &frame);
            writeln!(text, "triple bracket ordering: {JACOBI_ORDERING}").unwrap();
            let mut certs = Vec::new();
            let mut failures = Vec::new();
            for &r in &ranks {
                for g in abnormal_generators_with(&frame, &goh, r).map_err(abn)? {
                    let c = divergence_residuals(&g, &frame).map_err(abn)?;
                    let base = match &c.base {
                        Some(b) => format!(
                            " base: lambda = {}, residual = {}",
                            b.lambda.as_ref().map_or("-".to_string(), ToString::to_string),
                            b.residual
                        ),
                        None => String::new(),
                    };
                    writeln!(
                        text,
                        "r = {r} {}: div Y = {}, jacobi = {},{} [{}]",
                        c.subject,
                        c.phase_divergence,
                        c.jacobi_expansion,
                        base,
                        if c.is_valid() { "ok" } else { "FAIL" }
                    )
                    .unwrap();
                    if !c.is_valid() {
                        failures.push(format!("r = {r} {}", c.subject));
                    }
                    certs.push(certificate_json(r, &c));
                }
            }
            let all_valid = failures.is_empty();
            writeln!(text, "{}", if all_valid { "all certificates valid" } else { "certificate failure" }).unwrap();
            Ok(Output::Report(Report {
                text,
                results: json!({
                    "jacobi_ordering": JACOBI_ORDERING,
                    "ranks": ranks,
                    "certificates": certs,
                    "all_valid": all_valid,
                }),
                inputs: json!({ "frame": spec, "rank": rank }),
                seed: None,
                failed: (!all_valid).then(|| format!("nonzero residual in {}", failures.join(", "))),
            }))
        }
        Command::Stratify {
            input,
            samples,
            seed,
            lo,
            hi,
            locus_samples,
        } => {
            let (spec, frame) = load(&input, stdin)?;
            let cfg = StratifyConfig {
                lo,
                hi,
                samples,
                locus_samples,
                ..StratifyConfig::new(seed)
            };
            let s = stratify(&frame, &cfg).map_err(abn)?;
            let mut text = frame_header(&spec, &frame);
            let dims: Vec<String> = s.dims.iter().map(ToString::to_string).collect();
            writeln!(text, "kernel dimensions: {{{}}}", dims.join(",")).unwrap();
            for l in &s.levels {
                let exact = l.witnesses.iter().filter(|w| w.exact).count();
                let on_locus = l.witnesses.iter().filter(|w| w.on_locus).count();
                writeln!(
                    text,
                    "d = {} (rank {}): {} witnesses, {} exact, {} on a vanishing locus",
                    l.dim,
                    l.rank,
                    l.witnesses.len(),
                    exact,
                    on_locus
                )
                .unwrap();
                for (set, p) in l.minors.iter().filter(|(s, p)| !s.is_empty() && !p.is_zero()) {
                    writeln!(text, "  phi{set} = {p}").unwrap();
                }
                for w in l.witnesses.iter().filter(|w| w.on_locus).take(3) {
                    let xs: Vec<String> = match &w.x_exact {
                        Some(q) => q.iter().map(ToString::to_string).collect(),
                        None => w.x.iter().map(|v| format!("{v:e}")).collect(),
                    };
                    writeln!(text, "  witness x = ({})", xs.join(", ")).unwrap();
                }
            }
            writeln!(text, "bound d <= m - 2 checked at {} step-2 generating witnesses", s.bound_checked).unwrap();
            Ok(Output::Report(Report {
                text,
                results: serde_json::to_value(&s).expect("serializable"),
                inputs: json!({ "frame": spec, "config": cfg }),
                seed: Some(seed),
                failed: None,
            }))
        }
        Command::SingularSet { input, rank } => {
            let (spec, frame) = load(&input, stdin)?;
            let goh = goh_matrix(&frame).map_err(abn)?;
            let red = goh
                .reduced
                .as_ref()
                .ok_or_else(|| input_err("singular-set needs a frame in corank-1 normal form"))?;
            let r = rank.unwrap_or_else(|| generic_rank(&goh));
            if r % 2 == 1 || r > red.size() {
                return Err(input_err(format!("rank {r} must be even and at most {}", red.size())));
            }
            let minors = PfaffianTable::new(red, r).minors(r);
            let nonzero: Vec<&(IndexSet, Polynomial)> = minors.iter().filter(|(_, p)| !p.is_zero()).collect();
            let empty = nonzero.iter().any(|(_, p)| p.is_constant());
            let mut text = frame_header(&spec, &frame);
            writeln!(text, "singular set: common zeros of the size-{r} minors").unwrap();
            for (s, p) in &nonzero {
                writeln!(text, "  phi{s} = {p}").unwrap();
            }
            if empty {
                writeln!(text, "a minor is a nonzero constant: the singular set is empty").unwrap();
            }
            Ok(Output::Report(Report {
                text,
                results: json!({
                    "rank": r,
                    "equations": nonzero.iter().map(|(s, p)| json!({"set": s, "value": p.to_string()})).collect::<Vec<_>>(),
                    "empty": empty,
                }),
                inputs: json!({ "frame": spec, "rank": r }),
                seed: None,
                failed: None,
            }))
        }
        Command::Normalform { input, order, checks, seed } => {
            let (spec, frame) = load(&input, stdin)?;
            let nf = normalize_frame(&frame, order).map_err(input_err)?;
            let check = check_rank_preservation(&frame, &nf, checks, seed).map_err(input_err)?;
            let mut text = frame_header(&spec, &frame);
            let trace: Vec<String> = nf.trace.iter().map(ToString::to_string).collect();
            writeln!(text, "stages: raw -> {}", trace.join(" -> ")).unwrap();
            writeln!(text, "linear change x = B y, B =").unwrap();
            for row in &nf.change.b {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                writeln!(text, "  [{}]", cells.join(", ")).unwrap();
            }
            for k in 0..nf.frame.m() {
                writeln!(text, "X{} = {}", k + 1, nf.frame.field(k)).unwrap();
            }
            writeln!(
                text,
                "kernel dimension preserved at {}/{} conclusive samples: {}",
                check.conclusive,
                check.samples.len(),
                if check.agree { "yes" } else { "no" }
            )
            .unwrap();
            let fields: Vec<Vec<String>> = (0..nf.frame.m()).map(|k| strings(nf.frame.field(k).components())).collect();
            let b: Vec<Vec<String>> = nf.change.b.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
            Ok(Output::Report(Report {
                text,
                results: json!({
                    "order": order,
                    "stages": trace,
                    "b": b,
                    "fields": fields,
                    "rank_check": check,
                }),
                inputs: json!({ "frame": spec, "order": order, "checks": checks }),
                seed: Some(seed),
                failed: None,
            }))
        }
        Command::Integrate {
            input,
            field,
            from,
            t_end,
            h,
        } => {
            let (spec, frame) = load(&input, stdin)?;
            let set = parse_labels(&field)?;
            if set.is_empty() || set.iter().any(|i| i >= frame.rank()) {
                return Err(input_err(format!("index set {set} must be a nonempty subset of 1..{}", frame.rank())));
            }
            let r = set.len() - 1;
            let goh = goh_matrix(&frame).map_err(abn)?;
            let gens = abnormal_generators_with(&frame, &goh, r).map_err(abn)?;
            let g = gens
                .iter()
                .find(|g| g.index_set == set)
                .ok_or_else(|| input_err(format!("no generator for {set}")))?;
            let x0 = parse_point_f64(&from, frame.n())?;
            let t = abnormal_trajectory(&frame, g, &x0, t_end, h).map_err(input_err)?;
            let text = t.trajectory.to_csv(None);
            let failed = (!t.certification.certified).then(|| {
                format!(
                    "trajectory not certified: {} steps above tolerance, first at t = {}",
                    t.certification.violations,
                    t.certification.first_violation_t.unwrap_or(0.0)
                )
            });
            Ok(Output::Report(Report {
                text,
                results: serde_json::to_value(&t).expect("serializable"),
                inputs: json!({ "frame": spec, "field": set, "from": x0, "T": t_end, "h": h }),
                seed: None,
                failed,
            }))
        }
        Command::ScanDiv {
            input,
            rank,
            samples,
            seed,
            cutoff,
            lo,
            hi,
        } => {
            let (spec, frame) = load(&input, stdin)?;
            if !(cutoff > 0.0) {
                return Err(input_err("cutoff must be positive"));
            }
            let goh = goh_matrix(&frame).map_err(abn)?;
            let r = rank.unwrap_or_else(|| generic_rank(&goh));
            let gens = abnormal_generators_with(&frame, &goh, r).map_err(abn)?;
            let mut text = frame_header(&spec, &frame);
            let mut scans = Vec::new();
            for g in &gens {
                let Some(z) = g.z.as_ref().filter(|z| !z.is_zero()) else {
                    continue;
                };
                let s = divergence_ratio_scan(z, lo, hi, samples, seed, cutoff).map_err(input_err)?;
                writeln!(
                    text,
                    "Z{}: sup |div Z|/|Z| ~ {:.6e} over {} samples ({} below cutoff {:e})",
                    g.index_set, s.ratio_sup, s.evaluated, s.offenders, cutoff
                )
                .unwrap();
                scans.push(json!({ "set": g.index_set, "scan": s }));
            }
            if scans.is_empty() {
                writeln!(text, "no nonzero projected generators at rank {r}").unwrap();
            }
            Ok(Output::Report(Report {
                text,
                results: json!({ "rank": r, "scans": scans }),
                inputs: json!({ "frame": spec, "rank": r, "samples": samples, "cutoff": cutoff, "lo": lo, "hi": hi }),
                seed: Some(seed),
                failed: None,
            }))
        }
        Command::BracketCheck { input, depth, at } => {
            let (spec, frame) = load(&input, stdin)?;
            let point = match &at {
                Some(s) => parse_point_rational(s, frame.n())?,
                None => vec![Rational::from_integer(0.into()); frame.n()],
            };
            let rank = frame.bracket_rank_at(&point, depth).map_err(input_err)?;
            let generating = rank == frame.n();
            let mut text = frame_header(&spec, &frame);
            let shown: Vec<String> = point.iter().map(ToString::to_string).collect();
            writeln!(
                text,
                "brackets of length <= {depth} at ({}) span {rank}/{}: {}",
                shown.join(", "),
                frame.n(),
                if generating { "generating" } else { "not generating at this depth" }
            )
            .unwrap();
            Ok(Output::Report(Report {
                text,
                results: json!({ "depth": depth, "point": shown, "rank": rank, "generating": generating }),
                inputs: json!({ "frame": spec, "depth": depth }),
                seed: None,
                failed: None,
            }))
        }
    }
}

fn fmt_deg(d: Option<u64>) -> String {
    d.map_or_else(|| "-".to_string(), |v| v.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> Outcome {
        let mut full = vec!["gohkit"];
        full.extend_from_slice(args);
        run(&full, &mut stdin.as_bytes())
    }

    fn demo(name: &str) -> String {
        let o = call(&["demo", name], "");
        assert_eq!(o.code, 0, "{}", o.stderr);
        o.stdout
    }

    #[test]
    fn demo_roundtrip() {
        let text = demo("martinet");
        let spec = FrameSpec::from_json(&text).unwrap();
        assert_eq!(spec.to_frame().unwrap(), fixtures::martinet());
        assert_eq!(call(&["demo", "nope"], "").code, 1);
        assert!(call(&["demo", "--list"], "").stdout.contains("dim6-cubic"));
    }

    #[test]
    fn certify_dim4() {
        let o = call(&["certify"], &demo("dim4"));
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("all certificates valid"));
    }

    #[test]
    fn stratify_dim6() {
        let o = call(&["--json", "stratify", "--seed", "7", "--samples", "64"], &demo("dim6-cubic"));
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["results"]["dims"], json!([1, 3]));
        assert_eq!(v["calibration"]["recursion"]["4"], json!("1"));
    }

    #[test]
    fn malformed_expression_reports_offset() {
        let doc = r#"{"dimension": 3, "rank": 2, "normal_form": ["0", "x1 + * x2"]}"#;
        let o = call(&["goh"], doc);
        assert_eq!(o.code, 1);
        assert!(o.stderr.contains("byte 5"), "{}", o.stderr);
        let o = call(&["--json", "goh"], doc);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["error"]["offset"], json!(5));
        assert_eq!(v["error"]["location"], json!("normal_form[1]"));
    }

    #[test]
    fn malformed_json_reports_offset() {
        let o = call(&["goh"], "{\"dimension\": 3,, }");
        assert_eq!(o.code, 1);
        assert!(o.stderr.contains("byte 16"), "{}", o.stderr);
    }

    #[test]
    fn integrate_engel_csv() {
        let o = call(&["integrate", "--field", "1,2,3", "--from", "0,0,0,0", "--T", "1", "--h", "0.25"], &demo("dim4-engel"));
        assert_eq!(o.code, 0, "{}", o.stderr);
        let last = o.stdout.lines().last().unwrap();
        assert!(last.starts_with("1,1,0,1,0,"), "{last}");
    }

    #[test]
    fn fields_input_and_bracket_check() {
        let doc = r#"{"dimension": 3, "rank": 2, "fields": [["1","0","0"],["0","1","x1^2"]]}"#;
        let o = call(&["bracket-check", "--depth", "3"], doc);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("span 3/3"));
        let o = call(&["bracket-check", "--depth", "2", "--at", "1/2,0,0"], doc);
        assert!(o.stdout.contains("span 3/3"), "{}", o.stdout);
    }

    #[test]
    fn usage_error_is_input_error() {
        assert_eq!(call(&["pfaffian"], "").code, 1);
        assert_eq!(call(&["--help"], "").code, 0);
    }
}
