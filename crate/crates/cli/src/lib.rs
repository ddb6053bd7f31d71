//! The `icone` command line: exact intersection homology and torsion of
//! cell complexes, closed-form analytic torsion of cones and frusta, and
//! Sturm–Liouville ladders, as tables or versioned JSON reports.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use icone_analytic::cone_analytic::{cheeger_muller_check, cone_global_torsion, frustum_global_torsion};
use icone_analytic::sturm_liouville::{eigenvalues, zeta_determinant, Boundary, Extension, SLProblem};
use icone_analytic::{AnalyticError, ConeGeometry, MiddlePerversity, Profile, Section, SectionSpectrum};
use icone_core::intersection::{intersection_cone_complex, intersection_homology_report, intersection_mapping_cone};
use icone_core::torsion::{intersection_torsion_cone, intersection_torsion_pseudomanifold, SectionBases};
use icone_core::{bundled, homology, load_complex, CoreError, HomologyGroup, Perversity, RegularCWComplex};
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;
pub const DEFAULT_CUTOFF: f64 = 1e4;
/// Environment variable overriding the default tolerance of `verify-cm`.
pub const TOLERANCE_ENV: &str = "ICONE_TOL";

pub mod exit {
    pub const OK: i32 = 0;
    pub const NUMERICAL: i32 = 1;
    pub const VALIDATION: i32 = 2;
    pub const MISMATCH: i32 = 3;
    pub const RESIDUAL: i32 = 4;
    pub const BRACKET: i32 = 5;
}

#[derive(Parser, Debug)]
#[command(name = "icone", version, about = "Intersection homology and torsion of cones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integral homology of a complex, or of a pair with --relative.
    Homology(HomologyArgs),
    /// Intersection homology against its closed form.
    Ihomology(IntersectionArgs),
    /// Intersection R-torsion: closed form against direct computation.
    Itorsion(TorsionArgs),
    /// Term-by-term global analytic torsion of a metric cone.
    ConeAnalytic(ConeArgs),
    /// Residual of the Cheeger–Müller identity on a cone.
    VerifyCm(CmArgs),
    /// Global analytic torsion of a frustum.
    Frustum(FrustumArgs),
    /// Eigenvalues of a radial Sturm–Liouville problem.
    Sl(SlArgs),
}

#[derive(Args, Debug)]
struct HomologyArgs {
    /// A complex file, or the name of a bundled complex.
    file: String,
    /// Name of a subcomplex to take homology relative to.
    #[arg(long)]
    relative: Option<String>,
}

#[derive(Args, Debug)]
struct IntersectionArgs {
    file: String,
    /// middle, middle-c, zero, top or a list such as 0,0,1.
    #[arg(long, default_value = "middle")]
    perversity: String,
    /// For a complex without singular vertices: use the pair (cone, base).
    #[arg(long)]
    relative: bool,
    /// Singular vertex to use when the file marks several.
    #[arg(long)]
    vertex: Option<String>,
}

#[derive(Args, Debug)]
struct TorsionArgs {
    #[command(flatten)]
    base: IntersectionArgs,
    /// Rank of the coefficient system.
    #[arg(long, default_value_t = 1)]
    rank: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SectionKind {
    Circle,
    Torus,
    Ladder,
}

#[derive(Args, Debug)]
struct SectionArgs {
    #[arg(long, value_enum)]
    section: SectionKind,
    /// Circle radius.
    #[arg(long)]
    r: Option<f64>,
    /// Torus side lengths.
    #[arg(long = "L", num_args = 2, value_names = ["L1", "L2"], allow_negative_numbers = true)]
    lengths: Option<Vec<f64>>,
    /// Ladder file in the section-spectrum JSON format.
    #[arg(long = "ladder-file")]
    ladder_file: Option<String>,
    /// Eigenvalue cutoff for built-in sections.
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    cutoff: f64,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// Coefficients of h, lowest degree first; must begin 0 1.
    #[arg(long = "h", num_args = 1.., allow_negative_numbers = true)]
    h: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct ConeArgs {
    #[command(flatten)]
    section: SectionArgs,
    #[arg(long)]
    l: f64,
    /// middle or middle-c.
    #[arg(long, default_value = "middle")]
    perversity: String,
    #[command(flatten)]
    profile: ProfileArgs,
}

#[derive(Args, Debug)]
struct CmArgs {
    #[command(flatten)]
    cone: ConeArgs,
    /// Largest accepted residual.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct FrustumArgs {
    #[command(flatten)]
    section: SectionArgs,
    #[arg(long)]
    l1: f64,
    #[arg(long)]
    l2: f64,
    #[command(flatten)]
    profile: ProfileArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BcArg {
    Rel,
    Abs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExtArg {
    Plus,
    Minus,
}

#[derive(Args, Debug)]
struct SlArgs {
    #[arg(long)]
    nu: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, value_enum)]
    bc: BcArg,
    #[arg(long, value_enum, default_value_t = ExtArg::Plus)]
    ext: ExtArg,
    /// Cone length.
    #[arg(long, conflicts_with = "frustum")]
    l: Option<f64>,
    /// Frustum endpoints; the condition at a is Dirichlet.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    frustum: Option<Vec<f64>>,
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// Also report the zeta-regularized determinant.
    #[arg(long)]
    det: bool,
    #[command(flatten)]
    profile: ProfileArgs,
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Mismatch(String),
    Numerical(String),
    Bracket(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Validation(_) => exit::VALIDATION,
            Failure::Mismatch(_) => exit::MISMATCH,
            Failure::Numerical(_) => exit::NUMERICAL,
            Failure::Bracket(_) => exit::BRACKET,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Mismatch(m) | Failure::Numerical(m) | Failure::Bracket(m) => m,
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::ClosedFormMismatch(_) | CoreError::DualityViolation(_) => Failure::Mismatch(msg),
            CoreError::Overflow { .. } => Failure::Numerical(msg),
            _ => Failure::Validation(msg),
        }
    }
}

impl From<AnalyticError> for Failure {
    fn from(e: AnalyticError) -> Self {
        let msg = e.to_string();
        match e {
            AnalyticError::Core(c) => c.into(),
            AnalyticError::InvalidParameter(_)
            | AnalyticError::UnsupportedSection(_)
            | AnalyticError::Ladder(_)
            | AnalyticError::PoleCollision(_)
            | AnalyticError::DivergentIntegral(_) => Failure::Validation(msg),
            AnalyticError::AssemblyMismatch(_) => Failure::Mismatch(msg),
            AnalyticError::BracketFailure(_) => Failure::Bracket(msg),
            AnalyticError::Pole { .. }
            | AnalyticError::SeriesDivergence(_)
            | AnalyticError::Stiffness(_)
            | AnalyticError::UnknownAsymptotics(_) => Failure::Numerical(msg),
        }
    }
}

/// A finished report: JSON body, table rendering and exit code.
struct Report {
    command: &'static str,
    tolerance: Value,
    cutoff: Value,
    body: Value,
    table: String,
    code: i32,
}

/// Runs the command line, reading the tolerance override from the
/// environment.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = std::env::var(TOLERANCE_ENV).ok();
    run_with_env(args, env.as_deref())
}

/// Same as [`run`] with an explicit value for the tolerance override.
pub fn run_with_env<I, T>(args: I, tolerance_env: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code: exit::VALIDATION }
            } else {
                Outcome { stdout: text, stderr: String::new(), code: exit::OK }
            };
        }
    };
    let arguments: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match dispatch(&cli.command, tolerance_env) {
        Ok(r) => {
            let stdout = match cli.format {
                Format::Table => r.table,
                Format::Json => {
                    let doc = json!({
                        "schema": SCHEMA,
                        "provenance": {
                            "tool": "icone",
                            "version": env!("CARGO_PKG_VERSION"),
                            "command": r.command,
                            "arguments": arguments,
                        },
                        "tolerance": r.tolerance,
                        "cutoff": r.cutoff,
                        "exit_code": r.code,
                        "report": r.body,
                    });
                    serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n"
                }
            };
            Outcome { stdout, stderr: String::new(), code: r.code }
        }
        Err(f) => Outcome { stdout: String::new(), stderr: format!("error: {}\n", f.message()), code: f.code() },
    }
}

fn dispatch(cmd: &Command, tolerance_env: Option<&str>) -> Result<Report, Failure> {
    match cmd {
        Command::Homology(a) => cmd_homology(a),
        Command::Ihomology(a) => cmd_ihomology(a),
        Command::Itorsion(a) => cmd_itorsion(a),
        Command::ConeAnalytic(a) => cmd_cone_analytic(a),
        Command::VerifyCm(a) => cmd_verify_cm(a, tolerance_env),
        Command::Frustum(a) => cmd_frustum(a),
        Command::Sl(a) => cmd_sl(a),
    }
}

/// Reads a complex file; a missing path whose stem names a bundled
/// complex loads that one instead.
fn load(file: &str) -> Result<RegularCWComplex, Failure> {
    let path = Path::new(file);
    if path.exists() {
        return Ok(load_complex(path)?);
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(file);
    if bundled::FILES.iter().any(|(n, _)| *n == stem) {
        return Ok(bundled::load(stem));
    }
    Err(Failure::Validation(format!("no such file or bundled complex: {file}")))
}

/// Keeps only `vertex` marked singular.
fn with_single_singularity(k: &RegularCWComplex, vertex: Option<&str>) -> Result<RegularCWComplex, Failure> {
    let marked = k.singular_vertices();
    let v = match vertex {
        Some(v) if marked.contains(v) => v.to_string(),
        Some(v) => return Err(Failure::Validation(format!("{v} is not a singular vertex"))),
        None if marked.len() == 1 => return Ok(k.clone()),
        None => {
            let list: Vec<&str> = marked.iter().map(String::as_str).collect();
            return Err(Failure::Validation(format!("several singular vertices ({}); choose one with --vertex", list.join(", "))));
        }
    };
    let text: Vec<String> = k
        .to_text()
        .lines()
        .map(|l| if l.starts_with("singular") { format!("singular {v}") } else { l.to_string() })
        .collect();
    Ok(RegularCWComplex::parse(&text.join("\n"))?)
}

fn groups_json(h: &[HomologyGroup]) -> Value {
    serde_json::to_value(h).expect("groups serialize")
}

fn exact_report(command: &'static str, body: Value, table: String, code: i32) -> Report {
    Report { command, tolerance: json!(0.0), cutoff: Value::Null, body, table, code }
}

fn cmd_homology(a: &HomologyArgs) -> Result<Report, Failure> {
    let k = load(&a.file)?;
    let c = match &a.relative {
        Some(name) => {
            let sub = k.subcomplex(name).ok_or_else(|| Failure::Validation(format!("no subcomplex named {name}")))?;
            k.relative_chain(sub)?
        }
        None => k.chain_complex(),
    };
    let h = homology(&c);
    let mut table = String::from("q  H_q          rank  torsion\n");
    for (q, g) in h.iter().enumerate() {
        let tors = if g.torsion.is_empty() { "-".to_string() } else { g.torsion.iter().map(ToString::to_string).collect::<Vec<_>>().join(",") };
        writeln!(table, "{q:<2} {:<12} {:<5} {tors}", g.to_string(), g.rank).unwrap();
    }
    let body = json!({ "cells": k.counts(), "relative_to": a.relative, "homology": groups_json(&h) });
    Ok(exact_report("homology", body, table, exit::OK))
}

/// The intersection chain complex of a file: the mapping cone when it
/// marks a singular vertex, otherwise the cone on the complex.
fn intersection_complex(a: &IntersectionArgs) -> Result<(icone_core::IntersectionChainComplex, String), Failure> {
    let k = load(&a.file)?;
    if k.singular_vertices().is_empty() {
        let c = k.chain_complex();
        let p = Perversity::parse(&a.perversity, c.top() + 1)?;
        let x = intersection_cone_complex(&c, &p, a.relative)?;
        let what = if a.relative { "relative cone" } else { "cone" };
        Ok((x, what.to_string()))
    } else {
        if a.relative {
            return Err(Failure::Validation("--relative applies to cones on complexes without singular vertices".into()));
        }
        let k = with_single_singularity(&k, a.vertex.as_deref())?;
        let p = Perversity::parse(&a.perversity, k.dim())?;
        let dec = k.singular_decomposition()?;
        let v = k.singular_vertices().iter().next().cloned().unwrap_or_default();
        Ok((intersection_mapping_cone(&dec.inclusion, &p)?, format!("pseudomanifold, singular vertex {v}")))
    }
}

fn cmd_ihomology(a: &IntersectionArgs) -> Result<Report, Failure> {
    let (x, what) = intersection_complex(a)?;
    let r = intersection_homology_report(&x);
    let status = if r.agree { "PASS" } else { "FAIL" };
    let mut table = format!("{what}, perversity {} (cutoff {})\nq  computed     closed form\n", r.perversity, r.cutoff);
    for (q, (c, e)) in r.computed.iter().zip(&r.expected).enumerate() {
        writeln!(table, "{q:<2} {:<12} {e}", c.to_string()).unwrap();
    }
    writeln!(table, "{status}").unwrap();
    let body = json!({
        "construction": what,
        "perversity": r.perversity,
        "cutoff": r.cutoff,
        "computed": groups_json(&r.computed),
        "closed_form": groups_json(&r.expected),
        "agree": r.agree,
        "status": status,
    });
    Ok(exact_report("ihomology", body, table, if r.agree { exit::OK } else { exit::MISMATCH }))
}

fn cmd_itorsion(a: &TorsionArgs) -> Result<Report, Failure> {
    let b = &a.base;
    let k = load(&b.file)?;
    if k.singular_vertices().is_empty() {
        let c = k.chain_complex();
        let p = Perversity::parse(&b.perversity, c.top() + 1)?;
        let r = intersection_torsion_cone(&c, &p, b.relative, &SectionBases::standard(&c), a.rank)?;
        let status = if r.exact { "PASS" } else { "FAIL" };
        let mut table = format!(
            "{}, perversity {} (cutoff {}), coefficient rank {}\nq  basis change  torsion order\n",
            if b.relative { "relative cone" } else { "cone" },
            r.perversity,
            r.cutoff,
            a.rank
        );
        for f in &r.factors {
            writeln!(table, "{:<2} {:<13} {}", f.degree, f.basis_change, f.torsion_order).unwrap();
        }
        writeln!(table, "closed form  {}\ndirect       {}\nlog          {:.15}\nexact        {}\n{status}", r.closed_form, r.direct, r.direct.log(), r.exact).unwrap();
        let mut body = serde_json::to_value(&r).expect("report serializes");
        body["rank"] = json!(a.rank);
        body["status"] = json!(status);
        Ok(exact_report("itorsion", body, table, if r.exact { exit::OK } else { exit::MISMATCH }))
    } else {
        if b.relative {
            return Err(Failure::Validation("--relative applies to cones on complexes without singular vertices".into()));
        }
        if a.rank != 1 {
            return Err(Failure::Validation("--rank applies to cones only".into()));
        }
        let k = with_single_singularity(&k, b.vertex.as_deref())?;
        let p = Perversity::parse(&b.perversity, k.dim())?;
        let dec = k.singular_decomposition()?;
        let r = intersection_torsion_pseudomanifold(&dec.inclusion, &p)?;
        let status = if r.exact { "PASS" } else { "FAIL" };
        let table = format!(
            "pseudomanifold, perversity {} (cutoff {})\ncone factor      {}\nrelative factor  {}\nsequence factor  {}\nproduct          {}\ndirect           {}\nlog              {:.15}\nexact            {}\n{status}\n",
            r.perversity,
            r.cutoff,
            r.cone,
            r.relative,
            r.sequence,
            r.product,
            r.direct,
            r.direct.log(),
            r.exact
        );
        let mut body = serde_json::to_value(&r).expect("report serializes");
        body["status"] = json!(status);
        Ok(exact_report("itorsion", body, table, if r.exact { exit::OK } else { exit::MISMATCH }))
    }
}

fn profile(a: &ProfileArgs) -> Result<Profile, Failure> {
    let Some(h) = &a.h else { return Ok(Profile::Flat) };
    if h.len() < 2 || h[0] != 0.0 || h[1] != 1.0 {
        return Err(Failure::Validation("--h needs coefficients 0 1 c2 ... (h(0) = 0, h'(0) = 1)".into()));
    }
    let big_h: Vec<f64> = h[1..].to_vec();
    if big_h.iter().skip(1).all(|&c| c == 0.0) {
        Ok(Profile::Flat)
    } else {
        Ok(Profile::Polynomial(big_h))
    }
}

fn spectrum(a: &SectionArgs) -> Result<SectionSpectrum, Failure> {
    let section = match a.section {
        SectionKind::Circle => Section::Circle { r: a.r.ok_or_else(|| Failure::Validation("--section circle needs --r".into()))? },
        SectionKind::Torus => {
            let l = a.lengths.as_ref().ok_or_else(|| Failure::Validation("--section torus needs --L L1 L2".into()))?;
            Section::Torus { l1: l[0], l2: l[1] }
        }
        SectionKind::Ladder => {
            let file = a.ladder_file.as_ref().ok_or_else(|| Failure::Validation("--section ladder needs --ladder-file".into()))?;
            let text = std::fs::read_to_string(file).map_err(|e| Failure::Validation(format!("{file}: {e}")))?;
            return Ok(SectionSpectrum::from_json(&text)?);
        }
    };
    Ok(SectionSpectrum::new(section, a.cutoff)?)
}

fn geometry(a: &ConeArgs) -> Result<(ConeGeometry, MiddlePerversity), Failure> {
    let per = MiddlePerversity::parse(&a.perversity)?;
    Ok((ConeGeometry::new(spectrum(&a.section)?, a.l, profile(&a.profile)?)?, per))
}

fn cmd_cone_analytic(a: &ConeArgs) -> Result<Report, Failure> {
    let (g, per) = geometry(a)?;
    let b = cone_global_torsion(&g, per)?;
    let mut table = format!("cone of length {} over a dimension-{} section, perversity {}\n", b.l, b.m, b.perversity);
    for (name, t) in [("t0", b.t0), ("t1", b.t1), ("t2", b.t2), ("t3", b.t3)] {
        writeln!(table, "{name}           {:>22.15}  ± {:.1e}", t.value, t.bound).unwrap();
    }
    writeln!(table, "global       {:>22.15}\nclosed form  {:>22.15}\nbound        {:.1e}", b.global, b.closed_form, b.bound).unwrap();
    writeln!(table, "assembly {}", if b.assembly_checked { "checked" } else { "not checked (user ladders)" }).unwrap();
    let body = serde_json::to_value(&b).expect("breakdown serializes");
    Ok(Report { command: "cone-analytic", tolerance: json!(b.bound), cutoff: json!(g.spectrum.cutoff), body, table, code: exit::OK })
}

/// `--tol`, then the environment override, then the per-section default.
fn cm_tolerance(explicit: Option<f64>, env: Option<&str>, section: SectionKind) -> Result<f64, Failure> {
    if let Some(t) = explicit {
        return Ok(t);
    }
    if let Some(s) = env {
        return s.trim().parse::<f64>().map_err(|_| Failure::Validation(format!("{TOLERANCE_ENV}={s:?} is not a number")));
    }
    Ok(match section {
        SectionKind::Circle => 1e-10,
        _ => 1e-6,
    })
}

fn cmd_verify_cm(a: &CmArgs, env: Option<&str>) -> Result<Report, Failure> {
    let tol = cm_tolerance(a.tol, env, a.cone.section.section)?;
    if !(tol > 0.0) {
        return Err(Failure::Validation(format!("tolerance must be positive, got {tol}")));
    }
    let (g, per) = geometry(&a.cone)?;
    let r = cheeger_muller_check(&g, per)?;
    let pass = r.residual.abs() <= tol;
    let status = if pass { "PASS" } else { "FAIL" };
    let table = format!(
        "perversity {}, l = {}, cutoff {:e}\nlog T_global           {:>22.15}\nlog intersection tau   {:>22.15}\ncombinatorial anomaly  {:>22.15}\nanalytic anomaly       {:>22.15}\nresidual               {:>22.3e}  (tolerance {:e})\n{status}\n",
        r.perversity, r.l, r.cutoff, r.log_global, r.log_intersection_torsion, r.combinatorial_anomaly, r.analytic_anomaly, r.residual, tol
    );
    let mut body = serde_json::to_value(&r).expect("report serializes");
    body["status"] = json!(status);
    Ok(Report { command: "verify-cm", tolerance: json!(tol), cutoff: json!(r.cutoff), body, table, code: if pass { exit::OK } else { exit::RESIDUAL } })
}

fn cmd_frustum(a: &FrustumArgs) -> Result<Report, Failure> {
    if !(a.l1 > 0.0 && a.l1 < a.l2) {
        return Err(Failure::Validation(format!("frustum needs 0 < l1 < l2, got {} and {}", a.l1, a.l2)));
    }
    let s = spectrum(&a.section)?;
    let f = frustum_global_torsion(&s, &profile(&a.profile)?, a.l1, a.l2)?;
    let status = if f.exact { "PASS" } else { "FAIL" };
    let table = format!(
        "frustum [{}, {}] over a dimension-{} section\nw0  {:>22.15}\nw1  {:>22.15}\nw2  {:>22.15}\nw3  {:>22.15}\ntotal        {:>22.15}\nclosed form  {:>22.15}\nexact        {}\n{status}\n",
        f.l1, f.l2, f.m, f.w0, f.w1, f.w2, f.w3, f.total, f.closed_form, f.exact
    );
    let mut body = serde_json::to_value(&f).expect("breakdown serializes");
    body["status"] = json!(status);
    Ok(Report { command: "frustum", tolerance: json!(0.0), cutoff: json!(s.cutoff), body, table, code: if f.exact { exit::OK } else { exit::MISMATCH } })
}

fn cmd_sl(a: &SlArgs) -> Result<Report, Failure> {
    let bc = match a.bc {
        BcArg::Rel => Boundary::Rel,
        BcArg::Abs => Boundary::Abs,
    };
    let ext = match a.ext {
        ExtArg::Plus => Extension::Plus,
        ExtArg::Minus => Extension::Minus,
    };
    let h = profile(&a.profile)?;
    let p = match (&a.frustum, a.l) {
        (Some(ab), None) => {
            if matches!(a.ext, ExtArg::Minus) {
                return Err(Failure::Validation("--ext applies to cones only".into()));
            }
            SLProblem::frustum(a.nu, a.alpha, h, ab[0], ab[1], bc)?
        }
        (None, Some(l)) => SLProblem::cone(a.nu, a.alpha, h, l, bc, ext)?,
        _ => return Err(Failure::Validation("give exactly one of --l and --frustum A B".into())),
    };
    if a.count == 0 {
        return Err(Failure::Validation("--count must be positive".into()));
    }
    let ev = eigenvalues(&p, a.count)?;
    let det = if a.det { Some(zeta_determinant(&p)?) } else { None };
    let mut table = String::from("k   eigenvalue\n");
    for (k, v) in ev.iter().enumerate() {
        writeln!(table, "{:<3} {v:.15e}", k + 1).unwrap();
    }
    if let Some(d) = det {
        writeln!(table, "-zeta'(0) = {d:.15}").unwrap();
    }
    let body = json!({
        "problem": p,
        "eigenvalues": ev,
        "minus_zeta_prime_at_zero": det,
    });
    Ok(Report { command: "sl", tolerance: json!(1e-13), cutoff: Value::Null, body, table, code: exit::OK })
}
