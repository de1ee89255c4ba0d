//! Command-line front end. Each subcommand wraps one decider and emits a
//! [`Report`]; the exit code is a function of the verdict alone.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::ConnectedAlgebra;
use crate::dga::{DgAlgebraPresentation, TriangularPresentation};
use crate::equivariant::{self, EmbeddingHint, OrbitFlags};
use crate::error::{Error, Result};
use crate::json::{self, RingJson};
use crate::module::DegreeWindow;
use crate::par::{self, Execution};
use crate::poly::GradedPolyRing;
use crate::resolution::{self, ProjectiveDimension, ResolutionStatus};
use crate::smoothness::{self, SmoothnessVerdict, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_INPUT: i32 = 64;

pub const WINDOW_ENV: &str = "DGSMOOTH_DEFAULT_WINDOW";

#[derive(Parser, Debug)]
#[command(name = "dgsmooth", version, about = "Exact smoothness checks for dg algebras over graded polynomial rings")]
pub struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Bounds {
    /// Internal degree window LO:HI
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Maximal resolution length
    #[arg(long)]
    pub max_length: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Minimal free resolution of a module over its polynomial ring
    Resolve {
        #[arg(long)]
        module: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Smoothness of a dg algebra over its base ring or over the field
    CheckAlgebra {
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, conflicts_with = "diagonal_tor")]
        over_field: bool,
        /// Resolve the diagonal of the commutative algebra ring/(relations)
        #[arg(long)]
        diagonal_tor: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Smoothness of [B 0; N A] from its components
    Triangular {
        /// B
        #[arg(long)]
        upper: PathBuf,
        /// A
        #[arg(long)]
        lower: PathBuf,
        /// N, with a left action of A and a right action of B
        #[arg(long)]
        connecting: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Smoothness of a homogeneous space G/H
    Equivariant {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        subgroup: PathBuf,
        /// `standard` or a comma-separated list of group factor indices
        #[arg(long, default_value = "standard")]
        hint: String,
    },
    /// G-smoothness of a variety with finitely many orbits
    Variety {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "standard")]
        hint: String,
        /// Worker threads for the per-orbit checks; 1 runs sequentially
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub verdict: String,
    pub criterion: Option<String>,
    pub exit_code: i32,
    pub window: Option<DegreeWindow>,
    pub max_length: Option<usize>,
    pub details: Value,
    pub elapsed_ms: u64,
}

impl Report {
    fn new(command: &str, verdict: impl Into<String>, exit_code: i32) -> Self {
        Report {
            command: command.into(),
            verdict: verdict.into(),
            criterion: None,
            exit_code,
            window: None,
            max_length: None,
            details: Value::Null,
            elapsed_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("command: {}\nverdict: {}\n", self.command, self.verdict);
        if let Some(c) = &self.criterion {
            out += &format!("criterion: {c}\n");
        }
        out += &format!("exit_code: {}\n", self.exit_code);
        if let Some(w) = &self.window {
            out += &format!("window: {w}\n");
        }
        if let Some(l) = self.max_length {
            out += &format!("max_length: {l}\n");
        }
        flatten_into(&mut out, "", &self.details);
        out += &format!("elapsed_ms: {}\n", self.elapsed_ms);
        out
    }
}

fn flatten_into(out: &mut String, prefix: &str, v: &Value) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Null => {}
        Value::Object(map) => {
            for (k, x) in map {
                flatten_into(out, &key(k), x);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            *out += &format!("{prefix}: [{}]\n", parts.join(", "));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten_into(out, &key(&i.to_string()), x);
            }
        }
        other => *out += &format!("{prefix}: {}\n", scalar(other)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn window_or_default(given: &Option<String>, max_degree: i32) -> Result<DegreeWindow> {
    if let Some(w) = given {
        return DegreeWindow::parse(w);
    }
    match std::env::var(WINDOW_ENV) {
        Ok(w) if !w.trim().is_empty() => DegreeWindow::parse(&w),
        _ => Ok(smoothness::default_window(max_degree)),
    }
}

fn parse_ring(src: &str) -> Result<GradedPolyRing> {
    let v: Value = serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
    let ring = v.get("ring").cloned().unwrap_or(v);
    let r: RingJson = serde_json::from_value(ring).map_err(|e| Error::Parse(e.to_string()))?;
    GradedPolyRing::new(r.generators.iter().map(|g| (g.name.clone(), g.degree)))
}

pub fn verdict_exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Smooth => EXIT_OK,
        Verdict::NotSmooth => EXIT_NEGATIVE,
        Verdict::Undecided => EXIT_UNDECIDED,
    }
}

fn smoothness_report(command: &str, v: &SmoothnessVerdict) -> Report {
    let mut r = Report::new(command, v.verdict.to_string(), verdict_exit_code(v.verdict));
    r.criterion = Some(v.criterion.clone());
    r.details = json!({
        "witness": v.witness,
        "failing_component": v.failing_component,
        "components": v.components,
        "note": v.note,
    });
    r
}

/// Hypothesis failures are an outcome, not an input error.
fn undecided_on_hypothesis(command: &str, criterion: &str, result: Result<Report>) -> Result<Report> {
    match result {
        Err(Error::HypothesisViolated { degree, hypothesis }) => {
            let mut r = Report::new(command, "HYPOTHESIS_VIOLATED", EXIT_UNDECIDED);
            r.criterion = Some(criterion.into());
            r.details = json!({ "degree": degree, "hypothesis": hypothesis });
            Ok(r)
        }
        Err(Error::ReductionUnavailable(msg)) => {
            let mut r = Report::new(command, Verdict::Undecided.to_string(), EXIT_UNDECIDED);
            r.criterion = Some(criterion.into());
            r.details = json!({ "note": msg });
            Ok(r)
        }
        other => other,
    }
}

fn cmd_resolve(module: &Path, bounds: &Bounds) -> Result<Report> {
    let m = json::parse_module(&read(module)?)?;
    let window = window_or_default(&bounds.window, m.max_presentation_degree())?;
    let len = bounds.max_length.unwrap_or(m.ring().num_vars() + 1);
    let res = resolution::minimal_resolution(&m, len, window)?;
    let pd = res.projective_dimension();
    let (verdict, code) = match (pd, res.status()) {
        (ProjectiveDimension::ZeroModule | ProjectiveDimension::Finite(_), ResolutionStatus::Complete) => ("COMPLETE", EXIT_OK),
        _ => ("TRUNCATED", EXIT_UNDECIDED),
    };
    let mut r = Report::new("resolve", verdict, code);
    r.criterion = Some(smoothness::RESOLUTION_TOR.into());
    r.window = Some(window);
    r.max_length = Some(len);
    let stages: Vec<Value> = res
        .stages()
        .iter()
        .enumerate()
        .map(|(s, st)| json!({ "stage": s, "generator_degrees": st.generator_degrees }))
        .collect();
    let fiber = res.derived_fiber();
    r.details = json!({
        "stages": stages,
        "projective_dimension": match pd {
            ProjectiveDimension::ZeroModule => json!("ZERO_MODULE"),
            ProjectiveDimension::Finite(n) => json!(n),
            ProjectiveDimension::Truncated => json!("TRUNCATED"),
        },
        "certified": res.is_certified(),
        "derived_fiber": fiber.dims.to_string(),
        "derived_fiber_lower_bound_only": fiber.lower_bound_only,
    });
    Ok(r)
}

/// Over the field, a cyclic algebra `K/I` with zero differential is read as
/// the commutative `Q`-algebra `K/I`.
fn as_field_algebra(a: DgAlgebraPresentation, window: DegreeWindow) -> Result<DgAlgebraPresentation> {
    if a.base_ring().is_field() {
        return Ok(a);
    }
    let q = a.as_quotient_ring().ok_or_else(|| {
        Error::InconsistentInput("--over-field needs an algebra over Q or a cyclic algebra K/I with zero differential".into())
    })?;
    if q.top_degree().is_none() {
        return Err(Error::hypothesis(window.hi, "H(T) bounded above"));
    }
    DgAlgebraPresentation::from_quotient_ring(&q)
}

fn cmd_check_algebra(base: Option<&Path>, algebra: &Path, over_field: bool, diagonal_tor: bool, bounds: &Bounds) -> Result<Report> {
    let a = json::parse_algebra(&read(algebra)?)?;
    let base = base.map(|p| read(p).and_then(|s| parse_ring(&s))).transpose()?;
    if over_field || diagonal_tor {
        if let Some(k) = &base {
            if !k.is_field() {
                return Err(Error::InconsistentInput("this criterion works over Q; pass a base with no generators or omit --base".into()));
            }
        }
    }
    if diagonal_tor {
        let q = a.as_quotient_ring().ok_or_else(|| {
            Error::InconsistentInput("--diagonal-tor needs a cyclic algebra K/I with zero differential".into())
        })?;
        let window = window_or_default(&bounds.window, 2 * a.max_presentation_degree().max(q.ring().max_generator_degree()))?;
        let len = bounds.max_length.unwrap_or(smoothness::default_max_length(q.is_regular(), 2 * q.ring().num_vars()));
        let v = smoothness::decide_diagonal_tor(&q, len, window)?;
        let mut r = smoothness_report("check-algebra --diagonal-tor", &v);
        r.window = Some(window);
        r.max_length = Some(len);
        return Ok(r);
    }
    if over_field {
        let window = window_or_default(&bounds.window, a.max_presentation_degree())?;
        let result = as_field_algebra(a, window)
            .and_then(|t| smoothness::decide_smooth_over_field(&t, window))
            .map(|v| smoothness_report("check-algebra --over-field", &v));
        let mut r = undecided_on_hypothesis("check-algebra --over-field", smoothness::FIELD_CRITERION, result)?;
        r.window = Some(window);
        return Ok(r);
    }
    let k = base.ok_or_else(|| Error::Parse("--base is required unless --over-field or --diagonal-tor is given".into()))?;
    if &k != a.base_ring() {
        return Err(Error::InconsistentInput("the algebra is not defined over the given base".into()));
    }
    let window = window_or_default(&bounds.window, a.max_presentation_degree())?;
    let result = smoothness::decide_smooth_over_base(&k, &a, window).map(|v| smoothness_report("check-algebra", &v));
    let mut r = undecided_on_hypothesis("check-algebra", smoothness::BASE_RING_CRITERION, result)?;
    r.window = Some(window);
    Ok(r)
}

fn cmd_triangular(upper: &Path, lower: &Path, connecting: &Path, bounds: &Bounds) -> Result<Report> {
    let b = Arc::new(json::parse_algebra(&read(upper)?)?);
    let a = Arc::new(json::parse_algebra(&read(lower)?)?);
    let n = json::parse_bimodule(&read(connecting)?, a.clone(), b.clone())?;
    let maxdeg = a.max_presentation_degree().max(b.max_presentation_degree());
    let window = window_or_default(&bounds.window, maxdeg)?;
    let len = bounds.max_length.unwrap_or(smoothness::default_max_length(false, 0));
    let e = TriangularPresentation::new(n)?;
    let result = smoothness::decide_triangular(&e, len, window).map(|v| smoothness_report("triangular", &v));
    let mut r = undecided_on_hypothesis("triangular", smoothness::TRIANGULAR, result)?;
    r.window = Some(window);
    r.max_length = Some(len);
    Ok(r)
}

fn cmd_equivariant(group: &Path, subgroup: &Path, hint: &str) -> Result<Report> {
    let g = json::parse_group(&read(group)?)?;
    let h = json::parse_group(&read(subgroup)?)?;
    let hint: EmbeddingHint = hint.parse()?;
    let rep = equivariant::check_homogeneous_space(&g, &h, &hint, OrbitFlags::default())?;
    let (verdict, code) = if rep.smooth { ("SMOOTH", EXIT_OK) } else { ("NOT_SMOOTH", EXIT_NEGATIVE) };
    let mut r = Report::new("equivariant", verdict, code);
    r.criterion = Some("maximal-compact-comparison".into());
    r.details = serde_json::to_value(&rep).expect("reports serialize");
    Ok(r)
}

fn cmd_variety(input: &Path, hint: &str, jobs: Option<usize>) -> Result<Report> {
    let x = json::parse_variety(&read(input)?)?;
    let hint: EmbeddingHint = hint.parse()?;
    let rep = match jobs {
        Some(1) => equivariant::check_variety_with(Execution::Sequential, &x, &hint)?,
        Some(n) => par::with_threads(n, || equivariant::check_variety(&x, &hint))?,
        None => equivariant::check_variety(&x, &hint)?,
    };
    let (verdict, code) = if rep.smooth { ("G_SMOOTH", EXIT_OK) } else { ("NOT_G_SMOOTH", EXIT_NEGATIVE) };
    let mut r = Report::new("variety", verdict, code);
    r.criterion = Some("orbitwise-maximal-compact-comparison".into());
    r.details = serde_json::to_value(&rep).expect("reports serialize");
    Ok(r)
}

pub fn execute(command: &Command) -> Result<Report> {
    let start = Instant::now();
    let mut r = match command {
        Command::Resolve { module, bounds } => cmd_resolve(module, bounds),
        Command::CheckAlgebra { base, algebra, over_field, diagonal_tor, bounds } => {
            cmd_check_algebra(base.as_deref(), algebra, *over_field, *diagonal_tor, bounds)
        }
        Command::Triangular { upper, lower, connecting, bounds } => cmd_triangular(upper, lower, connecting, bounds),
        Command::Equivariant { group, subgroup, hint } => cmd_equivariant(group, subgroup, hint),
        Command::Variety { input, hint, jobs } => cmd_variety(input, hint, *jobs),
    }?;
    r.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(r)
}

/// Parses `args`, runs the command, prints the report and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(r) => {
            match cli.format {
                Format::Json => println!("{}", r.to_json()),
                Format::Text => print!("{}", r.to_text()),
            }
            r.exit_code
        }
        Err(e) => {
            eprintln!("dgsmooth: {e}");
            EXIT_INPUT
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_contains_json_fields() {
        let mut r = Report::new("resolve", "COMPLETE", 0);
        r.details = json!({ "stages": [{ "stage": 0, "generator_degrees": [0] }], "certified": true });
        let text = r.to_text();
        assert!(text.contains("stages.0.generator_degrees: [0]"));
        assert!(text.contains("certified: true"));
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn parse_errors_exit_64() {
        assert_eq!(run(["dgsmooth", "resolve"]), EXIT_INPUT);
        assert_eq!(run(["dgsmooth", "resolve", "--module", "/nonexistent/m.json"]), EXIT_INPUT);
    }
}
