//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a yes/no check answers no (or an oracle
//! finds a mismatch), 2 on usage, input and budget errors.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cofree::is_cofree;
use crate::error::Error;
use crate::fiber::{fiber_description, nullcone_components};
use crate::flat::{classify_local, classify_point, singular_shape_check, FlatFamily, PointKind};
use crate::limits::Limits;
use crate::oracle::{catalog_oracles, instance_oracles, CatalogBounds, OracleReport};
use crate::quiver::{parse_input, QuiverSetting, RawQuiver, SettingInput};
use crate::rep_theory::{
    enumerate_decompositions, is_reduced, local_quiver, reduced_violation, simplicity, DecompositionJson, DecompositionType,
    LocalQuiverData, NotSimpleReason, ReducedViolation, SimpleVerdict,
};
use crate::toric::toric_model;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "qbs", version, about = "Quiver settings, flat loci and Brauer-Severi fibers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Decomposition type: `trivial`, `finest`, `blobs` (the blob
    /// decomposition of a reduced setting), an index into the
    /// `decompositions` listing, inline JSON or a JSON file.
    #[arg(long, global = true)]
    pub decomposition: Option<String>,
    /// Multiplicities γ: `a=2,b=1` or positional `2,1`. Overrides the file.
    #[arg(long, global = true)]
    pub gamma: Option<String>,
    /// Node limit for exhaustive searches (default: $QBS_BUDGET or 1000000).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Does the setting admit simple representations?
    CheckSimple { input: PathBuf },
    /// Is the setting reduced?
    CheckReduced { input: PathBuf },
    /// Is the setting cofree?
    CheckCofree { input: PathBuf },
    /// List all semisimple decomposition types.
    Decompositions { input: PathBuf },
    /// Local quiver of a decomposition type (default: trivial).
    LocalQuiver { input: PathBuf },
    /// Classify points (all decomposition types unless one is given) and look
    /// for a blob decomposition of reduced settings.
    FlatLocus { input: PathBuf },
    /// Fiber components over a flat point with their toric models. Without a
    /// decomposition the input is read as the local quiver itself.
    Fibers { input: PathBuf },
    /// Compare brute-force oracles with the fast paths, on one input or on
    /// the built-in catalog.
    Oracle {
        input: Option<PathBuf>,
        /// Largest vertex count of the catalog sweep.
        #[arg(long, default_value_t = 4)]
        max_vertices: usize,
        #[arg(long, default_value_t = 6)]
        max_arrows: usize,
        #[arg(long, default_value_t = 2)]
        max_dim: u64,
        /// Vertex bound for cycle sums in the toric sweep.
        #[arg(long, default_value_t = 4)]
        cycle_sum_vertices: usize,
        #[arg(long, default_value_t = 2)]
        max_gamma: u64,
    },
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::CheckSimple { .. } => "check-simple",
            Command::CheckReduced { .. } => "check-reduced",
            Command::CheckCofree { .. } => "check-cofree",
            Command::Decompositions { .. } => "decompositions",
            Command::LocalQuiver { .. } => "local-quiver",
            Command::FlatLocus { .. } => "flat-locus",
            Command::Fibers { .. } => "fibers",
            Command::Oracle { .. } => "oracle",
        }
    }
}

/// A finished report: JSON body, text rendering and exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub json: Value,
    pub text: String,
    pub status: i32,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => render_json(&self.json),
        }
    }
}

/// Pretty JSON with a trailing newline. Object keys come out sorted, so
/// parsing and re-rendering gives the same bytes.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn read_input(path: &Path) -> anyhow::Result<SettingInput> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let raw: RawQuiver = serde_json::from_str(&text).map_err(|e| json_error(&path.display().to_string(), &e))?;
    parse_input(&raw).with_context(|| format!("invalid quiver in {}", path.display()))
}

/// `file:line:col: message`, without serde's own position suffix.
fn json_error(source: &str, e: &serde_json::Error) -> anyhow::Error {
    let msg = e.to_string();
    let suffix = format!(" at line {} column {}", e.line(), e.column());
    let msg = msg.strip_suffix(&suffix).unwrap_or(&msg);
    anyhow!("{source}:{}:{}: {msg}", e.line(), e.column())
}

fn limits(options: &Options) -> Limits {
    match options.budget {
        Some(n) => Limits::with_node_limit(n),
        None => Limits::from_env(),
    }
}

fn parse_gamma(spec: &str, s: &QuiverSetting) -> anyhow::Result<Vec<u64>> {
    let q = &s.quiver;
    let parts: Vec<&str> = spec.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if parts.iter().all(|p| p.contains('=')) {
        let mut gamma = vec![None; q.vertex_count()];
        for p in parts {
            let (name, value) = p.split_once('=').expect("checked above");
            let v = q.index_of(name.trim()).ok_or_else(|| anyhow!("--gamma names unknown vertex `{name}`"))?;
            gamma[v] = Some(value.trim().parse::<u64>().with_context(|| format!("bad gamma value `{value}`"))?);
        }
        gamma
            .into_iter()
            .enumerate()
            .map(|(v, g)| g.ok_or_else(|| anyhow!("--gamma misses vertex `{}`", q.name(v))))
            .collect()
    } else {
        let gamma = parts
            .iter()
            .map(|p| p.parse::<u64>().with_context(|| format!("bad gamma value `{p}`")))
            .collect::<anyhow::Result<Vec<_>>>()?;
        if gamma.len() != q.vertex_count() {
            bail!("--gamma has {} entries for {} vertices", gamma.len(), q.vertex_count());
        }
        Ok(gamma)
    }
}

fn gamma_of(options: &Options, input: &SettingInput) -> anyhow::Result<Option<Vec<u64>>> {
    match &options.gamma {
        Some(spec) => parse_gamma(spec, &input.setting).map(Some),
        None => Ok(input.gamma.clone()),
    }
}

fn parse_decomposition(spec: &str, s: &QuiverSetting, limits: &Limits) -> anyhow::Result<DecompositionType> {
    let spec = spec.trim();
    let d = match spec {
        "trivial" => DecompositionType::trivial(s),
        "finest" => DecompositionType::finest(s),
        "blobs" => {
            if !is_reduced(s)? {
                bail!("`--decomposition blobs` needs a reduced setting");
            }
            singular_shape_check(s, limits)?
                .ok_or_else(|| anyhow!("the setting has no blob decomposition"))?
                .decomposition(s)
        }
        _ if spec.parse::<usize>().is_ok() => {
            let i: usize = spec.parse()?;
            let all = enumerate_decompositions(s, limits)?;
            let n = all.len();
            all.into_iter().nth(i).ok_or_else(|| anyhow!("decomposition index {i} out of range (0..{n})"))?
        }
        _ => {
            let text = if spec.starts_with('{') {
                spec.to_string()
            } else {
                std::fs::read_to_string(spec).with_context(|| format!("cannot read decomposition file {spec}"))?
            };
            let json: DecompositionJson =
                serde_json::from_str(&text).map_err(|e| json_error("decomposition", &e))?;
            DecompositionType::from_json(&json, &s.quiver)?
        }
    };
    d.validate(s)?;
    Ok(d)
}

fn envelope(verb: &str, input: Option<&Path>, body: Value) -> Value {
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "verb": verb,
        "input": input.map(|p| p.display().to_string()),
    });
    if let (Value::Object(target), Value::Object(extra)) = (&mut v, body) {
        target.extend(extra);
    }
    v
}

fn vertex_name(s: &QuiverSetting, v: usize) -> String {
    s.quiver.name(v).to_string()
}

fn simple_reason_text(s: &QuiverSetting, reason: &NotSimpleReason) -> String {
    match reason {
        NotSimpleReason::IncomingBound { vertex, chi } => format!("χ(α,ε_{}) = {chi} > 0", vertex_name(s, *vertex)),
        NotSimpleReason::OutgoingBound { vertex, chi } => format!("χ(ε_{},α) = {chi} > 0", vertex_name(s, *vertex)),
        other => other.to_string(),
    }
}

fn check_simple(s: &QuiverSetting) -> anyhow::Result<(Value, String, i32)> {
    let verdict = simplicity(s)?;
    let text = match &verdict {
        SimpleVerdict::Simple { case } => format!("simple: true (family: {case})\n"),
        SimpleVerdict::NotSimple { reason } => format!("simple: false (reason: {})\n", simple_reason_text(s, reason)),
    };
    let mut body = json!({ "simple": verdict.is_simple() });
    match &verdict {
        SimpleVerdict::Simple { case } => body["case"] = serde_json::to_value(case)?,
        SimpleVerdict::NotSimple { reason } => {
            let mut r = serde_json::to_value(reason)?;
            if let Some(v) = r.get("vertex").and_then(Value::as_u64) {
                r["vertex"] = json!(vertex_name(s, v as usize));
            }
            body["reason"] = r;
        }
    }
    Ok((body, text, if verdict.is_simple() { 0 } else { 1 }))
}

fn check_reduced(s: &QuiverSetting) -> anyhow::Result<(Value, String, i32)> {
    let violation = reduced_violation(s)?;
    let text = match &violation {
        None => "reduced: true\n".to_string(),
        Some(v) => format!("reduced: false ({})\n", violation_text(s, v)),
    };
    let mut body = json!({ "reduced": violation.is_none() });
    if let Some(v) = &violation {
        let mut r = serde_json::to_value(v)?;
        if let Some(i) = r.get("vertex").and_then(Value::as_u64) {
            r["vertex"] = json!(vertex_name(s, i as usize));
        }
        body["violation"] = r;
    }
    Ok((body, text, if violation.is_none() { 0 } else { 1 }))
}

fn violation_text(s: &QuiverSetting, v: &ReducedViolation) -> String {
    match v {
        ReducedViolation::LooplessBound { vertex, chi_in, chi_out } => format!(
            "loopless vertex {} has χ(α,ε) = {chi_in}, χ(ε,α) = {chi_out}, both must be ≤ -1",
            vertex_name(s, *vertex)
        ),
        ReducedViolation::OneLoopBound { vertex, chi_in, chi_out } => format!(
            "one-loop vertex {} has χ(α,ε) = {chi_in}, χ(ε,α) = {chi_out}, both must be ≤ -2",
            vertex_name(s, *vertex)
        ),
        ReducedViolation::LoopAtDimensionOne { vertex } => {
            format!("vertex {} has dimension 1 and a loop", vertex_name(s, *vertex))
        }
    }
}

fn check_cofree(s: &QuiverSetting, limits: &Limits) -> anyhow::Result<(Value, String, i32)> {
    let verdict = is_cofree(s, limits)?;
    let families: Vec<String> = verdict.families.values().map(ToString::to_string).collect();
    let mut text = format!("cofree: {} (families: {})\n", verdict.cofree, families.join(", "));
    for step in &verdict.trace {
        text.push_str(&format!("  removed {} into {}", step.removed, step.target));
        if !step.rerouted_from.is_empty() {
            text.push_str(&format!(" (rerouted from {})", step.rerouted_from.join(", ")));
        }
        text.push('\n');
    }
    let body = json!({
        "cofree": verdict.cofree,
        "families": families,
        "trace": serde_json::to_value(&verdict.trace)?,
    });
    Ok((body, text, if verdict.cofree { 0 } else { 1 }))
}

fn decompositions(s: &QuiverSetting, limits: &Limits) -> anyhow::Result<(Value, String, i32)> {
    let all = enumerate_decompositions(s, limits)?;
    let mut text = format!("{} decomposition types of {}\n", all.len(), s.dim);
    for (i, d) in all.iter().enumerate() {
        text.push_str(&format!("  {i}: {d}\n"));
    }
    let list: Vec<Value> =
        all.iter().map(|d| serde_json::to_value(d.to_json(&s.quiver))).collect::<Result<_, _>>()?;
    Ok((json!({ "count": all.len(), "decompositions": list }), text, 0))
}

fn local_quiver_text(local: &LocalQuiverData) -> String {
    let s = &local.setting;
    let mut text = format!("local quiver: {s}\n");
    text.push_str(&format!("  gamma: {:?}, n = {}\n", local.gamma, local.n));
    text
}

fn local_quiver_report(
    s: &QuiverSetting,
    gamma: Option<&[u64]>,
    d: &DecompositionType,
) -> anyhow::Result<(Value, String, i32)> {
    let local = local_quiver(s, d, gamma)?;
    let text = format!("decomposition: {d}\n{}", local_quiver_text(&local));
    let body = json!({
        "decomposition": serde_json::to_value(d.to_json(&s.quiver))?,
        "local_quiver": serde_json::to_value(local.to_json())?,
    });
    Ok((body, text, 0))
}

fn flat_locus(
    s: &QuiverSetting,
    gamma: Option<&[u64]>,
    chosen: Option<DecompositionType>,
    limits: &Limits,
) -> anyhow::Result<(Value, String, i32)> {
    let reduced = match reduced_violation(s) {
        Ok(v) => Some(v.is_none()),
        Err(Error::TooFewVertices | Error::NotStronglyConnected) => None,
        Err(e) => return Err(e.into()),
    };
    let shape = if reduced == Some(true) { singular_shape_check(s, limits)? } else { None };
    let mut text = String::new();
    // Past the enumeration caps only the trivial and the blob decomposition
    // are classified.
    let (all, enumerated) = match chosen {
        Some(d) => (vec![d], false),
        None => match enumerate_decompositions(s, limits) {
            Ok(all) => (all, true),
            Err(Error::BudgetExceeded { what, limit }) if what.starts_with("decomposition enumeration (") => {
                text.push_str(&format!("note: {what} exceeds {limit}; classifying the trivial and blob decompositions only\n"));
                let mut few = vec![DecompositionType::trivial(s)];
                few.extend(shape.as_ref().map(|sh| sh.decomposition(s)));
                (few, false)
            }
            Err(e) => return Err(e.into()),
        },
    };
    let mut points = Vec::new();
    for d in &all {
        let class = classify_point(s, gamma, d)?;
        let family = family_text(&class.families);
        text.push_str(&format!(
            "{d}: {}{}{}\n",
            class.kind,
            family.map(|f| format!(" (family: {f})")).unwrap_or_default(),
            class.fiber_dim.map(|k| format!(", fiber dimension {k}")).unwrap_or_default(),
        ));
        points.push(json!({
            "decomposition": serde_json::to_value(d.to_json(&s.quiver))?,
            "class": serde_json::to_value(class.to_json())?,
        }));
    }
    match (reduced, &shape) {
        (Some(true), Some(sh)) => {
            let j = sh.to_json(s);
            text.push_str(&format!(
                "reduced: true; singular shape with {} blobs {:?}, loops {:?}\n",
                j.blobs.len(),
                j.blobs,
                j.loops
            ));
        }
        (Some(true), None) => text.push_str("reduced: true; no singular shape\n"),
        (Some(false), _) => text.push_str("reduced: false\n"),
        (None, _) => text.push_str("reduced: not applicable\n"),
    }
    let body = json!({
        "enumerated": enumerated,
        "points": points,
        "reduced": reduced,
        "singular_shape": shape.map(|sh| serde_json::to_value(sh.to_json(s))).transpose()?,
    });
    Ok((body, text, 0))
}

/// `cycle ×3, doubled cycle`: runs of equal families collapsed.
fn family_text(families: &[FlatFamily]) -> Option<String> {
    let mut runs: Vec<(String, usize)> = Vec::new();
    for f in families.iter().map(ToString::to_string) {
        match runs.last_mut() {
            Some((last, k)) if *last == f => *k += 1,
            _ => runs.push((f, 1)),
        }
    }
    let parts: Vec<String> =
        runs.into_iter().map(|(f, k)| if k == 1 { f } else { format!("{f} ×{k}") }).collect();
    (!parts.is_empty()).then(|| parts.join(", "))
}

fn fibers(
    s: &QuiverSetting,
    gamma: Option<&[u64]>,
    chosen: Option<DecompositionType>,
    limits: &Limits,
) -> anyhow::Result<(Value, String, i32)> {
    let local = match &chosen {
        Some(d) => local_quiver(s, d, gamma)?,
        None => LocalQuiverData::new(s.clone(), gamma.map(<[u64]>::to_vec).unwrap_or_else(|| vec![1; s.vertex_count()]))?,
    };
    let class = classify_local(local.clone())?;
    if class.kind == PointKind::NonFlat {
        bail!("the point is not flat; fibers are described over flat points only");
    }
    let description = fiber_description(&local)?;
    let components = nullcone_components(&local)?;
    let mut json = description.to_json(&local.setting.quiver);
    let mut text = format!(
        "{}n = {}, {} fiber components, dimension {}\n",
        local_quiver_text(&local),
        local.n,
        components.len(),
        description.dimension().map_or("mixed".to_string(), |d| d.to_string())
    );
    for (i, (component, fiber)) in components.iter().zip(&description.components).enumerate() {
        let model = toric_model(component, &local.gamma, limits)?;
        let q = &local.setting.quiver;
        let zeroed: Vec<String> = component
            .zeroed_arrows
            .iter()
            .map(|&a| format!("{}->{}", q.name(q.arrow(a).tail), q.name(q.arrow(a).head)))
            .collect();
        let roots: Vec<&str> = component.roots.iter().map(|&r| q.name(r)).collect();
        text.push_str(&format!(
            "  component {i}: zeroed [{}], roots [{}], dimension {}, lattice rank {}, betti {:?}\n",
            zeroed.join(", "),
            roots.join(", "),
            fiber.dimension,
            model.extended.lattice_rank(),
            model.betti
        ));
        text.push_str(&format!(
            "    cohomology: Z[{}] / ({})\n",
            model.cohomology.to_json().generators.iter().map(|g| format!("D_{g}")).collect::<Vec<_>>().join(", "),
            model
                .cohomology
                .to_json()
                .relations
                .iter()
                .map(|r| r.iter().map(|f| format!("({f})")).collect::<String>())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        let entry = &mut json["components"][i];
        entry["betti"] = json!(model.betti);
        entry["toric"] = model.to_json();
    }
    let body = json!({
        "decomposition": chosen.map(|d| serde_json::to_value(d.to_json(&s.quiver))).transpose()?,
        "local_quiver": serde_json::to_value(local.to_json())?,
        "kind": class.kind,
        "fiber": json,
    });
    Ok((body, text, 0))
}

fn oracle_text(report: &OracleReport) -> String {
    let mut text = String::new();
    for c in &report.checks {
        let verdict = if c.mismatches.is_empty() { "ok" } else { "MISMATCH" };
        text.push_str(&format!("{verdict:>8}  {} ({} instances)\n", c.name, c.instances));
        for m in &c.mismatches {
            text.push_str(&format!("          {m}\n"));
        }
    }
    text.push_str(if report.passed() { "oracle: pass\n" } else { "oracle: FAIL\n" });
    text
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> anyhow::Result<Report> {
    let options = &cli.options;
    let limits = limits(options);
    let verb = cli.command.verb();
    let (input_path, (body, text, status)) = match &cli.command {
        Command::Oracle { input: None, max_vertices, max_arrows, max_dim, cycle_sum_vertices, max_gamma } => {
            let bounds = CatalogBounds {
                max_vertices: *max_vertices,
                max_arrows: *max_arrows,
                max_dim: *max_dim,
                cycle_sum_vertices: *cycle_sum_vertices,
                max_gamma: *max_gamma,
            };
            let report = catalog_oracles(&bounds, &limits)?;
            let status = if report.passed() { 0 } else { 1 };
            (None, (json!({ "passed": report.passed(), "checks": report.checks }), oracle_text(&report), status))
        }
        Command::Oracle { input: Some(path), .. } => {
            let input = read_input(path)?;
            let gamma = gamma_of(options, &input)?;
            let report = instance_oracles(&input.setting, gamma.as_deref(), &limits)?;
            let status = if report.passed() { 0 } else { 1 };
            (Some(path), (json!({ "passed": report.passed(), "checks": report.checks }), oracle_text(&report), status))
        }
        Command::CheckSimple { input }
        | Command::CheckReduced { input }
        | Command::CheckCofree { input }
        | Command::Decompositions { input }
        | Command::LocalQuiver { input }
        | Command::FlatLocus { input }
        | Command::Fibers { input } => {
            let parsed = read_input(input)?;
            let s = &parsed.setting;
            let gamma = gamma_of(options, &parsed)?;
            let chosen = options.decomposition.as_deref().map(|d| parse_decomposition(d, s, &limits)).transpose()?;
            let out = match &cli.command {
                Command::CheckSimple { .. } => check_simple(s)?,
                Command::CheckReduced { .. } => check_reduced(s)?,
                Command::CheckCofree { .. } => check_cofree(s, &limits)?,
                Command::Decompositions { .. } => decompositions(s, &limits)?,
                Command::LocalQuiver { .. } => {
                    let d = chosen.unwrap_or_else(|| DecompositionType::trivial(s));
                    local_quiver_report(s, gamma.as_deref(), &d)?
                }
                Command::FlatLocus { .. } => flat_locus(s, gamma.as_deref(), chosen, &limits)?,
                Command::Fibers { .. } => fibers(s, gamma.as_deref(), chosen, &limits)?,
                Command::Oracle { .. } => unreachable!("handled above"),
            };
            (Some(input), out)
        }
    };
    Ok(Report { json: envelope(verb, input_path.map(PathBuf::as_path), body), text, status })
}

fn error_message(e: &anyhow::Error) -> String {
    let mut msg = format!("error: {e:#}");
    if e.chain().any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::BudgetExceeded { .. }))) {
        msg.push_str("\nnote: the search stopped early and no partial result is reported; raise --budget or QBS_BUDGET");
    }
    msg
}

/// Parses `args`, runs the command and returns the exit status, writing the
/// report to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { 2 } else { 0 };
            let _ = if status == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return status;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let _ = out.write_all(report.render(cli.options.format).as_bytes());
            report.status
        }
        Err(e) => {
            let _ = writeln!(err, "{}", error_message(&e));
            2
        }
    }
}

pub fn main() -> std::process::ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let status = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::ExitCode::from(status as u8)
}
