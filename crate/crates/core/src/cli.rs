//! Command-line front end. Form files are JSON objects
//! `{"dim":2,"gram":[["2","1"],["1","2"]],"name":"A2"}` with rationals as
//! quoted text; every report is JSON with rationals as text.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::audit::{audit_form, default_samples, AuditReport};
use crate::cone::{extreme_rays, form_space_dim, is_dicing, secondary_cone};
use crate::delaunay::{delaunay_star, fingerprint};
use crate::error::Error;
use crate::form::GramForm;
use crate::lamina::{
    alpha_squared, breaking_lambda, contraction_limit, extend_form, is_lamina, lamina_candidates,
};
use crate::rational::{format_int_vector, format_rational, parse_int_list, parse_rational, IntVector, RatMatrix, Rational};
use crate::voronoi::{build_face_poset, classified_zones, voronoi_polytope, zone_functional};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Star,
    Voronoi,
    Zones,
    Laminae,
    Cone,
    Extend,
    Audit,
}

#[derive(Debug, Parser)]
#[command(name = "zonelab", version, about = "Exact Delaunay, Voronoi and lamina analysis of lattice Gram matrices")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Form file (JSON).
    pub file: Option<PathBuf>,
    /// Primitive functional, comma separated.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_k)]
    pub k: Option<IntVector>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_lambda)]
    pub lambda: Option<Rational>,
    /// Extension coefficients for invariance sampling, comma separated.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_samples)]
    pub lambda_samples: Option<Vec<Rational>>,
    #[arg(long, default_value_t = 5)]
    pub dim_limit: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Audit every `*.json` form file in this directory, by file name.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

fn parse_k(s: &str) -> Result<IntVector, String> {
    parse_int_list(s).map_err(|e| format!("--k: {e}"))
}

fn parse_lambda(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| format!("--lambda: {e}"))
}

fn parse_samples(s: &str) -> Result<Vec<Rational>, String> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).map_err(|e| format!("--lambda-samples: {e}")))
        .collect()
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub k: Option<IntVector>,
    pub lambda: Option<Rational>,
    pub lambda_samples: Vec<Rational>,
    pub dim_limit: usize,
    pub output: Option<PathBuf>,
}

impl From<&Cli> for RunConfig {
    fn from(cli: &Cli) -> Self {
        RunConfig {
            command: cli.command,
            k: cli.k.clone(),
            lambda: cli.lambda.clone(),
            lambda_samples: cli.lambda_samples.clone().unwrap_or_else(default_samples),
            dim_limit: cli.dim_limit,
            output: cli.out.clone(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Analysis(#[from] Error),
}

impl CliError {
    pub fn status(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Analysis(_) => 1,
        }
    }
}

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFormFile {
    dim: usize,
    gram: Vec<Vec<String>>,
    name: Option<String>,
}

#[derive(Serialize)]
struct CanonicalFormFile<'a> {
    dim: usize,
    gram: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<&'a str>,
}

/// A validated form file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormFile {
    pub name: Option<String>,
    pub form: GramForm,
}

impl FormFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let raw: RawFormFile = serde_json::from_str(text).map_err(|e| input(format!("form file: {e}")))?;
        if raw.gram.len() != raw.dim {
            return Err(input(format!("gram: {} rows, dim is {}", raw.gram.len(), raw.dim)));
        }
        let mut entries: RatMatrix = Vec::with_capacity(raw.dim);
        for (i, row) in raw.gram.iter().enumerate() {
            if row.len() != raw.dim {
                return Err(input(format!("gram[{i}]: {} entries, dim is {}", row.len(), raw.dim)));
            }
            let parsed = row
                .iter()
                .enumerate()
                .map(|(j, t)| parse_rational(t).map_err(|e| input(format!("gram[{i}][{j}]: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            entries.push(parsed);
        }
        let form = GramForm::new(entries).map_err(|e| match e {
            Error::NotSymmetric => input("gram: not symmetric"),
            Error::NotPositiveDefinite => input("gram: not positive definite"),
            other => input(format!("gram: {other}")),
        })?;
        Ok(FormFile { name: raw.name, form })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| input(format!("{}: {e}", path.display())))
    }

    /// Compact canonical JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let file = CanonicalFormFile {
            dim: self.form.dim(),
            gram: matrix_text(self.form.entries()),
            name: self.name.as_deref(),
        };
        serde_json::to_string(&file).expect("serializable") + "\n"
    }
}

fn matrix_text(m: &RatMatrix) -> Vec<Vec<String>> {
    m.iter().map(|row| row.iter().map(format_rational).collect()).collect()
}

fn vector_text(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CellReport {
    vertices: Vec<IntVector>,
    center: Vec<String>,
    radius_sq: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct StarReport {
    name: Option<String>,
    dim: usize,
    cells: Vec<CellReport>,
    fingerprint: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ZoneReport {
    direction: IntVector,
    functional: IntVector,
    edges: Vec<usize>,
    closed: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VoronoiReport {
    name: Option<String>,
    dim: usize,
    relevant_vectors: Vec<IntVector>,
    vertices: Vec<Vec<String>>,
    f_vector: Vec<usize>,
    /// `faces[d]` lists the vertex indices of every `d`-face.
    faces: Vec<Vec<Vec<usize>>>,
    zones: Vec<ZoneReport>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ZonesReport {
    name: Option<String>,
    dim: usize,
    closed_count: usize,
    zones: Vec<ZoneReport>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct LaminaEntry {
    k: IntVector,
    is_lamina: bool,
    alpha_sq: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    breaking_lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    contraction_limit: Option<String>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct LaminaeReport {
    name: Option<String>,
    dim: usize,
    directions: Vec<LaminaEntry>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RayReport {
    matrix: Vec<IntVector>,
    rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<IntVector>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ConeReport {
    name: Option<String>,
    dim: usize,
    space_dim: usize,
    cone_dim: usize,
    equalities: Vec<Vec<Vec<String>>>,
    inequalities: Vec<Vec<Vec<String>>>,
    rays: Vec<RayReport>,
    dicing: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CorpusReport {
    reports: Vec<AuditReport>,
    pass: bool,
}

/// Exit status, JSON text and a one-line human summary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub report: String,
    pub summary: String,
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn check_dim(cfg: &RunConfig, file: &FormFile) -> Result<(), CliError> {
    let n = file.form.dim();
    if n > cfg.dim_limit {
        return Err(input(format!("dim: {n} exceeds --dim-limit {}", cfg.dim_limit)));
    }
    Ok(())
}

fn label(file: &FormFile) -> &str {
    file.name.as_deref().unwrap_or("form")
}

fn zone_reports(q: &GramForm) -> Result<(Vec<ZoneReport>, crate::voronoi::HPolytope, crate::voronoi::FacePoset), Error> {
    let p = voronoi_polytope(q)?;
    let poset = build_face_poset(&p)?;
    let zones = classified_zones(&poset)?
        .iter()
        .map(|z| {
            Ok(ZoneReport {
                direction: z.direction.clone(),
                functional: zone_functional(q, z)?,
                edges: z.edge_ids.clone(),
                closed: z.closed.unwrap_or(false),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok((zones, p, poset))
}

/// Runs one command on one validated form file.
pub fn run_command(cfg: &RunConfig, file: &FormFile) -> Result<Outcome, CliError> {
    check_dim(cfg, file)?;
    let q = &file.form;
    let n = q.dim();
    let name = file.name.clone();
    let ok = |report: String, summary: String| Ok(Outcome { status: 0, report, summary });
    match cfg.command {
        Command::Star => {
            let star = delaunay_star(q)?;
            let cells = star
                .cells
                .iter()
                .map(|c| CellReport {
                    vertices: c.vertices.clone(),
                    center: vector_text(&c.center),
                    radius_sq: format_rational(&c.radius_sq),
                })
                .collect::<Vec<_>>();
            let summary = format!("{}: {} star cells", label(file), cells.len());
            ok(json(&StarReport { name, dim: n, cells, fingerprint: fingerprint(&star).0 }), summary)
        }
        Command::Voronoi => {
            let (zones, p, poset) = zone_reports(q)?;
            let faces = (0..=n)
                .map(|d| poset.face_ids_of_dim(d).map(|f| poset.faces[f].vertex_set.clone()).collect())
                .collect();
            let report = VoronoiReport {
                name,
                dim: n,
                relevant_vectors: p.inequalities.iter().map(|h| h.normal.clone()).collect(),
                vertices: poset.vertices.iter().map(|v| vector_text(v)).collect(),
                f_vector: poset.f_vector(),
                faces,
                zones,
            };
            let summary = format!("{}: f-vector {:?}", label(file), report.f_vector);
            ok(json(&report), summary)
        }
        Command::Zones => {
            let (zones, _, _) = zone_reports(q)?;
            let closed_count = zones.iter().filter(|z| z.closed).count();
            let summary = format!("{}: {} zones, {closed_count} closed", label(file), zones.len());
            ok(json(&ZonesReport { name, dim: n, closed_count, zones }), summary)
        }
        Command::Laminae => {
            let star = delaunay_star(q)?;
            let ks: Vec<IntVector> = match &cfg.k {
                Some(k) => vec![k.clone()],
                None => {
                    let (zones, _, _) = zone_reports(q)?;
                    let mut all = lamina_candidates(&star);
                    all.extend(zones.into_iter().map(|z| z.functional));
                    all.sort();
                    all.dedup();
                    all
                }
            };
            let mut directions = Vec::with_capacity(ks.len());
            for k in ks {
                let lamina = is_lamina(&star, &k).map_err(|e| input(format!("--k: {e}")))?;
                let (breaking, contraction) = if lamina {
                    (None, Some(format_rational(&contraction_limit(q, &star, &k)?)))
                } else {
                    (Some(format_rational(&breaking_lambda(q, &star, &k)?)), None)
                };
                directions.push(LaminaEntry {
                    alpha_sq: format_rational(&alpha_squared(q, &k)?),
                    k,
                    is_lamina: lamina,
                    breaking_lambda: breaking,
                    contraction_limit: contraction,
                });
            }
            let count = directions.iter().filter(|d| d.is_lamina).count();
            let summary = format!("{}: {count} laminae among {} directions", label(file), directions.len());
            ok(json(&LaminaeReport { name, dim: n, directions }), summary)
        }
        Command::Cone => {
            let cone = secondary_cone(q)?;
            let rays = extreme_rays(&cone)?;
            let report = ConeReport {
                name,
                dim: n,
                space_dim: form_space_dim(n),
                cone_dim: cone.cone_dim(),
                equalities: cone.equalities.iter().map(|f| matrix_text(&f.coefficients)).collect(),
                inequalities: cone.inequalities.iter().map(|f| matrix_text(&f.coefficients)).collect(),
                dicing: is_dicing(&rays),
                rays: rays
                    .into_iter()
                    .map(|r| RayReport { matrix: r.matrix, rank: r.rank, k: r.k })
                    .collect(),
            };
            let summary = format!(
                "{}: cone dimension {}, {} extreme rays, dicing {}",
                label(file),
                report.cone_dim,
                report.rays.len(),
                report.dicing
            );
            ok(json(&report), summary)
        }
        Command::Extend => {
            let k = cfg.k.as_ref().ok_or_else(|| input("--k is required for extend"))?;
            let lambda = cfg.lambda.as_ref().ok_or_else(|| input("--lambda is required for extend"))?;
            let extended = extend_form(q, k, lambda).map_err(|e| input(format!("--k/--lambda: {e}")))?;
            let out = FormFile { name, form: extended };
            let summary = format!("{}: extended along {} by {}", label(file), format_int_vector(k), format_rational(lambda));
            ok(out.to_json(), summary)
        }
        Command::Audit => {
            let report = audit_form(q, file.name.as_deref(), &cfg.lambda_samples)?;
            let c = &report.counts;
            let summary = format!(
                "{}: counts ({},{},{}) {}",
                label(file),
                c.closed_zones,
                c.laminae,
                c.rank1_rays,
                if report.pass { "PASS" } else { "FAIL" }
            );
            Ok(Outcome { status: if report.pass { 0 } else { 1 }, report: json(&report), summary })
        }
    }
}

/// Audits form files in the given order.
pub fn run_corpus(cfg: &RunConfig, files: &[FormFile]) -> Result<Outcome, CliError> {
    let mut reports = Vec::with_capacity(files.len());
    let mut summary = String::new();
    for file in files {
        check_dim(cfg, file)?;
        let report = audit_form(&file.form, file.name.as_deref(), &cfg.lambda_samples)?;
        let c = &report.counts;
        let _ = writeln!(
            summary,
            "{}: counts ({},{},{}) {}",
            label(file),
            c.closed_zones,
            c.laminae,
            c.rank1_rays,
            if report.pass { "PASS" } else { "FAIL" }
        );
        reports.push(report);
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok(Outcome {
        status: if pass { 0 } else { 1 },
        report: json(&CorpusReport { reports, pass }),
        summary: summary.trim_end().to_owned(),
    })
}

/// Form files of a corpus directory, sorted by file name.
pub fn load_corpus(dir: &Path) -> Result<Vec<FormFile>, CliError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| input(format!("--corpus {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| FormFile::load(p)).collect()
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = RunConfig::from(cli);
    match (&cli.corpus, &cli.file) {
        (Some(dir), None) if cli.command == Command::Audit => run_corpus(&cfg, &load_corpus(dir)?),
        (Some(_), _) => Err(input("--corpus takes no form file and only applies to audit")),
        (None, Some(path)) => run_command(&cfg, &FormFile::load(path)?),
        (None, None) => Err(input("missing form file")),
    }
}

/// Full program: parse arguments, run, write the report and a summary with
/// timing to `err`. Returns the exit status.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let start = Instant::now();
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.status();
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.report).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(outcome.report.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return 2;
    }
    let _ = writeln!(err, "{}", outcome.summary);
    let _ = writeln!(err, "elapsed: {:.3}s", start.elapsed().as_secs_f64());
    outcome.status
}
