//! Front end for `orthocurv`. `main.rs` only parses arguments and prints.

mod report;
mod text;

use std::collections::BTreeMap;
use std::path::PathBuf;

use orthocurv_core::curvature::{
    closed_form_table, flatness_check_with, ComponentStatus, Coverage, FlatnessMode, FlatnessVerdict,
};
use orthocurv_core::metric::MetricError;
use orthocurv_core::oracle::{compare, ll_applicable, ll_table, mathpages_table, riemann_frame};
use orthocurv_core::{
    cartan, DiagonalMetric, Execution, IndexQuad, Point, Provenance, RtcTable, SignConvention,
};

pub use report::{
    ComparisonRow, ComponentAgreement, ComponentRow, DomainEntry, MetricEcho, NamedExpr, PipelineInfo, Report,
    SampleRow, Verdict, Witness,
};
pub use text::render_text;

use report::{finite, point_map};

pub const EXIT_OK: i32 = 0;
/// Mismatch between pipelines, or NOT FLAT.
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_FORMAT: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Compute,
    Verify,
    Flatness,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Compute => "compute",
            Command::Verify => "verify",
            Command::Flatness => "flatness",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub metric: PathBuf,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
    pub format: Format,
    /// Empty means the command's default set.
    pub pipelines: Vec<Provenance>,
    /// Coordinate names: `A,B` for the sectional `(AB,AB)` or a full `A,B,C,D`.
    pub component: Option<Vec<String>>,
    pub convention: SignConvention,
    pub exec: Execution,
}

impl RunConfig {
    pub fn new(command: Command, metric: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            metric: metric.into(),
            tol: 1e-9,
            samples: 64,
            seed: 0,
            format: Format::Text,
            pipelines: Vec::new(),
            component: None,
            convention: SignConvention::RESOLVED,
            exec: Execution::default(),
        }
    }

    /// The pipelines this run uses, defaults filled in, duplicates dropped.
    pub fn selected_pipelines(&self) -> Vec<Provenance> {
        if self.pipelines.is_empty() {
            return match self.command {
                Command::Compute | Command::Flatness => vec![Provenance::ClosedForm],
                Command::Verify => Provenance::ALL.to_vec(),
            };
        }
        let mut out = Vec::new();
        for p in &self.pipelines {
            if !out.contains(p) {
                out.push(*p);
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        let n = self.selected_pipelines().len();
        match self.command {
            Command::Verify if n < 2 => bad(format!("verify needs at least two pipelines, got {n}")),
            Command::Flatness if self.selected_pipelines() != [Provenance::ClosedForm] => {
                bad("flatness runs on the closed_form pipeline only".into())
            }
            _ => Ok(()),
        }
    }
}

pub fn parse_pipeline(name: &str) -> Result<Provenance, CliError> {
    Provenance::from_name(name.trim()).ok_or_else(|| {
        let known: Vec<&str> = Provenance::ALL.iter().map(|p| p.name()).collect();
        CliError::Config(format!("unknown pipeline '{}' (known: {})", name.trim(), known.join(", ")))
    })
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Metric { path: String, source: MetricError },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Metric { source, .. } if source.is_domain_error() => EXIT_DOMAIN,
            _ => EXIT_FORMAT,
        }
    }
}

pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => render_text(&self.report),
            Format::Json => render_json(&self.report),
        }
    }
}

pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Read, parse and validate the metric file, then run the command.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let path = cfg.metric.display().to_string();
    let text = std::fs::read_to_string(&cfg.metric).map_err(|source| CliError::Io { path: path.clone(), source })?;
    let metric = DiagonalMetric::load(&text).map_err(|source| CliError::Metric { path: path.clone(), source })?;
    run_metric(cfg, &path, &metric)
}

/// Run on an already loaded metric; `file` is echoed into the report.
pub fn run_metric(cfg: &RunConfig, file: &str, m: &DiagonalMetric) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let filter = match &cfg.component {
        Some(names) => Some(component_filter(m, names)?),
        None => None,
    };
    let mut report = Report {
        metric: echo(file, m),
        pipelines: Vec::new(),
        components: Vec::new(),
        comparisons: Vec::new(),
        verdict: Verdict {
            command: cfg.command.name().into(),
            status: String::new(),
            exit_code: EXIT_OK,
            tol: cfg.tol,
            samples: cfg.samples,
            sign_convention: cfg.convention.to_string(),
            witness: None,
            detail: None,
        },
        seed: cfg.seed,
        version: env!("CARGO_PKG_VERSION").into(),
    };
    match cfg.command {
        Command::Compute => compute(cfg, m, filter, &mut report),
        Command::Verify => verify(cfg, m, filter, &mut report),
        Command::Flatness => flatness(cfg, m, filter, &mut report),
    }
    let exit_code = report.verdict.exit_code;
    Ok(Outcome { report, exit_code })
}

struct Filter {
    quad: IndexQuad,
    sign: i8,
    label: String,
}

fn component_filter(m: &DiagonalMetric, names: &[String]) -> Result<Filter, CliError> {
    let idx = names
        .iter()
        .map(|n| {
            let n = n.trim();
            m.index_of(n).ok_or_else(|| CliError::Config(format!("--component: unknown coordinate '{n}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let [a, b, c, d] = match idx[..] {
        [a, b] => [a, b, a, b],
        [a, b, c, d] => [a, b, c, d],
        _ => return Err(CliError::Config("--component takes A,B or A,B,C,D".into())),
    };
    let (quad, sign) = IndexQuad::canonical(a, b, c, d)
        .ok_or_else(|| CliError::Config("--component: a pair repeats an index, so the component is zero".into()))?;
    let label = format!("({},{},{},{})", m.coord(a).name(), m.coord(b).name(), m.coord(c).name(), m.coord(d).name());
    Ok(Filter { quad, sign, label })
}

fn names(m: &DiagonalMetric) -> Vec<&str> {
    m.coords().iter().map(|s| s.name()).collect()
}

fn echo(file: &str, m: &DiagonalMetric) -> MetricEcho {
    MetricEcho {
        file: file.into(),
        coords: m.coords().iter().map(|s| s.name().to_string()).collect(),
        signature: m.etas().to_vec(),
        params: m.params().iter().map(|s| s.name().to_string()).collect(),
        g: (0..m.dim()).map(|i| NamedExpr { name: m.coord(i).name().into(), expr: m.g(i).to_string() }).collect(),
        domain: m.domain().iter().map(|(s, iv)| DomainEntry { symbol: s.into(), lo: iv.lo, hi: iv.hi }).collect(),
    }
}

fn build_table(p: Provenance, m: &DiagonalMetric, conv: SignConvention, exec: Execution) -> RtcTable {
    match p {
        Provenance::ClosedForm => closed_form_table(m, conv, exec),
        Provenance::Cartan => cartan::cartan_table(m, conv, exec),
        Provenance::Oracle => riemann_frame(m, exec),
        Provenance::Ll => ll_table(m),
        Provenance::Mathpages => mathpages_table(m),
    }
}

struct Built {
    info: PipelineInfo,
    table: Option<RtcTable>,
}

fn build_all(cfg: &RunConfig, m: &DiagonalMetric) -> Vec<Built> {
    cfg.selected_pipelines()
        .into_iter()
        .map(|p| {
            let applicable = p != Provenance::Ll || ll_applicable(m, cfg.seed);
            let table = applicable.then(|| build_table(p, m, cfg.convention, cfg.exec));
            let coverage = match p {
                Provenance::Ll | Provenance::Mathpages => Coverage::DiagonalOnly,
                _ => Coverage::Full,
            };
            let info = PipelineInfo {
                name: p.name().into(),
                coverage: coverage_name(coverage).into(),
                sign_convention: table.as_ref().and_then(|t| t.sign_convention()).map(|c| c.to_string()),
                applicable,
            };
            Built { info, table }
        })
        .collect()
}

fn coverage_name(c: Coverage) -> &'static str {
    match c {
        Coverage::Full => "full",
        Coverage::DiagonalOnly => "diagonal-only",
    }
}

/// Canonical quads covered by at least one table, in order.
fn covered_union(tables: &[&RtcTable]) -> Vec<IndexQuad> {
    let mut quads: Vec<IndexQuad> = tables.iter().flat_map(|t| t.covered_quads()).collect();
    quads.sort();
    quads.dedup();
    quads
}

fn compute(cfg: &RunConfig, m: &DiagonalMetric, filter: Option<Filter>, report: &mut Report) {
    let built = build_all(cfg, m);
    let points = m.sample_points(cfg.samples, cfg.seed);
    report.components = symbolic_rows(&built, m, filter.as_ref(), &points);
    report.pipelines = built.into_iter().map(|b| b.info).collect();
    report.verdict.status = "OK".into();
}

/// One row per independent component, with every covering pipeline's simplified
/// expression and its values at `points`.
fn symbolic_rows(built: &[Built], m: &DiagonalMetric, filter: Option<&Filter>, points: &[Point]) -> Vec<ComponentRow> {
    let simplified: Vec<(String, RtcTable)> = built
        .iter()
        .filter_map(|b| b.table.as_ref().map(|t| (b.info.name.clone(), t.simplified())))
        .collect();
    let tables: Vec<&RtcTable> = simplified.iter().map(|(_, t)| t).collect();
    let coord_names = names(m);
    let quads: Vec<(IndexQuad, i8, String)> = match filter {
        Some(f) => vec![(f.quad, f.sign, f.label.clone())],
        None => covered_union(&tables)
            .into_iter()
            .filter(|q| (q.a, q.b) <= (q.c, q.d))
            .map(|q| (q, 1, q.label(&coord_names)))
            .collect(),
    };
    quads
        .into_iter()
        .map(|(q, sign, label)| {
            let exprs: Vec<(&String, _)> = simplified
                .iter()
                .filter(|(_, t)| t.coverage().covers(&q))
                .map(|(n, t)| (n, if sign < 0 { -t.entry(&q) } else { t.entry(&q) }))
                .collect();
            let symbolic = exprs.iter().map(|(n, e)| ((*n).clone(), e.to_string())).collect();
            let samples = points
                .iter()
                .map(|p| SampleRow {
                    point: point_map(p),
                    values: exprs.iter().map(|(n, e)| ((*n).clone(), e.eval(p).ok().and_then(finite))).collect(),
                })
                .collect();
            ComponentRow { label, indices: [q.a, q.b, q.c, q.d], symbolic, samples, status: None }
        })
        .collect()
}

fn verify(cfg: &RunConfig, m: &DiagonalMetric, filter: Option<Filter>, report: &mut Report) {
    let built = build_all(cfg, m);
    let coord_names = names(m);
    let keep = |q: &IndexQuad| filter.as_ref().is_none_or(|f| f.quad == *q);
    let mut mismatch = false;
    let mut undetermined = false;
    let mut worst_overall: Option<(f64, String)> = None;
    for i in 0..built.len() {
        for j in i + 1..built.len() {
            let (l, r) = (&built[i], &built[j]);
            let (Some(lt), Some(rt)) = (&l.table, &r.table) else {
                let which = if l.table.is_none() { &l.info.name } else { &r.info.name };
                report.comparisons.push(ComparisonRow {
                    left: l.info.name.clone(),
                    right: r.info.name.clone(),
                    status: "not applicable".into(),
                    max_residual: 0.0,
                    uniform_flip: false,
                    components: Vec::new(),
                    worst: None,
                    reason: Some(format!("{which} needs every g > 0 on the domain")),
                });
                continue;
            };
            let mut cmp = compare(lt, rt, m, cfg.tol, cfg.samples, cfg.seed, cfg.exec);
            cmp.components.retain(|c| keep(&c.quad));
            let status = if cmp.mismatches().next().is_some() {
                mismatch = true;
                "mismatch"
            } else if cmp.has_undetermined() {
                undetermined = true;
                "undetermined"
            } else {
                "agree"
            };
            let worst = cmp.worst().and_then(|c| {
                let (p, a, b) = c.worst.as_ref()?;
                Some(report::Worst {
                    label: c.quad.label(&coord_names),
                    point: point_map(p),
                    left: *a,
                    right: *b,
                    residual: c.max_residual,
                })
            });
            if status == "mismatch" {
                if let Some(w) = &worst {
                    if worst_overall.as_ref().is_none_or(|(r, _)| w.residual > *r) {
                        let p = Point::from_pairs(w.point.iter().map(|(k, v)| (k.as_str(), *v)));
                        let detail = format!(
                            "{} vs {}: worst component {} at {p}: {} vs {} (residual {:e})",
                            l.info.name, r.info.name, w.label, w.left, w.right, w.residual
                        );
                        worst_overall = Some((w.residual, detail));
                    }
                }
            }
            report.comparisons.push(ComparisonRow {
                left: l.info.name.clone(),
                right: r.info.name.clone(),
                status: status.into(),
                max_residual: cmp.max_residual(),
                uniform_flip: cmp.uniform_flip,
                components: cmp
                    .components
                    .iter()
                    .map(|c| ComponentAgreement {
                        label: c.quad.label(&coord_names),
                        agreement: c.agreement.name().into(),
                        max_residual: c.max_residual,
                        rejected: c.rejected,
                    })
                    .collect(),
                worst,
                reason: cmp.uniform_flip.then(|| "every mismatch is a uniform sign flip".into()),
            });
        }
    }
    report.components = symbolic_rows(&built, m, filter.as_ref(), &[]);
    report.pipelines = built.into_iter().map(|b| b.info).collect();
    let v = &mut report.verdict;
    if mismatch {
        v.status = "MISMATCH".into();
        v.exit_code = EXIT_FAIL;
        v.detail = worst_overall.map(|(_, d)| d);
    } else if undetermined {
        v.status = "UNDETERMINED".into();
        v.exit_code = EXIT_DOMAIN;
        v.detail = Some("more than half the samples failed to evaluate for some component".into());
    } else {
        v.status = "OK".into();
    }
}

fn flatness(cfg: &RunConfig, m: &DiagonalMetric, filter: Option<Filter>, report: &mut Report) {
    let mut verdict: FlatnessVerdict =
        flatness_check_with(m, cfg.convention, FlatnessMode::Symbolic, cfg.tol, cfg.samples, cfg.seed, cfg.exec);
    if let Some(f) = &filter {
        verdict.components.retain(|c| c.quad == f.quad);
    }
    let coord_names = names(m);
    let name = Provenance::ClosedForm.name().to_string();
    for c in &verdict.components {
        let status = match &c.status {
            ComponentStatus::SymbolicZero => "symbolic zero".to_string(),
            ComponentStatus::NumericZero { max_abs } => format!("numeric zero (max |value| {max_abs:e})"),
            ComponentStatus::Nonzero { value, point } => format!("nonzero: {value} at {point}"),
            ComponentStatus::Undetermined { reason } => format!("undetermined: {reason}"),
        };
        report.components.push(ComponentRow {
            label: c.quad.label(&coord_names),
            indices: [c.quad.a, c.quad.b, c.quad.c, c.quad.d],
            symbolic: BTreeMap::from([(name.clone(), c.expr.to_string())]),
            samples: Vec::new(),
            status: Some(status),
        });
    }
    report.pipelines = vec![PipelineInfo {
        name,
        coverage: coverage_name(Coverage::Full).into(),
        sign_convention: Some(cfg.convention.to_string()),
        applicable: true,
    }];
    let v = &mut report.verdict;
    if let Some(w) = verdict.witness() {
        let ComponentStatus::Nonzero { value, point } = &w.status else { unreachable!() };
        v.status = "NOT FLAT".into();
        v.exit_code = EXIT_FAIL;
        v.witness = Some(Witness {
            label: w.quad.label(&coord_names),
            expr: w.expr.to_string(),
            value: finite(*value),
            point: point_map(point),
        });
    } else if let Some(u) = verdict.undetermined() {
        v.status = "UNDETERMINED".into();
        v.exit_code = EXIT_DOMAIN;
        if let ComponentStatus::Undetermined { reason } = &u.status {
            v.detail = Some(format!("{}: {reason}", u.quad.label(&coord_names)));
        }
    } else {
        v.status = "FLAT".into();
    }
}
