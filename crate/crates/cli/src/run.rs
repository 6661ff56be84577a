use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use clap::{Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use helly_lab::diameter::{
    diameter_after_removal, diameter_pq_transversal, qfh_diameter_select, DiameterThresholdConfig,
    RemovalBound, SegmentReport,
};
use helly_lab::generators::generic_lines;
use helly_lab::geometry::{
    build_arrangement, region_count_formula, Arrangement, ConvexBody, Family,
};
use helly_lab::hypergraph::{reduce_d1_to_2d, ReduceOptions, ReductionOutcome};
use helly_lab::select::{
    brute_force_best_subfamily, claim_verify, select, Evaluator, Measure, SelectOptions,
    SelectionReport,
};
use helly_lab::transversal::{pq_transversal, PqOptions, PqTransversalReport};

use crate::config::{gen_family, ExperimentConfig, GeneratorKind};
use crate::output::{append_rows, write_json, ResultRow};

/// Pipeline stage attached to errors for the machine-readable report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Config,
    Generate,
    Run,
    Write,
    Verify,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Config => "config",
            Stage::Generate => "generate",
            Stage::Run => "run",
            Stage::Write => "write",
            Stage::Verify => "verify",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
pub enum DiameterMode {
    /// Diameter-threshold selection.
    #[default]
    Select,
    /// Segment transversal of a family with the (p, d+1) property.
    Transversal,
    /// Sampled diameter of member 0 after removing all others.
    Removal,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Popular-subset selection on volume thresholds.
    Qfh2d(ExperimentConfig),
    /// Reduction of the (d+1)-wise good hypergraph to 2d-wise volume edges.
    QfhReduce(ExperimentConfig),
    /// (p, d+1) witness transversal via the fractional LP pair.
    Transversal(ExperimentConfig),
    /// Diameter variants of selection and transversal.
    Diameter {
        #[command(flatten)]
        cfg: ExperimentConfig,
        #[arg(long, value_enum, default_value_t = DiameterMode::Select)]
        mode: DiameterMode,
    },
    /// Cell count of a seeded line arrangement against the formula.
    Arrangement(ExperimentConfig),
    /// Selection compared with the exhaustive best subfamily.
    Oracle(ExperimentConfig),
    /// Timed selection over consecutive seeds.
    Bench {
        #[command(flatten)]
        cfg: ExperimentConfig,
        #[arg(long, default_value_t = 5)]
        repeats: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Qfh2d(_) => "qfh2d",
            Command::QfhReduce(_) => "qfh-reduce",
            Command::Transversal(_) => "transversal",
            Command::Diameter { .. } => "diameter",
            Command::Arrangement(_) => "arrangement",
            Command::Oracle(_) => "oracle",
            Command::Bench { .. } => "bench",
        }
    }

    pub fn config(&self) -> &ExperimentConfig {
        match self {
            Command::Qfh2d(c)
            | Command::QfhReduce(c)
            | Command::Transversal(c)
            | Command::Arrangement(c)
            | Command::Oracle(c) => c,
            Command::Diameter { cfg, .. } | Command::Bench { cfg, .. } => cfg,
        }
    }
}

/// Files written by one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub rows: Vec<ResultRow>,
    pub csv: PathBuf,
    pub artifacts: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrangementArtifact {
    pub bbox: ConvexBody,
    pub arrangement: Arrangement,
    pub formula: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReduceArtifact {
    pub delta: f64,
    pub outcome: ReductionOutcome,
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "._-".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

struct Ctx<'a> {
    command: &'static str,
    cfg: &'a ExperimentConfig,
    id: String,
}

impl Ctx<'_> {
    fn path(&self, kind: &str) -> PathBuf {
        self.cfg
            .out
            .join(format!("{}.{kind}.json", sanitize(&self.id)))
    }

    fn row(&self, family: Option<&Family>, seed: u64) -> ResultRow {
        ResultRow {
            experiment_id: self.id.clone(),
            command: self.command.to_string(),
            generator: self.cfg.generator_label(),
            seed,
            n: family.map_or(self.cfg.n, Family::len),
            d: family.map_or(self.cfg.dimension, Family::dim),
            alpha_measured: 0.0,
            selected_size: 0,
            measured_value: None,
            oracle_optimum: None,
            wall_time_ms: None,
        }
    }
}

/// Runs one command end to end: generate, compute, write artifacts and
/// CSV rows, then optionally reload and verify everything written.
pub fn run(command: &Command) -> Result<RunOutput> {
    let cfg = command.config();
    cfg.validate().context(Stage::Config)?;
    let name = command.name();
    let id = cfg.experiment_id.clone().unwrap_or_else(|| {
        format!(
            "{name}-{}-d{}-n{}-s{}",
            cfg.generator_label(),
            cfg.dimension,
            cfg.n,
            cfg.seed
        )
    });
    let ctx = Ctx {
        command: name,
        cfg,
        id,
    };
    let start = Instant::now();
    let mut artifacts = Vec::new();
    let mut rows = match command {
        Command::Arrangement(_) => vec![run_arrangement(&ctx, &mut artifacts)?],
        Command::Bench { repeats, .. } => run_bench(&ctx, *repeats)?,
        _ => {
            let family = gen_family(cfg).context(Stage::Generate)?;
            let fam_path = ctx.path("family");
            write_json(&fam_path, &family).context(Stage::Write)?;
            artifacts.push(fam_path);
            let row = match command {
                Command::Qfh2d(_) => {
                    run_select(&ctx, &family, Measure::Volume, false, &mut artifacts)?
                }
                Command::Oracle(_) => {
                    run_select(&ctx, &family, Measure::Volume, true, &mut artifacts)?
                }
                Command::QfhReduce(_) => run_reduce(&ctx, &family, &mut artifacts)?,
                Command::Transversal(_) => run_transversal(&ctx, &family, &mut artifacts)?,
                Command::Diameter { mode, .. } => match mode {
                    DiameterMode::Select => {
                        run_select(&ctx, &family, Measure::Diameter, false, &mut artifacts)?
                    }
                    DiameterMode::Transversal => run_segments(&ctx, &family, &mut artifacts)?,
                    DiameterMode::Removal => run_removal(&ctx, &family, &mut artifacts)?,
                },
                Command::Arrangement(_) | Command::Bench { .. } => unreachable!(),
            };
            vec![row]
        }
    };
    if cfg.timing && !matches!(command, Command::Bench { .. }) {
        let ms = start.elapsed().as_secs_f64() * 1e3;
        rows.iter_mut().for_each(|r| r.wall_time_ms = Some(ms));
    }
    let csv = cfg.out.join("results.csv");
    append_rows(&csv, &rows).context(Stage::Write)?;
    if cfg.verify {
        verify_artifacts(command, &artifacts).context(Stage::Verify)?;
        log::info!("verified {} artifacts", artifacts.len());
    }
    Ok(RunOutput {
        rows,
        csv,
        artifacts,
    })
}

fn select_options(cfg: &ExperimentConfig, measure: Measure) -> SelectOptions {
    SelectOptions {
        measure,
        threshold: cfg.threshold,
        tol: cfg.tol,
        ..SelectOptions::default()
    }
}

fn run_select(
    ctx: &Ctx,
    family: &Family,
    measure: Measure,
    oracle: bool,
    artifacts: &mut Vec<PathBuf>,
) -> Result<ResultRow> {
    let report = match measure {
        Measure::Volume => select(family, &select_options(ctx.cfg, measure)),
        Measure::Diameter => qfh_diameter_select(
            family,
            &DiameterThresholdConfig {
                threshold: ctx.cfg.threshold,
                ..DiameterThresholdConfig::default()
            },
            ctx.cfg.tol,
        ),
    }
    .context(Stage::Run)?;
    let mut row = ctx.row(Some(family), ctx.cfg.seed);
    row.alpha_measured = report.alpha;
    row.selected_size = report.selected.len();
    row.measured_value = Some(report.measured_volume);
    if oracle {
        let best = brute_force_best_subfamily(family, report.measured_volume, ctx.cfg.tol)
            .context(Stage::Run)?;
        row.oracle_optimum = Some(best.len() as f64);
    }
    let path = ctx.path("selection");
    write_json(&path, &report).context(Stage::Write)?;
    artifacts.push(path);
    Ok(row)
}

fn run_reduce(ctx: &Ctx, family: &Family, artifacts: &mut Vec<PathBuf>) -> Result<ResultRow> {
    let cfg = ctx.cfg;
    let opts = ReduceOptions {
        threshold: cfg.threshold,
        n_class: cfg.n_class,
        delta: cfg.delta(),
        restarts: cfg.restarts,
        seed: cfg.seed,
        tol: cfg.tol,
        ..ReduceOptions::default()
    };
    let out = reduce_d1_to_2d(family, &opts).context(Stage::Run)?;
    let ev = Evaluator::new(family, Measure::Volume).context(Stage::Run)?;
    let mut row = ctx.row(Some(family), cfg.seed);
    row.alpha_measured = out.h.density();
    let mut spanned: Vec<usize> = out.copies.iter().flat_map(|c| c.vertices()).collect();
    spanned.sort_unstable();
    spanned.dedup();
    row.selected_size = spanned.len();
    row.measured_value = out.h_prime.edges().map(|e| ev.of(e)).reduce(f64::min);
    let path = ctx.path("reduction");
    write_json(
        &path,
        &ReduceArtifact {
            delta: cfg.delta(),
            outcome: out,
        },
    )
    .context(Stage::Write)?;
    artifacts.push(path);
    Ok(row)
}

fn run_transversal(ctx: &Ctx, family: &Family, artifacts: &mut Vec<PathBuf>) -> Result<ResultRow> {
    let cfg = ctx.cfg;
    let opts = PqOptions {
        threshold: cfg.threshold,
        tol: cfg.tol,
        ..PqOptions::default()
    };
    let r = pq_transversal(family, cfg.p, cfg.witness_volume, &opts).context(Stage::Run)?;
    let mut row = ctx.row(Some(family), cfg.seed);
    row.alpha_measured =
        r.hypothesis.good_subsets as f64 / r.hypothesis.subsets_checked.max(1) as f64;
    row.selected_size = r.certificate.size;
    row.measured_value = Some(r.tau);
    let path = ctx.path("certificate");
    write_json(&path, &r).context(Stage::Write)?;
    artifacts.push(path);
    Ok(row)
}

fn run_segments(ctx: &Ctx, family: &Family, artifacts: &mut Vec<PathBuf>) -> Result<ResultRow> {
    let cfg = ctx.cfg;
    let dc = DiameterThresholdConfig {
        threshold: cfg.threshold,
        ..DiameterThresholdConfig::default()
    };
    let r = diameter_pq_transversal(family, cfg.p, cfg.witness_volume, &dc, cfg.tol)
        .context(Stage::Run)?;
    let mut row = ctx.row(Some(family), cfg.seed);
    row.alpha_measured =
        r.hypothesis.good_subsets as f64 / r.hypothesis.subsets_checked.max(1) as f64;
    row.selected_size = r.certificate.size;
    row.measured_value = Some(r.tau);
    let path = ctx.path("segments");
    write_json(&path, &r).context(Stage::Write)?;
    artifacts.push(path);
    Ok(row)
}

fn run_removal(ctx: &Ctx, family: &Family, artifacts: &mut Vec<PathBuf>) -> Result<ResultRow> {
    let cfg = ctx.cfg;
    ensure!(!family.is_empty(), "empty family");
    let r = diameter_after_removal(
        family.member(0),
        &family.members()[1..],
        cfg.samples,
        cfg.seed,
        family.bounding_radius(),
    )
    .context(Stage::Run)?;
    let mut row = ctx.row(Some(family), cfg.seed);
    row.alpha_measured = r.kept as f64 / r.samples.max(1) as f64;
    row.selected_size = r.kept;
    row.measured_value = Some(r.lower_bound);
    row.oracle_optimum = Some(r.full_diameter);
    let path = ctx.path("removal");
    write_json(&path, &r).context(Stage::Write)?;
    artifacts.push(path);
    Ok(row)
}

fn run_arrangement(ctx: &Ctx, artifacts: &mut Vec<PathBuf>) -> Result<ResultRow> {
    let cfg = ctx.cfg;
    // always generic lines; --generator is ignored here
    if cfg.family.is_some() {
        bail!("arrangement draws its own lines and takes no --family");
    }
    ensure!(cfg.dimension == 2, "arrangements are planar");
    let (lines, bbox) = generic_lines(cfg.seed, cfg.n).context(Stage::Generate)?;
    let arrangement = build_arrangement(&lines, &bbox).context(Stage::Run)?;
    let formula = region_count_formula(cfg.n as u64, 2);
    let mut row = ctx.row(None, cfg.seed);
    row.generator = GeneratorKind::GenericLines.name().into();
    row.alpha_measured = 1.0;
    row.selected_size = arrangement.regions.len();
    row.measured_value = Some(arrangement.regions.len() as f64);
    row.oracle_optimum = Some(formula as f64);
    let path = ctx.path("arrangement");
    write_json(
        &path,
        &ArrangementArtifact {
            bbox,
            arrangement,
            formula,
        },
    )
    .context(Stage::Write)?;
    artifacts.push(path);
    Ok(row)
}

fn run_bench(ctx: &Ctx, repeats: u64) -> Result<Vec<ResultRow>> {
    ensure!(repeats > 0, "repeats must be positive");
    let mut rows = Vec::new();
    for k in 0..repeats {
        let cfg = ExperimentConfig {
            seed: ctx.cfg.seed + k,
            ..ctx.cfg.clone()
        };
        let family = gen_family(&cfg).context(Stage::Generate)?;
        let start = Instant::now();
        let report = select(&family, &select_options(&cfg, Measure::Volume)).context(Stage::Run)?;
        let mut row = ctx.row(Some(&family), cfg.seed);
        row.alpha_measured = report.alpha;
        row.selected_size = report.selected.len();
        row.measured_value = Some(report.measured_volume);
        row.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
        rows.push(row);
    }
    Ok(rows)
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn find<'a>(artifacts: &'a [PathBuf], kind: &str) -> Option<&'a Path> {
    let suffix = format!(".{kind}.json");
    artifacts
        .iter()
        .find(|p| p.to_string_lossy().ends_with(&suffix))
        .map(PathBuf::as_path)
}

/// Reloads every artifact from disk and reruns the module validators.
pub fn verify_artifacts(command: &Command, artifacts: &[PathBuf]) -> Result<()> {
    let cfg = command.config();
    let family: Option<Family> = find(artifacts, "family").map(load).transpose()?;
    if let Some(p) = find(artifacts, "selection") {
        let report: SelectionReport = load(p)?;
        verify_selection(family.as_ref().context("missing family")?, &report, cfg.tol)?;
    }
    if let Some(p) = find(artifacts, "reduction") {
        let art: ReduceArtifact = load(p)?;
        let f = family.as_ref().context("missing family")?;
        let ev = Evaluator::new(f, Measure::Volume)?;
        for c in &art.outcome.copies {
            ensure!(
                c.verify(&art.outcome.h),
                "copy {:?} is not partite in H",
                c.classes
            );
        }
        for e in art.outcome.h_prime.edges() {
            let v = ev.of(e);
            ensure!(
                v >= art.delta - cfg.tol,
                "edge {e:?} has volume {v} below {}",
                art.delta
            );
        }
    }
    if let Some(p) = find(artifacts, "certificate") {
        let r: PqTransversalReport = load(p)?;
        let f = family.as_ref().context("missing family")?;
        ensure!(
            r.certificate.verify(f, cfg.tol),
            "certificate misses a member"
        );
        ensure!(
            (r.tau - r.nu).abs() <= 1e-6,
            "tau {} and nu {} differ",
            r.tau,
            r.nu
        );
    }
    if let Some(p) = find(artifacts, "segments") {
        let r: SegmentReport = load(p)?;
        let f = family.as_ref().context("missing family")?;
        ensure!(
            r.certificate.verify(f, cfg.tol),
            "segment certificate misses a member"
        );
    }
    if let Some(p) = find(artifacts, "removal") {
        let r: RemovalBound = load(p)?;
        ensure!(
            r.lower_bound <= r.full_diameter + cfg.tol,
            "removal bound {} above diameter {}",
            r.lower_bound,
            r.full_diameter
        );
    }
    if let Some(p) = find(artifacts, "arrangement") {
        let a: ArrangementArtifact = load(p)?;
        let n = a.arrangement.hyperplanes.len() as u64;
        ensure!(
            a.formula == region_count_formula(n, 2),
            "stored formula is stale"
        );
        ensure!(
            a.arrangement.regions.len() as u128 <= a.formula,
            "more regions than the formula allows"
        );
        for r in &a.arrangement.regions {
            ensure!(
                a.bbox.contains_point(&r.witness, cfg.tol),
                "witness outside the box"
            );
            for (h, &s) in a.arrangement.hyperplanes.iter().zip(&r.signs) {
                let side = h.eval(&r.witness);
                ensure!(
                    side * s as f64 > 0.0,
                    "witness {:?} on the wrong side",
                    r.witness
                );
            }
        }
    }
    Ok(())
}

/// Selection invariants: indices, measured value, pigeonhole bound and
/// the claim for every member of `F0`.
pub fn verify_selection(family: &Family, r: &SelectionReport, tol: f64) -> Result<()> {
    let n = family.len();
    let d = family.dim();
    ensure!(r.n == n && r.d == d, "report is for n={}, d={}", r.n, r.d);
    ensure!(
        r.selected.windows(2).all(|w| w[0] < w[1]),
        "selection not strictly sorted"
    );
    ensure!(
        r.selected.iter().all(|&i| i < n),
        "selection index out of range"
    );
    ensure!(
        (0.0..=1.0).contains(&r.alpha),
        "alpha {} outside [0, 1]",
        r.alpha
    );
    let ev = Evaluator::new(family, r.measure)?;
    let v = ev.of(&r.selected);
    ensure!(
        (v - r.measured_volume).abs() <= 1e-9 * v.abs().max(1.0),
        "measured value {} but recomputed {v}",
        r.measured_volume
    );
    let k = 2 * d as u128;
    // popularity >= good * (n - 2d + 1) / (total * 2d)
    ensure!(
        r.popularity as u128 * r.total_tuples * k >= r.good_tuples as u128 * (n as u128 + 1 - k),
        "popularity {} below the pigeonhole bound",
        r.popularity
    );
    for &m in &r.f0 {
        let c = claim_verify(&ev, &r.j0, m, &r.h0, r.threshold, tol);
        ensure!(c.holds(), "claim fails for member {m}: {:?}", c.failure);
    }
    Ok(())
}
