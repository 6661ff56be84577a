use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use helly_lab::generators::{
    cube_counterexample, identical_cubes, random_boxes, random_polytopes, random_translates,
    scale_family, thickened_hyperplanes, three_cluster,
};
use helly_lab::geometry::{Family, DEFAULT_BOUNDING_RADIUS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// The `2d` facet halfspaces of a cube of volume `--eps`.
    CubeCounterexample,
    /// Slabs of width `--thickness` with normals within `--spread` of e1.
    ThickenedHyperplanes,
    /// Boxes with corners in `[0,1]^d` and sides in `[0.5,1.5]`, times `--scale`.
    RandomBoxes,
    /// Random polygons (d=2) or cut boxes (d=3).
    RandomPolytopes,
    /// Unit cubes shifted by offsets in `[0, --spread]^d`.
    RandomTranslates,
    /// `n` copies of the unit cube.
    IdenticalCubes,
    /// Three clusters of `n/3` members sharing a small hub (d=2).
    ThreeCluster,
    /// Seeded lines in general position (arrangement command only).
    GenericLines,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::CubeCounterexample => "cube-counterexample",
            Self::ThickenedHyperplanes => "thickened-hyperplanes",
            Self::RandomBoxes => "random-boxes",
            Self::RandomPolytopes => "random-polytopes",
            Self::RandomTranslates => "random-translates",
            Self::IdenticalCubes => "identical-cubes",
            Self::ThreeCluster => "three-cluster",
            Self::GenericLines => "generic-lines",
        }
    }
}

/// Every knob of one experiment. The seed fixes all random draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct ExperimentConfig {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "dim", default_value_t = 2)]
    pub dimension: usize,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = GeneratorKind::RandomBoxes)]
    pub generator: GeneratorKind,
    /// Load the family from a JSON file instead of generating it.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Volume (or diameter) a tuple must reach to count as good.
    #[arg(long = "alpha-threshold", default_value_t = 1.0)]
    pub threshold: f64,
    /// Volume floor for the reduced hypergraph; defaults to the threshold.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Sample count for removal bounds.
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_BOUNDING_RADIUS)]
    pub bounding_radius: f64,
    #[arg(long, default_value_t = 4)]
    pub p: usize,
    /// Witness volume (or segment length for the diameter variant).
    #[arg(long, default_value_t = 1.0)]
    pub witness_volume: f64,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.01)]
    pub thickness: f64,
    #[arg(long, default_value_t = 0.015)]
    pub spread: f64,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Class size of the partite copies searched by qfh-reduce.
    #[arg(long, default_value_t = 2)]
    pub n_class: usize,
    #[arg(long, default_value_t = 64)]
    pub restarts: usize,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Reload the written artifacts and rerun every validator.
    #[arg(long)]
    pub verify: bool,
    /// Record wall time; rows are then no longer reproducible byte for byte.
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub experiment_id: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            dimension: 2,
            n: 8,
            generator: GeneratorKind::RandomBoxes,
            family: None,
            threshold: 1.0,
            delta: None,
            tol: 1e-9,
            samples: 20_000,
            bounding_radius: DEFAULT_BOUNDING_RADIUS,
            p: 4,
            witness_volume: 1.0,
            eps: 0.25,
            thickness: 0.01,
            spread: 0.015,
            scale: 1.0,
            n_class: 2,
            restarts: 64,
            out: PathBuf::from("out"),
            verify: false,
            timing: false,
            experiment_id: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        ensure!(
            (1..=3).contains(&self.dimension),
            "dimension {} outside 1..=3",
            self.dimension
        );
        ensure!(
            self.threshold > 0.0 && self.threshold.is_finite(),
            "threshold must be positive"
        );
        ensure!(
            self.tol >= 0.0 && self.tol < 1.0,
            "tolerance {} out of range",
            self.tol
        );
        ensure!(
            self.bounding_radius > 0.0,
            "bounding radius must be positive"
        );
        ensure!(self.witness_volume > 0.0, "witness volume must be positive");
        ensure!(
            self.scale > 0.0 && self.scale.is_finite(),
            "scale must be positive"
        );
        if let Some(d) = self.delta {
            ensure!(d > 0.0, "delta must be positive");
        }
        Ok(())
    }

    pub fn delta(&self) -> f64 {
        self.delta.unwrap_or(self.threshold)
    }

    pub fn generator_label(&self) -> String {
        match &self.family {
            Some(p) => format!("file:{}", p.display()),
            None => self.generator.name().to_string(),
        }
    }
}

/// The input family: loaded from `--family` or drawn from the generator.
pub fn gen_family(cfg: &ExperimentConfig) -> Result<Family> {
    cfg.validate()?;
    if let Some(path) = &cfg.family {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        return serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()));
    }
    let (d, n, seed) = (cfg.dimension, cfg.n, cfg.seed);
    let f = match cfg.generator {
        GeneratorKind::CubeCounterexample => cube_counterexample(d, cfg.eps)?,
        GeneratorKind::ThickenedHyperplanes => {
            thickened_hyperplanes(seed, d, n, cfg.thickness, cfg.spread)?
        }
        GeneratorKind::RandomBoxes => random_boxes(seed, d, n)?,
        GeneratorKind::RandomPolytopes => random_polytopes(seed, d, n)?,
        GeneratorKind::RandomTranslates => random_translates(seed, d, n, cfg.spread)?,
        GeneratorKind::IdenticalCubes => identical_cubes(d, n)?,
        GeneratorKind::ThreeCluster => {
            ensure!(d == 2, "three-cluster is planar");
            ensure!(
                n >= 3 && n % 3 == 0,
                "three-cluster needs n divisible by 3, got {n}"
            );
            three_cluster(seed, n / 3)?
        }
        GeneratorKind::GenericLines => bail!("generic-lines produces lines, not a family"),
    };
    let f = if cfg.scale != 1.0 {
        scale_family(&f, cfg.scale)?
    } else {
        f
    };
    Ok(Family::with_radius(
        f.dim(),
        f.members().to_vec(),
        cfg.bounding_radius,
    )?)
}
