use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use spikemi::analysis::{DEFAULT_SLICE_WIDTH, DEFAULT_TAU, DEFAULT_T_MAX};
use spikemi::estimator::HPolicy;
use spikemi::format;
use spikemi::metrics::{MetricKind, MetricSpec};
use spikemi::synth::{self, GeneratorSpec};
use spikemi::LabeledDataset;

use crate::exit::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "spikemi",
    version,
    about = "Nearest-neighbour mutual information between stimuli and spike trains"
)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate information for each dataset and write mi.json.
    Compute(ComputeArgs),
    /// Sweep the metric parameter across datasets and write sweep.csv.
    Sweep(SweepArgs),
    /// Time-resolved information in successive windows; writes slices.csv.
    Slices(SlicesArgs),
    /// Run the oracle checks for the estimator and the metrics.
    Validate(ValidateArgs),
    /// Write a synthetic dataset in the native JSON format.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Vp,
    Vr,
    Emd,
    Count,
}

impl From<MetricArg> for MetricKind {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Vp => MetricKind::VictorPurpura,
            MetricArg::Vr => MetricKind::VanRossum,
            MetricArg::Emd => MetricKind::EarthMover,
            MetricArg::Count => MetricKind::SpikeCount,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Dataset files (.json or .csv).
    #[arg(long = "input", short = 'i', num_args = 1..)]
    pub inputs: Vec<PathBuf>,

    /// Generator spec (JSON) to draw a synthetic dataset from instead.
    #[arg(long)]
    pub synth_spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, value_enum, default_value = "vp")]
    pub metric: MetricArg,

    /// Victor-Purpura cost, Hz [default: 32.5; 30 for slices].
    #[arg(long)]
    pub q: Option<f64>,

    /// Van Rossum time constant, seconds.
    #[arg(long, default_value_t = DEFAULT_TAU)]
    pub tau: f64,

    /// Region size: auto, N, or grid:a..b.
    #[arg(long, default_value = "auto", value_parser = parse_h)]
    pub h: HPolicy,

    /// End of the analysis window, seconds.
    #[arg(long, default_value_t = DEFAULT_T_MAX)]
    pub t_max: f64,

    /// Seed for synthetic input; falls back to SPIKEMI_SEED.
    #[arg(long, env = "SPIKEMI_SEED")]
    pub seed: Option<u64>,

    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Comma-separated parameter values (q in Hz for vp, tau in s for vr).
    #[arg(long, required = true, value_delimiter = ',')]
    pub grid: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SlicesArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    #[arg(long, default_value_t = DEFAULT_SLICE_WIDTH)]
    pub window_width: f64,

    /// Window step, seconds (default: the window width).
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, env = "SPIKEMI_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Shuffle replications per bias check.
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,

    /// Deliberately break one component to exercise failure reporting.
    #[arg(long, hide = true)]
    pub inject_fault: Option<Fault>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Bias computed with log₂(n_c·r/h) in place of log₂(n_s·r/h).
    Bias,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Generator spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,

    /// Overrides the seed in the spec; falls back to SPIKEMI_SEED.
    #[arg(long, env = "SPIKEMI_SEED")]
    pub seed: Option<u64>,

    /// Output file.
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_h(s: &str) -> Result<HPolicy, String> {
    s.parse()
}

/// One dataset to analyse and the name its outputs are filed under.
pub struct NamedDataset {
    pub name: String,
    pub dataset: LabeledDataset,
}

/// Settings shared by compute, sweep, and slices after resolving defaults.
pub struct RunConfig {
    pub datasets: Vec<NamedDataset>,
    pub kind: MetricKind,
    pub q: f64,
    pub tau: f64,
    pub h: HPolicy,
    pub t_max: f64,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn resolve(common: &CommonArgs, default_q: f64) -> Result<Self, Failure> {
        if !(common.t_max.is_finite() && common.t_max > 0.0) {
            return Err(Failure::usage(format!(
                "--t-max must be positive, got {}",
                common.t_max
            )));
        }
        let datasets = load_inputs(&common.input, common.seed)?;
        Ok(Self {
            datasets,
            kind: common.metric.into(),
            q: common.q.unwrap_or(default_q),
            tau: common.tau,
            h: common.h.clone(),
            t_max: common.t_max,
            out: common.out.clone(),
        })
    }

    /// Metric for whole-response runs; earth mover uses `[0, t_max)`.
    pub fn metric(&self) -> Result<MetricSpec, Failure> {
        let spec = match self.kind {
            MetricKind::VictorPurpura => MetricSpec::victor_purpura(self.q),
            MetricKind::VanRossum => MetricSpec::van_rossum(self.tau),
            MetricKind::EarthMover => MetricSpec::earth_mover(self.t_max),
            MetricKind::SpikeCount => Ok(MetricSpec::SpikeCount),
        };
        spec.map_err(|e| Failure::usage(e.to_string()))
    }

    /// Output directory for dataset `index`: the run directory itself when
    /// there is one dataset, a per-dataset subdirectory otherwise.
    pub fn out_dir(&self, index: usize) -> PathBuf {
        if self.datasets.len() == 1 {
            self.out.clone()
        } else {
            self.out.join(&self.datasets[index].name)
        }
    }
}

fn load_inputs(input: &InputArgs, seed: Option<u64>) -> Result<Vec<NamedDataset>, Failure> {
    if let Some(spec_path) = &input.synth_spec {
        let dataset = generate_from(spec_path, seed)?;
        return Ok(vec![NamedDataset {
            name: "synthetic".into(),
            dataset,
        }]);
    }
    let mut out = Vec::with_capacity(input.inputs.len());
    for (k, path) in input.inputs.iter().enumerate() {
        let dataset = load_dataset(path)?;
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| format!("input{k}"));
        let name = if out.iter().any(|d: &NamedDataset| d.name == stem) {
            format!("{stem}-{k}")
        } else {
            stem
        };
        out.push(NamedDataset { name, dataset });
    }
    Ok(out)
}

pub fn load_dataset(path: &Path) -> Result<LabeledDataset, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::malformed(format!("{}: {e}", path.display())))?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let loaded = if is_csv {
        format::parse_csv(&text)
    } else {
        format::parse_json(&text)
    }
    .map_err(|e| Failure::from_core(path, e))?;
    for w in &loaded.warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(loaded.dataset)
}

pub fn generate_from(spec_path: &Path, seed: Option<u64>) -> Result<LabeledDataset, Failure> {
    let text = std::fs::read_to_string(spec_path)
        .map_err(|e| Failure::malformed(format!("{}: {e}", spec_path.display())))?;
    let mut spec: GeneratorSpec = serde_json::from_str(&text).map_err(|e| {
        Failure::malformed(format!(
            "{}: invalid generator spec: {e}",
            spec_path.display()
        ))
    })?;
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    synth::generate(&spec).map_err(|e| Failure::from_core(spec_path, e))
}
