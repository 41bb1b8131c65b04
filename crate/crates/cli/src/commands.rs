use std::path::Path;

use serde::Serialize;
use spikemi::analysis::{self, DEFAULT_Q, DEFAULT_SLICE_Q};
use spikemi::estimator::HSelection;
use spikemi::metrics::MetricSpec;
use spikemi::{format, LabeledDataset, TimeWindow};

use crate::config::{generate_from, ComputeArgs, GenerateArgs, RunConfig, SlicesArgs, SweepArgs};
use crate::exit::Failure;
use crate::output::{num, write_atomic, Csv};

#[derive(Serialize)]
struct MiReport {
    metric: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    window: Option<f64>,
    h_star: usize,
    i0: f64,
    ib: f64,
    i_tilde: f64,
    h_curve: Vec<(usize, f64)>,
}

impl MiReport {
    fn new(metric: &MetricSpec, sel: &HSelection) -> Self {
        let (mut q, mut tau, mut window) = (None, None, None);
        match *metric {
            MetricSpec::VictorPurpura { q: v } => q = Some(v),
            MetricSpec::VanRossum { tau: v } => tau = Some(v),
            MetricSpec::EarthMover { window: v } => window = Some(v),
            MetricSpec::SpikeCount => {}
        }
        MiReport {
            metric: metric.kind().short_name(),
            q,
            tau,
            window,
            h_star: sel.h_star,
            i0: sel.best.i0,
            ib: sel.best.ib,
            i_tilde: sel.best.i_tilde,
            h_curve: sel.curve.iter().map(|p| (p.h, p.i_tilde)).collect(),
        }
    }
}

/// The dataset cut to the analysis window `[0, t_max)`.
fn analysis_window(dataset: &LabeledDataset, t_max: f64) -> Result<LabeledDataset, Failure> {
    let window = TimeWindow::new(0.0, t_max).map_err(|e| Failure::usage(e.to_string()))?;
    Ok(dataset.restrict(window))
}

pub fn compute(args: &ComputeArgs) -> Result<(), Failure> {
    let run = RunConfig::resolve(&args.common, DEFAULT_Q)?;
    let metric = run.metric()?;
    for (k, named) in run.datasets.iter().enumerate() {
        let dataset = analysis_window(&named.dataset, run.t_max)?;
        let sel = analysis::mi_for_metric(&dataset, &metric, &run.h)
            .map_err(|e| Failure::from_core(Path::new(&named.name), e))?;
        let mut json =
            serde_json::to_string_pretty(&MiReport::new(&metric, &sel)).expect("report serializes");
        json.push('\n');
        write_atomic(&run.out_dir(k).join("mi.json"), json.as_bytes())?;
    }
    Ok(())
}

pub fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    let run = RunConfig::resolve(&args.common, DEFAULT_Q)?;
    let datasets = run
        .datasets
        .iter()
        .map(|d| analysis_window(&d.dataset, run.t_max))
        .collect::<Result<Vec<_>, _>>()?;
    let result = analysis::sweep_metric_parameter(&datasets, run.kind, &args.grid, &run.h)
        .map_err(|e| Failure::from_core(Path::new("sweep"), e))?;
    let mut csv = Csv::new(&["param", "mean_i_tilde", "band_lo", "band_hi"]);
    for row in &result.rows {
        csv.row([
            num(row.param),
            num(row.mean_i_tilde),
            num(row.band_lo),
            num(row.band_hi),
        ]);
    }
    write_atomic(&run.out.join("sweep.csv"), &csv.into_bytes())
}

pub fn slices(args: &SlicesArgs) -> Result<(), Failure> {
    let run = RunConfig::resolve(&args.common, DEFAULT_SLICE_Q)?;
    let metric = run.metric()?;
    let step = args.step.unwrap_or(args.window_width);
    for (k, named) in run.datasets.iter().enumerate() {
        let result = analysis::time_sliced_mi(
            &named.dataset,
            &metric,
            args.window_width,
            step,
            run.t_max,
            &run.h,
        )
        .map_err(|e| Failure::from_core(Path::new(&named.name), e))?;
        let mut csv = Csv::new(&["t_center", "i_tilde", "mean_spikes", "bits_per_spike"]);
        for row in &result.rows {
            csv.row([
                num(row.t_center),
                num(row.i_tilde),
                num(row.mean_spikes),
                row.bits_per_spike.map(num).unwrap_or_default(),
            ]);
        }
        write_atomic(&run.out_dir(k).join("slices.csv"), &csv.into_bytes())?;
    }
    Ok(())
}

pub fn generate(args: &GenerateArgs) -> Result<(), Failure> {
    let dataset = generate_from(&args.spec, args.seed)?;
    let mut json = format::to_json(&dataset);
    json.push('\n');
    write_atomic(&args.out, json.as_bytes())
}
