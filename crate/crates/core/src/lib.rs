//! # spikemi
//!
//! Mutual information between a categorical stimulus and spike-train
//! responses, estimated from nearest-neighbour counts in a metric space.
//!
//! Spike trains have no natural coordinates, so the estimator only asks for a
//! distance. Around each trial it takes the `h - 1` nearest other trials,
//! counts how many share the trial's stimulus label, and converts the counts
//! into an estimate of `I(label; response)` in bits. The bias this raw
//! estimate has when labels and responses are independent is computed
//! exactly from a hypergeometric distribution and subtracted.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`spike`] | spike trains, balanced labelled datasets, time windows |
//! | [`metrics`] | Victor-Purpura, van Rossum, earth mover, spike count; distance matrices |
//! | [`estimator`] | neighbour counts, I₀, exact bias, Ĩ, `h` selection, shuffle null |
//! | [`analysis`] | metric comparison, parameter sweeps, time-sliced information |
//! | [`synth`] | synthetic datasets with rate, timing, or no coding |
//! | [`format`] | native JSON and CSV dataset files |
//!
//! ```
//! use spikemi::estimator::{Estimator, HPolicy};
//! use spikemi::metrics::{distance_matrix, MetricSpec};
//! use spikemi::synth::{generate, random_templates, Coding, GeneratorSpec};
//!
//! let spec = GeneratorSpec {
//!     n_s: 4,
//!     n_c: 5,
//!     duration: 1.0,
//!     coding: Coding::Timing { templates: random_templates(4, 6, 1.0, 1), jitter: 0.005 },
//!     seed: 2,
//! };
//! let data = generate(&spec).unwrap();
//! let d = distance_matrix(&data, &MetricSpec::victor_purpura(50.0).unwrap()).unwrap();
//! let sel = Estimator::new(&d, data.labels()).unwrap().select(&HPolicy::Auto).unwrap();
//! assert!(sel.best.i_tilde > 1.0);
//! ```

pub mod analysis;
pub mod error;
pub mod estimator;
pub mod format;
pub mod metrics;
pub mod spike;
pub mod synth;

pub use error::{Error, Result};
pub use estimator::{Estimator, HPolicy, HSelection, MIEstimate, NeighborhoodCounts};
pub use metrics::{DistanceMatrix, MetricKind, MetricSpec};
pub use spike::{LabeledDataset, SpikeTrain, StimulusLabel, TimeWindow};
