//! Spike-train distances and the pairwise distance matrix.
//!
//! Four metrics are provided:
//!
//! | Kind | Parameter | Distance |
//! |------|-----------|----------|
//! | [`MetricKind::VictorPurpura`] | `q` (Hz) | edit distance, shift cost `q·|Δt|` |
//! | [`MetricKind::VanRossum`] | `tau` (s) | L² distance of exponentially filtered trains |
//! | [`MetricKind::EarthMover`] | analysis window (s) | L¹ distance of normalised cumulative counts |
//! | [`MetricKind::SpikeCount`] | none | `|count(u) - count(v)|` |
//!
//! All four are symmetric bit-for-bit and satisfy the triangle inequality.
//! The estimator only uses the neighbour order they induce.

mod earth_mover;
mod matrix;
mod van_rossum;
mod victor_purpura;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spike::SpikeTrain;

pub use earth_mover::emd_distance;
pub use matrix::{distance_matrix, distance_matrix_for, DistanceMatrix};
pub use van_rossum::vr_distance;
pub use victor_purpura::vp_distance;

/// Absolute difference of spike counts. With a fixed analysis window this is
/// also the firing-rate difference up to a constant factor.
pub fn count_distance(u: &SpikeTrain, v: &SpikeTrain) -> f64 {
    u.len().abs_diff(v.len()) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    VictorPurpura,
    VanRossum,
    EarthMover,
    SpikeCount,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [
        MetricKind::VictorPurpura,
        MetricKind::VanRossum,
        MetricKind::EarthMover,
        MetricKind::SpikeCount,
    ];

    /// Short command-line name.
    pub fn short_name(self) -> &'static str {
        match self {
            MetricKind::VictorPurpura => "vp",
            MetricKind::VanRossum => "vr",
            MetricKind::EarthMover => "emd",
            MetricKind::SpikeCount => "count",
        }
    }

    /// Builds a metric from its single parameter: `q` for VP, `tau` for vR,
    /// the window length for EMD. The spike count ignores `param`.
    pub fn with_parameter(self, param: f64) -> Result<MetricSpec> {
        match self {
            MetricKind::VictorPurpura => MetricSpec::victor_purpura(param),
            MetricKind::VanRossum => MetricSpec::van_rossum(param),
            MetricKind::EarthMover => MetricSpec::earth_mover(param),
            MetricKind::SpikeCount => Ok(MetricSpec::SpikeCount),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "vp" | "victor_purpura" => Ok(MetricKind::VictorPurpura),
            "vr" | "van_rossum" => Ok(MetricKind::VanRossum),
            "emd" | "earth_mover" => Ok(MetricKind::EarthMover),
            "count" | "spike_count" => Ok(MetricKind::SpikeCount),
            other => Err(format!(
                "unknown metric '{other}' (expected vp, vr, emd, count)"
            )),
        }
    }
}

/// A metric together with its parameter.
///
/// Construct through the checked constructors so the parameter invariants
/// hold; [`MetricSpec::validate`] re-checks specs built by hand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricSpec {
    VictorPurpura { q: f64 },
    VanRossum { tau: f64 },
    EarthMover { window: f64 },
    SpikeCount,
}

impl MetricSpec {
    pub fn victor_purpura(q: f64) -> Result<Self> {
        victor_purpura::check_q(q)?;
        Ok(MetricSpec::VictorPurpura { q })
    }

    pub fn van_rossum(tau: f64) -> Result<Self> {
        van_rossum::check_tau(tau)?;
        Ok(MetricSpec::VanRossum { tau })
    }

    pub fn earth_mover(window: f64) -> Result<Self> {
        earth_mover::check_window(window)?;
        Ok(MetricSpec::EarthMover { window })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MetricSpec::VictorPurpura { q } => victor_purpura::check_q(q),
            MetricSpec::VanRossum { tau } => van_rossum::check_tau(tau),
            MetricSpec::EarthMover { window } => earth_mover::check_window(window),
            MetricSpec::SpikeCount => Ok(()),
        }
    }

    pub fn kind(&self) -> MetricKind {
        match self {
            MetricSpec::VictorPurpura { .. } => MetricKind::VictorPurpura,
            MetricSpec::VanRossum { .. } => MetricKind::VanRossum,
            MetricSpec::EarthMover { .. } => MetricKind::EarthMover,
            MetricSpec::SpikeCount => MetricKind::SpikeCount,
        }
    }

    pub fn parameter(&self) -> Option<f64> {
        match *self {
            MetricSpec::VictorPurpura { q } => Some(q),
            MetricSpec::VanRossum { tau } => Some(tau),
            MetricSpec::EarthMover { window } => Some(window),
            MetricSpec::SpikeCount => None,
        }
    }

    /// Distance between two trains under this metric.
    pub fn distance(&self, u: &SpikeTrain, v: &SpikeTrain) -> Result<f64> {
        match *self {
            MetricSpec::VictorPurpura { q } => vp_distance(u, v, q),
            MetricSpec::VanRossum { tau } => vr_distance(u, v, tau),
            MetricSpec::EarthMover { window } => emd_distance(u, v, window),
            MetricSpec::SpikeCount => Ok(count_distance(u, v)),
        }
    }
}
