//! Fully resolved run parameters and their JSON form.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use kdvsat::{FeedbackLaw64, Grid64, ProfileKind64, SaturationLevels64, SimConfig64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    OneMinusCos,
    Sine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Feedback {
    Open,
    Linear,
    Saturated,
}

/// Every parameter of a `simulate` run. Keys are the flag names in snake case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunManifest {
    pub length: f64,
    pub cells: usize,
    pub dt: f64,
    pub t_final: f64,
    pub profile: Profile,
    pub mode: u32,
    pub amplitude: f64,
    pub feedback: Feedback,
    pub gain: f64,
    pub sat_level: f64,
    pub snapshot_stride: usize,
    pub energy_stride: usize,
    pub traj_out: Option<PathBuf>,
    pub energy_out: Option<PathBuf>,
}

impl Default for RunManifest {
    fn default() -> Self {
        Self {
            length: std::f64::consts::TAU,
            cells: 256,
            dt: 1e-3,
            t_final: 10.0,
            profile: Profile::OneMinusCos,
            mode: 1,
            amplitude: 1.0,
            feedback: Feedback::Open,
            gain: 1.0,
            sat_level: 1.0,
            snapshot_stride: 100,
            energy_stride: 1,
            traj_out: None,
            energy_out: None,
        }
    }
}

impl RunManifest {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::io(path, e))
    }

    pub fn grid(&self) -> CliResult<Grid64> {
        Ok(Grid64::new(self.length, self.cells)?)
    }

    pub fn profile_kind(&self) -> ProfileKind64 {
        match self.profile {
            Profile::OneMinusCos => ProfileKind64::OneMinusCos,
            Profile::Sine => ProfileKind64::SineMode(self.mode),
        }
    }

    pub fn feedback_law(&self) -> CliResult<FeedbackLaw64> {
        Ok(match self.feedback {
            Feedback::Open => FeedbackLaw64::OpenLoop,
            Feedback::Linear => FeedbackLaw64::linear(self.gain)?,
            Feedback::Saturated => {
                FeedbackLaw64::saturated(self.gain, SaturationLevels64::symmetric(self.sat_level)?)?
            }
        })
    }

    pub fn sim_config(&self) -> SimConfig64 {
        SimConfig64::new(self.dt, self.t_final)
            .with_strides(self.snapshot_stride, self.energy_stride)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_lossless() {
        let m = RunManifest {
            length: 0.1 + 0.2,
            dt: 1.0 / 3.0,
            t_final: std::f64::consts::E * 1e5,
            feedback: Feedback::Saturated,
            sat_level: 3.0000000000000004,
            traj_out: Some("a/b.csv".into()),
            ..RunManifest::default()
        };
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<RunManifest>(&text).unwrap(), m);
    }

    #[test]
    fn keys_are_snake_case_and_values_kebab_case() {
        let text = serde_json::to_string(&RunManifest::default()).unwrap();
        assert!(text.contains("\"t_final\""));
        assert!(text.contains("\"sat_level\""));
        assert!(text.contains("\"one-minus-cos\""));
    }

    #[test]
    fn partial_json_fills_defaults() {
        let m: RunManifest =
            serde_json::from_str(r#"{"cells": 64, "feedback": "linear"}"#).unwrap();
        assert_eq!(m.cells, 64);
        assert_eq!(m.feedback, Feedback::Linear);
        assert_eq!(m.dt, 1e-3);
        assert!(serde_json::from_str::<RunManifest>(r#"{"cels": 64}"#).is_err());
    }
}
