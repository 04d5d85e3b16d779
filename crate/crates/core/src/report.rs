//! Structured experiment records.
//!
//! Everything that depends only on the inputs lives in `parameters` and
//! `results`; wall-clock data is confined to `timestamps` so that re-runs can
//! be compared byte for byte on the other sections.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::gf2::PRNG_NAME;

pub const ARTIFACT_NAME: &str = "qmce";
pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub artifact: String,
    pub artifact_version: String,
    pub prng: String,
}

impl Default for Environment {
    fn default() -> Self {
        Environment {
            artifact: ARTIFACT_NAME.into(),
            artifact_version: ARTIFACT_VERSION.into(),
            prng: PRNG_NAME.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timestamps {
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
}

pub fn unix_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport<P, R> {
    pub experiment: String,
    pub parameters: P,
    pub results: R,
    pub environment: Environment,
    pub timestamps: Timestamps,
}

impl<P: Serialize, R: Serialize> ExperimentReport<P, R> {
    /// Runs `body` and wraps its output with timing and environment data.
    pub fn run<F, E>(experiment: &str, parameters: P, body: F) -> Result<Self, E>
    where
        F: FnOnce(&P) -> Result<R, E>,
    {
        let started_unix_ms = unix_ms();
        let results = body(&parameters)?;
        Ok(ExperimentReport {
            experiment: experiment.into(),
            parameters,
            results,
            environment: Environment::default(),
            timestamps: Timestamps {
                started_unix_ms,
                finished_unix_ms: unix_ms(),
            },
        })
    }

    /// Canonical JSON of the `results` section alone.
    pub fn results_json(&self) -> serde_json::Result<String> {
        serde_json::to_string(&self.results)
    }

    pub fn to_json_pretty(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}
