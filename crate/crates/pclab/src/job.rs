//! Job parameters, tower construction and graph families.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use pclab_core::cayley::{CayleyError, ConnectionSpec};
use pclab_core::charsum::CharSumError;
use pclab_core::clique::{Budget, CliqueError, SearchOptions};
use pclab_core::directions::DirError;
use pclab_core::ff::{arith, FfError, FieldTower, TowerConfig};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::Bounds;

/// Default wall-clock budget per command.
pub const DEFAULT_BUDGET_MS: u64 = 120_000;

/// Why a command stopped without a verified/refuted verdict.
///
/// `NotApplicable` and `Timeout` become reports; the rest are usage errors.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("hypothesis not applicable: {0}")]
    NotApplicable(String),
    #[error("budget exhausted; bounds {}..={}", .0.lower, .0.upper)]
    Timeout(Bounds),
    #[error(transparent)]
    Field(#[from] FfError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl From<CayleyError> for HarnessError {
    fn from(e: CayleyError) -> Self {
        match e {
            CayleyError::CongruenceViolated { .. } | CayleyError::DNotEven(_) => {
                HarnessError::NotApplicable(e.to_string())
            }
            _ => HarnessError::Usage(e.to_string()),
        }
    }
}

impl From<CliqueError> for HarnessError {
    fn from(e: CliqueError) -> Self {
        match e {
            CliqueError::Timeout { lower, upper } => HarnessError::Timeout(Bounds { lower, upper }),
            CliqueError::NotApplicable(msg) => HarnessError::NotApplicable(msg),
            _ => HarnessError::Usage(e.to_string()),
        }
    }
}

impl From<CharSumError> for HarnessError {
    fn from(e: CharSumError) -> Self {
        match e {
            CharSumError::HypothesisViolated(_) | CharSumError::DegreeMismatch { .. } => {
                HarnessError::NotApplicable(e.to_string())
            }
            _ => HarnessError::Usage(e.to_string()),
        }
    }
}

impl From<DirError> for HarnessError {
    fn from(e: DirError) -> Self {
        HarnessError::Usage(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

pub fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(HarnessError::Usage(msg.into()))
}

pub fn not_applicable<T>(msg: impl Into<String>) -> Result<T> {
    Err(HarnessError::NotApplicable(msg.into()))
}

/// Connection-set families selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Paley,
    Peisert,
    Gpaley,
    Gpeisert,
    PeisertType,
}

/// Everything that determines a run; echoed into the report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<u64>,
    /// Degree of the top field over `F_q`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ext: Option<u32>,
    /// Subspace dimension for sampled character sums.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dim: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<Family>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reps: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expect_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub points: Option<Vec<[f64; 2]>>,
    pub seed: u64,
    pub budget_ms: u64,
    pub threads: usize,
}

/// A command invocation with its runtime settings.
#[derive(Debug, Clone)]
pub struct Job {
    pub params: Params,
    pub cache_dir: Option<PathBuf>,
    pub csv_out: Option<PathBuf>,
}

impl Job {
    pub fn new(params: Params) -> Self {
        Self {
            params,
            cache_dir: None,
            csv_out: None,
        }
    }

    pub fn search_options(&self) -> SearchOptions {
        SearchOptions {
            budget: Budget::from_duration(Duration::from_millis(self.params.budget_ms)),
            threads: self.params.threads,
        }
    }

    /// `q` from `--q`, or from `--p` and `--n`.
    pub fn base_order(&self) -> Result<u64> {
        match (self.params.q, self.params.p) {
            (Some(q), _) => Ok(q),
            (None, Some(p)) => arith::checked_pow(p, self.params.n.unwrap_or(1))
                .ok_or_else(|| HarnessError::Usage("p^n overflows".into())),
            (None, None) => usage("--q (or --p with --n) is required"),
        }
    }

    /// Tower with base `F_q` and top `F_{q^big_n}`, through the cache when
    /// one is configured.
    pub fn tower(&self, q: u64, big_n: u32) -> Result<Arc<FieldTower>> {
        let (p, n) = arith::prime_power_parts(q)
            .ok_or_else(|| HarnessError::Usage(format!("{q} is not a prime power")))?;
        let cfg = TowerConfig::default();
        let tower = match &self.cache_dir {
            Some(dir) => FieldTower::load_or_build(dir, p, n, big_n, &cfg)?,
            None => FieldTower::build_with(p, n, big_n, &cfg)?,
        };
        Ok(Arc::new(tower))
    }

    pub fn require_d(&self) -> Result<u64> {
        self.params.d.ok_or_else(|| HarnessError::Usage("--d is required".into()))
    }

    /// Connection set for `--family`, defaulting to `default`.
    pub fn spec(&self, default: Family) -> Result<ConnectionSpec> {
        Ok(match self.params.family.unwrap_or(default) {
            Family::Paley => ConnectionSpec::Paley,
            Family::Peisert => ConnectionSpec::Peisert,
            Family::Gpaley => ConnectionSpec::GPaley(self.require_d()?),
            Family::Gpeisert => ConnectionSpec::GPeisert(self.require_d()?),
            Family::PeisertType => ConnectionSpec::PeisertType(
                self.params
                    .reps
                    .clone()
                    .ok_or_else(|| HarnessError::Usage("--reps is required".into()))?,
            ),
        })
    }
}
