//! Run configuration and its flag form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::forest::Backend;

use super::solver::SolverKind;

/// Parameters of a generated trace, written `n=64,steps=2000,pdel=0.4,seed=1`.
///
/// `seed` may be left out, in which case the run's `--seed` applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub steps: usize,
    pub pdel: f64,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenSpecError {
    #[error("expected key=value, got {0:?}")]
    Syntax(String),
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("bad value for {key}: {value:?}")]
    BadValue { key: String, value: String },
    #[error("missing key {0}")]
    Missing(&'static str),
}

impl FromStr for GenSpec {
    type Err = GenSpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (mut n, mut steps, mut pdel, mut seed) = (None, None, None, None);
        for part in s.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| GenSpecError::Syntax(part.to_string()))?;
            let bad = || GenSpecError::BadValue {
                key: k.to_string(),
                value: v.to_string(),
            };
            match k.trim() {
                "n" => n = Some(v.trim().parse().map_err(|_| bad())?),
                "steps" => steps = Some(v.trim().parse().map_err(|_| bad())?),
                "pdel" => pdel = Some(v.trim().parse().map_err(|_| bad())?),
                "seed" => seed = Some(v.trim().parse().map_err(|_| bad())?),
                other => return Err(GenSpecError::UnknownKey(other.to_string())),
            }
        }
        Ok(GenSpec {
            n: n.ok_or(GenSpecError::Missing("n"))?,
            steps: steps.ok_or(GenSpecError::Missing("steps"))?,
            pdel: pdel.unwrap_or(0.0),
            seed,
        })
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={},steps={},pdel={}", self.n, self.steps, self.pdel)?;
        if let Some(s) = self.seed {
            write!(f, ",seed={s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceSource {
    File(PathBuf),
    Gen(GenSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub solver: SolverKind,
    pub source: TraceSource,
    /// Run the oracles after every `verify_every` events; 0 turns them off.
    pub verify_every: usize,
    pub metrics: Option<PathBuf>,
    pub backend: Backend,
    pub seed: u64,
    /// Where snapshots of failing states go; the system temp dir when unset.
    pub snapshot_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(solver: SolverKind, source: TraceSource) -> Self {
        Self {
            solver,
            source,
            verify_every: 0,
            metrics: None,
            backend: Backend::default(),
            seed: 0,
            snapshot_dir: None,
        }
    }

    /// Seed the generator actually uses.
    pub fn gen_seed(&self) -> Option<u64> {
        match &self.source {
            TraceSource::Gen(g) => Some(g.seed.unwrap_or(self.seed)),
            TraceSource::File(_) => None,
        }
    }

    /// Flags of `dyndom run` that reproduce this configuration.
    pub fn to_args(&self) -> Vec<String> {
        let mut args = vec!["--solver".to_string(), self.solver.to_string()];
        match &self.source {
            TraceSource::File(p) => args.extend(["--trace".to_string(), p.display().to_string()]),
            TraceSource::Gen(g) => args.extend(["--gen".to_string(), g.to_string()]),
        }
        args.extend([
            "--verify-every".to_string(),
            self.verify_every.to_string(),
            "--backend".to_string(),
            self.backend.to_string(),
            "--seed".to_string(),
            self.seed.to_string(),
        ]);
        if let Some(p) = &self.metrics {
            args.extend(["--metrics".to_string(), p.display().to_string()]);
        }
        if let Some(p) = &self.snapshot_dir {
            args.extend(["--snapshot-dir".to_string(), p.display().to_string()]);
        }
        args
    }
}
