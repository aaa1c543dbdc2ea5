//! Experiment orchestration: target-graph generators, colouring strategies,
//! the campaign runner with per-trial persistence, parameter sweeps, and an
//! independent embedding verifier.

mod campaign;
mod colourings;
mod targets;
pub mod verify;

pub use campaign::{
    run_campaign, sweep, CampaignResult, ExperimentConfig, SweepParam, SweepTable, TrialRecord,
    SCHEMA_VERSION,
};
pub use colourings::{colour_edges, ColouringStrategy};
pub use targets::{disjoint_union, generate_target, random_regular, TargetClass};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Embedder(#[from] crate::embedder::EmbedderError),
    #[error(transparent)]
    Ensemble(#[from] crate::ensemble::EnsembleError),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}
