//! The embedding pipeline: constants, equitable distance partitions,
//! lookahead contexts, promising/completable classification, candidate and
//! cross-off sets, the injective level-greedy construction, and the full
//! monochromatic embedding driver.

mod cn;
mod constants;
mod extensions;
mod hsz;
mod lookahead;
mod oracle;
mod pipeline;

pub use cn::{cn_injectivize, CnConfig, CnReport};
pub use constants::{ConstantsMode, ConstantsPack};
pub use extensions::{
    complete_segment, enumerate_extensions, is_completable, is_promising, Classifier, HostView,
};
pub use hsz::{default_class_count, hajnal_szemeredi_partition, verify_distance_partition};
pub use lookahead::{build_lookahead, build_segment_lookahead, LookaheadContext, LookaheadTarget};
pub use oracle::{
    candidate_set, cross_off, grow_homomorphism, ChoicePolicy, CrossOffOutcome, CrossOffRecord,
    EmbedderInputs, StepRecord, Trajectory,
};
pub use pipeline::{embed_monochromatic, verify_embedding, EmbedMode, EmbedReport, PipelineConfig};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbedderError {
    #[error("bad constants: {0}")]
    BadConstants(String),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Density(#[from] crate::density::DensityError),
    #[error(transparent)]
    Regularity(#[from] crate::regularity::RegularityError),
    #[error("H0 would have {have} vertices, above the configured cap {cap}")]
    H0Overflow { have: usize, cap: usize },
    #[error("Spencer verification failed after root augmentation: {0}")]
    SpencerVerificationFailed(String),
    #[error("class rebalancing budget exceeded: {0}")]
    RebalanceBudget(String),
    #[error("distance partition verification failed: {0}")]
    PartitionVerification(String),
    #[error("extension enumeration budget exceeded")]
    ExtensionBudget,
    #[error("level {level} occupancy {occupancy} exceeded its fill cap {cap} at step {step}")]
    OccupancyExceeded { level: usize, step: usize, occupancy: usize, cap: f64 },
    #[error("construction fails at step {step}")]
    ConstructionFails { step: usize, report: cn::CnReport },
    #[error("target graph is not {claimed}-degenerate (measured {actual})")]
    TargetNotDegenerate { claimed: usize, actual: usize },
    #[error("stage {stage}: {source}")]
    Stage { stage: &'static str, #[source] source: Box<EmbedderError> },
    #[error("embedding verification failed: {0}")]
    VerificationFailed(String),
}

impl EmbedderError {
    pub fn stage(stage: &'static str) -> impl FnOnce(EmbedderError) -> EmbedderError {
        move |source| EmbedderError::Stage { stage, source: Box::new(source) }
    }
}
