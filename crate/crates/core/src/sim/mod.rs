//! Discrete-event simulation of the validation, impact, remediation and
//! triage pipeline fed by candidate generation.
//!
//! Random draws are keyed by purpose rather than by item: arrivals, severity
//! labels, each stage's service times and each thinning point have their own
//! seeded stream, consumed in the order the stage starts or finishes work.
//! Adding capacity therefore changes when work happens but never what the
//! k-th service or k-th exit at a stage looks like.

mod bottleneck;
mod config;
mod engine;

pub use bottleneck::{bottleneck_report, BottleneckReport, StageRank};
pub use config::{
    Acceptance, Arrivals, PipelineConfig, QueueDiscipline, ServiceTime, SeverityMix, StageConfig,
    StageConfigs, Thinning, HOURS_PER_WEEK,
};
pub use engine::{simulate, simulate_seeds, SimResult, StageResult};
