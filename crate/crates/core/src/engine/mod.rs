//! The reason/act loop: state, tool registry, dispatch and transcripts.

mod action;
mod event;
mod registry;
mod runner;
mod state;
mod transcript;

pub use action::{
    Action, BiasLine, FinalAnswer, ToolArgs, APPEARS_UNBIASED, BUDGET_EXHAUSTED_ANSWER, CONTAINS_BIAS,
};
pub use event::{Event, EventKind, FailureKind, Observation, ToolFailure};
pub use registry::{
    DuplicateTool, ParamKind, ParamSpec, RegistryBuilder, ToolDescription, ToolHandler, ToolRegistry, ToolSpec,
};
pub use runner::{run_agent, EngineError, RunRequest, REMOTE_FAILURE_PREFIX};
pub use state::{AgentState, StateError};
pub use transcript::{Transcript, TranscriptError, TRANSCRIPT_VERSION};
