use super::action::{Action, FinalAnswer};
use super::event::{now_ms, Event, FailureKind};
use super::registry::ToolRegistry;
use super::state::{AgentState, StateError};
use super::transcript::Transcript;
use crate::reasoner::{Reasoner, ReasonerError};
use crate::retriever::RETRIEVE_TOOL;

/// Prefix of `Transcript::failure` when the run died on an unreachable endpoint.
pub const REMOTE_FAILURE_PREFIX: &str = "remote failure: ";

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("step budget must be at least 1")]
    ZeroBudget,
    #[error("registry has no {0:?} tool")]
    MissingTool(String),
    #[error("engine produced an invalid state: {0}")]
    State(#[from] StateError),
}

/// One query to run.
#[derive(Debug, Clone)]
pub struct RunRequest<'a> {
    pub query: &'a str,
    pub query_id: Option<&'a str>,
    pub step_budget: u32,
}

/// Drives the reason/act loop until the reasoner answers, the budget runs out,
/// or the run aborts. Aborted runs come back as transcripts with `failure` set.
pub fn run_agent(
    request: RunRequest<'_>,
    registry: &ToolRegistry,
    reasoner: &dyn Reasoner,
) -> Result<Transcript, EngineError> {
    if request.step_budget == 0 {
        return Err(EngineError::ZeroBudget);
    }
    if !registry.contains(RETRIEVE_TOOL) {
        return Err(EngineError::MissingTool(RETRIEVE_TOOL.into()));
    }
    let started_ms = now_ms();
    let mut state = AgentState::new(request.query, request.step_budget)?;
    let mut unknown_streak = 0;
    let mut failure = None;

    loop {
        if !state.budget_left() {
            log::info!("step budget {} exhausted", request.step_budget);
            let step = state.step_count();
            state = state.fold(Event::from_action(
                step,
                now_ms(),
                Action::FinalAnswer(FinalAnswer::budget_exhausted()),
            ))?;
            break;
        }
        let action = match decide_with_retry(reasoner, &state) {
            Ok(a) => a,
            Err(e) => {
                failure = Some(match e {
                    ReasonerError::Transport(_) => format!("{REMOTE_FAILURE_PREFIX}{e}"),
                    _ => format!("reasoner failure: {e}"),
                });
                break;
            }
        };
        let step = state.step_count() + 1;
        match action {
            Action::FinalAnswer(f) => {
                state = state.fold(Event::from_action(step, now_ms(), Action::FinalAnswer(f)))?;
                break;
            }
            Action::ToolCall { tool, arguments } => {
                let obs = registry.dispatch(&tool, &arguments, step);
                state = state.fold(Event::from_action(step, now_ms(), Action::ToolCall { tool, arguments }))?;
                let unknown = obs.failure().is_some_and(|f| f.kind == FailureKind::UnknownTool);
                state = state.fold(Event::observation(now_ms(), obs))?;
                if unknown {
                    unknown_streak += 1;
                    if unknown_streak > 1 {
                        failure = Some("reasoner repeatedly requested unknown tools".into());
                        break;
                    }
                } else {
                    unknown_streak = 0;
                }
            }
        }
    }

    Ok(Transcript {
        run_id: uuid::Uuid::new_v4().to_string(),
        query_id: request.query_id.map(str::to_owned),
        query: request.query.to_owned(),
        step_budget: request.step_budget,
        events: state.history().to_vec(),
        started_ms,
        finished_ms: now_ms(),
        failure,
    })
}

/// Malformed replies get one retry; transport failures abort immediately
/// because remote clients already retry internally.
fn decide_with_retry(reasoner: &dyn Reasoner, state: &AgentState) -> Result<Action, ReasonerError> {
    match reasoner.decide(state) {
        Err(ReasonerError::Parse(first)) => {
            log::warn!("malformed reasoner output, retrying once: {first}");
            reasoner.decide(state)
        }
        other => other,
    }
}
