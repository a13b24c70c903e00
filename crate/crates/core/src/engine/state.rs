use super::event::{Event, EventKind, Observation};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StateError {
    #[error("cannot append after the final answer")]
    AfterFinal,
    #[error("observation at step {0} does not answer a pending tool call")]
    UnexpectedObservation(u32),
    #[error("observation from {found:?} answers a call to {expected:?}")]
    ObservationMismatch { expected: String, found: String },
    #[error("decision at step {0} while a tool call is still awaiting its observation")]
    PendingObservation(u32),
    #[error("step budget of {0} decisions exhausted")]
    BudgetExceeded(u32),
    #[error("event step {found} out of order (expected {expected})")]
    StepOrder { expected: u32, found: u32 },
    #[error("step budget must be at least 1")]
    ZeroBudget,
}

/// Append-only run state: the query plus every event so far.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    query: String,
    history: Vec<Event>,
    step_count: u32,
    step_budget: u32,
}

impl AgentState {
    pub fn new(query: impl Into<String>, step_budget: u32) -> Result<Self, StateError> {
        if step_budget == 0 {
            return Err(StateError::ZeroBudget);
        }
        Ok(Self {
            query: query.into(),
            history: Vec::new(),
            step_count: 0,
            step_budget,
        })
    }

    pub fn query(&self) -> &str {
        &self.query
    }

    pub fn history(&self) -> &[Event] {
        &self.history
    }

    /// Number of reasoner decisions folded so far.
    pub fn step_count(&self) -> u32 {
        self.step_count
    }

    pub fn step_budget(&self) -> u32 {
        self.step_budget
    }

    pub fn budget_left(&self) -> bool {
        self.step_count < self.step_budget
    }

    pub fn is_finished(&self) -> bool {
        matches!(self.history.last().map(|e| &e.kind), Some(EventKind::Final(_)))
    }

    pub fn observations(&self) -> impl Iterator<Item = &Observation> {
        self.history.iter().filter_map(Event::as_observation)
    }

    fn pending_call(&self) -> Option<&str> {
        match self.history.last().map(|e| &e.kind) {
            Some(EventKind::Decision { tool, .. }) => Some(tool),
            _ => None,
        }
    }

    /// Appends `event`, advancing `step_count` on reasoner decisions.
    ///
    /// Decisions and reasoner-issued finals must carry `step_count + 1`;
    /// observations and engine-synthesized finals carry the current step.
    pub fn fold(mut self, event: Event) -> Result<Self, StateError> {
        if self.is_finished() {
            return Err(StateError::AfterFinal);
        }
        let pending = self.pending_call().map(str::to_owned);
        let counts = match &event.kind {
            EventKind::Observation(obs) => {
                let expected = pending.clone().ok_or(StateError::UnexpectedObservation(event.step))?;
                if expected != obs.tool_name {
                    return Err(StateError::ObservationMismatch {
                        expected,
                        found: obs.tool_name.clone(),
                    });
                }
                false
            }
            EventKind::Decision { .. } => true,
            EventKind::Final(f) => !f.budget_exhausted,
        };
        if !matches!(event.kind, EventKind::Observation(_)) && pending.is_some() {
            return Err(StateError::PendingObservation(event.step));
        }
        let expected_step = if counts { self.step_count + 1 } else { self.step_count };
        if event.step != expected_step {
            return Err(StateError::StepOrder {
                expected: expected_step,
                found: event.step,
            });
        }
        if counts {
            if self.step_count >= self.step_budget {
                return Err(StateError::BudgetExceeded(self.step_budget));
            }
            self.step_count += 1;
        }
        self.history.push(event);
        Ok(self)
    }
}
