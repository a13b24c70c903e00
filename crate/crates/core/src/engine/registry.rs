use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use serde_json::Value;

use super::action::ToolArgs;
use super::event::{FailureKind, Observation, ToolFailure};

/// Tool implementation. Handlers receive arguments already validated against
/// their [`ToolSpec`] and must be safe to call from concurrent runs.
pub trait ToolHandler: Send + Sync {
    fn call(&self, args: &ToolArgs) -> Result<Value, ToolFailure>;
}

impl<F> ToolHandler for F
where
    F: Fn(&ToolArgs) -> Result<Value, ToolFailure> + Send + Sync,
{
    fn call(&self, args: &ToolArgs) -> Result<Value, ToolFailure> {
        self(args)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ParamKind {
    String,
    Integer { min: Option<i64>, max: Option<i64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: String,
    #[serde(flatten)]
    pub kind: ParamKind,
    pub required: bool,
    pub description: String,
}

impl ParamSpec {
    pub fn string(name: &str, description: &str) -> Self {
        Self {
            name: name.into(),
            kind: ParamKind::String,
            required: true,
            description: description.into(),
        }
    }

    pub fn integer(name: &str, description: &str, min: Option<i64>, max: Option<i64>) -> Self {
        Self {
            name: name.into(),
            kind: ParamKind::Integer { min, max },
            required: true,
            description: description.into(),
        }
    }

    pub fn optional(mut self) -> Self {
        self.required = false;
        self
    }
}

#[derive(Clone)]
pub struct ToolSpec {
    pub name: String,
    pub description: String,
    pub params: Vec<ParamSpec>,
    pub handler: Arc<dyn ToolHandler>,
}

impl fmt::Debug for ToolSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ToolSpec")
            .field("name", &self.name)
            .field("params", &self.params)
            .finish_non_exhaustive()
    }
}

/// Name, description and argument schema of a tool, as shown to remote reasoners.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolDescription {
    pub name: String,
    pub description: String,
    pub params: Vec<ParamSpec>,
}

impl ToolSpec {
    pub fn describe(&self) -> ToolDescription {
        ToolDescription {
            name: self.name.clone(),
            description: self.description.clone(),
            params: self.params.clone(),
        }
    }

    fn validate(&self, args: &ToolArgs) -> Result<(), String> {
        if let Some(extra) = args.keys().find(|k| !self.params.iter().any(|p| &p.name == *k)) {
            return Err(format!("unexpected argument {extra:?}"));
        }
        for p in &self.params {
            let Some(v) = args.get(&p.name) else {
                if p.required {
                    return Err(format!("missing argument {:?}", p.name));
                }
                continue;
            };
            match p.kind {
                ParamKind::String if !v.is_string() => {
                    return Err(format!("argument {:?} must be a string", p.name));
                }
                ParamKind::Integer { min, max } => {
                    let n = v
                        .as_i64()
                        .ok_or_else(|| format!("argument {:?} must be an integer", p.name))?;
                    if min.is_some_and(|m| n < m) || max.is_some_and(|m| n > m) {
                        return Err(format!("argument {:?} = {n} out of range", p.name));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("tool {0:?} registered twice")]
pub struct DuplicateTool(pub String);

/// Immutable set of tools available to a run. Build with [`ToolRegistry::builder`].
#[derive(Debug, Clone, Default)]
pub struct ToolRegistry {
    tools: BTreeMap<String, ToolSpec>,
}

#[derive(Debug, Default)]
pub struct RegistryBuilder {
    tools: BTreeMap<String, ToolSpec>,
}

impl RegistryBuilder {
    pub fn register(mut self, spec: ToolSpec) -> Result<Self, DuplicateTool> {
        if self.tools.contains_key(&spec.name) {
            return Err(DuplicateTool(spec.name));
        }
        self.tools.insert(spec.name.clone(), spec);
        Ok(self)
    }

    pub fn build(self) -> ToolRegistry {
        ToolRegistry { tools: self.tools }
    }
}

impl ToolRegistry {
    pub fn builder() -> RegistryBuilder {
        RegistryBuilder::default()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.tools.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.tools.keys().map(String::as_str)
    }

    pub fn describe(&self) -> Vec<ToolDescription> {
        self.tools.values().map(ToolSpec::describe).collect()
    }

    /// Runs a tool call. Every failure, including an unknown tool or bad
    /// arguments, comes back as an error observation.
    pub fn dispatch(&self, tool: &str, args: &ToolArgs, step: u32) -> Observation {
        let outcome = match self.tools.get(tool) {
            None => Err(ToolFailure::new(FailureKind::UnknownTool, format!("unknown tool {tool:?}"))),
            Some(spec) => spec
                .validate(args)
                .map_err(|m| ToolFailure::new(FailureKind::InvalidArguments, m))
                .and_then(|()| spec.handler.call(args)),
        };
        Observation {
            tool_name: tool.to_string(),
            step,
            outcome,
        }
    }
}
