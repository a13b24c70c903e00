//! Bias-aware retrieval agent: a ReAct loop over a local vector store with a
//! bias classification tool, plus the evaluation harness used to score runs.

pub mod detector;
pub mod engine;
pub mod eval;
pub(crate) mod http;
pub mod label;
pub mod reasoner;
pub mod retriever;
pub mod text;

pub use label::Label;
