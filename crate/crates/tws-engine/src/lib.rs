//! Interleaved audio reasoning: a step-capped loop that alternates model
//! turns with signal-processing tool calls on a threaded audio state,
//! plus deterministic backends for desk-scale evaluation.

pub mod backend;
pub mod engine;
pub mod error;
pub mod http;
pub mod label;
pub mod oracle;
pub mod parse;
pub mod prompt;
pub mod render;
pub mod trace;
pub mod turn;

pub use backend::{ModelBackend, ScriptedBackend};
pub use engine::{extract_answer, is_terminated, run_baseline, run_tws, DEFAULT_K_MAX};
pub use error::EngineError;
pub use http::NetworkBackend;
pub use label::EmotionLabel;
pub use oracle::{OracleBackend, OraclePolicy, RecordContext};
pub use parse::{parse_tool_call, parse_tool_call_grammar};
pub use prompt::{init_prompt, tws_system_prompt, BASELINE_PROMPT, TWS_TASK_PROMPT};
pub use trace::{
    audio_hash, load_trace, replay_tool_calls, save_trace, ReasoningTrace, TerminatedBy, TraceFile,
};
pub use turn::{ChatTurn, Role, ToolCall};
