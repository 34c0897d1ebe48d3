//! Reasoning traces: the loop transcript, the audio version chain, and
//! JSON persistence with content hashes.

use crate::error::EngineError;
use crate::label::EmotionLabel;
use crate::turn::{ChatTurn, ToolCall};
use audio_core::wav::pcm16_bytes;
use audio_core::Waveform;
use operators::{OpOutput, Registry};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminatedBy {
    AnswerFound,
    KMaxReached,
    BackendError,
}

/// One full run of the reasoning loop over a single record.
#[derive(Debug, Clone)]
pub struct ReasoningTrace {
    pub turns: Vec<ChatTurn>,
    /// Index 0 is the original audio; each successful audio-returning tool
    /// call appends the next version.
    pub audio_versions: Vec<Waveform>,
    /// The successful calls in application order; replaying them over
    /// version 0 reproduces the chain (report calls leave audio untouched).
    pub tool_calls: Vec<ToolCall>,
    pub steps_used: usize,
    pub terminated_by: TerminatedBy,
    pub final_answer: Option<EmotionLabel>,
}

impl ReasoningTrace {
    pub fn current_audio(&self) -> &Waveform {
        self.audio_versions.last().expect("version 0 always present")
    }
}

/// Hex SHA-256 over the 16-bit PCM encoding.
pub fn audio_hash(w: &Waveform) -> String {
    let mut hasher = Sha256::new();
    hasher.update(pcm16_bytes(w));
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Serialized form of a trace: audio is stored as hashes, not samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceFile {
    pub turns: Vec<ChatTurn>,
    pub tool_calls: Vec<ToolCall>,
    pub audio_hashes: Vec<String>,
    pub steps_used: usize,
    pub terminated_by: TerminatedBy,
    pub final_answer: Option<EmotionLabel>,
}

impl TraceFile {
    pub fn from_trace(trace: &ReasoningTrace) -> Self {
        TraceFile {
            turns: trace.turns.clone(),
            tool_calls: trace.tool_calls.clone(),
            audio_hashes: trace.audio_versions.iter().map(audio_hash).collect(),
            steps_used: trace.steps_used,
            terminated_by: trace.terminated_by,
            final_answer: trace.final_answer,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

pub fn save_trace(trace: &ReasoningTrace, path: impl AsRef<Path>) -> Result<(), EngineError> {
    let path = path.as_ref();
    std::fs::write(path, TraceFile::from_trace(trace).to_json()).map_err(|source| {
        EngineError::Io {
            path: path.to_path_buf(),
            source,
        }
    })
}

pub fn load_trace(path: impl AsRef<Path>) -> Result<TraceFile, EngineError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| EngineError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| EngineError::MalformedTrace {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Re-applies recorded tool calls to the original audio, returning the full
/// version chain. Used to verify byte-exact replay of persisted traces.
pub fn replay_tool_calls(
    original: &Waveform,
    calls: &[ToolCall],
    registry: &Registry,
) -> Result<Vec<Waveform>, EngineError> {
    let mut versions = vec![original.clone()];
    for call in calls {
        match registry.invoke(&call.name, &call.args, versions.last().unwrap())? {
            OpOutput::Audio(w) => versions.push(w),
            OpOutput::Report(_) => {}
        }
    }
    Ok(versions)
}
