//! Backend abstraction: anything that can produce the next assistant turn.

use crate::error::EngineError;
use crate::turn::{ChatTurn, Role};
use audio_core::Waveform;

/// Produces the next assistant text given the conversation so far and the
/// current audio version. Implementations never mutate the trace and must
/// be safe to call from multiple threads (one trace per thread).
pub trait ModelBackend: Sync {
    fn next_turn(&self, turns: &[ChatTurn], current_audio: &Waveform)
        -> Result<String, EngineError>;
}

impl<T: ModelBackend + ?Sized> ModelBackend for &T {
    fn next_turn(
        &self,
        turns: &[ChatTurn],
        current_audio: &Waveform,
    ) -> Result<String, EngineError> {
        (**self).next_turn(turns, current_audio)
    }
}

/// Replays a fixed list of responses; the index is derived from the number
/// of assistant turns already present, so the backend itself is stateless
/// and deterministic under any thread schedule.
pub struct ScriptedBackend {
    responses: Vec<String>,
}

impl ScriptedBackend {
    pub fn new(responses: Vec<String>) -> Self {
        ScriptedBackend { responses }
    }
}

impl ModelBackend for ScriptedBackend {
    fn next_turn(
        &self,
        turns: &[ChatTurn],
        _current_audio: &Waveform,
    ) -> Result<String, EngineError> {
        let idx = turns.iter().filter(|t| t.role == Role::Assistant).count();
        self.responses
            .get(idx)
            .cloned()
            .ok_or(EngineError::ScriptExhausted(idx))
    }
}
