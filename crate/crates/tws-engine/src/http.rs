//! Network backend speaking a chat-completions-style JSON protocol. Audio
//! travels as a base64-encoded WAV content part; only the latest audio
//! version is attached (the loop threads a single audio state).

use crate::backend::ModelBackend;
use crate::error::EngineError;
use crate::turn::{ChatTurn, Role};
use audio_core::wav::pcm16_bytes;
use audio_core::Waveform;
use base64::Engine as _;
use serde_json::{json, Value};
use std::sync::{Condvar, Mutex};
use std::time::Duration;

pub const DEFAULT_MAX_IN_FLIGHT: usize = 4;
const REQUEST_TIMEOUT: Duration = Duration::from_secs(120);

pub struct NetworkBackend {
    client: reqwest::blocking::Client,
    base_url: String,
    api_key: String,
    model: String,
    in_flight: Mutex<usize>,
    slot_free: Condvar,
    max_in_flight: usize,
}

fn role_name(role: Role) -> &'static str {
    match role {
        Role::System => "system",
        Role::User => "user",
        Role::Assistant => "assistant",
        Role::Tool => "tool",
    }
}

/// WAV container around the canonical 16-bit PCM encoding.
fn wav_bytes(w: &Waveform) -> Vec<u8> {
    let data = pcm16_bytes(w);
    let sr = audio_core::CANONICAL_SAMPLE_RATE_HZ;
    let byte_rate = sr * 2;
    let mut out = Vec::with_capacity(44 + data.len());
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data.len() as u32).to_le_bytes());
    out.extend_from_slice(b"WAVEfmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&sr.to_le_bytes());
    out.extend_from_slice(&byte_rate.to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data.len() as u32).to_le_bytes());
    out.extend_from_slice(&data);
    out
}

/// Builds the request body. The most recent audio-carrying turn gets the
/// current audio attached as a typed content part; every other turn is
/// plain text.
pub fn request_body(model: &str, turns: &[ChatTurn], current_audio: &Waveform) -> Value {
    let audio_turn = turns
        .iter()
        .rposition(|t| t.audio_ref.is_some());
    let messages: Vec<Value> = turns
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if Some(i) == audio_turn {
                let b64 = base64::engine::general_purpose::STANDARD.encode(wav_bytes(current_audio));
                json!({
                    "role": role_name(t.role),
                    "content": [
                        {"type": "text", "text": t.text},
                        {"type": "input_audio", "input_audio": {"data": b64, "format": "wav"}},
                    ],
                })
            } else {
                json!({"role": role_name(t.role), "content": t.text})
            }
        })
        .collect();
    json!({
        "model": model,
        "messages": messages,
        "temperature": 0,
        "top_p": 0.95,
    })
}

impl NetworkBackend {
    /// Reads TWS_API_BASE and TWS_API_KEY (and optionally TWS_MODEL) from
    /// the environment.
    pub fn from_env() -> Result<Self, EngineError> {
        let base_url =
            std::env::var("TWS_API_BASE").map_err(|_| EngineError::MissingEnv("TWS_API_BASE"))?;
        let api_key =
            std::env::var("TWS_API_KEY").map_err(|_| EngineError::MissingEnv("TWS_API_KEY"))?;
        let model = std::env::var("TWS_MODEL").unwrap_or_else(|_| "default".to_string());
        let client = reqwest::blocking::Client::builder()
            .timeout(REQUEST_TIMEOUT)
            .build()
            .map_err(|e| EngineError::Backend(e.to_string()))?;
        Ok(NetworkBackend {
            client,
            base_url,
            api_key,
            model,
            in_flight: Mutex::new(0),
            slot_free: Condvar::new(),
            max_in_flight: DEFAULT_MAX_IN_FLIGHT,
        })
    }

    fn acquire_slot(&self) {
        let mut count = self.in_flight.lock().unwrap();
        while *count >= self.max_in_flight {
            count = self.slot_free.wait(count).unwrap();
        }
        *count += 1;
    }

    fn release_slot(&self) {
        *self.in_flight.lock().unwrap() -= 1;
        self.slot_free.notify_one();
    }

    fn post(&self, body: &Value) -> Result<String, EngineError> {
        let url = format!("{}/chat/completions", self.base_url.trim_end_matches('/'));
        let response = self
            .client
            .post(&url)
            .bearer_auth(&self.api_key)
            .json(body)
            .send()
            .map_err(|e| EngineError::Backend(e.to_string()))?
            .error_for_status()
            .map_err(|e| EngineError::Backend(e.to_string()))?;
        let parsed: Value = response
            .json()
            .map_err(|e| EngineError::Backend(e.to_string()))?;
        parsed["choices"][0]["message"]["content"]
            .as_str()
            .map(String::from)
            .ok_or_else(|| EngineError::Backend("response missing message content".into()))
    }
}

impl ModelBackend for NetworkBackend {
    fn next_turn(
        &self,
        turns: &[ChatTurn],
        current_audio: &Waveform,
    ) -> Result<String, EngineError> {
        let body = request_body(&self.model, turns, current_audio);
        self.acquire_slot();
        let result = self.post(&body);
        self.release_slot();
        result
    }
}
