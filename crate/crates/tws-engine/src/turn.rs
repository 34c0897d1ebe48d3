//! Conversation data model shared by every backend.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    System,
    User,
    Assistant,
    Tool,
}

/// One turn of the conversation. `audio_ref` indexes into the trace's
/// audio-version list; only user turns and tool-result turns carry audio.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChatTurn {
    pub role: Role,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub audio_ref: Option<usize>,
}

impl ChatTurn {
    pub fn new(role: Role, text: impl Into<String>) -> Self {
        ChatTurn {
            role,
            text: text.into(),
            audio_ref: None,
        }
    }

    pub fn with_audio(role: Role, text: impl Into<String>, audio_ref: usize) -> Self {
        ChatTurn {
            role,
            text: text.into(),
            audio_ref: Some(audio_ref),
        }
    }
}

/// A parsed tool invocation with arguments in written order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolCall {
    pub name: String,
    pub args: Vec<(String, String)>,
}

impl std::fmt::Display for ToolCall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[TOOL: {}(", self.name)?;
        for (i, (k, v)) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, ")]")
    }
}
