//! Prompt construction for baseline and tool-augmented runs.

use crate::turn::{ChatTurn, Role};
use operators::{OperatorDescriptor, Registry, ReturnKind};

/// Single-shot instruction for runs without tools.
pub const BASELINE_PROMPT: &str = "\
You are an expert in audio analysis and emotion recognition. Listen to the provided audio clip and identify the speaker's emotional state.

The audio contains a single speaker's utterance from a conversational context. Your task is to classify the emotion expressed in the speech.

Choose from the following emotion: {categories:,anger,disgust,fear,joy,neutral,sadness,surprise}

Think step-by-step and provide your answer in the following format:
Emotion: [category]";

const TWS_SYSTEM_SKELETON: &str = "\
You are an advanced audio analysis system with access to specialized audio processing tools. Your goal is to perform comprehensive emotion recognition by actively analyzing and manipulating audio signals when needed.

You have access to the following audio processing tools:

[Detailed Operator Set Description]

When encountering audio that may be degraded or challenging to analyze, think step-by-step:
1. First assess the audio quality and identify potential issues
2. Apply appropriate preprocessing or enhancement tools as needed
3. Perform detailed acoustic analysis using available tools

Format tool calls as:
[TOOL: tool_name(parameters)]";

/// Default task instruction for the tool-augmented loop.
pub const TWS_TASK_PROMPT: &str = "\
Analyze the provided audio clip to determine the speaker's emotional state. Use your available tools strategically to ensure accurate analysis, especially if the audio quality presents challenges.

Emotion categories: {anger,disgust,fear,joy,neutral,sadness,surprise}

Process:
1. Initial Assessment: Listen to the audio and evaluate its quality
2. Strategic Processing: If needed, apply appropriate tools to enhance or analyze the audio
3. Feature Extraction: Use analysis tools to extract emotion-relevant acoustic features
4. Integration: Combine your observations to reach a conclusion
5. Final Decision: Provide emotion classification.

Think through each step explicitly. Show your reasoning process and explain how each tool usage contributes to your final decision.

Expected output format:

Step-by-step Analysis:
[Your detailed reasoning process with tool calls]

Final Answer:
Reasoning: [brief justification]
Emotion: [category]";

fn describe_operator(d: &OperatorDescriptor) -> String {
    let params = if d.params.is_empty() {
        String::new()
    } else {
        d.params
            .iter()
            .map(|p| {
                let default = match p.default {
                    Some(v) => format!(", default {v}"),
                    None => ", required".to_string(),
                };
                format!("{}: {} [{}..{}{default}]", p.name, p.summary, p.min, p.max)
            })
            .collect::<Vec<_>>()
            .join("; ")
    };
    let returns = match d.returns {
        ReturnKind::Audio => "returns processed audio",
        ReturnKind::Report => "returns a measurement report",
    };
    format!("- {}({params}): {} ({returns})", d.name, d.summary)
}

/// System prompt with the registry expanded into the tool-description slot.
pub fn tws_system_prompt(registry: &Registry) -> String {
    let tools = registry
        .descriptors()
        .iter()
        .map(describe_operator)
        .collect::<Vec<_>>()
        .join("\n");
    TWS_SYSTEM_SKELETON.replace("[Detailed Operator Set Description]", &tools)
}

/// Builds the opening turns: system turn plus a user turn carrying the
/// original audio (version 0). An empty registry yields the baseline
/// prompt with no tool section.
pub fn init_prompt(instruction: &str, registry: &Registry) -> Vec<ChatTurn> {
    let system = if registry.is_empty() {
        BASELINE_PROMPT.to_string()
    } else {
        tws_system_prompt(registry)
    };
    vec![
        ChatTurn::new(Role::System, system),
        ChatTurn::with_audio(Role::User, instruction, 0),
    ]
}
