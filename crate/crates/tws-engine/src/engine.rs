//! The interleaved reasoning loop: alternate model turns with tool
//! applications on a threaded audio state, up to a step budget.

use crate::backend::ModelBackend;
use crate::error::EngineError;
use crate::label::EmotionLabel;
use crate::parse::parse_tool_call;
use crate::prompt::init_prompt;
use crate::render::{render_audio_update, render_error, render_report};
use crate::trace::{ReasoningTrace, TerminatedBy};
use crate::turn::{ChatTurn, Role};
use audio_core::Waveform;
use operators::{OpOutput, Registry};
use std::time::Duration;

pub const DEFAULT_K_MAX: usize = 5;
const RETRIES: usize = 2;
const RETRY_BASE: Duration = Duration::from_millis(50);

/// Scans one assistant text for its last answer line.
fn answer_in(text: &str) -> Option<EmotionLabel> {
    text.lines().rev().find_map(|line| {
        let line = line.trim();
        let prefix = line.get(..8)?;
        if !prefix.eq_ignore_ascii_case("emotion:") {
            return None;
        }
        EmotionLabel::parse(&line[8..])
    })
}

/// True iff the latest assistant turn carries an answer line and no
/// tool-call pattern (a turn with both keeps reasoning: the tool wins).
pub fn is_terminated(trace: &ReasoningTrace) -> bool {
    trace
        .turns
        .iter()
        .rev()
        .find(|t| t.role == Role::Assistant)
        .map(|t| !t.text.contains("[TOOL:") && answer_in(&t.text).is_some())
        .unwrap_or(false)
}

/// Last answer line across all assistant turns; later lines win.
pub fn extract_answer(trace: &ReasoningTrace) -> Option<EmotionLabel> {
    trace
        .turns
        .iter()
        .filter(|t| t.role == Role::Assistant)
        .rev()
        .find_map(|t| answer_in(&t.text))
}

fn call_with_retries(
    backend: &dyn ModelBackend,
    turns: &[ChatTurn],
    audio: &Waveform,
) -> Result<String, EngineError> {
    let mut delay = RETRY_BASE;
    for attempt in 0..=RETRIES {
        match backend.next_turn(turns, audio) {
            Ok(text) => return Ok(text),
            Err(e) if attempt == RETRIES => return Err(e),
            Err(_) => {
                std::thread::sleep(delay);
                delay *= 2;
            }
        }
    }
    unreachable!("loop returns on last attempt")
}

/// Runs the full tool-augmented reasoning loop over one clip.
pub fn run_tws(
    audio: &Waveform,
    instruction: &str,
    registry: &Registry,
    backend: &dyn ModelBackend,
    k_max: usize,
) -> Result<ReasoningTrace, EngineError> {
    if k_max == 0 {
        return Err(EngineError::BadKMax);
    }
    let mut turns = init_prompt(instruction, registry);
    let mut audio_versions = vec![audio.clone()];
    let mut tool_calls = Vec::new();
    let mut steps_used = 0;
    let mut terminated_by = None;

    while steps_used < k_max {
        let current = audio_versions.last().unwrap();
        let text = match call_with_retries(backend, &turns, current) {
            Ok(t) => t,
            Err(_) => {
                terminated_by = Some(TerminatedBy::BackendError);
                break;
            }
        };
        steps_used += 1;
        let has_marker = text.contains("[TOOL:");
        turns.push(ChatTurn::new(Role::Assistant, text.clone()));

        if has_marker {
            // A tool call (even a broken one) consumes the step; failures
            // come back as an error tool-result with the audio unchanged.
            let result = parse_tool_call(&text, registry).and_then(|call| {
                let call = call.expect("marker present");
                let out = registry.invoke(&call.name, &call.args, audio_versions.last().unwrap())?;
                Ok((call, out))
            });
            match result {
                Ok((call, OpOutput::Audio(w))) => {
                    let result_text = render_audio_update(&w);
                    audio_versions.push(w);
                    tool_calls.push(call);
                    turns.push(ChatTurn::with_audio(
                        Role::Tool,
                        result_text,
                        audio_versions.len() - 1,
                    ));
                }
                Ok((call, OpOutput::Report(r))) => {
                    tool_calls.push(call);
                    turns.push(ChatTurn::new(Role::Tool, render_report(&r)));
                }
                Err(e) => {
                    turns.push(ChatTurn::new(Role::Tool, render_error(&e)));
                }
            }
        } else if answer_in(&text).is_some() {
            terminated_by = Some(TerminatedBy::AnswerFound);
            break;
        }
    }

    let terminated_by = terminated_by.unwrap_or(TerminatedBy::KMaxReached);
    let mut trace = ReasoningTrace {
        turns,
        audio_versions,
        tool_calls,
        steps_used,
        terminated_by,
        final_answer: None,
    };
    if terminated_by == TerminatedBy::AnswerFound {
        trace.final_answer = extract_answer(&trace);
    }
    Ok(trace)
}

/// Single-shot run without tools: one backend call against the baseline
/// prompt, answer extraction only (any tool text is ignored).
pub fn run_baseline(
    audio: &Waveform,
    instruction: &str,
    backend: &dyn ModelBackend,
) -> Result<ReasoningTrace, EngineError> {
    let registry = Registry::with_descriptors(Vec::new());
    let mut turns = init_prompt(instruction, &registry);
    match call_with_retries(backend, &turns, audio) {
        Ok(text) => {
            let answer = answer_in(&text);
            turns.push(ChatTurn::new(Role::Assistant, text));
            Ok(ReasoningTrace {
                turns,
                audio_versions: vec![audio.clone()],
                tool_calls: Vec::new(),
                steps_used: 1,
                terminated_by: if answer.is_some() {
                    TerminatedBy::AnswerFound
                } else {
                    TerminatedBy::KMaxReached
                },
                final_answer: answer,
            })
        }
        Err(_) => Ok(ReasoningTrace {
            turns,
            audio_versions: vec![audio.clone()],
            tool_calls: Vec::new(),
            steps_used: 0,
            terminated_by: TerminatedBy::BackendError,
            final_answer: None,
        }),
    }
}
