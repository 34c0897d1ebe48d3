//! Tool-call grammar: the first `[TOOL: name(k=v, ...)]` pattern in an
//! assistant turn, if any.

use crate::error::EngineError;
use crate::turn::ToolCall;

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the first tool-call pattern and resolves the name against the
/// registry, canonicalizing its case. Unknown names are an error so the
/// loop can report them back as a failed step.
pub fn parse_tool_call(
    text: &str,
    registry: &operators::Registry,
) -> Result<Option<ToolCall>, EngineError> {
    let Some(mut call) = parse_tool_call_grammar(text)? else {
        return Ok(None);
    };
    match registry.lookup(&call.name) {
        Some(desc) => call.name = desc.name.to_string(),
        None => return Err(EngineError::UnknownTool(call.name)),
    }
    Ok(Some(call))
}

/// Grammar-only parse of the first tool-call pattern out of free text.
///
/// Grammar: `[TOOL:` ws name ws `(` args `)` ws `]` where args is empty or a
/// comma-separated list of `key=value` pairs. Values are either quoted
/// strings (passed through verbatim, unescaped) or bare numbers. Returns
/// `Ok(None)` when the marker is absent; a marker followed by broken syntax
/// is an error.
pub fn parse_tool_call_grammar(text: &str) -> Result<Option<ToolCall>, EngineError> {
    let Some(start) = text.find("[TOOL:") else {
        return Ok(None);
    };
    let body = &text[start + "[TOOL:".len()..];
    let malformed = |why: &str| {
        let snippet: String = text[start..].chars().take(60).collect();
        EngineError::MalformedToolCall(format!("{why} in {snippet:?}"))
    };

    let open = body.find('(').ok_or_else(|| malformed("missing ("))?;
    let name = body[..open].trim();
    if !is_ident(name) {
        return Err(malformed("bad tool name"));
    }
    let rest = &body[open + 1..];
    let close = find_close_paren(rest).ok_or_else(|| malformed("missing )"))?;
    let arg_text = &rest[..close];
    let after = rest[close + 1..].trim_start();
    if !after.starts_with(']') {
        return Err(malformed("missing ]"));
    }

    let mut args = Vec::new();
    for pair in split_args(arg_text) {
        let pair = pair.trim();
        if pair.is_empty() {
            continue;
        }
        let eq = pair.find('=').ok_or_else(|| malformed("argument without ="))?;
        let key = pair[..eq].trim();
        if !is_ident(key) {
            return Err(malformed("bad argument name"));
        }
        let raw = pair[eq + 1..].trim();
        let value = if raw.len() >= 2 && raw.starts_with('"') && raw.ends_with('"') {
            raw[1..raw.len() - 1].to_string()
        } else if raw.parse::<f64>().is_ok() {
            raw.to_string()
        } else {
            return Err(malformed("bare value is not a number"));
        };
        args.push((key.to_string(), value));
    }
    Ok(Some(ToolCall {
        name: name.to_string(),
        args,
    }))
}

/// Index of the closing paren, skipping quoted spans.
fn find_close_paren(s: &str) -> Option<usize> {
    let mut in_quotes = false;
    for (i, c) in s.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            ')' if !in_quotes => return Some(i),
            _ => {}
        }
    }
    None
}

/// Splits on commas outside quoted spans.
fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut in_quotes = false;
    let mut field_start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            ',' if !in_quotes => {
                out.push(&s[field_start..i]);
                field_start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[field_start..]);
    out
}
