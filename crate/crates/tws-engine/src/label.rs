//! The seven-way emotion label set and answer-line normalization.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmotionLabel {
    Anger,
    Disgust,
    Fear,
    Joy,
    Neutral,
    Sadness,
    Surprise,
}

impl EmotionLabel {
    pub const ALL: [EmotionLabel; 7] = [
        EmotionLabel::Anger,
        EmotionLabel::Disgust,
        EmotionLabel::Fear,
        EmotionLabel::Joy,
        EmotionLabel::Neutral,
        EmotionLabel::Sadness,
        EmotionLabel::Surprise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EmotionLabel::Anger => "anger",
            EmotionLabel::Disgust => "disgust",
            EmotionLabel::Fear => "fear",
            EmotionLabel::Joy => "joy",
            EmotionLabel::Neutral => "neutral",
            EmotionLabel::Sadness => "sadness",
            EmotionLabel::Surprise => "surprise",
        }
    }

    /// The label after this one in the canonical cycle. Used by the oracle
    /// backend as the deterministic wrong answer.
    pub fn next(self) -> EmotionLabel {
        let i = Self::ALL.iter().position(|l| *l == self).unwrap();
        Self::ALL[(i + 1) % Self::ALL.len()]
    }

    /// Case-insensitive parse with surrounding punctuation stripped; no
    /// fuzzy matching.
    pub fn parse(s: &str) -> Option<EmotionLabel> {
        let cleaned = s
            .trim()
            .trim_matches(|c: char| !c.is_ascii_alphabetic())
            .to_ascii_lowercase();
        Self::ALL.iter().copied().find(|l| l.name() == cleaned)
    }
}

impl std::fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_case_insensitively_with_punctuation() {
        assert_eq!(EmotionLabel::parse("Joy"), Some(EmotionLabel::Joy));
        assert_eq!(EmotionLabel::parse(" sadness."), Some(EmotionLabel::Sadness));
        assert_eq!(EmotionLabel::parse("[ANGER]"), Some(EmotionLabel::Anger));
        assert_eq!(EmotionLabel::parse("happiness"), None);
        assert_eq!(EmotionLabel::parse(""), None);
    }

    #[test]
    fn next_cycles_through_all_labels() {
        let mut l = EmotionLabel::Anger;
        for _ in 0..7 {
            l = l.next();
        }
        assert_eq!(l, EmotionLabel::Anger);
        assert_ne!(EmotionLabel::Surprise.next(), EmotionLabel::Surprise);
    }
}
