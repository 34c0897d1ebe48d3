//! Immutable operator registry: descriptors, argument validation, and
//! dynamic invocation by name.

use crate::error::OperatorError;
use crate::ops::{
    correct_pitch, denoise, dereverb, extract_voice, normalize_loudness, restore_tempo,
    DEFAULT_OVER_SUBTRACTION, DEFAULT_TARGET_DBFS,
};
use crate::report::{analyze_spectrum, FeatureReport};
use audio_core::Waveform;
use serde::{Deserialize, Serialize};

/// Ablation bucket for each operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Denoise,
    Enhance,
    Normalize,
    Analyze,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::Denoise,
        Category::Enhance,
        Category::Normalize,
        Category::Analyze,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::Denoise => "denoising",
            Category::Enhance => "enhancement",
            Category::Normalize => "normalization",
            Category::Analyze => "analysis",
        }
    }
}

/// Alternate functional grouping carried as registry metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorGroup {
    Enhancement,
    Analysis,
    Transformation,
    Separation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReturnKind {
    Audio,
    Report,
}

/// One numeric parameter with its validated range.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub summary: &'static str,
    pub min: f64,
    pub max: f64,
    /// None means the caller must supply a value.
    pub default: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorDescriptor {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: Vec<ParamSpec>,
    pub returns: ReturnKind,
    pub category: Category,
    pub group: OperatorGroup,
}

/// Result of invoking a registry operator.
#[derive(Debug, Clone, PartialEq)]
pub enum OpOutput {
    Audio(Waveform),
    Report(FeatureReport),
}

pub struct Registry {
    descriptors: Vec<OperatorDescriptor>,
}

impl Registry {
    /// The standard seven-operator registry.
    pub fn standard() -> Self {
        let d = |name,
                 summary,
                 params: Vec<ParamSpec>,
                 returns,
                 category,
                 group| OperatorDescriptor {
            name,
            summary,
            params,
            returns,
            category,
            group,
        };
        Registry {
            descriptors: vec![
                d(
                    "denoise",
                    "Suppress stationary background noise via spectral subtraction.",
                    vec![ParamSpec {
                        name: "over_subtraction",
                        summary: "noise-profile subtraction multiplier",
                        min: 0.0,
                        max: 5.0,
                        default: Some(DEFAULT_OVER_SUBTRACTION),
                    }],
                    ReturnKind::Audio,
                    Category::Denoise,
                    OperatorGroup::Enhancement,
                ),
                d(
                    "dereverb",
                    "Suppress late reverberation with a trailing spectral average.",
                    vec![],
                    ReturnKind::Audio,
                    Category::Enhance,
                    OperatorGroup::Enhancement,
                ),
                d(
                    "normalize_loudness",
                    "Apply scalar gain so the RMS level hits the target dBFS.",
                    vec![ParamSpec {
                        name: "target_dbfs",
                        summary: "target RMS level in dBFS",
                        min: -80.0,
                        max: 0.0,
                        default: Some(DEFAULT_TARGET_DBFS),
                    }],
                    ReturnKind::Audio,
                    Category::Normalize,
                    OperatorGroup::Transformation,
                ),
                d(
                    "analyze_spectrum",
                    "Measure SNR, spectral shape, level, pitch, and duration.",
                    vec![],
                    ReturnKind::Report,
                    Category::Analyze,
                    OperatorGroup::Analysis,
                ),
                d(
                    "correct_pitch",
                    "Shift pitch by the given semitones, preserving formants.",
                    vec![ParamSpec {
                        name: "semitones",
                        summary: "corrective shift in semitones",
                        min: -4.0,
                        max: 4.0,
                        default: None,
                    }],
                    ReturnKind::Audio,
                    Category::Enhance,
                    OperatorGroup::Transformation,
                ),
                d(
                    "restore_tempo",
                    "Time-stretch by the given factor (output length ~ len/factor); \
                     pass the reciprocal of the corrupting stretch.",
                    vec![ParamSpec {
                        name: "factor",
                        summary: "playback-speed factor",
                        min: 0.25,
                        max: 4.0,
                        default: None,
                    }],
                    ReturnKind::Audio,
                    Category::Enhance,
                    OperatorGroup::Transformation,
                ),
                d(
                    "extract_voice",
                    "Keep the harmonic (voice) component, dropping percussive content.",
                    vec![],
                    ReturnKind::Audio,
                    Category::Enhance,
                    OperatorGroup::Separation,
                ),
            ],
        }
    }

    /// Registry restricted to the given descriptors, in order. Used for
    /// category ablations and small-prompt tests.
    pub fn with_descriptors(descriptors: Vec<OperatorDescriptor>) -> Self {
        Registry { descriptors }
    }

    /// Standard registry minus every operator of one category.
    pub fn without_category(category: Category) -> Self {
        let descriptors = Registry::standard()
            .descriptors
            .into_iter()
            .filter(|d| d.category != category)
            .collect();
        Registry { descriptors }
    }

    pub fn descriptors(&self) -> &[OperatorDescriptor] {
        &self.descriptors
    }

    pub fn is_empty(&self) -> bool {
        self.descriptors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.descriptors.len()
    }

    pub fn lookup(&self, name: &str) -> Option<&OperatorDescriptor> {
        self.descriptors
            .iter()
            .find(|d| d.name.eq_ignore_ascii_case(name))
    }

    /// Validates named args against the descriptor schema and returns the
    /// resolved parameter values in schema order.
    pub fn resolve_args(
        &self,
        name: &str,
        args: &[(String, String)],
    ) -> Result<Vec<f64>, OperatorError> {
        let desc = self
            .lookup(name)
            .ok_or_else(|| OperatorError::UnknownTool(name.to_string()))?;
        for (arg_name, _) in args {
            if !desc.params.iter().any(|p| p.name.eq_ignore_ascii_case(arg_name)) {
                return Err(OperatorError::InvalidArgs(format!(
                    "unknown parameter {arg_name} for {}",
                    desc.name
                )));
            }
        }
        desc.params
            .iter()
            .map(|p| {
                let given = args
                    .iter()
                    .find(|(n, _)| n.eq_ignore_ascii_case(p.name))
                    .map(|(_, v)| v.as_str());
                let value = match (given, p.default) {
                    (Some(v), _) => v.trim().parse::<f64>().map_err(|_| {
                        OperatorError::InvalidArgs(format!(
                            "parameter {} is not a number: {v}",
                            p.name
                        ))
                    })?,
                    (None, Some(d)) => d,
                    (None, None) => {
                        return Err(OperatorError::InvalidArgs(format!(
                            "missing required parameter {}",
                            p.name
                        )))
                    }
                };
                if !value.is_finite() || value < p.min || value > p.max {
                    return Err(OperatorError::InvalidArgs(format!(
                        "parameter {} = {value} outside [{}, {}]",
                        p.name, p.min, p.max
                    )));
                }
                Ok(value)
            })
            .collect()
    }

    /// Invokes an operator by name on the current audio version.
    pub fn invoke(
        &self,
        name: &str,
        args: &[(String, String)],
        x: &Waveform,
    ) -> Result<OpOutput, OperatorError> {
        let resolved = self.resolve_args(name, args)?;
        let canonical = self.lookup(name).expect("resolved above").name;
        match canonical {
            "denoise" => Ok(OpOutput::Audio(denoise(x, resolved[0])?)),
            "dereverb" => Ok(OpOutput::Audio(dereverb(x)?)),
            "normalize_loudness" => Ok(OpOutput::Audio(normalize_loudness(x, resolved[0])?)),
            "analyze_spectrum" => Ok(OpOutput::Report(analyze_spectrum(x)?)),
            "correct_pitch" => Ok(OpOutput::Audio(correct_pitch(x, resolved[0])?)),
            "restore_tempo" => Ok(OpOutput::Audio(restore_tempo(x, resolved[0])?)),
            "extract_voice" => Ok(OpOutput::Audio(extract_voice(x)?)),
            other => Err(OperatorError::UnknownTool(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arg(name: &str, value: &str) -> (String, String) {
        (name.to_string(), value.to_string())
    }

    #[test]
    fn names_are_unique_identifiers() {
        let reg = Registry::standard();
        let mut names: Vec<&str> = reg.descriptors().iter().map(|d| d.name).collect();
        let total = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), total);
        for n in names {
            assert!(n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
            assert!(!n.chars().next().unwrap().is_ascii_digit());
        }
    }

    #[test]
    fn defaults_pass_their_own_schema() {
        let reg = Registry::standard();
        for desc in reg.descriptors() {
            let args: Vec<(String, String)> = desc
                .params
                .iter()
                .filter_map(|p| p.default.map(|d| arg(p.name, &d.to_string())))
                .collect();
            let needs_value = desc.params.iter().any(|p| p.default.is_none());
            if !needs_value {
                assert!(reg.resolve_args(desc.name, &args).is_ok(), "{}", desc.name);
            }
        }
    }

    #[test]
    fn out_of_range_args_rejected() {
        let reg = Registry::standard();
        assert!(matches!(
            reg.resolve_args("denoise", &[arg("over_subtraction", "9.0")]),
            Err(OperatorError::InvalidArgs(_))
        ));
        assert!(matches!(
            reg.resolve_args("correct_pitch", &[arg("semitones", "11")]),
            Err(OperatorError::InvalidArgs(_))
        ));
        assert!(matches!(
            reg.resolve_args("correct_pitch", &[]),
            Err(OperatorError::InvalidArgs(_))
        ));
        assert!(matches!(
            reg.resolve_args("denoise", &[arg("bogus", "1")]),
            Err(OperatorError::InvalidArgs(_))
        ));
    }

    #[test]
    fn unknown_tool_rejected() {
        let reg = Registry::standard();
        assert!(matches!(
            reg.resolve_args("fly_to_moon", &[]),
            Err(OperatorError::UnknownTool(_))
        ));
    }

    #[test]
    fn lookup_is_case_insensitive() {
        let reg = Registry::standard();
        assert_eq!(reg.lookup("DeNoise").unwrap().name, "denoise");
    }

    #[test]
    fn category_ablation_removes_exactly_one_bucket() {
        let full = Registry::standard();
        for cat in Category::ALL {
            let reduced = Registry::without_category(cat);
            let removed = full.len() - reduced.len();
            let in_bucket = full
                .descriptors()
                .iter()
                .filter(|d| d.category == cat)
                .count();
            assert_eq!(removed, in_bucket);
            assert!(reduced.descriptors().iter().all(|d| d.category != cat));
        }
    }

    #[test]
    fn invoke_routes_to_operators() {
        let reg = Registry::standard();
        let x = audio_core::synth::harmonic_stack(200.0, 6, 0.3, 16_000, 1.0);
        match reg.invoke("analyze_spectrum", &[], &x).unwrap() {
            OpOutput::Report(r) => assert!(r.duration_s > 0.9),
            _ => panic!("expected report"),
        }
        match reg.invoke("normalize_loudness", &[], &x).unwrap() {
            OpOutput::Audio(w) => assert!((w.rms_dbfs() + 23.0).abs() < 0.01),
            _ => panic!("expected audio"),
        }
    }
}
