//! Fixed-format tool-result text. Formats are stable because traces are
//! compared byte-for-byte across runs.

use audio_core::Waveform;
use operators::FeatureReport;

pub fn render_report(r: &FeatureReport) -> String {
    format!(
        "estimated_snr_db={:.3} spectral_centroid_hz={:.3} spectral_rolloff_hz={:.3} \
         spectral_flatness={:.6} rms_dbfs={:.3} f0_median_hz={:.3} voiced_fraction={:.3} \
         duration_s={:.3}",
        r.estimated_snr_db,
        r.spectral_centroid_hz,
        r.spectral_rolloff_hz,
        r.spectral_flatness,
        r.rms_dbfs,
        r.f0_median_hz,
        r.voiced_fraction,
        r.duration_s
    )
}

pub fn render_audio_update(w: &Waveform) -> String {
    format!(
        "AUDIO_UPDATED duration_s={:.3} rms_dbfs={:.3}",
        w.duration_s(),
        w.rms_dbfs()
    )
}

pub fn render_error(e: &dyn std::fmt::Display) -> String {
    format!("ERROR: {e}")
}
