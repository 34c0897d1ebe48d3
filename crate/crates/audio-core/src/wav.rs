//! RIFF/WAVE PCM 16-bit reader and writer.
//!
//! The mapping between integer PCM and float samples is fixed: reading
//! divides by 32768, writing multiplies by 32768, rounds half away from
//! zero, and clamps to the i16 range. A waveform already on the 16-bit
//! grid round-trips bit-exactly.

use crate::error::AudioError;
use crate::waveform::Waveform;
use std::io::{Read, Write};
use std::path::Path;

const FORMAT_PCM: u16 = 1;

/// Loads a PCM 16-bit mono or stereo WAV file. Stereo is downmixed to mono
/// by channel mean.
pub fn load_wav(path: impl AsRef<Path>) -> Result<Waveform, AudioError> {
    let path = path.as_ref();
    let bytes = match std::fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(AudioError::FileNotFound(path.to_path_buf()))
        }
        Err(e) => {
            return Err(AudioError::Io {
                path: path.to_path_buf(),
                source: e,
            })
        }
    };
    parse_wav(&bytes, path)
}

fn parse_wav(bytes: &[u8], path: &Path) -> Result<Waveform, AudioError> {
    let p = || path.to_path_buf();
    if bytes.len() < 12 {
        return Err(AudioError::TruncatedHeader(p()));
    }
    if &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(AudioError::NotRiffWave(p()));
    }

    let mut fmt: Option<(u16, u16, u32, u16)> = None; // tag, channels, rate, bits
    let mut data: Option<&[u8]> = None;
    let mut off = 12usize;
    while off + 8 <= bytes.len() {
        let id = &bytes[off..off + 4];
        let size = u32::from_le_bytes(bytes[off + 4..off + 8].try_into().unwrap()) as usize;
        let body_start = off + 8;
        if id == b"fmt " {
            if body_start + 16 > bytes.len() || size < 16 {
                return Err(AudioError::TruncatedHeader(p()));
            }
            let b = &bytes[body_start..];
            fmt = Some((
                u16::from_le_bytes([b[0], b[1]]),
                u16::from_le_bytes([b[2], b[3]]),
                u32::from_le_bytes([b[4], b[5], b[6], b[7]]),
                u16::from_le_bytes([b[14], b[15]]),
            ));
        } else if id == b"data" {
            if body_start + size > bytes.len() {
                return Err(AudioError::TruncatedData(p()));
            }
            data = Some(&bytes[body_start..body_start + size]);
        }
        // chunks are word-aligned
        off = body_start + size + (size & 1);
    }

    let (tag, channels, rate, bits) = fmt.ok_or_else(|| AudioError::TruncatedHeader(p()))?;
    if tag != FORMAT_PCM {
        return Err(AudioError::UnsupportedCodec {
            path: p(),
            format_tag: tag,
        });
    }
    if bits != 16 {
        return Err(AudioError::UnsupportedBitDepth { path: p(), bits });
    }
    if channels == 0 || channels > 2 {
        return Err(AudioError::UnsupportedChannels { path: p(), channels });
    }
    let data = data.ok_or_else(|| AudioError::TruncatedData(p()))?;

    let frame_bytes = 2 * channels as usize;
    let n_frames = data.len() / frame_bytes;
    let mut samples = Vec::with_capacity(n_frames);
    for f in 0..n_frames {
        let base = f * frame_bytes;
        let mut acc = 0.0f64;
        for c in 0..channels as usize {
            let v = i16::from_le_bytes([data[base + 2 * c], data[base + 2 * c + 1]]);
            acc += v as f64 / 32768.0;
        }
        samples.push(acc / channels as f64);
    }
    Waveform::new(samples, rate)
}

/// Quantizes one sample to the 16-bit grid: round half away from zero,
/// then clamp.
pub fn quantize_i16(x: f64) -> i16 {
    let v = (x * 32768.0).round();
    v.clamp(-32768.0, 32767.0) as i16
}

/// Returns the PCM 16-bit payload that `store_wav` would write.
pub fn pcm16_bytes(w: &Waveform) -> Vec<u8> {
    let mut out = Vec::with_capacity(w.len() * 2);
    for &s in w.samples() {
        out.extend_from_slice(&quantize_i16(s).to_le_bytes());
    }
    out
}

/// Writes a waveform as PCM 16-bit mono WAV. Samples outside [-1, 1) are
/// hard-clipped by the quantizer.
pub fn store_wav(w: &Waveform, path: impl AsRef<Path>) -> Result<(), AudioError> {
    let path = path.as_ref();
    if w.is_empty() {
        return Err(AudioError::EmptyWaveform);
    }
    let payload = pcm16_bytes(w);
    let rate = w.sample_rate_hz();
    let byte_rate = rate * 2;
    let data_len = payload.len() as u32;

    let mut buf = Vec::with_capacity(44 + payload.len());
    buf.extend_from_slice(b"RIFF");
    buf.extend_from_slice(&(36 + data_len).to_le_bytes());
    buf.extend_from_slice(b"WAVE");
    buf.extend_from_slice(b"fmt ");
    buf.extend_from_slice(&16u32.to_le_bytes());
    buf.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    buf.extend_from_slice(&1u16.to_le_bytes()); // mono
    buf.extend_from_slice(&rate.to_le_bytes());
    buf.extend_from_slice(&byte_rate.to_le_bytes());
    buf.extend_from_slice(&2u16.to_le_bytes()); // block align
    buf.extend_from_slice(&16u16.to_le_bytes()); // bits
    buf.extend_from_slice(b"data");
    buf.extend_from_slice(&data_len.to_le_bytes());
    buf.extend_from_slice(&payload);

    let mut file = std::fs::File::create(path).map_err(|e| AudioError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    file.write_all(&buf).map_err(|e| AudioError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(())
}

/// Reads just the PCM payload bytes of a WAV file (for bit-exactness checks).
pub fn read_pcm_payload(path: impl AsRef<Path>) -> Result<Vec<u8>, AudioError> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| AudioError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
    // re-walk the chunk list
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" {
        return Err(AudioError::NotRiffWave(path.to_path_buf()));
    }
    let mut off = 12usize;
    while off + 8 <= bytes.len() {
        let id = &bytes[off..off + 4];
        let size = u32::from_le_bytes(bytes[off + 4..off + 8].try_into().unwrap()) as usize;
        if id == b"data" && off + 8 + size <= bytes.len() {
            return Ok(bytes[off + 8..off + 8 + size].to_vec());
        }
        off = off + 8 + size + (size & 1);
    }
    Err(AudioError::TruncatedData(path.to_path_buf()))
}
