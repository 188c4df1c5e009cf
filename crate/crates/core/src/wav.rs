//! RIFF/WAVE PCM encoding, plus a reader for sample-bank input.

use std::path::Path;

use thiserror::Error;

use crate::audio::AudioBuffer;

#[derive(Debug, Error)]
pub enum WavError {
    #[error("unsupported bit depth {0} (expected 16 or 24)")]
    UnsupportedBitDepth(u16),
    #[error("wav decode: {0}")]
    Decode(#[from] hound::Error),
    #[error("wav has no channels or zero sample rate")]
    EmptyFormat,
}

/// Little-endian interleaved PCM in a canonical 44-byte-header RIFF file.
pub fn write_wav(buf: &AudioBuffer, bit_depth: u16) -> Result<Vec<u8>, WavError> {
    let bytes_per_sample = match bit_depth {
        16 => 2usize,
        24 => 3,
        other => return Err(WavError::UnsupportedBitDepth(other)),
    };
    let channels = buf.channel_count();
    let frames = buf.frames();
    let block_align = channels * bytes_per_sample;
    let data_len = frames * block_align;
    let byte_rate = buf.sample_rate_hz() as usize * block_align;

    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&(channels as u16).to_le_bytes());
    out.extend_from_slice(&buf.sample_rate_hz().to_le_bytes());
    out.extend_from_slice(&(byte_rate as u32).to_le_bytes());
    out.extend_from_slice(&(block_align as u16).to_le_bytes());
    out.extend_from_slice(&bit_depth.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());

    let full_scale = ((1i32 << (bit_depth - 1)) - 1) as f32;
    for i in 0..frames {
        for ch in buf.channels() {
            let q = (ch[i].clamp(-1.0, 1.0) * full_scale).round() as i32;
            out.extend_from_slice(&q.to_le_bytes()[..bytes_per_sample]);
        }
    }
    Ok(out)
}

/// Decodes integer or float PCM into a planar buffer in [-1, 1].
pub fn read_wav<R: std::io::Read>(reader: R) -> Result<AudioBuffer, WavError> {
    let mut r = hound::WavReader::new(reader)?;
    let spec = r.spec();
    let nch = spec.channels as usize;
    if nch == 0 || spec.sample_rate == 0 {
        return Err(WavError::EmptyFormat);
    }
    let interleaved: Vec<f32> = match spec.sample_format {
        hound::SampleFormat::Int => {
            let scale = 1.0 / (1i64 << (spec.bits_per_sample - 1)) as f32;
            r.samples::<i32>()
                .map(|s| s.map(|v| v as f32 * scale))
                .collect::<Result<_, _>>()?
        }
        hound::SampleFormat::Float => r.samples::<f32>().collect::<Result<_, _>>()?,
    };
    let mut planar = vec![Vec::with_capacity(interleaved.len() / nch); nch];
    for frame in interleaved.chunks_exact(nch) {
        for (c, &s) in frame.iter().enumerate() {
            planar[c].push(s);
        }
    }
    AudioBuffer::new(spec.sample_rate, planar).map_err(|_| WavError::EmptyFormat)
}

pub fn read_wav_file(path: &Path) -> Result<AudioBuffer, WavError> {
    let f = std::fs::File::open(path).map_err(hound::Error::IoError)?;
    read_wav(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u16_at(b: &[u8], i: usize) -> u16 {
        u16::from_le_bytes([b[i], b[i + 1]])
    }
    fn u32_at(b: &[u8], i: usize) -> u32 {
        u32::from_le_bytes(b[i..i + 4].try_into().unwrap())
    }

    #[test]
    fn mono_16_bit_header_arithmetic() {
        let bytes = write_wav(&AudioBuffer::silence(44100, 1, 44100), 16).unwrap();
        assert_eq!(&bytes[0..4], b"RIFF");
        assert_eq!(&bytes[8..12], b"WAVE");
        assert_eq!(u32_at(&bytes, 40), 88200);
        assert_eq!(u32_at(&bytes, 4) as usize, bytes.len() - 8);
        assert_eq!(u32_at(&bytes, 28), 88200);
        assert_eq!(u16_at(&bytes, 32), 2);
    }

    #[test]
    fn eight_channel_block_align() {
        let bytes = write_wav(&AudioBuffer::silence(48000, 8, 10), 16).unwrap();
        assert_eq!(u16_at(&bytes, 22), 8);
        assert_eq!(u16_at(&bytes, 32), 16);
        let bytes = write_wav(&AudioBuffer::silence(48000, 8, 10), 24).unwrap();
        assert_eq!(u16_at(&bytes, 32), 24);
        assert_eq!(u32_at(&bytes, 40), 240);
    }

    #[test]
    fn bad_depth() {
        assert!(matches!(
            write_wav(&AudioBuffer::silence(8000, 1, 1), 8),
            Err(WavError::UnsupportedBitDepth(8))
        ));
    }

    #[test]
    fn reader_decodes_own_output() {
        let b = AudioBuffer::new(8000, vec![vec![0.5, -0.25, 1.0], vec![-1.0, 0.0, 0.125]]).unwrap();
        for depth in [16, 24] {
            let back = read_wav(std::io::Cursor::new(write_wav(&b, depth).unwrap())).unwrap();
            assert_eq!(back.channel_count(), 2);
            for (x, y) in b.channels().iter().flatten().zip(back.channels().iter().flatten()) {
                assert!((x - y).abs() < 2.0 / 32768.0);
            }
        }
    }
}
