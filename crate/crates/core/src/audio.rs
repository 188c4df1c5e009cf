use thiserror::Error;

pub const DEFAULT_SAMPLE_RATE: u32 = 44_100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AudioError {
    #[error("buffer must have at least one channel")]
    NoChannels,
    #[error("channel lengths differ")]
    RaggedChannels,
    #[error("sample rate must be positive")]
    ZeroSampleRate,
}

/// Planar multichannel sample block. Samples stay finite and within [-1, 1]
/// after every public operation in this crate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    sample_rate_hz: u32,
    channels: Vec<Vec<f32>>,
}

impl AudioBuffer {
    pub fn new(sample_rate_hz: u32, channels: Vec<Vec<f32>>) -> Result<Self, AudioError> {
        if sample_rate_hz == 0 {
            return Err(AudioError::ZeroSampleRate);
        }
        let first = channels.first().ok_or(AudioError::NoChannels)?.len();
        if channels.iter().any(|c| c.len() != first) {
            return Err(AudioError::RaggedChannels);
        }
        let mut buf = AudioBuffer {
            sample_rate_hz,
            channels,
        };
        buf.clip_guard();
        Ok(buf)
    }

    pub fn mono(sample_rate_hz: u32, samples: Vec<f32>) -> Self {
        Self::new(sample_rate_hz, vec![samples]).expect("one channel, positive rate")
    }

    pub fn silence(sample_rate_hz: u32, channels: usize, frames: usize) -> Self {
        Self::new(sample_rate_hz, vec![vec![0.0; frames]; channels.max(1)]).expect("valid shape")
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn frames(&self) -> usize {
        self.channels[0].len()
    }

    pub fn duration_s(&self) -> f64 {
        self.frames() as f64 / self.sample_rate_hz as f64
    }

    pub fn channel(&self, i: usize) -> &[f32] {
        &self.channels[i]
    }

    pub fn channels(&self) -> &[Vec<f32>] {
        &self.channels
    }

    /// First channel; the natural accessor for mono buffers.
    pub fn samples(&self) -> &[f32] {
        &self.channels[0]
    }

    pub fn peak(&self) -> f32 {
        self.channels
            .iter()
            .flatten()
            .fold(0.0f32, |m, s| m.max(s.abs()))
    }

    /// Mean of all channels.
    pub fn downmix(&self) -> AudioBuffer {
        if self.channels.len() == 1 {
            return self.clone();
        }
        let n = self.channels.len() as f32;
        let mixed = (0..self.frames())
            .map(|i| self.channels.iter().map(|c| c[i]).sum::<f32>() / n)
            .collect();
        AudioBuffer::mono(self.sample_rate_hz, mixed)
    }

    /// Forces every sample into [-1, 1]; NaN becomes 0. Identity on
    /// in-range buffers.
    pub(crate) fn clip_guard(&mut self) {
        for s in self.channels.iter_mut().flatten() {
            *s = clip_sample(*s);
        }
    }

    pub(crate) fn channels_mut(&mut self) -> &mut [Vec<f32>] {
        &mut self.channels
    }

    pub(crate) fn into_channels(self) -> Vec<Vec<f32>> {
        self.channels
    }
}

#[inline]
pub(crate) fn clip_sample(s: f32) -> f32 {
    if s.is_nan() {
        0.0
    } else {
        s.clamp(-1.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_checks() {
        assert_eq!(AudioBuffer::new(44100, vec![]), Err(AudioError::NoChannels));
        assert_eq!(
            AudioBuffer::new(44100, vec![vec![0.0; 3], vec![0.0; 2]]),
            Err(AudioError::RaggedChannels)
        );
        assert_eq!(AudioBuffer::new(0, vec![vec![0.0]]), Err(AudioError::ZeroSampleRate));
    }

    #[test]
    fn construction_clips_and_downmix_averages() {
        let b = AudioBuffer::new(8000, vec![vec![2.0, f32::NAN, 0.5], vec![0.0, 0.25, -0.5]]).unwrap();
        assert_eq!(b.channel(0), &[1.0, 0.0, 0.5]);
        assert_eq!(b.downmix().samples(), &[0.5, 0.125, 0.0]);
    }
}
