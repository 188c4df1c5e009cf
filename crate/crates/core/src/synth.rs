//! Scream voices and the sample-level transforms applied to them.
//!
//! Two voice sources exist. [`SurrogateVoiceParams`] drives a procedural
//! scream: a harmonic stack with a short downward glide and vibrato, mixed
//! with low-passed noise. Harshness flattens the harmonic roll-off, adds
//! noise and opens the noise filter, so harsher voices have a brighter
//! spectrum. [`SampleBank`] holds user-supplied recordings ordered from
//! mildest to harshest.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::audio::{clip_sample, AudioBuffer};
use crate::mapping::{MappingConfig, SoundEvent};

pub const PITCH_SHIFT_RANGE: (f64, f64) = (0.25, 4.0);
pub const EVENT_ATTACK_S: f64 = 0.01;
pub const EVENT_RELEASE_S: f64 = 0.02;
pub const DEFAULT_BANK_SIZE: usize = 6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("frequency {hz:.1} Hz outside (20, {limit:.1}) Hz")]
    FrequencyOutOfRange { hz: f64, limit: f64 },
    #[error("duration must be positive, got {0}")]
    NonPositiveDuration(f64),
    #[error("pitch-shift factor {0} outside [0.25, 4]")]
    FactorOutOfRange(f64),
    #[error("attack {attack_s}s + release {release_s}s exceeds buffer duration {duration_s}s")]
    EnvelopeTooLong {
        attack_s: f64,
        release_s: f64,
        duration_s: f64,
    },
    #[error("invalid voice parameters: {0}")]
    InvalidParams(String),
    #[error("sample bank is missing scream_{0}.wav")]
    MissingSample(usize),
    #[error("cannot read {path}: {reason}")]
    UnreadableWav { path: PathBuf, reason: String },
    #[error("{path} is {found} Hz but the bank is {expected} Hz")]
    InconsistentSampleRate {
        path: PathBuf,
        expected: u32,
        found: u32,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateVoiceParams {
    pub base_freq_hz: f64,
    /// 0 = pure, 1 = harshest.
    pub harshness: f64,
    pub partials: usize,
    pub vibrato_rate_hz: f64,
    /// Fractional frequency deviation of the vibrato.
    pub vibrato_depth: f64,
    /// Total fractional downward glide over the event.
    pub glide: f64,
    pub seed: u64,
}

impl Default for SurrogateVoiceParams {
    fn default() -> Self {
        SurrogateVoiceParams {
            base_freq_hz: 600.0,
            harshness: 0.0,
            partials: 8,
            vibrato_rate_hz: 5.5,
            vibrato_depth: 0.01,
            glide: 0.03,
            seed: 0x5eed,
        }
    }
}

impl SurrogateVoiceParams {
    pub fn with_harshness(&self, harshness: f64) -> Self {
        SurrogateVoiceParams {
            harshness,
            ..self.clone()
        }
    }

    pub fn noise_mix(&self) -> f64 {
        0.03 + 0.45 * self.harshness
    }

    fn harmonic_rolloff(&self) -> f64 {
        2.2 - 1.6 * self.harshness
    }

    fn noise_cutoff_hz(&self) -> f64 {
        2500.0 + 9500.0 * self.harshness
    }

    fn validate(&self, sample_rate_hz: u32) -> Result<(), SynthError> {
        let limit = sample_rate_hz as f64 / 4.0;
        let finite = [
            self.base_freq_hz,
            self.harshness,
            self.vibrato_rate_hz,
            self.vibrato_depth,
            self.glide,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(SynthError::InvalidParams("non-finite parameter".into()));
        }
        if !(self.base_freq_hz > 20.0 && self.base_freq_hz < limit) {
            return Err(SynthError::FrequencyOutOfRange {
                hz: self.base_freq_hz,
                limit,
            });
        }
        if !(0.0..=1.0).contains(&self.harshness) {
            return Err(SynthError::InvalidParams(format!("harshness {} outside [0, 1]", self.harshness)));
        }
        if self.partials == 0 {
            return Err(SynthError::InvalidParams("partials must be >= 1".into()));
        }
        if !(0.0..0.5).contains(&self.vibrato_depth) || !(0.0..0.5).contains(&self.glide) {
            return Err(SynthError::InvalidParams("vibrato_depth and glide must be in [0, 0.5)".into()));
        }
        Ok(())
    }
}

fn frame_count(duration_s: f64, sample_rate_hz: u32) -> usize {
    (duration_s * sample_rate_hz as f64).round() as usize
}

/// Renders one mono scream at `base_freq_hz · pitch_factor`.
pub fn synth_scream(
    params: &SurrogateVoiceParams,
    pitch_factor: f64,
    duration_s: f64,
    sample_rate_hz: u32,
) -> Result<AudioBuffer, SynthError> {
    params.validate(sample_rate_hz)?;
    if !(duration_s.is_finite() && duration_s > 0.0) {
        return Err(SynthError::NonPositiveDuration(duration_s));
    }
    let sr = sample_rate_hz as f64;
    let f0 = params.base_freq_hz * pitch_factor;
    let limit = sr / 4.0;
    if !(pitch_factor.is_finite() && pitch_factor > 0.0 && f0 > 20.0 && f0 < limit) {
        return Err(SynthError::FrequencyOutOfRange { hz: f0, limit });
    }

    let n = frame_count(duration_s, sample_rate_hz);
    let nyquist = sr / 2.0;
    let f_peak = f0 * (1.0 + 0.5 * params.glide) * (1.0 + params.vibrato_depth);
    let rolloff = params.harmonic_rolloff();
    let amps: Vec<f64> = (1..=params.partials)
        .take_while(|&k| k as f64 * f_peak < 0.95 * nyquist)
        .map(|k| (k as f64).powf(-rolloff))
        .collect();
    let amp_sum: f64 = amps.iter().sum();

    let mix = params.noise_mix();
    let alpha = 1.0 - (-TAU * params.noise_cutoff_hz() / sr).exp();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut lp = 0.0f64;
    let mut phase = 0.0f64;

    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / sr;
        let progress = i as f64 / n as f64;
        let glide = 1.0 + params.glide * (0.5 - progress);
        let vibrato = 1.0 + params.vibrato_depth * (TAU * params.vibrato_rate_hz * t).sin();
        phase = (phase + TAU * f0 * glide * vibrato / sr) % (TAU * 1024.0);
        let tonal: f64 = amps
            .iter()
            .enumerate()
            .map(|(k, a)| a * ((k + 1) as f64 * phase).sin())
            .sum::<f64>()
            / amp_sum;
        let white: f64 = rng.random_range(-1.0..1.0);
        lp += alpha * (white - lp);
        out.push((1.0 - mix) * tonal + mix * lp * 2.0);
    }

    let peak = out.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let scale = if peak > 0.0 { 0.9 / peak } else { 0.0 };
    Ok(AudioBuffer::mono(
        sample_rate_hz,
        out.into_iter().map(|s| (s * scale) as f32).collect(),
    ))
}

/// Linear-interpolation read of `src` at fractional index `pos`.
fn interp(src: &[f32], pos: f64) -> f32 {
    let i = pos.floor() as usize;
    let frac = (pos - i as f64) as f32;
    let a = src.get(i).copied().unwrap_or(0.0);
    let b = src.get(i + 1).copied().unwrap_or(a);
    a + (b - a) * frac
}

fn resample_by(buf: &AudioBuffer, step: f64, frames: usize, sample_rate_hz: u32) -> AudioBuffer {
    let channels = buf
        .channels()
        .iter()
        .map(|ch| (0..frames).map(|i| interp(ch, i as f64 * step)).collect())
        .collect();
    AudioBuffer::new(sample_rate_hz, channels).expect("same channel count")
}

/// Resampling pitch shift: the output is `1/factor` as long and every
/// frequency is scaled by `factor`.
pub fn pitch_shift(buf: &AudioBuffer, factor: f64) -> Result<AudioBuffer, SynthError> {
    if !(factor.is_finite() && factor >= PITCH_SHIFT_RANGE.0 && factor <= PITCH_SHIFT_RANGE.1) {
        return Err(SynthError::FactorOutOfRange(factor));
    }
    if factor == 1.0 {
        return Ok(buf.clone());
    }
    let frames = (buf.frames() as f64 / factor).round() as usize;
    Ok(resample_by(buf, factor, frames, buf.sample_rate_hz()))
}

/// Converts to another sample rate without changing pitch.
pub fn resample(buf: &AudioBuffer, sample_rate_hz: u32) -> AudioBuffer {
    if buf.sample_rate_hz() == sample_rate_hz {
        return buf.clone();
    }
    let step = buf.sample_rate_hz() as f64 / sample_rate_hz as f64;
    let frames = (buf.frames() as f64 / step).round() as usize;
    resample_by(buf, step, frames, sample_rate_hz)
}

/// Multiplies every sample by `gain` (negative or NaN treated as 0) and
/// clips to [-1, 1].
pub fn apply_gain(buf: &AudioBuffer, gain: f64) -> AudioBuffer {
    let g = if gain.is_nan() { 0.0 } else { gain.max(0.0) } as f32;
    let mut out = buf.clone();
    for s in out.channels_mut().iter_mut().flatten() {
        *s = clip_sample(*s * g);
    }
    out
}

/// Linear fade-in over `attack_s` and fade-out over `release_s`.
pub fn apply_envelope(buf: &AudioBuffer, attack_s: f64, release_s: f64) -> Result<AudioBuffer, SynthError> {
    let sr = buf.sample_rate_hz();
    let too_long = || SynthError::EnvelopeTooLong {
        attack_s,
        release_s,
        duration_s: buf.duration_s(),
    };
    if !(attack_s >= 0.0 && release_s >= 0.0) {
        return Err(too_long());
    }
    let attack = frame_count(attack_s, sr);
    let release = frame_count(release_s, sr);
    let n = buf.frames();
    if attack + release > n {
        return Err(too_long());
    }
    let mut out = buf.clone();
    for ch in out.channels_mut() {
        for (i, s) in ch.iter_mut().take(attack).enumerate() {
            *s *= i as f32 / attack as f32;
        }
        for j in 0..release {
            ch[n - 1 - j] *= j as f32 / release as f32;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BankEntry {
    pub buffer: AudioBuffer,
    /// Autocorrelation estimate; `None` for silent or aperiodic input.
    pub base_pitch_hz: Option<f64>,
}

/// Recorded screams ordered by increasing harshness, all mono at one rate.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBank {
    sample_rate_hz: u32,
    entries: Vec<BankEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BankOptions {
    pub count: usize,
    pub sample_rate_hz: u32,
    /// When false, files at another rate are an error instead of resampled.
    pub resample: bool,
}

impl Default for BankOptions {
    fn default() -> Self {
        BankOptions {
            count: DEFAULT_BANK_SIZE,
            sample_rate_hz: crate::audio::DEFAULT_SAMPLE_RATE,
            resample: true,
        }
    }
}

impl SampleBank {
    /// Builds a bank from in-memory buffers (downmixed and resampled to
    /// `sample_rate_hz`).
    pub fn from_buffers(buffers: Vec<AudioBuffer>, sample_rate_hz: u32) -> Result<Self, SynthError> {
        if buffers.len() < 2 {
            return Err(SynthError::InvalidParams("a sample bank needs at least 2 entries".into()));
        }
        let entries = buffers
            .into_iter()
            .map(|b| {
                let buffer = resample(&b.downmix(), sample_rate_hz);
                let base_pitch_hz = estimate_pitch(&buffer);
                BankEntry { buffer, base_pitch_hz }
            })
            .collect();
        Ok(SampleBank { sample_rate_hz, entries })
    }

    pub fn load(dir: &Path, opts: BankOptions) -> Result<Self, SynthError> {
        let mut buffers = Vec::with_capacity(opts.count);
        for i in 0..opts.count {
            let path = dir.join(format!("scream_{i}.wav"));
            if !path.is_file() {
                return Err(SynthError::MissingSample(i));
            }
            let buf = crate::wav::read_wav_file(&path).map_err(|e| SynthError::UnreadableWav {
                path: path.clone(),
                reason: e.to_string(),
            })?;
            if !opts.resample && buf.sample_rate_hz() != opts.sample_rate_hz {
                return Err(SynthError::InconsistentSampleRate {
                    path,
                    expected: opts.sample_rate_hz,
                    found: buf.sample_rate_hz(),
                });
            }
            buffers.push(buf);
        }
        Self::from_buffers(buffers, opts.sample_rate_hz)
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[BankEntry] {
        &self.entries
    }

    /// Entry for a timbre band; bands past the end reuse the harshest entry.
    pub fn entry(&self, band: usize) -> &BankEntry {
        &self.entries[band.min(self.entries.len() - 1)]
    }
}

/// Loads `scream_0.wav` … `scream_5.wav` from `dir` at 44.1 kHz.
pub fn load_sample_bank(dir: &Path) -> Result<SampleBank, SynthError> {
    SampleBank::load(dir, BankOptions::default())
}

/// Fundamental estimate from the normalized autocorrelation peak between
/// 60 Hz and 2 kHz, over at most half a second from the middle.
pub fn estimate_pitch(buf: &AudioBuffer) -> Option<f64> {
    let sr = buf.sample_rate_hz() as usize;
    let x = buf.samples();
    let win = x.len().min(sr / 2);
    let start = (x.len() - win) / 2;
    let x = &x[start..start + win];
    let min_lag = (sr / 2000).max(1);
    let max_lag = (sr / 60).min(win / 2);
    if max_lag <= min_lag {
        return None;
    }
    let energy: f64 = x.iter().map(|&s| (s as f64) * (s as f64)).sum();
    if energy <= 1e-12 {
        return None;
    }
    let corr = |lag: usize| -> f64 {
        x[..win - lag]
            .iter()
            .zip(&x[lag..])
            .map(|(&a, &b)| a as f64 * b as f64)
            .sum::<f64>()
            / energy
    };
    let (lag, r) = (min_lag..=max_lag)
        .map(|lag| (lag, corr(lag)))
        .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best });
    (r > 0.3).then(|| sr as f64 / lag as f64)
}

/// Sound source for a plan.
#[derive(Debug, Clone, PartialEq)]
pub enum Voice {
    Surrogate(SurrogateVoiceParams),
    Bank(SampleBank),
}

impl Default for Voice {
    fn default() -> Self {
        Voice::Surrogate(SurrogateVoiceParams::default())
    }
}

fn fit_length(buf: AudioBuffer, frames: usize) -> AudioBuffer {
    let sr = buf.sample_rate_hz();
    let channels = buf
        .into_channels()
        .into_iter()
        .map(|mut c| {
            c.resize(frames, 0.0);
            c
        })
        .collect();
    AudioBuffer::new(sr, channels).expect("uniform length")
}

/// Fade lengths used for an event of `duration_s`, shortened for very short
/// events so they always fit.
pub fn event_fades(duration_s: f64) -> (f64, f64) {
    (EVENT_ATTACK_S.min(duration_s / 4.0), EVENT_RELEASE_S.min(duration_s / 4.0))
}

/// Produces the mono audio for one event, exactly `duration_s` long.
pub fn realize_event(
    ev: &SoundEvent,
    voice: &Voice,
    cfg: &MappingConfig,
    sample_rate_hz: u32,
) -> Result<AudioBuffer, SynthError> {
    if !(ev.duration_s.is_finite() && ev.duration_s > 0.0) {
        return Err(SynthError::NonPositiveDuration(ev.duration_s));
    }
    let frames = frame_count(ev.duration_s, sample_rate_hz);
    let raw = match voice {
        Voice::Surrogate(params) => {
            let top = cfg.n_bands.saturating_sub(1).max(1) as f64;
            let harshness = (ev.timbre_band as f64 / top).min(1.0);
            synth_scream(&params.with_harshness(harshness), ev.pitch_factor, ev.duration_s, sample_rate_hz)?
        }
        Voice::Bank(bank) => {
            let source = resample(&bank.entry(ev.timbre_band).buffer, sample_rate_hz);
            fit_length(pitch_shift(&source, ev.pitch_factor)?, frames)
        }
    };
    let (attack, release) = event_fades(ev.duration_s);
    apply_envelope(&apply_gain(&raw, ev.gain), attack, release)
}
