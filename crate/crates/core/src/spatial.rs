//! Speaker layouts, equal-power panning and plan rendering.
//!
//! Azimuths are in degrees, 0° front, positive to the right. A ring of `n`
//! speakers puts channel `i` at `i·360/n` (wrapped into [-180, 180)), so
//! channel 0 is front-center and channels run clockwise.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::audio::AudioBuffer;
use crate::mapping::{MappingConfig, SonificationPlan};
use crate::synth::{realize_event, SynthError, Voice};

pub const STEREO_AZIMUTHS_DEG: [f64; 2] = [-30.0, 30.0];
pub const DEFAULT_RING_SIZE: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error("ring layouts need at least 2 speakers, got {0}")]
    TooFewSpeakers(usize),
    #[error("plan has no events")]
    EmptyPlan,
    #[error("event {index} has invalid timing")]
    BadEventTiming { index: usize },
    #[error(transparent)]
    Synth(#[from] SynthError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Stereo,
    Ring(usize),
}

/// Where sequential events sit in the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trajectory {
    /// Event `k` plays from ring speaker `k mod n`.
    #[default]
    Rotate,
    /// Every sequential event plays front-center.
    StaticFront,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpatialConfig {
    pub layout: Layout,
    pub trajectory: Trajectory,
}

impl Default for SpatialConfig {
    fn default() -> Self {
        SpatialConfig::ring(DEFAULT_RING_SIZE)
    }
}

impl SpatialConfig {
    pub fn stereo() -> Self {
        SpatialConfig {
            layout: Layout::Stereo,
            trajectory: Trajectory::Rotate,
        }
    }

    pub fn ring(n: usize) -> Self {
        SpatialConfig {
            layout: Layout::Ring(n),
            trajectory: Trajectory::Rotate,
        }
    }

    pub fn validate(&self) -> Result<(), RenderError> {
        match self.layout {
            Layout::Ring(n) if n < 2 => Err(RenderError::TooFewSpeakers(n)),
            _ => Ok(()),
        }
    }

    pub fn channel_count(&self) -> usize {
        match self.layout {
            Layout::Stereo => 2,
            Layout::Ring(n) => n,
        }
    }

    pub fn speaker_azimuths_deg(&self) -> Vec<f64> {
        match self.layout {
            Layout::Stereo => STEREO_AZIMUTHS_DEG.to_vec(),
            Layout::Ring(n) => (0..n).map(|i| wrap_deg(i as f64 * 360.0 / n as f64)).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SpatialRepr {
    Name(String),
    Ring {
        ring: usize,
        #[serde(default)]
        trajectory: Trajectory,
    },
}

impl Serialize for SpatialConfig {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.layout {
            Layout::Stereo => SpatialRepr::Name("stereo".into()).serialize(s),
            Layout::Ring(ring) => SpatialRepr::Ring {
                ring,
                trajectory: self.trajectory,
            }
            .serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for SpatialConfig {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match SpatialRepr::deserialize(d)? {
            SpatialRepr::Name(n) if n.eq_ignore_ascii_case("stereo") => Ok(SpatialConfig::stereo()),
            SpatialRepr::Name(n) => Err(serde::de::Error::custom(format!(
                "unknown spatial layout `{n}` (expected \"stereo\" or {{\"ring\": n}})"
            ))),
            SpatialRepr::Ring { ring, trajectory } => {
                let cfg = SpatialConfig {
                    layout: Layout::Ring(ring),
                    trajectory,
                };
                cfg.validate().map_err(serde::de::Error::custom)?;
                Ok(cfg)
            }
        }
    }
}

/// Wraps into [-180, 180).
pub fn wrap_deg(deg: f64) -> f64 {
    (deg + 180.0).rem_euclid(360.0) - 180.0
}

fn equal_power(frac: f64) -> (f64, f64) {
    let frac = frac.clamp(0.0, 1.0);
    // cos(π/2) is not exactly zero in floating point
    if frac == 0.0 {
        return (1.0, 0.0);
    }
    if frac == 1.0 {
        return (0.0, 1.0);
    }
    let theta = frac * FRAC_PI_2;
    (theta.cos(), theta.sin())
}

/// Pairwise equal-power gains between the two speakers adjacent to
/// `azimuth_deg`. Stereo clamps outside ±30°; rings wrap.
pub fn pan_gains(azimuth_deg: f64, cfg: &SpatialConfig) -> Vec<f64> {
    let az = if azimuth_deg.is_finite() { azimuth_deg } else { 0.0 };
    let mut gains = vec![0.0; cfg.channel_count()];
    match cfg.layout {
        Layout::Stereo => {
            let [l, r] = STEREO_AZIMUTHS_DEG;
            let (gl, gr) = equal_power((az - l) / (r - l));
            gains[0] = gl;
            gains[1] = gr;
        }
        Layout::Ring(n) => {
            let spacing = 360.0 / n as f64;
            let pos = az.rem_euclid(360.0);
            let i = ((pos / spacing).floor() as usize).min(n - 1);
            let (g1, g2) = equal_power((pos - i as f64 * spacing) / spacing);
            gains[i] = g1;
            gains[(i + 1) % n] += g2;
        }
    }
    gains
}

/// Applies the configured trajectory to sequential plans. Comparative plans
/// keep their left/right placement.
pub fn spatialize_plan(plan: &SonificationPlan, cfg: &SpatialConfig) -> SonificationPlan {
    let mut out = plan.clone();
    if !plan.mode.is_sequential() {
        return out;
    }
    for (k, ev) in out.events.iter_mut().enumerate() {
        ev.pan_azimuth_deg = match (cfg.layout, cfg.trajectory) {
            (Layout::Ring(n), Trajectory::Rotate) => wrap_deg(k as f64 * 360.0 / n as f64),
            _ => 0.0,
        };
    }
    out
}

/// Mixes every event of `plan` into a multichannel buffer `span` seconds
/// long, where `span` is the latest event end.
pub fn render_plan(
    plan: &SonificationPlan,
    voice: &Voice,
    mcfg: &MappingConfig,
    scfg: &SpatialConfig,
    sample_rate_hz: u32,
) -> Result<AudioBuffer, RenderError> {
    scfg.validate()?;
    if plan.events.is_empty() {
        return Err(RenderError::EmptyPlan);
    }
    for (index, ev) in plan.events.iter().enumerate() {
        if !(ev.start_s.is_finite() && ev.start_s >= 0.0 && ev.duration_s.is_finite() && ev.duration_s > 0.0) {
            return Err(RenderError::BadEventTiming { index });
        }
    }
    let sr = sample_rate_hz as f64;
    let frames = (plan.span_s() * sr).round() as usize;
    let mut mix = vec![vec![0.0f32; frames]; scfg.channel_count()];
    for ev in &plan.events {
        let mono = realize_event(ev, voice, mcfg, sample_rate_hz)?;
        let offset = (ev.start_s * sr).round() as usize;
        let gains = pan_gains(ev.pan_azimuth_deg, scfg);
        for (ch, &g) in mix.iter_mut().zip(&gains) {
            if g == 0.0 {
                continue;
            }
            let g = g as f32;
            for (dst, &s) in ch[offset.min(frames)..].iter_mut().zip(mono.samples()) {
                *dst += s * g;
            }
        }
    }
    Ok(AudioBuffer::new(sample_rate_hz, mix).expect("uniform mix"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphPoint {
    pub label: String,
    pub value: f64,
}

/// Label/value pairs for the chart shown next to playback.
pub fn graph_points(plan: &SonificationPlan) -> Vec<GraphPoint> {
    plan.labels
        .iter()
        .zip(&plan.series_for_graph)
        .map(|(label, &value)| GraphPoint {
            label: label.clone(),
            value,
        })
        .collect()
}
