//! Data value → sound parameter mapping and plan construction.
//!
//! Sequential plans render twelve yearly values one after another. In
//! frequency mode each value is assigned one of `n_bands` equal-width data
//! ranges and plays that band's pitch and timbre; in amplitude mode a single
//! baseline voice plays at a loudness following the value. Comparative plans
//! render two values with continuous pitch and gain so the larger one is both
//! louder and higher.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{Series, FIRST_YEAR, YEAR_COUNT};
use crate::preprocess::AdjustmentMode;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MappingError {
    #[error("non-finite input")]
    NonFiniteInput,
    #[error("invalid bounds [{min}, {max}]")]
    InvalidBounds { min: f64, max: f64 },
    #[error("invalid mapping config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MappingConfig {
    pub n_bands: usize,
    pub pitch_factor_range: [f64; 2],
    pub gain_range: [f64; 2],
    pub event_duration_s: f64,
    pub inter_event_gap_s: f64,
    pub adjustment_mode: AdjustmentMode,
}

impl Default for MappingConfig {
    fn default() -> Self {
        MappingConfig {
            n_bands: 5,
            pitch_factor_range: [1.0, 2.0],
            gain_range: [0.2, 1.0],
            event_duration_s: 1.0,
            inter_event_gap_s: 0.25,
            adjustment_mode: AdjustmentMode::Subtractive,
        }
    }
}

impl MappingConfig {
    pub fn validate(&self) -> Result<(), MappingError> {
        let bad = |m: &str| Err(MappingError::InvalidConfig(m.to_string()));
        let [plo, phi] = self.pitch_factor_range;
        let [glo, ghi] = self.gain_range;
        if self.n_bands < 2 {
            return bad("n_bands must be >= 2");
        }
        if !(plo.is_finite() && phi.is_finite() && plo > 0.0 && plo < phi) {
            return bad("pitch_factor_range must satisfy 0 < lo < hi");
        }
        if !(glo > 0.0 && glo < ghi && ghi <= 1.0) {
            return bad("gain_range must satisfy 0 < lo < hi <= 1");
        }
        if !(self.event_duration_s.is_finite() && self.event_duration_s > 0.0) {
            return bad("event_duration_s must be > 0");
        }
        if !(self.inter_event_gap_s.is_finite() && self.inter_event_gap_s >= 0.0) {
            return bad("inter_event_gap_s must be >= 0");
        }
        Ok(())
    }

    /// Seconds from one sequential event start to the next.
    pub fn event_stride_s(&self) -> f64 {
        self.event_duration_s + self.inter_event_gap_s
    }

    /// Total span of a sequential plan: 12 durations and 11 gaps.
    pub fn sequential_span_s(&self) -> f64 {
        YEAR_COUNT as f64 * self.event_duration_s + (YEAR_COUNT - 1) as f64 * self.inter_event_gap_s
    }

    fn gain_midpoint(&self) -> f64 {
        0.5 * (self.gain_range[0] + self.gain_range[1])
    }

    /// Representative pitch for a band: the band-center value mapped through
    /// the continuous pitch curve.
    pub fn band_pitch_factor(&self, band: usize) -> f64 {
        let t = (band as f64 + 0.5) / self.n_bands as f64;
        geometric(self.pitch_factor_range, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequentialMode {
    Frequency,
    Amplitude,
}

impl std::str::FromStr for SequentialMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "frequency" => Ok(SequentialMode::Frequency),
            "amplitude" => Ok(SequentialMode::Amplitude),
            other => Err(format!("unknown mode `{other}` (expected frequency|amplitude)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanMode {
    SequentialFrequency,
    SequentialAmplitude,
    Comparative,
}

impl PlanMode {
    pub fn is_sequential(self) -> bool {
        !matches!(self, PlanMode::Comparative)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PlanMode::SequentialFrequency => "frequency",
            PlanMode::SequentialAmplitude => "amplitude",
            PlanMode::Comparative => "comparative",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoundEvent {
    pub start_s: f64,
    pub duration_s: f64,
    pub pitch_factor: f64,
    pub gain: f64,
    pub timbre_band: usize,
    pub pan_azimuth_deg: f64,
}

impl SoundEvent {
    pub fn end_s(&self) -> f64 {
        self.start_s + self.duration_s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SonificationPlan {
    pub mode: PlanMode,
    pub events: Vec<SoundEvent>,
    pub labels: Vec<String>,
    pub series_for_graph: Vec<f64>,
}

impl SonificationPlan {
    pub fn span_s(&self) -> f64 {
        self.events.iter().map(SoundEvent::end_s).fold(0.0, f64::max)
    }
}

fn check_finite(values: &[f64]) -> Result<(), MappingError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(MappingError::NonFiniteInput)
    }
}

fn check_bounds(min: f64, max: f64) -> Result<(), MappingError> {
    if min <= max {
        Ok(())
    } else {
        Err(MappingError::InvalidBounds { min, max })
    }
}

/// Position of `value` within `[min, max]` in [0, 1]; 0.5 for a degenerate range.
fn unit_position(value: f64, min: f64, max: f64) -> f64 {
    if min == max {
        0.5
    } else {
        ((value - min) / (max - min)).clamp(0.0, 1.0)
    }
}

fn geometric([lo, hi]: [f64; 2], t: f64) -> f64 {
    if t <= 0.0 {
        lo
    } else if t >= 1.0 {
        hi
    } else {
        lo * (hi / lo).powf(t)
    }
}

/// Equal-width band index of `value` over `[min, max]`.
pub fn band_quantize(value: f64, min: f64, max: f64, n_bands: usize) -> Result<usize, MappingError> {
    check_finite(&[value, min, max])?;
    check_bounds(min, max)?;
    if n_bands < 2 {
        return Err(MappingError::InvalidConfig("n_bands must be >= 2".into()));
    }
    if min == max {
        return Ok(n_bands / 2);
    }
    let n = n_bands as f64;
    let raw = (n * (value - min) / (max - min)).floor();
    Ok(raw.clamp(0.0, n - 1.0) as usize)
}

/// Pitch factor, geometric in the value's position so equal data steps are
/// equal musical intervals.
pub fn map_pitch_factor(value: f64, min: f64, max: f64, cfg: &MappingConfig) -> Result<f64, MappingError> {
    check_finite(&[value, min, max])?;
    check_bounds(min, max)?;
    Ok(geometric(cfg.pitch_factor_range, unit_position(value, min, max)))
}

pub fn map_gain(value: f64, min: f64, max: f64, cfg: &MappingConfig) -> Result<f64, MappingError> {
    check_finite(&[value, min, max])?;
    check_bounds(min, max)?;
    let [lo, hi] = cfg.gain_range;
    let t = unit_position(value, min, max);
    Ok(if t >= 1.0 { hi } else { lo + (hi - lo) * t })
}

pub fn series_bounds(s: &Series) -> (f64, f64) {
    s.values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

pub fn build_sequential_plan(
    s: &Series,
    mode: SequentialMode,
    cfg: &MappingConfig,
) -> Result<SonificationPlan, MappingError> {
    cfg.validate()?;
    check_finite(&s.values)?;
    let (min, max) = series_bounds(s);
    let stride = cfg.event_stride_s();
    let events = s
        .values
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let (timbre_band, pitch_factor, gain) = match mode {
                SequentialMode::Frequency => {
                    let band = band_quantize(v, min, max, cfg.n_bands)?;
                    (band, cfg.band_pitch_factor(band), cfg.gain_midpoint())
                }
                SequentialMode::Amplitude => (0, 1.0, map_gain(v, min, max, cfg)?),
            };
            Ok(SoundEvent {
                start_s: k as f64 * stride,
                duration_s: cfg.event_duration_s,
                pitch_factor,
                gain,
                timbre_band,
                pan_azimuth_deg: 0.0,
            })
        })
        .collect::<Result<Vec<_>, MappingError>>()?;
    Ok(SonificationPlan {
        mode: match mode {
            SequentialMode::Frequency => PlanMode::SequentialFrequency,
            SequentialMode::Amplitude => PlanMode::SequentialAmplitude,
        },
        events,
        labels: (0..YEAR_COUNT as i32).map(|k| (FIRST_YEAR + k).to_string()).collect(),
        series_for_graph: s.values.to_vec(),
    })
}

pub const COMPARATIVE_AZIMUTHS_DEG: [f64; 2] = [-45.0, 45.0];

pub fn build_comparative_plan(
    value_a: f64,
    value_b: f64,
    label_a: &str,
    label_b: &str,
    bounds: (f64, f64),
    cfg: &MappingConfig,
) -> Result<SonificationPlan, MappingError> {
    cfg.validate()?;
    let (min, max) = bounds;
    check_finite(&[value_a, value_b, min, max])?;
    check_bounds(min, max)?;
    let event = |value: f64, start_s: f64, pan_azimuth_deg: f64| -> Result<SoundEvent, MappingError> {
        Ok(SoundEvent {
            start_s,
            duration_s: cfg.event_duration_s,
            pitch_factor: map_pitch_factor(value, min, max, cfg)?,
            gain: map_gain(value, min, max, cfg)?,
            timbre_band: band_quantize(value, min, max, cfg.n_bands)?,
            pan_azimuth_deg,
        })
    };
    let events = vec![
        event(value_a, 0.0, COMPARATIVE_AZIMUTHS_DEG[0])?,
        event(value_b, cfg.event_stride_s(), COMPARATIVE_AZIMUTHS_DEG[1])?,
    ];
    Ok(SonificationPlan {
        mode: PlanMode::Comparative,
        events,
        labels: vec![label_a.to_string(), label_b.to_string()],
        series_for_graph: vec![value_a, value_b],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> MappingConfig {
        MappingConfig::default()
    }

    /// Band index by scanning band edges `min + i·w`.
    fn brute_band(v: f64, min: f64, max: f64, n: usize) -> usize {
        let w = (max - min) / n as f64;
        (1..n).filter(|&i| v >= min + i as f64 * w).count()
    }

    #[test]
    fn band_examples() {
        assert_eq!(band_quantize(0.0, 0.0, 100.0, 5).unwrap(), 0);
        assert_eq!(band_quantize(100.0, 0.0, 100.0, 5).unwrap(), 4);
        assert_eq!(band_quantize(50.0, 0.0, 100.0, 5).unwrap(), 2);
        assert_eq!(brute_band(50.0, 0.0, 100.0, 5), 2);
        assert_eq!(band_quantize(7.0, 7.0, 7.0, 5).unwrap(), 2);
        assert_eq!(band_quantize(f64::NAN, 0.0, 1.0, 5), Err(MappingError::NonFiniteInput));
        assert!(matches!(band_quantize(1.0, 2.0, 1.0, 5), Err(MappingError::InvalidBounds { .. })));
    }

    #[test]
    fn pitch_and_gain_examples() {
        let c = cfg();
        assert_eq!(map_pitch_factor(0.0, 0.0, 10.0, &c).unwrap(), 1.0);
        assert_eq!(map_pitch_factor(10.0, 0.0, 10.0, &c).unwrap(), 2.0);
        assert!((map_pitch_factor(5.0, 0.0, 10.0, &c).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!((map_pitch_factor(3.0, 3.0, 3.0, &c).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(map_gain(0.0, 0.0, 10.0, &c).unwrap(), 0.2);
        assert_eq!(map_gain(10.0, 0.0, 10.0, &c).unwrap(), 1.0);
        assert!((map_gain(5.0, 0.0, 10.0, &c).unwrap() - 0.6).abs() < 1e-12);
        assert_eq!(map_gain(-3.0, 0.0, 10.0, &c).unwrap(), 0.2);
        assert_eq!(map_gain(f64::INFINITY, 0.0, 10.0, &c), Err(MappingError::NonFiniteInput));
    }

    #[test]
    fn sequential_frequency_ramp() {
        let values: [f64; 12] = std::array::from_fn(|k| 10.0 * k as f64);
        let plan = build_sequential_plan(&Series::new("r", "c", values), SequentialMode::Frequency, &cfg()).unwrap();
        let bands: Vec<usize> = plan.events.iter().map(|e| e.timbre_band).collect();
        let oracle: Vec<usize> = values.iter().map(|&v| brute_band(v, 0.0, 110.0, 5)).collect();
        assert_eq!(bands, oracle);
        assert_eq!(bands, vec![0, 0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 4]);
        assert!(plan.events.iter().all(|e| (e.gain - 0.6).abs() < 1e-12 && e.pan_azimuth_deg == 0.0));
        assert!(plan.events[4].pitch_factor > plan.events[0].pitch_factor);
        assert_eq!(plan.span_s(), 14.75);
        assert_eq!(plan.labels.first().unwrap(), "2001");
        assert_eq!(plan.series_for_graph, values.to_vec());
    }

    #[test]
    fn sequential_amplitude_constant() {
        let plan = build_sequential_plan(&Series::new("r", "c", [4.0; 12]), SequentialMode::Amplitude, &cfg()).unwrap();
        assert_eq!(plan.events.len(), 12);
        for e in &plan.events {
            assert!((e.gain - 0.6).abs() < 1e-12);
            assert_eq!((e.timbre_band, e.pitch_factor), (0, 1.0));
        }
        for w in plan.events.windows(2) {
            assert!(w[0].end_s() <= w[1].start_s);
        }
    }

    #[test]
    fn comparative_examples() {
        let c = cfg();
        let p = build_comparative_plan(100.0, 50.0, "a", "b", (0.0, 100.0), &c).unwrap();
        let (a, b) = (&p.events[0], &p.events[1]);
        assert_eq!((a.gain, a.pitch_factor), (1.0, 2.0));
        assert!((b.gain - 0.6).abs() < 1e-12);
        assert!((b.pitch_factor - std::f64::consts::SQRT_2).abs() < 1e-6);
        assert_eq!((a.pan_azimuth_deg, b.pan_azimuth_deg), (-45.0, 45.0));
        assert_eq!(b.start_s, 1.25);

        let p = build_comparative_plan(7.0, 7.0, "a", "b", (-3.0, 40.0), &c).unwrap();
        let (a, b) = (&p.events[0], &p.events[1]);
        assert_eq!((a.gain, a.pitch_factor, a.timbre_band), (b.gain, b.pitch_factor, b.timbre_band));

        let p = build_comparative_plan(0.0, 100.0, "a", "b", (0.0, 100.0), &c).unwrap();
        assert!(p.events[1].gain > p.events[0].gain);
        assert!(p.events[1].pitch_factor > p.events[0].pitch_factor);
    }

    #[test]
    fn config_validation() {
        let mut c = cfg();
        c.n_bands = 1;
        assert!(c.validate().is_err());
        let mut c = cfg();
        c.gain_range = [0.5, 0.4];
        assert!(c.validate().is_err());
        let json = r#"{"n_bands":4,"adjustment_mode":"per_capita"}"#;
        let c: MappingConfig = serde_json::from_str(json).unwrap();
        assert_eq!(c.n_bands, 4);
        assert_eq!(c.adjustment_mode, AdjustmentMode::PerCapita);
        assert_eq!(c.gain_range, [0.2, 1.0]);
        assert!(serde_json::from_str::<MappingConfig>(r#"{"tempo":1}"#).is_err());
    }

    proptest! {
        #[test]
        fn banding_is_affine_invariant(
            v in -1000i32..1000, lo in -1000i32..1000, span in 0i32..1000,
            a in 1i32..50, b in -500i32..500, n in 2usize..12,
        ) {
            let (v, lo, hi) = (v as f64, lo as f64, (lo + span) as f64);
            let (a, b) = (a as f64, b as f64);
            prop_assert_eq!(
                band_quantize(a * v + b, a * lo + b, a * hi + b, n).unwrap(),
                band_quantize(v, lo, hi, n).unwrap()
            );
        }

        #[test]
        fn banding_matches_edge_scan(v in 0.0f64..1.0, n in 2usize..10) {
            // edges are exact multiples of 1/n·span only for dyadic n; use span = n
            let span = n as f64;
            prop_assert_eq!(band_quantize(v * span, 0.0, span, n).unwrap(), brute_band(v * span, 0.0, span, n));
        }

        #[test]
        fn mapping_monotone(x in -1e3f64..1e3, y in -1e3f64..1e3, lo in -500.0f64..0.0, w in 1.0f64..500.0) {
            let c = cfg();
            let (v1, v2) = if x <= y { (x, y) } else { (y, x) };
            let hi = lo + w;
            prop_assert!(map_gain(v1, lo, hi, &c).unwrap() <= map_gain(v2, lo, hi, &c).unwrap());
            prop_assert!(map_pitch_factor(v1, lo, hi, &c).unwrap() <= map_pitch_factor(v2, lo, hi, &c).unwrap());
            prop_assert!(band_quantize(v1, lo, hi, 5).unwrap() <= band_quantize(v2, lo, hi, 5).unwrap());
        }
    }
}
