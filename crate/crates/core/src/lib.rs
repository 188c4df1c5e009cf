//! Sonification of crime-against-women statistics.
//!
//! The crate turns a `region × category × year` table of case counts into
//! scream-based audio renditions:
//!
//! 1. [`dataset`] loads the crime table and per-region population growth.
//! 2. [`preprocess`] scales counts for population growth and shifts each
//!    series so 2001 is zero.
//! 3. [`mapping`] turns values into [`mapping::SonificationPlan`]s: twelve
//!    yearly sounds varying in pitch/timbre or loudness, or two sounds
//!    comparing a pair of values.
//! 4. [`synth`] produces the scream for each event, from a procedural voice
//!    or a bank of recordings.
//! 5. [`spatial`] pans events over a stereo pair or a speaker ring and mixes
//!    them; [`wav`] encodes the result.
//!
//! [`pipeline::Sonifier`] chains these steps, and [`service`] exposes it
//! over HTTP. Runnable examples for each step live in `examples/`.

pub mod audio;
pub mod config;
pub mod dataset;
pub mod mapping;
pub mod pipeline;
pub mod preprocess;
pub mod service;
pub mod spatial;
pub mod synth;
pub mod wav;

use std::path::PathBuf;

use thiserror::Error;

pub use audio::AudioBuffer;
pub use config::Config;
pub use dataset::{CrimeDataset, GrowthTable, Series};
pub use mapping::{MappingConfig, SequentialMode, SonificationPlan, SoundEvent};
pub use pipeline::{Comparison, Louder, Sonifier};
pub use preprocess::{AdjustmentMode, ProcessedDataset};
pub use spatial::SpatialConfig;
pub use synth::{SampleBank, SurrogateVoiceParams, Voice};

#[derive(Debug, Error)]
pub enum SonifyError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("selection: {0}")]
    Selection(String),
    #[error(transparent)]
    Dataset(#[from] dataset::DatasetError),
    #[error(transparent)]
    Preprocess(#[from] preprocess::PreprocessError),
    #[error(transparent)]
    Mapping(#[from] mapping::MappingError),
    #[error(transparent)]
    Synth(#[from] synth::SynthError),
    #[error(transparent)]
    Render(#[from] spatial::RenderError),
    #[error(transparent)]
    Wav(#[from] wav::WavError),
}

impl SonifyError {
    /// True when the caller supplied something wrong (bad names, files,
    /// config); false for failures inside rendering.
    pub fn is_user_error(&self) -> bool {
        !matches!(self, SonifyError::Render(_) | SonifyError::Wav(_))
    }
}
