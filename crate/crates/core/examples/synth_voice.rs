//! Renders the procedural scream at each timbre band and writes the result
//! as one mono WAV, band 0 first.
//!
//! ```bash
//! cargo run -p sonify --example synth_voice -- voice.wav
//! ```

use sonify::synth::{apply_envelope, synth_scream};
use sonify::wav::write_wav;
use sonify::{AudioBuffer, MappingConfig, SurrogateVoiceParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "voice.wav".into());
    let cfg = MappingConfig::default();
    let sr = 44_100;
    let mut samples = Vec::new();
    for band in 0..cfg.n_bands {
        let harshness = band as f64 / (cfg.n_bands - 1) as f64;
        let params = SurrogateVoiceParams::default().with_harshness(harshness);
        let voice = synth_scream(&params, cfg.band_pitch_factor(band), 0.8, sr)?;
        let voice = apply_envelope(&voice, 0.01, 0.05)?;
        println!("band {band}: pitch x{:.3}, peak {:.2}", cfg.band_pitch_factor(band), voice.peak());
        samples.extend_from_slice(voice.samples());
        samples.extend(std::iter::repeat_n(0.0, sr as usize / 5));
    }
    std::fs::write(&out, write_wav(&AudioBuffer::mono(sr, samples), 16)?)?;
    println!("wrote {out}");
    Ok(())
}
