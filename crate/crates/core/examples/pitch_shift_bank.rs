//! Plays a sample bank: loads `scream_0.wav` … `scream_5.wav` from a directory (or a generated
//! pair of sine stand-ins when none is given), pitch-shifts the first entry and
//! reports the estimated pitch before and after.
//!
//! ```bash
//! cargo run -p sonify --example pitch_shift_bank -- path/to/screams
//! ```

use sonify::synth::{estimate_pitch, load_sample_bank, pitch_shift};
use sonify::{AudioBuffer, SampleBank};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bank = match std::env::args().nth(1) {
        Some(dir) => load_sample_bank(dir.as_ref())?,
        None => {
            let sr = 44_100;
            let tone = |hz: f32| -> AudioBuffer {
                let s = (0..sr).map(|i| 0.5 * (std::f32::consts::TAU * hz * i as f32 / sr as f32).sin());
                AudioBuffer::mono(sr, s.collect())
            };
            SampleBank::from_buffers(vec![tone(440.0), tone(660.0)], sr)?
        }
    };
    let entry = bank.entry(0);
    let sr = bank.sample_rate_hz();
    println!("bank of {} at {sr} Hz", bank.len());
    for factor in [0.5, 1.0, 1.5, 2.0] {
        let shifted = pitch_shift(&entry.buffer, factor)?;
        let hz = estimate_pitch(&shifted).map_or("?".to_string(), |f| format!("{f:.1}"));
        println!("x{factor}: {} frames, ~{hz} Hz", shifted.frames());
    }
    Ok(())
}
