//! Builds both sequential plans for a made-up series and prints the events.

use sonify::mapping::build_sequential_plan;
use sonify::{MappingConfig, SequentialMode, Series};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let series = Series::new(
        "Example",
        "Rape",
        [0.0, 12.0, 9.0, 30.0, 41.0, 38.0, 55.0, 70.0, 64.0, 88.0, 97.0, 120.0],
    );
    let cfg = MappingConfig::default();
    for mode in [SequentialMode::Frequency, SequentialMode::Amplitude] {
        let plan = build_sequential_plan(&series, mode, &cfg)?;
        println!("{} ({:.2} s)", plan.mode.as_str(), plan.span_s());
        for (label, ev) in plan.labels.iter().zip(&plan.events) {
            println!(
                "  {label} t={:>5.2}s band={} pitch={:.3} gain={:.3}",
                ev.start_s, ev.timbre_band, ev.pitch_factor, ev.gain
            );
        }
    }
    Ok(())
}
