//! Renders a sequential rendition through the full pipeline and writes it
//! next to a CSV of the plotted values.
//!
//! ```bash
//! cargo run -p sonify --example spatial_render -- "West Bengal" "Cruelty by Husband or Relatives" amplitude stereo
//! ```

use sonify::pipeline::artifact_file_name;
use sonify::{Config, SequentialMode, Sonifier, SpatialConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let region = args.next().unwrap_or_else(|| "West Bengal".into());
    let category = args.next().unwrap_or_else(|| "Cruelty by Husband or Relatives".into());
    let mode: SequentialMode = args.next().unwrap_or_else(|| "frequency".into()).parse()?;
    let spatial = match args.next().as_deref() {
        Some("stereo") => SpatialConfig::stereo(),
        Some(n) => SpatialConfig::ring(n.parse()?),
        None => SpatialConfig::default(),
    };

    let data = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let cfg = Config {
        crime_csv: Some(data.join("crime_synthetic.csv")),
        growth_csv: Some(data.join("growth_synthetic.csv")),
        spatial,
        ..Config::default()
    };
    let sonifier = Sonifier::from_config(&cfg)?;
    let rendering = sonifier.sequential(&region, &category, mode)?;

    let name = artifact_file_name(&region, &category, rendering.plan.mode.as_str());
    std::fs::write(&name, &rendering.wav)?;
    println!("wrote {name} ({} bytes, {} channels)", rendering.wav.len(), spatial.channel_count());
    for (p, ev) in rendering.graph.iter().zip(&rendering.plan.events) {
        println!("{} {:>10.2}  az {:>6.1}°", p.label, p.value, ev.pan_azimuth_deg);
    }
    Ok(())
}
