//! Compares two values along one axis while the other two stay fixed.
//!
//! ```bash
//! cargo run -p sonify --example comparative -- cmp.wav
//! ```

use sonify::pipeline::Axis;
use sonify::{Comparison, Config, Sonifier};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "cmp.wav".into());
    let data = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let cfg = Config {
        crime_csv: Some(data.join("crime_synthetic.csv")),
        growth_csv: Some(data.join("growth_synthetic.csv")),
        ..Config::default()
    };
    let sonifier = Sonifier::from_config(&cfg)?;

    // Delhi against Bihar, Dowry Deaths in 2010
    let cmp = Comparison {
        fixed: vec![
            (Axis::Category, "Dowry Deaths".into()),
            (Axis::Year, "2010".into()),
        ],
        compare: ["Delhi".into(), "Bihar".into()],
    };
    let r = sonifier.comparative(&cmp)?;
    for (side, (label, value)) in ["a", "b"].iter().zip(r.labels.iter().zip(r.values)) {
        println!("{side}: {label} = {value:.2}");
    }
    println!("louder: {}", r.louder.as_str());
    std::fs::write(&out, &r.rendering.wav)?;
    println!("wrote {out}");
    Ok(())
}
