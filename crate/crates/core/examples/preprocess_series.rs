//! Loads the crime and growth tables and prints one series before and after
//! population adjustment and base-year normalization.
//!
//! ```bash
//! cargo run -p sonify --example preprocess_series -- "West Bengal" "Rape"
//! ```

use std::path::PathBuf;

use sonify::pipeline::{load_crime_csv, load_growth_csv};
use sonify::preprocess::{incorporate_population, normalize_base_year};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let region = args.next().unwrap_or_else(|| "West Bengal".into());
    let category = args.next().unwrap_or_else(|| "Rape".into());
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");

    let crime = load_crime_csv(&data.join("crime_synthetic.csv"))?;
    let growth = load_growth_csv(&data.join("growth_synthetic.csv"), &crime)?;
    let raw = crime.series(&region, &category)?;
    let g = growth.get(&raw.region).expect("growth covers every region");
    let adjusted = incorporate_population(&raw, g)?;
    let normalized = normalize_base_year(&adjusted);

    println!("{} / {} (decadal growth {g}%)", raw.region, raw.category);
    println!("{:>6} {:>10} {:>12} {:>12}", "year", "raw", "adjusted", "normalized");
    for (k, year) in (2001..=2012).enumerate() {
        println!(
            "{year:>6} {:>10} {:>12.2} {:>12.2}",
            raw.values[k], adjusted.values[k], normalized.values[k]
        );
    }
    Ok(())
}
