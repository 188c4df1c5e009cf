//! Writes the bundled synthetic crime and growth tables.
//!
//! The numbers are generated, not observed: every state gets a random scale
//! and trend, categories get fixed shares, the total category is the sum of
//! the other eight, and "All India" is the sum over states. Real tables in
//! the same CSV layout can replace these files unchanged.
//!
//! ```bash
//! cargo run -p sonify --example synthetic_fixture -- crates/core/data
//! ```

use std::fmt::Write as _;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STATES: [&str; 35] = [
    "Andhra Pradesh",
    "Arunachal Pradesh",
    "Assam",
    "Bihar",
    "Chhattisgarh",
    "Goa",
    "Gujarat",
    "Haryana",
    "Himachal Pradesh",
    "Jammu & Kashmir",
    "Jharkhand",
    "Karnataka",
    "Kerala",
    "Madhya Pradesh",
    "Maharashtra",
    "Manipur",
    "Meghalaya",
    "Mizoram",
    "Nagaland",
    "Odisha",
    "Punjab",
    "Rajasthan",
    "Sikkim",
    "Tamil Nadu",
    "Tripura",
    "Uttar Pradesh",
    "Uttarakhand",
    "West Bengal",
    "A & N Islands",
    "Chandigarh",
    "D & N Haveli",
    "Daman & Diu",
    "Delhi",
    "Lakshadweep",
    "Puducherry",
];

/// Category names with their share of the total.
const CATEGORIES: [(&str, f64); 8] = [
    ("Rape", 0.11),
    ("Kidnapping & Abduction", 0.14),
    ("Dowry Deaths", 0.04),
    ("Assault on Women with Intent to Outrage her Modesty", 0.20),
    ("Insult to the Modesty of Women", 0.06),
    ("Cruelty by Husband or Relatives", 0.42),
    ("Immoral Traffic", 0.025),
    ("Indecent Representation of Women", 0.005),
];
const TOTAL: &str = "Total Crimes Against Women";
const ALL_INDIA: &str = "All India";

fn main() -> std::io::Result<()> {
    let out: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "crates/core/data".into()).into();
    std::fs::create_dir_all(&out)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2001_2012);

    // counts[state][category][year]
    let mut counts = vec![[[0u64; 12]; 8]; STATES.len()];
    for (s, state_counts) in counts.iter_mut().enumerate() {
        // the last seven entries are union territories
        let (lo, hi): (f64, f64) = if s >= STATES.len() - 7 { (20.0, 2000.0) } else { (200.0, 30000.0) };
        let scale = rng.random_range(lo.ln()..hi.ln()).exp();
        let trend: f64 = rng.random_range(-0.02..0.12);
        // every fifth state gets smooth, strictly rising series
        let smooth = s % 5 == 0;
        for (c, (_, share)) in CATEGORIES.iter().enumerate() {
            let cat_trend: f64 = trend + rng.random_range(-0.03..0.03);
            for (k, cell) in state_counts[c].iter_mut().enumerate() {
                let noise = if smooth { 1.0 } else { rng.random_range(0.85..1.15) };
                let base = scale * share * (1.0 + cat_trend).powi(k as i32) * noise;
                *cell = if smooth { base.round() as u64 + 3 * k as u64 } else { base.round() as u64 };
            }
        }
    }

    let mut crime = String::from("region,category,year,count\n");
    let mut emit = |region: &str, category: &str, values: &[u64; 12]| {
        for (k, v) in values.iter().enumerate() {
            let _ = writeln!(crime, "{region},{category},{},{v}", 2001 + k);
        }
    };
    let sum_categories = |cats: &[[u64; 12]; 8]| -> [u64; 12] {
        std::array::from_fn(|k| cats.iter().map(|c| c[k]).sum())
    };
    for (s, state) in STATES.iter().enumerate() {
        for (c, (name, _)) in CATEGORIES.iter().enumerate() {
            emit(state, name, &counts[s][c]);
        }
        emit(state, TOTAL, &sum_categories(&counts[s]));
    }
    let national: [[u64; 12]; 8] =
        std::array::from_fn(|c| std::array::from_fn(|k| counts.iter().map(|st| st[c][k]).sum()));
    for (c, (name, _)) in CATEGORIES.iter().enumerate() {
        emit(ALL_INDIA, name, &national[c]);
    }
    emit(ALL_INDIA, TOTAL, &sum_categories(&national));

    let mut growth = String::from("region,decadal_growth_percent\n");
    for state in STATES {
        let g: f64 = rng.random_range(-1.0..45.0);
        let _ = writeln!(growth, "{state},{:.2}", g);
    }
    let _ = writeln!(growth, "{ALL_INDIA},17.50");

    std::fs::write(out.join("crime_synthetic.csv"), crime)?;
    std::fs::write(out.join("growth_synthetic.csv"), growth)?;
    println!("wrote {}/crime_synthetic.csv and growth_synthetic.csv", out.display());
    Ok(())
}
