//! Starts the HTTP service on the bundled data.
//!
//! ```bash
//! cargo run -p sonify --example serve -- 127.0.0.1:8080
//! curl -s localhost:8080/api/meta
//! curl -s -XPOST localhost:8080/api/sonify/sequential \
//!     -H 'content-type: application/json' \
//!     -d '{"region": "Goa", "category": "Rape", "mode": "amplitude"}'
//! ```

use sonify::service::serve;
use sonify::Config;

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data");
    let cfg = Config {
        crime_csv: Some(data.join("crime_synthetic.csv")),
        growth_csv: Some(data.join("growth_synthetic.csv")),
        bind_addr: std::env::args().nth(1).unwrap_or_else(|| "127.0.0.1:8080".into()),
        ..Config::default()
    };
    serve(cfg).await?;
    Ok(())
}
