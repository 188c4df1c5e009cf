use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sonify::config::{Config, CONFIG_ENV};
use sonify::dataset::{parse_crime_table, parse_growth_table, CATEGORY_COUNT, REGION_COUNT, YEAR_COUNT};
use sonify::pipeline::{Axis, Comparison, Sonifier};
use sonify::preprocess::preprocess_dataset;
use sonify::{SequentialMode, SonifyError};

#[derive(Parser)]
#[command(name = "sonify", version, about = "Render crime statistics as spatialized scream sonifications")]
struct Cli {
    /// JSON config file (falls back to $SONIFY_CONFIG). Flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataFlags {
    #[arg(long)]
    crime: Option<PathBuf>,
    #[arg(long)]
    growth: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Frequency,
    Amplitude,
}

#[derive(Subcommand)]
enum Command {
    /// Load both tables and check every invariant.
    Validate(DataFlags),
    /// Render twelve yearly sounds for one region and category.
    RenderSeq {
        #[command(flatten)]
        data: DataFlags,
        #[arg(long)]
        region: String,
        #[arg(long)]
        category: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        out: PathBuf,
        /// Also write the chart data as `year,value` CSV.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Render a two-case comparison.
    RenderCmp {
        #[command(flatten)]
        data: DataFlags,
        /// `key=value` with key one of region|state, category|crime, year. Give exactly two.
        #[arg(long = "fix", required = true)]
        fix: Vec<String>,
        /// The two cases of the remaining variable, `a,b`.
        #[arg(long)]
        compare: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the HTTP API.
    Serve,
}

enum Failure {
    User(String),
    Internal(String),
}

impl From<SonifyError> for Failure {
    fn from(e: SonifyError) -> Self {
        if e.is_user_error() {
            Failure::User(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

fn base_config(cli_path: Option<&Path>) -> Result<Config, Failure> {
    let path = cli_path
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    match path {
        Some(p) => Ok(Config::load(&p)?),
        None => Ok(Config::default()),
    }
}

fn with_data(mut cfg: Config, data: &DataFlags) -> Config {
    if let Some(c) = &data.crime {
        cfg.crime_csv = Some(c.clone());
    }
    if let Some(g) = &data.growth {
        cfg.growth_csv = Some(g.clone());
    }
    cfg
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| Failure::User(format!("{}: {e}", path.display())))
}

fn validate(cfg: &Config) -> Result<(), Failure> {
    let mut failed = None;
    let mut check = |name: &str, r: Result<String, String>| match r {
        Ok(detail) => println!("ok    {name}: {detail}"),
        Err(e) => {
            println!("FAIL  {name}: {e}");
            failed.get_or_insert_with(|| format!("{name}: {e}"));
        }
    };

    let read = |p: Result<&Path, SonifyError>| -> Result<String, String> {
        let p = p.map_err(|e| e.to_string())?;
        std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))
    };
    let crime = read(cfg.crime_csv()).and_then(|t| parse_crime_table(&t).map_err(|e| e.to_string()));
    check(
        "crime table",
        crime
            .as_ref()
            .map(|d| format!("{} cells ({REGION_COUNT}x{CATEGORY_COUNT}x{YEAR_COUNT})", d.cell_count()))
            .map_err(Clone::clone),
    );
    if let Ok(d) = &crime {
        let growth = read(cfg.growth_csv())
            .and_then(|t| parse_growth_table(&t, d.regions()).map_err(|e| e.to_string()));
        check(
            "growth table",
            growth.as_ref().map(|g| format!("{} regions covered", g.len())).map_err(Clone::clone),
        );
        if let Ok(g) = &growth {
            let processed = preprocess_dataset(d, g, cfg.mapping.adjustment_mode);
            check(
                "preprocessing",
                processed.as_ref().map(|_| "all series adjusted".to_string()).map_err(|e| e.to_string()),
            );
            if let Ok(p) = &processed {
                let bad = p.all_series().filter(|s| s.values[0] != 0.0).count();
                check(
                    "2001 baseline",
                    if bad == 0 {
                        Ok(format!("{} series start at 0", p.all_series().count()))
                    } else {
                        Err(format!("{bad} series do not start at 0"))
                    },
                );
            }
        }
    }
    match failed {
        None => Ok(()),
        Some(first) => Err(Failure::User(first)),
    }
}

fn parse_fix(spec: &str) -> Result<(Axis, String), Failure> {
    let (k, v) = spec
        .split_once('=')
        .ok_or_else(|| Failure::User(format!("--fix expects key=value, got `{spec}`")))?;
    let axis = Axis::parse(k).ok_or_else(|| Failure::User(format!("unknown --fix key `{k}`")))?;
    Ok((axis, v.trim().to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = base_config(cli.config.as_deref())?;
    match cli.command {
        Command::Validate(data) => validate(&with_data(cfg, &data)),
        Command::RenderSeq {
            data,
            region,
            category,
            mode,
            out,
            graph,
        } => {
            let sonifier = Sonifier::from_config(&with_data(cfg, &data))?;
            let mode = match mode {
                ModeArg::Frequency => SequentialMode::Frequency,
                ModeArg::Amplitude => SequentialMode::Amplitude,
            };
            let r = sonifier.sequential(&region, &category, mode)?;
            write_file(&out, &r.wav)?;
            if let Some(path) = graph {
                let mut csv = String::from("year,value\n");
                for p in &r.graph {
                    let _ = writeln!(csv, "{},{}", p.label, p.value);
                }
                write_file(&path, csv.as_bytes())?;
            }
            println!("wrote {} ({:.2} s)", out.display(), r.plan.span_s());
            Ok(())
        }
        Command::RenderCmp { data, fix, compare, out } => {
            let fixed = fix.iter().map(|f| parse_fix(f)).collect::<Result<Vec<_>, _>>()?;
            let cases: Vec<&str> = compare.split(',').map(str::trim).collect();
            let [a, b] = cases.as_slice() else {
                return Err(Failure::User(format!("--compare expects a,b, got `{compare}`")));
            };
            let cmp = Comparison {
                fixed,
                compare: [a.to_string(), b.to_string()],
            };
            let sonifier = Sonifier::from_config(&with_data(cfg, &data))?;
            let r = sonifier.comparative(&cmp)?;
            write_file(&out, &r.rendering.wav)?;
            println!("a: {} = {}", r.labels[0], r.values[0]);
            println!("b: {} = {}", r.labels[1], r.values[1]);
            println!("louder: {}", r.louder.as_str());
            Ok(())
        }
        Command::Serve => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Internal(e.to_string()))?;
            rt.block_on(sonify::service::serve(cfg)).map_err(|e| match e {
                sonify::service::ServeError::Server(e) => Failure::Internal(e.to_string()),
                other => Failure::User(other.to_string()),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return if usage { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
