//! Load → preprocess → map → render, as one reusable object.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::dataset::{parse_crime_table, parse_growth_table, CrimeDataset, DatasetError, GrowthTable};
use crate::mapping::{build_comparative_plan, build_sequential_plan, MappingConfig, SequentialMode, SonificationPlan};
use crate::preprocess::{preprocess_dataset, ProcessedDataset};
use crate::spatial::{graph_points, render_plan, spatialize_plan, GraphPoint, SpatialConfig};
use crate::synth::{BankOptions, SampleBank, Voice};
use crate::wav::write_wav;
use crate::SonifyError;

pub const OUTPUT_BIT_DEPTH: u16 = 16;

fn read(path: &Path) -> Result<String, SonifyError> {
    std::fs::read_to_string(path).map_err(|source| SonifyError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_crime_csv(path: &Path) -> Result<CrimeDataset, SonifyError> {
    Ok(parse_crime_table(&read(path)?)?)
}

pub fn load_growth_csv(path: &Path, dataset: &CrimeDataset) -> Result<GrowthTable, SonifyError> {
    Ok(parse_growth_table(&read(path)?, dataset.regions())?)
}

/// One of the three table axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Region,
    Category,
    Year,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Region, Axis::Category, Axis::Year];

    /// Accepts `region`/`state`, `category`/`crime` and `year`.
    pub fn parse(key: &str) -> Option<Axis> {
        match key.trim().to_ascii_lowercase().as_str() {
            "region" | "state" => Some(Axis::Region),
            "category" | "crime" => Some(Axis::Category),
            "year" => Some(Axis::Year),
            _ => None,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Region => "region",
            Axis::Category => "category",
            Axis::Year => "year",
        })
    }
}

/// Two fixed axes and two cases of the remaining one.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub fixed: Vec<(Axis, String)>,
    pub compare: [String; 2],
}

impl Comparison {
    fn compare_axis(&self) -> Result<Axis, SonifyError> {
        if self.fixed.len() != 2 {
            return Err(SonifyError::Selection(format!(
                "exactly two fixed variables are required, got {}",
                self.fixed.len()
            )));
        }
        if self.fixed[0].0 == self.fixed[1].0 {
            return Err(SonifyError::Selection(format!("`{}` is fixed twice", self.fixed[0].0)));
        }
        Ok(Axis::ALL
            .into_iter()
            .find(|a| self.fixed.iter().all(|(f, _)| f != a))
            .expect("two distinct fixed axes leave one free"))
    }

    fn fixed_value(&self, axis: Axis) -> Option<&str> {
        self.fixed.iter().find(|(a, _)| *a == axis).map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Louder {
    A,
    B,
    Equal,
}

impl Louder {
    pub fn of(a: f64, b: f64) -> Louder {
        if a > b {
            Louder::A
        } else if b > a {
            Louder::B
        } else {
            Louder::Equal
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Louder::A => "a",
            Louder::B => "b",
            Louder::Equal => "equal",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Rendering {
    pub plan: SonificationPlan,
    pub wav: Vec<u8>,
    pub graph: Vec<GraphPoint>,
}

#[derive(Debug, Clone)]
pub struct ComparativeRendering {
    pub rendering: Rendering,
    pub labels: [String; 2],
    pub values: [f64; 2],
    pub louder: Louder,
    pub compare_axis: Axis,
}

/// Immutable, shareable rendering context over a preprocessed dataset.
#[derive(Debug, Clone)]
pub struct Sonifier {
    raw: CrimeDataset,
    processed: ProcessedDataset,
    mapping: MappingConfig,
    spatial: SpatialConfig,
    sample_rate_hz: u32,
    voice: Voice,
}

impl Sonifier {
    pub fn new(
        raw: CrimeDataset,
        growth: &GrowthTable,
        mapping: MappingConfig,
        spatial: SpatialConfig,
        sample_rate_hz: u32,
        voice: Voice,
    ) -> Result<Self, SonifyError> {
        mapping.validate()?;
        spatial.validate()?;
        let processed = preprocess_dataset(&raw, growth, mapping.adjustment_mode)?;
        Ok(Sonifier {
            raw,
            processed,
            mapping,
            spatial,
            sample_rate_hz,
            voice,
        })
    }

    pub fn from_config(cfg: &Config) -> Result<Self, SonifyError> {
        cfg.validate()?;
        let raw = load_crime_csv(cfg.crime_csv()?)?;
        let growth = load_growth_csv(cfg.growth_csv()?, &raw)?;
        let voice = match &cfg.sample_bank_dir {
            Some(dir) => Voice::Bank(SampleBank::load(
                dir,
                BankOptions {
                    sample_rate_hz: cfg.sample_rate_hz,
                    ..BankOptions::default()
                },
            )?),
            None => Voice::default(),
        };
        Self::new(raw, &growth, cfg.mapping.clone(), cfg.spatial, cfg.sample_rate_hz, voice)
    }

    pub fn raw(&self) -> &CrimeDataset {
        &self.raw
    }

    pub fn processed(&self) -> &ProcessedDataset {
        &self.processed
    }

    pub fn mapping(&self) -> &MappingConfig {
        &self.mapping
    }

    pub fn spatial(&self) -> &SpatialConfig {
        &self.spatial
    }

    pub fn sample_rate_hz(&self) -> u32 {
        self.sample_rate_hz
    }

    /// Spatializes, renders and encodes a plan.
    pub fn render(&self, plan: SonificationPlan) -> Result<Rendering, SonifyError> {
        let plan = spatialize_plan(&plan, &self.spatial);
        let audio = render_plan(&plan, &self.voice, &self.mapping, &self.spatial, self.sample_rate_hz)?;
        let wav = write_wav(&audio, OUTPUT_BIT_DEPTH)?;
        let graph = graph_points(&plan);
        Ok(Rendering { plan, wav, graph })
    }

    pub fn sequential(&self, region: &str, category: &str, mode: SequentialMode) -> Result<Rendering, SonifyError> {
        let series = self.processed.series(region, category)?;
        self.render(build_sequential_plan(&series, mode, &self.mapping)?)
    }

    pub fn comparative(&self, cmp: &Comparison) -> Result<ComparativeRendering, SonifyError> {
        let axis = cmp.compare_axis()?;
        let axes = self.processed.axes();
        let fixed_region = cmp.fixed_value(Axis::Region).map(|r| axes.region_index(r)).transpose()?;
        let fixed_category = cmp.fixed_value(Axis::Category).map(|c| axes.category_index(c)).transpose()?;
        let fixed_year = cmp.fixed_value(Axis::Year).map(|y| axes.year_index_str(y)).transpose()?;

        let resolve = |name: &str| -> Result<usize, DatasetError> {
            match axis {
                Axis::Region => axes.region_index(name),
                Axis::Category => axes.category_index(name),
                Axis::Year => axes.year_index_str(name),
            }
        };
        let label = |i: usize| -> String {
            match axis {
                Axis::Region => axes.regions()[i].clone(),
                Axis::Category => axes.categories()[i].clone(),
                Axis::Year => axes.years()[i].to_string(),
            }
        };
        let value = |i: usize| -> f64 {
            let (r, c, y) = match axis {
                Axis::Region => (i, fixed_category.unwrap(), fixed_year.unwrap()),
                Axis::Category => (fixed_region.unwrap(), i, fixed_year.unwrap()),
                Axis::Year => (fixed_region.unwrap(), fixed_category.unwrap(), i),
            };
            self.processed.value_at(r, c, y)
        };
        let slice_len = match axis {
            Axis::Region => axes.regions().len(),
            Axis::Category => axes.categories().len(),
            Axis::Year => axes.years().len(),
        };

        let ia = resolve(&cmp.compare[0])?;
        let ib = resolve(&cmp.compare[1])?;
        let bounds = (0..slice_len)
            .map(value)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let (va, vb) = (value(ia), value(ib));
        let labels = [label(ia), label(ib)];
        let plan = build_comparative_plan(va, vb, &labels[0], &labels[1], bounds, &self.mapping)?;
        Ok(ComparativeRendering {
            rendering: self.render(plan)?,
            labels,
            values: [va, vb],
            louder: Louder::of(va, vb),
            compare_axis: axis,
        })
    }
}

/// `{region}_{category}_{mode}.wav` with anything but ASCII alphanumerics
/// replaced by `_`.
pub fn artifact_file_name(region: &str, category: &str, mode: &str) -> String {
    let clean = |s: &str| -> String {
        s.trim()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect()
    };
    format!("{}_{}_{}.wav", clean(region), clean(category), clean(mode))
}
