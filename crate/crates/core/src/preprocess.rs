//! Population incorporation and base-year normalization.
//!
//! Counts for year `2001 + k` are scaled by `1 - (k/10)·x/100`, where `x` is
//! the region's decadal percent growth, so 2001 is untouched and 2012 uses
//! `1.1·x`. Afterwards every series is shifted so its 2001 value is zero.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{Axes, CrimeDataset, DatasetError, GrowthTable, Series, YEAR_COUNT};

/// Fraction of the decadal growth applied in each year, 2001..=2012.
pub const GROWTH_SCHEDULE: [f64; YEAR_COUNT] =
    [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PreprocessError {
    #[error("growth {growth}% for `{region}` would make the 2012 adjustment factor non-positive")]
    GrowthOutOfRange { region: String, growth: f64 },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
}

/// How a "reduce by p%" adjustment is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjustmentMode {
    /// `count · (1 − p/100)`
    #[default]
    Subtractive,
    /// `count / (1 + p/100)`
    PerCapita,
}

impl AdjustmentMode {
    fn factor(self, percent: f64) -> f64 {
        match self {
            AdjustmentMode::Subtractive => 1.0 - percent / 100.0,
            AdjustmentMode::PerCapita => 1.0 / (1.0 + percent / 100.0),
        }
    }
}

fn check_growth(region: &str, growth: f64, mode: AdjustmentMode) -> Result<(), PreprocessError> {
    let out_of_range = || PreprocessError::GrowthOutOfRange {
        region: region.to_string(),
        growth,
    };
    if !growth.is_finite() || growth <= -100.0 {
        return Err(out_of_range());
    }
    let last = GROWTH_SCHEDULE[YEAR_COUNT - 1] * growth / 100.0;
    let positive = match mode {
        AdjustmentMode::Subtractive => 1.0 - last > 0.0,
        AdjustmentMode::PerCapita => 1.0 + last > 0.0,
    };
    if positive {
        Ok(())
    } else {
        Err(out_of_range())
    }
}

pub fn incorporate_population(s: &Series, decadal_growth_percent: f64) -> Result<Series, PreprocessError> {
    incorporate_population_with(s, decadal_growth_percent, AdjustmentMode::Subtractive)
}

pub fn incorporate_population_with(
    s: &Series,
    decadal_growth_percent: f64,
    mode: AdjustmentMode,
) -> Result<Series, PreprocessError> {
    check_growth(&s.region, decadal_growth_percent, mode)?;
    let mut out = s.values;
    for (v, f) in out.iter_mut().zip(GROWTH_SCHEDULE) {
        if f != 0.0 {
            *v *= mode.factor(f * decadal_growth_percent);
        }
    }
    Ok(s.with_values(out))
}

pub fn normalize_base_year(s: &Series) -> Series {
    let base = s.values[0];
    let mut out = s.values.map(|v| v - base);
    out[0] = 0.0;
    s.with_values(out)
}

/// Dataset-shaped values after preprocessing. Values may be negative.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessedDataset {
    axes: Axes,
    values: Vec<f64>,
    pub population_adjusted: bool,
    pub normalized: bool,
}

impl ProcessedDataset {
    pub fn axes(&self) -> &Axes {
        &self.axes
    }

    pub fn regions(&self) -> &[String] {
        self.axes.regions()
    }

    pub fn categories(&self) -> &[String] {
        self.axes.categories()
    }

    pub fn years(&self) -> Vec<i32> {
        self.axes.years()
    }

    pub fn series(&self, region: &str, category: &str) -> Result<Series, DatasetError> {
        let r = self.axes.region_index(region)?;
        let c = self.axes.category_index(category)?;
        Ok(self.series_at(r, c))
    }

    pub fn series_at(&self, r: usize, c: usize) -> Series {
        let start = self.axes.flat(r, c, 0);
        let mut values = [0.0; YEAR_COUNT];
        values.copy_from_slice(&self.values[start..start + YEAR_COUNT]);
        Series::new(&self.axes.regions()[r], &self.axes.categories()[c], values)
    }

    pub fn value_at(&self, r: usize, c: usize, y: usize) -> f64 {
        self.values[self.axes.flat(r, c, y)]
    }

    /// Every `(region, category)` series in table order.
    pub fn all_series(&self) -> impl Iterator<Item = Series> + '_ {
        let nc = self.axes.categories().len();
        (0..self.axes.regions().len() * nc).map(move |i| self.series_at(i / nc, i % nc))
    }
}

/// Runs population incorporation then base-year normalization over every
/// series. The growth table is checked for coverage before any work is done.
pub fn preprocess_dataset(
    d: &CrimeDataset,
    g: &GrowthTable,
    mode: AdjustmentMode,
) -> Result<ProcessedDataset, PreprocessError> {
    g.check_covers(d.regions())?;
    for region in d.regions() {
        let growth = g.get(region).expect("coverage checked");
        check_growth(region, growth, mode)?;
    }
    let axes = d.axes().clone();
    let mut values = Vec::with_capacity(axes.cell_count());
    for (r, region) in axes.regions().iter().enumerate() {
        let growth = g.get(region).expect("coverage checked");
        for c in 0..axes.categories().len() {
            let adjusted = incorporate_population_with(&d.series_at(r, c), growth, mode)?;
            values.extend_from_slice(&normalize_base_year(&adjusted).values);
        }
    }
    Ok(ProcessedDataset {
        axes,
        values,
        population_adjusted: true,
        normalized: true,
    })
}
