//! Crime-count and population-growth tables.
//!
//! The crime table is a dense `region × category × year` grid loaded from a
//! long-format CSV (`region,category,year,count`). Names are matched
//! case-insensitively after trimming; there is no fuzzy matching.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

/// Number of regions in the full table (35 states/UTs plus "All India").
pub const REGION_COUNT: usize = 36;
/// Number of crime categories, including the total.
pub const CATEGORY_COUNT: usize = 9;
/// Number of years covered.
pub const YEAR_COUNT: usize = 12;
/// First calendar year in every series.
pub const FIRST_YEAR: i32 = 2001;

pub const CRIME_HEADER: [&str; 4] = ["region", "category", "year", "count"];
pub const GROWTH_HEADER: [&str; 2] = ["region", "decadal_growth_percent"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatasetError {
    #[error("bad header: expected `{expected}`, found `{found}`")]
    BadHeader { expected: String, found: String },
    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("missing cell ({region}, {category}, {year})")]
    MissingCell {
        region: String,
        category: String,
        year: i32,
    },
    #[error("line {line}: negative count {value} for ({region}, {category}, {year})")]
    NegativeCount {
        line: u64,
        region: String,
        category: String,
        year: i32,
        value: f64,
    },
    #[error("line {line}: duplicate row for ({region}, {category}, {year})")]
    DuplicateKey {
        line: u64,
        region: String,
        category: String,
        year: i32,
    },
    #[error("line {line}: year {year} outside {FIRST_YEAR}..={}", FIRST_YEAR + YEAR_COUNT as i32 - 1)]
    YearOutOfRange { line: u64, year: i32 },
    #[error("expected {expected_regions} regions x {expected_categories} categories, found {regions} x {categories}")]
    WrongShape {
        expected_regions: usize,
        expected_categories: usize,
        regions: usize,
        categories: usize,
    },
    #[error("growth table has no entry for region `{0}`")]
    MissingRegion(String),
    #[error("line {line}: non-numeric growth `{value}`")]
    NonNumericGrowth { line: u64, value: String },
    #[error("line {line}: growth {value} for `{region}` must be finite and > -100")]
    GrowthOutOfRange { line: u64, region: String, value: f64 },
    #[error("unknown region `{0}`")]
    UnknownRegion(String),
    #[error("unknown category `{0}`")]
    UnknownCategory(String),
    #[error("unknown year `{0}`")]
    UnknownYear(String),
    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for DatasetError {
    fn from(e: csv::Error) -> Self {
        DatasetError::Csv(e.to_string())
    }
}

fn name_key(name: &str) -> String {
    name.trim().to_lowercase()
}

/// The three index sets of the table and name lookup over them.
#[derive(Debug, Clone, PartialEq)]
pub struct Axes {
    regions: Vec<String>,
    categories: Vec<String>,
    region_index: HashMap<String, usize>,
    category_index: HashMap<String, usize>,
}

impl Axes {
    fn new(regions: Vec<String>, categories: Vec<String>) -> Self {
        let region_index = regions
            .iter()
            .enumerate()
            .map(|(i, r)| (name_key(r), i))
            .collect();
        let category_index = categories
            .iter()
            .enumerate()
            .map(|(i, c)| (name_key(c), i))
            .collect();
        Axes {
            regions,
            categories,
            region_index,
            category_index,
        }
    }

    pub fn regions(&self) -> &[String] {
        &self.regions
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    pub fn years(&self) -> Vec<i32> {
        (0..YEAR_COUNT as i32).map(|k| FIRST_YEAR + k).collect()
    }

    pub fn region_index(&self, name: &str) -> Result<usize, DatasetError> {
        self.region_index
            .get(&name_key(name))
            .copied()
            .ok_or_else(|| DatasetError::UnknownRegion(name.to_string()))
    }

    pub fn category_index(&self, name: &str) -> Result<usize, DatasetError> {
        self.category_index
            .get(&name_key(name))
            .copied()
            .ok_or_else(|| DatasetError::UnknownCategory(name.to_string()))
    }

    /// `year` is a calendar year, not an offset.
    pub fn year_index(&self, year: i32) -> Result<usize, DatasetError> {
        let k = year - FIRST_YEAR;
        if (0..YEAR_COUNT as i32).contains(&k) {
            Ok(k as usize)
        } else {
            Err(DatasetError::UnknownYear(year.to_string()))
        }
    }

    /// Parses a textual year and resolves it.
    pub fn year_index_str(&self, year: &str) -> Result<usize, DatasetError> {
        let y: i32 = year
            .trim()
            .parse()
            .map_err(|_| DatasetError::UnknownYear(year.to_string()))?;
        self.year_index(y)
    }

    pub(crate) fn flat(&self, region: usize, category: usize, year: usize) -> usize {
        (region * self.categories.len() + category) * YEAR_COUNT + year
    }

    pub fn cell_count(&self) -> usize {
        self.regions.len() * self.categories.len() * YEAR_COUNT
    }
}

/// Twelve yearly values for one `(region, category)` pair, 2001 first.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub region: String,
    pub category: String,
    pub values: [f64; YEAR_COUNT],
}

impl Series {
    pub fn new(region: impl Into<String>, category: impl Into<String>, values: [f64; YEAR_COUNT]) -> Self {
        Series {
            region: region.into(),
            category: category.into(),
            values,
        }
    }

    pub fn with_values(&self, values: [f64; YEAR_COUNT]) -> Self {
        Series {
            region: self.region.clone(),
            category: self.category.clone(),
            values,
        }
    }
}

/// Expected table shape. The canonical table is 36 × 9; smaller fixtures can
/// be loaded with [`Shape::Any`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Shape {
    #[default]
    Full,
    Any,
}

/// Raw case counts, dense over `region × category × year`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrimeDataset {
    axes: Axes,
    counts: Vec<f64>,
}

impl CrimeDataset {
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

    pub fn cell_count(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, region: &str, category: &str, year: i32) -> Result<f64, DatasetError> {
        let r = self.axes.region_index(region)?;
        let c = self.axes.category_index(category)?;
        let y = self.axes.year_index(year)?;
        Ok(self.counts[self.axes.flat(r, c, y)])
    }

    pub fn series(&self, region: &str, category: &str) -> Result<Series, DatasetError> {
        let r = self.axes.region_index(region)?;
        let c = self.axes.category_index(category)?;
        Ok(self.series_at(r, c))
    }

    pub(crate) fn series_at(&self, r: usize, c: usize) -> Series {
        let start = self.axes.flat(r, c, 0);
        let mut values = [0.0; YEAR_COUNT];
        values.copy_from_slice(&self.counts[start..start + YEAR_COUNT]);
        Series::new(&self.axes.regions[r], &self.axes.categories[c], values)
    }

    /// Serializes back to the canonical long-format CSV.
    pub fn to_csv(&self) -> String {
        let mut out = CRIME_HEADER.join(",");
        out.push('\n');
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        for (r, region) in self.axes.regions.iter().enumerate() {
            for (c, category) in self.axes.categories.iter().enumerate() {
                for y in 0..YEAR_COUNT {
                    let count = self.counts[self.axes.flat(r, c, y)];
                    let year = (FIRST_YEAR + y as i32).to_string();
                    let count = format!("{count}");
                    w.write_record([region.as_str(), category.as_str(), &year, &count])
                        .expect("in-memory csv write");
                }
            }
        }
        let body = w.into_inner().expect("in-memory csv flush");
        out.push_str(std::str::from_utf8(&body).expect("csv writer emits utf-8"));
        out
    }

    /// Builds a dataset directly from a dense value vector laid out
    /// region-major, then category, then year.
    pub fn from_dense(
        regions: Vec<String>,
        categories: Vec<String>,
        counts: Vec<f64>,
    ) -> Result<Self, DatasetError> {
        let axes = Axes::new(regions, categories);
        if counts.len() != axes.cell_count() {
            return Err(DatasetError::WrongShape {
                expected_regions: axes.regions.len(),
                expected_categories: axes.categories.len(),
                regions: counts.len() / (YEAR_COUNT * axes.categories.len().max(1)),
                categories: axes.categories.len(),
            });
        }
        for (i, &v) in counts.iter().enumerate() {
            if !(v.is_finite() && v >= 0.0) {
                let y = i % YEAR_COUNT;
                let c = (i / YEAR_COUNT) % axes.categories.len();
                let r = i / (YEAR_COUNT * axes.categories.len());
                return Err(DatasetError::NegativeCount {
                    line: 0,
                    region: axes.regions[r].clone(),
                    category: axes.categories[c].clone(),
                    year: FIRST_YEAR + y as i32,
                    value: v,
                });
            }
        }
        Ok(CrimeDataset { axes, counts })
    }
}

fn check_header(found: &csv::StringRecord, expected: &[&str]) -> Result<(), DatasetError> {
    let ok = found.len() == expected.len()
        && found
            .iter()
            .zip(expected)
            .all(|(f, e)| f.trim().eq_ignore_ascii_case(e));
    if ok {
        Ok(())
    } else {
        Err(DatasetError::BadHeader {
            expected: expected.join(","),
            found: found.iter().collect::<Vec<_>>().join(","),
        })
    }
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes())
}

/// Parses the full 36 × 9 × 12 crime table.
pub fn parse_crime_table(csv_text: &str) -> Result<CrimeDataset, DatasetError> {
    parse_crime_table_with(csv_text, Shape::Full)
}

/// Parses a crime table. Region and category order follow first appearance.
pub fn parse_crime_table_with(csv_text: &str, shape: Shape) -> Result<CrimeDataset, DatasetError> {
    let mut rdr = reader(csv_text);
    check_header(rdr.headers()?, &CRIME_HEADER)?;

    let mut regions: Vec<String> = Vec::new();
    let mut categories: Vec<String> = Vec::new();
    let mut region_ix: HashMap<String, usize> = HashMap::new();
    let mut category_ix: HashMap<String, usize> = HashMap::new();
    let mut cells: HashMap<(usize, usize, usize), f64> = HashMap::new();

    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() != CRIME_HEADER.len() {
            return Err(DatasetError::MalformedRow {
                line,
                reason: format!("expected 4 fields, found {}", rec.len()),
            });
        }
        let region = rec[0].trim();
        let category = rec[1].trim();
        if region.is_empty() || category.is_empty() {
            return Err(DatasetError::MalformedRow {
                line,
                reason: "empty region or category".into(),
            });
        }
        let year: i32 = rec[2].trim().parse().map_err(|_| DatasetError::MalformedRow {
            line,
            reason: format!("bad year `{}`", &rec[2]),
        })?;
        let count: f64 = rec[3].trim().parse().map_err(|_| DatasetError::MalformedRow {
            line,
            reason: format!("bad count `{}`", &rec[3]),
        })?;
        let k = year - FIRST_YEAR;
        if !(0..YEAR_COUNT as i32).contains(&k) {
            return Err(DatasetError::YearOutOfRange { line, year });
        }
        if !count.is_finite() {
            return Err(DatasetError::MalformedRow {
                line,
                reason: format!("non-finite count `{}`", &rec[3]),
            });
        }
        if count < 0.0 {
            return Err(DatasetError::NegativeCount {
                line,
                region: region.into(),
                category: category.into(),
                year,
                value: count,
            });
        }
        let r = *region_ix.entry(name_key(region)).or_insert_with(|| {
            regions.push(region.to_string());
            regions.len() - 1
        });
        let c = *category_ix.entry(name_key(category)).or_insert_with(|| {
            categories.push(category.to_string());
            categories.len() - 1
        });
        if cells.insert((r, c, k as usize), count).is_some() {
            return Err(DatasetError::DuplicateKey {
                line,
                region: regions[r].clone(),
                category: categories[c].clone(),
                year,
            });
        }
    }

    if shape == Shape::Full && (regions.len() != REGION_COUNT || categories.len() != CATEGORY_COUNT) {
        return Err(DatasetError::WrongShape {
            expected_regions: REGION_COUNT,
            expected_categories: CATEGORY_COUNT,
            regions: regions.len(),
            categories: categories.len(),
        });
    }

    let axes = Axes::new(regions, categories);
    let mut counts = vec![0.0; axes.cell_count()];
    for r in 0..axes.regions.len() {
        for c in 0..axes.categories.len() {
            for y in 0..YEAR_COUNT {
                match cells.get(&(r, c, y)) {
                    Some(&v) => counts[axes.flat(r, c, y)] = v,
                    None => {
                        return Err(DatasetError::MissingCell {
                            region: axes.regions[r].clone(),
                            category: axes.categories[c].clone(),
                            year: FIRST_YEAR + y as i32,
                        })
                    }
                }
            }
        }
    }
    Ok(CrimeDataset { axes, counts })
}

/// Decadal percent population growth (2001–2011) per region.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GrowthTable {
    entries: Vec<(String, f64)>,
    index: HashMap<String, usize>,
}

impl GrowthTable {
    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let mut t = GrowthTable::default();
        for (name, g) in pairs {
            t.insert(name.into(), g);
        }
        t
    }

    fn insert(&mut self, name: String, growth: f64) {
        let key = name_key(&name);
        match self.index.get(&key) {
            Some(&i) => self.entries[i].1 = growth,
            None => {
                self.index.insert(key, self.entries.len());
                self.entries.push((name, growth));
            }
        }
    }

    pub fn get(&self, region: &str) -> Option<f64> {
        self.index.get(&name_key(region)).map(|&i| self.entries[i].1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(n, g)| (n.as_str(), *g))
    }

    /// Fails with the first region in `regions` that has no entry.
    pub fn check_covers<S: AsRef<str>>(&self, regions: &[S]) -> Result<(), DatasetError> {
        match regions.iter().find(|r| self.get(r.as_ref()).is_none()) {
            Some(r) => Err(DatasetError::MissingRegion(r.as_ref().to_string())),
            None => Ok(()),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = GROWTH_HEADER.join(",");
        out.push('\n');
        for (name, g) in &self.entries {
            let _ = writeln!(out, "{name},{g}");
        }
        out
    }
}

/// Parses the growth CSV and checks that it covers every region in
/// `expected_regions`.
pub fn parse_growth_table<S: AsRef<str>>(
    csv_text: &str,
    expected_regions: &[S],
) -> Result<GrowthTable, DatasetError> {
    let mut rdr = reader(csv_text);
    check_header(rdr.headers()?, &GROWTH_HEADER)?;
    let mut table = GrowthTable::default();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() != GROWTH_HEADER.len() {
            return Err(DatasetError::MalformedRow {
                line,
                reason: format!("expected 2 fields, found {}", rec.len()),
            });
        }
        let region = rec[0].trim();
        let raw = rec[1].trim();
        let growth: f64 = raw.parse().map_err(|_| DatasetError::NonNumericGrowth {
            line,
            value: raw.to_string(),
        })?;
        if !growth.is_finite() || growth <= -100.0 {
            return Err(DatasetError::GrowthOutOfRange {
                line,
                region: region.to_string(),
                value: growth,
            });
        }
        table.insert(region.to_string(), growth);
    }
    table.check_covers(expected_regions)?;
    Ok(table)
}
