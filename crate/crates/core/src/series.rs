//! Monthly series, pre-test transforms, and common-sample alignment.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A calendar month. Ordered by `(year, month)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Period {
    year: i32,
    month: u32,
}

impl Period {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::Domain(format!("month {month} outside 1..12")));
        }
        Ok(Period { year, month })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u32 {
        self.month
    }

    /// Months since year 0, January.
    fn ordinal(self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    fn from_ordinal(ord: i64) -> Self {
        Period {
            year: ord.div_euclid(12) as i32,
            month: ord.rem_euclid(12) as u32 + 1,
        }
    }

    /// The period `n` months later (earlier for negative `n`).
    pub fn offset(self, n: i64) -> Self {
        Self::from_ordinal(self.ordinal() + n)
    }

    /// Signed number of months from `self` to `other`.
    pub fn months_until(self, other: Period) -> i64 {
        other.ordinal() - self.ordinal()
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for Period {
    type Err = Error;

    /// Parses `YYYY-MM`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("`{s}` is not a YYYY-MM period"));
        let (y, m) = s.trim().split_once('-').ok_or_else(bad)?;
        if y.len() != 4 || m.len() != 2 {
            return Err(bad());
        }
        let year = y.parse::<i32>().map_err(|_| bad())?;
        let month = m.parse::<u32>().map_err(|_| bad())?;
        Period::new(year, month)
    }
}

/// A named monthly series of finite values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    name: String,
    start: Period,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(name: impl Into<String>, start: Period, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.is_empty() {
            return Err(Error::Length(format!("series `{name}` is empty")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "series `{name}` has a non-finite value at {}",
                start.offset(i as i64)
            )));
        }
        Ok(TimeSeries { name, start, values })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> Period {
        self.start
    }

    /// Last period covered by the series.
    pub fn end(&self) -> Period {
        self.start.offset(self.values.len() as i64 - 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    fn require_positive(&self, what: &str) -> Result<()> {
        match self.values.iter().position(|&v| v <= 0.0) {
            Some(i) => Err(Error::Domain(format!(
                "{what} needs positive values; `{}` has {} at {}",
                self.name,
                self.values[i],
                self.start.offset(i as i64)
            ))),
            None => Ok(()),
        }
    }
}

/// Natural logarithm of every value; the name gains a `_LN` suffix.
pub fn log_transform(ts: &TimeSeries) -> Result<TimeSeries> {
    ts.require_positive("log transform")?;
    Ok(TimeSeries {
        name: format!("{}_LN", ts.name),
        start: ts.start,
        values: ts.values.iter().map(|v| v.ln()).collect(),
    })
}

/// `d`-fold first difference. The start advances by `d` months.
pub fn difference(ts: &TimeSeries, d: usize) -> Result<TimeSeries> {
    if d == 0 {
        return Err(Error::Domain("difference order must be at least 1".into()));
    }
    if ts.len() <= d {
        return Err(Error::Length(format!(
            "cannot difference `{}` {d} times with {} observations",
            ts.name,
            ts.len()
        )));
    }
    let mut values = ts.values.clone();
    for _ in 0..d {
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(TimeSeries {
        name: ts.name.clone(),
        start: ts.start.offset(d as i64),
        values,
    })
}

/// Multiplicative seasonal factors indexed by calendar month (January first).
///
/// Ratios of the series to its centered 12-term moving average (2x12, half
/// weights at both ends of the window) are averaged per calendar month and
/// scaled so the twelve factors have geometric mean one.
pub fn seasonal_factors(ts: &TimeSeries) -> Result<[f64; 12]> {
    if ts.len() < 36 {
        return Err(Error::Length(format!(
            "seasonal adjustment of `{}` needs at least 36 monthly observations, got {}",
            ts.name,
            ts.len()
        )));
    }
    ts.require_positive("multiplicative seasonal adjustment")?;

    let y = &ts.values;
    let n = y.len();
    let mut sums = [0.0; 12];
    let mut counts = [0usize; 12];
    for t in 6..n - 6 {
        let inner: f64 = y[t - 5..=t + 5].iter().sum();
        let cma = (0.5 * y[t - 6] + inner + 0.5 * y[t + 6]) / 12.0;
        let m = month_index(ts.start, t);
        sums[m] += y[t] / cma;
        counts[m] += 1;
    }

    let mut factors = [0.0; 12];
    for m in 0..12 {
        // n >= 36 leaves at least two interior points per month
        factors[m] = sums[m] / counts[m] as f64;
    }
    let log_mean = factors.iter().map(|f| f.ln()).sum::<f64>() / 12.0;
    let scale = log_mean.exp();
    for f in &mut factors {
        *f /= scale;
    }
    Ok(factors)
}

fn month_index(start: Period, t: usize) -> usize {
    (start.offset(t as i64).month() - 1) as usize
}

/// Classical ratio-to-moving-average multiplicative adjustment; the name gains
/// a `_SA` suffix. Edge observations use their calendar month's factor.
pub fn seasonal_adjust(ts: &TimeSeries) -> Result<TimeSeries> {
    let factors = seasonal_factors(ts)?;
    let values = ts
        .values
        .iter()
        .enumerate()
        .map(|(t, v)| v / factors[month_index(ts.start, t)])
        .collect();
    Ok(TimeSeries {
        name: format!("{}_SA", ts.name),
        start: ts.start,
        values,
    })
}

/// Rectangular multivariate sample: rows are months, columns are variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    start: Period,
    data: DMatrix<f64>,
}

impl Dataset {
    pub fn new(names: Vec<String>, start: Period, data: DMatrix<f64>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Shape("dataset needs at least one variable".into()));
        }
        if data.ncols() != names.len() {
            return Err(Error::Shape(format!(
                "{} names for {} columns",
                names.len(),
                data.ncols()
            )));
        }
        if data.nrows() == 0 {
            return Err(Error::Length("dataset has no observations".into()));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("dataset contains non-finite values".into()));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicateName(n.clone()));
            }
        }
        Ok(Dataset { names, start, data })
    }

    /// Builds a dataset from equally long columns.
    pub fn from_columns(names: Vec<String>, start: Period, columns: &[Vec<f64>]) -> Result<Self> {
        let t = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != t) {
            return Err(Error::Shape("columns differ in length".into()));
        }
        let data = DMatrix::from_fn(t, columns.len(), |i, j| columns[j][i]);
        Dataset::new(names, start, data)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn start(&self) -> Period {
        self.start
    }

    pub fn end(&self) -> Period {
        self.start.offset(self.nobs() as i64 - 1)
    }

    pub fn nobs(&self) -> usize {
        self.data.nrows()
    }

    pub fn nvars(&self) -> usize {
        self.data.ncols()
    }

    /// The `T x k` observation matrix.
    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn column(&self, j: usize) -> TimeSeries {
        TimeSeries {
            name: self.names[j].clone(),
            start: self.start,
            values: self.data.column(j).iter().copied().collect(),
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// First differences of every column.
    pub fn difference(&self) -> Result<Dataset> {
        if self.nobs() < 2 {
            return Err(Error::Length("cannot difference a single observation".into()));
        }
        let t = self.nobs() - 1;
        let data = DMatrix::from_fn(t, self.nvars(), |i, j| self.data[(i + 1, j)] - self.data[(i, j)]);
        Ok(Dataset {
            names: self.names.clone(),
            start: self.start.offset(1),
            data,
        })
    }
}

/// Restricts the series to their common span; columns keep input order.
pub fn align(series: &[TimeSeries]) -> Result<Dataset> {
    let first = series
        .first()
        .ok_or_else(|| Error::Alignment("no series given".into()))?;
    let mut seen = HashSet::new();
    for s in series {
        if !seen.insert(s.name.as_str()) {
            return Err(Error::DuplicateName(s.name.clone()));
        }
    }
    let start = series.iter().map(TimeSeries::start).max().unwrap_or(first.start);
    let end = series.iter().map(TimeSeries::end).min().unwrap_or(first.end());
    if end < start {
        return Err(Error::Alignment(format!(
            "latest start {start} is after earliest end {end}"
        )));
    }
    let t = start.months_until(end) as usize + 1;
    let data = DMatrix::from_fn(t, series.len(), |i, j| {
        let off = series[j].start.months_until(start) as usize;
        series[j].values[off + i]
    });
    Dataset::new(series.iter().map(|s| s.name.clone()).collect(), start, data)
}
