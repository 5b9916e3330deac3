//! CSV ingestion into a measurement table.
//!
//! Expected schema: `sequence,config,param,<metric>...` with a header row.
//! The three fixed columns are matched case-insensitively; everything after
//! them is a metric column. Empty cells are missing measurements.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{self, Read};
use std::path::Path;

use bjontegaard::{PerformancePoint, SupportSet, TransformKind};

/// What is known about a metric column beyond its values: a display unit
/// and, for saturating quality metrics, the recommended log transform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricInfo {
    pub name: String,
    pub unit: &'static str,
    pub recommended: Option<TransformKind>,
}

impl MetricInfo {
    fn infer(name: &str) -> Self {
        let lower = name.to_ascii_lowercase();
        let (unit, recommended) = if lower.contains("psnr") {
            ("dB", None)
        } else if lower.contains("ssim") {
            ("", Some(TransformKind::LogSsim))
        } else if lower.contains("vmaf") {
            ("", Some(TransformKind::LogVmaf))
        } else if lower.contains("kbit") || lower.contains("kbps") {
            ("kbit/s", None)
        } else {
            ("", None)
        };
        MetricInfo {
            name: name.to_string(),
            unit,
            recommended,
        }
    }

    /// "psnr [dB]" when a unit is known, plain name otherwise.
    pub fn axis_label(&self) -> String {
        if self.unit.is_empty() {
            self.name.clone()
        } else {
            format!("{} [{}]", self.name, self.unit)
        }
    }
}

/// One measurement row: a single encode of `sequence` under `config` at
/// control parameter `param`, with one value slot per metric column.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub sequence: String,
    pub config: String,
    pub param: f64,
    pub values: Vec<Option<f64>>,
}

/// The parsed measurement table.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTable {
    metrics: Vec<MetricInfo>,
    rows: Vec<RunRow>,
}

#[derive(Debug)]
pub enum TableError {
    Io {
        path: String,
        source: io::Error,
    },
    Csv {
        line: u64,
        message: String,
    },
    MissingColumn {
        expected: &'static str,
        found: String,
    },
    NoMetricColumns,
    Parse {
        line: u64,
        column: String,
        value: String,
    },
    DuplicateKey {
        line: u64,
        sequence: String,
        config: String,
        param: f64,
    },
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::Io { path, source } => write!(f, "cannot read '{path}': {source}"),
            TableError::Csv { line, message } => {
                write!(f, "malformed csv near line {line}: {message}")
            }
            TableError::MissingColumn { expected, found } => write!(
                f,
                "expected column '{expected}' but found '{found}' \
                 (schema: sequence,config,param,<metric>...)"
            ),
            TableError::NoMetricColumns => {
                write!(f, "no metric columns after sequence,config,param")
            }
            TableError::Parse {
                line,
                column,
                value,
            } => write!(
                f,
                "line {line}: cannot parse '{value}' in column '{column}' as a number"
            ),
            TableError::DuplicateKey {
                line,
                sequence,
                config,
                param,
            } => write!(
                f,
                "line {line}: duplicate key ({sequence}, {config}, {param})"
            ),
        }
    }
}

impl std::error::Error for TableError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            TableError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

fn csv_error(e: csv::Error) -> TableError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    TableError::Csv {
        line,
        message: e.to_string(),
    }
}

impl RunTable {
    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self, TableError> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| TableError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_reader(file)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self, TableError> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);

        let headers = rdr.headers().map_err(csv_error)?.clone();
        let mut names: Vec<String> = headers.iter().map(str::to_string).collect();
        if let Some(first) = names.first_mut() {
            if let Some(stripped) = first.strip_prefix('\u{feff}') {
                *first = stripped.to_string();
            }
        }
        for (i, expected) in ["sequence", "config", "param"].into_iter().enumerate() {
            match names.get(i) {
                Some(name) if name.eq_ignore_ascii_case(expected) => {}
                other => {
                    return Err(TableError::MissingColumn {
                        expected,
                        found: other.cloned().unwrap_or_default(),
                    })
                }
            }
        }
        if names.len() < 4 {
            return Err(TableError::NoMetricColumns);
        }
        let metrics: Vec<MetricInfo> = names[3..].iter().map(|n| MetricInfo::infer(n)).collect();

        let mut rows = Vec::new();
        let mut seen: HashSet<(String, String, u64)> = HashSet::new();
        for record in rdr.records() {
            let record = record.map_err(csv_error)?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let parse = |column: &str, value: &str| -> Result<f64, TableError> {
                value.parse().map_err(|_| TableError::Parse {
                    line,
                    column: column.to_string(),
                    value: value.to_string(),
                })
            };

            let sequence = record[0].to_string();
            let config = record[1].to_string();
            let param = parse("param", &record[2])?;
            let mut values = Vec::with_capacity(metrics.len());
            for (info, cell) in metrics.iter().zip(record.iter().skip(3)) {
                values.push(if cell.is_empty() {
                    None
                } else {
                    Some(parse(&info.name, cell)?)
                });
            }

            if !seen.insert((sequence.clone(), config.clone(), param.to_bits())) {
                return Err(TableError::DuplicateKey {
                    line,
                    sequence,
                    config,
                    param,
                });
            }
            rows.push(RunRow {
                sequence,
                config,
                param,
                values,
            });
        }

        Ok(RunTable { metrics, rows })
    }

    pub fn metrics(&self) -> &[MetricInfo] {
        &self.metrics
    }

    pub fn rows(&self) -> &[RunRow] {
        &self.rows
    }

    /// Index of a metric column, exact match first, unique case-insensitive
    /// match as a fallback.
    pub fn metric_index(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.metrics.iter().position(|m| m.name == name) {
            return Some(i);
        }
        let mut matches = self
            .metrics
            .iter()
            .enumerate()
            .filter(|(_, m)| m.name.eq_ignore_ascii_case(name));
        match (matches.next(), matches.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }

    /// Sorted unique sequence ids.
    pub fn sequences(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| r.sequence.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Sorted unique config ids.
    pub fn configs(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| r.config.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn has_config(&self, config: &str) -> bool {
        self.rows.iter().any(|r| r.config == config)
    }

    /// Params measured for one (sequence, config), ascending.
    pub fn params(&self, sequence: &str, config: &str) -> Vec<f64> {
        let mut params: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.sequence == sequence && r.config == config)
            .map(|r| r.param)
            .collect();
        params.sort_by(f64::total_cmp);
        params
    }

    /// The support set of one (sequence, config) over the chosen metric
    /// columns. Rows missing either measurement contribute no point.
    /// `None` when the pair has no rows at all.
    pub fn support_set(
        &self,
        sequence: &str,
        config: &str,
        independent: usize,
        dependent: usize,
    ) -> Option<SupportSet> {
        let mut found = false;
        let mut points = Vec::new();
        for row in self
            .rows
            .iter()
            .filter(|r| r.sequence == sequence && r.config == config)
        {
            found = true;
            if let (Some(ind), Some(dep)) = (row.values[independent], row.values[dependent]) {
                points.push(PerformancePoint {
                    param: row.param,
                    independent: ind,
                    dependent: dep,
                });
            }
        }
        found.then(|| SupportSet::new(config, sequence, points))
    }
}
