//! Orchestration: from a measurement table and a configuration to a
//! deterministic report document.

use std::collections::BTreeMap;
use std::fmt;

use bjontegaard::{
    average_bd, bd_value, rie, subset_error, subset_error_stats, BdConfig, Method,
    MetricTransform, TransformKind,
};
use serde::{Deserialize, Serialize};

use crate::table::RunTable;

/// Everything a report run needs besides the table itself.
#[derive(Debug, Clone)]
pub struct ReportConfig {
    pub anchor: String,
    pub tests: Vec<String>,
    /// Quality-like metric the curves are parameterized over.
    pub independent: String,
    /// Rate-like metric being compared.
    pub dependent: String,
    pub transform: TransformKind,
    pub method: Method,
    /// Restrict every support set to these params; the full sets are then
    /// used to quantify the error the restriction introduces.
    pub subset_params: Option<Vec<f64>>,
    /// Pairs whose quality ranges overlap worse than this get a LOW_IOU
    /// warning.
    pub min_iou: f64,
    /// BD magnitudes below this fraction get a BELOW_SUBSET_ERROR warning:
    /// differences smaller than the sparse-sweep error are not meaningful.
    pub bd_warn_threshold: Option<f64>,
    pub sample_count: usize,
}

impl ReportConfig {
    pub fn new(
        anchor: impl Into<String>,
        tests: Vec<String>,
        independent: impl Into<String>,
        dependent: impl Into<String>,
    ) -> Self {
        ReportConfig {
            anchor: anchor.into(),
            tests,
            independent: independent.into(),
            dependent: dependent.into(),
            transform: TransformKind::Identity,
            method: Method::Akima,
            subset_params: None,
            min_iou: 0.5,
            bd_warn_threshold: None,
            sample_count: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigError {
    UnknownMetric(String),
    UnknownConfig(String),
    AnchorInTests(String),
    NoTests,
    BadSubset(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::UnknownMetric(name) => {
                write!(f, "metric '{name}' is not a column of the table")
            }
            ConfigError::UnknownConfig(name) => {
                write!(f, "config '{name}' has no rows in the table")
            }
            ConfigError::AnchorInTests(name) => {
                write!(f, "anchor config '{name}' also appears in the test list")
            }
            ConfigError::NoTests => write!(f, "no test configs given"),
            ConfigError::BadSubset(detail) => write!(f, "bad subset: {detail}"),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub method: String,
    pub transform: String,
    pub bounds_policy: String,
    pub anchor: String,
    pub independent: String,
    pub dependent: String,
    pub min_iou: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairReport {
    pub sequence: String,
    pub config: String,
    /// Mean relative rate difference as a fraction (`-0.25` = 25% less rate).
    pub bd: f64,
    pub iou: f64,
    pub bounds: [f64; 2],
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    /// Mean BD per test config over the sequences that produced a value.
    pub mean_bd: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetCase {
    pub sequence: String,
    pub config: String,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetErrorSection {
    pub mean_abs: f64,
    pub std: f64,
    pub signed_mean: f64,
    pub per_case: Vec<SubsetCase>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub per_sequence: Vec<PairReport>,
    pub aggregate: Aggregate,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub subset_error: Option<SubsetErrorSection>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

/// A report plus whether any pair was dropped for data reasons, which turns
/// into a nonzero exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportOutcome {
    pub report: Report,
    pub had_validation_errors: bool,
}

pub fn run_report(table: &RunTable, cfg: &ReportConfig) -> Result<ReportOutcome, ConfigError> {
    let ind = table
        .metric_index(&cfg.independent)
        .ok_or_else(|| ConfigError::UnknownMetric(cfg.independent.clone()))?;
    let dep = table
        .metric_index(&cfg.dependent)
        .ok_or_else(|| ConfigError::UnknownMetric(cfg.dependent.clone()))?;
    if cfg.tests.is_empty() {
        return Err(ConfigError::NoTests);
    }
    if cfg.tests.contains(&cfg.anchor) {
        return Err(ConfigError::AnchorInTests(cfg.anchor.clone()));
    }
    for config in std::iter::once(&cfg.anchor).chain(&cfg.tests) {
        if !table.has_config(config) {
            return Err(ConfigError::UnknownConfig(config.clone()));
        }
    }
    if let Some(subset) = &cfg.subset_params {
        if subset.len() < 2 {
            return Err(ConfigError::BadSubset(format!(
                "need at least 2 params, got {}",
                subset.len()
            )));
        }
    }

    let transform = MetricTransform::new(cfg.transform);
    let bd_cfg = BdConfig {
        method: cfg.method,
        independent_transform: transform,
        sample_count: cfg.sample_count,
    };

    let mut warnings = Vec::new();
    if let Some(recommended) = table.metrics()[ind].recommended {
        if cfg.transform == TransformKind::Identity {
            warnings.push(format!(
                "SATURATING_METRIC_UNTRANSFORMED: metric '{}' saturates near its \
                 upper end; consider --transform {}",
                table.metrics()[ind].name,
                MetricTransform::new(recommended).label()
            ));
        }
    }

    let mut had_validation_errors = false;
    let mut per_sequence = Vec::new();
    let mut per_config_bds: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let mut subset_cases = Vec::new();

    for sequence in table.sequences() {
        let anchor_full = table.support_set(&sequence, &cfg.anchor, ind, dep);
        for test in &cfg.tests {
            let test_full = table.support_set(&sequence, test, ind, dep);
            let (anchor_full, test_full) = match (&anchor_full, &test_full) {
                (Some(a), Some(t)) => (a, t),
                (a, t) => {
                    let mut missing = Vec::new();
                    if a.is_none() {
                        missing.push(cfg.anchor.as_str());
                    }
                    if t.is_none() {
                        missing.push(test.as_str());
                    }
                    warnings.push(format!(
                        "MISSING_PAIR: {sequence} has no rows for {}; \
                         pair ({sequence}, {test}) skipped",
                        missing.join(" and ")
                    ));
                    continue;
                }
            };

            let mut pair_warnings = Vec::new();
            let (anchor_set, test_set) = match &cfg.subset_params {
                Some(params) => {
                    let a = anchor_full.restrict_to_params(params);
                    let t = test_full.restrict_to_params(params);
                    for (set, full) in [(&a, anchor_full), (&t, test_full)] {
                        if set.len() < params.len() {
                            let missing: Vec<String> = params
                                .iter()
                                .filter(|p| {
                                    !set.param_order()
                                        .iter()
                                        .any(|q| q.total_cmp(p).is_eq())
                                })
                                .map(|p| p.to_string())
                                .collect();
                            pair_warnings.push(format!(
                                "SUBSET_PARAM_MISSING: '{}' lacks param(s) {}",
                                full.config_id(),
                                missing.join(", ")
                            ));
                        }
                    }
                    (a, t)
                }
                None => (anchor_full.clone(), test_full.clone()),
            };

            let result = match bd_value(&test_set, &anchor_set, &bd_cfg) {
                Ok(r) => r,
                Err(e) => {
                    had_validation_errors = true;
                    warnings.push(format!(
                        "SKIPPED_INVALID_PAIR: ({sequence}, {test}) vs {}: {e}",
                        cfg.anchor
                    ));
                    continue;
                }
            };

            pair_warnings.extend(result.warnings.iter().map(|w| w.to_string()));
            if result.iou < cfg.min_iou {
                pair_warnings.push(format!(
                    "LOW_IOU: quality ranges overlap poorly (iou = {:.6} < {:.6})",
                    result.iou, cfg.min_iou
                ));
            }
            if let Some(threshold) = cfg.bd_warn_threshold {
                if result.bd.abs() < threshold {
                    pair_warnings.push(format!(
                        "BELOW_SUBSET_ERROR: |bd| = {:.6} is below the reliability \
                         threshold {:.6}",
                        result.bd.abs(),
                        threshold
                    ));
                }
            }

            per_config_bds.entry(test).or_default().push(result.bd);
            per_sequence.push(PairReport {
                sequence: sequence.clone(),
                config: test.clone(),
                bd: result.bd,
                iou: result.iou,
                bounds: [result.bounds.0, result.bounds.1],
                warnings: pair_warnings,
            });

            if cfg.subset_params.is_some()
                && (test_full.len() > test_set.len() || anchor_full.len() > anchor_set.len())
            {
                match subset_error(&test_set, &anchor_set, test_full, anchor_full, &bd_cfg) {
                    Ok(error) => subset_cases.push(SubsetCase {
                        sequence: sequence.clone(),
                        config: test.clone(),
                        error,
                    }),
                    Err(e) => {
                        had_validation_errors = true;
                        warnings.push(format!(
                            "SUBSET_ERROR_SKIPPED: ({sequence}, {test}): {e}"
                        ));
                    }
                }
            }
        }
    }

    let mean_bd: BTreeMap<String, f64> = per_config_bds
        .into_iter()
        .map(|(config, bds)| (config.to_string(), average_bd(&bds).expect("nonempty")))
        .collect();

    let subset_section = if subset_cases.is_empty() {
        None
    } else {
        let errors: Vec<f64> = subset_cases.iter().map(|c| c.error).collect();
        let stats = subset_error_stats(&errors).expect("nonempty");
        Some(SubsetErrorSection {
            mean_abs: stats.mean_abs,
            std: stats.std,
            signed_mean: stats.signed_mean,
            per_case: subset_cases,
        })
    };

    Ok(ReportOutcome {
        report: Report {
            meta: Meta {
                method: cfg.method.as_str().to_string(),
                transform: transform.label().to_string(),
                bounds_policy: "overlap-intersection".to_string(),
                anchor: cfg.anchor.clone(),
                independent: cfg.independent.clone(),
                dependent: cfg.dependent.clone(),
                min_iou: cfg.min_iou,
            },
            per_sequence,
            aggregate: Aggregate { mean_bd },
            subset_error: subset_section,
            warnings,
        },
        had_validation_errors,
    })
}

/// The param sweep shared by every (sequence, config) pair of the table,
/// or `None` when the sweeps differ.
pub fn shared_param_sweep(table: &RunTable) -> Option<Vec<f64>> {
    let mut shared: Option<Vec<f64>> = None;
    for sequence in table.sequences() {
        for config in table.configs() {
            let params = table.params(&sequence, &config);
            if params.is_empty() {
                continue;
            }
            match &shared {
                None => shared = Some(params),
                Some(existing) if *existing == params => {}
                Some(_) => return None,
            }
        }
    }
    shared
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationCase {
    pub sequence: String,
    pub config: String,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub errors: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationDoc {
    pub cases: Vec<ValidationCase>,
    pub ok: bool,
}

/// Validate every (sequence, config) support set of the table over the
/// chosen metric columns.
pub fn run_validate(
    table: &RunTable,
    independent: &str,
    dependent: &str,
) -> Result<ValidationDoc, ConfigError> {
    let ind = table
        .metric_index(independent)
        .ok_or_else(|| ConfigError::UnknownMetric(independent.to_string()))?;
    let dep = table
        .metric_index(dependent)
        .ok_or_else(|| ConfigError::UnknownMetric(dependent.to_string()))?;

    let mut cases = Vec::new();
    let mut ok = true;
    for sequence in table.sequences() {
        for config in table.configs() {
            let Some(set) = table.support_set(&sequence, &config, ind, dep) else {
                continue;
            };
            let report = set.validate();
            ok &= report.is_usable();
            cases.push(ValidationCase {
                sequence: sequence.clone(),
                config: config.clone(),
                errors: report.errors.iter().map(|f| f.to_string()).collect(),
                warnings: report.warnings.iter().map(|f| f.to_string()).collect(),
            });
        }
    }
    Ok(ValidationDoc { cases, ok })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RieCase {
    pub sequence: String,
    pub config: String,
    pub mean: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RieDoc {
    pub per_case: Vec<RieCase>,
    /// Mean of the per-case means.
    pub mean: f64,
    /// Largest per-case max.
    pub max: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub skipped: Vec<String>,
}

/// Interpolation-error study: per (sequence, config), how well the subset
/// restricted to `params` predicts all measured points.
pub fn run_rie(
    table: &RunTable,
    independent: &str,
    dependent: &str,
    method: Method,
    params: &[f64],
    configs: Option<&[String]>,
) -> Result<RieDoc, ConfigError> {
    let ind = table
        .metric_index(independent)
        .ok_or_else(|| ConfigError::UnknownMetric(independent.to_string()))?;
    let dep = table
        .metric_index(dependent)
        .ok_or_else(|| ConfigError::UnknownMetric(dependent.to_string()))?;
    if params.len() < 2 {
        return Err(ConfigError::BadSubset(format!(
            "need at least 2 params, got {}",
            params.len()
        )));
    }
    let config_list: Vec<String> = match configs {
        Some(list) => {
            for config in list {
                if !table.has_config(config) {
                    return Err(ConfigError::UnknownConfig(config.clone()));
                }
            }
            list.to_vec()
        }
        None => table.configs(),
    };

    let mut per_case = Vec::new();
    let mut skipped = Vec::new();
    for sequence in table.sequences() {
        for config in &config_list {
            let Some(all) = table.support_set(&sequence, config, ind, dep) else {
                continue;
            };
            let subset = all.restrict_to_params(params);
            match rie(&subset, &all, method) {
                Ok(r) => per_case.push(RieCase {
                    sequence: sequence.clone(),
                    config: config.clone(),
                    mean: r.mean,
                    max: r.max,
                }),
                Err(e) => skipped.push(format!("({sequence}, {config}): {e}")),
            }
        }
    }

    let mean = if per_case.is_empty() {
        0.0
    } else {
        per_case.iter().map(|c| c.mean).sum::<f64>() / per_case.len() as f64
    };
    let max = per_case.iter().map(|c| c.max).fold(0.0, f64::max);
    Ok(RieDoc {
        per_case,
        mean,
        max,
        skipped,
    })
}

/// Render any serializable document as pretty JSON with a trailing newline.
pub fn render_json<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("report serialization");
    out.push('\n');
    out
}

/// Fixed-layout text rendering of a report.
pub fn render_text(report: &Report) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let m = &report.meta;
    writeln!(
        out,
        "anchor: {}   method: {}   transform: {}   axes: {} vs {}",
        m.anchor, m.method, m.transform, m.independent, m.dependent
    )
    .unwrap();
    writeln!(
        out,
        "{:<20} {:<16} {:>14} {:>8}",
        "sequence", "config", "bd%", "iou"
    )
    .unwrap();
    for row in &report.per_sequence {
        writeln!(
            out,
            "{:<20} {:<16} {:>14.6} {:>8.3}",
            row.sequence,
            row.config,
            100.0 * row.bd,
            row.iou
        )
        .unwrap();
        for w in &row.warnings {
            writeln!(out, "    warning: {w}").unwrap();
        }
    }
    writeln!(out, "mean bd% per config:").unwrap();
    for (config, bd) in &report.aggregate.mean_bd {
        writeln!(out, "    {:<16} {:>14.6}", config, 100.0 * bd).unwrap();
    }
    if let Some(s) = &report.subset_error {
        writeln!(
            out,
            "subset error over {} case(s): mean_abs {:.6}%  signed {:.6}%  std {:.6}%",
            s.per_case.len(),
            100.0 * s.mean_abs,
            100.0 * s.signed_mean,
            100.0 * s.std
        )
        .unwrap();
    }
    for w in &report.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    out
}
