//! Scenario files, result records, sweep CSV and the three-station table.
//!
//! Files are JSON with the key names of [`ScenarioFile`]. Station indices are
//! 1-based here and 0-based everywhere else in the crate.

use std::fmt::Write as _;
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::analysis::{
    case_a_condition, case_b_condition, metrics_with_structure, CaseAReport, CaseBReport, Group,
    MetricsReport, Preference,
};
use crate::equilibrium::{c_nash_closed_form, nash_closed_form, EquilibriumResult};
use crate::error::Error;
use crate::model::{cost_breakdown, CoalitionStructure, Scenario};
use crate::scenarios::{build_three_station, three_station_assignments, SweepSpec, TypeLabel};

pub const SCHEMA_VERSION: u32 = 1;

/// Tolerance on `Σ α = 1`.
pub const ALPHA_SUM_TOL: f64 = 1e-9;

/// Significant digits of CSV numbers.
pub const CSV_DIGITS: usize = 12;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    #[error(transparent)]
    Model(#[from] Error),
}

impl FormatError {
    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        FormatError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit status: 1 I/O, 2 schema, 3 precondition, 4 conditioning.
    pub fn exit_code(&self) -> i32 {
        match self {
            FormatError::Io { .. } => 1,
            FormatError::Schema { .. } => 2,
            FormatError::Model(e) if e.is_precondition() => 3,
            FormatError::Model(_) => 4,
        }
    }
}

pub fn read_file(path: &std::path::Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &std::path::Path, contents: &str) -> Result<(), FormatError> {
    std::fs::write(path, contents).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Deserializes JSON, reporting the field path of the first error.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FormatError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        FormatError::schema(path, e.into_inner().to_string())
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub n_stations: usize,
    pub horizon: usize,
    pub price_intercepts: Vec<f64>,
    pub price_slope: f64,
    pub sensitivities: Vec<f64>,
    pub demands: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nominal_profiles: Option<Vec<Vec<f64>>>,
    /// Shorthand for `nominal_profiles[i][t] = demands[i] · alpha[t]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,
    /// 1-based station indices.
    #[serde(default)]
    pub coalitions: Vec<Vec<usize>>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let file: ScenarioFile = parse_json(text)?;
        file.check_schema()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario file serializes")
    }

    /// Structural checks that do not depend on model semantics.
    pub fn check_schema(&self) -> Result<(), FormatError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(FormatError::schema(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        let (n, t) = (self.n_stations, self.horizon);
        if n == 0 {
            return Err(FormatError::schema("n_stations", "must be positive"));
        }
        if t == 0 {
            return Err(FormatError::schema("horizon", "must be positive"));
        }
        let lengths = [
            ("price_intercepts", self.price_intercepts.len(), t),
            ("sensitivities", self.sensitivities.len(), n),
            ("demands", self.demands.len(), n),
        ];
        for (field, found, expected) in lengths {
            if found != expected {
                return Err(FormatError::schema(
                    field,
                    format!("has length {found}, expected {expected}"),
                ));
            }
        }
        match (&self.nominal_profiles, &self.alpha) {
            (Some(_), Some(_)) => {
                return Err(FormatError::schema(
                    "alpha",
                    "give either `nominal_profiles` or `alpha`, not both",
                ))
            }
            (None, None) => {
                return Err(FormatError::schema(
                    "nominal_profiles",
                    "one of `nominal_profiles` or `alpha` is required",
                ))
            }
            (Some(rows), None) => {
                if rows.len() != n {
                    return Err(FormatError::schema(
                        "nominal_profiles",
                        format!("has {} rows, expected {n}", rows.len()),
                    ));
                }
                if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != t) {
                    return Err(FormatError::schema(
                        format!("nominal_profiles[{i}]"),
                        format!("has length {}, expected {t}", r.len()),
                    ));
                }
            }
            (None, Some(alpha)) => {
                if alpha.len() != t {
                    return Err(FormatError::schema(
                        "alpha",
                        format!("has length {}, expected {t}", alpha.len()),
                    ));
                }
                if let Some(k) = alpha.iter().position(|&a| a < 0.0) {
                    return Err(FormatError::schema(
                        format!("alpha[{k}]"),
                        format!("entry {} is negative", alpha[k]),
                    ));
                }
                let sum: f64 = alpha.iter().sum();
                if (sum - 1.0).abs() > ALPHA_SUM_TOL {
                    return Err(FormatError::schema(
                        "alpha",
                        format!("entries sum to {sum}, expected 1"),
                    ));
                }
            }
        }
        for (c, members) in self.coalitions.iter().enumerate() {
            if members.is_empty() {
                return Err(FormatError::schema(format!("coalitions[{c}]"), "is empty"));
            }
            if let Some(k) = members.iter().position(|&i| i == 0 || i > n) {
                return Err(FormatError::schema(
                    format!("coalitions[{c}][{k}]"),
                    format!("station {} outside 1..={n}", members[k]),
                ));
            }
        }
        Ok(())
    }

    pub fn structure(&self) -> Result<CoalitionStructure, FormatError> {
        Ok(CoalitionStructure::new(
            self.coalitions
                .iter()
                .map(|c| c.iter().map(|i| i - 1).collect())
                .collect(),
        )?)
    }

    pub fn to_scenario(&self) -> Result<(Scenario, CoalitionStructure), FormatError> {
        self.check_schema()?;
        let a = self.price_intercepts.clone();
        let mu = self.sensitivities.clone();
        let d = self.demands.clone();
        let scenario = match (&self.nominal_profiles, &self.alpha) {
            (Some(rows), _) => {
                let m = DMatrix::from_fn(self.n_stations, self.horizon, |i, t| rows[i][t]);
                Scenario::new(a, self.price_slope, mu, d, m)?
            }
            (None, Some(alpha)) => Scenario::with_alpha(a, self.price_slope, mu, d, alpha)?,
            (None, None) => unreachable!("checked by check_schema"),
        };
        let structure = self.structure()?;
        structure.validate(scenario.n_stations())?;
        Ok((scenario, structure))
    }

    /// File form of a scenario with explicit nominal profiles.
    pub fn from_scenario(scenario: &Scenario, structure: &CoalitionStructure) -> Self {
        let xbar = scenario.nominal_profiles();
        ScenarioFile {
            schema_version: SCHEMA_VERSION,
            n_stations: scenario.n_stations(),
            horizon: scenario.horizon(),
            price_intercepts: scenario.price_intercepts().iter().copied().collect(),
            price_slope: scenario.price_slope(),
            sensitivities: scenario.sensitivities().iter().copied().collect(),
            demands: scenario.demands().iter().copied().collect(),
            nominal_profiles: Some(rows_of(xbar)),
            alpha: None,
            coalitions: one_based(structure),
        }
    }

    /// Hex SHA-256 of the compact JSON encoding.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("scenario file serializes");
        hex_digest(&bytes)
    }
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn one_based(structure: &CoalitionStructure) -> Vec<Vec<usize>> {
    structure
        .coalitions()
        .iter()
        .map(|c| c.iter().map(|i| i + 1).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub method: String,
    /// Row `i` is station `i+1`'s schedule.
    pub profile: Vec<Vec<f64>>,
    pub station_costs: Vec<f64>,
    pub kkt_residual: f64,
}

impl SolutionRecord {
    fn new(scenario: &Scenario, eq: &EquilibriumResult) -> Result<Self, Error> {
        Ok(SolutionRecord {
            method: eq.method.as_str().into(),
            profile: rows_of(eq.profile.charges()),
            station_costs: cost_breakdown(scenario, &eq.profile)?.per_station,
            kkt_residual: eq.kkt_residual,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub m_all: Option<f64>,
    pub m_coalition: Option<f64>,
    pub m_outside: Option<f64>,
    pub negative_cost_flag: bool,
}

impl From<&MetricsReport> for MetricsRecord {
    fn from(m: &MetricsReport) -> Self {
        MetricsRecord {
            m_all: m.m_all,
            m_coalition: m.m_coalition,
            m_outside: m.m_outside,
            negative_cost_flag: m.negative_cost_flag,
        }
    }
}

/// Output of a solve; self-contained through the embedded scenario.
#[derive(Debug, Clone, Serialize)]
pub struct ResultRecord {
    pub scenario: ScenarioFile,
    pub scenario_digest: String,
    /// 1-based members of every coalition.
    pub coalitions: Vec<Vec<usize>>,
    pub nash: SolutionRecord,
    pub cnash: SolutionRecord,
    /// The coalition group is the union of all coalitions.
    pub metrics: MetricsRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case_a: Option<CaseAReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case_b: Option<CaseBReport>,
    pub wall_time_seconds: f64,
}

impl ResultRecord {
    /// Solves both regimes for `file`, with `coalitions` (1-based) replacing
    /// the file's coalitions when given.
    pub fn solve(file: &ScenarioFile, coalitions: Option<Vec<Vec<usize>>>) -> Result<Self, FormatError> {
        let start = Instant::now();
        let mut file = file.clone();
        if let Some(c) = coalitions {
            file.coalitions = c;
        }
        let (scenario, structure) = file.to_scenario()?;
        let nash = nash_closed_form(&scenario)?;
        let cnash = c_nash_closed_form(&scenario, &structure)?;
        let metrics = metrics_with_structure(&scenario, &structure)?;
        let groups = Group::standard();
        let case_a = case_a_condition(&scenario, &structure, &groups).ok();
        let case_b = case_b_condition(&scenario, &structure, &groups).ok();
        Ok(ResultRecord {
            scenario_digest: file.digest(),
            coalitions: file.coalitions.clone(),
            nash: SolutionRecord::new(&scenario, &nash)?,
            cnash: SolutionRecord::new(&scenario, &cnash)?,
            metrics: MetricsRecord::from(&metrics),
            case_a,
            case_b,
            scenario: file,
            wall_time_seconds: start.elapsed().as_secs_f64(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    /// Largest relative deviation between this record and a fresh solve of its
    /// embedded scenario.
    pub fn replay_deviation(&self) -> Result<f64, FormatError> {
        let again = ResultRecord::solve(&self.scenario, None)?;
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1e-300);
        let mut worst: f64 = 0.0;
        let mut cmp = |a: &[f64], b: &[f64]| {
            for (x, y) in a.iter().zip(b) {
                if x != y {
                    worst = worst.max(rel(*x, *y));
                }
            }
        };
        for (old, new) in [(&self.nash, &again.nash), (&self.cnash, &again.cnash)] {
            for (r, s) in old.profile.iter().zip(&new.profile) {
                cmp(r, s);
            }
            cmp(&old.station_costs, &new.station_costs);
        }
        let m = |r: &MetricsRecord| {
            [r.m_all, r.m_coalition, r.m_outside].map(|v| v.unwrap_or(f64::NAN)).to_vec()
        };
        let (a, b) = (m(&self.metrics), m(&again.metrics));
        if a.iter().zip(&b).any(|(x, y)| x.is_nan() != y.is_nan()) {
            return Ok(f64::INFINITY);
        }
        let (a, b): (Vec<f64>, Vec<f64>) = a
            .into_iter()
            .zip(b)
            .filter(|(x, _)| !x.is_nan())
            .unzip();
        cmp(&a, &b);
        Ok(worst)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub coalition_size: usize,
    pub m_all: Option<f64>,
    pub m_coalition: Option<f64>,
    pub m_outside: Option<f64>,
    pub negative_cost_flag: bool,
    pub scenario_digest: String,
}

/// Evaluates every size of the sweep in parallel; rows keep the spec's order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, FormatError> {
    let built = spec.build()?;
    built
        .par_iter()
        .map(|(scenario, structure)| {
            let m = metrics_with_structure(scenario, structure)?;
            Ok(SweepRow {
                coalition_size: structure.coalition_members().len(),
                m_all: m.m_all,
                m_coalition: m.m_coalition,
                m_outside: m.m_outside,
                negative_cost_flag: m.negative_cost_flag,
                scenario_digest: ScenarioFile::from_scenario(scenario, structure).digest(),
            })
        })
        .collect()
}

pub const SWEEP_HEADER: &str = "coalition_size,m_all,m_coalition,m_outside,negative_cost_flag";

/// `x` with [`CSV_DIGITS`] significant digits, trailing zeros removed;
/// scientific notation outside `[1e-5, 1e12)`.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", CSV_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..CSV_DIGITS as i32).contains(&exp) {
        let decimals = (CSV_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".into(), format_sig)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.coalition_size,
            opt(r.m_all),
            opt(r.m_coalition),
            opt(r.m_outside),
            r.negative_cost_flag
        );
    }
    out
}

/// Sidecar written next to a sweep CSV.
#[derive(Debug, Clone, Serialize)]
pub struct SweepMeta {
    pub spec: SweepSpec,
    pub seed: u64,
    pub scenario_digests: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepMeta {
    pub fn new(spec: &SweepSpec, rows: &[SweepRow]) -> Self {
        SweepMeta {
            spec: spec.clone(),
            seed: spec.seed(),
            scenario_digests: rows.iter().map(|r| r.scenario_digest.clone()).collect(),
            rows: rows.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    /// Types of stations 1 and 2, e.g. `"HL"`.
    pub coalition: String,
    pub outsider: String,
    pub m_all: Option<f64>,
    pub m_coalition: Option<f64>,
    pub m_outside: Option<f64>,
    pub verdicts: [Preference; 3],
}

impl TableRow {
    pub fn labels(&self) -> [&'static str; 3] {
        self.verdicts.map(Preference::table_label)
    }
}

pub fn three_station_table() -> Result<Vec<TableRow>, FormatError> {
    three_station_assignments()
        .into_iter()
        .map(|types| {
            let (s, c) = build_three_station(types)?;
            let m = metrics_with_structure(&s, &c)?;
            let label = |ts: &[TypeLabel]| ts.iter().map(|t| t.as_str()).collect::<String>();
            Ok(TableRow {
                coalition: label(&types[..2]),
                outsider: label(&types[2..]),
                m_all: m.m_all,
                m_coalition: m.m_coalition,
                m_outside: m.m_outside,
                verdicts: m.preferences(),
            })
        })
        .collect()
}

pub fn render_table(rows: &[TableRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<10} {:<9} {:<17} {:<17} {:<17}",
        "coalition", "outsider", "M_[N]", "M_C", "M_[N]\\C"
    );
    for r in rows {
        let [a, b, c] = r.labels();
        let _ = writeln!(
            out,
            "{:<10} {:<9} {:<17} {:<17} {:<17}",
            r.coalition, r.outsider, a, b, c
        );
    }
    out
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("coalition,outsider,m_all,m_coalition,m_outside,verdict_all,verdict_coalition,verdict_outside\n");
    for r in rows {
        let [a, b, c] = r.labels();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{a},{b},{c}",
            r.coalition,
            r.outsider,
            opt(r.m_all),
            opt(r.m_coalition),
            opt(r.m_outside)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn minimal() -> &'static str {
        r#"{
            "schema_version": 1, "n_stations": 1, "horizon": 4,
            "price_intercepts": [0.5, 0.5, 0.5, 0.5], "price_slope": 1.0,
            "sensitivities": [1.0], "demands": [2.0],
            "alpha": [0.25, 0.25, 0.25, 0.25]
        }"#
    }

    #[test]
    fn single_station_solves_to_uniform() {
        let file = ScenarioFile::parse(minimal()).unwrap();
        let rec = ResultRecord::solve(&file, None).unwrap();
        for x in &rec.nash.profile[0] {
            assert!((x - 0.5).abs() <= 1e-12);
        }
        assert_eq!(rec.nash.profile, rec.cnash.profile);
        assert_eq!(rec.metrics.m_all, Some(1.0));
        assert!(rec.case_a.is_some() && rec.case_b.is_some());
        assert_eq!(rec.replay_deviation().unwrap(), 0.0);
    }

    #[test]
    fn alpha_sum_names_field() {
        let text = minimal().replace("[0.25, 0.25, 0.25, 0.25]", "[0.3, 0.2, 0.2, 0.2]");
        let err = ScenarioFile::parse(&text).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(matches!(&err, FormatError::Schema { path, .. } if path == "alpha"));
    }

    #[test]
    fn schema_errors_carry_paths() {
        let err = ScenarioFile::parse(&minimal().replace("\"price_slope\": 1.0", "\"price_slope\": [1.0]")).unwrap_err();
        assert!(matches!(&err, FormatError::Schema { path, .. } if path == "price_slope"), "{err}");
        let err = ScenarioFile::parse(&minimal().replace("\"demands\"", "\"demand\"")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = ScenarioFile::parse(&minimal().replace("[2.0]", "[2.0, 1.0]")).unwrap_err();
        assert!(matches!(&err, FormatError::Schema { path, .. } if path == "demands"));
        let with_both = minimal().replace("\"alpha\"", "\"nominal_profiles\": [[0.5,0.5,0.5,0.5]], \"alpha\"");
        assert_eq!(ScenarioFile::parse(&with_both).unwrap_err().exit_code(), 2);
        let bad_coalition = minimal().replace("\"alpha\"", "\"coalitions\": [[2]], \"alpha\"");
        let err = ScenarioFile::parse(&bad_coalition).unwrap_err();
        assert!(matches!(&err, FormatError::Schema { path, .. } if path == "coalitions[0][0]"));
    }

    #[test]
    fn model_errors_map_to_precondition() {
        let file = ScenarioFile::parse(&minimal().replace("\"price_slope\": 1.0", "\"price_slope\": -1.0")).unwrap();
        assert_eq!(file.to_scenario().unwrap_err().exit_code(), 3);
        assert_eq!(FormatError::Model(Error::Conditioning { matrix: "Q", min_eigenvalue: 0.0 }).exit_code(), 4);
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(0.99448123456789), "0.994481234568");
        assert_eq!(format_sig(-2.5), "-2.5");
        assert_eq!(format_sig(123456.0), "123456");
        assert_eq!(format_sig(1.5e-7), "1.5e-7");
        assert_eq!(format_sig(2.0e15), "2e15");
        assert_eq!(format_sig(f64::NAN), "nan");
        assert_eq!(format_sig(9.9999999999999), "10");
    }

    #[test]
    fn sweep_csv_layout() {
        let rows = vec![SweepRow {
            coalition_size: 1,
            m_all: Some(1.0),
            m_coalition: Some(1.0),
            m_outside: None,
            negative_cost_flag: false,
            scenario_digest: String::new(),
        }];
        assert_eq!(sweep_csv(&rows), format!("{SWEEP_HEADER}\n1,1,1,nan,false\n"));
    }

    #[test]
    fn digest_is_stable_and_sensitive() {
        let a = ScenarioFile::parse(minimal()).unwrap();
        let mut b = a.clone();
        assert_eq!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
        b.demands[0] = 2.5;
        assert_ne!(a.digest(), b.digest());
    }

    #[test]
    fn table_has_eight_rows() {
        let rows = three_station_table().unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!((rows[1].coalition.as_str(), rows[1].outsider.as_str()), ("HH", "L"));
        assert!(render_table(&rows).lines().count() == 9);
        assert!(table_csv(&rows).ends_with('\n'));
    }

    proptest! {
        #[test]
        fn file_round_trip(seed in any::<u64>()) {
            let (s, c) = crate::scenarios::random_instance(&Default::default(), seed).unwrap();
            let file = ScenarioFile::from_scenario(&s, &c);
            let again = ScenarioFile::parse(&file.to_json()).unwrap();
            prop_assert_eq!(&again, &file);
            let (s2, c2) = again.to_scenario().unwrap();
            prop_assert_eq!(s2, s);
            prop_assert_eq!(c2, c);
        }

        #[test]
        fn records_replay(seed in any::<u64>()) {
            let (s, c) = crate::scenarios::random_instance(&Default::default(), seed).unwrap();
            let rec = ResultRecord::solve(&ScenarioFile::from_scenario(&s, &c), None).unwrap();
            prop_assert!(rec.replay_deviation().unwrap() <= 1e-9);
        }
    }
}
