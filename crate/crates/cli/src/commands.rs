use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use evgame::analysis::{case_a_condition, case_b_condition, Group};
use evgame::format::{
    format_sig, parse_json, read_file, render_table, run_sweep, sweep_csv, table_csv,
    three_station_table, write_file, FormatError, ResultRecord, ScenarioFile, SweepMeta,
};
use evgame::scenarios::SweepSpec;
use log::info;

use crate::{Case, CheckArgs, Common, Format, SolveArgs, SweepArgs, TableArgs};

fn require_config(common: &Common) -> Result<&Path, FormatError> {
    common.config.as_deref().ok_or_else(|| FormatError::Schema {
        path: "--config".into(),
        message: "this command needs an input file".into(),
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), FormatError> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_scenario(common: &Common) -> Result<ScenarioFile, FormatError> {
    let mut file = ScenarioFile::parse(&read_file(require_config(common)?)?)?;
    if !common.coalitions.is_empty() {
        file.coalitions = common.coalitions.clone();
        file.check_schema()?;
    }
    Ok(file)
}

pub fn solve(args: &SolveArgs) -> Result<(), FormatError> {
    let file = load_scenario(&args.common)?;
    let record = ResultRecord::solve(&file, None)?;
    info!(
        "solved {} stations x {} slots in {:.3}s",
        file.n_stations, file.horizon, record.wall_time_seconds
    );
    let text = match args.common.format.unwrap_or(Format::Json) {
        Format::Json => record.to_json() + "\n",
        Format::Csv => solve_csv(&record),
    };
    emit(args.common.out.as_deref(), &text)
}

/// One line per station and regime: cost, then the schedule.
fn solve_csv(record: &ResultRecord) -> String {
    let horizon = record.scenario.horizon;
    let mut out = String::from("station,regime,cost");
    for t in 1..=horizon {
        let _ = write!(out, ",x_{t}");
    }
    out.push('\n');
    for (regime, sol) in [("nash", &record.nash), ("cnash", &record.cnash)] {
        for (i, (row, cost)) in sol.profile.iter().zip(&sol.station_costs).enumerate() {
            let _ = write!(out, "{},{regime},{}", i + 1, format_sig(*cost));
            for x in row {
                let _ = write!(out, ",{}", format_sig(*x));
            }
            out.push('\n');
        }
    }
    out
}

fn meta_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn sweep(args: &SweepArgs) -> Result<(), FormatError> {
    let common = &args.common;
    let spec: SweepSpec = parse_json(&read_file(require_config(common)?)?)?;
    let spec = spec.with_overrides(args.sizes.clone(), common.seed);
    let rows = run_sweep(&spec)?;
    let meta = SweepMeta::new(&spec, &rows);
    let text = match common.format.unwrap_or(Format::Csv) {
        Format::Csv => sweep_csv(&rows),
        Format::Json => serde_json::to_string_pretty(&meta).expect("meta serializes") + "\n",
    };
    emit(common.out.as_deref(), &text)?;
    if let Some(out) = &common.out {
        let sidecar = serde_json::to_string_pretty(&meta).expect("meta serializes") + "\n";
        write_file(&meta_path(out), &sidecar)?;
    }
    Ok(())
}

pub fn table(args: &TableArgs) -> Result<(), FormatError> {
    let rows = three_station_table()?;
    let json = serde_json::to_string_pretty(&rows).expect("table serializes") + "\n";
    match args.common.format {
        Some(Format::Json) => emit(args.common.out.as_deref(), &json),
        Some(Format::Csv) => emit(args.common.out.as_deref(), &table_csv(&rows)),
        None => {
            print!("{}", render_table(&rows));
            match &args.common.out {
                Some(path) => write_file(path, &json),
                None => Ok(()),
            }
        }
    }
}

fn parse_group(spec: &str) -> Result<Group, FormatError> {
    match spec {
        "all" => Ok(Group::All),
        "coalition" => Ok(Group::Coalition),
        "outside" => Ok(Group::Outside),
        other => other
            .split(',')
            .map(|p| match p.trim().parse::<usize>() {
                Ok(i) if i > 0 => Ok(i - 1),
                _ => Err(FormatError::Schema {
                    path: "--group".into(),
                    message: format!("`{other}` is not all, coalition, outside or 1-based indices"),
                }),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Group::Stations),
    }
}

pub fn check(args: &CheckArgs) -> Result<(), FormatError> {
    let file = load_scenario(&args.common)?;
    let (scenario, structure) = file.to_scenario()?;
    let groups = if args.groups.is_empty() {
        Group::standard()
    } else {
        args.groups.iter().map(|g| parse_group(g)).collect::<Result<_, _>>()?
    };
    let json = match args.case {
        Case::A => serde_json::to_value(case_a_condition(&scenario, &structure, &groups)?),
        Case::B => serde_json::to_value(case_b_condition(&scenario, &structure, &groups)?),
    }
    .expect("report serializes");
    let wrapped = serde_json::json!({
        "case": match args.case { Case::A => "a", Case::B => "b" },
        "scenario_digest": file.digest(),
        "coalitions": file.coalitions,
        "report": json,
    });
    emit(
        args.common.out.as_deref(),
        &(serde_json::to_string_pretty(&wrapped).expect("report serializes") + "\n"),
    )
}
