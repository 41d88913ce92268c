//! Flat-file persistence: the per-run results CSV, the per-cell stats CSV,
//! and rendered comparison tables.
//!
//! All emission goes through plain `Display` formatting of the stored
//! values, so identical in-memory results always serialize to identical
//! bytes.

use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use super::{stats::summarize, RunOutcome, StatsRow};
use crate::error::{Error, Result};
use crate::testbed;

/// Header of the per-run results CSV.
pub const RESULTS_HEADER: &str =
    "optimizer,function,dimension,budget,seed,final_value,evaluations_used,status";

/// Header of the per-cell statistics CSV.
pub const STATS_HEADER: &str =
    "function,budget,f_min,optimizer,mean,median,q1,q3,whisker_lo,whisker_hi,n_outliers,n_runs";

const RESULT_COLUMNS: [&str; 8] = [
    "optimizer",
    "function",
    "dimension",
    "budget",
    "seed",
    "final_value",
    "evaluations_used",
    "status",
];

/// Writes one line per run; failed runs carry an empty `final_value` and
/// status `failed`.
pub fn write_results_csv<W: Write>(out: &mut W, runs: &[RunOutcome]) -> Result<()> {
    writeln!(out, "{RESULTS_HEADER}")?;
    for r in runs {
        let final_value = r.final_value().map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.optimizer,
            r.function,
            r.dimension,
            r.budget,
            r.seed,
            final_value,
            r.evaluations_used(),
            r.status_str()
        )?;
    }
    Ok(())
}

/// Writes one line per statistics row, in input order.
pub fn write_stats_csv<W: Write>(out: &mut W, rows: &[StatsRow]) -> Result<()> {
    writeln!(out, "{STATS_HEADER}")?;
    for r in rows {
        let s = &r.stats;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.function,
            r.budget,
            r.f_min,
            r.optimizer,
            s.mean,
            s.median,
            s.q1,
            s.q3,
            s.whisker_lo,
            s.whisker_hi,
            s.n_outliers,
            s.n_runs
        )?;
    }
    Ok(())
}

/// One successful run read back from a results CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalResult {
    pub optimizer: String,
    pub function: String,
    pub budget: usize,
    pub final_value: f64,
}

/// Reads results produced by this harness or any tool that matches the
/// results CSV schema; rows whose status is not `ok` are skipped.
pub fn read_results_csv<R: Read>(reader: R) -> Result<Vec<ExternalResult>> {
    let mut lines = BufReader::new(reader).lines();
    let header = match lines.next() {
        Some(line) => line?,
        None => {
            return Err(Error::SchemaMismatch {
                missing: RESULT_COLUMNS.iter().map(|c| c.to_string()).collect(),
            })
        }
    };
    let names: Vec<&str> = header
        .trim_end_matches('\r')
        .split(',')
        .map(str::trim)
        .collect();
    let missing: Vec<String> = RESULT_COLUMNS
        .iter()
        .filter(|c| !names.contains(c))
        .map(|c| c.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::SchemaMismatch { missing });
    }
    let col = |name: &str| {
        names
            .iter()
            .position(|n| *n == name)
            .expect("checked above")
    };
    let (i_opt, i_fun, i_budget, i_value, i_status) = (
        col("optimizer"),
        col("function"),
        col("budget"),
        col("final_value"),
        col("status"),
    );

    let mut out = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        let lineno = idx + 2;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != names.len() {
            return Err(Error::ParseError {
                line: lineno,
                message: format!("expected {} fields, got {}", names.len(), fields.len()),
            });
        }
        if fields[i_status] != "ok" {
            continue;
        }
        let budget: usize = fields[i_budget].parse().map_err(|e| Error::ParseError {
            line: lineno,
            message: format!("budget {:?}: {e}", fields[i_budget]),
        })?;
        let final_value: f64 = fields[i_value].parse().map_err(|e| Error::ParseError {
            line: lineno,
            message: format!("final_value {:?}: {e}", fields[i_value]),
        })?;
        out.push(ExternalResult {
            optimizer: fields[i_opt].to_string(),
            function: fields[i_fun].to_string(),
            budget,
            final_value,
        });
    }
    Ok(out)
}

/// [`read_results_csv`] on a file path.
pub fn import_external_results(path: &Path) -> Result<Vec<ExternalResult>> {
    read_results_csv(File::open(path)?)
}

/// Groups imported results by (optimizer, function, budget), in first-seen
/// order, and summarizes each group. The optimizer label gains an
/// `(external)` marker so merged tables show where each row came from.
pub fn external_stats(results: &[ExternalResult]) -> Result<Vec<StatsRow>> {
    let mut groups: Vec<(&ExternalResult, Vec<f64>)> = Vec::new();
    for r in results {
        match groups.iter_mut().find(|(k, _)| {
            k.optimizer == r.optimizer && k.function == r.function && k.budget == r.budget
        }) {
            Some((_, values)) => values.push(r.final_value),
            None => groups.push((r, vec![r.final_value])),
        }
    }
    groups
        .into_iter()
        .map(|(key, values)| {
            let f_min = testbed::spec_for(&key.function, None).map_or(f64::NAN, |s| s.f_min());
            Ok(StatsRow {
                function: key.function.clone(),
                budget: key.budget,
                f_min,
                optimizer: format!("{} (external)", key.optimizer),
                stats: summarize(&values)?,
            })
        })
        .collect()
}

/// Output format of [`emit_table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
    Markdown,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "markdown" | "md" => Ok(Self::Markdown),
            other => Err(Error::InvalidPlan(format!(
                "unknown table format {other:?}, expected csv, json, or markdown"
            ))),
        }
    }
}

/// Renders statistics rows as `csv`, `json`, or a `markdown` table with the
/// classic comparison columns (function, target minimum, optimizer, mean,
/// evaluation budget).
pub fn emit_table(rows: &[StatsRow], format: TableFormat) -> String {
    match format {
        TableFormat::Csv => {
            let mut buf = Vec::new();
            write_stats_csv(&mut buf, rows).expect("in-memory write cannot fail");
            String::from_utf8(buf).expect("csv is utf-8")
        }
        TableFormat::Json => {
            let mut text = serde_json::to_string_pretty(rows).expect("stats serialize");
            text.push('\n');
            text
        }
        TableFormat::Markdown => {
            let mut text = String::from("| function | f_min | optimizer | mean | evaluations |\n");
            text.push_str("| --- | --- | --- | --- | --- |\n");
            for r in rows {
                text.push_str(&format!(
                    "| {} | {} | {} | {} | {} |\n",
                    r.function, r.f_min, r.optimizer, r.stats.mean, r.budget
                ));
            }
            text
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::RunRecord;
    use crate::harness::SummaryStats;

    fn ok_outcome(value: f64, seed: u64) -> RunOutcome {
        RunOutcome {
            optimizer: "hopso".into(),
            function: "sphere".into(),
            dimension: 5,
            budget: 1000,
            seed,
            outcome: Ok(RunRecord {
                optimizer: "hopso".into(),
                objective: "sphere".into(),
                dimension: 5,
                budget: 1000,
                seed,
                config: "{}".into(),
                trace: vec![(20, 1.0), (1000, value)],
                final_position: vec![0.0; 5],
                final_value: value,
            }),
        }
    }

    fn failed_outcome() -> RunOutcome {
        RunOutcome {
            optimizer: "pso".into(),
            function: "sphere".into(),
            dimension: 5,
            budget: 10,
            seed: 3,
            outcome: Err("budget 10 too small for population 20".into()),
        }
    }

    fn stats_row() -> StatsRow {
        StatsRow {
            function: "sphere".into(),
            budget: 1000,
            f_min: 0.0,
            optimizer: "hopso".into(),
            stats: SummaryStats {
                mean: 0.5,
                median: 0.5,
                q1: 0.25,
                q3: 0.75,
                whisker_lo: 0.1,
                whisker_hi: 0.9,
                n_outliers: 0,
                n_runs: 4,
            },
        }
    }

    #[test]
    fn results_csv_round_trips_ok_rows() {
        let runs = vec![ok_outcome(0.125, 1), failed_outcome(), ok_outcome(2.5, 2)];
        let mut buf = Vec::new();
        write_results_csv(&mut buf, &runs).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(RESULTS_HEADER));
        assert!(text.contains("pso,sphere,5,10,3,,0,failed"));

        let imported = read_results_csv(buf.as_slice()).unwrap();
        assert_eq!(imported.len(), 2);
        assert_eq!(imported[0].final_value, 0.125);
        assert_eq!(imported[1].final_value, 2.5);
        assert_eq!(imported[0].budget, 1000);
        assert_eq!(imported[0].optimizer, "hopso");
    }

    #[test]
    fn header_only_file_imports_as_empty() {
        let imported = read_results_csv(format!("{RESULTS_HEADER}\n").as_bytes()).unwrap();
        assert!(imported.is_empty());
    }

    #[test]
    fn missing_columns_are_reported() {
        let err = read_results_csv("optimizer,function,budget,status\n".as_bytes()).unwrap_err();
        match err {
            Error::SchemaMismatch { missing } => {
                assert_eq!(
                    missing,
                    vec!["dimension", "seed", "final_value", "evaluations_used"]
                );
            }
            other => panic!("expected SchemaMismatch, got {other:?}"),
        }
    }

    #[test]
    fn malformed_numbers_carry_line_numbers() {
        let text = format!("{RESULTS_HEADER}\nhopso,sphere,5,1000,1,abc,1000,ok\n");
        match read_results_csv(text.as_bytes()).unwrap_err() {
            Error::ParseError { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("final_value"));
            }
            other => panic!("expected ParseError, got {other:?}"),
        }
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let text = format!("{RESULTS_HEADER}\nhopso,sphere,5,1000\n");
        assert!(matches!(
            read_results_csv(text.as_bytes()),
            Err(Error::ParseError { line: 2, .. })
        ));
    }

    #[test]
    fn external_stats_group_and_mark_rows() {
        let results = vec![
            ExternalResult {
                optimizer: "cobyla".into(),
                function: "sphere".into(),
                budget: 1000,
                final_value: 1.0,
            },
            ExternalResult {
                optimizer: "cobyla".into(),
                function: "sphere".into(),
                budget: 1000,
                final_value: 3.0,
            },
            ExternalResult {
                optimizer: "cobyla".into(),
                function: "levy".into(),
                budget: 10_000,
                final_value: 2.0,
            },
        ];
        let rows = external_stats(&results).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].optimizer, "cobyla (external)");
        assert_eq!(rows[0].stats.mean, 2.0);
        assert_eq!(rows[0].stats.n_runs, 2);
        assert_eq!(rows[1].function, "levy");
        assert_eq!(rows[1].f_min, 0.0);
    }

    #[test]
    fn csv_table_is_header_plus_rows() {
        let text = emit_table(&[stats_row()], TableFormat::Csv);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], STATS_HEADER);
        assert_eq!(
            lines[1],
            "sphere,1000,0,hopso,0.5,0.5,0.25,0.75,0.1,0.9,0,4"
        );
    }

    #[test]
    fn markdown_table_has_the_comparison_columns() {
        let text = emit_table(&[stats_row()], TableFormat::Markdown);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "| function | f_min | optimizer | mean | evaluations |"
        );
        assert_eq!(lines[2], "| sphere | 0 | hopso | 0.5 | 1000 |");
    }

    #[test]
    fn json_table_round_trips() {
        let rows = vec![stats_row()];
        let text = emit_table(&rows, TableFormat::Json);
        let back: Vec<StatsRow> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn format_names_parse() {
        assert_eq!("csv".parse::<TableFormat>().unwrap(), TableFormat::Csv);
        assert_eq!("json".parse::<TableFormat>().unwrap(), TableFormat::Json);
        assert_eq!("md".parse::<TableFormat>().unwrap(), TableFormat::Markdown);
        assert!("yaml".parse::<TableFormat>().is_err());
    }
}
