//! Writing traces and summaries.

use std::io::Write;

use serde::Serialize;

use crate::config::Format;
use crate::run::{CellOutput, ResultRecord};
use crate::BenchError;

/// One line of the trace file. `gap` is empty when no gap is known.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub experiment_id: String,
    pub phase: usize,
    pub global_iter: usize,
    pub value: f64,
    pub gap: Option<f64>,
    pub oracle_calls: u64,
}

pub fn trace_rows(cells: &[CellOutput]) -> Vec<TraceRow> {
    cells
        .iter()
        .flat_map(|c| {
            c.trace.iter().map(|r| TraceRow {
                experiment_id: c.record.experiment_id.clone(),
                phase: r.phase,
                global_iter: r.global_iter,
                value: r.objective_value,
                gap: r.gap_certificate,
                oracle_calls: r.oracle_calls,
            })
        })
        .collect()
}

#[derive(Serialize)]
struct JsonOutput<'a> {
    results: Vec<&'a ResultRecord>,
    trace: Vec<TraceRow>,
}

/// Writes the traces of all cells, in cell order. CSV holds only trace rows
/// and is deterministic; JSON also carries the per-cell results.
pub fn write_results<W: Write>(
    cells: &[CellOutput],
    format: Format,
    out: W,
) -> Result<(), BenchError> {
    let err = |e: &dyn std::fmt::Display| BenchError::Output(e.to_string());
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in trace_rows(cells) {
                w.serialize(row).map_err(|e| err(&e))?;
            }
            w.flush().map_err(|e| err(&e))
        }
        Format::Json => {
            let doc = JsonOutput {
                results: cells.iter().map(|c| &c.record).collect(),
                trace: trace_rows(cells),
            };
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| err(&e))?;
            writeln!(out).map_err(|e| err(&e))
        }
    }
}

/// Writes the per-cell results as a JSON array.
pub fn write_summary<W: Write>(cells: &[CellOutput], mut out: W) -> Result<(), BenchError> {
    let records: Vec<&ResultRecord> = cells.iter().map(|c| &c.record).collect();
    serde_json::to_writer_pretty(&mut out, &records)
        .map_err(|e| BenchError::Output(e.to_string()))?;
    writeln!(out).map_err(|e| BenchError::Output(e.to_string()))
}

/// Human-readable table, one line per cell.
pub fn summary_table(cells: &[CellOutput]) -> String {
    let width = cells
        .iter()
        .map(|c| c.record.experiment_id.len())
        .max()
        .unwrap_or(0)
        .max(10);
    let mut s = format!(
        "{:<width$}  {:>12}  {:>12}  {:>10}  {}\n",
        "experiment", "measured", "bound", "true gap", "status"
    );
    for c in cells {
        let r = &c.record;
        let bound = r.bound.map_or("-".to_string(), |b| b.to_string());
        let gap = r.true_gap.map_or("-".to_string(), |g| format!("{g:.3e}"));
        let status = match (&r.error, r.bound_satisfied) {
            (Some(e), _) => format!("ERROR {e}"),
            (None, true) => "ok".to_string(),
            (None, false) => format!("VIOLATED {}", r.violations.join("; ")),
        };
        s.push_str(&format!(
            "{:<width$}  {:>12}  {:>12}  {:>10}  {}\n",
            r.experiment_id, r.measured, bound, gap, status
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{Domain, ExperimentConfig};
    use crate::run::run_experiment;

    fn cell() -> CellOutput {
        run_experiment(&ExperimentConfig {
            id: Some("t".into()),
            domain: Domain::Augment,
            algo: "bit-scaling".into(),
            instance: "cube-powers:n=4".into(),
            epsilon: None,
            seed: 0,
            k: None,
            mu: None,
            policy: None,
        })
        .unwrap()
    }

    #[test]
    fn csv_has_expected_header_and_rows() {
        let c = cell();
        let mut buf = Vec::new();
        write_results(std::slice::from_ref(&c), Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("experiment_id,phase,global_iter,value,gap,oracle_calls")
        );
        assert_eq!(lines.count(), c.trace.len());
    }

    #[test]
    fn json_round_trips() {
        let c = cell();
        let mut buf = Vec::new();
        write_results(std::slice::from_ref(&c), Format::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["results"][0]["experiment_id"], "t");
        assert_eq!(v["trace"].as_array().unwrap().len(), c.trace.len());
        assert!(summary_table(&[c]).contains("ok"));
    }
}
