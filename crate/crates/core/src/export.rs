//! CSV writers for tables meant for external plotting.

use std::io::Write;

use serde::Serialize;

use crate::error::{DebateError, Result};
use crate::montecarlo::SimulationResult;
use crate::payoff::PayoffMatrix;

fn csv_error(e: csv::Error) -> DebateError {
    DebateError::Resolution(format!("csv output failed: {e}"))
}

/// One header row from the field names, then one row per record.
pub fn write_rows<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()
        .map_err(|e| DebateError::Resolution(format!("csv output failed: {e}")))
}

/// The 2×2 matrix, rows indexed by the incumbent's announcement and columns by
/// the challenger's; each cell reads `incumbent;challenger`.
pub fn write_payoff_matrix<W: Write>(out: W, m: &PayoffMatrix) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let cell = |c: &crate::payoff::PayoffCell| format!("{};{}", c.incumbent, c.challenger);
    w.write_record(["incumbent", "challenger P", "challenger NP"])
        .map_err(csv_error)?;
    w.write_record(["P", &cell(&m.both_p), &cell(&m.incumbent_p_challenger_np)])
        .map_err(csv_error)?;
    w.write_record(["NP", &cell(&m.incumbent_np_challenger_p), &cell(&m.both_np)])
        .map_err(csv_error)?;
    w.flush()
        .map_err(|e| DebateError::Resolution(format!("csv output failed: {e}")))
}

#[derive(Serialize)]
struct CountRow {
    scenario: String,
    q_c: Option<f64>,
    n: u64,
    seed: u64,
    challenger_wins: u64,
    debates_won: u64,
    estimate: f64,
    stderr: f64,
}

/// Raw simulation counts, one row per run.
pub fn write_counts<W: Write>(out: W, runs: &[SimulationResult]) -> Result<()> {
    use crate::montecarlo::Scenario;
    let rows: Vec<CountRow> = runs
        .iter()
        .map(|r| {
            let (scenario, q_c) = match r.scenario {
                Scenario::DebateExAnte => ("debate-ex-ante", None),
                Scenario::DebateConditional(q) => ("debate-conditional", Some(q)),
                Scenario::NoDebate => ("no-debate", None),
            };
            CountRow {
                scenario: scenario.to_string(),
                q_c,
                n: r.n,
                seed: r.seed,
                challenger_wins: r.challenger_wins,
                debates_won: r.debates_won,
                estimate: r.estimate,
                stderr: r.stderr,
            }
        })
        .collect();
    write_rows(out, &rows)
}
