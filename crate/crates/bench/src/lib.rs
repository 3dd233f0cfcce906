//! Benchmark harness: runs restart experiments, audits them against the
//! closed-form bounds, and writes convergence traces.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod run;
pub mod task;

use thiserror::Error;

pub use config::{Domain, ExperimentConfig, Format, InstanceSpec, MatrixFile};
pub use output::{summary_table, trace_rows, write_results, write_summary, TraceRow};
pub use run::{run_experiment, run_matrix, CellOutput, MatrixOutcome, ResultRecord};
pub use task::Task;

#[derive(Debug, Error)]
pub enum BenchError {
    /// A bad configuration: unknown ids, bad parameters, unreadable inputs.
    #[error("invalid {field}: {message}")]
    Usage {
        field: &'static str,
        message: String,
    },
    #[error("writing output: {0}")]
    Output(String),
}

impl BenchError {
    pub fn usage(field: &'static str, message: impl Into<String>) -> Self {
        BenchError::Usage {
            field,
            message: message.into(),
        }
    }

    pub fn is_usage(&self) -> bool {
        matches!(self, BenchError::Usage { .. })
    }
}
