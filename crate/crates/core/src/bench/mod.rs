//! Convergence studies driven by JSON configurations.

mod config;
mod expr;
mod study;
mod verify;

pub use config::{parse_config, preset, preset_names, resolve, Axis, ConfigFile, ProblemDef, RunConfig, SourceDef, TimeDef};
pub use expr::{parse_expr, BinOp, CompiledExpr, ExprAst, Func};
pub use study::{compute_rates, rerate_csv, run_study, CellFailure, Norm, RateTable, StudyReport, CSV_HEADER};
pub use verify::{verify_suite, Check};
