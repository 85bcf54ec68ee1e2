//! File formats, report builders and the command-line front end for the
//! `infocausality` toolkit.

pub mod behavior_file;
pub mod config;
pub mod emit;
pub mod reports;
pub mod reproduce;
pub mod sweep;

/// Published layout of every JSON report.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");
