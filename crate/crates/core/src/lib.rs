//! Rule-based extraction of gene/miRNA expression and disease associations
//! from dependency-parsed abstracts.
//!
//! The pipeline reads CoNLL-U parses ([`corpus`]), applies dependency
//! patterns ([`patterns`]) to trigger-filtered sentences ([`lexicons`]),
//! types the captured phrases using PubTator and regex mentions
//! ([`entities`]) and assembles records ([`extraction`]). [`eval`] scores
//! records against a ground-truth table.

pub mod corpus;
pub mod entities;
pub mod eval;
pub mod extraction;
pub mod lexicons;
pub mod patterns;
pub mod resources;

/// Evaluation report in double precision.
pub type EvalReport = eval::Report<f64>;
/// Evaluation report in single precision.
pub type EvalReportF32 = eval::Report<f32>;
