//! Library half of the verification harness: report shapes and the
//! pipelines the `g2jac` binary drives.

pub mod pipelines;
pub mod report;
