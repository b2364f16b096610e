//! Detection of references registered in scholarly metadata but absent from
//! the published document, plus duplicate-reference analytics over bulk
//! metadata snapshots.

pub mod detectors;
pub mod doi;
pub mod dupmetrics;
pub mod exec;
pub mod extract;
pub mod fsutil;
pub mod ingest;
pub mod matchcore;
pub mod report;
pub mod synth;
