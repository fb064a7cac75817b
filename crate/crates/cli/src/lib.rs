//! Command-line front end: system files, embedded reference data, the
//! memoized pipeline, JSON reports, SVG drawings and reproduction checks.

pub mod dto;
pub mod fixtures;
pub mod pipeline;
pub mod report;
pub mod svg;
pub mod system_file;
pub mod verify;
