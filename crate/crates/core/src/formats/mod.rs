//! Instance documents, DIMACS readers and command reports.

mod dimacs;
mod document;
mod report;

pub use dimacs::{parse_ae_dimacs, parse_dimacs, write_ae_dimacs, write_dimacs};
pub use document::{
    allocation_to_value, parse_instance, parse_instance_value, parse_rational_str,
    rational_to_value, InstanceDocument,
};
pub use report::{InputDigest, Report, Stats, Verdict};
