//! Fixture files, named verification suites and their reports.

pub mod spec;
pub mod suite;

pub use spec::{
    build, export, load_spec, parse_spec, read_spec, save_spec, to_canonical_string, FixtureSpec,
};
pub use suite::{run_suite, CheckEntry, Report, Status, SUITES};
