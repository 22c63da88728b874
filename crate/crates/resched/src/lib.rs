//! File formats, instance generation, SVG rendering and the batch runner
//! behind the `resched` command-line tool.

pub mod compare;
pub mod format;
pub mod gen;
pub mod report;
pub mod runner;
pub mod svg;

/// Exit codes of the `resched` binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 2;
    pub const ALGORITHM: i32 = 3;
    pub const VALIDATION: i32 = 4;
}
