//! Instance generation, file formats and the solve/replay/bench drivers
//! behind the command-line tool.

pub mod bench;
pub mod format;
pub mod generate;
pub mod replay;
pub mod solve;
