//! File formats, the shipped catalog and the command implementations behind
//! the `perfectforms` tool. The mathematics lives in `perfect-forms-core`.

pub mod catalog_data;
pub mod commands;
pub mod io;
pub mod plot;
