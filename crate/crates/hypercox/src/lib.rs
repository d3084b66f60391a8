//! Text formats, JSON reports, the parallel resumable search driver and the
//! theorem reproduction run, on top of `hypercox-core`.

pub mod driver;
pub mod format;
pub mod json;
pub mod theorem;
