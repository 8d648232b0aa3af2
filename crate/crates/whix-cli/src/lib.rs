//! Input parsing and report serialization for the `whix` binary, exposed as
//! a small library so integration tests can exercise the exact formats the
//! tool reads and writes.

pub mod input;
pub mod report;
