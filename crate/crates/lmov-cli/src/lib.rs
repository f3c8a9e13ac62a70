//! IO companion to `lmov-core`: verification suites with structured reports,
//! and the table/report serializers shared by the `lmov` binary.

pub mod format;
pub mod verify;
