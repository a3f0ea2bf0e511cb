//! Library surface of the `rho` CLI: the output record and the verify,
//! bench and selftest suites, shared with the integration tests.

pub mod bench;
pub mod output;
pub mod selftest;
pub mod verify;
