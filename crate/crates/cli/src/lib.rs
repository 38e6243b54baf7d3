//! IO, file formats and the worker-thread driver around `crosscap-core`.

pub mod driver;
pub mod json;
pub mod mapio;

pub use driver::{parallel_brute_force, run_verification, worker_default};
