//! Acceptance checks for the stereohedra library; see `tests/acceptance.rs`.
