//! Validation suite (placeholder).
