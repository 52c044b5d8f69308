//! Run configuration (placeholder).
