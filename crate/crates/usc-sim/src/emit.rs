//! Table emission (placeholder).
