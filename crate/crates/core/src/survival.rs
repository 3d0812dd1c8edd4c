//! Survival analytics (placeholder).
