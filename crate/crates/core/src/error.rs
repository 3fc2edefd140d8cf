use thiserror::Error;

/// Errors shared across the diagram, order, dynamics, and measure machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A queried vertex, or one of its required parents, lies outside the
    /// constructed depth/window of the diagram.
    #[error("vertex (index {index}, level {level}) or a required parent is outside the constructed region")]
    OutOfWindow { index: i64, level: u32 },

    /// Path enumeration would exceed the configured cap.
    #[error("path enumeration cap exceeded: {count} paths, cap {cap}")]
    CapExceeded { count: String, cap: u64 },

    /// The greedy ray-hugging construction left its distance band.
    #[error("guide path for r={r} drifted from its ray at level {level} (distance {distance})")]
    GreedyDrift { r: String, level: u32, distance: f64 },

    /// Two forced labels collided on one fiber (or on one edge).
    #[error("label conflict on fiber of (index {index}, level {level})")]
    Consistency { index: i64, level: u32 },

    /// A required guide path was not constructed.
    #[error("no guide path constructed for dyadic r={r}")]
    MissingGuide { r: String },

    /// The map G of the barrier construction repeated a value.
    #[error("barrier map G is not injective: value {value} repeats")]
    Injectivity { value: u32 },

    /// A successor chain revisited a path (impossible for a valid order).
    #[error("successor chain revisited a path at step {step}")]
    Cycle { step: u64 },

    /// A band feasibility level came out empty (impossible for valid thresholds).
    #[error("band subdiagram has an empty feasible set at level {level}")]
    EmptyLevel { level: u32 },

    /// Malformed input (descriptors, rationals, parameter domains).
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
