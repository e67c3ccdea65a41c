//! Discrete-time quantum-walk search on `L × L` lattices with labeled marked
//! nodes.
//!
//! The crate simulates the coined walk `U' = S·(G ⊗ I)·R` on the torus and
//! the open grid, with an optional label register that is either static
//! (layers decoupled) or dynamic (walker hops between neighbouring layers).
//! On top of the simulator sit optimal-time search runs with scaling fits
//! ([`search`], [`fit`]) and time-windowed tracking of a moving particle
//! ([`tracker`]). The [`circuit`] module compiles the same walk to gates and
//! exports it as OpenQASM 2.0.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

pub mod circuit;
pub mod error;
pub mod fit;
pub mod hilbert;
pub mod operators;
pub mod scalar;
pub mod search;
pub mod tracker;

pub use error::{Error, Result};
pub use hilbert::{
    decode, index_of, position_marginal, uniform_initial_state, Boundary, Direction, LabeledMarks,
    Labeling, LatticeConfig, Mark,
};
pub use operators::{
    apply_coin, apply_oracle, apply_shift, apply_shift_dynamic, apply_shift_open,
    apply_shift_periodic, dense_operator, grover_coin, step, DenseKind, OracleSpec,
};
pub use scalar::Real;

/// Double-precision state vector.
pub type StateVector = hilbert::State<f64>;
/// Single-precision state vector.
pub type StateVectorF32 = hilbert::State<f32>;
/// Double-precision position marginal.
pub type Marginal = hilbert::Marginal<f64>;
pub type Complex64 = num_complex::Complex<f64>;
/// Dense complex matrix used by the verification back end.
pub type DenseMatrix = ndarray::Array2<Complex64>;
pub type RunRecord = search::SearchRecord<f64>;
pub type ScalePoint = search::ScalePoint<f64>;
pub type FitResult = fit::InverseLogFit<f64>;
pub type EpochEstimate = tracker::Estimate<f64>;
