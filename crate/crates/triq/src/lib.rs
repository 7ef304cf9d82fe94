//! Invariants, canonical decompositions, and entanglement monotones of
//! three-qubit pure states.
//!
//! The crate provides:
//!
//! * [`PureState3`]: normalized three-qubit states with local unitaries,
//!   two-outcome measurements, and reduced densities ([`state`]).
//! * Local-unitary invariants `I1..I6` and the monotones built from them
//!   ([`invariants`]).
//! * The diagonalization decomposition with closed-form maps to and from
//!   the invariants and measurement propagation in coordinate space
//!   ([`dd`]).
//! * The maximization decomposition via multi-start alternating rank-1
//!   optimization ([`md`]).
//! * Transformation-probability bounds, state classification, and a
//!   Monte Carlo monotonicity verifier ([`locc`]).
//! * Seeded, platform-stable random sampling ([`sampling`]).
//!
//! The numeric core is generic over the scalar type through [`Scalar`];
//! concrete aliases for `f64` and `f32` live at the crate root.

pub mod dd;
pub mod error;
pub mod invariants;
pub mod locc;
pub mod mat2;
pub mod md;
pub mod sampling;
pub mod scalar;
pub mod state;

pub use error::{Error, Result};
pub use invariants::{InvariantVector, MonotoneVector, Permutation};
pub use mat2::Mat2;
pub use sampling::SeededRng;
pub use scalar::Scalar;
pub use state::{DensityMatrix2, KrausPair, LocalUnitary, OutcomeIndex, PureState3, QubitLabel};

/// Double-precision aliases; the tolerances quoted in the documentation
/// assume these.
pub type State64 = PureState3<f64>;
pub type Invariants64 = InvariantVector<f64>;
pub type Monotones64 = MonotoneVector<f64>;
pub type DDForm64 = dd::DDForm<f64>;
pub type MDForm64 = md::MDForm<f64>;

/// Single-precision aliases for quick, low-accuracy work.
pub type State32 = PureState3<f32>;
pub type Invariants32 = InvariantVector<f32>;
pub type Monotones32 = MonotoneVector<f32>;
pub type DDForm32 = dd::DDForm<f32>;
pub type MDForm32 = md::MDForm<f32>;
