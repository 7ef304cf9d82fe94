use thiserror::Error;

/// Errors surfaced by the state, decomposition, and optimization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The amplitude vector has (numerically) zero norm and cannot be normalized.
    #[error("state has zero norm (sum of squared amplitudes <= 1e-30)")]
    ZeroState,

    /// A measurement outcome annihilates the state; the caller decides handling.
    #[error("measurement outcome has vanishing probability {probability:.3e}")]
    NullOutcome { probability: f64 },

    /// Polynomial invariants are only evaluated up to degree 6.
    #[error("polynomial invariant degree {n} exceeds the supported maximum 6")]
    DegreeTooLarge { n: usize },

    /// The two permutations of a polynomial invariant must have equal degree.
    #[error("permutation degrees differ: sigma has {sigma}, tau has {tau}")]
    DegreeMismatch { sigma: usize, tau: usize },

    /// Matrix fails the unitarity check.
    #[error("matrix is not unitary within 1e-12")]
    NotUnitary,

    /// Kraus pair fails the completeness relation.
    #[error("Kraus pair does not satisfy a1'a1 + a2'a2 = I within 1e-10")]
    IncompleteKraus,

    /// The invariant-to-decomposition inversion is singular for this input
    /// (degenerate family: the generic coefficient formulas go indeterminate).
    #[error("inversion from invariants is singular for this input")]
    SingularInversion,

    /// The invariants do not correspond to any physical state.
    #[error("invariants are non-physical (discriminant {upsilon:.3e} < -1e-9)")]
    NonPhysical { upsilon: f64 },

    /// The measurement gauge factor vanished for an outcome that still
    /// carries probability; the coordinate-space update is undefined there.
    #[error("measurement gauge factor vanished for outcome {outcome}")]
    DegenerateGamma { outcome: u8 },

    /// No optimizer start satisfied the stopping rule.
    #[error("optimizer failed to converge from any start")]
    NoConvergence,

    /// A parameter is outside its documented range.
    #[error("parameter `{name}` is out of range")]
    InvalidParameter { name: &'static str },

    /// Projector ranks must be 1 or 2 on each qubit.
    #[error("projector rank must be 1 or 2")]
    InvalidProjectorRank,
}

pub type Result<T> = std::result::Result<T, Error>;
