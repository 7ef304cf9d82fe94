//! Three-qubit pure states and local operations.
//!
//! Amplitudes are stored flat as `t[4*i + 2*j + k]` for basis label
//! `|i j k>`, with qubit A the most significant index. All operations are
//! pure functions; values are cheap to copy and safe to share.

use crate::error::{Error, Result};
use crate::mat2::Mat2;
use crate::scalar::{creal, czero, real, C, Scalar};

/// One of the three qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QubitLabel {
    A,
    B,
    C,
}

impl QubitLabel {
    pub const ALL: [QubitLabel; 3] = [QubitLabel::A, QubitLabel::B, QubitLabel::C];

    /// Position of this qubit in the flat index (A = 0, B = 1, C = 2).
    #[inline]
    pub fn axis(self) -> usize {
        match self {
            QubitLabel::A => 0,
            QubitLabel::B => 1,
            QubitLabel::C => 2,
        }
    }
}

/// Normalized pure state of three qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState3<T: Scalar> {
    amp: [C<T>; 8],
}

#[inline]
pub(crate) fn flat(i: usize, j: usize, k: usize) -> usize {
    4 * i + 2 * j + k
}

impl<T: Scalar> PureState3<T> {
    /// Wraps raw amplitudes without normalizing.
    pub fn from_amplitudes(amp: [C<T>; 8]) -> Self {
        Self { amp }
    }

    pub fn amplitudes(&self) -> &[C<T>; 8] {
        &self.amp
    }

    #[inline]
    pub fn amp(&self, i: usize, j: usize, k: usize) -> C<T> {
        self.amp[flat(i, j, k)]
    }

    /// Computational basis state `|i j k>`.
    pub fn basis(i: usize, j: usize, k: usize) -> Self {
        let mut amp = [czero(); 8];
        amp[flat(i, j, k)] = C::new(T::one(), T::zero());
        Self { amp }
    }

    /// `(|000> + |111>)/sqrt(2)`.
    pub fn ghz() -> Self {
        let mut amp = [czero(); 8];
        let h = creal(real::<T>(0.5).sqrt());
        amp[0] = h;
        amp[7] = h;
        Self { amp }
    }

    /// `(|001> + |010> + |100>)/sqrt(3)`.
    pub fn w() -> Self {
        let mut amp = [czero(); 8];
        let v = creal(real::<T>(1.0 / 3.0).sqrt());
        amp[flat(0, 0, 1)] = v;
        amp[flat(0, 1, 0)] = v;
        amp[flat(1, 0, 0)] = v;
        Self { amp }
    }

    pub fn norm_sqr(&self) -> T {
        self.amp.iter().fold(T::zero(), |s, a| s + a.norm_sqr())
    }

    /// Rescales so the squared amplitudes sum to one. Relative phases are
    /// untouched. Fails with [`Error::ZeroState`] below the structural-zero
    /// threshold `1e-30`.
    pub fn normalize(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 <= real(1e-30) {
            return Err(Error::ZeroState);
        }
        let inv = n2.sqrt().recip();
        let mut amp = self.amp;
        for a in amp.iter_mut() {
            *a = a.scale(inv);
        }
        Ok(Self { amp })
    }

    /// Every amplitude complex conjugated.
    pub fn conjugate(&self) -> Self {
        let mut amp = self.amp;
        for a in amp.iter_mut() {
            *a = a.conj();
        }
        Self { amp }
    }

    /// Contracts a 2x2 matrix against one qubit's index. Not necessarily
    /// norm-preserving; used for both unitaries and Kraus operators.
    pub(crate) fn contract(&self, m: &Mat2<T>, target: QubitLabel) -> Self {
        let mut amp = [czero(); 8];
        let axis = target.axis();
        let stride = [4usize, 2, 1][axis];
        for base in 0..8 {
            // Visit each index pair once, from its low member.
            if (base / stride) % 2 == 1 {
                continue;
            }
            let lo = self.amp[base];
            let hi = self.amp[base + stride];
            amp[base] = m.e[0][0] * lo + m.e[0][1] * hi;
            amp[base + stride] = m.e[1][0] * lo + m.e[1][1] * hi;
        }
        Self { amp }
    }

    /// Applies a local unitary; the norm is preserved.
    pub fn apply_unitary(&self, u: &LocalUnitary<T>) -> Self {
        self.contract(&u.matrix, u.target)
    }

    /// Applies one outcome of a two-outcome measurement and renormalizes.
    /// Returns the post-measurement state and the outcome probability.
    pub fn apply_kraus(&self, k: &KrausPair<T>, which: OutcomeIndex) -> Result<(Self, T)> {
        let m = match which {
            OutcomeIndex::One => &k.a1,
            OutcomeIndex::Two => &k.a2,
        };
        let raw = self.contract(m, k.target);
        let p = raw.norm_sqr();
        if p < real(1e-14) {
            return Err(Error::NullOutcome {
                probability: p.to_f64().unwrap_or(0.0),
            });
        }
        let inv = p.sqrt().recip();
        let mut amp = raw.amp;
        for a in amp.iter_mut() {
            *a = a.scale(inv);
        }
        Ok((Self { amp }, p))
    }

    /// Reduced density matrix of one qubit (partial trace over the others).
    pub fn reduced_density(&self, x: QubitLabel) -> DensityMatrix2<T> {
        let axis = x.axis();
        let stride = [4usize, 2, 1][axis];
        let mut rho = Mat2::zero();
        for base in 0..8 {
            if (base / stride) % 2 == 1 {
                continue;
            }
            let v = [self.amp[base], self.amp[base + stride]];
            for r in 0..2 {
                for c in 0..2 {
                    rho.e[r][c] += v[r] * v[c].conj();
                }
            }
        }
        DensityMatrix2 { m: rho }
    }

    /// Relabels the qubits: `map[new_slot]` names the original qubit that
    /// ends up in `new_slot`. `map` must be a permutation of A, B, C.
    pub fn permute_qubits(&self, map: [QubitLabel; 3]) -> Self {
        let mut amp = [czero(); 8];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let new_bits = [i, j, k];
                    let mut old = [0usize; 3];
                    for (slot, q) in map.iter().enumerate() {
                        old[q.axis()] = new_bits[slot];
                    }
                    amp[flat(i, j, k)] = self.amp[flat(old[0], old[1], old[2])];
                }
            }
        }
        Self { amp }
    }

    /// Largest absolute difference of amplitudes against another state.
    pub fn max_amp_distance(&self, other: &Self) -> T {
        self.amp
            .iter()
            .zip(other.amp.iter())
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm()))
    }
}

/// Which outcome of a two-outcome measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeIndex {
    One,
    Two,
}

impl OutcomeIndex {
    pub const BOTH: [OutcomeIndex; 2] = [OutcomeIndex::One, OutcomeIndex::Two];
}

/// A 2x2 unitary acting on one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalUnitary<T: Scalar> {
    pub matrix: Mat2<T>,
    pub target: QubitLabel,
}

impl<T: Scalar> LocalUnitary<T> {
    /// Validates unitarity within `1e-12`.
    pub fn new(matrix: Mat2<T>, target: QubitLabel) -> Result<Self> {
        if !matrix.is_unitary(1e-12) {
            return Err(Error::NotUnitary);
        }
        Ok(Self { matrix, target })
    }
}

/// Two Kraus operators of a two-outcome measurement on one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausPair<T: Scalar> {
    pub a1: Mat2<T>,
    pub a2: Mat2<T>,
    pub target: QubitLabel,
}

impl<T: Scalar> KrausPair<T> {
    /// Validates the completeness relation within `1e-10`.
    pub fn new(a1: Mat2<T>, a2: Mat2<T>, target: QubitLabel) -> Result<Self> {
        let sum = a1.adjoint().mul(&a1).add(&a2.adjoint().mul(&a2));
        let mut defect = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                let target_e = if i == j {
                    C::new(T::one(), T::zero())
                } else {
                    czero()
                };
                defect = defect.max((sum.e[i][j] - target_e).norm());
            }
        }
        if defect > real(1e-10) {
            return Err(Error::IncompleteKraus);
        }
        Ok(Self { a1, a2, target })
    }

    pub(crate) fn new_unchecked(a1: Mat2<T>, a2: Mat2<T>, target: QubitLabel) -> Self {
        Self { a1, a2, target }
    }

    /// Same operators aimed at a different qubit.
    pub fn retarget(&self, target: QubitLabel) -> Self {
        Self { target, ..*self }
    }
}

/// One-qubit density matrix (Hermitian, unit trace, positive semidefinite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2<T: Scalar> {
    m: Mat2<T>,
}

impl<T: Scalar> DensityMatrix2<T> {
    pub fn matrix(&self) -> &Mat2<T> {
        &self.m
    }

    /// `tr(rho^2)`, in `[1/2, 1]` for valid one-qubit reductions.
    pub fn purity(&self) -> T {
        let sq = self.m.mul(&self.m);
        sq.trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [T; 2] {
        self.m.hermitian_eigenvalues()
    }

    /// Checks Hermiticity and unit trace within `1e-12` and eigenvalues
    /// above `-1e-12`.
    pub fn validate(&self) -> bool {
        let herm = (self.m.e[0][1] - self.m.e[1][0].conj()).norm()
            .max(self.m.e[0][0].im.abs())
            .max(self.m.e[1][1].im.abs());
        let trace_defect = (self.m.trace().re - T::one()).abs();
        let [lo, _] = self.eigenvalues();
        herm <= real(1e-12) && trace_defect <= real(1e-12) && lo >= -real::<T>(1e-12)
    }

    #[cfg(test)]
    pub(crate) fn from_matrix(m: Mat2<T>) -> Self {
        Self { m }
    }
}
