//! Polynomial local-unitary invariants and the entanglement monotones
//! built from them.
//!
//! The general evaluator [`poly_invariant`] sums over every index
//! assignment of a degree-`2n` contraction and is deliberately naive: it
//! is the ground-truth oracle the closed forms elsewhere in the crate are
//! checked against. The specific invariants `I1..I6` use faster routes
//! (one-qubit purities, a pair-contracted summation) that are tested to
//! agree with it.

use crate::error::{Error, Result};
use crate::scalar::{czero, real, C, Scalar};
use crate::state::{PureState3, QubitLabel};

/// A permutation of `{1, .., n}` with `n <= 6`, stored 0-indexed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Builds from 1-indexed images; validates bijectivity and the degree cap.
    pub fn from_images(images_one_based: &[usize]) -> Result<Self> {
        let n = images_one_based.len();
        if n > 6 {
            return Err(Error::DegreeTooLarge { n });
        }
        let mut seen = [false; 6];
        let mut images = Vec::with_capacity(n);
        for &v in images_one_based {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidParameter {
                    name: "permutation images",
                });
            }
            seen[v - 1] = true;
            images.push(v - 1);
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_images(&(1..=n).collect::<Vec<_>>())
    }

    /// Builds from disjoint cycles in 1-indexed notation; elements not
    /// mentioned are fixed.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        for cycle in cycles {
            for w in 0..cycle.len() {
                let from = cycle[w];
                let to = cycle[(w + 1) % cycle.len()];
                if from == 0 || from > n || to == 0 || to > n {
                    return Err(Error::InvalidParameter {
                        name: "cycle element",
                    });
                }
                images[from - 1] = to;
            }
        }
        Self::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of 0-indexed element `m`.
    #[inline]
    pub fn apply(&self, m: usize) -> usize {
        self.images[m]
    }
}

/// The general polynomial invariant `P_{sigma,tau}`: a sum over all
/// `2^(3n)` index assignments of
/// `t_{i1 j1 k1} .. t_{in jn kn} conj(t_{i1 j_sigma(1) k_tau(1)}) ..`,
/// where `sigma` permutes the B indices and `tau` the C indices of the
/// conjugated factors. Invariant under local unitaries.
pub fn poly_invariant<T: Scalar>(
    state: &PureState3<T>,
    sigma: &Permutation,
    tau: &Permutation,
) -> Result<C<T>> {
    let n = sigma.degree();
    if tau.degree() != n {
        return Err(Error::DegreeMismatch {
            sigma: n,
            tau: tau.degree(),
        });
    }
    if n > 6 {
        return Err(Error::DegreeTooLarge { n });
    }
    if n == 0 {
        return Ok(C::new(T::one(), T::zero()));
    }
    let t = state.amplitudes();
    let size = 1usize << n;
    let mut acc = czero();
    for i_bits in 0..size {
        for j_bits in 0..size {
            for k_bits in 0..size {
                let mut term = C::new(T::one(), T::zero());
                for m in 0..n {
                    let i = (i_bits >> m) & 1;
                    let j = (j_bits >> m) & 1;
                    let k = (k_bits >> m) & 1;
                    let js = (j_bits >> sigma.apply(m)) & 1;
                    let kt = (k_bits >> tau.apply(m)) & 1;
                    term = term * t[4 * i + 2 * j + k] * t[4 * i + 2 * js + kt].conj();
                }
                acc += term;
            }
        }
    }
    Ok(acc)
}

/// Same sum as [`poly_invariant`], evaluated by first contracting the A
/// index of each factor pair into a 16-entry table. `O(2^(2n) n)` instead
/// of `O(2^(3n) n)`; used on the hot paths and tested against the naive
/// evaluator.
pub(crate) fn poly_invariant_paired<T: Scalar>(
    state: &PureState3<T>,
    sigma: &Permutation,
    tau: &Permutation,
) -> C<T> {
    let n = sigma.degree();
    debug_assert_eq!(n, tau.degree());
    let t = state.amplitudes();
    // pair[j][k][j'][k'] = sum_i t_{ijk} conj(t_{ij'k'})
    let mut pair = [[[[czero::<T>(); 2]; 2]; 2]; 2];
    for j in 0..2 {
        for k in 0..2 {
            for jp in 0..2 {
                for kp in 0..2 {
                    let mut s = czero();
                    for i in 0..2 {
                        s += t[4 * i + 2 * j + k] * t[4 * i + 2 * jp + kp].conj();
                    }
                    pair[j][k][jp][kp] = s;
                }
            }
        }
    }
    let size = 1usize << n;
    let mut acc = czero();
    for j_bits in 0..size {
        for k_bits in 0..size {
            let mut term = C::new(T::one(), T::zero());
            for m in 0..n {
                let j = (j_bits >> m) & 1;
                let k = (k_bits >> m) & 1;
                let js = (j_bits >> sigma.apply(m)) & 1;
                let kt = (k_bits >> tau.apply(m)) & 1;
                term *= pair[j][k][js][kt];
            }
            acc += term;
        }
    }
    acc
}

/// The degree-8 invariant `I5`: squared modulus of the antisymmetric
/// epsilon contraction of four amplitude factors. This is the canonical
/// normalization used throughout the crate; `I5(GHZ) = 1/4` and the
/// three-way tangle is `2 sqrt(I5)`.
pub fn i5_epsilon<T: Scalar>(state: &PureState3<T>) -> T {
    let t = state.amplitudes();
    // Each epsilon has two nonzero entries: (0,1) -> +1 and (1,0) -> -1.
    const EPS: [(usize, usize, f64); 2] = [(0, 1, 1.0), (1, 0, -1.0)];
    let mut sum = czero::<T>();
    for &(i1, i2, s1) in &EPS {
        for &(i3, i4, s2) in &EPS {
            for &(j1, j2, s3) in &EPS {
                for &(j3, j4, s4) in &EPS {
                    for &(k1, k3, s5) in &EPS {
                        for &(k2, k4, s6) in &EPS {
                            let sign = s1 * s2 * s3 * s4 * s5 * s6;
                            let prod = t[4 * i1 + 2 * j1 + k1]
                                * t[4 * i2 + 2 * j2 + k2]
                                * t[4 * i3 + 2 * j3 + k3]
                                * t[4 * i4 + 2 * j4 + k4];
                            sum += prod.scale(real(sign));
                        }
                    }
                }
            }
        }
    }
    sum.norm_sqr()
}

pub(crate) fn i6_sigma() -> Permutation {
    Permutation::from_cycles(6, &[&[3, 4], &[5, 6]]).expect("static permutation")
}

pub(crate) fn i6_tau() -> Permutation {
    // The 5-cycle extended to fix element 6.
    Permutation::from_cycles(6, &[&[1, 3, 5, 2, 4]]).expect("static permutation")
}

/// The discrete invariant `I6`: the sign of the imaginary part of the
/// degree-6 invariant `P_{(34)(56),(13524)}`, with `sign(0) = +1`. It
/// separates a state's orbit from its complex conjugate's; the
/// decomposition inversion orients its phase branches against it.
/// Returns `(sign, degenerate)` where `degenerate` marks
/// `|Im| <= 1e-10`, i.e. states on the sign boundary.
pub fn i6_sign<T: Scalar>(state: &PureState3<T>) -> (i8, bool) {
    let p = poly_invariant_paired(state, &i6_sigma(), &i6_tau());
    let im = p.im;
    let sign = if im >= T::zero() { 1 } else { -1 };
    (sign, im.abs() <= real(1e-10))
}

/// The orbit coordinates `I1..I5` plus the discrete sign `I6`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantVector<T: Scalar> {
    pub i1: T,
    pub i2: T,
    pub i3: T,
    pub i4: T,
    pub i5: T,
    /// `+1` or `-1`.
    pub i6: i8,
    /// True when the sign invariant sits on its boundary
    /// (`|Im| <= 1e-10`); conjugation tests should skip such states.
    pub i6_degenerate: bool,
}

impl<T: Scalar> InvariantVector<T> {
    /// Largest absolute difference over the continuous entries `I1..I5`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.i1 - other.i1)
            .abs()
            .max((self.i2 - other.i2).abs())
            .max((self.i3 - other.i3).abs())
            .max((self.i4 - other.i4).abs())
            .max((self.i5 - other.i5).abs())
    }

    /// The purity-type invariant attached to one qubit
    /// (`I1` for C, `I2` for B, `I3` for A).
    pub fn purity_of(&self, q: QubitLabel) -> T {
        match q {
            QubitLabel::A => self.i3,
            QubitLabel::B => self.i2,
            QubitLabel::C => self.i1,
        }
    }

    /// Invariants of the state relabelled by `map` (same convention as
    /// [`PureState3::permute_qubits`]): the purity entries move with their
    /// qubits, `I4`, `I5`, `I6` are permutation symmetric.
    pub fn permuted(&self, map: [QubitLabel; 3]) -> Self {
        Self {
            i1: self.purity_of(map[2]),
            i2: self.purity_of(map[1]),
            i3: self.purity_of(map[0]),
            ..*self
        }
    }
}

/// Computes `I1..I6`. Purities supply `I1..I3`, the pair-contracted
/// degree-3 sum supplies `I4` (its imaginary part is checked to vanish in
/// the test suite), the epsilon contraction supplies `I5`.
pub fn invariants<T: Scalar>(state: &PureState3<T>) -> InvariantVector<T> {
    let i1 = state.reduced_density(QubitLabel::C).purity();
    let i2 = state.reduced_density(QubitLabel::B).purity();
    let i3 = state.reduced_density(QubitLabel::A).purity();
    let sigma = Permutation::from_cycles(3, &[&[1, 2, 3]]).expect("static");
    let tau = Permutation::from_cycles(3, &[&[1, 3, 2]]).expect("static");
    let i4 = poly_invariant_paired(state, &sigma, &tau).re;
    let i5 = i5_epsilon(state);
    let (i6, i6_degenerate) = i6_sign(state);
    InvariantVector {
        i1,
        i2,
        i3,
        i4,
        i5,
        i6,
        i6_degenerate,
    }
}

/// The five bound-producing quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotoneVector<T: Scalar> {
    /// `2 (1 - I1)`: tangle across the `(AB)|C` cut.
    pub tau_ab_c: T,
    /// `2 (1 - I2)`: tangle across the `(AC)|B` cut.
    pub tau_ac_b: T,
    /// `2 (1 - I3)`: tangle across the `(BC)|A` cut.
    pub tau_bc_a: T,
    /// `2 sqrt(I5)`: the genuine three-way tangle.
    pub tau_abc: T,
    /// `3 - (I1 + I2 + I3) I4`.
    pub sigma_abc: T,
}

fn clamp_tiny_negative<T: Scalar>(x: T) -> T {
    if x < T::zero() && x >= -real::<T>(1e-12) {
        T::zero()
    } else {
        x
    }
}

impl<T: Scalar> MonotoneVector<T> {
    pub fn from_invariants(iv: &InvariantVector<T>) -> Self {
        let two = real::<T>(2.0);
        Self {
            tau_ab_c: clamp_tiny_negative(two * (T::one() - iv.i1)),
            tau_ac_b: clamp_tiny_negative(two * (T::one() - iv.i2)),
            tau_bc_a: clamp_tiny_negative(two * (T::one() - iv.i3)),
            tau_abc: clamp_tiny_negative(two * iv.i5.max(T::zero()).sqrt()),
            sigma_abc: clamp_tiny_negative(
                real::<T>(3.0) - (iv.i1 + iv.i2 + iv.i3) * iv.i4,
            ),
        }
    }

    pub fn as_array(&self) -> [T; 5] {
        [
            self.tau_ab_c,
            self.tau_ac_b,
            self.tau_bc_a,
            self.tau_abc,
            self.sigma_abc,
        ]
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.as_array()
            .iter()
            .zip(other.as_array().iter())
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).abs()))
    }
}

/// Monotones of a state, via its invariants.
pub fn monotones<T: Scalar>(state: &PureState3<T>) -> MonotoneVector<T> {
    MonotoneVector::from_invariants(&invariants(state))
}
