//! Reproducible random sampling of states, unitaries, and measurements.
//!
//! All draws go through [`SeededRng`], a counter-based ChaCha generator:
//! the same seed yields the same sequence on every platform, and
//! independent substreams can be split off for parallel work.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mat2::{normalize2, Mat2};
use crate::scalar::{czero, real, C, Scalar};
use crate::state::{KrausPair, PureState3, QubitLabel};

/// Deterministic random source with explicit seed and stream index.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Generator for `(seed, stream)`. Different streams over the same seed
    /// are independent; parallel code should give each task its own stream.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    /// Fresh generator on the same seed with the given stream index.
    pub fn substream(&self, index: u64) -> Self {
        Self::with_stream(self.seed, index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen()
    }

    /// Standard normal via Box-Muller. Consumes exactly two uniforms per
    /// call so the stream position stays easy to reason about.
    fn gaussian(&mut self) -> f64 {
        let u1: f64 = 1.0 - self.rng.gen::<f64>(); // (0, 1]
        let u2: f64 = self.rng.gen();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    fn gaussian_complex<T: Scalar>(&mut self) -> C<T> {
        let re = self.gaussian();
        let im = self.gaussian();
        C::new(real(re), real(im))
    }

    /// Uniformly random qubit label.
    pub fn qubit_label(&mut self) -> QubitLabel {
        QubitLabel::ALL[self.rng.gen_range(0..3)]
    }

    /// Normalized single-qubit state, uniform on the Bloch sphere up to phase.
    pub fn qubit_state<T: Scalar>(&mut self) -> [C<T>; 2] {
        loop {
            let mut v = [self.gaussian_complex(), self.gaussian_complex()];
            if normalize2(&mut v) > real(1e-12) {
                return v;
            }
        }
    }

    /// Haar-distributed 2x2 unitary (QR of a complex Gaussian matrix with
    /// the phase convention that makes R's diagonal real positive).
    pub fn haar_unitary<T: Scalar>(&mut self) -> Mat2<T> {
        loop {
            let g0 = [self.gaussian_complex::<T>(), self.gaussian_complex()];
            let g1 = [self.gaussian_complex::<T>(), self.gaussian_complex()];
            let mut q0 = g0;
            if normalize2(&mut q0) <= real(1e-12) {
                continue;
            }
            let r01 = q0[0].conj() * g1[0] + q0[1].conj() * g1[1];
            let mut q1 = [g1[0] - q0[0] * r01, g1[1] - q0[1] * r01];
            if normalize2(&mut q1) <= real(1e-12) {
                continue;
            }
            return Mat2::new(q0[0], q1[0], q0[1], q1[1]);
        }
    }

    /// State drawn uniformly from the unit sphere in the 8-dimensional
    /// amplitude space (normalized vector of standard complex Gaussians).
    pub fn state<T: Scalar>(&mut self) -> PureState3<T> {
        loop {
            let mut amp = [czero(); 8];
            for a in amp.iter_mut() {
                *a = self.gaussian_complex();
            }
            if let Ok(s) = PureState3::from_amplitudes(amp).normalize() {
                return s;
            }
        }
    }

    /// Random two-outcome measurement: a Gaussian 4x2 matrix is
    /// orthonormalized into an isometry and split into two stacked 2x2
    /// blocks, so completeness holds by construction.
    pub fn kraus_pair<T: Scalar>(&mut self, target: QubitLabel) -> KrausPair<T> {
        loop {
            let mut y0 = [czero::<T>(); 4];
            let mut y1 = [czero::<T>(); 4];
            for v in y0.iter_mut() {
                *v = self.gaussian_complex();
            }
            for v in y1.iter_mut() {
                *v = self.gaussian_complex();
            }
            let n0 = y0.iter().fold(T::zero(), |s, v| s + v.norm_sqr()).sqrt();
            if n0 <= real(1e-12) {
                continue;
            }
            for v in y0.iter_mut() {
                *v = v.scale(n0.recip());
            }
            let overlap = y0
                .iter()
                .zip(y1.iter())
                .fold(czero(), |s, (a, b)| s + a.conj() * *b);
            for (v, a) in y1.iter_mut().zip(y0.iter()) {
                *v -= *a * overlap;
            }
            let n1 = y1.iter().fold(T::zero(), |s, v| s + v.norm_sqr()).sqrt();
            if n1 <= real(1e-12) {
                continue;
            }
            for v in y1.iter_mut() {
                *v = v.scale(n1.recip());
            }
            let a1 = Mat2::new(y0[0], y1[0], y0[1], y1[1]);
            let a2 = Mat2::new(y0[2], y1[2], y0[3], y1[3]);
            return KrausPair::new_unchecked(a1, a2, target);
        }
    }
}
