//! Dense 2x2 complex matrices.
//!
//! Everything the crate needs from linear algebra happens at size 2x2 (or on
//! Hermitian matrices built from 2x2 blocks), so the decompositions are
//! written in closed form instead of pulling in a general-purpose solver.

use crate::scalar::{creal, czero, real, C, Scalar};

/// A 2x2 complex matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2<T: Scalar> {
    pub e: [[C<T>; 2]; 2],
}

impl<T: Scalar> Mat2<T> {
    pub fn new(e00: C<T>, e01: C<T>, e10: C<T>, e11: C<T>) -> Self {
        Self {
            e: [[e00, e01], [e10, e11]],
        }
    }

    pub fn zero() -> Self {
        Self::new(czero(), czero(), czero(), czero())
    }

    pub fn identity() -> Self {
        Self::new(cone(), czero(), czero(), cone())
    }

    /// Diagonal matrix with real entries.
    pub fn diag(a: T, b: T) -> Self {
        Self::new(creal(a), czero(), czero(), creal(b))
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.e[0][0].conj(),
            self.e[1][0].conj(),
            self.e[0][1].conj(),
            self.e[1][1].conj(),
        )
    }

    pub fn det(&self) -> C<T> {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn trace(&self) -> C<T> {
        self.e[0][0] + self.e[1][1]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = self.e[i][0] * rhs.e[0][j] + self.e[i][1] * rhs.e[1][j];
            }
        }
        out
    }

    pub fn scale(&self, s: C<T>) -> Self {
        let mut out = *self;
        for row in out.e.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] += rhs.e[i][j];
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.e[0][0], self.e[1][0], self.e[0][1], self.e[1][1])
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: [C<T>; 2]) -> [C<T>; 2] {
        [
            self.e[0][0] * v[0] + self.e[0][1] * v[1],
            self.e[1][0] * v[0] + self.e[1][1] * v[1],
        ]
    }

    /// Squared Frobenius norm.
    pub fn norm_sqr(&self) -> T {
        let mut s = T::zero();
        for row in &self.e {
            for v in row {
                s += v.norm_sqr();
            }
        }
        s
    }

    /// Largest absolute deviation of `self' * self` from the identity.
    pub fn unitarity_defect(&self) -> T {
        let p = self.adjoint().mul(self);
        let mut d = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                let target = if i == j { cone() } else { czero() };
                d = d.max((p.e[i][j] - target).norm());
            }
        }
        d
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= real(tol)
    }

    /// Completes a unit row `(a, b)` into the unitary `[[a, b], [-conj(b), conj(a)]]`.
    pub fn complete_unit_row(a: C<T>, b: C<T>) -> Self {
        Self::new(a, b, -b.conj(), a.conj())
    }

    /// Eigenvalues of a Hermitian matrix, ascending. Only the Hermitian part
    /// of `self` is read.
    pub fn hermitian_eigenvalues(&self) -> [T; 2] {
        let a = self.e[0][0].re;
        let d = self.e[1][1].re;
        let b = (self.e[0][1] + self.e[1][0].conj()).scale(real(0.5));
        let tr = a + d;
        let gap = ((a - d) * (a - d) + real::<T>(4.0) * b.norm_sqr()).max(T::zero());
        let root = gap.sqrt();
        let half = real::<T>(0.5);
        [(tr - root) * half, (tr + root) * half]
    }

    /// Unit eigenvector of a Hermitian matrix for the given eigenvalue.
    pub fn hermitian_eigenvector(&self, lambda: T) -> [C<T>; 2] {
        let a = self.e[0][0].re;
        let d = self.e[1][1].re;
        let b = (self.e[0][1] + self.e[1][0].conj()).scale(real(0.5));
        // Two algebraically equivalent constructions; pick the better conditioned.
        let v1 = [b, creal(lambda - a)];
        let v2 = [creal(lambda - d), b.conj()];
        let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
        let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
        let (v, n) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
        if n <= real(1e-60) {
            // Scalar matrix: any direction works.
            return [cone(), czero()];
        }
        let inv = n.sqrt().recip();
        [v[0].scale(inv), v[1].scale(inv)]
    }

    /// Singular value decomposition `self = W diag(s1, s2) V'` with
    /// `s1 >= s2 >= 0`; returns `(W, [s1, s2], V)` where both factors are
    /// unitary and `V` holds right singular vectors as columns. Stays
    /// accurate in the near-rank-1 regime: the second left vector is the
    /// exact orthogonal complement of the first, phase-aligned with
    /// `self v2` whenever that direction is meaningful.
    pub fn svd(&self) -> (Self, [T; 2], Self) {
        let h = self.adjoint().mul(self);
        let [_, hi] = h.hermitian_eigenvalues();
        let v1 = h.hermitian_eigenvector(hi);
        // Orthogonal complement of a unit 2-vector.
        let v2 = [-v1[1].conj(), v1[0].conj()];
        let u1 = self.apply(v1);
        let s1 = (u1[0].norm_sqr() + u1[1].norm_sqr()).sqrt();
        let w1 = if s1 <= real(1e-60) {
            [cone(), czero()]
        } else {
            [u1[0].scale(s1.recip()), u1[1].scale(s1.recip())]
        };
        let w2_raw = [-w1[1].conj(), w1[0].conj()];
        let u2 = self.apply(v2);
        let c = w2_raw[0].conj() * u2[0] + w2_raw[1].conj() * u2[1];
        let s2 = c.norm();
        let w2 = if s2 <= real(1e-60) {
            w2_raw
        } else {
            let phase = c.scale(s2.recip());
            [w2_raw[0] * phase, w2_raw[1] * phase]
        };
        let w = Self::new(w1[0], w2[0], w1[1], w2[1]);
        let v = Self::new(v1[0], v2[0], v1[1], v2[1]);
        (w, [s1, s2], v)
    }
}

use crate::scalar::cone;

/// Normalizes a complex 2-vector in place; returns its original norm.
pub fn normalize2<T: Scalar>(v: &mut [C<T>; 2]) -> T {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if n > T::zero() {
        let inv = n.recip();
        v[0] = v[0].scale(inv);
        v[1] = v[1].scale(inv);
    }
    n
}
