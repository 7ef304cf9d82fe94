//! Diagonalization decomposition: the five-amplitude canonical form
//! `sqrt(mu0)|000> + sqrt(mu1) e^{i phi}|100> + sqrt(mu2)|101> +
//! sqrt(mu3)|110> + sqrt(mu4)|111>`.
//!
//! The form is reached by rotating qubit A so the `i = 0` amplitude block
//! becomes singular, diagonalizing that block with rotations on B and C,
//! and spending the residual diagonal-phase freedom so only the `|100>`
//! amplitude keeps a phase. Closed forms map the coordinates to and from
//! the invariant vector, and a two-outcome measurement on qubit A can be
//! propagated without leaving coordinate space.

use crate::error::{Error, Result};
use crate::invariants::InvariantVector;
use crate::mat2::Mat2;
use crate::scalar::{creal, czero, real, C, Scalar};
use crate::state::{flat, KrausPair, PureState3, QubitLabel};

/// Coordinates `(mu0..mu4, phi)` of the decomposition.
///
/// Canonical forms produced by [`decompose`] have `phi` in `[0, pi]`; the
/// dual branch returned by [`from_invariants`] may carry `phi` in
/// `(pi, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DDForm<T: Scalar> {
    pub mu: [T; 5],
    /// Radians in `[0, 2 pi)`.
    pub phi: T,
    /// True when `phi` carries no information (the gauge monomial
    /// `mu0^2 sqrt(mu1 mu2 mu3 mu4)` vanishes) and was set to zero.
    pub degenerate_phi: bool,
    /// True when the input sat in a degenerate family (some qubit factors
    /// out) and the natural limit form was returned.
    pub degenerate_family: bool,
}

impl<T: Scalar> DDForm<T> {
    pub fn new(mu: [T; 5], phi: T) -> Self {
        Self {
            mu,
            phi,
            degenerate_phi: false,
            degenerate_family: false,
        }
    }

    /// `Delta = mu1 mu4 + mu2 mu3 - 2 sqrt(mu1 mu2 mu3 mu4) cos(phi)`.
    pub fn delta(&self) -> T {
        let [_, m1, m2, m3, m4] = self.mu;
        let prod = (m1 * m2 * m3 * m4).max(T::zero());
        m1 * m4 + m2 * m3 - real::<T>(2.0) * prod.sqrt() * self.phi.cos()
    }

    /// Checks the coefficient-sum and phase-range invariants of a
    /// canonical form.
    pub fn validate(&self) -> bool {
        let sum = self.mu.iter().fold(T::zero(), |s, &m| s + m);
        let in_range = self.mu.iter().all(|&m| m >= -real::<T>(1e-12));
        (sum - T::one()).abs() <= real(1e-10)
            && in_range
            && self.phi >= T::zero()
            && self.phi <= T::PI() + real(1e-12)
    }

    /// The literal amplitude assignment, normalized.
    pub fn to_state(&self) -> PureState3<T> {
        let mut amp = [czero(); 8];
        amp[flat(0, 0, 0)] = creal(self.mu[0].max(T::zero()).sqrt());
        amp[flat(1, 0, 0)] = C::from_polar(self.mu[1].max(T::zero()).sqrt(), self.phi);
        amp[flat(1, 0, 1)] = creal(self.mu[2].max(T::zero()).sqrt());
        amp[flat(1, 1, 0)] = creal(self.mu[3].max(T::zero()).sqrt());
        amp[flat(1, 1, 1)] = creal(self.mu[4].max(T::zero()).sqrt());
        PureState3::from_amplitudes(amp)
            .normalize()
            .expect("DD form must carry unit coefficient mass")
    }

    /// Closed-form invariants of the decomposed state: `I1..I5` from the
    /// coefficient polynomials, the sign `I6` from the reconstructed
    /// template. Valid for any parameter values plugged into the
    /// template, not only canonical ones.
    pub fn invariants(&self) -> InvariantVector<T> {
        let [m0, m1, m2, m3, m4] = self.mu;
        let delta = self.delta();
        let one = T::one();
        let two = real::<T>(2.0);
        let three = real::<T>(3.0);
        let i1 = one - two * m0 * (m2 + m4) - two * delta;
        let i2 = one - two * m0 * (m3 + m4) - two * delta;
        let i3 = one - two * m0 * (m2 + m3 + m4);
        let i4 = one
            - three
                * ((m2 + m3) * (m0 - m4) + m4 * (one - m4) - m0 * m2 * m3
                    + (one - m0) * (delta - m1 * m4));
        let i5 = real::<T>(4.0) * m0 * m0 * m4 * m4;
        let (i6, i6_degenerate) = crate::invariants::i6_sign(&self.to_state());
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

    /// Largest absolute difference over the five coefficients and the phase.
    pub fn max_field_distance(&self, other: &Self) -> T {
        let mut d = (self.phi - other.phi).abs();
        for (a, b) in self.mu.iter().zip(other.mu.iter()) {
            d = d.max((*a - *b).abs());
        }
        d
    }
}

/// The intermediate quantities of the invariant inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JVector<T: Scalar> {
    pub j1: T,
    pub j2: T,
    pub j3: T,
    pub j4: T,
    pub j5: T,
    /// `(J4 + J5)^2 - 4 (J1 + J4)(J2 + J4)(J3 + J4)`; nonnegative on
    /// physical inputs, zero exactly when the two decomposition branches
    /// coincide.
    pub upsilon: T,
}

impl<T: Scalar> JVector<T> {
    /// On the source decomposition the identities `J1 = Delta`,
    /// `J2 = mu0 mu2`, `J3 = mu0 mu3`, `J4 = mu0 mu4` hold.
    pub fn from_invariants(iv: &InvariantVector<T>) -> Self {
        let root = iv.i5.max(T::zero()).sqrt();
        let quarter = real::<T>(0.25);
        let one = T::one();
        let j1 = quarter * (one - iv.i1 - iv.i2 + iv.i3 - root);
        let j2 = quarter * (one - iv.i1 + iv.i2 - iv.i3 - root);
        let j3 = quarter * (one + iv.i1 - iv.i2 - iv.i3 - root);
        let j4 = root * real::<T>(0.5);
        let j5 = quarter
            * (real::<T>(5.0 / 3.0) - iv.i1 - iv.i2 - iv.i3 + real::<T>(4.0 / 3.0) * iv.i4
                - root);
        let upsilon =
            (j4 + j5) * (j4 + j5) - real::<T>(4.0) * (j1 + j4) * (j2 + j4) * (j3 + j4);
        Self {
            j1,
            j2,
            j3,
            j4,
            j5,
            upsilon,
        }
    }
}

const MU_SNAP: f64 = 1e-12;
const COEFF_TOL: f64 = 1e-13;
const PROB_NULL: f64 = 1e-14;
const GAMMA_NULL: f64 = 1e-14;

fn wrap_to_two_pi<T: Scalar>(phi: T) -> T {
    let tau = T::PI() + T::PI();
    let mut p = phi % tau;
    if p < T::zero() {
        p += tau;
    }
    p
}

/// Reads the template amplitudes off a rotated state: coefficients from
/// magnitudes, the phase from the gauge-invariant combination
/// `arg t100 + arg t111 - arg t101 - arg t110`.
fn template_from_rotated<T: Scalar>(t: &PureState3<T>) -> DDForm<T> {
    let a = t.amplitudes();
    let mut mu = [
        a[flat(0, 0, 0)].norm_sqr(),
        a[flat(1, 0, 0)].norm_sqr(),
        a[flat(1, 0, 1)].norm_sqr(),
        a[flat(1, 1, 0)].norm_sqr(),
        a[flat(1, 1, 1)].norm_sqr(),
    ];
    for m in mu.iter_mut() {
        if *m < real(MU_SNAP) {
            *m = T::zero();
        }
    }
    let sum = mu.iter().fold(T::zero(), |s, &m| s + m);
    if sum > T::zero() {
        for m in mu.iter_mut() {
            *m /= sum;
        }
    }
    // The phase is pure gauge exactly when one of the four upper
    // coefficients vanishes; mu0 does not participate (the invariant
    // phase combination never touches the |000> amplitude).
    if mu[1] * mu[2] * mu[3] * mu[4] <= T::zero() {
        let mut f = DDForm::new(mu, T::zero());
        f.degenerate_phi = true;
        return f;
    }
    let phi = wrap_to_two_pi(
        a[flat(1, 0, 0)].arg() + a[flat(1, 1, 1)].arg()
            - a[flat(1, 0, 1)].arg()
            - a[flat(1, 1, 0)].arg(),
    );
    DDForm::new(mu, phi)
}

/// Rotates the state with the A-direction `(u00, u01)` that kills
/// `det T0`, diagonalizes the resulting `T0` block on B and C, and reads
/// off the template.
fn reduce_with_direction<T: Scalar>(state: &PureState3<T>, dir: [C<T>; 2]) -> DDForm<T> {
    let ua = Mat2::complete_unit_row(dir[0], dir[1]);
    let rotated = state.contract(&ua, QubitLabel::A);
    let a = rotated.amplitudes();
    let t0 = Mat2::new(a[0], a[1], a[2], a[3]);
    let (w, _, v) = t0.svd();
    let ub = w.adjoint();
    let uc = v.transpose();
    let diagonalized = rotated
        .contract(&ub, QubitLabel::B)
        .contract(&uc, QubitLabel::C);
    template_from_rotated(&diagonalized)
}

/// Roots of the homogeneous quadratic `c0 u00^2 + c1 u00 u01 + c2 u01^2`
/// as unit directions `(u00, u01)`, via the cancellation-free form.
fn singular_directions<T: Scalar>(c0: C<T>, c1: C<T>, c2: C<T>) -> Vec<[C<T>; 2]> {
    let th = real::<T>(COEFF_TOL);
    let unit = |w: C<T>| -> [C<T>; 2] {
        let n = (T::one() + w.norm_sqr()).sqrt();
        [creal(n.recip()), w.scale(n.recip())]
    };
    let infinity = [czero(), C::new(T::one(), T::zero())];
    if c2.norm() <= th {
        // (0, 1) is always a root when c2 vanishes.
        if c1.norm() <= th {
            return vec![infinity];
        }
        return vec![unit(-c0 / c1), infinity];
    }
    let disc = c1 * c1 - c2 * c0.scale(real(4.0));
    let sq = disc.sqrt();
    let q = if (c1 + sq).norm() >= (c1 - sq).norm() {
        (c1 + sq).scale(real(-0.5))
    } else {
        (c1 - sq).scale(real(-0.5))
    };
    if q.norm() <= real(1e-300) {
        return vec![unit(czero())];
    }
    vec![unit(q / c2), unit(c0 / q)]
}

/// Natural limit form for states where every A-combination of the
/// amplitude blocks is singular, i.e. some qubit factors out.
fn degenerate_family_form<T: Scalar>(state: &PureState3<T>) -> DDForm<T> {
    // The factoring qubit has a (numerically) pure reduction.
    let mut best = QubitLabel::A;
    let mut best_purity = T::zero();
    for q in QubitLabel::ALL {
        let p = state.reduced_density(q).purity();
        if p > best_purity {
            best_purity = p;
            best = q;
        }
    }
    let rho = state.reduced_density(best);
    let [_, hi] = rho.matrix().hermitian_eigenvalues();
    let axis = rho.matrix().hermitian_eigenvector(hi);
    // Send the factor direction to |0> on its qubit.
    let u = Mat2::new(axis[0].conj(), axis[1].conj(), -axis[1], axis[0]);
    let rotated = state.contract(&u, best);
    let a = rotated.amplitudes();
    // Remaining two-party block, rows and columns being the other two
    // qubits in A-before-B-before-C order.
    let block = match best {
        QubitLabel::A => Mat2::new(a[0], a[1], a[2], a[3]),
        QubitLabel::B => Mat2::new(
            a[flat(0, 0, 0)],
            a[flat(0, 0, 1)],
            a[flat(1, 0, 0)],
            a[flat(1, 0, 1)],
        ),
        QubitLabel::C => Mat2::new(
            a[flat(0, 0, 0)],
            a[flat(0, 1, 0)],
            a[flat(1, 0, 0)],
            a[flat(1, 1, 0)],
        ),
    };
    let (_, s, _) = block.svd();
    let (l1, l2) = (s[0] * s[0], s[1] * s[1]);
    let sum = (l1 + l2).max(real(1e-30));
    let (l1, l2) = (l1 / sum, l2 / sum);
    let mut mu = [T::zero(); 5];
    if l2 < real(MU_SNAP) {
        mu[0] = T::one();
    } else {
        match best {
            // |1>_A (l1 |00> + l2 |11>)_BC after flipping A onto |1>
            QubitLabel::A => {
                mu[1] = l1;
                mu[4] = l2;
            }
            // l1 |000> + l2 |101> with B held on |0>
            QubitLabel::B => {
                mu[0] = l1;
                mu[2] = l2;
            }
            // l1 |000> + l2 |110> with C held on |0>
            QubitLabel::C => {
                mu[0] = l1;
                mu[3] = l2;
            }
        }
    }
    let mut form = DDForm::new(mu, T::zero());
    form.degenerate_phi = true;
    form.degenerate_family = true;
    form
}

/// Decomposes a normalized state. The two A-rotations that make the first
/// amplitude block singular give two candidate forms; the one with `phi`
/// in `[0, pi]` is canonical (ties go to the smaller phase, then the
/// larger `mu0`). States where the singularity condition holds
/// identically (a qubit factors out) get the natural limit form with
/// `degenerate_family` set.
pub fn decompose<T: Scalar>(state: &PureState3<T>) -> Result<DDForm<T>> {
    let t = state.amplitudes();
    let t0 = Mat2::new(t[0], t[1], t[2], t[3]);
    let t1 = Mat2::new(t[4], t[5], t[6], t[7]);
    let c0 = t0.det();
    let c2 = t1.det();
    let c1 = t0.e[0][0] * t1.e[1][1] + t0.e[1][1] * t1.e[0][0]
        - t0.e[0][1] * t1.e[1][0]
        - t0.e[1][0] * t1.e[0][1];
    let th = real::<T>(COEFF_TOL);
    // Degenerate family: either the blocks are proportional (qubit A
    // factors; det rho_A vanishes) or every combination is singular
    // (another qubit factors; the quadratic is identically zero).
    let rho_a_det = state.reduced_density(QubitLabel::A).matrix().det().re;
    if rho_a_det.abs() <= th
        || (c0.norm() <= th && c1.norm() <= th && c2.norm() <= th)
    {
        return Ok(degenerate_family_form(state));
    }
    let mut forms: Vec<DDForm<T>> = singular_directions(c0, c1, c2)
        .into_iter()
        .map(|dir| reduce_with_direction(state, dir))
        .collect();
    let pi = T::PI();
    for f in forms.iter_mut() {
        // Fold round-off excursions back onto the interval boundary.
        if f.phi > pi && f.phi - pi <= real(1e-9) {
            f.phi = pi;
        }
        if f.phi >= pi + pi - real::<T>(1e-9) {
            f.phi = T::zero();
        }
    }
    forms.sort_by(|a, b| {
        let a_in = a.phi <= pi;
        let b_in = b.phi <= pi;
        b_in.cmp(&a_in)
            .then(a.phi.partial_cmp(&b.phi).expect("phases are finite"))
            .then(
                b.mu[0]
                    .partial_cmp(&a.mu[0])
                    .expect("coefficients are finite"),
            )
    });
    Ok(forms.remove(0))
}

/// Recovers both decomposition branches from an invariant vector. The
/// `+` branch of the coefficient formula comes first; exactly one branch
/// is canonical (`phi` in `[0, pi]`) away from degeneracies.
pub fn from_invariants<T: Scalar>(iv: &InvariantVector<T>) -> Result<(DDForm<T>, DDForm<T>)> {
    let j = JVector::from_invariants(iv);
    if j.upsilon < -real::<T>(1e-9) {
        return Err(Error::NonPhysical {
            upsilon: j.upsilon.to_f64().unwrap_or(f64::NEG_INFINITY),
        });
    }
    let denom = j.j1 + j.j4;
    if denom <= real(1e-12) {
        return Err(Error::SingularInversion);
    }
    let root = j.upsilon.max(T::zero()).sqrt();
    let build = |mu0: T| -> Result<DDForm<T>> {
        if mu0 <= real(1e-12) {
            return Err(Error::SingularInversion);
        }
        let snap = |x: T| {
            if x.abs() < real(MU_SNAP) {
                T::zero()
            } else {
                x
            }
        };
        let mu2 = snap(j.j2 / mu0);
        let mu3 = snap(j.j3 / mu0);
        let mu4 = snap(j.j4 / mu0);
        let mu1 = snap(T::one() - mu0 - (j.j2 + j.j3 + j.j4) / mu0).max(T::zero());
        let mu = [mu0, mu1, mu2, mu3, mu4];
        let prod = mu[1] * mu[2] * mu[3] * mu[4];
        if prod <= T::zero() {
            let mut f = DDForm::new(mu, T::zero());
            f.degenerate_phi = true;
            return Ok(f);
        }
        let mut cos_phi =
            (mu[1] * mu[4] + mu[2] * mu[3] - j.j1) / (real::<T>(2.0) * prod.sqrt());
        cos_phi = cos_phi.min(T::one()).max(-T::one());
        // The cosine leaves two phase orientations; the sign invariant of
        // the requested orbit picks one. The positive-sine template either
        // carries that sign already or its conjugate does.
        let phi_pos = cos_phi.acos();
        let candidate = DDForm::new(mu, phi_pos);
        let (sign_pos, degenerate) =
            crate::invariants::i6_sign(&candidate.to_state());
        let phi = if degenerate || sign_pos == iv.i6 {
            phi_pos
        } else {
            T::PI() + T::PI() - phi_pos
        };
        Ok(DDForm::new(mu, phi))
    };
    let plus = build((j.j4 + j.j5 + root) / (real::<T>(2.0) * denom))?;
    let minus = build((j.j4 + j.j5 - root) / (real::<T>(2.0) * denom))?;
    Ok((plus, minus))
}

/// Diagonal-measurement parameters `(x, y, alpha, theta)`: the first
/// outcome applies `diag(x, y)` after the rotation
/// `[[alpha, sqrt(1-alpha^2) e^{i theta}], [-sqrt(1-alpha^2) e^{-i theta}, alpha]]`,
/// the second the complementary `diag(sqrt(1-x^2), sqrt(1-y^2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementParams<T: Scalar> {
    pub x: T,
    pub y: T,
    pub alpha: T,
    pub theta: T,
}

impl<T: Scalar> MeasurementParams<T> {
    pub fn new(x: T, y: T, alpha: T, theta: T) -> Result<Self> {
        let in_unit = |v: T| v >= T::zero() && v <= T::one() && v.is_finite();
        if !in_unit(x) {
            return Err(Error::InvalidParameter { name: "x" });
        }
        if !in_unit(y) {
            return Err(Error::InvalidParameter { name: "y" });
        }
        if !in_unit(alpha) {
            return Err(Error::InvalidParameter { name: "alpha" });
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParameter { name: "theta" });
        }
        Ok(Self { x, y, alpha, theta })
    }

    /// Diagonal entries `(x_i, y_i)` of the given outcome (0 or 1).
    fn outcome_xy(&self, outcome: usize) -> (T, T) {
        if outcome == 0 {
            (self.x, self.y)
        } else {
            (
                (T::one() - self.x * self.x).max(T::zero()).sqrt(),
                (T::one() - self.y * self.y).max(T::zero()).sqrt(),
            )
        }
    }

    /// Gauge normalizer `gamma = y_i^2 alpha^2 + x_i^2 (1 - alpha^2)`.
    fn gamma(&self, outcome: usize) -> T {
        let (x, y) = self.outcome_xy(outcome);
        let a2 = self.alpha * self.alpha;
        y * y * a2 + x * x * (T::one() - a2)
    }
}

/// One branch of a propagated measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasurementOutcome<T: Scalar> {
    State { dd: DDForm<T>, probability: T },
    /// The outcome annihilates the state (probability below `1e-14`).
    Null,
}

/// Unnormalized coordinate update for one outcome; returns the
/// renormalized coefficients, the phase, and the outcome probability
/// (the coefficient sum before renormalization).
fn raw_update<T: Scalar>(
    dd: &DDForm<T>,
    m: &MeasurementParams<T>,
    outcome: usize,
) -> ([T; 5], T, T) {
    let (x, y) = m.outcome_xy(outcome);
    let gamma = m.gamma(outcome);
    let one = T::one();
    let alpha = m.alpha;
    let z = C::from_polar(
        (x * x - y * y) * alpha * (dd.mu[0] * (one - alpha * alpha)).max(T::zero()).sqrt(),
        -m.theta,
    ) + C::from_polar(gamma * dd.mu[1].max(T::zero()).sqrt(), dd.phi);
    let mut mu = [
        x * x * y * y * dd.mu[0] / gamma,
        z.norm_sqr() / gamma,
        dd.mu[2] * gamma,
        dd.mu[3] * gamma,
        dd.mu[4] * gamma,
    ];
    let p = mu.iter().fold(T::zero(), |s, &v| s + v);
    if p > T::zero() {
        for v in mu.iter_mut() {
            *v /= p;
        }
    }
    (mu, z.arg(), p)
}

/// Canonicalizes a post-measurement coordinate set: returns it unchanged
/// when it already is the canonical decomposition, switches to the dual
/// branch via the invariant inversion when the phase leaves `[0, pi]`,
/// and falls back to re-decomposing the reconstructed state for
/// degenerate outcomes.
fn canonicalize<T: Scalar>(mu: [T; 5], phi_raw: T) -> Result<DDForm<T>> {
    let mut mu = mu;
    for v in mu.iter_mut() {
        if *v < real(MU_SNAP) {
            *v = T::zero();
        }
    }
    let sum = mu.iter().fold(T::zero(), |s, &v| s + v);
    if sum > T::zero() {
        for v in mu.iter_mut() {
            *v /= sum;
        }
    }
    let phi = wrap_to_two_pi(phi_raw);
    let prod = mu[1] * mu[2] * mu[3] * mu[4];
    let pi = T::PI();
    if mu[0] > T::zero() && prod > T::zero() {
        if phi <= pi {
            return Ok(DDForm::new(mu, phi));
        }
        // The dual branch carries the same invariants with phi in [0, pi].
        let raw = DDForm::new(mu, phi);
        if let Ok((plus, minus)) = from_invariants(&raw.invariants()) {
            let canonical: Vec<&DDForm<T>> = [&plus, &minus]
                .into_iter()
                .filter(|f| f.phi <= pi)
                .collect();
            if canonical.len() == 1 {
                return Ok(*canonical[0]);
            }
        }
    }
    // Degenerate coordinates: state-level canonicalization.
    decompose(&DDForm::new(mu, phi).to_state())
}

/// Propagates a two-outcome measurement on qubit A through coordinate
/// space. Outcome probabilities are the coefficient sums of the raw
/// updates and add to one within `1e-9`.
pub fn measure<T: Scalar>(
    dd: &DDForm<T>,
    m: &MeasurementParams<T>,
) -> Result<[MeasurementOutcome<T>; 2]> {
    let gammas = [m.gamma(0), m.gamma(1)];
    let mut raw: [Option<([T; 5], T, T)>; 2] = [None, None];
    for i in 0..2 {
        if gammas[i] >= real(GAMMA_NULL) {
            raw[i] = Some(raw_update(dd, m, i));
        }
    }
    // gamma0 + gamma1 = 1, so at most one outcome lacks coordinates; its
    // probability follows from the other side.
    let mut outcomes = [MeasurementOutcome::Null, MeasurementOutcome::Null];
    for i in 0..2 {
        match raw[i] {
            Some((mu, phi, p)) => {
                if p >= real(PROB_NULL) {
                    outcomes[i] = MeasurementOutcome::State {
                        dd: canonicalize(mu, phi)?,
                        probability: p,
                    };
                }
            }
            None => {
                let other = raw[1 - i].map(|(_, _, p)| p).unwrap_or(T::zero());
                let p = (T::one() - other).max(T::zero());
                if p >= real(PROB_NULL) {
                    return Err(Error::DegenerateGamma {
                        outcome: (i + 1) as u8,
                    });
                }
            }
        }
    }
    Ok(outcomes)
}

/// Explicit Kraus operators `A_i = U_i D_i V` on qubit A realizing the
/// parameterized measurement. When a gauge factor vanishes the
/// corresponding rotation is replaced by the identity; completeness is
/// unaffected since it only involves the `D_i` and `V`.
pub fn build_kraus<T: Scalar>(m: &MeasurementParams<T>) -> KrausPair<T> {
    let one = T::one();
    let beta = (one - m.alpha * m.alpha).max(T::zero()).sqrt();
    let v = Mat2::new(
        creal(m.alpha),
        C::from_polar(beta, m.theta),
        -C::from_polar(beta, -m.theta),
        creal(m.alpha),
    );
    let mut ops = [Mat2::zero(), Mat2::zero()];
    for (i, op) in ops.iter_mut().enumerate() {
        let (x, y) = m.outcome_xy(i);
        let gamma = m.gamma(i);
        let u = if gamma >= real(GAMMA_NULL) {
            let inv = gamma.sqrt().recip();
            Mat2::new(
                creal(y * m.alpha * inv),
                -C::from_polar(x * beta * inv, m.theta),
                C::from_polar(x * beta * inv, -m.theta),
                creal(y * m.alpha * inv),
            )
        } else {
            Mat2::identity()
        };
        *op = u.mul(&Mat2::diag(x, y)).mul(&v);
    }
    KrausPair::new_unchecked(ops[0], ops[1], QubitLabel::A)
}
