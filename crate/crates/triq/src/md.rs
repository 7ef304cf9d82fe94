//! Maximization decomposition: the canonical form anchored at the
//! closest product state,
//! `a e^{i phi}|000> + b|011> + c|101> + d|110> + f|111>`.
//!
//! The anchor is found by multi-start alternating optimization of the
//! product overlap. Fixing two factors, the optimal third is the
//! normalized contraction of the state against them, so every step
//! solves its subproblem exactly and the overlap climbs monotonically.
//! Stationarity of the optimum is what zeroes the weight-one amplitudes
//! of the rotated state.

use crate::error::{Error, Result};
use crate::invariants::InvariantVector;
use crate::mat2::{normalize2, Mat2};
use crate::sampling::SeededRng;
use crate::scalar::{creal, czero, real, C, Scalar};
use crate::state::{flat, PureState3, QubitLabel};

/// Coordinates `(a, b, c, d, f, phi)` of the decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MDForm<T: Scalar> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub f: T,
    /// Radians in `[0, 2 pi)`.
    pub phi: T,
}

impl<T: Scalar> MDForm<T> {
    pub fn new(a: T, b: T, c: T, d: T, f: T, phi: T) -> Self {
        Self { a, b, c, d, f, phi }
    }

    pub fn amplitudes(&self) -> [T; 5] {
        [self.a, self.b, self.c, self.d, self.f]
    }

    /// Checks normalization within `1e-9` and the necessary ranges
    /// (`0 <= b, c, d, f <= a`, phase in `[0, 2 pi)`).
    pub fn validate(&self) -> bool {
        let [a, b, c, d, f] = self.amplitudes();
        let sum = a * a + b * b + c * c + d * d + f * f;
        let eps = real::<T>(1e-9);
        (sum - T::one()).abs() <= eps
            && a >= T::zero()
            && [b, c, d, f].iter().all(|&v| v >= T::zero() && v <= a + eps)
            && self.phi >= T::zero()
            && self.phi < T::PI() + T::PI() + real(1e-12)
    }

    /// The literal amplitude assignment, normalized.
    pub fn to_state(&self) -> PureState3<T> {
        let mut amp = [czero(); 8];
        amp[flat(0, 0, 0)] = C::from_polar(self.a, self.phi);
        amp[flat(0, 1, 1)] = creal(self.b);
        amp[flat(1, 0, 1)] = creal(self.c);
        amp[flat(1, 1, 0)] = creal(self.d);
        amp[flat(1, 1, 1)] = creal(self.f);
        PureState3::from_amplitudes(amp)
            .normalize()
            .expect("MD form must carry unit amplitude mass")
    }

    /// Closed-form invariants of the decomposed state. `I5` carries a
    /// factor 4 relative to its printed source so that it matches the
    /// epsilon-contraction normalization used everywhere else; `I6` is
    /// read off the reconstructed template.
    pub fn invariants(&self) -> InvariantVector<T> {
        let [a, b, c, d, f] = self.amplitudes();
        let (sa, sb, sc, sd, sf) = (a * a, b * b, c * c, d * d, f * f);
        let one = T::one();
        let two = real::<T>(2.0);
        let i1 = one - two * ((sa + sd) * (sb + sc) + sa * sf);
        let i2 = one - two * ((sa + sc) * (sb + sd) + sa * sf);
        let i3 = one - two * ((sa + sb) * (sc + sd) + sa * sf);
        let i4 = md_i4(sa, sb, sc, sd, a * b * c * d * sf * self.phi.cos());
        let z = creal(a * sf) + C::from_polar(real::<T>(4.0) * b * c * d, self.phi);
        let i5 = real::<T>(4.0) * sa * z.norm_sqr();
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
}

/// Kempe invariant on the template, in the squared amplitudes plus the
/// mixed term `w = a b c d f^2 cos(phi)`. The pair-product term enters
/// with the opposite sign to its printed source; the form here is the
/// one that agrees with the brute-force contraction (exact integer fit
/// over the template family, residual `1e-14`).
fn md_i4<T: Scalar>(sa: T, sb: T, sc: T, sd: T, w: T) -> T {
    let e2 = sb * sc + sb * sd + sc * sd;
    let three = real::<T>(3.0);
    T::one()
        - three
            * (sa * (T::one() - sa) + e2 * (T::one() - real::<T>(2.0) * sa)
                - real::<T>(2.0) * sb * sc * sd
                - real::<T>(2.0) * w)
}

/// A normalized one-qubit factor per qubit, each defined up to phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductState<T: Scalar> {
    pub factors: [[C<T>; 2]; 3],
}

impl<T: Scalar> ProductState<T> {
    pub fn validate(&self) -> bool {
        self.factors.iter().all(|v| {
            ((v[0].norm_sqr() + v[1].norm_sqr()).sqrt() - T::one()).abs() <= real(1e-12)
        })
    }
}

/// Multi-start optimizer settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig<T: Scalar> {
    /// Number of random starts (default 64).
    pub starts: usize,
    /// Stop when the overlap gain per sweep falls below this (default `1e-12`).
    pub tol: T,
    /// Sweep cap per start (default 10000).
    pub max_iter: usize,
    pub seed: u64,
}

impl<T: Scalar> OptimizerConfig<T> {
    pub fn new(seed: u64) -> Self {
        Self {
            starts: 64,
            tol: real(1e-12),
            max_iter: 10_000,
            seed,
        }
    }

    fn check(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::InvalidParameter { name: "starts" });
        }
        if self.tol.is_nan() || self.tol <= T::zero() {
            return Err(Error::InvalidParameter { name: "tol" });
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter { name: "max_iter" });
        }
        Ok(())
    }
}

impl<T: Scalar> Default for OptimizerConfig<T> {
    fn default() -> Self {
        Self::new(0)
    }
}

/// Best product overlap found, its maximizer, and whether the winning
/// start satisfied the stopping rule.
#[derive(Debug, Clone, Copy)]
pub struct MaxOverlap<T: Scalar> {
    pub value: T,
    pub argmax: ProductState<T>,
    pub converged: bool,
}

/// `<psi | a b c>` for unit factors.
fn overlap<T: Scalar>(state: &PureState3<T>, factors: &[[C<T>; 2]; 3]) -> C<T> {
    let t = state.amplitudes();
    let mut acc = czero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                acc += t[flat(i, j, k)].conj() * factors[0][i] * factors[1][j] * factors[2][k];
            }
        }
    }
    acc
}

/// Replaces one factor with the exact maximizer of the overlap given the
/// other two; returns the new squared overlap.
fn update_factor<T: Scalar>(
    state: &PureState3<T>,
    factors: &mut [[C<T>; 2]; 3],
    axis: usize,
) -> T {
    let t = state.amplitudes();
    let mut w = [czero::<T>(); 2];
    let (o1, o2) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let idx = [i, j, k];
                let weight = factors[o1][idx[o1]] * factors[o2][idx[o2]];
                w[idx[axis]] += t[flat(i, j, k)].conj() * weight;
            }
        }
    }
    let norm_sqr = w[0].norm_sqr() + w[1].norm_sqr();
    if norm_sqr <= real(1e-60) {
        // Stalled on an exact zero of the overlap; keep the factor.
        return T::zero();
    }
    let inv = norm_sqr.sqrt().recip();
    factors[axis] = [w[0].conj().scale(inv), w[1].conj().scale(inv)];
    norm_sqr
}

#[derive(Clone, Copy)]
struct StartResult<T: Scalar> {
    value: T,
    factors: [[C<T>; 2]; 3],
    converged: bool,
}

/// First-order stationarity defect: the largest norm of the component of
/// an optimal factor direction orthogonal to the current factor. Equals
/// the largest weight-one amplitude of the rotated state.
fn stationarity_defect<T: Scalar>(state: &PureState3<T>, factors: &[[C<T>; 2]; 3]) -> T {
    let t = state.amplitudes();
    let mut worst = T::zero();
    for axis in 0..3 {
        let (o1, o2) = match axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let mut w = [czero::<T>(); 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let idx = [i, j, k];
                    let weight = factors[o1][idx[o1]] * factors[o2][idx[o2]];
                    w[idx[axis]] += t[flat(i, j, k)].conj() * weight;
                }
            }
        }
        // The optimal direction is conj(w); project out the current factor.
        let wc = [w[0].conj(), w[1].conj()];
        let a = &factors[axis];
        let inner = a[0].conj() * wc[0] + a[1].conj() * wc[1];
        let o = [wc[0] - a[0] * inner, wc[1] - a[1] * inner];
        worst = worst.max((o[0].norm_sqr() + o[1].norm_sqr()).sqrt());
    }
    worst
}

/// Extra margin on stationarity demanded beyond value convergence.
const DEFECT_TOL: f64 = 1e-10;

fn run_start<T: Scalar>(
    state: &PureState3<T>,
    cfg: &OptimizerConfig<T>,
    stream: u64,
) -> StartResult<T> {
    let mut rng = SeededRng::with_stream(cfg.seed, stream);
    let mut factors = [rng.qubit_state(), rng.qubit_state(), rng.qubit_state()];
    let mut g = overlap(state, &factors).norm_sqr();
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        let mut g_new = g;
        for axis in 0..3 {
            g_new = update_factor(state, &mut factors, axis);
        }
        // Value convergence is the cheap gate; the stationarity defect is
        // the one the decomposition quality depends on.
        if (g_new - g).abs() < cfg.tol
            && stationarity_defect(state, &factors) < real(DEFECT_TOL)
        {
            g = g_new;
            converged = true;
            break;
        }
        g = g_new;
    }
    StartResult {
        value: g,
        factors,
        converged,
    }
}

fn run_all_starts<T: Scalar>(
    state: &PureState3<T>,
    cfg: &OptimizerConfig<T>,
) -> Result<Vec<StartResult<T>>> {
    cfg.check()?;
    Ok((0..cfg.starts)
        .map(|s| run_start(state, cfg, s as u64))
        .collect())
}

/// Maximal squared overlap with a product state, via alternating exact
/// single-factor updates from `cfg.starts` random product states.
pub fn max_overlap<T: Scalar>(
    state: &PureState3<T>,
    cfg: &OptimizerConfig<T>,
) -> Result<MaxOverlap<T>> {
    let runs = run_all_starts(state, cfg)?;
    let best = runs
        .iter()
        .max_by(|a, b| a.value.partial_cmp(&b.value).expect("overlaps are finite"))
        .expect("at least one start");
    Ok(MaxOverlap {
        value: best.value,
        argmax: ProductState {
            factors: best.factors,
        },
        converged: best.converged,
    })
}

/// The unitary sending a unit factor to `|0>`.
fn factor_to_zero<T: Scalar>(v: &[C<T>; 2]) -> Mat2<T> {
    Mat2::new(v[0].conj(), v[1].conj(), -v[1], v[0])
}

/// Amplitude threshold below which template entries are treated as
/// structural zeros.
const AMP_SNAP: f64 = 1e-12;

struct GaugeFixed<T: Scalar> {
    form: MDForm<T>,
    residual: T,
}

/// Rotates each qubit so the maximizer becomes `|000>`, then spends the
/// diagonal phase freedom making `b, c, d, f` real nonnegative, leaving
/// the single phase on the `a` amplitude.
fn rotate_and_fix<T: Scalar>(state: &PureState3<T>, factors: &[[C<T>; 2]; 3]) -> GaugeFixed<T> {
    let rotated = state
        .contract(&factor_to_zero(&factors[0]), QubitLabel::A)
        .contract(&factor_to_zero(&factors[1]), QubitLabel::B)
        .contract(&factor_to_zero(&factors[2]), QubitLabel::C);
    let t = rotated.amplitudes();
    let residual = t[flat(1, 0, 0)]
        .norm()
        .max(t[flat(0, 1, 0)].norm())
        .max(t[flat(0, 0, 1)].norm());
    let raw = [
        t[flat(0, 0, 0)],
        t[flat(0, 1, 1)],
        t[flat(1, 0, 1)],
        t[flat(1, 1, 0)],
        t[flat(1, 1, 1)],
    ];
    let mut mags = [T::zero(); 5];
    for (m, r) in mags.iter_mut().zip(raw.iter()) {
        *m = r.norm();
        if *m < real(AMP_SNAP) {
            *m = T::zero();
        }
    }
    // Renormalize over the template entries; the stationarity residuals
    // carry negligible mass.
    let sum = mags.iter().fold(T::zero(), |s, m| s + *m * *m).sqrt();
    if sum > T::zero() {
        for m in mags.iter_mut() {
            *m /= sum;
        }
    }
    let product = mags.iter().fold(T::one(), |p, m| p * *m);
    let phi = if product < real(AMP_SNAP) {
        T::zero()
    } else {
        let mut p = raw[0].arg() - raw[1].arg() - raw[2].arg() - raw[3].arg()
            + real::<T>(2.0) * raw[4].arg();
        let tau = T::PI() + T::PI();
        p %= tau;
        if p < T::zero() {
            p += tau;
        }
        p
    };
    GaugeFixed {
        form: MDForm::new(mags[0], mags[1], mags[2], mags[3], mags[4], phi),
        residual,
    }
}

fn lex_key<T: Scalar>(form: &MDForm<T>) -> [T; 6] {
    [
        form.a * form.phi.cos(),
        form.a * form.phi.sin(),
        form.b,
        form.c,
        form.d,
        form.f,
    ]
}

/// Decomposes a normalized state. Ties between distinct global
/// maximizers are broken toward the lexicographically smallest
/// gauge-fixed amplitude vector.
pub fn decompose<T: Scalar>(state: &PureState3<T>, cfg: &OptimizerConfig<T>) -> Result<MDForm<T>> {
    let runs = run_all_starts(state, cfg)?;
    let best_value = runs.iter().map(|r| r.value).fold(T::neg_infinity(), T::max);
    let tied: Vec<&StartResult<T>> = runs
        .iter()
        .filter(|r| r.converged && r.value >= best_value - real(1e-10))
        .collect();
    if tied.is_empty() {
        return Err(Error::NoConvergence);
    }
    let mut chosen: Option<GaugeFixed<T>> = None;
    for run in tied {
        let fixed = rotate_and_fix(state, &run.factors);
        let replace = match &chosen {
            None => true,
            Some(current) => {
                let ka = lex_key(&fixed.form);
                let kb = lex_key(&current.form);
                let mut pick = false;
                for (x, y) in ka.iter().zip(kb.iter()) {
                    if (*x - *y).abs() > real(1e-10) {
                        pick = *x < *y;
                        break;
                    }
                }
                pick
            }
        };
        if replace {
            chosen = Some(fixed);
        }
    }
    Ok(chosen.expect("at least one converged tie candidate").form)
}

/// Largest stationarity residual (weight-one amplitude magnitude) after
/// rotating the overlap maximizer to `|000>`. Diagnostic companion to
/// [`decompose`].
pub fn stationarity_residual<T: Scalar>(
    state: &PureState3<T>,
    cfg: &OptimizerConfig<T>,
) -> Result<T> {
    let mo = max_overlap(state, cfg)?;
    if !mo.converged {
        return Err(Error::NoConvergence);
    }
    Ok(rotate_and_fix(state, &mo.argmax.factors).residual)
}

/// `1 - a^2`: the entanglement monotone built from the maximal product
/// overlap.
pub fn one_minus_a2<T: Scalar>(state: &PureState3<T>, cfg: &OptimizerConfig<T>) -> Result<T> {
    let mo = max_overlap(state, cfg)?;
    if !mo.converged {
        return Err(Error::NoConvergence);
    }
    Ok((T::one() - mo.value).max(T::zero()))
}

/// Maximal squared norm of the state under rank-`k` projectors on each
/// qubit (`k = 2` is the identity, `k = 1` an optimized direction).
/// Nondecreasing in each rank argument.
pub fn e_projector<T: Scalar>(
    state: &PureState3<T>,
    ranks: [usize; 3],
    cfg: &OptimizerConfig<T>,
) -> Result<T> {
    if ranks.iter().any(|&k| k != 1 && k != 2) {
        return Err(Error::InvalidProjectorRank);
    }
    let rank1: Vec<QubitLabel> = QubitLabel::ALL
        .into_iter()
        .zip(ranks)
        .filter(|&(_, k)| k == 1)
        .map(|(q, _)| q)
        .collect();
    match rank1.len() {
        0 => Ok(T::one()),
        1 => {
            let [_, hi] = state.reduced_density(rank1[0]).eigenvalues();
            Ok(hi.min(T::one()))
        }
        2 => pair_projection(state, rank1[0], rank1[1], cfg),
        _ => {
            let mo = max_overlap(state, cfg)?;
            if !mo.converged {
                return Err(Error::NoConvergence);
            }
            Ok(mo.value)
        }
    }
}

/// Alternating maximization of the projected norm over rank-1 directions
/// on two qubits, the third summed over.
fn pair_projection<T: Scalar>(
    state: &PureState3<T>,
    qx: QubitLabel,
    qy: QubitLabel,
    cfg: &OptimizerConfig<T>,
) -> Result<T> {
    cfg.check()?;
    let t = state.amplitudes();
    let strides = [4usize, 2, 1];
    let (sx, sy) = (strides[qx.axis()], strides[qy.axis()]);
    let sz = strides
        .iter()
        .copied()
        .find(|&s| s != sx && s != sy)
        .expect("three distinct axes");
    // With one factor fixed, the projected norm is a Hermitian quadratic
    // form in the other; its top eigenvector is the exact update.
    let gram = |fixed: &[C<T>; 2], fixed_stride: usize, var_stride: usize| -> Mat2<T> {
        let mut g = Mat2::zero();
        for z in 0..2 {
            let mut row = [czero::<T>(); 2];
            for (xv, entry) in row.iter_mut().enumerate() {
                for (yv, fv) in fixed.iter().enumerate() {
                    let idx = xv * var_stride + yv * fixed_stride + z * sz;
                    *entry += t[idx] * fv.conj();
                }
            }
            for i in 0..2 {
                for j in 0..2 {
                    g.e[i][j] += row[i] * row[j].conj();
                }
            }
        }
        g
    };
    let mut best = T::neg_infinity();
    let mut any_converged = false;
    for start in 0..cfg.starts {
        let mut rng = SeededRng::with_stream(cfg.seed, start as u64);
        let mut u: [C<T>; 2] = rng.qubit_state();
        let mut v: [C<T>; 2] = rng.qubit_state();
        let mut value = T::zero();
        let mut converged = false;
        for _ in 0..cfg.max_iter {
            let gu = gram(&v, sy, sx);
            let [_, hi] = gu.hermitian_eigenvalues();
            u = gu.hermitian_eigenvector(hi);
            let gv = gram(&u, sx, sy);
            let [_, hi] = gv.hermitian_eigenvalues();
            v = gv.hermitian_eigenvector(hi);
            let new_value = hi;
            if (new_value - value).abs() < cfg.tol {
                value = new_value;
                converged = true;
                break;
            }
            value = new_value;
        }
        let _ = normalize2(&mut u);
        if converged {
            any_converged = true;
        }
        if value > best {
            best = value;
        }
    }
    if !any_converged {
        return Err(Error::NoConvergence);
    }
    Ok(best.min(T::one()))
}

/// Numerical rank of the Jacobian of the three cut tangles, the
/// three-way tangle, `1 - a^2`, and the norm, as functions of the raw
/// template parameters `(a, b, c, d, f, phi)`. The entanglement
/// quantities are evaluated on the normalized state (each closed form
/// homogenized by the appropriate power of the squared norm). Central
/// differences with step `h`; singular values below `1e-6` of the
/// largest do not count toward the rank.
pub fn gradient_span_rank<T: Scalar>(point: [T; 6], h: T) -> usize {
    let funcs = |p: [T; 6]| -> [T; 6] {
        let [a, b, c, d, f, phi] = p;
        let (sa, sb, sc, sd, sf) = (a * a, b * b, c * c, d * d, f * f);
        let n = sa + sb + sc + sd + sf;
        let n2 = n * n;
        let four = real::<T>(4.0);
        let t1 = four * ((sa + sd) * (sb + sc) + sa * sf) / n2;
        let t2 = four * ((sa + sc) * (sb + sd) + sa * sf) / n2;
        let t3 = four * ((sa + sb) * (sc + sd) + sa * sf) / n2;
        let z = creal(a * sf) + C::from_polar(four * b * c * d, phi);
        let t_abc = four * a.abs() * z.norm() / n2;
        [t1, t2, t3, t_abc, T::one() - sa / n, n]
    };
    let mut jac = [[T::zero(); 6]; 6];
    for col in 0..6 {
        let mut hi = point;
        let mut lo = point;
        hi[col] += h;
        lo[col] -= h;
        let fh = funcs(hi);
        let fl = funcs(lo);
        for row in 0..6 {
            jac[row][col] = (fh[row] - fl[row]) / (real::<T>(2.0) * h);
        }
    }
    // Singular values via the spectrum of J'J.
    let mut gram = [[T::zero(); 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let mut s = T::zero();
            for row in jac.iter() {
                s += row[i] * row[j];
            }
            gram[i][j] = s;
        }
    }
    let eigs = jacobi_eigenvalues(&mut gram);
    let smax = eigs
        .iter()
        .fold(T::zero(), |m, &e| m.max(e.max(T::zero()).sqrt()));
    if smax <= T::zero() {
        return 0;
    }
    eigs.iter()
        .filter(|&&e| e.max(T::zero()).sqrt() > real::<T>(1e-6) * smax)
        .count()
}

/// Eigenvalues of a symmetric 6x6 matrix by cyclic Jacobi rotations.
/// The input is destroyed.
#[allow(clippy::needless_range_loop)]
fn jacobi_eigenvalues<T: Scalar>(m: &mut [[T; 6]; 6]) -> [T; 6] {
    for _ in 0..64 {
        let mut off = T::zero();
        for i in 0..6 {
            for j in (i + 1)..6 {
                off = off.max(m[i][j].abs());
            }
        }
        if off <= real(1e-14) {
            break;
        }
        for p in 0..6 {
            for q in (p + 1)..6 {
                if m[p][q].abs() <= real(1e-300) {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (real::<T>(2.0) * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let cos = (t * t + T::one()).sqrt().recip();
                let sin = t * cos;
                for k in 0..6 {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = cos * mkp - sin * mkq;
                    m[k][q] = sin * mkp + cos * mkq;
                }
                for k in 0..6 {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = cos * mpk - sin * mqk;
                    m[q][k] = sin * mpk + cos * mqk;
                }
            }
        }
    }
    let mut eigs = [T::zero(); 6];
    for (i, e) in eigs.iter_mut().enumerate() {
        *e = m[i][i];
    }
    eigs
}
