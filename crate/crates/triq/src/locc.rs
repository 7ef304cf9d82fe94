//! Transformation-probability bounds, entanglement classes, the Monte
//! Carlo monotonicity verifier, and the concave-function machinery that
//! generates new monotones from old ones.

use rayon::prelude::*;

use crate::invariants::{invariants, monotones, InvariantVector, MonotoneVector};
use crate::md::{one_minus_a2, OptimizerConfig};
use crate::sampling::SeededRng;
use crate::scalar::{real, Scalar};
use crate::state::{OutcomeIndex, PureState3, QubitLabel};

/// Entanglement class of a pure state at a fixed tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassLabel {
    FullyProduct,
    /// Qubit A factors out; B and C are entangled.
    BiseparableA,
    BiseparableB,
    BiseparableC,
    WClass,
    GHZClass,
}

impl ClassLabel {
    pub fn name(&self) -> &'static str {
        match self {
            ClassLabel::FullyProduct => "FullyProduct",
            ClassLabel::BiseparableA => "BiseparableA",
            ClassLabel::BiseparableB => "BiseparableB",
            ClassLabel::BiseparableC => "BiseparableC",
            ClassLabel::WClass => "WClass",
            ClassLabel::GHZClass => "GHZClass",
        }
    }
}

pub const DEFAULT_CLASS_TOL: f64 = 1e-9;

/// Sorts a state into its class. Product and biseparable tests run
/// before the W/GHZ split, since a vanishing three-way tangle on a
/// biseparable state says nothing about the split.
pub fn classify<T: Scalar>(state: &PureState3<T>, tol: T) -> ClassLabel {
    let m = monotones(state);
    let bip = [m.tau_bc_a, m.tau_ac_b, m.tau_ab_c];
    let zero = |v: T| v <= tol;
    if bip.iter().all(|&v| zero(v)) {
        return ClassLabel::FullyProduct;
    }
    if zero(m.tau_bc_a) {
        return ClassLabel::BiseparableA;
    }
    if zero(m.tau_ac_b) {
        return ClassLabel::BiseparableB;
    }
    if zero(m.tau_ab_c) {
        return ClassLabel::BiseparableC;
    }
    if m.tau_abc > tol {
        ClassLabel::GHZClass
    } else {
        ClassLabel::WClass
    }
}

/// Smaller eigenvalue of the one-qubit reduction: the bipartite-cut
/// monotone for qubit `x` against the rest.
pub fn e_k_cut<T: Scalar>(state: &PureState3<T>, x: QubitLabel) -> T {
    let [lo, _] = state.reduced_density(x).eigenvalues();
    lo.max(T::zero())
}

/// Ratio contributed by one monotone to a transformation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio<T: Scalar> {
    Constrained(T),
    /// The target value vanishes, so this monotone cannot bound the
    /// probability from above.
    Unconstrained,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry<T: Scalar> {
    pub name: &'static str,
    pub source: T,
    pub target: T,
    pub ratio: Ratio<T>,
}

/// Upper bound on the probability of transforming a source state into a
/// target state, monotone by monotone.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T: Scalar> {
    pub entries: Vec<BoundEntry<T>>,
    /// Minimum of the constrained ratios clamped to `[0, 1]`, or
    /// `Unconstrained` when no monotone constrains the pair.
    pub overall: Ratio<T>,
}

impl<T: Scalar> BoundReport<T> {
    /// The bound as a plain number; an unconstrained report caps at 1.
    pub fn effective(&self) -> T {
        match self.overall {
            Ratio::Constrained(v) => v,
            Ratio::Unconstrained => T::one(),
        }
    }
}

const VALUE_FLOOR: f64 = 1e-10;

fn bound_from_values<T: Scalar>(values: Vec<(&'static str, T, T)>) -> BoundReport<T> {
    let floor = real::<T>(VALUE_FLOOR);
    let mut entries = Vec::with_capacity(values.len());
    let mut overall: Option<T> = None;
    for (name, source, target) in values {
        let ratio = if target <= floor {
            Ratio::Unconstrained
        } else if source <= floor {
            Ratio::Constrained(T::zero())
        } else {
            Ratio::Constrained(source / target)
        };
        if let Ratio::Constrained(r) = ratio {
            let clamped = r.min(T::one()).max(T::zero());
            overall = Some(match overall {
                None => clamped,
                Some(cur) => cur.min(clamped),
            });
        }
        entries.push(BoundEntry {
            name,
            source,
            target,
            ratio,
        });
    }
    BoundReport {
        entries,
        overall: overall.map_or(Ratio::Unconstrained, Ratio::Constrained),
    }
}

fn standard_values<T: Scalar>(
    src: &PureState3<T>,
    dst: &PureState3<T>,
) -> Vec<(&'static str, T, T)> {
    let ms = monotones(src);
    let md = monotones(dst);
    let mut values = vec![
        ("tau_ab_c", ms.tau_ab_c, md.tau_ab_c),
        ("tau_ac_b", ms.tau_ac_b, md.tau_ac_b),
        ("tau_bc_a", ms.tau_bc_a, md.tau_bc_a),
        ("tau_abc", ms.tau_abc, md.tau_abc),
        ("sigma_abc", ms.sigma_abc, md.sigma_abc),
    ];
    for (name, q) in [
        ("e1_a", QubitLabel::A),
        ("e1_b", QubitLabel::B),
        ("e1_c", QubitLabel::C),
    ] {
        values.push((name, e_k_cut(src, q), e_k_cut(dst, q)));
    }
    values
}

/// Bound over the implemented monotone set: the three cut tangles, the
/// three-way tangle, `sigma`, and the three cut eigenvalue monotones.
pub fn transform_bound<T: Scalar>(src: &PureState3<T>, dst: &PureState3<T>) -> BoundReport<T> {
    bound_from_values(standard_values(src, dst))
}

/// Same bound with the product-overlap monotone `1 - a^2` included;
/// needs an optimizer configuration for the two maximizations.
pub fn transform_bound_with_md<T: Scalar>(
    src: &PureState3<T>,
    dst: &PureState3<T>,
    cfg: &OptimizerConfig<T>,
) -> crate::error::Result<BoundReport<T>> {
    let mut values = standard_values(src, dst);
    values.push((
        "one_minus_a2",
        one_minus_a2(src, cfg)?,
        one_minus_a2(dst, cfg)?,
    ));
    Ok(bound_from_values(values))
}

/// Built-in monotones accepted by the verifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotoneId {
    TauAbC,
    TauAcB,
    TauBcA,
    TauAbc,
    SigmaAbc,
    EkCutA,
    EkCutB,
    EkCutC,
}

impl MonotoneId {
    pub const ALL: [MonotoneId; 8] = [
        MonotoneId::TauAbC,
        MonotoneId::TauAcB,
        MonotoneId::TauBcA,
        MonotoneId::TauAbc,
        MonotoneId::SigmaAbc,
        MonotoneId::EkCutA,
        MonotoneId::EkCutB,
        MonotoneId::EkCutC,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MonotoneId::TauAbC => "tau_ab_c",
            MonotoneId::TauAcB => "tau_ac_b",
            MonotoneId::TauBcA => "tau_bc_a",
            MonotoneId::TauAbc => "tau_abc",
            MonotoneId::SigmaAbc => "sigma_abc",
            MonotoneId::EkCutA => "e1_a",
            MonotoneId::EkCutB => "e1_b",
            MonotoneId::EkCutC => "e1_c",
        }
    }

    /// Evaluates the monotone through its cheapest route.
    pub fn evaluate<T: Scalar>(&self, state: &PureState3<T>) -> T {
        let two = real::<T>(2.0);
        let purity = |q: QubitLabel| state.reduced_density(q).purity();
        match self {
            MonotoneId::TauAbC => (two * (T::one() - purity(QubitLabel::C))).max(T::zero()),
            MonotoneId::TauAcB => (two * (T::one() - purity(QubitLabel::B))).max(T::zero()),
            MonotoneId::TauBcA => (two * (T::one() - purity(QubitLabel::A))).max(T::zero()),
            MonotoneId::TauAbc => {
                two * crate::invariants::i5_epsilon(state).max(T::zero()).sqrt()
            }
            MonotoneId::SigmaAbc => {
                let m = monotones_fast(state);
                m.sigma_abc
            }
            MonotoneId::EkCutA => e_k_cut(state, QubitLabel::A),
            MonotoneId::EkCutB => e_k_cut(state, QubitLabel::B),
            MonotoneId::EkCutC => e_k_cut(state, QubitLabel::C),
        }
    }
}

/// Monotone vector without the sign invariant, for the Monte Carlo loop.
fn monotones_fast<T: Scalar>(state: &PureState3<T>) -> MonotoneVector<T> {
    let i1 = state.reduced_density(QubitLabel::C).purity();
    let i2 = state.reduced_density(QubitLabel::B).purity();
    let i3 = state.reduced_density(QubitLabel::A).purity();
    let sigma = crate::invariants::Permutation::from_cycles(3, &[&[1, 2, 3]]).expect("static");
    let tau = crate::invariants::Permutation::from_cycles(3, &[&[1, 3, 2]]).expect("static");
    let i4 = crate::invariants::poly_invariant_paired(state, &sigma, &tau).re;
    let i5 = crate::invariants::i5_epsilon(state);
    MonotoneVector::from_invariants(&InvariantVector {
        i1,
        i2,
        i3,
        i4,
        i5,
        i6: 1,
        i6_degenerate: true,
    })
}

/// What the verifier should test.
pub enum Monotone<'a, T: Scalar> {
    Id(MonotoneId),
    /// A built-in monotone raised to a power; exponents just above one
    /// break concavity and are the standard negative control.
    Power(MonotoneId, T),
    /// Any function of the invariant vector.
    Custom(&'a (dyn Fn(&InvariantVector<T>) -> T + Sync)),
}

impl<T: Scalar> Monotone<'_, T> {
    fn evaluate(&self, state: &PureState3<T>) -> T {
        match self {
            Monotone::Id(id) => id.evaluate(state),
            Monotone::Power(id, p) => id.evaluate(state).max(T::zero()).powf(*p),
            Monotone::Custom(f) => f(&invariants(state)),
        }
    }
}

/// Outcome of a Monte Carlo monotonicity run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViolationReport<T: Scalar> {
    pub trials: u64,
    /// Trials where the averaged post-measurement value exceeded the
    /// input value by more than `1e-9`.
    pub violations: u64,
    /// Most negative value of `E(input) - sum_k p_k E(outcome_k)` seen.
    pub worst_margin: T,
    pub seed: u64,
}

const VIOLATION_MARGIN: f64 = 1e-9;

/// How the verifier draws its trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialEnsemble {
    /// Uniform states with Haar-isometry measurements: the classic
    /// random-state experiment.
    Haar,
    /// Alternates Haar trials with trials aimed at the biseparable
    /// boundary: states pushed toward a product form by random local
    /// filters, measured gently and nearly along a qubit's eigenbasis.
    /// Functions that fail monotonicity only near the boundary (fractional
    /// powers of tangles, and the sigma combination) are invisible to the
    /// Haar ensemble but show up here.
    BoundaryBiased,
}

/// One boundary-aimed trial: filter each qubit toward `|0>`-dominance by
/// a random amount, then measure a random qubit with strengths near the
/// identity and an axis jittered around its reduced eigenbasis.
fn boundary_trial<T: Scalar>(
    rng: &mut SeededRng,
) -> (PureState3<T>, crate::state::KrausPair<T>) {
    let mut state: PureState3<T> = rng.state();
    for q in QubitLabel::ALL {
        let eps = real::<T>(10f64.powf(-3.0 * rng.uniform()));
        let filter = crate::mat2::Mat2::diag(T::one(), eps);
        if let Ok(next) = state.contract(&filter, q).normalize() {
            state = next;
        }
    }
    let qubit = rng.qubit_label();
    let rho = state.reduced_density(qubit);
    let [_, hi] = rho.matrix().hermitian_eigenvalues();
    let v1 = rho.matrix().hermitian_eigenvector(hi);
    let v2 = [-v1[1].conj(), v1[0].conj()];
    let basis = crate::mat2::Mat2::new(v1[0], v2[0], v1[1], v2[1]);
    let delta = real::<T>((rng.uniform() - 0.5) * 0.1);
    let jitter = crate::mat2::Mat2::new(
        crate::scalar::creal(delta.cos()),
        crate::scalar::creal(-delta.sin()),
        crate::scalar::creal(delta.sin()),
        crate::scalar::creal(delta.cos()),
    );
    let axis = basis.mul(&jitter);
    let strength = real::<T>(rng.uniform() * 0.9);
    let split = real::<T>(rng.uniform());
    let x2 = T::one() - strength;
    let y2 = T::one() - strength * split;
    let d1 = crate::mat2::Mat2::diag(x2.max(T::zero()).sqrt(), y2.max(T::zero()).sqrt());
    let d2 = crate::mat2::Mat2::diag(
        (T::one() - x2).max(T::zero()).sqrt(),
        (T::one() - y2).max(T::zero()).sqrt(),
    );
    let adj = axis.adjoint();
    let kraus = crate::state::KrausPair::new_unchecked(d1.mul(&adj), d2.mul(&adj), qubit);
    (state, kraus)
}

/// One trial: a state, a qubit, and a two-outcome measurement drawn from
/// the ensemble; returns the monotonicity margin.
fn trial_margin<T: Scalar>(
    m: &Monotone<'_, T>,
    ensemble: TrialEnsemble,
    seed: u64,
    trial: u64,
) -> T {
    let mut rng = SeededRng::with_stream(seed, trial);
    let (state, kraus) = match ensemble {
        TrialEnsemble::BoundaryBiased if trial % 2 == 1 => boundary_trial(&mut rng),
        _ => {
            let state: PureState3<T> = rng.state();
            let qubit = rng.qubit_label();
            let kraus = rng.kraus_pair(qubit);
            (state, kraus)
        }
    };
    let before = m.evaluate(&state);
    let mut after = T::zero();
    for which in OutcomeIndex::BOTH {
        // Outcomes below the probability floor contribute nothing.
        if let Ok((outcome, p)) = state.apply_kraus(&kraus, which) {
            after += p * m.evaluate(&outcome);
        }
    }
    before - after
}

/// Runs `trials` seeded measurement trials against the monotonicity
/// inequality over the Haar ensemble. Deterministic for a fixed seed:
/// every trial draws from its own substream, so the count is independent
/// of scheduling.
pub fn verify_monotone<T: Scalar>(
    m: &Monotone<'_, T>,
    trials: u64,
    seed: u64,
) -> ViolationReport<T> {
    verify_monotone_with(m, trials, seed, TrialEnsemble::Haar)
}

/// [`verify_monotone`] with an explicit trial ensemble.
pub fn verify_monotone_with<T: Scalar>(
    m: &Monotone<'_, T>,
    trials: u64,
    seed: u64,
    ensemble: TrialEnsemble,
) -> ViolationReport<T> {
    let (violations, worst) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let margin = trial_margin(m, ensemble, seed, t);
            (
                u64::from(margin < -real::<T>(VIOLATION_MARGIN)),
                margin,
            )
        })
        .reduce(
            || (0u64, T::infinity()),
            |a, b| (a.0 + b.0, a.1.min(b.1)),
        );
    ViolationReport {
        trials,
        violations,
        worst_margin: if trials == 0 { T::zero() } else { worst },
        seed,
    }
}

/// Points in the nonnegative orthant with cached function values.
#[derive(Debug, Clone)]
pub struct FTypeSample<T: Scalar> {
    pub points: Vec<Vec<T>>,
    pub values: Vec<T>,
}

impl<T: Scalar> FTypeSample<T> {
    /// Evaluates `f` over the given points; every coordinate must be
    /// nonnegative and all points share one dimension.
    pub fn evaluate(
        f: &dyn Fn(&[T]) -> T,
        points: Vec<Vec<T>>,
    ) -> crate::error::Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(crate::error::Error::InvalidParameter { name: "points" });
        }
        for p in &points {
            if p.len() != dim || p.iter().any(|v| *v < T::zero() || !v.is_finite()) {
                return Err(crate::error::Error::InvalidParameter { name: "points" });
            }
        }
        let values = points.iter().map(|p| f(p)).collect();
        Ok(Self { points, values })
    }

    /// Random sample of `count` points with coordinates in `[0, scale]`.
    pub fn random_points(rng: &mut SeededRng, dim: usize, count: usize, scale: T) -> Vec<Vec<T>> {
        (0..count)
            .map(|_| {
                (0..dim)
                    .map(|_| {
                        let g: T = {
                            let s: PureState3<T> = rng.state();
                            s.amplitudes()[0].norm_sqr()
                        };
                        (g * real::<T>(4.0)).min(T::one()) * scale
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FTypeViolation {
    /// `f(0) != 0`.
    Origin,
    /// Coordinate-wise dominance not respected.
    Monotonicity,
    /// A convex combination fell below the chord.
    Concavity,
}

#[derive(Debug, Clone)]
pub struct FTypeWitness<T: Scalar> {
    pub kind: FTypeViolation,
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub p: T,
}

#[derive(Debug, Clone)]
pub struct FTypeReport<T: Scalar> {
    pub passed: bool,
    pub witness: Option<FTypeWitness<T>>,
}

const FTYPE_TOL: f64 = 1e-10;

/// Checks the three defining properties (zero at the origin,
/// coordinate-wise monotonicity, concavity) on every sampled pair and a
/// grid of mixing weights. Returns the first witness on failure.
pub fn check_f_type<T: Scalar>(f: &dyn Fn(&[T]) -> T, sample: &FTypeSample<T>) -> FTypeReport<T> {
    let tol = real::<T>(FTYPE_TOL);
    let dim = sample.points.first().map_or(0, Vec::len);
    let origin = vec![T::zero(); dim];
    if f(&origin).abs() > tol {
        return FTypeReport {
            passed: false,
            witness: Some(FTypeWitness {
                kind: FTypeViolation::Origin,
                x: origin.clone(),
                y: origin,
                p: T::zero(),
            }),
        };
    }
    let ps = [real::<T>(0.25), real::<T>(0.5), real::<T>(0.75)];
    for (i, x) in sample.points.iter().enumerate() {
        for (j, y) in sample.points.iter().enumerate() {
            if i == j {
                continue;
            }
            let dominates = x.iter().zip(y.iter()).all(|(a, b)| a >= b);
            if dominates && sample.values[i] < sample.values[j] - tol {
                return FTypeReport {
                    passed: false,
                    witness: Some(FTypeWitness {
                        kind: FTypeViolation::Monotonicity,
                        x: x.clone(),
                        y: y.clone(),
                        p: T::one(),
                    }),
                };
            }
            if i < j {
                for &p in &ps {
                    let mix: Vec<T> = x
                        .iter()
                        .zip(y.iter())
                        .map(|(a, b)| p * *a + (T::one() - p) * *b)
                        .collect();
                    let lhs = f(&mix);
                    let rhs = p * sample.values[i] + (T::one() - p) * sample.values[j];
                    if lhs < rhs - tol {
                        return FTypeReport {
                            passed: false,
                            witness: Some(FTypeWitness {
                                kind: FTypeViolation::Concavity,
                                x: x.clone(),
                                y: y.clone(),
                                p,
                            }),
                        };
                    }
                }
            }
        }
    }
    // Concavity along rays through the origin, which the ratio bound
    // leans on directly.
    for (x, value) in sample.points.iter().zip(sample.values.iter()) {
        for &p in &ps {
            let scaled: Vec<T> = x.iter().map(|a| p * *a).collect();
            if f(&scaled) < p * *value - tol {
                return FTypeReport {
                    passed: false,
                    witness: Some(FTypeWitness {
                        kind: FTypeViolation::Concavity,
                        x: x.clone(),
                        y: vec![T::zero(); x.len()],
                        p,
                    }),
                };
            }
        }
    }
    FTypeReport {
        passed: true,
        witness: None,
    }
}

#[derive(Debug, Clone)]
pub struct RatioWitness<T: Scalar> {
    pub x: Vec<T>,
    pub y: Vec<T>,
    pub ratio: T,
    pub bound: T,
}

#[derive(Debug, Clone)]
pub struct RatioReport<T: Scalar> {
    pub checked: usize,
    pub failures: Vec<RatioWitness<T>>,
}

/// Verifies `f(x)/f(y) >= min(min_i x_i/y_i, 1)` on the given pairs.
/// Pairs with `f(y)` below `1e-12` are skipped. A failure falsifies the
/// concavity certification of `f`, not the bound itself.
pub fn ratio_property<T: Scalar>(
    f: &dyn Fn(&[T]) -> T,
    pairs: &[(Vec<T>, Vec<T>)],
) -> RatioReport<T> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for (x, y) in pairs {
        let fy = f(y);
        if fy <= real(1e-12) {
            continue;
        }
        checked += 1;
        let mut bound = T::one();
        for (a, b) in x.iter().zip(y.iter()) {
            if *b > T::zero() {
                bound = bound.min(*a / *b);
            }
        }
        let ratio = f(x) / fy;
        if ratio < bound - real::<T>(1e-9) {
            failures.push(RatioWitness {
                x: x.clone(),
                y: y.clone(),
                ratio,
                bound,
            });
        }
    }
    RatioReport { checked, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::LocalUnitary;

    type S = PureState3<f64>;

    #[test]
    fn cut_monotone_reference_values() {
        for q in QubitLabel::ALL {
            assert!(e_k_cut(&S::basis(0, 0, 0), q).abs() < 1e-12);
            assert!((e_k_cut(&S::ghz(), q) - 0.5).abs() < 1e-12);
        }
        assert!((e_k_cut(&S::w(), QubitLabel::A) - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn classify_reference_states() {
        let tol = real(DEFAULT_CLASS_TOL);
        assert_eq!(classify(&S::basis(0, 0, 0), tol), ClassLabel::FullyProduct);
        assert_eq!(classify(&S::ghz(), tol), ClassLabel::GHZClass);
        assert_eq!(classify(&S::w(), tol), ClassLabel::WClass);
    }

    #[test]
    fn classify_biseparable_states() {
        use crate::scalar::{creal, czero};
        let h = 0.5f64.sqrt();
        let tol = real(DEFAULT_CLASS_TOL);
        // |0>_A times a BC Bell pair.
        let mut amp = [czero(); 8];
        amp[crate::state::flat(0, 0, 0)] = creal(h);
        amp[crate::state::flat(0, 1, 1)] = creal(h);
        let s = S::from_amplitudes(amp).normalize().unwrap();
        assert_eq!(classify(&s, tol), ClassLabel::BiseparableA);
        // |0>_B times an AC Bell pair.
        let mut amp = [czero(); 8];
        amp[crate::state::flat(0, 0, 0)] = creal(h);
        amp[crate::state::flat(1, 0, 1)] = creal(h);
        let s = S::from_amplitudes(amp).normalize().unwrap();
        assert_eq!(classify(&s, tol), ClassLabel::BiseparableB);
        // |0>_C times an AB Bell pair.
        let mut amp = [czero(); 8];
        amp[crate::state::flat(0, 0, 0)] = creal(h);
        amp[crate::state::flat(1, 1, 0)] = creal(h);
        let s = S::from_amplitudes(amp).normalize().unwrap();
        assert_eq!(classify(&s, tol), ClassLabel::BiseparableC);
    }

    #[test]
    fn classify_is_lu_invariant() {
        let mut rng = SeededRng::new(50);
        let tol = real(DEFAULT_CLASS_TOL);
        for state in [S::ghz(), S::w(), S::basis(1, 0, 1)] {
            let label = classify(&state, tol);
            for _ in 0..20 {
                let u = LocalUnitary::new(rng.haar_unitary(), rng.qubit_label()).unwrap();
                assert_eq!(classify(&state.apply_unitary(&u), tol), label);
            }
        }
    }

    #[test]
    fn bound_w_to_ghz_is_zero() {
        let report = transform_bound(&S::w(), &S::ghz());
        assert_eq!(report.overall, Ratio::Constrained(0.0));
        let tangle = report
            .entries
            .iter()
            .find(|e| e.name == "tau_abc")
            .unwrap();
        assert_eq!(tangle.ratio, Ratio::Constrained(0.0));
    }

    #[test]
    fn bound_of_state_onto_itself_is_one() {
        let mut rng = SeededRng::new(51);
        for _ in 0..20 {
            let s: S = rng.state();
            let report = transform_bound(&s, &s);
            assert!((report.effective() - 1.0).abs() < 1e-12);
        }
        // Product onto product: nothing constrains, which caps at one.
        let report = transform_bound(&S::basis(0, 0, 0), &S::basis(1, 1, 1));
        assert_eq!(report.overall, Ratio::Unconstrained);
        assert!((report.effective() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sigma_bites_on_ghz_to_w() {
        let report = transform_bound(&S::ghz(), &S::w());
        // Every tangle ratio is at least one or unconstrained.
        for e in &report.entries {
            if e.name.starts_with("tau") {
                match e.ratio {
                    Ratio::Constrained(r) => assert!(r >= 1.0 - 1e-12, "{}: {r}", e.name),
                    Ratio::Unconstrained => {}
                }
            }
        }
        // The fifth monotone still forces the bound below one.
        let sigma = report
            .entries
            .iter()
            .find(|e| e.name == "sigma_abc")
            .unwrap();
        match sigma.ratio {
            Ratio::Constrained(r) => assert!((r - 567.0 / 568.0).abs() < 1e-12),
            Ratio::Unconstrained => panic!("sigma must constrain"),
        }
        match report.overall {
            Ratio::Constrained(v) => {
                assert!(v < 1.0);
                assert!((v - 567.0 / 568.0).abs() < 1e-12);
            }
            Ratio::Unconstrained => panic!("overall must constrain"),
        }
    }

    #[test]
    fn bound_with_md_includes_overlap_monotone() {
        let cfg = OptimizerConfig::new(52);
        let report = transform_bound_with_md(&S::ghz(), &S::w(), &cfg).unwrap();
        let entry = report
            .entries
            .iter()
            .find(|e| e.name == "one_minus_a2")
            .unwrap();
        assert!((entry.source - 0.5).abs() < 1e-9);
        assert!((entry.target - 5.0 / 9.0).abs() < 1e-9);
    }

    #[test]
    fn builtin_monotones_match_invariant_route() {
        let mut rng = SeededRng::new(53);
        for _ in 0..20 {
            let s: S = rng.state();
            let m = monotones(&s);
            assert!((MonotoneId::TauAbC.evaluate(&s) - m.tau_ab_c).abs() < 1e-12);
            assert!((MonotoneId::TauAcB.evaluate(&s) - m.tau_ac_b).abs() < 1e-12);
            assert!((MonotoneId::TauBcA.evaluate(&s) - m.tau_bc_a).abs() < 1e-12);
            assert!((MonotoneId::TauAbc.evaluate(&s) - m.tau_abc).abs() < 1e-12);
            assert!((MonotoneId::SigmaAbc.evaluate(&s) - m.sigma_abc).abs() < 1e-12);
        }
    }

    #[test]
    fn verifier_is_deterministic() {
        let a = verify_monotone(&Monotone::<f64>::Id(MonotoneId::SigmaAbc), 500, 7);
        let b = verify_monotone(&Monotone::<f64>::Id(MonotoneId::SigmaAbc), 500, 7);
        assert_eq!(a, b);
    }

    #[test]
    fn primary_monotones_hold_on_small_runs() {
        for id in [
            MonotoneId::TauAbC,
            MonotoneId::TauAbc,
            MonotoneId::SigmaAbc,
            MonotoneId::EkCutA,
        ] {
            let report = verify_monotone(&Monotone::<f64>::Id(id), 2000, 11);
            assert_eq!(report.violations, 0, "{}", id.name());
            assert!(report.worst_margin > -1e-9);
        }
    }

    #[test]
    fn tangles_survive_the_boundary_ensemble() {
        for id in [
            MonotoneId::TauAbC,
            MonotoneId::TauAcB,
            MonotoneId::TauBcA,
            MonotoneId::TauAbc,
            MonotoneId::EkCutB,
        ] {
            let report = verify_monotone_with(
                &Monotone::<f64>::Id(id),
                4000,
                19,
                TrialEnsemble::BoundaryBiased,
            );
            assert_eq!(report.violations, 0, "{}", id.name());
        }
    }

    #[test]
    fn power_control_is_violated() {
        // x^1.01 fails concavity only where the tangle is small; the
        // Haar ensemble never lands there, the boundary ensemble does.
        let report = verify_monotone_with(
            &Monotone::<f64>::Power(MonotoneId::TauAbC, 1.01),
            5000,
            13,
            TrialEnsemble::BoundaryBiased,
        );
        assert!(report.violations > 0);
        assert!(report.worst_margin < -1e-9);
    }

    /// Frozen witness: the sigma combination decreases on average under a
    /// specific gentle measurement near the biseparable boundary, so it
    /// fails the monotonicity inequality outright. Margins are six orders
    /// of magnitude above both round-off and the violation threshold, and
    /// two independent invariant routes agree on them.
    #[test]
    fn sigma_counterexample_is_pinned() {
        use crate::mat2::Mat2;
        use crate::scalar::C;
        let amps: [[f64; 2]; 8] = [
            [-5.250_827_519_414_427e-1, 3.360_687_664_011_465e-1],
            [-6.569_031_290_343_633e-2, -2.548_327_719_437_738e-1],
            [-6.056_794_279_766_172e-2, -1.935_997_203_753_353e-2],
            [3.253_623_755_511_868e-2, 3.686_508_266_670_450_3e-3],
            [-1.201_697_040_351_599_2e-1, 1.475_790_804_246_991e-1],
            [1.184_574_630_934_794_2e-1, 6.733_408_827_068_043e-1],
            [-1.168_188_714_113_690_3e-1, -1.297_716_425_773_743_4e-1],
            [4.812_687_955_726_368e-2, 2.305_353_732_167_209_8e-2],
        ];
        let mut raw = [C::new(0.0f64, 0.0); 8];
        for (slot, [re, im]) in raw.iter_mut().zip(amps) {
            *slot = C::new(re, im);
        }
        let state = S::from_amplitudes(raw).normalize().unwrap();
        let a1 = Mat2::new(
            C::new(0.9782212034959502, -0.0016015694146365575),
            C::new(0.0760897619105262, -0.04412214470970548),
            C::new(-0.07745434415517884, -0.04491342455807269),
            C::new(0.9957644741294287, 0.001630291717505131),
        );
        let a2 = Mat2::new(
            C::new(0.18724514883222812, -0.000306562669401398),
            C::new(0.014564639104762836, -0.008445592391005775),
            C::new(-0.0016140481230940674, -0.0009359375435991881),
            C::new(0.02075044076665766, 3.397316593970563e-5),
        );
        let kraus = crate::state::KrausPair::new(a1, a2, QubitLabel::B).unwrap();
        let sigma_poly = |s: &S| {
            let iv = invariants(s);
            3.0 - (iv.i1 + iv.i2 + iv.i3) * iv.i4
        };
        let sigma_dd = |s: &S| {
            let iv = crate::dd::decompose(s).unwrap().invariants();
            3.0 - (iv.i1 + iv.i2 + iv.i3) * iv.i4
        };
        let mut margin_poly = sigma_poly(&state);
        let mut margin_dd = sigma_dd(&state);
        let mut p_sum = 0.0;
        for which in OutcomeIndex::BOTH {
            let (out, p) = state.apply_kraus(&kraus, which).unwrap();
            margin_poly -= p * sigma_poly(&out);
            margin_dd -= p * sigma_dd(&out);
            p_sum += p;
        }
        assert!((p_sum - 1.0).abs() < 1e-12);
        assert!((margin_poly - margin_dd).abs() < 1e-9);
        assert!(
            margin_poly < -5e-6,
            "sigma must increase on average here: {margin_poly:.3e}"
        );
    }

    #[test]
    fn custom_monotone_route() {
        // sigma expressed as a custom function of the invariants.
        let f = |iv: &InvariantVector<f64>| 3.0 - (iv.i1 + iv.i2 + iv.i3) * iv.i4;
        let report = verify_monotone(&Monotone::Custom(&f), 500, 17);
        assert_eq!(report.violations, 0);
    }

    fn sample_for<F: Fn(&[f64]) -> f64>(f: &F, dim: usize, seed: u64) -> FTypeSample<f64> {
        let mut rng = SeededRng::new(seed);
        let points = FTypeSample::random_points(&mut rng, dim, 24, 1.0);
        FTypeSample::evaluate(f, points).unwrap()
    }

    #[test]
    fn f_type_accepts_reference_functions() {
        let identity = |x: &[f64]| x[0];
        let sample = sample_for(&identity, 1, 60);
        assert!(check_f_type(&identity, &sample).passed);

        let min2 = |x: &[f64]| x[0].min(x[1]);
        let sample = sample_for(&min2, 2, 61);
        assert!(check_f_type(&min2, &sample).passed);

        let linear = |x: &[f64]| 0.7 * x[0] + 1.3 * x[1];
        let sample = sample_for(&linear, 2, 62);
        assert!(check_f_type(&linear, &sample).passed);

        let geo = |x: &[f64]| (x[0] * x[1]).max(0.0).sqrt();
        let sample = sample_for(&geo, 2, 63);
        assert!(check_f_type(&geo, &sample).passed);
    }

    #[test]
    fn f_type_rejects_square() {
        let square = |x: &[f64]| x[0] * x[0];
        let sample = sample_for(&square, 1, 64);
        let report = check_f_type(&square, &sample);
        assert!(!report.passed);
        assert_eq!(report.witness.unwrap().kind, FTypeViolation::Concavity);
    }

    #[test]
    fn ratio_property_reference_cases() {
        let min2 = |x: &[f64]| x[0].min(x[1]);
        let report = ratio_property(&min2, &[(vec![0.5, 0.9], vec![1.0, 1.0])]);
        assert_eq!(report.checked, 1);
        assert!(report.failures.is_empty());

        let linear = |x: &[f64]| 2.0 * x[0] + 3.0 * x[1];
        let mut rng = SeededRng::new(65);
        let xs = FTypeSample::<f64>::random_points(&mut rng, 2, 40, 1.0);
        let ys = FTypeSample::<f64>::random_points(&mut rng, 2, 40, 1.0);
        let pairs: Vec<_> = xs.into_iter().zip(ys).collect();
        let report = ratio_property(&linear, &pairs);
        assert!(report.checked > 0);
        assert!(report.failures.is_empty());

        let geo = |x: &[f64]| (x[0] * x[1]).max(0.0).sqrt();
        let mut rng = SeededRng::new(66);
        let xs = FTypeSample::<f64>::random_points(&mut rng, 2, 50, 1.0);
        let ys = FTypeSample::<f64>::random_points(&mut rng, 2, 50, 1.0);
        let pairs: Vec<_> = xs.into_iter().zip(ys).collect();
        let report = ratio_property(&geo, &pairs);
        assert!(report.checked > 0);
        assert!(report.failures.is_empty());
    }

    #[test]
    fn composed_monotones_never_improve_the_bound() {
        // Theorem-2 style corollary: min over concave compositions of the
        // monotone vector never undercuts the raw overall bound.
        let mut rng = SeededRng::new(67);
        for trial in 0..20u64 {
            let src: S = rng.state();
            let dst: S = rng.state();
            let raw = transform_bound(&src, &dst).effective();
            let ms = monotones(&src).as_array().to_vec();
            let md = monotones(&dst).as_array().to_vec();
            let mut frng = SeededRng::new(900 + trial);
            for _ in 0..5 {
                let weights: Vec<Vec<f64>> = (0..3)
                    .map(|_| {
                        (0..5)
                            .map(|_| {
                                0.1 + frng.state::<f64>().amplitudes()[0].norm_sqr() * 2.0
                            })
                            .collect()
                    })
                    .collect();
                let f = |x: &[f64]| -> f64 {
                    weights
                        .iter()
                        .map(|w| w.iter().zip(x).map(|(wi, xi)| wi * xi).sum::<f64>())
                        .fold(f64::INFINITY, f64::min)
                };
                let fd = f(&md);
                if fd <= 1e-12 {
                    continue;
                }
                let ratio = (f(&ms) / fd).min(1.0);
                assert!(ratio >= raw - 1e-9, "ratio {ratio} raw {raw}");
            }
        }
    }
}
