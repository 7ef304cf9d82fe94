//! Command-line interface: invariants, canonical decompositions,
//! measurement propagation, transformation bounds, classification, and
//! the Monte Carlo monotonicity verifier, all with seeded determinism
//! and byte-stable JSON reports.

mod io;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use io::{CliError, SCHEMA};
use triq::dd::{self, MeasurementOutcome, MeasurementParams};
use triq::invariants::{invariants, monotones};
use triq::locc::{
    classify, transform_bound, transform_bound_with_md, verify_monotone_with, BoundReport,
    Monotone, MonotoneId, Ratio, TrialEnsemble, DEFAULT_CLASS_TOL,
};
use triq::md::{self, OptimizerConfig};
use triq::sampling::SeededRng;
use triq::state::{OutcomeIndex, QubitLabel};
use triq::State64;

#[derive(Parser)]
#[command(
    name = "triq",
    about = "Invariants, canonical decompositions, and entanglement monotones of three-qubit pure states",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum QubitArg {
    A,
    B,
    C,
}

impl From<QubitArg> for QubitLabel {
    fn from(q: QubitArg) -> Self {
        match q {
            QubitArg::A => QubitLabel::A,
            QubitArg::B => QubitLabel::B,
            QubitArg::C => QubitLabel::C,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MonotoneArg {
    #[value(name = "tau-ab-c")]
    TauAbC,
    #[value(name = "tau-ac-b")]
    TauAcB,
    #[value(name = "tau-bc-a")]
    TauBcA,
    #[value(name = "tau-abc")]
    TauAbc,
    #[value(name = "sigma-abc", alias = "sigma")]
    SigmaAbc,
    #[value(name = "e1-a")]
    EkCutA,
    #[value(name = "e1-b")]
    EkCutB,
    #[value(name = "e1-c")]
    EkCutC,
}

impl From<MonotoneArg> for MonotoneId {
    fn from(m: MonotoneArg) -> Self {
        match m {
            MonotoneArg::TauAbC => MonotoneId::TauAbC,
            MonotoneArg::TauAcB => MonotoneId::TauAcB,
            MonotoneArg::TauBcA => MonotoneId::TauBcA,
            MonotoneArg::TauAbc => MonotoneId::TauAbc,
            MonotoneArg::SigmaAbc => MonotoneId::SigmaAbc,
            MonotoneArg::EkCutA => MonotoneId::EkCutA,
            MonotoneArg::EkCutB => MonotoneId::EkCutB,
            MonotoneArg::EkCutC => MonotoneId::EkCutC,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EnsembleArg {
    /// Uniform states, Haar-isometry measurements (the classic experiment).
    Haar,
    /// Alternate Haar trials with boundary-aimed trials.
    Boundary,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants I1..I6 and the monotone vector of a state.
    Invariants {
        /// State file; "-" reads stdin.
        state: String,
    },
    /// Diagonalization decomposition of a state, or the two coefficient
    /// branches recovered from an invariant file.
    Dd {
        /// State file; "-" reads stdin. Ignored with --from-invariants.
        state: Option<String>,
        /// Invert an invariant vector instead of decomposing a state.
        #[arg(long, value_name = "IV_FILE")]
        from_invariants: Option<String>,
    },
    /// Maximization decomposition via multi-start alternating optimization.
    Md {
        /// State file; "-" reads stdin.
        state: String,
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Two-outcome measurement propagated in decomposition coordinates,
    /// cross-checked against the tensor route.
    Measure {
        /// State file; "-" reads stdin.
        state: String,
        #[arg(long, value_enum, default_value = "a")]
        qubit: QubitArg,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
    },
    /// Transformation-probability upper bound between two states.
    Bound {
        source: String,
        target: String,
        /// Also include the product-overlap monotone 1 - a^2.
        #[arg(long)]
        with_md: bool,
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Entanglement class of a state.
    Classify {
        state: String,
        #[arg(long, default_value_t = DEFAULT_CLASS_TOL)]
        tol: f64,
    },
    /// Monte Carlo monotonicity verification.
    Verify {
        #[arg(long, value_enum)]
        monotone: MonotoneArg,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Raise the monotone to this power (1.01 is the classic
        /// negative control).
        #[arg(long)]
        power: Option<f64>,
        #[arg(long, value_enum, default_value = "haar")]
        ensemble: EnsembleArg,
    },
    /// Seeded random states written as state files.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Output directory; required when count exceeds one.
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() {
    // Optional worker cap for the Monte Carlo loops.
    if let Ok(threads) = std::env::var("TRIQ_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        } else {
            eprintln!("warning: TRIQ_THREADS is not a number; ignoring");
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => print!("{}", io::render(&report)),
        Err(err) => {
            eprintln!("error: {}", err.message());
            std::process::exit(err.exit_code());
        }
    }
}

fn run(command: Command) -> Result<Value, CliError> {
    match command {
        Command::Invariants { state } => cmd_invariants(&state),
        Command::Dd {
            state,
            from_invariants,
        } => match (state, from_invariants) {
            (_, Some(iv_path)) => cmd_dd_from_invariants(&iv_path),
            (Some(path), None) => cmd_dd(&path),
            (None, None) => Err(CliError::Input(
                "dd needs a state file or --from-invariants".into(),
            )),
        },
        Command::Md {
            state,
            starts,
            tol,
            max_iter,
            seed,
        } => cmd_md(&state, starts, tol, max_iter, seed),
        Command::Measure {
            state,
            qubit,
            x,
            y,
            alpha,
            theta,
        } => cmd_measure(&state, qubit.into(), x, y, alpha, theta),
        Command::Bound {
            source,
            target,
            with_md,
            starts,
            seed,
        } => cmd_bound(&source, &target, with_md, starts, seed),
        Command::Classify { state, tol } => {
            let s = io::read_state(&state)?;
            Ok(json!({
                "schema": SCHEMA,
                "command": "classify",
                "class": classify(&s, tol).name(),
                "tol": tol,
            }))
        }
        Command::Verify {
            monotone,
            trials,
            seed,
            power,
            ensemble,
        } => cmd_verify(monotone, trials, seed, power, ensemble),
        Command::Random { seed, count, out } => cmd_random(seed, count, out.as_deref()),
    }
}

fn cmd_invariants(path: &str) -> Result<Value, CliError> {
    let s = io::read_state(path)?;
    Ok(json!({
        "schema": SCHEMA,
        "command": "invariants",
        "invariants": io::invariants_to_value(&invariants(&s)),
        "monotones": io::monotones_to_value(&monotones(&s)),
    }))
}

fn cmd_dd(path: &str) -> Result<Value, CliError> {
    let s = io::read_state(path)?;
    let form = dd::decompose(&s).map_err(io::from_lib)?;
    let residual = form.invariants().max_abs_diff(&invariants(&s));
    Ok(json!({
        "schema": SCHEMA,
        "command": "dd",
        "dd": io::dd_to_value(&form),
        "invariant_residual": residual,
    }))
}

fn cmd_dd_from_invariants(path: &str) -> Result<Value, CliError> {
    let iv = io::read_invariants(path)?;
    let (plus, minus) = dd::from_invariants(&iv).map_err(io::from_lib)?;
    Ok(json!({
        "schema": SCHEMA,
        "command": "dd-from-invariants",
        "plus": io::dd_to_value(&plus),
        "minus": io::dd_to_value(&minus),
    }))
}

fn cmd_md(
    path: &str,
    starts: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<Value, CliError> {
    let s = io::read_state(path)?;
    let cfg = OptimizerConfig {
        starts,
        tol,
        max_iter,
        seed,
    };
    let form = md::decompose(&s, &cfg).map_err(io::from_lib)?;
    let residual = form.invariants().max_abs_diff(&invariants(&s));
    Ok(json!({
        "schema": SCHEMA,
        "command": "md",
        "md": io::md_to_value(&form),
        "overlap": form.a * form.a,
        "invariant_residual": residual,
        "starts": starts as u64,
        "seed": seed,
    }))
}

fn cmd_measure(
    path: &str,
    qubit: QubitLabel,
    x: f64,
    y: f64,
    alpha: f64,
    theta: f64,
) -> Result<Value, CliError> {
    let s = io::read_state(path)?;
    let params = MeasurementParams::new(x, y, alpha, theta).map_err(io::from_lib)?;
    // The decomposition privileges qubit A; measurements on B or C run in
    // the frame where the measured qubit sits in slot A. Reported
    // invariants are mapped back to the original labels.
    let (frame, back_map) = match qubit {
        QubitLabel::A => (
            [QubitLabel::A, QubitLabel::B, QubitLabel::C],
            [QubitLabel::A, QubitLabel::B, QubitLabel::C],
        ),
        QubitLabel::B => (
            [QubitLabel::B, QubitLabel::A, QubitLabel::C],
            [QubitLabel::B, QubitLabel::A, QubitLabel::C],
        ),
        QubitLabel::C => (
            [QubitLabel::C, QubitLabel::A, QubitLabel::B],
            [QubitLabel::B, QubitLabel::C, QubitLabel::A],
        ),
    };
    let framed = s.permute_qubits(frame);
    let form = dd::decompose(&framed).map_err(io::from_lib)?;
    let outcomes = dd::measure(&form, &params).map_err(io::from_lib)?;
    let kraus = dd::build_kraus(&params);
    let base = form.to_state();

    let mut outcome_values = Vec::new();
    let mut worst_p = 0.0f64;
    let mut worst_iv = 0.0f64;
    let mut p_total = 0.0f64;
    for (slot, which) in OutcomeIndex::BOTH.iter().enumerate() {
        match &outcomes[slot] {
            MeasurementOutcome::State { dd: out, probability } => {
                let (tensor_state, p_tensor) =
                    base.apply_kraus(&kraus, *which).map_err(io::from_lib)?;
                worst_p = worst_p.max((probability - p_tensor).abs());
                let iv_frame = out.invariants();
                worst_iv = worst_iv.max(iv_frame.max_abs_diff(&invariants(&tensor_state)));
                p_total += probability;
                outcome_values.push(json!({
                    "probability": probability,
                    "dd": io::dd_to_value(out),
                    "invariants": io::invariants_to_value(&iv_frame.permuted(back_map)),
                }));
            }
            MeasurementOutcome::Null => {
                outcome_values.push(json!({ "null": true, "probability": 0.0 }));
            }
        }
    }
    worst_p = worst_p.max((p_total - 1.0).abs());
    Ok(json!({
        "schema": SCHEMA,
        "command": "measure",
        "qubit": match qubit { QubitLabel::A => "A", QubitLabel::B => "B", QubitLabel::C => "C" },
        "outcomes": outcome_values,
        "residuals": { "probability": worst_p, "invariants": worst_iv },
    }))
}

fn bound_to_value(report: &BoundReport<f64>) -> Value {
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            let mut obj = json!({
                "monotone": e.name,
                "source": e.source,
                "target": e.target,
            });
            match e.ratio {
                Ratio::Constrained(r) => obj["ratio"] = json!(r),
                Ratio::Unconstrained => obj["unconstrained"] = json!(true),
            }
            obj
        })
        .collect();
    let overall = match report.overall {
        Ratio::Constrained(v) => json!({ "ratio": v }),
        Ratio::Unconstrained => json!({ "unconstrained": true }),
    };
    json!({
        "entries": entries,
        "overall": overall,
        "effective": report.effective(),
    })
}

fn cmd_bound(
    source: &str,
    target: &str,
    with_md: bool,
    starts: usize,
    seed: u64,
) -> Result<Value, CliError> {
    let src = io::read_state(source)?;
    let dst = io::read_state(target)?;
    let report = if with_md {
        let mut cfg = OptimizerConfig::new(seed);
        cfg.starts = starts;
        transform_bound_with_md(&src, &dst, &cfg).map_err(io::from_lib)?
    } else {
        transform_bound(&src, &dst)
    };
    Ok(json!({
        "schema": SCHEMA,
        "command": "bound",
        "bound": bound_to_value(&report),
    }))
}

fn cmd_verify(
    monotone: MonotoneArg,
    trials: u64,
    seed: u64,
    power: Option<f64>,
    ensemble: EnsembleArg,
) -> Result<Value, CliError> {
    if let Some(p) = power {
        if !(p.is_finite() && p > 0.0) {
            return Err(CliError::Input("--power must be a positive number".into()));
        }
    }
    let id: MonotoneId = monotone.into();
    let m = match power {
        Some(p) => Monotone::Power(id, p),
        None => Monotone::Id(id),
    };
    let ens = match ensemble {
        EnsembleArg::Haar => TrialEnsemble::Haar,
        EnsembleArg::Boundary => TrialEnsemble::BoundaryBiased,
    };
    let report = verify_monotone_with(&m, trials, seed, ens);
    Ok(json!({
        "schema": SCHEMA,
        "command": "verify",
        "monotone": id.name(),
        "power": power.unwrap_or(1.0),
        "ensemble": match ens { TrialEnsemble::Haar => "haar", TrialEnsemble::BoundaryBiased => "boundary" },
        "trials": report.trials,
        "violations": report.violations,
        "worst_margin": report.worst_margin,
        "seed": report.seed,
    }))
}

fn cmd_random(seed: u64, count: usize, out: Option<&str>) -> Result<Value, CliError> {
    if count == 0 {
        return Err(CliError::Input("--count must be at least 1".into()));
    }
    let root = SeededRng::new(seed);
    match out {
        None if count == 1 => {
            let state: State64 = root.substream(0).state();
            Ok(io::state_to_value(&state))
        }
        None => Err(CliError::Input(
            "--out DIR is required when --count exceeds 1".into(),
        )),
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|e| CliError::Input(format!("cannot create {dir}: {e}")))?;
            let mut files = Vec::new();
            for i in 0..count {
                let state: State64 = root.substream(i as u64).state();
                let path = format!("{dir}/state_{i:04}.json");
                std::fs::write(&path, io::render(&io::state_to_value(&state)))
                    .map_err(|e| CliError::Input(format!("cannot write {path}: {e}")))?;
                files.push(Value::String(path));
            }
            Ok(json!({
                "schema": SCHEMA,
                "command": "random",
                "seed": seed,
                "count": count as u64,
                "files": files,
            }))
        }
    }
}
