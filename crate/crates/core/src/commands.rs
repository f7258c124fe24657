//! The four commands behind the `uncertainty` binary, returning [`Report`]s.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 parse or validation
//! error, 3 unsupported dimension.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use thiserror::Error;

use crate::document::{DocumentError, InputDocument, Loaded};
use crate::entropy::{
    check_faddeev, check_grouping_mixture, check_volume_postulates, faddeev_mixture_decomposition,
    shannon, volume_classical, volume_quantum, von_neumann, PostulateOutcome, GROUPING_TOL,
};
use crate::fixtures::{
    random_nonoverlapping, random_point_masses, random_split, random_volume_fixture, worked_mixture,
};
use crate::haar::{
    estimate_alpha_beta, estimate_fourth_moment, fourth_moment_exact, verify_average_identity,
    MonteCarlo, RngSeed, DEFAULT_SAMPLES, MIN_MOMENT_SAMPLES, Z_THRESHOLD,
};
use crate::report::{digest, scalar, vector, Check, Report};
use crate::state::{DensityOperator, PureState, Weights};
use crate::totalinfo::{
    build_mub, check_additivity, check_ipr_relation, check_reconstruction, info_quantum,
    ipr_classical, ipr_quantum, IDENTITY_TOL,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

/// Slack on the entropy bounds `0 <= H <= ln n`.
pub const BOUNDS_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(crate::Error),
}

impl From<crate::Error> for CommandError {
    fn from(e: crate::Error) -> Self {
        Self::Core(e)
    }
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Core(crate::Error::UnsupportedDimension { .. })
            | Self::Document(DocumentError::Validation(crate::Error::UnsupportedDimension {
                ..
            })) => EXIT_UNSUPPORTED,
            _ => EXIT_INVALID,
        }
    }
}

pub type CommandResult = Result<Report, CommandError>;

fn file_input(report: &mut Report, key: &str, path: &Path, bytes: &[u8]) {
    report.input(
        key,
        json!({ "file": path.display().to_string(), "sha256": digest(bytes) }),
    );
}

#[derive(Debug, Clone, Default)]
pub struct EntropyOptions {
    pub tol: Option<f64>,
}

/// Shannon or von Neumann entropy and volume of a distribution or density document.
pub fn cmd_entropy(path: &Path, opts: &EntropyOptions) -> CommandResult {
    let (doc, bytes) = InputDocument::read(path)?;
    let mut report = Report::new("entropy");
    file_input(&mut report, "input", path, &bytes);
    let tol = opts.tol.unwrap_or(BOUNDS_TOL);
    let (entropy, n) = match doc.load()? {
        Loaded::Distribution(p) => {
            let h = shannon(&p);
            report
                .result("kind", json!("distribution"))
                .result("H", scalar(h))
                .result("V", scalar(volume_classical(&p)));
            (h, p.len())
        }
        Loaded::Density(rho) => {
            let s = von_neumann(&rho);
            report
                .result("kind", json!("density"))
                .result("S", scalar(s))
                .result("V", scalar(volume_quantum(&rho)))
                .result("spectrum", vector(rho.spectrum()));
            (s, rho.dim())
        }
        Loaded::Basis(_) => {
            return Err(CommandError::Invalid(
                "entropy needs a distribution or density document".to_string(),
            ))
        }
    };
    report
        .result("dim", json!(n))
        .check(Check::residual(
            "entropy_nonnegative",
            (-entropy).max(0.0),
            tol,
        ))
        .check(Check::residual(
            "entropy_at_most_ln_n",
            (entropy - (n as f64).ln()).max(0.0),
            tol,
        ));
    Ok(report)
}

#[derive(Debug, Clone, Default)]
pub struct TotalInfoOptions {
    pub mub: bool,
    pub tol: Option<f64>,
}

/// `I(rho)`, `R(rho)` and, with `mub`, the identities over a complete set of
/// mutually unbiased bases.
pub fn cmd_totalinfo(path: &Path, opts: &TotalInfoOptions) -> CommandResult {
    let (doc, bytes) = InputDocument::read(path)?;
    let rho = doc.to_density()?;
    let n = rho.dim();
    let mut report = Report::new("totalinfo");
    file_input(&mut report, "input", path, &bytes);
    report
        .input("mub", json!(opts.mub))
        .result("dim", json!(n))
        .result("I_rho", scalar(info_quantum(&rho)))
        .result("R_rho", scalar(ipr_quantum(&rho)));
    if opts.mub {
        let tol = opts.tol.unwrap_or(IDENTITY_TOL);
        let mubs = build_mub(n)?;
        let additivity = check_additivity(&rho, &mubs)?;
        let labels: Vec<Value> = mubs
            .bases()
            .iter()
            .map(|b| json!(b.label().unwrap_or("")))
            .collect();
        let ipr: Vec<f64> = mubs
            .bases()
            .iter()
            .map(|b| crate::state::measure(&rho, b).map(|p| ipr_classical(&p)))
            .collect::<Result<_, _>>()?;
        report
            .result("bases", Value::Array(labels))
            .result("I_per_basis", vector(&additivity.per_basis))
            .result("I_sum", scalar(additivity.lhs))
            .result("R_per_basis", vector(&ipr))
            .check(Check::residual("additivity", additivity.residual, tol))
            .check(Check::residual(
                "reconstruction",
                check_reconstruction(&rho, &mubs)?,
                tol,
            ))
            .check(Check::residual(
                "ipr_relation",
                check_ipr_relation(&rho, &mubs)?,
                tol,
            ));
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct HaarVerifyOptions {
    pub dim: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub density: Option<PathBuf>,
    /// Worker count for parallel sampling; `None` is sequential and bit-reproducible.
    pub parallel: Option<usize>,
}

impl Default for HaarVerifyOptions {
    fn default() -> Self {
        Self {
            dim: None,
            samples: DEFAULT_SAMPLES,
            seed: 0,
            density: None,
            parallel: None,
        }
    }
}

/// Monte Carlo check of the Haar-average identity, the fourth moment and
/// the alpha/beta coefficients. Without a density file the state is `|0><0|`.
pub fn cmd_haar_verify(opts: &HaarVerifyOptions) -> CommandResult {
    let mut report = Report::new("haar-verify");
    let rho = match &opts.density {
        Some(path) => {
            let (doc, bytes) = InputDocument::read(path)?;
            file_input(&mut report, "density", path, &bytes);
            let rho = doc.to_density()?;
            if let Some(dim) = opts.dim {
                if dim != rho.dim() {
                    return Err(CommandError::Invalid(format!(
                        "--dim {dim} does not match the {0}x{0} density",
                        rho.dim()
                    )));
                }
            }
            rho
        }
        None => {
            let dim = opts.dim.ok_or_else(|| {
                CommandError::Invalid("--dim or --density is required".to_string())
            })?;
            if dim < 2 {
                return Err(CommandError::Invalid(
                    "--dim must be at least 2".to_string(),
                ));
            }
            DensityOperator::from_pure(&PureState::basis_state(dim, 0)?)?
        }
    };
    if opts.samples < MIN_MOMENT_SAMPLES {
        return Err(CommandError::Invalid(format!(
            "--samples must be at least {MIN_MOMENT_SAMPLES}"
        )));
    }
    let n = rho.dim();
    let mut mc = MonteCarlo::new(opts.samples, opts.seed);
    if let Some(workers) = opts.parallel {
        mc = mc.parallel(workers);
    }
    let seed = RngSeed(opts.seed);

    let identity = verify_average_identity(
        &rho,
        &MonteCarlo {
            seed: seed.derive(0),
            ..mc
        },
    )?;
    let moment = estimate_fourth_moment(
        n,
        &MonteCarlo {
            seed: seed.derive(1),
            ..mc
        },
    )?;
    let ab = estimate_alpha_beta(
        n,
        &MonteCarlo {
            seed: seed.derive(2),
            ..mc
        },
    )?;
    let exact_moment = fourth_moment_exact(n);

    report.reproducible = mc.is_reproducible();
    report
        .input("dim", json!(n))
        .input("samples", json!(opts.samples))
        .input("seed", json!(opts.seed))
        .input(
            "parallel_workers",
            opts.parallel.map_or(Value::Null, |w| json!(w)),
        )
        .result("I_rho", scalar(identity.lhs))
        .result("avg_info_mean", scalar(identity.estimate.mean))
        .result("avg_info_std_error", scalar(identity.estimate.std_error))
        .result("scaled_avg_info", scalar(identity.rhs))
        .result("fourth_moment_mean", scalar(moment.mean))
        .result("fourth_moment_std_error", scalar(moment.std_error))
        .result("fourth_moment_exact", scalar(exact_moment))
        .result("alpha", scalar(ab.alpha))
        .result("alpha_std_error", scalar(ab.alpha_std_error))
        .result("alpha_expected", scalar(ab.expected_alpha()))
        .result("beta", scalar(ab.beta))
        .result("beta_std_error", scalar(ab.beta_std_error))
        .check(Check::z_score(
            "haar_average_identity",
            identity.z_score,
            Z_THRESHOLD,
        ))
        .check(Check::z_score(
            "fourth_moment",
            moment.z_score(exact_moment),
            Z_THRESHOLD,
        ))
        .check(Check::z_score("alpha", ab.alpha_z_score(), Z_THRESHOLD))
        .check(Check::z_score(
            "beta_equals_minus_alpha_over_n",
            crate::haar::z_score(ab.constraint_residual(), 0.0, ab.constraint_std_error()),
            Z_THRESHOLD,
        ));
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct AxiomsOptions {
    pub trials: usize,
    pub seed: u64,
    /// User-supplied mixture components (distribution documents).
    pub components: Vec<PathBuf>,
    /// Mixing weights for `components`; equal when absent.
    pub weights: Option<Vec<f64>>,
    pub tol: Option<f64>,
}

impl Default for AxiomsOptions {
    fn default() -> Self {
        Self {
            trials: 1000,
            seed: 0,
            components: Vec::new(),
            weights: None,
            tol: None,
        }
    }
}

fn postulate_check(report: &mut Report, name: &str, outcome: &PostulateOutcome) {
    report
        .result(&format!("{name}_cases"), json!(outcome.cases))
        .check(Check::residual(
            name,
            outcome.max_residual,
            outcome.tolerance,
        ));
}

/// Grouping axiom (both forms) and volume postulates over the worked
/// example, random fixtures and optional user components.
pub fn cmd_axioms(opts: &AxiomsOptions) -> CommandResult {
    let tol = opts.tol.unwrap_or(GROUPING_TOL);
    let mut report = Report::new("axioms");
    report
        .input("trials", json!(opts.trials))
        .input("seed", json!(opts.seed));

    if !opts.components.is_empty() {
        let mut components = Vec::new();
        let mut files = Vec::new();
        for path in &opts.components {
            let (doc, bytes) = InputDocument::read(path)?;
            components.push(doc.to_distribution()?);
            files.push(json!({ "file": path.display().to_string(), "sha256": digest(&bytes) }));
        }
        let weights = match &opts.weights {
            Some(w) => Weights::new(w.clone())?,
            None => Weights::equal(components.len())?,
        };
        report.input("components", Value::Array(files));
        report.input("weights", vector(weights.values()));
        report.check(Check::residual(
            "grouping_user",
            check_grouping_mixture(&components, &weights)?,
            tol,
        ));
    } else if opts.weights.is_some() {
        return Err(CommandError::Invalid(
            "--weights needs --component files".to_string(),
        ));
    }

    let (components, weights) = worked_mixture();
    let mixed = crate::state::mix_dists(&components, &weights)?;
    report
        .result("worked_mixture", vector(mixed.probs()))
        .result("worked_H", scalar(shannon(&mixed)))
        .check(Check::residual(
            "grouping_worked_example",
            check_grouping_mixture(&components, &weights)?,
            tol,
        ))
        .check(Check::residual(
            "faddeev_worked_example",
            check_faddeev(&mixed)?,
            tol,
        ));

    let mut rng = RngSeed(opts.seed).rng();
    let mut faddeev_max: f64 = 0.0;
    let mut recovered_max: f64 = 0.0;
    let mut grouping_max: f64 = 0.0;
    let mut point_mass_max: f64 = 0.0;
    for trial in 0..opts.trials {
        let coarse_len = 2 + trial % 9;
        let fine = random_split(&mut rng, coarse_len)?;
        faddeev_max = faddeev_max.max(check_faddeev(&fine)?);
        let (parts, w) = faddeev_mixture_decomposition(&fine)?;
        recovered_max = recovered_max.max(check_grouping_mixture(&parts, &w)?);

        let total = 2 + trial % 11;
        let blocks = 1 + trial % total;
        let (parts, w) = random_nonoverlapping(&mut rng, total, blocks)?;
        grouping_max = grouping_max.max(check_grouping_mixture(&parts, &w)?);

        let (points, w) = random_point_masses(&mut rng, total)?;
        let mixed = crate::state::mix_dists(&points, &w)?;
        point_mass_max = point_mass_max
            .max(check_grouping_mixture(&points, &w)?)
            .max((shannon(&mixed) - shannon(w.as_dist())).abs());
    }
    report
        .check(Check::residual("faddeev_random", faddeev_max, tol))
        .check(Check::residual("faddeev_from_mixture", recovered_max, tol))
        .check(Check::residual("grouping_random", grouping_max, tol))
        .check(Check::residual(
            "grouping_point_masses",
            point_mass_max,
            tol,
        ));

    let volume_cases = opts.trials.div_ceil(10).max(1);
    let fixture = random_volume_fixture(&mut rng, volume_cases)?;
    let postulates = check_volume_postulates(&fixture)?;
    postulate_check(&mut report, "volume_mixture", &postulates.mixture);
    postulate_check(&mut report, "volume_product", &postulates.product);
    postulate_check(&mut report, "volume_invariance", &postulates.invariance);
    Ok(report)
}
