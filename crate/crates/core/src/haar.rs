//! Haar-random unitaries and pure states, and Monte Carlo estimates of
//! unitary-group averages.
//!
//! Every estimator draws from a [`MonteCarlo`] configuration. Sequential runs
//! are bit-reproducible for a fixed [`RngSeed`]. Parallel runs split the
//! samples over workers, each on its own ChaCha stream, and merge the running
//! moments; they are statistically equivalent to but not bit-identical with
//! the sequential run.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::state::{
    basis_expectations, CMatrix, CVector, DensityOperator, ObservableBasis, ProbDist, PureState,
};
use crate::totalinfo::{info_classical, info_quantum};

/// Minimum sample count for [`estimate_avg_info`] and [`estimate_state_average`].
pub const MIN_SAMPLES: usize = 100;
/// Minimum sample count for the fourth-moment and alpha/beta estimators.
pub const MIN_MOMENT_SAMPLES: usize = 10_000;
pub const DEFAULT_SAMPLES: usize = 100_000;
/// Pass threshold, in standard errors.
pub const Z_THRESHOLD: f64 = 3.0;
/// Smallest standard error used as a z-score denominator. Zero-variance
/// estimates (the maximally mixed state) otherwise divide rounding noise by
/// rounding noise.
pub const STD_ERROR_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Independent child seed (splitmix64 of seed and tag).
    pub fn derive(self, tag: u64) -> RngSeed {
        let mut z = self
            .0
            .wrapping_add(tag.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        RngSeed(z ^ (z >> 31))
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed `n x n` unitary: QR of a complex Ginibre matrix, with
/// each column of `Q` multiplied by the phase of the matching diagonal
/// entry of `R`.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let ginibre = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let qr = ginibre.qr();
    let r = qr.r();
    let mut q = qr.q();
    for (j, mut column) in q.column_iter_mut().enumerate() {
        let d = r[(j, j)];
        let norm = d.norm();
        if norm > 0.0 {
            let phase = d / norm;
            column.apply(|z| *z *= phase);
        }
    }
    q
}

/// Haar-distributed pure state: a normalized complex Gaussian vector.
pub fn sample_haar_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PureState {
    loop {
        let v = CVector::from_fn(n, |_, _| complex_gaussian(rng));
        let norm = v.norm();
        if norm > 0.0 {
            return PureState::from_normalized(v / Complex64::from(norm));
        }
    }
}

/// Random density operator `G G^dagger / tr(G G^dagger)` from a Ginibre
/// matrix `G` (Hilbert-Schmidt measure). Full rank with probability one.
pub fn sample_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DensityOperator> {
    let g = CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    let m = &g * g.adjoint();
    let trace = m.trace().re;
    DensityOperator::new(m.map(|z| z / trace))
}

/// Random distribution from the flat Dirichlet law on the simplex.
pub fn sample_distribution<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ProbDist> {
    let draws: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = draws.iter().sum();
    ProbDist::new(draws.into_iter().map(|x| x / total).collect())
}

/// Welford running mean and variance, mergeable across workers.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningStats {
    count: usize,
    mean: f64,
    m2: f64,
}

impl RunningStats {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &RunningStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / count as f64;
        self.m2 += other.m2 + delta * delta * (self.count * other.count) as f64 / count as f64;
        self.count = count;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn into_estimate(self, label: impl Into<String>) -> HaarEstimate {
        HaarEstimate {
            mean: self.mean,
            std_error: (self.variance() / self.count as f64).sqrt(),
            samples: self.count,
            label: label.into(),
        }
    }
}

/// Monte Carlo mean with its standard error (`sd / sqrt(samples)`).
#[derive(Debug, Clone, PartialEq)]
pub struct HaarEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub label: String,
}

impl HaarEstimate {
    pub fn z_score(&self, expected: f64) -> f64 {
        z_score(self.mean, expected, self.std_error)
    }
}

pub fn z_score(observed: f64, expected: f64, std_error: f64) -> f64 {
    (observed - expected).abs() / std_error.max(STD_ERROR_FLOOR)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel { workers: usize },
}

/// Sample count, seed and execution mode of an estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarlo {
    pub samples: usize,
    pub seed: RngSeed,
    pub execution: Execution,
}

impl MonteCarlo {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed: RngSeed(seed),
            execution: Execution::Sequential,
        }
    }

    pub fn parallel(self, workers: usize) -> Self {
        Self {
            execution: Execution::Parallel {
                workers: workers.max(1),
            },
            ..self
        }
    }

    pub fn is_reproducible(&self) -> bool {
        self.execution == Execution::Sequential
    }

    fn with_seed(self, seed: RngSeed) -> Self {
        Self { seed, ..self }
    }

    fn require(&self, min: usize) -> Result<()> {
        if self.samples < min {
            return Err(Error::TooFewSamples {
                min,
                got: self.samples,
            });
        }
        Ok(())
    }

    /// Averages `draw` over `samples` independent calls.
    pub fn run<F>(&self, label: &str, draw: F) -> HaarEstimate
    where
        F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
    {
        match self.execution {
            Execution::Sequential => {
                let mut rng = self.seed.rng();
                let mut stats = RunningStats::default();
                for _ in 0..self.samples {
                    stats.push(draw(&mut rng));
                }
                stats.into_estimate(label)
            }
            Execution::Parallel { workers } => {
                let base = self.samples / workers;
                let extra = self.samples % workers;
                let parts: Vec<RunningStats> = (0..workers)
                    .into_par_iter()
                    .map(|w| {
                        let mut rng = self.seed.rng();
                        rng.set_stream(w as u64 + 1);
                        let mut stats = RunningStats::default();
                        for _ in 0..base + usize::from(w < extra) {
                            stats.push(draw(&mut rng));
                        }
                        stats
                    })
                    .collect();
                let mut total = RunningStats::default();
                for part in &parts {
                    total.merge(part);
                }
                total.into_estimate(label)
            }
        }
    }
}

/// Estimates `∫ I(U A U^dagger) dU`: the classical information of the
/// outcome distribution of the Haar-rotated basis, averaged over `U`.
pub fn estimate_avg_info(
    rho: &DensityOperator,
    basis: &ObservableBasis,
    mc: &MonteCarlo,
) -> Result<HaarEstimate> {
    check_dim(rho.dim(), basis.dim())?;
    mc.require(MIN_SAMPLES)?;
    let n = rho.dim();
    let estimate = mc.run("avg_info", |rng| {
        let u = sample_haar_unitary(n, rng);
        // rounding can push a probability a few ulps below zero or the sum
        // off by ~1e-16; both are well inside ProbDist's tolerance
        let p = ProbDist::new(basis_expectations(rho.matrix(), &(u * basis.unitary())))
            .expect("Haar-rotated basis yields a valid distribution");
        info_classical(&p)
    });
    Ok(estimate)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AverageIdentityReport {
    /// `I(rho)`
    pub lhs: f64,
    /// `(n + 1) * estimate.mean`
    pub rhs: f64,
    pub estimate: HaarEstimate,
    pub z_score: f64,
    pub pass: bool,
}

/// Checks `I(rho) = (n + 1) ∫ I(U A U^dagger) dU` with the computational
/// basis as `A`; passes when the z-score is at most [`Z_THRESHOLD`].
pub fn verify_average_identity(
    rho: &DensityOperator,
    mc: &MonteCarlo,
) -> Result<AverageIdentityReport> {
    let n = rho.dim();
    let estimate = estimate_avg_info(rho, &ObservableBasis::computational(n)?, mc)?;
    let scale = (n + 1) as f64;
    let lhs = info_quantum(rho);
    let rhs = scale * estimate.mean;
    let z = z_score(rhs, lhs, scale * estimate.std_error);
    Ok(AverageIdentityReport {
        lhs,
        rhs,
        estimate,
        z_score: z,
        pass: z <= Z_THRESHOLD,
    })
}

/// Estimates `n ∫ <a|rho|a>^2 dΩ_a - 1/n` over Haar-random pure states.
pub fn estimate_state_average(rho: &DensityOperator, mc: &MonteCarlo) -> Result<HaarEstimate> {
    mc.require(MIN_SAMPLES)?;
    let n = rho.dim();
    let nf = n as f64;
    let m = rho.matrix();
    Ok(mc.run("state_average", |rng| {
        let a = sample_haar_state(n, rng);
        let amps = a.amplitudes();
        let x: f64 = (m * amps)
            .iter()
            .zip(amps.iter())
            .map(|(y, v)| (v.conj() * y).re)
            .sum();
        nf * x * x - 1.0 / nf
    }))
}

/// Estimates `∫ |<a|b>|^4 dΩ_a` for the given `|b>`.
pub fn estimate_fourth_moment_about(b: &PureState, mc: &MonteCarlo) -> Result<HaarEstimate> {
    mc.require(MIN_MOMENT_SAMPLES)?;
    let n = b.dim();
    let bv: DVector<Complex64> = b.amplitudes().clone();
    Ok(mc.run("fourth_moment", |rng| {
        let a = sample_haar_state(n, rng);
        let overlap: Complex64 = a
            .amplitudes()
            .iter()
            .zip(bv.iter())
            .map(|(x, y)| x.conj() * y)
            .sum();
        overlap.norm_sqr().powi(2)
    }))
}

/// [`estimate_fourth_moment_about`] with `|b>` the first basis state.
pub fn estimate_fourth_moment(n: usize, mc: &MonteCarlo) -> Result<HaarEstimate> {
    estimate_fourth_moment_about(&PureState::basis_state(n, 0)?, mc)
}

/// `2 / (n (n + 1))`
pub fn fourth_moment_exact(n: usize) -> f64 {
    2.0 / (n * (n + 1)) as f64
}

/// Coefficients of `n ∫ <a|rho|a>^2 dΩ_a - 1/n = alpha tr rho^2 + beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaBeta {
    pub n: usize,
    pub alpha: f64,
    pub alpha_std_error: f64,
    pub beta: f64,
    pub beta_std_error: f64,
    /// Pure-probe and maximally-mixed-probe estimates the fit is built from.
    pub pure_probe: HaarEstimate,
    pub mixed_probe: HaarEstimate,
}

impl AlphaBeta {
    pub fn expected_alpha(&self) -> f64 {
        1.0 / (self.n + 1) as f64
    }

    pub fn expected_beta(&self) -> f64 {
        -1.0 / (self.n * (self.n + 1)) as f64
    }

    pub fn alpha_z_score(&self) -> f64 {
        z_score(self.alpha, self.expected_alpha(), self.alpha_std_error)
    }

    /// `|beta + alpha / n|`
    pub fn constraint_residual(&self) -> f64 {
        (self.beta + self.alpha / self.n as f64).abs()
    }

    /// Standard error of `beta + alpha / n`, propagated from the two
    /// parameter errors as if independent.
    pub fn constraint_std_error(&self) -> f64 {
        self.beta_std_error
            .hypot(self.alpha_std_error / self.n as f64)
    }

    pub fn constraint_holds(&self) -> bool {
        self.constraint_residual() <= Z_THRESHOLD * self.constraint_std_error().max(STD_ERROR_FLOOR)
    }
}

/// Fits alpha and beta from two probes: a pure state (`tr rho^2 = 1`) and the
/// maximally mixed state (`tr rho^2 = 1/n`), where the average vanishes.
pub fn estimate_alpha_beta(n: usize, mc: &MonteCarlo) -> Result<AlphaBeta> {
    mc.require(MIN_MOMENT_SAMPLES)?;
    let pure = DensityOperator::from_pure(&PureState::basis_state(n, 0)?)?;
    let mixed = DensityOperator::maximally_mixed(n)?;
    let pure_probe = estimate_state_average(&pure, &mc.with_seed(mc.seed.derive(0)))?;
    let mixed_probe = estimate_state_average(&mixed, &mc.with_seed(mc.seed.derive(1)))?;

    let nf = n as f64;
    // alpha * 1 + beta = pure, alpha / n + beta = mixed
    let scale = nf / (nf - 1.0);
    let alpha = (pure_probe.mean - mixed_probe.mean) * scale;
    let alpha_std_error = scale * pure_probe.std_error.hypot(mixed_probe.std_error);
    let beta = mixed_probe.mean - alpha / nf;
    let beta_std_error = mixed_probe.std_error.hypot(alpha_std_error / nf);
    Ok(AlphaBeta {
        n,
        alpha,
        alpha_std_error,
        beta,
        beta_std_error,
        pure_probe,
        mixed_probe,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{max_abs_diff, unitarity_deviation};
    use approx::assert_abs_diff_eq;

    #[test]
    fn sampled_unitaries_are_unitary() {
        let mut rng = RngSeed(1).rng();
        for n in [2, 3, 5, 8, 16, 64] {
            for _ in 0..20 {
                let u = sample_haar_unitary(n, &mut rng);
                assert!(unitarity_deviation(&u) <= 1e-10);
                let uu = &u * u.adjoint();
                assert!(max_abs_diff(&uu, &CMatrix::identity(n, n)) <= 1e-10);
            }
        }
    }

    #[test]
    fn sampled_states_have_unit_norm() {
        let mut rng = RngSeed(2).rng();
        for _ in 0..1000 {
            let a = sample_haar_state(4, &mut rng);
            assert_abs_diff_eq!(a.amplitudes().norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn running_stats_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut whole = RunningStats::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut a = RunningStats::default();
        let mut b = RunningStats::default();
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert_eq!(a.count(), whole.count());
        assert_abs_diff_eq!(a.mean(), whole.mean(), epsilon = 1e-12);
        assert_abs_diff_eq!(a.variance(), whole.variance(), epsilon = 1e-10);

        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert_abs_diff_eq!(whole.variance(), var, epsilon = 1e-10);
    }

    #[test]
    fn derived_seeds_differ() {
        let s = RngSeed(7);
        assert_ne!(s.derive(0), s.derive(1));
        assert_eq!(s.derive(3), RngSeed(7).derive(3));
    }

    #[test]
    fn sample_count_guards() {
        let rho = DensityOperator::maximally_mixed(2).unwrap();
        let basis = ObservableBasis::computational(2).unwrap();
        assert!(matches!(
            estimate_avg_info(&rho, &basis, &MonteCarlo::new(99, 0)),
            Err(Error::TooFewSamples { min: 100, got: 99 })
        ));
        assert!(matches!(
            estimate_fourth_moment(2, &MonteCarlo::new(9_999, 0)),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(estimate_alpha_beta(2, &MonteCarlo::new(500, 0)).is_err());
        assert!(matches!(
            estimate_avg_info(
                &rho,
                &ObservableBasis::computational(3).unwrap(),
                &MonteCarlo::new(1000, 0)
            ),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn maximally_mixed_average_is_zero() {
        for n in [2, 3, 5] {
            let rho = DensityOperator::maximally_mixed(n).unwrap();
            let est = estimate_avg_info(
                &rho,
                &ObservableBasis::computational(n).unwrap(),
                &MonteCarlo::new(1000, 4),
            )
            .unwrap();
            assert!(est.mean.abs() <= 1e-15, "{est:?}");
            assert!(est.std_error <= 1e-15, "{est:?}");
            let report = verify_average_identity(&rho, &MonteCarlo::new(1000, 4)).unwrap();
            assert!(report.pass);
            assert!(report.lhs.abs() <= 1e-15);
        }
    }

    #[test]
    fn sequential_runs_are_bit_identical() {
        let mut rng = RngSeed(11).rng();
        let rho = sample_density(3, &mut rng).unwrap();
        let mc = MonteCarlo::new(2000, 99);
        let a = verify_average_identity(&rho, &mc).unwrap();
        let b = verify_average_identity(&rho, &mc).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rhs.to_bits(), b.rhs.to_bits());
    }

    #[test]
    fn parallel_run_is_statistically_equivalent() {
        let mc = MonteCarlo::new(40_000, 5);
        let seq = estimate_fourth_moment(3, &mc).unwrap();
        let par = estimate_fourth_moment(3, &mc.parallel(4)).unwrap();
        assert_eq!(par.samples, 40_000);
        assert!(!mc.parallel(4).is_reproducible());
        let z = (seq.mean - par.mean).abs() / seq.std_error.hypot(par.std_error);
        assert!(z <= 4.0, "z = {z}");
        assert!(par.z_score(fourth_moment_exact(3)) <= 4.0);
    }

    #[test]
    fn sampled_density_is_valid() {
        let mut rng = RngSeed(3).rng();
        for n in [2, 4, 7] {
            let rho = sample_density(n, &mut rng).unwrap();
            assert_eq!(rho.dim(), n);
            assert!(rho.spectrum().iter().all(|&x| x > 0.0));
        }
        let p = sample_distribution(5, &mut rng).unwrap();
        assert_eq!(p.len(), 5);
    }

    #[test]
    fn alpha_beta_uses_both_probes() {
        let ab = estimate_alpha_beta(3, &MonteCarlo::new(20_000, 8)).unwrap();
        assert!(ab.mixed_probe.mean.abs() < 1e-15);
        assert!(ab.alpha_z_score() <= 4.0, "{ab:?}");
        assert!(ab.constraint_holds());
        assert_abs_diff_eq!(
            ab.expected_beta(),
            -ab.expected_alpha() / 3.0,
            epsilon = 1e-16
        );
    }
}
