//! Shannon and von Neumann entropies (in nats) and the volume measure `V = e^S`.
//!
//! Besides the entropies themselves this module carries executable forms of
//! the grouping axiom (Faddeev form and the mixture form) and of the three
//! volume postulates.

use crate::error::{check_dim, Error, Result};
use crate::state::{
    check_permutation, check_unitary, mix_dists, mix_states, nonoverlapping,
    quantum_nonoverlapping, tensor, CMatrix, DensityOperator, ProbDist, Weights,
    DEFAULT_OVERLAP_TOL,
};

/// Eigenvalues below this are exact zeros in `-sum λ ln λ`.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-12;
/// Residual contract of both grouping-axiom checks.
pub const GROUPING_TOL: f64 = 1e-12;
/// Equality/inequality slack for the mixture and product postulates.
pub const VOLUME_TOL: f64 = 1e-10;
/// Invariance slack for unitary conjugation and outcome permutation.
pub const INVARIANCE_TOL: f64 = 1e-12;

fn entropy_of(values: &[f64], cutoff: f64) -> f64 {
    values
        .iter()
        .filter(|&&v| v > cutoff)
        .map(|&v| -v * v.ln())
        .sum()
}

/// `H(p) = -sum p_i ln p_i` with `0 ln 0 = 0`.
pub fn shannon(p: &ProbDist) -> f64 {
    entropy_of(p.probs(), 0.0)
}

/// `S(rho) = -tr rho ln rho`, the Shannon entropy of the spectrum.
pub fn von_neumann(rho: &DensityOperator) -> f64 {
    entropy_of(rho.spectrum(), ZERO_EIGENVALUE_TOL)
}

pub fn volume_classical(p: &ProbDist) -> f64 {
    shannon(p).exp()
}

pub fn volume_quantum(rho: &DensityOperator) -> f64 {
    von_neumann(rho).exp()
}

/// Splits `fine = (p_1, ..., p_{n-1}, q_1, q_2)` into the coarse
/// distribution `(p_1, ..., p_{n-1}, q_1 + q_2)` and the conditional
/// `(q_1, q_2) / (q_1 + q_2)`.
fn faddeev_parts(fine: &ProbDist) -> Result<(ProbDist, ProbDist)> {
    let probs = fine.probs();
    if probs.len() < 2 {
        return Err(Error::InvalidSplit(
            "need at least two outcomes to split".to_string(),
        ));
    }
    let (head, tail) = probs.split_at(probs.len() - 2);
    let merged = tail[0] + tail[1];
    if merged <= 0.0 {
        return Err(Error::InvalidSplit(
            "split outcome has zero probability".to_string(),
        ));
    }
    let mut coarse = head.to_vec();
    coarse.push(merged);
    let conditional = vec![tail[0] / merged, tail[1] / merged];
    Ok((ProbDist::new(coarse)?, ProbDist::new(conditional)?))
}

/// Residual of the Faddeev grouping axiom
/// `H(p_1..p_{n-1}, q_1, q_2) = H(p_1..p_n) + p_n H(q_1/p_n, q_2/p_n)`,
/// where the last two entries of `fine` are `q_1, q_2`.
pub fn check_faddeev(fine: &ProbDist) -> Result<f64> {
    let (coarse, conditional) = faddeev_parts(fine)?;
    let merged = coarse.probs()[coarse.len() - 1];
    let lhs = shannon(fine);
    let rhs = shannon(&coarse) + merged * shannon(&conditional);
    Ok((lhs - rhs).abs())
}

/// Residual of the mixture form of the grouping axiom:
/// `|H(sum w_i p^(i)) - sum w_i H(p^(i)) - H(w)|` for pairwise
/// non-overlapping components.
pub fn check_grouping_mixture(components: &[ProbDist], w: &Weights) -> Result<f64> {
    ensure_pairwise_disjoint(components, |a, b| nonoverlapping(a, b, DEFAULT_OVERLAP_TOL))?;
    let mixed = mix_dists(components, w)?;
    let average: f64 = components
        .iter()
        .zip(w.values())
        .map(|(p, &wi)| wi * shannon(p))
        .sum();
    Ok((shannon(&mixed) - average - shannon(w.as_dist())).abs())
}

/// Writes `fine = (p_1, ..., p_{n-1}, q_1, q_2)` as a mixture of the point
/// masses on the first `n-1` outcomes and `(0, ..., 0, q_1/p_n, q_2/p_n)`,
/// with mixing weights `(p_1, ..., p_n)`. Feeding the result to
/// [`check_grouping_mixture`] recovers the Faddeev form.
pub fn faddeev_mixture_decomposition(fine: &ProbDist) -> Result<(Vec<ProbDist>, Weights)> {
    let (coarse, conditional) = faddeev_parts(fine)?;
    let len = fine.len();
    let mut components: Vec<ProbDist> = (0..len - 2)
        .map(|i| ProbDist::point_mass(len, i))
        .collect::<Result<_>>()?;
    let mut last = vec![0.0; len];
    last[len - 2..].copy_from_slice(conditional.probs());
    components.push(ProbDist::new(last)?);
    Ok((components, Weights::from(coarse)))
}

fn ensure_pairwise_disjoint<T>(
    components: &[T],
    disjoint: impl Fn(&T, &T) -> Result<bool>,
) -> Result<()> {
    for i in 0..components.len() {
        for j in i + 1..components.len() {
            if !disjoint(&components[i], &components[j])? {
                return Err(Error::Overlap {
                    first: i,
                    second: j,
                });
            }
        }
    }
    Ok(())
}

/// Reduced state on the first factor of a `dim_a * dim_b` operator laid out
/// as `a ⊗ b` (row index `i_a * dim_b + i_b`).
pub fn partial_trace_second(
    rho: &DensityOperator,
    dim_a: usize,
    dim_b: usize,
) -> Result<DensityOperator> {
    check_dim(dim_a * dim_b, rho.dim())?;
    let m = rho.matrix();
    DensityOperator::new(CMatrix::from_fn(dim_a, dim_a, |i, j| {
        (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum()
    }))
}

/// Reduced state on the second factor; see [`partial_trace_second`].
pub fn partial_trace_first(
    rho: &DensityOperator,
    dim_a: usize,
    dim_b: usize,
) -> Result<DensityOperator> {
    check_dim(dim_a * dim_b, rho.dim())?;
    let m = rho.matrix();
    DensityOperator::new(CMatrix::from_fn(dim_b, dim_b, |i, j| {
        (0..dim_a).map(|k| m[(k * dim_b + i, k * dim_b + j)]).sum()
    }))
}

/// Non-overlapping components of equal volume, optionally with unequal
/// mixing weights for the one-sided check. The equal-weight mixture is
/// always checked.
#[derive(Debug, Clone)]
pub struct MixtureCase<T> {
    pub components: Vec<T>,
    pub weights: Option<Weights>,
}

#[derive(Debug, Clone)]
pub struct BipartiteState {
    pub state: DensityOperator,
    pub dim_a: usize,
    pub dim_b: usize,
}

/// Structured inputs for [`check_volume_postulates`].
#[derive(Debug, Clone, Default)]
pub struct VolumeFixture {
    pub classical_mixtures: Vec<MixtureCase<ProbDist>>,
    pub quantum_mixtures: Vec<MixtureCase<DensityOperator>>,
    /// Uncorrelated pairs; the joint volume must factorize.
    pub products: Vec<(DensityOperator, DensityOperator)>,
    /// Arbitrary (typically correlated) joint states; subadditivity.
    pub bipartite: Vec<BipartiteState>,
    pub conjugations: Vec<(DensityOperator, CMatrix)>,
    pub permutations: Vec<(ProbDist, Vec<usize>)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostulateOutcome {
    pub pass: bool,
    /// Largest equality residual or inequality violation seen.
    pub max_residual: f64,
    pub tolerance: f64,
    pub cases: usize,
}

impl PostulateOutcome {
    fn from_residuals(residuals: impl IntoIterator<Item = f64>, tolerance: f64) -> Self {
        let mut cases = 0;
        let mut max_residual: f64 = 0.0;
        for r in residuals {
            cases += 1;
            max_residual = max_residual.max(r);
        }
        Self {
            pass: max_residual <= tolerance,
            max_residual,
            tolerance,
            cases,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumePostulateReport {
    /// (i) mixtures of non-overlapping equal-volume ensembles.
    pub mixture: PostulateOutcome,
    /// (ii) bipartite ensembles versus their subsystems.
    pub product: PostulateOutcome,
    /// (iii) unitary conjugation and outcome permutation.
    pub invariance: PostulateOutcome,
}

impl VolumePostulateReport {
    pub fn all_pass(&self) -> bool {
        self.mixture.pass && self.product.pass && self.invariance.pass
    }
}

fn equal_volumes(volumes: &[f64]) -> Result<f64> {
    let first = *volumes.first().ok_or(Error::EmptyDistribution)?;
    for &v in &volumes[1..] {
        if (v - first).abs() > VOLUME_TOL {
            return Err(Error::UnequalVolumes { first, second: v });
        }
    }
    Ok(first)
}

/// Residuals of postulate (i) for one mixture case: the equal-weight
/// equality `V = m v` and, when weights are given, the violation of
/// `V <= m v`.
fn mixture_residuals<T>(
    case: &MixtureCase<T>,
    volume: impl Fn(&T) -> f64,
    mix: impl Fn(&[T], &Weights) -> Result<f64>,
    disjoint: impl Fn(&T, &T) -> Result<bool>,
) -> Result<Vec<f64>> {
    ensure_pairwise_disjoint(&case.components, disjoint)?;
    let m = case.components.len();
    let volumes: Vec<f64> = case.components.iter().map(&volume).collect();
    let v = equal_volumes(&volumes)?;
    let bound = m as f64 * v;
    let mut out = vec![(mix(&case.components, &Weights::equal(m)?)? - bound).abs()];
    if let Some(w) = &case.weights {
        out.push((mix(&case.components, w)? - bound).max(0.0));
    }
    Ok(out)
}

/// Checks the three volume postulates on the fixture.
///
/// Fixtures that violate their own preconditions (overlapping or
/// unequal-volume mixture components, non-unitary transformations, invalid
/// permutations, bad bipartite dimensions) are rejected with an error.
pub fn check_volume_postulates(fixture: &VolumeFixture) -> Result<VolumePostulateReport> {
    let mut mixture = Vec::new();
    for case in &fixture.classical_mixtures {
        mixture.extend(mixture_residuals(
            case,
            volume_classical,
            |c, w| Ok(volume_classical(&mix_dists(c, w)?)),
            |a, b| nonoverlapping(a, b, DEFAULT_OVERLAP_TOL),
        )?);
    }
    for case in &fixture.quantum_mixtures {
        mixture.extend(mixture_residuals(
            case,
            volume_quantum,
            |c, w| Ok(volume_quantum(&mix_states(c, w)?)),
            |a, b| quantum_nonoverlapping(a, b, DEFAULT_OVERLAP_TOL),
        )?);
    }

    let mut product = Vec::new();
    for (a, b) in &fixture.products {
        let joint = tensor(a, b)?;
        product.push((volume_quantum(&joint) - volume_quantum(a) * volume_quantum(b)).abs());
    }
    for case in &fixture.bipartite {
        let reduced_a = partial_trace_second(&case.state, case.dim_a, case.dim_b)?;
        let reduced_b = partial_trace_first(&case.state, case.dim_a, case.dim_b)?;
        let excess =
            volume_quantum(&case.state) - volume_quantum(&reduced_a) * volume_quantum(&reduced_b);
        product.push(excess.max(0.0));
    }

    let mut invariance = Vec::new();
    for (rho, u) in &fixture.conjugations {
        check_unitary(u)?;
        let moved = rho.conjugated(u)?;
        invariance.push((volume_quantum(&moved) - volume_quantum(rho)).abs());
    }
    for (p, perm) in &fixture.permutations {
        check_permutation(perm, p.len())?;
        invariance.push((volume_classical(&p.permuted(perm)?) - volume_classical(p)).abs());
    }

    Ok(VolumePostulateReport {
        mixture: PostulateOutcome::from_residuals(mixture, VOLUME_TOL),
        product: PostulateOutcome::from_residuals(product, VOLUME_TOL),
        invariance: PostulateOutcome::from_residuals(invariance, INVARIANCE_TOL),
    })
}
