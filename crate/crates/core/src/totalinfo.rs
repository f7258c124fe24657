//! Total information `I(p) = sum p_j^2 - 1/n`, `I(rho) = tr rho^2 - 1/n`,
//! inverse participation ratios, and complete sets of mutually unbiased
//! bases in prime dimension together with the identities they satisfy.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::state::{
    dephase, max_abs_diff, measure, CMatrix, DensityOperator, ObservableBasis, ProbDist,
    VALIDATION_TOL,
};

/// Residual contract for reconstruction, additivity and the IPR relation.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Largest prime inside the supported dimension range.
pub const MAX_MUB_DIM: usize = 61;

/// `I(p) = sum_j p_j^2 - 1/n`
pub fn info_classical(p: &ProbDist) -> f64 {
    let n = p.len() as f64;
    p.probs().iter().map(|x| x * x).sum::<f64>() - 1.0 / n
}

/// Distance form `sum_j (p_j - 1/n)^2`; algebraically equal to [`info_classical`].
pub fn info_classical_distance(p: &ProbDist) -> f64 {
    let n = p.len() as f64;
    p.probs().iter().map(|x| (x - 1.0 / n).powi(2)).sum()
}

/// `I(rho) = tr rho^2 - 1/n`
pub fn info_quantum(rho: &DensityOperator) -> f64 {
    rho.purity() - 1.0 / rho.dim() as f64
}

/// `R(p) = 1 / sum_j p_j^2`
pub fn ipr_classical(p: &ProbDist) -> f64 {
    1.0 / p.probs().iter().map(|x| x * x).sum::<f64>()
}

/// `R(rho) = 1 / tr rho^2`
pub fn ipr_quantum(rho: &DensityOperator) -> f64 {
    1.0 / rho.purity()
}

pub fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// A complete set of `n + 1` mutually unbiased bases.
#[derive(Debug, Clone)]
pub struct MubSet {
    dim: usize,
    bases: Vec<ObservableBasis>,
}

impl MubSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[ObservableBasis] {
        &self.bases
    }

    /// Largest deviations `(orthonormality, unbiasedness)` over all bases:
    /// `|<a_i|a_j> - δ_ij|` within a basis and `||<a_i^k|a_j^l>|^2 - 1/n|`
    /// across bases.
    pub fn invariant_deviations(&self) -> (f64, f64) {
        let n = self.dim;
        let identity = CMatrix::identity(n, n);
        let mut ortho: f64 = 0.0;
        let mut unbiased: f64 = 0.0;
        for (k, a) in self.bases.iter().enumerate() {
            let ua = a.unitary();
            ortho = ortho.max(max_abs_diff(&(ua.adjoint() * ua), &identity));
            for b in &self.bases[k + 1..] {
                let overlaps = ua.adjoint() * b.unitary();
                for z in overlaps.iter() {
                    unbiased = unbiased.max((z.norm_sqr() - 1.0 / n as f64).abs());
                }
            }
        }
        (ortho, unbiased)
    }

    fn validate(self) -> Result<Self> {
        let (ortho, unbiased) = self.invariant_deviations();
        let deviation = ortho.max(unbiased);
        if deviation > VALIDATION_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(self)
    }
}

fn unsupported(dim: usize) -> Error {
    Error::UnsupportedDimension {
        dim,
        reason: format!(
            "complete sets of mutually unbiased bases are constructed for prime \
             dimensions 2..={MAX_MUB_DIM} only (existence is only known for \
             dimensions that are prime or powers of 2)"
        ),
    }
}

/// Builds the `n + 1` mutually unbiased bases for prime `n`.
///
/// `n = 2` uses the Pauli Z, X, Y eigenbases. For odd prime `n`, basis `k`
/// (`k = 0..n`) has vectors `|v_m>` with components
/// `exp(2πi (k j^2 + m j) / n) / sqrt(n)`, and the computational basis
/// completes the set. The result is checked against the MUB invariants
/// before it is returned.
pub fn build_mub(n: usize) -> Result<MubSet> {
    if !is_prime(n) || n > MAX_MUB_DIM {
        return Err(unsupported(n));
    }
    let mut bases = vec![ObservableBasis::computational(n)?];
    if n == 2 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex64::new(re * s, im * s);
        let x =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]);
        let y =
            CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]);
        bases.push(ObservableBasis::from_unitary(x, Some("X".to_string()))?);
        bases.push(ObservableBasis::from_unitary(y, Some("Y".to_string()))?);
    } else {
        let norm = 1.0 / (n as f64).sqrt();
        for k in 0..n {
            let u = CMatrix::from_fn(n, n, |j, m| {
                // exponent reduced mod n in exact integer arithmetic
                let e = (k * j * j + m * j) % n;
                Complex64::from_polar(norm, 2.0 * PI * e as f64 / n as f64)
            });
            bases.push(ObservableBasis::from_unitary(
                u,
                Some(format!("quadratic-{k}")),
            )?);
        }
    }
    MubSet { dim: n, bases }.validate()
}

/// `max |(sum_i rho(A_i) - 1) - rho|`
pub fn check_reconstruction(rho: &DensityOperator, mubs: &MubSet) -> Result<f64> {
    check_dim(mubs.dim(), rho.dim())?;
    let n = rho.dim();
    let mut sum = -CMatrix::identity(n, n);
    for basis in mubs.bases() {
        sum += dephase(rho, basis)?.matrix();
    }
    Ok(max_abs_diff(&sum, rho.matrix()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Additivity {
    /// `I(A_i)` for each basis, in [`MubSet::bases`] order.
    pub per_basis: Vec<f64>,
    /// `sum_i I(A_i)`
    pub lhs: f64,
    /// `I(rho)`
    pub rhs: f64,
    pub residual: f64,
}

/// `sum_i I(A_i)` against `I(rho)`.
pub fn check_additivity(rho: &DensityOperator, mubs: &MubSet) -> Result<Additivity> {
    check_dim(mubs.dim(), rho.dim())?;
    let per_basis = mubs
        .bases()
        .iter()
        .map(|b| measure(rho, b).map(|p| info_classical(&p)))
        .collect::<Result<Vec<_>>>()?;
    let lhs = per_basis.iter().sum();
    let rhs = info_quantum(rho);
    Ok(Additivity {
        per_basis,
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
    })
}

/// `|1/R(rho) - sum_i 1/R(A_i) + 1|`
pub fn check_ipr_relation(rho: &DensityOperator, mubs: &MubSet) -> Result<f64> {
    check_dim(mubs.dim(), rho.dim())?;
    let mut classical = 0.0;
    for basis in mubs.bases() {
        classical += 1.0 / ipr_classical(&measure(rho, basis)?);
    }
    Ok((1.0 / ipr_quantum(rho) - classical + 1.0).abs())
}
