//! Distributions, density operators and observable bases.
//!
//! Every constructor validates its input against [`VALIDATION_TOL`] and then
//! renormalizes exactly (negative entries clamped, trace/norm rescaled), so
//! downstream identities can be checked at a tighter tolerance than the one
//! used to accept the input. All types are immutable once built.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Tolerance for accepting Hermiticity, unit trace, normalization and orthonormality.
pub const VALIDATION_TOL: f64 = 1e-10;
/// Default tolerance of the overlap predicates.
pub const DEFAULT_OVERLAP_TOL: f64 = 1e-10;
pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 64;

fn check_dim_range(dim: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange {
            dim,
            min: MIN_DIM,
            max: MAX_DIM,
        })
    }
}

fn check_finite(values: impl IntoIterator<Item = Complex64>) -> Result<()> {
    for (index, z) in values.into_iter().enumerate() {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
    }
    Ok(())
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Eigenvalues (descending) and matching eigenvector columns of a Hermitian matrix.
pub fn hermitian_eigen(matrix: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(matrix.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    (values, vectors)
}

/// Finite discrete probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (index, &p) in probs.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if p < -VALIDATION_TOL {
                return Err(Error::NegativeProbability { index, value: p });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::NotNormalized { sum });
        }
        let mut probs = probs;
        for p in probs.iter_mut() {
            *p = p.max(0.0);
        }
        let sum: f64 = probs.iter().sum();
        for p in probs.iter_mut() {
            *p /= sum;
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDistribution);
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
        })
    }

    pub fn point_mass(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: index + 1,
            });
        }
        let mut probs = vec![0.0; n];
        probs[index] = 1.0;
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Outcome `j` of the result is outcome `perm[j]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.len())?;
        Ok(Self {
            probs: perm.iter().map(|&j| self.probs[j]).collect(),
        })
    }

    /// Indices with probability above `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > tol)
            .map(|(j, _)| j)
            .collect()
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(perm.len()));
    }
    let mut seen = vec![false; n];
    for &j in perm {
        if j >= n || std::mem::replace(&mut seen[j], true) {
            return Err(Error::InvalidPermutation(n));
        }
    }
    Ok(())
}

/// Mixing coefficients; validated exactly like a [`ProbDist`].
#[derive(Debug, Clone, PartialEq)]
pub struct Weights(ProbDist);

impl Weights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        ProbDist::new(weights).map(Self)
    }

    pub fn equal(m: usize) -> Result<Self> {
        ProbDist::uniform(m).map(Self)
    }

    pub fn as_dist(&self) -> &ProbDist {
        &self.0
    }

    pub fn values(&self) -> &[f64] {
        self.0.probs()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<ProbDist> for Weights {
    fn from(p: ProbDist) -> Self {
        Self(p)
    }
}

/// Unit vector in an n-dimensional complex space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    /// Normalizes any non-zero vector.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        check_dim_range(amplitudes.len())?;
        check_finite(amplitudes.iter().copied())?;
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            amplitudes: amplitudes / Complex64::from(norm),
        })
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(amplitudes))
    }

    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        check_dim_range(n)?;
        if index >= n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: index + 1,
            });
        }
        let mut amplitudes = CVector::zeros(n);
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub(crate) fn from_normalized(amplitudes: CVector) -> Self {
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        check_dim(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|self><self|`
    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }
}

/// Hermitian, unit-trace, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
    /// Eigenvalues, descending, clamped at zero and summing to one.
    spectrum: Vec<f64>,
}

impl DensityOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        check_dim_range(rows)?;
        check_finite(matrix.iter().copied())?;

        let adjoint = matrix.adjoint();
        let deviation = max_abs_diff(&matrix, &adjoint);
        if deviation > VALIDATION_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::TraceNotOne { trace });
        }

        let hermitian = (&matrix + &adjoint).map(|z| z * 0.5);
        let (mut values, vectors) = hermitian_eigen(&hermitian);
        let smallest = values.last().copied().unwrap_or(0.0);
        if smallest < -VALIDATION_TOL {
            return Err(Error::NotPositive {
                eigenvalue: smallest,
            });
        }
        let mut matrix = hermitian;
        if smallest < 0.0 {
            for v in values.iter_mut() {
                *v = v.max(0.0);
            }
            let diag = CMatrix::from_diagonal(&CVector::from_iterator(
                rows,
                values.iter().map(|&v| Complex64::from(v)),
            ));
            matrix = &vectors * diag * vectors.adjoint();
        }
        let trace = matrix.trace().re;
        matrix.apply(|z| *z /= trace);
        let total: f64 = values.iter().sum();
        for v in values.iter_mut() {
            *v /= total;
        }
        Ok(Self {
            matrix,
            spectrum: values,
        })
    }

    pub fn from_pure(state: &PureState) -> Result<Self> {
        Self::new(state.projector())
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_dim_range(n)?;
        let matrix = CMatrix::identity(n, n).map(|z| z / n as f64);
        Ok(Self {
            matrix,
            spectrum: vec![1.0 / n as f64; n],
        })
    }

    /// Diagonal operator carrying `p` on its diagonal.
    pub fn from_diagonal(p: &ProbDist) -> Result<Self> {
        check_dim_range(p.len())?;
        let diag = CVector::from_iterator(p.len(), p.probs().iter().map(|&x| Complex64::from(x)));
        Self::new(CMatrix::from_diagonal(&diag))
    }

    /// `sum_j p_j |a_j><a_j|`
    pub fn from_spectrum(p: &ProbDist, basis: &ObservableBasis) -> Result<Self> {
        check_dim(basis.dim(), p.len())?;
        let u = basis.unitary();
        let diag = CVector::from_iterator(p.len(), p.probs().iter().map(|&x| Complex64::from(x)));
        Self::new(u * CMatrix::from_diagonal(&diag) * u.adjoint())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// `tr rho^2`, computed as the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `U rho U^dagger` for a unitary `U`.
    pub fn conjugated(&self, unitary: &CMatrix) -> Result<Self> {
        check_dim(self.dim(), unitary.nrows())?;
        check_unitary(unitary)?;
        Self::new(unitary * &self.matrix * unitary.adjoint())
    }
}

pub(crate) fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

pub(crate) fn check_unitary(u: &CMatrix) -> Result<()> {
    let (rows, cols) = u.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let deviation = unitarity_deviation(u);
    if deviation > VALIDATION_TOL {
        return Err(Error::NotOrthonormal { deviation });
    }
    Ok(())
}

/// Orthonormal eigenbasis standing in for a non-degenerate observable.
///
/// Column `j` of the unitary is the eigenvector `|a_j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableBasis {
    unitary: CMatrix,
    label: Option<String>,
}

impl ObservableBasis {
    pub fn from_unitary(unitary: CMatrix, label: Option<String>) -> Result<Self> {
        check_dim_range(unitary.nrows())?;
        check_finite(unitary.iter().copied())?;
        check_unitary(&unitary)?;
        Ok(Self {
            unitary: gram_schmidt(unitary),
            label,
        })
    }

    pub fn from_states(states: &[PureState], label: Option<String>) -> Result<Self> {
        let n = states
            .first()
            .map(PureState::dim)
            .ok_or(Error::EmptyDistribution)?;
        check_dim(n, states.len())?;
        for s in states {
            check_dim(n, s.dim())?;
        }
        let unitary = CMatrix::from_fn(n, n, |r, c| states[c].amplitudes[r]);
        Self::from_unitary(unitary, label)
    }

    pub fn computational(n: usize) -> Result<Self> {
        check_dim_range(n)?;
        Ok(Self {
            unitary: CMatrix::identity(n, n),
            label: Some("computational".to_string()),
        })
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn dim(&self) -> usize {
        self.unitary.nrows()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn vector(&self, j: usize) -> PureState {
        PureState::from_normalized(self.unitary.column(j).into_owned())
    }

    /// The basis `{U |a_j>}`.
    pub fn rotated(&self, unitary: &CMatrix) -> Result<Self> {
        check_dim(self.dim(), unitary.nrows())?;
        check_unitary(unitary)?;
        Self::from_unitary(unitary * &self.unitary, self.label.clone())
    }
}

/// Modified Gram-Schmidt on the columns.
fn gram_schmidt(mut m: CMatrix) -> CMatrix {
    let n = m.ncols();
    for j in 0..n {
        for k in 0..j {
            let proj: Complex64 = (0..m.nrows()).map(|r| m[(r, k)].conj() * m[(r, j)]).sum();
            for r in 0..m.nrows() {
                let v = m[(r, k)];
                m[(r, j)] -= proj * v;
            }
        }
        let norm = m.column(j).norm();
        m.column_mut(j).apply(|z| *z /= norm);
    }
    m
}

/// Diagonal elements `<a_j|rho|a_j>` in the given basis, unnormalized.
pub(crate) fn basis_expectations(rho: &CMatrix, basis: &CMatrix) -> Vec<f64> {
    let n = basis.nrows();
    let rho_u = rho * basis;
    (0..basis.ncols())
        .map(|j| {
            (0..n)
                .map(|k| (basis[(k, j)].conj() * rho_u[(k, j)]).re)
                .sum()
        })
        .collect()
}

/// Outcome distribution `p_j = <a_j|rho|a_j>` of measuring `basis` on `rho`.
pub fn measure(rho: &DensityOperator, basis: &ObservableBasis) -> Result<ProbDist> {
    check_dim(rho.dim(), basis.dim())?;
    ProbDist::new(basis_expectations(rho.matrix(), basis.unitary()))
}

/// Post-measurement state `sum_j |a_j><a_j|rho|a_j><a_j|`.
pub fn dephase(rho: &DensityOperator, basis: &ObservableBasis) -> Result<DensityOperator> {
    let p = measure(rho, basis)?;
    DensityOperator::from_spectrum(&p, basis)
}

/// True iff no outcome has probability above `tol` under both distributions.
pub fn nonoverlapping(a: &ProbDist, b: &ProbDist, tol: f64) -> Result<bool> {
    check_dim(a.len(), b.len())?;
    Ok(!a
        .probs()
        .iter()
        .zip(b.probs())
        .any(|(&x, &y)| x > tol && y > tol))
}

fn check_weights(components: usize, w: &Weights) -> Result<()> {
    if components == 0 || w.len() != components {
        return Err(Error::WeightCountMismatch {
            weights: w.len(),
            components,
        });
    }
    Ok(())
}

/// `sum_i w_i p^(i)`
pub fn mix_dists(components: &[ProbDist], w: &Weights) -> Result<ProbDist> {
    check_weights(components.len(), w)?;
    let n = components[0].len();
    let mut mixed = vec![0.0; n];
    for (p, &wi) in components.iter().zip(w.values()) {
        check_dim(n, p.len())?;
        for (m, &x) in mixed.iter_mut().zip(p.probs()) {
            *m += wi * x;
        }
    }
    ProbDist::new(mixed)
}

/// `sum_i w_i rho_i`
pub fn mix_states(components: &[DensityOperator], w: &Weights) -> Result<DensityOperator> {
    check_weights(components.len(), w)?;
    let n = components[0].dim();
    let mut mixed = CMatrix::zeros(n, n);
    for (rho, &wi) in components.iter().zip(w.values()) {
        check_dim(n, rho.dim())?;
        mixed += rho.matrix().map(|z| z * wi);
    }
    DensityOperator::new(mixed)
}

/// Orthogonal supports: the operator norm of `a b` is at most `tol`.
pub fn quantum_nonoverlapping(a: &DensityOperator, b: &DensityOperator, tol: f64) -> Result<bool> {
    check_dim(a.dim(), b.dim())?;
    let product = a.matrix() * b.matrix();
    let norm = product
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max);
    Ok(norm <= tol)
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &DensityOperator, b: &DensityOperator) -> Result<DensityOperator> {
    DensityOperator::new(a.matrix().kronecker(b.matrix()))
}
