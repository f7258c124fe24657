//! Random and built-in inputs for the axiom checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::entropy::{BipartiteState, MixtureCase, VolumeFixture};
use crate::error::Result;
use crate::haar::{sample_density, sample_distribution, sample_haar_state, sample_haar_unitary};
use crate::state::{CMatrix, DensityOperator, ProbDist, Weights};

/// `(1, 0, 0)` and `(0, 2/3, 1/3)` mixed with equal weights, giving `(1/2, 1/3, 1/6)`.
pub fn worked_mixture() -> (Vec<ProbDist>, Weights) {
    let components = vec![
        ProbDist::new(vec![1.0, 0.0, 0.0]).expect("valid"),
        ProbDist::new(vec![0.0, 2.0 / 3.0, 1.0 / 3.0]).expect("valid"),
    ];
    (components, Weights::equal(2).expect("valid"))
}

/// Coarse distribution over `coarse_len` outcomes whose last outcome is
/// split in two at a uniform fraction; returns the fine distribution.
pub fn random_split<R: Rng + ?Sized>(rng: &mut R, coarse_len: usize) -> Result<ProbDist> {
    let coarse = sample_distribution(coarse_len, rng)?;
    let mut fine = coarse.probs().to_vec();
    let last = fine.pop().expect("non-empty");
    let t: f64 = rng.random();
    fine.push(last * t);
    fine.push(last * (1.0 - t));
    ProbDist::new(fine)
}

/// Random partition of `total` outcomes into `blocks` non-empty blocks.
fn random_blocks<R: Rng + ?Sized>(rng: &mut R, total: usize, blocks: usize) -> Vec<Vec<usize>> {
    let mut outcomes: Vec<usize> = (0..total).collect();
    outcomes.shuffle(rng);
    let mut cuts: Vec<usize> = (1..total).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(blocks - 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(blocks);
    let mut start = 0;
    for end in cuts.into_iter().chain(std::iter::once(total)) {
        out.push(outcomes[start..end].to_vec());
        start = end;
    }
    out
}

fn spread<R: Rng + ?Sized>(rng: &mut R, total: usize, block: &[usize]) -> Result<ProbDist> {
    let local = if block.len() == 1 {
        vec![1.0]
    } else {
        sample_distribution(block.len(), rng)?.probs().to_vec()
    };
    let mut probs = vec![0.0; total];
    for (&j, &p) in block.iter().zip(&local) {
        probs[j] = p;
    }
    ProbDist::new(probs)
}

/// Pairwise non-overlapping components on a random block partition of
/// `total` outcomes, with random mixing weights.
pub fn random_nonoverlapping<R: Rng + ?Sized>(
    rng: &mut R,
    total: usize,
    blocks: usize,
) -> Result<(Vec<ProbDist>, Weights)> {
    let parts = random_blocks(rng, total, blocks.clamp(1, total));
    let components = parts
        .iter()
        .map(|b| spread(rng, total, b))
        .collect::<Result<Vec<_>>>()?;
    let weights = if parts.len() == 1 {
        Weights::new(vec![1.0])?
    } else {
        Weights::from(sample_distribution(parts.len(), rng)?)
    };
    Ok((components, weights))
}

/// Point masses on every outcome, mixed with random weights.
pub fn random_point_masses<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
) -> Result<(Vec<ProbDist>, Weights)> {
    let components = (0..n)
        .map(|i| ProbDist::point_mass(n, i))
        .collect::<Result<Vec<_>>>()?;
    Ok((components, Weights::from(sample_distribution(n, rng)?)))
}

fn block_diagonal(n: usize, offset: usize, block: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m.view_mut((offset, offset), block.shape()).copy_from(block);
    m
}

/// `cases` instances of every part of a [`VolumeFixture`].
///
/// Mixture components are copies of one base ensemble moved onto disjoint
/// outcome blocks (classical) or orthogonal subspaces (quantum), so their
/// volumes agree exactly. Bipartite states are Hilbert-Schmidt random and
/// random pure states, both generically correlated.
pub fn random_volume_fixture<R: Rng + ?Sized>(rng: &mut R, cases: usize) -> Result<VolumeFixture> {
    let mut fixture = VolumeFixture::default();
    for _ in 0..cases {
        let k = rng.random_range(2..=4);
        let m = rng.random_range(2..=4);

        let base = sample_distribution(k, rng)?;
        let mut outcomes: Vec<usize> = (0..k * m).collect();
        outcomes.shuffle(rng);
        let components = outcomes
            .chunks(k)
            .map(|block| {
                let mut probs = vec![0.0; k * m];
                for (&j, &p) in block.iter().zip(base.probs()) {
                    probs[j] = p;
                }
                ProbDist::new(probs)
            })
            .collect::<Result<Vec<_>>>()?;
        fixture.classical_mixtures.push(MixtureCase {
            components,
            weights: Some(Weights::from(sample_distribution(m, rng)?)),
        });

        let base = sample_density(k, rng)?;
        let u = sample_haar_unitary(k * m, rng);
        let components = (0..m)
            .map(|i| {
                let placed = block_diagonal(k * m, i * k, base.matrix());
                DensityOperator::new(&u * placed * u.adjoint())
            })
            .collect::<Result<Vec<_>>>()?;
        fixture.quantum_mixtures.push(MixtureCase {
            components,
            weights: Some(Weights::from(sample_distribution(m, rng)?)),
        });

        let (da, db) = (rng.random_range(2..=4), rng.random_range(2..=4));
        fixture
            .products
            .push((sample_density(da, rng)?, sample_density(db, rng)?));

        let state = if rng.random_bool(0.5) {
            sample_density(da * db, rng)?
        } else {
            DensityOperator::from_pure(&sample_haar_state(da * db, rng))?
        };
        fixture.bipartite.push(BipartiteState {
            state,
            dim_a: da,
            dim_b: db,
        });

        let n = rng.random_range(2..=6);
        fixture
            .conjugations
            .push((sample_density(n, rng)?, sample_haar_unitary(n, rng)));

        let n = rng.random_range(2..=10);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        fixture
            .permutations
            .push((sample_distribution(n, rng)?, perm));
    }
    Ok(fixture)
}
