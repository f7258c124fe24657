//! Uncertainty measures for classical and quantum ensembles.
//!
//! - [`entropy`]: Shannon and von Neumann entropies, the grouping axiom in
//!   both its forms, and the exponential-entropy volume with its postulates.
//! - [`totalinfo`]: the total information measures `I(p)`, `I(rho)`,
//!   inverse participation ratios and mutually unbiased bases.
//! - [`haar`]: Haar sampling and Monte Carlo checks of unitary-group averages.
//! - [`document`], [`report`], [`commands`]: file formats and the command layer
//!   behind the `uncertainty` binary.
//!
//! ```
//! use uncertainty::{entropy, totalinfo, DensityOperator, PureState};
//!
//! let rho = DensityOperator::from_pure(&PureState::basis_state(3, 0)?)?;
//! let mubs = totalinfo::build_mub(3)?;
//! let sum = totalinfo::check_additivity(&rho, &mubs)?;
//! assert!(sum.residual < 1e-10);
//! assert!(entropy::von_neumann(&rho).abs() < 1e-12);
//! # Ok::<(), uncertainty::Error>(())
//! ```

pub mod commands;
pub mod document;
pub mod entropy;
pub mod error;
pub mod fixtures;
pub mod haar;
pub mod report;
pub mod state;
pub mod totalinfo;

pub use error::{Error, Result};
pub use state::{
    dephase, measure, mix_dists, mix_states, nonoverlapping, quantum_nonoverlapping, tensor,
    CMatrix, CVector, DensityOperator, ObservableBasis, ProbDist, PureState, Weights,
};
