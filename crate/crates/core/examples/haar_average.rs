//! Monte Carlo check of the Haar average of the classical total information.

use uncertainty::haar::{sample_density, verify_average_identity, MonteCarlo, RngSeed};

fn main() -> uncertainty::Result<()> {
    for n in [2, 3, 4] {
        let rho = sample_density(n, &mut RngSeed(100 + n as u64).rng())?;
        let r = verify_average_identity(&rho, &MonteCarlo::new(100_000, 42))?;
        println!(
            "n = {n}: MC {:.6} +- {:.1e}, exact {:.6}, z = {:.2} {}",
            r.lhs,
            r.estimate.std_error,
            r.rhs,
            r.z_score,
            if r.pass { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}
