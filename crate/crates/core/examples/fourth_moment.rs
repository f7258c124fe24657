//! Fourth moment of Haar-random overlaps and the fitted alpha, beta.

use uncertainty::haar::{
    estimate_alpha_beta, estimate_fourth_moment, fourth_moment_exact, MonteCarlo,
};

fn main() -> uncertainty::Result<()> {
    for n in 2..=6 {
        let est = estimate_fourth_moment(n, &MonteCarlo::new(100_000, n as u64))?;
        println!(
            "n = {n}: E|<a|b>|^4 = {:.5} +- {:.1e} (exact {:.5})",
            est.mean,
            est.std_error,
            fourth_moment_exact(n)
        );
    }
    for n in [2, 3, 5] {
        let ab = estimate_alpha_beta(n, &MonteCarlo::new(100_000, 10 + n as u64).parallel(4))?;
        println!(
            "n = {n}: alpha = {:.4} (expected {:.4}), beta = {:.4} (expected {:.4})",
            ab.alpha,
            ab.expected_alpha(),
            ab.beta,
            ab.expected_beta()
        );
    }
    Ok(())
}
