//! Exponential-entropy volume: mixture, product and invariance postulates.

use uncertainty::entropy::{check_volume_postulates, volume_classical, volume_quantum};
use uncertainty::fixtures::random_volume_fixture;
use uncertainty::haar::RngSeed;
use uncertainty::{DensityOperator, ProbDist};

fn main() -> uncertainty::Result<()> {
    println!(
        "V(uniform 4)       {:.12}",
        volume_classical(&ProbDist::uniform(4)?)
    );
    println!(
        "V(I/3)             {:.12}",
        volume_quantum(&DensityOperator::maximally_mixed(3)?)
    );

    let fixture = random_volume_fixture(&mut RngSeed(7).rng(), 50)?;
    let report = check_volume_postulates(&fixture)?;
    for (name, o) in [
        ("mixture", &report.mixture),
        ("product", &report.product),
        ("invariance", &report.invariance),
    ] {
        println!(
            "{name:<11} cases {:>4}  max residual {:.3e}  tolerance {:.0e}  {}",
            o.cases,
            o.max_residual,
            o.tolerance,
            if o.pass { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}
