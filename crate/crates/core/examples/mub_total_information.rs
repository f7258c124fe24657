//! Total information over a complete set of mutually unbiased bases.

use uncertainty::haar::{sample_density, RngSeed};
use uncertainty::totalinfo::{
    build_mub, check_additivity, check_ipr_relation, check_reconstruction, info_quantum,
};

fn main() -> uncertainty::Result<()> {
    for n in [2, 3, 5, 7] {
        let mubs = build_mub(n)?;
        let rho = sample_density(n, &mut RngSeed(n as u64).rng())?;
        let add = check_additivity(&rho, &mubs)?;
        println!(
            "n = {n}: {} bases, I(rho) = {:.6}, sum over bases = {:.6}, residuals {:.1e} / {:.1e} / {:.1e}",
            mubs.bases().len(),
            info_quantum(&rho),
            add.rhs,
            add.residual,
            check_reconstruction(&rho, &mubs)?,
            check_ipr_relation(&rho, &mubs)?
        );
    }
    match build_mub(6) {
        Err(e) => println!("n = 6: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
