//! Both forms of the grouping axiom on the worked example and a random split.

use uncertainty::entropy::{
    check_faddeev, check_grouping_mixture, faddeev_mixture_decomposition, shannon,
};
use uncertainty::fixtures::{random_split, worked_mixture};
use uncertainty::haar::RngSeed;
use uncertainty::{mix_dists, ProbDist};

fn main() -> uncertainty::Result<()> {
    let (components, w) = worked_mixture();
    let mixed = mix_dists(&components, &w)?;
    println!("mixture            {:?}", mixed.probs());
    println!("H(mixture)         {:.12}", shannon(&mixed));
    println!(
        "mixture residual   {:.3e}",
        check_grouping_mixture(&components, &w)?
    );

    let fine = ProbDist::new(vec![0.5, 1.0 / 3.0, 1.0 / 6.0])?;
    println!("Faddeev residual   {:.3e}", check_faddeev(&fine)?);

    let mut rng = RngSeed(1).rng();
    let fine = random_split(&mut rng, 5)?;
    let (parts, w) = faddeev_mixture_decomposition(&fine)?;
    println!(
        "random split of 5 outcomes: Faddeev {:.3e}, as a mixture of {} {:.3e}",
        check_faddeev(&fine)?,
        parts.len(),
        check_grouping_mixture(&parts, &w)?
    );
    Ok(())
}
