//! Sequence-space quasi-norms of a sparse dyadic sequence.

use morrey_embed::phi::{Family, PhiSpec};
use morrey_embed::seqspace::{b_norm, besov_sup_norm, n_levels_star, n_norm_morrey, n_norm_star, DyadicIndex, DyadicSeq, NormParams};
use morrey_embed::Exponent;

fn main() -> morrey_embed::Result<()> {
    let d = 2;
    let mut lambda = DyadicSeq::new(d, 6)?;
    lambda.insert(&DyadicIndex::new(0, vec![0, 0]), 1.0)?;
    lambda.insert(&DyadicIndex::new(3, vec![5, 2]), 0.5)?;
    lambda.fill_subcube(2, 6, 0.01)?;
    println!("{} nonzero coefficients up to level {}", lambda.nnz(), lambda.max_level());

    let phi = PhiSpec::new(Family::Power { u: 4.0 }, d)?;
    for q in [Exponent::Finite(1.0), Exponent::Finite(2.0), Exponent::Infinity] {
        let params = NormParams::new(0.5, 2.0, q, phi.clone())?;
        println!(
            "q = {q}: n (pyramid) {:.6}  n (by coordinates) {:.6}  b {:.6}",
            n_norm_star(&lambda, &params)?,
            n_norm_morrey(&lambda, &params)?,
            b_norm(&lambda, &params)?,
        );
    }

    let params = NormParams::new(0.5, 2.0, Exponent::Infinity, phi)?;
    let levels: Vec<String> = n_levels_star(&lambda, &params)?.iter().map(|x| format!("{x:.4}")).collect();
    println!("per-level Morrey quantities: {}", levels.join(" "));
    println!("b^0.5_inf,inf norm: {:.6}", besov_sup_norm(&lambda, 0.5, Exponent::Infinity));
    Ok(())
}
