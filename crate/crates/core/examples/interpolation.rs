//! The interpolation inequality `‖λ‖_θ ≤ ‖λ‖_1^{1−θ} ‖λ‖_2^θ` on random sequences.

use morrey_embed::phi::{Family, PhiSpec};
use morrey_embed::seqspace::NormParams;
use morrey_embed::witness::{gn_check, random_seq, Distribution, GnSecond};
use morrey_embed::Exponent;

fn main() -> morrey_embed::Result<()> {
    let d = 2;
    let first = NormParams::new(1.0, 2.0, Exponent::Finite(1.0), PhiSpec::new(Family::Power { u: 4.0 }, d)?)?;
    let second = NormParams::new(-0.5, 1.0, Exponent::Infinity, PhiSpec::new(Family::Constant, d)?)?;
    for seed in 0..5 {
        let lambda = random_seq(seed, d, 4, 0.3, Distribution::DyadicDecaying)?;
        for theta in [0.25, 0.5, 0.75] {
            let r = gn_check(&lambda, &first, &GnSecond::Weighted(second.clone()), theta)?;
            println!(
                "seed {seed} theta {theta}: ratio {:.6}, worst cube {:.6} over {} cubes",
                r.ratio, r.max_cube_ratio, r.cubes_checked
            );
        }
    }
    let lambda = random_seq(9, d, 4, 0.5, Distribution::Uniform01)?;
    let r = gn_check(&lambda, &first, &GnSecond::Sup { s: -1.0, q: Exponent::Infinity }, 0.5)?;
    println!("sup-type second space: ratio {:.6}", r.ratio);
    Ok(())
}
