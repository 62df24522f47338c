//! Weight functions: admissibility in `G_p`, dyadic samples and asymptotic rates.

use morrey_embed::phi::{validate_gp, validate_intc, Family, PhiSpec};
use morrey_embed::Exponent;

fn main() -> morrey_embed::Result<()> {
    let d = 1;
    let p = 2.0;
    let families = [
        Family::Power { u: 2.0 },
        Family::Power { u: 4.0 },
        Family::PiecewisePower { u: Exponent::Finite(2.0), v: Exponent::Infinity },
        Family::PowerLog { p: 2.0, a: -1.0, l: 2.0 },
        Family::InvLog { a: 64.0 },
        Family::Constant,
        Family::Power { u: 1.0 },
    ];
    println!("{:<36} {:>6} {:>10} {:>10}  samples j=0..4", "weight", "G_2", "beta", "gamma");
    for f in families {
        let phi = PhiSpec::normalized(f, d)?;
        let gp = validate_gp(&phi, p, 64)?;
        let r = phi.rate();
        let samples: Vec<String> = phi.dyadic_samples(4)?.iter().map(|x| format!("{x:.4}")).collect();
        println!("{:<36} {:>6} {:>10.4} {:>10.4}  {}", phi.label(), gp.ok(), r.beta, r.gamma, samples.join(" "));
    }

    // the Triebel-Lizorkin scale needs φ(t) t^{-ε} almost increasing
    let phi = PhiSpec::normalized(Family::Power { u: 4.0 }, d)?;
    let intc = validate_intc(&phi, 0.1, 40)?;
    println!("\npower(u=4) with eps = 0.1: holds {}, constant {:.3}", intc.holds, intc.constant);

    // a product weight carries the product rate
    let a = PhiSpec::normalized(Family::Power { u: 2.0 }, d)?;
    let b = PhiSpec::normalized(Family::InvLog { a: 64.0 }, d)?;
    let prod = PhiSpec::product(&[(&a, 0.5), (&b, 0.5)])?;
    println!("sqrt(power(u=2) * inv_log): rate {:?}", prod.rate());
    Ok(())
}
