//! Extremal families: a separated family for a non-compact embedding and a decaying
//! one for a compact embedding.

use morrey_embed::phi::Family;
use morrey_embed::verdict::SpaceSpec;
use morrey_embed::witness::run_witness;
use morrey_embed::Exponent;

fn main() -> morrey_embed::Result<()> {
    let q = Exponent::Finite(2.0);
    let same = SpaceSpec::n(1, 0.5, 2.0, q, Family::Power { u: 2.0 })?;
    let target = SpaceSpec::n(1, 0.0, 2.0, q, Family::Power { u: 2.0 })?;
    for (name, tgt) in [("identity", &same), ("smoothness drop 0.5", &target)] {
        let r = run_witness(&same, tgt, 40, 7)?;
        println!("{name}: plan {:?}", r.plan);
        if let Some(probe) = &r.probe {
            println!("  levels {:?}", probe.levels);
            println!("  max source norm {:.4}", probe.max_source_norm);
            println!("  consecutive target gaps {:?}", probe.consecutive_gaps);
        }
        println!("  beta_hat {:?}, separated {:?}, decay {:?}", r.beta_hat, r.separated, r.decay_factor);
    }
    Ok(())
}
