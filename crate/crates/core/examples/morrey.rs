//! Embeddings between generalized Morrey spaces and Lebesgue spaces.

use morrey_embed::phi::Family;
use morrey_embed::verdict::{decide, SpaceSpec};
use morrey_embed::Exponent;

fn main() -> morrey_embed::Result<()> {
    let d = 1;
    let pairs = [
        (SpaceSpec::m(d, 3.0, Family::Power { u: 4.0 })?, SpaceSpec::m(d, 2.0, Family::Power { u: 3.0 })?),
        (SpaceSpec::m(d, 2.0, Family::Power { u: 3.0 })?, SpaceSpec::m(d, 2.0, Family::Power { u: 4.0 })?),
        (SpaceSpec::m(d, 2.0, Family::Constant)?, SpaceSpec::m(d, 1.0, Family::Constant)?),
        (SpaceSpec::lr(d, Exponent::Finite(4.0))?, SpaceSpec::m(d, 2.0, Family::Power { u: 3.0 })?),
        (SpaceSpec::m(d, 2.0, Family::Power { u: 3.0 })?, SpaceSpec::lr(d, Exponent::Finite(2.0))?),
    ];
    for (src, tgt) in &pairs {
        let v = decide(src, tgt)?;
        println!("{:<32} -> {:<32} continuous {:<7} compact {:<7} {:?}", src.label(), tgt.label(), v.continuous.to_string(), v.compact.to_string(), v.rules);
    }
    Ok(())
}
