//! Continuity and compactness verdicts with the rules that produced them.

use morrey_embed::phi::Family;
use morrey_embed::verdict::{decide, SpaceSpec};
use morrey_embed::Exponent;

fn main() -> morrey_embed::Result<()> {
    let q2 = Exponent::Finite(2.0);
    let pairs = [
        (
            SpaceSpec::n(1, 1.0, 1.0, q2, Family::Power { u: 2.0 })?,
            SpaceSpec::n(1, 0.0, 2.0, q2, Family::Power { u: 4.0 })?,
        ),
        (
            SpaceSpec::n(1, 0.0, 2.0, Exponent::Infinity, Family::InvLog { a: 64.0 })?,
            SpaceSpec::n(1, 0.0, 2.0, Exponent::Infinity, Family::InvLog { a: 64.0 })?,
        ),
        (
            SpaceSpec::b(1, 1.0, 1.0, q2, Family::Power { u: 1.0 })?,
            SpaceSpec::classical_besov(1, -0.5, Exponent::Infinity, Exponent::Infinity)?,
        ),
        (SpaceSpec::b(1, 0.0, 2.0, q2, Family::Power { u: 2.0 })?, SpaceSpec::bmo(1)?),
    ];
    for (src, tgt) in &pairs {
        let v = decide(src, tgt)?;
        println!("{} -> {}", src.label(), tgt.label());
        println!("  continuous {}, compact {}, rules {:?}", v.continuous, v.compact, v.rules);
    }
    let (src, tgt) = &pairs[0];
    println!("\nfull report:\n{}", serde_json::to_string_pretty(&decide(src, tgt)?).unwrap());
    Ok(())
}
