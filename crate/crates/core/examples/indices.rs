//! Critical smoothness indices, weight dominance and `ℓ_q` membership of rates.

use morrey_embed::indices::{
    alpha_rate, dominance_check, ellq_membership, sigma, sigma_bar, sigma_inf, sigma_numeric, xi_rate, PairContext,
};
use morrey_embed::phi::{Family, PhiSpec};
use morrey_embed::{Exponent, RateTerm};

fn main() -> morrey_embed::Result<()> {
    let d = 1;
    let (p1, p2) = (1.0, 2.0);
    let q = Exponent::Finite(2.0);
    let phi1 = PhiSpec::normalized(Family::Power { u: 2.0 }, d)?;
    let phi2 = PhiSpec::normalized(Family::Power { u: 4.0 }, d)?;
    let ctx = PairContext::new(p1, q, &phi1, p2, q, &phi2)?;
    let s1 = 1.0;

    println!("rho = {}", ctx.rho);
    println!("sigma = {}", sigma(s1, &phi1, ctx.rho));
    println!("sigma_inf = {}", sigma_inf(s1, &phi1));
    println!("sigma_bar = {:?}", sigma_bar(s1, &ctx));
    println!("sampled sigma over 200 levels: {:?}", sigma_numeric(s1, &phi1, ctx.rho, 200)?);
    println!("dominance: {:?}", dominance_check(&ctx, 64)?.class);
    println!("alpha rate: {:?}", alpha_rate(&ctx));
    println!("xi rate for s2 = 0: {:?}", xi_rate(&ctx, s1, 0.0));

    for (beta, gamma) in [(0.0, -1.0), (0.0, -0.6), (0.1, 3.0), (0.0, 0.0)] {
        let m = ellq_membership(RateTerm::new(beta, gamma), Exponent::Finite(2.0));
        println!("2^(-{beta} j) j^{gamma} in l_2: {}, in c_0: {}", m.lq, m.c0);
    }
    Ok(())
}
