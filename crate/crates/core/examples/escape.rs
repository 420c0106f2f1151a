//! Moving a box off a point with a shear that barely moves the unit bidisc.

use polyrank::escape::{find_escape, hand_witness, sup_deviation_bound, verify_escape};
use polyrank::exact::{rat, GaussianRational, MultiPoly, Polydisc};
use polyrank::groebner::Ideal;
use polyrank::pipeline::DEFAULT_SEED;

fn main() -> polyrank::Result<()> {
    // Σ = {(3/2, 0)} lies outside K but inside the box
    let z1 = MultiPoly::var(2, 0);
    let sigma = Ideal::new(2, vec![&z1 - &MultiPoly::constant(2, GaussianRational::from_parts(3, 2, 0, 1)), MultiPoly::var(2, 1)])?;
    let k = Polydisc::centered(2, rat(1, 1))?;
    let bx = Polydisc::centered(2, rat(2, 1))?;
    let eps = rat(1, 10);

    let psi = hand_witness();
    println!("hand witness {psi}");
    println!("  deviation on K ≤ {}", sup_deviation_bound(&psi, &k)?);
    println!("  escape:         {}", verify_escape(&psi, &sigma, &bx, 8)?);

    let found = find_escape(&sigma, &k, &bx, &eps, DEFAULT_SEED, 64)?;
    println!("search found {} after {} candidate(s)", found.automorphism, found.attempts);
    println!("  deviation on K ≤ {}", found.deviation_bound);
    println!("  escape:         {}", found.certificate);
    Ok(())
}
