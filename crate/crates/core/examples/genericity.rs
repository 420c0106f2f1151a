//! The generic dimension law and the perturbation that shrinks a degeneracy locus.

use polyrank::exact::{rat, MultiPoly, PolyMap, Polydisc};
use polyrank::genericity::{dimension_law_trial, reduce_degeneracy, PerturbationConfig};
use polyrank::pipeline::DEFAULT_SEED;

fn main() -> polyrank::Result<()> {
    let cfg = PerturbationConfig::default().with_seed(DEFAULT_SEED);
    for (n, p, r) in [(2, 2, 2), (3, 2, 2), (2, 3, 2), (2, 2, 1)] {
        let law = dimension_law_trial(n, p, r, &cfg, 20)?;
        println!(
            "(n,p,r) = ({n},{p},{r}): expected dim {:>2}, histogram {:?}, pass {}",
            law.expected_dimension, law.achieved_dimensions, law.pass
        );
    }

    // (z1², z2², 0) drops rank along both axes: Σ has dimension 1 > n - 2
    let z1 = MultiPoly::var(2, 0);
    let z2 = MultiPoly::var(2, 1);
    let f = PolyMap::new(2, vec![z1.pow(2), z2.pow(2), MultiPoly::zero(2)])?;
    let keep = Polydisc::centered(2, rat(1, 1))?;
    let eps = rat(1, 10);
    let pcfg = cfg.with_magnitude(rat(1, 20)).with_vanish_order(2);
    let red = reduce_degeneracy(&f, 2, None, &keep, &eps, &pcfg, 16)?;
    println!("perturbed map: {}", red.map);
    println!(
        "dim Σ {} -> {}, deviation on the unit bidisc ≤ {} after {} attempt(s)",
        red.dimension_before, red.dimension_after, red.deviation_bound, red.attempts
    );
    Ok(())
}
