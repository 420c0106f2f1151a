//! Jets and the submersion property of the translation family F(x, t) = f(x) + t.

use polyrank::exact::{GaussianRational, MultiPoly, PolyMap};
use polyrank::jet::{diagonal_blocks_match, jet_dimension, prolong, verify_submersion, JetFamily};

fn main() -> polyrank::Result<()> {
    let x = MultiPoly::var(2, 0);
    let y = MultiPoly::var(2, 1);
    let f = PolyMap::new(2, vec![&x.pow(2) * &y, &x - &y.pow(3)])?;
    let x0 = [GaussianRational::from_i64(1), GaussianRational::from_parts(1, 2, 0, 1)];

    let j2 = prolong(&f, 2, &x0)?;
    println!("J^2(C^2, C^2) has dimension {}", jet_dimension(2, 2, 2));
    for (alpha, v) in &j2.coefficients {
        let v: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        println!("  ∂^{:?} f(x0) = ({})", alpha.0, v.join(", "));
    }

    let fam = JetFamily::translation(&f);
    for k in 0..=3 {
        let w = verify_submersion(&fam, k, &x0)?;
        println!(
            "k = {k}: rank {}/{} submersion {} lower-triangular {} diagonal = α!·∂_t F {}",
            w.rank,
            w.required_rank,
            w.submersion,
            w.lower_triangular,
            diagonal_blocks_match(&fam, &w, &x0)?
        );
    }
    Ok(())
}
