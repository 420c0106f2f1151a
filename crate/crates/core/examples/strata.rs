//! Rank strata: Jacobian minors, the degeneracy locus and the Schur-complement chart.

use polyrank::exact::{GaussianRational, MultiPoly, PolyMap};
use polyrank::linalg;
use polyrank::strata::{jacobian, rank_at, schur_residual, stratum_report};

fn g(x: i64) -> GaussianRational {
    GaussianRational::from_i64(x)
}

fn main() -> polyrank::Result<()> {
    let z1 = MultiPoly::var(2, 0);
    let z2 = MultiPoly::var(2, 1);

    // Whitney's cusp map (z1, z2) ↦ (z1, z2³ + z1·z2) folds along a parabola.
    let cusp = PolyMap::new(2, vec![z1.clone(), &z2.pow(3) + &(&z1 * &z2)])?;
    println!("df = {:?}", jacobian(&cusp).entries().iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
    println!("rank 2 stratum: {:?}", stratum_report(&cusp, 2)?);
    println!("rank at (-3, 1): {}", rank_at(&cusp, &[g(-3), g(1)])?);
    println!("rank at (1, 1):  {}", rank_at(&cusp, &[g(1), g(1)])?);

    // (z1², z2², z1² + z2²): Σ for r = 2 is the union of the two axes
    let squares = PolyMap::new(2, vec![z1.pow(2), z2.pow(2), &z1.pow(2) + &z2.pow(2)])?;
    println!("squares, r = 2: {:?}", stratum_report(&squares, 2)?);

    // rank-1 3×3 matrix: the Schur residual of the leading 1×1 block vanishes
    let a = vec![vec![g(1), g(2), g(3)], vec![g(2), g(4), g(6)], vec![g(-1), g(-2), g(-3)]];
    let res = schur_residual(&a, 1)?;
    println!("rank {} and residual zero: {}", linalg::rank(&a), linalg::is_zero(&res));
    Ok(())
}
