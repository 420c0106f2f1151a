//! Gröbner bases, ideal membership and the dimension of affine varieties.

use polyrank::exact::{GaussianRational, MultiPoly};
use polyrank::groebner::Ideal;

fn main() -> polyrank::Result<()> {
    let x = MultiPoly::var(3, 0);
    let y = MultiPoly::var(3, 1);
    let z = MultiPoly::var(3, 2);
    let one = MultiPoly::one(3);

    let cases = [
        ("twisted cubic", vec![&y - &x.pow(2), &z - &x.pow(3)]),
        ("two planes", vec![&x * &y]),
        ("a point", vec![x.clone(), &y - &one, z.clone()]),
        ("empty", vec![&x * &y - one.clone(), x.clone()]),
        ("zero ideal", vec![]),
    ];
    for (name, gens) in cases {
        let ideal = Ideal::new(3, gens)?;
        println!("{name:>14}: dim {:>2}, basis of {} elements", ideal.dimension(), ideal.groebner_basis().len());
    }

    let cubic = Ideal::new(3, vec![&y - &x.pow(2), &z - &x.pow(3)])?;
    let probe = &(&x * &z) - &y.pow(2);
    println!("xz - y² in the twisted cubic ideal: {}", cubic.contains(&probe)?);
    println!("normal form of x⁴: {}", cubic.reduce(&x.pow(4))?);

    let circle = Ideal::new(2, vec![
        &(&MultiPoly::var(2, 0).pow(2) + &MultiPoly::var(2, 1).pow(2)) - &MultiPoly::constant(2, GaussianRational::from_i64(1)),
        &MultiPoly::var(2, 0) - &MultiPoly::var(2, 1),
    ])?;
    if let Some(e) = circle.univariate_eliminant(0)? {
        println!("eliminant in z1 for circle ∩ diagonal: {e}");
    }
    Ok(())
}
