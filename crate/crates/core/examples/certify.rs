//! Exact Gaussian-rational arithmetic and certified nonvanishing on a polydisc.

use polyrank::exact::{certify_system_nonvanishing, rat, GaussianRational, MultiPoly, Polydisc};

fn main() -> polyrank::Result<()> {
    let z = MultiPoly::var(2, 0);
    let w = MultiPoly::var(2, 1);
    let half_i = GaussianRational::from_parts(0, 1, 1, 2);
    // g = z² + w + (2 + i/2)
    let g = &(&z.pow(2) + &w) + &MultiPoly::constant(2, &GaussianRational::from_i64(2) + &half_i);
    println!("g = {g}");

    let p = [GaussianRational::from_parts(1, 3, 0, 1), GaussianRational::i()];
    println!("g(1/3, i) = {}", g.eval(&p)?);

    // on the unit bidisc |z² + w| ≤ 2 < |2 + i/2|, so g has no zeros there
    let unit = Polydisc::centered(2, rat(1, 1))?;
    println!("unit bidisc:     {}", certify_system_nonvanishing(std::slice::from_ref(&g), &unit, 8)?);
    println!("sup bound there: {}", g.sup_bound(&unit)?);

    // radius 2 contains zeros; the certifier reports that honestly
    let big = Polydisc::centered(2, rat(2, 1))?;
    println!("radius-2 bidisc: {}", certify_system_nonvanishing(&[g], &big, 4)?);
    Ok(())
}
