//! Runs the finite-stage approximation on a map whose critical locus is the origin.
//!
//! f(z1, z2) = (z1², z2², z1² + z2²) has rank 2 away from the coordinate axes, so on
//! a small bidisc around (1, 1) it is already of rank 2; on the radius-2 bidisc it is not.

use polyrank::exact::{rat, GaussianRational, MultiPoly, PolyMap, Polydisc};
use polyrank::pipeline::{emit_report, reverify_report, run_pipeline, PipelineConfig};

fn main() -> polyrank::Result<()> {
    let z1 = MultiPoly::var(2, 0);
    let z2 = MultiPoly::var(2, 1);
    let f = PolyMap::new(2, vec![z1.pow(2), z2.pow(2), &z1.pow(2) + &z2.pow(2)])?;
    let one = GaussianRational::from_i64(1);
    let k = Polydisc::uniform(vec![one.clone(), one], rat(1, 2))?;
    let q = Polydisc::centered(2, rat(2, 1))?;
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok());
    let mut cfg = PipelineConfig::new(2, k, q, rat(1, 10));
    if let Some(s) = seed {
        cfg = cfg.with_seed(s);
    }

    let result = run_pipeline(&f, &cfg)?;
    for s in &result.stages {
        println!(
            "stage {}: dim Σ {} -> {}, escape via {} ({} attempts), deviation ≤ {}",
            s.stage, s.sigma_dim_before, s.sigma_dim_after, s.automorphism, s.escape_attempts, s.deviation_bound
        );
    }
    println!("rank certificate: {}", result.rank_certificate);
    println!("total deviation on K ≤ {} < ε = {}", result.deviation_bound, cfg.eps);

    let report = emit_report(&result, &cfg);
    let check = reverify_report(&report)?;
    println!("independent re-verification: {}", if check.ok() { "ok" } else { "FAILED" });
    Ok(())
}
