//! Seeded generic perturbation `f ↦ f + P` and the dimension law for `Σ_{f,r}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{monomials_up_to, GaussianRational, MultiPoly, PolyMap, Polydisc};
use crate::groebner::Ideal;
use crate::rng::SplitMix64;
use crate::strata::{expected_codim, minors_ideal};

/// Real and imaginary parts are `magnitude · k / COEFF_DEN` with `|k| ≤ COEFF_DEN / 2`,
/// so every coefficient has `|Re| + |Im| ≤ magnitude`.
pub const COEFF_DEN: i64 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbationConfig {
    pub degree: u32,
    pub magnitude: BigRational,
    /// 0 or 2; with 2 no constant or linear terms are drawn.
    pub vanish_order: u32,
    pub seed: u64,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        Self { degree: 2, magnitude: BigRational::one(), vanish_order: 0, seed: 0 }
    }
}

impl PerturbationConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_magnitude(mut self, magnitude: BigRational) -> Self {
        self.magnitude = magnitude;
        self
    }

    pub fn with_vanish_order(mut self, vanish_order: u32) -> Self {
        self.vanish_order = vanish_order;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.degree == 0 {
            return Err(Error::InvalidInput("perturbation degree must be at least 1".into()));
        }
        if self.vanish_order != 0 && self.vanish_order != 2 {
            return Err(Error::InvalidInput(format!("vanish order {} is not 0 or 2", self.vanish_order)));
        }
        if self.magnitude.is_negative() {
            return Err(Error::InvalidInput("negative magnitude".into()));
        }
        Ok(())
    }
}

fn draw_coefficient(rng: &mut SplitMix64, magnitude: &BigRational) -> GaussianRational {
    let half = COEFF_DEN / 2;
    let den = BigRational::from_integer(BigInt::from(COEFF_DEN));
    let mut part = || magnitude * BigRational::from_integer(BigInt::from(rng.range_i64(-half, half))) / &den;
    let re = part();
    let im = part();
    GaussianRational::new(re, im)
}

fn random_map_from(n: usize, p: usize, cfg: &PerturbationConfig, rng: &mut SplitMix64) -> PolyMap {
    let monos: Vec<_> = monomials_up_to(n, cfg.degree).into_iter().filter(|m| m.degree() >= cfg.vanish_order).collect();
    let components = (0..p)
        .map(|_| MultiPoly::from_terms(n, monos.iter().map(|m| (m.0.clone(), draw_coefficient(rng, &cfg.magnitude)))))
        .collect();
    PolyMap::new(n, components).expect("components built with n variables")
}

/// Random polynomial map of degree ≤ `cfg.degree`; a pure function of `(n, p, cfg)`.
pub fn random_poly_map(n: usize, p: usize, cfg: &PerturbationConfig) -> Result<PolyMap> {
    cfg.validate()?;
    if n == 0 || p == 0 {
        return Err(Error::InvalidInput("dimensions must be positive".into()));
    }
    Ok(random_map_from(n, p, cfg, &mut SplitMix64::new(cfg.seed)))
}

#[derive(Clone, Debug)]
pub struct Perturbation {
    pub map: PolyMap,
    pub added: PolyMap,
    /// Monomial-norm bound for `sup_R |P|`.
    pub sup_bound: BigRational,
}

/// `f_P = f + P` (translation spray) with the sup bound of `P` on `region`.
/// The bound never exceeds `magnitude · (terms per component) · max(R̂, 1)^degree`.
pub fn perturb(f: &PolyMap, cfg: &PerturbationConfig, region: &Polydisc) -> Result<Perturbation> {
    if region.dim() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: region.dim() });
    }
    let added = random_poly_map(f.n(), f.p(), cfg)?;
    let sup_bound = max_sup_bound(&added, region)?;
    Ok(Perturbation { map: f.add(&added)?, added, sup_bound })
}

/// `max_i sup_bound(P_i, region)`.
pub fn max_sup_bound(p: &PolyMap, region: &Polydisc) -> Result<BigRational> {
    let mut best = BigRational::zero();
    for c in p.components() {
        let b = c.sup_bound(region)?;
        if b > best {
            best = b;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub n: usize,
    pub p: usize,
    pub r: usize,
    pub degree: u32,
    pub trials: usize,
    pub seed: u64,
    pub expected_dimension: i64,
    /// Trial count per achieved dimension, keys `−1..=n`.
    pub achieved_dimensions: BTreeMap<i64, usize>,
    pub pass: bool,
}

/// Draws `trials` random maps (trial `k` uses the stream derived from `(seed, k)`)
/// and records `dim Σ_{f,r}` for each.
pub fn dimension_law_trial(n: usize, p: usize, r: usize, cfg: &PerturbationConfig, trials: usize) -> Result<LawReport> {
    cfg.validate()?;
    let d = expected_codim(n, p, r)? as i64;
    let expected = (n as i64 - d).max(-1);
    let dims = (0..trials)
        .into_par_iter()
        .map(|k| {
            let f = random_map_from(n, p, cfg, &mut SplitMix64::derive(cfg.seed, k as u64));
            Ok(minors_ideal(&f, r)?.dimension())
        })
        .collect::<Result<Vec<i64>>>()?;
    let mut achieved: BTreeMap<i64, usize> = (-1..=n as i64).map(|k| (k, 0)).collect();
    for d in &dims {
        *achieved.entry(*d).or_default() += 1;
    }
    Ok(LawReport {
        n,
        p,
        r,
        degree: cfg.degree,
        trials,
        seed: cfg.seed,
        expected_dimension: expected,
        pass: dims.iter().all(|&x| x == expected),
        achieved_dimensions: achieved,
    })
}

/// `f⁻¹(V(I_A))`: every generator of `I_A` composed with `f`.
pub fn pullback_ideal(f: &PolyMap, avoid: &Ideal) -> Result<Ideal> {
    if avoid.nvars() != f.p() {
        return Err(Error::ArityMismatch { expected: f.p(), got: avoid.nvars() });
    }
    let gens = avoid.generators().iter().map(|g| g.compose(f.components())).collect::<Result<Vec<_>>>()?;
    Ideal::new(f.n(), gens)
}

/// Ideal of `Σ_{f,r} ∪ f⁻¹(A)`, or of `Σ_{f,r}` alone.
pub fn obstruction_ideal(f: &PolyMap, r: usize, avoid: Option<&Ideal>) -> Result<Ideal> {
    let sigma = minors_ideal(f, r)?;
    match avoid {
        Some(a) => sigma.product(&pullback_ideal(f, a)?),
        None => Ok(sigma),
    }
}

/// Result of [`reduce_degeneracy`]; `attempts == 0` means `f` was already good.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub map: PolyMap,
    pub deviation_bound: BigRational,
    pub dimension_before: i64,
    pub dimension_after: i64,
    pub seed_used: Option<u64>,
    pub attempts: u32,
    pub obstruction: Ideal,
}

/// Perturbs `f` until `dim(Σ_{f,r} ∪ f⁻¹(A)) ≤ n − 2` with deviation `< ε` on `keep`.
/// Attempt `a` uses seed `cfg.seed + a` and magnitude `cfg.magnitude / 2^a`.
pub fn reduce_degeneracy(
    f: &PolyMap,
    r: usize,
    avoid: Option<&Ideal>,
    keep: &Polydisc,
    eps: &BigRational,
    cfg: &PerturbationConfig,
    budget: u32,
) -> Result<Reduction> {
    let d = expected_codim(f.n(), f.p(), r)?;
    if d < 2 {
        return Err(Error::HypothesisViolation(format!(
            "expected codimension (n-r+1)(p-r+1) = {d} < 2 for n={}, p={}, r={r}",
            f.n(),
            f.p()
        )));
    }
    let target = f.n() as i64 - 2;
    let obstruction = obstruction_ideal(f, r, avoid)?;
    let before = obstruction.dimension();
    if before <= target {
        return Ok(Reduction {
            map: f.clone(),
            deviation_bound: BigRational::zero(),
            dimension_before: before,
            dimension_after: before,
            seed_used: None,
            attempts: 0,
            obstruction,
        });
    }
    let mut magnitude = cfg.magnitude.clone();
    for a in 0..budget {
        let seed = cfg.seed.wrapping_add(a as u64);
        let attempt_cfg = cfg.clone().with_seed(seed).with_magnitude(magnitude.clone());
        let pert = perturb(f, &attempt_cfg, keep)?;
        if pert.sup_bound < *eps {
            let obstruction = obstruction_ideal(&pert.map, r, avoid)?;
            let after = obstruction.dimension();
            if after <= target {
                return Ok(Reduction {
                    map: pert.map,
                    deviation_bound: pert.sup_bound,
                    dimension_before: before,
                    dimension_after: after,
                    seed_used: Some(seed),
                    attempts: a + 1,
                    obstruction,
                });
            }
        }
        magnitude /= BigRational::from_integer(BigInt::from(2));
    }
    Err(Error::BudgetExhausted(format!("no perturbation reduced the degeneracy locus in {budget} attempts")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn z(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn three_quadrics() -> PolyMap {
        PolyMap::new(2, vec![z(2, 0).pow(2), z(2, 1).pow(2), &z(2, 0).pow(2) + &z(2, 1).pow(2)]).unwrap()
    }

    #[test]
    fn determinism_and_vanishing() {
        let cfg = PerturbationConfig::default().with_seed(11);
        assert_eq!(random_poly_map(2, 3, &cfg).unwrap(), random_poly_map(2, 3, &cfg).unwrap());
        assert_ne!(random_poly_map(2, 3, &cfg).unwrap(), random_poly_map(2, 3, &cfg.clone().with_seed(12)).unwrap());
        let v = random_poly_map(3, 2, &cfg.with_vanish_order(2)).unwrap();
        assert!(v.components().iter().all(|c| c.terms().keys().all(|m| m.degree() >= 2)));
    }

    #[test]
    fn coefficient_bound() {
        let cfg = PerturbationConfig::default().with_magnitude(rat(1, 3)).with_seed(5);
        let p = random_poly_map(2, 2, &cfg).unwrap();
        assert!(p.components().iter().all(|c| c.terms().values().all(|a| a.l1_norm() <= rat(1, 3))));
    }

    #[test]
    fn perturb_examples() {
        let f = three_quadrics();
        let r = Polydisc::centered(2, rat(1, 1)).unwrap();
        let zero = PerturbationConfig::default().with_magnitude(BigRational::zero());
        assert_eq!(perturb(&f, &zero, &r).unwrap().map, f);

        let cfg = PerturbationConfig::default().with_vanish_order(2).with_seed(3);
        let fp = perturb(&f, &cfg, &r).unwrap().map;
        let origin = [GaussianRational::zero(), GaussianRational::zero()];
        assert_eq!(fp.eval(&origin).unwrap(), f.eval(&origin).unwrap());
        let j = |m: &PolyMap| crate::strata::jacobian(m).eval(&origin).unwrap();
        assert_eq!(j(&fp), j(&f));

        let cfg = PerturbationConfig::default().with_magnitude(rat(1, 100)).with_seed(7);
        let fp = perturb(&f, &cfg, &r).unwrap().map;
        assert_eq!(minors_ideal(&fp, 2).unwrap().dimension(), 0);
    }

    #[test]
    fn pullbacks() {
        let w = |i| MultiPoly::var(2, i);
        let a = Ideal::new(2, vec![w(0), w(1)]).unwrap();
        let f = PolyMap::new(2, vec![z(2, 0).pow(2), z(2, 1).pow(2)]).unwrap();
        let pb = pullback_ideal(&f, &a).unwrap();
        assert_eq!(pb.generators(), &[z(2, 0).pow(2), z(2, 1).pow(2)]);
        assert_eq!(pb.dimension(), 0);
        assert_eq!(pullback_ideal(&PolyMap::identity(2), &a).unwrap().generators(), a.generators());
        let diag = PolyMap::new(2, vec![z(2, 0), z(2, 0)]).unwrap();
        let pb = pullback_ideal(&diag, &Ideal::new(2, vec![&w(0) - &w(1)]).unwrap()).unwrap();
        assert!(pb.generators()[0].is_zero());
        assert_eq!(pb.dimension(), 2);
        assert!(pullback_ideal(&diag, &Ideal::new(3, vec![]).unwrap()).is_err());
    }

    #[test]
    fn reduce_examples() {
        let keep = Polydisc::centered(2, rat(2, 1)).unwrap();
        let cfg = PerturbationConfig::default().with_magnitude(rat(1, 100)).with_seed(1);
        let red = reduce_degeneracy(&three_quadrics(), 2, None, &keep, &rat(1, 10), &cfg, 16).unwrap();
        assert_eq!((red.dimension_before, red.dimension_after), (1, 0));
        assert!(red.deviation_bound < rat(1, 10));

        let fine = PolyMap::new(2, vec![z(2, 0), z(2, 1), &z(2, 0) * &z(2, 1)]).unwrap();
        let red = reduce_degeneracy(&fine, 2, None, &keep, &rat(1, 10), &cfg, 4).unwrap();
        assert_eq!(red.attempts, 0);
        assert_eq!(red.map, fine);

        let err = reduce_degeneracy(&PolyMap::identity(2), 2, None, &keep, &rat(1, 10), &cfg, 4).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn law_report_shape() {
        let cfg = PerturbationConfig::default().with_seed(2);
        let rep = dimension_law_trial(2, 2, 2, &cfg, 5).unwrap();
        assert_eq!(rep.achieved_dimensions.values().sum::<usize>(), 5);
        assert_eq!(rep.expected_dimension, 1);
        assert_eq!(rep, dimension_law_trial(2, 2, 2, &cfg, 5).unwrap());
    }
}
