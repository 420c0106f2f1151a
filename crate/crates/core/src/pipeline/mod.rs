//! Finite-stage approximation: from a map of rank `≥ r` on `K` to a polynomial
//! map of certified rank `≥ r` on `Q ⊃ K` that stays `ε`-close on `K`.
//!
//! Stage `j` of `J` works on `Q_j`, the linear interpolation from `K` to `Q`
//! at `j/J`, with budget `ε_j = ε/2^j`:
//!
//! 1. perturb `f ↦ f + P` (no constant or linear terms) until the obstruction
//!    `Σ_{f,r} ∪ f⁻¹(A)` has dimension `≤ n − 2`;
//! 2. find a shear `Ψ` moving `Q_j` off the obstruction while staying close to
//!    the identity on `Q_{j−1}`;
//! 3. replace `f` by `f_P ∘ Ψ`.
//!
//! The total deviation on `K` is then below `Σ_j ε/2^j < ε`.

pub mod format;
pub mod report;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::escape::{find_escape_after, verify_escape_with, EscapeOptions, ShearAutomorphism};
use crate::exact::{certify_with, monomials_up_to, Certificate, CertifyOptions, MultiPoly, PolyMap, Polydisc};
use crate::genericity::{obstruction_ideal, pullback_ideal, reduce_degeneracy, PerturbationConfig};
use crate::groebner::Ideal;
use crate::rng::SplitMix64;
use crate::strata::{certify_rank_with, expected_codim, minors_ideal};

pub use report::{emit_report, reverify_report, Reverification};

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub r: usize,
    pub k: Polydisc,
    pub q: Polydisc,
    pub eps: BigRational,
    /// Target subvariety `A ⊂ ℂᵖ` to avoid.
    pub avoid: Option<Ideal>,
    pub stages: u32,
    pub seed: u64,
    pub perturb_budget: u32,
    pub escape_budget: u32,
    pub certify: CertifyOptions,
}

impl PipelineConfig {
    pub fn new(r: usize, k: Polydisc, q: Polydisc, eps: BigRational) -> Self {
        Self {
            r,
            k,
            q,
            eps,
            avoid: None,
            stages: 1,
            seed: DEFAULT_SEED,
            perturb_budget: 16,
            escape_budget: 64,
            certify: CertifyOptions::default(),
        }
    }

    pub fn with_avoid(mut self, avoid: Ideal) -> Self {
        self.avoid = Some(avoid);
        self
    }

    pub fn with_stages(mut self, stages: u32) -> Self {
        self.stages = stages;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `Q_j` for `j = 0..=J`.
    pub fn region(&self, j: u32) -> Result<Polydisc> {
        let t = BigRational::new(BigInt::from(j), BigInt::from(self.stages));
        self.k.interpolate(&self.q, &t)
    }
}

/// Seed shipped with the examples and acceptance tests.
pub const DEFAULT_SEED: u64 = 20;

#[derive(Clone, Debug)]
pub struct StageLog {
    pub stage: u32,
    pub region: Polydisc,
    pub eps: BigRational,
    pub perturbation_seed: u64,
    pub perturbation_attempts: u32,
    pub sigma_dim_before: i64,
    pub sigma_dim_after: i64,
    pub perturbation_bound: BigRational,
    pub escape_seed: u64,
    pub escape_attempts: u32,
    pub automorphism: ShearAutomorphism,
    pub escape_bound: BigRational,
    /// Monomial-norm bound of `sup_K |f_j − f_{j−1}|`.
    pub deviation_bound: BigRational,
}

#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub input: PolyMap,
    pub output: PolyMap,
    pub rank_certificate: Certificate,
    pub avoidance_certificate: Option<Certificate>,
    /// Sum of the per-stage deviation bounds on `K`.
    pub deviation_bound: BigRational,
    pub stages: Vec<StageLog>,
}

/// `max_i` centered monomial-norm bound of `|f_i − g_i|` on `region`.
pub fn map_deviation_bound(f: &PolyMap, g: &PolyMap, region: &Polydisc) -> Result<BigRational> {
    let mut best = BigRational::zero();
    for c in f.sub(g)?.components() {
        let b = c.centered_sup_bound(region)?;
        if b > best {
            best = b;
        }
    }
    Ok(best)
}

/// `max_i` Lipschitz bound of `f_i` on `region` from its expansion at the center.
fn centered_lipschitz(f: &PolyMap, region: &Polydisc) -> Result<BigRational> {
    let origin = Polydisc::new(vec![Default::default(); region.dim()], region.radii().to_vec())?;
    let mut best = BigRational::zero();
    for c in f.components() {
        let l = c.shift(region.center())?.lipschitz_bound(&origin)?;
        if l > best {
            best = l;
        }
    }
    Ok(best)
}

/// `skip` is set when the obstruction is already empty, in which case the map is
/// returned unchanged and the codimension hypothesis is not needed.
fn check_hypotheses(f: &PolyMap, cfg: &PipelineConfig, skip: bool) -> Result<()> {
    let d = expected_codim(f.n(), f.p(), cfg.r)?;
    if d < 2 && !skip {
        return Err(Error::HypothesisViolation(format!(
            "(n-r+1)(p-r+1) = {d} < 2 for n={}, p={}, r={}; rank r < n is required when n = p",
            f.n(),
            f.p(),
            cfg.r
        )));
    }
    if cfg.k.dim() != f.n() || cfg.q.dim() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: cfg.k.dim().max(cfg.q.dim()) });
    }
    if !cfg.q.contains(&cfg.k) {
        return Err(Error::InvalidInput("K must be contained in Q".into()));
    }
    if !cfg.eps.is_positive() {
        return Err(Error::InvalidInput("ε must be positive".into()));
    }
    if cfg.stages == 0 {
        return Err(Error::InvalidInput("at least one stage is required".into()));
    }
    if let Some(a) = &cfg.avoid {
        if a.nvars() != f.p() {
            return Err(Error::ArityMismatch { expected: f.p(), got: a.nvars() });
        }
        let dim = a.dimension();
        if dim > f.p() as i64 - 2 {
            return Err(Error::HypothesisViolation(format!("dim A = {dim} exceeds p − 2 = {}", f.p() as i64 - 2)));
        }
    }
    Ok(())
}

fn certify_avoidance(f: &PolyMap, avoid: &Ideal, region: &Polydisc, opts: &CertifyOptions) -> Result<Certificate> {
    let pb = pullback_ideal(f, avoid)?;
    if pb.generators().iter().all(|g| g.is_zero()) {
        return certify_with(&[MultiPoly::zero(f.n())], region, opts);
    }
    certify_with(pb.generators(), region, opts)
}

/// Certifies `rank d(g∘Ψ) ≥ r` on `region` through `Σ_{g,r}`: `Ψ` is an automorphism
/// with `det dΨ = 1`, so `rank d(g∘Ψ)(z) = rank dg(Ψ(z))` and it suffices that
/// `Ψ(region)` misses `Σ_{g,r}`.
pub fn certify_rank_through(
    g: &PolyMap,
    psi: &ShearAutomorphism,
    r: usize,
    region: &Polydisc,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    if psi.is_identity() {
        return certify_rank_with(g, r, region, opts);
    }
    verify_escape_with(psi, &minors_ideal(g, r)?, region, opts)
}

/// `(g∘Ψ)(region) ∩ A = ∅`, through `g⁻¹(A)`.
pub fn certify_avoidance_through(
    g: &PolyMap,
    psi: &ShearAutomorphism,
    avoid: &Ideal,
    region: &Polydisc,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    if psi.is_identity() {
        return certify_avoidance(g, avoid, region, opts);
    }
    verify_escape_with(psi, &pullback_ideal(g, avoid)?, region, opts)
}

pub fn run_pipeline(f: &PolyMap, cfg: &PipelineConfig) -> Result<PipelineResult> {
    if let Some(a) = &cfg.avoid {
        if a.nvars() != f.p() {
            return Err(Error::ArityMismatch { expected: f.p(), got: a.nvars() });
        }
    }
    let skip_all = obstruction_ideal(f, cfg.r, cfg.avoid.as_ref())?.is_unit();
    check_hypotheses(f, cfg, skip_all)?;
    let n = f.n();
    if !certify_rank_with(f, cfg.r, &cfg.k, &cfg.certify)?.is_certified() {
        return Err(Error::PreconditionFailure(format!("rank ≥ {} could not be certified on K", cfg.r)));
    }
    if let Some(a) = &cfg.avoid {
        if !certify_avoidance(f, a, &cfg.k, &cfg.certify)?.is_certified() {
            return Err(Error::PreconditionFailure("f(K) could not be certified disjoint from A".into()));
        }
    }

    // current = base ∘ psi, with base of low degree; Σ is only ever computed for base
    let mut base = f.clone();
    let mut psi = ShearAutomorphism::identity(n);
    let mut current = f.clone();
    let mut stages = Vec::new();
    let two = BigRational::from_integer(BigInt::from(2));
    let mut eps_j = cfg.eps.clone();
    for j in 1..=cfg.stages {
        if skip_all {
            break;
        }
        eps_j /= &two;
        let half = &eps_j / &two;
        let keep = cfg.region(j - 1)?;
        let region = cfg.region(j)?;
        let fail = |e: Error| match e {
            Error::HypothesisViolation(_) => e,
            other => Error::StageFailure { stage: j as usize, reason: other.to_string() },
        };

        // (1) perturbation with magnitude chosen so the first draw already meets the budget;
        // dim Σ is invariant under the shears, so only the first stage ever perturbs
        let pert_seed = SplitMix64::derive(cfg.seed, 2 * j as u64).next_u64();
        let terms = monomials_up_to(n, PERTURBATION_DEGREE).iter().filter(|m| m.degree() >= 2).count();
        let extent = keep.r_hat().max(BigRational::one());
        let scale = BigRational::from_integer(BigInt::from(2 * terms)) * extent.pow(PERTURBATION_DEGREE as i32);
        let magnitude = &half / scale;
        let pcfg = PerturbationConfig { degree: PERTURBATION_DEGREE, magnitude, vanish_order: 2, seed: pert_seed };
        let red = reduce_degeneracy(&base, cfg.r, cfg.avoid.as_ref(), &keep, &half, &pcfg, cfg.perturb_budget)
            .map_err(fail)?;
        if red.attempts > 0 && !psi.is_identity() {
            return Err(Error::StageFailure { stage: j as usize, reason: "degeneracy reappeared after a shear".into() });
        }
        let perturbed = psi.apply_map(&red.map)?;

        // (2) escape, with the shear budget shrunk by the Lipschitz constant of f_P near Q_{j−1}
        let lip = centered_lipschitz(&perturbed, &keep.inflate(&half))?.max(BigRational::one());
        let eta = &half / &lip;
        let escape_seed = SplitMix64::derive(cfg.seed, 2 * j as u64 + 1).next_u64();
        let eopts = EscapeOptions { budget: cfg.escape_budget, certify: cfg.certify.clone(), ..EscapeOptions::default() };
        let esc = find_escape_after(&red.obstruction, &psi, &keep, &region, &eta, escape_seed, &eopts).map_err(fail)?;

        // (3) compose and bound the stage deviation on K directly
        let next = esc.automorphism.apply_map(&perturbed)?;
        let dev = map_deviation_bound(&next, &current, &cfg.k)?;
        if dev >= eps_j {
            return Err(Error::StageFailure {
                stage: j as usize,
                reason: format!("stage deviation {dev} is not below {eps_j}"),
            });
        }
        base = red.map;
        psi = esc.automorphism.followed_by(&psi);
        stages.push(StageLog {
            stage: j,
            region,
            eps: eps_j.clone(),
            perturbation_seed: red.seed_used.unwrap_or(pert_seed),
            perturbation_attempts: red.attempts,
            sigma_dim_before: red.dimension_before,
            // Ψ is an automorphism, so Σ keeps its dimension under pullback
            sigma_dim_after: red.dimension_after,
            perturbation_bound: red.deviation_bound,
            escape_seed,
            escape_attempts: esc.attempts,
            automorphism: esc.automorphism,
            escape_bound: esc.deviation_bound,
            deviation_bound: dev,
        });
        current = next;
    }

    let deviation_bound = stages.iter().fold(BigRational::zero(), |acc, s| acc + &s.deviation_bound);
    let last_stage = cfg.stages as usize;
    debug_assert_eq!(psi.apply_map(&base)?, current);
    let rank_certificate = certify_rank_through(&base, &psi, cfg.r, &cfg.q, &cfg.certify)?;
    if !rank_certificate.is_certified() {
        return Err(Error::StageFailure { stage: last_stage, reason: format!("final rank certificate: {rank_certificate}") });
    }
    let avoidance_certificate = match &cfg.avoid {
        Some(a) => {
            let c = certify_avoidance_through(&base, &psi, a, &cfg.q, &cfg.certify)?;
            if !c.is_certified() {
                return Err(Error::StageFailure { stage: last_stage, reason: format!("final avoidance certificate: {c}") });
            }
            Some(c)
        }
        None => None,
    };
    debug_assert!(deviation_bound < cfg.eps);
    Ok(PipelineResult { input: f.clone(), output: current, rank_certificate, avoidance_certificate, deviation_bound, stages })
}

/// Degree of the perturbations added at each stage.
pub const PERTURBATION_DEGREE: u32 = 2;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, GaussianRational};

    fn squares() -> PolyMap {
        let z1 = MultiPoly::var(2, 0);
        let z2 = MultiPoly::var(2, 1);
        PolyMap::new(2, vec![z1.pow(2), z2.pow(2), &z1.pow(2) + &z2.pow(2)]).unwrap()
    }

    fn config() -> PipelineConfig {
        let one = GaussianRational::from_i64(1);
        let k = Polydisc::uniform(vec![one.clone(), one], rat(1, 2)).unwrap();
        PipelineConfig::new(2, k, Polydisc::centered(2, rat(2, 1)).unwrap(), rat(1, 10))
    }

    #[test]
    fn single_stage_certifies_on_q() {
        let cfg = config();
        let res = run_pipeline(&squares(), &cfg).unwrap();
        assert!(res.rank_certificate.is_certified());
        assert!(res.deviation_bound < cfg.eps);
        assert_eq!(res.stages.len(), 1);
        assert_eq!(res.stages[0].sigma_dim_before, 1);
        assert!(res.stages[0].sigma_dim_after <= 0);
        let check = reverify_report(&emit_report(&res, &cfg)).unwrap();
        assert!(check.ok(), "{check:?}");
    }

    #[test]
    fn stage_budgets_halve() {
        let cfg = config().with_stages(3);
        let res = run_pipeline(&squares(), &cfg).unwrap();
        assert_eq!(res.stages.len(), 3);
        for s in &res.stages {
            let budget = &cfg.eps / BigRational::from_integer(BigInt::from(2).pow(s.stage));
            assert_eq!(s.eps, budget);
            assert!(s.deviation_bound < s.eps);
        }
        assert!(res.deviation_bound < cfg.eps);
        assert!(res.stages.windows(2).all(|w| w[1].region.contains(&w[0].region)));
    }

    #[test]
    fn avoidance_of_the_origin() {
        let a = Ideal::new(3, (0..3).map(|i| MultiPoly::var(3, i)).collect()).unwrap();
        let cfg = config().with_avoid(a);
        let res = run_pipeline(&squares(), &cfg).unwrap();
        assert!(res.avoidance_certificate.as_ref().is_some_and(|c| c.is_certified()));
        assert!(reverify_report(&emit_report(&res, &cfg)).unwrap().ok());
    }

    #[test]
    fn reports_are_deterministic_and_tamper_evident() {
        let cfg = config();
        let a = emit_report(&run_pipeline(&squares(), &cfg).unwrap(), &cfg);
        let b = emit_report(&run_pipeline(&squares(), &cfg).unwrap(), &cfg);
        assert_eq!(a, b);
        let tampered = a.replacen("\"(1/1+0/1i)*z1^2\"", "\"(2/1+0/1i)*z1^2\"", 1);
        assert_ne!(tampered, a);
        assert!(!reverify_report(&tampered).unwrap().ok());
    }

    #[test]
    fn equidimensional_full_rank_is_rejected() {
        let z1 = MultiPoly::var(2, 0);
        let z2 = MultiPoly::var(2, 1);
        let folded = PolyMap::new(2, vec![z1.pow(2), z2.clone()]).unwrap();
        assert_eq!(run_pipeline(&folded, &config()).unwrap_err().exit_code(), 3);
        let id = PolyMap::new(2, vec![z1, z2]).unwrap();
        let origin = Ideal::new(2, vec![MultiPoly::var(2, 0), MultiPoly::var(2, 1)]).unwrap();
        assert_eq!(run_pipeline(&id, &config().with_avoid(origin)).unwrap_err().exit_code(), 3);
        // nothing to remove: the identity passes through untouched
        let res = run_pipeline(&id, &config()).unwrap();
        assert!(res.stages.is_empty() && res.deviation_bound.is_zero());
    }

    #[test]
    fn already_good_maps_pass_through() {
        // a linear embedding has rank 2 everywhere
        let z1 = MultiPoly::var(2, 0);
        let z2 = MultiPoly::var(2, 1);
        let f = PolyMap::new(2, vec![z1.clone(), z2.clone(), &z1 + &z2]).unwrap();
        let res = run_pipeline(&f, &config()).unwrap();
        assert!(res.stages.is_empty());
        assert_eq!(res.output, f);
        assert!(res.deviation_bound.is_zero());
    }
}
