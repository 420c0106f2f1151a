//! Deterministic JSON reports and their independent re-verification.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::format::{default_vars, emit_map_file, emit_poly, parse_poly};
use super::{certify_avoidance_through, certify_rank_through, map_deviation_bound, PipelineConfig, PipelineResult};
use crate::error::{Error, Result};
use crate::exact::{fmt_rational, parse_rational, CertStatus, Certificate, CertifyOptions, GaussianRational, PolyMap, Polydisc};
use crate::groebner::Ideal;
use crate::escape::ShearAutomorphism;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RegionJson {
    pub center: Vec<String>,
    pub radius: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateJson {
    pub status: String,
    pub reason: Option<String>,
    pub grid_depth: u32,
    pub cell_count: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ShearJson {
    pub target: String,
    pub shift: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct StageJson {
    pub stage: u32,
    pub region: RegionJson,
    pub eps: String,
    pub perturbation_seed: u64,
    pub perturbation_attempts: u32,
    pub sigma_dim_before: i64,
    pub sigma_dim_after: i64,
    pub perturbation_bound: String,
    pub escape_seed: u64,
    pub escape_attempts: u32,
    pub automorphism: Vec<ShearJson>,
    pub escape_bound: String,
    pub deviation_bound: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConfigJson {
    pub r: usize,
    #[serde(rename = "K")]
    pub k: RegionJson,
    #[serde(rename = "Q")]
    pub q: RegionJson,
    pub eps: String,
    /// Generators in the target variables `w1 … wp`.
    pub avoid: Option<Vec<String>>,
    pub stages: u32,
    pub seed: u64,
    pub perturb_budget: u32,
    pub escape_budget: u32,
    pub max_depth: u32,
    pub initial_grid: u32,
    pub max_cells: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportJson {
    pub input_hash: String,
    pub vars: Vec<String>,
    pub config: ConfigJson,
    pub input_map: Vec<String>,
    pub output_map: Vec<String>,
    pub stages: Vec<StageJson>,
    pub rank_certificate: CertificateJson,
    pub avoidance_certificate: Option<CertificateJson>,
    pub deviation_bound: String,
}

fn region_json(p: &Polydisc) -> RegionJson {
    RegionJson {
        center: p.center().iter().map(|c| c.to_string()).collect(),
        radius: p.radii().iter().map(fmt_rational).collect(),
    }
}

pub fn certificate_json(c: &Certificate) -> CertificateJson {
    let (status, reason) = match c.status {
        CertStatus::Certified => ("certified", None),
        CertStatus::NotCertified(r) => {
            let reason = serde_json::to_value(r).ok().and_then(|v| v.as_str().map(str::to_string));
            ("not-certified", reason)
        }
    };
    CertificateJson { status: status.into(), reason, grid_depth: c.grid_depth, cell_count: c.cell_count }
}

fn target_vars(p: usize) -> Vec<String> {
    (1..=p).map(|i| format!("w{i}")).collect()
}

/// SHA-256 of the canonical `.pmap` serialization.
pub fn input_hash(f: &PolyMap) -> String {
    hex::encode(Sha256::digest(emit_map_file(f, &default_vars(f.n())).as_bytes()))
}

fn config_json(cfg: &PipelineConfig, p: usize) -> ConfigJson {
    ConfigJson {
        r: cfg.r,
        k: region_json(&cfg.k),
        q: region_json(&cfg.q),
        eps: fmt_rational(&cfg.eps),
        avoid: cfg.avoid.as_ref().map(|a| a.generators().iter().map(|g| emit_poly(g, &target_vars(p))).collect()),
        stages: cfg.stages,
        seed: cfg.seed,
        perturb_budget: cfg.perturb_budget,
        escape_budget: cfg.escape_budget,
        max_depth: cfg.certify.max_depth,
        initial_grid: cfg.certify.initial_grid,
        max_cells: cfg.certify.max_cells,
    }
}

pub fn report_json(result: &PipelineResult, cfg: &PipelineConfig) -> ReportJson {
    let vars = default_vars(result.input.n());
    let emit_map = |f: &PolyMap| f.components().iter().map(|c| emit_poly(c, &vars)).collect::<Vec<_>>();
    ReportJson {
        input_hash: input_hash(&result.input),
        vars: vars.clone(),
        config: config_json(cfg, result.input.p()),
        input_map: emit_map(&result.input),
        output_map: emit_map(&result.output),
        stages: result
            .stages
            .iter()
            .map(|s| StageJson {
                stage: s.stage,
                region: region_json(&s.region),
                eps: fmt_rational(&s.eps),
                perturbation_seed: s.perturbation_seed,
                perturbation_attempts: s.perturbation_attempts,
                sigma_dim_before: s.sigma_dim_before,
                sigma_dim_after: s.sigma_dim_after,
                perturbation_bound: fmt_rational(&s.perturbation_bound),
                escape_seed: s.escape_seed,
                escape_attempts: s.escape_attempts,
                automorphism: s
                    .automorphism
                    .shears()
                    .iter()
                    .map(|e| ShearJson { target: vars[e.target].clone(), shift: emit_poly(&e.g, &vars) })
                    .collect(),
                escape_bound: fmt_rational(&s.escape_bound),
                deviation_bound: fmt_rational(&s.deviation_bound),
            })
            .collect(),
        rank_certificate: certificate_json(&result.rank_certificate),
        avoidance_certificate: result.avoidance_certificate.as_ref().map(certificate_json),
        deviation_bound: fmt_rational(&result.deviation_bound),
    }
}

/// Pretty-printed JSON; byte-identical for identical inputs and seeds.
pub fn emit_report(result: &PipelineResult, cfg: &PipelineConfig) -> String {
    serde_json::to_string_pretty(&report_json(result, cfg)).expect("report serializes")
}

#[derive(Clone, Debug)]
pub struct Reverification {
    pub input_hash_matches: bool,
    pub regions_nested: bool,
    pub rank: Certificate,
    pub avoidance: Option<Certificate>,
    /// Monomial-norm bound of `sup_K |f̃ − f|` recomputed from the two maps.
    pub deviation: BigRational,
    pub deviation_below_eps: bool,
}

impl Reverification {
    pub fn ok(&self) -> bool {
        self.input_hash_matches
            && self.regions_nested
            && self.rank.is_certified()
            && self.avoidance.as_ref().is_none_or(|c| c.is_certified())
            && self.deviation_below_eps
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(format!("report: {}", msg.into()))
}

fn parse_region(r: &RegionJson) -> Result<Polydisc> {
    let center = r
        .center
        .iter()
        .map(|s| s.parse::<GaussianRational>().map_err(bad))
        .collect::<Result<Vec<_>>>()?;
    let radii = r
        .radius
        .iter()
        .map(|s| parse_rational(s).ok_or_else(|| bad(format!("bad radius {s}"))))
        .collect::<Result<Vec<_>>>()?;
    Polydisc::new(center, radii)
}

fn parse_map(lines: &[String], vars: &[String]) -> Result<PolyMap> {
    PolyMap::new(vars.len(), lines.iter().map(|l| parse_poly(l, vars)).collect::<Result<Vec<_>>>()?)
}

fn parse_automorphism(shears: &[ShearJson], vars: &[String]) -> Result<ShearAutomorphism> {
    let mut psi = ShearAutomorphism::identity(vars.len());
    for s in shears {
        let target = vars.iter().position(|v| *v == s.target).ok_or_else(|| bad(format!("unknown shear target {}", s.target)))?;
        psi.push(target, parse_poly(&s.shift, vars)?)?;
    }
    Ok(psi)
}

/// Re-checks a report from scratch using only the maps, configuration and final shear it contains.
pub fn reverify_report(text: &str) -> Result<Reverification> {
    let rep: ReportJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let input = parse_map(&rep.input_map, &rep.vars)?;
    let output = parse_map(&rep.output_map, &rep.vars)?;
    let k = parse_region(&rep.config.k)?;
    let q = parse_region(&rep.config.q)?;
    let eps = parse_rational(&rep.config.eps).ok_or_else(|| bad("bad eps"))?;
    let opts = CertifyOptions {
        max_depth: rep.config.max_depth,
        initial_grid: rep.config.initial_grid,
        max_cells: rep.config.max_cells,
    };
    let mut regions = vec![k.clone()];
    for s in &rep.stages {
        regions.push(parse_region(&s.region)?);
    }
    regions.push(q.clone());
    let regions_nested = regions.windows(2).all(|w| w[1].contains(&w[0]));
    // the recorded shears are the witness: f̃ = g∘Ψ_1∘⋯∘Ψ_J with g of low degree
    let mut psi = ShearAutomorphism::identity(input.n());
    for stage in &rep.stages {
        psi = parse_automorphism(&stage.automorphism, &rep.vars)?.followed_by(&psi);
    }
    let g = psi.inverse().apply_map(&output)?;
    let rank = certify_rank_through(&g, &psi, rep.config.r, &q, &opts)?;
    let avoidance = match &rep.config.avoid {
        Some(gens) => {
            let tv = target_vars(input.p());
            let a = Ideal::new(input.p(), gens.iter().map(|g| parse_poly(g, &tv)).collect::<Result<Vec<_>>>()?)?;
            Some(certify_avoidance_through(&g, &psi, &a, &q, &opts)?)
        }
        None => None,
    };
    let deviation = map_deviation_bound(&output, &input, &k)?;
    Ok(Reverification {
        input_hash_matches: input_hash(&input) == rep.input_hash,
        regions_nested,
        rank,
        avoidance,
        deviation_below_eps: deviation < eps,
        deviation,
    })
}
