use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use polyrank::escape::{find_escape_with, EscapeOptions};
use polyrank::exact::{fmt_rational, parse_rational, CertifyOptions, Polydisc};
use polyrank::genericity::{dimension_law_trial, reduce_degeneracy, PerturbationConfig};
use polyrank::pipeline::format::{emit_poly, parse_ideal_file, parse_map_file, parse_point, parse_radii, parse_region};
use polyrank::pipeline::report::certificate_json;
use polyrank::pipeline::{emit_report, reverify_report, run_pipeline, PipelineConfig, DEFAULT_SEED};
use polyrank::spray::{check_spray_p1, minimal_twist_p1, twisted_spray_p1, RationalFunc};
use polyrank::strata::{certify_rank_with, stratum_report};
use polyrank::{Error, Result};

#[derive(Parser)]
#[command(name = "polyrank", version, about = "Rank strata, escapes and certified approximation of polynomial maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of the rank-deficiency locus of a map.
    Strata {
        map: String,
        #[arg(long)]
        rank: usize,
    },
    /// Krull dimension of an ideal.
    Dim { ideal: String },
    /// Seeded check of the generic dimension law.
    Genericity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Perturb a map until its degeneracy locus has codimension ≥ 2.
    Perturb {
        map: String,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_parser = rational)]
        eps: BigRational,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Region on which the deviation is bounded, as CENTER:RADIUS (default: unit polydisc).
        #[arg(long)]
        keep: Option<String>,
        #[arg(long, default_value_t = 16)]
        budget: u32,
    },
    /// Search for a shear moving a box off V(ideal) while staying close to the identity on K.
    Escape {
        ideal: String,
        #[arg(long = "K", value_name = "CENTER:RADIUS")]
        k: String,
        #[arg(long = "box", value_name = "CENTER:RADIUS")]
        bx: String,
        #[arg(long, value_parser = rational)]
        eps: BigRational,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        budget: u32,
    },
    /// Twisted spray on P¹.
    #[command(name = "spray-p1")]
    SprayP1 {
        #[arg(long, conflicts_with = "verify")]
        find_m: bool,
        #[arg(long, value_name = "M")]
        verify: Option<u32>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Certify rank ≥ r on a polydisc.
    #[command(name = "verify-rank")]
    VerifyRank {
        map: String,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        center: String,
        #[arg(long)]
        radius: String,
        #[arg(long)]
        max_depth: Option<u32>,
    },
    /// Finite-stage approximation by a map of certified rank ≥ r on Q.
    Pipeline {
        map: String,
        #[arg(long)]
        rank: usize,
        #[arg(long = "K", value_name = "CENTER:RADIUS")]
        k: String,
        #[arg(long = "Q", value_name = "CENTER:RADIUS")]
        q: String,
        #[arg(long)]
        avoid: Option<String>,
        #[arg(long, value_parser = rational)]
        eps: BigRational,
        #[arg(long, default_value_t = 1)]
        stages: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Re-verify a pipeline report from scratch.
    Reverify { report: String },
}

fn rational(s: &str) -> std::result::Result<BigRational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational number: '{s}'"))
}

fn read_input(path: &str) -> Result<String> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}")))?;
    Ok(text)
}

fn show(f: &RationalFunc, names: &[&str]) -> String {
    let vars: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    format!("({}) / ({})", emit_poly(f.numerator(), &vars), emit_poly(f.denominator(), &vars))
}

/// A JSON document and whether the command's claim holds.
type Outcome = (Value, bool);

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Strata { map, rank } => {
            let (f, _) = parse_map_file(&read_input(&map)?)?;
            let rep = stratum_report(&f, rank)?;
            Ok((serde_json::to_value(rep).expect("serializable"), true))
        }
        Command::Dim { ideal } => {
            let (i, vars) = parse_ideal_file(&read_input(&ideal)?)?;
            let basis: Vec<String> = i.groebner_basis().iter().map(|g| emit_poly(g, &vars)).collect();
            Ok((json!({ "nvars": i.nvars(), "dimension": i.dimension(), "groebner_basis": basis }), true))
        }
        Command::Genericity { n, p, r, degree, trials, seed } => {
            let cfg = PerturbationConfig { degree, ..PerturbationConfig::default() }.with_seed(seed);
            let rep = dimension_law_trial(n, p, r, &cfg, trials)?;
            let pass = rep.pass;
            Ok((serde_json::to_value(rep).expect("serializable"), pass))
        }
        Command::Perturb { map, rank, eps, seed, keep, budget } => {
            let (f, vars) = parse_map_file(&read_input(&map)?)?;
            let keep = match keep {
                Some(k) => parse_region(&k, f.n())?,
                None => Polydisc::centered(f.n(), BigRational::from_integer(1.into()))?,
            };
            let magnitude = &eps / BigRational::from_integer(2.into());
            let cfg = PerturbationConfig::default().with_seed(seed).with_magnitude(magnitude).with_vanish_order(2);
            let red = reduce_degeneracy(&f, rank, None, &keep, &eps, &cfg, budget)?;
            let out: Vec<String> = red.map.components().iter().map(|c| emit_poly(c, &vars)).collect();
            Ok((
                json!({
                    "map": out,
                    "deviation_bound": fmt_rational(&red.deviation_bound),
                    "sigma_dim_before": red.dimension_before,
                    "sigma_dim_after": red.dimension_after,
                    "seed_used": red.seed_used,
                    "attempts": red.attempts,
                }),
                true,
            ))
        }
        Command::Escape { ideal, k, bx, eps, seed, budget } => {
            let (sigma, vars) = parse_ideal_file(&read_input(&ideal)?)?;
            let n = sigma.nvars();
            let (k, bx) = (parse_region(&k, n)?, parse_region(&bx, n)?);
            let esc = find_escape_with(&sigma, &k, &bx, &eps, seed, &EscapeOptions { budget, ..EscapeOptions::default() })?;
            let shears: Vec<Value> = esc
                .automorphism
                .shears()
                .iter()
                .map(|s| json!({ "target": vars[s.target], "shift": emit_poly(&s.g, &vars) }))
                .collect();
            Ok((
                json!({
                    "automorphism": shears,
                    "deviation_bound": fmt_rational(&esc.deviation_bound),
                    "certificate": certificate_json(&esc.certificate),
                    "attempts": esc.attempts,
                }),
                esc.certificate.is_certified(),
            ))
        }
        Command::SprayP1 { find_m, verify, samples, seed } => {
            let m = match (find_m, verify) {
                (_, Some(m)) => m,
                (true, None) => minimal_twist_p1(),
                (false, None) => return Err(Error::InvalidInput("one of --find-m or --verify M is required".into())),
            };
            let check = check_spray_p1(m, samples, seed)?;
            let spray = twisted_spray_p1(m);
            let pass = check.passed();
            let mut doc = serde_json::to_value(check).expect("serializable");
            doc["chart1"] = json!(show(&spray.chart1_expr, &["z", "t"]));
            doc["chart2"] = json!(show(&spray.chart2_expr, &["w", "t"]));
            doc["passed"] = json!(pass);
            if find_m {
                doc["minimal_m"] = json!(m);
            }
            Ok((doc, pass))
        }
        Command::VerifyRank { map, rank, center, radius, max_depth } => {
            let (f, _) = parse_map_file(&read_input(&map)?)?;
            let center = parse_point(&center)?;
            let mut radii = parse_radii(&radius)?;
            if radii.len() == 1 {
                radii = vec![radii[0].clone(); center.len()];
            }
            let region = Polydisc::new(center, radii)?;
            let mut opts = CertifyOptions::default();
            if let Some(d) = max_depth {
                opts.max_depth = d;
            }
            let cert = certify_rank_with(&f, rank, &region, &opts)?;
            let ok = cert.is_certified();
            Ok((json!({ "rank": rank, "certificate": certificate_json(&cert) }), ok))
        }
        Command::Pipeline { map, rank, k, q, avoid, eps, stages, seed } => {
            let (f, _) = parse_map_file(&read_input(&map)?)?;
            let mut cfg = PipelineConfig::new(rank, parse_region(&k, f.n())?, parse_region(&q, f.n())?, eps).with_stages(stages).with_seed(seed);
            if let Some(a) = avoid {
                cfg = cfg.with_avoid(parse_ideal_file(&read_input(&a)?)?.0);
            }
            let res = run_pipeline(&f, &cfg)?;
            let doc: Value = serde_json::from_str(&emit_report(&res, &cfg)).expect("report is JSON");
            Ok((doc, true))
        }
        Command::Reverify { report } => {
            let check = reverify_report(&read_input(&report)?)?;
            let ok = check.ok();
            Ok((
                json!({
                    "ok": ok,
                    "input_hash_matches": check.input_hash_matches,
                    "regions_nested": check.regions_nested,
                    "rank_certificate": certificate_json(&check.rank),
                    "avoidance_certificate": check.avoidance.as_ref().map(certificate_json),
                    "deviation_bound": fmt_rational(&check.deviation),
                    "deviation_below_eps": check.deviation_below_eps,
                }),
                ok,
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok((doc, ok)) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            ExitCode::from(if ok { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
