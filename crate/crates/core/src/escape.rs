//! Shear automorphisms that push a polydisc off a small algebraic set while
//! staying close to the identity on a smaller polydisc.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{certify_with, Certificate, CertifyOptions, GaussianRational, Monomial, MultiPoly, PolyMap, Polydisc};
use crate::groebner::Ideal;
use crate::rng::SplitMix64;

/// `z_target ↦ z_target + g(z)` with `g` independent of `z_target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryShear {
    pub target: usize,
    pub g: MultiPoly,
}

/// The composite `s_k ∘ ⋯ ∘ s_1` of elementary shears (applied in list order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShearAutomorphism {
    n: usize,
    shears: Vec<ElementaryShear>,
}

impl ShearAutomorphism {
    pub fn identity(n: usize) -> Self {
        Self { n, shears: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shears(&self) -> &[ElementaryShear] {
        &self.shears
    }

    pub fn is_identity(&self) -> bool {
        self.shears.iter().all(|s| s.g.is_zero())
    }

    pub fn push(&mut self, target: usize, g: MultiPoly) -> Result<()> {
        if target >= self.n {
            return Err(Error::IndexOutOfRange { index: target, len: self.n });
        }
        if g.nvars() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: g.nvars() });
        }
        if g.terms().keys().any(|m| m.0[target] > 0) {
            return Err(Error::InvalidInput(format!("shear of z{} may not depend on z{}", target + 1, target + 1)));
        }
        self.shears.push(ElementaryShear { target, g });
        Ok(())
    }

    pub fn then(mut self, target: usize, g: MultiPoly) -> Result<Self> {
        self.push(target, g)?;
        Ok(self)
    }

    /// `other ∘ self`: the shears of `self`, then those of `other`.
    pub fn followed_by(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        Self { n: self.n, shears: self.shears.iter().chain(&other.shears).cloned().collect() }
    }

    /// The peaking shear `z_target ↦ z_target + c·(z_driver − center)^exponent`.
    pub fn peaking(
        n: usize,
        target: usize,
        driver: usize,
        c: GaussianRational,
        center: GaussianRational,
        exponent: u32,
    ) -> Result<Self> {
        if driver >= n {
            return Err(Error::IndexOutOfRange { index: driver, len: n });
        }
        let base = &MultiPoly::var(n, driver) - &MultiPoly::constant(n, center);
        Self::identity(n).then(target, base.pow(exponent).scale(&c))
    }

    pub fn inverse(&self) -> Self {
        let shears = self.shears.iter().rev().map(|s| ElementaryShear { target: s.target, g: -&s.g }).collect();
        Self { n: self.n, shears }
    }

    /// `Ψ` as a polynomial map.
    pub fn as_map(&self) -> PolyMap {
        let mut comps: Vec<MultiPoly> = (0..self.n).map(|i| MultiPoly::var(self.n, i)).collect();
        for s in &self.shears {
            let shift = s.g.compose(&comps).expect("shear polynomials have n variables");
            comps[s.target] = &comps[s.target] + &shift;
        }
        PolyMap::new(self.n, comps).expect("n components in n variables")
    }

    pub fn apply_point(&self, z: &[GaussianRational]) -> Result<Vec<GaussianRational>> {
        if z.len() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, got: z.len() });
        }
        let mut w = z.to_vec();
        for s in &self.shears {
            let d = s.g.eval(&w)?;
            w[s.target] += &d;
        }
        Ok(w)
    }

    /// `f ∘ Ψ`.
    pub fn apply_map(&self, f: &PolyMap) -> Result<PolyMap> {
        if f.n() != self.n {
            return Err(Error::ArityMismatch { expected: self.n, got: f.n() });
        }
        if self.is_identity() {
            return Ok(f.clone());
        }
        f.compose(&self.as_map())
    }

    /// Each generator composed with `Ψ`.
    pub fn pull_back(&self, gens: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
        if self.is_identity() {
            return Ok(gens.to_vec());
        }
        let m = self.as_map();
        gens.iter().map(|g| g.compose(m.components())).collect()
    }
}

impl fmt::Display for ShearAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shears.is_empty() {
            return write!(f, "id");
        }
        for (k, s) in self.shears.iter().enumerate() {
            if k > 0 {
                write!(f, " ; ")?;
            }
            write!(f, "z{} += {}", s.target + 1, s.g)?;
        }
        Ok(())
    }
}

/// Upper bound for `sup_{z ∈ region} max_i |Ψ(z)_i − z_i|`. Each shear is bounded
/// by the centered monomial norm on the region inflated by the earlier shears.
pub fn sup_deviation_bound(psi: &ShearAutomorphism, region: &Polydisc) -> Result<BigRational> {
    if region.dim() != psi.n {
        return Err(Error::DimensionMismatch { expected: psi.n, got: region.dim() });
    }
    let mut current = region.clone();
    let mut per_coord = vec![BigRational::zero(); psi.n];
    for s in &psi.shears {
        let b = s.g.centered_sup_bound(&current)?;
        per_coord[s.target] += &b;
        current = current.inflate_coordinate(s.target, &b);
    }
    Ok(per_coord.into_iter().max().unwrap_or_else(BigRational::zero))
}

/// Certifies `Ψ(region) ∩ V(Σ) = ∅` via nonvanishing of `{q ∘ Ψ}` on `region`.
pub fn verify_escape(psi: &ShearAutomorphism, sigma: &Ideal, region: &Polydisc, max_depth: u32) -> Result<Certificate> {
    verify_escape_with(psi, sigma, region, &CertifyOptions::with_depth(max_depth))
}

pub fn verify_escape_with(
    psi: &ShearAutomorphism,
    sigma: &Ideal,
    region: &Polydisc,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    if sigma.nvars() != psi.n || region.dim() != psi.n {
        return Err(Error::DimensionMismatch { expected: psi.n, got: region.dim().max(sigma.nvars()) });
    }
    if sigma.is_unit() {
        return Ok(Certificate::trivial());
    }
    if sigma.generators().iter().all(|g| g.is_zero()) {
        return certify_with(&[MultiPoly::zero(psi.n)], region, opts);
    }
    if let Some(cells) = enclose_variety(sigma)? {
        if enclosure_escapes(psi, &cells, region)? {
            return Ok(Certificate::by_enclosure(cells.len() as u64));
        }
    }
    certify_with(&psi.pull_back(sigma.generators())?, region, opts)
}

#[derive(Clone, Debug)]
pub struct EscapeOptions {
    pub budget: u32,
    pub max_shears: usize,
    pub max_exponent: u32,
    pub certify: CertifyOptions,
}

impl Default for EscapeOptions {
    fn default() -> Self {
        Self { budget: 64, max_shears: 4, max_exponent: 12, certify: CertifyOptions::default() }
    }
}

#[derive(Clone, Debug)]
pub struct Escape {
    pub automorphism: ShearAutomorphism,
    pub deviation_bound: BigRational,
    pub certificate: Certificate,
    /// Candidates tried; 0 when the identity already escapes.
    pub attempts: u32,
}

/// Largest dyadic `a/2^k ≤ x` with eight significant bits (`x > 0`).
fn dyadic_floor(x: &BigRational) -> BigRational {
    dyadic_round(x, false)
}

fn dyadic_round(x: &BigRational, up: bool) -> BigRational {
    let bits = |v: &BigInt| v.bits() as i64;
    let mut e = bits(x.numer()) - bits(x.denom());
    let two = BigRational::from_integer(BigInt::from(2));
    let pow = |e: i64| if e >= 0 { two.pow(e as i32) } else { BigRational::one() / two.pow((-e) as i32) };
    while pow(e) > *x {
        e -= 1;
    }
    while pow(e + 1) <= *x {
        e += 1;
    }
    let scale = pow(7 - e);
    let scaled = x * &scale;
    (if up { scaled.ceil() } else { scaled.floor() }) / scale
}

/// Coordinates `j` along which every point of `V(Σ)` lies outside `K`'s `j`-th disc,
/// certified through univariate eliminants. Empty unless `Σ` is zero-dimensional.
pub fn escape_coordinates(sigma: &Ideal, k: &Polydisc) -> Result<Vec<usize>> {
    let n = sigma.nvars();
    let mut out = Vec::new();
    for j in 0..n {
        let Some(e) = sigma.univariate_eliminant(j)? else {
            return Ok(Vec::new());
        };
        // only z_j occurs in the eliminant
        let e1 = e.relabel(1, &vec![0; n]);
        let disc = Polydisc::new(vec![k.center()[j].clone()], vec![k.radii()[j].clone()])?;
        if certify_with(&[e1], &disc, &CertifyOptions::default())?.is_certified() {
            out.push(j);
        }
    }
    Ok(out)
}

/// Durand–Kerner approximations to the roots of `Σ coeffs[k] z^k`.
fn approx_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let bound = 1.0 + monic[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * bound).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let p = monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z[i] + c);
            let q = (0..d).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            if q.norm() == 0.0 {
                continue;
            }
            let step = p / q;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-14 * bound {
            break;
        }
    }
    z
}


/// Discs `D(a_k, d·|W_k|)` whose union contains every root of `e` (univariate in `var`),
/// where `W_k = e(a_k) / (lc·Π_{j≠k}(a_k − a_j))` is the Weierstrass correction.
fn root_discs(e: &MultiPoly, var: usize) -> Option<Vec<(GaussianRational, BigRational)>> {
    let d = e.degree() as usize;
    let mut coeffs = vec![GaussianRational::zero(); d + 1];
    for (m, c) in e.terms() {
        coeffs[m.0[var] as usize] = c.clone();
    }
    let approx = approx_roots(&coeffs.iter().map(GaussianRational::to_c64).collect::<Vec<_>>());
    let centers: Vec<GaussianRational> = approx
        .iter()
        .map(|z| Some(GaussianRational::new(BigRational::from_float(z.re)?, BigRational::from_float(z.im)?)))
        .collect::<Option<_>>()?;
    let eval = |z: &GaussianRational| coeffs.iter().rev().fold(GaussianRational::zero(), |acc, c| &(&acc * z) + c);
    let lc = &coeffs[d];
    let tiny = BigRational::new(BigInt::one(), BigInt::one() << 64);
    let mut out = Vec::with_capacity(d);
    for (k, a) in centers.iter().enumerate() {
        let mut den = lc.clone();
        for (j, b) in centers.iter().enumerate() {
            if j != k {
                den = &den * &(a - b);
            }
        }
        let lower = den.linf_norm();
        if lower.is_zero() {
            return None;
        }
        // |W_k| ≤ |num|₁ / |den|_∞
        let radius = BigRational::from_integer(BigInt::from(d)) * eval(a).l1_norm() / lower;
        out.push((a.clone(), dyadic_ceil(&radius.max(tiny.clone()))));
    }
    Some(out)
}

/// Smallest `m/2^k ≥ x` with 8 significant bits.
fn dyadic_ceil(x: &BigRational) -> BigRational {
    dyadic_round(x, true)
}

/// Polydiscs covering `V(Σ)` for zero-dimensional `Σ`, built from certified
/// root discs of the univariate eliminants; products on which some basis
/// element provably has no zero are dropped.
pub fn enclose_variety(sigma: &Ideal) -> Result<Option<Vec<Polydisc>>> {
    const MAX_CELLS: usize = 4096;
    let n = sigma.nvars();
    let mut discs = Vec::with_capacity(n);
    for j in 0..n {
        let Some(e) = sigma.univariate_eliminant(j)? else {
            return Ok(None);
        };
        let Some(d) = root_discs(&e, j) else {
            return Ok(None);
        };
        discs.push(d);
    }
    if discs.iter().map(Vec::len).product::<usize>() > MAX_CELLS {
        return Ok(None);
    }
    let mut cells: Vec<Vec<&(GaussianRational, BigRational)>> = vec![Vec::new()];
    for d in &discs {
        cells = cells.iter().flat_map(|c| d.iter().map(move |x| [c.as_slice(), &[x]].concat())).collect();
    }
    let gb = sigma.groebner_basis();
    let mut out = Vec::new();
    for cell in cells {
        let p = Polydisc::new(cell.iter().map(|x| x.0.clone()).collect(), cell.iter().map(|x| x.1.clone()).collect())?;
        if !excluded(gb, &p)? {
            out.push(p);
        }
    }
    Ok(Some(out))
}

/// Some `g` satisfies `|g(a)| > sup_P |g − g(a)|`, so `g` has no zero on `P`.
fn excluded(gens: &[MultiPoly], p: &Polydisc) -> Result<bool> {
    for g in gens {
        let v = g.eval(p.center())?;
        let rest = g - &MultiPoly::constant(g.nvars(), v.clone());
        let b = rest.centered_sup_bound(p)?;
        if v.norm_sqr() > &b * &b {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether `Ψ⁻¹(P)` is provably disjoint from `region` for every cell `P`.
fn enclosure_escapes(psi: &ShearAutomorphism, cells: &[Polydisc], region: &Polydisc) -> Result<bool> {
    let inv = psi.inverse().as_map();
    for p in cells {
        let mut separated = false;
        for (i, comp) in inv.components().iter().enumerate() {
            let v = comp.eval(p.center())?;
            let rest = comp - &MultiPoly::constant(comp.nvars(), v.clone());
            let reach = rest.centered_sup_bound(p)? + &region.radii()[i];
            if (&v - &region.center()[i]).norm_sqr() > &reach * &reach {
                separated = true;
                break;
            }
        }
        if !separated {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches for `Ψ` with deviation `< ε` on `K` and `Ψ(box) ∩ V(Σ) = ∅`.
pub fn find_escape(sigma: &Ideal, k: &Polydisc, bx: &Polydisc, eps: &BigRational, seed: u64, budget: u32) -> Result<Escape> {
    find_escape_with(sigma, k, bx, eps, seed, &EscapeOptions { budget, ..EscapeOptions::default() })
}

pub fn find_escape_with(
    sigma: &Ideal,
    k: &Polydisc,
    bx: &Polydisc,
    eps: &BigRational,
    seed: u64,
    opts: &EscapeOptions,
) -> Result<Escape> {
    find_escape_after(sigma, &ShearAutomorphism::identity(sigma.nvars()), k, bx, eps, seed, opts)
}

/// As [`find_escape_with`] for the obstruction `prior⁻¹(V(Σ))`: the returned `Ψ`
/// satisfies `prior(Ψ(box)) ∩ V(Σ) = ∅`. Keeps `Σ` itself low-degree across stages.
pub fn find_escape_after(
    sigma: &Ideal,
    prior: &ShearAutomorphism,
    k: &Polydisc,
    bx: &Polydisc,
    eps: &BigRational,
    seed: u64,
    opts: &EscapeOptions,
) -> Result<Escape> {
    let n = sigma.nvars();
    if k.dim() != n || bx.dim() != n || prior.n != n {
        return Err(Error::DimensionMismatch { expected: n, got: k.dim() });
    }
    if !eps.is_positive() {
        return Err(Error::InvalidInput("ε must be positive".into()));
    }
    let dim = sigma.dimension();
    if dim > n as i64 - 2 {
        return Err(Error::HypothesisViolation(format!("dim Σ = {dim} exceeds n − 2 = {}", n as i64 - 2)));
    }
    let identity = ShearAutomorphism::identity(n);
    if sigma.is_unit() {
        return Ok(Escape {
            automorphism: identity,
            deviation_bound: BigRational::zero(),
            certificate: Certificate::trivial(),
            attempts: 0,
        });
    }
    let enclosure = enclose_variety(sigma)?;
    let check = |psi: &ShearAutomorphism, region: &Polydisc| -> Result<Certificate> {
        let full = psi.followed_by(prior);
        Ok(match &enclosure {
            Some(cells) if enclosure_escapes(&full, cells, region)? => Certificate::by_enclosure(cells.len() as u64),
            // with an enclosure of V(Σ) the check is exact and cheap; failing it rejects the candidate
            Some(_) => Certificate::not_certified(),
            None => verify_escape_with(&full, sigma, region, &opts.certify)?,
        })
    };
    let separated = check(&identity, k)?.is_certified()
        || (enclosure.is_some() && certify_with(&prior.pull_back(sigma.generators())?, k, &opts.certify)?.is_certified());
    if !separated {
        return Err(Error::NotSeparated("Σ could not be certified disjoint from K".into()));
    }
    let cert = check(&identity, bx)?;
    if cert.is_certified() {
        return Ok(Escape { automorphism: identity, deviation_bound: BigRational::zero(), certificate: cert, attempts: 0 });
    }

    let drivers = {
        let d = if prior.is_identity() { escape_coordinates(sigma, k)? } else { Vec::new() };
        if d.is_empty() { (0..n).collect() } else { d }
    };
    let units = [
        GaussianRational::one(),
        GaussianRational::i(),
        -GaussianRational::one(),
        -GaussianRational::i(),
    ];
    let min_exponent = 4.min(opts.max_exponent);
    for attempt in 0..opts.budget {
        let mut rng = SplitMix64::derive(seed, attempt as u64);
        let count = if attempt < opts.budget / 2 { 1 } else { 1 + rng.below(opts.max_shears.max(1)) };
        let share = eps / BigRational::from_integer(BigInt::from(2 * count as i64));
        let mut psi = ShearAutomorphism::identity(n);
        let mut region = k.clone();
        for _ in 0..count {
            let driver = drivers[rng.below(drivers.len())];
            let target = (driver + 1 + rng.below(n - 1)) % n;
            let m = rng.range_i64(min_exponent as i64, opts.max_exponent as i64) as u32;
            // |c|'·ρ^M ≤ share on the current (inflated) region, by construction
            let rho_m = region.radii()[driver].pow(m as i32);
            let c = units[rng.below(4)].scale(&dyadic_floor(&(&share / &rho_m)));
            let step = ShearAutomorphism::peaking(n, target, driver, c, k.center()[driver].clone(), m)?;
            let s = &step.shears()[0];
            let b = s.g.centered_sup_bound(&region)?;
            region = region.inflate_coordinate(target, &b);
            psi.push(target, s.g.clone())?;
        }
        let dev = sup_deviation_bound(&psi, k)?;
        if dev >= *eps {
            continue;
        }
        let cert = check(&psi, bx)?;
        if cert.is_certified() {
            return Ok(Escape { automorphism: psi, deviation_bound: dev, certificate: cert, attempts: attempt + 1 });
        }
    }
    Err(Error::BudgetExhausted(format!("no certified escape in {} candidates", opts.budget)))
}

/// `z2 ↦ z2 + z1¹⁰/20` on `ℂ²`.
pub fn hand_witness() -> ShearAutomorphism {
    let g = MultiPoly::monomial(2, Monomial(vec![10, 0]), GaussianRational::from_parts(1, 20, 0, 1));
    ShearAutomorphism::identity(2).then(1, g).expect("valid shear")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn gr(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_parts(n, d, 0, 1)
    }

    fn point_sigma() -> Ideal {
        let z1 = MultiPoly::var(2, 0);
        Ideal::new(2, vec![&z1 - &MultiPoly::constant(2, gr(3, 2)), MultiPoly::var(2, 1)]).unwrap()
    }

    #[test]
    fn apply_examples() {
        let id = ShearAutomorphism::identity(2);
        assert_eq!(id.apply_point(&[gr(1, 1), gr(2, 1)]).unwrap(), vec![gr(1, 1), gr(2, 1)]);
        let psi = ShearAutomorphism::identity(2).then(1, MultiPoly::var(2, 0).pow(2)).unwrap();
        assert_eq!(psi.apply_point(&[gr(1, 1), gr(0, 1)]).unwrap(), vec![gr(1, 1), gr(1, 1)]);
        let mut rng = SplitMix64::new(3);
        let p = Polydisc::centered(2, rat(1, 1)).unwrap().sample_point(&mut rng);
        let back = psi.inverse().apply_point(&psi.apply_point(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert!(psi.as_map().compose(&psi.inverse().as_map()).unwrap().is_identity());
        assert!(ShearAutomorphism::identity(2).then(0, MultiPoly::var(2, 0)).is_err());
    }

    #[test]
    fn deviation_examples() {
        let k = Polydisc::centered(2, rat(1, 1)).unwrap();
        assert_eq!(sup_deviation_bound(&ShearAutomorphism::identity(2), &k).unwrap(), BigRational::zero());
        let c = GaussianRational::from_parts(1, 3, -1, 4);
        let psi = ShearAutomorphism::peaking(2, 1, 0, c.clone(), GaussianRational::zero(), 7).unwrap();
        assert_eq!(sup_deviation_bound(&psi, &k).unwrap(), c.l1_norm());
        let two = psi.clone().then(0, MultiPoly::var(2, 1).scale(&gr(1, 10))).unwrap();
        let single = sup_deviation_bound(&psi, &k).unwrap();
        let inflated = k.inflate_coordinate(1, &single);
        let second = MultiPoly::var(2, 1).scale(&gr(1, 10)).centered_sup_bound(&inflated).unwrap();
        assert!(sup_deviation_bound(&two, &k).unwrap() <= single + second);
    }

    #[test]
    fn hand_witness_escapes() {
        let w = hand_witness();
        let k = Polydisc::centered(2, rat(1, 1)).unwrap();
        let bx = Polydisc::centered(2, rat(2, 1)).unwrap();
        assert_eq!(sup_deviation_bound(&w, &k).unwrap(), rat(1, 20));
        assert_eq!(w.inverse().apply_point(&[gr(3, 2), gr(0, 1)]).unwrap(), vec![gr(3, 2), gr(-59049, 20480)]);
        assert!(verify_escape(&w, &point_sigma(), &bx, 8).unwrap().is_certified());
        let id = ShearAutomorphism::identity(2);
        assert!(!verify_escape(&id, &point_sigma(), &bx, 3).unwrap().is_certified());
        assert!(verify_escape(&id, &Ideal::unit(2), &bx, 3).unwrap().is_certified());
    }

    #[test]
    fn search_finds_certified_escape() {
        let k = Polydisc::centered(2, rat(1, 1)).unwrap();
        let bx = Polydisc::centered(2, rat(2, 1)).unwrap();
        let e = find_escape(&point_sigma(), &k, &bx, &rat(1, 10), 0, 32).unwrap();
        assert!(e.deviation_bound < rat(1, 10));
        assert!(e.certificate.is_certified());
        assert_eq!(escape_coordinates(&point_sigma(), &k).unwrap(), vec![0]);
    }

    #[test]
    fn search_preconditions() {
        let k = Polydisc::centered(2, rat(1, 1)).unwrap();
        let bx = Polydisc::centered(2, rat(2, 1)).unwrap();
        let line = Ideal::new(2, vec![MultiPoly::var(2, 0)]).unwrap();
        assert_eq!(find_escape(&line, &k, &bx, &rat(1, 10), 0, 4).unwrap_err().exit_code(), 3);
        let origin = Ideal::new(2, vec![MultiPoly::var(2, 0), MultiPoly::var(2, 1)]).unwrap();
        assert!(matches!(find_escape(&origin, &k, &bx, &rat(1, 10), 0, 4), Err(Error::NotSeparated(_))));
        let far = Ideal::new(2, vec![&MultiPoly::var(2, 0) - &MultiPoly::constant(2, gr(5, 1)), MultiPoly::var(2, 1)]).unwrap();
        let e = find_escape(&far, &k, &bx, &rat(1, 10), 0, 4).unwrap();
        assert!(e.automorphism.is_identity() && e.attempts == 0);
    }

    #[test]
    fn dyadic_rounding() {
        let x = rat(1, 3);
        let d = dyadic_floor(&x);
        assert!(d <= x && d > rat(1, 3) * rat(127, 128));
        assert_eq!(dyadic_floor(&rat(1, 2)), rat(1, 2));
    }
}
