//! Certified nonvanishing of polynomial systems on polydiscs.
//!
//! The region is first mapped onto the unit polydisc by `z_i = c_i + ρ_i·w_i`,
//! which leaves the common zero set (and hence the verdict) unchanged. Each
//! complex coordinate `w_i` is covered by a square grid of cells with
//! half-width `h = 2^-s`; cells whose square misses the unit disc are skipped.
//! A cell with center `x` is certified when some generator `q` satisfies
//!
//! ```text
//! max(|Re q(x)|, |Im q(x)|) > 2·n·h·L
//! ```
//!
//! where `L` is a Lipschitz bound of `q` on a disc of radius `3h/2 > √2·h`
//! around a center whose disc contains the cell. `L` is the monomial-norm
//! bound `Σ |b_β|'·|β|·ρ^{|β|−1}` of the Taylor expansion of `q` about that
//! center, i.e. [`MultiPoly::lipschitz_bound`] applied to the re-centered
//! polynomial. Every quantity is an exact integer or rational.
//!
//! Failing cells split into `4ⁿ` children. The search is level-synchronous so
//! the resulting [`Certificate`] does not depend on the thread schedule.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::gaussian::GaussianRational;
use super::poly::MultiPoly;
use super::polydisc::Polydisc;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_DEPTH: u32 = 8;
/// Cells per real axis of each complex coordinate at depth 0 (a power of two).
pub const DEFAULT_INITIAL_GRID: u32 = 4;
pub const DEFAULT_MAX_CELLS: u64 = 3_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NotCertifiedReason {
    /// Some cell center is a common zero of all generators.
    WitnessCell,
    /// The subdivision depth or cell budget ran out.
    DepthExhausted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "reason")]
pub enum CertStatus {
    Certified,
    NotCertified(NotCertifiedReason),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub status: CertStatus,
    /// Deepest subdivision level that was evaluated.
    pub grid_depth: u32,
    /// Cells evaluated over all levels.
    pub cell_count: u64,
    /// A common zero found at a cell center, in region coordinates.
    #[serde(skip)]
    pub witness: Option<Vec<GaussianRational>>,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.status == CertStatus::Certified
    }

    /// A certificate for an empty system of obstructions (trivially true).
    pub fn trivial() -> Self {
        Self { status: CertStatus::Certified, grid_depth: 0, cell_count: 0, witness: None }
    }

    /// Rejected without subdivision (an exact enclosure did not separate).
    pub fn not_certified() -> Self {
        Self { status: CertStatus::NotCertified(NotCertifiedReason::DepthExhausted), grid_depth: 0, cell_count: 0, witness: None }
    }

    /// Certified without subdivision, by `cells` exact enclosing polydiscs.
    pub fn by_enclosure(cells: u64) -> Self {
        Self { status: CertStatus::Certified, grid_depth: 0, cell_count: cells, witness: None }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.status {
            CertStatus::Certified => write!(f, "Certified")?,
            CertStatus::NotCertified(NotCertifiedReason::WitnessCell) => write!(f, "NotCertified(witness-cell)")?,
            CertStatus::NotCertified(NotCertifiedReason::DepthExhausted) => {
                write!(f, "NotCertified(depth-exhausted)")?
            }
        }
        write!(f, " [depth {}, {} cells]", self.grid_depth, self.cell_count)
    }
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub max_depth: u32,
    pub initial_grid: u32,
    pub max_cells: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self { max_depth: DEFAULT_MAX_DEPTH, initial_grid: DEFAULT_INITIAL_GRID, max_cells: DEFAULT_MAX_CELLS }
    }
}

impl CertifyOptions {
    pub fn with_depth(max_depth: u32) -> Self {
        Self { max_depth, ..Self::default() }
    }
}

/// Certifies that the generators have no common zero on `region`.
pub fn certify_system_nonvanishing(gens: &[MultiPoly], region: &Polydisc, max_depth: u32) -> Result<Certificate> {
    certify_with(gens, region, &CertifyOptions::with_depth(max_depth))
}

pub fn certify_with(gens: &[MultiPoly], region: &Polydisc, opts: &CertifyOptions) -> Result<Certificate> {
    if gens.is_empty() {
        return Err(Error::InvalidInput("certification needs at least one generator".into()));
    }
    let n = region.dim();
    if let Some(g) = gens.iter().find(|g| g.nvars() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: g.nvars() });
    }
    if !opts.initial_grid.is_power_of_two() || opts.initial_grid < 2 {
        return Err(Error::InvalidInput("initial grid must be a power of two ≥ 2".into()));
    }
    // a nonzero constant settles it without a grid
    if gens.iter().any(|g| g.is_constant() && !g.is_zero()) {
        return Ok(Certificate::trivial());
    }
    let scaled: Vec<ScaledPoly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| ScaledPoly::new(g, region))
        .collect::<Result<_>>()?;
    let s0 = opts.initial_grid.trailing_zeros();
    Ok(Grid { n, polys: scaled, s0, region }.run(opts))
}

/// Gaussian integer.
#[derive(Clone, Debug, PartialEq, Eq)]
struct GInt {
    re: BigInt,
    im: BigInt,
}

impl GInt {
    fn zero() -> Self {
        Self { re: BigInt::zero(), im: BigInt::zero() }
    }
    fn one() -> Self {
        Self { re: BigInt::one(), im: BigInt::zero() }
    }
    fn from_i64(re: i64, im: i64) -> Self {
        Self { re: re.into(), im: im.into() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn mul(&self, o: &GInt) -> GInt {
        GInt { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
    fn add_assign(&mut self, o: &GInt) {
        self.re += &o.re;
        self.im += &o.im;
    }
    fn shl(&self, bits: usize) -> GInt {
        GInt { re: &self.re << bits, im: &self.im << bits }
    }
    fn l1(&self) -> BigInt {
        self.re.abs() + self.im.abs()
    }
    fn linf(&self) -> BigInt {
        let a = self.re.abs();
        let b = self.im.abs();
        if a >= b {
            a
        } else {
            b
        }
    }
}

/// A generator pulled back to unit-polydisc coordinates with Gaussian-integer coefficients.
struct ScaledPoly {
    degree: u32,
    terms: Vec<(Vec<u32>, GInt)>,
}

impl ScaledPoly {
    fn new(q: &MultiPoly, region: &Polydisc) -> Result<Self> {
        let n = region.dim();
        let subst: Vec<MultiPoly> = (0..n)
            .map(|i| {
                let w = MultiPoly::var(n, i).scale(&GaussianRational::real(region.radii()[i].clone()));
                &w + &MultiPoly::constant(n, region.center()[i].clone())
            })
            .collect();
        let pulled = q.compose(&subst)?;
        let lcm = pulled.terms().values().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()));
        let lcm_r = BigRational::from_integer(lcm);
        let terms = pulled
            .terms()
            .iter()
            .map(|(m, c)| {
                let re = (&c.re * &lcm_r).to_integer();
                let im = (&c.im * &lcm_r).to_integer();
                (m.0.clone(), GInt { re, im })
            })
            .collect();
        Ok(Self { degree: pulled.degree(), terms })
    }

    /// `2^{s·D}·q(A/2^s)` as a Gaussian integer.
    fn eval_scaled(&self, a: &[GInt], s: u32) -> GInt {
        let n = a.len();
        let maxdeg: Vec<u32> = (0..n).map(|i| self.terms.iter().map(|(e, _)| e[i]).max().unwrap_or(0)).collect();
        let pows: Vec<Vec<GInt>> = a
            .iter()
            .zip(&maxdeg)
            .map(|(x, &d)| {
                let mut v = vec![GInt::one()];
                for k in 1..=d as usize {
                    let nx = v[k - 1].mul(x);
                    v.push(nx);
                }
                v
            })
            .collect();
        let mut acc = GInt::zero();
        for (e, c) in &self.terms {
            let deg: u32 = e.iter().sum();
            let mut t = c.shl(((self.degree - deg) * s) as usize);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&pows[i][k as usize]);
                }
            }
            acc.add_assign(&t);
        }
        acc
    }

    /// Lipschitz bound (in unit-polydisc coordinates) on the disc of radius
    /// `3/2^{s+1}` around `A/2^s`, from the Taylor expansion at that center.
    fn local_lipschitz(&self, a: &[GInt], s: u32) -> BigRational {
        let n = a.len();
        let d = self.degree as usize;
        // H(x) = Σ c_α 2^{s(D−|α|)} x^α, then G(v) = H(A + v) and b_β = g_β 2^{s|β|} / 2^{sD}
        let mut shifted: Vec<(Vec<u32>, GInt)> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let deg: u32 = e.iter().sum();
                (e.clone(), c.shl(((self.degree - deg) * s) as usize))
            })
            .collect();
        for var in 0..n {
            shifted = taylor_shift_var(&shifted, var, &a[var]);
        }
        let mut by_degree = vec![BigInt::zero(); d + 1];
        for (e, g) in &shifted {
            let k: u32 = e.iter().sum();
            by_degree[k as usize] += g.l1();
        }
        // L = Σ_k S_k·k·2^{sk}·ρ^{k−1} / 2^{sD}, ρ = 3/2^{s+1}
        //   = Σ_k S_k·k·3^{k−1}·2^{s−k+1} / 2^{sD}
        let mut num = BigInt::zero();
        let mut three = BigInt::one();
        for (k, sk) in by_degree.iter().enumerate().skip(1) {
            if k > 1 {
                three *= 3;
            }
            if sk.is_zero() {
                continue;
            }
            // 2^{s−k+1} may be fractional; scale everything by 2^{d}
            let shift = s as i64 - k as i64 + 1 + d as i64;
            num += (sk * BigInt::from(k) * &three) << (shift as usize);
        }
        let den = BigInt::one() << ((s as usize) * d + d);
        BigRational::new(num, den)
    }
}

/// Univariate Taylor shift in variable `var` by `a`, applied slice-wise.
fn taylor_shift_var(terms: &[(Vec<u32>, GInt)], var: usize, a: &GInt) -> Vec<(Vec<u32>, GInt)> {
    if a.is_zero() {
        return terms.to_vec();
    }
    use std::collections::BTreeMap;
    let mut slices: BTreeMap<Vec<u32>, Vec<GInt>> = BTreeMap::new();
    for (e, c) in terms {
        let mut key = e.clone();
        let k = key[var] as usize;
        key[var] = 0;
        let v = slices.entry(key).or_default();
        if v.len() <= k {
            v.resize(k + 1, GInt::zero());
        }
        v[k].add_assign(c);
    }
    let mut out = Vec::new();
    for (key, mut coeffs) in slices {
        let d = coeffs.len() - 1;
        // repeated synthetic division: p(x + a)
        for i in 0..d {
            for j in (i..d).rev() {
                let t = coeffs[j + 1].mul(a);
                coeffs[j].add_assign(&t);
            }
        }
        for (k, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                let mut e = key.clone();
                e[var] = k as u32;
                out.push((e, c));
            }
        }
    }
    out
}

#[derive(Clone)]
struct Cell {
    /// Center numerators `(re, im)` per complex coordinate, over `2^s`; all odd.
    center: Vec<(i64, i64)>,
    /// Lipschitz bounds inherited from an enclosing disc, one per generator.
    lips: Vec<BigRational>,
}

enum Verdict {
    Certified,
    Witness,
    /// Failing, carrying the Lipschitz bounds valid for all children.
    Split(Vec<BigRational>),
}

struct Grid<'a> {
    n: usize,
    polys: Vec<ScaledPoly>,
    s0: u32,
    region: &'a Polydisc,
}

impl Grid<'_> {
    fn run(&self, opts: &CertifyOptions) -> Certificate {
        let root_lips: Vec<BigRational> = {
            // disc of radius 3/2 around the origin covers every depth-0 square
            let zero = vec![GInt::zero(); self.n];
            self.polys.iter().map(|p| p.local_lipschitz(&zero, 0)).collect()
        };
        let mut level: Vec<Cell> = initial_centers(self.n, self.s0)
            .into_iter()
            .filter(|c| !outside_unit(c, self.s0))
            .map(|center| Cell { center, lips: root_lips.clone() })
            .collect();
        let mut cell_count = 0u64;
        let mut depth = 0u32;
        loop {
            let s = self.s0 + depth;
            cell_count += level.len() as u64;
            let verdicts: Vec<Verdict> = level.par_iter().map(|c| self.judge(c, s)).collect();
            if let Some(idx) = verdicts.iter().position(|v| matches!(v, Verdict::Witness)) {
                return Certificate {
                    status: CertStatus::NotCertified(NotCertifiedReason::WitnessCell),
                    grid_depth: depth,
                    cell_count,
                    witness: Some(self.to_region(&level[idx].center, s)),
                };
            }
            let failing: Vec<(Cell, Vec<BigRational>)> = level
                .into_iter()
                .zip(verdicts)
                .filter_map(|(c, v)| match v {
                    Verdict::Split(l) => Some((c, l)),
                    _ => None,
                })
                .collect();
            if failing.is_empty() {
                return Certificate { status: CertStatus::Certified, grid_depth: depth, cell_count, witness: None };
            }
            let children_per_cell = 1u64 << (2 * self.n);
            if depth >= opts.max_depth
                || cell_count + failing.len() as u64 * children_per_cell > opts.max_cells
                || s + 1 >= 60
            {
                return Certificate {
                    status: CertStatus::NotCertified(NotCertifiedReason::DepthExhausted),
                    grid_depth: depth,
                    cell_count,
                    witness: None,
                };
            }
            level = failing
                .into_iter()
                .flat_map(|(c, lips)| {
                    children(&c.center)
                        .into_iter()
                        .filter(|ch| !outside_unit(ch, s + 1))
                        .map(move |center| Cell { center, lips: lips.clone() })
                        .collect::<Vec<_>>()
                })
                .collect();
            depth += 1;
            if level.is_empty() {
                return Certificate { status: CertStatus::Certified, grid_depth: depth, cell_count, witness: None };
            }
        }
    }

    fn judge(&self, cell: &Cell, s: u32) -> Verdict {
        let a: Vec<GInt> = cell.center.iter().map(|&(x, y)| GInt::from_i64(x, y)).collect();
        let values: Vec<GInt> = self.polys.iter().map(|p| p.eval_scaled(&a, s)).collect();
        if values.iter().all(|v| v.is_zero()) {
            return Verdict::Witness;
        }
        // 2·n·h with h = 2^-s
        let slack = BigRational::new(BigInt::from(2 * self.n as u64), BigInt::one() << s as usize);
        let passes = |k: usize, lip: &BigRational| -> bool {
            let p = &self.polys[k];
            let lb = BigRational::new(values[k].linf(), BigInt::one() << ((s * p.degree) as usize));
            lb > &slack * lip
        };
        if (0..self.polys.len()).any(|k| passes(k, &cell.lips[k])) {
            return Verdict::Certified;
        }
        // tighten with the cell's own expansion before giving up on it
        let own: Vec<BigRational> = self
            .polys
            .iter()
            .zip(&cell.lips)
            .map(|(p, inherited)| {
                let l = p.local_lipschitz(&a, s);
                if &l < inherited {
                    l
                } else {
                    inherited.clone()
                }
            })
            .collect();
        if (0..self.polys.len()).any(|k| passes(k, &own[k])) {
            return Verdict::Certified;
        }
        Verdict::Split(own)
    }

    fn to_region(&self, center: &[(i64, i64)], s: u32) -> Vec<GaussianRational> {
        let den = BigInt::one() << s as usize;
        center
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| {
                let w = GaussianRational::new(
                    BigRational::new(x.into(), den.clone()),
                    BigRational::new(y.into(), den.clone()),
                );
                &self.region.center()[i] + &w.scale(&self.region.radii()[i])
            })
            .collect()
    }
}

fn initial_centers(n: usize, s0: u32) -> Vec<Vec<(i64, i64)>> {
    let g = 1i64 << s0; // centers are odd multiples of 2^-s0 inside (−1, 1)
    let axis: Vec<i64> = (-g + 1..g).step_by(2).collect();
    let squares: Vec<(i64, i64)> = axis.iter().flat_map(|&x| axis.iter().map(move |&y| (x, y))).collect();
    let mut out: Vec<Vec<(i64, i64)>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                squares.iter().map(move |&sq| {
                    let mut v = prefix.clone();
                    v.push(sq);
                    v
                })
            })
            .collect();
    }
    out
}

fn children(center: &[(i64, i64)]) -> Vec<Vec<(i64, i64)>> {
    let mut out: Vec<Vec<(i64, i64)>> = vec![Vec::new()];
    for &(x, y) in center {
        let opts = [(2 * x - 1, 2 * y - 1), (2 * x - 1, 2 * y + 1), (2 * x + 1, 2 * y - 1), (2 * x + 1, 2 * y + 1)];
        out = out
            .into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |&o| {
                    let mut v = prefix.clone();
                    v.push(o);
                    v
                })
            })
            .collect();
    }
    out
}

/// True when some coordinate square `[x±1]×[y±1]` (units of 2^-s) misses the unit disc.
fn outside_unit(center: &[(i64, i64)], s: u32) -> bool {
    let r = 1i128 << s;
    center.iter().any(|&(x, y)| {
        let dx = (x.abs() as i128 - 1).max(0);
        let dy = (y.abs() as i128 - 1).max(0);
        dx * dx + dy * dy > r * r
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gaussian::{int, rat};
    use crate::rng::SplitMix64;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_parts(re, 1, im, 1)
    }

    fn unit_disc() -> Polydisc {
        Polydisc::centered(1, int(1)).unwrap()
    }

    #[test]
    fn constant_one_certifies() {
        let c = certify_system_nonvanishing(&[MultiPoly::one(1)], &unit_disc(), 8).unwrap();
        assert!(c.is_certified());
    }

    #[test]
    fn zero_at_origin_is_not_certified() {
        let c = certify_system_nonvanishing(&[MultiPoly::var(1, 0)], &unit_disc(), 8).unwrap();
        assert!(!c.is_certified());
    }

    #[test]
    fn shifted_linear_certifies_at_depth_zero() {
        let q = &MultiPoly::var(1, 0) - &MultiPoly::constant(1, g(2, 0));
        let c = certify_system_nonvanishing(&[q], &unit_disc(), 8).unwrap();
        assert!(c.is_certified(), "{c}");
        assert_eq!(c.grid_depth, 0);
    }

    #[test]
    fn witness_cell_reported_at_exact_zero() {
        // zero at 1/2 + 1/2 i (a depth-1 cell center in unit coordinates scaled by 2... pick one at depth 0)
        let z0 = GaussianRational::from_parts(1, 4, 1, 4);
        let q = &MultiPoly::var(1, 0) - &MultiPoly::constant(1, z0.clone());
        let c = certify_system_nonvanishing(&[q], &unit_disc(), 8).unwrap();
        assert_eq!(c.status, CertStatus::NotCertified(NotCertifiedReason::WitnessCell));
        assert_eq!(c.witness.unwrap(), vec![z0]);
    }

    #[test]
    fn zero_off_grid_exhausts_depth() {
        let z0 = GaussianRational::from_parts(1, 3, 0, 1);
        let q = &MultiPoly::var(1, 0) - &MultiPoly::constant(1, z0);
        let c = certify_system_nonvanishing(&[q], &unit_disc(), 3).unwrap();
        assert_eq!(c.status, CertStatus::NotCertified(NotCertifiedReason::DepthExhausted));
        assert_eq!(c.grid_depth, 3);
    }

    #[test]
    fn zero_just_outside_needs_subdivision() {
        let q = &MultiPoly::var(1, 0) - &MultiPoly::constant(1, GaussianRational::from_parts(11, 10, 0, 1));
        let c = certify_system_nonvanishing(&[q], &unit_disc(), 8).unwrap();
        assert!(c.is_certified(), "{c}");
        assert!(c.grid_depth > 0);
    }

    #[test]
    fn system_needs_one_nonzero_generator_per_cell() {
        // z1 and z1 - 1 have no common zero anywhere
        let q1 = MultiPoly::var(1, 0);
        let q2 = &MultiPoly::var(1, 0) - &MultiPoly::one(1);
        let c = certify_system_nonvanishing(&[q1, q2], &unit_disc(), 8).unwrap();
        assert!(c.is_certified(), "{c}");
    }

    #[test]
    fn off_center_region_and_rational_radii() {
        // zeros of z1*z2 avoid the bidisc around (1,1) with radius 1/4
        let q = &MultiPoly::var(2, 0) * &MultiPoly::var(2, 1);
        let r = Polydisc::uniform(vec![g(1, 0), g(1, 0)], rat(1, 4)).unwrap();
        let c = certify_system_nonvanishing(&[q.clone()], &r, 8).unwrap();
        assert!(c.is_certified(), "{c}");
        let r = Polydisc::uniform(vec![g(1, 0), g(1, 0)], rat(3, 2)).unwrap();
        let c = certify_system_nonvanishing(&[q], &r, 2).unwrap();
        assert!(!c.is_certified());
    }

    #[test]
    fn certified_systems_have_no_sampled_common_zero() {
        let mut rng = SplitMix64::new(3);
        let q = &MultiPoly::var(2, 0).pow(2) - &MultiPoly::constant(2, g(3, 0));
        let q2 = &MultiPoly::var(2, 1) + &MultiPoly::var(2, 0);
        let r = Polydisc::centered(2, int(1)).unwrap();
        let c = certify_system_nonvanishing(&[q.clone(), q2.clone()], &r, 8).unwrap();
        assert!(c.is_certified());
        for _ in 0..1000 {
            let p = r.sample_point(&mut rng);
            assert!(!(q.eval(&p).unwrap().is_zero() && q2.eval(&p).unwrap().is_zero()));
        }
    }

    #[test]
    fn local_lipschitz_matches_formula_at_origin() {
        // on the w-disc of radius 3/2 around 0, L(w^2) = 2·(3/2) = 3
        let q = MultiPoly::var(1, 0).pow(2);
        let sp = ScaledPoly::new(&q, &unit_disc()).unwrap();
        assert_eq!(sp.local_lipschitz(&[GInt::zero()], 0), int(3));
        let direct = q.lipschitz_bound(&Polydisc::centered(1, rat(3, 2)).unwrap()).unwrap();
        assert_eq!(direct, int(3));
    }

    #[test]
    fn local_lipschitz_recenters() {
        // around w = 1/2 with radius 3/4: q = w^2 ⇒ q(1/2 + u) = 1/4 + u + u², L = 1 + 2·3/4
        let q = MultiPoly::var(1, 0).pow(2);
        let sp = ScaledPoly::new(&q, &unit_disc()).unwrap();
        assert_eq!(sp.local_lipschitz(&[GInt::from_i64(1, 0)], 1), rat(5, 2));
    }
}
