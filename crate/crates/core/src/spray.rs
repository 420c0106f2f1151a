//! Sprays on `P¹` and the divisor twist that lets them extend across `Λ = {∞}`.
//!
//! Chart 1 is `z ∈ ℂ = P¹ ∖ {∞}`, chart 2 is `w = 1/z ∈ P¹ ∖ {0}`, and `Λ = {w = 0}`.
//! On chart 1 the spray is the affine model `s(z, t) = z + t`. Transported to
//! chart 2 it becomes `w/(1 + t·w)`; twisting the fiber by `L^{⊗m}`, where `L`
//! is the line bundle of `Λ` with local defining function `b₂(w) = w`, replaces
//! `t` by `t·w^m`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{GaussianRational, MultiPoly, Polydisc};
use crate::rng::SplitMix64;
use num_traits::{One, Zero};

/// `numerator / denominator` with a nonzero denominator.
#[derive(Clone, Debug)]
pub struct RationalFunc {
    numerator: MultiPoly,
    denominator: MultiPoly,
}

/// A point of `P¹` in homogeneous coordinates `[a : b]`, i.e. `a/b`.
#[derive(Clone, Debug)]
pub struct P1Point(pub GaussianRational, pub GaussianRational);

impl PartialEq for P1Point {
    fn eq(&self, other: &Self) -> bool {
        &self.0 * &other.1 == &other.0 * &self.1
    }
}

impl P1Point {
    pub fn is_infinity(&self) -> bool {
        self.1.is_zero()
    }
}

impl RationalFunc {
    pub fn new(numerator: MultiPoly, denominator: MultiPoly) -> Result<Self> {
        if numerator.nvars() != denominator.nvars() {
            return Err(Error::DimensionMismatch { expected: numerator.nvars(), got: denominator.nvars() });
        }
        if denominator.is_zero() {
            return Err(Error::InvalidInput("rational function with zero denominator".into()));
        }
        Ok(Self { numerator, denominator })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let one = MultiPoly::one(p.nvars());
        Self { numerator: p, denominator: one }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(MultiPoly::var(nvars, i))
    }

    pub fn nvars(&self) -> usize {
        self.numerator.nvars()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &MultiPoly {
        &self.denominator
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::new(
            &(&self.numerator * &other.denominator) + &(&other.numerator * &self.denominator),
            &self.denominator * &other.denominator,
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(&self.numerator * &other.numerator, &self.denominator * &other.denominator)
    }

    /// `1/self`; fails on the zero function.
    pub fn recip(&self) -> Result<Self> {
        Self::new(self.denominator.clone(), self.numerator.clone())
    }

    /// Substitutes rational functions (in a common set of variables) for every variable.
    pub fn compose(&self, subs: &[RationalFunc]) -> Result<Self> {
        if subs.len() != self.nvars() {
            return Err(Error::ArityMismatch { expected: self.nvars(), got: subs.len() });
        }
        let m = subs.first().map_or(0, RationalFunc::nvars);
        // clear denominators with Π q_i^{D_i}, D_i the largest degree of variable i
        let degs: Vec<u32> = (0..self.nvars())
            .map(|i| {
                let d = |p: &MultiPoly| p.terms().keys().map(|e| e.0[i]).max().unwrap_or(0);
                d(&self.numerator).max(d(&self.denominator))
            })
            .collect();
        let homogenize = |p: &MultiPoly| -> Result<MultiPoly> {
            let mut acc = MultiPoly::zero(m);
            for (e, c) in p.terms() {
                let mut t = MultiPoly::constant(m, c.clone());
                for (i, s) in subs.iter().enumerate() {
                    t = &t * &s.numerator.pow(e.0[i]);
                    t = &t * &s.denominator.pow(degs[i] - e.0[i]);
                }
                acc = &acc + &t;
            }
            Ok(acc)
        };
        Self::new(homogenize(&self.numerator)?, homogenize(&self.denominator)?)
    }

    /// Value as a point of `P¹`; `[0 : 0]` is reported as an error (indeterminate).
    pub fn eval(&self, z: &[GaussianRational]) -> Result<P1Point> {
        let a = self.numerator.eval(z)?;
        let b = self.denominator.eval(z)?;
        if a.is_zero() && b.is_zero() {
            return Err(Error::InvalidInput("rational function is indeterminate at this point".into()));
        }
        Ok(P1Point(a, b))
    }

    /// Substitutes a value for one variable, keeping the variable count.
    pub fn substitute(&self, var: usize, value: &GaussianRational) -> Result<Self> {
        Self::new(self.numerator.substitute(var, value)?, self.denominator.substitute(var, value)?)
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Denominator is the constant 1.
    pub fn is_polynomial(&self) -> bool {
        self.denominator.is_constant() && self.denominator.constant_term() == GaussianRational::one()
    }
}

impl PartialEq for RationalFunc {
    fn eq(&self, other: &Self) -> bool {
        self.nvars() == other.nvars()
            && &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}

/// The chart transition `w ↦ 1/w` of `P¹`, in one variable.
pub fn p1_transition() -> RationalFunc {
    RationalFunc::var(1, 0).recip().expect("w is nonzero")
}

/// Variable indices in the spray expressions: the base coordinate, then the fiber.
pub const BASE: usize = 0;
pub const FIBER: usize = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct TwistedSpray {
    pub m: u32,
    /// `z + t` in `(z, t)`.
    pub chart1_expr: RationalFunc,
    /// `w/(1 + t·w^{m+1})` in `(w, t)`.
    pub chart2_expr: RationalFunc,
}

/// Fiber transition of the twisted bundle: `t₁ = t·b₂(w)^m / b₁^m = t·w^m`.
fn twist_factor(m: u32) -> MultiPoly {
    MultiPoly::var(2, BASE).pow(m)
}

/// The chart-1 spray carried to chart 2: `w ↦ 1/w`, `t ↦ t·w^m`, apply `z + t`, map back.
pub fn transported_spray(m: u32) -> Result<RationalFunc> {
    let z = p1_transition().compose(&[RationalFunc::var(2, BASE)])?;
    let t1 = RationalFunc::from_poly(&MultiPoly::var(2, FIBER) * &twist_factor(m));
    let sum = z.add(&t1)?;
    p1_transition().compose(&[sum])
}

pub fn twisted_spray_p1(m: u32) -> TwistedSpray {
    let chart1_expr = RationalFunc::from_poly(&MultiPoly::var(2, BASE) + &MultiPoly::var(2, FIBER));
    let w = MultiPoly::var(2, BASE);
    let den = &MultiPoly::one(2) + &(&MultiPoly::var(2, FIBER) * &w.pow(m + 1));
    let chart2_expr = RationalFunc::new(w, den).expect("1 + t·w^{m+1} is nonzero");
    TwistedSpray { m, chart1_expr, chart2_expr }
}

/// Outcome of the three checks; `passed` iff all hold.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SprayVerification {
    pub m: u32,
    /// (a) `s̃(y, 0) = y` in both charts.
    pub zero_section: bool,
    /// (b) `chart2_expr(0, t) = 0` identically in `t`.
    pub lambda_fixed: bool,
    /// (c) the chart-2 formula agrees with the transported chart-1 spray through a
    /// genuine twist (`w^m` vanishes on `Λ`), symbolically and at every sample.
    pub consistency: bool,
    pub samples_checked: usize,
}

impl SprayVerification {
    pub fn passed(&self) -> bool {
        self.zero_section && self.lambda_fixed && self.consistency
    }
}

pub fn check_spray_p1(m: u32, samples: usize, seed: u64) -> Result<SprayVerification> {
    let s = twisted_spray_p1(m);
    let zero = GaussianRational::zero();
    let base = RationalFunc::var(2, BASE);

    let zero_section = s.chart1_expr.substitute(FIBER, &zero)? == base && s.chart2_expr.substitute(FIBER, &zero)? == base;
    let lambda_fixed = s.chart2_expr.substitute(BASE, &zero)?.is_zero();

    let transported = transported_spray(m)?;
    // the twist must vanish along Λ, otherwise the bundle is trivial there
    let twisted = twist_factor(m).substitute(BASE, &zero)?.is_zero();
    let symbolic = transported == s.chart2_expr;

    let mut rng = SplitMix64::new(seed);
    let disc = Polydisc::centered(2, crate::exact::rat(4, 1))?;
    let mut checked = 0;
    let mut sampled = true;
    while checked < samples {
        let p = disc.sample_point(&mut rng);
        if p[BASE].is_zero() {
            continue;
        }
        // indeterminate points of either side are skipped, never counted
        match (s.chart2_expr.eval(&p), transported.eval(&p)) {
            (Ok(a), Ok(b)) => {
                sampled &= a == b;
                checked += 1;
            }
            _ => continue,
        }
    }
    Ok(SprayVerification {
        m,
        zero_section,
        lambda_fixed,
        consistency: twisted && symbolic && sampled,
        samples_checked: checked,
    })
}

pub fn verify_spray_p1(m: u32, samples: usize, seed: u64) -> Result<bool> {
    Ok(check_spray_p1(m, samples, seed)?.passed())
}

/// Least `m ≥ 0` for which the twisted spray passes (a), (b) and (c) symbolically.
pub fn minimal_twist_p1() -> u32 {
    (0..)
        .find(|&m| check_spray_p1(m, 0, 0).is_ok_and(|v| v.passed()))
        .expect("some twist extends the spray")
}

impl fmt::Display for TwistedSpray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m = {}: chart 1 {}, chart 2 {}", self.m, self.chart1_expr, self.chart2_expr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(n: i64) -> GaussianRational {
        GaussianRational::from_i64(n)
    }

    #[test]
    fn transition_examples() {
        let phi = p1_transition();
        assert_eq!(phi.eval(&[gr(2)]).unwrap(), P1Point(GaussianRational::from_parts(1, 2, 0, 1), gr(1)));
        assert_eq!(phi.eval(&[gr(1)]).unwrap(), P1Point(gr(1), gr(1)));
        assert!(phi.eval(&[gr(0)]).unwrap().is_infinity());
        assert_eq!(phi.compose(&[phi.clone()]).unwrap(), RationalFunc::var(1, 0));
    }

    #[test]
    fn chart_two_formulas() {
        let w = MultiPoly::var(2, BASE);
        let t = MultiPoly::var(2, FIBER);
        let one = MultiPoly::one(2);
        let expect = RationalFunc::new(w.clone(), &one + &(&t * &w.pow(2))).unwrap();
        assert_eq!(twisted_spray_p1(1).chart2_expr, expect);
        let untwisted = RationalFunc::new(w.clone(), &one + &(&t * &w)).unwrap();
        assert_eq!(twisted_spray_p1(0).chart2_expr, untwisted);
        for m in 0..4 {
            let s = twisted_spray_p1(m);
            assert_eq!(s.chart2_expr.substitute(FIBER, &gr(0)).unwrap(), RationalFunc::var(2, BASE));
            assert_eq!(transported_spray(m).unwrap(), s.chart2_expr);
        }
    }

    #[test]
    fn twist_contract() {
        assert_eq!(minimal_twist_p1(), 1);
        assert!(verify_spray_p1(1, 32, 7).unwrap());
        assert!(verify_spray_p1(2, 32, 7).unwrap());
        let v0 = check_spray_p1(0, 32, 7).unwrap();
        assert!(v0.zero_section && v0.lambda_fixed && !v0.consistency);
        assert!(!v0.passed());
        assert_eq!(check_spray_p1(1, 32, 7).unwrap().samples_checked, 32);
    }

    #[test]
    fn rational_arithmetic() {
        let x = RationalFunc::var(1, 0);
        let inv = x.recip().unwrap();
        let one = RationalFunc::from_poly(MultiPoly::one(1));
        assert_eq!(x.mul(&inv).unwrap(), one);
        assert!(one.is_polynomial() && !inv.is_polynomial());
        assert!(RationalFunc::new(MultiPoly::one(1), MultiPoly::zero(1)).is_err());
        assert!(RationalFunc::from_poly(MultiPoly::zero(1)).recip().is_err());
    }
}
