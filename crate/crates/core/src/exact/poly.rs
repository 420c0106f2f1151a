//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is graded
//! reverse lexicographic. The leading term is therefore the last entry.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use super::polydisc::Polydisc;
use crate::error::{Error, Result};

/// Dense exponent vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Indices of variables with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        // reverse lexicographic: the last differing exponent decides, smaller wins
        for (a, b) in self.0.iter().zip(&other.0).rev() {
            if a != b {
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All exponent vectors in `nvars` variables of total degree at most `max_degree`,
/// ordered by degree then lexicographically (descending in the first variable).
pub fn monomials_up_to(nvars: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let mut cur = vec![0u32; nvars];
        push_degree(nvars, d, 0, &mut cur, &mut out);
    }
    out
}

fn push_degree(nvars: usize, remaining: u32, idx: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if nvars == 0 {
        if remaining == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    if idx == nvars - 1 {
        cur[idx] = remaining;
        out.push(Monomial(cur.clone()));
        cur[idx] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        cur[idx] = e;
        push_degree(nvars, remaining - e, idx + 1, cur, out);
    }
    cur[idx] = 0;
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        Self::monomial(nvars, Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    /// The coordinate function `z_{i+1}` (0-based index `i`).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Self::monomial(nvars, Monomial::var(nvars, i), GaussianRational::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: GaussianRational) -> Self {
        assert_eq!(m.nvars(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { nvars, terms }
    }

    /// Builds from `(exponents, coefficient)` pairs, summing repeats and dropping zeros.
    pub fn from_terms<I>(nvars: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, GaussianRational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars);
            p.add_term(Monomial(e), &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, GaussianRational> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    /// Maximum total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Smallest total degree of a term; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&Monomial::one(self.nvars))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&GaussianRational> {
        self.terms.values().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// `c · x^m · self`.
    pub fn mul_term(&self, m: &Monomial, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    fn check_point(&self, z: &[GaussianRational]) -> Result<()> {
        if z.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: z.len() });
        }
        Ok(())
    }

    /// Exact value at `z`.
    /// Floating-point evaluation, returning the value and `Σ |c_α||z^α|` (a scale for residuals).
    pub fn eval_c64(&self, z: &[Complex64]) -> (Complex64, f64) {
        let mut value = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_c64();
            for (x, &e) in z.iter().zip(&m.0) {
                t *= x.powu(e);
            }
            value += t;
            scale += t.norm();
        }
        (value, scale)
    }

    pub fn eval(&self, z: &[GaussianRational]) -> Result<GaussianRational> {
        self.check_point(z)?;
        // cache powers per variable
        let maxdeg: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<GaussianRational>> = z
            .iter()
            .zip(&maxdeg)
            .map(|(x, &d)| {
                let mut v = Vec::with_capacity(d as usize + 1);
                v.push(GaussianRational::one());
                for k in 1..=d as usize {
                    let next = &v[k - 1] * x;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to variable `var` (0-based).
    pub fn diff(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange { index: var, len: self.nvars });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.add_term(m2, &c.scale(&BigRational::from_integer(e.into())));
        }
        Ok(out)
    }

    /// Mixed partial derivative `∂^alpha`.
    pub fn diff_multi(&self, alpha: &[u32]) -> Result<Self> {
        if alpha.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: alpha.len() });
        }
        let mut p = self.clone();
        for (i, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                p = p.diff(i)?;
            }
        }
        Ok(p)
    }

    /// `self(subst_1, …, subst_n)`. All substituted polynomials must share one variable count.
    pub fn compose(&self, subst: &[MultiPoly]) -> Result<Self> {
        if subst.len() != self.nvars {
            return Err(Error::ArityMismatch { expected: self.nvars, got: subst.len() });
        }
        let target = match subst.first() {
            Some(s) => s.nvars,
            None => 0,
        };
        if let Some(bad) = subst.iter().find(|s| s.nvars != target) {
            return Err(Error::ArityMismatch { expected: target, got: bad.nvars });
        }
        let maxdeg: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<MultiPoly>> = subst
            .iter()
            .zip(&maxdeg)
            .map(|(s, &d)| {
                let mut v = vec![MultiPoly::one(target)];
                for k in 1..=d as usize {
                    let next = &v[k - 1] * s;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Substitutes the constant `value` for variable `var`, keeping the variable count.
    pub fn substitute(&self, var: usize, value: &GaussianRational) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange { index: var, len: self.nvars });
        }
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out.add_term(m2, &(c * &value.pow(e)));
        }
        Ok(out)
    }

    /// Re-embeds into `nvars` variables, sending variable `i` to `map[i]`.
    pub fn relabel(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = Self::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            out.add_term(Monomial(e), c);
        }
        out
    }

    /// Taylor expansion about `center`: the polynomial `u ↦ self(center + u)`.
    pub fn shift(&self, center: &[GaussianRational]) -> Result<Self> {
        self.check_point(center)?;
        let subst: Vec<MultiPoly> = center
            .iter()
            .enumerate()
            .map(|(i, c)| &MultiPoly::var(self.nvars, i) + &MultiPoly::constant(self.nvars, c.clone()))
            .collect();
        self.compose(&subst)
    }

    /// `Σ_α |a_α|'·|α|·R̂^(|α|−1)` with `|a|' = |Re a|+|Im a|` and
    /// `R̂ = max_i(|Re c_i|+|Im c_i|+ρ_i)`. For `x, y ∈ region`,
    /// `|f(x) − f(y)| ≤ L · max_i |x_i − y_i|`.
    pub fn lipschitz_bound(&self, region: &Polydisc) -> Result<BigRational> {
        if region.dim() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: region.dim() });
        }
        let rhat = region.r_hat();
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let d = m.degree();
            if d == 0 {
                continue;
            }
            total += c.l1_norm() * BigRational::from_integer(d.into()) * pow_rat(&rhat, d - 1);
        }
        Ok(total)
    }

    /// Monomial-norm bound for `sup_{z ∈ region} |f(z)|`:
    /// `Σ_α |a_α|'·Π_i (|Re c_i|+|Im c_i|+ρ_i)^{α_i}`.
    pub fn sup_bound(&self, region: &Polydisc) -> Result<BigRational> {
        if region.dim() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: region.dim() });
        }
        let extents = region.coordinate_extents();
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.l1_norm();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= pow_rat(&extents[i], e);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Sup bound after re-centering at the region's center, which is much
    /// sharper for polynomials that are small near the center.
    pub fn centered_sup_bound(&self, region: &Polydisc) -> Result<BigRational> {
        let shifted = self.shift(region.center())?;
        let origin = Polydisc::new(vec![GaussianRational::zero(); self.nvars], region.radii().to_vec())?;
        shifted.sup_bound(&origin)
    }
}

pub(crate) fn pow_rat(x: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

impl<'a, 'b> Add<&'b MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'b MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a, 'b> Sub<&'b MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'b MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }
}

impl<'a, 'b> Mul<&'b MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'b MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-GaussianRational::one())
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

/// Human-readable form with variables `z1 … zn`, leading term first.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("z{}", i + 1) } else { format!("z{}^{}", i + 1, e) })
                .collect();
            if mono.is_empty() {
                write!(f, "({})", c)?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({})*{}", c, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.nvars, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gaussian::{int, rat};

    fn z(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn c(n: usize, v: i64) -> MultiPoly {
        MultiPoly::constant(n, v.into())
    }

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_parts(re, 1, im, 1)
    }

    #[test]
    fn grevlex_order() {
        // x > y > z in degree one; x*z < y^2 in grevlex
        let x = Monomial(vec![1, 0, 0]);
        let y = Monomial(vec![0, 1, 0]);
        let zz = Monomial(vec![0, 0, 1]);
        assert!(x > y && y > zz);
        assert!(Monomial(vec![0, 2, 0]) > Monomial(vec![1, 0, 1]));
        assert!(Monomial(vec![2, 0, 0]) > Monomial(vec![0, 2, 0]));
        assert!(Monomial(vec![0, 0, 2]) > x);
    }

    #[test]
    fn eval_examples() {
        let f = z(1, 0).pow(2);
        assert_eq!(f.eval(&[g(3, 0)]).unwrap(), g(9, 0));
        let f = &z(2, 0) * &z(2, 1);
        assert_eq!(f.eval(&[g(1, 1), g(1, -1)]).unwrap(), g(2, 0));
        assert_eq!(MultiPoly::zero(2).eval(&[g(5, 1), g(0, 7)]).unwrap(), g(0, 0));
        assert!(matches!(f.eval(&[g(1, 0)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn diff_examples() {
        let f = z(1, 0).pow(2);
        assert_eq!(f.diff(0).unwrap(), z(1, 0).scale(&g(2, 0)));
        let f = &z(2, 0) * &z(2, 1);
        assert_eq!(f.diff(1).unwrap(), z(2, 0));
        assert!(c(1, 5).diff(0).unwrap().is_zero());
        assert!(matches!(f.diff(2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn compose_examples() {
        let f = z(1, 0).pow(2);
        let s = &z(1, 0) + &c(1, 1);
        let want = &(&z(1, 0).pow(2) + &z(1, 0).scale(&g(2, 0))) + &c(1, 1);
        assert_eq!(f.compose(&[s]).unwrap(), want);

        let f = z(2, 0);
        let r = f.compose(&[z(2, 1), z(2, 1)]).unwrap();
        assert_eq!(r, z(2, 1));

        let f = &z(2, 0) * &z(2, 1);
        let r = f.compose(&[z(2, 0), &z(2, 1) + &z(2, 0).pow(2)]).unwrap();
        assert_eq!(r, &(&z(2, 0) * &z(2, 1)) + &z(2, 0).pow(3));

        assert!(matches!(f.compose(&[z(2, 0)]), Err(Error::ArityMismatch { .. })));
        assert!(matches!(f.compose(&[z(2, 0), z(3, 0)]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn lipschitz_examples() {
        let unit = Polydisc::new(vec![g(0, 0)], vec![int(1)]).unwrap();
        assert_eq!(z(1, 0).pow(2).lipschitz_bound(&unit).unwrap(), int(2));
        assert_eq!(c(1, 7).lipschitz_bound(&unit).unwrap(), int(0));
        let bi = Polydisc::new(vec![g(0, 0), g(0, 0)], vec![int(1), int(1)]).unwrap();
        assert_eq!((&z(2, 0) * &z(2, 1)).lipschitz_bound(&bi).unwrap(), int(2));
    }

    #[test]
    fn sup_bounds() {
        let d = Polydisc::new(vec![g(1, 0)], vec![rat(1, 2)]).unwrap();
        let f = (&z(1, 0) - &c(1, 1)).pow(3);
        // origin-based bound sees |z| ≤ 3/2, centered bound sees |u| ≤ 1/2
        assert_eq!(f.centered_sup_bound(&d).unwrap(), rat(1, 8));
        assert!(f.sup_bound(&d).unwrap() > rat(1, 8));
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_up_to(2, 2).len(), 6);
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        let m = monomials_up_to(2, 1);
        assert_eq!(m[0].0, vec![0, 0]);
        assert_eq!(m[1].0, vec![1, 0]);
        assert_eq!(m[2].0, vec![0, 1]);
    }
}
