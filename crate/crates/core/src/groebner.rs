//! Buchberger Gröbner bases over the Gaussian rationals (grevlex) and the
//! dimension of affine varieties from leading-term ideals.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{GaussianRational, Monomial, MultiPoly};

/// A polynomial ideal with a lazily computed reduced Gröbner basis.
#[derive(Debug)]
pub struct Ideal {
    nvars: usize,
    generators: Vec<MultiPoly>,
    gb: OnceLock<Vec<MultiPoly>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(b) = self.gb.get() {
            let _ = gb.set(b.clone());
        }
        Self { nvars: self.nvars, generators: self.generators.clone(), gb }
    }
}

impl PartialEq for Ideal {
    /// Equality of ideals (same reduced basis), not of generator lists.
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.groebner_basis() == other.groebner_basis()
    }
}

impl Ideal {
    pub fn new(nvars: usize, generators: Vec<MultiPoly>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.nvars() != nvars) {
            return Err(Error::DimensionMismatch { expected: nvars, got: g.nvars() });
        }
        Ok(Self { nvars, generators, gb: OnceLock::new() })
    }

    pub fn unit(nvars: usize) -> Self {
        Self { nvars, generators: vec![MultiPoly::one(nvars)], gb: OnceLock::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    /// Reduced Gröbner basis (monic, sorted by increasing leading monomial).
    pub fn groebner_basis(&self) -> &[MultiPoly] {
        self.gb.get_or_init(|| buchberger(&self.generators))
    }

    /// `true` iff the ideal is the whole ring, i.e. `V(I) = ∅`.
    pub fn is_unit(&self) -> bool {
        self.groebner_basis().iter().any(|g| g.is_constant() && !g.is_zero())
    }

    /// Krull dimension of `V(I)`; `-1` for the empty variety.
    pub fn dimension(&self) -> i64 {
        ideal_dimension(self)
    }

    /// Normal form modulo the reduced basis; zero iff `f ∈ I`.
    pub fn reduce(&self, f: &MultiPoly) -> Result<MultiPoly> {
        if f.nvars() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, got: f.nvars() });
        }
        Ok(normal_form(f, self.groebner_basis()))
    }

    pub fn contains(&self, f: &MultiPoly) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    /// Generated by all pairwise products; `V(I·J) = V(I) ∪ V(J)`.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        ideal_product(self, other)
    }

    /// Monomials outside the leading-term ideal, or `None` when infinitely many.
    pub fn standard_monomials(&self) -> Option<Vec<Monomial>> {
        let gb = self.groebner_basis();
        if self.dimension() > 0 {
            return None;
        }
        let lms: Vec<&Monomial> = gb.iter().filter_map(|g| g.leading_monomial()).collect();
        // each variable has a pure power among the leading monomials for zero-dimensional ideals
        let bounds: Vec<u32> = (0..self.nvars)
            .map(|i| {
                lms.iter()
                    .filter(|m| m.support().all(|k| k == i))
                    .map(|m| m.0[i])
                    .min()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.nvars];
        loop {
            let m = Monomial(cur.clone());
            if !lms.iter().any(|l| l.divides(&m)) {
                out.push(m);
            }
            // odometer over the box Π [0, bound_i)
            let mut i = 0;
            loop {
                if i == self.nvars {
                    out.sort();
                    return Some(out);
                }
                cur[i] += 1;
                if cur[i] < bounds[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// Monic generator of `I ∩ ℂ[z_var]` for a zero-dimensional ideal, found as the
    /// first linear dependency among the normal forms of `1, z, z², …`.
    /// Returns `None` when the ideal is not zero-dimensional.
    pub fn univariate_eliminant(&self, var: usize) -> Result<Option<MultiPoly>> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange { index: var, len: self.nvars });
        }
        if self.is_unit() {
            return Ok(Some(MultiPoly::one(self.nvars)));
        }
        let Some(basis) = self.standard_monomials() else {
            return Ok(None);
        };
        let gb = self.groebner_basis();
        let z = MultiPoly::var(self.nvars, var);
        let coords = |p: &MultiPoly| -> Vec<GaussianRational> { basis.iter().map(|m| p.coeff(m)).collect() };
        // rows kept in echelon form together with the combination of powers producing them
        let mut echelon: Vec<(usize, Vec<GaussianRational>, Vec<GaussianRational>)> = Vec::new();
        let mut power = MultiPoly::one(self.nvars);
        for k in 0..=basis.len() {
            let nf = normal_form(&power, gb);
            let mut v = coords(&nf);
            let mut comb = vec![GaussianRational::zero(); k + 1];
            comb[k] = GaussianRational::one();
            for (pivot, row, rcomb) in &echelon {
                if v[*pivot].is_zero() {
                    continue;
                }
                let f = &v[*pivot] / &row[*pivot];
                for (a, b) in v.iter_mut().zip(row) {
                    *a -= &(&f * b);
                }
                for (a, b) in comb.iter_mut().zip(rcomb) {
                    *a -= &(&f * b);
                }
            }
            match v.iter().position(|c| !c.is_zero()) {
                Some(p) => echelon.push((p, v, comb)),
                None => {
                    let poly = MultiPoly::from_terms(
                        self.nvars,
                        comb.into_iter().enumerate().map(|(e, c)| {
                            let mut ex = vec![0u32; self.nvars];
                            ex[var] = e as u32;
                            (ex, c)
                        }),
                    );
                    return Ok(Some(poly.monic()));
                }
            }
            for (_, _, c) in echelon.iter_mut() {
                c.push(GaussianRational::zero());
            }
            power = &power * &z;
        }
        unreachable!("the powers of z are dependent in a quotient of dimension {}", basis.len())
    }
}

/// Greatest common divisor of Gaussian integers, normalized into the first quadrant.
fn gaussian_gcd(mut a: (BigInt, BigInt), mut b: (BigInt, BigInt)) -> (BigInt, BigInt) {
    let is_zero = |x: &(BigInt, BigInt)| x.0.is_zero() && x.1.is_zero();
    while !is_zero(&b) {
        // a mod b = a − round(a / b)·b with a/b = a·conj(b)/N(b)
        let nb = &b.0 * &b.0 + &b.1 * &b.1;
        let num_re = &a.0 * &b.0 + &a.1 * &b.1;
        let num_im = &a.1 * &b.0 - &a.0 * &b.1;
        let q = (round_div(&num_re, &nb), round_div(&num_im, &nb));
        let prod = (&q.0 * &b.0 - &q.1 * &b.1, &q.0 * &b.1 + &q.1 * &b.0);
        let r = (&a.0 - &prod.0, &a.1 - &prod.1);
        a = b;
        b = r;
    }
    normalize_unit(a)
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest integer to a/b for b > 0
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

/// Multiplies by a unit so that `re > 0, im ≥ 0` (or returns zero).
fn normalize_unit(mut a: (BigInt, BigInt)) -> (BigInt, BigInt) {
    for _ in 0..4 {
        if a.0.is_positive() && !a.1.is_negative() {
            return a;
        }
        a = (-a.1.clone(), a.0.clone()); // multiply by i
    }
    a
}

/// Scales `f` to Gaussian-integer coefficients with trivial content and a
/// leading coefficient in the first quadrant.
pub fn primitive_part(f: &MultiPoly) -> MultiPoly {
    if f.is_zero() {
        return f.clone();
    }
    let lcm = f.terms().values().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()));
    let lcm_r = BigRational::from_integer(lcm);
    let ints: Vec<(Monomial, (BigInt, BigInt))> = f
        .terms()
        .iter()
        .map(|(m, c)| (m.clone(), ((&c.re * &lcm_r).to_integer(), (&c.im * &lcm_r).to_integer())))
        .collect();
    let mut g = (BigInt::zero(), BigInt::zero());
    for (_, c) in &ints {
        g = gaussian_gcd(g, c.clone());
        if g.0.is_one() && g.1.is_zero() {
            break;
        }
    }
    let gq = GaussianRational::new(BigRational::from_integer(g.0), BigRational::from_integer(g.1));
    let inv = gq.inv().expect("nonzero content");
    let mut out = MultiPoly::zero(f.nvars());
    for (m, (re, im)) in ints {
        let c = GaussianRational::new(BigRational::from_integer(re), BigRational::from_integer(im));
        out.add_term(m, &(&c * &inv));
    }
    // unit normalization of the leading coefficient
    let lc = out.leading_coeff().unwrap().clone();
    let unit = [GaussianRational::one(), GaussianRational::i(), -GaussianRational::one(), -GaussianRational::i()]
        .into_iter()
        .find(|u| {
            let c = &lc * u;
            c.re.is_positive() && !c.im.is_negative()
        })
        .unwrap_or_else(GaussianRational::one);
    out.scale(&unit)
}

/// Fully reduces `f` modulo `basis` (any order of elements; first divisor wins).
/// Works fraction-free and returns the primitive part of the remainder, which
/// differs from the true normal form by a nonzero scalar.
fn reduce_fraction_free(f: &MultiPoly, basis: &[MultiPoly]) -> MultiPoly {
    let n = f.nvars();
    let mut p = f.clone();
    let mut r = MultiPoly::zero(n);
    while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        match basis.iter().find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(&m))) {
            Some(g) => {
                let (lm, lc) = g.leading_term().unwrap();
                let q = lm.quotient_of(&m);
                // p ← lc·p − c·x^q·g keeps Gaussian-integer coefficients
                p = &p.scale(lc) - &g.mul_term(&q, &c);
                r = r.scale(lc);
            }
            None => {
                r.add_term(m.clone(), &c);
                p.add_term(m, &-c);
            }
        }
    }
    primitive_part(&r)
}

/// Exact normal form of `f` modulo a monic Gröbner basis.
pub fn normal_form(f: &MultiPoly, basis: &[MultiPoly]) -> MultiPoly {
    let n = f.nvars();
    let mut p = f.clone();
    let mut r = MultiPoly::zero(n);
    while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        match basis.iter().find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(&m))) {
            Some(g) => {
                let (lm, lc) = g.leading_term().unwrap();
                let q = lm.quotient_of(&m);
                p = &p - &g.mul_term(&q, &(&c / lc));
            }
            None => {
                r.add_term(m.clone(), &c);
                p.add_term(m, &-c);
            }
        }
    }
    r
}

pub fn s_polynomial(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (fm, fc) = f.leading_term().expect("nonzero");
    let (gm, gc) = g.leading_term().expect("nonzero");
    let l = fm.lcm(gm);
    // gc·(l/fm)·f − fc·(l/gm)·g
    &f.mul_term(&fm.quotient_of(&l), gc) - &g.mul_term(&gm.quotient_of(&l), fc)
}

/// Reduced Gröbner basis of the ideal generated by `gens` (grevlex).
/// The result is monic and sorted by increasing leading monomial; `⟨0⟩` gives
/// the empty basis and the unit ideal gives `{1}`.
pub fn buchberger(gens: &[MultiPoly]) -> Vec<MultiPoly> {
    let Some(n) = gens.first().map(|g| g.nvars()) else {
        return Vec::new();
    };
    let mut basis: Vec<MultiPoly> = Vec::new();
    for g in gens {
        let r = reduce_fraction_free(g, &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return vec![MultiPoly::one(n)];
        }
        basis.push(r);
    }
    if basis.is_empty() {
        return Vec::new();
    }

    // pair queue keyed by (lcm degree, lcm, i, j) for a deterministic normal strategy
    let mut pairs: BTreeSet<(u32, Monomial, usize, usize)> = BTreeSet::new();
    let lm = |b: &[MultiPoly], i: usize| b[i].leading_monomial().unwrap().clone();
    for j in 0..basis.len() {
        for i in 0..j {
            let l = lm(&basis, i).lcm(&lm(&basis, j));
            pairs.insert((l.degree(), l, i, j));
        }
    }
    let in_queue = |pairs: &BTreeSet<(u32, Monomial, usize, usize)>, b: &[MultiPoly], i: usize, j: usize| {
        let (a, c) = if i < j { (i, j) } else { (j, i) };
        let l = b[a].leading_monomial().unwrap().lcm(b[c].leading_monomial().unwrap());
        pairs.contains(&(l.degree(), l, a, c))
    };

    while let Some(pair) = pairs.pop_first() {
        let (_, l, i, j) = pair;
        let (mi, mj) = (lm(&basis, i), lm(&basis, j));
        if mi.coprime(&mj) {
            continue;
        }
        // chain criterion
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lm(&basis, k).divides(&l)
                && !in_queue(&pairs, &basis, i, k)
                && !in_queue(&pairs, &basis, j, k)
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        let r = reduce_fraction_free(&s, &basis);
        if r.is_zero() {
            continue;
        }
        if r.is_constant() {
            return vec![MultiPoly::one(n)];
        }
        let new_idx = basis.len();
        let rm = r.leading_monomial().unwrap().clone();
        basis.push(r);
        for k in 0..new_idx {
            let l = lm(&basis, k).lcm(&rm);
            pairs.insert((l.degree(), l, k, new_idx));
        }
    }
    reduce_basis(basis)
}

/// Minimalizes, inter-reduces, makes monic and sorts a Gröbner basis.
fn reduce_basis(basis: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let m = g.leading_monomial().unwrap();
        let dominated = basis.iter().enumerate().any(|(k, h)| {
            let hm = h.leading_monomial().unwrap();
            k != idx && hm.divides(m) && (hm != m || k < idx)
        });
        if !dominated {
            minimal.push(g.monic());
        }
    }
    minimal.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<MultiPoly> =
            minimal.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, g)| g.clone()).collect();
        let (lm, lc) = minimal[i].leading_term().unwrap();
        let tail = &minimal[i] - &MultiPoly::monomial(minimal[i].nvars(), lm.clone(), lc.clone());
        let t = normal_form(&tail, &others);
        reduced.push(&MultiPoly::monomial(minimal[i].nvars(), lm.clone(), lc.clone()) + &t);
    }
    reduced
}

/// Largest `|U|` such that no leading monomial is supported inside `U`.
pub fn combinatorial_dimension(leading: &[Monomial], nvars: usize) -> i64 {
    if leading.iter().any(|m| m.is_one()) {
        return -1;
    }
    let supports: Vec<u32> = leading.iter().map(|m| m.support().fold(0u32, |acc, i| acc | (1 << i))).collect();
    let mut best = 0i64;
    for subset in 0u32..(1u32 << nvars) {
        let size = subset.count_ones() as i64;
        if size <= best {
            continue;
        }
        if supports.iter().all(|&s| s & !subset != 0) {
            best = size;
        }
    }
    best
}

/// Dimension of `V(I)` from the leading-term ideal of its reduced basis.
pub fn ideal_dimension(ideal: &Ideal) -> i64 {
    let gb = ideal.groebner_basis();
    let lms: Vec<Monomial> = gb.iter().filter_map(|g| g.leading_monomial().cloned()).collect();
    combinatorial_dimension(&lms, ideal.nvars())
}

pub fn ideal_product(a: &Ideal, b: &Ideal) -> Result<Ideal> {
    if a.nvars != b.nvars {
        return Err(Error::DimensionMismatch { expected: a.nvars, got: b.nvars });
    }
    let gens = a
        .generators
        .iter()
        .flat_map(|f| b.generators.iter().map(move |g| f * g))
        .filter(|p| !p.is_zero())
        .collect();
    Ideal::new(a.nvars, gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_parts(re, 1, im, 1)
    }

    #[test]
    fn basis_examples() {
        assert_eq!(buchberger(&[z(2, 0), z(2, 1)]), vec![z(2, 1), z(2, 0)]);
        let gb = buchberger(&[&z(2, 0) + &z(2, 1), &z(2, 0) - &z(2, 1)]);
        assert_eq!(gb, vec![z(2, 1), z(2, 0)]);
        assert_eq!(buchberger(&[MultiPoly::one(3)]), vec![MultiPoly::one(3)]);
        assert!(buchberger(&[MultiPoly::zero(2)]).is_empty());
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(Ideal::unit(2).dimension(), -1);
        assert_eq!(Ideal::new(2, vec![z(2, 0)]).unwrap().dimension(), 1);
        let i = Ideal::new(3, vec![&z(3, 0) * &z(3, 1), &z(3, 0) * &z(3, 2)]).unwrap();
        assert_eq!(i.dimension(), 2);
        assert_eq!(Ideal::new(3, vec![]).unwrap().dimension(), 3);
    }

    #[test]
    fn reduce_examples() {
        let i = Ideal::new(2, vec![z(2, 0)]).unwrap();
        assert!(i.reduce(&z(2, 0).pow(2)).unwrap().is_zero());
        assert_eq!(i.reduce(&z(2, 1)).unwrap(), z(2, 1));
        let f = &(&z(2, 0) * &z(2, 1)) + &z(2, 1).pow(2);
        assert_eq!(i.reduce(&f).unwrap(), z(2, 1).pow(2));
    }

    #[test]
    fn product_examples() {
        let a = Ideal::new(2, vec![z(2, 0)]).unwrap();
        let b = Ideal::new(2, vec![z(2, 1)]).unwrap();
        let p = a.product(&b).unwrap();
        assert_eq!(p.generators(), &[&z(2, 0) * &z(2, 1)]);
        assert_eq!(p.dimension(), 1);

        let j = Ideal::new(2, vec![&z(2, 0) - &MultiPoly::one(2), z(2, 1)]).unwrap();
        let uj = Ideal::unit(2).product(&j).unwrap();
        assert_eq!(uj, j);

        let a = Ideal::new(2, vec![z(2, 0), z(2, 1)]).unwrap();
        let p = a.product(&Ideal::new(2, vec![z(2, 0)]).unwrap()).unwrap();
        assert_eq!(p.generators(), &[z(2, 0).pow(2), &z(2, 1) * &z(2, 0)]);
        assert_eq!(p.dimension(), 1);
    }

    #[test]
    fn gaussian_coefficients() {
        // (z1 − i)(z1 + i) = z1² + 1 and z1 − i generate ⟨z1 − i⟩
        let a = &z(1, 0) - &MultiPoly::constant(1, g(0, 1));
        let b = &z(1, 0).pow(2) + &MultiPoly::one(1);
        let gb = buchberger(&[b, a.clone()]);
        assert_eq!(gb, vec![a]);
    }

    #[test]
    fn gaussian_gcd_basics() {
        let two = (BigInt::from(2), BigInt::zero());
        let one_plus_i = (BigInt::one(), BigInt::one());
        assert_eq!(gaussian_gcd(two, one_plus_i.clone()), one_plus_i);
        let p = primitive_part(&z(1, 0).scale(&g(6, 6)));
        assert_eq!(p, z(1, 0));
    }

    #[test]
    fn cyclic_three_dimension_zero() {
        let (a, b, c) = (z(3, 0), z(3, 1), z(3, 2));
        let gens = vec![
            &(&a + &b) + &c,
            &(&(&a * &b) + &(&b * &c)) + &(&c * &a),
            &(&(&a * &b) * &c) - &MultiPoly::one(3),
        ];
        let i = Ideal::new(3, gens.clone()).unwrap();
        assert_eq!(i.dimension(), 0);
        for f in &gens {
            assert!(i.contains(f).unwrap());
        }
        let basis = i.groebner_basis().to_vec();
        for x in 0..basis.len() {
            for y in 0..x {
                assert!(normal_form(&s_polynomial(&basis[x], &basis[y]), &basis).is_zero());
            }
        }
        assert_eq!(i.standard_monomials().unwrap().len(), 6);
    }

    #[test]
    fn eliminant_of_points() {
        // V = {(3/2, 0)}: eliminants z1 − 3/2 and z2
        let i = Ideal::new(2, vec![&z(2, 0) - &MultiPoly::constant(2, GaussianRational::from_parts(3, 2, 0, 1)), z(2, 1)])
            .unwrap();
        let e0 = i.univariate_eliminant(0).unwrap().unwrap();
        assert_eq!(e0, &z(2, 0) - &MultiPoly::constant(2, GaussianRational::from_parts(3, 2, 0, 1)));
        assert_eq!(i.univariate_eliminant(1).unwrap().unwrap(), z(2, 1));
        // a curve has no eliminant
        assert!(Ideal::new(2, vec![z(2, 0)]).unwrap().univariate_eliminant(1).unwrap().is_none());
        // ⟨z1², z1 z2, z2²⟩: eliminant z1²
        let i = Ideal::new(2, vec![z(2, 0).pow(2), &z(2, 0) * &z(2, 1), z(2, 1).pow(2)]).unwrap();
        assert_eq!(i.univariate_eliminant(0).unwrap().unwrap(), z(2, 0).pow(2));
    }
}
