//! Jets of polynomial maps and the linearization of jet families.
//!
//! Multi-indices are ordered by total degree, then lexicographically with the
//! first variable descending (the order of [`monomials_up_to`]). Fiber
//! coordinates of `J^k(ℂⁿ, ℂᵖ)` are indexed by `(α, i)` in that order with the
//! component index varying fastest.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{monomials_up_to, GaussianRational, Monomial, MultiPoly, PolyMap};
use crate::linalg::{self, Matrix};

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k.min(n));
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `n + p·C(n+k, n)`: base point, value and all derivatives up to order `k`.
pub fn jet_dimension(n: usize, p: usize, k: usize) -> usize {
    n + p * binomial(n + k, n)
}

/// A `k`-jet at `base`: the raw partial derivatives `∂^α f(base)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    pub k: u32,
    pub base: Vec<GaussianRational>,
    pub coefficients: Vec<(Monomial, Vec<GaussianRational>)>,
}

impl Jet {
    pub fn value(&self) -> &[GaussianRational] {
        &self.coefficients[0].1
    }

    pub fn coefficient(&self, alpha: &[u32]) -> Option<&[GaussianRational]> {
        self.coefficients.iter().find(|(a, _)| a.0 == alpha).map(|(_, v)| v.as_slice())
    }

    /// Fiber coordinates flattened in `(α, i)` order.
    pub fn fiber(&self) -> Vec<GaussianRational> {
        self.coefficients.iter().flat_map(|(_, v)| v.iter().cloned()).collect()
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        if self.k != other.k || self.base != other.base || self.coefficients.len() != other.coefficients.len() {
            return Err(Error::InvalidInput("jets at different points or orders".into()));
        }
        let coefficients = self
            .coefficients
            .iter()
            .zip(&other.coefficients)
            .map(|((a, u), (_, v))| (a.clone(), u.iter().zip(v).map(|(x, y)| x + y).collect()))
            .collect();
        Ok(Jet { k: self.k, base: self.base.clone(), coefficients })
    }
}

pub fn prolong(f: &PolyMap, k: u32, x: &[GaussianRational]) -> Result<Jet> {
    if x.len() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: x.len() });
    }
    let coefficients = monomials_up_to(f.n(), k)
        .into_iter()
        .map(|alpha| {
            let v = f
                .components()
                .iter()
                .map(|c| c.diff_multi(&alpha.0)?.eval(x))
                .collect::<Result<Vec<_>>>()?;
            Ok((alpha, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Jet { k, base: x.to_vec(), coefficients })
}

/// A polynomial family `F(x, t)` on `ℂⁿ × ℂᴺ` with `F(x, 0) = f(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetFamily {
    base_map: PolyMap,
    parameter_dim: usize,
    rule: PolyMap,
}

impl JetFamily {
    pub fn new(base_map: PolyMap, parameter_dim: usize, rule: PolyMap) -> Result<Self> {
        let n = base_map.n();
        if rule.n() != n + parameter_dim {
            return Err(Error::DimensionMismatch { expected: n + parameter_dim, got: rule.n() });
        }
        if rule.p() != base_map.p() {
            return Err(Error::DimensionMismatch { expected: base_map.p(), got: rule.p() });
        }
        let fam = Self { base_map, parameter_dim, rule };
        let at_zero = fam.restrict_to_zero(fam.rule.components())?;
        if at_zero != fam.base_map.components() {
            return Err(Error::InvalidInput("F(x, 0) differs from f".into()));
        }
        Ok(fam)
    }

    /// The translation family `F(x, t) = f(x) + t` with `N = p`.
    pub fn translation(f: &PolyMap) -> Self {
        let m = linalg::identity(f.p());
        Self::linear(f, &m).expect("square identity")
    }

    /// `F(x, t) = f(x) + M·t` for a constant `p × N` matrix `M`.
    pub fn linear(f: &PolyMap, m: &[Vec<GaussianRational>]) -> Result<Self> {
        let (rows, big_n) = linalg::shape(m);
        if rows != f.p() {
            return Err(Error::DimensionMismatch { expected: f.p(), got: rows });
        }
        let n = f.n();
        let embed: Vec<usize> = (0..n).collect();
        let components = f
            .components()
            .iter()
            .zip(m)
            .map(|(c, row)| {
                let mut g = c.relabel(n + big_n, &embed);
                for (j, a) in row.iter().enumerate() {
                    g = &g + &MultiPoly::var(n + big_n, n + j).scale(a);
                }
                g
            })
            .collect();
        Self::new(f.clone(), big_n, PolyMap::new(n + big_n, components)?)
    }

    pub fn base_map(&self) -> &PolyMap {
        &self.base_map
    }

    pub fn parameter_dim(&self) -> usize {
        self.parameter_dim
    }

    pub fn rule(&self) -> &PolyMap {
        &self.rule
    }

    fn restrict_to_zero(&self, polys: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
        let n = self.base_map.n();
        let map: Vec<usize> = (0..n + self.parameter_dim).map(|i| if i < n { i } else { 0 }).collect();
        polys
            .iter()
            .map(|c| {
                let mut g = c.clone();
                for j in 0..self.parameter_dim {
                    g = g.substitute(n + j, &GaussianRational::zero())?;
                }
                Ok(g.relabel(n, &map))
            })
            .collect()
    }

    /// `∂F_i/∂t_j (x, 0)` as polynomials in `x`, indexed `[i][j]`.
    pub fn parameter_derivative(&self) -> Result<Vec<Vec<MultiPoly>>> {
        let n = self.base_map.n();
        self.rule
            .components()
            .iter()
            .map(|c| {
                let d = (0..self.parameter_dim).map(|j| c.diff(n + j)).collect::<Result<Vec<_>>>()?;
                self.restrict_to_zero(&d)
            })
            .collect()
    }
}

/// Derivative at `P = 0` of `P ↦ j^k_{x0}(F_P)`, `F_P(x) = F(x, P(x))`, over
/// the space of polynomial maps `ℂⁿ → ℂᴺ` of degree ≤ k.
///
/// Rows are fiber coordinates `(α, i)`; columns are the basis maps
/// `(x − x0)^β e_j` ordered `(β, j)`. Entry `= ∂^α[∂_{t_j}F_i(x,0)·(x − x0)^β](x0)`.
pub fn family_jet_linearization(fam: &JetFamily, k: u32, x0: &[GaussianRational]) -> Result<Matrix> {
    let n = fam.base_map.n();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x0.len() });
    }
    let dt = fam.parameter_derivative()?;
    let multi = monomials_up_to(n, k);
    let shifted: Vec<MultiPoly> = multi
        .iter()
        .map(|beta| {
            let factors: Vec<MultiPoly> = (0..n)
                .map(|v| &MultiPoly::var(n, v) - &MultiPoly::constant(n, x0[v].clone()))
                .collect();
            MultiPoly::monomial(n, beta.clone(), GaussianRational::one()).compose(&factors)
        })
        .collect::<Result<_>>()?;
    let p = fam.base_map.p();
    let big_n = fam.parameter_dim;
    let mut out = Vec::with_capacity(multi.len() * p);
    for alpha in &multi {
        for row_i in dt.iter().take(p) {
            let mut row = Vec::with_capacity(multi.len() * big_n);
            for basis in &shifted {
                for g in row_i.iter().take(big_n) {
                    row.push((g * basis).diff_multi(&alpha.0)?.eval(x0)?);
                }
            }
            out.push(row);
        }
    }
    Ok(out)
}

/// Outcome of [`verify_submersion`] with the block-triangular structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmersionWitness {
    pub submersion: bool,
    pub rank: usize,
    pub required_rank: usize,
    pub lower_triangular: bool,
    /// Diagonal blocks `(α, β = α)`; each equals `α!·∂_t F(x0, 0)`.
    pub diagonal_blocks: Vec<(Monomial, Matrix)>,
}

fn factorial_multi(alpha: &Monomial) -> BigInt {
    alpha.0.iter().fold(BigInt::one(), |acc, &a| (1..=a).fold(acc, |x, y| x * BigInt::from(y)))
}

/// Whether every entry coupling a basis level `|β|` to a lower jet level `|α| < |β|` vanishes.
pub fn is_block_lower_triangular(m: &[Vec<GaussianRational>], n: usize, p: usize, big_n: usize, k: u32) -> bool {
    let multi = monomials_up_to(n, k);
    multi.iter().enumerate().all(|(ai, alpha)| {
        multi.iter().enumerate().filter(|(_, beta)| beta.degree() > alpha.degree()).all(|(bi, _)| {
            (0..p).all(|i| (0..big_n).all(|j| m[ai * p + i][bi * big_n + j].is_zero()))
        })
    })
}

pub fn verify_submersion(fam: &JetFamily, k: u32, x0: &[GaussianRational]) -> Result<SubmersionWitness> {
    let m = family_jet_linearization(fam, k, x0)?;
    let n = fam.base_map.n();
    let p = fam.base_map.p();
    let big_n = fam.parameter_dim;
    let multi = monomials_up_to(n, k);
    let required_rank = p * multi.len();
    let rank = linalg::rank(&m);
    let diagonal_blocks = multi
        .iter()
        .enumerate()
        .map(|(ai, alpha)| {
            let rows: Vec<usize> = (0..p).map(|i| ai * p + i).collect();
            let cols: Vec<usize> = (0..big_n).map(|j| ai * big_n + j).collect();
            (alpha.clone(), linalg::submatrix(&m, &rows, &cols))
        })
        .collect();
    Ok(SubmersionWitness {
        submersion: rank == required_rank,
        rank,
        required_rank,
        lower_triangular: is_block_lower_triangular(&m, n, p, big_n, k),
        diagonal_blocks,
    })
}

/// Checks that each diagonal block is `α!` times `∂_t F(x0, 0)`.
pub fn diagonal_blocks_match(fam: &JetFamily, w: &SubmersionWitness, x0: &[GaussianRational]) -> Result<bool> {
    let dt = fam.parameter_derivative()?;
    let at: Matrix = dt.iter().map(|row| row.iter().map(|g| g.eval(x0)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    Ok(w.diagonal_blocks.iter().all(|(alpha, block)| {
        let f = GaussianRational::real(num_rational::BigRational::from_integer(factorial_multi(alpha)));
        block.iter().zip(&at).all(|(br, ar)| br.iter().zip(ar).all(|(b, a)| *b == &f * a))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: i64) -> GaussianRational {
        GaussianRational::from_i64(x)
    }

    fn z(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn dimensions() {
        assert_eq!(jet_dimension(1, 1, 1), 3);
        assert_eq!(jet_dimension(2, 3, 1), 11);
        assert_eq!(jet_dimension(2, 1, 2), 8);
    }

    #[test]
    fn prolong_examples() {
        let f = PolyMap::new(2, vec![&z(2, 0) * &z(2, 1)]).unwrap();
        let j = prolong(&f, 1, &[g(1), g(2)]).unwrap();
        assert_eq!(j.value(), &[g(2)]);
        assert_eq!(j.coefficient(&[1, 0]).unwrap(), &[g(2)]);
        assert_eq!(j.coefficient(&[0, 1]).unwrap(), &[g(1)]);

        let j = prolong(&PolyMap::identity(2), 1, &[g(5), g(-3)]).unwrap();
        assert_eq!(j.value(), &[g(5), g(-3)]);
        assert_eq!(j.coefficient(&[1, 0]).unwrap(), &[g(1), g(0)]);
        assert_eq!(j.coefficient(&[0, 1]).unwrap(), &[g(0), g(1)]);

        let f = PolyMap::new(1, vec![z(1, 0).pow(2)]).unwrap();
        let j = prolong(&f, 2, &[g(3)]).unwrap();
        assert_eq!(j.fiber(), vec![g(9), g(6), g(2)]);
    }

    #[test]
    fn linearization_examples() {
        let f = PolyMap::new(2, vec![z(2, 0).pow(3), &z(2, 0) * &z(2, 1)]).unwrap();
        let fam = JetFamily::translation(&f);
        assert_eq!(family_jet_linearization(&fam, 0, &[g(1), g(1)]).unwrap(), linalg::identity(2));

        let f1 = PolyMap::new(1, vec![z(1, 0).pow(2)]).unwrap();
        let m = family_jet_linearization(&JetFamily::translation(&f1), 1, &[g(4)]).unwrap();
        assert_eq!(m, linalg::identity(2));

        let sing = vec![vec![g(1), g(2)], vec![g(2), g(4)]];
        let fam = JetFamily::linear(&f, &sing).unwrap();
        assert_eq!(family_jet_linearization(&fam, 0, &[g(0), g(0)]).unwrap(), sing);
    }

    #[test]
    fn submersion_examples() {
        let f = PolyMap::new(2, vec![z(2, 0).pow(2), &z(2, 1) * &z(2, 0)]).unwrap();
        for k in 0..=2 {
            let fam = JetFamily::translation(&f);
            let w = verify_submersion(&fam, k, &[g(2), g(-1)]).unwrap();
            assert!(w.submersion && w.lower_triangular);
            assert!(diagonal_blocks_match(&fam, &w, &[g(2), g(-1)]).unwrap());
        }
        let constant = JetFamily::linear(&f, &[vec![g(0)], vec![g(0)]]).unwrap();
        assert!(!verify_submersion(&constant, 1, &[g(0), g(0)]).unwrap().submersion);
        let sing = JetFamily::linear(&f, &[vec![g(1), g(2)], vec![g(2), g(4)]]).unwrap();
        assert!(!verify_submersion(&sing, 1, &[g(0), g(0)]).unwrap().submersion);
    }

    #[test]
    fn nonconstant_parameter_derivative_stays_triangular() {
        // F(x, t) = x² + t·(1 + x): off-diagonal couplings appear only below the diagonal
        let f = PolyMap::new(1, vec![z(1, 0).pow(2)]).unwrap();
        let rule = PolyMap::new(2, vec![&z(2, 0).pow(2) + &(&z(2, 1) * &(&MultiPoly::one(2) + &z(2, 0)))]).unwrap();
        let fam = JetFamily::new(f, 1, rule).unwrap();
        let w = verify_submersion(&fam, 2, &[g(1)]).unwrap();
        let m = family_jet_linearization(&fam, 2, &[g(1)]).unwrap();
        assert!(w.lower_triangular && w.submersion);
        assert!(!m[1][0].is_zero());
        assert!(diagonal_blocks_match(&fam, &w, &[g(1)]).unwrap());
    }

    #[test]
    fn rejects_inconsistent_family() {
        let f = PolyMap::new(1, vec![z(1, 0)]).unwrap();
        let rule = PolyMap::new(2, vec![&z(2, 0) + &MultiPoly::one(2)]).unwrap();
        assert!(JetFamily::new(f, 1, rule).is_err());
    }
}
