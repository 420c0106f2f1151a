//! Jacobians, degeneracy loci `Σ_{f,r}` and matrix rank strata.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{certify_with, Certificate, CertifyOptions, GaussianRational, MultiPoly, PolyMap, Polydisc};
use crate::groebner::Ideal;
use crate::linalg::{self, Matrix};

/// The `p × n` matrix of partials `∂fᵢ/∂zⱼ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jacobian {
    n: usize,
    entries: Vec<Vec<MultiPoly>>,
}

impl Jacobian {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<MultiPoly>] {
        &self.entries
    }

    pub fn eval(&self, z: &[GaussianRational]) -> Result<Matrix> {
        self.entries.iter().map(|row| row.iter().map(|e| e.eval(z)).collect()).collect()
    }

    /// Determinant of the submatrix on the given rows and columns (Laplace expansion).
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> MultiPoly {
        det(&rows.iter().map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect()).collect::<Vec<_>>(), self.n)
    }
}

fn det(m: &[Vec<MultiPoly>], nvars: usize) -> MultiPoly {
    match m.len() {
        0 => MultiPoly::one(nvars),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        k => {
            let mut acc = MultiPoly::zero(nvars);
            for j in 0..k {
                if m[0][j].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<MultiPoly>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect()).collect();
                let term = &m[0][j] * &det(&sub, nvars);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

pub fn jacobian(f: &PolyMap) -> Jacobian {
    let entries = f
        .components()
        .iter()
        .map(|c| (0..f.n()).map(|j| c.diff(j).expect("index below n")).collect())
        .collect();
    Jacobian { n: f.n(), entries }
}

fn check_rank(r: usize, max: usize) -> Result<()> {
    if r == 0 || r > max {
        return Err(Error::RankOutOfRange { r, max });
    }
    Ok(())
}

/// All `r × r` minors in lexicographic order of (row subset, column subset),
/// including zeros and repeats.
pub fn jacobian_minors(f: &PolyMap, r: usize) -> Result<Vec<MultiPoly>> {
    check_rank(r, f.n().min(f.p()))?;
    let j = jacobian(f);
    let mut out = Vec::new();
    for rows in linalg::subsets(f.p(), r) {
        for cols in linalg::subsets(f.n(), r) {
            out.push(j.minor(&rows, &cols));
        }
    }
    Ok(out)
}

/// Drops zeros and generators that agree up to a scalar factor.
pub fn dedup_generators(gens: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let mut seen = BTreeSet::new();
    gens.into_iter()
        .filter(|g| !g.is_zero())
        .filter(|g| seen.insert(format!("{}", g.monic())))
        .collect()
}

/// The ideal of `r × r` Jacobian minors; its variety is `Σ_{f,r}`.
pub fn minors_ideal(f: &PolyMap, r: usize) -> Result<Ideal> {
    Ideal::new(f.n(), dedup_generators(jacobian_minors(f, r)?))
}

/// `d = (n−r+1)(p−r+1)`, the expected codimension of `Σ_{f,r}`.
pub fn expected_codim(n: usize, p: usize, r: usize) -> Result<usize> {
    check_rank(r, n.min(p))?;
    Ok((n - r + 1) * (p - r + 1))
}

/// Codimension `(n−r)(m−r)` of the rank-`r` matrices in `ℂ^{n×m}`.
pub fn stratum_codim(n: usize, m: usize, r: usize) -> Result<usize> {
    if r > n.min(m) {
        return Err(Error::RankOutOfRange { r, max: n.min(m) });
    }
    Ok((n - r) * (m - r))
}

/// First invertible `r × r` block in lexicographic (rows, cols) order.
pub fn find_pivot_block(a: &[Vec<GaussianRational>], r: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let (rows, cols) = linalg::shape(a);
    for rs in linalg::subsets(rows, r) {
        for cs in linalg::subsets(cols, r) {
            if linalg::rank(&linalg::submatrix(a, &rs, &cs)) == r {
                return Some((rs, cs));
            }
        }
    }
    None
}

/// Reorders rows and columns so the given block comes first.
pub fn permute_leading(a: &[Vec<GaussianRational>], rows: &[usize], cols: &[usize]) -> Matrix {
    let (nr, nc) = linalg::shape(a);
    let order = |lead: &[usize], len: usize| -> Vec<usize> {
        lead.iter().copied().chain((0..len).filter(|i| !lead.contains(i))).collect()
    };
    linalg::submatrix(a, &order(rows, nr), &order(cols, nc))
}

/// `E − D·B⁻¹·C` for `A = [[B, C], [D, E]]` with `B` the leading `r × r` block.
pub fn schur_residual(a: &[Vec<GaussianRational>], r: usize) -> Result<Matrix> {
    let (rows, cols) = linalg::shape(a);
    if r > rows.min(cols) {
        return Err(Error::RankOutOfRange { r, max: rows.min(cols) });
    }
    let lead: Vec<usize> = (0..r).collect();
    let rest_r: Vec<usize> = (r..rows).collect();
    let rest_c: Vec<usize> = (r..cols).collect();
    let b = linalg::submatrix(a, &lead, &lead);
    let binv = linalg::inverse(&b).ok_or(Error::SingularPivot(r))?;
    let c = linalg::submatrix(a, &lead, &rest_c);
    let d = linalg::submatrix(a, &rest_r, &lead);
    let e = linalg::submatrix(a, &rest_r, &rest_c);
    let dbc = linalg::mul(&linalg::mul(&d, &binv)?, &c)?;
    Ok(e.iter().zip(&dbc).map(|(er, xr)| er.iter().zip(xr).map(|(x, y)| x - y).collect()).collect())
}

/// Exact rank of `df_z`.
pub fn rank_at(f: &PolyMap, z: &[GaussianRational]) -> Result<usize> {
    if z.len() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: z.len() });
    }
    Ok(linalg::rank(&jacobian(f).eval(z)?))
}

/// Certifies `rank df_z ≥ r` on `region` by certified nonvanishing of the minors.
pub fn certify_rank_at_least(f: &PolyMap, r: usize, region: &Polydisc, max_depth: u32) -> Result<Certificate> {
    certify_rank_with(f, r, region, &CertifyOptions::with_depth(max_depth))
}

pub fn certify_rank_with(f: &PolyMap, r: usize, region: &Polydisc, opts: &CertifyOptions) -> Result<Certificate> {
    if region.dim() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: region.dim() });
    }
    let ideal = minors_ideal(f, r)?;
    if ideal.generators().is_empty() {
        // every minor vanishes identically
        return certify_with(&[MultiPoly::zero(f.n())], region, opts);
    }
    certify_with(ideal.generators(), region, opts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumReport {
    pub r: usize,
    pub generator_count: usize,
    pub sigma_dimension: i64,
    pub expected_dimension: i64,
}

pub fn stratum_report(f: &PolyMap, r: usize) -> Result<StratumReport> {
    let ideal = minors_ideal(f, r)?;
    let d = expected_codim(f.n(), f.p(), r)? as i64;
    Ok(StratumReport {
        r,
        generator_count: ideal.generators().len(),
        sigma_dimension: ideal.dimension(),
        expected_dimension: (f.n() as i64 - d).max(-1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use num_traits::One;

    fn z(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn gm(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| GaussianRational::from_i64(x)).collect()).collect()
    }

    fn squares() -> PolyMap {
        PolyMap::new(2, vec![z(2, 0).pow(2), z(2, 1).pow(2)]).unwrap()
    }

    #[test]
    fn jacobian_examples() {
        let j = jacobian(&PolyMap::identity(2));
        assert_eq!(j.entry(0, 0), &MultiPoly::one(2));
        assert!(j.entry(0, 1).is_zero());
        let j = jacobian(&PolyMap::new(2, vec![&z(2, 0) * &z(2, 1)]).unwrap());
        assert_eq!(j.entries(), &[vec![z(2, 1), z(2, 0)]]);
        let j = jacobian(&PolyMap::new(2, vec![MultiPoly::one(2)]).unwrap());
        assert!(j.entries()[0].iter().all(|e| e.is_zero()));
    }

    #[test]
    fn minors_examples() {
        let i = minors_ideal(&squares(), 2).unwrap();
        let four = GaussianRational::from_i64(4);
        assert_eq!(i.generators(), &[(&z(2, 0) * &z(2, 1)).scale(&four)]);
        assert_eq!(i.dimension(), 1);

        assert_eq!(minors_ideal(&PolyMap::identity(2), 2).unwrap().dimension(), -1);

        let f = PolyMap::new(2, vec![z(2, 0).pow(2), z(2, 1).pow(2), &z(2, 0).pow(2) + &z(2, 1).pow(2)]).unwrap();
        let raw = jacobian_minors(&f, 2).unwrap();
        let zz = (&z(2, 0) * &z(2, 1)).scale(&four);
        assert_eq!(raw, vec![zz.clone(), zz.clone(), -zz]);
        assert_eq!(minors_ideal(&f, 2).unwrap().dimension(), 1);
        assert!(minors_ideal(&f, 3).is_err());
    }

    #[test]
    fn codims() {
        assert_eq!(expected_codim(2, 3, 2).unwrap(), 2);
        assert_eq!(expected_codim(1, 1, 1).unwrap(), 1);
        assert_eq!(expected_codim(3, 2, 2).unwrap(), 2);
        assert!(expected_codim(2, 2, 0).is_err());
        assert_eq!(stratum_codim(2, 2, 1).unwrap(), 1);
        assert_eq!(stratum_codim(3, 4, 0).unwrap(), 12);
        assert_eq!(stratum_codim(2, 3, 2).unwrap(), 0);
    }

    #[test]
    fn schur_examples() {
        assert_eq!(schur_residual(&gm(&[&[1, 0], &[0, 0]]), 1).unwrap(), gm(&[&[0]]));
        assert_eq!(schur_residual(&gm(&[&[1, 2], &[3, 4]]), 1).unwrap(), gm(&[&[-2]]));
        assert_eq!(schur_residual(&gm(&[&[2, 1], &[4, 2]]), 1).unwrap(), gm(&[&[0]]));
        assert_eq!(schur_residual(&gm(&[&[0, 1], &[1, 0]]), 1), Err(Error::SingularPivot(1)));
        // full row rank: the residual is empty, hence zero
        assert!(linalg::is_zero(&schur_residual(&gm(&[&[1, 2, 3]]), 1).unwrap()));
        let a = gm(&[&[0, 1], &[1, 0]]);
        let (rs, cs) = find_pivot_block(&a, 1).unwrap();
        assert_eq!((rs.clone(), cs.clone()), (vec![0], vec![1]));
        let p = permute_leading(&a, &rs, &cs);
        assert_eq!(schur_residual(&p, 1).unwrap(), gm(&[&[1]]));
    }

    #[test]
    fn rank_examples() {
        let one = GaussianRational::one();
        let zero = GaussianRational::from_i64(0);
        assert_eq!(rank_at(&PolyMap::identity(3), &[one.clone(), zero.clone(), one.clone()]).unwrap(), 3);
        assert_eq!(rank_at(&squares(), &[one.clone(), one.clone()]).unwrap(), 2);
        assert_eq!(rank_at(&squares(), &[zero, one]).unwrap(), 1);
    }

    #[test]
    fn certify_rank_examples() {
        let one = GaussianRational::one();
        let near = Polydisc::uniform(vec![one.clone(), one], rat(1, 4)).unwrap();
        assert!(certify_rank_at_least(&squares(), 2, &near, 8).unwrap().is_certified());
        let origin = Polydisc::centered(2, rat(1, 1)).unwrap();
        assert!(!certify_rank_at_least(&squares(), 2, &origin, 4).unwrap().is_certified());
        assert!(certify_rank_at_least(&PolyMap::identity(2), 2, &origin, 1).unwrap().is_certified());
    }

    #[test]
    fn report() {
        let r = stratum_report(&squares(), 2).unwrap();
        assert_eq!(r, StratumReport { r: 2, generator_count: 1, sigma_dimension: 1, expected_dimension: 1 });
    }
}
