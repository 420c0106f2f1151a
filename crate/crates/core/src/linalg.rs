//! Dense exact matrices over the Gaussian rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::GaussianRational;

pub type Matrix = Vec<Vec<GaussianRational>>;

pub fn shape(a: &[Vec<GaussianRational>]) -> (usize, usize) {
    (a.len(), a.first().map_or(0, |r| r.len()))
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { GaussianRational::one() } else { GaussianRational::zero() }).collect())
        .collect()
}

/// Rank by fraction-free (Bareiss) elimination with column skipping.
/// Rows are first scaled to Gaussian-integer entries; every intermediate
/// entry is then a minor of that integer matrix, so divisions are exact.
pub fn rank(a: &[Vec<GaussianRational>]) -> usize {
    let (rows, cols) = shape(a);
    let mut m: Matrix = a
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()));
            let s = BigRational::from_integer(l);
            row.iter().map(|c| c.scale(&s)).collect()
        })
        .collect();
    let mut prev = GaussianRational::one();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in r + 1..rows {
            for j in col + 1..cols {
                let v = &(&m[r][col] * &m[i][j]) - &(&m[i][col] * &m[r][j]);
                m[i][j] = &v / &prev;
            }
            m[i][col] = GaussianRational::zero();
        }
        prev = m[r][col].clone();
        r += 1;
    }
    r
}

/// Inverse by Gauss–Jordan; `None` when singular.
pub fn inverse(a: &[Vec<GaussianRational>]) -> Option<Matrix> {
    let (n, c) = shape(a);
    if n != c {
        return None;
    }
    let mut m: Matrix = a.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let piv = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let p = m[col][col].inv()?;
        for j in 0..n {
            m[col][j] = &m[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in 0..n {
                let a = &f * &m[col][j];
                m[i][j] -= &a;
                let b = &f * &inv[col][j];
                inv[i][j] -= &b;
            }
        }
    }
    Some(inv)
}

pub fn mul(a: &[Vec<GaussianRational>], b: &[Vec<GaussianRational>]) -> Result<Matrix> {
    let (ar, ac) = shape(a);
    let (br, bc) = shape(b);
    // an empty `a` carries no column count
    if ar > 0 && ac != br {
        return Err(Error::DimensionMismatch { expected: ac, got: br });
    }
    Ok((0..ar)
        .map(|i| {
            (0..bc)
                .map(|j| (0..ac).fold(GaussianRational::zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect())
}

pub fn submatrix(a: &[Vec<GaussianRational>], rows: &[usize], cols: &[usize]) -> Matrix {
    rows.iter().map(|&i| cols.iter().map(|&j| a[i][j].clone()).collect()).collect()
}

pub fn is_zero(a: &[Vec<GaussianRational>]) -> bool {
    a.iter().all(|r| r.iter().all(|c| c.is_zero()))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| GaussianRational::from_i64(x)).collect()).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&m(&[&[1, 2], &[3, 4]])), 2);
        assert_eq!(rank(&m(&[&[2, 1], &[4, 2]])), 1);
        assert_eq!(rank(&m(&[&[0, 0, 0], &[0, 0, 0]])), 0);
        assert_eq!(rank(&m(&[&[0, 1, 2], &[0, 2, 4], &[1, 0, 0]])), 2);
        let i = GaussianRational::i();
        let g = vec![vec![GaussianRational::one(), i.clone()], vec![i.clone(), -GaussianRational::one()]];
        assert_eq!(rank(&g), 1);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mul(&a, &inv).unwrap(), identity(2));
        assert!(inverse(&m(&[&[2, 1], &[4, 2]])).is_none());
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }
}
