use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gaussian::GaussianRational;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Product of closed discs `|z_i − c_i| ≤ ρ_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polydisc {
    center: Vec<GaussianRational>,
    radii: Vec<BigRational>,
}

impl Polydisc {
    pub fn new(center: Vec<GaussianRational>, radii: Vec<BigRational>) -> Result<Self> {
        if center.len() != radii.len() {
            return Err(Error::DimensionMismatch { expected: center.len(), got: radii.len() });
        }
        if center.is_empty() {
            return Err(Error::InvalidInput("polydisc must have at least one coordinate".into()));
        }
        if let Some(r) = radii.iter().find(|r| !r.is_positive()) {
            return Err(Error::InvalidInput(format!("polydisc radius must be positive, got {}", r)));
        }
        Ok(Self { center, radii })
    }

    /// Equal radius `radius` in every coordinate around `center`.
    pub fn uniform(center: Vec<GaussianRational>, radius: BigRational) -> Result<Self> {
        let n = center.len();
        Self::new(center, vec![radius; n])
    }

    /// Equal radius around the origin of `ℂⁿ`.
    pub fn centered(n: usize, radius: BigRational) -> Result<Self> {
        Self::uniform(vec![GaussianRational::zero(); n], radius)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[GaussianRational] {
        &self.center
    }

    pub fn radii(&self) -> &[BigRational] {
        &self.radii
    }

    /// `|Re c_i| + |Im c_i| + ρ_i`, an upper bound for `|z_i|` on the polydisc.
    pub fn coordinate_extents(&self) -> Vec<BigRational> {
        self.center.iter().zip(&self.radii).map(|(c, r)| c.l1_norm() + r).collect()
    }

    /// `max_i (|Re c_i| + |Im c_i| + ρ_i)`.
    pub fn r_hat(&self) -> BigRational {
        self.coordinate_extents().into_iter().max().expect("nonempty polydisc")
    }

    pub fn contains_point(&self, z: &[GaussianRational]) -> bool {
        z.len() == self.dim()
            && z.iter().zip(&self.center).zip(&self.radii).all(|((x, c), r)| (x - c).norm_sqr() <= r * r)
    }

    /// Exact disc inclusion test per coordinate: `|c_i − c'_i| ≤ ρ_i − ρ'_i`.
    pub fn contains(&self, inner: &Polydisc) -> bool {
        inner.dim() == self.dim()
            && (0..self.dim()).all(|i| {
                let slack = &self.radii[i] - &inner.radii[i];
                !slack.is_negative() && (&self.center[i] - &inner.center[i]).norm_sqr() <= &slack * &slack
            })
    }

    /// Adds `delta` to every radius.
    pub fn inflate(&self, delta: &BigRational) -> Polydisc {
        Polydisc { center: self.center.clone(), radii: self.radii.iter().map(|r| r + delta).collect() }
    }

    /// Inflates a single coordinate.
    pub fn inflate_coordinate(&self, i: usize, delta: &BigRational) -> Polydisc {
        let mut out = self.clone();
        out.radii[i] += delta;
        out
    }

    /// Linear interpolation of centers and radii; `t = 0` gives `self`, `t = 1` gives `other`.
    /// For `self ⊂ other` the family is nested increasing in `t`.
    pub fn interpolate(&self, other: &Polydisc, t: &BigRational) -> Result<Polydisc> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        let s = BigRational::one() - t;
        let center = self
            .center
            .iter()
            .zip(&other.center)
            .map(|(a, b)| &a.scale(&s) + &b.scale(t))
            .collect();
        let radii = self.radii.iter().zip(&other.radii).map(|(a, b)| a * &s + b * t).collect();
        Polydisc::new(center, radii)
    }

    /// A seeded rational point of the polydisc (rejection sampling on a dyadic grid).
    pub fn sample_point(&self, rng: &mut SplitMix64) -> Vec<GaussianRational> {
        const GRID: i64 = 1 << 12;
        self.center
            .iter()
            .zip(&self.radii)
            .map(|(c, r)| loop {
                let x = rng.range_i64(-GRID, GRID);
                let y = rng.range_i64(-GRID, GRID);
                if x * x + y * y <= GRID * GRID {
                    let scale = r / BigRational::from_integer(GRID.into());
                    let off = GaussianRational::new(
                        BigRational::from_integer(x.into()) * &scale,
                        BigRational::from_integer(y.into()) * &scale,
                    );
                    break c + &off;
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::gaussian::{int, rat};

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_parts(re, 1, im, 1)
    }

    #[test]
    fn rejects_bad_radii() {
        assert!(Polydisc::new(vec![g(0, 0)], vec![int(0)]).is_err());
        assert!(Polydisc::new(vec![g(0, 0)], vec![int(-1)]).is_err());
        assert!(Polydisc::new(vec![g(0, 0)], vec![int(1), int(1)]).is_err());
    }

    #[test]
    fn nesting_and_interpolation() {
        let k = Polydisc::uniform(vec![g(1, 0), g(1, 0)], rat(1, 2)).unwrap();
        let q = Polydisc::centered(2, int(2)).unwrap();
        assert!(q.contains(&k));
        assert!(!k.contains(&q));
        let mut prev = k.clone();
        for j in 1..=4 {
            let cur = k.interpolate(&q, &rat(j, 4)).unwrap();
            assert!(cur.contains(&prev));
            assert!(q.contains(&cur));
            prev = cur;
        }
        assert_eq!(prev, q);
    }

    #[test]
    fn samples_stay_inside() {
        let d = Polydisc::new(vec![g(1, -1), g(0, 3)], vec![rat(1, 3), int(2)]).unwrap();
        let mut rng = SplitMix64::new(11);
        for _ in 0..200 {
            let p = d.sample_point(&mut rng);
            assert!(d.contains_point(&p));
        }
    }

    #[test]
    fn r_hat_uses_l1_center() {
        let d = Polydisc::new(vec![g(1, -2), g(0, 0)], vec![int(1), int(5)]).unwrap();
        assert_eq!(d.r_hat(), int(5));
        assert_eq!(d.coordinate_extents(), vec![int(4), int(5)]);
    }
}
