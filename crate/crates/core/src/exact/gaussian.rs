//! Exact complex scalars `a + b·i` with arbitrary-precision rational parts.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A Gaussian rational. Both parts are kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl GaussianRational {
    /// Nearest double-precision value; only for heuristics, never for decisions.
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::real(int(n))
    }

    /// `n/d + (in/id)·i` from machine integers.
    pub fn from_parts(n: i64, d: i64, in_: i64, id: i64) -> Self {
        Self::new(rat(n, d), rat(in_, id))
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// |z|², exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `|Re| + |Im|`, an upper bound for the modulus.
    pub fn l1_norm(&self) -> BigRational {
        self.re.abs() + self.im.abs()
    }

    /// `max(|Re|, |Im|)`, a lower bound for the modulus.
    pub fn linf_norm(&self) -> BigRational {
        let a = self.re.abs();
        let b = self.im.abs();
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
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

    /// Least common multiple of the two denominators.
    pub fn denom_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_i64(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: &'a GaussianRational) -> GaussianRational {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                self.$m(&rhs)
            }
        }
    };
}

impl<'a, 'b> Add<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &'b GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a, 'b> Sub<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &'b GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a, 'b> Mul<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'b GaussianRational) -> GaussianRational {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussianRational::real(&self.re * &rhs.re);
        }
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

/// Division panics on a zero divisor, like `BigRational`.
impl<'a, 'b> Div<&'b GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &'b GaussianRational) -> GaussianRational {
        let inv = rhs.inv().expect("division by zero Gaussian rational");
        self * &inv
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl<'a> Neg for &'a GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl<'a> AddAssign<&'a GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &'a GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> SubAssign<&'a GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &'a GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a> MulAssign<&'a GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &'a GaussianRational) {
        *self = &*self * rhs;
    }
}

/// Rational as `a` or `a/b`.
pub fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `a` or `a/b` with a nonzero denominator.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Report form: `"a/b+c/d i"`, or a bare rational when the imaginary part is zero.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", fmt_rational(&self.re))
        } else {
            write!(f, "{}+{} i", fmt_rational(&self.re), fmt_rational(&self.im))
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Accepts `a/b`, `a/b+c/d i`, `a/b-c/d i`, `a/b+c/di` and the parenthesized
/// map-file form `(a/b+c/di)`.
impl FromStr for GaussianRational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(&t);
        let bad = || format!("malformed Gaussian rational {:?}", s);
        let Some(body) = t.strip_suffix('i') else {
            return parse_rational(t).map(Self::real).ok_or_else(bad);
        };
        // split at the sign separating the real and imaginary parts
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'+' && bytes[k - 1] != b'-');
        match split {
            Some(k) => {
                let re = parse_rational(&body[..k]).ok_or_else(bad)?;
                let im_str = &body[k..];
                let im_str = im_str.strip_prefix('+').unwrap_or(im_str);
                let im = parse_rational(im_str).ok_or_else(bad)?;
                Ok(Self::new(re, im))
            }
            None => {
                let im = parse_rational(body).ok_or_else(bad)?;
                Ok(Self::new(BigRational::zero(), im))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::from_parts(a, 1, b, 1)
    }

    #[test]
    fn product_of_conjugates_is_real() {
        let z = g(1, 1) * g(1, -1);
        assert_eq!(z, g(2, 0));
    }

    #[test]
    fn lowest_terms() {
        let z = GaussianRational::from_parts(2, 4, -6, -8);
        assert_eq!(z.re, rat(1, 2));
        assert_eq!(z.im, rat(3, 4));
        assert!(z.re.denom() > &BigInt::zero());
    }

    #[test]
    fn inverse_and_division() {
        let z = g(3, 4);
        let w = z.inv().unwrap();
        assert_eq!(&z * &w, GaussianRational::one());
        assert!(GaussianRational::zero().inv().is_none());
        assert_eq!(g(2, 2) / g(1, 1), g(2, 0));
    }

    #[test]
    fn modulus_surrogates_bracket() {
        let z = g(3, -4);
        assert_eq!(z.l1_norm(), int(7));
        assert_eq!(z.linf_norm(), int(4));
        assert_eq!(z.norm_sqr(), int(25));
    }

    #[test]
    fn parse_forms() {
        let cases = [
            ("(1/2+0/1i)", GaussianRational::from_parts(1, 2, 0, 1)),
            ("(0/1+1/1i)", GaussianRational::i()),
            ("3", g(3, 0)),
            ("-3/4", GaussianRational::from_parts(-3, 4, 0, 1)),
            ("1/2+-3/4 i", GaussianRational::from_parts(1, 2, -3, 4)),
            ("1/2-3/4i", GaussianRational::from_parts(1, 2, -3, 4)),
            ("-1/2-3/4i", GaussianRational::from_parts(-1, 2, -3, 4)),
        ];
        for (s, want) in cases {
            assert_eq!(s.parse::<GaussianRational>().unwrap(), want, "{s}");
        }
        assert!("1/0".parse::<GaussianRational>().is_err());
        assert!("(x)".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for z in [g(0, 0), GaussianRational::from_parts(-7, 3, 5, -9), GaussianRational::i()] {
            assert_eq!(z.to_string().parse::<GaussianRational>().unwrap(), z);
        }
        assert_eq!(GaussianRational::zero().to_string(), "0");
    }

    #[test]
    fn pow_matches_repeated_product() {
        let z = GaussianRational::from_parts(1, 2, 1, 3);
        let mut acc = GaussianRational::one();
        for e in 0..7 {
            assert_eq!(z.pow(e), acc);
            acc = &acc * &z;
        }
    }
}
