//! Exact Gaussian-rational arithmetic, sparse polynomials and certified
//! nonvanishing on polydiscs.

pub mod certify;
pub mod gaussian;
pub mod poly;
pub mod polydisc;
pub mod polymap;

pub use certify::{
    certify_system_nonvanishing, certify_with, CertStatus, Certificate, CertifyOptions, NotCertifiedReason,
};
pub use gaussian::{fmt_rational, int, parse_rational, rat, GaussianRational};
pub use poly::{monomials_up_to, Monomial, MultiPoly};
pub use polydisc::Polydisc;
pub use polymap::PolyMap;
