//! Exact Lie-theoretic data and blowup solution families for Toda systems
//! with singular sources.

pub mod error;
pub mod kostant;
pub mod lie;
pub mod linalg;
pub mod mass;
mod precise;
pub mod quadrature;
pub mod rep;
pub mod scalar;
pub mod solution;
pub mod weyl;

pub use error::{Error, Result};
pub use lie::{CartanData, Coweight, Family, GammaVector, LieType, Weight};
pub use linalg::Matrix;
pub use rep::{build_fundamental, weyl_dim, FundamentalRep};
pub use scalar::Scalar;
pub use weyl::{WeylElement, WeylGroup};

pub type Rational = num_rational::BigRational;
pub type ExactGamma = GammaVector<Rational>;
pub type RealGamma = GammaVector<f64>;
pub type ExactCoweight = Coweight<Rational>;
pub type RealCoweight = Coweight<f64>;
