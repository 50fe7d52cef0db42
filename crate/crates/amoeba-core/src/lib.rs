//! Amoebas of Laurent polynomials: membership certificates, rasters,
//! complement-component analysis, spines, coamoebas, compactified amoebas
//! and a benchmark harness over standard polynomial families.
//!
//! Everything works in double precision. Extremely unbalanced coefficients
//! can need more precision than f64 offers; the residual contracts on the
//! root solver and the quadrature report when that happens instead of
//! silently degrading.

pub mod analysis;
pub mod bench;
pub mod fixtures;
pub mod membership;
pub mod newton;
pub mod parse;
pub mod poly;
pub mod raster;
pub mod roots;
pub mod spine;
pub mod svg;
pub mod tropical;

pub use poly::{C64, ExponentVector, LaurentPolynomial, LogPoint, TorusPoint};
pub use tropical::Rect;
