//! Skew-product dynamical systems on tori.
//!
//! A system is a map `T` on `(T^m)^k` whose `i`-th output block is an affine
//! function of the first `i` input blocks plus a multiple of a generator
//! `gamma_0`. Its coefficients come from a sequence `J` and a family of
//! polynomials `Q_i` that also give every power `T^n` in closed form.
//!
//! - [`torus`]: points, characters and exact or fixed-point coordinates.
//! - [`qfamily`]: the `J(i, l)` table and the polynomial family `Q_i`.
//! - [`dynamics`]: systems, powers, orbits and the dual action.
//! - [`ergodic`]: Birkhoff averages, Weyl sums, distality and fixed characters.
//! - [`factor`]: the map onto the orbit closure of `e(n^k lambda)`.
//! - [`ellis`]: products and centre membership in the enveloping semigroup.
//! - [`descriptor`]: JSON system descriptors.

pub mod descriptor;
pub mod dynamics;
pub mod ellis;
pub mod ergodic;
pub mod error;
pub mod factor;
pub mod poly;
pub mod qfamily;
pub mod torus;

pub use descriptor::SystemDescriptor;
pub use dynamics::{AffineCoeffs, Generator, Kind, SkewSystem, SymCoord, SymbolicPoint};
pub use ellis::{EllisContext, EllisElement, EndoSymbol, GroupSymbol};
pub use error::{Error, Result};
pub use poly::RatPoly;
pub use qfamily::{JSequence, JTable, QFamily};
pub use torus::{CharacterVector, Frac, Mode, Phase, TorusPoint};

pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::BigRational;
