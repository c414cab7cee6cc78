//! Exact and floating-point linear algebra for A_α matrices.

pub mod matrix;
pub mod perron;
pub mod poly;
pub mod rational;
pub mod roots;

pub use matrix::{a_alpha_block, build_a_alpha, FloatMatrix, RationalMatrix};
pub use perron::{perron_radius, RadiusCertificate};
pub use poly::{char_poly, PolynomialR};
pub use rational::{format_rational, parse_rational, Rational};
pub use roots::poly_roots_float;
