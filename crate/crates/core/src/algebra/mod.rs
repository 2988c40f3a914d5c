//! Scalars, polynomials, matrices and the Poisson bracket.

pub mod matrix;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod symplectic;

pub use matrix::Matrix;
pub use parse::{format_poly, format_poly_with_names, parse_poly, parse_poly_with_names};
pub use poly::{default_names, Monomial, Polynomial, DEFAULT_DEGREE_CAP};
pub use rational::{format_rational, parse_rational, Rational};
pub use symplectic::{poisson_bracket, SymplecticForm};
