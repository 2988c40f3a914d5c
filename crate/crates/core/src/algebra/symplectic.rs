//! Constant symplectic forms and the Poisson bracket they induce.

use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::poly::Polynomial;
use super::rational::Rational;
use crate::error::{Error, Result};

/// A constant symplectic form `ω = Σ_{i<j} J[i][j] dx_i ∧ dx_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticForm {
    form: Matrix,
    /// `Π = (J⁻¹)ᵀ`, so that `{x_i, x_j} = Π[i][j]`.
    tensor: Matrix,
}

impl SymplecticForm {
    pub fn new(form: Matrix) -> Result<Self> {
        let n = form.dim();
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidSymplecticForm(format!("odd dimension {n}")));
        }
        if !form.is_antisymmetric() {
            return Err(Error::InvalidSymplecticForm("matrix is not antisymmetric".into()));
        }
        let inverse = form
            .inverse()
            .ok_or_else(|| Error::InvalidSymplecticForm("matrix is singular".into()))?;
        Ok(SymplecticForm {
            tensor: inverse.transpose(),
            form,
        })
    }

    /// `dx1∧dx2 + dx3∧dx4 + …` on `2·pairs` variables.
    pub fn darboux(pairs: usize) -> Self {
        let n = 2 * pairs;
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for k in 0..pairs {
            rows[2 * k][2 * k + 1] = Rational::one();
            rows[2 * k + 1][2 * k] = -Rational::one();
        }
        Self::new(Matrix::from_rows(rows).expect("square")).expect("standard form is valid")
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.form
    }

    pub fn poisson_tensor(&self) -> &Matrix {
        &self.tensor
    }

    /// `{p, q} = Σ_{i,j} Π[i][j] ∂_i p ∂_j q`.
    pub fn bracket(&self, p: &Polynomial, q: &Polynomial) -> Result<Polynomial> {
        let n = self.dim();
        for poly in [p, q] {
            if poly.nvars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: poly.nvars(),
                });
            }
        }
        let dp: Vec<Polynomial> = (0..n).map(|i| p.partial_derivative(i)).collect::<Result<_>>()?;
        let dq: Vec<Polynomial> = (0..n).map(|j| q.partial_derivative(j)).collect::<Result<_>>()?;
        let mut out = Polynomial::zero(n);
        for (i, di) in dp.iter().enumerate() {
            if di.is_zero() {
                continue;
            }
            for (j, dj) in dq.iter().enumerate() {
                let c = self.tensor.get(i, j);
                if c.is_zero() || dj.is_zero() {
                    continue;
                }
                out = &out + &(di * dj).scale(c);
            }
        }
        Ok(out)
    }
}

pub fn poisson_bracket(p: &Polynomial, q: &Polynomial, form: &SymplecticForm) -> Result<Polynomial> {
    form.bracket(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::rational::int;

    fn x(s: &str) -> Polynomial {
        parse_poly(s, 4).unwrap()
    }

    #[test]
    fn reproduces_generator_bracket() {
        let w = SymplecticForm::darboux(2);
        let b = w.bracket(&x("x1^2 + x3^2"), &x("x1*x2 + x3*x4")).unwrap();
        assert_eq!(b, x("2*x1^2 + 2*x3^2"));
    }

    #[test]
    fn darboux_pairs() {
        let w = SymplecticForm::darboux(2);
        assert_eq!(w.bracket(&x("x1"), &x("x2")).unwrap(), Polynomial::one(4));
        assert!(w.bracket(&x("x1"), &x("x4")).unwrap().is_zero());
        assert_eq!(w.bracket(&x("x4"), &x("x3")).unwrap(), Polynomial::constant(4, int(-1)));
        let p = x("x1^3*x4 - x2*x3 + 5");
        assert!(w.bracket(&p, &p).unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_forms() {
        let odd = Matrix::from_i64_rows(&[&[0]]).unwrap();
        assert!(SymplecticForm::new(odd).is_err());
        let sym = Matrix::from_i64_rows(&[&[0, 1], &[1, 0]]).unwrap();
        assert!(SymplecticForm::new(sym).is_err());
        let singular = Matrix::zero(2);
        assert!(SymplecticForm::new(singular).is_err());
        let w = SymplecticForm::darboux(1);
        assert!(w.bracket(&x("x1"), &x("x2")).is_err());
    }
}
