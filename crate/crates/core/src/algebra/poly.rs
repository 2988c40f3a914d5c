//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::matrix::Matrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Maximum total degree accepted by the checked operations unless overridden.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// An exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographically with `x1` the most significant variable.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0[index]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All monomials of total degree exactly `degree`, in ascending graded-lex order.
    pub fn of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u32; nvars];
        fn rec(pos: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            let n = current.len();
            if pos + 1 == n {
                current[pos] = left;
                out.push(Monomial(current.clone()));
                return;
            }
            // smaller leading exponent first gives ascending lex order
            for e in 0..=left {
                current[pos] = e;
                rec(pos + 1, left - e, current, out);
            }
            current[pos] = 0;
        }
        if nvars == 0 {
            if degree == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(0, degree, &mut current, &mut out);
        out
    }

    /// All monomials of total degree at most `degree`, ascending.
    pub fn up_to_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
        (0..=degree).flat_map(|d| Self::of_degree(nvars, d)).collect()
    }

    pub fn format_with(&self, names: &[String]) -> String {
        let factors: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    names[i].clone()
                } else {
                    format!("{}^{}", names[i], e)
                }
            })
            .collect();
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_with(&default_names(self.nvars())))
    }
}

/// Names `x1..xn`.
pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("x{i}")).collect()
}

/// A polynomial in a fixed number of variables, kept in canonical form:
/// no zero coefficients are ever stored, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// The variable `x_{index+1}`.
    pub fn var(nvars: usize, index: usize) -> Result<Self> {
        if index >= nvars {
            return Err(Error::VariableOutOfRange { index, nvars });
        }
        Ok(Self::monomial(Monomial::var(nvars, index), Rational::one()))
    }

    /// Builds from `(exponents, coefficient)` pairs, combining duplicates.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::VarCountMismatch {
                    left: nvars,
                    right: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            Some(d) => degrees.all(|e| e == d),
            None => true,
        }
    }

    pub fn homogeneous_component(&self, degree: u64) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, other: &Polynomial) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.mul_capped(other, DEFAULT_DEGREE_CAP)
    }

    pub fn mul_capped(&self, other: &Polynomial, cap: u32) -> Result<Polynomial> {
        self.check_same(other)?;
        if let (Some(a), Some(b)) = (self.total_degree(), other.total_degree()) {
            if a + b > cap as u64 {
                return Err(Error::DegreeCapExceeded { degree: a + b, cap });
            }
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, exponent: u32) -> Result<Polynomial> {
        self.pow_capped(exponent, DEFAULT_DEGREE_CAP)
    }

    pub fn pow_capped(&self, exponent: u32, cap: u32) -> Result<Polynomial> {
        if let Some(d) = self.total_degree() {
            let total = d * exponent as u64;
            if total > cap as u64 {
                return Err(Error::DegreeCapExceeded { degree: total, cap });
            }
        }
        let mut result = Polynomial::one(self.nvars);
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        Ok(result)
    }

    /// Formal partial derivative with respect to the 0-based variable `index`.
    pub fn partial_derivative(&self, index: usize) -> Result<Polynomial> {
        if index >= self.nvars {
            return Err(Error::VariableOutOfRange {
                index,
                nvars: self.nvars,
            });
        }
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[index] -= 1;
            out.add_term(Monomial(exps), c * Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    /// Replaces each variable `x_j` by the linear form `Σ_k M[j][k] x_k`,
    /// i.e. returns `p(Mx)`.
    pub fn substitute_linear(&self, m: &Matrix) -> Result<Polynomial> {
        if m.dim() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: m.dim(),
            });
        }
        let n = self.nvars;
        if m.is_monomial_pattern() {
            let targets: Vec<Option<(usize, &Rational)>> = (0..n)
                .map(|j| m.row(j).iter().enumerate().find(|(_, v)| !v.is_zero()))
                .collect();
            let mut out = Polynomial::zero(n);
            'terms: for (mono, c) in &self.terms {
                let mut exps = vec![0u32; n];
                let mut coeff = c.clone();
                for (j, &e) in mono.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    match targets[j] {
                        None => continue 'terms,
                        Some((k, v)) => {
                            exps[k] += e;
                            coeff *= num_traits::pow(v.clone(), e as usize);
                        }
                    }
                }
                out.add_term(Monomial(exps), coeff);
            }
            return Ok(out);
        }

        let forms: Vec<Polynomial> = (0..n)
            .map(|j| {
                let mut p = Polynomial::zero(n);
                for (k, v) in m.row(j).iter().enumerate() {
                    p.add_term(Monomial::var(n, k), v.clone());
                }
                p
            })
            .collect();
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(n);
        for (mono, c) in &self.terms {
            let mut acc = Polynomial::constant(n, c.clone());
            for (j, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers
                    .entry((j, e))
                    .or_insert_with(|| forms[j].pow_capped(e, u32::MAX).expect("uncapped"));
                acc = acc.mul_unchecked(pw);
                if acc.is_zero() {
                    break;
                }
            }
            for (mm, cc) in acc.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Evaluates `self` at polynomial arguments: variable `i` becomes `args[i]`.
    pub fn compose(&self, args: &[Polynomial]) -> Result<Polynomial> {
        if args.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: args.len(),
                found: self.nvars,
            });
        }
        let target = match args.first() {
            Some(a) => a.nvars,
            None => 0,
        };
        for a in args {
            if a.nvars != target {
                return Err(Error::VarCountMismatch {
                    left: target,
                    right: a.nvars,
                });
            }
        }
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(target);
        for (mono, c) in &self.terms {
            let mut acc = Polynomial::constant(target, c.clone());
            for (j, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = match powers.entry((j, e)) {
                    std::collections::hash_map::Entry::Occupied(o) => o.into_mut(),
                    std::collections::hash_map::Entry::Vacant(v) => v.insert(args[j].pow(e)?),
                };
                acc = acc.try_mul(pw)?;
            }
            for (mm, cc) in acc.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Coefficient vector against an ordered monomial index.
    pub fn coefficients_in(&self, index: &BTreeMap<Monomial, usize>, width: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); width];
        for (m, c) in &self.terms {
            v[index[m]] = c.clone();
        }
        v
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial variable count mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial variable count mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_same(rhs).expect("polynomial variable count mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::parse::format_poly(self))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}
