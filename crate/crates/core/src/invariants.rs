//! Invariant theory of a finite matrix group: averaging, Molien series,
//! degree slices of `ℚ[V]^G`, and checks of claimed generators and relations.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{Matrix, Monomial, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::group::FiniteMatrixGroup;
use crate::linalg;

/// `(1/|G|) Σ_g ^g p`.
pub fn reynolds(group: &FiniteMatrixGroup, p: &Polynomial) -> Result<Polynomial> {
    let mut sum = Polynomial::zero(p.nvars());
    for g in group.ids() {
        sum = sum.try_add(&group.act_on_poly(g, p)?)?;
    }
    Ok(sum.scale(&Rational::new(BigInt::one(), group.order().into())))
}

/// Invariance under the generators, which implies invariance under `G`.
pub fn is_invariant(group: &FiniteMatrixGroup, p: &Polynomial) -> Result<bool> {
    for &g in group.generators() {
        if group.act_on_poly(g, p)? != *p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Invariance checked against every element.
pub fn is_invariant_exhaustive(group: &FiniteMatrixGroup, p: &Polynomial) -> Result<bool> {
    for g in group.ids() {
        if group.act_on_poly(g, p)? != *p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Coefficients of `det(I − tM)`, constant term first (Faddeev–LeVerrier).
pub fn reversed_char_poly(m: &Matrix) -> Vec<Rational> {
    let n = m.dim();
    // c[k] is the coefficient of t^k in det(tI − M)
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let mut acc = Matrix::zero(n);
    for k in 1..=n {
        acc = (m * &acc).add(&Matrix::identity(n).scale(&c[n - k + 1]));
        let product = m * &acc;
        let trace = (0..n).fold(Rational::zero(), |s, i| s + product.get(i, i));
        c[n - k] = -trace / Rational::from_integer(BigInt::from(k));
    }
    // det(I − tM) = Σ_k c[n−k] t^k
    (0..=n).map(|k| c[n - k].clone()).collect()
}

/// Dimensions of the degree-`d` invariant slices for `d = 0..=up_to_degree`,
/// from the Molien series `(1/|G|) Σ_g 1/det(I − t·g)`.
pub fn molien_coefficients(group: &FiniteMatrixGroup, up_to_degree: usize) -> Result<Vec<u64>> {
    let len = up_to_degree + 1;
    let mut total = vec![Rational::zero(); len];
    // det(I − tg) is a class function
    for class in group.classes() {
        let q = reversed_char_poly(group.matrix(class.representative));
        let mut series = vec![Rational::zero(); len];
        series[0] = Rational::one() / &q[0];
        for k in 1..len {
            let mut s = Rational::zero();
            for j in 1..q.len().min(k + 1) {
                s += &q[j] * &series[k - j];
            }
            series[k] = -s / &q[0];
        }
        let weight = Rational::from_integer(class.members.len().into());
        for (t, s) in total.iter_mut().zip(series) {
            *t += s * &weight;
        }
    }
    let order = Rational::from_integer(group.order().into());
    total
        .into_iter()
        .enumerate()
        .map(|(d, v)| {
            let v = v / &order;
            if !v.is_integer() {
                return Err(Error::Internal(format!(
                    "Molien coefficient {d} is not an integer: {v}"
                )));
            }
            v.to_integer()
                .to_u64()
                .ok_or_else(|| Error::Internal(format!("Molien coefficient {d} out of range")))
        })
        .collect()
}

fn monomial_index(monomials: &[Monomial]) -> BTreeMap<Monomial, usize> {
    monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

/// Rank of a set of homogeneous degree-`degree` polynomials.
fn slice_rank(polys: &[Polynomial], nvars: usize, degree: u32) -> usize {
    let monomials = Monomial::of_degree(nvars, degree);
    let index = monomial_index(&monomials);
    let rows: Vec<Vec<Rational>> = polys
        .iter()
        .map(|p| p.coefficients_in(&index, monomials.len()))
        .collect();
    linalg::rank(&rows, monomials.len())
}

/// A basis of the degree-`degree` invariants: the reduced row echelon form of
/// the Reynolds images of all monomials, leading monomials descending.
pub fn invariant_basis(group: &FiniteMatrixGroup, degree: u32) -> Result<Vec<Polynomial>> {
    let n = group.dim();
    let mut monomials = Monomial::of_degree(n, degree);
    monomials.reverse();
    let index = monomial_index(&monomials);
    let mut rows = Vec::with_capacity(monomials.len());
    for m in &monomials {
        let image = reynolds(group, &Polynomial::monomial(m.clone(), Rational::one()))?;
        rows.push(image.coefficients_in(&index, monomials.len()));
    }
    let reduced = linalg::rref(&rows, monomials.len());
    Ok(reduced
        .rows
        .into_iter()
        .map(|row| {
            let mut p = Polynomial::zero(n);
            for (m, c) in monomials.iter().zip(row) {
                p.add_term(m.clone(), c);
            }
            p
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    pub names: Vec<String>,
    pub polys: Vec<Polynomial>,
}

impl GeneratorSet {
    pub fn new(names: Vec<String>, polys: Vec<Polynomial>) -> Result<Self> {
        if names.len() != polys.len() {
            return Err(Error::ArityMismatch {
                expected: names.len(),
                found: polys.len(),
            });
        }
        Ok(GeneratorSet { names, polys })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Named relations among the generators, as polynomials in one abstract
/// variable per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSet {
    pub names: Vec<String>,
    pub relations: Vec<Polynomial>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCheck {
    pub degree: u32,
    /// Dimension of the invariant slice.
    pub invariant_dim: usize,
    /// Rank of the degree-`degree` generator products.
    pub span_rank: usize,
    pub products: usize,
}

impl DegreeCheck {
    pub fn deficient(&self) -> bool {
        self.span_rank < self.invariant_dim
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorReport {
    pub non_invariant: Vec<String>,
    pub degrees: Vec<DegreeCheck>,
}

impl GeneratorReport {
    pub fn deficient_degrees(&self) -> Vec<u32> {
        self.degrees
            .iter()
            .filter(|d| d.deficient())
            .map(|d| d.degree)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.non_invariant.is_empty() && self.deficient_degrees().is_empty()
    }
}

/// Compares, degree by degree, the span of generator products with the full
/// invariant slice.
pub fn verify_generators(group: &FiniteMatrixGroup, gens: &GeneratorSet, up_to_degree: u32) -> Result<GeneratorReport> {
    let n = group.dim();
    let mut degrees = Vec::with_capacity(gens.len());
    let mut non_invariant = Vec::new();
    for (name, p) in gens.names.iter().zip(&gens.polys) {
        if p.nvars() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.nvars(),
            });
        }
        match p.total_degree() {
            Some(d) if d > 0 && p.is_homogeneous() => degrees.push(d as u32),
            _ => return Err(Error::BadGenerator { name: name.clone() }),
        }
        if !is_invariant(group, p)? {
            non_invariant.push(name.clone());
        }
    }

    let molien = molien_coefficients(group, up_to_degree as usize)?;
    // products[d] = all generator monomials of weighted degree d, evaluated
    let mut products: Vec<Vec<Polynomial>> = vec![Vec::new(); up_to_degree as usize + 1];
    let mut cache: HashMap<Vec<u32>, Polynomial> = HashMap::new();
    let mut exps = vec![0u32; gens.len()];
    enumerate_products(
        gens,
        n,
        &degrees,
        0,
        0,
        up_to_degree,
        &mut exps,
        &mut cache,
        &mut products,
    )?;

    let checks = (0..=up_to_degree)
        .map(|d| DegreeCheck {
            degree: d,
            invariant_dim: molien[d as usize] as usize,
            span_rank: slice_rank(&products[d as usize], n, d),
            products: products[d as usize].len(),
        })
        .collect();
    Ok(GeneratorReport {
        non_invariant,
        degrees: checks,
    })
}

#[allow(clippy::too_many_arguments)]
fn enumerate_products(
    gens: &GeneratorSet,
    nvars: usize,
    degrees: &[u32],
    pos: usize,
    degree: u32,
    cap: u32,
    exps: &mut Vec<u32>,
    cache: &mut HashMap<Vec<u32>, Polynomial>,
    out: &mut [Vec<Polynomial>],
) -> Result<()> {
    if pos == gens.len() {
        let poly = product_of(gens, nvars, exps, cache)?;
        out[degree as usize].push(poly);
        return Ok(());
    }
    let mut e = 0;
    while degree + e * degrees[pos] <= cap {
        exps[pos] = e;
        enumerate_products(
            gens,
            nvars,
            degrees,
            pos + 1,
            degree + e * degrees[pos],
            cap,
            exps,
            cache,
            out,
        )?;
        e += 1;
    }
    exps[pos] = 0;
    Ok(())
}

fn product_of(
    gens: &GeneratorSet,
    n: usize,
    exps: &[u32],
    cache: &mut HashMap<Vec<u32>, Polynomial>,
) -> Result<Polynomial> {
    if let Some(p) = cache.get(exps) {
        return Ok(p.clone());
    }
    let result = match exps.iter().position(|&e| e > 0) {
        None => Polynomial::one(n),
        Some(i) => {
            let mut smaller = exps.to_vec();
            smaller[i] -= 1;
            product_of(gens, n, &smaller, cache)?.try_mul(&gens.polys[i])?
        }
    };
    cache.insert(exps.to_vec(), result.clone());
    Ok(result)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationResidual {
    pub name: String,
    pub residual: Polynomial,
}

impl RelationResidual {
    pub fn vanishes(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Substitutes the generators into each relation. Nonzero residuals are
/// returned as-is.
pub fn verify_relations(gens: &GeneratorSet, rels: &RelationSet) -> Result<Vec<RelationResidual>> {
    rels.names
        .iter()
        .zip(&rels.relations)
        .map(|(name, rel)| {
            if rel.nvars() != gens.len() {
                return Err(Error::ArityMismatch {
                    expected: gens.len(),
                    found: rel.nvars(),
                });
            }
            Ok(RelationResidual {
                name: name.clone(),
                residual: rel.compose(&gens.polys)?,
            })
        })
        .collect()
}
