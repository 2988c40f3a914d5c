//! Deciding whether the Poisson bracket on `ℚ[V]^G` can extend to the trace
//! space of `ℚ[V]#G`.
//!
//! For invariant `φ`, a polynomial `ψ` and a non-identity class representative
//! `g`, an extension needs some `σ ∈ ℚ[V]` with
//!
//! ```text
//! P_i(({φ,ψ} + ψσ)·g) = 0.
//! ```
//!
//! The map `σ ↦ P_i(ψσ·g)` is linear, so the question is whether
//! `−P_i({φ,ψ}·g)` lies in its image. [`solve_sigma`] answers this exactly for
//! `σ` of bounded degree and tries to lift an infeasible answer to all degrees
//! with a divisor witness.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{Monomial, Polynomial, Rational, SymplecticForm};
use crate::error::{Error, Result};
use crate::group::{ElementId, FiniteMatrixGroup};
use crate::invariants::is_invariant;
use crate::linalg;
use crate::skew::{hh0_project, SkewElement};

#[derive(Debug, Clone)]
pub struct ObstructionProblem {
    pub phi: Polynomial,
    pub psi: Polynomial,
    pub class_index: usize,
    pub degree_bound: u32,
    pub form: SymplecticForm,
}

impl ObstructionProblem {
    /// Rejects the identity class and non-invariant `phi`.
    pub fn new(
        group: &FiniteMatrixGroup,
        phi: Polynomial,
        psi: Polynomial,
        class_index: usize,
        degree_bound: u32,
        form: SymplecticForm,
    ) -> Result<Self> {
        group.class(class_index)?;
        if class_index == 0 {
            return Err(Error::IdentityElement);
        }
        if !is_invariant(group, &phi)? {
            return Err(Error::NonInvariantPhi);
        }
        Ok(ObstructionProblem {
            phi,
            psi,
            class_index,
            degree_bound,
            form,
        })
    }

    pub fn with_degree(&self, degree_bound: u32) -> Self {
        ObstructionProblem {
            degree_bound,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Feasible,
    InfeasibleAtDegree,
    InfeasibleAllDegrees,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Feasible => "FEASIBLE",
            Verdict::InfeasibleAtDegree => "INFEASIBLE_AT_DEGREE",
            Verdict::InfeasibleAllDegrees => "INFEASIBLE_ALL_DEGREES",
        }
    }
}

/// Evidence that `−target` is not in the span of the images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankData {
    /// Monomials appearing in any image or the target.
    pub rows: usize,
    /// Monomials `σ` may use.
    pub cols: usize,
    pub rank: usize,
    pub augmented_rank: usize,
    /// A linear functional on coefficient vectors that kills every image
    /// but not the target.
    pub functional: Vec<(Monomial, Rational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub degree_bound: u32,
    pub target: Polynomial,
    pub sigma: Option<Polynomial>,
    pub rank_data: Option<RankData>,
    pub divisor_witness: Option<usize>,
}

/// `P_i({φ,ψ}·g_i)`.
pub fn target_poly(
    group: &FiniteMatrixGroup,
    phi: &Polynomial,
    psi: &Polynomial,
    class_index: usize,
    form: &SymplecticForm,
) -> Result<Polynomial> {
    let rep = group.class(class_index)?.representative;
    if !is_invariant(group, phi)? {
        return Err(Error::NonInvariantPhi);
    }
    let bracket = form.bracket(phi, psi)?;
    hh0_project(&SkewElement::term(group, bracket, rep)?, class_index)
}

/// `(m, P_i(ψ·m·g_i))` for every monomial `m` of degree at most
/// `degree_bound`, ascending; zero images included.
pub fn sigma_image_basis(
    group: &FiniteMatrixGroup,
    psi: &Polynomial,
    class_index: usize,
    degree_bound: u32,
) -> Result<Vec<(Monomial, Polynomial)>> {
    let rep = group.class(class_index)?.representative;
    Monomial::up_to_degree(group.dim(), degree_bound)
        .into_iter()
        .map(|m| {
            let shifted = psi.try_mul(&Polynomial::monomial(m.clone(), Rational::one()))?;
            let image = hh0_project(&SkewElement::term(group, shifted, rep)?, class_index)?;
            Ok((m, image))
        })
        .collect()
}

/// A variable present in every monomial of every image but absent from some
/// monomial of the target. Any combination of the images then keeps that
/// variable in every monomial, so it can never equal `−target`.
///
/// With no nonzero images the condition on images is vacuous and the lowest
/// variable missing from some target monomial is returned.
pub fn divisor_certificate(images: &[Polynomial], target: &Polynomial) -> Option<usize> {
    let nvars = target.nvars();
    (0..nvars).find(|&v| {
        let target_escapes = target.terms().any(|(m, _)| m.exponent(v) == 0);
        let images_divisible = images.iter().all(|p| p.terms().all(|(m, _)| m.exponent(v) > 0));
        target_escapes && images_divisible
    })
}

/// True when `x_v` divides `(^k ψ)∘π_{g_i}` for every `k` in the centralizer
/// of `g_i`. Then `x_v` divides `P_i(ψσ·g_i)` for every `σ` whatsoever, which
/// lifts a divisor witness from the degree-bounded images to all degrees.
pub fn divisor_holds_for_all_sigma(
    group: &FiniteMatrixGroup,
    psi: &Polynomial,
    class_index: usize,
    variable: usize,
) -> Result<bool> {
    let class = group.class(class_index)?;
    let projection = group.fixed_projection(class.representative);
    for &k in &class.centralizer {
        let moved = group.act_on_poly(k, psi)?.substitute_linear(&projection)?;
        if moved.terms().any(|(m, _)| m.exponent(variable) == 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact decision of the degree-bounded problem. Pivots follow ascending
/// monomial order and free unknowns are zero, so `σ` is a basic solution.
pub fn solve_sigma(group: &FiniteMatrixGroup, problem: &ObstructionProblem) -> Result<Certificate> {
    if problem.class_index == 0 {
        return Err(Error::IdentityElement);
    }
    let target = target_poly(group, &problem.phi, &problem.psi, problem.class_index, &problem.form)?;
    let basis = sigma_image_basis(group, &problem.psi, problem.class_index, problem.degree_bound)?;

    let mut row_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in basis.iter().map(|(_, p)| p).chain(std::iter::once(&target)) {
        for (m, _) in p.terms() {
            row_index.entry(m.clone()).or_insert(0);
        }
    }
    for (i, v) in row_index.values_mut().enumerate() {
        *v = i;
    }
    let nrows = row_index.len();
    let ncols = basis.len();
    let mut a = vec![vec![Rational::zero(); ncols]; nrows];
    for (c, (_, image)) in basis.iter().enumerate() {
        for (m, v) in image.terms() {
            a[row_index[m]][c] = v.clone();
        }
    }
    let rhs: Vec<Rational> = (-&target).coefficients_in(&row_index, nrows);

    if let Some(x) = linalg::solve(&a, &rhs, ncols) {
        let mut sigma = Polynomial::zero(group.dim());
        for ((m, _), c) in basis.iter().zip(x) {
            sigma.add_term(m.clone(), c);
        }
        return Ok(Certificate {
            verdict: Verdict::Feasible,
            degree_bound: problem.degree_bound,
            target,
            sigma: Some(sigma),
            rank_data: None,
            divisor_witness: None,
        });
    }

    let functional = linalg::infeasibility_functional(&a, &rhs, ncols)
        .ok_or_else(|| Error::Internal("inconsistent system without a separating functional".into()))?;
    let monomials: Vec<&Monomial> = row_index.keys().collect();
    let rank_data = RankData {
        rows: nrows,
        cols: ncols,
        rank: linalg::rank(&a, ncols),
        augmented_rank: {
            let aug: Vec<Vec<Rational>> = a
                .iter()
                .zip(&rhs)
                .map(|(row, r)| {
                    let mut row = row.clone();
                    row.push(r.clone());
                    row
                })
                .collect();
            linalg::rank(&aug, ncols + 1)
        },
        functional: monomials
            .into_iter()
            .zip(functional)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.clone(), c))
            .collect(),
    };

    let images: Vec<Polynomial> = basis.into_iter().map(|(_, p)| p).collect();
    let witness = match divisor_certificate(&images, &target) {
        Some(v) if divisor_holds_for_all_sigma(group, &problem.psi, problem.class_index, v)? => Some(v),
        _ => None,
    };
    Ok(Certificate {
        verdict: if witness.is_some() {
            Verdict::InfeasibleAllDegrees
        } else {
            Verdict::InfeasibleAtDegree
        },
        degree_bound: problem.degree_bound,
        target,
        sigma: None,
        rank_data: Some(rank_data),
        divisor_witness: witness,
    })
}

impl Certificate {
    /// Re-checks the certificate from scratch against `problem`.
    pub fn replay(&self, group: &FiniteMatrixGroup, problem: &ObstructionProblem) -> Result<()> {
        let fail = |msg: &str| Err(Error::Internal(format!("certificate replay failed: {msg}")));
        let target = target_poly(group, &problem.phi, &problem.psi, problem.class_index, &problem.form)?;
        if target != self.target {
            return fail("target differs");
        }
        let rep = group.class(problem.class_index)?.representative;
        match self.verdict {
            Verdict::Feasible => {
                let Some(sigma) = &self.sigma else {
                    return fail("feasible certificate without sigma");
                };
                if sigma.total_degree().unwrap_or(0) > self.degree_bound as u64 {
                    return fail("sigma exceeds the degree bound");
                }
                let shifted = problem.psi.try_mul(sigma)?;
                let image = hh0_project(&SkewElement::term(group, shifted, rep)?, problem.class_index)?;
                if !(&target + &image).is_zero() {
                    return fail("sigma does not cancel the target");
                }
            }
            Verdict::InfeasibleAtDegree | Verdict::InfeasibleAllDegrees => {
                let Some(rank) = &self.rank_data else {
                    return fail("infeasible certificate without rank data");
                };
                let basis = sigma_image_basis(group, &problem.psi, problem.class_index, self.degree_bound)?;
                let apply = |p: &Polynomial| {
                    rank.functional
                        .iter()
                        .fold(Rational::zero(), |acc, (m, c)| acc + c * p.coefficient(m))
                };
                if basis.iter().any(|(_, img)| !apply(img).is_zero()) {
                    return fail("functional does not vanish on the images");
                }
                if apply(&target).is_zero() {
                    return fail("functional vanishes on the target");
                }
                if rank.augmented_rank != rank.rank + 1 {
                    return fail("augmented rank must exceed rank by one");
                }
                let images: Vec<Polynomial> = basis.into_iter().map(|(_, p)| p).collect();
                match (self.verdict, self.divisor_witness) {
                    (Verdict::InfeasibleAllDegrees, Some(v)) => {
                        let scan = images.iter().all(|p| p.terms().all(|(m, _)| m.exponent(v) > 0))
                            && target.terms().any(|(m, _)| m.exponent(v) == 0);
                        if !scan || !divisor_holds_for_all_sigma(group, &problem.psi, problem.class_index, v)? {
                            return fail("divisor witness does not hold");
                        }
                    }
                    (Verdict::InfeasibleAllDegrees, None) => return fail("all-degree verdict without witness"),
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

/// `Σ_{h∈G} ^h((d)_{h g h⁻¹})` for a candidate value `d` of `d_φ(g)`.
pub fn collapse_to_sigma(d_of_g: &SkewElement<'_>, g: ElementId) -> Result<Polynomial> {
    let group = d_of_g.group();
    group.check(g)?;
    if g == group.identity() {
        return Err(Error::IdentityElement);
    }
    let mut sum = Polynomial::zero(group.dim());
    for h in group.ids() {
        let part = d_of_g.g_part(group.conjugate(h, g))?;
        if part.is_zero() {
            continue;
        }
        sum = &sum + &group.act_on_poly(h, &part)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::group::{klein_swap_generators, DEFAULT_GROUP_CAP};

    fn group() -> FiniteMatrixGroup {
        FiniteMatrixGroup::generate(4, klein_swap_generators(), DEFAULT_GROUP_CAP).unwrap()
    }

    fn x(s: &str) -> Polynomial {
        parse_poly(s, 4).unwrap()
    }

    #[test]
    fn targets() {
        let g = group();
        let w = SymplecticForm::darboux(2);
        let i = g.class_of(g.element_from_word("b").unwrap());
        let f1 = x("x1^2 + x3^2");
        let h1 = x("x1*x2 + x3*x4");
        assert_eq!(target_poly(&g, &f1, &h1, i, &w).unwrap(), x("2*x3^2"));
        for c in 0..g.classes().len() {
            assert!(target_poly(&g, &f1, &f1, c, &w).unwrap().is_zero());
        }
        assert_eq!(target_poly(&g, &h1, &f1, i, &w).unwrap(), x("-2*x3^2"));
        assert_eq!(target_poly(&g, &x("x1"), &f1, i, &w), Err(Error::NonInvariantPhi));
    }

    #[test]
    fn image_basis() {
        let g = group();
        let i = g.class_of(g.element_from_word("b").unwrap());
        let h1 = x("x1*x2 + x3*x4");
        let d0 = sigma_image_basis(&g, &h1, i, 0).unwrap();
        assert_eq!(d0, vec![(Monomial::one(4), x("x3*x4"))]);
        let zero = sigma_image_basis(&g, &Polynomial::zero(4), i, 2).unwrap();
        assert_eq!(zero.len(), 15);
        assert!(zero.iter().all(|(_, p)| p.is_zero()));
        let d2 = sigma_image_basis(&g, &h1, i, 2).unwrap();
        let m = Monomial::new(vec![0, 0, 1, 1]);
        let (_, img) = d2.iter().find(|(k, _)| *k == m).unwrap();
        assert_eq!(*img, x("x3^2*x4^2"));
    }

    #[test]
    fn divisor_cases() {
        assert_eq!(divisor_certificate(&[x("x1")], &x("x1")), None);
        assert_eq!(divisor_certificate(&[], &x("x3^2")), Some(0));
        assert_eq!(divisor_certificate(&[], &Polynomial::zero(4)), None);
        assert_eq!(divisor_certificate(&[x("x3*x4"), x("x4^2")], &x("2*x3^2")), Some(3));
    }

    #[test]
    fn bundled_instance() {
        let g = group();
        let w = SymplecticForm::darboux(2);
        let i = g.class_of(g.element_from_word("b").unwrap());
        let p = ObstructionProblem::new(&g, x("x1^2 + x3^2"), x("x1*x2 + x3*x4"), i, 4, w).unwrap();
        let cert = solve_sigma(&g, &p).unwrap();
        assert_eq!(cert.verdict, Verdict::InfeasibleAllDegrees);
        assert_eq!(cert.divisor_witness, Some(3));
        assert_eq!(cert.target, x("2*x3^2"));
        cert.replay(&g, &p).unwrap();
    }

    #[test]
    fn zero_target_is_feasible() {
        let g = group();
        let w = SymplecticForm::darboux(2);
        let i = g.class_of(g.element_from_word("b").unwrap());
        let f1 = x("x1^2 + x3^2");
        let p = ObstructionProblem::new(&g, f1.clone(), f1, i, 0, w).unwrap();
        let cert = solve_sigma(&g, &p).unwrap();
        assert_eq!(cert.verdict, Verdict::Feasible);
        assert_eq!(cert.sigma, Some(Polynomial::zero(4)));
        cert.replay(&g, &p).unwrap();
    }

    #[test]
    fn nonzero_sigma_solution() {
        let g = group();
        let w = SymplecticForm::darboux(2);
        let i = g.class_of(g.element_from_word("b").unwrap());
        // {h1, x3^2} = -2 x3^2 and P(x3^2 * 2 * b) = 2 x3^2
        let p = ObstructionProblem::new(&g, x("x1*x2 + x3*x4"), x("x3^2"), i, 2, w.clone()).unwrap();
        let cert = solve_sigma(&g, &p).unwrap();
        assert_eq!(cert.verdict, Verdict::Feasible);
        assert_eq!(cert.target, x("-2*x3^2"));
        assert_eq!(cert.sigma, Some(x("2")));
        cert.replay(&g, &p).unwrap();

        // {f1, x3 x4} = 2 x3^2, while x3 x4 σ restricted always carries x4
        let q = ObstructionProblem::new(&g, x("x1^2 + x3^2"), x("x3*x4"), i, 2, w).unwrap();
        let cert = solve_sigma(&g, &q).unwrap();
        assert_eq!(cert.target, x("2*x3^2"));
        assert_eq!(cert.verdict, Verdict::InfeasibleAllDegrees);
        cert.replay(&g, &q).unwrap();
    }

    #[test]
    fn problem_guards() {
        let g = group();
        let w = SymplecticForm::darboux(2);
        assert_eq!(
            ObstructionProblem::new(&g, x("x1^2 + x3^2"), x("x1"), 0, 2, w.clone()).unwrap_err(),
            Error::IdentityElement
        );
        assert_eq!(
            ObstructionProblem::new(&g, x("x1"), x("x1"), 1, 2, w).unwrap_err(),
            Error::NonInvariantPhi
        );
    }

    #[test]
    fn collapse() {
        let g = group();
        let b = g.element_from_word("b").unwrap();
        let d = SkewElement::term(&g, x("x3*x4"), b).unwrap();
        assert_eq!(collapse_to_sigma(&d, b).unwrap(), x("4*x3*x4"));
        assert!(collapse_to_sigma(&SkewElement::zero(&g), b).unwrap().is_zero());
        let off = SkewElement::term(&g, x("x1 + x2"), g.element_from_word("e").unwrap()).unwrap();
        assert!(collapse_to_sigma(&off, b).unwrap().is_zero());
        assert_eq!(collapse_to_sigma(&d, g.identity()), Err(Error::IdentityElement));
    }
}
