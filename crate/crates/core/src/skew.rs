//! The twisted group algebra `A = ℚ[V]#G` and its trace space.
//!
//! An element of `A` is a finite sum `Σ_g ψ_g·g`; the product is
//! `(ψg)(φh) = (ψ·^gφ)(gh)`. The trace space `A/[A,A]` decomposes as
//! `⊕_i ℚ[V^{g_i}]^{G_{g_i}}·g_i` over class representatives `g_i`; [`hh0_project`]
//! computes the `i`-th component, with `ℚ[V^g]` embedded in `ℚ[V]` as
//! polynomials of the form `p∘π_g`.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::algebra::{Polynomial, Rational};
use crate::error::{Error, Result};
use crate::group::{ElementId, FiniteMatrixGroup};

#[derive(Clone, Debug)]
pub struct SkewElement<'g> {
    group: &'g FiniteMatrixGroup,
    terms: BTreeMap<ElementId, Polynomial>,
}

impl<'g> SkewElement<'g> {
    pub fn zero(group: &'g FiniteMatrixGroup) -> Self {
        SkewElement {
            group,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(group: &'g FiniteMatrixGroup) -> Self {
        Self::from_poly(group, Polynomial::one(group.dim()))
    }

    /// `p·1`.
    pub fn from_poly(group: &'g FiniteMatrixGroup, p: Polynomial) -> Self {
        let mut a = Self::zero(group);
        a.insert(group.identity(), p);
        a
    }

    /// `p·g`.
    pub fn term(group: &'g FiniteMatrixGroup, p: Polynomial, g: ElementId) -> Result<Self> {
        Self::from_terms(group, [(g, p)])
    }

    pub fn from_terms<I>(group: &'g FiniteMatrixGroup, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ElementId, Polynomial)>,
    {
        let mut a = Self::zero(group);
        for (g, p) in terms {
            group.check(g)?;
            if p.nvars() != group.dim() {
                return Err(Error::DimensionMismatch {
                    expected: group.dim(),
                    found: p.nvars(),
                });
            }
            a.insert(g, p);
        }
        Ok(a)
    }

    fn insert(&mut self, g: ElementId, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&g) {
            Some(existing) => &existing + &p,
            None => p,
        };
        if !sum.is_zero() {
            self.terms.insert(g, sum);
        }
    }

    pub fn group(&self) -> &'g FiniteMatrixGroup {
        self.group
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero components in ascending element order.
    pub fn terms(&self) -> impl Iterator<Item = (ElementId, &Polynomial)> {
        self.terms.iter().map(|(g, p)| (*g, p))
    }

    fn same_group(&self, other: &SkewElement<'_>) -> Result<()> {
        if std::ptr::eq(self.group, other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn try_add(&self, other: &SkewElement<'g>) -> Result<Self> {
        self.same_group(other)?;
        let mut out = self.clone();
        for (g, p) in &other.terms {
            out.insert(*g, p.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &SkewElement<'g>) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.group);
        for (g, p) in &self.terms {
            out.insert(*g, p.scale(c));
        }
        out
    }

    /// The product in `A`: `(ψg)(φh) = (ψ·^gφ)(gh)`.
    pub fn try_mul(&self, other: &SkewElement<'g>) -> Result<Self> {
        self.same_group(other)?;
        let mut out = Self::zero(self.group);
        for (&g, psi) in &self.terms {
            for (&h, phi) in &other.terms {
                let moved = self.group.act_on_poly(g, phi)?;
                out.insert(self.group.mul(g, h), psi.try_mul(&moved)?);
            }
        }
        Ok(out)
    }

    /// `ab − ba`.
    pub fn commutator(&self, other: &SkewElement<'g>) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// The coefficient of `g`: `(ψh)_g = ψ·δ_{g,h}`.
    pub fn g_part(&self, g: ElementId) -> Result<Polynomial> {
        self.group.check(g)?;
        Ok(self
            .terms
            .get(&g)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.group.dim())))
    }
}

impl PartialEq for SkewElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.group, other.group) && self.terms == other.terms
    }
}

impl Eq for SkewElement<'_> {}

impl<'g> Add for &SkewElement<'g> {
    type Output = SkewElement<'g>;

    fn add(self, rhs: &SkewElement<'g>) -> SkewElement<'g> {
        self.try_add(rhs).expect("skew elements over different groups")
    }
}

impl<'g> Sub for &SkewElement<'g> {
    type Output = SkewElement<'g>;

    fn sub(self, rhs: &SkewElement<'g>) -> SkewElement<'g> {
        self.try_sub(rhs).expect("skew elements over different groups")
    }
}

impl<'g> Neg for &SkewElement<'g> {
    type Output = SkewElement<'g>;

    fn neg(self) -> SkewElement<'g> {
        SkewElement {
            group: self.group,
            terms: self.terms.iter().map(|(g, p)| (*g, -p)).collect(),
        }
    }
}

/// `p∘π_g`: restriction of `p` to the fixed space `V^g`, re-embedded in `ℚ[V]`.
pub fn restrict_to_fixed(group: &FiniteMatrixGroup, p: &Polynomial, g: ElementId) -> Result<Polynomial> {
    group.check(g)?;
    p.substitute_linear(&group.fixed_projection(g))
}

/// The `class_index`-th trace-space component of `a`, as the polynomial
/// coefficient of the class representative `g_i`:
///
/// `P_i(a) = (1/|G_{g_i}|) Σ_{k∈G} (^k a_{k⁻¹ g_i k})∘π_{g_i}`.
pub fn hh0_project(a: &SkewElement<'_>, class_index: usize) -> Result<Polynomial> {
    let group = a.group();
    let class = group.class(class_index)?;
    let rep = class.representative;
    let projection = group.fixed_projection(rep);
    let mut sum = Polynomial::zero(group.dim());
    for k in group.ids() {
        let kinv = group.inverse(k);
        let h = group.conjugate(kinv, rep);
        let Some(component) = a.terms.get(&h) else {
            continue;
        };
        // (^k q)∘π = q∘(k⁻¹π)
        let composite = group.matrix(kinv) * &projection;
        sum = &sum + &component.substitute_linear(&composite)?;
    }
    let weight = Rational::new(1.into(), class.centralizer.len().into());
    Ok(sum.scale(&weight))
}

/// True when `p` lies in `ℚ[V^{g_i}]^{G_{g_i}}`: fixed by `π_{g_i}` and by the
/// centralizer of `g_i`.
pub fn in_trace_summand(group: &FiniteMatrixGroup, class_index: usize, p: &Polynomial) -> Result<bool> {
    let class = group.class(class_index)?;
    if restrict_to_fixed(group, p, class.representative)? != *p {
        return Ok(false);
    }
    for &u in &class.centralizer {
        if group.act_on_poly(u, p)? != *p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The image of an element in `A/[A,A] = ⊕_i ℚ[V^{g_i}]^{G_{g_i}}·g_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceVector {
    pub components: Vec<Polynomial>,
}

impl TraceVector {
    pub fn of(a: &SkewElement<'_>) -> Result<Self> {
        let components = (0..a.group().classes().len())
            .map(|i| hh0_project(a, i))
            .collect::<Result<_>>()?;
        Ok(TraceVector { components })
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    /// Every component lies in its summand.
    pub fn is_well_formed(&self, group: &FiniteMatrixGroup) -> Result<bool> {
        for (i, p) in self.components.iter().enumerate() {
            if !in_trace_summand(group, i, p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `([a, x])_g` for the inner derivation `[a, −]` and a `g`-fixed polynomial
/// `x`. Vanishes identically for `g ≠ 1`.
pub fn inner_derivation_g_part(a: &SkewElement<'_>, x: &Polynomial, g: ElementId) -> Result<Polynomial> {
    let group = a.group();
    group.check(g)?;
    if g == group.identity() {
        return Err(Error::IdentityElement);
    }
    if group.act_on_poly(g, x)? != *x {
        return Err(Error::NotFixed { element: g.0 });
    }
    let xs = SkewElement::from_terms(group, [(group.identity(), x.clone())])?;
    a.commutator(&xs)?.g_part(g)
}
