//! Finite groups of rational matrices acting on `ℚ[x1..xn]`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::algebra::{Matrix, Polynomial, Rational, SymplecticForm};
use crate::error::{Error, Result};

/// Default upper bound on the number of elements enumerated by closure.
pub const DEFAULT_GROUP_CAP: usize = 10_000;

/// Index of an element inside its [`FiniteMatrixGroup`]. The identity is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub usize);

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClass {
    /// Lowest-index member.
    pub representative: ElementId,
    /// Members in ascending index order.
    pub members: Vec<ElementId>,
    /// Centralizer of the representative, ascending.
    pub centralizer: Vec<ElementId>,
}

/// A finite group of invertible `n × n` rational matrices, enumerated in
/// breadth-first order from its generators.
#[derive(Debug, Clone)]
pub struct FiniteMatrixGroup {
    dim: usize,
    elements: Vec<Matrix>,
    words: Vec<String>,
    lookup: HashMap<Matrix, usize>,
    generator_names: Vec<String>,
    generators: Vec<ElementId>,
    mul_table: Vec<usize>,
    inverses: Vec<usize>,
    orders: Vec<u32>,
    classes: Vec<ConjugacyClass>,
    class_of: Vec<usize>,
}

impl FiniteMatrixGroup {
    /// Closure of named generators. Element order is BFS discovery order:
    /// each discovered element is right-multiplied by the generators in
    /// the given order.
    pub fn generate(dim: usize, generators: Vec<(String, Matrix)>, cap: usize) -> Result<Self> {
        for (i, (_, m)) in generators.iter().enumerate() {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.dim(),
                });
            }
            if m.determinant() == Rational::from_integer(0.into()) {
                return Err(Error::SingularGenerator { index: i });
            }
        }
        let identity = Matrix::identity(dim);
        let mut elements = vec![identity.clone()];
        let mut words = vec!["1".to_string()];
        let mut lookup = HashMap::from([(identity, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (name, s) in &generators {
                let y = &elements[x] * s;
                if lookup.contains_key(&y) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(Error::GroupCapExceeded { cap });
                }
                let idx = elements.len();
                let word = if x == 0 {
                    name.clone()
                } else {
                    format!("{}*{}", words[x], name)
                };
                lookup.insert(y.clone(), idx);
                elements.push(y);
                words.push(word);
                queue.push_back(idx);
            }
        }

        let order = elements.len();
        let mut mul_table = vec![0usize; order * order];
        for a in 0..order {
            for b in 0..order {
                let prod = &elements[a] * &elements[b];
                mul_table[a * order + b] = *lookup
                    .get(&prod)
                    .ok_or_else(|| Error::Internal("closure is not closed under products".into()))?;
            }
        }
        let mut inverses = vec![usize::MAX; order];
        for a in 0..order {
            inverses[a] = (0..order)
                .find(|&b| mul_table[a * order + b] == 0)
                .ok_or_else(|| Error::Internal(format!("element {a} has no inverse")))?;
        }
        let orders = (0..order)
            .map(|a| {
                let mut k = 1u32;
                let mut x = a;
                while x != 0 {
                    x = mul_table[x * order + a];
                    k += 1;
                }
                k
            })
            .collect();

        let generator_ids = generators.iter().map(|(_, m)| ElementId(lookup[m])).collect();
        let mut group = FiniteMatrixGroup {
            dim,
            elements,
            words,
            lookup,
            generator_names: generators.into_iter().map(|(n, _)| n).collect(),
            generators: generator_ids,
            mul_table,
            inverses,
            orders,
            classes: Vec::new(),
            class_of: Vec::new(),
        };
        group.compute_classes();
        Ok(group)
    }

    /// Closure of unnamed generators, labelled `g1, g2, …`.
    pub fn from_matrices(dim: usize, generators: Vec<Matrix>, cap: usize) -> Result<Self> {
        let named = generators
            .into_iter()
            .enumerate()
            .map(|(i, m)| (format!("g{}", i + 1), m))
            .collect();
        Self::generate(dim, named, cap)
    }

    fn compute_classes(&mut self) {
        let order = self.order();
        let mut class_of = vec![usize::MAX; order];
        let mut classes = Vec::new();
        for g in 0..order {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = (0..order).map(|k| self.conj_raw(k, g)).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = classes.len();
            }
            let centralizer = (0..order)
                .filter(|&h| self.mul_raw(h, g) == self.mul_raw(g, h))
                .map(ElementId)
                .collect();
            classes.push(ConjugacyClass {
                representative: ElementId(g),
                members: members.into_iter().map(ElementId).collect(),
                centralizer,
            });
        }
        self.classes = classes;
        self.class_of = class_of;
    }

    fn mul_raw(&self, a: usize, b: usize) -> usize {
        self.mul_table[a * self.order() + b]
    }

    fn conj_raw(&self, k: usize, h: usize) -> usize {
        self.mul_raw(self.mul_raw(k, h), self.inverses[k])
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn identity(&self) -> ElementId {
        ElementId(0)
    }

    pub fn ids(&self) -> impl Iterator<Item = ElementId> {
        (0..self.order()).map(ElementId)
    }

    pub fn generators(&self) -> &[ElementId] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn check(&self, g: ElementId) -> Result<ElementId> {
        if g.0 < self.order() {
            Ok(g)
        } else {
            Err(Error::ForeignElement(g.0))
        }
    }

    pub fn matrix(&self, g: ElementId) -> &Matrix {
        &self.elements[g.0]
    }

    /// BFS word for the element, e.g. `b*c` or `1`.
    pub fn word(&self, g: ElementId) -> &str {
        &self.words[g.0]
    }

    pub fn find(&self, m: &Matrix) -> Option<ElementId> {
        self.lookup.get(m).copied().map(ElementId)
    }

    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        ElementId(self.mul_raw(a.0, b.0))
    }

    pub fn inverse(&self, g: ElementId) -> ElementId {
        ElementId(self.inverses[g.0])
    }

    /// `k h k⁻¹`.
    pub fn conjugate(&self, k: ElementId, h: ElementId) -> ElementId {
        ElementId(self.conj_raw(k.0, h.0))
    }

    pub fn element_order(&self, g: ElementId) -> u32 {
        self.orders[g.0]
    }

    /// Parses a product of generator names such as `e*b`, `b^2` or `1`.
    pub fn element_from_word(&self, word: &str) -> Result<ElementId> {
        let unknown = || Error::UnknownWord(word.to_string());
        let mut acc = self.identity();
        for factor in word.split('*') {
            let factor = factor.trim();
            let (name, power) = match factor.split_once('^') {
                Some((n, p)) => (n.trim(), p.trim().parse::<u32>().map_err(|_| unknown())?),
                None => (factor, 1),
            };
            let base = if name == "1" {
                self.identity()
            } else {
                let i = self
                    .generator_names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(unknown)?;
                self.generators[i]
            };
            for _ in 0..power {
                acc = self.mul(acc, base);
            }
        }
        Ok(acc)
    }

    pub fn classes(&self) -> &[ConjugacyClass] {
        &self.classes
    }

    pub fn class(&self, index: usize) -> Result<&ConjugacyClass> {
        self.classes.get(index).ok_or(Error::InvalidClass {
            index,
            count: self.classes.len(),
        })
    }

    pub fn class_of(&self, g: ElementId) -> usize {
        self.class_of[g.0]
    }

    /// `{h : hg = gh}`, ascending.
    pub fn centralizer(&self, g: ElementId) -> Result<Vec<ElementId>> {
        self.check(g)?;
        Ok(self.ids().filter(|&h| self.mul(h, g) == self.mul(g, h)).collect())
    }

    /// Projection onto the fixed space `V^g`: the average of the powers of `g`.
    pub fn fixed_projection(&self, g: ElementId) -> Matrix {
        let m = self.matrix(g);
        let ord = self.element_order(g);
        let mut sum = Matrix::zero(self.dim);
        let mut power = Matrix::identity(self.dim);
        for _ in 0..ord {
            sum = sum.add(&power);
            power = &power * m;
        }
        sum.scale(&Rational::new(1.into(), ord.into()))
    }

    /// `gᵀ J g = J`.
    pub fn is_symplectic(&self, g: ElementId, form: &SymplecticForm) -> Result<bool> {
        is_symplectic_matrix(self.matrix(g), form)
    }

    /// Left action `^g p = p ∘ g⁻¹`.
    pub fn act_on_poly(&self, g: ElementId, p: &Polynomial) -> Result<Polynomial> {
        self.check(g)?;
        p.substitute_linear(self.matrix(self.inverse(g)))
    }

    /// Checks the multiplication table against the matrices and the group
    /// axioms; returns a description of the first failure.
    pub fn verify_table(&self) -> std::result::Result<(), String> {
        let n = self.order();
        if !self.elements[0].is_identity() {
            return Err("element 0 is not the identity".into());
        }
        for a in 0..n {
            for b in 0..n {
                let c = self.mul_raw(a, b);
                if c >= n || self.elements[c] != &self.elements[a] * &self.elements[b] {
                    return Err(format!("table entry ({a}, {b}) disagrees with the matrix product"));
                }
            }
            if self.mul_raw(a, self.inverses[a]) != 0 || self.mul_raw(self.inverses[a], a) != 0 {
                return Err(format!("element {a} has a wrong inverse entry"));
            }
        }
        let stride = if n > 64 { n / 64 } else { 1 };
        for a in (0..n).step_by(stride) {
            for b in (0..n).step_by(stride) {
                for c in (0..n).step_by(stride) {
                    if self.mul_raw(self.mul_raw(a, b), c) != self.mul_raw(a, self.mul_raw(b, c)) {
                        return Err(format!("associativity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Overwrites one multiplication-table entry. Only for exercising the
    /// self-test failure path.
    #[doc(hidden)]
    pub fn corrupt_table_for_testing(&mut self) {
        let n = self.order();
        if n > 1 {
            self.mul_table[n + 1] = (self.mul_table[n + 1] + 1) % n;
        }
    }
}

/// `mᵀ J m = J`.
pub fn is_symplectic_matrix(m: &Matrix, form: &SymplecticForm) -> Result<bool> {
    if form.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: form.dim(),
        });
    }
    Ok(&(&m.transpose() * form.matrix()) * m == *form.matrix())
}

/// Bundled generators: `b = diag(-1,-1,1,1)`, `c = diag(1,1,-1,-1)` and
/// `e` swapping `x1 ↔ x3`, `x2 ↔ x4`.
pub fn klein_swap_generators() -> Vec<(String, Matrix)> {
    let b = Matrix::from_i64_rows(&[&[-1, 0, 0, 0], &[0, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]).expect("square");
    let c = Matrix::from_i64_rows(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]).expect("square");
    let e = Matrix::from_i64_rows(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]]).expect("square");
    vec![("b".into(), b), ("c".into(), c), ("e".into(), e)]
}
