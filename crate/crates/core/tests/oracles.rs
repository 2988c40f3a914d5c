//! Cross-checks against independent, deliberately naive computations.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use proptest::prelude::*;
use skewpoisson::algebra::rational::{int, rat};
use skewpoisson::algebra::{parse_poly, Matrix, Monomial, Polynomial, Rational, SymplecticForm};
use skewpoisson::group::{klein_swap_generators, FiniteMatrixGroup, DEFAULT_GROUP_CAP};
use skewpoisson::invariants::{invariant_basis, molien_coefficients};
use skewpoisson::obstruction::collapse_to_sigma;
use skewpoisson::skew::{hh0_project, in_trace_summand, SkewElement};

fn group() -> FiniteMatrixGroup {
    FiniteMatrixGroup::generate(4, klein_swap_generators(), DEFAULT_GROUP_CAP).unwrap()
}

fn x(s: &str) -> Polynomial {
    parse_poly(s, 4).unwrap()
}

/// All products of generators, closed by brute force.
fn naive_closure(gens: &[Matrix]) -> BTreeSet<Vec<Vec<String>>> {
    let mut set: Vec<Matrix> = vec![Matrix::identity(gens[0].dim())];
    loop {
        let mut grown = false;
        for a in set.clone() {
            for g in gens {
                let p = &a * g;
                if !set.contains(&p) {
                    set.push(p);
                    grown = true;
                }
            }
        }
        if !grown {
            return set.iter().map(Matrix::to_strings).collect();
        }
    }
}

#[test]
fn closure_matches_naive() {
    let g = group();
    let gens: Vec<Matrix> = klein_swap_generators().into_iter().map(|(_, m)| m).collect();
    let naive = naive_closure(&gens);
    let enumerated: BTreeSet<_> = g.ids().map(|h| g.matrix(h).to_strings()).collect();
    assert_eq!(naive.len(), 8);
    assert_eq!(enumerated, naive);
}

#[test]
fn classes_match_naive_conjugation() {
    let g = group();
    let mats: Vec<Matrix> = g.ids().map(|h| g.matrix(h).clone()).collect();
    let mut naive: BTreeSet<BTreeSet<Vec<Vec<String>>>> = BTreeSet::new();
    for h in &mats {
        let orbit = mats
            .iter()
            .map(|k| (&(k * h) * &k.inverse().unwrap()).to_strings())
            .collect();
        naive.insert(orbit);
    }
    let ours: BTreeSet<BTreeSet<_>> = g
        .classes()
        .iter()
        .map(|c| c.members.iter().map(|&m| g.matrix(m).to_strings()).collect())
        .collect();
    assert_eq!(ours, naive);
    for c in g.classes() {
        let rep = g.matrix(c.representative);
        let naive_centralizer = mats.iter().filter(|k| *k * rep == rep * *k).count();
        assert_eq!(c.centralizer.len(), naive_centralizer);
    }
}

fn expand_product(p: &Polynomial, q: &Polynomial) -> BTreeMap<Vec<u32>, Rational> {
    let mut out: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for (m, a) in p.terms() {
        for (n, b) in q.terms() {
            let e: Vec<u32> = m.exponents().iter().zip(n.exponents()).map(|(i, j)| i + j).collect();
            *out.entry(e).or_insert_with(Rational::zero) += a * b;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn as_map(p: &Polynomial) -> BTreeMap<Vec<u32>, Rational> {
    p.terms().map(|(m, c)| (m.exponents().to_vec(), c.clone())).collect()
}

fn darboux_four_term(p: &Polynomial, q: &Polynomial) -> Polynomial {
    let d = |f: &Polynomial, i: usize| f.partial_derivative(i).unwrap();
    let first = &(&d(p, 0) * &d(q, 1)) - &(&d(p, 1) * &d(q, 0));
    let second = &(&d(p, 2) * &d(q, 3)) - &(&d(p, 3) * &d(q, 2));
    &first + &second
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..=3, 4), -6i64..=6, 1i64..=4), 0..=5).prop_map(|terms| {
        let mut p = Polynomial::zero(4);
        for (e, n, d) in terms {
            p = &p + &Polynomial::monomial(Monomial::new(e), rat(n, d));
        }
        p
    })
}

proptest! {
    #[test]
    fn product_matches_expansion(p in poly(), q in poly()) {
        prop_assert_eq!(as_map(&(&p * &q)), expand_product(&p, &q));
    }

    #[test]
    fn bracket_matches_four_term_formula(p in poly(), q in poly()) {
        let form = SymplecticForm::darboux(2);
        prop_assert_eq!(form.bracket(&p, &q).unwrap(), darboux_four_term(&p, &q));
    }

    #[test]
    fn scaled_form_scales_bracket(p in poly(), q in poly()) {
        let form = SymplecticForm::darboux(2);
        let doubled = SymplecticForm::new(form.matrix().scale(&int(2))).unwrap();
        prop_assert_eq!(doubled.bracket(&p, &q).unwrap(), darboux_four_term(&p, &q).scale(&rat(1, 2)));
    }
}

#[test]
fn molien_matches_independent_series() {
    // Series of the bundled group, expanded separately from the Molien formula.
    let expected = [1, 0, 3, 0, 11, 0, 22, 0, 45];
    let g = group();
    assert_eq!(molien_coefficients(&g, 8).unwrap(), expected);
    for (d, &e) in expected.iter().enumerate() {
        assert_eq!(invariant_basis(&g, d as u32).unwrap().len() as u64, e);
    }
}

#[test]
fn first_relation_by_hand() {
    let f1 = x("x1^2 + x3^2");
    let f2 = x("x2^2 + x4^2");
    let h1 = x("x1*x2 + x3*x4");
    let h2 = x("x1^2*x2^2 + x3^2*x4^2");
    let h3 = x("x1^2*x3*x4 + x1*x2*x3^2");
    let h4 = x("x1*x2*x4^2 + x2^2*x3*x4");
    // -f1 f2 h1 + f1 h4 + f2 h3 - h1^3 + 2 h1 h2
    let terms = [
        (&(&f1 * &f2) * &h1).scale(&int(-1)),
        &f1 * &h4,
        &f2 * &h3,
        (&(&h1 * &h1) * &h1).scale(&int(-1)),
        (&h1 * &h2).scale(&int(2)),
    ];
    let total = terms.iter().fold(Polynomial::zero(4), |acc, t| &acc + t);
    assert!(total.is_zero(), "residual {total}");
}

#[test]
fn projection_of_bracket_times_b() {
    let g = group();
    let b = g.element_from_word("b").unwrap();
    let i = g.class_of(b);
    let a = SkewElement::term(&g, x("2*x1^2 + 2*x3^2"), b).unwrap();
    let p = hh0_project(&a, i).unwrap();
    assert_eq!(p, x("2*x3^2"));
    assert!(in_trace_summand(&g, i, &p).unwrap());
    for q in ["x3^2", "x4^2", "x3*x4"] {
        assert!(in_trace_summand(&g, i, &x(q)).unwrap());
    }
    assert!(!in_trace_summand(&g, i, &x("x3")).unwrap());
    assert!(!in_trace_summand(&g, i, &x("x1^2")).unwrap());
}

#[test]
fn collapse_example() {
    let g = group();
    let b = g.element_from_word("b").unwrap();
    let d = SkewElement::term(&g, x("x3*x4"), b).unwrap();
    assert_eq!(collapse_to_sigma(&d, b).unwrap(), x("4*x3*x4"));
    assert!(collapse_to_sigma(&SkewElement::zero(&g), b).unwrap().is_zero());
    let e = g.element_from_word("e").unwrap();
    let off = SkewElement::term(&g, x("x1"), e).unwrap();
    assert!(collapse_to_sigma(&off, b).unwrap().is_zero());
}

#[test]
fn degree_two_invariants() {
    let g = group();
    let basis = invariant_basis(&g, 2).unwrap();
    assert_eq!(basis, vec![x("x1^2 + x3^2"), x("x1*x2 + x3*x4"), x("x2^2 + x4^2")]);
}
