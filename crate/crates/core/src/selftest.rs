//! Randomized self-checks of the algebraic laws the library relies on.
//!
//! Every check draws its cases from a ChaCha stream seeded from the run seed,
//! so a run is reproducible from `(seed, cases)` alone.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::rational::{int, rat};
use crate::algebra::{Matrix, Monomial, Polynomial, SymplecticForm};
use crate::error::Result;
use crate::group::{klein_swap_generators, ElementId, FiniteMatrixGroup, DEFAULT_GROUP_CAP};
use crate::invariants::{invariant_basis, is_invariant_exhaustive, molien_coefficients, reynolds};
use crate::skew::{hh0_project, in_trace_summand, inner_derivation_g_part, SkewElement, TraceVector};

pub const DEFAULT_SEED: u64 = 20_070_101;
pub const DEFAULT_CASES: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestOptions {
    pub seed: u64,
    pub cases: usize,
    /// Corrupts the multiplication table of the bundled group before the
    /// table check runs.
    pub corrupt_table: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            seed: DEFAULT_SEED,
            cases: DEFAULT_CASES,
            corrupt_table: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    /// Description of the first violating case.
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Names of all checks, in run order.
pub const CHECK_NAMES: &[&str] = &[
    "group_table",
    "ring_axioms",
    "poisson_antisymmetry",
    "poisson_leibniz",
    "poisson_jacobi",
    "skew_associativity",
    "commutator_trace_vanishing",
    "projection_idempotence",
    "conjugation_invariance",
    "inner_derivation_vanishing",
    "reynolds_idempotence",
    "molien_vs_brute_force",
];

type Verdict = Result<Option<String>>;

fn violated(cond: bool, describe: impl FnOnce() -> String) -> Verdict {
    Ok(if cond { None } else { Some(describe()) })
}

fn run_cases(
    name: &'static str,
    seed: u64,
    cases: usize,
    mut case: impl FnMut(&mut ChaCha8Rng) -> Verdict,
) -> CheckOutcome {
    let index = CHECK_NAMES.iter().position(|n| *n == name).unwrap_or(0) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    for i in 0..cases {
        let failure = match case(&mut rng) {
            Ok(None) => continue,
            Ok(Some(msg)) => format!("case {i}: {msg}"),
            Err(e) => format!("case {i}: error: {e}"),
        };
        return CheckOutcome {
            name,
            cases: i + 1,
            failure: Some(failure),
        };
    }
    CheckOutcome {
        name,
        cases,
        failure: None,
    }
}

/// A sparse polynomial with 1 to `max_terms` terms of degree at most
/// `max_degree` and small, occasionally fractional, coefficients.
pub fn random_poly<R: Rng>(rng: &mut R, nvars: usize, max_degree: u32, max_terms: usize) -> Polynomial {
    let mut p = Polynomial::zero(nvars);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let mut exps = vec![0u32; nvars];
        for _ in 0..rng.gen_range(0..=max_degree) {
            exps[rng.gen_range(0..nvars)] += 1;
        }
        let num = *[-3, -2, -1, 1, 2, 3].choose(rng).expect("non-empty");
        let den = *[1, 1, 1, 2, 3].choose(rng).expect("non-empty");
        p = &p + &Polynomial::monomial(Monomial::new(exps), rat(num, den));
    }
    p
}

pub fn random_skew<'g, R: Rng>(
    rng: &mut R,
    group: &'g FiniteMatrixGroup,
    max_degree: u32,
    max_terms: usize,
) -> Result<SkewElement<'g>> {
    let ids: Vec<ElementId> = group.ids().collect();
    let terms = (0..rng.gen_range(1..=max_terms))
        .map(|_| {
            let g = *ids.choose(rng).expect("group is non-empty");
            (g, random_poly(rng, group.dim(), max_degree, 3))
        })
        .collect::<Vec<_>>();
    SkewElement::from_terms(group, terms)
}

/// A random signed permutation matrix of size `dim`.
pub fn random_signed_permutation<R: Rng>(rng: &mut R, dim: usize) -> Matrix {
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(rng);
    let rows = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    if perm[i] == j {
                        if rng.gen_bool(0.5) {
                            int(1)
                        } else {
                            int(-1)
                        }
                    } else {
                        int(0)
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows).expect("square")
}

/// The group generated by one or two random signed permutations.
pub fn random_signed_permutation_group<R: Rng>(rng: &mut R, dim: usize) -> Result<FiniteMatrixGroup> {
    let count = rng.gen_range(1..=2);
    let gens = (0..count).map(|_| random_signed_permutation(rng, dim)).collect();
    FiniteMatrixGroup::from_matrices(dim, gens, DEFAULT_GROUP_CAP)
}

fn bundled_group() -> FiniteMatrixGroup {
    FiniteMatrixGroup::generate(4, klein_swap_generators(), DEFAULT_GROUP_CAP).expect("bundled group")
}

/// `(1/ord g) Σ_j ^{g^j} p`, a polynomial fixed by `g`.
fn average_over_powers(group: &FiniteMatrixGroup, g: ElementId, p: &Polynomial) -> Result<Polynomial> {
    let mut sum = Polynomial::zero(p.nvars());
    let mut power = group.identity();
    let order = group.element_order(g);
    for _ in 0..order {
        sum = &sum + &group.act_on_poly(power, p)?;
        power = group.mul(power, g);
    }
    Ok(sum.scale(&rat(1, order as i64)))
}

pub fn run_selftest(options: &SelftestOptions) -> SelftestReport {
    let seed = options.seed;
    let n = options.cases;
    let mut group = bundled_group();
    if options.corrupt_table {
        group.corrupt_table_for_testing();
    }
    let form = SymplecticForm::darboux(2);
    let mut checks = Vec::with_capacity(CHECK_NAMES.len());

    checks.push(CheckOutcome {
        name: "group_table",
        cases: 1,
        failure: group.verify_table().err(),
    });
    // Later checks assume a sound table.
    let group = if options.corrupt_table { bundled_group() } else { group };
    let g = &group;

    checks.push(run_cases("ring_axioms", seed, n, |rng| {
        let p = random_poly(rng, 4, 4, 4);
        let q = random_poly(rng, 4, 4, 4);
        let r = random_poly(rng, 4, 4, 4);
        let assoc = &(&p * &q) * &r == &p * &(&q * &r);
        let comm = &p * &q == &q * &p;
        let distrib = &p * &(&q + &r) == &(&p * &q) + &(&p * &r);
        let add_inverse = (&p + &(-&p)).is_zero() && &p + &(-&q) == &p - &q;
        let unit = &p * &Polynomial::one(4) == p;
        violated(assoc && comm && distrib && add_inverse && unit, || {
            format!("p={p}, q={q}, r={r}")
        })
    }));

    checks.push(run_cases("poisson_antisymmetry", seed, n, |rng| {
        let p = random_poly(rng, 4, 4, 4);
        let q = random_poly(rng, 4, 4, 4);
        let pq = form.bracket(&p, &q)?;
        let qp = form.bracket(&q, &p)?;
        violated(pq == -&qp && form.bracket(&p, &p)?.is_zero(), || {
            format!("p={p}, q={q}")
        })
    }));

    checks.push(run_cases("poisson_leibniz", seed, n, |rng| {
        let p = random_poly(rng, 4, 4, 3);
        let q = random_poly(rng, 4, 4, 3);
        let r = random_poly(rng, 4, 4, 3);
        let lhs = form.bracket(&p, &(&q * &r))?;
        let rhs = &(&form.bracket(&p, &q)? * &r) + &(&q * &form.bracket(&p, &r)?);
        violated(lhs == rhs, || format!("p={p}, q={q}, r={r}"))
    }));

    checks.push(run_cases("poisson_jacobi", seed, n, |rng| {
        let p = random_poly(rng, 4, 4, 3);
        let q = random_poly(rng, 4, 4, 3);
        let r = random_poly(rng, 4, 4, 3);
        let a = form.bracket(&p, &form.bracket(&q, &r)?)?;
        let b = form.bracket(&q, &form.bracket(&r, &p)?)?;
        let c = form.bracket(&r, &form.bracket(&p, &q)?)?;
        violated((&(&a + &b) + &c).is_zero(), || format!("p={p}, q={q}, r={r}"))
    }));

    checks.push(run_cases("skew_associativity", seed, n, |rng| {
        let a = random_skew(rng, g, 3, 3)?;
        let b = random_skew(rng, g, 3, 3)?;
        let c = random_skew(rng, g, 3, 3)?;
        let left = a.try_mul(&b)?.try_mul(&c)?;
        let right = a.try_mul(&b.try_mul(&c)?)?;
        violated(left == right, || format!("a={a:?}, b={b:?}, c={c:?}"))
    }));

    checks.push(run_cases("commutator_trace_vanishing", seed, n, |rng| {
        let a = random_skew(rng, g, 3, 3)?;
        let b = random_skew(rng, g, 3, 3)?;
        let t = TraceVector::of(&a.commutator(&b)?)?;
        violated(t.is_zero(), || format!("a={a:?}, b={b:?}, trace={t:?}"))
    }));

    checks.push(run_cases("projection_idempotence", seed, n, |rng| {
        let a = random_skew(rng, g, 3, 4)?;
        let i = rng.gen_range(0..g.classes().len());
        let rep = g.class(i)?.representative;
        let q = hh0_project(&a, i)?;
        let again = hh0_project(&SkewElement::term(g, q.clone(), rep)?, i)?;
        violated(again == q && in_trace_summand(g, i, &q)?, || {
            format!("a={a:?}, class={i}")
        })
    }));

    checks.push(run_cases("conjugation_invariance", seed, n, |rng| {
        let a = random_skew(rng, g, 3, 3)?;
        let ids: Vec<ElementId> = g.ids().collect();
        let u = *ids.choose(rng).expect("non-empty");
        let us = SkewElement::term(g, Polynomial::one(4), u)?;
        let uinv = SkewElement::term(g, Polynomial::one(4), g.inverse(u))?;
        let conj = us.try_mul(&a)?.try_mul(&uinv)?;
        violated(TraceVector::of(&conj)? == TraceVector::of(&a)?, || {
            format!("a={a:?}, u={}", g.word(u))
        })
    }));

    checks.push(run_cases("inner_derivation_vanishing", seed, n, |rng| {
        let a = random_skew(rng, g, 3, 3)?;
        for h in g.ids().filter(|&h| h != g.identity()) {
            let x = average_over_powers(g, h, &random_poly(rng, 4, 3, 3))?;
            let part = inner_derivation_g_part(&a, &x, h)?;
            if !part.is_zero() {
                return Ok(Some(format!("a={a:?}, x={x}, g={}", g.word(h))));
            }
        }
        Ok(None)
    }));

    checks.push(run_cases("reynolds_idempotence", seed, n, |rng| {
        let p = random_poly(rng, 4, 4, 4);
        let r = reynolds(g, &p)?;
        violated(reynolds(g, &r)? == r && is_invariant_exhaustive(g, &r)?, || {
            format!("p={p}")
        })
    }));

    checks.push(molien_check(g, seed, n));

    SelftestReport { seed, checks }
}

/// Molien coefficients against invariant-space dimensions counted by linear
/// algebra: the bundled group up to degree 8, then random signed permutation
/// groups up to degree 6 until `cases` degree comparisons have been made.
fn molien_check(group: &FiniteMatrixGroup, seed: u64, cases: usize) -> CheckOutcome {
    const RANDOM_TOP: u32 = 6;
    let index = CHECK_NAMES
        .iter()
        .position(|n| *n == "molien_vs_brute_force")
        .unwrap_or(0) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);

    let compare = |grp: &FiniteMatrixGroup, top: u32, label: &str| -> Result<Option<String>> {
        let molien = molien_coefficients(grp, top as usize)?;
        for d in 0..=top {
            let brute = invariant_basis(grp, d)?.len() as u64;
            if molien[d as usize] != brute {
                return Ok(Some(format!(
                    "{label}, degree {d}: molien {} vs brute force {brute}",
                    molien[d as usize]
                )));
            }
        }
        Ok(None)
    };

    let mut done = 0usize;
    let mut groups = 0usize;
    let mut outcome = compare(group, 8, "bundled group");
    done += 9;
    // At least three random groups, however small `cases` is.
    while matches!(outcome, Ok(None)) && (done < cases || groups < 3) {
        let dim = rng.gen_range(2..=4);
        outcome = random_signed_permutation_group(&mut rng, dim).and_then(|grp| {
            let label = format!("random group {groups} (dim {dim}, order {})", grp.order());
            compare(&grp, RANDOM_TOP, &label)
        });
        groups += 1;
        done += RANDOM_TOP as usize + 1;
    }
    CheckOutcome {
        name: "molien_vs_brute_force",
        cases: done,
        failure: match outcome {
            Ok(None) => None,
            Ok(Some(msg)) => Some(msg),
            Err(e) => Some(format!("error: {e}")),
        },
    }
}
