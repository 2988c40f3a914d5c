//! End-to-end acceptance checks on the bundled scenario. Each criterion
//! prints one PASS/FAIL line; run with `--nocapture` to see them.

use std::time::{Duration, Instant};

use clap::Parser;
use skewpoisson::algebra::rational::int;
use skewpoisson::algebra::{parse_poly, Polynomial};
use skewpoisson::group::{klein_swap_generators, FiniteMatrixGroup, DEFAULT_GROUP_CAP};
use skewpoisson::invariants::{is_invariant, verify_generators, verify_relations};
use skewpoisson::obstruction::{solve_sigma, ObstructionProblem, Verdict};
use skewpoisson::scenario::Scenario;
use skewpoisson::selftest::{run_selftest, SelftestOptions};
use skewpoisson::skew::{hh0_project, in_trace_summand, SkewElement};
use skewpoisson_cli::{run, Cli};

struct Outcome {
    passed: bool,
    detail: String,
}

fn criterion(
    results: &mut Vec<(usize, &'static str, bool)>,
    id: usize,
    name: &'static str,
    limit: Option<Duration>,
    body: impl FnOnce() -> Outcome,
) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    let passed = outcome.passed && in_time;
    let limit_text = limit.map_or(String::new(), |l| format!(" (limit {:.1}s)", l.as_secs_f64()));
    println!(
        "{} criterion {id}: {name} [{:.3}s{limit_text}] {}",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        outcome.detail
    );
    results.push((id, name, passed));
}

fn x(s: &str) -> Polynomial {
    parse_poly(s, 4).unwrap()
}

fn secs(s: f64) -> Option<Duration> {
    Some(Duration::from_secs_f64(s))
}

#[test]
fn acceptance() {
    let mut results = Vec::new();

    criterion(&mut results, 1, "group structure", secs(0.1), || {
        let s = Scenario::bundled();
        let g = &s.group;
        let b = g.element_from_word("b").unwrap();
        let class = g.class(g.class_of(b)).unwrap();
        let members: Vec<&str> = class.members.iter().map(|&m| g.word(m)).collect();
        let centralizer = g.centralizer(b).unwrap().len();
        let symplectic = g.ids().all(|h| g.is_symplectic(h, &s.form).unwrap());
        Outcome {
            passed: g.order() == 8 && g.classes().len() == 5 && members == ["b", "c"] && centralizer == 4 && symplectic,
            detail: format!(
                "|G|={}, classes={}, class(b)={{{}}}, |C(b)|={centralizer}, symplectic={symplectic}",
                g.order(),
                g.classes().len(),
                members.join(", ")
            ),
        }
    });

    criterion(&mut results, 2, "bracket reproduction", secs(0.1), || {
        let s = Scenario::bundled();
        let b = s.form.bracket(&s.named["f1"], &s.named["h1"]).unwrap();
        Outcome {
            passed: b == x("2*x1^2 + 2*x3^2"),
            detail: format!("{{f1, h1}} = {b}"),
        }
    });

    criterion(&mut results, 3, "projection reproduction", secs(0.1), || {
        let g = FiniteMatrixGroup::generate(4, klein_swap_generators(), DEFAULT_GROUP_CAP).unwrap();
        let b = g.element_from_word("b").unwrap();
        let i = g.class_of(b);
        let p = hh0_project(&SkewElement::term(&g, x("2*x1^2 + 2*x3^2"), b).unwrap(), i).unwrap();
        let member = in_trace_summand(&g, i, &p).unwrap();
        // The summand for b is spanned by x3^2, x4^2, x3*x4 in degree 2.
        let in_span = p.terms().all(|(m, _)| {
            let e = m.exponents();
            e[0] == 0 && e[1] == 0 && m.degree() == 2
        });
        Outcome {
            passed: p == x("2*x3^2") && member && in_span,
            detail: format!("P((2x1^2+2x3^2)b) = {p}*b, in summand = {member}"),
        }
    });

    criterion(&mut results, 4, "invariant generators", secs(10.0), || {
        let s = Scenario::bundled();
        let invariant = s
            .generators
            .polys
            .iter()
            .filter(|p| is_invariant(&s.group, p).unwrap())
            .count();
        let report = verify_generators(&s.group, &s.generators, 8).unwrap();
        let spans: Vec<String> = report
            .degrees
            .iter()
            .map(|c| format!("{}:{}/{}", c.degree, c.span_rank, c.invariant_dim))
            .collect();
        Outcome {
            passed: invariant == 8 && report.passed(),
            detail: format!("{invariant}/8 invariant; span/molien {}", spans.join(" ")),
        }
    });

    criterion(&mut results, 5, "relations", secs(5.0), || {
        let s = Scenario::bundled();
        let residuals = verify_relations(&s.generators, &s.relations).unwrap();
        let nonzero: Vec<String> = residuals
            .iter()
            .filter(|r| !r.vanishes())
            .map(|r| format!("{} residual {}", r.name, r.residual))
            .collect();
        // Relation 1 expanded directly from the generator polynomials.
        let n = &s.named;
        let r1 = [
            (&(&n["f1"] * &n["f2"]) * &n["h1"]).scale(&int(-1)),
            &n["f1"] * &n["h4"],
            &n["f2"] * &n["h3"],
            (&(&n["h1"] * &n["h1"]) * &n["h1"]).scale(&int(-1)),
            (&n["h1"] * &n["h2"]).scale(&int(2)),
        ]
        .iter()
        .fold(Polynomial::zero(4), |acc, t| &acc + t);
        Outcome {
            passed: residuals.len() == 9 && nonzero.is_empty() && r1.is_zero(),
            detail: if nonzero.is_empty() {
                format!("{} residuals, all zero; relation 1 by hand = {r1}", residuals.len())
            } else {
                format!("findings: {}", nonzero.join("; "))
            },
        }
    });

    criterion(&mut results, 6, "counterexample verdict", secs(5.0), || {
        let s = Scenario::bundled();
        let g = &s.group;
        let b = g.element_from_word("b").unwrap();
        let problem = ObstructionProblem::new(
            g,
            s.named["f1"].clone(),
            s.named["h1"].clone(),
            g.class_of(b),
            0,
            s.form.clone(),
        )
        .unwrap();
        let mut verdicts = Vec::new();
        let mut ok = true;
        for d in 0..=8 {
            let p = problem.with_degree(d);
            let cert = solve_sigma(g, &p).unwrap();
            ok &= cert.replay(g, &p).is_ok();
            ok &= cert.verdict == Verdict::InfeasibleAllDegrees && cert.divisor_witness == Some(3);
            ok &= cert.rank_data.as_ref().is_some_and(|r| r.augmented_rank == r.rank + 1);
            verdicts.push(cert.verdict);
        }
        Outcome {
            passed: ok,
            detail: format!("D=0..8 all {}, witness x4", verdicts[0].label()),
        }
    });

    criterion(&mut results, 7, "property suites", secs(60.0), || {
        let report = run_selftest(&SelftestOptions::default());
        let min_cases = report
            .checks
            .iter()
            .filter(|c| c.name != "group_table")
            .map(|c| c.cases)
            .min()
            .unwrap();
        let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
        Outcome {
            passed: report.passed() && min_cases >= 200,
            detail: format!(
                "{} checks, seed {}, min cases {min_cases}, failed: [{}]",
                report.checks.len(),
                report.seed,
                failed.join(", ")
            ),
        }
    });

    criterion(&mut results, 8, "determinism", None, || {
        let cli = Cli::parse_from(["skewpoisson", "obstruction", "--format", "machine"]);
        let a = cli.render(&run(&cli));
        let b = cli.render(&run(&cli));
        let exe = std::process::Command::new(env!("CARGO_BIN_EXE_skewpoisson"))
            .args(["obstruction", "--format", "machine"])
            .output()
            .unwrap();
        let c = String::from_utf8(exe.stdout).unwrap();
        Outcome {
            passed: a == b && b == c && exe.status.success(),
            detail: format!("{} bytes, two in-process runs and one process run identical", a.len()),
        }
    });

    let failed: Vec<_> = results
        .iter()
        .filter(|r| !r.2)
        .map(|r| format!("{} ({})", r.0, r.1))
        .collect();
    println!("{}/{} criteria passed", results.len() - failed.len(), results.len());
    assert!(failed.is_empty(), "failed criteria: {}", failed.join(", "));
}
