use std::fs;

use serde_json::{json, Value};
use skewpoisson::algebra::{format_rational, parse_poly, Polynomial};
use skewpoisson::group::ElementId;
use skewpoisson::invariants::{is_invariant, molien_coefficients, verify_generators, verify_relations};
use skewpoisson::obstruction::{Certificate, Verdict};
use skewpoisson::scenario::{run_counterexample, Scenario, ScenarioConfig, StageError};
use skewpoisson::selftest::{run_selftest, SelftestOptions, DEFAULT_SEED};
use skewpoisson::skew::{hh0_project, in_trace_summand, SkewElement};
use skewpoisson::Error;

use crate::report::{exit, table, Report, Stage, Status};
use crate::{Cli, Command};

pub fn run(cli: &Cli) -> Report {
    match &cli.command {
        Command::Selftest { cases, corrupt_table } => cmd_selftest(&SelftestOptions {
            seed: cli.seed.unwrap_or(DEFAULT_SEED),
            cases: *cases,
            corrupt_table: *corrupt_table,
        }),
        command => {
            let name = command_name(command);
            let scenario = match load_scenario(cli) {
                Ok(s) => s,
                Err((path, message)) => {
                    return Report::new(name).fail("config", &path, &message, exit::CONFIG_ERROR);
                }
            };
            match command {
                Command::Group => cmd_group(&scenario),
                Command::Invariants => cmd_invariants(&scenario, cli.degree),
                Command::Bracket { p, q } => cmd_bracket(&scenario, p, q),
                Command::Project { terms, class } => cmd_project(&scenario, terms, class.as_deref()),
                Command::Obstruction => cmd_obstruction(&scenario, cli.degree),
                Command::Selftest { .. } => unreachable!("handled above"),
            }
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Group => "group",
        Command::Invariants => "invariants",
        Command::Bracket { .. } => "bracket",
        Command::Project { .. } => "project",
        Command::Obstruction => "obstruction",
        Command::Selftest { .. } => "selftest",
    }
}

fn load_scenario(cli: &Cli) -> Result<Scenario, (String, String)> {
    let cfg = match &cli.config {
        None => ScenarioConfig::bundled(),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| (path.display().to_string(), e.to_string()))?;
            ScenarioConfig::from_json(&text).map_err(|e| (e.path, e.message))?
        }
    };
    Scenario::from_config(&cfg).map_err(|e| (e.path, e.message))
}

fn var_name(index: usize) -> String {
    format!("x{}", index + 1)
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

/// Resolves a command-line polynomial: a scenario name or a literal.
fn resolve_poly(scenario: &Scenario, text: &str) -> skewpoisson::Result<Polynomial> {
    match scenario.named.get(text.trim()) {
        Some(p) => Ok(p.clone()),
        None => parse_poly(text, scenario.nvars),
    }
}

pub fn cmd_group(scenario: &Scenario) -> Report {
    let group = &scenario.group;
    let mut report = Report::new("group");

    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut flagged = Vec::new();
    for g in group.ids() {
        let symplectic = match group.is_symplectic(g, &scenario.form) {
            Ok(b) => b,
            Err(e) => return report.fail("elements", "symplectic_form", &e.to_string(), exit::CONFIG_ERROR),
        };
        if !symplectic {
            flagged.push(group.word(g).to_string());
        }
        let class = group.class_of(g);
        rows.push(vec![
            g.0.to_string(),
            group.word(g).to_string(),
            group.element_order(g).to_string(),
            class.to_string(),
            if symplectic { "yes".into() } else { "NO".into() },
            group.matrix(g).to_string(),
        ]);
        json_rows.push(json!({
            "id": g.0,
            "word": group.word(g),
            "order": group.element_order(g),
            "class": class,
            "symplectic": symplectic,
            "matrix": group.matrix(g).to_strings(),
        }));
    }
    let status = if flagged.is_empty() {
        Status::Ok
    } else {
        Status::Flagged
    };
    let mut text = table(&["id", "word", "order", "class", "symplectic", "matrix"], &rows);
    if !flagged.is_empty() {
        text.push(format!("not symplectic: {}", flagged.join(", ")));
    }
    report.push(Stage::new(
        "elements",
        status,
        json!({ "order": group.order(), "elements": json_rows, "not_symplectic": flagged }),
        text,
    ));

    let words = |ids: &[ElementId]| ids.iter().map(|&k| group.word(k).to_string()).collect::<Vec<_>>();
    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for (i, class) in group.classes().iter().enumerate() {
        let members = words(&class.members);
        let centralizer = words(&class.centralizer);
        rows.push(vec![
            i.to_string(),
            group.word(class.representative).to_string(),
            members.len().to_string(),
            format!("{{{}}}", members.join(", ")),
            centralizer.len().to_string(),
            format!("{{{}}}", centralizer.join(", ")),
        ]);
        json_rows.push(json!({
            "index": i,
            "representative": group.word(class.representative),
            "members": members,
            "centralizer": centralizer,
        }));
    }
    report.push(Stage::new(
        "classes",
        Status::Ok,
        json!({ "count": group.classes().len(), "classes": json_rows }),
        table(&["class", "rep", "size", "members", "|C(g)|", "centralizer"], &rows),
    ));

    let verdict = format!("order {}, {} classes", group.order(), group.classes().len());
    report.finish(verdict, exit::DECIDED)
}

pub fn cmd_invariants(scenario: &Scenario, degree: Option<u32>) -> Report {
    let group = &scenario.group;
    let gens = &scenario.generators;
    let top = degree.unwrap_or(scenario.verification_degree);
    let mut report = Report::new("invariants");
    let mut clean = true;

    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut failing = Vec::new();
    for (name, p) in gens.names.iter().zip(&gens.polys) {
        let ok = match is_invariant(group, p) {
            Ok(b) => b,
            Err(e) => return report.fail("invariance", "generator_set", &e.to_string(), exit::CONFIG_ERROR),
        };
        if !ok {
            failing.push(name.clone());
        }
        rows.push(vec![name.clone(), yes_no(ok), p.to_string()]);
        json_rows.push(json!({ "name": name, "invariant": ok, "polynomial": p.to_string() }));
    }
    let mut text = table(&["name", "invariant", "polynomial"], &rows);
    text.push(format!("{}/{} invariant", gens.len() - failing.len(), gens.len()));
    if !failing.is_empty() {
        clean = false;
        text.push(format!("not invariant: {}", failing.join(", ")));
    }
    report.push(Stage::new(
        "invariance",
        if failing.is_empty() { Status::Ok } else { Status::Failed },
        json!({ "generators": json_rows, "not_invariant": failing }),
        text,
    ));

    if !gens.is_empty() {
        let checked = verify_generators(group, gens, top).and_then(|r| {
            let molien = molien_coefficients(group, top as usize)?;
            Ok((r, molien))
        });
        let (gen_report, molien) = match checked {
            Ok(x) => x,
            Err(e) => return report.fail("molien", "generator_set", &e.to_string(), exit::CONFIG_ERROR),
        };
        let mut rows = Vec::new();
        let mut json_rows = Vec::new();
        for c in &gen_report.degrees {
            rows.push(vec![
                c.degree.to_string(),
                molien[c.degree as usize].to_string(),
                c.products.to_string(),
                c.span_rank.to_string(),
                if c.deficient() { "DEFICIENT".into() } else { "ok".into() },
            ]);
            json_rows.push(json!({
                "degree": c.degree,
                "molien": molien[c.degree as usize],
                "products": c.products,
                "span_rank": c.span_rank,
                "match": !c.deficient(),
            }));
        }
        let deficient = gen_report.deficient_degrees();
        if !deficient.is_empty() {
            clean = false;
        }
        report.push(Stage::new(
            "molien",
            if deficient.is_empty() {
                Status::Ok
            } else {
                Status::Failed
            },
            json!({ "up_to_degree": top, "degrees": json_rows, "deficient": deficient }),
            table(&["degree", "molien", "products", "span rank", "status"], &rows),
        ));
    }

    let residuals = match verify_relations(gens, &scenario.relations) {
        Ok(r) => r,
        Err(e) => return report.fail("relations", "relation_set", &e.to_string(), exit::CONFIG_ERROR),
    };
    let rows: Vec<_> = residuals
        .iter()
        .map(|r| vec![r.name.clone(), yes_no(r.vanishes()), r.residual.to_string()])
        .collect();
    let nonzero: Vec<_> = residuals
        .iter()
        .filter(|r| !r.vanishes())
        .map(|r| r.name.clone())
        .collect();
    if !nonzero.is_empty() {
        clean = false;
    }
    let mut text = if residuals.is_empty() {
        vec!["no relations".to_string()]
    } else {
        table(&["name", "vanishes", "residual"], &rows)
    };
    text.push(format!(
        "{} residuals reported, {} nonzero",
        residuals.len(),
        nonzero.len()
    ));
    report.push(Stage::new(
        "relations",
        if nonzero.is_empty() { Status::Ok } else { Status::Failed },
        json!({
            "residuals": residuals
                .iter()
                .map(|r| json!({ "name": r.name, "residual": r.residual.to_string(), "vanishes": r.vanishes() }))
                .collect::<Vec<_>>(),
            "nonzero": nonzero,
        }),
        text,
    ));

    if clean {
        report.finish("CONFIRMED", exit::DECIDED)
    } else {
        report.finish("FINDINGS", exit::INCONCLUSIVE)
    }
}

pub fn cmd_bracket(scenario: &Scenario, p: &str, q: &str) -> Report {
    let report = Report::new("bracket");
    let p = match resolve_poly(scenario, p) {
        Ok(x) => x,
        Err(e) => return report.fail("bracket", "argument P", &e.to_string(), exit::CONFIG_ERROR),
    };
    let q = match resolve_poly(scenario, q) {
        Ok(x) => x,
        Err(e) => return report.fail("bracket", "argument Q", &e.to_string(), exit::CONFIG_ERROR),
    };
    let b = match scenario.form.bracket(&p, &q) {
        Ok(x) => x,
        Err(e) => return report.fail("bracket", "symplectic_form", &e.to_string(), exit::CONFIG_ERROR),
    };
    let mut report = report;
    report.push(Stage::new(
        "bracket",
        Status::Ok,
        json!({ "p": p.to_string(), "q": q.to_string(), "bracket": b.to_string() }),
        vec![
            format!("p      = {p}"),
            format!("q      = {q}"),
            format!("{{p, q}} = {b}"),
        ],
    ));
    report.finish(b.to_string(), exit::DECIDED)
}

pub fn cmd_project(scenario: &Scenario, terms: &[String], class: Option<&str>) -> Report {
    let group = &scenario.group;
    let report = Report::new("project");
    let mut parsed = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        let path = format!("argument TERM[{i}]");
        let (poly, word) = t.rsplit_once('@').unwrap_or((t.as_str(), "1"));
        let p = match resolve_poly(scenario, poly) {
            Ok(x) => x,
            Err(e) => return report.fail("project", &path, &e.to_string(), exit::CONFIG_ERROR),
        };
        let g = match group.element_from_word(word) {
            Ok(x) => x,
            Err(e) => return report.fail("project", &path, &e.to_string(), exit::CONFIG_ERROR),
        };
        parsed.push((g, p));
    }
    let a = match SkewElement::from_terms(group, parsed) {
        Ok(x) => x,
        Err(e) => return report.fail("project", "arguments", &e.to_string(), exit::CONFIG_ERROR),
    };
    let classes: Vec<usize> = match class {
        None => (0..group.classes().len()).collect(),
        Some(word) => match group.element_from_word(word) {
            Ok(g) => vec![group.class_of(g)],
            Err(e) => return report.fail("project", "--class", &e.to_string(), exit::CONFIG_ERROR),
        },
    };

    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    let mut components = Vec::new();
    for i in classes {
        let computed = hh0_project(&a, i).and_then(|p| Ok((in_trace_summand(group, i, &p)?, p)));
        let (member, p) = match computed {
            Ok(x) => x,
            Err(e) => return report.fail("project", "arguments", &e.to_string(), exit::INTERNAL),
        };
        let cls = group.class(i).expect("valid class index");
        let members: Vec<_> = cls.members.iter().map(|&m| group.word(m).to_string()).collect();
        rows.push(vec![
            i.to_string(),
            format!("{{{}}}", members.join(", ")),
            p.to_string(),
            yes_no(member),
        ]);
        json_rows.push(json!({
            "class": i,
            "representative": group.word(cls.representative),
            "members": members,
            "component": p.to_string(),
            "in_summand": member,
        }));
        components.push(format!("{}*{}", p, group.word(cls.representative)));
    }
    let mut report = report;
    report.push(Stage::new(
        "projection",
        Status::Ok,
        json!({ "components": json_rows }),
        table(&["class", "members", "component", "in summand"], &rows),
    ));
    report.finish(components.join(" + "), exit::DECIDED)
}

fn stage_path(stage: &str) -> &'static str {
    match stage {
        "symplectic" => "group_generators",
        "generators" => "generator_set",
        "relations" => "relation_set",
        "class" => "obstruction.class_rep",
        "target" => "obstruction.phi",
        "sweep" => "obstruction.psi_sweep",
        _ => "obstruction",
    }
}

fn certificate_json(c: &Certificate) -> Value {
    json!({
        "degree_bound": c.degree_bound,
        "verdict": c.verdict.label(),
        "sigma": c.sigma.as_ref().map(|s| s.to_string()),
        "rank": c.rank_data.as_ref().map(|r| json!({
            "rows": r.rows,
            "cols": r.cols,
            "rank": r.rank,
            "augmented_rank": r.augmented_rank,
            "functional": r.functional.iter()
                .map(|(m, v)| json!([format!("{m:?}"), format_rational(v)]))
                .collect::<Vec<_>>(),
        })),
        "divisor_witness": c.divisor_witness.map(var_name),
    })
}

fn certificate_row(label: String, c: &Certificate) -> Vec<String> {
    let dash = || "-".to_string();
    vec![
        label,
        c.verdict.label().to_string(),
        c.rank_data
            .as_ref()
            .map_or_else(dash, |r| format!("{}x{}", r.rows, r.cols)),
        c.rank_data.as_ref().map_or_else(dash, |r| r.rank.to_string()),
        c.rank_data.as_ref().map_or_else(dash, |r| r.augmented_rank.to_string()),
        c.divisor_witness.map_or_else(dash, var_name),
        c.sigma.as_ref().map_or_else(dash, |s| s.to_string()),
    ]
}

const LADDER_HEADERS: [&str; 7] = ["D", "verdict", "system", "rank", "aug rank", "witness", "sigma"];

pub fn cmd_obstruction(scenario: &Scenario, degree: Option<u32>) -> Report {
    let scenario = match degree {
        Some(d) => scenario.clone().with_degree(d),
        None => scenario.clone(),
    };
    let mut report = Report::new("obstruction");
    let r = match run_counterexample(&scenario) {
        Ok(r) => r,
        Err(StageError { stage, error }) => {
            let code = if matches!(error, Error::Internal(_)) {
                exit::INTERNAL
            } else {
                exit::CONFIG_ERROR
            };
            return report.fail(stage, stage_path(stage), &error.to_string(), code);
        }
    };
    let ob = &scenario.obstruction;

    report.push(Stage::new(
        "group",
        Status::Ok,
        json!({ "order": r.group_order, "classes": r.class_count, "symplectic": r.all_symplectic }),
        vec![
            format!("order {}, {} classes", r.group_order, r.class_count),
            "every element preserves the symplectic form".to_string(),
        ],
    ));

    let failing: Vec<_> = r
        .generator_invariance
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| n.clone())
        .collect();
    report.push(Stage::new(
        "generators",
        if failing.is_empty() {
            Status::Ok
        } else {
            Status::Flagged
        },
        json!({ "count": r.generator_invariance.len(), "not_invariant": failing }),
        vec![format!(
            "{}/{} invariant",
            r.generator_invariance.len() - failing.len(),
            r.generator_invariance.len()
        )],
    ));

    let nonzero: Vec<_> = r.relation_residuals.iter().filter(|x| !x.vanishes()).collect();
    let mut text = vec![format!(
        "{}/{} relations vanish",
        r.relation_residuals.len() - nonzero.len(),
        r.relation_residuals.len()
    )];
    text.extend(nonzero.iter().map(|x| format!("{}: residual {}", x.name, x.residual)));
    report.push(Stage::new(
        "relations",
        if nonzero.is_empty() { Status::Ok } else { Status::Flagged },
        json!({
            "count": r.relation_residuals.len(),
            "nonzero": nonzero.iter().map(|x| json!({ "name": x.name, "residual": x.residual.to_string() })).collect::<Vec<_>>(),
        }),
        text,
    ));

    report.push(Stage::new(
        "class",
        Status::Ok,
        json!({ "index": r.class_index, "representative": r.class_rep, "members": r.class_members }),
        vec![format!(
            "class {} = {{{}}}, representative {}",
            r.class_index,
            r.class_members.join(", "),
            r.class_rep
        )],
    ));

    report.push(Stage::new(
        "target",
        Status::Ok,
        json!({ "phi": ob.phi.to_string(), "psi": ob.psi.to_string(), "target": r.target.to_string() }),
        vec![
            format!("phi    = {}", ob.phi),
            format!("psi    = {}", ob.psi),
            format!("target = {}", r.target),
        ],
    ));

    let rows: Vec<_> = r
        .ladder
        .iter()
        .map(|c| certificate_row(c.degree_bound.to_string(), c))
        .collect();
    let mut text = table(&LADDER_HEADERS, &rows);
    text.push("every certificate replayed".to_string());
    report.push(Stage::new(
        "ladder",
        Status::Ok,
        json!({ "certificates": r.ladder.iter().map(certificate_json).collect::<Vec<_>>() }),
        text,
    ));

    if !r.sweep.is_empty() {
        let rows: Vec<_> = r
            .sweep
            .iter()
            .map(|s| certificate_row(s.label.clone(), &s.certificate))
            .collect();
        let mut headers = LADDER_HEADERS;
        headers[0] = "psi";
        report.push(Stage::new(
            "sweep",
            Status::Ok,
            json!({
                "entries": r.sweep.iter()
                    .map(|s| json!({ "psi": s.label, "certificate": certificate_json(&s.certificate) }))
                    .collect::<Vec<_>>(),
            }),
            table(&headers, &rows),
        ));
    }

    let verdict = match (r.verdict, &r.sigma, r.witness) {
        (Verdict::Feasible, Some(s), _) => format!("FEASIBLE, sigma = {s}"),
        (Verdict::InfeasibleAllDegrees, _, Some(v)) => format!("INFEASIBLE_ALL_DEGREES, witness {}", var_name(v)),
        (Verdict::InfeasibleAtDegree, _, _) => {
            let top = r.ladder.iter().map(|c| c.degree_bound).max().unwrap_or(0);
            format!("INFEASIBLE_AT_DEGREE up to {top}")
        }
        (v, _, _) => v.label().to_string(),
    };
    let code = if r.verdict == Verdict::InfeasibleAtDegree {
        exit::INCONCLUSIVE
    } else {
        exit::DECIDED
    };
    report.finish(verdict, code)
}

pub fn cmd_selftest(options: &SelftestOptions) -> Report {
    let mut report = Report::new("selftest");
    let result = run_selftest(options);
    let rows: Vec<_> = result
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.to_string(),
                c.cases.to_string(),
                if c.passed() { "pass".into() } else { "FAIL".into() },
            ]
        })
        .collect();
    let mut text = table(&["check", "cases", "result"], &rows);
    for c in result.failures() {
        text.push(format!("{}: {}", c.name, c.failure.as_deref().unwrap_or_default()));
    }
    report.push(Stage::new(
        "properties",
        if result.passed() { Status::Ok } else { Status::Failed },
        json!({
            "seed": result.seed,
            "checks": result.checks.iter()
                .map(|c| json!({ "name": c.name, "cases": c.cases, "passed": c.passed(), "failure": c.failure }))
                .collect::<Vec<_>>(),
        }),
        text,
    ));
    if result.passed() {
        report.finish("ALL PASS", exit::DECIDED)
    } else {
        let names: Vec<_> = result.failures().map(|c| c.name).collect();
        report.finish(format!("FAILED: {}", names.join(", ")), exit::INTERNAL)
    }
}
