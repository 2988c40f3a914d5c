//! Scenario files and the end-to-end obstruction pipeline.
//!
//! A scenario is a JSON document naming the ambient dimension, the symplectic
//! form, the group generators, a set of named polynomials, the claimed
//! invariant generators and relations, and one obstruction problem. The whole
//! document is parsed and validated before anything is computed.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_poly, parse_poly_with_names, Matrix, Polynomial, SymplecticForm};
use crate::error::Error;
use crate::group::{FiniteMatrixGroup, DEFAULT_GROUP_CAP};
use crate::invariants::{is_invariant, verify_relations, GeneratorSet, RelationResidual, RelationSet};
use crate::obstruction::{solve_sigma, Certificate, ObstructionProblem, Verdict};

/// The reproduction scenario shipped with the library.
pub const BUNDLED_CONFIG: &str = include_str!("../scenarios/klein_swap.json");

/// Default degree bound for generator verification.
pub const DEFAULT_VERIFICATION_DEGREE: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub nvars: usize,
    pub symplectic_form: Vec<Vec<String>>,
    pub group_generators: Vec<NamedMatrix>,
    #[serde(default)]
    pub group_cap: Option<usize>,
    #[serde(default)]
    pub named_polynomials: BTreeMap<String, String>,
    #[serde(default)]
    pub generator_set: Vec<String>,
    #[serde(default)]
    pub relation_set: Vec<NamedRelation>,
    #[serde(default)]
    pub verification_degree: Option<u32>,
    pub obstruction: ObstructionConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedRelation {
    pub name: String,
    pub relation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstructionConfig {
    /// A name from `named_polynomials` or a polynomial literal.
    pub phi: String,
    pub psi: String,
    /// Group word selecting the conjugacy class, e.g. `b` or `e*b`.
    pub class_rep: String,
    pub degree_ladder: Vec<u32>,
    /// Further `ψ` to decide at the top of the ladder.
    #[serde(default)]
    pub psi_sweep: Vec<String>,
}

/// A configuration problem, located by a dotted path into the document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error at {}: {}", self.path, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn cfg_err(path: impl Into<String>, err: impl fmt::Display) -> ConfigError {
    ConfigError {
        path: path.into(),
        message: err.to_string(),
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            cfg_err(if path.is_empty() { ".".into() } else { path }, e.into_inner())
        })
    }

    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_CONFIG).expect("bundled scenario is valid")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[derive(Debug, Clone)]
pub struct ResolvedObstruction {
    pub phi: Polynomial,
    pub psi: Polynomial,
    pub class_rep: String,
    pub degree_ladder: Vec<u32>,
    pub psi_sweep: Vec<(String, Polynomial)>,
}

/// A fully parsed scenario with its group enumerated.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub nvars: usize,
    pub form: SymplecticForm,
    pub group: FiniteMatrixGroup,
    pub named: BTreeMap<String, Polynomial>,
    pub generators: GeneratorSet,
    pub relations: RelationSet,
    pub verification_degree: u32,
    pub obstruction: ResolvedObstruction,
}

impl Scenario {
    pub fn bundled() -> Self {
        Self::from_config(&ScenarioConfig::bundled()).expect("bundled scenario builds")
    }

    pub fn from_config(cfg: &ScenarioConfig) -> Result<Self, ConfigError> {
        let n = cfg.nvars;
        if n == 0 {
            return Err(cfg_err("nvars", "must be positive"));
        }
        let form_matrix = Matrix::parse_rows(&cfg.symplectic_form).map_err(|e| cfg_err("symplectic_form", e))?;
        if form_matrix.dim() != n {
            return Err(cfg_err("symplectic_form", format!("expected {n}x{n}")));
        }
        let form = SymplecticForm::new(form_matrix).map_err(|e| cfg_err("symplectic_form", e))?;

        let mut gens = Vec::with_capacity(cfg.group_generators.len());
        for (i, g) in cfg.group_generators.iter().enumerate() {
            let path = format!("group_generators[{i}]");
            if g.name.is_empty() || g.name == "1" || g.name.contains(['*', '^']) {
                return Err(cfg_err(format!("{path}.name"), "invalid generator name"));
            }
            if gens.iter().any(|(n, _): &(String, Matrix)| *n == g.name) {
                return Err(cfg_err(format!("{path}.name"), "duplicate generator name"));
            }
            let m = Matrix::parse_rows(&g.matrix).map_err(|e| cfg_err(format!("{path}.matrix"), e))?;
            if m.dim() != n {
                return Err(cfg_err(format!("{path}.matrix"), format!("expected {n}x{n}")));
            }
            gens.push((g.name.clone(), m));
        }

        let mut named = BTreeMap::new();
        for (name, text) in &cfg.named_polynomials {
            let p = parse_poly(text, n).map_err(|e| cfg_err(format!("named_polynomials.{name}"), e))?;
            named.insert(name.clone(), p);
        }

        let mut gen_polys = Vec::with_capacity(cfg.generator_set.len());
        for (i, name) in cfg.generator_set.iter().enumerate() {
            if cfg.generator_set[..i].contains(name) {
                return Err(cfg_err(
                    format!("generator_set[{i}]"),
                    format!("duplicate name {name:?}"),
                ));
            }
            let p = named
                .get(name)
                .ok_or_else(|| cfg_err(format!("generator_set[{i}]"), format!("unknown polynomial {name:?}")))?;
            gen_polys.push(p.clone());
        }
        let generators =
            GeneratorSet::new(cfg.generator_set.clone(), gen_polys).map_err(|e| cfg_err("generator_set", e))?;

        let mut relations = RelationSet {
            names: Vec::new(),
            relations: Vec::new(),
        };
        for (i, r) in cfg.relation_set.iter().enumerate() {
            let p = parse_poly_with_names(&r.relation, &cfg.generator_set)
                .map_err(|e| cfg_err(format!("relation_set[{i}].relation"), e))?;
            relations.names.push(r.name.clone());
            relations.relations.push(p);
        }

        let resolve = |path: &str, text: &str| -> Result<Polynomial, ConfigError> {
            match named.get(text.trim()) {
                Some(p) => Ok(p.clone()),
                None => parse_poly(text, n).map_err(|e| cfg_err(path, e)),
            }
        };
        let ob = &cfg.obstruction;
        if ob.degree_ladder.is_empty() {
            return Err(cfg_err("obstruction.degree_ladder", "must not be empty"));
        }
        let obstruction = ResolvedObstruction {
            phi: resolve("obstruction.phi", &ob.phi)?,
            psi: resolve("obstruction.psi", &ob.psi)?,
            class_rep: ob.class_rep.clone(),
            degree_ladder: ob.degree_ladder.clone(),
            psi_sweep: ob
                .psi_sweep
                .iter()
                .enumerate()
                .map(|(i, s)| Ok((s.clone(), resolve(&format!("obstruction.psi_sweep[{i}]"), s)?)))
                .collect::<Result<_, ConfigError>>()?,
        };

        let group = FiniteMatrixGroup::generate(n, gens, cfg.group_cap.unwrap_or(DEFAULT_GROUP_CAP))
            .map_err(|e| cfg_err("group_generators", e))?;

        Ok(Scenario {
            nvars: n,
            form,
            group,
            named,
            generators,
            relations,
            verification_degree: cfg.verification_degree.unwrap_or(DEFAULT_VERIFICATION_DEGREE),
            obstruction,
        })
    }

    /// Replaces the degree ladder by the single bound `degree`.
    pub fn with_degree(mut self, degree: u32) -> Self {
        self.obstruction.degree_ladder = vec![degree];
        self
    }
}

/// A pipeline failure and the stage it happened in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageError {
    pub stage: &'static str,
    pub error: Error,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {}: {}", self.stage, self.error)
    }
}

impl std::error::Error for StageError {}

fn at<T>(stage: &'static str, r: crate::Result<T>) -> Result<T, StageError> {
    r.map_err(|error| StageError { stage, error })
}

#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub label: String,
    pub certificate: Certificate,
}

#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub group_order: usize,
    pub class_count: usize,
    pub all_symplectic: bool,
    pub generator_invariance: Vec<(String, bool)>,
    pub relation_residuals: Vec<RelationResidual>,
    pub class_index: usize,
    pub class_rep: String,
    pub class_members: Vec<String>,
    pub target: crate::algebra::Polynomial,
    pub ladder: Vec<Certificate>,
    pub verdict: Verdict,
    pub sigma: Option<Polynomial>,
    pub witness: Option<usize>,
    pub sweep: Vec<SweepEntry>,
}

/// Combines per-degree certificates: feasibility at any bound wins, then an
/// all-degree witness, otherwise the answer is only known up to the bound.
pub fn combine_verdicts(ladder: &[Certificate]) -> Verdict {
    if ladder.iter().any(|c| c.verdict == Verdict::Feasible) {
        Verdict::Feasible
    } else if ladder.iter().any(|c| c.verdict == Verdict::InfeasibleAllDegrees) {
        Verdict::InfeasibleAllDegrees
    } else {
        Verdict::InfeasibleAtDegree
    }
}

/// Runs every stage: group checks, generator invariance, relation residuals,
/// the target, the degree ladder with certificate replay, and the sweep.
pub fn run_counterexample(scenario: &Scenario) -> Result<CounterexampleReport, StageError> {
    let group = &scenario.group;

    let mut all_symplectic = true;
    for g in group.ids() {
        if !at("symplectic", group.is_symplectic(g, &scenario.form))? {
            all_symplectic = false;
        }
    }
    if !all_symplectic {
        return Err(StageError {
            stage: "symplectic",
            error: Error::InvalidSymplecticForm("some group element does not preserve the form".into()),
        });
    }

    let generator_invariance = scenario
        .generators
        .names
        .iter()
        .zip(&scenario.generators.polys)
        .map(|(name, p)| Ok((name.clone(), is_invariant(group, p)?)))
        .collect::<crate::Result<Vec<_>>>();
    let generator_invariance = at("generators", generator_invariance)?;
    let relation_residuals = at("relations", verify_relations(&scenario.generators, &scenario.relations))?;

    if group.classes().len() < 2 {
        return Err(StageError {
            stage: "class",
            error: Error::NoNonIdentityClass,
        });
    }
    let ob = &scenario.obstruction;
    let rep = at("class", group.element_from_word(&ob.class_rep))?;
    let class_index = group.class_of(rep);
    if class_index == 0 {
        return Err(StageError {
            stage: "class",
            error: Error::IdentityElement,
        });
    }
    let class_members = group
        .class(class_index)
        .expect("valid index")
        .members
        .iter()
        .map(|&m| group.word(m).to_string())
        .collect();

    let top = *ob.degree_ladder.iter().max().expect("ladder is non-empty");
    let problem = at(
        "target",
        ObstructionProblem::new(
            group,
            ob.phi.clone(),
            ob.psi.clone(),
            class_index,
            top,
            scenario.form.clone(),
        ),
    )?;
    let mut ladder = Vec::with_capacity(ob.degree_ladder.len());
    for &d in &ob.degree_ladder {
        let p = problem.with_degree(d);
        let cert = at("solve", solve_sigma(group, &p))?;
        at("replay", cert.replay(group, &p))?;
        ladder.push(cert);
    }
    let target = ladder[0].target.clone();
    let verdict = combine_verdicts(&ladder);
    let sigma = ladder.iter().find_map(|c| c.sigma.clone());
    let witness = ladder.iter().find_map(|c| c.divisor_witness);

    let mut sweep = Vec::with_capacity(ob.psi_sweep.len());
    for (label, psi) in &ob.psi_sweep {
        let p = ObstructionProblem {
            psi: psi.clone(),
            ..problem.clone()
        };
        let cert = at("sweep", solve_sigma(group, &p))?;
        at("replay", cert.replay(group, &p))?;
        sweep.push(SweepEntry {
            label: label.clone(),
            certificate: cert,
        });
    }

    Ok(CounterexampleReport {
        group_order: group.order(),
        class_count: group.classes().len(),
        all_symplectic,
        generator_invariance,
        relation_residuals,
        class_index,
        class_rep: group
            .word(group.class(class_index).expect("valid").representative)
            .to_string(),
        class_members,
        target,
        ladder,
        verdict,
        sigma,
        witness,
        sweep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_parses() {
        let s = Scenario::bundled();
        assert_eq!(s.group.order(), 8);
        assert_eq!(s.generators.len(), 8);
        assert_eq!(s.relations.relations.len(), 9);
        assert_eq!(s.obstruction.degree_ladder, (0..=8).collect::<Vec<_>>());
    }

    #[test]
    fn bundled_run() {
        let r = run_counterexample(&Scenario::bundled()).unwrap();
        assert_eq!(r.verdict, Verdict::InfeasibleAllDegrees);
        assert_eq!(r.class_members, vec!["b", "c"]);
        assert_eq!(r.target.to_string(), "2*x3^2");
        assert_eq!(r.witness, Some(3));
        assert_eq!(r.ladder.len(), 9);
        assert!(r.generator_invariance.iter().all(|(_, ok)| *ok));
        assert!(r.relation_residuals.iter().all(|x| x.vanishes()));
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(BUNDLED_CONFIG).unwrap();
        v["obstruction"]["colour"] = serde_json::json!("red");
        let err = ScenarioConfig::from_json(&v.to_string()).unwrap_err();
        assert!(err.path.starts_with("obstruction"), "{err}");
        let mut v: serde_json::Value = serde_json::from_str(BUNDLED_CONFIG).unwrap();
        v["extra"] = serde_json::json!(1);
        assert!(ScenarioConfig::from_json(&v.to_string()).is_err());
    }

    #[test]
    fn bad_values_are_located() {
        let mut cfg = ScenarioConfig::bundled();
        cfg.named_polynomials.insert("f2".into(), "x2^2 +".into());
        assert_eq!(Scenario::from_config(&cfg).unwrap_err().path, "named_polynomials.f2");
        let mut cfg = ScenarioConfig::bundled();
        cfg.group_generators[1].matrix[0][0] = "1/0".into();
        assert_eq!(
            Scenario::from_config(&cfg).unwrap_err().path,
            "group_generators[1].matrix"
        );
        let mut cfg = ScenarioConfig::bundled();
        cfg.generator_set.push("zz".into());
        assert_eq!(Scenario::from_config(&cfg).unwrap_err().path, "generator_set[8]");
    }

    #[test]
    fn trivial_group_rejected() {
        let mut cfg = ScenarioConfig::bundled();
        cfg.group_generators.clear();
        let s = Scenario::from_config(&cfg).unwrap();
        let err = run_counterexample(&s).unwrap_err();
        assert_eq!(err.stage, "class");
        assert_eq!(err.error, Error::NoNonIdentityClass);
    }

    #[test]
    fn zero_target_variant() {
        let mut cfg = ScenarioConfig::bundled();
        cfg.obstruction.phi = "h1".into();
        cfg.obstruction.psi = "h1".into();
        let s = Scenario::from_config(&cfg).unwrap();
        let r = run_counterexample(&s).unwrap();
        assert_eq!(r.verdict, Verdict::Feasible);
        assert_eq!(r.sigma, Some(Polynomial::zero(4)));
    }
}
