//! The JSON structure document, check reports, and the command runners
//! behind the `twoseg` binary.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{Value, json};

use crate::error::{Error, Result};
use crate::examples::{
    Functor, Graph, SmallCategory, SubgraphConvention, building, commutative_gamma, coskeleton_3,
    graph_partition_gamma, groupoid_cyclic, identity_bisection, interval_cyclic, interval_monoid,
    no_lift_family, point_cyclic, symmetric_group_3, twisted_cyclic,
};
use crate::finspan::{FinMap, FinSet, Span, SpanCell};
use crate::gammaset::{
    GammaData, check_gamma, commutative_from_gamma, from_theta_tables, gamma_from_commutative,
    mu_rho_span, theta_tables,
};
use crate::paracyclic::{
    ParacyclicData, check_cyclic, check_paracyclic, frobenius_from_paracyclic, frobenius_witnesses,
    from_tau_tables, paracyclic_from_frobenius, tau_tables,
};
use crate::pseudomonoid::{LiftVerdict, TwoTruncatedData, mult_span, search_associator_lift};
use crate::simplicial::{TruncSimplicialSet, check_2segal, check_subdivision_criterion};

pub const SCHEMA_VERSION: u32 = 1;
pub const LEVEL_ENV: &str = "TWOSEG_LEVEL";
pub const DEFAULT_LEVEL: usize = 4;

/// A level given by its size or by its element labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LevelSpec {
    Size(usize),
    Labels(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParacyclicBlock {
    pub tau: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaBlock {
    pub theta: Vec<Vec<Vec<usize>>>,
}

/// `X_1 ← apex → {•}`; the right leg is the unique map to the point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounitBlock {
    pub apex_size: usize,
    pub left: Vec<usize>,
}

/// `γ: μ ⇒ μ ∘ ρ` as a table from `X_2` to the apex of `μ ∘ ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommutativeBlock {
    pub gamma: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDocument {
    pub schema_version: u32,
    pub levels: Vec<LevelSpec>,
    /// `face[n][i]` is the table of `d_i^n`; `face[0]` is empty.
    pub face: Vec<Vec<Vec<usize>>>,
    /// `degen[n][i]` is the table of `s_i^n`, for `n < top`.
    pub degen: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paracyclic: Option<ParacyclicBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counit: Option<CounitBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commutative: Option<CommutativeBlock>,
}

impl StructureDocument {
    pub fn from_simplicial(x: &TruncSimplicialSet) -> Self {
        let top = x.top();
        StructureDocument {
            schema_version: SCHEMA_VERSION,
            levels: (0..=top)
                .map(|n| match &x.level(n).labels {
                    Some(ls) => LevelSpec::Labels(ls.clone()),
                    None => LevelSpec::Size(x.size(n)),
                })
                .collect(),
            face: (0..=top)
                .map(|n| {
                    if n == 0 {
                        vec![]
                    } else {
                        (0..=n).map(|i| x.d(n, i).table().to_vec()).collect()
                    }
                })
                .collect(),
            degen: (0..top)
                .map(|n| (0..=n).map(|i| x.s(n, i).table().to_vec()).collect())
                .collect(),
            paracyclic: None,
            gamma: None,
            counit: None,
            commutative: None,
        }
    }

    pub fn from_paracyclic(p: &ParacyclicData) -> Self {
        StructureDocument {
            paracyclic: Some(ParacyclicBlock { tau: tau_tables(p) }),
            ..StructureDocument::from_simplicial(&p.base)
        }
    }

    pub fn from_gamma(g: &GammaData) -> Self {
        StructureDocument {
            gamma: Some(GammaBlock {
                theta: theta_tables(g),
            }),
            ..StructureDocument::from_simplicial(&g.base)
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: StructureDocument = serde_json::from_str(text)?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::Invalid(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                doc.schema_version
            )));
        }
        doc.simplicial()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn simplicial(&self) -> Result<TruncSimplicialSet> {
        let levels = self
            .levels
            .iter()
            .map(|l| match l {
                LevelSpec::Size(n) => Ok(FinSet::new(*n)),
                LevelSpec::Labels(ls) => FinSet::labelled(ls.clone()),
            })
            .collect::<Result<Vec<_>>>()?;
        let sizes: Vec<usize> = levels.iter().map(|l| l.size).collect();
        let cod = |n: usize| {
            sizes
                .get(n)
                .copied()
                .ok_or(Error::Invalid(format!("no level {n}")))
        };
        let faces = self
            .face
            .iter()
            .enumerate()
            .map(|(n, row)| {
                row.iter()
                    .map(|t| FinMap::new(cod(n.wrapping_sub(1))?, t.clone()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let degens = self
            .degen
            .iter()
            .enumerate()
            .map(|(n, row)| {
                row.iter()
                    .map(|t| FinMap::new(cod(n + 1)?, t.clone()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        TruncSimplicialSet::new(levels, faces, degens)
    }

    pub fn paracyclic_data(&self) -> Result<Option<ParacyclicData>> {
        self.paracyclic
            .as_ref()
            .map(|b| from_tau_tables(self.simplicial()?, &b.tau))
            .transpose()
    }

    pub fn gamma_data(&self) -> Result<Option<GammaData>> {
        self.gamma
            .as_ref()
            .map(|b| from_theta_tables(self.simplicial()?, &b.theta))
            .transpose()
    }

    pub fn counit_span(&self) -> Result<Option<Span>> {
        let Some(c) = &self.counit else {
            return Ok(None);
        };
        let x = self.simplicial()?;
        Ok(Some(Span::new(
            FinMap::new(x.size(1), c.left.clone())?,
            FinMap::constant(c.apex_size, 1, 0),
        )?))
    }

    pub fn commutative_cell(&self) -> Result<Option<SpanCell>> {
        let Some(c) = &self.commutative else {
            return Ok(None);
        };
        let x = self.simplicial()?;
        let target = mu_rho_span(&x)?;
        let map = FinMap::new(target.apex(), c.gamma.clone())?;
        Ok(Some(SpanCell {
            source: mult_span(&x),
            target,
            map,
        }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub millis: u128,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<CheckOutcome>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.verdict == Verdict::Fail) {
            1
        } else {
            0
        }
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let v = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Skipped => "SKIP",
            };
            out.push_str(&format!("{v}  {:<20} {:>6} ms", c.name, c.millis));
            if let Some(d) = &c.detail {
                out.push_str(&format!("  {d}"));
            }
            out.push('\n');
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

/// Which checks `check` runs; with none selected, every applicable check
/// runs.
#[derive(Clone, Copy, Debug, Default)]
pub struct CheckSelection {
    pub two_segal: bool,
    pub unitality: bool,
    pub subdivisions: bool,
    pub paracyclic: bool,
    pub gamma: bool,
    pub frobenius: bool,
    pub full_hexagon: bool,
}

impl CheckSelection {
    fn any(&self) -> bool {
        self.two_segal
            || self.unitality
            || self.subdivisions
            || self.paracyclic
            || self.gamma
            || self.frobenius
    }
}

/// `(detail, witness)` of a failure, or the detail of a pass.
type Outcome = std::result::Result<Option<String>, (String, Value)>;

fn timed(name: &str, f: impl FnOnce() -> Outcome) -> CheckOutcome {
    let start = Instant::now();
    let result = f();
    let millis = start.elapsed().as_millis();
    match result {
        Ok(detail) => CheckOutcome {
            name: name.into(),
            verdict: Verdict::Pass,
            detail,
            witness: None,
            millis,
        },
        Err((detail, witness)) => CheckOutcome {
            name: name.into(),
            verdict: Verdict::Fail,
            detail: Some(detail),
            witness: Some(witness),
            millis,
        },
    }
}

fn skipped(name: &str, reason: &str) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        verdict: Verdict::Skipped,
        detail: Some(reason.into()),
        witness: None,
        millis: 0,
    }
}

fn violations<T: Serialize + std::fmt::Display>(found: &[T]) -> Outcome {
    match found.first() {
        None => Ok(None),
        Some(v) => Err((
            format!("{} violation(s), first: {v}", found.len()),
            json!(found),
        )),
    }
}

fn error_outcome(e: Error) -> (String, Value) {
    (e.to_string(), json!({ "error": e.to_string() }))
}

pub fn cmd_check(doc: &StructureDocument, sel: CheckSelection) -> Result<Report> {
    let x = doc.simplicial()?;
    let all = !sel.any();
    let mut report = Report::default();
    report.checks.push(timed("simplicial", || {
        violations(&x.check_simplicial_identities())
    }));
    if all || sel.two_segal {
        if x.top() < 3 {
            report.warnings.push(format!(
                "truncation {} has no triangulations to check",
                x.top()
            ));
        }
        report.checks.push(timed("2segal", || {
            let r = check_2segal(&x);
            match r.failures.first() {
                None => Ok(Some(format!(
                    "{} triangulation maps are bijective",
                    r.witnesses.len()
                ))),
                Some(f) => Err((
                    format!(
                        "{} fails at n={} ({}): element {}",
                        f.decomposition, f.n, f.kind, f.element
                    ),
                    json!(r.failures),
                )),
            }
        }));
    }
    if all || sel.unitality {
        report
            .checks
            .push(timed("unitality", || violations(&x.check_unitality())));
    }
    if sel.subdivisions {
        report.checks.push(timed("subdivisions", || {
            let f = check_subdivision_criterion(&x);
            match f.first() {
                None => Ok(None),
                Some(first) => Err((
                    format!("{} fails at n={}", first.decomposition, first.n),
                    json!(f),
                )),
            }
        }));
    }
    if all || sel.paracyclic {
        match doc.paracyclic_data()? {
            None => report
                .checks
                .push(skipped("paracyclic", "document has no paracyclic block")),
            Some(p) => report.checks.push(timed("paracyclic", || {
                violations(&check_paracyclic(&p))?;
                let c = check_cyclic(&p);
                Ok(Some(format!("{:?}", c.verdict).to_lowercase()))
            })),
        }
    }
    if all || sel.frobenius {
        match doc.counit_span()? {
            None => report
                .checks
                .push(skipped("frobenius", "document has no counit block")),
            Some(eps) => report.checks.push(timed("frobenius", || {
                let p = paracyclic_from_frobenius(&x, &eps).map_err(error_outcome)?;
                let c = frobenius_from_paracyclic(&p).map_err(error_outcome)?;
                let w = frobenius_witnesses(&c).map_err(error_outcome)?;
                if w.first_snake && w.second_snake {
                    Ok(Some("snake equations hold".into()))
                } else {
                    Err((
                        "snake equation fails".into(),
                        json!({"first": w.first_snake, "second": w.second_snake}),
                    ))
                }
            })),
        }
    }
    if all || sel.gamma || sel.full_hexagon {
        match doc.gamma_data()? {
            None => report
                .checks
                .push(skipped("gamma", "document has no gamma block")),
            Some(g) => {
                if x.top() < 3 {
                    report.warnings.push("the hexagon needs level 3".into());
                }
                report.checks.push(timed("gamma", || {
                    violations(&check_gamma(&g))?;
                    let r = commutative_from_gamma(&g, sel.full_hexagon).map_err(error_outcome)?;
                    if r.passed() {
                        Ok(Some(
                            if sel.full_hexagon {
                                "full symmetry and hexagon hold"
                            } else {
                                "reduced checks hold"
                            }
                            .into(),
                        ))
                    } else {
                        Err((
                            "symmetry or hexagon fails".into(),
                            json!({
                                "symmetric": r.symmetric,
                                "hexagon": r.hexagon,
                                "hexagon_witness": r.hexagon_witness,
                                "full_symmetry": r.full_symmetry,
                                "full_hexagon": r.full_hexagon,
                            }),
                        ))
                    }
                }));
            }
        }
    }
    report.checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    FrobeniusToParacyclic,
    ParacyclicToFrobenius,
    GammaToCommutative,
    CommutativeToGamma,
}

fn missing(block: &str) -> Error {
    Error::Invalid(format!("document has no {block} block"))
}

/// The derived document; the consumed block is replaced by the produced one.
pub fn cmd_derive(doc: &StructureDocument, direction: Direction) -> Result<StructureDocument> {
    let x = doc.simplicial()?;
    let mut out = doc.clone();
    match direction {
        Direction::FrobeniusToParacyclic => {
            let eps = doc.counit_span()?.ok_or_else(|| missing("counit"))?;
            let p = paracyclic_from_frobenius(&x, &eps)?;
            out.counit = None;
            out.paracyclic = Some(ParacyclicBlock {
                tau: tau_tables(&p),
            });
        }
        Direction::ParacyclicToFrobenius => {
            let p = doc
                .paracyclic_data()?
                .ok_or_else(|| missing("paracyclic"))?;
            let c = frobenius_from_paracyclic(&p)?;
            out.paracyclic = None;
            out.counit = Some(counit_block(&c.counit));
        }
        Direction::GammaToCommutative => {
            let g = doc.gamma_data()?.ok_or_else(|| missing("gamma"))?;
            let r = commutative_from_gamma(&g, true)?;
            if !r.passed() {
                return Err(Error::NotCommutative(format!(
                    "symmetric: {}, hexagon: {} (witness {:?}), full symmetry: {:?}, full hexagon: {:?}",
                    r.symmetric, r.hexagon, r.hexagon_witness, r.full_symmetry, r.full_hexagon
                )));
            }
            out.gamma = None;
            out.commutative = Some(CommutativeBlock {
                gamma: r.cell.gamma.map.table().to_vec(),
            });
        }
        Direction::CommutativeToGamma => {
            let cell = doc
                .commutative_cell()?
                .ok_or_else(|| missing("commutative"))?;
            let g = gamma_from_commutative(&x, &cell)?;
            out.commutative = None;
            out.gamma = Some(GammaBlock {
                theta: theta_tables(&g),
            });
        }
    }
    Ok(out)
}

pub fn cmd_search_lift(doc: &StructureDocument, budget: u128) -> Result<(Value, i32)> {
    let t = TwoTruncatedData::from_simplicial(&doc.simplicial()?)?;
    Ok(match search_associator_lift(&t, budget)? {
        LiftVerdict::Exists {
            associator,
            checked,
            total,
        } => (
            json!({"verdict": "lift exists", "checked": checked, "total": total, "associator": associator.map.table()}),
            0,
        ),
        LiftVerdict::NoLift {
            checked,
            total,
            reason,
        } => (
            json!({"verdict": "no lift", "checked": checked, "total": total, "reason": reason}),
            1,
        ),
        LiftVerdict::BudgetExceeded { checked, total } => (
            json!({"verdict": "budget exceeded", "checked": checked, "total": total, "budget": budget}),
            1,
        ),
    })
}

pub const EXAMPLES: &[(&str, &str)] = &[
    ("point", "the constant point with the trivial rotation"),
    (
        "cyclic-group",
        "nerve of Z/k with its cyclic structure and Gamma-structure (param k, default 2)",
    ),
    (
        "pair-groupoid",
        "nerve of the pair groupoid on k objects, cyclic (param k, default 2)",
    ),
    (
        "interval",
        "nerve of the interval monoid {0..L}, cyclic and Gamma (param L, default 2)",
    ),
    (
        "chain",
        "nerve of the chain poset on k objects (param k, default 3)",
    ),
    (
        "building",
        "building of the chain poset on k objects with the identity (param k, default 3)",
    ),
    (
        "twisted-z3",
        "twisted cyclic nerve of Z/3 with negation, paracyclic only",
    ),
    (
        "symmetric-group",
        "nerve of S3 with the bisection at a transposition, paracyclic only",
    ),
    (
        "graph-path",
        "graph partitions of the path on k vertices, Gamma (param k, default 3)",
    ),
    (
        "no-lift",
        "the 2-truncated family with |A| = a (param a, default 2)",
    ),
    (
        "coskeleton-no-lift",
        "3-coskeleton of the no-lift family; not 2-Segal (param a, default 2)",
    ),
];

/// The catalog document `name` at truncation `level`.
pub fn cmd_example(name: &str, param: Option<usize>, level: usize) -> Result<StructureDocument> {
    let with_gamma = |mut doc: StructureDocument, g: GammaData| {
        doc.gamma = Some(GammaBlock {
            theta: theta_tables(&g),
        });
        doc
    };
    Ok(match name {
        "point" => StructureDocument::from_paracyclic(&point_cyclic(level)?),
        "cyclic-group" => {
            let c = SmallCategory::cyclic_group(param.unwrap_or(2))?;
            with_gamma(
                StructureDocument::from_paracyclic(&groupoid_cyclic(
                    &c,
                    &identity_bisection(&c),
                    level,
                )?),
                commutative_gamma(&c, level)?,
            )
        }
        "pair-groupoid" => {
            let pair = SmallCategory::pair_groupoid(param.unwrap_or(2))?;
            StructureDocument::from_paracyclic(&groupoid_cyclic(
                &pair,
                &identity_bisection(&pair),
                level,
            )?)
        }
        "interval" => {
            let l = param.unwrap_or(2);
            with_gamma(
                StructureDocument::from_paracyclic(&interval_cyclic(l, level)?),
                commutative_gamma(&interval_monoid(l), level)?,
            )
        }
        "chain" => StructureDocument::from_simplicial(&crate::examples::nerve(
            &SmallCategory::chain(param.unwrap_or(3))?,
            level,
        )?),
        "building" => {
            let p = SmallCategory::chain(param.unwrap_or(3))?;
            StructureDocument::from_simplicial(&building(&p, &Functor::identity(&p), level)?)
        }
        "twisted-z3" => {
            let c = SmallCategory::cyclic_group(3)?;
            let neg = Functor {
                on_objects: vec![0],
                on_morphisms: vec![0, 2, 1],
            };
            StructureDocument::from_paracyclic(&twisted_cyclic(&c, &neg, level)?)
        }
        "symmetric-group" => StructureDocument::from_paracyclic(&groupoid_cyclic(
            &symmetric_group_3()?,
            &[3],
            level,
        )?),
        "graph-path" => StructureDocument::from_gamma(&graph_partition_gamma(
            &Graph::path(param.unwrap_or(3)),
            SubgraphConvention::Induced,
            level,
        )?),
        "no-lift" => StructureDocument::from_simplicial(&no_lift_family(param.unwrap_or(2))),
        "coskeleton-no-lift" => {
            StructureDocument::from_simplicial(&coskeleton_3(&no_lift_family(param.unwrap_or(2)))?)
        }
        other => return Err(Error::Invalid(format!("unknown example {other:?}"))),
    })
}

/// The counit span of a document, for embedding alongside its base.
pub fn counit_block(eps: &Span) -> CounitBlock {
    CounitBlock {
        apex_size: eps.apex(),
        left: eps.left.table().to_vec(),
    }
}

/// The default truncation level from the environment.
pub fn default_level() -> usize {
    std::env::var(LEVEL_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_LEVEL)
}
