//! Seeded statement suite over a corpus of groups.
//!
//! Each statement is checked on structured instances built from the corpus
//! (named subsets, normal subgroups, class representatives) followed by
//! `random_instances_per_statement` random instances. Random instance `i` of
//! statement `s` draws from its own ChaCha8 stream, selected with
//! `set_stream((s << 32) | i)` on a generator seeded by `seed_from_u64(seed)`,
//! so any single instance can be regenerated in isolation.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{self, CertMode};
use crate::error::{Error, Result};
use crate::group::{center, normal_subgroups, subgroup_closure, ElementId, Group};
use crate::rational::Rational;
use crate::registry::{check, CheckResult, Instance, Statement};
use crate::spec::{default_order_cap, GroupSpec, ResolvedGroup};
use crate::subset::Subset;
use crate::witness::{witness_theorem_1_1, witness_theorem_1_2, PipelineOptions, WitnessReport, SCHEMA_VERSION};

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_RANDOM_INSTANCES: usize = 500;
pub const DEFAULT_SUITE_CLASS_CAP: usize = 64;
/// Upper bound on structured instances per (statement, group).
const STRUCTURED_LIMIT: usize = 200;

/// The default corpus: cyclic, dihedral, symmetric and alternating groups up
/// to order 200, `Q8`, `Q16`, `S3×C2` and three example-family groups.
pub fn default_corpus() -> Vec<GroupSpec> {
    let mut corpus: Vec<GroupSpec> = [1, 2, 3, 4, 5, 6, 7, 8, 9, 12, 16, 30].into_iter().map(GroupSpec::cyclic).collect();
    corpus.extend([3, 4, 5, 6, 8, 10, 12, 25, 50].into_iter().map(GroupSpec::dihedral));
    corpus.extend([3, 4, 5].into_iter().map(GroupSpec::symmetric));
    corpus.extend([4, 5].into_iter().map(GroupSpec::alternating));
    corpus.extend([2, 4].into_iter().map(GroupSpec::dicyclic));
    corpus.push(GroupSpec::product(vec![GroupSpec::symmetric(3), GroupSpec::cyclic(2)]));
    corpus.extend([(3, 1, 1), (4, 2, 1), (5, 2, 2)].into_iter().map(|(n, k, u)| GroupSpec::example(n, k, u)));
    corpus
}

fn default_random_instances() -> usize {
    DEFAULT_RANDOM_INSTANCES
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_class_cap() -> usize {
    DEFAULT_SUITE_CLASS_CAP
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteConfig {
    #[serde(default = "default_corpus")]
    pub corpus: Vec<GroupSpec>,
    /// Statements to run; empty means all.
    #[serde(default)]
    pub statements: Vec<Statement>,
    #[serde(default = "default_random_instances")]
    pub random_instances_per_statement: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_order_cap")]
    pub order_cap: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    /// Worker threads; `None` uses all cores.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(default = "default_class_cap")]
    pub class_cap: usize,
    /// Whether to run the witness pipelines on every corpus group.
    #[serde(default = "default_true")]
    pub witnesses: bool,
    /// Restricts the run to one instance key (e.g. `S3/s4` or `r17`).
    #[serde(skip)]
    pub only_instance: Option<String>,
    /// Path the config was loaded from, used in reproduction commands.
    #[serde(skip)]
    pub config_path: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            corpus: default_corpus(),
            statements: Vec::new(),
            random_instances_per_statement: DEFAULT_RANDOM_INSTANCES,
            seed: DEFAULT_SEED,
            order_cap: default_order_cap(),
            output_path: None,
            jobs: None,
            class_cap: DEFAULT_SUITE_CLASS_CAP,
            witnesses: true,
            only_instance: None,
            config_path: None,
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &str) -> Result<Self> {
        let mut config = Self::from_json(&std::fs::read_to_string(path)?)?;
        config.config_path = Some(path.to_string());
        Ok(config)
    }

    fn selected_statements(&self) -> Vec<Statement> {
        if self.statements.is_empty() {
            Statement::ALL.to_vec()
        } else {
            let mut s = self.statements.clone();
            s.sort();
            s.dedup();
            s
        }
    }
}

/// Symmetric subset containing 1: each inverse pair `{x, x⁻¹}` is kept
/// independently with probability `density`, scanning pairs by least id.
pub fn random_symmetric_subset(group: &Arc<Group>, density: &Rational, rng: &mut impl Rng) -> Result<Subset> {
    let (p, q) = density_parts(density)?;
    let ids = (1..group.order()).filter(|&x| x <= group.inv(x)).filter(|_| rng.random_range(0..q) < p);
    let mut ids: Vec<ElementId> = ids.collect();
    ids.extend(ids.clone().into_iter().map(|x| group.inv(x)));
    ids.push(group.identity());
    Subset::from_ids(group, ids)
}

/// Nonempty subset keeping each element with probability `density`.
pub fn random_subset(group: &Arc<Group>, density: &Rational, rng: &mut impl Rng) -> Result<Subset> {
    let (p, q) = density_parts(density)?;
    let mut ids: Vec<ElementId> = (0..group.order()).filter(|_| rng.random_range(0..q) < p).collect();
    if ids.is_empty() {
        ids.push(rng.random_range(0..group.order()));
    }
    Subset::from_ids(group, ids)
}

fn density_parts(density: &Rational) -> Result<(u64, u64)> {
    let bad = || Error::BadParams(format!("density {density} must lie in (0, 1]"));
    if !density.is_positive() || *density > Rational::one() {
        return Err(bad());
    }
    Ok((density.numer().to_u64().ok_or_else(bad)?, density.denom().to_u64().ok_or_else(bad)?))
}

/// Corpus group with the data used to build structured and random instances.
#[derive(Debug, Clone)]
pub struct CorpusGroup {
    pub resolved: ResolvedGroup,
    pub normals: Vec<Subset>,
    /// Normal subgroups plus cyclic subgroups of class representatives.
    pub subgroups: Vec<Subset>,
    pub class_reps: Vec<ElementId>,
    /// Named symmetric sets containing 1, with a certificate cover each.
    pub named_sets: Vec<(String, Subset, Subset)>,
}

impl CorpusGroup {
    pub fn prepare(spec: &GroupSpec, order_cap: usize, class_cap: usize) -> Result<Self> {
        let resolved = spec.resolve(order_cap)?;
        let group = resolved.group.clone();
        let normals = normal_subgroups(&group, class_cap)?;
        let class_reps: Vec<ElementId> = group.conjugacy_classes().iter().map(|c| c[0]).collect();
        let mut subgroups = normals.clone();
        for &x in &class_reps {
            let h = subgroup_closure(&Subset::from_ids(&group, [x])?);
            if !subgroups.contains(&h) {
                subgroups.push(h);
            }
        }
        subgroups.sort_by(|a, b| (a.len(), a.to_vec()).cmp(&(b.len(), b.to_vec())));

        let mut named = vec![("G".to_string(), Subset::full(&group))];
        match &resolved.example {
            Some(ex) => {
                for role in ["A", "A0", "H", "Z"] {
                    named.push((role.to_string(), ex.role(role).expect("known role")));
                }
            }
            None => named.push(("Z".to_string(), center(&group))),
        }
        let mut named_sets = Vec::new();
        for (name, set) in named {
            if named_sets.iter().any(|(_, s, _): &(String, Subset, Subset)| *s == set) {
                continue;
            }
            let cert = approx::prune_cover(&approx::certify_best(&set, approx::DEFAULT_NODE_BUDGET)?)?;
            named_sets.push((name, set, cert.cover));
        }
        Ok(CorpusGroup { resolved, normals, subgroups, class_reps, named_sets })
    }

    pub fn label(&self) -> &str {
        &self.resolved.label
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.resolved.group
    }
}

/// An instance with its key and a readable description.
#[derive(Debug, Clone)]
struct Case {
    instance: Instance,
    description: String,
}

fn case(key: String, group: &Arc<Group>, description: String) -> Case {
    Case { instance: Instance::new(key, group), description }
}

fn structured_cases(st: Statement, cg: &CorpusGroup) -> Vec<Case> {
    let g = cg.group();
    let label = cg.label();
    let mut out: Vec<(Instance, String)> = Vec::new();
    let inst = || Instance::new(String::new(), g);
    let full = Subset::full(g);
    match st {
        Statement::P21 | Statement::P22 | Statement::C23a | Statement::C23b => {
            for (name, a, e) in &cg.named_sets {
                for (j, n) in cg.normals.iter().enumerate() {
                    let i = inst().with_set("A", a.clone()).with_set("N", n.clone()).with_set("E", e.clone());
                    out.push((i, format!("A={name} N=normal#{j}(|N|={})", n.len())));
                }
            }
        }
        Statement::SubMono => {
            for (i, h1) in cg.subgroups.iter().enumerate() {
                for (j, h2) in cg.subgroups.iter().enumerate() {
                    if h1.is_subset_of(h2).unwrap_or(false) {
                        let x = inst().with_set("H1", h1.clone()).with_set("H2", h2.clone());
                        out.push((x, format!("H1=subgroup#{i}(|H1|={}) H2=subgroup#{j}(|H2|={})", h1.len(), h2.len())));
                    }
                }
            }
        }
        Statement::L25a | Statement::L25b | Statement::L26 => {
            let exponents: &[usize] = if st == Statement::L26 { &[1, 2, 3] } else { &[1] };
            for (name, a, e) in &cg.named_sets {
                for &g0 in &cg.class_reps {
                    for &n in exponents {
                        let mut x = inst().with_set("A", a.clone()).with_set("E", e.clone()).with_element(g0);
                        let mut d = format!("A={name} g={g0}");
                        if st == Statement::L26 {
                            x = x.with_exponent(n);
                            d.push_str(&format!(" n={n}"));
                        }
                        out.push((x, d));
                    }
                }
            }
        }
        Statement::P27 => {
            for (n1, a1, _) in &cg.named_sets {
                for (n2, a2, _) in &cg.named_sets {
                    if !a1.is_subset_of(a2).unwrap_or(false) {
                        continue;
                    }
                    for (nb, b) in [("G", &full), (n2.as_str(), a2), (n1.as_str(), a1)] {
                        let x = inst().with_set("A1", a1.clone()).with_set("A2", a2.clone()).with_set("B", b.clone());
                        out.push((x, format!("A1={n1} A2={n2} B={nb}")));
                    }
                }
            }
        }
        Statement::C28 => {
            for (i, h) in cg.subgroups.iter().enumerate() {
                for (name, a, e) in &cg.named_sets {
                    if !h.is_subset_of(a).unwrap_or(false) {
                        continue;
                    }
                    for (nb, b) in [("G", &full), (name.as_str(), a)] {
                        let x = inst().with_set("H", h.clone()).with_set("A", a.clone()).with_set("E", e.clone());
                        out.push((x.with_set("B", b.clone()), format!("H=subgroup#{i} A={name} B={nb}")));
                    }
                }
            }
        }
        Statement::P13 => {
            for (na, a, _) in &cg.named_sets {
                for (nb, b, _) in &cg.named_sets {
                    for (j, t) in cg.normals.iter().enumerate() {
                        let x = inst().with_set("A", a.clone()).with_set("B", b.clone()).with_set("T", t.clone());
                        out.push((x, format!("A={na} B={nb} T=normal#{j}")));
                    }
                }
            }
        }
        Statement::P14 => {
            for (name, a, e) in &cg.named_sets {
                for (i, c) in cg.subgroups.iter().enumerate() {
                    let x = inst().with_set("A", a.clone()).with_set("C", c.clone()).with_set("E", e.clone());
                    out.push((x, format!("A={name} C=subgroup#{i}(|C|={})", c.len())));
                }
            }
        }
    }
    out.truncate(STRUCTURED_LIMIT);
    out.into_iter()
        .enumerate()
        .map(|(idx, (mut instance, description))| {
            instance.label = format!("{label}/s{idx}");
            Case { instance, description: format!("{label} {description}") }
        })
        .collect()
}

const DENSITIES: [(i64, i64); 7] = [(1, 32), (1, 16), (1, 8), (1, 4), (1, 2), (3, 4), (1, 1)];

fn stream_rng(seed: u64, st: Statement, idx: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = Statement::ALL.iter().position(|&x| x == st).expect("registered") as u64;
    rng.set_stream((s << 32) | idx as u64);
    rng
}

fn pick_density(rng: &mut impl Rng) -> Rational {
    let (p, q) = DENSITIES[rng.random_range(0..DENSITIES.len())];
    Rational::new(p, q)
}

fn random_cyclic_or_pair(g: &Arc<Group>, rng: &mut impl Rng) -> Result<Subset> {
    let mut gens = vec![rng.random_range(0..g.order())];
    if rng.random_bool(0.5) {
        gens.push(rng.random_range(0..g.order()));
    }
    Ok(subgroup_closure(&Subset::from_ids(g, gens)?))
}

fn greedy_cover(a: &Subset) -> Result<Subset> {
    Ok(approx::certify(a, CertMode::Greedy)?.cover)
}

/// Random instance `idx` of `st`, regenerated from its own stream.
fn random_case(st: Statement, idx: usize, seed: u64, corpus: &[CorpusGroup]) -> Result<Case> {
    let mut rng = stream_rng(seed, st, idx);
    let cg = &corpus[rng.random_range(0..corpus.len())];
    let g = cg.group();
    let mut c = case(format!("r{idx}"), g, String::new());
    let d = pick_density(&mut rng);
    let mut desc = format!("{} density={d}", cg.label());
    let i = std::mem::replace(&mut c.instance, Instance::new(String::new(), g));
    let i = match st {
        Statement::P21 | Statement::P22 | Statement::C23a | Statement::C23b => {
            let a = random_symmetric_subset(g, &d, &mut rng)?;
            let j = rng.random_range(0..cg.normals.len());
            desc.push_str(&format!(" |A|={} N=normal#{j}", a.len()));
            let e = greedy_cover(&a)?;
            i.with_set("A", a).with_set("N", cg.normals[j].clone()).with_set("E", e)
        }
        Statement::SubMono => {
            let h1 = random_cyclic_or_pair(g, &mut rng)?;
            let extra = rng.random_range(0..g.order());
            let h2 = subgroup_closure(&h1.union(&Subset::from_ids(g, [extra])?)?);
            desc.push_str(&format!(" |H1|={} |H2|={}", h1.len(), h2.len()));
            i.with_set("H1", h1).with_set("H2", h2)
        }
        Statement::L25a | Statement::L25b | Statement::L26 => {
            let mut a = random_symmetric_subset(g, &d, &mut rng)?;
            if st != Statement::L26 && a.len() > 1 && rng.random_bool(0.5) {
                a = a.difference(&Subset::identity(g))?;
            }
            let x = rng.random_range(0..g.order());
            desc.push_str(&format!(" |A|={} g={x}", a.len()));
            let mut i = i.with_element(x);
            if st == Statement::L26 {
                let n = rng.random_range(1..=4);
                desc.push_str(&format!(" n={n}"));
                i = i.with_exponent(n).with_set("E", greedy_cover(&a)?);
            }
            i.with_set("A", a)
        }
        Statement::P27 => {
            let a1 = random_symmetric_subset(g, &d, &mut rng)?;
            let d2 = pick_density(&mut rng);
            let a2 = a1.union(&random_symmetric_subset(g, &d2, &mut rng)?)?;
            let db = pick_density(&mut rng);
            let b = random_subset(g, &db, &mut rng)?;
            desc.push_str(&format!(" |A1|={} |A2|={} |B|={}", a1.len(), a2.len(), b.len()));
            i.with_set("A1", a1).with_set("A2", a2).with_set("B", b)
        }
        Statement::C28 => {
            let h = random_cyclic_or_pair(g, &mut rng)?;
            let a = h.union(&random_symmetric_subset(g, &d, &mut rng)?)?;
            let db = pick_density(&mut rng);
            let b = random_subset(g, &db, &mut rng)?;
            desc.push_str(&format!(" |H|={} |A|={} |B|={}", h.len(), a.len(), b.len()));
            let e = greedy_cover(&a)?;
            i.with_set("H", h).with_set("A", a).with_set("B", b).with_set("E", e)
        }
        Statement::P13 => {
            let a = random_subset(g, &d, &mut rng)?;
            let db = pick_density(&mut rng);
            let b = if rng.random_bool(0.25) {
                a.intersection(&random_subset(g, &db, &mut rng)?)?
            } else {
                random_subset(g, &db, &mut rng)?
            };
            let t = if rng.random_bool(0.5) {
                cg.normals[rng.random_range(0..cg.normals.len())].clone()
            } else {
                random_cyclic_or_pair(g, &mut rng)?
            };
            desc.push_str(&format!(" |A|={} |B|={} |T|={}", a.len(), b.len(), t.len()));
            i.with_set("A", a).with_set("B", b).with_set("T", t)
        }
        Statement::P14 => {
            let a = random_symmetric_subset(g, &d, &mut rng)?;
            let c = if rng.random_bool(0.5) {
                cg.normals[rng.random_range(0..cg.normals.len())].clone()
            } else {
                random_cyclic_or_pair(g, &mut rng)?
            };
            desc.push_str(&format!(" |A|={} |C|={}", a.len(), c.len()));
            let e = greedy_cover(&a)?;
            i.with_set("A", a).with_set("C", c).with_set("E", e)
        }
    };
    c.instance = Instance { label: format!("r{idx}"), ..i };
    c.description = desc;
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub instance: String,
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub repro: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementSummary {
    pub id: Statement,
    pub inequality: String,
    pub instances: usize,
    pub structured: usize,
    pub random: usize,
    pub failures: usize,
    pub min_slack: Option<Rational>,
    pub tightest_instance: Option<String>,
    pub tightest_description: Option<String>,
    pub failure_records: Vec<FailureRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub label: String,
    pub order: usize,
    pub classes: usize,
    pub normal_subgroups: usize,
    pub abelian: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub group: String,
    pub subset: String,
    pub theorem: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<WitnessReport>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: u64,
    pub corpus_ms: u64,
    pub statements_ms: BTreeMap<String, u64>,
    pub witnesses_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub seed: u64,
    pub order_cap: usize,
    pub class_cap: usize,
    pub random_instances_per_statement: usize,
    pub corpus: Vec<CorpusSummary>,
    pub statements: Vec<StatementSummary>,
    pub witnesses: Vec<WitnessEntry>,
    pub total_checks: usize,
    pub failures: usize,
    pub timing: Timing,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Pretty JSON with the `timing` field removed; equal for equal inputs.
    pub fn payload_json(&self) -> Result<String> {
        let mut value = serde_json::to_value(self)?;
        if let Some(map) = value.as_object_mut() {
            map.remove("timing");
        }
        Ok(serde_json::to_string_pretty(&value)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn repro(config: &SuiteConfig, st: Statement, key: &str) -> String {
    let path = config.config_path.as_deref().unwrap_or("config.json");
    format!("approxcommute verify --config {path} --statements {} --instance {key}", st.id())
}

fn summarize(config: &SuiteConfig, st: Statement, structured: usize, outcomes: Vec<(Case, Result<CheckResult>)>) -> StatementSummary {
    let mut summary = StatementSummary {
        id: st,
        inequality: st.describe().to_string(),
        instances: outcomes.len(),
        structured,
        random: outcomes.len() - structured,
        failures: 0,
        min_slack: None,
        tightest_instance: None,
        tightest_description: None,
        failure_records: Vec::new(),
    };
    for (case, outcome) in outcomes {
        let key = case.instance.label.clone();
        match outcome {
            Ok(r) => {
                if summary.min_slack.as_ref().is_none_or(|m| r.slack < *m) {
                    summary.min_slack = Some(r.slack.clone());
                    summary.tightest_instance = Some(key.clone());
                    summary.tightest_description = Some(case.description.clone());
                }
                if !r.holds {
                    summary.failures += 1;
                    summary.failure_records.push(FailureRecord {
                        repro: repro(config, st, &key),
                        instance: key,
                        description: case.description,
                        lhs: Some(r.lhs),
                        rhs: Some(r.rhs),
                        error: None,
                    });
                }
            }
            Err(e) => {
                summary.failures += 1;
                summary.failure_records.push(FailureRecord {
                    repro: repro(config, st, &key),
                    instance: key,
                    description: case.description,
                    lhs: None,
                    rhs: None,
                    error: Some(e.to_string()),
                });
            }
        }
    }
    summary
}

fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

fn witness_entries(cg: &CorpusGroup, opts: &PipelineOptions) -> Vec<WitnessEntry> {
    let mut targets = vec![("G".to_string(), Subset::full(cg.group()))];
    if let Some(ex) = &cg.resolved.example {
        targets.push(("A".to_string(), ex.a.clone()));
    }
    let mut out = Vec::new();
    for (name, a) in targets {
        let runs: [(&str, Result<WitnessReport>); 2] = [
            ("1.1", witness_theorem_1_1(&a, None, opts).map(|w| w.report(cg.label()))),
            ("1.2", witness_theorem_1_2(&a, None, opts).map(|w| w.report(cg.label()))),
        ];
        for (theorem, run) in runs {
            let (ok, error, report) = match run {
                Ok(r) => (true, None, Some(r)),
                Err(e) => (false, Some(e.to_string()), None),
            };
            out.push(WitnessEntry { group: cg.label().to_string(), subset: name.clone(), theorem: theorem.into(), ok, error, report });
        }
    }
    out
}

fn run_inner(config: &SuiteConfig) -> Result<Report> {
    let start = Instant::now();
    if config.corpus.is_empty() {
        return Err(Error::SpecParse("corpus is empty".into()));
    }
    let corpus: Vec<CorpusGroup> = config
        .corpus
        .par_iter()
        .map(|spec| CorpusGroup::prepare(spec, config.order_cap, config.class_cap))
        .collect::<Result<_>>()?;
    let mut timing = Timing { corpus_ms: elapsed_ms(start), ..Timing::default() };

    let mut statements = Vec::new();
    for st in config.selected_statements() {
        let t = Instant::now();
        let mut cases: Vec<Case> = corpus.iter().flat_map(|cg| structured_cases(st, cg)).collect();
        let random: Vec<Case> = (0..config.random_instances_per_statement)
            .into_par_iter()
            .map(|idx| random_case(st, idx, config.seed, &corpus))
            .collect::<Result<_>>()?;
        cases.extend(random);
        if let Some(only) = &config.only_instance {
            cases.retain(|c| &c.instance.label == only);
        }
        let structured = cases.iter().filter(|c| c.instance.label.contains('/')).count();
        let outcomes: Vec<(Case, Result<CheckResult>)> = cases
            .into_par_iter()
            .map(|c| {
                let r = check(st, &c.instance);
                (c, r)
            })
            .collect();
        statements.push(summarize(config, st, structured, outcomes));
        timing.statements_ms.insert(st.id().to_string(), elapsed_ms(t));
    }

    let t = Instant::now();
    let witnesses: Vec<WitnessEntry> = if config.witnesses && config.only_instance.is_none() {
        let opts = PipelineOptions { class_cap: config.class_cap, ..PipelineOptions::default() };
        let per_group: Vec<Vec<WitnessEntry>> = corpus.par_iter().map(|cg| witness_entries(cg, &opts)).collect();
        per_group.into_iter().flatten().collect()
    } else {
        Vec::new()
    };
    timing.witnesses_ms = elapsed_ms(t);

    let failures =
        statements.iter().map(|s| s.failures).sum::<usize>() + witnesses.iter().filter(|w| !w.ok).count();
    let total_checks = statements.iter().map(|s| s.instances).sum::<usize>() + witnesses.len();
    let corpus_summary = corpus
        .iter()
        .map(|cg| CorpusSummary {
            label: cg.label().to_string(),
            order: cg.group().order(),
            classes: cg.group().conjugacy_classes().len(),
            normal_subgroups: cg.normals.len(),
            abelian: cg.group().is_abelian(),
        })
        .collect();
    timing.total_ms = elapsed_ms(start);
    Ok(Report {
        schema: SCHEMA_VERSION.into(),
        seed: config.seed,
        order_cap: config.order_cap,
        class_cap: config.class_cap,
        random_instances_per_statement: config.random_instances_per_statement,
        corpus: corpus_summary,
        statements,
        witnesses,
        total_checks,
        failures,
        timing,
    })
}

/// Runs the suite; the report (minus timing) depends only on the config.
/// With `jobs = Some(n)` the work runs on a dedicated pool of `n` threads.
pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    let report = match config.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::BadParams(format!("thread pool: {e}")))?;
            pool.install(|| run_inner(config))?
        }
        None => run_inner(config)?,
    };
    if let Some(path) = &config.output_path {
        std::fs::write(path, report.to_json()?)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    #[test]
    fn symmetric_subsets() {
        let g = named::symmetric(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(random_symmetric_subset(&g, &Rational::one(), &mut rng).unwrap().is_full());
        for _ in 0..50 {
            let s = random_symmetric_subset(&g, &Rational::new(1, 2), &mut rng).unwrap();
            assert!(s.is_symmetric() && s.contains_identity());
        }
        let a = random_symmetric_subset(&g, &Rational::new(1, 2), &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = random_symmetric_subset(&g, &Rational::new(1, 2), &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
        assert!(random_symmetric_subset(&g, &Rational::zero(), &mut rng).is_err());
    }

    #[test]
    fn trivial_corpus_passes() {
        let config = SuiteConfig {
            corpus: vec![GroupSpec::cyclic(1)],
            random_instances_per_statement: 5,
            ..SuiteConfig::default()
        };
        let report = run_suite(&config).unwrap();
        assert!(report.passed(), "{}", report.to_json().unwrap());
        assert_eq!(report.statements.len(), 12);
    }

    #[test]
    fn random_case_is_reproducible_alone() {
        let corpus = vec![CorpusGroup::prepare(&GroupSpec::symmetric(4), 2000, 64).unwrap()];
        for st in Statement::ALL {
            let a = random_case(st, 11, 1, &corpus).unwrap();
            let b = random_case(st, 11, 1, &corpus).unwrap();
            assert_eq!(a.description, b.description);
            assert_eq!(a.instance.sets, b.instance.sets);
        }
    }
}
