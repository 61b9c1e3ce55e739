//! Registry of exactly checkable inequalities.
//!
//! Every statement is normalized to `lhs ≤ rhs`; for lower bounds such as
//! `pr(H₁, G) ≥ pr(H₂, G)` the smaller side is placed on the left. Hypotheses
//! are validated before evaluation and reported as
//! [`Error::HypothesisViolated`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::approx::{self, certificate_from_cover, CertMode};
use crate::error::{Error, Result};
use crate::group::{
    centralizer_in, commutator_subgroup, conjugacy_class_under, is_normal_subgroup, is_subgroup, quotient,
    subgroup_closure, ElementId, Group,
};
use crate::probability::commuting_probability;
use crate::rational::Rational;
use crate::subset::Subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Statement {
    P21,
    P22,
    C23a,
    C23b,
    SubMono,
    L25a,
    L25b,
    L26,
    P27,
    C28,
    P13,
    P14,
}

impl Statement {
    pub const ALL: [Statement; 12] = [
        Statement::P21,
        Statement::P22,
        Statement::C23a,
        Statement::C23b,
        Statement::SubMono,
        Statement::L25a,
        Statement::L25b,
        Statement::L26,
        Statement::P27,
        Statement::C28,
        Statement::P13,
        Statement::P14,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Statement::P21 => "P2.1",
            Statement::P22 => "P2.2",
            Statement::C23a => "C2.3a",
            Statement::C23b => "C2.3b",
            Statement::SubMono => "Sub-mono",
            Statement::L25a => "L2.5a",
            Statement::L25b => "L2.5b",
            Statement::L26 => "L2.6",
            Statement::P27 => "P2.7",
            Statement::C28 => "C2.8",
            Statement::P13 => "P1.3",
            Statement::P14 => "P1.4",
        }
    }

    /// Human-readable form of the inequality as `lhs ≤ rhs`.
    pub fn describe(self) -> &'static str {
        match self {
            Statement::P21 => "pr(A,G) <= |A^5|/|A| * pr(AN/N,G/N) * pr(A^4∩N,N)",
            Statement::P22 => "pr(A,A) <= |A^3||A^5|/|A|^2 * pr(AN/N,AN/N) * pr(A^4∩N,A^2∩N)",
            Statement::C23a => "pr(A,G) <= K^4 * pr(AN/N,G/N) * pr(A^4∩N,N)",
            Statement::C23b => "pr(A,A) <= K^6 * pr(AN/N,AN/N) * pr(A^4∩N,A^2∩N)",
            Statement::SubMono => "pr(H2,G) <= pr(H1,G) for subgroups H1 <= H2",
            Statement::L25a => "|C_A(g)| * |g^A| <= |A^2|",
            Statement::L25b => "|A| <= |C_{A^2}(g)| * |g^A|",
            Statement::L26 => "|g^{A^n}| <= K^(n-1) * |g^A|",
            Statement::P27 => "pr(A2,B)/(K K') <= pr(A1^2,B)",
            Statement::C28 => "pr(A,B)/K <= pr(H,B) for a subgroup H ⊆ A",
            Statement::P13 => "gamma/(n m) <= pr(A,G)",
            Statement::P14 => "gamma^2/(K^4 s) <= pr(A^2,A^2)",
        }
    }

    /// Set names read from an [`Instance`]; `E` is an optional cover.
    pub fn required_sets(self) -> &'static [&'static str] {
        match self {
            Statement::P21 | Statement::P22 | Statement::C23a | Statement::C23b => &["A", "N"],
            Statement::SubMono => &["H1", "H2"],
            Statement::L25a | Statement::L25b | Statement::L26 => &["A"],
            Statement::P27 => &["A1", "A2", "B"],
            Statement::C28 => &["H", "A", "B"],
            Statement::P13 => &["A", "B", "T"],
            Statement::P14 => &["A", "C"],
        }
    }

    pub fn needs_element(self) -> bool {
        matches!(self, Statement::L25a | Statement::L25b | Statement::L26)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Statement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statement::ALL
            .into_iter()
            .find(|st| st.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownStatement(s.to_string()))
    }
}

impl Serialize for Statement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for Statement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Named inputs for a statement check.
#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub group: Arc<Group>,
    pub sets: BTreeMap<String, Subset>,
    pub element: Option<ElementId>,
    pub exponent: Option<usize>,
}

impl Instance {
    pub fn new(label: impl Into<String>, group: &Arc<Group>) -> Self {
        Instance { label: label.into(), group: group.clone(), sets: BTreeMap::new(), element: None, exponent: None }
    }

    pub fn with_set(mut self, name: &str, set: Subset) -> Self {
        self.sets.insert(name.to_string(), set);
        self
    }

    pub fn with_element(mut self, g: ElementId) -> Self {
        self.element = Some(g);
        self
    }

    pub fn with_exponent(mut self, n: usize) -> Self {
        self.exponent = Some(n);
        self
    }

    pub fn set(&self, statement: Statement, name: &str) -> Result<&Subset> {
        let s = self.sets.get(name).ok_or_else(|| violated(statement, format!("missing set {name}")))?;
        if !Arc::ptr_eq(s.group(), &self.group) {
            return Err(Error::GroupMismatch);
        }
        Ok(s)
    }
}

/// Outcome of one check, normalized to `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub statement_id: Statement,
    pub instance: String,
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
    /// `rhs − lhs`.
    pub slack: Rational,
}

fn violated(statement: Statement, reason: impl Into<String>) -> Error {
    Error::HypothesisViolated { statement: statement.id().to_string(), reason: reason.into() }
}

fn require(statement: Statement, cond: bool, reason: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(violated(statement, reason))
    }
}

fn nonempty_symmetric(st: Statement, a: &Subset, name: &str) -> Result<()> {
    require(st, !a.is_empty(), &format!("{name} is empty"))?;
    require(st, a.is_symmetric(), &format!("{name} is not symmetric"))
}

fn approximate(st: Statement, a: &Subset, name: &str) -> Result<()> {
    nonempty_symmetric(st, a, name)?;
    require(st, a.contains_identity(), &format!("{name} does not contain 1"))
}

/// Certificate constant for `A`: `|E|` for a supplied cover `E` (checked),
/// otherwise a computed certificate.
fn certificate_k(st: Statement, inst: &Instance, a: &Subset) -> Result<usize> {
    match inst.sets.get("E") {
        Some(e) => {
            let cert = certificate_from_cover(a, e.clone(), CertMode::Greedy)
                .map_err(|_| violated(st, "E does not satisfy A^2 ⊆ EA"))?;
            Ok(cert.k_cert)
        }
        None => Ok(approx::certify_best(a, approx::DEFAULT_NODE_BUDGET)?.k_cert),
    }
}

fn element(st: Statement, inst: &Instance) -> Result<ElementId> {
    let g = inst.element.ok_or_else(|| violated(st, "missing element g"))?;
    if g >= inst.group.order() {
        return Err(Error::InvalidElement(g));
    }
    Ok(g)
}

fn size(s: &Subset) -> Rational {
    Rational::from(s.len())
}

/// `(pr(A,G) or pr(A,A), pr(Ā,Ḡ) or pr(Ā,Ā), pr(A⁴∩N, N or A²∩N))` for the
/// quotient statements.
fn quotient_terms(st: Statement, inst: &Instance, against_g: bool) -> Result<(Rational, Rational, Rational)> {
    let a = inst.set(st, "A")?;
    let n = inst.set(st, "N")?;
    require(st, is_normal_subgroup(n), "N is not a normal subgroup")?;
    let q = quotient(n)?;
    let bar_a = q.image(a)?;
    let a4n = a.power(4)?.intersection(n)?;
    if against_g {
        let all = Subset::full(&inst.group);
        Ok((
            commuting_probability(a, &all)?,
            commuting_probability(&bar_a, &Subset::full(q.target()))?,
            commuting_probability(&a4n, n)?,
        ))
    } else {
        let a2n = a.power(2)?.intersection(n)?;
        Ok((commuting_probability(a, a)?, commuting_probability(&bar_a, &bar_a)?, commuting_probability(&a4n, &a2n)?))
    }
}

/// Evaluates one registered statement on an instance.
pub fn check(statement: Statement, inst: &Instance) -> Result<CheckResult> {
    let st = statement;
    let (lhs, rhs) = match st {
        Statement::P21 | Statement::C23a => {
            let a = inst.set(st, "A")?;
            if st == Statement::P21 {
                nonempty_symmetric(st, a, "A")?;
            } else {
                approximate(st, a, "A")?;
            }
            let (pr, pr_bar, pr_n) = quotient_terms(st, inst, true)?;
            let factor = if st == Statement::P21 {
                Rational::ratio(a.power(5)?.len(), a.len())
            } else {
                Rational::from(certificate_k(st, inst, a)?).pow(4)
            };
            (pr, factor * pr_bar * pr_n)
        }
        Statement::P22 | Statement::C23b => {
            let a = inst.set(st, "A")?;
            if st == Statement::P22 {
                nonempty_symmetric(st, a, "A")?;
            } else {
                approximate(st, a, "A")?;
            }
            let (pr, pr_bar, pr_n) = quotient_terms(st, inst, false)?;
            let factor = if st == Statement::P22 {
                Rational::ratio(a.power(3)?.len() * a.power(5)?.len(), a.len() * a.len())
            } else {
                Rational::from(certificate_k(st, inst, a)?).pow(6)
            };
            (pr, factor * pr_bar * pr_n)
        }
        Statement::SubMono => {
            let h1 = inst.set(st, "H1")?;
            let h2 = inst.set(st, "H2")?;
            require(st, is_subgroup(h1) && is_subgroup(h2), "H1 and H2 must be subgroups")?;
            require(st, h1.is_subset_of(h2)?, "H1 is not contained in H2")?;
            let all = Subset::full(&inst.group);
            (commuting_probability(h2, &all)?, commuting_probability(h1, &all)?)
        }
        Statement::L25a | Statement::L25b => {
            let a = inst.set(st, "A")?;
            nonempty_symmetric(st, a, "A")?;
            let g = element(st, inst)?;
            let class = conjugacy_class_under(g, a).len();
            if st == Statement::L25a {
                (Rational::from(centralizer_in(a, g).len() * class), size(&a.power(2)?))
            } else {
                (size(a), Rational::from(centralizer_in(&a.power(2)?, g).len() * class))
            }
        }
        Statement::L26 => {
            let a = inst.set(st, "A")?;
            approximate(st, a, "A")?;
            let g = element(st, inst)?;
            let n = inst.exponent.ok_or_else(|| violated(st, "missing exponent n"))?;
            require(st, (1..=8).contains(&n), "exponent n must lie in 1..=8")?;
            let k = certificate_k(st, inst, a)?;
            let lhs = conjugacy_class_under(g, &a.power(n)?).len();
            (Rational::from(lhs), Rational::from(k).pow(n as u32 - 1) * Rational::from(conjugacy_class_under(g, a).len()))
        }
        Statement::P27 => {
            let a1 = inst.set(st, "A1")?;
            let a2 = inst.set(st, "A2")?;
            let b = inst.set(st, "B")?;
            nonempty_symmetric(st, a1, "A1")?;
            nonempty_symmetric(st, a2, "A2")?;
            require(st, a1.is_subset_of(a2)?, "A1 is not contained in A2")?;
            require(st, !b.is_empty(), "B is empty")?;
            let k = Rational::ratio(a1.power(2)?.len(), a1.len());
            let k2 = Rational::ratio(a2.power(2)?.len(), a2.len());
            (commuting_probability(a2, b)? / (k * k2), commuting_probability(&a1.power(2)?, b)?)
        }
        Statement::C28 => {
            let h = inst.set(st, "H")?;
            let a = inst.set(st, "A")?;
            let b = inst.set(st, "B")?;
            approximate(st, a, "A")?;
            require(st, is_subgroup(h), "H is not a subgroup")?;
            require(st, h.is_subset_of(a)?, "H is not contained in A")?;
            require(st, !b.is_empty(), "B is empty")?;
            let k = Rational::from(certificate_k(st, inst, a)?);
            (commuting_probability(a, b)? / k, commuting_probability(h, b)?)
        }
        Statement::P13 => {
            let a = inst.set(st, "A")?;
            let b = inst.set(st, "B")?;
            let t = inst.set(st, "T")?;
            require(st, !a.is_empty(), "A is empty")?;
            require(st, is_subgroup(t), "T is not a subgroup")?;
            let gamma = Rational::ratio(a.intersection_len(b)?, a.len());
            let n = inst.group.order() / t.len();
            let m = commutator_subgroup(t, &subgroup_closure(b))?.len();
            (gamma / Rational::from(n * m), commuting_probability(a, &Subset::full(&inst.group))?)
        }
        Statement::P14 => {
            let a = inst.set(st, "A")?;
            let c = inst.set(st, "C")?;
            approximate(st, a, "A")?;
            require(st, is_subgroup(c), "C is not a subgroup")?;
            let k = Rational::from(certificate_k(st, inst, a)?);
            let a2 = a.power(2)?;
            let gamma = Rational::ratio(c.intersection_len(&a2)?, a.len());
            let s = commutator_subgroup(c, c)?.len();
            (gamma.pow(2) / (k.pow(4) * Rational::from(s)), commuting_probability(&a2, &a2)?)
        }
    };
    let slack = &rhs - &lhs;
    Ok(CheckResult { statement_id: st, instance: inst.label.clone(), holds: lhs <= rhs, lhs, rhs, slack })
}

/// [`check`] by statement id string.
pub fn check_id(statement_id: &str, inst: &Instance) -> Result<CheckResult> {
    check(statement_id.parse()?, inst)
}
