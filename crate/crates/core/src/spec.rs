//! JSON and shorthand specifications for groups and subsets.
//!
//! Group specs are tagged by `kind`:
//!
//! ```json
//! {"kind": "table", "table": [[0, 1], [1, 0]]}
//! {"kind": "perm", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]}
//! {"kind": "family", "name": "example1", "n": 5, "k": 2, "u": 2}
//! {"kind": "family", "name": "dihedral", "n": 4}
//! {"kind": "product", "factors": [{"kind": "family", "name": "symmetric", "n": 3}, ...]}
//! ```
//!
//! Any spec may carry a display `label`. Shorthands such as `S3`, `D4`, `Q8`,
//! `Dic3`, `C12`, `A5`, `Ex(5,2,2)` and `S3xC2` parse to the same specs.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{build_example, ExampleInstance, ExampleParams};
use crate::group::{center, subgroup_closure, ElementId, Group};
use crate::named;
use crate::subset::Subset;

pub const ORDER_CAP_ENV: &str = "APPROXCOMMUTE_ORDER_CAP";
pub const DEFAULT_ORDER_CAP: usize = 2000;

/// Order cap from `APPROXCOMMUTE_ORDER_CAP`, or [`DEFAULT_ORDER_CAP`].
pub fn default_order_cap() -> usize {
    std::env::var(ORDER_CAP_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_ORDER_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupKind {
    Table {
        table: Vec<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
    },
    Perm {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
    Family {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        u: Option<usize>,
    },
    Product {
        factors: Vec<GroupSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    #[serde(flatten)]
    pub kind: GroupKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// A constructed group with its display label and, for the example family,
/// the constructed subsets.
#[derive(Debug, Clone)]
pub struct ResolvedGroup {
    pub label: String,
    pub group: Arc<Group>,
    pub example: Option<ExampleInstance>,
}

fn family(name: &str, n: usize) -> GroupSpec {
    GroupSpec { kind: GroupKind::Family { name: name.into(), n: Some(n), k: None, u: None }, label: None }
}

impl GroupSpec {
    pub fn cyclic(n: usize) -> Self {
        family("cyclic", n)
    }

    pub fn dihedral(n: usize) -> Self {
        family("dihedral", n)
    }

    pub fn dicyclic(n: usize) -> Self {
        family("dicyclic", n)
    }

    pub fn symmetric(n: usize) -> Self {
        family("symmetric", n)
    }

    pub fn alternating(n: usize) -> Self {
        family("alternating", n)
    }

    pub fn example(n: usize, k: usize, u: usize) -> Self {
        GroupSpec {
            kind: GroupKind::Family { name: "example1".into(), n: Some(n), k: Some(k), u: Some(u) },
            label: None,
        }
    }

    pub fn product(factors: Vec<GroupSpec>) -> Self {
        GroupSpec { kind: GroupKind::Product { factors }, label: None }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Inline JSON (starting with `{`), a path to a JSON file, or a shorthand.
    pub fn parse_arg(arg: &str) -> Result<Self> {
        let arg = arg.trim();
        if arg.starts_with('{') {
            return Self::from_json(arg);
        }
        if Path::new(arg).is_file() {
            return Self::from_json(&std::fs::read_to_string(arg)?);
        }
        Self::from_shorthand(arg)
    }

    /// Parses `C5`, `D4` (order 8), `Q8`, `Q16`, `Dic3`, `S4`, `A5`,
    /// `Ex(n,k,u)` and products joined by `x`, e.g. `S3xC2`.
    pub fn from_shorthand(s: &str) -> Result<Self> {
        let parts = split_product(s);
        if parts.len() > 1 {
            let factors = parts.iter().map(|p| Self::from_shorthand(p)).collect::<Result<Vec<_>>>()?;
            return Ok(Self::product(factors));
        }
        let bad = || Error::SpecParse(format!("unrecognized group shorthand {s:?}"));
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("Ex(").and_then(|r| r.strip_suffix(')')) {
            let nums: Vec<usize> =
                inner.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
            return match nums[..] {
                [n, k, u] => Ok(Self::example(n, k, u)),
                _ => Err(bad()),
            };
        }
        let split = s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
        let (prefix, digits) = s.split_at(split);
        let n: usize = digits.parse().map_err(|_| bad())?;
        match prefix {
            "C" => Ok(Self::cyclic(n)),
            "D" => Ok(Self::dihedral(n)),
            "S" => Ok(Self::symmetric(n)),
            "A" => Ok(Self::alternating(n)),
            "Dic" => Ok(Self::dicyclic(n)),
            "Q" if n >= 8 && n.is_power_of_two() => Ok(Self::dicyclic(n / 4)),
            _ => Err(bad()),
        }
    }

    /// Label used when none is given.
    pub fn default_label(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        match &self.kind {
            GroupKind::Table { table, .. } => format!("table({})", table.len()),
            GroupKind::Perm { degree, generators } => format!("perm({degree};{})", generators.len()),
            GroupKind::Family { name, n, k, u } => {
                let n = n.unwrap_or(0);
                match name.as_str() {
                    "cyclic" => format!("C{n}"),
                    "dihedral" => format!("D{n}"),
                    "symmetric" => format!("S{n}"),
                    "alternating" => format!("A{n}"),
                    "dicyclic" | "quaternion" if n >= 2 && n.is_power_of_two() => format!("Q{}", 4 * n),
                    "dicyclic" | "quaternion" => format!("Dic{n}"),
                    _ => format!("Ex({},{},{})", n, k.unwrap_or(0), u.unwrap_or(0)),
                }
            }
            GroupKind::Product { factors } => {
                factors.iter().map(|f| f.default_label()).collect::<Vec<_>>().join("x")
            }
        }
    }

    /// Order of the group when it is known without constructing it.
    fn predicted_order(&self) -> Option<usize> {
        match &self.kind {
            GroupKind::Table { table, .. } => Some(table.len()),
            GroupKind::Perm { .. } => None,
            GroupKind::Family { name, n, k, u } => {
                let n = (*n)?;
                match name.as_str() {
                    "cyclic" => Some(n),
                    "dihedral" => n.checked_mul(2),
                    "dicyclic" | "quaternion" => n.checked_mul(4),
                    "symmetric" => (1..=n).try_fold(1usize, |acc, i| acc.checked_mul(i)),
                    "alternating" => (1..=n).try_fold(1usize, |acc, i| acc.checked_mul(i)).map(|f| (f / 2).max(1)),
                    "example1" => {
                        let params = ExampleParams { n, k: k.unwrap_or(1), u_order: u.unwrap_or(1) };
                        params.validate().ok().map(|_| params.group_order())
                    }
                    _ => None,
                }
            }
            GroupKind::Product { factors } => {
                factors.iter().try_fold(1usize, |acc, f| f.predicted_order().and_then(|o| acc.checked_mul(o)))
            }
        }
    }

    pub fn resolve(&self, order_cap: usize) -> Result<ResolvedGroup> {
        if let Some(order) = self.predicted_order() {
            if order > order_cap {
                return Err(Error::OrderCapExceeded { order, cap: order_cap });
            }
        }
        let label = self.default_label();
        let mut example = None;
        let group = match &self.kind {
            GroupKind::Table { table, labels } => Group::from_table_with_labels(table.clone(), labels.clone())?,
            GroupKind::Perm { degree, generators } => Group::from_permutations(*degree, generators, order_cap)?,
            GroupKind::Family { name, n, k, u } => {
                let need = |v: &Option<usize>, what: &str| {
                    v.ok_or_else(|| Error::SpecParse(format!("family {name} needs parameter {what}")))
                };
                match name.as_str() {
                    "example1" => {
                        let params = ExampleParams::new(need(n, "n")?, need(k, "k")?, need(u, "u")?)?;
                        let inst = build_example(params, order_cap)?;
                        let group = inst.group.clone();
                        example = Some(inst);
                        group
                    }
                    "cyclic" => named::cyclic(need(n, "n")?)?,
                    "dihedral" => named::dihedral(need(n, "n")?)?,
                    "dicyclic" | "quaternion" => named::dicyclic(need(n, "n")?)?,
                    "symmetric" => named::symmetric(need(n, "n")?)?,
                    "alternating" => named::alternating(need(n, "n")?)?,
                    other => return Err(Error::SpecParse(format!("unknown family {other:?}"))),
                }
            }
            GroupKind::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::SpecParse("product needs at least one factor".into()));
                }
                let mut acc = factors[0].resolve(order_cap)?.group;
                for f in &factors[1..] {
                    let next = f.resolve(order_cap)?.group;
                    acc = Group::direct_product(&acc, &next, order_cap)?;
                }
                acc
            }
        };
        if group.order() > order_cap {
            return Err(Error::OrderCapExceeded { order: group.order(), cap: order_cap });
        }
        Ok(ResolvedGroup { label, group, example })
    }
}

/// Splits `S3xC2` into factors; an `x` separates factors only after a digit
/// or a closing parenthesis.
fn split_product(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut parts = Vec::new();
    let mut start = 0;
    for i in 1..bytes.len() {
        if bytes[i] == b'x' && (bytes[i - 1].is_ascii_digit() || bytes[i - 1] == b')') {
            parts.push(&s[start..i]);
            start = i + 1;
        }
    }
    parts.push(&s[start..]);
    parts
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubsetSpec {
    Elements { elements: Vec<ElementId> },
    All { all: bool },
    Generated { subgroup_generated_by: Vec<ElementId> },
    Role { role: String },
}

impl SubsetSpec {
    /// Inline JSON, `all`/`G`, `1` (identity), a role name, `<i,j,...>` for a
    /// generated subgroup, or a comma-separated id list.
    pub fn parse_arg(arg: &str) -> Result<Self> {
        let arg = arg.trim();
        if arg.starts_with('{') {
            return Ok(serde_json::from_str(arg)?);
        }
        let ids = |s: &str| -> Result<Vec<ElementId>> {
            s.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse().map_err(|_| Error::SpecParse(format!("bad element id {t:?}"))))
                .collect()
        };
        match arg {
            "all" | "G" => Ok(SubsetSpec::All { all: true }),
            "1" | "identity" => Ok(SubsetSpec::Elements { elements: vec![0] }),
            _ => {
                if let Some(inner) = arg.strip_prefix('<').and_then(|r| r.strip_suffix('>')) {
                    Ok(SubsetSpec::Generated { subgroup_generated_by: ids(inner)? })
                } else if arg.starts_with(|c: char| c.is_ascii_digit()) {
                    Ok(SubsetSpec::Elements { elements: ids(arg)? })
                } else {
                    Ok(SubsetSpec::Role { role: arg.to_string() })
                }
            }
        }
    }

    /// Resolves against a group. Roles are the example-family names `A`,
    /// `A0`, `H`, `Z`, `B`; `Z` is the center of any group.
    pub fn resolve(&self, group: &ResolvedGroup) -> Result<Subset> {
        let g = &group.group;
        match self {
            SubsetSpec::Elements { elements } => Subset::from_ids(g, elements.iter().copied()),
            SubsetSpec::All { all: true } => Ok(Subset::full(g)),
            SubsetSpec::All { all: false } => Ok(Subset::empty(g)),
            SubsetSpec::Generated { subgroup_generated_by } => {
                Ok(subgroup_closure(&Subset::from_ids(g, subgroup_generated_by.iter().copied())?))
            }
            SubsetSpec::Role { role } => {
                if let Some(s) = group.example.as_ref().and_then(|e| e.role(role)) {
                    return Ok(s);
                }
                match role.as_str() {
                    "Z" => Ok(center(g)),
                    "G" => Ok(Subset::full(g)),
                    _ => Err(Error::SpecParse(format!("unknown subset role {role:?} for {}", group.label))),
                }
            }
        }
    }
}
