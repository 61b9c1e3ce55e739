//! The shift-group family `G = (V ⋊ ⟨g⟩) × U` with `V = C2ⁿ`, `g` cycling a
//! basis `g_1, …, g_n` of `V`, and `U` cyclic. The set
//! `A = {1} ∪ g_1Z ∪ … ∪ g_kZ` is a `(k+1)`-approximate subgroup whose
//! commuting probability with `G` has a closed form, which makes the family
//! a precise test bed for the inequality registry.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::approx;
use crate::group::{center, conjugacy_class_under, subgroup_closure, ElementId, Group};
use crate::probability::commuting_probability;
use crate::rational::Rational;
use crate::subset::Subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleParams {
    pub n: usize,
    pub k: usize,
    pub u_order: usize,
}

impl ExampleParams {
    pub fn new(n: usize, k: usize, u_order: usize) -> Result<Self> {
        let params = ExampleParams { n, k, u_order };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::BadParams(format!("n = {} must be at least 2", self.n)));
        }
        if self.k < 1 || self.k >= self.n {
            return Err(Error::BadParams(format!("k = {} must satisfy 1 <= k < n = {}", self.k, self.n)));
        }
        if self.u_order < 1 {
            return Err(Error::BadParams("u must be at least 1".into()));
        }
        if self.n >= usize::BITS as usize - 8 {
            return Err(Error::BadParams(format!("n = {} is too large", self.n)));
        }
        Ok(())
    }

    /// `z = |Z(G)| = 2|U|`.
    pub fn z(&self) -> usize {
        2 * self.u_order
    }

    /// `|G| = n · 2ⁿ · |U|`.
    pub fn group_order(&self) -> usize {
        self.n * (1 << self.n) * self.u_order
    }

    /// Approximation constant `K = k + 1`.
    pub fn big_k(&self) -> usize {
        self.k + 1
    }

    /// Id of `(v, gⁱ, uʲ)`: `((v · n) + i) · |U| + j`.
    pub fn element(&self, v: usize, i: usize, j: usize) -> ElementId {
        (v * self.n + i) * self.u_order + j
    }
}

#[derive(Debug, Clone)]
pub struct ExampleInstance {
    pub params: ExampleParams,
    pub group: Arc<Group>,
    /// `{1} ∪ g_1Z ∪ … ∪ g_kZ`.
    pub a: Subset,
    /// `Z ∪ A`.
    pub a0: Subset,
    /// `⟨A⟩ = ⟨g_1, …, g_k⟩Z`.
    pub h: Subset,
    /// The center `⟨g_1⋯g_n⟩ × U`.
    pub z: Subset,
    /// The cover `{1, g_1, …, g_k}` from the construction.
    pub basis_cover: Subset,
    pub predicted: BTreeMap<String, Rational>,
}

impl ExampleInstance {
    /// Subset by role name: `A`, `A0`, `H`, `Z`, `B` (the basis cover) or `G`.
    pub fn role(&self, name: &str) -> Option<Subset> {
        match name {
            "A" => Some(self.a.clone()),
            "A0" => Some(self.a0.clone()),
            "H" => Some(self.h.clone()),
            "Z" => Some(self.z.clone()),
            "B" => Some(self.basis_cover.clone()),
            "G" => Some(Subset::full(&self.group)),
            _ => None,
        }
    }
}

/// Multiplication table of `(V ⋊ ⟨g⟩) × U`.
///
/// With elements written `v gⁱ`, `(v gⁱ)(w gʲ) = (v + σⁱ(w)) g^{i+j}` where
/// `σ` shifts basis vector `g_t` to `g_{t+1}` (indices mod `n`).
fn build_group(params: &ExampleParams, cap: usize) -> Result<Arc<Group>> {
    let ExampleParams { n, u_order, .. } = *params;
    let order = params.group_order();
    if order > cap {
        return Err(Error::OrderCapExceeded { order, cap });
    }
    let mask = (1usize << n) - 1;
    let shift = |w: usize, i: usize| -> usize {
        let i = i % n;
        if i == 0 {
            w
        } else {
            ((w << i) | (w >> (n - i))) & mask
        }
    };
    let decode = |x: usize| (x / (n * u_order), (x / u_order) % n, x % u_order);
    let mut flat = vec![0u32; order * order];
    for x in 0..order {
        let (v, i, a) = decode(x);
        for y in 0..order {
            let (w, j, b) = decode(y);
            flat[x * order + y] = params.element(v ^ shift(w, i), (i + j) % n, (a + b) % u_order) as u32;
        }
    }
    let labels = (0..order)
        .map(|x| {
            let (v, i, a) = decode(x);
            format!("v{v:0width$b}·g^{i}·u^{a}", width = n)
        })
        .collect();
    Group::from_flat(order, flat, Some(labels))
}

/// Constructs `G`, `A`, `A0`, `H`, `Z` and checks the computed center against
/// `⟨g_1⋯g_n⟩ × U`.
pub fn build_example(params: ExampleParams, order_cap: usize) -> Result<ExampleInstance> {
    params.validate()?;
    let group = build_group(&params, order_cap)?;
    let all_ones = (1usize << params.n) - 1;
    let u = params.u_order;
    let z_expected = Subset::from_ids(
        &group,
        [0, all_ones].into_iter().flat_map(|v| (0..u).map(move |j| params.element(v, 0, j))),
    )?;
    let z = center(&group);
    if z != z_expected {
        return Err(Error::VerificationFailed("center differs from <g_1...g_n> x U".into()));
    }
    let basis: Vec<ElementId> = (0..params.k).map(|t| params.element(1 << t, 0, 0)).collect();
    let mut a_ids = vec![0];
    for &b in &basis {
        a_ids.extend(z.iter().map(|c| group.mul(b, c)));
    }
    let a = Subset::from_ids(&group, a_ids)?;
    let a0 = a.union(&z)?;
    let h = subgroup_closure(&a);
    let basis_cover = Subset::from_ids(&group, std::iter::once(0).chain(basis))?;
    let predicted = predicted_quantities(&params)?;
    Ok(ExampleInstance { params, group, a, a0, h, z, basis_cover, predicted })
}

/// Closed-form quantities for the family.
///
/// Keys: `G_order`, `z`, `K`, `A_size`, `H_size`, `A0_size`,
/// `A_over_H_lower` (`k/2^k`), `pr_A_G` (`(kz/n + 1)/(kz + 1)`, exact),
/// `pr_A_G_upper` (`1/n + 1/(kz)`), `pr_H_G_lower` (`1/2^k`),
/// `ratio_A_H_upper` (`(1/n + 1/(kz))·2^k`), `pr_A0_G_lower` (`1/(k+1)`),
/// `ratio_A_A0_upper` (`(1/n + 1/(kz))(k+1)`).
pub fn predicted_quantities(params: &ExampleParams) -> Result<BTreeMap<String, Rational>> {
    params.validate()?;
    let ExampleParams { n, k, .. } = *params;
    let z = params.z();
    let kz = k * z;
    let two_k = Rational::from(1usize << k);
    let r = Rational::from;
    let base = Rational::ratio(1, n) + Rational::ratio(1, kz);
    let mut map = BTreeMap::new();
    map.insert("G_order".into(), r(params.group_order()));
    map.insert("z".into(), r(z));
    map.insert("K".into(), r(k + 1));
    map.insert("A_size".into(), r(kz + 1));
    map.insert("H_size".into(), r((1 << k) * z));
    map.insert("A0_size".into(), r((k + 1) * z));
    map.insert("A_over_H_lower".into(), r(k) / &two_k);
    map.insert("pr_A_G".into(), (Rational::ratio(kz, n) + Rational::one()) / r(kz + 1));
    map.insert("pr_A_G_upper".into(), base.clone());
    map.insert("pr_H_G_lower".into(), two_k.recip());
    map.insert("ratio_A_H_upper".into(), &base * &two_k);
    map.insert("pr_A0_G_lower".into(), Rational::ratio(1, k + 1));
    map.insert("ratio_A_A0_upper".into(), &base * &r(k + 1));
    Ok(map)
}

/// One predicted quantity against its computed value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionCheck {
    pub quantity: String,
    /// How `computed` must relate to `predicted`: `=`, `<`, `>` or `<=`.
    pub relation: String,
    pub predicted: Rational,
    pub computed: Rational,
    pub holds: bool,
}

fn prediction(quantity: &str, relation: &str, predicted: &Rational, computed: Rational) -> PredictionCheck {
    let holds = match relation {
        "=" => computed == *predicted,
        "<" => computed < *predicted,
        ">" => computed > *predicted,
        _ => computed <= *predicted,
    };
    PredictionCheck { quantity: quantity.into(), relation: relation.into(), predicted: predicted.clone(), computed, holds }
}

/// Computes every predicted quantity directly and compares.
///
/// Besides the keys of [`predicted_quantities`] this covers the class sizes
/// `|a^G| = n` for `1 ≠ a ∈ A` and the certificate constants of `A` and `A0`.
pub fn check_predictions(inst: &ExampleInstance, node_budget: u64) -> Result<Vec<PredictionCheck>> {
    let p = &inst.predicted;
    let all = Subset::full(&inst.group);
    let pr_a = commuting_probability(&inst.a, &all)?;
    let pr_h = commuting_probability(&inst.h, &all)?;
    let pr_a0 = commuting_probability(&inst.a0, &all)?;
    let size = |s: &Subset| Rational::from(s.len());
    let n = Rational::from(inst.params.n);
    let class_sizes: Vec<usize> = inst.a.iter().filter(|&a| a != 0).map(|a| conjugacy_class_under(a, &all).len()).collect();
    let class_size = class_sizes.into_iter().find(|&c| c != inst.params.n).unwrap_or(inst.params.n);
    let k_a = approx::certify_best(&inst.a, node_budget)?;
    let k_a0 = approx::certify_best(&inst.a0, node_budget)?;
    Ok(vec![
        prediction("G_order", "=", &p["G_order"], Rational::from(inst.group.order())),
        prediction("z", "=", &p["z"], size(&inst.z)),
        prediction("A_size", "=", &p["A_size"], size(&inst.a)),
        prediction("H_size", "=", &p["H_size"], size(&inst.h)),
        prediction("A0_size", "=", &p["A0_size"], size(&inst.a0)),
        prediction("A_over_H_lower", ">", &p["A_over_H_lower"], size(&inst.a) / size(&inst.h)),
        prediction("a_class_size", "=", &n, Rational::from(class_size)),
        prediction("pr_A_G", "=", &p["pr_A_G"], pr_a.clone()),
        prediction("pr_A_G_upper", "<", &p["pr_A_G_upper"], pr_a.clone()),
        prediction("pr_H_G_lower", ">", &p["pr_H_G_lower"], pr_h.clone()),
        prediction("ratio_A_H_upper", "<", &p["ratio_A_H_upper"], &pr_a / &pr_h),
        prediction("pr_A0_G_lower", ">", &p["pr_A0_G_lower"], pr_a0.clone()),
        prediction("ratio_A_A0_upper", "<", &p["ratio_A_A0_upper"], &pr_a / &pr_a0),
        prediction("k_cert_A", "<=", &p["K"], Rational::from(k_a.k_cert)),
        prediction("k_cert_A0", "<=", &p["K"], Rational::from(k_a0.k_cert)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::conjugacy_class_under;

    #[test]
    fn smallest_instance() {
        let inst = build_example(ExampleParams::new(2, 1, 1).unwrap(), 2000).unwrap();
        assert_eq!(inst.group.order(), 8);
        assert_eq!(inst.params.z(), 2);
        assert_eq!(inst.a.len(), 3);
        assert_eq!(inst.predicted["pr_A_G"], Rational::new(2, 3));
        for c in check_predictions(&inst, 10_000).unwrap() {
            assert!(c.holds, "{c:?}");
        }
    }

    #[test]
    fn rank_five_instance() {
        let inst = build_example(ExampleParams::new(5, 2, 2).unwrap(), 2000).unwrap();
        assert_eq!(inst.group.order(), 320);
        assert_eq!(inst.a.len(), 9);
        assert_eq!(inst.h.len(), 16);
        assert_eq!(inst.a0.len(), 12);
        assert!(inst.a.is_symmetric() && inst.a.contains_identity());
        assert_eq!(inst.predicted["pr_A_G"], Rational::new(13, 45));
        let all = Subset::full(&inst.group);
        for a in inst.a.iter().filter(|&a| a != 0) {
            assert_eq!(conjugacy_class_under(a, &all).len(), 5);
        }
    }

    #[test]
    fn bad_params() {
        assert!(ExampleParams::new(1, 1, 1).is_err());
        assert!(ExampleParams::new(3, 3, 1).is_err());
        assert!(ExampleParams::new(3, 0, 1).is_err());
        assert!(ExampleParams::new(3, 1, 0).is_err());
        let p = ExampleParams::new(8, 2, 4).unwrap();
        assert!(matches!(build_example(p, 2000), Err(Error::OrderCapExceeded { .. })));
    }
}
