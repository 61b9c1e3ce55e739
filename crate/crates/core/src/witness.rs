//! Constructive witness pipelines.
//!
//! [`extract_core`] keeps the elements of `H` with few `U`-conjugates, the
//! set `X` whose square `B = X²` carries the structure. The two theorem
//! pipelines chain it with a normal-subgroup search ([`witness_theorem_1_1`])
//! or a second extraction inside `⟨B⟩` followed by a Ruzsa covering
//! ([`witness_theorem_1_2`]). Every quantity placed in a report is recomputed
//! from its definition and every inequality the construction promises is
//! checked exactly; a violation surfaces as [`Error::VerificationFailed`].

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::approx::{self, ApproxCertificate, CertificateRecord};
use crate::error::{Error, Result};
use crate::group::{
    common_centralizer_in, commutator_subgroup, conjugacy_class_under, normal_subgroups, subgroup_closure,
    ElementId, Group,
};
use crate::probability::commuting_probability;
use crate::rational::Rational;
use crate::subset::Subset;

pub const SCHEMA_VERSION: &str = "1";
/// Largest number of elements accepted by [`bounded_conjugate_cover`].
pub const MAX_CONJUGATING_ELEMENTS: usize = 5;

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    /// Class cap for the normal-subgroup search in the normal-subgroup pipeline.
    pub class_cap: usize,
    /// Node budget for exact certificates before falling back to greedy.
    pub node_budget: u64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { class_cap: 64, node_budget: approx::DEFAULT_NODE_BUDGET }
    }
}

fn verify(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::VerificationFailed(what()))
    }
}

/// Class-size bounds from the proof chain, logged next to the measured `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainBounds {
    /// `(k_U/α)²`, bounding `|y^U|` for `y ∈ B`.
    pub class_bound_b: Rational,
    /// `(k_U/α)⁶`, bounding `|e^U|` for `e` in a minimal cover of `B²`.
    pub class_bound_e: Rational,
}

#[derive(Debug, Clone)]
pub struct CoreExtraction {
    pub h: Subset,
    pub u: Subset,
    pub epsilon: Rational,
    pub k_u: usize,
    /// `{x ∈ H : |x^U| ≤ 2k_U/ε}`.
    pub x: Subset,
    /// `X²`.
    pub b: Subset,
    pub b_cert: ApproxCertificate,
    /// `max(k_cert(B), |B|/|X|)`: certifies both `B² ⊆ EB` and `|X²| ≤ K̃|X|`.
    pub k_tilde: Rational,
    /// `⟨B⟩`.
    pub generated: Subset,
    /// Measured `max |y^U|` over `y ∈ ⟨B⟩`.
    pub class_bound_m: usize,
    pub chain: ChainBounds,
}

/// Serialized form of a [`CoreExtraction`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionRecord {
    pub h_size: usize,
    pub u_size: usize,
    pub epsilon: Rational,
    pub k_u: usize,
    pub x: Vec<ElementId>,
    pub b: Vec<ElementId>,
    pub b_certificate: CertificateRecord,
    pub k_tilde: Rational,
    pub generated_size: usize,
    pub class_bound_m: usize,
    pub chain: ChainBounds,
}

impl CoreExtraction {
    pub fn record(&self) -> ExtractionRecord {
        ExtractionRecord {
            h_size: self.h.len(),
            u_size: self.u.len(),
            epsilon: self.epsilon.clone(),
            k_u: self.k_u,
            x: self.x.to_vec(),
            b: self.b.to_vec(),
            b_certificate: self.b_cert.record(),
            k_tilde: self.k_tilde.clone(),
            generated_size: self.generated.len(),
            class_bound_m: self.class_bound_m,
            chain: self.chain.clone(),
        }
    }

    /// `|X²| ≤ (k_H/α)|X|` and `|X³| ≤ (k_H²/α)|X|` with `α = ε/2`.
    pub fn growth_bounds_hold(&self, k_h: usize) -> Result<bool> {
        let alpha = &self.epsilon / &Rational::from(2usize);
        let x2 = self.b.len();
        let x3 = self.b.product(&self.x)?.len();
        let size = Rational::from(self.x.len());
        let k = Rational::from(k_h);
        Ok(Rational::from(x2) <= &(&k / &alpha) * &size && Rational::from(x3) <= &(&k.pow(2) / &alpha) * &size)
    }
}

/// Extracts `X = {x ∈ H : |x^U| ≤ 2k_U/ε}` and `B = X²` from a pair of
/// approximate subgroups with `pr(H, U) ≥ ε`.
///
/// `k_u` must satisfy `|U²| ≤ k_u|U|` (any certificate constant does).
pub fn extract_core(
    h: &Subset,
    u: &Subset,
    epsilon: &Rational,
    k_u: usize,
    opts: &PipelineOptions,
) -> Result<CoreExtraction> {
    h.same_group(u)?;
    h.require_approximate_shape()?;
    u.require_approximate_shape()?;
    if !epsilon.is_positive() {
        return Err(Error::BadParams(format!("epsilon {epsilon} must be positive")));
    }
    if k_u == 0 || u.power(2)?.len() > k_u * u.len() {
        return Err(Error::BadParams(format!("k_U = {k_u} does not bound the doubling of U")));
    }
    let pr = commuting_probability(h, u)?;
    if pr < *epsilon {
        return Err(Error::ProbabilityBelowEpsilon { pr, epsilon: epsilon.clone() });
    }

    let threshold = Rational::from(2 * k_u) / epsilon;
    let x = Subset::from_predicate(h.group(), |y| {
        h.contains(y) && Rational::from(conjugacy_class_under(y, u).len()) <= threshold
    });
    let alpha = epsilon / &Rational::from(2usize);
    verify(Rational::from(x.len()) >= &alpha * &Rational::from(h.len()), || {
        format!("|X| = {} below (ε/2)|H| for |H| = {}", x.len(), h.len())
    })?;
    verify(x.is_symmetric() && x.contains_identity(), || "X is not symmetric with 1".into())?;

    let b = x.power(2)?;
    let b_cert = approx::prune_cover(&approx::certify_best(&b, opts.node_budget)?)?;
    let k_tilde = Rational::from(b_cert.k_cert).max(Rational::ratio(b.len(), x.len()));
    let generated = subgroup_closure(&b);
    let class_bound_m = generated.iter().map(|y| conjugacy_class_under(y, u).len()).max().unwrap_or(1);

    let ratio = Rational::from(k_u) / &alpha;
    let chain = ChainBounds { class_bound_b: ratio.pow(2), class_bound_e: ratio.pow(6) };
    for y in b.iter() {
        verify(chain.class_bound_b.cmp_int(conjugacy_class_under(y, u).len()).is_ge(), || {
            format!("|y^U| exceeds (k_U/α)² for y = {y}")
        })?;
    }

    Ok(CoreExtraction {
        h: h.clone(),
        u: u.clone(),
        epsilon: epsilon.clone(),
        k_u,
        x,
        b,
        b_cert,
        k_tilde,
        generated,
        class_bound_m,
        chain,
    })
}

/// One normal subgroup considered by the normal-subgroup search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TCandidate {
    pub t_size: usize,
    pub index: usize,
    pub commutator_size: usize,
}

#[derive(Debug, Clone)]
pub struct Theorem11Witness {
    pub a: Subset,
    pub certificate: ApproxCertificate,
    pub epsilon: Rational,
    pub extraction: CoreExtraction,
    pub t: Subset,
    pub index_g_t: usize,
    pub commutator_size: usize,
    /// `|A ∩ B| / max(|A|, |B|)`.
    pub gamma: Rational,
    /// `ε / (2 k_cert)`.
    pub gamma_bound: Rational,
    /// Normal subgroups not dominated in `([G:T], |[T,⟨B⟩]|)`.
    pub pareto: Vec<TCandidate>,
}

#[derive(Debug, Clone)]
pub struct Theorem12Witness {
    pub a: Subset,
    pub certificate: ApproxCertificate,
    pub epsilon: Rational,
    pub first: CoreExtraction,
    pub second: CoreExtraction,
    /// `1 / (K̃ m)`.
    pub eta: Rational,
    pub pr_b_generated: Rational,
    pub y: Subset,
    /// `⟨Y⟩`.
    pub c: Subset,
    pub c_prime_size: usize,
    /// `|C ∩ A²| / |A|`.
    pub gamma: Rational,
    /// `εη/4`.
    pub gamma_bound: Rational,
    pub cover_f: Subset,
    /// `4K²/(εη)`.
    pub cover_bound: Rational,
    pub coset_count: usize,
    /// `γ⁻¹K²` with the measured `γ`.
    pub coset_bound: Rational,
}

fn resolve_epsilon(epsilon: Option<Rational>, default: impl FnOnce() -> Result<Rational>) -> Result<Rational> {
    match epsilon {
        Some(e) => Ok(e),
        None => default(),
    }
}

/// Normal-subgroup pipeline: extraction with `H = A`, `U = G`, then the normal
/// subgroup `T` minimizing `([G:T], |[T,⟨B⟩]|)` lexicographically.
///
/// `epsilon` defaults to `pr(A, G)`.
pub fn witness_theorem_1_1(a: &Subset, epsilon: Option<Rational>, opts: &PipelineOptions) -> Result<Theorem11Witness> {
    let group = a.group().clone();
    let all = Subset::full(&group);
    let epsilon = resolve_epsilon(epsilon, || commuting_probability(a, &all))?;
    let certificate = approx::certify_best(a, opts.node_budget)?;
    let extraction = extract_core(a, &all, &epsilon, 1, opts)?;
    let generated = &extraction.generated;

    let normals = normal_subgroups(&group, opts.class_cap)?;
    let mut scored = Vec::with_capacity(normals.len());
    for t in normals {
        let comm = commutator_subgroup(&t, generated)?.len();
        scored.push((group.order() / t.len(), comm, t));
    }
    let pareto = scored
        .iter()
        .filter(|(i, c, _)| !scored.iter().any(|(j, d, _)| j <= i && d <= c && (j < i || d < c)))
        .map(|(i, c, t)| TCandidate { t_size: t.len(), index: *i, commutator_size: *c })
        .collect();
    let (index_g_t, commutator_size, t) = scored
        .into_iter()
        .min_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)))
        .expect("G itself is normal");

    let b = &extraction.b;
    let gamma = Rational::ratio(a.intersection_len(b)?, a.len().max(b.len()));
    let gamma_bound = &epsilon / &Rational::from(2 * certificate.k_cert);

    verify(commutator_subgroup(&t, generated)?.len() == commutator_size, || "[T,<B>] recomputation differs".into())?;
    verify(group.order() == index_g_t * t.len(), || "index mismatch".into())?;
    verify(gamma >= gamma_bound, || format!("gamma {gamma} below ε/(2K) = {gamma_bound}"))?;
    verify(certificate.verify()?, || "certificate of A failed".into())?;
    verify(extraction.growth_bounds_hold(certificate.k_cert)?, || "X growth bounds failed".into())?;

    Ok(Theorem11Witness {
        a: a.clone(),
        certificate,
        epsilon,
        extraction,
        t,
        index_g_t,
        commutator_size,
        gamma,
        gamma_bound,
        pareto,
    })
}

/// Number of distinct left cosets `aC` with `a ∈ A`.
pub fn left_coset_count(a: &Subset, c: &Subset) -> Result<usize> {
    a.same_group(c)?;
    let group = a.group();
    let members: Vec<ElementId> = c.iter().collect();
    let mut reps: Vec<ElementId> = a
        .iter()
        .map(|x| members.iter().map(|&y| group.mul(x, y)).min().expect("C is nonempty"))
        .collect();
    reps.sort_unstable();
    reps.dedup();
    Ok(reps.len())
}

/// Subgroup pipeline: extraction with `H = U = A`, `η = 1/(K̃ m)`, a second
/// extraction with `H = B`, `U = ⟨B⟩`, then `C = ⟨Y⟩` and a Ruzsa cover of
/// `A` by translates of `Y²`.
///
/// `epsilon` defaults to `pr(A, A)`.
pub fn witness_theorem_1_2(a: &Subset, epsilon: Option<Rational>, opts: &PipelineOptions) -> Result<Theorem12Witness> {
    let epsilon = resolve_epsilon(epsilon, || commuting_probability(a, a))?;
    let certificate = approx::certify_best(a, opts.node_budget)?;
    let k = certificate.k_cert;
    let first = extract_core(a, a, &epsilon, k, opts)?;
    let eta = (&first.k_tilde * &Rational::from(first.class_bound_m)).recip();
    let pr_b_generated = commuting_probability(&first.b, &first.generated)?;
    verify(pr_b_generated >= eta, || format!("pr(B,<B>) = {pr_b_generated} below η = {eta}"))?;

    let second = extract_core(&first.b, &first.generated, &eta, 1, opts)?;
    let y = second.x.clone();
    let c = subgroup_closure(&y);
    let c_prime_size = commutator_subgroup(&c, &c)?.len();
    let a2 = a.power(2)?;
    let gamma = Rational::ratio(c.intersection_len(&a2)?, a.len());
    let gamma_bound = &(&epsilon * &eta) / &Rational::from(4usize);

    let cover_f = approx::ruzsa_cover(a, &y)?;
    let ay = a.product(&y)?.len();
    let k2 = Rational::from(k * k);
    let cover_bound = &(&k2 * &Rational::from(4usize)) / &(&epsilon * &eta);
    let coset_count = left_coset_count(a, &c)?;
    let coset_bound = &k2 / &gamma;

    verify(y.is_subset_of(&first.b)? && first.b.is_subset_of(&a2)?, || "Y ⊆ B ⊆ A² failed".into())?;
    verify(gamma >= gamma_bound, || format!("gamma {gamma} below εη/4 = {gamma_bound}"))?;
    verify(cover_f.len() * y.len() <= ay, || "|F| exceeds |AY|/|Y|".into())?;
    verify(cover_bound.cmp_int(cover_f.len()).is_ge(), || "|F| exceeds 4K²/(εη)".into())?;
    verify(coset_count <= cover_f.len(), || "more cosets than Ruzsa translates".into())?;
    verify(coset_bound.cmp_int(coset_count).is_ge(), || "coset count exceeds γ⁻¹K²".into())?;
    verify(certificate.verify()?, || "certificate of A failed".into())?;
    verify(first.growth_bounds_hold(k)?, || "X growth bounds failed".into())?;

    Ok(Theorem12Witness {
        a: a.clone(),
        certificate,
        epsilon,
        first,
        second,
        eta,
        pr_b_generated,
        y,
        c,
        c_prime_size,
        gamma,
        gamma_bound,
        cover_f,
        cover_bound,
        coset_count,
        coset_bound,
    })
}

/// Serialized normal-subgroup witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem11Record {
    pub t: Vec<ElementId>,
    pub index_g_t: usize,
    pub commutator_size: usize,
    pub gamma: Rational,
    pub gamma_bound: Rational,
    pub t_pareto: Vec<TCandidate>,
}

/// Serialized subgroup witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem12Record {
    pub eta: Rational,
    pub pr_b_generated: Rational,
    pub y: Vec<ElementId>,
    pub c: Vec<ElementId>,
    pub c_prime_size: usize,
    pub gamma: Rational,
    pub gamma_bound: Rational,
    pub cover_f: Vec<ElementId>,
    pub cover_bound: Rational,
    pub coset_count: usize,
    pub coset_bound: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "theorem")]
pub enum TheoremRecord {
    #[serde(rename = "1.1")]
    One(Theorem11Record),
    #[serde(rename = "1.2")]
    Two(Theorem12Record),
}

/// JSON witness report (schema `"1"`); sets are sorted id arrays and ratios `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub schema: String,
    pub group: String,
    pub group_order: usize,
    pub a: Vec<ElementId>,
    pub certificate: CertificateRecord,
    pub epsilon: Rational,
    pub extractions: Vec<ExtractionRecord>,
    #[serde(flatten)]
    pub theorem: TheoremRecord,
}

impl Theorem11Witness {
    pub fn report(&self, group_label: &str) -> WitnessReport {
        WitnessReport {
            schema: SCHEMA_VERSION.into(),
            group: group_label.into(),
            group_order: self.a.group().order(),
            a: self.a.to_vec(),
            certificate: self.certificate.record(),
            epsilon: self.epsilon.clone(),
            extractions: vec![self.extraction.record()],
            theorem: TheoremRecord::One(Theorem11Record {
                t: self.t.to_vec(),
                index_g_t: self.index_g_t,
                commutator_size: self.commutator_size,
                gamma: self.gamma.clone(),
                gamma_bound: self.gamma_bound.clone(),
                t_pareto: self.pareto.clone(),
            }),
        }
    }
}

impl Theorem12Witness {
    pub fn report(&self, group_label: &str) -> WitnessReport {
        WitnessReport {
            schema: SCHEMA_VERSION.into(),
            group: group_label.into(),
            group_order: self.a.group().order(),
            a: self.a.to_vec(),
            certificate: self.certificate.record(),
            epsilon: self.epsilon.clone(),
            extractions: vec![self.first.record(), self.second.record()],
            theorem: TheoremRecord::Two(Theorem12Record {
                eta: self.eta.clone(),
                pr_b_generated: self.pr_b_generated.clone(),
                y: self.y.to_vec(),
                c: self.c.to_vec(),
                c_prime_size: self.c_prime_size,
                gamma: self.gamma.clone(),
                gamma_bound: self.gamma_bound.clone(),
                cover_f: self.cover_f.to_vec(),
                cover_bound: self.cover_bound.clone(),
                coset_count: self.coset_count,
                coset_bound: self.coset_bound.clone(),
            }),
        }
    }
}

/// Common centralizer `D = C_{A^{2^s}}(g_1, …, g_s)` and translates `d_i`
/// with `A ⊆ ∪ D·d_i`.
#[derive(Debug, Clone)]
pub struct ConjugateCover {
    pub center_set: Subset,
    pub translates: Vec<ElementId>,
}

/// Builds the cover inductively: with `A ⊆ ∪ D_{t-1} h_i` and
/// `g_t^{D_{t-1}} = {g_t^{b_1}, …, g_t^{b_r}}`, every `d ∈ D_{t-1}` lies in
/// `C_{D_{t-1}²}(g_t) b_j` for some `j`, so the translates become `b_j h_i`.
pub fn bounded_conjugate_cover(cert: &ApproxCertificate, gs: &[ElementId]) -> Result<ConjugateCover> {
    let a = &cert.base;
    let group: &Arc<Group> = a.group();
    if gs.len() > MAX_CONJUGATING_ELEMENTS {
        return Err(Error::PowerCapExceeded(gs.len(), MAX_CONJUGATING_ELEMENTS));
    }
    if let Some(&g) = gs.iter().find(|&&g| g >= group.order()) {
        return Err(Error::InvalidElement(g));
    }
    let mut current = a.clone();
    let mut power = a.clone();
    let mut translates = vec![group.identity()];
    for (t, &g) in gs.iter().enumerate() {
        // |g^D| ≤ K^{2^t - 1} |g^A| since D ⊆ A^{2^t}.
        let class = conjugacy_class_under(g, &current).len();
        let bound = Rational::from(cert.k_cert).pow((1u32 << t) - 1) * Rational::from(conjugacy_class_under(g, a).len());
        verify(bound.cmp_int(class).is_ge(), || format!("conjugate growth bound failed at step {}", t + 1))?;

        let mut seen = Vec::new();
        let mut reps = Vec::new();
        for b in current.iter() {
            let conj = group.conj(g, b);
            if !seen.contains(&conj) {
                seen.push(conj);
                reps.push(b);
            }
        }
        let mut next = Vec::with_capacity(reps.len() * translates.len());
        for &h in &translates {
            for &b in &reps {
                let d = group.mul(b, h);
                if !next.contains(&d) {
                    next.push(d);
                }
            }
        }
        translates = next;
        power = power.power(2)?;
        current = common_centralizer_in(&power, &gs[..=t]);
    }
    let covered = Subset::from_ids(group, translates.iter().flat_map(|&d| current.iter().map(move |x| group.mul(x, d))))?;
    verify(a.is_subset_of(&covered)?, || "conjugate cover misses part of A".into())?;
    Ok(ConjugateCover { center_set: current, translates })
}
