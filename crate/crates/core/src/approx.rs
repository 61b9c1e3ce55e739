//! Approximate-subgroup certificates, growth constants and covering lemmas.
//!
//! A certificate for a symmetric set `A ∋ 1` is a set `E` with `A² ⊆ EA`.
//! Finding one is a set-cover problem: the points are the elements of `A²`
//! and the candidate `e` covers `eA ∩ A²`. Every `x ∈ eA` has `e = x·a⁻¹`
//! for some `a ∈ A`, so candidates range over `A²A⁻¹ = A³` without loss.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{conjugacy_class_under, ElementId};
use crate::rational::Rational;
use crate::subset::Subset;

/// Largest `|A²|` accepted by the exact solver.
pub const EXACT_POINT_CAP: usize = 4096;
/// Search-node budget used by [`certify_best`] before falling back to greedy.
pub const DEFAULT_NODE_BUDGET: u64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertMode {
    Exact,
    Greedy,
}

#[derive(Debug, Clone)]
pub struct ApproxCertificate {
    pub base: Subset,
    pub cover: Subset,
    pub k_cert: usize,
    pub doubling: Rational,
    pub tripling: Rational,
    pub mode: CertMode,
}

/// Serialized form of a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub k: usize,
    pub cover: Vec<ElementId>,
    pub mode: CertMode,
    pub doubling: Rational,
    pub tripling: Rational,
}

impl ApproxCertificate {
    /// The certified constant as a rational.
    pub fn k(&self) -> Rational {
        Rational::from(self.k_cert)
    }

    pub fn record(&self) -> CertificateRecord {
        CertificateRecord {
            k: self.k_cert,
            cover: self.cover.to_vec(),
            mode: self.mode,
            doubling: self.doubling.clone(),
            tripling: self.tripling.clone(),
        }
    }

    /// Re-checks `A² ⊆ EA` by direct product computation.
    pub fn verify(&self) -> Result<bool> {
        covers_square(&self.base, &self.cover)
    }
}

/// Whether `A² ⊆ EA`.
pub fn covers_square(a: &Subset, cover: &Subset) -> Result<bool> {
    let square = a.power(2)?;
    square.is_subset_of(&cover.product(a)?)
}

/// Builds a certificate around a known cover after checking it.
pub fn certificate_from_cover(a: &Subset, cover: Subset, mode: CertMode) -> Result<ApproxCertificate> {
    a.require_approximate_shape()?;
    if !covers_square(a, &cover)? {
        return Err(Error::VerificationFailed("cover does not satisfy A^2 ⊆ EA".into()));
    }
    let (doubling, tripling) = doubling_tripling(a)?;
    Ok(ApproxCertificate { base: a.clone(), k_cert: cover.len(), cover, doubling, tripling, mode })
}

fn doubling_tripling(a: &Subset) -> Result<(Rational, Rational)> {
    let a2 = a.power(2)?;
    let a3 = a2.product(a)?;
    Ok((Rational::ratio(a2.len(), a.len()), Rational::ratio(a3.len(), a.len())))
}

/// Cover instance: points of `A²` and the coverage bitset of every candidate.
struct CoverProblem {
    points: usize,
    words: usize,
    candidates: Vec<ElementId>,
    coverage: Vec<Vec<u64>>,
}

impl CoverProblem {
    fn new(a: &Subset) -> Result<Self> {
        let group = a.group();
        let square = a.power(2)?;
        let candidates_set = square.product(a)?;
        let mut index = vec![usize::MAX; group.order()];
        for (i, x) in square.iter().enumerate() {
            index[x] = i;
        }
        let points = square.len();
        let words = points.div_ceil(64);
        let members: Vec<ElementId> = a.iter().collect();
        let mut candidates = Vec::new();
        let mut coverage = Vec::new();
        for e in candidates_set.iter() {
            let mut bits = vec![0u64; words];
            for &m in &members {
                let p = index[group.mul(e, m)];
                if p != usize::MAX {
                    bits[p / 64] |= 1 << (p % 64);
                }
            }
            candidates.push(e);
            coverage.push(bits);
        }
        Ok(CoverProblem { points, words, candidates, coverage })
    }

    fn all_points(&self) -> Vec<u64> {
        let mut bits = vec![u64::MAX; self.words];
        if self.points % 64 != 0 {
            *bits.last_mut().unwrap() = (1u64 << (self.points % 64)) - 1;
        }
        if self.points == 0 {
            bits.clear();
        }
        bits
    }

    fn gain(&self, c: usize, uncovered: &[u64]) -> usize {
        self.coverage[c].iter().zip(uncovered).map(|(&a, &b)| (a & b).count_ones() as usize).sum()
    }

    /// Most-uncovered-points-first, ties to the least element id.
    fn greedy(&self) -> Vec<usize> {
        let mut uncovered = self.all_points();
        let mut chosen = Vec::new();
        while uncovered.iter().any(|&w| w != 0) {
            let best = (0..self.candidates.len())
                .map(|c| (self.gain(c, &uncovered), c))
                .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
                .expect("A² is covered by A²A⁻¹");
            chosen.push(best.1);
            for (u, &c) in uncovered.iter_mut().zip(&self.coverage[best.1]) {
                *u &= !c;
            }
        }
        chosen
    }

    /// Branch and bound for a minimum cover. Returns `None` if the node
    /// budget runs out before optimality is proven.
    fn exact(&self, budget: Option<u64>) -> Option<Vec<usize>> {
        // Drop candidates whose coverage is contained in another's; keep the
        // least id among equal coverage sets.
        let mut keep: Vec<usize> = Vec::new();
        'cand: for c in 0..self.candidates.len() {
            for d in 0..self.candidates.len() {
                if c == d {
                    continue;
                }
                let (cc, cd) = (&self.coverage[c], &self.coverage[d]);
                let subset = cc.iter().zip(cd).all(|(&a, &b)| a & !b == 0);
                if subset && (cc != cd || d < c) {
                    continue 'cand;
                }
            }
            keep.push(c);
        }

        let mut search = ExactSearch {
            problem: self,
            keep,
            best: self.greedy(),
            nodes: 0,
            budget,
            exhausted: false,
        };
        let mut chosen = Vec::new();
        search.descend(self.all_points(), &mut chosen);
        if search.exhausted {
            return None;
        }
        let mut best = search.best;
        best.sort_unstable();
        Some(best)
    }
}

struct ExactSearch<'p> {
    problem: &'p CoverProblem,
    keep: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
    exhausted: bool,
}

impl ExactSearch<'_> {
    fn descend(&mut self, uncovered: Vec<u64>, chosen: &mut Vec<usize>) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if let Some(budget) = self.budget {
            if self.nodes > budget {
                self.exhausted = true;
                return;
            }
        }
        let remaining: usize = uncovered.iter().map(|w| w.count_ones() as usize).sum();
        if remaining == 0 {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        let p = self.problem;
        let max_gain = self.keep.iter().map(|&c| p.gain(c, &uncovered)).max().unwrap_or(0);
        if max_gain == 0 {
            return;
        }
        let lower = chosen.len() + remaining.div_ceil(max_gain);
        if lower >= self.best.len() {
            return;
        }

        // Branch on the uncovered point with the fewest covering candidates.
        let mut pivot = (usize::MAX, 0usize);
        for (w, &word) in uncovered.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let count = self.keep.iter().filter(|&&c| p.coverage[c][w] & (1 << b) != 0).count();
                if count < pivot.0 {
                    pivot = (count, w * 64 + b);
                }
            }
        }
        let (w, b) = (pivot.1 / 64, pivot.1 % 64);
        let mut branches: Vec<(usize, usize)> = self
            .keep
            .iter()
            .filter(|&&c| p.coverage[c][w] & (1 << b) != 0)
            .map(|&c| (p.gain(c, &uncovered), c))
            .collect();
        branches.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, c) in branches {
            let next: Vec<u64> = uncovered.iter().zip(&p.coverage[c]).map(|(&u, &v)| u & !v).collect();
            chosen.push(c);
            self.descend(next, chosen);
            chosen.pop();
            if self.exhausted {
                return;
            }
        }
    }
}

fn solve(a: &Subset, mode: CertMode, budget: Option<u64>) -> Result<Option<ApproxCertificate>> {
    a.require_approximate_shape()?;
    let problem = CoverProblem::new(a)?;
    let chosen = match mode {
        CertMode::Greedy => problem.greedy(),
        CertMode::Exact => {
            if problem.points > EXACT_POINT_CAP {
                return Err(Error::ExactCapExceeded { points: problem.points, cap: EXACT_POINT_CAP });
            }
            match problem.exact(budget) {
                Some(chosen) => chosen,
                None => return Ok(None),
            }
        }
    };
    let cover = Subset::from_ids(a.group(), chosen.iter().map(|&c| problem.candidates[c]))?;
    certificate_from_cover(a, cover, mode).map(Some)
}

/// A cover `E` with `A² ⊆ EA`.
///
/// `Exact` returns a minimum-size cover (at most [`EXACT_POINT_CAP`] points
/// in `A²`); `Greedy` picks the candidate covering most uncovered points,
/// ties to the least id, and is within a factor `1 + ln|A²|` of optimal.
pub fn certify(a: &Subset, mode: CertMode) -> Result<ApproxCertificate> {
    Ok(solve(a, mode, None)?.expect("unbounded exact search always finishes"))
}

/// Exact certificate when the search finishes within `node_budget` nodes and
/// `|A²|` is under the exact cap; greedy otherwise.
pub fn certify_best(a: &Subset, node_budget: u64) -> Result<ApproxCertificate> {
    a.require_approximate_shape()?;
    if a.power(2)?.len() <= EXACT_POINT_CAP {
        if let Some(cert) = solve(a, CertMode::Exact, Some(node_budget))? {
            return Ok(cert);
        }
    }
    certify(a, CertMode::Greedy)
}

/// Drops cover elements not needed for `A² ⊆ EA`, scanning from the largest id.
pub fn prune_cover(cert: &ApproxCertificate) -> Result<ApproxCertificate> {
    let a = &cert.base;
    let mut cover: Vec<ElementId> = cert.cover.to_vec();
    for i in (0..cover.len()).rev() {
        let trial: Vec<ElementId> = cover.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e).collect();
        if !trial.is_empty() && covers_square(a, &Subset::from_ids(a.group(), trial.iter().copied())?)? {
            cover = trial;
        }
    }
    certificate_from_cover(a, Subset::from_ids(a.group(), cover)?, cert.mode)
}

/// `E²` as a cover of `A²`: `A⁴ ⊆ E A³ ⊆ E² A²`. Verified before returning.
pub fn square_cover(cert: &ApproxCertificate) -> Result<Subset> {
    let e2 = cert.cover.power(2)?;
    let a2 = cert.base.power(2)?;
    if !covers_square(&a2, &e2)? {
        return Err(Error::VerificationFailed("E^2 does not cover (A^2)^2".into()));
    }
    Ok(e2)
}

/// `|A^j| / |A|` for `j = 2..=max_power`.
pub fn growth_constants(a: &Subset, max_power: usize) -> Result<Vec<Rational>> {
    a.require_approximate_shape()?;
    let mut out = Vec::new();
    let mut acc = a.clone();
    for _ in 2..=max_power {
        acc = acc.product(a)?;
        out.push(Rational::ratio(acc.len(), a.len()));
    }
    Ok(out)
}

/// Greedy Ruzsa covering: scan `A` in id order and keep `a` whenever `aY`
/// misses every translate `fY` kept so far. The result satisfies
/// `A ⊆ F·Y·Y⁻¹` and `|F| ≤ |AY| / |Y|`.
pub fn ruzsa_cover(a: &Subset, y: &Subset) -> Result<Subset> {
    a.same_group(y)?;
    if y.is_empty() {
        return Err(Error::EmptySet);
    }
    let group = a.group();
    let ys: Vec<ElementId> = y.iter().collect();
    let mut occupied = vec![false; group.order()];
    let mut chosen = Vec::new();
    for x in a.iter() {
        let row = group.row(x);
        if ys.iter().all(|&t| !occupied[row[t] as usize]) {
            for &t in &ys {
                occupied[row[t] as usize] = true;
            }
            chosen.push(x);
        }
    }
    let f = Subset::from_ids(group, chosen)?;
    let reach = f.product(&y.product(&y.inverse())?)?;
    if !a.is_subset_of(&reach)? {
        return Err(Error::VerificationFailed("Ruzsa cover misses part of A".into()));
    }
    Ok(f)
}

/// `|g^{Aⁿ}| ≤ K^{n-1} |g^A|` with `K = k_cert`.
pub fn conjugate_growth_check(cert: &ApproxCertificate, g: ElementId, n: usize) -> Result<bool> {
    let a = &cert.base;
    let lhs = conjugacy_class_under(g, &a.power(n)?).len();
    let rhs = Rational::from(cert.k_cert).pow(n as u32 - 1) * Rational::from(conjugacy_class_under(g, a).len());
    Ok(Rational::from(lhs) <= rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{subgroup_closure, Group, DEFAULT_CLOSURE_CAP};
    use crate::named;
    use std::sync::Arc;

    fn s3() -> Arc<Group> {
        Group::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]], DEFAULT_CLOSURE_CAP).unwrap()
    }

    #[test]
    fn subgroups_certify_with_identity() {
        let g = named::symmetric(4).unwrap();
        let h = subgroup_closure(&Subset::from_ids(&g, [1, 2]).unwrap());
        for mode in [CertMode::Exact, CertMode::Greedy] {
            let cert = certify(&h, mode).unwrap();
            assert_eq!(cert.k_cert, 1);
            assert_eq!(cert.cover.to_vec(), vec![0]);
            assert_eq!(cert.doubling, Rational::one());
        }
        let full = certify(&Subset::full(&g), CertMode::Exact).unwrap();
        assert_eq!(full.k_cert, 1);
    }

    #[test]
    fn shape_errors() {
        let g = s3();
        assert!(matches!(certify(&Subset::from_ids(&g, [1]).unwrap(), CertMode::Exact), Err(Error::MissingIdentity)));
        assert!(matches!(certify(&Subset::from_ids(&g, [0, 2]).unwrap(), CertMode::Exact), Err(Error::NotSymmetric)));
    }

    #[test]
    fn exact_never_worse_than_greedy() {
        let g = named::dihedral(6).unwrap();
        let a = Subset::from_ids(&g, [0, 1, 3, 4]).unwrap().symmetrize();
        let exact = certify(&a, CertMode::Exact).unwrap();
        let greedy = certify(&a, CertMode::Greedy).unwrap();
        assert!(exact.k_cert <= greedy.k_cert);
        assert!(exact.verify().unwrap() && greedy.verify().unwrap());
    }

    /// Brute-force minimum cover by trying every subset of candidates in size order.
    fn brute_force_min(a: &Subset) -> usize {
        let square = a.power(2).unwrap();
        let cands: Vec<ElementId> = square.product(a).unwrap().to_vec();
        for size in 1..=cands.len() {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                let e = Subset::from_ids(a.group(), idx.iter().map(|&i| cands[i])).unwrap();
                if covers_square(a, &e).unwrap() {
                    return size;
                }
                let mut i = size;
                while i > 0 && idx[i - 1] == cands.len() - size + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..size {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn exact_matches_brute_force() {
        let g = named::dihedral(5).unwrap();
        for ids in [vec![0, 2], vec![0, 1, 2], vec![0, 3, 5], vec![0, 2, 4, 1]] {
            let a = Subset::from_ids(&g, ids).unwrap().symmetrize().with_identity();
            assert_eq!(certify(&a, CertMode::Exact).unwrap().k_cert, brute_force_min(&a), "{a:?}");
        }
    }

    #[test]
    fn growth() {
        let g = s3();
        let h = subgroup_closure(&Subset::from_ids(&g, [2]).unwrap());
        assert!(growth_constants(&h, 5).unwrap().iter().all(|r| *r == Rational::one()));
        let a = Subset::from_ids(&g, [0, 1]).unwrap();
        let ratios = growth_constants(&a, 4).unwrap();
        assert_eq!(ratios.len(), 3);
        assert!(ratios.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn square_of_certificate() {
        let g = named::dihedral(8).unwrap();
        let a = Subset::from_ids(&g, [0, 1, 2, 5]).unwrap().symmetrize();
        let cert = certify(&a, CertMode::Greedy).unwrap();
        let e2 = square_cover(&cert).unwrap();
        assert!(e2.len() <= cert.k_cert * cert.k_cert);
    }

    #[test]
    fn ruzsa_on_subgroup() {
        let g = named::symmetric(4).unwrap();
        let h = subgroup_closure(&Subset::from_ids(&g, [1]).unwrap());
        assert_eq!(ruzsa_cover(&h, &h).unwrap().to_vec(), vec![0]);
        assert!(ruzsa_cover(&h, &Subset::empty(&g)).is_err());
    }

    #[test]
    fn conjugate_growth_s3() {
        let g = s3();
        // {1, (0 1)} is already symmetric
        let a = Subset::from_ids(&g, [1]).unwrap().symmetrize().with_identity();
        let cert = certify(&a, CertMode::Greedy).unwrap();
        assert!(conjugate_growth_check(&cert, 2, 3).unwrap());
        assert!(conjugate_growth_check(&cert, 2, 1).unwrap());
        // direct computation of both sides
        let lhs = conjugacy_class_under(2, &a.power(3).unwrap()).len();
        let rhs = cert.k_cert.pow(2) * conjugacy_class_under(2, &a).len();
        assert!(lhs <= rhs);
    }
}
