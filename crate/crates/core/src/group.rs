//! Finite groups given by multiplication tables, plus the element- and
//! subgroup-level primitives everything else is built on: centralizers,
//! conjugacy classes, generated subgroups, commutator subgroups, normal
//! subgroups and quotients.
//!
//! Element ids run over `0..order` and id `0` is always the identity.
//! Products are read left to right; for permutation groups `x * y` means
//! "apply `x`, then `y`".

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::subset::Subset;

pub type ElementId = usize;

/// Default cap on the number of elements a permutation closure may produce.
pub const DEFAULT_CLOSURE_CAP: usize = 20_000;
/// Default cap on conjugacy classes for [`normal_subgroups`].
pub const DEFAULT_CLASS_CAP: usize = 22;
/// Largest order for which associativity is checked on every triple.
pub const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 512;

const ASSOCIATIVITY_SEED: u64 = 0x6173_736f_6369_6174;

pub struct Group {
    order: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    labels: Option<Vec<String>>,
    classes: OnceLock<ClassPartition>,
}

/// Conjugacy classes of a group, ordered by their smallest element.
#[derive(Debug, Clone)]
pub struct ClassPartition {
    class_of: Vec<usize>,
    classes: Vec<Vec<ElementId>>,
}

impl ClassPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, g: ElementId) -> usize {
        self.class_of[g]
    }

    pub fn class(&self, idx: usize) -> &[ElementId] {
        &self.classes[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[ElementId]> {
        self.classes.iter().map(Vec::as_slice)
    }
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group").field("order", &self.order).finish_non_exhaustive()
    }
}

impl Group {
    /// Builds a group from a Cayley table, verifying the group axioms.
    ///
    /// The identity is relabeled to id 0 (by swapping it with whatever
    /// element held id 0). Associativity is checked exhaustively up to
    /// order 512 and on `10 * n^2` seeded random triples above that.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Arc<Group>> {
        Self::from_table_with_labels(table, None)
    }

    pub fn from_table_with_labels(
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Arc<Group>> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotLatinSquare("empty table".into()));
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::SpecParse(format!(
                    "{} labels given for a table of order {n}",
                    labels.len()
                )));
            }
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotLatinSquare(format!("row {i} has length {}", row.len())));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::NotLatinSquare(format!("entry {v} out of range in row {i}")));
                }
                flat.push(v as u32);
            }
        }
        Self::from_flat(n, flat, labels)
    }

    pub(crate) fn from_flat(
        n: usize,
        mut flat: Vec<u32>,
        mut labels: Option<Vec<String>>,
    ) -> Result<Arc<Group>> {
        check_latin(n, &flat)?;
        let e = (0..n)
            .find(|&e| (0..n).all(|x| flat[e * n + x] as usize == x && flat[x * n + e] as usize == x))
            .ok_or(Error::NoIdentity)?;
        if e != 0 {
            flat = swap_labels(n, &flat, 0, e);
            if let Some(labels) = labels.as_mut() {
                labels.swap(0, e);
            }
        }
        let mut inv = vec![u32::MAX; n];
        for x in 0..n {
            let y = (0..n).find(|&y| flat[x * n + y] == 0).ok_or(Error::NoInverse(x))?;
            if flat[y * n + x] != 0 {
                return Err(Error::NoInverse(x));
            }
            inv[x] = y as u32;
        }
        check_associative(n, &flat)?;
        Ok(Arc::new(Group { order: n, table: flat, inv, labels, classes: OnceLock::new() }))
    }

    /// Closure of a list of permutations of `0..degree`, given as image arrays.
    ///
    /// Elements are numbered breadth-first from the identity, trying the
    /// generators in the order given.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>], cap: usize) -> Result<Arc<Group>> {
        for (i, gen) in generators.iter().enumerate() {
            if gen.len() != degree {
                return Err(Error::BadParams(format!(
                    "generator {i} has length {}, expected degree {degree}",
                    gen.len()
                )));
            }
            let mut seen = vec![false; degree];
            for &v in gen {
                if v >= degree || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::BadParams(format!("generator {i} is not a permutation")));
                }
            }
        }

        let identity: Vec<u32> = (0..degree as u32).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<u32>, usize> = HashMap::from([(identity, 0)]);
        // right[s][x] = id of x * s
        let mut right = vec![Vec::new(); generators.len()];
        // parent[y] = (x, s) with y = x * s, for y discovered through x
        let mut parent: Vec<(usize, usize)> = vec![(0, 0)];
        let mut head = 0;
        while head < elements.len() {
            for (s, gen) in generators.iter().enumerate() {
                let x = &elements[head];
                let y: Vec<u32> = x.iter().map(|&i| gen[i as usize] as u32).collect();
                let id = match index.get(&y) {
                    Some(&id) => id,
                    None => {
                        let id = elements.len();
                        if id >= cap {
                            return Err(Error::OrderCapExceeded { order: id + 1, cap });
                        }
                        index.insert(y.clone(), id);
                        elements.push(y);
                        parent.push((head, s));
                        id
                    }
                };
                right[s].push(id as u32);
            }
            head += 1;
        }

        let n = elements.len();
        let mut flat = vec![0u32; n * n];
        for a in 0..n {
            flat[a * n] = a as u32;
            for y in 1..n {
                let (x, s) = parent[y];
                flat[a * n + y] = right[s][flat[a * n + x] as usize];
            }
        }
        let labels = elements.iter().map(|p| cycle_notation(p)).collect();
        Self::from_flat(n, flat, Some(labels))
    }

    /// Direct product with componentwise multiplication; `(g, h)` gets id `g * |H| + h`.
    pub fn direct_product(g: &Group, h: &Group, cap: usize) -> Result<Arc<Group>> {
        let (ng, nh) = (g.order, h.order);
        let n = ng * nh;
        if n > cap {
            return Err(Error::OrderCapExceeded { order: n, cap });
        }
        let mut flat = vec![0u32; n * n];
        for x in 0..n {
            let (xg, xh) = (x / nh, x % nh);
            for y in 0..n {
                let (yg, yh) = (y / nh, y % nh);
                flat[x * n + y] = (g.mul(xg, yg) * nh + h.mul(xh, yh)) as u32;
            }
        }
        let labels = match (&g.labels, &h.labels) {
            (Some(lg), Some(lh)) => {
                Some((0..n).map(|x| format!("({},{})", lg[x / nh], lh[x % nh])).collect())
            }
            _ => None,
        };
        Self::from_flat(n, flat, labels)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> ElementId {
        0
    }

    #[inline]
    pub fn mul(&self, x: ElementId, y: ElementId) -> ElementId {
        self.table[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: ElementId) -> ElementId {
        self.inv[x] as usize
    }

    /// `x⁻¹ g x`.
    #[inline]
    pub fn conj(&self, g: ElementId, x: ElementId) -> ElementId {
        self.mul(self.mul(self.inv(x), g), x)
    }

    /// `[x, y] = x⁻¹ y⁻¹ x y`.
    #[inline]
    pub fn commutator(&self, x: ElementId, y: ElementId) -> ElementId {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    #[inline]
    pub fn commutes(&self, x: ElementId, y: ElementId) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    /// Row `x` of the Cayley table: `row(x)[y] = x * y`.
    #[inline]
    pub(crate) fn row(&self, x: ElementId) -> &[u32] {
        &self.table[x * self.order..(x + 1) * self.order]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: ElementId) -> String {
        match &self.labels {
            Some(labels) => labels[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|x| self.row(x).iter().map(|&v| v as usize).collect()).collect()
    }

    pub fn element_order(&self, x: ElementId) -> usize {
        let mut k = 1;
        let mut p = x;
        while p != 0 {
            p = self.mul(p, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (x + 1..self.order).all(|y| self.commutes(x, y)))
    }

    pub fn conjugacy_classes(&self) -> &ClassPartition {
        self.classes.get_or_init(|| {
            let n = self.order;
            let mut class_of = vec![usize::MAX; n];
            let mut classes = Vec::new();
            for g in 0..n {
                if class_of[g] != usize::MAX {
                    continue;
                }
                let idx = classes.len();
                let mut class = Vec::new();
                for x in 0..n {
                    let c = self.conj(g, x);
                    if class_of[c] == usize::MAX {
                        class_of[c] = idx;
                        class.push(c);
                    }
                }
                class.sort_unstable();
                classes.push(class);
            }
            ClassPartition { class_of, classes }
        })
    }
}

fn check_latin(n: usize, flat: &[u32]) -> Result<()> {
    let mut seen = vec![0usize; n];
    let mut stamp = 0;
    for r in 0..n {
        stamp += 1;
        for c in 0..n {
            let v = flat[r * n + c] as usize;
            if seen[v] == stamp {
                return Err(Error::NotLatinSquare(format!("row {r} repeats {v}")));
            }
            seen[v] = stamp;
        }
    }
    for c in 0..n {
        stamp += 1;
        for r in 0..n {
            let v = flat[r * n + c] as usize;
            if seen[v] == stamp {
                return Err(Error::NotLatinSquare(format!("column {c} repeats {v}")));
            }
            seen[v] = stamp;
        }
    }
    Ok(())
}

fn check_associative(n: usize, flat: &[u32]) -> Result<()> {
    let m = |x: usize, y: usize| flat[x * n + y] as usize;
    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        for x in 0..n {
            for y in 0..n {
                let xy = m(x, y);
                for z in 0..n {
                    if m(xy, z) != m(x, m(y, z)) {
                        return Err(Error::NotAssociative(x, y, z));
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(ASSOCIATIVITY_SEED);
        for _ in 0..10 * n * n {
            let (x, y, z) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
            if m(m(x, y), z) != m(x, m(y, z)) {
                return Err(Error::NotAssociative(x, y, z));
            }
        }
    }
    Ok(())
}

/// Relabels elements `a` and `b` in a flattened table.
fn swap_labels(n: usize, flat: &[u32], a: usize, b: usize) -> Vec<u32> {
    let relabel = |x: usize| if x == a { b } else if x == b { a } else { x };
    let mut out = vec![0u32; n * n];
    for x in 0..n {
        for y in 0..n {
            out[relabel(x) * n + relabel(y)] = relabel(flat[x * n + y] as usize) as u32;
        }
    }
    out
}

fn cycle_notation(perm: &[u32]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut i = start;
        let mut first = true;
        while !seen[i] {
            seen[i] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&i.to_string());
            first = false;
            i = perm[i] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Incrementally maintained subgroup: membership, element list and the
/// generators added so far.
pub(crate) struct Closure<'g> {
    group: &'g Group,
    members: Vec<bool>,
    elements: Vec<ElementId>,
    gens: Vec<ElementId>,
}

impl<'g> Closure<'g> {
    pub(crate) fn trivial(group: &'g Group) -> Self {
        let mut members = vec![false; group.order()];
        members[0] = true;
        Closure { group, members, elements: vec![0], gens: Vec::new() }
    }

    pub(crate) fn contains(&self, x: ElementId) -> bool {
        self.members[x]
    }

    /// Adds `x` as a generator unless it already lies in the subgroup.
    pub(crate) fn add(&mut self, x: ElementId) {
        if self.members[x] {
            return;
        }
        self.gens.push(x);
        let mut i = 0;
        while i < self.elements.len() {
            let e = self.elements[i];
            for k in 0..self.gens.len() {
                let p = self.group.mul(e, self.gens[k]);
                if !self.members[p] {
                    self.members[p] = true;
                    self.elements.push(p);
                }
            }
            i += 1;
        }
    }

    pub(crate) fn is_full(&self) -> bool {
        self.elements.len() == self.group.order()
    }

    pub(crate) fn into_subset(self, group: &Arc<Group>) -> Subset {
        Subset::from_ids_unchecked(group, self.elements.iter().copied())
    }
}

/// The subgroup generated by `s`; `{1}` when `s` is empty.
pub fn subgroup_closure(s: &Subset) -> Subset {
    let group = s.group();
    let mut closure = Closure::trivial(group);
    for x in s.iter() {
        closure.add(x);
        if closure.is_full() {
            break;
        }
    }
    closure.into_subset(group)
}

/// `C_X(g) = { x ∈ X : xg = gx }`.
pub fn centralizer_in(x: &Subset, g: ElementId) -> Subset {
    let group = x.group();
    Subset::from_ids_unchecked(group, x.iter().filter(|&y| group.commutes(y, g)))
}

/// `g^X = { x⁻¹ g x : x ∈ X }`.
pub fn conjugacy_class_under(g: ElementId, x: &Subset) -> Subset {
    let group = x.group();
    Subset::from_ids_unchecked(group, x.iter().map(|y| group.conj(g, y)))
}

/// Size of `g^X` without materializing it.
pub fn class_size_under(g: ElementId, x: &Subset) -> usize {
    conjugacy_class_under(g, x).len()
}

/// Intersection of the centralizers of every element of `gs`, restricted to `x`.
pub fn common_centralizer_in(x: &Subset, gs: &[ElementId]) -> Subset {
    let group = x.group();
    Subset::from_ids_unchecked(group, x.iter().filter(|&y| gs.iter().all(|&g| group.commutes(y, g))))
}

/// The subgroup generated by all commutators `[x, y]`, `x ∈ X`, `y ∈ Y`.
pub fn commutator_subgroup(x: &Subset, y: &Subset) -> Result<Subset> {
    x.same_group(y)?;
    let group = x.group();
    let mut closure = Closure::trivial(group);
    let ys: Vec<ElementId> = y.iter().collect();
    'outer: for a in x.iter() {
        for &b in &ys {
            closure.add(group.commutator(a, b));
            if closure.is_full() {
                break 'outer;
            }
        }
    }
    Ok(closure.into_subset(group))
}

/// The center `Z(G)`.
pub fn center(group: &Arc<Group>) -> Subset {
    let n = group.order();
    Subset::from_ids_unchecked(group, (0..n).filter(|&z| (0..n).all(|x| group.commutes(z, x))))
}

pub fn is_subgroup(s: &Subset) -> bool {
    let group = s.group();
    if !s.contains(0) {
        return false;
    }
    let members: Vec<ElementId> = s.iter().collect();
    members.iter().all(|&x| members.iter().all(|&y| s.contains(group.mul(x, y))))
}

/// Whether `s` is invariant under conjugation by every element of the group.
pub fn is_conjugation_invariant(s: &Subset) -> bool {
    let group = s.group();
    s.iter().all(|x| (0..group.order()).all(|g| s.contains(group.conj(x, g))))
}

pub fn is_normal_subgroup(s: &Subset) -> bool {
    is_subgroup(s) && is_conjugation_invariant(s)
}

/// All normal subgroups, found as unions of conjugacy classes.
///
/// The search decides classes in order (include/exclude). Including a class
/// replaces the current subgroup by the subgroup generated with that class
/// added; the branch dies as soon as that closure reaches an excluded class.
/// Output is sorted by order, then by member ids.
pub fn normal_subgroups(group: &Arc<Group>, class_cap: usize) -> Result<Vec<Subset>> {
    let classes = group.conjugacy_classes();
    if classes.len() > class_cap {
        return Err(Error::ClassCountCapExceeded { classes: classes.len(), cap: class_cap });
    }
    let mut out = Vec::new();
    let mut excluded = vec![false; classes.len()];
    let start = Closure::trivial(group);
    search_normal(group, classes, 1, &start, &mut excluded, &mut out);
    let mut subsets: Vec<Subset> = out.into_iter().map(|ids| Subset::from_ids_unchecked(group, ids)).collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.to_vec().cmp(&b.to_vec())));
    Ok(subsets)
}

fn search_normal(
    group: &Group,
    classes: &ClassPartition,
    from: usize,
    current: &Closure<'_>,
    excluded: &mut Vec<bool>,
    out: &mut Vec<Vec<ElementId>>,
) {
    let next = (from..classes.len()).find(|&c| !excluded[c] && !current.contains(classes.class(c)[0]));
    let Some(c) = next else {
        out.push(current.elements.clone());
        return;
    };

    let mut grown = Closure {
        group,
        members: current.members.clone(),
        elements: current.elements.clone(),
        gens: current.gens.clone(),
    };
    for &x in classes.class(c) {
        grown.add(x);
    }
    let escapes = grown.elements.iter().any(|&x| excluded[classes.class_of(x)]);
    if !escapes {
        search_normal(group, classes, c + 1, &grown, excluded, out);
    }

    excluded[c] = true;
    search_normal(group, classes, c + 1, current, excluded, out);
    excluded[c] = false;
}

/// The natural projection `G → G/N`.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    source: Arc<Group>,
    target: Arc<Group>,
    projection: Vec<ElementId>,
    kernel: Subset,
    representatives: Vec<ElementId>,
}

impl QuotientMap {
    pub fn source(&self) -> &Arc<Group> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Group> {
        &self.target
    }

    pub fn kernel(&self) -> &Subset {
        &self.kernel
    }

    pub fn project(&self, x: ElementId) -> ElementId {
        self.projection[x]
    }

    pub fn projection(&self) -> &[ElementId] {
        &self.projection
    }

    /// Coset representative (smallest id in the coset) of target element `t`.
    pub fn representative(&self, t: ElementId) -> ElementId {
        self.representatives[t]
    }

    /// The image `XN/N` of a subset of the source group.
    pub fn image(&self, x: &Subset) -> Result<Subset> {
        if !Arc::ptr_eq(x.group(), &self.source) {
            return Err(Error::GroupMismatch);
        }
        Ok(Subset::from_ids_unchecked(&self.target, x.iter().map(|g| self.projection[g])))
    }
}

/// `G/N`, with each coset represented by its smallest element id.
pub fn quotient(n: &Subset) -> Result<QuotientMap> {
    if !is_subgroup(n) {
        return Err(Error::NotSubgroup);
    }
    if !is_conjugation_invariant(n) {
        return Err(Error::NotNormal);
    }
    let group = n.group();
    let order = group.order();
    let kernel: Vec<ElementId> = n.iter().collect();
    let mut projection = vec![usize::MAX; order];
    let mut reps = Vec::new();
    for x in 0..order {
        if projection[x] != usize::MAX {
            continue;
        }
        let t = reps.len();
        reps.push(x);
        for &k in &kernel {
            projection[group.mul(x, k)] = t;
        }
    }
    let m = reps.len();
    let mut flat = vec![0u32; m * m];
    for i in 0..m {
        for j in 0..m {
            flat[i * m + j] = projection[group.mul(reps[i], reps[j])] as u32;
        }
    }
    let labels = group.labels().map(|l| reps.iter().map(|&r| format!("{}N", l[r])).collect());
    let target = Group::from_flat(m, flat, labels)?;
    Ok(QuotientMap { source: group.clone(), target, projection, kernel: n.clone(), representatives: reps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    fn s3() -> Arc<Group> {
        Group::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]], DEFAULT_CLOSURE_CAP).unwrap()
    }

    /// Brute-force S3 table from explicit composition of all six permutations.
    fn s3_oracle_table() -> Vec<Vec<usize>> {
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let find = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        perms
            .iter()
            .map(|x| perms.iter().map(|y| find([y[x[0]], y[x[1]], y[x[2]]])).collect())
            .collect()
    }

    #[test]
    fn trivial_and_c2_tables() {
        let t = Group::from_table(vec![vec![0]]).unwrap();
        assert_eq!(t.order(), 1);
        let c2 = Group::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(c2.order(), 2);
        assert_eq!(c2.inv(1), 1);
    }

    #[test]
    fn s3_from_table_has_three_classes() {
        let g = Group::from_table(s3_oracle_table()).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.conjugacy_classes().len(), 3);
    }

    #[test]
    fn identity_is_relabeled_to_zero() {
        // C2 with the identity stored at index 1.
        let g = Group::from_table(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn table_errors() {
        assert!(matches!(
            Group::from_table(vec![vec![0, 1], vec![0, 1]]),
            Err(Error::NotLatinSquare(_))
        ));
        assert!(matches!(
            Group::from_table(vec![vec![0, 2], vec![1, 0]]),
            Err(Error::NotLatinSquare(_))
        ));
        let no_identity = vec![vec![1, 2, 0], vec![0, 1, 2], vec![2, 0, 1]];
        // row 1 is the identity row but column 1 is not: x*1 != x for x = 0
        assert!(matches!(Group::from_table(no_identity), Err(Error::NoIdentity)));
        // Loop of order 5 with identity and inverses that is not associative.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(Group::from_table(loop5), Err(Error::NotAssociative(..))));
    }

    #[test]
    fn permutation_closure() {
        let t = Group::from_permutations(3, &[], DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(t.order(), 1);
        let c2 = Group::from_permutations(2, &[vec![1, 0]], DEFAULT_CLOSURE_CAP).unwrap();
        assert_eq!(c2.order(), 2);
        let g = s3();
        assert_eq!(g.order(), 6);
        // breadth-first order: (), (0 1), (0 1 2), ...
        assert_eq!(g.label(0), "()");
        assert_eq!(g.label(1), "(0 1)");
        assert_eq!(g.label(2), "(0 1 2)");
        assert!(matches!(
            Group::from_permutations(4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 10),
            Err(Error::OrderCapExceeded { .. })
        ));
        assert!(Group::from_permutations(3, &[vec![0, 0, 1]], 100).is_err());
    }

    #[test]
    fn direct_products() {
        let c2 = named::cyclic(2).unwrap();
        let trivial = named::cyclic(1).unwrap();
        let copy = Group::direct_product(&trivial, &c2, 100).unwrap();
        assert_eq!(copy.table(), c2.table());
        let v4 = Group::direct_product(&c2, &c2, 100).unwrap();
        assert!((1..4).all(|x| v4.element_order(x) == 2));
        let s3c2 = Group::direct_product(&s3(), &c2, 100).unwrap();
        assert_eq!(s3c2.order(), 12);
        assert_eq!(s3c2.conjugacy_classes().len(), 6);
        assert!(matches!(Group::direct_product(&s3(), &c2, 11), Err(Error::OrderCapExceeded { .. })));
    }

    #[test]
    fn closures_and_centralizers() {
        let g = s3();
        let id = Subset::from_ids(&g, [0]).unwrap();
        assert_eq!(subgroup_closure(&id).to_vec(), vec![0]);
        let rot = Subset::from_ids(&g, [2]).unwrap();
        assert_eq!(subgroup_closure(&rot).len(), 3);
        let all = Subset::full(&g);
        assert_eq!(centralizer_in(&all, 0), all);
        assert_eq!(centralizer_in(&all, 1).len(), 2);
        assert_eq!(conjugacy_class_under(2, &id).to_vec(), vec![2]);
        assert_eq!(conjugacy_class_under(1, &all).len(), 3);
    }

    #[test]
    fn commutators() {
        let g = s3();
        let all = Subset::full(&g);
        let derived = commutator_subgroup(&all, &all).unwrap();
        assert_eq!(derived.len(), 3);
        assert_eq!(derived, subgroup_closure(&Subset::from_ids(&g, [2]).unwrap()));
        let z = center(&g);
        assert_eq!(commutator_subgroup(&z, &all).unwrap().len(), 1);
    }

    #[test]
    fn normal_subgroup_examples() {
        let c7 = named::cyclic(7).unwrap();
        assert_eq!(normal_subgroups(&c7, DEFAULT_CLASS_CAP).unwrap().len(), 2);
        let g = s3();
        let sizes: Vec<usize> = normal_subgroups(&g, DEFAULT_CLASS_CAP).unwrap().iter().map(Subset::len).collect();
        assert_eq!(sizes, vec![1, 3, 6]);
        let d4 = named::dihedral(4).unwrap();
        assert_eq!(normal_subgroups(&d4, DEFAULT_CLASS_CAP).unwrap().len(), 6);
        let c30 = named::cyclic(30).unwrap();
        assert!(matches!(
            normal_subgroups(&c30, DEFAULT_CLASS_CAP),
            Err(Error::ClassCountCapExceeded { classes: 30, cap: 22 })
        ));
        assert_eq!(normal_subgroups(&c30, 64).unwrap().len(), 8);
    }

    #[test]
    fn quotients() {
        let g = s3();
        let trivial = Subset::from_ids(&g, [0]).unwrap();
        let q = quotient(&trivial).unwrap();
        assert_eq!(q.target().order(), 6);
        let full = quotient(&Subset::full(&g)).unwrap();
        assert_eq!(full.target().order(), 1);
        let a3 = subgroup_closure(&Subset::from_ids(&g, [2]).unwrap());
        let q = quotient(&a3).unwrap();
        assert_eq!(q.target().order(), 2);
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(q.project(g.mul(x, y)), q.target().mul(q.project(x), q.project(y)));
            }
        }
        let c2 = subgroup_closure(&Subset::from_ids(&g, [1]).unwrap());
        assert!(matches!(quotient(&c2), Err(Error::NotNormal)));
        let not_sub = Subset::from_ids(&g, [0, 1, 2]).unwrap();
        assert!(matches!(quotient(&not_sub), Err(Error::NotSubgroup)));
    }
}
