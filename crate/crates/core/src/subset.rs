//! Dense subsets of a group and the set algebra on them: product sets,
//! powers, inverses, symmetrization and translates.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{ElementId, Group};

/// A subset of one group, stored as a bitset over element ids.
///
/// Values are immutable; every operation returns a new subset.
#[derive(Clone)]
pub struct Subset {
    group: Arc<Group>,
    words: Vec<u64>,
    len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl PartialEq for Subset {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) && self.words == other.words
    }
}

impl Eq for Subset {}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl Subset {
    pub fn empty(group: &Arc<Group>) -> Self {
        Subset { group: group.clone(), words: vec![0; word_count(group.order())], len: 0 }
    }

    pub fn full(group: &Arc<Group>) -> Self {
        let n = group.order();
        let mut words = vec![u64::MAX; word_count(n)];
        if n % 64 != 0 {
            *words.last_mut().unwrap() = (1u64 << (n % 64)) - 1;
        }
        Subset { group: group.clone(), words, len: n }
    }

    pub fn identity(group: &Arc<Group>) -> Self {
        Self::from_ids_unchecked(group, [0])
    }

    pub fn from_ids(group: &Arc<Group>, ids: impl IntoIterator<Item = ElementId>) -> Result<Self> {
        let mut out = Self::empty(group);
        for id in ids {
            if id >= group.order() {
                return Err(Error::InvalidElement(id));
            }
            out.insert(id);
        }
        Ok(out)
    }

    pub(crate) fn from_ids_unchecked(group: &Arc<Group>, ids: impl IntoIterator<Item = ElementId>) -> Self {
        let mut out = Self::empty(group);
        for id in ids {
            out.insert(id);
        }
        out
    }

    pub(crate) fn from_predicate(group: &Arc<Group>, mut pred: impl FnMut(ElementId) -> bool) -> Self {
        Self::from_ids_unchecked(group, (0..group.order()).filter(|&x| pred(x)))
    }

    #[inline]
    fn insert(&mut self, id: ElementId) -> bool {
        let (w, b) = (id / 64, 1u64 << (id % 64));
        let fresh = self.words[w] & b == 0;
        if fresh {
            self.words[w] |= b;
            self.len += 1;
        }
        fresh
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    #[inline]
    pub fn contains(&self, id: ElementId) -> bool {
        id < self.group.order() && self.words[id / 64] & (1u64 << (id % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.group.order()
    }

    /// Member ids in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<ElementId> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<ElementId> {
        self.iter().next()
    }

    pub(crate) fn same_group(&self, other: &Subset) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    fn zip_words(&self, other: &Subset, f: impl Fn(u64, u64) -> u64) -> Result<Subset> {
        self.same_group(other)?;
        let words: Vec<u64> = self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect();
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(Subset { group: self.group.clone(), words, len })
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Subset) -> Result<Subset> {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Subset) -> Result<Subset> {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn intersection_len(&self, other: &Subset) -> Result<usize> {
        self.same_group(other)?;
        Ok(self.words.iter().zip(&other.words).map(|(&a, &b)| (a & b).count_ones() as usize).sum())
    }

    pub fn is_subset_of(&self, other: &Subset) -> Result<bool> {
        self.same_group(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0))
    }

    pub fn is_disjoint(&self, other: &Subset) -> Result<bool> {
        Ok(self.intersection_len(other)? == 0)
    }

    /// The product set `XY = { xy : x ∈ X, y ∈ Y }`.
    pub fn product(&self, other: &Subset) -> Result<Subset> {
        self.same_group(other)?;
        let n = self.group.order();
        let ys: Vec<ElementId> = other.iter().collect();
        let mut out = Subset::empty(&self.group);
        for x in self.iter() {
            let row = self.group.row(x);
            for &y in &ys {
                out.insert(row[y] as usize);
            }
            if out.len == n {
                break;
            }
        }
        Ok(out)
    }

    /// `X^j`, the set of products of `j` elements of `X`.
    pub fn power(&self, j: usize) -> Result<Subset> {
        if j == 0 {
            return Err(Error::BadParams("power exponent must be at least 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..j {
            if acc.is_full() && !self.is_empty() {
                break;
            }
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    /// `X⁻¹`.
    pub fn inverse(&self) -> Subset {
        Subset::from_ids_unchecked(&self.group, self.iter().map(|x| self.group.inv(x)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|x| self.contains(self.group.inv(x)))
    }

    /// `X ∪ X⁻¹`.
    pub fn symmetrize(&self) -> Subset {
        let mut out = self.clone();
        for x in self.iter() {
            out.insert(self.group.inv(x));
        }
        out
    }

    pub fn with_identity(&self) -> Subset {
        let mut out = self.clone();
        out.insert(0);
        out
    }

    pub fn contains_identity(&self) -> bool {
        self.contains(0)
    }

    /// `gX` or `Xg`.
    pub fn translate(&self, g: ElementId, side: Side) -> Subset {
        let group = &self.group;
        match side {
            Side::Left => Subset::from_ids_unchecked(group, self.iter().map(|x| group.mul(g, x))),
            Side::Right => Subset::from_ids_unchecked(group, self.iter().map(|x| group.mul(x, g))),
        }
    }

    /// Errors unless the subset is symmetric and contains the identity.
    pub fn require_approximate_shape(&self) -> Result<()> {
        if !self.contains_identity() {
            return Err(Error::MissingIdentity);
        }
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(())
    }
}
