//! Brute-force oracles shared by the integration tests. They use only the
//! multiplication table, never the library's own algorithms.

#![allow(dead_code)]

use std::collections::BTreeSet;

use approxcommute::{Group, Rational};

pub fn commuting_pairs(g: &Group, x: &[usize], y: &[usize]) -> usize {
    x.iter().flat_map(|&a| y.iter().map(move |&b| (a, b))).filter(|&(a, b)| g.mul(a, b) == g.mul(b, a)).count()
}

pub fn pr(g: &Group, x: &[usize], y: &[usize]) -> Rational {
    Rational::ratio(commuting_pairs(g, x, y), x.len() * y.len())
}

pub fn all(g: &Group) -> Vec<usize> {
    (0..g.order()).collect()
}

pub fn inverse(g: &Group, x: usize) -> usize {
    (0..g.order()).find(|&y| g.mul(x, y) == 0).expect("group element has an inverse")
}

/// `x⁻¹ g x`.
pub fn conj(g: &Group, e: usize, x: usize) -> usize {
    g.mul(g.mul(inverse(g, x), e), x)
}

pub fn class_under(g: &Group, e: usize, xs: &[usize]) -> BTreeSet<usize> {
    xs.iter().map(|&x| conj(g, e, x)).collect()
}

pub fn product(g: &Group, x: &[usize], y: &[usize]) -> Vec<usize> {
    let s: BTreeSet<usize> = x.iter().flat_map(|&a| y.iter().map(move |&b| g.mul(a, b))).collect();
    s.into_iter().collect()
}

pub fn power(g: &Group, x: &[usize], n: usize) -> Vec<usize> {
    let mut acc = x.to_vec();
    for _ in 1..n {
        acc = product(g, &acc, x);
    }
    acc
}

/// Subgroup generated by `gens`, by repeated multiplication until stable.
pub fn closure(g: &Group, gens: &[usize]) -> Vec<usize> {
    let mut set: BTreeSet<usize> = BTreeSet::from([0]);
    set.extend(gens.iter().copied());
    loop {
        let items: Vec<usize> = set.iter().copied().collect();
        let before = set.len();
        for &a in &items {
            for &b in &items {
                set.insert(g.mul(a, b));
            }
        }
        if set.len() == before {
            return set.into_iter().collect();
        }
    }
}

/// Every subgroup, found by closing each known subgroup under one more element.
pub fn all_subgroups(g: &Group) -> Vec<Vec<usize>> {
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::from([vec![0]]);
    let mut queue: Vec<(Vec<usize>, Vec<usize>)> = vec![(vec![0], Vec::new())];
    while let Some((h, gens)) = queue.pop() {
        for x in 0..g.order() {
            if h.binary_search(&x).is_ok() {
                continue;
            }
            let mut next_gens = gens.clone();
            next_gens.push(x);
            let k = generated(g, &next_gens);
            if found.insert(k.clone()) {
                queue.push((k, next_gens));
            }
        }
    }
    found.into_iter().collect()
}

/// `⟨gens⟩` by breadth-first right multiplication.
fn generated(g: &Group, gens: &[usize]) -> Vec<usize> {
    let mut members = vec![false; g.order()];
    let mut elems = vec![0];
    members[0] = true;
    let mut i = 0;
    while i < elems.len() {
        let e = elems[i];
        for &s in gens {
            let p = g.mul(e, s);
            if !members[p] {
                members[p] = true;
                elems.push(p);
            }
        }
        i += 1;
    }
    elems.sort_unstable();
    elems
}

pub fn is_normal(g: &Group, h: &[usize]) -> bool {
    let inv: Vec<usize> = (0..g.order()).map(|x| inverse(g, x)).collect();
    (0..g.order()).all(|x| h.iter().all(|&e| h.binary_search(&g.mul(g.mul(inv[x], e), x)).is_ok()))
}

/// Subgroup generated by all `[x, y]` with `x ∈ X`, `y ∈ Y`.
pub fn commutator_group(g: &Group, x: &[usize], y: &[usize]) -> Vec<usize> {
    let inv: Vec<usize> = (0..g.order()).map(|e| inverse(g, e)).collect();
    let inv = &inv;
    let comms: BTreeSet<usize> =
        x.iter().flat_map(|&a| y.iter().map(move |&b| g.mul(g.mul(inv[a], inv[b]), g.mul(a, b)))).collect();
    closure(g, &comms.into_iter().collect::<Vec<_>>())
}

pub fn intersection_len(x: &[usize], y: &[usize]) -> usize {
    x.iter().filter(|e| y.contains(e)).count()
}

pub fn is_subset(x: &[usize], y: &[usize]) -> bool {
    x.iter().all(|e| y.contains(e))
}
