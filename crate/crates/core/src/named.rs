//! Standard small-group families used by the corpus and the tests.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Group, DEFAULT_CLOSURE_CAP};

/// Cyclic group `C_n` with id `i` standing for the `i`-th power of a generator.
pub fn cyclic(n: usize) -> Result<Arc<Group>> {
    if n == 0 {
        return Err(Error::BadParams("cyclic group needs n >= 1".into()));
    }
    let flat = (0..n).flat_map(|i| (0..n).map(move |j| ((i + j) % n) as u32)).collect();
    let labels = (0..n).map(|i| format!("r^{i}")).collect();
    Group::from_flat(n, flat, Some(labels))
}

/// Dihedral group of order `2n`, elements `r^i s^j` with id `2i + j`.
pub fn dihedral(n: usize) -> Result<Arc<Group>> {
    if n == 0 {
        return Err(Error::BadParams("dihedral group needs n >= 1".into()));
    }
    let order = 2 * n;
    let mut flat = vec![0u32; order * order];
    for x in 0..order {
        let (i, j) = (x / 2, x % 2);
        for y in 0..order {
            let (k, l) = (y / 2, y % 2);
            // s r^k = r^-k s
            let rot = if j == 0 { (i + k) % n } else { (i + n - k) % n };
            flat[x * order + y] = (2 * rot + (j ^ l)) as u32;
        }
    }
    let labels = (0..order).map(|x| format!("r^{}{}", x / 2, if x % 2 == 1 { "s" } else { "" })).collect();
    Group::from_flat(order, flat, Some(labels))
}

/// Dicyclic group of order `4n` (`n = 2` gives the quaternion group `Q8`).
///
/// Elements `a^i x^j` with `a^{2n} = 1`, `x^2 = a^n`, `x⁻¹ a x = a⁻¹`; id `2i + j`.
pub fn dicyclic(n: usize) -> Result<Arc<Group>> {
    if n < 1 {
        return Err(Error::BadParams("dicyclic group needs n >= 1".into()));
    }
    let m = 2 * n;
    let order = 2 * m;
    let mut flat = vec![0u32; order * order];
    for x in 0..order {
        let (i, j) = (x / 2, x % 2);
        for y in 0..order {
            let (k, l) = (y / 2, y % 2);
            let (rot, top) = if j == 0 {
                ((i + k) % m, l)
            } else if l == 0 {
                ((i + m - k) % m, 1)
            } else {
                // x a^k x = a^-k x^2 = a^{n-k}
                ((i + m - k + n) % m, 0)
            };
            flat[x * order + y] = (2 * rot + top) as u32;
        }
    }
    let labels = (0..order).map(|x| format!("a^{}{}", x / 2, if x % 2 == 1 { "x" } else { "" })).collect();
    Group::from_flat(order, flat, Some(labels))
}

fn transposition(d: usize, a: usize, b: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..d).collect();
    p.swap(a, b);
    p
}

fn long_cycle(d: usize) -> Vec<usize> {
    (0..d).map(|i| (i + 1) % d).collect()
}

/// Symmetric group on `d` points, generated by `(0 1)` and `(0 1 ... d-1)`.
pub fn symmetric(d: usize) -> Result<Arc<Group>> {
    if d <= 1 {
        return Group::from_permutations(d, &[], DEFAULT_CLOSURE_CAP);
    }
    Group::from_permutations(d, &[transposition(d, 0, 1), long_cycle(d)], DEFAULT_CLOSURE_CAP)
}

/// Alternating group on `d` points, generated by the 3-cycles `(0 1 i)`.
pub fn alternating(d: usize) -> Result<Arc<Group>> {
    let gens: Vec<Vec<usize>> = (2..d)
        .map(|i| {
            let mut p: Vec<usize> = (0..d).collect();
            p[0] = 1;
            p[1] = i;
            p[i] = 0;
            p
        })
        .collect();
    Group::from_permutations(d, &gens, DEFAULT_CLOSURE_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(cyclic(5).unwrap().order(), 5);
        assert_eq!(dihedral(4).unwrap().order(), 8);
        assert_eq!(dihedral(1).unwrap().order(), 2);
        assert_eq!(dicyclic(2).unwrap().order(), 8);
        assert_eq!(dicyclic(4).unwrap().order(), 16);
        assert_eq!(symmetric(4).unwrap().order(), 24);
        assert_eq!(alternating(4).unwrap().order(), 12);
        assert_eq!(alternating(5).unwrap().order(), 60);
        assert_eq!(symmetric(1).unwrap().order(), 1);
    }

    #[test]
    fn quaternion_structure() {
        let q8 = dicyclic(2).unwrap();
        // one involution, six elements of order 4
        let orders: Vec<usize> = (0..8).map(|x| q8.element_order(x)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 2).count(), 1);
        assert_eq!(orders.iter().filter(|&&o| o == 4).count(), 6);
        assert_eq!(q8.conjugacy_classes().len(), 5);
    }

    #[test]
    fn dihedral_structure() {
        let d4 = dihedral(4).unwrap();
        assert_eq!(d4.conjugacy_classes().len(), 5);
        assert!(!d4.is_abelian());
        assert!(dihedral(2).unwrap().is_abelian());
    }
}
