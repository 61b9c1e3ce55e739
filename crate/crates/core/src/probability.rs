//! Exact commuting probabilities between subsets.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::ElementId;
use crate::rational::Rational;
use crate::subset::Subset;

/// Number of commuting pairs `(x, y) ∈ X × Y`, i.e. `Σ_{y ∈ Y} |C_X(y)|`.
pub fn commuting_pairs(x: &Subset, y: &Subset) -> Result<usize> {
    x.same_group(y)?;
    let group = x.group();
    let xs: Vec<ElementId> = x.iter().collect();
    let ys: Vec<ElementId> = y.iter().collect();
    let count = |&b: &ElementId| xs.iter().filter(|&&a| group.commutes(a, b)).count();
    // Per-element sums are independent; the reduction is an integer sum.
    let total = if xs.len() * ys.len() > 1 << 18 {
        ys.par_iter().map(count).sum()
    } else {
        ys.iter().map(count).sum()
    };
    Ok(total)
}

/// `pr(X, Y)`: the probability that random `x ∈ X` and `y ∈ Y` commute.
pub fn commuting_probability(x: &Subset, y: &Subset) -> Result<Rational> {
    x.same_group(y)?;
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySet);
    }
    let pairs = commuting_pairs(x, y)?;
    Ok(Rational::ratio(pairs, x.len() * y.len()))
}

/// For each `y ∈ Y` (in id order), the ratio `|C_X(y)| / |X|`.
pub fn centralizer_profile(x: &Subset, y: &Subset) -> Result<Vec<(ElementId, Rational)>> {
    x.same_group(y)?;
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySet);
    }
    let group = x.group();
    let xs: Vec<ElementId> = x.iter().collect();
    Ok(y
        .iter()
        .map(|b| {
            let c = xs.iter().filter(|&&a| group.commutes(a, b)).count();
            (b, Rational::ratio(c, xs.len()))
        })
        .collect())
}
