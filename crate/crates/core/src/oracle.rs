//! Slow reference implementations used to cross-check the fast paths.

use crate::finspan::{FinMap, Span, SpanCell};
use crate::perm::next_permutation;

/// Tries every bijection between the apexes.
pub fn spans_isomorphic_brute(f: &Span, g: &Span) -> bool {
    if f.src != g.src || f.tgt != g.tgt || f.apex() != g.apex() {
        return false;
    }
    let mut p: Vec<usize> = (0..f.apex()).collect();
    loop {
        let ok = (0..f.apex()).all(|a| {
            g.left.apply(p[a]) == f.left.apply(a) && g.right.apply(p[a]) == f.right.apply(a)
        });
        if ok {
            return true;
        }
        if !next_permutation(&mut p) {
            return false;
        }
    }
}

/// An automorphism of a span that rotates each fiber by a seed-dependent step.
pub fn some_automorphism(s: &Span, seed: u64) -> SpanCell {
    let mut fibers: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
    for a in 0..s.apex() {
        fibers
            .entry((s.left.apply(a), s.right.apply(a)))
            .or_default()
            .push(a);
    }
    let mut table = vec![0; s.apex()];
    for (k, xs) in fibers.values().enumerate() {
        let step = (seed.rotate_left(k as u32 * 5) as usize) % xs.len();
        for (i, &x) in xs.iter().enumerate() {
            table[x] = xs[(i + step) % xs.len()];
        }
    }
    SpanCell::new(s.clone(), s.clone(), FinMap::new(s.apex(), table).unwrap()).unwrap()
}

/// Evaluates the simplicial operator of a monotone injection `[k] → [n]`,
/// given by its image, by deleting missing vertices from the top down.
pub fn restrict_along(
    faces: &dyn Fn(usize, usize, usize) -> usize,
    n: usize,
    image: &[usize],
    x: usize,
) -> usize {
    let mut level = n;
    let mut cur = x;
    for v in (0..=n).rev() {
        if !image.contains(&v) {
            cur = faces(level, v, cur);
            level -= 1;
        }
    }
    cur
}
