//! Triangulations and subdivisions of the polygon with vertices `0..=n`.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Triangulation {
    pub n: usize,
    /// Sorted vertex triples, listed in lexicographic order.
    pub triangles: Vec<[usize; 3]>,
}

impl Triangulation {
    pub fn new(n: usize, mut triangles: Vec<[usize; 3]>) -> Self {
        for t in &mut triangles {
            t.sort_unstable();
        }
        triangles.sort_unstable();
        Triangulation { n, triangles }
    }

    /// All diagonals drawn from vertex `apex`.
    pub fn fan(n: usize, apex: usize) -> Self {
        let ring: Vec<usize> = (0..=n).map(|k| (apex + k) % (n + 1)).collect();
        let triangles = (1..n).map(|k| [apex, ring[k], ring[k + 1]]).collect();
        Triangulation::new(n, triangles)
    }

    /// The fan from `ring[apex_pos]` over a convex vertex list in cyclic order.
    pub(crate) fn fan_over(ring: &[usize], apex_pos: usize) -> Vec<[usize; 3]> {
        let k = ring.len();
        (1..k.saturating_sub(1))
            .map(|j| {
                let mut t = [
                    ring[apex_pos],
                    ring[(apex_pos + j) % k],
                    ring[(apex_pos + j + 1) % k],
                ];
                t.sort_unstable();
                t
            })
            .collect()
    }

    pub fn contains(&self, t: [usize; 3]) -> bool {
        self.triangles.contains(&t)
    }

    pub fn position(&self, t: [usize; 3]) -> Option<usize> {
        self.triangles.iter().position(|&x| x == t)
    }

    /// Diagonals, i.e. triangle edges that are not polygon sides.
    pub fn diagonals(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])])
            .filter(|&(a, b)| !is_side(self.n, a, b))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn as_subdivision(&self) -> Subdivision {
        Subdivision {
            n: self.n,
            cells: self.triangles.iter().map(|t| t.to_vec()).collect(),
        }
    }

    /// Applies a vertex relabelling.
    pub fn relabel(&self, n: usize, f: impl Fn(usize) -> usize) -> Triangulation {
        Triangulation::new(
            n,
            self.triangles
                .iter()
                .map(|t| [f(t[0]), f(t[1]), f(t[2])])
                .collect(),
        )
    }
}

impl std::fmt::Display for Triangulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .triangles
            .iter()
            .map(|t| format!("{}{}{}", t[0], t[1], t[2]))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub(crate) fn is_side(n: usize, a: usize, b: usize) -> bool {
    let (a, b) = (a.min(b), a.max(b));
    b == a + 1 || (a == 0 && b == n)
}

/// All triangulations of the `(n+1)`-gon, by the apex `k` of the triangle on
/// the side `(0, n)`, smallest first.
pub fn enumerate_triangulations(n: usize) -> Vec<Triangulation> {
    fn go(lo: usize, hi: usize) -> Vec<Vec<[usize; 3]>> {
        if hi - lo < 2 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for k in lo + 1..hi {
            let left = go(lo, k);
            let right = go(k, hi);
            for l in &left {
                for r in &right {
                    let mut ts = vec![[lo, k, hi]];
                    ts.extend(l.iter().copied());
                    ts.extend(r.iter().copied());
                    out.push(ts);
                }
            }
        }
        out
    }
    if n < 2 {
        return Vec::new();
    }
    go(0, n)
        .into_iter()
        .map(|ts| Triangulation::new(n, ts))
        .collect()
}

/// A decomposition of the `(n+1)`-gon into cells along noncrossing diagonals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subdivision {
    pub n: usize,
    /// Sorted vertex lists, in lexicographic order.
    pub cells: Vec<Vec<usize>>,
}

impl Subdivision {
    pub fn from_diagonals(n: usize, diagonals: &[(usize, usize)]) -> Self {
        let mut cells = vec![(0..=n).collect::<Vec<usize>>()];
        for &(i, j) in diagonals {
            let c = cells
                .iter()
                .position(|c| c.contains(&i) && c.contains(&j))
                .expect("diagonal lies in some cell");
            let cell = cells.remove(c);
            let inner: Vec<usize> = cell.iter().copied().filter(|&v| v >= i && v <= j).collect();
            let outer: Vec<usize> = cell.iter().copied().filter(|&v| v <= i || v >= j).collect();
            cells.push(inner);
            cells.push(outer);
        }
        cells.sort();
        Subdivision { n, cells }
    }

    pub fn diagonals(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for c in &self.cells {
            let k = c.len();
            for a in 0..k {
                let (u, v) = (c[a], c[(a + 1) % k]);
                let (u, v) = (u.min(v), u.max(v));
                if !is_side(self.n, u, v) {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl std::fmt::Display for Subdivision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .cells
            .iter()
            .map(|c| c.iter().map(|v| v.to_string()).collect::<String>())
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn crosses((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

/// All subdivisions of the `(n+1)`-gon, including the trivial one.
pub fn enumerate_subdivisions(n: usize) -> Vec<Subdivision> {
    let all: Vec<(usize, usize)> = (0..=n)
        .flat_map(|i| (i + 2..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| !(i == 0 && j == n))
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn go(
        k: usize,
        all: &[(usize, usize)],
        chosen: &mut Vec<(usize, usize)>,
        n: usize,
        out: &mut Vec<Subdivision>,
    ) {
        if k == all.len() {
            out.push(Subdivision::from_diagonals(n, chosen));
            return;
        }
        go(k + 1, all, chosen, n, out);
        if chosen.iter().all(|&d| !crosses(d, all[k])) {
            chosen.push(all[k]);
            go(k + 1, all, chosen, n, out);
            chosen.pop();
        }
    }
    go(0, &all, &mut chosen, n, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalan(k: usize) -> usize {
        (0..k).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
    }

    #[test]
    fn triangulation_counts_are_catalan() {
        assert_eq!(enumerate_triangulations(2).len(), 1);
        assert_eq!(enumerate_triangulations(3).len(), 2);
        assert_eq!(enumerate_triangulations(4).len(), 5);
        for n in 2..9 {
            let ts = enumerate_triangulations(n);
            assert_eq!(ts.len(), catalan(n - 1));
            for t in &ts {
                assert_eq!(t.triangles.len(), n - 1);
                assert_eq!(t.diagonals().len(), n - 2);
            }
            let mut uniq = ts.clone();
            uniq.sort();
            uniq.dedup();
            assert_eq!(uniq.len(), ts.len());
        }
    }

    #[test]
    fn square_triangulations() {
        let ts = enumerate_triangulations(3);
        assert!(ts.contains(&Triangulation::new(3, vec![[0, 1, 2], [0, 2, 3]])));
        assert!(ts.contains(&Triangulation::new(3, vec![[0, 1, 3], [1, 2, 3]])));
        assert_eq!(Triangulation::fan(3, 0).to_string(), "{012,023}");
        assert_eq!(Triangulation::fan(4, 1).to_string(), "{014,123,134}");
    }

    #[test]
    fn subdivisions_of_pentagon() {
        let subs = enumerate_subdivisions(4);
        // trivial, five single diagonals, five triangulations
        assert_eq!(subs.len(), 11);
        assert!(subs.iter().any(|s| s.cells == vec![vec![0, 1, 2, 3, 4]]));
        let hexagon = Subdivision::from_diagonals(5, &[(0, 2)]);
        assert_eq!(hexagon.cells, vec![vec![0, 1, 2], vec![0, 2, 3, 4, 5]]);
        assert_eq!(hexagon.diagonals(), vec![(0, 2)]);
    }
}
