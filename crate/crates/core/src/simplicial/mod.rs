//! Truncated simplicial sets, their identities, edge maps and unitality.

mod polygon;
mod segal;

pub use polygon::{Subdivision, Triangulation, enumerate_subdivisions, enumerate_triangulations};
pub(crate) use segal::ear_triangulation;
pub use segal::{
    CellPullback, PolygonElement, SegalFailure, SegalReport, SegalWitness, TwoSegal, check_2segal,
    check_subdivision_criterion, segal_map, subdivision_map,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, structural};
use crate::finspan::{FinMap, FinSet, pullback};
use crate::report::{Violation, compare};

/// A simplicial set truncated at level `top`, with all face and degeneracy
/// maps stored as tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncSimplicialSet {
    top: usize,
    levels: Vec<FinSet>,
    faces: Vec<Vec<FinMap>>,
    degens: Vec<Vec<FinMap>>,
}

/// A simplicial operator; words list operators in the order they are applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    D(usize),
    S(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edge {
    /// The edge from vertex `i - 1` to vertex `i`.
    Interior(usize),
    /// The edge from vertex 0 to the last vertex.
    Out,
}

impl TruncSimplicialSet {
    pub fn new(
        levels: Vec<FinSet>,
        faces: Vec<Vec<FinMap>>,
        degens: Vec<Vec<FinMap>>,
    ) -> Result<Self> {
        if levels.len() < 3 {
            return Err(structural("truncation level must be at least 2"));
        }
        let top = levels.len() - 1;
        if faces.len() != top + 1 || degens.len() != top {
            return Err(structural(
                "face/degeneracy tables do not match the truncation level",
            ));
        }
        for n in 0..=top {
            let expect = if n == 0 { 0 } else { n + 1 };
            if faces[n].len() != expect {
                return Err(structural(format!("level {n} needs {expect} face maps")));
            }
            for (i, d) in faces[n].iter().enumerate() {
                if d.dom() != levels[n].size || d.cod() != levels[n - 1].size {
                    return Err(structural(format!(
                        "d{i}^{n} has the wrong domain or codomain"
                    )));
                }
            }
        }
        for n in 0..top {
            if degens[n].len() != n + 1 {
                return Err(structural(format!(
                    "level {n} needs {} degeneracies",
                    n + 1
                )));
            }
            for (i, s) in degens[n].iter().enumerate() {
                if s.dom() != levels[n].size || s.cod() != levels[n + 1].size {
                    return Err(structural(format!(
                        "s{i}^{n} has the wrong domain or codomain"
                    )));
                }
            }
        }
        Ok(TruncSimplicialSet {
            top,
            levels,
            faces,
            degens,
        })
    }

    /// Builds all tables from closures `face(n, i, x)` and `degen(n, i, x)`.
    pub fn build(
        sizes: &[usize],
        face: impl Fn(usize, usize, usize) -> usize,
        degen: impl Fn(usize, usize, usize) -> usize,
    ) -> Result<Self> {
        let top = sizes.len().saturating_sub(1);
        let mut faces = vec![Vec::new()];
        for n in 1..=top {
            let mut row = Vec::new();
            for i in 0..=n {
                let table = (0..sizes[n]).map(|x| face(n, i, x)).collect();
                row.push(FinMap::new(sizes[n - 1], table)?);
            }
            faces.push(row);
        }
        let mut degens = Vec::new();
        for n in 0..top {
            let mut row = Vec::new();
            for i in 0..=n {
                let table = (0..sizes[n]).map(|x| degen(n, i, x)).collect();
                row.push(FinMap::new(sizes[n + 1], table)?);
            }
            degens.push(row);
        }
        let levels = sizes.iter().map(|&s| FinSet::new(s)).collect();
        TruncSimplicialSet::new(levels, faces, degens)
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn size(&self, n: usize) -> usize {
        self.levels[n].size
    }

    pub fn level(&self, n: usize) -> &FinSet {
        &self.levels[n]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.size).collect()
    }

    pub fn d(&self, n: usize, i: usize) -> &FinMap {
        &self.faces[n][i]
    }

    pub fn s(&self, n: usize, i: usize) -> &FinMap {
        &self.degens[n][i]
    }

    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i].apply(x)
    }

    pub fn degen(&self, n: usize, i: usize, x: usize) -> usize {
        self.degens[n][i].apply(x)
    }

    pub fn set_labels(&mut self, n: usize, labels: Vec<String>) -> Result<()> {
        if labels.len() != self.size(n) {
            return Err(structural("label count does not match level size"));
        }
        self.levels[n] = FinSet::labelled(labels)?;
        Ok(())
    }

    pub(crate) fn face_mut(&mut self, n: usize, i: usize) -> &mut FinMap {
        &mut self.faces[n][i]
    }

    pub(crate) fn degen_mut(&mut self, n: usize, i: usize) -> &mut FinMap {
        &mut self.degens[n][i]
    }

    /// The same data cut off at level `k`.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k > self.top || k < 2 {
            return Err(Error::Truncation {
                needed: k,
                top: self.top,
            });
        }
        TruncSimplicialSet::new(
            self.levels[..=k].to_vec(),
            self.faces[..=k].to_vec(),
            self.degens[..k].to_vec(),
        )
    }

    /// Applies a word of operators, first entry first, starting at level `n`.
    pub fn run(&self, n: usize, word: &[Op], x: usize) -> Option<(usize, usize)> {
        let (mut level, mut cur) = (n, x);
        for op in word {
            match *op {
                Op::D(i) => {
                    if level == 0 || i > level {
                        return None;
                    }
                    cur = self.face(level, i, cur);
                    level -= 1;
                }
                Op::S(i) => {
                    if level >= self.top || i > level {
                        return None;
                    }
                    cur = self.degen(level, i, cur);
                    level += 1;
                }
            }
        }
        Some((level, cur))
    }

    /// The table of a word on all of `X_n`, if it stays within truncation.
    pub fn word_table(&self, n: usize, word: &[Op]) -> Option<Vec<usize>> {
        (0..self.size(n))
            .map(|x| self.run(n, word, x).map(|r| r.1))
            .collect()
    }

    /// The operator of the monotone injection `[k] → [n]` with the given image.
    pub fn restrict(&self, n: usize, image: &[usize], x: usize) -> usize {
        let mut level = n;
        let mut cur = x;
        for v in (0..=n).rev() {
            if !image.contains(&v) {
                cur = self.face(level, v, cur);
                level -= 1;
            }
        }
        cur
    }

    pub fn restrict_map(&self, n: usize, image: &[usize]) -> FinMap {
        FinMap::from_fn(self.size(n), self.size(image.len() - 1), |x| {
            self.restrict(n, image, x)
        })
    }

    /// `X(f): X_n → X_m` for a monotone `f: [m] → [n]`.
    pub fn evaluate_delta(&self, f: &DeltaMor) -> Result<FinMap> {
        if f.n > self.top || f.m > self.top {
            return Err(Error::Truncation {
                needed: f.n.max(f.m),
                top: self.top,
            });
        }
        let word = f.operator_word();
        let table = self.word_table(f.n, &word).ok_or(Error::Truncation {
            needed: f.n.max(f.m),
            top: self.top,
        })?;
        FinMap::new(self.size(f.m), table)
    }

    pub fn edge_map(&self, n: usize, edge: Edge) -> Result<FinMap> {
        if n == 0 || n > self.top {
            return Err(Error::Truncation {
                needed: n,
                top: self.top,
            });
        }
        match edge {
            Edge::Interior(i) if (1..=n).contains(&i) => Ok(self.restrict_map(n, &[i - 1, i])),
            Edge::Out => Ok(self.restrict_map(n, &[0, n])),
            Edge::Interior(i) => Err(structural(format!("no interior edge {i} at level {n}"))),
        }
    }

    /// Every violated simplicial identity, with the first witnessing element.
    pub fn check_simplicial_identities(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let dn = |i: usize, n: usize| format!("d{i}^{n}");
        let sn = |i: usize, n: usize| format!("s{i}^{n}");
        for n in 2..=self.top {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = self.word_table(n, &[Op::D(j), Op::D(i)]).unwrap();
                    let rhs = self.word_table(n, &[Op::D(i), Op::D(j - 1)]).unwrap();
                    compare(
                        &mut out,
                        format!("d{i} d{j} = d{} d{i}", j - 1),
                        n,
                        &lhs,
                        &rhs,
                        vec![dn(j, n), dn(i, n - 1), dn(i, n), dn(j - 1, n - 1)],
                    );
                }
            }
        }
        for n in 0..self.top.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let lhs = self.word_table(n, &[Op::S(j), Op::S(i)]).unwrap();
                    let rhs = self.word_table(n, &[Op::S(i), Op::S(j + 1)]).unwrap();
                    compare(
                        &mut out,
                        format!("s{i} s{j} = s{} s{i}", j + 1),
                        n,
                        &lhs,
                        &rhs,
                        vec![sn(j, n), sn(i, n + 1), sn(i, n), sn(j + 1, n + 1)],
                    );
                }
            }
        }
        for n in 0..self.top {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = self.word_table(n, &[Op::S(j), Op::D(i)]).unwrap();
                    let mut maps = vec![sn(j, n), dn(i, n + 1)];
                    let (rhs, name) = if i < j {
                        maps.extend([dn(i, n), sn(j - 1, n - 1)]);
                        (
                            self.word_table(n, &[Op::D(i), Op::S(j - 1)]),
                            format!("d{i} s{j} = s{} d{i}", j - 1),
                        )
                    } else if i == j || i == j + 1 {
                        (Some((0..self.size(n)).collect()), format!("d{i} s{j} = id"))
                    } else {
                        maps.extend([dn(i - 1, n), sn(j, n - 1)]);
                        (
                            self.word_table(n, &[Op::D(i - 1), Op::S(j)]),
                            format!("d{i} s{j} = s{j} d{}", i - 1),
                        )
                    };
                    if let Some(rhs) = rhs {
                        compare(&mut out, name, n, &lhs, &rhs, maps);
                    }
                }
            }
        }
        out
    }

    /// Checks that the unitality squares are pullbacks.
    pub fn check_unitality(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.top < 2 {
            return out;
        }
        let d0_1 = self.d(1, 0);
        let d1_1 = self.d(1, 1);
        let s0_0 = self.s(0, 0);
        self.unitality_square(
            &mut out,
            "unitality s1/d0",
            1,
            self.s(1, 1),
            d0_1,
            self.d(2, 0),
            s0_0,
        );
        self.unitality_square(
            &mut out,
            "unitality s0/d1",
            1,
            self.s(1, 0),
            d1_1,
            self.d(2, 2),
            s0_0,
        );
        if self.top >= 3 {
            let d02 = self.d(2, 2).then(self.d(1, 0)).unwrap();
            let d03 = self.d(3, 3).then(self.d(2, 0)).unwrap();
            self.unitality_square(
                &mut out,
                "unitality s1/d02",
                2,
                self.s(2, 1),
                &d02,
                &d03,
                s0_0,
            );
        }
        out
    }

    /// The square `top: A → B`, `left: A → C`, `bottom: C → D`, `right: B → D`
    /// is a pullback iff `a ↦ (left a, top a)` bijects onto `C ×_D B`.
    #[allow(clippy::too_many_arguments)]
    fn unitality_square(
        &self,
        out: &mut Vec<Violation>,
        name: &str,
        level: usize,
        left: &FinMap,
        top: &FinMap,
        bottom: &FinMap,
        right: &FinMap,
    ) {
        let maps = vec![name.to_string()];
        let lhs = left.then(bottom).unwrap();
        let rhs = top.then(right).unwrap();
        let before = out.len();
        compare(
            out,
            format!("{name} commutes"),
            level,
            lhs.table(),
            rhs.table(),
            maps.clone(),
        );
        if out.len() > before {
            return;
        }
        let pb = pullback(bottom, right).unwrap();
        let mut hit = vec![None; pb.apex.size];
        for a in 0..left.dom() {
            let p = pb.index_of(left.apply(a), top.apply(a)).unwrap();
            if let Some(prev) = hit[p] {
                out.push(Violation {
                    relation: format!("{name} is a pullback (injective)"),
                    level,
                    element: a,
                    lhs: Some(prev),
                    rhs: Some(a),
                    maps,
                });
                return;
            }
            hit[p] = Some(a);
        }
        if let Some(p) = hit.iter().position(|h| h.is_none()) {
            out.push(Violation {
                relation: format!("{name} is a pullback (surjective)"),
                level: level + 1,
                element: pb.first.apply(p),
                lhs: None,
                rhs: None,
                maps,
            });
        }
    }
}

/// A monotone map `[m] → [n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeltaMor {
    pub m: usize,
    pub n: usize,
    pub values: Vec<usize>,
}

impl DeltaMor {
    pub fn new(n: usize, values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(structural("a map out of [m] needs m + 1 values"));
        }
        if values.windows(2).any(|w| w[0] > w[1]) || values.iter().any(|&v| v > n) {
            return Err(structural(format!(
                "{values:?} is not a monotone map into [{n}]"
            )));
        }
        Ok(DeltaMor {
            m: values.len() - 1,
            n,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        DeltaMor {
            m: n,
            n,
            values: (0..=n).collect(),
        }
    }

    /// `δ_i: [n-1] → [n]`, skipping `i`.
    pub fn coface(n: usize, i: usize) -> Self {
        DeltaMor {
            m: n - 1,
            n,
            values: (0..n).map(|k| if k < i { k } else { k + 1 }).collect(),
        }
    }

    /// `σ_i: [n+1] → [n]`, hitting `i` twice.
    pub fn codegeneracy(n: usize, i: usize) -> Self {
        DeltaMor {
            m: n + 1,
            n,
            values: (0..=n + 1)
                .map(|k| if k <= i { k } else { k - 1 })
                .collect(),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &DeltaMor) -> Result<DeltaMor> {
        if self.n != next.m {
            return Err(structural("composing Δ-maps with mismatched objects"));
        }
        Ok(DeltaMor {
            m: self.m,
            n: next.n,
            values: self.values.iter().map(|&v| next.values[v]).collect(),
        })
    }

    /// The simplicial operator word for `X(f): X_n → X_m`: delete the
    /// vertices outside the image, then insert the repeats.
    pub fn operator_word(&self) -> Vec<Op> {
        let mut word: Vec<Op> = (0..=self.n)
            .rev()
            .filter(|v| !self.values.contains(v))
            .map(Op::D)
            .collect();
        let mut cur = self.values.clone();
        let mut degens = Vec::new();
        while let Some(j) = (0..cur.len().saturating_sub(1)).find(|&j| cur[j] == cur[j + 1]) {
            degens.push(j);
            cur.remove(j + 1);
        }
        word.extend(degens.into_iter().rev().map(Op::S));
        word
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn nerve_of_z2_satisfies_identities() {
        let x = examples::cyclic_group_nerve(2, 4).unwrap();
        assert_eq!(x.sizes(), vec![1, 2, 4, 8, 16]);
        assert!(x.check_simplicial_identities().is_empty());
        assert!(x.check_unitality().is_empty());
    }

    #[test]
    fn corrupted_face_is_named() {
        let mut x = examples::cyclic_group_nerve(2, 4).unwrap();
        let old = x.face(2, 1, 3);
        x.face_mut(2, 1).set(3, 1 - old);
        let v = x.check_simplicial_identities();
        assert!(!v.is_empty());
        assert!(crate::report::suspects(&v).contains(&"d1^2".to_string()));
    }

    #[test]
    fn constant_point_is_simplicial() {
        let x = TruncSimplicialSet::build(&[1; 5], |_, _, _| 0, |_, _, _| 0).unwrap();
        assert!(x.check_simplicial_identities().is_empty());
        assert!(x.check_unitality().is_empty());
    }

    #[test]
    fn mutated_degeneracy_breaks_unitality() {
        let mut x = examples::cyclic_group_nerve(3, 3).unwrap();
        x.degen_mut(1, 1).set(1, 0);
        assert!(!x.check_unitality().is_empty());
    }

    #[test]
    fn edges_on_group_nerve() {
        let x = examples::cyclic_group_nerve(3, 4).unwrap();
        assert_eq!(
            x.edge_map(1, Edge::Interior(1)).unwrap(),
            FinMap::identity(3)
        );
        assert_eq!(x.edge_map(1, Edge::Out).unwrap(), FinMap::identity(3));
        let e2 = x.edge_map(3, Edge::Interior(2)).unwrap();
        let out = x.edge_map(3, Edge::Out).unwrap();
        for t in 0..27 {
            let g = crate::finspan::decode(t, &[3, 3, 3]);
            assert_eq!(e2.apply(t), g[1]);
            assert_eq!(out.apply(t), (g[0] + g[1] + g[2]) % 3);
            assert_eq!(
                e2.apply(t),
                crate::oracle::restrict_along(&|n, i, y| x.face(n, i, y), 3, &[1, 2], t)
            );
        }
        // e_2 of a 2-simplex is the edge {1,2}, which is d0.
        assert_eq!(&x.edge_map(2, Edge::Interior(2)).unwrap(), x.d(2, 0));
    }

    #[test]
    fn delta_words_match_generators() {
        let x = examples::cyclic_group_nerve(2, 4).unwrap();
        for n in 1..=3 {
            for i in 0..=n {
                assert_eq!(
                    &x.evaluate_delta(&DeltaMor::coface(n, i)).unwrap(),
                    x.d(n, i)
                );
            }
            for i in 0..n {
                assert_eq!(
                    &x.evaluate_delta(&DeltaMor::codegeneracy(n - 1, i)).unwrap(),
                    x.s(n - 1, i)
                );
            }
        }
    }

    #[test]
    fn delta_evaluation_is_functorial() {
        let x = examples::cyclic_group_nerve(3, 4).unwrap();
        let f = DeltaMor::new(3, vec![0, 2, 2]).unwrap();
        let g = DeltaMor::new(4, vec![1, 1, 3, 4]).unwrap();
        let fg = f.then(&g).unwrap();
        let lhs = x.evaluate_delta(&fg).unwrap();
        let rhs = x
            .evaluate_delta(&g)
            .unwrap()
            .then(&x.evaluate_delta(&f).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }
}
