//! Segal maps, the 2-Segal condition, and the polygon calculus for faces
//! and degeneracies.

use std::collections::HashMap;

use serde::Serialize;

use super::TruncSimplicialSet;
use super::polygon::{
    Subdivision, Triangulation, enumerate_subdivisions, enumerate_triangulations, is_side,
};
use crate::error::{Error, Result, structural};
use crate::finspan::FinMap;

/// The iterated pullback of the cells of a polygon decomposition over their
/// shared diagonals, materialized as tuples in lexicographic order.
#[derive(Clone, Debug)]
pub struct CellPullback {
    pub cells: Vec<Vec<usize>>,
    pub tuples: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

fn edge_positions(cell: &[usize], u: usize, v: usize) -> [usize; 2] {
    let pu = cell.iter().position(|&w| w == u).unwrap();
    let pv = cell.iter().position(|&w| w == v).unwrap();
    [pu, pv]
}

impl CellPullback {
    pub fn new(x: &TruncSimplicialSet, cells: &[Vec<usize>]) -> Result<Self> {
        for c in cells {
            if c.len() - 1 > x.top() {
                return Err(Error::Truncation {
                    needed: c.len() - 1,
                    top: x.top(),
                });
            }
        }
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for (k, cell) in cells.iter().enumerate() {
            let level = cell.len() - 1;
            // constraints against earlier cells: (earlier index, its edge map, our edge map)
            let mut constraints = Vec::new();
            for (j, prev) in cells[..k].iter().enumerate() {
                for a in 0..cell.len() {
                    for b in a + 1..cell.len() {
                        let (u, v) = (cell[a], cell[b]);
                        if prev.contains(&u) && prev.contains(&v) {
                            let mine = x.restrict_map(level, &[a, b]);
                            let theirs =
                                x.restrict_map(prev.len() - 1, &edge_positions(prev, u, v));
                            constraints.push((j, theirs, mine));
                        }
                    }
                }
            }
            let mut next = Vec::new();
            for t in &tuples {
                for y in 0..x.size(level) {
                    if constraints
                        .iter()
                        .all(|(j, theirs, mine)| theirs.apply(t[*j]) == mine.apply(y))
                    {
                        let mut t2 = t.clone();
                        t2.push(y);
                        next.push(t2);
                    }
                }
            }
            tuples = next;
        }
        let index = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Ok(CellPullback {
            cells: cells.to_vec(),
            tuples,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn index_of(&self, parts: &[usize]) -> Option<usize> {
        self.index.get(parts).copied()
    }

    /// The components of `x ∈ X_n` along each cell.
    pub fn components(
        x: &TruncSimplicialSet,
        n: usize,
        cells: &[Vec<usize>],
        elem: usize,
    ) -> Vec<usize> {
        cells.iter().map(|c| x.restrict(n, c, elem)).collect()
    }
}

/// The Segal map of a triangulation: `X_n` into its iterated pullback.
pub fn segal_map(x: &TruncSimplicialSet, t: &Triangulation) -> Result<(CellPullback, FinMap)> {
    decomposition_map(x, t.n, &t.as_subdivision().cells)
}

/// A simplex whose components disagree on a shared edge, which only happens
/// when the simplicial identities fail.
struct Inconsistent {
    element: usize,
    parts: Vec<usize>,
}

fn try_decomposition(
    x: &TruncSimplicialSet,
    n: usize,
    cells: &[Vec<usize>],
) -> Result<(CellPullback, std::result::Result<FinMap, Inconsistent>)> {
    if n > x.top() {
        return Err(Error::Truncation {
            needed: n,
            top: x.top(),
        });
    }
    let pb = CellPullback::new(x, cells)?;
    let mut table = Vec::with_capacity(x.size(n));
    for e in 0..x.size(n) {
        let parts = CellPullback::components(x, n, cells, e);
        match pb.index_of(&parts) {
            Some(p) => table.push(p),
            None => return Ok((pb, Err(Inconsistent { element: e, parts }))),
        }
    }
    let map = FinMap::new(pb.len(), table)?;
    Ok((pb, Ok(map)))
}

fn decomposition_map(
    x: &TruncSimplicialSet,
    n: usize,
    cells: &[Vec<usize>],
) -> Result<(CellPullback, FinMap)> {
    let (pb, map) = try_decomposition(x, n, cells)?;
    match map {
        Ok(m) => Ok((pb, m)),
        Err(bad) => Err(structural(format!(
            "components {:?} of simplex {} disagree on a shared edge",
            bad.parts, bad.element
        ))),
    }
}

#[derive(Clone, Debug)]
pub struct SegalWitness {
    pub n: usize,
    pub triangulation: Triangulation,
    pub pullback: CellPullback,
    pub forward: FinMap,
    pub inverse: FinMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegalFailure {
    pub n: usize,
    pub decomposition: String,
    /// `"not injective"`, `"not surjective"` or `"inconsistent faces"`.
    pub kind: String,
    /// A simplex sharing its image with an earlier one, the index of a
    /// pullback tuple that is not hit, or a simplex whose components
    /// disagree on a shared edge.
    pub element: usize,
    pub tuple: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
pub struct SegalReport {
    pub top: usize,
    pub witnesses: Vec<SegalWitness>,
    pub failures: Vec<SegalFailure>,
}

impl SegalReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn bijection_failure(
    n: usize,
    name: String,
    pb: &CellPullback,
    forward: &FinMap,
) -> Option<SegalFailure> {
    let mut seen = vec![false; pb.len()];
    for e in 0..forward.dom() {
        let p = forward.apply(e);
        if std::mem::replace(&mut seen[p], true) {
            return Some(SegalFailure {
                n,
                decomposition: name,
                kind: "not injective".into(),
                element: e,
                tuple: pb.tuples[p].clone(),
            });
        }
    }
    seen.iter().position(|s| !s).map(|p| SegalFailure {
        n,
        decomposition: name,
        kind: "not surjective".into(),
        element: p,
        tuple: pb.tuples[p].clone(),
    })
}

fn inconsistent(n: usize, decomposition: String, bad: Inconsistent) -> SegalFailure {
    SegalFailure {
        n,
        decomposition,
        kind: "inconsistent faces".into(),
        element: bad.element,
        tuple: bad.parts,
    }
}

/// Decides bijectivity of every triangulation map for `3 ≤ n ≤ top`.
pub fn check_2segal(x: &TruncSimplicialSet) -> SegalReport {
    let mut report = SegalReport {
        top: x.top(),
        ..Default::default()
    };
    for n in 3..=x.top() {
        for t in enumerate_triangulations(n) {
            let (pb, forward) = match try_decomposition(x, n, &t.as_subdivision().cells)
                .expect("within truncation")
            {
                (pb, Ok(f)) => (pb, f),
                (_, Err(bad)) => {
                    report.failures.push(inconsistent(n, t.to_string(), bad));
                    continue;
                }
            };
            match bijection_failure(n, t.to_string(), &pb, &forward) {
                Some(f) => report.failures.push(f),
                None => {
                    let inverse = forward.inverse().expect("bijective");
                    report.witnesses.push(SegalWitness {
                        n,
                        triangulation: t,
                        pullback: pb,
                        forward,
                        inverse,
                    });
                }
            }
        }
    }
    report
}

/// Checks that every subdivision map `X_n → ∏ X_{k_i}` is a bijection.
pub fn check_subdivision_criterion(x: &TruncSimplicialSet) -> Vec<SegalFailure> {
    let mut out = Vec::new();
    for n in 3..=x.top() {
        for s in enumerate_subdivisions(n) {
            match try_decomposition(x, n, &s.cells).expect("within truncation") {
                (pb, Ok(forward)) => out.extend(bijection_failure(n, s.to_string(), &pb, &forward)),
                (_, Err(bad)) => out.push(inconsistent(n, s.to_string(), bad)),
            }
        }
    }
    out
}

/// The subdivision map of a single subdivision, with its bijectivity verdict.
pub fn subdivision_map(
    x: &TruncSimplicialSet,
    s: &Subdivision,
) -> Result<(CellPullback, FinMap, bool)> {
    let (pb, forward) = decomposition_map(x, s.n, &s.cells)?;
    let ok = bijection_failure(s.n, s.to_string(), &pb, &forward).is_none();
    Ok((pb, forward, ok))
}

/// A verified 2-Segal set with inverse Segal maps for every triangulation
/// within truncation.
#[derive(Clone, Debug)]
pub struct TwoSegal {
    x: TruncSimplicialSet,
    witnesses: HashMap<Triangulation, SegalWitness>,
}

impl TwoSegal {
    pub fn new(x: &TruncSimplicialSet) -> Result<Self> {
        if x.top() < 3 {
            return Err(Error::Truncation {
                needed: 3,
                top: x.top(),
            });
        }
        let report = check_2segal(x);
        if let Some(f) = report.failures.first() {
            return Err(Error::NotTwoSegal {
                n: f.n,
                triangulation: f.decomposition.clone(),
                detail: format!("{} (element {})", f.kind, f.element),
            });
        }
        let witnesses = report
            .witnesses
            .into_iter()
            .map(|w| (w.triangulation.clone(), w))
            .collect();
        Ok(TwoSegal {
            x: x.clone(),
            witnesses,
        })
    }

    pub fn base(&self) -> &TruncSimplicialSet {
        &self.x
    }

    pub fn witness(&self, t: &Triangulation) -> Option<&SegalWitness> {
        self.witnesses.get(t)
    }

    /// Components of a simplex along the triangles of `t`.
    pub fn unglue(&self, t: &Triangulation, elem: usize) -> Vec<usize> {
        t.triangles
            .iter()
            .map(|tri| self.x.restrict(t.n, tri, elem))
            .collect()
    }

    /// The unique simplex with the given components.
    pub fn glue(&self, t: &Triangulation, parts: &[usize]) -> Result<usize> {
        if t.n == 2 {
            return parts
                .first()
                .copied()
                .ok_or_else(|| Error::Gluing("no parts".into()));
        }
        let w = self.witnesses.get(t).ok_or(Error::Truncation {
            needed: t.n,
            top: self.x.top(),
        })?;
        match w.pullback.index_of(parts) {
            Some(p) => Ok(w.inverse.apply(p)),
            None => Err(Error::Gluing(self.gluing_mismatch(t, parts))),
        }
    }

    fn gluing_mismatch(&self, t: &Triangulation, parts: &[usize]) -> String {
        if parts.len() != t.triangles.len() {
            return format!("{} parts for {} triangles", parts.len(), t.triangles.len());
        }
        for (a, ta) in t.triangles.iter().enumerate() {
            for (b, tb) in t.triangles.iter().enumerate().skip(a + 1) {
                let shared: Vec<usize> = ta.iter().copied().filter(|v| tb.contains(v)).collect();
                if shared.len() == 2 {
                    let ea =
                        self.x
                            .restrict(2, &edge_positions(ta, shared[0], shared[1]), parts[a]);
                    let eb =
                        self.x
                            .restrict(2, &edge_positions(tb, shared[0], shared[1]), parts[b]);
                    if ea != eb {
                        return format!(
                            "parts disagree on edge {}{}: {ea} vs {eb}",
                            shared[0], shared[1]
                        );
                    }
                }
            }
        }
        "part out of range".into()
    }

    pub fn polygon(&self, t: &Triangulation, elem: usize) -> PolygonElement {
        PolygonElement {
            n: t.n,
            pieces: t
                .triangles
                .iter()
                .copied()
                .zip(self.unglue(t, elem))
                .collect(),
            edge: None,
        }
    }

    /// `d_i` computed by deleting the ear at vertex `i` from a triangulation
    /// that contains it.
    pub fn face_via_polygon(&self, n: usize, i: usize, elem: usize) -> Result<usize> {
        if !(3..=self.x.top()).contains(&n) {
            return Err(Error::Truncation {
                needed: n,
                top: self.x.top(),
            });
        }
        let t = ear_triangulation(n, i);
        self.polygon(&t, elem).remove_vertex(i)?.to_simplex(self)
    }

    /// `s_i` computed by attaching a degenerate triangle along an edge.
    pub fn degen_via_polygon(&self, n: usize, i: usize, elem: usize) -> Result<usize> {
        if n + 1 > self.x.top() || n < 2 {
            return Err(Error::Truncation {
                needed: n + 1,
                top: self.x.top(),
            });
        }
        let poly = self.polygon(&Triangulation::fan(n, 0), elem);
        let (pos, part) = if i < n {
            let e = poly.edge_value(self, i, i + 1)?;
            (i + 1, self.x.degen(1, 0, e))
        } else {
            let e = poly.edge_value(self, n - 1, n)?;
            (n, self.x.degen(1, 1, e))
        };
        poly.insert_vertex(pos, part).to_simplex(self)
    }
}

/// The ear at `i` together with a fan on the remaining polygon.
pub(crate) fn ear_triangulation(n: usize, i: usize) -> Triangulation {
    let mut tris = Vec::new();
    if i == 0 {
        tris.push([0, 1, n]);
        let ring: Vec<usize> = (1..=n).collect();
        tris.extend(Triangulation::fan_over(&ring, 0));
    } else if i == n {
        tris.push([0, n - 1, n]);
        let ring: Vec<usize> = (0..n).collect();
        tris.extend(Triangulation::fan_over(&ring, 0));
    } else {
        tris.push([i - 1, i, i + 1]);
        let ring: Vec<usize> = (0..=n).filter(|&v| v != i).collect();
        tris.extend(Triangulation::fan_over(&ring, 0));
    }
    Triangulation::new(n, tris)
}

/// A simplex of a 2-Segal set presented by a triangulated polygon. The
/// polygon may be one level above the truncation, which lets constructions
/// pass through `X_{N+1}` without materializing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonElement {
    pub n: usize,
    /// Sorted triangles with their 2-simplices.
    pub pieces: Vec<([usize; 3], usize)>,
    /// The 1-simplex when `n = 1`.
    pub edge: Option<usize>,
}

impl PolygonElement {
    pub fn from_parts(t: &Triangulation, parts: &[usize]) -> Self {
        PolygonElement {
            n: t.n,
            pieces: t
                .triangles
                .iter()
                .copied()
                .zip(parts.iter().copied())
                .collect(),
            edge: None,
        }
    }

    pub fn triangulation(&self) -> Triangulation {
        Triangulation::new(self.n, self.pieces.iter().map(|p| p.0).collect())
    }

    pub fn parts(&self) -> Vec<usize> {
        self.pieces.iter().map(|p| p.1).collect()
    }

    pub fn part(&self, t: [usize; 3]) -> Option<usize> {
        self.pieces.iter().find(|p| p.0 == t).map(|p| p.1)
    }

    pub fn set_part(&mut self, t: [usize; 3], value: usize) {
        if let Some(p) = self.pieces.iter_mut().find(|p| p.0 == t) {
            p.1 = value;
        }
    }

    /// The 1-simplex on the edge `(u, v)`, read from any triangle containing it.
    pub fn edge_value(&self, seg: &TwoSegal, u: usize, v: usize) -> Result<usize> {
        if self.n == 1 {
            return self
                .edge
                .ok_or_else(|| Error::Gluing("missing edge".into()));
        }
        let (u, v) = (u.min(v), u.max(v));
        for (t, x) in &self.pieces {
            if t.contains(&u) && t.contains(&v) {
                return Ok(seg.base().restrict(2, &edge_positions(t, u, v), *x));
            }
        }
        Err(Error::Gluing(format!("edge {u}{v} is not drawn")))
    }

    pub fn to_simplex(&self, seg: &TwoSegal) -> Result<usize> {
        match self.n {
            1 => self
                .edge
                .ok_or_else(|| Error::Gluing("missing edge".into())),
            _ => seg.glue(&self.triangulation(), &self.parts()),
        }
    }

    fn sort(&mut self) {
        for p in &mut self.pieces {
            debug_assert!(p.0[0] < p.0[1] && p.0[1] < p.0[2]);
        }
        self.pieces.sort_unstable();
    }

    /// Replaces the diagonal `(p, r)` by the other diagonal of its quadrilateral.
    pub fn flip(&mut self, seg: &TwoSegal, p: usize, r: usize) -> Result<()> {
        let holders: Vec<usize> = (0..self.pieces.len())
            .filter(|&k| self.pieces[k].0.contains(&p) && self.pieces[k].0.contains(&r))
            .collect();
        if holders.len() != 2 {
            return Err(Error::Gluing(format!("{p}{r} is not an inner diagonal")));
        }
        let mut quad: Vec<usize> = holders.iter().flat_map(|&k| self.pieces[k].0).collect();
        quad.sort_unstable();
        quad.dedup();
        let [a, b, c, d] = [quad[0], quad[1], quad[2], quad[3]];
        let square_13 = Triangulation::fan(3, 0);
        let square_02 = Triangulation::new(3, vec![[0, 1, 3], [1, 2, 3]]);
        let (from, to, new_tris) = if (p.min(r), p.max(r)) == (a, c) {
            (&square_13, &square_02, [[a, b, d], [b, c, d]])
        } else {
            (&square_02, &square_13, [[a, b, c], [a, c, d]])
        };
        let old_tris: Vec<[usize; 3]> = holders.iter().map(|&k| self.pieces[k].0).collect();
        let mut olds = old_tris.clone();
        olds.sort_unstable();
        let parts: Vec<usize> = olds.iter().map(|t| self.part(*t).unwrap()).collect();
        let psi = seg.glue(from, &parts)?;
        let new_parts = seg.unglue(to, psi);
        self.pieces.retain(|pc| !old_tris.contains(&pc.0));
        self.pieces.push((new_tris[0], new_parts[0]));
        self.pieces.push((new_tris[1], new_parts[1]));
        self.sort();
        Ok(())
    }

    /// Moves to `target` through diagonal flips, via the fan from vertex 0.
    pub fn retriangulate(&mut self, seg: &TwoSegal, target: &Triangulation) -> Result<()> {
        if self.n < 3 || self.triangulation() == *target {
            return Ok(());
        }
        for (old, _) in flips_to_fan(&self.triangulation(), 0) {
            self.flip(seg, old.0, old.1)?;
        }
        for (_, new) in flips_to_fan(target, 0).into_iter().rev() {
            self.flip(seg, new.0, new.1)?;
        }
        debug_assert_eq!(self.triangulation(), *target);
        Ok(())
    }

    /// Deletes vertex `i`, whose ear must be present, and relabels.
    pub fn remove_vertex(&self, i: usize) -> Result<PolygonElement> {
        let n = self.n;
        let ear = if i == 0 {
            [0, 1, n]
        } else if i == n {
            [0, n - 1, n]
        } else {
            [i - 1, i, i + 1]
        };
        if self.part(ear).is_none() {
            return Err(Error::Gluing(format!("no ear at vertex {i}")));
        }
        let relabel = |v: usize| if v > i { v - 1 } else { v };
        if n == 2 {
            return Err(Error::Gluing(
                "deleting from a triangle leaves no polygon".into(),
            ));
        }
        let mut pieces: Vec<([usize; 3], usize)> = self
            .pieces
            .iter()
            .filter(|p| p.0 != ear)
            .map(|(t, x)| {
                let mut t2 = [relabel(t[0]), relabel(t[1]), relabel(t[2])];
                t2.sort_unstable();
                (t2, *x)
            })
            .collect();
        pieces.sort_unstable();
        Ok(PolygonElement {
            n: n - 1,
            pieces,
            edge: None,
        })
    }

    /// Makes room for a new vertex at position `i` (older vertices at `i` and
    /// above shift up) and attaches the ear `(i-1, i, i+1)`, read cyclically.
    pub fn insert_vertex(&self, i: usize, part: usize) -> PolygonElement {
        let n = self.n + 1;
        let relabel = |v: usize| if v >= i { v + 1 } else { v };
        let mut pieces: Vec<([usize; 3], usize)> = self
            .pieces
            .iter()
            .map(|(t, x)| ([relabel(t[0]), relabel(t[1]), relabel(t[2])], *x))
            .collect();
        let mut ear = [(i + n) % (n + 1), i, (i + 1) % (n + 1)];
        ear.sort_unstable();
        pieces.push((ear, part));
        pieces.sort_unstable();
        PolygonElement {
            n,
            pieces,
            edge: None,
        }
    }
}

/// Flips that turn `t` into the fan from `apex`, as (removed, added) diagonals.
pub(crate) fn flips_to_fan(
    t: &Triangulation,
    apex: usize,
) -> Vec<((usize, usize), (usize, usize))> {
    let mut tris = t.triangles.clone();
    let n = t.n;
    let mut out = Vec::new();
    'outer: loop {
        for k in 0..tris.len() {
            let tri = tris[k];
            if !tri.contains(&apex) {
                continue;
            }
            let opp: Vec<usize> = tri.iter().copied().filter(|&v| v != apex).collect();
            let (p, r) = (opp[0], opp[1]);
            if is_side(n, p, r) {
                continue;
            }
            let other = (0..tris.len())
                .find(|&j| j != k && tris[j].contains(&p) && tris[j].contains(&r))
                .expect("inner diagonal has two triangles");
            let q = *tris[other].iter().find(|&&v| v != p && v != r).unwrap();
            let mut t1 = [apex, p, q];
            let mut t2 = [apex, q, r];
            t1.sort_unstable();
            t2.sort_unstable();
            tris[k] = t1;
            tris[other] = t2;
            out.push(((p, r), (apex.min(q), apex.max(q))));
            continue 'outer;
        }
        break;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn taco_maps_on_group_nerve() {
        let x = examples::cyclic_group_nerve(5, 3).unwrap();
        let g = |t: usize| crate::finspan::decode(t, &[5, 5, 5]);
        let t13 = Triangulation::fan(3, 0);
        let t02 = Triangulation::new(3, vec![[0, 1, 3], [1, 2, 3]]);
        let seg = TwoSegal::new(&x).unwrap();
        for psi in 0..125 {
            let v = g(psi);
            let pair = |a: usize, b: usize| a * 5 + b;
            // {(g1 g2, g3), (g1, g2)} as a set of components
            let mut got = seg.unglue(&t13, psi);
            let mut want = vec![pair(v[0], v[1]), pair((v[0] + v[1]) % 5, v[2])];
            got.sort();
            want.sort();
            assert_eq!(got, want);
            let mut got = seg.unglue(&t02, psi);
            let mut want = vec![pair(v[1], v[2]), pair(v[0], (v[1] + v[2]) % 5)];
            got.sort();
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn pentagon_fan_components() {
        let x = examples::cyclic_group_nerve(2, 4).unwrap();
        let seg = TwoSegal::new(&x).unwrap();
        let t = Triangulation::fan(4, 0);
        for psi in 0..16 {
            let d34 = x
                .run(4, &[super::super::Op::D(4), super::super::Op::D(3)], psi)
                .unwrap()
                .1;
            let d14 = x
                .run(4, &[super::super::Op::D(4), super::super::Op::D(1)], psi)
                .unwrap()
                .1;
            let d12 = x
                .run(4, &[super::super::Op::D(2), super::super::Op::D(1)], psi)
                .unwrap()
                .1;
            assert_eq!(seg.unglue(&t, psi), vec![d34, d14, d12]);
        }
    }

    #[test]
    fn glue_unglue_round_trip() {
        let x = examples::cyclic_group_nerve(2, 4).unwrap();
        let seg = TwoSegal::new(&x).unwrap();
        for n in 3..=4 {
            for t in enumerate_triangulations(n) {
                for psi in 0..x.size(n) {
                    assert_eq!(seg.glue(&t, &seg.unglue(&t, psi)).unwrap(), psi);
                }
            }
        }
        let t = Triangulation::fan(3, 0);
        assert!(matches!(seg.glue(&t, &[0, 3]), Err(Error::Gluing(_))));
    }

    #[test]
    fn polygon_faces_and_degeneracies_match_tables() {
        for x in [
            examples::cyclic_group_nerve(3, 4).unwrap(),
            examples::interval_monoid_nerve(3, 4).unwrap(),
        ] {
            let seg = TwoSegal::new(&x).unwrap();
            for n in 3..=4 {
                for i in 0..=n {
                    for e in 0..x.size(n) {
                        assert_eq!(seg.face_via_polygon(n, i, e).unwrap(), x.face(n, i, e));
                    }
                }
            }
            for n in 2..4 {
                for i in 0..=n {
                    for e in 0..x.size(n) {
                        assert_eq!(seg.degen_via_polygon(n, i, e).unwrap(), x.degen(n, i, e));
                    }
                }
            }
        }
    }

    #[test]
    fn flips_reach_every_triangulation() {
        let x = examples::cyclic_group_nerve(2, 5).unwrap();
        let seg = TwoSegal::new(&x).unwrap();
        for n in 3..=5 {
            let ts = enumerate_triangulations(n);
            for a in &ts {
                for b in &ts {
                    for psi in 0..x.size(n) {
                        let mut p = seg.polygon(a, psi);
                        p.retriangulate(&seg, b).unwrap();
                        assert_eq!(p, seg.polygon(b, psi));
                    }
                }
            }
        }
    }

    #[test]
    fn hexagon_subdivision_on_z3() {
        let x = examples::cyclic_group_nerve(3, 5).unwrap();
        let s = Subdivision::from_diagonals(5, &[(0, 2)]);
        let (pb, map, ok) = subdivision_map(&x, &s).unwrap();
        assert!(ok);
        assert_eq!(pb.len(), 3usize.pow(5));
        assert!(map.is_bijective());
        let trivial = Subdivision::from_diagonals(4, &[]);
        let (_, map, ok) = subdivision_map(&x, &trivial).unwrap();
        assert!(ok && map == FinMap::identity(x.size(4)));
        assert!(check_subdivision_criterion(&x.truncate(4).unwrap()).is_empty());
    }
}
