//! Pointed finite cardinals, Γ-structures on truncated simplicial sets, and
//! their correspondence with commutative structures on the multiplication.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::diagram::{Block, Composite, Diagram, Move};
use crate::error::{Error, Result, structural};
use crate::finspan::{
    FinMap, Span, SpanCell, braiding_cell, braiding_span, compose_with_pullback, hexagonator_cell,
    syllepsis_cell, vertical_compose,
};
use crate::paracyclic::RelationReport;
use crate::pseudomonoid::{assoc_boxes, build_pseudomonoid, cell_defect, mult_span};
use crate::report::{Violation, compare};
use crate::simplicial::{
    DeltaMor, Triangulation, TruncSimplicialSet, TwoSegal, enumerate_triangulations,
};

/// A basepoint-preserving map `⟨n⟩ → ⟨m⟩`; `table[k - 1]` is the image of
/// `k`, with `0` standing for the basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhiStarMor {
    pub n: usize,
    pub m: usize,
    pub table: Vec<usize>,
}

impl PhiStarMor {
    pub fn new(m: usize, table: Vec<usize>) -> Result<Self> {
        if let Some(v) = table.iter().find(|&&v| v > m) {
            return Err(structural(format!("value {v} is outside ⟨{m}⟩")));
        }
        Ok(PhiStarMor {
            n: table.len(),
            m,
            table,
        })
    }

    fn from_fn(n: usize, m: usize, f: impl Fn(usize) -> usize) -> Self {
        PhiStarMor {
            n,
            m,
            table: (1..=n).map(f).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        PhiStarMor::from_fn(n, n, |k| k)
    }

    pub fn apply(&self, k: usize) -> usize {
        if k == 0 { 0 } else { self.table[k - 1] }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &PhiStarMor) -> Result<PhiStarMor> {
        if self.m != next.n {
            return Err(structural(format!(
                "cannot follow a map into ⟨{}⟩ by one out of ⟨{}⟩",
                self.m, next.n
            )));
        }
        Ok(PhiStarMor::from_fn(self.n, next.m, |k| {
            next.apply(self.apply(k))
        }))
    }

    /// `s_i: ⟨n⟩ → ⟨n+1⟩`, skipping `i + 1`.
    pub fn degeneracy(n: usize, i: usize) -> Self {
        PhiStarMor::from_fn(n, n + 1, |k| if k <= i { k } else { k + 1 })
    }

    /// `d_i: ⟨n⟩ → ⟨n-1⟩`: `d_0` sends `1` to the basepoint, `d_n` sends `n`
    /// there, and the others merge `i` with `i + 1`.
    pub fn face(n: usize, i: usize) -> Self {
        PhiStarMor::from_fn(n, n - 1, |k| {
            if i == n {
                if k == n { 0 } else { k }
            } else if k <= i {
                k
            } else {
                k - 1
            }
        })
    }

    /// `θ_i: ⟨n⟩ → ⟨n⟩`, swapping `i` and `i + 1`.
    pub fn transposition(n: usize, i: usize) -> Self {
        PhiStarMor::from_fn(n, n, |k| {
            if k == i {
                i + 1
            } else if k == i + 1 {
                i
            } else {
                k
            }
        })
    }

    /// The underlying map `{0..n} → {0..m}` with `0 ↦ 0`.
    pub fn to_phi(&self) -> Vec<usize> {
        (0..=self.n).map(|k| self.apply(k)).collect()
    }
}

pub fn phistar_compose(f: &PhiStarMor, g: &PhiStarMor) -> Result<PhiStarMor> {
    f.then(g)
}

pub fn phistar_to_phi(f: &PhiStarMor) -> Vec<usize> {
    f.to_phi()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Generator {
    Face { n: usize, i: usize },
    Degeneracy { n: usize, i: usize },
    Transposition { n: usize, i: usize },
}

impl Generator {
    pub fn source(&self) -> usize {
        match *self {
            Generator::Face { n, .. }
            | Generator::Degeneracy { n, .. }
            | Generator::Transposition { n, .. } => n,
        }
    }

    pub fn to_mor(&self) -> PhiStarMor {
        match *self {
            Generator::Face { n, i } => PhiStarMor::face(n, i),
            Generator::Degeneracy { n, i } => PhiStarMor::degeneracy(n, i),
            Generator::Transposition { n, i } => PhiStarMor::transposition(n, i),
        }
    }
}

/// The composite of a word, listed in application order.
pub fn compose_word(n: usize, word: &[Generator]) -> Result<PhiStarMor> {
    word.iter()
        .try_fold(PhiStarMor::identity(n), |acc, g| acc.then(&g.to_mor()))
}

/// How elements with equal images are ordered by the permutation part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieOrder {
    Ascending,
    Descending,
}

/// A word in `s_i`, `d_i` (`i < n`) and `θ_i` composing to `f`: a
/// permutation sorting elements by image, then a monotone map.
pub fn phistar_factorize(f: &PhiStarMor) -> Vec<Generator> {
    factorize_with(f, TieOrder::Ascending)
}

pub fn factorize_with(f: &PhiStarMor, ties: TieOrder) -> Vec<Generator> {
    let n = f.n;
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&k| {
        (
            f.apply(k),
            if ties == TieOrder::Ascending {
                k as i64
            } else {
                -(k as i64)
            },
        )
    });
    let mut word = Vec::new();
    let mut arr = order.clone();
    let mut swaps = Vec::new();
    for pass in 0..n {
        for p in 0..n.saturating_sub(1 + pass) {
            if arr[p] > arr[p + 1] {
                arr.swap(p, p + 1);
                swaps.push(p + 1);
            }
        }
    }
    word.extend(
        swaps
            .iter()
            .rev()
            .map(|&i| Generator::Transposition { n, i }),
    );

    let mut values: Vec<usize> = order.iter().map(|&k| f.apply(k)).collect();
    let mut cur = n;
    while values.first() == Some(&0) {
        word.push(Generator::Face { n: cur, i: 0 });
        values.remove(0);
        cur -= 1;
    }
    while let Some(p) = (0..values.len().saturating_sub(1)).find(|&p| values[p] == values[p + 1]) {
        word.push(Generator::Face { n: cur, i: p + 1 });
        values.remove(p + 1);
        cur -= 1;
    }
    for t in 1..=f.m {
        if !values.contains(&t) {
            word.push(Generator::Degeneracy { n: cur, i: t - 1 });
            cur += 1;
        }
    }
    word
}

/// `Cut(f): ⟨m⟩ → ⟨n⟩` for monotone `f: [n] → [m]`.
pub fn cut(f: &DeltaMor) -> PhiStarMor {
    let (n, m) = (f.m, f.n);
    PhiStarMor::from_fn(m, n, |i| {
        if f.values[0] >= i || f.values[n] < i {
            0
        } else {
            (0..=n).find(|&k| f.values[k] >= i).unwrap()
        }
    })
}

/// Checks every generator relation of `Φ*` on objects up to `⟨n_max⟩`;
/// products are written as composites, rightmost first.
pub fn check_phistar_relations(n_max: usize) -> RelationReport {
    type P = PhiStarMor;
    let c = |a: &P, b: &P| b.then(a);
    let (s, d, t) = (P::degeneracy, P::face, P::transposition);
    let mut r = RelationReport::default();
    let mut expect = |name: String, lhs: Result<P>, rhs: Result<P>| {
        r.checked += 1;
        match (lhs, rhs) {
            (Ok(l), Ok(rr)) if l == rr => {}
            (l, rr) => r.failures.push(format!("{name}: {l:?} vs {rr:?}")),
        }
    };
    for n in 0..n_max {
        for j in 0..=n {
            for i in 0..=j {
                expect(
                    format!("s_{i} s_{j} = s_{} s_{i} on <{n}>", j + 1),
                    c(&s(n + 1, i), &s(n, j)),
                    c(&s(n + 1, j + 1), &s(n, i)),
                );
            }
            for i in 0..=n + 1 {
                let rhs = if i < j {
                    c(&s(n - 1, j - 1), &d(n, i))
                } else if i == j || i == j + 1 {
                    Ok(P::identity(n))
                } else {
                    c(&s(n - 1, j), &d(n, i - 1))
                };
                expect(
                    format!("d_{i} s_{j} on <{n}>"),
                    c(&d(n + 1, i), &s(n, j)),
                    rhs,
                );
            }
        }
        for i in 1..=n {
            for j in 0..=n {
                let lhs = c(&t(n + 1, i), &s(n, j));
                let rhs = if i < j {
                    c(&s(n, j), &t(n, i))
                } else if i == j {
                    Ok(s(n, i - 1))
                } else if i == j + 1 {
                    Ok(s(n, i))
                } else {
                    c(&s(n, j), &t(n, i - 1))
                };
                expect(format!("theta_{i} s_{j} on <{n}>"), lhs, rhs);
            }
        }
    }
    for n in 1..=n_max {
        for j in 0..=n {
            for i in 0..j {
                if n >= 2 {
                    expect(
                        format!("d_{i} d_{j} = d_{} d_{i} on <{n}>", j - 1),
                        c(&d(n - 1, i), &d(n, j)),
                        c(&d(n - 1, j - 1), &d(n, i)),
                    );
                }
            }
        }
        let mut word: Vec<Generator> = (1..n)
            .rev()
            .map(|i| Generator::Transposition { n, i })
            .collect();
        word.push(Generator::Face { n, i: 0 });
        expect(
            format!("d_{n} = d_0 theta_1 ... theta_{}", n - 1),
            Ok(d(n, n)),
            compose_word(n, &word),
        );
        for i in 1..n {
            expect(
                format!("theta_{i}^2 = id on <{n}>"),
                c(&t(n, i), &t(n, i)),
                Ok(P::identity(n)),
            );
            expect(
                format!("d_{i} theta_{i} = d_{i} on <{n}>"),
                c(&d(n, i), &t(n, i)),
                Ok(d(n, i)),
            );
            for j in i + 1..n {
                if j == i + 1 {
                    expect(
                        format!(
                            "theta_{i} theta_{j} theta_{i} = theta_{j} theta_{i} theta_{j} on <{n}>"
                        ),
                        c(&t(n, i), &t(n, j)).and_then(|x| c(&x, &t(n, i))),
                        c(&t(n, j), &t(n, i)).and_then(|x| c(&x, &t(n, j))),
                    );
                } else {
                    expect(
                        format!("theta_{i} theta_{j} = theta_{j} theta_{i} on <{n}>"),
                        c(&t(n, i), &t(n, j)),
                        c(&t(n, j), &t(n, i)),
                    );
                }
            }
        }
        for i in 1..n.saturating_sub(1) {
            for j in 0..=n {
                let lhs = c(&t(n - 1, i), &d(n, j));
                let rhs = if i + 1 < j {
                    c(&d(n, j), &t(n, i))
                } else if i + 1 == j {
                    c(&d(n, i), &t(n, i + 1)).and_then(|x| c(&x, &t(n, i)))
                } else if i == j {
                    c(&d(n, i + 1), &t(n, i)).and_then(|x| c(&x, &t(n, i + 1)))
                } else {
                    c(&d(n, j), &t(n, i + 1))
                };
                expect(format!("theta_{i} d_{j} on <{n}>"), lhs, rhs);
            }
        }
    }
    r
}

/// A truncated simplicial set with the transpositions `θ_i^n`,
/// `1 ≤ i ≤ n - 1`, stored as `theta[n][i - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaData {
    pub base: TruncSimplicialSet,
    pub theta: Vec<Vec<FinMap>>,
}

impl GammaData {
    pub fn new(base: TruncSimplicialSet, theta: Vec<Vec<FinMap>>) -> Result<Self> {
        if theta.len() != base.top() + 1 {
            return Err(structural("transpositions must be listed for every level"));
        }
        for (n, row) in theta.iter().enumerate() {
            if row.len() != n.saturating_sub(1) {
                return Err(structural(format!(
                    "level {n} needs {} transpositions",
                    n.saturating_sub(1)
                )));
            }
            if row
                .iter()
                .any(|t| t.dom() != base.size(n) || t.cod() != base.size(n))
            {
                return Err(structural(format!(
                    "a transposition at level {n} is not an endomap"
                )));
            }
        }
        Ok(GammaData { base, theta })
    }

    pub fn top(&self) -> usize {
        self.base.top()
    }

    pub fn theta(&self, n: usize, i: usize) -> &FinMap {
        &self.theta[n][i - 1]
    }

    fn generator(&self, g: &Generator) -> Result<FinMap> {
        let top = self.top();
        let need = match *g {
            Generator::Degeneracy { n, .. } => n + 1,
            Generator::Face { n, .. } | Generator::Transposition { n, .. } => n,
        };
        if need > top {
            return Err(Error::Truncation { needed: need, top });
        }
        Ok(match *g {
            Generator::Face { n, i } => self.base.d(n, i).clone(),
            Generator::Degeneracy { n, i } => self.base.s(n, i).clone(),
            Generator::Transposition { n, i } => self.theta(n, i).clone(),
        })
    }

    pub fn evaluate_word(&self, n: usize, word: &[Generator]) -> Result<FinMap> {
        word.iter().try_fold(
            FinMap::identity(self.base.size(n.min(self.top()))),
            |acc, g| acc.then(&self.generator(g)?),
        )
    }

    /// `f_*: X_n → X_m`.
    pub fn evaluate(&self, f: &PhiStarMor) -> Result<FinMap> {
        let top = self.top();
        if f.n > top || f.m > top {
            return Err(Error::Truncation {
                needed: f.n.max(f.m),
                top,
            });
        }
        self.evaluate_word(f.n, &phistar_factorize(f))
    }
}

pub fn evaluate_gamma(g: &GammaData, f: &PhiStarMor) -> Result<FinMap> {
    g.evaluate(f)
}

/// Every violated relation among faces, degeneracies and transpositions.
pub fn check_gamma(g: &GammaData) -> Vec<Violation> {
    let x = &g.base;
    let top = x.top();
    let mut out = x.check_simplicial_identities();
    let th = |n: usize, i: usize| g.theta(n, i);
    let tn = |n: usize, i: usize| format!("theta{i}^{n}");
    let cmp =
        |out: &mut Vec<Violation>,
         rel: String,
         n: usize,
         l: FinMap,
         r: FinMap,
         maps: Vec<String>| { compare(out, rel, n, l.table(), r.table(), maps) };
    let seq = |maps: &[&FinMap]| -> FinMap {
        // applied left to right
        maps[1..]
            .iter()
            .fold(maps[0].clone(), |acc, m| acc.then(m).expect("levels match"))
    };
    for n in 2..=top {
        let id = FinMap::identity(x.size(n));
        for i in 1..n {
            cmp(
                &mut out,
                "theta_i^2 = id".into(),
                n,
                seq(&[th(n, i), th(n, i)]),
                id.clone(),
                vec![tn(n, i)],
            );
            cmp(
                &mut out,
                "d_i theta_i = d_i".into(),
                n,
                seq(&[th(n, i), x.d(n, i)]),
                x.d(n, i).clone(),
                vec![tn(n, i), format!("d{i}^{n}")],
            );
            for j in i + 1..n {
                let maps = vec![tn(n, i), tn(n, j)];
                if j == i + 1 {
                    cmp(
                        &mut out,
                        "theta_i theta_j theta_i = theta_j theta_i theta_j".into(),
                        n,
                        seq(&[th(n, i), th(n, j), th(n, i)]),
                        seq(&[th(n, j), th(n, i), th(n, j)]),
                        maps,
                    );
                } else {
                    cmp(
                        &mut out,
                        "theta_i theta_j = theta_j theta_i".into(),
                        n,
                        seq(&[th(n, j), th(n, i)]),
                        seq(&[th(n, i), th(n, j)]),
                        maps,
                    );
                }
            }
        }
    }
    for n in 1..=top {
        let mut last = FinMap::identity(x.size(n));
        for i in (1..n).rev() {
            last = last.then(th(n, i)).unwrap();
        }
        let maps = [
            vec![format!("d{n}^{n}"), format!("d0^{n}")],
            (1..n).map(|i| tn(n, i)).collect(),
        ]
        .concat();
        cmp(
            &mut out,
            "d_n = d_0 theta_1 ... theta_{n-1}".into(),
            n,
            x.d(n, n).clone(),
            last.then(x.d(n, 0)).unwrap(),
            maps,
        );
    }
    // θ_i^{n+1} s_j^n
    for n in 1..top {
        for i in 1..=n {
            for j in 0..=n {
                let lhs = seq(&[x.s(n, j), th(n + 1, i)]);
                let rhs = if i < j {
                    seq(&[th(n, i), x.s(n, j)])
                } else if i == j {
                    x.s(n, i - 1).clone()
                } else if i == j + 1 {
                    x.s(n, i).clone()
                } else {
                    seq(&[th(n, i - 1), x.s(n, j)])
                };
                cmp(
                    &mut out,
                    format!("theta_{i} s_{j}"),
                    n,
                    lhs,
                    rhs,
                    vec![tn(n + 1, i), format!("s{j}^{n}")],
                );
            }
        }
    }
    // θ_i^{n-1} d_j^n, including the final face
    for n in 3..=top {
        for i in 1..=n - 2 {
            for j in 0..=n {
                let lhs = seq(&[x.d(n, j), th(n - 1, i)]);
                let rhs = if i + 1 < j {
                    seq(&[th(n, i), x.d(n, j)])
                } else if i + 1 == j {
                    seq(&[th(n, i), th(n, i + 1), x.d(n, i)])
                } else if i == j {
                    seq(&[th(n, i + 1), th(n, i), x.d(n, i + 1)])
                } else {
                    seq(&[th(n, i + 1), x.d(n, j)])
                };
                cmp(
                    &mut out,
                    format!("theta_{i} d_{j}"),
                    n,
                    lhs,
                    rhs,
                    vec![tn(n - 1, i), format!("d{j}^{n}")],
                );
            }
        }
    }
    out
}

/// `X_1 × X_1 ← X_2 → X_1` with left leg `(d_0, d_2)`, as `μ ∘ ρ`.
pub fn mu_rho_span(x: &TruncSimplicialSet) -> Result<Span> {
    crate::finspan::compose_spans(&braiding_span(x.size(1), x.size(1)), &mult_span(x))
}

/// `γ: μ ⇒ μ ∘ ρ` together with the transposition `θ` it encodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutativityCell {
    pub gamma: SpanCell,
    pub theta: FinMap,
}

fn cell_from_theta(x: &TruncSimplicialSet, theta: &FinMap) -> Result<SpanCell> {
    let b = x.size(1);
    let (target, pb) = compose_with_pullback(&braiding_span(b, b), &mult_span(x))?;
    let table = (0..x.size(2))
        .map(|xi| {
            let t = theta.apply(xi);
            pb.index_of(x.face(2, 0, t) * b + x.face(2, 2, t), t)
                .ok_or_else(|| {
                    Error::NotCommutative(format!(
                        "theta moves 2-simplex {xi} off the swapped edges"
                    ))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    SpanCell::new(mult_span(x), target, FinMap::new(pb.apex.size, table)?)
        .map_err(|e| Error::NotCommutative(format!("theta is not a span cell: {e}")))
}

fn theta_from_cell(x: &TruncSimplicialSet, gamma: &SpanCell) -> Result<FinMap> {
    let b = x.size(1);
    let (target, pb) = compose_with_pullback(&braiding_span(b, b), &mult_span(x))?;
    if gamma.source != mult_span(x) || gamma.target != target {
        return Err(Error::NotCommutative(
            "the cell does not run from μ to μ ∘ ρ".into(),
        ));
    }
    if let Some(defect) = cell_defect(gamma) {
        return Err(Error::NotCommutative(format!("not a span cell: {defect}")));
    }
    Ok(FinMap::from_fn(x.size(2), x.size(2), |xi| {
        pb.pair(gamma.map.apply(xi)).1
    }))
}

/// `c: X_3 → X_3` with `d_3 c = d_0` and `d_1 c = θ d_2`.
fn hexagon_map(seg: &TwoSegal, theta: &FinMap) -> Result<FinMap> {
    let x = seg.base();
    let t13 = Triangulation::fan(3, 0);
    let table = (0..x.size(3))
        .map(|psi| seg.glue(&t13, &[x.face(3, 0, psi), theta.apply(x.face(3, 2, psi))]))
        .collect::<Result<Vec<_>>>()?;
    FinMap::new(x.size(3), table)
}

fn braid(base: usize) -> Block {
    Block::structural(&braiding_span(base, base), 2, 2)
}

fn mu_node(label: &str, mult: &Span) -> Block {
    Block::node(label, mult, 2, 1)
}

fn composite(base: usize, inputs: usize, layers: Vec<Vec<Block>>) -> Result<Composite> {
    Diagram::new(base, inputs, layers).composite()
}

fn place<'a>(
    layer: usize,
    strand: usize,
    from: &'a Composite,
    to: &'a Composite,
    cell: &'a FinMap,
) -> Move<'a> {
    Move {
        layer,
        strand,
        box_source: from,
        box_target: to,
        cell,
        rename: vec![],
    }
}

fn matches_boxes(cell: &SpanCell, from: &Composite, to: &Composite) -> Result<()> {
    if cell.source != from.span || cell.target != to.span {
        return Err(structural("structural cell does not match its boxes"));
    }
    Ok(())
}

/// `(γ ρ) · γ = μ v⁻¹` as cells `μ ⇒ μ ρ ρ`.
pub fn full_symmetry(x: &TruncSimplicialSet, gamma: &SpanCell) -> Result<bool> {
    let b = x.size(1);
    let mult = mult_span(x);
    let d0 = composite(b, 2, vec![vec![mu_node("m", &mult)]])?;
    let d1 = composite(b, 2, vec![vec![braid(b)], vec![mu_node("m", &mult)]])?;
    let d2 = composite(
        b,
        2,
        vec![vec![braid(b)], vec![braid(b)], vec![mu_node("m", &mult)]],
    )?;
    let empty = composite(b, 2, vec![])?;
    let twice = composite(b, 2, vec![vec![braid(b)], vec![braid(b)]])?;
    matches_boxes(gamma, &d0, &d1)?;
    let lhs = vertical_compose(
        &place(0, 0, &d0, &d1, &gamma.map).apply(&d0, &d1, b)?,
        &place(1, 0, &d0, &d1, &gamma.map).apply(&d1, &d2, b)?,
    )?;
    let v = syllepsis_cell(b, b)?
        .inverse()
        .ok_or_else(|| structural("syllepsis is not invertible"))?;
    matches_boxes(&v, &empty, &twice)?;
    let rhs = place(0, 0, &empty, &twice, &v.map).apply(&d0, &d2, b)?;
    Ok(lhs == rhs)
}

/// Both sides of the hexagon as cells `(μ ⊗ id) μ ⇒ ρ_{X,X⊗X} (id ⊗ μ) μ`.
pub fn full_hexagon(x: &TruncSimplicialSet, gamma: &SpanCell) -> Result<bool> {
    let b = x.size(1);
    let p = build_pseudomonoid(x)?;
    let mult = &p.mult;
    let w = || Block::Wire;
    let m = |l: &str| mu_node(l, mult);
    let braid3 = Block::structural(&braiding_span(b, b * b), 3, 3);
    let start = composite(b, 3, vec![vec![m("p"), w()], vec![m("q")]])?;
    let right = composite(b, 3, vec![vec![w(), m("p")], vec![m("q")]])?;
    let top3 = composite(b, 3, vec![vec![w(), m("p")], vec![braid(b)], vec![m("q")]])?;
    let top4 = composite(
        b,
        3,
        vec![vec![braid3.clone()], vec![m("p"), w()], vec![m("q")]],
    )?;
    let end = composite(
        b,
        3,
        vec![vec![braid3.clone()], vec![w(), m("p")], vec![m("q")]],
    )?;
    let bot2 = composite(
        b,
        3,
        vec![vec![braid(b), w()], vec![m("p"), w()], vec![m("q")]],
    )?;
    let bot3 = composite(
        b,
        3,
        vec![vec![braid(b), w()], vec![w(), m("p")], vec![m("q")]],
    )?;
    let bot4 = composite(
        b,
        3,
        vec![
            vec![braid(b), w()],
            vec![w(), braid(b)],
            vec![w(), m("p")],
            vec![m("q")],
        ],
    )?;

    let (a_src, a_tgt) = assoc_boxes(b, mult, ["p", "q"], ["p", "q"])?;
    let gq = (
        composite(b, 2, vec![vec![m("q")]])?,
        composite(b, 2, vec![vec![braid(b)], vec![m("q")]])?,
    );
    let gp = (
        composite(b, 2, vec![vec![m("p")]])?,
        composite(b, 2, vec![vec![braid(b)], vec![m("p")]])?,
    );
    matches_boxes(gamma, &gq.0, &gq.1)?;
    let slide = braiding_cell(&Span::identity(b), mult)?;
    let slide_boxes = (
        composite(b, 3, vec![vec![w(), m("p")], vec![braid(b)]])?,
        composite(b, 3, vec![vec![braid3.clone()], vec![m("p"), w()]])?,
    );
    matches_boxes(&slide, &slide_boxes.0, &slide_boxes.1)?;
    let hex = hexagonator_cell(b, b, b)?;
    let hex_boxes = (
        composite(b, 3, vec![vec![braid(b), w()], vec![w(), braid(b)]])?,
        composite(b, 3, vec![vec![braid3]])?,
    );
    matches_boxes(&hex, &hex_boxes.0, &hex_boxes.1)?;

    let assoc = &p.assoc.map;
    let steps_top = [
        place(0, 0, &a_src, &a_tgt, assoc).apply(&start, &right, b)?,
        place(1, 0, &gq.0, &gq.1, &gamma.map).apply(&right, &top3, b)?,
        place(0, 0, &slide_boxes.0, &slide_boxes.1, &slide.map).apply(&top3, &top4, b)?,
        place(1, 0, &a_src, &a_tgt, assoc).apply(&top4, &end, b)?,
    ];
    let steps_bottom = [
        place(0, 0, &gp.0, &gp.1, &gamma.map).apply(&start, &bot2, b)?,
        place(1, 0, &a_src, &a_tgt, assoc).apply(&bot2, &bot3, b)?,
        place(1, 1, &gp.0, &gp.1, &gamma.map).apply(&bot3, &bot4, b)?,
        place(0, 0, &hex_boxes.0, &hex_boxes.1, &hex.map).apply(&bot4, &end, b)?,
    ];
    let chain = |steps: &[SpanCell]| -> Result<SpanCell> {
        steps[1..]
            .iter()
            .try_fold(steps[0].clone(), |acc, s| vertical_compose(&acc, s))
    };
    Ok(chain(&steps_top)? == chain(&steps_bottom)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommutativeReport {
    pub cell: CommutativityCell,
    /// `θ² = id`.
    pub symmetric: bool,
    /// `c = θ_2^3 θ_1^3`.
    pub hexagon: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hexagon_witness: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_symmetry: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_hexagon: Option<bool>,
}

impl CommutativeReport {
    pub fn passed(&self) -> bool {
        self.symmetric
            && self.hexagon
            && self.full_symmetry != Some(false)
            && self.full_hexagon != Some(false)
    }
}

/// `γ := θ_1^2`, with the reduced checks and, when `full`, the span-level
/// symmetry and hexagon equations.
pub fn commutative_from_gamma(g: &GammaData, full: bool) -> Result<CommutativeReport> {
    let x = &g.base;
    let seg = TwoSegal::new(x)?;
    let theta = g.theta(2, 1).clone();
    let gamma = cell_from_theta(x, &theta)?;
    let symmetric = theta.then(&theta)? == FinMap::identity(x.size(2));
    let c = hexagon_map(&seg, &theta);
    let both = g.theta(3, 1).then(g.theta(3, 2))?;
    let hexagon_witness = match &c {
        Ok(c) => crate::report::first_mismatch(c.table(), both.table()).map(|m| m.0),
        Err(_) => Some(0),
    };
    let (full_symmetry, full_hexagon) = if full {
        (
            Some(full_symmetry(x, &gamma)?),
            Some(full_hexagon(x, &gamma)?),
        )
    } else {
        (None, None)
    };
    Ok(CommutativeReport {
        cell: CommutativityCell { gamma, theta },
        symmetric,
        hexagon: hexagon_witness.is_none(),
        hexagon_witness,
        full_symmetry,
        full_hexagon,
    })
}

/// The triangulation used for `θ_i^n`: the ear `{i-1, i, i+1}` and a fan
/// from vertex 0, or from vertex `n` when `i = 1`.
pub fn theta_triangulation(n: usize, i: usize) -> Triangulation {
    let mut tris = vec![[i - 1, i, i + 1]];
    let ring: Vec<usize> = (0..=n).filter(|&v| v != i).collect();
    let apex = if i == 1 { ring.len() - 1 } else { 0 };
    tris.extend(Triangulation::fan_over(&ring, apex));
    Triangulation::new(n, tris)
}

fn apply_on_triangle(
    seg: &TwoSegal,
    t: &Triangulation,
    ear: [usize; 3],
    theta: &FinMap,
    psi: usize,
) -> Result<usize> {
    let mut poly = seg.polygon(t, psi);
    let part = poly
        .part(ear)
        .ok_or_else(|| structural("triangle missing from triangulation"))?;
    poly.set_part(ear, theta.apply(part));
    poly.to_simplex(seg)
}

/// The Γ-structure of a commutative structure, after checking the
/// span-level symmetry and hexagon equations.
pub fn gamma_from_commutative(x: &TruncSimplicialSet, gamma: &SpanCell) -> Result<GammaData> {
    let seg = TwoSegal::new(x)?;
    let theta = theta_from_cell(x, gamma)?;
    if !gamma.is_invertible() {
        return Err(Error::NotCommutative("the cell is not invertible".into()));
    }
    if !full_symmetry(x, gamma)? {
        return Err(Error::NotCommutative("symmetry equation fails".into()));
    }
    if !full_hexagon(x, gamma)? {
        return Err(Error::NotCommutative("hexagon equation fails".into()));
    }
    let mut rows = vec![Vec::new(), Vec::new(), vec![theta.clone()]];
    for n in 3..=x.top() {
        let mut row = Vec::new();
        for i in 1..n {
            let t = theta_triangulation(n, i);
            let table = (0..x.size(n))
                .map(|psi| apply_on_triangle(&seg, &t, [i - 1, i, i + 1], &theta, psi))
                .collect::<Result<Vec<_>>>()?;
            row.push(FinMap::new(x.size(n), table)?);
        }
        rows.push(row);
    }
    GammaData::new(x.clone(), rows)
}

/// A triangulation whose choice changes `θ_i^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceCounterexample {
    pub n: usize,
    pub i: usize,
    pub triangulation: String,
    pub element: usize,
}

/// Compares `θ_i^n` over every triangulation containing the ear.
pub fn theta_choice_counterexample(g: &GammaData) -> Result<Option<ChoiceCounterexample>> {
    let x = &g.base;
    let seg = TwoSegal::new(x)?;
    let theta = g.theta(2, 1);
    for n in 3..=x.top() {
        for i in 1..n {
            let ear = [i - 1, i, i + 1];
            for t in enumerate_triangulations(n)
                .into_iter()
                .filter(|t| t.contains(ear))
            {
                for psi in 0..x.size(n) {
                    if apply_on_triangle(&seg, &t, ear, theta, psi)? != g.theta(n, i).apply(psi) {
                        return Ok(Some(ChoiceCounterexample {
                            n,
                            i,
                            triangulation: t.to_string(),
                            element: psi,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Per-level, per-index transposition tables for the JSON document.
pub fn theta_tables(g: &GammaData) -> Vec<Vec<Vec<usize>>> {
    g.theta
        .iter()
        .map(|row| row.iter().map(|t| t.table().to_vec()).collect())
        .collect()
}

pub fn from_theta_tables(
    base: TruncSimplicialSet,
    tables: &[Vec<Vec<usize>>],
) -> Result<GammaData> {
    let sizes = base.sizes();
    let theta = tables
        .iter()
        .enumerate()
        .map(|(n, row)| {
            let size = *sizes.get(n).ok_or(Error::Truncation {
                needed: n,
                top: base.top(),
            })?;
            row.iter()
                .map(|t| FinMap::new(size, t.clone()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GammaData::new(base, theta)
}

/// Orbit sizes of the group generated by the transpositions at level `n`,
/// found by closing the generators under composition.
pub fn generated_group_order(g: &GammaData, n: usize) -> usize {
    let gens: Vec<&FinMap> = g.theta[n].iter().collect();
    let id = FinMap::identity(g.base.size(n));
    let mut seen: HashMap<Vec<usize>, ()> = HashMap::from([(id.table().to_vec(), ())]);
    let mut frontier = vec![id];
    while let Some(h) = frontier.pop() {
        for t in &gens {
            let next = h.then(t).expect("endomaps");
            if seen.insert(next.table().to_vec(), ()).is_none() {
                frontier.push(next);
            }
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::SmallCategory;
    use crate::examples::{
        Graph, GraphPartitions, SubgraphConvention, commutative_gamma, interval_monoid,
        symmetric_group_3,
    };
    use crate::simplicial::check_2segal;
    use proptest::prelude::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn arb_phistar(max: usize) -> impl Strategy<Value = PhiStarMor> {
        (0..=max, 0..=max).prop_flat_map(|(n, m)| {
            proptest::collection::vec(0..=m, n).prop_map(move |t| PhiStarMor::new(m, t).unwrap())
        })
    }

    fn arb_delta(max: usize) -> impl Strategy<Value = DeltaMor> {
        (0..=max, 0..=max).prop_flat_map(|(m, n)| {
            proptest::collection::vec(0..=n, m + 1).prop_map(move |mut v| {
                v.sort();
                DeltaMor::new(n, v).unwrap()
            })
        })
    }

    fn random_phistar(rng: &mut ChaCha8Rng, n: usize, m: usize) -> PhiStarMor {
        PhiStarMor::new(m, (0..n).map(|_| rng.random_range(0..=m)).collect()).unwrap()
    }

    #[test]
    fn generator_tables() {
        assert_eq!(PhiStarMor::degeneracy(2, 1).table, vec![1, 3]);
        assert_eq!(PhiStarMor::face(3, 0).table, vec![0, 1, 2]);
        assert_eq!(PhiStarMor::face(3, 1).table, vec![1, 1, 2]);
        assert_eq!(PhiStarMor::face(3, 3).table, vec![1, 2, 0]);
        assert_eq!(PhiStarMor::transposition(3, 2).table, vec![1, 3, 2]);
        assert_eq!(PhiStarMor::face(1, 0), PhiStarMor::face(1, 1));
        assert_eq!(
            PhiStarMor::new(2, vec![0, 2]).unwrap().to_phi(),
            vec![0, 0, 2]
        );
        assert!(PhiStarMor::new(1, vec![2]).is_err());
    }

    #[test]
    fn last_face_as_a_word() {
        for n in 1..6 {
            let mut word: Vec<Generator> = (1..n)
                .rev()
                .map(|i| Generator::Transposition { n, i })
                .collect();
            word.push(Generator::Face { n, i: 0 });
            assert_eq!(compose_word(n, &word).unwrap(), PhiStarMor::face(n, n));
        }
    }

    #[test]
    fn phistar_relations() {
        let report = check_phistar_relations(6);
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.checked, 409);
    }

    #[test]
    fn relations_hold_in_the_category() {
        let word = |n: usize, gens: &[Generator]| compose_word(n, gens).unwrap();
        use Generator::*;
        for n in 2..6 {
            for i in 1..n {
                assert_eq!(
                    word(n, &[Transposition { n, i }, Transposition { n, i }]),
                    PhiStarMor::identity(n)
                );
                assert_eq!(
                    word(n, &[Transposition { n, i }, Face { n, i }]),
                    PhiStarMor::face(n, i)
                );
            }
            for i in 1..n.saturating_sub(1) {
                let (a, b) = (Transposition { n, i }, Transposition { n, i: i + 1 });
                assert_eq!(word(n, &[a, b, a]), word(n, &[b, a, b]));
            }
        }
    }

    #[test]
    fn cut_examples() {
        let f = DeltaMor::new(3, vec![0, 2, 2]).unwrap();
        assert_eq!(cut(&f).table, vec![1, 1, 0]);
        for n in 1..5 {
            for i in 0..=n {
                assert_eq!(cut(&DeltaMor::coface(n, i)), PhiStarMor::face(n, i));
            }
            for i in 0..n {
                assert_eq!(
                    cut(&DeltaMor::codegeneracy(n - 1, i)),
                    PhiStarMor::degeneracy(n - 1, i)
                );
            }
        }
    }

    proptest! {
        #[test]
        fn factorization_recomposes(f in arb_phistar(5)) {
            for ties in [TieOrder::Ascending, TieOrder::Descending] {
                let word = factorize_with(&f, ties);
                let last_face = word.iter().any(|g| matches!(g, Generator::Face { n, i } if i == n));
                prop_assert!(!last_face);
                prop_assert_eq!(compose_word(f.n, &word).unwrap(), f.clone());
            }
        }

        #[test]
        fn cut_is_contravariant(f in arb_delta(4), seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = rng.random_range(0..=4usize);
            let mut v: Vec<usize> = (0..=f.n).map(|_| rng.random_range(0..=k)).collect();
            v.sort();
            let g = DeltaMor::new(k, v).unwrap();
            prop_assert_eq!(cut(&f.then(&g).unwrap()), cut(&g).then(&cut(&f)).unwrap());
        }

        #[test]
        fn phistar_associative(seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d: Vec<usize> = (0..4).map(|_| rng.random_range(0..5)).collect();
            let f = random_phistar(&mut rng, d[0], d[1]);
            let g = random_phistar(&mut rng, d[1], d[2]);
            let h = random_phistar(&mut rng, d[2], d[3]);
            prop_assert_eq!(f.then(&g).unwrap().then(&h).unwrap(), f.then(&g.then(&h).unwrap()).unwrap());
        }
    }

    fn interval() -> GammaData {
        commutative_gamma(&interval_monoid(3), 4).unwrap()
    }

    fn z3() -> GammaData {
        commutative_gamma(&SmallCategory::cyclic_group(3).unwrap(), 4).unwrap()
    }

    fn path3() -> GraphPartitions {
        GraphPartitions::new(Graph::path(3), SubgraphConvention::Induced, 4)
    }

    #[test]
    fn catalog_passes_relations() {
        for g in [interval(), z3(), path3().gamma().unwrap()] {
            assert_eq!(check_gamma(&g), vec![]);
            assert!(check_2segal(&g.base).passed());
        }
        assert_eq!(generated_group_order(&z3(), 3), 6);
    }

    #[test]
    fn noncommutative_rejected() {
        assert!(commutative_gamma(&symmetric_group_3().unwrap(), 3).is_err());
    }

    #[test]
    fn z3_theta_swaps_coordinates() {
        let g = z3();
        let pair = |a: usize, b: usize| 3 * a + b;
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(g.theta(2, 1).apply(pair(a, b)), pair(b, a));
            }
        }
    }

    #[test]
    fn graph_partition_sizes() {
        assert_eq!(path3().size(4), 125);
        let edge = Graph::new(2, vec![(0, 1)]).unwrap();
        assert_eq!(
            GraphPartitions::new(edge.clone(), SubgraphConvention::Induced, 2).size(1),
            4
        );
        assert_eq!(
            GraphPartitions::new(edge, SubgraphConvention::Arbitrary, 2).size(1),
            5
        );
        let empty = GraphPartitions::new(
            Graph::new(0, vec![]).unwrap(),
            SubgraphConvention::Induced,
            3,
        );
        assert!((0..=3).all(|n| empty.size(n) == 1));
        assert!(Graph::new(2, vec![(1, 1)]).is_err());
    }

    #[test]
    fn graph_partition_bullets() {
        let p = path3();
        let x = p.simplicial().unwrap();
        for n in 1..=3 {
            for e in 0..p.size(n) {
                let labels = p.element(n, e);
                let blocks = |t: &[usize], k: usize| -> Vec<Vec<usize>> {
                    (1..=k)
                        .map(|j| (0..3).filter(|&v| t[v] == j).collect())
                        .collect()
                };
                let before = blocks(labels, n);
                let face = |i: usize| blocks(p.element(n - 1, x.face(n, i, e)), n - 1);
                assert_eq!(face(0), before[1..].to_vec());
                assert_eq!(face(n), before[..n - 1].to_vec());
                for i in 1..n {
                    let mut merged = before.clone();
                    let next = merged.remove(i);
                    merged[i - 1].extend(next);
                    merged[i - 1].sort();
                    assert_eq!(face(i), merged);
                }
                for i in 0..=n {
                    let mut spread = before.clone();
                    spread.insert(i, vec![]);
                    assert_eq!(blocks(p.element(n + 1, x.degen(n, i, e)), n + 1), spread);
                }
            }
        }
    }

    #[test]
    fn graph_partitions_functorial() {
        let p = GraphPartitions::new(Graph::path(3), SubgraphConvention::Arbitrary, 4);
        let g = p.gamma().unwrap();
        assert_eq!(check_gamma(&g), vec![]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let d: Vec<usize> = (0..3).map(|_| rng.random_range(0..=4)).collect();
            let f = random_phistar(&mut rng, d[0], d[1]);
            let h = random_phistar(&mut rng, d[1], d[2]);
            let direct = p.push(&f.then(&h).unwrap()).unwrap();
            assert_eq!(
                direct,
                p.push(&f).unwrap().then(&p.push(&h).unwrap()).unwrap()
            );
            for ties in [TieOrder::Ascending, TieOrder::Descending] {
                assert_eq!(
                    g.evaluate_word(f.n, &factorize_with(&f, ties)).unwrap(),
                    p.push(&f).unwrap()
                );
            }
        }
    }

    #[test]
    fn evaluate_respects_truncation() {
        let g = interval();
        assert!(matches!(
            g.evaluate(&PhiStarMor::identity(5)),
            Err(Error::Truncation { needed: 5, top: 4 })
        ));
        assert_eq!(
            g.evaluate(&PhiStarMor::identity(3)).unwrap(),
            FinMap::identity(g.base.size(3))
        );
    }

    #[test]
    fn round_trip_through_commutative_structure() {
        for g in [interval(), z3(), path3().gamma().unwrap()] {
            let report = commutative_from_gamma(&g, true).unwrap();
            assert!(report.passed(), "{report:?}");
            assert!(report.cell.gamma.is_invertible());
            let back = gamma_from_commutative(&g.base, &report.cell.gamma).unwrap();
            assert_eq!(back.theta, g.theta);
            assert_eq!(theta_choice_counterexample(&g).unwrap(), None);
        }
    }

    #[test]
    fn mutated_transposition_detected() {
        let mut g = interval();
        let t = &g.theta[3][0];
        let moved = (0..t.dom()).find(|&e| t.apply(e) != e).unwrap();
        let mut table = t.table().to_vec();
        table.swap(moved, t.apply(moved));
        let mutated = FinMap::new(t.cod(), table).unwrap();
        assert_ne!(&mutated, t);
        g.theta[3][0] = mutated;
        let violations = check_gamma(&g);
        assert!(
            violations
                .iter()
                .any(|v| v.maps.contains(&"theta1^3".to_string()))
        );
        let report = commutative_from_gamma(&g, false).unwrap();
        assert!(!report.hexagon);
        assert!(report.symmetric);
    }

    #[test]
    fn bad_cells_rejected() {
        let g = interval();
        let mut cell = commutative_from_gamma(&g, false).unwrap().cell.gamma;
        assert!(gamma_from_commutative(&g.base, &cell).is_ok());
        let table: Vec<usize> = (0..cell.map.dom()).map(|_| 0).collect();
        cell.map = FinMap::new(cell.map.cod(), table).unwrap();
        assert!(matches!(
            gamma_from_commutative(&g.base, &cell),
            Err(Error::NotCommutative(_))
        ));
    }

    #[test]
    fn identity_cell_is_not_symmetric_on_a_nontrivial_monoid() {
        // θ = id is a cell only where every 2-simplex is symmetric
        let g = interval();
        let id = FinMap::identity(g.base.size(2));
        assert!(cell_from_theta(&g.base, &id).is_err());
    }
}
