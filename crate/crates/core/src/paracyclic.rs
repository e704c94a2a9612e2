//! The paracyclic category, paracyclic structures on truncated simplicial
//! sets, and their correspondence with Frobenius counits.

use serde::{Deserialize, Serialize};

use crate::diagram::{Block, Composite, Diagram, Move};
use crate::error::{Error, Result, structural};
use crate::finspan::{
    FinMap, Span, SpanCell, compose_spans, compose_with_pullback, pullback, spans_isomorphic,
    tensorator_cell, vertical_compose,
};
use crate::pseudomonoid::mult_span;
use crate::report::{Violation, compare, first_mismatch};
use crate::simplicial::{DeltaMor, Triangulation, TruncSimplicialSet, TwoSegal, ear_triangulation};

/// A morphism `[m] → [n]` of the paracyclic category, stored as the values
/// on `0..=m` of an order-preserving `f: ℤ → ℤ` with
/// `f(i + k(m+1)) = f(i) + k(n+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LambdaMor {
    pub m: usize,
    pub n: usize,
    pub values: Vec<i64>,
}

impl LambdaMor {
    pub fn new(m: usize, n: usize, values: Vec<i64>) -> Result<Self> {
        if values.len() != m + 1 {
            return Err(structural(format!(
                "a map out of [{m}] needs {} values",
                m + 1
            )));
        }
        if values.windows(2).any(|w| w[0] > w[1]) || values[m] > values[0] + n as i64 + 1 {
            return Err(structural(format!(
                "{values:?} does not extend to a map [{m}] → [{n}]"
            )));
        }
        Ok(LambdaMor { m, n, values })
    }

    pub fn identity(n: usize) -> Self {
        LambdaMor::shift(n, 0)
    }

    /// `i ↦ i + k` on `[n]`, i.e. the `k`-th power of `T`.
    pub fn shift(n: usize, k: i64) -> Self {
        LambdaMor {
            m: n,
            n,
            values: (0..=n as i64).map(|i| i + k).collect(),
        }
    }

    pub fn rotation(n: usize) -> Self {
        LambdaMor::shift(n, 1)
    }

    pub fn coface(n: usize, i: usize) -> Self {
        LambdaMor::from_delta(&DeltaMor::coface(n, i))
    }

    /// `σ_i: [n+1] → [n]` for `i ≤ n + 1`; `i = n + 1` is the extra codegeneracy.
    pub fn codegeneracy(n: usize, i: usize) -> Self {
        LambdaMor {
            m: n + 1,
            n,
            values: (0..=n + 1)
                .map(|j| if j <= i { j as i64 } else { j as i64 - 1 })
                .collect(),
        }
    }

    pub fn from_delta(f: &DeltaMor) -> Self {
        LambdaMor {
            m: f.m,
            n: f.n,
            values: f.values.iter().map(|&v| v as i64).collect(),
        }
    }

    /// The equivariant extension at `i`.
    pub fn extend(&self, i: i64) -> i64 {
        let p = self.m as i64 + 1;
        self.values[i.rem_euclid(p) as usize] + i.div_euclid(p) * (self.n as i64 + 1)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &LambdaMor) -> Result<LambdaMor> {
        if self.n != next.m {
            return Err(structural(format!(
                "cannot follow a map into [{}] by a map out of [{}]",
                self.n, next.m
            )));
        }
        Ok(LambdaMor {
            m: self.m,
            n: next.n,
            values: self.values.iter().map(|&v| next.extend(v)).collect(),
        })
    }

    pub fn is_delta(&self) -> bool {
        self.values[0] >= 0 && self.values[self.m] <= self.n as i64
    }

    /// Writes `f = g ∘ (T^m)^{-a}` with `g` in Δ, where `a` is the least
    /// integer with `f(a) ≥ 0`.
    pub fn factorize(&self) -> (DeltaMor, i64) {
        let mut a = 0i64;
        if self.extend(0) >= 0 {
            while self.extend(a - 1) >= 0 {
                a -= 1;
            }
        } else {
            while self.extend(a) < 0 {
                a += 1;
            }
        }
        let values = (0..=self.m as i64)
            .map(|i| self.extend(i + a) as usize)
            .collect();
        let g = DeltaMor {
            m: self.m,
            n: self.n,
            values,
        };
        (g, a)
    }
}

/// `f` then `g`, i.e. `g ∘ f`.
pub fn lambda_compose(f: &LambdaMor, g: &LambdaMor) -> Result<LambdaMor> {
    f.then(g)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn expect(&mut self, name: String, lhs: Result<LambdaMor>, rhs: Result<LambdaMor>) {
        self.checked += 1;
        match (lhs, rhs) {
            (Ok(l), Ok(r)) if l == r => {}
            (l, r) => self.failures.push(format!("{name}: {l:?} vs {r:?}")),
        }
    }
}

/// Checks the generating relations of the paracyclic category up to `n_max`.
/// Products are written as composites, `ab` meaning `b` first.
pub fn check_lambda_relations(n_max: usize) -> RelationReport {
    use LambdaMor as L;
    let c = |a: &L, b: &L| b.then(a);
    let mut r = RelationReport::default();
    for n in 0..=n_max {
        let t = L::rotation(n);
        if n >= 1 {
            for i in 0..n {
                r.expect(
                    format!("T^{n} d_{i} = d_{} T^{}", i + 1, n - 1),
                    c(&t, &L::coface(n, i)),
                    c(&L::coface(n, i + 1), &L::rotation(n - 1)),
                );
            }
            r.expect(
                format!("T^{n} d_{n} = d_0"),
                c(&t, &L::coface(n, n)),
                Ok(L::coface(n, 0)),
            );
        }
        let t1 = L::rotation(n + 1);
        for i in 0..n {
            r.expect(
                format!("T^{n} s_{i} = s_{} T^{}", i + 1, n + 1),
                c(&t, &L::codegeneracy(n, i)),
                c(&L::codegeneracy(n, i + 1), &t1),
            );
        }
        r.expect(
            format!("T^{n} s_{n} = s_0 (T^{})^2", n + 1),
            c(&t, &L::codegeneracy(n, n)),
            c(&L::codegeneracy(n, 0), &t1).and_then(|x| c(&x, &t1)),
        );
        let extra = L::codegeneracy(n, n + 1);
        r.expect(
            format!("s_{} = s_0 T^{}", n + 1, n + 1),
            Ok(extra.clone()),
            c(&L::codegeneracy(n, 0), &t1),
        );
        r.expect(
            format!("s_{} d_0 = T^{n}", n + 1),
            c(&extra, &L::coface(n + 1, 0)),
            Ok(t.clone()),
        );
        for i in 1..=n {
            r.expect(
                format!("s_{} d_{i} = d_{i} s_{n}", n + 1),
                c(&extra, &L::coface(n + 1, i)),
                c(&L::coface(n, i), &L::codegeneracy(n - 1, n)),
            );
        }
        r.expect(
            format!("s_{} d_{} = id", n + 1, n + 1),
            c(&extra, &L::coface(n + 1, n + 1)),
            Ok(L::identity(n)),
        );
        for i in 0..=n + 1 {
            r.expect(
                format!("s_{} s_{i} = s_{i} s_{}", n + 1, n + 2),
                c(&extra, &L::codegeneracy(n + 1, i)),
                c(&L::codegeneracy(n, i), &L::codegeneracy(n + 1, n + 2)),
            );
        }
        // cosimplicial identities
        if n >= 2 {
            for j in 0..=n {
                for i in 0..j {
                    r.expect(
                        format!("d_{j} d_{i} = d_{i} d_{} into [{n}]", j - 1),
                        c(&L::coface(n, j), &L::coface(n - 1, i)),
                        c(&L::coface(n, i), &L::coface(n - 1, j - 1)),
                    );
                }
            }
        }
        for j in 0..=n {
            for i in 0..=j {
                r.expect(
                    format!("s_{j} s_{i} = s_{i} s_{} onto [{n}]", j + 1),
                    c(&L::codegeneracy(n, j), &L::codegeneracy(n + 1, i)),
                    c(&L::codegeneracy(n, i), &L::codegeneracy(n + 1, j + 1)),
                );
            }
        }
        if n >= 1 {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = c(&L::codegeneracy(n, j), &L::coface(n + 1, i));
                    let rhs = if i < j {
                        c(&L::coface(n, i), &L::codegeneracy(n - 1, j - 1))
                    } else if i == j || i == j + 1 {
                        Ok(L::identity(n))
                    } else {
                        c(&L::coface(n, i - 1), &L::codegeneracy(n - 1, j))
                    };
                    r.expect(format!("s_{j} d_{i} on [{n}]"), lhs, rhs);
                }
            }
        }
    }
    r
}

/// A truncated simplicial set with the rotations `τ^n: X_n → X_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParacyclicData {
    pub base: TruncSimplicialSet,
    pub tau: Vec<FinMap>,
}

fn power(f: &FinMap, k: usize) -> FinMap {
    (0..k).fold(FinMap::identity(f.dom()), |acc, _| {
        acc.then(f).expect("endomap")
    })
}

impl ParacyclicData {
    pub fn new(base: TruncSimplicialSet, tau: Vec<FinMap>) -> Result<Self> {
        if tau.len() != base.top() + 1 {
            return Err(structural("one rotation per level is required"));
        }
        for (n, t) in tau.iter().enumerate() {
            if t.dom() != base.size(n) || t.cod() != base.size(n) {
                return Err(structural(format!(
                    "tau^{n} is not an endomap of level {n}"
                )));
            }
        }
        Ok(ParacyclicData { base, tau })
    }

    pub fn top(&self) -> usize {
        self.base.top()
    }

    /// `τ^n` raised to an integer power.
    pub fn tau_power(&self, n: usize, k: i64) -> Result<FinMap> {
        let t = if k >= 0 {
            self.tau[n].clone()
        } else {
            self.tau[n]
                .inverse()
                .ok_or_else(|| structural(format!("tau^{n} is not invertible")))?
        };
        Ok(power(&t, k.unsigned_abs() as usize))
    }

    /// `s_{n+1}^n = τ^{n+1} s_0^n` for `n < N`.
    pub fn extra_degeneracy(&self, n: usize) -> FinMap {
        self.base
            .s(n, 0)
            .then(&self.tau[n + 1])
            .expect("levels match")
    }

    /// `s_i^n` for `i ≤ n + 1`, including the extra degeneracy.
    fn degeneracy(&self, n: usize, i: usize) -> FinMap {
        if i == n + 1 {
            self.extra_degeneracy(n)
        } else {
            self.base.s(n, i).clone()
        }
    }

    /// `X(f): X_n → X_m`.
    pub fn evaluate(&self, f: &LambdaMor) -> Result<FinMap> {
        let top = self.top();
        if f.m > top || f.n > top {
            return Err(Error::Truncation {
                needed: f.m.max(f.n),
                top,
            });
        }
        let (g, a) = f.factorize();
        self.base
            .evaluate_delta(&g)?
            .then(&self.tau_power(f.m, -a)?)
    }
}

/// Every violated paracyclic relation or non-bijective rotation.
pub fn check_paracyclic(p: &ParacyclicData) -> Vec<Violation> {
    let x = &p.base;
    let top = x.top();
    let mut out = Vec::new();
    let name = |s: &str, n: usize| format!("{s}^{n}");
    for n in 0..=top {
        let t = &p.tau[n];
        if !t.is_bijective() {
            let mut seen = vec![None; t.cod()];
            let element = (0..t.dom())
                .find(|&e| seen[t.apply(e)].replace(e).is_some())
                .unwrap_or(0);
            out.push(Violation {
                relation: "tau is bijective".into(),
                level: n,
                element,
                lhs: Some(t.apply(element)),
                rhs: None,
                maps: vec![name("tau", n)],
            });
        }
    }
    let cmp =
        |out: &mut Vec<Violation>,
         rel: String,
         n: usize,
         l: FinMap,
         r: FinMap,
         maps: Vec<String>| { compare(out, rel, n, l.table(), r.table(), maps) };
    for n in 1..=top {
        let t = &p.tau[n];
        for i in 0..n {
            cmp(
                &mut out,
                format!("d_{i} tau = tau d_{}", i + 1),
                n,
                t.then(x.d(n, i)).unwrap(),
                x.d(n, i + 1).then(&p.tau[n - 1]).unwrap(),
                vec![
                    name("tau", n),
                    name("tau", n - 1),
                    format!("d{i}^{n}"),
                    format!("d{}^{n}", i + 1),
                ],
            );
        }
        cmp(
            &mut out,
            format!("d_{n} tau = d_0"),
            n,
            t.then(x.d(n, n)).unwrap(),
            x.d(n, 0).clone(),
            vec![name("tau", n), format!("d{n}^{n}"), format!("d0^{n}")],
        );
    }
    for n in 0..top {
        let (t, t1) = (&p.tau[n], &p.tau[n + 1]);
        for i in 0..n {
            cmp(
                &mut out,
                format!("s_{i} tau = tau s_{}", i + 1),
                n,
                t.then(x.s(n, i)).unwrap(),
                x.s(n, i + 1).then(t1).unwrap(),
                vec![
                    name("tau", n),
                    name("tau", n + 1),
                    format!("s{i}^{n}"),
                    format!("s{}^{n}", i + 1),
                ],
            );
        }
        cmp(
            &mut out,
            format!("s_{n} tau = tau^2 s_0"),
            n,
            t.then(x.s(n, n)).unwrap(),
            x.s(n, 0).then(t1).unwrap().then(t1).unwrap(),
            vec![
                name("tau", n),
                name("tau", n + 1),
                format!("s{n}^{n}"),
                format!("s0^{n}"),
            ],
        );
        let extra = p.extra_degeneracy(n);
        let extra_maps = || vec![name("tau", n + 1), format!("s0^{n}")];
        cmp(
            &mut out,
            format!("d_0 s_{} = tau", n + 1),
            n,
            extra.then(x.d(n + 1, 0)).unwrap(),
            t.clone(),
            [extra_maps(), vec![name("tau", n), format!("d0^{}", n + 1)]].concat(),
        );
        for i in 1..=n {
            cmp(
                &mut out,
                format!("d_{i} s_{} = s_{n} d_{i}", n + 1),
                n,
                extra.then(x.d(n + 1, i)).unwrap(),
                x.d(n, i).then(&p.extra_degeneracy(n - 1)).unwrap(),
                [
                    extra_maps(),
                    vec![
                        name("tau", n),
                        format!("d{i}^{}", n + 1),
                        format!("d{i}^{n}"),
                    ],
                ]
                .concat(),
            );
        }
        cmp(
            &mut out,
            format!("d_{} s_{} = id", n + 1, n + 1),
            n,
            extra.then(x.d(n + 1, n + 1)).unwrap(),
            FinMap::identity(x.size(n)),
            [extra_maps(), vec![format!("d{}^{}", n + 1, n + 1)]].concat(),
        );
    }
    // degeneracy identities with the extra degeneracies included
    for n in 0..top.saturating_sub(1) {
        let j = n + 1;
        {
            for i in 0..=j {
                cmp(
                    &mut out,
                    format!("s_{i} s_{j} = s_{} s_{i}", j + 1),
                    n,
                    p.degeneracy(n, j).then(&p.degeneracy(n + 1, i)).unwrap(),
                    p.degeneracy(n, i)
                        .then(&p.degeneracy(n + 1, j + 1))
                        .unwrap(),
                    vec![
                        name("tau", n + 1),
                        name("tau", n + 2),
                        format!("s{i}^{n}"),
                        format!("s{i}^{}", n + 1),
                    ],
                );
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cyclicity {
    Cyclic,
    ParacyclicOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicReport {
    pub verdict: Cyclicity,
    /// `(τ^1)^2 = id` and `(τ^2)^3 = id`.
    pub two_conditions: bool,
    /// `(τ^n)^{n+1} = id` for every `n ≤ N`.
    pub all_levels: bool,
    pub first_failing_level: Option<usize>,
    /// The two criteria disagree, which cannot happen over a 2-Segal base.
    pub disagreement: bool,
    pub checked_up_to: usize,
}

pub fn check_cyclic(p: &ParacyclicData) -> CyclicReport {
    let holds = |n: usize| power(&p.tau[n], n + 1) == FinMap::identity(p.base.size(n));
    let first_failing_level = (0..=p.top()).find(|&n| !holds(n));
    let all_levels = first_failing_level.is_none();
    let two_conditions = holds(1) && holds(2);
    CyclicReport {
        verdict: if all_levels {
            Cyclicity::Cyclic
        } else {
            Cyclicity::ParacyclicOnly
        },
        two_conditions,
        all_levels,
        first_failing_level,
        disagreement: all_levels != two_conditions,
        checked_up_to: p.top(),
    }
}

/// A counit `ε: X_1 → {•}` with the maps it determines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounitData {
    /// `X_1 ← X_0 → {•}`.
    pub counit: Span,
    pub s10: FinMap,
    pub tau1: FinMap,
    pub mult: Span,
    /// `ε ∘ μ`.
    pub alpha: Span,
}

/// The counit `X_1 ← X_0 → {•}` along `s_1^0`.
fn counit_span(s10: &FinMap) -> Span {
    Span::new(s10.clone(), FinMap::constant(s10.dom(), 1, 0)).expect("shared apex")
}

/// `X_1 × X_1 ← X_1 → {•}` with left leg `(id, τ^1)`.
fn graph_pairing(tau1: &FinMap) -> Span {
    let b = tau1.dom();
    Span::new(
        FinMap::from_fn(b, b * b, |y| y * b + tau1.apply(y)),
        FinMap::constant(b, 1, 0),
    )
    .expect("shared apex")
}

pub fn frobenius_from_paracyclic(p: &ParacyclicData) -> Result<CounitData> {
    let x = &p.base;
    TwoSegal::new(x)?;
    if let Some(v) = check_paracyclic(p).first() {
        return Err(Error::Invalid(format!("not paracyclic: {v}")));
    }
    let s10 = p.extra_degeneracy(0);
    let s21 = p.extra_degeneracy(1);
    let square = pullback(x.d(2, 1), &s10)?;
    let mut hit = vec![false; square.apex.size];
    for y in 0..x.size(1) {
        let k = square
            .index_of(s21.apply(y), x.face(1, 1, y))
            .ok_or_else(|| {
                Error::NotFrobenius(format!("s_2 of edge {y} misses the paraunital square"))
            })?;
        hit[k] = true;
    }
    if hit.iter().any(|h| !h) || square.apex.size != x.size(1) {
        return Err(Error::NotFrobenius(
            "the paraunital square is not a pullback".into(),
        ));
    }
    let mult = mult_span(x);
    let counit = counit_span(&s10);
    let alpha = compose_spans(&mult, &counit)?;
    let tau1 = p.tau[1].clone();
    spans_isomorphic(&alpha, &graph_pairing(&tau1))
        .ok_or_else(|| Error::NotFrobenius("the pairing is not the graph of tau^1".into()))?;
    Ok(CounitData {
        counit,
        s10,
        tau1,
        mult,
        alpha,
    })
}

/// Rebuilds the rotations from a counit, level by level, without leaving
/// the truncation: `τ^n ψ` is read off the polygon of `ψ` with a degenerate
/// triangle attached along its outer edge.
pub fn paracyclic_from_frobenius(x: &TruncSimplicialSet, eps: &Span) -> Result<ParacyclicData> {
    let seg = TwoSegal::new(x)?;
    let b = x.size(1);
    if eps.src != b || eps.tgt != 1 {
        return Err(Error::Invalid("the counit must be a span X_1 → {•}".into()));
    }
    let mult = mult_span(x);
    let (alpha, pb) = compose_with_pullback(&mult, eps)?;
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); b];
    for e in 0..alpha.apex() {
        over[alpha.left.apply(e) / b].push(e);
    }
    if let Some((y, f)) = over.iter().enumerate().find(|(_, f)| f.len() != 1) {
        return Err(Error::NotFrobenius(format!(
            "the pairing has {} elements over first edge {y}",
            f.len()
        )));
    }
    let tau1 = FinMap::from_fn(b, b, |y| alpha.left.apply(over[y][0]) % b);
    let tau1_inv = tau1.inverse().ok_or_else(|| {
        Error::NotFrobenius("the pairing's second coordinate is not a bijection".into())
    })?;
    let s10 = x.s(0, 0).then(&tau1)?;
    spans_isomorphic(eps, &counit_span(&s10))
        .ok_or_else(|| Error::NotFrobenius("the counit is not the span along s_1^0".into()))?;

    let s21 = FinMap::from_fn(b, x.size(2), |y| pb.pair(over[y][0]).0);
    let check = |name: &str, l: FinMap, r: &FinMap| -> Result<()> {
        match first_mismatch(l.table(), r.table()) {
            None => Ok(()),
            Some((e, _, _)) => Err(Error::NotFrobenius(format!("{name} fails on edge {e}"))),
        }
    };
    check("d_0 s_2 = tau", s21.then(x.d(2, 0))?, &tau1)?;
    check(
        "d_1 s_2 = s_1 d_1",
        s21.then(x.d(2, 1))?,
        &x.d(1, 1).then(&s10)?,
    )?;
    check("d_2 s_2 = id", s21.then(x.d(2, 2))?, &FinMap::identity(b))?;

    let tau0 = s10.then(x.d(1, 0))?;
    let tau0_inv = x.s(0, 0).then(&tau1_inv)?.then(x.d(1, 1))?;
    if tau0.then(&tau0_inv)? != FinMap::identity(x.size(0)) {
        return Err(Error::NotFrobenius(
            "d_1 tau^{-1} s_0 does not invert tau^0".into(),
        ));
    }
    let mut tau = vec![tau0, tau1.clone()];
    let top = x.top();
    let mut extended: Vec<Option<FinMap>> = vec![None; top + 1];
    for n in 2..=top {
        let fan = Triangulation::fan(n, 0);
        let mut table = Vec::with_capacity(x.size(n));
        let mut lifted = Vec::with_capacity(x.size(n));
        for psi in 0..x.size(n) {
            let poly = seg.polygon(&fan, psi);
            let out = poly.edge_value(&seg, 0, n)?;
            let mut big = poly.insert_vertex(n + 1, s21.apply(out));
            if n < top {
                lifted.push(big.to_simplex(&seg)?);
            }
            big.retriangulate(&seg, &ear_triangulation(n + 1, 0))?;
            table.push(big.remove_vertex(0)?.to_simplex(&seg)?);
        }
        let t = FinMap::new(x.size(n), table)?;
        for phi in 0..x.size(n) {
            let poly = seg.polygon(&fan, phi);
            let out = poly.edge_value(&seg, 0, n)?;
            let mut big = poly.insert_vertex(0, s21.apply(tau1_inv.apply(out)));
            big.retriangulate(&seg, &ear_triangulation(n + 1, n + 1))?;
            let back = big.remove_vertex(n + 1)?.to_simplex(&seg)?;
            if t.apply(back) != phi {
                return Err(Error::NotFrobenius(format!(
                    "tau^{n} has no preimage reconstruction for {phi}"
                )));
            }
        }
        if n < top {
            extended[n] = Some(FinMap::new(x.size(n + 1), lifted)?);
        }
        tau.push(t);
    }
    let data = ParacyclicData::new(x.clone(), tau)?;
    for (n, s) in extended.iter().enumerate() {
        if let Some(s) = s
            && *s != data.extra_degeneracy(n)
        {
            return Err(structural(format!(
                "attached degeneracy disagrees with tau s_0 at level {n}"
            )));
        }
    }
    Ok(data)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrobeniusWitnesses {
    /// `{•} ← X_1 → X_1 × X_1`, `y ↦ (τy, y)`.
    pub beta: Span,
    /// `(id ⊗ α)(β ⊗ id) ⇒ id`.
    pub z: SpanCell,
    /// `(α ⊗ id)(id ⊗ β) ⇒ id`.
    pub nn: SpanCell,
    pub first_snake: bool,
    pub second_snake: bool,
}

pub fn copairing(tau1: &FinMap) -> Span {
    let b = tau1.dom();
    Span::new(
        FinMap::constant(b, 1, 0),
        FinMap::from_fn(b, b * b, |y| tau1.apply(y) * b + y),
    )
    .expect("shared apex")
}

fn pairing_node(label: &str, alpha: &Span) -> Block {
    Block::node(label, alpha, 2, 0)
}

fn copairing_node(label: &str, beta: &Span) -> Block {
    Block::node(label, beta, 0, 2)
}

fn mv<'a>(
    layer: usize,
    strand: usize,
    box_source: &'a Composite,
    box_target: &'a Composite,
    cell: &'a FinMap,
    rename: &[(&str, &str)],
) -> Move<'a> {
    Move {
        layer,
        strand,
        box_source,
        box_target,
        cell,
        rename: rename
            .iter()
            .map(|(f, t)| (f.to_string(), t.to_string()))
            .collect(),
    }
}

fn composite(base: usize, inputs: usize, layers: Vec<Vec<Block>>) -> Result<Composite> {
    Diagram::new(base, inputs, layers).composite()
}

/// The cell from a one-strand box to the identity, if the box's outputs
/// equal its inputs.
fn collapse(source: &Composite, base: usize) -> Result<SpanCell> {
    let map = FinMap::from_fn(source.apex(), base, |e| source.source_value(e));
    SpanCell::new(source.span.clone(), Span::identity(base), map)
        .map_err(|e| Error::NotFrobenius(format!("snake does not straighten: {e}")))
}

/// The cells `z` and `n` for a pairing and copairing, when they exist and
/// are invertible.
pub fn snake_cells(base: usize, alpha: &Span, beta: &Span) -> Result<(SpanCell, SpanCell)> {
    let w = || Block::Wire;
    let zbox = composite(
        base,
        1,
        vec![
            vec![copairing_node("b", beta), w()],
            vec![w(), pairing_node("a", alpha)],
        ],
    )?;
    let nbox = composite(
        base,
        1,
        vec![
            vec![w(), copairing_node("b", beta)],
            vec![pairing_node("a", alpha), w()],
        ],
    )?;
    let (z, n) = (collapse(&zbox, base)?, collapse(&nbox, base)?);
    if !z.is_invertible() || !n.is_invertible() {
        return Err(Error::NotFrobenius("snake cells are not invertible".into()));
    }
    Ok((z, n))
}

pub fn frobenius_witnesses(c: &CounitData) -> Result<FrobeniusWitnesses> {
    let base = c.tau1.dom();
    let beta = copairing(&c.tau1);
    let alpha = &c.alpha;
    let (z, nn) = snake_cells(base, alpha, &beta)?;
    let w = || Block::Wire;
    let id = composite(base, 1, vec![])?;
    let a = |l: &str| pairing_node(l, alpha);
    let bt = |l: &str| copairing_node(l, &beta);
    let first_snake = {
        let start = composite(
            base,
            2,
            vec![
                vec![w(), bt("b"), w()],
                vec![a("p1"), w(), w()],
                vec![a("p2")],
            ],
        )?;
        let slid = composite(
            base,
            2,
            vec![
                vec![w(), bt("b"), w()],
                vec![w(), w(), a("p2")],
                vec![a("p1")],
            ],
        )?;
        let end = composite(base, 2, vec![vec![w(), w()], vec![a("out")]])?;
        let nbox = composite(base, 1, vec![vec![w(), bt("b")], vec![a("p1"), w()]])?;
        let zbox = composite(base, 1, vec![vec![bt("b"), w()], vec![w(), a("p2")]])?;
        let ts = composite(base, 4, vec![vec![a("p1"), w(), w()], vec![a("p2")]])?;
        let tt = composite(base, 4, vec![vec![w(), w(), a("p2")], vec![a("p1")]])?;
        let slide = tensorator_cell(alpha, alpha)?;
        if slide.source != ts.span || slide.target != tt.span {
            return Err(structural("tensorator does not match the slide boxes"));
        }
        let lhs = mv(0, 0, &nbox, &id, &nn.map, &[("p2", "out")]).apply(&start, &end, base)?;
        let rhs = vertical_compose(
            &mv(1, 0, &ts, &tt, &slide.map, &[]).apply(&start, &slid, base)?,
            &mv(0, 1, &zbox, &id, &z.map, &[("p1", "out")]).apply(&slid, &end, base)?,
        )?;
        lhs == rhs
    };

    let second_snake = {
        let start = composite(
            base,
            0,
            vec![
                vec![bt("q1")],
                vec![w(), w(), bt("q2")],
                vec![w(), a("a"), w()],
            ],
        )?;
        let slid = composite(
            base,
            0,
            vec![
                vec![bt("q2")],
                vec![bt("q1"), w(), w()],
                vec![w(), a("a"), w()],
            ],
        )?;
        let end = composite(base, 0, vec![vec![bt("out")], vec![w(), w()]])?;
        let nbox = composite(base, 1, vec![vec![w(), bt("q2")], vec![a("a"), w()]])?;
        let zbox = composite(base, 1, vec![vec![bt("q1"), w()], vec![w(), a("a")]])?;
        let ts = composite(base, 0, vec![vec![bt("q1")], vec![w(), w(), bt("q2")]])?;
        let tt = composite(base, 0, vec![vec![bt("q2")], vec![bt("q1"), w(), w()]])?;
        let slide = tensorator_cell(&beta, &beta)?;
        if slide.source != ts.span || slide.target != tt.span {
            return Err(structural("tensorator does not match the slide boxes"));
        }
        let lhs = mv(1, 1, &nbox, &id, &nn.map, &[("q1", "out")]).apply(&start, &end, base)?;
        let rhs = vertical_compose(
            &mv(0, 0, &ts, &tt, &slide.map, &[]).apply(&start, &slid, base)?,
            &mv(1, 0, &zbox, &id, &z.map, &[("q2", "out")]).apply(&slid, &end, base)?,
        )?;
        lhs == rhs
    };

    Ok(FrobeniusWitnesses {
        beta,
        z,
        nn,
        first_snake,
        second_snake,
    })
}

/// Per-level rotation tables for the JSON document.
pub fn tau_tables(p: &ParacyclicData) -> Vec<Vec<usize>> {
    p.tau.iter().map(|t| t.table().to_vec()).collect()
}

/// Rotations from per-level tables.
pub fn from_tau_tables(base: TruncSimplicialSet, tables: &[Vec<usize>]) -> Result<ParacyclicData> {
    let tau = tables
        .iter()
        .enumerate()
        .map(|(n, t)| {
            let size = *base.sizes().get(n).ok_or(Error::Truncation {
                needed: n,
                top: base.top(),
            })?;
            FinMap::new(size, t.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    ParacyclicData::new(base, tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{
        Functor, SmallCategory, cyclic_group_nerve, groupoid_cyclic, interval_cyclic, point_cyclic,
        symmetric_group_3, twisted_cyclic,
    };
    use crate::perm::next_permutation;
    use proptest::prelude::*;

    fn z(order: usize) -> SmallCategory {
        SmallCategory::cyclic_group(order).unwrap()
    }

    fn standard(g: &SmallCategory, top: usize) -> ParacyclicData {
        let ids: Vec<usize> = (0..g.objects.size).map(|x| g.identity.apply(x)).collect();
        groupoid_cyclic(g, &ids, top).unwrap()
    }

    fn catalog() -> Vec<(&'static str, ParacyclicData)> {
        let neg = Functor {
            on_objects: vec![0],
            on_morphisms: vec![0, 2, 1],
        };
        let pair = SmallCategory::pair_groupoid(2).unwrap();
        vec![
            ("point", point_cyclic(3).unwrap()),
            ("z2", standard(&z(2), 4)),
            ("z3 shifted", groupoid_cyclic(&z(3), &[1], 3).unwrap()),
            ("pair groupoid", standard(&pair, 3)),
            (
                "pair groupoid swap",
                groupoid_cyclic(&pair, &[1, 2], 3).unwrap(),
            ),
            ("interval 2", interval_cyclic(2, 4).unwrap()),
            ("interval 3", interval_cyclic(3, 3).unwrap()),
            ("twisted z3", twisted_cyclic(&z(3), &neg, 3).unwrap()),
            (
                "inertia z2",
                twisted_cyclic(&z(2), &Functor::identity(&z(2)), 3).unwrap(),
            ),
        ]
    }

    fn arb_lambda() -> impl Strategy<Value = LambdaMor> {
        (0usize..5, 0usize..5, -8i64..8).prop_flat_map(|(m, n, start)| {
            proptest::collection::vec(0i64..3, m).prop_filter_map("extension", move |steps| {
                let mut values = vec![start];
                for s in steps {
                    values.push(values.last().unwrap() + s);
                }
                LambdaMor::new(m, n, values).ok()
            })
        })
    }

    fn arb_into(m: usize, n: usize) -> impl Strategy<Value = LambdaMor> {
        (-6i64..6, proptest::collection::vec(0i64..3, m)).prop_filter_map(
            "extension",
            move |(start, steps)| {
                let mut values = vec![start];
                for s in steps {
                    values.push(values.last().unwrap() + s);
                }
                LambdaMor::new(m, n, values).ok()
            },
        )
    }

    #[test]
    fn rotation_inverse_and_extra_codegeneracy() {
        let t = LambdaMor::rotation(1);
        assert_eq!(
            lambda_compose(&LambdaMor::shift(1, -1), &t).unwrap(),
            LambdaMor::identity(1)
        );
        let lhs = lambda_compose(&LambdaMor::coface(2, 0), &LambdaMor::codegeneracy(1, 2)).unwrap();
        assert_eq!(lhs, t);
        for n in 0..5 {
            let (g, a) = LambdaMor::codegeneracy(n, n + 1).factorize();
            assert_eq!((g, a), (DeltaMor::codegeneracy(n, 0), -1));
        }
    }

    #[test]
    fn delta_maps_factor_trivially() {
        for n in 1..5 {
            for i in 0..=n {
                let f = DeltaMor::coface(n, i);
                assert_eq!(LambdaMor::from_delta(&f).factorize(), (f, 0));
            }
        }
    }

    #[test]
    fn lambda_relations_hold() {
        let r = check_lambda_relations(6);
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.checked > 300);
    }

    #[test]
    fn catalog_is_paracyclic() {
        for (name, p) in catalog() {
            let v = check_paracyclic(&p);
            assert!(v.is_empty(), "{name}: {:?}", v.first());
        }
    }

    #[test]
    fn mutated_rotation_is_named() {
        let mut p = standard(&z(2), 3);
        let t = &p.tau[2];
        let swapped = FinMap::from_fn(4, 4, |e| {
            t.apply(if e == 1 {
                2
            } else if e == 2 {
                1
            } else {
                e
            })
        });
        p.tau[2] = swapped;
        let v = check_paracyclic(&p);
        assert!(!v.is_empty());
        assert!(v.iter().all(|v| v.maps.contains(&"tau^2".to_string())));
    }

    #[test]
    fn evaluate_matches_generators() {
        let p = standard(&z(3), 3);
        assert_eq!(p.evaluate(&LambdaMor::rotation(2)).unwrap(), p.tau[2]);
        for n in 0..3 {
            assert_eq!(
                p.evaluate(&LambdaMor::codegeneracy(n, n + 1)).unwrap(),
                p.extra_degeneracy(n)
            );
        }
        assert!(matches!(
            p.evaluate(&LambdaMor::identity(4)),
            Err(Error::Truncation { needed: 4, top: 3 })
        ));
    }

    proptest! {
        #[test]
        fn factorization_round_trips(f in arb_lambda()) {
            let (g, a) = f.factorize();
            prop_assert!(g.values.iter().all(|&v| v <= f.n));
            prop_assert!(f.extend(a) >= 0 && f.extend(a - 1) < 0);
            let back = lambda_compose(&LambdaMor::shift(f.m, -a), &LambdaMor::from_delta(&g)).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn composition_associates(
            (f, g, h) in (0usize..4, 0usize..4, 0usize..4, 0usize..4)
                .prop_flat_map(|(a, b, c, d)| (arb_into(a, b), arb_into(b, c), arb_into(c, d)))
        ) {
            let l = lambda_compose(&lambda_compose(&f, &g).unwrap(), &h).unwrap();
            let r = lambda_compose(&f, &lambda_compose(&g, &h).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn evaluation_is_functorial(
            (f, g) in (0usize..4, 0usize..4, 0usize..4)
                .prop_flat_map(|(a, b, c)| (arb_into(a, b), arb_into(b, c)))
        ) {
            for p in [interval_cyclic(2, 3).unwrap(), groupoid_cyclic(&z(3), &[1], 3).unwrap()] {
                let whole = p.evaluate(&lambda_compose(&f, &g).unwrap()).unwrap();
                let parts = p.evaluate(&g).unwrap().then(&p.evaluate(&f).unwrap()).unwrap();
                prop_assert_eq!(whole, parts);
            }
        }
    }

    #[test]
    fn interval_counit_is_reflection() {
        let c = frobenius_from_paracyclic(&interval_cyclic(2, 3).unwrap()).unwrap();
        assert_eq!(c.counit.apex(), 1);
        assert_eq!(c.s10.table(), &[2]);
        assert_eq!(c.tau1.table(), &[2, 1, 0]);
    }

    #[test]
    fn group_counit_gives_inverses() {
        let p = standard(&z(3), 3);
        let c = frobenius_from_paracyclic(&p).unwrap();
        assert_eq!(c.tau1.table(), &[0, 2, 1]);
    }

    #[test]
    fn round_trip_recovers_rotations() {
        for (name, p) in catalog() {
            let c = frobenius_from_paracyclic(&p).unwrap();
            let q = paracyclic_from_frobenius(&p.base, &c.counit).unwrap();
            assert_eq!(q.tau, p.tau, "{name}");
            let c2 = frobenius_from_paracyclic(&q).unwrap();
            assert_eq!(c2.s10, c.s10, "{name}");
        }
    }

    #[test]
    fn unit_transpose_on_z2() {
        let x = cyclic_group_nerve(2, 3).unwrap();
        let eps = Span::new(x.s(0, 0).clone(), FinMap::constant(1, 1, 0)).unwrap();
        let p = paracyclic_from_frobenius(&x, &eps).unwrap();
        assert_eq!(p.tau[1].table(), &[0, 1]);
        assert!(check_paracyclic(&p).is_empty());
        assert_eq!(check_cyclic(&p).verdict, Cyclicity::Cyclic);
    }

    #[test]
    fn doubled_counit_is_not_frobenius() {
        let x = cyclic_group_nerve(1, 3).unwrap();
        let eps = Span::new(FinMap::constant(2, 1, 0), FinMap::constant(2, 1, 0)).unwrap();
        let err = paracyclic_from_frobenius(&x, &eps).unwrap_err();
        assert!(
            matches!(err, Error::NotFrobenius(ref m) if m.contains("2 elements")),
            "{err}"
        );
    }

    /// Copairings of the form `y ↦ (π y, y)` admitting invertible snake cells.
    fn graph_copairings(c: &CounitData) -> Vec<Vec<usize>> {
        let b = c.tau1.dom();
        let mut perm: Vec<usize> = (0..b).collect();
        let mut found = Vec::new();
        loop {
            let pi = FinMap::new(b, perm.clone()).unwrap();
            if snake_cells(b, &c.alpha, &copairing(&pi)).is_ok() {
                found.push(perm.clone());
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        found
    }

    #[test]
    fn witnesses_satisfy_snakes() {
        for (name, p) in [
            ("point", point_cyclic(3).unwrap()),
            ("z2", standard(&z(2), 3)),
            ("interval 2", interval_cyclic(2, 3).unwrap()),
        ] {
            let c = frobenius_from_paracyclic(&p).unwrap();
            let w = frobenius_witnesses(&c).unwrap();
            assert!(w.first_snake && w.second_snake, "{name}");
            assert_eq!(
                graph_copairings(&c),
                vec![c.tau1.table().to_vec()],
                "{name}"
            );
        }
        let c = frobenius_from_paracyclic(&point_cyclic(3).unwrap()).unwrap();
        let w = frobenius_witnesses(&c).unwrap();
        assert!(w.z.is_identity() && w.nn.is_identity());
    }

    #[test]
    fn cyclicity_verdicts() {
        assert_eq!(check_cyclic(&standard(&z(3), 3)).verdict, Cyclicity::Cyclic);
        assert_eq!(
            check_cyclic(&groupoid_cyclic(&z(3), &[1], 3).unwrap()).verdict,
            Cyclicity::Cyclic
        );
        let neg = Functor {
            on_objects: vec![0],
            on_morphisms: vec![0, 2, 1],
        };
        let twisted = check_cyclic(&twisted_cyclic(&z(3), &neg, 3).unwrap());
        assert_eq!(twisted.verdict, Cyclicity::ParacyclicOnly);
        assert!(!twisted.two_conditions);
        let s3 = symmetric_group_3().unwrap();
        let rotation = groupoid_cyclic(&s3, &[3], 3).unwrap();
        assert!(check_paracyclic(&rotation).is_empty());
        let r = check_cyclic(&rotation);
        assert_eq!(r.verdict, Cyclicity::ParacyclicOnly);
        assert!(!r.disagreement);
        for (name, p) in catalog() {
            assert!(!check_cyclic(&p).disagreement, "{name}");
        }
    }
}
