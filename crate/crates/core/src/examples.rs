//! Example families: nerves of categories and partial monoids, twisted cyclic
//! nerves and buildings, graph partitions, and the 2-truncated family whose
//! associators fail the pentagon.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finspan::{FinMap, FinSet, decode};
use crate::gammaset::{GammaData, PhiStarMor};
use crate::paracyclic::ParacyclicData;
use crate::simplicial::TruncSimplicialSet;

/// Anything whose composable chains form a nerve: categories, and partial
/// monoids viewed as one-object categories with partial composition.
pub trait Composition {
    fn objects(&self) -> usize;
    fn morphisms(&self) -> usize;
    fn src(&self, f: usize) -> usize;
    fn tgt(&self, f: usize) -> usize;
    fn identity(&self, x: usize) -> usize;
    /// `f` then `g`, if defined.
    fn compose(&self, f: usize, g: usize) -> Option<usize>;
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallCategory {
    pub objects: FinSet,
    pub morphisms: FinSet,
    pub src: FinMap,
    pub tgt: FinMap,
    pub identity: FinMap,
    /// `compose[f][g]` is `f` then `g`, present exactly when `tgt f = src g`.
    pub compose: Vec<Vec<Option<usize>>>,
}

impl Composition for SmallCategory {
    fn objects(&self) -> usize {
        self.objects.size
    }
    fn morphisms(&self) -> usize {
        self.morphisms.size
    }
    fn src(&self, f: usize) -> usize {
        self.src.apply(f)
    }
    fn tgt(&self, f: usize) -> usize {
        self.tgt.apply(f)
    }
    fn identity(&self, x: usize) -> usize {
        self.identity.apply(x)
    }
    fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.compose[f][g]
    }
}

impl SmallCategory {
    pub fn new(
        objects: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        identity: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        let m = src.len();
        let src = FinMap::new(objects, src)?;
        let tgt = FinMap::new(objects, tgt)?;
        let identity = FinMap::new(m, identity)?;
        let table = (0..m)
            .map(|f| {
                (0..m)
                    .map(|g| (tgt.apply(f) == src.apply(g)).then(|| compose(f, g)))
                    .collect()
            })
            .collect();
        let c = SmallCategory {
            objects: FinSet::new(objects),
            morphisms: FinSet::new(m),
            src,
            tgt,
            identity,
            compose: table,
        };
        c.validate()?;
        Ok(c)
    }

    /// Checks identities, typing of composites and associativity on all triples.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Invalid(msg));
        for x in 0..self.objects() {
            let i = self.identity(x);
            if self.src(i) != x || self.tgt(i) != x {
                return bad(format!("identity of object {x} has the wrong ends"));
            }
        }
        for f in 0..self.morphisms() {
            if self.compose(self.identity(self.src(f)), f) != Some(f)
                || self.compose(f, self.identity(self.tgt(f))) != Some(f)
            {
                return bad(format!("identities do not act trivially on morphism {f}"));
            }
            for g in 0..self.morphisms() {
                if let Some(fg) = self.compose(f, g) {
                    if fg >= self.morphisms()
                        || self.src(fg) != self.src(f)
                        || self.tgt(fg) != self.tgt(g)
                    {
                        return bad(format!("composite of {f} and {g} is ill-typed"));
                    }
                    for h in 0..self.morphisms() {
                        if self.tgt(g) == self.src(h) {
                            let l = self.compose(fg, h);
                            let r = self.compose(g, h).and_then(|gh| self.compose(f, gh));
                            if l != r {
                                return bad(format!(
                                    "composition is not associative on ({f},{g},{h})"
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// A group as a one-object category.
    pub fn group(order: usize, mul: impl Fn(usize, usize) -> usize, unit: usize) -> Result<Self> {
        SmallCategory::new(1, vec![0; order], vec![0; order], vec![unit], mul)
    }

    pub fn cyclic_group(order: usize) -> Result<Self> {
        SmallCategory::group(order, |a, b| (a + b) % order, 0)
    }

    /// The groupoid with exactly one morphism `(i, j)` between any two of `k`
    /// objects, indexed `i·k + j`.
    pub fn pair_groupoid(k: usize) -> Result<Self> {
        SmallCategory::new(
            k,
            (0..k * k).map(|f| f / k).collect(),
            (0..k * k).map(|f| f % k).collect(),
            (0..k).map(|x| x * k + x).collect(),
            |f, g| (f / k) * k + g % k,
        )
    }

    /// A finite poset as a category; morphisms are the pairs `a ≤ b` in
    /// lexicographic order.
    pub fn poset(k: usize, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .filter(|&(a, b)| leq(a, b))
            .collect();
        let index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let identity = (0..k)
            .map(|x| {
                index
                    .get(&(x, x))
                    .copied()
                    .ok_or_else(|| Error::Invalid("poset is not reflexive".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let composites: Vec<Vec<usize>> = pairs
            .iter()
            .map(|&(a, b)| {
                pairs
                    .iter()
                    .map(|&(b2, c)| {
                        if b == b2 {
                            index.get(&(a, c)).copied().unwrap_or(usize::MAX)
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        if composites.iter().flatten().any(|&c| c == usize::MAX) {
            return Err(Error::Invalid("poset is not transitive".into()));
        }
        SmallCategory::new(
            k,
            pairs.iter().map(|p| p.0).collect(),
            pairs.iter().map(|p| p.1).collect(),
            identity,
            |f, g| composites[f][g],
        )
    }

    /// The chain `0 < 1 < ... < k-1`.
    pub fn chain(k: usize) -> Result<Self> {
        SmallCategory::poset(k, |a, b| a <= b)
    }

    /// The inverse of an invertible morphism.
    pub fn inverse(&self, f: usize) -> Option<usize> {
        (0..self.morphisms()).find(|&g| self.compose(f, g) == Some(self.identity(self.src(f))))
    }

    pub fn is_groupoid(&self) -> bool {
        (0..self.morphisms()).all(|f| self.inverse(f).is_some())
    }
}

/// A functor between small categories, given on objects and morphisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Functor {
    pub on_objects: Vec<usize>,
    pub on_morphisms: Vec<usize>,
}

impl Functor {
    pub fn identity(c: &SmallCategory) -> Self {
        Functor {
            on_objects: (0..c.objects()).collect(),
            on_morphisms: (0..c.morphisms()).collect(),
        }
    }

    pub fn validate(&self, c: &SmallCategory) -> Result<()> {
        let ok_shape =
            self.on_objects.len() == c.objects() && self.on_morphisms.len() == c.morphisms();
        let ok = ok_shape
            && (0..c.morphisms()).all(|f| {
                let g = self.on_morphisms[f];
                g < c.morphisms()
                    && c.src(g) == self.on_objects[c.src(f)]
                    && c.tgt(g) == self.on_objects[c.tgt(f)]
            })
            && (0..c.objects())
                .all(|x| self.on_morphisms[c.identity(x)] == c.identity(self.on_objects[x]))
            && (0..c.morphisms()).all(|f| {
                (0..c.morphisms()).all(|g| match c.compose(f, g) {
                    Some(fg) => {
                        c.compose(self.on_morphisms[f], self.on_morphisms[g])
                            == Some(self.on_morphisms[fg])
                    }
                    None => true,
                })
            });
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid("not a functor".into()))
        }
    }

    pub fn is_invertible(&self) -> bool {
        let mut o = self.on_objects.clone();
        let mut m = self.on_morphisms.clone();
        o.sort_unstable();
        m.sort_unstable();
        o.iter().enumerate().all(|(i, &v)| i == v) && m.iter().enumerate().all(|(i, &v)| i == v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialMonoid {
    pub elements: FinSet,
    /// `product[a][b]`, absent where undefined.
    pub product: Vec<Vec<Option<usize>>>,
    pub unit: usize,
}

impl Composition for PartialMonoid {
    fn objects(&self) -> usize {
        1
    }
    fn morphisms(&self) -> usize {
        self.elements.size
    }
    fn src(&self, _: usize) -> usize {
        0
    }
    fn tgt(&self, _: usize) -> usize {
        0
    }
    fn identity(&self, _: usize) -> usize {
        self.unit
    }
    fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.product[f][g]
    }
}

impl PartialMonoid {
    pub fn new(
        size: usize,
        product: impl Fn(usize, usize) -> Option<usize>,
        unit: usize,
    ) -> Result<Self> {
        let m = PartialMonoid {
            elements: FinSet::new(size),
            product: (0..size)
                .map(|a| (0..size).map(|b| product(a, b)).collect())
                .collect(),
            unit,
        };
        m.validate()?;
        Ok(m)
    }

    /// Unitality, and associativity in the sense that both bracketings are
    /// undefined or both are defined and equal.
    pub fn validate(&self) -> Result<()> {
        let n = self.elements.size;
        for a in 0..n {
            if self.product[self.unit][a] != Some(a) || self.product[a][self.unit] != Some(a) {
                return Err(Error::Invalid(format!(
                    "unit does not act trivially on {a}"
                )));
            }
            for b in 0..n {
                for c in 0..n {
                    let l = self.product[a][b].and_then(|ab| self.product[ab][c]);
                    let r = self.product[b][c].and_then(|bc| self.product[a][bc]);
                    if l != r {
                        return Err(Error::Invalid(format!(
                            "partial product not associative on ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.elements.size;
        (0..n).all(|a| (0..n).all(|b| self.product[a][b] == self.product[b][a]))
    }
}

/// `{0, ..., L}` under addition, undefined past `L`.
pub fn interval_monoid(l: usize) -> PartialMonoid {
    PartialMonoid::new(l + 1, |a, b| (a + b <= l).then_some(a + b), 0)
        .expect("interval monoid is valid")
}

/// Tuples at each level with an index, assembled into a simplicial set.
pub(crate) struct TupleLevels {
    pub tuples: Vec<Vec<Vec<usize>>>,
    pub index: Vec<HashMap<Vec<usize>, usize>>,
}

impl TupleLevels {
    pub fn new(tuples: Vec<Vec<Vec<usize>>>) -> Self {
        let index = tuples
            .iter()
            .map(|lv| lv.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
            .collect();
        TupleLevels { tuples, index }
    }

    pub fn lookup(&self, n: usize, t: &[usize]) -> Result<usize> {
        self.index[n]
            .get(t)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("{t:?} is not an element of level {n}")))
    }

    pub fn map_level(
        &self,
        n: usize,
        cod: usize,
        f: impl Fn(&[usize]) -> Vec<usize>,
    ) -> Result<FinMap> {
        let table = self.tuples[n]
            .iter()
            .map(|t| self.lookup(cod, &f(t)))
            .collect::<Result<Vec<_>>>()?;
        FinMap::new(self.tuples[cod].len(), table)
    }

    pub fn assemble(
        &self,
        face: impl Fn(usize, usize, &[usize]) -> Vec<usize>,
        degen: impl Fn(usize, usize, &[usize]) -> Vec<usize>,
    ) -> Result<TruncSimplicialSet> {
        let top = self.tuples.len() - 1;
        let mut faces = vec![Vec::new()];
        for n in 1..=top {
            faces.push(
                (0..=n)
                    .map(|i| self.map_level(n, n - 1, |t| face(n, i, t)))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let mut degens = Vec::new();
        for n in 0..top {
            degens.push(
                (0..=n)
                    .map(|i| self.map_level(n, n + 1, |t| degen(n, i, t)))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let levels = self.tuples.iter().map(|lv| FinSet::new(lv.len())).collect();
        TruncSimplicialSet::new(levels, faces, degens)
    }
}

/// Chains `(g1, ..., gn)` with every contiguous composite defined, in
/// lexicographic order; level 0 lists the objects.
fn chains<C: Composition>(c: &C, top: usize) -> Vec<Vec<Vec<usize>>> {
    let mut levels = vec![(0..c.objects()).map(|x| vec![x]).collect::<Vec<_>>()];
    let mut prev: Vec<(Vec<usize>, Vec<usize>)> =
        (0..c.morphisms()).map(|f| (vec![f], vec![f])).collect();
    if top >= 1 {
        levels.push(prev.iter().map(|p| p.0.clone()).collect());
    }
    // each chain carries the composites of its suffixes
    for _ in 2..=top {
        let mut next = Vec::new();
        for (chain, suffixes) in &prev {
            let last = *chain.last().unwrap();
            for g in 0..c.morphisms() {
                if c.tgt(last) != c.src(g) {
                    continue;
                }
                let mut new_suffixes = Vec::with_capacity(suffixes.len() + 1);
                let mut ok = true;
                for &s in suffixes {
                    match c.compose(s, g) {
                        Some(sg) => new_suffixes.push(sg),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    new_suffixes.push(g);
                    let mut ch = chain.clone();
                    ch.push(g);
                    next.push((ch, new_suffixes));
                }
            }
        }
        levels.push(next.iter().map(|p| p.0.clone()).collect());
        prev = next;
    }
    levels
}

/// The nerve truncated at `top`: `g1 g2` means `g1` then `g2`; `d0` drops
/// the first arrow, `dn` the last, and inner faces compose neighbours.
pub fn nerve<C: Composition>(c: &C, top: usize) -> Result<TruncSimplicialSet> {
    if top < 2 {
        return Err(Error::Invalid("nerves are built from level 2 up".into()));
    }
    let levels = TupleLevels::new(chains(c, top));
    levels.assemble(
        |n, i, t| {
            if n == 1 {
                return vec![if i == 0 { c.tgt(t[0]) } else { c.src(t[0]) }];
            }
            let mut out = t.to_vec();
            if i == 0 {
                out.remove(0);
            } else if i == n {
                out.pop();
            } else {
                let g = c
                    .compose(t[i - 1], t[i])
                    .expect("chain composites are defined");
                out.splice(i - 1..=i, [g]);
            }
            out
        },
        |n, i, t| {
            if n == 0 {
                return vec![c.identity(t[0])];
            }
            let vertex = if i == 0 { c.src(t[0]) } else { c.tgt(t[i - 1]) };
            let mut out = t.to_vec();
            out.insert(i, c.identity(vertex));
            out
        },
    )
}

pub fn cyclic_group_nerve(order: usize, top: usize) -> Result<TruncSimplicialSet> {
    nerve(&SmallCategory::cyclic_group(order)?, top)
}

pub fn interval_monoid_nerve(l: usize, top: usize) -> Result<TruncSimplicialSet> {
    nerve(&interval_monoid(l), top)
}

/// Composable tuples `(f_n, ..., f_0)`, written with `f_0` last, where
/// `f_k: x_k → x_{k+1}` and `f_n` lands in `F(x_0)`.
pub(crate) fn twisted_levels(c: &SmallCategory, f: &Functor, top: usize) -> TupleLevels {
    let mut levels = Vec::new();
    for n in 0..=top {
        let mut out = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..c.morphisms()).map(|g| vec![g]).collect();
        stack.reverse();
        while let Some(ch) = stack.pop() {
            if ch.len() == n + 1 {
                let first = ch[0];
                if c.tgt(*ch.last().unwrap()) == f.on_objects[c.src(first)] {
                    out.push(ch.iter().rev().copied().collect::<Vec<_>>());
                }
                continue;
            }
            let last = *ch.last().unwrap();
            for g in (0..c.morphisms()).rev() {
                if c.src(g) == c.tgt(last) {
                    let mut next = ch.clone();
                    next.push(g);
                    stack.push(next);
                }
            }
        }
        out.sort();
        levels.push(out);
    }
    TupleLevels::new(levels)
}

/// The twisted cyclic nerve of `c` with respect to the endofunctor `f`.
pub fn twisted_cyclic_nerve(
    c: &SmallCategory,
    f: &Functor,
    top: usize,
) -> Result<TruncSimplicialSet> {
    f.validate(c)?;
    let levels = twisted_levels(c, f, top);
    levels.assemble(
        |n, i, t| {
            // written position of f_k is n - k
            let mut out = t.to_vec();
            if i > 0 {
                let (fi, fim1) = (t[n - i], t[n - i + 1]);
                let g = c.compose(fim1, fi).expect("composable");
                out.splice(n - i..=n - i + 1, [g]);
            } else {
                let (fnn, f0) = (t[0], t[n]);
                let g = c
                    .compose(fnn, f.on_morphisms[f0])
                    .expect("twisted composite is defined");
                out.pop();
                out[0] = g;
            }
            out
        },
        |n, i, t| {
            let x_i = c.src(t[n - i]);
            let mut out = t.to_vec();
            out.insert(n - i + 1, c.identity(x_i));
            out
        },
    )
}

/// The building of a poset with an order-preserving self-map, as the twisted
/// cyclic nerve of its category.
pub fn building(p: &SmallCategory, f: &Functor, top: usize) -> Result<TruncSimplicialSet> {
    twisted_cyclic_nerve(p, f, top)
}

/// A point at every level.
pub fn point(top: usize) -> Result<TruncSimplicialSet> {
    TruncSimplicialSet::build(&vec![1; top + 1], |_, _, _| 0, |_, _, _| 0)
}

/// The point with the identity rotations.
pub fn point_cyclic(top: usize) -> Result<ParacyclicData> {
    ParacyclicData::new(point(top)?, vec![FinMap::identity(1); top + 1])
}

/// The nerve of a groupoid with `τ(g_1, ..., g_n) = (g_2, ..., g_n, (g_1⋯g_n)⁻¹ ω(x_0))`
/// for a bisection `ω` (one arrow out of each object, with bijective
/// targets); `ω = identities` gives the standard cyclic structure.
pub fn groupoid_cyclic(g: &SmallCategory, omega: &[usize], top: usize) -> Result<ParacyclicData> {
    if !g.is_groupoid() {
        return Err(Error::Invalid("not a groupoid".into()));
    }
    let objects = g.objects();
    let mut targets: Vec<usize> = omega.iter().map(|&w| g.tgt(w)).collect();
    targets.sort_unstable();
    if omega.len() != objects
        || (0..objects).any(|x| omega[x] >= g.morphisms() || g.src(omega[x]) != x)
        || targets != (0..objects).collect::<Vec<_>>()
    {
        return Err(Error::Invalid("omega is not a bisection".into()));
    }
    let base = nerve(g, top)?;
    let levels = TupleLevels::new(chains(g, top));
    let mut tau = vec![FinMap::from_fn(objects, objects, |x| g.tgt(omega[x]))];
    for n in 1..=top {
        tau.push(levels.map_level(n, n, |t| {
            let whole = t[1..]
                .iter()
                .fold(t[0], |acc, &h| g.compose(acc, h).expect("chain"));
            let back = g.inverse(whole).expect("groupoid");
            let last = g.compose(back, omega[g.src(t[0])]).expect("composable");
            let mut out = t[1..].to_vec();
            out.push(last);
            out
        })?);
    }
    ParacyclicData::new(base, tau)
}

/// The identity morphisms, the bisection giving the standard cyclic
/// structure.
pub fn identity_bisection(g: &SmallCategory) -> Vec<usize> {
    (0..g.objects()).map(|x| g.identity(x)).collect()
}

/// The nerve of `{0, ..., L}` with `τ(x_1, ..., x_n) = (x_2, ..., x_n, L - Σx)`.
pub fn interval_cyclic(l: usize, top: usize) -> Result<ParacyclicData> {
    let m = interval_monoid(l);
    let base = nerve(&m, top)?;
    let levels = TupleLevels::new(chains(&m, top));
    let mut tau = vec![FinMap::identity(1)];
    for n in 1..=top {
        tau.push(levels.map_level(n, n, |t| {
            let mut out = t[1..].to_vec();
            out.push(l - t.iter().sum::<usize>());
            out
        })?);
    }
    ParacyclicData::new(base, tau)
}

/// The twisted cyclic nerve with `τ(f_n, ..., f_0) = (F(f_0), f_n, ..., f_1)`.
pub fn twisted_cyclic(c: &SmallCategory, f: &Functor, top: usize) -> Result<ParacyclicData> {
    let base = twisted_cyclic_nerve(c, f, top)?;
    let levels = twisted_levels(c, f, top);
    let tau = (0..=top)
        .map(|n| {
            levels.map_level(n, n, |t| {
                let mut out = vec![f.on_morphisms[t[n]]];
                out.extend_from_slice(&t[..n]);
                out
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ParacyclicData::new(base, tau)
}

/// The symmetric group on three letters, as permutations in lexicographic
/// order with `a·b` meaning `a` then `b`.
pub fn symmetric_group_3() -> Result<SmallCategory> {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    SmallCategory::group(6, |a, b| index([0, 1, 2].map(|i| perms[b][perms[a][i]])), 0)
}

/// Transpositions swapping neighbouring entries of composable tuples, for a
/// commutative composition with one object.
pub fn commutative_gamma<C: Composition>(c: &C, top: usize) -> Result<GammaData> {
    if c.objects() != 1 {
        return Err(Error::Invalid("transpositions need a single object".into()));
    }
    let m = c.morphisms();
    if let Some((f, g)) = (0..m)
        .flat_map(|f| (0..m).map(move |g| (f, g)))
        .find(|&(f, g)| c.compose(f, g) != c.compose(g, f))
    {
        return Err(Error::Invalid(format!("{f} and {g} do not commute")));
    }
    let x = nerve(c, top)?;
    let levels = TupleLevels::new(chains(c, top));
    let theta = (0..=top)
        .map(|n| {
            (1..n)
                .map(|i| {
                    levels.map_level(n, n, |t| {
                        let mut t = t.to_vec();
                        t.swap(i - 1, i);
                        t
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GammaData::new(x, theta)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Edges are unordered; loops and repeats are rejected.
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = Vec::new();
        for &(a, b) in &edges {
            if a >= vertices || b >= vertices {
                return Err(Error::Invalid(format!(
                    "edge ({a}, {b}) leaves the vertex set"
                )));
            }
            if a == b {
                return Err(Error::Invalid(format!("loop at vertex {a}")));
            }
            let key = (a.min(b), a.max(b));
            if seen.contains(&key) {
                return Err(Error::Invalid(format!("repeated edge ({a}, {b})")));
            }
            seen.push(key);
        }
        Ok(Graph { vertices, edges })
    }

    pub fn path(k: usize) -> Self {
        Graph {
            vertices: k,
            edges: (1..k).map(|v| (v - 1, v)).collect(),
        }
    }
}

/// Which subgraphs `H ⊆ G` are tracked.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubgraphConvention {
    /// `H` is the full subgraph on its vertices.
    #[default]
    Induced,
    /// `H` carries any subset of the edges between its vertices.
    Arbitrary,
}

/// Elements of level `n` are a block label in `0..=n` per vertex, `0` meaning
/// the vertex is not in `H`, followed under the arbitrary convention by one
/// bit per edge of `G`.
pub struct GraphPartitions {
    pub graph: Graph,
    pub convention: SubgraphConvention,
    levels: TupleLevels,
}

impl GraphPartitions {
    pub fn new(graph: Graph, convention: SubgraphConvention, top: usize) -> Self {
        let v = graph.vertices;
        let tuples = (0..=top)
            .map(|n| {
                let mut out = Vec::new();
                let labelings =
                    (0..(n + 1).pow(v as u32)).map(|code| decode(code, &vec![n + 1; v]));
                for labels in labelings {
                    match convention {
                        SubgraphConvention::Induced => out.push(labels),
                        SubgraphConvention::Arbitrary => {
                            let present: Vec<bool> = graph
                                .edges
                                .iter()
                                .map(|&(a, b)| labels[a] > 0 && labels[b] > 0)
                                .collect();
                            for bits in 0..1usize << graph.edges.len() {
                                let bits: Vec<usize> =
                                    (0..graph.edges.len()).map(|e| bits >> e & 1).collect();
                                if bits.iter().zip(&present).all(|(&b, &p)| b == 0 || p) {
                                    out.push([labels.clone(), bits].concat());
                                }
                            }
                        }
                    }
                }
                out
            })
            .collect();
        GraphPartitions {
            graph,
            convention,
            levels: TupleLevels::new(tuples),
        }
    }

    pub fn top(&self) -> usize {
        self.levels.tuples.len() - 1
    }

    pub fn size(&self, n: usize) -> usize {
        self.levels.tuples[n].len()
    }

    pub fn element(&self, n: usize, e: usize) -> &[usize] {
        &self.levels.tuples[n][e]
    }

    pub fn lookup(&self, n: usize, t: &[usize]) -> Result<usize> {
        self.levels.lookup(n, t)
    }

    fn relabel(&self, f: &PhiStarMor, t: &[usize]) -> Vec<usize> {
        let v = self.graph.vertices;
        let mut out: Vec<usize> = t[..v].iter().map(|&l| f.apply(l)).collect();
        for (e, &(a, b)) in self.graph.edges.iter().enumerate() {
            if let Some(&bit) = t.get(v + e) {
                out.push(if out[a] > 0 && out[b] > 0 { bit } else { 0 });
            }
        }
        out
    }

    /// `f_*`, computed from the block formula.
    pub fn push(&self, f: &PhiStarMor) -> Result<FinMap> {
        if f.n > self.top() || f.m > self.top() {
            return Err(Error::Truncation {
                needed: f.n.max(f.m),
                top: self.top(),
            });
        }
        self.levels.map_level(f.n, f.m, |t| self.relabel(f, t))
    }

    pub fn simplicial(&self) -> Result<TruncSimplicialSet> {
        self.levels.assemble(
            |n, i, t| self.relabel(&PhiStarMor::face(n, i), t),
            |n, i, t| self.relabel(&PhiStarMor::degeneracy(n, i), t),
        )
    }

    pub fn gamma(&self) -> Result<GammaData> {
        let theta = (0..=self.top())
            .map(|n| {
                (1..n)
                    .map(|i| self.push(&PhiStarMor::transposition(n, i)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GammaData::new(self.simplicial()?, theta)
    }
}

pub fn graph_partition_gamma(
    g: &Graph,
    convention: SubgraphConvention,
    top: usize,
) -> Result<GammaData> {
    GraphPartitions::new(g.clone(), convention, top).gamma()
}

/// Extends a 2-truncated simplicial set to level 3 by every 4-tuple of
/// 2-simplices whose faces match as the faces of a 3-simplex do.
pub fn coskeleton_3(x: &TruncSimplicialSet) -> Result<TruncSimplicialSet> {
    if x.top() != 2 {
        return Err(Error::Invalid("expects levels 0..=2".into()));
    }
    let m = x.size(2);
    let mut simplices = Vec::new();
    let mut index = HashMap::new();
    for code in 0..m.pow(4) {
        let t = decode(code, &[m; 4]);
        let matches = (0..4).all(|j| (0..j).all(|i| x.face(2, i, t[j]) == x.face(2, j - 1, t[i])));
        if matches {
            index.insert(t.clone(), simplices.len());
            simplices.push(t);
        }
    }
    let lookup = |t: &Vec<usize>| {
        index
            .get(t)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("degenerate simplex {t:?} has mismatched faces")))
    };
    let mut levels: Vec<FinSet> = (0..=2).map(|n| x.level(n).clone()).collect();
    levels.push(FinSet::new(simplices.len()));
    let mut faces: Vec<Vec<FinMap>> = vec![Vec::new()];
    faces.extend((1..=2).map(|n| (0..=n).map(|i| x.d(n, i).clone()).collect()));
    faces.push(
        (0..4)
            .map(|i| FinMap::from_fn(simplices.len(), m, |e| simplices[e][i]))
            .collect(),
    );
    let mut degens: Vec<Vec<FinMap>> = (0..2)
        .map(|n| (0..=n).map(|i| x.s(n, i).clone()).collect())
        .collect();
    let top_degens = (0..=2)
        .map(|i| {
            let table = (0..m)
                .map(|y| {
                    let t: Vec<usize> = (0..4)
                        .map(|j| {
                            if j < i {
                                x.degen(1, i - 1, x.face(2, j, y))
                            } else if j <= i + 1 {
                                y
                            } else {
                                x.degen(1, i, x.face(2, j - 1, y))
                            }
                        })
                        .collect();
                    lookup(&t)
                })
                .collect::<Result<Vec<_>>>()?;
            FinMap::new(simplices.len(), table)
        })
        .collect::<Result<Vec<_>>>()?;
    degens.push(top_degens);
    TruncSimplicialSet::new(levels, faces, degens)
}

/// The 2-truncated family with `X_2 = {(0,0),(1,0),(0,1)} ⊔ A`; elements of
/// `A` are the indices `3..3+|A|`.
pub fn no_lift_family(a_size: usize) -> TruncSimplicialSet {
    let pairs = [(0usize, 0usize), (1, 0), (0, 1)];
    TruncSimplicialSet::build(
        &[1, 2, 3 + a_size],
        |n, i, x| match n {
            1 => 0,
            _ if x < 3 => {
                let (k, l) = pairs[x];
                [l, k + l, k][i]
            }
            _ => [1, 0, 1][i],
        },
        |n, i, x| match n {
            0 => 0,
            _ => match (i, x) {
                (0, 0) | (1, 0) => 0,
                (0, _) => 2,
                _ => 1,
            },
        },
    )
    .expect("no-lift family is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::check_2segal;

    #[test]
    fn coskeleton_of_a_nerve_is_the_nerve() {
        let z2 = cyclic_group_nerve(2, 3).unwrap();
        let cosk = coskeleton_3(&z2.truncate(2).unwrap()).unwrap();
        assert_eq!(cosk.size(3), 8);
        assert!(cosk.check_simplicial_identities().is_empty());
        assert!(check_2segal(&cosk).passed());
    }

    #[test]
    fn coskeleton_of_the_no_lift_family_is_not_two_segal() {
        let x = coskeleton_3(&no_lift_family(2)).unwrap();
        assert!(x.check_simplicial_identities().is_empty());
        let report = check_2segal(&x);
        let f = &report.failures[0];
        assert_eq!((f.n, f.kind.as_str()), (3, "not injective"));
        assert!(matches!(
            crate::simplicial::TwoSegal::new(&x),
            Err(Error::NotTwoSegal { n: 3, .. })
        ));
    }

    #[test]
    fn group_nerve_sizes() {
        let x = cyclic_group_nerve(2, 4).unwrap();
        assert_eq!(x.sizes(), vec![1, 2, 4, 8, 16]);
        let t = cyclic_group_nerve(1, 3).unwrap();
        assert_eq!(t.sizes(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn interval_sizes() {
        let x = interval_monoid_nerve(2, 3).unwrap();
        assert_eq!(x.size(2), 6);
        let x0 = interval_monoid_nerve(0, 3).unwrap();
        assert_eq!(x0.sizes(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn categories_validate() {
        assert!(SmallCategory::pair_groupoid(2).unwrap().is_groupoid());
        assert!(!SmallCategory::chain(3).unwrap().is_groupoid());
        let bad = SmallCategory::group(2, |_, _| 0, 0);
        assert!(bad.is_err());
    }

    #[test]
    fn nerves_are_two_segal() {
        let c = SmallCategory::chain(3).unwrap();
        for x in [
            nerve(&c, 5).unwrap(),
            nerve(&SmallCategory::pair_groupoid(2).unwrap(), 4).unwrap(),
            interval_monoid_nerve(3, 4).unwrap(),
        ] {
            assert!(x.check_simplicial_identities().is_empty());
            assert!(check_2segal(&x).passed());
        }
    }

    #[test]
    fn inertia_groupoid_sizes() {
        let g = SmallCategory::cyclic_group(2).unwrap();
        let x = twisted_cyclic_nerve(&g, &Functor::identity(&g), 3).unwrap();
        assert_eq!(x.size(1), 4);
        assert!(x.check_simplicial_identities().is_empty());
        assert!(check_2segal(&x).passed());
    }

    #[test]
    fn twisted_nerve_with_automorphism() {
        let g = SmallCategory::cyclic_group(3).unwrap();
        let neg = Functor {
            on_objects: vec![0],
            on_morphisms: vec![0, 2, 1],
        };
        let x = twisted_cyclic_nerve(&g, &neg, 4).unwrap();
        assert!(x.check_simplicial_identities().is_empty());
        assert!(check_2segal(&x).passed());
    }

    #[test]
    fn building_of_chain() {
        let p = SmallCategory::chain(3).unwrap();
        let x = building(&p, &Functor::identity(&p), 4).unwrap();
        assert!(x.check_simplicial_identities().is_empty());
        assert!(check_2segal(&x).passed());
        // x_0 ≤ ... ≤ x_n ≤ x_0 forces constant chains
        assert_eq!(x.sizes(), vec![3; 5]);
    }

    #[test]
    fn no_lift_with_one_label_is_z2() {
        let x = no_lift_family(1);
        let z2 = cyclic_group_nerve(2, 2).unwrap();
        assert!(x.check_simplicial_identities().is_empty());
        // same sizes; (1,1) sits at index 3 in both orders
        assert_eq!(x.sizes(), z2.sizes());
        let relabel = [0usize, 2, 1, 3]; // (0,0),(1,0),(0,1),a ↦ z2 indices
        for i in 0..3 {
            for e in 0..4 {
                assert_eq!(x.face(2, i, e), z2.face(2, i, relabel[e]));
            }
        }
        for i in 0..2 {
            for e in 0..2 {
                assert_eq!(relabel[x.degen(1, i, e)], z2.degen(1, i, e));
            }
        }
    }
}
