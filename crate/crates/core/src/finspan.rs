//! Finite sets, maps and spans, composed by pullback, with the 2-cells needed
//! to state string-diagram equations in the bicategory of spans.
//!
//! Elements of a finite set are the integers `0..size`. A product `X × Y` is
//! encoded mixed-radix, `(x, y) ↦ x·|Y| + y`, and a pullback lists its pairs
//! in lexicographic order.

use serde::{Deserialize, Serialize};

use crate::error::{Result, structural};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinSet {
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FinSet {
    pub fn new(size: usize) -> Self {
        FinSet { size, labels: None }
    }

    pub fn labelled(labels: Vec<String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(structural(format!("duplicate label {l:?}")));
            }
        }
        Ok(FinSet {
            size: labels.len(),
            labels: Some(labels),
        })
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(ls) => ls[i].clone(),
            None => i.to_string(),
        }
    }
}

/// A function between finite sets, stored as a lookup table.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinMap {
    dom: usize,
    cod: usize,
    table: Vec<usize>,
}

impl FinMap {
    pub fn new(cod: usize, table: Vec<usize>) -> Result<Self> {
        if let Some((i, &v)) = table.iter().enumerate().find(|(_, v)| **v >= cod) {
            return Err(structural(format!(
                "map entry {i} is {v}, outside codomain of size {cod}"
            )));
        }
        Ok(FinMap {
            dom: table.len(),
            cod,
            table,
        })
    }

    pub fn from_fn(dom: usize, cod: usize, f: impl Fn(usize) -> usize) -> Self {
        let table: Vec<usize> = (0..dom).map(f).collect();
        debug_assert!(table.iter().all(|&v| v < cod));
        FinMap { dom, cod, table }
    }

    pub fn identity(n: usize) -> Self {
        FinMap {
            dom: n,
            cod: n,
            table: (0..n).collect(),
        }
    }

    pub fn constant(dom: usize, cod: usize, value: usize) -> Self {
        FinMap::from_fn(dom, cod, |_| value)
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &FinMap) -> Result<FinMap> {
        if self.cod != next.dom {
            return Err(structural(format!(
                "cannot compose map into {} with map from {}",
                self.cod, next.dom
            )));
        }
        Ok(FinMap {
            dom: self.dom,
            cod: next.cod,
            table: self.table.iter().map(|&x| next.table[x]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.cod];
        self.table
            .iter()
            .all(|&y| !std::mem::replace(&mut hit[y], true))
    }

    pub fn is_bijective(&self) -> bool {
        self.dom == self.cod && self.is_injective()
    }

    pub fn inverse(&self) -> Option<FinMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0; self.dom];
        for (x, &y) in self.table.iter().enumerate() {
            table[y] = x;
        }
        Some(FinMap {
            dom: self.cod,
            cod: self.dom,
            table,
        })
    }

    /// The map `(a, b) ↦ (f a, g b)` on mixed-radix products.
    pub fn product(&self, other: &FinMap) -> FinMap {
        FinMap::from_fn(self.dom * other.dom, self.cod * other.cod, |p| {
            let (a, b) = (p / other.dom, p % other.dom);
            self.table[a] * other.cod + other.table[b]
        })
    }

    /// The map `a ↦ (f a, g a)` into the mixed-radix product of codomains.
    pub fn pair(&self, other: &FinMap) -> Result<FinMap> {
        if self.dom != other.dom {
            return Err(structural("paired maps must share a domain"));
        }
        Ok(FinMap::from_fn(self.dom, self.cod * other.cod, |a| {
            self.table[a] * other.cod + other.table[a]
        }))
    }

    /// Preimage sizes, indexed by codomain element.
    pub fn fiber_sizes(&self) -> Vec<usize> {
        let mut counts = vec![0; self.cod];
        for &y in &self.table {
            counts[y] += 1;
        }
        counts
    }

    pub(crate) fn set(&mut self, x: usize, y: usize) {
        assert!(y < self.cod);
        self.table[x] = y;
    }
}

/// Mixed-radix encoding of a tuple.
pub fn encode(digits: &[usize], radices: &[usize]) -> usize {
    digits
        .iter()
        .zip(radices)
        .fold(0, |acc, (&d, &r)| acc * r + d)
}

pub fn decode(mut code: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = code % r;
        code /= r;
    }
    out
}

/// The pullback `{(a, b) : f a = g b}` with its projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    pub apex: FinSet,
    pub first: FinMap,
    pub second: FinMap,
}

impl Pullback {
    /// Index of the pair `(a, b)`, if it lies in the pullback.
    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        let (fs, ss) = (self.first.table(), self.second.table());
        let lo = fs.partition_point(|&x| x < a);
        let hi = fs.partition_point(|&x| x <= a);
        let off = ss[lo..hi].binary_search(&b).ok()?;
        Some(lo + off)
    }

    pub fn pair(&self, p: usize) -> (usize, usize) {
        (self.first.apply(p), self.second.apply(p))
    }
}

pub fn pullback(f: &FinMap, g: &FinMap) -> Result<Pullback> {
    if f.cod() != g.cod() {
        return Err(structural(format!(
            "pullback over mismatched codomains {} and {}",
            f.cod(),
            g.cod()
        )));
    }
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); g.cod()];
    for (b, &y) in g.table().iter().enumerate() {
        buckets[y].push(b);
    }
    let mut first = Vec::new();
    let mut second = Vec::new();
    for (a, &y) in f.table().iter().enumerate() {
        for &b in &buckets[y] {
            first.push(a);
            second.push(b);
        }
    }
    let n = first.len();
    Ok(Pullback {
        apex: FinSet::new(n),
        first: FinMap::new(f.dom(), first)?,
        second: FinMap::new(g.dom(), second)?,
    })
}

/// A span `src ← apex → tgt` of finite sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub src: usize,
    pub tgt: usize,
    pub left: FinMap,
    pub right: FinMap,
}

impl Span {
    pub fn new(left: FinMap, right: FinMap) -> Result<Self> {
        if left.dom() != right.dom() {
            return Err(structural("span legs must share the apex"));
        }
        Ok(Span {
            src: left.cod(),
            tgt: right.cod(),
            left,
            right,
        })
    }

    pub fn apex(&self) -> usize {
        self.left.dom()
    }

    pub fn identity(n: usize) -> Self {
        Span::new(FinMap::identity(n), FinMap::identity(n)).unwrap()
    }

    /// The span `dom ← dom → cod` of a function.
    pub fn of_map(f: &FinMap) -> Self {
        Span::new(FinMap::identity(f.dom()), f.clone()).unwrap()
    }

    /// The span `cod ← dom → dom` read backwards along a function.
    pub fn of_map_reversed(f: &FinMap) -> Self {
        Span::new(f.clone(), FinMap::identity(f.dom())).unwrap()
    }

    /// Apex elements grouped by their `(left, right)` value.
    fn fibers(&self) -> std::collections::BTreeMap<(usize, usize), Vec<usize>> {
        let mut out: std::collections::BTreeMap<(usize, usize), Vec<usize>> = Default::default();
        for a in 0..self.apex() {
            out.entry((self.left.apply(a), self.right.apply(a)))
                .or_default()
                .push(a);
        }
        out
    }
}

/// `f` followed by `g`, together with the pullback that forms its apex.
pub fn compose_with_pullback(f: &Span, g: &Span) -> Result<(Span, Pullback)> {
    if f.tgt != g.src {
        return Err(structural(format!(
            "span into {} cannot be followed by span out of {}",
            f.tgt, g.src
        )));
    }
    let pb = pullback(&f.right, &g.left)?;
    let span = Span::new(pb.first.then(&f.left)?, pb.second.then(&g.right)?)?;
    Ok((span, pb))
}

pub fn compose_spans(f: &Span, g: &Span) -> Result<Span> {
    compose_with_pullback(f, g).map(|(s, _)| s)
}

/// `f × g`, with apex `(a, b) ↦ a·|B| + b`.
pub fn product_span(f: &Span, g: &Span) -> Span {
    Span::new(f.left.product(&g.left), f.right.product(&g.right)).unwrap()
}

/// A 2-cell: an apex map commuting with both legs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanCell {
    pub source: Span,
    pub target: Span,
    pub map: FinMap,
}

impl SpanCell {
    pub fn new(source: Span, target: Span, map: FinMap) -> Result<Self> {
        if source.src != target.src || source.tgt != target.tgt {
            return Err(structural("2-cell between spans with different boundaries"));
        }
        if map.dom() != source.apex() || map.cod() != target.apex() {
            return Err(structural("2-cell map does not run between the apexes"));
        }
        for a in 0..source.apex() {
            let b = map.apply(a);
            if target.left.apply(b) != source.left.apply(a)
                || target.right.apply(b) != source.right.apply(a)
            {
                return Err(structural(format!(
                    "2-cell does not commute with legs at apex element {a}"
                )));
            }
        }
        Ok(SpanCell {
            source,
            target,
            map,
        })
    }

    pub fn identity(s: &Span) -> Self {
        SpanCell {
            source: s.clone(),
            target: s.clone(),
            map: FinMap::identity(s.apex()),
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.map.is_bijective()
    }

    pub fn inverse(&self) -> Option<SpanCell> {
        Some(SpanCell {
            source: self.target.clone(),
            target: self.source.clone(),
            map: self.map.inverse()?,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.map == FinMap::identity(self.source.apex())
    }
}

/// `first` then `second`.
pub fn vertical_compose(first: &SpanCell, second: &SpanCell) -> Result<SpanCell> {
    if first.target != second.source {
        return Err(structural("vertical composite of non-matching 2-cells"));
    }
    Ok(SpanCell {
        source: first.source.clone(),
        target: second.target.clone(),
        map: first.map.then(&second.map)?,
    })
}

/// The 2-cell `f ∘ g ⇒ f' ∘ g'` induced by `u: f ⇒ f'` and `v: g ⇒ g'`, with
/// `f` the first span traversed.
pub fn horizontal_compose(u: &SpanCell, v: &SpanCell) -> Result<SpanCell> {
    let (source, pb) = compose_with_pullback(&u.source, &v.source)?;
    let (target, pt) = compose_with_pullback(&u.target, &v.target)?;
    let mut table = Vec::with_capacity(source.apex());
    for p in 0..source.apex() {
        let (a, b) = pb.pair(p);
        let q = pt
            .index_of(u.map.apply(a), v.map.apply(b))
            .ok_or_else(|| structural("horizontal composite left the pullback"))?;
        table.push(q);
    }
    SpanCell::new(source, target, FinMap::new(pt.apex.size, table)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// The fixed span is traversed before the cell.
    Before,
    /// The fixed span is traversed after the cell.
    After,
}

pub fn whisker(s: &Span, u: &SpanCell, side: Side) -> Result<SpanCell> {
    let id = SpanCell::identity(s);
    match side {
        Side::Before => horizontal_compose(&id, u),
        Side::After => horizontal_compose(u, &id),
    }
}

/// The monoidal product of 2-cells.
pub fn product_cell(u: &SpanCell, v: &SpanCell) -> SpanCell {
    SpanCell {
        source: product_span(&u.source, &v.source),
        target: product_span(&u.target, &v.target),
        map: u.map.product(&v.map),
    }
}

/// Decides 2-isomorphism by comparing fibers over `src × tgt`, then pairing
/// fiber elements in order.
pub fn spans_isomorphic(f: &Span, g: &Span) -> Option<SpanCell> {
    if f.src != g.src || f.tgt != g.tgt || f.apex() != g.apex() {
        return None;
    }
    let (ff, gf) = (f.fibers(), g.fibers());
    if ff.len() != gf.len() {
        return None;
    }
    let mut table = vec![0; f.apex()];
    for (key, xs) in &ff {
        let ys = gf.get(key)?;
        if ys.len() != xs.len() {
            return None;
        }
        for (&x, &y) in xs.iter().zip(ys) {
            table[x] = y;
        }
    }
    let map = FinMap::new(g.apex(), table).ok()?;
    SpanCell::new(f.clone(), g.clone(), map).ok()
}

/// A bracketing of an iterated Cartesian product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProductShape {
    Leaf(usize),
    Pair(Box<ProductShape>, Box<ProductShape>),
}

impl ProductShape {
    pub fn pair(a: ProductShape, b: ProductShape) -> Self {
        ProductShape::Pair(Box::new(a), Box::new(b))
    }

    /// Left-nested product of the given factor sizes.
    pub fn left_nested(sizes: &[usize]) -> Self {
        let mut it = sizes.iter().map(|&s| ProductShape::Leaf(s));
        let first = it.next().unwrap_or(ProductShape::Leaf(1));
        it.fold(first, ProductShape::pair)
    }

    /// Right-nested product of the given factor sizes.
    pub fn right_nested(sizes: &[usize]) -> Self {
        let mut it = sizes.iter().rev().map(|&s| ProductShape::Leaf(s));
        let last = it.next().unwrap_or(ProductShape::Leaf(1));
        it.fold(last, |acc, l| ProductShape::pair(l, acc))
    }

    pub fn size(&self) -> usize {
        match self {
            ProductShape::Leaf(s) => *s,
            ProductShape::Pair(a, b) => a.size() * b.size(),
        }
    }

    pub fn leaves(&self) -> Vec<usize> {
        match self {
            ProductShape::Leaf(s) => vec![*s],
            ProductShape::Pair(a, b) => {
                let mut v = a.leaves();
                v.extend(b.leaves());
                v
            }
        }
    }

    /// Flat tuple of leaf elements of an encoded element.
    pub fn decode(&self, code: usize) -> Vec<usize> {
        match self {
            ProductShape::Leaf(_) => vec![code],
            ProductShape::Pair(a, b) => {
                let bs = b.size();
                let mut v = a.decode(code / bs);
                v.extend(b.decode(code % bs));
                v
            }
        }
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        self.encode_prefix(tuple).0
    }

    fn encode_prefix(&self, tuple: &[usize]) -> (usize, usize) {
        match self {
            ProductShape::Leaf(_) => (tuple[0], 1),
            ProductShape::Pair(a, b) => {
                let (x, used) = a.encode_prefix(tuple);
                let (y, used_b) = b.encode_prefix(&tuple[used..]);
                (x * b.size() + y, used + used_b)
            }
        }
    }
}

/// The structural reshuffling cell between two bracketings of the same factors,
/// as a 2-cell between identity-shaped spans over the flat tuple set.
pub fn coherence_cell(a: &ProductShape, b: &ProductShape) -> Result<SpanCell> {
    if a.leaves() != b.leaves() {
        return Err(structural("bracketings have different factors"));
    }
    let flat = ProductShape::left_nested(&a.leaves());
    let n = a.size();
    let legs_a = FinMap::from_fn(n, n, |x| flat.encode(&a.decode(x)));
    let legs_b = FinMap::from_fn(n, n, |x| flat.encode(&b.decode(x)));
    let source = Span::new(legs_a.clone(), legs_a)?;
    let target = Span::new(legs_b.clone(), legs_b)?;
    let map = FinMap::from_fn(n, n, |x| b.encode(&a.decode(x)));
    SpanCell::new(source, target, map)
}

/// `(f ∘ g) ∘ h ⇒ f ∘ (g ∘ h)`, matching elements by their `(a, b, c)` triples.
pub fn associator_cell(f: &Span, g: &Span, h: &Span) -> Result<SpanCell> {
    let (fg, p1) = compose_with_pullback(f, g)?;
    let (source, p2) = compose_with_pullback(&fg, h)?;
    let (gh, q1) = compose_with_pullback(g, h)?;
    let (target, q2) = compose_with_pullback(f, &gh)?;
    let mut table = Vec::with_capacity(source.apex());
    for e in 0..source.apex() {
        let (ab, c) = p2.pair(e);
        let (a, b) = p1.pair(ab);
        let bc = q1
            .index_of(b, c)
            .ok_or_else(|| structural("associator lookup"))?;
        table.push(
            q2.index_of(a, bc)
                .ok_or_else(|| structural("associator lookup"))?,
        );
    }
    {
        let map = FinMap::new(target.apex(), table)?;
        SpanCell::new(source, target, map)
    }
}

/// `id ∘ s ⇒ s`.
pub fn left_unitor_cell(s: &Span) -> Result<SpanCell> {
    let (source, pb) = compose_with_pullback(&Span::identity(s.src), s)?;
    let map = pb.second.clone();
    SpanCell::new(source, s.clone(), map)
}

/// `s ∘ id ⇒ s`.
pub fn right_unitor_cell(s: &Span) -> Result<SpanCell> {
    let (source, pb) = compose_with_pullback(s, &Span::identity(s.tgt))?;
    let map = pb.first.clone();
    SpanCell::new(source, s.clone(), map)
}

/// The associator 1-morphism `(X×Y)×Z → X×(Y×Z)`; under the flat encoding
/// both sides carry the same indices.
pub fn associator_span(x: usize, y: usize, z: usize) -> Span {
    Span::identity(x * y * z)
}

/// `ρ_{X,Y}: X × Y → Y × X` with identity left leg and swapping right leg.
pub fn braiding_span(x: usize, y: usize) -> Span {
    let swap = FinMap::from_fn(x * y, y * x, |p| (p % y) * x + p / y);
    Span::new(FinMap::identity(x * y), swap).unwrap()
}

/// The slide move `c_{f,g}: (id ⊗ g) ∘ (f ⊗ id) ⇒ (f ⊗ id) ∘ (id ⊗ g)` for
/// `f: X → X'` and `g: Y → Y'`.
pub fn tensorator_cell(f: &Span, g: &Span) -> Result<SpanCell> {
    let (x, xp, y, yp) = (f.src, f.tgt, g.src, g.tgt);
    let (source, ps) = compose_with_pullback(
        &product_span(f, &Span::identity(y)),
        &product_span(&Span::identity(xp), g),
    )?;
    let (target, pt) = compose_with_pullback(
        &product_span(&Span::identity(x), g),
        &product_span(f, &Span::identity(yp)),
    )?;
    let mut table = Vec::with_capacity(source.apex());
    for e in 0..source.apex() {
        let (ay, xb) = ps.pair(e);
        let a = ay / y;
        let b = xb % g.apex();
        let first = f.left.apply(a) * g.apex() + b;
        let second = a * yp + g.right.apply(b);
        table.push(
            pt.index_of(first, second)
                .ok_or_else(|| structural("tensorator target lookup"))?,
        );
    }
    {
        let map = FinMap::new(target.apex(), table)?;
        SpanCell::new(source, target, map)
    }
}

/// `ρ_{f,g}: ρ_{X',Y'} ∘ (f ⊗ g) ⇒ (g ⊗ f) ∘ ρ_{X,Y}`.
pub fn braiding_cell(f: &Span, g: &Span) -> Result<SpanCell> {
    let (x, xp, y, yp) = (f.src, f.tgt, g.src, g.tgt);
    let (source, ps) = compose_with_pullback(&product_span(f, g), &braiding_span(xp, yp))?;
    let (target, pt) = compose_with_pullback(&braiding_span(x, y), &product_span(g, f))?;
    let mut table = Vec::with_capacity(source.apex());
    for e in 0..source.apex() {
        let (ab, _) = ps.pair(e);
        let (a, b) = (ab / g.apex(), ab % g.apex());
        let first = f.left.apply(a) * y + g.left.apply(b);
        let second = b * f.apex() + a;
        table.push(
            pt.index_of(first, second)
                .ok_or_else(|| structural("braiding target lookup"))?,
        );
    }
    {
        let map = FinMap::new(target.apex(), table)?;
        SpanCell::new(source, target, map)
    }
}

/// `v_{X,Y}: ρ_{Y,X} ∘ ρ_{X,Y} ⇒ id_{X×Y}`.
pub fn syllepsis_cell(x: usize, y: usize) -> Result<SpanCell> {
    let source = compose_spans(&braiding_span(x, y), &braiding_span(y, x))?;
    let map = source.left.clone();
    SpanCell::new(source, Span::identity(x * y), map)
}

/// The unique 2-cell between spans whose target has an injective left leg,
/// matching elements by left-leg value.
pub fn cell_by_left_leg(source: &Span, target: &Span) -> Result<SpanCell> {
    let mut index = vec![usize::MAX; target.src];
    for b in 0..target.apex() {
        let x = target.left.apply(b);
        if index[x] != usize::MAX {
            return Err(structural("target left leg is not injective"));
        }
        index[x] = b;
    }
    let mut table = Vec::with_capacity(source.apex());
    for a in 0..source.apex() {
        let b = index[source.left.apply(a)];
        if b == usize::MAX {
            return Err(structural(format!(
                "no target element over source element {a}"
            )));
        }
        table.push(b);
    }
    SpanCell::new(
        source.clone(),
        target.clone(),
        FinMap::new(target.apex(), table)?,
    )
}

/// `R_{X|YZ}: (id_Y ⊗ ρ_{X,Z}) ∘ α_{Y,X,Z} ∘ (ρ_{X,Y} ⊗ id_Z)
///            ⇒ α_{Y,Z,X} ∘ ρ_{X,Y⊗Z} ∘ α_{X,Y,Z}`.
pub fn hexagonator_cell(x: usize, y: usize, z: usize) -> Result<SpanCell> {
    let source = compose_spans(
        &compose_spans(
            &product_span(&braiding_span(x, y), &Span::identity(z)),
            &associator_span(y, x, z),
        )?,
        &product_span(&Span::identity(y), &braiding_span(x, z)),
    )?;
    let target = compose_spans(
        &compose_spans(&associator_span(x, y, z), &braiding_span(x, y * z))?,
        &associator_span(y, z, x),
    )?;
    cell_by_left_leg(&source, &target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    fn span(src: usize, tgt: usize, left: Vec<usize>, right: Vec<usize>) -> Span {
        Span::new(
            FinMap::new(src, left).unwrap(),
            FinMap::new(tgt, right).unwrap(),
        )
        .unwrap()
    }

    fn arb_span(max_apex: usize, src: usize, tgt: usize) -> impl Strategy<Value = Span> {
        (0..=max_apex).prop_flat_map(move |n| {
            (
                proptest::collection::vec(0..src, n),
                proptest::collection::vec(0..tgt, n),
            )
                .prop_map(move |(l, r)| span(src, tgt, l, r))
        })
    }

    #[test]
    fn pullback_of_constant_maps_is_product() {
        let f = FinMap::new(1, vec![0, 0]).unwrap();
        let g = FinMap::new(1, vec![0]).unwrap();
        let pb = pullback(&f, &g).unwrap();
        assert_eq!(pb.apex.size, 2);
        assert_eq!(pb.first.table(), &[0, 1]);
        assert_eq!(pb.second.table(), &[0, 0]);
    }

    #[test]
    fn pullback_of_identities_is_diagonal() {
        let id = FinMap::identity(3);
        let pb = pullback(&id, &id).unwrap();
        assert_eq!(pb.apex.size, 3);
        assert!(pb.first.is_bijective() && pb.second.is_bijective());
    }

    #[test]
    fn pullback_of_disjoint_images_is_empty() {
        let f = FinMap::new(2, vec![0]).unwrap();
        let g = FinMap::new(2, vec![1]).unwrap();
        assert_eq!(pullback(&f, &g).unwrap().apex.size, 0);
    }

    #[test]
    fn pullback_rejects_mismatched_codomains() {
        let f = FinMap::new(2, vec![0]).unwrap();
        let g = FinMap::new(3, vec![1]).unwrap();
        assert!(pullback(&f, &g).is_err());
    }

    #[test]
    fn composite_over_point_multiplies_apexes() {
        let f = span(2, 1, vec![0, 1], vec![0, 0]);
        let g = span(1, 3, vec![0, 0, 0], vec![0, 1, 2]);
        assert_eq!(compose_spans(&f, &g).unwrap().apex(), 6);
    }

    #[test]
    fn unitors_are_invertible() {
        let s = span(3, 2, vec![0, 2, 2, 1], vec![1, 0, 1, 1]);
        assert!(left_unitor_cell(&s).unwrap().is_invertible());
        assert!(right_unitor_cell(&s).unwrap().is_invertible());
    }

    #[test]
    fn different_apex_sizes_are_not_isomorphic() {
        let f = span(1, 1, vec![0, 0], vec![0, 0]);
        let g = span(1, 1, vec![0, 0, 0], vec![0, 0, 0]);
        assert!(spans_isomorphic(&f, &g).is_none());
        assert!(spans_isomorphic(&f, &f).unwrap().is_identity());
    }

    #[test]
    fn product_with_unit_keeps_indices() {
        let f = span(2, 3, vec![0, 1, 1], vec![2, 0, 1]);
        let p = product_span(&f, &Span::identity(1));
        assert_eq!(p, f);
        let g = span(1, 1, vec![0, 0, 0], vec![0, 0, 0]);
        assert_eq!(product_span(&f, &g).apex(), 9);
    }

    #[test]
    fn rebracketing_cells() {
        let sizes = [2, 3, 4];
        let left = ProductShape::left_nested(&sizes);
        let right = ProductShape::right_nested(&sizes);
        let c = coherence_cell(&left, &right).unwrap();
        assert_eq!(c.map.dom(), 24);
        assert!(c.is_invertible());
        let back = coherence_cell(&right, &left).unwrap();
        assert!(vertical_compose(&c, &back).unwrap().is_identity());
        assert!(coherence_cell(&left, &left).unwrap().is_identity());
        let other = ProductShape::left_nested(&[3, 2, 4]);
        assert!(coherence_cell(&left, &other).is_err());
    }

    #[test]
    fn shape_decoding_is_bijective() {
        let shape = ProductShape::pair(
            ProductShape::Leaf(2),
            ProductShape::pair(ProductShape::Leaf(3), ProductShape::Leaf(2)),
        );
        let mut seen = std::collections::HashSet::new();
        for x in 0..shape.size() {
            let t = shape.decode(x);
            assert_eq!(shape.encode(&t), x);
            assert!(seen.insert(t));
        }
    }

    #[test]
    fn syllepsis_and_braiding_on_point() {
        let v = syllepsis_cell(2, 3).unwrap();
        assert!(v.is_invertible());
        assert_eq!(braiding_span(1, 4), Span::identity(4));
        assert!(hexagonator_cell(2, 3, 2).unwrap().is_invertible());
    }

    #[test]
    fn tensorator_of_identities_is_identity() {
        let c = tensorator_cell(&Span::identity(2), &Span::identity(3)).unwrap();
        assert!(c.is_invertible());
        assert_eq!(c.map, FinMap::identity(c.source.apex()));
    }

    proptest! {
        #[test]
        fn isomorphism_agrees_with_brute_force(
            f in arb_span(5, 2, 2), g in arb_span(5, 2, 2)
        ) {
            let fast = spans_isomorphic(&f, &g).is_some();
            prop_assert_eq!(fast, oracle::spans_isomorphic_brute(&f, &g));
            prop_assert!(spans_isomorphic(&f, &f).is_some());
        }

        #[test]
        fn composition_is_associative_up_to_cell(
            f in arb_span(4, 2, 3), g in arb_span(4, 3, 2), h in arb_span(4, 2, 2)
        ) {
            let a = associator_cell(&f, &g, &h).unwrap();
            prop_assert!(a.is_invertible());
            let back = a.inverse().unwrap();
            prop_assert!(vertical_compose(&a, &back).unwrap().is_identity());
        }

        #[test]
        fn interchange_law(
            f in arb_span(3, 2, 2), g in arb_span(3, 2, 2), p in any::<u64>()
        ) {
            // Cells f ⇒ f ⇒ f and g ⇒ g ⇒ g from automorphisms of each apex.
            let u1 = oracle::some_automorphism(&f, p);
            let u2 = oracle::some_automorphism(&f, p.rotate_left(7));
            let v1 = oracle::some_automorphism(&g, p.rotate_left(13));
            let v2 = oracle::some_automorphism(&g, p.rotate_left(29));
            let lhs = horizontal_compose(
                &vertical_compose(&u1, &u2).unwrap(),
                &vertical_compose(&v1, &v2).unwrap(),
            ).unwrap();
            let rhs = vertical_compose(
                &horizontal_compose(&u1, &v1).unwrap(),
                &horizontal_compose(&u2, &v2).unwrap(),
            ).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn structural_cells_are_invertible(
            f in arb_span(3, 2, 2), g in arb_span(3, 3, 2), x in 1usize..3, y in 1usize..3, z in 1usize..3
        ) {
            let c = tensorator_cell(&f, &g).unwrap();
            prop_assert!(c.is_invertible());
            prop_assert!(vertical_compose(&c, &c.inverse().unwrap()).unwrap().is_identity());
            prop_assert!(braiding_cell(&f, &g).unwrap().is_invertible());
            prop_assert!(syllepsis_cell(x, y).unwrap().is_invertible());
            prop_assert!(hexagonator_cell(x, y, z).unwrap().is_invertible());
        }

        #[test]
        fn whiskered_identity_is_identity(f in arb_span(3, 2, 2), g in arb_span(3, 2, 2)) {
            let id = SpanCell::identity(&g);
            prop_assert!(whisker(&f, &id, Side::Before).unwrap().is_identity());
            prop_assert!(whisker(&f, &id, Side::After).unwrap().is_identity());
        }
    }
}
