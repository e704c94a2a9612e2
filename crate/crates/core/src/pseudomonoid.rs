//! Pseudomonoids in spans built from 2-Segal sets, their pentagon and
//! triangle equations, and associator lifts for 2-truncated data.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::diagram::{Block, Composite, Diagram, Move, schedule_diagram, triangle_label};
use crate::error::{Error, Result, structural};
use crate::finspan::{
    FinMap, FinSet, Span, SpanCell, compose_spans, encode, pullback, spans_isomorphic,
    tensorator_cell, vertical_compose,
};
use crate::perm::{factorial, next_permutation};
use crate::simplicial::{
    Edge, Triangulation, TruncSimplicialSet, TwoSegal, enumerate_triangulations,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudomonoidData {
    pub carrier: FinSet,
    /// `{•} ← X_0 → X_1`.
    pub unit: Span,
    /// `X_1 × X_1 ← X_2 → X_1` with legs `(d_2, d_0)` and `d_1`.
    pub mult: Span,
    /// `μ ∘ (μ × id) ⇒ μ ∘ (id × μ)`.
    pub assoc: SpanCell,
    /// `μ ∘ (η × id) ⇒ id`.
    pub lunit: SpanCell,
    /// `μ ∘ (id × η) ⇒ id`.
    pub runit: SpanCell,
}

pub fn mult_span(x: &TruncSimplicialSet) -> Span {
    let s = x.size(1);
    Span::new(
        FinMap::from_fn(x.size(2), s * s, |e| x.face(2, 2, e) * s + x.face(2, 0, e)),
        x.d(2, 1).clone(),
    )
    .expect("face maps land in level 1")
}

pub fn unit_span(x: &TruncSimplicialSet) -> Span {
    Span::new(FinMap::constant(x.size(0), 1, 0), x.s(0, 0).clone())
        .expect("degeneracy lands in level 1")
}

fn mu(label: &str, mult: &Span) -> Block {
    Block::node(label, mult, 2, 1)
}

/// `[[μ_inner, w], [μ_outer]]` and `[[w, μ_inner'], [μ_outer']]`.
pub(crate) fn assoc_boxes(
    base: usize,
    mult: &Span,
    from: [&str; 2],
    to: [&str; 2],
) -> Result<(Composite, Composite)> {
    let src = Diagram::new(
        base,
        3,
        vec![
            vec![mu(from[0], mult), Block::Wire],
            vec![mu(from[1], mult)],
        ],
    );
    let tgt = Diagram::new(
        base,
        3,
        vec![vec![Block::Wire, mu(to[0], mult)], vec![mu(to[1], mult)]],
    );
    Ok((src.composite()?, tgt.composite()?))
}

fn unit_boxes(base: usize, unit: &Span, mult: &Span) -> Result<(Composite, Composite, Composite)> {
    let eta = Block::node("unit", unit, 0, 1);
    let left = Diagram::new(
        base,
        1,
        vec![vec![eta.clone(), Block::Wire], vec![mu("mult", mult)]],
    );
    let right = Diagram::new(
        base,
        1,
        vec![vec![Block::Wire, eta], vec![mu("mult", mult)]],
    );
    let id = Diagram::new(base, 1, vec![]);
    Ok((left.composite()?, right.composite()?, id.composite()?))
}

impl PseudomonoidData {
    /// Assembles the data from levels `0..=2` and an associator given on
    /// `(inner, outer)` pairs of 2-simplices, returning `(inner', outer')`.
    pub fn from_parts(
        x: &TruncSimplicialSet,
        assoc: impl Fn(usize, usize) -> Option<(usize, usize)>,
    ) -> Result<Self> {
        let base = x.size(1);
        let mult = mult_span(x);
        let unit = unit_span(x);
        let (src, tgt) = assoc_boxes(base, &mult, ["i", "o"], ["i", "o"])?;
        let mut table = Vec::with_capacity(src.apex());
        for e in 0..src.apex() {
            let inner = src.atom(e, "i").unwrap();
            let outer = src.atom(e, "o").unwrap();
            let (ni, no) = assoc(inner, outer)
                .ok_or_else(|| structural(format!("associator undefined on ({inner}, {outer})")))?;
            let atoms = HashMap::from([("i".to_string(), ni), ("o".to_string(), no)]);
            table.push(
                tgt.lookup(src.source_value(e), &atoms)
                    .ok_or_else(|| structural("associator image is not a composite element"))?,
            );
        }
        let assoc = SpanCell::new(
            src.span.clone(),
            tgt.span.clone(),
            FinMap::new(tgt.apex(), table)?,
        )?;

        let (left, right, id) = unit_boxes(base, &unit, &mult)?;
        let unitor = |c: &Composite,
                      eta: &dyn Fn(usize) -> usize,
                      deg: &dyn Fn(usize) -> usize|
         -> Result<SpanCell> {
            let table = (0..base)
                .map(|v| {
                    let atoms =
                        HashMap::from([("unit".to_string(), eta(v)), ("mult".to_string(), deg(v))]);
                    c.lookup(v, &atoms)
                        .ok_or_else(|| structural(format!("no unit composite over edge {v}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let inv = SpanCell::new(
                id.span.clone(),
                c.span.clone(),
                FinMap::new(c.apex(), table)?,
            )?;
            inv.inverse()
                .ok_or_else(|| structural("unitor is not invertible"))
        };
        let lunit = unitor(&left, &|v| x.face(1, 1, v), &|v| x.degen(1, 0, v))?;
        let runit = unitor(&right, &|v| x.face(1, 0, v), &|v| x.degen(1, 1, v))?;
        Ok(PseudomonoidData {
            carrier: x.level(1).clone(),
            unit,
            mult,
            assoc,
            lunit,
            runit,
        })
    }

    pub fn base(&self) -> usize {
        self.carrier.size
    }
}

/// The pseudomonoid of a unital 2-Segal set, with associator
/// `T̂_02 ∘ T̂_13⁻¹`.
pub fn build_pseudomonoid(x: &TruncSimplicialSet) -> Result<PseudomonoidData> {
    let seg = TwoSegal::new(x)?;
    if let Some(v) = x.check_unitality().first() {
        return Err(Error::NotTwoSegal {
            n: v.level,
            triangulation: "unit square".into(),
            detail: v.to_string(),
        });
    }
    let t13 = Triangulation::fan(3, 0);
    let t02 = Triangulation::fan(3, 1);
    PseudomonoidData::from_parts(x, |inner, outer| {
        let psi = seg.glue(&t13, &[inner, outer]).ok()?;
        let parts = seg.unglue(&t02, psi);
        // t02 lists 013 before 123
        Some((parts[1], parts[0]))
    })
}

/// The five bracketings of four inputs, the moves between them, and the
/// tensorator, ready to evaluate both pentagon composites.
pub struct PentagonFrame {
    base: usize,
    stages: HashMap<&'static str, Composite>,
    boxes: Vec<(Composite, Composite)>,
    tensor_boxes: (Composite, Composite),
    tensorator: FinMap,
}

/// Associator placements `(from stage, to stage, layer, strand, box)`.
const PENTAGON_MOVES: [(&str, &str, usize, usize, [&str; 4]); 5] = [
    ("B1", "B2", 0, 0, ["012", "023", "123", "013"]),
    ("B2", "B3", 1, 0, ["013", "034", "134", "014"]),
    ("B3", "B4", 0, 1, ["123", "134", "234", "124"]),
    ("B1", "B5a", 1, 0, ["023", "034", "234", "024"]),
    ("B5b", "B4", 1, 0, ["012", "024", "124", "014"]),
];

impl PentagonFrame {
    pub fn new(base: usize, mult: &Span) -> Result<Self> {
        let w = || Block::Wire;
        let m = |l: &str| mu(l, mult);
        let layouts: [(&'static str, Vec<Vec<Block>>); 6] = [
            (
                "B1",
                vec![
                    vec![m("012"), w(), w()],
                    vec![m("023"), w()],
                    vec![m("034")],
                ],
            ),
            (
                "B2",
                vec![
                    vec![w(), m("123"), w()],
                    vec![m("013"), w()],
                    vec![m("034")],
                ],
            ),
            (
                "B3",
                vec![
                    vec![w(), m("123"), w()],
                    vec![w(), m("134")],
                    vec![m("014")],
                ],
            ),
            (
                "B4",
                vec![
                    vec![w(), w(), m("234")],
                    vec![w(), m("124")],
                    vec![m("014")],
                ],
            ),
            (
                "B5a",
                vec![
                    vec![m("012"), w(), w()],
                    vec![w(), m("234")],
                    vec![m("024")],
                ],
            ),
            (
                "B5b",
                vec![
                    vec![w(), w(), m("234")],
                    vec![m("012"), w()],
                    vec![m("024")],
                ],
            ),
        ];
        let mut stages = HashMap::new();
        for (name, layers) in layouts {
            stages.insert(name, Diagram::new(base, 4, layers).composite()?);
        }
        let boxes = PENTAGON_MOVES
            .iter()
            .map(|(_, _, _, _, l)| assoc_boxes(base, mult, [l[0], l[1]], [l[2], l[3]]))
            .collect::<Result<Vec<_>>>()?;
        let tensor_boxes = (
            Diagram::new(base, 4, vec![vec![m("012"), w(), w()], vec![w(), m("234")]])
                .composite()?,
            Diagram::new(base, 4, vec![vec![w(), w(), m("234")], vec![m("012"), w()]])
                .composite()?,
        );
        let tensorator = tensorator_cell(mult, mult)?;
        if tensorator.source != tensor_boxes.0.span || tensorator.target != tensor_boxes.1.span {
            return Err(structural("tensorator does not match the slide boxes"));
        }
        Ok(PentagonFrame {
            base,
            stages,
            boxes,
            tensor_boxes,
            tensorator: tensorator.map,
        })
    }

    pub fn start(&self) -> &Composite {
        &self.stages["B1"]
    }

    fn assoc_step(&self, k: usize, assoc: &FinMap) -> Result<SpanCell> {
        let (from, to, layer, strand, _) = PENTAGON_MOVES[k];
        let (bs, bt) = &self.boxes[k];
        Move {
            layer,
            strand,
            box_source: bs,
            box_target: bt,
            cell: assoc,
            rename: vec![],
        }
        .apply(&self.stages[from], &self.stages[to], self.base)
    }

    /// Both composites `B1 ⇒ B4`.
    pub fn sides(&self, assoc: &FinMap) -> Result<(SpanCell, SpanCell)> {
        let lhs = vertical_compose(
            &vertical_compose(&self.assoc_step(0, assoc)?, &self.assoc_step(1, assoc)?)?,
            &self.assoc_step(2, assoc)?,
        )?;
        let slide = Move {
            layer: 0,
            strand: 0,
            box_source: &self.tensor_boxes.0,
            box_target: &self.tensor_boxes.1,
            cell: &self.tensorator,
            rename: vec![],
        }
        .apply(&self.stages["B5a"], &self.stages["B5b"], self.base)?;
        let rhs = vertical_compose(
            &vertical_compose(&self.assoc_step(3, assoc)?, &slide)?,
            &self.assoc_step(4, assoc)?,
        )?;
        Ok((lhs, rhs))
    }

    /// The automorphism of `B1` obtained by going around the pentagon.
    pub fn discrepancy(&self, assoc: &FinMap) -> Result<SpanCell> {
        let (lhs, rhs) = self.sides(assoc)?;
        let back = rhs
            .inverse()
            .ok_or_else(|| structural("pentagon composite is not invertible"))?;
        vertical_compose(&lhs, &back)
    }
}

/// An element of the fully left-bracketed composite moved by the pentagon
/// discrepancy, written by its triangles `012, 023, 034`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MovedElement {
    pub element: usize,
    pub image: usize,
    pub edges: Vec<usize>,
    pub before: [usize; 3],
    pub after: [usize; 3],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PentagonReport {
    pub holds: bool,
    /// Set when the associator is not a 2-cell between its boundaries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defect: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<SpanCell>,
    pub moved: Vec<MovedElement>,
}

/// Why a supplied cell is not a 2-cell between its recorded spans.
pub fn cell_defect(c: &SpanCell) -> Option<String> {
    SpanCell::new(c.source.clone(), c.target.clone(), c.map.clone())
        .err()
        .map(|e| e.to_string())
}

pub fn verify_pentagon(p: &PseudomonoidData) -> Result<PentagonReport> {
    if let Some(defect) = cell_defect(&p.assoc) {
        return Ok(PentagonReport {
            holds: false,
            defect: Some(defect),
            discrepancy: None,
            moved: Vec::new(),
        });
    }
    let frame = PentagonFrame::new(p.base(), &p.mult)?;
    pentagon_report(&frame, &p.assoc.map)
}

fn pentagon_report(frame: &PentagonFrame, assoc: &FinMap) -> Result<PentagonReport> {
    let cell = frame.discrepancy(assoc)?;
    let start = frame.start();
    let atoms = |e: usize| ["012", "023", "034"].map(|l| start.atom(e, l).unwrap());
    let moved = (0..start.apex())
        .filter(|&e| cell.map.apply(e) != e)
        .map(|e| {
            let image = cell.map.apply(e);
            MovedElement {
                element: e,
                image,
                edges: start.records[e].boundaries[0].clone(),
                before: atoms(e),
                after: atoms(image),
            }
        })
        .collect::<Vec<_>>();
    Ok(PentagonReport {
        holds: moved.is_empty(),
        defect: None,
        discrepancy: Some(cell),
        moved,
    })
}

/// Compares `(id × ℓ) ∘ a` with `r × id` on `μ ∘ (μ × id) ∘ (id × η × id)`.
pub fn verify_triangle(p: &PseudomonoidData) -> Result<bool> {
    if [&p.assoc, &p.lunit, &p.runit]
        .iter()
        .any(|c| cell_defect(c).is_some())
    {
        return Ok(false);
    }
    let base = p.base();
    let w = || Block::Wire;
    let eta = || Block::node("unit", &p.unit, 0, 1);
    let m = |l: &str| mu(l, &p.mult);
    let start = Diagram::new(
        base,
        2,
        vec![vec![w(), eta(), w()], vec![m("012"), w()], vec![m("023")]],
    )
    .composite()?;
    let middle = Diagram::new(
        base,
        2,
        vec![vec![w(), eta(), w()], vec![w(), m("123")], vec![m("013")]],
    )
    .composite()?;
    let end = Diagram::new(base, 2, vec![vec![m("out")]]).composite()?;
    let (bs, bt) = assoc_boxes(base, &p.mult, ["012", "023"], ["123", "013"])?;
    let assoc = Move {
        layer: 1,
        strand: 0,
        box_source: &bs,
        box_target: &bt,
        cell: &p.assoc.map,
        rename: vec![],
    }
    .apply(&start, &middle, base)?;
    let left_box = Diagram::new(base, 1, vec![vec![eta(), w()], vec![m("123")]]).composite()?;
    let right_box = Diagram::new(base, 1, vec![vec![w(), eta()], vec![m("012")]]).composite()?;
    let id = Diagram::new(base, 1, vec![]).composite()?;
    let relabel = |from: &str| vec![(from.to_string(), "out".to_string())];
    let lunit = Move {
        layer: 0,
        strand: 1,
        box_source: &left_box,
        box_target: &id,
        cell: &p.lunit.map,
        rename: relabel("013"),
    }
    .apply(&middle, &end, base)?;
    let runit = Move {
        layer: 0,
        strand: 0,
        box_source: &right_box,
        box_target: &id,
        cell: &p.runit.map,
        rename: relabel("023"),
    }
    .apply(&start, &end, base)?;
    let lhs = vertical_compose(&assoc, &lunit)?;
    Ok(lhs.map == runit.map)
}

/// Levels `0..=2` of a simplicial set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoTruncatedData {
    pub simplices: TruncSimplicialSet,
}

impl TwoTruncatedData {
    pub fn new(x: TruncSimplicialSet) -> Result<Self> {
        if x.top() != 2 {
            return Err(Error::Invalid(format!(
                "expected levels 0..=2, got 0..={}",
                x.top()
            )));
        }
        if let Some(v) = x.check_simplicial_identities().first() {
            return Err(Error::Invalid(v.to_string()));
        }
        Ok(TwoTruncatedData { simplices: x })
    }

    pub fn from_simplicial(x: &TruncSimplicialSet) -> Result<Self> {
        TwoTruncatedData::new(x.truncate(2)?)
    }
}

/// Pairs of 2-simplices glued along a shared edge, with their four edges.
struct Taco {
    pairs: Vec<(usize, usize)>,
    span: Span,
}

fn tacos(t: &TwoTruncatedData) -> Result<(Taco, Taco)> {
    let x = &t.simplices;
    let s = x.size(1);
    let d = |i: usize, e: usize| x.face(2, i, e);
    let radices = [s, s, s];
    // (012, 023) glued along 02
    let pb = pullback(x.d(2, 1), x.d(2, 2))?;
    let pairs: Vec<(usize, usize)> = (0..pb.apex.size).map(|p| pb.pair(p)).collect();
    let left = FinMap::new(
        s * s * s,
        pairs
            .iter()
            .map(|&(a, b)| encode(&[d(2, a), d(0, a), d(0, b)], &radices))
            .collect(),
    )?;
    let right = FinMap::new(s, pairs.iter().map(|&(_, b)| d(1, b)).collect())?;
    let first = Taco {
        pairs,
        span: Span::new(left, right)?,
    };
    // (013, 123) glued along 13
    let pb = pullback(x.d(2, 0), x.d(2, 1))?;
    let pairs: Vec<(usize, usize)> = (0..pb.apex.size).map(|p| pb.pair(p)).collect();
    let left = FinMap::new(
        s * s * s,
        pairs
            .iter()
            .map(|&(a, b)| encode(&[d(2, a), d(2, b), d(0, b)], &radices))
            .collect(),
    )?;
    let right = FinMap::new(s, pairs.iter().map(|&(a, _)| d(1, a)).collect())?;
    let second = Taco {
        pairs,
        span: Span::new(left, right)?,
    };
    Ok((first, second))
}

/// The two taco spans `(X_1)^3 → X_1`, for the triangulations `{012, 023}`
/// and `{013, 123}` of the square.
pub fn taco_spaces(t: &TwoTruncatedData) -> Result<(Span, Span)> {
    let (a, b) = tacos(t)?;
    Ok((a.span, b.span))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LiftVerdict {
    Exists {
        associator: SpanCell,
        checked: u128,
        total: u128,
    },
    NoLift {
        checked: u128,
        total: u128,
        reason: String,
    },
    BudgetExceeded {
        checked: u128,
        total: u128,
    },
}

impl LiftVerdict {
    pub fn exists(&self) -> bool {
        matches!(self, LiftVerdict::Exists { .. })
    }
}

/// Searches isomorphisms between the taco spans, fiber by fiber, for one
/// whose associator satisfies the pentagon. `budget` bounds the number of
/// candidates examined.
pub fn search_associator_lift(t: &TwoTruncatedData, budget: u128) -> Result<LiftVerdict> {
    let x = &t.simplices;
    let (first, second) = tacos(t)?;
    if spans_isomorphic(&first.span, &second.span).is_none() {
        return Ok(LiftVerdict::NoLift {
            checked: 0,
            total: 0,
            reason: "taco spans are not isomorphic".into(),
        });
    }
    let key = |s: &Span, e: usize| (s.left.apply(e), s.right.apply(e));
    let mut fibers: BTreeMap<(usize, usize), (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for e in 0..first.span.apex() {
        fibers.entry(key(&first.span, e)).or_default().0.push(e);
    }
    for e in 0..second.span.apex() {
        fibers.entry(key(&second.span, e)).or_default().1.push(e);
    }
    let fibers: Vec<(Vec<usize>, Vec<usize>)> = fibers.into_values().collect();
    let total = fibers
        .iter()
        .map(|f| factorial(f.0.len()))
        .fold(1u128, |a, b| a.saturating_mul(b));

    let base = x.size(1);
    let mult = mult_span(x);
    let frame = PentagonFrame::new(base, &mult)?;
    let (src, tgt) = assoc_boxes(base, &mult, ["i", "o"], ["i", "o"])?;
    let first_index: HashMap<(usize, usize), usize> = first
        .pairs
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i))
        .collect();
    let box_to_first: Vec<usize> = (0..src.apex())
        .map(|e| first_index[&(src.atom(e, "i").unwrap(), src.atom(e, "o").unwrap())])
        .collect();
    let second_to_box: Vec<usize> = second
        .pairs
        .iter()
        .enumerate()
        .map(|(m, &(a, b))| {
            let atoms = HashMap::from([("i".to_string(), b), ("o".to_string(), a)]);
            tgt.lookup(second.span.left.apply(m), &atoms)
                .ok_or_else(|| structural("taco element missing from the bracketed composite"))
        })
        .collect::<Result<_>>()?;

    let mut perms: Vec<Vec<usize>> = fibers.iter().map(|f| (0..f.0.len()).collect()).collect();
    let mut checked: u128 = 0;
    loop {
        if checked >= budget {
            return Ok(LiftVerdict::BudgetExceeded { checked, total });
        }
        let mut choice = vec![0; first.pairs.len()];
        for (f, p) in fibers.iter().zip(&perms) {
            for (k, &m) in f.0.iter().enumerate() {
                choice[m] = f.1[p[k]];
            }
        }
        let table = box_to_first
            .iter()
            .map(|&m| second_to_box[choice[m]])
            .collect();
        let assoc = FinMap::new(tgt.apex(), table)?;
        checked += 1;
        if frame.discrepancy(&assoc)?.is_identity() {
            let associator = SpanCell::new(src.span.clone(), tgt.span.clone(), assoc)?;
            return Ok(LiftVerdict::Exists {
                associator,
                checked,
                total,
            });
        }
        let mut k = perms.len();
        let advanced = loop {
            if k == 0 {
                break false;
            }
            k -= 1;
            if next_permutation(&mut perms[k]) {
                break true;
            }
        };
        if !advanced {
            return Ok(LiftVerdict::NoLift {
                checked,
                total,
                reason: "no associator satisfies the pentagon".into(),
            });
        }
    }
}

/// The associator of a 2-truncated set that pairs taco elements fiberwise
/// by their unique component outside `{0, .., shared - 1}`, or uniquely when
/// a fiber is a singleton.
pub fn labelled_associator(t: &TwoTruncatedData, shared: usize) -> Result<PseudomonoidData> {
    let (first, second) = tacos(t)?;
    let mut by_fiber: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for m in 0..second.span.apex() {
        by_fiber
            .entry((second.span.left.apply(m), second.span.right.apply(m)))
            .or_default()
            .push(m);
    }
    let label = |(a, b): (usize, usize)| match (a >= shared, b >= shared) {
        (true, false) => Some(a),
        (false, true) => Some(b),
        _ => None,
    };
    let mut image = HashMap::new();
    for (m, &pair) in first.pairs.iter().enumerate() {
        let fiber = &by_fiber
            .get(&(first.span.left.apply(m), first.span.right.apply(m)))
            .ok_or_else(|| structural("taco fibers differ"))?;
        let target = if fiber.len() == 1 {
            fiber[0]
        } else {
            let l = label(pair)
                .ok_or_else(|| structural("fiber element has no distinguishing label"))?;
            *fiber
                .iter()
                .find(|&&c| label(second.pairs[c]) == Some(l))
                .ok_or_else(|| structural("no matching label in the opposite taco"))?
        };
        let (a, b) = second.pairs[target];
        image.insert(pair, (b, a));
    }
    PseudomonoidData::from_parts(&t.simplices, |i, o| image.get(&(i, o)).copied())
}

/// `(X_1)^n ← X_n → X_1` with legs `(e_1, ..., e_n)` and `e_out`.
pub fn n_fold_multiplication(x: &TruncSimplicialSet, n: usize) -> Result<Span> {
    if n == 0 || n > x.top() {
        return Err(Error::Truncation {
            needed: n,
            top: x.top(),
        });
    }
    let s = x.size(1);
    let edges = (1..=n)
        .map(|i| x.edge_map(n, Edge::Interior(i)))
        .collect::<Result<Vec<_>>>()?;
    let left = FinMap::from_fn(x.size(n), s.pow(n as u32), |e| {
        encode(
            &edges.iter().map(|m| m.apply(e)).collect::<Vec<_>>(),
            &vec![s; n],
        )
    });
    Span::new(left, x.edge_map(n, Edge::Out)?)
}

/// The 2-cell from the `n`-fold multiplication to the iterated binary
/// composite scheduled by `t`, sending a simplex to its triangle faces.
pub fn segal_cell(x: &TruncSimplicialSet, t: &Triangulation) -> Result<SpanCell> {
    let n = t.n;
    let source = n_fold_multiplication(x, n)?;
    let target = schedule_diagram(x.size(1), &mult_span(x), t).composite()?;
    let table = (0..x.size(n))
        .map(|e| {
            let atoms = t
                .triangles
                .iter()
                .map(|&tri| (triangle_label(tri), x.restrict(n, &tri, e)))
                .collect();
            target
                .lookup(source.left.apply(e), &atoms)
                .ok_or_else(|| structural("simplex faces do not form a composite element"))
        })
        .collect::<Result<Vec<_>>>()?;
    SpanCell::new(
        source,
        target.span.clone(),
        FinMap::new(target.apex(), table)?,
    )
}

/// Checks that every bracketing of `n` inputs is invertibly related to the
/// `n`-fold multiplication; returns the triangulations where it fails.
pub fn verify_n_fold(x: &TruncSimplicialSet, n: usize) -> Result<Vec<Triangulation>> {
    let mut bad = Vec::new();
    for t in enumerate_triangulations(n) {
        if !segal_cell(x, &t)?.is_invertible() {
            bad.push(t);
        }
    }
    Ok(bad)
}

/// `μ ∘ (μ × id)` as a span, the binary composite for three inputs.
pub fn left_bracketed_triple(p: &PseudomonoidData) -> Result<Span> {
    compose_spans(
        &crate::finspan::product_span(&p.mult, &Span::identity(p.base())),
        &p.mult,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{cyclic_group_nerve, interval_monoid_nerve, no_lift_family};
    use crate::finspan::spans_isomorphic;

    #[test]
    fn group_pseudomonoid_sizes() {
        let p = build_pseudomonoid(&cyclic_group_nerve(2, 4).unwrap()).unwrap();
        assert_eq!(p.mult.apex(), 4);
        assert_eq!(p.unit.apex(), 1);
        assert!(p.assoc.is_invertible() && p.lunit.is_invertible() && p.runit.is_invertible());
    }

    #[test]
    fn point_is_trivial() {
        let p = build_pseudomonoid(&cyclic_group_nerve(1, 4).unwrap()).unwrap();
        assert!(p.assoc.is_identity() && p.lunit.map.dom() == 1);
        assert!(verify_pentagon(&p).unwrap().holds);
        assert!(verify_triangle(&p).unwrap());
    }

    #[test]
    fn interval_multiplication_apex() {
        let p = build_pseudomonoid(&interval_monoid_nerve(2, 4).unwrap()).unwrap();
        assert_eq!(p.mult.apex(), 6);
    }

    #[test]
    fn two_segal_pseudomonoids_are_coherent() {
        for x in [
            cyclic_group_nerve(3, 4).unwrap(),
            interval_monoid_nerve(3, 4).unwrap(),
        ] {
            let p = build_pseudomonoid(&x).unwrap();
            assert!(verify_pentagon(&p).unwrap().holds);
            assert!(verify_triangle(&p).unwrap());
        }
    }

    #[test]
    fn pentagon_moves_agree_with_retriangulation() {
        // each pentagon stage, read through the faces of a 4-simplex, is the
        // corresponding triangulation, so each move is a change of triangulation
        let x = cyclic_group_nerve(3, 4).unwrap();
        let p = build_pseudomonoid(&x).unwrap();
        let frame = PentagonFrame::new(3, &p.mult).unwrap();
        let (lhs, rhs) = frame.sides(&p.assoc.map).unwrap();
        let fan0 = segal_cell(&x, &Triangulation::fan(4, 0)).unwrap();
        assert_eq!(fan0.target, frame.start().span);
        let via_lhs = vertical_compose(&fan0, &lhs).unwrap();
        let via_rhs = vertical_compose(&fan0, &rhs).unwrap();
        assert_eq!(via_lhs.map, via_rhs.map);
    }

    #[test]
    fn mutated_left_unitor_breaks_triangle() {
        let mut p = build_pseudomonoid(&cyclic_group_nerve(2, 4).unwrap()).unwrap();
        let t = p.lunit.map.table().to_vec();
        let mut swapped = t.clone();
        swapped.swap(0, 1);
        p.lunit.map = FinMap::new(p.lunit.map.cod(), swapped).unwrap();
        assert!(!verify_triangle(&p).unwrap());
    }

    #[test]
    fn taco_sizes() {
        let t = TwoTruncatedData::from_simplicial(&cyclic_group_nerve(2, 3).unwrap()).unwrap();
        let (a, b) = taco_spaces(&t).unwrap();
        assert_eq!((a.apex(), b.apex()), (8, 8));
        let nl = TwoTruncatedData::new(no_lift_family(1)).unwrap();
        let (a, b) = taco_spaces(&nl).unwrap();
        assert_eq!((a.apex(), b.apex()), (8, 8));
        assert!(spans_isomorphic(&a, &b).is_some());
    }

    #[test]
    fn empty_top_level_gives_empty_tacos() {
        let x = TruncSimplicialSet::build(&[0, 0, 0], |_, _, _| 0, |_, _, _| 0).unwrap();
        let (a, b) = taco_spaces(&TwoTruncatedData::new(x).unwrap()).unwrap();
        assert_eq!((a.apex(), b.apex()), (0, 0));
    }

    #[test]
    fn canonical_no_lift_discrepancy_swaps() {
        let t = TwoTruncatedData::new(no_lift_family(2)).unwrap();
        let p = labelled_associator(&t, 3).unwrap();
        let report = verify_pentagon(&p).unwrap();
        assert!(!report.holds);
        let corner: Vec<&MovedElement> = report
            .moved
            .iter()
            .filter(|m| m.edges == vec![1, 1, 1, 1])
            .collect();
        assert_eq!(corner.len(), 2);
        for m in corner {
            let [a, mid, b] = m.before;
            assert_eq!(mid, 2);
            assert_ne!(a, b);
            assert_eq!(m.after, [b, 2, a]);
        }
        for size in [0, 1] {
            let t = TwoTruncatedData::new(no_lift_family(size)).unwrap();
            assert!(
                verify_pentagon(&labelled_associator(&t, 3).unwrap())
                    .unwrap()
                    .holds
            );
        }
    }

    #[test]
    fn lift_search_verdicts() {
        for (size, expected) in [(0, true), (1, true), (2, false)] {
            let t = TwoTruncatedData::new(no_lift_family(size)).unwrap();
            let v = search_associator_lift(&t, 1 << 20).unwrap();
            assert_eq!(v.exists(), expected, "|A| = {size}");
        }
        let t = TwoTruncatedData::new(no_lift_family(2)).unwrap();
        assert!(matches!(
            search_associator_lift(&t, 3).unwrap(),
            LiftVerdict::BudgetExceeded {
                checked: 3,
                total: 16
            }
        ));
    }

    #[test]
    fn lift_of_group_is_canonical() {
        let x = cyclic_group_nerve(2, 4).unwrap();
        let t = TwoTruncatedData::from_simplicial(&x).unwrap();
        let LiftVerdict::Exists { associator, .. } = search_associator_lift(&t, 100).unwrap()
        else {
            panic!("expected a lift");
        };
        assert_eq!(associator, build_pseudomonoid(&x).unwrap().assoc);
    }

    #[test]
    fn n_fold_bracketings() {
        let x = cyclic_group_nerve(2, 4).unwrap();
        assert_eq!(n_fold_multiplication(&x, 1).unwrap(), Span::identity(2));
        assert_eq!(n_fold_multiplication(&x, 2).unwrap(), mult_span(&x));
        for n in 2..=4 {
            assert!(verify_n_fold(&x, n).unwrap().is_empty());
        }
        let p = build_pseudomonoid(&x).unwrap();
        let cell = segal_cell(&x, &Triangulation::fan(3, 0)).unwrap();
        assert_eq!(cell.target, left_bracketed_triple(&p).unwrap());
        assert!(cell.is_invertible());
    }
}
