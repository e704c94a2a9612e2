//! Layered string diagrams of spans on a single strand type.
//!
//! A diagram is a list of layers, each a row of blocks read left to right.
//! Its value is the left-nested composite of the layer products. Elements of
//! the composite are addressed by their source value together with the apex
//! elements ("atoms") of the labelled nodes; unlabelled nodes must have
//! injective left legs so that they are determined by their inputs. A 2-cell
//! applied to a box inside a diagram is evaluated through these addresses,
//! which realizes whiskering by identities and the canonical rebracketing
//! identifications.

use std::collections::HashMap;

use crate::error::{Result, structural};
use crate::finspan::{FinMap, Span, SpanCell, compose_with_pullback, decode, encode, product_span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    Wire,
    Node {
        span: Span,
        inputs: usize,
        outputs: usize,
        label: Option<String>,
    },
}

impl Block {
    pub fn node(label: &str, span: &Span, inputs: usize, outputs: usize) -> Block {
        Block::Node {
            span: span.clone(),
            inputs,
            outputs,
            label: Some(label.to_string()),
        }
    }

    pub fn structural(span: &Span, inputs: usize, outputs: usize) -> Block {
        Block::Node {
            span: span.clone(),
            inputs,
            outputs,
            label: None,
        }
    }

    fn arity(&self) -> (usize, usize) {
        match self {
            Block::Wire => (1, 1),
            Block::Node {
                inputs, outputs, ..
            } => (*inputs, *outputs),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    /// Size of the strand set.
    pub base: usize,
    pub inputs: usize,
    pub layers: Vec<Vec<Block>>,
}

/// Boundary strand values and labelled atoms of one composite element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub boundaries: Vec<Vec<usize>>,
    pub atoms: Vec<usize>,
}

/// The composite span of a diagram with its element addresses.
#[derive(Clone, Debug)]
pub struct Composite {
    pub span: Span,
    pub inputs: usize,
    pub outputs: usize,
    pub labels: Vec<String>,
    pub records: Vec<Record>,
    index: HashMap<(usize, Vec<usize>), usize>,
}

impl Diagram {
    pub fn new(base: usize, inputs: usize, layers: Vec<Vec<Block>>) -> Self {
        Diagram {
            base,
            inputs,
            layers,
        }
    }

    fn power(&self, k: usize) -> usize {
        self.base.pow(k as u32)
    }

    fn layer_span(&self, layer: &[Block]) -> Result<Span> {
        let mut span = Span::identity(1);
        for b in layer {
            let s = match b {
                Block::Wire => Span::identity(self.base),
                Block::Node {
                    span,
                    inputs,
                    outputs,
                    ..
                } => {
                    if span.src != self.power(*inputs) || span.tgt != self.power(*outputs) {
                        return Err(structural("node span does not match its arity"));
                    }
                    span.clone()
                }
            };
            span = product_span(&span, &s);
        }
        Ok(span)
    }

    pub fn composite(&self) -> Result<Composite> {
        let mut arity = self.inputs;
        let mut spans = Vec::with_capacity(self.layers.len());
        let mut arities = vec![arity];
        for layer in &self.layers {
            let (ins, outs) = layer
                .iter()
                .map(Block::arity)
                .fold((0, 0), |(a, b), (c, d)| (a + c, b + d));
            if ins != arity {
                return Err(structural(format!(
                    "layer consumes {ins} strands but {arity} are present"
                )));
            }
            arity = outs;
            arities.push(arity);
            spans.push(self.layer_span(layer)?);
        }
        let (span, chains) = if spans.is_empty() {
            let id = Span::identity(self.power(self.inputs));
            let chains = (0..id.apex()).map(|x| vec![x]).collect::<Vec<_>>();
            (id, chains)
        } else {
            let mut span = spans[0].clone();
            let mut chains: Vec<Vec<usize>> = (0..span.apex()).map(|a| vec![a]).collect();
            for next in &spans[1..] {
                let (composed, pb) = compose_with_pullback(&span, next)?;
                chains = (0..pb.apex.size)
                    .map(|p| {
                        let (c, l) = pb.pair(p);
                        let mut ch = chains[c].clone();
                        ch.push(l);
                        ch
                    })
                    .collect();
                span = composed;
            }
            (span, chains)
        };

        let mut labels: Vec<String> = self
            .layers
            .iter()
            .flatten()
            .filter_map(|b| match b {
                Block::Node { label: Some(l), .. } => Some(l.clone()),
                _ => None,
            })
            .collect();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(structural("duplicate node label"));
        }

        let mut records = Vec::with_capacity(chains.len());
        let mut index = HashMap::with_capacity(chains.len());
        for (e, chain) in chains.iter().enumerate() {
            let mut boundaries = Vec::with_capacity(arities.len());
            let mut atoms = vec![0; labels.len()];
            if self.layers.is_empty() {
                boundaries.push(decode(chain[0], &vec![self.base; self.inputs]));
            } else {
                boundaries.push(decode(
                    spans[0].left.apply(chain[0]),
                    &vec![self.base; arities[0]],
                ));
                for (k, layer) in self.layers.iter().enumerate() {
                    let radices: Vec<usize> = layer
                        .iter()
                        .map(|b| match b {
                            Block::Wire => self.base,
                            Block::Node { span, .. } => span.apex(),
                        })
                        .collect();
                    let parts = decode(chain[k], &radices);
                    for (b, &p) in layer.iter().zip(&parts) {
                        if let Block::Node { label: Some(l), .. } = b {
                            atoms[labels.binary_search(l).unwrap()] = p;
                        }
                    }
                    boundaries.push(decode(
                        spans[k].right.apply(chain[k]),
                        &vec![self.base; arities[k + 1]],
                    ));
                }
            }
            if index
                .insert((span.left.apply(e), atoms.clone()), e)
                .is_some()
            {
                return Err(structural(
                    "labelled atoms do not determine composite elements",
                ));
            }
            records.push(Record { boundaries, atoms });
        }
        Ok(Composite {
            span,
            inputs: self.inputs,
            outputs: arity,
            labels,
            records,
            index,
        })
    }
}

impl Composite {
    pub fn apex(&self) -> usize {
        self.span.apex()
    }

    pub fn source_value(&self, e: usize) -> usize {
        self.span.left.apply(e)
    }

    pub fn atom(&self, e: usize, label: &str) -> Option<usize> {
        self.labels
            .binary_search_by(|l| l.as_str().cmp(label))
            .ok()
            .map(|i| self.records[e].atoms[i])
    }

    /// The element with the given source value and atoms.
    pub fn lookup(&self, source: usize, atoms: &HashMap<String, usize>) -> Option<usize> {
        let key: Option<Vec<usize>> = self.labels.iter().map(|l| atoms.get(l).copied()).collect();
        self.index.get(&(source, key?)).copied()
    }

    pub fn atoms_of(&self, e: usize) -> HashMap<String, usize> {
        self.labels
            .iter()
            .cloned()
            .zip(self.records[e].atoms.iter().copied())
            .collect()
    }
}

/// A 2-cell between two box diagrams, placed at a layer and strand of a
/// context diagram. The box diagrams carry the context's labels for the
/// nodes they cover; `rename` is applied to labels after the move.
pub struct Move<'a> {
    pub layer: usize,
    pub strand: usize,
    pub box_source: &'a Composite,
    pub box_target: &'a Composite,
    pub cell: &'a FinMap,
    pub rename: Vec<(String, String)>,
}

impl Move<'_> {
    /// The whiskered cell from `source` to `target`, validated as a 2-cell.
    pub fn apply(&self, source: &Composite, target: &Composite, base: usize) -> Result<SpanCell> {
        let width = self.box_source.inputs;
        let mut table = Vec::with_capacity(source.apex());
        for e in 0..source.apex() {
            let boundary = source.records[e]
                .boundaries
                .get(self.layer)
                .ok_or_else(|| structural("move layer outside the diagram"))?;
            if self.strand + width > boundary.len() {
                return Err(structural("move box exceeds the strands present"));
            }
            let value = encode(
                &boundary[self.strand..self.strand + width],
                &vec![base; width],
            );
            let mut atoms = source.atoms_of(e);
            let box_atoms: HashMap<String, usize> = self
                .box_source
                .labels
                .iter()
                .map(|l| (l.clone(), atoms.remove(l).unwrap_or(usize::MAX)))
                .collect();
            let inside = self.box_source.lookup(value, &box_atoms).ok_or_else(|| {
                structural(format!("element {e} has no counterpart in the move box"))
            })?;
            let moved = self.cell.apply(inside);
            let (bs, bt) = (&self.box_source.span, &self.box_target.span);
            if bs.left.apply(inside) != bt.left.apply(moved)
                || bs.right.apply(inside) != bt.right.apply(moved)
            {
                return Err(structural(format!(
                    "cell moves box element {inside} off its boundary"
                )));
            }
            atoms.extend(self.box_target.atoms_of(moved));
            for (from, to) in &self.rename {
                if let Some(v) = atoms.remove(from) {
                    atoms.insert(to.clone(), v);
                }
            }
            let image = target
                .lookup(source.source_value(e), &atoms)
                .ok_or_else(|| {
                    structural(format!(
                        "moved element {e} is missing from the target diagram"
                    ))
                })?;
            table.push(image);
        }
        SpanCell::new(
            source.span.clone(),
            target.span.clone(),
            FinMap::new(target.apex(), table)?,
        )
    }
}

/// Label for the node of triangle `(i, j, k)`.
pub fn triangle_label(t: [usize; 3]) -> String {
    format!("{}{}{}", t[0], t[1], t[2])
}

/// One binary node per layer, scheduled by a post-order walk of the
/// triangulation's dual tree rooted at the side `(0, n)`.
pub fn schedule_diagram(base: usize, mult: &Span, t: &crate::simplicial::Triangulation) -> Diagram {
    fn walk(lo: usize, hi: usize, t: &crate::simplicial::Triangulation, out: &mut Vec<[usize; 3]>) {
        if hi - lo < 2 {
            return;
        }
        let k = (lo + 1..hi)
            .find(|&k| t.contains([lo, k, hi]))
            .expect("triangulation covers every sub-polygon");
        walk(lo, k, t, out);
        walk(k, hi, t, out);
        out.push([lo, k, hi]);
    }
    let mut order = Vec::new();
    walk(0, t.n, t, &mut order);
    let mut edges: Vec<(usize, usize)> = (0..t.n).map(|i| (i, i + 1)).collect();
    let mut layers = Vec::new();
    for tri in order {
        let pos = edges.iter().position(|&e| e == (tri[0], tri[1])).unwrap();
        let mut layer: Vec<Block> = (0..edges.len() - 1).map(|_| Block::Wire).collect();
        layer[pos] = Block::node(&triangle_label(tri), mult, 2, 1);
        edges.splice(pos..pos + 2, [(tri[0], tri[2])]);
        layers.push(layer);
    }
    Diagram::new(base, t.n, layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finspan::{FinMap, tensorator_cell};
    use crate::simplicial::Triangulation;

    fn addition(modulus: usize) -> Span {
        // apex = pairs, left = identity, right = sum
        Span::new(
            FinMap::identity(modulus * modulus),
            FinMap::from_fn(modulus * modulus, modulus, |p| {
                (p / modulus + p % modulus) % modulus
            }),
        )
        .unwrap()
    }

    #[test]
    fn composite_of_stacked_nodes() {
        let mu = addition(3);
        let d = Diagram::new(
            3,
            3,
            vec![
                vec![Block::node("a", &mu, 2, 1), Block::Wire],
                vec![Block::node("b", &mu, 2, 1)],
            ],
        );
        let c = d.composite().unwrap();
        assert_eq!(c.apex(), 27);
        for e in 0..c.apex() {
            let r = &c.records[e];
            assert_eq!(r.boundaries.len(), 3);
            let sum: usize = r.boundaries[0].iter().sum();
            assert_eq!(r.boundaries[2][0], sum % 3);
        }
    }

    #[test]
    fn empty_diagram_is_identity() {
        let c = Diagram::new(2, 2, vec![]).composite().unwrap();
        assert_eq!(c.span, Span::identity(4));
        assert_eq!(c.records[3].boundaries, vec![vec![1, 1]]);
    }

    #[test]
    fn tensorator_as_move() {
        let mu = addition(2);
        let src = Diagram::new(
            2,
            4,
            vec![
                vec![Block::node("f", &mu, 2, 1), Block::Wire, Block::Wire],
                vec![Block::Wire, Block::node("g", &mu, 2, 1)],
            ],
        )
        .composite()
        .unwrap();
        let tgt = Diagram::new(
            2,
            4,
            vec![
                vec![Block::Wire, Block::Wire, Block::node("g", &mu, 2, 1)],
                vec![Block::node("f", &mu, 2, 1), Block::Wire],
            ],
        )
        .composite()
        .unwrap();
        let cell = tensorator_cell(&mu, &mu).unwrap();
        assert_eq!(cell.source, src.span);
        assert_eq!(cell.target, tgt.span);
        let mv = Move {
            layer: 0,
            strand: 0,
            box_source: &src,
            box_target: &tgt,
            cell: &cell.map,
            rename: vec![],
        };
        let moved = mv.apply(&src, &tgt, 2).unwrap();
        assert_eq!(moved.map, cell.map);
        for e in 0..src.apex() {
            assert_eq!(src.atoms_of(e), tgt.atoms_of(moved.map.apply(e)));
        }
    }

    #[test]
    fn schedules_follow_triangulations() {
        let mu = addition(2);
        let fan = schedule_diagram(2, &mu, &Triangulation::fan(4, 0));
        assert_eq!(fan.layers.len(), 3);
        let labels = fan.composite().unwrap().labels;
        assert_eq!(labels, vec!["012", "023", "034"]);
        let other = schedule_diagram(2, &mu, &Triangulation::fan(4, 4));
        let c = other.composite().unwrap();
        assert_eq!(c.labels, vec!["014", "124", "234"]);
        assert_eq!(c.apex(), 16);
    }
}
