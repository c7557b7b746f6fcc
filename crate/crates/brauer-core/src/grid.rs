//! The subduction grid for the restriction `B_f(x) ↓ B_{f1}(x) × B_{f2}(x)`:
//! node triples `<w; w1, w2>`, coupling layers, per-node configurations, and
//! the subduction graph with DOT export.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::PermutationLattice;
use crate::rep::{self, ibar_self};
use crate::shape::Shape;

/// A pair of lattices of orders `f1` and `f2` labelling a split basis vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePair {
    pub w1: PermutationLattice,
    pub w2: PermutationLattice,
}

impl LatticePair {
    pub fn new(w1: PermutationLattice, w2: PermutationLattice) -> Self {
        Self { w1, w2 }
    }
}

impl fmt::Display for LatticePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", self.w1, self.w2)
    }
}

/// Coupling mode for [`pair_coupled`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingMode {
    Plain,
    Bar,
}

/// A node `<w; w1, w2>` of the subduction grid; one SDC unknown.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridNode {
    pub w: PermutationLattice,
    pub pair: LatticePair,
}

impl fmt::Display for GridNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}; {}>", self.w, self.pair)
    }
}

/// Per-node configuration of an `i`-layer, by which side of the node is
/// sign-flipped at the layer index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Configuration {
    /// Neither `w` nor the pair is flipped.
    Crossing,
    /// Only `w` is flipped.
    HBridge,
    /// Only the pair is flipped.
    VBridge,
    /// Both are flipped.
    Singlet,
}

impl Configuration {
    pub fn label(self) -> &'static str {
        match self {
            Configuration::Crossing => "crossing",
            Configuration::HBridge => "hbridge",
            Configuration::VBridge => "vbridge",
            Configuration::Singlet => "singlet",
        }
    }
}

/// The six labels `(f, λ, f1, f2, λ1, λ2)` determining a grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSignature {
    pub f: usize,
    pub shape: Shape,
    pub f1: usize,
    pub f2: usize,
    pub shape1: Shape,
    pub shape2: Shape,
}

impl GridSignature {
    pub fn validate(&self) -> Result<()> {
        if self.f1 + self.f2 != self.f || self.f1 == 0 || self.f2 == 0 {
            return Err(Error::BadSignature {
                detail: format!("split {} + {} does not give f = {}", self.f1, self.f2, self.f),
            });
        }
        for (shape, f, name) in [
            (&self.shape, self.f, "shape"),
            (&self.shape1, self.f1, "shape1"),
            (&self.shape2, self.f2, "shape2"),
        ] {
            if !shape.in_upsilon(f) {
                return Err(Error::BadSignature {
                    detail: format!("{name} = {shape} is not a level-{f} label"),
                });
            }
        }
        Ok(())
    }

    /// Generator indices of the subalgebra: `1..f1-1` and `f1+1..f-1`;
    /// `i = f1` crosses the split and is excluded.
    pub fn legal_indices(&self) -> Vec<usize> {
        legal_indices(self.f1, self.f2)
    }
}

impl fmt::Display for GridSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}; {}, {}; {}, {})",
            self.f, self.shape, self.f1, self.f2, self.shape1, self.shape2
        )
    }
}

pub fn legal_indices(f1: usize, f2: usize) -> Vec<usize> {
    (1..f1).chain(f1 + 1..f1 + f2).collect()
}

fn check_layer_index(i: usize, f1: usize, f2: usize) -> Result<()> {
    if i == 0 || i == f1 || i >= f1 + f2 {
        return Err(Error::IllegalLayerIndex { index: i, f1, f2 });
    }
    Ok(())
}

/// Coupling of pairs: the `w1` components couple at `i` (for `i < f1`) or the
/// `w2` components couple at `i - f1` (for `i > f1`), the other component
/// being equal.
pub fn pair_coupled(
    p: &LatticePair,
    q: &LatticePair,
    i: usize,
    mode: CouplingMode,
) -> Result<bool> {
    let f1 = p.w1.order();
    let f2 = p.w2.order();
    if q.w1.order() != f1 || q.w2.order() != f2 {
        return Err(Error::LatticeMismatch);
    }
    check_layer_index(i, f1, f2)?;
    let coupled = |u: &PermutationLattice, v: &PermutationLattice, k: usize| match mode {
        CouplingMode::Plain => rep::i_coupled(u, v, k),
        CouplingMode::Bar => rep::ibar_coupled(u, v, k),
    };
    if i < f1 {
        Ok(p.w2 == q.w2 && coupled(&p.w1, &q.w1, i)?)
    } else {
        Ok(p.w1 == q.w1 && coupled(&p.w2, &q.w2, i - f1)?)
    }
}

/// Whether the pair is sign-flipped at layer `i` (its own bar-coupling).
pub fn pair_ibar_self(p: &LatticePair, i: usize) -> Result<bool> {
    let f1 = p.w1.order();
    check_layer_index(i, f1, p.w2.order())?;
    Ok(if i < f1 {
        ibar_self(&p.w1, i)
    } else {
        ibar_self(&p.w2, i - f1)
    })
}

/// Nodes couple at `i` when both the `w` components and the pairs couple.
pub fn node_coupled(n: &GridNode, m: &GridNode, i: usize) -> Result<bool> {
    Ok(rep::i_coupled(&n.w, &m.w, i)? && pair_coupled(&n.pair, &m.pair, i, CouplingMode::Plain)?)
}

/// Classifies a node within its `i`-layer. Self-`i`-coupling always holds,
/// so only the two sign-flip tests matter.
pub fn classify_node(n: &GridNode, i: usize) -> Result<Configuration> {
    check_layer_index(i, n.pair.w1.order(), n.pair.w2.order())?;
    let w_flip = ibar_self(&n.w, i);
    let pair_flip = pair_ibar_self(&n.pair, i)?;
    Ok(match (w_flip, pair_flip) {
        (false, false) => Configuration::Crossing,
        (true, false) => Configuration::HBridge,
        (false, true) => Configuration::VBridge,
        (true, true) => Configuration::Singlet,
    })
}

/// Lexicographic node order on `(w, w1, w2)` under the canonical lattice
/// order; the order fixing the Young-Yamanouchi phase convention.
pub fn compare_nodes(n: &GridNode, m: &GridNode) -> Result<std::cmp::Ordering> {
    n.w.compare(&m.w)?;
    n.pair.w1.compare(&m.pair.w1)?;
    n.pair.w2.compare(&m.pair.w2)?;
    Ok(n.cmp(m))
}

/// One `i`-layer of a grid: edges between distinct coupled nodes and the
/// per-node configuration tags.
#[derive(Debug, Clone)]
pub struct Layer {
    pub i: usize,
    pub edges: Vec<(usize, usize)>,
    pub configurations: Vec<Configuration>,
}

/// The set of all nodes of a signature, in canonical order, with one layer
/// per legal generator index.
#[derive(Debug, Clone)]
pub struct SubductionGrid {
    signature: GridSignature,
    nodes: Vec<GridNode>,
    index: HashMap<GridNode, usize>,
    layers: Vec<Layer>,
}

impl SubductionGrid {
    pub fn build(signature: GridSignature) -> Result<Self> {
        signature.validate()?;
        let ws = PermutationLattice::enumerate(signature.f, &signature.shape);
        let w1s = PermutationLattice::enumerate(signature.f1, &signature.shape1);
        let w2s = PermutationLattice::enumerate(signature.f2, &signature.shape2);
        let mut nodes = Vec::with_capacity(ws.len() * w1s.len() * w2s.len());
        for w in &ws {
            for w1 in &w1s {
                for w2 in &w2s {
                    nodes.push(GridNode {
                        w: w.clone(),
                        pair: LatticePair::new(w1.clone(), w2.clone()),
                    });
                }
            }
        }
        nodes.sort();
        let index: HashMap<_, _> = nodes
            .iter()
            .cloned()
            .enumerate()
            .map(|(k, n)| (n, k))
            .collect();

        let mut layers = Vec::new();
        for i in signature.legal_indices() {
            let mut configurations = Vec::with_capacity(nodes.len());
            let mut edges = Vec::new();
            for (a, node) in nodes.iter().enumerate() {
                configurations.push(classify_node(node, i)?);
                // neighbors: big-side theta set times pair-side theta set
                let w_partners = rep::theta_set(&node.w, i)?;
                let pair_partners: Vec<LatticePair> = if i < signature.f1 {
                    rep::theta_set(&node.pair.w1, i)?
                        .into_iter()
                        .map(|u| LatticePair::new(u, node.pair.w2.clone()))
                        .collect()
                } else {
                    rep::theta_set(&node.pair.w2, i - signature.f1)?
                        .into_iter()
                        .map(|u| LatticePair::new(node.pair.w1.clone(), u))
                        .collect()
                };
                for wp in &w_partners {
                    for pp in &pair_partners {
                        let m = GridNode {
                            w: wp.clone(),
                            pair: pp.clone(),
                        };
                        let b = index[&m];
                        if b > a {
                            edges.push((a, b));
                        }
                    }
                }
            }
            edges.sort_unstable();
            edges.dedup();
            layers.push(Layer {
                i,
                edges,
                configurations,
            });
        }

        Ok(Self {
            signature,
            nodes,
            index,
            layers,
        })
    }

    pub fn signature(&self) -> &GridSignature {
        &self.signature
    }

    pub fn nodes(&self) -> &[GridNode] {
        &self.nodes
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn index_of(&self, node: &GridNode) -> Option<usize> {
        self.index.get(node).copied()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer(&self, i: usize) -> Option<&Layer> {
        self.layers.iter().find(|l| l.i == i)
    }

    /// Configuration counts per layer, in [`Configuration`] declaration
    /// order: crossing, hbridge, vbridge, singlet.
    pub fn configuration_histogram(&self, i: usize) -> Option<[usize; 4]> {
        let layer = self.layer(i)?;
        let mut h = [0usize; 4];
        for c in &layer.configurations {
            let k = match c {
                Configuration::Crossing => 0,
                Configuration::HBridge => 1,
                Configuration::VBridge => 2,
                Configuration::Singlet => 3,
            };
            h[k] += 1;
        }
        Some(h)
    }

    /// DOT rendering of the subduction graph: one vertex per node, one edge
    /// per coupled pair labelled by the layer index. With `color_layer` set,
    /// vertices are filled by their configuration in that layer.
    pub fn export_dot(&self, color_layer: Option<usize>) -> String {
        let mut out = String::new();
        out.push_str("graph subduction {\n");
        out.push_str("  node [shape=box, fontname=\"monospace\"];\n");
        let colors = self.layers.iter().find(|l| Some(l.i) == color_layer);
        for (k, node) in self.nodes.iter().enumerate() {
            let mut attrs = format!("label=\"{node}\"");
            if let Some(layer) = colors {
                let color = match layer.configurations[k] {
                    Configuration::Crossing => "white",
                    Configuration::HBridge => "lightblue",
                    Configuration::VBridge => "lightsalmon",
                    Configuration::Singlet => "palegreen",
                };
                attrs.push_str(&format!(", style=filled, fillcolor={color}"));
            }
            out.push_str(&format!("  n{k} [{attrs}];\n"));
        }
        for layer in &self.layers {
            for &(a, b) in &layer.edges {
                out.push_str(&format!("  n{a} -- n{b} [label=\"{}\"];\n", layer.i));
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(elements: &[i32]) -> PermutationLattice {
        PermutationLattice::from_elements(elements.to_vec()).unwrap()
    }

    fn sig(f: usize, s: &str, f1: usize, f2: usize, s1: &str, s2: &str) -> GridSignature {
        GridSignature {
            f,
            shape: s.parse().unwrap(),
            f1,
            f2,
            shape1: s1.parse().unwrap(),
            shape2: s2.parse().unwrap(),
        }
    }

    #[test]
    fn signature_validation() {
        assert!(sig(3, "[1]", 2, 1, "[]", "[1]").validate().is_ok());
        assert!(sig(3, "[1]", 1, 1, "[1]", "[1]").validate().is_err());
        assert!(sig(3, "[2]", 2, 1, "[]", "[1]").validate().is_err());
        assert_eq!(sig(4, "[2]", 2, 2, "[2]", "[2]").legal_indices(), vec![1, 3]);
        assert_eq!(sig(2, "[2]", 1, 1, "[1]", "[1]").legal_indices(), Vec::<usize>::new());
        assert_eq!(sig(3, "[1]", 1, 2, "[1]", "[]").legal_indices(), vec![2]);
    }

    #[test]
    fn pair_coupling() {
        let p = LatticePair::new(lat(&[1, -1]), lat(&[1]));
        assert!(pair_coupled(&p, &p, 1, CouplingMode::Plain).unwrap());
        assert!(pair_coupled(&p, &p, 1, CouplingMode::Bar).unwrap());
        let q = LatticePair::new(lat(&[1]), lat(&[1, -1]));
        assert!(pair_coupled(&q, &q, 2, CouplingMode::Bar).unwrap());
        assert!(pair_coupled(&p, &p, 2, CouplingMode::Plain).is_err());
        assert!(pair_coupled(&q, &q, 1, CouplingMode::Plain).is_err());
    }

    #[test]
    fn node_classification() {
        // f = 3, split 2 + 1
        let w2 = lat(&[1]);
        let node = |w: &[i32], w1: &[i32]| GridNode {
            w: lat(w),
            pair: LatticePair::new(lat(w1), w2.clone()),
        };
        assert_eq!(
            classify_node(&node(&[1, 1, -1], &[1, 1]), 1).unwrap(),
            Configuration::Crossing
        );
        assert_eq!(
            classify_node(&node(&[1, -1, 1], &[1, 1]), 1).unwrap(),
            Configuration::HBridge
        );
        assert_eq!(
            classify_node(&node(&[1, 1, -1], &[1, -1]), 1).unwrap(),
            Configuration::VBridge
        );
        assert_eq!(
            classify_node(&node(&[1, -1, 1], &[1, -1]), 1).unwrap(),
            Configuration::Singlet
        );
    }

    #[test]
    fn grid_construction() {
        let g = SubductionGrid::build(sig(2, "[2]", 1, 1, "[1]", "[1]")).unwrap();
        assert_eq!(g.num_nodes(), 1);
        assert!(g.layers().is_empty());

        let g = SubductionGrid::build(sig(3, "[1]", 2, 1, "[]", "[1]")).unwrap();
        assert_eq!(g.num_nodes(), 3);
        let ws: Vec<_> = g.nodes().iter().map(|n| n.w.to_string()).collect();
        assert_eq!(ws, vec!["(1,-1,1)", "(1,1,-1)", "(1,2,-2)"]);

        let g = SubductionGrid::build(sig(4, "[2]", 2, 2, "[2]", "[2]")).unwrap();
        assert_eq!(g.num_nodes(), 6);
        assert_eq!(g.layers().len(), 2);
    }

    #[test]
    fn histogram_partitions_nodes() {
        let g = SubductionGrid::build(sig(3, "[1]", 2, 1, "[]", "[1]")).unwrap();
        let h = g.configuration_histogram(1).unwrap();
        assert_eq!(h.iter().sum::<usize>(), g.num_nodes());
    }

    #[test]
    fn node_coupling_is_an_equivalence_per_layer() {
        let g = SubductionGrid::build(sig(4, "[2]", 2, 2, "[2]", "[2]")).unwrap();
        for layer in g.layers() {
            let i = layer.i;
            let nodes = g.nodes();
            for a in nodes {
                assert!(node_coupled(a, a, i).unwrap());
                for b in nodes {
                    let ab = node_coupled(a, b, i).unwrap();
                    assert_eq!(ab, node_coupled(b, a, i).unwrap());
                    for c in nodes {
                        if ab && node_coupled(b, c, i).unwrap() {
                            assert!(node_coupled(a, c, i).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dot_output() {
        let g = SubductionGrid::build(sig(3, "[1]", 2, 1, "[]", "[1]")).unwrap();
        let dot = g.export_dot(Some(1));
        assert!(dot.starts_with("graph subduction {"));
        assert!(dot.contains("n0 [label=\"<(1,-1,1); (1,-1), (1)>\""));
        assert!(dot.trim_end().ends_with('}'));
        let g1 = SubductionGrid::build(sig(2, "[2]", 1, 1, "[1]", "[1]")).unwrap();
        let dot1 = g1.export_dot(None);
        assert!(dot1.contains("n0 ["));
        assert!(!dot1.contains("--"));
    }
}
