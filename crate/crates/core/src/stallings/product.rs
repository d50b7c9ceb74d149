use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::freewords::{Letter, ReducedWord};

use super::StallingsGraph;

/// A connected component of the fiber product `Θ₁ ×_{R_k} Θ₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductComponent {
    /// Contains the pair of base vertices.
    pub basepointed: bool,
    /// Vertex pairs; the first one is where the search started.
    pub vertices: Vec<(usize, usize)>,
    /// Positive edges as indices into `vertices`.
    pub edges: Vec<(usize, usize, Letter)>,
    /// `|E| − |V| + 1`.
    pub rank: usize,
}

impl ProductComponent {
    /// Core graph of the component, based at its first vertex. For the basepointed
    /// component this is the graph of `H₁ ∩ H₂`.
    pub fn to_graph(&self, g1: &StallingsGraph) -> StallingsGraph {
        let edges: Vec<(usize, Letter, usize)> =
            self.edges.iter().map(|&(s, t, x)| (s, x, t)).collect();
        StallingsGraph::fold_edges(g1.alphabet(), self.vertices.len(), 0, &edges)
            .expect("component edges are in range")
    }

    /// Words `c₁, c₂` labelling paths from the bases of `Θ₁, Θ₂` to the first
    /// vertex of the component; the component's loops there give
    /// `c₁⁻¹H₁c₁ ∩ c₂⁻¹H₂c₂`.
    pub fn conjugators(&self, g1: &StallingsGraph, g2: &StallingsGraph) -> (ReducedWord, ReducedWord) {
        let (u, v) = self.vertices[0];
        let p = |g: &StallingsGraph, w: usize| {
            let tree = g.spanning_tree();
            ReducedWord::from_reduced(g.alphabet(), StallingsGraph::tree_path(&tree, w))
                .expect("tree path is reduced")
        };
        (p(g1, u), p(g2, v))
    }
}

/// Components of the fiber product that carry a nontrivial intersection,
/// plus the basepointed component (always first, even when it has rank 0).
///
/// Only components of rank ≥ 1 are returned for non-base pairs. Every such
/// component contains a pair `(u, v)` where `u` is the base or a vertex of
/// degree ≥ 3 of `Θ₁` (and likewise for `Θ₂`), so the search is seeded from
/// the smaller of `D₁ × V₂` and `V₁ × D₂`.
pub fn fiber_product(g1: &StallingsGraph, g2: &StallingsGraph) -> Result<Vec<ProductComponent>> {
    if g1.alphabet() != g2.alphabet() {
        return Err(Error::AlphabetMismatch {
            left: g1.alphabet().rank(),
            right: g2.alphabet().rank(),
        });
    }
    let n2 = g2.num_vertices();
    let key = |u: usize, v: usize| u * n2 + v;
    let mut seen: HashSet<usize> = HashSet::new();
    let mut out = Vec::new();
    out.push(explore(g1, g2, (0, 0), &mut seen, key));

    let d1 = g1.branch_vertices();
    let d2 = g2.branch_vertices();
    let seeds: Vec<(usize, usize)> = if d1.len() * n2 <= g1.num_vertices() * d2.len() {
        d1.iter()
            .flat_map(|&u| g2.vertices().map(move |v| (u, v)))
            .collect()
    } else {
        g1.vertices()
            .flat_map(|u| d2.iter().map(move |&v| (u, v)))
            .collect()
    };
    for (u, v) in seeds {
        if seen.contains(&key(u, v)) {
            continue;
        }
        let c = explore(g1, g2, (u, v), &mut seen, key);
        if c.rank >= 1 {
            out.push(c);
        }
    }
    Ok(out)
}

fn explore(
    g1: &StallingsGraph,
    g2: &StallingsGraph,
    start: (usize, usize),
    seen: &mut HashSet<usize>,
    key: impl Fn(usize, usize) -> usize,
) -> ProductComponent {
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut vertices = vec![start];
    index.insert(start, 0);
    seen.insert(key(start.0, start.1));
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (u, v) = vertices[i];
        for (x, t1) in g1.neighbours(u) {
            let Some(t2) = g2.target(v, x) else { continue };
            let j = match index.get(&(t1, t2)) {
                Some(&j) => j,
                None => {
                    let j = vertices.len();
                    vertices.push((t1, t2));
                    index.insert((t1, t2), j);
                    seen.insert(key(t1, t2));
                    queue.push_back(j);
                    j
                }
            };
            if x.is_positive() {
                edges.push((i, j, x));
            }
        }
    }
    let rank = edges.len() + 1 - vertices.len();
    ProductComponent {
        basepointed: start == (0, 0) || index.contains_key(&(0, 0)),
        vertices,
        edges,
        rank,
    }
}
