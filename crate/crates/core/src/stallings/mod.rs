//! Stallings graphs of finitely generated subgroups of `F_k`.
//!
//! A graph is stored in canonical form: the base is vertex 0 and the rest are
//! numbered by breadth-first search from the base, exploring labels in letter
//! order. Two graphs are therefore equal iff they are isomorphic as
//! base-pointed labelled graphs, i.e. iff they represent the same subgroup.

mod decomposition;
mod fold;
mod format;
mod product;

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::freewords::{Alphabet, Letter, ReducedWord};

pub use decomposition::{central_decomposition, CentralDecomposition, OuterLoop};
pub use format::GraphDoc;
pub use product::{fiber_product, ProductComponent};

pub(crate) use fold::Folder;
use fold::NO_EDGE;

/// Folded core graph with a base vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StallingsGraph {
    alphabet: Alphabet,
    num_vertices: usize,
    /// `trans[v * 2k + slot(x)]` is the end of the `x`-edge at `v`.
    trans: Vec<u32>,
}

/// Index of a subgroup, possibly infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => f.write_str("infinite"),
        }
    }
}

/// A generator of the subgroup read off a spanning tree: the non-tree edge
/// `source --label--> target` closed up through the tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisEdge {
    pub source: usize,
    pub target: usize,
    pub label: Letter,
}

impl StallingsGraph {
    /// The graph of the trivial subgroup: one vertex and no edges.
    pub fn trivial(alphabet: Alphabet) -> Self {
        StallingsGraph {
            alphabet,
            num_vertices: 1,
            trans: vec![NO_EDGE; alphabet.size()],
        }
    }

    /// The rose with one loop per generator, i.e. the graph of `F_k`.
    pub fn rose(alphabet: Alphabet) -> Self {
        StallingsGraph {
            alphabet,
            num_vertices: 1,
            trans: vec![0; alphabet.size()],
        }
    }

    /// Wedge of the generator loops, folded and pruned. Trivial words are ignored.
    pub fn from_generators(alphabet: Alphabet, words: &[ReducedWord]) -> Result<Self> {
        let mut folder = Folder::new(alphabet);
        for w in words {
            if w.alphabet() != alphabet {
                return Err(Error::AlphabetMismatch {
                    left: alphabet.rank(),
                    right: w.alphabet().rank(),
                });
            }
            if !w.is_empty() {
                folder.add_path(0, w.letters(), 0);
            }
        }
        Ok(Self::from_folder(alphabet, folder, 0))
    }

    /// Folds an arbitrary labelled graph and keeps the core of the base component.
    /// Edges are `(source, label, target)`; labels may be negative letters.
    pub fn fold_edges(
        alphabet: Alphabet,
        num_vertices: usize,
        base: usize,
        edges: &[(usize, Letter, usize)],
    ) -> Result<Self> {
        if base >= num_vertices.max(1) {
            return Err(Error::GraphFormat(format!("base {base} is not a vertex")));
        }
        let mut folder = Folder::with_vertices(alphabet, num_vertices);
        for &(s, x, t) in edges {
            if s >= num_vertices || t >= num_vertices {
                return Err(Error::GraphFormat(format!("edge ({s}, {t}) leaves the vertex set")));
            }
            if !alphabet.contains(x) {
                return Err(Error::LetterOutOfRange {
                    index: x.index(),
                    rank: alphabet.rank(),
                });
            }
            folder.add_edge(s, x, t);
        }
        Ok(Self::from_folder(alphabet, folder, base))
    }

    pub(crate) fn from_folder(alphabet: Alphabet, folder: Folder, base: usize) -> Self {
        let (num_vertices, trans) = folder.finish(base);
        StallingsGraph {
            alphabet,
            num_vertices,
            trans,
        }
    }

    /// Builds a graph from an explicit transition table of an already folded
    /// graph, re-canonicalizing from `base`. Unreachable vertices are dropped.
    pub(crate) fn from_table(alphabet: Alphabet, n: usize, base: usize, trans: &[u32]) -> Self {
        let size = alphabet.size();
        let (num_vertices, trans) = fold::canonical_form(alphabet, n, base, |v| {
            (0..size)
                .filter(|&s| trans[v * size + s] != NO_EDGE)
                .map(|s| (Letter::from_slot(s), trans[v * size + s] as usize))
                .collect()
        });
        StallingsGraph {
            alphabet,
            num_vertices,
            trans,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn base(&self) -> usize {
        0
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.trans.iter().filter(|&&t| t != NO_EDGE).count() / 2
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.num_vertices
    }

    /// End of the `x`-edge leaving `v`.
    #[inline]
    pub fn target(&self, v: usize, x: Letter) -> Option<usize> {
        let t = self.trans[v * self.alphabet.size() + x.slot()];
        (t != NO_EDGE).then_some(t as usize)
    }

    /// Outgoing half-edges of `v` in letter order.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = (Letter, usize)> + '_ {
        let size = self.alphabet.size();
        self.trans[v * size..(v + 1) * size]
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != NO_EDGE)
            .map(|(s, &t)| (Letter::from_slot(s), t as usize))
    }

    /// Number of half-edges at `v`; a loop counts twice.
    pub fn degree(&self, v: usize) -> usize {
        self.neighbours(v).count()
    }

    /// Edges with positive labels, as `(source, target, label)`, sorted by source then label.
    pub fn edges(&self) -> Vec<(usize, usize, Letter)> {
        let mut out = Vec::with_capacity(self.num_edges());
        for v in self.vertices() {
            for (x, t) in self.neighbours(v) {
                if x.is_positive() {
                    out.push((v, t, x));
                }
            }
        }
        out
    }

    /// Endpoint of the path reading `letters` from `start`, if it exists.
    pub fn read(&self, start: usize, letters: &[Letter]) -> Option<usize> {
        letters
            .iter()
            .try_fold(start, |v, &x| self.target(v, x))
    }

    /// Membership: `w` labels a closed path at the base.
    pub fn contains(&self, w: &ReducedWord) -> bool {
        w.alphabet() == self.alphabet && self.read(0, w.letters()) == Some(0)
    }

    /// `|E| − |V| + 1`, the rank of the subgroup.
    pub fn rank(&self) -> usize {
        self.num_edges() + 1 - self.num_vertices
    }

    /// Breadth-first spanning tree from the base: for each vertex the letter
    /// and predecessor by which it was discovered.
    pub fn spanning_tree(&self) -> Vec<Option<(Letter, usize)>> {
        let mut parent: Vec<Option<(Letter, usize)>> = vec![None; self.num_vertices];
        let mut seen = vec![false; self.num_vertices];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for (x, t) in self.neighbours(v) {
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((x, v));
                    queue.push_back(t);
                }
            }
        }
        parent
    }

    /// Label of the tree path from the base to `v`.
    pub fn tree_path(tree: &[Option<(Letter, usize)>], mut v: usize) -> Vec<Letter> {
        let mut rev = Vec::new();
        while let Some((x, p)) = tree[v] {
            rev.push(x);
            v = p;
        }
        rev.reverse();
        rev
    }

    /// The non-tree positive edges of the breadth-first spanning tree, in `edges()` order.
    pub fn basis_edges(&self) -> Vec<BasisEdge> {
        let tree = self.spanning_tree();
        self.edges()
            .into_iter()
            .filter(|&(s, t, x)| tree[t] != Some((x, s)) && tree[s] != Some((x.inverse(), t)))
            .map(|(source, target, label)| BasisEdge {
                source,
                target,
                label,
            })
            .collect()
    }

    /// Free basis of the subgroup from the spanning tree.
    pub fn free_basis(&self) -> Vec<ReducedWord> {
        let tree = self.spanning_tree();
        self.basis_edges()
            .iter()
            .map(|e| {
                let mut letters = Self::tree_path(&tree, e.source);
                letters.push(e.label);
                let back = Self::tree_path(&tree, e.target);
                letters.extend(back.iter().rev().map(|l| l.inverse()));
                ReducedWord::from_reduced(self.alphabet, letters).expect("immersed loop is reduced")
            })
            .collect()
    }

    /// Coordinates of `w` in [`free_basis`](Self::free_basis): the basis
    /// letters (signed, 1-based) met along the path of `w` at the base.
    pub fn coordinates(&self, w: &ReducedWord) -> Result<Vec<i32>> {
        let basis = self.basis_edges();
        let size = self.alphabet.size();
        let mut code = vec![0i32; self.num_vertices * size];
        for (i, e) in basis.iter().enumerate() {
            let id = i as i32 + 1;
            code[e.source * size + e.label.slot()] = id;
            code[e.target * size + e.label.inverse().slot()] = -id;
        }
        let mut v = 0;
        let mut out = Vec::new();
        for &x in w.letters() {
            let c = code.get(v * size + x.slot()).copied().unwrap_or(0);
            v = self
                .target(v, x)
                .ok_or_else(|| Error::NotInSubgroup(w.to_string()))?;
            if c != 0 {
                out.push(c);
            }
        }
        if v != 0 {
            return Err(Error::NotInSubgroup(w.to_string()));
        }
        Ok(out)
    }

    /// Index in `F_k`: finite iff every vertex has every label in both directions.
    pub fn index_in_ambient(&self) -> Index {
        if self.trans.iter().all(|&t| t != NO_EDGE) {
            Index::Finite(self.num_vertices)
        } else {
            Index::Infinite
        }
    }

    /// Malnormality witness: a non-basepointed component of rank ≥ 1 of the fiber
    /// product of the graph with itself.
    pub fn malnormality_witness(&self) -> Option<ProductComponent> {
        fiber_product(self, self)
            .expect("same alphabet")
            .into_iter()
            .find(|c| !c.basepointed && c.rank >= 1)
    }

    pub fn is_malnormal(&self) -> bool {
        self.malnormality_witness().is_none()
    }

    /// Vertices of degree at least 3, together with the base.
    pub(crate) fn branch_vertices(&self) -> Vec<usize> {
        self.vertices()
            .filter(|&v| v == 0 || self.degree(v) >= 3)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphDoc::from(self)).expect("graph document serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&GraphDoc::from(self)).expect("graph document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(text)?;
        doc.to_graph()
    }
}

impl fmt::Debug for StallingsGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "StallingsGraph(k={}, V={}, E={}, edges={:?})",
            self.alphabet.rank(),
            self.num_vertices,
            self.num_edges(),
            self.edges()
        )
    }
}

/// Index of `⟨sub⟩` in the subgroup of `over`, computed in the free basis of `over`.
pub fn index_of(sub: &[ReducedWord], over: &StallingsGraph) -> Result<Index> {
    let coords = sub
        .iter()
        .map(|w| over.coordinates(w))
        .collect::<Result<Vec<_>>>()?;
    let r = over.rank();
    if r == 0 {
        return Ok(Index::Finite(1));
    }
    let alpha = Alphabet::new(r)?;
    let words = coords
        .into_iter()
        .map(|c| crate::freewords::free_reduce(alpha, &c.into_iter().map(Letter::new).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    Ok(StallingsGraph::from_generators(alpha, &words)?.index_in_ambient())
}
