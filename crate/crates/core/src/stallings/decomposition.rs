use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::freewords::{Letter, ReducedWord};

use super::StallingsGraph;

/// An arc of the complement of the central tree: a path whose interior vertices
/// lie outside the tree and have degree 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterLoop {
    pub start: usize,
    pub end: usize,
    pub letters: Vec<Letter>,
    /// All vertices along the arc, endpoints included.
    pub vertices: Vec<usize>,
}

impl OuterLoop {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Central tree plus outer loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralDecomposition {
    pub tree_vertices: Vec<usize>,
    /// Tree edges with positive labels, `(source, target, label)`.
    pub tree_edges: Vec<(usize, usize, Letter)>,
    pub outer_loops: Vec<OuterLoop>,
    pub loop_lengths: Vec<usize>,
    /// Longest path inside the central tree, in edges.
    pub diameter: usize,
    /// For each vertex of the graph, `Some((x, p))` when it is a tree vertex
    /// reached by the tree edge `p --x--> v` from the base.
    tree_parent: Vec<Option<(Letter, usize)>>,
}

impl CentralDecomposition {
    pub fn min_loop_length(&self) -> usize {
        self.loop_lengths.iter().copied().min().unwrap_or(0)
    }

    /// Label of the path inside the central tree from the base to `v`.
    pub fn tree_path_from_base(&self, v: usize) -> Vec<Letter> {
        StallingsGraph::tree_path(&self.tree_parent, v)
    }

    /// Label of the tree path between two tree vertices, freely reduced.
    pub fn tree_path(&self, from: usize, to: usize) -> Vec<Letter> {
        let a = self.tree_path_from_base(from);
        let b = self.tree_path_from_base(to);
        let common = a.iter().zip(&b).take_while(|(x, y)| x == y).count();
        let mut out: Vec<Letter> = a[common..].iter().rev().map(|l| l.inverse()).collect();
        out.extend_from_slice(&b[common..]);
        out
    }

    /// The free basis `γ_i · arc_i · γ'_i⁻¹` where `γ_i, γ'_i` are tree paths from
    /// the base to the endpoints of the `i`-th outer loop.
    pub fn arc_basis(&self, g: &StallingsGraph) -> Vec<ReducedWord> {
        self.outer_loops
            .iter()
            .map(|arc| {
                let mut letters = self.tree_path_from_base(arc.start);
                letters.extend_from_slice(&arc.letters);
                let back = self.tree_path_from_base(arc.end);
                letters.extend(back.iter().rev().map(|l| l.inverse()));
                crate::freewords::free_reduce(g.alphabet(), &letters).expect("same alphabet")
            })
            .collect()
    }
}

/// Splits a core graph into a central tree and `p` outer loops.
///
/// The marked vertices are the base and the vertices of degree ≥ 3; the central
/// tree is the union of all geodesics between marked vertices. Fails if that
/// union is not a tree.
pub fn central_decomposition(g: &StallingsGraph, p: usize) -> Result<CentralDecomposition> {
    let rank = g.rank();
    if rank != p {
        return Err(Error::RankMismatch {
            expected: p,
            actual: rank,
        });
    }
    let n = g.num_vertices();
    let marked = g.branch_vertices();
    let dist: Vec<Vec<usize>> = marked.iter().map(|&s| bfs(g, s)).collect();
    let edges = g.edges();

    let mut in_tree = vec![false; edges.len()];
    for i in 0..marked.len() {
        for j in i + 1..marked.len() {
            let (ds, dt) = (&dist[i], &dist[j]);
            let d = ds[marked[j]];
            for (e, &(u, v, _)) in edges.iter().enumerate() {
                if in_tree[e] || u == v {
                    continue;
                }
                if ds[u] + 1 + dt[v] == d || ds[v] + 1 + dt[u] == d {
                    in_tree[e] = true;
                }
            }
        }
    }

    let mut is_tree_vertex = vec![false; n];
    for &m in &marked {
        is_tree_vertex[m] = true;
    }
    let mut tree_adj: Vec<Vec<(Letter, usize)>> = vec![Vec::new(); n];
    let mut tree_edges = Vec::new();
    for (e, &(u, v, x)) in edges.iter().enumerate() {
        if in_tree[e] {
            is_tree_vertex[u] = true;
            is_tree_vertex[v] = true;
            tree_adj[u].push((x, v));
            tree_adj[v].push((x.inverse(), u));
            tree_edges.push((u, v, x));
        }
    }
    let tree_vertices: Vec<usize> = (0..n).filter(|&v| is_tree_vertex[v]).collect();
    if tree_edges.len() + 1 != tree_vertices.len() {
        return Err(Error::Decomposition(format!(
            "geodesics between branch vertices form a graph with {} vertices and {} edges, not a tree",
            tree_vertices.len(),
            tree_edges.len()
        )));
    }
    for adj in &mut tree_adj {
        adj.sort();
    }
    let mut tree_parent: Vec<Option<(Letter, usize)>> = vec![None; n];
    let mut reached = vec![false; n];
    reached[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for &(x, t) in &tree_adj[v] {
            if !reached[t] {
                reached[t] = true;
                tree_parent[t] = Some((x, v));
                count += 1;
                queue.push_back(t);
            }
        }
    }
    if count != tree_vertices.len() {
        return Err(Error::Decomposition("central tree is not connected".into()));
    }

    // walk the complement from tree vertices, half-edge by half-edge
    let tree_half: BTreeSet<(usize, Letter)> = tree_edges
        .iter()
        .flat_map(|&(u, v, x)| [(u, x), (v, x.inverse())])
        .collect();
    let mut used: BTreeSet<(usize, Letter)> = BTreeSet::new();
    let mut outer_loops = Vec::new();
    for &s in &tree_vertices {
        for (x, _) in g.neighbours(s) {
            if tree_half.contains(&(s, x)) || used.contains(&(s, x)) {
                continue;
            }
            let mut letters = vec![x];
            let mut vertices = vec![s];
            used.insert((s, x));
            let mut prev_in = x.inverse();
            let mut cur = g.target(s, x).expect("half-edge exists");
            used.insert((cur, prev_in));
            vertices.push(cur);
            while !is_tree_vertex[cur] {
                let mut next = g.neighbours(cur).filter(|&(y, _)| y != prev_in);
                let (y, t) = next.next().expect("core vertices have degree 2");
                if next.next().is_some() {
                    return Err(Error::Decomposition(format!(
                        "vertex {cur} outside the central tree has degree above 2"
                    )));
                }
                used.insert((cur, y));
                letters.push(y);
                prev_in = y.inverse();
                cur = t;
                used.insert((cur, prev_in));
                vertices.push(cur);
            }
            outer_loops.push(OuterLoop {
                start: s,
                end: cur,
                letters,
                vertices,
            });
        }
    }
    if outer_loops.len() != p {
        return Err(Error::Decomposition(format!(
            "expected {p} outer loops, found {}",
            outer_loops.len()
        )));
    }
    let loop_lengths = outer_loops.iter().map(|l| l.len()).collect();
    let diameter = tree_diameter(&tree_adj, &tree_vertices);
    Ok(CentralDecomposition {
        tree_vertices,
        tree_edges,
        outer_loops,
        loop_lengths,
        diameter,
        tree_parent,
    })
}

fn bfs(g: &StallingsGraph, s: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX / 4; g.num_vertices()];
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for (_, t) in g.neighbours(v) {
            if dist[t] > dist[v] + 1 {
                dist[t] = dist[v] + 1;
                queue.push_back(t);
            }
        }
    }
    dist
}

fn tree_diameter(adj: &[Vec<(Letter, usize)>], vertices: &[usize]) -> usize {
    let far = |s: usize| -> (usize, usize) {
        let mut dist = vec![usize::MAX; adj.len()];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        let mut best = (0, s);
        while let Some(v) = queue.pop_front() {
            if dist[v] > best.0 {
                best = (dist[v], v);
            }
            for &(_, t) in &adj[v] {
                if dist[t] == usize::MAX {
                    dist[t] = dist[v] + 1;
                    queue.push_back(t);
                }
            }
        }
        best
    };
    match vertices.first() {
        Some(&s) => far(far(s).1).0,
        None => 0,
    }
}
