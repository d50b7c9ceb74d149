use std::collections::VecDeque;

use crate::freewords::{Alphabet, Letter};

pub(crate) const NO_EDGE: u32 = u32::MAX;

/// Incremental folding of a labelled graph.
///
/// Vertices are merged with a union-find structure; every adjacency entry
/// points at a current representative, and `u --x--> v` is stored both as
/// `(x, v)` at `u` and `(x⁻¹, u)` at `v`.
pub(crate) struct Folder {
    alphabet: Alphabet,
    parent: Vec<usize>,
    adj: Vec<Vec<(Letter, usize)>>,
    pending: Vec<(usize, usize)>,
}

impl Folder {
    pub(crate) fn new(alphabet: Alphabet) -> Self {
        let mut f = Folder {
            alphabet,
            parent: Vec::new(),
            adj: Vec::new(),
            pending: Vec::new(),
        };
        f.add_vertex();
        f
    }

    pub(crate) fn with_vertices(alphabet: Alphabet, n: usize) -> Self {
        let mut f = Folder::new(alphabet);
        for _ in 1..n.max(1) {
            f.add_vertex();
        }
        f
    }

    pub(crate) fn add_vertex(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.adj.push(Vec::new());
        id
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[v] != root {
            let next = self.parent[v];
            self.parent[v] = root;
            v = next;
        }
        root
    }

    fn target(&self, v: usize, x: Letter) -> Option<usize> {
        self.adj[v].iter().find(|e| e.0 == x).map(|e| e.1)
    }

    /// Adds `u --x--> v` and folds everything this forces.
    pub(crate) fn add_edge(&mut self, u: usize, x: Letter, v: usize) {
        let u = self.find(u);
        let v = self.find(v);
        self.link(u, x, v);
        self.drain();
    }

    /// Identifies two vertices and folds.
    pub(crate) fn identify(&mut self, u: usize, v: usize) {
        self.pending.push((u, v));
        self.drain();
    }

    /// Adds a path reading `letters` from `u` to `v`, reusing existing edges
    /// at both ends.
    pub(crate) fn add_path(&mut self, u: usize, letters: &[Letter], v: usize) {
        let mut start = self.find(u);
        let mut i = 0;
        while i < letters.len() {
            match self.target(start, letters[i]) {
                Some(t) => {
                    start = t;
                    i += 1;
                }
                None => break,
            }
        }
        let mut end = self.find(v);
        let mut j = letters.len();
        while j > i {
            match self.target(end, letters[j - 1].inverse()) {
                Some(t) => {
                    end = t;
                    j -= 1;
                }
                None => break,
            }
        }
        if i == j {
            self.identify(start, end);
            return;
        }
        let mut cur = start;
        for &x in &letters[i..j - 1] {
            let next = self.add_vertex();
            self.link_fresh(cur, x, next);
            cur = next;
        }
        self.add_edge(cur, letters[j - 1], end);
    }

    /// Edge to a brand-new vertex: no conflict is possible at `v`.
    fn link_fresh(&mut self, u: usize, x: Letter, v: usize) {
        debug_assert!(self.target(u, x).is_none());
        self.adj[u].push((x, v));
        self.adj[v].push((x.inverse(), u));
    }

    fn link(&mut self, u: usize, x: Letter, v: usize) {
        if let Some(w) = self.target(u, x) {
            if w != v {
                self.pending.push((w, v));
            }
            return;
        }
        if let Some(w) = self.target(v, x.inverse()) {
            if w != u {
                self.pending.push((w, u));
            }
            return;
        }
        self.adj[u].push((x, v));
        self.adj[v].push((x.inverse(), u));
    }

    fn drain(&mut self) {
        while let Some((a, b)) = self.pending.pop() {
            self.merge(a, b);
        }
    }

    fn merge(&mut self, a: usize, b: usize) {
        let mut a = self.find(a);
        let mut b = self.find(b);
        if a == b {
            return;
        }
        if self.adj[a].len() < self.adj[b].len() {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        let moved = std::mem::take(&mut self.adj[b]);
        for &(x, t) in &moved {
            if t != b {
                let back = x.inverse();
                let list = &mut self.adj[t];
                if let Some(pos) = list.iter().position(|e| e.0 == back && e.1 == b) {
                    list.swap_remove(pos);
                }
            }
        }
        for (x, t) in moved {
            let t = if t == b { a } else { t };
            self.link(a, x, t);
        }
    }

    /// Prunes hanging trees, then renumbers the base component by
    /// breadth-first search in letter order. Returns `(vertex count, trans)`.
    pub(crate) fn finish(mut self, base: usize) -> (usize, Vec<u32>) {
        let base = self.find(base);
        let n = self.adj.len();
        let mut alive: Vec<bool> = (0..n).map(|v| self.parent[v] == v).collect();
        let mut queue: Vec<usize> = (0..n)
            .filter(|&v| alive[v] && v != base && self.adj[v].len() <= 1)
            .collect();
        while let Some(v) = queue.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for (x, t) in std::mem::take(&mut self.adj[v]) {
                if t == v {
                    continue;
                }
                let back = x.inverse();
                let list = &mut self.adj[t];
                if let Some(pos) = list.iter().position(|e| e.0 == back && e.1 == v) {
                    list.swap_remove(pos);
                }
                if t != base && list.len() <= 1 {
                    queue.push(t);
                }
            }
        }
        canonical_form(self.alphabet, n, base, |v| {
            let mut out = self.adj[v].clone();
            out.sort();
            out
        })
    }
}

/// Breadth-first renumbering from `base`, exploring labels in letter order.
pub(crate) fn canonical_form(
    alphabet: Alphabet,
    universe: usize,
    base: usize,
    mut neighbours: impl FnMut(usize) -> Vec<(Letter, usize)>,
) -> (usize, Vec<u32>) {
    let size = alphabet.size();
    let mut ids = vec![NO_EDGE; universe];
    let mut order = vec![base];
    ids[base] = 0;
    let mut queue = VecDeque::from([base]);
    let mut rows: Vec<Vec<(Letter, usize)>> = Vec::new();
    while let Some(v) = queue.pop_front() {
        let nb = neighbours(v);
        for &(_, t) in &nb {
            if ids[t] == NO_EDGE {
                ids[t] = order.len() as u32;
                order.push(t);
                queue.push_back(t);
            }
        }
        rows.push(nb);
    }
    let n = order.len();
    let mut trans = vec![NO_EDGE; n * size];
    for (i, nb) in rows.iter().enumerate() {
        for &(x, t) in nb {
            trans[i * size + x.slot()] = ids[t];
        }
    }
    (n, trans)
}
