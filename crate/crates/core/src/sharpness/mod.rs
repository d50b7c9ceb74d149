//! The towers of subgroups `A_i ⊃ C_i` of `F_k` whose splittings
//! `F_k = A_i *_{C_i} A_{i+1}` are sharp for the subword-coverage bound, and
//! cyclic witnesses `h ∈ A_{i+1}` containing every reduced word of length `2i`.
//!
//! The rank-two tower starts from `A_0 = ⟨a⟩`, `A_1 = ⟨b⟩` and continues by
//!
//! - `C_i`: the kernel of the unique non-trivial map `A_i → Z/2` killing `C_{i−1}`,
//! - `A_{i+1} = ⟨A_{i−1}, C_i⟩`.
//!
//! For `k > 2` every graph of the rank-two tower gets one loop per extra
//! generator at each vertex.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freewords::{
    count_reduced_words, covers_all_subwords, enumerate_reduced_words, Alphabet, CyclicWord,
    Letter, Orientation, ReducedWord,
};
use crate::stallings::{index_of, GraphDoc, Index, StallingsGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerLevel {
    pub i: usize,
    pub k: usize,
    pub a: StallingsGraph,
    pub c: StallingsGraph,
}

impl TowerLevel {
    /// The lemma's ranks: `i(k−1)` and `2i(k−1) − 1`.
    pub fn expected_ranks(&self) -> (usize, usize) {
        let r = self.i * (self.k - 1);
        (r, 2 * r - 1)
    }

    fn check(&self) -> Result<()> {
        let bad = |what: String| Err(Error::Construction(format!("level {}: {what}", self.i)));
        let (ra, rc) = self.expected_ranks();
        for (name, g, want) in [("A", &self.a, ra), ("C", &self.c, rc)] {
            let euler = g.edges().len() + 1 - g.vertices().len();
            if g.rank() != want || euler != want {
                return bad(format!("rank({name}) = {} (Euler {euler}), expected {want}", g.rank()));
            }
        }
        let index = index_of(&self.c.free_basis(), &self.a)?;
        if index != Index::Finite(2) {
            return bad(format!("[A : C] = {index}"));
        }
        Ok(())
    }
}

/// Levels `1..=i_max` and the graph of `A_{i_max+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tower {
    pub k: usize,
    pub levels: Vec<TowerLevel>,
    pub top: StallingsGraph,
}

impl Tower {
    pub fn i_max(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, i: usize) -> Option<&TowerLevel> {
        i.checked_sub(1).and_then(|j| self.levels.get(j))
    }

    /// `A_i` for `1 ≤ i ≤ i_max + 1`.
    pub fn a(&self, i: usize) -> Option<&StallingsGraph> {
        if i == self.levels.len() + 1 {
            Some(&self.top)
        } else {
            self.level(i).map(|l| &l.a)
        }
    }

    pub fn splitting(&self, i: usize) -> Option<SplittingDescriptor> {
        let left = self.level(i)?.clone();
        let right = self.a(i + 1)?.clone();
        let edge = left.c.clone();
        let embeddings = edge.free_basis();
        Some(SplittingDescriptor {
            left,
            right,
            edge,
            embeddings,
        })
    }

    pub fn to_doc(&self) -> TowerDoc {
        TowerDoc {
            k: self.k,
            levels: self
                .levels
                .iter()
                .map(|l| LevelDoc {
                    i: l.i,
                    rank_a: l.a.rank(),
                    rank_c: l.c.rank(),
                    index: 2,
                    a: GraphDoc::from(&l.a),
                    c: GraphDoc::from(&l.c),
                })
                .collect(),
            top: GraphDoc::from(&self.top),
        }
    }
}

/// `F_k = A_i *_{C_i} A_{i+1}`, with `C_i` included identically on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingDescriptor {
    pub left: TowerLevel,
    pub right: StallingsGraph,
    pub edge: StallingsGraph,
    pub embeddings: Vec<ReducedWord>,
}

impl SplittingDescriptor {
    pub fn check(&self) -> Result<()> {
        for c in &self.embeddings {
            if !self.left.a.contains(c) || !self.right.contains(c) {
                return Err(Error::Construction(format!(
                    "edge generator {c} is not in both vertex groups"
                )));
            }
        }
        Ok(())
    }

    pub fn to_doc(&self) -> SplittingDoc {
        SplittingDoc {
            left: GraphDoc::from(&self.left.a),
            right: GraphDoc::from(&self.right),
            edge: GraphDoc::from(&self.edge),
            embeddings: self.embeddings.iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDoc {
    pub i: usize,
    pub rank_a: usize,
    pub rank_c: usize,
    pub index: usize,
    pub a: GraphDoc,
    pub c: GraphDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDoc {
    pub k: usize,
    pub levels: Vec<LevelDoc>,
    pub top: GraphDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingDoc {
    pub left: GraphDoc,
    pub right: GraphDoc,
    pub edge: GraphDoc,
    pub embeddings: Vec<String>,
}

/// Non-zero vectors spanning the GF(2) solutions of `rows · x = 0`, `x ∈ GF(2)^n`.
fn nullspace_gf2(rows: &[Vec<bool>], n: usize) -> Vec<Vec<bool>> {
    let mut m: Vec<Vec<bool>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m.len()).find(|&i| m[i][col]) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][col] {
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![false; n];
            x[free] = true;
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = m[row][free];
            }
            x
        })
        .collect()
}

/// The double cover of `a` for the unique non-trivial map to `Z/2` that kills `sub`.
fn index_two_kernel(a: &StallingsGraph, sub: &[ReducedWord]) -> Result<StallingsGraph> {
    let r = a.rank();
    let rows = sub
        .iter()
        .map(|w| {
            let mut row = vec![false; r];
            for c in a.coordinates(w)? {
                row[c.unsigned_abs() as usize - 1] ^= true;
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let kernel = nullspace_gf2(&rows, r);
    let [phi] = kernel.as_slice() else {
        return Err(Error::Construction(format!(
            "{} independent maps to Z/2 kill the previous edge group",
            kernel.len()
        )));
    };
    let basis = a.basis_edges();
    let mut edges = Vec::new();
    for (s, t, x) in a.edges() {
        let flip = basis
            .iter()
            .position(|e| e.source == s && e.target == t && e.label == x)
            .is_some_and(|j| phi[j]);
        for sheet in 0..2 {
            let other = sheet ^ usize::from(flip);
            edges.push((2 * s + sheet, x, 2 * t + other));
        }
    }
    StallingsGraph::fold_edges(a.alphabet(), 2 * a.num_vertices(), 0, &edges)
}

/// `g` over `F_k` with a loop labelled by each of `x_3, .., x_k` at every vertex.
fn add_loops(g: &StallingsGraph, k: usize) -> Result<StallingsGraph> {
    let alphabet = Alphabet::new(k)?;
    let mut edges: Vec<(usize, Letter, usize)> = g.edges().into_iter().map(|(s, t, x)| (s, x, t)).collect();
    for v in g.vertices() {
        for j in 3..=k {
            edges.push((v, Letter::new(j as i32), v));
        }
    }
    StallingsGraph::fold_edges(alphabet, g.num_vertices(), 0, &edges)
}

fn subgroup_join(alphabet: Alphabet, parts: &[&StallingsGraph]) -> Result<StallingsGraph> {
    let gens: Vec<ReducedWord> = parts.iter().flat_map(|g| g.free_basis()).collect();
    StallingsGraph::from_generators(alphabet, &gens)
}

/// Builds levels `1..=i_max` and checks every level invariant.
pub fn build_tower(k: usize, i_max: usize) -> Result<Tower> {
    if k < 2 {
        return Err(Error::InvalidRank(k));
    }
    if i_max == 0 {
        return Err(Error::InvalidParams("the tower needs at least one level".into()));
    }
    let f2 = Alphabet::new(2)?;
    let gen = |s: &str| ReducedWord::parse(f2, s);
    // rank-two tower: a[j] = A_j, c[j] = C_j
    let mut a = vec![
        StallingsGraph::from_generators(f2, &[gen("a")?])?,
        StallingsGraph::from_generators(f2, &[gen("b")?])?,
    ];
    let mut c = vec![StallingsGraph::trivial(f2)];
    for i in 1..=i_max {
        let ci = index_two_kernel(&a[i], &c[i - 1].free_basis())?;
        let next = subgroup_join(f2, &[&a[i - 1], &ci])?;
        c.push(ci);
        a.push(next);
    }
    let mut levels = Vec::with_capacity(i_max);
    for i in 1..=i_max {
        let level = TowerLevel {
            i,
            k,
            a: add_loops(&a[i], k)?,
            c: add_loops(&c[i], k)?,
        };
        level.check()?;
        levels.push(level);
    }
    let tower = Tower {
        k,
        levels,
        top: add_loops(&a[i_max + 1], k)?,
    };
    for i in 1..i_max {
        let (ci, next) = (&tower.levels[i - 1].c, &tower.levels[i].c);
        if let Some(x) = ci.free_basis().into_iter().find(|x| !next.contains(x)) {
            return Err(Error::Construction(format!("C_{i} ⊄ C_{}: {x}", i + 1)));
        }
    }
    Ok(tower)
}

/// The first reduced word of length `i`, in letter order, that cannot be read
/// from the base of `g`.
pub fn coverage_gap(g: &StallingsGraph, i: usize) -> Option<ReducedWord> {
    fn walk(
        g: &StallingsGraph,
        v: usize,
        prefix: &mut Vec<Letter>,
        left: usize,
        seen: &mut HashSet<(usize, Option<Letter>, usize)>,
    ) -> bool {
        if left == 0 || !seen.insert((v, prefix.last().copied(), left)) {
            return true;
        }
        for x in g.alphabet().letters() {
            if prefix.last() == Some(&x.inverse()) {
                continue;
            }
            prefix.push(x);
            let ok = match g.target(v, x) {
                Some(t) => walk(g, t, prefix, left - 1, seen),
                None => false,
            };
            if !ok {
                return false;
            }
            prefix.pop();
        }
        true
    }
    let mut prefix = Vec::new();
    if walk(g, g.base(), &mut prefix, i, &mut HashSet::new()) {
        return None;
    }
    let mut letters = prefix;
    // extend the unreadable prefix to a word of length i
    while letters.len() < i {
        let last = *letters.last().expect("non-empty");
        let next = g.alphabet().letters().find(|&x| x != last.inverse()).expect("rank ≥ 1");
        letters.push(next);
    }
    Some(ReducedWord::from_reduced(g.alphabet(), letters).expect("reduced by construction"))
}

/// Every reduced word of length `i` labels a path from the base of `g`.
pub fn coverage_bullet(g: &StallingsGraph, i: usize) -> bool {
    coverage_gap(g, i).is_none()
}

/// Shortest non-backtracking path from `(start, last)` to a state accepted by
/// `goal`; `Some(vec![])` when the start already qualifies.
fn connect(
    g: &StallingsGraph,
    start: usize,
    last: Option<Letter>,
    goal: impl Fn(usize, Option<Letter>) -> bool,
) -> Option<Vec<Letter>> {
    let size = g.alphabet().size();
    let code = |v: usize, l: Option<Letter>| v * (size + 1) + l.map_or(size, Letter::slot);
    let mut parent: Vec<Option<(usize, Letter)>> = vec![None; g.num_vertices() * (size + 1)];
    let mut seen = vec![false; parent.len()];
    let mut queue = VecDeque::from([(start, last)]);
    seen[code(start, last)] = true;
    while let Some((v, l)) = queue.pop_front() {
        if goal(v, l) {
            let mut path = Vec::new();
            let mut cur = code(v, l);
            while let Some((prev, x)) = parent[cur] {
                path.push(x);
                cur = prev;
            }
            path.reverse();
            return Some(path);
        }
        for (x, t) in g.neighbours(v) {
            if l == Some(x.inverse()) {
                continue;
            }
            let c = code(t, Some(x));
            if !seen[c] {
                seen[c] = true;
                parent[c] = Some((code(v, l), x));
                queue.push_back((t, Some(x)));
            }
        }
    }
    None
}

/// A cyclically reduced `h` in the subgroup of `g` containing every reduced word
/// of length `len` as a subword.
///
/// Words are taken in letter order. Each one not yet seen is read somewhere in
/// `g` and joined to the path so far without backtracking; the path is finally
/// closed at the base.
pub fn covering_element(g: &StallingsGraph, len: usize) -> Result<ReducedWord> {
    let alphabet = g.alphabet();
    let fail = |what: String| Error::Construction(format!("covering element of length {len}: {what}"));
    if len == 0 {
        return Err(Error::InvalidParams("coverage length must be at least 1".into()));
    }
    let mut h: Vec<Letter> = Vec::new();
    let mut windows: HashSet<Vec<Letter>> = HashSet::new();
    let mut v = g.base();
    let push = |h: &mut Vec<Letter>, windows: &mut HashSet<Vec<Letter>>, x: Letter| {
        h.push(x);
        if h.len() >= len {
            windows.insert(h[h.len() - len..].to_vec());
        }
    };
    for u in enumerate_reduced_words(alphabet, len) {
        let u = u.letters();
        if windows.contains(u) {
            continue;
        }
        let path = connect(g, v, h.last().copied(), |w, l| {
            l != Some(u[0].inverse()) && g.read(w, u).is_some()
        })
        .ok_or_else(|| fail(format!("{} is not readable", alphabet.format_letters(u))))?;
        for &x in path.iter().chain(u) {
            push(&mut h, &mut windows, x);
            v = g.target(v, x).expect("path in graph");
        }
    }
    let first = h[0];
    let path = connect(g, v, h.last().copied(), |w, l| w == g.base() && l != Some(first.inverse()))
        .ok_or_else(|| fail("cannot return to the base".into()))?;
    for x in path {
        push(&mut h, &mut windows, x);
    }
    let h = ReducedWord::from_reduced(alphabet, h)?;
    let cyclic = CyclicWord::new(h.clone())?;
    if !h.is_cyclically_reduced()
        || !g.contains(&h)
        || !covers_all_subwords(&cyclic, len, Orientation::Directed)?.covered
    {
        return Err(fail(format!("{h} does not have the required properties")));
    }
    Ok(h)
}

/// A cyclically reduced element of `A_{i+1}` containing every reduced word of length `2i`.
pub fn witness_word(k: usize, i: usize) -> Result<ReducedWord> {
    let tower = build_tower(k, i)?;
    covering_element(&tower.top, 2 * i)
}

/// `4 i γ_{2i}`.
pub fn witness_length_bound(k: usize, i: usize) -> BigUint {
    count_reduced_words(k, 2 * i) * BigUint::from(4 * i)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpnessReport {
    pub k: usize,
    pub i: usize,
    #[serde(rename = "L")]
    pub coverage_length: usize,
    pub rank_a: usize,
    pub rank_c: usize,
    pub index: usize,
    /// `2i(k−1) − 1`.
    pub lemma_rank_c: usize,
    /// `(k−1)(L−2) + 1`.
    pub proposition_rank: usize,
    pub satisfies_bound: bool,
    pub equality: bool,
    pub coverage_bullet: bool,
    pub witness: String,
    pub witness_length: usize,
    pub witness_length_bound: String,
    pub splitting: SplittingDoc,
}

impl SharpnessReport {
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Builds level `i`, its splitting and witness, and compares `rank(C_i)` with
/// `(k−1)(L−2) + 1` for `L = 2i`.
pub fn verify_sharpness(k: usize, i: usize) -> Result<SharpnessReport> {
    let tower = build_tower(k, i)?;
    let split = tower.splitting(i).expect("level i exists");
    split.check()?;
    let len = 2 * i;
    let h = covering_element(&split.right, len)?;
    let rank_c = split.edge.rank();
    let proposition_rank = (k - 1) * (len - 2) + 1;
    Ok(SharpnessReport {
        k,
        i,
        coverage_length: len,
        rank_a: split.left.a.rank(),
        rank_c,
        index: 2,
        lemma_rank_c: split.left.expected_ranks().1,
        proposition_rank,
        satisfies_bound: rank_c >= proposition_rank,
        equality: rank_c == proposition_rank,
        coverage_bullet: coverage_bullet(&split.right, i),
        witness: h.to_string(),
        witness_length: h.len(),
        witness_length_bound: witness_length_bound(k, i).to_string(),
        splitting: split.to_doc(),
    })
}

#[cfg(test)]
mod tests;
