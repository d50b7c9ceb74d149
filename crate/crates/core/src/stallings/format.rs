use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freewords::{Alphabet, Letter};

use super::fold::NO_EDGE;
use super::StallingsGraph;

/// Serialized graph: `{"rank_k", "base", "vertices", "edges": [[s, t, "a"], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub rank_k: usize,
    pub base: u64,
    pub vertices: Vec<u64>,
    pub edges: Vec<(u64, u64, String)>,
}

impl From<&StallingsGraph> for GraphDoc {
    fn from(g: &StallingsGraph) -> Self {
        let alphabet = g.alphabet();
        GraphDoc {
            rank_k: alphabet.rank(),
            base: 0,
            vertices: g.vertices().map(|v| v as u64).collect(),
            edges: g
                .edges()
                .into_iter()
                .map(|(s, t, x)| (s as u64, t as u64, alphabet.format_letters(&[x])))
                .collect(),
        }
    }
}

impl GraphDoc {
    /// Validates the document (folded, connected, core) and canonicalizes it.
    pub fn to_graph(&self) -> Result<StallingsGraph> {
        let alphabet = Alphabet::new(self.rank_k)
            .map_err(|_| Error::GraphFormat(format!("rank_k must be positive, got {}", self.rank_k)))?;
        let size = alphabet.size();
        let mut ids: HashMap<u64, usize> = HashMap::new();
        for &v in &self.vertices {
            if ids.insert(v, ids.len()).is_some() {
                return Err(Error::GraphFormat(format!("duplicate vertex {v}")));
            }
        }
        let n = ids.len();
        let id = |v: u64| {
            ids.get(&v)
                .copied()
                .ok_or_else(|| Error::GraphFormat(format!("unknown vertex {v}")))
        };
        let base = id(self.base)?;
        let mut trans = vec![NO_EDGE; n * size];
        for (s, t, label) in &self.edges {
            let letters = alphabet.parse_letters(label)?;
            let x = match letters.as_slice() {
                [x] if x.is_positive() => *x,
                _ => {
                    return Err(Error::GraphFormat(format!(
                        "edge label {label:?} is not a single positive letter"
                    )))
                }
            };
            let (s, t) = (id(*s)?, id(*t)?);
            let mut set = |v: usize, y: Letter, w: usize| -> Result<()> {
                let slot = &mut trans[v * size + y.slot()];
                if *slot != NO_EDGE {
                    return Err(Error::FoldViolation {
                        vertex: self.vertices[v] as usize,
                        label: alphabet.format_letters(&[y]),
                    });
                }
                *slot = w as u32;
                Ok(())
            };
            set(s, x, t)?;
            set(t, x.inverse(), s)?;
        }
        let g = StallingsGraph::from_table(alphabet, n, base, &trans);
        if g.num_vertices() != n {
            let reached: std::collections::HashSet<usize> = reachable(&trans, size, base);
            let missing = (0..n).find(|v| !reached.contains(v)).unwrap_or(0);
            return Err(Error::Disconnected(self.vertices[missing] as usize));
        }
        if let Some(v) = g.vertices().find(|&v| v != 0 && g.degree(v) < 2) {
            return Err(Error::NotCore(v));
        }
        Ok(g)
    }
}

fn reachable(trans: &[u32], size: usize, base: usize) -> std::collections::HashSet<usize> {
    let mut seen = std::collections::HashSet::from([base]);
    let mut stack = vec![base];
    while let Some(v) = stack.pop() {
        for &t in &trans[v * size..(v + 1) * size] {
            if t != NO_EDGE && seen.insert(t as usize) {
                stack.push(t as usize);
            }
        }
    }
    seen
}
