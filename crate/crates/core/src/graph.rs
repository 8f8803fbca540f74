//! Immutable simple undirected graphs and colored game states.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

/// Simple loopless undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    adj_set: Vec<VertexSet>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut adj_set = vec![VertexSet::empty(n); n];
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!("vertex out of range in edge {u}-{v}")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            let (a, b) = (u.min(v), u.max(v));
            if adj_set[a].contains(b) {
                return Err(Error::InvalidGraph(format!("duplicate edge {a}-{b}")));
            }
            adj[a].push(b);
            adj[b].push(a);
            adj_set[a].insert(b);
            adj_set[b].insert(a);
            norm.push((a, b));
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        norm.sort_unstable();
        Ok(Graph { n, adj, adj_set, edges: norm })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn neighbor_set(&self, v: usize) -> &VertexSet {
        &self.adj_set[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj_set[u].contains(v)
    }

    /// Identical graph minus one edge.
    pub fn delete_edge(&self, e: (usize, usize)) -> Result<Graph> {
        let (a, b) = (e.0.min(e.1), e.0.max(e.1));
        if a >= self.n || !self.has_edge(a, b) {
            return Err(Error::MissingEdge(a, b));
        }
        let edges: Vec<_> = self.edges.iter().copied().filter(|&f| f != (a, b)).collect();
        Graph::from_edges(self.n, &edges)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = VertexSet::empty(self.n);
        let mut stack = vec![0];
        seen.insert(0);
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        seen.len() == self.n
    }

    pub fn is_forest(&self) -> bool {
        // acyclic iff every connected piece has |E| = |V| - 1
        let comps = components_of(self, &VertexSet::full(self.n));
        let edges_in_comps: usize = comps
            .iter()
            .map(|c| self.edges.iter().filter(|(u, _)| c.contains(*u)).count())
            .sum();
        edges_in_comps == self.n - comps.len()
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.m() == self.n - 1 && self.is_connected()
    }
}

/// A graph together with its blue vertex set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState<'g> {
    pub graph: &'g Graph,
    pub blue: VertexSet,
}

impl<'g> GameState<'g> {
    pub fn new(graph: &'g Graph, blue: VertexSet) -> Self {
        GameState { graph, blue }
    }

    pub fn all_white(graph: &'g Graph) -> Self {
        GameState { graph, blue: VertexSet::empty(graph.n()) }
    }

    pub fn is_all_blue(&self) -> bool {
        self.blue.len() == self.graph.n()
    }

    pub fn is_white(&self, v: usize) -> bool {
        !self.blue.contains(v)
    }

    pub fn white_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.graph.neighbors(v).iter().copied().filter(|&w| !self.blue.contains(w))
    }

    pub fn white_degree(&self, v: usize) -> usize {
        self.white_neighbors(v).count()
    }

    pub fn with_blue(&self, v: usize) -> GameState<'g> {
        GameState { graph: self.graph, blue: self.blue.with(v) }
    }
}

/// Disjoint connected pieces, ordered by ascending minimum vertex.
pub type ComponentPartition = Vec<VertexSet>;

fn components_of(g: &Graph, inside: &VertexSet) -> ComponentPartition {
    let mut seen = VertexSet::empty(g.n());
    let mut parts = Vec::new();
    for s in 0..g.n() {
        if !inside.contains(s) || seen.contains(s) {
            continue;
        }
        let mut part = VertexSet::empty(g.n());
        let mut stack = vec![s];
        part.insert(s);
        seen.insert(s);
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if inside.contains(w) && !seen.contains(w) {
                    seen.insert(w);
                    part.insert(w);
                    stack.push(w);
                }
            }
        }
        parts.push(part);
    }
    parts
}

/// Connected components of the white-induced subgraph.
pub fn white_components(state: &GameState) -> ComponentPartition {
    let mut white = VertexSet::full(state.graph.n());
    for v in state.blue.iter() {
        white.remove(v);
    }
    components_of(state.graph, &white)
}

/// Blue vertices with at least two white neighbors.
pub fn active_vertices(state: &GameState) -> VertexSet {
    VertexSet::from_iter(
        state.graph.n(),
        state.blue.iter().filter(|&v| state.white_degree(v) >= 2),
    )
}

pub fn activity(state: &GameState) -> usize {
    active_vertices(state).len()
}

/// Per-vertex distance to `root` plus the tree height. Rejects non-trees.
pub fn rooted_heights(tree: &Graph, root: usize) -> Result<(Vec<usize>, usize)> {
    if !tree.is_tree() {
        return Err(Error::NotATree);
    }
    if root >= tree.n() {
        return Err(Error::Domain(format!("root {root} out of range")));
    }
    let mut height = vec![usize::MAX; tree.n()];
    height[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    let mut h = 0;
    while let Some(v) = queue.pop_front() {
        for &w in tree.neighbors(v) {
            if height[w] == usize::MAX {
                height[w] = height[v] + 1;
                h = h.max(height[w]);
                queue.push_back(w);
            }
        }
    }
    Ok((height, h))
}

pub mod text {
    //! Plain text graph format: line 1 `n m`, then `m` lines `u v` with
    //! `0 <= u < v < n`. Lines starting with `#` are ignored.

    use super::Graph;
    use crate::error::{Error, Result};

    pub fn parse(input: &str) -> Result<Graph> {
        let mut lines = input
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header".into()))?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse("bad header".into()))?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let mut it = line.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad edge line: {line}")))?;
            if u >= v {
                return Err(Error::Parse(format!("edge must satisfy u < v: {line}")));
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse(format!("expected {m} edges, found {}", edges.len())));
        }
        Graph::from_edges(n, &edges)
    }

    pub fn render(g: &Graph) -> String {
        let mut out = format!("{} {}\n", g.n(), g.m());
        for (u, v) in g.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}
