//! Generators for the graph families the solver and strategies operate on.
//!
//! Labeling conventions: cycle/path centers come first as `0..n-1` in cycle
//! order; pendant vertices are appended grouped by center. Stars put the
//! center at index 0.

use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Center/pendant layout of a caterpillar cycle or caterpillar path.
#[derive(Clone, Debug)]
pub struct CatMeta {
    pub n_centers: usize,
    pub k: usize,
    pub cyclic: bool,
    pub counts: Vec<usize>,
    offsets: Vec<usize>,
}

impl CatMeta {
    pub fn is_center(&self, v: usize) -> bool {
        v < self.n_centers
    }

    /// Pendant vertex indices attached to center `i`.
    pub fn pendants(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn center_of_pendant(&self, v: usize) -> Option<usize> {
        (0..self.n_centers).find(|&i| self.pendants(i).contains(&v))
    }
}

#[derive(Clone, Debug)]
pub struct Caterpillar {
    pub graph: Graph,
    pub meta: CatMeta,
}

pub fn star(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::BadFamily("star needs n >= 1".into()));
    }
    Graph::from_edges(n, &(1..n).map(|v| (0, v)).collect::<Vec<_>>())
}

/// Disjoint union of stars; `sizes` are vertex counts. Each star's center
/// precedes its leaves.
pub fn star_forest(sizes: &[usize]) -> Result<Graph> {
    let total: usize = sizes.iter().sum();
    let mut edges = Vec::new();
    let mut base = 0;
    for &s in sizes {
        if s == 0 {
            return Err(Error::BadFamily("star of 0 vertices".into()));
        }
        for v in 1..s {
            edges.push((base, base + v));
        }
        base += s;
    }
    Graph::from_edges(total, &edges)
}

pub fn path(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::BadFamily("path needs n >= 1".into()));
    }
    Graph::from_edges(n, &(0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>())
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::BadFamily("cycle needs n >= 3".into()));
    }
    let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    edges.push((0, n - 1));
    Graph::from_edges(n, &edges)
}

/// Complete `branch`-ary tree of the given depth, breadth-first labels.
pub fn kary_tree(branch: usize, depth: usize) -> Result<Graph> {
    if branch == 0 {
        return Err(Error::BadFamily("k-ary tree needs branch >= 1".into()));
    }
    let mut n = 1;
    let mut level = 1;
    for _ in 0..depth {
        level *= branch;
        n += level;
    }
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push(((v - 1) / branch, v));
    }
    Graph::from_edges(n, &edges)
}

fn caterpillar(n: usize, k: usize, counts: &[usize], cyclic: bool) -> Result<Caterpillar> {
    if n < if cyclic { 3 } else { 1 } {
        return Err(Error::BadFamily(format!("need n >= {} centers", if cyclic { 3 } else { 1 })));
    }
    if counts.len() != n {
        return Err(Error::BadFamily("one pendant count per center required".into()));
    }
    if counts.iter().any(|&c| c < 2 || c > k) {
        return Err(Error::BadFamily(format!("pendant counts must lie in [2, {k}]")));
    }
    let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    if cyclic {
        edges.push((0, n - 1));
    }
    let mut offsets = vec![n];
    let mut next = n;
    for (i, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            edges.push((i, next));
            next += 1;
        }
        offsets.push(next);
    }
    let graph = Graph::from_edges(next, &edges)?;
    Ok(Caterpillar {
        graph,
        meta: CatMeta { n_centers: n, k, cyclic, counts: counts.to_vec(), offsets },
    })
}

/// Caterpillar cycle: cycle `C_n` with `counts[i]` pendants on center `i`.
pub fn cnk(n: usize, k: usize, counts: &[usize]) -> Result<Caterpillar> {
    caterpillar(n, k, counts, true)
}

/// Caterpillar path: `cnk` minus one cycle edge.
pub fn pnk(n: usize, k: usize, counts: &[usize]) -> Result<Caterpillar> {
    caterpillar(n, k, counts, false)
}

/// Corona `C_n o kK_1`: every center gets exactly `k` pendants.
pub fn corona_cycle(n: usize, k: usize) -> Result<Caterpillar> {
    cnk(n, k.max(2), &vec![k.max(2); n]).and_then(|cat| {
        if k >= 2 {
            Ok(cat)
        } else {
            // k = 1 coronas appear in the Z_1 analysis; pendant counts below 2
            // are outside the caterpillar-cycle constraint but fine here.
            let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
            edges.push((0, n - 1));
            let mut offsets = vec![n];
            let mut next = n;
            for i in 0..n {
                edges.push((i, next));
                next += 1;
                offsets.push(next);
            }
            Ok(Caterpillar {
                graph: Graph::from_edges(next, &edges)?,
                meta: CatMeta { n_centers: n, k, cyclic: true, counts: vec![1; n], offsets },
            })
        }
    })
}

pub fn random_cnk(n: usize, k: usize, seed: u64) -> Result<Caterpillar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=k.max(2))).collect();
    cnk(n, k.max(2), &counts)
}

fn tree_from_pruefer(n: usize, seq: &[usize]) -> Graph {
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&v| degree[v] == 1)
        .map(std::cmp::Reverse)
        .collect();
    for &v in seq {
        let std::cmp::Reverse(leaf) = leaves.pop().unwrap();
        edges.push((leaf.min(v), leaf.max(v)));
        degree[v] -= 1;
        if degree[v] == 1 {
            leaves.push(std::cmp::Reverse(v));
        }
    }
    let std::cmp::Reverse(a) = leaves.pop().unwrap();
    let std::cmp::Reverse(b) = leaves.pop().unwrap();
    edges.push((a.min(b), a.max(b)));
    Graph::from_edges(n, &edges).unwrap()
}

pub fn random_tree(n: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::BadFamily("tree needs n >= 1".into()));
    }
    if n <= 2 {
        return path(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    Ok(tree_from_pruefer(n, &seq))
}

/// All labeled trees on `n` vertices via Prüfer sequences.
pub fn all_labeled_trees(n: usize) -> Result<Vec<Graph>> {
    if n > 9 {
        return Err(Error::BudgetExceeded(9u64.pow(7)));
    }
    if n == 0 {
        return Err(Error::BadFamily("tree needs n >= 1".into()));
    }
    if n <= 2 {
        return Ok(vec![path(n)?]);
    }
    let mut out = Vec::new();
    let mut seq = vec![0usize; n - 2];
    loop {
        out.push(tree_from_pruefer(n, &seq));
        let mut i = 0;
        loop {
            if i == seq.len() {
                return Ok(out);
            }
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

fn rooted_encoding(g: &Graph, v: usize, parent: Option<usize>) -> String {
    let mut subs: Vec<String> = g
        .neighbors(v)
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| rooted_encoding(g, w, Some(v)))
        .collect();
    subs.sort();
    format!("({})", subs.concat())
}

fn tree_centers(g: &Graph) -> Vec<usize> {
    let n = g.n();
    if n == 1 {
        return vec![0];
    }
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        let mut next = Vec::new();
        for &v in &layer {
            removed[v] = true;
            remaining -= 1;
            for &w in g.neighbors(v) {
                if !removed[w] {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    (0..n).filter(|&v| !removed[v]).collect()
}

/// Canonical form of a free tree, equal exactly for isomorphic trees.
pub fn tree_canonical_form(g: &Graph) -> String {
    tree_centers(g)
        .into_iter()
        .map(|c| rooted_encoding(g, c, None))
        .min()
        .unwrap()
}

/// One representative per isomorphism class of trees on `n` vertices,
/// built by attaching a leaf to every smaller representative.
pub fn tree_classes(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > 16 {
        return Err(Error::BadFamily(format!("tree_classes supports 1..=16 vertices, got {n}")));
    }
    let mut current = vec![path(1)?];
    for sz in 2..=n {
        let mut seen = std::collections::HashSet::new();
        let mut next = Vec::new();
        for t in &current {
            for v in 0..t.n() {
                let mut edges = t.edges().to_vec();
                edges.push((v, sz - 1));
                let bigger = Graph::from_edges(sz, &edges)?;
                if seen.insert(tree_canonical_form(&bigger)) {
                    next.push(bigger);
                }
            }
        }
        current = next;
    }
    Ok(current)
}

/// What `build` produced, plus caterpillar layout when the family has one.
pub struct Built {
    pub graph: Graph,
    pub caterpillar: Option<CatMeta>,
}

impl From<Graph> for Built {
    fn from(graph: Graph) -> Self {
        Built { graph, caterpillar: None }
    }
}

impl From<Caterpillar> for Built {
    fn from(c: Caterpillar) -> Self {
        Built { graph: c.graph, caterpillar: Some(c.meta) }
    }
}

/// Parse and build a family string such as `path:5`, `star-forest:5,4,3`,
/// `cnk:n=6,k=3,seed=7`, or `kary:k=2,depth=3`.
pub fn build_spec(spec: &str) -> Result<Built> {
    let (tag, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::BadFamily(format!("expected family:params, got `{spec}`")))?;
    let mut params = std::collections::HashMap::new();
    let mut plain: Vec<usize> = Vec::new();
    for part in rest.split(',').filter(|p| !p.is_empty()) {
        if let Some((k, v)) = part.split_once('=') {
            let v: u64 = v
                .parse()
                .map_err(|_| Error::BadFamily(format!("bad value in `{part}`")))?;
            params.insert(k.to_string(), v);
        } else {
            plain.push(
                part.parse()
                    .map_err(|_| Error::BadFamily(format!("bad number `{part}`")))?,
            );
        }
    }
    let get = |k: &str| -> Result<u64> {
        params
            .get(k)
            .copied()
            .ok_or_else(|| Error::BadFamily(format!("{tag}: missing parameter `{k}`")))
    };
    let single = |plain: &[usize]| -> Result<usize> {
        if plain.len() == 1 {
            Ok(plain[0])
        } else {
            Err(Error::BadFamily(format!("{tag}: expected one size, e.g. `{tag}:5`")))
        }
    };
    let cat_counts = |n: usize, k: usize| -> Result<Vec<usize>> {
        Ok(match params.get("seed") {
            Some(&seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..n).map(|_| rng.gen_range(2..=k)).collect()
            }
            None => vec![k; n],
        })
    };
    match tag {
        "path" => Ok(path(single(&plain)?)?.into()),
        "cycle" => Ok(cycle(single(&plain)?)?.into()),
        "star" => Ok(star(single(&plain)?)?.into()),
        "star-forest" => {
            if plain.is_empty() {
                return Err(Error::BadFamily("star-forest: list star sizes, e.g. `star-forest:5,4,3`".into()));
            }
            Ok(star_forest(&plain)?.into())
        }
        "kary" => Ok(kary_tree(get("k")? as usize, get("depth")? as usize)?.into()),
        "corona" => Ok(corona_cycle(get("n")? as usize, get("k")? as usize)?.into()),
        "cnk" => {
            let (n, k) = (get("n")? as usize, get("k")? as usize);
            Ok(cnk(n, k, &cat_counts(n, k)?)?.into())
        }
        "pnk" => {
            let (n, k) = (get("n")? as usize, get("k")? as usize);
            Ok(pnk(n, k, &cat_counts(n, k)?)?.into())
        }
        "random-tree" => Ok(random_tree(get("n")? as usize, get("seed").unwrap_or(0))?.into()),
        _ => Err(Error::BadFamily(format!("unknown family `{tag}`"))),
    }
}

/// Random connected graph on `n` vertices: a random tree plus extra edges.
pub fn random_connected(n: usize, seed: u64) -> Result<Graph> {
    let t = random_tree(n, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut edges = t.edges().to_vec();
    for u in 0..n {
        for v in u + 1..n {
            if !t.has_edge(u, v) && rng.gen_bool(0.25) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// All connected graphs on `n` vertices (labeled), for exhaustive checks.
pub fn all_connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > 6 {
        return Err(Error::BadFamily("all_connected_graphs supports 1..=6 vertices".into()));
    }
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<_> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            out.push(g);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnk_sizes() {
        let cat = cnk(3, 2, &[2, 2, 2]).unwrap();
        assert_eq!(cat.graph.n(), 9);
        assert_eq!(cat.graph.m(), 9);
        for i in 0..3 {
            assert!(cat.graph.degree(i) >= 4);
        }
        for v in 3..9 {
            assert_eq!(cat.graph.degree(v), 1);
        }
    }

    #[test]
    fn corona_matches_cnk_with_uniform_counts() {
        let a = corona_cycle(4, 2).unwrap();
        let b = cnk(4, 2, &[2, 2, 2, 2]).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(corona_cycle(4, 1).unwrap().graph.n(), 8);
    }

    #[test]
    fn kary_sizes() {
        assert_eq!(kary_tree(2, 2).unwrap().n(), 7);
        assert!(kary_tree(2, 2).unwrap().is_tree());
    }

    #[test]
    fn labeled_tree_counts() {
        assert_eq!(all_labeled_trees(3).unwrap().len(), 3);
        assert_eq!(all_labeled_trees(4).unwrap().len(), 16);
        assert_eq!(all_labeled_trees(5).unwrap().len(), 125);
    }

    #[test]
    fn tree_class_counts() {
        // free trees per vertex count: 1, 1, 1, 2, 3, 6, 11, 23, 47, 106
        let expect = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(tree_classes(i + 1).unwrap().len(), e, "n={}", i + 1);
        }
    }

    #[test]
    fn labeled_trees_dedup_matches_classes() {
        for n in 3..=6 {
            let mut forms: Vec<String> = all_labeled_trees(n)
                .unwrap()
                .iter()
                .map(tree_canonical_form)
                .collect();
            forms.sort();
            forms.dedup();
            assert_eq!(forms.len(), tree_classes(n).unwrap().len());
        }
    }

    #[test]
    fn random_generators_deterministic_and_in_range() {
        assert_eq!(
            random_tree(8, 7).unwrap().edges(),
            random_tree(8, 7).unwrap().edges()
        );
        for seed in 0..1000 {
            let t = random_tree(6, seed).unwrap();
            assert!(t.is_connected(), "seed {seed} gave a disconnected tree");
        }
        for seed in 0..1000 {
            let cat = random_cnk(5, 3, seed).unwrap();
            assert!(cat.meta.counts.iter().all(|&c| (2..=3).contains(&c)));
        }
    }

    #[test]
    fn spec_strings() {
        assert_eq!(build_spec("path:5").unwrap().graph.n(), 5);
        assert_eq!(build_spec("cnk:n=3,k=2").unwrap().graph.n(), 9);
        assert!(build_spec("cnk:n=3,k=2").unwrap().caterpillar.is_some());
        assert_eq!(build_spec("star-forest:5,4,3").unwrap().graph.n(), 12);
        assert!(build_spec("banana:1").is_err());
        assert!(build_spec("cnk:n=3").is_err());
        let a = build_spec("cnk:n=6,k=3,seed=7").unwrap();
        let b = build_spec("cnk:n=6,k=3,seed=7").unwrap();
        assert_eq!(a.graph, b.graph);
    }

    #[test]
    fn cnk_rejects_bad_counts() {
        assert!(cnk(3, 2, &[2, 2, 1]).is_err());
        assert!(cnk(3, 2, &[2, 2, 3]).is_err());
        assert!(cnk(2, 2, &[2, 2]).is_err());
    }
}
