//! Concrete Blue and White strategies: the exact-solver-backed policy, the
//! star-forest pair, the tree policy for the deactivation variant, the
//! pendant-cycle policies for q = 1, q = 2, and general q, the
//! protected-path White defenses, edge-deletion adaptation, and seeded
//! random players.

use std::collections::hash_map::DefaultHasher;
use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::VertexSet;
use crate::engine::{
    enumerate_offers, guaranteed_offer_forest, legal_forces, offer_is_winning, resolve_rule3,
    Offer, WhiteResponse,
};
use crate::error::{Error, Result};
use crate::families::{Built, CatMeta};
use crate::graph::{
    activity, rooted_heights, white_components, ComponentPartition, GameState, Graph,
};
use crate::policy::{Action, BluePolicy, WhitePolicy};
use crate::protected::{best_path, path_territory, PathVariant, ProtectedPath};
use crate::solver::{solve, SolveConfig};

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

/// An offer every response to which concedes a force, if one is easy to
/// find. Fast path: q+1 singleton pendant components hanging off distinct
/// blue vertices. Fallback: scan minimal offers when the partition is small.
pub fn find_winning_offer(state: &GameState, q: usize) -> Option<Offer> {
    let partition = white_components(state);
    if partition.len() < q + 1 {
        return None;
    }
    let mut chosen = Vec::new();
    let mut used_centers = std::collections::HashSet::new();
    for (i, comp) in partition.iter().enumerate() {
        let Some(v) = comp.min() else { continue };
        if comp.len() != 1 || state.graph.degree(v) != 1 {
            continue;
        }
        let center = state.graph.neighbors(v)[0];
        if used_centers.insert(center) {
            chosen.push(i);
            if chosen.len() == q + 1 {
                return Some(Offer::new(chosen));
            }
        }
    }
    if partition.len() <= 16 {
        return enumerate_offers(&partition, q, true)
            .into_iter()
            .find(|o| offer_is_winning(state, &partition, o));
    }
    None
}

/// Smallest white vertex satisfying a predicate.
fn smallest_white(state: &GameState, pred: impl Fn(usize) -> bool) -> Option<usize> {
    (0..state.graph.n()).find(|&v| state.is_white(v) && pred(v))
}

/// Plays the first move of an optimal line computed by the exact solver.
#[derive(Clone)]
pub struct OptimalBlue {
    cfg: SolveConfig,
}

impl OptimalBlue {
    pub fn new(cfg: SolveConfig) -> Self {
        OptimalBlue { cfg }
    }
}

impl BluePolicy for OptimalBlue {
    fn name(&self) -> String {
        "optimal".into()
    }

    fn decide(&mut self, state: &GameState, q: usize) -> Result<Action> {
        let cfg = SolveConfig { q, ..self.cfg.clone() };
        let result = solve(state.graph, &cfg, &state.blue)?;
        match result.principal_line.into_iter().next() {
            Some(crate::transcript::Event::Spend(v)) => Ok(Action::Spend(v)),
            Some(crate::transcript::Event::Force(u, w)) => Ok(Action::Force(u, w)),
            Some(crate::transcript::Event::Rule3 { offer, .. }) => {
                Ok(Action::Offer(Offer::new(offer)))
            }
            Some(crate::transcript::Event::Deactivate(_)) => Ok(Action::Deactivate),
            None => Err(Error::Policy("no move available: board already finished".into())),
        }
    }

    fn clone_box(&self) -> Box<dyn BluePolicy> {
        Box::new(self.clone())
    }
}

/// Star decomposition of a star forest: one `(center, leaves)` entry per
/// component. Isolated vertices are centers with no leaves.
pub fn star_layout(g: &Graph) -> Result<Vec<(usize, Vec<usize>)>> {
    let comps = white_components(&GameState::all_white(g));
    let mut out = Vec::new();
    for comp in &comps {
        let verts: Vec<usize> = comp.iter().collect();
        if verts.len() == 1 {
            out.push((verts[0], Vec::new()));
            continue;
        }
        let center = verts
            .iter()
            .copied()
            .find(|&v| g.degree(v) == verts.len() - 1)
            .ok_or_else(|| Error::Domain("component is not a star".into()))?;
        let leaves: Vec<usize> = verts.iter().copied().filter(|&v| v != center).collect();
        if leaves.iter().any(|&v| g.degree(v) != 1) {
            return Err(Error::Domain("component is not a star".into()));
        }
        out.push((center, leaves));
    }
    Ok(out)
}

/// Blue on a star forest: seed each star with one leaf, force the centers,
/// offer while enough stars stay active, then finish stars by hand.
#[derive(Clone, Debug, Default)]
pub struct StarForestBlue;

impl BluePolicy for StarForestBlue {
    fn name(&self) -> String {
        "star-forest".into()
    }

    fn decide(&mut self, state: &GameState, q: usize) -> Result<Action> {
        if let Some(&f) = legal_forces(state).first() {
            return Ok(Action::Force(f.0, f.1));
        }
        if activity(state) >= q + 1 {
            return Ok(Action::Offer(guaranteed_offer_forest(state, q)?));
        }
        let stars = star_layout(state.graph)?;
        // seed a fully white star with its lowest leaf (or lone vertex)
        for (center, leaves) in &stars {
            if state.is_white(*center) && leaves.iter().all(|&v| state.is_white(v)) {
                return Ok(Action::Spend(*leaves.first().unwrap_or(center)));
            }
        }
        // all centers blue and too few active stars: finish by hand
        smallest_white(state, |v| state.graph.degree(v) == 1)
            .or_else(|| smallest_white(state, |_| true))
            .map(Action::Spend)
            .ok_or_else(|| Error::Policy("no white vertex left".into()))
    }

    fn clone_box(&self) -> Box<dyn BluePolicy> {
        Box::new(self.clone())
    }
}

/// White on a star forest: protect the min(q, k) largest stars. Offered a
/// component outside them, return it; otherwise two offered components
/// share a protected star, and returning both concedes nothing.
#[derive(Clone, Debug, Default)]
pub struct StarForestWhite;

impl WhitePolicy for StarForestWhite {
    fn name(&self) -> String {
        "star-forest".into()
    }

    fn respond(
        &mut self,
        state: &GameState,
        partition: &ComponentPartition,
        offer: &Offer,
        q: usize,
    ) -> Result<WhiteResponse> {
        let mut stars = star_layout(state.graph)?;
        stars.sort_by_key(|(c, leaves)| (std::cmp::Reverse(leaves.len()), *c));
        let m = q.min(stars.len());
        let star_sets: Vec<VertexSet> = stars[..m]
            .iter()
            .map(|(c, leaves)| {
                VertexSet::from_iter(state.graph.n(), leaves.iter().copied().chain([*c]))
            })
            .collect();
        let in_protected = |i: usize| -> Option<usize> {
            let v = partition[i].min()?;
            star_sets.iter().position(|s| s.contains(v))
        };
        if let Some(&i) = offer.components.iter().find(|&&i| in_protected(i).is_none()) {
            return Ok(WhiteResponse::new(vec![i]));
        }
        let mut by_star: std::collections::HashMap<usize, Vec<usize>> = Default::default();
        for &i in &offer.components {
            by_star.entry(in_protected(i).unwrap()).or_default().push(i);
        }
        by_star
            .into_values()
            .filter(|v| v.len() >= 2)
            .min_by_key(|v| v[0])
            .map(|v| WhiteResponse::new(v[..2].to_vec()))
            .ok_or_else(|| {
                Error::Policy("offer pierced every protected star separately".into())
            })
    }

    fn clone_box(&self) -> Box<dyn WhitePolicy> {
        Box::new(self.clone())
    }
}

/// Blue on a tree under the deactivation variant: spend the root, then work
/// down the levels, letting deactivation silence all but q branching
/// vertices per level.
#[derive(Clone, Debug)]
pub struct TreeBlue {
    pub root: usize,
}

impl TreeBlue {
    pub fn new(g: &Graph, root: usize) -> Result<Self> {
        if !g.is_tree() {
            return Err(Error::NotATree);
        }
        if root >= g.n() {
            return Err(Error::Domain(format!("root {root} out of range")));
        }
        Ok(TreeBlue { root })
    }
}

impl BluePolicy for TreeBlue {
    fn name(&self) -> String {
        format!("tree:root={}", self.root)
    }

    fn decide(&mut self, state: &GameState, q: usize) -> Result<Action> {
        if let Some(&f) = legal_forces(state).first() {
            return Ok(Action::Force(f.0, f.1));
        }
        if activity(state) >= q + 1 {
            return Ok(Action::Deactivate);
        }
        if state.is_white(self.root) {
            return Ok(Action::Spend(self.root));
        }
        let (heights, _) = rooted_heights(state.graph, self.root)?;
        (0..state.graph.n())
            .filter(|&v| state.is_white(v))
            .min_by_key(|&v| (heights[v], v))
            .map(Action::Spend)
            .ok_or_else(|| Error::Policy("no white vertex left".into()))
    }

    fn clone_box(&self) -> Box<dyn BluePolicy> {
        Box::new(self.clone())
    }
}

/// Blue on a pendant cycle at q = 1: force when possible, offer when two
/// centers are active, otherwise spend pendants of white centers first.
#[derive(Clone, Debug)]
pub struct CoronaBlueZ1 {
    pub meta: CatMeta,
}

impl BluePolicy for CoronaBlueZ1 {
    fn name(&self) -> String {
        "corona-z1".into()
    }

    fn decide(&mut self, state: &GameState, q: usize) -> Result<Action> {
        if let Some(&f) = legal_forces(state).first() {
            return Ok(Action::Force(f.0, f.1));
        }
        if activity(state) >= q + 1 {
            if let Some(o) = find_winning_offer(state, q) {
                return Ok(Action::Offer(o));
            }
        }
        let meta = &self.meta;
        smallest_white(state, |v| {
            meta.center_of_pendant(v).is_some_and(|c| state.is_white(c))
        })
        .or_else(|| smallest_white(state, |v| !meta.is_center(v)))
        .or_else(|| smallest_white(state, |_| true))
        .map(Action::Spend)
        .ok_or_else(|| Error::Policy("no white vertex left".into()))
    }

    fn clone_box(&self) -> Box<dyn BluePolicy> {
        Box::new(self.clone())
    }
}

/// White on a pendant cycle at q = 1: commit to a guard center with no blue
/// pendants and keep its neighborhood out of every response.
#[derive(Clone, Debug)]
pub struct CoronaWhiteZ1 {
    pub meta: CatMeta,
    guard: Option<Option<usize>>,
}

impl CoronaWhiteZ1 {
    pub fn new(meta: CatMeta) -> Self {
        CoronaWhiteZ1 { meta, guard: None }
    }
}

impl WhitePolicy for CoronaWhiteZ1 {
    fn name(&self) -> String {
        "corona-z1".into()
    }

    fn memo_key(&self) -> Option<u64> {
        Some(hash_of(&self.guard))
    }

    fn respond(
        &mut self,
        state: &GameState,
        partition: &ComponentPartition,
        offer: &Offer,
        _q: usize,
    ) -> Result<WhiteResponse> {
        // a response conceding no force leaves the board unchanged and is
        // always safe; the guard only matters once every response concedes
        for size in (1..=offer.components.len()).rev() {
            for subset in combinations(&offer.components, size) {
                let resp = WhiteResponse::new(subset);
                if resolve_rule3(state, partition, offer, &resp)?.is_empty() {
                    return Ok(resp);
                }
            }
        }
        let meta = &self.meta;
        let guard = *self.guard.get_or_insert_with(|| {
            (0..meta.n_centers)
                .find(|&c| {
                    state.is_white(c) && meta.pendants(c).all(|p| state.is_white(p))
                })
                .or_else(|| (0..meta.n_centers).find(|&c| state.is_white(c)))
        });
        let Some(g0) = guard else {
            return Ok(WhiteResponse::new(offer.components.clone()));
        };
        if state.is_white(g0) {
            // return a component that does not contain the guard
            if let Some(&i) =
                offer.components.iter().find(|&&i| !partition[i].contains(g0))
            {
                return Ok(WhiteResponse::new(vec![i]));
            }
            return Ok(WhiteResponse::new(offer.components.clone()));
        }
        // guard is blue: avoid its pendants so it keeps two white neighbors
        let touches_guard = |i: usize| meta.pendants(g0).any(|p| partition[i].contains(p));
        if let Some(&i) = offer.components.iter().find(|&&i| !touches_guard(i)) {
            return Ok(WhiteResponse::new(vec![i]));
        }
        Ok(WhiteResponse::new(offer.components.clone()))
    }

    fn clone_box(&self) -> Box<dyn WhitePolicy> {
        Box::new(self.clone())
    }
}

/// Blue on a pendant cycle at q = 2: open with pendants of two adjacent
/// centers, offer when three centers are active, and otherwise split the
/// best protected path at its middle center.
#[derive(Clone, Debug)]
pub struct CaterpillarQ2Blue {
    pub meta: CatMeta,
}

impl BluePolicy for CaterpillarQ2Blue {
    fn name(&self) -> String {
        "caterpillar-q2".into()
    }

    fn decide(&mut self, state: &GameState, q: usize) -> Result<Action> {
        if let Some(&f) = legal_forces(state).first() {
            return Ok(Action::Force(f.0, f.1));
        }
        let meta = &self.meta;
        let bad = crate::protected::classify_centers(state, meta)?;
        let bad_count = bad.iter().filter(|&&b| b).count();
        if bad_count < 2 {
            // opening: pendants of two adjacent centers
            let target = match bad.iter().position(|&b| b) {
                None => 0,
                Some(c) => (c + 1) % meta.n_centers,
            };
            if let Some(p) = meta.pendants(target).find(|&p| state.is_white(p)) {
                return Ok(Action::Spend(p));
            }
        }
        if activity(state) >= q + 1 {
            if let Some(o) = find_winning_offer(state, q) {
                return Ok(Action::Offer(o));
            }
        }
        if let Some(sp) = best_path(state, meta, PathVariant::Q2)? {
            if sp.phi >= 1 {
                let pos = sp.path.centers(meta.n_centers);
                let mid = pos[(pos.len() + 1) / 2 - 1];
                if let Some(p) = meta.pendants(mid).find(|&p| state.is_white(p)) {
                    return Ok(Action::Spend(p));
                }
            }
        }
        smallest_white(state, |v| !meta.is_center(v))
            .or_else(|| smallest_white(state, |_| true))
            .map(Action::Spend)
            .ok_or_else(|| Error::Policy("no white vertex left".into()))
    }

    fn clone_box(&self) -> Box<dyn BluePolicy> {
        Box::new(self.clone())
    }
}

/// White defending the best protected path: return components off the
/// path's territory, else the smallest response conceding no force.
#[derive(Clone, Debug)]
pub struct ProtectedPathWhite {
    pub meta: CatMeta,
    pub variant: PathVariant,
    committed: Option<ProtectedPath>,
}

impl ProtectedPathWhite {
    pub fn new(meta: CatMeta, variant: PathVariant) -> Self {
        ProtectedPathWhite { meta, variant, committed: None }
    }

    pub fn committed(&self) -> Option<&ProtectedPath> {
        self.committed.as_ref()
    }

    fn recommit(&mut self, state: &GameState) -> Result<usize> {
        let mut paths = crate::protected::protected_paths(state, &self.meta, self.variant)?;
        paths.sort_by_key(|s| (std::cmp::Reverse(s.phi), s.path.start, s.path.len));
        let phi_g = paths.first().map(|s| s.phi).unwrap_or(0);
        let keep = self
            .committed
            .as_ref()
            .and_then(|c| paths.iter().find(|s| s.path == *c))
            .is_some_and(|s| s.phi == phi_g);
        if !keep {
            self.committed = paths.into_iter().next().map(|s| s.path);
        }
        Ok(phi_g)
    }
}

fn combinations(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let k = items.len();
    if size == 0 || size > k {
        return Vec::new();
    }
    let mut idx: Vec<usize> = (0..size).collect();
    let mut out = Vec::new();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(i) = (0..size).rev().find(|&i| idx[i] != k - size + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl WhitePolicy for ProtectedPathWhite {
    fn name(&self) -> String {
        match self.variant {
            PathVariant::Q2 => "protected-q2".into(),
            PathVariant::Q3 => "protected-q3".into(),
        }
    }

    fn memo_key(&self) -> Option<u64> {
        Some(hash_of(&self.committed))
    }

    fn respond(
        &mut self,
        state: &GameState,
        partition: &ComponentPartition,
        offer: &Offer,
        _q: usize,
    ) -> Result<WhiteResponse> {
        let phi_g = self.recommit(state)?;
        let Some(path) = self.committed.clone().filter(|_| phi_g > 0) else {
            return Ok(WhiteResponse::new(offer.components.clone()));
        };
        let territory = VertexSet::from_iter(
            state.graph.n(),
            path_territory(&self.meta, &path),
        );
        if let Some(&i) = offer
            .components
            .iter()
            .find(|&&i| partition[i].iter().all(|v| !territory.contains(v)))
        {
            return Ok(WhiteResponse::new(vec![i]));
        }
        // every offered component touches the path: find a response that
        // concedes nothing
        for size in 1..=offer.components.len() {
            for subset in combinations(&offer.components, size) {
                let resp = WhiteResponse::new(subset);
                if resolve_rule3(state, partition, offer, &resp)?.is_empty() {
                    return Ok(resp);
                }
            }
        }
        Err(Error::ClaimFalsified(
            "every response to an on-path offer concedes a force".into(),
        ))
    }

    fn clone_box(&self) -> Box<dyn WhitePolicy> {
        Box::new(self.clone())
    }
}

/// Blue on a pendant cycle for general q: open with token pairs spread
/// evenly over the cycle, offer pendant singletons while enough centers are
/// active, and split every maximal run of white centers each round.
#[derive(Clone, Debug)]
pub struct CaterpillarGeneralBlue {
    pub meta: CatMeta,
    planned: VecDeque<usize>,
    opened: bool,
    option3_rounds: u32,
}

impl CaterpillarGeneralBlue {
    pub fn new(meta: CatMeta) -> Self {
        CaterpillarGeneralBlue { meta, planned: VecDeque::new(), opened: false, option3_rounds: 0 }
    }

    /// How many run-splitting rounds have fired so far.
    pub fn option3_rounds(&self) -> u32 {
        self.option3_rounds
    }

    /// Token pairs spread evenly over the cycle: positions 2ni/p and the
    /// next center, for i below p/2, where p is the smallest even number
    /// above q.
    pub fn opening_positions(n: usize, q: usize) -> Vec<usize> {
        let p = if (q + 1) % 2 == 0 { q + 1 } else { q + 2 };
        let mut out = Vec::new();
        for i in 0..p / 2 {
            let a = (2 * n * i / p) % n;
            for v in [a, (a + 1) % n] {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// Maximal runs of consecutive white centers around the cycle.
    fn white_runs(&self, state: &GameState) -> Vec<Vec<usize>> {
        let n = self.meta.n_centers;
        let blue: Vec<usize> = (0..n).filter(|&c| state.blue.contains(c)).collect();
        if blue.is_empty() {
            return vec![(0..n).collect()];
        }
        let mut runs: Vec<Vec<usize>> = Vec::new();
        for (i, &b) in blue.iter().enumerate() {
            let next = blue[(i + 1) % blue.len()];
            let gap = (next + n - b - 1) % n;
            if gap > 0 {
                runs.push((1..=gap).map(|j| (b + j) % n).collect());
            }
        }
        if runs.is_empty() && blue.len() < n {
            // single blue center: the rest is one run
            let b = blue[0];
            runs.push((1..n).map(|j| (b + j) % n).collect());
        }
        runs.sort_by_key(|r| r[0]);
        runs
    }
}

impl BluePolicy for CaterpillarGeneralBlue {
    fn name(&self) -> String {
        "caterpillar-general".into()
    }

    fn is_memoryless(&self) -> bool {
        false
    }

    fn decide(&mut self, state: &GameState, q: usize) -> Result<Action> {
        loop {
            match self.planned.front() {
                Some(&v) if state.blue.contains(v) => {
                    self.planned.pop_front();
                }
                Some(&v) => {
                    self.planned.pop_front();
                    return Ok(Action::Spend(v));
                }
                None => break,
            }
        }
        if !self.opened {
            self.opened = true;
            self.planned
                .extend(Self::opening_positions(self.meta.n_centers, q));
            if let Some(&v) = self.planned.front() {
                if !state.blue.contains(v) {
                    self.planned.pop_front();
                    return Ok(Action::Spend(v));
                }
            }
        }
        if activity(state) >= q + 1 {
            if let Some(o) = find_winning_offer(state, q) {
                return Ok(Action::Offer(o));
            }
        }
        if let Some(&f) = legal_forces(state).first() {
            return Ok(Action::Force(f.0, f.1));
        }
        let runs = self.white_runs(state);
        if !runs.is_empty() {
            let p = if (q + 1) % 2 == 0 { q + 1 } else { q + 2 };
            if runs.len() > p / 2 - 1 {
                return Err(Error::ClaimFalsified(format!(
                    "{} maximal white-center runs, expected at most {}",
                    runs.len(),
                    p / 2 - 1
                )));
            }
            self.option3_rounds += 1;
            for run in runs {
                if run.len() <= 2 {
                    self.planned.extend(run);
                } else {
                    let a = (run.len() - 1) / 2;
                    self.planned.extend([run[a], run[a + 1]]);
                }
            }
            let v = self.planned.pop_front().unwrap();
            return Ok(Action::Spend(v));
        }
        // all centers blue: finish the pendant stars by hand
        smallest_white(state, |v| !self.meta.is_center(v))
            .or_else(|| smallest_white(state, |_| true))
            .map(Action::Spend)
            .ok_or_else(|| Error::Policy("no white vertex left".into()))
    }

    fn clone_box(&self) -> Box<dyn BluePolicy> {
        Box::new(self.clone())
    }
}

/// Wraps a policy built for `original` so it plays on `original` minus one
/// edge: forces along the deleted edge become spends, and offers whose
/// component split in two are repaired against the real partition.
pub struct EdgeDeletionBlue {
    original: Graph,
    removed: (usize, usize),
    base: Box<dyn BluePolicy>,
}

pub fn adapt_edge_deletion(
    original: &Graph,
    e: (usize, usize),
    base: Box<dyn BluePolicy>,
) -> Result<Box<dyn BluePolicy>> {
    let (u, v) = (e.0.min(e.1), e.0.max(e.1));
    if !original.has_edge(u, v) {
        return Err(Error::MissingEdge(u, v));
    }
    Ok(Box::new(EdgeDeletionBlue { original: original.clone(), removed: (u, v), base }))
}

impl BluePolicy for EdgeDeletionBlue {
    fn name(&self) -> String {
        format!("{}-minus-{}-{}", self.base.name(), self.removed.0, self.removed.1)
    }

    fn is_memoryless(&self) -> bool {
        self.base.is_memoryless()
    }

    fn decide(&mut self, state: &GameState, q: usize) -> Result<Action> {
        let shadow = GameState::new(&self.original, state.blue.clone());
        match self.base.decide(&shadow, q)? {
            Action::Spend(v) => Ok(Action::Spend(v)),
            Action::Force(x, y) => {
                if (x.min(y), x.max(y)) == self.removed {
                    Ok(Action::Spend(y))
                } else {
                    Ok(Action::Force(x, y))
                }
            }
            Action::Deactivate => Ok(Action::Deactivate),
            Action::Offer(offer) => {
                let shadow_partition = white_components(&shadow);
                let partition = white_components(state);
                let mut mapped = Vec::new();
                let mut split: Option<(usize, usize)> = None;
                for &i in &offer.components {
                    match partition.iter().position(|c| *c == shadow_partition[i]) {
                        Some(j) => mapped.push(j),
                        None => {
                            // the deleted edge split this component in two
                            let parts: Vec<usize> = partition
                                .iter()
                                .enumerate()
                                .filter(|(_, c)| c.is_subset(&shadow_partition[i]))
                                .map(|(j, _)| j)
                                .collect();
                            if parts.len() != 2 || split.is_some() {
                                return Err(Error::Policy(
                                    "offered component did not split cleanly".into(),
                                ));
                            }
                            split = Some((parts[0], parts[1]));
                        }
                    }
                }
                let Some((a, b)) = split else {
                    let candidate = Offer::new(mapped);
                    if offer_is_winning(state, &partition, &candidate) {
                        return Ok(Action::Offer(candidate));
                    }
                    // the only conceded force on the losing responses ran
                    // along the deleted edge; buy its white endpoint instead
                    for y in [self.removed.1, self.removed.0] {
                        if state.is_white(y) {
                            return Ok(Action::Spend(y));
                        }
                    }
                    return Err(Error::ClaimFalsified(
                        "mapped offer lost with both deleted-edge endpoints blue".into(),
                    ));
                };
                for half in [a, b] {
                    let mut comps = mapped.clone();
                    comps.push(half);
                    let candidate = Offer::new(comps);
                    if offer_is_winning(state, &partition, &candidate) {
                        return Ok(Action::Offer(candidate));
                    }
                }
                Err(Error::ClaimFalsified(
                    "neither half of the split component yields a winning offer".into(),
                ))
            }
        }
    }

    fn clone_box(&self) -> Box<dyn BluePolicy> {
        Box::new(EdgeDeletionBlue {
            original: self.original.clone(),
            removed: self.removed,
            base: self.base.clone_box(),
        })
    }
}

/// Seeded random Blue: mixes forces, easy winning offers, and spends. Every
/// move colors a vertex, so play always terminates.
#[derive(Clone)]
pub struct RandomBlue {
    rng: ChaCha8Rng,
}

impl RandomBlue {
    pub fn new(seed: u64) -> Self {
        RandomBlue { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl BluePolicy for RandomBlue {
    fn name(&self) -> String {
        "random".into()
    }

    fn is_memoryless(&self) -> bool {
        false
    }

    fn decide(&mut self, state: &GameState, q: usize) -> Result<Action> {
        let forces = legal_forces(state);
        let roll = self.rng.gen_range(0..3u32);
        if roll == 0 && !forces.is_empty() {
            let f = forces[self.rng.gen_range(0..forces.len())];
            return Ok(Action::Force(f.0, f.1));
        }
        if roll <= 1 {
            if let Some(o) = find_winning_offer(state, q) {
                return Ok(Action::Offer(o));
            }
        }
        if let Some(&f) = forces.first() {
            return Ok(Action::Force(f.0, f.1));
        }
        let whites: Vec<usize> = (0..state.graph.n()).filter(|&v| state.is_white(v)).collect();
        if whites.is_empty() {
            return Err(Error::Policy("no white vertex left".into()));
        }
        Ok(Action::Spend(whites[self.rng.gen_range(0..whites.len())]))
    }

    fn choose_force(&mut self, _state: &GameState, forces: &[(usize, usize)]) -> (usize, usize) {
        forces[self.rng.gen_range(0..forces.len())]
    }

    fn clone_box(&self) -> Box<dyn BluePolicy> {
        Box::new(self.clone())
    }
}

/// Seeded random White: uniform nonempty response subsets and uniform
/// deactivation choices.
#[derive(Clone)]
pub struct RandomWhite {
    rng: ChaCha8Rng,
}

impl RandomWhite {
    pub fn new(seed: u64) -> Self {
        RandomWhite { rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl WhitePolicy for RandomWhite {
    fn name(&self) -> String {
        "random".into()
    }

    fn memo_key(&self) -> Option<u64> {
        None
    }

    fn respond(
        &mut self,
        _state: &GameState,
        _partition: &ComponentPartition,
        offer: &Offer,
        _q: usize,
    ) -> Result<WhiteResponse> {
        let k = offer.components.len();
        let mask = self.rng.gen_range(1u64..1 << k);
        Ok(WhiteResponse::new(
            offer
                .components
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &c)| c)
                .collect(),
        ))
    }

    fn choose_deactivation(&mut self, state: &GameState) -> Result<usize> {
        let options: Vec<usize> = (0..state.graph.n())
            .filter(|&v| {
                state.is_white(v)
                    && state.graph.neighbors(v).iter().any(|&u| state.blue.contains(u))
            })
            .collect();
        if options.is_empty() {
            return Err(Error::Policy("no blue-adjacent white vertex".into()));
        }
        Ok(options[self.rng.gen_range(0..options.len())])
    }

    fn clone_box(&self) -> Box<dyn WhitePolicy> {
        Box::new(self.clone())
    }
}

fn spec_params(rest: &str) -> Result<std::collections::HashMap<String, u64>> {
    let mut out = std::collections::HashMap::new();
    for part in rest.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got `{part}`")))?;
        out.insert(
            k.to_string(),
            v.parse().map_err(|_| Error::Parse(format!("bad value in `{part}`")))?,
        );
    }
    Ok(out)
}

fn need_cat(built: &Built) -> Result<CatMeta> {
    built
        .caterpillar
        .clone()
        .ok_or_else(|| Error::BadFamily("this strategy needs a pendant-cycle family".into()))
}

/// Build a Blue policy from a spec string such as `optimal`, `star-forest`,
/// `tree:root=3`, `corona-z1`, `caterpillar-q2`, `caterpillar-general`, or
/// `random:seed=7`.
pub fn make_blue(spec: &str, built: &Built, _q: usize) -> Result<Box<dyn BluePolicy>> {
    let (tag, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let params = spec_params(rest)?;
    match tag {
        "optimal" => Ok(Box::new(OptimalBlue::new(SolveConfig::new(0)))),
        "optimal-star" => Ok(Box::new(OptimalBlue::new(SolveConfig::star(0)))),
        "star-forest" => Ok(Box::new(StarForestBlue)),
        "tree" => {
            let root = params.get("root").copied().unwrap_or(0) as usize;
            Ok(Box::new(TreeBlue::new(&built.graph, root)?))
        }
        "corona-z1" => Ok(Box::new(CoronaBlueZ1 { meta: need_cat(built)? })),
        "caterpillar-q2" => Ok(Box::new(CaterpillarQ2Blue { meta: need_cat(built)? })),
        "caterpillar-general" => Ok(Box::new(CaterpillarGeneralBlue::new(need_cat(built)?))),
        "random" => Ok(Box::new(RandomBlue::new(params.get("seed").copied().unwrap_or(0)))),
        _ => Err(Error::BadFamily(format!("unknown blue strategy `{tag}`"))),
    }
}

/// Build a White policy from a spec string such as `full`, `star-forest`,
/// `corona-z1`, `protected-q2`, `protected-q3`, or `random:seed=7`.
pub fn make_white(spec: &str, built: &Built) -> Result<Box<dyn WhitePolicy>> {
    let (tag, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let params = spec_params(rest)?;
    match tag {
        "full" => Ok(Box::new(crate::policy::FullResponseWhite)),
        "star-forest" => Ok(Box::new(StarForestWhite)),
        "corona-z1" => Ok(Box::new(CoronaWhiteZ1::new(need_cat(built)?))),
        "protected-q2" => {
            Ok(Box::new(ProtectedPathWhite::new(need_cat(built)?, PathVariant::Q2)))
        }
        "protected-q3" => {
            Ok(Box::new(ProtectedPathWhite::new(need_cat(built)?, PathVariant::Q3)))
        }
        "random" => Ok(Box::new(RandomWhite::new(params.get("seed").copied().unwrap_or(0)))),
        _ => Err(Error::BadFamily(format!("unknown white strategy `{tag}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::solver::{certify_lower, certify_upper, zq_value};

    fn all_white_value(g: &Graph, cfg: &SolveConfig) -> u32 {
        zq_value(g, cfg, &VertexSet::empty(g.n())).unwrap().value
    }

    fn star_formula(sizes: &[usize], q: usize) -> u32 {
        let mut s = sizes.to_vec();
        s.sort_unstable_by(|a, b| b.cmp(a));
        let m = q.min(s.len());
        (s.len() + s[..m].iter().map(|&n| n.saturating_sub(3)).sum::<usize>()) as u32
    }

    #[test]
    fn winning_offer_helper() {
        // two blue-centered stars, q = 1: pendant singletons win
        let g = families::star_forest(&[4, 4]).unwrap();
        let st = GameState::new(&g, VertexSet::from_iter(8, [0, 4]));
        let offer = find_winning_offer(&st, 1).unwrap();
        assert!(offer_is_winning(&st, &white_components(&st), &offer));

        // single star, q = 1: no offer of two components can win
        let s = families::star(5).unwrap();
        let st = GameState::new(&s, VertexSet::from_iter(5, [0]));
        assert!(find_winning_offer(&st, 1).is_none());
    }

    #[test]
    fn optimal_blue_certifies_exact_value() {
        for (g, q) in [
            (families::path(5).unwrap(), 1),
            (families::star(5).unwrap(), 1),
            (families::star_forest(&[4, 3]).unwrap(), 1),
            (families::cycle(5).unwrap(), 2),
        ] {
            let cfg = SolveConfig::new(q);
            let exact = all_white_value(&g, &cfg);
            let up = certify_upper(&g, &cfg, &OptimalBlue::new(cfg.clone())).unwrap();
            assert_eq!(up, exact);
        }
    }

    #[test]
    fn star_policies_pin_the_formula() {
        for (sizes, qs) in [
            (vec![5, 4, 3], vec![0, 1, 2]),
            (vec![4, 4], vec![0, 1, 2, 3]),
            (vec![5], vec![0, 2, 12]),
            (vec![6, 5, 2, 1], vec![1, 2]),
        ] {
            let g = families::star_forest(&sizes).unwrap();
            for &q in &qs {
                let cfg = SolveConfig::new(q);
                let expect = star_formula(&sizes, q);
                assert_eq!(all_white_value(&g, &cfg), expect, "solver {sizes:?} q={q}");
                assert_eq!(
                    certify_upper(&g, &cfg, &StarForestBlue).unwrap(),
                    expect,
                    "blue {sizes:?} q={q}"
                );
                assert_eq!(
                    certify_lower(&g, &cfg, &StarForestWhite).unwrap(),
                    expect,
                    "white {sizes:?} q={q}"
                );
            }
        }
    }

    fn tree_height_bound(g: &Graph, root: usize, q: usize) -> u32 {
        let (heights, h) = rooted_heights(g, root).unwrap();
        let mut total = g.degree(root) as u32;
        for level in 1..h.max(1) {
            let mut degs: Vec<usize> = (0..g.n())
                .filter(|&v| heights[v] == level)
                .map(|v| g.degree(v).saturating_sub(2))
                .collect();
            degs.sort_unstable_by(|a, b| b.cmp(a));
            total += degs.iter().take(q).sum::<usize>() as u32;
        }
        total
    }

    #[test]
    fn tree_blue_meets_height_bound() {
        for n in 2..=7 {
            for t in families::tree_classes(n).unwrap() {
                for q in 1..=2usize {
                    let cfg = SolveConfig::star(q);
                    for root in 0..n {
                        let up =
                            certify_upper(&t, &cfg, &TreeBlue::new(&t, root).unwrap()).unwrap();
                        let bound = tree_height_bound(&t, root, q);
                        assert!(up <= bound, "n={n} root={root} q={q}: {up} > {bound}");
                    }
                }
            }
        }
    }

    #[test]
    fn corona_policies_pin_k_plus_one() {
        for (n, k) in [(3, 2), (4, 2), (3, 1)] {
            let cat = families::corona_cycle(n, k).unwrap();
            let cfg = SolveConfig::new(1);
            let expect = (k + 1) as u32;
            let blue = CoronaBlueZ1 { meta: cat.meta.clone() };
            assert_eq!(certify_upper(&cat.graph, &cfg, &blue).unwrap(), expect, "C_{n} k={k}");
            let white = CoronaWhiteZ1::new(cat.meta.clone());
            assert_eq!(certify_lower(&cat.graph, &cfg, &white).unwrap(), expect, "C_{n} k={k}");
        }
    }

    #[test]
    fn q2_blue_stays_under_log_bound() {
        for n in [3, 4, 5] {
            let cat = families::cnk(n, 2, &vec![2; n]).unwrap();
            let cfg = SolveConfig::new(2);
            let up = certify_upper(&cat.graph, &cfg, &CaterpillarQ2Blue { meta: cat.meta.clone() })
                .unwrap();
            let exact = all_white_value(&cat.graph, &cfg);
            let bound = ((n as f64 - 2.0).log2().ceil().max(0.0)) as u32 + 2 * 2 + 1;
            assert!(exact <= up && up <= bound, "n={n}: exact={exact} up={up} bound={bound}");
        }
    }

    #[test]
    fn protected_white_is_sound() {
        for n in [3, 4] {
            let cat = families::cnk(n, 2, &vec![2; n]).unwrap();
            for (variant, q) in [(PathVariant::Q2, 2), (PathVariant::Q3, 3)] {
                let cfg = SolveConfig::new(q);
                let exact = all_white_value(&cat.graph, &cfg);
                let lo = certify_lower(
                    &cat.graph,
                    &cfg,
                    &ProtectedPathWhite::new(cat.meta.clone(), variant),
                )
                .unwrap();
                assert!(lo >= 1 && lo <= exact, "n={n} {variant:?}: lo={lo} exact={exact}");
            }
        }
    }

    #[test]
    fn general_opening_positions() {
        // q = 3 gives p = 4: pairs at 0 and n/2
        assert_eq!(CaterpillarGeneralBlue::opening_positions(8, 3), vec![0, 1, 4, 5]);
        // q = 1 gives p = 2: one pair
        assert_eq!(CaterpillarGeneralBlue::opening_positions(6, 1), vec![0, 1]);
        // q = 4 gives p = 6
        assert_eq!(
            CaterpillarGeneralBlue::opening_positions(12, 4),
            vec![0, 1, 4, 5, 8, 9]
        );
    }

    #[test]
    fn edge_deletion_adaptation_costs_at_most_one_more() {
        for n in 4..=6 {
            for t in families::tree_classes(n).unwrap() {
                let cfg = SolveConfig::new(1);
                let base_value = all_white_value(&t, &cfg);
                for &e in t.edges() {
                    let reduced = t.delete_edge(e).unwrap();
                    let adapted =
                        adapt_edge_deletion(&t, e, Box::new(OptimalBlue::new(cfg.clone())))
                            .unwrap();
                    let up = certify_upper(&reduced, &cfg, adapted.as_ref()).unwrap();
                    let reduced_value = all_white_value(&reduced, &cfg);
                    assert!(
                        reduced_value <= up && up <= base_value + 1,
                        "n={n} e={e:?}: {reduced_value} <= {up} <= {base_value}+1"
                    );
                }
            }
        }
    }

    #[test]
    fn edge_deletion_tight_on_middle_path_edge() {
        let p4 = families::path(4).unwrap();
        let cfg = SolveConfig::new(1);
        assert_eq!(all_white_value(&p4, &cfg), 1);
        let reduced = p4.delete_edge((1, 2)).unwrap();
        let adapted =
            adapt_edge_deletion(&p4, (1, 2), Box::new(OptimalBlue::new(cfg.clone()))).unwrap();
        assert_eq!(certify_upper(&reduced, &cfg, adapted.as_ref()).unwrap(), 2);
        assert_eq!(all_white_value(&reduced, &cfg), 2);
    }

    #[test]
    fn random_policies_deterministic() {
        let g = families::random_connected(8, 3).unwrap();
        let st = GameState::all_white(&g);
        let mut a = RandomBlue::new(42);
        let mut b = RandomBlue::new(42);
        for _ in 0..5 {
            assert_eq!(a.decide(&st, 1).unwrap(), b.decide(&st, 1).unwrap());
        }
        let mut w1 = RandomWhite::new(7);
        let mut w2 = RandomWhite::new(7);
        let st = GameState::new(&g, VertexSet::from_iter(8, [0]));
        let partition = white_components(&st);
        if partition.len() >= 2 {
            let offer = Offer::new(vec![0, 1]);
            for _ in 0..5 {
                assert_eq!(
                    w1.respond(&st, &partition, &offer, 1).unwrap(),
                    w2.respond(&st, &partition, &offer, 1).unwrap()
                );
            }
        }
    }

    #[test]
    fn registry_round_trips() {
        let built = families::build_spec("cnk:n=4,k=2").unwrap();
        for spec in [
            "optimal",
            "star-forest",
            "corona-z1",
            "caterpillar-q2",
            "caterpillar-general",
            "random:seed=3",
        ] {
            assert!(make_blue(spec, &built, 2).is_ok(), "{spec}");
        }
        let tree = families::build_spec("path:5").unwrap();
        assert_eq!(make_blue("tree:root=2", &tree, 1).unwrap().name(), "tree:root=2");
        for spec in ["full", "corona-z1", "protected-q2", "protected-q3", "random:seed=1"] {
            assert!(make_white(spec, &built).is_ok(), "{spec}");
        }
        assert!(make_white("star-forest", &built).is_ok());
        assert!(make_blue("banana", &built, 1).is_err());
        assert!(make_white("tree", &tree).is_err());
        // strategies needing pendant-cycle layout reject plain graphs
        assert!(make_blue("corona-z1", &tree, 1).is_err());
    }
}
