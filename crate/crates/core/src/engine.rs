//! Legal moves and state transitions for the forcing game: token spends,
//! forces, component offers with White responses, and the deactivation rule.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{
    active_vertices, activity, white_components, ComponentPartition, GameState,
};

/// One of Blue's actions. `Rule3` carries the offer; its resolution depends
/// on White's response and is handled by [`resolve_rule3`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    Spend(usize),
    Force(usize, usize),
    Rule3(Offer),
}

/// Component indices (into the current white partition) Blue hands to White.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Offer {
    pub components: Vec<usize>,
}

impl Offer {
    pub fn new(mut components: Vec<usize>) -> Self {
        components.sort_unstable();
        Offer { components }
    }

    pub fn validate(&self, partition: &ComponentPartition, q: usize) -> Result<()> {
        if self.components.len() < q + 1 {
            return Err(Error::BadOffer(format!(
                "offer of {} components, need at least {}",
                self.components.len(),
                q + 1
            )));
        }
        if self.components.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadOffer("component indices must be distinct".into()));
        }
        if self.components.iter().any(|&i| i >= partition.len()) {
            return Err(Error::BadOffer("component index out of range".into()));
        }
        Ok(())
    }
}

/// Nonempty subset of an offer's components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteResponse {
    pub components: Vec<usize>,
}

impl WhiteResponse {
    pub fn new(mut components: Vec<usize>) -> Self {
        components.sort_unstable();
        WhiteResponse { components }
    }

    pub fn validate(&self, offer: &Offer) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::BadResponse("response must be nonempty".into()));
        }
        if !self.components.iter().all(|i| offer.components.contains(i)) {
            return Err(Error::BadResponse("response not a subset of the offer".into()));
        }
        Ok(())
    }
}

/// All pairs `(u, w)` where blue `u` has `w` as its unique white neighbor.
pub fn legal_forces(state: &GameState) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in state.blue.iter() {
        let mut whites = state.white_neighbors(u);
        if let (Some(w), None) = (whites.next(), whites.next()) {
            out.push((u, w));
        }
    }
    out
}

/// Apply a spend or force. Returns the new state and the token cost.
pub fn apply_move<'g>(state: &GameState<'g>, mv: &Move) -> Result<(GameState<'g>, u32)> {
    match *mv {
        Move::Spend(v) => {
            if v >= state.graph.n() {
                return Err(Error::IllegalMove(format!("spend target {v} out of range")));
            }
            if state.blue.contains(v) {
                return Err(Error::IllegalMove(format!("spend target {v} is already blue")));
            }
            Ok((state.with_blue(v), 1))
        }
        Move::Force(u, w) => {
            if !state.blue.contains(u) {
                return Err(Error::IllegalMove(format!("forcing vertex {u} is not blue")));
            }
            if state.blue.contains(w) {
                return Err(Error::IllegalMove(format!("force target {w} is not white")));
            }
            if state.white_degree(u) != 1 || !state.graph.has_edge(u, w) {
                return Err(Error::IllegalMove(format!(
                    "{w} is not the unique white neighbor of {u}"
                )));
            }
            Ok((state.with_blue(w), 0))
        }
        Move::Rule3(_) => Err(Error::IllegalMove(
            "rule 3 needs a White response; use resolve_rule3".into(),
        )),
    }
}

/// Fixed point of exhaustive force application.
pub fn rule2_closure<'g>(state: &GameState<'g>) -> GameState<'g> {
    let mut cur = state.clone();
    loop {
        let forces = legal_forces(&cur);
        if forces.is_empty() {
            return cur;
        }
        for (_, w) in forces {
            cur.blue.insert(w);
        }
    }
}

/// Offers over the current partition: exactly size `q+1` when
/// `minimal_only`, otherwise every size from `q+1` up.
pub fn enumerate_offers(partition: &ComponentPartition, q: usize, minimal_only: bool) -> Vec<Offer> {
    let k = partition.len();
    if k < q + 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    // subsets in size-major, then lexicographic order
    let sizes: Vec<usize> = if minimal_only { vec![q + 1] } else { (q + 1..=k).collect() };
    for size in sizes {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(Offer::new(idx.clone()));
            let Some(i) = (0..size).rev().find(|&i| idx[i] != k - size + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

/// Forces legal in the induced view `G[B ∪ responded components]`.
pub fn resolve_rule3(
    state: &GameState,
    partition: &ComponentPartition,
    offer: &Offer,
    response: &WhiteResponse,
) -> Result<Vec<(usize, usize)>> {
    response.validate(offer)?;
    let mut view = state.blue.clone();
    for &i in &response.components {
        view = view.union(&partition[i]);
    }
    let mut out = Vec::new();
    for u in state.blue.iter() {
        let mut whites = state
            .graph
            .neighbors(u)
            .iter()
            .filter(|&&w| view.contains(w) && !state.blue.contains(w));
        if let (Some(&w), None) = (whites.next(), whites.next()) {
            out.push((u, w));
        }
    }
    Ok(out)
}

fn nonempty_subsets(items: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (1u64..1 << items.len()).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &c)| c)
            .collect()
    })
}

/// True iff every nonempty response to `offer` concedes at least one force.
pub fn offer_is_winning(
    state: &GameState,
    partition: &ComponentPartition,
    offer: &Offer,
) -> bool {
    nonempty_subsets(&offer.components).all(|subset| {
        resolve_rule3(state, partition, offer, &WhiteResponse::new(subset))
            .map(|forces| !forces.is_empty())
            .unwrap_or(false)
    })
}

/// All nonempty responses to an offer, in mask order.
pub fn all_responses(offer: &Offer) -> Vec<WhiteResponse> {
    nonempty_subsets(&offer.components).map(WhiteResponse::new).collect()
}

/// The constructive winning offer for forests with at least `q+1` active
/// vertices: each chosen active vertex is assigned a distinct white
/// component containing one of its white children in the rooted forest.
pub fn guaranteed_offer_forest(state: &GameState, q: usize) -> Result<Offer> {
    if !state.graph.is_forest() {
        return Err(Error::NotAForest);
    }
    let actives = active_vertices(state);
    if actives.len() < q + 1 {
        return Err(Error::Policy(format!(
            "need at least {} active vertices, have {}",
            q + 1,
            actives.len()
        )));
    }
    // Root every maximal tree containing an active vertex at its
    // lowest-index active vertex; record parent pointers.
    let n = state.graph.n();
    let mut parent = vec![usize::MAX; n];
    let mut visited = VertexSet::empty(n);
    for root in actives.iter() {
        if visited.contains(root) {
            continue;
        }
        visited.insert(root);
        parent[root] = root;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in state.graph.neighbors(v) {
                if !visited.contains(w) {
                    visited.insert(w);
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
    }
    let partition = white_components(state);
    let comp_of = |v: usize| partition.iter().position(|p| p.contains(v)).unwrap();
    let mut chosen = Vec::new();
    let mut used = std::collections::HashSet::new();
    for a in actives.iter() {
        let child_comp = state
            .white_neighbors(a)
            .filter(|&w| parent[w] == a)
            .map(comp_of)
            .find(|c| !used.contains(c));
        if let Some(c) = child_comp {
            used.insert(c);
            chosen.push(c);
        }
        if chosen.len() == q + 1 {
            return Ok(Offer::new(chosen));
        }
    }
    Err(Error::Policy(
        "could not assign distinct white child components to q+1 active vertices".into(),
    ))
}

/// Run one Rule 3* invocation: `choose` repeatedly names a blue-adjacent
/// white vertex to color until the activity drops to at most `q`.
pub fn deactivate<'g>(
    state: &GameState<'g>,
    q: usize,
    mut choose: impl FnMut(&GameState) -> usize,
) -> Result<(GameState<'g>, Vec<usize>)> {
    if activity(state) < q + 1 {
        return Err(Error::IllegalMove(format!(
            "deactivation needs activity >= {}, have {}",
            q + 1,
            activity(state)
        )));
    }
    let mut cur = state.clone();
    let mut colored = Vec::new();
    while activity(&cur) >= q + 1 {
        let v = choose(&cur);
        if cur.blue.contains(v) {
            return Err(Error::IllegalMove(format!("deactivation choice {v} is blue")));
        }
        if !state.graph.neighbors(v).iter().any(|&u| cur.blue.contains(u)) {
            return Err(Error::IllegalMove(format!(
                "deactivation choice {v} is not blue-adjacent"
            )));
        }
        cur.blue.insert(v);
        colored.push(v);
    }
    Ok((cur, colored))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::graph::Graph;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn state<'g>(g: &'g Graph, blue: &[usize]) -> GameState<'g> {
        GameState::new(g, VertexSet::from_iter(g.n(), blue.iter().copied()))
    }

    #[test]
    fn legal_forces_examples() {
        let p3 = families::path(3).unwrap();
        assert_eq!(legal_forces(&state(&p3, &[0])), vec![(0, 1)]);
        let s5 = families::star(5).unwrap();
        assert!(legal_forces(&state(&s5, &[0])).is_empty());
        let p4 = families::path(4).unwrap();
        assert!(legal_forces(&state(&p4, &[1])).is_empty());
    }

    #[test]
    fn apply_move_examples() {
        let p3 = families::path(3).unwrap();
        let (st, cost) = apply_move(&GameState::all_white(&p3), &Move::Spend(0)).unwrap();
        assert_eq!((st.blue.iter().collect::<Vec<_>>(), cost), (vec![0], 1));
        let (st, cost) = apply_move(&state(&p3, &[0]), &Move::Force(0, 1)).unwrap();
        assert_eq!((st.blue.iter().collect::<Vec<_>>(), cost), (vec![0, 1], 0));
        assert!(apply_move(&state(&p3, &[0]), &Move::Spend(0)).is_err());
        assert!(apply_move(&state(&p3, &[0]), &Move::Force(0, 2)).is_err());
    }

    #[test]
    fn closure_examples() {
        let p5 = families::path(5).unwrap();
        assert!(rule2_closure(&state(&p5, &[0])).is_all_blue());
        let s5 = families::star(5).unwrap();
        let closed = rule2_closure(&state(&s5, &[1]));
        assert_eq!(closed.blue.iter().collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn closure_confluence_random_orders() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for seed in 0..40 {
            let g = families::random_connected(rng.gen_range(2..=12), seed).unwrap();
            let blue = VertexSet::from_iter(g.n(), (0..g.n()).filter(|_| rng.gen_bool(0.3)));
            let st = GameState::new(&g, blue);
            let reference = rule2_closure(&st);
            // apply forces one at a time in random order
            let mut cur = st.clone();
            loop {
                let mut forces = legal_forces(&cur);
                if forces.is_empty() {
                    break;
                }
                forces.shuffle(&mut rng);
                cur.blue.insert(forces[0].1);
            }
            assert_eq!(cur.blue, reference.blue);
        }
    }

    #[test]
    fn activity_zero_tree_closure_colors_everything() {
        // for every tree up to 9 vertices and every nonempty blue set with
        // activity 0, the blue set is a zero forcing set
        for n in 1..=9 {
            for t in families::tree_classes(n).unwrap() {
                for mask in 1u32..1 << n {
                    let blue = VertexSet::from_iter(n, (0..n).filter(|v| mask >> v & 1 == 1));
                    let st = GameState::new(&t, blue);
                    let closed = rule2_closure(&st);
                    if activity(&closed) == 0 {
                        assert!(closed.is_all_blue(), "tree n={n} mask={mask}");
                    }
                }
            }
        }
    }

    #[test]
    fn enumerate_offers_counts() {
        let fake_partition = |k: usize| vec![VertexSet::empty(1); k];
        assert_eq!(enumerate_offers(&fake_partition(3), 1, true).len(), 3);
        assert!(enumerate_offers(&fake_partition(2), 2, false).is_empty());
        assert_eq!(enumerate_offers(&fake_partition(4), 1, false).len(), 11);
    }

    #[test]
    fn resolve_rule3_star_views() {
        let s5 = families::star(5).unwrap();
        let st = state(&s5, &[0]);
        let partition = white_components(&st);
        assert_eq!(partition.len(), 4);
        let offer = Offer::new(vec![0, 1]);
        // both leaves back: center still has two white neighbors in view
        let both = WhiteResponse::new(vec![0, 1]);
        assert!(resolve_rule3(&st, &partition, &offer, &both).unwrap().is_empty());
        // one leaf back: view has exactly one white neighbor of the center
        let one = WhiteResponse::new(vec![0]);
        assert_eq!(resolve_rule3(&st, &partition, &offer, &one).unwrap(), vec![(0, 1)]);
        assert!(resolve_rule3(&st, &partition, &offer, &WhiteResponse::new(vec![])).is_err());
        assert!(resolve_rule3(&st, &partition, &offer, &WhiteResponse::new(vec![2])).is_err());
    }

    #[test]
    fn resolve_rule3_view_matches_brute_force() {
        // brute-force oracle: rebuild the induced subgraph explicitly
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for seed in 0..30 {
            let g = families::random_connected(rng.gen_range(3..=10), seed).unwrap();
            let blue = VertexSet::from_iter(g.n(), (0..g.n()).filter(|_| rng.gen_bool(0.4)));
            let st = GameState::new(&g, blue);
            let partition = white_components(&st);
            if partition.is_empty() {
                continue;
            }
            let take = rng.gen_range(1..=partition.len());
            let offer = Offer::new((0..take).collect());
            let resp = WhiteResponse::new(vec![rng.gen_range(0..take)]);
            let got = resolve_rule3(&st, &partition, &offer, &resp).unwrap();

            let mut keep: Vec<usize> = st.blue.iter().collect();
            keep.extend(partition[resp.components[0]].iter());
            keep.sort_unstable();
            let pos = |v: usize| keep.binary_search(&v).ok();
            let sub_edges: Vec<(usize, usize)> = g
                .edges()
                .iter()
                .filter_map(|&(u, v)| Some((pos(u)?, pos(v)?)))
                .collect();
            let sub = Graph::from_edges(keep.len(), &sub_edges).unwrap();
            let sub_blue =
                VertexSet::from_iter(keep.len(), keep.iter().enumerate().filter(|(_, &v)| st.blue.contains(v)).map(|(i, _)| i));
            let expect: Vec<(usize, usize)> = legal_forces(&GameState::new(&sub, sub_blue))
                .into_iter()
                .map(|(u, w)| (keep[u], keep[w]))
                .collect();
            assert_eq!(got, expect, "seed {seed}");
        }
    }

    #[test]
    fn resolve_rule3_two_rooted_paths() {
        // two disjoint blue-rooted paths; offering both tails and getting
        // both back leaves two forces available
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let st = state(&g, &[0, 3]);
        let partition = white_components(&st);
        assert_eq!(partition.len(), 2);
        let offer = Offer::new(vec![0, 1]);
        let forces =
            resolve_rule3(&st, &partition, &offer, &WhiteResponse::new(vec![0, 1])).unwrap();
        assert_eq!(forces, vec![(0, 1), (3, 4)]);
    }

    #[test]
    fn winning_offers() {
        let s5 = families::star(5).unwrap();
        let st = state(&s5, &[0]);
        let partition = white_components(&st);
        assert!(!offer_is_winning(&st, &partition, &Offer::new(vec![0, 1])));

        // forest of two stars with blue centers, q = 1
        let g = families::star_forest(&[4, 4]).unwrap();
        let st = state(&g, &[0, 4]);
        let partition = white_components(&st);
        let offer = guaranteed_offer_forest(&st, 1).unwrap();
        assert!(offer_is_winning(&st, &partition, &offer));
    }

    #[test]
    fn guaranteed_offer_spider_and_errors() {
        // spider: blue body, three white legs; the body is the only active
        // vertex, so q = 0 admits the construction and q >= 1 does not
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        let st = state(&g, &[0]);
        let offer = guaranteed_offer_forest(&st, 0).unwrap();
        assert_eq!(offer.components.len(), 1);
        assert!(offer_is_winning(&st, &white_components(&st), &offer));
        assert!(guaranteed_offer_forest(&st, 1).is_err());
        let single = state(&g, &[]);
        assert!(guaranteed_offer_forest(&single, 0).is_err());

        // three blue-centered stars give three active vertices for q = 2
        let f = families::star_forest(&[4, 4, 4]).unwrap();
        let st = state(&f, &[0, 4, 8]);
        let offer = guaranteed_offer_forest(&st, 2).unwrap();
        assert_eq!(offer.components.len(), 3);
        assert!(offer_is_winning(&st, &white_components(&st), &offer));
    }

    #[test]
    fn guaranteed_offer_wins_on_small_forests() {
        // all trees up to 8 vertices, all blue sets with >= q+1 active
        // vertices, q <= 2: the constructed offer exists and is winning
        for n in 2..=8 {
            for t in families::tree_classes(n).unwrap() {
                for mask in 1u32..1 << n {
                    let blue = VertexSet::from_iter(n, (0..n).filter(|v| mask >> v & 1 == 1));
                    let st = GameState::new(&t, blue);
                    let act = activity(&st);
                    for q in 0..=2usize {
                        if act >= q + 1 {
                            let offer = guaranteed_offer_forest(&st, q).unwrap();
                            assert!(
                                offer_is_winning(&st, &white_components(&st), &offer),
                                "n={n} mask={mask} q={q}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn blue_blue_edge_deletion_is_invisible() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for seed in 0..30 {
            let g = families::random_connected(rng.gen_range(3..=9), seed).unwrap();
            let blue = VertexSet::from_iter(g.n(), (0..g.n()).filter(|_| rng.gen_bool(0.5)));
            let st = GameState::new(&g, blue.clone());
            for &(u, v) in g.edges() {
                if !(blue.contains(u) && blue.contains(v)) {
                    continue;
                }
                let g2 = g.delete_edge((u, v)).unwrap();
                let st2 = GameState::new(&g2, blue.clone());
                assert_eq!(legal_forces(&st), legal_forces(&st2));
                let p1 = white_components(&st);
                let p2 = white_components(&st2);
                assert_eq!(p1, p2);
                assert_eq!(enumerate_offers(&p1, 1, false), enumerate_offers(&p2, 1, false));
                for offer in enumerate_offers(&p1, 1, true) {
                    for resp in all_responses(&offer) {
                        assert_eq!(
                            resolve_rule3(&st, &p1, &offer, &resp).unwrap(),
                            resolve_rule3(&st2, &p2, &offer, &resp).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn deactivate_examples() {
        // q+1 blue star centers at q = 0: terminates with activity 0
        let g = families::star_forest(&[4]).unwrap();
        let st = state(&g, &[0]);
        let (done, colored) = deactivate(&st, 0, |s| {
            // lowest blue-adjacent white vertex
            (0..s.graph.n())
                .find(|&v| s.is_white(v) && s.graph.neighbors(v).iter().any(|&u| s.blue.contains(u)))
                .unwrap()
        })
        .unwrap();
        assert!(activity(&done) == 0);
        assert_eq!(colored.len(), 2); // two leaves colored, one white leaf remains

        // activity <= q rejected
        assert!(deactivate(&st, 1, |_| 0).is_err());
        // invalid White choice rejected
        let p4 = families::path(4).unwrap();
        let st = state(&p4, &[1]);
        assert!(deactivate(&st, 0, |_| 3).is_err());
    }

    #[test]
    fn deactivate_single_step() {
        // activity q+1 where one coloring deactivates a vertex
        let p5 = families::path(5).unwrap();
        let st = state(&p5, &[2]);
        let (done, colored) = deactivate(&st, 0, |_| 1).unwrap();
        assert_eq!(colored, vec![1]);
        assert_eq!(activity(&done), 0);
    }
}
