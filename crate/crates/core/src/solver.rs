//! Exact minimax token counts, with policy-fixed variants that certify
//! upper bounds (fixed Blue, adversarial White) and lower bounds
//! (exhaustive Blue, fixed White).

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::bitset::VertexSet;
use crate::engine::{
    all_responses, enumerate_offers, legal_forces, resolve_rule3, Offer,
};
use crate::error::{Error, Result};
use crate::graph::{activity, white_components, GameState, Graph};
use crate::policy::{Action, BluePolicy, WhitePolicy};
use crate::transcript::Event;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// Component offers (Rule 3).
    Standard,
    /// Deactivation (Rule 3*): White colors blue-adjacent vertices until
    /// few enough blue vertices stay active.
    Star,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule3Semantics {
    /// Blue takes one conceded force per invocation.
    SingleForce,
    /// Blue runs forces to closure inside the induced view.
    Exhaustive,
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub q: usize,
    pub variant: Variant,
    pub rule3_semantics: Rule3Semantics,
    /// Restrict Blue to offers of exactly q+1 components.
    pub minimal_offers_only: bool,
    /// Maximum states expanded before giving up.
    pub budget: u64,
    /// When a free force exists, explore only the smallest one. Sound
    /// because coloring an extra vertex never hurts Blue; results must be
    /// identical with the flag off.
    pub monotone_pruning: bool,
}

impl SolveConfig {
    pub fn new(q: usize) -> Self {
        SolveConfig {
            q,
            variant: Variant::Standard,
            rule3_semantics: Rule3Semantics::SingleForce,
            minimal_offers_only: true,
            budget: 1 << 20,
            monotone_pruning: false,
        }
    }

    pub fn star(q: usize) -> Self {
        SolveConfig { variant: Variant::Star, ..SolveConfig::new(q) }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveStats {
    pub states: u64,
    pub memo_hits: u64,
    pub wall: Duration,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub value: u32,
    pub principal_line: Vec<Event>,
    pub stats: SolveStats,
}

/// Minimum tokens from `initial_blue` under `cfg`, with an optimal line.
pub fn solve(g: &Graph, cfg: &SolveConfig, initial_blue: &VertexSet) -> Result<SolveResult> {
    if cfg.budget == 0 {
        return Err(Error::Domain("budget must be positive".into()));
    }
    let start = Instant::now();
    let mut s = Search { g, cfg, memo: HashMap::new(), deact: HashMap::new(), states: 0, hits: 0 };
    let value = s.value(initial_blue.clone())?;
    let principal_line = s.principal_line(initial_blue.clone());
    Ok(SolveResult {
        value,
        principal_line,
        stats: SolveStats { states: s.states, memo_hits: s.hits, wall: start.elapsed() },
    })
}

pub fn zq_value(g: &Graph, cfg: &SolveConfig, initial_blue: &VertexSet) -> Result<SolveResult> {
    solve(g, &SolveConfig { variant: Variant::Standard, ..cfg.clone() }, initial_blue)
}

pub fn zq_star_value(g: &Graph, cfg: &SolveConfig, initial_blue: &VertexSet) -> Result<SolveResult> {
    solve(g, &SolveConfig { variant: Variant::Star, ..cfg.clone() }, initial_blue)
}

#[derive(Clone, Debug)]
enum Choice {
    Done,
    Spend(usize),
    Force(usize, usize),
    Offer(Offer),
    Deactivate,
}

struct Search<'g, 'c> {
    g: &'g Graph,
    cfg: &'c SolveConfig,
    memo: HashMap<VertexSet, (u32, Choice)>,
    // positions inside a deactivation episode: value and White's pick
    deact: HashMap<VertexSet, (u32, Option<usize>)>,
    states: u64,
    hits: u64,
}

/// Run forces to closure when only `visible` vertices can be seen,
/// applying the smallest legal force first. Returns the grown blue set and
/// the forces in application order.
pub(crate) fn view_closure(
    g: &Graph,
    blue: &VertexSet,
    visible: &VertexSet,
) -> (VertexSet, Vec<(usize, usize)>) {
    let mut blue = blue.clone();
    let mut forces = Vec::new();
    loop {
        let mut found = None;
        'scan: for u in blue.iter() {
            let mut whites = g
                .neighbors(u)
                .iter()
                .filter(|&&w| visible.contains(w) && !blue.contains(w));
            if let (Some(&w), None) = (whites.next(), whites.next()) {
                found = Some((u, w));
                break 'scan;
            }
        }
        match found {
            Some((u, w)) => {
                blue.insert(w);
                forces.push((u, w));
            }
            None => break,
        }
    }
    (blue, forces)
}

impl<'g, 'c> Search<'g, 'c> {
    fn charge(&mut self) -> Result<()> {
        self.states += 1;
        if self.states > self.cfg.budget {
            return Err(Error::BudgetExceeded(self.cfg.budget));
        }
        Ok(())
    }

    fn value(&mut self, blue: VertexSet) -> Result<u32> {
        if let Some(&(v, _)) = self.memo.get(&blue) {
            self.hits += 1;
            return Ok(v);
        }
        self.charge()?;
        let st = GameState::new(self.g, blue.clone());
        if st.is_all_blue() {
            self.memo.insert(blue, (0, Choice::Done));
            return Ok(0);
        }

        let forces = legal_forces(&st);
        if self.cfg.monotone_pruning && !forces.is_empty() {
            let (u, w) = forces[0];
            let v = self.value(blue.with(w))?;
            self.memo.insert(blue, (v, Choice::Force(u, w)));
            return Ok(v);
        }

        let mut best = u32::MAX;
        let mut choice = Choice::Done;
        for &(u, w) in &forces {
            let v = self.value(blue.with(w))?;
            if v < best {
                best = v;
                choice = Choice::Force(u, w);
            }
        }

        match self.cfg.variant {
            Variant::Standard => {
                let partition = white_components(&st);
                if partition.len() >= self.cfg.q + 1 {
                    for offer in
                        enumerate_offers(&partition, self.cfg.q, self.cfg.minimal_offers_only)
                    {
                        match self.offer_value(&st, &partition, &offer)? {
                            Some(v) if v < best => {
                                best = v;
                                choice = Choice::Offer(offer);
                            }
                            _ => {}
                        }
                    }
                }
            }
            Variant::Star => {
                if activity(&st) >= self.cfg.q + 1 {
                    let v = self.deact_value(blue.clone())?;
                    if v < best {
                        best = v;
                        choice = Choice::Deactivate;
                    }
                }
            }
        }

        for v in 0..self.g.n() {
            if st.is_white(v) {
                let val = 1 + self.value(blue.with(v))?;
                if val < best {
                    best = val;
                    choice = Choice::Spend(v);
                }
            }
        }

        self.memo.insert(blue, (best, choice));
        Ok(best)
    }

    /// Worst case over responses, or `None` when the offer is not winning
    /// (some response concedes nothing — a dominated null move).
    fn offer_value(
        &mut self,
        st: &GameState,
        partition: &[VertexSet],
        offer: &Offer,
    ) -> Result<Option<u32>> {
        let mut worst = 0;
        for resp in all_responses(offer) {
            let forces = resolve_rule3(st, &partition.to_vec(), offer, &resp)?;
            if forces.is_empty() {
                return Ok(None);
            }
            let val = match self.cfg.rule3_semantics {
                Rule3Semantics::SingleForce => {
                    let mut m = u32::MAX;
                    for &(_, w) in &forces {
                        m = m.min(self.value(st.blue.with(w))?);
                    }
                    m
                }
                Rule3Semantics::Exhaustive => {
                    let mut visible = st.blue.clone();
                    for &i in &resp.components {
                        visible = visible.union(&partition[i]);
                    }
                    let (nb, _) = view_closure(self.g, &st.blue, &visible);
                    self.value(nb)?
                }
            };
            worst = worst.max(val);
        }
        Ok(Some(worst))
    }

    fn deact_value(&mut self, blue: VertexSet) -> Result<u32> {
        if let Some(&(v, _)) = self.deact.get(&blue) {
            self.hits += 1;
            return Ok(v);
        }
        self.charge()?;
        let st = GameState::new(self.g, blue.clone());
        if activity(&st) <= self.cfg.q {
            let v = self.value(blue.clone())?;
            self.deact.insert(blue, (v, None));
            return Ok(v);
        }
        let mut worst = 0;
        let mut pick = None;
        for v in 0..self.g.n() {
            if st.is_white(v) && self.g.neighbors(v).iter().any(|&u| st.blue.contains(u)) {
                let val = self.deact_value(blue.with(v))?;
                if pick.is_none() || val > worst {
                    worst = val;
                    pick = Some(v);
                }
            }
        }
        debug_assert!(pick.is_some(), "active vertex with no white neighbor");
        self.deact.insert(blue, (worst, pick));
        Ok(worst)
    }

    /// Walk the memoized choices from `blue` to an all-blue state.
    fn principal_line(&self, mut blue: VertexSet) -> Vec<Event> {
        let mut out = Vec::new();
        loop {
            let Some((_, choice)) = self.memo.get(&blue) else { break };
            match choice {
                Choice::Done => break,
                Choice::Spend(v) => {
                    out.push(Event::Spend(*v));
                    blue = blue.with(*v);
                }
                Choice::Force(u, w) => {
                    out.push(Event::Force(*u, *w));
                    blue = blue.with(*w);
                }
                Choice::Offer(offer) => {
                    let st = GameState::new(self.g, blue.clone());
                    let partition = white_components(&st);
                    // White's maximizing response, ties to the first;
                    // all child values are memoized from the search
                    let mut picked: Option<(u32, Vec<usize>, VertexSet, Vec<(usize, usize)>)> =
                        None;
                    for resp in all_responses(offer) {
                        let forces = resolve_rule3(&st, &partition, offer, &resp)
                            .expect("principal offer resolves");
                        let (val, nb, applied) = match self.cfg.rule3_semantics {
                            Rule3Semantics::SingleForce => {
                                // Blue's minimizing force, ties to the smallest
                                let (u, w) = forces
                                    .iter()
                                    .copied()
                                    .min_by_key(|&(_, w)| self.memo[&blue.with(w)].0)
                                    .expect("winning offer concedes a force");
                                (self.memo[&blue.with(w)].0, blue.with(w), vec![(u, w)])
                            }
                            Rule3Semantics::Exhaustive => {
                                let mut visible = blue.clone();
                                for &i in &resp.components {
                                    visible = visible.union(&partition[i]);
                                }
                                let (nb, applied) = view_closure(self.g, &blue, &visible);
                                (self.memo[&nb].0, nb, applied)
                            }
                        };
                        if picked.as_ref().map_or(true, |(b, _, _, _)| val > *b) {
                            picked = Some((val, resp.components, nb, applied));
                        }
                    }
                    let (_, response, nb, applied) = picked.expect("offer has responses");
                    out.push(Event::Rule3 {
                        offer: offer.components.clone(),
                        response,
                        forces: applied,
                    });
                    blue = nb;
                }
                Choice::Deactivate => {
                    let mut vs = Vec::new();
                    let mut cur = blue.clone();
                    while let Some((_, Some(v))) = self.deact.get(&cur) {
                        vs.push(*v);
                        cur = cur.with(*v);
                    }
                    out.push(Event::Deactivate(vs));
                    blue = cur;
                }
            }
        }
        out
    }
}

/// Worst-case tokens when Blue plays `policy` against every White line.
/// An upper bound on the minimax value.
pub fn certify_upper(g: &Graph, cfg: &SolveConfig, policy: &dyn BluePolicy) -> Result<u32> {
    let mut ctx = Upper { g, cfg, memo: HashMap::new(), states: 0 };
    let mut p = policy.clone_box();
    ctx.run(VertexSet::empty(g.n()), &mut p)
}

struct Upper<'g, 'c> {
    g: &'g Graph,
    cfg: &'c SolveConfig,
    memo: HashMap<VertexSet, u32>,
    states: u64,
}

impl<'g, 'c> Upper<'g, 'c> {
    fn run(&mut self, blue: VertexSet, policy: &mut Box<dyn BluePolicy>) -> Result<u32> {
        let st = GameState::new(self.g, blue.clone());
        if st.is_all_blue() {
            return Ok(0);
        }
        let memoable = policy.is_memoryless();
        if memoable {
            if let Some(&v) = self.memo.get(&blue) {
                return Ok(v);
            }
        }
        self.states += 1;
        if self.states > self.cfg.budget {
            return Err(Error::BudgetExceeded(self.cfg.budget));
        }
        let action = policy.decide(&st, self.cfg.q)?;
        let val = match action {
            Action::Spend(v) => {
                let (next, _) = crate::engine::apply_move(&st, &crate::engine::Move::Spend(v))?;
                1 + self.run(next.blue, policy)?
            }
            Action::Force(u, w) => {
                let (next, _) =
                    crate::engine::apply_move(&st, &crate::engine::Move::Force(u, w))?;
                self.run(next.blue, policy)?
            }
            Action::Offer(offer) => {
                let partition = white_components(&st);
                offer.validate(&partition, self.cfg.q)?;
                let mut worst = 0;
                for resp in all_responses(&offer) {
                    let forces = resolve_rule3(&st, &partition, &offer, &resp)?;
                    if forces.is_empty() {
                        return Err(Error::Policy(format!(
                            "offer {:?} loses to response {:?}",
                            offer.components, resp.components
                        )));
                    }
                    let mut branch = policy.clone_box();
                    let next_blue = match self.cfg.rule3_semantics {
                        Rule3Semantics::SingleForce => {
                            let f = branch.choose_force(&st, &forces);
                            if !forces.contains(&f) {
                                return Err(Error::Policy(format!(
                                    "chosen force {f:?} was not conceded"
                                )));
                            }
                            blue.with(f.1)
                        }
                        Rule3Semantics::Exhaustive => {
                            let mut visible = blue.clone();
                            for &i in &resp.components {
                                visible = visible.union(&partition[i]);
                            }
                            view_closure(self.g, &blue, &visible).0
                        }
                    };
                    worst = worst.max(self.run(next_blue, &mut branch)?);
                }
                worst
            }
            Action::Deactivate => {
                if self.cfg.variant != Variant::Star {
                    return Err(Error::Policy("deactivation outside the star variant".into()));
                }
                if activity(&st) < self.cfg.q + 1 {
                    return Err(Error::Policy("deactivation below the activity threshold".into()));
                }
                self.deact(blue.clone(), policy)?
            }
        };
        if memoable {
            self.memo.insert(blue, val);
        }
        Ok(val)
    }

    fn deact(&mut self, blue: VertexSet, policy: &mut Box<dyn BluePolicy>) -> Result<u32> {
        let st = GameState::new(self.g, blue.clone());
        if activity(&st) <= self.cfg.q {
            return self.run(blue, policy);
        }
        let mut worst = None;
        for v in 0..self.g.n() {
            if st.is_white(v) && self.g.neighbors(v).iter().any(|&u| st.blue.contains(u)) {
                let mut branch = policy.clone_box();
                let val = self.deact(blue.with(v), &mut branch)?;
                worst = Some(worst.map_or(val, |w: u32| w.max(val)));
            }
        }
        worst.ok_or_else(|| Error::Policy("no deactivation choice available".into()))
    }
}

/// Best case for Blue against a fixed White policy. A lower bound on the
/// minimax value. Blue's offers are restricted to minimal size; smaller
/// offers only shrink White's response set, so this cannot raise the
/// reported minimum above the true best response.
pub fn certify_lower(g: &Graph, cfg: &SolveConfig, white: &dyn WhitePolicy) -> Result<u32> {
    let mut ctx = Lower { g, cfg, memo: HashMap::new(), states: 0 };
    ctx.run(VertexSet::empty(g.n()), white)
}

struct Lower<'g, 'c> {
    g: &'g Graph,
    cfg: &'c SolveConfig,
    memo: HashMap<(VertexSet, u64), u32>,
    states: u64,
}

impl<'g, 'c> Lower<'g, 'c> {
    fn run(&mut self, blue: VertexSet, white: &dyn WhitePolicy) -> Result<u32> {
        let st = GameState::new(self.g, blue.clone());
        if st.is_all_blue() {
            return Ok(0);
        }
        let key = white.memo_key().map(|k| (blue.clone(), k));
        if let Some(k) = &key {
            if let Some(&v) = self.memo.get(k) {
                return Ok(v);
            }
        }
        self.states += 1;
        if self.states > self.cfg.budget {
            return Err(Error::BudgetExceeded(self.cfg.budget));
        }

        let mut best = u32::MAX;
        for (_, w) in legal_forces(&st) {
            best = best.min(self.run(blue.with(w), white)?);
        }

        let partition = white_components(&st);
        if partition.len() >= self.cfg.q + 1 {
            for offer in enumerate_offers(&partition, self.cfg.q, true) {
                let mut wb = white.clone_box();
                let resp = wb.respond(&st, &partition, &offer, self.cfg.q)?;
                resp.validate(&offer)?;
                let forces = resolve_rule3(&st, &partition, &offer, &resp)?;
                if forces.is_empty() {
                    continue; // null outcome, dominated
                }
                let val = match self.cfg.rule3_semantics {
                    Rule3Semantics::SingleForce => {
                        let mut m = u32::MAX;
                        for &(_, w) in &forces {
                            m = m.min(self.run(blue.with(w), wb.as_ref())?);
                        }
                        m
                    }
                    Rule3Semantics::Exhaustive => {
                        let mut visible = blue.clone();
                        for &i in &resp.components {
                            visible = visible.union(&partition[i]);
                        }
                        let (nb, _) = view_closure(self.g, &blue, &visible);
                        self.run(nb, wb.as_ref())?
                    }
                };
                best = best.min(val);
            }
        }

        if self.cfg.variant == Variant::Star && activity(&st) >= self.cfg.q + 1 {
            let mut wb = white.clone_box();
            let mut cur = st.clone();
            while activity(&cur) > self.cfg.q {
                let v = wb.choose_deactivation(&cur)?;
                if !cur.is_white(v)
                    || !self.g.neighbors(v).iter().any(|&u| cur.blue.contains(u))
                {
                    return Err(Error::Policy(format!("illegal deactivation choice {v}")));
                }
                cur.blue.insert(v);
            }
            best = best.min(self.run(cur.blue, wb.as_ref())?);
        }

        for v in 0..self.g.n() {
            if st.is_white(v) {
                best = best.min(1 + self.run(blue.with(v), white)?);
            }
        }

        if let Some(k) = key {
            self.memo.insert(k, best);
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::policy::FullResponseWhite;
    use crate::transcript;
    use rand::{Rng, SeedableRng};

    fn zq(g: &Graph, q: usize) -> u32 {
        zq_value(g, &SolveConfig::new(q), &VertexSet::empty(g.n())).unwrap().value
    }

    fn zq_star(g: &Graph, q: usize) -> u32 {
        zq_star_value(g, &SolveConfig::new(q), &VertexSet::empty(g.n())).unwrap().value
    }

    #[test]
    fn paths_and_single_vertex() {
        for n in 1..=6 {
            let p = families::path(n).unwrap();
            for q in [0, 1, 3] {
                assert_eq!(zq(&p, q), 1, "P_{n} q={q}");
                assert_eq!(zq_star(&p, q), 1, "P_{n}* q={q}");
            }
        }
    }

    #[test]
    fn star_forest_formula_value() {
        // with q at least the component count no offer is ever available,
        // so the solve degenerates to plain zero forcing
        let s5 = families::star(5).unwrap();
        assert_eq!(zq(&s5, 12), 3);

        let f = families::star_forest(&[5, 4, 3]).unwrap();
        // k - q + sum of the q largest stars' forcing numbers = 3 - 1 + 3
        assert_eq!(zq(&f, 1), 5);
    }

    #[test]
    fn corona_c3_2() {
        let c = families::cnk(3, 2, &[2, 2, 2]).unwrap();
        assert_eq!(zq(&c.graph, 1), 3);
    }

    #[test]
    fn star_value_examples() {
        let s5 = families::star(5).unwrap();
        assert_eq!(zq_star(&s5, 1), 3);
    }

    #[test]
    fn star_dominates_standard_on_forests() {
        // deactivation is weaker for Blue than component offers only where
        // the guaranteed-offer construction applies, i.e. on forests
        let mut graphs = Vec::new();
        for n in 2..=7 {
            graphs.extend(families::tree_classes(n).unwrap());
        }
        graphs.push(families::star_forest(&[4, 3, 3]).unwrap());
        graphs.push(families::star_forest(&[3, 2, 2, 2]).unwrap());
        for g in &graphs {
            for q in 0..=2 {
                assert!(zq_star(g, q) >= zq(g, q), "n={} q={q}", g.n());
            }
        }
    }

    #[test]
    fn star_variant_can_beat_standard_with_cycles() {
        // on a triangle at q=0 the deactivation rule hands Blue a free
        // coloring that no winning offer exists to match
        let k3 = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert_eq!(zq(&k3, 0), 2);
        assert_eq!(zq_star(&k3, 0), 1);
    }

    #[test]
    fn monotone_in_q() {
        for n in 1..=8 {
            for t in families::tree_classes(n).unwrap() {
                let mut prev = 0;
                for q in 0..=n {
                    let v = zq(&t, q);
                    assert!(v >= prev, "n={n} q={q}");
                    prev = v;
                }
            }
        }
        for seed in 0..100u64 {
            let g = families::random_connected(2 + (seed as usize % 6), seed).unwrap();
            let mut prev = 0;
            for q in 0..=g.n() {
                let v = zq(&g, q);
                assert!(v >= prev, "seed={seed} q={q}");
                prev = v;
            }
        }
    }

    #[test]
    fn minimal_offers_match_all_sizes() {
        for n in 2..=6 {
            for g in families::all_connected_graphs(n).unwrap() {
                for q in 0..=2 {
                    let empty = VertexSet::empty(g.n());
                    let min = zq_value(&g, &SolveConfig::new(q), &empty).unwrap().value;
                    let all = zq_value(
                        &g,
                        &SolveConfig { minimal_offers_only: false, ..SolveConfig::new(q) },
                        &empty,
                    )
                    .unwrap()
                    .value;
                    assert_eq!(min, all, "n={n} q={q}");
                }
            }
        }
    }

    #[test]
    fn pruning_flag_never_changes_results() {
        for n in 2..=7 {
            for t in families::tree_classes(n).unwrap() {
                for q in 0..=2 {
                    for cfg in [SolveConfig::new(q), SolveConfig::star(q)] {
                        let on = SolveConfig { monotone_pruning: true, ..cfg.clone() };
                        let empty = VertexSet::empty(t.n());
                        assert_eq!(
                            solve(&t, &cfg, &empty).unwrap().value,
                            solve(&t, &on, &empty).unwrap().value,
                            "n={n} q={q} variant={:?}",
                            cfg.variant
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exhaustive_semantics_never_worse() {
        // closing the whole view gives Blue at least as much as one force
        for n in 2..=6 {
            for g in families::all_connected_graphs(n).unwrap() {
                for q in 0..=1 {
                    let empty = VertexSet::empty(g.n());
                    let single = zq_value(&g, &SolveConfig::new(q), &empty).unwrap().value;
                    let exh = zq_value(
                        &g,
                        &SolveConfig {
                            rule3_semantics: Rule3Semantics::Exhaustive,
                            ..SolveConfig::new(q)
                        },
                        &empty,
                    )
                    .unwrap()
                    .value;
                    assert!(exh <= single, "n={n} q={q}");
                }
            }
        }
    }

    #[test]
    fn blue_set_growth_helps() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for n in 2..=7 {
            for t in families::tree_classes(n).unwrap() {
                for _ in 0..10 {
                    let small =
                        VertexSet::from_iter(n, (0..n).filter(|_| rng.gen_bool(0.3)));
                    let mut big = small.clone();
                    for v in 0..n {
                        if rng.gen_bool(0.3) {
                            big.insert(v);
                        }
                    }
                    let q = rng.gen_range(0..=2);
                    let vs = zq_value(&t, &SolveConfig::new(q), &small).unwrap().value;
                    let vb = zq_value(&t, &SolveConfig::new(q), &big).unwrap().value;
                    assert!(vb <= vs, "n={n} q={q}");
                }
            }
        }
    }

    #[test]
    fn edge_deletion_within_sandwich() {
        let mut graphs = Vec::new();
        for n in 2..=6 {
            graphs.extend(families::all_connected_graphs(n).unwrap());
        }
        for seed in 0..10 {
            graphs.push(families::random_connected(7, seed).unwrap());
        }
        for g in &graphs {
            for q in 0..=2 {
                let base = zq(g, q);
                for &e in g.edges() {
                    let del = zq(&g.delete_edge(e).unwrap(), q);
                    assert!(
                        base.saturating_sub(2) <= del && del <= base + 1,
                        "n={} q={q} e={e:?}: {base} vs {del}",
                        g.n()
                    );
                }
            }
        }
        // the +1 is achieved: cutting a path in the middle
        let p4 = families::path(4).unwrap();
        assert_eq!(zq(&p4.delete_edge((1, 2)).unwrap(), 0), 2);
    }

    #[test]
    fn principal_lines_replay() {
        let mut graphs: Vec<Graph> = families::tree_classes(6).unwrap();
        graphs.push(families::cnk(3, 2, &[2, 2, 2]).unwrap().graph);
        graphs.push(families::star_forest(&[4, 3, 3]).unwrap());
        for g in &graphs {
            for q in 0..=2 {
                for cfg in [SolveConfig::new(q), SolveConfig::star(q)] {
                    let empty = VertexSet::empty(g.n());
                    let res = solve(g, &cfg, &empty).unwrap();
                    let (end, tokens) = transcript::replay(g, q, &empty, &res.principal_line)
                        .expect("principal line replays");
                    assert!(end.is_all_blue(), "q={q} {:?}", cfg.variant);
                    assert_eq!(tokens, res.value, "q={q} {:?}", cfg.variant);
                }
            }
        }
    }

    #[test]
    fn budget_reported_distinctly() {
        let p = families::path(12).unwrap();
        let cfg = SolveConfig { budget: 3, ..SolveConfig::new(1) };
        match zq_value(&p, &cfg, &VertexSet::empty(12)) {
            Err(Error::BudgetExceeded(3)) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    // fixed endpoint opening, then forces: the obvious path policy
    #[derive(Clone)]
    struct EndpointBlue;
    impl BluePolicy for EndpointBlue {
        fn name(&self) -> String {
            "endpoint".into()
        }
        fn decide(&mut self, state: &GameState, _q: usize) -> Result<Action> {
            if let Some(&(u, w)) = legal_forces(state).first() {
                return Ok(Action::Force(u, w));
            }
            Ok(Action::Spend(
                (0..state.graph.n()).find(|&v| state.is_white(v)).unwrap(),
            ))
        }
        fn clone_box(&self) -> Box<dyn BluePolicy> {
            Box::new(self.clone())
        }
    }

    #[test]
    fn certify_trivial_path_policies() {
        for n in 2..=8 {
            let p = families::path(n).unwrap();
            let cfg = SolveConfig::new(1);
            assert_eq!(certify_upper(&p, &cfg, &EndpointBlue).unwrap(), 1);
            assert_eq!(certify_lower(&p, &cfg, &FullResponseWhite).unwrap(), 1);
        }
    }

    #[test]
    fn certify_sandwich_random_graphs() {
        for seed in 0..10 {
            let g = families::random_connected(6, seed).unwrap();
            for q in 0..=1 {
                let cfg = SolveConfig::new(q);
                let exact = zq(&g, q);
                let lo = certify_lower(&g, &cfg, &FullResponseWhite).unwrap();
                let hi = certify_upper(&g, &cfg, &EndpointBlue).unwrap();
                assert!(lo <= exact && exact <= hi, "seed={seed} q={q}: {lo} {exact} {hi}");
            }
        }
    }
}
