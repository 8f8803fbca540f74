//! Run complete games between fixed policies, producing replayable
//! transcripts and token counts.

use crate::bitset::VertexSet;
use crate::engine::{apply_move, resolve_rule3, Move};
use crate::error::{Error, Result};
use crate::graph::{activity, white_components, GameState, Graph};
use crate::policy::{Action, BluePolicy, WhitePolicy};
use crate::solver::{Rule3Semantics, SolveConfig, Variant};
use crate::transcript::Event;

#[derive(Clone, Debug)]
pub struct SimResult {
    pub events: Vec<Event>,
    pub tokens: u32,
    pub final_blue: VertexSet,
}

/// Play one game to completion. Fails if a policy makes an illegal move or
/// the game stalls on repeated null invocations.
pub fn simulate(
    g: &Graph,
    cfg: &SolveConfig,
    blue: &mut dyn BluePolicy,
    white: &mut dyn WhitePolicy,
    initial_blue: &VertexSet,
) -> Result<SimResult> {
    let mut state = GameState::new(g, initial_blue.clone());
    let mut events = Vec::new();
    let mut tokens = 0u32;
    let mut nulls = 0usize;
    let cap = 20 * g.n().max(1) + 50;
    for _ in 0..cap {
        if state.is_all_blue() {
            return Ok(SimResult { events, tokens, final_blue: state.blue });
        }
        match blue.decide(&state, cfg.q)? {
            Action::Spend(v) => {
                let (next, cost) = apply_move(&state, &Move::Spend(v))?;
                state = next;
                tokens += cost;
                events.push(Event::Spend(v));
            }
            Action::Force(u, w) => {
                let (next, _) = apply_move(&state, &Move::Force(u, w))?;
                state = next;
                events.push(Event::Force(u, w));
            }
            Action::Offer(offer) => {
                let partition = white_components(&state);
                offer.validate(&partition, cfg.q)?;
                let resp = white.respond(&state, &partition, &offer, cfg.q)?;
                resp.validate(&offer)?;
                let conceded = resolve_rule3(&state, &partition, &offer, &resp)?;
                let forces = if conceded.is_empty() {
                    Vec::new()
                } else {
                    match cfg.rule3_semantics {
                        Rule3Semantics::SingleForce => {
                            let f = blue.choose_force(&state, &conceded);
                            if !conceded.contains(&f) {
                                return Err(Error::Policy(format!(
                                    "chosen force {f:?} was not conceded"
                                )));
                            }
                            state = state.with_blue(f.1);
                            vec![f]
                        }
                        Rule3Semantics::Exhaustive => {
                            let mut visible = state.blue.clone();
                            for &i in &resp.components {
                                visible = visible.union(&partition[i]);
                            }
                            let (next, fs) =
                                crate::solver::view_closure(g, &state.blue, &visible);
                            state = GameState::new(g, next);
                            fs
                        }
                    }
                };
                if forces.is_empty() {
                    nulls += 1;
                    if nulls > g.n() + 5 {
                        return Err(Error::Policy("stalled on repeated null offers".into()));
                    }
                } else {
                    nulls = 0;
                }
                events.push(Event::Rule3 {
                    offer: offer.components.clone(),
                    response: resp.components.clone(),
                    forces,
                });
            }
            Action::Deactivate => {
                if cfg.variant != Variant::Star {
                    return Err(Error::Policy("deactivation outside the star variant".into()));
                }
                if activity(&state) <= cfg.q {
                    return Err(Error::Policy(
                        "deactivation below the activity threshold".into(),
                    ));
                }
                let mut colored = Vec::new();
                while activity(&state) > cfg.q {
                    let v = white.choose_deactivation(&state)?;
                    if !state.is_white(v)
                        || !g.neighbors(v).iter().any(|&u| state.blue.contains(u))
                    {
                        return Err(Error::Policy(format!(
                            "invalid deactivation choice {v}"
                        )));
                    }
                    state = state.with_blue(v);
                    colored.push(v);
                }
                events.push(Event::Deactivate(colored));
            }
        }
    }
    Err(Error::Policy("move cap exceeded without finishing".into()))
}
