//! Serialized game records: one line per move, replayable against a graph.

use crate::bitset::VertexSet;
use crate::engine::{resolve_rule3, Offer, WhiteResponse};
use crate::error::{Error, Result};
use crate::graph::{activity, white_components, GameState, Graph};

/// One resolved move. `Rule3` stores the offer, White's response, and the
/// forces Blue applied in the induced view (possibly none).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    Spend(usize),
    Force(usize, usize),
    Rule3 { offer: Vec<usize>, response: Vec<usize>, forces: Vec<(usize, usize)> },
    Deactivate(Vec<usize>),
}

fn ids(list: &[usize]) -> String {
    list.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn render_event(e: &Event) -> String {
    match e {
        Event::Spend(v) => format!("SPEND {v}"),
        Event::Force(u, w) => format!("FORCE {u} {w}"),
        Event::Rule3 { offer, response, forces } => {
            let f = if forces.is_empty() {
                "none".to_string()
            } else {
                forces.iter().map(|(u, w)| format!("{u},{w}")).collect::<Vec<_>>().join(";")
            };
            format!("RULE3 offer={} response={} force={f}", ids(offer), ids(response))
        }
        Event::Deactivate(vs) => {
            let mut s = "DEACTIVATE".to_string();
            for v in vs {
                s.push_str(&format!(" {v}"));
            }
            s
        }
    }
}

pub fn render(events: &[Event]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&render_event(e));
        out.push('\n');
    }
    out
}

fn parse_ids(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad id list: {s}"))))
        .collect()
}

pub fn parse(input: &str) -> Result<Vec<Event>> {
    let mut out = Vec::new();
    for line in input.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let mut it = line.split_whitespace();
        let bad = || Error::Parse(format!("bad transcript line: {line}"));
        match it.next() {
            Some("SPEND") => {
                let v = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
                out.push(Event::Spend(v));
            }
            Some("FORCE") => {
                let u = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
                let w = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
                out.push(Event::Force(u, w));
            }
            Some("RULE3") => {
                let mut offer = None;
                let mut response = None;
                let mut forces = None;
                for field in it {
                    let (key, val) = field.split_once('=').ok_or_else(bad)?;
                    match key {
                        "offer" => offer = Some(parse_ids(val)?),
                        "response" => response = Some(parse_ids(val)?),
                        "force" => {
                            forces = Some(if val == "none" {
                                Vec::new()
                            } else {
                                val.split(';')
                                    .map(|p| {
                                        let ids = parse_ids(p)?;
                                        if ids.len() != 2 {
                                            return Err(bad());
                                        }
                                        Ok((ids[0], ids[1]))
                                    })
                                    .collect::<Result<Vec<_>>>()?
                            });
                        }
                        _ => return Err(bad()),
                    }
                }
                out.push(Event::Rule3 {
                    offer: offer.ok_or_else(bad)?,
                    response: response.ok_or_else(bad)?,
                    forces: forces.ok_or_else(bad)?,
                });
            }
            Some("DEACTIVATE") => {
                let vs: Vec<usize> = it
                    .map(|t| t.parse().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                if vs.is_empty() {
                    return Err(bad());
                }
                out.push(Event::Deactivate(vs));
            }
            _ => return Err(bad()),
        }
    }
    Ok(out)
}

/// Replay a transcript, validating every move, and return the final state
/// and token count.
pub fn replay<'g>(
    graph: &'g Graph,
    q: usize,
    initial_blue: &VertexSet,
    events: &[Event],
) -> Result<(GameState<'g>, u32)> {
    let mut state = GameState::new(graph, initial_blue.clone());
    let mut tokens = 0u32;
    for e in events {
        match e {
            Event::Spend(v) => {
                let (next, cost) =
                    crate::engine::apply_move(&state, &crate::engine::Move::Spend(*v))?;
                state = next;
                tokens += cost;
            }
            Event::Force(u, w) => {
                let (next, _) =
                    crate::engine::apply_move(&state, &crate::engine::Move::Force(*u, *w))?;
                state = next;
            }
            Event::Rule3 { offer, response, forces } => {
                let partition = white_components(&state);
                let offer = Offer::new(offer.clone());
                offer.validate(&partition, q)?;
                let response = WhiteResponse::new(response.clone());
                response.validate(&offer)?;
                // visible vertices never change during one invocation
                let mut view = state.blue.clone();
                for &i in &response.components {
                    view = view.union(&partition[i]);
                }
                for &(u, w) in forces {
                    let legal = resolve_rule3_in_view(&state, &view)?;
                    if !legal.contains(&(u, w)) {
                        return Err(Error::IllegalMove(format!(
                            "force {u}->{w} not legal in the offered view"
                        )));
                    }
                    state = state.with_blue(w);
                }
                // legality of the recorded force count is the caller's
                // semantics; an empty list is a null invocation
                let _ = resolve_rule3(&state, &partition, &offer, &response);
            }
            Event::Deactivate(vs) => {
                for &v in vs {
                    if activity(&state) <= q {
                        return Err(Error::IllegalMove(
                            "deactivation past the activity threshold".into(),
                        ));
                    }
                    if state.blue.contains(v) {
                        return Err(Error::IllegalMove(format!("deactivation choice {v} is blue")));
                    }
                    if !graph.neighbors(v).iter().any(|&u| state.blue.contains(u)) {
                        return Err(Error::IllegalMove(format!(
                            "deactivation choice {v} is not blue-adjacent"
                        )));
                    }
                    state = state.with_blue(v);
                }
                if activity(&state) > q {
                    return Err(Error::IllegalMove("deactivation stopped early".into()));
                }
            }
        }
    }
    Ok((state, tokens))
}

// Forces available when only `view` vertices are visible.
fn resolve_rule3_in_view(state: &GameState, view: &VertexSet) -> Result<Vec<(usize, usize)>> {
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
