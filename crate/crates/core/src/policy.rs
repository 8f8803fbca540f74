//! Blue and White policy interfaces. Concrete strategies live in
//! [`crate::strategies`]; the exact solver consumes these traits to certify
//! bounds against fixed opponents.

use crate::engine::{Offer, WhiteResponse};
use crate::error::Result;
use crate::graph::{ComponentPartition, GameState};

/// What Blue proposes on its turn. `Deactivate` is only meaningful under
/// the deactivation-rule variant and requires activity above the threshold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Action {
    Spend(usize),
    Force(usize, usize),
    Offer(Offer),
    Deactivate,
}

pub trait BluePolicy {
    fn name(&self) -> String;

    /// Memoryless policies are pure functions of the game state, which lets
    /// the certifying solver cache positions.
    fn is_memoryless(&self) -> bool {
        true
    }

    fn decide(&mut self, state: &GameState, q: usize) -> Result<Action>;

    /// Which conceded force to take under single-force resolution.
    /// `forces` is nonempty and sorted; default takes the smallest pair.
    fn choose_force(&mut self, _state: &GameState, forces: &[(usize, usize)]) -> (usize, usize) {
        forces[0]
    }

    fn clone_box(&self) -> Box<dyn BluePolicy>;
}

pub trait WhitePolicy {
    fn name(&self) -> String;

    /// A stable key for the policy's internal state, or `None` if the state
    /// space is unbounded. `Some` keys let the certifying solver memoize on
    /// (position, key).
    fn memo_key(&self) -> Option<u64> {
        Some(0)
    }

    fn respond(
        &mut self,
        state: &GameState,
        partition: &ComponentPartition,
        offer: &Offer,
        q: usize,
    ) -> Result<WhiteResponse>;

    /// Which blue-adjacent white vertex to color during deactivation.
    /// Default: the smallest one.
    fn choose_deactivation(&mut self, state: &GameState) -> Result<usize> {
        (0..state.graph.n())
            .find(|&v| {
                state.is_white(v)
                    && state.graph.neighbors(v).iter().any(|&u| state.blue.contains(u))
            })
            .ok_or_else(|| crate::error::Error::Policy("no blue-adjacent white vertex".into()))
    }

    fn clone_box(&self) -> Box<dyn WhitePolicy>;
}

/// White returns every offered component. The least informative legal
/// response; useful as a baseline and a fallback.
#[derive(Clone, Debug, Default)]
pub struct FullResponseWhite;

impl WhitePolicy for FullResponseWhite {
    fn name(&self) -> String {
        "full-response".into()
    }

    fn respond(
        &mut self,
        _state: &GameState,
        _partition: &ComponentPartition,
        offer: &Offer,
        _q: usize,
    ) -> Result<WhiteResponse> {
        Ok(WhiteResponse::new(offer.components.clone()))
    }

    fn clone_box(&self) -> Box<dyn WhitePolicy> {
        Box::new(self.clone())
    }
}
