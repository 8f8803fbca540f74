//! Center classification and protected-path potential for caterpillar
//! cycles and paths. The potential counts good centers that White can keep
//! out of Blue's reach without spending moves.

use crate::error::{Error, Result};
use crate::families::CatMeta;
use crate::graph::GameState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathVariant {
    /// Only the two endpoints may be bad; the full cycle counts as a path
    /// with matching endpoints.
    Q2,
    /// Endpoints plus at most one internal bad center, no two bad centers
    /// adjacent, distinct endpoints.
    Q3,
}

/// Consecutive centers `start, start+1, …` (mod n when cyclic). A
/// `full_cycle` path wraps all the way around back to its start and has
/// `n_centers + 1` positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProtectedPath {
    pub start: usize,
    pub len: usize,
    pub full_cycle: bool,
    pub variant: PathVariant,
}

impl ProtectedPath {
    /// Center indices in order (the full cycle omits the repeated start).
    pub fn centers(&self, n: usize) -> Vec<usize> {
        if self.full_cycle {
            (0..n).map(|j| (self.start + j) % n).collect()
        } else {
            (0..self.len).map(|j| (self.start + j) % n).collect()
        }
    }

    pub fn phi(&self) -> usize {
        match self.variant {
            PathVariant::Q2 => self.len.saturating_sub(2),
            PathVariant::Q3 => self.len, // stored directly, see builder
        }
    }
}

/// Per-center bad flags: bad means blue, or owning a blue pendant.
pub fn classify_centers(state: &GameState, meta: &CatMeta) -> Result<Vec<bool>> {
    if meta.n_centers + meta.counts.iter().sum::<usize>() != state.graph.n() {
        return Err(Error::Domain("metadata does not match the graph".into()));
    }
    Ok((0..meta.n_centers)
        .map(|i| {
            state.blue.contains(i) || meta.pendants(i).any(|p| state.blue.contains(p))
        })
        .collect())
}

fn white_pendant_flags(state: &GameState, meta: &CatMeta) -> Vec<bool> {
    (0..meta.n_centers)
        .map(|i| meta.pendants(i).any(|p| state.is_white(p)))
        .collect()
}

/// A path stored together with its potential (q3 paths carry the count of
/// good internal centers, which the length alone does not determine).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScoredPath {
    pub path: ProtectedPath,
    pub phi: usize,
    pub bad_count: usize,
}

fn arc_positions(n: usize, cyclic: bool, start: usize, len: usize) -> Option<Vec<usize>> {
    if cyclic {
        (len <= n).then(|| (0..len).map(|j| (start + j) % n).collect())
    } else {
        (start + len <= n).then(|| (start..start + len).collect())
    }
}

/// Every valid protected path of at least two centers, plus the q2 full
/// cycle when it applies.
pub fn protected_paths(
    state: &GameState,
    meta: &CatMeta,
    variant: PathVariant,
) -> Result<Vec<ScoredPath>> {
    let bad = classify_centers(state, meta)?;
    let wp = white_pendant_flags(state, meta);
    let n = meta.n_centers;
    let mut out = Vec::new();

    if variant == PathVariant::Q2 && meta.cyclic && wp.iter().all(|&x| x) {
        let bad_idx: Vec<usize> = (0..n).filter(|&i| bad[i]).collect();
        if bad_idx.len() <= 1 {
            let start = bad_idx.first().copied().unwrap_or(0);
            out.push(ScoredPath {
                path: ProtectedPath { start, len: n + 1, full_cycle: true, variant },
                phi: n - 1,
                bad_count: bad_idx.len(),
            });
        }
    }

    for start in 0..n {
        for len in 2..=n {
            let Some(pos) = arc_positions(n, meta.cyclic, start, len) else { break };
            if pos.iter().any(|&c| !wp[c]) {
                continue;
            }
            let bads: Vec<usize> = (0..len).filter(|&j| bad[pos[j]]).collect();
            let ok = match variant {
                PathVariant::Q2 => bads.iter().all(|&j| j == 0 || j == len - 1),
                PathVariant::Q3 => {
                    let internal_bads =
                        bads.iter().filter(|&&j| j != 0 && j != len - 1).count();
                    internal_bads <= 1 && bads.windows(2).all(|w| w[1] - w[0] > 1)
                }
            };
            if !ok {
                continue;
            }
            let phi = match variant {
                PathVariant::Q2 => len - 2,
                PathVariant::Q3 => (1..len - 1).filter(|&j| !bad[pos[j]]).count(),
            };
            out.push(ScoredPath {
                path: ProtectedPath { start, len, full_cycle: false, variant },
                phi,
                bad_count: bads.len(),
            });
        }
    }
    Ok(out)
}

/// Maximum potential over protected paths; zero when none exist.
pub fn phi(state: &GameState, meta: &CatMeta, variant: PathVariant) -> Result<usize> {
    Ok(protected_paths(state, meta, variant)?.iter().map(|s| s.phi).max().unwrap_or(0))
}

/// Maximum q3 potential over protected paths with at most two bad centers.
pub fn phi_two_bad(state: &GameState, meta: &CatMeta) -> Result<usize> {
    Ok(protected_paths(state, meta, PathVariant::Q3)?
        .iter()
        .filter(|s| s.bad_count <= 2)
        .map(|s| s.phi)
        .max()
        .unwrap_or(0))
}

/// The committed path choice: highest potential, then smallest start,
/// then shortest.
pub fn best_path(
    state: &GameState,
    meta: &CatMeta,
    variant: PathVariant,
) -> Result<Option<ScoredPath>> {
    let mut paths = protected_paths(state, meta, variant)?;
    paths.sort_by_key(|s| (std::cmp::Reverse(s.phi), s.path.start, s.path.len));
    Ok(paths.into_iter().next())
}

/// Is this exact path still protected in the current state?
pub fn still_protected(
    state: &GameState,
    meta: &CatMeta,
    path: &ProtectedPath,
) -> Result<bool> {
    Ok(protected_paths(state, meta, path.variant)?.iter().any(|s| s.path == *path))
}

/// Vertices White defends: the path's centers and all their pendants.
pub fn path_territory(meta: &CatMeta, path: &ProtectedPath) -> Vec<usize> {
    let mut out = Vec::new();
    for c in path.centers(meta.n_centers) {
        out.push(c);
        out.extend(meta.pendants(c));
    }
    out
}
