//! The acceptance checks: each criterion cross-validates one claim against
//! the exact solver, a certified policy, or an independent oracle, and
//! reports a one-line summary.

use crate::bitset::VertexSet;
use crate::bounds;
use crate::error::{Error, Result};
use crate::families;
use crate::graph::Graph;
use crate::inertia;
use crate::protected::PathVariant;
use crate::simulate::simulate;
use crate::solver::{certify_lower, certify_upper, zq_value, SolveConfig};
use crate::strategies::*;
use crate::trace::{check_q2, check_q3_free_moves, phi_trace, q3_spend_violations};

/// Outcome of one acceptance criterion. `Fail` is an honest negative
/// result: the checked claim is falsified by the cited instances, which is
/// itself a reproducible finding (see the pinned counterexample tests).
#[derive(Clone, Debug)]
pub enum Status {
    Pass(String),
    Fail(String),
}

impl Status {
    pub fn passed(&self) -> bool {
        matches!(self, Status::Pass(_))
    }

    pub fn detail(&self) -> &str {
        match self {
            Status::Pass(d) | Status::Fail(d) => d,
        }
    }
}

fn exact(g: &Graph, q: usize) -> Result<u32> {
    Ok(zq_value(g, &SolveConfig::new(q), &VertexSet::empty(g.n()))?.value)
}

/// Descending star-order lists with entries >= 2 summing to at most `total`.
fn star_lists(total: usize) -> Vec<Vec<usize>> {
    fn extend(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        for next in (2..=remaining.min(max)).rev() {
            prefix.push(next);
            extend(remaining - next, next, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(total, total, &mut Vec::new(), &mut out);
    out
}

/// Star forests match the closed form for q up to 3.
pub fn criterion_1() -> Result<Status> {
    let mut checked = 0;
    for list in star_lists(12) {
        let g = families::star_forest(&list)?;
        for q in 0..=3 {
            let expect = bounds::star_forest_zq(&list, q)?;
            let got = exact(&g, q)?;
            if got != expect {
                return Err(Error::ClaimFalsified(format!(
                    "stars {list:?} q={q}: solver {got} != formula {expect}"
                )));
            }
            checked += 1;
        }
    }
    Ok(Status::Pass(format!("{checked} star-forest values match the closed form")))
}

/// The two small coronas have value k + 1 = 3 at q = 1.
pub fn criterion_2() -> Result<Status> {
    for n in [3usize, 4] {
        let cat = families::corona_cycle(n, 2)?;
        let got = exact(&cat.graph, 1)?;
        if got != 3 {
            return Err(Error::ClaimFalsified(format!("corona n={n}: value {got} != 3")));
        }
    }
    Ok(Status::Pass("corona values on 3 and 4 centers equal k+1 = 3".into()))
}

/// Exact q = 2 pendant-cycle values sit inside the log bounds, and the
/// committed policies certify both sides.
pub fn criterion_3() -> Result<Status> {
    let mut notes = Vec::new();
    for n in [3usize, 4] {
        let cat = families::cnk(n, 2, &vec![2; n])?;
        let cfg = SolveConfig::new(2);
        let z = exact(&cat.graph, 2)? as i64;
        let b = bounds::z2_cnk_bounds(n, 2)?;
        if z < b.lower_ceil() || z > b.upper_floor() {
            return Err(Error::ClaimFalsified(format!(
                "n={n}: Z_2 = {z} outside [{}, {}]",
                b.lower_ceil(),
                b.upper_floor()
            )));
        }
        let need = (n as f64).log2().ceil() as u32 + 1;
        let lo = certify_lower(&cat.graph, &cfg, &ProtectedPathWhite::new(cat.meta.clone(), PathVariant::Q2))?;
        if lo < need {
            return Err(Error::ClaimFalsified(format!(
                "n={n}: certified lower {lo} < {need}"
            )));
        }
        let up = certify_upper(&cat.graph, &cfg, &CaterpillarQ2Blue { meta: cat.meta.clone() })?;
        if (up as i64) > b.upper_floor() {
            return Err(Error::ClaimFalsified(format!(
                "n={n}: certified upper {up} > {}",
                b.upper_floor()
            )));
        }
        notes.push(format!("n={n}: {lo} <= {z} <= {up}"));
    }
    Ok(Status::Pass(notes.join("; ")))
}

/// The rooted-degree upper bound dominates the exact value on all small
/// trees.
pub fn criterion_4() -> Result<Status> {
    let mut checked = 0;
    for n in 2..=10 {
        for g in families::tree_classes(n)? {
            for q in [1usize, 2] {
                let (b, _) = bounds::tree_upper_bound(&g, q)?;
                let z = exact(&g, q)?;
                if z > b {
                    return Err(Error::ClaimFalsified(format!(
                        "tree n={n} q={q}: value {z} > bound {b}"
                    )));
                }
                checked += 1;
            }
        }
    }
    Ok(Status::Pass(format!("{checked} tree instances stay under the rooted bound")))
}

/// The brute-force subtree formula equals the exact value at q = 1.
pub fn criterion_5() -> Result<Status> {
    let mut checked = 0;
    for n in 3..=9 {
        for g in families::tree_classes(n)? {
            let f = bounds::z1_tree_formula(&g)?;
            let z = exact(&g, 1)?;
            if f != z {
                return Err(Error::ClaimFalsified(format!(
                    "tree n={n}: formula {f} != solver {z}"
                )));
            }
            checked += 1;
        }
    }
    Ok(Status::Pass(format!("{checked} trees match the q=1 formula")))
}

/// Deleting one edge moves the value by at most [-2, +1]; the adapted
/// policy pays at most one extra token, and the +1 is attained on a path.
pub fn criterion_6() -> Result<Status> {
    let mut graphs: Vec<Graph> = Vec::new();
    for n in 2..=8 {
        graphs.extend(families::tree_classes(n)?);
    }
    for n in 3..=7 {
        graphs.push(families::cycle(n)?);
    }
    let mut checked = 0;
    for g in &graphs {
        for q in [1usize, 2] {
            let base = exact(g, q)?;
            for &e in g.edges() {
                let reduced = g.delete_edge(e)?;
                let z = exact(&reduced, q)?;
                if z + 2 < base || z > base + 1 {
                    return Err(Error::ClaimFalsified(format!(
                        "n={} q={q} edge {e:?}: {base} -> {z}",
                        g.n()
                    )));
                }
                let adapted = adapt_edge_deletion(g, e, Box::new(OptimalBlue::new(SolveConfig::new(q))))?;
                let cost = certify_upper(&reduced, &SolveConfig::new(q), adapted.as_ref())?;
                if cost > base + 1 {
                    return Err(Error::ClaimFalsified(format!(
                        "n={} q={q} edge {e:?}: adapted cost {cost} > {base}+1",
                        g.n()
                    )));
                }
                checked += 1;
            }
        }
    }
    // tightness: the middle edge of P_4 costs the full +1
    let p4 = families::path(4)?;
    let cut = p4.delete_edge((1, 2))?;
    if exact(&p4, 1)? != 1 || exact(&cut, 1)? != 2 {
        return Err(Error::ClaimFalsified("path tightness instance failed".into()));
    }
    Ok(Status::Pass(format!("{checked} edge deletions stay in the sandwich; +1 attained on P_4")))
}

/// Values never decrease as the offer requirement grows.
pub fn criterion_7() -> Result<Status> {
    let mut graphs: Vec<Graph> = Vec::new();
    for n in 2..=8 {
        graphs.extend(families::tree_classes(n)?);
    }
    for seed in 0..50u64 {
        graphs.push(families::random_connected(4 + (seed as usize % 4), seed)?);
    }
    for g in &graphs {
        let mut prev = 0;
        for q in 0..=g.n() {
            let z = exact(g, q)?;
            if z < prev {
                return Err(Error::ClaimFalsified(format!(
                    "n={}: Z_{} = {z} < Z_{} = {prev}",
                    g.n(),
                    q,
                    q - 1
                )));
            }
            prev = z;
        }
    }
    Ok(Status::Pass(format!("{} graphs have nondecreasing value chains", graphs.len())))
}

/// Potential traces obey the free-move and spend bounds on every
/// transition of seeded pendant-cycle games. The two-component bounds and
/// the free-move preservation are hard requirements; the claimed
/// three-component spend bounds are falsified by legal play (see the
/// pinned counterexample tests in the trace module), so their violations
/// are collected and reported as an honest failure.
pub fn criterion_8() -> Result<Status> {
    let mut sims = 0;
    let mut q3_violations: Vec<String> = Vec::new();
    for n in 5..=12usize {
        let cat = families::cnk(n, 2, &vec![2; n])?;
        let empty = VertexSet::empty(cat.graph.n());
        for variant in [PathVariant::Q2, PathVariant::Q3] {
            let q = if variant == PathVariant::Q2 { 2 } else { 3 };
            let cfg = SolveConfig::new(q);
            let mut blues: Vec<Box<dyn crate::policy::BluePolicy>> = vec![
                Box::new(RandomBlue::new(n as u64)),
                Box::new(RandomBlue::new(1000 + n as u64)),
                Box::new(RandomBlue::new(2000 + n as u64)),
            ];
            match variant {
                PathVariant::Q2 => blues.push(Box::new(CaterpillarQ2Blue { meta: cat.meta.clone() })),
                PathVariant::Q3 => blues.push(Box::new(CaterpillarGeneralBlue::new(cat.meta.clone()))),
            }
            for mut blue in blues {
                let mut white = ProtectedPathWhite::new(cat.meta.clone(), variant);
                let sim = simulate(&cat.graph, &cfg, blue.as_mut(), &mut white, &empty)?;
                let trace = phi_trace(&cat.graph, &cat.meta, variant, &empty, &sim.events)?;
                match variant {
                    PathVariant::Q2 => check_q2(&trace)?,
                    PathVariant::Q3 => {
                        check_q3_free_moves(&trace)?;
                        for v in q3_spend_violations(&trace) {
                            q3_violations.push(format!("n={n}: {v}"));
                        }
                    }
                }
                sims += 1;
            }
        }
    }
    if q3_violations.is_empty() {
        Ok(Status::Pass(format!("{sims} traced games satisfy every step bound")))
    } else {
        Ok(Status::Fail(format!(
            "{sims} games traced; q=2 bounds and free-move preservation hold, but the \
             claimed q=3 spend bounds fail {} times (first: {}). A spend can create a \
             second internal bad center on the realizing path or strip a bad center's \
             last white pendant, dropping the potential below (phi-1)/3; see the \
             deterministic counterexamples on the 10- and 5-center pendant cycles in \
             the trace tests.",
            q3_violations.len(),
            q3_violations[0]
        )))
    }
}

/// The general splitting strategy finishes within the log-sized token
/// budget against both a structured and a random opponent.
pub fn criterion_9() -> Result<Status> {
    let mut notes = Vec::new();
    for n in [8usize, 16, 32, 64] {
        let cat = families::cnk(n, 2, &vec![2; n])?;
        let cfg = SolveConfig::new(3);
        let (b, _) = bounds::zq_cnk_bounds(n, 2, 3)?;
        let rounds_cap = (n as f64).log2();
        let whites: Vec<Box<dyn crate::policy::WhitePolicy>> = vec![
            Box::new(ProtectedPathWhite::new(cat.meta.clone(), PathVariant::Q3)),
            Box::new(RandomWhite::new(42 + n as u64)),
        ];
        for mut white in whites {
            let mut blue = CaterpillarGeneralBlue::new(cat.meta.clone());
            let sim = simulate(
                &cat.graph,
                &cfg,
                &mut blue,
                white.as_mut(),
                &VertexSet::empty(cat.graph.n()),
            )?;
            if (sim.tokens as f64) > b.upper {
                return Err(Error::ClaimFalsified(format!(
                    "n={n} vs {}: {} tokens > {}",
                    white.name(),
                    sim.tokens,
                    b.upper
                )));
            }
            if (blue.option3_rounds() as f64) > rounds_cap {
                return Err(Error::ClaimFalsified(format!(
                    "n={n} vs {}: {} split rounds > log2(n)",
                    white.name(),
                    blue.option3_rounds()
                )));
            }
            notes.push(format!("n={n}: {} tokens", sim.tokens));
        }
    }
    Ok(Status::Pass(notes.join("; ")))
}

/// The witness matrices realize the advertised inertia and never exceed the
/// game value.
pub fn criterion_10() -> Result<Status> {
    let lists: [&[usize]; 4] = [&[3], &[4, 3], &[5, 4, 3], &[3, 3, 3, 3]];
    let mut checked = 0;
    for leaves in lists {
        let orders: Vec<usize> = leaves.iter().map(|&m| m + 1).collect();
        let forest = families::star_forest(&orders)?;
        for q in [0usize, 1, 2, 5] {
            let z = exact(&forest, q)?;
            let report = inertia::verify_remark(leaves, q, z)?;
            if !report.ok() {
                return Err(Error::ClaimFalsified(format!(
                    "leaves {leaves:?} q={q}: {}",
                    report.failures.join(", ")
                )));
            }
            checked += 1;
        }
    }
    Ok(Status::Pass(format!("{checked} witness matrices verified")))
}

/// The halving recurrence's closed form is exact and hits zero at the log
/// threshold.
pub fn criterion_11() -> Result<Status> {
    for l0 in 1..=200i64 {
        for i in 0..=60u32 {
            if bounds::recurrence_l(i, l0) != bounds::recurrence_l_iter(i, l0) {
                return Err(Error::ClaimFalsified(format!(
                    "l0={l0} i={i}: closed form differs from iteration"
                )));
            }
        }
    }
    for n in 2..=1024u64 {
        let expect = (n as f64).log2().ceil() as u32;
        let got = bounds::recurrence_threshold(n);
        if got != expect {
            return Err(Error::ClaimFalsified(format!(
                "threshold({n}) = {got} != {expect}"
            )));
        }
    }
    Ok(Status::Pass("closed form exact for l0 <= 200, i <= 60; thresholds match ceil(log2 n)".into()))
}

/// Restricting Blue to minimum-size offers never changes the value.
pub fn criterion_12() -> Result<Status> {
    let mut checked = 0;
    for n in 2..=6 {
        for g in families::all_connected_graphs(n)? {
            for q in [1usize, 2] {
                let empty = VertexSet::empty(g.n());
                let minimal = zq_value(&g, &SolveConfig::new(q), &empty)?.value;
                let all = zq_value(
                    &g,
                    &SolveConfig { minimal_offers_only: false, ..SolveConfig::new(q) },
                    &empty,
                )?
                .value;
                if minimal != all {
                    return Err(Error::ClaimFalsified(format!(
                        "n={n} q={q}: minimal offers give {minimal}, all offers give {all}"
                    )));
                }
                checked += 1;
            }
        }
    }
    Ok(Status::Pass(format!("{checked} instances agree across offer policies")))
}

pub const CRITERIA: [(usize, &str, fn() -> Result<Status>); 12] = [
    (1, "star-forest exact values", criterion_1),
    (2, "corona values at q=1", criterion_2),
    (3, "pendant-cycle q=2 sandwich", criterion_3),
    (4, "tree upper bound soundness", criterion_4),
    (5, "q=1 tree formula", criterion_5),
    (6, "edge deletion sandwich", criterion_6),
    (7, "monotonicity in q", criterion_7),
    (8, "potential trace invariants", criterion_8),
    (9, "general splitting budget", criterion_9),
    (10, "inertia witnesses", criterion_10),
    (11, "halving recurrence", criterion_11),
    (12, "offer minimality", criterion_12),
];

/// Run every criterion in order, returning (index, name, outcome).
pub fn run_all() -> Vec<(usize, &'static str, Result<Status>)> {
    run_all_filtered(None)
}

/// Run the criteria whose names contain `filter` (all of them when `None`).
pub fn run_all_filtered(filter: Option<&str>) -> Vec<(usize, &'static str, Result<Status>)> {
    CRITERIA
        .iter()
        .filter(|(_, name, _)| filter.map_or(true, |f| name.contains(f)))
        .map(|&(i, name, f)| (i, name, f()))
        .collect()
}
