//! Command-line front end: solve, bound, certify, simulate, generate,
//! inertia checks, the acceptance suite, and an interactive game.

use std::io::{BufRead, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zq_core::engine::{legal_forces, resolve_rule3, Offer, WhiteResponse};
use zq_core::families::{self, Built};
use zq_core::graph::{text, white_components, GameState};
use zq_core::solver::{
    certify_lower, certify_upper, zq_value, Rule3Semantics, SolveConfig, Variant,
};
use zq_core::strategies::{make_blue, make_white};
use zq_core::transcript;
use zq_core::{bounds, inertia, simulate, verify, Error, VertexSet};

#[derive(Parser)]
#[command(name = "zq", about = "Exact solver and strategy lab for the component-offer forcing game")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rule3Flag {
    Single,
    Exhaustive,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    Blue,
    White,
}

#[derive(Args)]
struct GraphArgs {
    /// Family string such as `path:5`, `cnk:n=4,k=2`, or `file:graph.txt`
    #[arg(long)]
    graph: String,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value_t = 0)]
    q: usize,
    #[arg(long, value_enum, default_value_t = Rule3Flag::Single)]
    rule3: Rule3Flag,
    #[arg(long, default_value_t = 1 << 20)]
    budget: u64,
    /// Use the deactivation variant instead of component offers
    #[arg(long)]
    star: bool,
    /// Let Blue offer any number of components, not just q+1
    #[arg(long)]
    all_offers: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the exact game value and an optimal line
    Solve(SolveArgs),
    /// Print lower/upper bound reports as CSV
    Bound {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        q: usize,
        /// Also run the exact solver and include its value
        #[arg(long)]
        exact: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<String>,
    },
    /// Certify bounds with a fixed Blue and/or White policy
    Certify {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        q: usize,
        #[arg(long)]
        blue: Option<String>,
        #[arg(long)]
        white: Option<String>,
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
    },
    /// Play one policy against another and print the transcript
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        q: usize,
        #[arg(long, default_value = "optimal")]
        blue: String,
        #[arg(long, default_value = "full")]
        white: String,
        #[arg(long, value_enum, default_value_t = Rule3Flag::Single)]
        rule3: Rule3Flag,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Write a graph file for a family
    Gen {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        out: Option<String>,
    },
    /// Check the star-forest witness matrices
    Inertia {
        /// Leaf counts, e.g. `4,3`
        #[arg(long)]
        stars: String,
        #[arg(long, default_value_t = 0)]
        q: usize,
    },
    /// Run the acceptance checks and print a pass/fail table
    Verify {
        /// Only run checks whose name contains this string
        #[arg(long)]
        suite: Option<String>,
    },
    /// Play interactively against a policy
    Play {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        q: usize,
        #[arg(long, value_enum, default_value_t = Side::Blue)]
        side: Side,
        /// Policy for the computer-controlled side
        #[arg(long, default_value = "full")]
        opponent: String,
        #[arg(long)]
        out: Option<String>,
    },
}

fn build_graph(spec: &str) -> Result<Built, Error> {
    if let Some(path) = spec.strip_prefix("file:") {
        let input = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
        Ok(text::parse(&input)?.into())
    } else {
        families::build_spec(spec)
    }
}

fn write_out(out: &Option<String>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Parse(format!("cannot write {path}: {e}"))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) => 2,
        Error::ClaimFalsified(_) => 3,
        _ => 1,
    }
}

fn cmd_solve(a: &SolveArgs) -> Result<(), Error> {
    let built = build_graph(&a.graph.graph)?;
    let cfg = SolveConfig {
        q: a.q,
        variant: if a.star { Variant::Star } else { Variant::Standard },
        rule3_semantics: match a.rule3 {
            Rule3Flag::Single => Rule3Semantics::SingleForce,
            Rule3Flag::Exhaustive => Rule3Semantics::Exhaustive,
        },
        minimal_offers_only: !a.all_offers,
        budget: a.budget,
        ..SolveConfig::new(a.q)
    };
    let g = &built.graph;
    let r = zq_core::solver::solve(g, &cfg, &VertexSet::empty(g.n()))?;
    println!("value: {}", r.value);
    println!("principal line:");
    for e in &r.principal_line {
        println!("  {}", transcript::render_event(e));
    }
    println!(
        "states: {}  memo hits: {}  wall: {:?}",
        r.stats.states, r.stats.memo_hits, r.stats.wall
    );
    Ok(())
}

fn family_tag(spec: &str) -> &str {
    spec.split(':').next().unwrap_or(spec)
}

fn cmd_bound(
    spec: &str,
    q: usize,
    exact: bool,
    format: Format,
    out: &Option<String>,
) -> Result<(), Error> {
    let built = build_graph(spec)?;
    let g = &built.graph;
    let n_centers = built.caterpillar.as_ref().map(|m| m.n_centers);
    let k = built.caterpillar.as_ref().map(|m| m.k);
    let mut report = bounds::BoundReport {
        graph: spec.to_string(),
        q,
        lower: 0.0,
        lower_src: "trivial".into(),
        upper: g.n() as f64,
        upper_src: "spend-everything".into(),
        exact: None,
        notes: Vec::new(),
    };
    match family_tag(spec) {
        "star-forest" => {
            let sizes: Vec<usize> = spec[12..]
                .split(',')
                .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad size `{s}`"))))
                .collect::<Result<_, _>>()?;
            let mut sorted = sizes.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let v = bounds::star_forest_zq(&sorted, q)? as f64;
            report.lower = v;
            report.lower_src = "star-formula".into();
            report.upper = v;
            report.upper_src = "star-formula".into();
        }
        "cnk" | "corona" if q == 2 => {
            let b = bounds::z2_cnk_bounds(n_centers.unwrap(), k.unwrap())?;
            report.lower = b.lower;
            report.lower_src = "cycle-doubling".into();
            report.upper = b.upper;
            report.upper_src = "pendant-cycle-split".into();
        }
        "cnk" | "corona" if q >= 3 => {
            let (b, p) = bounds::zq_cnk_bounds(n_centers.unwrap(), k.unwrap(), q)?;
            report.lower = b.lower.max(0.0);
            report.lower_src = "cycle-halving".into();
            report.upper = b.upper;
            report.upper_src = format!("split-arity-{p}");
            report.notes.push(bounds::LOWER_BOUND_PROOF_NOTE.into());
        }
        "pnk" if q >= 3 => {
            let (b, p) = bounds::caterpillar_bounds(n_centers.unwrap(), k.unwrap(), q)?;
            report.lower = b.lower.max(0.0);
            report.lower_src = "cycle-halving-minus-edge".into();
            report.upper = b.upper;
            report.upper_src = format!("split-arity-{p}-plus-edge");
            report.notes.push(bounds::LOWER_BOUND_PROOF_NOTE.into());
        }
        _ if g.is_tree() => {
            let (b, root) = bounds::tree_upper_bound(g, q)?;
            report.upper = b as f64;
            report.upper_src = format!("rooted-degree@{root}");
        }
        _ => {}
    }
    if exact {
        report.exact =
            Some(zq_value(g, &SolveConfig::new(q), &VertexSet::empty(g.n()))?.value);
    }
    report.validate()?;
    for note in &report.notes {
        eprintln!("note: {note}");
    }
    let content = match format {
        Format::Csv => format!("{}\n{}\n", bounds::BoundReport::csv_header(), report.csv_line()),
        Format::Text => format!(
            "graph {} q={}: lower {} ({}), upper {} ({}){}\n",
            report.graph,
            report.q,
            report.lower,
            report.lower_src,
            report.upper,
            report.upper_src,
            report
                .exact
                .map(|x| format!(", exact {x}"))
                .unwrap_or_default()
        ),
    };
    write_out(out, &content)
}

fn cmd_certify(
    spec: &str,
    q: usize,
    blue: &Option<String>,
    white: &Option<String>,
    budget: u64,
) -> Result<(), Error> {
    if blue.is_none() && white.is_none() {
        return Err(Error::Parse("name at least one of --blue / --white".into()));
    }
    let built = build_graph(spec)?;
    let cfg = SolveConfig { budget, ..SolveConfig::new(q) };
    if let Some(name) = blue {
        let policy = make_blue(name, &built, q)?;
        let up = certify_upper(&built.graph, &cfg, policy.as_ref())?;
        println!("upper bound (blue {name}): {up}");
    }
    if let Some(name) = white {
        let policy = make_white(name, &built)?;
        let lo = certify_lower(&built.graph, &cfg, policy.as_ref())?;
        println!("lower bound (white {name}): {lo}");
    }
    Ok(())
}

fn cmd_simulate(
    spec: &str,
    q: usize,
    blue: &str,
    white: &str,
    rule3: Rule3Flag,
    seed: u64,
    out: &Option<String>,
) -> Result<(), Error> {
    let built = build_graph(spec)?;
    let cfg = SolveConfig {
        rule3_semantics: match rule3 {
            Rule3Flag::Single => Rule3Semantics::SingleForce,
            Rule3Flag::Exhaustive => Rule3Semantics::Exhaustive,
        },
        ..SolveConfig::new(q)
    };
    let seeded = |name: &str| {
        if name == "random" {
            format!("random:seed={seed}")
        } else {
            name.to_string()
        }
    };
    let mut b = make_blue(&seeded(blue), &built, q)?;
    let mut w = make_white(&seeded(white), &built)?;
    let g = &built.graph;
    let sim = simulate::simulate(g, &cfg, b.as_mut(), w.as_mut(), &VertexSet::empty(g.n()))?;
    let mut content = transcript::render(&sim.events);
    content.push_str(&format!("tokens: {}\n", sim.tokens));
    write_out(out, &content)
}

fn cmd_inertia(stars: &str, q: usize) -> Result<(), Error> {
    let leaves: Vec<usize> = stars
        .split(',')
        .map(|s| s.parse().map_err(|_| Error::Parse(format!("bad leaf count `{s}`"))))
        .collect::<Result<_, _>>()?;
    let orders: Vec<usize> = leaves.iter().map(|&m| m + 1).collect();
    let forest = families::star_forest(&orders)?;
    let z = zq_value(&forest, &SolveConfig::new(q), &VertexSet::empty(forest.n()))?.value;
    let report = inertia::verify_remark(&leaves, q, z)?;
    let i = report.inertia;
    println!("inertia: ({}, {}, {})", i.positives, i.negatives, i.nullity);
    println!(
        "negatives == {}: {}",
        report.expected_negatives,
        pass(i.negatives == report.expected_negatives)
    );
    println!(
        "nullity == {}: {}",
        report.expected_nullity,
        pass(i.nullity == report.expected_nullity)
    );
    println!("pattern matches forest: {}", pass(report.pattern_ok));
    println!("nullity <= game value {z}: {}", pass(i.nullity as u32 <= z));
    if report.ok() {
        Ok(())
    } else {
        Err(Error::ClaimFalsified(report.failures.join(", ")))
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_verify(suite: &Option<String>) -> Result<(), Error> {
    let mut failed = false;
    for (i, name, outcome) in verify::run_all_filtered(suite.as_deref()) {
        match outcome {
            Ok(status) => {
                let label = pass(status.passed());
                println!("criterion {i}: {label} — {name}: {}", status.detail());
                failed |= !status.passed();
            }
            Err(e) => {
                println!("criterion {i}: ERROR — {name}: {e}");
                failed = true;
            }
        }
    }
    if failed {
        Err(Error::ClaimFalsified("one or more checks failed".into()))
    } else {
        Ok(())
    }
}

fn cmd_play(
    spec: &str,
    q: usize,
    side: Side,
    opponent: &str,
    out: &Option<String>,
) -> Result<(), Error> {
    let built = build_graph(spec)?;
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    play_session(&built, q, side, opponent, &mut stdin.lock(), &mut stdout.lock(), out)
}

fn play_session(
    built: &Built,
    q: usize,
    side: Side,
    opponent: &str,
    input: &mut dyn BufRead,
    output: &mut dyn Write,
    out: &Option<String>,
) -> Result<(), Error> {
    let g = &built.graph;
    let mut state = GameState::new(g, VertexSet::empty(g.n()));
    let mut events: Vec<transcript::Event> = Vec::new();
    let mut tokens = 0u32;
    let mut blue_policy = make_blue(if side == Side::White { opponent } else { "optimal" }, built, q).ok();
    let mut white_policy = make_white(if side == Side::Blue { opponent } else { "full" }, built).ok();
    let io_err = |e: std::io::Error| Error::Parse(format!("terminal: {e}"));
    macro_rules! say {
        ($($arg:tt)*) => { writeln!(output, $($arg)*).map_err(io_err)?; };
    }
    let mut quit = false;
    while !state.is_all_blue() && !quit {
        let blue_list: Vec<usize> = state.blue.iter().collect();
        say!("blue: {blue_list:?}  tokens: {tokens}");
        let partition = white_components(&state);
        let forces = legal_forces(&state);
        let action = if side == Side::Blue {
            say!("moves: spend V | force U W | offer I J ... | quit");
            for (i, comp) in partition.iter().enumerate() {
                say!("  component {i}: {:?}", comp.iter().collect::<Vec<_>>());
            }
            if !forces.is_empty() {
                say!("  forces available: {forces:?}");
            }
            match read_blue_action(input, output, &state, q, &partition)? {
                None => {
                    quit = true;
                    continue;
                }
                Some(a) => a,
            }
        } else {
            blue_policy
                .as_mut()
                .ok_or_else(|| Error::BadFamily(format!("unknown blue policy `{opponent}`")))?
                .decide(&state, q)?
        };
        match action {
            zq_core::policy::Action::Spend(v) => {
                let (next, cost) =
                    zq_core::engine::apply_move(&state, &zq_core::engine::Move::Spend(v))?;
                state = next;
                tokens += cost;
                say!("spend {v}");
                events.push(transcript::Event::Spend(v));
            }
            zq_core::policy::Action::Force(u, w) => {
                let (next, _) =
                    zq_core::engine::apply_move(&state, &zq_core::engine::Move::Force(u, w))?;
                state = next;
                say!("force {u} -> {w}");
                events.push(transcript::Event::Force(u, w));
            }
            zq_core::policy::Action::Offer(offer) => {
                offer.validate(&partition, q)?;
                say!("offer: components {:?}", offer.components);
                let resp = if side == Side::White {
                    read_white_response(input, output, &partition, &offer)?
                } else {
                    white_policy
                        .as_mut()
                        .ok_or_else(|| Error::BadFamily(format!("unknown white policy `{opponent}`")))?
                        .respond(&state, &partition, &offer, q)?
                };
                resp.validate(&offer)?;
                say!("white returns {:?}", resp.components);
                let conceded = resolve_rule3(&state, &partition, &offer, &resp)?;
                let mut applied = Vec::new();
                if let Some(&f) = conceded.first() {
                    let pick = if side == Side::Blue && conceded.len() > 1 {
                        read_force_choice(input, output, &conceded)?
                    } else {
                        f
                    };
                    state = state.with_blue(pick.1);
                    say!("force {} -> {}", pick.0, pick.1);
                    applied.push(pick);
                } else {
                    say!("no force conceded");
                }
                events.push(transcript::Event::Rule3 {
                    offer: offer.components.clone(),
                    response: resp.components.clone(),
                    forces: applied,
                });
            }
            zq_core::policy::Action::Deactivate => {
                return Err(Error::Policy("deactivation is not playable interactively".into()));
            }
        }
    }
    if state.is_all_blue() {
        say!("all blue in {tokens} tokens");
    }
    if let Some(path) = out {
        let mut content = transcript::render(&events);
        content.push_str(&format!("tokens: {tokens}\n"));
        std::fs::write(path, content)
            .map_err(|e| Error::Parse(format!("cannot write {path}: {e}")))?;
        say!("transcript saved to {path}");
    }
    Ok(())
}

fn prompt(input: &mut dyn BufRead, output: &mut dyn Write) -> Result<Option<String>, Error> {
    write!(output, "> ").map_err(|e| Error::Parse(format!("terminal: {e}")))?;
    output.flush().map_err(|e| Error::Parse(format!("terminal: {e}")))?;
    let mut line = String::new();
    let read = input
        .read_line(&mut line)
        .map_err(|e| Error::Parse(format!("terminal: {e}")))?;
    if read == 0 {
        return Ok(None);
    }
    Ok(Some(line.trim().to_string()))
}

fn read_blue_action(
    input: &mut dyn BufRead,
    output: &mut dyn Write,
    state: &GameState,
    q: usize,
    partition: &Vec<VertexSet>,
) -> Result<Option<zq_core::policy::Action>, Error> {
    loop {
        let Some(line) = prompt(input, output)? else { return Ok(None) };
        let words: Vec<&str> = line.split_whitespace().collect();
        let parsed: Result<zq_core::policy::Action, String> = match words.as_slice() {
            ["quit"] | ["q"] => return Ok(None),
            ["spend", v] => v
                .parse()
                .map(zq_core::policy::Action::Spend)
                .map_err(|_| "bad vertex".into()),
            ["force", u, w] => match (u.parse(), w.parse()) {
                (Ok(u), Ok(w)) => Ok(zq_core::policy::Action::Force(u, w)),
                _ => Err("bad vertices".into()),
            },
            ["offer", rest @ ..] if !rest.is_empty() => {
                match rest.iter().map(|s| s.parse()).collect::<Result<Vec<usize>, _>>() {
                    Ok(ids) => {
                        let offer = Offer::new(ids);
                        match offer.validate(partition, q) {
                            Ok(()) => Ok(zq_core::policy::Action::Offer(offer)),
                            Err(e) => Err(e.to_string()),
                        }
                    }
                    Err(_) => Err("bad component list".into()),
                }
            }
            _ => Err("commands: spend V | force U W | offer I J ... | quit".into()),
        };
        match parsed {
            Ok(a) => {
                // pre-validate spends and forces so bad input re-prompts
                let mv = match &a {
                    zq_core::policy::Action::Spend(v) => Some(zq_core::engine::Move::Spend(*v)),
                    zq_core::policy::Action::Force(u, w) => {
                        Some(zq_core::engine::Move::Force(*u, *w))
                    }
                    _ => None,
                };
                if let Some(mv) = mv {
                    if let Err(e) = zq_core::engine::apply_move(state, &mv) {
                        writeln!(output, "illegal: {e}")
                            .map_err(|e| Error::Parse(format!("terminal: {e}")))?;
                        continue;
                    }
                }
                return Ok(Some(a));
            }
            Err(msg) => {
                writeln!(output, "illegal: {msg}")
                    .map_err(|e| Error::Parse(format!("terminal: {e}")))?;
            }
        }
    }
}

fn read_white_response(
    input: &mut dyn BufRead,
    output: &mut dyn Write,
    _partition: &[VertexSet],
    offer: &Offer,
) -> Result<WhiteResponse, Error> {
    loop {
        writeln!(output, "pick a nonempty subset of {:?} (space-separated)", offer.components)
            .map_err(|e| Error::Parse(format!("terminal: {e}")))?;
        let Some(line) = prompt(input, output)? else {
            return Err(Error::Parse("input closed mid-response".into()));
        };
        match line
            .split_whitespace()
            .map(|s| s.parse())
            .collect::<Result<Vec<usize>, _>>()
        {
            Ok(ids) if !ids.is_empty() => {
                let resp = WhiteResponse::new(ids);
                match resp.validate(offer) {
                    Ok(()) => return Ok(resp),
                    Err(e) => writeln!(output, "illegal: {e}")
                        .map_err(|e| Error::Parse(format!("terminal: {e}")))?,
                }
            }
            _ => writeln!(output, "illegal: need component indices")
                .map_err(|e| Error::Parse(format!("terminal: {e}")))?,
        }
    }
}

fn read_force_choice(
    input: &mut dyn BufRead,
    output: &mut dyn Write,
    conceded: &[(usize, usize)],
) -> Result<(usize, usize), Error> {
    loop {
        writeln!(output, "conceded forces: {conceded:?}; pick an index")
            .map_err(|e| Error::Parse(format!("terminal: {e}")))?;
        let Some(line) = prompt(input, output)? else {
            return Ok(conceded[0]);
        };
        if let Ok(i) = line.trim().parse::<usize>() {
            if i < conceded.len() {
                return Ok(conceded[i]);
            }
        }
        writeln!(output, "illegal: index 0..{}", conceded.len() - 1)
            .map_err(|e| Error::Parse(format!("terminal: {e}")))?;
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Bound { graph, q, exact, format, out } => {
            cmd_bound(&graph.graph, *q, *exact, *format, out)
        }
        Command::Certify { graph, q, blue, white, budget } => {
            cmd_certify(&graph.graph, *q, blue, white, *budget)
        }
        Command::Simulate { graph, q, blue, white, rule3, seed, out } => {
            cmd_simulate(&graph.graph, *q, blue, white, *rule3, *seed, out)
        }
        Command::Gen { graph, out } => build_graph(&graph.graph)
            .and_then(|built| write_out(out, &text::render(&built.graph))),
        Command::Inertia { stars, q } => cmd_inertia(stars, *q),
        Command::Verify { suite } => cmd_verify(suite),
        Command::Play { graph, q, side, opponent, out } => {
            cmd_play(&graph.graph, *q, *side, opponent, out)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
