//! `hunt`: generate port-labeled instances, build advice, run advised
//! hunts and rendezvous, and verify the combinatorial identities.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad usage or
//! malformed input. Results go to stdout as `key=value` lines (or CSV for
//! `sweep`); diagnostics go to stderr.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::{One, Zero};

use hunt_core::agent::{self, MoveKind};
use hunt_core::analysis::{
    bound_report, caterpillar_census, cost_bound, count_tuples_bruteforce, sweep, sweep_csv,
    BoundKind, CostBound,
};
use hunt_core::codec::{self, BitString, Ratio};
use hunt_core::graph::{
    make_caterpillar, parse_instance, random_connected_graph, random_tree, write_instance,
    CaterpillarSpec, Instance, PortLabeledGraph,
};
use hunt_core::oracle::{create_advice, select_ell, SelectionMode};
use hunt_core::rendezvous::rendezvous_via_th;

#[derive(Parser)]
#[command(name = "hunt", version, about = "treasure hunt with advice on port-labeled graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance file.
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
    /// Build advice for an instance.
    Advise(AdviseArgs),
    /// Run an advised hunt.
    Hunt(HuntArgs),
    /// Run the two-agent rendezvous built on a hunt.
    Rendezvous(RendezvousArgs),
    /// Measure the advice/cost tradeoff across budgets.
    Sweep(SweepArgs),
    /// Check the combinatorial identities and bounds.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// One member of the caterpillar family T(depth, k).
    Caterpillar {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        k: usize,
        /// Comma-separated forward ports p_0..p_{depth-1}.
        #[arg(long)]
        ports: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A random connected graph with a far-away treasure.
    Random {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Defaults to a node farthest from the start.
        #[arg(long)]
        treasure: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A uniform random tree with a far-away treasure.
    Tree {
        #[arg(long)]
        nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long)]
        treasure: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AdviseArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Advice budget; mutually exclusive with --target-cost.
    #[arg(long, conflicts_with = "target_cost")]
    ell: Option<u64>,
    /// Pick the smallest budget meeting this cost.
    #[arg(long)]
    target_cost: Option<u64>,
    #[arg(long, value_enum, default_value_t = Mode::Certified)]
    mode: Mode,
    /// Where to write the advice bits; printed on stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Certified,
    Empirical,
}

#[derive(Args)]
struct HuntArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    advice: PathBuf,
    /// Write the move trace here, one `F <port>` or `B` per line.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct RendezvousArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Start node of the advised agent.
    #[arg(long)]
    a: usize,
    /// Start node of the inert agent.
    #[arg(long)]
    b: usize,
    /// Advice budget; defaults to the full budget.
    #[arg(long)]
    ell: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Comma-separated budgets; defaults to 0..=LogSum.
    #[arg(long)]
    ells: Option<String>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Count nonnegative d-tuples with sum <= m against the closed forms.
    Claim1 {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        m: u32,
    },
    /// Count the distinct members of the caterpillar family.
    Census {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        k: usize,
    },
    /// Re-check the cost bounds on a seeded batch of random instances.
    Bounds {
        #[arg(long, default_value_t = 20)]
        seeds: u64,
    },
}

enum Failure {
    /// Bad usage or malformed input: exit 2.
    Input(String),
    /// A verification check failed: exit 1.
    Check(String),
}

fn input<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Input(msg.into()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Gen { what } => gen(what),
        Cmd::Advise(args) => advise(args),
        Cmd::Hunt(args) => hunt(args),
        Cmd::Rendezvous(args) => rendezvous(args),
        Cmd::Sweep(args) => run_sweep(args),
        Cmd::Verify { what } => verify(what),
    }
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn endpoints(inst: &Instance, path: &Path) -> Result<(usize, usize), Failure> {
    match (inst.start, inst.treasure) {
        (Some(s), Some(t)) => Ok((s, t)),
        _ => input(format!("{}: instance needs start and treasure lines", path.display())),
    }
}

fn emit(text: String, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(cmd: GenCmd) -> Result<(), Failure> {
    let (graph, start, treasure, out) = match cmd {
        GenCmd::Caterpillar { depth, k, ports, out } => {
            let forward_ports: Vec<usize> = ports
                .split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::Input(format!("bad port list {ports:?}")))?;
            let spec = CaterpillarSpec { depth, k, forward_ports };
            let (g, s, t) = make_caterpillar(&spec).map_err(|e| Failure::Input(e.to_string()))?;
            (g, s, t, out)
        }
        GenCmd::Random { nodes, edges, seed, start, treasure, out } => {
            let g = random_connected_graph(nodes, edges, seed)
                .map_err(|e| Failure::Input(e.to_string()))?;
            if start >= nodes {
                return input(format!("start {start} out of range"));
            }
            let t = treasure.unwrap_or_else(|| g.farthest_from(start));
            if t >= nodes {
                return input(format!("treasure {t} out of range"));
            }
            (g, start, t, out)
        }
        GenCmd::Tree { nodes, seed, start, treasure, out } => {
            if nodes < 2 {
                return input("need at least 2 nodes");
            }
            let g = random_tree(nodes, seed);
            if start >= nodes {
                return input(format!("start {start} out of range"));
            }
            let t = treasure.unwrap_or_else(|| g.farthest_from(start));
            if t >= nodes {
                return input(format!("treasure {t} out of range"));
            }
            (g, start, t, out)
        }
    };
    emit(write_instance(&graph, Some(start), Some(treasure)), out.as_ref())
}

fn path_logsum(g: &PortLabeledGraph, s: usize, t: usize) -> u64 {
    g.shortest_path(s, t)
        .steps
        .iter()
        .map(|&(v, _)| codec::ceil_log2(g.degree(v) as u64) as u64)
        .sum()
}

fn advise(args: AdviseArgs) -> Result<(), Failure> {
    let inst = load_instance(&args.instance)?;
    let (s, t) = endpoints(&inst, &args.instance)?;
    let plan = match (args.ell, args.target_cost) {
        (Some(ell), None) => {
            create_advice(&inst.graph, s, t, ell).map_err(|e| Failure::Input(e.to_string()))?
        }
        (None, Some(c)) => {
            let mode = match args.mode {
                Mode::Certified => SelectionMode::Certified,
                Mode::Empirical => SelectionMode::Empirical,
            };
            select_ell(&inst.graph, s, t, c, mode)
                .map_err(|e| Failure::Input(e.to_string()))?
                .1
        }
        _ => return input("pass exactly one of --ell or --target-cost"),
    };

    let lengths: Vec<String> = plan.substring_lengths().iter().map(|n| n.to_string()).collect();
    println!("D={}", plan.depth());
    println!("e={}", inst.graph.edge_count());
    println!("logsum={}", plan.logsum);
    println!("requested_ell={}", plan.requested_ell);
    println!("ell={}", plan.ell);
    println!("beta={}/{}", plan.beta.numer(), plan.beta.denom());
    println!("advice_bits={}", plan.encoded.len());
    println!("substring_lengths={}", lengths.join(","));
    match &args.out {
        Some(path) => fs::write(path, format!("{}\n", plan.encoded))
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            println!("advice={}", plan.encoded);
            Ok(())
        }
    }
}

fn hunt(args: HuntArgs) -> Result<(), Failure> {
    let inst = load_instance(&args.instance)?;
    let (s, t) = endpoints(&inst, &args.instance)?;
    let text = fs::read_to_string(&args.advice)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.advice.display())))?;
    let advice: BitString = text
        .trim()
        .parse()
        .map_err(|e| Failure::Input(format!("{}: {e}", args.advice.display())))?;
    let payload = codec::decode(&advice)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.advice.display())))?;

    let out = agent::run(&inst.graph, s, |v| v == t, &payload);
    let d = inst.graph.distance(s, t);
    let ell = payload.ell();
    let logsum = payload.logsum();
    let beta = if logsum == 0 { Ratio::new(1, 1) } else { Ratio::new(ell, logsum) };
    let a_max = payload.substrings.iter().map(|a| a.len() as u32).max().unwrap_or(0);

    println!("found={}", out.found);
    println!("cost={}", out.cost);
    println!("D={d}");
    println!("ell={ell}");
    println!("beta={}/{}", beta.numer(), beta.denom());
    let edges = inst.graph.edge_count();
    let bound_for = |kind| -> CostBound {
        if beta.is_one() {
            CostBound::exact(d)
        } else {
            cost_bound(kind, d, edges, ell, logsum, a_max).expect("beta < 1 here")
        }
    };
    let general = bound_for(BoundKind::General);
    println!("bound_general={general}");
    println!("holds_general={}", general.holds(out.cost));
    if inst.graph.is_tree() {
        let tree = bound_for(BoundKind::Tree);
        println!("bound_tree={tree}");
        println!("holds_tree={}", tree.holds(out.cost));
    }

    if let Some(path) = &args.trace {
        let mut text = String::new();
        for mv in &out.trace {
            match mv.kind {
                MoveKind::Forward => {
                    let _ = writeln!(text, "F {}", mv.port);
                }
                MoveKind::Backtrack => {
                    let _ = writeln!(text, "B");
                }
            }
        }
        fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn rendezvous(args: RendezvousArgs) -> Result<(), Failure> {
    let inst = load_instance(&args.graph)?;
    let n = inst.graph.node_count();
    if args.a >= n || args.b >= n || args.a == args.b {
        return input(format!("need two distinct start nodes below {n}"));
    }
    let ell = args.ell.unwrap_or_else(|| path_logsum(&inst.graph, args.a, args.b));
    let out = rendezvous_via_th(&inst.graph, args.a, args.b, ell)
        .map_err(|e| Failure::Input(e.to_string()))?;
    println!("met={}", out.met);
    if let Some(node) = out.meeting_node {
        println!("meeting_node={node}");
    }
    println!("rounds={}", out.rounds);
    println!("total_cost={}", out.total_cost);
    println!("advice_bits_a={}", out.advice_a.len());
    println!("advice_bits_b={}", out.advice_b.len());
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<(), Failure> {
    let inst = load_instance(&args.instance)?;
    let (s, t) = endpoints(&inst, &args.instance)?;
    let ells: Vec<u64> = match &args.ells {
        Some(list) => list
            .split(',')
            .map(|x| x.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|_| Failure::Input(format!("bad budget list {list:?}")))?,
        None => (0..=path_logsum(&inst.graph, s, t)).collect(),
    };
    let rows = sweep(&inst.graph, s, t, &ells, args.jobs.max(1))
        .map_err(|e| Failure::Input(e.to_string()))?;
    emit(sweep_csv(&rows), args.out.as_ref())
}

fn biguint_gcd(mut a: BigUint, mut b: BigUint) -> BigUint {
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn verify(cmd: VerifyCmd) -> Result<(), Failure> {
    match cmd {
        VerifyCmd::Claim1 { d, m } => {
            let count = count_tuples_bruteforce(d, m).map_err(|e| Failure::Input(e.to_string()))?;
            let g = biguint_gcd(count.paper_bound_num.clone(), count.paper_bound_den.clone());
            let num = &count.paper_bound_num / &g;
            let den = &count.paper_bound_den / &g;
            println!("exact={}", count.exact_count);
            if den.is_one() {
                println!("bound={num}");
            } else {
                println!("bound={num}/{den}");
            }
            let holds = count.respects_paper_bound();
            println!("holds={holds}");
            if holds {
                Ok(())
            } else {
                Err(Failure::Check(format!("tuple count {} exceeds the bound", count.exact_count)))
            }
        }
        VerifyCmd::Census { depth, k } => {
            let census = caterpillar_census(depth, k).map_err(|e| Failure::Input(e.to_string()))?;
            let expected = (k as u64).pow(depth as u32);
            println!("census={census}");
            println!("expected={expected}");
            println!("holds={}", census == expected);
            if census == expected {
                Ok(())
            } else {
                Err(Failure::Check(format!("census {census}, expected {expected}")))
            }
        }
        VerifyCmd::Bounds { seeds } => {
            let mut runs = 0u64;
            let mut all_general = true;
            let mut all_tree = true;
            let mut all_at_8 = true;
            for seed in 1..=seeds {
                let n = 6 + (seed as usize * 3) % 20;
                let g = if seed % 2 == 0 {
                    random_tree(n, seed)
                } else {
                    let e = (n - 1) + (seed as usize) % n;
                    random_connected_graph(n, e, seed).expect("feasible edge budget")
                };
                let t = g.farthest_from(0);
                let logsum = path_logsum(&g, 0, t);
                for ell in 0..=logsum {
                    let plan = create_advice(&g, 0, t, ell).expect("ell in range");
                    let out = agent::find_treasure(&g, 0, |v| v == t, &plan.encoded)
                        .expect("oracle advice decodes");
                    let report = bound_report(&g, &plan, &out);
                    runs += 1;
                    all_general &= report.holds_general && out.found;
                    all_tree &= report.holds_tree;
                    all_at_8 &= report.holds_at_8;
                }
            }
            println!("instances={seeds}");
            println!("runs={runs}");
            println!("holds_general={all_general}");
            println!("holds_tree={all_tree}");
            println!("holds_at_8={all_at_8}");
            if all_general && all_tree {
                Ok(())
            } else {
                Err(Failure::Check("a cost bound was violated".into()))
            }
        }
    }
}
