use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use zerosum_core::campaign::{
    run_campaign, CampaignConfig, OutputFormat, WeightFamily, EXIT_FALSIFIED, EXIT_INCONCLUSIVE, EXIT_OK,
};
use zerosum_core::lemma::suites::{dgm_exhaustive, dgm_random, shift_random, small_groups, yz_exhaustive, SuiteReport};
use zerosum_core::lemma::{dgm_bound_check, setseq_sum, SetSequence};
use zerosum_core::{
    classical_constants, egz_constant, max_zero_sum_free_length, ConstantResult, ElementSet, Error, GroupSpec,
    SearchBudget, WeightSet,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const EXIT_USAGE: u8 = 1;

/// Weighted Davenport and Erdős–Ginzburg–Ziv constants of finite abelian groups.
#[derive(Parser)]
#[command(name = "zerosum", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weighted Davenport constant D_A(G).
    Dav(ConstantArgs),
    /// Weighted EGZ constant E_A(G), searched directly.
    Egz(ConstantArgs),
    /// Classical D(G) and E(G).
    Constants(ClassicalArgs),
    /// Checks E_A(n) = D_A(n) + n - 1 over a grid of cyclic groups and weight sets.
    Verify(VerifyArgs),
    /// Randomized and exhaustive suites for the supporting lemmas.
    Lemma(LemmaArgs),
    /// Σ_l of a sequence of sets, its stabilizer, and the sumset lower bound.
    Sumset(SumsetArgs),
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Cyclic group Z/n.
    #[arg(long, conflicts_with = "group")]
    n: Option<u32>,
    /// Group as a factor list, e.g. `2x4`.
    #[arg(long)]
    group: Option<GroupSpec>,
}

impl GroupArgs {
    fn resolve(&self) -> Result<GroupSpec, Error> {
        match (&self.group, self.n) {
            (Some(g), _) => Ok(g.clone()),
            (None, Some(0)) => Err(Error::InvalidGroup("order must be positive".into())),
            (None, Some(n)) => Ok(GroupSpec::cyclic(n)),
            (None, None) => Err(Error::InvalidGroup("pass --n or --group".into())),
        }
    }
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Node cap for each search.
    #[arg(long, default_value_t = SearchBudget::DEFAULT_MAX_NODES)]
    budget_nodes: u64,
    /// Longest sequence a search may build (default 4|G| + 16).
    #[arg(long)]
    budget_len: Option<usize>,
    /// Explore every root entry instead of unit-orbit representatives.
    #[arg(long)]
    no_unit_pruning: bool,
}

impl BudgetArgs {
    fn budget(&self, group: &GroupSpec) -> SearchBudget {
        let b =
            SearchBudget::for_group(group).with_max_nodes(self.budget_nodes).with_unit_pruning(!self.no_unit_pruning);
        match self.budget_len {
            Some(len) => b.with_max_length(len),
            None => b,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct ConstantArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Weights, e.g. `1,-1`. Reduced modulo the exponent.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    weights: String,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args)]
struct ClassicalArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args)]
struct VerifyArgs {
    /// Single order; shorthand for `--n-min N --n-max N`.
    #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
    n: Option<u32>,
    #[arg(long, default_value_t = 2)]
    n_min: u32,
    #[arg(long, default_value_t = 8)]
    n_max: u32,
    /// singleton, pm1, units, all-subsets, random:K:COUNT, or an explicit list like `1,3`.
    #[arg(long = "family", default_value = "singleton", allow_hyphen_values = true)]
    families: Vec<WeightFamily>,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Extra length allowed to the E_A search beyond D_A + n.
    #[arg(long, default_value_t = 2)]
    ceiling_slack: usize,
    /// all-subsets is skipped above this order.
    #[arg(long, default_value_t = 8)]
    all_subsets_max_n: u32,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Write the table here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fill the elapsed_ms column (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct LemmaArgs {
    #[command(subcommand)]
    suite: LemmaSuite,
}

#[derive(Subcommand)]
enum LemmaSuite {
    /// Sumset lower bound on random set sequences, optionally also the exhaustive grid.
    Dgm {
        #[arg(long, default_value_t = 24)]
        order_max: usize,
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest number of sets m.
        #[arg(long, default_value_t = 8)]
        sets: usize,
        /// Also every multiset of at most `--exhaustive-sets` subsets of each
        /// group of order at most `--exhaustive-order`.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 8)]
        exhaustive_order: usize,
        #[arg(long, default_value_t = 4)]
        exhaustive_sets: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Subsequence theorem on every qualifying sequence of Z/n, n <= n-max.
    Yz {
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Translation identity Σ_l(A - c) = Σ_l(A) - l c on random instances.
    Shift {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        sets: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SumsetArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Sets separated by `;`, elements by `,`, e.g. `0,1;2;1,3`.
    #[arg(long, allow_hyphen_values = true)]
    sets: String,
    /// Number of summands (default: all sets).
    #[arg(long)]
    l: Option<usize>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Error::Inconclusive { kind, reason, lower_bound, nodes }) => {
            eprintln!("inconclusive: {kind} >= {lower_bound} ({reason} after {nodes} nodes)");
            ExitCode::from(EXIT_INCONCLUSIVE as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(command: Command) -> Result<i32, Error> {
    match command {
        Command::Dav(args) => {
            let g = args.group.resolve()?;
            let a = WeightSet::parse(&args.weights, &g)?;
            let r = max_zero_sum_free_length(&g, &a, &args.budget.budget(&g))?;
            print_constant(&r, args.format)?;
            Ok(EXIT_OK)
        }
        Command::Egz(args) => {
            let g = args.group.resolve()?;
            let a = WeightSet::parse(&args.weights, &g)?;
            let r = egz_constant(&g, &a, g.order(), &args.budget.budget(&g))?;
            print_constant(&r, args.format)?;
            Ok(EXIT_OK)
        }
        Command::Constants(args) => {
            let g = args.group.resolve()?;
            let (d, e) = classical_constants(&g, &args.budget.budget(&g))?;
            match args.format {
                ReportFormat::Text => {
                    println!("group: {g}");
                    println!("D = {}  witness: ({})", d.value, d.witness);
                    println!("E = {}  witness: ({})", e.value, e.witness);
                    println!("E - D = {}", e.value as i64 - d.value as i64);
                }
                ReportFormat::Json => println!("{}", to_json(&json!({ "d": d, "e": e }))?),
            }
            Ok(EXIT_OK)
        }
        Command::Verify(args) => verify(args),
        Command::Lemma(args) => lemma(args.suite),
        Command::Sumset(args) => {
            let g = args.group.resolve()?;
            let sets = SetSequence::parse(&args.sets, &g)?;
            let l = args.l.unwrap_or(sets.len());
            let sum = setseq_sum(l, &sets, &g);
            let report = dgm_bound_check(l, &sets, &g);
            let show = |s: &ElementSet| s.elements(&g).iter().map(|e| e.to_string()).collect::<Vec<_>>();
            match args.format {
                ReportFormat::Text => {
                    println!("sumset: {{{}}}", show(&sum).join(", "));
                    println!("size: {}", report.sumset_size);
                    println!("stabilizer: {{{}}}", show(&report.stabilizer).join(", "));
                    println!("bound: {}", report.bound);
                    println!("holds: {}", report.holds);
                }
                ReportFormat::Json => println!(
                    "{}",
                    to_json(&json!({
                        "group": g,
                        "l": l,
                        "sumset": show(&sum),
                        "stabilizer": show(&report.stabilizer),
                        "bound": report.bound,
                        "holds": report.holds,
                    }))?
                ),
            }
            Ok(if report.holds { EXIT_OK } else { EXIT_FALSIFIED })
        }
    }
}

fn print_constant(r: &ConstantResult, format: ReportFormat) -> Result<(), Error> {
    match format {
        ReportFormat::Text => {
            println!("{} = {}", r.kind, r.value);
            println!("group: {}", r.group);
            if let Some(a) = &r.weights {
                println!("weights: {a}");
            }
            println!("witness: ({})", r.witness);
            println!("nodes: {}", r.nodes_explored);
            println!("elapsed_ms: {}", r.elapsed.as_millis());
        }
        ReportFormat::Json => println!("{}", to_json(r)?),
    }
    Ok(())
}

fn to_json<T: serde::Serialize + ?Sized>(v: &T) -> Result<String, Error> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Serialize(e.to_string()))
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<i32, Error> {
    let (n_min, n_max) = args.n.map_or((args.n_min, args.n_max), |n| (n, n));
    let config = CampaignConfig {
        n_min,
        n_max,
        families: args.families,
        max_nodes: args.budget.budget_nodes,
        max_length: args.budget.budget_len,
        allow_unit_pruning: !args.budget.no_unit_pruning,
        ceiling_slack: args.ceiling_slack,
        all_subsets_max_n: args.all_subsets_max_n,
        jobs: args.jobs,
        seed: args.seed,
        record_timing: args.timing,
    };
    let campaign = run_campaign(&config)?;
    emit(&campaign.render(args.format)?, args.out.as_ref())?;
    for r in campaign.mismatches() {
        eprintln!(
            "MISMATCH n={} A={{{}}}: D_A={:?} E_A={:?} predicted={:?}",
            r.n, r.weights, r.d_a, r.e_a, r.predicted
        );
        eprintln!("  witness_d: ({})", r.witness_d);
        eprintln!("  witness_e: ({})", r.witness_e);
    }
    for r in campaign.inconclusive() {
        eprintln!("inconclusive n={} A={{{}}}", r.n, r.weights);
    }
    eprintln!("{}", campaign.summary());
    Ok(campaign.exit_code())
}

fn finish_suite(report: &SuiteReport, out: Option<&PathBuf>) -> Result<i32, Error> {
    let mut text = to_json(report)?;
    text.push('\n');
    emit(&text, out)?;
    let seed = report.seed.map(|s| format!(", seed {s}")).unwrap_or_default();
    eprintln!("{}: {}/{} hold ({} vacuous){seed}", report.suite, report.passed, report.instances, report.vacuous);
    if report.all_passed() {
        Ok(EXIT_OK)
    } else {
        for f in &report.failures {
            eprintln!("FAILED: {f}");
        }
        Ok(EXIT_FALSIFIED)
    }
}

fn lemma(suite: LemmaSuite) -> Result<i32, Error> {
    match suite {
        LemmaSuite::Dgm { order_max, instances, seed, sets, exhaustive, exhaustive_order, exhaustive_sets, out } => {
            if sets == 0 {
                return Err(Error::Precondition("--sets must be at least 1".into()));
            }
            if exhaustive && exhaustive_order > 8 {
                return Err(Error::Precondition("--exhaustive-order is limited to 8".into()));
            }
            let mut report = dgm_random(&mut ChaCha8Rng::seed_from_u64(seed), seed, instances, order_max, sets);
            if exhaustive {
                for g in small_groups(exhaustive_order) {
                    report.merge(dgm_exhaustive(&g, exhaustive_sets, g.order()));
                }
            }
            finish_suite(&report, out.as_ref())
        }
        LemmaSuite::Yz { n_max, out } => finish_suite(&yz_exhaustive(n_max)?, out.as_ref()),
        LemmaSuite::Shift { group, instances, seed, sets, out } => {
            let g = group.resolve()?;
            if sets == 0 {
                return Err(Error::Precondition("--sets must be at least 1".into()));
            }
            finish_suite(&shift_random(&mut ChaCha8Rng::seed_from_u64(seed), seed, &g, instances, sets), out.as_ref())
        }
    }
}
