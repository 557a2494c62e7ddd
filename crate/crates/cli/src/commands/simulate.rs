use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use serde::{Deserialize, Serialize};

use netpool::epidemic::{monte_carlo, ContactModel, SbmEnsemble, SimStats, SimStrategy};
use netpool::model::calibrate_alpha;
use netpool::netgen::{louvain, Network, Partition, SbmSpec};

use super::{load_network, load_partition};
use crate::args::{SizeList, StrategyList};
use crate::output::{self, num, PlotSpec};
use crate::{resolve_seed, CliResult, Command, Failure, OutputArgs, EXIT_OK};

/// `N,m,p,q` for a stochastic block model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SbmArg {
    pub population: usize,
    pub community_size: usize,
    pub p_within: f64,
    pub q_between: f64,
}

impl FromStr for SbmArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [n, m, p, q] = parts[..] else {
            return Err(format!("expected N,m,p,q, got '{s}'"));
        };
        let bad = |what: &str, v: &str| format!("{what} = '{v}' is not a number");
        Ok(Self {
            population: n.parse().map_err(|_| bad("N", n))?,
            community_size: m.parse().map_err(|_| bad("m", m))?,
            p_within: p.parse().map_err(|_| bad("p", p))?,
            q_between: q.parse().map_err(|_| bad("q", q))?,
        })
    }
}

impl TryFrom<String> for SbmArg {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<SbmArg> for String {
    fn from(a: SbmArg) -> Self {
        a.to_string()
    }
}

impl fmt::Display for SbmArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            self.population,
            self.community_size,
            num(self.p_within),
            num(self.q_between)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SimulateArgs {
    /// Edge list to simulate on
    #[arg(long, value_name = "PATH", conflicts_with = "sbm", required_unless_present = "sbm")]
    pub edge_list: Option<PathBuf>,
    /// Stochastic block model to simulate on
    #[arg(long, value_name = "N,m,p,q")]
    pub sbm: Option<SbmArg>,
    /// Seed for drawing the SBM [default: --seed]
    #[arg(long, requires = "sbm")]
    pub network_seed: Option<u64>,
    /// Redraw the seed's contacts every replicate instead of fixing one SBM graph
    #[arg(long, requires = "sbm", conflicts_with_all = ["partition", "louvain"])]
    #[serde(default)]
    pub ensemble: bool,
    /// node,community CSV for network grouping
    #[arg(long, value_name = "PATH", conflicts_with = "louvain")]
    pub partition: Option<PathBuf>,
    /// Detect communities with Louvain (seeded by --seed)
    #[arg(long)]
    #[serde(default)]
    pub louvain: bool,
    /// Transmission probability
    #[arg(long = "alpha", value_name = "ALPHA", required_unless_present = "prevalence")]
    pub transmission: Option<f64>,
    /// Calibrate alpha to this prevalence
    #[arg(long = "v", value_name = "V", conflicts_with = "transmission")]
    pub prevalence: Option<f64>,
    /// Pooling strategies
    #[arg(long = "strategy", value_name = "LIST", default_value = "dorfman,network,perfect")]
    pub strategies: StrategyList<SimStrategy>,
    /// Group sizes, e.g. 10, 2..40 or 5,10,20
    #[arg(long = "n", value_name = "SIZES")]
    pub group_sizes: SizeList,
    /// Replicates per strategy and group size
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// Master seed; replicate r uses stream r of it
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write one row per replicate here
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub replicates: Option<PathBuf>,
    /// Worker threads [default: all cores]; results do not depend on it
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

pub const SUMMARY_HEADER: [&str; 5] = ["strategy", "n", "mean", "std_error", "reps"];
pub const REPLICATE_HEADER: [&str; 7] = [
    "replicate",
    "seed_node",
    "infected",
    "positive_groups",
    "tests",
    "strategy",
    "n",
];

enum Contacts {
    Fixed(Network),
    Ensemble(SbmEnsemble),
}

impl Contacts {
    fn model(&self) -> &dyn ContactModel {
        match self {
            Contacts::Fixed(network) => network,
            Contacts::Ensemble(ensemble) => ensemble,
        }
    }

    fn labels(&self) -> Vec<String> {
        match self {
            Contacts::Fixed(network) => (0..network.node_count()).map(|i| network.label(i)).collect(),
            Contacts::Ensemble(e) => (0..e.node_count()).map(|i| i.to_string()).collect(),
        }
    }
}

/// Every `(strategy, n)` run in flag order.
pub struct Simulation {
    pub runs: Vec<SimStats>,
    /// Node identifiers as written in the input, by node index.
    pub labels: Vec<String>,
}

pub fn simulate(args: &SimulateArgs, seed: u64, stderr: &mut dyn Write) -> CliResult<Simulation> {
    let (contacts, partition, sbm) = build(args, seed, stderr)?;
    let alpha = match (args.transmission, args.prevalence) {
        (Some(alpha), None) => alpha,
        (None, Some(v)) => {
            let alpha = calibrate(&contacts, sbm, v)?;
            let _ = writeln!(stderr, "notice: alpha = {} calibrated from v = {}", num(alpha), num(v));
            alpha
        }
        _ => return Err(Failure::parameter("give exactly one of --alpha and --v")),
    };

    let mut runs = Vec::new();
    for &strategy in &args.strategies.items {
        for &n in args.group_sizes.sizes() {
            runs.push(monte_carlo(contacts.model(), &partition, alpha, n, strategy, args.reps, seed)?);
        }
    }
    Ok(Simulation {
        runs,
        labels: contacts.labels(),
    })
}

fn build(args: &SimulateArgs, seed: u64, stderr: &mut dyn Write) -> CliResult<(Contacts, Partition, Option<SbmSpec>)> {
    if let Some(path) = &args.edge_list {
        let network = load_network(path, stderr)?;
        let partition = match &args.partition {
            Some(path) => load_partition(&network, path)?,
            None if args.louvain => louvain(&network, seed, 1.0),
            None => return Err(Failure::parameter("an edge list needs --partition or --louvain")),
        };
        return Ok((Contacts::Fixed(network), partition, None));
    }
    let Some(sbm) = args.sbm else {
        return Err(Failure::parameter("give --edge-list or --sbm"));
    };
    let spec = SbmSpec::new(sbm.population, sbm.community_size, sbm.p_within, sbm.q_between)?;
    if args.ensemble {
        return Ok((Contacts::Ensemble(SbmEnsemble { spec }), spec.planted_partition(), Some(spec)));
    }
    let sample = spec.generate(args.network_seed.unwrap_or(seed));
    let partition = match &args.partition {
        Some(path) => load_partition(&sample.network, path)?,
        None if args.louvain => louvain(&sample.network, seed, 1.0),
        None => sample.partition,
    };
    Ok((Contacts::Fixed(sample.network), partition, Some(spec)))
}

/// `alpha` making the expected infected count `1 + (N-1)v`.
///
/// On a fixed graph the seed's expected degree is the mean degree; on the
/// ensemble it is `(m-1)p + (N-m)q`.
fn calibrate(contacts: &Contacts, sbm: Option<SbmSpec>, v: f64) -> CliResult<f64> {
    match contacts {
        Contacts::Ensemble(_) => {
            let spec = sbm.expect("ensemble comes from an SBM");
            Ok(calibrate_alpha(spec.population, spec.community_size, spec.p_within, spec.q_between, v)?)
        }
        Contacts::Fixed(network) => {
            if !(0.0..=1.0).contains(&v) {
                return Err(Failure::parameter(format!("v = {v} is not in [0, 1]")));
            }
            let population = network.node_count() as f64;
            let mean_degree = 2.0 * network.edge_count() as f64 / population;
            let alpha = (population - 1.0) * v / mean_degree;
            if alpha > 1.0 {
                return Err(netpool::Error::AlphaOutOfRange(alpha).into());
            }
            Ok(alpha)
        }
    }
}

pub fn run(mut args: SimulateArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<u8> {
    let seed = resolve_seed(&mut args.seed, stderr);
    // Notices are buffered so the run can move to another thread pool.
    let mut notices = Vec::new();
    let result = match args.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Failure::parameter(format!("--threads: {e}")))?
            .install(|| simulate(&args, seed, &mut notices)),
        None => simulate(&args, seed, &mut notices),
    };
    let _ = stderr.write_all(&notices);
    let Simulation { runs, labels } = result?;

    let summary: Vec<Vec<String>> = runs
        .iter()
        .map(|s| {
            vec![
                s.strategy.to_string(),
                s.group_size.to_string(),
                num(s.mean),
                num(s.std_error),
                s.replicates().to_string(),
            ]
        })
        .collect();

    let names: Vec<&str> = args.strategies.items.iter().map(|s| s.name()).collect();
    output::emit_gnuplot(
        &args.output,
        &PlotSpec {
            title: "mean tests per screen",
            series: &names,
            x: 2,
            y: 3,
            y_error: Some(4),
            x_label: "group size n",
            y_label: "tests",
        },
    )?;

    let out = args.output.out.clone();
    let replicates_path = args.replicates.clone();
    let command = Command::Simulate(args);
    if let Some(path) = replicates_path {
        let rows: Vec<Vec<String>> = runs
            .iter()
            .flat_map(|s| {
                s.records.iter().map(|r| {
                    vec![
                        r.replicate.to_string(),
                        labels[r.seed_node].clone(),
                        r.infected.to_string(),
                        r.positive_groups.to_string(),
                        r.tests.to_string(),
                        s.strategy.to_string(),
                        s.group_size.to_string(),
                    ]
                })
            })
            .collect();
        let document = output::csv_document(&command, &REPLICATE_HEADER, &rows)?;
        output::emit(Some(&path), &document, stdout)?;
    }
    let document = output::csv_document(&command, &SUMMARY_HEADER, &summary)?;
    output::emit(out.as_deref(), &document, stdout)?;
    Ok(EXIT_OK)
}
