use std::io::Write;

use clap::Args;
use serde::{Deserialize, Serialize};

use netpool::analytics::{boundary_sweeps, random_sweeps, verify_theorem1, PointStatus, Theorem1Report};

use crate::output::{self, num};
use crate::{resolve_seed, CliResult, Command, Failure, OutputArgs, EXIT_OK, EXIT_VIOLATION};

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    /// Random parameter tuples, each swept over q
    #[arg(long, default_value_t = 20)]
    pub sweeps: usize,
    /// Evenly spaced q values per sweep, from 0 to p
    #[arg(long, default_value_t = 50)]
    pub q_points: usize,
    /// Extra two-point sweeps q in {0, p} with n >= m
    #[arg(long, default_value_t = 0)]
    pub boundary: usize,
    /// Seed for drawing the grid
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

pub const HEADER: [&str; 13] = [
    "sweep", "index", "N", "n", "m", "p", "q", "v", "alpha", "T_LB", "E_TNG", "E_TD", "status",
];

/// Random sweeps followed by boundary sweeps, as `verify` evaluates them.
pub fn report(sweeps: usize, q_points: usize, boundary: usize, seed: u64) -> Theorem1Report {
    let mut grid = random_sweeps(sweeps, q_points, seed);
    grid.extend(boundary_sweeps(boundary, seed));
    verify_theorem1(&grid)
}

pub fn run(mut args: VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<u8> {
    output::no_plot(&args.output)?;
    if args.sweeps + args.boundary == 0 {
        return Err(Failure::parameter("nothing to verify: --sweeps and --boundary are both 0"));
    }
    let seed = resolve_seed(&mut args.seed, stderr);
    let report = report(args.sweeps, args.q_points, args.boundary, seed);

    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            let p = &r.params;
            vec![
                r.sweep.to_string(),
                r.index.to_string(),
                p.population.to_string(),
                p.group_size.to_string(),
                p.community_size.to_string(),
                num(p.p_within),
                num(p.q_between),
                num(p.prevalence),
                num(p.transmission),
                num(r.lower_bound),
                num(r.network),
                num(r.dorfman),
                r.status.name().to_string(),
            ]
        })
        .collect();
    let out = args.output.out.clone();
    let document = output::csv_document(&Command::Verify(args), &HEADER, &rows)?;
    output::emit(out.as_deref(), &document, stdout)?;

    let _ = writeln!(
        stderr,
        "points: {}, violations: {}, eq-dorfman: {}, eq-lower-bound: {}",
        report.rows.len(),
        report.violations.len(),
        report.count(PointStatus::EqualsDorfman),
        report.count(PointStatus::EqualsLowerBound),
    );
    for violation in &report.violations {
        let _ = writeln!(stderr, "violation: {violation:?}");
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_VIOLATION })
}
