use std::io::Write;

use clap::Args;
use serde::{Deserialize, Serialize};

use netpool::analytics::{optimal_group_size, ClosedForm};

use crate::args::{GroupRange, ModelArgs, StrategyList};
use crate::output::{self, num};
use crate::{CliResult, Command, OutputArgs, EXIT_OK};

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct OptimizeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Group sizes to search, inclusive
    #[arg(long, value_name = "A..B", default_value = "2..50")]
    pub range: GroupRange,
    /// Closed forms to minimize [default: every one the parameters allow]
    #[arg(long = "strategy", value_name = "LIST")]
    pub strategies: Option<StrategyList<ClosedForm>>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

pub const HEADER: [&str; 4] = ["strategy", "n", "expected_tests", "exact"];

pub fn run(args: OptimizeArgs, stdout: &mut dyn Write, _stderr: &mut dyn Write) -> CliResult<u8> {
    output::no_plot(&args.output)?;
    let model = args.model.resolve()?;
    let forms = model.forms(args.strategies.as_ref())?;

    let mut rows = Vec::new();
    for &form in &forms {
        let best = optimal_group_size(model.population, args.range.range(), |n| {
            Ok(model.evaluate(form, n)?.expect("forms() checked the network"))
        })?;
        rows.push(vec![
            form.to_string(),
            best.group_size.to_string(),
            num(best.expected_tests),
            best.exact.to_string(),
        ]);
    }

    let out = args.output.out.clone();
    let document = output::csv_document(&Command::Optimize(args), &HEADER, &rows)?;
    output::emit(out.as_deref(), &document, stdout)?;
    Ok(EXIT_OK)
}
