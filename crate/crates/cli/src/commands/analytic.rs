use std::io::Write;

use clap::Args;
use serde::{Deserialize, Serialize};

use netpool::analytics::{lower_bound_ceiling, ClosedForm};

use crate::args::{ModelArgs, SizeList, StrategyList};
use crate::output::{self, num, PlotSpec};
use crate::{CliResult, Command, OutputArgs, EXIT_OK};

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct AnalyticArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    /// Group sizes, e.g. 10, 2..40 or 5,10,20
    #[arg(long = "n", value_name = "SIZES")]
    pub group_sizes: SizeList,
    /// Closed forms to evaluate [default: every one the parameters allow]
    #[arg(long = "strategy", value_name = "LIST")]
    pub strategies: Option<StrategyList<ClosedForm>>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

pub const HEADER: [&str; 5] = ["strategy", "n", "value", "exact", "display"];

pub fn run(args: AnalyticArgs, stdout: &mut dyn Write, _stderr: &mut dyn Write) -> CliResult<u8> {
    let model = args.model.resolve()?;
    let forms = model.forms(args.strategies.as_ref())?;

    let mut rows = Vec::new();
    for &form in &forms {
        for &n in args.group_sizes.sizes() {
            let estimate = model.evaluate(form, n)?.expect("forms() checked the network");
            let display = match form {
                ClosedForm::LowerBound => format!("{} (ceil)", lower_bound_ceiling(&model.pooling(n)?)?),
                _ => format!("{:.2}", estimate.value),
            };
            rows.push(vec![
                form.to_string(),
                n.to_string(),
                num(estimate.value),
                estimate.exact.to_string(),
                display,
            ]);
        }
    }

    let names: Vec<&str> = forms.iter().map(|f| f.name()).collect();
    output::emit_gnuplot(
        &args.output,
        &PlotSpec {
            title: "expected tests",
            series: &names,
            x: 2,
            y: 3,
            y_error: None,
            x_label: "group size n",
            y_label: "tests",
        },
    )?;
    let out = args.output.out.clone();
    let document = output::csv_document(&Command::Analytic(args), &HEADER, &rows)?;
    output::emit(out.as_deref(), &document, stdout)?;
    Ok(EXIT_OK)
}
