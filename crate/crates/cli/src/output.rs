//! CSV rendering, the `#` config echo, and gnuplot companions.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::{CliResult, Command, Failure, OutputArgs};

const BANNER: &str = concat!("netpool ", env!("CARGO_PKG_VERSION"));

/// Shortest decimal that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// `#`-prefixed TOML for `command`, preceded by a banner line.
pub fn echo(command: &Command) -> CliResult<String> {
    let body = toml::to_string(command)
        .map_err(|e| Failure::parameter(format!("cannot serialize configuration: {e}")))?;
    let mut out = format!("# {BANNER}\n");
    for line in body.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    Ok(out)
}

/// Inverse of [`echo`]: reads the leading `#` block of a netpool output file.
pub fn parse_echo(text: &str) -> CliResult<Command> {
    let mut body = String::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        let line = line.strip_prefix('#').unwrap_or(line);
        let line = line.strip_prefix(' ').unwrap_or(line);
        if line.starts_with("netpool ") {
            continue;
        }
        body.push_str(line);
        body.push('\n');
    }
    if body.trim().is_empty() {
        return Err(Failure::input("no configuration echo found"));
    }
    toml::from_str(&body).map_err(|e| Failure::input(format!("bad configuration echo: {e}")))
}

/// Config echo, then header and rows as CSV.
pub fn csv_document(command: &Command, header: &[&str], rows: &[Vec<String>]) -> CliResult<Vec<u8>> {
    let mut buffer = echo(command)?.into_bytes();
    {
        let mut writer = csv::Writer::from_writer(&mut buffer);
        let csv_err = |e: csv::Error| Failure::input(e.to_string());
        writer.write_record(header).map_err(csv_err)?;
        for row in rows {
            writer.write_record(row).map_err(csv_err)?;
        }
        writer.flush().map_err(|e| Failure::input(e.to_string()))?;
    }
    Ok(buffer)
}

/// Writes `bytes` to `path`, or to `stdout` when there is no path.
pub fn emit(path: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => stdout
            .write_all(bytes)
            .map_err(|e| Failure::input(format!("stdout: {e}"))),
    }
}

/// What the gnuplot script should draw from a tidy CSV.
pub struct PlotSpec<'a> {
    pub title: &'a str,
    pub series: &'a [&'a str],
    /// 1-based columns: x, y and an optional y error.
    pub x: usize,
    pub y: usize,
    pub y_error: Option<usize>,
    pub x_label: &'a str,
    pub y_label: &'a str,
}

/// A script plotting one line per value of the first CSV column.
pub fn gnuplot_script(data: &str, spec: &PlotSpec<'_>) -> String {
    let series = spec.series.join(" ");
    let (using, style) = match spec.y_error {
        Some(e) => (
            format!("{}:(strcol(1) eq s ? ${} : NaN):{}", spec.x, spec.y, e),
            "yerrorlines",
        ),
        None => (format!("{}:(strcol(1) eq s ? ${} : NaN)", spec.x, spec.y), "linespoints"),
    };
    format!(
        "set datafile separator ','\n\
         set title '{title}'\n\
         set xlabel '{x_label}'\n\
         set ylabel '{y_label}'\n\
         set key top left\n\
         plot for [s in \"{series}\"] '{data}' using {using} with {style} title s\n",
        title = spec.title,
        x_label = spec.x_label,
        y_label = spec.y_label,
    )
}

/// Writes the gnuplot companion if one was requested.
pub fn emit_gnuplot(output: &OutputArgs, spec: &PlotSpec<'_>) -> CliResult<()> {
    let Some(script) = &output.gnuplot else {
        return Ok(());
    };
    let data = output
        .out
        .as_ref()
        .map_or_else(|| "netpool.csv".to_string(), |p| p.display().to_string());
    fs::write(script, gnuplot_script(&data, spec))
        .map_err(|e| Failure::input(format!("{}: {e}", script.display())))
}

/// Rejects `--gnuplot` on commands without a plot.
pub fn no_plot(output: &OutputArgs) -> CliResult<()> {
    match output.gnuplot {
        Some(_) => Err(Failure::parameter("--gnuplot is only available for analytic and simulate")),
        None => Ok(()),
    }
}
