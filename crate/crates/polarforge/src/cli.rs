//! Command-line interface.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use polarforge_core::{DesignParams, Objective};

use crate::document::DesignDocument;
use crate::runner::{design, with_pool, DesignOptions};
use crate::sweep::{self, Format};
use crate::{ChannelSpec, Error};

#[derive(Debug, Parser)]
#[command(name = "polarforge", version, about = "Polar code construction by degrading and upgrading channel approximations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select an information set for a target block error rate.
    Design(DesignArgs),
    /// Print capacity, Bhattacharyya parameter and error probability of a channel.
    ChannelInfo(InfoArgs),
    /// Rate bounds as the alphabet bound grows.
    SweepMu(SweepMuArgs),
    /// Upgrade fidelity for several merge orders at a fixed alphabet bound.
    CompareMergeOrders(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    MinGain,
    PaperLiteral,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::MinGain => Objective::MinGain,
            ObjectiveArg::PaperLiteral => Objective::PaperLiteral,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InfoFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct Common {
    /// `bsc:<p>`, `bec:<e>` or `file:<path>` with one `W(y|0) W(y'|0)` pair per line.
    #[arg(long)]
    pub channel: ChannelSpec,
    /// Number of polarization stages; the block length is 2^m.
    #[arg(long)]
    pub m: u32,
    /// Target block error rate.
    #[arg(long, default_value_t = 1e-3)]
    pub target_bler: f64,
    /// Ratio threshold for the preliminary two-symbol upgrades.
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::MinGain)]
    pub objective: ObjectiveArg,
    /// Compute each stage once for all indices.
    #[arg(long)]
    pub shared_tree: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    fn params(&self, mu: usize, merge_order: usize) -> DesignParams {
        DesignParams {
            m: self.m,
            mu,
            merge_order,
            target_bler: self.target_bler,
            epsilon: self.epsilon,
            objective: self.objective.into(),
        }
    }

    fn options(&self) -> DesignOptions {
        DesignOptions { shared_tree: self.shared_tree, exact: false }
    }
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[command(flatten)]
    pub common: Common,
    /// Output alphabet bound in symbols.
    #[arg(long, default_value_t = 256)]
    pub mu: usize,
    /// Number of consecutive symbols per upgrading merge.
    #[arg(long, default_value_t = 4)]
    pub merge_order: usize,
    /// Also report the rate from exact bit-channels (m <= 3).
    #[arg(long)]
    pub exact: bool,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[arg(long)]
    pub channel: ChannelSpec,
    #[arg(long, value_enum, default_value_t = InfoFormat::Text)]
    pub format: InfoFormat,
}

#[derive(Debug, Args)]
pub struct SweepMuArgs {
    #[command(flatten)]
    pub common: Common,
    /// Comma-separated alphabet bounds.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub mu_values: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    pub merge_order: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 256)]
    pub mu: usize,
    /// Comma-separated merge orders.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [3, 4, 5, 6])]
    pub orders: Vec<usize>,
    /// Merge order of the construction whose last-stage channels feed the
    /// fixed-window comparison.
    #[arg(long, default_value_t = 4)]
    pub merge_order: usize,
    /// Compare single window merges at common positions instead of full designs.
    #[arg(long)]
    pub fixed_window: bool,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

fn format(f: FormatArg) -> Format {
    match f {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_owned(), source }
}

fn with_output<T>(
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> Result<T, Error>,
) -> Result<T, Error> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(io_err(path))?;
            let mut w = BufWriter::new(file);
            let r = f(&mut w)?;
            w.flush().map_err(io_err(path))?;
            Ok(r)
        }
        None => f(stdout),
    }
}

/// Executes a parsed command, writing reports to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), Error> {
    let stdout_err = |source| Error::Io { path: "<stdout>".into(), source };
    match cli.command {
        Command::ChannelInfo(a) => {
            let w = a.channel.load()?;
            let f = w.functionals();
            match a.format {
                InfoFormat::Text => writeln!(
                    stdout,
                    "channel = {}\npairs = {}\nI = {}\nZ = {}\nP_e = {}",
                    a.channel,
                    w.pair_count(),
                    f.capacity,
                    f.bhattacharyya,
                    f.error_prob
                )
                .map_err(stdout_err)?,
                InfoFormat::Json => {
                    let v = serde_json::json!({
                        "channel": a.channel.to_string(),
                        "pairs": w.pair_count(),
                        "capacity": f.capacity,
                        "bhattacharyya": f.bhattacharyya,
                        "error_prob": f.error_prob,
                    });
                    writeln!(stdout, "{}", serde_json::to_string_pretty(&v)?).map_err(stdout_err)?;
                }
            }
        }
        Command::Design(a) => {
            let w = a.common.channel.load()?;
            let params = a.common.params(a.mu, a.merge_order);
            let opts = DesignOptions { exact: a.exact, ..a.common.options() };
            let d = with_pool(|| design(&w, &params, opts))??;
            let doc = DesignDocument::new(a.common.channel.to_string(), &d);
            if let Some(path) = &a.common.out {
                doc.write(path)?;
            }
            let set: Vec<String> = d.info_set.iter().map(usize::to_string).collect();
            writeln!(stdout, "info_set = [{}]", set.join(", ")).map_err(stdout_err)?;
            writeln!(stdout, "rate_degraded = {}", d.rate_degraded).map_err(stdout_err)?;
            writeln!(stdout, "rate_upgraded = {}", d.rate_upgraded).map_err(stdout_err)?;
            if let Some(r) = d.rate_exact {
                writeln!(stdout, "rate_exact = {r}").map_err(stdout_err)?;
            }
            writeln!(stdout, "gap = {}", d.rate_upgraded - d.rate_degraded).map_err(stdout_err)?;
        }
        Command::SweepMu(a) => {
            let w = a.common.channel.load()?;
            let params = a.common.params(2, a.merge_order);
            let rows = with_pool(|| sweep::sweep_mu(&w, &params, &a.mu_values, a.common.options()))??;
            with_output(&a.common.out, stdout, |out| sweep::write_rows(&rows, format(a.format), out))?;
        }
        Command::CompareMergeOrders(a) => {
            let w = a.common.channel.load()?;
            let fmt = format(a.format);
            if a.fixed_window {
                let params = a.common.params(a.mu, a.merge_order);
                let rows = with_pool(|| {
                    let channels = sweep::last_stage_inputs(&w, &params)?;
                    sweep::fixed_window_orders(&channels, &a.orders)
                })??;
                with_output(&a.common.out, stdout, |out| sweep::write_rows(&rows, fmt, out))?;
            } else {
                let params = a.common.params(a.mu, a.merge_order);
                let rows = with_pool(|| sweep::compare_merge_orders(&w, &params, &a.orders, a.common.options()))??;
                with_output(&a.common.out, stdout, |out| sweep::write_rows(&rows, fmt, out))?;
            }
        }
    }
    Ok(())
}
