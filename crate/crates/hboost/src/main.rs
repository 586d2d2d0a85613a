use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hboost::grid::{self, GridSpec, GroupBy};
use hboost::io;
use hboost_core::{
    agglomerate, cophenetic, cpcc, hboost, pairwise_euclidean, standardize, CombineOperator,
    LinkageMethod,
};

#[derive(Parser)]
#[command(
    name = "hboost",
    version,
    about = "Boosted ensembles of hierarchical clusterings"
)]
struct Cli {
    /// Random seed; overrides the config file where one applies.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArgs {
    /// Delimited numeric dataset (comma or whitespace separated).
    #[arg(long)]
    data: PathBuf,
    /// Skip the first non-blank line.
    #[arg(long)]
    header: bool,
    /// Zero-based column holding class labels, excluded from the features.
    #[arg(long)]
    label_column: Option<usize>,
    /// Use raw features instead of z-scores.
    #[arg(long)]
    no_standardize: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Plain agglomerative clustering of the whole dataset.
    Cluster {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        method: LinkageMethod,
        /// Write the dendrogram dump here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the boosting loop with a key = value config file.
    Boost {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Also write a per-iteration trace (trace.jsonl).
        #[arg(long)]
        trace: bool,
        /// Directory receiving hstar.txt, consensus.bin and trace.jsonl.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Sweep clusterer × combiner × recovery × seed and store the results.
    Grid {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_delimiter = ',')]
        clusterers: Option<Vec<LinkageMethod>>,
        #[arg(long, value_delimiter = ',')]
        combiners: Option<Vec<CombineOperator>>,
        #[arg(long, value_delimiter = ',')]
        recoveries: Option<Vec<LinkageMethod>>,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
        #[arg(long, default_value_t = 0.2)]
        fraction: f64,
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value = "results.jsonl")]
        out: PathBuf,
    },
    /// Rank stored grid results by mean CPCC.
    Report {
        #[arg(long)]
        results: PathBuf,
        #[arg(long, default_value = "none")]
        group_by: GroupBy,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Cluster { data, method, out } => {
            let d = io::load_dataset(&data.data, data.header, data.label_column)?;
            let d = if data.no_standardize {
                d
            } else {
                standardize(&d)
            };
            let euclid = pairwise_euclidean(&d);
            let dend = agglomerate(&euclid, method)?;
            println!("cpcc {:.6}", cpcc(&euclid, &cophenetic(&dend))?);
            match out {
                Some(path) => io::write_dendrogram(&dend, &path)?,
                None => print!("{}", io::format_dendrogram(&dend)),
            }
        }
        Command::Boost {
            data,
            config,
            trace,
            out_dir,
        } => {
            let d = io::load_dataset(&data.data, data.header, data.label_column)?;
            let mut cfg = match config {
                Some(path) => io::parse_config(&path)?,
                None => Default::default(),
            };
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            if data.no_standardize {
                cfg.standardize = false;
            }
            let outcome = hboost(&d, &cfg)?;
            std::fs::create_dir_all(&out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))?;
            io::write_dendrogram(&outcome.dendrogram, out_dir.join("hstar.txt"))?;
            io::write_condensed(&outcome.consensus, out_dir.join("consensus.bin"))?;
            if trace {
                io::write_trace(&outcome.trace, out_dir.join("trace.jsonl"))?;
            }
            println!(
                "{}/{}/{} cpcc {:.6}",
                cfg.clusterer,
                cfg.combiner,
                cfg.recovery,
                outcome.cpcc()
            );
        }
        Command::Grid {
            data,
            clusterers,
            combiners,
            recoveries,
            iterations,
            fraction,
            seeds,
            jobs,
            out,
        } => {
            let d = io::load_dataset(&data.data, data.header, data.label_column)?;
            let seeds = seeds.unwrap_or_else(|| vec![cli.seed.unwrap_or(0)]);
            let mut spec = GridSpec::full(seeds);
            if let Some(c) = clusterers {
                spec.clusterers = c;
            }
            if let Some(c) = combiners {
                spec.combiners = c;
            }
            if let Some(r) = recoveries {
                spec.recoveries = r;
            }
            spec.iterations = iterations;
            spec.fraction = fraction;
            spec.standardize = !data.no_standardize;
            let results = grid::run_grid(&d, &spec, jobs)?;
            grid::write_results(&results, &out)?;
            let failed = results.iter().filter(|r| r.cpcc.is_none()).count();
            println!(
                "{} runs ({} failed) written to {}",
                results.len(),
                failed,
                out.display()
            );
        }
        Command::Report { results, group_by } => {
            let rows = grid::read_results(&results)?;
            print!("{}", grid::rank_report(&rows, group_by)?.render());
        }
    }
    Ok(())
}
