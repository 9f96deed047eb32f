use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use permbound::suites::Suite;
use permbound::Error;

#[derive(Parser)]
#[command(name = "permbound", version, about = "Exact permanents and hafnians, and upper bounds for them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Per,
    PerEll,
    Haf,
    HafEll,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum P {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "inf")]
    Inf,
}

#[derive(Subcommand)]
enum Command {
    /// Exact permanent, multidimensional permanent, hafnian or hyperhafnian.
    Exact {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "per")]
        kind: Kind,
        /// Evaluate unit-circle input at this t instead of the stored one.
        #[arg(long, value_parser = commands::parse_real)]
        t: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Bounds of |per(Z)|/n! next to the exact value.
    Bounds {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = commands::parse_real)]
        t: Option<f64>,
        /// Column partition, 1-based, e.g. "1,2|3,4"; repeatable.
        #[arg(long)]
        partition: Vec<String>,
        /// Composition of n, e.g. "3,3,2"; repeatable.
        #[arg(long)]
        composition: Vec<String>,
        /// Only the operator-norm baseline with this p.
        #[arg(long, value_enum)]
        p: Option<P>,
        /// Column permutation, 1-based; pairs consecutive columns.
        #[arg(long)]
        s_perm: Option<String>,
        #[arg(long)]
        all_baselines: bool,
        /// Add the unit-circle pair, average and theta rows.
        #[arg(long)]
        unit_circle_bounds: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Reproduce the bound comparison for the built-in 8x8 unit-circle matrix.
    Table1 {
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run a seeded property suite.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Characteristic function of a random diagonal sum.
    Charfn {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated values, e.g. "0,pi/4,1.5".
        #[arg(long, value_parser = commands::parse_real_list)]
        t: std::vec::Vec<f64>,
        /// Monte Carlo trials per t (0 disables).
        #[arg(long, default_value_t = 0)]
        mc: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        s_perm: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn configure_threads() -> Result<(), Error> {
    if let Ok(v) = std::env::var("PERMBOUND_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::parse("PERMBOUND_THREADS", format!("expected a thread count, found \"{v}\"")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::domain(e.to_string()))?;
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Feasibility { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Exact { input, kind, t, format } => commands::exact(&input, kind, t, format),
        Command::Bounds {
            input,
            t,
            partition,
            composition,
            p,
            s_perm,
            all_baselines,
            unit_circle_bounds,
            format,
        } => commands::bounds(
            &input,
            &commands::BoundsRequest {
                t,
                partitions: partition,
                compositions: composition,
                p,
                s_perm,
                all_baselines,
                unit_circle_bounds,
            },
            format,
        ),
        Command::Table1 { format } => commands::table1(format),
        Command::Verify { suite, seed, trials } => commands::verify(suite, seed, trials),
        Command::Charfn {
            input,
            t,
            mc,
            seed,
            s_perm,
            format,
        } => commands::charfn(&input, &t, mc, seed, s_perm.as_deref(), format),
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
