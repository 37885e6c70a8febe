use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spca_cli::report::{verify_run, write_run};
use spca_cli::reproduce::{
    render_table1, render_table2, scaling_csv, scaling_square, scaling_wide, table1, table2,
    write_json, Experiment,
};
use spca_cli::{Algorithm, CliError, CliResult, RunSpec, SourceSpec, EXIT_INVALID};
use spca_core::{QrMode, TruncationRule};

#[derive(Parser)]
#[command(
    name = "spca",
    version,
    about = "Sparse PCA by deflation over subspace projections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one algorithm on one dataset.
    Run(RunArgs),
    /// Rerun a reference experiment and write its tables.
    Reproduce(ReproduceArgs),
    /// Recompute the metrics of a run directory from its loadings file.
    Verify {
        /// Directory written by `run --out`.
        dir: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    alg: Algorithm,
    /// pitprops | synthetic[:n=N,seed=S] | random:n=N,d=D[,seed=S] | csv:PATH[,header]
    #[arg(long)]
    source: String,
    /// Number of loadings.
    #[arg(long)]
    r: usize,
    /// Subspace dimension (spca-sp).
    #[arg(long)]
    m: Option<usize>,
    /// Sketch rows (spca-sp without --exact).
    #[arg(long)]
    c: Option<usize>,
    /// sparsity:K | energy:E | threshold:H
    #[arg(long)]
    rule: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Exact SVD initial subspace instead of a row sketch.
    #[arg(long)]
    exact: bool,
    /// Refactor the full compound matrix each round instead of updating.
    #[arg(long)]
    naive_qr: bool,
    /// Directory for report.json and loadings.csv; the report goes to stdout otherwise.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(value_enum)]
    experiment: Experiment,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Seeds per randomized configuration.
    #[arg(long, default_value_t = 20)]
    seeds: usize,
    /// Timed repeats for deterministic fits (TPower, exact initialization).
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    /// Comma-separated dimensions overriding the default sweep.
    #[arg(long, value_delimiter = ',')]
    dims: Vec<usize>,
    /// Add d = 1300 to the square sweep.
    #[arg(long)]
    large: bool,
}

fn run(args: RunArgs) -> CliResult<()> {
    let source: SourceSpec = args.source.parse()?;
    let rule = args
        .rule
        .as_deref()
        .map(str::parse::<TruncationRule>)
        .transpose()
        .map_err(CliError::Invalid)?;
    let spec = RunSpec {
        algorithm: args.alg,
        source,
        r: args.r,
        m: args.m,
        c: args.c,
        rule,
        seed: args.seed,
        repeats: args.repeats,
        exact: args.exact,
        qr_mode: if args.naive_qr {
            QrMode::Naive
        } else {
            QrMode::Stacked
        },
    };
    let outcome = spec.execute()?;
    let m = &outcome.report.median;
    let pattern = outcome.report.repeats[outcome.report.representative]
        .quality
        .pattern_string();
    match &args.out {
        Some(dir) => {
            write_run(dir, &outcome.report, &outcome.loadings)?;
            println!(
                "cpev {:.4}  orthogonality {}  nz {}  pattern {}  seconds {:.6}  failed repeats {}",
                m.cpev,
                m.orthogonality.map_or("-".into(), |o| format!("{o:.4}")),
                m.nz,
                pattern,
                m.fit_seconds,
                outcome.report.failures.len()
            );
            println!("wrote {}", dir.display());
        }
        None => {
            let json = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
            println!("{json}");
        }
    }
    Ok(())
}

fn reproduce(args: ReproduceArgs) -> CliResult<()> {
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::Io {
        path: args.out.clone(),
        source: e,
    })?;
    let dims = |default: &[usize]| {
        if args.dims.is_empty() {
            default.to_vec()
        } else {
            args.dims.clone()
        }
    };
    match args.experiment {
        Experiment::Table1 => {
            let t = table1()?;
            write_json(&args.out.join("table1.json"), &t)?;
            let text = render_table1(&t);
            spca_cli::report::write_atomic(&args.out.join("table1.txt"), text.as_bytes())?;
            print!("{text}");
        }
        Experiment::Table2 => {
            let rows = table2(args.seeds)?;
            write_json(&args.out.join("table2.json"), &rows)?;
            let text = render_table2(&rows);
            spca_cli::report::write_atomic(&args.out.join("table2.txt"), text.as_bytes())?;
            print!("{text}");
        }
        Experiment::ScalingSquare => {
            let mut d = dims(&[100, 400, 700, 1000]);
            if args.large {
                d.push(1300);
            }
            let rows = scaling_square(&d, args.seeds, args.repeats)?;
            let csv = scaling_csv(&rows)?;
            spca_cli::report::write_atomic(&args.out.join("scaling-square.csv"), &csv)?;
            print!("{}", String::from_utf8_lossy(&csv));
        }
        Experiment::ScalingWide => {
            let rows = scaling_wide(&dims(&[1000, 4000, 10000]), args.repeats)?;
            let csv = scaling_csv(&rows)?;
            spca_cli::report::write_atomic(&args.out.join("scaling-wide.csv"), &csv)?;
            print!("{}", String::from_utf8_lossy(&csv));
        }
    }
    Ok(())
}

fn verify(dir: PathBuf) -> CliResult<()> {
    let gap = verify_run(&dir)?;
    println!("max metric deviation {gap:e}");
    if gap > 1e-9 {
        return Err(CliError::Format {
            path: dir,
            message: format!("stored metrics differ from recomputed ones by {gap:e}"),
        });
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Reproduce(a) => reproduce(a),
        Command::Verify { dir } => verify(dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
