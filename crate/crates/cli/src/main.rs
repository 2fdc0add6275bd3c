//! `spinmap` binary: thin argument layer over the library.
//!
//! Exit codes: 0 on success, 1 for configuration problems (bad flags, bad
//! config file, invalid key combinations, missing input files), 2 for
//! runtime failures (compute errors, unwritable outputs).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use spinmap_cli::config::{Command, Config};
use spinmap_cli::pipeline::PointSummary;
use spinmap_cli::svg::{line_plot, Series};
use spinmap_cli::sweeps::{self, CommandOutput};
use spinmap_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "spinmap",
    version,
    about = "Sweep experiments over datasets encoded as Ising spin lattices"
)]
struct Cli {
    #[command(subcommand)]
    cmd: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Sweep the number of retained features; writes features.csv.
    Features(CommonArgs),
    /// Sweep the feature scale `a`; writes scaling.csv and scaling_a0.txt.
    Scaling(CommonArgs),
    /// Sweep the post-scaling noise width; writes noise.csv.
    Noise(CommonArgs),
    /// Check shot-based order estimates against exact values; writes
    /// measure.csv.
    Measure(CommonArgs),
    /// Feature sweep with the fidelity-kernel classifier forced on; writes
    /// qsvc.csv.
    Qsvc(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to a key = value config file.
    #[arg(long, value_name = "FILE")]
    config: PathBuf,

    /// Override one config key (repeatable), e.g. --set seed=7. Applied
    /// after the file and before the named flags below.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Override the `seed` key.
    #[arg(long)]
    seed: Option<u64>,

    /// Override the `out_dir` key.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    /// Override the `lattice` key.
    #[arg(long)]
    lattice: Option<String>,

    /// Override the `a` key (feature scale).
    #[arg(long)]
    a: Option<f64>,

    /// Override the `shots` key.
    #[arg(long)]
    shots: Option<u64>,

    /// Override the `qsvc` key (true or false).
    #[arg(long, value_name = "BOOL")]
    qsvc: Option<bool>,
}

impl CliCommand {
    fn split(&self) -> (Command, &CommonArgs) {
        match self {
            CliCommand::Features(a) => (Command::Features, a),
            CliCommand::Scaling(a) => (Command::Scaling, a),
            CliCommand::Noise(a) => (Command::Noise, a),
            CliCommand::Measure(a) => (Command::Measure, a),
            CliCommand::Qsvc(a) => (Command::Qsvc, a),
        }
    }
}

/// File config, then `--set` pairs, then named flags — later wins.
fn resolve(args: &CommonArgs) -> CliResult<Config> {
    let mut cfg = Config::from_path(&args.config)?;
    for pair in &args.set {
        let Some((key, value)) = pair.split_once('=') else {
            return Err(CliError::Config(format!(
                "--set expects KEY=VALUE, got `{pair}`"
            )));
        };
        cfg.set(key.trim(), value.trim())?;
    }
    if let Some(seed) = args.seed {
        cfg.set("seed", &seed.to_string())?;
    }
    if let Some(dir) = &args.out_dir {
        cfg.set("out_dir", &dir.display().to_string())?;
    }
    if let Some(lattice) = &args.lattice {
        cfg.set("lattice", lattice)?;
    }
    if let Some(a) = args.a {
        cfg.set("a", &a.to_string())?;
    }
    if let Some(shots) = args.shots {
        cfg.set("shots", &shots.to_string())?;
    }
    if let Some(q) = args.qsvc {
        cfg.set("qsvc", &q.to_string())?;
    }
    Ok(cfg)
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn print_record(cmd: Command, r: &PointSummary) {
    let auc = match r.auc {
        Some(a) => format!(" auc={a:.4}"),
        None => String::new(),
    };
    println!(
        "{} {}={}: tvd={:.4} corr={:.4} residual={:.4} degenerate={:.4} abstain={:.4}{} ({:.0} ms)",
        cmd.name(),
        match cmd {
            Command::Features | Command::Qsvc => "n",
            Command::Scaling => "a",
            Command::Noise => "sigma",
            Command::Measure => "sample",
        },
        r.sweep_value,
        r.tvd,
        r.mean_corr,
        r.p_residual,
        r.degeneracy_rate,
        r.abstain_rate,
        auc,
        r.wall_ms,
    );
    if !r.pattern_counts.is_empty() {
        let tally: Vec<String> = r
            .pattern_counts
            .iter()
            .map(|(name, count)| format!("{name} x{count}"))
            .collect();
        println!("  patterns: {}", tally.join(", "));
    }
}

fn sweep_svg(records: &[PointSummary], x_label: &str) -> Option<String> {
    let pick = |f: fn(&PointSummary) -> Option<f64>, name: &str| -> Option<Series> {
        let points: Vec<(f64, f64)> = records
            .iter()
            .filter_map(|r| f(r).map(|y| (r.sweep_value, y)))
            .collect();
        (!points.is_empty()).then(|| Series { name: name.to_string(), points })
    };
    let mut series = Vec::new();
    if let Some(s) = pick(|r| Some(r.mean_corr), "mean_corr") {
        series.push(s);
    }
    if let Some(s) = pick(|r| Some(r.tvd), "tvd") {
        series.push(s);
    }
    if let Some(s) = pick(|r| r.auc, "auc") {
        series.push(s);
    }
    line_plot("sweep summary", x_label, "value", &series)
}

fn run() -> CliResult<()> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Explicit --help/--version are success; every other parse
            // failure is a configuration error.
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return Ok(());
            }
            return Err(CliError::Config(e.to_string()));
        }
    };

    let (cmd, args) = cli.cmd.split();
    let cfg = resolve(args)?;
    cfg.validate(cmd)?;

    // The manifest records the effective state: the qsvc subcommand always
    // runs with the classifier on, so its manifest must say so.
    let mut effective = cfg.clone();
    if cmd == Command::Qsvc {
        effective.qsvc = true;
    }

    // Output directory and manifest first: a crashed run still leaves the
    // manifest behind, and an unwritable target fails before any compute.
    std::fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| CliError::Runtime(format!("creating {}: {e}", cfg.out_dir.display())))?;
    let manifest_path = cfg.out_dir.join(format!("manifest_{}.cfg", cmd.name()));
    write_file(&manifest_path, &effective.manifest(cmd))?;

    let output = sweeps::execute(&cfg, cmd)?;

    match output {
        CommandOutput::Sweep { records, a0, csv_name } => {
            for r in &records {
                print_record(cmd, r);
            }
            write_file(&cfg.out_dir.join(csv_name), &sweeps::sweep_csv(&records))?;
            if cmd == Command::Scaling {
                let text = match a0 {
                    Some(a) => {
                        println!(
                            "a0 = {a} (smallest swept a with mean corr above -1 + {})",
                            sweeps::A0_DEPARTURE_TOL
                        );
                        format!("{a}\n")
                    }
                    None => {
                        println!("a0: no swept a departs from mean corr -1");
                        "none\n".to_string()
                    }
                };
                write_file(&cfg.out_dir.join("scaling_a0.txt"), &text)?;
            }
            if cfg.svg {
                let x_label = match cmd {
                    Command::Features | Command::Qsvc => "features",
                    Command::Scaling => "a",
                    Command::Noise => "sigma",
                    Command::Measure => "sample",
                };
                if let Some(svg) = sweep_svg(&records, x_label) {
                    let name = csv_name.replace(".csv", ".svg");
                    write_file(&cfg.out_dir.join(name), &svg)?;
                }
            }
        }
        CommandOutput::Measure { rows, max_abs_deviation } => {
            println!(
                "measure: {} samples, {} shots each, max |estimate - exact| = {max_abs_deviation}",
                rows.len(),
                cfg.shots
            );
            write_file(&cfg.out_dir.join("measure.csv"), &sweeps::measure_csv(&rows))?;
        }
    }

    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
