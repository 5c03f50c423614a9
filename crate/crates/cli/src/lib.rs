//! Argument parsing and dispatch for the `qcldpc` binary.
//!
//! [`run`] never prints or exits; it returns what would be written to stdout
//! and stderr together with the exit code, so commands can be tested
//! in-process.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qcldpc::family::{default_verify, FamilyManifest};
use qcldpc::search::find_certified_seed;
use qcldpc::sim::{simulate, to_csv};
use qcldpc::sparse::{export_alist, gf2_rank};
use qcldpc::{
    check_seed_conditions, extend_family, girth_fast, girth_oracle, ChannelParams, ConditionReport, Error,
    ExponentMatrix, GirthMethod, GirthReport, QcCode, SearchConfig, SumProductDecoder,
};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutcome {
    fn ok(stdout: String) -> Self {
        Self {
            exit_code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "qcldpc",
    version,
    about = "Girth-12 (3,L) QC-LDPC codes with consecutive lengths"
)]
struct Cli {
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the seed conditions of a 3-row exponent matrix at circulant size Q.
    Verify {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        q: usize,
    },
    /// Girth of the code given by an exponent matrix and circulant size P.
    Girth {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: usize,
        /// Use breadth-first search on the expanded Tanner graph.
        #[arg(long)]
        oracle: bool,
    },
    /// List the family codes for every circulant size in FROM..=TO.
    Extend {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        q: usize,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Skip recomputing the girth of each member.
        #[arg(long)]
        no_verify: bool,
    },
    /// Search for a certified (3,L) seed.
    Search {
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        q_cap: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        restarts: Option<usize>,
        /// Keep the ordering conditions as hard constraints during the search.
        #[arg(long)]
        hard: bool,
        /// Also write the seed matrix to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the expanded parity-check matrix.
    Export {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// BPSK/AWGN Monte Carlo with the sum-product decoder.
    Simulate {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        p: usize,
        /// Comma-separated Eb/N0 points in dB; `inf` is noiseless.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        ebn0: Vec<f64>,
        #[arg(long, default_value_t = 80)]
        max_iter: usize,
        #[arg(long, default_value_t = 50)]
        min_error_frames: u64,
        #[arg(long, default_value_t = 20_000)]
        frame_cap: u64,
        #[arg(long)]
        seed: u64,
        /// Code rate for noise scaling; computed from the GF(2) rank if omitted.
        #[arg(long)]
        rate: Option<f64>,
    },
}

#[derive(Serialize)]
struct SearchOutput<'a> {
    seed: &'a ExponentMatrix,
    q: usize,
    report: &'a ConditionReport,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ExportFormat {
    Alist,
    Json,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutcome {
                    exit_code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CommandOutcome::ok(text)
            };
        }
    };

    let result = match cli.threads {
        Some(0) => Err(Error::InvalidInput("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(Error::InvalidInput(format!("cannot start thread pool: {e}"))),
        },
        None => dispatch(cli.command),
    };
    match result {
        Ok(outcome) => outcome,
        Err(e) => CommandOutcome {
            exit_code: exit_code_for(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Verification(_) => EXIT_VERIFICATION,
        Error::Budget(_) => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

fn dispatch(command: Command) -> qcldpc::Result<CommandOutcome> {
    match command {
        Command::Verify { matrix, q } => {
            let e = read_matrix(&matrix)?;
            let report = check_seed_conditions(&e, q)?;
            let mut outcome = CommandOutcome::ok(pretty(&report)?);
            if !report.all_hold() {
                outcome.exit_code = EXIT_VERIFICATION;
                outcome.stderr = format!("seed conditions fail at Q = {q}\n");
            }
            Ok(outcome)
        }
        Command::Girth { matrix, p, oracle } => {
            let e = read_matrix(&matrix)?;
            let report = if oracle {
                GirthReport {
                    girth: girth_oracle(&e, p)?,
                    method: GirthMethod::GraphBfs,
                    witness: None,
                }
            } else {
                girth_fast(&e, p)?
            };
            Ok(CommandOutcome::ok(pretty(&report)?))
        }
        Command::Extend {
            matrix,
            q,
            from,
            to,
            no_verify,
        } => {
            let e = read_matrix(&matrix)?;
            let verify = !no_verify && default_verify(to.saturating_sub(from) + 1);
            let codes = extend_family(&e, q, from, to, verify)?;
            let min_p = check_seed_conditions(&e, q)?.min_p;
            let manifest = FamilyManifest::new(&e, q, min_p, &codes, verify);
            Ok(CommandOutcome::ok(pretty(&manifest)?))
        }
        Command::Search {
            cols,
            q_cap,
            seed,
            steps,
            restarts,
            hard,
            out,
        } => {
            let mut cfg = SearchConfig::new(cols, q_cap, seed);
            if let Some(s) = steps {
                cfg.max_steps = s;
            }
            if let Some(r) = restarts {
                cfg.restarts = r;
            }
            cfg.hard_constraints = hard;
            let found = find_certified_seed(&cfg)?;
            if let Some(path) = out {
                found.matrix.write_json(path)?;
            }
            let body = SearchOutput {
                seed: &found.matrix,
                q: found.q,
                report: &found.report,
            };
            Ok(CommandOutcome::ok(pretty(&body)?))
        }
        Command::Export { matrix, p, format, out } => {
            let h = QcCode::new(read_matrix(&matrix)?, p)?.expand();
            let text = match format {
                ExportFormat::Alist => export_alist(&h),
                ExportFormat::Json => serde_json::to_string(&h)? + "\n",
            };
            match out {
                Some(path) => {
                    std::fs::write(&path, text)?;
                    Ok(CommandOutcome {
                        exit_code: EXIT_OK,
                        stdout: String::new(),
                        stderr: format!("wrote {}x{} matrix to {}\n", h.n_rows(), h.n_cols(), path.display()),
                    })
                }
                None => Ok(CommandOutcome::ok(text)),
            }
        }
        Command::Simulate {
            matrix,
            p,
            ebn0,
            max_iter,
            min_error_frames,
            frame_cap,
            seed,
            rate,
        } => {
            let code = QcCode::new(read_matrix(&matrix)?, p)?;
            let h = code.expand();
            let rate = match rate {
                Some(r) => r,
                None => {
                    let n = h.n_cols();
                    (n - gf2_rank(&h)?) as f64 / n as f64
                }
            };
            let decoder = SumProductDecoder::new(&h);
            let rows = ebn0
                .iter()
                .map(|&db| {
                    let channel = ChannelParams::new(db, rate, seed)?;
                    simulate(&decoder, &channel, max_iter, min_error_frames, frame_cap)
                })
                .collect::<qcldpc::Result<Vec<_>>>()?;
            let mut outcome = CommandOutcome::ok(to_csv(&rows));
            for r in rows.iter().filter(|r| r.cap_hit) {
                outcome.stderr += &format!(
                    "note: {} dB stopped at the frame cap with {} error frames\n",
                    r.ebn0_db, r.frame_errors
                );
            }
            Ok(outcome)
        }
    }
}

fn read_matrix(path: &Path) -> qcldpc::Result<ExponentMatrix> {
    ExponentMatrix::read_json(path).map_err(|e| match e {
        Error::Io(io) => Error::InvalidInput(format!("cannot read {}: {io}", path.display())),
        other => other,
    })
}

fn pretty<T: Serialize>(value: &T) -> qcldpc::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}
