use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use repair_cascade::Condition;
use repair_cascade_cli::commands;
use repair_cascade_cli::config::{BatchArgs, EngineArgs, WaterfallFlags, config_error, exit_code, prepare};
use repair_cascade_cli::server::{self, AppState, ServeOptions};

#[derive(Parser, Debug)]
#[command(name = "repair-cascade", version, about = "Staged prompting harness for LLM vulnerability repair")]
struct Cli {
    /// More log output on stderr (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ask the bare detection question for every snippet.
    Detect(BatchArgs),
    /// One repair prompt per snippet under a fixed context level.
    Repair {
        #[command(flatten)]
        batch: BatchArgs,
        /// no-knowledge, with-vulnerability or with-cwe.
        #[arg(long)]
        condition: String,
    },
    /// Automatic waterfall sessions for every snippet.
    Waterfall {
        #[command(flatten)]
        batch: BatchArgs,
        #[command(flatten)]
        flags: WaterfallFlags,
    },
    /// Every condition, producing the full table and curve.
    All {
        #[command(flatten)]
        batch: BatchArgs,
        #[command(flatten)]
        flags: WaterfallFlags,
    },
    /// Rebuild report files from results stored in an output directory.
    Report {
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Corpus whose taxonomy orders the rows (default: built-in).
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Serve the interactive session API.
    Serve {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
        /// Directory for session event logs.
        #[arg(long)]
        sessions_dir: Option<PathBuf>,
        /// Directory searched for the latest report.json.
        #[arg(long)]
        reports: Option<PathBuf>,
    },
    /// Write a synthetic scripted fixture.
    Fixture {
        /// Fixture name; see --list.
        #[arg(long, required_unless_present = "list")]
        name: Option<String>,
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
        #[arg(long)]
        list: bool,
    },
    /// Compare static and instrumented verdicts over a fix manifest.
    Oracle {
        #[arg(long, default_value = "corpora/fixes/manifest.json")]
        manifest: PathBuf,
        /// Skip the instrumented run.
        #[arg(long)]
        static_only: bool,
    },
}

fn repair_condition(name: &str) -> Result<Condition> {
    let c: Condition = name.parse().map_err(config_error)?;
    if c.single_stage().is_none() || c == Condition::DetectNoKnowledge {
        return Err(config_error(format!("`{name}` is not a repair condition (no-knowledge, with-vulnerability, with-cwe)")));
    }
    Ok(c)
}

fn dispatch(cli: Cli) -> Result<()> {
    let stdout = &mut std::io::stdout();
    match cli.command {
        Command::Detect(batch) => {
            commands::run(&batch, &[Condition::DetectNoKnowledge], WaterfallFlags::default(), stdout)?;
        }
        Command::Repair { batch, condition } => {
            let c = repair_condition(&condition)?;
            commands::run(&batch, &[c], WaterfallFlags::default(), stdout)?;
        }
        Command::Waterfall { batch, flags } => {
            commands::run(&batch, &[Condition::Waterfall], flags, stdout)?;
        }
        Command::All { batch, flags } => {
            commands::run(&batch, &Condition::ALL, flags, stdout)?;
        }
        Command::Report { out, corpus } => {
            commands::report(&out, corpus.as_deref(), stdout)?;
        }
        Command::Serve { engine, bind, sessions_dir, reports } => {
            let prepared = prepare(&engine)?;
            let state = AppState::new(prepared.corpus, prepared.engine, ServeOptions { sessions_dir, reports_dir: reports })
                .map_err(|e| e.context(repair_cascade_cli::config::ConfigError("restoring sessions".into())))?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(server::serve(state, &bind))?;
        }
        Command::Fixture { name, out, list } => {
            if list {
                for n in repair_cascade::fixtures::NAMES_AVAILABLE {
                    writeln!(stdout, "{n}")?;
                }
            }
            if let Some(name) = name {
                commands::fixture(&name, &out, stdout)?;
            }
        }
        Command::Oracle { manifest, static_only } => {
            let tc = repair_cascade::ToolchainConfig::default();
            let toolchain = (!static_only && tc.available()).then_some(tc);
            if !static_only && toolchain.is_none() {
                eprintln!("warning: no instrumented toolchain; reporting static verdicts only");
            }
            commands::oracle(&manifest, toolchain.as_ref(), stdout)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => tracing::Level::WARN,
        1 => tracing::Level::INFO,
        _ => tracing::Level::DEBUG,
    };
    tracing_subscriber::fmt().with_max_level(level).with_writer(std::io::stderr).init();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
