use clap::Parser;
use qlectra_cli::{find, registry, render, run_config, threads_from_env, write_atomic, CliError, ExperimentConfig, Format};
use std::path::PathBuf;
use std::process::ExitCode;

/// Run a named experiment, a config file (`run -f FILE`), or `list` them.
#[derive(Debug, Parser)]
#[command(name = "qlectra", version)]
struct Cli {
    /// Experiment id, `run` or `list`.
    command: String,
    /// Config file for `run`.
    #[arg(short = 'f', long = "file")]
    file: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// Parameter override `key=value`; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

fn list() -> String {
    let mut s = String::new();
    for e in registry() {
        s.push_str(&format!("{:<18} {}\n", e.id, e.summary));
        for p in e.params {
            s.push_str(&format!("    {:<10} {:<6} default {:<16} {}\n", p.name, format!("{:?}", p.kind).to_lowercase(), p.default, p.help));
        }
    }
    s
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match cli.command.as_str() {
        "list" => {
            print!("{}", list());
            return Ok(());
        }
        "run" => {
            let path = cli
                .file
                .as_ref()
                .ok_or_else(|| CliError::SchemaViolation("run needs -f CONFIG".into()))?;
            ExperimentConfig::load(path)?
        }
        name => {
            if cli.file.is_some() {
                return Err(CliError::SchemaViolation("-f is only valid with run".into()));
            }
            find(name)?;
            ExperimentConfig::new(name)
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    for assignment in &cli.params {
        cfg.set_param(assignment)?;
    }
    let (mut path, mut format) = match &cfg.output {
        Some(o) => (o.path.clone(), o.format),
        None => (None, Format::Json),
    };
    if let Some(out) = cli.out {
        path = Some(out);
    }
    if let Some(f) = &cli.format {
        format = f.parse()?;
    }
    let report = run_config(&cfg, threads_from_env())?;
    let text = render(&report, format)?;
    match path {
        Some(p) => write_atomic(&p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::SchemaViolation(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
