// Copyright 2026 The qsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The `qsim` command line.

pub mod render;

use std::ffi::OsString;
use std::io::{BufRead, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use qsim_core::cost::{backend_from_name, EstimatorBackend, BACKEND_ENV};
use qsim_core::optimizer::DEFAULT_MAX_ITERATIONS;
use qsim_core::{run_query, Catalog, KernelProfile, QueryOptions, Registry, StageError};
use qsim_service::{bind, router, serve, AppState, Workspace};

/// Exit status for a failed query or data operation.
pub const EXIT_QUERY_ERROR: u8 = 2;
/// Exit status for bad command-line usage.
pub const EXIT_USAGE: u8 = 1;

#[derive(Debug, Parser)]
#[command(name = "qsim", version, about = "Extensible relational query-engine simulator")]
pub struct Cli {
    /// Directory holding the loaded datasets as <table>.csv
    #[arg(long, global = true, default_value = "./qsim-data")]
    pub data: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Estimator {
    Builtin,
    Stub,
    Sqlite,
}

impl Estimator {
    fn name(self) -> &'static str {
        match self {
            Estimator::Builtin => "builtin",
            Estimator::Stub => "stub",
            Estimator::Sqlite => "sqlite",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a CSV file and add it to the workspace
    Load {
        #[arg(long)]
        name: String,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Remove a dataset from the workspace
    Drop {
        #[arg(long)]
        name: String,
    },
    /// List the datasets in the workspace
    Tables,
    /// Run one query
    Query {
        #[arg(long)]
        sql: String,
        /// Comma-separated rule names in application order, or `all`
        #[arg(long, value_delimiter = ',')]
        rules: Vec<String>,
        /// Skip optimization
        #[arg(long)]
        no_opt: bool,
        /// Print both plan trees with per-node estimates
        #[arg(long)]
        explain: bool,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// Defaults to $QSIM_ESTIMATOR_BACKEND, then builtin
        #[arg(long, value_enum)]
        estimator: Option<Estimator>,
        #[arg(long, default_value_t = DEFAULT_MAX_ITERATIONS)]
        max_iterations: usize,
    },
    /// Start the HTTP service
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Built web UI to serve at /
        #[arg(long)]
        ui: Option<PathBuf>,
    },
    /// Read queries from standard input, one per line
    Repl,
}

pub struct Io<'a> {
    pub stdin: &'a mut dyn BufRead,
    pub stdout: &'a mut dyn Write,
    pub stderr: &'a mut dyn Write,
}

/// Runs the command line and returns the process exit status.
pub fn run(args: impl IntoIterator<Item = impl Into<OsString> + Clone>, io: &mut Io<'_>) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(io.stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(cli, io) {
        Ok(()) => 0,
        Err(Failure(msg)) => {
            let _ = writeln!(io.stderr, "{msg}");
            EXIT_QUERY_ERROR
        }
    }
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(format!("error: {e}"))
    }
}

fn profile() -> KernelProfile {
    Registry::with_builtin_extensions()
        .build_profile()
        .expect("builtin extensions are conflict-free")
}

fn open_workspace(dir: &std::path::Path, profile: &KernelProfile, stderr: &mut dyn Write) -> Result<(Workspace, Catalog), Failure> {
    let ws = Workspace::new(dir);
    let (catalog, skipped) = ws.load(profile)?;
    for s in skipped {
        let _ = writeln!(stderr, "warning: skipped {}: {}", s.file.display(), s.reason);
    }
    Ok((ws, catalog))
}

fn default_backend() -> Result<Option<Arc<dyn EstimatorBackend>>, Failure> {
    match std::env::var(BACKEND_ENV) {
        Ok(name) => Ok(backend_from_name(&name)?),
        Err(_) => Ok(None),
    }
}

fn execute(cli: Cli, io: &mut Io<'_>) -> Result<(), Failure> {
    let profile = profile();
    match cli.command {
        Command::Load { name, csv } => {
            let (ws, mut catalog) = open_workspace(&cli.data, &profile, io.stderr)?;
            let text = std::fs::read_to_string(&csv).map_err(|e| Failure(format!("error: {}: {e}", csv.display())))?;
            let key = qsim_service::workspace::add_dataset(&mut catalog, &name, &text, &profile)?;
            ws.save(&key, &text)?;
            let rel = catalog.get_table(&key)?;
            writeln!(io.stdout, "loaded {key}: {} rows, {} columns", rel.len(), rel.schema().len())?;
        }
        Command::Drop { name } => {
            let (ws, mut catalog) = open_workspace(&cli.data, &profile, io.stderr)?;
            catalog.drop_table(&name)?;
            ws.remove(&name.to_ascii_lowercase())?;
            writeln!(io.stdout, "dropped {}", name.to_ascii_lowercase())?;
        }
        Command::Tables => {
            let (_, catalog) = open_workspace(&cli.data, &profile, io.stderr)?;
            for t in catalog.list_tables() {
                let cols: Vec<String> = t.schema.columns().iter().map(|c| format!("{}:{}", c.name, c.data_type)).collect();
                writeln!(io.stdout, "{} ({} rows): {}", t.name, t.row_count, cols.join(", "))?;
            }
        }
        Command::Query {
            sql,
            rules,
            no_opt,
            explain,
            format,
            estimator,
            max_iterations,
        } => {
            let (_, catalog) = open_workspace(&cli.data, &profile, io.stderr)?;
            let backend = match estimator {
                Some(e) => backend_from_name(e.name())?,
                None => default_backend()?,
            };
            let options = QueryOptions {
                rules: expand_rules(rules, &profile),
                optimize: !no_opt,
                max_iterations,
                backend,
            };
            let outcome = run_query(&sql, &catalog, &profile, &options).map_err(stage_failure)?;
            let resp = &outcome.response;
            if let Some(w) = &resp.warning {
                writeln!(io.stderr, "warning: {w}")?;
            }
            match format {
                Format::Json => writeln!(io.stdout, "{}", serde_json::to_string_pretty(resp)?)?,
                Format::Table => {
                    if explain {
                        write!(io.stdout, "{}", render::explain(resp))?;
                    }
                    write!(io.stdout, "{}", render::table(&outcome.result))?;
                }
            }
        }
        Command::Serve { port, host, ui } => {
            let (ws, catalog) = open_workspace(&cli.data, &profile, io.stderr)?;
            let state = AppState::new(Registry::with_builtin_extensions(), catalog)?
                .with_backend(default_backend()?)
                .with_workspace(ws);
            let app = router(state, ui.as_deref());
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let listener = bind(SocketAddr::new(host, port)).await?;
                writeln!(io.stdout, "qsim listening on http://{}", listener.local_addr()?)?;
                io.stdout.flush()?;
                serve(listener, app).await
            })?;
        }
        Command::Repl => repl(&cli.data, &profile, io)?,
    }
    Ok(())
}

/// `all` stands for every rule the profile offers.
fn expand_rules(rules: Vec<String>, profile: &KernelProfile) -> Vec<String> {
    if rules.len() == 1 && rules[0].eq_ignore_ascii_case("all") {
        return profile.rules().iter().map(|r| r.rule.name().to_string()).collect();
    }
    rules.into_iter().map(|r| r.trim().to_string()).filter(|r| !r.is_empty()).collect()
}

fn stage_failure(e: StageError) -> Failure {
    match e.position.filter(|p| !e.message.contains(&p.to_string())) {
        Some(p) => Failure(format!("{} error at {p}: {}", e.stage, e.message)),
        None => Failure(format!("{} error: {}", e.stage, e.message)),
    }
}

const REPL_HELP: &str = "\
commands:
  :rules r1,r2,...   set the rule list (`all` for every rule, empty to clear)
  :explain on|off    print plan trees before results
  :tables            list datasets
  :quit              leave
anything else is run as a query
";

fn repl(data: &std::path::Path, profile: &KernelProfile, io: &mut Io<'_>) -> Result<(), Failure> {
    let (_, catalog) = open_workspace(data, profile, io.stderr)?;
    let mut options = QueryOptions {
        backend: default_backend()?,
        ..QueryOptions::default()
    };
    let mut explain = false;
    let mut line = String::new();
    loop {
        write!(io.stdout, "qsim> ")?;
        io.stdout.flush()?;
        line.clear();
        if io.stdin.read_line(&mut line)? == 0 {
            writeln!(io.stdout)?;
            return Ok(());
        }
        let input = line.trim();
        match input.split_once(char::is_whitespace).unwrap_or((input, "")) {
            ("", _) => {}
            (":quit" | ":q", _) => return Ok(()),
            (":help", _) => write!(io.stdout, "{REPL_HELP}")?,
            (":tables", _) => {
                for t in catalog.list_tables() {
                    writeln!(io.stdout, "{} ({} rows)", t.name, t.row_count)?;
                }
            }
            (":explain", arg) => {
                explain = arg.trim() != "off";
                writeln!(io.stdout, "explain {}", if explain { "on" } else { "off" })?;
            }
            (":rules", arg) => {
                let names = arg.split(',').map(str::to_string).collect();
                options.rules = expand_rules(names, profile);
                match qsim_core::optimizer::RuleList::resolve(&options.rules, profile) {
                    Ok(list) => writeln!(io.stdout, "rules: {}", list.names().join(", "))?,
                    Err(e) => {
                        options.rules.clear();
                        writeln!(io.stderr, "error: {e}")?;
                    }
                }
            }
            _ => match run_query(input, &catalog, profile, &options) {
                Ok(out) => {
                    if let Some(w) = &out.response.warning {
                        writeln!(io.stderr, "warning: {w}")?;
                    }
                    if explain {
                        write!(io.stdout, "{}", render::explain(&out.response))?;
                    }
                    write!(io.stdout, "{}", render::table(&out.result))?;
                }
                Err(e) => writeln!(io.stderr, "{}", stage_failure(e).0)?,
            },
        }
    }
}
