//! `phica`: run φ-cellular automata, enumerate homomorphisms, build quotient
//! covers and execute the verification suites.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 domain precondition
//! failure, 3 verification counterexample.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use phica_core::io::{parse_rule_json, trace_csv, trace_pgm, HomSpec};
use phica_core::verify::{run_suite, Suite, VerifyParams, VerifyReport};
use phica_core::{
    build_circulant, cover_report, enumerate_homs, run, Alphabet, Configuration, Error,
    FiniteGroup, DEFAULT_BUDGET,
};

#[derive(Parser, Debug)]
#[command(name = "phica", version, about = "Generalized cellular automata over finite groups")]
struct Cli {
    /// Largest number of configurations any exhaustive sweep may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the primary output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Iterate an endomorphic automaton and write its space-time trace.
    Run {
        /// Rule JSON file.
        #[arg(long)]
        rule: PathBuf,
        /// Initial configuration, e.g. "1,0,0,0", or "random:SEED".
        #[arg(long)]
        init: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// List every homomorphism between two cyclic groups as JSON.
    Hom { domain: String, codomain: String },
    /// Build the quotient cover of a circulant graph and report on it.
    Cover {
        /// Cyclic group label, e.g. Z6.
        group: String,
        /// Connection set, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        connection: Vec<usize>,
        /// Generator of the normal subgroup (0 for the trivial subgroup).
        #[arg(long)]
        normal: usize,
        /// Alphabet size for the induced automaton.
        #[arg(long, short = 'q', default_value_t = 2)]
        alphabet: usize,
        /// Write PREFIX.source.dot and PREFIX.target.dot.
        #[arg(long)]
        dot: Option<String>,
    },
    /// Run a verification suite.
    Verify {
        /// decomposition | star-lemma | curtis-hedlund | linearity | covering | all
        suite: String,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        #[arg(long = "alphabet", short = 'q', default_value_t = 2)]
        alphabet: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Pgm,
}

enum Failure {
    Usage(String),
    Domain(String),
    Counterexample,
}

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Failure::Usage(e.to_string())
    }

    fn domain(e: impl ToString) -> Self {
        Failure::Domain(e.to_string())
    }
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::usage(format!("cannot write stdout: {e}"))),
    }
}

fn parse_group(label: &str) -> Result<FiniteGroup, Failure> {
    FiniteGroup::from_label(label).map_err(Failure::usage)
}

fn cmd_run(cli: &Cli, rule: &Path, init: &str, steps: usize, format: Format) -> Result<(), Failure> {
    let text = fs::read_to_string(rule)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", rule.display())))?;
    let t = parse_rule_json(&text).map_err(Failure::usage)?;
    let cells = t.source_group().order();
    let x0 = match init.strip_prefix("random:") {
        Some(seed) => {
            let seed: u64 = seed
                .parse()
                .map_err(|_| Failure::usage(format!("bad seed in {init:?}")))?;
            Configuration::seeded(cells, t.alphabet(), seed)
        }
        None => Configuration::parse(init, t.alphabet()).map_err(Failure::usage)?,
    };
    let trace = run(&t, &x0, steps).map_err(|e| match e {
        Error::NotIterable(_) => Failure::domain(e),
        Error::LengthMismatch { .. } | Error::AlphabetMismatch(..) => Failure::usage(e),
        other => Failure::domain(other),
    })?;
    let bytes = match format {
        Format::Csv => trace_csv(&trace).into_bytes(),
        Format::Pgm => trace_pgm(&trace, t.alphabet()),
    };
    emit(cli.output.as_deref(), &bytes)
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(Failure::usage)
}

fn cmd_hom(cli: &Cli, domain: &str, codomain: &str) -> Result<(), Failure> {
    let h = parse_group(domain)?;
    let g = parse_group(codomain)?;
    let homs = enumerate_homs(&h, &g).map_err(Failure::domain)?;
    let specs: Vec<HomSpec> = homs.iter().map(HomSpec::from).collect();
    emit(cli.output.as_deref(), to_json(&specs)?.as_bytes())
}

fn cmd_cover(
    cli: &Cli,
    group: &str,
    connection: &[usize],
    normal: usize,
    q: usize,
    dot: Option<&str>,
) -> Result<(), Failure> {
    let g = parse_group(group)?;
    let alphabet = Alphabet::new(q).map_err(Failure::usage)?;
    let graph = build_circulant(&g, connection).map_err(Failure::domain)?;
    let n = g
        .generated_subgroup(&[normal])
        .and_then(|s| s.into_normal())
        .map_err(Failure::usage)?;
    let report = cover_report(&graph, &n, alphabet, cli.budget);
    emit(cli.output.as_deref(), to_json(&report)?.as_bytes())?;
    if let Some(prefix) = dot {
        fs::write(format!("{prefix}.source.dot"), graph.to_dot("source"))
            .map_err(Failure::usage)?;
        if let Some(target) = &report.target {
            let target = target.build().map_err(Failure::domain)?;
            fs::write(format!("{prefix}.target.dot"), target.to_dot("target"))
                .map_err(Failure::usage)?;
        }
    }
    if !report.verified {
        return Err(Failure::Domain(report.violations.join("; ")));
    }
    Ok(())
}

fn print_report(r: &VerifyReport) {
    println!("{}", r.summary());
    if let Some(c) = &r.first_counterexample {
        println!("  first counterexample: {c}");
    }
    for part in &r.parts {
        print_report(part);
    }
}

fn cmd_verify(cli: &Cli, suite: &str, max_order: usize, q: usize) -> Result<(), Failure> {
    let suite: Suite = suite.parse().map_err(Failure::usage)?;
    let mut params = VerifyParams::new(max_order, q, cli.seed).map_err(Failure::usage)?;
    params.budget = cli.budget;
    let report = run_suite(suite, &params).map_err(|e| match e {
        Error::InvalidField(_) => Failure::usage(e),
        other => Failure::domain(other),
    })?;
    print_report(&report);
    if let Some(path) = &cli.output {
        fs::write(path, to_json(&report)?)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Counterexample)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Run {
            rule,
            init,
            steps,
            format,
        } => cmd_run(&cli, rule, init, *steps, *format),
        Command::Hom { domain, codomain } => cmd_hom(&cli, domain, codomain),
        Command::Cover {
            group,
            connection,
            normal,
            alphabet,
            dot,
        } => cmd_cover(&cli, group, connection, *normal, *alphabet, dot.as_deref()),
        Command::Verify {
            suite,
            max_order,
            alphabet,
        } => cmd_verify(&cli, suite, *max_order, *alphabet),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Counterexample) => {
            eprintln!("verification failed");
            ExitCode::from(3)
        }
    }
}
