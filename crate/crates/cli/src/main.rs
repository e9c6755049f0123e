mod cli;
mod commands;
mod parse;
mod report;
mod suite;

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use cli::{Cli, Command, Format};
use report::{RunReport, SCHEMA_VERSION};

const EXIT_FAIL: u8 = 1;
const EXIT_INVALID: u8 = 2;

fn dispatch(cmd: &Command, seed: u64) -> commands::CmdResult {
    match cmd {
        Command::Orbit(a) => commands::orbit(a),
        Command::Gaps(a) => commands::gaps(a),
        Command::Greedy(a) => commands::greedy(a),
        Command::Sumset(a) => commands::sumset_cmd(a, seed),
        Command::Cover(a) => commands::cover(a),
        Command::Generators(a) => commands::generators(a),
        Command::Behrend(a) => commands::behrend(a),
        Command::Prop1(a) => commands::prop1(a),
        Command::Lattice(a) => commands::lattice(a),
        Command::NnCensus(a) => commands::nn_census_cmd(a, seed),
        Command::Kronecker(a) => commands::kronecker(a),
        Command::Kissing(a) => commands::kissing(a),
        Command::ExtractCore(a) => commands::extract(a),
        Command::Example5(a) => commands::example5(a),
        Command::Verify(a) => {
            if a.trials == 0 {
                return Err(gaplab_core::Error::OutOfRange("--trials must be positive".into()));
            }
            Ok(suite::run(a.suite, seed, a.trials))
        }
    }
}

fn destination(cli: &Cli) -> Option<PathBuf> {
    if let Some(p) = &cli.out {
        return Some(p.clone());
    }
    let dir = cli.out_dir.as_ref()?;
    Some(dir.join(format!("{}-{}.{}", cli.command.name(), cli.seed, cli.format.extension())))
}

fn emit(report: &RunReport, format: Format, out: &mut dyn Write) -> io::Result<()> {
    match format {
        Format::Json => report.write_json(out),
        Format::Csv => report.write_csv(out).map_err(io::Error::other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match dispatch(&cli.command, cli.seed) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("gaplab {}: invalid input: {e}", cli.command.name());
            return ExitCode::from(EXIT_INVALID);
        }
    };
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        command: cli.command.name().into(),
        config: cli.command.config(),
        seed: cli.seed,
        verdicts: outcome.verdicts,
        metrics: outcome.metrics,
        result: outcome.result,
        timings: BTreeMap::from([("compute_secs".to_string(), start.elapsed().as_secs_f64())]),
    };
    let written = match destination(&cli) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                if let Err(e) = fs::create_dir_all(dir) {
                    eprintln!("gaplab: cannot create {}: {e}", dir.display());
                    return ExitCode::from(EXIT_INVALID);
                }
            }
            let res = File::create(&path).and_then(|f| {
                let mut w = BufWriter::new(f);
                emit(&report, cli.format, &mut w)?;
                w.flush()
            });
            if res.is_ok() {
                eprintln!("gaplab: report written to {}", path.display());
            }
            res
        }
        None => emit(&report, cli.format, &mut io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("gaplab: cannot write report: {e}");
        return ExitCode::from(EXIT_INVALID);
    }
    for v in report.verdicts.iter().filter(|v| !v.pass) {
        eprintln!("FAIL {}: {} {} {}", v.name, v.lhs, v.relation, v.rhs);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
