use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use permstat::algebra::LinForm;
use permstat::characters::{character_sum_dichotomy, CharacterMemo, CharacterTable};
use permstat::config::{DEFAULT_SEEDS, MAX_MATRIX_N};
use permstat::oracles::{self, Suite, Verdict};
use permstat::spectra::{self, MatrixKind, MatrixSource, SpectrumSpec};
use permstat::{specht, Error};
use serde_json::{json, Value};

/// Exact spectra of permutation-statistic matrices.
#[derive(Parser)]
#[command(name = "permstat", version)]
struct Cli {
    /// Worker threads for the data-parallel core (0 uses every core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Report every elapsed_ms as 0 so output is byte-for-byte reproducible.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a matrix and optionally stream it as CSV.
    Matrix {
        #[arg(long)]
        kind: MatrixKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Certify a predicted spectrum by exact kernel dimensions.
    Certify {
        #[arg(long)]
        kind: MatrixKind,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        /// Also check the minimal polynomial symbolically.
        #[arg(long)]
        symbolic: bool,
        /// Replace the registered prediction, as `value:mult,value:mult`.
        #[arg(long)]
        spectrum: Option<String>,
    },
    /// Verify the standard-representation factorization at degree n.
    Specht {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
    },
    /// Compare closed forms against brute force, one JSON object per line.
    Lemmas {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        suite: Option<Vec<Suite>>,
    },
    /// Character table and the fixed-point character-sum dichotomy.
    Characters {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Confirm every known erratum and report anything unexpected.
    Errata {
        #[arg(long, default_value_t = 5)]
        nmax: usize,
    },
    /// Run the property suite.
    Properties {
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
    },
}

/// Outcome of a subcommand: JSON to print and whether every check passed.
struct Outcome {
    lines: Vec<Value>,
    passed: bool,
}

impl Outcome {
    fn one(value: Value, passed: bool) -> Self {
        Outcome { lines: vec![value], passed }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Parse(_) | Error::Registry { .. } | Error::Precondition(_) => 2,
        Error::ResourceCap(_) => 3,
        _ => 1,
    }
}

fn zero_timing(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for (k, child) in map.iter_mut() {
                if k == "elapsed_ms" {
                    *child = json!(0);
                } else {
                    zero_timing(child);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(zero_timing),
        _ => {}
    }
}

fn seeds_or_default(seeds: Option<Vec<u64>>) -> Vec<u64> {
    seeds.unwrap_or_else(|| DEFAULT_SEEDS.to_vec())
}

fn parse_spectrum(kind: MatrixKind, n: usize, text: &str) -> permstat::Result<SpectrumSpec> {
    let pairs = text
        .split(',')
        .map(|item| {
            let (value, mult) = item
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("expected value:mult, got {item:?}")))?;
            let mult = mult.trim().parse::<usize>().map_err(|e| Error::Parse(format!("multiplicity {mult:?}: {e}")))?;
            Ok((value.trim().parse::<LinForm>()?, mult))
        })
        .collect::<permstat::Result<Vec<_>>>()?;
    Ok(SpectrumSpec::new(kind, n, pairs, "command line"))
}

fn matrix(kind: MatrixKind, n: usize, dump: Option<PathBuf>) -> permstat::Result<Outcome> {
    if n > MAX_MATRIX_N {
        return Err(Error::ResourceCap(format!("matrices are built for n <= {MAX_MATRIX_N}")));
    }
    let source = MatrixSource::build(kind, n)?;
    if let Some(path) = &dump {
        let out = BufWriter::new(File::create(path)?);
        match &source {
            MatrixSource::Regular(e) => e.write_regular_csv(out)?,
            MatrixSource::Explicit(m) => specht::write_specht_csv(m, n, out)?,
        }
    }
    let vars: Vec<String> = source.vars().iter().map(ToString::to_string).collect();
    let summary = json!({
        "kind": kind,
        "n": n,
        "dim": source.dim(),
        "vars": vars,
        "trace": source.trace_form(),
        "row_sums": source.row_sums(None)?,
        "dump": dump,
    });
    Ok(Outcome::one(summary, true))
}

fn certify(
    kind: MatrixKind,
    n: usize,
    seeds: Vec<u64>,
    symbolic: bool,
    spectrum: Option<String>,
) -> permstat::Result<Outcome> {
    let spec = match spectrum {
        Some(text) => parse_spectrum(kind, n, &text)?,
        None => spectra::predicted_spectrum(kind, n)?,
    };
    let mut report = spectra::certify(&spec, &seeds)?;
    if symbolic {
        report.attach_minimal_polynomial(spectra::minimal_polynomial_check(kind, n, &spec.values())?);
    }
    let passed = report.passed();
    Ok(Outcome::one(serde_json::to_value(report)?, passed))
}

fn lemmas(n: usize, suites: Option<Vec<Suite>>) -> permstat::Result<Outcome> {
    let suites = match suites {
        Some(s) => s,
        None => Suite::ALL.into_iter().filter(|s| s.supports(n)).collect(),
    };
    if suites.is_empty() {
        return Err(Error::Usage(format!("no lemma suite covers n = {n}")));
    }
    let mut lines = Vec::new();
    let mut passed = true;
    for suite in suites {
        for check in suite.run(n)? {
            passed &= check.verdict != Verdict::Fail;
            lines.push(serde_json::to_value(check)?);
        }
    }
    Ok(Outcome { lines, passed })
}

fn characters(n: usize, dump: Option<PathBuf>) -> permstat::Result<Outcome> {
    let cache = std::env::var_os("PERMSTAT_CACHE_DIR").map(|d| PathBuf::from(d).join("characters.json"));
    let mut memo = match &cache {
        Some(path) if path.exists() => CharacterMemo::load(path)?,
        _ => CharacterMemo::new(),
    };
    let table = CharacterTable::compute(n, &mut memo)?;
    let dichotomy = character_sum_dichotomy(n, &mut memo)?;
    if let Some(path) = &cache {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        memo.save(path)?;
    }
    if let Some(path) = &dump {
        table.write_csv(BufWriter::new(File::create(path)?))?;
    }
    let orthogonal = table.column_orthogonality() && table.row_orthogonality();
    let passed = orthogonal && dichotomy.verdict;
    let value = json!({
        "n": n,
        "classes": table.partitions.len(),
        "orthogonality": orthogonal,
        "dichotomy": dichotomy,
        "verdict": if passed { "PASS" } else { "FAIL" },
    });
    Ok(Outcome::one(value, passed))
}

fn run(command: Command) -> permstat::Result<Outcome> {
    match command {
        Command::Matrix { kind, n, dump } => matrix(kind, n, dump),
        Command::Certify { kind, n, seeds, symbolic, spectrum } => {
            certify(kind, n, seeds_or_default(seeds), symbolic, spectrum)
        }
        Command::Specht { n, seeds } => {
            let report = specht::verify_thsp(n, &seeds_or_default(seeds))?;
            let passed = report.passed();
            Ok(Outcome::one(serde_json::to_value(report)?, passed))
        }
        Command::Lemmas { n, suite } => lemmas(n, suite),
        Command::Characters { n, dump } => characters(n, dump),
        Command::Errata { nmax } => {
            let report = oracles::errata_ledger(nmax)?;
            let passed = report.passed();
            Ok(Outcome::one(serde_json::to_value(report)?, passed))
        }
        Command::Properties { seeds } => {
            let report = oracles::property_suite(&seeds_or_default(seeds))?;
            let passed = report.passed();
            Ok(Outcome::one(serde_json::to_value(report)?, passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = std::time::Instant::now();
    let jobs = if cli.jobs == 0 { std::thread::available_parallelism().map_or(1, |p| p.get()) } else { cli.jobs };
    let result = permstat::par::with_threads(jobs, || run(cli.command));
    match result {
        Ok(mut outcome) => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            for line in &mut outcome.lines {
                if cli.no_timing {
                    zero_timing(line);
                }
                if writeln!(out, "{line}").is_err() {
                    return ExitCode::from(1);
                }
            }
            if !cli.no_timing {
                eprintln!("elapsed {} ms", started.elapsed().as_millis());
            }
            ExitCode::from(if outcome.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("permstat: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
