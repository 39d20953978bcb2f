//! Command-line front end.
//!
//! Exit codes: 0 success, 1 oracle mismatch, 2 usage or input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::LcafError;
use crate::experiment::{self, DatasetSpec, Source};
use crate::parikh::{build_alphabet, Alphabet};
use crate::solvers::{self, Algorithm, LcafResult};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "lcaf",
    version,
    about = "Longest common abelian factor of two strings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the LCAF of two strings.
    Compute(ComputeArgs),
    /// Cross-check every solver against the brute-force oracle on random pairs.
    OracleDiff(OracleDiffArgs),
    /// Run a row-count experiment and emit CSV.
    Experiment(ExperimentArgs),
    /// Mean gap n - LCAF for uniform binary pairs, next to log2 n.
    Conjecture(ConjectureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// oracle, quadratic, binary, skip, first-vector or all
    #[arg(long, default_value = "skip")]
    pub algo: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Treat A and B as paths of files holding the strings.
    #[arg(long)]
    pub files: bool,
    /// Report visited lengths where the literal pseudocode skip would jump
    /// further than the safe skip (skip and first-vector only).
    #[arg(long)]
    pub diagnose: bool,
    pub a: String,
    pub b: String,
}

#[derive(Debug, Args)]
pub struct OracleDiffArgs {
    #[arg(long, env = "LCAF_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Pairs per length.
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
    /// e.g. `1..12`, `8,16,32` or `10..100:10`
    #[arg(long, default_value = "1..12")]
    pub lengths: String,
    /// Symbols to draw from.
    #[arg(long, default_value = "01")]
    pub alphabet: String,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// exhaustive, iid or fasta
    #[arg(long, default_value = "exhaustive")]
    pub source: String,
    #[arg(long, default_value = "2..10")]
    pub lengths: String,
    #[arg(long, default_value_t = experiment::DEFAULT_TRIALS)]
    pub trials: usize,
    #[arg(long, env = "LCAF_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Comma-separated algorithms, or `all`.
    #[arg(long, default_value = "skip,first-vector")]
    pub algo: String,
    /// Symbols for the iid source.
    #[arg(long, default_value = "acgt")]
    pub alphabet: String,
    #[arg(long)]
    pub fasta: Option<PathBuf>,
    /// Write the CSV here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConjectureArgs {
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, env = "LCAF_SEED", default_value_t = 42)]
    pub seed: u64,
}

/// Parses `a..b` (inclusive), `a..b:step` and comma lists of those.
pub fn parse_lengths(spec: &str) -> Result<Vec<usize>, LcafError> {
    let bad = || LcafError::Config(format!("cannot parse lengths {spec:?}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let mut out = Vec::new();
    for part in spec.split(',').filter(|p| !p.trim().is_empty()) {
        match part.split_once("..") {
            Some((lo, rest)) => {
                let (hi, step) = match rest.split_once(':') {
                    Some((hi, step)) => (num(hi)?, num(step)?),
                    None => (num(rest)?, 1),
                };
                let lo = num(lo)?;
                if step == 0 || lo > hi {
                    return Err(bad());
                }
                out.extend((lo..=hi).step_by(step));
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn parse_algorithms(spec: &str) -> Result<Vec<Algorithm>, LcafError> {
    if spec == "all" {
        return Ok(Algorithm::ALL.to_vec());
    }
    spec.split(',').map(|s| s.trim().parse()).collect()
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match &cli.command {
        Command::Compute(args) => cmd_compute(args, out, err),
        Command::OracleDiff(args) => cmd_oracle_diff(args, out, err),
        Command::Experiment(args) => cmd_experiment(args, out, err),
        Command::Conjecture(args) => cmd_conjecture(args, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn read_input(arg: &str, from_file: bool) -> anyhow::Result<String> {
    if !from_file {
        return Ok(arg.to_owned());
    }
    let mut s = fs::read_to_string(arg).with_context(|| format!("cannot read {arg}"))?;
    while s.ends_with('\n') || s.ends_with('\r') {
        s.pop();
    }
    Ok(s)
}

fn witness_text(alpha: &Alphabet, r: &LcafResult) -> String {
    r.witness
        .as_ref()
        .map_or_else(|| "-".to_owned(), |w| alpha.describe(w))
}

fn opt(x: Option<usize>) -> String {
    x.map_or_else(|| "-".to_owned(), |v| v.to_string())
}

pub fn cmd_compute(
    args: &ComputeArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<u8> {
    let a = read_input(&args.a, args.files)?;
    let b = read_input(&args.b, args.files)?;
    let alpha = build_alphabet(&a, &b);

    let mut algorithms = parse_algorithms(&args.algo)?;
    if algorithms.len() > 1 && alpha.size() > 2 {
        algorithms.retain(|&x| x != Algorithm::Binary);
        writeln!(
            err,
            "note: binary solver skipped, input has {} symbols",
            alpha.size()
        )?;
    }

    let mut results = Vec::with_capacity(algorithms.len());
    for &alg in &algorithms {
        results.push((alg, alg.run(&a, &b)?));
    }

    match args.format {
        Format::Text if results.len() == 1 => {
            let (alg, r) = &results[0];
            writeln!(out, "algorithm: {alg}")?;
            writeln!(out, "length: {}", r.length)?;
            writeln!(out, "p: {}", opt(r.p))?;
            writeln!(out, "q: {}", opt(r.q))?;
            writeln!(out, "witness: {}", witness_text(&alpha, r))?;
            writeln!(out, "rows_computed: {}", r.stats.rows_computed)?;
            writeln!(
                out,
                "first_vectors_computed: {}",
                r.stats.first_vectors_computed
            )?;
            writeln!(out, "rows_skipped: {}", r.stats.rows_skipped)?;
        }
        Format::Text => {
            writeln!(
                out,
                "{:<13} {:>7} {:>6} {:>6} {:>6} {:>8} {:>8}  witness",
                "algorithm", "length", "p", "q", "rows", "firstvec", "skipped"
            )?;
            for (alg, r) in &results {
                writeln!(
                    out,
                    "{:<13} {:>7} {:>6} {:>6} {:>6} {:>8} {:>8}  {}",
                    alg.name(),
                    r.length,
                    opt(r.p),
                    opt(r.q),
                    r.stats.rows_computed,
                    r.stats.first_vectors_computed,
                    r.stats.rows_skipped,
                    witness_text(&alpha, r)
                )?;
            }
        }
        Format::Json if results.len() == 1 => {
            writeln!(out, "{}", serde_json::to_string(&results[0].1)?)?;
        }
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = results
                .iter()
                .map(|(alg, r)| Ok((alg.name().to_owned(), serde_json::to_value(r)?)))
                .collect::<serde_json::Result<_>>()?;
            writeln!(out, "{}", serde_json::Value::Object(map))?;
        }
        Format::Csv => {
            writeln!(
                out,
                "algorithm,length,p,q,witness,rows_computed,first_vectors_computed,rows_skipped"
            )?;
            for (alg, r) in &results {
                let w = r.witness.as_ref().map_or(String::new(), |w| {
                    w.counts()
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                });
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    alg.name(),
                    r.length,
                    r.p.map_or(String::new(), |v| v.to_string()),
                    r.q.map_or(String::new(), |v| v.to_string()),
                    w,
                    r.stats.rows_computed,
                    r.stats.first_vectors_computed,
                    r.stats.rows_skipped
                )?;
            }
        }
    }

    if args.diagnose {
        let ta = alpha.encode(&a)?;
        let tb = alpha.encode(&b)?;
        for &alg in &algorithms {
            if !matches!(alg, Algorithm::Skip | Algorithm::FirstVector) {
                continue;
            }
            let (r, visits) = solvers::traced(&ta, &tb, alg)?;
            let over = solvers::over_skips(&visits, r.length);
            writeln!(
                err,
                "{alg}: visited lengths {:?}",
                visits.iter().map(|v| v.ell).collect::<Vec<_>>()
            )?;
            for o in over {
                writeln!(
                    err,
                    "{alg}: at ell={} literal skip {} > safe skip {}{}",
                    o.ell,
                    o.literal_skip,
                    o.sound_skip,
                    if o.loses_answer {
                        " (would miss the answer)"
                    } else {
                        ""
                    }
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}

pub type Solver = fn(&str, &str) -> crate::Result<LcafResult>;

/// First disagreement with the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub algorithm: String,
    pub a: String,
    pub b: String,
    pub expected: usize,
    pub got: usize,
    pub witness_valid: bool,
}

/// Runs `solvers` on every pair and compares with the brute-force oracle.
pub fn oracle_diff<I>(
    pairs: I,
    solvers: &[(&str, Solver)],
) -> crate::Result<(usize, Option<Mismatch>)>
where
    I: IntoIterator<Item = (String, String)>,
{
    let mut checked = 0;
    for (a, b) in pairs {
        let expected = solvers::lcaf_bruteforce(&a, &b).length;
        for (name, solve) in solvers {
            let r = solve(&a, &b)?;
            let valid = r.validate(&a, &b);
            if r.length != expected || !valid {
                return Ok((
                    checked,
                    Some(Mismatch {
                        algorithm: name.to_string(),
                        a,
                        b,
                        expected,
                        got: r.length,
                        witness_valid: valid,
                    }),
                ));
            }
        }
        checked += 1;
    }
    Ok((checked, None))
}

/// Solvers checked by `oracle-diff` for an alphabet of the given size.
pub fn default_solvers(sigma: usize) -> Vec<(&'static str, Solver)> {
    let mut v: Vec<(&'static str, Solver)> = vec![
        ("quadratic", |a, b| Ok(solvers::lcaf_quadratic(a, b))),
        ("skip", |a, b| Ok(solvers::lcaf_skip(a, b))),
        ("first-vector", |a, b| Ok(solvers::lcaf_first_vector(a, b))),
    ];
    if sigma <= 2 {
        v.push(("binary", crate::binary::lcaf_binary));
    }
    v
}

/// Oracle comparison with an explicit solver list; returns the exit code.
pub fn run_oracle_diff(
    args: &OracleDiffArgs,
    solvers: &[(&str, Solver)],
    out: &mut dyn Write,
) -> anyhow::Result<u8> {
    if args.trials == 0 {
        bail!(LcafError::Config("trials must be at least 1".into()));
    }
    let lengths = parse_lengths(&args.lengths)?;
    let alpha = Alphabet::new(args.alphabet.chars());
    if alpha.is_empty() {
        bail!(LcafError::Config("empty alphabet".into()));
    }
    let mut pairs = Vec::with_capacity(lengths.len() * args.trials);
    for &n in &lengths {
        for t in 0..args.trials as u64 {
            pairs.push(experiment::gen_iid_pair(
                n,
                &alpha,
                experiment::derive_seed(args.seed, n, t),
            )?);
        }
    }
    let (checked, mismatch) = oracle_diff(pairs, solvers)?;
    match mismatch {
        None => {
            writeln!(
                out,
                "ok: {checked} pairs, {} solvers agree with the oracle",
                solvers.len()
            )?;
            Ok(EXIT_OK)
        }
        Some(m) => {
            writeln!(
                out,
                "MISMATCH {}: a={:?} b={:?} oracle={} got={} witness_valid={}",
                m.algorithm, m.a, m.b, m.expected, m.got, m.witness_valid
            )?;
            Ok(EXIT_MISMATCH)
        }
    }
}

fn cmd_oracle_diff(
    args: &OracleDiffArgs,
    out: &mut dyn Write,
    _err: &mut dyn Write,
) -> anyhow::Result<u8> {
    let sigma = Alphabet::new(args.alphabet.chars()).size();
    run_oracle_diff(args, &default_solvers(sigma), out)
}

fn cmd_experiment(
    args: &ExperimentArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> anyhow::Result<u8> {
    let source: Source = args.source.parse()?;
    let alphabet = match source {
        Source::ExhaustiveBinary => Alphabet::binary(),
        Source::Fasta => Alphabet::dna(),
        Source::IidRandom => Alphabet::new(args.alphabet.chars()),
    };
    let mut algorithms = parse_algorithms(&args.algo)?;
    if args.algo == "all" && alphabet.size() > 2 {
        algorithms.retain(|&x| x != Algorithm::Binary);
    }
    let spec = DatasetSpec {
        source,
        lengths: parse_lengths(&args.lengths)?,
        trials: args.trials,
        alphabet,
        seed: args.seed,
        fasta: args.fasta.clone(),
    };
    spec.validate()?;
    if let Some(path) = &spec.fasta {
        let fasta = experiment::read_fasta(path)?;
        if fasta.dropped > 0 {
            writeln!(
                err,
                "{}: dropped {} non-ACGT symbols",
                path.display(),
                fasta.dropped
            )?;
        }
    }
    let table = experiment::run_experiment(&spec, &algorithms)?;
    let csv = experiment::to_csv(&table);
    match &args.output {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn cmd_conjecture(args: &ConjectureArgs, out: &mut dyn Write) -> anyhow::Result<u8> {
    let r = experiment::conjecture_check(args.n, args.trials, args.seed)?;
    writeln!(
        out,
        "n,trials,mean_lcaf,mean_gap,log2_n,mean_skip_rows,seed"
    )?;
    writeln!(
        out,
        "{},{},{},{},{},{},{}",
        r.n,
        r.trials,
        experiment::format_sig6(r.mean_lcaf),
        experiment::format_sig6(r.mean_gap),
        experiment::format_sig6(r.log2_n),
        experiment::format_sig6(r.mean_skip_rows),
        args.seed
    )?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths() {
        assert_eq!(parse_lengths("2..5").unwrap(), vec![2, 3, 4, 5]);
        assert_eq!(parse_lengths("10,20").unwrap(), vec![10, 20]);
        assert_eq!(
            parse_lengths("10..40:10,7").unwrap(),
            vec![10, 20, 30, 40, 7]
        );
        for bad in ["", "x", "5..2", "1..4:0", "1..", ","] {
            assert!(parse_lengths(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn algorithms() {
        assert_eq!(parse_algorithms("all").unwrap().len(), 5);
        assert_eq!(
            parse_algorithms("skip, first-vector").unwrap(),
            vec![Algorithm::Skip, Algorithm::FirstVector]
        );
        assert!(parse_algorithms("skip,fast").is_err());
    }
}
