//! Row-count experiments: dataset generation, instrumented solver runs and
//! aggregation into CSV tables.
//!
//! Every random choice is drawn from ChaCha8 streams derived from the
//! user seed, the string length and the trial index, so tables do not depend
//! on thread scheduling. Sums are kept as integers and divided once at the
//! end.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{LcafError, Result};
use crate::parikh::Alphabet;
use crate::solvers::{Algorithm, LcafResult};

/// Largest `n` for which all `4^n` binary pairs are enumerated.
pub const EXHAUSTIVE_CAP: usize = 10;
/// Largest `n` accepted by the exhaustive source; above [`EXHAUSTIVE_CAP`]
/// pairs are sampled uniformly instead.
pub const SAMPLED_BINARY_CAP: usize = 16;
pub const DEFAULT_TRIALS: usize = 1000;

/// Name of the always-emitted baseline: one row pair per length, no skips.
pub const NAIVE: &str = "naive";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    ExhaustiveBinary,
    IidRandom,
    Fasta,
}

impl FromStr for Source {
    type Err = LcafError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" | "exhaustive-binary" => Ok(Source::ExhaustiveBinary),
            "iid" | "random" | "iid-random" => Ok(Source::IidRandom),
            "fasta" => Ok(Source::Fasta),
            _ => Err(LcafError::Config(format!("unknown source {s:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DatasetSpec {
    pub source: Source,
    pub lengths: Vec<usize>,
    pub trials: usize,
    pub alphabet: Alphabet,
    pub seed: u64,
    pub fasta: Option<PathBuf>,
}

impl DatasetSpec {
    pub fn validate(&self) -> Result<()> {
        if self.lengths.is_empty() {
            return Err(LcafError::Config("no lengths given".into()));
        }
        if self.lengths.contains(&0) {
            return Err(LcafError::Config("lengths must be positive".into()));
        }
        match self.source {
            Source::ExhaustiveBinary => {
                if let Some(&n) = self.lengths.iter().find(|&&n| n > SAMPLED_BINARY_CAP) {
                    return Err(LcafError::Config(format!(
                        "exhaustive source supports n <= {SAMPLED_BINARY_CAP}, got {n}"
                    )));
                }
                let sampled = self.lengths.iter().any(|&n| n > EXHAUSTIVE_CAP);
                if sampled && self.trials == 0 {
                    return Err(LcafError::Config("trials must be at least 1".into()));
                }
            }
            Source::IidRandom | Source::Fasta => {
                if self.trials == 0 {
                    return Err(LcafError::Config("trials must be at least 1".into()));
                }
                if self.alphabet.is_empty() {
                    return Err(LcafError::Config("empty alphabet".into()));
                }
            }
        }
        if self.source == Source::Fasta && self.fasta.is_none() {
            return Err(LcafError::Config("fasta source needs a file".into()));
        }
        Ok(())
    }

    fn effective_alphabet_size(&self) -> usize {
        match self.source {
            Source::ExhaustiveBinary => 2,
            Source::IidRandom => self.alphabet.size(),
            Source::Fasta => 4,
        }
    }
}

/// Per-trial seed from the run seed, the length and the trial index.
pub fn derive_seed(seed: u64, n: usize, trial: u64) -> u64 {
    // splitmix64 finaliser over a simple combination
    let mut z = seed
        .wrapping_add((n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(trial.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Two independent uniform strings of length `n` over `alpha`.
pub fn gen_iid_pair(n: usize, alpha: &Alphabet, seed: u64) -> Result<(String, String)> {
    if alpha.is_empty() && n > 0 {
        return Err(LcafError::Input(
            "cannot draw symbols from an empty alphabet".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbols = alpha.symbols();
    let mut draw = || -> String {
        (0..n)
            .map(|_| symbols[rng.gen_range(0..symbols.len())])
            .collect()
    };
    let a = draw();
    let b = draw();
    Ok((a, b))
}

fn bits_to_string(bits: u64, n: usize) -> String {
    (0..n)
        .rev()
        .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Pair number `index` of the `4^n` ordered binary pairs: the high `n` bits
/// spell `a`, the low `n` bits spell `b`, most significant symbol first.
pub fn binary_pair(n: usize, index: u64) -> (String, String) {
    let mask = (1u64 << n) - 1;
    (
        bits_to_string(index >> n & mask, n),
        bits_to_string(index & mask, n),
    )
}

/// All ordered binary pairs of length `n`, in lexicographic order.
pub fn enumerate_binary_pairs(n: usize) -> Result<impl Iterator<Item = (String, String)>> {
    if n > EXHAUSTIVE_CAP {
        return Err(LcafError::Config(format!(
            "exhaustive enumeration is capped at n = {EXHAUSTIVE_CAP}, got {n}"
        )));
    }
    Ok((0..1u64 << (2 * n)).map(move |k| binary_pair(n, k)))
}

/// Concatenated, lower-cased ACGT content of a FASTA file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaSequence {
    pub sequence: String,
    /// Sequence symbols that were not a, c, g or t.
    pub dropped: usize,
}

pub fn parse_fasta(text: &str) -> FastaSequence {
    let mut sequence = String::new();
    let mut dropped = 0;
    for line in text.lines().filter(|l| !l.starts_with('>')) {
        for c in line.trim_end().chars() {
            match c.to_ascii_lowercase() {
                c @ ('a' | 'c' | 'g' | 't') => sequence.push(c),
                _ => dropped += 1,
            }
        }
    }
    FastaSequence { sequence, dropped }
}

pub fn read_fasta(path: &Path) -> Result<FastaSequence> {
    let text = fs::read_to_string(path).map_err(|e| LcafError::Io {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    Ok(parse_fasta(&text))
}

#[derive(Debug, Clone)]
pub struct FastaPairs {
    /// `(a, b, n)` grouped by length in request order, `trials` per length.
    pub pairs: Vec<(String, String, usize)>,
    pub dropped: usize,
}

/// Two random substrings of length `n` per trial and requested length.
pub fn extract_fasta_pairs(
    path: &Path,
    lengths: &[usize],
    trials: usize,
    seed: u64,
) -> Result<FastaPairs> {
    let fasta = read_fasta(path)?;
    let pairs = extract_pairs(&fasta.sequence, lengths, trials, seed).map_err(|e| match e {
        LcafError::Input(m) => LcafError::Input(format!("{}: {m}", path.display())),
        other => other,
    })?;
    Ok(FastaPairs {
        pairs,
        dropped: fasta.dropped,
    })
}

pub fn extract_pairs(
    sequence: &str,
    lengths: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<(String, String, usize)>> {
    let len = sequence.len();
    let mut out = Vec::with_capacity(lengths.len() * trials);
    for &n in lengths {
        if n > len {
            return Err(LcafError::Input(format!(
                "sequence has {len} usable symbols, cannot cut length {n}"
            )));
        }
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, n, trial as u64));
            let i = rng.gen_range(0..=len - n);
            let j = rng.gen_range(0..=len - n);
            out.push((
                sequence[i..i + n].to_owned(),
                sequence[j..j + n].to_owned(),
                n,
            ));
        }
    }
    Ok(out)
}

/// Means over all pairs of one length for one algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub n: usize,
    pub algorithm: String,
    pub mean_rows: f64,
    pub mean_first_vectors: f64,
    pub mean_total: f64,
    pub mean_lcaf: f64,
    pub log2_n: f64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Sums {
    rows: u64,
    first_vectors: u64,
    lcaf: u64,
}

impl Sums {
    fn add(&mut self, r: &LcafResult) {
        self.rows += r.stats.rows_computed;
        self.first_vectors += r.stats.first_vectors_computed;
        self.lcaf += r.length as u64;
    }
}

fn merge(mut a: Vec<Sums>, b: Vec<Sums>) -> Vec<Sums> {
    for (x, y) in a.iter_mut().zip(b) {
        x.rows += y.rows;
        x.first_vectors += y.first_vectors;
        x.lcaf += y.lcaf;
    }
    a
}

/// Runs the solvers on one pair. Slot 0 is the naive baseline, then one slot
/// per entry of `algorithms`.
fn run_pair(a: &str, b: &str, algorithms: &[Algorithm]) -> Result<Vec<Sums>> {
    let mut out = vec![Sums::default(); algorithms.len() + 1];
    out[0].add(&Algorithm::Quadratic.run(a, b)?);
    for (slot, alg) in out[1..].iter_mut().zip(algorithms) {
        slot.add(&alg.run(a, b)?);
    }
    Ok(out)
}

fn sum_pairs<I>(pairs: I, width: usize, algorithms: &[Algorithm]) -> Result<Vec<Sums>>
where
    I: ParallelIterator<Item = (String, String)>,
{
    pairs
        .map(|(a, b)| run_pair(&a, &b, algorithms))
        .try_reduce(|| vec![Sums::default(); width], |x, y| Ok(merge(x, y)))
}

/// Executes every selected algorithm (plus the naive baseline) on every pair
/// of the dataset and averages the counters per length.
///
/// Rows are ordered by `n`, then by algorithm name.
pub fn run_experiment(spec: &DatasetSpec, algorithms: &[Algorithm]) -> Result<Vec<AggregateRow>> {
    spec.validate()?;
    let mut algorithms = algorithms.to_vec();
    algorithms.sort();
    algorithms.dedup();
    if algorithms.contains(&Algorithm::Binary) && spec.effective_alphabet_size() > 2 {
        return Err(LcafError::NotBinary(spec.effective_alphabet_size()));
    }
    let width = algorithms.len() + 1;

    let fasta_pairs = match (&spec.source, &spec.fasta) {
        (Source::Fasta, Some(path)) => {
            Some(extract_fasta_pairs(path, &spec.lengths, spec.trials, spec.seed)?.pairs)
        }
        _ => None,
    };

    let mut lengths = spec.lengths.clone();
    lengths.sort_unstable();
    lengths.dedup();

    let mut table = Vec::new();
    for &n in &lengths {
        let (sums, count) = match spec.source {
            Source::ExhaustiveBinary if n <= EXHAUSTIVE_CAP => {
                let total = 1u64 << (2 * n);
                let pairs = (0..total).into_par_iter().map(|k| binary_pair(n, k));
                (sum_pairs(pairs, width, &algorithms)?, total)
            }
            Source::ExhaustiveBinary => {
                let seed = spec.seed;
                let pairs = (0..spec.trials as u64).into_par_iter().map(move |t| {
                    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, n, t));
                    let bits: u64 = rng.gen();
                    binary_pair(n, bits & ((1u64 << (2 * n)) - 1))
                });
                (sum_pairs(pairs, width, &algorithms)?, spec.trials as u64)
            }
            Source::IidRandom => {
                let (seed, alpha) = (spec.seed, &spec.alphabet);
                let pairs = (0..spec.trials as u64)
                    .into_par_iter()
                    .map(move |t| gen_iid_pair(n, alpha, derive_seed(seed, n, t)).unwrap());
                (sum_pairs(pairs, width, &algorithms)?, spec.trials as u64)
            }
            Source::Fasta => {
                let pairs: Vec<(String, String)> = fasta_pairs
                    .as_ref()
                    .expect("extracted above")
                    .iter()
                    .filter(|p| p.2 == n)
                    .map(|(a, b, _)| (a.clone(), b.clone()))
                    .collect();
                let count = pairs.len() as u64;
                (sum_pairs(pairs.into_par_iter(), width, &algorithms)?, count)
            }
        };

        let names = std::iter::once(NAIVE).chain(algorithms.iter().map(|a| a.name()));
        let mut rows: Vec<AggregateRow> = names
            .zip(&sums)
            .map(|(name, s)| {
                let d = count as f64;
                AggregateRow {
                    n,
                    algorithm: name.to_owned(),
                    mean_rows: s.rows as f64 / d,
                    mean_first_vectors: s.first_vectors as f64 / d,
                    mean_total: (s.rows + s.first_vectors) as f64 / d,
                    mean_lcaf: s.lcaf as f64 / d,
                    log2_n: (n as f64).log2(),
                    trials: count,
                    seed: spec.seed,
                }
            })
            .collect();
        rows.sort_by(|x, y| x.algorithm.cmp(&y.algorithm));
        table.extend(rows);
    }
    Ok(table)
}

/// Formats `x` with six significant digits, trailing zeros removed.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() {
            "0".into()
        } else {
            x.to_string()
        };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let scale = 10f64.powi(magnitude - 5);
    let rounded = if magnitude > 5 {
        (x / scale).round() * scale
    } else {
        x
    };
    let mut s = format!("{rounded:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    s
}

pub const CSV_HEADER: &str =
    "n,algorithm,mean_rows,mean_first_vectors,mean_total,mean_lcaf,log2_n,trials,seed";

pub fn to_csv(rows: &[AggregateRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            r.algorithm,
            format_sig6(r.mean_rows),
            format_sig6(r.mean_first_vectors),
            format_sig6(r.mean_total),
            format_sig6(r.mean_lcaf),
            format_sig6(r.log2_n),
            r.trials,
            r.seed
        );
    }
    out
}

/// Average LCAF length of i.i.d. pairs next to `log2 n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureReport {
    pub n: usize,
    pub trials: usize,
    pub mean_lcaf: f64,
    /// `n - mean_lcaf`
    pub mean_gap: f64,
    pub log2_n: f64,
    /// Mean rows computed by the skip solver on the same pairs.
    pub mean_skip_rows: f64,
}

pub fn conjecture_on_pairs(n: usize, pairs: &[(String, String)]) -> ConjectureReport {
    let (lcaf, rows) = pairs
        .par_iter()
        .map(|(a, b)| {
            let r = crate::solvers::lcaf_skip(a, b);
            (r.length as u64, r.stats.rows_computed)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    let d = pairs.len().max(1) as f64;
    let mean_lcaf = lcaf as f64 / d;
    ConjectureReport {
        n,
        trials: pairs.len(),
        mean_lcaf,
        mean_gap: n as f64 - mean_lcaf,
        log2_n: (n as f64).log2(),
        mean_skip_rows: rows as f64 / d,
    }
}

/// Empirical gap `n - E[LCAF]` for uniform binary pairs.
pub fn conjecture_check(n: usize, trials: usize, seed: u64) -> Result<ConjectureReport> {
    if trials == 0 {
        return Err(LcafError::Config("trials must be at least 1".into()));
    }
    let alpha = Alphabet::binary();
    let pairs = (0..trials as u64)
        .map(|t| gen_iid_pair(n, &alpha, derive_seed(seed, n, t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(conjecture_on_pairs(n, &pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn iid_pairs() {
        let dna = Alphabet::dna();
        assert_eq!(
            gen_iid_pair(0, &dna, 1).unwrap(),
            (String::new(), String::new())
        );
        assert_eq!(
            gen_iid_pair(50, &dna, 9).unwrap(),
            gen_iid_pair(50, &dna, 9).unwrap()
        );
        assert_ne!(
            gen_iid_pair(50, &dna, 9).unwrap(),
            gen_iid_pair(50, &dna, 10).unwrap()
        );
        let (a, b) = gen_iid_pair(50, &dna, 3).unwrap();
        assert!(a.chars().chain(b.chars()).all(|c| "acgt".contains(c)));
        assert!(gen_iid_pair(3, &Alphabet::new([]), 1).is_err());
        assert!(gen_iid_pair(0, &Alphabet::new([]), 1).is_ok());
    }

    #[test]
    fn iid_binary_is_balanced() {
        // Binomial(10^4, 1/2): sd = 50, allow 5 sd.
        let (a, b) = gen_iid_pair(10_000, &Alphabet::binary(), 0xC0FFEE).unwrap();
        for s in [a, b] {
            let ones = s.chars().filter(|&c| c == '1').count() as i64;
            assert!((ones - 5000).abs() <= 250, "ones = {ones}");
        }
    }

    #[test]
    fn enumeration() {
        let one: Vec<_> = enumerate_binary_pairs(1).unwrap().collect();
        let expect: Vec<(String, String)> = [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert_eq!(one, expect);
        assert_eq!(enumerate_binary_pairs(2).unwrap().count(), 16);
        let three: HashSet<_> = enumerate_binary_pairs(3).unwrap().collect();
        assert_eq!(three.len(), 64);
        assert!(enumerate_binary_pairs(EXHAUSTIVE_CAP + 1).is_err());
    }

    #[test]
    fn fasta_parsing() {
        let f = parse_fasta(">chr1 test\nACGTN\nacgt\n>chr2\nnnAC\r\n");
        assert_eq!(f.sequence, "acgtacgtac");
        assert_eq!(f.dropped, 3);
    }

    #[test]
    fn fasta_extraction() {
        let seq = "aacgcctaatcg";
        let pairs = extract_pairs(seq, &[4], 1, 7).unwrap();
        assert_eq!(pairs.len(), 1);
        let (a, b, n) = &pairs[0];
        assert_eq!((a.len(), b.len(), *n), (4, 4, 4));
        assert!(seq.contains(a.as_str()) && seq.contains(b.as_str()));
        assert_eq!(pairs, extract_pairs(seq, &[4], 1, 7).unwrap());
        assert!(matches!(
            extract_pairs(seq, &[13], 1, 7),
            Err(LcafError::Input(_))
        ));
        assert!(matches!(
            extract_fasta_pairs(Path::new("/nonexistent/x.fa"), &[4], 1, 1),
            Err(LcafError::Io { .. })
        ));
    }

    #[test]
    fn sig6() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(1.0), "1");
        assert_eq!(format_sig6(2.5), "2.5");
        assert_eq!(format_sig6(1.0 / 3.0), "0.333333");
        assert_eq!(format_sig6(10f64.log2()), "3.32193");
        assert_eq!(format_sig6(123.456789), "123.457");
        assert_eq!(format_sig6(1234567.0), "1234570");
        assert_eq!(format_sig6(0.000123456789), "0.000123457");
    }

    #[test]
    fn exhaustive_n2_hand_trace() {
        // Of the 16 pairs of length 2, the skip solver computes two rows only
        // when the top row misses without a gap; every other pair needs one.
        let spec = DatasetSpec {
            source: Source::ExhaustiveBinary,
            lengths: vec![2],
            trials: 1,
            alphabet: Alphabet::binary(),
            seed: 0,
            fasta: None,
        };
        let table = run_experiment(&spec, &[Algorithm::Skip]).unwrap();
        assert_eq!(table.len(), 2);
        let naive = &table[0];
        let skip = &table[1];
        assert_eq!(
            (naive.algorithm.as_str(), skip.algorithm.as_str()),
            ("naive", "skip")
        );
        assert_eq!(skip.trials, 16);
        // Hand trace: top row hits for the 6 pairs with equal one-counts.
        // ("00","11") and ("11","00") jump straight to 0 (gap 2): 1 row.
        // The 8 pairs with counts differing by one visit ell = 2 and 1 and
        // hit at 1: 2 rows. Total 6 + 2 + 16 = 24 rows.
        assert_eq!(skip.mean_rows, 24.0 / 16.0);
        // Naive: 6 + 2 * 2 + 8 * 2 = 26.
        assert_eq!(naive.mean_rows, 26.0 / 16.0);
        assert_eq!(skip.mean_lcaf, (6.0 * 2.0 + 8.0) / 16.0);
    }

    #[test]
    fn identical_pairs_need_one_row() {
        let pairs: Vec<_> = (0..20)
            .map(|t| {
                let (a, _) = gen_iid_pair(32, &Alphabet::dna(), t).unwrap();
                (a.clone(), a)
            })
            .collect();
        for (a, b) in &pairs {
            assert_eq!(crate::solvers::lcaf_skip(a, b).stats.rows_computed, 1);
        }
        let rep = conjecture_on_pairs(32, &pairs);
        assert_eq!(rep.mean_gap, 0.0);
        assert_eq!(rep.mean_skip_rows, 1.0);

        let opposite = vec![("0".repeat(16), "1".repeat(16)); 3];
        assert_eq!(conjecture_on_pairs(16, &opposite).mean_gap, 16.0);
    }

    #[test]
    fn spec_validation() {
        let mut spec = DatasetSpec {
            source: Source::ExhaustiveBinary,
            lengths: vec![20],
            trials: 10,
            alphabet: Alphabet::binary(),
            seed: 1,
            fasta: None,
        };
        assert!(matches!(spec.validate(), Err(LcafError::Config(_))));
        spec.lengths = vec![12];
        assert!(spec.validate().is_ok());
        spec.source = Source::IidRandom;
        spec.trials = 0;
        assert!(spec.validate().is_err());
        spec.trials = 3;
        spec.source = Source::Fasta;
        assert!(spec.validate().is_err());
        spec.source = Source::IidRandom;
        spec.alphabet = Alphabet::dna();
        assert!(matches!(
            run_experiment(&spec, &[Algorithm::Binary]),
            Err(LcafError::NotBinary(4))
        ));
    }
}
