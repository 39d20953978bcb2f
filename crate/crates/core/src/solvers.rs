//! LCAF solvers over arbitrary alphabets.
//!
//! All descending solvers start at `ell = min(|a|, |b|)` and stop at the first
//! length whose two rows share a Parikh vector. The naive (quadratic) solver
//! steps down one length at a time; the skip solver jumps over lengths whose
//! per-letter count ranges provably cannot meet; the first-vector solver does
//! the same jumps but seeds each visited row from a prefix vector that is
//! shrunk in O(1) per skipped length.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::binary;
use crate::error::{LcafError, Result};
use crate::parikh::{
    build_alphabet, compute_row, compute_row_seeded, intersect_sorted, parikh, row_extrema,
    shrink_in_place, sort_row, ComponentExtrema, ParikhVector, Text,
};

/// Work counters of one solver run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowStats {
    /// Lengths for which both rows were materialised.
    pub rows_computed: u64,
    /// O(1) prefix-vector shrink steps, counted once per string.
    pub first_vectors_computed: u64,
    /// Lengths `>= 1` that were jumped over without computing rows.
    pub rows_skipped: u64,
}

/// Length of a longest common abelian factor plus one occurrence of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcafResult {
    pub length: usize,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub witness: Option<ParikhVector>,
    pub stats: RowStats,
}

impl LcafResult {
    fn empty(stats: RowStats) -> Self {
        LcafResult {
            length: 0,
            p: None,
            q: None,
            witness: None,
            stats,
        }
    }

    fn hit(length: usize, p: usize, q: usize, witness: ParikhVector, stats: RowStats) -> Self {
        LcafResult {
            length,
            p: Some(p),
            q: Some(q),
            witness: Some(witness),
            stats,
        }
    }

    /// Checks the witness against both strings by direct counting.
    pub fn validate(&self, a: &str, b: &str) -> bool {
        let alpha = build_alphabet(a, b);
        let (Ok(ta), Ok(tb)) = (alpha.encode(a), alpha.encode(b)) else {
            return false;
        };
        self.validate_text(&ta, &tb)
    }

    pub(crate) fn validate_text(&self, a: &Text, b: &Text) -> bool {
        match (self.length, self.p, self.q, &self.witness) {
            (0, None, None, None) => true,
            (0, ..) => false,
            (ell, Some(p), Some(q), Some(w)) => {
                let (Ok(va), Ok(vb)) = (parikh(a, p, ell), parikh(b, q, ell)) else {
                    return false;
                };
                &va == w && &vb == w
            }
            _ => false,
        }
    }
}

fn encode_pair(a: &str, b: &str) -> (Text, Text) {
    let alpha = build_alphabet(a, b);
    let ta = alpha.encode(a).expect("alphabet covers both inputs");
    let tb = alpha.encode(b).expect("alphabet covers both inputs");
    (ta, tb)
}

/// Exhaustive reference solver: every `(ell, p, q)` with vectors counted from
/// scratch. Reports the smallest `p`, then the smallest `q`.
pub fn lcaf_bruteforce(a: &str, b: &str) -> LcafResult {
    let (ta, tb) = encode_pair(a, b);
    bruteforce(&ta, &tb)
}

pub fn bruteforce(a: &Text, b: &Text) -> LcafResult {
    let n = a.len().min(b.len());
    for ell in (1..=n).rev() {
        let vb: Vec<ParikhVector> = (1..=b.len() - ell + 1)
            .map(|q| parikh(b, q, ell).unwrap())
            .collect();
        for p in 1..=a.len() - ell + 1 {
            let va = parikh(a, p, ell).unwrap();
            if let Some(k) = vb.iter().position(|v| *v == va) {
                return LcafResult::hit(ell, p, k + 1, va, RowStats::default());
            }
        }
    }
    LcafResult::empty(RowStats::default())
}

/// Provably safe number of lengths to step down after a miss.
///
/// For each letter the two count ranges `[min, max]` are compared; if they are
/// disjoint by `g`, no row within the next `g - 1` shorter lengths can match
/// because one window length less moves every count by at most one. The result
/// is never below 1.
pub fn skip_amount(ea: &ComponentExtrema, eb: &ComponentExtrema) -> usize {
    let gap = (0..ea.min.len())
        .map(|j| {
            let ab = ea.min[j] as i64 - eb.max[j] as i64;
            let ba = eb.min[j] as i64 - ea.max[j] as i64;
            ab.max(ba).max(0)
        })
        .max()
        .unwrap_or(0);
    gap.max(1) as usize
}

/// The skip formula exactly as the original pseudocode states it: over the
/// first `sigma - 1` letters, `|min_x - max_y|` when `max_x >= min_y`, else
/// `|min_y - max_x|`. It can exceed [`skip_amount`] when ranges overlap, so it
/// is only used to diagnose over-skips.
pub fn literal_skip_amount(ex: &ComponentExtrema, ey: &ComponentExtrema) -> usize {
    let sigma = ex.min.len();
    (0..sigma.saturating_sub(1))
        .map(|j| {
            let (min_x, max_x) = (ex.min[j] as i64, ex.max[j] as i64);
            let (min_y, max_y) = (ey.min[j] as i64, ey.max[j] as i64);
            if max_x >= min_y {
                (min_x - max_y).unsigned_abs()
            } else {
                (min_y - max_x).unsigned_abs()
            }
        })
        .max()
        .unwrap_or(0) as usize
}

/// One length examined by a descending solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Visit {
    pub ell: usize,
    pub hit: bool,
    /// Lengths stepped down after this visit; 0 on a hit.
    pub skip: usize,
    /// What the literal pseudocode formula would have stepped; 0 on a hit.
    pub literal_skip: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Strategy {
    Naive,
    Skip,
    FirstVector,
}

fn descend(
    a: &Text,
    b: &Text,
    strategy: Strategy,
    mut trace: Option<&mut Vec<Visit>>,
) -> LcafResult {
    let n = a.len().min(b.len());
    let mut stats = RowStats::default();
    let mut ell = n;

    // Prefix vectors for the first-vector trick, valid for `prefix_ell`.
    let mut prefix_ell = n;
    let mut prefixes = match strategy {
        Strategy::FirstVector if n > 0 => {
            Some((parikh(a, 1, n).unwrap(), parikh(b, 1, n).unwrap()))
        }
        _ => None,
    };

    while ell > 0 {
        let (row_a, row_b) = match prefixes.as_mut() {
            Some((fa, fb)) => {
                while prefix_ell > ell {
                    shrink_in_place(fa, a, prefix_ell).unwrap();
                    shrink_in_place(fb, b, prefix_ell).unwrap();
                    prefix_ell -= 1;
                    stats.first_vectors_computed += 1;
                }
                (
                    compute_row_seeded(a, fa).unwrap(),
                    compute_row_seeded(b, fb).unwrap(),
                )
            }
            None => (compute_row(a, ell).unwrap(), compute_row(b, ell).unwrap()),
        };
        stats.rows_computed += 1;

        if let Some(hit) = intersect_sorted(&sort_row(&row_a), &sort_row(&row_b)) {
            if let Some(t) = trace.as_deref_mut() {
                t.push(Visit {
                    ell,
                    hit: true,
                    skip: 0,
                    literal_skip: 0,
                });
            }
            return LcafResult::hit(ell, hit.p, hit.q, hit.witness, stats);
        }

        let (skip, literal_skip) = match strategy {
            Strategy::Naive => (1, 0),
            Strategy::Skip | Strategy::FirstVector => {
                let ea = row_extrema(&row_a).unwrap();
                let eb = row_extrema(&row_b).unwrap();
                (skip_amount(&ea, &eb), literal_skip_amount(&ea, &eb))
            }
        };
        debug_assert!(skip <= ell);
        if let Some(t) = trace.as_deref_mut() {
            t.push(Visit {
                ell,
                hit: false,
                skip,
                literal_skip,
            });
        }
        stats.rows_skipped += (skip - 1) as u64;
        ell -= skip;
    }
    LcafResult::empty(stats)
}

/// Naive descending solver: one row pair per length, sorted and intersected.
pub fn lcaf_quadratic(a: &str, b: &str) -> LcafResult {
    let (ta, tb) = encode_pair(a, b);
    quadratic(&ta, &tb)
}

pub fn quadratic(a: &Text, b: &Text) -> LcafResult {
    descend(a, b, Strategy::Naive, None)
}

/// Descending solver with the skip trick.
pub fn lcaf_skip(a: &str, b: &str) -> LcafResult {
    let (ta, tb) = encode_pair(a, b);
    skip(&ta, &tb)
}

pub fn skip(a: &Text, b: &Text) -> LcafResult {
    descend(a, b, Strategy::Skip, None)
}

/// Skip trick plus prefix-vector seeding of every visited row.
pub fn lcaf_first_vector(a: &str, b: &str) -> LcafResult {
    let (ta, tb) = encode_pair(a, b);
    first_vector(&ta, &tb)
}

pub fn first_vector(a: &Text, b: &Text) -> LcafResult {
    descend(a, b, Strategy::FirstVector, None)
}

/// Runs a descending solver and records every visited length.
pub fn traced(a: &Text, b: &Text, algorithm: Algorithm) -> Result<(LcafResult, Vec<Visit>)> {
    let strategy = match algorithm {
        Algorithm::Quadratic => Strategy::Naive,
        Algorithm::Skip => Strategy::Skip,
        Algorithm::FirstVector => Strategy::FirstVector,
        other => {
            return Err(LcafError::Config(format!(
                "{other} is not a descending row solver"
            )))
        }
    };
    let mut visits = Vec::new();
    let result = descend(a, b, strategy, Some(&mut visits));
    Ok((result, visits))
}

/// A visited length where the literal pseudocode skip would jump further than
/// the safe skip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverSkip {
    pub ell: usize,
    pub sound_skip: usize,
    pub literal_skip: usize,
    /// The literal jump would land below the true answer.
    pub loses_answer: bool,
}

/// Compares safe and literal skips along a traced run.
pub fn over_skips(visits: &[Visit], answer: usize) -> Vec<OverSkip> {
    visits
        .iter()
        .filter(|v| !v.hit && v.literal_skip > v.skip)
        .map(|v| OverSkip {
            ell: v.ell,
            sound_skip: v.skip,
            literal_skip: v.literal_skip,
            loses_answer: (v.ell as i64 - v.literal_skip as i64) < answer as i64,
        })
        .collect()
}

/// Algorithm selector shared by the CLI and the experiment harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Oracle,
    Quadratic,
    Binary,
    Skip,
    FirstVector,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Oracle,
        Algorithm::Quadratic,
        Algorithm::Binary,
        Algorithm::Skip,
        Algorithm::FirstVector,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Oracle => "oracle",
            Algorithm::Quadratic => "quadratic",
            Algorithm::Binary => "binary",
            Algorithm::Skip => "skip",
            Algorithm::FirstVector => "first-vector",
        }
    }

    /// Solves on already encoded strings. Fails only for `Binary` on an
    /// alphabet of more than two symbols.
    pub fn solve(self, a: &Text, b: &Text) -> Result<LcafResult> {
        Ok(match self {
            Algorithm::Oracle => bruteforce(a, b),
            Algorithm::Quadratic => quadratic(a, b),
            Algorithm::Binary => binary::binary_on_text(a, b)?,
            Algorithm::Skip => skip(a, b),
            Algorithm::FirstVector => first_vector(a, b),
        })
    }

    pub fn run(self, a: &str, b: &str) -> Result<LcafResult> {
        let (ta, tb) = encode_pair(a, b);
        self.solve(&ta, &tb)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = LcafError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .or(match s {
                "first_vector" | "fv" => Some(Algorithm::FirstVector),
                "bruteforce" => Some(Algorithm::Oracle),
                _ => None,
            })
            .ok_or_else(|| LcafError::Config(format!("unknown algorithm {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parikh::{compute_row, intersect_rows, Alphabet};

    fn ext(min: &[u32], max: &[u32]) -> ComponentExtrema {
        ComponentExtrema {
            min: min.to_vec(),
            max: max.to_vec(),
        }
    }

    #[test]
    fn bruteforce_examples() {
        let r = lcaf_bruteforce("ab", "ba");
        assert_eq!((r.length, r.p, r.q), (2, Some(1), Some(1)));
        assert_eq!(lcaf_bruteforce("000", "111").length, 0);
        assert_eq!(lcaf_bruteforce("000", "111").witness, None);
        let r = lcaf_bruteforce("aab", "abb");
        assert_eq!((r.length, r.p, r.q), (2, Some(2), Some(1)));
        assert_eq!(r.witness.unwrap().counts(), &[1, 1]);
        assert_eq!(lcaf_bruteforce("", "abc").length, 0);
    }

    #[test]
    fn quadratic_examples() {
        let s = "aacgcctaatcg";
        let r = lcaf_quadratic(s, s);
        assert_eq!((r.length, r.p, r.q), (12, Some(1), Some(1)));
        assert_eq!(lcaf_quadratic("0110", "1001").length, 4);
        let r = lcaf_quadratic("0000", "1111");
        assert_eq!(r.length, 0);
        assert_eq!(r.stats.rows_computed, 4);
        assert_eq!(r.stats.rows_skipped, 0);
    }

    #[test]
    fn skip_amounts() {
        // "0000" vs "1111" at ell = 4, components (zeros, ones)
        assert_eq!(
            skip_amount(&ext(&[4, 0], &[4, 0]), &ext(&[0, 4], &[0, 4])),
            4
        );
        assert_eq!(
            skip_amount(&ext(&[1, 1], &[3, 3]), &ext(&[2, 0], &[4, 2])),
            1
        );
        // ones ranges [0,1] vs [3,5]
        assert_eq!(skip_amount(&ext(&[0], &[1]), &ext(&[3], &[5])), 2);
        assert_eq!(skip_amount(&ext(&[3], &[5]), &ext(&[0], &[1])), 2);
    }

    #[test]
    fn literal_skip_can_exceed_safe_skip() {
        // Overlapping ranges: literal formula reports |min_x - max_y| = 4.
        let x = ext(&[0, 0], &[4, 4]);
        let y = ext(&[2, 0], &[4, 2]);
        assert_eq!(skip_amount(&x, &y), 1);
        assert_eq!(literal_skip_amount(&x, &y), 4);
    }

    #[test]
    fn skip_examples() {
        let r = lcaf_skip("0000", "1111");
        assert_eq!(r.length, 0);
        assert_eq!(r.stats.rows_computed, 1);
        assert_eq!(r.stats.rows_skipped, 3);

        let r = lcaf_skip("gattaca", "gattaca");
        assert_eq!((r.length, r.stats.rows_computed), (7, 1));

        let r = lcaf_skip("aab", "abb");
        assert_eq!(r.length, 2);
        assert!(r.validate("aab", "abb"));
    }

    #[test]
    fn first_vector_example_shrinks() {
        // With the same string the top row hits and nothing is shrunk.
        let s = "aacgcctaatcg";
        let r = lcaf_first_vector(s, s);
        assert_eq!(r, lcaf_skip(s, s));
        assert_eq!(r.stats.first_vectors_computed, 0);

        // Jump 12 -> 9 must go through three shrink steps.
        let alpha = Alphabet::dna();
        let t = alpha.encode(s).unwrap();
        let mut v = parikh(&t, 1, 12).unwrap();
        let mut seen = Vec::new();
        for ell in (10..=12).rev() {
            shrink_in_place(&mut v, &t, ell).unwrap();
            seen.push(v.clone());
        }
        assert_eq!(seen[0].counts(), &[4, 4, 1, 2]);
        assert_eq!(seen[2], parikh(&t, 1, 9).unwrap());
    }

    #[test]
    fn first_vector_counts_one_shrink_per_length() {
        let r = lcaf_first_vector("0000", "1111");
        assert_eq!(r.stats.rows_computed, 1);
        // Only ell = 4 is visited; the jump lands on 0 and nothing is seeded.
        assert_eq!(r.stats.first_vectors_computed, 0);

        let a = "aaaaaaaabbbbbbbb";
        let b = "bbbbbbbbbbbbbbba";
        let (rs, visits) = traced(
            &build_alphabet(a, b).encode(a).unwrap(),
            &build_alphabet(a, b).encode(b).unwrap(),
            Algorithm::FirstVector,
        )
        .unwrap();
        let last = visits.last().unwrap().ell;
        assert_eq!(rs.stats.first_vectors_computed as usize, a.len() - last);
    }

    #[test]
    fn over_skip_diagnostic() {
        let visits = [
            Visit {
                ell: 10,
                hit: false,
                skip: 1,
                literal_skip: 4,
            },
            Visit {
                ell: 9,
                hit: true,
                skip: 0,
                literal_skip: 0,
            },
        ];
        let d = over_skips(&visits, 9);
        assert_eq!(d.len(), 1);
        assert!(d[0].loses_answer);
    }

    #[test]
    fn skipped_rows_are_really_empty() {
        let a = "aaaaaaaaaaaab";
        let b = "bbbbbbbbbbbba";
        let alpha = build_alphabet(a, b);
        let (ta, tb) = (alpha.encode(a).unwrap(), alpha.encode(b).unwrap());
        let (res, visits) = traced(&ta, &tb, Algorithm::Skip).unwrap();
        assert_eq!(res.length, 2);
        for v in visits.iter().filter(|v| !v.hit) {
            for d in 1..v.skip {
                let ell = v.ell - d;
                let hit = intersect_rows(
                    &compute_row(&ta, ell).unwrap(),
                    &compute_row(&tb, ell).unwrap(),
                )
                .unwrap();
                assert!(hit.is_none(), "skipped ell={ell} has a match");
            }
        }
    }

    #[test]
    fn algorithm_names_round_trip() {
        for alg in Algorithm::ALL {
            assert_eq!(alg.name().parse::<Algorithm>().unwrap(), alg);
        }
        assert!("simd".parse::<Algorithm>().is_err());
        assert!(traced(
            &Alphabet::binary().encode("01").unwrap(),
            &Alphabet::binary().encode("10").unwrap(),
            Algorithm::Oracle
        )
        .is_err());
    }
}
