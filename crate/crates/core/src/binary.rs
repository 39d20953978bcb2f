//! Binary-alphabet LCAF via min/max ones profiles.
//!
//! In a binary string the one-counts of all windows of a fixed length form a
//! contiguous integer range, so two strings share an abelian factor of length
//! `ell` exactly when their `[minOne, maxOne]` ranges at `ell` overlap. The
//! solver scans lengths downward over precomputed profiles and then recovers
//! one window per string with a plain sliding count.
//!
//! Symbol code 1 is "one". For inputs given as plain strings the smaller
//! symbol of the joint alphabet is code 0.

use std::ops::RangeInclusive;

use crate::error::{LcafError, Result};
use crate::parikh::{build_alphabet, Alphabet, ParikhVector, Text};
use crate::solvers::{LcafResult, RowStats};

/// `minOne[ell]` and `maxOne[ell]` for every window length of one string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinMaxProfile {
    n: usize,
    // index 0 holds the empty window
    min_one: Vec<u32>,
    max_one: Vec<u32>,
}

impl MinMaxProfile {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn min_one(&self, ell: usize) -> u32 {
        self.min_one[ell]
    }

    pub fn max_one(&self, ell: usize) -> u32 {
        self.max_one[ell]
    }

    pub fn range(&self, ell: usize) -> Result<RangeInclusive<u32>> {
        if ell == 0 || ell > self.n {
            return Err(LcafError::OutOfRange {
                pos: 1,
                ell,
                len: self.n,
            });
        }
        Ok(self.min_one[ell]..=self.max_one[ell])
    }
}

fn ensure_binary(s: &Text) -> Result<()> {
    if s.sigma() > 2 {
        return Err(LcafError::NotBinary(s.sigma()));
    }
    Ok(())
}

/// Profile of a string written over the symbols `'0'` and `'1'`.
pub fn min_max_profile(s: &str) -> Result<MinMaxProfile> {
    let text = Alphabet::binary().encode(s).map_err(|e| match e {
        LcafError::UnknownSymbol(c) => {
            LcafError::Input(format!("symbol {c:?} is neither '0' nor '1'"))
        }
        other => other,
    })?;
    profile(&text)
}

/// Prefix-sum sweep: for every `ell`, the extrema of `P[i + ell] - P[i]`.
pub fn profile(s: &Text) -> Result<MinMaxProfile> {
    ensure_binary(s)?;
    let n = s.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0u32);
    for &c in s.codes() {
        prefix.push(prefix.last().unwrap() + (c == 1) as u32);
    }
    let mut min_one = vec![0u32; n + 1];
    let mut max_one = vec![0u32; n + 1];
    for ell in 1..=n {
        let (lo, hi) = prefix
            .iter()
            .zip(&prefix[ell..])
            .map(|(x, y)| y - x)
            .fold((u32::MAX, 0), |(lo, hi), c| (lo.min(c), hi.max(c)));
        min_one[ell] = lo;
        max_one[ell] = hi;
    }
    Ok(MinMaxProfile {
        n,
        min_one,
        max_one,
    })
}

/// Same profile, computed on bit-sliced counters so that one word operation
/// advances 64 window positions at once.
///
/// Plane `b` holds bit `b` of every window's running one-count. Growing all
/// windows by one symbol is a ripple-carry add of the string's bitset shifted
/// by `ell - 1`; the extrema are read back with a most-significant-plane-first
/// candidate filter.
pub fn profile_packed(s: &Text) -> Result<MinMaxProfile> {
    ensure_binary(s)?;
    let n = s.len();
    let mut min_one = vec![0u32; n + 1];
    let mut max_one = vec![0u32; n + 1];
    if n == 0 {
        return Ok(MinMaxProfile {
            n,
            min_one,
            max_one,
        });
    }
    let words = n.div_ceil(64);
    let mut bits = vec![0u64; words];
    for (i, &c) in s.codes().iter().enumerate() {
        if c == 1 {
            bits[i / 64] |= 1 << (i % 64);
        }
    }
    let nplanes = (usize::BITS - n.leading_zeros()) as usize;
    let mut planes = vec![vec![0u64; words]; nplanes];
    let mut cand = vec![0u64; words];

    for ell in 1..=n {
        let (ws, bs) = ((ell - 1) / 64, (ell - 1) % 64);
        let windows = n - ell + 1;
        let live = windows.div_ceil(64);
        for w in 0..live {
            let lo = bits.get(w + ws).copied().unwrap_or(0);
            let mut carry = if bs == 0 {
                lo
            } else {
                let hi = bits.get(w + ws + 1).copied().unwrap_or(0);
                (lo >> bs) | (hi << (64 - bs))
            };
            for plane in planes.iter_mut() {
                if carry == 0 {
                    break;
                }
                let t = plane[w] & carry;
                plane[w] ^= carry;
                carry = t;
            }
        }

        let valid = |w: usize| -> u64 {
            let rem = windows - w * 64;
            if rem >= 64 {
                u64::MAX
            } else {
                (1u64 << rem) - 1
            }
        };

        (0..live).for_each(|w| cand[w] = valid(w));
        let mut hi = 0u32;
        for b in (0..nplanes).rev() {
            if (0..live).any(|w| cand[w] & planes[b][w] != 0) {
                (0..live).for_each(|w| cand[w] &= planes[b][w]);
                hi |= 1 << b;
            }
        }

        (0..live).for_each(|w| cand[w] = valid(w));
        let mut lo = 0u32;
        for b in (0..nplanes).rev() {
            if (0..live).any(|w| cand[w] & !planes[b][w] != 0) {
                (0..live).for_each(|w| cand[w] &= !planes[b][w]);
            } else {
                lo |= 1 << b;
            }
        }

        min_one[ell] = lo;
        max_one[ell] = hi;
    }
    Ok(MinMaxProfile {
        n,
        min_one,
        max_one,
    })
}

/// Common one-counts of `ell`-windows of both strings, if any.
pub fn overlap_at(
    pa: &MinMaxProfile,
    pb: &MinMaxProfile,
    ell: usize,
) -> Result<Option<RangeInclusive<u32>>> {
    let (ra, rb) = (pa.range(ell)?, pb.range(ell)?);
    let lo = *ra.start().max(rb.start());
    let hi = *ra.end().min(rb.end());
    Ok((lo <= hi).then_some(lo..=hi))
}

/// Smallest 1-based `p` such that `s[p..p+ell-1]` holds exactly `ones` ones.
pub fn find_window_with_ones(s: &Text, ell: usize, ones: usize) -> Result<usize> {
    let codes = s.codes();
    if ell == 0 || ell > codes.len() {
        return Err(LcafError::OutOfRange {
            pos: 1,
            ell,
            len: codes.len(),
        });
    }
    let mut count = codes[..ell].iter().filter(|&&c| c == 1).count();
    if count == ones {
        return Ok(1);
    }
    for i in ell..codes.len() {
        count += (codes[i] == 1) as usize;
        count -= (codes[i - ell] == 1) as usize;
        if count == ones {
            return Ok(i - ell + 2);
        }
    }
    Err(LcafError::NotFound { ell, ones })
}

/// Binary LCAF. Fails if the two strings together use more than two symbols.
pub fn lcaf_binary(a: &str, b: &str) -> Result<LcafResult> {
    let alpha = build_alphabet(a, b);
    if alpha.size() > 2 {
        return Err(LcafError::NotBinary(alpha.size()));
    }
    binary_on_text(&alpha.encode(a)?, &alpha.encode(b)?)
}

pub(crate) fn binary_on_text(a: &Text, b: &Text) -> Result<LcafResult> {
    let pa = profile(a)?;
    let pb = profile(b)?;
    let sigma = a.sigma();
    let n = a.len().min(b.len());
    for ell in (1..=n).rev() {
        let Some(common) = overlap_at(&pa, &pb, ell)? else {
            continue;
        };
        let k = *common.start();
        let p = find_window_with_ones(a, ell, k as usize)?;
        let q = find_window_with_ones(b, ell, k as usize)?;
        let witness = match sigma {
            1 => vec![ell as u32],
            _ => vec![ell as u32 - k, k],
        };
        return Ok(LcafResult {
            length: ell,
            p: Some(p),
            q: Some(q),
            witness: Some(ParikhVector::from(witness)),
            stats: RowStats::default(),
        });
    }
    Ok(LcafResult {
        length: 0,
        p: None,
        q: None,
        witness: None,
        stats: RowStats::default(),
    })
}
