//! Alphabets, Parikh vectors and rows of window vectors.
//!
//! A row for window length `ell` holds the Parikh vector of every factor
//! `s[i..i+ell-1]`, `1 <= i <= |s| - ell + 1`. Rows are built with one
//! left-to-right sliding pass, sorted with a least-significant-component
//! radix sort and intersected with a merge scan.
//!
//! Positions are 1-based everywhere in the public surface.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LcafError, Result};

/// Bijection between the distinct input symbols and dense indices `0..sigma`.
///
/// Symbols are kept in ascending code-point order so that the same pair of
/// strings always yields the same indexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
    index: HashMap<char, u32>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Self {
        let mut symbols: Vec<char> = symbols.into_iter().collect();
        symbols.sort_unstable();
        symbols.dedup();
        let index = symbols
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as u32))
            .collect();
        Alphabet { symbols, index }
    }

    pub fn binary() -> Self {
        Alphabet::new(['0', '1'])
    }

    pub fn dna() -> Self {
        Alphabet::new(['a', 'c', 'g', 't'])
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, idx: usize) -> Option<char> {
        self.symbols.get(idx).copied()
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.index.get(&c).map(|&i| i as usize)
    }

    /// Maps every symbol of `s` to its dense index.
    pub fn encode(&self, s: &str) -> Result<Text> {
        let codes = s
            .chars()
            .map(|c| {
                self.index
                    .get(&c)
                    .copied()
                    .ok_or(LcafError::UnknownSymbol(c))
            })
            .collect::<Result<Vec<u32>>>()?;
        Ok(Text {
            codes,
            sigma: self.size(),
        })
    }

    /// Inverse of [`Alphabet::encode`].
    pub fn decode(&self, text: &Text) -> String {
        text.codes
            .iter()
            .map(|&c| self.symbols[c as usize])
            .collect()
    }

    /// Renders a vector as `(a:4, c:4, g:2, t:2)`.
    pub fn describe(&self, v: &ParikhVector) -> String {
        let parts: Vec<String> = v
            .counts()
            .iter()
            .zip(&self.symbols)
            .map(|(n, c)| format!("{c}:{n}"))
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// The alphabet of all symbols occurring in `a` or `b`.
pub fn build_alphabet(a: &str, b: &str) -> Alphabet {
    Alphabet::new(a.chars().chain(b.chars()))
}

/// A string recoded as dense symbol indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Text {
    codes: Vec<u32>,
    sigma: usize,
}

impl Text {
    /// Panics if a code is not below `sigma`.
    pub fn from_codes(codes: Vec<u32>, sigma: usize) -> Self {
        assert!(
            codes.iter().all(|&c| (c as usize) < sigma),
            "code out of alphabet"
        );
        Text { codes, sigma }
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    /// Symbol index at 1-based position `pos`.
    pub fn at(&self, pos: usize) -> u32 {
        self.codes[pos - 1]
    }
}

/// Per-letter occurrence counts of a factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParikhVector(Vec<u32>);

impl ParikhVector {
    pub fn zeros(sigma: usize) -> Self {
        ParikhVector(vec![0; sigma])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn sigma(&self) -> usize {
        self.0.len()
    }

    /// Length of the factor described, i.e. the sum of the counts.
    pub fn total(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }
}

impl From<Vec<u32>> for ParikhVector {
    fn from(v: Vec<u32>) -> Self {
        ParikhVector(v)
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn check_window(len: usize, pos: usize, ell: usize) -> Result<()> {
    if pos == 0 || pos - 1 + ell > len {
        return Err(LcafError::OutOfRange { pos, ell, len });
    }
    Ok(())
}

/// Parikh vector of `s[pos..pos+ell-1]`, counted directly.
pub fn parikh(s: &Text, pos: usize, ell: usize) -> Result<ParikhVector> {
    check_window(s.len(), pos, ell)?;
    let mut counts = vec![0u32; s.sigma];
    for &c in &s.codes[pos - 1..pos - 1 + ell] {
        counts[c as usize] += 1;
    }
    Ok(ParikhVector(counts))
}

/// All Parikh vectors of the `ell`-windows of one string, stored flat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    ell: usize,
    sigma: usize,
    data: Vec<u32>,
}

impl Row {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Number of windows.
    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.sigma).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Vector of the window starting at 1-based position `pos`.
    pub fn vector(&self, pos: usize) -> &[u32] {
        let k = (pos - 1) * self.sigma;
        &self.data[k..k + self.sigma]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.data.chunks_exact(self.sigma.max(1))
    }

    pub fn to_vectors(&self) -> Vec<ParikhVector> {
        self.iter().map(|v| ParikhVector(v.to_vec())).collect()
    }
}

/// Row `ell` of `s`, in one sliding pass.
pub fn compute_row(s: &Text, ell: usize) -> Result<Row> {
    if ell == 0 || ell > s.len() {
        return Err(LcafError::OutOfRange {
            pos: 1,
            ell,
            len: s.len(),
        });
    }
    let first = parikh(s, 1, ell)?;
    Ok(slide_from_first(s, ell, first.counts()))
}

/// Builds row `ell` from an already known first vector `parikh(s, 1, ell)`.
pub fn compute_row_seeded(s: &Text, first: &ParikhVector) -> Result<Row> {
    let ell = first.total();
    if ell == 0 || ell > s.len() || first.sigma() != s.sigma {
        return Err(LcafError::OutOfRange {
            pos: 1,
            ell,
            len: s.len(),
        });
    }
    Ok(slide_from_first(s, ell, first.counts()))
}

fn slide_from_first(s: &Text, ell: usize, first: &[u32]) -> Row {
    let sigma = s.sigma;
    let windows = s.len() - ell + 1;
    let mut data = Vec::with_capacity(windows * sigma);
    let mut cur = first.to_vec();
    data.extend_from_slice(&cur);
    for i in 1..windows {
        cur[s.codes[i - 1] as usize] -= 1;
        cur[s.codes[i + ell - 1] as usize] += 1;
        data.extend_from_slice(&cur);
    }
    Row { ell, sigma, data }
}

/// Componentwise minimum and maximum over the vectors of one row.
///
/// These are ranges per letter, not Parikh vectors themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentExtrema {
    pub min: Vec<u32>,
    pub max: Vec<u32>,
}

pub fn row_extrema(row: &Row) -> Result<ComponentExtrema> {
    let mut vectors = row.iter();
    let first = vectors.next().ok_or(LcafError::EmptyRow)?;
    let mut min = first.to_vec();
    let mut max = first.to_vec();
    for v in vectors {
        for j in 0..v.len() {
            min[j] = min[j].min(v[j]);
            max[j] = max[j].max(v[j]);
        }
    }
    Ok(ComponentExtrema { min, max })
}

/// Turns `parikh(s, 1, ell)` into `parikh(s, 1, ell - 1)` by removing `s[ell]`.
pub fn shrink_first_vector(v: &ParikhVector, s: &Text, ell: usize) -> Result<ParikhVector> {
    let mut out = v.clone();
    shrink_in_place(&mut out, s, ell)?;
    Ok(out)
}

pub(crate) fn shrink_in_place(v: &mut ParikhVector, s: &Text, ell: usize) -> Result<()> {
    if ell == 0 || ell > s.len() {
        return Err(LcafError::OutOfRange {
            pos: 1,
            ell,
            len: s.len(),
        });
    }
    let c = s.at(ell) as usize;
    if v.0.get(c).copied().unwrap_or(0) == 0 {
        return Err(LcafError::Input(format!(
            "vector {v} is not the length-{ell} prefix vector"
        )));
    }
    v.0[c] -= 1;
    Ok(())
}

/// A row together with the permutation that sorts its windows.
#[derive(Debug, Clone)]
pub struct SortedRow<'a> {
    row: &'a Row,
    order: Vec<u32>,
}

impl<'a> SortedRow<'a> {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// 1-based window positions in sorted order.
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.order.iter().map(|&i| i as usize + 1)
    }

    /// `(vector, 1-based position)` pairs in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = (&'a [u32], usize)> + '_ {
        self.order
            .iter()
            .map(move |&i| (self.row.vector(i as usize + 1), i as usize + 1))
    }

    fn vector_at(&self, rank: usize) -> &'a [u32] {
        self.row.vector(self.order[rank] as usize + 1)
    }

    fn position_at(&self, rank: usize) -> usize {
        self.order[rank] as usize + 1
    }
}

/// Stable sort of a row's windows in lexicographic order (first letter most
/// significant). LSD radix sort: one counting sort per component, keys in
/// `0..=ell`.
pub fn sort_row(row: &Row) -> SortedRow<'_> {
    let n = row.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut scratch = vec![0u32; n];
    let mut counts = vec![0usize; row.ell + 2];
    for j in (0..row.sigma).rev() {
        counts.iter_mut().for_each(|c| *c = 0);
        for &i in &order {
            counts[row.data[i as usize * row.sigma + j] as usize + 1] += 1;
        }
        for k in 1..counts.len() {
            counts[k] += counts[k - 1];
        }
        for &i in &order {
            let key = row.data[i as usize * row.sigma + j] as usize;
            scratch[counts[key]] = i;
            counts[key] += 1;
        }
        std::mem::swap(&mut order, &mut scratch);
    }
    SortedRow { row, order }
}

/// A vector shared by two rows and where it occurs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Intersection {
    pub p: usize,
    pub q: usize,
    pub witness: ParikhVector,
}

/// Finds a vector occurring in both rows.
///
/// Among all common vectors the one with the smallest position in `a` is
/// reported, together with its smallest position in `b`.
pub fn intersect_rows(a: &Row, b: &Row) -> Result<Option<Intersection>> {
    if a.ell != b.ell {
        return Err(LcafError::LengthMismatch(a.ell, b.ell));
    }
    if a.sigma != b.sigma {
        return Err(LcafError::Input(format!(
            "rows over alphabets of different size ({} vs {})",
            a.sigma, b.sigma
        )));
    }
    Ok(intersect_sorted(&sort_row(a), &sort_row(b)))
}

pub(crate) fn intersect_sorted(sa: &SortedRow<'_>, sb: &SortedRow<'_>) -> Option<Intersection> {
    let (mut i, mut k) = (0, 0);
    let mut best: Option<(usize, usize, usize)> = None;
    while i < sa.len() && k < sb.len() {
        let (va, vb) = (sa.vector_at(i), sb.vector_at(k));
        match va.cmp(vb) {
            Ordering::Less => i += 1,
            Ordering::Greater => k += 1,
            Ordering::Equal => {
                // Stable sort: the head of each group carries its smallest position.
                let (p, q) = (sa.position_at(i), sb.position_at(k));
                if best.is_none_or(|(bp, _, _)| p < bp) {
                    best = Some((p, q, i));
                }
                while i < sa.len() && sa.vector_at(i) == va {
                    i += 1;
                }
                while k < sb.len() && sb.vector_at(k) == vb {
                    k += 1;
                }
            }
        }
    }
    best.map(|(p, q, rank)| Intersection {
        p,
        q,
        witness: ParikhVector(sa.vector_at(rank).to_vec()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(s: &str) -> (Alphabet, Text) {
        let alpha = build_alphabet(s, "");
        let t = alpha.encode(s).unwrap();
        (alpha, t)
    }

    fn pair(a: &str, b: &str) -> (Text, Text) {
        let alpha = build_alphabet(a, b);
        (alpha.encode(a).unwrap(), alpha.encode(b).unwrap())
    }

    #[test]
    fn alphabet_is_sorted_union() {
        let alpha = build_alphabet("aacgcctaatcg", "aacgcctaatcg");
        assert_eq!(alpha.size(), 4);
        assert_eq!(alpha.symbols(), &['a', 'c', 'g', 't']);
        assert_eq!(build_alphabet("", "").size(), 0);
        let alpha = build_alphabet("000", "111");
        assert_eq!(alpha.symbols(), &['0', '1']);
        assert_eq!(build_alphabet("tga", "c"), Alphabet::dna());
    }

    #[test]
    fn encode_rejects_foreign_symbols() {
        let err = Alphabet::binary().encode("01x").unwrap_err();
        assert_eq!(err, LcafError::UnknownSymbol('x'));
        let t = Alphabet::dna().encode("gattaca").unwrap();
        assert_eq!(Alphabet::dna().decode(&t), "gattaca");
    }

    #[test]
    fn parikh_of_example_string() {
        let (alpha, s) = text("aacgcctaatcg");
        assert_eq!(parikh(&s, 1, 12).unwrap().counts(), &[4, 4, 2, 2]);
        assert_eq!(parikh(&s, 1, 11).unwrap().counts(), &[4, 4, 1, 2]);
        assert_eq!(parikh(&s, 5, 0).unwrap().counts(), &[0, 0, 0, 0]);
        assert_eq!(
            alpha.describe(&parikh(&s, 1, 12).unwrap()),
            "(a:4, c:4, g:2, t:2)"
        );
    }

    #[test]
    fn parikh_range_errors() {
        let (_, s) = text("abc");
        assert!(matches!(
            parikh(&s, 0, 1),
            Err(LcafError::OutOfRange { .. })
        ));
        assert!(matches!(
            parikh(&s, 2, 3),
            Err(LcafError::OutOfRange { .. })
        ));
        assert!(parikh(&s, 4, 0).is_ok());
    }

    #[test]
    fn rows() {
        let s = Alphabet::binary().encode("0110").unwrap();
        let row = compute_row(&s, 2).unwrap();
        let ones: Vec<u32> = row.iter().map(|v| v[1]).collect();
        assert_eq!(ones, vec![1, 2, 1]);

        let (_, s) = text("aaaa");
        let row = compute_row(&s, 3).unwrap();
        assert_eq!(row.to_vectors(), vec![ParikhVector::from(vec![3]); 2]);

        let (_, s) = text("aacgcctaatcg");
        let row = compute_row(&s, 12).unwrap();
        assert_eq!(row.len(), 1);
        assert_eq!(row.vector(1), &[4, 4, 2, 2]);

        assert!(compute_row(&s, 0).is_err());
        assert!(compute_row(&s, 13).is_err());
    }

    #[test]
    fn extrema() {
        let s = Alphabet::binary().encode("0110").unwrap();
        let e = row_extrema(&compute_row(&s, 2).unwrap()).unwrap();
        assert_eq!((e.min[1], e.max[1]), (1, 2));

        let (_, s) = text("aaaa");
        let e = row_extrema(&compute_row(&s, 3).unwrap()).unwrap();
        assert_eq!(e.min, vec![3]);
        assert_eq!(e.max, vec![3]);

        let (a, b) = pair("0000", "1111");
        let ea = row_extrema(&compute_row(&a, 4).unwrap()).unwrap();
        let eb = row_extrema(&compute_row(&b, 4).unwrap()).unwrap();
        assert_eq!((ea.min[1], ea.max[1]), (0, 0));
        assert_eq!((eb.min[1], eb.max[1]), (4, 4));
    }

    #[test]
    fn extrema_of_empty_row() {
        let row = Row {
            ell: 1,
            sigma: 2,
            data: vec![],
        };
        assert_eq!(row_extrema(&row), Err(LcafError::EmptyRow));
    }

    #[test]
    fn shrink() {
        let (_, s) = text("aacgcctaatcg");
        let v = parikh(&s, 1, 12).unwrap();
        assert_eq!(
            shrink_first_vector(&v, &s, 12).unwrap().counts(),
            &[4, 4, 1, 2]
        );

        let v = parikh(&s, 1, 1).unwrap();
        assert_eq!(shrink_first_vector(&v, &s, 1).unwrap().total(), 0);
        assert!(shrink_first_vector(&ParikhVector::zeros(4), &s, 0).is_err());

        // "0110" without its last symbol is "011": one zero, two ones.
        let s = Alphabet::binary().encode("0110").unwrap();
        let v = parikh(&s, 1, 4).unwrap();
        assert_eq!(shrink_first_vector(&v, &s, 4).unwrap().counts(), &[1, 2]);
    }

    #[test]
    fn sorting() {
        // binary row with one-counts [1, 0, 2]; the zeros component is the
        // most significant, so ascending order means descending one-counts
        let row = Row {
            ell: 2,
            sigma: 2,
            data: vec![1, 1, 2, 0, 0, 2],
        };
        let sorted = sort_row(&row);
        let ones: Vec<u32> = sorted.iter().map(|(v, _)| v[1]).collect();
        assert_eq!(ones, vec![2, 1, 0]);
        assert_eq!(sorted.positions().collect::<Vec<_>>(), vec![3, 1, 2]);
        let zeros: Vec<u32> = sorted.iter().map(|(v, _)| v[0]).collect();
        assert_eq!(zeros, vec![0, 1, 2]);

        let row = Row {
            ell: 2,
            sigma: 2,
            data: vec![2, 0, 1, 1, 0, 2],
        };
        assert_eq!(
            sort_row(&row).positions().collect::<Vec<_>>(),
            vec![3, 2, 1]
        );

        let (_, s) = text("aaaa");
        let row = compute_row(&s, 2).unwrap();
        assert_eq!(
            sort_row(&row).positions().collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
    }

    #[test]
    fn intersections() {
        let (a, b) = pair("ab", "ba");
        let hit = intersect_rows(&compute_row(&a, 2).unwrap(), &compute_row(&b, 2).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!((hit.p, hit.q, hit.witness.counts()), (1, 1, &[1u32, 1][..]));

        let (a, b) = pair("0000", "1111");
        let miss = intersect_rows(&compute_row(&a, 4).unwrap(), &compute_row(&b, 4).unwrap());
        assert_eq!(miss, Ok(None));

        let (a, b) = pair("aab", "abb");
        let hit = intersect_rows(&compute_row(&a, 2).unwrap(), &compute_row(&b, 2).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!((hit.p, hit.q, hit.witness.counts()), (2, 1, &[1u32, 1][..]));

        assert_eq!(
            intersect_rows(&compute_row(&a, 2).unwrap(), &compute_row(&b, 3).unwrap()),
            Err(LcafError::LengthMismatch(2, 3))
        );
    }
}
