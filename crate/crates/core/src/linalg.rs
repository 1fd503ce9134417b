//! Linear algebra over GF(2) with rows packed into machine words.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{check_len, coord_bit, full_mask, render_bits, BinaryCode};

/// A binary matrix; each row is a length-`n` word.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BitMatrix {
    pub n: usize,
    pub rows: Vec<u32>,
}

impl BitMatrix {
    pub fn new(n: usize, rows: Vec<u32>) -> Result<Self> {
        check_len(n)?;
        if let Some(&r) = rows.iter().find(|&&r| r > full_mask(n)) {
            return Err(Error::WordOutOfRange { value: r as u64, n });
        }
        Ok(BitMatrix { n, rows })
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Column `coord` (1-based) read top to bottom as an integer, first row
    /// most significant.
    pub fn column(&self, coord: usize) -> u32 {
        let bit = coord_bit(self.n, coord);
        self.rows
            .iter()
            .fold(0, |acc, &r| (acc << 1) | u32::from(r & bit != 0))
    }

    /// `Hx^T` packed with the first row in the most significant position.
    pub fn syndrome(&self, x: u32) -> u32 {
        self.rows
            .iter()
            .fold(0, |acc, &r| (acc << 1) | ((r & x).count_ones() & 1))
    }

    pub fn rank(&self) -> usize {
        echelon_basis(self.rows.iter().copied()).len()
    }

    /// Basis of the null space `{x : Hx^T = 0}`.
    pub fn null_space_basis(&self) -> Vec<u32> {
        null_space_basis(self.n, &self.rows)
    }

    /// All words of the null space; refuses dimensions above 26.
    pub fn null_space(&self) -> Result<BinaryCode> {
        let basis = self.null_space_basis();
        if basis.len() > 26 {
            return Err(Error::OutOfRange(format!(
                "null space of dimension {} is too large to enumerate",
                basis.len()
            )));
        }
        Ok(span(self.n, &basis))
    }

    pub fn render(&self) -> Vec<String> {
        self.rows.iter().map(|&r| render_bits(r, self.n)).collect()
    }
}

/// Reduced row echelon basis of the span of `vectors`.
///
/// Pivot of each row is its lowest-index (leftmost) nonzero coordinate; the
/// result is sorted by pivot and every pivot column is zero in the other rows.
pub fn echelon_basis(vectors: impl IntoIterator<Item = u32>) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for mut v in vectors {
        for &b in &basis {
            if v & top_bit(b) != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            let p = top_bit(v);
            for b in basis.iter_mut() {
                if *b & p != 0 {
                    *b ^= v;
                }
            }
            basis.push(v);
        }
    }
    basis.sort_unstable_by(|a, b| b.cmp(a));
    basis
}

#[inline]
fn top_bit(v: u32) -> u32 {
    debug_assert!(v != 0);
    1u32 << (31 - v.leading_zeros())
}

fn null_space_basis(n: usize, rows: &[u32]) -> Vec<u32> {
    let basis = echelon_basis(rows.iter().copied());
    let pivots: u32 = basis.iter().map(|&b| top_bit(b)).fold(0, |a, b| a | b);
    let mut out = Vec::new();
    for pos in (0..n).rev() {
        let free = 1u32 << pos;
        if pivots & free != 0 {
            continue;
        }
        // set the free variable, solve for pivots
        let mut x = free;
        for &b in &basis {
            if b & free != 0 {
                x |= top_bit(b);
            }
        }
        out.push(x);
    }
    out
}

/// All `2^k` combinations of the given basis vectors.
pub fn span(n: usize, basis: &[u32]) -> BinaryCode {
    let mut words = vec![0u32];
    for &b in basis {
        let cur = words.len();
        for i in 0..cur {
            words.push(words[i] ^ b);
        }
    }
    words.sort_unstable();
    words.dedup();
    BinaryCode::from_sorted_unchecked(n, words)
}

fn translated_words(c: &BinaryCode) -> Result<Vec<u32>> {
    let c0 = *c.words().first().ok_or(Error::EmptyCode)?;
    Ok(c.words().iter().map(|&w| w ^ c0).collect())
}

/// Dimension of the span of `C + c₀`, `c₀` the smallest codeword.
pub fn rank(c: &BinaryCode) -> Result<usize> {
    Ok(echelon_basis(translated_words(c)?).len())
}

/// The kernel `{x : C + x = C}` of a code.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct KernelReport {
    pub elements: BinaryCode,
    pub basis: Vec<u32>,
}

impl KernelReport {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// Exact kernel. Candidates are `C + c₀`, since every kernel element `x`
/// satisfies `c₀ + x ∈ C`.
pub fn kernel(c: &BinaryCode) -> Result<KernelReport> {
    let c0 = *c.words().first().ok_or(Error::EmptyCode)?;
    let set = c.word_set();
    let mut found: Vec<u32> = vec![0];
    let mut basis: Vec<u32> = Vec::new();
    // The kernel is a subspace: test candidates outside the current span only.
    let mut in_span = WordSpan::new();
    in_span.insert(0);
    for &w in c.words() {
        let x = w ^ c0;
        if in_span.contains(x) {
            continue;
        }
        if c.words().iter().all(|&y| set.contains(y ^ x)) {
            basis.push(x);
            let cur = found.len();
            for i in 0..cur {
                let v = found[i] ^ x;
                found.push(v);
                in_span.insert(v);
            }
        }
    }
    found.sort_unstable();
    Ok(KernelReport {
        elements: BinaryCode::from_sorted_unchecked(c.n(), found),
        basis: echelon_basis(basis),
    })
}

struct WordSpan(std::collections::HashSet<u32>);

impl WordSpan {
    fn new() -> Self {
        WordSpan(Default::default())
    }
    fn insert(&mut self, w: u32) {
        self.0.insert(w);
    }
    fn contains(&self, w: u32) -> bool {
        self.0.contains(&w)
    }
}

/// Parity-check matrix whose column `i` is the binary number `i`.
pub fn hamming_parity_check(m: usize) -> Result<BitMatrix> {
    if !(1..=5).contains(&m) {
        return Err(Error::OutOfRange(format!("m = {m}")));
    }
    let n = (1usize << m) - 1;
    let mut rows = vec![0u32; m];
    for col in 1..=n {
        for (r, row) in rows.iter_mut().enumerate() {
            if (col >> (m - 1 - r)) & 1 == 1 {
                *row |= coord_bit(n, col);
            }
        }
    }
    BitMatrix::new(n, rows)
}

/// The Hamming code of length `2^m − 1` (2 ≤ m ≤ 4) with parity-check
/// columns `1, 2, …, 2^m − 1` in coordinate order.
pub fn hamming_code(m: usize) -> Result<BinaryCode> {
    if !(2..=4).contains(&m) {
        return Err(Error::OutOfRange(format!("hamming_code needs 2 <= m <= 4, got {m}")));
    }
    hamming_parity_check(m)?.null_space()
}

/// The block parity-check matrix
///
/// ```text
///     ( 0  1  1 )
/// H = ( A  A  0 )
/// ```
///
/// with `A` the counting-order parity-check matrix of the Hamming code of
/// length `2^(m-1) − 1`. Its null space is a Hamming code of length
/// `2^m − 1`; the last coordinate is the single column `(1, 0)`.
pub fn block_parity_check(m: usize) -> Result<BitMatrix> {
    if !(3..=5).contains(&m) {
        return Err(Error::OutOfRange(format!(
            "block_parity_check needs 3 <= m <= 5, got {m}"
        )));
    }
    let half = (1usize << (m - 1)) - 1;
    let n = 2 * half + 1;
    let a = hamming_parity_check(m - 1)?;
    let mut rows = Vec::with_capacity(m);
    // top row: zeros over the first block, ones over the second and last
    rows.push(full_mask(half + 1));
    for &ar in &a.rows {
        rows.push((ar << (half + 1)) | (ar << 1));
    }
    BitMatrix::new(n, rows)
}

/// True iff every word of `F_2^n` is uniquely `v ⊕ a` with `v ∈ V`, `a ∈ A`.
pub fn verify_tiling(v: &BinaryCode, a: &BinaryCode) -> Result<bool> {
    if v.n() != a.n() {
        return Err(Error::LengthMismatch(v.n(), a.n()));
    }
    let n = v.n();
    if (v.len() as u64) * (a.len() as u64) != 1u64 << n {
        return Ok(false);
    }
    let mut seen = std::collections::HashSet::with_capacity(1 << n.min(24));
    for &x in v.words() {
        for &y in a.words() {
            if !seen.insert(x ^ y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The radius-1 ball around the zero word.
pub fn unit_ball(n: usize) -> Result<BinaryCode> {
    check_len(n)?;
    BinaryCode::new(n, std::iter::once(0).chain((0..n).map(|b| 1u32 << b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::Word;
    use proptest::prelude::*;

    #[test]
    fn hamming_parameters() {
        let h2 = hamming_code(2).unwrap();
        assert_eq!(h2.words(), &[0, 7]);
        let h3 = hamming_code(3).unwrap();
        assert_eq!((h3.n(), h3.len()), (7, 16));
        assert!(h3.is_perfect());
        let h4 = hamming_code(4).unwrap();
        assert_eq!((h4.n(), h4.len()), (15, 2048));
        assert!(h4.is_perfect());
        assert!(h4.contains_bits(0));
        assert!(hamming_code(1).is_err());
        assert!(hamming_code(5).is_err());
    }

    #[test]
    fn hamming_columns_count_up() {
        let h = hamming_parity_check(3).unwrap();
        for c in 1..=7 {
            assert_eq!(h.column(c), c as u32);
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&hamming_code(4).unwrap()).unwrap(), 11);
        assert_eq!(rank(&BinaryCode::new(7, [0]).unwrap()).unwrap(), 0);
        assert_eq!(rank(&BinaryCode::new(3, [0, 7]).unwrap()).unwrap(), 1);
        for m in 2..=4 {
            let n = (1 << m) - 1;
            assert_eq!(rank(&hamming_code(m).unwrap()).unwrap(), n - m);
        }
        assert!(matches!(
            rank(&BinaryCode::new(3, []).unwrap()),
            Err(Error::EmptyCode)
        ));
    }

    #[test]
    fn kernel_examples() {
        let h = hamming_code(4).unwrap();
        let k = kernel(&h).unwrap();
        assert_eq!(k.size(), 2048);
        assert_eq!(k.elements, h);
        assert!(k.elements.contains(Word::ones(15).unwrap()));
        let z = kernel(&BinaryCode::new(7, [0]).unwrap()).unwrap();
        assert_eq!(z.elements.words(), &[0]);
        assert!(z.basis.is_empty());
    }

    #[test]
    fn kernel_of_union_of_cosets() {
        // {0, 7} ∪ ({0, 7} + 1) in F_2^3: kernel is {0, 7}
        let c = BinaryCode::new(3, [0, 7, 1, 6]).unwrap();
        let k = kernel(&c).unwrap();
        assert_eq!(k.elements.words(), &[0, 1, 6, 7]);
        let c = BinaryCode::new(3, [0, 7, 1]).unwrap();
        assert_eq!(kernel(&c).unwrap().elements.words(), &[0]);
    }

    #[test]
    fn block_matrix_shape_and_null_space() {
        let h3 = block_parity_check(3).unwrap();
        assert_eq!((h3.row_count(), h3.n), (3, 7));
        assert_eq!(h3.render(), vec!["0001111", "0110110", "1011010"]);
        let c = h3.null_space().unwrap();
        assert_eq!(c.len(), 16);
        assert!(c.is_perfect());
        let h4 = block_parity_check(4).unwrap();
        assert_eq!((h4.row_count(), h4.n), (4, 15));
        assert!(h4.null_space().unwrap().is_perfect());
        assert!(block_parity_check(2).is_err());
    }

    #[test]
    fn top_row_kills_s_words() {
        for m in 3..=4 {
            let h = block_parity_check(m).unwrap();
            let half = (1usize << (m - 1)) - 1;
            let ones = full_mask(half);
            for x in 0..(1u32 << half) {
                let w = ((x ^ ones) << (half + 1)) | (x << 1) | (x.count_ones() & 1);
                assert_eq!(h.syndrome(w) >> (m - 1), 0);
                assert_eq!(h.syndrome(w), 0, "whole syndrome vanishes too");
            }
        }
    }

    #[test]
    fn tilings() {
        let h = hamming_code(4).unwrap();
        assert!(verify_tiling(&h, &unit_ball(15).unwrap()).unwrap());
        let a = BinaryCode::from_strs(&["00", "01"]).unwrap();
        let b = BinaryCode::from_strs(&["00", "10"]).unwrap();
        assert!(verify_tiling(&a, &b).unwrap());
        assert!(!verify_tiling(&a, &a).unwrap());
        assert!(verify_tiling(&a, &unit_ball(3).unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn kernel_is_subspace_inside_code(words in proptest::collection::vec(0u32..256, 1..24), shift in 0usize..4) {
            let mut c = BinaryCode::new(8, words).unwrap();
            // close under a few random vectors so the kernel is not always trivial
            let extra = [0x0fu32, 0xf0, 0x33, 0x55];
            for &e in extra.iter().take(shift) {
                c = c.union(&c.translate(e)).unwrap();
            }
            let k = kernel(&c).unwrap();
            prop_assert_eq!(k.elements.len(), 1 << k.basis.len());
            prop_assert_eq!(c.len() % k.elements.len(), 0);
            for &x in k.elements.words() {
                for &y in k.elements.words() {
                    prop_assert!(k.elements.contains_bits(x ^ y));
                }
                prop_assert_eq!(c.translate(x), c.clone());
            }
            // brute-force oracle over the whole space
            let brute: Vec<u32> = (0..256u32).filter(|&x| c.translate(x) == c).collect();
            prop_assert_eq!(brute, k.elements.words().to_vec());
            if c.contains_bits(0) {
                for &x in k.elements.words() {
                    prop_assert!(c.contains_bits(x));
                }
            }
        }
    }
}
