//! Binary words, codes and the basic metrics on them.
//!
//! A word of length `n` is stored in the low `n` bits of a `u32`. Coordinate
//! 1 is the most significant of those bits, so the natural rendering of a word
//! as an `n`-character 0/1 string puts coordinate 1 on the left and the
//! ascending numeric order of the integers matches the lexicographic order of
//! the strings.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported code length.
pub const MAX_LEN: usize = 31;

/// Bit mask selecting coordinate `coord` (1-based) of a length-`n` word.
#[inline]
pub fn coord_bit(n: usize, coord: usize) -> u32 {
    debug_assert!(coord >= 1 && coord <= n);
    1u32 << (n - coord)
}

/// All-one word of length `n`.
#[inline]
pub fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

pub(crate) fn check_len(n: usize) -> Result<()> {
    if n == 0 || n > MAX_LEN {
        return Err(Error::InvalidLength(n));
    }
    Ok(())
}

pub(crate) fn check_coord(n: usize, coord: usize) -> Result<()> {
    if coord == 0 || coord > n {
        return Err(Error::InvalidCoordinate { coord, n });
    }
    Ok(())
}

/// A binary word of length `n` (1 ≤ n ≤ 31).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    bits: u32,
    n: u8,
}

impl Word {
    pub fn new(bits: u32, n: usize) -> Result<Self> {
        check_len(n)?;
        if bits > full_mask(n) {
            return Err(Error::WordOutOfRange {
                value: bits as u64,
                n,
            });
        }
        Ok(Word { bits, n: n as u8 })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Word::new(0, n)
    }

    pub fn ones(n: usize) -> Result<Self> {
        check_len(n)?;
        Word::new(full_mask(n), n)
    }

    /// The unit vector with a single 1 at `coord`.
    pub fn unit(n: usize, coord: usize) -> Result<Self> {
        check_len(n)?;
        check_coord(n, coord)?;
        Word::new(coord_bit(n, coord), n)
    }

    /// Builds a word from its 1-based support.
    pub fn from_support(n: usize, support: &[usize]) -> Result<Self> {
        check_len(n)?;
        let mut bits = 0;
        for &c in support {
            check_coord(n, c)?;
            bits |= coord_bit(n, c);
        }
        Word::new(bits, n)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.n as usize
    }

    pub fn is_empty(self) -> bool {
        self.n == 0
    }

    pub fn weight(self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Value at a 1-based coordinate.
    pub fn get(self, coord: usize) -> bool {
        self.bits & coord_bit(self.len(), coord) != 0
    }

    /// 1-based coordinates holding a 1, ascending.
    pub fn support(self) -> Vec<usize> {
        support_of(self.bits, self.len())
    }

    pub fn xor(self, other: Word) -> Result<Word> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(Word {
            bits: self.bits ^ other.bits,
            n: self.n,
        })
    }

    /// Parses an `n`-character string of `0`/`1`.
    pub fn parse(s: &str) -> Result<Self> {
        let n = s.len();
        check_len(n)?;
        let mut bits = 0u32;
        for (i, ch) in s.bytes().enumerate() {
            bits <<= 1;
            match ch {
                b'0' => {}
                b'1' => bits |= 1,
                _ => {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("bad character {:?} at column {}", ch as char, i + 1),
                    })
                }
            }
        }
        Word::new(bits, n)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_bits(self.bits, self.len()))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self)
    }
}

pub fn render_bits(bits: u32, n: usize) -> String {
    (1..=n)
        .map(|c| if bits & coord_bit(n, c) != 0 { '1' } else { '0' })
        .collect()
}

pub fn support_of(bits: u32, n: usize) -> Vec<usize> {
    (1..=n).filter(|&c| bits & coord_bit(n, c) != 0).collect()
}

/// Number of nonzero coordinates.
pub fn weight(w: Word) -> usize {
    w.weight()
}

/// Hamming distance; errors when the lengths differ.
pub fn distance(x: Word, y: Word) -> Result<usize> {
    Ok(x.xor(y)?.weight())
}

/// A permutation of the coordinates `1..=n`, stored 0-based.
///
/// Applying `π` to a word `y` yields the word whose coordinate `π(i)` holds
/// `y_i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct CoordPerm {
    images: Vec<u8>,
}

impl CoordPerm {
    pub fn identity(n: usize) -> Self {
        CoordPerm {
            images: (0..n as u8).collect(),
        }
    }

    /// From 0-based images; `images[i]` is where coordinate `i` goes.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            if im >= n || seen[im] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[im] = true;
        }
        Ok(CoordPerm {
            images: images.into_iter().map(|x| x as u8).collect(),
        })
    }

    /// From 1-based images; `images[i-1]` is where coordinate `i` goes.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation(format!("{images:?}")));
        }
        CoordPerm::from_images(images.iter().map(|&x| x - 1).collect())
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// Image of a 0-based coordinate.
    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.image(i) == i).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        CoordPerm { images: inv }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &CoordPerm) -> Self {
        CoordPerm {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn apply_bits(&self, bits: u32) -> u32 {
        let n = self.len();
        let mut out = 0u32;
        let mut rest = bits;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let i = n - 1 - b;
            out |= 1 << (n - 1 - self.images[i] as usize);
        }
        out
    }
}

/// Membership structure for words of a fixed length.
#[derive(Clone, Debug)]
pub enum WordSet {
    Dense(Vec<u64>),
    Sparse(HashSet<u32>),
}

impl WordSet {
    const DENSE_LIMIT: usize = 24;

    pub fn new(n: usize, words: impl IntoIterator<Item = u32>) -> Self {
        if n <= Self::DENSE_LIMIT {
            let mut v = vec![0u64; (1usize << n).div_ceil(64)];
            for w in words {
                v[(w >> 6) as usize] |= 1 << (w & 63);
            }
            WordSet::Dense(v)
        } else {
            WordSet::Sparse(words.into_iter().collect())
        }
    }

    #[inline]
    pub fn contains(&self, w: u32) -> bool {
        match self {
            WordSet::Dense(v) => v
                .get((w >> 6) as usize)
                .is_some_and(|x| x & (1 << (w & 63)) != 0),
            WordSet::Sparse(s) => s.contains(&w),
        }
    }
}

/// A binary code: a set of words of common length, kept strictly ascending.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BinaryCode {
    n: usize,
    words: Vec<u32>,
}

/// Counts of codewords at each distance `0..=n` from a reference word.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DistanceDistribution {
    pub counts: Vec<u64>,
}

impl DistanceDistribution {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

impl fmt::Display for DistanceDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl BinaryCode {
    /// Builds a code, sorting and removing duplicates.
    pub fn new(n: usize, words: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_len(n)?;
        let mask = full_mask(n);
        let mut v: Vec<u32> = Vec::new();
        for w in words {
            if w & !mask != 0 {
                return Err(Error::WordOutOfRange { value: w as u64, n });
            }
            v.push(w);
        }
        v.sort_unstable();
        v.dedup();
        Ok(BinaryCode { n, words: v })
    }

    pub fn from_words(words: &[Word]) -> Result<Self> {
        let n = words.first().ok_or(Error::EmptyCode)?.len();
        if let Some(w) = words.iter().find(|w| w.len() != n) {
            return Err(Error::LengthMismatch(n, w.len()));
        }
        BinaryCode::new(n, words.iter().map(|w| w.bits()))
    }

    /// Parses a list of equal-length 0/1 strings.
    pub fn from_strs<S: AsRef<str>>(words: &[S]) -> Result<Self> {
        let parsed = words
            .iter()
            .map(|s| Word::parse(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        BinaryCode::from_words(&parsed)
    }

    /// Internal constructor for already sorted, deduplicated words.
    pub(crate) fn from_sorted_unchecked(n: usize, words: Vec<u32>) -> Self {
        debug_assert!(words.windows(2).all(|w| w[0] < w[1]));
        BinaryCode { n, words }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[u32] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = Word> + '_ {
        let n = self.n as u8;
        self.words.iter().map(move |&bits| Word { bits, n })
    }

    pub fn contains_bits(&self, w: u32) -> bool {
        self.words.binary_search(&w).is_ok()
    }

    pub fn contains(&self, w: Word) -> bool {
        w.len() == self.n && self.contains_bits(w.bits())
    }

    pub fn word_set(&self) -> WordSet {
        WordSet::new(self.n, self.words.iter().copied())
    }

    /// `C + x`.
    pub fn translate(&self, x: u32) -> BinaryCode {
        let mut v: Vec<u32> = self.words.iter().map(|&w| w ^ x).collect();
        v.sort_unstable();
        BinaryCode::from_sorted_unchecked(self.n, v)
    }

    /// `π(C)`.
    pub fn permute(&self, pi: &CoordPerm) -> Result<BinaryCode> {
        if pi.len() != self.n {
            return Err(Error::LengthMismatch(self.n, pi.len()));
        }
        let mut v: Vec<u32> = self.words.iter().map(|&w| pi.apply_bits(w)).collect();
        v.sort_unstable();
        Ok(BinaryCode::from_sorted_unchecked(self.n, v))
    }

    /// Words of the given weight.
    pub fn words_of_weight(&self, w: usize) -> Vec<u32> {
        self.words
            .iter()
            .copied()
            .filter(|x| x.count_ones() as usize == w)
            .collect()
    }

    /// Exact minimum pairwise distance.
    pub fn min_distance(&self) -> Result<usize> {
        if self.words.len() < 2 {
            return Err(Error::TooFewWords {
                needed: 2,
                found: self.words.len(),
            });
        }
        let mut best = u32::MAX;
        for (i, &a) in self.words.iter().enumerate() {
            for &b in &self.words[i + 1..] {
                let d = (a ^ b).count_ones();
                if d < best {
                    best = d;
                    if best == 1 {
                        return Ok(1);
                    }
                }
            }
        }
        Ok(best as usize)
    }

    /// Whether all pairwise distances are at least `d`.
    pub fn has_min_distance_at_least(&self, d: usize) -> bool {
        self.words.len() < 2 || self.min_distance().map(|m| m >= d).unwrap_or(true)
    }

    /// True iff the radius-1 balls around the codewords partition `F_2^n`.
    pub fn is_perfect(&self) -> bool {
        if self.words.is_empty() {
            return false;
        }
        let total = 1u64 << self.n;
        if self.words.len() as u64 * (self.n as u64 + 1) != total {
            return false;
        }
        self.has_min_distance_at_least(3)
    }

    /// True iff this is an extended 1-perfect code: even length, minimum
    /// distance 4 and `|C|·n = 2^(n-1)`.
    pub fn is_extended_perfect(&self) -> bool {
        if self.words.is_empty() || self.n < 2 {
            return false;
        }
        let total = 1u64 << (self.n - 1);
        if self.words.len() as u64 * self.n as u64 != total {
            return false;
        }
        self.has_min_distance_at_least(4)
    }

    /// Distances of the codewords to `x`.
    pub fn distance_distribution(&self, x: Word) -> Result<DistanceDistribution> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch(self.n, x.len()));
        }
        let mut counts = vec![0u64; self.n + 1];
        for &c in &self.words {
            counts[(c ^ x.bits()).count_ones() as usize] += 1;
        }
        Ok(DistanceDistribution { counts })
    }

    /// Number of ordered codeword pairs at each distance.
    pub fn pair_distance_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.n + 1];
        for (i, &a) in self.words.iter().enumerate() {
            counts[0] += 1;
            for &b in &self.words[i + 1..] {
                counts[(a ^ b).count_ones() as usize] += 2;
            }
        }
        counts
    }

    /// Appends an overall parity bit as new last coordinate.
    pub fn extend(&self) -> Result<BinaryCode> {
        check_len(self.n + 1)?;
        let v: Vec<u32> = self
            .words
            .iter()
            .map(|&w| (w << 1) | (w.count_ones() & 1))
            .collect();
        // (w << 1 | p) preserves the order of w
        Ok(BinaryCode::from_sorted_unchecked(self.n + 1, v))
    }

    /// Deletes coordinate `coord`, merging words that become equal.
    pub fn puncture(&self, coord: usize) -> Result<BinaryCode> {
        check_coord(self.n, coord)?;
        check_len(self.n.saturating_sub(1))?;
        let n = self.n;
        BinaryCode::new(n - 1, self.words.iter().map(|&w| delete_coord(w, n, coord)))
    }

    /// Keeps the words with value `bit` at `coord` and deletes that
    /// coordinate.
    pub fn shorten(&self, coord: usize, bit: bool) -> Result<BinaryCode> {
        check_coord(self.n, coord)?;
        check_len(self.n.saturating_sub(1))?;
        let n = self.n;
        let m = coord_bit(n, coord);
        BinaryCode::new(
            n - 1,
            self.words
                .iter()
                .filter(|&&w| (w & m != 0) == bit)
                .map(|&w| delete_coord(w, n, coord)),
        )
    }

    /// Inserts `bit` at position `coord` of every word (inverse of
    /// shortening).
    pub fn insert_coord(&self, coord: usize, bit: bool) -> Result<BinaryCode> {
        check_len(self.n + 1)?;
        check_coord(self.n + 1, coord)?;
        let n = self.n;
        BinaryCode::new(
            n + 1,
            self.words.iter().map(|&w| insert_coord(w, n, coord, bit)),
        )
    }

    /// Keeps only the coordinates in `coords` (1-based, in the given order).
    pub fn project(&self, coords: &[usize]) -> Result<BinaryCode> {
        for &c in coords {
            check_coord(self.n, c)?;
        }
        let k = coords.len();
        check_len(k)?;
        let n = self.n;
        BinaryCode::new(
            k,
            self.words.iter().map(|&w| {
                coords.iter().fold(0u32, |acc, &c| {
                    (acc << 1) | u32::from(w & coord_bit(n, c) != 0)
                })
            }),
        )
    }

    pub fn is_self_complementary(&self) -> bool {
        let ones = full_mask(self.n);
        self.words.iter().all(|&w| self.contains_bits(w ^ ones))
    }

    pub fn union(&self, other: &BinaryCode) -> Result<BinaryCode> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.n, other.n));
        }
        BinaryCode::new(self.n, self.words.iter().chain(other.words.iter()).copied())
    }

    /// `|C₁ ∩ C₂|` by merging the sorted word lists.
    pub fn intersection_size(&self, other: &BinaryCode) -> Result<usize> {
        if self.n != other.n {
            return Err(Error::LengthMismatch(self.n, other.n));
        }
        let (mut i, mut j, mut k) = (0, 0, 0);
        let (a, b) = (&self.words, &other.words);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    k += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(k)
    }
}

/// Removes coordinate `coord` from a length-`n` word.
pub fn delete_coord(w: u32, n: usize, coord: usize) -> u32 {
    let pos = n - coord; // bit position
    let low = w & ((1u32 << pos) - 1);
    let high = (w >> (pos + 1)) << pos;
    high | low
}

/// Inserts `bit` so that it becomes coordinate `coord` of a length-`n+1` word.
pub fn insert_coord(w: u32, n: usize, coord: usize, bit: bool) -> u32 {
    let pos = n + 1 - coord;
    let low = w & ((1u32 << pos) - 1);
    let high = (w >> pos) << (pos + 1);
    high | (u32::from(bit) << pos) | low
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hamming_code;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(weight(w("000000000000000")), 0);
        assert_eq!(weight(w("111111111111111")), 15);
        assert_eq!(weight(w("110000000000100")), 3);
    }

    #[test]
    fn distances() {
        let x = w("0110101");
        assert_eq!(distance(x, x).unwrap(), 0);
        assert_eq!(distance(w("0000000"), w("1110000")).unwrap(), 3);
        assert_eq!(distance(w("0001111"), w("0101100")).unwrap(), 3);
        assert!(matches!(
            distance(w("000"), w("0000")),
            Err(Error::LengthMismatch(3, 4))
        ));
    }

    #[test]
    fn coordinate_one_is_leftmost() {
        let u = Word::unit(5, 1).unwrap();
        assert_eq!(u.to_string(), "10000");
        assert_eq!(u.bits(), 0b10000);
        assert_eq!(w("01001").support(), vec![2, 5]);
    }

    #[test]
    fn min_distance_examples() {
        assert_eq!(hamming_code(3).unwrap().min_distance().unwrap(), 3);
        let c = BinaryCode::from_strs(&["0000", "1111"]).unwrap();
        assert_eq!(c.min_distance().unwrap(), 4);
        let single = BinaryCode::from_strs(&["0000"]).unwrap();
        assert!(matches!(
            single.min_distance(),
            Err(Error::TooFewWords { .. })
        ));
    }

    #[test]
    fn perfectness() {
        assert!(hamming_code(4).unwrap().is_perfect());
        let not = BinaryCode::new(3, 1..8).unwrap();
        assert!(!not.is_perfect());
        assert!(BinaryCode::new(3, [0, 7]).unwrap().is_perfect());
        assert!(BinaryCode::new(1, [0]).unwrap().is_perfect());
        assert!(!BinaryCode::new(1, [0, 1]).unwrap().is_perfect());
    }

    #[test]
    fn small_distance_distribution() {
        let c = BinaryCode::new(3, [0, 7]).unwrap();
        let d = c.distance_distribution(Word::zero(3).unwrap()).unwrap();
        assert_eq!(d.counts, vec![1, 0, 0, 1]);
    }

    #[test]
    fn extend_puncture_shorten() {
        let h = hamming_code(4).unwrap();
        let e = h.extend().unwrap();
        assert_eq!(e.n(), 16);
        assert_eq!(e.len(), 2048);
        assert_eq!(e.min_distance().unwrap(), 4);
        assert!(e.iter().all(|w| w.weight() % 2 == 0));
        assert_eq!(e.puncture(16).unwrap(), h);
        let s = h.shorten(15, false).unwrap();
        assert_eq!((s.n(), s.len(), s.min_distance().unwrap()), (14, 1024, 3));
        assert!(h.puncture(0).is_err());
        assert!(h.shorten(16, true).is_err());
    }

    #[test]
    fn self_complementary() {
        assert!(hamming_code(4).unwrap().is_self_complementary());
        assert!(!BinaryCode::new(7, [0]).unwrap().is_self_complementary());
        assert!(BinaryCode::new(3, [0, 7]).unwrap().is_self_complementary());
    }

    #[test]
    fn perm_action() {
        // coordinate 1 -> 2, 2 -> 3, 3 -> 1
        let p = CoordPerm::from_one_based(&[2, 3, 1]).unwrap();
        assert_eq!(render_bits(p.apply_bits(0b100), 3), "010");
        assert_eq!(render_bits(p.apply_bits(0b110), 3), "011");
        let q = p.inverse();
        assert_eq!(q.compose(&p), CoordPerm::identity(3));
        assert!(CoordPerm::from_one_based(&[1, 1, 2]).is_err());
    }

    proptest! {
        #[test]
        fn distance_is_weight_of_xor(a in 0u32..(1 << 15), b in 0u32..(1 << 15)) {
            let x = Word::new(a, 15).unwrap();
            let y = Word::new(b, 15).unwrap();
            prop_assert_eq!(distance(x, y).unwrap(), x.xor(y).unwrap().weight());
            prop_assert_eq!(distance(x, y).unwrap(), distance(y, x).unwrap());
        }

        #[test]
        fn render_parse_roundtrip(n in 1usize..=31, raw in any::<u32>()) {
            let x = Word::new(raw & full_mask(n), n).unwrap();
            prop_assert_eq!(Word::parse(&x.to_string()).unwrap(), x);
        }

        #[test]
        fn shorten_halves_reassemble(words in proptest::collection::vec(0u32..256, 1..40), coord in 1usize..=8) {
            let c = BinaryCode::new(8, words).unwrap();
            let zero = c.shorten(coord, false).unwrap().insert_coord(coord, false).unwrap();
            let one = c.shorten(coord, true).unwrap().insert_coord(coord, true).unwrap();
            let mut all: Vec<u32> = zero.words().iter().chain(one.words()).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, c.words().to_vec());
        }

        #[test]
        fn puncture_inverts_extend(words in proptest::collection::vec(0u32..1024, 1..40)) {
            let c = BinaryCode::new(10, words).unwrap();
            prop_assert_eq!(c.extend().unwrap().puncture(11).unwrap(), c);
        }
    }
}
