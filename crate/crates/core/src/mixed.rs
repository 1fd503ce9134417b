//! Perfect codes over mixed alphabets of sizes 2, 4, 8 and 16.

use rayon::prelude::*;

use crate::canonical::{canonical_form, canonicalize, CanonicalForm, CodeGraph, GroupOrder, Mode};
use crate::error::{Error, Result};
use crate::exact::exact_covers;
use crate::linalg::kernel;
use crate::profiles::{code_mask, enumerate_perfect_codes};
use crate::word::{coord_bit, BinaryCode};

/// Alphabet sizes, one per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedAlphabet {
    sizes: Vec<u32>,
}

impl MixedAlphabet {
    pub fn new(sizes: Vec<u32>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidLength(0));
        }
        if let Some(q) = sizes.iter().find(|q| ![2, 4, 8, 16].contains(*q)) {
            return Err(Error::OutOfRange(format!("alphabet size {q} not in 2, 4, 8, 16")));
        }
        Ok(MixedAlphabet { sizes })
    }

    /// `t` quaternary coordinates followed by `b` binary ones.
    pub fn quaternary_binary(t: usize, b: usize) -> Result<Self> {
        let mut sizes = vec![4; t];
        sizes.extend(std::iter::repeat_n(2, b));
        Self::new(sizes)
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Number of words in the space.
    pub fn volume(&self) -> u128 {
        self.sizes.iter().map(|&q| q as u128).product()
    }

    /// Size of a radius-1 ball.
    pub fn ball_size(&self) -> u128 {
        1 + self.sizes.iter().map(|&q| q as u128 - 1).sum::<u128>()
    }

    /// `log2 q_j + log2 q_k <= 4` for every pair of coordinates, a necessary
    /// condition for a nontrivial perfect code.
    pub fn satisfies_pair_constraint(&self) -> bool {
        let logs: Vec<u32> = self.sizes.iter().map(|q| q.trailing_zeros()).collect();
        logs.iter()
            .enumerate()
            .all(|(j, a)| logs[j + 1..].iter().all(|b| a + b <= 4))
    }

    /// Renders as `8,2,2,...`.
    pub fn render(&self) -> String {
        self.sizes
            .iter()
            .map(|q| q.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Exponent notation such as `F4^1F2^12`.
    pub fn notation(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.sizes.len() {
            let q = self.sizes[i];
            let run = self.sizes[i..].iter().take_while(|&&x| x == q).count();
            out.push_str(&format!("F{q}^{run}"));
            i += run;
        }
        out
    }
}

/// A set of words over a mixed alphabet, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedCode {
    alphabet: MixedAlphabet,
    words: Vec<Vec<u8>>,
}

impl MixedCode {
    pub fn new(alphabet: MixedAlphabet, words: impl IntoIterator<Item = Vec<u8>>) -> Result<Self> {
        let mut v: Vec<Vec<u8>> = words.into_iter().collect();
        for w in &v {
            if w.len() != alphabet.len() {
                return Err(Error::LengthMismatch(w.len(), alphabet.len()));
            }
            for (i, (&d, &q)) in w.iter().zip(&alphabet.sizes).enumerate() {
                if d as u32 >= q {
                    return Err(Error::OutOfRange(format!(
                        "digit {d} at coordinate {} exceeds alphabet {q}",
                        i + 1
                    )));
                }
            }
        }
        v.sort();
        v.dedup();
        Ok(MixedCode { alphabet, words: v })
    }

    /// A code that must be perfect over an alphabet obeying the pair constraint.
    pub fn perfect(alphabet: MixedAlphabet, words: impl IntoIterator<Item = Vec<u8>>) -> Result<Self> {
        if !alphabet.satisfies_pair_constraint() {
            return Err(Error::OutOfRange(format!(
                "alphabet {} violates log2 q_j + log2 q_k <= 4",
                alphabet.render()
            )));
        }
        let c = Self::new(alphabet, words)?;
        if !mixed_is_perfect(&c) {
            return Err(Error::NotPerfect);
        }
        Ok(c)
    }

    pub fn alphabet(&self) -> &MixedAlphabet {
        &self.alphabet
    }

    pub fn words(&self) -> &[Vec<u8>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Minimum Hamming distance, `None` for fewer than two words.
    pub fn min_distance(&self) -> Option<usize> {
        let w = &self.words;
        (0..w.len())
            .into_par_iter()
            .filter_map(|i| {
                w[i + 1..]
                    .iter()
                    .map(|y| hamming(&w[i], y))
                    .min()
            })
            .min()
    }

    /// Codewords with the given digit at a 1-based coordinate, that
    /// coordinate removed.
    pub fn shorten(&self, coord: usize, digit: u8) -> Result<MixedCode> {
        if coord == 0 || coord > self.alphabet.len() {
            return Err(Error::InvalidCoordinate {
                coord,
                n: self.alphabet.len(),
            });
        }
        let mut sizes = self.alphabet.sizes.clone();
        sizes.remove(coord - 1);
        let alphabet = MixedAlphabet::new(sizes)?;
        let words = self.words.iter().filter(|w| w[coord - 1] == digit).map(|w| {
            let mut v = w.clone();
            v.remove(coord - 1);
            v
        });
        MixedCode::new(alphabet, words)
    }

    /// The binary code on the coordinates after the first, valid when all of
    /// them are binary.
    pub fn binary_tail(&self) -> Result<BinaryCode> {
        let tail = &self.alphabet.sizes[1..];
        if tail.iter().any(|&q| q != 2) {
            return Err(Error::Inconsistent("tail is not binary".into()));
        }
        let k = tail.len();
        BinaryCode::new(
            k,
            self.words
                .iter()
                .map(|w| w[1..].iter().fold(0u32, |acc, &d| (acc << 1) | d as u32)),
        )
    }

    fn rows(&self) -> Vec<Vec<u32>> {
        self.words
            .iter()
            .map(|w| w.iter().map(|&d| d as u32).collect())
            .collect()
    }
}

fn hamming(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Sphere-packing equality plus minimum distance at least 3.
pub fn mixed_is_perfect(m: &MixedCode) -> bool {
    let a = &m.alphabet;
    if (m.len() as u128) * a.ball_size() != a.volume() {
        return false;
    }
    m.min_distance().is_none_or(|d| d >= 3)
}

/// All `t`-sets of weight-3 kernel elements with pairwise disjoint supports,
/// each set listed in increasing order.
pub fn disjoint_kernel_triples(c: &BinaryCode, t: usize) -> Result<Vec<Vec<u32>>> {
    if t == 0 {
        return Err(Error::OutOfRange("t must be positive".into()));
    }
    let ker = kernel(c)?;
    let triples: Vec<u32> = ker
        .elements
        .words()
        .iter()
        .copied()
        .filter(|w| w.count_ones() == 3)
        .collect();
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(t);
    extend_disjoint(&triples, 0, 0, t, &mut stack, &mut out);
    Ok(out)
}

fn extend_disjoint(
    triples: &[u32],
    from: usize,
    used: u32,
    t: usize,
    stack: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if stack.len() == t {
        out.push(stack.clone());
        return;
    }
    for i in from..triples.len() {
        if triples[i] & used == 0 {
            stack.push(triples[i]);
            extend_disjoint(triples, i + 1, used | triples[i], t, stack, out);
            stack.pop();
        }
    }
}

/// Pattern on the three coordinates of a triple, first coordinate as the
/// high bit, to the quaternary digit of its pair.
fn pair_digit(p: u32) -> u8 {
    p.min(7 - p) as u8
}

/// The representative pattern of each quaternary digit.
const DIGIT_PATTERN: [u32; 4] = [0b000, 0b001, 0b010, 0b100];

fn triple_coords(n: usize, t: u32) -> [usize; 3] {
    let mut c = [0usize; 3];
    let mut k = 0;
    for i in 1..=n {
        if t & coord_bit(n, i) != 0 {
            c[k] = i;
            k += 1;
        }
    }
    c
}

fn check_triples(c: &BinaryCode, triples: &[u32]) -> Result<u32> {
    let mut used = 0u32;
    for &t in triples {
        if t.count_ones() != 3 || t >> c.n() != 0 {
            return Err(Error::Inconsistent(format!("{t:#b} is not a weight-3 word")));
        }
        if t & used != 0 {
            return Err(Error::Inconsistent("triples overlap".into()));
        }
        used |= t;
    }
    Ok(used)
}

/// Merges each pair of codewords differing by a triple into one word with a
/// quaternary digit per triple. Quaternary digits come first, in the given
/// triple order, then the remaining binary coordinates in increasing order.
pub fn quaternary_compress(c: &BinaryCode, triples: &[u32]) -> Result<MixedCode> {
    let n = c.n();
    let used = check_triples(c, triples)?;
    let set = c.word_set();
    for &t in triples {
        if !c.words().iter().all(|&w| set.contains(w ^ t)) {
            return Err(Error::Inconsistent(format!("{t:#b} is not in the kernel")));
        }
    }
    let coords: Vec<[usize; 3]> = triples.iter().map(|&t| triple_coords(n, t)).collect();
    let rest: Vec<usize> = (1..=n).filter(|&i| used & coord_bit(n, i) == 0).collect();
    let bit = |w: u32, i: usize| (w & coord_bit(n, i) != 0) as u32;
    let words = c.words().iter().map(|&w| {
        let mut v: Vec<u8> = coords
            .iter()
            .map(|&[a, b, d]| pair_digit((bit(w, a) << 2) | (bit(w, b) << 1) | bit(w, d)))
            .collect();
        v.extend(rest.iter().map(|&i| bit(w, i) as u8));
        v
    });
    let alphabet = MixedAlphabet::quaternary_binary(triples.len(), rest.len())?;
    let m = MixedCode::new(alphabet, words)?;
    debug_assert_eq!(m.len() << triples.len(), c.len());
    Ok(m)
}

/// Inverse of [`quaternary_compress`] for the same triples and length.
pub fn quaternary_decompress(m: &MixedCode, triples: &[u32], n: usize) -> Result<BinaryCode> {
    let probe = BinaryCode::new(n, [])?;
    let used = check_triples(&probe, triples)?;
    let rest: Vec<usize> = (1..=n).filter(|&i| used & coord_bit(n, i) == 0).collect();
    let expect = MixedAlphabet::quaternary_binary(triples.len(), rest.len())?;
    if *m.alphabet() != expect {
        return Err(Error::Inconsistent(format!(
            "alphabet {} does not match layout {}",
            m.alphabet().render(),
            expect.render()
        )));
    }
    let coords: Vec<[usize; 3]> = triples.iter().map(|&t| triple_coords(n, t)).collect();
    let t = triples.len();
    let mut out = Vec::with_capacity(m.len() << t);
    for w in m.words() {
        let mut base = 0u32;
        for (j, &i) in rest.iter().enumerate() {
            if w[t + j] == 1 {
                base |= coord_bit(n, i);
            }
        }
        let patterns: Vec<u32> = coords
            .iter()
            .zip(&w[..t])
            .map(|(&[a, b, d], &digit)| {
                let p = DIGIT_PATTERN[digit as usize];
                let mut x = 0u32;
                for (k, &i) in [a, b, d].iter().enumerate() {
                    if p & (4 >> k) != 0 {
                        x |= coord_bit(n, i);
                    }
                }
                x
            })
            .collect();
        for choice in 0..(1u32 << t) {
            let mut x = base;
            for (k, &p) in patterns.iter().enumerate() {
                x |= if choice >> k & 1 == 1 { p ^ triples[k] } else { p };
            }
            out.push(x);
        }
    }
    BinaryCode::new(n, out)
}

/// Codes over `F8^1 F2^8` built from partitions of `F_2^7` into eight
/// perfect codes: each part is extended by a parity bit and tagged with its
/// index as the 8-ary digit. Only partitions whose part through the zero
/// word is `first` are generated.
pub fn f8_codes_from_partitions_with(first: &BinaryCode) -> Result<Vec<MixedCode>> {
    if first.n() != 7 || !first.is_perfect() || !first.contains_bits(0) {
        return Err(Error::Inconsistent(
            "first part must be a perfect code of length 7 through 0".into(),
        ));
    }
    let universe = enumerate_perfect_codes(7)?;
    let first_mask = code_mask(first);
    let pieces: Vec<u128> = universe
        .iter()
        .map(code_mask)
        .filter(|&m| m & first_mask == 0)
        .collect();
    let parts: Vec<BinaryCode> = universe
        .into_iter()
        .filter(|c| code_mask(c) & first_mask == 0)
        .collect();
    let alphabet = MixedAlphabet::new([8].into_iter().chain([2; 8]).collect())?;
    exact_covers(!first_mask, &pieces)
        .into_par_iter()
        .map(|sol| {
            let mut all: Vec<&BinaryCode> = vec![first];
            all.extend(sol.iter().map(|&k| &parts[k]));
            let words = all.iter().enumerate().flat_map(|(digit, part)| {
                part.words().iter().map(move |&w| {
                    let mut v = vec![digit as u8];
                    v.extend((1..=7).map(|i| (w & coord_bit(7, i) != 0) as u8));
                    v.push((w.count_ones() & 1) as u8);
                    v
                })
            });
            MixedCode::new(alphabet.clone(), words)
        })
        .collect()
}

/// [`f8_codes_from_partitions_with`] with the Hamming code as the first part.
/// Every perfect code of length 7 is equivalent to it, so each class of the
/// full enumeration is represented.
pub fn f8_codes_from_partitions() -> Result<Vec<MixedCode>> {
    f8_codes_from_partitions_with(&crate::linalg::hamming_code(3)?)
}

/// Every partition of `F_2^7` into eight perfect codes, over all 30 choices
/// of the part through the zero word.
pub fn f8_codes_from_all_partitions() -> Result<Vec<MixedCode>> {
    let mut out = Vec::new();
    for first in enumerate_perfect_codes(7)?.iter().filter(|c| c.contains_bits(0)) {
        out.extend(f8_codes_from_partitions_with(first)?);
    }
    Ok(out)
}

/// Distance profile of each codeword, used to refine codeword colors.
fn distance_profiles(m: &MixedCode) -> Vec<u64> {
    let w = m.words();
    let k = m.alphabet().len();
    w.par_iter()
        .map(|x| {
            let mut counts = vec![0u64; k + 1];
            for y in w {
                counts[hamming(x, y)] += 1;
            }
            counts
                .iter()
                .fold(0xcbf2_9ce4_8422_2325u64, |h, &c| (h ^ c).wrapping_mul(0x1000_0000_01b3))
        })
        .collect()
}

fn mixed_graph(m: &MixedCode) -> Result<CodeGraph> {
    let colors = distance_profiles(m);
    CodeGraph::from_rows(m.alphabet().sizes(), &m.rows(), Mode::Equivalence, Some(&colors))
}

/// Canonical form under coordinate permutations preserving alphabet sizes
/// and value permutations per coordinate.
pub fn mixed_canonical_form(m: &MixedCode) -> Result<CanonicalForm> {
    Ok(canonical_form(&mixed_graph(m)?))
}

pub fn mixed_automorphism_order(m: &MixedCode) -> Result<GroupOrder> {
    Ok(canonicalize(&mixed_graph(m)?).labeling.group_order)
}

/// One class of mixed codes with its automorphism group order.
#[derive(Clone, Debug)]
pub struct MixedClass {
    pub representative: MixedCode,
    pub digest: String,
    pub aut_order: GroupOrder,
    /// Number of input codes in the class.
    pub multiplicity: usize,
}

/// Groups codes into equivalence classes, in order of first appearance.
pub fn mixed_classes(codes: &[MixedCode]) -> Result<Vec<MixedClass>> {
    let labeled: Vec<(String, GroupOrder)> = codes
        .par_iter()
        .map(|m| {
            let cc = canonicalize(&mixed_graph(m)?);
            Ok((cc.form.digest(), cc.labeling.group_order))
        })
        .collect::<Result<_>>()?;
    let mut classes: Vec<MixedClass> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for (m, (digest, order)) in codes.iter().zip(labeled) {
        match index.get(&digest) {
            Some(&i) => {
                let c: &mut MixedClass = &mut classes[i];
                c.multiplicity += 1;
            }
            None => {
                index.insert(digest.clone(), classes.len());
                classes.push(MixedClass {
                    representative: m.clone(),
                    digest,
                    aut_order: order,
                    multiplicity: 1,
                });
            }
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hamming_code;

    #[test]
    fn digit_table() {
        let d: Vec<u8> = (0..8).map(pair_digit).collect();
        // 000 001 010 011 100 101 110 111
        assert_eq!(d, vec![0, 1, 2, 3, 3, 2, 1, 0]);
        for (digit, &p) in DIGIT_PATTERN.iter().enumerate() {
            assert_eq!(pair_digit(p) as usize, digit);
        }
    }

    #[test]
    fn alphabet_constraint() {
        let ok = MixedAlphabet::new(vec![8, 2, 2]).unwrap();
        assert!(ok.satisfies_pair_constraint());
        assert!(MixedAlphabet::new(vec![4; 5]).unwrap().satisfies_pair_constraint());
        assert!(!MixedAlphabet::new(vec![8, 4]).unwrap().satisfies_pair_constraint());
        assert!(!MixedAlphabet::new(vec![16, 2]).unwrap().satisfies_pair_constraint());
        assert!(MixedAlphabet::new(vec![16]).unwrap().satisfies_pair_constraint());
        assert!(MixedAlphabet::new(vec![3]).is_err());
        assert_eq!(MixedAlphabet::quaternary_binary(1, 12).unwrap().notation(), "F4^1F2^12");
        let bad = MixedAlphabet::new(vec![8, 4]).unwrap();
        assert!(MixedCode::perfect(bad, [vec![0, 0]]).is_err());
    }

    #[test]
    fn single_word_is_perfect() {
        let m = MixedCode::new(MixedAlphabet::new(vec![4]).unwrap(), [vec![0]]).unwrap();
        assert!(mixed_is_perfect(&m));
    }

    #[test]
    fn compress_round_trip_length7() {
        let h = hamming_code(3).unwrap();
        let sets = disjoint_kernel_triples(&h, 2).unwrap();
        // two disjoint lines of the Fano plane do not exist
        assert!(sets.is_empty());
        for set in disjoint_kernel_triples(&h, 1).unwrap() {
            let m = quaternary_compress(&h, &set).unwrap();
            assert_eq!(m.len(), 8);
            assert!(mixed_is_perfect(&m));
            assert_eq!(quaternary_decompress(&m, &set, 7).unwrap(), h);
        }
    }

    #[test]
    fn rejects_non_kernel_triple() {
        let h = hamming_code(3).unwrap();
        let c = BinaryCode::new(7, [0]).unwrap();
        assert!(quaternary_compress(&c, &[0b1110000]).is_err());
        assert!(quaternary_compress(&h, &[0b1100000]).is_err());
    }

    #[test]
    fn value_permutation_invariance() {
        let h = hamming_code(3).unwrap();
        let set = disjoint_kernel_triples(&h, 1).unwrap().remove(0);
        let m = quaternary_compress(&h, &set).unwrap();
        let swapped = MixedCode::new(
            m.alphabet().clone(),
            m.words().iter().map(|w| {
                let mut v = w.clone();
                v[0] = [2, 3, 0, 1][v[0] as usize];
                v.swap(1, 3);
                v
            }),
        )
        .unwrap();
        assert_eq!(
            mixed_canonical_form(&m).unwrap(),
            mixed_canonical_form(&swapped).unwrap()
        );
    }
}
