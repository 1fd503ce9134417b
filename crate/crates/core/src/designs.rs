//! Steiner systems inside perfect codes, the hypergraph ST(C), independence
//! numbers and systematic coordinates.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::canonical::{canonical_labeling, CanonicalForm, ColoredGraph, GroupOrder};
use crate::error::{Error, Result};
use crate::word::{coord_bit, BinaryCode, Word};

/// A set of `k`-subsets of the points `1..=v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockDesign {
    v: usize,
    k: usize,
    /// Each block ascending and 1-based; blocks in lexicographic order.
    blocks: Vec<Vec<u8>>,
}

/// Steiner triple system: every pair in exactly one block.
pub type TripleSystem = BlockDesign;
/// Steiner quadruple system: every triple in exactly one block.
pub type QuadSystem = BlockDesign;
/// The 3-uniform hypergraph ST(C).
pub type Hypergraph3 = BlockDesign;

impl BlockDesign {
    pub fn new(v: usize, k: usize, blocks: impl IntoIterator<Item = Vec<u8>>) -> Result<Self> {
        let mut bs: Vec<Vec<u8>> = Vec::new();
        for mut b in blocks {
            b.sort_unstable();
            b.dedup();
            if b.len() != k || b.iter().any(|&p| p == 0 || p as usize > v) {
                return Err(Error::Inconsistent(format!("bad block {b:?} for v={v}, k={k}")));
            }
            bs.push(b);
        }
        bs.sort();
        bs.dedup();
        Ok(BlockDesign { v, k, blocks: bs })
    }

    /// Blocks from word supports: coordinate `i` of a length-`v` word is point `i`.
    pub fn from_supports(v: usize, k: usize, words: &[u32]) -> Result<Self> {
        let blocks = words.iter().map(|&w| {
            (1..=v)
                .filter(|&i| w & coord_bit(v, i) != 0)
                .map(|i| i as u8)
                .collect::<Vec<u8>>()
        });
        BlockDesign::new(v, k, blocks)
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Blocks as point bitmasks, bit `p-1` for point `p`.
    pub fn masks(&self) -> Vec<u32> {
        self.blocks
            .iter()
            .map(|b| b.iter().fold(0u32, |m, &p| m | 1 << (p - 1)))
            .collect()
    }

    /// Whether every `t`-subset of points lies in exactly one block.
    pub fn is_steiner(&self, t: usize) -> bool {
        if t == 0 || t > self.k || self.v > 31 {
            return false;
        }
        let mut cover: HashMap<u32, u32> = HashMap::new();
        for m in self.masks() {
            for sub in subsets_of(m, t) {
                *cover.entry(sub).or_insert(0) += 1;
            }
        }
        let total = binom(self.v, t);
        cover.len() == total && cover.values().all(|&c| c == 1)
    }

    pub fn contains_block(&self, block: &[u8]) -> bool {
        let mut b = block.to_vec();
        b.sort_unstable();
        self.blocks.binary_search(&b).is_ok()
    }

    /// Point-block incidence graph; points get color 0, blocks color 1.
    pub fn incidence_graph(&self) -> ColoredGraph {
        let mut g = ColoredGraph::new(self.v + self.blocks.len());
        for (j, b) in self.blocks.iter().enumerate() {
            let bv = self.v + j;
            g.set_color(bv, 1);
            for &p in b {
                g.add_edge(p as usize - 1, bv);
            }
        }
        g.normalize();
        g
    }

    /// The isomorphic copy with points relabeled canonically.
    pub fn canonical(&self) -> BlockDesign {
        let lab = canonical_labeling(&self.incidence_graph()).labels();
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&p| lab[p as usize - 1] as u8 + 1).collect());
        BlockDesign::new(self.v, self.k, blocks).expect("relabeling keeps blocks valid")
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        let c = self.canonical();
        let mut bytes = b"DCF1".to_vec();
        bytes.push(self.v as u8);
        bytes.push(self.k as u8);
        bytes.extend_from_slice(&(c.blocks.len() as u32).to_le_bytes());
        for b in &c.blocks {
            bytes.extend_from_slice(b);
        }
        CanonicalForm::from_bytes(bytes)
    }

    pub fn automorphism_order(&self) -> GroupOrder {
        canonical_labeling(&self.incidence_graph()).group_order
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, j| acc * (n - j) / (j + 1))
}

fn subsets_of(mask: u32, t: usize) -> Vec<u32> {
    let pts: Vec<u32> = (0..32).filter(|&b| mask >> b & 1 == 1).collect();
    let mut out = Vec::new();
    let k = pts.len();
    for sel in 0u32..(1 << k) {
        if sel.count_ones() as usize == t {
            out.push(
                (0..k)
                    .filter(|&i| sel >> i & 1 == 1)
                    .fold(0u32, |m, i| m | 1 << pts[i]),
            );
        }
    }
    out
}

fn check_member(c: &BinaryCode, x: Word) -> Result<()> {
    if x.len() != c.n() {
        return Err(Error::LengthMismatch(x.len(), c.n()));
    }
    if !c.contains(x) {
        return Err(Error::NotACodeword);
    }
    Ok(())
}

/// The weight-3 words of `C + x`, as a triple system on the coordinates.
pub fn sts_of(c: &BinaryCode, x: Word) -> Result<TripleSystem> {
    check_member(c, x)?;
    if !c.is_perfect() {
        return Err(Error::NotPerfect);
    }
    BlockDesign::from_supports(c.n(), 3, &c.translate(x.bits()).words_of_weight(3))
}

/// The weight-4 words of `C + x` for an extended perfect code.
pub fn sqs_of(c: &BinaryCode, x: Word) -> Result<QuadSystem> {
    check_member(c, x)?;
    if !c.is_extended_perfect() {
        return Err(Error::NotPerfect);
    }
    BlockDesign::from_supports(c.n(), 4, &c.translate(x.bits()).words_of_weight(4))
}

/// All weight-3 masks of length `n`.
fn weight3_masks(n: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push(1 << a | 1 << b | 1 << c);
            }
        }
    }
    out.sort_unstable();
    out
}

/// `ST(C)`: supports of differences of codeword pairs at distance 3.
pub fn st_set(c: &BinaryCode) -> Result<Hypergraph3> {
    let n = c.n();
    let set = c.word_set();
    let triples: Vec<u32> = weight3_masks(n)
        .into_par_iter()
        .filter(|&t| c.words().iter().any(|&w| set.contains(w ^ t)))
        .collect();
    BlockDesign::from_supports(n, 3, &triples)
}

/// A maximum set of points containing no block, by branch and bound.
pub fn maximum_independent_set(h: &BlockDesign) -> Vec<usize> {
    let v = h.v;
    let masks = h.masks();
    // order points by decreasing degree so conflicts appear early
    let mut deg = vec![0usize; v];
    for &m in &masks {
        for p in 0..v {
            if m >> p & 1 == 1 {
                deg[p] += 1;
            }
        }
    }
    let mut order: Vec<usize> = (0..v).collect();
    order.sort_by_key(|&p| (std::cmp::Reverse(deg[p]), p));
    let mut best = 0u32;
    let mut best_size = 0usize;
    search(&masks, &order, 0, 0, 0, &mut best, &mut best_size);
    (0..v).filter(|&p| best >> p & 1 == 1).map(|p| p + 1).collect()
}

fn search(
    masks: &[u32],
    order: &[usize],
    idx: usize,
    chosen: u32,
    forbidden: u32,
    best: &mut u32,
    best_size: &mut usize,
) {
    let size = chosen.count_ones() as usize;
    if size > *best_size {
        *best_size = size;
        *best = chosen;
    }
    let remaining = order[idx..].iter().filter(|&&p| forbidden >> p & 1 == 0).count();
    if size + remaining <= *best_size {
        return;
    }
    let Some(pos) = (idx..order.len()).find(|&i| forbidden >> order[i] & 1 == 0) else {
        return;
    };
    let p = order[pos];
    let with = chosen | 1 << p;
    // a block with two chosen points forbids its third point
    let mut newly = forbidden;
    for &m in masks {
        if m >> p & 1 == 1 && (m & with).count_ones() == m.count_ones() - 1 {
            newly |= m & !with;
        }
    }
    search(masks, order, pos + 1, with, newly, best, best_size);
    search(masks, order, pos + 1, chosen, forbidden | 1 << p, best, best_size);
}

/// Size of a maximum independent set.
pub fn independence_number(h: &BlockDesign) -> usize {
    maximum_independent_set(h).len()
}

/// A set of `k` coordinates (1-based) on which the code projects onto all
/// `2^k` tuples, where `|C| = 2^k`.
pub fn systematic_coordinates(c: &BinaryCode) -> Result<Option<Vec<usize>>> {
    let size = c.len();
    if !size.is_power_of_two() {
        return Err(Error::OutOfRange(format!("code size {size} is not a power of two")));
    }
    let n = c.n();
    let k = size.trailing_zeros() as usize;
    if k > n {
        return Ok(None);
    }
    let found = (0u32..1 << n)
        .into_par_iter()
        .filter(|m| m.count_ones() as usize == k)
        .find_first(|&m| projects_onto_all(c, m, k));
    Ok(found.map(|m| (1..=n).filter(|&i| m & coord_bit(n, i) != 0).collect()))
}

fn projects_onto_all(c: &BinaryCode, mask: u32, k: usize) -> bool {
    let mut seen = vec![false; 1 << k];
    for &w in c.words() {
        let key = pext(w, mask) as usize;
        if seen[key] {
            return false;
        }
        seen[key] = true;
    }
    true
}

/// Gathers the bits of `w` selected by `mask` into the low bits.
fn pext(w: u32, mask: u32) -> u32 {
    let mut out = 0u32;
    let mut bit = 0;
    let mut m = mask;
    while m != 0 {
        let low = m.trailing_zeros();
        out |= ((w >> low) & 1) << bit;
        bit += 1;
        m &= m - 1;
    }
    out
}

pub fn is_systematic(c: &BinaryCode) -> Result<bool> {
    Ok(systematic_coordinates(c)?.is_some())
}

/// Groups designs into isomorphism classes, listed by first member.
pub fn design_isomorphism_classes(designs: &[BlockDesign]) -> Result<Vec<Vec<usize>>> {
    if let Some(first) = designs.first() {
        if designs.iter().any(|d| d.v != first.v || d.k != first.k) {
            return Err(Error::Inconsistent("designs of different type".into()));
        }
    }
    let forms: Vec<CanonicalForm> = designs.par_iter().map(|d| d.canonical_form()).collect();
    let mut index: HashMap<&CanonicalForm, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, f) in forms.iter().enumerate() {
        let k = *index.entry(f).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[k].push(i);
    }
    Ok(classes)
}

/// All Steiner triple systems `sts_of(C, x)` for `x` in `C`.
pub fn all_sts(c: &BinaryCode) -> Result<Vec<TripleSystem>> {
    if !c.is_perfect() {
        return Err(Error::NotPerfect);
    }
    let n = c.n();
    c.words()
        .par_iter()
        .map(|&x| BlockDesign::from_supports(n, 3, &c.translate(x).words_of_weight(3)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hamming_code;

    fn brute_alpha(h: &BlockDesign) -> usize {
        let masks = h.masks();
        (0u32..1 << h.v())
            .filter(|&s| masks.iter().all(|&m| m & s != m))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn fano_plane() {
        let h = hamming_code(3).unwrap();
        let s = sts_of(&h, Word::zero(7).unwrap()).unwrap();
        assert_eq!(s.len(), 7);
        assert!(s.is_steiner(2));
        assert_eq!(s.automorphism_order().to_u128(), Some(168));
    }

    #[test]
    fn pg32_lines_close_under_xor() {
        let h = hamming_code(4).unwrap();
        let s = sts_of(&h, Word::zero(15).unwrap()).unwrap();
        assert_eq!(s.len(), 35);
        assert!(s.is_steiner(2));
        // columns are the binary numbers of the coordinates
        for b in s.blocks() {
            assert_eq!(b[0] ^ b[1] ^ b[2], 0);
        }
    }

    #[test]
    fn not_a_codeword_rejected() {
        let h = hamming_code(3).unwrap();
        assert_eq!(sts_of(&h, Word::unit(7, 1).unwrap()), Err(Error::NotACodeword));
    }

    #[test]
    fn independence_examples() {
        let empty = BlockDesign::new(15, 3, Vec::<Vec<u8>>::new()).unwrap();
        assert_eq!(independence_number(&empty), 15);
        let all = BlockDesign::from_supports(15, 3, &weight3_masks(15)).unwrap();
        assert_eq!(all.len(), 455);
        assert_eq!(independence_number(&all), 2);
        let h = hamming_code(4).unwrap();
        assert_eq!(independence_number(&st_set(&h).unwrap()), 8);
    }

    #[test]
    fn independence_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let all = weight3_masks(10);
        for _ in 0..60 {
            let pick: Vec<u32> = all.iter().copied().filter(|_| rng.gen_bool(0.15)).collect();
            let h = BlockDesign::from_supports(10, 3, &pick).unwrap();
            let s = maximum_independent_set(&h);
            assert_eq!(s.len(), brute_alpha(&h));
            let sm = s.iter().fold(0u32, |m, &p| m | 1 << (p - 1));
            assert!(h.masks().iter().all(|&m| m & sm != m));
        }
    }

    #[test]
    fn systematic_examples() {
        assert!(is_systematic(&hamming_code(4).unwrap()).unwrap());
        assert!(is_systematic(&BinaryCode::from_strs(&["00", "01"]).unwrap()).unwrap());
        assert!(is_systematic(&BinaryCode::from_strs(&["00", "01", "10"]).unwrap()).is_err());
        // even-weight code of length 3
        let c = BinaryCode::from_strs(&["000", "011", "101", "110"]).unwrap();
        assert_eq!(systematic_coordinates(&c).unwrap(), Some(vec![2, 3]));
    }

    #[test]
    fn sqs_of_extended_hamming() {
        let e = hamming_code(4).unwrap().extend().unwrap();
        let q = sqs_of(&e, Word::zero(16).unwrap()).unwrap();
        assert_eq!(q.len(), 140);
        assert!(q.is_steiner(3));
    }
}
