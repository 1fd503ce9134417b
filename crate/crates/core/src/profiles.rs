//! Defining sets, exhaustive enumeration of short perfect codes, embedding
//! search and cardinality-length profiles.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::exact_covers;
use crate::canonical::{automorphism_group, UnionFind};
use crate::linalg::block_parity_check;
use crate::word::{coord_bit, full_mask, BinaryCode};

/// Radius-1 ball around `x` as a point mask over `F_2^n`, `n <= 7`.
fn ball_mask(n: usize, x: u32) -> u128 {
    let mut m = 1u128 << x;
    for i in 0..n {
        m |= 1u128 << (x ^ (1 << i));
    }
    m
}

/// Every 1-perfect code of length 3 or 7, as an exact cover of the space by
/// radius-1 balls. Codes are sorted.
pub fn enumerate_perfect_codes(n: usize) -> Result<Vec<BinaryCode>> {
    if n != 3 && n != 7 {
        return Err(Error::OutOfRange(format!("enumeration supports n = 3 or 7, got {n}")));
    }
    let size = 1u32 << n;
    let balls: Vec<u128> = (0..size).map(|x| ball_mask(n, x)).collect();
    let universe = if size == 128 { u128::MAX } else { (1u128 << size) - 1 };
    let mut codes: Vec<BinaryCode> = exact_covers(universe, &balls)
        .into_iter()
        .map(|sol| BinaryCode::new(n, sol.into_iter().map(|k| k as u32)))
        .collect::<Result<_>>()?;
    codes.sort_by(|a, b| a.words().cmp(b.words()));
    Ok(codes)
}

/// Point mask of a code of length at most 7.
pub fn code_mask(c: &BinaryCode) -> u128 {
    c.words().iter().fold(0u128, |m, &w| m | 1u128 << w)
}

/// The codewords of one weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSlice {
    pub w: usize,
    pub words: BinaryCode,
}

impl WeightSlice {
    pub fn n(&self) -> usize {
        self.words.n()
    }
}

pub fn weight_slice(c: &BinaryCode, w: usize) -> WeightSlice {
    WeightSlice {
        w,
        words: BinaryCode::from_sorted_unchecked(c.n(), c.words_of_weight(w)),
    }
}

/// How a slice is matched against codes of the universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SliceMatch {
    /// The code's weight-w words are exactly the slice.
    Exact,
    /// The slice is contained in the code's weight-w words.
    Subset,
}

fn matches(c: &BinaryCode, slice: &WeightSlice, how: SliceMatch) -> bool {
    let own = c.words_of_weight(slice.w);
    match how {
        SliceMatch::Exact => own == slice.words.words(),
        SliceMatch::Subset => slice.words.words().iter().all(|w| own.binary_search(w).is_ok()),
    }
}

/// Number of universe codes matching the slice.
pub fn slice_matches(slice: &WeightSlice, universe: &[BinaryCode], how: SliceMatch) -> Result<usize> {
    if universe.is_empty() {
        return Err(Error::EmptyCode);
    }
    if universe.iter().any(|c| c.n() != slice.n()) {
        return Err(Error::Inconsistent("universe codes differ in length from the slice".into()));
    }
    Ok(universe.par_iter().filter(|c| matches(c, slice, how)).count())
}

/// True iff exactly one code of the universe matches the slice.
pub fn is_defining_slice(slice: &WeightSlice, universe: &[BinaryCode], how: SliceMatch) -> Result<bool> {
    Ok(slice_matches(slice, universe, how)? == 1)
}

/// True iff all universe codes with exactly this slice agree on every word
/// of smaller weight.
pub fn lighter_words_determined(slice: &WeightSlice, universe: &[BinaryCode]) -> Result<bool> {
    if universe.is_empty() {
        return Err(Error::EmptyCode);
    }
    let lighter = |c: &BinaryCode| -> Vec<u32> {
        c.words()
            .iter()
            .copied()
            .filter(|w| (w.count_ones() as usize) < slice.w)
            .collect()
    };
    let mut reference: Option<Vec<u32>> = None;
    for c in universe.iter().filter(|c| matches(c, slice, SliceMatch::Exact)) {
        let l = lighter(c);
        match &reference {
            None => reference = Some(l),
            Some(r) if *r != l => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}

/// Which of the two switching sets to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SVariant {
    /// Words `(1 + x, x, |x|)`.
    Complemented,
    /// Words `(x, x, |x|)`.
    Repeated,
}

/// A Hamming code with a distinguished switching set at its last coordinate.
#[derive(Clone, Debug)]
pub struct SComponent {
    pub code: BinaryCode,
    pub s: BinaryCode,
    /// 1-based coordinate (always the last).
    pub coord: usize,
}

/// Builds the code defined by the block parity-check matrix of order `m` and
/// the set of words `(1 + x, x, |x|)` or `(x, x, |x|)`, where `|x|` is the
/// weight of `x` modulo 2. With `restricted`, `x` is limited to `Ax = 0`.
pub fn build_s_component(m: usize, variant: SVariant, restricted: bool) -> Result<SComponent> {
    let h = block_parity_check(m)?;
    let code = h.null_space()?;
    let n = code.n();
    let half = (n - 1) / 2;
    let a_rows = crate::linalg::hamming_parity_check(m - 1)?;
    let ones = full_mask(half);
    let mut s = Vec::new();
    for x in 0..=ones {
        if restricted && a_rows.syndrome(x) != 0 {
            continue;
        }
        let first = match variant {
            SVariant::Complemented => ones ^ x,
            SVariant::Repeated => x,
        };
        let parity = x.count_ones() & 1;
        s.push((first << (half + 1)) | (x << 1) | parity);
    }
    Ok(SComponent {
        code,
        s: BinaryCode::new(n, s)?,
        coord: n,
    })
}

/// An injection of coordinates and a translation placing one code in another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    /// `coords[j]` is the 1-based host coordinate of coordinate `j + 1`.
    pub coords: Vec<usize>,
    /// Added after padding and permuting.
    pub translation: u32,
}

impl Embedding {
    /// Image of a guest word in the host space.
    pub fn apply(&self, n: usize, k: usize, a: u32) -> u32 {
        let mut w = 0u32;
        for j in 1..=k {
            if a & coord_bit(k, j) != 0 {
                w |= coord_bit(n, self.coords[j - 1]);
            }
        }
        w ^ self.translation
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbedOutcome {
    Found(Embedding),
    /// The search space was exhausted.
    NotFound,
    BudgetExhausted,
}

/// Searches for an embedding of `a` (length `k`) into `c` (length `n`):
/// a coordinate injection and translation mapping every word of `a`, padded
/// with zeros, onto a codeword. `node_budget` bounds the backtracking.
pub fn embed_search(a: &BinaryCode, c: &BinaryCode, node_budget: u64) -> Result<EmbedOutcome> {
    let k = a.n();
    let n = c.n();
    if k > n {
        return Err(Error::OutOfRange(format!("guest length {k} exceeds host length {n}")));
    }
    if a.is_empty() || c.is_empty() {
        return Err(Error::EmptyCode);
    }
    let a0 = a.words()[0];
    let guest: Vec<u32> = a.words().iter().map(|&w| w ^ a0).collect();
    // C + c and C + c' are permutation-equivalent when c, c' share an
    // Aut(C)-orbit, so one codeword per orbit suffices
    let aut = automorphism_group(c)?;
    let words = c.words();
    let mut uf = UnionFind::new(words.len());
    for g in &aut.generators {
        for (i, &w) in words.iter().enumerate() {
            let j = words.binary_search(&g.apply(w)).expect("automorphism preserves the code");
            uf.union(i, j);
        }
    }
    let reps: Vec<u32> = (0..words.len())
        .filter(|&i| uf.find(i) == i)
        .map(|i| words[i])
        .collect();
    // translates are searched in parallel against one shared node budget
    let budget = AtomicU64::new(node_budget);
    let exhausted = AtomicBool::new(false);
    let found = reps.par_iter().find_map_first(|&r| {
        let target = c.translate(r);
        let mut by_weight: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        for &w in target.words() {
            by_weight[w.count_ones() as usize].push(w);
        }
        let mut s = EmbedSearch {
            k,
            n,
            guest: &guest,
            by_weight: &by_weight,
            images: vec![0usize; k],
            budget: &budget,
        };
        match s.search(0, 0) {
            Some(true) => Some((s.images, r)),
            Some(false) => None,
            None => {
                exhausted.store(true, Ordering::Relaxed);
                None
            }
        }
    });
    if let Some((coords, r)) = found {
        let mut emb = Embedding {
            coords,
            translation: 0,
        };
        // guest word a maps to phi(a + a0) + r, so shift by phi(a0) + r
        let shift = emb.apply(n, k, a0);
        emb.translation = shift ^ r;
        return Ok(EmbedOutcome::Found(emb));
    }
    if exhausted.load(Ordering::Relaxed) {
        return Ok(EmbedOutcome::BudgetExhausted);
    }
    Ok(EmbedOutcome::NotFound)
}

struct EmbedSearch<'a> {
    k: usize,
    n: usize,
    guest: &'a [u32],
    by_weight: &'a [Vec<u32>],
    /// Host coordinate of each guest coordinate (1-based values).
    images: Vec<usize>,
    budget: &'a AtomicU64,
}

impl EmbedSearch<'_> {
    fn tick(&self) -> bool {
        self.budget
            .fetch_update(Ordering::Relaxed, Ordering::Relaxed, |b| b.checked_sub(1))
            .is_ok()
    }

    fn image_of(&self, g: u32) -> u32 {
        let mut out = 0u32;
        let mut rest = g;
        while rest != 0 {
            let low = rest.trailing_zeros() as usize;
            out |= coord_bit(self.n, self.images[self.k - 1 - low]);
            rest &= rest - 1;
        }
        out
    }

    /// Branches on the images of the guest word with the fewest unplaced
    /// support coordinates. `Some(true)` found, `Some(false)` exhausted,
    /// `None` out of budget.
    fn search(&mut self, placed: u32, used: u32) -> Option<bool> {
        if !self.tick() {
            return None;
        }
        if !self.feasible(placed, used) {
            return Some(false);
        }
        let next = self
            .guest
            .iter()
            .copied()
            .filter(|&g| g & !placed != 0)
            .min_by_key(|&g| (g & !placed).count_ones());
        let Some(g) = next else {
            // coordinates outside every support go to any unused host coordinates
            let mut free = (1..=self.n).filter(|&h| used & coord_bit(self.n, h) == 0);
            for j in 1..=self.k {
                if placed & coord_bit(self.k, j) == 0 {
                    self.images[j - 1] = free.next().expect("k <= n");
                }
            }
            return Some(true);
        };
        let open: Vec<usize> = (1..=self.k)
            .filter(|&j| g & !placed & coord_bit(self.k, j) != 0)
            .collect();
        let partial = self.image_of(g & placed);
        let list = &self.by_weight[g.count_ones() as usize];
        for &w in list.iter() {
            if w & used != partial {
                continue;
            }
            match self.spread(&open, w & !used, placed, used) {
                Some(false) => {}
                other => return other,
            }
        }
        Some(false)
    }

    /// Every bijection of `open` onto the host coordinates in `free`.
    fn spread(&mut self, open: &[usize], free: u32, placed: u32, used: u32) -> Option<bool> {
        let Some((&j, rest)) = open.split_first() else {
            return self.search(placed, used);
        };
        let mut bits = free;
        while bits != 0 {
            let low = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            self.images[j - 1] = self.n - low;
            let bit = 1u32 << low;
            match self.spread(rest, free & !bit, placed | coord_bit(self.k, j), used | bit) {
                Some(false) => {}
                other => return other,
            }
        }
        Some(false)
    }

    /// A guest word with its whole support placed has a known image, which
    /// must be a target word; otherwise some target word of its weight must
    /// agree with the partial image on the used host coordinates.
    fn feasible(&self, placed: u32, used: u32) -> bool {
        for &g in self.guest {
            let partial = self.image_of(g & placed);
            let list = &self.by_weight[g.count_ones() as usize];
            let ok = if g & !placed == 0 {
                list.binary_search(&partial).is_ok()
            } else {
                list.iter().any(|&w| w & used == partial)
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Non-logarithmic cardinality-length profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClProfile {
    /// `kappa_prime[i-1]` is the largest number of codewords agreeing on
    /// some `n - i` coordinates.
    pub kappa_prime: Vec<u64>,
}

impl ClProfile {
    /// Comma-separated row.
    pub fn row(&self) -> String {
        self.kappa_prime
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Computes the profile by projecting onto every coordinate subset.
pub fn clp(c: &BinaryCode) -> Result<ClProfile> {
    if c.is_empty() {
        return Err(Error::EmptyCode);
    }
    let n = c.n();
    if n > 24 {
        return Err(Error::OutOfRange(format!("profile limited to n <= 24, got {n}")));
    }
    let words = c.words();
    let full = full_mask(n);
    // best[s] = max multiplicity over subsets T with |T| = s
    let best: Vec<u64> = (0..=full)
        .into_par_iter()
        .fold(
            || (vec![0u64; n + 1], vec![0u32; 1usize << n], Vec::<u32>::new()),
            |(mut best, mut counts, mut touched), t| {
                let s = t.count_ones() as usize;
                let mut top = 0u32;
                for &w in words {
                    let key = w & t;
                    let e = &mut counts[key as usize];
                    if *e == 0 {
                        touched.push(key);
                    }
                    *e += 1;
                    top = top.max(*e);
                }
                for &key in &touched {
                    counts[key as usize] = 0;
                }
                touched.clear();
                best[s] = best[s].max(top as u64);
                (best, counts, touched)
            },
        )
        .map(|(b, _, _)| b)
        .reduce(|| vec![0u64; n + 1], |a, b| a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect());
    Ok(ClProfile {
        kappa_prime: (1..=n).map(|i| best[n - i]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hamming_code;

    /// Direct subcube enumeration for short codes.
    fn clp_oracle(c: &BinaryCode) -> Vec<u64> {
        let n = c.n();
        (1..=n)
            .map(|i| {
                let mut best = 0u64;
                for t in 0..=full_mask(n) {
                    if t.count_ones() as usize != n - i {
                        continue;
                    }
                    for v in 0..=full_mask(n) {
                        if v & !t != 0 {
                            continue;
                        }
                        let cnt = c.words().iter().filter(|&&w| w & t == v).count() as u64;
                        best = best.max(cnt);
                    }
                }
                best
            })
            .collect()
    }

    #[test]
    fn length3_codes() {
        let codes = enumerate_perfect_codes(3).unwrap();
        assert_eq!(codes.len(), 4);
        for c in &codes {
            assert!(c.is_perfect());
            assert_eq!(c.words()[0] ^ c.words()[1], 0b111);
        }
    }

    #[test]
    fn clp_matches_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=7);
            let size = rng.gen_range(1..=(1usize << n));
            let c = BinaryCode::new(n, (0..size).map(|_| rng.gen_range(0..(1u32 << n)))).unwrap();
            assert_eq!(clp(&c).unwrap().kappa_prime, clp_oracle(&c));
        }
        let h = hamming_code(3).unwrap();
        assert_eq!(clp(&h).unwrap().kappa_prime, clp_oracle(&h));
    }

    #[test]
    fn s_sets_are_codewords() {
        for m in 3..=4 {
            for v in [SVariant::Complemented, SVariant::Repeated] {
                let s = build_s_component(m, v, false).unwrap();
                assert_eq!(s.s.len(), 1 << ((s.code.n() - 1) / 2));
                assert!(s.s.words().iter().all(|&w| s.code.contains_bits(w)));
            }
        }
        let r = build_s_component(4, SVariant::Complemented, true).unwrap();
        assert_eq!(r.s.len(), 16);
    }

    #[test]
    fn embedding_is_sound() {
        let h = hamming_code(3).unwrap();
        let a = BinaryCode::from_strs(&["0000", "1110"]).unwrap();
        match embed_search(&a, &h, 1_000_000).unwrap() {
            EmbedOutcome::Found(e) => {
                for &w in a.words() {
                    assert!(h.contains_bits(e.apply(7, 4, w)));
                }
            }
            other => panic!("expected embedding, got {other:?}"),
        }
    }

    #[test]
    fn budget_is_reported() {
        let h = hamming_code(4).unwrap();
        let a = BinaryCode::from_strs(&["0000000", "0001111", "0110011"]).unwrap();
        assert_eq!(embed_search(&a, &h, 1).unwrap(), EmbedOutcome::BudgetExhausted);
    }
}
