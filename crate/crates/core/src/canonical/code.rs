//! Code graphs: codes encoded as colored graphs so that graph isomorphism
//! coincides with code equivalence (or isomorphism), plus the reports built on
//! top of the labeler.

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::graph::{canonical_labeling, ColoredGraph, LabelingResult};
use super::group::{GroupOrder, UnionFind};
use crate::error::{Error, Result};
use crate::word::{coord_bit, full_mask, BinaryCode, CoordPerm};

/// Which transformations count as symmetries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Coordinate permutations and value permutations per coordinate.
    Equivalence,
    /// Coordinate permutations only.
    Isomorphism,
}

impl Mode {
    fn tag(self) -> u8 {
        match self {
            Mode::Equivalence => b'E',
            Mode::Isomorphism => b'I',
        }
    }
}

const KIND_CODEWORD: u64 = 0;
const KIND_VALUE: u64 = 1;
const KIND_HUB: u64 = 2;
const PAYLOAD: u64 = (1 << 56) - 1;

/// A code as a colored graph.
///
/// Vertices are laid out as codewords, then value vertices grouped by
/// coordinate, then one hub per coordinate. Codeword `c` is joined to value
/// vertex `(i, c_i)`, and each hub is joined to the value vertices of its
/// coordinate.
#[derive(Clone, Debug)]
pub struct CodeGraph {
    graph: ColoredGraph,
    mode: Mode,
    alphabets: Vec<u32>,
    codewords: usize,
    value_start: Vec<usize>,
    hub_start: usize,
}

impl CodeGraph {
    /// Builds the graph for words given as digit rows over `alphabets`.
    /// `codeword_colors`, when present, refines the codeword color class and
    /// must be invariant under the symmetries of the chosen mode.
    pub fn from_rows(
        alphabets: &[u32],
        rows: &[Vec<u32>],
        mode: Mode,
        codeword_colors: Option<&[u64]>,
    ) -> Result<CodeGraph> {
        if rows.is_empty() {
            return Err(Error::EmptyCode);
        }
        let k = alphabets.len();
        let m = rows.len();
        let mut value_start = Vec::with_capacity(k);
        let mut next = m;
        for &q in alphabets {
            value_start.push(next);
            next += q as usize;
        }
        let hub_start = next;
        let total = hub_start + k;
        let mut g = ColoredGraph::new(total);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::LengthMismatch(row.len(), k));
            }
            let color = codeword_colors.map_or(0, |c| c[r] & PAYLOAD);
            g.set_color(r, (KIND_CODEWORD << 56) | color);
            g.set_preferred(r, true);
            for (i, &d) in row.iter().enumerate() {
                if d >= alphabets[i] {
                    return Err(Error::OutOfRange(format!("digit {d} at coordinate {}", i + 1)));
                }
                g.add_edge(r, value_start[i] + d as usize);
            }
        }
        for (i, &q) in alphabets.iter().enumerate() {
            let hub = hub_start + i;
            g.set_color(hub, (KIND_HUB << 56) | q as u64);
            for d in 0..q as usize {
                let v = value_start[i] + d;
                let digit = match mode {
                    Mode::Equivalence => 0,
                    Mode::Isomorphism => d as u64 + 1,
                };
                g.set_color(v, (KIND_VALUE << 56) | ((q as u64) << 16) | digit);
                g.add_edge(hub, v);
            }
        }
        g.normalize();
        Ok(CodeGraph {
            graph: g,
            mode,
            alphabets: alphabets.to_vec(),
            codewords: m,
            value_start,
            hub_start,
        })
    }

    pub fn graph(&self) -> &ColoredGraph {
        &self.graph
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn codeword_vertex_count(&self) -> usize {
        self.codewords
    }

    pub fn value_vertex_count(&self) -> usize {
        self.hub_start - self.codewords
    }

    pub fn hub_vertex_count(&self) -> usize {
        self.alphabets.len()
    }

    /// Edges between codeword vertices and value vertices.
    pub fn incidence_edge_count(&self) -> usize {
        self.codewords * self.alphabets.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    fn hub(&self, i: usize) -> usize {
        self.hub_start + i
    }

    fn value(&self, i: usize, d: usize) -> usize {
        self.value_start[i] + d
    }

    /// Translates a graph automorphism into a coordinate map and per-coordinate
    /// value maps: coordinate `i` goes to `coords[i]` and digit `d` there
    /// becomes `values[i][d]`.
    pub fn decode_automorphism(&self, gamma: &[u32]) -> (Vec<usize>, Vec<Vec<u32>>) {
        let k = self.alphabets.len();
        let mut coords = vec![0usize; k];
        let mut values = Vec::with_capacity(k);
        for i in 0..k {
            let j = gamma[self.hub(i)] as usize - self.hub_start;
            coords[i] = j;
            let vm = (0..self.alphabets[i] as usize)
                .map(|d| (gamma[self.value(i, d)] as usize - self.value_start[j]) as u32)
                .collect();
            values.push(vm);
        }
        (coords, values)
    }
}

/// A canonical representative of a code's class, as bytes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    bytes: Vec<u8>,
}

impl CanonicalForm {
    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        CanonicalForm { bytes }
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Lowercase hex SHA-256 of the bytes.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(&self.bytes))
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.bytes)
    }
}

/// Result of canonically labeling a code graph.
#[derive(Clone, Debug)]
pub struct CanonicalCode {
    pub form: CanonicalForm,
    /// Alphabet sizes in canonical coordinate order.
    pub alphabets: Vec<u32>,
    /// Canonical digit rows, sorted.
    pub rows: Vec<Vec<u32>>,
    pub labeling: LabelingResult,
}

/// Labels a code graph and derives the canonical representative code.
pub fn canonicalize(g: &CodeGraph) -> CanonicalCode {
    let labeling = canonical_labeling(&g.graph);
    let labels = labeling.labels();
    let k = g.alphabets.len();
    let mut coords: Vec<usize> = (0..k).collect();
    coords.sort_by_key(|&i| labels[g.hub(i)]);
    let mut digit_map: Vec<Vec<u32>> = Vec::with_capacity(k);
    for i in 0..k {
        let q = g.alphabets[i] as usize;
        let mut ds: Vec<usize> = (0..q).collect();
        ds.sort_by_key(|&d| labels[g.value(i, d)]);
        let mut map = vec![0u32; q];
        for (rank, &d) in ds.iter().enumerate() {
            map[d] = rank as u32;
        }
        digit_map.push(map);
    }
    let alphabets: Vec<u32> = coords.iter().map(|&i| g.alphabets[i]).collect();
    // codeword vertex r is adjacent to value (i, d) exactly when row r has d at i
    let mut rows: Vec<Vec<u32>> = (0..g.codewords)
        .map(|r| {
            let mut row = vec![0u32; k];
            for &u in g.graph.neighbors(r) {
                let u = u as usize;
                let i = match g.value_start.binary_search(&u) {
                    Ok(i) => i,
                    Err(i) => i - 1,
                };
                let d = u - g.value_start[i];
                row[i] = d as u32;
            }
            coords.iter().map(|&i| digit_map[i][row[i] as usize]).collect()
        })
        .collect();
    rows.sort();
    let form = form_bytes(g.mode, &alphabets, &rows);
    CanonicalCode {
        form,
        alphabets,
        rows,
        labeling,
    }
}

fn form_bytes(mode: Mode, alphabets: &[u32], rows: &[Vec<u32>]) -> CanonicalForm {
    let mut b = Vec::new();
    b.extend_from_slice(b"PCF1");
    b.push(mode.tag());
    b.push(alphabets.len() as u8);
    for &q in alphabets {
        b.push(q as u8);
    }
    b.extend_from_slice(&(rows.len() as u32).to_le_bytes());
    let binary = alphabets.iter().all(|&q| q == 2);
    for row in rows {
        if binary {
            let w = row.iter().fold(0u32, |acc, &d| (acc << 1) | d);
            b.extend_from_slice(&w.to_le_bytes());
        } else {
            b.extend(row.iter().map(|&d| d as u8));
        }
    }
    CanonicalForm { bytes: b }
}

fn binary_rows(c: &BinaryCode) -> Vec<Vec<u32>> {
    let n = c.n();
    c.words()
        .iter()
        .map(|&w| (1..=n).map(|i| (w & coord_bit(n, i) != 0) as u32).collect())
        .collect()
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    let mut z = (h ^ x).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// An invariant of `C + c` for each codeword `c`: distance profile, the
/// coordinate degree profile of the nearest codewords, and the number of
/// Pasch configurations among weight-3 differences. Refining codeword colors
/// by it leaves the classes unchanged but shortens the search for codes with
/// little symmetry.
fn codeword_invariants(c: &BinaryCode) -> Vec<u64> {
    let n = c.n();
    let words = c.words();
    words
        .par_iter()
        .map(|&w| {
            let mut counts = [0u32; 32];
            let mut near: Vec<u32> = Vec::new();
            let mut dmin = usize::MAX;
            for &y in words {
                let x = y ^ w;
                let d = x.count_ones() as usize;
                counts[d] += 1;
                if d > 0 && d <= dmin {
                    if d < dmin {
                        dmin = d;
                        near.clear();
                    }
                    near.push(x);
                }
            }
            let mut h = mix(0x5eed, n as u64);
            for &k in &counts[..=n] {
                h = mix(h, k as u64);
            }
            let mut deg = vec![0u32; n];
            for &x in &near {
                let mut b = x;
                while b != 0 {
                    deg[b.trailing_zeros() as usize] += 1;
                    b &= b - 1;
                }
            }
            deg.sort_unstable();
            for d in deg {
                h = mix(h, d as u64);
            }
            if dmin == 3 {
                h = mix(h, pasch_count(&near).unwrap_or(u64::MAX));
            }
            h
        })
        .collect()
}

/// Number of Pasch configurations in a partial triple system given as
/// bitmasks, or `None` if two triples share a pair.
pub fn pasch_count(triples: &[u32]) -> Option<u64> {
    let mut third = [[u8::MAX; 32]; 32];
    for &t in triples {
        let p: Vec<usize> = (0..32).filter(|&b| t >> b & 1 == 1).collect();
        if p.len() != 3 {
            return None;
        }
        for (a, b, c) in [(p[0], p[1], p[2]), (p[0], p[2], p[1]), (p[1], p[2], p[0])] {
            if third[a][b] != u8::MAX {
                return None;
            }
            third[a][b] = c as u8;
            third[b][a] = c as u8;
        }
    }
    let mut total = 0u64;
    for (i, &a) in triples.iter().enumerate() {
        for &b in &triples[i + 1..] {
            let common = a & b;
            if common.count_ones() != 1 {
                continue;
            }
            let ra = a & !common;
            let rb = b & !common;
            let (a1, a2) = (ra.trailing_zeros() as usize, 31 - ra.leading_zeros() as usize);
            let (b1, b2) = (rb.trailing_zeros() as usize, 31 - rb.leading_zeros() as usize);
            for (x1, y1, x2, y2) in [(a1, b1, a2, b2), (a1, b2, a2, b1)] {
                let z = third[x1][y1];
                if z != u8::MAX && z == third[x2][y2] {
                    total += 1;
                }
            }
        }
    }
    Some(total / 6)
}

/// Encodes a binary code as a colored graph.
pub fn encode(c: &BinaryCode, mode: Mode) -> Result<CodeGraph> {
    let colors = codeword_invariants(c);
    CodeGraph::from_rows(&vec![2; c.n()], &binary_rows(c), mode, Some(&colors))
}

/// Encodes without the codeword invariant coloring (plain incidence gadget).
pub fn encode_plain(c: &BinaryCode, mode: Mode) -> Result<CodeGraph> {
    CodeGraph::from_rows(&vec![2; c.n()], &binary_rows(c), mode, None)
}

pub fn canonical_form(g: &CodeGraph) -> CanonicalForm {
    canonicalize(g).form
}

/// Canonical representative of the class of `c`.
pub fn canonical_code(c: &BinaryCode, mode: Mode) -> Result<BinaryCode> {
    let cc = canonicalize(&encode(c, mode)?);
    BinaryCode::new(
        c.n(),
        cc.rows
            .iter()
            .map(|r| r.iter().fold(0u32, |acc, &d| (acc << 1) | d)),
    )
}

pub fn code_canonical_form(c: &BinaryCode, mode: Mode) -> Result<CanonicalForm> {
    Ok(canonical_form(&encode(c, mode)?))
}

fn same_shape(c1: &BinaryCode, c2: &BinaryCode) -> Result<bool> {
    if c1.n() != c2.n() {
        return Err(Error::LengthMismatch(c1.n(), c2.n()));
    }
    Ok(c1.len() == c2.len())
}

pub fn are_equivalent(c1: &BinaryCode, c2: &BinaryCode) -> Result<bool> {
    if !same_shape(c1, c2)? {
        return Ok(false);
    }
    Ok(code_canonical_form(c1, Mode::Equivalence)? == code_canonical_form(c2, Mode::Equivalence)?)
}

pub fn are_isomorphic(c1: &BinaryCode, c2: &BinaryCode) -> Result<bool> {
    if !same_shape(c1, c2)? {
        return Ok(false);
    }
    Ok(code_canonical_form(c1, Mode::Isomorphism)? == code_canonical_form(c2, Mode::Isomorphism)?)
}

/// An element `(π, x)` of Aut(C), meaning `C = π(C + x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeAutomorphism {
    pub perm: CoordPerm,
    pub translation: u32,
}

impl CodeAutomorphism {
    /// Image of a word: `π(z + x)`.
    pub fn apply(&self, z: u32) -> u32 {
        self.perm.apply_bits(z ^ self.translation)
    }
}

/// Automorphism group summary for a binary code.
#[derive(Clone, Debug)]
pub struct AutGroupReport {
    pub n: usize,
    pub order: GroupOrder,
    pub generators: Vec<CodeAutomorphism>,
    /// Sorted ascending.
    pub codeword_orbit_sizes: Vec<usize>,
    /// Sorted ascending.
    pub coordinate_orbit_sizes: Vec<usize>,
    pub symmetry_order: GroupOrder,
    pub symmetry_generators: Vec<CoordPerm>,
    /// 1-based coordinates fixed by every symmetry.
    pub fixed_coordinates: Vec<usize>,
    pub coordinate_fixed_count: usize,
}

/// Renders sizes as `g1^a1 g2^a2 ...`, sorted by `g`.
pub fn orbit_notation(sizes: &[usize]) -> String {
    let mut s = sizes.to_vec();
    s.sort_unstable();
    let mut parts = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let mut j = i;
        while j < s.len() && s[j] == s[i] {
            j += 1;
        }
        parts.push(format!("{}^{}", s[i], j - i));
        i = j;
    }
    parts.join(" ")
}

impl AutGroupReport {
    pub fn codeword_orbits(&self) -> String {
        orbit_notation(&self.codeword_orbit_sizes)
    }
}

fn binary_automorphism(g: &CodeGraph, gamma: &[u32], n: usize) -> CodeAutomorphism {
    let (coords, values) = g.decode_automorphism(gamma);
    let mut x = 0u32;
    for i in 0..n {
        if values[i][0] == 1 {
            x |= coord_bit(n, i + 1);
        }
    }
    CodeAutomorphism {
        perm: CoordPerm::from_images(coords).expect("hub images form a permutation"),
        translation: x,
    }
}

fn sorted_class_sizes(uf: &UnionFind, range: std::ops::Range<usize>) -> Vec<usize> {
    let mut seen = std::collections::HashMap::new();
    for v in range {
        *seen.entry(uf.find(v)).or_insert(0usize) += 1;
    }
    let mut s: Vec<usize> = seen.into_values().collect();
    s.sort_unstable();
    s
}

/// Computes Aut(C) and Sym(C).
pub fn automorphism_group(c: &BinaryCode) -> Result<AutGroupReport> {
    if c.is_empty() {
        return Err(Error::EmptyCode);
    }
    let n = c.n();
    let ge = encode(c, Mode::Equivalence)?;
    let le = canonical_labeling(ge.graph());
    let generators: Vec<CodeAutomorphism> =
        le.generators.iter().map(|g| binary_automorphism(&ge, g, n)).collect();
    let uf = super::group::orbits(ge.vertex_count(), &le.generators);
    let codeword_orbit_sizes = sorted_class_sizes(&uf, 0..c.len());
    let coordinate_orbit_sizes = sorted_class_sizes(&uf, ge.hub_start..ge.hub_start + n);

    let gi = encode(c, Mode::Isomorphism)?;
    let li = canonical_labeling(gi.graph());
    let symmetry_generators: Vec<CoordPerm> =
        li.generators.iter().map(|g| binary_automorphism(&gi, g, n).perm).collect();
    let fixed_coordinates: Vec<usize> = (0..n)
        .filter(|&i| symmetry_generators.iter().all(|p| p.image(i) == i))
        .map(|i| i + 1)
        .collect();
    Ok(AutGroupReport {
        n,
        order: le.group_order,
        generators,
        codeword_orbit_sizes,
        coordinate_orbit_sizes,
        symmetry_order: li.group_order,
        symmetry_generators,
        coordinate_fixed_count: fixed_coordinates.len(),
        fixed_coordinates,
    })
}

/// Largest length for which orbits on the whole space are materialized.
pub const MAX_SPACE_LEN: usize = 24;

/// Orbit index of every word of `F_2^n` under the action `z -> π(z + x)` of
/// the given automorphisms. Orbit indices are numbered by smallest member.
pub fn space_orbits(n: usize, gens: &[CodeAutomorphism]) -> Result<Vec<u32>> {
    if n > MAX_SPACE_LEN {
        return Err(Error::OutOfRange(format!("length {n} exceeds {MAX_SPACE_LEN}")));
    }
    let size = 1usize << n;
    let mut uf = UnionFind::new(size);
    for g in gens {
        for z in 0..size as u32 {
            uf.union(z as usize, g.apply(z) as usize);
        }
    }
    let mut id = vec![u32::MAX; size];
    let mut out = vec![0u32; size];
    let mut next = 0u32;
    for z in 0..size {
        let r = uf.find(z);
        if id[r] == u32::MAX {
            id[r] = next;
            next += 1;
        }
        out[z] = id[r];
    }
    Ok(out)
}

/// Number of Aut(C)-orbits on `F_2^n`, which equals the number of
/// isomorphism classes among the translates of `C`.
pub fn isomorphism_classes_in_equivalence_class(c: &BinaryCode) -> Result<usize> {
    let report = automorphism_group(c)?;
    let orbits = space_orbits(c.n(), &report.generators)?;
    Ok(orbits.iter().copied().max().map_or(0, |m| m as usize + 1))
}

/// Result of restricting a code to the coordinates fixed by a permutation group.
#[derive(Clone, Debug)]
pub struct EmbeddedCode {
    /// 1-based fixed coordinates.
    pub fixed: Vec<usize>,
    /// Codewords vanishing off the fixed coordinates, projected onto them.
    /// `None` when no coordinate is fixed.
    pub code: Option<BinaryCode>,
}

/// Restricts `c` to the words supported on the coordinates fixed by every
/// permutation in `perms`, deleting the moved coordinates.
pub fn embedded_code_from_symmetries(c: &BinaryCode, perms: &[CoordPerm]) -> Result<EmbeddedCode> {
    let n = c.n();
    let set = c.word_set();
    for p in perms {
        if p.len() != n {
            return Err(Error::LengthMismatch(p.len(), n));
        }
        if !c.words().iter().all(|&w| set.contains(p.apply_bits(w))) {
            return Err(Error::NotASymmetry);
        }
    }
    let fixed: Vec<usize> = (0..n)
        .filter(|&i| perms.iter().all(|p| p.image(i) == i))
        .map(|i| i + 1)
        .collect();
    if fixed.is_empty() {
        return Ok(EmbeddedCode { fixed, code: None });
    }
    let moved_mask = full_mask(n)
        & !fixed.iter().fold(0u32, |acc, &i| acc | coord_bit(n, i));
    let sub = BinaryCode::new(
        n,
        c.words().iter().copied().filter(|&w| w & moved_mask == 0),
    )?;
    let code = sub.project(&fixed)?;
    Ok(EmbeddedCode {
        fixed,
        code: Some(code),
    })
}

/// Graph on the codewords joining pairs at minimum distance.
pub fn min_distance_graph(c: &BinaryCode) -> Result<ColoredGraph> {
    let d = c.min_distance()?;
    let words = c.words();
    let mut g = ColoredGraph::new(words.len());
    for v in 0..words.len() {
        g.set_preferred(v, true);
    }
    for (i, &a) in words.iter().enumerate() {
        for (j, &b) in words.iter().enumerate().skip(i + 1) {
            if (a ^ b).count_ones() as usize == d {
                g.add_edge(i, j);
            }
        }
    }
    g.normalize();
    Ok(g)
}

/// Automorphism group order of the minimum distance graph.
pub fn min_distance_graph_aut_order(c: &BinaryCode) -> Result<GroupOrder> {
    Ok(canonical_labeling(&min_distance_graph(c)?).group_order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hamming_code;

    #[test]
    fn trivial_code_graph_counts() {
        let c = BinaryCode::from_strs(&["000", "111"]).unwrap();
        let g = encode(&c, Mode::Equivalence).unwrap();
        assert_eq!(g.codeword_vertex_count(), 2);
        assert_eq!(g.value_vertex_count(), 6);
        assert_eq!(g.incidence_edge_count(), 6);
        assert_eq!(g.hub_vertex_count(), 3);
    }

    #[test]
    fn zero_and_one_are_equivalent_not_isomorphic() {
        let a = BinaryCode::from_strs(&["0000000"]).unwrap();
        let b = BinaryCode::from_strs(&["1111111"]).unwrap();
        assert!(are_equivalent(&a, &b).unwrap());
        assert!(!are_isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn hamming7_group() {
        let h = hamming_code(3).unwrap();
        let r = automorphism_group(&h).unwrap();
        assert_eq!(r.order.to_u128(), Some(16 * 168));
        assert_eq!(r.symmetry_order.to_u128(), Some(168));
        assert_eq!(r.codeword_orbit_sizes, vec![16]);
        for g in &r.generators {
            let img = h.translate(g.translation).permute(&g.perm).unwrap();
            assert_eq!(img, h);
        }
    }

    #[test]
    fn repetition_code_classes() {
        let c = BinaryCode::from_strs(&["000", "111"]).unwrap();
        assert_eq!(isomorphism_classes_in_equivalence_class(&c).unwrap(), 2);
    }

    #[test]
    fn pasch_in_fano() {
        let h = hamming_code(3).unwrap();
        let t = h.words_of_weight(3);
        // each of the 7 lines' complements is a quadrilateral
        assert_eq!(pasch_count(&t), Some(7));
    }

    #[test]
    fn min_distance_graph_shapes() {
        let c = BinaryCode::from_strs(&["0000", "1111"]).unwrap();
        assert_eq!(min_distance_graph(&c).unwrap().edge_count(), 1);
        let g = min_distance_graph(&hamming_code(3).unwrap()).unwrap();
        assert!((0..16).all(|v| g.neighbors(v).len() == 7));
    }
}
