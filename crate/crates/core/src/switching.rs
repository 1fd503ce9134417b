//! Minimal i-components, switches, alpha-components and switching-class
//! exploration.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::canonical::{canonicalize, encode, CanonicalForm, Mode, UnionFind};
use crate::error::{Error, Result};
use crate::word::{check_coord, coord_bit, BinaryCode};

/// Partition of a code into minimal i-components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    /// 1-based coordinate.
    pub coord: usize,
    /// Ordered by smallest codeword.
    pub components: Vec<BinaryCode>,
}

impl ComponentPartition {
    /// Component sizes, ascending.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.components.iter().map(|c| c.len()).collect();
        s.sort_unstable();
        s
    }

    /// Sizes as `g^a` terms, e.g. `128^16`.
    pub fn size_notation(&self) -> String {
        crate::canonical::orbit_notation(&self.sizes())
    }
}

/// Weight-3 masks containing coordinate `i`.
fn triples_through(n: usize, coord: usize) -> Vec<u32> {
    let bi = coord_bit(n, coord);
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            if a != coord && b != coord {
                out.push(bi | coord_bit(n, a) | coord_bit(n, b));
            }
        }
    }
    out
}

/// Connected components of the graph joining codewords at distance 3 that
/// differ in coordinate `coord`.
pub fn minimal_i_components(c: &BinaryCode, coord: usize) -> Result<ComponentPartition> {
    let n = c.n();
    check_coord(n, coord)?;
    if !c.is_perfect() {
        return Err(Error::NotPerfect);
    }
    Ok(components_unchecked(c, coord))
}

fn components_unchecked(c: &BinaryCode, coord: usize) -> ComponentPartition {
    let n = c.n();
    let words = c.words();
    let index: HashMap<u32, usize> = words.iter().enumerate().map(|(k, &w)| (w, k)).collect();
    let ts = triples_through(n, coord);
    let mut uf = UnionFind::new(words.len());
    for (k, &w) in words.iter().enumerate() {
        for &t in &ts {
            if let Some(&j) = index.get(&(w ^ t)) {
                uf.union(k, j);
            }
        }
    }
    let components = uf
        .classes()
        .into_iter()
        .map(|cls| BinaryCode::from_sorted_unchecked(n, cls.into_iter().map(|k| words[k]).collect()))
        .collect();
    ComponentPartition { coord, components }
}

/// Complements coordinate `coord` in the words of `d`, after checking that
/// the result is still a one-error-correcting code.
pub fn switch(c: &BinaryCode, coord: usize, d: &BinaryCode) -> Result<BinaryCode> {
    let n = c.n();
    check_coord(n, coord)?;
    if d.n() != n {
        return Err(Error::LengthMismatch(d.n(), n));
    }
    if !d.words().iter().all(|&w| c.contains_bits(w)) {
        return Err(Error::NotAnIComponent("subset is not contained in the code".into()));
    }
    let bit = coord_bit(n, coord);
    let dset = d.word_set();
    let set = c.word_set();
    let rest = |w: u32| set.contains(w) && !dset.contains(w);
    // only distances between flipped words and the rest of the code change
    for &w in d.words() {
        let f = w ^ bit;
        if rest(f) {
            return Err(Error::NotAnIComponent(format!("flip collides with a codeword at coordinate {coord}")));
        }
        for a in 0..n {
            let fa = f ^ (1 << a);
            if rest(fa) {
                return Err(Error::NotAnIComponent(format!("distance 1 created at coordinate {coord}")));
            }
            for b in a + 1..n {
                if rest(fa ^ (1 << b)) {
                    return Err(Error::NotAnIComponent(format!("distance 2 created at coordinate {coord}")));
                }
            }
        }
    }
    let words = c
        .words()
        .iter()
        .map(|&w| if dset.contains(w) { w ^ bit } else { w });
    BinaryCode::new(n, words)
}

/// Whether `d` is an i-component of `c` at `coord`.
pub fn is_i_component(c: &BinaryCode, coord: usize, d: &BinaryCode) -> bool {
    switch(c, coord, d).is_ok()
}

/// Intersection number `|C1 ∩ C2|`.
pub fn intersection_number(c1: &BinaryCode, c2: &BinaryCode) -> Result<usize> {
    c1.intersection_size(c2)
}

/// A subcode that is an i-component for every `i` in `alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaComponent {
    /// 1-based coordinates, ascending, maximal for this component.
    pub alpha: Vec<usize>,
    pub component: BinaryCode,
}

/// All nontrivial alpha-components with `|alpha| >= 2`: the parts of the
/// common coarsening of the minimal i-component partitions over `alpha`,
/// each reported once with the largest `alpha` it belongs to.
pub fn alpha_components(c: &BinaryCode) -> Result<Vec<AlphaComponent>> {
    if !c.is_perfect() {
        return Err(Error::NotPerfect);
    }
    let n = c.n();
    let m = c.len();
    let labels: Vec<Vec<usize>> = (1..=n)
        .into_par_iter()
        .map(|i| {
            let p = components_unchecked(c, i);
            let mut lab = vec![0usize; m];
            for (k, comp) in p.components.iter().enumerate() {
                for &w in comp.words() {
                    lab[c.words().binary_search(&w).unwrap()] = k;
                }
            }
            lab
        })
        .collect();
    let mut found: HashSet<Vec<u32>> = HashSet::new();
    let mut out = Vec::new();
    // depth-first over coordinate sets; a trivial join stays trivial for supersets
    let mut stack: Vec<(Vec<usize>, UnionFind)> = Vec::new();
    for i in 0..n {
        stack.push((vec![i], join(&UnionFind::new(m), &labels[i])));
    }
    while let Some((alpha, uf)) = stack.pop() {
        let classes = uf.classes();
        if classes.len() < 2 {
            continue;
        }
        if alpha.len() >= 2 {
            for cls in &classes {
                let words: Vec<u32> = cls.iter().map(|&k| c.words()[k]).collect();
                if found.insert(words.clone()) {
                    let member: Vec<bool> = {
                        let mut v = vec![false; m];
                        cls.iter().for_each(|&k| v[k] = true);
                        v
                    };
                    let full_alpha: Vec<usize> = (0..n)
                        .filter(|&i| is_union_of_parts(&member, &labels[i]))
                        .map(|i| i + 1)
                        .collect();
                    out.push(AlphaComponent {
                        alpha: full_alpha,
                        component: BinaryCode::from_sorted_unchecked(n, words),
                    });
                }
            }
        }
        let last = *alpha.last().unwrap();
        for j in last + 1..n {
            let mut a2 = alpha.clone();
            a2.push(j);
            stack.push((a2, join(&uf, &labels[j])));
        }
    }
    out.sort_by(|a, b| (a.alpha.clone(), a.component.words()).cmp(&(b.alpha.clone(), b.component.words())));
    Ok(out)
}

fn join(uf: &UnionFind, labels: &[usize]) -> UnionFind {
    let mut u = uf.clone();
    let mut first: HashMap<usize, usize> = HashMap::new();
    for (k, &l) in labels.iter().enumerate() {
        match first.get(&l) {
            Some(&r) => {
                u.union(r, k);
            }
            None => {
                first.insert(l, k);
            }
        }
    }
    u
}

fn is_union_of_parts(member: &[bool], labels: &[usize]) -> bool {
    let mut state: HashMap<usize, bool> = HashMap::new();
    for (k, &l) in labels.iter().enumerate() {
        match state.get(&l) {
            Some(&s) if s != member[k] => return false,
            Some(_) => {}
            None => {
                state.insert(l, member[k]);
            }
        }
    }
    true
}

/// Limits for a switching-class exploration.
#[derive(Clone, Debug)]
#[derive(Default)]
pub struct BfsOptions {
    /// Stop once this many classes are known.
    pub max_codes: Option<usize>,
    /// Stop after expanding this many levels.
    pub max_depth: Option<usize>,
    /// Also switch pairwise unions of minimal components when a coordinate has
    /// at most this many components.
    pub union_moves_up_to: Option<usize>,
}


/// State of a switching-class exploration. Codes are stored as canonical
/// representatives; the first `expanded` of them have had all moves applied.
#[derive(Clone, Debug)]
pub struct SwitchingClassRun {
    pub seed_digest: String,
    pub digests: Vec<String>,
    pub codes: Vec<BinaryCode>,
    forms: Vec<CanonicalForm>,
    pub expanded: usize,
    pub levels: Vec<LevelStats>,
    pub max_codes_hit: bool,
    pub max_depth_hit: bool,
    /// Classes first reached through a union move.
    pub found_by_unions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelStats {
    pub expanded: usize,
    pub moves: usize,
    pub new_classes: usize,
}

impl SwitchingClassRun {
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.expanded == self.codes.len()
    }

    /// Rebuilds a run from stored representatives (the digests are
    /// recomputed and must match).
    pub fn resume(codes: Vec<BinaryCode>, digests: &[String], expanded: usize) -> Result<Self> {
        if codes.len() != digests.len() || expanded > codes.len() || codes.is_empty() {
            return Err(Error::Inconsistent("run state does not match stored codes".into()));
        }
        let forms: Vec<CanonicalForm> = codes
            .par_iter()
            .map(|c| Ok(canonicalize(&encode(c, Mode::Equivalence)?).form))
            .collect::<Result<_>>()?;
        for (f, d) in forms.iter().zip(digests) {
            if &f.digest() != d {
                return Err(Error::Inconsistent(format!("digest {d} does not match its code")));
            }
        }
        Ok(SwitchingClassRun {
            seed_digest: digests[0].clone(),
            digests: digests.to_vec(),
            codes,
            forms,
            expanded,
            levels: Vec::new(),
            max_codes_hit: false,
            max_depth_hit: false,
            found_by_unions: 0,
        })
    }

    fn start(seed: &BinaryCode) -> Result<Self> {
        let cc = canonicalize(&encode(seed, Mode::Equivalence)?);
        let rep = rows_to_code(seed.n(), &cc.rows)?;
        let digest = cc.form.digest();
        Ok(SwitchingClassRun {
            seed_digest: digest.clone(),
            digests: vec![digest],
            codes: vec![rep],
            forms: vec![cc.form],
            expanded: 0,
            levels: Vec::new(),
            max_codes_hit: false,
            max_depth_hit: false,
            found_by_unions: 0,
        })
    }
}

const BFS_CHUNK: usize = 32;

fn pack_rows(rows: &[Vec<u32>]) -> Vec<u32> {
    rows.iter().map(|r| r.iter().fold(0u32, |a, &d| (a << 1) | d)).collect()
}

fn rows_to_code(n: usize, rows: &[Vec<u32>]) -> Result<BinaryCode> {
    BinaryCode::new(n, pack_rows(rows))
}

/// Switches available from one code, in a fixed order.
fn moves(c: &BinaryCode, unions_up_to: Option<usize>) -> Vec<(usize, BinaryCode, bool)> {
    let mut out = Vec::new();
    for i in 1..=c.n() {
        let p = components_unchecked(c, i);
        let k = p.components.len();
        for comp in &p.components {
            out.push((i, comp.clone(), false));
        }
        if unions_up_to.is_some_and(|lim| k <= lim) {
            for a in 0..k {
                for b in a + 1..k {
                    let u = p.components[a].union(&p.components[b]).expect("same length");
                    out.push((i, u, true));
                }
            }
        }
    }
    out
}

/// Breadth-first exploration of the switching class of `seed`, up to
/// equivalence. `checkpoint` is called after every level.
pub fn switching_class_bfs(
    seed: &BinaryCode,
    opts: &BfsOptions,
    resume: Option<SwitchingClassRun>,
    checkpoint: &mut dyn FnMut(&SwitchingClassRun),
) -> Result<SwitchingClassRun> {
    if !seed.is_perfect() {
        return Err(Error::NotPerfect);
    }
    let mut run = match resume {
        Some(r) => r,
        None => SwitchingClassRun::start(seed)?,
    };
    let n = seed.n();
    let mut index: HashMap<String, usize> = run
        .digests
        .iter()
        .enumerate()
        .map(|(k, d)| (d.clone(), k))
        .collect();
    let mut depth = 0;
    while !run.is_complete() {
        if opts.max_depth.is_some_and(|d| depth >= d) {
            run.max_depth_hit = true;
            break;
        }
        if opts.max_codes.is_some_and(|m| run.len() >= m) {
            run.max_codes_hit = true;
            break;
        }
        let batch: Vec<BinaryCode> = run.codes[run.expanded..].to_vec();
        let before = run.len();
        let mut move_count = 0;
        // chunks bound memory; insertion order stays fixed
        for chunk in batch.chunks(BFS_CHUNK) {
            let results: Vec<(CanonicalForm, Vec<u32>, bool)> = chunk
                .par_iter()
                .flat_map_iter(|c| {
                    moves(c, opts.union_moves_up_to)
                        .into_iter()
                        .map(move |(i, d, u)| (c, i, d, u))
                })
                .map(|(c, i, d, u)| {
                    let code = switch(c, i, &d).expect("components switch");
                    let cc = canonicalize(&encode(&code, Mode::Equivalence).expect("nonempty"));
                    (cc.form, pack_rows(&cc.rows), u)
                })
                .collect();
            move_count += results.len();
            for (form, words, by_union) in results {
                if opts.max_codes.is_some_and(|m| run.len() >= m) {
                    run.max_codes_hit = true;
                    break;
                }
                let digest = form.digest();
                if let Some(&k) = index.get(&digest) {
                    if run.forms[k] != form {
                        return Err(Error::Inconsistent(format!("digest collision on {digest}")));
                    }
                    continue;
                }
                index.insert(digest.clone(), run.len());
                run.digests.push(digest);
                run.codes.push(BinaryCode::new(n, words)?);
                run.forms.push(form);
                if by_union {
                    run.found_by_unions += 1;
                }
            }
            if run.max_codes_hit {
                break;
            }
        }
        run.levels.push(LevelStats {
            expanded: batch.len(),
            moves: move_count,
            new_classes: run.len() - before,
        });
        run.expanded += batch.len();
        depth += 1;
        checkpoint(&run);
        if run.max_codes_hit {
            break;
        }
    }
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hamming_code;

    /// Components by flood fill over the definition, as an oracle.
    fn oracle_components(c: &BinaryCode, coord: usize) -> Vec<Vec<u32>> {
        let n = c.n();
        let bit = coord_bit(n, coord);
        let words = c.words().to_vec();
        let mut seen = vec![false; words.len()];
        let mut out = Vec::new();
        for s in 0..words.len() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![words[s]];
            seen[s] = true;
            let mut k = 0;
            while k < comp.len() {
                let w = comp[k];
                for (j, &y) in words.iter().enumerate() {
                    let x = w ^ y;
                    if !seen[j] && x.count_ones() == 3 && x & bit != 0 {
                        seen[j] = true;
                        comp.push(y);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    #[test]
    fn hamming7_components_match_oracle() {
        let h = hamming_code(3).unwrap();
        for i in 1..=7 {
            let p = minimal_i_components(&h, i).unwrap();
            let got: Vec<Vec<u32>> = p.components.iter().map(|c| c.words().to_vec()).collect();
            assert_eq!(got, oracle_components(&h, i));
            for comp in &p.components {
                assert!(is_i_component(&h, i, comp));
            }
        }
    }

    #[test]
    fn trivial_switches() {
        let h = hamming_code(3).unwrap();
        let empty = BinaryCode::new(7, []).unwrap();
        assert_eq!(switch(&h, 3, &empty).unwrap(), h);
        assert_eq!(switch(&h, 3, &h).unwrap(), h.translate(coord_bit(7, 3)));
    }

    #[test]
    fn non_component_rejected() {
        let h = hamming_code(3).unwrap();
        let single = BinaryCode::new(7, [0]).unwrap();
        assert!(matches!(switch(&h, 1, &single), Err(Error::NotAnIComponent(_))));
    }

    #[test]
    fn hamming7_class_is_single() {
        let h = hamming_code(3).unwrap();
        let run = switching_class_bfs(&h, &BfsOptions::default(), None, &mut |_| {}).unwrap();
        assert_eq!(run.len(), 1);
        assert!(run.is_complete());
    }
}
