//! Vertex-colored graphs and an individualization-refinement canonical
//! labeler with automorphism pruning.
//!
//! The search follows the usual scheme: equitable refinement of an ordered
//! partition, branching on a target cell, and a search tree whose leaves are
//! discrete partitions. Leaves are ordered by the sequence of refinement
//! traces along their path and then by the relabeled adjacency structure; the
//! smallest leaf defines the canonical labeling. Leaves that compare equal to
//! the first or the best leaf yield automorphisms, which prune siblings in the
//! same orbit.

use std::collections::VecDeque;

use super::group::{GroupOrder, UnionFind};

/// An undirected graph with a color per vertex.
///
/// Colors are compared numerically; the initial partition lists color classes
/// in ascending color order. Vertices flagged as preferred are branched on
/// first whenever one of their cells is still non-singleton; the flag must be
/// constant on each color class.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    adj: Vec<Vec<u32>>,
    colors: Vec<u64>,
    preferred: Vec<bool>,
}

impl ColoredGraph {
    pub fn new(vertex_count: usize) -> Self {
        ColoredGraph {
            adj: vec![Vec::new(); vertex_count],
            colors: vec![0; vertex_count],
            preferred: vec![false; vertex_count],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.adj[u].push(v as u32);
        self.adj[v].push(u as u32);
    }

    pub fn set_color(&mut self, v: usize, color: u64) {
        self.colors[v] = color;
    }

    pub fn set_preferred(&mut self, v: usize, preferred: bool) {
        self.preferred[v] = preferred;
    }

    pub fn color(&self, v: usize) -> u64 {
        self.colors[v]
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    /// Sorts adjacency lists and drops parallel edges.
    pub fn normalize(&mut self) {
        for a in &mut self.adj {
            a.sort_unstable();
            a.dedup();
        }
    }

    /// Relabels the graph by `perm` (vertex `v` becomes `perm[v]`).
    pub fn relabeled(&self, perm: &[u32]) -> ColoredGraph {
        let n = self.vertex_count();
        let mut g = ColoredGraph::new(n);
        for v in 0..n {
            let pv = perm[v] as usize;
            g.colors[pv] = self.colors[v];
            g.preferred[pv] = self.preferred[v];
            g.adj[pv] = self.adj[v].iter().map(|&u| perm[u as usize]).collect();
        }
        g.normalize();
        g
    }

    /// Whether `perm` maps the graph (with colors) onto itself.
    pub fn is_automorphism(&self, perm: &[u32]) -> bool {
        let n = self.vertex_count();
        if perm.len() != n {
            return false;
        }
        for v in 0..n {
            let pv = perm[v] as usize;
            if self.colors[pv] != self.colors[v] || self.adj[pv].len() != self.adj[v].len() {
                return false;
            }
            for &u in &self.adj[v] {
                if self.adj[pv].binary_search(&perm[u as usize]).is_err() {
                    return false;
                }
            }
        }
        true
    }
}

/// Outcome of a canonical labeling run.
#[derive(Clone, Debug)]
pub struct LabelingResult {
    /// `order[i]` is the vertex that receives canonical label `i`.
    pub order: Vec<u32>,
    /// Automorphisms found during the search; they generate the group.
    pub generators: Vec<Vec<u32>>,
    pub group_order: GroupOrder,
    /// Sizes of the first-path orbits whose product is the group order.
    pub orbit_chain: Vec<u64>,
    pub nodes: u64,
    pub leaves: u64,
}

impl LabelingResult {
    /// `label[v]` is the canonical label of vertex `v`.
    pub fn labels(&self) -> Vec<u32> {
        let mut lab = vec![0u32; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            lab[v as usize] = i as u32;
        }
        lab
    }
}

/// Computes a canonical labeling and the automorphism group of `g`.
pub fn canonical_labeling(g: &ColoredGraph) -> LabelingResult {
    let mut g = g.clone();
    g.normalize();
    let mut s = Search::new(&g);
    s.run();
    s.finish()
}

#[derive(Clone)]
struct Partition {
    elems: Vec<u32>,
    pos: Vec<u32>,
    /// Cell start of each vertex.
    cell: Vec<u32>,
    /// Length of the cell starting at an index (only meaningful at starts).
    len: Vec<u32>,
    ncells: usize,
}

impl Partition {
    fn from_colors(colors: &[u64]) -> (Partition, Vec<u32>) {
        let n = colors.len();
        let mut elems: Vec<u32> = (0..n as u32).collect();
        elems.sort_by_key(|&v| (colors[v as usize], v));
        let mut pos = vec![0u32; n];
        let mut cell = vec![0u32; n];
        let mut len = vec![0u32; n];
        let mut starts = Vec::new();
        let mut i = 0;
        while i < n {
            let c = colors[elems[i] as usize];
            let mut j = i;
            while j < n && colors[elems[j] as usize] == c {
                j += 1;
            }
            for k in i..j {
                pos[elems[k] as usize] = k as u32;
                cell[elems[k] as usize] = i as u32;
            }
            len[i] = (j - i) as u32;
            starts.push(i as u32);
            i = j;
        }
        let ncells = starts.len();
        (
            Partition {
                elems,
                pos,
                cell,
                len,
                ncells,
            },
            starts,
        )
    }

    fn is_discrete(&self) -> bool {
        self.ncells == self.elems.len()
    }

    fn individualize(&mut self, v: u32) -> u32 {
        let x = self.cell[v as usize];
        let l = self.len[x as usize];
        debug_assert!(l > 1);
        let p = self.pos[v as usize];
        let u = self.elems[x as usize];
        self.elems.swap(x as usize, p as usize);
        self.pos[u as usize] = p;
        self.pos[v as usize] = x;
        self.len[x as usize] = 1;
        let rest = x + 1;
        self.len[rest as usize] = l - 1;
        for idx in rest..x + l {
            self.cell[self.elems[idx as usize] as usize] = rest;
        }
        self.ncells += 1;
        x
    }

    fn cell_members(&self, start: u32) -> Vec<u32> {
        let s = start as usize;
        let mut v = self.elems[s..s + self.len[s] as usize].to_vec();
        v.sort_unstable();
        v
    }
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.rotate_left(29).wrapping_add(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct Refiner {
    count: Vec<u32>,
    touched: Vec<u32>,
    in_queue: Vec<bool>,
    queue: VecDeque<u32>,
    cells_hit: Vec<u32>,
    cell_hit_flag: Vec<bool>,
}

impl Refiner {
    fn new(n: usize) -> Self {
        Refiner {
            count: vec![0; n],
            touched: Vec::new(),
            in_queue: vec![false; n],
            queue: VecDeque::new(),
            cells_hit: Vec::new(),
            cell_hit_flag: vec![false; n],
        }
    }

    /// Refines `p` to the coarsest equitable partition finer than it,
    /// starting from the given splitter cells. Returns a trace hash that
    /// depends only on the isomorphism type of `(graph, partition)`.
    fn refine(&mut self, g: &ColoredGraph, p: &mut Partition, splitters: &[u32]) -> u64 {
        let mut h: u64 = 0x1234_5678;
        for &s in splitters {
            if !self.in_queue[s as usize] {
                self.in_queue[s as usize] = true;
                self.queue.push_back(s);
            }
        }
        while let Some(s) = self.queue.pop_front() {
            self.in_queue[s as usize] = false;
            let sl = p.len[s as usize] as usize;
            let s = s as usize;
            for idx in s..s + sl {
                let w = p.elems[idx] as usize;
                for &u in &g.adj[w] {
                    let u = u as usize;
                    if self.count[u] == 0 {
                        self.touched.push(u as u32);
                        let c = p.cell[u] as usize;
                        if !self.cell_hit_flag[c] {
                            self.cell_hit_flag[c] = true;
                            self.cells_hit.push(c as u32);
                        }
                    }
                    self.count[u] += 1;
                }
            }
            self.cells_hit.sort_unstable();
            let hits = std::mem::take(&mut self.cells_hit);
            for &x in &hits {
                self.cell_hit_flag[x as usize] = false;
                h = self.split_cell(p, x as usize, s as u64, h);
            }
            self.cells_hit = hits;
            self.cells_hit.clear();
            for &u in &self.touched {
                self.count[u as usize] = 0;
            }
            self.touched.clear();
        }
        mix(h, p.ncells as u64)
    }

    fn split_cell(&mut self, p: &mut Partition, x: usize, splitter: u64, h: u64) -> u64 {
        let l = p.len[x] as usize;
        if l == 1 {
            return h;
        }
        let count = &self.count;
        let slice = &mut p.elems[x..x + l];
        let first = count[slice[0] as usize];
        if slice.iter().all(|&v| count[v as usize] == first) {
            return h;
        }
        slice.sort_unstable_by_key(|&v| count[v as usize]);
        let mut h = mix(h, splitter);
        h = mix(h, x as u64);
        let was_queued = self.in_queue[x];
        let mut frags: Vec<(usize, usize)> = Vec::new();
        let mut i = 0;
        while i < l {
            let c = count[slice[i] as usize];
            let mut j = i;
            while j < l && count[slice[j] as usize] == c {
                j += 1;
            }
            frags.push((x + i, j - i));
            h = mix(h, ((c as u64) << 32) | (j - i) as u64);
            i = j;
        }
        for &(start, flen) in &frags {
            p.len[start] = flen as u32;
            for idx in start..start + flen {
                let v = p.elems[idx] as usize;
                p.cell[v] = start as u32;
                p.pos[v] = idx as u32;
            }
        }
        p.ncells += frags.len() - 1;
        if was_queued {
            for &(start, _) in &frags[1..] {
                self.in_queue[start] = true;
                self.queue.push_back(start as u32);
            }
        } else {
            let mut largest = 0;
            for (k, &(_, flen)) in frags.iter().enumerate() {
                if flen > frags[largest].1 {
                    largest = k;
                }
            }
            for (k, &(start, _)) in frags.iter().enumerate() {
                if k != largest {
                    self.in_queue[start] = true;
                    self.queue.push_back(start as u32);
                }
            }
        }
        h
    }
}

struct Leaf {
    traces: Vec<u64>,
    cert: Vec<u32>,
    order: Vec<u32>,
}

struct FirstNode {
    part: Partition,
    cell: Vec<u32>,
    chosen: u32,
}

#[derive(PartialEq, Eq)]
enum Flow {
    Continue,
    AutFound,
}

struct Search<'g> {
    g: &'g ColoredGraph,
    refiner: Refiner,
    first: Option<Leaf>,
    best: Option<Leaf>,
    first_path: Vec<u32>,
    generators: Vec<Vec<u32>>,
    orbit_chain: Vec<u64>,
    nodes: u64,
    leaves: u64,
}

impl<'g> Search<'g> {
    fn new(g: &'g ColoredGraph) -> Self {
        Search {
            g,
            refiner: Refiner::new(g.vertex_count()),
            first: None,
            best: None,
            first_path: Vec::new(),
            generators: Vec::new(),
            orbit_chain: Vec::new(),
            nodes: 0,
            leaves: 0,
        }
    }

    fn target_cell(&self, p: &Partition) -> u32 {
        let n = p.elems.len();
        let mut best_pref: Option<(u32, u32)> = None;
        let mut best_any: Option<(u32, u32)> = None;
        let mut i = 0;
        while i < n {
            let l = p.len[i];
            if l > 1 {
                let pref = self.g.preferred[p.elems[i] as usize];
                if pref && best_pref.is_none_or(|(_, bl)| l < bl) {
                    best_pref = Some((i as u32, l));
                }
                if best_any.is_none_or(|(_, bl)| l < bl) {
                    best_any = Some((i as u32, l));
                }
            }
            i += l as usize;
        }
        best_pref.or(best_any).expect("non-discrete partition").0
    }

    fn certificate(&self, p: &Partition) -> Vec<u32> {
        let n = p.elems.len();
        let mut cert = Vec::with_capacity(n + 2 * self.g.edge_count());
        let mut buf = Vec::new();
        for i in 0..n {
            let v = p.elems[i] as usize;
            buf.clear();
            buf.extend(self.g.adj[v].iter().map(|&u| p.pos[u as usize]));
            buf.sort_unstable();
            cert.push(buf.len() as u32);
            cert.extend_from_slice(&buf);
        }
        cert
    }

    fn run(&mut self) {
        let (mut root, starts) = Partition::from_colors(&self.g.colors);
        let t0 = self.refiner.refine(self.g, &mut root, &starts);
        self.nodes += 1;
        let mut traces = vec![t0];
        let mut nodes: Vec<FirstNode> = Vec::new();
        let mut p = root;
        while !p.is_discrete() {
            let target = self.target_cell(&p);
            let cell = p.cell_members(target);
            let v = cell[0];
            nodes.push(FirstNode {
                part: p.clone(),
                cell,
                chosen: v,
            });
            let s = p.individualize(v);
            let t = self.refiner.refine(self.g, &mut p, &[s]);
            self.nodes += 1;
            traces.push(t);
            self.first_path.push(v);
        }
        self.leaves += 1;
        let leaf = Leaf {
            traces: traces.clone(),
            cert: self.certificate(&p),
            order: p.elems.clone(),
        };
        self.best = Some(Leaf {
            traces: leaf.traces.clone(),
            cert: leaf.cert.clone(),
            order: leaf.order.clone(),
        });
        self.first = Some(leaf);

        let mut chain = vec![1u64; nodes.len()];
        for level in (0..nodes.len()).rev() {
            let prefix: Vec<u32> = self.first_path[..level].to_vec();
            let node = &nodes[level];
            let chosen = node.chosen;
            let mut done: Vec<u32> = vec![chosen];
            let mut uf_gens = usize::MAX;
            let mut uf = UnionFind::new(0);
            for &w in &node.cell {
                if w == chosen {
                    continue;
                }
                if self.generators.len() != uf_gens {
                    uf = self.orbits_fixing(&prefix);
                    uf_gens = self.generators.len();
                }
                if done.iter().any(|&d| uf.same(d as usize, w as usize)) {
                    continue;
                }
                done.push(w);
                let mut child = node.part.clone();
                let s = child.individualize(w);
                let t = self.refiner.refine(self.g, &mut child, &[s]);
                self.nodes += 1;
                let mut path = prefix.clone();
                path.push(w);
                let mut tr = traces[..=level].to_vec();
                tr.push(t);
                self.explore(child, &mut path, &mut tr);
            }
            let uf = self.orbits_fixing(&prefix);
            let root = uf.find(chosen as usize);
            chain[level] = node.cell.iter().filter(|&&w| uf.find(w as usize) == root).count() as u64;
        }
        self.orbit_chain = chain;
    }

    /// Orbits of the group generated by the stored generators that fix every
    /// vertex of `prefix`.
    fn orbits_fixing(&self, prefix: &[u32]) -> UnionFind {
        let n = self.g.vertex_count();
        let mut uf = UnionFind::new(n);
        for gen in &self.generators {
            if prefix.iter().all(|&v| gen[v as usize] == v) {
                for (v, &img) in gen.iter().enumerate() {
                    uf.union(v, img as usize);
                }
            }
        }
        uf
    }

    fn explore(&mut self, p: Partition, path: &mut Vec<u32>, traces: &mut Vec<u64>) -> Flow {
        let k = traces.len();
        let first = self.first.as_ref().unwrap();
        let eq_first = first.traces.len() >= k && first.traces[..k] == traces[..];
        let best = self.best.as_ref().unwrap();
        let m = k.min(best.traces.len());
        let cmp_best = traces[..m].cmp(&best.traces[..m]);
        if !eq_first && cmp_best == std::cmp::Ordering::Greater {
            return Flow::Continue;
        }
        if p.is_discrete() {
            return self.process_leaf(&p, traces, eq_first, cmp_best);
        }
        let target = self.target_cell(&p);
        let cell = p.cell_members(target);
        let mut done: Vec<u32> = Vec::new();
        let mut uf_gens = usize::MAX;
        let mut uf = UnionFind::new(0);
        for &w in &cell {
            if !self.generators.is_empty() {
                if self.generators.len() != uf_gens {
                    uf = self.orbits_fixing(path);
                    uf_gens = self.generators.len();
                }
                if done.iter().any(|&d| uf.same(d as usize, w as usize)) {
                    continue;
                }
            }
            done.push(w);
            let mut child = p.clone();
            let s = child.individualize(w);
            let t = self.refiner.refine(self.g, &mut child, &[s]);
            self.nodes += 1;
            path.push(w);
            traces.push(t);
            let flow = self.explore(child, path, traces);
            path.pop();
            traces.pop();
            if flow == Flow::AutFound {
                return Flow::AutFound;
            }
        }
        Flow::Continue
    }

    fn process_leaf(
        &mut self,
        p: &Partition,
        traces: &[u64],
        eq_first: bool,
        cmp_best: std::cmp::Ordering,
    ) -> Flow {
        use std::cmp::Ordering::*;
        self.leaves += 1;
        let cert = self.certificate(p);
        let first = self.first.as_ref().unwrap();
        if eq_first && first.traces.len() == traces.len() && cert == first.cert {
            let gen = map_leaves(&first.order, &p.elems);
            self.add_generator(gen);
            return Flow::AutFound;
        }
        let best = self.best.as_ref().unwrap();
        let replace = match cmp_best {
            Less => true,
            Greater => false,
            Equal => {
                if best.traces.len() != traces.len() {
                    traces.len() < best.traces.len()
                } else {
                    match cert.cmp(&best.cert) {
                        Less => true,
                        Greater => false,
                        Equal => {
                            let gen = map_leaves(&best.order, &p.elems);
                            self.add_generator(gen);
                            false
                        }
                    }
                }
            }
        };
        if replace {
            self.best = Some(Leaf {
                traces: traces.to_vec(),
                cert,
                order: p.elems.clone(),
            });
        }
        Flow::Continue
    }

    fn add_generator(&mut self, gen: Vec<u32>) {
        if gen.iter().enumerate().all(|(i, &x)| i as u32 == x) {
            return;
        }
        debug_assert!(self.g.is_automorphism(&gen));
        if !self.generators.contains(&gen) {
            self.generators.push(gen);
        }
    }

    fn finish(self) -> LabelingResult {
        let best = self.best.expect("search ran");
        let mut order = GroupOrder::one();
        for &o in &self.orbit_chain {
            order.mul(o);
        }
        LabelingResult {
            order: best.order,
            generators: self.generators,
            group_order: order,
            orbit_chain: self.orbit_chain,
            nodes: self.nodes,
            leaves: self.leaves,
        }
    }
}

/// The automorphism sending the vertex at position `i` of leaf `a` to the
/// vertex at position `i` of leaf `b`.
fn map_leaves(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut gen = vec![0u32; a.len()];
    for (i, &v) in a.iter().enumerate() {
        gen[v as usize] = b[i];
    }
    gen
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> ColoredGraph {
        let mut g = ColoredGraph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    fn petersen() -> ColoredGraph {
        let mut g = ColoredGraph::new(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i, i + 5);
            g.add_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    fn complete(n: usize) -> ColoredGraph {
        let mut g = ColoredGraph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    fn canon(g: &ColoredGraph) -> ColoredGraph {
        let r = canonical_labeling(g);
        g.relabeled(&r.labels())
    }

    fn adj_eq(a: &ColoredGraph, b: &ColoredGraph) -> bool {
        a.adj == b.adj && a.colors == b.colors
    }

    #[test]
    fn group_orders_of_small_graphs() {
        assert_eq!(canonical_labeling(&cycle(5)).group_order.to_u128(), Some(10));
        assert_eq!(canonical_labeling(&cycle(8)).group_order.to_u128(), Some(16));
        assert_eq!(canonical_labeling(&petersen()).group_order.to_u128(), Some(120));
        assert_eq!(canonical_labeling(&complete(6)).group_order.to_u128(), Some(720));
        assert_eq!(canonical_labeling(&ColoredGraph::new(4)).group_order.to_u128(), Some(24));
    }

    #[test]
    fn colors_restrict_the_group() {
        let mut g = cycle(6);
        g.set_color(0, 1);
        // reflection through vertex 0
        assert_eq!(canonical_labeling(&g).group_order.to_u128(), Some(2));
    }

    #[test]
    fn generators_are_automorphisms() {
        let mut g = petersen();
        g.normalize();
        let r = canonical_labeling(&g);
        for gen in &r.generators {
            assert!(g.is_automorphism(gen));
        }
    }

    #[test]
    fn relabeling_invariance() {
        let g = petersen();
        let c0 = canon(&g);
        let perms: [[u32; 10]; 3] = [
            [3, 1, 4, 0, 5, 9, 2, 6, 8, 7],
            [9, 8, 7, 6, 5, 4, 3, 2, 1, 0],
            [1, 2, 3, 4, 0, 6, 7, 8, 9, 5],
        ];
        for p in &perms {
            assert!(adj_eq(&canon(&g.relabeled(p)), &c0));
        }
    }

    #[test]
    fn distinguishes_nonisomorphic() {
        // C6 vs two triangles: both 2-regular on 6 vertices
        let c6 = cycle(6);
        let mut tt = ColoredGraph::new(6);
        for (a, b) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)] {
            tt.add_edge(a, b);
        }
        assert!(!adj_eq(&canon(&c6), &canon(&tt)));
    }
}
