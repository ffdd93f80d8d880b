//! Canonical labeling, isomorphism and automorphism groups of incidence
//! structures by individualization and refinement on the point/block
//! incidence graph.
//!
//! The graph has one vertex per point, then one per block, then optionally
//! one per part of a point partition, adjacent to the points of that part.
//! Automorphisms then permute the parts among themselves.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::incidence::IncidenceStructure;
use crate::perms::Permutation;

/// Largest `v + b` accepted by [`canonical_form`].
pub const MAX_VERTICES: usize = 400;

/// Blocks above this count get a sampled triple-intersection profile.
pub const FULL_TRIPLE_LIMIT: usize = 100;
pub const TRIPLE_SAMPLES: usize = 100_000;

/// Cheap isomorphism invariants. When `sampled` is set the triple profile
/// depends on the labeling and only separates, never identifies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub v: usize,
    pub b: usize,
    pub block_sizes: Vec<(usize, usize)>,
    pub pair_counts: Vec<(usize, usize)>,
    pub triple_intersections: Vec<(usize, usize)>,
    pub sampled: bool,
}

fn multiset(values: impl Iterator<Item = usize>) -> Vec<(usize, usize)> {
    let mut m = BTreeMap::new();
    for x in values {
        *m.entry(x).or_insert(0) += 1;
    }
    m.into_iter().collect()
}

pub fn fingerprint(d: &IncidenceStructure) -> Fingerprint {
    fingerprint_seeded(d, 0)
}

pub fn fingerprint_seeded(d: &IncidenceStructure, seed: u64) -> Fingerprint {
    let (v, b) = (d.v(), d.b());
    let block_sizes = multiset(d.blocks().iter().map(Vec::len));
    let pair_counts = multiset((0..v).flat_map(|x| (x + 1..v).map(move |y| (x, y))).map(|(x, y)| {
        d.point_row(x).intersection_count(d.point_row(y))
    }));
    let rows = |i: usize| d.block_row(i);
    let (triple_intersections, sampled) = if b <= FULL_TRIPLE_LIMIT {
        let mut all = Vec::new();
        for i in 0..b {
            for j in i + 1..b {
                for k in j + 1..b {
                    all.push(rows(i).intersection_count3(rows(j), rows(k)));
                }
            }
        }
        (multiset(all.into_iter()), false)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut all = Vec::with_capacity(TRIPLE_SAMPLES);
        while all.len() < TRIPLE_SAMPLES {
            let (i, j, k) = (rng.random_range(0..b), rng.random_range(0..b), rng.random_range(0..b));
            if i != j && j != k && i != k {
                all.push(rows(i).intersection_count3(rows(j), rows(k)));
            }
        }
        (multiset(all.into_iter()), true)
    };
    Fingerprint {
        v,
        b,
        block_sizes,
        pair_counts,
        triple_intersections,
        sampled,
    }
}

/// Canonical form of a structure, with the automorphism group found on the
/// way. Equality compares the canonical form only.
#[derive(Debug, Clone)]
pub struct Certificate {
    /// Blocks relabeled by `labeling`, each sorted, listed in sorted order.
    pub blocks: Vec<Vec<usize>>,
    /// Parts of the point partition under `labeling`, when one was given.
    pub parts: Option<Vec<Vec<usize>>>,
    /// SHA-256 of the canonical form, in hex.
    pub hash: String,
    /// Point `x` gets canonical label `labeling[x]`.
    pub labeling: Vec<usize>,
    /// Generators of the automorphism group, as point permutations.
    pub generators: Vec<Permutation>,
    pub order: BigUint,
}

impl PartialEq for Certificate {
    fn eq(&self, other: &Self) -> bool {
        self.hash == other.hash && self.blocks == other.blocks && self.parts == other.parts
    }
}

impl Eq for Certificate {}

impl Certificate {
    pub fn design(&self) -> Result<IncidenceStructure> {
        IncidenceStructure::new(self.labeling.len(), self.blocks.clone())
    }
}

struct Graph {
    n: usize,
    adj: Vec<Vec<u32>>,
    /// Initial cells as `(start, len)`.
    cells: Vec<(usize, usize)>,
}

#[derive(Clone)]
struct Partition {
    elems: Vec<u32>,
    /// Start of the cell holding each vertex.
    cell: Vec<u32>,
    /// Length of the cell starting at each position.
    len: Vec<u32>,
    count: usize,
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    (h.rotate_left(5) ^ x).wrapping_mul(0x517c_c1b7_2722_0a95)
}

impl Partition {
    fn new(g: &Graph) -> Self {
        let mut cell = vec![0; g.n];
        let mut len = vec![0; g.n];
        for &(s, l) in &g.cells {
            len[s] = l as u32;
            for c in &mut cell[s..s + l] {
                *c = s as u32;
            }
        }
        Self {
            elems: (0..g.n as u32).collect(),
            cell,
            len,
            count: g.cells.len(),
        }
    }

    fn discrete(&self) -> bool {
        self.count == self.elems.len()
    }

    fn target(&self) -> Option<usize> {
        let mut i = 0;
        while i < self.elems.len() {
            if self.len[i] > 1 {
                return Some(i);
            }
            i += self.len[i] as usize;
        }
        None
    }

    /// Refines to the coarsest equitable partition below the current one,
    /// starting from the given splitters. Returns a hash of the splits.
    fn refine(&mut self, g: &Graph, splitters: Vec<usize>, scratch: &mut Scratch) -> u64 {
        let n = self.elems.len();
        let mut trace = 0u64;
        let mut queue = std::collections::VecDeque::from(splitters);
        for &w in &queue {
            scratch.queued[w] = true;
        }
        while let Some(w) = queue.pop_front() {
            scratch.queued[w] = false;
            if self.discrete() {
                continue;
            }
            let wlen = self.len[w] as usize;
            scratch.touched.clear();
            for i in w..w + wlen {
                for &x in &g.adj[self.elems[i] as usize] {
                    let x = x as usize;
                    if scratch.cnt[x] == 0 {
                        scratch.touched.push(x);
                    }
                    scratch.cnt[x] += 1;
                }
            }
            scratch.cells.clear();
            for &x in &scratch.touched {
                let c = self.cell[x] as usize;
                if !scratch.marked[c] {
                    scratch.marked[c] = true;
                    scratch.cells.push(c);
                }
            }
            scratch.cells.sort_unstable();
            trace = mix(trace, w as u64);
            for ci in 0..scratch.cells.len() {
                let c = scratch.cells[ci];
                scratch.marked[c] = false;
                let clen = self.len[c] as usize;
                let cnt = &scratch.cnt;
                self.elems[c..c + clen].sort_by_key(|&x| cnt[x as usize]);
                let mut starts = vec![c];
                for i in c + 1..c + clen {
                    if cnt[self.elems[i] as usize] != cnt[self.elems[i - 1] as usize] {
                        starts.push(i);
                    }
                }
                trace = mix(trace, c as u64);
                for &s in &starts {
                    trace = mix(trace, ((cnt[self.elems[s] as usize] as u64) << 32) | s as u64);
                }
                if starts.len() == 1 {
                    continue;
                }
                starts.push(c + clen);
                let mut largest = 0;
                for f in 0..starts.len() - 1 {
                    let (s, e) = (starts[f], starts[f + 1]);
                    self.len[s] = (e - s) as u32;
                    for i in s..e {
                        self.cell[self.elems[i] as usize] = s as u32;
                    }
                    if e - s > starts[largest + 1] - starts[largest] {
                        largest = f;
                    }
                }
                self.count += starts.len() - 2;
                let was_queued = scratch.queued[c];
                for f in 0..starts.len() - 1 {
                    let s = starts[f];
                    if (was_queued || f != largest) && !scratch.queued[s] {
                        scratch.queued[s] = true;
                        queue.push_back(s);
                    }
                }
            }
            for &x in &scratch.touched {
                scratch.cnt[x] = 0;
            }
        }
        for q in queue {
            scratch.queued[q] = false;
        }
        debug_assert!(scratch.cnt.iter().take(n).all(|&c| c == 0));
        trace
    }

    /// Splits `{x}` off the front of its cell.
    fn individualize(&mut self, x: usize) -> usize {
        let c = self.cell[x] as usize;
        let l = self.len[c] as usize;
        let pos = self.elems[c..c + l].iter().position(|&y| y as usize == x).unwrap() + c;
        self.elems.swap(c, pos);
        self.len[c] = 1;
        self.len[c + 1] = (l - 1) as u32;
        for i in c + 1..c + l {
            self.cell[self.elems[i] as usize] = (c + 1) as u32;
        }
        self.count += 1;
        c
    }

    fn labeling(&self) -> Vec<u32> {
        let mut lab = vec![0; self.elems.len()];
        for (i, &x) in self.elems.iter().enumerate() {
            lab[x as usize] = i as u32;
        }
        lab
    }
}

struct Scratch {
    cnt: Vec<u32>,
    queued: Vec<bool>,
    marked: Vec<bool>,
    touched: Vec<usize>,
    cells: Vec<usize>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self {
            cnt: vec![0; n],
            queued: vec![false; n],
            marked: vec![false; n],
            touched: Vec::new(),
            cells: Vec::new(),
        }
    }
}

struct Leaf {
    traces: Vec<u64>,
    path: Vec<u32>,
    edges: Vec<(u32, u32)>,
    lab: Vec<u32>,
}

impl Leaf {
    fn key_cmp(&self, traces: &[u64], edges: &[(u32, u32)]) -> Ordering {
        traces.cmp(&self.traces).then_with(|| edges.cmp(&self.edges))
    }
}

struct Search<'g> {
    g: &'g Graph,
    scratch: Scratch,
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Vec<u32>>,
    /// Orbit length of the first-path child at each first-path level.
    factors: Vec<usize>,
}

fn common_prefix(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn find(uf: &mut [u32], x: usize) -> usize {
    let mut r = x;
    while uf[r] as usize != r {
        r = uf[r] as usize;
    }
    let mut y = x;
    while uf[y] as usize != r {
        let next = uf[y] as usize;
        uf[y] = r as u32;
        y = next;
    }
    r
}

impl Search<'_> {
    fn edges(&self, lab: &[u32]) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for (u, nbrs) in self.g.adj.iter().enumerate() {
            let lu = lab[u];
            for &w in nbrs {
                let lw = lab[w as usize];
                if lu < lw {
                    out.push((lu, lw));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Union-find of the orbits of the automorphisms fixing `path`.
    fn orbit_classes(&self, path: &[u32]) -> Vec<u32> {
        let mut uf: Vec<u32> = (0..self.g.n as u32).collect();
        for a in &self.autos {
            if path.iter().all(|&p| a[p as usize] == p) {
                for (x, &y) in a.iter().enumerate() {
                    let (rx, ry) = (find(&mut uf, x), find(&mut uf, y as usize));
                    if rx != ry {
                        uf[rx.max(ry)] = rx.min(ry) as u32;
                    }
                }
            }
        }
        uf
    }

    /// `γ` with `leaf.lab[x] = lab[γ(x)]`.
    fn record_auto(&mut self, leaf_lab: &[u32], lab: &[u32]) {
        let mut inv = vec![0u32; lab.len()];
        for (x, &l) in lab.iter().enumerate() {
            inv[l as usize] = x as u32;
        }
        let a: Vec<u32> = leaf_lab.iter().map(|&l| inv[l as usize]).collect();
        if a.iter().enumerate().any(|(i, &x)| i as u32 != x) {
            self.autos.push(a);
        }
    }

    /// Returns the depth to unwind to, if a jump is due.
    fn explore(&mut self, part: Partition, path: &mut Vec<u32>, traces: &mut Vec<u64>) -> Option<usize> {
        let depth = path.len();
        let Some(target) = part.target() else {
            return self.leaf(&part, path, traces);
        };
        let on_first = self.first.as_ref().is_none_or(|f| f.path.len() > depth && f.path[..depth] == path[..]);
        let mut children: Vec<u32> = part.elems[target..target + part.len[target] as usize].to_vec();
        children.sort_unstable();
        let mut explored: Vec<u32> = Vec::new();
        let mut seen_autos = usize::MAX;
        let mut uf = Vec::new();
        for &x in &children {
            if !explored.is_empty() {
                if seen_autos != self.autos.len() {
                    uf = self.orbit_classes(path);
                    seen_autos = self.autos.len();
                }
                let rx = find(&mut uf, x as usize);
                if explored.iter().any(|&y| find(&mut uf, y as usize) == rx) {
                    continue;
                }
            }
            explored.push(x);
            let mut child = part.clone();
            let s = child.individualize(x as usize);
            let t = child.refine(self.g, vec![s], &mut self.scratch);
            path.push(x);
            traces.push(t);
            let keep = match (&self.first, &self.best) {
                (Some(f), Some(b)) => {
                    let first_like = f.traces.len() >= traces.len() && f.traces[..traces.len()] == traces[..];
                    let m = traces.len().min(b.traces.len());
                    first_like || traces[..m] >= b.traces[..m]
                }
                _ => true,
            };
            let jump = if keep { self.explore(child, path, traces) } else { None };
            path.pop();
            traces.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        if on_first {
            let uf_now = &mut self.orbit_classes(path);
            let f0 = self.first.as_ref().expect("first leaf exists").path[depth] as usize;
            let r0 = find(uf_now, f0);
            let size = children.iter().filter(|&&y| find(uf_now, y as usize) == r0).count();
            if self.factors.len() <= depth {
                self.factors.resize(depth + 1, 1);
            }
            self.factors[depth] = size;
        }
        None
    }

    fn leaf(&mut self, part: &Partition, path: &[u32], traces: &[u64]) -> Option<usize> {
        let lab = part.labeling();
        let edges = self.edges(&lab);
        let Some(first) = &self.first else {
            let leaf = Leaf {
                traces: traces.to_vec(),
                path: path.to_vec(),
                edges,
                lab,
            };
            self.best = Some(Leaf {
                traces: leaf.traces.clone(),
                path: leaf.path.clone(),
                edges: leaf.edges.clone(),
                lab: leaf.lab.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if first.key_cmp(traces, &edges) == Ordering::Equal {
            let first_lab = first.lab.clone();
            let level = common_prefix(&first.path, path);
            self.record_auto(&first_lab, &lab);
            return Some(level);
        }
        let best = self.best.as_ref().expect("best leaf exists");
        match best.key_cmp(traces, &edges) {
            Ordering::Equal => {
                let best_lab = best.lab.clone();
                let level = common_prefix(&best.path, path);
                self.record_auto(&best_lab, &lab);
                Some(level)
            }
            Ordering::Greater => {
                self.best = Some(Leaf {
                    traces: traces.to_vec(),
                    path: path.to_vec(),
                    edges,
                    lab,
                });
                None
            }
            Ordering::Less => None,
        }
    }
}

fn factorial(m: usize) -> BigUint {
    (2..=m).fold(BigUint::from(1u32), |acc, i| acc * BigUint::from(i))
}

/// Canonical form and automorphism group of `d`, optionally restricted to
/// permutations preserving the point partition `parts` (parts may be
/// permuted among themselves).
pub fn canonical_form(d: &IncidenceStructure, parts: Option<&[Vec<usize>]>) -> Result<Certificate> {
    let (v, b) = (d.v(), d.b());
    if v + b > MAX_VERTICES {
        return Err(Error::TooLarge(v + b));
    }
    let m = parts.map_or(0, <[Vec<usize>]>::len);
    if let Some(ps) = parts {
        let mut seen = vec![false; v];
        for p in ps {
            for &x in p {
                if x >= v || seen[x] {
                    return Err(Error::InvalidArgument(format!("point {x} repeated or out of range in partition")));
                }
                seen[x] = true;
            }
        }
        if seen.iter().any(|s| !s) || ps.iter().any(Vec::is_empty) {
            return Err(Error::InvalidArgument("partition does not cover the points".into()));
        }
    }
    let n = v + b + m;
    let mut adj = vec![Vec::new(); n];
    for (i, blk) in d.blocks().iter().enumerate() {
        for &x in blk {
            adj[x].push((v + i) as u32);
            adj[v + i].push(x as u32);
        }
    }
    for (i, p) in parts.unwrap_or(&[]).iter().enumerate() {
        for &x in p {
            adj[x].push((v + b + i) as u32);
            adj[v + b + i].push(x as u32);
        }
    }
    let mut cells = vec![(0, v), (v, b)];
    if m > 0 {
        cells.push((v + b, m));
    }
    cells.retain(|&(_, l)| l > 0);
    let g = Graph { n, adj, cells };

    let mut search = Search {
        g: &g,
        scratch: Scratch::new(n),
        first: None,
        best: None,
        autos: Vec::new(),
        factors: Vec::new(),
    };
    let mut root = Partition::new(&g);
    let starts = g.cells.iter().map(|&(s, _)| s).collect();
    let t0 = root.refine(&g, starts, &mut search.scratch);
    search.explore(root, &mut Vec::new(), &mut vec![t0]);

    let best = search.best.take().expect("search reaches a leaf");
    let labeling: Vec<usize> = best.lab[..v].iter().map(|&l| l as usize).collect();
    let relabel = |set: &[usize]| {
        let mut s: Vec<usize> = set.iter().map(|&x| labeling[x]).collect();
        s.sort_unstable();
        s
    };
    let mut blocks: Vec<Vec<usize>> = d.blocks().iter().map(|blk| relabel(blk)).collect();
    blocks.sort();
    let canon_parts = parts.map(|ps| {
        let mut out: Vec<Vec<usize>> = ps.iter().map(|p| relabel(p)).collect();
        out.sort();
        out
    });

    let mut hasher = Sha256::new();
    hasher.update(format!("{v} {b}\n").as_bytes());
    for blk in &blocks {
        hasher.update(format!("{blk:?}\n").as_bytes());
    }
    if let Some(ps) = &canon_parts {
        for p in ps {
            hasher.update(format!("#{p:?}\n").as_bytes());
        }
    }
    let hash = hasher.finalize().iter().map(|byte| format!("{byte:02x}")).collect();

    let mut order = search.factors.iter().fold(BigUint::from(1u32), |acc, &f| acc * BigUint::from(f));
    let mut multiplicity = BTreeMap::new();
    for blk in d.blocks() {
        *multiplicity.entry(blk).or_insert(0usize) += 1;
    }
    for &mult in multiplicity.values() {
        order /= factorial(mult);
    }
    let mut generators: Vec<Permutation> = search
        .autos
        .iter()
        .map(|a| Permutation::new(a[..v].iter().map(|&x| x as usize).collect()).expect("automorphisms fix the point cell"))
        .filter(|p| !p.is_identity())
        .collect();
    generators.sort();
    generators.dedup();
    Ok(Certificate {
        blocks,
        parts: canon_parts,
        hash,
        labeling,
        generators,
        order,
    })
}

pub fn isomorphic(d: &IncidenceStructure, e: &IncidenceStructure) -> Result<bool> {
    if d.v() != e.v() || d.b() != e.b() {
        return Ok(false);
    }
    Ok(canonical_form(d, None)? == canonical_form(e, None)?)
}
