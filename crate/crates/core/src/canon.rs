//! Canonical labelling of (optionally 2-coloured) graphs.
//!
//! The labeller refines an ordered partition of the vertices to an equitable
//! one, then individualizes vertices of the first smallest non-singleton cell
//! and recurses. Each discrete partition (leaf) gives a relabelling; the
//! canonical one is the leaf whose relabelled adjacency rows are
//! lexicographically smallest. Automorphisms found when two leaves produce the
//! same graph are used to skip equivalent branches; this pruning can be
//! switched off without changing any result.

use std::fmt;

use crate::graph::{bits, low_mask, Coloring, Graph, Side, MAX_VERTICES};

/// Isomorphism-invariant key. Two (coloured) graphs have equal keys iff they
/// are (colour-preservingly) isomorphic.
///
/// Layout: one header word (`n` in bits 0..8, coloured flag in bit 8, size of
/// the left colour class in bits 16..24) followed by the upper triangle of the
/// canonical adjacency matrix, row by row, packed little-endian into words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Box<[u64]>);

impl CanonicalForm {
    fn encode(rows: &[u64], left: Option<usize>) -> Self {
        let n = rows.len();
        let tri = n * n.saturating_sub(1) / 2;
        let mut words = vec![0u64; 1 + tri.div_ceil(64)];
        words[0] = n as u64;
        if let Some(l) = left {
            words[0] |= 1 << 8 | (l as u64) << 16;
        }
        let mut pos = 0usize;
        for (i, &row) in rows.iter().enumerate() {
            let upper = row >> (i + 1).min(63) >> ((i + 1) / 64);
            let len = n - i - 1;
            if len == 0 {
                continue;
            }
            let w = 1 + pos / 64;
            let off = pos % 64;
            words[w] |= upper << off;
            if off + len > 64 {
                words[w + 1] |= upper >> (64 - off);
            }
            pos += len;
        }
        CanonicalForm(words.into_boxed_slice())
    }

    pub fn n(&self) -> usize {
        (self.0[0] & 0xff) as usize
    }

    pub fn is_colored(&self) -> bool {
        self.0[0] >> 8 & 1 == 1
    }

    /// Size of the left colour class, for coloured keys.
    pub fn left_count(&self) -> Option<usize> {
        self.is_colored().then(|| (self.0[0] >> 16 & 0xff) as usize)
    }

    pub fn words(&self) -> &[u64] {
        &self.0
    }

    /// The canonically labelled graph this key encodes.
    pub fn graph(&self) -> Graph {
        let n = self.n();
        let mut rows = vec![0u64; n];
        let mut pos = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                if self.0[1 + pos / 64] >> (pos % 64) & 1 == 1 {
                    rows[i] |= 1 << j;
                    rows[j] |= 1 << i;
                }
                pos += 1;
            }
        }
        Graph::from_rows_unchecked(rows)
    }

    /// Colouring of [`CanonicalForm::graph`]: the left class comes first.
    pub fn coloring(&self) -> Option<Coloring> {
        self.left_count().map(|l| Coloring::split(self.n(), l))
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm(")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ":")?;
            }
            write!(f, "{w:x}")?;
        }
        write!(f, ")")
    }
}

/// Result of canonical labelling.
#[derive(Debug, Clone)]
pub struct Labeling {
    pub form: CanonicalForm,
    /// `relabel[v]` is the canonical index of input vertex `v`.
    pub relabel: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct Canonizer {
    prune_automorphisms: bool,
}

impl Default for Canonizer {
    fn default() -> Self {
        Canonizer {
            prune_automorphisms: true,
        }
    }
}

impl Canonizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_automorphism_pruning(mut self, on: bool) -> Self {
        self.prune_automorphisms = on;
        self
    }

    pub fn label(&self, g: &Graph, coloring: Option<&Coloring>) -> Labeling {
        let n = g.n();
        if let Some(c) = coloring {
            assert_eq!(c.len(), n, "coloring length must equal vertex count");
        }
        let mut search = Search {
            adj: g.rows(),
            n,
            prune: self.prune_automorphisms,
            first: None,
            best: None,
            path: Vec::with_capacity(n),
            generators: Vec::new(),
        };
        let mut root = Partition::new(n);
        let left = match coloring {
            Some(c) => {
                let left_mask = c.mask(Side::Left);
                root.set_initial_cells(left_mask);
                Some(left_mask.count_ones() as usize)
            }
            None => None,
        };
        let starts: Vec<u8> = root.cell_starts().collect();
        root.refine(search.adj, &starts);
        search.run(&root, 0);
        let best = search.best.expect("search reaches at least one leaf");
        let mut relabel = vec![0usize; n];
        for (pos, &v) in best.lab[..n].iter().enumerate() {
            relabel[v as usize] = pos;
        }
        Labeling {
            form: CanonicalForm::encode(&best.rows, left),
            relabel,
        }
    }

    pub fn key(&self, g: &Graph, coloring: Option<&Coloring>) -> CanonicalForm {
        self.label(g, coloring).form
    }
}

/// Canonical form and relabelling with default settings.
pub fn canonical_form(g: &Graph, coloring: Option<&Coloring>) -> Labeling {
    Canonizer::default().label(g, coloring)
}

pub fn canonical_key(g: &Graph, coloring: Option<&Coloring>) -> CanonicalForm {
    Canonizer::default().key(g, coloring)
}

pub fn is_isomorphic(g: &Graph, h: &Graph, cg: Option<&Coloring>, ch: Option<&Coloring>) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() || cg.is_some() != ch.is_some() {
        return false;
    }
    canonical_key(g, cg) == canonical_key(h, ch)
}

/// Ordered partition of the vertex positions into contiguous cells.
#[derive(Clone)]
struct Partition {
    n: usize,
    /// Vertex at each position.
    lab: [u8; MAX_VERTICES],
    /// Cell length at each cell start, 0 elsewhere.
    len: [u8; MAX_VERTICES],
}

impl Partition {
    fn new(n: usize) -> Self {
        let mut lab = [0u8; MAX_VERTICES];
        for (i, l) in lab.iter_mut().enumerate().take(n) {
            *l = i as u8;
        }
        let mut len = [0u8; MAX_VERTICES];
        len[0] = n as u8;
        Partition { n, lab, len }
    }

    fn set_initial_cells(&mut self, left: u64) {
        let mut pos = 0;
        for v in bits(left & low_mask(self.n)) {
            self.lab[pos] = v as u8;
            pos += 1;
        }
        let split = pos;
        for v in bits(!left & low_mask(self.n)) {
            self.lab[pos] = v as u8;
            pos += 1;
        }
        self.len = [0; MAX_VERTICES];
        if split == 0 || split == self.n {
            self.len[0] = self.n as u8;
        } else {
            self.len[0] = split as u8;
            self.len[split] = (self.n - split) as u8;
        }
    }

    fn cell_starts(&self) -> impl Iterator<Item = u8> + '_ {
        let mut s = 0usize;
        std::iter::from_fn(move || {
            if s >= self.n {
                return None;
            }
            let out = s;
            s += self.len[s] as usize;
            Some(out as u8)
        })
    }

    #[inline]
    fn cell_mask(&self, start: usize) -> u64 {
        let l = self.len[start] as usize;
        self.lab[start..start + l]
            .iter()
            .fold(0u64, |acc, &v| acc | 1 << v)
    }

    fn is_discrete(&self) -> bool {
        self.cell_starts().all(|s| self.len[s as usize] == 1)
    }

    /// First smallest non-singleton cell.
    fn target_cell(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in self.cell_starts() {
            let s = s as usize;
            let l = self.len[s];
            if l > 1 && best.is_none_or(|b| l < self.len[b]) {
                best = Some(s);
                if l == 2 {
                    break;
                }
            }
        }
        best
    }

    /// Splits `v` off the front of its cell (starting at `start`).
    fn individualize(&mut self, start: usize, v: u8) {
        let l = self.len[start] as usize;
        let p = self.lab[start..start + l]
            .iter()
            .position(|&x| x == v)
            .expect("vertex in target cell")
            + start;
        self.lab.swap(start, p);
        self.len[start] = 1;
        self.len[start + 1] = (l - 1) as u8;
    }

    /// Refines to the coarsest equitable partition finer than the current
    /// one, using the cells at `splitters` as the initial queue. Fragments of
    /// a split cell are ordered by ascending neighbour count, which keeps the
    /// procedure isomorphism-invariant.
    fn refine(&mut self, adj: &[u64], splitters: &[u8]) {
        let n = self.n;
        let mut queue: Vec<u8> = splitters.to_vec();
        let mut queued = [false; MAX_VERTICES];
        for &s in splitters {
            queued[s as usize] = true;
        }
        let mut head = 0;
        let mut counts = [0u8; MAX_VERTICES];
        while head < queue.len() {
            if self.all_singletons_quick() {
                return;
            }
            let w = queue[head] as usize;
            head += 1;
            queued[w] = false;
            let wmask = self.cell_mask(w);
            let mut s = 0usize;
            while s < n {
                let l = self.len[s] as usize;
                if l > 1 {
                    let mut same = true;
                    let first = (adj[self.lab[s] as usize] & wmask).count_ones() as u8;
                    for p in s..s + l {
                        let c = (adj[self.lab[p] as usize] & wmask).count_ones() as u8;
                        counts[self.lab[p] as usize] = c;
                        same &= c == first;
                    }
                    if !same {
                        self.lab[s..s + l].sort_unstable_by_key(|&v| counts[v as usize]);
                        let was_queued = queued[s];
                        let mut frag_start = s;
                        let mut largest = s;
                        let mut largest_len = 0usize;
                        let mut frags: [u8; MAX_VERTICES] = [0; MAX_VERTICES];
                        let mut nfrags = 0;
                        for p in s + 1..=s + l {
                            if p == s + l
                                || counts[self.lab[p] as usize] != counts[self.lab[p - 1] as usize]
                            {
                                let fl = p - frag_start;
                                self.len[frag_start] = fl as u8;
                                frags[nfrags] = frag_start as u8;
                                nfrags += 1;
                                if fl > largest_len {
                                    largest_len = fl;
                                    largest = frag_start;
                                }
                                frag_start = p;
                            }
                        }
                        for &f in &frags[..nfrags] {
                            let f = f as usize;
                            if queued[f] || (!was_queued && f == largest) {
                                continue;
                            }
                            queued[f] = true;
                            queue.push(f as u8);
                        }
                    }
                }
                s += l;
            }
        }
    }

    #[inline]
    fn all_singletons_quick(&self) -> bool {
        // a cell start with length 1 at every position
        self.len[..self.n].iter().all(|&l| l == 1)
    }
}

struct Leaf {
    lab: [u8; MAX_VERTICES],
    rows: Vec<u64>,
    path: Vec<u8>,
}

struct Search<'a> {
    adj: &'a [u64],
    n: usize,
    prune: bool,
    first: Option<Leaf>,
    best: Option<Leaf>,
    path: Vec<u8>,
    /// Automorphisms as vertex maps.
    generators: Vec<[u8; MAX_VERTICES]>,
}

fn common_prefix(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Search<'_> {
    /// Returns `Some(level)` to abandon every node deeper than `level`.
    fn run(&mut self, part: &Partition, depth: usize) -> Option<usize> {
        let Some(start) = part.target_cell() else {
            return self.leaf(part);
        };
        let l = part.len[start] as usize;
        let mut cell: Vec<u8> = part.lab[start..start + l].to_vec();
        cell.sort_unstable();
        let mut explored: Vec<u8> = Vec::with_capacity(l);
        let mut orbits: Option<(usize, Vec<u8>)> = None;
        for &w in &cell {
            if self.prune && !explored.is_empty() && !self.generators.is_empty() {
                let stale = orbits
                    .as_ref()
                    .is_none_or(|(k, _)| *k != self.generators.len());
                if stale {
                    orbits = Some((self.generators.len(), self.stabilizer_orbits(depth)));
                }
                let (_, roots) = orbits.as_ref().unwrap();
                let rw = roots[w as usize];
                if explored.iter().any(|&e| roots[e as usize] == rw) {
                    continue;
                }
            }
            let mut child = part.clone();
            child.individualize(start, w);
            child.refine(self.adj, &[start as u8]);
            self.path.push(w);
            let jump = self.run(&child, depth + 1);
            self.path.pop();
            explored.push(w);
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, part: &Partition) -> Option<usize> {
        debug_assert!(part.is_discrete());
        let n = self.n;
        let mut pos = [0u8; MAX_VERTICES];
        for (p, &v) in part.lab[..n].iter().enumerate() {
            pos[v as usize] = p as u8;
        }
        let rows: Vec<u64> = part.lab[..n]
            .iter()
            .map(|&v| bits(self.adj[v as usize]).fold(0u64, |acc, w| acc | 1 << pos[w]))
            .collect();
        let leaf = Leaf {
            lab: part.lab,
            rows,
            path: self.path.clone(),
        };
        let Some(first) = &self.first else {
            self.first = Some(Leaf {
                lab: leaf.lab,
                rows: leaf.rows.clone(),
                path: leaf.path.clone(),
            });
            self.best = Some(leaf);
            return None;
        };
        if !self.prune {
            if leaf.rows < self.best.as_ref().unwrap().rows {
                self.best = Some(leaf);
            }
            return None;
        }
        if leaf.rows == first.rows {
            let gen = Self::automorphism(&first.lab, &leaf.lab, n);
            let level = common_prefix(&first.path, &leaf.path);
            self.generators.push(gen);
            return Some(level);
        }
        let best = self.best.as_ref().unwrap();
        match leaf.rows.cmp(&best.rows) {
            std::cmp::Ordering::Equal => {
                let gen = Self::automorphism(&best.lab, &leaf.lab, n);
                let level = common_prefix(&best.path, &leaf.path);
                self.generators.push(gen);
                Some(level)
            }
            std::cmp::Ordering::Less => {
                self.best = Some(leaf);
                None
            }
            std::cmp::Ordering::Greater => None,
        }
    }

    /// Maps `a[i]` to `b[i]`.
    fn automorphism(
        a: &[u8; MAX_VERTICES],
        b: &[u8; MAX_VERTICES],
        n: usize,
    ) -> [u8; MAX_VERTICES] {
        let mut g = [0u8; MAX_VERTICES];
        for i in 0..n {
            g[a[i] as usize] = b[i];
        }
        g
    }

    /// Orbit roots of the group generated by the known automorphisms that fix
    /// every vertex on the current path up to `depth`.
    fn stabilizer_orbits(&self, depth: usize) -> Vec<u8> {
        let n = self.n;
        let mut parent: Vec<u8> = (0..n as u8).collect();
        fn find(parent: &mut [u8], mut x: u8) -> u8 {
            while parent[x as usize] != x {
                let p = parent[x as usize];
                parent[x as usize] = parent[p as usize];
                x = p;
            }
            x
        }
        let prefix = &self.path[..depth];
        for g in &self.generators {
            if prefix.iter().any(|&v| g[v as usize] != v) {
                continue;
            }
            for v in 0..n as u8 {
                let (a, b) = (find(&mut parent, v), find(&mut parent, g[v as usize]));
                if a != b {
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    parent[hi as usize] = lo;
                }
            }
        }
        (0..n as u8).map(|v| find(&mut parent, v)).collect()
    }
}
