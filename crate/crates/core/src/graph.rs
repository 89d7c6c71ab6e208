//! Simple undirected graphs on at most 64 vertices, stored as GF(2) bit rows,
//! together with local complementation and edge local complementation (pivot).
//!
//! Every operation returns a new graph; a [`Graph`] is never mutated after
//! construction through the public API.

use std::fmt;

use thiserror::Error;

/// Largest supported vertex count: one adjacency row per machine word.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph on {0} vertices exceeds the {MAX_VERTICES}-vertex limit")]
    TooManyVertices(usize),
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0} is not allowed in a simple graph")]
    SelfLoop(usize),
    #[error("{{{u}, {v}}} is not an edge")]
    NotAnEdge { u: usize, v: usize },
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("coloring has length {got}, graph has {n} vertices")]
    ColoringLength { got: usize, n: usize },
    #[error("coloring is not a proper 2-coloring: edge {{{u}, {v}}} joins two vertices on the same side")]
    ImproperColoring { u: usize, v: usize },
    #[error("adjacency matrix is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
}

/// Bit mask with the lowest `n` bits set.
#[inline]
pub(crate) fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the indices of set bits in ascending order.
#[inline]
pub(crate) fn bits(mut word: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if word == 0 {
            None
        } else {
            let i = word.trailing_zeros() as usize;
            word &= word - 1;
            Some(i)
        }
    })
}

/// A simple undirected graph; row `i` holds the neighbourhood of vertex `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph { adj: vec![0; n] })
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n)?;
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.adj[u] |= 1 << v;
            g.adj[v] |= 1 << u;
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows, validating symmetry, the zero
    /// diagonal and that no bit beyond `n` is set.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self, GraphError> {
        let n = rows.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mask = low_mask(n);
        for (i, &row) in rows.iter().enumerate() {
            if row & !mask != 0 {
                let j = (row & !mask).trailing_zeros() as usize;
                return Err(GraphError::VertexOutOfRange { vertex: j, n });
            }
            if row >> i & 1 == 1 {
                return Err(GraphError::SelfLoop(i));
            }
            for j in bits(row) {
                if rows[j] >> i & 1 == 0 {
                    return Err(GraphError::Asymmetric { i, j });
                }
            }
        }
        Ok(Graph { adj: rows })
    }

    /// Rows already known to be valid.
    pub(crate) fn from_rows_unchecked(rows: Vec<u64>) -> Self {
        debug_assert!(Self::from_rows(rows.clone()).is_ok());
        Graph { adj: rows }
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        let mask = low_mask(n);
        for (i, row) in g.adj.iter_mut().enumerate() {
            *row = mask & !(1 << i);
        }
        Ok(g)
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Result<Self, GraphError> {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Self::from_edges(n, edges)
    }

    /// Star with centre 0 and `n - 1` leaves.
    pub fn star(n: usize) -> Result<Self, GraphError> {
        Self::from_edges(n, (1..n).map(|i| (0, i)))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    /// Bit mask of all vertices.
    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        low_mask(self.n())
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj[u] >> v & 1 == 1
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Edges `(u, v)` with `u < v`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, &row)| bits(row & !low_mask(u + 1)).map(move |v| (u, v)))
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.n() {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        } else {
            Ok(())
        }
    }

    fn check_edge(&self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !self.has_edge(u, v) {
            return Err(GraphError::NotAnEdge { u, v });
        }
        Ok(())
    }

    /// Local complementation `G * v`: complements the subgraph induced on the
    /// neighbourhood of `v`.
    pub fn local_complement(&self, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(v)?;
        let mut out = self.clone();
        out.local_complement_in_place(v);
        Ok(out)
    }

    pub(crate) fn local_complement_in_place(&mut self, v: usize) {
        let nb = self.adj[v];
        for x in bits(nb) {
            self.adj[x] ^= nb & !(1 << x);
        }
    }

    /// Edge local complementation as the composition `G * u * v * u`.
    pub fn elc_via_lc(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_edge(u, v)?;
        let mut out = self.clone();
        out.local_complement_in_place(u);
        out.local_complement_in_place(v);
        out.local_complement_in_place(u);
        Ok(out)
    }

    /// Edge local complementation by the neighbour-class rule: with `A`, `B`
    /// and `C` the vertices adjacent to only `u`, only `v`, and both, every
    /// pair drawn from two different classes is toggled, then the labels
    /// `u` and `v` are swapped.
    pub fn elc_classes(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_edge(u, v)?;
        let mut out = self.clone();
        out.elc_in_place(u, v);
        Ok(out)
    }

    pub(crate) fn elc_in_place(&mut self, u: usize, v: usize) {
        self.elc_toggle_in_place(u, v);
        self.swap_in_place(u, v);
    }

    /// The toggle part of ELC without the final label swap.
    pub(crate) fn elc_toggle_in_place(&mut self, u: usize, v: usize) {
        let uv = (1u64 << u) | (1u64 << v);
        let nu = self.adj[u] & !uv;
        let nv = self.adj[v] & !uv;
        let a = nu & !nv;
        let b = nv & !nu;
        let c = nu & nv;
        for x in bits(a) {
            self.adj[x] ^= b | c;
        }
        for x in bits(b) {
            self.adj[x] ^= a | c;
        }
        for x in bits(c) {
            self.adj[x] ^= a | b;
        }
    }

    /// ELC on `{u, v}` followed by a second swap of `u` and `v`, i.e. only the
    /// edge toggling. On a standard-form code graph this yields the graph of
    /// the code with coordinates `u` and `v` interchanged.
    pub fn elc_without_swap(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_edge(u, v)?;
        let mut out = self.clone();
        out.elc_toggle_in_place(u, v);
        Ok(out)
    }

    /// Bipartite pivot: toggles every pair between `N(u) \ {v}` and
    /// `N(v) \ {u}` with row XORs, then swaps `u` and `v`.
    pub fn pivot_bipartite(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_edge(u, v)?;
        if self.bipartition().is_none() {
            return Err(GraphError::NotBipartite);
        }
        let mut out = self.clone();
        let nu = self.adj[u] & !(1 << v);
        let nv = self.adj[v] & !(1 << u);
        for x in bits(nu) {
            out.adj[x] ^= nv;
        }
        for y in bits(nv) {
            out.adj[y] ^= nu;
        }
        out.swap_in_place(u, v);
        Ok(out)
    }

    /// Exchanges the labels of `u` and `v`.
    pub fn swap_vertices(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut out = self.clone();
        out.swap_in_place(u, v);
        Ok(out)
    }

    pub(crate) fn swap_in_place(&mut self, u: usize, v: usize) {
        if u == v {
            return;
        }
        self.adj.swap(u, v);
        let (bu, bv) = (1u64 << u, 1u64 << v);
        for row in self.adj.iter_mut() {
            let hu = *row & bu != 0;
            let hv = *row & bv != 0;
            if hu != hv {
                *row ^= bu | bv;
            }
        }
    }

    /// Relabels so that vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n(), "permutation length mismatch");
        let mut adj = vec![0u64; self.n()];
        for (v, &row) in self.adj.iter().enumerate() {
            adj[perm[v]] = bits(row).fold(0, |acc, w| acc | 1 << perm[w]);
        }
        Graph { adj }
    }

    /// Connected components as vertex masks, ordered by their lowest vertex.
    pub fn components(&self) -> Vec<u64> {
        let mut left = self.vertex_mask();
        let mut out = Vec::new();
        while left != 0 {
            let start = left & left.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let mut next = 0;
                for x in bits(frontier) {
                    next |= self.adj[x];
                }
                frontier = next & !comp;
                comp |= next;
            }
            left &= !comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Subgraph induced on the vertices of `mask`, relabelled in ascending
    /// order. Returns the graph and the original label of each new vertex.
    pub fn induced_subgraph(&self, mask: u64) -> (Graph, Vec<usize>) {
        let verts: Vec<usize> = bits(mask & self.vertex_mask()).collect();
        let mut index = [usize::MAX; MAX_VERTICES];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let adj = verts
            .iter()
            .map(|&v| bits(self.adj[v] & mask).fold(0u64, |acc, w| acc | 1 << index[w]))
            .collect();
        (Graph { adj }, verts)
    }

    /// A proper 2-coloring if one exists. Each component's lowest vertex is
    /// coloured [`Side::Left`].
    pub fn bipartition(&self) -> Option<Coloring> {
        let mut left = 0u64;
        let mut right = 0u64;
        for comp in self.components() {
            let root = comp & comp.wrapping_neg();
            let (mut l, mut r) = (root, 0u64);
            let mut frontier = root;
            let mut frontier_left = true;
            while frontier != 0 {
                let mut next = 0;
                for x in bits(frontier) {
                    next |= self.adj[x];
                }
                if frontier_left {
                    if next & l != 0 {
                        return None;
                    }
                    frontier = next & !r;
                    r |= next;
                } else {
                    if next & r != 0 {
                        return None;
                    }
                    frontier = next & !l;
                    l |= next;
                }
                frontier_left = !frontier_left;
            }
            left |= l;
            right |= r;
        }
        debug_assert_eq!(left | right, self.vertex_mask());
        Some(Coloring::from_left_mask(self.n(), left))
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Adds a vertex (labelled `n`) joined to the vertices of `mask`.
    pub fn with_new_vertex(&self, mask: u64) -> Result<Graph, GraphError> {
        let n = self.n();
        if n >= MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n + 1));
        }
        if mask & !self.vertex_mask() != 0 {
            let v = (mask & !self.vertex_mask()).trailing_zeros() as usize;
            return Err(GraphError::VertexOutOfRange { vertex: v, n });
        }
        let mut adj = self.adj.clone();
        for x in bits(mask) {
            adj[x] |= 1 << n;
        }
        adj.push(mask);
        Ok(Graph { adj })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n())?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Assignment of every vertex to one of two sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coloring {
    sides: Vec<Side>,
}

impl Coloring {
    pub fn new(sides: Vec<Side>) -> Self {
        Coloring { sides }
    }

    pub fn from_left_mask(n: usize, left: u64) -> Self {
        let sides = (0..n)
            .map(|v| {
                if left >> v & 1 == 1 {
                    Side::Left
                } else {
                    Side::Right
                }
            })
            .collect();
        Coloring { sides }
    }

    /// First `left` vertices on the left, the rest on the right.
    pub fn split(n: usize, left: usize) -> Self {
        Self::from_left_mask(n, low_mask(left.min(n)))
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    pub fn side(&self, v: usize) -> Side {
        self.sides[v]
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn mask(&self, side: Side) -> u64 {
        self.sides
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == side)
            .fold(0, |acc, (v, _)| acc | 1 << v)
    }

    pub fn count(&self, side: Side) -> usize {
        self.sides.iter().filter(|&&s| s == side).count()
    }

    pub fn flipped(&self) -> Coloring {
        Coloring {
            sides: self.sides.iter().map(|s| s.opposite()).collect(),
        }
    }

    pub fn swapped(&self, u: usize, v: usize) -> Coloring {
        let mut out = self.clone();
        out.sides.swap(u, v);
        out
    }

    /// Coloring after relabelling vertex `v` to `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Coloring {
        let mut sides = self.sides.clone();
        for (v, &s) in self.sides.iter().enumerate() {
            sides[perm[v]] = s;
        }
        Coloring { sides }
    }

    pub fn restrict(&self, verts: &[usize]) -> Coloring {
        Coloring {
            sides: verts.iter().map(|&v| self.sides[v]).collect(),
        }
    }

    /// Checks length and that no edge joins two vertices of the same side.
    pub fn validate_for(&self, g: &Graph) -> Result<(), GraphError> {
        if self.len() != g.n() {
            return Err(GraphError::ColoringLength {
                got: self.len(),
                n: g.n(),
            });
        }
        let left = self.mask(Side::Left);
        for (u, v) in g.edges() {
            if (left >> u & 1) == (left >> v & 1) {
                return Err(GraphError::ImproperColoring { u, v });
            }
        }
        Ok(())
    }
}
