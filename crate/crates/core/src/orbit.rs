//! LC and ELC orbits of connected graphs, enumerated by breadth-first search
//! with deduplication on canonical forms (unlabelled orbits) or on exact
//! adjacency rows (labelled orbits).

use std::collections::VecDeque;

use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::canon::{CanonicalForm, Canonizer};
use crate::graph::{bits, Coloring, Graph, GraphError, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("graph is disconnected, components: {}", format_components(.0))]
    Disconnected(Vec<Vec<usize>>),
    #[error("orbit exceeds the cap of {0} members")]
    CapExceeded(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Components rendered with 1-based vertex labels, e.g. `{1,2} {3}`.
fn format_components(comps: &[Vec<usize>]) -> String {
    comps
        .iter()
        .map(|c| {
            let inner: Vec<String> = c.iter().map(|v| (v + 1).to_string()).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operation {
    /// Local complementation at every vertex.
    Lc,
    /// Edge local complementation on every edge.
    Elc,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct OrbitOptions {
    /// Abort with [`OrbitError::CapExceeded`] once the orbit grows past this.
    pub cap: Option<usize>,
    pub canonizer: Canonizer,
}

impl OrbitOptions {
    pub fn with_cap(cap: usize) -> Self {
        OrbitOptions {
            cap: Some(cap),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrbitReport {
    /// Canonically labelled member with the least canonical form.
    pub representative: Graph,
    pub coloring: Option<Coloring>,
    /// Least canonical form over the orbit; identifies the orbit.
    pub canonical: CanonicalForm,
    pub size_unlabeled: usize,
    pub size_labeled: Option<usize>,
    pub min_degree_left: Option<usize>,
    pub min_degree_right: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Orbit {
    pub report: OrbitReport,
    /// One graph per isomorphism class, in discovery order; the first is the
    /// input graph.
    pub members: Vec<Graph>,
    /// Transported colourings, parallel to `members`, for coloured orbits.
    pub colorings: Option<Vec<Coloring>>,
}

pub(crate) fn require_connected(g: &Graph) -> Result<(), OrbitError> {
    let comps = g.components();
    if comps.len() > 1 {
        return Err(OrbitError::Disconnected(
            comps.into_iter().map(|m| bits(m).collect()).collect(),
        ));
    }
    Ok(())
}

fn check_coloring(g: &Graph, coloring: Option<&Coloring>) -> Result<(), OrbitError> {
    if let Some(c) = coloring {
        if c.len() != g.n() {
            return Err(GraphError::ColoringLength {
                got: c.len(),
                n: g.n(),
            }
            .into());
        }
    }
    Ok(())
}

/// Applies `op` in every possible way to `g`, calling `f` with each image.
fn for_each_move(
    g: &Graph,
    coloring: Option<&Coloring>,
    op: Operation,
    mut f: impl FnMut(Graph, Option<Coloring>),
) {
    match op {
        Operation::Elc => {
            for (u, v) in g.edges() {
                let mut h = g.clone();
                h.elc_in_place(u, v);
                f(h, coloring.map(|c| c.swapped(u, v)));
            }
        }
        Operation::Lc => {
            for v in 0..g.n() {
                if g.degree(v) < 2 {
                    continue;
                }
                let mut h = g.clone();
                h.local_complement_in_place(v);
                f(h, coloring.cloned());
            }
        }
    }
}

/// Summary of one BFS: member keys and the least key.
pub(crate) struct Exploration {
    pub keys: FxHashSet<CanonicalForm>,
    pub min_key: CanonicalForm,
}

/// Breadth-first closure of `g` under `op` up to (coloured) isomorphism.
/// `visit` sees each new member once, in discovery order.
pub(crate) fn explore(
    g: &Graph,
    coloring: Option<&Coloring>,
    op: Operation,
    opts: &OrbitOptions,
    mut visit: impl FnMut(&Graph, Option<&Coloring>, &CanonicalForm),
) -> Result<Exploration, OrbitError> {
    require_connected(g)?;
    check_coloring(g, coloring)?;
    let canon = opts.canonizer;
    let start_key = canon.key(g, coloring);
    let mut keys = FxHashSet::default();
    keys.insert(start_key.clone());
    visit(g, coloring, &start_key);
    let mut min_key = start_key;
    let mut queue: VecDeque<(Graph, Option<Coloring>)> = VecDeque::new();
    queue.push_back((g.clone(), coloring.cloned()));
    let mut overflow = false;
    while let Some((cur, cur_col)) = queue.pop_front() {
        for_each_move(&cur, cur_col.as_ref(), op, |h, hc| {
            if overflow {
                return;
            }
            let key = canon.key(&h, hc.as_ref());
            if keys.contains(&key) {
                return;
            }
            if opts.cap.is_some_and(|cap| keys.len() >= cap) {
                overflow = true;
                return;
            }
            visit(&h, hc.as_ref(), &key);
            if key < min_key {
                min_key = key.clone();
            }
            keys.insert(key);
            queue.push_back((h, hc));
        });
        if overflow {
            return Err(OrbitError::CapExceeded(opts.cap.unwrap_or_default()));
        }
    }
    Ok(Exploration { keys, min_key })
}

fn build_orbit(
    g: &Graph,
    coloring: Option<&Coloring>,
    op: Operation,
    opts: &OrbitOptions,
) -> Result<Orbit, OrbitError> {
    let mut members = Vec::new();
    let mut colorings = coloring.map(|_| Vec::new());
    let mut min_left: Option<usize> = None;
    let mut min_right: Option<usize> = None;
    let ex = explore(g, coloring, op, opts, |h, hc, _| {
        members.push(h.clone());
        if let (Some(list), Some(c)) = (colorings.as_mut(), hc) {
            list.push(c.clone());
            let (l, r) = side_min_degrees(h, c);
            min_left = min_opt(min_left, l);
            min_right = min_opt(min_right, r);
        }
    })?;
    let report = OrbitReport {
        representative: ex.min_key.graph(),
        coloring: ex.min_key.coloring(),
        size_unlabeled: ex.keys.len(),
        canonical: ex.min_key,
        size_labeled: None,
        min_degree_left: min_left,
        min_degree_right: min_right,
    };
    Ok(Orbit {
        report,
        members,
        colorings,
    })
}

fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Least degree among the vertices on each side; `None` for an empty side.
fn side_min_degrees(g: &Graph, c: &Coloring) -> (Option<usize>, Option<usize>) {
    let mut left = None;
    let mut right = None;
    for v in 0..g.n() {
        let d = Some(g.degree(v));
        match c.side(v) {
            Side::Left => left = min_opt(left, d),
            Side::Right => right = min_opt(right, d),
        }
    }
    (left, right)
}

/// ELC orbit up to isomorphism. With a colouring, isomorphisms must respect
/// colours and ELC on `{u, v}` exchanges the colours of `u` and `v` along with
/// their labels.
pub fn elc_orbit_unlabeled(g: &Graph, coloring: Option<&Coloring>) -> Result<Orbit, OrbitError> {
    build_orbit(g, coloring, Operation::Elc, &OrbitOptions::default())
}

pub fn elc_orbit_unlabeled_with(
    g: &Graph,
    coloring: Option<&Coloring>,
    opts: &OrbitOptions,
) -> Result<Orbit, OrbitError> {
    build_orbit(g, coloring, Operation::Elc, opts)
}

pub fn lc_orbit_unlabeled(g: &Graph) -> Result<Orbit, OrbitError> {
    build_orbit(g, None, Operation::Lc, &OrbitOptions::default())
}

pub fn lc_orbit_unlabeled_with(g: &Graph, opts: &OrbitOptions) -> Result<Orbit, OrbitError> {
    build_orbit(g, None, Operation::Lc, opts)
}

/// All labelled graphs reachable by ELC (including its label swap).
pub fn elc_orbit_labeled(g: &Graph) -> Result<Vec<Graph>, OrbitError> {
    elc_orbit_labeled_with(g, &OrbitOptions::default())
}

pub fn elc_orbit_labeled_with(g: &Graph, opts: &OrbitOptions) -> Result<Vec<Graph>, OrbitError> {
    require_connected(g)?;
    let mut seen: FxHashSet<Graph> = FxHashSet::default();
    seen.insert(g.clone());
    let mut out = vec![g.clone()];
    let mut head = 0;
    while head < out.len() {
        let cur = out[head].clone();
        head += 1;
        for (u, v) in cur.edges() {
            let mut h = cur.clone();
            h.elc_in_place(u, v);
            if seen.insert(h.clone()) {
                if opts.cap.is_some_and(|cap| out.len() >= cap) {
                    return Err(OrbitError::CapExceeded(opts.cap.unwrap_or_default()));
                }
                out.push(h);
            }
        }
    }
    Ok(out)
}

/// Splits the LC orbit of `g` into the ELC orbits it contains. The returned
/// orbits are in discovery order and their sizes sum to the LC orbit size.
pub fn partition_lc_orbit(g: &Graph) -> Result<Vec<Orbit>, OrbitError> {
    partition_lc_orbit_with(g, &OrbitOptions::default())
}

pub fn partition_lc_orbit_with(g: &Graph, opts: &OrbitOptions) -> Result<Vec<Orbit>, OrbitError> {
    let mut members: Vec<(Graph, CanonicalForm)> = Vec::new();
    explore(g, None, Operation::Lc, opts, |h, _, k| {
        members.push((h.clone(), k.clone()))
    })?;
    let mut assigned: FxHashSet<CanonicalForm> = FxHashSet::default();
    let mut parts = Vec::new();
    for (h, k) in &members {
        if assigned.contains(k) {
            continue;
        }
        let mut keys = Vec::new();
        let mut orbit = {
            let mut graphs = Vec::new();
            let ex = explore(h, None, Operation::Elc, opts, |m, _, mk| {
                graphs.push(m.clone());
                keys.push(mk.clone());
            })?;
            Orbit {
                report: OrbitReport {
                    representative: ex.min_key.graph(),
                    coloring: None,
                    size_unlabeled: ex.keys.len(),
                    canonical: ex.min_key,
                    size_labeled: None,
                    min_degree_left: None,
                    min_degree_right: None,
                },
                members: graphs,
                colorings: None,
            }
        };
        orbit.members.shrink_to_fit();
        assigned.extend(keys);
        parts.push(orbit);
    }
    debug_assert_eq!(assigned.len(), members.len());
    Ok(parts)
}

/// Least canonical form over the ELC orbit of `g`: equal for two graphs iff
/// they lie in the same (coloured) ELC orbit.
pub fn orbit_canonical_rep(
    g: &Graph,
    coloring: Option<&Coloring>,
) -> Result<CanonicalForm, OrbitError> {
    orbit_canonical_rep_with(g, coloring, Operation::Elc, &OrbitOptions::default())
}

pub fn orbit_canonical_rep_with(
    g: &Graph,
    coloring: Option<&Coloring>,
    op: Operation,
    opts: &OrbitOptions,
) -> Result<CanonicalForm, OrbitError> {
    Ok(explore(g, coloring, op, opts, |_, _, _| {})?.min_key)
}

/// Least degree of a `side` vertex over the coloured ELC orbit of a connected
/// bipartite graph.
pub fn orbit_min_degree(g: &Graph, coloring: &Coloring, side: Side) -> Result<usize, OrbitError> {
    let (l, r) = orbit_min_degrees(g, coloring)?;
    match side {
        Side::Left => l,
        Side::Right => r,
    }
    .ok_or(OrbitError::Graph(GraphError::NotBipartite))
}

/// Least left-side and right-side degrees over the coloured ELC orbit.
pub fn orbit_min_degrees(
    g: &Graph,
    coloring: &Coloring,
) -> Result<(Option<usize>, Option<usize>), OrbitError> {
    if coloring.validate_for(g).is_err() {
        return Err(GraphError::NotBipartite.into());
    }
    let orbit = build_orbit(g, Some(coloring), Operation::Elc, &OrbitOptions::default())?;
    Ok((orbit.report.min_degree_left, orbit.report.min_degree_right))
}
