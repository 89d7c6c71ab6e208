//! Orbit censuses: classification of connected bipartite graphs by the
//! extension technique, classification of externally supplied graph streams,
//! the Euler transform, and counting codes from bipartite ELC orbits.
//!
//! Work is split into a parallel map phase (canonical forms, orbit
//! expansions) and a sequential, deterministic merge, so results do not
//! depend on the number of worker threads. Orbits are always reported in
//! ascending order of their orbit-canonical form.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::canon::CanonicalForm;
use crate::code::{self, CodeError};
use crate::graph::{bits, Coloring, Graph, GraphError, Side, MAX_VERTICES};
use crate::io::to_graph6;
use crate::orbit::{self, Operation, OrbitError, OrbitOptions};

/// Largest `n` for bipartite classification without an explicit override.
pub const DEFAULT_BIPARTITE_GUARD: usize = 12;
/// Largest `n` for general-graph censuses and generation without override.
pub const DEFAULT_GENERAL_GUARD: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("n = {n} exceeds the guard {guard}; pass an explicit override to run it")]
    Guard { n: usize, guard: usize },
    #[error("stream graph #{index} is disconnected")]
    DisconnectedInput { index: usize },
    #[error("stream graph #{index} has {got} vertices, expected {expected}")]
    MixedSizes {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("stream is empty")]
    EmptyStream,
    #[error("representative set for n = {0} is incomplete")]
    Incomplete(usize),
    #[error("Euler transform produced a non-integral term at n = {0}")]
    NonIntegral(usize),
    #[error("Euler transform overflowed at n = {0}")]
    Overflow(usize),
    #[error("could not build worker pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

#[derive(Debug, Clone, Copy)]
#[derive(Default)]
pub struct CensusOptions {
    /// Worker threads for the map phase; 0 means the rayon default.
    pub threads: usize,
    pub orbit: OrbitOptions,
    /// Lifts the default size guards.
    pub allow_large: bool,
}


impl CensusOptions {
    pub fn with_threads(threads: usize) -> Self {
        CensusOptions {
            threads,
            ..Default::default()
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool, CensusError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| CensusError::ThreadPool(e.to_string()))
    }

    fn batch(&self, pool: &rayon::ThreadPool) -> usize {
        pool.current_num_threads().max(1)
    }
}

/// One orbit of a census.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    /// The member with the least canonical form, canonically labelled.
    pub representative: Graph,
    pub canonical: CanonicalForm,
    /// Number of isomorphism classes in the orbit.
    pub size: usize,
    /// Side sizes `(a, b)` of the representative's bipartition, `a` being the
    /// side of vertex 0.
    pub sides: Option<(usize, usize)>,
    /// Least degree per side over the coloured orbit.
    pub min_degree: Option<(Option<usize>, Option<usize>)>,
    /// Number of ELC orbits inside this LC orbit, when requested.
    pub elc_suborbits: Option<usize>,
}

impl OrbitRecord {
    /// Bipartition of the representative (vertex 0 on the left).
    pub fn coloring(&self) -> Option<Coloring> {
        self.sides.and_then(|_| self.representative.bipartition())
    }
}

/// Orbit representatives for one vertex count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepSet {
    pub n: usize,
    pub orbits: Vec<OrbitRecord>,
}

impl RepSet {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Sum of orbit sizes: the number of graphs covered.
    pub fn total_members(&self) -> usize {
        self.orbits.iter().map(|o| o.size).sum()
    }

    /// `# n=<n> orbits=<count>` followed by one tab-separated line per orbit:
    /// graph6, orbit size, a, b, delta_left, delta_right (`-` when undefined),
    /// and the ELC sub-orbit count when it was computed.
    pub fn to_text(&self) -> String {
        let mut out = format!("# n={} orbits={}\n", self.n, self.len());
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        for o in &self.orbits {
            let (a, b) = match o.sides {
                Some((a, b)) => (a.to_string(), b.to_string()),
                None => ("-".into(), "-".into()),
            };
            let (dl, dr) = o.min_degree.unwrap_or((None, None));
            let _ = write!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                to_graph6(&o.representative),
                o.size,
                a,
                b,
                opt(dl),
                opt(dr)
            );
            if let Some(s) = o.elc_suborbits {
                let _ = write!(out, "\t{s}");
            }
            out.push('\n');
        }
        out
    }
}

/// Every graph obtained from a bipartite `g` by adding one vertex joined to a
/// nonempty subset of one side; the new vertex joins the opposite side.
/// An `(a, b)`-bipartite graph has `2^a + 2^b - 2` extensions.
pub fn extend_bipartite(
    g: &Graph,
    coloring: &Coloring,
) -> Result<Vec<(Graph, Coloring)>, CensusError> {
    coloring.validate_for(g)?;
    if g.n() >= MAX_VERTICES {
        return Err(GraphError::TooManyVertices(g.n() + 1).into());
    }
    let mut out = Vec::new();
    for side in [Side::Left, Side::Right] {
        let mask = coloring.mask(side);
        let mut sides = coloring.sides().to_vec();
        sides.push(side.opposite());
        let new_coloring = Coloring::new(sides);
        // nonempty submasks in ascending order
        let mut sub = 0u64;
        loop {
            sub = sub.wrapping_sub(mask) & mask;
            if sub == 0 {
                break;
            }
            out.push((g.with_new_vertex(sub)?, new_coloring.clone()));
        }
    }
    Ok(out)
}

/// Orbit identity and size for one exploration.
struct Found {
    min_key: CanonicalForm,
    keys: FxHashSet<CanonicalForm>,
}

/// Groups candidate graphs into orbits under `op`.
///
/// Candidates are canonicalized and deduplicated in parallel. The sequential
/// merge then walks them in key order, skips any whose class was already met
/// inside an explored orbit, and expands the remaining ones a batch at a time
/// in parallel; two expansions of the same orbit are detected by their least
/// key. Returns `(orbit min key, orbit size)` in ascending key order.
fn classify_candidates(
    candidates: Vec<Graph>,
    op: Operation,
    opts: &CensusOptions,
    pool: &rayon::ThreadPool,
) -> Result<Vec<(CanonicalForm, usize)>, CensusError> {
    let canon = opts.orbit.canonizer;
    let batch = opts.batch(pool);
    pool.install(|| {
        let mut keyed: Vec<(CanonicalForm, Graph)> = candidates
            .into_par_iter()
            .map(|g| (canon.key(&g, None), g))
            .collect();
        keyed.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);

        let mut seen: FxHashSet<CanonicalForm> = FxHashSet::default();
        let mut orbits: BTreeMap<CanonicalForm, usize> = BTreeMap::new();
        let mut next = 0;
        loop {
            let mut pending = Vec::with_capacity(batch);
            while next < keyed.len() && pending.len() < batch {
                if !seen.contains(&keyed[next].0) {
                    pending.push(&keyed[next].1);
                }
                next += 1;
            }
            if pending.is_empty() {
                break;
            }
            let found: Vec<Result<Found, OrbitError>> = pending
                .par_iter()
                .map(|g| {
                    orbit::explore(g, None, op, &opts.orbit, |_, _, _| {}).map(|ex| Found {
                        min_key: ex.min_key,
                        keys: ex.keys,
                    })
                })
                .collect();
            for f in found {
                let f = f?;
                if orbits.contains_key(&f.min_key) {
                    continue;
                }
                orbits.insert(f.min_key, f.keys.len());
                seen.extend(f.keys);
            }
        }
        Ok(orbits.into_iter().collect())
    })
}

fn bipartite_record(min_key: CanonicalForm, size: usize) -> Result<OrbitRecord, CensusError> {
    let rep = min_key.graph();
    let coloring = rep.bipartition().ok_or(GraphError::NotBipartite)?;
    let a = coloring.count(Side::Left);
    let min_degree = if rep.n() == 1 {
        (Some(0), None)
    } else {
        orbit::orbit_min_degrees(&rep, &coloring)?
    };
    Ok(OrbitRecord {
        representative: rep.clone(),
        canonical: min_key,
        size,
        sides: Some((a, rep.n() - a)),
        min_degree: Some(min_degree),
        elc_suborbits: None,
    })
}

/// ELC orbit representatives of connected bipartite graphs on `1..=n_max`
/// vertices, level `n` built from the extensions of level `n - 1`.
pub fn classify_bipartite(n_max: usize, opts: &CensusOptions) -> Result<Vec<RepSet>, CensusError> {
    if n_max > DEFAULT_BIPARTITE_GUARD && !opts.allow_large {
        return Err(CensusError::Guard {
            n: n_max,
            guard: DEFAULT_BIPARTITE_GUARD,
        });
    }
    if n_max > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n_max).into());
    }
    let pool = opts.pool()?;
    let mut levels: Vec<RepSet> = Vec::new();
    if n_max == 0 {
        return Ok(levels);
    }
    let k1 = Graph::empty(1)?;
    let k1_key = opts.orbit.canonizer.key(&k1, None);
    levels.push(RepSet {
        n: 1,
        orbits: vec![bipartite_record(k1_key, 1)?],
    });
    for n in 2..=n_max {
        let prev = levels.last().expect("previous level");
        let candidates: Vec<Graph> = pool
            .install(|| {
                prev.orbits
                    .par_iter()
                    .map(|o| {
                        let c = o.coloring().expect("bipartite representative");
                        extend_bipartite(&o.representative, &c)
                            .map(|ext| ext.into_iter().map(|(g, _)| g).collect::<Vec<_>>())
                    })
                    .collect::<Result<Vec<_>, _>>()
            })?
            .into_iter()
            .flatten()
            .collect();
        let found = classify_candidates(candidates, Operation::Elc, opts, &pool)?;
        let orbits = pool.install(|| {
            found
                .into_par_iter()
                .map(|(k, size)| bipartite_record(k, size))
                .collect::<Result<Vec<_>, _>>()
        })?;
        levels.push(RepSet { n, orbits });
    }
    Ok(levels)
}

/// Classifies a stream that lists every connected graph on `n` vertices
/// (each isomorphism class at least once) into LC or ELC orbits. With
/// `refine_lc`, each LC orbit also reports how many ELC orbits it contains.
pub fn classify_stream(
    graphs: Vec<Graph>,
    op: Operation,
    refine_lc: bool,
    opts: &CensusOptions,
) -> Result<RepSet, CensusError> {
    let n = graphs.first().ok_or(CensusError::EmptyStream)?.n();
    if n > DEFAULT_GENERAL_GUARD && !opts.allow_large {
        return Err(CensusError::Guard {
            n,
            guard: DEFAULT_GENERAL_GUARD,
        });
    }
    for (index, g) in graphs.iter().enumerate() {
        if g.n() != n {
            return Err(CensusError::MixedSizes {
                index,
                got: g.n(),
                expected: n,
            });
        }
        if !g.is_connected() {
            return Err(CensusError::DisconnectedInput { index });
        }
    }
    let pool = opts.pool()?;
    let found = classify_candidates(graphs, op, opts, &pool)?;
    let orbits = pool.install(|| {
        found
            .into_par_iter()
            .map(|(k, size)| -> Result<OrbitRecord, CensusError> {
                let rep = k.graph();
                let elc_suborbits = if refine_lc && op == Operation::Lc {
                    Some(orbit::partition_lc_orbit_with(&rep, &opts.orbit)?.len())
                } else {
                    None
                };
                let sides = rep.bipartition().map(|c| {
                    let a = c.count(Side::Left);
                    (a, rep.n() - a)
                });
                Ok(OrbitRecord {
                    representative: rep,
                    canonical: k,
                    size,
                    sides,
                    min_degree: None,
                    elc_suborbits,
                })
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(RepSet { n, orbits })
}

/// Counts of all graphs built from connected ones: with
/// `c_n = sum_{d | n} d * i_d`, `t_n = (c_n + sum_{k<n} c_k t_{n-k}) / n`.
/// `connected[0]` is `i_1`.
pub fn euler_transform(connected: &[u64]) -> Result<Vec<u64>, CensusError> {
    let len = connected.len();
    let mut c = vec![0u128; len + 1];
    for n in 1..=len {
        for d in (1..=n).filter(|d| n % d == 0) {
            c[n] = (d as u128)
                .checked_mul(connected[d - 1] as u128)
                .and_then(|x| c[n].checked_add(x))
                .ok_or(CensusError::Overflow(n))?;
        }
    }
    let mut t = vec![0u128; len + 1];
    for n in 1..=len {
        let mut sum = c[n];
        for k in 1..n {
            sum = c[k]
                .checked_mul(t[n - k])
                .and_then(|x| sum.checked_add(x))
                .ok_or(CensusError::Overflow(n))?;
        }
        if !sum.is_multiple_of(n as u128) {
            return Err(CensusError::NonIntegral(n));
        }
        t[n] = sum / n as u128;
    }
    t[1..]
        .iter()
        .enumerate()
        .map(|(i, &x)| u64::try_from(x).map_err(|_| CensusError::Overflow(i + 1)))
        .collect()
}

/// Indecomposable code counts for one length.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CodeCounts {
    pub n: usize,
    /// Inequivalent indecomposable codes.
    pub indecomposable: usize,
    /// Inequivalent indecomposable isodual codes.
    pub isodual: usize,
    /// Indecomposable codes per dimension `k`.
    pub per_dimension: BTreeMap<usize, usize>,
}

/// Codes from the ELC orbits of connected `(a, b)`-bipartite graphs: an
/// orbit with `a != b` carries an `[n, a]` and an `[n, b]` code, an orbit
/// with `a = b` two `[n, a]` codes that coincide exactly when the code is
/// isodual. The single vertex carries only the `[1, 1]` code.
pub fn count_codes(reps: &RepSet, opts: &CensusOptions) -> Result<CodeCounts, CensusError> {
    let pool = opts.pool()?;
    let per_orbit: Vec<(usize, usize, bool)> = pool.install(|| {
        reps.orbits
            .par_iter()
            .map(|o| -> Result<(usize, usize, bool), CensusError> {
                let (a, b) = o.sides.ok_or(CensusError::Incomplete(reps.n))?;
                if a != b || b == 0 {
                    return Ok((a, b, false));
                }
                let c = o.coloring().ok_or(CensusError::Incomplete(reps.n))?;
                let m = code::graph_to_code(&o.representative, &c, Side::Left)?;
                Ok((a, b, code::is_isodual(&m)?))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut counts = CodeCounts {
        n: reps.n,
        ..Default::default()
    };
    for (a, b, iso) in per_orbit {
        if b == 0 || a == 0 {
            *counts.per_dimension.entry(a.max(b)).or_default() += 1;
            counts.indecomposable += 1;
        } else if a != b {
            *counts.per_dimension.entry(a).or_default() += 1;
            *counts.per_dimension.entry(b).or_default() += 1;
            counts.indecomposable += 2;
        } else {
            let codes = if iso { 1 } else { 2 };
            *counts.per_dimension.entry(a).or_default() += codes;
            counts.indecomposable += codes;
            counts.isodual += iso as usize;
        }
    }
    Ok(counts)
}

/// One row of a census table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub n: usize,
    pub connected: u64,
    pub total: u64,
    pub codes: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusTable {
    pub rows: Vec<CensusRow>,
}

impl CensusTable {
    /// Builds the table from connected counts `i_1, i_2, ...`, filling the
    /// totals by Euler transform.
    pub fn from_connected(
        connected: &[u64],
        codes: Option<&[CodeCounts]>,
    ) -> Result<Self, CensusError> {
        let totals = euler_transform(connected)?;
        let rows = connected
            .iter()
            .zip(totals)
            .enumerate()
            .map(|(i, (&c, t))| CensusRow {
                n: i + 1,
                connected: c,
                total: t,
                codes: codes.map(|cc| (cc[i].indecomposable, cc[i].isodual)),
            })
            .collect();
        Ok(CensusTable { rows })
    }

    /// Tab-separated: `n i t` and, for code runs, `i_C i_Ciso`.
    pub fn to_tsv(&self) -> String {
        let with_codes = self.rows.iter().any(|r| r.codes.is_some());
        let mut out = String::from(if with_codes {
            "n\ti\tt\ti_C\ti_Ciso\n"
        } else {
            "n\ti\tt\n"
        });
        for r in &self.rows {
            let _ = write!(out, "{}\t{}\t{}", r.n, r.connected, r.total);
            if let Some((c, iso)) = r.codes {
                let _ = write!(out, "\t{c}\t{iso}");
            }
            out.push('\n');
        }
        out
    }
}

/// All connected graphs on `n` vertices up to isomorphism, canonically
/// labelled and sorted by canonical form. Each level extends the previous
/// one by a vertex joined to every nonempty subset, which reaches every
/// connected graph because a connected graph always has a vertex whose
/// removal leaves it connected.
pub fn connected_graphs(n: usize, opts: &CensusOptions) -> Result<Vec<Graph>, CensusError> {
    if n > DEFAULT_GENERAL_GUARD && !opts.allow_large {
        return Err(CensusError::Guard {
            n,
            guard: DEFAULT_GENERAL_GUARD,
        });
    }
    grow(n, opts, |g| {
        let full = g.vertex_mask();
        (1..=full).map(|m| g.with_new_vertex(m)).collect()
    })
}

/// All connected bipartite graphs on `n` vertices up to isomorphism.
pub fn connected_bipartite_graphs(
    n: usize,
    opts: &CensusOptions,
) -> Result<Vec<Graph>, CensusError> {
    if n > DEFAULT_BIPARTITE_GUARD && !opts.allow_large {
        return Err(CensusError::Guard {
            n,
            guard: DEFAULT_BIPARTITE_GUARD,
        });
    }
    grow(n, opts, |g| {
        let c = g.bipartition().expect("bipartite level");
        let mut out = Vec::new();
        for side in [Side::Left, Side::Right] {
            let mask = c.mask(side);
            let mut sub = 0u64;
            loop {
                sub = sub.wrapping_sub(mask) & mask;
                if sub == 0 {
                    break;
                }
                out.push(g.with_new_vertex(sub));
            }
        }
        out.into_iter().collect()
    })
}

fn grow(
    n: usize,
    opts: &CensusOptions,
    extend: impl Fn(&Graph) -> Result<Vec<Graph>, GraphError> + Sync,
) -> Result<Vec<Graph>, CensusError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n).into());
    }
    let pool = opts.pool()?;
    let canon = opts.orbit.canonizer;
    let mut level = vec![Graph::empty(1)?];
    for _ in 2..=n {
        let mut keys: Vec<CanonicalForm> = pool
            .install(|| {
                level
                    .par_iter()
                    .map(|g| -> Result<Vec<CanonicalForm>, GraphError> {
                        let mut ks: Vec<_> =
                            extend(g)?.iter().map(|h| canon.key(h, None)).collect();
                        ks.sort_unstable();
                        ks.dedup();
                        Ok(ks)
                    })
                    .collect::<Result<Vec<_>, _>>()
            })?
            .into_iter()
            .flatten()
            .collect();
        pool.install(|| keys.par_sort_unstable());
        keys.dedup();
        level = keys.iter().map(CanonicalForm::graph).collect();
    }
    Ok(level)
}

/// Decomposes a bipartite graph's vertex set into the masks of its
/// components, each paired with its side sizes.
pub fn component_sides(g: &Graph, coloring: &Coloring) -> Vec<(u64, usize, usize)> {
    let left = coloring.mask(Side::Left);
    g.components()
        .into_iter()
        .map(|m| {
            let a = bits(m & left).count();
            (m, a, m.count_ones() as usize - a)
        })
        .collect()
}
