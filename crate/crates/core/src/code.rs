//! Binary linear codes: generator matrices, standard form, duals, and the
//! bridge to bipartite graphs that turns code equivalence, minimum distance
//! and information sets into ELC orbit questions.

use std::fmt;

use thiserror::Error;

use crate::canon::{canonical_key, CanonicalForm};
use crate::graph::{bits, low_mask, Coloring, Graph, GraphError, Side, MAX_VERTICES};
use crate::orbit::{self, OrbitError};

/// Largest dimension accepted by the exhaustive minimum-distance search.
pub const MAX_BRUTE_FORCE_DIMENSION: usize = 24;
/// Largest number of column subsets the information-set oracle will test.
pub const MAX_INFO_SET_SUBSETS: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("code length {0} is outside 1..=64")]
    BadLength(usize),
    #[error("row {row} has a bit set beyond length {n}")]
    RowTooWide { row: usize, n: usize },
    #[error("generator matrix is rank deficient: rank {rank} with {k} rows")]
    RankDeficient { rank: usize, k: usize },
    #[error("rows have inconsistent lengths: row {row} has {got}, expected {expected}")]
    RaggedRows {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("operation needs 1 <= k < n, got an [{n},{k}] code")]
    NoGraphBridge { n: usize, k: usize },
    #[error("column {0} is identically zero")]
    ZeroColumn(usize),
    #[error("code is decomposable into {0} components")]
    Decomposable(usize),
    #[error("the zero code has no nonzero codeword")]
    ZeroCode,
    #[error("dimension {k} exceeds the brute-force limit {MAX_BRUTE_FORCE_DIMENSION}")]
    DimensionGuard { k: usize },
    #[error("{subsets} column subsets exceed the enumeration limit {MAX_INFO_SET_SUBSETS}")]
    SubsetGuard { subsets: u128 },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// A full-rank `k x n` generator matrix over GF(2). Column `j` is bit `j` of
/// each row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GenMatrix {
    n: usize,
    rows: Vec<u64>,
}

/// Reduced row echelon form with pivot columns.
fn rref(rows: &[u64], n: usize) -> (Vec<u64>, Vec<usize>) {
    let mut m = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let bit = 1u64 << col;
        let Some(p) = (r..m.len()).find(|&i| m[i] & bit != 0) else {
            continue;
        };
        m.swap(r, p);
        let pivot_row = m[r];
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && *row & bit != 0 {
                *row ^= pivot_row;
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub(crate) fn rank(rows: &[u64], n: usize) -> usize {
    rref(rows, n).1.len()
}

impl GenMatrix {
    pub fn new(n: usize, rows: Vec<u64>) -> Result<Self, CodeError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(CodeError::BadLength(n));
        }
        for (row, &r) in rows.iter().enumerate() {
            if r & !low_mask(n) != 0 {
                return Err(CodeError::RowTooWide { row, n });
            }
        }
        let rk = rank(&rows, n);
        if rk < rows.len() {
            return Err(CodeError::RankDeficient {
                rank: rk,
                k: rows.len(),
            });
        }
        Ok(GenMatrix { n, rows })
    }

    /// Rows given as bit vectors, one `bool` per column.
    pub fn from_bits(rows: &[Vec<bool>]) -> Result<Self, CodeError> {
        let n = rows.first().map_or(0, |r| r.len());
        let mut packed = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(CodeError::RaggedRows {
                    row: i,
                    got: r.len(),
                    expected: n,
                });
            }
            packed.push(
                r.iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, &b)| acc | (b as u64) << j),
            );
        }
        Self::new(n, packed)
    }

    /// `(I | P)` with `p_rows[i]` holding row `i` of `P` in bits `0..n-k`.
    pub fn from_systematic(k: usize, n: usize, p_rows: &[u64]) -> Result<Self, CodeError> {
        assert_eq!(p_rows.len(), k);
        let rows = p_rows
            .iter()
            .enumerate()
            .map(|(i, &p)| 1u64 << i | p << k)
            .collect();
        Self::new(n, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn bit(&self, row: usize, col: usize) -> bool {
        self.rows[row] >> col & 1 == 1
    }

    /// Column `j` as a `k`-bit vector.
    pub fn column(&self, j: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &r)| acc | (r >> j & 1) << i)
    }

    /// Indices of identically-zero columns.
    pub fn zero_columns(&self) -> Vec<usize> {
        let support = self.rows.iter().fold(0u64, |a, &r| a | r);
        bits(!support & low_mask(self.n)).collect()
    }

    /// Reduced row echelon form; two matrices span the same code iff these
    /// are equal.
    pub fn row_space_basis(&self) -> Vec<u64> {
        rref(&self.rows, self.n).0
    }

    pub fn same_code(&self, other: &GenMatrix) -> bool {
        self.n == other.n && self.row_space_basis() == other.row_space_basis()
    }

    /// Moves original column `perm_source[i]` to position `i`.
    pub fn permute_columns(&self, perm_source: &[usize]) -> GenMatrix {
        assert_eq!(perm_source.len(), self.n);
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                perm_source
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &src)| acc | (r >> src & 1) << i)
            })
            .collect();
        GenMatrix { n: self.n, rows }
    }

    pub fn contains(&self, word: u64) -> bool {
        rank(&[self.rows.as_slice(), &[word]].concat(), self.n) == self.k()
    }
}

impl fmt::Debug for GenMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GenMatrix[{},{}](", self.n, self.k())?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            for j in 0..self.n {
                write!(f, "{}", r >> j & 1)?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Display for GenMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            for j in 0..self.n {
                write!(f, "{}", r >> j & 1)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `(I | P)` reached from a generator matrix by a column permutation and row
/// operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardForm {
    pub k: usize,
    pub n: usize,
    /// Rows of `P`, each in bits `0..n-k`.
    pub p: Vec<u64>,
    /// `perm[i]` is the original column placed at standard position `i`.
    pub perm: Vec<usize>,
}

impl StandardForm {
    pub fn matrix(&self) -> GenMatrix {
        GenMatrix::from_systematic(self.k, self.n, &self.p).expect("(I|P) has full rank")
    }

    pub fn is_identity_perm(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn p_bit(&self, i: usize, j: usize) -> bool {
        self.p[i] >> j & 1 == 1
    }
}

pub fn standard_form(m: &GenMatrix) -> StandardForm {
    let (reduced, pivots) = rref(&m.rows, m.n);
    debug_assert_eq!(pivots.len(), m.k());
    let k = pivots.len();
    let pivot_mask = pivots.iter().fold(0u64, |a, &c| a | 1 << c);
    let rest: Vec<usize> = (0..m.n).filter(|&c| pivot_mask >> c & 1 == 0).collect();
    let p = reduced
        .iter()
        .map(|&r| {
            rest.iter()
                .enumerate()
                .fold(0u64, |acc, (j, &c)| acc | (r >> c & 1) << j)
        })
        .collect();
    let perm = pivots.iter().chain(rest.iter()).copied().collect();
    StandardForm { k, n: m.n, p, perm }
}

fn bridge_check(m: &GenMatrix) -> Result<(), CodeError> {
    if m.k() == 0 || m.k() >= m.n() {
        return Err(CodeError::NoGraphBridge { n: m.n(), k: m.k() });
    }
    Ok(())
}

/// Bipartite graph of a standard form: vertices `0..k` are the information
/// side (left), `k..n` the redundancy side; `{i, k+j}` is an edge iff
/// `P[i][j] = 1`. Zero columns become isolated right vertices.
fn standard_graph(sf: &StandardForm) -> (Graph, Coloring) {
    let (k, n) = (sf.k, sf.n);
    let mut rows = vec![0u64; n];
    for i in 0..k {
        rows[i] = sf.p[i] << k;
        for j in bits(sf.p[i]) {
            rows[k + j] |= 1 << i;
        }
    }
    (Graph::from_rows_unchecked(rows), Coloring::split(n, k))
}

/// Graph of the standard form of `m`, with the information side coloured
/// [`Side::Left`].
pub fn code_to_graph(m: &GenMatrix) -> Result<(Graph, Coloring), CodeError> {
    bridge_check(m)?;
    if let Some(&z) = m.zero_columns().first() {
        return Err(CodeError::ZeroColumn(z));
    }
    Ok(standard_graph(&standard_form(m)))
}

/// `(I | P)` for a bipartite graph with `side` as the information set. The
/// columns are the `side` vertices in ascending order followed by the others.
pub fn graph_to_code(g: &Graph, coloring: &Coloring, side: Side) -> Result<GenMatrix, CodeError> {
    coloring.validate_for(g)?;
    let info: Vec<usize> = bits(coloring.mask(side)).collect();
    let other: Vec<usize> = bits(coloring.mask(side.opposite())).collect();
    let k = info.len();
    if k == 0 || other.is_empty() {
        return Err(CodeError::NoGraphBridge { n: g.n(), k });
    }
    let p: Vec<u64> = info
        .iter()
        .map(|&u| {
            other
                .iter()
                .enumerate()
                .fold(0u64, |acc, (j, &w)| acc | (g.has_edge(u, w) as u64) << j)
        })
        .collect();
    GenMatrix::from_systematic(k, g.n(), &p)
}

/// Generator of the dual code, in the original coordinates of `m`.
pub fn dual(m: &GenMatrix) -> Result<GenMatrix, CodeError> {
    let k = m.k();
    let n = m.n();
    if k == n {
        return Err(CodeError::NoGraphBridge { n, k });
    }
    let sf = standard_form(m);
    // (P^T | I) in standard positions, mapped back through perm
    let rows = (0..n - k)
        .map(|j| {
            let mut std_row = 1u64 << (k + j);
            for i in 0..k {
                if sf.p_bit(i, j) {
                    std_row |= 1 << i;
                }
            }
            bits(std_row).fold(0u64, |acc, pos| acc | 1 << sf.perm[pos])
        })
        .collect();
    GenMatrix::new(n, rows)
}

/// Minimum weight of a nonzero codeword, by Gray-code enumeration of all
/// `2^k - 1` nonzero combinations of rows.
pub fn min_distance_bruteforce(m: &GenMatrix) -> Result<usize, CodeError> {
    let k = m.k();
    if k == 0 {
        return Err(CodeError::ZeroCode);
    }
    if k > MAX_BRUTE_FORCE_DIMENSION {
        return Err(CodeError::DimensionGuard { k });
    }
    let mut word = 0u64;
    let mut best = usize::MAX;
    for i in 1u64..1 << k {
        word ^= m.rows[i.trailing_zeros() as usize];
        best = best.min(word.count_ones() as usize);
    }
    Ok(best)
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Visits every information set (as a column mask) by depth-first choice of
/// columns, abandoning a branch as soon as a chosen column is dependent.
fn for_each_information_set(m: &GenMatrix, mut f: impl FnMut(u64)) -> Result<(), CodeError> {
    let (n, k) = (m.n(), m.k());
    let subsets = binomial(n, k);
    if subsets > MAX_INFO_SET_SUBSETS {
        return Err(CodeError::SubsetGuard { subsets });
    }
    let cols: Vec<u64> = (0..n).map(|j| m.column(j)).collect();

    fn reduce(basis: &[u64], mut v: u64) -> u64 {
        for &b in basis {
            let lead = 63 - b.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    fn rec(
        cols: &[u64],
        k: usize,
        start: usize,
        basis: &mut Vec<u64>,
        chosen: u64,
        f: &mut impl FnMut(u64),
    ) {
        if basis.len() == k {
            f(chosen);
            return;
        }
        let need = k - basis.len();
        for j in start..=cols.len() - need {
            let r = reduce(basis, cols[j]);
            if r == 0 {
                continue;
            }
            // keep the basis sorted by decreasing leading bit
            let lead = 63 - r.leading_zeros();
            let at = basis
                .iter()
                .position(|&b| 63 - b.leading_zeros() < lead)
                .unwrap_or(basis.len());
            basis.insert(at, r);
            rec(cols, k, j + 1, basis, chosen | 1 << j, f);
            basis.remove(at);
        }
    }

    if k == 0 {
        f(0);
        return Ok(());
    }
    rec(&cols, k, 0, &mut Vec::with_capacity(k), 0, &mut f);
    Ok(())
}

/// Number of `k`-subsets of columns that are linearly independent.
pub fn information_sets_oracle(m: &GenMatrix) -> Result<u64, CodeError> {
    let mut count = 0u64;
    for_each_information_set(m, |_| count += 1)?;
    Ok(count)
}

/// Information sets as column masks, in lexicographic order of their columns.
pub fn information_set_masks(m: &GenMatrix) -> Result<Vec<u64>, CodeError> {
    let mut out = Vec::new();
    for_each_information_set(m, |s| out.push(s))?;
    Ok(out)
}

fn indecomposable_graph(m: &GenMatrix) -> Result<(Graph, Coloring), CodeError> {
    bridge_check(m)?;
    let (g, c) = standard_graph(&standard_form(m));
    let comps = g.components().len();
    if comps > 1 {
        return Err(CodeError::Decomposable(comps));
    }
    Ok((g, c))
}

/// `d = delta + 1` where `delta` is the least information-side degree over the
/// ELC orbit of the code's graph.
pub fn min_distance_via_orbit(m: &GenMatrix) -> Result<usize, CodeError> {
    let (g, c) = indecomposable_graph(m)?;
    Ok(orbit::orbit_min_degree(&g, &c, Side::Left)? + 1)
}

/// Size of the labelled ELC orbit of the code's graph, doubled for
/// self-dual codes.
pub fn information_sets_via_orbit(m: &GenMatrix) -> Result<u64, CodeError> {
    let (g, _) = indecomposable_graph(m)?;
    let labeled = orbit::elc_orbit_labeled(&g)?.len() as u64;
    Ok(if is_self_dual(m) {
        2 * labeled
    } else {
        labeled
    })
}

pub fn is_indecomposable(m: &GenMatrix) -> bool {
    indecomposable_graph(m).is_ok()
}

/// Equivalence invariant of a code: the number of zero coordinates and the
/// sorted coloured orbit-canonical forms of its indecomposable components.
fn equivalence_signature(m: &GenMatrix) -> Result<(usize, Vec<CanonicalForm>), CodeError> {
    let zero = m.zero_columns();
    let keep: Vec<usize> = (0..m.n()).filter(|j| !zero.contains(j)).collect();
    if keep.is_empty() {
        return Ok((zero.len(), Vec::new()));
    }
    let stripped = GenMatrix::new(
        keep.len(),
        m.permute_columns(&[keep.clone(), zero.clone()].concat())
            .rows
            .iter()
            .map(|&r| r & low_mask(keep.len()))
            .collect(),
    )?;
    let (g, c) = standard_graph(&standard_form(&stripped));
    let mut parts = Vec::new();
    for comp in g.components() {
        let (sub, verts) = g.induced_subgraph(comp);
        let sc = c.restrict(&verts);
        let key = if sub.n() == 1 {
            canonical_key(&sub, Some(&sc))
        } else {
            orbit::orbit_canonical_rep(&sub, Some(&sc))?
        };
        parts.push(key);
    }
    parts.sort();
    Ok((zero.len(), parts))
}

/// True iff some column permutation maps one code onto the other.
pub fn are_equivalent(a: &GenMatrix, b: &GenMatrix) -> Result<bool, CodeError> {
    if a.n() != b.n() || a.k() != b.k() {
        return Ok(false);
    }
    Ok(equivalence_signature(a)? == equivalence_signature(b)?)
}

pub fn is_self_dual(m: &GenMatrix) -> bool {
    if 2 * m.k() != m.n() {
        return false;
    }
    match dual(m) {
        Ok(d) => d.same_code(m),
        Err(_) => false,
    }
}

pub fn is_isodual(m: &GenMatrix) -> Result<bool, CodeError> {
    if 2 * m.k() != m.n() {
        return Ok(false);
    }
    are_equivalent(m, &dual(m)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSummary {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub indecomposable: bool,
    pub self_dual: bool,
    pub isodual: bool,
    pub info_set_count: Option<u64>,
}

impl fmt::Display for CodeSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.n, self.k, self.d)?;
        for (flag, name) in [
            (self.self_dual, "self-dual"),
            (self.isodual, "isodual"),
            (self.indecomposable, "indecomposable"),
        ] {
            if flag {
                write!(f, " {name}")?;
            }
        }
        Ok(())
    }
}

pub fn summary(m: &GenMatrix) -> Result<CodeSummary, CodeError> {
    let d = min_distance_bruteforce(m)?;
    let info_set_count = match information_sets_oracle(m) {
        Ok(c) => Some(c),
        Err(CodeError::SubsetGuard { .. }) => information_sets_via_orbit(m).ok(),
        Err(e) => return Err(e),
    };
    Ok(CodeSummary {
        n: m.n(),
        k: m.k(),
        d,
        indecomposable: is_indecomposable(m),
        self_dual: is_self_dual(m),
        isodual: is_isodual(m)?,
        info_set_count,
    })
}

/// Reads a generator matrix: one row per line of `0`/`1` characters, with
/// whitespace ignored and `#` starting a comment.
pub fn parse_matrix(text: &str) -> Result<GenMatrix, CodeError> {
    let mut rows: Vec<Vec<bool>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let mut row = Vec::new();
        for ch in body.chars() {
            match ch {
                '0' => row.push(false),
                '1' => row.push(true),
                c if c.is_whitespace() || c == '|' => {}
                c => {
                    return Err(CodeError::Parse {
                        line: idx + 1,
                        msg: format!("unexpected character {c:?}"),
                    })
                }
            }
        }
        if !row.is_empty() {
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(CodeError::Parse {
                        line: idx + 1,
                        msg: format!("row has {} columns, expected {}", row.len(), first.len()),
                    });
                }
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Err(CodeError::Parse {
            line: 0,
            msg: "no rows".into(),
        });
    }
    GenMatrix::from_bits(&rows)
}

/// Writes the standard form of `m` with a comment recording, 1-based, the
/// original column at each position.
pub fn write_standard_form(m: &GenMatrix) -> String {
    let sf = standard_form(m);
    let cols: Vec<String> = sf.perm.iter().map(|c| (c + 1).to_string()).collect();
    format!("# columns: {}\n{}", cols.join(" "), sf.matrix())
}
