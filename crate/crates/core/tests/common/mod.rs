//! Independent oracles and property checks shared by the integration tests.
//! Nothing here calls the canonical labelling or orbit code except the
//! functions under test.
#![allow(dead_code)]

use elc_core::code::{self, GenMatrix};
use elc_core::{canonical_form, canonical_key, Coloring, Graph, Side};
use proptest::prelude::*;
use proptest::sample::Index;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const PROPERTY_CASES: u32 = 10_000;

// ---------------------------------------------------------------- oracles

/// Graph from the upper triangle, column by column: bit `k` of `tri` is the
/// pair `(i, j)` with `i < j` in graph6 order.
pub fn graph_from_triangle(n: usize, tri: u64) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if tri >> k & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Least `(colour word, upper-triangle word)` over all relabellings; the
/// colour word is constant when no colouring is given.
pub fn brute_canonical(g: &Graph, coloring: Option<&Coloring>, perms: &[Vec<usize>]) -> (u64, u64) {
    let n = g.n();
    let mut best = (u64::MAX, u64::MAX);
    for p in perms {
        // p[v] is the new label of v
        let mut col = 0u64;
        if let Some(c) = coloring {
            for v in 0..n {
                if c.side(v) == Side::Left {
                    col |= 1 << (n - 1 - p[v]);
                }
            }
            col = !col;
        }
        let mut tri = 0u64;
        for (u, v) in g.edges() {
            let (a, b) = if p[u] < p[v] {
                (p[u], p[v])
            } else {
                (p[v], p[u])
            };
            tri |= 1 << (b * (b - 1) / 2 + a);
        }
        best = best.min((col, tri));
    }
    best
}

/// Backtracking isomorphism search; candidate images must match degree and
/// colour, and adjacency to every vertex already mapped.
pub fn brute_isomorphic(
    g: &Graph,
    h: &Graph,
    cg: Option<&Coloring>,
    ch: Option<&Coloring>,
) -> bool {
    let n = g.n();
    if n != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    let side = |c: Option<&Coloring>, v: usize| c.map(|c| c.side(v));
    let mut dg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    fn extend(
        v: usize,
        map: &mut Vec<usize>,
        used: &mut [bool],
        g: &Graph,
        h: &Graph,
        ok: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if v == g.n() {
            return true;
        }
        for w in 0..h.n() {
            if used[w] || !ok(v, w) || (0..v).any(|x| g.has_edge(v, x) != h.has_edge(w, map[x])) {
                continue;
            }
            used[w] = true;
            map.push(w);
            if extend(v + 1, map, used, g, h, ok) {
                return true;
            }
            map.pop();
            used[w] = false;
        }
        false
    }
    let ok = |v: usize, w: usize| g.degree(v) == h.degree(w) && side(cg, v) == side(ch, w);
    extend(0, &mut Vec::new(), &mut vec![false; n], g, h, &ok)
}

/// Row-reduced echelon form of a list of GF(2) row words.
pub fn rref(rows: &[u64], n: usize) -> Vec<u64> {
    let mut rows = rows.to_vec();
    let mut r = 0;
    for col in 0..n {
        let bit = 1u64 << col;
        let Some(p) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i] & bit != 0 {
                rows[i] ^= rows[r];
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

pub fn rank(rows: &[u64], n: usize) -> usize {
    rref(rows, n).len()
}

fn permute_word(word: u64, perm: &[usize]) -> u64 {
    perm.iter()
        .enumerate()
        .fold(0, |acc, (j, &to)| acc | (word >> j & 1) << to)
}

/// Column `j` moves to position `perm[j]`.
pub fn permute_code_columns(rows: &[u64], perm: &[usize]) -> Vec<u64> {
    rows.iter().map(|&r| permute_word(r, perm)).collect()
}

/// Equivalence by searching every column permutation.
pub fn brute_equivalent(a: &GenMatrix, b: &GenMatrix, perms: &[Vec<usize>]) -> bool {
    if a.n() != b.n() || a.k() != b.k() {
        return false;
    }
    let target = rref(a.rows(), a.n());
    perms
        .iter()
        .any(|p| rref(&permute_code_columns(b.rows(), p), b.n()) == target)
}

/// Minimum weight over every nonzero combination of rows.
pub fn brute_min_distance(m: &GenMatrix) -> usize {
    let rows = m.rows();
    (1u64..1 << rows.len())
        .map(|s| {
            let w = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| s >> i & 1 == 1)
                .fold(0, |acc, (_, &r)| acc ^ r);
            w.count_ones() as usize
        })
        .min()
        .expect("k >= 1")
}

/// Number of `k`-column subsets whose columns have full rank.
pub fn brute_information_sets(m: &GenMatrix) -> u64 {
    let (n, k) = (m.n(), m.k());
    let cols: Vec<u64> = (0..n).map(|j| m.column(j)).collect();
    (0u64..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .filter(|&s| {
            let chosen: Vec<u64> = (0..n)
                .filter(|j| s >> j & 1 == 1)
                .map(|j| cols[j])
                .collect();
            rank(&chosen, k) == k
        })
        .count() as u64
}

/// Every `(I | P)` generator matrix with `1 <= k < n`.
pub fn standard_codes(n: usize) -> Vec<GenMatrix> {
    let mut out = Vec::new();
    for k in 1..n {
        let r = n - k;
        for p in 0u64..1 << (k * r) {
            let rows: Vec<u64> = (0..k)
                .map(|i| 1 << i | (p >> (i * r) & ((1 << r) - 1)) << k)
                .collect();
            out.push(GenMatrix::new(n, rows).unwrap());
        }
    }
    out
}

/// Random column permutation followed by random invertible row operations.
pub fn scramble(m: &GenMatrix, rng: &mut impl Rng) -> GenMatrix {
    let mut perm: Vec<usize> = (0..m.n()).collect();
    perm.shuffle(rng);
    let mut rows = permute_code_columns(m.rows(), &perm);
    let k = rows.len();
    for _ in 0..3 * k {
        let (i, j) = (rng.gen_range(0..k), rng.gen_range(0..k));
        if i != j {
            if rng.gen_bool(0.5) {
                rows[j] ^= rows[i];
            } else {
                rows.swap(i, j);
            }
        }
    }
    GenMatrix::new(m.n(), rows).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ------------------------------------------------------------- strategies

pub fn arb_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (1..n).flat_map(|j| (0..j).map(move |i| (i, j)));
            let edges: Vec<_> = pairs
                .zip(bits)
                .filter(|(_, b)| *b)
                .map(|(e, _)| e)
                .collect();
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

/// A graph with at least one edge and one of its edges.
pub fn arb_graph_with_edge(max_n: usize) -> impl Strategy<Value = (Graph, (usize, usize))> {
    (arb_graph(2, max_n), any::<Index>()).prop_filter_map("edgeless", |(g, idx)| {
        let edges: Vec<_> = g.edges().collect();
        (!edges.is_empty()).then(|| {
            let e = edges[idx.index(edges.len())];
            (g, e)
        })
    })
}

pub fn arb_permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// An `(a, b)`-bipartite graph with shuffled labels and its colouring.
pub fn arb_bipartite(max_side: usize) -> impl Strategy<Value = (Graph, Coloring)> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(a, b)| {
        (any::<u64>(), arb_permutation(a + b)).prop_map(move |(p, perm)| {
            let edges = (0..a)
                .flat_map(|i| (0..b).map(move |j| (i, a + j)))
                .enumerate();
            let edges: Vec<_> = edges
                .filter(|(idx, _)| p >> idx & 1 == 1)
                .map(|(_, e)| e)
                .collect();
            let g = Graph::from_edges(a + b, edges).unwrap();
            let c = Coloring::split(a + b, a);
            (g.permute(&perm), c.permute(&perm))
        })
    })
}

/// A random `[n, k]` code given by a scrambled standard form.
pub fn arb_code(max_n: usize) -> impl Strategy<Value = GenMatrix> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), 1..n, any::<u64>(), any::<u64>()))
        .prop_map(|(n, k, p, seed)| {
            let r = n - k;
            let rows: Vec<u64> = (0..k)
                .map(|i| 1 << i | (p.rotate_left((i * r) as u32) & ((1 << r) - 1)) << k)
                .collect();
            scramble(&GenMatrix::new(n, rows).unwrap(), &mut rng(seed))
        })
}

// ------------------------------------------------------------- properties

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        max_global_rejects: cases * 4,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

pub fn lc_involution(cases: u32) -> Result<(), String> {
    run(cases, (arb_graph(1, 14), any::<Index>()), |(g, idx)| {
        let v = idx.index(g.n());
        prop_assert_eq!(
            g.local_complement(v).unwrap().local_complement(v).unwrap(),
            g
        );
        Ok(())
    })
}

pub fn lc_triple_symmetry(cases: u32) -> Result<(), String> {
    run(cases, arb_graph_with_edge(14), |(g, (u, v))| {
        let uvu = g
            .local_complement(u)
            .unwrap()
            .local_complement(v)
            .unwrap()
            .local_complement(u)
            .unwrap();
        let vuv = g
            .local_complement(v)
            .unwrap()
            .local_complement(u)
            .unwrap()
            .local_complement(v)
            .unwrap();
        prop_assert_eq!(uvu, vuv);
        Ok(())
    })
}

pub fn elc_involution(cases: u32) -> Result<(), String> {
    run(cases, arb_graph_with_edge(14), |(g, (u, v))| {
        let h = g.elc_classes(u, v).unwrap();
        prop_assert!(h.has_edge(u, v));
        prop_assert_eq!(h.elc_classes(u, v).unwrap(), g.clone());
        prop_assert_eq!(h.elc_classes(v, u).unwrap(), g);
        Ok(())
    })
}

pub fn elc_definitions_agree(cases: u32) -> Result<(), String> {
    run(cases, arb_graph_with_edge(14), |(g, (u, v))| {
        let classes = g.elc_classes(u, v).unwrap();
        prop_assert_eq!(g.elc_via_lc(u, v).unwrap(), classes.clone());
        prop_assert_eq!(
            g.elc_without_swap(u, v)
                .unwrap()
                .swap_vertices(u, v)
                .unwrap(),
            classes
        );
        Ok(())
    })?;
    run(
        cases,
        (arb_bipartite(7), any::<Index>()),
        |((g, _), idx)| {
            let edges: Vec<_> = g.edges().collect();
            if edges.is_empty() {
                return Ok(());
            }
            let (u, v) = edges[idx.index(edges.len())];
            prop_assert_eq!(
                g.pivot_bipartite(u, v).unwrap(),
                g.elc_classes(u, v).unwrap()
            );
            Ok(())
        },
    )
}

fn component_sets(g: &Graph) -> Vec<u64> {
    let mut c = g.components();
    c.sort_unstable();
    c
}

pub fn connectivity_preserved(cases: u32) -> Result<(), String> {
    run(cases, arb_graph_with_edge(14), |(g, (u, v))| {
        let comps = component_sets(&g);
        prop_assert_eq!(
            component_sets(&g.local_complement(u).unwrap()),
            comps.clone()
        );
        // the label swap maps u's component, which also holds v, onto itself
        prop_assert_eq!(component_sets(&g.elc_classes(u, v).unwrap()), comps);
        Ok(())
    })
}

pub fn bipartiteness_preserved(cases: u32) -> Result<(), String> {
    run(
        cases,
        (arb_bipartite(7), any::<Index>()),
        |((g, c), idx)| {
            let edges: Vec<_> = g.edges().collect();
            if edges.is_empty() {
                return Ok(());
            }
            let (u, v) = edges[idx.index(edges.len())];
            let h = g.elc_classes(u, v).unwrap();
            let hc = c.swapped(u, v);
            prop_assert!(hc.validate_for(&h).is_ok());
            prop_assert_eq!(hc.count(Side::Left), c.count(Side::Left));
            // without the swap the original colouring stays proper
            prop_assert!(c.validate_for(&g.elc_without_swap(u, v).unwrap()).is_ok());
            Ok(())
        },
    )
}

pub fn canonical_relabeling_invariance(cases: u32) -> Result<(), String> {
    let strategy = arb_graph(1, 14).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), arb_permutation(n), any::<u64>())
    });
    run(cases, strategy, |(g, perm, left)| {
        let n = g.n();
        let h = g.permute(&perm);
        prop_assert_eq!(canonical_key(&g, None), canonical_key(&h, None));
        let lab = canonical_form(&g, None);
        prop_assert_eq!(g.permute(&lab.relabel), lab.form.graph());
        let c = Coloring::from_left_mask(n, left & g.vertex_mask());
        let hc = c.permute(&perm);
        let key = canonical_key(&g, Some(&c));
        prop_assert_eq!(&key, &canonical_key(&h, Some(&hc)));
        prop_assert_eq!(
            key.coloring(),
            Some(c.permute(&canonical_form(&g, Some(&c)).relabel))
        );
        Ok(())
    })
}

pub fn equivalence_invariance(cases: u32) -> Result<(), String> {
    run(cases, (arb_code(12), any::<u64>()), |(m, seed)| {
        let s = scramble(&m, &mut rng(seed));
        prop_assert!(code::are_equivalent(&m, &s).unwrap());
        prop_assert!(code::are_equivalent(&s, &m).unwrap());
        Ok(())
    })
}

// ------------------------------------------------------- exhaustive checks

/// Every labelled graph on `n <= max_n` vertices.
pub fn all_graphs(max_n: usize) -> impl Iterator<Item = Graph> {
    (1..=max_n).flat_map(|n| (0u64..1 << (n * (n - 1) / 2)).map(move |t| graph_from_triangle(n, t)))
}

pub fn exhaustive_operations(max_n: usize) -> Result<(), String> {
    for g in all_graphs(max_n) {
        let fail = |what: &str| Err(format!("{what} fails on {g:?}"));
        let comps = component_sets(&g);
        for v in 0..g.n() {
            let h = g.local_complement(v).unwrap();
            if h.local_complement(v).unwrap() != g {
                return fail("LC involution");
            }
            if component_sets(&h) != comps {
                return fail("LC connectivity");
            }
        }
        let coloring = g.bipartition();
        for (u, v) in g.edges() {
            let l = |x: &Graph, w: usize| x.local_complement(w).unwrap();
            if l(&l(&l(&g, u), v), u) != l(&l(&l(&g, v), u), v) {
                return fail("G*u*v*u = G*v*u*v");
            }
            let h = g.elc_classes(u, v).unwrap();
            if h.elc_classes(u, v).unwrap() != g {
                return fail("ELC involution");
            }
            if g.elc_via_lc(u, v).unwrap() != h {
                return fail("ELC definitions");
            }
            if component_sets(&h) != comps {
                return fail("ELC connectivity");
            }
            if let Some(c) = &coloring {
                if g.pivot_bipartite(u, v).unwrap() != h {
                    return fail("bipartite pivot");
                }
                let hc = c.swapped(u, v);
                if hc.validate_for(&h).is_err() || hc.count(Side::Left) != c.count(Side::Left) {
                    return fail("bipartiteness");
                }
            }
        }
    }
    Ok(())
}

/// Canonical keys induce exactly the isomorphism classes of the
/// permutation oracle, with and without a colouring.
pub fn exhaustive_canonical(max_n: usize) -> Result<(), String> {
    use std::collections::HashMap;
    for n in 1..=max_n {
        let perms = permutations(n);
        let mut key_to_brute = HashMap::new();
        let mut brute_to_key = HashMap::new();
        for t in 0u64..1 << (n * (n - 1) / 2) {
            let g = graph_from_triangle(n, t);
            let colorings = [
                None,
                Some(Coloring::from_left_mask(
                    n,
                    t.wrapping_mul(0x9e37_79b9) >> 7 & g.vertex_mask(),
                )),
            ];
            for c in colorings.iter() {
                let key = canonical_key(&g, c.as_ref());
                let brute = brute_canonical(&g, c.as_ref(), &perms);
                if *key_to_brute.entry(key.clone()).or_insert(brute) != brute
                    || *brute_to_key.entry(brute).or_insert(key.clone()) != key
                {
                    return Err(format!(
                        "canonical keys disagree with permutation search on {g:?} {c:?}"
                    ));
                }
                let rev: Vec<usize> = (0..n).rev().collect();
                let h = g.permute(&rev);
                let hc = c.as_ref().map(|c| c.permute(&rev));
                if canonical_key(&h, hc.as_ref()) != key {
                    return Err(format!("key not invariant under reversal on {g:?}"));
                }
            }
        }
    }
    Ok(())
}

/// Scrambled copies of every standard-form code of length `<= max_n` are
/// recognised as equivalent.
pub fn exhaustive_equivalence(max_n: usize) -> Result<(), String> {
    let mut r = rng(6);
    for n in 2..=max_n {
        for m in standard_codes(n) {
            for _ in 0..2 {
                let s = scramble(&m, &mut r);
                if !code::are_equivalent(&m, &s).map_err(|e| e.to_string())? {
                    return Err(format!("{m:?} and its scramble {s:?} judged inequivalent"));
                }
            }
        }
    }
    Ok(())
}

pub fn property_suite() -> Vec<(&'static str, fn(u32) -> Result<(), String>)> {
    vec![
        ("LC involution", lc_involution),
        ("G*u*v*u = G*v*u*v", lc_triple_symmetry),
        ("ELC involution", elc_involution),
        (
            "ELC by LC composite = class toggling = bipartite pivot",
            elc_definitions_agree,
        ),
        ("connectivity preservation", connectivity_preserved),
        ("(a,b)-bipartiteness preservation", bipartiteness_preserved),
        (
            "canonical relabeling invariance",
            canonical_relabeling_invariance,
        ),
        ("are_equivalent invariance", equivalence_invariance),
    ]
}
