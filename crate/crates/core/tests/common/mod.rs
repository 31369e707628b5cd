//! Generators and brute-force oracles shared by the integration tests. The
//! oracles work from definitions on plain adjacency matrices and never call
//! the library's own search routines.

#![allow(dead_code)]

use netclosure::{ClosureOp, Digraph, Graph, VertexSet};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random digraph with each ordered pair an arc with probability `p`.
pub fn random_digraph(rng: &mut impl Rng, n: usize, p: f64, loops: bool) -> Digraph {
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| loops || u != v)
        .collect();
    Digraph::from_arcs(n, arcs.into_iter().filter(|_| rng.gen_bool(p))).unwrap()
}

/// Loopless digraph on `n` vertices whose off-diagonal arcs are the bits of `code`.
pub fn digraph_from_code(n: usize, code: u64) -> Digraph {
    let pairs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
    Digraph::from_arcs(n, pairs.enumerate().filter(|(i, _)| code >> i & 1 == 1).map(|(_, a)| a)).unwrap()
}

/// Every loopless digraph on `n` vertices.
pub fn all_loopless(n: usize) -> impl Iterator<Item = Digraph> {
    let bits = n * (n - 1);
    (0..1u64 << bits).map(move |c| digraph_from_code(n, c))
}

pub fn adjacency(d: &Digraph) -> Vec<Vec<bool>> {
    (0..d.n())
        .map(|u| (0..d.n()).map(|v| d.has_arc(u, v)).collect())
        .collect()
}

pub fn members(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

/// In-neighbourhood masks: bit `u` of `m[v]` is set when `u → v`.
pub fn in_masks(adj: &[Vec<bool>]) -> Vec<u32> {
    (0..adj.len()).map(|v| in_mask(adj, v)).collect()
}

pub fn in_mask(adj: &[Vec<bool>], v: usize) -> u32 {
    (0..adj.len()).filter(|&u| adj[u][v]).fold(0, |m, u| m | 1 << u)
}

/// `D[set]` has no directed cycle: repeatedly strip vertices with no
/// in-arc from inside the set.
pub fn acyclic_masks(inm: &[u32], set: u32) -> bool {
    let mut left = set;
    loop {
        let src = (0..inm.len()).find(|&v| left >> v & 1 == 1 && inm[v] & left == 0);
        match src {
            Some(v) => left &= !(1 << v),
            None => return left == 0,
        }
    }
}

pub fn oracle_acyclic(adj: &[Vec<bool>], set: u32) -> bool {
    acyclic_masks(&in_masks(adj), set)
}

/// `X ∪ Y` for the largest acyclic `Y ⊆ V \ X` with `Y⁻ ⊆ Y ∪ X`.
pub fn closure_masks(inm: &[u32], x: u32) -> u32 {
    let n = inm.len();
    let rest = ((1u32 << n) - 1) & !x;
    let mut best = 0u32;
    let mut y = rest;
    loop {
        if y.count_ones() > best.count_ones()
            && (0..n).all(|v| y >> v & 1 == 0 || inm[v] & !(x | y) == 0)
            && acyclic_masks(inm, y)
        {
            best = y;
        }
        if y == 0 {
            break;
        }
        y = (y - 1) & rest;
    }
    x | best
}

/// `cl_D(X) = X ∪ Y` for the largest acyclic `Y ⊆ V \ X` with `Y⁻ ⊆ Y ∪ X`.
pub fn oracle_closure(adj: &[Vec<bool>], x: u32) -> u32 {
    closure_masks(&in_masks(adj), x)
}

/// Largest acyclic induced subgraph by exhaustive search.
pub fn oracle_mias(adj: &[Vec<bool>]) -> usize {
    let n = adj.len();
    let inm = in_masks(adj);
    (0..1u32 << n)
        .filter(|&s| acyclic_masks(&inm, s))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Adjacency in the solvability graph from the edge sets directly: some `S`
/// and `v ∈ cl(S) \ S` with `x_S = y_S` and `x_v ≠ y_v`.
pub fn literal_adjacent(cl: &ClosureOp, x: &[u32], y: &[u32]) -> bool {
    let n = cl.n();
    (0..1u32 << n).any(|s| {
        let sv = VertexSet::from_bits(s);
        sv.iter().all(|v| x[v] == y[v]) && (cl.apply(sv) - sv).iter().any(|v| x[v] != y[v])
    })
}

pub fn words(n: usize, q: usize) -> Vec<Vec<u32>> {
    let total = q.pow(n as u32);
    (0..total)
        .map(|mut i| {
            (0..n)
                .map(|_| {
                    let s = (i % q) as u32;
                    i /= q;
                    s
                })
                .collect()
        })
        .collect()
}

pub fn hamming(x: &[u32], y: &[u32]) -> usize {
    x.iter().zip(y).filter(|(a, b)| a != b).count()
}

/// α by plain include/exclude recursion with no bounding. Fine up to a few
/// dozen vertices on the sparse-ish graphs used here.
pub fn oracle_alpha(g: &Graph) -> usize {
    fn go(g: &Graph, cand: &[usize]) -> usize {
        let Some((&v, rest)) = cand.split_first() else {
            return 0;
        };
        let without = go(g, rest);
        let keep: Vec<usize> = rest.iter().copied().filter(|&u| !g.has_edge(u, v)).collect();
        without.max(1 + go(g, &keep))
    }
    let all: Vec<usize> = (0..g.order()).collect();
    go(g, &all)
}

/// Uniform matroid from its definition.
pub fn oracle_uniform(r: usize, n: usize, x: u32) -> u32 {
    if x.count_ones() as usize >= r {
        (1u32 << n) - 1
    } else {
        x
    }
}

/// `V2` is weak: nonempty, proper, and `cl(X) \ V2 = cl(X ∪ V2) \ V2` for all `X ⊆ V \ V2`.
pub fn oracle_weak(cl: &ClosureOp, v2: u32) -> bool {
    let n = cl.n();
    let full = (1u32 << n) - 1;
    if v2 == 0 || v2 == full {
        return false;
    }
    let rest = full & !v2;
    (0..=full).filter(|x| x & !rest == 0).all(|x| {
        let a = cl.apply(VertexSet::from_bits(x)).bits() & !v2;
        let b = cl.apply(VertexSet::from_bits(x | v2)).bits() & !v2;
        a == b
    })
}

/// Union of all weak acyclic sets.
pub fn oracle_useless(d: &Digraph) -> u32 {
    let cl = ClosureOp::from_digraph(d).unwrap();
    let adj = adjacency(d);
    (1..(1u32 << d.n()) - 1)
        .filter(|&s| oracle_acyclic(&adj, s) && oracle_weak(&cl, s))
        .fold(0, |a, s| a | s)
}

/// Strong connectivity by reachability from vertex 0 both ways.
pub fn oracle_strongly_connected(adj: &[Vec<bool>]) -> bool {
    let n = adj.len();
    let reach = |fwd: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                let e = if fwd { adj[u][v] } else { adj[v][u] };
                if e && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    n > 0 && reach(true) && reach(false)
}

/// Largest code with minimum distance `d`, by unbounded recursion over words.
pub fn oracle_max_code(n: usize, d: usize, q: usize) -> usize {
    let ws = words(n, q);
    let g = Graph::from_fn(ws.len(), |a, b| hamming(&ws[a], &ws[b]) < d).unwrap();
    oracle_alpha(&g)
}

/// State of the solvability graph built from the literal formula.
pub fn literal_graph(cl: &ClosureOp, q: usize) -> Graph {
    let ws = words(cl.n(), q);
    Graph::from_fn(ws.len(), |a, b| literal_adjacent(cl, &ws[a], &ws[b])).unwrap()
}
