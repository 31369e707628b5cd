//! Simple undirected graphs on bit-row adjacency, with exact independence
//! and chromatic numbers for small instances.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest graph [`Graph`] will materialize.
pub const MAX_GRAPH: usize = 1 << 12;

/// Largest graph on which [`Graph::chromatic`] attempts an exact answer.
pub const MAX_EXACT_CHI: usize = 512;

const WORD: usize = 64;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[inline]
fn get(bits: &[u64], v: usize) -> bool {
    (bits[v / WORD] >> (v % WORD)) & 1 == 1
}

#[inline]
fn set(bits: &mut [u64], v: usize) {
    bits[v / WORD] |= 1 << (v % WORD);
}

#[inline]
fn clear(bits: &mut [u64], v: usize) {
    bits[v / WORD] &= !(1 << (v % WORD));
}

#[inline]
fn count(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
fn first(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
}

fn members(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * WORD + b)
        })
    })
}

/// An undirected simple graph on `[0, n)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    stride: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_GRAPH {
            return Err(Error::too_large("graph order", n as u64, MAX_GRAPH as u64));
        }
        let stride = words_for(n);
        Ok(Graph {
            n,
            stride,
            adj: vec![0; n * stride],
        })
    }

    /// Builds the graph whose edges are the pairs `u ≠ v` with `adjacent(u, v)`.
    /// The predicate must be symmetric.
    pub fn from_fn<F>(n: usize, adjacent: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> bool + Sync,
    {
        let mut g = Graph::new(n)?;
        let stride = g.stride;
        if stride > 0 {
            g.adj.par_chunks_mut(stride).enumerate().for_each(|(u, row)| {
                for v in (0..n).filter(|&v| v != u) {
                    if adjacent(u, v) {
                        set(row, v);
                    }
                }
            });
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        Graph::from_fn(n, |_, _| true)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(
            u < self.n && v < self.n && u != v,
            "edge {u}-{v} invalid for order {}",
            self.n
        );
        set(self.row_mut(u), v);
        set(self.row_mut(v), u);
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.stride..(u + 1) * self.stride]
    }

    #[inline]
    fn row_mut(&mut self, u: usize) -> &mut [u64] {
        &mut self.adj[u * self.stride..(u + 1) * self.stride]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        get(self.row(u), v)
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        members(self.row(u))
    }

    pub fn degree(&self, u: usize) -> usize {
        count(self.row(u))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn is_regular(&self) -> bool {
        (0..self.n).all(|u| self.degree(u) == self.degree(0))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    /// Whether `colors[v]` is a proper coloring of every vertex.
    pub fn is_proper_coloring(&self, colors: &[usize]) -> bool {
        colors.len() == self.n && self.edges().all(|(u, v)| colors[u] != colors[v])
    }

    /// A lexicographically smallest maximum independent set, sorted.
    ///
    /// Search stops as soon as a set of size `ceiling` is found, so the
    /// ceiling must be a true upper bound on α for the result to be exact.
    /// With `force_first`, only sets containing vertex 0 are explored; that
    /// loses nothing on vertex-transitive graphs.
    pub fn max_independent_set(&self, ceiling: Option<usize>, force_first: bool) -> Vec<usize> {
        if self.n == 0 {
            return Vec::new();
        }
        let ceiling = ceiling.unwrap_or(self.n).min(self.n);
        let mut root = vec![0u64; self.stride];
        for v in 0..self.n {
            set(&mut root, v);
        }
        let mut best: Vec<usize> = Vec::new();
        let mut cur: Vec<usize> = Vec::new();
        // stack[i] holds the untried candidates at depth i; cur.len() + 1 == stack.len().
        let mut stack = Vec::new();
        if force_first {
            clear(&mut root, 0);
            let next = root.iter().zip(self.row(0)).map(|(c, a)| c & !a).collect();
            cur.push(0);
            best.push(0);
            if ceiling <= 1 {
                return best;
            }
            stack.push(vec![0; self.stride]);
            stack.push(next);
        } else {
            stack.push(root);
        }
        let mut cover = CliqueCover::default();
        while let Some(top) = stack.last_mut() {
            let size = count(top);
            let need = best.len().saturating_sub(cur.len());
            let prune = size == 0 || size <= need || !cover.exceeds(self, top, need);
            if prune {
                stack.pop();
                cur.pop();
                continue;
            }
            let v = first(top).expect("nonempty candidate set");
            clear(top, v);
            let next: Vec<u64> = top.iter().zip(self.row(v)).map(|(c, a)| c & !a).collect();
            cur.push(v);
            if cur.len() > best.len() {
                best.clone_from(&cur);
                if best.len() >= ceiling {
                    break;
                }
            }
            stack.push(next);
        }
        best
    }

    /// α(G).
    pub fn independence_number(&self) -> usize {
        self.max_independent_set(None, false).len()
    }

    /// A maximal clique grown greedily from each of the first 64 vertices;
    /// the largest found.
    pub fn greedy_clique(&self) -> Vec<usize> {
        let mut best = Vec::new();
        for s in 0..self.n.min(64) {
            let mut clique = vec![s];
            let mut cand: Vec<u64> = self.row(s).to_vec();
            while let Some(v) = members(&cand).max_by_key(|&v| (count_and(self.row(v), &cand), std::cmp::Reverse(v))) {
                clique.push(v);
                for (c, a) in cand.iter_mut().zip(self.row(v)) {
                    *c &= a;
                }
            }
            if clique.len() > best.len() {
                clique.sort_unstable();
                best = clique;
            }
        }
        best
    }

    /// Greedy DSATUR coloring.
    pub fn greedy_coloring(&self) -> Vec<usize> {
        let mut dsatur = Dsatur::new(self, usize::MAX);
        let mut colors = vec![0; self.n];
        for _ in 0..self.n {
            let v = dsatur.pick();
            let c = (0..)
                .find(|&c| dsatur.conflicts(v, c) == 0)
                .expect("a free color exists");
            dsatur.assign(v, c);
            colors[v] = c;
        }
        colors
    }

    /// Chromatic number. Exact for graphs of at most [`MAX_EXACT_CHI`]
    /// vertices unless `node_budget` DSATUR nodes are exhausted, in which
    /// case the best bounds found are returned.
    pub fn chromatic(&self, alpha: Option<usize>, node_budget: u64) -> Chromatic {
        if self.n == 0 {
            return Chromatic {
                lower: 0,
                upper: 0,
                coloring: Vec::new(),
            };
        }
        let greedy = self.greedy_coloring();
        let upper = greedy.iter().max().map_or(0, |c| c + 1);
        let alpha = alpha.unwrap_or_else(|| {
            if self.n <= MAX_EXACT_CHI {
                self.independence_number()
            } else {
                self.n
            }
        });
        let lower = self.greedy_clique().len().max(self.n.div_ceil(alpha.max(1)));
        let mut result = Chromatic {
            lower,
            upper,
            coloring: greedy,
        };
        if self.n > MAX_EXACT_CHI || lower >= upper {
            return result;
        }
        let mut search = ExactChi {
            g: self,
            dsatur: Dsatur::new(self, upper),
            colors: vec![usize::MAX; self.n],
            best: upper,
            best_colors: result.coloring.clone(),
            lower,
            nodes: 0,
            budget: node_budget,
        };
        search.run(0, 0);
        result.upper = search.best;
        result.coloring = search.best_colors;
        result.lower = if search.nodes <= search.budget {
            search.best
        } else {
            lower
        };
        result
    }

    /// Co-normal product `G1 ⊕ G2`: `(u1,u2) ~ (v1,v2)` iff `u1 ~ v1` or `u2 ~ v2`.
    /// Vertex `(u1, u2)` is numbered `u1 + |G1|·u2`.
    pub fn conormal(g1: &Graph, g2: &Graph) -> Result<Graph> {
        Graph::product(g1, g2, |e1, _, e2, _| e1 || e2)
    }

    /// Lexicographic product `G1 · G2`: `u1 ~ v1`, or `u1 = v1` and `u2 ~ v2`.
    pub fn lexicographic(g1: &Graph, g2: &Graph) -> Result<Graph> {
        Graph::product(g1, g2, |e1, eq1, e2, _| e1 || (eq1 && e2))
    }

    /// Cartesian product `G1 □ G2`: equal in one coordinate, adjacent in the other.
    pub fn cartesian(g1: &Graph, g2: &Graph) -> Result<Graph> {
        Graph::product(g1, g2, |e1, eq1, e2, eq2| (eq1 && e2) || (eq2 && e1))
    }

    fn product<F>(g1: &Graph, g2: &Graph, rule: F) -> Result<Graph>
    where
        F: Fn(bool, bool, bool, bool) -> bool + Sync,
    {
        let (n1, n2) = (g1.n, g2.n);
        let n = n1.checked_mul(n2).filter(|&n| n <= MAX_GRAPH).ok_or_else(|| {
            Error::too_large("product order", (n1 as u64).saturating_mul(n2 as u64), MAX_GRAPH as u64)
        })?;
        Graph::from_fn(n, |a, b| {
            let (u1, u2) = (a % n1, a / n1);
            let (v1, v2) = (b % n1, b / n1);
            rule(g1.has_edge(u1, v1), u1 == v1, g2.has_edge(u2, v2), u2 == v2)
        })
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("order", &self.n)
            .field("edges", &self.edge_count())
            .finish()
    }
}

fn count_and(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

/// Greedy clique cover of a candidate set, used as an upper bound on the
/// independent vertices it can still contribute.
#[derive(Default)]
struct CliqueCover {
    common: Vec<Vec<u64>>,
}

impl CliqueCover {
    /// Whether `cand` needs more than `need` cliques in the greedy cover,
    /// i.e. whether the branch may still beat the incumbent.
    fn exceeds(&mut self, g: &Graph, cand: &[u64], need: usize) -> bool {
        let mut used = 0;
        for v in members(cand) {
            let row = g.row(v);
            match self.common[..used].iter_mut().find(|c| get(c, v)) {
                Some(c) => {
                    for (x, a) in c.iter_mut().zip(row) {
                        *x &= a;
                    }
                }
                None => {
                    if used == need {
                        return true;
                    }
                    if self.common.len() == used {
                        self.common.push(row.to_vec());
                    } else {
                        self.common[used].copy_from_slice(row);
                    }
                    used += 1;
                }
            }
        }
        false
    }
}

/// Bounds on χ together with the best coloring found. `lower == upper`
/// means the value is exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chromatic {
    pub lower: usize,
    pub upper: usize,
    pub coloring: Vec<usize>,
}

impl Chromatic {
    pub fn exact(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.upper)
    }
}

/// Saturation bookkeeping shared by greedy and exact DSATUR.
struct Dsatur<'a> {
    g: &'a Graph,
    degree: Vec<usize>,
    // conflicts[v * width + c]: colored neighbours of v with color c.
    conflicts: Vec<u32>,
    width: usize,
    saturation: Vec<usize>,
    colored: Vec<bool>,
}

impl<'a> Dsatur<'a> {
    fn new(g: &'a Graph, max_colors: usize) -> Self {
        let degree: Vec<usize> = (0..g.n).map(|v| g.degree(v)).collect();
        let max_degree = degree.iter().copied().max().unwrap_or(0);
        let width = max_colors.min(max_degree + 1).max(1);
        Dsatur {
            g,
            degree,
            conflicts: vec![0; g.n * width],
            width,
            saturation: vec![0; g.n],
            colored: vec![false; g.n],
        }
    }

    fn conflicts(&self, v: usize, c: usize) -> u32 {
        self.conflicts[v * self.width + c]
    }

    /// Uncolored vertex of maximum saturation, then degree, then lowest index.
    fn pick(&self) -> usize {
        (0..self.g.n)
            .filter(|&v| !self.colored[v])
            .max_by_key(|&v| (self.saturation[v], self.degree[v], std::cmp::Reverse(v)))
            .expect("an uncolored vertex remains")
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.colored[v] = true;
        for u in members(self.g.row(v)) {
            let slot = &mut self.conflicts[u * self.width + c];
            if *slot == 0 {
                self.saturation[u] += 1;
            }
            *slot += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.colored[v] = false;
        for u in members(self.g.row(v)) {
            let slot = &mut self.conflicts[u * self.width + c];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[u] -= 1;
            }
        }
    }
}

struct ExactChi<'a> {
    g: &'a Graph,
    dsatur: Dsatur<'a>,
    colors: Vec<usize>,
    best: usize,
    best_colors: Vec<usize>,
    lower: usize,
    nodes: u64,
    budget: u64,
}

impl ExactChi<'_> {
    fn done(&self) -> bool {
        self.best <= self.lower || self.nodes > self.budget
    }

    fn run(&mut self, colored: usize, used: usize) {
        self.nodes += 1;
        if self.done() || used >= self.best {
            return;
        }
        if colored == self.g.n {
            self.best = used;
            self.best_colors.clone_from(&self.colors);
            return;
        }
        let v = self.dsatur.pick();
        // Colors beyond `used` are interchangeable, so only one fresh color is tried.
        let limit = (used + 1).min(self.best - 1);
        for c in 0..limit {
            if self.dsatur.conflicts(v, c) != 0 {
                continue;
            }
            self.dsatur.assign(v, c);
            self.colors[v] = c;
            self.run(colored + 1, used.max(c + 1));
            self.colors[v] = usize::MAX;
            self.dsatur.unassign(v, c);
            if self.done() {
                return;
            }
        }
    }
}
