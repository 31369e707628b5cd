//! Digraphs with loops and bidirectional edges, and the graph-side
//! computations: the D-closure, maximum induced acyclic subgraphs, chordless
//! cycles, unions and the alphabet blow-up.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::set::{VertexSet, MAX_VERTICES};

/// A digraph on `[0, n)` without repeated arcs. Loops `(v, v)` are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<VertexSet>,
    inn: Vec<VertexSet>,
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("a digraph needs at least one vertex".into()));
    }
    if n > MAX_VERTICES {
        return Err(Error::too_large("vertex count", n as u64, MAX_VERTICES as u64));
    }
    Ok(())
}

impl Digraph {
    /// The arcless digraph on `n` vertices (`E_n`).
    pub fn new(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(Digraph {
            n,
            out: vec![VertexSet::EMPTY; n],
            inn: vec![VertexSet::EMPTY; n],
        })
    }

    /// Builds a digraph from an arc list. Repeated arcs are merged.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut d = Digraph::new(n)?;
        for (u, v) in arcs {
            d.add_arc(u, v)?;
        }
        Ok(d)
    }

    /// Every edge `{u, v}` becomes the pair of arcs `u -> v`, `v -> u`.
    pub fn from_undirected<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut d = Digraph::new(n)?;
        for (u, v) in edges {
            d.add_arc(u, v)?;
            d.add_arc(v, u)?;
        }
        Ok(d)
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`. For `n = 1` this is a loop.
    pub fn cycle(n: usize) -> Result<Self> {
        Digraph::from_arcs(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    /// Bidirectional clique `K_n`.
    pub fn clique(n: usize) -> Result<Self> {
        let pairs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        Digraph::from_arcs(n, pairs)
    }

    /// A loop on every vertex and nothing else.
    pub fn all_loops(n: usize) -> Result<Self> {
        Digraph::from_arcs(n, (0..n).map(|v| (v, v)))
    }

    /// Directed path `0 -> 1 -> ... -> n-1`.
    pub fn path(n: usize) -> Result<Self> {
        Digraph::from_arcs(n, (1..n).map(|v| (v - 1, v)))
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        self.out[u].insert(v);
        self.inn[v].insert(u);
        Ok(())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// `v⁻`.
    #[inline]
    pub fn in_neighbors(&self, v: usize) -> VertexSet {
        self.inn[v]
    }

    /// `v⁺`.
    #[inline]
    pub fn out_neighbors(&self, v: usize) -> VertexSet {
        self.out[v]
    }

    /// Union of the in-neighbourhoods of the members of `x`.
    pub fn in_neighbors_of(&self, x: VertexSet) -> VertexSet {
        x.iter().fold(VertexSet::EMPTY, |acc, v| acc | self.inn[v])
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    #[inline]
    pub fn has_loop(&self, v: usize) -> bool {
        self.out[v].contains(v)
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|v| self.has_loop(v))
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|s| s.len()).sum()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out[u].iter().map(move |v| (u, v)))
    }

    pub fn min_in_degree(&self) -> usize {
        self.inn.iter().map(|s| s.len()).min().unwrap_or(0)
    }

    /// One step of the closure iteration: `X ∪ {v : v⁻ ⊆ X}`.
    pub fn c_step(&self, x: VertexSet) -> VertexSet {
        self.c_step_within(self.vertices(), x)
    }

    /// The least fixpoint of [`Digraph::c_step`] containing `x`.
    pub fn d_closure(&self, x: VertexSet) -> VertexSet {
        self.d_closure_within(self.vertices(), x)
    }

    /// `c_step` on the induced subgraph `D[alive]`; `x` must lie in `alive`.
    pub fn c_step_within(&self, alive: VertexSet, x: VertexSet) -> VertexSet {
        let mut next = x;
        for v in (alive - x).iter() {
            if (self.inn[v] & alive).is_subset(x) {
                next.insert(v);
            }
        }
        next
    }

    /// The D-closure of `x` in the induced subgraph `D[alive]`.
    pub fn d_closure_within(&self, alive: VertexSet, x: VertexSet) -> VertexSet {
        let mut cur = x & alive;
        loop {
            let next = self.c_step_within(alive, cur);
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    /// Whether `D[set]` has no directed cycle (a loop counts as a cycle).
    pub fn is_acyclic_within(&self, set: VertexSet) -> bool {
        let mut rest = set;
        loop {
            let mut peeled = VertexSet::EMPTY;
            for v in rest.iter() {
                if (self.inn[v] & rest).is_empty() {
                    peeled.insert(v);
                }
            }
            if peeled.is_empty() {
                return rest.is_empty();
            }
            rest -= peeled;
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.is_acyclic_within(self.vertices())
    }

    /// Vertices reachable from `v` inside `within` (including `v`).
    fn reach(&self, v: usize, within: VertexSet, forward: bool) -> VertexSet {
        let adj = if forward { &self.out } else { &self.inn };
        let mut seen = VertexSet::singleton(v);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for u in frontier.iter() {
                next |= adj[u] & within;
            }
            frontier = next - seen;
            seen |= next;
        }
        seen
    }

    /// Strongly connected components of `D[within]`, ordered by smallest member.
    pub fn sccs_within(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut left = within;
        let mut comps = Vec::new();
        while let Some(v) = left.first() {
            let comp = self.reach(v, left, true) & self.reach(v, left, false);
            comps.push(comp);
            left -= comp;
        }
        comps
    }

    pub fn sccs(&self) -> Vec<VertexSet> {
        self.sccs_within(self.vertices())
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.reach(0, self.vertices(), true) == self.vertices()
            && self.reach(0, self.vertices(), false) == self.vertices()
    }

    /// The subdigraph induced by `keep`, relabelled onto `[0, |keep|)` in
    /// increasing order of the original indices.
    pub fn induced(&self, keep: VertexSet) -> Result<Digraph> {
        let keep = keep & self.vertices();
        let verts = keep.to_vec();
        let mut d = Digraph::new(verts.len())?;
        for (i, &u) in verts.iter().enumerate() {
            d.out[i] = (self.out[u] & keep).compress(keep);
            d.inn[i] = (self.inn[u] & keep).compress(keep);
        }
        Ok(d)
    }

    /// Size of a maximum induced acyclic subgraph.
    pub fn mias(&self) -> usize {
        self.n - fvs::minimum(self).len()
    }

    /// A maximum vertex set inducing an acyclic subgraph.
    pub fn max_induced_acyclic_set(&self) -> VertexSet {
        fvs::minimum(self).complement(self.n)
    }

    /// A minimum feedback vertex set.
    pub fn min_feedback_vertex_set(&self) -> VertexSet {
        fvs::minimum(self)
    }

    /// `n − mias(D)`, the rank of the D-closure.
    pub fn rank(&self) -> usize {
        fvs::minimum(self).len()
    }

    /// `mias` by scanning every vertex subset. Only for `n ≤ 20`.
    pub fn mias_exhaustive(&self) -> Result<usize> {
        if self.n > 20 {
            return Err(Error::too_large("vertex count for exhaustive mias", self.n as u64, 20));
        }
        let mut best = 0;
        for bits in 0u32..(1u32 << self.n) {
            let s = VertexSet::from_bits(bits);
            if s.len() > best && self.is_acyclic_within(s) {
                best = s.len();
            }
        }
        Ok(best)
    }

    /// Length of a shortest directed cycle; a loop has length 1 and a
    /// bidirectional edge length 2. `None` for acyclic digraphs.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            'bfs: while let Some(u) = queue.pop_front() {
                for w in self.out[u].iter() {
                    if w == s {
                        let len = dist[u] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                        break 'bfs;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
        }
        best
    }

    /// Whether `D[set]` is exactly one directed cycle through all of `set`.
    pub fn induces_cycle(&self, set: VertexSet) -> bool {
        let Some(start) = set.first() else {
            return false;
        };
        for v in set.iter() {
            if (self.out[v] & set).len() != 1 || (self.inn[v] & set).len() != 1 {
                return false;
            }
        }
        // The successor map is a permutation of `set`; it is one cycle iff the
        // orbit of `start` is everything.
        let mut seen = VertexSet::singleton(start);
        let mut v = (self.out[start] & set).first().unwrap();
        while v != start {
            seen.insert(v);
            v = (self.out[v] & set).first().unwrap();
        }
        seen == set
    }

    /// Vertices of `D[alive]` lying on at least one chordless cycle.
    ///
    /// A cycle is chordless when its vertex set induces exactly its own arcs,
    /// so every vertex subset inducing a single cycle is checked.
    pub fn chordless_cover_within(&self, alive: VertexSet) -> VertexSet {
        let mut covered = VertexSet::EMPTY;
        for s in alive.subsets() {
            if s.is_empty() || s.is_subset(covered) {
                continue;
            }
            if self.induces_cycle(s) {
                covered |= s;
            }
        }
        covered
    }

    /// `T(D)`: the vertices lying on no chordless cycle.
    pub fn chordless_vertices(&self) -> VertexSet {
        self.chordless_vertices_within(self.vertices())
    }

    pub fn chordless_vertices_within(&self, alive: VertexSet) -> VertexSet {
        alive - self.chordless_cover_within(alive)
    }

    fn join(d1: &Digraph, d2: &Digraph, forward: bool, backward: bool) -> Result<Digraph> {
        let n1 = d1.n;
        let mut d = Digraph::new(n1 + d2.n)?;
        for (u, v) in d1.arcs() {
            d.add_arc(u, v)?;
        }
        for (u, v) in d2.arcs() {
            d.add_arc(n1 + u, n1 + v)?;
        }
        for a in 0..n1 {
            for b in n1..n1 + d2.n {
                if forward {
                    d.add_arc(a, b)?;
                }
                if backward {
                    d.add_arc(b, a)?;
                }
            }
        }
        Ok(d)
    }

    /// `D1 ∪ D2`; the vertices of `D2` are shifted by `n1`.
    pub fn disjoint_union(d1: &Digraph, d2: &Digraph) -> Result<Digraph> {
        Digraph::join(d1, d2, false, false)
    }

    /// `D1 ∪ D2` plus every arc from `V1` to `V2`.
    pub fn unidirectional_union(d1: &Digraph, d2: &Digraph) -> Result<Digraph> {
        Digraph::join(d1, d2, true, false)
    }

    /// `D1 ∪ D2` plus every arc between `V1` and `V2` in both directions.
    pub fn bidirectional_union(d1: &Digraph, d2: &Digraph) -> Result<Digraph> {
        Digraph::join(d1, d2, true, true)
    }

    /// `D^[k]` on `V × [k]`, with `(v, i)` numbered `v·k + i`.
    pub fn blowup(&self, k: usize) -> Result<Digraph> {
        if k == 0 {
            return Err(Error::InvalidArgument("blow-up factor must be positive".into()));
        }
        let total = self.n * k;
        if total > MAX_VERTICES {
            return Err(Error::too_large(
                "blown-up vertex count",
                total as u64,
                MAX_VERTICES as u64,
            ));
        }
        let mut d = Digraph::new(total)?;
        for (u, v) in self.arcs() {
            for i in 0..k {
                for j in 0..k {
                    d.add_arc(u * k + i, v * k + j)?;
                }
            }
        }
        Ok(d)
    }

    /// Serializes to the line-oriented text format (`digraph <n>` followed by
    /// one `<u> <v>` line per arc).
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "digraph {}", self.n)?;
        for (u, v) in self.arcs() {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

impl FromStr for Digraph {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `digraph <n>` header"))?;
        let mut head = header.split_whitespace();
        if head.next() != Some("digraph") {
            return Err(Error::parse(hline, "expected `digraph <n>`"));
        }
        let n: usize = head
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(hline, "vertex count must be a non-negative integer"))?;
        if head.next().is_some() {
            return Err(Error::parse(hline, "trailing tokens after vertex count"));
        }
        let mut d = Digraph::new(n).map_err(|e| Error::parse(hline, e.to_string()))?;
        for (lno, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::parse(lno, "expected `<u> <v>`"));
            }
            let parse = |t: &str| {
                t.parse::<usize>()
                    .map_err(|_| Error::parse(lno, format!("bad vertex index `{t}`")))
            };
            let (u, v) = (parse(toks[0])?, parse(toks[1])?);
            d.add_arc(u, v).map_err(|e| Error::parse(lno, e.to_string()))?;
        }
        Ok(d)
    }
}

/// Exact minimum feedback vertex set by branch and bound.
///
/// Each node applies the standard safe reductions (loops are forced, sources
/// and sinks dropped, vertices of in- or out-degree one bypassed), splits into
/// strongly connected components, then branches on a vertex: delete it, or
/// keep it and bypass it by joining every in-neighbour to every out-neighbour.
mod fvs {
    use super::Digraph;
    use crate::set::{VertexSet, MAX_VERTICES};

    #[derive(Clone, Copy)]
    struct Work {
        out: [u32; MAX_VERTICES],
        inn: [u32; MAX_VERTICES],
        active: u32,
    }

    impl Work {
        fn from_digraph(d: &Digraph) -> Self {
            let mut w = Work {
                out: [0; MAX_VERTICES],
                inn: [0; MAX_VERTICES],
                active: VertexSet::full(d.n()).bits(),
            };
            for v in 0..d.n() {
                w.out[v] = d.out_neighbors(v).bits();
                w.inn[v] = d.in_neighbors(v).bits();
            }
            w
        }

        fn delete(mut self, v: usize) -> Self {
            self.active &= !(1 << v);
            self
        }

        /// Removes `v` while preserving every cycle through it.
        fn bypass(mut self, v: usize) -> Self {
            let ins = self.inn[v] & self.active & !(1 << v);
            let outs = self.out[v] & self.active & !(1 << v);
            for u in VertexSet::from_bits(ins) {
                self.out[u] |= outs;
            }
            for w in VertexSet::from_bits(outs) {
                self.inn[w] |= ins;
            }
            self.active &= !(1 << v);
            self
        }

        /// Applies the reductions to a fixpoint; returns the forced vertices.
        fn reduce(&mut self) -> u32 {
            let mut forced = 0u32;
            loop {
                let mut changed = false;
                for v in VertexSet::from_bits(self.active) {
                    let bit = 1u32 << v;
                    if self.out[v] & bit != 0 {
                        forced |= bit;
                        *self = self.delete(v);
                        changed = true;
                        continue;
                    }
                    let ins = (self.inn[v] & self.active).count_ones();
                    let outs = (self.out[v] & self.active).count_ones();
                    if ins == 0 || outs == 0 {
                        *self = self.delete(v);
                        changed = true;
                    } else if ins == 1 || outs == 1 {
                        *self = self.bypass(v);
                        changed = true;
                    }
                }
                if !changed {
                    return forced;
                }
            }
        }

        fn reach(&self, v: usize, within: u32, forward: bool) -> u32 {
            let adj = if forward { &self.out } else { &self.inn };
            let mut seen = 1u32 << v;
            let mut frontier = seen;
            while frontier != 0 {
                let mut next = 0;
                for u in VertexSet::from_bits(frontier) {
                    next |= adj[u] & within;
                }
                frontier = next & !seen;
                seen |= next;
            }
            seen
        }

        /// Components with at least two vertices (loops were already removed).
        fn nontrivial_sccs(&self) -> Vec<u32> {
            let mut left = self.active;
            let mut comps = Vec::new();
            while left != 0 {
                let v = left.trailing_zeros() as usize;
                let comp = self.reach(v, left, true) & self.reach(v, left, false);
                if comp.count_ones() > 1 {
                    comps.push(comp);
                }
                left &= !comp;
            }
            comps
        }

        fn branch_vertex(&self) -> usize {
            VertexSet::from_bits(self.active)
                .iter()
                .max_by_key(|&v| {
                    let ins = (self.inn[v] & self.active).count_ones();
                    let outs = (self.out[v] & self.active).count_ones();
                    // Prefer the smallest index on ties.
                    (ins * outs, std::cmp::Reverse(v))
                })
                .expect("active set is non-empty")
        }
    }

    /// Smallest feedback vertex set of size `< budget`, if one exists.
    fn search(mut w: Work, budget: u32) -> Option<u32> {
        let forced = w.reduce();
        let fc = forced.count_ones();
        if fc >= budget {
            return None;
        }
        if w.active == 0 {
            return Some(forced);
        }
        let mut budget = budget - fc;
        if budget <= 1 {
            return None;
        }
        let comps = w.nontrivial_sccs();
        if comps.len() > 1 {
            let mut total = forced;
            let k = comps.len() as u32;
            for (i, &comp) in comps.iter().enumerate() {
                let later = k - 1 - i as u32;
                let mut sub = w;
                sub.active = comp;
                let sol = search(sub, budget - later)?;
                budget -= sol.count_ones();
                total |= sol;
            }
            return Some(total);
        }
        if let Some(&comp) = comps.first() {
            w.active = comp;
        }
        let v = w.branch_vertex();
        let mut best = None;
        if let Some(s) = search(w.delete(v), budget - 1) {
            budget = s.count_ones() + 1;
            best = Some(s | (1 << v));
        }
        if let Some(s) = search(w.bypass(v), budget) {
            best = Some(s);
        }
        best.map(|s| s | forced)
    }

    pub(super) fn minimum(d: &Digraph) -> VertexSet {
        let sol =
            search(Work::from_digraph(d), d.n() as u32 + 1).expect("the whole vertex set is a feedback vertex set");
        VertexSet::from_bits(sol)
    }
}
