//! Multiple-unicast network coding instances and their guessing digraphs.
//!
//! Node ids are grouped: sources `0..r`, sinks `r..2r` (sink `r + i` demands
//! the message of source `i`), intermediates `2r..2r+m`. Merging each source
//! with its sink gives a digraph on `r + m` vertices in which pair `i` is
//! vertex `i` and intermediate `2r + j` is vertex `r + j`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closure::ClosureOp;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::partition::CodingFunction;
use crate::set::MAX_VERTICES;
use crate::solvegraph::{self, Solvability};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
}

/// A network in circuit representation: every node sends one message on
/// all of its outgoing links.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkInstance {
    pub r: usize,
    pub m: usize,
    pub arcs: Vec<[usize; 2]>,
    pub labels: Labels,
}

fn invalid(rule: &'static str, detail: impl Into<String>) -> Error {
    Error::InvalidNetwork {
        rule,
        detail: detail.into(),
    }
}

impl NetworkInstance {
    /// Two sources, two sinks and one coding node receiving from both
    /// sources and feeding both sinks; each sink also hears the other
    /// pair's source directly.
    pub fn butterfly() -> Self {
        NetworkInstance {
            r: 2,
            m: 1,
            arcs: vec![[0, 4], [1, 4], [0, 3], [1, 2], [4, 2], [4, 3]],
            labels: Labels {
                sources: vec![0, 1],
                sinks: vec![2, 3],
            },
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let net: NetworkInstance = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        net.validate()?;
        Ok(net)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("network serializes")
    }

    pub fn node_count(&self) -> usize {
        2 * self.r + self.m
    }

    fn is_source(&self, v: usize) -> bool {
        v < self.r
    }

    fn is_sink(&self, v: usize) -> bool {
        (self.r..2 * self.r).contains(&v)
    }

    /// Merged-digraph vertex of a network node.
    pub fn merged_vertex(&self, node: usize) -> usize {
        if node < self.r {
            node
        } else {
            node - self.r
        }
    }

    /// Checks every structural rule, naming the first one broken.
    pub fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(invalid("pairs", "at least one source-sink pair is required"));
        }
        if self.r + self.m > MAX_VERTICES {
            return Err(Error::too_large(
                "merged digraph order",
                (self.r + self.m) as u64,
                MAX_VERTICES as u64,
            ));
        }
        let sources: Vec<usize> = (0..self.r).collect();
        let sinks: Vec<usize> = (self.r..2 * self.r).collect();
        if self.labels.sources != sources || self.labels.sinks != sinks {
            return Err(invalid(
                "grouping",
                format!("sources must be {sources:?} and sinks {sinks:?}, paired by position"),
            ));
        }
        let total = self.node_count();
        let mut seen = std::collections::HashSet::new();
        for &[a, b] in &self.arcs {
            if a >= total || b >= total {
                return Err(invalid("node-range", format!("arc [{a}, {b}] leaves 0..{total}")));
            }
            if a == b {
                return Err(invalid("acyclic", format!("self-loop on node {a}")));
            }
            if !seen.insert((a, b)) {
                return Err(invalid("duplicate-arc", format!("arc [{a}, {b}] appears twice")));
            }
            if self.is_source(b) {
                return Err(invalid("source-in-degree", format!("arc [{a}, {b}] enters source {b}")));
            }
            if self.is_sink(a) {
                return Err(invalid("sink-out-degree", format!("arc [{a}, {b}] leaves sink {a}")));
            }
        }
        for v in 2 * self.r..total {
            if !self.arcs.iter().any(|&[a, _]| a == v) {
                return Err(invalid(
                    "dead-node",
                    format!("intermediate node {v} has no outgoing arc"),
                ));
            }
        }
        if self.topological_order().is_none() {
            return Err(invalid("acyclic", "the network contains a directed cycle"));
        }
        Ok(())
    }

    /// Kahn's algorithm, smallest ready node first.
    fn topological_order(&self) -> Option<Vec<usize>> {
        let total = self.node_count();
        let mut indeg = vec![0usize; total];
        for &[_, b] in &self.arcs {
            indeg[b] += 1;
        }
        let mut ready: std::collections::BTreeSet<usize> = (0..total).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(total);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &[a, b] in &self.arcs {
                if a == v {
                    indeg[b] -= 1;
                    if indeg[b] == 0 {
                        ready.insert(b);
                    }
                }
            }
        }
        (order.len() == total).then_some(order)
    }

    fn in_nodes(&self, v: usize) -> Vec<usize> {
        let mut ins: Vec<usize> = self.arcs.iter().filter(|&&[_, b]| b == v).map(|&[a, _]| a).collect();
        ins.sort_unstable();
        ins
    }

    /// The guessing digraph on `r + m` vertices.
    pub fn to_guessing_digraph(&self) -> Result<Digraph> {
        self.validate()?;
        Digraph::from_arcs(
            self.r + self.m,
            self.arcs
                .iter()
                .map(|&[a, b]| (self.merged_vertex(a), self.merged_vertex(b))),
        )
    }
}

/// Why a network has no solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstruction {
    /// `cl_D` has rank below the number of pairs.
    RankDeficit,
    /// Rank is right but α(G(cl_D, A)) < q^r.
    NoCodingFunction,
}

#[derive(Clone, Debug)]
pub struct NetworkSolution {
    pub digraph: Digraph,
    pub r: usize,
    pub rank: usize,
    pub q: usize,
    pub solvable: bool,
    pub obstruction: Option<Obstruction>,
    /// Present unless the rank check already failed.
    pub solvability: Option<Solvability>,
}

impl NetworkSolution {
    pub fn coding_function(&self) -> Option<&CodingFunction> {
        self.solvability.as_ref().and_then(|s| s.coding_function.as_ref())
    }
}

/// Solvable over `A` iff `cl_D` has rank `r` and is solvable over `A`.
pub fn solve_network(net: &NetworkInstance, q: usize) -> Result<NetworkSolution> {
    let digraph = net.to_guessing_digraph()?;
    let cl = ClosureOp::from_digraph(&digraph)?;
    let rank = cl.rank();
    // The sources form a feedback vertex set of the merged digraph.
    assert!(rank <= net.r, "merged digraph rank {rank} exceeds the {} pairs", net.r);
    if rank < net.r {
        return Ok(NetworkSolution {
            digraph,
            r: net.r,
            rank,
            q,
            solvable: false,
            obstruction: Some(Obstruction::RankDeficit),
            solvability: None,
        });
    }
    let s = solvegraph::is_solvable(&cl, q)?;
    assert!(
        s.alpha <= q.pow(net.r as u32),
        "guessing number exceeds the number of pairs"
    );
    Ok(NetworkSolution {
        digraph,
        r: net.r,
        rank,
        q,
        solvable: s.solvable,
        obstruction: (!s.solvable).then_some(Obstruction::NoCodingFunction),
        solvability: Some(s),
    })
}

/// How sinks must reproduce their source's message.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DecodeMode {
    /// Each sink outputs the message itself.
    Exact,
    /// Each sink outputs a fixed relabelling of the message.
    #[default]
    Permutation,
}

/// Instantiates node functions with the kernels of `f`, simulates the network
/// on every tuple of source messages, and checks that each sink decodes.
pub fn verify_network_solution(net: &NetworkInstance, f: &CodingFunction, q: usize, mode: DecodeMode) -> bool {
    let Ok(d) = net.to_guessing_digraph() else {
        return false;
    };
    let (r, n) = (net.r, net.r + net.m);
    if f.n() != n || f.q() != q || f.r() != r {
        return false;
    }
    let base = f.base_size();
    // Sources send f_i(b); the joint map must reach every message tuple.
    let mut base_of: HashMap<Vec<u32>, usize> = HashMap::new();
    for b in 0..base {
        let msg: Vec<u32> = (0..r).map(|i| f.symbols(i)[b]).collect();
        if msg.iter().any(|&s| s as usize >= q) {
            return false;
        }
        base_of.insert(msg, b);
    }
    if base_of.len() != base {
        return false;
    }
    // f̄_v reads the symbols of v's in-neighbours; it exists iff f_v is a
    // function of them.
    let mut tables: Vec<HashMap<Vec<u32>, u32>> = vec![HashMap::new(); n];
    for (v, table) in tables.iter_mut().enumerate() {
        let ins = d.in_neighbors(v).to_vec();
        for b in 0..base {
            let key: Vec<u32> = ins.iter().map(|&u| f.symbols(u)[b]).collect();
            let val = f.symbols(v)[b];
            if *table.entry(key).or_insert(val) != val {
                return false;
            }
        }
    }
    let order = net.topological_order().expect("validated network is acyclic");
    let in_nodes: Vec<Vec<usize>> = (0..net.node_count()).map(|v| net.in_nodes(v)).collect();
    let mut decoders: Vec<HashMap<u32, u32>> = vec![HashMap::new(); r];
    for msg in base_of.keys() {
        let mut out = vec![0u32; net.node_count()];
        for &v in &order {
            out[v] = if net.is_source(v) {
                msg[v]
            } else {
                // The merged vertex's in-neighbours, in increasing order, are
                // the images of this node's in-nodes.
                let mut inputs: Vec<(usize, u32)> =
                    in_nodes[v].iter().map(|&u| (net.merged_vertex(u), out[u])).collect();
                inputs.sort_unstable();
                let key: Vec<u32> = inputs.into_iter().map(|(_, s)| s).collect();
                match tables[net.merged_vertex(v)].get(&key) {
                    Some(&s) => s,
                    None => return false,
                }
            };
        }
        for i in 0..r {
            let got = out[r + i];
            match mode {
                DecodeMode::Exact if got != msg[i] => return false,
                _ => {}
            }
            if *decoders[i].entry(msg[i]).or_insert(got) != got {
                return false;
            }
        }
    }
    // Every decoder must be injective on the q messages.
    decoders.iter().all(|dec| {
        let mut outs: Vec<u32> = dec.values().copied().collect();
        outs.sort_unstable();
        outs.dedup();
        outs.len() == q && dec.len() == q
    })
}

/// Largest `q^{q^{|v⁻|}}` table count per vertex the protocol oracle enumerates.
pub const MAX_PROTOCOLS_PER_VERTEX: u64 = 1 << 16;

/// Largest number of configurations `q^n` the protocol oracle handles.
pub const MAX_CONFIGURATIONS: usize = 1 << 10;

/// `max_f |Fix(f)|` over all protocols `f_v : A^{v⁻} → A`, by exhaustive
/// search with pruning on the number of configurations still fixed.
pub fn protocol_guessing_oracle(d: &Digraph, q: usize) -> Result<usize> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!(
            "alphabet size must be at least 2, got {q}"
        )));
    }
    let n = d.n();
    let configs = u32::try_from(n)
        .ok()
        .and_then(|n| q.checked_pow(n))
        .filter(|&c| c <= MAX_CONFIGURATIONS)
        .ok_or_else(|| Error::too_large("q^n for the protocol oracle", u64::MAX, MAX_CONFIGURATIONS as u64))?;
    let words = configs.div_ceil(64);
    let digits = |x: usize, v: usize| (x / q.pow(v as u32)) % q;
    // masks[v][t]: configurations fixed at v by the t-th local function.
    let mut masks: Vec<Vec<Vec<u64>>> = Vec::with_capacity(n);
    for v in 0..n {
        let ins = d.in_neighbors(v).to_vec();
        let inputs = q.pow(ins.len() as u32);
        let tables = u32::try_from(inputs)
            .ok()
            .and_then(|i| (q as u64).checked_pow(i))
            .filter(|&t| t <= MAX_PROTOCOLS_PER_VERTEX)
            .ok_or_else(|| Error::too_large("local functions per vertex", u64::MAX, MAX_PROTOCOLS_PER_VERTEX))?;
        let vmasks = (0..tables as usize)
            .map(|t| {
                let mut mask = vec![0u64; words];
                for x in 0..configs {
                    let input = ins.iter().rev().fold(0, |acc, &u| acc * q + digits(x, u));
                    if (t / q.pow(input as u32)) % q == digits(x, v) {
                        mask[x / 64] |= 1 << (x % 64);
                    }
                }
                mask
            })
            .collect();
        masks.push(vmasks);
    }
    let full: Vec<u64> = (0..words)
        .map(|w| {
            if (w + 1) * 64 <= configs {
                u64::MAX
            } else {
                (1u64 << (configs - w * 64)) - 1
            }
        })
        .collect();
    let popcount = |m: &[u64]| m.iter().map(|w| w.count_ones() as usize).sum::<usize>();

    fn dfs(masks: &[Vec<Vec<u64>>], v: usize, cur: &[u64], best: &mut usize, popcount: &dyn Fn(&[u64]) -> usize) {
        let c = popcount(cur);
        if c <= *best {
            return;
        }
        if v == masks.len() {
            *best = c;
            return;
        }
        for m in &masks[v] {
            let next: Vec<u64> = cur.iter().zip(m).map(|(a, b)| a & b).collect();
            dfs(masks, v + 1, &next, best, popcount);
        }
    }

    if n == 0 {
        return Ok(1);
    }
    let best = masks[0]
        .par_iter()
        .map(|m| {
            let start: Vec<u64> = full.iter().zip(m).map(|(a, b)| a & b).collect();
            let mut best = 0;
            dfs(&masks, 1, &start, &mut best, &popcount);
            best
        })
        .max()
        .unwrap_or(0);
    Ok(best)
}
