//! Removal of the useless part of a strongly connected digraph.
//!
//! A set is useless when it is weak and induces an acyclic subgraph; such
//! vertices can be dropped without changing solvability. Every useless
//! vertex lies on no chordless cycle, and a single vertex `v` is useless iff
//! `v ∈ cl_D(u⁻ \ v)` for each out-neighbour `u`.

use serde::Serialize;

use crate::closure::ClosureOp;
use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::set::VertexSet;

/// Largest digraph [`brute_largest_useless`] accepts.
pub const MAX_BRUTE: usize = 10;

/// One closure evaluation in the singleton test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// The out-neighbour `u`.
    pub out_neighbor: usize,
    /// `u⁻ \ v`.
    pub in_set: Vec<usize>,
    /// `cl_D(u⁻ \ v)`.
    pub closure: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub vertex: usize,
    pub witnesses: Vec<Witness>,
}

/// The removals in order, with the checks that justified each.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub removed: Vec<usize>,
    pub steps: Vec<Step>,
}

/// Output of [`remove_useless_part`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// The digraph induced on `kept`, relabelled in increasing order.
    pub digraph: Digraph,
    pub kept: VertexSet,
    pub trace: ReductionTrace,
}

/// Runs the singleton test for `v` inside `D[alive]`. Returns `None` when
/// some out-neighbour fails, otherwise every evaluation performed.
fn singleton_test(d: &Digraph, alive: VertexSet, v: usize) -> Option<Vec<Witness>> {
    if d.has_loop(v) {
        return None;
    }
    let mut witnesses = Vec::new();
    for u in (d.out_neighbors(v) & alive).iter() {
        let in_set = (d.in_neighbors(u) & alive).without(v);
        let closure = d.d_closure_within(alive, in_set);
        if !closure.contains(v) {
            return None;
        }
        witnesses.push(Witness {
            out_neighbor: u,
            in_set: in_set.to_vec(),
            closure: closure.to_vec(),
        });
    }
    Some(witnesses)
}

/// Whether `{v}` is useless in `D`. Vacuously true when `v` has no out-neighbours.
pub fn is_singleton_useless(d: &Digraph, v: usize) -> bool {
    singleton_test(d, d.vertices(), v).is_some()
}

/// Repeatedly removes a useless vertex, scanning the chordless-free vertices
/// of the current digraph in increasing order, until none is left.
pub fn remove_useless_part(d: &Digraph) -> Result<Reduction> {
    if !d.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let mut alive = d.vertices();
    let mut trace = ReductionTrace::default();
    while alive.len() > 1 {
        let found = d
            .chordless_vertices_within(alive)
            .iter()
            .find_map(|v| singleton_test(d, alive, v).map(|w| (v, w)));
        let Some((vertex, witnesses)) = found else {
            break;
        };
        alive.remove(vertex);
        trace.removed.push(vertex);
        trace.steps.push(Step { vertex, witnesses });
    }
    Ok(Reduction {
        digraph: d.induced(alive)?,
        kept: alive,
        trace,
    })
}

/// Whether `set` is useless in `D`: weak for `cl_D` and inducing no cycle.
pub fn is_useless(d: &Digraph, cl: &ClosureOp, set: VertexSet) -> bool {
    d.is_acyclic_within(set) && cl.is_weak(set)
}

/// Union of all useless sets, by exhaustive search.
pub fn brute_largest_useless(d: &Digraph) -> Result<VertexSet> {
    if d.n() > MAX_BRUTE {
        return Err(Error::too_large(
            "digraph order for exhaustive search",
            d.n() as u64,
            MAX_BRUTE as u64,
        ));
    }
    let cl = ClosureOp::from_digraph(d)?;
    Ok(d.vertices()
        .subsets()
        .filter(|&s| is_useless(d, &cl, s))
        .fold(VertexSet::EMPTY, |acc, s| acc | s))
}
