//! The solvability graph of a closure operator over an alphabet of size `q`,
//! and the numbers read off it.
//!
//! Words of `A^n` are indexed by `Σ x_v q^v`, so concatenating a word of
//! `A^{n1}` with one of `A^{n2}` gives index `u1 + q^{n1}·u2`, matching the
//! vertex numbering of [`Graph`] products.

use serde::Serialize;

use crate::closure::ClosureOp;
use crate::error::{Error, Result};
use crate::graph::{Chromatic, Graph, MAX_EXACT_CHI, MAX_GRAPH};
use crate::partition::{coding_function_from_words, CodingFunction, Word};
use crate::set::VertexSet;

/// Largest `q^n` for adjacency queries.
pub const MAX_WORDS: usize = 1 << 20;

/// DSATUR nodes spent on an exact chromatic number before settling for bounds.
pub const CHI_NODE_BUDGET: u64 = 20_000_000;

/// Whether two words of `A^n` are adjacent: distinct, with an agreement set
/// that is not closed.
pub fn words_adjacent(cl: &ClosureOp, x: &[u32], y: &[u32]) -> bool {
    let agree: VertexSet = (0..cl.n()).filter(|&v| x[v] == y[v]).collect();
    agree.len() < cl.n() && !cl.is_closed(agree)
}

/// `q^n`, if it is at most `limit`.
fn checked_words(q: usize, n: usize, limit: usize, what: &'static str) -> Result<usize> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!(
            "alphabet size must be at least 2, got {q}"
        )));
    }
    let size = u32::try_from(n).ok().and_then(|n| q.checked_pow(n));
    match size {
        Some(s) if s <= limit => Ok(s),
        _ => Err(Error::too_large(
            what,
            (q as f64).powi(n as i32).min(u64::MAX as f64) as u64,
            limit as u64,
        )),
    }
}

/// `G(cl, A)` with `|A| = q`, answering adjacency on demand.
#[derive(Clone, Debug)]
pub struct SolvGraph {
    cl: ClosureOp,
    q: usize,
    size: usize,
}

impl SolvGraph {
    pub fn build(cl: &ClosureOp, q: usize) -> Result<Self> {
        let size = checked_words(q, cl.n(), MAX_WORDS, "q^n")?;
        Ok(SolvGraph {
            cl: cl.clone(),
            q,
            size,
        })
    }

    pub fn closure(&self) -> &ClosureOp {
        &self.cl
    }

    pub fn n(&self) -> usize {
        self.cl.n()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of vertices, `q^n`.
    pub fn order(&self) -> usize {
        self.size
    }

    pub fn word(&self, index: usize) -> Word {
        index_to_word(index, self.q, self.n())
    }

    pub fn index(&self, word: &[u32]) -> usize {
        word_to_index(word, self.q)
    }

    /// `{v : x_v = y_v}` for word indices `x`, `y`.
    pub fn agreement(&self, x: usize, y: usize) -> VertexSet {
        let (mut x, mut y) = (x, y);
        let mut agree = VertexSet::EMPTY;
        for v in 0..self.n() {
            if x % self.q == y % self.q {
                agree.insert(v);
            }
            x /= self.q;
            y /= self.q;
        }
        agree
    }

    pub fn adjacent(&self, x: usize, y: usize) -> bool {
        x != y && !self.cl.is_closed(self.agreement(x, y))
    }

    /// The adjacency structure as a [`Graph`]; needs `q^n ≤ 4096`.
    pub fn materialize(&self) -> Result<Graph> {
        if self.size > MAX_GRAPH {
            return Err(Error::too_large(
                "q^n for a materialized graph",
                self.size as u64,
                MAX_GRAPH as u64,
            ));
        }
        // Adjacency depends only on the agreement set, so tabulate closedness once.
        let open: Vec<bool> = (0..1u32 << self.n())
            .map(|b| !self.cl.is_closed(VertexSet::from_bits(b)))
            .collect();
        Graph::from_fn(self.size, |x, y| open[self.agreement(x, y).bits() as usize])
    }
}

pub fn word_to_index(word: &[u32], q: usize) -> usize {
    word.iter().rev().fold(0, |acc, &s| acc * q + s as usize)
}

pub fn index_to_word(mut index: usize, q: usize, n: usize) -> Word {
    (0..n)
        .map(|_| {
            let s = (index % q) as u32;
            index /= q;
            s
        })
        .collect()
}

/// A maximum independent set of `G(cl, A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Independence {
    pub alpha: usize,
    pub q: usize,
    pub n: usize,
    /// Word indices of the lexicographically smallest maximum independent set.
    pub witness: Vec<usize>,
}

impl Independence {
    pub fn words(&self) -> Vec<Word> {
        self.witness.iter().map(|&i| index_to_word(i, self.q, self.n)).collect()
    }
}

/// α(G(cl, A)) with its canonical witness.
pub fn alpha(cl: &ClosureOp, q: usize) -> Result<Independence> {
    let sg = SolvGraph::build(cl, q)?;
    let g = sg.materialize()?;
    Ok(alpha_of(&sg, &g))
}

fn alpha_of(sg: &SolvGraph, g: &Graph) -> Independence {
    // α ≤ q^r, and translation is an automorphism, so word 0 may be fixed.
    let ceiling = sg.q.pow(sg.cl.rank() as u32);
    let witness = g.max_independent_set(Some(ceiling), true);
    Independence {
        alpha: witness.len(),
        q: sg.q,
        n: sg.n(),
        witness,
    }
}

/// `log_q α` kept as the exact pair `(α, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LogRatio {
    pub value: usize,
    pub base: usize,
}

impl LogRatio {
    pub fn to_f64(self) -> f64 {
        (self.value as f64).ln() / (self.base as f64).ln()
    }

    /// The exponent, when `value` is an exact power of `base`.
    pub fn exact(self) -> Option<usize> {
        let (mut p, mut e) = (1usize, 0usize);
        while p < self.value {
            p = p.checked_mul(self.base)?;
            e += 1;
        }
        (p == self.value).then_some(e)
    }

    /// `"log_q(α)"`.
    pub fn label(self) -> String {
        format!("log_{}({})", self.base, self.value)
    }
}

/// The guessing number `g(cl, A) = log_q α(G(cl, A))`.
pub fn guessing_number(cl: &ClosureOp, q: usize) -> Result<LogRatio> {
    let a = alpha(cl, q)?;
    Ok(LogRatio {
        value: a.alpha,
        base: q,
    })
}

/// Outcome of a solvability decision.
#[derive(Clone, Debug)]
pub struct Solvability {
    pub alpha: usize,
    pub rank: usize,
    pub q: usize,
    pub solvable: bool,
    pub witness_words: Vec<Word>,
    /// A solution built from the witness, present when solvable.
    pub coding_function: Option<CodingFunction>,
}

#[derive(Serialize)]
struct Certificate<'a> {
    alpha: usize,
    rank: usize,
    q: usize,
    solvable: bool,
    witness_words: &'a [Word],
    coding_function: Option<String>,
}

impl Solvability {
    /// `{alpha, rank, q, solvable, witness_words, coding_function}`, the
    /// coding function in its text format.
    pub fn certificate_json(&self) -> serde_json::Value {
        serde_json::to_value(Certificate {
            alpha: self.alpha,
            rank: self.rank,
            q: self.q,
            solvable: self.solvable,
            witness_words: &self.witness_words,
            coding_function: self.coding_function.as_ref().map(CodingFunction::to_text),
        })
        .expect("certificate serializes")
    }
}

/// `cl` is solvable over `A` iff α(G(cl, A)) = q^r.
pub fn is_solvable(cl: &ClosureOp, q: usize) -> Result<Solvability> {
    let a = alpha(cl, q)?;
    let rank = cl.rank();
    let solvable = a.alpha == q.pow(rank as u32);
    let witness_words = a.words();
    let coding_function = if solvable {
        Some(coding_function_from_words(&witness_words, cl, q)?)
    } else {
        None
    };
    Ok(Solvability {
        alpha: a.alpha,
        rank,
        q,
        solvable,
        witness_words,
        coding_function,
    })
}

/// χ(G(cl, A)) and the index coding number `log_q χ`.
#[derive(Clone, Debug)]
pub struct IndexNumber {
    pub q: usize,
    pub chi: Chromatic,
}

impl IndexNumber {
    pub fn exact(&self) -> Option<LogRatio> {
        self.chi.exact().map(|c| LogRatio { value: c, base: self.q })
    }
}

/// Chromatic number of a graph, exact when it has at most 512 vertices.
pub fn chi(g: &Graph) -> Chromatic {
    g.chromatic(None, CHI_NODE_BUDGET)
}

/// Index coding number. When `cl` is solvable the coset coloring meets the
/// bound `χ ≥ q^n / α` and is returned directly. Otherwise χ is searched
/// exactly for `q^n ≤ 512`; above that the bounds are `⌈q^n / α⌉` and a
/// greedy coloring.
pub fn index_number(cl: &ClosureOp, q: usize) -> Result<IndexNumber> {
    let sg = SolvGraph::build(cl, q)?;
    let g = sg.materialize()?;
    let a = alpha_of(&sg, &g);
    let lower = g.order().div_ceil(a.alpha);
    if a.alpha == q.pow(cl.rank() as u32) {
        let coloring = coset_coloring(&a.words(), cl, q)?;
        let upper = coloring.iter().max().map_or(0, |c| c + 1);
        return Ok(IndexNumber {
            q,
            chi: Chromatic { lower, upper, coloring },
        });
    }
    if g.order() <= MAX_EXACT_CHI {
        return Ok(IndexNumber {
            q,
            chi: g.chromatic(Some(a.alpha), CHI_NODE_BUDGET),
        });
    }
    let coloring = g.greedy_coloring();
    let upper = coloring.iter().max().map_or(0, |c| c + 1);
    Ok(IndexNumber {
        q,
        chi: Chromatic { lower, upper, coloring },
    })
}

/// Colors every word of `A^n` by its offset from the independent set `words`
/// on the coordinates outside a basis.
///
/// `words` must have exactly `q^r` members, one for each value on the basis.
/// Each color class is a translate of `words`, so the coloring is proper and
/// uses `q^{n−r}` classes.
pub fn coset_coloring(words: &[Word], cl: &ClosureOp, q: usize) -> Result<Vec<usize>> {
    let n = cl.n();
    let total = checked_words(q, n, MAX_WORDS, "q^n")?;
    let basis = cl.basis();
    let r = basis.len();
    let want = q.pow(r as u32);
    if words.len() != want {
        return Err(Error::InvalidArgument(format!(
            "coset coloring needs an independent set of size q^r = {want}, got {}",
            words.len()
        )));
    }
    let basis_coords = basis.to_vec();
    let rest = basis.complement(n).to_vec();
    let project = |w: &[u32]| {
        basis_coords
            .iter()
            .rev()
            .fold(0usize, |acc, &v| acc * q + w[v] as usize)
    };
    let mut by_basis: Vec<Option<usize>> = vec![None; want];
    for (i, w) in words.iter().enumerate() {
        if w.len() != n || w.iter().any(|&s| s as usize >= q) {
            return Err(Error::InvalidArgument(format!(
                "{w:?} is not a word of length {n} over {q} symbols"
            )));
        }
        let slot = &mut by_basis[project(w)];
        if let Some(j) = *slot {
            return Err(Error::AdjacentWords {
                x: words[j].clone(),
                y: w.clone(),
            });
        }
        *slot = Some(i);
    }
    Ok((0..total)
        .map(|z| {
            let z = index_to_word(z, q, n);
            let x = &words[by_basis[project(&z)].expect("projection onto the basis is onto")];
            rest.iter().rev().fold(0usize, |acc, &v| {
                acc * q + ((z[v] + q as u32 - x[v]) % q as u32) as usize
            })
        })
        .collect())
}

/// `M_q(n, d)`: the largest code of length `n` over `q` symbols with minimum
/// Hamming distance at least `d`.
pub fn max_code(n: usize, d: usize, q: usize) -> Result<usize> {
    Ok(max_code_words(n, d, q)?.len())
}

/// A lexicographically smallest code achieving `M_q(n, d)`, as word indices.
pub fn max_code_words(n: usize, d: usize, q: usize) -> Result<Vec<usize>> {
    let size = checked_words(q, n, MAX_GRAPH, "q^n for a code search")?;
    let dist = |x: usize, y: usize| {
        let (mut x, mut y, mut h) = (x, y, 0);
        for _ in 0..n {
            h += usize::from(x % q != y % q);
            x /= q;
            y /= q;
        }
        h
    };
    let g = Graph::from_fn(size, |x, y| dist(x, y) < d)?;
    // Singleton bound: q^{n-d+1}; the Hamming graph is vertex-transitive.
    let ceiling = if d == 0 {
        size
    } else {
        q.pow((n + 1).saturating_sub(d) as u32)
    };
    Ok(g.max_independent_set(Some(ceiling.max(1)), true))
}

/// Edge-set comparison of the three union solvability graphs against the
/// corresponding graph products.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCheck {
    /// `G(cl1 ∪ cl2) = G1 ⊕ G2`.
    pub disjoint_conormal: bool,
    /// `G(cl1 ⇀∪ cl2) = G1 · G2`.
    pub unidirectional_lexicographic: bool,
    /// `G(cl1 ⇄∪ cl2) = G1 □ G2`.
    pub bidirectional_cartesian: bool,
}

impl ProductCheck {
    pub fn all_hold(&self) -> bool {
        self.disjoint_conormal && self.unidirectional_lexicographic && self.bidirectional_cartesian
    }
}

pub fn product_check(cl1: &ClosureOp, cl2: &ClosureOp, q: usize) -> Result<ProductCheck> {
    let g1 = SolvGraph::build(cl1, q)?.materialize()?;
    let g2 = SolvGraph::build(cl2, q)?.materialize()?;
    let union = |cl: ClosureOp| SolvGraph::build(&cl, q)?.materialize();
    Ok(ProductCheck {
        disjoint_conormal: union(ClosureOp::disjoint_union(cl1, cl2)?)? == Graph::conormal(&g1, &g2)?,
        unidirectional_lexicographic: union(ClosureOp::unidirectional_union(cl1, cl2)?)?
            == Graph::lexicographic(&g1, &g2)?,
        bidirectional_cartesian: union(ClosureOp::bidirectional_union(cl1, cl2)?)? == Graph::cartesian(&g1, &g2)?,
    })
}
