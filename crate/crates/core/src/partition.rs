//! Partitions of `A^r`, coding functions and their induced closure operators.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::closure::{ClosureOp, MAX_GROUND};
use crate::error::{Error, Result};
use crate::set::{VertexSet, MAX_VERTICES};
use crate::solvegraph;

/// A word of `A^n`, one symbol per element of the ground set.
pub type Word = Vec<u32>;

/// Largest base set `A^r` a coding function may live on.
pub const MAX_BASE: usize = 1 << 20;

/// A partition of `[0, m)`, stored as one label per element. Labels are
/// canonical: parts are numbered `0..p` in order of first occurrence.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    labels: Vec<u32>,
    parts: usize,
}

impl Partition {
    /// The kernel of a map `[0, m) → C`: its preimage classes.
    pub fn kernel<T: Copy + Eq + std::hash::Hash>(values: &[T]) -> Partition {
        let mut seen: HashMap<T, u32> = HashMap::new();
        let labels = values
            .iter()
            .map(|v| {
                let next = seen.len() as u32;
                *seen.entry(*v).or_insert(next)
            })
            .collect();
        Partition {
            labels,
            parts: seen.len(),
        }
    }

    /// `E_B`: every element on its own.
    pub fn equality(m: usize) -> Partition {
        Partition {
            labels: (0..m as u32).collect(),
            parts: m,
        }
    }

    /// One part holding everything.
    pub fn universal(m: usize) -> Partition {
        Partition {
            labels: vec![0; m],
            parts: usize::from(m > 0),
        }
    }

    pub fn base_size(&self) -> usize {
        self.labels.len()
    }

    pub fn num_parts(&self) -> usize {
        self.parts
    }

    /// Part label of each element.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.parts];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    fn same_base(&self, other: &Partition) -> Result<()> {
        if self.base_size() != other.base_size() {
            return Err(Error::GroundSetMismatch {
                left: self.base_size(),
                right: other.base_size(),
            });
        }
        Ok(())
    }

    /// Common refinement `f ∨ g`: the nonempty pairwise intersections of parts.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        self.same_base(other)?;
        let pairs: Vec<(u32, u32)> = self.labels.iter().copied().zip(other.labels.iter().copied()).collect();
        Ok(Partition::kernel(&pairs))
    }

    /// Every part of `self` lies inside a part of `other`.
    pub fn refines(&self, other: &Partition) -> Result<bool> {
        Ok(self.join(other)?.parts == self.parts)
    }

    /// `H(g) = r − q^{-r} Σ |P_i| log_q |P_i|` for a partition of a base of size `q^r`.
    pub fn entropy(&self, q: usize) -> Result<Entropy> {
        let m = self.base_size();
        let r =
            exact_log(m, q).ok_or_else(|| Error::InvalidArgument(format!("base size {m} is not a power of {q}")))?;
        let sizes = self.part_sizes();
        let qf = q as f64;
        let sum: f64 = sizes.iter().map(|&s| s as f64 * (s as f64).ln() / qf.ln()).sum();
        let value = r as f64 - sum / m as f64;
        let exact = sizes
            .iter()
            .map(|&s| exact_log(s, q).map(|e| (s * e) as i64))
            .sum::<Option<i64>>()
            .map(|num| Ratio::from_integer(r as i64) - Ratio::new(num, m as i64));
        Ok(Entropy { value, exact })
    }
}

/// `log_q m` when `m` is an exact power of `q`.
fn exact_log(m: usize, q: usize) -> Option<usize> {
    if q < 2 || m == 0 {
        return None;
    }
    let (mut p, mut e) = (1usize, 0usize);
    while p < m {
        p = p.checked_mul(q)?;
        e += 1;
    }
    (p == m).then_some(e)
}

/// Partition entropy in units of `log q`. `exact` is present when every
/// part size is a power of `q`; otherwise compare `value` with a `1e-12`
/// tolerance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Entropy {
    pub value: f64,
    pub exact: Option<Ratio<i64>>,
}

impl Entropy {
    pub const TOLERANCE: f64 = 1e-12;

    pub fn approx_eq(&self, other: &Entropy) -> bool {
        match (self.exact, other.exact) {
            (Some(a), Some(b)) => a == b,
            _ => (self.value - other.value).abs() <= Self::TOLERANCE,
        }
    }
}

/// An `n`-tuple of functions `A^r → A`, indexed by base element. The kernel
/// of row `v` is the partition `f_v`; the row values are its part symbols.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CodingFunction {
    q: usize,
    r: usize,
    symbols: Vec<Vec<u32>>,
}

fn base_size(q: usize, r: usize) -> Result<usize> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!(
            "alphabet size must be at least 2, got {q}"
        )));
    }
    let m = u32::try_from(r)
        .ok()
        .and_then(|r| q.checked_pow(r))
        .filter(|&m| m <= MAX_BASE)
        .ok_or_else(|| Error::too_large("base set q^r", (q as f64).powi(r as i32) as u64, MAX_BASE as u64))?;
    Ok(m)
}

impl CodingFunction {
    /// `symbols[v][b]` is the value of `f_v` on base element `b ∈ [0, q^r)`.
    pub fn new(q: usize, r: usize, symbols: Vec<Vec<u32>>) -> Result<Self> {
        let m = base_size(q, r)?;
        if symbols.is_empty() || symbols.len() > MAX_VERTICES {
            return Err(Error::InvalidArgument(format!(
                "coding function needs 1..={MAX_VERTICES} rows, got {}",
                symbols.len()
            )));
        }
        if let Some((v, row)) = symbols.iter().enumerate().find(|(_, row)| row.len() != m) {
            return Err(Error::InvalidArgument(format!(
                "row {v} has {} entries, expected q^r = {m}",
                row.len()
            )));
        }
        Ok(CodingFunction { q, r, symbols })
    }

    /// Uses the canonical part labels of each partition as symbols.
    pub fn from_partitions(q: usize, r: usize, parts: &[Partition]) -> Result<Self> {
        CodingFunction::new(q, r, parts.iter().map(|p| p.labels.clone()).collect())
    }

    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn base_size(&self) -> usize {
        self.symbols[0].len()
    }

    pub fn symbols(&self, v: usize) -> &[u32] {
        &self.symbols[v]
    }

    /// `f_v`.
    pub fn partition(&self, v: usize) -> Partition {
        Partition::kernel(&self.symbols[v])
    }

    /// Canonical labels of `f_X = ⋁_{v ∈ X} f_v`, and the part count.
    fn joint_labels(&self, x: VertexSet) -> (Vec<u32>, usize) {
        let m = self.base_size();
        let mut labels = vec![0u32; m];
        let mut parts = 1usize;
        let mut map: HashMap<(u32, u32), u32> = HashMap::new();
        for v in x.iter() {
            map.clear();
            for (l, &s) in labels.iter_mut().zip(&self.symbols[v]) {
                let next = map.len() as u32;
                *l = *map.entry((*l, s)).or_insert(next);
            }
            parts = map.len();
        }
        (labels, parts.min(m))
    }

    /// `f_X`.
    pub fn joint_partition(&self, x: VertexSet) -> Partition {
        let (labels, parts) = self.joint_labels(x);
        Partition { labels, parts }
    }

    /// `H_f(X)`.
    pub fn entropy_of(&self, x: VertexSet) -> Entropy {
        self.joint_partition(x)
            .entropy(self.q)
            .expect("base size is q^r by construction")
    }

    /// Number of parts of `f_X` for every `X ⊆ V`.
    fn part_counts(&self) -> Result<Vec<usize>> {
        if self.n() > MAX_GROUND {
            return Err(Error::too_large(
                "coding function length",
                self.n() as u64,
                MAX_GROUND as u64,
            ));
        }
        Ok((0..1u32 << self.n())
            .map(|bits| self.joint_labels(VertexSet::from_bits(bits)).1)
            .collect())
    }

    /// Whether `f` is a coding function for `cl`: every `f_v` has at most `q`
    /// parts and `f_{X ∪ v} = f_X` whenever `v ∈ cl(X)`.
    pub fn is_coding_function(&self, cl: &ClosureOp) -> bool {
        if cl.n() != self.n() {
            return false;
        }
        if (0..self.n()).any(|v| self.partition(v).num_parts() > self.q) {
            return false;
        }
        let Ok(counts) = self.part_counts() else {
            return false;
        };
        (0..1u32 << self.n()).map(VertexSet::from_bits).all(|x| {
            let c = cl.apply(x);
            // f_{X∪v} refines f_X, so equality is equality of part counts.
            (c - x)
                .iter()
                .all(|v| counts[x.with(v).bits() as usize] == counts[x.bits() as usize])
        })
    }

    /// A coding function whose `f_V` is the equality partition of `A^r`.
    pub fn is_solution(&self, cl: &ClosureOp) -> bool {
        self.r == cl.rank()
            && self.is_coding_function(cl)
            && self.joint_labels(VertexSet::full(self.n())).1 == self.base_size()
    }

    /// `cl_f(X) = {v : f_{X ∪ v} = f_X}`.
    pub fn induced_closure(&self) -> Result<ClosureOp> {
        let counts = self.part_counts()?;
        ClosureOp::from_fn(self.n(), |x| {
            let cx = counts[x.bits() as usize];
            (0..self.n())
                .filter(|&v| counts[x.with(v).bits() as usize] == cx)
                .collect()
        })
    }

    /// `Im(f)`: the words `(f_v(b))_v` over all base elements, sorted.
    pub fn image(&self) -> Vec<Word> {
        let mut words: Vec<Word> = (0..self.base_size())
            .map(|b| self.symbols.iter().map(|row| row[b]).collect())
            .collect();
        words.sort();
        words.dedup();
        words
    }

    /// Text format: `coding <n> <q> <r>`, then one line of `q^r` symbols per vertex.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CodingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "coding {} {} {}", self.n(), self.q, self.r)?;
        for row in &self.symbols {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for CodingFunction {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("").trim();
            (!l.is_empty()).then_some((i + 1, l))
        });
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `coding <n> <q> <r>` header"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 4 || toks[0] != "coding" {
            return Err(Error::parse(hline, "expected `coding <n> <q> <r>`"));
        }
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::parse(hline, format!("bad integer `{t}`")))
        };
        let (n, q, r) = (num(toks[1])?, num(toks[2])?, num(toks[3])?);
        let mut rows = Vec::with_capacity(n);
        for (lno, line) in lines {
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::parse(lno, format!("bad symbol `{t}`")))
                })
                .collect::<Result<Vec<u32>>>()?;
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::parse(0, format!("expected {n} rows, found {}", rows.len())));
        }
        CodingFunction::new(q, r, rows).map_err(|e| Error::parse(0, e.to_string()))
    }
}

/// Builds a coding function for `(cl, q)` whose image is exactly `words`.
///
/// The words must be pairwise non-adjacent in the solvability graph and
/// there can be at most `q^r` of them. Base element `b` is sent to word
/// `min(b, k − 1)`, so part `j < k − 1` of the underlying partition is `{j}`
/// and the last part takes the remainder.
pub fn coding_function_from_words(words: &[Word], cl: &ClosureOp, q: usize) -> Result<CodingFunction> {
    let n = cl.n();
    let r = cl.rank();
    let m = base_size(q, r)?;
    if words.is_empty() {
        return Err(Error::InvalidArgument("need at least one word".into()));
    }
    if words.len() > m {
        return Err(Error::InvalidArgument(format!(
            "{} words exceed q^r = {m}",
            words.len()
        )));
    }
    for w in words {
        if w.len() != n {
            return Err(Error::InvalidArgument(format!("word {w:?} does not have length {n}")));
        }
        if let Some(&s) = w.iter().find(|&&s| s as usize >= q) {
            return Err(Error::InvalidArgument(format!(
                "symbol {s} is outside an alphabet of size {q}"
            )));
        }
    }
    for (i, x) in words.iter().enumerate() {
        for y in &words[i + 1..] {
            if x == y {
                return Err(Error::InvalidArgument(format!("word {x:?} is repeated")));
            }
            if solvegraph::words_adjacent(cl, x, y) {
                return Err(Error::AdjacentWords {
                    x: x.clone(),
                    y: y.clone(),
                });
            }
        }
    }
    let k = words.len();
    let symbols = (0..n)
        .map(|v| (0..m).map(|b| words[b.min(k - 1)][v]).collect())
        .collect();
    CodingFunction::new(q, r, symbols)
}
