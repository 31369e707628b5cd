//! Tabulated closure operators on small ground sets.
//!
//! A [`ClosureOp`] stores the closure of every subset of `[0, n)`, so two
//! operators can be compared exactly and every derived quantity (rank, weak
//! sets, degrees, girth) is a finite scan of the table.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::set::VertexSet;

/// Largest ground set for which tables are built (2^16 entries).
pub const MAX_GROUND: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClosureOp {
    n: usize,
    table: Vec<VertexSet>,
    rank: usize,
}

fn check_ground(n: usize) -> Result<()> {
    if n > MAX_GROUND {
        return Err(Error::too_large("closure ground set", n as u64, MAX_GROUND as u64));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Extensive,
    Isotone,
    Idempotent,
}

/// One violated axiom together with the subsets exhibiting it. For
/// isotonicity `other` is a superset of `subset` with a smaller closure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub subset: u32,
    pub other: Option<u32>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivedProperty {
    /// `cl(X)` is the intersection of all closed sets containing `X`.
    IntersectionOfClosedSupersets,
    /// Closed sets are closed under intersection.
    ClosedUnderIntersection,
    /// `cl(X ∪ Y) = cl(cl(X) ∪ cl(Y))`.
    UnionOfClosures,
    /// `X ⊆ cl(Y) ⟺ cl(X) ⊆ cl(Y)`.
    SubsetOfClosure,
}

/// Result of [`ClosureOp::simplify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplification {
    /// `cl(∅)`, removed first.
    pub loops: VertexSet,
    /// Representatives kept, in increasing order; element `i` of the reduced
    /// operator is `representatives[i]`.
    pub representatives: Vec<usize>,
    /// For every original element, the index of its class in the reduced
    /// operator (`None` for loops).
    pub class_of: Vec<Option<usize>>,
}

impl ClosureOp {
    /// Wraps a raw table. Only the shape is checked; use
    /// [`ClosureOp::verify_axioms`] to check that it really is a closure.
    pub fn from_table(n: usize, table: Vec<VertexSet>) -> Result<Self> {
        check_ground(n)?;
        if table.len() != 1 << n {
            return Err(Error::InvalidArgument(format!(
                "closure table for n = {n} needs {} entries, got {}",
                1usize << n,
                table.len()
            )));
        }
        let full = VertexSet::full(n);
        if let Some(bad) = table.iter().find(|s| !s.is_subset(full)) {
            return Err(Error::InvalidArgument(format!(
                "closure value {bad} leaves the ground set"
            )));
        }
        let rank = min_spanning_size(n, &table);
        Ok(ClosureOp { n, table, rank })
    }

    /// Tabulates `f` over every subset of `[0, n)`.
    pub fn from_fn<F>(n: usize, f: F) -> Result<Self>
    where
        F: Fn(VertexSet) -> VertexSet + Sync,
    {
        check_ground(n)?;
        let table: Vec<VertexSet> = (0..1u32 << n)
            .into_par_iter()
            .map(|bits| f(VertexSet::from_bits(bits)))
            .collect();
        ClosureOp::from_table(n, table)
    }

    /// The D-closure of `d`.
    pub fn from_digraph(d: &Digraph) -> Result<Self> {
        check_ground(d.n())?;
        let table: Vec<VertexSet> = (0..1u32 << d.n())
            .into_par_iter()
            .map(|bits| d.d_closure(VertexSet::from_bits(bits)))
            .collect();
        Ok(ClosureOp {
            n: d.n(),
            table,
            rank: d.rank(),
        })
    }

    /// The operator whose closed sets are `V` together with all intersections
    /// of the given sets.
    pub fn from_closed_sets<I>(n: usize, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = VertexSet>,
    {
        check_ground(n)?;
        let full = VertexSet::full(n);
        let mut family = vec![full];
        for s in sets {
            family.push(s & full);
        }
        ClosureOp::from_fn(n, |x| {
            family.iter().filter(|f| x.is_subset(**f)).fold(full, |acc, f| acc & *f)
        })
    }

    /// `U_{r,n}`: sets of size at least `r` close to `V`, smaller sets are closed.
    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        if r > n {
            return Err(Error::InvalidArgument(format!(
                "uniform matroid needs r <= n, got r = {r}, n = {n}"
            )));
        }
        let full = VertexSet::full(n);
        ClosureOp::from_fn(n, |x| if x.len() >= r { full } else { x })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn ground(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// `cl(x)`.
    #[inline]
    pub fn apply(&self, x: VertexSet) -> VertexSet {
        self.table[x.bits() as usize]
    }

    pub fn table(&self) -> &[VertexSet] {
        &self.table
    }

    /// `min {|b| : cl(b) = V}`.
    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn is_closed(&self, x: VertexSet) -> bool {
        self.apply(x) == x
    }

    pub fn closed_sets(&self) -> Vec<VertexSet> {
        self.subsets().filter(|&x| self.is_closed(x)).collect()
    }

    fn subsets(&self) -> impl Iterator<Item = VertexSet> {
        (0..1u32 << self.n).map(VertexSet::from_bits)
    }

    /// Bases: sets of size `rank` whose closure is `V`.
    pub fn bases(&self) -> Vec<VertexSet> {
        let full = self.ground();
        self.subsets()
            .filter(|b| b.len() == self.rank && self.apply(*b) == full)
            .collect()
    }

    /// Some basis; the smallest one in bit order.
    pub fn basis(&self) -> VertexSet {
        let full = self.ground();
        self.subsets()
            .find(|b| b.len() == self.rank && self.apply(*b) == full)
            .expect("a valid closure operator has a basis")
    }

    /// Checks extensivity, isotonicity and idempotence, reporting the first
    /// witness of every violated axiom.
    pub fn verify_axioms(&self) -> AxiomReport {
        let mut report = AxiomReport::default();
        let mut push = |axiom, subset: VertexSet, other: Option<VertexSet>| {
            if !report.violations.iter().any(|v: &AxiomViolation| v.axiom == axiom) {
                report.violations.push(AxiomViolation {
                    axiom,
                    subset: subset.bits(),
                    other: other.map(VertexSet::bits),
                });
            }
        };
        for x in self.subsets() {
            if !x.is_subset(self.apply(x)) {
                push(Axiom::Extensive, x, None);
            }
        }
        // Isotonicity only needs checking on covering pairs X ⊂ X ∪ {v}.
        'iso: for x in self.subsets() {
            for v in x.complement(self.n).iter() {
                let y = x.with(v);
                if !self.apply(x).is_subset(self.apply(y)) {
                    push(Axiom::Isotone, x, Some(y));
                    break 'iso;
                }
            }
        }
        for x in self.subsets() {
            let c = self.apply(x);
            if self.apply(c) != c {
                push(Axiom::Idempotent, x, None);
                break;
            }
        }
        report.violations.sort_by_key(|v| v.axiom as u8);
        report
    }

    /// Checks the four standard consequences of the axioms. Quadratic in the
    /// table size, so limited to `n ≤ 12`.
    pub fn derived_property_violations(&self) -> Result<Vec<(DerivedProperty, VertexSet, VertexSet)>> {
        if self.n > 12 {
            return Err(Error::too_large(
                "ground set for derived-property check",
                self.n as u64,
                12,
            ));
        }
        let closed = self.closed_sets();
        let full = self.ground();
        let mut out = Vec::new();
        for x in self.subsets() {
            let meet = closed.iter().filter(|f| x.is_subset(**f)).fold(full, |acc, f| acc & *f);
            if meet != self.apply(x) {
                out.push((DerivedProperty::IntersectionOfClosedSupersets, x, x));
            }
        }
        for &a in &closed {
            for &b in &closed {
                if !self.is_closed(a & b) {
                    out.push((DerivedProperty::ClosedUnderIntersection, a, b));
                }
            }
        }
        for x in self.subsets() {
            for y in self.subsets() {
                let (cx, cy) = (self.apply(x), self.apply(y));
                if self.apply(x | y) != self.apply(cx | cy) {
                    out.push((DerivedProperty::UnionOfClosures, x, y));
                }
                if x.is_subset(cy) != cx.is_subset(cy) {
                    out.push((DerivedProperty::SubsetOfClosure, x, y));
                }
            }
        }
        Ok(out)
    }

    /// Mac Lane–Steinitz exchange: `u ∈ cl(X ∪ v) \ cl(X)` implies `v ∈ cl(X ∪ u)`.
    pub fn is_matroid(&self) -> bool {
        self.subsets().all(|x| {
            let cx = self.apply(x);
            (0..self.n).all(|v| {
                let gained = self.apply(x.with(v)) - cx;
                gained.iter().all(|u| self.apply(x.with(u)).contains(v))
            })
        })
    }

    fn same_ground(&self, other: &ClosureOp) -> Result<()> {
        if self.n != other.n {
            return Err(Error::GroundSetMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// `self ≤ other`: `cl_1(X) ⊆ cl_2(X)` for every `X`.
    pub fn leq(&self, other: &ClosureOp) -> Result<bool> {
        self.same_ground(other)?;
        Ok(self.table.iter().zip(&other.table).all(|(a, b)| a.is_subset(*b)))
    }

    fn check_subset(&self, s: VertexSet) -> Result<()> {
        if let Some(bad) = (s - self.ground()).first() {
            return Err(Error::VertexOutOfRange { vertex: bad, n: self.n });
        }
        Ok(())
    }

    /// `cl \ V2`: `X ↦ cl(X) \ V2` on `V1 = V \ V2`, renumbered in order.
    pub fn deletion(&self, v2: VertexSet) -> Result<ClosureOp> {
        self.check_subset(v2)?;
        let v1 = self.ground() - v2;
        ClosureOp::from_fn(v1.len(), |x| (self.apply(x.expand(v1)) - v2).compress(v1))
    }

    /// `cl / V2`: `X ↦ cl(X ∪ V2) \ V2` on `V1 = V \ V2`, renumbered in order.
    pub fn contraction(&self, v2: VertexSet) -> Result<ClosureOp> {
        self.check_subset(v2)?;
        let v1 = self.ground() - v2;
        ClosureOp::from_fn(v1.len(), |x| (self.apply(x.expand(v1) | v2) - v2).compress(v1))
    }

    fn union_ground(cl1: &ClosureOp, cl2: &ClosureOp) -> Result<(usize, VertexSet, VertexSet)> {
        let n = cl1.n + cl2.n;
        check_ground(n)?;
        Ok((n, VertexSet::range(0, cl1.n), VertexSet::range(cl1.n, n)))
    }

    /// `cl1 ∪ cl2` on `V1 ⊔ V2`, with `V2` shifted by `n1`.
    pub fn disjoint_union(cl1: &ClosureOp, cl2: &ClosureOp) -> Result<ClosureOp> {
        let (n, v1, v2) = ClosureOp::union_ground(cl1, cl2)?;
        ClosureOp::from_fn(n, |x| {
            let x1 = x & v1;
            let x2 = (x & v2).compress(v2);
            cl1.apply(x1) | cl2.apply(x2).expand(v2)
        })
    }

    /// `cl1 ⇀∪ cl2`: `V2` is determined by `V1` once `V1` is spanned.
    pub fn unidirectional_union(cl1: &ClosureOp, cl2: &ClosureOp) -> Result<ClosureOp> {
        let (n, v1, v2) = ClosureOp::union_ground(cl1, cl2)?;
        ClosureOp::from_fn(n, |x| {
            let x1 = x & v1;
            let x2 = x & v2;
            let c1 = cl1.apply(x1);
            if c1 == v1 {
                v1 | cl2.apply(x2.compress(v2)).expand(v2)
            } else {
                c1 | x2
            }
        })
    }

    /// `cl1 ⇄∪ cl2`.
    pub fn bidirectional_union(cl1: &ClosureOp, cl2: &ClosureOp) -> Result<ClosureOp> {
        let (n, v1, v2) = ClosureOp::union_ground(cl1, cl2)?;
        ClosureOp::from_fn(n, |x| {
            let x1 = x & v1;
            let x2 = x & v2;
            if x1 == v1 {
                v1 | cl2.apply(x2.compress(v2)).expand(v2)
            } else if x2 == v2 {
                cl1.apply(x1) | v2
            } else {
                x1 | x2
            }
        })
    }

    /// Whether the nonempty proper subset `v2` is weak, i.e. deletion and
    /// contraction of `v2` coincide.
    pub fn is_weak(&self, v2: VertexSet) -> bool {
        let full = self.ground();
        if v2.is_empty() || !v2.is_subset(full) || v2 == full {
            return false;
        }
        let v1 = full - v2;
        v1.subsets().all(|x| self.apply(x) - v2 == self.apply(x | v2) - v2)
    }

    /// Union of all weak sets (empty if the operator is connected).
    pub fn largest_weak_set(&self) -> VertexSet {
        (1u32..(1u32 << self.n) - 1)
            .into_par_iter()
            .map(VertexSet::from_bits)
            .filter(|&s| self.is_weak(s))
            .reduce(|| VertexSet::EMPTY, |a, b| a | b)
    }

    /// No weak set exists.
    pub fn is_connected(&self) -> bool {
        self.largest_weak_set().is_empty()
    }

    /// A pair `a ∉ cl(b)`, `b ∉ cl(a)` with `cl(a) ∩ cl(b) ≠ ∅`, if any.
    pub fn separability_witness(&self) -> Option<(usize, usize)> {
        for a in 0..self.n {
            let ca = self.apply(VertexSet::singleton(a));
            for b in a + 1..self.n {
                let cb = self.apply(VertexSet::singleton(b));
                if !cb.contains(a) && !ca.contains(b) && ca.intersects(cb) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_separable(&self) -> bool {
        self.separability_witness().is_none()
    }

    /// Removes the loops `cl(∅)`, then collapses every class `cl(v′)` of a
    /// maximal singleton closure onto its smallest member. The loop-free
    /// operator must be separable.
    pub fn simplify(&self) -> Result<(ClosureOp, Simplification)> {
        let loops = self.apply(VertexSet::EMPTY);
        let kept = self.ground() - loops;
        let loopless = self.deletion(loops)?;
        if let Some((a, b)) = loopless.separability_witness() {
            let kept_v = kept.to_vec();
            return Err(Error::NotSeparable {
                a: kept_v[a],
                b: kept_v[b],
            });
        }
        let m = loopless.n;
        let singles: Vec<VertexSet> = (0..m).map(|v| loopless.apply(VertexSet::singleton(v))).collect();
        let reps: Vec<usize> = (0..m)
            .filter(|&v| {
                let cv = singles[v];
                // Maximal by inclusion; among equal closures keep the first.
                (0..m).all(|u| !(cv.is_subset(singles[u]) && (cv != singles[u] || u < v)))
            })
            .collect();
        let rep_set: VertexSet = reps.iter().copied().collect();
        let reduced = ClosureOp::from_fn(reps.len(), |x| {
            (loopless.apply(x.expand(rep_set)) & rep_set).compress(rep_set)
        })?;
        let kept_v = kept.to_vec();
        let mut class_of = vec![None; self.n];
        for (i, &u) in kept_v.iter().enumerate() {
            let class = reps.iter().position(|&r| singles[r].contains(i));
            class_of[u] = class;
        }
        Ok((
            reduced,
            Simplification {
                loops,
                representatives: reps.iter().map(|&r| kept_v[r]).collect(),
                class_of,
            },
        ))
    }

    /// All element degrees `d_v = min {|X| : v ∈ cl(X) \ X}` (0 when no such `X`).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![usize::MAX; self.n];
        for x in self.subsets() {
            for v in (self.apply(x) - x).iter() {
                deg[v] = deg[v].min(x.len());
            }
        }
        deg.into_iter().map(|d| if d == usize::MAX { 0 } else { d }).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees()[v]
    }

    /// `δ`.
    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    /// `γ = min {|X| : cl(V \ X) ≠ V}`, or `n + 1` when every subset is acyclic.
    pub fn closure_girth(&self) -> usize {
        let full = self.ground();
        self.subsets()
            .filter(|x| self.apply(full - *x) != full)
            .map(|x| x.len())
            .min()
            .unwrap_or(self.n + 1)
    }

    /// `rk(X) = min {|b| : cl(b) = cl(X)}`.
    pub fn matroid_rank(&self, x: VertexSet) -> usize {
        let cx = self.apply(x);
        cx.subsets()
            .filter(|b| self.apply(*b) == cx)
            .map(|b| b.len())
            .min()
            .expect("cl(X) spans itself")
    }

    /// `cl^[k]` on `V × [k]`, with `(v, i)` numbered `v·k + i`.
    pub fn blowup(&self, k: usize) -> Result<ClosureOp> {
        if k == 0 {
            return Err(Error::InvalidArgument("blow-up factor must be positive".into()));
        }
        let total = self.n * k;
        check_ground(total)?;
        let block = |v: usize| VertexSet::range(v * k, v * k + k);
        let mut out = ClosureOp::from_fn(total, |x| {
            let xv: VertexSet = (0..self.n).filter(|&v| block(v).is_subset(x)).collect();
            self.apply(xv).iter().fold(x, |acc, v| acc | block(v))
        })?;
        out.rank = min_spanning_size(total, &out.table);
        Ok(out)
    }

    /// Text format: `closure <n>`, then `<subset-hex> <closure-hex>` for every
    /// subset in increasing order.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn min_spanning_size(n: usize, table: &[VertexSet]) -> usize {
    let full = VertexSet::full(n);
    table
        .iter()
        .enumerate()
        .filter(|(_, c)| **c == full)
        .map(|(x, _)| (x as u32).count_ones() as usize)
        .min()
        .unwrap_or(n)
}

impl fmt::Display for ClosureOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "closure {}", self.n)?;
        for (x, c) in self.table.iter().enumerate() {
            writeln!(f, "{:x} {:x}", x, c.bits())?;
        }
        Ok(())
    }
}

impl fmt::Debug for ClosureOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosureOp")
            .field("n", &self.n)
            .field("rank", &self.rank)
            .finish_non_exhaustive()
    }
}

impl FromStr for ClosureOp {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("").trim();
            (!l.is_empty()).then_some((i + 1, l))
        });
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `closure <n>` header"))?;
        let mut head = header.split_whitespace();
        if head.next() != Some("closure") {
            return Err(Error::parse(hline, "expected `closure <n>`"));
        }
        let n: usize = head
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::parse(hline, "ground-set size must be an integer"))?;
        if n > MAX_GROUND {
            return Err(Error::parse(hline, format!("ground set {n} exceeds {MAX_GROUND}")));
        }
        let size = 1usize << n;
        let full = VertexSet::full(n).bits();
        let mut table = Vec::with_capacity(size);
        for (lno, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(Error::parse(lno, "expected `<subset-hex> <closure-hex>`"));
            }
            let hex =
                |t: &str| u32::from_str_radix(t, 16).map_err(|_| Error::parse(lno, format!("bad hex value `{t}`")));
            let (x, c) = (hex(toks[0])?, hex(toks[1])?);
            if x as usize != table.len() {
                return Err(Error::parse(
                    lno,
                    format!("expected subset {:x}, found {:x}", table.len(), x),
                ));
            }
            if c & !full != 0 {
                return Err(Error::parse(lno, "closure value leaves the ground set"));
            }
            table.push(VertexSet::from_bits(c));
        }
        if table.len() != size {
            return Err(Error::parse(
                0,
                format!("expected {size} table rows, found {}", table.len()),
            ));
        }
        ClosureOp::from_table(n, table)
    }
}
