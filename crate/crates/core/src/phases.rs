//! Direct-in-phaseness, phase partitions and the predicates built on them.
//!
//! Two `i`-edges are in direct phase when endpoints `v`, `w` on opposite
//! sides of dimension `i` agree on every other coordinate of the subcube they
//! span. In a USO this is the same as `(v⊕w) ∧ (O(v)⊕O(w))` being exactly
//! the bit of `i`. Phases are the classes of the transitive closure.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use crate::cube::{check_dense_dim, full_mask, neighbors_in_ni, render_bits, Edge, Face, Faces};
use crate::error::{Error, Result};
use crate::orientation::{flip, DenseOrientation, EdgeSet, Orientation};
use crate::recognition::{is_uso_fast, require_uso, sweep_chunks};
use crate::unionfind::DisjointSets;

/// Default limit on the number of edges visited by [`in_phase_search`].
pub const DEFAULT_SEARCH_BUDGET: usize = 1 << 22;

/// Vertices `v`, `w` whose incident `axis`-edges are in direct phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DirectPhaseCertificate {
    pub v: u64,
    pub w: u64,
    pub axis: usize,
}

impl DirectPhaseCertificate {
    pub fn edges(&self) -> (Edge, Edge) {
        (Edge::canonical(self.v, self.axis), Edge::canonical(self.w, self.axis))
    }
}

#[inline]
fn certified_axis(v: u64, w: u64, ov: u64, ow: u64) -> Option<usize> {
    let d = (v ^ w) & (ov ^ ow);
    (d.count_ones() == 1).then(|| d.trailing_zeros() as usize)
}

pub fn certificate_from_pair<O: Orientation + ?Sized>(
    o: &O,
    v: u64,
    w: u64,
) -> Result<Option<DirectPhaseCertificate>> {
    if v == w {
        return Err(Error::Argument("certificate needs two distinct vertices".into()));
    }
    Ok(certified_axis(v, w, o.outmap(v), o.outmap(w)).map(|axis| DirectPhaseCertificate { v, w, axis }))
}

/// The opposing endpoint pairs of `e` and `f` that certify direct phase.
pub fn certifying_pairs<O: Orientation + ?Sized>(o: &O, e: Edge, f: Edge) -> Result<Vec<(u64, u64)>> {
    if e.axis() != f.axis() {
        return Err(Error::Argument(format!("edges {e} and {f} have different dimensions")));
    }
    if e == f {
        return Err(Error::Argument(format!("edge {e} compared with itself")));
    }
    let axis = e.axis();
    Ok([(e.base(), f.upper()), (e.upper(), f.base())]
        .into_iter()
        .filter(|&(v, w)| certified_axis(v, w, o.outmap(v), o.outmap(w)) == Some(axis))
        .collect())
}

pub fn in_direct_phase<O: Orientation + ?Sized>(o: &O, e: Edge, f: Edge) -> Result<bool> {
    Ok(!certifying_pairs(o, e, f)?.is_empty())
}

/// Lemma-4.13-style test: the endpoints agree outside the edge's dimension.
pub fn is_flippable<O: Orientation + ?Sized>(o: &O, e: Edge) -> bool {
    (o.outmap(e.base()) ^ o.outmap(e.upper())) & !(1 << e.axis()) == 0
}

/// For every dimension, a partition of its `2^(n-1)` edges into phases.
/// Classes are numbered by their smallest edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhasePartition {
    n: usize,
    labels: Vec<Vec<u32>>,
    counts: Vec<usize>,
}

impl PhasePartition {
    fn from_sets(n: usize, mut sets: Vec<DisjointSets>) -> Self {
        let mut labels = Vec::with_capacity(n);
        let mut counts = Vec::with_capacity(n);
        for s in sets.iter_mut() {
            let (l, k) = s.labels();
            labels.push(l);
            counts.push(k);
        }
        PhasePartition { n, labels, counts }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn class_count(&self, axis: usize) -> usize {
        self.counts[axis]
    }

    pub fn total_classes(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn label(&self, e: Edge) -> usize {
        self.labels[e.axis()][e.index()] as usize
    }

    pub fn same_class(&self, e: Edge, f: Edge) -> bool {
        e.axis() == f.axis() && self.label(e) == self.label(f)
    }

    /// Classes of one dimension, ordered by smallest edge; edges within a
    /// class ascend by base vertex.
    pub fn classes(&self, axis: usize) -> Vec<Vec<Edge>> {
        let mut out = vec![Vec::new(); self.counts[axis]];
        for (idx, &l) in self.labels[axis].iter().enumerate() {
            out[l as usize].push(Edge::from_index(idx, axis));
        }
        out
    }

    pub fn class_of(&self, e: Edge) -> Vec<Edge> {
        let l = self.labels[e.axis()][e.index()];
        self.labels[e.axis()]
            .iter()
            .enumerate()
            .filter(|(_, &m)| m == l)
            .map(|(idx, _)| Edge::from_index(idx, e.axis()))
            .collect()
    }

    /// `Err(e)` names an edge whose class is split by `s`.
    pub fn check_union_of_classes(&self, s: &EdgeSet) -> std::result::Result<(), Edge> {
        for axis in s.axes() {
            let mut inside = vec![0usize; self.counts[axis]];
            let mut sizes = vec![0usize; self.counts[axis]];
            for &l in &self.labels[axis] {
                sizes[l as usize] += 1;
            }
            for e in s.iter().filter(|e| e.axis() == axis) {
                inside[self.label(*e)] += 1;
            }
            if let Some(bad) = s
                .sorted()
                .into_iter()
                .find(|e| e.axis() == axis && inside[self.label(*e)] != sizes[self.label(*e)])
            {
                return Err(bad);
            }
        }
        Ok(())
    }

    /// `.phz` text: per dimension `dim <i> classes <k>`, then one line per
    /// class listing its edges as `<base-bits>:<i>`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for axis in 0..self.n {
            writeln!(out, "dim {} classes {}", axis + 1, self.counts[axis]).unwrap();
            for class in self.classes(axis) {
                let line: Vec<String> = class.iter().map(|e| e.render(self.n)).collect();
                writeln!(out, "{}", line.join(" ")).unwrap();
            }
        }
        out
    }
}

fn empty_sets(n: usize) -> Vec<DisjointSets> {
    (0..n).map(|_| DisjointSets::new(1 << (n - 1))).collect()
}

/// Phases restricted to the certificates of a chosen set of vertex pairs
/// (the "T-phases"). No USO validation.
pub fn t_phases<O, I>(o: &O, pairs: I) -> PhasePartition
where
    O: Orientation + ?Sized,
    I: IntoIterator<Item = (u64, u64)>,
{
    let n = o.dim();
    let mut sets = empty_sets(n);
    for (v, w) in pairs {
        if let Some(axis) = certified_axis(v, w, o.outmap(v), o.outmap(w)) {
            sets[axis].union(Edge::canonical(v, axis).index(), Edge::canonical(w, axis).index());
        }
    }
    PhasePartition::from_sets(n, sets)
}

/// Compares all `C(2^n, 2)` vertex pairs. Returns the partition and the
/// number of pair checks.
pub fn compute_phases_naive_counted<O: Orientation + ?Sized>(o: &O) -> Result<(PhasePartition, u64)> {
    let n = o.dim();
    check_dense_dim(n)?;
    require_uso(o)?;
    let size = 1u64 << n;
    let maps: Vec<u64> = (0..size).map(|v| o.outmap(v)).collect();
    let mut sets = empty_sets(n);
    let mut checks = 0u64;
    for v in 0..size {
        for w in v + 1..size {
            checks += 1;
            if let Some(axis) = certified_axis(v, w, maps[v as usize], maps[w as usize]) {
                sets[axis].union(Edge::canonical(v, axis).index(), Edge::canonical(w, axis).index());
            }
        }
    }
    Ok((PhasePartition::from_sets(n, sets), checks))
}

pub fn compute_phases_naive<O: Orientation + ?Sized>(o: &O) -> Result<PhasePartition> {
    compute_phases_naive_counted(o).map(|r| r.0)
}

/// Compares only the extremes of every face of dimension at least one.
/// Workers collect certified pairs; the caller's thread owns the union-find.
pub fn compute_phases_fast_counted<O: Orientation + ?Sized>(
    o: &O,
    jobs: usize,
) -> Result<(PhasePartition, u64)> {
    let n = o.dim();
    check_dense_dim(n)?;
    require_uso(o)?;
    let full = full_mask(n);
    let parts = sweep_chunks(n, jobs, |start, end| {
        let mut found: Vec<(u8, u32, u32)> = Vec::new();
        let mut checks = 0u64;
        for f in Faces::range(n, start, end) {
            if f.fixed_mask() == full {
                continue;
            }
            checks += 1;
            let (lo, hi) = f.extremes();
            if let Some(axis) = certified_axis(lo, hi, o.outmap(lo), o.outmap(hi)) {
                found.push((
                    axis as u8,
                    Edge::canonical(lo, axis).index() as u32,
                    Edge::canonical(hi, axis).index() as u32,
                ));
            }
        }
        (found, checks)
    });
    let mut sets = empty_sets(n);
    let mut checks = 0;
    for (found, c) in parts {
        checks += c;
        for (axis, a, b) in found {
            sets[axis as usize].union(a as usize, b as usize);
        }
    }
    Ok((PhasePartition::from_sets(n, sets), checks))
}

pub fn compute_phases_fast<O: Orientation + ?Sized>(o: &O) -> Result<PhasePartition> {
    compute_phases_fast_counted(o, 1).map(|r| r.0)
}

/// Every direct-phase certificate of one dimension, by brute force.
pub fn certificates<O: Orientation + ?Sized>(o: &O, axis: usize) -> Vec<DirectPhaseCertificate> {
    let n = o.dim();
    let bit = 1u64 << axis;
    let mut out = Vec::new();
    for v in (0..1u64 << n).filter(|v| v & bit == 0) {
        for w in (0..1u64 << n).filter(|w| w & bit != 0) {
            if certified_axis(v, w, o.outmap(v), o.outmap(w)) == Some(axis) {
                out.push(DirectPhaseCertificate { v, w, axis });
            }
        }
    }
    out
}

fn check_same_axis(e: Edge, f: Edge, n: usize) -> Result<()> {
    e.check_in(n)?;
    f.check_in(n)?;
    if e.axis() != f.axis() {
        return Err(Error::Argument(format!("edges {e} and {f} have different dimensions")));
    }
    Ok(())
}

/// 2IP on a materializable orientation: computes the partition and looks
/// both edges up.
pub fn in_phase<O: Orientation + ?Sized>(o: &O, e: Edge, f: Edge) -> Result<bool> {
    check_same_axis(e, f, o.dim())?;
    Ok(compute_phases_fast(o)?.same_class(e, f))
}

/// 2IP by breadth-first search over direct-in-phaseness, querying the
/// outmap on demand. Memory is proportional to the visited edges; the search
/// fails with [`Error::Resource`] once more than `budget` edges are visited.
pub fn in_phase_search<O: Orientation + ?Sized>(o: &O, e: Edge, f: Edge, budget: usize) -> Result<bool> {
    let n = o.dim();
    check_same_axis(e, f, n)?;
    if n > crate::cube::N_MAX {
        return Err(Error::Resource(format!(
            "partner scan over 2^{} vertices per edge is out of range",
            n - 1
        )));
    }
    if e == f {
        return Ok(true);
    }
    let axis = e.axis();
    let bit = 1u64 << axis;
    let mut seen: HashSet<Edge> = HashSet::from([e]);
    let mut queue = VecDeque::from([e]);
    while let Some(cur) = queue.pop_front() {
        for v in cur.endpoints() {
            let ov = o.outmap(v);
            let side = v & bit;
            // partners lie on the other side of `axis`
            for rest in 0..1u64 << (n - 1) {
                let w = Edge::from_index(rest as usize, axis).base() | (side ^ bit);
                if certified_axis(v, w, ov, o.outmap(w)) != Some(axis) {
                    continue;
                }
                let g = Edge::canonical(w, axis);
                if g == f {
                    return Ok(true);
                }
                if seen.insert(g) {
                    if seen.len() > budget {
                        return Err(Error::Resource(format!("search budget of {budget} edges exceeded")));
                    }
                    queue.push_back(g);
                }
            }
        }
    }
    Ok(false)
}

/// Whether `s ⊆ E_i` is a union of `i`-phases. The answer is cross-checked
/// against recognizing `O ⊗ S`.
pub fn is_union_of_phases<O: Orientation + ?Sized>(o: &O, s: &EdgeSet) -> Result<bool> {
    let axes = s.axes();
    if axes.len() > 1 {
        return Err(Error::Argument("edge set spans several dimensions".into()));
    }
    for e in s.iter() {
        e.check_in(o.dim())?;
    }
    let partition = compute_phases_fast(o)?;
    let union = partition.check_union_of_classes(s).is_ok();
    let flipped = flip(o, s)?;
    if union != is_uso_fast(&flipped) {
        return Err(Error::InvariantViolated(
            "single-dimension flip disagrees with the phase partition".into(),
        ));
    }
    Ok(union)
}

/// Whether the edges of `class` induce a connected subgraph of `N_i`.
pub fn phase_connected_in_ni(n: usize, class: &[Edge]) -> bool {
    let Some(&first) = class.first() else {
        return true;
    };
    let members: HashSet<Edge> = class.iter().copied().collect();
    let mut seen = HashSet::from([first]);
    let mut stack = vec![first];
    while let Some(e) = stack.pop() {
        for g in neighbors_in_ni(e, n) {
            if members.contains(&g) && seen.insert(g) {
                stack.push(g);
            }
        }
    }
    seen.len() == members.len()
}

/// Every edge leaving `f` in a given dimension points the same way.
pub fn is_hypervertex<O: Orientation + ?Sized>(o: &O, f: &Face) -> bool {
    let fixed = f.fixed_mask();
    let mut verts = f.vertices();
    let Some(first) = verts.next() else {
        return true;
    };
    let want = o.outmap(first) & fixed;
    verts.all(|v| o.outmap(v) & fixed == want)
}

/// Flips a matching `h`, succeeding iff `h` is a union of phases. The
/// outcome is asserted against recognizing `O ⊗ H`.
pub fn flip_matching_checked<O: Orientation + ?Sized>(o: &O, h: &EdgeSet) -> Result<DenseOrientation> {
    for e in h.iter() {
        e.check_in(o.dim())?;
    }
    if let Err((a, b)) = h.check_matching() {
        return Err(Error::NotAMatching(a, b));
    }
    let partition = compute_phases_fast(o)?;
    let verdict = partition.check_union_of_classes(h);
    let flipped = flip(o, h)?;
    if verdict.is_ok() != is_uso_fast(&flipped) {
        return Err(Error::InvariantViolated(
            "matching flip disagrees with the phase partition".into(),
        ));
    }
    match verdict {
        Ok(()) => Ok(flipped),
        Err(e) => Err(Error::NotUnionOfPhases(e)),
    }
}

/// Renders a class as `<bits>:<dim>` tokens.
pub fn render_class(n: usize, class: &[Edge]) -> String {
    class
        .iter()
        .map(|e| format!("{}:{}", render_bits(e.base(), n), e.dim()))
        .collect::<Vec<_>>()
        .join(" ")
}
