//! QBF to 2IP: a quantified CNF becomes an acyclic USO whose 1-edges at
//! the minimum and maximum vertex are in phase iff the sentence is true.
//!
//! Every gadget `G` of dimension `d` keeps these invariants: USO, acyclic,
//! combed down in dimension 1, sink at `0^d`, source at `1^d`. A quantifier
//! level wraps two gadgets `F` (variable false) and `T` (variable true) into
//! a bigger cube: blocks indexed by the new coordinates hold copies of `F`,
//! `T` or the uniform USO, joined in a combed way, and a few red edges
//! between equal-outmap vertices of different blocks are then flipped.
//! Dimension 1 stays the combed gadget dimension throughout.

use std::fmt;

use crate::constructions::{combed_product, enumerate_usos, uniform};
use crate::cube::{check_oracle_dim, full_mask, Edge};
use crate::error::{Error, Result};
use crate::orientation::{is_acyclic, is_combed, Combed, DenseOrientation, EdgeSet, Orientation};
use crate::phases::{in_phase, is_flippable};
use crate::recognition::is_uso_fast;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// A closed prenex CNF. Variable `k` (1-based) is the `k`-th quantified
/// one; literals are signed variable indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QbfInstance {
    pub quantifiers: Vec<Quantifier>,
    pub clauses: Vec<Vec<i32>>,
}

impl QbfInstance {
    pub fn new(quantifiers: Vec<Quantifier>, clauses: Vec<Vec<i32>>) -> Result<Self> {
        let n = quantifiers.len() as i32;
        for c in &clauses {
            if let Some(&l) = c.iter().find(|&&l| l == 0 || l.abs() > n) {
                return Err(Error::Argument(format!("literal {l} out of range for {n} variables")));
            }
        }
        if quantifiers.len() > 63 {
            return Err(Error::Argument("at most 63 variables".into()));
        }
        Ok(QbfInstance { quantifiers, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.quantifiers.len()
    }

    /// CNF value under `assignment`, where bit `k-1` is the value of variable `k`.
    pub fn eval_matrix(&self, assignment: u64) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let value = assignment >> (l.unsigned_abs() - 1) & 1 == 1;
                value == (l > 0)
            })
        })
    }
}

impl fmt::Display for QbfInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, q) in self.quantifiers.iter().enumerate() {
            let sym = match q {
                Quantifier::Forall => 'A',
                Quantifier::Exists => 'E',
            };
            write!(f, "{sym}x{} ", k + 1)?;
        }
        let clauses: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> = c
                    .iter()
                    .map(|&l| if l > 0 { format!("x{l}") } else { format!("-x{}", -l) })
                    .collect();
                format!("({})", lits.join(" | "))
            })
            .collect();
        write!(f, ": {}", clauses.join(" & "))
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Reads a QDIMACS subset: optional `c` comments, a `p cnf <vars> <clauses>`
/// header, quantifier lines `a ... 0` / `e ... 0`, then one clause per line
/// terminated by `0`. Every variable must be quantified exactly once;
/// variables are renumbered in prefix order.
pub fn parse_qbf(text: &str) -> Result<QbfInstance> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut position: Vec<usize> = Vec::new();
    let mut quantifiers = Vec::new();
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let first = tokens.next().unwrap();
        let Some((vars, _, _)) = header else {
            if first != "p" || tokens.next() != Some("cnf") {
                return Err(parse_err(line, "expected header `p cnf <vars> <clauses>`"));
            }
            let mut num = || -> Result<usize> {
                tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(line, "malformed header"))
            };
            let (v, c) = (num()?, num()?);
            if tokens.next().is_some() {
                return Err(parse_err(line, "trailing tokens in header"));
            }
            if v > 63 {
                return Err(parse_err(line, "at most 63 variables are supported"));
            }
            header = Some((v, c, line));
            position = vec![0; v + 1];
            continue;
        };
        let quant = match first {
            "a" => Some(Quantifier::Forall),
            "e" => Some(Quantifier::Exists),
            _ => None,
        };
        let lits = quant.map_or_else(|| trimmed.split_whitespace().collect::<Vec<_>>(), |_| tokens.collect());
        let mut nums = Vec::with_capacity(lits.len());
        for t in lits {
            nums.push(t.parse::<i64>().map_err(|_| parse_err(line, format!("bad token `{t}`")))?);
        }
        if nums.last() != Some(&0) || nums[..nums.len() - 1].contains(&0) {
            return Err(parse_err(line, "line must end with a single 0"));
        }
        nums.pop();
        match quant {
            Some(q) => {
                if !clauses.is_empty() {
                    return Err(parse_err(line, "quantifier after clauses"));
                }
                for x in nums {
                    if x <= 0 || x as usize > vars {
                        return Err(parse_err(line, format!("undeclared variable {x}")));
                    }
                    if position[x as usize] != 0 {
                        return Err(parse_err(line, format!("variable {x} quantified twice")));
                    }
                    quantifiers.push(q);
                    position[x as usize] = quantifiers.len();
                }
            }
            None => {
                let mut clause = Vec::with_capacity(nums.len());
                for x in nums {
                    let var = x.unsigned_abs() as usize;
                    if var > vars {
                        return Err(parse_err(line, format!("undeclared variable {var}")));
                    }
                    if position[var] == 0 {
                        return Err(parse_err(line, format!("free variable {var}")));
                    }
                    let p = position[var] as i32;
                    clause.push(if x > 0 { p } else { -p });
                }
                clauses.push(clause);
            }
        }
    }
    let Some((vars, count, hline)) = header else {
        return Err(parse_err(text.lines().count().max(1), "missing header"));
    };
    if quantifiers.len() != vars {
        let free = (1..=vars).find(|&x| position[x] == 0).unwrap();
        return Err(parse_err(hline, format!("free variable {free}")));
    }
    if clauses.len() != count {
        return Err(parse_err(hline, format!("header declares {count} clauses, found {}", clauses.len())));
    }
    Ok(QbfInstance { quantifiers, clauses })
}

/// Truth value by full expansion of the prefix.
pub fn eval_qbf(inst: &QbfInstance) -> bool {
    fn go(inst: &QbfInstance, level: usize, assignment: u64) -> bool {
        if level == inst.num_vars() {
            return inst.eval_matrix(assignment);
        }
        let f = || go(inst, level + 1, assignment);
        let t = || go(inst, level + 1, assignment | 1 << level);
        match inst.quantifiers[level] {
            Quantifier::Forall => f() && t(),
            Quantifier::Exists => f() || t(),
        }
    }
    go(inst, 0, 0)
}

/// Outmaps of the true base gadget, vertex order. Lexicographically smallest
/// 3-dimensional USO with the five invariants and its min/max 1-edges in
/// phase; [`search_base_gadget`] re-derives it.
pub const TRUE_GADGET: [u32; 8] = [0, 3, 6, 1, 4, 5, 2, 7];

pub fn base_gadget(truth: bool) -> DenseOrientation {
    if truth {
        DenseOrientation::from_raw(3, TRUE_GADGET.to_vec())
    } else {
        uniform(3).expect("dimension 3 is valid")
    }
}

/// First 3-dimensional USO in enumeration order that qualifies as a true
/// base gadget.
pub fn search_base_gadget() -> Result<DenseOrientation> {
    for o in enumerate_usos(3)? {
        if check_invariants(&o).is_ok() && gadget_value(&o)? {
            return Ok(o);
        }
    }
    Err(Error::Gadget("no 3-dimensional true gadget exists".into()))
}

/// The 1-edges at the minimum and maximum vertex of `Q_n`.
pub fn designated_edges(n: usize) -> (Edge, Edge) {
    (Edge::canonical(0, 0), Edge::canonical(full_mask(n), 0))
}

/// Names the first gadget invariant that `o` violates.
pub fn check_invariants<O: Orientation + ?Sized>(o: &O) -> std::result::Result<(), String> {
    let n = o.dim();
    if o.outmap(0) != 0 {
        return Err("minimum vertex is not the sink".into());
    }
    if o.outmap(full_mask(n)) != full_mask(n) {
        return Err("maximum vertex is not the source".into());
    }
    if is_combed(o, 0) != Combed::Down {
        return Err("dimension 1 is not combed downwards".into());
    }
    if !is_uso_fast(o) {
        return Err("not a USO".into());
    }
    if !is_acyclic(o).map_err(|e| e.to_string())? {
        return Err("not acyclic".into());
    }
    Ok(())
}

/// Whether the designated 1-edges are in phase.
pub fn gadget_value<O: Orientation + ?Sized>(o: &O) -> Result<bool> {
    let (e, f) = designated_edges(o.dim());
    in_phase(o, e, f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Block {
    F,
    T,
    Uniform,
}

/// Inner vertex at which a red edge sits.
#[derive(Debug, Clone, Copy)]
enum Anchor {
    Min,
    MinPlusFirst,
    Max,
    MaxMinusFirst,
}

impl Anchor {
    fn vertex(self, d: usize) -> u64 {
        match self {
            Anchor::Min => 0,
            Anchor::MinPlusFirst => 1,
            Anchor::Max => full_mask(d),
            Anchor::MaxMinusFirst => full_mask(d) ^ 1,
        }
    }
}

/// A red edge along new coordinate `axis`, between blocks `low` and
/// `low | 1 << axis`.
#[derive(Debug, Clone, Copy)]
struct Red {
    axis: usize,
    anchor: Anchor,
    low: u64,
}

struct Wiring {
    width: usize,
    blocks: &'static [Block],
    red: &'static [Red],
}

// F, F' below; T above F'. Red edges join the two F sources, then the F'
// sink with the T sink.
const FORALL: Wiring = Wiring {
    width: 2,
    blocks: &[Block::F, Block::F, Block::Uniform, Block::T],
    red: &[
        Red { axis: 0, anchor: Anchor::Max, low: 0b00 },
        Red { axis: 1, anchor: Anchor::Min, low: 0b01 },
    ],
};

// Two copies each of F and T on the path 000 -> 001 -> 011 -> 111 of block
// indices; all other blocks uniform.
const EXISTS: Wiring = Wiring {
    width: 3,
    blocks: &[
        Block::F,
        Block::F,
        Block::Uniform,
        Block::T,
        Block::Uniform,
        Block::Uniform,
        Block::Uniform,
        Block::T,
    ],
    red: &[
        Red { axis: 0, anchor: Anchor::MinPlusFirst, low: 0b000 },
        Red { axis: 1, anchor: Anchor::Min, low: 0b001 },
        Red { axis: 1, anchor: Anchor::Max, low: 0b001 },
        Red { axis: 2, anchor: Anchor::MaxMinusFirst, low: 0b011 },
    ],
};

fn wiring(q: Quantifier) -> &'static Wiring {
    match q {
        Quantifier::Forall => &FORALL,
        Quantifier::Exists => &EXISTS,
    }
}

/// Number of cube dimensions a quantifier level adds.
pub fn level_width(q: Quantifier) -> usize {
    wiring(q).width
}

fn synth(w: &Wiring, f: &DenseOrientation, t: &DenseOrientation) -> Result<DenseOrientation> {
    let d = f.dim();
    if t.dim() != d {
        return Err(Error::Gadget(format!("gadget dimensions differ: {d} and {}", t.dim())));
    }
    if d < 3 {
        return Err(Error::Gadget(format!("gadget dimension {d} is below 3")));
    }
    for (name, g) in [("F", f), ("T", t)] {
        check_invariants(g).map_err(|m| Error::Gadget(format!("input {name}: {m}")))?;
    }
    let u = uniform(d)?;
    let inner: Vec<&DenseOrientation> = w
        .blocks
        .iter()
        .map(|b| match b {
            Block::F => f,
            Block::T => t,
            Block::Uniform => &u,
        })
        .collect();
    let mut out = combed_product(&inner, &uniform(w.width)?)?;
    let red: EdgeSet = w
        .red
        .iter()
        .map(|r| Edge::canonical(r.anchor.vertex(d) | r.low << d, d + r.axis))
        .collect();
    if let Err((a, b)) = red.check_matching() {
        return Err(Error::Gadget(format!("red edges {a} and {b} share a vertex")));
    }
    if let Some(e) = red.sorted().into_iter().find(|&e| !is_flippable(&out, e)) {
        return Err(Error::Gadget(format!("red edge {e} is not flippable")));
    }
    out.flip_in_place(&red)?;
    Ok(out)
}

/// `∀`-level: true iff both `f` and `t` are.
pub fn synth_forall(f: &DenseOrientation, t: &DenseOrientation) -> Result<DenseOrientation> {
    synth(&FORALL, f, t)
}

/// `∃`-level: true iff `f` or `t` is.
pub fn synth_exists(f: &DenseOrientation, t: &DenseOrientation) -> Result<DenseOrientation> {
    synth(&EXISTS, f, t)
}

/// Dimensions owned by the level of one variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Level {
    pub quantifier: Quantifier,
    /// 0-based position of the lowest owned dimension.
    pub offset: usize,
    pub width: usize,
}

/// Base gadget on dimensions 1..3, then the innermost variable's level, up
/// to the outermost variable on the highest dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetLayout {
    pub total_dim: usize,
    /// Indexed by variable, outermost first.
    pub levels: Vec<Level>,
}

pub const BASE_DIM: usize = 3;

pub fn build_layout(inst: &QbfInstance) -> GadgetLayout {
    let mut levels = vec![
        Level {
            quantifier: Quantifier::Forall,
            offset: 0,
            width: 0
        };
        inst.num_vars()
    ];
    let mut offset = BASE_DIM;
    for (k, &q) in inst.quantifiers.iter().enumerate().rev() {
        let width = level_width(q);
        levels[k] = Level { quantifier: q, offset, width };
        offset += width;
    }
    GadgetLayout { total_dim: offset, levels }
}

/// One outmap of the reduction's orientation, found by locating `v` level
/// by level from the outside in.
pub fn succinct_outmap(inst: &QbfInstance, layout: &GadgetLayout, v: u64) -> u64 {
    let mut out = 0u64;
    let mut assignment = 0u64;
    for (k, level) in layout.levels.iter().enumerate() {
        let d = level.offset;
        let w = wiring(level.quantifier);
        let x = v & full_mask(d);
        let u = v >> d & full_mask(level.width);
        out |= u << d;
        for r in w.red {
            if x == r.anchor.vertex(d) && u & !(1 << r.axis) == r.low {
                out ^= 1 << (d + r.axis);
            }
        }
        match w.blocks[u as usize] {
            Block::Uniform => return out | x,
            Block::F => {}
            Block::T => assignment |= 1 << k,
        }
    }
    let x = v & full_mask(BASE_DIM);
    let base = if inst.eval_matrix(assignment) {
        TRUE_GADGET[x as usize] as u64
    } else {
        x
    };
    out | base
}

/// The reduction's orientation as an outmap oracle.
#[derive(Debug, Clone)]
pub struct SuccinctGadget {
    pub instance: QbfInstance,
    pub layout: GadgetLayout,
}

impl Orientation for SuccinctGadget {
    fn dim(&self) -> usize {
        self.layout.total_dim
    }

    fn outmap(&self, v: u64) -> u64 {
        succinct_outmap(&self.instance, &self.layout, v)
    }
}

#[derive(Debug, Clone)]
pub struct ReductionOutput {
    pub oracle: SuccinctGadget,
    pub e: Edge,
    pub e_prime: Edge,
}

pub fn reduce_to_2ip(inst: &QbfInstance) -> Result<ReductionOutput> {
    let layout = build_layout(inst);
    check_oracle_dim(layout.total_dim)?;
    let (e, e_prime) = designated_edges(layout.total_dim);
    Ok(ReductionOutput {
        oracle: SuccinctGadget {
            instance: inst.clone(),
            layout,
        },
        e,
        e_prime,
    })
}

/// The same orientation built bottom-up with [`synth_forall`] and
/// [`synth_exists`]. Exponential in the number of variables.
pub fn materialize_reduction(inst: &QbfInstance) -> Result<DenseOrientation> {
    let layout = build_layout(inst);
    crate::cube::check_dense_dim(layout.total_dim).map_err(|e| Error::Resource(e.to_string()))?;
    fn go(inst: &QbfInstance, level: usize, assignment: u64) -> Result<DenseOrientation> {
        if level == inst.num_vars() {
            return Ok(base_gadget(inst.eval_matrix(assignment)));
        }
        let f = go(inst, level + 1, assignment)?;
        let t = go(inst, level + 1, assignment | 1 << level)?;
        synth(wiring(inst.quantifiers[level]), &f, &t)
    }
    go(inst, 0, 0)
}

/// Decides the instance through the reduction on a dense copy of the
/// oracle.
pub fn decide_by_reduction(inst: &QbfInstance) -> Result<bool> {
    let r = reduce_to_2ip(inst)?;
    let dense = r.oracle.materialize()?;
    in_phase(&dense, r.e, r.e_prime)
}
