//! Orientations of `Q_n` given by their outmaps.
//!
//! `outmap(v)` has bit `i` set iff the `i`-edge at `v` leaves `v`.

use std::collections::HashSet;
use std::fmt;
use std::fmt::Write as _;

use crate::cube::{
    check_dense_dim, check_oracle_dim, extract_bits, full_mask, parse_bits, render_bits, Edge,
    Face,
};
use crate::error::{Error, Result};

pub trait Orientation: Sync {
    fn dim(&self) -> usize;

    fn outmap(&self, v: u64) -> u64;

    /// Evaluates every outmap into a stored orientation, validating
    /// consistency on the way.
    fn materialize(&self) -> Result<DenseOrientation> {
        let n = self.dim();
        check_dense_dim(n).map_err(|e| Error::Resource(e.to_string()))?;
        DenseOrientation::from_fn(n, |v| self.outmap(v))
    }
}

impl<T: Orientation + ?Sized> Orientation for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn outmap(&self, v: u64) -> u64 {
        (**self).outmap(v)
    }
}

/// Flat array of `2^n` outmaps indexed by vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseOrientation {
    n: usize,
    outmaps: Vec<u32>,
}

impl fmt::Debug for DenseOrientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let maps: Vec<String> = self.outmaps.iter().map(|&o| render_bits(o as u64, self.n)).collect();
        write!(f, "DenseOrientation(n={}, [{}])", self.n, maps.join(" "))
    }
}

impl DenseOrientation {
    pub fn new(n: usize, outmaps: Vec<u32>) -> Result<Self> {
        check_dense_dim(n)?;
        if outmaps.len() != 1 << n {
            return Err(Error::Argument(format!(
                "expected {} outmaps, got {}",
                1u64 << n,
                outmaps.len()
            )));
        }
        let mask = full_mask(n) as u32;
        if let Some(v) = outmaps.iter().position(|&o| o & !mask != 0) {
            return Err(Error::Argument(format!("outmap of vertex {v} exceeds dimension {n}")));
        }
        let o = DenseOrientation { n, outmaps };
        if let Some(edge) = first_inconsistent_edge(&o) {
            return Err(Error::InvalidOrientation { edge });
        }
        Ok(o)
    }

    pub fn from_fn(n: usize, f: impl Fn(u64) -> u64) -> Result<Self> {
        check_dense_dim(n)?;
        let outmaps = (0..1u64 << n).map(|v| f(v) as u32).collect();
        Self::new(n, outmaps)
    }

    /// Caller guarantees consistency (e.g. the result of flipping a
    /// consistent orientation).
    pub(crate) fn from_raw(n: usize, outmaps: Vec<u32>) -> Self {
        debug_assert_eq!(outmaps.len(), 1 << n);
        DenseOrientation { n, outmaps }
    }

    pub fn outmaps(&self) -> &[u32] {
        &self.outmaps
    }

    pub fn vertex_count(&self) -> u64 {
        1 << self.n
    }

    /// Reverses every edge of `s` in place.
    pub fn flip_in_place(&mut self, s: &EdgeSet) -> Result<()> {
        for e in s.iter() {
            e.check_in(self.n)?;
        }
        for e in s.iter() {
            let bit = 1u32 << e.axis();
            self.outmaps[e.base() as usize] ^= bit;
            self.outmaps[e.upper() as usize] ^= bit;
        }
        Ok(())
    }

    pub(crate) fn flip_edge(&mut self, e: Edge) {
        let bit = 1u32 << e.axis();
        self.outmaps[e.base() as usize] ^= bit;
        self.outmaps[e.upper() as usize] ^= bit;
    }

    /// Text form: `uso <n>` then one outmap per line in vertex order.
    pub fn store(&self) -> String {
        let mut out = String::with_capacity((self.n + 1) << self.n);
        writeln!(out, "uso {}", self.n).unwrap();
        for &o in &self.outmaps {
            out.push_str(&render_bits(o as u64, self.n));
            out.push('\n');
        }
        out
    }

    pub fn load(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let mut words = header.split_whitespace();
        let n: usize = match (words.next(), words.next(), words.next()) {
            (Some("uso"), Some(n), None) => n.parse().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad dimension {n:?}"),
            })?,
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    msg: "expected header `uso <n>`".into(),
                })
            }
        };
        check_dense_dim(n).map_err(|e| Error::Parse {
            line: 1,
            msg: e.to_string(),
        })?;
        let mut outmaps = Vec::with_capacity(1 << n);
        for (k, line) in lines {
            let line = line.trim_end_matches('\r');
            if outmaps.len() == 1 << n {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(Error::Parse {
                    line: k + 1,
                    msg: "more than 2^n outmap lines".into(),
                });
            }
            if line.len() != n {
                return Err(Error::Parse {
                    line: k + 1,
                    msg: format!("expected {n} characters, found {}", line.len()),
                });
            }
            let (o, _) = parse_bits(line).ok_or_else(|| Error::Parse {
                line: k + 1,
                msg: format!("invalid character in {line:?}"),
            })?;
            outmaps.push(o as u32);
        }
        if outmaps.len() != 1 << n {
            return Err(Error::Parse {
                line: outmaps.len() + 2,
                msg: format!("expected {} outmap lines, found {}", 1u64 << n, outmaps.len()),
            });
        }
        DenseOrientation::new(n, outmaps)
    }
}

impl Orientation for DenseOrientation {
    #[inline]
    fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn outmap(&self, v: u64) -> u64 {
        self.outmaps[v as usize] as u64
    }

    fn materialize(&self) -> Result<DenseOrientation> {
        Ok(self.clone())
    }
}

/// Orientation computed on demand by a pure function. Never caches.
pub struct OracleOrientation<F> {
    n: usize,
    f: F,
}

impl<F: Fn(u64) -> u64 + Sync> OracleOrientation<F> {
    pub fn new(n: usize, f: F) -> Result<Self> {
        check_oracle_dim(n)?;
        Ok(OracleOrientation { n, f })
    }
}

impl<F: Fn(u64) -> u64 + Sync> Orientation for OracleOrientation<F> {
    fn dim(&self) -> usize {
        self.n
    }

    fn outmap(&self, v: u64) -> u64 {
        (self.f)(v) & full_mask(self.n)
    }
}

impl<F> fmt::Debug for OracleOrientation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OracleOrientation(n={})", self.n)
    }
}

/// First edge (in vertex, then dimension order) whose endpoints disagree.
pub fn first_inconsistent_edge<O: Orientation + ?Sized>(o: &O) -> Option<Edge> {
    let n = o.dim();
    for v in 0..1u64 << n {
        let ov = o.outmap(v);
        for i in 0..n {
            let w = v | 1 << i;
            if w != v && (ov ^ o.outmap(w)) >> i & 1 == 0 {
                return Some(Edge::canonical(v, i));
            }
        }
    }
    None
}

pub fn check_consistency<O: Orientation + ?Sized>(o: &O) -> bool {
    first_inconsistent_edge(o).is_none()
}

/// A set of canonical edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeSet {
    edges: HashSet<Edge>,
}

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, e: Edge) -> bool {
        self.edges.insert(e)
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    /// Edges in `(base, axis)` order.
    pub fn sorted(&self) -> Vec<Edge> {
        let mut v: Vec<Edge> = self.edges.iter().copied().collect();
        v.sort_by_key(|e| (e.base(), e.axis()));
        v
    }

    /// The distinct axes present, ascending.
    pub fn axes(&self) -> Vec<usize> {
        let mut a: Vec<usize> = self.edges.iter().map(|e| e.axis()).collect();
        a.sort_unstable();
        a.dedup();
        a
    }

    /// `Err((e, f))` for the first two edges sharing an endpoint.
    pub fn check_matching(&self) -> std::result::Result<(), (Edge, Edge)> {
        let mut owner = std::collections::HashMap::new();
        for e in self.sorted() {
            for v in e.endpoints() {
                if let Some(&f) = owner.get(&v) {
                    return Err((f, e));
                }
                owner.insert(v, e);
            }
        }
        Ok(())
    }

    /// Lines `<base-bits> <dim>`.
    pub fn store(&self, n: usize) -> String {
        let mut out = String::new();
        for e in self.sorted() {
            writeln!(out, "{} {}", render_bits(e.base(), n), e.dim()).unwrap();
        }
        out
    }

    /// Parses the `.eds` format. Every line must name a canonical base
    /// vertex of length `n`.
    pub fn load(text: &str, n: usize) -> Result<Self> {
        let mut set = EdgeSet::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse { line: k + 1, msg };
            let mut parts = line.split_whitespace();
            let (bits, dim) = match (parts.next(), parts.next(), parts.next()) {
                (Some(b), Some(d), None) => (b, d),
                _ => return Err(err(format!("expected `<vertex-bits> <dim>`, got {line:?}"))),
            };
            let (v, len) = parse_bits(bits).ok_or_else(|| err(format!("bad vertex {bits:?}")))?;
            if len != n {
                return Err(err(format!("vertex has {len} bits, expected {n}")));
            }
            let dim: usize = dim.parse().map_err(|_| err(format!("bad dimension {dim:?}")))?;
            if dim == 0 || dim > n {
                return Err(err(format!("dimension {dim} not in 1..={n}")));
            }
            if v >> (dim - 1) & 1 == 1 {
                return Err(err(format!("{bits} is not the lower endpoint of its {dim}-edge")));
            }
            set.insert(Edge::canonical(v, dim - 1));
        }
        Ok(set)
    }
}

impl FromIterator<Edge> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        EdgeSet {
            edges: iter.into_iter().collect(),
        }
    }
}

impl Extend<Edge> for EdgeSet {
    fn extend<I: IntoIterator<Item = Edge>>(&mut self, iter: I) {
        self.edges.extend(iter)
    }
}

/// All edges of one dimension.
pub fn all_edges(n: usize, axis: usize) -> EdgeSet {
    (0..1usize << (n - 1)).map(|k| Edge::from_index(k, axis)).collect()
}

/// `O ⊗ S`.
pub fn flip<O: Orientation + ?Sized>(o: &O, s: &EdgeSet) -> Result<DenseOrientation> {
    let mut d = o.materialize()?;
    d.flip_in_place(s)?;
    Ok(d)
}

/// The orientation induced on a face, with the spanned dimensions relabeled
/// in increasing order.
pub fn restrict<O: Orientation + ?Sized>(o: &O, f: &Face) -> Result<DenseOrientation> {
    if f.ambient_dim() != o.dim() {
        return Err(Error::Face(format!(
            "face {f} does not belong to Q_{}",
            o.dim()
        )));
    }
    let k = f.dim();
    if k == 0 {
        return Err(Error::Face(format!("face {f} is 0-dimensional")));
    }
    check_dense_dim(k)?;
    let free = f.free_mask();
    let outmaps = (0..1u64 << k)
        .map(|x| extract_bits(o.outmap(f.embed(x)), free) as u32)
        .collect();
    Ok(DenseOrientation::from_raw(k, outmaps))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combed {
    Down,
    Up,
    NotCombed,
}

pub fn is_combed<O: Orientation + ?Sized>(o: &O, axis: usize) -> Combed {
    let n = o.dim();
    let bit = 1u64 << axis;
    let (mut down, mut up) = (true, true);
    for v in 0..1u64 << n {
        let d = o.outmap(v) & bit;
        if d != v & bit {
            down = false;
        }
        if d == v & bit {
            up = false;
        }
        if !down && !up {
            return Combed::NotCombed;
        }
    }
    if down {
        Combed::Down
    } else {
        Combed::Up
    }
}

/// Cycle check by Kahn's algorithm on the `2^n`-vertex digraph.
pub fn is_acyclic<O: Orientation + ?Sized>(o: &O) -> Result<bool> {
    let n = o.dim();
    check_dense_dim(n).map_err(|e| Error::Resource(e.to_string()))?;
    let size = 1usize << n;
    let maps: Vec<u32> = (0..size as u64).map(|v| o.outmap(v) as u32).collect();
    let mut indeg: Vec<u8> = maps.iter().map(|&m| (n as u32 - m.count_ones()) as u8).collect();
    let mut queue: Vec<u32> = (0..size as u32).filter(|&v| indeg[v as usize] == 0).collect();
    let mut done = 0usize;
    while let Some(v) = queue.pop() {
        done += 1;
        let mut out = maps[v as usize];
        while out != 0 {
            let i = out.trailing_zeros();
            out &= out - 1;
            let w = (v ^ 1 << i) as usize;
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push(w as u32);
            }
        }
    }
    Ok(done == size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{schurr, uniform};

    #[test]
    fn flip_examples() {
        let u2 = uniform(2).unwrap();
        assert_eq!(flip(&u2, &EdgeSet::new()).unwrap(), u2);
        let u1 = uniform(1).unwrap();
        let f = flip(&u1, &[Edge::canonical(0, 0)].into_iter().collect()).unwrap();
        assert_eq!(f.outmaps(), &[1, 0]);
        // schurr(2): O(v)_1 = v1^v2, O(v)_2 = v2; flipping E_2 reverses the combing
        let s2 = schurr(2).unwrap();
        assert_eq!(s2.outmap(0b10) >> 1 & 1, 1);
        let f = flip(&s2, &all_edges(2, 1)).unwrap();
        assert_eq!(f.outmap(0b10) >> 1 & 1, 0);
        assert_eq!(is_combed(&f, 1), Combed::Up);
    }

    #[test]
    fn flip_is_involution() {
        let s = schurr(4).unwrap();
        let set: EdgeSet = [Edge::canonical(3, 0), Edge::canonical(5, 3), Edge::canonical(0, 1)]
            .into_iter()
            .collect();
        let once = flip(&s, &set).unwrap();
        assert_ne!(once, s);
        assert_eq!(flip(&once, &set).unwrap(), s);
        assert!(flip(&s, &[Edge::canonical(0, 5)].into_iter().collect()).is_err());
    }

    #[test]
    fn restrict_examples() {
        let u3 = uniform(3).unwrap();
        assert_eq!(restrict(&u3, &Face::full(3)).unwrap(), u3);
        assert_eq!(restrict(&u3, &"0**".parse().unwrap()).unwrap(), uniform(2).unwrap());
        assert_eq!(restrict(&schurr(3).unwrap(), &"0**".parse().unwrap()).unwrap(), schurr(2).unwrap());
        assert!(restrict(&u3, &"0*".parse().unwrap()).is_err());
    }

    #[test]
    fn flip_commutes_with_restrict() {
        let s = schurr(4).unwrap();
        let f: Face = "*1*0".parse().unwrap();
        let set: EdgeSet = f.edges(0).into_iter().take(1).chain(f.edges(2)).collect();
        let a = restrict(&flip(&s, &set).unwrap(), &f).unwrap();
        let local: EdgeSet = set
            .iter()
            .map(|e| {
                let x = extract_bits(e.base(), f.free_mask());
                let axis = (f.free_mask() & ((1 << e.axis()) - 1)).count_ones() as usize;
                Edge::canonical(x, axis)
            })
            .collect();
        let b = flip(&restrict(&s, &f).unwrap(), &local).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn combed_examples() {
        let u3 = uniform(3).unwrap();
        for i in 0..3 {
            assert_eq!(is_combed(&u3, i), Combed::Down);
        }
        let s3 = schurr(3).unwrap();
        assert_eq!(is_combed(&s3, 2), Combed::Down);
        assert_eq!(is_combed(&schurr(2).unwrap(), 0), Combed::NotCombed);
    }

    fn cyclic_square() -> DenseOrientation {
        // 00 -> 10 -> 11 -> 01 -> 00
        DenseOrientation::new(2, vec![0b01, 0b10, 0b10, 0b01]).unwrap()
    }

    #[test]
    fn acyclicity() {
        for n in 1..=8 {
            assert!(is_acyclic(&uniform(n).unwrap()).unwrap());
        }
        assert!(is_acyclic(&schurr(3).unwrap()).unwrap());
        assert!(!is_acyclic(&cyclic_square()).unwrap());
    }

    #[test]
    fn consistency() {
        let bad = OracleOrientation::new(1, |_| 0).unwrap();
        assert!(!check_consistency(&bad));
        assert_eq!(first_inconsistent_edge(&bad), Some(Edge::canonical(0, 0)));
        assert!(check_consistency(&schurr(4).unwrap()));
        let s = flip(&schurr(4).unwrap(), &all_edges(4, 2)).unwrap();
        assert!(check_consistency(&s));
        assert!(matches!(bad.materialize(), Err(Error::InvalidOrientation { .. })));
    }

    #[test]
    fn text_format() {
        let o = DenseOrientation::load("uso 1\n1\n0\n").unwrap();
        assert_eq!(o.outmaps(), &[1, 0]);
        assert_eq!(uniform(2).unwrap().store(), "uso 2\n00\n10\n01\n11\n");
        assert!(matches!(
            DenseOrientation::load("uso 2\n00\n00\n01\n11\n"),
            Err(Error::InvalidOrientation { .. })
        ));
        assert!(matches!(DenseOrientation::load("usa 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            DenseOrientation::load("uso 2\n00\n1\n01\n11\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            DenseOrientation::load("uso 2\n00\n10\n0x\n11\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            DenseOrientation::load("uso 2\n00\n10\n01\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn edge_set_format() {
        let set: EdgeSet = [Edge::canonical(0b010, 0), Edge::canonical(0b001, 2)].into_iter().collect();
        let text = set.store(3);
        assert_eq!(text, "100 3\n010 1\n");
        assert_eq!(EdgeSet::load(&text, 3).unwrap(), set);
        assert!(EdgeSet::load("110 1\n", 3).is_err());
        assert!(EdgeSet::load("11 1\n", 3).is_err());
        let m: EdgeSet = [Edge::canonical(0, 0), Edge::canonical(0, 1)].into_iter().collect();
        assert!(m.check_matching().is_err());
    }
}
