//! Vertices, faces and edges of the hypercube `Q_n`.
//!
//! A vertex is a `u64` bit mask: coordinate `v_1` lives in bit 0, `v_2` in
//! bit 1, and so on. The library indexes dimensions by their 0-based bit
//! position (`axis`); text formats and the CLI use 1-based dimensions and
//! render bit strings with `v_1` first.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest dimension for dense (materialized) operations.
pub const N_MAX: usize = 24;

/// Largest dimension an oracle orientation may have.
pub const ORACLE_N_MAX: usize = 63;

pub fn check_dense_dim(n: usize) -> Result<()> {
    if n == 0 || n > N_MAX {
        return Err(Error::Dimension(format!(
            "dimension {n} outside 1..={N_MAX}"
        )));
    }
    Ok(())
}

pub fn check_oracle_dim(n: usize) -> Result<()> {
    if n == 0 || n > ORACLE_N_MAX {
        return Err(Error::Dimension(format!(
            "dimension {n} outside 1..={ORACLE_N_MAX}"
        )));
    }
    Ok(())
}

#[inline]
pub fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Renders `v` as `n` characters, dimension 1 first.
pub fn render_bits(v: u64, n: usize) -> String {
    (0..n)
        .map(|i| if v >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parses a `0`/`1` string written dimension 1 first. Returns `(value, n)`.
pub fn parse_bits(s: &str) -> Option<(u64, usize)> {
    if s.is_empty() || s.len() > ORACLE_N_MAX {
        return None;
    }
    let mut v = 0u64;
    for (i, c) in s.chars().enumerate() {
        match c {
            '0' => {}
            '1' => v |= 1 << i,
            _ => return None,
        }
    }
    Some((v, s.len()))
}

/// Gathers the bits of `value` selected by `mask` into the low bits.
#[inline]
pub fn extract_bits(value: u64, mut mask: u64) -> u64 {
    let mut out = 0;
    let mut k = 0;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if value & low != 0 {
            out |= 1 << k;
        }
        k += 1;
        mask ^= low;
    }
    out
}

/// Inverse of [`extract_bits`]: spreads the low bits of `value` over `mask`.
#[inline]
pub fn deposit_bits(value: u64, mut mask: u64) -> u64 {
    let mut out = 0;
    let mut k = 0;
    while mask != 0 {
        let low = mask & mask.wrapping_neg();
        if value >> k & 1 == 1 {
            out |= low;
        }
        k += 1;
        mask ^= low;
    }
    out
}

/// A face `f ∈ {0,1,*}^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Face {
    n: u8,
    fixed_mask: u64,
    fixed_values: u64,
}

impl Face {
    pub fn new(n: usize, fixed_mask: u64, fixed_values: u64) -> Result<Self> {
        check_oracle_dim(n)?;
        if fixed_mask & !full_mask(n) != 0 {
            return Err(Error::Face(format!(
                "fixed mask {fixed_mask:#x} exceeds dimension {n}"
            )));
        }
        if fixed_values & !fixed_mask != 0 {
            return Err(Error::Face(
                "fixed values set on a free coordinate".to_string(),
            ));
        }
        Ok(Self {
            n: n as u8,
            fixed_mask,
            fixed_values,
        })
    }

    pub fn full(n: usize) -> Self {
        Self {
            n: n as u8,
            fixed_mask: 0,
            fixed_values: 0,
        }
    }

    /// The 0-dimensional face `{v}`.
    pub fn vertex(n: usize, v: u64) -> Self {
        let m = full_mask(n);
        Self {
            n: n as u8,
            fixed_mask: m,
            fixed_values: v & m,
        }
    }

    /// The 1-dimensional face spanned by an edge.
    pub fn of_edge(n: usize, e: Edge) -> Self {
        let m = full_mask(n) & !(1 << e.axis());
        Self {
            n: n as u8,
            fixed_mask: m,
            fixed_values: e.base() & m,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n as usize
    }

    pub fn fixed_mask(&self) -> u64 {
        self.fixed_mask
    }

    pub fn fixed_values(&self) -> u64 {
        self.fixed_values
    }

    /// Mask of the spanned (free) coordinates.
    pub fn free_mask(&self) -> u64 {
        full_mask(self.n as usize) & !self.fixed_mask
    }

    pub fn dim(&self) -> usize {
        self.free_mask().count_ones() as usize
    }

    pub fn vertex_count(&self) -> u64 {
        1u64 << self.dim()
    }

    pub fn contains(&self, v: u64) -> bool {
        v & self.fixed_mask == self.fixed_values
    }

    /// `(min, max)`: free coordinates all 0, resp. all 1.
    pub fn extremes(&self) -> (u64, u64) {
        (self.fixed_values, self.fixed_values | self.free_mask())
    }

    /// Global vertex for the local coordinates `x` of this face.
    pub fn embed(&self, x: u64) -> u64 {
        self.fixed_values | deposit_bits(x, self.free_mask())
    }

    pub fn vertices(&self) -> impl Iterator<Item = u64> + '_ {
        let free = self.free_mask();
        let base = self.fixed_values;
        (0..self.vertex_count()).map(move |x| base | deposit_bits(x, free))
    }

    /// Canonical edges of dimension `axis` inside this face. Empty unless
    /// `axis` is spanned.
    pub fn edges(&self, axis: usize) -> Vec<Edge> {
        if self.free_mask() >> axis & 1 == 0 {
            return Vec::new();
        }
        self.vertices()
            .filter(|v| v >> axis & 1 == 0)
            .map(|v| Edge::canonical(v, axis))
            .collect()
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n as usize {
            let c = if self.fixed_mask >> i & 1 == 0 {
                '*'
            } else if self.fixed_values >> i & 1 == 1 {
                '1'
            } else {
                '0'
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Face {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let n = s.chars().count();
        check_oracle_dim(n).map_err(|_| Error::Face(format!("bad face string {s:?}")))?;
        let mut mask = 0;
        let mut vals = 0;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => mask |= 1 << i,
                '1' => {
                    mask |= 1 << i;
                    vals |= 1 << i;
                }
                '*' => {}
                _ => return Err(Error::Face(format!("bad character {c:?} in face {s:?}"))),
            }
        }
        Face::new(n, mask, vals)
    }
}

/// Number of faces of `Q_n`, i.e. `3^n`.
pub fn face_count(n: usize) -> u64 {
    3u64.pow(n as u32)
}

/// Face with the given position in the enumeration order of [`faces`].
pub fn face_at(n: usize, mut index: u64) -> Face {
    let mut mask = 0;
    let mut vals = 0;
    // the last character (dimension n) is the least significant digit
    for i in (0..n).rev() {
        match index % 3 {
            0 => mask |= 1 << i,
            1 => {
                mask |= 1 << i;
                vals |= 1 << i;
            }
            _ => {}
        }
        index /= 3;
    }
    Face {
        n: n as u8,
        fixed_mask: mask,
        fixed_values: vals,
    }
}

/// All `3^n` faces in lexicographic order of their strings, with `0 < 1 < *`
/// and dimension 1 as the leading character.
pub fn faces(n: usize) -> Result<Faces> {
    check_dense_dim(n)?;
    Ok(Faces::range(n, 0, face_count(n)))
}

/// Odometer over a contiguous slice of the face order.
#[derive(Debug, Clone)]
pub struct Faces {
    n: usize,
    current: Face,
    remaining: u64,
}

impl Faces {
    pub fn range(n: usize, start: u64, end: u64) -> Self {
        Faces {
            n,
            current: face_at(n, start),
            remaining: end.saturating_sub(start),
        }
    }
}

impl Iterator for Faces {
    type Item = Face;

    fn next(&mut self) -> Option<Face> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = self.current;
        if self.remaining > 0 {
            // increment the digit of dimension n first; 0 -> 1 -> * -> carry
            let f = &mut self.current;
            for i in (0..self.n).rev() {
                let bit = 1u64 << i;
                if f.fixed_mask & bit == 0 {
                    f.fixed_mask |= bit;
                    f.fixed_values &= !bit;
                    continue;
                }
                if f.fixed_values & bit == 0 {
                    f.fixed_values |= bit;
                } else {
                    f.fixed_mask &= !bit;
                    f.fixed_values &= !bit;
                }
                break;
            }
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

impl ExactSizeIterator for Faces {}

/// An undirected edge `{base, base ⊖ axis}` stored with `base` in the lower
/// facet of `axis`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    base: u64,
    axis: u8,
}

impl Edge {
    /// The `axis`-edge at `v`, normalized to its lower endpoint.
    #[inline]
    pub fn canonical(v: u64, axis: usize) -> Self {
        Edge {
            base: v & !(1 << axis),
            axis: axis as u8,
        }
    }

    #[inline]
    pub fn base(&self) -> u64 {
        self.base
    }

    #[inline]
    pub fn axis(&self) -> usize {
        self.axis as usize
    }

    /// 1-based dimension, as used in text formats.
    pub fn dim(&self) -> usize {
        self.axis as usize + 1
    }

    #[inline]
    pub fn upper(&self) -> u64 {
        self.base | 1 << self.axis
    }

    pub fn endpoints(&self) -> [u64; 2] {
        [self.base, self.upper()]
    }

    pub fn touches(&self, v: u64) -> bool {
        v == self.base || v == self.upper()
    }

    /// Position of this edge among the `2^(n-1)` edges of its dimension.
    #[inline]
    pub fn index(&self) -> usize {
        let low = (1u64 << self.axis) - 1;
        ((self.base & low) | (self.base >> 1 & !low)) as usize
    }

    /// Inverse of [`Edge::index`].
    #[inline]
    pub fn from_index(index: usize, axis: usize) -> Self {
        let idx = index as u64;
        let low = (1u64 << axis) - 1;
        Edge {
            base: (idx & low) | ((idx & !low) << 1),
            axis: axis as u8,
        }
    }

    pub fn check_in(&self, n: usize) -> Result<()> {
        if self.axis() >= n || self.base & !full_mask(n) != 0 {
            return Err(Error::Dimension(format!("edge {self} not in Q_{n}")));
        }
        Ok(())
    }

    /// `<base-bits>:<dim>`
    pub fn render(&self, n: usize) -> String {
        format!("{}:{}", render_bits(self.base, n), self.dim())
    }

    /// Parses `<bits>:<dim>` or `<bits> <dim>`; returns the edge and `n`.
    /// The base may be given as either endpoint.
    pub fn parse(s: &str) -> Result<(Edge, usize)> {
        let s = s.trim();
        let mut parts = s.split(|c: char| c == ':' || c.is_whitespace()).filter(|p| !p.is_empty());
        let bad = || Error::Argument(format!("bad edge {s:?}, expected <bits>:<dim>"));
        let bits = parts.next().ok_or_else(bad)?;
        let dim: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let (v, n) = parse_bits(bits).ok_or_else(bad)?;
        if dim == 0 || dim > n {
            return Err(Error::Dimension(format!("dimension {dim} not in 1..={n}")));
        }
        Ok((Edge::canonical(v, dim - 1), n))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, dim {})", self.base, self.dim())
    }
}

/// Edges of dimension `e.axis` sharing a 2-face with `e`.
pub fn neighbors_in_ni(e: Edge, n: usize) -> Vec<Edge> {
    (0..n)
        .filter(|&j| j != e.axis())
        .map(|j| Edge::canonical(e.base() ^ 1 << j, e.axis()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn face_counts_and_order() {
        let f1: Vec<String> = faces(1).unwrap().map(|f| f.to_string()).collect();
        assert_eq!(f1, ["0", "1", "*"]);
        assert_eq!(faces(2).unwrap().count(), 9);
        let f3: Vec<Face> = faces(3).unwrap().collect();
        assert_eq!(f3.len(), 27);
        assert_eq!(f3[0].to_string(), "000");
        assert_eq!(f3[1].to_string(), "001");
        assert_eq!(f3[26].to_string(), "***");
        let strings: Vec<String> = f3.iter().map(|f| f.to_string().replace('*', "2")).collect();
        let mut sorted = strings.clone();
        sorted.sort();
        assert_eq!(strings, sorted);
    }

    #[test]
    fn face_at_matches_iterator() {
        for n in 2..=5 {
            for (k, f) in faces(n).unwrap().enumerate() {
                assert_eq!(face_at(n, k as u64), f);
            }
            let tail: Vec<Face> = Faces::range(n, 5, face_count(n)).collect();
            assert_eq!(tail.len() as u64, face_count(n) - 5);
            assert_eq!(tail[0], face_at(n, 5));
        }
    }

    #[test]
    fn faces_by_dimension() {
        for n in 1..=5u64 {
            let mut by_dim = vec![0u64; n as usize + 1];
            for f in faces(n as usize).unwrap() {
                by_dim[f.dim()] += 1;
            }
            for k in 0..=n {
                assert_eq!(by_dim[k as usize], binom(n, k) * (1 << (n - k)));
            }
        }
    }

    #[test]
    fn face_dimension_errors() {
        assert!(faces(0).is_err());
        assert!(faces(N_MAX + 1).is_err());
        assert!(Face::new(3, 0b001, 0b010).is_err());
        assert!("01x".parse::<Face>().is_err());
    }

    #[test]
    fn extremes() {
        let f: Face = "*0*".parse().unwrap();
        assert_eq!(f.extremes(), (0, 5));
        let g: Face = "11".parse().unwrap();
        assert_eq!(g.extremes(), (3, 3));
        let h = Face::full(3);
        assert_eq!(h.extremes(), (0, 7));
        for f in faces(4).unwrap() {
            let (lo, hi) = f.extremes();
            assert!(f.contains(lo) && f.contains(hi));
            assert_eq!(lo ^ hi, f.free_mask());
        }
    }

    #[test]
    fn canonical_edges() {
        // bit strings are written dimension 1 first: "101" is 0b101 = 5
        assert_eq!(Edge::canonical(0b101, 0), Edge::canonical(0b100, 0));
        assert_eq!(Edge::canonical(0b101, 0).base(), 0b100);
        assert_eq!(Edge::canonical(0b100, 0).base(), 0b100);
        // integer 0b011 has no dimension-3 bit
        assert_eq!(Edge::canonical(0b011, 2).base(), 0b011);
        for v in 0..16 {
            for i in 0..4 {
                assert_eq!(Edge::canonical(v, i), Edge::canonical(v ^ 1 << i, i));
            }
        }
    }

    #[test]
    fn edge_index_roundtrip() {
        for axis in 0..5 {
            let mut seen = std::collections::HashSet::new();
            for v in 0..32u64 {
                let e = Edge::canonical(v, axis);
                assert_eq!(Edge::from_index(e.index(), axis), e);
                assert!(e.index() < 16);
                seen.insert(e.index());
            }
            assert_eq!(seen.len(), 16);
        }
    }

    #[test]
    fn neighbors() {
        let (b, _) = parse_bits("00").unwrap();
        let nb = neighbors_in_ni(Edge::canonical(b, 1), 2);
        assert_eq!(nb, vec![Edge::canonical(parse_bits("10").unwrap().0, 1)]);
        let nb3 = neighbors_in_ni(Edge::canonical(0, 0), 3);
        assert_eq!(nb3.len(), 2);
        assert!(nb3.contains(&Edge::canonical(parse_bits("010").unwrap().0, 0)));
        assert!(nb3.contains(&Edge::canonical(parse_bits("001").unwrap().0, 0)));
        assert!(neighbors_in_ni(Edge::canonical(0, 0), 1).is_empty());
    }

    #[test]
    fn neighborhood_graph_is_connected_and_regular() {
        for n in 1..=5 {
            for axis in 0..n {
                let total = 1usize << (n - 1);
                let mut seen = vec![false; total];
                let mut stack = vec![Edge::canonical(0, axis)];
                seen[0] = true;
                while let Some(e) = stack.pop() {
                    let nb = neighbors_in_ni(e, n);
                    assert_eq!(nb.len(), n - 1);
                    for g in nb {
                        assert!(neighbors_in_ni(g, n).contains(&e));
                        if !seen[g.index()] {
                            seen[g.index()] = true;
                            stack.push(g);
                        }
                    }
                }
                assert!(seen.iter().all(|&s| s));
            }
        }
    }

    #[test]
    fn antipodal_extremes_of_full_cube() {
        for n in 1..=6 {
            let (lo, hi) = Face::full(n).extremes();
            assert_eq!((lo ^ hi).count_ones() as usize, n);
        }
    }

    #[test]
    fn bits_roundtrip() {
        assert_eq!(render_bits(0b001, 3), "100");
        assert_eq!(parse_bits("100"), Some((1, 3)));
        assert_eq!(parse_bits("10a"), None);
        for m in [0b1011u64, 0b0110, 0] {
            for x in 0..(1u64 << m.count_ones()) {
                assert_eq!(extract_bits(deposit_bits(x, m), m), x);
            }
        }
        let (e, n) = Edge::parse("110:1").unwrap();
        assert_eq!(n, 3);
        assert_eq!(e.render(3), "010:1");
    }
}
