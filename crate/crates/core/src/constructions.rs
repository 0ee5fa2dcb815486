//! Generators and transformations of USOs, plus the phase-flip sampler.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cube::{check_dense_dim, deposit_bits, extract_bits, full_mask, Face};
use crate::error::{Error, Result};
use crate::orientation::{DenseOrientation, EdgeSet, Orientation};
use crate::phases::{compute_phases_fast, is_hypervertex};
use crate::recognition::{is_uso_fast, require_uso};

fn check_positive(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Dimension("dimension must be at least 1".into()));
    }
    check_dense_dim(n)
}

/// Every edge points down: `O(v) = v`.
pub fn uniform(n: usize) -> Result<DenseOrientation> {
    check_positive(n)?;
    Ok(DenseOrientation::from_raw(n, (0..1u32 << n).collect()))
}

/// `O(v)_i = v_i ⊕ v_{i+1}` below the top dimension, `O(v)_n = v_n`.
pub fn schurr(n: usize) -> Result<DenseOrientation> {
    check_positive(n)?;
    Ok(DenseOrientation::from_raw(n, (0..1u32 << n).map(|v| v ^ (v >> 1)).collect()))
}

pub fn schurr_outmap(v: u64) -> u64 {
    v ^ (v >> 1)
}

/// Places `inner[u]` on the subcube at outer coordinates `u` and orients the
/// outer dimensions by `outer`. Inner dimensions are the low `d` bits.
pub fn combed_product(inner: &[&DenseOrientation], outer: &DenseOrientation) -> Result<DenseOrientation> {
    let k = outer.dim();
    if inner.len() != 1 << k {
        return Err(Error::Argument(format!(
            "{} inner orientations for a {k}-dimensional outer cube",
            inner.len()
        )));
    }
    let d = inner[0].dim();
    if inner.iter().any(|o| o.dim() != d) {
        return Err(Error::Argument("inner orientations differ in dimension".into()));
    }
    check_dense_dim(d + k)?;
    let mut maps = Vec::with_capacity(1 << (d + k));
    for u in 0..1u64 << k {
        let high = outer.outmap(u) << d;
        for x in 0..1u64 << d {
            maps.push((inner[u as usize].outmap(x) | high) as u32);
        }
    }
    Ok(DenseOrientation::from_raw(d + k, maps))
}

/// Replaces the interior of the hypervertex `f` by `inner`, keeping every
/// edge that leaves `f` and everything outside `f`.
pub fn replace_hypervertex<O: Orientation + ?Sized, I: Orientation + ?Sized>(
    o: &O,
    f: &Face,
    inner: &I,
) -> Result<DenseOrientation> {
    if f.ambient_dim() != o.dim() {
        return Err(Error::Argument(format!("face {f} does not belong to Q_{}", o.dim())));
    }
    if inner.dim() != f.dim() {
        return Err(Error::Argument(format!(
            "replacement has dimension {}, face {f} has dimension {}",
            inner.dim(),
            f.dim()
        )));
    }
    require_uso(o)?;
    require_uso(inner)?;
    if !is_hypervertex(o, f) {
        return Err(Error::NotHypervertex(f.to_string()));
    }
    let mut out = o.materialize()?;
    let free = f.free_mask();
    let mut maps = out.outmaps().to_vec();
    for v in f.vertices() {
        let kept = o.outmap(v) & !free;
        maps[v as usize] = (kept | deposit_bits(inner.outmap(extract_bits(v, free)), free)) as u32;
    }
    out = DenseOrientation::from_raw(o.dim(), maps);
    if !is_uso_fast(&out) {
        return Err(Error::InvariantViolated(format!("replacing hypervertex {f} broke the USO")));
    }
    Ok(out)
}

/// Lower-facet vertices whose `axis`-edge points up.
fn upward_bases<O: Orientation + ?Sized>(o: &O, axis: usize) -> Vec<bool> {
    let bit = 1u64 << axis;
    (0..1u64 << o.dim())
        .map(|v| v & bit == 0 && o.outmap(v) & bit != 0)
        .collect()
}

/// Exchanges the subgraph induced by the upward `axis`-edges' lower
/// endpoints with its copy in the upper facet. `axis`-edges are untouched.
pub fn partial_swap<O: Orientation + ?Sized>(o: &O, axis: usize) -> Result<DenseOrientation> {
    let n = o.dim();
    if axis >= n {
        return Err(Error::Argument(format!("dimension {} out of range 1..={n}", axis + 1)));
    }
    require_uso(o)?;
    let in_w = upward_bases(o, axis);
    let bit = 1u64 << axis;
    let mut out = o.materialize()?;
    for v in (0..1u64 << n).filter(|&v| in_w[v as usize]) {
        for k in (0..n).filter(|&k| k != axis) {
            let u = v ^ 1 << k;
            // each induced edge once, from its lower endpoint
            if u < v || !in_w[u as usize] {
                continue;
            }
            let kb = 1u64 << k;
            if (o.outmap(v) ^ o.outmap(v | bit)) & kb != 0 {
                out.flip_edge(crate::cube::Edge::canonical(v, k));
                out.flip_edge(crate::cube::Edge::canonical(v | bit, k));
            }
        }
    }
    if !is_uso_fast(&out) {
        return Err(Error::InvariantViolated("partial swap broke the USO".into()));
    }
    Ok(out)
}

/// Every USO of `Q_n` for `n ≤ 3`, in increasing order of the outmap array.
pub fn enumerate_usos(n: usize) -> Result<Vec<DenseOrientation>> {
    if n == 0 {
        return Err(Error::Dimension("dimension must be at least 1".into()));
    }
    if n > 3 {
        return Err(Error::Resource(format!("enumeration of Q_{n} is out of range")));
    }
    let size = 1usize << n;
    let mut out = Vec::new();
    let mut maps = vec![0u32; size];
    extend(n, 0, &mut maps, &mut out);
    Ok(out)
}

fn extend(n: usize, v: usize, maps: &mut [u32], out: &mut Vec<DenseOrientation>) {
    if v == maps.len() {
        out.push(DenseOrientation::from_raw(n, maps.to_vec()));
        return;
    }
    for o in 0..1u32 << n {
        // covers neighbours too: an earlier neighbour fixes the shared edge
        let clash = maps[..v]
            .iter()
            .enumerate()
            .any(|(w, &m)| ((v ^ w) as u32) & (o ^ m) == 0);
        if clash {
            continue;
        }
        maps[v] = o;
        extend(n, v + 1, maps, out);
    }
}

/// Reverses the union of the chosen `axis`-phases. `selected[k]` refers to
/// the `k`-th class in representative order.
pub fn flip_classes(o: &DenseOrientation, axis: usize, selected: &[bool]) -> Result<DenseOrientation> {
    let partition = compute_phases_fast(o)?;
    if selected.len() != partition.class_count(axis) {
        return Err(Error::Argument(format!(
            "{} selections for {} classes",
            selected.len(),
            partition.class_count(axis)
        )));
    }
    let mut s = EdgeSet::new();
    for (class, _) in partition.classes(axis).into_iter().zip(selected).filter(|(_, &b)| b) {
        s.extend(class);
    }
    let mut out = o.clone();
    out.flip_in_place(&s)?;
    Ok(out)
}

/// One step of the phase-flip chain: a uniform dimension, then each of its
/// phases independently with probability one half.
pub fn markov_step<R: Rng + ?Sized>(o: &DenseOrientation, rng: &mut R) -> Result<DenseOrientation> {
    let axis = rng.gen_range(0..o.dim());
    let partition = compute_phases_fast(o)?;
    let selected: Vec<bool> = (0..partition.class_count(axis)).map(|_| rng.gen::<bool>()).collect();
    let mut s = EdgeSet::new();
    for (class, _) in partition.classes(axis).into_iter().zip(&selected).filter(|(_, &b)| b) {
        s.extend(class);
    }
    let mut out = o.clone();
    out.flip_in_place(&s)?;
    Ok(out)
}

/// Runs the chain for `steps` steps from the uniform USO.
pub fn sample_with<R: Rng + ?Sized>(n: usize, steps: u64, rng: &mut R) -> Result<DenseOrientation> {
    if steps == 0 {
        return Err(Error::Argument("steps must be at least 1".into()));
    }
    let mut o = uniform(n)?;
    for _ in 0..steps {
        o = markov_step(&o, rng)?;
    }
    Ok(o)
}

pub fn sample_uniform(n: usize, steps: u64, seed: u64) -> Result<DenseOrientation> {
    sample_with(n, steps, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `true` iff the outmap agrees with `O(v) = v` on the given dimensions.
pub fn is_uniform_on<O: Orientation + ?Sized>(o: &O, mask: u64) -> bool {
    let mask = mask & full_mask(o.dim());
    (0..1u64 << o.dim()).all(|v| (o.outmap(v) ^ v) & mask == 0)
}
