//! USO and PUSO recognition.
//!
//! Three routes: counting sinks in every face, the all-pairs Szabó–Welzl
//! test, and the face sweep that compares only the minimum and maximum
//! vertex of each face. The sweep is sound because a non-USO has a minimal
//! bad face, that face is a PUSO, and antipodal vertices of a PUSO have equal
//! outmaps.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::cube::{check_dense_dim, face_count, faces, Face, Faces};
use crate::error::{Error, Result};
use crate::orientation::Orientation;

/// A face whose extremes (or an arbitrary pair in it) violate the
/// Szabó–Welzl condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UsoWitness {
    pub face: Face,
    pub v: u64,
    pub w: u64,
}

impl UsoWitness {
    /// Re-checks the violation directly against the orientation.
    pub fn holds<O: Orientation + ?Sized>(&self, o: &O) -> bool {
        self.v != self.w
            && self.face.contains(self.v)
            && self.face.contains(self.w)
            && violates_szabo_welzl(o, self.v, self.w)
    }
}

#[inline]
pub fn violates_szabo_welzl<O: Orientation + ?Sized>(o: &O, v: u64, w: u64) -> bool {
    (v ^ w) & (o.outmap(v) ^ o.outmap(w)) == 0
}

/// Outcome of a face sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepReport {
    pub witness: Option<UsoWitness>,
    pub pair_checks: u64,
}

/// Number of vertices of `f` with no outgoing edge inside `f`.
pub fn count_sinks<O: Orientation + ?Sized>(o: &O, f: &Face) -> u64 {
    let free = f.free_mask();
    f.vertices().filter(|&v| o.outmap(v) & free == 0).count() as u64
}

/// USO by definition: every nonempty face has exactly one sink.
pub fn is_uso_by_sinks<O: Orientation + ?Sized>(o: &O) -> Result<bool> {
    check_dense_dim(o.dim())?;
    Ok(faces(o.dim())?.all(|f| count_sinks(o, &f) == 1))
}

/// All-pairs Szabó–Welzl test, `Θ(4^n)`.
pub fn is_uso_naive<O: Orientation + ?Sized>(o: &O) -> bool {
    naive_witness(o).is_none()
}

pub fn naive_witness<O: Orientation + ?Sized>(o: &O) -> Option<(u64, u64)> {
    let size = 1u64 << o.dim();
    let maps: Vec<u64> = (0..size).map(|v| o.outmap(v)).collect();
    for v in 0..size {
        for w in v + 1..size {
            if (v ^ w) & (maps[v as usize] ^ maps[w as usize]) == 0 {
                return Some((v, w));
            }
        }
    }
    None
}

/// Splits the face order into `jobs` contiguous ranges and runs `work` on
/// each range concurrently. Results come back in range order.
pub(crate) fn sweep_chunks<T: Send>(
    n: usize,
    jobs: usize,
    work: impl Fn(u64, u64) -> T + Sync,
) -> Vec<T> {
    let total = face_count(n);
    let jobs = jobs.clamp(1, 64) as u64;
    if jobs == 1 || total < 1024 {
        return vec![work(0, total)];
    }
    let step = total.div_ceil(jobs);
    let work = &work;
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|k| {
                let start = (k * step).min(total);
                let end = ((k + 1) * step).min(total);
                s.spawn(move || work(start, end))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    })
}

/// Compares the extremes of every face of dimension at least one. The
/// witness, if any, is the first failing face in enumeration order.
pub fn check_uso_fast<O: Orientation + ?Sized>(o: &O) -> Result<SweepReport> {
    check_uso_fast_jobs(o, 1)
}

pub fn check_uso_fast_jobs<O: Orientation + ?Sized>(o: &O, jobs: usize) -> Result<SweepReport> {
    let n = o.dim();
    check_dense_dim(n)?;
    let first_bad = AtomicU64::new(u64::MAX);
    let parts = sweep_chunks(n, jobs, |start, end| {
        let mut checks = 0u64;
        for (k, f) in Faces::range(n, start, end).enumerate() {
            let idx = start + k as u64;
            if f.fixed_mask() == crate::cube::full_mask(n) {
                continue;
            }
            if idx & 0x3ff == 0 && first_bad.load(Ordering::Relaxed) < idx {
                break;
            }
            checks += 1;
            let (lo, hi) = f.extremes();
            if violates_szabo_welzl(o, lo, hi) {
                first_bad.fetch_min(idx, Ordering::Relaxed);
                return (checks, Some((idx, f)));
            }
        }
        (checks, None)
    });
    let pair_checks = parts.iter().map(|p| p.0).sum();
    let witness = parts
        .into_iter()
        .filter_map(|p| p.1)
        .min_by_key(|(idx, _)| *idx)
        .map(|(_, face)| {
            let (v, w) = face.extremes();
            UsoWitness { face, v, w }
        });
    Ok(SweepReport {
        witness,
        pair_checks,
    })
}

pub fn is_uso_fast<O: Orientation + ?Sized>(o: &O) -> bool {
    match check_uso_fast(o) {
        Ok(r) => r.witness.is_none(),
        Err(_) => false,
    }
}

/// `Ok(())` if `o` is a USO, [`Error::NotUso`] otherwise.
pub fn require_uso<O: Orientation + ?Sized>(o: &O) -> Result<()> {
    if check_uso_fast(o)?.witness.is_some() {
        return Err(Error::NotUso);
    }
    Ok(())
}

/// Not a USO, but every proper face has a unique sink.
pub fn is_puso<O: Orientation + ?Sized>(o: &O) -> Result<bool> {
    let n = o.dim();
    check_dense_dim(n)?;
    let full = Face::full(n);
    if count_sinks(o, &full) == 1 {
        return Ok(false);
    }
    Ok(faces(n)?.filter(|f| *f != full).all(|f| count_sinks(o, &f) == 1))
}
