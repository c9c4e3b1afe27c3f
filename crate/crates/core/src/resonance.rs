//! Resonant sets `Res_j`: tuples `(k_1, ..., k_{2 sigma + 1})` with
//! `sum (-1)^{l+1} k_l = j` and `sum (-1)^{l+1} |k_l|^2 = |j|^2`.
//!
//! [`enumerate_resonant`] is the brute-force reference; the cubic closed forms
//! and the quintic/padding constructions are checked against it.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::modes::ModeIndex;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResonantTuple {
    pub entries: Vec<ModeIndex>,
    pub target: ModeIndex,
}

impl ResonantTuple {
    pub fn sigma(&self) -> usize {
        (self.entries.len() - 1) / 2
    }

    pub fn is_resonant(&self) -> bool {
        is_resonant(&self.entries, &self.target).unwrap_or(false)
    }
}

/// Alternating sums `(sum (-1)^{l+1} k_l, sum (-1)^{l+1} |k_l|^2)` of a tuple.
pub fn alternating_sums(entries: &[ModeIndex]) -> (ModeIndex, i64) {
    let d = entries[0].dim();
    let mut vec = vec![0i64; d];
    let mut sq = 0i64;
    for (l, k) in entries.iter().enumerate() {
        let sign = if l % 2 == 0 { 1 } else { -1 };
        for (acc, c) in vec.iter_mut().zip(k.components()) {
            *acc += sign * c;
        }
        sq += sign * k.norm_sq();
    }
    (ModeIndex::new(&vec), sq)
}

pub fn is_resonant(entries: &[ModeIndex], j: &ModeIndex) -> Result<bool> {
    if entries.len().is_multiple_of(2) {
        return Err(Error::EvenTupleLength(entries.len()));
    }
    if let Some(bad) = entries.iter().find(|k| k.dim() != j.dim()) {
        return Err(Error::DimensionMismatch {
            expected: j.dim(),
            found: bad.dim(),
        });
    }
    let (sum, sq) = alternating_sums(entries);
    Ok(sum == *j && sq == j.norm_sq())
}

/// All lattice points of `[-k, k]^d` in lexicographic order, flattened.
fn box_points(d: usize, k: i64) -> Vec<i64> {
    let side = (2 * k + 1) as usize;
    let count = side.pow(d as u32);
    let mut out = Vec::with_capacity(count * d);
    let mut cur = vec![-k; d];
    for _ in 0..count {
        out.extend_from_slice(&cur);
        for axis in (0..d).rev() {
            if cur[axis] < k {
                cur[axis] += 1;
                break;
            }
            cur[axis] = -k;
        }
    }
    out
}

fn check_box(j: &ModeIndex, k: i64) -> Result<()> {
    if k < 0 || j.linf() > k {
        return Err(Error::BoxTooSmall {
            k,
            target: j.to_string(),
        });
    }
    Ok(())
}

struct Walker<'a> {
    points: &'a [i64],
    d: usize,
    depth: usize,
    k: i64,
    target: &'a [i64],
    target_sq: i64,
}

impl Walker<'_> {
    /// Chooses entries `level..depth` from the box; the final entry is fixed by
    /// the linear identity and only the quadratic one needs testing.
    fn walk(&self, level: usize, partial: &mut [i64], partial_sq: i64, chosen: &mut Vec<usize>, out: &mut Vec<Vec<i64>>) {
        let d = self.d;
        if level == self.depth {
            let mut last_sq = 0;
            let mut last = Vec::with_capacity(d);
            for axis in 0..d {
                let c = self.target[axis] - partial[axis];
                if c.abs() > self.k {
                    return;
                }
                last_sq += c * c;
                last.push(c);
            }
            if partial_sq + last_sq == self.target_sq {
                let mut flat = Vec::with_capacity((self.depth + 1) * d);
                for &idx in chosen.iter() {
                    flat.extend_from_slice(&self.points[idx * d..(idx + 1) * d]);
                }
                flat.extend_from_slice(&last);
                out.push(flat);
            }
            return;
        }
        let sign = if level.is_multiple_of(2) { 1 } else { -1 };
        let n = self.points.len() / d;
        for idx in 0..n {
            let p = &self.points[idx * d..(idx + 1) * d];
            let mut sq = 0;
            for axis in 0..d {
                partial[axis] += sign * p[axis];
                sq += p[axis] * p[axis];
            }
            chosen.push(idx);
            self.walk(level + 1, partial, partial_sq + sign * sq, chosen, out);
            chosen.pop();
            for axis in 0..d {
                partial[axis] -= sign * p[axis];
            }
        }
    }
}

fn unflatten(flat: &[i64], d: usize, target: &ModeIndex) -> ResonantTuple {
    ResonantTuple {
        entries: flat.chunks(d).map(ModeIndex::new).collect(),
        target: target.clone(),
    }
}

/// Brute-force `Res_j` restricted to entries in `[-k, k]^d`, lexicographically ordered.
pub fn enumerate_resonant(j: &ModeIndex, sigma: usize, k: i64) -> Result<Vec<ResonantTuple>> {
    if sigma == 0 {
        return Err(Error::InvalidParameters("sigma must be >= 1".into()));
    }
    check_box(j, k)?;
    let d = j.dim();
    let points = box_points(d, k);
    let n = points.len() / d;
    let walker = Walker {
        points: &points,
        d,
        depth: 2 * sigma,
        k,
        target: j.components(),
        target_sq: j.norm_sq(),
    };
    let chunks: Vec<Vec<Vec<i64>>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            let p = &points[first * d..(first + 1) * d];
            let mut partial = p.to_vec();
            let sq: i64 = p.iter().map(|c| c * c).sum();
            let mut chosen = vec![first];
            walker.walk(1, &mut partial, sq, &mut chosen, &mut out);
            out
        })
        .collect();
    Ok(chunks
        .into_iter()
        .flatten()
        .map(|flat| unflatten(&flat, d, j))
        .collect())
}

fn cubic(k: &ModeIndex, l: &ModeIndex, m: &ModeIndex, j: &ModeIndex) -> ResonantTuple {
    ResonantTuple {
        entries: vec![k.clone(), l.clone(), m.clone()],
        target: j.clone(),
    }
}

/// `Res_j = {(j,l,l), (l,l,j) : l != j} u {(j,j,j)}` for the cubic one-dimensional case.
pub fn resonant_cubic_1d(j: &ModeIndex, k: i64) -> Result<Vec<ResonantTuple>> {
    if j.dim() != 1 {
        return Err(Error::InvalidParameters("resonant_cubic_1d needs d = 1".into()));
    }
    check_box(j, k)?;
    let mut out = Vec::with_capacity((4 * k + 1) as usize);
    out.push(cubic(j, j, j, j));
    for l in (-k..=k).map(ModeIndex::scalar).filter(|l| l != j) {
        out.push(cubic(j, &l, &l, j));
        out.push(cubic(&l, &l, j, j));
    }
    out.sort();
    Ok(out)
}

/// `(k - l) . (m - l) = 0`: the square-sum identity for a cubic tuple with target `k - l + m`.
pub fn rectangle_condition(k: &ModeIndex, l: &ModeIndex, m: &ModeIndex) -> bool {
    k.sub(l).dot(&m.sub(l)) == 0
}

/// Cubic `Res_j` for `d >= 2`: rectangles with `l` opposite `j`, plus the degenerate
/// families `(j,l,l)`, `(l,l,j)` and `(j,j,j)` (the cases `k = l` or `m = l`).
pub fn resonant_cubic_multid(j: &ModeIndex, k: i64) -> Result<Vec<ResonantTuple>> {
    if j.dim() < 2 {
        return Err(Error::InvalidParameters("resonant_cubic_multid needs d >= 2".into()));
    }
    check_box(j, k)?;
    let d = j.dim();
    let points = box_points(d, k);
    let modes: Vec<ModeIndex> = points.chunks(d).map(ModeIndex::new).collect();
    let mut out: Vec<ResonantTuple> = modes
        .par_iter()
        .flat_map_iter(|kk| {
            modes.iter().filter_map(move |m| {
                let l = kk.add(m).sub(j);
                (l.linf() <= k && rectangle_condition(kk, &l, m)).then(|| cubic(kk, &l, m, j))
            })
        })
        .collect();
    out.sort();
    Ok(out)
}

/// The quintic tuple `(pq, -q^2, -pq, p^2, p^2 - q^2)` in `Res_0` with all entries nonzero.
pub fn quintic_tuple(p: i64, q: i64) -> Result<ResonantTuple> {
    if p == 0 || q == 0 || p == q || p == -q {
        return Err(Error::InvalidParameters(format!(
            "quintic tuple needs p, q nonzero and p not in {{q, -q}} (p = {p}, q = {q})"
        )));
    }
    let entries = [p * q, -q * q, -p * q, p * p, p * p - q * q]
        .into_iter()
        .map(ModeIndex::scalar)
        .collect();
    Ok(ResonantTuple {
        entries,
        target: ModeIndex::scalar(0),
    })
}

/// Extends a cubic resonant triple to the three `(2 sigma + 1)`-tuples obtained by
/// appending `2 sigma - 2` copies of `k`, `l` or `m`.
pub fn pad_tuple(triple: &ResonantTuple, sigma: usize) -> Result<[ResonantTuple; 3]> {
    if sigma < 2 {
        return Err(Error::InvalidParameters(format!("padding needs sigma >= 2, got {sigma}")));
    }
    if triple.entries.len() != 3 || !is_resonant(&triple.entries, &triple.target)? {
        return Err(Error::InvalidParameters("padding needs a cubic resonant triple".into()));
    }
    let pad = |extra: &ModeIndex| {
        let mut entries = triple.entries.clone();
        entries.extend(std::iter::repeat_n(extra.clone(), 2 * sigma - 2));
        ResonantTuple {
            entries,
            target: triple.target.clone(),
        }
    };
    Ok([pad(&triple.entries[0]), pad(&triple.entries[1]), pad(&triple.entries[2])])
}
