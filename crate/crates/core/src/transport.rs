//! Resonant amplitude system and the cubic one-dimensional corrector system.
//!
//! The amplitude system reads `i a_j' = sum_{Res_j} a_{k1} conj(a_{k2}) ... a_{k_{2s+1}}`
//! with the sum restricted to the active mode set. The renormalized variant
//! (cubic only) subtracts `2 (sum_k |a_k|^2) a_j` from the right-hand side.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modes::{ModeField, ModeIndex};
use crate::ode::{step_times, Rk4};
use crate::resonance::ResonantTuple;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeState {
    pub time: f64,
    pub values: ModeField,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrectorState {
    pub time: f64,
    pub eps: f64,
    pub values: ModeField,
}

/// A non-resonant cubic interaction `(k, l, m) -> j = k - l + m` and its divisor
/// `delta = |j|^2 - |k|^2 + |l|^2 - |m|^2`, which is a nonzero integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonresonantTerm {
    pub tuple: ResonantTuple,
    pub divisor: i64,
}

#[derive(Clone, Debug)]
struct CorrectorTables {
    modes: Vec<ModeIndex>,
    /// Index into the active set for each corrector mode, when active.
    active_of: Vec<Option<usize>>,
    /// Resonant triples per corrector target, as corrector-mode indices.
    resonant: Vec<Vec<[usize; 3]>>,
    /// Non-resonant triples per corrector target, as active-mode indices, with divisor.
    nonresonant: Vec<Vec<([usize; 3], i64)>>,
}

#[derive(Clone, Debug)]
pub struct TransportSystem {
    sigma: usize,
    d: usize,
    renormalized: bool,
    active: Vec<ModeIndex>,
    index: HashMap<ModeIndex, usize>,
    resonance_table: BTreeMap<ModeIndex, Vec<ResonantTuple>>,
    nonresonant_table: BTreeMap<ModeIndex, Vec<NonresonantTerm>>,
    /// Flattened tuple indices per active target, `2 sigma + 1` per tuple.
    compiled: Vec<Vec<usize>>,
    corrector: Option<CorrectorTables>,
}

/// Calls `visit(indices, alternating_sum, alternating_square_sum)` for every tuple of
/// length `len` drawn from `modes`, in lexicographic index order.
pub(crate) fn for_each_tuple<F>(modes: &[ModeIndex], len: usize, mut visit: F)
where
    F: FnMut(&[usize], &[i64], i64),
{
    fn rec<F: FnMut(&[usize], &[i64], i64)>(
        modes: &[ModeIndex],
        len: usize,
        chosen: &mut Vec<usize>,
        sum: &mut [i64],
        sq: i64,
        visit: &mut F,
    ) {
        if chosen.len() == len {
            visit(chosen, sum, sq);
            return;
        }
        let sign = if chosen.len().is_multiple_of(2) { 1 } else { -1 };
        for (idx, k) in modes.iter().enumerate() {
            for (acc, c) in sum.iter_mut().zip(k.components()) {
                *acc += sign * c;
            }
            chosen.push(idx);
            rec(modes, len, chosen, sum, sq + sign * k.norm_sq(), visit);
            chosen.pop();
            for (acc, c) in sum.iter_mut().zip(k.components()) {
                *acc -= sign * c;
            }
        }
    }
    if modes.is_empty() {
        return;
    }
    let d = modes[0].dim();
    let mut sum = vec![0i64; d];
    let mut chosen = Vec::with_capacity(len);
    rec(modes, len, &mut chosen, &mut sum, 0, &mut visit);
}

fn tuple_of(modes: &[ModeIndex], idx: &[usize], target: ModeIndex) -> ResonantTuple {
    ResonantTuple {
        entries: idx.iter().map(|&i| modes[i].clone()).collect(),
        target,
    }
}

impl TransportSystem {
    /// Closes `initial_support` under resonant interaction inside `[-k_box, k_box]^d`
    /// and tabulates the resonant (and, for the cubic case, non-resonant) interactions.
    pub fn build(
        initial_support: &[ModeIndex],
        sigma: usize,
        d: usize,
        renormalized: bool,
        k_box: i64,
    ) -> Result<Self> {
        if initial_support.is_empty() {
            return Err(Error::EmptySupport);
        }
        if sigma == 0 || d == 0 {
            return Err(Error::InvalidParameters("sigma and d must be positive".into()));
        }
        if renormalized && sigma != 1 {
            return Err(Error::Unsupported(format!(
                "renormalized transport is cubic only (sigma = {sigma})"
            )));
        }
        let mut active: BTreeSet<ModeIndex> = BTreeSet::new();
        for j in initial_support {
            if j.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: j.dim(),
                });
            }
            if j.linf() > k_box {
                return Err(Error::BoxTooSmall {
                    k: k_box,
                    target: j.to_string(),
                });
            }
            active.insert(j.clone());
        }

        let len = 2 * sigma + 1;
        let (modes, grouped) = loop {
            let modes: Vec<ModeIndex> = active.iter().cloned().collect();
            let mut created = BTreeSet::new();
            let mut grouped: BTreeMap<ModeIndex, Vec<Vec<usize>>> = BTreeMap::new();
            for_each_tuple(&modes, len, |idx, sum, sq| {
                let target_sq: i64 = sum.iter().map(|c| c * c).sum();
                if sq != target_sq || sum.iter().any(|c| c.abs() > k_box) {
                    return;
                }
                let target = ModeIndex::new(sum);
                if !active.contains(&target) {
                    created.insert(target.clone());
                }
                grouped.entry(target).or_default().push(idx.to_vec());
            });
            if created.is_empty() {
                break (modes, grouped);
            }
            active.extend(created);
        };

        let index: HashMap<ModeIndex, usize> =
            modes.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut compiled = vec![Vec::new(); modes.len()];
        let mut resonance_table = BTreeMap::new();
        for (target, tuples) in grouped {
            let slot = index[&target];
            let mut table = Vec::with_capacity(tuples.len());
            for idx in &tuples {
                compiled[slot].extend_from_slice(idx);
                table.push(tuple_of(&modes, idx, target.clone()));
            }
            resonance_table.insert(target, table);
        }

        let mut nonresonant_table: BTreeMap<ModeIndex, Vec<NonresonantTerm>> = BTreeMap::new();
        if sigma == 1 {
            for_each_tuple(&modes, 3, |idx, sum, sq| {
                let target_sq: i64 = sum.iter().map(|c| c * c).sum();
                if sq != target_sq {
                    let target = ModeIndex::new(sum);
                    nonresonant_table.entry(target.clone()).or_default().push(NonresonantTerm {
                        tuple: tuple_of(&modes, idx, target),
                        divisor: target_sq - sq,
                    });
                }
            });
        }

        let mut sys = TransportSystem {
            sigma,
            d,
            renormalized,
            active: modes,
            index,
            resonance_table,
            nonresonant_table,
            compiled,
            corrector: None,
        };
        if sigma == 1 && d == 1 {
            sys.corrector = Some(sys.corrector_tables());
        }
        Ok(sys)
    }

    fn corrector_tables(&self) -> CorrectorTables {
        // In d = 1 a resonant triple with two active entries has its target among
        // its entries, so the corrector modes are the active modes plus the
        // targets of non-resonant interactions.
        let mut set: BTreeSet<ModeIndex> = self.active.iter().cloned().collect();
        set.extend(self.nonresonant_table.keys().cloned());
        let modes: Vec<ModeIndex> = set.into_iter().collect();
        let pos: HashMap<&ModeIndex, usize> = modes.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let active_of = modes.iter().map(|m| self.index.get(m).copied()).collect();
        let mut resonant = vec![Vec::new(); modes.len()];
        for_each_tuple(&modes, 3, |idx, sum, sq| {
            if sq != sum.iter().map(|c| c * c).sum::<i64>() {
                return;
            }
            if let Some(&slot) = pos.get(&ModeIndex::new(sum)) {
                resonant[slot].push([idx[0], idx[1], idx[2]]);
            }
        });
        let mut nonresonant = vec![Vec::new(); modes.len()];
        for (target, terms) in &self.nonresonant_table {
            let slot = pos[target];
            for term in terms {
                let e = &term.tuple.entries;
                nonresonant[slot].push(([self.index[&e[0]], self.index[&e[1]], self.index[&e[2]]], term.divisor));
            }
        }
        CorrectorTables {
            modes,
            active_of,
            resonant,
            nonresonant,
        }
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn renormalized(&self) -> bool {
        self.renormalized
    }

    pub fn active_modes(&self) -> &[ModeIndex] {
        &self.active
    }

    pub fn resonance_table(&self) -> &BTreeMap<ModeIndex, Vec<ResonantTuple>> {
        &self.resonance_table
    }

    pub fn nonresonant_table(&self) -> &BTreeMap<ModeIndex, Vec<NonresonantTerm>> {
        &self.nonresonant_table
    }

    /// Modes carrying a corrector, available in the cubic one-dimensional case.
    pub fn corrector_modes(&self) -> Option<&[ModeIndex]> {
        self.corrector.as_ref().map(|c| c.modes.as_slice())
    }

    pub(crate) fn to_dense(&self, field: &ModeField) -> Result<Vec<Complex64>> {
        if field.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: field.dim(),
            });
        }
        let mut dense = vec![Complex64::default(); self.active.len()];
        for (j, c) in field.iter() {
            let slot = self.index.get(j).ok_or_else(|| {
                Error::InvalidParameters(format!("mode {j} is outside the active mode set"))
            })?;
            dense[*slot] = *c;
        }
        Ok(dense)
    }

    pub(crate) fn to_field(&self, dense: &[Complex64]) -> ModeField {
        to_field(self.d, &self.active, dense)
    }

    pub(crate) fn rhs_dense(&self, a: &[Complex64], out: &mut [Complex64]) {
        let len = 2 * self.sigma + 1;
        let mass: f64 = if self.renormalized {
            a.iter().map(|c| c.norm_sqr()).sum()
        } else {
            0.0
        };
        for (slot, flat) in self.compiled.iter().enumerate() {
            let mut acc = Complex64::default();
            for tuple in flat.chunks_exact(len) {
                let mut prod = a[tuple[0]];
                for (pos, &k) in tuple.iter().enumerate().skip(1) {
                    prod *= if pos % 2 == 1 { a[k].conj() } else { a[k] };
                }
                acc += prod;
            }
            if self.renormalized {
                acc -= a[slot] * (2.0 * mass);
            }
            out[slot] = -I * acc;
        }
    }
}

fn to_field(d: usize, modes: &[ModeIndex], dense: &[Complex64]) -> ModeField {
    let mut field = ModeField::new(d);
    for (m, c) in modes.iter().zip(dense) {
        field.set(m.clone(), *c).expect("dimension checked at construction");
    }
    field
}

pub fn build_system(
    initial_support: &[ModeIndex],
    sigma: usize,
    d: usize,
    renormalized: bool,
    k_box: i64,
) -> Result<TransportSystem> {
    TransportSystem::build(initial_support, sigma, d, renormalized, k_box)
}

/// Time derivative `a'` of the amplitude system at `state`.
pub fn transport_rhs(state: &AmplitudeState, sys: &TransportSystem) -> Result<ModeField> {
    let a = sys.to_dense(&state.values)?;
    let mut out = vec![Complex64::default(); a.len()];
    sys.rhs_dense(&a, &mut out);
    Ok(sys.to_field(&out))
}

/// Amplitudes sampled at every integrator step, on the system's active modes.
#[derive(Clone, Debug)]
pub struct Trajectory {
    d: usize,
    modes: Vec<ModeIndex>,
    times: Vec<f64>,
    values: Vec<Vec<Complex64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn modes(&self) -> &[ModeIndex] {
        &self.modes
    }

    pub fn end_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds at least t = 0")
    }

    pub fn state(&self, i: usize) -> AmplitudeState {
        AmplitudeState {
            time: self.times[i],
            values: to_field(self.d, &self.modes, &self.values[i]),
        }
    }

    pub fn states(&self) -> impl Iterator<Item = AmplitudeState> + '_ {
        (0..self.len()).map(|i| self.state(i))
    }

    pub fn final_state(&self) -> AmplitudeState {
        self.state(self.len() - 1)
    }

    /// Amplitude of `mode` at sample `i`.
    pub fn value(&self, i: usize, mode: &ModeIndex) -> Complex64 {
        self.modes
            .iter()
            .position(|m| m == mode)
            .map(|p| self.values[i][p])
            .unwrap_or_default()
    }

    pub(crate) fn dense(&self, i: usize) -> &[Complex64] {
        &self.values[i]
    }
}

fn l1(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).sum()
}

/// Classical RK4 on `[0, t_end]` with fixed step `dt` (the last step may be partial).
pub fn integrate_transport(alpha: &ModeField, sys: &TransportSystem, t_end: f64, dt: f64) -> Result<Trajectory> {
    if !(t_end > 0.0 && dt > 0.0 && dt <= t_end) || !t_end.is_finite() {
        return Err(Error::InvalidParameters(format!(
            "need 0 < dt <= T, got dt = {dt}, T = {t_end}"
        )));
    }
    let mut y = sys.to_dense(alpha)?;
    let limit = 1e3 * l1(&y);
    let times = step_times(t_end, dt);
    let mut values = Vec::with_capacity(times.len());
    values.push(y.clone());
    let mut rk = Rk4::new(y.len());
    let mut f = |_t: f64, a: &[Complex64], out: &mut [Complex64]| sys.rhs_dense(a, out);
    for w in times.windows(2) {
        rk.step(&mut f, w[0], w[1] - w[0], &mut y);
        let norm = l1(&y);
        if !norm.is_finite() || (limit > 0.0 && norm > limit) {
            return Err(Error::IntegrationDiverged { t: w[1] });
        }
        values.push(y.clone());
    }
    Ok(Trajectory {
        d: sys.d,
        modes: sys.active.clone(),
        times,
        values,
    })
}

fn check_1d(alpha: &ModeField) -> Result<()> {
    if alpha.dim() != 1 {
        return Err(Error::Unsupported(format!(
            "closed form needs d = 1, got d = {}",
            alpha.dim()
        )));
    }
    Ok(())
}

/// `a_j(t) = alpha_j exp(-i (2 sum_k |alpha_k|^2 - |alpha_j|^2) t)`.
pub fn explicit_cubic_1d(alpha: &ModeField, t: f64) -> Result<ModeField> {
    check_1d(alpha)?;
    let mass: f64 = alpha.iter().map(|(_, c)| c.norm_sqr()).sum();
    Ok(alpha.map_values(|_, c| c * (-I * (2.0 * mass - c.norm_sqr()) * t).exp()))
}

/// `a_j(t) = alpha_j exp(i |alpha_j|^2 t)` for the renormalized equation.
pub fn explicit_renormalized_1d(alpha: &ModeField, t: f64) -> Result<ModeField> {
    check_1d(alpha)?;
    Ok(alpha.map_values(|_, c| c * (I * c.norm_sqr() * t).exp()))
}

/// Correctors sampled at every integrator step, on the system's corrector modes.
#[derive(Clone, Debug)]
pub struct CorrectorTrajectory {
    eps: f64,
    modes: Vec<ModeIndex>,
    times: Vec<f64>,
    values: Vec<Vec<Complex64>>,
}

impl CorrectorTrajectory {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn modes(&self) -> &[ModeIndex] {
        &self.modes
    }

    pub fn state(&self, i: usize) -> CorrectorState {
        CorrectorState {
            time: self.times[i],
            eps: self.eps,
            values: to_field(1, &self.modes, &self.values[i]),
        }
    }

    pub fn states(&self) -> impl Iterator<Item = CorrectorState> + '_ {
        (0..self.len()).map(|i| self.state(i))
    }

    pub fn final_state(&self) -> CorrectorState {
        self.state(self.len() - 1)
    }

    pub fn value(&self, i: usize, mode: &ModeIndex) -> Complex64 {
        self.modes
            .iter()
            .position(|m| m == mode)
            .map(|p| self.values[i][p])
            .unwrap_or_default()
    }

    /// Modes whose corrector ever exceeds `tol` in modulus.
    pub fn support(&self, tol: f64) -> Vec<ModeIndex> {
        self.modes
            .iter()
            .enumerate()
            .filter(|(p, _)| self.values.iter().any(|v| v[*p].norm() > tol))
            .map(|(_, m)| m.clone())
            .collect()
    }
}

/// Cubic Hermite interpolation of an amplitude trajectory, using the system's
/// right-hand side for the nodal derivatives.
struct HermiteAmplitudes<'a> {
    traj: &'a Trajectory,
    derivs: Vec<Vec<Complex64>>,
}

impl<'a> HermiteAmplitudes<'a> {
    fn new(traj: &'a Trajectory, sys: &TransportSystem) -> Self {
        let derivs = (0..traj.len())
            .map(|i| {
                let mut out = vec![Complex64::default(); sys.active.len()];
                sys.rhs_dense(traj.dense(i), &mut out);
                out
            })
            .collect();
        HermiteAmplitudes { traj, derivs }
    }

    fn eval(&self, t: f64, out: &mut [Complex64]) {
        let times = &self.traj.times;
        let i = match times.partition_point(|&s| s <= t) {
            0 => 0,
            p if p >= times.len() => times.len() - 2,
            p => p - 1,
        };
        let (t0, t1) = (times[i], times[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let (y0, y1) = (self.traj.dense(i), self.traj.dense(i + 1));
        let (d0, d1) = (&self.derivs[i], &self.derivs[i + 1]);
        for k in 0..out.len() {
            out[k] = y0[k] * h00 + d0[k] * (h10 * h) + y1[k] * h01 + d1[k] * (h11 * h);
        }
    }
}

/// Solves the linear corrector system for `b_j^eps` with `b(0) = 0` on the time span
/// of `a_traj`.
///
/// The oscillatory inhomogeneity `-sum (2/delta) (A(t) e^{i delta t/(2 eps)} - A(0))`
/// is evaluated exactly at every stage; only the integral part is advanced by RK4.
/// Amplitudes between trajectory samples come from cubic Hermite interpolation.
pub fn integrate_corrector(
    a_traj: &Trajectory,
    sys: &TransportSystem,
    eps: f64,
    dt: f64,
) -> Result<CorrectorTrajectory> {
    let tables = sys.corrector.as_ref().ok_or_else(|| {
        Error::Unsupported(format!(
            "corrector system needs sigma = 1 and d = 1 (sigma = {}, d = {})",
            sys.sigma, sys.d
        ))
    })?;
    if !(eps > 0.0 && eps <= 1.0 && dt > 0.0) {
        return Err(Error::InvalidParameters(format!("need 0 < eps <= 1 and dt > 0 (eps = {eps}, dt = {dt})")));
    }
    if a_traj.modes != sys.active {
        return Err(Error::InvalidParameters("trajectory was not produced by this system".into()));
    }
    if a_traj.len() < 2 || a_traj.times[0] != 0.0 {
        return Err(Error::MissingCoverage {
            t: 0.0,
            end: if a_traj.is_empty() { 0.0 } else { a_traj.end_time() },
        });
    }
    let t_end = a_traj.end_time();
    let times = step_times(t_end, dt.min(t_end));
    let interp = HermiteAmplitudes::new(a_traj, sys);
    let na = sys.active.len();
    let nb = tables.modes.len();
    let alpha = a_traj.dense(0).to_vec();

    let inhomogeneity = |t: f64, a: &[Complex64], g: &mut [Complex64]| {
        for (slot, terms) in tables.nonresonant.iter().enumerate() {
            let mut acc = Complex64::default();
            for &([k, l, m], delta) in terms {
                let now = a[k] * a[l].conj() * a[m];
                let start = alpha[k] * alpha[l].conj() * alpha[m];
                let phase = (I * (delta as f64 * t / (2.0 * eps))).exp();
                acc += (now * phase - start) * (2.0 / delta as f64);
            }
            g[slot] = -acc;
        }
    };

    let mut a_buf = vec![Complex64::default(); na];
    let mut g_buf = vec![Complex64::default(); nb];
    let mut b_buf = vec![Complex64::default(); nb];
    let mut ab = vec![Complex64::default(); nb];
    let mut f = |t: f64, integral: &[Complex64], out: &mut [Complex64]| {
        interp.eval(t, &mut a_buf);
        inhomogeneity(t, &a_buf, &mut g_buf);
        for q in 0..nb {
            b_buf[q] = integral[q] + g_buf[q];
            ab[q] = tables.active_of[q].map(|p| a_buf[p]).unwrap_or_default();
        }
        let mass: f64 = a_buf.iter().map(|c| c.norm_sqr()).sum();
        let cross: Complex64 = (0..nb).map(|q| ab[q].conj() * b_buf[q] + ab[q] * b_buf[q].conj()).sum();
        for (slot, triples) in tables.resonant.iter().enumerate() {
            let mut acc = Complex64::default();
            for &[k, l, m] in triples {
                acc += ab[k] * ab[l].conj() * b_buf[m]
                    + ab[k] * b_buf[l].conj() * ab[m]
                    + b_buf[k] * ab[l].conj() * ab[m];
            }
            out[slot] = -I * acc;
            if sys.renormalized {
                out[slot] += 2.0 * I * (b_buf[slot] * mass + ab[slot] * cross);
            }
        }
    };

    let mut integral = vec![Complex64::default(); nb];
    let mut rk = Rk4::new(nb);
    let mut values = Vec::with_capacity(times.len());
    values.push(vec![Complex64::default(); nb]);
    let mut a_now = vec![Complex64::default(); na];
    let mut g_now = vec![Complex64::default(); nb];
    for w in times.windows(2) {
        rk.step(&mut f, w[0], w[1] - w[0], &mut integral);
        interp.eval(w[1], &mut a_now);
        inhomogeneity(w[1], &a_now, &mut g_now);
        let b: Vec<Complex64> = integral.iter().zip(&g_now).map(|(x, g)| x + g).collect();
        if b.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::IntegrationDiverged { t: w[1] });
        }
        values.push(b);
    }
    Ok(CorrectorTrajectory {
        eps,
        modes: tables.modes.clone(),
        times,
        values,
    })
}

/// Zero-mode corrector of the two-mode data `alpha = {1: 1, 2: 1}`:
/// `-((1 - 3 eps)/(1 + eps)) e^{-4it} (e^{it + it/eps} - 1)`, or `-(e^{it + it/eps} - 1)`
/// for the renormalized equation.
pub fn two_mode_zero_corrector(eps: f64, t: f64, renormalized: bool) -> Complex64 {
    let burst = (I * (t + t / eps)).exp() - 1.0;
    if renormalized {
        -burst
    } else {
        -((1.0 - 3.0 * eps) / (1.0 + eps)) * (-4.0 * I * t).exp() * burst
    }
}

/// First `t > 0` with `|b_0^eps(t)| = 1` for the two-mode data, by bisection on the
/// closed-form modulus over `(0, pi eps/(1 + eps)]`, where it increases monotonically.
pub fn corrector_peak_time(eps: f64, renormalized: bool) -> Result<f64> {
    if !(eps > 0.0 && eps <= 0.125) {
        return Err(Error::InvalidParameters(format!("need 0 < eps <= 1/8, got {eps}")));
    }
    let modulus = |t: f64| two_mode_zero_corrector(eps, t, renormalized).norm();
    let mut lo = 0.0;
    let mut hi = std::f64::consts::PI * eps / (1.0 + eps);
    if modulus(hi) < 1.0 {
        return Err(Error::RootNotFound(format!(
            "|b_0| stays below 1 on (0, {})",
            2.0 * hi
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if modulus(mid) < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
