//! Pseudo-spectral solver for the semiclassical NLS
//! `i eps u_t + (eps^2/2) Lap u = eps mu |u|^{2 sigma} u` on `T^d`, and its
//! renormalized cubic variant, by Strang splitting.
//!
//! Grid values live on `x_g = 2 pi g / M` in row-major order (last axis fastest).
//! Fourier bins follow the convention of [`crate::modes`]: bin `m` holds
//! `M^{-d} sum_g u(x_g) e^{-i m.x_g}`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::modes::{ModeField, ModeIndex};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    dim: usize,
    points: usize,
    values: Vec<Complex64>,
}

impl GridField {
    pub fn zeros(dim: usize, points: usize) -> Result<Self> {
        check_grid(dim, points)?;
        Ok(GridField {
            dim,
            points,
            values: vec![Complex64::default(); points.pow(dim as u32)],
        })
    }

    pub fn from_values(dim: usize, points: usize, values: Vec<Complex64>) -> Result<Self> {
        check_grid(dim, points)?;
        if values.len() != points.pow(dim as u32) {
            return Err(Error::InvalidParameters(format!(
                "expected {} grid values, got {}",
                points.pow(dim as u32),
                values.len()
            )));
        }
        Ok(GridField { dim, points, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Grid coordinates of flat index `i`.
    pub fn coords(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim];
        for axis in (0..self.dim).rev() {
            out[axis] = i % self.points;
            i /= self.points;
        }
        out
    }

    /// Mean of `|u|^2` over the grid, i.e. `(2 pi)^{-d} int |u|^2`.
    pub fn mass(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.values.len() as f64
    }

    /// Discrete `l^2` norm of the grid samples.
    pub fn l2(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &GridField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn is_finite(&self) -> bool {
        self.values.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

fn check_grid(dim: usize, points: usize) -> Result<()> {
    if !(1..=3).contains(&dim) {
        return Err(Error::Unsupported(format!("grid dimension {dim} (supported: 1 to 3)")));
    }
    if points < 4 || !points.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!(
            "points per axis must be even and >= 4, got {points}"
        )));
    }
    Ok(())
}

/// Smallest `M = (1/eps) 2^k >= 2 (2 sigma + 2) max|j| / eps` (and at least 16), which keeps
/// `(2 sigma + 1)`-fold products of the data below the Nyquist bin and makes the
/// sublattice `(1/eps) Z^d` part of the grid. A power of two whenever `1/eps` is.
pub fn grid_size_for(max_component: i64, eps: f64, sigma: usize) -> usize {
    let need = (2.0 * (2 * sigma + 2) as f64 * max_component.max(1) as f64 / eps).ceil() as usize;
    let inv = (1.0 / eps).round();
    if inv >= 1.0 && (1.0 / eps - inv).abs() <= 1e-9 * inv {
        let base = inv as usize;
        let mut m = base;
        while m < need.max(16) || !m.is_multiple_of(2) {
            m *= 2;
        }
        m
    } else {
        need.next_power_of_two().max(16)
    }
}

/// Signed frequency of FFT bin `k` on `m` points.
pub fn bin_frequency(k: usize, m: usize) -> i64 {
    if k < m / 2 {
        k as i64
    } else {
        k as i64 - m as i64
    }
}

struct GridFft {
    dim: usize,
    points: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    line: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl GridFft {
    fn new(dim: usize, points: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(points);
        let inverse = planner.plan_fft_inverse(points);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        GridFft {
            dim,
            points,
            forward,
            inverse,
            line: vec![Complex64::default(); points],
            scratch: vec![Complex64::default(); scratch_len],
        }
    }

    fn transform(&mut self, data: &mut [Complex64], forward: bool) {
        let fft = if forward { &self.forward } else { &self.inverse };
        let m = self.points;
        for axis in 0..self.dim {
            let stride = m.pow((self.dim - 1 - axis) as u32);
            if stride == 1 {
                fft.process_with_scratch(data, &mut self.scratch);
                continue;
            }
            let block = stride * m;
            for base in (0..data.len()).step_by(block) {
                for offset in 0..stride {
                    let start = base + offset;
                    for k in 0..m {
                        self.line[k] = data[start + k * stride];
                    }
                    fft.process_with_scratch(&mut self.line, &mut self.scratch);
                    for k in 0..m {
                        data[start + k * stride] = self.line[k];
                    }
                }
            }
        }
    }

    /// Grid samples to Fourier coefficients (normalized).
    fn to_coefficients(&mut self, data: &mut [Complex64]) {
        self.transform(data, true);
        let scale = 1.0 / data.len() as f64;
        data.iter_mut().for_each(|c| *c *= scale);
    }

    fn to_samples(&mut self, data: &mut [Complex64]) {
        self.transform(data, false);
    }

    /// `|m|^2` for every bin in flat order.
    fn wavenumber_sq(&self) -> Vec<f64> {
        let m = self.points;
        let total = m.pow(self.dim as u32);
        (0..total)
            .map(|mut i| {
                let mut sq = 0.0;
                for _ in 0..self.dim {
                    let f = bin_frequency(i % m, m) as f64;
                    sq += f * f;
                    i /= m;
                }
                sq
            })
            .collect()
    }
}

fn bin_index(mode: &ModeIndex, points: usize) -> Result<usize> {
    let half = (points / 2) as i64;
    let mut idx = 0usize;
    for &c in mode.components() {
        if c.abs() >= half {
            return Err(Error::Aliasing {
                mode: mode.to_string(),
                points,
            });
        }
        idx = idx * points + c.rem_euclid(points as i64) as usize;
    }
    Ok(idx)
}

/// Samples `sum_m c_m e^{i m.x}` on the `points^d` grid; `f` is indexed by physical wavenumbers.
pub fn modes_to_grid(f: &ModeField, points: usize) -> Result<GridField> {
    let mut grid = GridField::zeros(f.dim(), points)?;
    for (m, c) in f.iter() {
        grid.values[bin_index(m, points)?] = *c;
    }
    GridFft::new(f.dim(), points).to_samples(&mut grid.values);
    Ok(grid)
}

/// All Fourier coefficients of a grid field, in flat bin order.
pub fn grid_coefficients(g: &GridField) -> Vec<Complex64> {
    let mut data = g.values.clone();
    GridFft::new(g.dim, g.points).to_coefficients(&mut data);
    data
}

/// Fourier coefficients of `g` on the box `|m|_inf <= half_width`.
pub fn grid_to_modes(g: &GridField, half_width: i64) -> Result<ModeField> {
    if half_width < 0 || half_width >= (g.points / 2) as i64 {
        return Err(Error::Aliasing {
            mode: format!("box of half-width {half_width}"),
            points: g.points,
        });
    }
    let coeffs = grid_coefficients(g);
    let mut out = ModeField::new(g.dim);
    for (i, c) in coeffs.iter().enumerate() {
        let freq: Vec<i64> = g.coords(i).iter().map(|&k| bin_frequency(k, g.points)).collect();
        if freq.iter().all(|f| f.abs() <= half_width) {
            out.set(ModeIndex::new(&freq), *c)?;
        }
    }
    Ok(out)
}

/// Coefficients on the sublattice `stride * Z^d`, relabeled `m -> m / stride`.
///
/// For data built from modes `j / eps` this recovers the slow-mode field.
pub fn grid_to_slow_modes(g: &GridField, stride: usize) -> Result<ModeField> {
    if stride == 0 || !g.points.is_multiple_of(stride) {
        return Err(Error::InvalidParameters(format!(
            "stride {stride} does not divide {} grid points",
            g.points
        )));
    }
    let coeffs = grid_coefficients(g);
    let mut out = ModeField::new(g.dim);
    for (i, c) in coeffs.iter().enumerate() {
        let coords = g.coords(i);
        if coords.iter().all(|k| k % stride == 0) {
            let slow: Vec<i64> = coords
                .iter()
                .map(|&k| bin_frequency(k, g.points) / stride as i64)
                .collect();
            out.set(ModeIndex::new(&slow), *c)?;
        }
    }
    Ok(out)
}

/// Wiener norm of `g - f` computed over every grid bin (so contributions of `g`
/// outside the support of `f` are included).
pub fn wiener_distance(g: &GridField, f: &ModeField) -> Result<f64> {
    let mut coeffs = grid_coefficients(g);
    for (m, c) in f.iter() {
        coeffs[bin_index(m, g.points)?] -= c;
    }
    Ok(coeffs.iter().map(|c| c.norm()).sum())
}

/// `e^{i (t/2) eps Lap}`: multiplies bin `m` by `e^{-i eps t |m|^2 / 2}`.
pub fn free_propagate(g: &GridField, t: f64, eps: f64) -> GridField {
    let mut fft = GridFft::new(g.dim, g.points);
    let ksq = fft.wavenumber_sq();
    let mut data = g.values.clone();
    fft.to_coefficients(&mut data);
    for (c, k2) in data.iter_mut().zip(&ksq) {
        *c *= (-I * (eps * t * k2 / 2.0)).exp();
    }
    fft.to_samples(&mut data);
    GridField {
        dim: g.dim,
        points: g.points,
        values: data,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub eps: f64,
    pub dt: f64,
    pub sigma: usize,
    pub renormalized: bool,
    /// `+1` defocusing, `-1` focusing.
    pub mu: f64,
}

impl SolverConfig {
    /// Defocusing configuration with the default step `dt = eps / 100`.
    pub fn new(eps: f64, sigma: usize, renormalized: bool) -> Result<Self> {
        let cfg = SolverConfig {
            eps,
            dt: eps / 100.0,
            sigma,
            renormalized,
            mu: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `1/eps` as an integer.
    pub fn inverse_eps(&self) -> Result<u64> {
        let inv = 1.0 / self.eps;
        let n = inv.round();
        if !(self.eps > 0.0 && self.eps <= 1.0) || (inv - n).abs() > 1e-9 * n {
            return Err(Error::InvalidParameters(format!(
                "eps = {} is not the reciprocal of a positive integer",
                self.eps
            )));
        }
        Ok(n as u64)
    }

    pub fn validate(&self) -> Result<()> {
        self.inverse_eps()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameters(format!("dt = {} must be positive", self.dt)));
        }
        if self.sigma == 0 {
            return Err(Error::InvalidParameters("sigma must be >= 1".into()));
        }
        if self.mu != 1.0 && self.mu != -1.0 {
            return Err(Error::InvalidParameters(format!("mu = {} must be +1 or -1", self.mu)));
        }
        if self.renormalized && self.sigma != 1 {
            return Err(Error::Unsupported("renormalized equation is cubic only".into()));
        }
        Ok(())
    }
}

/// Strang splitting: half nonlinear step, exact free step, half nonlinear step.
pub struct SplitStepSolver {
    cfg: SolverConfig,
    fft: GridFft,
    ksq: Vec<f64>,
    kinetic: Option<(f64, Vec<Complex64>)>,
}

impl SplitStepSolver {
    pub fn new(dim: usize, points: usize, cfg: SolverConfig) -> Result<Self> {
        check_grid(dim, points)?;
        cfg.validate()?;
        let fft = GridFft::new(dim, points);
        let ksq = fft.wavenumber_sq();
        Ok(SplitStepSolver {
            cfg,
            fft,
            ksq,
            kinetic: None,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    fn nonlinear(&self, u: &mut [Complex64], h: f64) {
        let cfg = &self.cfg;
        let shift = if cfg.renormalized {
            2.0 * u.iter().map(|c| c.norm_sqr()).sum::<f64>() / u.len() as f64
        } else {
            0.0
        };
        for c in u.iter_mut() {
            let density = c.norm_sqr();
            let potential = if cfg.sigma == 1 { density } else { density.powi(cfg.sigma as i32) };
            *c *= (-I * (h * cfg.mu * (potential - shift))).exp();
        }
    }

    fn linear(&mut self, u: &mut [Complex64], h: f64) {
        let reuse = matches!(&self.kinetic, Some((step, _)) if *step == h);
        if !reuse {
            let eps = self.cfg.eps;
            let factors = self.ksq.iter().map(|k2| (-I * (eps * h * k2 / 2.0)).exp()).collect();
            self.kinetic = Some((h, factors));
        }
        let factors = &self.kinetic.as_ref().expect("set above").1;
        self.fft.to_coefficients(u);
        for (c, f) in u.iter_mut().zip(factors) {
            *c *= f;
        }
        self.fft.to_samples(u);
    }

    /// Advances `u` by `duration` in `ceil(duration / dt)` equal steps.
    pub fn advance(&mut self, u: &mut GridField, duration: f64) -> Result<()> {
        if duration < 0.0 || !duration.is_finite() {
            return Err(Error::InvalidParameters(format!("duration {duration} must be >= 0")));
        }
        if u.dim != self.fft.dim || u.points != self.fft.points {
            return Err(Error::InvalidParameters("grid shape does not match the solver".into()));
        }
        if duration == 0.0 {
            return Ok(());
        }
        let steps = ((duration / self.cfg.dt) - 1e-9).ceil().max(1.0) as usize;
        let h = duration / steps as f64;
        for step in 0..steps {
            self.nonlinear(&mut u.values, h / 2.0);
            self.linear(&mut u.values, h);
            self.nonlinear(&mut u.values, h / 2.0);
            if (step + 1) % 64 == 0 && !u.is_finite() {
                return Err(Error::SolverDiverged {
                    t: (step + 1) as f64 * h,
                });
            }
        }
        if !u.is_finite() {
            return Err(Error::SolverDiverged { t: duration });
        }
        Ok(())
    }
}

/// Solves from `u0` up to time `t_end`.
pub fn split_step(u0: &GridField, cfg: &SolverConfig, t_end: f64) -> Result<GridField> {
    let mut solver = SplitStepSolver::new(u0.dim, u0.points, *cfg)?;
    let mut u = u0.clone();
    solver.advance(&mut u, t_end)?;
    Ok(u)
}

/// A complex function sampled at `0, step, 2 step, ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    pub step: f64,
    pub values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn from_fn(t_end: f64, step: f64, f: impl Fn(f64) -> Complex64) -> Self {
        let n = (t_end / step).round() as usize;
        SampledFunction {
            step,
            values: (0..=n).map(|i| f(i as f64 * step)).collect(),
        }
    }

    pub fn span(&self) -> f64 {
        self.step * (self.values.len().saturating_sub(1)) as f64
    }

    /// Quadratic interpolation through the three nodes nearest `t`.
    fn interpolate(&self, t: f64) -> Complex64 {
        let n = self.values.len();
        if n < 3 {
            let i = ((t / self.step).floor() as usize).min(n.saturating_sub(2));
            let s = t / self.step - i as f64;
            return self.values[i] * (1.0 - s) + self.values[(i + 1).min(n - 1)] * s;
        }
        let i = ((t / self.step).round() as usize).clamp(1, n - 2);
        let s = t / self.step - i as f64;
        let (a, b, c) = (self.values[i - 1], self.values[i], self.values[i + 1]);
        a * (s * (s - 1.0) / 2.0) + b * (1.0 - s * s) + c * (s * (s + 1.0) / 2.0)
    }
}

/// `int_0^t A(tau) e^{i (|j|^2 - omega) tau / (2 eps)} d tau` by composite Simpson.
///
/// Nodes up to the largest even panel count are integrated directly; a remaining
/// piece shorter than two steps gets one Simpson panel with interpolated `A`.
pub fn duhamel_oscillatory(a: &SampledFunction, j: &ModeIndex, omega: i64, eps: f64, t: f64) -> Result<Complex64> {
    if !(eps > 0.0) || !(a.step > 0.0) || a.values.len() < 2 {
        return Err(Error::InvalidParameters("need eps > 0 and at least two samples".into()));
    }
    let limit = eps / 20.0;
    if a.step > limit * (1.0 + 1e-12) {
        return Err(Error::Undersampled { step: a.step, limit });
    }
    if !(0.0..=a.span() * (1.0 + 1e-12)).contains(&t) {
        return Err(Error::InvalidParameters(format!(
            "t = {t} outside the sampled range [0, {}]",
            a.span()
        )));
    }
    let theta = (j.norm_sq() - omega) as f64 / (2.0 * eps);
    let h = a.step;
    let integrand = |i: usize| a.values[i] * (I * theta * (i as f64 * h)).exp();

    let full = ((t / h) * (1.0 + 1e-12)).floor() as usize;
    let full = full.min(a.values.len() - 1);
    let panels = full - full % 2;
    let mut sum = Complex64::default();
    if panels > 0 {
        sum += integrand(0) + integrand(panels);
        for i in 1..panels {
            sum += integrand(i) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        sum *= h / 3.0;
    }
    let start = panels as f64 * h;
    let rest = t - start;
    if rest > 1e-14 * h {
        let f = |s: f64| a.interpolate(s) * (I * theta * s).exp();
        sum += (f(start) + f(start + rest / 2.0) * 4.0 + f(t)) * (rest / 6.0);
    }
    Ok(sum)
}
