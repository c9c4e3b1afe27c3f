//! Geometric-optics approximants `sum_j (a_j + eps b_j) e^{i phi_j / eps}` and their
//! comparison against the split-step solver.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modes::{ModeField, ModeIndex};
use crate::spectral::{self, GridField, SolverConfig, SplitStepSolver};
use crate::transport::{
    for_each_tuple, integrate_corrector, integrate_transport, AmplitudeState, CorrectorState, TransportSystem,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ApproxOrder {
    First,
    Second,
}

impl std::str::FromStr for ApproxOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" | "1" => Ok(ApproxOrder::First),
            "second" | "2" => Ok(ApproxOrder::Second),
            _ => Err(Error::InvalidParameters(format!("unknown order '{s}' (first or second)"))),
        }
    }
}

/// `phi_j(t, x) = j.x - |j|^2 t / 2`.
pub fn phase(j: &ModeIndex, t: f64, x: &[f64]) -> f64 {
    let dot: f64 = j.components().iter().zip(x).map(|(&a, b)| a as f64 * b).sum();
    dot - j.norm_sq() as f64 * t / 2.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxField {
    order: ApproxOrder,
    eps: f64,
    inverse_eps: i64,
    amplitudes: AmplitudeState,
    correctors: Option<CorrectorState>,
}

impl ApproxField {
    pub fn first_order(eps: f64, amplitudes: AmplitudeState) -> Result<Self> {
        Ok(ApproxField {
            order: ApproxOrder::First,
            eps,
            inverse_eps: inverse_eps(eps)?,
            amplitudes,
            correctors: None,
        })
    }

    pub fn second_order(amplitudes: AmplitudeState, correctors: CorrectorState) -> Result<Self> {
        let eps = correctors.eps;
        if (amplitudes.time - correctors.time).abs() > 1e-12 * amplitudes.time.abs().max(1.0) {
            return Err(Error::InvalidParameters(format!(
                "amplitudes at t = {} but correctors at t = {}",
                amplitudes.time, correctors.time
            )));
        }
        if amplitudes.values.dim() != correctors.values.dim() {
            return Err(Error::DimensionMismatch {
                expected: amplitudes.values.dim(),
                found: correctors.values.dim(),
            });
        }
        Ok(ApproxField {
            order: ApproxOrder::Second,
            eps,
            inverse_eps: inverse_eps(eps)?,
            amplitudes,
            correctors: Some(correctors),
        })
    }

    pub fn order(&self) -> ApproxOrder {
        self.order
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn time(&self) -> f64 {
        self.amplitudes.time
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.values.dim()
    }

    /// Coefficients `(a_j + eps b_j) e^{-i |j|^2 t / (2 eps)}` indexed by slow modes `j`.
    pub fn slow_modes(&self) -> ModeField {
        let t = self.time();
        let mut total = self.amplitudes.values.clone();
        if let Some(b) = &self.correctors {
            for (j, c) in b.values.iter() {
                total.add_to(j.clone(), c * self.eps).expect("dimensions checked");
            }
        }
        total.map_values(|j, c| c * (-I * (j.norm_sq() as f64 * t / (2.0 * self.eps))).exp())
    }

    /// The same coefficients on physical wavenumbers `j / eps`.
    pub fn physical_modes(&self) -> Result<ModeField> {
        let mut out = ModeField::new(self.dim());
        for (j, c) in self.slow_modes().iter() {
            let m = j
                .checked_scale(self.inverse_eps)
                .ok_or_else(|| Error::InvalidParameters(format!("mode {j} / eps overflows")))?;
            out.set(m, *c)?;
        }
        Ok(out)
    }
}

fn inverse_eps(eps: f64) -> Result<i64> {
    let inv = 1.0 / eps;
    let n = inv.round();
    if !(eps > 0.0 && eps <= 1.0) || (inv - n).abs() > 1e-9 * n {
        return Err(Error::InvalidParameters(format!(
            "eps = {eps} is not the reciprocal of a positive integer"
        )));
    }
    Ok(n as i64)
}

/// Samples the approximant on the `points^d` grid by direct summation.
///
/// The spatial phase `(j/eps).x_g` is reduced modulo `2 pi` in integer arithmetic.
pub fn assemble(app: &ApproxField, points: usize) -> Result<GridField> {
    let physical = app.physical_modes()?;
    let half = (points / 2) as i64;
    if let Some(bad) = physical.support().find(|m| m.linf() >= half) {
        return Err(Error::Aliasing {
            mode: bad.to_string(),
            points,
        });
    }
    let mut grid = GridField::zeros(app.dim(), points)?;
    let m = points as i64;
    let unit = 2.0 * std::f64::consts::PI / points as f64;
    let terms: Vec<(&ModeIndex, &Complex64)> = physical.iter().collect();
    let dim = grid.dim();
    grid.values_mut().par_iter_mut().enumerate().for_each(|(flat, v)| {
        let mut coords = vec![0i64; dim];
        let mut rest = flat;
        for axis in (0..dim).rev() {
            coords[axis] = (rest % points) as i64;
            rest /= points;
        }
        let mut acc = Complex64::default();
        for (mode, c) in &terms {
            let k: i64 = mode
                .components()
                .iter()
                .zip(&coords)
                .map(|(&a, &g)| (a.rem_euclid(m) * g) % m)
                .sum::<i64>()
                % m;
            acc += **c * (I * (unit * k as f64)).exp();
        }
        *v = acc;
    });
    Ok(grid)
}

/// Non-resonant part of the nonlinearity: for every target `j`, the sum of
/// `a_{k1} conj(a_{k2}) ... a_{k_{2s+1}}` over active tuples with alternating sum `j`
/// that violate the square-sum identity. Oscillating phases are left to the caller.
pub fn residual_first_order(a: &AmplitudeState, sys: &TransportSystem) -> Result<ModeField> {
    let modes = sys.active_modes();
    if a.values.dim() != sys.d() {
        return Err(Error::DimensionMismatch {
            expected: sys.d(),
            found: a.values.dim(),
        });
    }
    if let Some(extra) = a.values.support().find(|j| !modes.contains(j)) {
        return Err(Error::InvalidParameters(format!("mode {extra} is not active in the system")));
    }
    let values: Vec<Complex64> = modes.iter().map(|m| a.values.get(m)).collect();
    let mut out = ModeField::new(sys.d());
    let mut failure = None;
    for_each_tuple(modes, 2 * sys.sigma() + 1, |idx, sum, sq| {
        if sq == sum.iter().map(|c| c * c).sum::<i64>() {
            return;
        }
        let mut prod = Complex64::new(1.0, 0.0);
        for (pos, &i) in idx.iter().enumerate() {
            prod *= if pos % 2 == 0 { values[i] } else { values[i].conj() };
        }
        if let Err(e) = out.add_to(ModeIndex::new(sum), prod) {
            failure = Some(e);
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Numerical settings for [`error_order`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorOrderConfig {
    /// Split-step solver step as a multiple of `eps`.
    pub solver_dt_ratio: f64,
    /// Number of equal sampling intervals on `[0, T]`.
    pub samples: usize,
    /// `+1` defocusing, `-1` focusing.
    pub mu: f64,
}

impl Default for ErrorOrderConfig {
    fn default() -> Self {
        ErrorOrderConfig {
            solver_dt_ratio: 1e-2,
            samples: 64,
            mu: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorPoint {
    pub eps: f64,
    pub sup_error: f64,
    pub grid_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorOrderReport {
    pub order: ApproxOrder,
    pub t_end: f64,
    pub points: Vec<ErrorPoint>,
    pub slope: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
}

/// Least-squares line `y = slope x + c`; returns `(slope, c, rms residual)`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(Error::DegenerateFit(format!("need at least two points, got {n}")));
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("abscissae coincide".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    Ok((slope, intercept, (rss / n as f64).sqrt()))
}

/// Slope of `log(x)` against `log(eps)`.
pub fn log_log_slope(eps: &[f64], values: &[f64]) -> Result<(f64, f64)> {
    if values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::DegenerateFit("log-log fit needs positive finite values".into()));
    }
    let x: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let (slope, _, residual) = fit_line(&x, &y)?;
    Ok((slope, residual))
}

fn sample_index(times: &[f64], t: f64) -> usize {
    let i = times.partition_point(|&s| s < t);
    if i == times.len() || (i > 0 && (t - times[i - 1]) < (times[i] - t)) {
        i - 1
    } else {
        i
    }
}

fn sup_error(
    initial: &ModeField,
    sys: &TransportSystem,
    cfg: &ErrorOrderConfig,
    eps: f64,
    order: ApproxOrder,
    t_end: f64,
) -> Result<ErrorPoint> {
    let n = inverse_eps(eps)?;
    let interval = t_end / cfg.samples as f64;
    let target_dt = 1e-3f64.min(eps / 200.0);
    let sub = (interval / target_dt).ceil().max(1.0);
    let dt = interval / sub;

    let traj = integrate_transport(initial, sys, t_end, dt)?;
    let corr = match order {
        ApproxOrder::First => None,
        ApproxOrder::Second => Some(integrate_corrector(&traj, sys, eps, dt)?),
    };
    let mut widest = sys.active_modes().iter().map(|m| m.linf()).max().unwrap_or(1);
    if let Some(c) = &corr {
        widest = widest.max(c.modes().iter().map(|m| m.linf()).max().unwrap_or(1));
    }
    let points = spectral::grid_size_for(widest, eps, sys.sigma());

    let solver_cfg = SolverConfig {
        eps,
        dt: cfg.solver_dt_ratio * eps,
        sigma: sys.sigma(),
        renormalized: sys.renormalized(),
        mu: cfg.mu,
    };
    let mut solver = SplitStepSolver::new(sys.d(), points, solver_cfg)?;
    let start = initial.map_values(|_, c| c);
    let physical_start = ApproxField::first_order(
        eps,
        AmplitudeState {
            time: 0.0,
            values: start,
        },
    )?
    .physical_modes()?;
    let mut u = spectral::modes_to_grid(&physical_start, points)?;

    let mut worst: f64 = 0.0;
    let mut t_prev = 0.0;
    for s in 0..=cfg.samples {
        let t = s as f64 * interval;
        solver.advance(&mut u, t - t_prev)?;
        t_prev = t;
        let ia = sample_index(traj.times(), t);
        let amplitudes = AmplitudeState {
            time: t,
            values: traj.state(ia).values,
        };
        let app = match &corr {
            None => ApproxField::first_order(eps, amplitudes)?,
            Some(c) => {
                let ib = sample_index(c.times(), t);
                let mut b = c.state(ib);
                b.time = t;
                ApproxField::second_order(amplitudes, b)?
            }
        };
        debug_assert_eq!(app.inverse_eps, n);
        worst = worst.max(spectral::wiener_distance(&u, &app.physical_modes()?)?);
    }
    Ok(ErrorPoint {
        eps,
        sup_error: worst,
        grid_points: points,
    })
}

/// Measures `sup_{t in [0, T]} ||u(t) - u_app(t)||_W` against the split-step solver for
/// every `eps` and fits the slope of `log(error)` against `log(eps)`.
///
/// The Wiener distance covers every grid bin, so spillover of the solution outside
/// the approximant's modes counts as error.
pub fn error_order(
    initial: &ModeField,
    sys: &TransportSystem,
    cfg: &ErrorOrderConfig,
    eps_list: &[f64],
    order: ApproxOrder,
    t_end: f64,
) -> Result<ErrorOrderReport> {
    if eps_list.len() < 3 {
        return Err(Error::InvalidParameters(format!(
            "need at least three eps values, got {}",
            eps_list.len()
        )));
    }
    for &eps in eps_list {
        inverse_eps(eps)?;
    }
    if !(t_end > 0.0 && t_end.is_finite()) || cfg.samples == 0 || !(cfg.solver_dt_ratio > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "need T > 0, samples >= 1 and a positive solver step (T = {t_end})"
        )));
    }
    let points: Vec<ErrorPoint> = eps_list
        .par_iter()
        .map(|&eps| sup_error(initial, sys, cfg, eps, order, t_end))
        .collect::<Result<_>>()?;
    let errors: Vec<f64> = points.iter().map(|p| p.sup_error).collect();
    if errors.iter().all(|e| *e == 0.0) {
        return Err(Error::DegenerateFit("all errors vanish, slope undefined".into()));
    }
    let (slope, residual) = log_log_slope(eps_list, &errors)?;
    Ok(ErrorOrderReport {
        order,
        t_end,
        points,
        slope,
        residual,
    })
}
