//! Norm-inflation sequences `psi_n` built from semiclassical plane-wave data, evaluated
//! through the geometric-optics approximant and rescaled to the original equation.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::approx::{log_log_slope, ApproxField};
use crate::error::{Error, Result};
use crate::modes::{fl_norm, scale_to_physical, ModeField, ModeIndex, NormSpec, Rational, ScalingParams};
use crate::spectral::{self, SolverConfig};
use crate::transport::{
    build_system, corrector_peak_time, integrate_corrector, integrate_transport, AmplitudeState, TransportSystem,
};

/// Required relative margin in the strict feasibility inequalities when `beta` is chosen automatically.
const MARGIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    #[serde(rename = "multiD-cubic")]
    MultiDCubic,
    #[serde(rename = "multiD-higher")]
    MultiDHigher,
    #[serde(rename = "quintic-1d")]
    Quintic1d,
    #[serde(rename = "cubic-1d")]
    Cubic1d,
    #[serde(rename = "renormalized-1d")]
    Renormalized1d,
    #[serde(rename = "renormalized-multiD")]
    RenormalizedMultiD,
}

impl Case {
    pub const ALL: [Case; 6] = [
        Case::MultiDCubic,
        Case::MultiDHigher,
        Case::Quintic1d,
        Case::Cubic1d,
        Case::Renormalized1d,
        Case::RenormalizedMultiD,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Case::MultiDCubic => "multiD-cubic",
            Case::MultiDHigher => "multiD-higher",
            Case::Quintic1d => "quintic-1d",
            Case::Cubic1d => "cubic-1d",
            Case::Renormalized1d => "renormalized-1d",
            Case::RenormalizedMultiD => "renormalized-multiD",
        }
    }

    pub fn renormalized(&self) -> bool {
        matches!(self, Case::Renormalized1d | Case::RenormalizedMultiD)
    }

    /// The one-dimensional cubic cases, where the zero mode only appears in the corrector.
    pub fn uses_corrector(&self) -> bool {
        matches!(self, Case::Cubic1d | Case::Renormalized1d)
    }

    pub fn default_sigma(&self) -> usize {
        match self {
            Case::MultiDHigher | Case::Quintic1d => 2,
            _ => 1,
        }
    }

    pub fn default_d(&self) -> usize {
        match self {
            Case::MultiDCubic | Case::MultiDHigher | Case::RenormalizedMultiD => 2,
            _ => 1,
        }
    }

    pub fn default_base_n(&self) -> Vec<u64> {
        match self {
            Case::Cubic1d | Case::Renormalized1d => vec![3, 4, 6, 8, 12, 16],
            Case::Quintic1d => vec![2, 3, 4, 5, 6, 8],
            _ => vec![2, 3, 4, 5],
        }
    }

    pub fn check(&self, sigma: usize, d: usize) -> Result<()> {
        let ok = match self {
            Case::MultiDCubic | Case::RenormalizedMultiD => sigma == 1 && d >= 2,
            Case::MultiDHigher => sigma >= 2 && d >= 2,
            Case::Quintic1d => sigma == 2 && d == 1,
            Case::Cubic1d | Case::Renormalized1d => sigma == 1 && d == 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameters(format!(
                "case {} is inconsistent with sigma = {sigma}, d = {d}",
                self.name()
            )))
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Case::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Case::ALL.iter().map(|c| c.name()).collect();
            Error::InvalidParameters(format!("unknown case '{s}' (expected one of {})", names.join(", ")))
        })
    }
}

/// Left and right sides `(lhs, rhs)` of each strict inequality `lhs > rhs` that `beta` must satisfy.
pub fn feasibility_sides(case: Case, s: f64, sigma: usize, beta: f64) -> Vec<(f64, f64)> {
    let a = s.abs();
    if case.uses_corrector() {
        vec![(beta, 2.0), (a, beta / (beta + 1.0))]
    } else {
        vec![(a * (beta + 1.0) / 2.0, beta / (2.0 * sigma as f64))]
    }
}

/// Relative slack `lhs / rhs - 1` of each feasibility inequality.
pub fn feasibility_margins(case: Case, s: f64, sigma: usize, beta: Rational) -> Vec<f64> {
    feasibility_sides(case, s, sigma, beta.to_f64())
        .into_iter()
        .map(|(l, r)| l / r - 1.0)
        .collect()
}

fn check_regularity(case: Case, s: f64) -> Result<()> {
    if !(s < 0.0) || !s.is_finite() {
        return Err(Error::InfeasibleRegularity {
            s,
            reason: "input regularity must be negative".into(),
        });
    }
    if case.uses_corrector() && s >= -2.0 / 3.0 {
        return Err(Error::InfeasibleRegularity {
            s,
            reason: format!("case {case} needs s < -2/3 (beta > 2 forces beta/(beta+1) > 2/3)"),
        });
    }
    Ok(())
}

/// Smallest-denominator, then smallest-numerator rational `beta = p/q` (q <= 8) meeting the
/// case's strict inequalities with a 5% margin.
pub fn choose_beta(s: f64, sigma: usize, case: Case) -> Result<Rational> {
    check_regularity(case, s)?;
    if sigma == 0 {
        return Err(Error::InvalidParameters("sigma must be >= 1".into()));
    }
    for q in 1..=8u64 {
        for p in 1..=64 * q {
            if gcd(p, q) != 1 {
                continue;
            }
            let beta = p as f64 / q as f64;
            let sides = feasibility_sides(case, s, sigma, beta);
            if sides.iter().all(|(l, r)| *l >= (1.0 + MARGIN) * r) {
                return Rational::new(p, q);
            }
        }
    }
    Err(Error::InfeasibleRegularity {
        s,
        reason: format!("no beta = p/q with q <= 8 satisfies the {case} conditions with a 5% margin"),
    })
}

/// Strict feasibility (no margin) of a user-supplied `beta`.
pub fn check_beta(case: Case, s: f64, sigma: usize, beta: Rational) -> Result<()> {
    check_regularity(case, s)?;
    let violated = feasibility_sides(case, s, sigma, beta.to_f64())
        .into_iter()
        .find(|(l, r)| l <= r);
    match violated {
        Some((l, r)) => Err(Error::InfeasibleRegularity {
            s,
            reason: format!("beta = {beta} violates a feasibility inequality ({l} <= {r})"),
        }),
        None => Ok(()),
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Plane-wave data of the case, as slow modes with unit coefficients.
pub fn initial_data(case: Case, params: &ScalingParams) -> Result<ModeField> {
    let d = params.d();
    let sigma = params.sigma() as usize;
    case.check(sigma, d)?;
    match case {
        Case::MultiDCubic | Case::MultiDHigher | Case::RenormalizedMultiD => {
            let mut e1 = vec![0i64; d];
            e1[0] = 1;
            let mut e2 = vec![0i64; d];
            e2[1] = 1;
            let mut e12 = vec![0i64; d];
            e12[0] = 1;
            e12[1] = 1;
            ModeField::unit_modes(d, [e1, e2, e12].iter().map(|v| ModeIndex::new(v)))
        }
        Case::Quintic1d => ModeField::unit_modes(1, [2, -1, -2, 4, 3]),
        Case::Cubic1d | Case::Renormalized1d => ModeField::unit_modes(1, [1, 2]),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub case: Case,
    pub sigma: usize,
    pub d: usize,
    pub s: f64,
    pub r: f64,
    pub p: f64,
    /// Chosen by [`choose_beta`] when absent.
    pub beta: Option<Rational>,
    pub base_n_list: Vec<u64>,
    /// Slow observation time (ignored by the corrector cases, which use the peak time).
    pub tau: f64,
    /// Truncation box for the transport closure; defaults to twice the largest data component.
    pub k_box: Option<i64>,
    pub cross_validate: bool,
}

impl ExperimentSpec {
    /// Case defaults: `r = 0`, `p = 2`, `tau = 0.1`.
    pub fn new(case: Case, s: f64) -> Self {
        ExperimentSpec {
            case,
            sigma: case.default_sigma(),
            d: case.default_d(),
            s,
            r: 0.0,
            p: 2.0,
            beta: None,
            base_n_list: case.default_base_n(),
            tau: 0.1,
            k_box: None,
            cross_validate: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InflationRecord {
    pub n: usize,
    pub base_n: u64,
    pub kappa: u32,
    pub eps: f64,
    pub t_n: f64,
    pub norm_in: f64,
    pub norm_out: f64,
    pub zero_mode_abs: f64,
    pub lower_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrossValidation {
    pub base_n: u64,
    pub eps: f64,
    pub grid_points: usize,
    pub norm_out_approx: f64,
    pub norm_out_solver: f64,
    pub relative_gap: f64,
}

/// Log-log slopes against `eps`; absent with fewer than two records.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FittedExponents {
    pub norm_in: Option<f64>,
    pub norm_out: Option<f64>,
    pub zero_mode_abs: Option<f64>,
    pub lower_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InflationRun {
    pub case: Case,
    pub sigma: usize,
    pub d: usize,
    pub s: f64,
    pub r: f64,
    pub p: f64,
    pub beta: Rational,
    pub beta_chosen: bool,
    pub feasibility_margins: Vec<f64>,
    pub k_box: i64,
    pub active_modes: usize,
    /// Slow observation time per record (`tau`, or the corrector peak time).
    pub slow_times: Vec<f64>,
    /// `|a_0(tau)|` for the first-order cases.
    pub zero_amplitude: Option<f64>,
    pub records: Vec<InflationRecord>,
    pub exponents: FittedExponents,
    pub cross_validation: Vec<CrossValidation>,
}

/// Largest `eps` resolved by the solver cross-check, by dimension.
fn solver_floor(d: usize) -> Option<f64> {
    match d {
        1 => Some(1.0 / 64.0),
        2 => Some(1.0 / 32.0),
        _ => None,
    }
}

struct Evolved {
    slow_time: f64,
    approx: ApproxField,
}

fn evolve(spec: &ExperimentSpec, sys: &TransportSystem, alpha: &ModeField, eps: f64, first: Option<&AmplitudeState>) -> Result<Evolved> {
    if let Some(a) = first {
        let approx = ApproxField::first_order(eps, a.clone())?;
        return Ok(Evolved {
            slow_time: spec.tau,
            approx,
        });
    }
    let tau = corrector_peak_time(eps, spec.case.renormalized())?;
    let dt = 1e-3f64.min(eps / 200.0);
    let traj = integrate_transport(alpha, sys, tau, dt)?;
    let corr = integrate_corrector(&traj, sys, eps, dt)?;
    Ok(Evolved {
        slow_time: tau,
        approx: ApproxField::second_order(traj.final_state(), corr.final_state())?,
    })
}

fn cross_validate(
    spec: &ExperimentSpec,
    alpha: &ModeField,
    params: &ScalingParams,
    ev: &Evolved,
    out_norm: NormSpec,
    norm_out_approx: f64,
) -> Result<CrossValidation> {
    let eps = params.eps();
    let n = params.inverse_eps().ok_or_else(|| Error::InvalidParameters("1/eps overflows".into()))?;
    let widest = ev.approx.slow_modes().support().map(|m| m.linf()).max().unwrap_or(1);
    let points = spectral::grid_size_for(widest, eps, spec.sigma);
    let physical = ApproxField::first_order(
        eps,
        AmplitudeState {
            time: 0.0,
            values: alpha.clone(),
        },
    )?
    .physical_modes()?;
    let u0 = spectral::modes_to_grid(&physical, points)?;
    let cfg = SolverConfig::new(eps, spec.sigma, spec.case.renormalized())?;
    let u = spectral::split_step(&u0, &cfg, ev.slow_time)?;
    let slow = spectral::grid_to_slow_modes(&u, n as usize)?;
    let norm_out_solver = fl_norm(&scale_to_physical(&slow, params, false)?, out_norm)?;
    Ok(CrossValidation {
        base_n: params.base_n(),
        eps,
        grid_points: points,
        norm_out_approx,
        norm_out_solver,
        relative_gap: (norm_out_approx - norm_out_solver).abs() / norm_out_approx,
    })
}

/// Runs the experiment for every `baseN` in the spec (in parallel) and returns the records in order.
pub fn run_inflation(spec: &ExperimentSpec) -> Result<InflationRun> {
    spec.case.check(spec.sigma, spec.d)?;
    let in_norm = NormSpec::new(spec.s, spec.p)?;
    let out_norm = NormSpec::new(spec.r, spec.p)?;
    let (beta, beta_chosen) = match spec.beta {
        Some(b) => {
            check_beta(spec.case, spec.s, spec.sigma, b)?;
            (b, false)
        }
        None => (choose_beta(spec.s, spec.sigma, spec.case)?, true),
    };
    if spec.base_n_list.is_empty() {
        return Err(Error::InvalidParameters("baseN list is empty".into()));
    }
    if spec.base_n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameters("baseN list must be strictly increasing".into()));
    }
    if !spec.case.uses_corrector() && !(spec.tau > 0.0 && spec.tau.is_finite()) {
        return Err(Error::InvalidParameters(format!("tau = {} must be positive", spec.tau)));
    }
    let params: Vec<ScalingParams> = spec
        .base_n_list
        .iter()
        .map(|&n| ScalingParams::new(beta, spec.sigma as u32, spec.d, n))
        .collect::<Result<_>>()?;
    let alpha = initial_data(spec.case, &params[0])?;
    let support: Vec<ModeIndex> = alpha.support().cloned().collect();
    let widest = support.iter().map(|m| m.linf()).max().unwrap_or(1);
    let k_box = spec.k_box.unwrap_or(2 * widest);
    let sys = build_system(&support, spec.sigma, spec.d, spec.case.renormalized(), k_box)?;

    let first = if spec.case.uses_corrector() {
        None
    } else {
        let dt = 1e-3f64.min(spec.tau / 10.0);
        Some(integrate_transport(&alpha, &sys, spec.tau, dt)?.final_state())
    };
    let zero = ModeIndex::zero(spec.d);
    let zero_amplitude = first.as_ref().map(|a| a.values.get(&zero).norm());

    let results: Vec<(InflationRecord, f64, Option<CrossValidation>)> = params
        .par_iter()
        .enumerate()
        .map(|(i, prm)| {
            let eps = prm.eps();
            let norm_in = fl_norm(&scale_to_physical(&alpha, prm, false)?, in_norm)?;
            let ev = evolve(spec, &sys, &alpha, eps, first.as_ref())?;
            let slow = ev.approx.slow_modes();
            let physical = scale_to_physical(&slow, prm, false)?;
            let norm_out = fl_norm(&physical, out_norm)?;
            let zero_mode_abs = physical.get(&zero).norm();
            let lower_bound = if spec.case.uses_corrector() {
                // a_0 vanishes, so the slow zero coefficient is eps * b_0 (up to a phase).
                prm.amplitude_factor() * slow.get(&zero).norm()
            } else {
                prm.amplitude_factor() * zero_amplitude.unwrap_or_default()
            };
            let cv = match solver_floor(spec.d) {
                Some(floor) if spec.cross_validate && eps >= floor => {
                    Some(cross_validate(spec, &alpha, prm, &ev, out_norm, norm_out)?)
                }
                _ => None,
            };
            let record = InflationRecord {
                n: i + 1,
                base_n: prm.base_n(),
                kappa: prm.kappa(),
                eps,
                t_n: prm.time_to_physical(ev.slow_time),
                norm_in,
                norm_out,
                zero_mode_abs,
                lower_bound,
            };
            Ok((record, ev.slow_time, cv))
        })
        .collect::<Result<_>>()?;

    let mut records = Vec::with_capacity(results.len());
    let mut slow_times = Vec::with_capacity(results.len());
    let mut cross = Vec::new();
    for (rec, t, cv) in results {
        records.push(rec);
        slow_times.push(t);
        cross.extend(cv);
    }
    Ok(InflationRun {
        case: spec.case,
        sigma: spec.sigma,
        d: spec.d,
        s: spec.s,
        r: spec.r,
        p: spec.p,
        beta,
        beta_chosen,
        feasibility_margins: feasibility_margins(spec.case, spec.s, spec.sigma, beta),
        k_box,
        active_modes: sys.active_modes().len(),
        slow_times,
        zero_amplitude,
        exponents: fit_exponents(&records),
        records,
        cross_validation: cross,
    })
}

fn fit_exponents(records: &[InflationRecord]) -> FittedExponents {
    if records.len() < 2 {
        return FittedExponents::default();
    }
    let eps: Vec<f64> = records.iter().map(|r| r.eps).collect();
    let fit = |f: fn(&InflationRecord) -> f64| {
        let v: Vec<f64> = records.iter().map(f).collect();
        log_log_slope(&eps, &v).ok().map(|(slope, _)| slope)
    };
    FittedExponents {
        norm_in: fit(|r| r.norm_in),
        norm_out: fit(|r| r.norm_out),
        zero_mode_abs: fit(|r| r.zero_mode_abs),
        lower_bound: fit(|r| r.lower_bound),
    }
}

pub const CSV_HEADER: &str = "n,baseN,kappa,eps,t_n,norm_in,norm_out,zero_mode_abs,lower_bound";

pub fn records_to_csv(records: &[InflationRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{:e},{:e},{:e},{:e},{:e},{:e}\n",
            r.n, r.base_n, r.kappa, r.eps, r.t_n, r.norm_in, r.norm_out, r.zero_mode_abs, r.lower_bound
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_names_round_trip() {
        for c in Case::ALL {
            assert_eq!(c.name().parse::<Case>().unwrap(), c);
        }
        assert!("cubic".parse::<Case>().is_err());
    }

    #[test]
    fn beta_examples() {
        assert_eq!(choose_beta(-0.5, 1, Case::MultiDCubic).unwrap(), Rational::new(1, 2).unwrap());
        assert_eq!(choose_beta(-0.8, 1, Case::Cubic1d).unwrap(), Rational::new(3, 1).unwrap());
        assert_eq!(choose_beta(-0.5, 2, Case::Quintic1d).unwrap(), Rational::new(1, 1).unwrap());
        let err = choose_beta(-0.5, 1, Case::Cubic1d).unwrap_err();
        assert_eq!(err.reason(), "infeasible-regularity");
        assert!(choose_beta(0.1, 1, Case::MultiDCubic).is_err());
    }

    #[test]
    fn chosen_beta_has_margin() {
        // At s = -0.1 the cubic condition needs beta < 0.105, below every p/q with q <= 8.
        assert!(choose_beta(-0.1, 1, Case::MultiDCubic).is_err());
        for s in [-0.3, -0.5, -0.9, -2.0] {
            for case in [Case::MultiDCubic, Case::Quintic1d] {
                let b = choose_beta(s, case.default_sigma(), case).unwrap();
                assert!(feasibility_margins(case, s, case.default_sigma(), b).iter().all(|m| *m >= MARGIN - 1e-12));
            }
        }
    }

    #[test]
    fn explicit_beta_checked() {
        let b = Rational::new(2, 1).unwrap();
        assert!(check_beta(Case::MultiDCubic, -0.5, 1, b).is_err());
        assert!(check_beta(Case::Cubic1d, -0.8, 1, b).is_err());
        assert!(check_beta(Case::Cubic1d, -0.8, 1, Rational::new(5, 2).unwrap()).is_ok());
    }

    #[test]
    fn initial_data_shapes() {
        let half = Rational::new(1, 2).unwrap();
        let p = ScalingParams::new(half, 1, 2, 2).unwrap();
        let a = initial_data(Case::MultiDCubic, &p).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(crate::modes::wiener_norm(&a), 3.0);
        let p = ScalingParams::new(half, 2, 1, 2).unwrap();
        assert_eq!(initial_data(Case::Quintic1d, &p).unwrap().len(), 5);
        assert!(initial_data(Case::Cubic1d, &p).is_err());
    }

    #[test]
    fn csv_header() {
        assert_eq!(records_to_csv(&[]), format!("{CSV_HEADER}\n"));
    }
}
