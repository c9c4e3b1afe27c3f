//! Lattice-mode fields on the torus and the Fourier-Lebesgue norm family.
//!
//! A [`ModeField`] stores the Fourier coefficients of a trigonometric
//! polynomial `f(x) = sum_j c_j e^{i j.x}` with `c_j = (2 pi)^{-d} int f e^{-i j.x} dx`,
//! so a plane wave `e^{i j.x}` has coefficient exactly one.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// A lattice vector in `Z^d`, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex(SmallVec<[i64; 4]>);

impl ModeIndex {
    pub fn new(components: &[i64]) -> Self {
        assert!(!components.is_empty(), "mode index needs at least one component");
        ModeIndex(SmallVec::from_slice(components))
    }

    pub fn zero(dim: usize) -> Self {
        ModeIndex(SmallVec::from_elem(0, dim))
    }

    /// One-dimensional convenience constructor.
    pub fn scalar(j: i64) -> Self {
        ModeIndex::new(&[j])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn norm_sq(&self) -> i64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn linf(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Japanese bracket `(1 + |j|^2)^{1/2}`.
    pub fn bracket(&self) -> f64 {
        let sq: f64 = self.0.iter().map(|&c| (c as f64) * (c as f64)).sum();
        (1.0 + sq).sqrt()
    }

    pub fn dot(&self, other: &ModeIndex) -> i64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn neg(&self) -> ModeIndex {
        ModeIndex(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &ModeIndex) -> ModeIndex {
        ModeIndex(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ModeIndex) -> ModeIndex {
        ModeIndex(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: i64) -> ModeIndex {
        ModeIndex(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn checked_scale(&self, factor: i64) -> Option<ModeIndex> {
        let mut out = SmallVec::new();
        for c in &self.0 {
            out.push(c.checked_mul(factor)?);
        }
        Some(ModeIndex(out))
    }
}

impl fmt::Debug for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{}", self.0[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<i64> for ModeIndex {
    fn from(j: i64) -> Self {
        ModeIndex::scalar(j)
    }
}

impl<const D: usize> From<[i64; D]> for ModeIndex {
    fn from(j: [i64; D]) -> Self {
        ModeIndex::new(&j)
    }
}

/// Finite map from lattice modes to complex amplitudes, kept canonical:
/// every key has dimension `dim` and no stored entry is exactly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeField {
    dim: usize,
    entries: BTreeMap<ModeIndex, Complex64>,
}

impl ModeField {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        ModeField {
            dim,
            entries: BTreeMap::new(),
        }
    }

    /// Builds a field, summing repeated modes and dropping zeros.
    pub fn from_entries<I, M>(dim: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (M, Complex64)>,
        M: Into<ModeIndex>,
    {
        let mut field = ModeField::new(dim);
        for (mode, value) in entries {
            field.add_to(mode.into(), value)?;
        }
        Ok(field)
    }

    /// Unit coefficients on each listed mode.
    pub fn unit_modes<I, M>(dim: usize, modes: I) -> Result<Self>
    where
        I: IntoIterator<Item = M>,
        M: Into<ModeIndex>,
    {
        ModeField::from_entries(dim, modes.into_iter().map(|m| (m, Complex64::new(1.0, 0.0))))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, mode: &ModeIndex) -> Complex64 {
        self.entries.get(mode).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ModeIndex, &Complex64)> {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ModeIndex> {
        self.entries.keys()
    }

    fn check_dim(&self, mode: &ModeIndex) -> Result<()> {
        if mode.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: mode.dim(),
            });
        }
        Ok(())
    }

    /// Overwrites the coefficient of `mode`; a zero value removes it.
    pub fn set(&mut self, mode: ModeIndex, value: Complex64) -> Result<()> {
        self.check_dim(&mode)?;
        if value == Complex64::default() {
            self.entries.remove(&mode);
        } else {
            self.entries.insert(mode, value);
        }
        Ok(())
    }

    pub fn add_to(&mut self, mode: ModeIndex, value: Complex64) -> Result<()> {
        self.check_dim(&mode)?;
        let updated = self.get(&mode) + value;
        self.set(mode, updated)
    }

    /// Removes every coefficient with modulus at most `tol`.
    pub fn prune(&mut self, tol: f64) {
        self.entries.retain(|_, c| c.norm() > tol);
    }

    pub fn map_values(&self, mut f: impl FnMut(&ModeIndex, Complex64) -> Complex64) -> ModeField {
        let mut out = ModeField::new(self.dim);
        for (m, c) in &self.entries {
            let v = f(m, *c);
            if v != Complex64::default() {
                out.entries.insert(m.clone(), v);
            }
        }
        out
    }

    pub fn scaled(&self, factor: Complex64) -> ModeField {
        self.map_values(|_, c| c * factor)
    }

    pub fn sub(&self, other: &ModeField) -> Result<ModeField> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut out = self.clone();
        for (m, c) in &other.entries {
            out.add_to(m.clone(), -c)?;
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Regularity and summability exponents of a Fourier-Lebesgue norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormSpec {
    pub s: f64,
    /// `f64::INFINITY` selects the supremum norm.
    pub p: f64,
}

impl NormSpec {
    pub fn new(s: f64, p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 || s.is_nan() {
            return Err(Error::InvalidNormSpec(p));
        }
        Ok(NormSpec { s, p })
    }

    pub fn wiener() -> Self {
        NormSpec { s: 0.0, p: 1.0 }
    }
}

/// `|| <j>^s c_j ||_{l^p}`.
pub fn fl_norm(f: &ModeField, spec: NormSpec) -> Result<f64> {
    let spec = NormSpec::new(spec.s, spec.p)?;
    let weighted = f.iter().map(|(j, c)| {
        let w = if spec.s == 0.0 { 1.0 } else { j.bracket().powf(spec.s) };
        w * c.norm()
    });
    if spec.p.is_infinite() {
        return Ok(weighted.fold(0.0, f64::max));
    }
    if spec.p == 1.0 {
        return Ok(weighted.sum());
    }
    let sum: f64 = weighted.map(|v| v.powf(spec.p)).sum();
    Ok(sum.powf(1.0 / spec.p))
}

pub fn wiener_norm(f: &ModeField) -> f64 {
    f.iter().map(|(_, c)| c.norm()).sum()
}

/// Coefficients of the pointwise product: `(fg)_j = sum_{k+m=j} f_k g_m`.
pub fn mode_product(f: &ModeField, g: &ModeField) -> Result<ModeField> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: g.dim(),
        });
    }
    let mut out = ModeField::new(f.dim());
    for (k, a) in f.iter() {
        for (m, b) in g.iter() {
            out.add_to(k.add(m), a * b)?;
        }
    }
    Ok(out)
}

/// Coefficients of the complex conjugate function: `c_j -> conj(c_{-j})`.
pub fn mode_conjugate(f: &ModeField) -> ModeField {
    let mut out = ModeField::new(f.dim());
    for (j, c) in f.iter() {
        out.entries.insert(j.neg(), c.conj());
    }
    out
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A positive rational number kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rational {
    num: u64,
    den: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::InvalidParameters(format!(
                "rational {num}/{den} must be strictly positive"
            )));
        }
        let g = gcd(num, den);
        Ok(Rational {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl std::str::FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("cannot parse rational '{s}'"));
        match s.split_once('/') {
            Some((n, d)) => Rational::new(
                n.trim().parse().map_err(|_| bad())?,
                d.trim().parse().map_err(|_| bad())?,
            ),
            None => Rational::new(s.trim().parse().map_err(|_| bad())?, 1),
        }
    }
}

/// The scaling `u(t,x) = eps^{beta/(2 sigma)} psi(eps^beta t, eps^{(beta-1)/2} x)`
/// with `eps = baseN^{-kappa}` and `kappa = 2q` for `beta = p/q`.
///
/// `eps` is never stored as a float; every derived exponent is computed from
/// `(baseN, p, q)` so the periodicity constraint holds exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingParams {
    beta: Rational,
    sigma: u32,
    d: usize,
    base_n: u64,
}

impl ScalingParams {
    pub fn new(beta: Rational, sigma: u32, d: usize, base_n: u64) -> Result<Self> {
        if sigma == 0 || d == 0 {
            return Err(Error::InvalidParameters("sigma and d must be positive".into()));
        }
        if base_n < 2 {
            return Err(Error::InvalidParameters(format!("baseN = {base_n} must be >= 2")));
        }
        let params = ScalingParams {
            beta,
            sigma,
            d,
            base_n,
        };
        params.spatial_factor()?;
        Ok(params)
    }

    pub fn beta(&self) -> Rational {
        self.beta
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn base_n(&self) -> u64 {
        self.base_n
    }

    pub fn kappa(&self) -> u32 {
        2 * self.beta.den() as u32
    }

    pub fn eps(&self) -> f64 {
        (self.base_n as f64).powi(-(self.kappa() as i32))
    }

    /// `1/eps = baseN^kappa`, when it fits in 64 bits.
    pub fn inverse_eps(&self) -> Option<u64> {
        self.base_n.checked_pow(self.kappa())
    }

    /// `eps^{-(1+beta)/2} = baseN^{q+p}`: the factor relabeling slow modes to physical modes of psi.
    pub fn spatial_factor(&self) -> Result<i64> {
        let exp = self.beta.den() + self.beta.num();
        u32::try_from(exp)
            .ok()
            .and_then(|e| (self.base_n as i64).checked_pow(e))
            .ok_or_else(|| {
                Error::InvalidParameters(format!(
                    "baseN^(q+p) = {}^{} overflows 64-bit mode indices",
                    self.base_n, exp
                ))
            })
    }

    /// `eps^{-beta/(2 sigma)} = baseN^{p/sigma}`.
    pub fn amplitude_factor(&self) -> f64 {
        (self.base_n as f64).powf(self.beta.num() as f64 / self.sigma as f64)
    }

    /// `eps^beta = baseN^{-2p}`: slow time of `u` to physical time of `psi`.
    pub fn time_factor(&self) -> f64 {
        (self.base_n as f64).powi(-2 * self.beta.num() as i32)
    }

    pub fn time_to_physical(&self, t_u: f64) -> f64 {
        t_u * self.time_factor()
    }
}

/// Maps the mode field of `u^eps` (indexed by slow modes `j`) to the one of `psi`:
/// mode `j` goes to `j * baseN^{q+p}` and every amplitude is multiplied by
/// `eps^{-beta/(2 sigma)}`. With `amplitude_only` the labels are kept.
pub fn scale_to_physical(
    u_modes: &ModeField,
    params: &ScalingParams,
    amplitude_only: bool,
) -> Result<ModeField> {
    if u_modes.dim() != params.d() {
        return Err(Error::DimensionMismatch {
            expected: params.d(),
            found: u_modes.dim(),
        });
    }
    let factor = params.spatial_factor()?;
    let amp = params.amplitude_factor();
    let mut out = ModeField::new(u_modes.dim());
    for (j, c) in u_modes.iter() {
        let target = if amplitude_only {
            j.clone()
        } else {
            j.checked_scale(factor).ok_or_else(|| {
                Error::InvalidParameters(format!("mode {j} * {factor} overflows"))
            })?
        };
        out.set(target, c * amp)?;
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct ModeFieldRepr {
    dim: usize,
    entries: Vec<(Vec<i64>, f64, f64)>,
}

impl Serialize for ModeField {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ModeFieldRepr {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|(j, c)| (j.components().to_vec(), c.re, c.im))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ModeField {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ModeFieldRepr::deserialize(deserializer)?;
        if repr.dim == 0 {
            return Err(serde::de::Error::custom("dim must be positive"));
        }
        ModeField::from_entries(
            repr.dim,
            repr.entries
                .into_iter()
                .map(|(j, re, im)| (ModeIndex::new(&j), Complex64::new(re, im))),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fl_norm_examples() {
        let zero = ModeField::unit_modes(1, [0]).unwrap();
        for (s, p) in [(0.0, 1.0), (-3.0, 2.0), (2.5, f64::INFINITY)] {
            assert_eq!(fl_norm(&zero, NormSpec::new(s, p).unwrap()).unwrap(), 1.0);
        }
        let f = ModeField::unit_modes(1, [1, 2]).unwrap();
        assert_eq!(fl_norm(&f, NormSpec::new(0.0, 1.0).unwrap()).unwrap(), 2.0);
        let sup = fl_norm(&f, NormSpec::new(-1.0, f64::INFINITY).unwrap()).unwrap();
        assert!((sup - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(fl_norm(&ModeField::new(2), NormSpec::new(1.0, 3.0).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn invalid_norm_exponent() {
        assert!(matches!(NormSpec::new(0.0, 0.5), Err(Error::InvalidNormSpec(_))));
        let bad = NormSpec { s: 0.0, p: 0.9 };
        assert!(fl_norm(&ModeField::new(1), bad).is_err());
    }

    #[test]
    fn wiener_examples() {
        assert_eq!(wiener_norm(&ModeField::new(2)), 0.0);
        let three = ModeField::unit_modes(2, [[1, 0], [1, 1], [0, 1]]).unwrap();
        assert_eq!(wiener_norm(&three), 3.0);
        let f = ModeField::from_entries(1, [(1, c(0.5, -0.5))]).unwrap();
        assert!((wiener_norm(&f) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let mut f = ModeField::from_entries(1, [(1, c(1.0, 0.0)), (1, c(-1.0, 0.0)), (2, c(0.0, 1.0))]).unwrap();
        assert_eq!(f.len(), 1);
        f.set(ModeIndex::scalar(2), Complex64::default()).unwrap();
        assert!(f.is_empty());
        assert!(f.set(ModeIndex::new(&[1, 2]), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn product_examples() {
        let one = ModeField::unit_modes(1, [0]).unwrap();
        let g = ModeField::from_entries(1, [(3, c(0.2, 1.0)), (-4, c(2.0, 0.0))]).unwrap();
        assert_eq!(mode_product(&one, &g).unwrap(), g);
        let f = ModeField::unit_modes(1, [1]).unwrap();
        let h = ModeField::unit_modes(1, [2]).unwrap();
        assert_eq!(mode_product(&f, &h).unwrap(), ModeField::unit_modes(1, [3]).unwrap());
        assert!(matches!(
            mode_product(&f, &ModeField::new(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn conjugate_examples() {
        let f = ModeField::from_entries(1, [(1, c(0.0, 1.0))]).unwrap();
        let expected = ModeField::from_entries(1, [(-1, c(0.0, -1.0))]).unwrap();
        assert_eq!(mode_conjugate(&f), expected);
        let sym = ModeField::from_entries(1, [(1, c(2.0, 0.0)), (-1, c(2.0, 0.0)), (0, c(1.0, 0.0))]).unwrap();
        assert_eq!(mode_conjugate(&sym), sym);
        let g = ModeField::from_entries(2, [([1, -2], c(0.3, 0.7)), ([0, 5], c(-1.0, 2.0))]).unwrap();
        assert_eq!(mode_conjugate(&mode_conjugate(&g)), g);
    }

    #[test]
    fn scaling_examples() {
        let beta = Rational::new(3, 1).unwrap();
        let params = ScalingParams::new(beta, 1, 1, 2).unwrap();
        assert_eq!(params.kappa(), 2);
        assert_eq!(params.eps(), 0.25);
        assert_eq!(params.spatial_factor().unwrap(), 16);
        let out = scale_to_physical(&ModeField::unit_modes(1, [1]).unwrap(), &params, false).unwrap();
        assert_eq!(out, ModeField::from_entries(1, [(16, c(8.0, 0.0))]).unwrap());
        assert!(scale_to_physical(&ModeField::new(1), &params, false).unwrap().is_empty());
        assert!((params.time_to_physical(2.0) - 2.0 / 64.0).abs() < 1e-15);

        let amp_only = scale_to_physical(&ModeField::unit_modes(1, [1]).unwrap(), &params, true).unwrap();
        assert_eq!(amp_only, ModeField::from_entries(1, [(1, c(8.0, 0.0))]).unwrap());
    }

    #[test]
    fn scaling_integrality() {
        let beta = Rational::new(1, 2).unwrap();
        for base in 2..=5u64 {
            let params = ScalingParams::new(beta, 1, 2, base).unwrap();
            assert_eq!(params.kappa(), 4);
            let inv = params.inverse_eps().unwrap() as f64;
            let lhs = inv.powf((1.0 + beta.to_f64()) / 2.0);
            assert!((lhs - params.spatial_factor().unwrap() as f64).abs() < 1e-9 * lhs);
            assert!((params.amplitude_factor() - inv.powf(0.25)).abs() < 1e-12 * inv);
        }
        assert!(ScalingParams::new(beta, 1, 2, 1).is_err());
        assert!(ScalingParams::new(Rational::new(40, 1).unwrap(), 1, 1, 10).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!("6/4".parse::<Rational>().unwrap(), Rational::new(3, 2).unwrap());
        assert_eq!("3".parse::<Rational>().unwrap().den(), 1);
        assert!("0/3".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn json_layout() {
        let f = ModeField::from_entries(2, [([1, 0], c(1.0, 0.0)), ([0, -1], c(0.5, -2.0))]).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(text, r#"{"dim":2,"entries":[[[0,-1],0.5,-2.0],[[1,0],1.0,0.0]]}"#);
        let back: ModeField = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<ModeField>(r#"{"dim":1,"entries":[[[1,2],1.0,0.0]]}"#).is_err());
    }
}
