//! Spectral solution engine.
//!
//! A solution of `∂_t P = -∂_x(D P) + ∂_x² P` with `D = -2W'` is written in the
//! eigenbasis of `H = -∂² + W'² - W''`:
//!
//! ```text
//! P(x, t) = φ_0(x) Σ_n c_n φ_n(x) exp(-λ_n t)
//! ```
//!
//! The Darboux map `d_n = phase · sqrt(λ_{n+1}) · c_{n+1}` turns the coefficients of a
//! solution for `a` into those of the partner solution for `a + δ`, and the
//! interpolated family mixes both coefficient sets in the eigenbasis of `a_s`.

use crate::error::{Error, Result};
use crate::models::{InterpolationRule, ParameterSet, SpectrumSize};
use crate::oracles::{gauss_legendre_nodes, Grid};

/// Default coefficient truncation for the radial oscillator.
pub const DEFAULT_RADIAL_MODES: usize = 16;

/// Panel count used by [`project_initial`].
pub const PROJECTION_PANELS: usize = 1024;

/// Default mode count: 16 for the radial oscillator, the full bound-state count for Morse.
pub fn default_mode_count(params: &ParameterSet) -> usize {
    match params.spectrum_size() {
        SpectrumSize::Finite(size) => size,
        SpectrumSize::Unbounded => DEFAULT_RADIAL_MODES,
    }
}

/// Expansion coefficients `c_0, …, c_{N-1}` in the eigenbasis of `params`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    coefficients: Vec<f64>,
    params: ParameterSet,
}

impl SpectralCoefficients {
    pub fn new(params: ParameterSet, coefficients: Vec<f64>) -> Result<Self> {
        if let Some(i) = coefficients.iter().position(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("coefficient c_{i} is not finite")));
        }
        if let SpectrumSize::Finite(size) = params.spectrum_size() {
            if coefficients.len() > size {
                return Err(Error::SpectrumExhausted { index: coefficients.len() - 1, size });
            }
        }
        Ok(SpectralCoefficients { coefficients, params })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `Ψ(x, t) = Σ c_n φ_n(x) exp(-λ_n t)`
    pub fn reduced(&self, x: f64, t: f64) -> Result<f64> {
        let mut sum = 0.0;
        for (n, &c) in self.coefficients.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let decay = (-self.params.eigenvalue(n)? * t).exp();
            sum += c * self.params.eigenfunction(n, x)? * decay;
        }
        Ok(sum)
    }

    /// `P(x, t) = φ_0(x) Ψ(x, t)`, no normalization applied.
    pub fn density(&self, x: f64, t: f64) -> Result<f64> {
        if self.coefficients.iter().all(|&c| c == 0.0) {
            self.params.prepotential(x)?;
            return Ok(0.0);
        }
        Ok(self.params.eigenfunction(0, x)? * self.reduced(x, t)?)
    }
}

/// Density samples `P_s(x_i, t)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFrame {
    pub grid: Grid,
    pub t: f64,
    pub s: f64,
    pub values: Vec<f64>,
}

impl SolutionFrame {
    pub fn new(grid: Grid, t: f64, s: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite density at x = {}", grid.points()[i])));
        }
        Ok(SolutionFrame { grid, t, s, values })
    }

    /// Trapezoid mass over the grid.
    pub fn mass(&self) -> f64 {
        self.grid.trapezoid(&self.values)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Trapezoid L1 distance to another frame on the same grid.
    pub fn l1_distance(&self, other: &SolutionFrame) -> f64 {
        crate::oracles::l1_distance(&self.grid, &self.values, &other.values)
    }

    pub fn max_abs_difference(&self, other: &SolutionFrame) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `c_n = ∫ φ_n(x) P(x, 0) / φ_0(x) dx` for `n < modes`, by Gauss–Legendre quadrature
/// over the truncated domain.
pub fn project_initial(
    params: &ParameterSet,
    profile: impl Fn(f64) -> f64,
    modes: usize,
) -> Result<SpectralCoefficients> {
    if let SpectrumSize::Finite(size) = params.spectrum_size() {
        if modes > size {
            return Err(Error::SpectrumExhausted { index: modes - 1, size });
        }
    }
    let interval = params.truncation_for_modes(modes)?;
    let nodes = gauss_legendre_nodes(interval.lo, interval.hi, PROJECTION_PANELS)?;
    let mut coefficients = vec![0.0; modes];
    for (x, w) in nodes {
        let p = profile(x);
        let ground = params.eigenfunction(0, x)?;
        let reduced = if p == 0.0 { 0.0 } else { p / ground };
        if !reduced.is_finite() {
            return Err(Error::ProjectionDivergence {
                index: 0,
                reason: format!("P/φ_0 = {reduced} at x = {x}"),
            });
        }
        for (n, c) in coefficients.iter_mut().enumerate() {
            *c += w * params.eigenfunction(n, x)? * reduced;
        }
    }
    if let Some(index) = coefficients.iter().position(|c| !c.is_finite()) {
        return Err(Error::ProjectionDivergence { index, reason: "non-finite coefficient".into() });
    }
    SpectralCoefficients::new(*params, coefficients)
}

/// `P(x_i, t) = φ_0(x_i) Σ_n c_n φ_n(x_i) exp(-λ_n t)` on `grid`.
pub fn evolve(coeffs: &SpectralCoefficients, grid: &Grid, t: f64) -> Result<SolutionFrame> {
    evolve_labelled(coeffs, grid, t, 0.0)
}

fn evolve_labelled(
    coeffs: &SpectralCoefficients,
    grid: &Grid,
    t: f64,
    s: f64,
) -> Result<SolutionFrame> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite and >= 0, got {t}")));
    }
    let values = grid
        .points()
        .iter()
        .map(|&x| coeffs.density(x, t))
        .collect::<Result<Vec<_>>>()?;
    SolutionFrame::new(grid.clone(), t, s, values)
}

/// Partner coefficients `d_n = phase · sqrt(λ_{n+1}(a)) · c_{n+1}` in the basis of `a + δ`.
pub fn darboux_map(coeffs: &SpectralCoefficients) -> Result<SpectralCoefficients> {
    if coeffs.is_empty() {
        return Err(Error::Domain("Darboux map needs at least one coefficient".into()));
    }
    let params = coeffs.params();
    let partner = params.shift()?;
    let phase = params.kind().phase();
    let mapped = coeffs.coefficients()[1..]
        .iter()
        .enumerate()
        .map(|(n, &c)| Ok(phase * params.eigenvalue(n + 1)?.sqrt() * c))
        .collect::<Result<Vec<_>>>()?;
    SpectralCoefficients::new(partner, mapped)
}

/// SUSY partner of the solution defined by `coeffs`, evaluated on `grid` at time `t`.
pub fn partner_solution(
    coeffs: &SpectralCoefficients,
    grid: &Grid,
    t: f64,
) -> Result<SolutionFrame> {
    evolve_labelled(&darboux_map(coeffs)?, grid, t, 1.0)
}

/// Coefficients of the interpolated family in the basis of `a_s`, together with the
/// normalizing constant `N = 1 / [(1-s) c_0 + s · phase · sqrt(λ_1(a_0)) · c_1]`.
///
/// `e_n = (1-s) c_n + s · phase · sqrt(λ_{n+1}(a_0)) · c_{n+1}`, with `c_N = 0`. At
/// `s = 1` the last entry vanishes identically and is dropped.
pub fn interpolated_coefficients(
    coeffs: &SpectralCoefficients,
    s: f64,
    rule: InterpolationRule,
) -> Result<(SpectralCoefficients, f64)> {
    let base = coeffs.params();
    let deformed = base.interpolate(s, rule)?;
    if coeffs.is_empty() {
        return Err(Error::Domain("interpolation needs at least one coefficient".into()));
    }
    let phase = base.kind().phase();
    let c = coeffs.coefficients();
    let mut mixed = Vec::with_capacity(c.len());
    let mut scale = Vec::with_capacity(c.len());
    for n in 0..c.len() {
        let (raised, raised_abs) = match c.get(n + 1) {
            Some(&next) if next != 0.0 => {
                let root = base.eigenvalue(n + 1)?.sqrt();
                (phase * root * next, root * next.abs())
            }
            _ => (0.0, 0.0),
        };
        mixed.push((1.0 - s) * c[n] + s * raised);
        scale.push((1.0 - s) * c[n].abs() + s * raised_abs);
    }
    if s == 1.0 {
        mixed.pop();
    }
    let denominator = mixed.first().copied().unwrap_or(0.0);
    if denominator == 0.0 || denominator.abs() <= 1e-14 * scale[0] {
        return Err(Error::VanishingDenominator { s });
    }
    Ok((SpectralCoefficients::new(deformed, mixed)?, 1.0 / denominator))
}

/// Normalized interpolated solution `P_s(x_i, t)` on `grid`.
pub fn interpolated_solution(
    coeffs: &SpectralCoefficients,
    s: f64,
    rule: InterpolationRule,
    grid: &Grid,
    t: f64,
) -> Result<SolutionFrame> {
    let (mixed, norm) = interpolated_coefficients(coeffs, s, rule)?;
    let mut frame = evolve_labelled(&mixed, grid, t, s)?;
    frame.values.iter_mut().for_each(|v| *v *= norm);
    Ok(frame)
}

/// Pointwise `P_s(x, t)`; same normalization as [`interpolated_solution`].
pub fn interpolated_density(
    coeffs: &SpectralCoefficients,
    s: f64,
    rule: InterpolationRule,
) -> Result<impl Fn(f64, f64) -> Result<f64>> {
    let (mixed, norm) = interpolated_coefficients(coeffs, s, rule)?;
    Ok(move |x: f64, t: f64| Ok(norm * mixed.density(x, t)?))
}

/// Stationary density `φ_0(x)²`, equal to `exp(-2W)/Z`.
pub fn stationary_frame(params: &ParameterSet, grid: &Grid, s: f64) -> Result<SolutionFrame> {
    let values = grid
        .points()
        .iter()
        .map(|&x| params.eigenfunction(0, x).map(|phi| phi * phi))
        .collect::<Result<Vec<_>>>()?;
    SolutionFrame::new(grid.clone(), f64::INFINITY, s, values)
}
