//! Shape-invariant drift models.
//!
//! A [`ParameterSet`] couples a [`ModelKind`] with its two parameters and exposes the
//! prepotential `W(x)`, the drift `D = -2W'`, the bound-state spectrum and normalized
//! eigenfunctions of `H = -d²/dx² + W'² - W''`, the parameter shift `a -> a + δ`, and
//! the remainder `R(a)` of the shape-invariance condition.
//!
//! | model            | `W(x)`                   | params   | `δ`      | `R(a)`   | phase |
//! |------------------|--------------------------|----------|----------|----------|-------|
//! | radial oscillator| `ωx²/4 - (ℓ+1) ln x`     | `(ω, ℓ)` | `(0, 1)` | `2ω`     | `-1`  |
//! | Morse            | `αx + βe^{-x}`           | `(α, β)` | `(-1, 0)`| `2α - 1` | `+1`  |

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::specfun::{laguerre_unchecked, log_gamma, MAX_LAGUERRE_DEGREE};

/// Eigenfunctions are considered negligible below this magnitude at a truncation end.
pub const TAIL_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    RadialOscillator,
    Morse,
}

impl ModelKind {
    /// Sign relating `A φ_{n+1}(a)` to `sqrt(λ_{n+1}) φ_n(a + δ)`.
    pub fn phase(self) -> f64 {
        match self {
            ModelKind::RadialOscillator => -1.0,
            ModelKind::Morse => 1.0,
        }
    }

    /// Open interval on which the model lives.
    pub fn domain(self) -> Interval {
        match self {
            ModelKind::RadialOscillator => Interval::new(0.0, f64::INFINITY),
            ModelKind::Morse => Interval::new(f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn shift_vector(self) -> [f64; 2] {
        match self {
            ModelKind::RadialOscillator => [0.0, 1.0],
            ModelKind::Morse => [-1.0, 0.0],
        }
    }

    pub fn parameter_names(self) -> [&'static str; 2] {
        match self {
            ModelKind::RadialOscillator => ["omega", "ell"],
            ModelKind::Morse => ["alpha", "beta"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::RadialOscillator => "radial",
            ModelKind::Morse => "morse",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "radial" | "radial-oscillator" | "radial_oscillator" => Ok(ModelKind::RadialOscillator),
            "morse" => Ok(ModelKind::Morse),
            other => Err(format!("unknown model `{other}` (expected `radial` or `morse`)")),
        }
    }
}

/// Closed interval `[lo, hi]`; the model domains use infinite ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Number of bound states of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSize {
    Finite(usize),
    Unbounded,
}

impl SpectrumSize {
    pub fn contains(self, n: usize) -> bool {
        match self {
            SpectrumSize::Finite(size) => n < size,
            SpectrumSize::Unbounded => true,
        }
    }

    /// Clamp a requested mode count to the available spectrum.
    pub fn clamp(self, n: usize) -> usize {
        match self {
            SpectrumSize::Finite(size) => n.min(size),
            SpectrumSize::Unbounded => n,
        }
    }
}

/// How the deformed parameters `a_s` are built from `a_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterpolationRule {
    /// `a_s = a_0 + s δ`
    Linear,
    /// Radial oscillator only: `ω` fixed, `ℓ_s = [sqrt(4(ℓ+1)(ℓ+2s)) - 1] / 2`.
    NonlinearEll,
}

impl InterpolationRule {
    pub fn name(self) -> &'static str {
        match self {
            InterpolationRule::Linear => "linear",
            InterpolationRule::NonlinearEll => "nonlinear-ell",
        }
    }
}

impl fmt::Display for InterpolationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InterpolationRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(InterpolationRule::Linear),
            "nonlinear-ell" | "nonlinear_ell" => Ok(InterpolationRule::NonlinearEll),
            other => Err(format!(
                "unknown interpolation rule `{other}` (expected `linear` or `nonlinear-ell`)"
            )),
        }
    }
}

/// Model parameters `a`: `(ω, ℓ)` for the radial oscillator, `(α, β)` for Morse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterSet {
    kind: ModelKind,
    values: [f64; 2],
}

impl ParameterSet {
    pub fn new(kind: ModelKind, values: [f64; 2]) -> Result<Self> {
        let [p, q] = values;
        let names = kind.parameter_names();
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "{kind}: {} must be positive and finite, got {p}",
                names[0]
            )));
        }
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "{kind}: {} must be positive and finite, got {q}",
                names[1]
            )));
        }
        Ok(ParameterSet { kind, values })
    }

    pub fn radial(omega: f64, ell: f64) -> Result<Self> {
        Self::new(ModelKind::RadialOscillator, [omega, ell])
    }

    pub fn morse(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(ModelKind::Morse, [alpha, beta])
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn values(&self) -> [f64; 2] {
        self.values
    }

    pub fn delta(&self) -> [f64; 2] {
        self.kind.shift_vector()
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let ok = match self.kind {
            ModelKind::RadialOscillator => x > 0.0 && x.is_finite(),
            ModelKind::Morse => x.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("x = {x} is outside the {} domain", self.kind)))
        }
    }

    /// `W(x; a)`
    pub fn prepotential(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        let [p, q] = self.values;
        Ok(match self.kind {
            ModelKind::RadialOscillator => p * x * x / 4.0 - (q + 1.0) * x.ln(),
            ModelKind::Morse => p * x + q * (-x).exp(),
        })
    }

    /// `W'(x; a)`
    pub fn prepotential_derivative(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        let [p, q] = self.values;
        Ok(match self.kind {
            ModelKind::RadialOscillator => p * x / 2.0 - (q + 1.0) / x,
            ModelKind::Morse => p - q * (-x).exp(),
        })
    }

    /// `W''(x; a)`
    pub fn prepotential_second_derivative(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        let [p, q] = self.values;
        Ok(match self.kind {
            ModelKind::RadialOscillator => p / 2.0 + (q + 1.0) / (x * x),
            ModelKind::Morse => q * (-x).exp(),
        })
    }

    /// Drift coefficient `D(x) = -2 W'(x)`.
    pub fn drift(&self, x: f64) -> Result<f64> {
        Ok(-2.0 * self.prepotential_derivative(x)?)
    }

    /// Schrödinger potential `W'² - W''` of the associated Hamiltonian.
    pub fn schrodinger_potential(&self, x: f64) -> Result<f64> {
        let w1 = self.prepotential_derivative(x)?;
        Ok(w1 * w1 - self.prepotential_second_derivative(x)?)
    }

    /// Shape-invariance remainder `R(a)`.
    pub fn shape_r(&self) -> f64 {
        let [p, _] = self.values;
        match self.kind {
            ModelKind::RadialOscillator => 2.0 * p,
            ModelKind::Morse => 2.0 * p - 1.0,
        }
    }

    /// `W'(x;a)² + W''(x;a) - W'(x;a+δ)² + W''(x;a+δ) - R(a)`, zero for a shape-invariant pair.
    pub fn shape_invariance_residual(&self, x: f64) -> Result<f64> {
        let partner = self.shift()?;
        let w0 = self.prepotential_derivative(x)?;
        let w1 = partner.prepotential_derivative(x)?;
        Ok(w0 * w0 + self.prepotential_second_derivative(x)? - w1 * w1
            + partner.prepotential_second_derivative(x)?
            - self.shape_r())
    }

    /// Partner parameters `a + δ`.
    pub fn shift(&self) -> Result<ParameterSet> {
        let [dp, dq] = self.delta();
        let shifted = [self.values[0] + dp, self.values[1] + dq];
        ParameterSet::new(self.kind, shifted).map_err(|_| {
            Error::ParameterExhausted(format!(
                "{} shifted to ({}, {}) is no longer admissible",
                self.kind, shifted[0], shifted[1]
            ))
        })
    }

    /// Deformed parameters `a_s` for `s ∈ [0, 1]`.
    pub fn interpolate(&self, s: f64, rule: InterpolationRule) -> Result<ParameterSet> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Domain(format!("interpolation parameter s = {s} is outside [0, 1]")));
        }
        let values = match (rule, self.kind) {
            (InterpolationRule::Linear, _) => {
                let [dp, dq] = self.delta();
                [self.values[0] + s * dp, self.values[1] + s * dq]
            }
            (InterpolationRule::NonlinearEll, ModelKind::RadialOscillator) => {
                let ell = self.values[1];
                let ell_s = ((4.0 * (ell + 1.0) * (ell + 2.0 * s)).sqrt() - 1.0) / 2.0;
                [self.values[0], ell_s]
            }
            (InterpolationRule::NonlinearEll, ModelKind::Morse) => {
                return Err(Error::UnsupportedRule { rule: rule.name(), model: self.kind.name() })
            }
        };
        ParameterSet::new(self.kind, values).map_err(|_| {
            Error::ParameterExhausted(format!(
                "{} interpolated to ({}, {}) at s = {s} is no longer admissible",
                self.kind, values[0], values[1]
            ))
        })
    }

    /// Largest componentwise mismatch of `a_s` against `a_0` at `s = 0` and against
    /// `a + δ` at `s = 1`.
    pub fn endpoint_deviation(&self, rule: InterpolationRule) -> Result<[f64; 2]> {
        let dev = |lhs: ParameterSet, rhs: ParameterSet| {
            (lhs.values[0] - rhs.values[0]).abs().max((lhs.values[1] - rhs.values[1]).abs())
        };
        Ok([
            dev(self.interpolate(0.0, rule)?, *self),
            dev(self.interpolate(1.0, rule)?, self.shift()?),
        ])
    }

    pub fn spectrum_size(&self) -> SpectrumSize {
        match self.kind {
            ModelKind::RadialOscillator => SpectrumSize::Unbounded,
            ModelKind::Morse => SpectrumSize::Finite(self.values[0].ceil() as usize),
        }
    }

    fn check_mode(&self, n: usize) -> Result<()> {
        match self.spectrum_size() {
            SpectrumSize::Finite(size) if n >= size => {
                Err(Error::SpectrumExhausted { index: n, size })
            }
            _ => Ok(()),
        }
    }

    /// `λ_n(a)`
    pub fn eigenvalue(&self, n: usize) -> Result<f64> {
        self.check_mode(n)?;
        let nf = n as f64;
        let [p, _] = self.values;
        Ok(match self.kind {
            ModelKind::RadialOscillator => 2.0 * nf * p,
            ModelKind::Morse => p * p - (p - nf) * (p - nf),
        })
    }

    pub fn mode(&self, n: usize) -> Result<EigenMode> {
        Ok(EigenMode { index: n, eigenvalue: self.eigenvalue(n)?, params: *self })
    }

    fn mode_form(&self, n: usize, x: f64) -> Result<ModeForm> {
        self.check_mode(n)?;
        self.check_domain(x)?;
        if n + 2 > MAX_LAGUERRE_DEGREE {
            return Err(Error::Domain(format!("mode {n} exceeds supported degree")));
        }
        let nf = n as f64;
        let [p, q] = self.values;
        Ok(match self.kind {
            ModelKind::RadialOscillator => {
                let y = p * x * x / 2.0;
                ModeForm {
                    ln_norm: 0.25 * (2.0 * p).ln()
                        - 0.5 * (log_gamma(nf + q + 1.5)? - log_gamma(nf + 1.0)?),
                    power: (q + 1.0) / 2.0,
                    order: q + 0.5,
                    y,
                    dy: p * x,
                    d2y: p,
                }
            }
            ModelKind::Morse => {
                let y = 2.0 * q * (-x).exp();
                let excess = p - nf;
                ModeForm {
                    ln_norm: 0.5
                        * ((2.0 * excess).ln() + log_gamma(nf + 1.0)?
                            - log_gamma(2.0 * p - nf + 1.0)?),
                    power: excess,
                    order: 2.0 * excess,
                    y,
                    dy: -y,
                    d2y: y,
                }
            }
        })
    }

    /// Normalized eigenfunction `φ_n(x; a)`.
    pub fn eigenfunction(&self, n: usize, x: f64) -> Result<f64> {
        let form = self.mode_form(n, x)?;
        Ok(form.envelope() * laguerre_unchecked(n, form.order, form.y))
    }

    /// `(φ_n, φ_n', φ_n'')` at `x`, from the Laguerre derivative identity
    /// `d/dy L_n^a = -L_{n-1}^{a+1}`.
    pub fn eigenfunction_jet(&self, n: usize, x: f64) -> Result<[f64; 3]> {
        let form = self.mode_form(n, x)?;
        let g = form.envelope();
        if g == 0.0 {
            return Ok([0.0; 3]);
        }
        let (a, y) = (form.order, form.y);
        let l0 = laguerre_unchecked(n, a, y);
        let l1 = if n >= 1 { -laguerre_unchecked(n - 1, a + 1.0, y) } else { 0.0 };
        let l2 = if n >= 2 { laguerre_unchecked(n - 2, a + 2.0, y) } else { 0.0 };
        let p = form.power;
        let u = p / y - 0.5;
        // (p/y - 1/2)² - p/y², expanded so the 1/y² terms do not cancel numerically.
        let v = p * (p - 1.0) / (y * y) - p / y + 0.25;
        let f_y = g * (u * l0 + l1);
        let f_yy = g * (v * l0 + 2.0 * u * l1 + l2);
        Ok([g * l0, f_y * form.dy, f_yy * form.dy * form.dy + f_y * form.d2y])
    }

    /// Default truncation of the domain: `[1e-8, 8/√ω]` (radial) and
    /// `[ln β - 4, ln β + 12]` (Morse).
    pub fn default_truncation(&self) -> Interval {
        let [p, q] = self.values;
        match self.kind {
            ModelKind::RadialOscillator => Interval::new(1e-8, 8.0 / p.sqrt()),
            ModelKind::Morse => Interval::new(q.ln() - 4.0, q.ln() + 12.0),
        }
    }

    /// Default truncation widened until `|φ_n| < TAIL_THRESHOLD` at both ends for every
    /// `n < modes` (capped at 64 unit extensions per side).
    pub fn truncation_for_modes(&self, modes: usize) -> Result<Interval> {
        let mut interval = self.default_truncation();
        let modes = self.spectrum_size().clamp(modes);
        let tail = |x: f64| -> Result<f64> {
            let mut worst = 0.0_f64;
            for n in 0..modes {
                worst = worst.max(self.eigenfunction(n, x)?.abs());
            }
            Ok(worst)
        };
        let step = match self.kind {
            ModelKind::RadialOscillator => 1.0 / self.values[0].sqrt(),
            ModelKind::Morse => 1.0,
        };
        for _ in 0..64 {
            if tail(interval.hi)? < TAIL_THRESHOLD {
                break;
            }
            interval.hi += step;
        }
        if self.kind == ModelKind::Morse {
            for _ in 0..64 {
                if tail(interval.lo)? < TAIL_THRESHOLD {
                    break;
                }
                interval.lo -= step;
            }
        }
        Ok(interval)
    }
}

/// `φ_n = exp(ln_norm) y^power e^{-y/2} L_n^order(y)` with `y = y(x)`.
struct ModeForm {
    ln_norm: f64,
    power: f64,
    order: f64,
    y: f64,
    dy: f64,
    d2y: f64,
}

impl ModeForm {
    fn envelope(&self) -> f64 {
        if self.y == 0.0 {
            return 0.0;
        }
        (self.ln_norm + self.power * self.y.ln() - 0.5 * self.y).exp()
    }
}

/// One bound state: index, eigenvalue and the parameters its eigenfunction belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenMode {
    pub index: usize,
    pub eigenvalue: f64,
    params: ParameterSet,
}

impl EigenMode {
    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.params.eigenfunction(self.index, x)
    }
}
