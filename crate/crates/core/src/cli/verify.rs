//! Built-in verification suite behind `susy-fpe verify`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::models::{InterpolationRule, ModelKind, ParameterSet};
use crate::oracles::{
    fd_cross_check, fd_stationarity, gauss_legendre_nodes, particle_cross_check,
    particle_stationarity, FdSettings, Grid, ParticleSettings,
};
use crate::spectral::{evolve, interpolated_solution, partner_solution, SpectralCoefficients};

use super::figure::{FigureName, FigureSpec};

/// Eigenfunction evaluator `(params, n, x) -> φ_n(x)`.
pub type Basis<'a> = &'a dyn Fn(&ParameterSet, usize, f64) -> Result<f64>;

/// Evaluator of `(φ_n, φ_n', φ_n'')`.
pub type BasisJet<'a> = &'a dyn Fn(&ParameterSet, usize, f64) -> Result<[f64; 3]>;

/// Sign relating `A φ_{n+1}(a)` to `φ_n(a + δ)`.
pub type Phase<'a> = &'a dyn Fn(ModelKind) -> f64;

pub const ORTHONORMALITY_TOL: f64 = 1e-8;
pub const SHAPE_INVARIANCE_TOL: f64 = 1e-10;
pub const INTERTWINING_TOL: f64 = 1e-6;
pub const LADDER_TOL: f64 = 1e-12;
pub const SCHRODINGER_TOL: f64 = 1e-6;
pub const ZERO_MODE_TOL: f64 = 1e-12;
pub const ENDPOINT_TOL: f64 = 1e-10;
pub const MASS_TOL: f64 = 1e-6;
pub const FD_CROSS_TOL: f64 = 1e-3;
pub const FD_STATIONARY_TOL: f64 = 1e-6;
pub const PARTICLE_TOL: f64 = 5e-2;

/// Particle seed used by the stochastic checks.
pub const VERIFY_SEED: u64 = 20_240_601;

/// Radial modes covered by the orthonormality and ladder checks.
const RADIAL_MODES: usize = 9;
const RADIAL_LADDER: usize = 11;
const RANDOM_POINTS: usize = 200;
const CHECK_GRID_POINTS: usize = 1001;

/// Measured error of one check against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<24} measured {:.3e}  tolerance {:.1e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.tolerance
        )
    }
}

pub fn radial() -> ParameterSet {
    ParameterSet::radial(1.0, 1.0).expect("valid radial parameters")
}

pub fn morse() -> ParameterSet {
    ParameterSet::morse(5.0, 1.0).expect("valid Morse parameters")
}

/// Mode counts used for each model: 9 radial modes, every Morse bound state.
fn checked_modes(params: &ParameterSet) -> usize {
    params.spectrum_size().clamp(RADIAL_MODES)
}

pub fn standard_basis(params: &ParameterSet, n: usize, x: f64) -> Result<f64> {
    params.eigenfunction(n, x)
}

pub fn standard_phase(kind: ModelKind) -> f64 {
    kind.phase()
}

/// `max |∫ φ_m φ_n - δ_mn|` over the checked modes of both models.
pub fn orthonormality(basis: Basis<'_>) -> Result<CheckReport> {
    let mut worst = 0.0_f64;
    for params in [radial(), morse()] {
        let modes = checked_modes(&params);
        let iv = params.truncation_for_modes(modes)?;
        let nodes = gauss_legendre_nodes(iv.lo, iv.hi, 800)?;
        let mut gram = vec![vec![0.0; modes]; modes];
        let mut row = vec![0.0; modes];
        for (x, w) in nodes {
            for (n, slot) in row.iter_mut().enumerate() {
                *slot = basis(&params, n, x)?;
            }
            for m in 0..modes {
                for n in 0..=m {
                    gram[m][n] += w * row[m] * row[n];
                }
            }
        }
        for (m, row) in gram.iter().enumerate() {
            for (n, value) in row.iter().enumerate().take(m + 1) {
                let target = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((value - target).abs());
            }
        }
    }
    Ok(CheckReport { name: "orthonormality", measured: worst, tolerance: ORTHONORMALITY_TOL })
}

/// Random points in the default truncation of `params`, from a fixed stream.
pub fn random_points(params: &ParameterSet, count: usize, seed: u64) -> Vec<f64> {
    let iv = params.default_truncation();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(iv.lo..iv.hi)).collect()
}

/// `max |W'(a)² + W''(a) - W'(a+δ)² + W''(a+δ) - R(a)|` at 200 random points per model.
pub fn shape_invariance() -> Result<CheckReport> {
    let mut worst = 0.0_f64;
    for (params, seed) in [(radial(), 1), (morse(), 2)] {
        for x in random_points(&params, RANDOM_POINTS, seed) {
            worst = worst.max(params.shape_invariance_residual(x)?.abs());
        }
    }
    Ok(CheckReport { name: "shape-invariance", measured: worst, tolerance: SHAPE_INVARIANCE_TOL })
}

/// `max |(∂ + W'(a)) φ_{n+1}(a) - phase sqrt(λ_{n+1}) φ_n(a+δ)| / max |φ|` on the
/// default grids.
pub fn intertwining(phase: Phase<'_>) -> Result<CheckReport> {
    let mut worst = 0.0_f64;
    for params in [radial(), morse()] {
        let partner = params.shift()?;
        let sign = phase(params.kind());
        let iv = params.default_truncation();
        let grid = Grid::uniform(iv.lo, iv.hi, CHECK_GRID_POINTS)?;
        for n in 0..checked_modes(&params) - 1 {
            let root = params.eigenvalue(n + 1)?.sqrt();
            let mut residual = 0.0_f64;
            let mut scale = 0.0_f64;
            for &x in grid.points() {
                let [phi, dphi, _] = params.eigenfunction_jet(n + 1, x)?;
                let lowered = dphi + params.prepotential_derivative(x)? * phi;
                let target = partner.eigenfunction(n, x)?;
                residual = residual.max((lowered - sign * root * target).abs());
                scale = scale.max(phi.abs()).max(target.abs());
            }
            worst = worst.max(residual / scale);
        }
    }
    Ok(CheckReport { name: "intertwining", measured: worst, tolerance: INTERTWINING_TOL })
}

/// `max |λ_n(a) - Σ_{k<n} R(a + kδ)| / max(1, λ_n)`, radial `n ≤ 10`, all Morse modes.
pub fn ladder() -> Result<CheckReport> {
    let mut worst = 0.0_f64;
    for params in [radial(), morse()] {
        let modes = params.spectrum_size().clamp(RADIAL_LADDER);
        let mut shifted = params;
        let mut sum = 0.0;
        for n in 0..modes {
            let lambda = params.eigenvalue(n)?;
            worst = worst.max((lambda - sum).abs() / lambda.max(1.0));
            if n + 1 < modes {
                sum += shifted.shape_r();
                shifted = shifted.shift()?;
            }
        }
    }
    Ok(CheckReport { name: "ladder", measured: worst, tolerance: LADDER_TOL })
}

/// `max |λ_n(a+δ) + R(a) - λ_{n+1}(a)|`: the partner spectrum is the original minus its
/// zero mode.
pub fn partner_spectrum() -> Result<CheckReport> {
    let mut worst = 0.0_f64;
    for params in [radial(), morse()] {
        let partner = params.shift()?;
        for n in 0..params.spectrum_size().clamp(RADIAL_LADDER) - 1 {
            let lhs = partner.eigenvalue(n)? + params.shape_r();
            let rhs = params.eigenvalue(n + 1)?;
            worst = worst.max((lhs - rhs).abs() / rhs.max(1.0));
        }
    }
    Ok(CheckReport { name: "partner-spectrum", measured: worst, tolerance: LADDER_TOL })
}

/// `max |-φ'' + (W'² - W'') φ - λ φ| / max|φ|` on the default grids.
pub fn schrodinger(basis_jet: BasisJet<'_>) -> Result<CheckReport> {
    let mut worst = 0.0_f64;
    for params in [radial(), morse()] {
        let iv = params.default_truncation();
        let grid = Grid::uniform(iv.lo, iv.hi, CHECK_GRID_POINTS)?;
        for n in 0..checked_modes(&params) {
            let lambda = params.eigenvalue(n)?;
            let mut residual = 0.0_f64;
            let mut scale = 0.0_f64;
            for &x in grid.points() {
                let [phi, _, d2phi] = basis_jet(&params, n, x)?;
                let r = -d2phi + params.schrodinger_potential(x)? * phi - lambda * phi;
                residual = residual.max(r.abs());
                scale = scale.max(phi.abs());
            }
            worst = worst.max(residual / scale);
        }
    }
    Ok(CheckReport { name: "schrodinger", measured: worst, tolerance: SCHRODINGER_TOL })
}

/// Relative spread of `φ_0 e^{W}` over the region where `φ_0` is not negligible.
pub fn zero_mode() -> Result<CheckReport> {
    let mut worst = 0.0_f64;
    for params in [radial(), morse()] {
        let iv = params.default_truncation();
        let grid = Grid::uniform(iv.lo, iv.hi, CHECK_GRID_POINTS)?;
        let mut ratios = Vec::new();
        for &x in grid.points() {
            let phi = params.eigenfunction(0, x)?;
            if phi > 1e-6 {
                ratios.push(phi * params.prepotential(x)?.exp());
            }
        }
        let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
        worst = worst.max((max - min) / max);
    }
    Ok(CheckReport { name: "zero-mode", measured: worst, tolerance: ZERO_MODE_TOL })
}

/// `P_s` at `s = 0, 1` against the original and partner solutions, both figure
/// configurations, `t ∈ {0, 0.1, 1}`.
pub fn endpoints() -> Result<CheckReport> {
    let mut worst = 0.0_f64;
    for name in [FigureName::Fig1, FigureName::Fig2] {
        let spec = FigureSpec::new(name)?;
        let coeffs = &spec.coefficients;
        let c0 = coeffs.coefficients()[0];
        let d0 = crate::spectral::darboux_map(coeffs)?.coefficients()[0];
        for t in [0.0, 0.1, 1.0] {
            let original = evolve(coeffs, &spec.grid, t)?;
            let mapped = partner_solution(coeffs, &spec.grid, t)?;
            let at0 = interpolated_solution(coeffs, 0.0, InterpolationRule::Linear, &spec.grid, t)?;
            let at1 = interpolated_solution(coeffs, 1.0, InterpolationRule::Linear, &spec.grid, t)?;
            for (a, b) in at0.values.iter().zip(&original.values) {
                worst = worst.max((a - b / c0).abs());
            }
            for (a, b) in at1.values.iter().zip(&mapped.values) {
                worst = worst.max((a - b / d0).abs());
            }
        }
    }
    Ok(CheckReport { name: "endpoints", measured: worst, tolerance: ENDPOINT_TOL })
}

/// `max |∫ P_s - 1|` over the figure frames.
pub fn mass() -> Result<CheckReport> {
    let mut worst = 0.0_f64;
    for name in [FigureName::Fig1, FigureName::Fig2] {
        let spec = FigureSpec::new(name)?;
        for &t in &spec.times {
            for frame in spec.frames_at(t)? {
                worst = worst.max((frame.mass() - 1.0).abs());
            }
        }
    }
    Ok(CheckReport { name: "mass", measured: worst, tolerance: MASS_TOL })
}

pub const FD_SETTINGS: FdSettings = FdSettings { dt: 1e-4, points: 2000 };

pub const PARTICLE_SETTINGS: ParticleSettings =
    ParticleSettings { particles: 1_000_000, dt: 1e-3, bins: 64, seed: VERIFY_SEED };

fn fig_coefficients(name: FigureName) -> Result<SpectralCoefficients> {
    Ok(FigureSpec::new(name)?.coefficients)
}

/// Spectral vs Crank–Nicolson: fig1 at `t = 0.5`, fig2 at `t = 1`.
pub fn fd_cross_oracle() -> Result<CheckReport> {
    let rule = InterpolationRule::Linear;
    let radial = fd_cross_check(&fig_coefficients(FigureName::Fig1)?, 0.0, rule, FD_SETTINGS, &[0.5])?;
    let morse = fd_cross_check(&fig_coefficients(FigureName::Fig2)?, 0.0, rule, FD_SETTINGS, &[1.0])?;
    Ok(CheckReport { name: "fd-cross-oracle", measured: radial[0].max(morse[0]), tolerance: FD_CROSS_TOL })
}

/// L∞ drift of `e^{-2W}/Z` under Crank–Nicolson over `T = 1`.
pub fn fd_stationary() -> Result<CheckReport> {
    let worst = fd_stationarity(&radial(), FD_SETTINGS, 1.0)?.max(fd_stationarity(&morse(), FD_SETTINGS, 1.0)?);
    Ok(CheckReport { name: "fd-stationarity", measured: worst, tolerance: FD_STATIONARY_TOL })
}

/// Euler–Maruyama histogram vs `P_{0.3}` at `t = 0.5`, fig1 configuration.
pub fn particle_cross_oracle() -> Result<CheckReport> {
    let l1 = particle_cross_check(
        &fig_coefficients(FigureName::Fig1)?,
        0.3,
        InterpolationRule::Linear,
        PARTICLE_SETTINGS,
        &[0.5],
    )?;
    Ok(CheckReport { name: "particle-cross-oracle", measured: l1[0], tolerance: PARTICLE_TOL })
}

/// Euler–Maruyama histogram started from `e^{-2W}/Z` after `T = 1`, radial model.
pub fn particle_stationary() -> Result<CheckReport> {
    let l1 = particle_stationarity(&radial(), PARTICLE_SETTINGS, 1.0)?;
    Ok(CheckReport { name: "particle-stationarity", measured: l1, tolerance: PARTICLE_TOL })
}

/// Names of the checks, in the order `verify` runs them.
pub const CHECK_NAMES: [&str; 13] = [
    "orthonormality",
    "shape-invariance",
    "intertwining",
    "ladder",
    "partner-spectrum",
    "schrodinger",
    "zero-mode",
    "endpoints",
    "mass",
    "fd-cross-oracle",
    "fd-stationarity",
    "particle-cross-oracle",
    "particle-stationarity",
];

/// Runs the check called `name`.
pub fn run_check(name: &str) -> Option<Result<CheckReport>> {
    let jet = |p: &ParameterSet, n: usize, x: f64| p.eigenfunction_jet(n, x);
    Some(match name {
        "orthonormality" => orthonormality(&standard_basis),
        "shape-invariance" => shape_invariance(),
        "intertwining" => intertwining(&standard_phase),
        "ladder" => ladder(),
        "partner-spectrum" => partner_spectrum(),
        "schrodinger" => schrodinger(&jet),
        "zero-mode" => zero_mode(),
        "endpoints" => endpoints(),
        "mass" => mass(),
        "fd-cross-oracle" => fd_cross_oracle(),
        "fd-stationarity" => fd_stationary(),
        "particle-cross-oracle" => particle_cross_oracle(),
        "particle-stationarity" => particle_stationary(),
        _ => return None,
    })
}

/// Checks whose name contains `filter` (all of them without a filter).
pub fn selected(filter: Option<&str>) -> Vec<&'static str> {
    CHECK_NAMES.iter().copied().filter(|name| filter.is_none_or(|f| name.contains(f))).collect()
}
