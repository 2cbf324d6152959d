//! Comparisons between the spectral family and the two independent oracles.

use crate::error::{Error, Result};
use crate::models::{InterpolationRule, ParameterSet};
use crate::oracles::crank_nicolson::{fd_truncation, CrankNicolson, FluxScheme};
use crate::oracles::ensemble::{histogram, model_simulation, DensitySampler, EnsembleState};
use crate::oracles::{l1_distance, Grid};
use crate::spectral::{interpolated_density, stationary_frame, SpectralCoefficients};

/// Cells of the tabulated CDF used to draw initial particle positions.
pub const SAMPLER_CELLS: usize = 8192;

/// Finite-difference oracle settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdSettings {
    pub dt: f64,
    pub points: usize,
}

/// Particle oracle settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleSettings {
    pub particles: usize,
    pub dt: f64,
    pub bins: usize,
    pub seed: u64,
}

/// Visits `times` in increasing order, reporting each step from the previous time.
/// Results come back in the caller's order.
fn incremental<T>(
    times: &[f64],
    mut visit: impl FnMut(f64, f64) -> Result<T>,
) -> Result<Vec<T>> {
    if let Some(bad) = times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return Err(Error::Domain(format!("time must be finite and >= 0, got {bad}")));
    }
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]));
    let mut out: Vec<Option<T>> = times.iter().map(|_| None).collect();
    let mut now = 0.0;
    for i in order {
        out[i] = Some(visit(now, times[i])?);
        now = times[i];
    }
    Ok(out.into_iter().map(|v| v.expect("every time visited")).collect())
}

/// Steps of at most `dt` covering `duration`; a duration shorter than `dt` is taken in
/// one step.
fn step_plan(dt: f64, duration: f64) -> (usize, f64) {
    if duration <= 0.0 {
        return (0, 0.0);
    }
    let steps = ((duration / dt - 1e-9).ceil() as usize).max(1);
    (steps, duration / steps as f64)
}

/// L1 distance between the Crank–Nicolson evolution of `P_s(x, 0)` (drift of `a_s`)
/// and the spectral `P_s(x, t)` on the finite-difference grid, for each of `times`.
pub fn fd_cross_check(
    coeffs: &SpectralCoefficients,
    s: f64,
    rule: InterpolationRule,
    settings: FdSettings,
    times: &[f64],
) -> Result<Vec<f64>> {
    let params = coeffs.params().interpolate(s, rule)?;
    let iv = fd_truncation(&params);
    let grid = Grid::uniform(iv.lo, iv.hi, settings.points)?;
    let density = interpolated_density(coeffs, s, rule)?;
    let spectral_at = |t: f64| -> Result<Vec<f64>> {
        grid.points().iter().map(|&x| density(x, t)).collect()
    };
    let integrator = CrankNicolson::new(&params, &grid, FluxScheme::default())?;
    let mut values = spectral_at(0.0)?;
    incremental(times, |from, to| {
        let (steps, dt) = step_plan(settings.dt, to - from);
        integrator.step_n(&mut values, dt, steps)?;
        Ok(l1_distance(&grid, &values, &spectral_at(to)?))
    })
}

/// L∞ change of the discrete stationary density `φ_0²` after Crank–Nicolson evolution
/// over `duration`.
pub fn fd_stationarity(params: &ParameterSet, settings: FdSettings, duration: f64) -> Result<f64> {
    let iv = fd_truncation(params);
    let grid = Grid::uniform(iv.lo, iv.hi, settings.points)?;
    let initial = stationary_frame(params, &grid, 0.0)?;
    let integrator = CrankNicolson::new(params, &grid, FluxScheme::default())?;
    let mut values = initial.values.clone();
    let (steps, dt) = step_plan(settings.dt, duration);
    integrator.step_n(&mut values, dt, steps)?;
    Ok(values.iter().zip(&initial.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Histogram L1 distance between an Euler–Maruyama ensemble started from `P_s(x, 0)`
/// and the spectral `P_s(x, t)`, for each of `times`.
///
/// Negative parts of the initial density are clipped before sampling.
pub fn particle_cross_check(
    coeffs: &SpectralCoefficients,
    s: f64,
    rule: InterpolationRule,
    settings: ParticleSettings,
    times: &[f64],
) -> Result<Vec<f64>> {
    let params = coeffs.params().interpolate(s, rule)?;
    let iv = fd_truncation(&params);
    let density = interpolated_density(coeffs, s, rule)?;
    let sampler = DensitySampler::from_fn(
        |x| density(x, 0.0).unwrap_or(0.0),
        iv.lo,
        iv.hi,
        SAMPLER_CELLS,
    )?;
    let simulation = model_simulation(&params);
    let mut state = simulation.start(&sampler, nonzero(settings.particles)?, settings.seed);
    incremental(times, |from, to| {
        advance(&simulation, &mut state, settings.dt, to - from)?;
        let hist = histogram(&state, settings.bins, iv.lo, iv.hi)?;
        hist.l1_against(|x| density(x, to).unwrap_or(f64::NAN))
    })
}

/// Histogram L1 distance to `φ_0²` of an ensemble started from `φ_0²` and evolved over
/// `duration`.
pub fn particle_stationarity(
    params: &ParameterSet,
    settings: ParticleSettings,
    duration: f64,
) -> Result<f64> {
    let iv = fd_truncation(params);
    let ground = |x: f64| params.eigenfunction(0, x).map(|p| p * p).unwrap_or(f64::NAN);
    let sampler = DensitySampler::from_fn(ground, iv.lo, iv.hi, SAMPLER_CELLS)?;
    let simulation = model_simulation(params);
    let mut state = simulation.start(&sampler, nonzero(settings.particles)?, settings.seed);
    advance(&simulation, &mut state, settings.dt, duration)?;
    histogram(&state, settings.bins, iv.lo, iv.hi)?.l1_against(ground)
}

fn nonzero(particles: usize) -> Result<usize> {
    if particles == 0 {
        Err(Error::EmptyEnsemble)
    } else {
        Ok(particles)
    }
}

fn advance<D: Fn(f64) -> f64 + Sync>(
    simulation: &crate::oracles::ParticleSimulation<D>,
    state: &mut EnsembleState,
    dt: f64,
    duration: f64,
) -> Result<()> {
    if duration <= 0.0 {
        return Ok(());
    }
    simulation.advance(state, dt.min(duration), duration)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incremental_visits_in_time_order() {
        let mut seen = Vec::new();
        let out = incremental(&[0.5, 0.1, 0.3], |from, to| {
            seen.push((from, to));
            Ok(to * 10.0)
        })
        .unwrap();
        assert_eq!(out, vec![5.0, 1.0, 3.0]);
        assert_eq!(seen, vec![(0.0, 0.1), (0.1, 0.3), (0.3, 0.5)]);
        assert!(incremental(&[-1.0], |_, _| Ok(())).is_err());
    }

    #[test]
    fn step_plan_handles_short_durations() {
        assert_eq!(step_plan(1e-3, 0.0), (0, 0.0));
        assert_eq!(step_plan(1e-2, 1e-3), (1, 1e-3));
        let (steps, dt) = step_plan(0.1, 1.0);
        assert_eq!(steps, 10);
        assert!((dt - 0.1).abs() < 1e-15);
    }

    #[test]
    fn small_fd_cross_check() {
        let a = ParameterSet::morse(5.0, 1.0).unwrap();
        let coeffs = SpectralCoefficients::new(a, vec![3.0, 2.0, 1.0]).unwrap();
        let settings = FdSettings { dt: 1e-3, points: 800 };
        let l1 = fd_cross_check(&coeffs, 0.3, InterpolationRule::Linear, settings, &[0.0, 0.2]).unwrap();
        assert!(l1[0] < 1e-14, "{l1:?}");
        assert!(l1[1] < 1e-3, "{l1:?}");
    }

    #[test]
    fn small_particle_cross_check_is_deterministic() {
        let a = ParameterSet::radial(1.0, 1.0).unwrap();
        let coeffs = SpectralCoefficients::new(a, vec![5.0, 1.0, 1.0]).unwrap();
        let settings = ParticleSettings { particles: 20_000, dt: 1e-2, bins: 32, seed: 3 };
        let first =
            particle_cross_check(&coeffs, 0.3, InterpolationRule::Linear, settings, &[0.2]).unwrap();
        let again =
            particle_cross_check(&coeffs, 0.3, InterpolationRule::Linear, settings, &[0.2]).unwrap();
        assert_eq!(first, again);
        assert!(first[0] < 0.1, "{first:?}");
    }
}
