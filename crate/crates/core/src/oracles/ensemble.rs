use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::{Interval, ParameterSet};
use crate::oracles::crank_nicolson::{fd_truncation, step_count};
use crate::oracles::{quadrature, Grid};

const PURPOSE_INITIAL: u64 = 0x696e_6974; // "init"
const PURPOSE_NOISE: u64 = 0x6e6f_6973; // "nois"

/// ChaCha8 keyed by `(seed, purpose)`, one stream per particle.
fn keyed_stream(seed: u64, purpose: u64, particle: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&purpose.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(particle);
    rng
}

fn unit_open(bits: u64) -> f64 {
    // (0, 1]
    ((bits >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn unit_half_open(bits: u64) -> f64 {
    // [0, 1)
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normals for one particle, addressed by step index.
///
/// Box–Muller on two 64-bit words per pair: step `2k` takes the cosine branch and step
/// `2k+1` the sine branch of pair `k`, which starts at word position `4k`.
struct NormalStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl NormalStream {
    fn at(seed: u64, particle: u64, step: u64) -> Self {
        let mut rng = keyed_stream(seed, PURPOSE_NOISE, particle);
        rng.set_word_pos(4 * u128::from(step / 2));
        let mut stream = NormalStream { rng, spare: None };
        if step % 2 == 1 {
            stream.next();
        }
        stream
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = unit_open(self.rng.next_u64());
        let u2 = unit_half_open(self.rng.next_u64());
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

/// Draws initial particle positions by inverse transform of a uniform in `[0, 1)`.
pub trait InitialSampler: Sync {
    fn quantile(&self, u: f64) -> f64;
}

impl<F: Fn(f64) -> f64 + Sync> InitialSampler for F {
    fn quantile(&self, u: f64) -> f64 {
        self(u)
    }
}

/// Inverse-CDF sampler for a non-negative density tabulated on a uniform grid
/// (piecewise-constant between nodes, negative values clipped to zero).
#[derive(Debug, Clone)]
pub struct DensitySampler {
    edges: Vec<f64>,
    cdf: Vec<f64>,
}

impl DensitySampler {
    pub fn from_fn(density: impl Fn(f64) -> f64, lo: f64, hi: f64, cells: usize) -> Result<Self> {
        if !(lo < hi) || cells == 0 {
            return Err(Error::InvalidGrid(format!("cannot tabulate on [{lo}, {hi}]")));
        }
        let width = (hi - lo) / cells as f64;
        let edges: Vec<f64> = (0..=cells).map(|i| lo + i as f64 * width).collect();
        let mut cdf = Vec::with_capacity(cells + 1);
        cdf.push(0.0);
        let mut total = 0.0;
        for i in 0..cells {
            // cell mass by 5-node Gauss–Legendre
            let mass = quadrature(|x| density(x).max(0.0), edges[i], edges[i + 1], 1)?;
            total += mass;
            cdf.push(total);
        }
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::Integration(format!("density has total mass {total}")));
        }
        cdf.iter_mut().for_each(|c| *c /= total);
        Ok(DensitySampler { edges, cdf })
    }
}

impl InitialSampler for DensitySampler {
    fn quantile(&self, u: f64) -> f64 {
        let i = self.cdf.partition_point(|&c| c <= u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let frac = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.edges[i - 1] + frac.clamp(0.0, 1.0) * (self.edges[i] - self.edges[i - 1])
    }
}

/// Particle positions after `steps` Euler–Maruyama steps.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleState {
    pub positions: Vec<f64>,
    pub seed: u64,
    pub t: f64,
    pub steps: u64,
}

impl EnsembleState {
    /// Samples `particles` initial positions from `sampler`.
    pub fn sample(sampler: &dyn InitialSampler, particles: usize, seed: u64) -> Self {
        let positions = (0..particles as u64)
            .into_par_iter()
            .map(|p| sampler.quantile(unit_half_open(keyed_stream(seed, PURPOSE_INITIAL, p).next_u64())))
            .collect();
        EnsembleState { positions, seed, t: 0.0, steps: 0 }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Reflected Euler–Maruyama integration of `dX = D(X) dt + sqrt(2) dW`.
pub struct ParticleSimulation<D> {
    drift: D,
    bounds: Interval,
}

impl<D: Fn(f64) -> f64 + Sync> ParticleSimulation<D> {
    /// `bounds` may be infinite for free diffusion.
    pub fn new(drift: D, bounds: Interval) -> Self {
        ParticleSimulation { drift, bounds }
    }

    /// Samples initial positions and folds them into the bounds.
    pub fn start(&self, sampler: &dyn InitialSampler, particles: usize, seed: u64) -> EnsembleState {
        let mut state = EnsembleState::sample(sampler, particles, seed);
        for x in state.positions.iter_mut() {
            *x = self.reflect(*x);
        }
        state
    }

    fn reflect(&self, x: f64) -> f64 {
        let Interval { lo, hi } = self.bounds;
        let mut y = x;
        if y < lo {
            y = 2.0 * lo - y;
        }
        if y > hi {
            y = 2.0 * hi - y;
        }
        y.clamp(lo, hi)
    }

    /// `X <- X + D(X) dt + sqrt(2 dt) ξ`, for `ceil(duration/dt)` steps of equal size.
    ///
    /// Each particle draws its noise from its own keyed stream, so the result does not
    /// depend on how the work is split across threads.
    pub fn advance(&self, state: &mut EnsembleState, dt: f64, duration: f64) -> Result<()> {
        let steps = step_count(dt, duration)?;
        let dt = duration / steps as f64;
        let noise_scale = (2.0 * dt).sqrt();
        let (seed, first) = (state.seed, state.steps);
        state.positions.par_iter_mut().enumerate().for_each(|(p, x)| {
            let mut normals = NormalStream::at(seed, p as u64, first);
            let mut pos = *x;
            for _ in 0..steps {
                pos = self.reflect(pos + (self.drift)(pos) * dt + noise_scale * normals.next());
            }
            *x = pos;
        });
        state.t += duration;
        state.steps += steps as u64;
        Ok(())
    }
}

/// Runs the particle realization of the FPE with drift `D(x; a)`, reflecting at the
/// finite-difference truncation of `params`.
pub fn euler_maruyama(
    params: &ParameterSet,
    particles: usize,
    sampler: &dyn InitialSampler,
    dt: f64,
    duration: f64,
    seed: u64,
) -> Result<EnsembleState> {
    if particles == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let simulation = model_simulation(params);
    let mut state = simulation.start(sampler, particles, seed);
    simulation.advance(&mut state, dt, duration)?;
    Ok(state)
}

/// Particle simulation with drift `D(x; a)` reflecting at the finite-difference
/// truncation of `params`.
pub fn model_simulation(params: &ParameterSet) -> ParticleSimulation<impl Fn(f64) -> f64 + Sync> {
    let model = *params;
    // positions stay inside the truncated domain, where the drift is defined
    ParticleSimulation::new(move |x: f64| model.drift(x).unwrap_or(0.0), fd_truncation(params))
}

/// Density estimate on bin centers.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub centers: Vec<f64>,
    pub density: Vec<f64>,
}

impl Histogram {
    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.density.len() as f64
    }

    /// `Σ |density_i - mean_i| · width`, with `mean_i` the average of `reference` over
    /// bin `i`.
    pub fn l1_against(&self, reference: impl Fn(f64) -> f64) -> Result<f64> {
        let width = self.bin_width();
        let mut total = 0.0;
        for (i, &d) in self.density.iter().enumerate() {
            let a = self.lo + i as f64 * width;
            let mean = quadrature(&reference, a, a + width, 8)? / width;
            total += (d - mean).abs() * width;
        }
        Ok(total)
    }

    pub fn as_grid(&self) -> Result<Grid> {
        Grid::from_points(self.centers.clone())
    }
}

/// Normalized histogram of the positions inside `[lo, hi]`; the last bin is closed.
pub fn histogram(ensemble: &EnsembleState, bins: usize, lo: f64, hi: f64) -> Result<Histogram> {
    if ensemble.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    if bins < 2 || !(lo < hi) {
        return Err(Error::InvalidGrid(format!("{bins} bins on [{lo}, {hi}]")));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    let mut inside = 0u64;
    for &x in &ensemble.positions {
        if x < lo || x > hi {
            continue;
        }
        let i = (((x - lo) / width) as usize).min(bins - 1);
        counts[i] += 1;
        inside += 1;
    }
    if inside == 0 {
        return Err(Error::EmptyEnsemble);
    }
    let norm = 1.0 / (inside as f64 * width);
    Ok(Histogram {
        lo,
        hi,
        centers: (0..bins).map(|i| lo + (i as f64 + 0.5) * width).collect(),
        density: counts.iter().map(|&c| c as f64 * norm).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_particle_histogram() {
        let state = EnsembleState { positions: vec![0.5], seed: 0, t: 0.0, steps: 0 };
        let h = histogram(&state, 2, 0.0, 1.0).unwrap();
        assert_eq!(h.density, vec![0.0, 2.0]);
        assert_eq!(h.centers, vec![0.25, 0.75]);
    }

    #[test]
    fn histogram_errors() {
        let empty = EnsembleState { positions: vec![], seed: 0, t: 0.0, steps: 0 };
        assert_eq!(histogram(&empty, 4, 0.0, 1.0), Err(Error::EmptyEnsemble));
        let one = EnsembleState { positions: vec![0.1], seed: 0, t: 0.0, steps: 0 };
        assert!(histogram(&one, 1, 0.0, 1.0).is_err());
    }

    #[test]
    fn normal_stream_is_seekable() {
        let mut from_start = NormalStream::at(7, 3, 0);
        let sequence: Vec<f64> = (0..9).map(|_| from_start.next()).collect();
        for (k, &z) in sequence.iter().enumerate() {
            let mut resumed = NormalStream::at(7, 3, k as u64);
            assert_eq!(resumed.next(), z);
        }
        let mut other = NormalStream::at(7, 4, 0);
        assert_ne!(other.next(), sequence[0]);
    }

    #[test]
    fn advancing_in_pieces_matches_one_run() {
        let sim = ParticleSimulation::new(|x: f64| -x, Interval::new(-5.0, 5.0));
        let start = EnsembleState::sample(&|u: f64| 4.0 * u - 2.0, 64, 11);
        let mut whole = start.clone();
        sim.advance(&mut whole, 0.01, 0.2).unwrap();
        let mut pieces = start;
        sim.advance(&mut pieces, 0.01, 0.05).unwrap();
        sim.advance(&mut pieces, 0.01, 0.15).unwrap();
        assert_eq!(whole.positions, pieces.positions);
        assert_eq!(whole.steps, 20);
    }

    #[test]
    fn density_sampler_inverts_uniform_cdf() {
        let sampler = DensitySampler::from_fn(|_| 1.0, 2.0, 4.0, 10).unwrap();
        for u in [0.0, 0.13, 0.5, 0.999] {
            assert!((sampler.quantile(u) - (2.0 + 2.0 * u)).abs() < 1e-12);
        }
    }

    #[test]
    fn reflection_keeps_particles_inside() {
        let sim = ParticleSimulation::new(|_| 50.0, Interval::new(0.0, 1.0));
        let mut state = EnsembleState::sample(&|u: f64| u, 200, 5);
        sim.advance(&mut state, 0.01, 0.3).unwrap();
        assert!(state.positions.iter().all(|&x| (0.0..=1.0).contains(&x)));
        assert_eq!(state.len(), 200);
    }
}
