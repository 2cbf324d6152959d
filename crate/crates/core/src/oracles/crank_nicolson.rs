use crate::error::{Error, Result};
use crate::models::{Interval, ModelKind, ParameterSet};
use crate::oracles::Grid;
use crate::spectral::SolutionFrame;

/// Left end of the finite-difference grid for the radial oscillator, away from the
/// `1/x` drift singularity.
pub const RADIAL_FD_LEFT: f64 = 1e-4;

/// Discretization of the interface flux `J = D P - ∂_x P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FluxScheme {
    /// `J_{i+1/2} = D(x_{i+1/2}) (P_i + P_{i+1})/2 - (P_{i+1} - P_i)/h`
    Central,
    /// `J_{i+1/2} = -e^{-2W_{i+1/2}} (e^{2W_{i+1}} P_{i+1} - e^{2W_i} P_i)/h`, which
    /// keeps `e^{-2W}` as an exact discrete steady state.
    #[default]
    Balanced,
}

/// Crank–Nicolson integrator for `∂_t P = -∂_x(D P) + ∂_x² P` in flux form with
/// zero-flux ends.
///
/// Node `i` owns a control volume of width `h` (`h/2` at the ends), so the trapezoid
/// mass `Σ w_i P_i` is conserved by construction.
#[derive(Debug, Clone)]
pub struct CrankNicolson {
    grid: Grid,
    weights: Vec<f64>,
    // J_{i+1/2} = left[i] P_i + right[i] P_{i+1}
    left: Vec<f64>,
    right: Vec<f64>,
}

impl CrankNicolson {
    pub fn new(params: &ParameterSet, grid: &Grid, scheme: FluxScheme) -> Result<Self> {
        let x = grid.points();
        let h = grid.spacing();
        let m = x.len();
        let weights: Vec<f64> = (0..m).map(|i| grid.trapezoid_weight(i)).collect();
        let mut left = Vec::with_capacity(m - 1);
        let mut right = Vec::with_capacity(m - 1);
        for i in 0..m - 1 {
            let mid = 0.5 * (x[i] + x[i + 1]);
            match scheme {
                FluxScheme::Central => {
                    let d = params.drift(mid)?;
                    left.push(0.5 * d + 1.0 / h);
                    right.push(0.5 * d - 1.0 / h);
                }
                FluxScheme::Balanced => {
                    let w_mid = params.prepotential(mid)?;
                    let w_l = params.prepotential(x[i])?;
                    let w_r = params.prepotential(x[i + 1])?;
                    left.push((2.0 * (w_l - w_mid)).exp() / h);
                    right.push(-(2.0 * (w_r - w_mid)).exp() / h);
                }
            }
        }
        Ok(CrankNicolson { grid: grid.clone(), weights, left, right })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Tridiagonal bands `(lower, diag, upper)` of the semi-discrete operator `L` in
    /// `dP/dt = L P`.
    fn operator(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let m = self.weights.len();
        let mut lower = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        for i in 0..m {
            let w = self.weights[i];
            if i + 1 < m {
                diag[i] -= self.left[i] / w;
                upper[i] = -self.right[i] / w;
            }
            if i > 0 {
                diag[i] += self.right[i - 1] / w;
                lower[i] = self.left[i - 1] / w;
            }
        }
        (lower, diag, upper)
    }

    /// Advances `values` by `steps` steps of size `dt`.
    pub fn step_n(&self, values: &mut [f64], dt: f64, steps: usize) -> Result<()> {
        let m = values.len();
        if m != self.weights.len() {
            return Err(Error::InvalidGrid("state does not match the integrator grid".into()));
        }
        let (lower, diag, upper) = self.operator();
        let half = 0.5 * dt;
        // implicit side: I - dt/2 L
        let a: Vec<f64> = lower.iter().map(|v| -half * v).collect();
        let b: Vec<f64> = diag.iter().map(|v| 1.0 - half * v).collect();
        let c: Vec<f64> = upper.iter().map(|v| -half * v).collect();
        let factor = TridiagonalLu::factor(&a, &b, &c)?;
        let mut rhs = vec![0.0; m];
        for _ in 0..steps {
            for i in 0..m {
                let mut lp = diag[i] * values[i];
                if i > 0 {
                    lp += lower[i] * values[i - 1];
                }
                if i + 1 < m {
                    lp += upper[i] * values[i + 1];
                }
                rhs[i] = values[i] + half * lp;
            }
            factor.solve(&rhs, values);
        }
        Ok(())
    }
}

/// Thomas-algorithm factorization of a tridiagonal matrix.
struct TridiagonalLu {
    lower: Vec<f64>,
    inv_pivot: Vec<f64>,
    upper_scaled: Vec<f64>,
}

impl TridiagonalLu {
    fn factor(lower: &[f64], diag: &[f64], upper: &[f64]) -> Result<Self> {
        let m = diag.len();
        let mut inv_pivot = vec![0.0; m];
        let mut upper_scaled = vec![0.0; m];
        let mut pivot = diag[0];
        for i in 0..m {
            if i > 0 {
                pivot = diag[i] - lower[i] * upper_scaled[i - 1];
            }
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(Error::Solver { row: i });
            }
            inv_pivot[i] = 1.0 / pivot;
            upper_scaled[i] = upper[i] * inv_pivot[i];
        }
        Ok(TridiagonalLu { lower: lower.to_vec(), inv_pivot, upper_scaled })
    }

    fn solve(&self, rhs: &[f64], out: &mut [f64]) {
        let m = rhs.len();
        out[0] = rhs[0] * self.inv_pivot[0];
        for i in 1..m {
            out[i] = (rhs[i] - self.lower[i] * out[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..m - 1).rev() {
            out[i] -= self.upper_scaled[i] * out[i + 1];
        }
    }
}

/// Truncation used for finite-difference grids: the default truncation, with the
/// radial left end moved out to `1e-4`.
pub fn fd_truncation(params: &ParameterSet) -> Interval {
    let mut iv = params.default_truncation();
    if params.kind() == ModelKind::RadialOscillator {
        iv.lo = iv.lo.max(RADIAL_FD_LEFT);
    }
    iv
}

/// Integrates `initial` forward by `duration` with steps of at most `dt`, using the
/// balanced flux.
pub fn crank_nicolson_evolve(
    params: &ParameterSet,
    initial: &SolutionFrame,
    dt: f64,
    duration: f64,
) -> Result<SolutionFrame> {
    crank_nicolson_evolve_with(params, initial, dt, duration, FluxScheme::default())
}

pub(crate) fn step_count(dt: f64, duration: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    if !(duration >= dt) || !duration.is_finite() {
        return Err(Error::Domain(format!("duration {duration} must be at least dt = {dt}")));
    }
    Ok((duration / dt - 1e-9).ceil() as usize)
}

/// [`crank_nicolson_evolve`] with an explicit flux scheme.
pub fn crank_nicolson_evolve_with(
    params: &ParameterSet,
    initial: &SolutionFrame,
    dt: f64,
    duration: f64,
    scheme: FluxScheme,
) -> Result<SolutionFrame> {
    let steps = step_count(dt, duration)?;
    let dt = duration / steps as f64;
    let integrator = CrankNicolson::new(params, &initial.grid, scheme)?;
    let mut values = initial.values.clone();
    integrator.step_n(&mut values, dt, steps)?;
    SolutionFrame::new(initial.grid.clone(), initial.t + duration, initial.s, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stationary(params: &ParameterSet, grid: &Grid) -> SolutionFrame {
        let values: Vec<f64> =
            grid.points().iter().map(|&x| params.eigenfunction(0, x).unwrap().powi(2)).collect();
        SolutionFrame::new(grid.clone(), 0.0, 0.0, values).unwrap()
    }

    #[test]
    fn mass_is_conserved() {
        let a = ParameterSet::radial(1.0, 1.0).unwrap();
        let iv = fd_truncation(&a);
        let grid = Grid::uniform(iv.lo, iv.hi, 400).unwrap();
        let values: Vec<f64> =
            grid.points().iter().map(|&x| (-(x - 3.0) * (x - 3.0)).exp()).collect();
        let initial = SolutionFrame::new(grid, 0.0, 0.0, values).unwrap();
        for scheme in [FluxScheme::Central, FluxScheme::Balanced] {
            let out = crank_nicolson_evolve_with(&a, &initial, 1e-3, 0.5, scheme).unwrap();
            assert!((out.mass() - initial.mass()).abs() < 1e-12);
            assert!((out.t - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn balanced_scheme_keeps_stationary_state_exactly() {
        let a = ParameterSet::morse(5.0, 1.0).unwrap();
        let iv = fd_truncation(&a);
        let grid = Grid::uniform(iv.lo, iv.hi, 500).unwrap();
        let initial = stationary(&a, &grid);
        let out =
            crank_nicolson_evolve_with(&a, &initial, 1e-2, 1.0, FluxScheme::Balanced).unwrap();
        assert!(out.max_abs_difference(&initial) < 1e-12);
    }

    #[test]
    fn rejects_bad_steps() {
        let a = ParameterSet::radial(1.0, 1.0).unwrap();
        let grid = Grid::uniform(0.1, 5.0, 32).unwrap();
        let initial = stationary(&a, &grid);
        assert!(crank_nicolson_evolve(&a, &initial, 0.0, 1.0).is_err());
        assert!(crank_nicolson_evolve(&a, &initial, 0.1, 0.01).is_err());
    }

    #[test]
    fn thomas_solves_small_system() {
        let lu = TridiagonalLu::factor(&[0.0, 1.0, 1.0], &[4.0, 4.0, 4.0], &[1.0, 1.0, 0.0])
            .unwrap();
        let mut x = [0.0; 3];
        lu.solve(&[5.0, 6.0, 5.0], &mut x);
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
        assert!(TridiagonalLu::factor(&[0.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]).is_err());
    }
}
