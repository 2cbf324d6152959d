use crate::error::{Error, Result};

/// Minimum number of points in a [`Grid`].
pub const MIN_GRID_POINTS: usize = 16;

/// Uniform, strictly increasing abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
    spacing: f64,
}

impl Grid {
    /// `m` equally spaced points from `lo` to `hi` inclusive.
    pub fn uniform(lo: f64, hi: f64, m: usize) -> Result<Grid> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidGrid(format!("bounds [{lo}, {hi}] are not increasing")));
        }
        if m < MIN_GRID_POINTS {
            return Err(Error::InvalidGrid(format!(
                "{m} points requested, at least {MIN_GRID_POINTS} required"
            )));
        }
        let spacing = (hi - lo) / (m - 1) as f64;
        let mut points: Vec<f64> = (0..m).map(|i| lo + i as f64 * spacing).collect();
        points[m - 1] = hi;
        Ok(Grid { points, spacing })
    }

    /// Wraps existing abscissae, checking monotonicity and uniform spacing.
    pub fn from_points(points: Vec<f64>) -> Result<Grid> {
        let m = points.len();
        if m < MIN_GRID_POINTS {
            return Err(Error::InvalidGrid(format!(
                "{m} points given, at least {MIN_GRID_POINTS} required"
            )));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidGrid("non-finite abscissa".into()));
        }
        let (lo, hi) = (points[0], points[m - 1]);
        if !(lo < hi) {
            return Err(Error::InvalidGrid("abscissae are not increasing".into()));
        }
        let spacing = (hi - lo) / (m - 1) as f64;
        let scale = lo.abs().max(hi.abs()).max(1.0);
        for (i, pair) in points.windows(2).enumerate() {
            let step = pair[1] - pair[0];
            if !(step > 0.0) {
                return Err(Error::InvalidGrid(format!("abscissae not increasing at index {i}")));
            }
            if (step - spacing).abs() > 1e-12 * scale {
                return Err(Error::InvalidGrid(format!(
                    "non-uniform spacing at index {i}: {step} vs {spacing}"
                )));
            }
        }
        Ok(Grid { points, spacing })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn lo(&self) -> f64 {
        self.points[0]
    }

    pub fn hi(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Trapezoid weights: `h` in the interior, `h/2` at the ends.
    pub fn trapezoid_weight(&self, i: usize) -> f64 {
        if i == 0 || i + 1 == self.points.len() {
            0.5 * self.spacing
        } else {
            self.spacing
        }
    }

    /// Trapezoid rule for samples on this grid.
    pub fn trapezoid(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.points.len(), "sample count must match the grid");
        let m = values.len();
        let interior: f64 = values[1..m - 1].iter().sum();
        self.spacing * (interior + 0.5 * (values[0] + values[m - 1]))
    }
}

/// Trapezoid L1 distance between two sample vectors on `grid`.
pub fn l1_distance(grid: &Grid, lhs: &[f64], rhs: &[f64]) -> f64 {
    let diff: Vec<f64> = lhs.iter().zip(rhs).map(|(a, b)| (a - b).abs()).collect();
    grid.trapezoid(&diff)
}
