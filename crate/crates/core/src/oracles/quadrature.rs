use crate::error::{Error, Result};

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Composite 5-point Gauss–Legendre estimate of `∫_lo^hi f(x) dx` over `panels`
/// equal panels.
pub fn quadrature(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, panels: usize) -> Result<f64> {
    try_quadrature(|x| Ok(f(x)), lo, hi, panels)
}

/// Nodes and weights of the composite rule used by [`quadrature`].
pub fn gauss_legendre_nodes(lo: f64, hi: f64, panels: usize) -> Result<Vec<(f64, f64)>> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Integration(format!("invalid interval [{lo}, {hi}]")));
    }
    if panels == 0 {
        return Err(Error::Integration("panel count must be positive".into()));
    }
    let width = (hi - lo) / panels as f64;
    let half = 0.5 * width;
    let mut nodes = Vec::with_capacity(5 * panels);
    for k in 0..panels {
        let mid = lo + (k as f64 + 0.5) * width;
        for (node, weight) in GL5_NODES.iter().zip(GL5_WEIGHTS) {
            nodes.push((mid + half * node, half * weight));
        }
    }
    Ok(nodes)
}

/// [`quadrature`] for integrands that can fail.
pub fn try_quadrature(
    mut f: impl FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    panels: usize,
) -> Result<f64> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Integration(format!("invalid interval [{lo}, {hi}]")));
    }
    if panels == 0 {
        return Err(Error::Integration("panel count must be positive".into()));
    }
    let width = (hi - lo) / panels as f64;
    let half = 0.5 * width;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = lo + (k as f64 + 0.5) * width;
        let mut panel = 0.0;
        for (node, weight) in GL5_NODES.iter().zip(GL5_WEIGHTS) {
            let x = mid + half * node;
            let fx = f(x)?;
            if !fx.is_finite() {
                return Err(Error::Integration(format!("integrand is {fx} at x = {x}")));
            }
            panel += weight * fx;
        }
        total += half * panel;
    }
    Ok(total)
}
