//! Special functions for the analytic eigensystems.
//!
//! Everything here is plain `f64` arithmetic: associated Laguerre polynomials by
//! upward recurrence, `ln Γ` by a Lanczos approximation, and generalized binomial
//! coefficients built on top of `ln Γ`.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};

/// Largest polynomial degree accepted by [`laguerre_assoc`].
pub const MAX_LAGUERRE_DEGREE: usize = 64;

// Lanczos approximation with r = 10.900511 and eleven terms (Pugh, 2004).
const LANCZOS_R: f64 = 10.900511;
#[allow(clippy::excessive_precision)]
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];
/// ln(2 * sqrt(e / pi))
const LN_2_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;

/// Associated Laguerre polynomial `L_n^a(y)`.
///
/// Evaluated with the upward three-term recurrence
/// `(k+1) L_{k+1} = (2k+1+a-y) L_k - (k+a) L_{k-1}` from `L_0 = 1`, `L_1 = 1+a-y`.
pub fn laguerre_assoc(n: usize, a: f64, y: f64) -> Result<f64> {
    if n > MAX_LAGUERRE_DEGREE {
        return Err(Error::Domain(format!(
            "Laguerre degree {n} exceeds {MAX_LAGUERRE_DEGREE}"
        )));
    }
    if !(a > -1.0) || !a.is_finite() {
        return Err(Error::Domain(format!("Laguerre order must exceed -1, got {a}")));
    }
    if !(y >= 0.0) || !y.is_finite() {
        return Err(Error::Domain(format!("Laguerre argument must be >= 0, got {y}")));
    }
    Ok(laguerre_unchecked(n, a, y))
}

pub(crate) fn laguerre_unchecked(n: usize, a: f64, y: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = 1.0 + a - y;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - y) * curr - (kf + a) * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// `ln Γ(z)` for `z > 0`.
pub fn log_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires z > 0, got {z}")));
    }
    Ok(log_gamma_unchecked(z))
}

fn log_gamma_unchecked(z: f64) -> f64 {
    if z < 0.5 {
        // Reflection: Γ(z)Γ(1-z) = π / sin(πz)
        let s = LANCZOS_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS_DK[0], |acc, (k, d)| acc + d / (k as f64 - z));
        PI.ln()
            - (PI * z).sin().ln()
            - s.ln()
            - LN_2_SQRT_E_OVER_PI
            - (0.5 - z) * ((0.5 - z + LANCZOS_R) / E).ln()
    } else {
        let s = LANCZOS_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS_DK[0], |acc, (k, d)| acc + d / (z + k as f64 - 1.0));
        s.ln() + LN_2_SQRT_E_OVER_PI + (z - 0.5) * ((z - 0.5 + LANCZOS_R) / E).ln()
    }
}

/// Generalized binomial coefficient `Γ(p+1) / (Γ(n+1) Γ(p-n+1))` for `p > n - 1`.
pub fn binomial_general(p: f64, n: usize) -> Result<f64> {
    let nf = n as f64;
    if !(p - nf + 1.0 > 0.0) || !(p + 1.0 > 0.0) {
        return Err(Error::Domain(format!(
            "binomial({p}, {n}) needs positive gamma arguments"
        )));
    }
    let ln = log_gamma(p + 1.0)? - log_gamma(nf + 1.0)? - log_gamma(p - nf + 1.0)?;
    Ok(ln.exp())
}
