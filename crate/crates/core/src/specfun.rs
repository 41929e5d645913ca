//! Log-gamma, digamma, trigamma, psi'' and the trigamma inverse.
//!
//! Everything downstream (contour kernels, scaling constants, gamma-ratio
//! products) reduces to these. All of them use the same scheme: shift the
//! argument right until the Stirling-type asymptotic series converges to
//! machine precision, then undo the shift with the recurrence.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub const ZETA_3: f64 = 1.202_056_903_159_594_3;

const LN_TWO_PI_HALF: f64 = 0.918_938_533_204_672_7; // ln(2*pi)/2

/// Re(z) threshold beyond which the asymptotic series is used directly.
const SHIFT_TARGET: f64 = 12.0;

/// B_{2k} / (2k (2k-1)), k = 1..=10: coefficients of the lnGamma series in 1/w^{2k-1}.
const LNGAMMA_COEF: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// B_{2k} / (2k), k = 1..=8: digamma series coefficients in 1/x^{2k}.
const DIGAMMA_COEF: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

/// B_{2k}, k = 1..=8: trigamma series coefficients in 1/x^{2k+1}.
const TRIGAMMA_COEF: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// (2k+1) B_{2k}, k = 1..=8: psi'' series coefficients in 1/x^{2k+2}.
const PSI2_COEF: [f64; 8] = [
    1.0 / 2.0,
    -1.0 / 6.0,
    1.0 / 6.0,
    -3.0 / 10.0,
    5.0 / 6.0,
    -691.0 / 210.0,
    35.0 / 2.0,
    -3617.0 / 30.0,
];

/// Principal branch of ln Gamma(z), continuous on the plane cut along (-inf, 0].
///
/// Shifts z right until Re >= 12, applies the Stirling series there and
/// removes the shift with principal logarithms; the recurrence
/// lnGamma(z+1) = lnGamma(z) + Log z holds branch-exactly on the cut plane.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("log_gamma of non-finite {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::GammaPole(z));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < SHIFT_TARGET {
        shift += w.ln();
        w += 1.0;
    }
    let winv = 1.0 / w;
    let w2inv = winv * winv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = winv;
    for c in LNGAMMA_COEF {
        series += c * p;
        p *= w2inv;
    }
    let stirling = (w - 0.5) * w.ln() - w + LN_TWO_PI_HALF + series;
    Ok(stirling - shift)
}

/// ln Gamma(x) for real x > 0.
pub fn log_gamma_real(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("log_gamma_real requires x > 0, got {x}")));
    }
    Ok(log_gamma(Complex64::new(x, 0.0))?.re)
}

fn check_positive(x: f64, name: &str) -> Result<()> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("{name} requires x > 0, got {x}")));
    }
    Ok(())
}

/// Digamma Psi(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive(x, "digamma")?;
    let mut w = x;
    let mut shift = 0.0;
    while w < SHIFT_TARGET {
        shift += 1.0 / w;
        w += 1.0;
    }
    let w2inv = 1.0 / (w * w);
    let mut series = 0.0;
    let mut p = w2inv;
    for c in DIGAMMA_COEF {
        series += c * p;
        p *= w2inv;
    }
    Ok(w.ln() - 0.5 / w - series - shift)
}

/// Trigamma Psi'(x) for x > 0; strictly positive and strictly decreasing.
pub fn trigamma(x: f64) -> Result<f64> {
    check_positive(x, "trigamma")?;
    let mut w = x;
    let mut shift = 0.0;
    while w < SHIFT_TARGET {
        shift += 1.0 / (w * w);
        w += 1.0;
    }
    let winv = 1.0 / w;
    let w2inv = winv * winv;
    let mut series = 0.0;
    let mut p = winv * w2inv;
    for c in TRIGAMMA_COEF {
        series += c * p;
        p *= w2inv;
    }
    Ok(winv + 0.5 * w2inv + series + shift)
}

/// Psi''(x) for x > 0; strictly negative on the domain.
pub fn psi2(x: f64) -> Result<f64> {
    check_positive(x, "psi2")?;
    let mut w = x;
    let mut shift = 0.0;
    while w < SHIFT_TARGET {
        shift -= 2.0 / (w * w * w);
        w += 1.0;
    }
    let winv = 1.0 / w;
    let w2inv = winv * winv;
    let mut series = 0.0;
    let mut p = w2inv * w2inv;
    for c in PSI2_COEF {
        series += c * p;
        p *= w2inv;
    }
    Ok(-w2inv - winv * w2inv - series + shift)
}

/// Inverse of trigamma: the unique theta > 0 with Psi'(theta) = kappa.
///
/// Bracketed bisection (trigamma is strictly decreasing onto (0, inf))
/// refined by Newton steps using Psi''.
pub fn theta_of_kappa(kappa: f64) -> Result<f64> {
    check_positive(kappa, "theta_of_kappa")?;
    let mut lo = 1e-6;
    let mut hi = 1e6;
    while trigamma(lo)? < kappa {
        lo *= 0.1;
        if lo < 1e-300 {
            return Err(Error::Numerical(format!("trigamma bracket failed for kappa={kappa}")));
        }
    }
    while trigamma(hi)? > kappa {
        hi *= 10.0;
        if hi > 1e300 {
            return Err(Error::Numerical(format!("trigamma bracket failed for kappa={kappa}")));
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if trigamma(mid)? > kappa {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 * lo {
            break;
        }
    }
    let mut theta = 0.5 * (lo + hi);
    for _ in 0..8 {
        let f = trigamma(theta)? - kappa;
        let step = f / psi2(theta)?;
        let next = theta - step;
        if next > 0.0 {
            theta = next;
        }
        if step.abs() < 1e-16 * theta {
            break;
        }
    }
    Ok(theta)
}

/// Constants tying the polymer scale to the fluctuation scale for a given
/// time-to-height ratio kappa: theta = Psi'^{-1}(kappa),
/// f = theta*kappa - Psi(theta), c = (-Psi''(theta)/2)^{1/3}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingConstants {
    pub kappa: f64,
    pub theta: f64,
    pub f: f64,
    pub c: f64,
}

pub fn scaling_constants(kappa: f64) -> Result<ScalingConstants> {
    let theta = theta_of_kappa(kappa)?;
    let f = theta * kappa - digamma(theta)?;
    let c = (-psi2(theta)? / 2.0).cbrt();
    Ok(ScalingConstants { kappa, theta, f, c })
}
