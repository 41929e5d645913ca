//! Pointwise evaluation of the four contour-integral kernel families.
//!
//! Single-contour kernels (the finite-size kernel K_u, its rescaled form
//! K_N and the limiting kernel) are one inner quadrature per point.
//! Double-contour kernels (Borodin-Peche and the sigma-deformed kernel)
//! are assembled once per parameter set: the x/y dependence separates
//! from the (w, z) coupling, so a kernel matrix over half-line nodes is
//! three small matrix products instead of a double integral per entry.
//!
//! Gamma ratios are always exp of log-gamma differences; u^s and S^(...)
//! powers use the principal branch (their bases have positive real part).

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contours::{ComplexPath, Discretization, QuadratureRule};
use crate::error::{Error, Result};
use crate::specfun::{log_gamma, ScalingConstants};

/// Guard distance: a quadrature node closer than this to an integrand
/// pole means the contour configuration is broken, not that more
/// quadrature is needed.
pub const POLE_GUARD: f64 = 1e-8;

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
const NORM_2PI_I_SQ: Complex64 = Complex64::new(-4.0 * std::f64::consts::PI * std::f64::consts::PI, 0.0);
const MAX_EXPONENT: f64 = 700.0;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Boundary-perturbation vectors: b are drift-type spikes, beta are
/// boundary-source spikes; max(b) < min(beta) whenever both are present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpikeParams {
    pub b: Vec<f64>,
    pub beta: Vec<f64>,
}

impl SpikeParams {
    pub fn new(b: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let sp = SpikeParams { b, beta };
        sp.validate()?;
        Ok(sp)
    }

    pub fn empty() -> Self {
        SpikeParams::default()
    }

    pub fn validate(&self) -> Result<()> {
        if let (Some(maxb), Some(minbeta)) = (
            self.b.iter().copied().reduce(f64::max),
            self.beta.iter().copied().reduce(f64::min),
        ) {
            if maxb >= minbeta {
                return Err(Error::Constraint(format!(
                    "max(b) = {maxb} must be strictly below min(beta) = {minbeta}"
                )));
            }
        }
        Ok(())
    }

    /// Coordinatewise shift (b + y, beta + y).
    pub fn shifted(&self, y: f64) -> SpikeParams {
        SpikeParams {
            b: self.b.iter().map(|v| v + y).collect(),
            beta: self.beta.iter().map(|v| v + y).collect(),
        }
    }
}

/// Parameters of the finite-size Laplace-transform kernel K_u:
/// N = a.len() levels with drifts a, n = alpha.len() boundary columns,
/// time horizon tau, Laplace variable u with Re(u) > 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteNParams {
    pub a: Vec<f64>,
    pub alpha: Vec<f64>,
    pub tau: f64,
    pub u: Complex64,
}

impl FiniteNParams {
    pub fn new(a: Vec<f64>, alpha: Vec<f64>, tau: f64, u: Complex64) -> Result<Self> {
        let p = FiniteNParams { a, alpha, tau, u };
        p.validate()?;
        Ok(p)
    }

    pub fn levels(&self) -> usize {
        self.a.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.is_empty() {
            return Err(Error::Constraint("need at least one level (a nonempty)".into()));
        }
        if !(self.tau > 0.0) {
            return Err(Error::Constraint(format!("tau must be positive, got {}", self.tau)));
        }
        if !(self.u.re > 0.0) {
            return Err(Error::Constraint(format!("Re(u) must be positive, got {}", self.u)));
        }
        for &al in &self.alpha {
            for &av in &self.a {
                if al - av <= 0.0 {
                    return Err(Error::Constraint(format!(
                        "alpha_k - a_l must be positive, got alpha={al}, a={av}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Laplace variable of the sigma-deformed kernel: either the raw S with
/// Re(S) > 0, or the shifted form obtained by setting S = exp(-r/sigma),
/// in which case S^{sigma(z-w)} = e^{-r(z-w)} is used directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SigmaForm {
    Laplace { s: Complex64 },
    Shifted { r: f64 },
}

/// Parameters of the CDRP Laplace-transform determinant:
/// sigma = (2/T)^{1/3}, position X, Laplace form, spike vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdrpParams {
    pub sigma: f64,
    pub t_time: f64,
    pub x_pos: f64,
    pub form: SigmaForm,
    pub spikes: SpikeParams,
}

impl CdrpParams {
    pub fn new(t_time: f64, x_pos: f64, form: SigmaForm, spikes: SpikeParams) -> Result<Self> {
        if !(t_time > 0.0) {
            return Err(Error::Constraint(format!("T must be positive, got {t_time}")));
        }
        if let SigmaForm::Laplace { s } = form {
            if !(s.re > 0.0) {
                return Err(Error::Constraint(format!("Re(S) must be positive, got {s}")));
            }
        }
        spikes.validate()?;
        let sigma = (2.0 / t_time).cbrt();
        Ok(CdrpParams { sigma, t_time, x_pos, form, spikes })
    }

    pub fn validate(&self) -> Result<()> {
        let lhs = self.sigma.powi(3) * self.t_time;
        if (lhs - 2.0).abs() > 1e-12 * 2.0 {
            return Err(Error::Constraint(format!("sigma^3 * T = {lhs}, expected 2")));
        }
        self.spikes.validate()
    }
}

fn guard_pole(node: Complex64, pole: Complex64) -> Result<()> {
    let dist = (node - pole).norm();
    if dist < POLE_GUARD {
        return Err(Error::PoleProximity { pole, dist });
    }
    Ok(())
}

fn exp_checked(e: Complex64) -> Result<Complex64> {
    if e.re > MAX_EXPONENT {
        return Err(Error::Numerical(format!("exponent overflow: Re = {:.3e}", e.re)));
    }
    Ok(e.exp())
}

/// The finite-size kernel K_u(v, v') as the inner contour integral over
/// C_s(v): Gamma(-s) Gamma(1+s) u^s e^{v tau s + tau s^2/2} / (v+s-v')
/// times the drift and boundary gamma-ratio products.
pub fn eval_ku(
    v: Complex64,
    v2: Complex64,
    p: &FiniteNParams,
    quad: &QuadratureRule,
) -> Result<Complex64> {
    p.validate()?;
    let log_u = p.u.ln();
    let mut fixed = Complex64::default();
    for &al in &p.a {
        fixed += log_gamma(v - al)?;
    }
    for &ak in &p.alpha {
        fixed -= log_gamma(c64(ak, 0.0) - v)?;
    }
    let mut total = Complex64::default();
    for (&s, &wt) in quad.nodes.iter().zip(&quad.weights) {
        // poles of Gamma(-s)Gamma(1+s) at every integer
        guard_pole(s, c64(s.re.round(), 0.0))?;
        // simple pole of 1/(v+s-v')
        guard_pole(s, v2 - v)?;
        let mut expo = log_gamma(-s)? + log_gamma(s + 1.0)? + s * log_u
            + v * p.tau * s
            + p.tau * s * s * 0.5
            + fixed;
        for &al in &p.a {
            expo -= log_gamma(s + v - al)?;
        }
        for &ak in &p.alpha {
            let arg = c64(ak, 0.0) - v - s;
            // poles of Gamma(alpha_k - v - s) sit at non-positive integers of arg
            if arg.re < 0.5 {
                guard_pole(arg, c64(arg.re.round().min(0.0), 0.0))?;
            }
            expo += log_gamma(arg)?;
        }
        total += wt * exp_checked(expo)? / (v + s - v2);
    }
    Ok(total / TWO_PI_I)
}

/// eps * pi / sin(eps * pi * zeta): the sine coupling of the rescaled
/// kernel; tends to 1/zeta as eps -> 0.
pub fn sine_factor(eps: f64, zeta: Complex64) -> Complex64 {
    let x = std::f64::consts::PI * eps;
    x / (x * zeta).sin()
}

/// The change of variables around theta: Phi(z) = theta + z / (c N^{1/3}).
pub fn phi_map(sc: &ScalingConstants, n_levels: f64, z: Complex64) -> Complex64 {
    c64(sc.theta, 0.0) + z / (sc.c * n_levels.cbrt())
}

/// The rescaled finite-size kernel K_N(w, w') as a single contour
/// integral over the rescaled z-line, with spikes defining the drifts
/// a_l = theta + b_l/(c N^{1/3}) and boundary parameters
/// alpha_k = theta + beta_k/(c N^{1/3}).
pub fn eval_kn(
    w: Complex64,
    w2: Complex64,
    r: f64,
    n_levels: f64,
    sc: &ScalingConstants,
    spikes: &SpikeParams,
    quad: &QuadratureRule,
) -> Result<Complex64> {
    spikes.validate()?;
    let eps = 1.0 / (sc.c * n_levels.cbrt());
    let phi_w = phi_map(sc, n_levels, w);
    let lg_phi_w = log_gamma(phi_w)?;
    let m = spikes.b.len() as f64;
    let mut total = Complex64::default();
    for (&z, &wt) in quad.nodes.iter().zip(&quad.weights) {
        guard_pole(z, w)?;
        guard_pole(z, w2)?;
        let zeta = (z - w) * eps;
        let nearest = zeta.re.round();
        if nearest != 0.0 && (zeta - c64(nearest, 0.0)).norm() < POLE_GUARD {
            return Err(Error::SinePole(zeta));
        }
        let phi_z = phi_map(sc, n_levels, z);
        // N (G(Phi(w)) - G(Phi(z))), the polynomial part of G taken on the
        // exact difference Phi(w) - Phi(z) = (w - z) eps
        let dphi = (w - z) * eps;
        let d_g =
            (lg_phi_w - log_gamma(phi_z)?) - sc.kappa * 0.5 * (phi_w + phi_z) * dphi + sc.f * dphi;
        let mut expo = n_levels * d_g + r * (w - z);
        // drift factors: Phi(w) - a_l = (w - b_l) eps exactly
        for &bl in &spikes.b {
            expo += log_gamma((w - bl) * eps)? - log_gamma((z - bl) * eps)?;
        }
        expo += m * (log_gamma(phi_z)? - lg_phi_w);
        // boundary factors: alpha_k - Phi(z) = (beta_k - z) eps exactly
        for &bk in &spikes.beta {
            expo += log_gamma((bk - z) * eps)? - log_gamma((bk - w) * eps)?;
        }
        let coupling = -sine_factor(eps, z - w) / (z - w2);
        total += wt * coupling * exp_checked(expo)?;
    }
    Ok(total / TWO_PI_I)
}

/// The limiting kernel: a single z-integral of
/// e^{z^3/3 - r z} / e^{w^3/3 - r w} / ((w - z)(z - w')) times the
/// rational spike factors.
pub fn eval_tilde_kbp(
    w: Complex64,
    w2: Complex64,
    r: f64,
    spikes: &SpikeParams,
    quad: &QuadratureRule,
) -> Result<Complex64> {
    spikes.validate()?;
    let w_expo = w * w * w / 3.0 - r * w;
    let mut total = Complex64::default();
    for (&z, &wt) in quad.nodes.iter().zip(&quad.weights) {
        guard_pole(z, w)?;
        guard_pole(z, w2)?;
        let mut val = exp_checked(z * z * z / 3.0 - r * z - w_expo)?;
        val /= (w - z) * (z - w2);
        for &bl in &spikes.b {
            val *= (z - bl) / (w - bl);
        }
        for &bk in &spikes.beta {
            guard_pole(z, c64(bk, 0.0))?;
            val *= (w - bk) / (z - bk);
        }
        total += wt * val;
    }
    Ok(total / TWO_PI_I)
}

/// A double-contour kernel with separated x/y dependence:
/// K(x, y) = sum_{p,q} wfac_p e^{w_p x} C(p, q) zfac_q e^{-z_q y}.
#[derive(Debug, Clone)]
pub struct DoubleContourKernel {
    w_nodes: Vec<Complex64>,
    w_factors: Vec<Complex64>,
    z_nodes: Vec<Complex64>,
    z_factors: Vec<Complex64>,
    /// coupling(p, q) including both quadrature weights and 1/(2 pi i)^2
    coupling: DMatrix<Complex64>,
    /// real-axis crossings (w-side, z-side); the kernel decays at least
    /// like e^{x_w x - x_z y}, which scales the half-line transform
    pub decay: (f64, f64),
}

impl DoubleContourKernel {
    /// K(x, y) at a single point.
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        let zy: Vec<Complex64> =
            self.z_nodes.iter().zip(&self.z_factors).map(|(&z, &f)| f * (-z * y).exp()).collect();
        let mut total = Complex64::default();
        for p in 0..self.w_nodes.len() {
            let mut row = Complex64::default();
            for (q, v) in zy.iter().enumerate() {
                row += self.coupling[(p, q)] * v;
            }
            total += self.w_factors[p] * (self.w_nodes[p] * x).exp() * row;
        }
        total
    }

    /// Kernel matrix [K(x_i, y_j)]_{ij} via U * C * V.
    pub fn matrix(&self, xs: &[f64], ys: &[f64]) -> DMatrix<Complex64> {
        let u = DMatrix::from_fn(xs.len(), self.w_nodes.len(), |i, p| {
            self.w_factors[p] * (self.w_nodes[p] * xs[i]).exp()
        });
        let v = DMatrix::from_fn(self.z_nodes.len(), ys.len(), |q, j| {
            self.z_factors[q] * (-self.z_nodes[q] * ys[j]).exp()
        });
        u * &self.coupling * v
    }
}

/// Assemble the Borodin-Peche kernel on a (gamma, Gamma) contour pair:
/// coupling 1/(z - w), w-side e^{-w^3/3} prod (w - beta_k) / (w - b_l),
/// z-side e^{z^3/3} prod (z - b_l) / (z - beta_k).
pub fn bp_kernel(
    spikes: &SpikeParams,
    gamma: &ComplexPath,
    big_gamma: &ComplexPath,
    disc: &Discretization,
) -> Result<DoubleContourKernel> {
    spikes.validate()?;
    let wq = disc.rule(gamma);
    let zq = disc.rule(big_gamma);
    let mut w_factors = Vec::with_capacity(wq.len());
    for &w in &wq.nodes {
        let mut f = exp_checked(-w * w * w / 3.0)?;
        for &bl in &spikes.b {
            guard_pole(w, c64(bl, 0.0))?;
            f /= w - bl;
        }
        for &bk in &spikes.beta {
            f *= w - bk;
        }
        w_factors.push(f);
    }
    let mut z_factors = Vec::with_capacity(zq.len());
    for &z in &zq.nodes {
        let mut f = exp_checked(z * z * z / 3.0)?;
        for &bl in &spikes.b {
            f *= z - bl;
        }
        for &bk in &spikes.beta {
            guard_pole(z, c64(bk, 0.0))?;
            f /= z - bk;
        }
        z_factors.push(f);
    }
    let mut coupling = DMatrix::from_element(wq.len(), zq.len(), Complex64::default());
    for (p, (&w, &ww)) in wq.nodes.iter().zip(&wq.weights).enumerate() {
        for (q, (&z, &wz)) in zq.nodes.iter().zip(&zq.weights).enumerate() {
            guard_pole(z, w)?;
            coupling[(p, q)] = ww * wz / ((z - w) * NORM_2PI_I_SQ);
        }
    }
    let decay = (gamma.crossing.unwrap_or(-1.0), big_gamma.crossing.unwrap_or(1.0));
    Ok(DoubleContourKernel {
        w_nodes: wq.nodes,
        w_factors,
        z_nodes: zq.nodes,
        z_factors,
        coupling,
        decay,
    })
}

/// Assemble the sigma-deformed kernel on a (w, z) line pair: coupling
/// sigma pi S^{sigma(z-w)} / sin(sigma pi (z-w)), w-side
/// e^{-w^3/3} prod_l Gamma(sigma w - b_l) / prod_k Gamma(beta_k - sigma w),
/// z-side mirrored. The S-power splits into the two factor vectors.
pub fn sigma_kernel(
    sigma: f64,
    form: SigmaForm,
    b: &[f64],
    beta: &[f64],
    w_path: &ComplexPath,
    z_path: &ComplexPath,
    disc: &Discretization,
) -> Result<DoubleContourKernel> {
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    // sigma * Log S; exact -r in the shifted form where S = e^{-r/sigma}
    let sigma_log_s = match form {
        SigmaForm::Laplace { s } => {
            if !(s.re > 0.0) {
                return Err(Error::Constraint(format!("Re(S) must be positive, got {s}")));
            }
            sigma * s.ln()
        }
        SigmaForm::Shifted { r } => c64(-r, 0.0),
    };
    let wq = disc.rule(w_path);
    let zq = disc.rule(z_path);
    let mut w_factors = Vec::with_capacity(wq.len());
    for &w in &wq.nodes {
        let mut expo = -w * w * w / 3.0 - sigma_log_s * w;
        for &bl in b {
            expo += log_gamma(sigma * w - bl)?;
        }
        for &bk in beta {
            expo -= log_gamma(c64(bk, 0.0) - sigma * w)?;
        }
        w_factors.push(exp_checked(expo)?);
    }
    let mut z_factors = Vec::with_capacity(zq.len());
    for &z in &zq.nodes {
        let mut expo = z * z * z / 3.0 + sigma_log_s * z;
        for &bl in b {
            expo -= log_gamma(sigma * z - bl)?;
        }
        for &bk in beta {
            expo += log_gamma(c64(bk, 0.0) - sigma * z)?;
        }
        z_factors.push(exp_checked(expo)?);
    }
    let mut coupling = DMatrix::from_element(wq.len(), zq.len(), Complex64::default());
    for (p, (&w, &ww)) in wq.nodes.iter().zip(&wq.weights).enumerate() {
        for (q, (&z, &wz)) in zq.nodes.iter().zip(&zq.weights).enumerate() {
            let zeta = sigma * (z - w);
            let nearest = zeta.re.round();
            if nearest != 0.0 && (zeta - c64(nearest, 0.0)).norm() < POLE_GUARD {
                return Err(Error::SinePole(zeta));
            }
            guard_pole(z, w)?;
            coupling[(p, q)] = ww * wz * sine_factor(sigma, z - w) / NORM_2PI_I_SQ;
        }
    }
    let decay = (w_path.crossing.unwrap_or(-1.0), z_path.crossing.unwrap_or(1.0));
    Ok(DoubleContourKernel {
        w_nodes: wq.nodes,
        w_factors,
        z_nodes: zq.nodes,
        z_factors,
        coupling,
        decay,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contours::{build_bp_contours, build_cs, build_cv, build_rescaled_contours, build_sigma_contours};
    use crate::specfun::scaling_constants;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    // Airy kernel values, 40-digit arithmetic
    const K_AI: [(f64, f64, f64); 4] = [
        (0.0, 0.0, 0.06698748377966397414368),
        (0.3, 0.7, 0.02336833233753934405188),
        (1.0, 1.0, 0.007023870159538220377266),
        (-0.5, 0.25, 0.07875282278728180262039),
    ];
    // K_u golden value at N=9, n=1, tau=1, a=0, alpha=1.5, u=1, v=v'=mu,
    // d=0.1, from 50-digit contour quadrature
    const KU_GOLDEN: f64 = -34.29202263670859844278;

    #[test]
    fn sine_factor_small_eps_limit() {
        let zeta = c64(0.7, -1.3);
        let mut prev = f64::INFINITY;
        for eps in [0.1, 0.05, 0.025, 0.0125] {
            let gap = (sine_factor(eps, zeta) - 1.0 / zeta).norm();
            assert!(gap < prev, "sine factor not converging to 1/zeta");
            prev = gap;
        }
        // error is O((pi eps)^2 |zeta|) ~ 4e-4 at the last eps
        assert!(prev < 1e-3);
    }

    #[test]
    fn phi_map_at_zero_is_theta() {
        let sc = scaling_constants(1.0).unwrap();
        let phi0 = phi_map(&sc, 1.0e4, c64(0.0, 0.0));
        assert_eq!(phi0.re, sc.theta);
        assert_eq!(phi0.im, 0.0);
    }

    #[test]
    fn ku_matches_high_precision_golden_value() {
        let p = FiniteNParams::new(vec![0.0; 9], vec![1.5], 1.0, c64(1.0, 0.0)).unwrap();
        let wedge = build_cv(&p.a, &p.alpha, PI / 8.0).unwrap();
        let v = c64(wedge.mu, 0.0);
        let cs = build_cs(v, &wedge, Some(0.1)).unwrap();
        // the tau=1 integrand has an oscillatory ridge out to |Im s| ~ 20;
        // a d=0.1 bump also needs the near-axis panels
        let quad = Discretization { order: 48, truncation_radius: 28.0 }.rule(&cs);
        let got = eval_ku(v, v, &p, &quad).unwrap();
        assert!(
            (got.re - KU_GOLDEN).abs() <= 2e-4 * KU_GOLDEN.abs(),
            "K_u = {got}, want {KU_GOLDEN}"
        );
        assert!(got.im.abs() <= 1e-4 * KU_GOLDEN.abs());
    }

    #[test]
    fn ku_invariant_under_d_halving() {
        // physical Laplace variable: u = exp(-N f - r c N^{1/3}) at r = 1
        let sc = scaling_constants(1.0).unwrap();
        let u = (-9.0 * sc.f - sc.c * 9f64.cbrt()).exp();
        let p = FiniteNParams::new(vec![0.0; 9], vec![sc.theta + 0.5], 9.0, c64(u, 0.0)).unwrap();
        let wedge = build_cv(&p.a, &p.alpha, PI / 8.0).unwrap();
        let disc = Discretization { order: 32, truncation_radius: 12.0 };
        for t in [0.0, 0.45, 0.9] {
            let v = c64(wedge.mu, 0.0) + Complex64::from_polar(t, PI - wedge.varphi);
            let v2 = c64(wedge.mu, 0.0);
            let d = 0.1;
            let k1 =
                eval_ku(v, v2, &p, &disc.rule(&build_cs(v, &wedge, Some(d)).unwrap())).unwrap();
            let k2 = eval_ku(v, v2, &p, &disc.rule(&build_cs(v, &wedge, Some(d / 2.0)).unwrap()))
                .unwrap();
            assert!(
                (k1 - k2).norm() <= 1e-8 * k1.norm().max(1.0),
                "d-halving at t={t} moved K_u by {}",
                (k1 - k2).norm()
            );
        }
    }

    #[test]
    fn ku_empty_boundary_runs() {
        let p = FiniteNParams::new(vec![0.0; 3], vec![], 2.0, c64(1.0, 0.0)).unwrap();
        let wedge = build_cv(&p.a, &p.alpha, PI / 8.0).unwrap();
        let v = c64(wedge.mu, 0.0);
        let cs = build_cs(v, &wedge, None).unwrap();
        let quad = Discretization::default().rule(&cs);
        let k = eval_ku(v, v, &p, &quad).unwrap();
        assert!(k.norm().is_finite());
    }

    #[test]
    fn bp_kernel_reduces_to_airy_kernel() {
        let spikes = SpikeParams::empty();
        let (g, gg) = build_bp_contours(&[], &[], 1.0).unwrap();
        let disc = Discretization { order: 24, truncation_radius: 10.0 };
        let kernel = bp_kernel(&spikes, &g, &gg, &disc).unwrap();
        for &(x, y, want) in &K_AI {
            let got = kernel.eval(x, y);
            assert!(
                (got.re - want).abs() <= 1e-9,
                "K({x},{y}) = {got}, want {want}"
            );
            assert!(got.im.abs() <= 1e-9);
        }
    }

    #[test]
    fn bp_kernel_symmetry_unspiked() {
        let (g, gg) = build_bp_contours(&[], &[], 1.0).unwrap();
        let kernel = bp_kernel(&SpikeParams::empty(), &g, &gg, &Discretization::default()).unwrap();
        let grid = [-2.0, -1.0, 0.0, 1.0, 2.0];
        for &x in &grid {
            for &y in &grid {
                let kxy = kernel.eval(x, y);
                let kyx = kernel.eval(y, x);
                assert!((kxy - kyx).norm() <= 1e-9, "asymmetry at ({x},{y})");
                assert!(kxy.im.abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn bp_kernel_contour_shift_invariance() {
        let spikes = SpikeParams::new(vec![-0.8], vec![0.9]).unwrap();
        let disc = Discretization { order: 24, truncation_radius: 12.0 };
        let (g1, gg1) = build_bp_contours(&spikes.b, &spikes.beta, 0.7).unwrap();
        let (g2, gg2) = build_bp_contours(&spikes.b, &spikes.beta, 1.3).unwrap();
        let k1 = bp_kernel(&spikes, &g1, &gg1, &disc).unwrap();
        let k2 = bp_kernel(&spikes, &g2, &gg2, &disc).unwrap();
        for (x, y) in [(0.0, 0.0), (0.5, 1.0), (-1.0, 0.3)] {
            let gap = (k1.eval(x, y) - k2.eval(x, y)).norm();
            assert!(gap <= 1e-8, "deformation gap {gap} at ({x},{y})");
        }
    }

    #[test]
    fn bp_kernel_far_spikes_decouple_monotonically() {
        let (x, y) = (0.2, 0.4);
        let disc = Discretization::default();
        let (g0, gg0) = build_bp_contours(&[], &[], 1.0).unwrap();
        let base = bp_kernel(&SpikeParams::empty(), &g0, &gg0, &disc).unwrap().eval(x, y);
        let mut prev = f64::INFINITY;
        for c in [5.0, 10.0, 20.0] {
            let spikes = SpikeParams::new(vec![-c], vec![c]).unwrap();
            let (g, gg) = build_bp_contours(&spikes.b, &spikes.beta, 1.0).unwrap();
            let k = bp_kernel(&spikes, &g, &gg, &disc).unwrap().eval(x, y);
            let gap = (k - base).norm();
            assert!(gap < prev, "gap {gap} not decreasing at c={c}");
            prev = gap;
        }
        // the spike factors deviate from 1 by O((z - w)/c): O(1/c) gap
        assert!(prev <= 2e-2);
    }

    #[test]
    fn tilde_kbp_self_convergence_and_finiteness() {
        let spikes = SpikeParams::empty();
        let (_, cz) = build_rescaled_contours(&[], &[]).unwrap();
        let w = c64(-0.4, 0.4);
        let k1 = eval_tilde_kbp(w, w, 0.0, &spikes, &Discretization { order: 24, truncation_radius: 10.0 }.rule(&cz)).unwrap();
        let k2 = eval_tilde_kbp(w, w, 0.0, &spikes, &Discretization { order: 48, truncation_radius: 12.0 }.rule(&cz)).unwrap();
        assert!(k1.norm().is_finite());
        assert!((k1 - k2).norm() <= 1e-9, "node-doubling gap {}", (k1 - k2).norm());
    }

    #[test]
    fn tilde_kbp_rejects_contour_through_pole() {
        let spikes = SpikeParams::empty();
        let (_, cz) = build_rescaled_contours(&[], &[]).unwrap();
        let quad = Discretization::default().rule(&cz);
        // put w' directly on a quadrature node of the contour
        let w2 = quad.nodes[quad.len() / 2];
        let err = eval_tilde_kbp(c64(-0.5, 0.5), w2, 0.0, &spikes, &quad);
        assert!(matches!(err, Err(Error::PoleProximity { .. })));
    }

    #[test]
    fn kn_approaches_tilde_kbp() {
        let sc = scaling_constants(1.0).unwrap();
        let spikes = SpikeParams::empty();
        let (_, cz) = build_rescaled_contours(&[], &[]).unwrap();
        let quad = Discretization { order: 32, truncation_radius: 10.0 }.rule(&cz);
        let w = c64(-1.0, 0.0);
        let limit = eval_tilde_kbp(w, w, 0.0, &spikes, &quad).unwrap();
        let kn = eval_kn(w, w, 0.0, 1.0e4, &sc, &spikes, &quad).unwrap();
        assert!(
            (kn - limit).norm() <= 5e-2,
            "K_N gap to limit kernel {} too large",
            (kn - limit).norm()
        );
    }

    #[test]
    fn kn_gap_shrinks_like_cube_root() {
        let sc = scaling_constants(1.0).unwrap();
        let spikes = SpikeParams::new(vec![-1.0], vec![1.0]).unwrap();
        let (_, cz) = build_rescaled_contours(&spikes.b, &spikes.beta).unwrap();
        let quad = Discretization { order: 32, truncation_radius: 10.0 }.rule(&cz);
        let w = c64(-0.5, 0.5);
        let w2 = c64(-0.5, -0.5);
        let limit = eval_tilde_kbp(w, w2, 0.5, &spikes, &quad).unwrap();
        let gap = |n: f64| {
            (eval_kn(w, w2, 0.5, n, &sc, &spikes, &quad).unwrap() - limit).norm()
        };
        let (g3, g4) = (gap(1.0e3), gap(8.0e3));
        let ratio = g3 / g4;
        assert!(
            (1.6..=2.4).contains(&ratio),
            "gap ratio {ratio} outside [1.6, 2.4] (gaps {g3:.3e}, {g4:.3e})"
        );
    }

    #[test]
    fn sigma_kernel_converges_to_shifted_bp() {
        // shifted form at r=0: K^(sigma)(x,y) -> K_BP(x, y) as sigma -> 0
        let spikes = SpikeParams::empty();
        let disc = Discretization { order: 24, truncation_radius: 10.0 };
        let (g, gg) = build_bp_contours(&[], &[], 1.0).unwrap();
        let bp = bp_kernel(&spikes, &g, &gg, &disc).unwrap();
        let (x, y) = (0.3, 0.7);
        let target = bp.eval(x, y);
        let mut prev = f64::INFINITY;
        for sigma in [0.5, 0.25, 0.125] {
            let (wp, zp) = build_sigma_contours(sigma, &[], &[]).unwrap();
            let k = sigma_kernel(sigma, SigmaForm::Shifted { r: 0.0 }, &[], &[], &wp, &zp, &disc)
                .unwrap()
                .eval(x, y);
            let gap = (k - target).norm();
            assert!(gap < prev, "sigma gap {gap} not decreasing at sigma={sigma}");
            prev = gap;
        }
        assert!(prev < 2e-2);
    }

    #[test]
    fn sigma_kernel_decay_bound() {
        // |K^(sigma)(x,y)| <= C e^{(b_m x - beta_1 y)/sigma} with C fitted at the
        // origin times a safety factor 2, on a grid in the positive quadrant
        let (b, beta) = (vec![0.2], vec![0.9]);
        let sigma = 1.0;
        let bs: Vec<f64> = b.iter().map(|v| v / sigma).collect();
        let bets: Vec<f64> = beta.iter().map(|v| v / sigma).collect();
        let (wp, zp) = crate::contours::build_sigma_contours_tight(sigma, &bs, &bets).unwrap();
        let disc = Discretization::default();
        let k = sigma_kernel(
            sigma,
            SigmaForm::Laplace { s: c64(1.0, 0.0) },
            &b,
            &beta,
            &wp,
            &zp,
            &disc,
        )
        .unwrap();
        let c_fit = 2.0 * k.eval(0.0, 0.0).norm();
        for i in 0..6 {
            for j in 0..6 {
                let (x, y) = (0.6 * i as f64, 0.6 * j as f64);
                let bound = c_fit * ((b[0] * x - beta[0] * y) / sigma).exp();
                let val = k.eval(x, y).norm();
                assert!(val <= bound, "decay bound violated at ({x},{y}): {val} > {bound}");
            }
        }
    }

    #[test]
    fn matrix_assembly_matches_pointwise_eval() {
        let spikes = SpikeParams::new(vec![-1.0], vec![1.0]).unwrap();
        let (g, gg) = build_bp_contours(&spikes.b, &spikes.beta, 1.0).unwrap();
        let k = bp_kernel(&spikes, &g, &gg, &Discretization::default()).unwrap();
        let xs = [0.1, 0.9, 2.3];
        let m = k.matrix(&xs, &xs);
        for (i, &x) in xs.iter().enumerate() {
            for (j, &y) in xs.iter().enumerate() {
                assert_abs_diff_eq!(m[(i, j)].re, k.eval(x, y).re, epsilon = 1e-12);
                assert_abs_diff_eq!(m[(i, j)].im, k.eval(x, y).im, epsilon = 1e-12);
            }
        }
    }
}
