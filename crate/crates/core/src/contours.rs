//! Integration contours and their quadrature discretizations.
//!
//! Four families are built here: the wedge C_v(a; alpha; phi) and its
//! companion piecewise path C_s(v) used by the finite-size kernel, the
//! Borodin-Peche pair gamma/Gamma (vertical lines with a local detour
//! forcing the real-axis crossing between the two spike families), the
//! rescaled pair C_w/C_z (a |y|-wedge and a detoured vertical line), and
//! the sigma-kernel pair of vertical lines.
//!
//! Detoured lines take a semicircular bump through the crossing point.
//! Whenever a detour is needed the base line is rebased so that the
//! w-side contour stays in {Re <= crossing_w} and the z-side in
//! {Re >= crossing_z}; since crossing_w < crossing_z by construction the
//! two contours of a pair can never touch and Re(z - w) > 0 holds
//! pointwise, which the 1/(z-w)-type couplings rely on.

use num_complex::Complex64;

use crate::error::{Error, Result};

const DETOUR_CONNECTOR: f64 = 0.5; // vertical clearance added above the bump
const MAX_PANEL_LEN: f64 = 1.5;
const RAY_FIRST_PANEL: f64 = 0.5;
const RAY_PANEL_RATIO: f64 = 1.5;

/// One smooth oriented arc of a contour.
#[derive(Debug, Clone, PartialEq)]
pub enum Segment {
    /// Straight segment from `start` to `end`.
    Line { start: Complex64, end: Complex64 },
    /// Circular arc `center + radius * e^{i theta}`, theta traversed
    /// linearly from `theta0` to `theta1`.
    Arc { center: Complex64, radius: f64, theta0: f64, theta1: f64 },
    /// Straight ray traversed from infinity towards `end`; points are
    /// `end + t * dir`, t decreasing from infinity to 0.
    RayIn { end: Complex64, dir: Complex64 },
    /// Straight ray traversed from `start` out to infinity along `dir`.
    RayOut { start: Complex64, dir: Complex64 },
}

impl Segment {
    fn first_point(&self) -> Option<Complex64> {
        match *self {
            Segment::Line { start, .. } => Some(start),
            Segment::Arc { center, radius, theta0, .. } => {
                Some(center + radius * Complex64::new(0.0, theta0).exp())
            }
            Segment::RayIn { .. } => None,
            Segment::RayOut { start, .. } => Some(start),
        }
    }

    fn last_point(&self) -> Option<Complex64> {
        match *self {
            Segment::Line { end, .. } => Some(end),
            Segment::Arc { center, radius, theta1, .. } => {
                Some(center + radius * Complex64::new(0.0, theta1).exp())
            }
            Segment::RayIn { end, .. } => Some(end),
            Segment::RayOut { .. } => None,
        }
    }
}

/// An oriented piecewise-smooth contour.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPath {
    pub segments: Vec<Segment>,
    /// Real-axis crossing point, for the contour families that have one.
    pub crossing: Option<f64>,
}

impl ComplexPath {
    fn new(segments: Vec<Segment>, crossing: Option<f64>) -> Self {
        let path = ComplexPath { segments, crossing };
        debug_assert!(path.is_connected(1e-9));
        path
    }

    /// Consecutive segments join end-to-start.
    pub fn is_connected(&self, tol: f64) -> bool {
        self.segments.windows(2).all(|w| match (w[0].last_point(), w[1].first_point()) {
            (Some(a), Some(b)) => (a - b).norm() <= tol,
            _ => false,
        })
    }

    /// The path translated by `delta`.
    pub fn translate(&self, delta: Complex64) -> ComplexPath {
        let segments = self
            .segments
            .iter()
            .map(|s| match *s {
                Segment::Line { start, end } => Segment::Line { start: start + delta, end: end + delta },
                Segment::Arc { center, radius, theta0, theta1 } => {
                    Segment::Arc { center: center + delta, radius, theta0, theta1 }
                }
                Segment::RayIn { end, dir } => Segment::RayIn { end: end + delta, dir },
                Segment::RayOut { start, dir } => Segment::RayOut { start: start + delta, dir },
            })
            .collect();
        ComplexPath { segments, crossing: None }
    }

    /// Evenly spread sample points, rays followed out to `ray_len`.
    pub fn sample_points(&self, per_segment: usize, ray_len: f64) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.segments.len() * per_segment);
        let n = per_segment.max(2);
        for seg in &self.segments {
            for k in 0..n {
                let t = k as f64 / (n - 1) as f64;
                let z = match *seg {
                    Segment::Line { start, end } => start + (end - start) * t,
                    Segment::Arc { center, radius, theta0, theta1 } => {
                        let th = theta0 + (theta1 - theta0) * t;
                        center + radius * Complex64::new(0.0, th).exp()
                    }
                    Segment::RayIn { end, dir } => end + dir * (ray_len * t),
                    Segment::RayOut { start, dir } => start + dir * (ray_len * t),
                };
                pts.push(z);
            }
        }
        pts
    }

    /// Minimum pairwise distance between sampled points of two paths.
    pub fn min_distance(&self, other: &ComplexPath, per_segment: usize, ray_len: f64) -> f64 {
        let a = self.sample_points(per_segment, ray_len);
        let b = other.sample_points(per_segment, ray_len);
        let mut best = f64::INFINITY;
        for p in &a {
            for q in &b {
                best = best.min((p - q).norm());
            }
        }
        best
    }
}

/// The wedge contour C_v(a; alpha; phi) together with its construction
/// parameters mu, eta and the opening angle.
#[derive(Debug, Clone)]
pub struct Wedge {
    pub path: ComplexPath,
    pub mu: f64,
    pub eta: f64,
    pub varphi: f64,
}

/// Quadrature discretization of a contour: complex nodes and weights such
/// that sum_i w_i f(z_i) approximates the contour integral of f.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<Complex64>,
    pub weights: Vec<Complex64>,
    pub truncation_radius: f64,
}

impl QuadratureRule {
    pub fn integrate(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Complex64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &w)| w * f(z)).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Settings for turning a path into a quadrature rule.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Discretization {
    /// Gauss-Legendre points per panel.
    pub order: usize,
    /// Where infinite rays are cut, measured along the ray from its
    /// finite endpoint.
    pub truncation_radius: f64,
}

impl Default for Discretization {
    fn default() -> Self {
        Discretization { order: 24, truncation_radius: 10.0 }
    }
}

impl Discretization {
    pub fn with_order(self, order: usize) -> Self {
        Discretization { order, ..self }
    }

    pub fn rule(&self, path: &ComplexPath) -> QuadratureRule {
        discretize(path, self.order, self.truncation_radius)
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x) by the three-term recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Map Gauss-Legendre nodes onto every panel of the path. Finite segments
/// longer than ~1.5 are split evenly; infinite rays are truncated at
/// `truncation_radius` and covered by geometrically growing panels
/// (ratio 1.5) so the region near the finite endpoint is resolved best.
pub fn discretize(path: &ComplexPath, order: usize, truncation_radius: f64) -> QuadratureRule {
    let order = order.max(4);
    let (xs, ws) = gauss_legendre(order);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();

    let mut add_panel = |map: &dyn Fn(f64) -> (Complex64, Complex64), a: f64, b: f64| {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in xs.iter().zip(&ws) {
            let t = mid + half * x;
            let (z, dz) = map(t);
            nodes.push(z);
            weights.push(dz * (w * half));
        }
    };

    for seg in &path.segments {
        match *seg {
            Segment::Line { start, end } => {
                let len = (end - start).norm();
                let parts = (len / MAX_PANEL_LEN).ceil().max(1.0) as usize;
                let map = |t: f64| (start + (end - start) * t, end - start);
                for p in 0..parts {
                    let (a, b) = (p as f64 / parts as f64, (p + 1) as f64 / parts as f64);
                    add_panel(&map, a, b);
                }
            }
            Segment::Arc { center, radius, theta0, theta1 } => {
                let len = radius * (theta1 - theta0).abs();
                let parts = (len / MAX_PANEL_LEN).ceil().max(1.0) as usize;
                let map = |th: f64| {
                    let e = Complex64::new(0.0, th).exp();
                    (center + radius * e, Complex64::new(0.0, radius) * e)
                };
                for p in 0..parts {
                    let a = theta0 + (theta1 - theta0) * p as f64 / parts as f64;
                    let b = theta0 + (theta1 - theta0) * (p + 1) as f64 / parts as f64;
                    add_panel(&map, a, b);
                }
            }
            Segment::RayIn { end, dir } | Segment::RayOut { start: end, dir } => {
                let inbound = matches!(seg, Segment::RayIn { .. });
                let sign = if inbound { -1.0 } else { 1.0 };
                let map = |t: f64| (end + dir * t, dir * sign);
                let mut bounds = vec![0.0];
                let mut step = RAY_FIRST_PANEL;
                let mut t = 0.0;
                while t < truncation_radius {
                    t = (t + step).min(truncation_radius);
                    bounds.push(t);
                    step = (step * RAY_PANEL_RATIO).min(MAX_PANEL_LEN);
                }
                for pair in bounds.windows(2) {
                    add_panel(&map, pair[0], pair[1]);
                }
            }
        }
    }
    QuadratureRule { nodes, weights, truncation_radius }
}

fn max_or_err(v: &[f64], what: &str) -> Result<f64> {
    v.iter().copied().reduce(f64::max).ok_or_else(|| Error::Constraint(format!("{what} must be nonempty")))
}

/// Wedge contour through mu = (max a + min alpha)/2 with rays at angles
/// pi -+ phi, oriented with increasing imaginary part. For n = 0 the
/// missing alpha barrier is replaced by max(a) + 1, so mu = max(a) + 1/2
/// and eta = max(a) + 3/4.
pub fn build_cv(a: &[f64], alpha: &[f64], varphi: f64) -> Result<Wedge> {
    if !(varphi > 0.0 && varphi < std::f64::consts::FRAC_PI_4) {
        return Err(Error::Domain(format!("varphi must lie in (0, pi/4), got {varphi}")));
    }
    let amax = max_or_err(a, "drift vector a")?;
    let amin_alpha = if alpha.is_empty() {
        amax + 1.0
    } else {
        alpha.iter().copied().fold(f64::INFINITY, f64::min)
    };
    for &al in alpha {
        for &av in a {
            if al - av <= 0.0 {
                return Err(Error::Constraint(format!(
                    "alpha_k - a_l must be positive, got alpha={al}, a={av}"
                )));
            }
        }
    }
    let mu = 0.5 * amax + 0.5 * amin_alpha;
    let eta = 0.25 * amax + 0.75 * amin_alpha;
    let apex = Complex64::new(mu, 0.0);
    let dir_lower = Complex64::from_polar(1.0, std::f64::consts::PI + varphi);
    let dir_upper = Complex64::from_polar(1.0, std::f64::consts::PI - varphi);
    let path = ComplexPath::new(
        vec![Segment::RayIn { end: apex, dir: dir_lower }, Segment::RayOut { start: apex, dir: dir_upper }],
        Some(mu),
    );
    Ok(Wedge { path, mu, eta, varphi })
}

/// Default bump height for C_s(v): half the analytic clearance tan(phi)/2
/// at which the shifted path v + C_s(v) first touches the wedge.
pub fn cs_default_d(varphi: f64) -> f64 {
    varphi.tan() / 4.0
}

/// Split points for a horizontal run from x = a to x = b at height |y| = d:
/// every integer pole passed over gets panel boundaries shrinking
/// geometrically towards it (nearest width 4 d), so Gauss-Legendre panels
/// keep their convergence rate however small d is.
fn horizontal_breakpoints(a: f64, b: f64, d: f64) -> Vec<f64> {
    let (lo, hi) = (a.min(b), a.max(b));
    let mut pts = vec![lo, hi];
    let mut k = lo.ceil();
    while k < hi {
        if k > lo && k < hi {
            pts.push(k);
            let mut w = 4.0 * d;
            while w < 2.0 * MAX_PANEL_LEN {
                for p in [k - w, k + w] {
                    if p > lo && p < hi {
                        pts.push(p);
                    }
                }
                w *= 2.0;
            }
        }
        k += 1.0;
    }
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    if a > b {
        pts.reverse();
    }
    pts
}

fn horizontal_lines(a: f64, b: f64, y: f64, d: f64, out: &mut Vec<Segment>) {
    let pts = horizontal_breakpoints(a, b, d);
    for pair in pts.windows(2) {
        out.push(Segment::Line {
            start: Complex64::new(pair[0], y),
            end: Complex64::new(pair[1], y),
        });
    }
}

/// The path C_s(v): straight lines R - i*inf -> R - i*d -> 1/2 - i*d ->
/// 1/2 + i*d -> R + i*d -> R + i*inf with R = -Re(v) + eta. Checks
/// numerically that v + C_s(v) keeps a positive distance from the wedge.
pub fn build_cs(v: Complex64, wedge: &Wedge, d: Option<f64>) -> Result<ComplexPath> {
    let d = d.unwrap_or_else(|| cs_default_d(wedge.varphi));
    if d <= 0.0 {
        return Err(Error::Domain(format!("d must be positive, got {d}")));
    }
    let r = -v.re + wedge.eta;
    let (rm, rp) = (Complex64::new(r, -d), Complex64::new(r, d));
    let (hm, hp) = (Complex64::new(0.5, -d), Complex64::new(0.5, d));
    let mut segments = vec![Segment::RayIn { end: rm, dir: Complex64::new(0.0, -1.0) }];
    horizontal_lines(r, 0.5, -d, d, &mut segments);
    segments.push(Segment::Line { start: hm, end: hp });
    horizontal_lines(0.5, r, d, d, &mut segments);
    segments.push(Segment::RayOut { start: rp, dir: Complex64::new(0.0, 1.0) });
    let path = ComplexPath::new(segments, Some(0.5));
    let shifted = path.translate(v);
    let ray_len = 4.0 * (1.0 + v.norm() + r.abs());
    if shifted.min_distance(&wedge.path, 64, ray_len) <= 1e-9 {
        return Err(Error::Geometry(format!(
            "v + C_s(v) intersects the wedge for v = {v}, d = {d}"
        )));
    }
    Ok(path)
}

/// A vertical line at `x_line`, detoured by a semicircular bump so the
/// real-axis crossing sits exactly at `x_cross`. Crossing and line equal
/// means a plain vertical line.
fn detoured_vertical(x_line: f64, x_cross: f64, bump_radius: f64) -> ComplexPath {
    if (x_cross - x_line).abs() < 1e-12 {
        let p = Complex64::new(x_line, 0.0);
        return ComplexPath::new(
            vec![
                Segment::RayIn { end: p, dir: Complex64::new(0.0, -1.0) },
                Segment::RayOut { start: p, dir: Complex64::new(0.0, 1.0) },
            ],
            Some(x_line),
        );
    }
    let rho = bump_radius;
    let y0 = rho + DETOUR_CONNECTOR;
    let toward_line = if x_cross > x_line { -1.0 } else { 1.0 };
    let center = Complex64::new(x_cross + toward_line * rho, 0.0);
    // arc through the crossing point: angle 0 when the bump bulges right
    // of the line, angle pi (traversed through -pi) when it bulges left
    let (theta0, theta1) = if x_cross > x_line {
        (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2)
    } else {
        (-std::f64::consts::FRAC_PI_2, -1.5 * std::f64::consts::PI)
    };
    let arc_start = center + Complex64::new(0.0, -rho);
    let arc_end = center + Complex64::new(0.0, rho);
    let (lo, hi) = (Complex64::new(x_line, -y0), Complex64::new(x_line, y0));
    ComplexPath::new(
        vec![
            Segment::RayIn { end: lo, dir: Complex64::new(0.0, -1.0) },
            Segment::Line { start: lo, end: arc_start },
            Segment::Arc { center, radius: rho, theta0, theta1 },
            Segment::Line { start: arc_end, end: hi },
            Segment::RayOut { start: hi, dir: Complex64::new(0.0, 1.0) },
        ],
        Some(x_cross),
    )
}

fn fmin(v: &[f64]) -> Option<f64> {
    v.iter().copied().reduce(f64::min)
}

fn fmax(v: &[f64]) -> Option<f64> {
    v.iter().copied().reduce(f64::max)
}

/// Crossing placement shared by the vertical-line pairs. `left`/`right`
/// are the pole barriers (max b, min beta) when present. Returns the
/// crossings for the w-side and z-side contours, using the natural line
/// positions whenever they are admissible.
fn crossing_pair(
    left: Option<f64>,
    right: Option<f64>,
    natural_w: f64,
    natural_z: f64,
    frac_w: f64,
    frac_z: f64,
) -> (f64, f64) {
    let (margin, w_eff) = match (left, right) {
        (Some(l), Some(r)) => ((0.05f64).min((r - l) / 8.0), (r - l).min(2.0)),
        _ => (0.05, 2.0),
    };
    let admissible = |x: f64| {
        left.map_or(true, |l| x > l + margin) && right.map_or(true, |r| x < r - margin)
    };
    let place = |natural: f64, frac_from_left: f64| -> f64 {
        if admissible(natural) {
            return natural;
        }
        let pushed_from_left = match (left, right) {
            (Some(l), Some(r)) => (natural - l).abs() <= (natural - r).abs(),
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => return natural,
        };
        if pushed_from_left {
            left.unwrap() + frac_from_left * w_eff
        } else {
            right.unwrap() - (1.0 - frac_from_left) * w_eff
        }
    };
    let xw = place(natural_w, frac_w);
    let mut xz = place(natural_z, frac_z);
    if xz <= xw + margin.max(1e-6) {
        xz = match right {
            Some(r) if r.is_finite() => 0.5 * (xw + r),
            _ => xw + 1.0,
        };
    }
    (xw, xz)
}

fn bump_radius(left: Option<f64>, right: Option<f64>) -> f64 {
    match (left, right) {
        (Some(l), Some(r)) => (0.4 * (r - l)).min(1.0),
        _ => 0.8,
    }
}

fn spike_barriers(b: &[f64], beta: &[f64]) -> Result<(Option<f64>, Option<f64>)> {
    let left = fmax(b);
    let right = fmin(beta);
    if let (Some(l), Some(r)) = (left, right) {
        if l >= r {
            return Err(Error::Constraint(format!("max(b) = {l} must be below min(beta) = {r}")));
        }
    }
    Ok((left, right))
}

/// Build a (w-contour, z-contour) pair of detoured vertical lines with
/// natural positions -+`natural` and crossings separated inside the
/// barrier window. Verifies disjointness numerically.
fn vertical_pair(
    b: &[f64],
    beta: &[f64],
    natural_w: f64,
    natural_z: f64,
    frac_w: f64,
    frac_z: f64,
) -> Result<(ComplexPath, ComplexPath)> {
    let (left, right) = spike_barriers(b, beta)?;
    let (xw, xz) = crossing_pair(left, right, natural_w, natural_z, frac_w, frac_z);
    let rho = bump_radius(left, right);
    let line_w = natural_w.min(xw);
    let line_z = natural_z.max(xz);
    let gamma = detoured_vertical(line_w, xw, rho);
    let big_gamma = detoured_vertical(line_z, xz, rho);
    let dist = gamma.min_distance(&big_gamma, 48, 20.0);
    if dist <= 1e-9 {
        return Err(Error::Geometry(format!(
            "contour pair intersects (crossings {xw}, {xz}, distance {dist:.3e})"
        )));
    }
    Ok((gamma, big_gamma))
}

/// Borodin-Peche contours: gamma from -c, Gamma from +c, real-axis
/// crossings strictly between max(b) and min(beta) and distinct.
pub fn build_bp_contours(b: &[f64], beta: &[f64], c: f64) -> Result<(ComplexPath, ComplexPath)> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("c must be positive, got {c}")));
    }
    vertical_pair(b, beta, -c, c, 0.375, 0.625)
}

/// Contours for the sigma-deformed kernel: vertical lines at
/// -+min(1/(4 sigma), 1), crossings between max(b)/sigma and
/// min(beta)/sigma (arguments already divided by sigma).
pub fn build_sigma_contours(
    sigma: f64,
    left_over_sigma: &[f64],
    right_over_sigma: &[f64],
) -> Result<(ComplexPath, ComplexPath)> {
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    let h = (1.0 / (4.0 * sigma)).min(1.0);
    vertical_pair(left_over_sigma, right_over_sigma, -h, h, 0.375, 0.625)
}

/// Like [`build_sigma_contours`] but with the crossings forced to hug the
/// barriers (1/8 and 7/8 points of the window). The kernel value does not
/// change (Cauchy), but the node-level decay rates approach the barrier
/// rates, which is what exponential decay-bound checks measure.
pub fn build_sigma_contours_tight(
    sigma: f64,
    left_over_sigma: &[f64],
    right_over_sigma: &[f64],
) -> Result<(ComplexPath, ComplexPath)> {
    if !(sigma > 0.0) {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    let (left, right) = spike_barriers(left_over_sigma, right_over_sigma)?;
    let (l, r) = match (left, right) {
        (Some(l), Some(r)) => (l, r),
        _ => {
            return Err(Error::Constraint(
                "tight sigma contours need both spike families".into(),
            ))
        }
    };
    let h = (1.0 / (4.0 * sigma)).min(1.0);
    let w = r - l;
    let (xw, xz) = (l + 0.125 * w, r - 0.125 * w);
    let rho = (0.4 * w).min(1.0);
    let gamma = detoured_vertical((-h).min(xw), xw, rho);
    let big_gamma = detoured_vertical(h.max(xz), xz, rho);
    let dist = gamma.min_distance(&big_gamma, 48, 20.0);
    if dist <= 1e-9 {
        return Err(Error::Geometry(format!(
            "tight sigma contours intersect (crossings {xw}, {xz}, distance {dist:.3e})"
        )));
    }
    Ok((gamma, big_gamma))
}

/// Rescaled contours: C_w is the wedge -|y| + i y, apex moved to the
/// midpoint of (max b, min beta) when 0 is not admissible; C_z is the
/// vertical line 1 + i R, locally detoured (or rebased) so it crosses
/// between the families strictly right of the wedge apex.
pub fn build_rescaled_contours(b: &[f64], beta: &[f64]) -> Result<(ComplexPath, ComplexPath)> {
    let (left, right) = spike_barriers(b, beta)?;
    let margin = match (left, right) {
        (Some(l), Some(r)) => (0.05f64).min((r - l) / 8.0),
        _ => 0.05,
    };
    let admissible = |x: f64| {
        left.map_or(true, |l| x > l + margin) && right.map_or(true, |r| x < r - margin)
    };
    let apex = if admissible(0.0) {
        0.0
    } else {
        match (left, right) {
            (Some(l), Some(r)) => 0.5 * (l + r),
            (Some(l), None) => l + 0.5,
            (None, Some(r)) => r - 0.5,
            (None, None) => 0.0,
        }
    };
    let apex_pt = Complex64::new(apex, 0.0);
    let cw = ComplexPath::new(
        vec![
            Segment::RayIn { end: apex_pt, dir: Complex64::from_polar(1.0, -0.75 * std::f64::consts::PI) },
            Segment::RayOut { start: apex_pt, dir: Complex64::from_polar(1.0, 0.75 * std::f64::consts::PI) },
        ],
        Some(apex),
    );
    let xz = if admissible(1.0) && 1.0 > apex + margin {
        1.0
    } else {
        match right {
            Some(r) => 0.5 * (apex + r),
            None => apex + 1.0,
        }
    };
    let rho = bump_radius(left, right).min(0.4 * (xz - apex));
    let cz = detoured_vertical(1f64.max(xz), xz, rho);
    let dist = cw.min_distance(&cz, 48, 20.0);
    if dist <= 1e-9 {
        return Err(Error::Geometry(format!(
            "rescaled contours intersect (apex {apex}, z-crossing {xz}, distance {dist:.3e})"
        )));
    }
    Ok((cw, cz))
}
