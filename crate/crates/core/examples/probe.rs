// scratch diagnostic
use num_complex::Complex64;
use oypoly_core::contours::*;
use oypoly_core::kernels::*;
use oypoly_core::specfun::*;

fn c64(re: f64, im: f64) -> Complex64 { Complex64::new(re, im) }

fn main() {
    // --- K_u d-halving at physical u ---
    let sc = scaling_constants(1.0).unwrap();
    let n = 9.0f64;
    let u = (-n * sc.f - 1.0 * sc.c * n.cbrt()).exp();
    println!("physical u = {u:.6e}");
    let p = FiniteNParams::new(vec![0.0; 9], vec![sc.theta + 0.5], 9.0, c64(u, 0.0)).unwrap();
    let wedge = build_cv(&p.a, &p.alpha, std::f64::consts::PI / 8.0).unwrap();
    for t in [0.0, 0.3, 0.6, 0.9, 1.5] {
        let v = c64(wedge.mu, 0.0) + Complex64::from_polar(t, std::f64::consts::PI - wedge.varphi);
        let v2 = c64(wedge.mu, 0.0);
        let r = -v.re + wedge.eta;
        for d in [0.1, 0.05, 0.025] {
            let cs = build_cs(v, &wedge, Some(d)).unwrap();
            let quad = Discretization { order: 32, truncation_radius: 12.0 }.rule(&cs);
            let k = eval_ku(v, v2, &p, &quad).unwrap();
            println!("t={t} R={r:.4} d={d}: K = {:.12e} {:+.3e}i", k.re, k.im);
        }
    }
    // --- sigma kernel decay ratio profiles ---
    for (b, beta, sigma) in [
        (vec![0.2], vec![0.9], 2.0),
        (vec![-0.1, 0.1], vec![0.5, 0.8], 1.0),
        (vec![0.0], vec![0.45, 0.55], 1.5),
        (vec![0.1], vec![0.6], 2.0),
        (vec![-0.5, -0.3], vec![0.2, 0.4], 1.0),
        (vec![-0.2], vec![0.3], 1.0),
        (vec![-0.3, -0.1], vec![0.25], 1.0),
    ] {
        let bs: Vec<f64> = b.iter().map(|v| v / sigma).collect();
        let bt: Vec<f64> = beta.iter().map(|v| v / sigma).collect();
        let (wp, zp) = build_sigma_contours_tight(sigma, &bs, &bt).unwrap();
        let k = sigma_kernel(sigma, SigmaForm::Laplace { s: c64(1.0, 0.0) }, &b, &beta, &wp, &zp,
                             &Discretization::default()).unwrap();
        let k00 = k.eval(0.0, 0.0).norm();
        let bm = b.iter().cloned().fold(f64::MIN, f64::max);
        let b1 = beta.iter().cloned().fold(f64::MAX, f64::min);
        let mut worst: f64 = 0.0;
        for i in 0..6 {
            for j in 0..6 {
                let (x, y) = (0.6 * i as f64, 0.6 * j as f64);
                let ratio = k.eval(x, y).norm() / ((bm * x - b1 * y) / sigma).exp() / k00;
                if ratio > worst { worst = ratio; }
            }
        }
        println!("b={b:?} beta={beta:?} sigma={sigma}: worst ratio = {worst:.3}");
    }
}
