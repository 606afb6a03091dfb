#![allow(dead_code)]

use freefista::problems::{Haar2d, OrthogonalTransform};
use freefista::{make_quadratic_growth_test, CompositeProblem, Design, InpaintingProblem, LogisticProblem, Penalty, QuadraticProblem};
use ndarray::{Array1, Array2};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Array1<f64> {
    Array1::from_shape_fn(n, |_| rng.random_range(lo..hi))
}

pub struct SuiteCase {
    pub name: String,
    pub problem: QuadraticProblem<f64>,
    pub x0: Array1<f64>,
    pub ratio: f64,
}

/// 20 quadratic + l1 instances, dims in [20, 200], conditioning cycling
/// through 1e2, 1e3, 1e4.
pub fn ground_truth_suite() -> Vec<SuiteCase> {
    let ratios = [1e2, 1e3, 1e4];
    (0..20u64)
        .map(|i| {
            let dim = 20 + (37 * i as usize) % 181;
            let ratio = ratios[i as usize % 3];
            let mu = 0.5 + 0.25 * (i % 4) as f64;
            let lambda = [0.02, 0.1, 0.3][i as usize % 3];
            let problem = make_quadratic_growth_test(dim, ratio * mu, mu, Penalty::L1(lambda), 1000 + i).unwrap();
            let x0 = uniform(&mut rng(2000 + i), dim, -1.0, 1.0);
            SuiteCase {
                name: format!("quad#{i} dim={dim} L/mu={ratio:e}"),
                problem,
                x0,
                ratio,
            }
        })
        .collect()
}

/// Central differences with step `h`.
pub fn finite_difference_gradient<P: CompositeProblem<f64>>(p: &P, x: &Array1<f64>, h: f64) -> Array1<f64> {
    Array1::from_shape_fn(x.len(), |i| {
        let mut plus = x.clone();
        let mut minus = x.clone();
        plus[i] += h;
        minus[i] -= h;
        (p.smooth_value(&plus).unwrap() - p.smooth_value(&minus).unwrap()) / (2.0 * h)
    })
}

pub fn relative_error(a: &Array1<f64>, b: &Array1<f64>) -> f64 {
    let diff = (a - b).mapv(|v| v * v).sum().sqrt();
    let scale = b.mapv(|v| v * v).sum().sqrt().max(1e-12);
    diff / scale
}

/// Minimizes a unimodal function on `[lo, hi]` by golden-section search.
pub fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

/// Largest eigenvalue of a symmetric PSD operator by power iteration.
pub fn power_iteration(apply: impl Fn(&Array1<f64>) -> Array1<f64>, n: usize, iters: usize) -> f64 {
    let mut v = uniform(&mut rng(99), n, -1.0, 1.0);
    let mut lambda = 0.0;
    for _ in 0..iters {
        let norm = v.dot(&v).sqrt();
        v /= norm;
        let w = apply(&v);
        lambda = v.dot(&w);
        v = w;
    }
    lambda
}

/// Largest relative gap between the gradient and central differences.
pub fn max_gradient_error<P: CompositeProblem<f64>>(p: &P, points: &[Array1<f64>]) -> f64 {
    points
        .iter()
        .map(|x| relative_error(&p.smooth_gradient(x).unwrap(), &finite_difference_gradient(p, x, 1e-5)))
        .fold(0.0, f64::max)
}

pub fn random_points(n: usize, seed: u64, lo: f64, hi: f64) -> Vec<Array1<f64>> {
    let mut r = rng(seed);
    (0..10).map(|_| uniform(&mut r, n, lo, hi)).collect()
}

pub fn sparse_logistic() -> LogisticProblem<f64> {
    let mut r = rng(5);
    let mut triplets = Vec::new();
    for i in 0..30 {
        for j in 0..40 {
            if r.random::<f64>() < 0.2 {
                triplets.push((i, j, r.random_range(-1.0..1.0)));
            }
        }
    }
    let labels = Array1::from_shape_fn(30, |i| if i % 3 == 0 { -1.0 } else { 1.0 });
    LogisticProblem::new(Design::sparse_from_triplets(30, 40, triplets), labels, 10.0, 3.0).unwrap()
}

pub fn small_inpainting() -> InpaintingProblem<f64, Haar2d> {
    let image = Array1::from_shape_fn(64, |i| ((i % 8) as f64 / 8.0 + (i / 8) as f64 / 16.0).sin().abs());
    InpaintingProblem::from_image(&image, 8, 8, 2, 0.6, 0.05, 11).unwrap()
}

/// `min_w h(w) + |w - z|^2 / (2 tau)` coordinate by coordinate for a
/// separable penalty.
pub fn brute_force_separable(h: impl Fn(f64) -> f64, z: &Array1<f64>, tau: f64) -> f64 {
    z.iter()
        .map(|&zi| {
            let phi = |w: f64| h(w) + (w - zi) * (w - zi) / (2.0 * tau);
            let w = golden_section(phi, zi - 10.0, zi + 10.0, 1e-12);
            // the kink at 0 is a candidate golden section may straddle
            phi(w).min(phi(0.0))
        })
        .sum()
}

/// Prox of `lambda |T w|_1` by projected gradient on the dual
/// `min_{|u|_inf <= lambda} 1/2 |z - tau T^T u|^2`, with `T` as a dense matrix.
pub fn dual_prox(t: &Array2<f64>, lambda: f64, z: &Array1<f64>, tau: f64) -> Array1<f64> {
    let n = z.len();
    let tt = t.t().to_owned();
    let sigma = power_iteration(|v| tt.dot(&t.dot(v)), n, 200);
    let step = 1.0 / (tau * tau * sigma);
    let mut u = Array1::<f64>::zeros(t.nrows());
    for _ in 0..5000 {
        let w = z - &(tt.dot(&u) * tau);
        let grad = t.dot(&w) * (-tau);
        u = (&u - &(grad * step)).mapv(|v| v.clamp(-lambda, lambda));
    }
    z - &(tt.dot(&u) * tau)
}

pub fn dense_matrix<T: OrthogonalTransform<f64>>(t: &T) -> Array2<f64> {
    let n = t.len();
    let mut m = Array2::zeros((n, n));
    for j in 0..n {
        let mut e = Array1::zeros(n);
        e[j] = 1.0;
        m.column_mut(j).assign(&t.forward(&e));
    }
    m
}

