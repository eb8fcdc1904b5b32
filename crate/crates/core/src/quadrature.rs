//! Gauss–Legendre rules of arbitrary order and a globally adaptive
//! Gauss–Kronrod (10/21 point) integrator.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Nodes (ascending) and weights of the `n`-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 4.0 * f64::EPSILON {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

// Kronrod abscissae; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_745_235_567,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One 21-point Kronrod evaluation: (estimate, |Kronrod − Gauss|).
fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(10).enumerate() {
        let dx = half * x;
        let sum = f(center - dx) + f(center + dx);
        kronrod += wk * sum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * sum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Tolerances for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveTolerance {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_bound: f64,
    pub subdivisions: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Integrates `f` over [a, b], bisecting the panel with the largest error
/// estimate until the summed estimate meets `max(abs_tol, rel_tol·|I|)`.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, tol: &AdaptiveTolerance) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    let (value, error) = kronrod21(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut subdivisions = 1;

    loop {
        if !(total.is_finite() && total_err.is_finite()) {
            return Err(Error::Convergence { estimate: total, error_bound: total_err });
        }
        let target = tol.abs_tol.max(tol.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if subdivisions >= tol.max_subdivisions {
            // Re-sum before reporting so the estimate carries no drift.
            let (value, error_bound) = resum(&heap);
            return Err(Error::Convergence { estimate: value, error_bound });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = kronrod21(&f, worst.a, mid);
        let (rv, re) = kronrod21(&f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Panel { a: mid, b: worst.b, value: rv, error: re });
        subdivisions += 1;
    }

    let (value, error_bound) = resum(&heap);
    Ok(Integral { value, error_bound, subdivisions })
}

/// Sums panels in ascending position so the result does not depend on heap order.
fn resum(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    panels
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> AdaptiveTolerance {
        AdaptiveTolerance { rel_tol: 1e-12, abs_tol: 1e-15, max_subdivisions: 200 }
    }

    #[test]
    fn legendre_small_orders() {
        let (x, w) = gauss_legendre(3);
        assert!((x[2] - (0.6f64).sqrt()).abs() < 1e-15);
        assert!(x[1].abs() < 1e-300);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-15);
        assert!((w[0] - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        for n in [8, 17, 64, 128, 256] {
            let (x, w) = gauss_legendre(n);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n} sum={total}");
            let deg = 2 * n.min(20) - 2;
            let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
            assert!((q - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn kronrod_constants_are_consistent() {
        // K21 is exact through degree 31, G10 through 19.
        let f = |x: f64| x.powi(30);
        let (k, _) = kronrod21(&f, -1.0, 1.0);
        assert!((k - 2.0 / 31.0).abs() < 1e-15);
        let wg_sum: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((wg_sum - 2.0).abs() < 1e-15);
        let wk_sum: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        assert!((wk_sum - 2.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_gaussian() {
        let r = integrate_adaptive(|x: f64| (-x * x).exp(), 0.0, 8.0, &tol()).unwrap();
        assert!((r.value - PI.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_sharp_feature() {
        // Lorentzian of width 1e-3: needs many bisections.
        let eps = 1e-3;
        let r = integrate_adaptive(|x: f64| eps / (x * x + eps * eps), -1.0, 1.0, &tol()).unwrap();
        let exact = 2.0 * (1.0 / eps).atan();
        assert!((r.value - exact).abs() < 1e-11 * exact);
        assert!(r.subdivisions > 1);
    }

    #[test]
    fn non_convergence_reports_estimate() {
        let t = AdaptiveTolerance { rel_tol: 1e-14, abs_tol: 1e-300, max_subdivisions: 3 };
        match integrate_adaptive(|x: f64| x.sqrt().recip(), 0.0, 1.0, &t) {
            Err(Error::Convergence { estimate, error_bound }) => {
                assert!(estimate > 1.0 && estimate < 2.0 && error_bound > 0.0);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_integrand_is_an_error() {
        let r = integrate_adaptive(|x: f64| x.abs().sqrt().recip(), -1.0, 1.0, &tol());
        assert!(matches!(r, Err(Error::Convergence { .. })));
    }
}
