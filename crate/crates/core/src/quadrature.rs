//! Globally adaptive Gauss-Kronrod (7/15) integration of complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::C64;

// Tabulated nodes and weights, kept at full published precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and work limits for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-13,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: C64,
    pub error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: C64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
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
        self.error.total_cmp(&other.error)
    }
}

fn nodes(a: f64, b: f64) -> [f64; 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut x = [0.0; 15];
    for i in 0..7 {
        x[2 * i] = c - h * XGK[i];
        x[2 * i + 1] = c + h * XGK[i];
    }
    x[14] = c;
    x
}

fn rule(a: f64, b: f64, f: &[C64; 15]) -> Panel {
    let h = 0.5 * (b - a);
    let mut kronrod = f[14] * WGK[7];
    let mut gauss = f[14] * WG[3];
    for i in 0..7 {
        let pair = f[2 * i] + f[2 * i + 1];
        kronrod += pair * WGK[i];
        if i % 2 == 1 {
            gauss += pair * WG[i / 2];
        }
    }
    Panel {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).norm(),
    }
}

fn eval_panel<F>(f: &F, a: f64, b: f64, parallel: bool) -> Panel
where
    F: Fn(f64) -> C64 + Sync,
{
    let x = nodes(a, b);
    let mut fx = [C64::new(0.0, 0.0); 15];
    if parallel {
        let v: Vec<C64> = x.par_iter().map(|&t| f(t)).collect();
        fx.copy_from_slice(&v);
    } else {
        for (slot, &t) in fx.iter_mut().zip(x.iter()) {
            *slot = f(t);
        }
    }
    rule(a, b, &fx)
}

fn integrate_impl<F>(
    f: &F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
    parallel: bool,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> C64 + Sync,
{
    let mut edges: Vec<f64> = vec![a];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&t| t > a && t < b)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    edges.extend(inner);
    edges.push(b);

    let mut heap = BinaryHeap::new();
    for w in edges.windows(2) {
        heap.push(eval_panel(f, w[0], w[1], parallel));
    }
    let mut evaluations = 15 * heap.len();
    let mut value: C64 = heap.iter().map(|p| p.value).sum();
    let mut error: f64 = heap.iter().map(|p| p.error).sum();
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * value.norm());
        if error <= target {
            // Re-sum in position order so the result does not depend on heap
            // layout, and so the running sums cannot drift.
            let mut panels: Vec<&Panel> = heap.iter().collect();
            panels.sort_by(|p, q| p.a.total_cmp(&q.a));
            value = panels.iter().map(|p| p.value).sum();
            error = panels.iter().map(|p| p.error).sum();
            if error <= cfg.abs_tol.max(cfg.rel_tol * value.norm()) {
                return Ok(QuadratureResult {
                    value,
                    error,
                    evaluations,
                });
            }
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::Quadrature {
                estimate: value.norm(),
                error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point.
            return Err(Error::Quadrature {
                estimate: value.norm(),
                error,
                evaluations,
            });
        }
        let left = eval_panel(f, worst.a, mid, parallel);
        let right = eval_panel(f, mid, worst.b, parallel);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        evaluations += 30;
    }
}

/// Integrate `f` over `[a, b]`, splitting first at the given breakpoints.
pub fn integrate<F>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> C64 + Sync,
{
    integrate_impl(&f, a, b, breakpoints, cfg, false)
}

/// Iterated integral over the rectangle `[ax, bx] x [ay, by]`.
///
/// The outer Kronrod nodes are evaluated concurrently; each node runs an
/// inner adaptive integral in `y`. The inner absolute tolerance is derived
/// from the outer one so the inner error cannot dominate.
pub fn integrate_2d<F>(
    f: F,
    x_range: (f64, f64),
    y_range: (f64, f64),
    x_breaks: &[f64],
    y_breaks: &(dyn Fn(f64) -> Vec<f64> + Sync),
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult>
where
    F: Fn(f64, f64) -> C64 + Sync,
{
    let inner_cfg = QuadratureConfig {
        rel_tol: 0.1 * cfg.rel_tol,
        abs_tol: cfg.abs_tol / (x_range.1 - x_range.0).max(1.0),
        max_intervals: cfg.max_intervals,
    };
    let failure = std::sync::Mutex::new(None);
    let evals = std::sync::atomic::AtomicUsize::new(0);
    let outer = |x: f64| -> C64 {
        let breaks = y_breaks(x);
        match integrate_impl(
            &|y| f(x, y),
            y_range.0,
            y_range.1,
            &breaks,
            &inner_cfg,
            false,
        ) {
            Ok(r) => {
                evals.fetch_add(r.evaluations, std::sync::atomic::Ordering::Relaxed);
                r.value
            }
            Err(e) => {
                failure.lock().expect("poisoned").get_or_insert(e);
                C64::new(0.0, 0.0)
            }
        }
    };
    let result = integrate_impl(&outer, x_range.0, x_range.1, x_breaks, cfg, true)?;
    if let Some(e) = failure.into_inner().expect("poisoned") {
        return Err(e);
    }
    Ok(QuadratureResult {
        evaluations: evals.into_inner(),
        ..result
    })
}
