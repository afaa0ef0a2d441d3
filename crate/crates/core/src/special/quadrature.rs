use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// Weight e^{-u²} on the real line.
    Hermite,
    /// Unit weight on [-1, 1].
    Legendre,
}

/// A fixed Gaussian rule. Nodes are sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: RuleKind,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Σ w_i f(x_i): the integral of f against the rule's weight.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// ∫_a^b f for a Legendre rule, by affine map from [-1, 1].
    pub fn integrate_on(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        debug_assert_eq!(self.kind, RuleKind::Legendre);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self.integrate(|t| f(mid + half * t))
    }
}

fn check_order(order: usize) -> Result<()> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(Error::InvalidParameter {
            name: "order",
            value: order as f64,
            reason: "quadrature order must lie in [2, 1024]",
        });
    }
    Ok(())
}

/// Gauss–Hermite rule, cached per order.
pub fn gauss_hermite(order: usize) -> Result<Arc<QuadratureRule>> {
    cached(RuleKind::Hermite, order, build_hermite)
}

/// Gauss–Legendre rule on [-1, 1], cached per order.
pub fn gauss_legendre(order: usize) -> Result<Arc<QuadratureRule>> {
    cached(RuleKind::Legendre, order, build_legendre)
}

pub fn quadrature(kind: RuleKind, order: usize) -> Result<Arc<QuadratureRule>> {
    match kind {
        RuleKind::Hermite => gauss_hermite(order),
        RuleKind::Legendre => gauss_legendre(order),
    }
}

type RuleCache = Mutex<HashMap<(RuleKind, usize), Arc<QuadratureRule>>>;

fn cached(
    kind: RuleKind,
    order: usize,
    build: fn(usize) -> QuadratureRule,
) -> Result<Arc<QuadratureRule>> {
    check_order(order)?;
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&(kind, order)) {
        return Ok(Arc::clone(rule));
    }
    // built outside the lock; a racing duplicate build is harmless
    let rule = Arc::new(build(order));
    cache
        .lock()
        .expect("rule cache poisoned")
        .entry((kind, order))
        .or_insert_with(|| Arc::clone(&rule));
    Ok(rule)
}

/// Roots of the orthonormal Hermite polynomial, each isolated by bisection on
/// the Sturm sign-change count and then polished by Newton. The recurrence is
/// rescaled in flight so large orders do not overflow; weights of the extreme
/// nodes may underflow to zero.
fn build_hermite(n: usize) -> QuadratureRule {
    const RESCALE_AT: f64 = 1e100;
    let pim4 = PI.powf(-0.25);
    let nf = n as f64;

    // (p_n, p_{n-1}, ln of the dropped scale, number of roots above z)
    let eval = |z: f64| -> (f64, f64, f64, usize) {
        let mut p1 = pim4;
        let mut p2 = 0.0;
        let mut log_scale = 0.0;
        let mut changes = 0;
        for j in 1..=n {
            let jf = j as f64;
            let p3 = p2;
            p2 = p1;
            p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
            if (p1 < 0.0) != (p2 < 0.0) {
                changes += 1;
            }
            if p1.abs() > RESCALE_AT {
                p1 /= RESCALE_AT;
                p2 /= RESCALE_AT;
                log_scale += RESCALE_AT.ln();
            }
        }
        (p1, p2, log_scale, changes)
    };

    let m = n.div_ceil(2);
    let mut roots = Vec::with_capacity(m);
    let mut log_weights = Vec::with_capacity(m);
    let mut upper = (2.0 * nf + 2.0).sqrt() + 1.0;
    for i in 0..m {
        let (mut lo, mut hi) = (0.0, upper);
        if n % 2 == 1 && i == m - 1 {
            // odd orders have a root at the origin
            hi = 0.0;
        } else {
            // isolate the (i+1)-th largest root
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if eval(mid).3 > i {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-6 * hi {
                    break;
                }
            }
        }
        let mut z = 0.5 * (lo + hi);
        let mut log_pp = 0.0;
        for _ in 0..20 {
            let (p1, p2, log_scale, _) = eval(z);
            let pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            if (z - dz) >= lo && (z - dz) <= hi {
                z -= dz;
            }
            log_pp = pp.abs().ln() + log_scale;
            if dz.abs() <= 1e-16 * z.abs().max(1.0) {
                break;
            }
        }
        upper = z;
        roots.push(z);
        log_weights.push(2.0_f64.ln() - 2.0 * log_pp);
    }

    // roots are largest first
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..m {
        let w = log_weights[i].exp();
        nodes[i] = -roots[i];
        weights[i] = w;
        nodes[n - 1 - i] = roots[i];
        weights[n - 1 - i] = w;
    }
    QuadratureRule {
        nodes,
        weights,
        kind: RuleKind::Hermite,
    }
}

fn build_legendre(n: usize) -> QuadratureRule {
    let nf = n as f64;
    let m = n.div_ceil(2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 1.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        nodes[i] = -z;
        weights[i] = w;
        nodes[n - 1 - i] = z;
        weights[n - 1 - i] = w;
    }
    QuadratureRule {
        nodes,
        weights,
        kind: RuleKind::Legendre,
    }
}

/// Stopping rule for adaptive integration: stop once the error estimate is
/// below max(abs, rel·|I|).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Self { abs, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-12, 1e-12)
    }
}

/// Integration interval, possibly unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    Finite(f64, f64),
    /// [a, ∞)
    Above(f64),
    /// (-∞, ∞)
    Real,
}

// Kronrod 15-point abscissae and weights; the Gauss 7-point rule uses the odd
// indexed abscissae.
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
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_SEGMENTS: usize = 4000;

/// (Kronrod estimate, error estimate) on [a, b].
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    for (j, (&x, &wk)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        resk += wk * pair;
        if j % 2 == 1 {
            resg += WG[j / 2] * pair;
        }
    }
    (resk * half, ((resk - resg) * half).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) on a finite interval: the segment
/// with the largest error is bisected until the summed error meets `tol`.
pub fn integrate_adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (value, error) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    while total_err > tol.target(total) {
        if heap.len() >= MAX_SEGMENTS || !total.is_finite() {
            return Err(Error::ToleranceNotMet {
                what: "adaptive quadrature",
                achieved: total_err,
                requested: tol.target(total),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split further in f64
            return Err(Error::ToleranceNotMet {
                what: "adaptive quadrature",
                achieved: total_err,
                requested: tol.target(total),
            });
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
        // refresh the running sums against drift
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
    Ok(heap.iter().map(|s| s.value).sum())
}

/// Adaptive integration over a possibly unbounded interval. Infinite ends are
/// mapped onto [0, 1) by x = a + t/(1 − t).
pub fn integrate(f: &dyn Fn(f64) -> f64, interval: Interval, tol: Tolerance) -> Result<f64> {
    match interval {
        Interval::Finite(a, b) => integrate_adaptive(f, a, b, tol),
        Interval::Above(a) => {
            let g = |t: f64| {
                let s = 1.0 - t;
                let v = f(a + t / s);
                if v == 0.0 {
                    0.0
                } else {
                    v / (s * s)
                }
            };
            integrate_adaptive(&g, 0.0, 1.0, tol)
        }
        Interval::Real => {
            let g = |t: f64| {
                let s = 1.0 - t;
                let x = t / s;
                let v = f(x) + f(-x);
                if v == 0.0 {
                    0.0
                } else {
                    v / (s * s)
                }
            };
            integrate_adaptive(&g, 0.0, 1.0, tol)
        }
    }
}

/// Iterated adaptive integration over a box of intervals. The innermost
/// dimension is the last one; inner tolerances are tightened so the outer
/// error estimate stays meaningful.
pub fn integrate_nested(
    f: &dyn Fn(&[f64]) -> f64,
    intervals: &[Interval],
    tol: Tolerance,
) -> Result<f64> {
    fn recurse(
        f: &dyn Fn(&[f64]) -> f64,
        intervals: &[Interval],
        prefix: &mut Vec<f64>,
        tol: Tolerance,
    ) -> Result<f64> {
        let Some((&first, rest)) = intervals.split_first() else {
            return Ok(f(prefix));
        };
        let inner_tol = Tolerance::new(tol.abs * 1e-2, tol.rel * 1e-2);
        let failure = std::cell::Cell::new(None);
        let prefix_cell = std::cell::RefCell::new(std::mem::take(prefix));
        let g = |x: f64| {
            let mut p = prefix_cell.borrow_mut();
            p.push(x);
            let v = recurse(f, rest, &mut p, inner_tol);
            p.pop();
            match v {
                Ok(v) => v,
                Err(e) => {
                    failure.set(Some(e));
                    0.0
                }
            }
        };
        let result = integrate(&g, first, tol);
        *prefix = prefix_cell.into_inner();
        if let Some(e) = failure.take() {
            return Err(e);
        }
        result
    }
    recurse(f, intervals, &mut Vec::with_capacity(intervals.len()), tol)
}
