//! The integrals `I_n(f)`, `I_n(f₁)` and `I_n^β(f_m)`: closed forms where they
//! exist and a globally adaptive tensor Gauss–Legendre cubature otherwise.
//!
//! Every integrand here is smooth on its domain but blows up like `‖x‖⁻²`
//! just outside it, at the origin. The initial mesh is graded geometrically
//! towards the excluded square `[−π/n, π/n]²`, and panels touching it are
//! split a few times before any error estimate is trusted.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{GridDomain, LatticeSpec, Parity, Point};
use crate::summation::Neumaier;
use crate::sums::{Method, SumResult};

/// Evaluation budget used unless the caller asks otherwise.
pub const DEFAULT_MAX_EVALUATIONS: usize = 10_000_000;

/// Smallest relative tolerance accepted by the `I_n` evaluators.
pub const MIN_TOLERANCE: f64 = 1e-12;

/// Depth to which panels touching the excluded square are pre-split.
const HOLE_DEPTH: u32 = 4;

const GL7_NODES: [f64; 7] = [
    -0.949_107_912_342_758_5,
    -0.741_531_185_599_394_4,
    -0.405_845_151_377_397_2,
    0.0,
    0.405_845_151_377_397_2,
    0.741_531_185_599_394_4,
    0.949_107_912_342_758_5,
];
const GL7_WEIGHTS: [f64; 7] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
    0.381_830_050_505_118_9,
    0.279_705_391_489_276_7,
    0.129_484_966_168_869_7,
];
const GL3_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GL3_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

/// Evaluations per panel: the 7×7 rule plus the 3×3 companion.
const PANEL_COST: usize = 7 * 7 + 3 * 3;

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    /// `[−r, r]²`.
    pub fn centered(r: f64) -> Self {
        Self::new(-r, r, -r, r)
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
}

/// Knobs for [`adaptive_cubature`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubatureOptions {
    /// Target for `error / |value|`.
    pub rel_tol: f64,
    pub max_evaluations: usize,
}

impl CubatureOptions {
    pub fn new(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        }
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cubature {
    pub value: f64,
    /// Sum of the per-panel `|Q₇ − Q₃|` estimates.
    pub error: f64,
    pub evaluations: usize,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    rect: Rect,
    value: f64,
    error: f64,
    id: u64,
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
    /// Largest error first; among equal errors the older panel wins.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.id.cmp(&self.id))
    }
}

fn tensor_rule<F>(f: &F, r: &Rect, nodes: &[f64], weights: &[f64]) -> Result<f64>
where
    F: Fn(Point) -> Result<f64>,
{
    let (hx, hy) = (0.5 * r.width(), 0.5 * r.height());
    let (cx, cy) = (r.x0 + hx, r.y0 + hy);
    let mut acc = 0.0;
    for (xi, wi) in nodes.iter().zip(weights) {
        let x = cx + hx * xi;
        let mut row = 0.0;
        for (yj, wj) in nodes.iter().zip(weights) {
            row += wj * f([x, cy + hy * yj])?;
        }
        acc += wi * row;
    }
    Ok(acc * hx * hy)
}

fn evaluate<F>(f: &F, rect: Rect, id: u64) -> Result<Panel>
where
    F: Fn(Point) -> Result<f64>,
{
    let q7 = tensor_rule(f, &rect, &GL7_NODES, &GL7_WEIGHTS)?;
    let q3 = tensor_rule(f, &rect, &GL3_NODES, &GL3_WEIGHTS)?;
    Ok(Panel {
        rect,
        value: q7,
        error: (q7 - q3).abs(),
        id,
    })
}

/// Quadrisects, or halves the long side when the aspect ratio exceeds 2.
fn split(r: &Rect) -> Vec<Rect> {
    let (w, h) = (r.width(), r.height());
    let xm = 0.5 * (r.x0 + r.x1);
    let ym = 0.5 * (r.y0 + r.y1);
    if w > 2.0 * h {
        vec![Rect::new(r.x0, xm, r.y0, r.y1), Rect::new(xm, r.x1, r.y0, r.y1)]
    } else if h > 2.0 * w {
        vec![Rect::new(r.x0, r.x1, r.y0, ym), Rect::new(r.x0, r.x1, ym, r.y1)]
    } else {
        vec![
            Rect::new(r.x0, xm, r.y0, ym),
            Rect::new(xm, r.x1, r.y0, ym),
            Rect::new(r.x0, xm, ym, r.y1),
            Rect::new(xm, r.x1, ym, r.y1),
        ]
    }
}

/// Breakpoints of `[lo, hi]` at `±h·2^k`.
fn graded_axis(lo: f64, hi: f64, h: f64) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    for sign in [-1.0, 1.0] {
        let mut t = h;
        while t < hi.abs().max(lo.abs()) {
            let p = sign * t;
            if p > lo && p < hi {
                pts.push(p);
            }
            t *= 2.0;
        }
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Initial panels for `rect` minus `[−h, h]²`.
fn initial_mesh(rect: &Rect, hole: Option<f64>) -> Vec<Rect> {
    let Some(h) = hole else {
        return vec![*rect];
    };
    let xs = graded_axis(rect.x0, rect.x1, h);
    let ys = graded_axis(rect.y0, rect.y1, h);
    let inside = |a: f64, b: f64| a >= -h && b <= h;
    let mut cells = Vec::new();
    for wy in ys.windows(2) {
        for wx in xs.windows(2) {
            if inside(wx[0], wx[1]) && inside(wy[0], wy[1]) {
                continue;
            }
            let cell = Rect::new(wx[0], wx[1], wy[0], wy[1]);
            let touches = wx[0] <= h && wx[1] >= -h && wy[0] <= h && wy[1] >= -h;
            if touches {
                let mut level = vec![cell];
                for _ in 0..HOLE_DEPTH {
                    level = level.iter().flat_map(split).collect();
                }
                cells.extend(level);
            } else {
                cells.push(cell);
            }
        }
    }
    cells
}

/// Integrates `f` over `rect`, minus the square `[−h, h]²` when `hole` is
/// `Some(h)`.
///
/// Panels are refined largest-error first until the summed error estimate
/// drops below `rel_tol · |value|`. The final value is summed in panel
/// creation order, so the result is reproducible.
pub fn adaptive_cubature<F>(f: F, rect: Rect, hole: Option<f64>, opts: &CubatureOptions) -> Result<Cubature>
where
    F: Fn(Point) -> Result<f64> + Sync,
{
    let mesh = initial_mesh(&rect, hole);
    let initial: Vec<Panel> = mesh
        .par_iter()
        .enumerate()
        .map(|(i, r)| evaluate(&f, *r, i as u64))
        .collect::<Result<_>>()?;
    let mut next_id = initial.len() as u64;
    let mut evaluations = initial.len() * PANEL_COST;

    let mut value: f64 = initial.iter().map(|p| p.value).sum();
    let mut error: f64 = initial.iter().map(|p| p.error).sum();
    let mut heap: BinaryHeap<Panel> = initial.into_iter().collect();

    loop {
        if error <= opts.rel_tol * value.abs() {
            break;
        }
        if evaluations + 4 * PANEL_COST > opts.max_evaluations {
            return Err(Error::ToleranceNotMet {
                evaluations,
                achieved: error / value.abs(),
                target: opts.rel_tol,
            });
        }
        let worst = heap.pop().expect("mesh is never empty");
        value -= worst.value;
        error -= worst.error;
        for child in split(&worst.rect) {
            let p = evaluate(&f, child, next_id)?;
            next_id += 1;
            evaluations += PANEL_COST;
            value += p.value;
            error += p.error;
            heap.push(p);
        }
        // the running totals drift; resynchronise now and then
        if next_id % 4096 < 4 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
        }
    }

    let mut panels = heap.into_vec();
    panels.sort_by_key(|p| p.id);
    let value: Neumaier = panels.iter().map(|p| p.value).collect();
    let error: Neumaier = panels.iter().map(|p| p.error).collect();
    Ok(Cubature {
        value: value.value(),
        error: error.value(),
        evaluations,
        panels: panels.len(),
    })
}

/// How far a symmetric integrand may be folded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Fold {
    None,
    /// Even under `x ↦ −x`: keep `x₁ ≥ 0`, double.
    HalfPlane,
    /// Also even under `(x₁, x₂) ↦ (x₁, −x₂)`: keep the first quadrant.
    Quadrant,
}

fn folded(rect: &Rect, fold: Fold) -> (Rect, f64) {
    match fold {
        Fold::None => (*rect, 1.0),
        Fold::HalfPlane => (Rect::new(0.0, rect.x1, rect.y0, rect.y1), 2.0),
        Fold::Quadrant => (Rect::new(0.0, rect.x1, 0.0, rect.y1), 4.0),
    }
}

fn check_args(n: usize, tol: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("integrals need n >= 2, got {n}")));
    }
    if !(tol >= MIN_TOLERANCE) {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol:e} is below {MIN_TOLERANCE:e}"
        )));
    }
    Ok(())
}

/// `Δ_n = 2π/n`.
pub fn cell_width(n: usize) -> f64 {
    2.0 * PI / n as f64
}

fn quadrature_result(n: usize, c: Cubature, factor: f64) -> SumResult {
    let inv = factor / cell_width(n).powi(2);
    SumResult {
        value: inv * c.value,
        n,
        method: Method::Quadrature,
        terms: 0,
        err_estimate: inv * c.error,
    }
}

/// `I_n(f) = Δ_n⁻² ∬_{R_n} f` over `R_n = [−π, π]² \ [−π/n, π/n]²`, which
/// covers the same area as `D_n` modulo `2π`.
pub fn in_f_numeric(spec: &LatticeSpec, n: usize, tol: f64) -> Result<SumResult> {
    in_f_numeric_with(spec, n, &CubatureOptions::new(tol))
}

pub fn in_f_numeric_with(spec: &LatticeSpec, n: usize, opts: &CubatureOptions) -> Result<SumResult> {
    check_args(n, opts.rel_tol)?;
    let fold = if spec.reflection_symmetric() {
        Fold::Quadrant
    } else {
        Fold::HalfPlane
    };
    let (rect, factor) = folded(&Rect::centered(PI), fold);
    let c = adaptive_cubature(|x| spec.f(x), rect, Some(PI / n as f64), opts)?;
    Ok(quadrature_result(n, c, factor))
}

/// The integration domain behind `I_n(f_m)` or `I_n^β(f_m)`.
fn fm_domain(spec: &LatticeSpec, n: usize, beta: Option<f64>) -> Result<Rect> {
    match beta {
        Some(b) => {
            let dom = GridDomain::restricted(n, Some(b), spec)?;
            let e = dom.restricted_half_extent().expect("restricted domain");
            Ok(Rect::centered(e))
        }
        None => {
            let h = PI / n as f64;
            Ok(match Parity::of(n) {
                Parity::Odd => Rect::centered(PI),
                Parity::Even => Rect::new(-PI - h, PI - h, -PI - h, PI - h),
            })
        }
    }
}

/// `I_n^β(f_m)` over `D_n^β` minus the excluded square, or `I_n(f_m)` over
/// the whole `D_n` when `beta` is `None` (only meaningful for `m = 1`, since
/// `p_m` may vanish inside `[−π, π]²` otherwise).
pub fn in_fm_numeric(spec: &LatticeSpec, n: usize, m: u32, beta: Option<f64>, tol: f64) -> Result<SumResult> {
    in_fm_numeric_with(spec, n, m, beta, &CubatureOptions::new(tol))
}

pub fn in_fm_numeric_with(
    spec: &LatticeSpec,
    n: usize,
    m: u32,
    beta: Option<f64>,
    opts: &CubatureOptions,
) -> Result<SumResult> {
    check_args(n, opts.rel_tol)?;
    if m == 0 {
        return Err(Error::InvalidArgument("Taylor order m must be at least 1".into()));
    }
    if m >= 2 && beta.is_none() {
        return Err(Error::InvalidArgument(
            "m >= 2 needs a restricted domain; pass beta".into(),
        ));
    }
    let rect = fm_domain(spec, n, beta)?;
    let symmetric = rect.x0 == -rect.x1;
    let mirror = spec.reflection_symmetric() || (m == 1 && spec.form().b() == 0.0);
    let fold = match (symmetric, mirror) {
        (false, _) => Fold::None,
        (true, true) => Fold::Quadrant,
        (true, false) => Fold::HalfPlane,
    };
    let (rect, factor) = folded(&rect, fold);
    let c = adaptive_cubature(|x| spec.fm(m, x), rect, Some(PI / n as f64), opts)?;
    Ok(quadrature_result(n, c, factor))
}

/// `∬_{E(R)} f₁` in closed form, where `E(R) = [0, R] × [−R, R]` minus
/// `[0, π/n] × [−π/n, π/n]`: `log(nR/π) · 4|Φ|π/√|d|`.
pub fn e_region_closed(spec: &LatticeSpec, n: usize, r: f64) -> f64 {
    let l = spec.size() as f64;
    (n as f64 * r / PI).ln() * 4.0 * l * PI / spec.form().sqrt_abs_disc()
}

/// `∬_{E(R)} f₁` by adaptive cubature.
pub fn e_region_numeric(spec: &LatticeSpec, n: usize, r: f64, tol: f64) -> Result<f64> {
    let rect = Rect::new(0.0, r, -r, r);
    let c = adaptive_cubature(|x| Ok(spec.f1_closed(x)), rect, Some(PI / n as f64), &CubatureOptions::new(tol))?;
    Ok(c.value)
}

/// `∬_{E_n} f₁` over the corner box `[π − π/n, π + π/n] × [−π − π/n, −π + π/n]`.
pub fn corner_box_integral(spec: &LatticeSpec, n: usize, tol: f64) -> Result<Cubature> {
    let h = PI / n as f64;
    let rect = Rect::new(PI - h, PI + h, -PI - h, -PI + h);
    adaptive_cubature(|x| Ok(spec.f1_closed(x)), rect, None, &CubatureOptions::new(tol))
}

/// `I_n(f₁)`. For odd `n` this is exactly `(2|Φ|/(π√|d|)) n² log n`; for
/// even `n` the two `E(π ± π/n)` regions are taken in closed form and the
/// corner box by cubature.
pub fn in_f1_closed(spec: &LatticeSpec, n: usize) -> Result<SumResult> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("integrals need n >= 2, got {n}")));
    }
    let l = spec.size() as f64;
    let nf = n as f64;
    let (value, err) = match Parity::of(n) {
        Parity::Odd => {
            let coeff = 2.0 * l / (PI * spec.form().sqrt_abs_disc());
            let v = coeff * nf * nf * nf.ln();
            (v, f64::EPSILON * v)
        }
        Parity::Even => {
            let lead = l / (PI * spec.det_sts().sqrt())
                * nf
                * nf
                * (nf.ln() + 0.5 * (-1.0 / (nf * nf)).ln_1p());
            let corner = corner_box_integral(spec, n, 1e-13)?;
            let inv = 1.0 / cell_width(n).powi(2);
            let v = lead - inv * corner.value;
            (v, inv * corner.error + f64::EPSILON * lead.abs())
        }
    };
    Ok(SumResult {
        value,
        n,
        method: Method::Expansion,
        terms: 0,
        err_estimate: err,
    })
}

/// Error bound of the product midpoint rule on a `δ₁ × δ₂` cell:
/// `(δ₁² max|∂₁²h| + δ₂² max|∂₂²h|) / 24`.
pub fn midpoint_error_bound(delta1: f64, delta2: f64, max_d2_1: f64, max_d2_2: f64) -> f64 {
    (delta1 * delta1 * max_d2_1 + delta2 * delta2 * max_d2_2) / 24.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn rules_are_exact_on_polynomials() {
        let r = Rect::new(-0.3, 1.2, 0.5, 2.0);
        // ∬ x⁶ y⁴ and ∬ x² y
        let p7 = |x: Point| Ok(x[0].powi(6) * x[1].powi(4));
        let exact7 = (1.2f64.powi(7) - (-0.3f64).powi(7)) / 7.0 * (2.0f64.powi(5) - 0.5f64.powi(5)) / 5.0;
        assert!(rel(tensor_rule(&p7, &r, &GL7_NODES, &GL7_WEIGHTS).unwrap(), exact7) < 1e-14);
        let p3 = |x: Point| Ok(x[0].powi(5) * x[1].powi(2));
        let exact3 = (1.2f64.powi(6) - (-0.3f64).powi(6)) / 6.0 * (8.0 - 0.125) / 3.0;
        assert!(rel(tensor_rule(&p3, &r, &GL3_NODES, &GL3_WEIGHTS).unwrap(), exact3) < 1e-14);
        let w7: f64 = GL7_WEIGHTS.iter().sum();
        assert!((w7 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn mesh_excludes_hole_and_covers_area() {
        for (rect, h) in [
            (Rect::centered(PI), PI / 7.0),
            (Rect::new(0.0, PI, -PI, PI), PI / 64.0),
            (Rect::new(-PI - 0.5, PI - 0.5, -PI - 0.5, PI - 0.5), 0.5),
            (Rect::new(-PI / 2.0, PI / 2.0, -PI, PI / 2.0), PI / 2.0),
        ] {
            let cells = initial_mesh(&rect, Some(h));
            let area: f64 = cells.iter().map(|c| c.width() * c.height()).sum();
            let hx = (rect.x1.min(h) - rect.x0.max(-h)).max(0.0);
            let hy = (rect.y1.min(h) - rect.y0.max(-h)).max(0.0);
            let expected = rect.width() * rect.height() - hx * hy;
            assert!(rel(area, expected) < 1e-13);
            for c in &cells {
                let overlap_x = c.x1.min(h) - c.x0.max(-h);
                let overlap_y = c.y1.min(h) - c.y0.max(-h);
                assert!(overlap_x <= 0.0 || overlap_y <= 0.0, "{c:?} overlaps the hole");
            }
        }
    }

    #[test]
    fn cubature_smooth_and_budget() {
        let c = adaptive_cubature(
            |x| Ok((x[0] + 2.0 * x[1]).cos()),
            Rect::new(0.0, 1.0, 0.0, 1.0),
            None,
            &CubatureOptions::new(1e-12),
        )
        .unwrap();
        // ∬ cos(x + 2y) = (−cos 3 + cos 1 + cos 2 − 1)/2
        let exact = (-(3.0f64).cos() + 1.0f64.cos() + 2.0f64.cos() - 1.0) / 2.0;
        assert!((c.value - exact).abs() < 1e-14);
        let starved = CubatureOptions {
            rel_tol: 1e-12,
            max_evaluations: 500,
        };
        let r = adaptive_cubature(|x| Ok(1.0 / (x[0] * x[0] + x[1] * x[1])), Rect::centered(1.0), Some(1e-3), &starved);
        assert!(matches!(r, Err(Error::ToleranceNotMet { .. })));
    }

    #[test]
    fn midpoint_bound_examples() {
        assert_eq!(midpoint_error_bound(0.0, 0.0, 5.0, 5.0), 0.0);
        assert_eq!(midpoint_error_bound(0.3, 0.3, 0.0, 0.0), 0.0);
        assert!((midpoint_error_bound(0.1, 0.2, 6.0, 3.0) - 0.0075).abs() < 1e-17);
    }

    #[test]
    fn closed_odd_values() {
        let sq = LatticeSpec::square();
        let v = in_f1_closed(&sq, 3).unwrap().value;
        assert!(rel(v, 2.0 / PI * 9.0 * 3f64.ln()) < 2.0 * f64::EPSILON);
        let b2 = LatticeSpec::union_jack();
        let v = in_f1_closed(&b2, 5).unwrap().value;
        assert!(rel(v, 4.0 / (3.0 * PI) * 25.0 * 5f64.ln()) < 4.0 * f64::EPSILON);
        let v = in_f1_closed(&sq, 101).unwrap().value;
        let target = 2.0 / PI * 101.0 * 101.0 * 101f64.ln();
        assert!((v - target).abs() <= 2.0 * f64::EPSILON * target);
    }

    /// Composite Simpson on a tensor grid, for the smooth corner box.
    fn simpson_2d(f: impl Fn(f64, f64) -> f64, r: Rect, m: usize) -> f64 {
        let (hx, hy) = (r.width() / m as f64, r.height() / m as f64);
        let w = |i: usize| if i == 0 || i == m { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
        let mut s = 0.0;
        for i in 0..=m {
            for j in 0..=m {
                s += w(i) * w(j) * f(r.x0 + i as f64 * hx, r.y0 + j as f64 * hy);
            }
        }
        s * hx * hy / 9.0
    }

    #[test]
    fn closed_even_square_n2() {
        let sq = LatticeSpec::square();
        let h = PI / 2.0;
        let boxed = simpson_2d(|x, y| 4.0 / (x * x + y * y), Rect::new(PI - h, PI + h, -PI - h, -PI + h), 400);
        let oracle = 2.0 / PI * 4.0 * (2f64.ln() + 0.5 * 0.75f64.ln()) - boxed / PI.powi(2);
        assert!(rel(in_f1_closed(&sq, 2).unwrap().value, oracle) < 1e-12);
    }

    fn random_spec() -> impl Strategy<Value = LatticeSpec> {
        prop::collection::vec((-3i64..=3, -3i64..=3), 0..3).prop_filter_map("nonzero", |extra| {
            let mut v = vec![[1, 0], [0, 1]];
            for (x, y) in extra {
                if x == 0 && y == 0 {
                    return None;
                }
                v.push([x, y]);
            }
            LatticeSpec::new(v).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10))]

        #[test]
        fn polar_identity(spec in random_spec(), n in 3usize..40, which in 0usize..3) {
            let h = PI / n as f64;
            let r = [PI, PI + h, PI - h][which];
            let numeric = e_region_numeric(&spec, n, r, 1e-12).unwrap();
            let closed = e_region_closed(&spec, n, r);
            prop_assert!(rel(numeric, closed) < 1e-9);
        }
    }
}
