//! Root-vector sets, the trigonometric kernel ψ and its Taylor surrogates, and
//! the grid domains the lattice sums run over.
//!
//! A [`LatticeSpec`] holds the integer vectors `s_ℓ` (the first two must be the
//! standard basis). Everything else is derived from them: the kernel
//!
//! ```text
//! ψ(x) = 1 − (1/|Φ|) Σ cos(s_ℓ·x) = (2/|Φ|) Σ sin²(½ s_ℓ·x)
//! ```
//!
//! the quadratic form `a x² + b xy + c y²` of its leading Taylor term, and the
//! radius `s̄ = max ‖s_ℓ‖` that bounds the safe region of the higher surrogates.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the plane.
pub type Point = [f64; 2];

/// Largest admissible magnitude of a vector component. Keeps `a`, `b`, `c`
/// exact in binary64.
pub const MAX_COMPONENT: i64 = 1_000_000;

/// Default floor below which ψ (or `p_m`) counts as zero.
pub const DEFAULT_SINGULAR_FLOOR: f64 = 1e-300;

/// β used when a restricted domain is requested without one.
pub const DEFAULT_BETA: f64 = 0.5;

/// Positive definite binary quadratic form `a x² + b xy + c y²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticForm {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    normalized: bool,
}

impl QuadraticForm {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let d = b * b - 4.0 * a * c;
        let finite = a.is_finite() && b.is_finite() && c.is_finite();
        if !finite || a <= 0.0 || c <= 0.0 || d >= 0.0 {
            return Err(Error::NotPositiveDefinite { a, b, c });
        }
        Ok(Self {
            a,
            b,
            c,
            d,
            normalized: a <= c && b >= 0.0,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// The discriminant `b² − 4ac` (always negative).
    pub fn discriminant(&self) -> f64 {
        self.d
    }

    /// Whether `0 < a ≤ c` and `b ≥ 0` hold.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// `√|d|`.
    pub fn sqrt_abs_disc(&self) -> f64 {
        (-self.d).sqrt()
    }

    /// The representative with `a ≤ c` and `b ≥ 0`. Sums and expansions over
    /// the symmetric box are invariant under `a ↔ c` and `b → −b`.
    pub fn normalized(&self) -> Self {
        let (a, c) = if self.a <= self.c {
            (self.a, self.c)
        } else {
            (self.c, self.a)
        };
        Self {
            a,
            b: self.b.abs(),
            c,
            d: self.d,
            normalized: true,
        }
    }

    /// `μ = (−b + i√|d|) / (2c)`, the root of `c μ² + b μ + a = 0` in the upper
    /// half plane.
    pub fn mu(&self) -> Complex64 {
        Complex64::new(-self.b, self.sqrt_abs_disc()) / (2.0 * self.c)
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// Sum of `1/(a − b + c)` and `1/(a + b + c)`, which turns up in every
    /// boundary correction.
    pub fn corner_sum(&self) -> f64 {
        1.0 / (self.a - self.b + self.c) + 1.0 / (self.a + self.b + self.c)
    }

    /// `1/a + 1/c`.
    pub fn axis_sum(&self) -> f64 {
        1.0 / self.a + 1.0 / self.c
    }
}

#[derive(Serialize, Deserialize)]
struct SpecFile {
    vectors: Vec<[i64; 2]>,
}

/// The root-vector set Φ written in the basis `{s₁, s₂}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    vectors: Vec<[i64; 2]>,
    sbar: f64,
    form: QuadraticForm,
    det_sts: f64,
    singular_floor: f64,
}

impl LatticeSpec {
    pub fn new(vectors: Vec<[i64; 2]>) -> Result<Self> {
        if vectors.len() < 2 {
            return Err(Error::InvalidSpec(format!(
                "need at least two vectors, got {}",
                vectors.len()
            )));
        }
        if vectors[0] != [1, 0] || vectors[1] != [0, 1] {
            return Err(Error::InvalidSpec(
                "the first two vectors must be (1,0) and (0,1)".into(),
            ));
        }
        for v in &vectors {
            if *v == [0, 0] {
                return Err(Error::InvalidSpec("zero vector".into()));
            }
            if v[0].abs() > MAX_COMPONENT || v[1].abs() > MAX_COMPONENT {
                return Err(Error::InvalidSpec(format!(
                    "component of {v:?} exceeds {MAX_COMPONENT} in magnitude"
                )));
            }
        }

        let (mut a, mut half_b, mut c) = (0i128, 0i128, 0i128);
        let mut sbar2 = 0i128;
        for v in &vectors {
            let (x, y) = (v[0] as i128, v[1] as i128);
            a += x * x;
            half_b += x * y;
            c += y * y;
            sbar2 = sbar2.max(x * x + y * y);
        }
        let det = a * c - half_b * half_b;
        let form = QuadraticForm::new(a as f64, 2.0 * half_b as f64, c as f64)?;

        Ok(Self {
            vectors,
            sbar: (sbar2 as f64).sqrt(),
            form,
            det_sts: det as f64,
            singular_floor: DEFAULT_SINGULAR_FLOOR,
        })
    }

    /// `A₁×A₁`: {(1,0), (0,1)}.
    pub fn square() -> Self {
        Self::new(vec![[1, 0], [0, 1]]).expect("bundled spec")
    }

    /// `A₂`: {(1,0), (0,1), (1,1)}.
    pub fn triangular() -> Self {
        Self::new(vec![[1, 0], [0, 1], [1, 1]]).expect("bundled spec")
    }

    /// `B₂`: {(1,0), (0,1), (1,−1), (1,1)}.
    pub fn union_jack() -> Self {
        Self::new(vec![[1, 0], [0, 1], [1, -1], [1, 1]]).expect("bundled spec")
    }

    /// Looks up a bundled spec by name.
    pub fn named(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "square" | "a1xa1" => Ok(Self::square()),
            "triangular" | "a2" => Ok(Self::triangular()),
            "unionjack" | "union-jack" | "b2" => Ok(Self::union_jack()),
            other => Err(Error::InvalidSpec(format!("unknown bundled spec {other:?}"))),
        }
    }

    /// Names of the bundled specs.
    pub const BUNDLED: [&'static str; 3] = ["square", "triangular", "unionjack"];

    /// Parses `{"vectors": [[1,0],[0,1],...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpecFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        Self::new(file.vectors)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SpecFile {
            vectors: self.vectors.clone(),
        })
        .expect("integer vectors always serialize")
    }

    pub fn with_singular_floor(mut self, floor: f64) -> Self {
        self.singular_floor = floor;
        self
    }

    pub fn vectors(&self) -> &[[i64; 2]] {
        &self.vectors
    }

    /// `|Φ|`.
    pub fn size(&self) -> usize {
        self.vectors.len()
    }

    /// `s̄ = max ‖s_ℓ‖`.
    pub fn sbar(&self) -> f64 {
        self.sbar
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    /// `det(SᵀS) = −d/4`.
    pub fn det_sts(&self) -> f64 {
        self.det_sts
    }

    pub fn singular_floor(&self) -> f64 {
        self.singular_floor
    }

    /// True when `{±s_ℓ}` is invariant under `(x, y) ↦ (x, −y)`, so that ψ and
    /// every `p_m` are even in each coordinate separately.
    pub fn reflection_symmetric(&self) -> bool {
        let mut signed: Vec<[i64; 2]> = self
            .vectors
            .iter()
            .flat_map(|v| [*v, [-v[0], -v[1]]])
            .collect();
        let mut reflected: Vec<[i64; 2]> = signed.iter().map(|v| [v[0], -v[1]]).collect();
        signed.sort_unstable();
        reflected.sort_unstable();
        signed == reflected
    }

    #[inline]
    fn dot(v: &[i64; 2], x: Point) -> f64 {
        v[0] as f64 * x[0] + v[1] as f64 * x[1]
    }

    /// `1 − (1/|Φ|) Σ cos(s_ℓ·x)`, no argument reduction.
    pub fn psi_cos_form(&self, x: Point) -> f64 {
        let s: f64 = self.vectors.iter().map(|v| Self::dot(v, x).cos()).sum();
        1.0 - s / self.size() as f64
    }

    /// `(2/|Φ|) Σ sin²(½ s_ℓ·x)`, no argument reduction.
    pub fn psi_sin_form(&self, x: Point) -> f64 {
        let s: f64 = self
            .vectors
            .iter()
            .map(|v| {
                let h = (0.5 * Self::dot(v, x)).sin();
                h * h
            })
            .sum();
        2.0 * s / self.size() as f64
    }

    /// ψ(x). Arguments are reduced modulo 2π first; the sine form is used
    /// within unit distance of the origin, where the cosine form cancels.
    pub fn psi(&self, x: Point) -> f64 {
        let r = [reduce_angle(x[0]), reduce_angle(x[1])];
        if r[0].hypot(r[1]) < 1.0 {
            self.psi_sin_form(r)
        } else {
            self.psi_cos_form(r)
        }
    }

    /// `f = 1/ψ`.
    pub fn f(&self, x: Point) -> Result<f64> {
        let p = self.psi(x);
        if p < self.singular_floor {
            return Err(Error::SingularPoint {
                x: x[0],
                y: x[1],
                value: p,
            });
        }
        Ok(1.0 / p)
    }

    /// The order-2m Taylor polynomial of ψ at the origin,
    /// `p_m(x) = (1/|Φ|) Σ_ℓ Σ_{j=1..m} (−1)^{j+1} (s_ℓ·x)^{2j} / (2j)!`.
    pub fn taylor_poly(&self, m: u32, x: Point) -> f64 {
        assert!(m >= 1, "Taylor order m must be at least 1");
        let mut total = 0.0;
        for v in &self.vectors {
            let u2 = Self::dot(v, x).powi(2);
            let mut term = 0.5 * u2;
            let mut acc = term;
            for j in 1..m {
                let j = j as f64;
                term *= -u2 / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
                acc += term;
            }
            total += acc;
        }
        total / self.size() as f64
    }

    /// `f_m = 1/p_m`. Fails where `p_m` is not safely positive.
    pub fn fm(&self, m: u32, x: Point) -> Result<f64> {
        let p = self.taylor_poly(m, x);
        if !(p >= self.singular_floor) {
            return Err(Error::SingularPoint {
                x: x[0],
                y: x[1],
                value: p,
            });
        }
        Ok(1.0 / p)
    }

    /// `f₁(x) = 2|Φ| / (a x² + b xy + c y²)` in closed form.
    #[inline]
    pub fn f1_closed(&self, x: Point) -> f64 {
        2.0 * self.size() as f64 / self.form.eval(x[0], x[1])
    }
}

/// Reduces an angle to `[−π, π]` with ties on `x/2π` rounded to even.
#[inline]
pub fn reduce_angle(x: f64) -> f64 {
    x - TAU * (x / TAU).round_ties_even()
}

/// Which half-width to use for the restricted box `D_n^β`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoxRadius {
    /// `√(5(1−β))/s̄`, the constant used to define the restricted sums.
    #[default]
    Narrow,
    /// `√(12(1−β))/s̄`, the radius of the disk on which `p_m ≥ β‖x‖²/(2|Φ|)`.
    Wide,
}

impl BoxRadius {
    pub fn half_width(self, beta: f64, sbar: f64) -> f64 {
        let k = match self {
            BoxRadius::Narrow => 5.0,
            BoxRadius::Wide => 12.0,
        };
        (k * (1.0 - beta)).sqrt() / sbar
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// One node `t_{j,k} = (2πj/n, 2πk/n)` with `j`, `k` reduced so that the node
/// lies in `[−π, π)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub j: i64,
    pub k: i64,
    pub t: Point,
}

/// The node set `D_n` (or `D_n^β` when a β is given).
#[derive(Debug, Clone, PartialEq)]
pub struct GridDomain {
    n: usize,
    beta: Option<f64>,
    /// Largest admissible `|j|` when restricted.
    bound: Option<i64>,
}

impl GridDomain {
    /// The unrestricted domain: all `n² − 1` nonzero nodes.
    pub fn full(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("grid needs n >= 2, got {n}")));
        }
        Ok(Self {
            n,
            beta: None,
            bound: None,
        })
    }

    /// `D_n^β` with the narrow box constant. `None` selects [`DEFAULT_BETA`].
    pub fn restricted(n: usize, beta: Option<f64>, spec: &LatticeSpec) -> Result<Self> {
        Self::with_radius(n, beta.unwrap_or(DEFAULT_BETA), spec.sbar(), BoxRadius::Narrow)
    }

    pub fn with_radius(n: usize, beta: f64, sbar: f64, radius: BoxRadius) -> Result<Self> {
        let mut dom = Self::full(n)?;
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::InvalidArgument(format!("beta must lie in (0,1), got {beta}")));
        }
        let h = radius.half_width(beta, sbar);
        let node = |j: i64| TAU * (j as f64 / n as f64);
        let mut bound = (h * n as f64 / TAU).floor() as i64;
        while node(bound + 1) <= h {
            bound += 1;
        }
        while bound > 0 && node(bound) > h {
            bound -= 1;
        }
        dom.beta = Some(beta);
        dom.bound = Some(bound);
        Ok(dom)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.n)
    }

    /// Largest admissible `|j|` for a restricted domain.
    pub fn index_bound(&self) -> Option<i64> {
        self.bound
    }

    /// Reduces an index in `0..n` to the representative with node in `[−π, π)`.
    #[inline]
    pub fn reduce_index(&self, j: usize) -> i64 {
        if 2 * j < self.n {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    #[inline]
    fn admits(&self, r: i64) -> bool {
        self.bound.map_or(true, |b| r.abs() <= b)
    }

    #[inline]
    pub fn node(&self, r: i64) -> f64 {
        TAU * (r as f64 / self.n as f64)
    }

    /// Nodes of row `k` (`k` in `0..n`), in increasing original `j`.
    pub fn row(&self, k: usize) -> impl Iterator<Item = GridPoint> + '_ {
        let rk = self.reduce_index(k);
        let keep_row = self.admits(rk);
        (0..self.n).filter_map(move |j| {
            let rj = self.reduce_index(j);
            if !keep_row || (j == 0 && k == 0) || !self.admits(rj) {
                return None;
            }
            Some(GridPoint {
                j: rj,
                k: rk,
                t: [self.node(rj), self.node(rk)],
            })
        })
    }

    /// All nodes, row by row (`k` outer, `j` inner, original index order).
    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        (0..self.n).flat_map(move |k| self.row(k))
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        match self.bound {
            None => self.n * self.n - 1,
            Some(b) => {
                let side = (2 * b + 1) as usize;
                side * side - 1
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Half side of the cell union `[−(2J+1)π/n, (2J+1)π/n]²` covered by a
    /// restricted domain.
    pub fn restricted_half_extent(&self) -> Option<f64> {
        self.bound.map(|b| (2 * b + 1) as f64 * PI / self.n as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn bundled() -> Vec<LatticeSpec> {
        vec![
            LatticeSpec::square(),
            LatticeSpec::triangular(),
            LatticeSpec::union_jack(),
        ]
    }

    #[test]
    fn derived_scalars() {
        let sq = LatticeSpec::square();
        assert_eq!((sq.form().a(), sq.form().b(), sq.form().c()), (1.0, 0.0, 1.0));
        assert_eq!(sq.det_sts(), 1.0);
        let tri = LatticeSpec::triangular();
        assert_eq!((tri.form().a(), tri.form().b(), tri.form().c()), (2.0, 2.0, 2.0));
        assert_eq!(tri.form().discriminant(), -12.0);
        assert_eq!(tri.det_sts(), 3.0);
        let b2 = LatticeSpec::union_jack();
        assert_eq!((b2.form().a(), b2.form().b(), b2.form().c()), (3.0, 0.0, 3.0));
        assert_eq!(b2.form().discriminant(), -36.0);
        assert_eq!(b2.sbar(), 2f64.sqrt());
        for s in bundled() {
            assert_eq!(s.form().discriminant(), -4.0 * s.det_sts());
            assert!(s.sbar() >= 1.0);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(LatticeSpec::new(vec![[1, 0]]).is_err());
        assert!(LatticeSpec::new(vec![[0, 1], [1, 0]]).is_err());
        assert!(LatticeSpec::new(vec![[1, 0], [0, 1], [0, 0]]).is_err());
        assert!(LatticeSpec::new(vec![[1, 0], [0, 1], [2_000_000, 1]]).is_err());
        assert!(LatticeSpec::named("g2").is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = LatticeSpec::from_json(r#"{"vectors": [[1,0],[0,1],[1,-1],[1,1]]}"#).unwrap();
        assert_eq!(s, LatticeSpec::union_jack());
        assert_eq!(LatticeSpec::from_json(&s.to_json()).unwrap(), s);
        assert!(LatticeSpec::from_json(r#"{"vectors": [[0,1],[1,0]]}"#).is_err());
    }

    #[test]
    fn reflection_symmetry() {
        assert!(LatticeSpec::square().reflection_symmetric());
        assert!(LatticeSpec::union_jack().reflection_symmetric());
        assert!(!LatticeSpec::triangular().reflection_symmetric());
        // b = 0 without the mirror symmetry
        let s = LatticeSpec::new(vec![[1, 0], [0, 1], [2, 1], [1, -2]]).unwrap();
        assert_eq!(s.form().b(), 0.0);
        assert!(!s.reflection_symmetric());
    }

    #[test]
    fn psi_examples() {
        let sq = LatticeSpec::square();
        assert_eq!(sq.psi([0.0, 0.0]), 0.0);
        assert_eq!(sq.psi([PI, PI]), 2.0);
        let b2 = LatticeSpec::union_jack();
        assert!((b2.psi([FRAC_PI_2, FRAC_PI_2]) - 1.0).abs() < 4.0 * f64::EPSILON);
    }

    #[test]
    fn f_examples() {
        let sq = LatticeSpec::square();
        assert_eq!(sq.f([PI, PI]).unwrap(), 0.5);
        assert!((sq.f([PI, 0.0]).unwrap() - 1.0).abs() < 4.0 * f64::EPSILON);
        let tri = LatticeSpec::triangular();
        let x = 2.0 * PI / 3.0;
        assert!((tri.f([x, x]).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(matches!(sq.f([0.0, 0.0]), Err(Error::SingularPoint { .. })));
        assert!(matches!(sq.f([TAU, -TAU]), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn taylor_examples() {
        let sq = LatticeSpec::square();
        assert_eq!(sq.taylor_poly(1, [1.0, 1.0]), 0.5);
        assert_eq!(sq.taylor_poly(2, [1.0, 0.0]), 0.5 * (0.5 - 1.0 / 24.0));
        assert!((sq.taylor_poly(2, [1.0, 0.0]) - 11.0 / 48.0).abs() < 1e-16);
        for s in bundled() {
            for m in 1..6 {
                assert_eq!(s.taylor_poly(m, [0.0, 0.0]), 0.0);
            }
        }
        // p₁ is the quadratic form over 2|Φ|
        for s in bundled() {
            let x = [0.3, -1.7];
            let q = s.form().eval(x[0], x[1]) / (2.0 * s.size() as f64);
            assert!((s.taylor_poly(1, x) - q).abs() < 1e-15);
        }
    }

    #[test]
    fn fm_examples() {
        let sq = LatticeSpec::square();
        assert_eq!(sq.fm(1, [1.0, 0.0]).unwrap(), 4.0);
        assert!((sq.fm(2, [1.0, 0.0]).unwrap() - 48.0 / 11.0).abs() < 1e-14);
        let b2 = LatticeSpec::union_jack();
        assert!((b2.fm(1, [1.0, 1.0]).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((b2.f1_closed([1.0, 1.0]) - 4.0 / 3.0).abs() < 1e-15);
        assert!(sq.fm(1, [0.0, 0.0]).is_err());
        // p₂ changes sign far from the origin
        assert!(sq.fm(2, [4.0, 0.0]).is_err());
    }

    #[test]
    fn grid_small() {
        let pts: Vec<_> = GridDomain::full(2).unwrap().points().collect();
        let t: Vec<Point> = pts.iter().map(|p| p.t).collect();
        assert_eq!(t, vec![[-PI, 0.0], [0.0, -PI], [-PI, -PI]]);
        assert_eq!(GridDomain::full(3).unwrap().points().count(), 8);
        assert!(GridDomain::full(1).is_err());
    }

    #[test]
    fn grid_restricted_matches_enumeration() {
        let sq = LatticeSpec::square();
        let dom = GridDomain::restricted(100, Some(0.5), &sq).unwrap();
        let h = 2.5f64.sqrt();
        // oracle: scan every node of [0, 2π)² and reduce by hand
        let mut expected = 0;
        for k in 0..100 {
            for j in 0..100 {
                if j == 0 && k == 0 {
                    continue;
                }
                let red = |i: i32| {
                    let t = TAU * i as f64 / 100.0;
                    if t >= PI {
                        t - TAU
                    } else {
                        t
                    }
                };
                if red(j).abs() <= h && red(k).abs() <= h {
                    expected += 1;
                }
            }
        }
        assert_eq!(dom.points().count(), expected);
        assert_eq!(dom.len(), expected);
        assert_eq!(expected, 51 * 51 - 1);
        assert!(dom.points().all(|p| p.t[0].abs() <= h && p.t[1].abs() <= h));
    }

    #[test]
    fn grid_defaults_and_radii() {
        let sq = LatticeSpec::square();
        let d = GridDomain::restricted(64, None, &sq).unwrap();
        assert_eq!(d.beta(), Some(DEFAULT_BETA));
        let wide = GridDomain::with_radius(64, 0.5, 1.0, BoxRadius::Wide).unwrap();
        assert!(wide.len() > d.len());
        assert!(GridDomain::with_radius(64, 1.0, 1.0, BoxRadius::Narrow).is_err());
        // the narrow box fits inside the wide disk
        let h = BoxRadius::Narrow.half_width(0.3, 1.0);
        assert!(h * 2f64.sqrt() <= BoxRadius::Wide.half_width(0.3, 1.0));
    }

    #[test]
    fn grid_counts() {
        for n in 2..=64 {
            let d = GridDomain::full(n).unwrap();
            assert_eq!(d.points().count(), n * n - 1);
            assert!(d
                .points()
                .all(|p| (-PI..PI).contains(&p.t[0]) && (-PI..PI).contains(&p.t[1])));
        }
    }

    fn spec_strategy() -> impl Strategy<Value = LatticeSpec> {
        prop_oneof![
            Just(LatticeSpec::square()),
            Just(LatticeSpec::triangular()),
            Just(LatticeSpec::union_jack()),
        ]
    }

    fn norm(x: Point) -> f64 {
        x[0].hypot(x[1])
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn psi_is_periodic(spec in spec_strategy(), x in -10.0..10.0f64, y in -10.0..10.0f64) {
            // x + 2π is itself rounded, so agreement is measured on ψ's natural scale
            let base = spec.psi([x, y]);
            let tol = 4.0 * f64::EPSILON * base.max(1.0);
            prop_assert!((spec.psi([x + TAU, y]) - base).abs() <= tol);
            prop_assert!((spec.psi([x, y + TAU]) - base).abs() <= tol);
        }

        #[test]
        fn psi_is_even(spec in spec_strategy(), x in -10.0..10.0f64, y in -10.0..10.0f64) {
            prop_assert_eq!(spec.psi([-x, -y]), spec.psi([x, y]));
        }

        #[test]
        fn psi_forms_agree(spec in spec_strategy(), x in -PI..PI, y in -PI..PI) {
            let a = spec.psi_cos_form([x, y]);
            let b = spec.psi_sin_form([x, y]);
            prop_assert!((a - b).abs() <= 4.0 * f64::EPSILON * a.max(1.0));
            prop_assert!((0.0..=2.0).contains(&spec.psi([x, y])));
        }

        #[test]
        fn psi_lower_bound(spec in spec_strategy(), r in 0.0..6f64.sqrt(), th in 0.0..TAU) {
            let x = [r * th.cos(), r * th.sin()];
            let lower = norm(x).powi(2) / (4.0 * spec.size() as f64);
            prop_assert!(spec.psi(x) >= lower * (1.0 - 1e-12));
        }

        #[test]
        fn psi_upper_bound(spec in spec_strategy(), x in -20.0..20.0f64, y in -20.0..20.0f64) {
            let upper = 0.5 * spec.sbar().powi(2) * norm([x, y]).powi(2);
            prop_assert!(spec.psi([x, y]) <= upper * (1.0 + 1e-12) + 1e-300);
        }

        #[test]
        fn taylor_remainder(spec in spec_strategy(), m in 1u32..=3, r in 0.0..3.0f64, th in 0.0..TAU) {
            let x = [r * th.cos(), r * th.sin()];
            let k = 2 * m as i32 + 2;
            let fact: f64 = (1..=k).map(f64::from).product();
            let bound = (spec.sbar() * r).powi(k) / fact;
            let (psi, p) = (spec.psi(x), spec.taylor_poly(m, x));
            prop_assert!((psi - p).abs() <= bound + 4.0 * f64::EPSILON * (psi.abs() + p.abs()));
        }

        #[test]
        fn p1_lower_bound(spec in spec_strategy(), x in -10.0..10.0f64, y in -10.0..10.0f64) {
            let lower = norm([x, y]).powi(2) / (2.0 * spec.size() as f64);
            prop_assert!(spec.taylor_poly(1, [x, y]) >= lower * (1.0 - 1e-12));
        }

        #[test]
        fn pm_lower_bound(
            spec in spec_strategy(),
            beta in prop::sample::select(vec![0.25, 0.5, 0.75]),
            m in 2u32..=4,
            u in 0.0..1.0f64,
            th in 0.0..TAU,
        ) {
            let radius = BoxRadius::Wide.half_width(beta, spec.sbar());
            let r = radius * u;
            let x = [r * th.cos(), r * th.sin()];
            let lower = beta * r * r / (2.0 * spec.size() as f64);
            prop_assert!(spec.taylor_poly(m, x) >= lower * (1.0 - 1e-12));
        }
    }

    #[test]
    fn quadratic_form_basics() {
        assert!(QuadraticForm::new(1.0, 2.0, 1.0).is_err());
        assert!(QuadraticForm::new(-1.0, 0.0, 1.0).is_err());
        let q = QuadraticForm::new(3.0, -1.0, 2.0).unwrap();
        assert!(!q.is_normalized());
        let n = q.normalized();
        assert!(n.is_normalized());
        assert_eq!((n.a(), n.b(), n.c()), (2.0, 1.0, 3.0));
        // μ solves c μ² + b μ + a = 0
        let mu = q.mu();
        let r = mu * mu * q.c() + mu * q.b() + q.a();
        assert!(r.norm() < 1e-15);
        assert!(mu.im > 0.0);
    }
}
