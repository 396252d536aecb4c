//! Numerics of the Vershik-Kerov-Logan-Shepp limit shape: the function
//! `Ω`, rotated height profiles of Young diagrams, the area function `G`
//! and the constant `θ` solving `G(2√x) = (2+x)/12`.
//!
//! Profiles use the rigid (area-preserving) rotation convention: a unit
//! box has diagonal `√2`, breakpoints sit at integer multiples of
//! `1/√2`, and the area identity `∫(L_λ(x) − |x|) dx = n` is exact.

use thiserror::Error;

use crate::subseq::Shape;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShapeError {
    #[error("shape has {actual} boxes, expected {expected}")]
    SizeMismatch { actual: u64, expected: u64 },
    #[error("domain error: {0}")]
    DomainError(String),
}

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// The limit shape `Ω(s) = (2/π)(s·arcsin s + √(1−s²))` on `[−1,1]`,
/// `|s|` outside.
pub fn omega(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        s.abs()
    } else {
        std::f64::consts::FRAC_2_PI * (s * s.asin() + (1.0 - s * s).sqrt())
    }
}

/// Piecewise-linear rotated height profile of a Young diagram.
///
/// Breakpoints sit at `x_k = k/√2` for diagonal index
/// `k ∈ [−λ′₁, λ₁]`, with height `(|k| + 2·d_λ(k))/√2` where `d_λ(k)`
/// counts boxes on diagonal `k`; the profile continues as `|x|` outside.
/// Consecutive segments have slope exactly `±1`.
#[derive(Debug, Clone)]
pub struct ScaledProfile {
    /// Leftmost diagonal index, `−λ′₁`.
    k_min: i64,
    /// Integer heights `H(k) = |k| + 2 d_λ(k)` for `k = k_min ..= λ₁`.
    heights: Vec<u64>,
    n: u64,
}

impl ScaledProfile {
    pub fn from_shape(shape: &Shape) -> Self {
        let rows = shape.num_rows() as i64;
        let cols = shape.first_part() as i64;
        let parts = shape.parts();
        // Rows of λ extend toward negative x (the convention that makes
        // Σ(λ_i − γ√n)₊ the area cut off by the line x ↦ |x + γ/2| + γ/2):
        // the box in row i, column j sits on diagonal k = i − j, so
        // d(k) = card{i ≥ 1 : 1 ≤ i − k ≤ λ_i}, found by binary search
        // on the strictly decreasing i ↦ λ_i − i.
        let mut heights = Vec::with_capacity((rows + cols + 1) as usize);
        for k in -cols..=rows {
            let lower = 1.max(1 + k);
            let upper = partition_point(parts.len(), |i| {
                parts[i] as i64 - (i as i64 + 1) >= -k
            });
            let d = (upper as i64 - lower + 1).max(0) as u64;
            let h = k.unsigned_abs() + 2 * d;
            if let Some(&prev) = heights.last() {
                debug_assert_eq!((h as i64 - prev as i64).abs(), 1, "slope must be ±1");
            }
            heights.push(h);
        }
        ScaledProfile {
            k_min: -cols,
            heights,
            n: shape.n(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Profile vertices `(x, height)` in rotated coordinates.
    pub fn breakpoints(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.heights
            .iter()
            .enumerate()
            .map(move |(i, &h)| ((self.k_min + i as i64) as f64 / SQRT2, h as f64 / SQRT2))
    }

    fn x_min(&self) -> f64 {
        self.k_min as f64 / SQRT2
    }

    fn x_max(&self) -> f64 {
        (self.k_min + self.heights.len() as i64 - 1) as f64 / SQRT2
    }

    /// `L_λ(x)`: linear interpolation between breakpoints, `|x|` outside.
    pub fn height(&self, x: f64) -> f64 {
        let t = x * SQRT2 - self.k_min as f64;
        if t <= 0.0 || t >= (self.heights.len() - 1) as f64 {
            return x.abs();
        }
        let i = t.floor() as usize;
        let frac = t - i as f64;
        let h = self.heights[i] as f64 * (1.0 - frac) + self.heights[i + 1] as f64 * frac;
        h / SQRT2
    }

    /// Exact piecewise-linear quadrature of `∫(L_λ(x) − |x|) dx`; equals
    /// `n` up to rounding.
    pub fn area_above_diagonal(&self) -> f64 {
        // In integer diagonal coordinates the integrand at k is
        // (H(k) − |k|)/√2 and the spacing is 1/√2, so the trapezoid sum
        // is Σ (g_k + g_{k+1}) / 4 with g_k = H(k) − |k|, an integer.
        let mut total: u64 = 0;
        for (i, w) in self.heights.windows(2).enumerate() {
            let k = self.k_min + i as i64;
            let g0 = w[0] - k.unsigned_abs();
            let g1 = w[1] - (k + 1).unsigned_abs();
            total += g0 + g1;
        }
        total as f64 / 4.0
    }
}

fn partition_point(len: usize, pred: impl Fn(usize) -> bool) -> usize {
    // number of leading indices satisfying pred (pred is monotone)
    let (mut lo, mut hi) = (0, len);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `L_λ(x)` for a shape, one-shot convenience over [`ScaledProfile`].
pub fn height_function(shape: &Shape, x: f64) -> f64 {
    ScaledProfile::from_shape(shape).height(x)
}

const SUP_DISTANCE_GRID: usize = 10_000;

/// `sup_s |L_λ(s√(2n))/√(2n) − Ω(s)|`, evaluated at all profile
/// breakpoints, at `±1`, and on a uniform grid over `[−S, S]`.
pub fn sup_distance_to_omega(shape: &Shape, n: u64) -> Result<f64, ShapeError> {
    if shape.n() != n {
        return Err(ShapeError::SizeMismatch {
            actual: shape.n(),
            expected: n,
        });
    }
    let profile = ScaledProfile::from_shape(shape);
    let scale = (2.0 * n as f64).sqrt();
    let ltilde = |s: f64| profile.height(s * scale) / scale;
    let span = 2.0f64
        .max(shape.first_part() as f64 / scale)
        .max(shape.num_rows() as f64 / scale);
    let mut sup = 0.0f64;
    let mut check = |s: f64| {
        let d = (ltilde(s) - omega(s)).abs();
        if d > sup {
            sup = d;
        }
    };
    for (x, _) in profile.breakpoints() {
        check(x / scale);
    }
    check(-1.0);
    check(1.0);
    for i in 0..=SUP_DISTANCE_GRID {
        check(-span + 2.0 * span * i as f64 / SUP_DISTANCE_GRID as f64);
    }
    Ok(sup)
}

const SIMPSON_TOL: f64 = 1e-9;

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if a >= b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 48)
}

/// The area function of the limit shape:
/// `G(γ) = ∫_{−1}^{1} (Ω(s) − |s + γ/2| − γ/2)₊ ds`, decreasing from
/// `1/2` at `γ = 0` to `0` at `γ = 2`.
///
/// The integrand has kinks at `s = −γ/2` and at the root of
/// `Ω(s) = |s + γ/2| + γ/2`; both are isolated as panel boundaries
/// before adaptive Simpson quadrature is applied.
pub fn g_function(gamma: f64) -> Result<f64, ShapeError> {
    if !(0.0..=2.0).contains(&gamma) {
        return Err(ShapeError::DomainError(format!(
            "gamma = {gamma} outside [0, 2]"
        )));
    }
    let half = gamma / 2.0;
    let f = move |s: f64| omega(s) - (s + half).abs() - half;
    // f vanishes at s = −1, rises to its maximum at s = −γ/2 and then
    // decreases; the positivity region is (−1, r).
    if f(-half) <= 0.0 {
        return Ok(0.0);
    }
    let r = bisect_root(&f, -half, 1.0);
    let value = adaptive_simpson(&|s| f(s).max(0.0), -1.0, -half, SIMPSON_TOL)
        + adaptive_simpson(&|s| f(s).max(0.0), -half, r, SIMPSON_TOL);
    Ok(value)
}

/// Root of a decreasing function with `f(a) >= 0`; returns `b` when `f`
/// stays nonnegative on the whole bracket.
fn bisect_root(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if f(b) >= 0.0 {
        return b;
    }
    let (mut lo, mut hi) = (a, b);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

const G_INVERSE_TOL: f64 = 1e-8;

/// Inverse of [`g_function`] on `[0, 1/2]`, by bisection.
pub fn g_inverse(y: f64) -> Result<f64, ShapeError> {
    if !(0.0..=0.5 + 1e-12).contains(&y) {
        return Err(ShapeError::DomainError(format!(
            "y = {y} outside [0, 1/2]"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 2.0f64); // G(lo) >= y >= G(hi)
    while hi - lo > G_INVERSE_TOL {
        let mid = 0.5 * (lo + hi);
        if g_function(mid)? >= y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Solution of `G(2√x) = (2+x)/12`.
///
/// `x ↦ G(2√x)` is decreasing and `x ↦ (2+x)/12` increasing on `[0, 1]`,
/// with `G(0) = 1/2 > 2/12` and `G(2) = 0 < 3/12`, so the crossing is
/// unique and interior.
pub fn solve_theta() -> f64 {
    let h = |x: f64| g_function(2.0 * x.sqrt()).expect("2√x in [0,2]") - (2.0 + x) / 12.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if h(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Plus-part area of a shape against the slope-`γ` line, by two routes:
/// the direct sum `Σᵢ (λᵢ − γ√n)₊ / (2n)` and the exact
/// piecewise-linear quadrature
/// `∫ (L̃(s) − |s + γ/2| − γ/2)₊ ds` over the scaled profile.
/// The two agree up to floating-point rounding.
pub fn plus_part_area(shape: &Shape, n: u64, gamma: f64) -> Result<(f64, f64), ShapeError> {
    if shape.n() != n {
        return Err(ShapeError::SizeMismatch {
            actual: shape.n(),
            expected: n,
        });
    }
    if gamma < 0.0 {
        return Err(ShapeError::DomainError(format!("gamma = {gamma} < 0")));
    }
    let nf = n as f64;
    let threshold = gamma * nf.sqrt();
    let direct: f64 = shape
        .parts()
        .iter()
        .map(|&p| (p as f64 - threshold).max(0.0))
        .sum::<f64>()
        / (2.0 * nf);

    let profile = ScaledProfile::from_shape(shape);
    let scale = (2.0 * nf).sqrt();
    let half = gamma / 2.0;
    // g(s) = L̃(s) − |s + γ/2| − γ/2 is piecewise linear with kinks only
    // at scaled breakpoints and at s = −γ/2; integrate (g)₊ exactly.
    let g = |s: f64| profile.height(s * scale) / scale - (s + half).abs() - half;
    let mut nodes: Vec<f64> = profile.breakpoints().map(|(x, _)| x / scale).collect();
    if -half > profile.x_min() / scale && -half < profile.x_max() / scale {
        nodes.push(-half);
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }
    let mut quadrature = 0.0;
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (ga, gb) = (g(a), g(b));
        quadrature += if ga >= 0.0 && gb >= 0.0 {
            0.5 * (ga + gb) * (b - a)
        } else if ga <= 0.0 && gb <= 0.0 {
            0.0
        } else {
            // linear sign change: triangle on the positive side
            let root = a + (b - a) * ga / (ga - gb);
            if ga > 0.0 {
                0.5 * ga * (root - a)
            } else {
                0.5 * gb * (b - root)
            }
        };
    }
    Ok((direct, quadrature))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::{sample_uniform_with, RngStream};
    use crate::subseq::rsk_shape;
    use rand::Rng;

    fn shape(parts: &[u32]) -> Shape {
        Shape::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn omega_values() {
        assert!((omega(0.0) - std::f64::consts::FRAC_2_PI).abs() < 1e-15);
        assert_eq!(omega(1.0), 1.0);
        assert_eq!(omega(2.0), 2.0);
        assert_eq!(omega(-1.5), 1.5);
        // (2/π)(0.5·arcsin 0.5 + √0.75)
        assert!((omega(0.5) - 0.7179955620884587).abs() < 1e-12);
        assert!((omega(-0.5) - omega(0.5)).abs() < 1e-15);
    }

    #[test]
    fn omega_dominates_abs() {
        for i in 0..=400 {
            let s = -2.0 + i as f64 / 100.0;
            if s.abs() < 1.0 {
                assert!(omega(s) > s.abs());
            } else {
                assert_eq!(omega(s), s.abs());
            }
        }
    }

    #[test]
    fn profile_single_box() {
        let p = ScaledProfile::from_shape(&shape(&[1]));
        assert!((p.height(0.0) - SQRT2).abs() < 1e-15);
        assert_eq!(p.height(3.0), 3.0);
        assert_eq!(p.height(-2.5), 2.5);
        assert!((p.area_above_diagonal() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn profile_staircase() {
        let p = ScaledProfile::from_shape(&shape(&[2, 1]));
        assert!((p.area_above_diagonal() - 3.0).abs() < 1e-15);
        // outside the support the profile is |x|
        assert_eq!(height_function(&shape(&[2, 1]), 5.0), 5.0);
    }

    #[test]
    fn profile_area_matches_n_for_random_shapes() {
        let mut rng = RngStream::new(31, 0).rng();
        for _ in 0..100 {
            let n = rng.gen_range(1..=400);
            let word = sample_uniform_with(n, &mut rng);
            let sh = rsk_shape(&word);
            let p = ScaledProfile::from_shape(&sh);
            let area = p.area_above_diagonal();
            assert!((area - n as f64).abs() <= 1e-8 * n as f64, "area {area} vs n {n}");
        }
    }

    #[test]
    fn sup_distance_single_box() {
        let d = sup_distance_to_omega(&shape(&[1]), 1).unwrap();
        assert!((d - (1.0 - std::f64::consts::FRAC_2_PI)).abs() < 1e-6, "d = {d}");
        assert!(sup_distance_to_omega(&shape(&[1]), 2).is_err());
    }

    #[test]
    fn sup_distance_shrinks_for_plancherel_shapes() {
        let mut rng = RngStream::new(77, 0).rng();
        let sh = rsk_shape(&sample_uniform_with(20_000, &mut rng));
        let d = sup_distance_to_omega(&sh, 20_000).unwrap();
        assert!(d < 0.1, "d = {d}");
    }

    #[test]
    fn g_endpoints() {
        assert!((g_function(0.0).unwrap() - 0.5).abs() < 1e-6);
        assert!(g_function(2.0).unwrap() < 1e-9);
        assert!(g_function(-0.1).is_err());
        assert!(g_function(2.1).is_err());
    }

    #[test]
    fn g_is_strictly_decreasing() {
        let mut prev = f64::INFINITY;
        for i in 0..=200 {
            let gamma = 2.0 * i as f64 / 200.0;
            let v = g_function(gamma).unwrap();
            assert!(v < prev, "not decreasing at gamma = {gamma}");
            prev = v;
        }
    }

    #[test]
    fn g_inverse_round_trip() {
        assert!(g_inverse(0.5).unwrap() < 1e-6);
        assert!((g_inverse(0.0).unwrap() - 2.0).abs() < 1e-6);
        for i in 0..=100 {
            let y = 0.5 * i as f64 / 100.0;
            let gamma = g_inverse(y).unwrap();
            assert!((g_function(gamma).unwrap() - y).abs() < 1e-7, "y = {y}");
        }
    }

    #[test]
    fn theta_solution() {
        let theta = solve_theta();
        let two_sqrt = 2.0 * theta.sqrt();
        assert!((0.5635..=0.5645).contains(&two_sqrt), "2√θ = {two_sqrt}");
        assert!((theta - 0.0795).abs() < 0.0005, "θ = {theta}");
        let residual = (g_function(two_sqrt).unwrap() - (2.0 + theta) / 12.0).abs();
        assert!(residual < 1e-9, "residual = {residual}");
    }

    #[test]
    fn plus_part_area_examples() {
        // γ = 0: Σλᵢ/(2n) = 1/2 exactly
        let (direct, quad) = plus_part_area(&shape(&[2, 1]), 3, 0.0).unwrap();
        assert_eq!(direct, 0.5);
        assert!((quad - 0.5).abs() < 1e-6);

        let (direct, quad) = plus_part_area(&shape(&[2, 1]), 3, 0.5).unwrap();
        let expected = ((2.0 - 0.5 * 3.0f64.sqrt()) + (1.0 - 0.5 * 3.0f64.sqrt())) / 6.0;
        assert!((direct - expected).abs() < 1e-12);
        assert!((quad - direct).abs() < 1e-6);

        // γ√n beyond λ₁: both routes vanish
        let (direct, quad) = plus_part_area(&shape(&[2, 1]), 3, 1.5).unwrap();
        assert_eq!(direct, 0.0);
        assert_eq!(quad, 0.0);
    }

    #[test]
    fn plus_part_routes_agree_on_random_shapes() {
        let mut rng = RngStream::new(55, 0).rng();
        for _ in 0..100 {
            let n = rng.gen_range(1..=300);
            let sh = rsk_shape(&sample_uniform_with(n, &mut rng));
            for gamma in [0.0, 0.3, 1.0, 1.7, 2.5] {
                let (direct, quad) = plus_part_area(&sh, n as u64, gamma).unwrap();
                assert!((direct - quad).abs() < 1e-6, "n={n} γ={gamma}: {direct} vs {quad}");
            }
        }
    }

    #[test]
    fn figure_profile_shape() {
        // the 16-box staircase (7,5,2,1,1): structural checks only
        let sh = shape(&[7, 5, 2, 1, 1]);
        let p = ScaledProfile::from_shape(&sh);
        assert!((p.area_above_diagonal() - 16.0).abs() < 1e-12);
        let pts: Vec<(f64, f64)> = p.breakpoints().collect();
        assert_eq!(pts.len(), (7 + 5 + 1) as usize);
        for w in pts.windows(2) {
            let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
            assert!((slope.abs() - 1.0).abs() < 1e-12);
        }
    }
}
