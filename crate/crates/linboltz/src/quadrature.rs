//! Integration rules: one-dimensional Gauss rules, product rules on the unit
//! sphere, graded polar rules on planes (resolving an integrable `|w|^{γ−2}`
//! singularity at the origin), and the truncated Cartesian velocity grid that
//! defines the discrete `L²` space.
//!
//! Rules are built so that the symmetries the kernels rely on survive
//! discretization exactly: Gauss–Legendre nodes are symmetrized about 0,
//! azimuthal node counts are even (so node sets are invariant under
//! `ω → −ω`), and local frames are chosen from a sign-canonical axis so that
//! `n` and `−n` produce the same frame.

use std::f64::consts::PI;

use gauss_quad::{GaussHermite, GaussLegendre};

use crate::error::{Error, Result};
use crate::gas_models::Vec3;

/// A one-dimensional rule `∫ f ≈ Σ w_k f(x_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    /// Nodes.
    pub nodes: Vec<f64>,
    /// Positive weights.
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// `n`-point Gauss–Legendre rule on `[−1, 1]`, with nodes and weights
    /// symmetrized so that `x_k = −x_{n−1−k}` holds bitwise.
    pub fn legendre(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRule("Gauss–Legendre rule needs at least one node".into()));
        }
        if n == 1 {
            return Ok(Self { nodes: vec![0.0], weights: vec![2.0] });
        }
        let rule = GaussLegendre::new(n).map_err(|e| Error::InvalidRule(e.to_string()))?;
        let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self::symmetrized(pairs))
    }

    /// `n`-point Gauss–Hermite rule for `∫ f(x) e^{−x²} dx`, symmetrized.
    pub fn hermite(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidRule("Gauss–Hermite rule needs at least one node".into()));
        }
        if n == 1 {
            return Ok(Self { nodes: vec![0.0], weights: vec![PI.sqrt()] });
        }
        let rule = GaussHermite::new(n).map_err(|e| Error::InvalidRule(e.to_string()))?;
        let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self::symmetrized(pairs))
    }

    fn symmetrized(pairs: Vec<(f64, f64)>) -> Self {
        let n = pairs.len();
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for k in 0..n {
            let (xa, wa) = pairs[k];
            let (xb, wb) = pairs[n - 1 - k];
            let x = 0.5 * (xa - xb);
            nodes[k] = if 2 * k + 1 == n { 0.0 } else { x };
            weights[k] = 0.5 * (wa + wb);
        }
        Self { nodes, weights }
    }

    /// Affine image of a `[−1, 1]` rule on `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> Self {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Self {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| half * w).collect(),
        }
    }

    /// Composite rule: a copy of this `[−1, 1]` rule on every panel between
    /// consecutive break points (empty panels are skipped).
    pub fn composite(&self, breaks: &[f64]) -> Self {
        let mut out = Self { nodes: Vec::new(), weights: Vec::new() };
        for win in breaks.windows(2) {
            if win[1] > win[0] {
                let p = self.on_interval(win[0], win[1]);
                out.nodes.extend(p.nodes);
                out.weights.extend(p.weights);
            }
        }
        out
    }

    /// Applies the rule to `f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Whether the rule has no nodes.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Unit vector `±n` with the sign fixed so that the component of largest
/// magnitude is positive (ties resolved by the lowest index). `n` and `−n`
/// map to the same vector.
pub fn canonical_axis(n: &Vec3) -> Vec3 {
    let mut idx = 0;
    for d in 1..3 {
        if n[d].abs() > n[idx].abs() {
            idx = d;
        }
    }
    if n[idx] < 0.0 {
        -n
    } else {
        *n
    }
}

/// Right-handed orthonormal frame `(e1, e2, e3)` with `e3` the normalized
/// `canonical_axis(n)`. Depends on `n` only up to sign and scale.
pub fn canonical_frame(n: &Vec3) -> (Vec3, Vec3, Vec3) {
    let e3 = canonical_axis(n).normalize();
    let mut idx = 0;
    for d in 1..3 {
        if e3[d].abs() < e3[idx].abs() {
            idx = d;
        }
    }
    let mut axis = Vec3::zeros();
    axis[idx] = 1.0;
    let e1 = axis.cross(&e3).normalize();
    let e2 = e3.cross(&e1);
    (e1, e2, e3)
}

/// Product rule on the unit sphere: Gauss–Legendre in `cos θ` times an even
/// number of equispaced azimuths `φ_q = (q + ½)·2π/Q`.
///
/// The node set is invariant under `ω → −ω`. Node coordinates are stored
/// relative to an abstract frame; [`SphereRule::oriented`] places the pole on
/// any axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    /// Polynomial degree integrated exactly.
    pub order: usize,
    /// Unit nodes in the reference frame (pole on `z`).
    pub nodes: Vec<Vec3>,
    /// Positive weights summing to `4π`.
    pub weights: Vec<f64>,
}

/// Builds a sphere rule exact for spherical polynomials of degree ≤ `order`.
pub fn sphere_rule(order: usize) -> Result<SphereRule> {
    if order == 0 {
        return Err(Error::InvalidRule("sphere rule order must be ≥ 1".into()));
    }
    if order > 200 {
        return Err(Error::InvalidRule(format!("sphere rule order {order} is not supported (max 200)")));
    }
    let n_theta = order / 2 + 1;
    let n_phi = 2 * (order / 2 + 1);
    let gl = GaussRule::legendre(n_theta)?;
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    let dphi = 2.0 * PI / n_phi as f64;
    for (&c, &wc) in gl.nodes.iter().zip(&gl.weights) {
        let s = (1.0 - c * c).max(0.0).sqrt();
        for q in 0..n_phi {
            let phi = (q as f64 + 0.5) * dphi;
            nodes.push(Vec3::new(s * phi.cos(), s * phi.sin(), c));
            weights.push(wc * dphi);
        }
    }
    Ok(SphereRule { order, nodes, weights })
}

impl SphereRule {
    /// Nodes rotated so the reference pole lies along `canonical_axis(axis)`,
    /// paired with their weights.
    pub fn oriented<'a>(&'a self, axis: &Vec3) -> impl Iterator<Item = (Vec3, f64)> + 'a {
        let (e1, e2, e3) = canonical_frame(axis);
        self.nodes.iter().zip(&self.weights).map(move |(p, &w)| (p.x * e1 + p.y * e2 + p.z * e3, w))
    }

    /// Applies the rule (reference orientation) to `f`.
    pub fn integrate<F: FnMut(&Vec3) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(p, &w)| w * f(p)).sum()
    }

    /// A rule with the same per-panel resolution, refined towards the pole for
    /// integrands peaked like `exp(a cos θ)`.
    ///
    /// The polar variable `s = (1 − cos θ)/2` is split at `4/a` and `16/a`
    /// (when inside `(0, 1)`), each panel carrying the Gauss–Legendre count of
    /// `self`; azimuths are unchanged. For `a ≤ 4` the rule is returned as is.
    pub fn graded_towards_pole(&self, a: f64) -> SphereRule {
        if a <= 4.0 || !a.is_finite() {
            return self.clone();
        }
        let n_theta = self.order / 2 + 1;
        let n_phi = 2 * (self.order / 2 + 1);
        let gl = GaussRule::legendre(n_theta).expect("order was validated on construction");
        let mut breaks = vec![0.0];
        breaks.extend([4.0 / a, 16.0 / a].into_iter().filter(|&b| b < 1.0));
        breaks.push(1.0);
        let panels = gl.composite(&breaks);
        let dphi = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(panels.len() * n_phi);
        let mut weights = Vec::with_capacity(panels.len() * n_phi);
        for (&s, &ws) in panels.nodes.iter().zip(&panels.weights) {
            let c = 1.0 - 2.0 * s;
            let sin = (1.0 - c * c).max(0.0).sqrt();
            for q in 0..n_phi {
                let phi = (q as f64 + 0.5) * dphi;
                nodes.push(Vec3::new(sin * phi.cos(), sin * phi.sin(), c));
                weights.push(2.0 * ws * dphi);
            }
        }
        SphereRule { order: self.order, nodes, weights }
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Whether the rule has no nodes.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Polar rule on a two-dimensional plane, graded towards the origin.
///
/// Radial nodes are `r = R_max t^p` with `p = 2/γ` and `t` Gauss–Legendre on
/// `(0, 1)`, which turns `∫ r^{γ−2} r dr` into a polynomial integral in `t`;
/// angles are an even number of equispaced `(q + ½)·2π/Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneRule {
    /// Radial node count.
    pub n_radial: usize,
    /// Angular node count (even).
    pub n_angular: usize,
    /// Outer radius.
    pub r_max: f64,
    /// Grading exponent `p`.
    pub grading: f64,
    /// Nodes `(x, y)` in plane coordinates.
    pub points: Vec<[f64; 2]>,
    /// Weights, including the polar Jacobian.
    pub weights: Vec<f64>,
    /// `|w|²` per node.
    pub radius_sq: Vec<f64>,
}

/// Default plane-rule radial count.
pub const DEFAULT_PLANE_RADIAL: usize = 32;
/// Default plane-rule angular count.
pub const DEFAULT_PLANE_ANGULAR: usize = 16;
/// Default plane-rule outer radius.
pub const DEFAULT_PLANE_RMAX: f64 = 8.0;

/// Builds a graded polar rule on the disk of radius `r_max`.
pub fn plane_rule(n_radial: usize, n_angular: usize, r_max: f64, gamma: f64) -> Result<PlaneRule> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidRule(format!("grading γ must lie in (0, 1), got {gamma}")));
    }
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::InvalidRule(format!("R_max must be positive, got {r_max}")));
    }
    if n_radial == 0 || n_angular < 2 || n_angular % 2 != 0 {
        return Err(Error::InvalidRule(format!(
            "plane rule needs n_radial ≥ 1 and an even n_angular ≥ 2, got {n_radial}×{n_angular}"
        )));
    }
    let p = 2.0 / gamma;
    let gl = GaussRule::legendre(n_radial)?.on_interval(0.0, 1.0);
    let dth = 2.0 * PI / n_angular as f64;
    let mut points = Vec::with_capacity(n_radial * n_angular);
    let mut weights = Vec::with_capacity(n_radial * n_angular);
    let mut radius_sq = Vec::with_capacity(n_radial * n_angular);
    for (&t, &wt) in gl.nodes.iter().zip(&gl.weights) {
        let r = r_max * t.powf(p);
        let w_r = wt * r_max * p * t.powf(p - 1.0) * r;
        for q in 0..n_angular {
            let th = (q as f64 + 0.5) * dth;
            points.push([r * th.cos(), r * th.sin()]);
            weights.push(w_r * dth);
            radius_sq.push(r * r);
        }
    }
    Ok(PlaneRule { n_radial, n_angular, r_max, grading: p, points, weights, radius_sq })
}

impl PlaneRule {
    /// Default rule: 32×16 nodes, `R_max = 8`, grading for `γ = 1/2`.
    pub fn default_rule() -> Self {
        plane_rule(DEFAULT_PLANE_RADIAL, DEFAULT_PLANE_ANGULAR, DEFAULT_PLANE_RMAX, 0.5)
            .expect("default plane rule parameters are valid")
    }

    /// Applies the rule to `f(x, y)`.
    pub fn integrate<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, &w)| w * f(p[0], p[1])).sum()
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Whether the rule has no nodes.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Uniform Cartesian midpoint grid on `[−R, R]³` with `N` nodes per axis.
///
/// Node `a = (ix·N + iy)·N + iz` sits at `−R + (i + ½)·2R/N` per axis; every
/// node carries the weight `(2R/N)³`.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityGrid {
    /// Nodes per axis (even).
    pub n: usize,
    /// Half-width of the box.
    pub r: f64,
    /// Node coordinates.
    pub nodes: Vec<Vec3>,
    /// Common node weight.
    pub weight: f64,
}

/// Builds the midpoint velocity grid; `n` must be even and positive.
pub fn build_grid(n: usize, r: f64) -> Result<VelocityGrid> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::OddGrid(n));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidRule(format!("grid half-width R must be positive, got {r}")));
    }
    let h = 2.0 * r / n as f64;
    let coord: Vec<f64> = (0..n)
        .map(|k| {
            // Mirror-symmetric by construction: coordinate k is minus coordinate n−1−k.
            let c = (k as f64 + 0.5 - 0.5 * n as f64) * h;
            if k < n / 2 {
                c
            } else {
                -((n - 1 - k) as f64 + 0.5 - 0.5 * n as f64) * h
            }
        })
        .collect();
    let mut nodes = Vec::with_capacity(n * n * n);
    for &x in &coord {
        for &y in &coord {
            for &z in &coord {
                nodes.push(Vec3::new(x, y, z));
            }
        }
    }
    Ok(VelocityGrid { n, r, nodes, weight: h * h * h })
}

impl VelocityGrid {
    /// Number of nodes `N³`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Whether the grid is empty (never true for a constructed grid).
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Spacing `2R/N`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.r / self.n as f64
    }

    /// Index of the node `−ξ_a`.
    pub fn mirror_index(&self, a: usize) -> usize {
        self.len() - 1 - a
    }

    /// Applies the grid rule to `f`.
    pub fn integrate<F: FnMut(&Vec3) -> f64>(&self, mut f: F) -> f64 {
        self.weight * self.nodes.iter().map(|x| f(x)).sum::<f64>()
    }
}

/// Element `index` (≥ 1 recommended) of the van der Corput sequence in `base`.
pub fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

/// `count` deterministic low-discrepancy points in the closed ball of radius
/// `radius`, from the Halton sequence in bases 2, 3, 5 (volume-uniform).
pub fn halton_ball(count: usize, radius: f64) -> Vec<Vec3> {
    (1..=count as u64)
        .map(|k| {
            let rad = radius * halton(k, 2).cbrt();
            let c = 2.0 * halton(k, 3) - 1.0;
            let phi = 2.0 * PI * halton(k, 5);
            let s = (1.0 - c * c).max(0.0).sqrt();
            Vec3::new(rad * s * phi.cos(), rad * s * phi.sin(), rad * c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_is_symmetric() {
        for n in 1..12 {
            let g = GaussRule::legendre(n).unwrap();
            for k in 0..n {
                assert_eq!(g.nodes[k], -g.nodes[n - 1 - k]);
                assert_eq!(g.weights[k], g.weights[n - 1 - k]);
            }
            assert!((g.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn hermite_moments() {
        let g = GaussRule::hermite(20).unwrap();
        assert!((g.integrate(|_| 1.0) - PI.sqrt()).abs() < 1e-12);
        assert!((g.integrate(|x| x * x) - 0.5 * PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sphere_rule_basics() {
        assert!(sphere_rule(0).is_err());
        for order in [1, 2, 5, 6, 11] {
            let s = sphere_rule(order).unwrap();
            assert!((s.integrate(|_| 1.0) - 4.0 * PI).abs() < 1e-12);
            for p in &s.nodes {
                assert!((p.norm() - 1.0).abs() < 1e-14);
            }
        }
        let s = sphere_rule(6).unwrap();
        assert!(s.integrate(|p| p.z).abs() < 1e-14);
        assert!((s.integrate(|p| p.z * p.z) - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_frame_ignores_sign() {
        let n = Vec3::new(0.3, -0.8, 0.2).normalize();
        let a = canonical_frame(&n);
        let b = canonical_frame(&(-n));
        assert_eq!(a, b);
        assert!(a.0.dot(&a.2).abs() < 1e-15 && a.1.dot(&a.2).abs() < 1e-15);
    }

    #[test]
    fn plane_rule_area_and_singularity() {
        let p = plane_rule(32, 16, 2.0, 0.5).unwrap();
        assert!((p.integrate(|_, _| 1.0) - 4.0 * PI).abs() < 1e-10);
        let unit = plane_rule(32, 16, 1.0, 0.5).unwrap();
        let sing = unit.integrate(|x, y| (x * x + y * y).sqrt().powf(-1.5));
        assert!((sing / (4.0 * PI) - 1.0).abs() < 1e-3);
        assert!(plane_rule(8, 8, 1.0, 1.0).is_err());
    }

    #[test]
    fn grid_basics() {
        let g = build_grid(2, 1.0).unwrap();
        assert_eq!(g.len(), 8);
        assert_eq!(g.weight, 1.0);
        for x in &g.nodes {
            assert_eq!(x.abs(), Vec3::new(0.5, 0.5, 0.5));
        }
        assert!(matches!(build_grid(3, 1.0), Err(Error::OddGrid(3))));
        let g = build_grid(6, 2.0).unwrap();
        for a in 0..g.len() {
            assert_eq!(g.nodes[g.mirror_index(a)], -g.nodes[a]);
        }
    }

    #[test]
    fn halton_ball_in_radius() {
        let pts = halton_ball(64, 3.0);
        assert_eq!(pts.len(), 64);
        assert!(pts.iter().all(|p| p.norm() <= 3.0 + 1e-12));
        assert_eq!(halton(1, 2), 0.5);
        assert_eq!(halton(3, 3), 1.0 / 9.0);
    }
}
