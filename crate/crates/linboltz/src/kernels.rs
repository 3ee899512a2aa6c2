//! Pointwise evaluation of the reduced collision kernels of the linearized
//! operator, `K h(ξ) = Σ_j ∫ k_ij(ξ, ξ*) h_j(ξ*) dξ*`, for both model families.
//!
//! Polyatomic gas, components `i, j`:
//! * loss kernel `k1_ij = (M_i M_j*)^{1/2} |g| Σ_kl ∫_{S²} σ_ij^kl dω`;
//! * gain kernel `k2_ij`, a sum over channels of integrals over the plane
//!   orthogonal to `n = g/|g|` (see [`PolyKernels::k2`]);
//! * `k_ij = k2_ij − k1_ij`.
//!
//! Mixture, species `α, β`:
//! * loss kernel `k1_αβ = (M_α M_β*)^{1/2} |g| ∫_{S²} σ_αβ dω`;
//! * same-argument gain `k_αβ^(α)` (plane integral, acts on `h_α`);
//! * cross gain `k2_αβ^(β)` (sphere integral for distinct masses, plane
//!   integral for equal masses; acts on `h_β`);
//! * block kernel `k_αα = Σ_β k_αβ^(α) + k2_αα^(α) − k1_αα` and
//!   `k_αβ = k2_αβ^(β) − k1_αβ` for `α ≠ β`.
//!
//! Every evaluation is built from rules whose node sets are invariant under
//! the substitutions relating `k(ξ, ξ*)` to its swapped counterpart, so the
//! swap symmetries hold to rounding for the discrete values themselves.

use std::f64::consts::PI;

use crate::cross_sections::{CrossSectionModel, MixCrossSection, PolyCrossSection};
use crate::error::{Error, Result};
use crate::gas_models::{MixtureSpec, PolyatomicGas, Vec3};
use crate::quadrature::{canonical_frame, plane_rule, sphere_rule, PlaneRule, SphereRule};

/// Default sphere-rule degree used by the kernels.
pub const DEFAULT_SPHERE_ORDER: usize = 24;

/// Quadrature rules shared by all kernel evaluations.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelRules {
    /// Rule for `∫_{S²} dω`.
    pub sphere: SphereRule,
    /// Rule for integrals over planes orthogonal to `g`.
    pub plane: PlaneRule,
}

impl KernelRules {
    /// Builds rules from their parameters.
    pub fn new(sphere_order: usize, n_radial: usize, n_angular: usize, r_max: f64, gamma: f64) -> Result<Self> {
        Ok(Self { sphere: sphere_rule(sphere_order)?, plane: plane_rule(n_radial, n_angular, r_max, gamma)? })
    }
}

impl Default for KernelRules {
    fn default() -> Self {
        Self {
            sphere: sphere_rule(DEFAULT_SPHERE_ORDER).expect("default sphere order is valid"),
            plane: PlaneRule::default_rule(),
        }
    }
}

/// Geometry of a velocity pair `(ξ, ξ*)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionKinematics {
    /// Relative velocity `g = ξ − ξ*`.
    pub g: Vec3,
    /// `|g|`.
    pub g_norm: f64,
    /// Unit direction `n = g/|g|`.
    pub n: Vec3,
    /// Mean velocity `G = (ξ + ξ*)/2`.
    pub center: Vec3,
}

impl CollisionKinematics {
    /// Kinematics of the pair; fails for coincident velocities.
    pub fn new(xi: &Vec3, xi_star: &Vec3) -> Result<Self> {
        let g = xi - xi_star;
        let g_norm = g.norm();
        if !(g_norm > 0.0) {
            return Err(Error::CoincidentVelocities);
        }
        Ok(Self { g, g_norm, n: g / g_norm, center: 0.5 * (xi + xi_star) })
    }

    /// Line shift `χ = ΔI/(m|g|)` of a polyatomic gain channel.
    pub fn line_shift(&self, m: f64, delta_i: f64) -> f64 {
        delta_i / (m * self.g_norm)
    }

    /// Post-collision velocities `(ξ′, ξ*′) = (ξ* + w − χn, ξ + w − χn)` of the
    /// polyatomic gain parametrization, for `w ⊥ n`.
    pub fn poly_gain_post(&self, xi: &Vec3, xi_star: &Vec3, w: &Vec3, chi: f64) -> (Vec3, Vec3) {
        let shift = w - chi * self.n;
        (xi_star + shift, xi + shift)
    }

    /// Centre `X = (m_α ξ − m_β ξ*)/(m_α − m_β)` of the sphere carrying the
    /// cross-gain collision partners (distinct masses only).
    pub fn mixture_center(xi: &Vec3, xi_star: &Vec3, m_alpha: f64, m_beta: f64) -> Vec3 {
        (m_alpha * xi - m_beta * xi_star) / (m_alpha - m_beta)
    }
}

/// In-plane data of a pair: frame coordinates of `a = (ξ + ξ*)_⊥/2` and the
/// normal component `b = n·(ξ + ξ*)/2`.
struct PlaneGeometry {
    ax: f64,
    ay: f64,
    asq: f64,
    b: f64,
}

impl PlaneGeometry {
    fn new(kin: &CollisionKinematics) -> Self {
        let (e1, e2, _) = canonical_frame(&kin.n);
        let ax = kin.center.dot(&e1);
        let ay = kin.center.dot(&e2);
        Self { ax, ay, asq: ax * ax + ay * ay, b: kin.n.dot(&kin.center) }
    }

    /// `|w|²` at plane node `u` with `w = u − a`.
    #[inline]
    fn w_sq(&self, p: &[f64; 2], usq: f64) -> f64 {
        (usq - 2.0 * (p[0] * self.ax + p[1] * self.ay) + self.asq).max(0.0)
    }
}

/// Plane weights multiplied by `exp(−(m/2)|u|²)`.
fn gaussian_plane_weights(plane: &PlaneRule, m: f64) -> Vec<f64> {
    plane.weights.iter().zip(&plane.radius_sq).map(|(w, r2)| w * (-0.5 * m * r2).exp()).collect()
}

/// Kernel evaluator for a polyatomic gas with a fixed cross section and
/// quadrature rules. Construction caches the rule-dependent factors; each
/// evaluation is pure.
#[derive(Debug, Clone)]
pub struct PolyKernels<'a, S> {
    gas: &'a PolyatomicGas,
    sigma: S,
    rules: &'a KernelRules,
    sphere_sum: f64,
    plane_gauss: Vec<f64>,
    level_boltzmann: Vec<f64>,
}

impl<'a, S: PolyCrossSection> PolyKernels<'a, S> {
    /// Binds gas, cross section and rules.
    pub fn new(gas: &'a PolyatomicGas, sigma: S, rules: &'a KernelRules) -> Self {
        Self {
            gas,
            sigma,
            rules,
            sphere_sum: rules.sphere.weights.iter().sum(),
            plane_gauss: gaussian_plane_weights(&rules.plane, gas.mass()),
            level_boltzmann: gas.levels().iter().map(|e| (-0.5 * e).exp()).collect(),
        }
    }

    /// The gas.
    pub fn gas(&self) -> &PolyatomicGas {
        self.gas
    }

    /// The cross section.
    pub fn sigma(&self) -> &S {
        &self.sigma
    }

    /// The rules.
    pub fn rules(&self) -> &KernelRules {
        self.rules
    }

    fn check(&self, i: usize, j: usize, xi: &Vec3, xi_star: &Vec3) -> Result<CollisionKinematics> {
        for c in [i, j] {
            if c >= self.gas.r() {
                return Err(Error::IndexOutOfRange { index: c, count: self.gas.r() });
            }
        }
        CollisionKinematics::new(xi, xi_star)
    }

    /// Loss kernel `k1_ij(ξ, ξ*)`.
    pub fn k1(&self, i: usize, j: usize, xi: &Vec3, xi_star: &Vec3) -> Result<f64> {
        let kin = self.check(i, j, xi, xi_star)?;
        Ok(self.k1_kin(i, j, xi, xi_star, &kin))
    }

    /// Gain kernel
    /// `k2_ij = 8 φ_i^{1/2} φ_j^{−1/2} Σ_kl ∫_{w⊥n} φ_k |g̃| / (|g*||g|) 1_{m|g̃|²>4ΔI}
    /// (M_k(ξ′) M_l(ξ*′) / (φ_k φ_l))^{1/2} σ_ik^jl(|g̃|) dw`
    /// with `ΔI = ΔI_ik^jl`, `χ = ΔI/(m|g|)`, `ξ′ = ξ* + w − χn`,
    /// `ξ*′ = ξ + w − χn`, `|g̃|² = (|g| + χ)² + |w|²` and
    /// `|g*|² = (|g| − χ)² + |w|²`.
    ///
    /// The plane rule is centred where the Maxwellian factor peaks.
    pub fn k2(&self, i: usize, j: usize, xi: &Vec3, xi_star: &Vec3) -> Result<f64> {
        let kin = self.check(i, j, xi, xi_star)?;
        Ok(self.k2_kin(i, j, &kin))
    }

    /// Full kernel `k_ij = k2_ij − k1_ij`.
    pub fn k(&self, i: usize, j: usize, xi: &Vec3, xi_star: &Vec3) -> Result<f64> {
        let kin = self.check(i, j, xi, xi_star)?;
        Ok(self.k2_kin(i, j, &kin) - self.k1_kin(i, j, xi, xi_star, &kin))
    }

    /// `k_ij` without validation; callers guarantee valid indices and
    /// `ξ ≠ ξ*`.
    #[inline]
    pub(crate) fn k_unchecked(&self, i: usize, j: usize, xi: &Vec3, xi_star: &Vec3) -> f64 {
        let g = xi - xi_star;
        let g_norm = g.norm();
        let kin = CollisionKinematics { g, g_norm, n: g / g_norm, center: 0.5 * (xi + xi_star) };
        self.k2_kin(i, j, &kin) - self.k1_kin(i, j, xi, xi_star, &kin)
    }

    fn k1_kin(&self, i: usize, j: usize, xi: &Vec3, xi_star: &Vec3, kin: &CollisionKinematics) -> f64 {
        let r = self.gas.r();
        let mut s = 0.0;
        for k in 0..r {
            for l in 0..r {
                s += self.sigma.sigma(self.gas, i, j, k, l, kin.g_norm);
            }
        }
        if s == 0.0 {
            return 0.0;
        }
        let mm = self.gas.maxwellian_at(i, xi.norm_squared()) * self.gas.maxwellian_at(j, xi_star.norm_squared());
        mm.sqrt() * kin.g_norm * self.sphere_sum * s
    }

    fn k2_kin(&self, i: usize, j: usize, kin: &CollisionKinematics) -> f64 {
        let gas = self.gas;
        let m = gas.mass();
        let levels = gas.levels();
        let phi = gas.weights();
        let geo = PlaneGeometry::new(kin);
        let plane = &self.rules.plane;
        let gn = kin.g_norm;
        let mut total = 0.0;
        for k in 0..gas.r() {
            for l in 0..gas.r() {
                let delta = levels[j] + levels[l] - levels[i] - levels[k];
                let chi = delta / (m * gn);
                let shift = geo.b - chi;
                let pre = phi[k]
                    * self.level_boltzmann[k]
                    * self.level_boltzmann[l]
                    * (-0.5 * m * (shift * shift + 0.25 * gn * gn)).exp();
                if pre == 0.0 {
                    continue;
                }
                let plus_sq = (gn + chi) * (gn + chi);
                let minus_sq = (gn - chi) * (gn - chi);
                let mut acc = 0.0;
                for ((p, &usq), &gw) in plane.points.iter().zip(&plane.radius_sq).zip(&self.plane_gauss) {
                    let wsq = geo.w_sq(p, usq);
                    let star_sq = minus_sq + wsq;
                    if star_sq <= 0.0 {
                        continue;
                    }
                    let tilde = (plus_sq + wsq).sqrt();
                    let s = self.sigma.sigma(gas, i, k, j, l, tilde);
                    if s != 0.0 {
                        acc += gw * tilde * s / star_sq.sqrt();
                    }
                }
                total += pre * acc;
            }
        }
        8.0 * (phi[i] / phi[j]).sqrt() * gas.gauss_norm() / gn * total
    }
}

/// Kernel evaluator for a mixture with a fixed cross section and rules.
#[derive(Debug, Clone)]
pub struct MixKernels<'a, S> {
    mix: &'a MixtureSpec,
    sigma: S,
    rules: &'a KernelRules,
    sphere_sum: f64,
    plane_gauss: Vec<Vec<f64>>,
    plane_gauss_sum: Vec<f64>,
}

impl<'a, S: MixCrossSection> MixKernels<'a, S> {
    /// Binds mixture, cross section and rules.
    pub fn new(mix: &'a MixtureSpec, sigma: S, rules: &'a KernelRules) -> Self {
        let plane_gauss: Vec<Vec<f64>> =
            mix.masses().iter().map(|&m| gaussian_plane_weights(&rules.plane, m)).collect();
        let plane_gauss_sum = plane_gauss.iter().map(|v| v.iter().sum()).collect();
        Self { mix, sigma, rules, sphere_sum: rules.sphere.weights.iter().sum(), plane_gauss, plane_gauss_sum }
    }

    /// The mixture.
    pub fn mixture(&self) -> &MixtureSpec {
        self.mix
    }

    /// The cross section.
    pub fn sigma(&self) -> &S {
        &self.sigma
    }

    fn check(&self, alpha: usize, beta: usize, xi: &Vec3, xi_star: &Vec3) -> Result<CollisionKinematics> {
        for c in [alpha, beta] {
            if c >= self.mix.s() {
                return Err(Error::IndexOutOfRange { index: c, count: self.mix.s() });
            }
        }
        CollisionKinematics::new(xi, xi_star)
    }

    /// Loss kernel `k1_αβ(ξ, ξ*) = (M_α M_β*)^{1/2} |g| ∫_{S²} σ_αβ dω`.
    pub fn loss(&self, alpha: usize, beta: usize, xi: &Vec3, xi_star: &Vec3) -> Result<f64> {
        let kin = self.check(alpha, beta, xi, xi_star)?;
        Ok(self.loss_kin(alpha, beta, xi, xi_star, &kin))
    }

    /// Same-argument gain kernel
    /// `k_αβ^(α) = ((m_α + m_β)²/m_β²) |g|^{−1} ∫_{w⊥n} σ_αβ(|g̃|)
    /// (M_β(ξ′) M_β(ξ*′))^{1/2} dw` with `χ = (m_α − m_β)|g|/(2m_β)`,
    /// `ξ′ = ξ* + w − χn`, `ξ*′ = ξ + w + χn`, evaluated at
    /// `|g̃|² = ((m_α + m_β)/(2m_β))² |g|² + |w|²`.
    pub fn same(&self, alpha: usize, beta: usize, xi: &Vec3, xi_star: &Vec3) -> Result<f64> {
        let kin = self.check(alpha, beta, xi, xi_star)?;
        Ok(self.same_kin(alpha, beta, &kin))
    }

    /// Cross gain kernel `k2_αβ^(β)`.
    ///
    /// For `m_α ≠ m_β`:
    /// `((m_α + m_β)²/(m_α − m_β)²) |g| ∫_{S²} σ_αβ (M_β(ξ*_β) M_α(ξ′_α))^{1/2} dω`
    /// with `X = (m_α ξ − m_β ξ*)/(m_α − m_β)`,
    /// `ξ′_α = X − m_β|g|ω/(m_α − m_β)`, `ξ*_β = X − m_α|g|ω/(m_α − m_β)`,
    /// and `σ` taken at the relative speed `|ξ − ξ*_β|` of the colliding pair.
    /// For equal masses:
    /// `(4/|g|) ∫_{w⊥n} σ_αβ(√(|g|² + |w|²)) (M_β(ξ* + w) M_α(ξ + w))^{1/2} dw`.
    pub fn cross(&self, alpha: usize, beta: usize, xi: &Vec3, xi_star: &Vec3) -> Result<f64> {
        let kin = self.check(alpha, beta, xi, xi_star)?;
        Ok(self.cross_kin(alpha, beta, xi, xi_star, &kin))
    }

    /// Block kernel `k_αβ(ξ, ξ*)` acting on `h_β(ξ*)` in `(K h)_α(ξ)`.
    pub fn k(&self, alpha: usize, beta: usize, xi: &Vec3, xi_star: &Vec3) -> Result<f64> {
        let kin = self.check(alpha, beta, xi, xi_star)?;
        Ok(self.k_kin(alpha, beta, xi, xi_star, &kin))
    }

    #[inline]
    pub(crate) fn k_unchecked(&self, alpha: usize, beta: usize, xi: &Vec3, xi_star: &Vec3) -> f64 {
        let g = xi - xi_star;
        let g_norm = g.norm();
        let kin = CollisionKinematics { g, g_norm, n: g / g_norm, center: 0.5 * (xi + xi_star) };
        self.k_kin(alpha, beta, xi, xi_star, &kin)
    }

    fn k_kin(&self, alpha: usize, beta: usize, xi: &Vec3, xi_star: &Vec3, kin: &CollisionKinematics) -> f64 {
        let mut k = self.cross_kin(alpha, beta, xi, xi_star, kin) - self.loss_kin(alpha, beta, xi, xi_star, kin);
        if alpha == beta {
            for gamma in 0..self.mix.s() {
                k += self.same_kin(alpha, gamma, kin);
            }
        }
        k
    }

    fn loss_kin(&self, alpha: usize, beta: usize, xi: &Vec3, xi_star: &Vec3, kin: &CollisionKinematics) -> f64 {
        let s = self.sigma.sigma(self.mix, alpha, beta, kin.g_norm);
        let mm = self.mix.maxwellian_at(alpha, xi.norm_squared()) * self.mix.maxwellian_at(beta, xi_star.norm_squared());
        mm.sqrt() * kin.g_norm * self.sphere_sum * s
    }

    fn same_kin(&self, alpha: usize, beta: usize, kin: &CollisionKinematics) -> f64 {
        let ma = self.mix.masses()[alpha];
        let mb = self.mix.masses()[beta];
        let nb = self.mix.densities()[beta];
        let geo = PlaneGeometry::new(kin);
        let gn = kin.g_norm;
        let ratio = (ma + mb) / (2.0 * mb);
        let base_sq = ratio * ratio * gn * gn;
        let pre = (ma + mb) * (ma + mb) / (mb * mb) / gn
            * nb
            * (mb / (2.0 * PI)).powf(1.5)
            * (-0.5 * mb * (geo.b * geo.b + ma * ma / (4.0 * mb * mb) * gn * gn)).exp();
        if pre == 0.0 {
            return 0.0;
        }
        let integral = self.plane_sigma_integral(alpha, beta, &geo, base_sq, beta);
        pre * integral
    }

    /// `∫ σ_αβ(√(base_sq + |w|²)) e^{−(m/2)|u|²} du` with `m` the mass of
    /// species `gauss_species`.
    fn plane_sigma_integral(&self, alpha: usize, beta: usize, geo: &PlaneGeometry, base_sq: f64, gauss_species: usize) -> f64 {
        let plane = &self.rules.plane;
        let gw = &self.plane_gauss[gauss_species];
        if let Some(c) = self.sigma.speed_independent(alpha, beta) {
            return c * self.plane_gauss_sum[gauss_species];
        }
        let mut acc = 0.0;
        for ((p, &usq), &w) in plane.points.iter().zip(&plane.radius_sq).zip(gw) {
            let g = (base_sq + geo.w_sq(p, usq)).sqrt();
            acc += w * self.sigma.sigma(self.mix, alpha, beta, g);
        }
        acc
    }

    fn cross_kin(&self, alpha: usize, beta: usize, xi: &Vec3, xi_star: &Vec3, kin: &CollisionKinematics) -> f64 {
        let ma = self.mix.masses()[alpha];
        let mb = self.mix.masses()[beta];
        let na = self.mix.densities()[alpha];
        let nb = self.mix.densities()[beta];
        let gn = kin.g_norm;
        let norm = (na * nb).sqrt() * (ma * mb / (4.0 * PI * PI)).powf(0.75);
        let dm = ma - mb;
        if dm.abs() <= 1e-12 * ma.max(mb) {
            let geo = PlaneGeometry::new(kin);
            let m = 0.5 * (ma + mb);
            let pre = 4.0 / gn * norm * (-0.25 * m * (2.0 * geo.b * geo.b + 0.5 * gn * gn)).exp();
            if pre == 0.0 {
                return 0.0;
            }
            return pre * self.plane_sigma_integral(alpha, beta, &geo, gn * gn, alpha);
        }
        let acc = cross_gain_nodes(self.mix, alpha, beta, xi, xi_star, &self.rules.sphere)
            .map(|node| {
                let expo = mb * node.partner.norm_squared() + ma * node.outgoing.norm_squared();
                debug_assert!(
                    node.ratio_ok(xi, xi_star, ma, mb),
                    "energy-ratio lower bound violated at a cross-gain node"
                );
                let g = (xi - node.partner).norm();
                node.weight * self.sigma.sigma(self.mix, alpha, beta, g) * (-0.25 * expo).exp()
            })
            .sum::<f64>();
        (ma + mb) * (ma + mb) / (dm * dm) * gn * norm * acc
    }
}

/// One node of the cross-gain sphere integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossGainNode {
    /// Sphere weight.
    pub weight: f64,
    /// Velocity `ξ′_α` of the outgoing species-α particle.
    pub outgoing: Vec3,
    /// Velocity `ξ*_β` of the incoming species-β partner.
    pub partner: Vec3,
}

impl CrossGainNode {
    /// Whether `m_β|ξ*_β|² + m_α|ξ′_α|² ≥ ρ (m_α|ξ|² + m_β|ξ*|²)` holds (up to
    /// a relative rounding allowance), with `ρ` from the energy-ratio lemma.
    pub fn ratio_ok(&self, xi: &Vec3, xi_star: &Vec3, ma: f64, mb: f64) -> bool {
        let rho = crate::verify::rho_value(ma, mb);
        let num = mb * self.partner.norm_squared() + ma * self.outgoing.norm_squared();
        let den = ma * xi.norm_squared() + mb * xi_star.norm_squared();
        num >= rho * den - 1e-10 * (den + num)
    }
}

/// Nodes of the cross-gain sphere integral for `m_α ≠ m_β`: the sphere rule
/// is aligned with `X = (m_α ξ − m_β ξ*)/(m_α − m_β)` (any axis when `X = 0`).
pub fn cross_gain_nodes<'a>(
    mix: &MixtureSpec,
    alpha: usize,
    beta: usize,
    xi: &Vec3,
    xi_star: &Vec3,
    sphere: &'a SphereRule,
) -> impl Iterator<Item = CrossGainNode> + 'a {
    let ma = mix.masses()[alpha];
    let mb = mix.masses()[beta];
    let dm = ma - mb;
    let gn = (xi - xi_star).norm();
    let x = CollisionKinematics::mixture_center(xi, xi_star, ma, mb);
    let axis = if x.norm_squared() > 0.0 { x } else { Vec3::z() };
    let (e1, e2, e3) = canonical_frame(&axis);
    let ca = ma * gn / dm;
    let cb = mb * gn / dm;
    sphere.nodes.iter().zip(&sphere.weights).map(move |(p, &weight)| {
        let omega = p.x * e1 + p.y * e2 + p.z * e3;
        CrossGainNode { weight, outgoing: x - cb * omega, partner: x - ca * omega }
    })
}

/// `k1_ij(ξ, ξ*)` for a polyatomic gas.
pub fn k1_poly(
    gas: &PolyatomicGas,
    model: &CrossSectionModel,
    i: usize,
    j: usize,
    xi: &Vec3,
    xi_star: &Vec3,
    rules: &KernelRules,
) -> Result<f64> {
    PolyKernels::new(gas, model.poly()?, rules).k1(i, j, xi, xi_star)
}

/// `k2_ij(ξ, ξ*)` for a polyatomic gas.
pub fn k2_poly(
    gas: &PolyatomicGas,
    model: &CrossSectionModel,
    i: usize,
    j: usize,
    xi: &Vec3,
    xi_star: &Vec3,
    rules: &KernelRules,
) -> Result<f64> {
    PolyKernels::new(gas, model.poly()?, rules).k2(i, j, xi, xi_star)
}

/// `k_ij = k2_ij − k1_ij` for a polyatomic gas.
pub fn k_poly(
    gas: &PolyatomicGas,
    model: &CrossSectionModel,
    i: usize,
    j: usize,
    xi: &Vec3,
    xi_star: &Vec3,
    rules: &KernelRules,
) -> Result<f64> {
    PolyKernels::new(gas, model.poly()?, rules).k(i, j, xi, xi_star)
}

/// Mixture loss kernel `k1_αβ`.
pub fn k_mix_loss(
    mix: &MixtureSpec,
    model: &CrossSectionModel,
    alpha: usize,
    beta: usize,
    xi: &Vec3,
    xi_star: &Vec3,
    rules: &KernelRules,
) -> Result<f64> {
    MixKernels::new(mix, model.mix(mix.s())?, rules).loss(alpha, beta, xi, xi_star)
}

/// Mixture same-argument gain kernel `k_αβ^(α)`.
pub fn k_mix_same(
    mix: &MixtureSpec,
    model: &CrossSectionModel,
    alpha: usize,
    beta: usize,
    xi: &Vec3,
    xi_star: &Vec3,
    rules: &KernelRules,
) -> Result<f64> {
    MixKernels::new(mix, model.mix(mix.s())?, rules).same(alpha, beta, xi, xi_star)
}

/// Mixture cross gain kernel `k2_αβ^(β)`.
pub fn k_mix_gain(
    mix: &MixtureSpec,
    model: &CrossSectionModel,
    alpha: usize,
    beta: usize,
    xi: &Vec3,
    xi_star: &Vec3,
    rules: &KernelRules,
) -> Result<f64> {
    MixKernels::new(mix, model.mix(mix.s())?, rules).cross(alpha, beta, xi, xi_star)
}

/// Mixture block kernel `k_αβ`.
pub fn k_mix(
    mix: &MixtureSpec,
    model: &CrossSectionModel,
    alpha: usize,
    beta: usize,
    xi: &Vec3,
    xi_star: &Vec3,
    rules: &KernelRules,
) -> Result<f64> {
    MixKernels::new(mix, model.mix(mix.s())?, rules).k(alpha, beta, xi, xi_star)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas2() -> PolyatomicGas {
        PolyatomicGas::new(1.0, vec![0.0, 1.0], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn loss_kernel_isotropic_factor() {
        let gas = PolyatomicGas::monatomic(1.0).unwrap();
        let rules = KernelRules::default();
        let model = CrossSectionModel::default_poly();
        let xi = Vec3::new(1.0, 0.0, 0.0);
        let xs = Vec3::new(-1.0, 0.0, 0.0);
        let k = k1_poly(&gas, &model, 0, 0, &xi, &xs, &rules).unwrap();
        let m = (2.0 * PI).powf(-1.5) * (-0.5f64).exp();
        assert!((k - 8.0 * PI * m).abs() < 1e-13 * k);
    }

    #[test]
    fn coincident_velocities_rejected() {
        let gas = gas2();
        let rules = KernelRules::default();
        let model = CrossSectionModel::default_poly();
        let xi = Vec3::new(0.3, 0.1, 0.0);
        assert!(matches!(k2_poly(&gas, &model, 0, 1, &xi, &xi, &rules), Err(Error::CoincidentVelocities)));
        assert!(matches!(k_poly(&gas, &model, 2, 1, &xi, &Vec3::zeros(), &rules), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn poly_gain_channel_conserves_energy() {
        let gas = gas2();
        let (xi, xs) = (Vec3::new(0.4, -1.0, 0.3), Vec3::new(-0.2, 0.5, 1.1));
        let kin = CollisionKinematics::new(&xi, &xs).unwrap();
        let (e1, e2, _) = canonical_frame(&kin.n);
        let w = 0.7 * e1 - 1.3 * e2;
        let m = gas.mass();
        let lv = gas.levels();
        for (i, j, k, l) in [(0, 1, 0, 0), (1, 0, 1, 1), (0, 0, 1, 1), (1, 1, 0, 1)] {
            let chi = kin.line_shift(m, gas.energy_defect(i, k, j, l));
            let (xp, xsp) = kin.poly_gain_post(&xi, &xs, &w, chi);
            let before = 0.5 * m * (xi.norm_squared() + xp.norm_squared()) + lv[i] + lv[k];
            let after = 0.5 * m * (xs.norm_squared() + xsp.norm_squared()) + lv[j] + lv[l];
            assert!((before - after).abs() < 1e-12, "{before} {after}");
            let mom = xi + xp - xs - xsp;
            assert!(mom.norm() < 1e-14);
        }
    }
}
