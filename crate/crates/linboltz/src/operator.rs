//! Collision frequencies, discrete assembly of the linearized operator
//! `L = Λ − K`, and direct (kernel-free) evaluation of the collision operator
//! `Q`, of `L` and of the quadratic term `Γ`, which serve as independent
//! oracles for the assembled matrices.
//!
//! The discrete operator acts on weight-scaled coordinates
//! `h̃_(c,a) = √w_a h_c(ξ_a)`, where `c` is the component (energy level or
//! species) and `a` the velocity node. Row `(c, a)` has index `c·N³ + a`.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::cross_sections::{CrossSectionModel, MixCrossSection, PolyCrossSection};
use crate::error::{Error, Result};
use crate::gas_models::{DistributionField, MixtureSpec, PolyatomicGas, Vec3};
use crate::kernels::{KernelRules, MixKernels, PolyKernels};
use crate::quadrature::{sphere_rule, GaussRule, SphereRule, VelocityGrid};

/// Default cap on the number of operator rows.
pub const DEFAULT_SIZE_CAP: usize = 20_000;

/// Truncation of the collision-frequency integral in units of `1/√m`.
pub const NU_SPAN: f64 = 10.0;

/// Gauss orders of the reduced collision-frequency rule.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NuRule {
    /// Nodes per radial (`|ξ*|`) panel.
    pub radial: usize,
    /// Nodes per relative-speed panel.
    pub inner: usize,
}

impl Default for NuRule {
    fn default() -> Self {
        Self { radial: 24, inner: 16 }
    }
}

/// Integrates `f` over `(lo, hi)` with `x = lo + (hi − lo) v⁴`, which
/// absorbs fractional-power behaviour `(x − lo)^p` at the left end.
fn graded_left<F: Fn(f64) -> f64>(gl: &GaussRule, lo: f64, hi: f64, f: F) -> f64 {
    gl.on_interval(0.0, 1.0).integrate(|v| {
        let v3 = v * v * v;
        (hi - lo) * 4.0 * v3 * f(lo + (hi - lo) * v3 * v)
    })
}

/// `∫_{|ξ*| ≤ r_max} ρ(|ξ*|) ∫_{S²}dξ̂* F(|ξ − ξ*|) dξ*` with
/// `F(s) = f(s)/s` and `f(s) = s² σ(s)` supported on `s > s0`.
///
/// The angular integral is mapped to the relative speed `s`
/// (`∫_{−1}^{1} dc = ∫ s ds/(x r)`); panels are split where the limits of
/// the `s` integral cross each other or the threshold, and post-threshold
/// panels use `t = √(s² − s0²)`. At `x = 0` the shell is a full sphere.
///
/// Cross sections may behave like a fractional power of the speed at `s = 0`
/// or of `t` at the threshold, so the inner integral is graded towards its
/// lower limit and radial panels are graded towards the breaks where that
/// limit meets the threshold (or zero).
fn reduced_shell_integral<D, F>(x: f64, r_max: f64, s0: f64, rule: &NuRule, density: D, f: F) -> Result<f64>
where
    D: Fn(f64) -> f64,
    F: Fn(f64) -> f64,
{
    let gl_r = GaussRule::legendre(rule.radial)?;
    let gl_s = GaussRule::legendre(rule.inner)?;
    let seg = |lo: f64, hi: f64| -> f64 {
        if s0 > 0.0 {
            let a = lo.max(s0);
            if a >= hi {
                return 0.0;
            }
            let t_lo = (a * a - s0 * s0).max(0.0).sqrt();
            let t_hi = (hi * hi - s0 * s0).sqrt();
            graded_left(&gl_s, t_lo, t_hi, |t| {
                let s = (t * t + s0 * s0).sqrt();
                f(s) * t / s
            })
        } else if hi > lo {
            graded_left(&gl_s, lo, hi, &f)
        } else {
            0.0
        }
    };
    if x <= 1e-12 {
        // At the origin the shell is a full sphere: `4π ∫ r ρ(r) f(r) dr`, with
        // `r = √(s0² + t²)` past the threshold.
        if s0 >= r_max {
            return Ok(0.0);
        }
        let t_max = (r_max * r_max - s0 * s0).sqrt();
        let t_split = t_max.min(4.0 * r_max / NU_SPAN);
        let integrand = |t: f64| {
            let r = (t * t + s0 * s0).sqrt();
            t * density(r) * f(r)
        };
        let head = graded_left(&gl_r, 0.0, t_split, integrand);
        let tail = gl_r.on_interval(t_split, t_max).integrate(integrand);
        return Ok(4.0 * PI * (head + tail));
    }
    let kinks = [(x - s0).abs(), x + s0];
    let mut breaks = vec![0.0, r_max];
    // Graded panels are kept to unit width (in `1/√m`) around each kink.
    let unit = r_max / NU_SPAN;
    let extra = kinks.iter().flat_map(|&k| [k - unit, k + unit]).chain([x + s0 + 2.0 * unit, x + s0 + 5.0 * unit]);
    for b in kinks.into_iter().chain(extra) {
        if b > 0.0 && b < r_max {
            breaks.push(b);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let is_kink = |b: f64| kinks.iter().any(|&k| (k - b).abs() <= 1e-14 * (1.0 + k));
    let integrand = |r: f64| r * density(r) * seg((x - r).abs(), x + r) / x;
    let mut total = 0.0;
    for win in breaks.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        total += match (is_kink(lo), is_kink(hi)) {
            (true, true) => {
                let mid = 0.5 * (lo + hi);
                graded_left(&gl_r, lo, mid, integrand) - graded_left(&gl_r, hi, mid, integrand)
            }
            (true, false) => graded_left(&gl_r, lo, hi, integrand),
            (false, true) => -graded_left(&gl_r, hi, lo, integrand),
            (false, false) => gl_r.on_interval(lo, hi).integrate(integrand),
        };
    }
    Ok(2.0 * PI * total)
}

/// Collision frequency `ν_i(|ξ|) = Σ_jkl ∫ M_j(ξ*) |g| ∫_{S²} σ_ij^kl dω dξ*`
/// with an arbitrary polyatomic cross section.
pub fn nu_poly_with<S: PolyCrossSection + ?Sized>(
    gas: &PolyatomicGas,
    sigma: &S,
    i: usize,
    xi_norm: f64,
    rule: &NuRule,
) -> Result<f64> {
    if i >= gas.r() {
        return Err(Error::IndexOutOfRange { index: i, count: gas.r() });
    }
    let m = gas.mass();
    let r_max = NU_SPAN / m.sqrt();
    let mut total = 0.0;
    for j in 0..gas.r() {
        for k in 0..gas.r() {
            for l in 0..gas.r() {
                let delta = gas.energy_defect(i, j, k, l);
                let s0 = if delta > 0.0 { 2.0 * (delta / m).sqrt() } else { 0.0 };
                total += 4.0
                    * PI
                    * reduced_shell_integral(
                        xi_norm,
                        r_max,
                        s0,
                        rule,
                        |r| gas.maxwellian_at(j, r * r),
                        |s| s * s * sigma.sigma(gas, i, j, k, l, s),
                    )?;
            }
        }
    }
    Ok(total)
}

/// Collision frequency of level `i` of a polyatomic gas at speed `|ξ|`.
pub fn nu_poly(gas: &PolyatomicGas, model: &CrossSectionModel, i: usize, xi_norm: f64) -> Result<f64> {
    nu_poly_with(gas, &model.poly()?, i, xi_norm, &NuRule::default())
}

/// Mixture collision frequency
/// `ν_α(|ξ|) = Σ_β ∫ M_β(ξ*) |g| ∫_{S²} σ_αβ dω dξ*`.
pub fn nu_mix_with<S: MixCrossSection + ?Sized>(
    mix: &MixtureSpec,
    sigma: &S,
    alpha: usize,
    xi_norm: f64,
    rule: &NuRule,
) -> Result<f64> {
    if alpha >= mix.s() {
        return Err(Error::IndexOutOfRange { index: alpha, count: mix.s() });
    }
    let mut total = 0.0;
    for beta in 0..mix.s() {
        let r_max = NU_SPAN / mix.masses()[beta].sqrt();
        total += 4.0
            * PI
            * reduced_shell_integral(
                xi_norm,
                r_max,
                0.0,
                rule,
                |r| mix.maxwellian_at(beta, r * r),
                |s| s * s * sigma.sigma(mix, alpha, beta, s),
            )?;
    }
    Ok(total)
}

/// Collision frequency of species `alpha` at speed `|ξ|`.
pub fn nu_mix(mix: &MixtureSpec, model: &CrossSectionModel, alpha: usize, xi_norm: f64) -> Result<f64> {
    nu_mix_with(mix, &model.mix(mix.s())?, alpha, xi_norm, &NuRule::default())
}

/// Options controlling discrete assembly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssemblyOptions {
    /// Maximum number of rows (`components · N³`).
    pub size_cap: usize,
    /// Rule for the collision frequencies.
    pub nu_rule: NuRule,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        Self { size_cap: DEFAULT_SIZE_CAP, nu_rule: NuRule::default() }
    }
}

/// Discrete linearized operator `L̃ = diag(ν) − K̃` in weight-scaled
/// coordinates.
#[derive(Debug, Clone)]
pub struct LinearizedOperator {
    /// Velocity grid.
    pub grid: VelocityGrid,
    /// Number of components (`r` or `s`).
    pub components: usize,
    /// Collision frequency per row.
    pub nu: Vec<f64>,
    /// Symmetric matrix `K̃[(i,a),(j,b)] = √w_a k_ij(ξ_a, ξ_b) √w_b`, zero
    /// whenever `a = b`.
    pub kmat: DMatrix<f64>,
}

impl LinearizedOperator {
    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.nu.len()
    }

    /// Dense `L̃ = diag(ν) − K̃`.
    pub fn l_matrix(&self) -> DMatrix<f64> {
        let mut l = -self.kmat.clone();
        for (p, &v) in self.nu.iter().enumerate() {
            l[(p, p)] += v;
        }
        l
    }

    /// `K̃ h̃`.
    pub fn apply_k(&self, h: &[f64]) -> Vec<f64> {
        (&self.kmat * DVector::from_column_slice(h)).as_slice().to_vec()
    }

    /// `L̃ h̃`.
    pub fn apply_l(&self, h: &[f64]) -> Vec<f64> {
        let kh = self.apply_k(h);
        self.nu.iter().zip(h).zip(kh).map(|((n, x), k)| n * x - k).collect()
    }

    /// Weight-scaled samples `√w f_c(ξ_a)` of a field.
    pub fn sample(&self, f: &DistributionField) -> Vec<f64> {
        sample_field(&self.grid, self.components, f)
    }

    /// All eigenvalues of `L̃`, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        symmetric_eigenvalues(self.l_matrix())
    }

    /// Measured envelope constants `(c−, c+)` of `ν/(1 + |ξ_a|)` over the grid.
    pub fn nu_envelope(&self) -> (f64, f64) {
        let n = self.grid.len();
        self.nu.iter().enumerate().fold((f64::INFINITY, 0.0f64), |(lo, hi), (p, v)| {
            let q = v / (1.0 + self.grid.nodes[p % n].norm());
            (lo.min(q), hi.max(q))
        })
    }
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: DMatrix<f64>) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Eigen("matrix is not square".into()));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigen("matrix has non-finite entries".into()));
    }
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// `√w f_c(ξ_a)` in row order `c·N³ + a`.
pub fn sample_field(grid: &VelocityGrid, components: usize, f: &DistributionField) -> Vec<f64> {
    let sw = grid.weight.sqrt();
    (0..components).flat_map(|c| grid.nodes.iter().map(move |x| sw * f.eval(c, x))).collect()
}

fn check_size(components: usize, grid: &VelocityGrid, cap: usize) -> Result<()> {
    let rows = components * grid.len();
    if rows > cap {
        Err(Error::SizeCap { rows, cap })
    } else {
        Ok(())
    }
}

/// Upper triangle evaluated pair by pair (in parallel), then mirrored, so
/// the result is exactly symmetric.
fn assemble_symmetric<K>(components: usize, grid: &VelocityGrid, kernel: K) -> DMatrix<f64>
where
    K: Fn(usize, usize, &Vec3, &Vec3) -> f64 + Sync,
{
    let n = grid.len();
    let rows = components * n;
    let w = grid.weight;
    let upper: Vec<Vec<f64>> = (0..rows)
        .into_par_iter()
        .map(|p| {
            let (c, a) = (p / n, p % n);
            (p..rows)
                .map(|q| {
                    let (d, b) = (q / n, q % n);
                    if a == b {
                        0.0
                    } else {
                        w * kernel(c, d, &grid.nodes[a], &grid.nodes[b])
                    }
                })
                .collect()
        })
        .collect();
    let mut k = DMatrix::zeros(rows, rows);
    for (p, row) in upper.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            let q = p + off;
            k[(p, q)] = v;
            k[(q, p)] = v;
        }
    }
    k
}

/// Collision frequencies at every row, computed once per distinct `|ξ_a|²`.
fn grid_nu<F>(components: usize, grid: &VelocityGrid, nu: F) -> Result<Vec<f64>>
where
    F: Fn(usize, f64) -> Result<f64> + Sync,
{
    let quarter_h2 = 0.25 * grid.spacing() * grid.spacing();
    let mut keys: Vec<(usize, u64, f64)> = Vec::new();
    let mut seen: HashMap<(usize, u64), ()> = HashMap::new();
    for c in 0..components {
        for x in &grid.nodes {
            let key = (x.norm_squared() / quarter_h2).round() as u64;
            if seen.insert((c, key), ()).is_none() {
                keys.push((c, key, (key as f64 * quarter_h2).sqrt()));
            }
        }
    }
    let values: Vec<Result<f64>> = keys.par_iter().map(|&(c, _, x)| nu(c, x)).collect();
    let mut table = HashMap::new();
    for (&(c, key, _), v) in keys.iter().zip(values) {
        table.insert((c, key), v?);
    }
    Ok((0..components)
        .flat_map(|c| {
            let table = &table;
            grid.nodes.iter().map(move |x| table[&(c, (x.norm_squared() / quarter_h2).round() as u64)])
        })
        .collect())
}

/// Assembles the polyatomic operator for any cross section.
pub fn assemble_poly_with<S: PolyCrossSection + Clone>(
    gas: &PolyatomicGas,
    sigma: S,
    grid: &VelocityGrid,
    rules: &KernelRules,
    opts: &AssemblyOptions,
) -> Result<LinearizedOperator> {
    check_size(gas.r(), grid, opts.size_cap)?;
    let nu = grid_nu(gas.r(), grid, |i, x| nu_poly_with(gas, &sigma, i, x, &opts.nu_rule))?;
    let kern = PolyKernels::new(gas, sigma, rules);
    let kmat = assemble_symmetric(gas.r(), grid, |i, j, x, y| kern.k_unchecked(i, j, x, y));
    Ok(LinearizedOperator { grid: grid.clone(), components: gas.r(), nu, kmat })
}

/// Assembles the polyatomic operator with default options.
pub fn assemble_poly(
    gas: &PolyatomicGas,
    model: &CrossSectionModel,
    grid: &VelocityGrid,
    rules: &KernelRules,
) -> Result<LinearizedOperator> {
    assemble_poly_with(gas, model.poly()?, grid, rules, &AssemblyOptions::default())
}

/// Assembles the mixture operator for any cross section.
pub fn assemble_mix_with<S: MixCrossSection + Clone>(
    mix: &MixtureSpec,
    sigma: S,
    grid: &VelocityGrid,
    rules: &KernelRules,
    opts: &AssemblyOptions,
) -> Result<LinearizedOperator> {
    check_size(mix.s(), grid, opts.size_cap)?;
    let nu = grid_nu(mix.s(), grid, |a, x| nu_mix_with(mix, &sigma, a, x, &opts.nu_rule))?;
    let kern = MixKernels::new(mix, sigma, rules);
    let kmat = assemble_symmetric(mix.s(), grid, |a, b, x, y| kern.k_unchecked(a, b, x, y));
    Ok(LinearizedOperator { grid: grid.clone(), components: mix.s(), nu, kmat })
}

/// Assembles the mixture operator with default options.
pub fn assemble_mix(
    mix: &MixtureSpec,
    model: &CrossSectionModel,
    grid: &VelocityGrid,
    rules: &KernelRules,
) -> Result<LinearizedOperator> {
    assemble_mix_with(mix, model.mix(mix.s())?, grid, rules, &AssemblyOptions::default())
}

/// Rules for direct pointwise evaluation of `Q`, `L` and `Γ`.
///
/// The partner velocity is written `ξ* = ξ − g` with `g` in spherical
/// coordinates around `ξ`; the post-collision direction `ω` uses a second
/// sphere rule aligned with the mean velocity. Maxwellian factors make the
/// `g`-direction integrand peak like `exp(m|g||ξ| cos θ)`, so the `g` rule is
/// graded towards `ξ` accordingly (see [`SphereRule::graded_towards_pole`]).
#[derive(Debug, Clone, PartialEq)]
pub struct DirectRules {
    /// Gauss nodes per radial panel in `|g|`.
    pub radial: usize,
    /// Rule for the direction of `g`.
    pub sphere_g: SphereRule,
    /// Rule for the post-collision direction `ω`.
    pub sphere_omega: SphereRule,
    /// Radial truncation beyond `|ξ|`, in units of `1/√m`.
    pub span: f64,
}

impl DirectRules {
    /// Builds rules from orders.
    pub fn new(radial: usize, order_g: usize, order_omega: usize, span: f64) -> Result<Self> {
        Ok(Self { radial, sphere_g: sphere_rule(order_g)?, sphere_omega: sphere_rule(order_omega)?, span })
    }
}

impl Default for DirectRules {
    fn default() -> Self {
        Self::new(16, 12, 12, 10.0).expect("default direct rules are valid")
    }
}

/// Gain and loss parts of a pointwise collision-operator evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CollisionParts {
    /// Gain term.
    pub gain: f64,
    /// Loss term.
    pub loss: f64,
}

impl CollisionParts {
    /// `gain − loss`.
    pub fn value(&self) -> f64 {
        self.gain - self.loss
    }
}

/// Radial `|g|` nodes with weights including `|g|²`, for a channel with
/// threshold `s0` (0 when always open), split at `split` and truncated at
/// `g_max`. Post-threshold panels use `t = √(|g|² − s0²)`.
fn radial_nodes(gl: &GaussRule, s0: f64, split: f64, g_max: f64) -> Vec<(f64, f64)> {
    if s0 >= g_max {
        return Vec::new();
    }
    if s0 > 0.0 {
        let t_max = (g_max * g_max - s0 * s0).sqrt();
        let t_split = if split > s0 { (split * split - s0 * s0).sqrt() } else { 0.0 };
        let rule = gl.composite(&[0.0, t_split, t_max]);
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&t, &w)| {
                let g = (t * t + s0 * s0).sqrt();
                (g, w * g * t)
            })
            .collect()
    } else {
        let split = split.clamp(0.0, g_max);
        let rule = gl.composite(&[0.0, split, g_max]);
        rule.nodes.iter().zip(&rule.weights).map(|(&g, &w)| (g, w * g * g)).collect()
    }
}

/// Generic pointwise collision integral at `(ξ, i)`:
/// `Σ_jkl ∫∫ |g| σ_ij^kl (φ_iφ_j/(φ_kφ_l) gain(k, l, ξ′, ξ*′) − loss(j, ξ*)) dξ* dω`
/// with `ξ′ = G + g′ω/2`, `ξ*′ = G − g′ω/2`, `g′ = √(|g|² − 4ΔI/m)`.
fn collide_pointwise<S, FG, FL>(
    gas: &PolyatomicGas,
    sigma: &S,
    xi: &Vec3,
    i: usize,
    rules: &DirectRules,
    gain: FG,
    loss: FL,
) -> Result<CollisionParts>
where
    S: PolyCrossSection + ?Sized,
    FG: Fn(usize, usize, &Vec3, &Vec3) -> f64,
    FL: Fn(usize, &Vec3) -> f64,
{
    if i >= gas.r() {
        return Err(Error::IndexOutOfRange { index: i, count: gas.r() });
    }
    let m = gas.mass();
    let phi = gas.weights();
    let gl = GaussRule::legendre(rules.radial)?;
    let xn = xi.norm();
    let g_max = xn + rules.span / m.sqrt();
    let axis_g = if xn > 0.0 { *xi } else { Vec3::z() };
    let dirs_g: Vec<(Vec3, f64)> = rules.sphere_g.oriented(&axis_g).collect();
    let omega_sum: f64 = rules.sphere_omega.weights.iter().sum();
    let mut parts = CollisionParts::default();
    for j in 0..gas.r() {
        for k in 0..gas.r() {
            for l in 0..gas.r() {
                let delta = gas.energy_defect(i, j, k, l);
                let s0 = if delta > 0.0 { 2.0 * (delta / m).sqrt() } else { 0.0 };
                let ratio = phi[i] * phi[j] / (phi[k] * phi[l]);
                for (g, wg) in radial_nodes(&gl, s0, xn, g_max) {
                    let sig = sigma.sigma(gas, i, j, k, l, g);
                    if sig == 0.0 {
                        continue;
                    }
                    let gp = (g * g - 4.0 * delta / m).max(0.0).sqrt();
                    let common = wg * g * sig;
                    let graded;
                    let dirs: &[(Vec3, f64)] = if m * g * xn > 4.0 {
                        graded = rules.sphere_g.graded_towards_pole(m * g * xn).oriented(&axis_g).collect::<Vec<_>>();
                        &graded
                    } else {
                        &dirs_g
                    };
                    for (dir, wd) in dirs {
                        let xs = xi - g * dir;
                        let center = 0.5 * (xi + xs);
                        let axis_w = if center.norm_squared() > 0.0 { center } else { Vec3::z() };
                        let gain_w: f64 = rules
                            .sphere_omega
                            .oriented(&axis_w)
                            .map(|(om, wo)| {
                                let half = 0.5 * gp * om;
                                wo * gain(k, l, &(center + half), &(center - half))
                            })
                            .sum();
                        parts.gain += common * wd * ratio * gain_w;
                        parts.loss += common * wd * omega_sum * loss(j, &xs);
                    }
                }
            }
        }
    }
    Ok(parts)
}

/// `Q_i(f, f)(ξ)` with an arbitrary polyatomic cross section.
pub fn apply_q_poly_with<S: PolyCrossSection + ?Sized>(
    gas: &PolyatomicGas,
    sigma: &S,
    f: &DistributionField,
    xi: &Vec3,
    i: usize,
    rules: &DirectRules,
) -> Result<CollisionParts> {
    let fi = f.eval(i, xi);
    collide_pointwise(gas, sigma, xi, i, rules, |k, l, a, b| f.eval(k, a) * f.eval(l, b), |j, xs| fi * f.eval(j, xs))
}

/// `Q_i(f, f)(ξ)`, gain and loss separately.
pub fn apply_q_poly(
    gas: &PolyatomicGas,
    model: &CrossSectionModel,
    f: &DistributionField,
    xi: &Vec3,
    i: usize,
    rules: &DirectRules,
) -> Result<CollisionParts> {
    apply_q_poly_with(gas, &model.poly()?, f, xi, i, rules)
}

/// `(L h)_i(ξ) = −M_i^{−1/2} (Q_i(M, M^{1/2}h) + Q_i(M^{1/2}h, M))`, evaluated
/// directly from the collision integral, with an arbitrary cross section.
pub fn apply_l_direct_with<S: PolyCrossSection + ?Sized>(
    gas: &PolyatomicGas,
    sigma: &S,
    h: &DistributionField,
    xi: &Vec3,
    i: usize,
    rules: &DirectRules,
) -> Result<f64> {
    let mx = |c: usize, v: &Vec3| gas.maxwellian_at(c, v.norm_squared());
    let fx = |c: usize, v: &Vec3| mx(c, v).sqrt() * h.eval(c, v);
    let mi = mx(i, xi);
    let fi = fx(i, xi);
    let parts = collide_pointwise(
        gas,
        sigma,
        xi,
        i,
        rules,
        |k, l, a, b| mx(k, a) * fx(l, b) + fx(k, a) * mx(l, b),
        |j, xs| mi * fx(j, xs) + fi * mx(j, xs),
    )?;
    Ok(-parts.value() / mi.sqrt())
}

/// Direct `(L h)_i(ξ)`.
pub fn apply_l_direct(
    gas: &PolyatomicGas,
    model: &CrossSectionModel,
    h: &DistributionField,
    xi: &Vec3,
    i: usize,
    rules: &DirectRules,
) -> Result<f64> {
    apply_l_direct_with(gas, &model.poly()?, h, xi, i, rules)
}

/// `Γ_i(h, h)(ξ) = M_i^{−1/2} Q_i(M^{1/2}h, M^{1/2}h)(ξ)`.
pub fn gamma_poly(
    gas: &PolyatomicGas,
    model: &CrossSectionModel,
    h: &DistributionField,
    xi: &Vec3,
    i: usize,
    rules: &DirectRules,
) -> Result<f64> {
    let sigma = model.poly()?;
    let fx = |c: usize, v: &Vec3| gas.maxwellian_at(c, v.norm_squared()).sqrt() * h.eval(c, v);
    let fi = fx(i, xi);
    let parts = collide_pointwise(gas, &sigma, xi, i, rules, |k, l, a, b| fx(k, a) * fx(l, b), |j, xs| fi * fx(j, xs))?;
    Ok(parts.value() / gas.maxwellian_at(i, xi.norm_squared()).sqrt())
}

/// Rules for weak forms `(Q(f, f), ψ)` in centre-of-mass coordinates
/// `ξ = G + g/2`, `ξ* = G − g/2`: Gauss–Hermite in `G` (scaled to the
/// Maxwellian width), Gauss–Legendre in `|g|` and sphere rules in `ĝ` and `ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakFormRules {
    /// Gauss–Hermite nodes per axis for `G`.
    pub hermite: usize,
    /// Gauss–Legendre nodes in `|g|`.
    pub radial: usize,
    /// Sphere rule for both `ĝ` and `ω`.
    pub sphere: SphereRule,
    /// Truncation of `|g|` in units of `1/√m`.
    pub span: f64,
}

impl WeakFormRules {
    /// Builds rules from orders.
    pub fn new(hermite: usize, radial: usize, sphere_order: usize, span: f64) -> Result<Self> {
        Ok(Self { hermite, radial, sphere: sphere_rule(sphere_order)?, span })
    }
}

impl Default for WeakFormRules {
    fn default() -> Self {
        Self::new(8, 24, 10, 12.0).expect("default weak-form rules are valid")
    }
}

/// A weak form `(Q(f, f), ψ)` split into gain and loss, together with the
/// loss-term scale `∫∫∫ |g| σ |f f* ψ|` used to normalize residuals.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
pub struct WeakForm {
    /// Gain contribution.
    pub gain: f64,
    /// Loss contribution.
    pub loss: f64,
    /// Loss contribution with absolute values.
    pub loss_scale: f64,
}

impl WeakForm {
    /// `gain − loss`.
    pub fn value(&self) -> f64 {
        self.gain - self.loss
    }

    /// `|value| / loss_scale`.
    pub fn relative(&self) -> f64 {
        self.value().abs() / self.loss_scale
    }
}

/// `(Q(f, f), ψ_p)` for several test functions at once, with an arbitrary
/// cross section.
pub fn weak_form_poly_with<S: PolyCrossSection + ?Sized>(
    gas: &PolyatomicGas,
    sigma: &S,
    f: &DistributionField,
    psis: &[DistributionField],
    rules: &WeakFormRules,
) -> Result<Vec<WeakForm>> {
    let m = gas.mass();
    let phi = gas.weights();
    let gh = GaussRule::hermite(rules.hermite)?;
    let gl = GaussRule::legendre(rules.radial)?;
    let sc = 1.0 / m.sqrt();
    let g_max = rules.span * sc;
    let sphere = &rules.sphere;
    let sphere_sum: f64 = sphere.weights.iter().sum();
    let np = psis.len();
    let mut out = vec![WeakForm::default(); np];
    let mut b = vec![0.0; np];
    let mut c = vec![0.0; np];
    let mut cabs = vec![0.0; np];
    for (&x, &wx) in gh.nodes.iter().zip(&gh.weights) {
        for (&y, &wy) in gh.nodes.iter().zip(&gh.weights) {
            for (&z, &wz) in gh.nodes.iter().zip(&gh.weights) {
                let center = sc * Vec3::new(x, y, z);
                let w_center = sc.powi(3) * wx * wy * wz * (x * x + y * y + z * z).exp();
                for i in 0..gas.r() {
                    for j in 0..gas.r() {
                        for k in 0..gas.r() {
                            for l in 0..gas.r() {
                                let delta = gas.energy_defect(i, j, k, l);
                                let s0 = if delta > 0.0 { 2.0 * (delta / m).sqrt() } else { 0.0 };
                                let ratio = phi[i] * phi[j] / (phi[k] * phi[l]);
                                for (g, wg) in radial_nodes(&gl, s0, 0.0, g_max) {
                                    let sig = sigma.sigma(gas, i, j, k, l, g);
                                    if sig == 0.0 {
                                        continue;
                                    }
                                    let gp = (g * g - 4.0 * delta / m).max(0.0).sqrt();
                                    let a: f64 = sphere
                                        .nodes
                                        .iter()
                                        .zip(&sphere.weights)
                                        .map(|(om, wo)| {
                                            let half = 0.5 * gp * om;
                                            wo * f.eval(k, &(center + half)) * f.eval(l, &(center - half))
                                        })
                                        .sum();
                                    b.iter_mut().for_each(|v| *v = 0.0);
                                    c.iter_mut().for_each(|v| *v = 0.0);
                                    cabs.iter_mut().for_each(|v| *v = 0.0);
                                    for (dir, wd) in sphere.nodes.iter().zip(&sphere.weights) {
                                        let half = 0.5 * g * dir;
                                        let xa = center + half;
                                        let xb = center - half;
                                        let ff = f.eval(i, &xa) * f.eval(j, &xb);
                                        for p in 0..np {
                                            let psi = psis[p].eval(i, &xa);
                                            if !psi.is_finite() {
                                                return Err(Error::NonPositiveField);
                                            }
                                            b[p] += wd * psi;
                                            c[p] += wd * ff * psi;
                                            cabs[p] += wd * (ff * psi).abs();
                                        }
                                    }
                                    let common = w_center * wg * g * sig;
                                    for p in 0..np {
                                        out[p].gain += common * ratio * a * b[p];
                                        out[p].loss += common * sphere_sum * c[p];
                                        out[p].loss_scale += common * sphere_sum * cabs[p];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `(Q(f, f), ψ)` for each collision invariant `ψ` of the gas.
pub fn conservation_weak_forms(
    gas: &PolyatomicGas,
    model: &CrossSectionModel,
    f: &DistributionField,
    rules: &WeakFormRules,
) -> Result<Vec<WeakForm>> {
    let basis = crate::gas_models::invariants_poly(gas);
    weak_form_poly_with(gas, &model.poly()?, f, basis.fields(), rules)
}

/// Entropy production `W[f] = (Q(f, f), log(φ^{−1} f))`; fails if `f` is not
/// strictly positive at a quadrature node.
pub fn entropy_production_poly(
    gas: &PolyatomicGas,
    model: &CrossSectionModel,
    f: &DistributionField,
    rules: &WeakFormRules,
) -> Result<WeakForm> {
    let fc = f.clone();
    let phi = gas.weights().to_vec();
    let log_f = DistributionField::new(gas.r(), move |c, x| {
        let v = fc.eval(c, x);
        if v > 0.0 {
            (v / phi[c]).ln()
        } else {
            f64::NAN
        }
    });
    Ok(weak_form_poly_with(gas, &model.poly()?, f, &[log_f], rules)?[0])
}

/// `(Γ(h, h), ψ̃)` for each `ψ̃ = M^{1/2}ψ` in the kernel basis, computed as
/// `(Q(M^{1/2}h, M^{1/2}h), ψ)`.
pub fn gamma_weak_forms(
    gas: &PolyatomicGas,
    model: &CrossSectionModel,
    h: &DistributionField,
    rules: &WeakFormRules,
) -> Result<Vec<WeakForm>> {
    let g = gas.clone();
    let hc = h.clone();
    let f = DistributionField::new(gas.r(), move |c, x| g.maxwellian_at(c, x.norm_squared()).sqrt() * hc.eval(c, x));
    conservation_weak_forms(gas, model, &f, rules)
}
