//! Measured, thresholded property checks and the verification suite.
//!
//! Every check returns plain numbers; [`run_suite`] turns them into a
//! [`VerificationReport`] of named pass/fail results. The energy-ratio lemma
//! for unequal masses (used by the mixture cross-gain kernel) lives here
//! too, as a closed-form bound plus a brute-force sampler.
//!
//! Randomized checks draw from ChaCha8 streams derived from one global seed,
//! and all parallel work is reduced in a fixed order, so a rerun with the
//! same seed and configuration reproduces every number bit for bit.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, UnitSphere};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cross_sections::{
    check_microreversibility, check_symmetry_relations, sample_open_channels, AsymmetricPerturbation,
    CrossSectionModel, MixCrossSection, PolyCrossSection,
};
use crate::error::{Error, Result};
use crate::gas_models::{
    general_maxwellian_poly, maxwellian_field_poly, CollisionInvariantBasis, DistributionField, GasModel, MixtureSpec,
    PolyatomicGas, Vec3,
};
use crate::io::ModelFile;
use crate::kernels::{KernelRules, MixKernels, PolyKernels};
use crate::operator::{
    apply_l_direct, assemble_mix_with, assemble_poly_with, conservation_weak_forms, entropy_production_poly,
    gamma_weak_forms, nu_mix_with, nu_poly_with, symmetric_eigenvalues, AssemblyOptions, DirectRules,
    LinearizedOperator, NuRule, WeakFormRules,
};
use crate::quadrature::{build_grid, halton_ball, sphere_rule, GaussRule};

/// Version of the report JSON layout.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Seeded generator for an independent stream of the global seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

// ---------------------------------------------------------------------------
// Energy-ratio lemma
// ---------------------------------------------------------------------------

/// `ρ = 1 − 2/(1 + √(1 + (m_α − m_β)²/(4 m_α m_β)))`, the lower bound of the
/// energy ratio for collisions between unequal masses.
///
/// Evaluated in the equivalent form `((√m_α − √m_β)/(√m_α + √m_β))²`, which
/// has no cancellation for nearly equal masses and is exact whenever both
/// square roots are (e.g. `ρ(4, 1) = 1/9`).
pub fn rho_value(m_alpha: f64, m_beta: f64) -> f64 {
    let (a, b) = (m_alpha.sqrt(), m_beta.sqrt());
    let (d, s) = (a - b, a + b);
    (d * d) / (s * s)
}

/// The closed-form energy-ratio bound for a mass pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoBound {
    /// Mass of the first species.
    pub m_alpha: f64,
    /// Mass of the second species.
    pub m_beta: f64,
    /// `ρ ∈ [0, 1)`, zero exactly for equal masses.
    pub rho: f64,
}

/// Closed-form `ρ` for positive masses.
pub fn rho_formula(m_alpha: f64, m_beta: f64) -> Result<RhoBound> {
    for m in [m_alpha, m_beta] {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidModel(format!("masses must be positive and finite, got {m}")));
        }
    }
    Ok(RhoBound { m_alpha, m_beta, rho: rho_value(m_alpha, m_beta) })
}

/// One point of the lemma's parametrization: a unit direction `η`, the
/// shift `q ≥ 0`, the coordinate `r ∈ R` and two vectors `w, w̃ ⊥ η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSample {
    /// Unit direction.
    pub eta: Vec3,
    /// Shift along `η` (zero means no collision).
    pub q: f64,
    /// Coordinate of `ξ` along `η`.
    pub r: f64,
    /// Component of `ξ` and `ξ*′` orthogonal to `η`.
    pub w: Vec3,
    /// Component of `ξ′` and `ξ*` orthogonal to `η`.
    pub w_tilde: Vec3,
}

/// Velocities `(ξ, ξ*, ξ′, ξ*′)` reconstructed from a sample:
/// `ξ = w + rη`, `ξ*′ = w + (r − q)η`, `ξ′ = w̃ + (r − (m_α+m_β)q/(2m_β))η`,
/// `ξ* = w̃ + (r + (m_α−m_β)q/(2m_β))η`. They satisfy
/// `m_α|ξ|² + m_β|ξ′|² = m_α|ξ*′|² + m_β|ξ*|²` identically.
pub fn ratio_velocities(m_alpha: f64, m_beta: f64, s: &RatioSample) -> (Vec3, Vec3, Vec3, Vec3) {
    let xi = s.w + s.r * s.eta;
    let xi_star_prime = s.w + (s.r - s.q) * s.eta;
    let xi_prime = s.w_tilde + (s.r - (m_alpha + m_beta) * s.q / (2.0 * m_beta)) * s.eta;
    let xi_star = s.w_tilde + (s.r + (m_alpha - m_beta) * s.q / (2.0 * m_beta)) * s.eta;
    (xi, xi_star, xi_prime, xi_star_prime)
}

/// Energy ratio `(m_β|ξ′|² + m_α|ξ*′|²)/(m_α|ξ|² + m_β|ξ*|²)` and the relative
/// residual of the energy identity; `None` for a zero denominator.
pub fn energy_ratio(m_alpha: f64, m_beta: f64, s: &RatioSample) -> Option<(f64, f64)> {
    let (xi, xs, xp, xsp) = ratio_velocities(m_alpha, m_beta, s);
    let den = m_alpha * xi.norm_squared() + m_beta * xs.norm_squared();
    if !(den > 0.0) {
        return None;
    }
    let num = m_beta * xp.norm_squared() + m_alpha * xsp.norm_squared();
    let lhs = m_alpha * xi.norm_squared() + m_beta * xp.norm_squared();
    let rhs = m_alpha * xsp.norm_squared() + m_beta * xs.norm_squared();
    let residual = (lhs - rhs).abs() / (lhs + rhs).max(f64::MIN_POSITIVE);
    Some((num / den, residual))
}

fn log_scale<R: Rng>(rng: &mut R) -> f64 {
    10f64.powf(rng.gen_range(-3.0..3.0))
}

fn perpendicular<R: Rng>(rng: &mut R, eta: &Vec3) -> Vec3 {
    if rng.gen_bool(0.25) {
        return Vec3::zeros();
    }
    let v = Vec3::new(rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal));
    let p = v - v.dot(eta) * eta;
    match p.try_normalize(1e-12) {
        Some(u) => log_scale(rng) * u,
        None => Vec3::zeros(),
    }
}

/// Draws one sample with magnitudes spread over six decades; a quarter of
/// the orthogonal components are exactly zero, where the bound is sharpest.
pub fn draw_ratio_sample<R: Rng>(rng: &mut R) -> RatioSample {
    let eta = Vec3::from(UnitSphere.sample(rng));
    let q = log_scale(rng);
    let r = if rng.gen_bool(0.5) { log_scale(rng) } else { -log_scale(rng) };
    let w = perpendicular(rng, &eta);
    let w_tilde = perpendicular(rng, &eta);
    RatioSample { eta, q, r, w, w_tilde }
}

/// Outcome of the brute-force energy-ratio check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoCheck {
    /// Mass of the first species.
    pub m_alpha: f64,
    /// Mass of the second species.
    pub m_beta: f64,
    /// Closed-form bound.
    pub rho: f64,
    /// Samples evaluated.
    pub samples: u64,
    /// Smallest sampled ratio.
    pub min_ratio: f64,
    /// Samples with ratio below `ρ − 1e−12`.
    pub violations: u64,
    /// Largest relative residual of the energy identity.
    pub max_energy_residual: f64,
    /// `min_ratio − ρ` (reported, not asserted).
    pub tightness: f64,
}

const RHO_CHUNK: u64 = 1 << 15;

/// Samples the lemma's parametrization `n` times and compares the energy
/// ratio with `ρ`. Work is split into fixed chunks, each with its own
/// stream, so the result does not depend on the thread count.
pub fn rho_sample_check(m_alpha: f64, m_beta: f64, n: u64, seed: u64) -> Result<RhoCheck> {
    let bound = rho_formula(m_alpha, m_beta)?;
    if m_alpha == m_beta {
        return Err(Error::EqualMasses);
    }
    if n == 0 {
        return Err(Error::EmptySamples);
    }
    let rho = bound.rho;
    let chunks = n.div_ceil(RHO_CHUNK);
    let partial: Vec<(f64, u64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            let count = RHO_CHUNK.min(n - c * RHO_CHUNK);
            let mut min_ratio = f64::INFINITY;
            let mut violations = 0u64;
            let mut max_res: f64 = 0.0;
            let mut done = 0;
            while done < count {
                let s = draw_ratio_sample(&mut rng);
                let Some((ratio, res)) = energy_ratio(m_alpha, m_beta, &s) else {
                    continue;
                };
                done += 1;
                min_ratio = min_ratio.min(ratio);
                max_res = max_res.max(res);
                if ratio < rho - 1e-12 {
                    violations += 1;
                }
            }
            (min_ratio, violations, max_res)
        })
        .collect();
    let (min_ratio, violations, max_energy_residual) = partial
        .iter()
        .fold((f64::INFINITY, 0, 0.0f64), |(a, b, c), &(x, y, z)| (a.min(x), b + y, c.max(z)));
    Ok(RhoCheck {
        m_alpha,
        m_beta,
        rho,
        samples: n,
        min_ratio,
        violations,
        max_energy_residual,
        tightness: min_ratio - rho,
    })
}

// ---------------------------------------------------------------------------
// Kernel symmetry
// ---------------------------------------------------------------------------

/// Maximum relative asymmetry of one kernel over sampled pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryCheck {
    /// Kernel name.
    pub kernel: String,
    /// Number of sampled pairs.
    pub pairs: usize,
    /// `max |k_ij(ξ,ξ*) − k_ji(ξ*,ξ)| / max(|k_ij(ξ,ξ*)|, |k_ji(ξ*,ξ)|)`.
    pub max_relative_asymmetry: f64,
}

/// A sampled pair of components and distinct velocities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPair {
    /// First component.
    pub i: usize,
    /// Second component.
    pub j: usize,
    /// First velocity.
    pub xi: Vec3,
    /// Second velocity.
    pub xi_star: Vec3,
}

/// `count` random pairs: components uniform, velocities Gaussian with
/// standard deviation `spread`.
pub fn sample_kernel_pairs<R: Rng>(components: usize, count: usize, spread: f64, rng: &mut R) -> Vec<KernelPair> {
    let mut gauss = || {
        Vec3::new(rng.sample::<f64, _>(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal))
    };
    let mut draws: Vec<(Vec3, Vec3)> = Vec::with_capacity(count);
    while draws.len() < count {
        let (a, b) = (spread * gauss(), spread * gauss());
        if (a - b).norm() > 1e-6 {
            draws.push((a, b));
        }
    }
    draws
        .into_iter()
        .map(|(xi, xi_star)| KernelPair { i: rng.gen_range(0..components), j: rng.gen_range(0..components), xi, xi_star })
        .collect()
}

/// Relative asymmetry `|a − b| / max(|a|, |b|)` (zero when both vanish).
pub fn relative_asymmetry(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Symmetry `k_ij(ξ, ξ*) = k_ji(ξ*, ξ)` of a kernel over the given pairs.
pub fn kernel_symmetry<F>(name: &str, pairs: &[KernelPair], kernel: F) -> Result<SymmetryCheck>
where
    F: Fn(usize, usize, &Vec3, &Vec3) -> Result<f64> + Sync,
{
    symmetry_impl(name, pairs, true, kernel)
}

/// Symmetry `k_ij(ξ, ξ*) = k_ij(ξ*, ξ)` in the velocities alone, for kernel
/// parts that live in a diagonal block.
pub fn kernel_velocity_symmetry<F>(name: &str, pairs: &[KernelPair], kernel: F) -> Result<SymmetryCheck>
where
    F: Fn(usize, usize, &Vec3, &Vec3) -> Result<f64> + Sync,
{
    symmetry_impl(name, pairs, false, kernel)
}

fn symmetry_impl<F>(name: &str, pairs: &[KernelPair], swap_components: bool, kernel: F) -> Result<SymmetryCheck>
where
    F: Fn(usize, usize, &Vec3, &Vec3) -> Result<f64> + Sync,
{
    if pairs.is_empty() {
        return Err(Error::EmptySamples);
    }
    let worst: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|p| {
            let (i2, j2) = if swap_components { (p.j, p.i) } else { (p.i, p.j) };
            Ok(relative_asymmetry(kernel(p.i, p.j, &p.xi, &p.xi_star)?, kernel(i2, j2, &p.xi_star, &p.xi)?))
        })
        .collect();
    let mut max: f64 = 0.0;
    for w in worst {
        max = max.max(w?);
    }
    Ok(SymmetryCheck { kernel: name.to_string(), pairs: pairs.len(), max_relative_asymmetry: max })
}

/// Symmetry of `k1`, `k2` and `k` of a polyatomic gas, with fresh pairs per
/// kernel.
pub fn kernel_symmetry_poly<S: PolyCrossSection>(
    kern: &PolyKernels<'_, S>,
    pairs: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<SymmetryCheck>> {
    let r = kern.gas().r();
    let spread = 1.5 / kern.gas().mass().sqrt();
    let mut out = Vec::new();
    let p = sample_kernel_pairs(r, pairs, spread, rng);
    out.push(kernel_symmetry("k1", &p, |i, j, a, b| kern.k1(i, j, a, b))?);
    let p = sample_kernel_pairs(r, pairs, spread, rng);
    out.push(kernel_symmetry("k2", &p, |i, j, a, b| kern.k2(i, j, a, b))?);
    let p = sample_kernel_pairs(r, pairs, spread, rng);
    out.push(kernel_symmetry("k", &p, |i, j, a, b| kern.k(i, j, a, b))?);
    Ok(out)
}

/// Symmetry of the loss, same-argument gain, cross gain and full kernels of
/// a mixture. The same-argument gain `k_αβ^(α)` enters the `(α, α)` block,
/// so its symmetry is `k_αβ^(α)(ξ, ξ*) = k_αβ^(α)(ξ*, ξ)`.
pub fn kernel_symmetry_mix<S: MixCrossSection>(
    kern: &MixKernels<'_, S>,
    pairs: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<SymmetryCheck>> {
    let s = kern.mixture().s();
    let m_min = kern.mixture().masses().iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = 1.5 / m_min.sqrt();
    let mut out = Vec::new();
    let p = sample_kernel_pairs(s, pairs, spread, rng);
    out.push(kernel_symmetry("k_loss", &p, |a, b, x, y| kern.loss(a, b, x, y))?);
    let p = sample_kernel_pairs(s, pairs, spread, rng);
    out.push(kernel_velocity_symmetry("k_gain_same", &p, |a, b, x, y| kern.same(a, b, x, y))?);
    let p = sample_kernel_pairs(s, pairs, spread, rng);
    out.push(kernel_symmetry("k_gain_cross", &p, |a, b, x, y| kern.cross(a, b, x, y))?);
    let p = sample_kernel_pairs(s, pairs, spread, rng);
    out.push(kernel_symmetry("k", &p, |a, b, x, y| kern.k(a, b, x, y))?);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Collision frequency
// ---------------------------------------------------------------------------

/// Sampled collision-frequency profile of one component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuProfile {
    /// Component index.
    pub component: usize,
    /// Sample speeds `|ξ|`.
    pub xi_norm: Vec<f64>,
    /// `ν(|ξ|)` at each speed.
    pub nu: Vec<f64>,
}

impl NuProfile {
    /// `ν/(1 + |ξ|)` at each speed.
    pub fn nu_over_1plus(&self) -> Vec<f64> {
        self.xi_norm.iter().zip(&self.nu).map(|(x, n)| n / (1.0 + x)).collect()
    }

    /// Fitted envelope `(c−, c+)`: extremes of `ν/(1 + |ξ|)`.
    pub fn envelope(&self) -> (f64, f64) {
        self.nu_over_1plus().iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// Whether `ν` is nondecreasing along the profile.
    pub fn is_monotone(&self) -> bool {
        self.nu.windows(2).all(|w| w[1] >= w[0])
    }

    /// Relative variation `(max − min)/min` of `ν/|ξ|` over speeds in
    /// `[lo, hi]`; `NaN` when no sample falls in the window.
    pub fn linear_tail_variation(&self, lo: f64, hi: f64) -> f64 {
        let v: Vec<f64> =
            self.xi_norm.iter().zip(&self.nu).filter(|(x, _)| **x >= lo && **x <= hi).map(|(x, n)| n / x).collect();
        if v.is_empty() {
            return f64::NAN;
        }
        let (mn, mx) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        (mx - mn) / mn
    }
}

/// Equispaced speeds `0, …, max` (`points ≥ 2`).
pub fn speed_samples(max: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n).map(|k| max * k as f64 / (n - 1) as f64).collect()
}

/// Profile of `ν_i` for a polyatomic gas.
pub fn nu_profile_poly<S: PolyCrossSection + ?Sized>(
    gas: &PolyatomicGas,
    sigma: &S,
    i: usize,
    speeds: &[f64],
    rule: &NuRule,
) -> Result<NuProfile> {
    if i >= gas.r() {
        return Err(Error::IndexOutOfRange { index: i, count: gas.r() });
    }
    let nu: Result<Vec<f64>> = speeds.par_iter().map(|&x| nu_poly_with(gas, sigma, i, x, rule)).collect();
    Ok(NuProfile { component: i, xi_norm: speeds.to_vec(), nu: nu? })
}

/// Profile of `ν_α` for a mixture.
pub fn nu_profile_mix<S: MixCrossSection + ?Sized>(
    mix: &MixtureSpec,
    sigma: &S,
    alpha: usize,
    speeds: &[f64],
    rule: &NuRule,
) -> Result<NuProfile> {
    if alpha >= mix.s() {
        return Err(Error::IndexOutOfRange { index: alpha, count: mix.s() });
    }
    let nu: Result<Vec<f64>> = speeds.par_iter().map(|&x| nu_mix_with(mix, sigma, alpha, x, rule)).collect();
    Ok(NuProfile { component: alpha, xi_norm: speeds.to_vec(), nu: nu? })
}

// ---------------------------------------------------------------------------
// Null space and nonnegativity
// ---------------------------------------------------------------------------

/// Residuals of the projected invariants and the eigenvalue gap of `L̃`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullSpaceReport {
    /// Dimension of the continuous null space.
    pub expected: usize,
    /// `‖L̃ψ̃‖/‖ψ̃‖` per basis vector.
    pub residuals: Vec<f64>,
    /// `3 · max(residuals)`.
    pub tau_null: f64,
    /// Number of eigenvalues with magnitude at most `τ_null`.
    pub below_threshold: usize,
    /// `|λ_(expected+1)| / τ_null` with eigenvalues ordered by magnitude.
    pub gap_ratio: f64,
    /// The `expected + 3` eigenvalues of smallest magnitude, in that order.
    pub smallest: Vec<f64>,
    /// Smallest eigenvalue.
    pub lambda_min: f64,
    /// Largest eigenvalue.
    pub lambda_max: f64,
    /// Residual of a random unit vector (negative control).
    pub random_residual: f64,
}

impl NullSpaceReport {
    /// Count equals the expected dimension and the gap ratio is at least 10.
    pub fn passes(&self) -> bool {
        self.below_threshold == self.expected && self.gap_ratio >= 10.0
    }

    /// `λ_min ≥ −tol · λ_max`.
    pub fn nonnegative(&self, tol: f64) -> bool {
        self.lambda_min >= -tol * self.lambda_max
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn matvec(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (m * nalgebra::DVector::from_column_slice(v)).as_slice().to_vec()
}

/// Null-space analysis of a symmetric matrix given candidate null vectors.
pub fn nullspace_report(l: &DMatrix<f64>, vectors: &[Vec<f64>], seed: u64) -> Result<NullSpaceReport> {
    let residuals: Vec<f64> = vectors
        .iter()
        .map(|v| {
            let nv = norm(v);
            if nv == 0.0 {
                f64::NAN
            } else {
                norm(&matvec(l, v)) / nv
            }
        })
        .collect();
    let tau_null = 3.0 * residuals.iter().cloned().fold(0.0, f64::max);
    let ev = symmetric_eigenvalues(l.clone())?;
    let lambda_min = ev.first().copied().unwrap_or(f64::NAN);
    let lambda_max = ev.last().copied().unwrap_or(f64::NAN);
    let mut by_mag = ev.clone();
    by_mag.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    let expected = vectors.len();
    let below_threshold = by_mag.iter().filter(|v| v.abs() <= tau_null).count();
    let gap_ratio = by_mag.get(expected).map_or(f64::NAN, |v| v.abs() / tau_null);
    let smallest = by_mag.iter().take(expected + 3).copied().collect();
    let mut rng = stream_rng(seed, 0);
    let random: Vec<f64> = (0..l.nrows()).map(|_| rng.sample(StandardNormal)).collect();
    let random_residual = norm(&matvec(l, &random)) / norm(&random);
    Ok(NullSpaceReport {
        expected,
        residuals,
        tau_null,
        below_threshold,
        gap_ratio,
        smallest,
        lambda_min,
        lambda_max,
        random_residual,
    })
}

/// Projects `√w M^{1/2} ψ` for each basis field and analyses `L̃`.
pub fn test_nullspace(op: &LinearizedOperator, basis: &CollisionInvariantBasis, seed: u64) -> Result<NullSpaceReport> {
    let vectors: Vec<Vec<f64>> = basis.fields().iter().map(|f| op.sample(f)).collect();
    nullspace_report(&op.l_matrix(), &vectors, seed)
}

// ---------------------------------------------------------------------------
// Consistency with the direct collision integral
// ---------------------------------------------------------------------------

/// Agreement between the assembled and the directly evaluated operator on a
/// smooth test function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyCheck {
    /// Nodes per axis.
    pub n: usize,
    /// `‖K̃h̃ − νh̃ + (L h)~‖ / ‖h̃‖`.
    pub relative_error: f64,
}

/// Measures `‖K̃h̃ − νh̃ + (L_direct h)~‖/‖h̃‖` for a field `h`.
pub fn operator_consistency(
    op: &LinearizedOperator,
    gas: &PolyatomicGas,
    model: &CrossSectionModel,
    h: &DistributionField,
    rules: &DirectRules,
) -> Result<ConsistencyCheck> {
    let ht = op.sample(h);
    let kh = op.apply_k(&ht);
    let n = op.grid.len();
    let sw = op.grid.weight.sqrt();
    let direct: Result<Vec<f64>> = (0..op.rows())
        .into_par_iter()
        .map(|p| Ok(sw * apply_l_direct(gas, model, h, &op.grid.nodes[p % n], p / n, rules)?))
        .collect();
    let direct = direct?;
    let diff: Vec<f64> = (0..op.rows()).map(|p| kh[p] - op.nu[p] * ht[p] + direct[p]).collect();
    Ok(ConsistencyCheck { n: op.grid.n, relative_error: norm(&diff) / norm(&ht) })
}

// ---------------------------------------------------------------------------
// Truncation and Hilbert–Schmidt behaviour
// ---------------------------------------------------------------------------

/// One point of the truncation sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPoint {
    /// Truncation parameter.
    pub n: usize,
    /// `S(N) = max_ξ max_i Σ_j ∫_{|ξ−ξ*|<1/N} k2_ij(ξ, ξ*) dξ*` over the
    /// sample of `ξ` with `|ξ| ≤ N`.
    pub s: f64,
}

/// Result of the truncation sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationDecay {
    /// Sweep values in the order requested.
    pub points: Vec<TruncationPoint>,
    /// Whether `S` strictly decreases along the sweep.
    pub strictly_decreasing: bool,
    /// `S(last)/S(first)`.
    pub ratio: f64,
}

/// Velocities sampled per truncation level.
pub const TRUNCATION_SAMPLES: usize = 64;

/// `S(N)` for one truncation level.
pub fn truncation_tail<S: PolyCrossSection>(kern: &PolyKernels<'_, S>, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Config("truncation level must be positive".into()));
    }
    let eps = 1.0 / n as f64;
    let radial = GaussRule::legendre(8)?.on_interval(0.0, eps);
    let sphere = sphere_rule(8)?;
    let r = kern.gas().r();
    let xs = halton_ball(TRUNCATION_SAMPLES, n as f64);
    let values: Vec<Result<f64>> = xs
        .par_iter()
        .map(|xi| {
            let mut best: f64 = 0.0;
            for i in 0..r {
                let mut acc = 0.0;
                for (&g, &wg) in radial.nodes.iter().zip(&radial.weights) {
                    for (dir, &ws) in sphere.nodes.iter().zip(&sphere.weights) {
                        let xs = xi - g * dir;
                        for j in 0..r {
                            acc += wg * g * g * ws * kern.k2(i, j, xi, &xs)?;
                        }
                    }
                }
                best = best.max(acc);
            }
            Ok(best)
        })
        .collect();
    let mut s: f64 = 0.0;
    for v in values {
        s = s.max(v?);
    }
    Ok(s)
}

/// Sweeps `S(N)` over ascending truncation levels.
pub fn test_truncation_decay<S: PolyCrossSection>(kern: &PolyKernels<'_, S>, levels: &[usize]) -> Result<TruncationDecay> {
    if levels.is_empty() {
        return Err(Error::EmptySamples);
    }
    if levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("truncation levels must be strictly ascending".into()));
    }
    let points: Result<Vec<TruncationPoint>> =
        levels.iter().map(|&n| Ok(TruncationPoint { n, s: truncation_tail(kern, n)? })).collect();
    let points = points?;
    let strictly_decreasing = points.windows(2).all(|w| w[1].s < w[0].s);
    let ratio = points.last().unwrap().s / points[0].s;
    Ok(TruncationDecay { points, strictly_decreasing, ratio })
}

/// Contributions of spherical shells to `∫∫ k² dξ dξ*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsNormTable {
    /// Shell boundaries (ascending).
    pub radii: Vec<f64>,
    /// Contribution of `{radii[k] ≤ max(|ξ|, |ξ*|) < radii[k+1]}`.
    pub shells: Vec<f64>,
}

impl HsNormTable {
    /// `shells[k+1]/shells[k]`.
    pub fn ratios(&self) -> Vec<f64> {
        self.shells.windows(2).map(|w| w[1] / w[0]).collect()
    }

    /// Largest ratio among consecutive shells whose inner radius is at least
    /// `from`.
    pub fn max_ratio_beyond(&self, from: f64) -> f64 {
        self.ratios()
            .iter()
            .enumerate()
            .filter(|(k, _)| self.radii[*k] >= from)
            .map(|(_, r)| *r)
            .fold(f64::NAN, f64::max)
    }
}

/// Gauss order per coordinate of the shell integrals.
pub const HS_ORDER: usize = 12;

/// Shell table for a rotation-invariant squared kernel `kernel_sq(ξ, ξ*)`
/// (already summed over components). Each shell uses
/// `2 · 8π² ∫_{ρ∈shell} ∫_0^ρ ∫_{−1}^{1} ρ² ρ*² k²` with `ξ = ρ e_z`.
pub fn hs_shell_table<F>(kernel_sq: F, radii: &[f64]) -> Result<HsNormTable>
where
    F: Fn(&Vec3, &Vec3) -> Result<f64> + Sync,
{
    if radii.len() < 2 || radii.windows(2).any(|w| w[1] <= w[0]) || radii[0] < 0.0 {
        return Err(Error::Config("shell radii must be ascending and nonnegative".into()));
    }
    let gl = GaussRule::legendre(HS_ORDER)?;
    let cos_rule = gl.on_interval(-1.0, 1.0);
    let shells: Result<Vec<f64>> = radii
        .windows(2)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|w| {
            let outer = gl.on_interval(w[0], w[1]);
            let mut acc = 0.0;
            for (&rho, &wr) in outer.nodes.iter().zip(&outer.weights) {
                let inner = gl.on_interval(0.0, rho);
                let xi = Vec3::new(0.0, 0.0, rho);
                for (&rs, &wi) in inner.nodes.iter().zip(&inner.weights) {
                    for (&c, &wc) in cos_rule.nodes.iter().zip(&cos_rule.weights) {
                        let s = (1.0 - c * c).max(0.0).sqrt();
                        let xs = Vec3::new(rs * s, 0.0, rs * c);
                        acc += wr * wi * wc * rho * rho * rs * rs * kernel_sq(&xi, &xs)?;
                    }
                }
            }
            Ok(2.0 * 8.0 * PI * PI * acc)
        })
        .collect();
    Ok(HsNormTable { radii: radii.to_vec(), shells: shells? })
}

/// Shell table of `Σ_ij k1_ij²` for a polyatomic gas.
pub fn test_hs_norm<S: PolyCrossSection>(kern: &PolyKernels<'_, S>, radii: &[f64]) -> Result<HsNormTable> {
    let r = kern.gas().r();
    hs_shell_table(
        |x, y| {
            let mut s = 0.0;
            for i in 0..r {
                for j in 0..r {
                    s += kern.k1(i, j, x, y)?.powi(2);
                }
            }
            Ok(s)
        },
        radii,
    )
}

/// Shell table of `Σ_αβ k1_αβ²` for a mixture.
pub fn test_hs_norm_mix_loss<S: MixCrossSection>(kern: &MixKernels<'_, S>, radii: &[f64]) -> Result<HsNormTable> {
    let s = kern.mixture().s();
    hs_shell_table(
        |x, y| {
            let mut acc = 0.0;
            for a in 0..s {
                for b in 0..s {
                    acc += kern.loss(a, b, x, y)?.powi(2);
                }
            }
            Ok(acc)
        },
        radii,
    )
}

/// Shell table of the squared cross-gain kernel `k_αβ` of one species pair.
pub fn test_hs_norm_cross<S: MixCrossSection>(
    kern: &MixKernels<'_, S>,
    alpha: usize,
    beta: usize,
    radii: &[f64],
) -> Result<HsNormTable> {
    hs_shell_table(|x, y| Ok(kern.cross(alpha, beta, x, y)?.powi(2)), radii)
}

// ---------------------------------------------------------------------------
// Test fields for the weak-form checks
// ---------------------------------------------------------------------------

/// Perturbed Maxwellian used by the conservation check: a drifting, heated
/// Maxwellian times `1 + 0.3 (i+1)/r · ξ_x e^{−|ξ|²/8}` (strictly positive).
pub fn perturbed_maxwellian(gas: &PolyatomicGas) -> DistributionField {
    let base = general_maxwellian_poly(gas, 1.1, Vec3::new(0.3, -0.2, 0.1), 1.2);
    let r = gas.r() as f64;
    DistributionField::new(gas.r(), move |i, x| {
        base.eval(i, x) * (1.0 + 0.3 * (i as f64 + 1.0) / r * x[0] * (-x.norm_squared() / 8.0).exp())
    })
}

/// Random strictly positive distribution: a random Maxwellian with
/// independent level populations and a bounded oscillating modulation.
pub fn random_positive_field<R: Rng>(gas: &PolyatomicGas, rng: &mut R) -> DistributionField {
    let n = rng.gen_range(0.5..2.0);
    let u = Vec3::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
    let t = rng.gen_range(0.7..1.5);
    let base = general_maxwellian_poly(gas, n, u, t);
    let levels: Vec<f64> = (0..gas.r()).map(|_| rng.gen_range(-0.5..0.5f64).exp()).collect();
    let amp = rng.gen_range(0.0..0.5);
    let k = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let phase = rng.gen_range(0.0..2.0 * PI);
    DistributionField::new(gas.r(), move |i, x| base.eval(i, x) * levels[i] * (1.0 + amp * (k.dot(x) + phase).sin()))
}

/// Smooth, non-equilibrium perturbation `h` used by the `Γ` check.
pub fn gamma_test_field(gas: &PolyatomicGas) -> DistributionField {
    let m = gas.mass();
    DistributionField::new(gas.r(), move |i, x| {
        (-0.125 * m * x.norm_squared()).exp() * (1.0 + 0.5 * x[0] - 0.25 * x[1] * x[2] + 0.2 * i as f64)
    })
}

/// Off-centre Gaussian bump `e^{−|ξ − c|²/2}` with `c = (0.5, −0.3, 0.2)`,
/// identical in every component.
pub fn gaussian_bump(components: usize) -> DistributionField {
    let c = Vec3::new(0.5, -0.3, 0.2);
    DistributionField::new(components, move |_, x| (-0.5 * (x - c).norm_squared()).exp())
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

/// Which groups of checks to run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteSelection {
    /// Cross-section structure (microreversibility and symmetry relations).
    pub cross_section: bool,
    /// Pointwise kernel symmetry.
    pub symmetry: bool,
    /// Collision-frequency envelopes.
    pub nu: bool,
    /// Null space of the assembled operator.
    pub nullspace: bool,
    /// Nonnegativity of the assembled operator.
    pub positivity: bool,
    /// Assembled versus direct operator.
    pub consistency: bool,
    /// Conservation of the nonlinear operator.
    pub conservation: bool,
    /// Entropy dissipation.
    pub entropy: bool,
    /// Orthogonality of the quadratic term to the invariants.
    pub gamma: bool,
    /// Energy-ratio lemma.
    pub rho: bool,
    /// Truncation decay of the gain kernel.
    pub truncation: bool,
    /// Shell decay of the squared kernel.
    pub hs_norm: bool,
}

impl Default for SuiteSelection {
    fn default() -> Self {
        Self::all()
    }
}

impl SuiteSelection {
    /// Every check.
    pub fn all() -> Self {
        Self {
            cross_section: true,
            symmetry: true,
            nu: true,
            nullspace: true,
            positivity: true,
            consistency: true,
            conservation: true,
            entropy: true,
            gamma: true,
            rho: true,
            truncation: true,
            hs_norm: true,
        }
    }

    /// No check.
    pub fn none() -> Self {
        Self {
            cross_section: false,
            symmetry: false,
            nu: false,
            nullspace: false,
            positivity: false,
            consistency: false,
            conservation: false,
            entropy: false,
            gamma: false,
            rho: false,
            truncation: false,
            hs_norm: false,
        }
    }
}

/// Numerical settings of the suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    /// Global seed.
    pub seed: u64,
    /// Grid nodes per axis (even).
    pub grid_n: usize,
    /// Grid half-width.
    pub grid_r: f64,
    /// Sphere order of the kernel rules.
    pub sphere_order: usize,
    /// Radial nodes of the plane rule.
    pub plane_radial: usize,
    /// Angular nodes of the plane rule.
    pub plane_angular: usize,
    /// Plane-rule radius.
    pub plane_rmax: f64,
    /// Collision-frequency rule.
    pub nu_rule: NuRule,
    /// Maximum operator rows.
    pub size_cap: usize,
    /// Pairs per kernel in the symmetry check.
    pub symmetry_pairs: usize,
    /// Samples of the channel checks.
    pub channel_samples: usize,
    /// Speeds of the collision-frequency profile.
    pub nu_points: usize,
    /// Largest speed of the collision-frequency profile.
    pub nu_max: f64,
    /// Grids (nodes per axis) of the consistency check; the first one is
    /// thresholded, later ones must improve on it.
    pub consistency_grids: Vec<usize>,
    /// Random positive fields in the entropy check.
    pub entropy_fields: usize,
    /// Samples per mass pair in the energy-ratio check.
    pub rho_samples: u64,
    /// Mass pairs of the energy-ratio check.
    pub rho_pairs: Vec<(f64, f64)>,
    /// Truncation levels.
    pub truncation_levels: Vec<usize>,
    /// Shell radii of the squared-kernel table.
    pub hs_radii: Vec<f64>,
    /// Checks to run.
    pub selection: SuiteSelection,
    /// Fault injection: scale `σ` by this factor on one half of the channels
    /// in the cross-section and symmetry checks (breaks microreversibility).
    pub inject_asymmetry: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 20240917,
            grid_n: 8,
            grid_r: 5.0,
            sphere_order: crate::kernels::DEFAULT_SPHERE_ORDER,
            plane_radial: crate::quadrature::DEFAULT_PLANE_RADIAL,
            plane_angular: crate::quadrature::DEFAULT_PLANE_ANGULAR,
            plane_rmax: crate::quadrature::DEFAULT_PLANE_RMAX,
            nu_rule: NuRule::default(),
            size_cap: crate::operator::DEFAULT_SIZE_CAP,
            symmetry_pairs: 100,
            channel_samples: 2000,
            nu_points: 50,
            nu_max: 10.0,
            consistency_grids: vec![8, 12],
            entropy_fields: 20,
            rho_samples: 1_000_000,
            rho_pairs: vec![(4.0, 1.0), (2.0, 1.0), (10.0, 3.0)],
            truncation_levels: vec![2, 4, 8, 16],
            hs_radii: (0..=8).map(f64::from).collect(),
            selection: SuiteSelection::all(),
            inject_asymmetry: None,
        }
    }
}

impl SuiteConfig {
    /// Validates ranges.
    pub fn validate(&self) -> Result<()> {
        if self.grid_n == 0 || self.grid_n % 2 == 1 {
            return Err(Error::OddGrid(self.grid_n));
        }
        if let Some(&n) = self.consistency_grids.iter().find(|n| **n == 0 || **n % 2 == 1) {
            return Err(Error::OddGrid(n));
        }
        if !(self.grid_r > 0.0) {
            return Err(Error::Config("grid half-width must be positive".into()));
        }
        if self.sphere_order < 2 || self.plane_radial < 2 || self.plane_angular < 2 {
            return Err(Error::Config("quadrature orders must be at least 2".into()));
        }
        if self.nu_rule.radial < 2 || self.nu_rule.inner < 2 {
            return Err(Error::Config("collision-frequency orders must be at least 2".into()));
        }
        if self.symmetry_pairs == 0 || self.channel_samples == 0 || self.rho_samples == 0 || self.nu_points < 2 {
            return Err(Error::Config("sample counts must be positive".into()));
        }
        Ok(())
    }

    /// Kernel rules described by the configuration; the plane-rule grading
    /// follows the growth exponent of the cross section.
    pub fn kernel_rules(&self, sigma: &CrossSectionModel) -> Result<KernelRules> {
        KernelRules::new(self.sphere_order, self.plane_radial, self.plane_angular, self.plane_rmax, sigma.grading_gamma())
    }

    fn assembly_options(&self) -> AssemblyOptions {
        AssemblyOptions { size_cap: self.size_cap, nu_rule: self.nu_rule }
    }
}

/// A measured value: finite numbers are stored as is, anything else as
/// `null`, so reports always round-trip through JSON.
pub type Measured = BTreeMap<String, Option<f64>>;

/// One named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    /// Check name (unique within a report).
    pub name: String,
    /// Measured quantities.
    pub measured: Measured,
    /// Threshold the headline quantity is compared with.
    pub threshold: f64,
    /// Whether the check passed.
    pub pass: bool,
    /// Wall-clock seconds; kept out of the serialized report so that
    /// reruns are byte-identical.
    #[serde(skip)]
    pub runtime_seconds: f64,
}

/// Grid provenance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    /// Nodes per axis.
    pub n: usize,
    /// Half-width.
    pub r: f64,
}

/// Structured outcome of a suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Layout version.
    pub schema_version: u32,
    /// Global seed.
    pub seed: u64,
    /// Model family.
    pub family: String,
    /// Model definition as loaded.
    pub model: serde_json::Value,
    /// SHA-256 of the canonical model JSON.
    pub model_hash: String,
    /// Grid.
    pub grid: GridInfo,
    /// Full configuration.
    pub config: SuiteConfig,
    /// Checks in execution order.
    pub checks: Vec<CheckResult>,
    /// Whether every check passed.
    pub all_passed: bool,
}

impl VerificationReport {
    /// Looks a check up by name.
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Names of failing checks.
    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect()
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let values: Vec<String> = c
                .measured
                .iter()
                .map(|(k, v)| format!("{k}={}", v.map_or("null".to_string(), |x| format!("{x:.6e}"))))
                .collect();
            out.push_str(&format!(
                "{} {} (threshold {:.3e}) {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.threshold,
                values.join(" ")
            ));
        }
        out
    }
}

struct Recorder {
    checks: Vec<CheckResult>,
}

impl Recorder {
    fn record<F>(&mut self, name: &str, threshold: f64, f: F) -> Result<()>
    where
        F: FnOnce() -> Result<(Vec<(String, f64)>, bool)>,
    {
        let start = Instant::now();
        let (values, pass) = f()?;
        let measured = values.into_iter().map(|(k, v)| (k, if v.is_finite() { Some(v) } else { None })).collect();
        self.checks.push(CheckResult {
            name: name.to_string(),
            measured,
            threshold,
            pass,
            runtime_seconds: start.elapsed().as_secs_f64(),
        });
        Ok(())
    }
}

fn kv(name: impl Into<String>, v: f64) -> (String, f64) {
    (name.into(), v)
}

/// Runs every selected check that applies to the model family and collects
/// the results. Errors are configuration or evaluation failures; failing
/// checks are reported in the result, not as errors.
pub fn run_suite(model: &ModelFile, config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let rules = config.kernel_rules(&model.sigma)?;
    let sel = &config.selection;
    let mut rec = Recorder { checks: Vec::new() };
    match &model.gas {
        GasModel::Polyatomic(gas) => {
            let sigma = model.sigma.poly()?;
            if sel.cross_section {
                let mut rng = stream_rng(config.seed, 1);
                let samples = sample_open_channels(gas, config.channel_samples, 10.0 / gas.mass().sqrt(), &mut rng);
                let (micro, rel) = match config.inject_asymmetry {
                    Some(f) => {
                        let s = AsymmetricPerturbation { base: sigma, factor: f };
                        (check_microreversibility(&s, gas, &samples)?, check_symmetry_relations(&s, gas, &samples)?)
                    }
                    None => (check_microreversibility(&sigma, gas, &samples)?, check_symmetry_relations(&sigma, gas, &samples)?),
                };
                rec.record("cross_section_relations", 1e-12, || {
                    Ok((
                        vec![kv("microreversibility_residual", micro), kv("symmetry_relation_residual", rel)],
                        micro <= 1e-12 && rel <= 1e-12,
                    ))
                })?;
            }
            if sel.symmetry {
                rec.record("kernel_symmetry", 1e-8, || {
                    let mut rng = stream_rng(config.seed, 2);
                    let checks = match config.inject_asymmetry {
                        Some(f) => kernel_symmetry_poly(
                            &PolyKernels::new(gas, AsymmetricPerturbation { base: sigma, factor: f }, &rules),
                            config.symmetry_pairs,
                            &mut rng,
                        )?,
                        None => kernel_symmetry_poly(&PolyKernels::new(gas, sigma, &rules), config.symmetry_pairs, &mut rng)?,
                    };
                    symmetry_values(&checks)
                })?;
            }
            let kern = PolyKernels::new(gas, sigma, &rules);
            if sel.nu {
                let speeds = speed_samples(config.nu_max, config.nu_points);
                record_nu(&mut rec, || {
                    (0..gas.r()).map(|i| nu_profile_poly(gas, &sigma, i, &speeds, &config.nu_rule)).collect()
                })?;
            }
            if sel.nullspace || sel.positivity {
                let grid = build_grid(config.grid_n, config.grid_r)?;
                let op = assemble_poly_with(gas, sigma, &grid, &rules, &config.assembly_options())?;
                let report = test_nullspace(&op, &gas_basis(&model.gas), config.seed)?;
                record_nullspace(&mut rec, sel, &report)?;
            }
            if sel.consistency {
                record_consistency(&mut rec, gas, &model.sigma, config, &rules)?;
            }
            let wf = WeakFormRules::default();
            if sel.conservation {
                rec.record("conservation", 1e-6, || {
                    let forms = conservation_weak_forms(gas, &model.sigma, &perturbed_maxwellian(gas), &wf)?;
                    let worst = forms.iter().map(|f| f.relative()).fold(0.0, f64::max);
                    let mut v: Vec<(String, f64)> =
                        forms.iter().enumerate().map(|(p, f)| kv(format!("relative_{p}"), f.relative())).collect();
                    v.push(kv("max_relative", worst));
                    Ok((v, worst <= 1e-6))
                })?;
            }
            if sel.entropy {
                rec.record("entropy_production", 1e-12, || {
                    let mut rng = stream_rng(config.seed, 3);
                    let mut worst = f64::NEG_INFINITY;
                    for _ in 0..config.entropy_fields {
                        let f = random_positive_field(gas, &mut rng);
                        worst = worst.max(entropy_production_poly(gas, &model.sigma, &f, &wf)?.value());
                    }
                    let at_eq = entropy_production_poly(gas, &model.sigma, &maxwellian_field_poly(gas), &wf)?.value();
                    Ok((
                        vec![kv("max_w", worst), kv("w_maxwellian", at_eq), kv("fields", config.entropy_fields as f64)],
                        worst <= 1e-12 && at_eq.abs() <= 1e-10,
                    ))
                })?;
            }
            if sel.gamma {
                rec.record("gamma_orthogonality", 1e-6, || {
                    let forms = gamma_weak_forms(gas, &model.sigma, &gamma_test_field(gas), &wf)?;
                    let worst = forms.iter().map(|f| f.relative()).fold(0.0, f64::max);
                    Ok((vec![kv("max_relative", worst)], worst <= 1e-6))
                })?;
            }
            if sel.truncation {
                rec.record("truncation_decay", 0.2, || {
                    let d = test_truncation_decay(&kern, &config.truncation_levels)?;
                    let mut v: Vec<(String, f64)> = d.points.iter().map(|p| kv(format!("s_{}", p.n), p.s)).collect();
                    v.push(kv("ratio", d.ratio));
                    Ok((v, d.strictly_decreasing && d.ratio < 0.2))
                })?;
            }
            if sel.hs_norm {
                rec.record("hs_shell_decay", 0.5, || hs_values(&test_hs_norm(&kern, &config.hs_radii)?))?;
            }
        }
        GasModel::Mixture(mix) => {
            let sigma = model.sigma.mix(mix.s())?;
            if sel.symmetry {
                rec.record("kernel_symmetry", 1e-8, || {
                    let mut rng = stream_rng(config.seed, 2);
                    let checks = match config.inject_asymmetry {
                        Some(f) => kernel_symmetry_mix(
                            &MixKernels::new(mix, AsymmetricPerturbation { base: sigma.clone(), factor: f }, &rules),
                            config.symmetry_pairs,
                            &mut rng,
                        )?,
                        None => kernel_symmetry_mix(
                            &MixKernels::new(mix, sigma.clone(), &rules),
                            config.symmetry_pairs,
                            &mut rng,
                        )?,
                    };
                    symmetry_values(&checks)
                })?;
            }
            if sel.nu {
                let speeds = speed_samples(config.nu_max, config.nu_points);
                record_nu(&mut rec, || {
                    (0..mix.s()).map(|a| nu_profile_mix(mix, &sigma, a, &speeds, &config.nu_rule)).collect()
                })?;
            }
            if sel.nullspace || sel.positivity {
                let grid = build_grid(config.grid_n, config.grid_r)?;
                let op = assemble_mix_with(mix, sigma.clone(), &grid, &rules, &config.assembly_options())?;
                let report = test_nullspace(&op, &gas_basis(&model.gas), config.seed)?;
                record_nullspace(&mut rec, sel, &report)?;
            }
            if sel.hs_norm {
                let kern = MixKernels::new(mix, sigma.clone(), &rules);
                rec.record("hs_shell_decay", 0.5, || hs_values(&test_hs_norm_mix_loss(&kern, &config.hs_radii)?))?;
            }
        }
    }
    if sel.rho {
        rec.record("energy_ratio_lemma", 1e-12, || {
            let mut v = Vec::new();
            let mut pass = true;
            for (p, &(ma, mb)) in config.rho_pairs.iter().enumerate() {
                let c = rho_sample_check(ma, mb, config.rho_samples, config.seed.wrapping_add(1000 + p as u64))?;
                let tag = format!("{ma}_{mb}");
                v.push(kv(format!("rho_{tag}"), c.rho));
                v.push(kv(format!("min_ratio_{tag}"), c.min_ratio));
                v.push(kv(format!("violations_{tag}"), c.violations as f64));
                v.push(kv(format!("energy_residual_{tag}"), c.max_energy_residual));
                pass &= c.violations == 0 && c.max_energy_residual <= 1e-12;
            }
            Ok((v, pass))
        })?;
    }
    let all_passed = rec.checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        seed: config.seed,
        family: model.gas.family().to_string(),
        model: model.to_json_value(),
        model_hash: model.hash(),
        grid: GridInfo { n: config.grid_n, r: config.grid_r },
        config: config.clone(),
        checks: rec.checks,
        all_passed,
    })
}

fn gas_basis(gas: &GasModel) -> CollisionInvariantBasis {
    gas.kernel_basis()
}

fn symmetry_values(checks: &[SymmetryCheck]) -> Result<(Vec<(String, f64)>, bool)> {
    let worst = checks.iter().map(|c| c.max_relative_asymmetry).fold(0.0, f64::max);
    let mut v: Vec<(String, f64)> = checks.iter().map(|c| kv(c.kernel.clone(), c.max_relative_asymmetry)).collect();
    v.push(kv("max", worst));
    Ok((v, worst <= 1e-8))
}

fn record_nu<F>(rec: &mut Recorder, profiles: F) -> Result<()>
where
    F: FnOnce() -> Result<Vec<NuProfile>>,
{
    rec.record("nu_envelope", 10.0, || {
        let profiles = profiles()?;
        let mut v = Vec::new();
        let mut pass = true;
        for p in &profiles {
            let (lo, hi) = p.envelope();
            let tail = p.linear_tail_variation(8.0, 10.0);
            v.push(kv(format!("c_minus_{}", p.component), lo));
            v.push(kv(format!("c_plus_{}", p.component), hi));
            v.push(kv(format!("tail_variation_{}", p.component), tail));
            pass &= lo > 0.0 && hi / lo <= 10.0 && tail <= 0.05 && p.is_monotone();
        }
        Ok((v, pass))
    })
}

fn record_nullspace(rec: &mut Recorder, sel: &SuiteSelection, r: &NullSpaceReport) -> Result<()> {
    if sel.nullspace {
        rec.record("nullspace", 10.0, || {
            let mut v: Vec<(String, f64)> = r.residuals.iter().enumerate().map(|(p, x)| kv(format!("residual_{p}"), *x)).collect();
            v.push(kv("tau_null", r.tau_null));
            v.push(kv("below_threshold", r.below_threshold as f64));
            v.push(kv("expected", r.expected as f64));
            v.push(kv("gap_ratio", r.gap_ratio));
            v.push(kv("random_residual", r.random_residual));
            Ok((v, r.passes()))
        })?;
    }
    if sel.positivity {
        rec.record("nonnegativity", 1e-8, || {
            Ok((vec![kv("lambda_min", r.lambda_min), kv("lambda_max", r.lambda_max)], r.nonnegative(1e-8)))
        })?;
    }
    Ok(())
}

fn record_consistency(
    rec: &mut Recorder,
    gas: &PolyatomicGas,
    model: &CrossSectionModel,
    config: &SuiteConfig,
    rules: &KernelRules,
) -> Result<()> {
    rec.record("operator_consistency", 0.02, || {
        // The direct oracle costs one full collision integral per row, so the
        // comparison runs on the single-level reduction of the gas (same
        // mass and cross-section family).
        let mono = PolyatomicGas::monatomic(gas.mass())?;
        let h = gaussian_bump(1);
        let direct = DirectRules::default();
        let mut errs = Vec::new();
        for &n in &config.consistency_grids {
            let grid = build_grid(n, config.grid_r)?;
            let op = assemble_poly_with(&mono, model.poly()?, &grid, rules, &config.assembly_options())?;
            errs.push(operator_consistency(&op, &mono, model, &h, &direct)?);
        }
        let v: Vec<(String, f64)> = errs.iter().map(|c| kv(format!("relative_error_n{}", c.n), c.relative_error)).collect();
        let decreasing = errs.windows(2).all(|w| w[1].relative_error < w[0].relative_error);
        let pass = errs.first().is_some_and(|c| c.relative_error <= 0.02) && decreasing;
        Ok((v, pass))
    })
}

fn hs_values(t: &HsNormTable) -> Result<(Vec<(String, f64)>, bool)> {
    let mut v: Vec<(String, f64)> = t.shells.iter().enumerate().map(|(k, s)| kv(format!("shell_{}", t.radii[k]), *s)).collect();
    let worst = t.max_ratio_beyond(4.0);
    v.push(kv("max_ratio_beyond_4", worst));
    let pass = t.shells.iter().all(|s| *s >= 0.0) && worst < 0.5;
    Ok((v, pass))
}
