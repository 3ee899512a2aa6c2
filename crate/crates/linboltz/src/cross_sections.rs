//! Scattering cross sections for both model families, together with checks of
//! the structural assumptions every admissible cross section must satisfy:
//! microreversibility, the channel symmetry relations, and the growth bounds.
//!
//! Cross sections here depend on the relative speed only (isotropic
//! scattering); the `cos_theta` argument of the public evaluators is accepted
//! for interface completeness and ignored.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas_models::{MixtureSpec, PolyatomicGas};

/// Default cross-section constant.
pub const DEFAULT_C: f64 = 1.0;
/// Default growth exponent of the bounded families.
pub const DEFAULT_GAMMA: f64 = 0.5;

fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}

/// Cross-section families. In model files the variant name is stored under
/// `"variant"` and the constant under `"C"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum CrossSectionModel {
    /// Polyatomic hard spheres:
    /// `σ_ij^kl = C √(|g|² − 4ΔI/m) / (|g| φ_i φ_j)` on open channels.
    PolyHardSphere {
        /// Overall constant `C > 0`.
        #[serde(rename = "C")]
        c: f64,
    },
    /// Polyatomic family saturating the growth bound:
    /// `σ_ij^kl = C (Ψ + Ψ^{γ/2}) / (|g|² φ_i φ_j)` with
    /// `Ψ = |g| √(|g|² − 4ΔI/m)`, on open channels.
    PolyBounded {
        /// Overall constant `C > 0`.
        #[serde(rename = "C")]
        c: f64,
        /// Exponent `0 < γ < 1`.
        #[serde(default = "default_gamma")]
        gamma: f64,
    },
    /// Mixture hard spheres `σ_αβ = C_αβ` with a symmetric positive matrix.
    MixHardSphere {
        /// Symmetric matrix of constants `C_αβ > 0`.
        #[serde(rename = "C")]
        c: Vec<Vec<f64>>,
    },
    /// Mixture family saturating the growth bound:
    /// `σ_αβ = C (1 + |g|^{γ−2})`.
    MixBounded {
        /// Overall constant `C > 0`.
        #[serde(rename = "C")]
        c: f64,
        /// Exponent `0 < γ < 1`.
        #[serde(default = "default_gamma")]
        gamma: f64,
    },
}

/// Cross section of a polyatomic gas as a function of channel and relative
/// speed. Implementations return 0 on closed channels (`m|g|² ≤ 4ΔI`).
pub trait PolyCrossSection: Sync {
    /// `σ_ij^kl(|g|)` for `|g| > 0`.
    fn sigma(&self, gas: &PolyatomicGas, i: usize, j: usize, k: usize, l: usize, g: f64) -> f64;
}

/// Cross section of a mixture as a function of species pair and relative
/// speed.
pub trait MixCrossSection: Sync {
    /// `σ_αβ(|g|)` for `|g| > 0`.
    fn sigma(&self, mix: &MixtureSpec, alpha: usize, beta: usize, g: f64) -> f64;

    /// `Some(σ_αβ)` when `σ_αβ` does not depend on the relative speed, which
    /// lets kernels skip quadrature loops whose only speed dependence is `σ`.
    fn speed_independent(&self, _alpha: usize, _beta: usize) -> Option<f64> {
        None
    }
}

/// Validated polyatomic cross section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolySigma {
    /// See [`CrossSectionModel::PolyHardSphere`].
    HardSphere {
        /// Constant `C`.
        c: f64,
    },
    /// See [`CrossSectionModel::PolyBounded`].
    Bounded {
        /// Constant `C`.
        c: f64,
        /// Exponent `γ`.
        gamma: f64,
    },
}

/// Validated mixture cross section.
#[derive(Debug, Clone, PartialEq)]
pub enum MixSigma {
    /// See [`CrossSectionModel::MixHardSphere`].
    HardSphere {
        /// Matrix `C_αβ`.
        c: Vec<Vec<f64>>,
    },
    /// See [`CrossSectionModel::MixBounded`].
    Bounded {
        /// Constant `C`.
        c: f64,
        /// Exponent `γ`.
        gamma: f64,
    },
}

/// Whether the channel with energy defect `delta_i` is open at speed `g`:
/// `m|g|² > 4ΔI`.
#[inline]
pub fn channel_open(m: f64, delta_i: f64, g: f64) -> bool {
    m * g * g > 4.0 * delta_i
}

impl PolyCrossSection for PolySigma {
    #[inline]
    fn sigma(&self, gas: &PolyatomicGas, i: usize, j: usize, k: usize, l: usize, g: f64) -> f64 {
        let m = gas.mass();
        let delta = gas.energy_defect(i, j, k, l);
        if !channel_open(m, delta, g) {
            return 0.0;
        }
        let phi = gas.weights();
        let post = (g * g - 4.0 * delta / m).sqrt();
        match *self {
            PolySigma::HardSphere { c } => c * post / (g * phi[i] * phi[j]),
            PolySigma::Bounded { c, gamma } => {
                let psi = g * post;
                c * (psi + psi.powf(0.5 * gamma)) / (g * g * phi[i] * phi[j])
            }
        }
    }
}

impl MixCrossSection for MixSigma {
    #[inline]
    fn sigma(&self, _mix: &MixtureSpec, alpha: usize, beta: usize, g: f64) -> f64 {
        match self {
            MixSigma::HardSphere { c } => c[alpha][beta],
            MixSigma::Bounded { c, gamma } => c * (1.0 + g.powf(gamma - 2.0)),
        }
    }

    fn speed_independent(&self, alpha: usize, beta: usize) -> Option<f64> {
        match self {
            MixSigma::HardSphere { c } => Some(c[alpha][beta]),
            MixSigma::Bounded { .. } => None,
        }
    }
}

fn check_constant(name: &str, c: f64) -> Result<()> {
    if c.is_finite() && c > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("{name} must be positive, got {c}")))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("γ must lie in (0, 1), got {gamma}")))
    }
}

impl CrossSectionModel {
    /// Default polyatomic model: hard spheres with `C = 1`.
    pub fn default_poly() -> Self {
        CrossSectionModel::PolyHardSphere { c: DEFAULT_C }
    }

    /// Default mixture model: hard spheres with all `C_αβ = 1`.
    pub fn default_mix(s: usize) -> Self {
        CrossSectionModel::MixHardSphere { c: vec![vec![DEFAULT_C; s]; s] }
    }

    /// Growth exponent used to grade plane rules: `γ` for the bounded
    /// families, [`DEFAULT_GAMMA`] otherwise.
    pub fn grading_gamma(&self) -> f64 {
        match self {
            CrossSectionModel::PolyBounded { gamma, .. } | CrossSectionModel::MixBounded { gamma, .. } => *gamma,
            _ => DEFAULT_GAMMA,
        }
    }

    /// Variant name as used in model files.
    pub fn variant_name(&self) -> &'static str {
        match self {
            CrossSectionModel::PolyHardSphere { .. } => "PolyHardSphere",
            CrossSectionModel::PolyBounded { .. } => "PolyBounded",
            CrossSectionModel::MixHardSphere { .. } => "MixHardSphere",
            CrossSectionModel::MixBounded { .. } => "MixBounded",
        }
    }

    /// Validates parameters and returns the polyatomic evaluator.
    pub fn poly(&self) -> Result<PolySigma> {
        match *self {
            CrossSectionModel::PolyHardSphere { c } => {
                check_constant("C", c)?;
                Ok(PolySigma::HardSphere { c })
            }
            CrossSectionModel::PolyBounded { c, gamma } => {
                check_constant("C", c)?;
                check_gamma(gamma)?;
                Ok(PolySigma::Bounded { c, gamma })
            }
            _ => Err(Error::FamilyMismatch { variant: self.variant_name(), family: "polyatomic" }),
        }
    }

    /// Validates parameters against a mixture of `s` species and returns the
    /// mixture evaluator.
    pub fn mix(&self, s: usize) -> Result<MixSigma> {
        match self {
            CrossSectionModel::MixHardSphere { c } => {
                if c.len() != s || c.iter().any(|row| row.len() != s) {
                    return Err(Error::InvalidModel(format!("C_αβ must be a {s}×{s} matrix")));
                }
                for a in 0..s {
                    for b in 0..s {
                        check_constant("C_αβ", c[a][b])?;
                        if c[a][b] != c[b][a] {
                            return Err(Error::InvalidModel("C_αβ must be symmetric".into()));
                        }
                    }
                }
                Ok(MixSigma::HardSphere { c: c.clone() })
            }
            CrossSectionModel::MixBounded { c, gamma } => {
                check_constant("C", *c)?;
                check_gamma(*gamma)?;
                Ok(MixSigma::Bounded { c: *c, gamma: *gamma })
            }
            _ => Err(Error::FamilyMismatch { variant: self.variant_name(), family: "mixture" }),
        }
    }
}

/// `σ_ij^kl(|g|)` for a polyatomic cross-section model.
///
/// Returns 0 on closed channels and fails for `|g| ≤ 0`, indices out of range
/// or a mixture variant.
pub fn sigma_poly(
    model: &CrossSectionModel,
    gas: &PolyatomicGas,
    (i, j, k, l): (usize, usize, usize, usize),
    g_norm: f64,
    _cos_theta: f64,
) -> Result<f64> {
    let sigma = model.poly()?;
    if !(g_norm > 0.0) {
        return Err(Error::NonPositiveSpeed(g_norm));
    }
    if let Some(&bad) = [i, j, k, l].iter().find(|&&x| x >= gas.r()) {
        return Err(Error::IndexOutOfRange { index: bad, count: gas.r() });
    }
    Ok(sigma.sigma(gas, i, j, k, l, g_norm))
}

/// `σ_αβ(|g|)` for a mixture cross-section model.
pub fn sigma_mix(
    model: &CrossSectionModel,
    mix: &MixtureSpec,
    (alpha, beta): (usize, usize),
    g_norm: f64,
    _cos_theta: f64,
) -> Result<f64> {
    let sigma = model.mix(mix.s())?;
    if !(g_norm > 0.0) {
        return Err(Error::NonPositiveSpeed(g_norm));
    }
    if let Some(&bad) = [alpha, beta].iter().find(|&&x| x >= mix.s()) {
        return Err(Error::IndexOutOfRange { index: bad, count: mix.s() });
    }
    Ok(sigma.sigma(mix, alpha, beta, g_norm))
}

/// One sampled channel `(i, j) → (k, l)` at relative speed `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelSample {
    /// Pre-collision level of the first molecule.
    pub i: usize,
    /// Pre-collision level of the second molecule.
    pub j: usize,
    /// Post-collision level of the first molecule.
    pub k: usize,
    /// Post-collision level of the second molecule.
    pub l: usize,
    /// Relative speed `|g| > 0`.
    pub g: f64,
}

/// Relative distance from a channel threshold below which samples are
/// rejected: with `min(|g|², |g′|²) < THRESHOLD_MARGIN · 4|ΔI|/m` the speed of
/// the reverse channel is recovered from `|g′|² ± 4ΔI/m` with a cancellation
/// that costs more than two digits.
pub const THRESHOLD_MARGIN: f64 = 1e-2;

/// Draws `n` channel samples that are open in both directions, with the
/// excess speed above threshold uniform on `(0, g_max]`; samples closer to
/// either threshold than [`THRESHOLD_MARGIN`] are redrawn.
pub fn sample_open_channels<R: Rng>(gas: &PolyatomicGas, n: usize, g_max: f64, rng: &mut R) -> Vec<ChannelSample> {
    let r = gas.r();
    let m = gas.mass();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (i, j, k, l) = (rng.gen_range(0..r), rng.gen_range(0..r), rng.gen_range(0..r), rng.gen_range(0..r));
        let delta = gas.energy_defect(i, j, k, l);
        let threshold = 2.0 * (delta.max(0.0) / m).sqrt();
        let g = threshold + g_max * (1.0 - rng.gen::<f64>());
        let post_sq = g * g - 4.0 * delta / m;
        let guard = THRESHOLD_MARGIN * 4.0 * delta.abs() / m;
        if post_sq > 0.0 && g * g >= guard && post_sq >= guard {
            out.push(ChannelSample { i, j, k, l, g });
        }
    }
    out
}

/// Maximum relative microreversibility residual
/// `|φ_iφ_j|g|²σ_ij^kl(|g|) − φ_kφ_l|g′|²σ_kl^ij(|g′|)| / scale` with
/// `|g′| = √(|g|² − 4ΔI_ij^kl/m)`.
///
/// Samples whose channel is closed are skipped; an error is returned when no
/// open sample remains.
pub fn check_microreversibility<S: PolyCrossSection + ?Sized>(
    sigma: &S,
    gas: &PolyatomicGas,
    samples: &[ChannelSample],
) -> Result<f64> {
    let phi = gas.weights();
    let m = gas.mass();
    let mut worst: f64 = 0.0;
    let mut used = 0usize;
    for s in samples {
        let delta = gas.energy_defect(s.i, s.j, s.k, s.l);
        if !channel_open(m, delta, s.g) {
            continue;
        }
        let gp = (s.g * s.g - 4.0 * delta / m).sqrt();
        if gp <= 0.0 {
            continue;
        }
        used += 1;
        let lhs = phi[s.i] * phi[s.j] * s.g * s.g * sigma.sigma(gas, s.i, s.j, s.k, s.l, s.g);
        let rhs = phi[s.k] * phi[s.l] * gp * gp * sigma.sigma(gas, s.k, s.l, s.i, s.j, gp);
        let scale = lhs.abs().max(rhs.abs());
        if scale > 0.0 {
            worst = worst.max((lhs - rhs).abs() / scale);
        }
    }
    if used == 0 {
        return Err(Error::EmptySamples);
    }
    Ok(worst)
}

/// Maximum relative residual of the symmetry relations
/// `σ_ij^kl = σ_ij^lk = σ_ji^lk`.
pub fn check_symmetry_relations<S: PolyCrossSection + ?Sized>(
    sigma: &S,
    gas: &PolyatomicGas,
    samples: &[ChannelSample],
) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut worst: f64 = 0.0;
    for s in samples {
        let a = sigma.sigma(gas, s.i, s.j, s.k, s.l, s.g);
        let b = sigma.sigma(gas, s.i, s.j, s.l, s.k, s.g);
        let c = sigma.sigma(gas, s.j, s.i, s.l, s.k, s.g);
        let scale = a.abs().max(b.abs()).max(c.abs());
        if scale > 0.0 {
            worst = worst.max((a - b).abs().max((a - c).abs()) / scale);
        }
    }
    Ok(worst)
}

/// Worst margin of the polyatomic growth bound
/// `σ_ij^kl ≤ (C′/|g|²)(Ψ + Ψ^{γ/2})`, `Ψ = |g|√(|g|² − 4ΔI/m)`, over open
/// samples: the minimum of right-hand side minus `σ`. Nonnegative means the
/// bound holds with constant `c_prime`.
pub fn check_bound_est1<S: PolyCrossSection + ?Sized>(
    sigma: &S,
    gas: &PolyatomicGas,
    c_prime: f64,
    gamma: f64,
    samples: &[ChannelSample],
) -> Result<f64> {
    let m = gas.mass();
    let mut worst = f64::INFINITY;
    for s in samples {
        let delta = gas.energy_defect(s.i, s.j, s.k, s.l);
        if !channel_open(m, delta, s.g) {
            continue;
        }
        let psi = s.g * (s.g * s.g - 4.0 * delta / m).sqrt();
        let rhs = c_prime / (s.g * s.g) * (psi + psi.powf(0.5 * gamma));
        worst = worst.min(rhs - sigma.sigma(gas, s.i, s.j, s.k, s.l, s.g));
    }
    if worst == f64::INFINITY {
        return Err(Error::EmptySamples);
    }
    Ok(worst)
}

/// Worst margin of the mixture growth bound `σ_αβ ≤ C′(1 + |g|^{γ−2})` over
/// `(α, β, |g|)` samples.
pub fn check_bound_est2<S: MixCrossSection + ?Sized>(
    sigma: &S,
    mix: &MixtureSpec,
    c_prime: f64,
    gamma: f64,
    samples: &[(usize, usize, f64)],
) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    Ok(samples
        .iter()
        .map(|&(a, b, g)| c_prime * (1.0 + g.powf(gamma - 2.0)) - sigma.sigma(mix, a, b, g))
        .fold(f64::INFINITY, f64::min))
}

/// Negative-control wrapper that multiplies the wrapped cross section by
/// `factor` whenever the first pre-collision index is smaller than the second
/// (`i < j`, resp. `α < β`). Any `factor ≠ 1` breaks the symmetry relations
/// and hence the kernel swap symmetries; used to show the checks detect it.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetricPerturbation<S> {
    /// Wrapped, admissible cross section.
    pub base: S,
    /// Multiplicative corruption applied to one ordering of the indices.
    pub factor: f64,
}

impl<S: PolyCrossSection> PolyCrossSection for AsymmetricPerturbation<S> {
    fn sigma(&self, gas: &PolyatomicGas, i: usize, j: usize, k: usize, l: usize, g: f64) -> f64 {
        let s = self.base.sigma(gas, i, j, k, l, g);
        if i < j {
            s * self.factor
        } else {
            s
        }
    }
}

impl<S: MixCrossSection> MixCrossSection for AsymmetricPerturbation<S> {
    fn sigma(&self, mix: &MixtureSpec, alpha: usize, beta: usize, g: f64) -> f64 {
        let s = self.base.sigma(mix, alpha, beta, g);
        if alpha < beta {
            s * self.factor
        } else {
            s
        }
    }

    fn speed_independent(&self, alpha: usize, beta: usize) -> Option<f64> {
        self.base.speed_independent(alpha, beta).map(|s| if alpha < beta { s * self.factor } else { s })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_level() -> PolyatomicGas {
        PolyatomicGas::new(1.0, vec![0.0, 1.0], vec![1.0, 1.0]).unwrap()
    }

    #[test]
    fn elastic_hard_sphere_is_constant() {
        let gas = two_level();
        let model = CrossSectionModel::default_poly();
        for g in [0.1, 1.0, 7.5] {
            assert_eq!(sigma_poly(&model, &gas, (0, 0, 0, 0), g, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn threshold_is_closed() {
        let gas = two_level();
        let model = CrossSectionModel::default_poly();
        // ΔI_00^01 = 1, 4ΔI/m = 4 = |g|².
        assert_eq!(sigma_poly(&model, &gas, (0, 0, 0, 1), 2.0, 0.0).unwrap(), 0.0);
        let above = sigma_poly(&model, &gas, (0, 0, 0, 1), 3.0, 0.0).unwrap();
        assert!((above - 5f64.sqrt() / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_speed_and_family() {
        let gas = two_level();
        let model = CrossSectionModel::default_poly();
        assert!(matches!(sigma_poly(&model, &gas, (0, 0, 0, 0), 0.0, 0.0), Err(Error::NonPositiveSpeed(_))));
        let mix = MixtureSpec::new(vec![1.0], vec![1.0]).unwrap();
        assert!(matches!(sigma_mix(&model, &mix, (0, 0), 1.0, 0.0), Err(Error::FamilyMismatch { .. })));
        assert!(CrossSectionModel::PolyBounded { c: 1.0, gamma: 1.5 }.poly().is_err());
        assert!(CrossSectionModel::MixHardSphere { c: vec![vec![1.0, 2.0], vec![1.0, 1.0]] }.mix(2).is_err());
    }

    #[test]
    fn corrupted_model_breaks_microreversibility() {
        let gas = two_level();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let samples: Vec<_> = sample_open_channels(&gas, 2000, 10.0, &mut rng)
            .into_iter()
            .filter(|s| s.i < s.j && s.k >= s.l)
            .collect();
        let base = PolySigma::HardSphere { c: 1.0 };
        let bad = AsymmetricPerturbation { base, factor: 2.0 };
        assert!(check_microreversibility(&base, &gas, &samples).unwrap() < 1e-12);
        let r = check_microreversibility(&bad, &gas, &samples).unwrap();
        assert!((r - 0.5).abs() < 1e-12, "{r}");
        assert!(check_symmetry_relations(&bad, &gas, &samples).unwrap() > 0.4);
    }

    #[test]
    fn mixture_bound_example() {
        let mix = MixtureSpec::new(vec![1.0, 2.0], vec![1.0, 1.0]).unwrap();
        let model = CrossSectionModel::MixBounded { c: 1.0, gamma: 0.5 };
        let s = sigma_mix(&model, &mix, (0, 1), 4.0, 0.0).unwrap();
        assert!(s <= 1.0 + 4f64.powf(-1.5) + 1e-15);
    }
}
