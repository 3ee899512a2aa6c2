//! Physical model definitions: polyatomic gases with a finite set of internal
//! energy levels, monatomic multicomponent mixtures, their normalized
//! Maxwellians, and the collision-invariant bases spanning the kernel of the
//! linearized collision operator.
//!
//! All quantities are dimensionless. Component indices are zero based: energy
//! level `i` ranges over `0..r`, species `alpha` over `0..s`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Velocities in R³.
pub type Vec3 = nalgebra::Vector3<f64>;

/// A polyatomic gas whose molecules carry one of `r` internal energies `I_i`
/// with degeneracy weights `φ_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyatomicGas {
    m: f64,
    levels: Vec<f64>,
    weights: Vec<f64>,
}

impl PolyatomicGas {
    /// Creates a gas with particle mass `m`, internal energies `levels` and
    /// degeneracy weights `weights`.
    ///
    /// Requires `m > 0`, at least one level, `I_i ≥ 0`, `φ_i > 0`, and equal
    /// lengths of `levels` and `weights`.
    pub fn new(m: f64, levels: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidModel(format!("mass must be positive, got {m}")));
        }
        if levels.is_empty() {
            return Err(Error::InvalidModel("at least one energy level is required".into()));
        }
        if levels.len() != weights.len() {
            return Err(Error::InvalidModel(format!(
                "{} energy levels but {} degeneracy weights",
                levels.len(),
                weights.len()
            )));
        }
        if let Some(bad) = levels.iter().find(|e| !(e.is_finite() && **e >= 0.0)) {
            return Err(Error::InvalidModel(format!("energy levels must be ≥ 0, got {bad}")));
        }
        if let Some(bad) = weights.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::InvalidModel(format!("degeneracy weights must be > 0, got {bad}")));
        }
        Ok(Self { m, levels, weights })
    }

    /// Single-level gas with `I = 0`, `φ = 1`: the monatomic limit.
    pub fn monatomic(m: f64) -> Result<Self> {
        Self::new(m, vec![0.0], vec![1.0])
    }

    /// Particle mass.
    pub fn mass(&self) -> f64 {
        self.m
    }

    /// Internal energies `I_i`.
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// Degeneracy weights `φ_i`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of energy levels `r`.
    pub fn r(&self) -> usize {
        self.levels.len()
    }

    /// Energy defect `ΔI_ij^kl = I_k + I_l − I_i − I_j` of the channel
    /// `(i, j) → (k, l)`.
    pub fn energy_defect(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.levels[k] + self.levels[l] - self.levels[i] - self.levels[j]
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.r() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, count: self.r() })
        }
    }

    /// Normalization `m^{3/2} (2π)^{-3/2}` shared by all levels.
    pub(crate) fn gauss_norm(&self) -> f64 {
        (self.m / (2.0 * PI)).powf(1.5)
    }

    /// `M_i(ξ)` without index validation; callers guarantee `i < r`.
    #[inline]
    pub(crate) fn maxwellian_at(&self, i: usize, xi_sq: f64) -> f64 {
        self.weights[i] * self.gauss_norm() * (-0.5 * self.m * xi_sq - self.levels[i]).exp()
    }
}

/// A mixture of `s` monatomic species with masses `m_α` and number densities
/// `n_α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    masses: Vec<f64>,
    densities: Vec<f64>,
}

impl MixtureSpec {
    /// Creates a mixture; requires at least one species, positive masses and
    /// positive densities of equal count.
    pub fn new(masses: Vec<f64>, densities: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidModel("at least one species is required".into()));
        }
        if masses.len() != densities.len() {
            return Err(Error::InvalidModel(format!(
                "{} masses but {} densities",
                masses.len(),
                densities.len()
            )));
        }
        if let Some(bad) = masses.iter().find(|m| !(m.is_finite() && **m > 0.0)) {
            return Err(Error::InvalidModel(format!("masses must be > 0, got {bad}")));
        }
        if let Some(bad) = densities.iter().find(|n| !(n.is_finite() && **n > 0.0)) {
            return Err(Error::InvalidModel(format!("densities must be > 0, got {bad}")));
        }
        Ok(Self { masses, densities })
    }

    /// Species masses `m_α`.
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Species number densities `n_α`.
    pub fn densities(&self) -> &[f64] {
        &self.densities
    }

    /// Number of species `s`.
    pub fn s(&self) -> usize {
        self.masses.len()
    }

    /// Reduced mass `μ_αβ = m_α m_β / (m_α + m_β)`.
    pub fn reduced_mass(&self, alpha: usize, beta: usize) -> f64 {
        let (ma, mb) = (self.masses[alpha], self.masses[beta]);
        ma * mb / (ma + mb)
    }

    fn check_index(&self, alpha: usize) -> Result<()> {
        if alpha < self.s() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: alpha, count: self.s() })
        }
    }

    /// `M_α(ξ)` without index validation.
    #[inline]
    pub(crate) fn maxwellian_at(&self, alpha: usize, xi_sq: f64) -> f64 {
        let m = self.masses[alpha];
        self.densities[alpha] * (m / (2.0 * PI)).powf(1.5) * (-0.5 * m * xi_sq).exp()
    }
}

/// Either supported gas model.
#[derive(Debug, Clone, PartialEq)]
pub enum GasModel {
    /// Single polyatomic species with discrete internal energies.
    Polyatomic(PolyatomicGas),
    /// Monatomic multicomponent mixture.
    Mixture(MixtureSpec),
}

impl GasModel {
    /// Number of components (energy levels or species).
    pub fn components(&self) -> usize {
        match self {
            GasModel::Polyatomic(g) => g.r(),
            GasModel::Mixture(m) => m.s(),
        }
    }

    /// Human readable family name.
    pub fn family(&self) -> &'static str {
        match self {
            GasModel::Polyatomic(_) => "polyatomic",
            GasModel::Mixture(_) => "mixture",
        }
    }

    /// Normalized Maxwellian of component `c`.
    pub fn maxwellian(&self, c: usize, xi: &Vec3) -> Result<f64> {
        match self {
            GasModel::Polyatomic(g) => maxwellian_poly(g, c, xi),
            GasModel::Mixture(m) => maxwellian_mix(m, c, xi),
        }
    }

    /// Basis of the kernel of the linearized operator (`M^{1/2}` times the
    /// collision invariants).
    pub fn kernel_basis(&self) -> CollisionInvariantBasis {
        match self {
            GasModel::Polyatomic(g) => linearized_kernel_basis_poly(g),
            GasModel::Mixture(m) => linearized_kernel_basis_mix(m),
        }
    }
}

type FieldFn = dyn Fn(usize, &Vec3) -> f64 + Send + Sync;

/// A vector-valued function of velocity: one real value per component
/// (energy level or species) at each `ξ ∈ R³`.
#[derive(Clone)]
pub struct DistributionField {
    components: usize,
    func: Arc<FieldFn>,
}

impl fmt::Debug for DistributionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistributionField").field("components", &self.components).finish()
    }
}

impl DistributionField {
    /// Wraps a closure `(component, ξ) ↦ value`.
    pub fn new<F>(components: usize, func: F) -> Self
    where
        F: Fn(usize, &Vec3) -> f64 + Send + Sync + 'static,
    {
        Self { components, func: Arc::new(func) }
    }

    /// Number of components.
    pub fn components(&self) -> usize {
        self.components
    }

    /// Value of component `c` at `xi`.
    #[inline]
    pub fn eval(&self, c: usize, xi: &Vec3) -> f64 {
        (self.func)(c, xi)
    }

    /// Pointwise product with another field of equal component count.
    pub fn times(&self, other: &DistributionField) -> DistributionField {
        let (a, b) = (self.clone(), other.clone());
        DistributionField::new(self.components, move |c, xi| a.eval(c, xi) * b.eval(c, xi))
    }

    /// Field scaled by a constant.
    pub fn scaled(&self, factor: f64) -> DistributionField {
        let a = self.clone();
        DistributionField::new(self.components, move |c, xi| factor * a.eval(c, xi))
    }

    /// Sum with another field of equal component count.
    pub fn plus(&self, other: &DistributionField) -> DistributionField {
        let (a, b) = (self.clone(), other.clone());
        DistributionField::new(self.components, move |c, xi| a.eval(c, xi) + b.eval(c, xi))
    }
}

/// An ordered list of fields spanning a space of collision invariants (or of
/// their `M^{1/2}`-weighted counterparts).
#[derive(Debug, Clone)]
pub struct CollisionInvariantBasis {
    fields: Vec<DistributionField>,
}

impl CollisionInvariantBasis {
    /// Builds a basis from its fields.
    pub fn new(fields: Vec<DistributionField>) -> Self {
        Self { fields }
    }

    /// The basis fields.
    pub fn fields(&self) -> &[DistributionField] {
        &self.fields
    }

    /// Number of basis fields.
    pub fn count(&self) -> usize {
        self.fields.len()
    }
}

/// Normalized polyatomic Maxwellian
/// `M_i(ξ) = φ_i m^{3/2} (2π)^{-3/2} exp(−m|ξ|²/2) exp(−I_i)`.
pub fn maxwellian_poly(gas: &PolyatomicGas, i: usize, xi: &Vec3) -> Result<f64> {
    gas.check_index(i)?;
    Ok(gas.maxwellian_at(i, xi.norm_squared()))
}

/// Mixture Maxwellian `M_α(ξ) = n_α (m_α/2π)^{3/2} exp(−m_α|ξ|²/2)`.
pub fn maxwellian_mix(mix: &MixtureSpec, alpha: usize, xi: &Vec3) -> Result<f64> {
    mix.check_index(alpha)?;
    Ok(mix.maxwellian_at(alpha, xi.norm_squared()))
}

/// The normalized Maxwellian of a polyatomic gas as a field.
pub fn maxwellian_field_poly(gas: &PolyatomicGas) -> DistributionField {
    let g = gas.clone();
    DistributionField::new(gas.r(), move |i, xi| g.maxwellian_at(i, xi.norm_squared()))
}

/// The normalized Maxwellian of a mixture as a field.
pub fn maxwellian_field_mix(mix: &MixtureSpec) -> DistributionField {
    let m = mix.clone();
    DistributionField::new(mix.s(), move |a, xi| m.maxwellian_at(a, xi.norm_squared()))
}

/// General polyatomic Maxwellian with density `n`, bulk velocity `u` and
/// temperature `t`:
/// `M_i = n φ_i / q · (m/2πT)^{3/2} exp(−m|ξ−u|²/2T) exp(−I_i/T)` with
/// `q = Σ_i φ_i exp(−I_i/T)`.
///
/// Used only as input to the nonlinear conservation and entropy checks.
pub fn general_maxwellian_poly(gas: &PolyatomicGas, n: f64, u: Vec3, t: f64) -> DistributionField {
    let g = gas.clone();
    let q: f64 = g.levels.iter().zip(&g.weights).map(|(e, p)| p * (-e / t).exp()).sum();
    let norm = n / q * (g.m / (2.0 * PI * t)).powf(1.5);
    DistributionField::new(gas.r(), move |i, xi| {
        let d = xi - u;
        norm * g.weights[i] * (-0.5 * g.m * d.norm_squared() / t - g.levels[i] / t).exp()
    })
}

/// General mixture Maxwellian with per-species densities, common bulk velocity
/// `u` and temperature `t`.
pub fn general_maxwellian_mix(mix: &MixtureSpec, densities: &[f64], u: Vec3, t: f64) -> DistributionField {
    let masses = mix.masses.clone();
    let dens = densities.to_vec();
    DistributionField::new(mix.s(), move |a, xi| {
        let m = masses[a];
        let d = xi - u;
        dens[a] * (m / (2.0 * PI * t)).powf(1.5) * (-0.5 * m * d.norm_squared() / t).exp()
    })
}

/// Collision invariants of a polyatomic gas:
/// `{1, ξ_x 1, ξ_y 1, ξ_z 1, m|ξ|² 1 + 2I}`.
pub fn invariants_poly(gas: &PolyatomicGas) -> CollisionInvariantBasis {
    let r = gas.r();
    let m = gas.m;
    let levels = gas.levels.clone();
    let mut fields = vec![DistributionField::new(r, |_, _| 1.0)];
    for d in 0..3 {
        fields.push(DistributionField::new(r, move |_, xi| xi[d]));
    }
    fields.push(DistributionField::new(r, move |i, xi| m * xi.norm_squared() + 2.0 * levels[i]));
    CollisionInvariantBasis::new(fields)
}

/// Collision invariants of a mixture:
/// `{e_1, …, e_s, m ξ_x, m ξ_y, m ξ_z, m|ξ|²}` where `m = (m_1, …, m_s)`.
pub fn invariants_mix(mix: &MixtureSpec) -> CollisionInvariantBasis {
    let s = mix.s();
    let mut fields = Vec::with_capacity(s + 4);
    for beta in 0..s {
        fields.push(DistributionField::new(s, move |a, _| if a == beta { 1.0 } else { 0.0 }));
    }
    for d in 0..3 {
        let masses = mix.masses.clone();
        fields.push(DistributionField::new(s, move |a, xi| masses[a] * xi[d]));
    }
    let masses = mix.masses.clone();
    fields.push(DistributionField::new(s, move |a, xi| masses[a] * xi.norm_squared()));
    CollisionInvariantBasis::new(fields)
}

fn weight_by_sqrt_maxwellian(basis: CollisionInvariantBasis, sqrt_m: DistributionField) -> CollisionInvariantBasis {
    CollisionInvariantBasis::new(basis.fields.iter().map(|f| f.times(&sqrt_m)).collect())
}

/// Basis of `ker L` for a polyatomic gas: `M^{1/2}` times each invariant.
pub fn linearized_kernel_basis_poly(gas: &PolyatomicGas) -> CollisionInvariantBasis {
    let g = gas.clone();
    let sqrt_m = DistributionField::new(gas.r(), move |i, xi| g.maxwellian_at(i, xi.norm_squared()).sqrt());
    weight_by_sqrt_maxwellian(invariants_poly(gas), sqrt_m)
}

/// Basis of `ker L` for a mixture: `M^{1/2}` times each invariant.
pub fn linearized_kernel_basis_mix(mix: &MixtureSpec) -> CollisionInvariantBasis {
    let m = mix.clone();
    let sqrt_m = DistributionField::new(mix.s(), move |a, xi| m.maxwellian_at(a, xi.norm_squared()).sqrt());
    weight_by_sqrt_maxwellian(invariants_mix(mix), sqrt_m)
}
