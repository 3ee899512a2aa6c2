//! Command-line interface: `assemble`, `spectrum`, `verify`, `nu`, `rho` and
//! `kernel eval`.
//!
//! Settings come from an optional JSON [`RunConfig`] file; every field can
//! be overridden by a flag. All outputs go to the `--output` directory.
//! Exit status: 0 on success, 1 when a check fails, 2 on usage or IO
//! errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas_models::{GasModel, Vec3};
use crate::io::{
    read_matrix, read_sidecar, sidecar_path, write_eigenvalues_csv, write_matrix, write_nu_csv, MatrixSidecar,
    ModelFile, MATRIX_VERSION,
};
use crate::kernels::{KernelRules, MixKernels, PolyKernels};
use crate::operator::{assemble_mix_with, assemble_poly_with, symmetric_eigenvalues, AssemblyOptions};
use crate::quadrature::build_grid;
use crate::verify::{
    nu_profile_mix, nu_profile_poly, nullspace_report, rho_formula, rho_sample_check, run_suite, speed_samples,
    SuiteConfig, SuiteSelection,
};

/// Environment variable holding the default worker-thread count.
pub const THREADS_ENV: &str = "LINBOLTZ_THREADS";

/// Process outcome, mapped to the exit status by the binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Exit status 0.
    Success,
    /// Exit status 1.
    CheckFailed,
}

impl Outcome {
    /// Numeric exit status.
    pub fn code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::CheckFailed => 1,
        }
    }
}

/// Exit status for usage and IO errors.
pub const USAGE_ERROR: u8 = 2;

/// Top-level arguments.
#[derive(Debug, Parser)]
#[command(name = "linboltz", version, about = "Linearized Boltzmann operators: assembly, spectra and verification")]
pub struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Command.
    #[command(subcommand)]
    pub command: Command,
}

/// Commands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Assemble the discrete operator and write it as a matrix file.
    Assemble(RunArgs),
    /// Smallest eigenvalues and null-space report of a matrix file.
    Spectrum(SpectrumArgs),
    /// Run the verification suite.
    Verify(RunArgs),
    /// Collision-frequency profiles as CSV.
    Nu(NuArgs),
    /// Energy-ratio bound and its sampled check.
    Rho(RhoArgs),
    /// Pointwise kernel evaluation.
    Kernel {
        /// Kernel subcommand.
        #[command(subcommand)]
        command: KernelCommand,
    },
}

/// Kernel subcommands.
#[derive(Debug, Subcommand)]
pub enum KernelCommand {
    /// Evaluate a kernel at one pair of velocities or over a CSV batch.
    Eval(KernelArgs),
}

/// Settings shared by `assemble` and `verify`; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSON model file.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Global seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid nodes per axis (even).
    #[arg(long = "n")]
    pub grid_n: Option<usize>,
    /// Grid half-width.
    #[arg(long = "r")]
    pub grid_r: Option<f64>,
    /// Sphere-rule order of the kernels.
    #[arg(long)]
    pub sphere_order: Option<usize>,
    /// Radial nodes of the plane rule.
    #[arg(long)]
    pub plane_radial: Option<usize>,
    /// Angular nodes of the plane rule.
    #[arg(long)]
    pub plane_angular: Option<usize>,
    /// Plane-rule radius.
    #[arg(long)]
    pub plane_rmax: Option<f64>,
    /// Radial order of the collision-frequency rule.
    #[arg(long)]
    pub nu_radial: Option<usize>,
    /// Inner order of the collision-frequency rule.
    #[arg(long)]
    pub nu_inner: Option<usize>,
    /// Maximum operator rows.
    #[arg(long)]
    pub size_cap: Option<usize>,
    /// Pairs per kernel in the symmetry check.
    #[arg(long)]
    pub symmetry_pairs: Option<usize>,
    /// Samples per mass pair in the energy-ratio check.
    #[arg(long)]
    pub rho_samples: Option<u64>,
    /// Run only these checks (comma separated).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub only: Option<Vec<CheckGroup>>,
    /// Skip these checks (comma separated).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub skip: Option<Vec<CheckGroup>>,
    /// Scale σ on half of the channels by this factor (fault injection).
    #[arg(long)]
    pub inject_asymmetry: Option<f64>,
}

/// Check groups selectable on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckGroup {
    /// Cross-section structure.
    CrossSection,
    /// Kernel symmetry.
    Symmetry,
    /// Collision-frequency envelopes.
    Nu,
    /// Null space.
    Nullspace,
    /// Nonnegativity.
    Positivity,
    /// Assembled versus direct operator.
    Consistency,
    /// Conservation.
    Conservation,
    /// Entropy dissipation.
    Entropy,
    /// Quadratic-term orthogonality.
    Gamma,
    /// Energy-ratio lemma.
    Rho,
    /// Truncation decay.
    Truncation,
    /// Squared-kernel shell decay.
    HsNorm,
}

fn flag(sel: &mut SuiteSelection, g: CheckGroup) -> &mut bool {
    match g {
        CheckGroup::CrossSection => &mut sel.cross_section,
        CheckGroup::Symmetry => &mut sel.symmetry,
        CheckGroup::Nu => &mut sel.nu,
        CheckGroup::Nullspace => &mut sel.nullspace,
        CheckGroup::Positivity => &mut sel.positivity,
        CheckGroup::Consistency => &mut sel.consistency,
        CheckGroup::Conservation => &mut sel.conservation,
        CheckGroup::Entropy => &mut sel.entropy,
        CheckGroup::Gamma => &mut sel.gamma,
        CheckGroup::Rho => &mut sel.rho,
        CheckGroup::Truncation => &mut sel.truncation,
        CheckGroup::HsNorm => &mut sel.hs_norm,
    }
}

/// JSON run configuration: model path, output directory and every suite
/// setting (see [`SuiteConfig`]); missing fields take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Model file.
    pub model: Option<PathBuf>,
    /// Output directory.
    pub output: Option<PathBuf>,
    /// Numerical settings.
    #[serde(flatten)]
    pub suite: SuiteConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { model: None, output: None, suite: SuiteConfig::default() }
    }
}

impl RunConfig {
    /// Loads a configuration file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Applies command-line overrides.
    pub fn apply(&mut self, a: &RunArgs) {
        if let Some(v) = &a.model {
            self.model = Some(v.clone());
        }
        if let Some(v) = &a.output {
            self.output = Some(v.clone());
        }
        let s = &mut self.suite;
        macro_rules! set {
            ($src:ident => $dst:expr) => {
                if let Some(v) = a.$src {
                    $dst = v;
                }
            };
        }
        set!(seed => s.seed);
        set!(grid_n => s.grid_n);
        set!(grid_r => s.grid_r);
        set!(sphere_order => s.sphere_order);
        set!(plane_radial => s.plane_radial);
        set!(plane_angular => s.plane_angular);
        set!(plane_rmax => s.plane_rmax);
        set!(nu_radial => s.nu_rule.radial);
        set!(nu_inner => s.nu_rule.inner);
        set!(size_cap => s.size_cap);
        set!(symmetry_pairs => s.symmetry_pairs);
        set!(rho_samples => s.rho_samples);
        if let Some(f) = a.inject_asymmetry {
            s.inject_asymmetry = Some(f);
        }
        if let Some(only) = &a.only {
            s.selection = SuiteSelection::none();
            for g in only {
                *flag(&mut s.selection, *g) = true;
            }
        }
        if let Some(skip) = &a.skip {
            for g in skip {
                *flag(&mut s.selection, *g) = false;
            }
        }
    }

    /// Configuration file (if any) merged with the flags.
    pub fn resolve(a: &RunArgs) -> Result<Self> {
        let mut c = match &a.config {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        c.apply(a);
        c.suite.validate()?;
        Ok(c)
    }

    fn model_file(&self) -> Result<ModelFile> {
        let p = self.model.as_ref().ok_or_else(|| Error::Config("no model file given (--model)".into()))?;
        ModelFile::load(p)
    }

    fn output_dir(&self) -> Result<PathBuf> {
        let p = self.output.clone().ok_or_else(|| Error::Config("no output directory given (--output)".into()))?;
        fs::create_dir_all(&p)?;
        Ok(p)
    }
}

/// `spectrum` arguments.
#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    /// Matrix file written by `assemble`.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Number of smallest eigenvalues to export.
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    /// Output directory.
    #[arg(long)]
    pub output: PathBuf,
    /// Seed of the random negative-control vector.
    #[arg(long, default_value_t = SuiteConfig::default().seed)]
    pub seed: u64,
}

/// `nu` arguments.
#[derive(Debug, Clone, Args)]
pub struct NuArgs {
    /// Settings (model, output, collision-frequency rule).
    #[command(flatten)]
    pub run: RunArgs,
    /// Component to profile (all when omitted).
    #[arg(long)]
    pub component: Option<usize>,
    /// Number of speeds.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Largest speed.
    #[arg(long, default_value_t = 10.0)]
    pub max: f64,
}

/// `rho` arguments.
#[derive(Debug, Clone, Args)]
pub struct RhoArgs {
    /// First mass.
    #[arg(long)]
    pub m_alpha: f64,
    /// Second mass.
    #[arg(long)]
    pub m_beta: f64,
    /// Number of samples.
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    /// Seed.
    #[arg(long, default_value_t = SuiteConfig::default().seed)]
    pub seed: u64,
}

/// Kernel parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelPart {
    /// Full kernel `k`.
    K,
    /// Polyatomic loss kernel.
    K1,
    /// Polyatomic gain kernel.
    K2,
    /// Mixture loss kernel.
    Loss,
    /// Mixture gain kernel with the partner at `ξ*`.
    Same,
    /// Mixture gain kernel with the outgoing particle at `ξ*`.
    Cross,
}

/// `kernel eval` arguments.
#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    /// Settings (model, kernel rules).
    #[command(flatten)]
    pub run: RunArgs,
    /// Kernel part.
    #[arg(long, value_enum, default_value_t = KernelPart::K)]
    pub part: KernelPart,
    /// First component.
    #[arg(long, default_value_t = 0)]
    pub i: usize,
    /// Second component.
    #[arg(long, default_value_t = 0)]
    pub j: usize,
    /// First velocity `x,y,z`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub xi: Option<Vec<f64>>,
    /// Second velocity `x,y,z`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub xi_star: Option<Vec<f64>>,
    /// CSV with columns `i,j,xi_x,xi_y,xi_z,xs_x,xs_y,xs_z`; results go to
    /// `kernel.csv` in the output directory.
    #[arg(long)]
    pub batch: Option<PathBuf>,
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<Outcome> {
    if let Some(t) = cli.threads {
        // A global pool can only be installed once per process; later calls
        // keep the first setting.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match cli.command {
        Command::Assemble(a) => cmd_assemble(&RunConfig::resolve(&a)?),
        Command::Spectrum(a) => cmd_spectrum(&a),
        Command::Verify(a) => cmd_verify(&RunConfig::resolve(&a)?),
        Command::Nu(a) => cmd_nu(&a),
        Command::Rho(a) => cmd_rho(&a),
        Command::Kernel { command: KernelCommand::Eval(a) } => cmd_kernel_eval(&a),
    }
}

/// File name of the assembled matrix.
pub const MATRIX_FILE: &str = "operator.pklo";

/// Assembles `L̃` and writes `operator.pklo` plus its sidecar.
pub fn cmd_assemble(cfg: &RunConfig) -> Result<Outcome> {
    let model = cfg.model_file()?;
    let out = cfg.output_dir()?;
    let s = &cfg.suite;
    let rules = s.kernel_rules(&model.sigma)?;
    let grid = build_grid(s.grid_n, s.grid_r)?;
    let opts = AssemblyOptions { size_cap: s.size_cap, nu_rule: s.nu_rule };
    let op = match &model.gas {
        GasModel::Polyatomic(g) => assemble_poly_with(g, model.sigma.poly()?, &grid, &rules, &opts)?,
        GasModel::Mixture(m) => assemble_mix_with(m, model.sigma.mix(m.s())?, &grid, &rules, &opts)?,
    };
    let sidecar = MatrixSidecar {
        format: "PKLO".into(),
        version: MATRIX_VERSION,
        rows: op.rows(),
        content: "L = diag(nu) - K in weight-scaled coordinates".into(),
        grid_n: s.grid_n,
        grid_r: s.grid_r,
        components: op.components,
        family: model.gas.family().into(),
        model: model.to_json_value(),
        model_hash: model.hash(),
        sphere_order: s.sphere_order,
        plane_radial: s.plane_radial,
        plane_angular: s.plane_angular,
        plane_rmax: s.plane_rmax,
    };
    let path = out.join(MATRIX_FILE);
    write_matrix(&path, &op.l_matrix(), &sidecar)?;
    println!("wrote {} ({} rows) and {}", path.display(), op.rows(), sidecar_path(&path).display());
    Ok(Outcome::Success)
}

/// Null-space report written by `spectrum`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Matrix rows.
    pub rows: usize,
    /// Eigenvalues exported.
    pub k: usize,
    /// Model hash from the sidecar, when present.
    pub model_hash: Option<String>,
    /// Null-space analysis, when the sidecar identifies the model.
    pub nullspace: Option<crate::verify::NullSpaceReport>,
    /// Whether the null-space criteria hold.
    pub pass: Option<bool>,
}

/// Writes `eigenvalues.csv` (the `k` smallest, ascending) and
/// `nullspace.json`.
pub fn cmd_spectrum(a: &SpectrumArgs) -> Result<Outcome> {
    let l = read_matrix(&a.matrix)?;
    fs::create_dir_all(&a.output)?;
    let rows = l.nrows();
    let k = if a.k > rows {
        eprintln!("warning: k = {} exceeds the dimension {rows}; clamped", a.k);
        rows
    } else {
        a.k
    };
    let ev = symmetric_eigenvalues(l.clone())?;
    write_eigenvalues_csv(fs::File::create(a.output.join("eigenvalues.csv"))?, &ev[..k])?;
    let sidecar = read_sidecar(&a.matrix).ok();
    let mut report = SpectrumReport { rows, k, model_hash: None, nullspace: None, pass: None };
    if let Some(sc) = sidecar {
        report.model_hash = Some(sc.model_hash.clone());
        let model = ModelFile::from_json_str(&sc.model.to_string())?;
        let grid = build_grid(sc.grid_n, sc.grid_r)?;
        if grid.len() * model.gas.components() == rows {
            let vectors: Vec<Vec<f64>> = model
                .gas
                .kernel_basis()
                .fields()
                .iter()
                .map(|f| crate::operator::sample_field(&grid, model.gas.components(), f))
                .collect();
            let ns = nullspace_report(&l, &vectors, a.seed)?;
            report.pass = Some(ns.passes());
            report.nullspace = Some(ns);
        } else {
            eprintln!("warning: sidecar does not match the matrix size; null-space report skipped");
        }
    }
    let text = serde_json::to_string_pretty(&report)? + "\n";
    fs::write(a.output.join("nullspace.json"), &text)?;
    for (p, v) in ev[..k].iter().enumerate() {
        println!("{p:4} {v:.10e}");
    }
    if let Some(ns) = &report.nullspace {
        println!(
            "tau_null = {:.4e}, below threshold = {} (expected {}), gap ratio = {:.4}",
            ns.tau_null, ns.below_threshold, ns.expected, ns.gap_ratio
        );
    }
    Ok(Outcome::Success)
}

/// Runs the suite, writes `report.json` and `timings.json`, prints a
/// summary and fails when any check fails.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome> {
    let model = cfg.model_file()?;
    let out = cfg.output_dir()?;
    let start = Instant::now();
    let report = run_suite(&model, &cfg.suite)?;
    fs::write(out.join("report.json"), serde_json::to_string_pretty(&report)? + "\n")?;
    let timings: serde_json::Map<String, serde_json::Value> =
        report.checks.iter().map(|c| (c.name.clone(), serde_json::json!(c.runtime_seconds))).collect();
    let timings = serde_json::json!({ "checks": timings, "total_seconds": start.elapsed().as_secs_f64() });
    fs::write(out.join("timings.json"), serde_json::to_string_pretty(&timings)? + "\n")?;
    print!("{}", report.summary());
    if report.all_passed {
        println!("all {} checks passed", report.checks.len());
        Ok(Outcome::Success)
    } else {
        println!("failed: {}", report.failures().join(", "));
        Ok(Outcome::CheckFailed)
    }
}

/// Writes `nu_<component>.csv` profiles and prints the envelope constants.
pub fn cmd_nu(a: &NuArgs) -> Result<Outcome> {
    let cfg = RunConfig::resolve(&a.run)?;
    let model = cfg.model_file()?;
    let out = cfg.output_dir()?;
    let speeds = speed_samples(a.max, a.samples);
    let count = model.gas.components();
    let comps: Vec<usize> = match a.component {
        Some(c) if c >= count => return Err(Error::IndexOutOfRange { index: c, count }),
        Some(c) => vec![c],
        None => (0..count).collect(),
    };
    for c in comps {
        let profile = match &model.gas {
            GasModel::Polyatomic(g) => nu_profile_poly(g, &model.sigma.poly()?, c, &speeds, &cfg.suite.nu_rule)?,
            GasModel::Mixture(m) => nu_profile_mix(m, &model.sigma.mix(m.s())?, c, &speeds, &cfg.suite.nu_rule)?,
        };
        let path = out.join(format!("nu_{c}.csv"));
        write_nu_csv(fs::File::create(&path)?, &profile)?;
        let (lo, hi) = profile.envelope();
        println!(
            "component {c}: c_minus = {lo:.6e}, c_plus = {hi:.6e}, monotone = {}, csv = {}",
            profile.is_monotone(),
            path.display()
        );
    }
    Ok(Outcome::Success)
}

/// Prints `ρ` and, for distinct masses, the sampled minimum ratio.
pub fn cmd_rho(a: &RhoArgs) -> Result<Outcome> {
    let b = rho_formula(a.m_alpha, a.m_beta)?;
    println!("rho = {:.17}", b.rho);
    if a.m_alpha == a.m_beta {
        println!("masses are equal: the bound is trivial and sampling is skipped");
        return Ok(Outcome::Success);
    }
    let c = rho_sample_check(a.m_alpha, a.m_beta, a.n, a.seed)?;
    println!("samples = {}", c.samples);
    println!("min_ratio = {:.17}", c.min_ratio);
    println!("tightness = {:.6e}", c.tightness);
    println!("violations = {}", c.violations);
    println!("max_energy_residual = {:.3e}", c.max_energy_residual);
    Ok(if c.violations == 0 && c.max_energy_residual <= 1e-12 { Outcome::Success } else { Outcome::CheckFailed })
}

fn vec3(v: &[f64]) -> Result<Vec3> {
    match v {
        [x, y, z] => Ok(Vec3::new(*x, *y, *z)),
        _ => Err(Error::Config("velocities need exactly three components".into())),
    }
}

fn kernel_rules(cfg: &RunConfig, model: &ModelFile) -> Result<KernelRules> {
    cfg.suite.kernel_rules(&model.sigma)
}

/// Evaluates one kernel value.
pub fn eval_kernel(
    model: &ModelFile,
    rules: &KernelRules,
    part: KernelPart,
    i: usize,
    j: usize,
    xi: &Vec3,
    xs: &Vec3,
) -> Result<f64> {
    match &model.gas {
        GasModel::Polyatomic(g) => {
            let k = PolyKernels::new(g, model.sigma.poly()?, rules);
            match part {
                KernelPart::K => k.k(i, j, xi, xs),
                KernelPart::K1 => k.k1(i, j, xi, xs),
                KernelPart::K2 => k.k2(i, j, xi, xs),
                _ => Err(Error::Config("polyatomic kernels are k, k1 and k2".into())),
            }
        }
        GasModel::Mixture(m) => {
            let k = MixKernels::new(m, model.sigma.mix(m.s())?, rules);
            match part {
                KernelPart::K => k.k(i, j, xi, xs),
                KernelPart::Loss => k.loss(i, j, xi, xs),
                KernelPart::Same => k.same(i, j, xi, xs),
                KernelPart::Cross => k.cross(i, j, xi, xs),
                _ => Err(Error::Config("mixture kernels are k, loss, same and cross".into())),
            }
        }
    }
}

#[derive(Debug, Deserialize)]
struct BatchRow {
    i: usize,
    j: usize,
    xi_x: f64,
    xi_y: f64,
    xi_z: f64,
    xs_x: f64,
    xs_y: f64,
    xs_z: f64,
}

/// `kernel eval`: one value to standard output, or a CSV batch.
pub fn cmd_kernel_eval(a: &KernelArgs) -> Result<Outcome> {
    let cfg = RunConfig::resolve(&a.run)?;
    let model = cfg.model_file()?;
    let rules = kernel_rules(&cfg, &model)?;
    if let Some(batch) = &a.batch {
        let out = cfg.output_dir()?;
        let mut reader = csv::Reader::from_path(batch).map_err(|e| Error::Config(format!("{}: {e}", batch.display())))?;
        let mut w = std::io::BufWriter::new(fs::File::create(out.join("kernel.csv"))?);
        writeln!(w, "i,j,xi_x,xi_y,xi_z,xs_x,xs_y,xs_z,value")?;
        for row in reader.deserialize() {
            let r: BatchRow = row.map_err(|e| Error::Config(format!("{}: {e}", batch.display())))?;
            let xi = Vec3::new(r.xi_x, r.xi_y, r.xi_z);
            let xs = Vec3::new(r.xs_x, r.xs_y, r.xs_z);
            let v = eval_kernel(&model, &rules, a.part, r.i, r.j, &xi, &xs)?;
            writeln!(w, "{},{},{},{},{},{},{},{},{}", r.i, r.j, r.xi_x, r.xi_y, r.xi_z, r.xs_x, r.xs_y, r.xs_z, v)?;
        }
        w.flush()?;
        return Ok(Outcome::Success);
    }
    let xi = vec3(a.xi.as_deref().ok_or_else(|| Error::Config("--xi is required without --batch".into()))?)?;
    let xs = vec3(a.xi_star.as_deref().ok_or_else(|| Error::Config("--xi-star is required without --batch".into()))?)?;
    println!("{}", eval_kernel(&model, &rules, a.part, a.i, a.j, &xi, &xs)?);
    Ok(Outcome::Success)
}
