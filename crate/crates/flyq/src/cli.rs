//! Scenario-driven runner behind the `flyq` binary.
//!
//! A scenario is a single JSON file with exactly the keys of
//! [`ScenarioConfig`]; unknown keys are rejected rather than warned about, so
//! a typo in a physics parameter cannot pass silently. Depending on the
//! configuration the runner dispatches to the lossless pipeline (`gamma = 0`),
//! the jump ensemble (`gamma > 0`), or the dissipation-dominated reduced
//! dynamics (`badcavity.enabled`), and writes plot-ready CSV with the full
//! config echoed in `#` comment lines. Identical config and seed give byte
//! identical output.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bad_cavity::{
    covariance_of_state, ecs_covariance_closed, evolve_reduced, kossakowski, reduced_generator,
    standard_form, steady_state, CovarianceMatrix, ReducedGenerator,
};
use crate::coupling::{CouplingProfile, ModeGeometry, Trajectory};
use crate::hilbert::{to_descending_qubit_basis, DensityOperator, FactorLabel, SpaceLayout};
use crate::measures::{discord, negativity};
use crate::resources::{make_noon, CavityLoad, DrivingResource};
use crate::trajectories::{run_ensemble, JumpConfig};
use crate::unitary::evolve_protocol;
use crate::{Error, Result};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Complete description of one experiment.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub resource: ResourceConfig,
    pub transmittivity: f64,
    pub mode: ModeConfig,
    pub trajectory: TrajectoryConfig,
    pub omega0_rad_s: f64,
    pub gamma_rad_s: f64,
    /// Fock cutoff per bosonic factor; 0 selects it automatically.
    pub truncation: usize,
    pub time_grid: TimeGridConfig,
    #[serde(default)]
    pub mc: McConfig,
    #[serde(default)]
    pub badcavity: BadCavityConfig,
    pub output: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, tag = "type")]
pub enum ResourceConfig {
    #[serde(rename = "noon")]
    Noon {
        #[serde(rename = "N")]
        n: u32,
    },
    #[serde(rename = "ecs")]
    Ecs { alpha: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub u: u32,
    pub v: u32,
    pub waist_m: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, tag = "type")]
pub enum TrajectoryConfig {
    #[serde(rename = "freefall")]
    FreeFall { x0_over_waist: f64, g: f64 },
    #[serde(rename = "uniform")]
    Uniform {
        x0_over_waist: f64,
        #[serde(rename = "V")]
        v: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TimeGridConfig {
    pub t_max_s: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub n_traj: usize,
    pub master_seed: u64,
    pub tol: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_traj: 1,
            master_seed: 0,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BadCavityConfig {
    pub enabled: bool,
    pub gamma_t_max: f64,
    pub alpha_sweep: Vec<f64>,
}

impl Default for BadCavityConfig {
    fn default() -> Self {
        Self {
            enabled: false,
            gamma_t_max: 8.0,
            alpha_sweep: Vec::new(),
        }
    }
}

impl ScenarioConfig {
    /// Parses and validates a config file. Parse failures and invalid fields
    /// both come back as [`Error::Config`] with a description of the problem.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(0.0..=1.0).contains(&self.transmittivity) {
            problems.push(format!(
                "transmittivity: must lie in [0, 1], got {}",
                self.transmittivity
            ));
        }
        if self.mode.v != 0 {
            problems.push(format!("mode.v: must be 0, got {}", self.mode.v));
        }
        if self.mode.waist_m <= 0.0 {
            problems.push(format!(
                "mode.waist_m: must be positive, got {}",
                self.mode.waist_m
            ));
        }
        if self.omega0_rad_s <= 0.0 {
            problems.push(format!(
                "omega0_rad_s: must be positive, got {}",
                self.omega0_rad_s
            ));
        }
        if self.gamma_rad_s < 0.0 {
            problems.push(format!(
                "gamma_rad_s: must be nonnegative, got {}",
                self.gamma_rad_s
            ));
        }
        match &self.resource {
            ResourceConfig::Ecs { alpha } if *alpha <= 0.0 => {
                problems.push(format!("resource.alpha: must be positive, got {alpha}"));
            }
            _ => {}
        }
        match &self.trajectory {
            TrajectoryConfig::FreeFall { x0_over_waist, g } => {
                if *x0_over_waist >= 0.0 {
                    problems.push(format!(
                        "trajectory.x0_over_waist: must be negative, got {x0_over_waist}"
                    ));
                }
                if *g <= 0.0 {
                    problems.push(format!("trajectory.g: must be positive, got {g}"));
                }
            }
            TrajectoryConfig::Uniform { x0_over_waist, v } => {
                if *x0_over_waist >= 0.0 {
                    problems.push(format!(
                        "trajectory.x0_over_waist: must be negative, got {x0_over_waist}"
                    ));
                }
                if *v <= 0.0 {
                    problems.push(format!("trajectory.V: must be positive, got {v}"));
                }
            }
        }
        if self.time_grid.samples < 2 {
            problems.push(format!(
                "time_grid.samples: need at least 2, got {}",
                self.time_grid.samples
            ));
        }
        if self.time_grid.t_max_s <= 0.0 {
            problems.push(format!(
                "time_grid.t_max_s: must be positive, got {}",
                self.time_grid.t_max_s
            ));
        }
        if self.mc.n_traj < 1 {
            problems.push("mc.n_traj: need at least 1".into());
        }
        if self.mc.tol <= 0.0 {
            problems.push(format!("mc.tol: must be positive, got {}", self.mc.tol));
        }
        if self.badcavity.enabled {
            if self.badcavity.gamma_t_max <= 0.0 {
                problems.push(format!(
                    "badcavity.gamma_t_max: must be positive, got {}",
                    self.badcavity.gamma_t_max
                ));
            }
            for a in &self.badcavity.alpha_sweep {
                if *a <= 0.0 {
                    problems.push(format!(
                        "badcavity.alpha_sweep: amplitudes must be positive, got {a}"
                    ));
                    break;
                }
            }
        }
        if self.output.is_empty() {
            problems.push("output: must not be empty".into());
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }

    /// Canonical single-line JSON used in CSV headers and for hashing.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    fn build_resource(&self) -> Result<DrivingResource> {
        match &self.resource {
            ResourceConfig::Noon { n } => {
                if self.truncation == 0 {
                    Ok(DrivingResource::noon(*n))
                } else {
                    DrivingResource::noon_with_truncation(*n, self.truncation)
                }
            }
            ResourceConfig::Ecs { alpha } => {
                if self.truncation == 0 {
                    DrivingResource::ecs(*alpha)
                } else {
                    DrivingResource::ecs_with_truncation(*alpha, self.truncation)
                }
            }
        }
    }

    fn build_profile(&self) -> Result<CouplingProfile> {
        let geometry = ModeGeometry::new(self.mode.u, self.mode.v, self.mode.waist_m)?;
        let trajectory = match &self.trajectory {
            TrajectoryConfig::FreeFall { x0_over_waist, g } => {
                Trajectory::free_fall(x0_over_waist * self.mode.waist_m, *g)?
            }
            TrajectoryConfig::Uniform { x0_over_waist, v } => {
                Trajectory::uniform(x0_over_waist * self.mode.waist_m, *v)?
            }
        };
        CouplingProfile::new(self.omega0_rad_s, geometry, trajectory)
    }

    fn cavity_load(&self) -> Result<CavityLoad> {
        CavityLoad::new(self.transmittivity)
    }
}

/// A finished run: the main CSV plus an optional companion file (the
/// steady-state sweep of a bad-cavity run).
#[derive(Debug, Clone)]
pub struct CurveOutput {
    /// File name from the config, and the CSV text.
    pub main: (String, String),
    pub companion: Option<(String, String)>,
}

impl CurveOutput {
    /// Writes the file(s) under `out_dir`, creating it if needed. Returns the
    /// path of the main CSV.
    pub fn write_to(&self, out_dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(out_dir)?;
        let main_path = out_dir.join(&self.main.0);
        std::fs::write(&main_path, self.main.1.as_bytes())?;
        if let Some((name, text)) = &self.companion {
            std::fs::write(out_dir.join(name), text.as_bytes())?;
        }
        Ok(main_path)
    }
}

fn fmt(v: f64) -> String {
    // 17 significant digits, round-trip exact for f64
    format!("{v:.16e}")
}

fn config_hash(cfg: &ScenarioConfig) -> String {
    let digest = Sha256::digest(cfg.canonical_json().as_bytes());
    let mut hex = String::new();
    for byte in digest.iter().take(6) {
        let _ = write!(hex, "{byte:02x}");
    }
    hex
}

fn header(cfg: &ScenarioConfig, kind: &str, columns: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# flyq {kind} v{}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, "# config: {}", cfg.canonical_json());
    let _ = writeln!(s, "# config_sha256: {}", config_hash(cfg));
    let _ = writeln!(s, "# columns: {columns}");
    s
}

/// Recovers the echoed config from a CSV produced by [`run_scenario`].
pub fn parse_config_echo(csv: &str) -> Result<ScenarioConfig> {
    for line in csv.lines() {
        if let Some(json) = line.strip_prefix("# config: ") {
            return ScenarioConfig::from_json(json);
        }
    }
    Err(Error::Config("no config echo found in CSV".into()))
}

const RHO_LABELS: [&str; 4] = ["11", "10", "01", "00"];

fn rho_columns() -> String {
    let mut cols = Vec::new();
    for i in RHO_LABELS {
        for j in RHO_LABELS {
            cols.push(format!("rho_{i}_{j}_re"));
            cols.push(format!("rho_{i}_{j}_im"));
        }
    }
    cols.join(",")
}

fn push_rho_entries(row: &mut Vec<String>, rho: &DensityOperator) {
    let descending = to_descending_qubit_basis(rho.matrix());
    for i in 0..4 {
        for j in 0..4 {
            row.push(fmt(descending[(i, j)].re));
            row.push(fmt(descending[(i, j)].im));
        }
    }
}

fn time_grid(t_max: f64, samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|k| t_max * k as f64 / (samples - 1) as f64)
        .collect()
}

/// Runs the configured scenario and renders the CSV output.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<CurveOutput> {
    cfg.validate()?;
    if cfg.badcavity.enabled {
        run_badcavity(cfg)
    } else if cfg.gamma_rad_s == 0.0 {
        if cfg.mc.n_traj > 1 {
            eprintln!(
                "warning: gamma_rad_s = 0 with mc.n_traj = {}; running a single deterministic pass",
                cfg.mc.n_traj
            );
        }
        run_unitary(cfg)
    } else {
        run_mc(cfg)
    }
}

fn run_unitary(cfg: &ScenarioConfig) -> Result<CurveOutput> {
    let resource = cfg.build_resource()?;
    let load = cfg.cavity_load()?;
    let profile = cfg.build_profile()?;
    let times = time_grid(cfg.time_grid.t_max_s, cfg.time_grid.samples);

    let columns = format!(
        "t_seconds,negativity,negativity_stderr,discord,{}",
        rho_columns()
    );
    let mut csv = header(cfg, "run", &columns);
    for &t in &times {
        let rho = evolve_protocol(&resource, load, &[profile, profile], t)?;
        let neg = negativity(&rho)?;
        let disc = discord(&rho, FactorLabel::Qubit2)?;
        let mut row = vec![fmt(t), fmt(neg), fmt(0.0), fmt(disc)];
        push_rho_entries(&mut row, &rho);
        let _ = writeln!(csv, "{}", row.join(","));
    }
    Ok(CurveOutput {
        main: (cfg.output.clone(), csv),
        companion: None,
    })
}

fn run_mc(cfg: &ScenarioConfig) -> Result<CurveOutput> {
    let resource = cfg.build_resource()?;
    let load = cfg.cavity_load()?;
    let profile = cfg.build_profile()?;
    let mut times = time_grid(cfg.time_grid.t_max_s, cfg.time_grid.samples);
    // the trajectory loop samples strictly increasing times; t = 0 is the
    // initial state itself
    let starts_at_zero = times.first().is_some_and(|&t| t == 0.0);
    if starts_at_zero {
        times.remove(0);
    }
    let jump_config = JumpConfig {
        gamma: cfg.gamma_rad_s,
        n_traj: cfg.mc.n_traj,
        master_seed: cfg.mc.master_seed,
        tol: cfg.mc.tol,
        sample_times: times.clone(),
    };
    let estimate = run_ensemble(&resource, load, &[profile, profile], &jump_config)?;

    let columns = format!(
        "t_seconds,negativity,negativity_stderr,discord,{}",
        rho_columns()
    );
    let mut csv = header(cfg, "run", &columns);
    let _ = writeln!(csv, "# mean_jump_count: {}", fmt(estimate.mean_jump_count));
    if starts_at_zero {
        let rho0 = evolve_protocol(&resource, load, &[profile, profile], 0.0)?;
        let mut row = vec![
            fmt(0.0),
            fmt(negativity(&rho0)?),
            fmt(0.0),
            fmt(discord(&rho0, FactorLabel::Qubit2)?),
        ];
        push_rho_entries(&mut row, &rho0);
        let _ = writeln!(csv, "{}", row.join(","));
    }
    for (k, &t) in estimate.times.iter().enumerate() {
        let rho = &estimate.mean_qubit_states[k];
        let disc = discord(rho, FactorLabel::Qubit2)?;
        let mut row = vec![
            fmt(t),
            fmt(estimate.negativity[k]),
            fmt(estimate.negativity_stderr[k]),
            fmt(disc),
        ];
        push_rho_entries(&mut row, rho);
        let _ = writeln!(csv, "{}", row.join(","));
    }
    Ok(CurveOutput {
        main: (cfg.output.clone(), csv),
        companion: None,
    })
}

/// Covariance matrix of the configured driving field, reduced to standard
/// form as the effective-generator construction requires.
fn driving_covariance(resource: &ResourceConfig) -> Result<CovarianceMatrix> {
    let m = match resource {
        ResourceConfig::Noon { n } => covariance_of_state(&make_noon(*n, *n as usize + 3)?)?,
        ResourceConfig::Ecs { alpha } => ecs_covariance_closed(*alpha)?,
    };
    standard_form(&m)
}

fn ground_two_qubits() -> DensityOperator {
    let mut m = DMatrix::<C64>::zeros(4, 4);
    m[(0, 0)] = C64::new(1.0, 0.0);
    DensityOperator::from_matrix_unchecked(SpaceLayout::two_qubits(), m)
}

fn steady_quantities(generator: &ReducedGenerator) -> Result<(DensityOperator, f64, f64)> {
    let ss = steady_state(generator)?;
    let neg = negativity(&ss)?;
    let disc = discord(&ss, FactorLabel::Qubit2)?;
    Ok((ss, neg, disc))
}

fn run_badcavity(cfg: &ScenarioConfig) -> Result<CurveOutput> {
    let m = driving_covariance(&cfg.resource)?;
    let generator = reduced_generator(&kossakowski(&m, 1.0));
    let grid = time_grid(cfg.badcavity.gamma_t_max, cfg.time_grid.samples);
    let series = evolve_reduced(&ground_two_qubits(), &generator, &grid)?;
    let (ss, ss_neg, ss_disc) = steady_quantities(&generator)?;

    let columns = format!(
        "gamma_t,negativity,negativity_stderr,discord,{}",
        rho_columns()
    );
    let mut csv = header(cfg, "run", &columns);
    let _ = writeln!(csv, "# steady_negativity: {}", fmt(ss_neg));
    let _ = writeln!(csv, "# steady_discord: {}", fmt(ss_disc));
    let mut ss_row = Vec::new();
    push_rho_entries(&mut ss_row, &ss);
    let _ = writeln!(csv, "# steady_rho: {}", ss_row.join(","));
    for (k, &gt) in grid.iter().enumerate() {
        let rho = &series[k];
        let mut row = vec![
            fmt(gt),
            fmt(negativity(rho)?),
            fmt(0.0),
            fmt(discord(rho, FactorLabel::Qubit2)?),
        ];
        push_rho_entries(&mut row, rho);
        let _ = writeln!(csv, "{}", row.join(","));
    }

    let companion = if cfg.badcavity.alpha_sweep.is_empty() {
        None
    } else {
        let mut sweep_csv = header(cfg, "run", "alpha,steady_negativity,steady_discord");
        for &alpha in &cfg.badcavity.alpha_sweep {
            let m = standard_form(&ecs_covariance_closed(alpha)?)?;
            let generator = reduced_generator(&kossakowski(&m, 1.0));
            let (_, neg, disc) = steady_quantities(&generator)?;
            let _ = writeln!(sweep_csv, "{},{},{}", fmt(alpha), fmt(neg), fmt(disc));
        }
        Some((companion_name(&cfg.output), sweep_csv))
    };

    Ok(CurveOutput {
        main: (cfg.output.clone(), csv),
        companion,
    })
}

fn companion_name(output: &str) -> String {
    match output.rsplit_once('.') {
        Some((stem, ext)) => format!("{stem}_alpha_sweep.{ext}"),
        None => format!("{output}_alpha_sweep"),
    }
}

/// Parameter that a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Alpha,
    Omega0,
    Transmittivity,
    Speed,
    Gravity,
}

impl std::str::FromStr for SweepParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(Self::Alpha),
            "omega0" => Ok(Self::Omega0),
            "T" => Ok(Self::Transmittivity),
            "V" => Ok(Self::Speed),
            "g" => Ok(Self::Gravity),
            other => Err(Error::Config(format!(
                "unknown sweep parameter {other:?}; expected one of alpha, omega0, T, V, g"
            ))),
        }
    }
}

impl std::fmt::Display for SweepParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SweepParam::Alpha => "alpha",
            SweepParam::Omega0 => "omega0",
            SweepParam::Transmittivity => "T",
            SweepParam::Speed => "V",
            SweepParam::Gravity => "g",
        };
        write!(f, "{s}")
    }
}

fn apply_param(cfg: &ScenarioConfig, param: SweepParam, value: f64) -> Result<ScenarioConfig> {
    let mut out = cfg.clone();
    match param {
        SweepParam::Alpha => match &mut out.resource {
            ResourceConfig::Ecs { alpha } => *alpha = value,
            ResourceConfig::Noon { .. } => {
                return Err(Error::Config("alpha sweep requires an ecs resource".into()))
            }
        },
        SweepParam::Omega0 => out.omega0_rad_s = value,
        SweepParam::Transmittivity => out.transmittivity = value,
        SweepParam::Speed => match &mut out.trajectory {
            TrajectoryConfig::Uniform { v, .. } => *v = value,
            TrajectoryConfig::FreeFall { .. } => {
                return Err(Error::Config("V sweep requires a uniform trajectory".into()))
            }
        },
        SweepParam::Gravity => match &mut out.trajectory {
            TrajectoryConfig::FreeFall { g, .. } => *g = value,
            TrajectoryConfig::Uniform { .. } => {
                return Err(Error::Config("g sweep requires a freefall trajectory".into()))
            }
        },
    }
    out.validate()?;
    Ok(out)
}

/// Final-time figures of merit of one scenario.
fn final_point(cfg: &ScenarioConfig) -> Result<(f64, f64)> {
    if cfg.badcavity.enabled {
        let m = driving_covariance(&cfg.resource)?;
        let generator = reduced_generator(&kossakowski(&m, 1.0));
        let (_, neg, disc) = steady_quantities(&generator)?;
        return Ok((neg, disc));
    }
    let resource = cfg.build_resource()?;
    let load = cfg.cavity_load()?;
    let profile = cfg.build_profile()?;
    let t_final = cfg.time_grid.t_max_s;
    if cfg.gamma_rad_s == 0.0 {
        let rho = evolve_protocol(&resource, load, &[profile, profile], t_final)?;
        Ok((negativity(&rho)?, discord(&rho, FactorLabel::Qubit2)?))
    } else {
        let jump_config = JumpConfig {
            gamma: cfg.gamma_rad_s,
            n_traj: cfg.mc.n_traj,
            master_seed: cfg.mc.master_seed,
            tol: cfg.mc.tol,
            sample_times: vec![t_final],
        };
        let estimate = run_ensemble(&resource, load, &[profile, profile], &jump_config)?;
        let rho = &estimate.mean_qubit_states[0];
        Ok((estimate.negativity[0], discord(rho, FactorLabel::Qubit2)?))
    }
}

/// Runs the scenario once per grid point of the swept parameter and reports
/// the final negativity and discord of each point, plus the argmax row.
pub fn sweep_scenario(
    cfg: &ScenarioConfig,
    param: SweepParam,
    grid: &[f64],
) -> Result<CurveOutput> {
    cfg.validate()?;
    if grid.is_empty() {
        return Err(Error::Config("sweep grid is empty".into()));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for &value in grid {
        let point_cfg = apply_param(cfg, param, value)?;
        let (neg, disc) = final_point(&point_cfg)?;
        rows.push((value, neg, disc));
    }
    let argmax = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(k, _)| k)
        .unwrap();

    let columns = format!("{param},final_negativity,final_discord");
    let mut csv = header(cfg, "sweep", &columns);
    let _ = writeln!(
        csv,
        "# argmax: {param} = {}, final_negativity = {}",
        fmt(rows[argmax].0),
        fmt(rows[argmax].1)
    );
    for (value, neg, disc) in &rows {
        let _ = writeln!(csv, "{},{},{}", fmt(*value), fmt(*neg), fmt(*disc));
    }

    let name = match cfg.output.rsplit_once('.') {
        Some((stem, ext)) => format!("{stem}_sweep_{param}.{ext}"),
        None => format!("{}_sweep_{param}", cfg.output),
    };
    Ok(CurveOutput {
        main: (name, csv),
        companion: None,
    })
}

/// The bundled scenario files: one per figure panel plus the steady-state
/// data set.
pub fn figure_bundle() -> Vec<(String, ScenarioConfig)> {
    let base = |resource, waist_m, trajectory, omega0, gamma, t_max, output: &str| ScenarioConfig {
        resource,
        transmittivity: 0.9,
        mode: ModeConfig { u: 2, v: 0, waist_m },
        trajectory,
        omega0_rad_s: omega0,
        gamma_rad_s: gamma,
        truncation: 0,
        time_grid: TimeGridConfig {
            t_max_s: t_max,
            samples: 200,
        },
        mc: McConfig::default(),
        badcavity: BadCavityConfig::default(),
        output: output.into(),
    };

    let mut bundle = Vec::new();

    // single-photon driving, free fall, lossless
    bundle.push((
        "fig2a.json".to_string(),
        base(
            ResourceConfig::Noon { n: 1 },
            10e-6,
            TrajectoryConfig::FreeFall { x0_over_waist: -4.0, g: 9.82 },
            5.9e3,
            0.0,
            5.2e-3,
            "fig2a.csv",
        ),
    ));

    // single-photon driving, uniform motion, lossless
    bundle.push((
        "fig2b.json".to_string(),
        base(
            ResourceConfig::Noon { n: 1 },
            10e-6,
            TrajectoryConfig::Uniform { x0_over_waist: -4.0, v: 0.001 },
            365.0,
            0.0,
            0.125,
            "fig2b.csv",
        ),
    ));

    // single-photon driving with cavity loss, jump ensemble
    let mut fig2c = base(
        ResourceConfig::Noon { n: 1 },
        10e-6,
        TrajectoryConfig::FreeFall { x0_over_waist: -4.0, g: 9.82 },
        5.9e3,
        59.0,
        5.2e-3,
        "fig2c.csv",
    );
    fig2c.mc = McConfig {
        n_traj: 2000,
        master_seed: 7_621_041,
        tol: 1e-8,
    };
    bundle.push(("fig2c.json".to_string(), fig2c));

    // entangled-coherent driving, free fall, lossless
    bundle.push((
        "fig4a.json".to_string(),
        base(
            ResourceConfig::Ecs { alpha: 1.1 },
            30e-6,
            TrajectoryConfig::FreeFall { x0_over_waist: -4.0, g: 9.82 },
            6.1e3,
            0.0,
            9.0e-3,
            "fig4a.csv",
        ),
    ));

    // entangled-coherent driving, uniform motion, lossless
    bundle.push((
        "fig4b.json".to_string(),
        base(
            ResourceConfig::Ecs { alpha: 1.1 },
            30e-6,
            TrajectoryConfig::Uniform { x0_over_waist: -4.0, v: 0.005 },
            850.0,
            0.0,
            0.075,
            "fig4b.csv",
        ),
    ));

    // entangled-coherent driving with cavity loss; the modest amplitude keeps
    // the truncated space small and the ensemble size keeps the runtime sane
    let mut fig4c = base(
        ResourceConfig::Ecs { alpha: 0.9 },
        30e-6,
        TrajectoryConfig::Uniform { x0_over_waist: -4.0, v: 0.005 },
        340.0,
        3.4,
        0.075,
        "fig4c.csv",
    );
    fig4c.mc = McConfig {
        n_traj: 200,
        master_seed: 7_621_042,
        tol: 1e-8,
    };
    fig4c.time_grid.samples = 100;
    bundle.push(("fig4c.json".to_string(), fig4c));

    // dissipation-dominated regime: reduced dynamics, steady state, and the
    // steady-state discord against the driving amplitude
    let mut fig5 = base(
        ResourceConfig::Noon { n: 1 },
        10e-6,
        TrajectoryConfig::FreeFall { x0_over_waist: -4.0, g: 9.82 },
        5.9e3,
        0.0,
        5.2e-3,
        "fig5.csv",
    );
    fig5.time_grid.samples = 161;
    fig5.badcavity = BadCavityConfig {
        enabled: true,
        gamma_t_max: 8.0,
        alpha_sweep: (1..=60).map(|k| 0.05 * k as f64).collect(),
    };
    bundle.push(("fig5.json".to_string(), fig5));

    bundle
}

/// Writes the bundled scenario files into `out_dir`.
pub fn write_figure_bundle(out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut paths = Vec::new();
    for (name, cfg) in figure_bundle() {
        let path = out_dir.join(&name);
        let pretty = serde_json::to_string_pretty(&cfg)
            .map_err(|e| Error::Config(format!("serialize bundled scenario: {e}")))?;
        std::fs::write(&path, pretty.as_bytes())?;
        paths.push(path);
    }
    Ok(paths)
}
