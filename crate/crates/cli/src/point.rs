//! Single-point evaluation and the JSON record it produces.

use crate::args::Report;
use crate::error::{usage, CliError};
use crate::resolve::PolicyEcho;
use casimir_core::dispersion::{effective_conductivity, epsilon, DispersionModel, Permittivity};
use casimir_core::thermal::{
    free_energy, free_energy_m0, free_energy_zero_temperature, internal_energy, Config,
    FreeEnergyResult, InternalEnergy, SummationPolicy, ZeroTemperature, ZERO_T_REL_TOL,
};
use casimir_core::units::matsubara_omega;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Configuration echo embedded in every record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub alpha: f64,
    pub d_over_a: f64,
    pub t: f64,
    pub model: DispersionModel,
    pub descriptor: String,
}

impl ConfigEcho {
    /// `d_over_a` is taken as given rather than recomputed from `alpha`.
    pub fn new(c: &Config, d_over_a: f64) -> Self {
        Self {
            alpha: c.alpha,
            d_over_a,
            t: c.t,
            model: c.model,
            descriptor: c.model.to_string(),
        }
    }
}

/// Drude conductivity figures; rates in s⁻¹, conductivities in S/m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conductivity {
    pub temperature_k: f64,
    pub omega_1: f64,
    pub sigma_0: f64,
    pub sigma_omega_1: f64,
    /// `n²ω̂` as `ω̂ → 0`, i.e. `σ(0)/ε_0`.
    pub prefactor_0: f64,
    /// `(ε(iω̂_1) − 1)·ω̂_1`.
    pub prefactor_1: f64,
}

/// What a point evaluation needs: a thermal configuration and/or the SI
/// inputs of the conductivity report.
#[derive(Debug, Clone)]
pub struct PointRequest {
    /// Configuration with its `d/a` exactly as given.
    pub config: Option<(Config, f64)>,
    pub si: Option<(DispersionModel, f64)>,
    pub reports: Vec<Report>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub version: String,
    pub config: Option<ConfigEcho>,
    pub policy: PolicyEcho,
    pub reports: Vec<Report>,
    #[serde(default)]
    pub free_energy: Option<FreeEnergyResult>,
    #[serde(default)]
    pub m0: Option<FreeEnergyResult>,
    /// `F(m = 0)/F`; null when `F` vanishes.
    #[serde(default, rename = "Y")]
    pub y: Option<f64>,
    #[serde(default)]
    pub internal_energy: Option<InternalEnergy>,
    #[serde(default)]
    pub zero_t: Option<ZeroTemperature>,
    #[serde(default)]
    pub conductivity: Option<Conductivity>,
    pub converged: bool,
    pub wall_time_s: f64,
}

pub fn evaluate(
    req: &PointRequest,
    policy: &SummationPolicy,
    version: &str,
) -> Result<PointRecord, CliError> {
    let start = Instant::now();
    let needs_config = req.reports.iter().any(|r| *r != Report::Conductivity);
    let config = match (needs_config, req.config) {
        (true, None) => return Err(usage("this report needs a temperature and a gap")),
        (_, c) => c.map(|(c, _)| c),
    };
    let mut rec = PointRecord {
        version: version.to_string(),
        config: req.config.as_ref().map(|(c, d)| ConfigEcho::new(c, *d)),
        policy: PolicyEcho::from(policy),
        reports: req.reports.clone(),
        free_energy: None,
        m0: None,
        y: None,
        internal_energy: None,
        zero_t: None,
        conductivity: None,
        converged: true,
        wall_time_s: 0.0,
    };
    for report in &req.reports {
        match report {
            Report::FreeEnergy | Report::Y => {
                if rec.free_energy.is_none() {
                    let c = config.as_ref().expect("checked above");
                    let r = free_energy(c, policy)?;
                    rec.converged &= r.converged;
                    rec.y = (r.beta_f != 0.0).then(|| r.beta_f_m0 / r.beta_f);
                    rec.free_energy = Some(r);
                }
            }
            Report::M0 => {
                let r = free_energy_m0(config.as_ref().expect("checked above"), policy)?;
                rec.converged &= r.converged;
                rec.m0 = Some(r);
            }
            Report::Energy => {
                let e = internal_energy(config.as_ref().expect("checked above"), policy)?;
                rec.converged &= e.converged;
                rec.internal_energy = Some(e);
            }
            Report::ZeroT => {
                let c = config.as_ref().expect("checked above");
                rec.zero_t = Some(free_energy_zero_temperature(
                    c.alpha,
                    &c.model,
                    policy,
                    ZERO_T_REL_TOL,
                )?);
            }
            Report::Conductivity => {
                let (model, kelvin) = req
                    .si
                    .ok_or_else(|| usage("conductivity report needs a Drude model and --T"))?;
                rec.conductivity = Some(conductivity(&model, kelvin)?);
            }
        }
    }
    rec.wall_time_s = start.elapsed().as_secs_f64();
    Ok(rec)
}

fn conductivity(model: &DispersionModel, kelvin: f64) -> Result<Conductivity, CliError> {
    let omega_1 = matsubara_omega(kelvin, 1)?;
    let prefactor_0 = match epsilon(model, 0.0)? {
        Permittivity::ConductorLimit { sigma_over_eps0 } => sigma_over_eps0,
        _ => {
            return Err(usage(
                "conductivity report needs a Drude model with positive --gamma-relax",
            ))
        }
    };
    let prefactor_1 =
        match epsilon(model, omega_1)? {
            Permittivity::Finite(e) => (e - 1.0) * omega_1,
            _ => return Err(usage(
                "conductivity report needs a finite permittivity at the first Matsubara frequency",
            )),
        };
    Ok(Conductivity {
        temperature_k: kelvin,
        omega_1,
        sigma_0: effective_conductivity(model, 0.0)?,
        sigma_omega_1: effective_conductivity(model, omega_1)?,
        prefactor_0,
        prefactor_1,
    })
}
