//! Turning parsed flags into core configurations and policies.

use crate::args::{AxisArgs, ModelArgs, ModelKind, OptionArg, PolicyArgs, SchemeArg, StateArgs};
use crate::error::{usage, CliError};
use casimir_core::debye::Crossover;
use casimir_core::dispersion::{DispersionModel, MetalOption};
use casimir_core::thermal::{Config, Executor, SummationPolicy, SummationScheme};
use casimir_core::units::reduced_temperature;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

impl ModelArgs {
    /// The model with rates exactly as given on the command line.
    pub fn raw_model(&self) -> Result<DispersionModel, CliError> {
        let name = self
            .model
            .to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default();
        let need = |v: Option<f64>, flag: &str| {
            v.ok_or_else(|| usage(format!("--model {name} needs {flag}")))
        };
        let model = match self.model {
            ModelKind::Constant => DispersionModel::ConstantIndex {
                n: need(self.n, "--n")?,
            },
            ModelKind::Plasma => DispersionModel::Plasma {
                omega_p: need(self.omega_p, "--omega-p")?,
            },
            ModelKind::Drude => DispersionModel::Drude {
                omega_p: need(self.omega_p, "--omega-p")?,
                gamma_relax: need(self.gamma_relax, "--gamma-relax")?,
            },
            ModelKind::IdealMetal => DispersionModel::IdealMetal {
                option: match self.option {
                    OptionArg::A => MetalOption::A,
                    OptionArg::B => MetalOption::B,
                },
            },
        };
        model.validate()?;
        Ok(model)
    }

    /// The model in units of `c/a`, converting SI rates when a radius is set.
    pub fn reduced_model(&self) -> Result<DispersionModel, CliError> {
        let raw = self.raw_model()?;
        match self.radius {
            Some(a) if !(a > 0.0) => Err(usage(format!("--radius must be positive, got {a}"))),
            Some(a) => Ok(raw.in_radius_units(a)),
            None => Ok(raw),
        }
    }
}

/// A gap given either as `d/a` or as `a/b`; kept as typed so the echo
/// reproduces the input exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Gap {
    DOverA(f64),
    AOverB(f64),
}

impl Gap {
    pub fn config(self, t: f64, model: DispersionModel) -> Result<Config, CliError> {
        Ok(match self {
            Gap::DOverA(d) => Config::from_gap(d, t, model)?,
            Gap::AOverB(alpha) => Config::new(alpha, t, model)?,
        })
    }

    pub fn d_over_a(self) -> f64 {
        match self {
            Gap::DOverA(d) => d,
            Gap::AOverB(a) => 1.0 / a - 1.0,
        }
    }

    pub fn alpha(self) -> f64 {
        match self {
            Gap::DOverA(d) => 1.0 / (1.0 + d),
            Gap::AOverB(a) => a,
        }
    }
}

impl StateArgs {
    pub fn gaps(&self) -> Vec<Gap> {
        if self.a_over_b.is_empty() {
            self.d_over_a.iter().map(|&d| Gap::DOverA(d)).collect()
        } else {
            self.a_over_b.iter().map(|&a| Gap::AOverB(a)).collect()
        }
    }

    pub fn require_gaps(&self) -> Result<Vec<Gap>, CliError> {
        let g = self.gaps();
        if g.is_empty() {
            return Err(usage("one of --d-over-a or --a-over-b is required"));
        }
        Ok(g)
    }

    /// Reduced temperatures from `--t`, or from `--T` together with the radius.
    pub fn temperatures(&self, radius: Option<f64>) -> Result<Vec<f64>, CliError> {
        match (self.t.is_empty(), self.temperature.is_empty()) {
            (false, false) => Err(usage("give either --t or --T, not both")),
            (true, true) => Err(usage("one of --t or --T is required")),
            (false, true) => Ok(self.t.clone()),
            (true, false) => {
                let a = radius
                    .ok_or_else(|| usage("--T needs --radius to form the reduced temperature"))?;
                self.temperature
                    .iter()
                    .map(|&kelvin| Ok(reduced_temperature(kelvin, a)?))
                    .collect()
            }
        }
    }
}

pub fn single<T: Copy>(values: &[T], what: &str) -> Result<T, CliError> {
    match values {
        [v] => Ok(*v),
        [] => Err(usage(format!("{what} is required"))),
        _ => Err(usage(format!("{what} takes a single value here"))),
    }
}

impl AxisArgs {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        let values = match (self.from, self.to, self.count) {
            (Some(lo), Some(hi), Some(count)) => {
                if !(lo > 0.0 && hi > lo) || count < 2 {
                    return Err(usage("range needs 0 < --from < --to and --count >= 2"));
                }
                let (a, b) = (lo.log10(), hi.log10());
                (0..count)
                    .map(|i| match i {
                        0 => lo,
                        i if i == count - 1 => hi,
                        i => 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64),
                    })
                    .collect()
            }
            _ => self.points.clone(),
        };
        if values.is_empty() {
            return Err(usage("sweep needs --points or --from/--to/--count"));
        }
        if values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(usage("sweep points must be positive and finite"));
        }
        if values.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(usage("sweep points must be strictly increasing"));
        }
        Ok(values)
    }
}

/// The parts of the summation policy that can change a result. The
/// executor is left out: worker count never changes a value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyEcho {
    pub rel_tol: f64,
    pub l_cap: u32,
    pub m_cap: u64,
    pub crossover: Crossover,
    pub k_max: usize,
    pub scheme: SummationScheme,
}

impl From<&SummationPolicy> for PolicyEcho {
    fn from(p: &SummationPolicy) -> Self {
        Self {
            rel_tol: p.rel_tol,
            l_cap: p.l_cap,
            m_cap: p.m_cap,
            crossover: p.crossover,
            k_max: p.k_max,
            scheme: p.scheme,
        }
    }
}

impl PolicyArgs {
    pub fn policy(&self, executor: Executor) -> Result<SummationPolicy, CliError> {
        let d = SummationPolicy::default();
        let p = SummationPolicy {
            rel_tol: self.rel_tol.unwrap_or(d.rel_tol),
            l_cap: self.l_cap.unwrap_or(d.l_cap),
            m_cap: self.m_cap.unwrap_or(d.m_cap),
            crossover: Crossover {
                x_threshold: self.crossover_x.unwrap_or(d.crossover.x_threshold),
                l_threshold: self.crossover_l.unwrap_or(d.crossover.l_threshold),
            },
            scheme: match self.scheme {
                Some(SchemeArg::Pairwise) => SummationScheme::Pairwise,
                Some(SchemeArg::Compensated) | None => SummationScheme::Compensated,
            },
            executor,
            ..d
        };
        p.validate()?;
        Ok(p)
    }

    pub fn jobs(&self) -> usize {
        self.jobs.unwrap_or(0)
    }
}
