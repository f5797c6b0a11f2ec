//! Permittivity models on the imaginary frequency axis.
//!
//! Model parameters are rates in the same unit as the frequency they are
//! evaluated at. The thermal sums use `x = ω̂a/c`, so a model handed to them
//! carries `ω_p a/c` and `γ_relax a/c`; [`DispersionModel::in_radius_units`]
//! does that conversion from SI. The planar diagnostics and the conductivity
//! work directly in s⁻¹.
//!
//! `gamma_relax` is the Drude relaxation rate. It is unrelated to the
//! `γ` coefficient of the mode eigenvalues (`eigen::GammaDelta::gamma_c`).

use crate::error::{domain, Error, Result};
use crate::units::{C, EPSILON_0};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Order of the `n → ∞`, `m → 0` limits for an ideal metal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetalOption {
    /// `n → ∞` first: the static TE mode counts (the conventional result).
    A,
    /// `m → 0` first: the static TE mode drops out.
    B,
}

impl fmt::Display for MetalOption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetalOption::A => "A",
            MetalOption::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum DispersionModel {
    ConstantIndex {
        n: f64,
    },
    /// `ε = 1 + ω_p²/ω̂²`
    Plasma {
        omega_p: f64,
    },
    /// `ε = 1 + ω_p²/(ω̂(ω̂ + γ_relax))`
    Drude {
        omega_p: f64,
        gamma_relax: f64,
    },
    IdealMetal {
        option: MetalOption,
    },
}

/// `ε(iω̂)`, including the tagged `ω̂ = 0` limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Permittivity {
    Finite(f64),
    /// Drude at `ω̂ = 0`: `ε·ω̂ → σ(0)/ε_0`.
    ConductorLimit {
        sigma_over_eps0: f64,
    },
    /// Plasma at `ω̂ = 0`: `ε·ω̂² → ω_p²`.
    Divergent {
        omega_p_sq: f64,
    },
    /// Ideal metal at any frequency.
    Infinite,
}

impl DispersionModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DispersionModel::ConstantIndex { n } if !(n >= 1.0) || !n.is_finite() => {
                Err(domain(format!("refractive index must be >= 1, got {n}")))
            }
            DispersionModel::Plasma { omega_p } if !(omega_p > 0.0) || !omega_p.is_finite() => Err(
                domain(format!("plasma frequency must be positive, got {omega_p}")),
            ),
            DispersionModel::Drude {
                omega_p,
                gamma_relax,
            } if !(omega_p > 0.0) || !(gamma_relax >= 0.0) || !gamma_relax.is_finite() => {
                Err(domain(format!(
                    "Drude needs omega_p > 0 and gamma_relax >= 0, got {omega_p}, {gamma_relax}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// SI rates (s⁻¹) converted to units of `c/a` for inner radius `a` (m).
    pub fn in_radius_units(&self, radius: f64) -> DispersionModel {
        let k = radius / C;
        match *self {
            DispersionModel::Plasma { omega_p } => DispersionModel::Plasma {
                omega_p: omega_p * k,
            },
            DispersionModel::Drude {
                omega_p,
                gamma_relax,
            } => DispersionModel::Drude {
                omega_p: omega_p * k,
                gamma_relax: gamma_relax * k,
            },
            other => other,
        }
    }

    pub fn is_dispersive(&self) -> bool {
        matches!(
            self,
            DispersionModel::Plasma { .. } | DispersionModel::Drude { .. }
        )
    }

    /// `ε(iω̂) − 1` for `ω̂ > 0`, computed without cancellation.
    #[inline]
    pub(crate) fn susceptibility(&self, omega: f64) -> f64 {
        match *self {
            DispersionModel::ConstantIndex { n } => (n - 1.0) * (n + 1.0),
            DispersionModel::Plasma { omega_p } => (omega_p / omega).powi(2),
            DispersionModel::Drude {
                omega_p,
                gamma_relax,
            } => omega_p * omega_p / (omega * (omega + gamma_relax)),
            DispersionModel::IdealMetal { .. } => f64::INFINITY,
        }
    }

    /// Refractive index at `ω̂ > 0`; `None` for an ideal metal.
    #[inline]
    pub fn refractive_index(&self, omega: f64) -> Option<f64> {
        match *self {
            DispersionModel::ConstantIndex { n } => Some(n),
            DispersionModel::IdealMetal { .. } => None,
            _ => Some((1.0 + self.susceptibility(omega)).sqrt()),
        }
    }
}

impl fmt::Display for DispersionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DispersionModel::ConstantIndex { n } => write!(f, "constant:n={n}"),
            DispersionModel::Plasma { omega_p } => write!(f, "plasma:omega_p={omega_p}"),
            DispersionModel::Drude {
                omega_p,
                gamma_relax,
            } => write!(f, "drude:omega_p={omega_p}:gamma_relax={gamma_relax}"),
            DispersionModel::IdealMetal { option } => write!(f, "ideal-metal:option={option}"),
        }
    }
}

pub fn epsilon(model: &DispersionModel, omega: f64) -> Result<Permittivity> {
    model.validate()?;
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(domain(format!(
            "imaginary frequency must be >= 0, got {omega}"
        )));
    }
    Ok(match *model {
        DispersionModel::ConstantIndex { n } => Permittivity::Finite(n * n),
        DispersionModel::IdealMetal { .. } => Permittivity::Infinite,
        DispersionModel::Plasma { omega_p } if omega == 0.0 => Permittivity::Divergent {
            omega_p_sq: omega_p * omega_p,
        },
        DispersionModel::Drude {
            omega_p,
            gamma_relax,
        } if omega == 0.0 => {
            if gamma_relax > 0.0 {
                Permittivity::ConductorLimit {
                    sigma_over_eps0: omega_p * omega_p / gamma_relax,
                }
            } else {
                Permittivity::Divergent {
                    omega_p_sq: omega_p * omega_p,
                }
            }
        }
        _ => Permittivity::Finite(1.0 + model.susceptibility(omega)),
    })
}

/// Effective Drude conductivity `σ(iω̂) = ε_0 ω_p²/(ω̂ + γ_relax)` in S/m;
/// the model must carry SI rates.
pub fn effective_conductivity(model: &DispersionModel, omega: f64) -> Result<f64> {
    model.validate()?;
    if !(omega >= 0.0) {
        return Err(domain(format!(
            "imaginary frequency must be >= 0, got {omega}"
        )));
    }
    match *model {
        DispersionModel::Drude {
            omega_p,
            gamma_relax,
        } => {
            let denom = omega + gamma_relax;
            if denom == 0.0 {
                return Err(domain(
                    "conductivity diverges at zero frequency without relaxation",
                ));
            }
            Ok(EPSILON_0 * omega_p * omega_p / denom)
        }
        _ => Err(Error::Unsupported(format!(
            "effective conductivity is defined for the Drude model only, got {model}"
        ))),
    }
}

/// Planar Lifshitz variables at one `(ω̂, k_⊥)` point, SI units:
/// `k_⊥ = (ω̂/c)(p² − 1)^{1/2}`, `s = (ε − 1 + p²)^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarPoint {
    pub omega_hat: f64,
    pub k_perp: f64,
    pub p: f64,
    pub s: f64,
}

pub fn planar_point(model: &DispersionModel, omega: f64, k_perp: f64) -> Result<PlanarPoint> {
    check_planar(model, omega, k_perp)?;
    if omega == 0.0 {
        return Err(domain("Lifshitz variables diverge at zero frequency"));
    }
    let q = k_perp * C / omega;
    let p = q.hypot(1.0);
    let s = (model.susceptibility(omega) + p * p).sqrt();
    Ok(PlanarPoint {
        omega_hat: omega,
        k_perp,
        p,
        s,
    })
}

fn check_planar(model: &DispersionModel, omega: f64, k_perp: f64) -> Result<()> {
    model.validate()?;
    if !(k_perp > 0.0) {
        return Err(domain(format!("k_perp must be positive, got {k_perp}")));
    }
    if !(omega >= 0.0) {
        return Err(domain(format!(
            "imaginary frequency must be >= 0, got {omega}"
        )));
    }
    if matches!(model, DispersionModel::IdealMetal { .. }) {
        return Err(Error::Unsupported(
            "planar r2 needs a finite-permittivity model".into(),
        ));
    }
    Ok(())
}

/// Perpendicular-polarisation reflection coefficient `r_2 = (p − s)/(p + s)`.
///
/// Evaluated as `−(ε − 1)/(p + s)²`, so it is negative for `ε > 1`. At
/// `ω̂ = 0` the limit at fixed `k_⊥` is returned: zero for Drude with
/// relaxation and for constant index,
/// `(k_⊥c − (k_⊥²c² + ω_p²)^{1/2}) / (k_⊥c + (k_⊥²c² + ω_p²)^{1/2})` for plasma.
pub fn r2_perpendicular(model: &DispersionModel, omega: f64, k_perp: f64) -> Result<f64> {
    check_planar(model, omega, k_perp)?;
    if omega == 0.0 {
        let kc = k_perp * C;
        return Ok(match *model {
            DispersionModel::Plasma { omega_p }
            | DispersionModel::Drude {
                omega_p,
                gamma_relax: 0.0,
            } => {
                let root = kc.hypot(omega_p);
                (kc - root) / (kc + root)
            }
            _ => 0.0,
        });
    }
    let pt = planar_point(model, omega, k_perp)?;
    let sum = pt.p + pt.s;
    Ok(-model.susceptibility(omega) / (sum * sum))
}

/// Small-frequency Drude slope of `|r_2|` against `ω̂/γ_relax`:
/// `ω_p²/(4 k_⊥² c²)`.
pub fn r2_drude_slope(omega_p: f64, k_perp: f64) -> f64 {
    let kc = k_perp * C;
    omega_p * omega_p / (4.0 * kc * kc)
}
