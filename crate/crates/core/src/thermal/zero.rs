//! The `t → 0` limit of `βF·t`.
//!
//! As `t → 0` the Matsubara sum `Σ'_m t G(mt)` becomes `∫₀^∞ G(x) dx`, with
//! `G(x)` the `l`-summed integrand at continuous `x`. The half-line is mapped
//! onto `u ∈ (0, 1]` by `x = L(1 − u)/u` and integrated by double-exponential
//! panels, bisecting any panel whose error estimate exceeds its share of the
//! tolerance.

use super::{l_sum, SummationPolicy};
use crate::dispersion::DispersionModel;
use crate::eigen::ModeSolver;
use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;

/// Default relative tolerance of the quadrature.
pub const ZERO_T_REL_TOL: f64 = 1e-6;

/// Below this `x` the integrand is replaced by its `x = 0` value.
const X_FLOOR: f64 = 1e-9;
/// Decay exponent `2x d/a` beyond which the integrand is taken as zero.
const DECAY_CUTOFF: f64 = 800.0;
const MAX_PANELS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroTemperature {
    /// `lim_{t→0} βF·t`
    pub beta_f_t: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
    pub panels: usize,
}

pub fn free_energy_zero_temperature(
    alpha: f64,
    model: &DispersionModel,
    policy: &SummationPolicy,
    rel_tol: f64,
) -> Result<ZeroTemperature> {
    policy.validate()?;
    if !(rel_tol > 0.0 && rel_tol < 1e-2) {
        return Err(domain(format!(
            "quadrature tolerance must lie in (0, 1e-2), got {rel_tol}"
        )));
    }
    policy.with_table(|table| {
        let solver = ModeSolver::new(alpha, *model, policy.crossover, table)?;
        integrate(&solver, policy, rel_tol)
    })
}

fn integrate(
    solver: &ModeSolver<'_>,
    policy: &SummationPolicy,
    rel_tol: f64,
) -> Result<ZeroTemperature> {
    let gap = 1.0 / solver.alpha() - 1.0;
    let scale = 1.0 / (2.0 * gap);
    let x_max = DECAY_CUTOFF / (2.0 * gap);
    let g0 = l_sum(|l| solver.static_mode(l), 0.0, policy)?.total();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let evaluations = RefCell::new(0u64);

    let g = |x: f64| -> f64 {
        if x < X_FLOOR {
            return g0;
        }
        if x > x_max {
            return 0.0;
        }
        *evaluations.borrow_mut() += 1;
        let r = solver
            .frequency(x)
            .and_then(|f| l_sum(|l| f.mode(l), 0.0, policy));
        match r {
            Ok(b) => b.total(),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    };
    let h = |u: f64| -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        g(scale * (1.0 - u) / u) * scale / (u * u)
    };

    // coarse pass fixes the absolute target
    let coarse = quadrature::integrate(
        h,
        0.0,
        1.0,
        1e-3 * (g0.abs() * scale).max(f64::MIN_POSITIVE),
    );
    take_failure(&failure)?;
    let target = rel_tol * coarse.integral.abs();

    let mut pending = vec![(0.0, 1.0)];
    let mut total = 0.0;
    let mut error = 0.0;
    let mut panels = 0;
    while let Some((a, b)) = pending.pop() {
        let share = target * (b - a);
        let out = quadrature::integrate(h, a, b, share);
        take_failure(&failure)?;
        if out.error_estimate <= share || b - a < 1e-6 {
            total += out.integral;
            error += out.error_estimate;
            panels += 1;
        } else {
            let mid = 0.5 * (a + b);
            pending.push((mid, b));
            pending.push((a, mid));
        }
        if panels + pending.len() > MAX_PANELS {
            return Err(Error::Quadrature(format!(
                "no convergence to relative {rel_tol} within {MAX_PANELS} panels"
            )));
        }
    }
    if error > target {
        return Err(Error::Quadrature(format!(
            "error estimate {error:e} above target {target:e}"
        )));
    }
    let evaluations = *evaluations.borrow();
    Ok(ZeroTemperature {
        beta_f_t: total,
        error_estimate: error,
        evaluations,
        panels,
    })
}

fn take_failure(failure: &RefCell<Option<Error>>) -> Result<()> {
    match failure.borrow_mut().take() {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
