//! TM and TE mode eigenvalues for one `(m, l)` term.
//!
//! With `x = ω̂a`, `y = ω̂b = x/α` and `n = n(iω̂)`,
//!
//! ```text
//! λ_TM = f1 f2 / (f3 f4)      λ_TE = g1 g2 / (g3 g4)
//! ```
//!
//! Each `f`, `g` is a product of two Riccati functions, one at a base
//! argument and one at `n` times it. The exponential scales of those
//! functions cancel pairwise except for `e^{ls(x) − le(x) + le(y) − ls(y)}`,
//! which in the Debye regime is `e^{−2ν[η(y) − η(x)]}`. That factor is
//! always assembled as one exponent and never from the individual functions.
//!
//! The `m = 0` term is a removable `0/0` in the ratio formulas and is taken
//! from its analytic small-argument limit instead.

use crate::debye::{
    default_table, eval_abcd, frame_unchecked, riccati, Crossover, DebyeFactors,
    DebyePolynomialTable,
};
use crate::dispersion::{DispersionModel, MetalOption};
use crate::error::{domain, Error, Result};
use crate::specfun::{riccati_direct, LogRiccati};

/// Slack below zero tolerated before a negative eigenvalue counts as a
/// fault rather than rounding in a near-cancelled numerator.
const NEGATIVE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeEigenvalues {
    pub m: u64,
    pub l: u32,
    pub lambda_tm: f64,
    pub lambda_te: f64,
}

impl ModeEigenvalues {
    /// `ln(1 − λ_TM)` and `ln(1 − λ_TE)`.
    #[inline]
    pub fn log_factors(&self) -> (f64, f64) {
        ((-self.lambda_tm).ln_1p(), (-self.lambda_te).ln_1p())
    }
}

/// Eigenvalue pair without the `(m, l)` labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambdas {
    pub tm: f64,
    pub te: f64,
}

/// The coefficients `γ = θ(nx)/θ(x)` and `δ = θ(ny)/θ(y)`, with
/// `θ(x) = (1 + (x/ν)²)^{−1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaDelta {
    pub gamma_c: f64,
    pub delta_c: f64,
}

pub fn gamma_delta(x: f64, y: f64, nu: f64, n: f64) -> Result<GammaDelta> {
    if !(n >= 1.0) {
        return Err(domain(format!("refractive index must be >= 1, got {n}")));
    }
    if !(x >= 0.0) || !(y >= x) || !y.is_finite() {
        return Err(domain(format!("need 0 <= x <= y, got x = {x}, y = {y}")));
    }
    if !(nu > 0.0) {
        return Err(domain(format!("order must be positive, got {nu}")));
    }
    let coeff = |w: f64| (w / nu).hypot(1.0) / (n * w / nu).hypot(1.0);
    Ok(GammaDelta {
        gamma_c: coeff(x),
        delta_c: coeff(y),
    })
}

/// How the Riccati functions of a term are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Debye ratios when `(l, x)` is past the crossover, otherwise direct
    /// values, with each of the four arguments dispatched on its own.
    Auto,
    /// Direct evaluation at every argument.
    Direct,
    /// Debye ratios at every argument.
    Debye,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Medium {
    Index(f64),
    Metal,
}

/// Eigenvalue evaluator for a fixed geometry and material.
#[derive(Debug, Clone, Copy)]
pub struct ModeSolver<'a> {
    alpha: f64,
    model: DispersionModel,
    crossover: Crossover,
    table: &'a DebyePolynomialTable,
}

impl ModeSolver<'static> {
    /// Default crossover and the default polynomial table.
    pub fn with_defaults(alpha: f64, model: DispersionModel) -> Result<Self> {
        ModeSolver::new(alpha, model, Crossover::default(), default_table())
    }
}

impl<'a> ModeSolver<'a> {
    /// `model` rates must be in units of `c/a`.
    pub fn new(
        alpha: f64,
        model: DispersionModel,
        crossover: Crossover,
        table: &'a DebyePolynomialTable,
    ) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(domain(format!(
                "radius ratio a/b must lie in (0, 1), got {alpha}"
            )));
        }
        model.validate()?;
        Ok(Self {
            alpha,
            model,
            crossover,
            table,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn model(&self) -> &DispersionModel {
        &self.model
    }

    /// Term `(m, l)` at reduced temperature `t`, so `x = m t`.
    pub fn mode(&self, l: u32, m: u64, t: f64) -> Result<ModeEigenvalues> {
        let lam = if m == 0 {
            self.static_mode(l)?
        } else {
            self.frequency(m as f64 * t)?.mode(l)?
        };
        Ok(ModeEigenvalues {
            m,
            l,
            lambda_tm: lam.tm,
            lambda_te: lam.te,
        })
    }

    /// Material evaluated once at `x > 0`, shared by every `l`.
    pub fn frequency(&self, x: f64) -> Result<FrequencyBlock<'_, 'a>> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(domain(format!(
                "frequency argument must be positive, got {x}"
            )));
        }
        let medium = match self.model.refractive_index(x) {
            Some(n) => Medium::Index(n),
            None => Medium::Metal,
        };
        Ok(FrequencyBlock {
            solver: self,
            x,
            y: x / self.alpha,
            medium,
        })
    }

    /// Zero-frequency eigenvalues from the small-argument limit.
    pub fn static_mode(&self, l: u32) -> Result<Lambdas> {
        check_order(l)?;
        let geometric = self.alpha.powi(2 * l as i32 + 1);
        let lf = f64::from(l);
        Ok(match self.model {
            DispersionModel::ConstantIndex { n } => {
                let n2 = n * n;
                let num = lf * (lf + 1.0) * (n2 - 1.0) * (n2 - 1.0);
                let den = (n2 * lf + lf + 1.0) * (n2 * (lf + 1.0) + lf);
                Lambdas {
                    tm: geometric * num / den,
                    te: 0.0,
                }
            }
            DispersionModel::IdealMetal { option } => Lambdas {
                tm: geometric,
                te: match option {
                    MetalOption::A => geometric,
                    MetalOption::B => 0.0,
                },
            },
            DispersionModel::Drude { gamma_relax, .. } if gamma_relax > 0.0 => Lambdas {
                tm: geometric,
                te: 0.0,
            },
            // n·x → x_p as x → 0
            DispersionModel::Plasma { omega_p } | DispersionModel::Drude { omega_p, .. } => {
                let big_x = omega_p;
                let big_y = omega_p / self.alpha;
                let q_s = self.static_s_factor(l, big_x)?;
                let q_e = self.static_e_factor(l, big_y)?;
                Lambdas {
                    tm: geometric,
                    te: geometric * q_s * q_e,
                }
            }
        })
    }

    /// `X s_{l+1}(X) / [(2l+1) s_l(X) + X s_{l+1}(X)]`
    fn static_s_factor(&self, l: u32, big_x: f64) -> Result<f64> {
        let lo = self.riccati(l, big_x)?;
        let hi = self.riccati(l + 1, big_x)?;
        let w = big_x * hi.s / lo.s * (hi.log_s - lo.log_s).exp();
        Ok(w / (f64::from(2 * l + 1) + w))
    }

    /// `Y e_{l−1}(Y) / [(2l+1) e_l(Y) + Y e_{l−1}(Y)]`
    fn static_e_factor(&self, l: u32, big_y: f64) -> Result<f64> {
        let lo = self.riccati(l - 1, big_y)?;
        let hi = self.riccati(l, big_y)?;
        let w = big_y * lo.e / hi.e * (lo.log_e - hi.log_e).exp();
        Ok(w / (f64::from(2 * l + 1) + w))
    }

    #[inline]
    fn riccati(&self, l: u32, x: f64) -> Result<LogRiccati> {
        riccati(l, x, &self.crossover, self.table)
    }
}

/// One frequency `x > 0`, with `y = x/α` and the refractive index fixed.
#[derive(Debug, Clone, Copy)]
pub struct FrequencyBlock<'s, 'a> {
    solver: &'s ModeSolver<'a>,
    x: f64,
    y: f64,
    medium: Medium,
}

impl FrequencyBlock<'_, '_> {
    pub fn x(&self) -> f64 {
        self.x
    }

    /// `None` for an ideal metal.
    pub fn refractive_index(&self) -> Option<f64> {
        match self.medium {
            Medium::Index(n) => Some(n),
            Medium::Metal => None,
        }
    }

    pub fn mode(&self, l: u32) -> Result<Lambdas> {
        self.mode_via(l, Route::Auto)
    }

    pub fn mode_via(&self, l: u32, route: Route) -> Result<Lambdas> {
        check_order(l)?;
        let lam = match self.medium {
            Medium::Index(1.0) => return Ok(Lambdas { tm: 0.0, te: 0.0 }),
            Medium::Metal => self.metal(l, route)?,
            Medium::Index(n) => {
                let debye = match route {
                    Route::Auto => self.solver.crossover.use_debye(l, self.x),
                    Route::Direct => false,
                    Route::Debye => true,
                };
                if debye {
                    self.dielectric_debye(l, n)
                } else {
                    self.dielectric_generic(l, n, route)?
                }
            }
        };
        check_range(lam.tm, l, self.x, "TM")?;
        check_range(lam.te, l, self.x, "TE")?;
        Ok(Lambdas {
            tm: lam.tm.max(0.0),
            te: lam.te.max(0.0),
        })
    }

    fn fetch(&self, l: u32, x: f64, route: Route) -> Result<LogRiccati> {
        match route {
            Route::Direct => riccati_direct(l, x),
            _ => self.solver.riccati(l, x),
        }
    }

    /// Ratios from log-scaled Riccati values at `x, nx, y, ny`.
    fn dielectric_generic(&self, l: u32, n: f64, route: Route) -> Result<Lambdas> {
        let rx = self.fetch(l, self.x, route)?;
        let rnx = self.fetch(l, n * self.x, route)?;
        let ry = self.fetch(l, self.y, route)?;
        let rny = self.fetch(l, n * self.y, route)?;
        let scale = (rx.log_s - rx.log_e + ry.log_e - ry.log_s).exp();

        let f1 = n * rx.ds * rnx.s - rx.s * rnx.ds;
        let f3 = n * rx.de * rnx.s - rx.e * rnx.ds;
        let f2 = n * ry.de * rny.e - ry.e * rny.de;
        let f4 = n * rny.e * ry.ds - rny.de * ry.s;

        let g1 = rx.ds * rnx.s - n * rx.s * rnx.ds;
        let g3 = rx.de * rnx.s - n * rx.e * rnx.ds;
        let g2 = ry.de * rny.e - n * ry.e * rny.de;
        let g4 = rny.e * ry.ds - n * rny.de * ry.s;

        Ok(Lambdas {
            tm: scale * (f1 / f3) * (f2 / f4),
            te: scale * (g1 / g3) * (g2 / g4),
        })
    }

    /// Ratios in terms of the Debye factors `A, B, C, D` at the four
    /// arguments and the coefficients `γ, δ`.
    fn dielectric_debye(&self, l: u32, n: f64) -> Lambdas {
        let nu = f64::from(l) + 0.5;
        let table = self.solver.table;
        let fx = frame_unchecked(self.x, nu);
        let fy = frame_unchecked(self.y, nu);
        let fnx = frame_unchecked(n * self.x, nu);
        let fny = frame_unchecked(n * self.y, nu);
        let ax = eval_abcd(&fx, table);
        let ay = eval_abcd(&fy, table);
        let anx = eval_abcd(&fnx, table);
        let any = eval_abcd(&fny, table);
        let gamma = fnx.theta / fx.theta;
        let delta = fny.theta / fy.theta;
        let scale = (2.0 * nu * (fx.eta - fy.eta)).exp();
        let n2 = n * n;
        Lambdas {
            tm: scale * debye_pair(n2 * gamma, n2 * delta, &ax, &anx, &ay, &any),
            te: scale * debye_pair(gamma, delta, &ax, &anx, &ay, &any),
        }
    }

    /// Ideal-metal eigenvalues at `x > 0`:
    /// `λ_TE = [s(x)/e(x)][e(y)/s(y)]`, `λ_TM = [s'(x)/e'(x)][e'(y)/s'(y)]`.
    fn metal(&self, l: u32, route: Route) -> Result<Lambdas> {
        let (rx, ry) = match route {
            Route::Debye => {
                let table = self.solver.table;
                let nu = f64::from(l) + 0.5;
                (
                    crate::debye::riccati_from_frame(&frame_unchecked(self.x, nu), table),
                    crate::debye::riccati_from_frame(&frame_unchecked(self.y, nu), table),
                )
            }
            _ => (self.fetch(l, self.x, route)?, self.fetch(l, self.y, route)?),
        };
        let scale = (rx.log_s - rx.log_e + ry.log_e - ry.log_s).exp();
        Ok(Lambdas {
            tm: scale * (rx.ds / rx.de) * (ry.de / ry.ds),
            te: scale * (rx.s / rx.e) * (ry.e / ry.s),
        })
    }
}

/// `ratio1 · ratio2` where
/// `ratio1 = [g C(x) − A(x)C(nx)/A(nx)] / [g D(x) + B(x)C(nx)/A(nx)]` and
/// `ratio2 = [d D(y) − B(y)D(ny)/B(ny)] / [d C(y) + A(y)D(ny)/B(ny)]`.
/// The constant prefactors `−½` and `−2` cancel in the product.
#[inline]
fn debye_pair(
    g: f64,
    d: f64,
    x: &DebyeFactors,
    nx: &DebyeFactors,
    y: &DebyeFactors,
    ny: &DebyeFactors,
) -> f64 {
    let cx = nx.c / nx.a;
    let dy = ny.d / ny.b;
    let r1 = (g * x.c - x.a * cx) / (g * x.d + x.b * cx);
    let r2 = (d * y.d - y.b * dy) / (d * y.c + y.a * dy);
    r1 * r2
}

fn check_order(l: u32) -> Result<()> {
    if l == 0 {
        return Err(domain("multipole order starts at l = 1"));
    }
    Ok(())
}

fn check_range(lambda: f64, l: u32, x: f64, mode: &str) -> Result<()> {
    if lambda.is_finite() && (-NEGATIVE_SLACK..1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(Error::Consistency(format!(
            "{mode} eigenvalue {lambda} outside [0, 1) at l = {l}, x = {x}"
        )))
    }
}

/// `λ_TM` for term `(m, l)` at reduced temperature `t`.
pub fn lambda_tm(solver: &ModeSolver<'_>, l: u32, m: u64, t: f64) -> Result<f64> {
    Ok(solver.mode(l, m, t)?.lambda_tm)
}

/// `λ_TE` for term `(m, l)` at reduced temperature `t`.
pub fn lambda_te(solver: &ModeSolver<'_>, l: u32, m: u64, t: f64) -> Result<f64> {
    Ok(solver.mode(l, m, t)?.lambda_te)
}
