//! The free energy as a double sum over Matsubara index `m` and multipole
//! order `l`:
//!
//! ```text
//! βF = Σ'_m Σ_l (2l+1) [ln(1 − λ_TM) + ln(1 − λ_TE)],   x = m t,  y = x/α
//! ```
//!
//! where the prime gives `m = 0` half weight.
//!
//! Truncation. At fixed `m` the `l`-sum stops after three consecutive terms
//! that are each no larger than the one before and below
//! `rel_tol · (|S_ref| + |block so far|)`. `S_ref` is the total of the blocks
//! finished before the current batch. The `m`-sum stops at the first
//! `m ≥ 1` whose whole block is below `rel_tol · |total|`.
//!
//! Blocks are evaluated in batches of fixed, growing size. The batch
//! schedule does not depend on the worker count, and the reduction runs in
//! index order, so results are bit-identical for any number of workers.

mod exec;
mod sum;
mod zero;

pub use exec::Executor;
pub use sum::{pairwise, reduce, Neumaier, SummationScheme};
pub use zero::{free_energy_zero_temperature, ZeroTemperature, ZERO_T_REL_TOL};

use crate::debye::{
    default_table, generate_polynomials, Crossover, DebyePolynomialTable, DEFAULT_K_MAX,
};
use crate::dispersion::{DispersionModel, MetalOption};
use crate::eigen::{Lambdas, ModeSolver};
use crate::error::{domain, Error, Result};
use exec::Runner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const FIRST_BATCH: u64 = 4;
const MAX_BATCH: u64 = 64;
const QUIET_TERMS: u32 = 3;

/// Geometry, temperature and material. Model rates are in units of `c/a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Config {
    /// `a/b`
    pub alpha: f64,
    /// `2πa/β`
    pub t: f64,
    pub model: DispersionModel,
}

impl Config {
    pub fn new(alpha: f64, t: f64, model: DispersionModel) -> Result<Self> {
        let c = Self { alpha, t, model };
        c.validate()?;
        Ok(c)
    }

    /// From the relative gap `d/a = b/a − 1`.
    pub fn from_gap(d_over_a: f64, t: f64, model: DispersionModel) -> Result<Self> {
        if !(d_over_a > 0.0) || !d_over_a.is_finite() {
            return Err(domain(format!("d/a must be positive, got {d_over_a}")));
        }
        Self::new(1.0 / (1.0 + d_over_a), t, model)
    }

    pub fn d_over_a(&self) -> f64 {
        1.0 / self.alpha - 1.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(domain(format!(
                "a/b must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(domain(format!(
                "reduced temperature must be positive, got {}",
                self.t
            )));
        }
        self.model.validate()
    }

    fn with_t(&self, t: f64) -> Self {
        Self { t, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummationPolicy {
    pub rel_tol: f64,
    pub l_cap: u32,
    pub m_cap: u64,
    pub crossover: Crossover,
    /// Order of the Debye polynomial table.
    pub k_max: usize,
    pub scheme: SummationScheme,
    pub executor: Executor,
}

impl Default for SummationPolicy {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            l_cap: 1_000_000,
            m_cap: 100_000_000,
            crossover: Crossover::default(),
            k_max: DEFAULT_K_MAX,
            scheme: SummationScheme::default(),
            executor: Executor::default(),
        }
    }
}

impl SummationPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1e-3) {
            return Err(domain(format!(
                "rel_tol must lie in (0, 1e-3), got {}",
                self.rel_tol
            )));
        }
        if self.l_cap == 0 || self.m_cap == 0 {
            return Err(domain("summation caps must be at least 1"));
        }
        if !(self.crossover.x_threshold >= 0.0) {
            return Err(domain("crossover x threshold must be >= 0"));
        }
        Ok(())
    }

    fn with_table<R>(&self, f: impl FnOnce(&DebyePolynomialTable) -> Result<R>) -> Result<R> {
        if self.k_max == DEFAULT_K_MAX {
            f(default_table())
        } else {
            f(&generate_polynomials(self.k_max)?)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergyResult {
    pub beta_f: f64,
    pub beta_f_tm: f64,
    pub beta_f_te: f64,
    /// Half-weighted `m = 0` contribution, both modes.
    pub beta_f_m0: f64,
    pub terms_used: u64,
    pub converged: bool,
    pub max_l_reached: u32,
    pub max_m_reached: u64,
}

/// One finished `l`-sum.
#[derive(Debug, Clone, Copy, Default)]
struct Block {
    tm: f64,
    te: f64,
    terms: u64,
    max_l: u32,
    capped: bool,
}

impl Block {
    fn total(&self) -> f64 {
        self.tm + self.te
    }
}

/// `Σ_l (2l+1) ln(1 − λ)` per mode, truncated as described in the module docs.
fn l_sum(
    eval: impl Fn(u32) -> Result<Lambdas>,
    reference: f64,
    policy: &SummationPolicy,
) -> Result<Block> {
    let mut tm_acc = Neumaier::default();
    let mut te_acc = Neumaier::default();
    let pairwise = policy.scheme == SummationScheme::Pairwise;
    let (mut tm_terms, mut te_terms) = (Vec::new(), Vec::new());
    let mut running = 0.0;
    let mut previous = f64::INFINITY;
    let mut quiet = 0;
    let mut block = Block::default();
    for l in 1..=policy.l_cap {
        let lam = eval(l)?;
        let w = f64::from(2 * l + 1);
        let tm = w * (-lam.tm).ln_1p();
        let te = w * (-lam.te).ln_1p();
        if pairwise {
            tm_terms.push(tm);
            te_terms.push(te);
        } else {
            tm_acc.add(tm);
            te_acc.add(te);
        }
        let term = tm + te;
        running += term;
        block.terms += 1;
        block.max_l = l;
        let mag = term.abs();
        if mag <= previous && mag <= policy.rel_tol * (reference.abs() + running.abs()) {
            quiet += 1;
            if quiet == QUIET_TERMS {
                break;
            }
        } else {
            quiet = 0;
        }
        previous = mag;
    }
    block.capped = quiet < QUIET_TERMS;
    if pairwise {
        block.tm = sum::pairwise(&tm_terms);
        block.te = sum::pairwise(&te_terms);
    } else {
        block.tm = tm_acc.value();
        block.te = te_acc.value();
    }
    Ok(block)
}

/// Reduction of block totals in `m` order.
struct Totals {
    scheme: SummationScheme,
    tm: Neumaier,
    te: Neumaier,
    tm_blocks: Vec<f64>,
    te_blocks: Vec<f64>,
    running: f64,
}

impl Totals {
    fn new(scheme: SummationScheme) -> Self {
        Self {
            scheme,
            tm: Neumaier::default(),
            te: Neumaier::default(),
            tm_blocks: Vec::new(),
            te_blocks: Vec::new(),
            running: 0.0,
        }
    }

    fn add(&mut self, tm: f64, te: f64) {
        match self.scheme {
            SummationScheme::Compensated => {
                self.tm.add(tm);
                self.te.add(te);
            }
            SummationScheme::Pairwise => {
                self.tm_blocks.push(tm);
                self.te_blocks.push(te);
            }
        }
        self.running += tm + te;
    }

    fn finish(&self) -> (f64, f64) {
        match self.scheme {
            SummationScheme::Compensated => (self.tm.value(), self.te.value()),
            SummationScheme::Pairwise => (pairwise(&self.tm_blocks), pairwise(&self.te_blocks)),
        }
    }
}

fn static_block(solver: &ModeSolver<'_>, policy: &SummationPolicy) -> Result<Block> {
    l_sum(|l| solver.static_mode(l), 0.0, policy)
}

/// `βF` with the `m = 0` term at half weight.
pub fn free_energy(config: &Config, policy: &SummationPolicy) -> Result<FreeEnergyResult> {
    config.validate()?;
    policy.validate()?;
    policy.with_table(|table| {
        let solver = ModeSolver::new(config.alpha, config.model, policy.crossover, table)?;
        sum_blocks(&solver, config.t, policy)
    })
}

fn sum_blocks(
    solver: &ModeSolver<'_>,
    t: f64,
    policy: &SummationPolicy,
) -> Result<FreeEnergyResult> {
    let runner = Runner::new(policy.executor)?;
    let mut totals = Totals::new(policy.scheme);
    let zero = static_block(solver, policy)?;
    totals.add(0.5 * zero.tm, 0.5 * zero.te);
    let mut terms = zero.terms;
    let mut max_l = zero.max_l;
    let mut capped = zero.capped;
    let mut max_m = 0;
    let mut stopped = false;

    let mut m = 1;
    let mut batch = FIRST_BATCH;
    'outer: while m <= policy.m_cap {
        let end = (m + batch).min(policy.m_cap + 1);
        let reference = totals.running;
        let blocks = runner.map(m..end, |mm| {
            let freq = solver.frequency(mm as f64 * t)?;
            l_sum(|l| freq.mode(l), reference, policy)
        });
        for (mm, block) in (m..end).zip(blocks) {
            let block = block?;
            totals.add(block.tm, block.te);
            terms += block.terms;
            max_l = max_l.max(block.max_l);
            capped |= block.capped;
            max_m = mm;
            if block.total().abs() <= policy.rel_tol * totals.running.abs() {
                stopped = true;
                break 'outer;
            }
        }
        m = end;
        batch = (batch * 2).min(MAX_BATCH);
    }
    let (tm, te) = totals.finish();
    Ok(FreeEnergyResult {
        beta_f: tm + te,
        beta_f_tm: tm,
        beta_f_te: te,
        beta_f_m0: 0.5 * zero.total(),
        terms_used: terms,
        converged: stopped && !capped,
        max_l_reached: max_l,
        max_m_reached: max_m,
    })
}

/// The `m = 0` term alone, half-weighted. Only the `l`-sum is involved, so
/// `beta_f == beta_f_m0` and `max_m_reached == 0`.
pub fn free_energy_m0(config: &Config, policy: &SummationPolicy) -> Result<FreeEnergyResult> {
    config.validate()?;
    policy.validate()?;
    policy.with_table(|table| {
        let solver = ModeSolver::new(config.alpha, config.model, policy.crossover, table)?;
        let b = static_block(&solver, policy)?;
        Ok(FreeEnergyResult {
            beta_f: 0.5 * b.total(),
            beta_f_tm: 0.5 * b.tm,
            beta_f_te: 0.5 * b.te,
            beta_f_m0: 0.5 * b.total(),
            terms_used: b.terms,
            converged: !b.capped,
            max_l_reached: b.max_l,
            max_m_reached: 0,
        })
    })
}

/// `βF` for ideal-metal walls under the given zero-frequency option.
pub fn free_energy_ideal_metal(
    config: &Config,
    policy: &SummationPolicy,
    option: MetalOption,
) -> Result<FreeEnergyResult> {
    let metal = Config {
        model: DispersionModel::IdealMetal { option },
        ..*config
    };
    free_energy(&metal, policy)
}

/// `Σ_l (2l+1) ln(1 − α^{2l+1})`: the conventional metal `m = 0` term with
/// both modes counted and the half weight applied. Each mode alone gives half
/// of it.
pub fn metal_static_sum(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(domain(format!("a/b must lie in (0, 1), got {alpha}")));
    }
    let mut acc = Neumaier::default();
    let mut power = alpha;
    for l in 1u32.. {
        power *= alpha * alpha;
        let term = f64::from(2 * l + 1) * (-power).ln_1p();
        acc.add(term);
        if term.abs() < 1e-18 * acc.value().abs() {
            break;
        }
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YRatio {
    pub y: f64,
    pub beta_f: f64,
    pub beta_f_m0: f64,
    pub converged: bool,
}

/// `Y = F(m = 0) / F`.
pub fn y_ratio(config: &Config, policy: &SummationPolicy) -> Result<YRatio> {
    let r = free_energy(config, policy)?;
    if r.beta_f == 0.0 {
        return Err(Error::UndefinedRatio(
            "free energy vanishes, Y undefined".into(),
        ));
    }
    Ok(YRatio {
        y: r.beta_f_m0 / r.beta_f,
        beta_f: r.beta_f,
        beta_f_m0: r.beta_f_m0,
        converged: r.converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InternalEnergy {
    /// Richardson-extrapolated `a·E`.
    pub a_e: f64,
    /// Central differences at steps `h` and `h/2`.
    pub coarse: f64,
    pub fine: f64,
    /// The two step sizes agree within 1%.
    pub consistent: bool,
    pub converged: bool,
}

/// Relative step of the `t`-derivative.
pub const ENERGY_STEP: f64 = 1e-3;

/// `a·E = −(t²/2π) ∂(βF)/∂t`, from `E = ∂(βF)/∂β` with `β = 2πa/t`.
pub fn internal_energy(config: &Config, policy: &SummationPolicy) -> Result<InternalEnergy> {
    config.validate()?;
    let t = config.t;
    let h = ENERGY_STEP * t;
    let mut converged = true;
    let mut eval = |tt: f64| -> Result<f64> {
        let r = free_energy(&config.with_t(tt), policy)?;
        converged &= r.converged;
        Ok(r.beta_f)
    };
    let pref = -t * t / (2.0 * PI);
    let coarse = pref * (eval(t + h)? - eval(t - h)?) / (2.0 * h);
    let fine = pref * (eval(t + 0.5 * h)? - eval(t - 0.5 * h)?) / h;
    let consistent = (coarse - fine).abs() <= 0.01 * fine.abs();
    Ok(InternalEnergy {
        a_e: (4.0 * fine - coarse) / 3.0,
        coarse,
        fine,
        consistent,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn constant(n: f64) -> DispersionModel {
        DispersionModel::ConstantIndex { n }
    }

    #[test]
    fn vacuum_has_no_free_energy() {
        let c = Config::from_gap(0.1, 1.0, constant(1.0)).unwrap();
        let r = free_energy(&c, &SummationPolicy::default()).unwrap();
        assert_eq!(r.beta_f, 0.0);
        assert!(r.converged);
        assert!(matches!(
            y_ratio(&c, &SummationPolicy::default()),
            Err(Error::UndefinedRatio(_))
        ));
        assert_eq!(
            internal_energy(&c, &SummationPolicy::default())
                .unwrap()
                .a_e,
            0.0
        );
    }

    #[test]
    fn metal_static_sum_oracle() {
        // reference values from 30-digit summation
        assert_relative_eq!(
            metal_static_sum(0.5).unwrap(),
            -0.639_432_127_418_572_9,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            metal_static_sum(0.3).unwrap(),
            -0.096_008_391_215_374_6,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            metal_static_sum(0.9).unwrap(),
            -52.077_487_676_750_31,
            max_relative = 1e-12
        );
    }

    #[test]
    fn mode_split_and_signs() {
        let c = Config::from_gap(0.5, 2.0, constant(2.0)).unwrap();
        let r = free_energy(&c, &SummationPolicy::default()).unwrap();
        assert!(r.converged);
        assert!(r.beta_f < 0.0 && r.beta_f_tm < 0.0 && r.beta_f_te < 0.0);
        assert_eq!(r.beta_f, r.beta_f_tm + r.beta_f_te);
        assert!(r.beta_f_m0 >= r.beta_f);
        let m0 = free_energy_m0(&c, &SummationPolicy::default()).unwrap();
        assert_eq!(m0.beta_f_te, 0.0);
        assert_eq!(m0.beta_f, r.beta_f_m0);
    }

    #[test]
    fn schemes_and_executors_agree() {
        let c = Config::from_gap(0.2, 0.3, constant(1.5)).unwrap();
        let base = SummationPolicy {
            executor: Executor::Sequential,
            ..Default::default()
        };
        let seq = free_energy(&c, &base).unwrap();
        for threads in [1, 3] {
            let p = SummationPolicy {
                executor: Executor::Parallel { threads },
                ..base
            };
            assert_eq!(free_energy(&c, &p).unwrap(), seq);
        }
        let pw = SummationPolicy {
            scheme: SummationScheme::Pairwise,
            ..base
        };
        assert_relative_eq!(
            free_energy(&c, &pw).unwrap().beta_f,
            seq.beta_f,
            max_relative = 1e-13
        );
    }

    #[test]
    fn caps_report_unconverged() {
        let c = Config::from_gap(0.1, 0.5, constant(1.5)).unwrap();
        let p = SummationPolicy {
            l_cap: 5,
            ..Default::default()
        };
        assert!(!free_energy(&c, &p).unwrap().converged);
        let p = SummationPolicy {
            m_cap: 2,
            ..Default::default()
        };
        let r = free_energy(&c, &p).unwrap();
        assert!(!r.converged && r.max_m_reached == 2);
    }

    #[test]
    fn metal_options_differ_by_static_te() {
        let c = Config::from_gap(1.0, 0.7, constant(2.0)).unwrap();
        // both truncations must sit well below the asserted tolerance
        let p = SummationPolicy {
            rel_tol: 1e-13,
            ..Default::default()
        };
        let a = free_energy_ideal_metal(&c, &p, MetalOption::A).unwrap();
        let b = free_energy_ideal_metal(&c, &p, MetalOption::B).unwrap();
        let half = 0.5 * metal_static_sum(c.alpha).unwrap();
        assert_relative_eq!(a.beta_f - b.beta_f, half, max_relative = 1e-10);
        assert_relative_eq!(a.beta_f_m0, 2.0 * half, max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_config_and_policy() {
        assert!(Config::new(1.0, 1.0, constant(2.0)).is_err());
        assert!(Config::new(0.5, 0.0, constant(2.0)).is_err());
        assert!(Config::from_gap(-0.1, 1.0, constant(2.0)).is_err());
        let c = Config::from_gap(0.1, 1.0, constant(2.0)).unwrap();
        let bad = SummationPolicy {
            rel_tol: 0.1,
            ..Default::default()
        };
        assert!(free_energy(&c, &bad).is_err());
        assert_relative_eq!(c.d_over_a(), 0.1, max_relative = 1e-14);
    }
}
