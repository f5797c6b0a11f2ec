//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines come out in order and
//! uncaptured. Exit status is non-zero on any unexpected outcome. Criteria
//! listed in `KNOWN_FAILURES` are still evaluated and printed as FAIL; they
//! only stop the run if they start passing, so a stale entry gets noticed.

use casimir_core::debye::{default_table, riccati_debye, Crossover};
use casimir_core::dispersion::{
    effective_conductivity, epsilon, r2_drude_slope, r2_perpendicular, DispersionModel,
    MetalOption, Permittivity,
};
use casimir_core::eigen::ModeSolver;
use casimir_core::specfun::riccati_direct;
use casimir_core::thermal::{
    free_energy, free_energy_ideal_metal, free_energy_m0, free_energy_zero_temperature,
    internal_energy, metal_static_sum, y_ratio, Config, Executor, SummationPolicy,
};
use casimir_core::units::{matsubara_omega, reduced_temperature};
use std::process::ExitCode;
use std::time::{Duration, Instant};

/// Refractive-index reading of the quoted ratio; see README.
const KNOWN_FAILURES: &[u32] = &[4];

/// Brute-force value of `Σ_l (2l+1) ln(1 − 0.5^{2l+1})`, 30-digit arithmetic.
const METAL_STATIC_SUM_HALF: f64 = -0.639_432_127_418_572_9;

type Check = fn() -> Result<Verdict, String>;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Result<Verdict, String> {
    Ok(Verdict { pass, detail })
}

fn constant(n: f64) -> DispersionModel {
    DispersionModel::ConstantIndex { n }
}

fn logspace(lo: f64, hi: f64, count: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..count).map(move |i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn err(e: casimir_core::Error) -> String {
    e.to_string()
}

fn wronskian_suite() -> Result<Verdict, String> {
    let table = default_table();
    let crossover = Crossover::default();
    let (mut direct, mut debye, mut debye_points) = (0.0f64, 0.0f64, 0);
    for l in 1..=50u32 {
        for x in logspace(1e-2, 1e2, 100) {
            let w = riccati_direct(l, x).map_err(err)?.wronskian();
            direct = direct.max((w + 1.0).abs());
            if crossover.use_debye(l, x) {
                let w = riccati_debye(l, x, table).map_err(err)?.wronskian();
                debye = debye.max((w + 1.0).abs());
                debye_points += 1;
            }
        }
    }
    verdict(
        direct < 1e-10 && debye < 1e-10,
        format!(
            "max |W+1| direct {direct:.1e}, Debye {debye:.1e} over {debye_points} Debye points"
        ),
    )
}

fn debye_accuracy() -> Result<Verdict, String> {
    let table = default_table();
    let crossover = Crossover::default();
    let cmp = |a: f64, la: f64, b: f64, lb: f64| ((a / b).ln() + la - lb).exp_m1().abs();
    let (mut worst, mut at, mut points) = (0.0f64, (0, 0.0), 0);
    for l in 1..=60u32 {
        for x in logspace(1e-2, 1e3, 60) {
            if !crossover.use_debye(l, x) {
                continue;
            }
            let d = riccati_debye(l, x, table).map_err(err)?;
            let r = riccati_direct(l, x).map_err(err)?;
            let diff = cmp(d.s, d.log_s, r.s, r.log_s)
                .max(cmp(d.ds, d.log_s, r.ds, r.log_s))
                .max(cmp(d.e, d.log_e, r.e, r.log_e))
                .max(cmp(d.de, d.log_e, r.de, r.log_e));
            points += 1;
            if diff > worst {
                worst = diff;
                at = (l, x);
            }
        }
    }
    verdict(
        worst <= 1e-8,
        format!(
            "worst {worst:.2e} at l={}, x={:.3} over {points} points",
            at.0, at.1
        ),
    )
}

fn static_eigenvalue_oracle() -> Result<Verdict, String> {
    let alpha = 0.8;
    let mut worst = 0.0f64;
    for n in [1.1, 2.0, 10.0] {
        let solver = ModeSolver::with_defaults(alpha, constant(n)).map_err(err)?;
        let block = solver.frequency(1e-6).map_err(err)?;
        for l in 1..=20 {
            let exact = solver.static_mode(l).map_err(err)?.tm;
            let numeric = block.mode(l).map_err(err)?.tm;
            worst = worst.max(rel(numeric, exact));
        }
    }
    let metal_like = ModeSolver::with_defaults(alpha, constant(1e6)).map_err(err)?;
    let mut metal_worst = 0.0f64;
    for l in 1..=20 {
        let tm = metal_like.static_mode(l).map_err(err)?.tm;
        metal_worst = metal_worst.max(rel(tm, alpha.powi(2 * l as i32 + 1)));
    }
    verdict(
        worst < 1e-6 && metal_worst < 1e-3,
        format!("closed form vs x=1e-6: {worst:.1e}; n=1e6 vs (a/b)^(2l+1): {metal_worst:.1e}"),
    )
}

fn dilute_to_metal_ratio() -> Result<Verdict, String> {
    let p = SummationPolicy::default();
    let c = Config::from_gap(0.2, 1.0, constant(1.1)).map_err(err)?;
    let diel = free_energy(&c, &p).map_err(err)?;
    let metal = free_energy_ideal_metal(&c, &p, MetalOption::A).map_err(err)?;
    let ratio = diel.beta_f / metal.beta_f;
    verdict(
        (0.0005..=0.002).contains(&ratio) && diel.converged && metal.converged,
        format!("|F(n=1.1)|/|F(metal)| = {ratio:.5} (target [0.0005, 0.002])"),
    )
}

fn index_two_ratio() -> Result<Verdict, String> {
    let p = SummationPolicy::default();
    let f = |n: f64| free_energy(&Config::from_gap(0.01, 1.0, constant(n))?, &p);
    let lo = f(1.1).map_err(err)?;
    let hi = f(2.0).map_err(err)?;
    let ratio = hi.beta_f / lo.beta_f;
    verdict(
        (40.0..=60.0).contains(&ratio) && lo.converged && hi.converged,
        format!("|F(n=2)|/|F(n=1.1)| = {ratio:.3} (target [40, 60])"),
    )
}

fn hard_case() -> Result<Verdict, String> {
    let c = Config::from_gap(0.05, 0.01, constant(1.1)).map_err(err)?;
    let run = |executor| {
        free_energy(
            &c,
            &SummationPolicy {
                executor,
                ..Default::default()
            },
        )
    };
    let one = run(Executor::Parallel { threads: 1 }).map_err(err)?;
    let four = run(Executor::Parallel { threads: 4 }).map_err(err)?;
    let seq = run(Executor::Sequential).map_err(err)?;
    let identical = one.beta_f.to_bits() == four.beta_f.to_bits()
        && one.beta_f.to_bits() == seq.beta_f.to_bits();
    let terms = one.terms_used;
    verdict(
        one.converged && (300_000..=5_000_000).contains(&terms) && identical,
        format!(
            "{terms} terms, beta_F = {:.10e}, 1/4/sequential workers identical: {identical}",
            one.beta_f
        ),
    )
}

fn metal_options() -> Result<Verdict, String> {
    let p = SummationPolicy {
        rel_tol: 1e-13,
        ..Default::default()
    };
    let mut worst = 0.0f64;
    for alpha in [0.3, 0.5, 0.9] {
        let c = Config::new(alpha, 1.0, constant(2.0)).map_err(err)?;
        let a = free_energy_ideal_metal(&c, &p, MetalOption::A).map_err(err)?;
        let b = free_energy_ideal_metal(&c, &p, MetalOption::B).map_err(err)?;
        let expected = 0.5 * metal_static_sum(alpha).map_err(err)?;
        worst = worst.max(rel(a.beta_f - b.beta_f, expected));
    }
    let direct = metal_static_sum(0.5).map_err(err)?;
    let c = Config::new(
        0.5,
        1.0,
        DispersionModel::IdealMetal {
            option: MetalOption::A,
        },
    )
    .map_err(err)?;
    let via_modes = free_energy_m0(&c, &SummationPolicy::default())
        .map_err(err)?
        .beta_f;
    let oracle = rel(direct, METAL_STATIC_SUM_HALF).max(rel(via_modes, METAL_STATIC_SUM_HALF));
    verdict(
        worst < 1e-10 && oracle < 1e-6,
        format!(
            "A-B vs half static sum: {worst:.1e} (rel_tol 1e-13); static sum at 0.5 = {direct:.12} vs oracle: {oracle:.1e}"
        ),
    )
}

fn y_ratio_behaviour() -> Result<Verdict, String> {
    let p = SummationPolicy::default();
    let grid: Vec<f64> = (-4..=6).map(|k| 10f64.powf(f64::from(k) / 2.0)).collect();
    let mut monotone = true;
    let mut max_diff = 0.0f64;
    let mut high = f64::INFINITY;
    let mut notes = Vec::new();
    for d in [0.01, 0.1, 0.5] {
        let mut last = -1.0;
        for &t in &grid {
            let y1 =
                y_ratio(&Config::from_gap(d, t, constant(1.1)).map_err(err)?, &p).map_err(err)?;
            let y2 =
                y_ratio(&Config::from_gap(d, t, constant(2.0)).map_err(err)?, &p).map_err(err)?;
            if !(y1.converged && y2.converged) {
                return Err(format!("unconverged at d/a={d}, t={t}"));
            }
            monotone &= y1.y >= last;
            last = y1.y;
            max_diff = max_diff.max((y2.y - y1.y).abs());
        }
        high = high.min(last);
        notes.push(format!("d/a={d}: Y(1e-2)..Y(1e3) ends at {last:.6}"));
    }
    let mut low = 0.0f64;
    for d in [0.1, 0.5] {
        let y =
            y_ratio(&Config::from_gap(d, 1e-3, constant(1.1)).map_err(err)?, &p).map_err(err)?;
        low = low.max(y.y);
    }
    verdict(
        monotone && low < 0.05 && high > 0.95 && max_diff <= 0.02,
        format!(
            "monotone {monotone}; max Y(t=1e-3, d/a 0.1/0.5) {low:.2e}; min Y(t=1e3) {high:.6}; max |Y(2)-Y(1.1)| {max_diff:.4}; {}",
            notes.join("; ")
        ),
    )
}

fn zero_temperature() -> Result<Verdict, String> {
    let p = SummationPolicy::default();
    let mut worst = 0.0f64;
    for d in [0.05, 0.1, 0.2] {
        let c = Config::from_gap(d, 0.5, constant(1.1)).map_err(err)?;
        let z = free_energy_zero_temperature(c.alpha, &c.model, &p, 1e-6).map_err(err)?;
        let summed = free_energy(&c, &p).map_err(err)?;
        worst = worst.max(rel(summed.beta_f * c.t, z.beta_f_t));
    }
    verdict(
        worst <= 0.02,
        format!("max |βFt(t=0.5)/quadrature − 1| = {worst:.2e}"),
    )
}

fn aluminium_numbers() -> Result<Verdict, String> {
    let al = DispersionModel::Drude {
        omega_p: 1.9e16,
        gamma_relax: 9.6e13,
    };
    let w1 = matsubara_omega(300.0, 1).map_err(err)?;
    let s0 = effective_conductivity(&al, 0.0).map_err(err)?;
    let s1 = effective_conductivity(&al, w1).map_err(err)?;
    let p0 = match epsilon(&al, 0.0).map_err(err)? {
        Permittivity::ConductorLimit { sigma_over_eps0 } => sigma_over_eps0,
        other => return Err(format!("unexpected zero-frequency tag {other:?}")),
    };
    let p1 = match epsilon(&al, w1).map_err(err)? {
        Permittivity::Finite(e) => (e - 1.0) * w1,
        other => return Err(format!("unexpected tag {other:?}")),
    };
    let t = reduced_temperature(300.0, 1e-3).map_err(err)?;
    let pass = rel(w1, 2.48e14) <= 0.01
        && rel(s0, 3.33e7) <= 0.01
        && rel(s1, 0.93e7) <= 0.02
        && rel(p0, 3.76e18) <= 0.02
        && rel(p1, 1.05e18) <= 0.02
        && rel(t, 830.0) <= 0.01;
    verdict(
        pass,
        format!(
            "ω1 {w1:.4e}, σ(0) {s0:.4e}, σ(iω1) {s1:.4e}, n²ω prefactors {p0:.4e} / {p1:.4e}, t {t:.1}"
        ),
    )
}

fn r2_limit() -> Result<Verdict, String> {
    let (omega_p, gamma) = (1.9e16, 9.6e13);
    let drude = DispersionModel::Drude {
        omega_p,
        gamma_relax: gamma,
    };
    let plasma = DispersionModel::Plasma { omega_p };
    let ratios = [1e-13, 2e-13, 5e-13, 1e-12, 2e-12, 5e-12, 1e-11];
    let mut worst = 0.0f64;
    let mut plasma_min = f64::INFINITY;
    let mut notes = Vec::new();
    for k in [1e4, 1e5] {
        // least-squares slope through the origin
        let (mut num, mut den) = (0.0, 0.0);
        for &q in &ratios {
            let r = r2_perpendicular(&drude, q * gamma, k).map_err(err)?.abs();
            num += q * r;
            den += q * q;
        }
        let slope = num / den;
        let expected = r2_drude_slope(omega_p, k);
        worst = worst.max(rel(slope, expected));
        let last = ratios
            .iter()
            .map(|&q| r2_perpendicular(&plasma, q * gamma, k).map(f64::abs))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let at_min = last[0];
        plasma_min = plasma_min.min(at_min);
        notes.push(format!(
            "k={k:e}: slope {slope:.5e} vs {expected:.5e}, plasma |r2| {at_min:.6}"
        ));
    }
    verdict(worst <= 0.01 && plasma_min > 0.99, notes.join("; "))
}

fn internal_energy_checks() -> Result<Verdict, String> {
    let p = SummationPolicy::default();
    let configs = [
        (0.5, 1.0, 2.0),
        (0.2, 0.5, 1.5),
        (0.1, 2.0, 1.1),
        (1.0, 5.0, 3.0),
        (0.3, 0.2, 2.0),
    ];
    let mut consistent = true;
    for (d, t, n) in configs {
        let e =
            internal_energy(&Config::from_gap(d, t, constant(n)).map_err(err)?, &p).map_err(err)?;
        consistent &= e.consistent && e.converged;
    }
    let vacuum = internal_energy(&Config::from_gap(0.1, 1.0, constant(1.0)).map_err(err)?, &p)
        .map_err(err)?
        .a_e;
    let mut last = f64::INFINITY;
    let mut decreasing = true;
    let mut values = Vec::new();
    for alpha in [0.5, 0.3, 0.1, 0.05] {
        let e = internal_energy(&Config::new(alpha, 1.0, constant(2.0)).map_err(err)?, &p)
            .map_err(err)?;
        decreasing &= e.a_e.abs() < last;
        last = e.a_e.abs();
        values.push(format!("{:.2e}", e.a_e));
    }
    verdict(
        consistent && vacuum == 0.0 && decreasing,
        format!(
            "Richardson consistent at 5 configs: {consistent}; n=1: {vacuum}; aE over alpha 0.5..0.05: {}",
            values.join(", ")
        ),
    )
}

fn main() -> ExitCode {
    let checks: [(u32, &str, Check, Option<u64>); 12] = [
        (1, "Wronskian suite", wronskian_suite, Some(10)),
        (2, "Debye accuracy", debye_accuracy, Some(30)),
        (3, "m = 0 eigenvalue oracle", static_eigenvalue_oracle, None),
        (
            4,
            "dilute vs ideal-metal ratio",
            dilute_to_metal_ratio,
            Some(60),
        ),
        (5, "n = 2 vs n = 1.1 ratio", index_two_ratio, Some(300)),
        (6, "hard-case convergence", hard_case, Some(900)),
        (7, "metal options", metal_options, None),
        (8, "Y ratio behaviour", y_ratio_behaviour, None),
        (9, "zero-temperature consistency", zero_temperature, None),
        (10, "aluminium Drude numbers", aluminium_numbers, None),
        (11, "r2 low-frequency limit", r2_limit, None),
        (12, "internal energy", internal_energy_checks, None),
    ];
    let mut unexpected = 0;
    let mut passed = 0;
    for (id, name, check, budget) in checks {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let over = budget.is_some_and(|s| elapsed > Duration::from_secs(s));
        let (pass, detail) = match outcome {
            Ok(v) => (v.pass && !over, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let known = KNOWN_FAILURES.contains(&id);
        let tag = match (pass, known) {
            (true, false) => "PASS",
            (true, true) => "PASS (listed as known failure)",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        let budget_note = match budget {
            Some(s) if over => format!(", over {s} s budget"),
            _ => String::new(),
        };
        println!(
            "{tag} #{id} {name}: {detail} [{:.2?}{budget_note}]",
            elapsed
        );
        passed += usize::from(pass);
        if pass == known {
            unexpected += 1;
        }
    }
    println!("acceptance: {passed}/12 passed, {unexpected} unexpected");
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
