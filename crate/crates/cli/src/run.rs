//! Subcommand drivers.

use crate::args::{
    Cli, Command, Format, MetalArgs, ModelKind, OutputArgs, PlanarArgs, PointArgs, Report,
    SweepArgs, ZeroArgs,
};
use crate::cache::{cached_evaluate, Lookup};
use crate::error::{usage, CliError};
use crate::output::{emit, render, Meta, SweepRow};
use crate::point::PointRequest;
use crate::resolve::{single, Gap, PolicyEcho};
use casimir_core::dispersion::{r2_drude_slope, r2_perpendicular, DispersionModel, MetalOption};
use casimir_core::thermal::{
    free_energy_ideal_metal, free_energy_zero_temperature, metal_static_sum, Config, Executor,
    SummationPolicy,
};
use casimir_core::units::temperature_from_reduced;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

/// Whether every evaluated point converged; drives the exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub converged: bool,
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Point(a) => point(&a),
        Command::SweepWidth(a) => sweep(&a, Axis::Width, "sweep-width"),
        Command::SweepTemperature(a) => sweep(&a, Axis::Temperature, "sweep-temperature"),
        Command::YRatio(a) => sweep(&a, Axis::Temperature, "y-ratio"),
        Command::MetalLimit(a) => metal_limit(&a),
        Command::PlanarR2(a) => planar_r2(&a),
        Command::ZeroT(a) => zero_t(&a),
    }
}

fn header(command: &str) -> Meta {
    vec![
        ("casimir".into(), env!("CARGO_PKG_VERSION").into()),
        ("command".into(), command.into()),
    ]
}

fn policy_line(p: &SummationPolicy) -> String {
    serde_json::to_string(&PolicyEcho::from(p)).expect("plain data serialises")
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

fn point(a: &PointArgs) -> Result<Outcome, CliError> {
    let mut reports = a.report.clone();
    if a.m0_only {
        reports.push(Report::M0);
    }
    if reports.is_empty() {
        reports.push(Report::FreeEnergy);
    }
    reports.sort();
    reports.dedup();
    let only_conductivity = reports == [Report::Conductivity];

    let si = if reports.contains(&Report::Conductivity) {
        let kelvin = match (a.state.temperature.as_slice(), a.model.radius) {
            ([k], _) => *k,
            ([], Some(r)) => temperature_from_reduced(single(&a.state.t, "--t or --T")?, r)?,
            _ => {
                return Err(usage(
                    "conductivity report needs one --T, or --t with --radius",
                ))
            }
        };
        Some((a.model.raw_model()?, kelvin))
    } else {
        None
    };
    let config = if only_conductivity {
        None
    } else {
        let model = a.model.reduced_model()?;
        let t = single(&a.state.temperatures(a.model.radius)?, "--t or --T")?;
        let gap = single(&a.state.require_gaps()?, "--d-over-a or --a-over-b")?;
        Some((gap.config(t, model)?, gap.d_over_a()))
    };
    let policy = a.policy.policy(Executor::Parallel {
        threads: a.policy.jobs(),
    })?;
    let req = PointRequest {
        config,
        si,
        reports,
    };
    let (rec, lookup) = cached_evaluate(
        a.output.cache_dir.as_deref(),
        &req,
        &policy,
        &a.output.code_version,
    )?;
    if lookup == Lookup::Hit {
        eprintln!("cache hit");
    }
    let bytes = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut b = serde_json::to_vec_pretty(&rec)?;
            b.push(b'\n');
            b
        }
        Format::Csv => {
            let (Some((c, d)), Some(r)) = (req.config.as_ref(), rec.free_energy.as_ref()) else {
                return Err(usage("--format csv needs the free-energy report"));
            };
            let mut meta = header("point");
            meta.push(("policy".into(), policy_line(&policy)));
            meta.push(("wall_time_s".into(), rec.wall_time_s.to_string()));
            render(&meta, &[sweep_row(c, *d, r)], Format::Csv)?
        }
    };
    emit(&bytes, a.output.out.as_deref())?;
    Ok(Outcome {
        converged: rec.converged,
    })
}

fn sweep_row(c: &Config, d_over_a: f64, r: &casimir_core::thermal::FreeEnergyResult) -> SweepRow {
    SweepRow {
        t: c.t,
        d_over_a,
        model: c.model.to_string(),
        beta_f: r.beta_f,
        beta_f_t: r.beta_f * c.t,
        beta_f_m0: r.beta_f_m0,
        y: (r.beta_f != 0.0).then(|| r.beta_f_m0 / r.beta_f),
        terms_used: r.terms_used,
        converged: r.converged,
    }
}

#[derive(Clone, Copy)]
enum Axis {
    Width,
    Temperature,
}

fn sweep(a: &SweepArgs, axis: Axis, command: &str) -> Result<Outcome, CliError> {
    let model = a.model.reduced_model()?;
    let values = a.axis.values()?;
    let configs: Vec<(Config, f64)> = match axis {
        Axis::Width => {
            if !a.state.gaps().is_empty() {
                return Err(usage(
                    "the width axis comes from --points or --from/--to/--count",
                ));
            }
            let ts = a.state.temperatures(a.model.radius)?;
            ts.iter()
                .flat_map(|&t| {
                    values
                        .iter()
                        .map(move |&d| Ok((Gap::DOverA(d).config(t, model)?, d)))
                })
                .collect::<Result<_, CliError>>()?
        }
        Axis::Temperature => {
            if !a.state.t.is_empty() || !a.state.temperature.is_empty() {
                return Err(usage(
                    "the temperature axis comes from --points or --from/--to/--count",
                ));
            }
            let gaps = a.state.require_gaps()?;
            gaps.iter()
                .flat_map(|&g| {
                    values
                        .iter()
                        .map(move |&t| Ok((g.config(t, model)?, g.d_over_a())))
                })
                .collect::<Result<_, CliError>>()?
        }
    };
    let policy = a.policy.policy(Executor::Sequential)?;
    let cache = a.output.cache_dir.as_deref();
    let version = a.output.code_version.as_str();
    let evaluated = pool(a.policy.jobs())?.install(|| {
        configs
            .par_iter()
            .map(|&(c, d)| {
                let start = Instant::now();
                let req = PointRequest {
                    config: Some((c, d)),
                    si: None,
                    reports: vec![Report::FreeEnergy],
                };
                let (rec, lookup) = cached_evaluate(cache, &req, &policy, version)?;
                let r = rec.free_energy.expect("free-energy report requested");
                Ok((sweep_row(&c, d, &r), start.elapsed().as_secs_f64(), lookup))
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;

    let mut meta = header(command);
    meta.push(("model".into(), model.to_string()));
    if let Some(r) = a.model.radius {
        meta.push(("radius_m".into(), r.to_string()));
    }
    meta.push(("policy".into(), policy_line(&policy)));
    for (i, (row, secs, lookup)) in evaluated.iter().enumerate() {
        let cached = if *lookup == Lookup::Hit {
            " cached"
        } else {
            ""
        };
        meta.push((
            format!("point {i}"),
            format!(
                "t={} d_over_a={} wall_time_s={secs:.6}{cached}",
                row.t, row.d_over_a
            ),
        ));
    }
    let rows: Vec<SweepRow> = evaluated.into_iter().map(|(r, _, _)| r).collect();
    let converged = rows.iter().all(|r| r.converged);
    let unconverged = rows.iter().filter(|r| !r.converged).count();
    meta.push(("unconverged".into(), unconverged.to_string()));
    write_table(&a.output, &meta, &rows, Format::Csv)?;
    Ok(Outcome { converged })
}

fn write_table<R: Serialize>(
    out: &OutputArgs,
    meta: &Meta,
    rows: &[R],
    default: Format,
) -> Result<(), CliError> {
    let bytes = render(meta, rows, out.format.unwrap_or(default))?;
    emit(&bytes, out.out.as_deref())
}

#[derive(Debug, Serialize)]
struct MetalRow {
    a_over_b: f64,
    d_over_a: f64,
    t: f64,
    #[serde(rename = "beta_F_A")]
    beta_f_a: f64,
    #[serde(rename = "beta_F_B")]
    beta_f_b: f64,
    difference: f64,
    half_static_sum: f64,
    converged: bool,
}

fn metal_limit(a: &MetalArgs) -> Result<Outcome, CliError> {
    let gaps = a.state.require_gaps()?;
    let ts = a.state.temperatures(None)?;
    let policy = a.policy.policy(Executor::Parallel {
        threads: a.policy.jobs(),
    })?;
    let mut rows = Vec::new();
    let mut meta = header("metal-limit");
    meta.push(("policy".into(), policy_line(&policy)));
    for &g in &gaps {
        for &t in &ts {
            let start = Instant::now();
            let c = g.config(
                t,
                DispersionModel::IdealMetal {
                    option: MetalOption::A,
                },
            )?;
            let fa = free_energy_ideal_metal(&c, &policy, MetalOption::A)?;
            let fb = free_energy_ideal_metal(&c, &policy, MetalOption::B)?;
            rows.push(MetalRow {
                a_over_b: g.alpha(),
                d_over_a: g.d_over_a(),
                t,
                beta_f_a: fa.beta_f,
                beta_f_b: fb.beta_f,
                difference: fa.beta_f - fb.beta_f,
                half_static_sum: 0.5 * metal_static_sum(c.alpha)?,
                converged: fa.converged && fb.converged,
            });
            meta.push((
                format!("point {}", rows.len() - 1),
                format!("wall_time_s={:.6}", start.elapsed().as_secs_f64()),
            ));
        }
    }
    let converged = rows.iter().all(|r| r.converged);
    write_table(&a.output, &meta, &rows, Format::Csv)?;
    Ok(Outcome { converged })
}

#[derive(Debug, Serialize)]
struct PlanarRow {
    k_perp: f64,
    omega_hat: f64,
    omega_over_gamma: Option<f64>,
    r2: f64,
    abs_r2: f64,
    /// `ω_p²/(4k_⊥²c²) · ω̂/γ_relax` for the Drude model.
    drude_linear: Option<f64>,
}

fn planar_r2(a: &PlanarArgs) -> Result<Outcome, CliError> {
    if a.model.radius.is_some() {
        return Err(usage("planar-r2 works in SI units; drop --radius"));
    }
    if a.model.model == ModelKind::IdealMetal {
        return Err(usage("planar-r2 needs a finite-permittivity model"));
    }
    let model = a.model.raw_model()?;
    let omegas = a.axis.values()?;
    let mut rows = Vec::new();
    for &k in &a.k_perp {
        for &w in &omegas {
            let r2 = r2_perpendicular(&model, w, k)?;
            let (ratio, linear) = match model {
                DispersionModel::Drude {
                    omega_p,
                    gamma_relax,
                } if gamma_relax > 0.0 => {
                    let q = w / gamma_relax;
                    (Some(q), Some(r2_drude_slope(omega_p, k) * q))
                }
                _ => (None, None),
            };
            rows.push(PlanarRow {
                k_perp: k,
                omega_hat: w,
                omega_over_gamma: ratio,
                r2,
                abs_r2: r2.abs(),
                drude_linear: linear,
            });
        }
    }
    let mut meta = header("planar-r2");
    meta.push(("model".into(), model.to_string()));
    write_table(&a.output, &meta, &rows, Format::Csv)?;
    Ok(Outcome { converged: true })
}

#[derive(Debug, Serialize)]
struct ZeroRow {
    d_over_a: f64,
    a_over_b: f64,
    model: String,
    #[serde(rename = "beta_F_t")]
    beta_f_t: f64,
    error_estimate: f64,
    evaluations: u64,
    panels: usize,
}

fn zero_t(a: &ZeroArgs) -> Result<Outcome, CliError> {
    let model = a.model.reduced_model()?;
    let policy = a.policy.policy(Executor::Sequential)?;
    let gaps = a.state.require_gaps()?;
    let mut meta = header("zero-t");
    meta.push(("model".into(), model.to_string()));
    meta.push(("policy".into(), policy_line(&policy)));
    meta.push(("quad_tol".into(), a.quad_tol.to_string()));
    let rows = pool(a.policy.jobs())?.install(|| {
        gaps.par_iter()
            .map(|&g| {
                let alpha = g.alpha();
                Config::new(alpha, 1.0, model)?;
                let z = free_energy_zero_temperature(alpha, &model, &policy, a.quad_tol)?;
                Ok(ZeroRow {
                    d_over_a: g.d_over_a(),
                    a_over_b: alpha,
                    model: model.to_string(),
                    beta_f_t: z.beta_f_t,
                    error_estimate: z.error_estimate,
                    evaluations: z.evaluations,
                    panels: z.panels,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    write_table(&a.output, &meta, &rows, Format::Csv)?;
    Ok(Outcome { converged: true })
}
