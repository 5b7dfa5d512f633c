use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use cqpointer::analytic::{
    free_pointer_density, initial_joint, initial_quantum_density, narrow_ratio,
    pointer_marginal_exact, shifted_joint, PointerWidth,
};
use cqpointer::dynamics::{evolve_with_reference, marginals, DiagnosticRow};
use cqpointer::io::{svg_line_plot, write_diagnostics, write_field_1d, write_field_2d, Series};
use cqpointer::measurement::{
    decompose_pointer_mixture, sample_measurement, update_quantum, MeasurementRecord, Posterior,
};
use cqpointer::state::NORMALIZATION_TOL;
use cqpointer::{GaussianMixture1D, HybridState};

use super::{dump_failure, OutDir, Outcome};
use crate::config::{Action, ExportTarget, ScenarioConfig};
use crate::error::CliError;

const DENSITY_POINTS: usize = 2001;

#[derive(Debug, Serialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
enum Event {
    Evolve {
        t: f64,
        steps: usize,
        dt: f64,
        mass: f64,
        l1_vs_shift: Option<f64>,
        renormalizations: usize,
        max_step_drift: f64,
    },
    Measure {
        t_m: f64,
        seed: u64,
        q_prime: f64,
        x_m: f64,
        sigma_m: f64,
        q_m: f64,
        sigma_q_m: f64,
        narrow_ratio: f64,
        posterior: GaussianMixture1D,
    },
    Export {
        target: ExportTarget,
        t: f64,
        file: String,
    },
}

#[derive(Debug, Serialize)]
struct Tolerances {
    normalization: f64,
    renormalize_threshold: f64,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    command: &'static str,
    version: &'static str,
    config: &'a ScenarioConfig,
    events: &'a [Event],
    files: &'a [String],
    tolerances: Tolerances,
}

/// Runs the schedule of `cfg`, writing exports and `manifest.json` to `out`.
pub fn simulate(cfg: &ScenarioConfig, out: &Path, svg: bool) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let mut dir = OutDir::create(out)?;
    let p = cfg.params;
    let alpha = cfg.alpha();
    let k_full = alpha.integrated_strength(alpha.end())?;
    let grid = cfg.grid.build(&p, k_full)?;
    let joint = initial_joint(&p);

    let mut state: Option<HybridState> = None;
    let mut trace: Vec<DiagnosticRow> = Vec::new();
    let mut posterior: Option<Posterior> = None;
    let mut events = Vec::new();
    let mut now = 0.0;

    for (index, action) in cfg.schedule.iter().enumerate() {
        match *action {
            Action::Evolve { t } => {
                let start = match state.take() {
                    Some(s) => s,
                    None => joint.to_state(grid, 0.0)?,
                };
                let reference = |tt: f64| {
                    let k = alpha.integrated_strength(tt)?;
                    Ok(shifted_joint(&joint, k).sample_density(&grid))
                };
                let run = evolve_with_reference(&start, &p, &alpha, t, &cfg.scheme(), &reference)
                    .map_err(|e| dump_failure(&mut dir, &format!("schedule[{index}] evolve"), e.into()))?;
                trace.extend_from_slice(&run.diagnostics);
                let last = run.diagnostics.last().copied();
                events.push(Event::Evolve {
                    t,
                    steps: run.steps,
                    dt: run.dt,
                    mass: run.state.mass(),
                    l1_vs_shift: last.and_then(|r| r.l1),
                    renormalizations: run.renormalizations,
                    max_step_drift: run.max_drift,
                });
                state = Some(run.state);
                now = t;
            }
            Action::Measure { t, sigma_m } => {
                let mix = decompose_pointer_mixture(&p, t)?;
                let seed = cfg.seed.wrapping_add(index as u64);
                let (q_prime, pointer) = sample_measurement(&mix, seed)?;
                let mut x_m = pointer.position(t);
                if sigma_m > 0.0 {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
                    x_m += Normal::new(0.0, sigma_m)
                        .map_err(|e| CliError::Input(e.to_string()))?
                        .sample(&mut rng);
                }
                let rec = MeasurementRecord { t_m: t, x_m, sigma_m };
                let post = update_quantum(&rec, &p)?;
                let k = p.lambda * t;
                events.push(Event::Measure {
                    t_m: t,
                    seed,
                    q_prime,
                    x_m,
                    sigma_m,
                    q_m: x_m / k,
                    sigma_q_m: p.sigma_c / k.abs(),
                    narrow_ratio: narrow_ratio(&p, t),
                    posterior: post.quantum.clone(),
                });
                posterior = Some(post);
                now = t;
            }
            Action::Export { target } => {
                let stem = format!("{index:02}-{}", target_name(target));
                let file = export(
                    &mut dir,
                    &stem,
                    target,
                    now,
                    &cfg.params,
                    state.as_ref(),
                    &trace,
                    posterior.as_ref(),
                    svg,
                )?;
                events.push(Event::Export { target, t: now, file });
            }
        }
    }

    let mut files = dir.files.clone();
    files.push("manifest.json".into());
    let manifest = Manifest {
        command: "simulate",
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        events: &events,
        files: &files,
        tolerances: Tolerances {
            normalization: NORMALIZATION_TOL,
            renormalize_threshold: cqpointer::dynamics::RENORMALIZE_THRESHOLD,
        },
    };
    dir.json("manifest.json", &manifest)?;
    let measured = events.iter().filter(|e| matches!(e, Event::Measure { .. })).count();
    Ok(Outcome::gate(
        true,
        format!(
            "ran {} actions ({measured} measurements); wrote {} files",
            cfg.schedule.len(),
            files.len()
        ),
        files,
    ))
}

fn target_name(t: ExportTarget) -> &'static str {
    match t {
        ExportTarget::Joint => "joint",
        ExportTarget::PointerDensity => "pointer-density",
        ExportTarget::QuantumDensity => "quantum-density",
        ExportTarget::Diagnostics => "diagnostics",
        ExportTarget::Posterior => "posterior",
    }
}

#[allow(clippy::too_many_arguments)]
fn export(
    dir: &mut OutDir,
    stem: &str,
    target: ExportTarget,
    now: f64,
    p: &cqpointer::PhysicalParams,
    state: Option<&HybridState>,
    trace: &[DiagnosticRow],
    posterior: Option<&Posterior>,
    svg: bool,
) -> Result<String, CliError> {
    let csv = format!("{stem}.csv");
    match target {
        ExportTarget::Joint => {
            let st = state.ok_or_else(|| CliError::Input("joint export needs an evolve action first".into()))?;
            write_field_2d(dir.writer(&csv)?, "P", st.t, &st.grid, &st.p)?;
        }
        ExportTarget::PointerDensity => {
            let (axis, values) = match state {
                Some(st) if st.t >= now => {
                    let (px, _) = marginals(st)?;
                    (st.grid.x, px)
                }
                _ => {
                    let law = if now > p.epsilon {
                        free_pointer_density(p, now, PointerWidth::Full)?
                    } else {
                        pointer_marginal_exact(p, p.lambda * now)
                    };
                    let g = law.default_grid(DENSITY_POINTS)?;
                    (g, law.sample_on(&g))
                }
            };
            write_field_1d(dir.writer(&csv)?, "x", "P_C", now, &axis, &values)?;
            if svg {
                let xs = axis.points();
                let plot = svg_line_plot(
                    &format!("pointer density at t = {now}"),
                    "x",
                    &[Series { label: "P_C", x: &xs, y: &values }],
                );
                dir.text(&format!("{stem}.svg"), &plot)?;
            }
        }
        ExportTarget::QuantumDensity => {
            let law = match posterior {
                Some(post) => post.quantum.clone(),
                None => initial_quantum_density(p),
            };
            let g = law.default_grid(DENSITY_POINTS)?;
            let values = law.sample_on(&g);
            write_field_1d(dir.writer(&csv)?, "q", "P_Q", now, &g, &values)?;
            if svg {
                let xs = g.points();
                let plot = svg_line_plot(
                    &format!("quantum density at t = {now}"),
                    "q",
                    &[Series { label: "P_Q", x: &xs, y: &values }],
                );
                dir.text(&format!("{stem}.svg"), &plot)?;
            }
        }
        ExportTarget::Diagnostics => {
            write_diagnostics(dir.writer(&csv)?, trace)?;
        }
        ExportTarget::Posterior => {
            let post = posterior
                .ok_or_else(|| CliError::Input("posterior export needs a measure action first".into()))?;
            let name = format!("{stem}.json");
            dir.json(&name, post)?;
            return Ok(name);
        }
    }
    Ok(csv)
}
