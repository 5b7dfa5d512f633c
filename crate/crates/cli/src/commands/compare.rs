use std::path::Path;

use serde::Serialize;

use cqpointer::analytic::{initial_joint, shifted_joint};
use cqpointer::dynamics::{evolve_with_reference, residual_report, ResidualReport, Scheme, SchemeConfig};
use cqpointer::io::{svg_line_plot, write_diagnostics, Series};
use cqpointer::quadrature::l1_distance_2d;

use super::{dump_failure, OutDir, Outcome};
use crate::config::{GateConfig, ScenarioConfig};
use crate::error::CliError;

/// Pointer speeds at which the neglected terms are tabulated.
const PROBE_SPEEDS: [f64; 4] = [1e-3, 1e-2, 1e-1, 1.0];

#[derive(Debug, Serialize)]
struct Report<'a> {
    command: &'static str,
    version: &'static str,
    config: &'a ScenarioConfig,
    scheme: SchemeConfig,
    steps: usize,
    dt: f64,
    /// L1 distance between the integrated and the shifted density at the end.
    l1: f64,
    /// L1 distance between the shifted and the initial density.
    signal: f64,
    gate: GateConfig,
    passed: bool,
    residuals: Vec<(f64, ResidualReport)>,
}

/// Integrates every term of the coupled equations over the interaction and
/// compares the result with the rigid shift solution.
pub fn compare(cfg: &ScenarioConfig, out: &Path, svg: bool) -> Result<Outcome, CliError> {
    cfg.validate()?;
    let mut dir = OutDir::create(out)?;
    let p = cfg.params;
    let alpha = cfg.alpha();
    let t_end = alpha.end();
    let k = alpha.integrated_strength(t_end)?;
    let grid = cfg.grid.build(&p, k)?;
    let joint = initial_joint(&p);
    let start = joint.to_state(grid, 0.0)?;
    let scheme = SchemeConfig {
        scheme: Scheme::FullHybrid,
        ..cfg.scheme()
    };
    let reference = |t: f64| {
        let kt = alpha.integrated_strength(t)?;
        Ok(shifted_joint(&joint, kt).sample_density(&grid))
    };
    let run = evolve_with_reference(&start, &p, &alpha, t_end, &scheme, &reference)
        .map_err(|e| dump_failure(&mut dir, "compare evolve", e.into()))?;

    let shifted = shifted_joint(&joint, k).sample_density(&grid);
    let l1 = l1_distance_2d(&run.state.p, &shifted, &grid)?;
    let signal = l1_distance_2d(&shifted, &start.p, &grid)?;
    let passed = l1 <= cfg.gate.threshold && l1 <= cfg.gate.relative * signal;

    write_diagnostics(dir.writer("compare.csv")?, &run.diagnostics)?;
    let residuals: Vec<(f64, ResidualReport)> = PROBE_SPEEDS
        .iter()
        .map(|&v| (v, residual_report(&p, v, t_end, p.q0)))
        .collect();
    {
        let mut w = csv_writer(dir.writer("residuals.csv")?);
        w.write_record(["v", "kept", "classical_kinetic", "induced_kinetic", "quantum_potential", "ratio_classical", "ratio_induced", "ratio_quantum"])
            .map_err(cqpointer::Error::from)?;
        for (v, r) in &residuals {
            let [a, b, c] = r.ratios.unwrap_or([f64::NAN; 3]);
            w.serialize((v, r.kept, r.classical_kinetic, r.induced_kinetic, r.quantum_potential, a, b, c))
                .map_err(cqpointer::Error::from)?;
        }
        w.flush()?;
    }
    if svg {
        let ts: Vec<f64> = run.diagnostics.iter().map(|r| r.t).collect();
        let ls: Vec<f64> = run.diagnostics.iter().map(|r| r.l1.unwrap_or(f64::NAN)).collect();
        let plot = svg_line_plot("L1 distance to the shift solution", "t", &[Series { label: "L1", x: &ts, y: &ls }]);
        dir.text("compare.svg", &plot)?;
    }
    let mut files = dir.files.clone();
    files.push("compare.json".into());
    let report = Report {
        command: "compare",
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        scheme,
        steps: run.steps,
        dt: run.dt,
        l1,
        signal,
        gate: cfg.gate,
        passed,
        residuals,
    };
    dir.json("compare.json", &report)?;
    Ok(Outcome::gate(
        passed,
        format!(
            "final L1 {l1:.3e} (threshold {:.1e}); shift size {signal:.3e}, ratio {:.3} (limit {})",
            cfg.gate.threshold,
            l1 / signal,
            cfg.gate.relative
        ),
        files,
    ))
}

fn csv_writer<W: std::io::Write>(w: W) -> csv::Writer<W> {
    csv::Writer::from_writer(w)
}
