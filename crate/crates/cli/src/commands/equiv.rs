use std::path::Path;

use serde::Serialize;

use cqpointer::phase_space::{
    density, equivalence_transform, Density1D, MixtureSpec, PhaseGrid, Representation,
};
use cqpointer::Grid1D;

use super::{OutDir, Outcome};
use crate::config::{EquivalenceCase, ScenarioConfig};
use crate::error::CliError;

pub const TOLERANCE: f64 = 1e-10;
const TIMES: [f64; 3] = [0.5, 1.0, 2.0];

/// Three fixed Gaussian specs and the point-source, Gaussian-velocity case.
pub fn bundled_cases() -> Vec<EquivalenceCase> {
    let g = |a: (f64, f64), b: (f64, f64), mass: f64| MixtureSpec {
        representation: Representation::Principal,
        label: Density1D::gaussian(a.0, a.1).expect("positive width"),
        profile: Density1D::gaussian(b.0, b.1).expect("positive width"),
        mass,
    };
    [
        g((0.3, 0.4), (-0.2, 0.5), 1.3),
        g((-0.7, 0.25), (0.6, 0.35), 0.8),
        g((0.0, 0.55), (0.9, 0.2), 1.9),
        MixtureSpec {
            representation: Representation::Principal,
            label: Density1D::Delta { at: 0.0 },
            profile: Density1D::gaussian(1.0, 0.3).expect("positive width"),
            mass: 1.0,
        },
    ]
    .into_iter()
    .map(|principal| EquivalenceCase {
        principal,
        separated: None,
    })
    .collect()
}

#[derive(Debug, Serialize)]
struct Row {
    case: usize,
    t: f64,
    max_diff: f64,
    involution: bool,
}

/// Evaluates each principal spec against its separated partner and reports
/// the largest pointwise difference.
pub fn mixture_equiv(cfg: &ScenarioConfig, out: &Path) -> Result<Outcome, CliError> {
    let mut dir = OutDir::create(out)?;
    let cases = if cfg.mixtures.is_empty() {
        bundled_cases()
    } else {
        cfg.mixtures.clone()
    };
    let build = |lo: f64, hi: f64| {
        Grid1D::new(lo, hi, 401).map_err(|e| CliError::Numerical(format!("grid: {e}")))
    };
    let grid = PhaseGrid::new(build(-8.0, 8.0)?, build(-6.0, 6.0)?);

    let mut rows = Vec::new();
    for (i, case) in cases.iter().enumerate() {
        case.principal.validate()?;
        let partner = case
            .separated
            .clone()
            .unwrap_or_else(|| equivalence_transform(&case.principal));
        partner.validate()?;
        let involution = equivalence_transform(&equivalence_transform(&case.principal)) == case.principal;
        for t in TIMES {
            let a = density(&case.principal, &grid, t)?;
            let b = density(&partner, &grid, t)?;
            rows.push(Row {
                case: i,
                t,
                max_diff: a.max_abs_diff(&b)?,
                involution,
            });
        }
    }
    let mut w = csv::Writer::from_writer(dir.writer("mixture_equiv.csv")?);
    for r in &rows {
        w.serialize(r).map_err(cqpointer::Error::from)?;
    }
    w.flush()?;
    drop(w);

    let worst = rows.iter().map(|r| r.max_diff).fold(0.0, f64::max);
    let passed = rows.iter().all(|r| r.max_diff < TOLERANCE && r.involution);
    let files = dir.files.clone();
    Ok(Outcome::gate(
        passed,
        format!(
            "{} cases x {} times: max pointwise difference {worst:.3e} (tolerance {TOLERANCE:.0e})",
            cases.len(),
            TIMES.len()
        ),
        files,
    ))
}
