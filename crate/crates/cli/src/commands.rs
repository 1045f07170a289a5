//! Subcommand execution. Each command returns its CSV (if any) and a
//! human-readable summary; writing them out is left to the caller.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use rayon::prelude::*;

use anisotachy::directionality::{
    emission_probabilities, fisher_information, optimal_parameters, DirectionalityReport, OPTIMUM_GRID, VALIDITY_NOTE,
};
use anisotachy::dynamics::{classify_collective, decay_rate_trace};
use anisotachy::field::{axis, geometry, intensity_row, SpacetimeGrid};
use anisotachy::Error;

use crate::csv::Table;
use crate::presets::Preset;
use crate::spec::{DecaySpec, FisherSpec, IntensitySpec, RunSpec, SweepSpec};
use crate::CliError;

pub const DECAY_HEADER: [&str; 9] = [
    "t", "re_c1", "im_c1", "re_c2", "im_c2", "pop1", "pop2", "rate1", "rate2",
];
pub const INTENSITY_HEADER: [&str; 3] = ["x", "t", "intensity"];
pub const SWEEP_HEADER: [&str; 6] = ["theta", "delta_phi", "p_r", "p_l", "p_tot", "chi"];
pub const FISHER_HEADER: [&str; 4] = ["varphi", "F_D", "F_ND", "diff"];

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub csv: Option<String>,
    pub summary: String,
}

pub fn execute(spec: &RunSpec) -> Result<Outcome, CliError> {
    match spec {
        RunSpec::Decay(s) => run_decay(s),
        RunSpec::Intensity(s) => run_intensity(s),
        RunSpec::Sweep(s) => run_sweep(s),
        RunSpec::Optimize { beta } => run_optimize(*beta),
        RunSpec::Fisher(s) => run_fisher(s),
        RunSpec::Presets => Ok(Outcome {
            csv: None,
            summary: Preset::ALL.iter().map(|p| p.describe()).collect::<Vec<_>>().join("\n"),
        }),
    }
}

pub fn run_decay(spec: &DecaySpec) -> Result<Outcome, CliError> {
    let trace = spec.solver.trace(&spec.config, &spec.state, spec.t_max, spec.dt)?;
    let mut summary = String::new();
    let rates = match decay_rate_trace(&trace) {
        Ok(r) => Some(r),
        Err(Error::Resolution(res)) => {
            let _ = writeln!(summary, "note: dt*gamma = {res} > 0.01, rate columns left empty");
            None
        }
        Err(e) => return Err(e.into()),
    };

    let mut table = Table::new(&DECAY_HEADER);
    for (i, (&t, (c1, c2))) in trace.times().iter().zip(trace.c1().iter().zip(trace.c2())).enumerate() {
        let (r1, r2) = rates.as_ref().map_or((None, None), |r| (r.rate1[i], r.rate2[i]));
        table.row(&[
            Some(t),
            Some(c1.re),
            Some(c1.im),
            Some(c2.re),
            Some(c2.im),
            Some(c1.norm_sqr()),
            Some(c2.norm_sqr()),
            r1,
            r2,
        ]);
    }

    let cfg = &spec.config;
    let _ = writeln!(summary, "solver       {}", trace.method());
    let _ = writeln!(summary, "samples      {}", trace.len());
    let _ = writeln!(summary, "T_L, T_R     {}, {}", cfg.delay_left(), cfg.delay_right());
    let _ = writeln!(summary, "phi_L, phi_R {}, {}", cfg.phase_left(), cfg.phase_right());
    if let Some((p1, p2)) = trace.populations().last() {
        let _ = writeln!(summary, "final pops   {p1:.6e}, {p2:.6e}");
    }
    if cfg.is_retarded() {
        if let Ok(c) = classify_collective(cfg, &spec.state) {
            let _ = writeln!(
                summary,
                "after onset  atom 1 {} (rate {:.4}), atom 2 {} (rate {:.4})",
                c.labels[0], c.rates[0], c.labels[1], c.rates[1]
            );
        }
    }
    Ok(Outcome {
        csv: Some(table.finish()),
        summary,
    })
}

/// Computes the spacetime grid with rows evaluated in parallel.
pub fn intensity_grid(spec: &IntensitySpec) -> Result<SpacetimeGrid, CliError> {
    let geo = geometry(&spec.config)?;
    let xs = axis(spec.x_range.0, spec.x_range.1, spec.nx)?;
    let ts = axis(spec.t_range.0, spec.t_range.1, spec.nt)?;
    let source = spec.solver.source(&spec.config, &spec.state, spec.t_range.1)?;
    let rows = ts
        .par_iter()
        .map(|&t| intensity_row(&geo, &*source, &xs, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpacetimeGrid::from_rows(
        xs,
        ts,
        rows,
        spec.config,
        spec.state,
        spec.solver.method(),
    )?)
}

pub fn run_intensity(spec: &IntensitySpec) -> Result<Outcome, CliError> {
    let grid = intensity_grid(spec)?;
    let half = 0.5 * grid.config().field_geometry().map_or(0.0, |g| g.separation);
    let mut table = Table::new(&INTENSITY_HEADER);
    let (mut left, mut right, mut peak) = (0.0, 0.0, 0.0f64);
    for (it, &t) in grid.ts().iter().enumerate() {
        for (&x, &value) in grid.xs().iter().zip(grid.row(it)) {
            table.row(&[Some(x), Some(t), Some(value)]);
            peak = peak.max(value);
            if x > half {
                right += value;
            } else if x < -half {
                left += value;
            }
        }
    }
    let mut summary = String::new();
    let _ = writeln!(summary, "solver       {}", grid.method());
    let _ = writeln!(
        summary,
        "grid         {} x {} (t by x)",
        grid.ts().len(),
        grid.xs().len()
    );
    let _ = writeln!(summary, "peak I/I0    {peak:.6}");
    let _ = writeln!(summary, "sum right    {right:.6}");
    let _ = writeln!(summary, "sum left     {left:.6}");
    Ok(Outcome {
        csv: Some(table.finish()),
        summary,
    })
}

/// Reports on the sweep grid, theta-major.
pub fn sweep_reports(spec: &SweepSpec) -> Result<Vec<DirectionalityReport>, CliError> {
    let thetas = axis(0.0, FRAC_PI_2, spec.n_theta)?;
    let phases = axis(-PI, PI, spec.n_delta_phi)?;
    let rows = thetas
        .par_iter()
        .map(|&theta| {
            phases
                .iter()
                .map(|&dp| emission_probabilities(theta, dp, spec.beta, spec.phi))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rows.into_iter().flatten().collect())
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Outcome, CliError> {
    let reports = sweep_reports(spec)?;
    let mut table = Table::new(&SWEEP_HEADER);
    let mut best: Option<&DirectionalityReport> = None;
    for r in &reports {
        table.row(&[
            Some(r.theta),
            Some(r.delta_phi),
            Some(r.p_right),
            Some(r.p_left),
            Some(r.p_tot),
            r.chi,
        ]);
        if let Some(chi) = r.chi {
            if best.is_none_or(|b| chi.abs() > b.chi.unwrap_or(0.0).abs()) {
                best = Some(r);
            }
        }
    }
    let mut summary = String::new();
    let _ = writeln!(summary, "beta, phi    {}, {}", spec.beta, spec.phi);
    let _ = writeln!(
        summary,
        "grid         {} x {} (theta by delta_phi)",
        spec.n_theta, spec.n_delta_phi
    );
    match best {
        Some(b) => {
            let _ = writeln!(
                summary,
                "max |chi|    {:.6} at theta = {:.6}, delta_phi = {:.6}",
                b.chi.unwrap_or(0.0).abs(),
                b.theta,
                b.delta_phi
            );
        }
        None => {
            let _ = writeln!(summary, "max |chi|    undefined (no guided emission)");
        }
    }
    let _ = writeln!(summary, "note         {VALIDITY_NOTE}");
    Ok(Outcome {
        csv: Some(table.finish()),
        summary,
    })
}

pub fn run_optimize(beta: f64) -> Result<Outcome, CliError> {
    let o = optimal_parameters(beta)?;
    let mut s = String::new();
    let _ = writeln!(s, "beta         {beta}");
    let _ = writeln!(s, "theta*       {} ({:.6} pi)", o.theta, o.theta / PI);
    let _ = writeln!(s, "delta_phi*   {} ({:.6} pi)", o.delta_phi, o.delta_phi / PI);
    let _ = writeln!(s, "phi*         {} ({:.6} pi)", o.phi, o.phi / PI);
    let _ = writeln!(s, "chi*         {}", o.chi);
    let _ = writeln!(
        s,
        "grid         {n} x {n} argmax |chi| = {:.8} at theta = {:.6}, delta_phi = {:.6}",
        o.grid.abs_chi,
        o.grid.theta,
        o.grid.delta_phi,
        n = OPTIMUM_GRID
    );
    let _ = writeln!(s, "confirmed    {}", if o.confirmed { "yes" } else { "no" });
    let _ = writeln!(s, "note         {VALIDITY_NOTE}");
    Ok(Outcome { csv: None, summary: s })
}

/// One scan row: `(varphi, Some((F_D, F_ND, diff)))`, or `None` where a
/// channel is closed or the point is singular.
pub type FisherRow = (f64, Option<(f64, f64, f64)>);

pub fn fisher_scan(spec: &FisherSpec) -> Result<Vec<FisherRow>, CliError> {
    let offsets = axis(spec.range.0, spec.range.1, spec.n)?;
    let (d_dp, d_phi) = spec.parameter.direction();
    offsets
        .par_iter()
        .map(|&v| {
            let r = fisher_information(
                spec.theta,
                spec.delta_phi + v * d_dp,
                spec.beta,
                spec.phi + v * d_phi,
                spec.parameter,
            );
            match r {
                Ok(f) => Ok((v, Some((f.directional, f.non_directional, f.difference)))),
                Err(Error::EvaluationPoint { .. } | Error::DarkState { .. }) => Ok((v, None)),
                Err(e) => Err(e.into()),
            }
        })
        .collect()
}

pub fn run_fisher(spec: &FisherSpec) -> Result<Outcome, CliError> {
    let rows = fisher_scan(spec)?;
    let mut table = Table::new(&FISHER_HEADER);
    let mut skipped = 0usize;
    let mut min_diff = f64::INFINITY;
    for (v, cells) in &rows {
        match cells {
            Some((fd, fnd, diff)) => {
                table.row(&[Some(*v), Some(*fd), Some(*fnd), Some(*diff)]);
                min_diff = min_diff.min(*diff);
            }
            None => {
                skipped += 1;
                table.row(&[Some(*v), None, None, None]);
            }
        }
    }
    let mut summary = String::new();
    let _ = writeln!(summary, "parameter    {}", spec.parameter.name());
    let _ = writeln!(
        summary,
        "base point   theta = {}, delta_phi = {}, beta = {}, phi = {}",
        spec.theta, spec.delta_phi, spec.beta, spec.phi
    );
    let _ = writeln!(
        summary,
        "points       {} ({} without a defined information)",
        rows.len(),
        skipped
    );
    if min_diff.is_finite() {
        let _ = writeln!(summary, "min F_D-F_ND {min_diff:e}");
    }
    let _ = writeln!(summary, "note         {VALIDITY_NOTE}");
    Ok(Outcome {
        csv: Some(table.finish()),
        summary,
    })
}
