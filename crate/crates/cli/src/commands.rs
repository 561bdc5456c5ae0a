use std::path::Path;

use equichord::billiard::{orbit, power_chain, BilliardError};
use equichord::equichordal::{check_pair_planar, check_pair_revolution, CheckConfig, CheckError, CheckReport};
use equichord::floating::{convex_floating_body, dupin_check, equilibrium_scan, CutSpec, FloatError, Solid};
use equichord::geometry::{GeometryError, PlanarBody, RevolutionProfile};
use equichord::revolution::{
    central_derivatives, chi_from_profiles, default_step, g_from_f, moving_chord_extend, shifted_comp0, verify_comp0,
    RevolutionError,
};
use equichord::spec::{load_body_spec, Body, SpecError};
use rayon::prelude::*;
use thiserror::Error;

use crate::table::{write_atomic, Cell, Table};
use crate::{
    AnalyzeArgs, BilliardArgs, CheckArgs, Command, EquilibriumArgs, ExitStatus, FloatArgs, ReconstructArgs, Report,
    RunConfig,
};

/// Everything that turns a run into exit status 2. Each variant prints with
/// its own prefix.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("body spec: {0}")]
    Spec(#[from] SpecError),
    #[error("geometry: {0}")]
    Geometry(#[from] GeometryError),
    #[error("equichordal check: {0}")]
    Check(#[from] CheckError),
    #[error("floating body: {0}")]
    Float(#[from] FloatError),
    #[error("billiard: {0}")]
    Billiard(#[from] BilliardError),
    #[error("revolution analysis: {0}")]
    Revolution(#[from] RevolutionError),
    #[error("body kind: {0}")]
    BodyKind(String),
    #[error("output: cannot write {path}: {message}")]
    Output { path: String, message: String },
}

struct Outcome {
    summary: String,
    table: Table,
    passed: bool,
}

pub fn run(config: &RunConfig) -> Report {
    let (outcome, out) = match &config.command {
        Command::Check(a) => (check(a), a.out.as_deref()),
        Command::Float(a) => (float(a), a.out.as_deref()),
        Command::Equilibrium(a) => (equilibrium(a), a.out.as_deref()),
        Command::Billiard(a) => (billiard(a), a.out.as_deref()),
        Command::Analyze(a) => (analyze(a), a.report.as_deref()),
        Command::Reconstruct(a) => (reconstruct(a), a.out.as_deref()),
    };
    let outcome = outcome.and_then(|o| {
        if let Some(path) = out {
            write_atomic(path, &o.table.to_csv()).map_err(|e| CliError::Output {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
        }
        Ok(o)
    });
    match outcome {
        Ok(o) => Report {
            summary: o.summary,
            table: Some(o.table),
            status: if o.passed {
                ExitStatus::Success
            } else {
                ExitStatus::PropertyFailure
            },
        },
        Err(e) => Report {
            summary: format!("error: {e}"),
            table: None,
            status: ExitStatus::InputError,
        },
    }
}

fn load(path: &Path) -> Result<Body, CliError> {
    Ok(load_body_spec(path)?)
}

fn load_revolution(path: &Path, command: &str) -> Result<RevolutionProfile, CliError> {
    match load(path)? {
        Body::Revolution(p) => Ok(p),
        Body::Planar(_) => Err(CliError::BodyKind(format!(
            "{command} needs a body of revolution, {} is planar",
            path.display()
        ))),
    }
}

/// Billiards live in the plane; a body of revolution enters through its
/// meridian section.
fn load_planar(path: &Path) -> Result<PlanarBody, CliError> {
    match load(path)? {
        Body::Planar(p) => Ok(p),
        Body::Revolution(p) => Ok(PlanarBody::from_meridian(&p)?),
    }
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn check(a: &CheckArgs) -> Result<Outcome, CliError> {
    let cfg = CheckConfig {
        power: a.power,
        dimension: a.dimension,
        num_frames: a.frames,
        num_section_dirs: a.dirs,
        tolerance: a.tolerance,
    };
    let (rep, labels): (CheckReport, _) = match (load(&a.outer)?, load(&a.inner)?) {
        (Body::Revolution(k), Body::Revolution(l)) => {
            let labels = (k.label().to_string(), l.label().to_string());
            (check_pair_revolution(&k, &l, &cfg)?, labels)
        }
        (Body::Planar(k), Body::Planar(l)) => {
            let labels = (k.label().to_string(), l.label().to_string());
            (check_pair_planar(&k, &l, &cfg)?, labels)
        }
        _ => {
            return Err(CliError::BodyKind(
                "check needs two bodies of the same kind (both revolution or both planar)".into(),
            ))
        }
    };
    let mut table = Table::new(["frame_index", "alpha", "a_s", "value", "deviation"]);
    for s in &rep.samples {
        table.push(vec![
            s.frame_index.into(),
            s.alpha.into(),
            s.a_s.into(),
            s.value.into(),
            s.deviation.into(),
        ]);
    }
    let passed = rep.satisfied();
    let mut summary = format!(
        "{} c={:.6} max_dev={:.3e} max_frame_spread={:.3e}\nouter={} inner={} power={} frames={} dirs={} tolerance={:e}",
        verdict(passed),
        rep.constant_estimate,
        rep.max_deviation,
        rep.max_frame_spread,
        labels.0,
        labels.1,
        a.power,
        a.frames,
        a.dirs,
        a.tolerance,
    );
    if let (false, Some(w)) = (passed, rep.worst_sample()) {
        summary.push_str(&format!(
            "\nworst frame={} alpha={:.6} a_s={:.6} value={:.6}",
            w.frame_index, w.alpha, w.a_s, w.value
        ));
    }
    Ok(Outcome { summary, table, passed })
}

fn axis_names(prefix: &str, d: usize) -> Vec<String> {
    ["x", "y", "z"][..d].iter().map(|c| format!("{prefix}_{c}")).collect()
}

fn point_header(d: usize, first: &str, middle: &str, last: &str) -> Vec<String> {
    let mut h = vec![first.to_string()];
    h.extend(axis_names("xi", d));
    h.push(middle.into());
    h.extend(axis_names("centroid", d));
    h.push(last.into());
    h
}

fn point_row<const D: usize>(k: usize, xi: [f64; D], t: f64, c: [f64; D], residual: f64) -> Vec<Cell> {
    let mut row = vec![Cell::from(k)];
    row.extend(xi.map(Cell::Real));
    row.push(t.into());
    row.extend(c.map(Cell::Real));
    row.push(residual.into());
    row
}

fn float(a: &FloatArgs) -> Result<Outcome, CliError> {
    match load(&a.body)? {
        Body::Revolution(p) => float_in(&p, a),
        Body::Planar(p) => float_in(&p, a),
    }
}

/// Rows: direction, cutting level, centroid of the cut-off part and the
/// supporting-plane volume mismatch (relative to the body volume).
fn float_in<const D: usize, S: Solid<D>>(body: &S, a: &FloatArgs) -> Result<Outcome, CliError> {
    let approx = convex_floating_body(body, CutSpec::Fraction(a.fraction), a.dirs)?;
    let dupin = dupin_check(body, &approx, a.tolerance);
    let centroids: Vec<[f64; D]> = approx
        .directions
        .par_iter()
        .zip(&approx.levels)
        .map(|(xi, &t)| {
            let (v, m) = body.cap_moments(xi, t);
            m.map(|c| c / v)
        })
        .collect();
    let mut table = Table::new(point_header(D, "dir_index", "t", "residual"));
    for (k, xi) in approx.directions.iter().enumerate() {
        table.push(point_row(
            k,
            xi.components(),
            approx.levels[k],
            centroids[k],
            dupin.mismatches[k],
        ));
    }
    let passed = dupin.flagged.is_empty();
    let (t_min, t_max) = approx
        .levels
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| {
            (lo.min(t), hi.max(t))
        });
    let summary = format!(
        "{} max_mismatch={:.3e} flagged={}\nfraction={} delta={:.9e} dirs={} level_range=[{:.9}, {:.9}]",
        verdict(passed),
        dupin.max_mismatch,
        dupin.flagged.len(),
        a.fraction,
        approx.cut.delta,
        approx.directions.len(),
        t_min,
        t_max,
    );
    Ok(Outcome { summary, table, passed })
}

fn equilibrium(a: &EquilibriumArgs) -> Result<Outcome, CliError> {
    match load(&a.body)? {
        Body::Revolution(p) => equilibrium_in(&p, a),
        Body::Planar(p) => equilibrium_in(&p, a),
    }
}

fn equilibrium_in<const D: usize, S: Solid<D>>(body: &S, a: &EquilibriumArgs) -> Result<Outcome, CliError> {
    let reports = equilibrium_scan(body, CutSpec::Fraction(a.fraction), a.dirs)?;
    let mut table = Table::new(point_header(D, "dir_index", "t", "residual"));
    let mut worst = (0, 0.0f64);
    for (k, r) in reports.iter().enumerate() {
        table.push(point_row(
            k,
            r.direction.components(),
            r.level,
            r.submerged_centroid,
            r.residual,
        ));
        if r.residual > worst.1 {
            worst = (k, r.residual);
        }
    }
    let coincident = reports.iter().filter(|r| r.centroid_coincidence).count();
    let passed = worst.1 <= a.tolerance;
    let summary = format!(
        "{} max_residual={:.3e} at dir_index={}\nfraction={} dirs={} tolerance={:e} centroid_coincidences={}",
        verdict(passed),
        worst.1,
        worst.0,
        a.fraction,
        reports.len(),
        a.tolerance,
        coincident,
    );
    Ok(Outcome { summary, table, passed })
}

fn billiard(a: &BilliardArgs) -> Result<Outcome, CliError> {
    let outer = load_planar(&a.outer)?;
    let inner = load_planar(&a.inner)?;
    let beta0 = outer.boundary_point(a.start_angle);
    let orb = orbit(&outer, &inner, beta0, a.steps, a.closure_tol)?;
    let chain = power_chain(&orb, a.power);
    let mut table = Table::new([
        "step",
        "beta_x",
        "beta_y",
        "kappa_x",
        "kappa_y",
        "chord_length",
        "power_sum",
    ]);
    for (j, k) in orb.kappas.iter().enumerate() {
        let b = orb.betas[j];
        table.push(vec![
            j.into(),
            b[0].into(),
            b[1].into(),
            k[0].into(),
            k[1].into(),
            chain.chord_lengths[j].into(),
            chain.power_sums[j].into(),
        ]);
    }
    let scale = chain.power_sums.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let passed = chain.power_spread <= a.tolerance * scale;
    let closure = match orb.period {
        Some(p) => format!("closed=true period={p}"),
        None => "closed=false".to_string(),
    };
    let summary = format!(
        "{} power_spread={:.3e} chord_spread={:.3e}\n{} chords={} rotation={:.12} rotation_over_pi={:.12}",
        verdict(passed),
        chain.power_spread,
        chain.chord_spread,
        closure,
        orb.chord_lengths.len(),
        orb.rotation_estimate,
        orb.rotation_estimate / std::f64::consts::PI,
    );
    Ok(Outcome { summary, table, passed })
}

/// Rows over the interior of the χ support: χ, its central differences and
/// the second-order identity evaluated at each point as tangency.
fn analyze(a: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let outer = load_revolution(&a.body, "analyze")?;
    let chi = chi_from_profiles(&outer, a.sigma, a.dimension)?;
    let h = a.step.unwrap_or_else(|| default_step(&chi));
    let at_zero = verify_comp0(&chi, h)?;
    let (lo, hi) = chi.support();
    // Stay clear of the support ends, where g = √(f² − σ²) vanishes and the
    // tangency slope blows up.
    let margin = (4.0 * h).max(0.05 * (hi - lo));
    let (lo, hi) = (lo + margin, hi - margin);
    if lo >= hi {
        return Err(RevolutionError::SupportTooSmall { h, lo, hi }.into());
    }
    let xs: Vec<f64> = (0..a.points)
        .map(|k| lo + (hi - lo) * k as f64 / (a.points - 1) as f64)
        .collect();
    let rows: Vec<Result<Vec<Cell>, RevolutionError>> = xs
        .par_iter()
        .map(|&x| {
            let (d1, d2) = central_derivatives(&chi, x, h);
            let r = shifted_comp0(&chi, x, h)?;
            Ok(vec![x.into(), chi.eval(x).into(), d1.into(), d2.into(), r.into()])
        })
        .collect();
    let mut table = Table::new(["x", "chi", "fd_chi1", "fd_chi2", "comp0_residual"]);
    let mut worst = (0.0, 0.0f64);
    for (row, &x) in rows.into_iter().zip(&xs) {
        let row = row?;
        if let Cell::Real(r) = row[4] {
            if r.abs() > worst.1 {
                worst = (x, r.abs());
            }
        }
        table.push(row);
    }
    let bound = a.tolerance * a.sigma.powi(4);
    let passed = worst.1 <= bound && at_zero.abs() <= bound;
    let summary = format!(
        "{} comp0_at_zero={:.3e} max_residual={:.3e} at x={:.6}\nsigma={} dimension={} step={:.3e} support=[{:.9}, {:.9}] bound={:e}",
        verdict(passed),
        at_zero,
        worst.1,
        worst.0,
        a.sigma,
        a.dimension,
        h,
        chi.support().0,
        chi.support().1,
        bound,
    );
    Ok(Outcome { summary, table, passed })
}

fn reconstruct(a: &ReconstructArgs) -> Result<Outcome, CliError> {
    let outer = load_revolution(&a.body, "reconstruct")?;
    let mut table = Table::new(["step", "lo", "hi", "max_deviation"]);
    let chain = match moving_chord_extend(&outer, a.sigma, a.start, a.tolerance) {
        Ok(c) => c,
        Err(RevolutionError::ArcMismatch { x, deviation }) => {
            return Ok(Outcome {
                summary: format!(
                    "FAIL arc mismatch at x={x:.9} deviation={deviation:.3e}\nsigma={} start=[{}, {}] tolerance={:e}",
                    a.sigma, a.start.0, a.start.1, a.tolerance
                ),
                table,
                passed: false,
            })
        }
        Err(e) => return Err(e.into()),
    };
    for (j, (&(lo, hi), &dev)) in chain.intervals.iter().zip(&chain.max_deviations).enumerate() {
        table.push(vec![j.into(), lo.into(), hi.into(), dev.into()]);
    }
    let inner = g_from_f(&outer, a.sigma)?;
    let (lo, hi) = chain.terminal();
    let g_error = (0..=400)
        .map(|k| {
            let x = lo + (hi - lo) * k as f64 / 400.0;
            (chain.reconstructed_g(x) - inner.radius(x)).abs()
        })
        .fold(0.0, f64::max);
    let max_dev = chain.max_deviations.iter().copied().fold(0.0, f64::max);
    let summary = format!(
        "PASS covered=[{lo:.9}, {hi:.9}] steps={} max_dev={max_dev:.3e} g_error={g_error:.3e}\nsigma={} start=[{}, {}] tolerance={:e}",
        chain.intervals.len() - 1,
        a.sigma,
        a.start.0,
        a.start.1,
        a.tolerance,
    );
    Ok(Outcome {
        summary,
        table,
        passed: true,
    })
}
