//! Distance from the origin to convex hulls of character values.

use std::f64::consts::PI;

use num_complex::Complex64;
use pclab_core::charsum::{connection_set_char_image, epsilon_star, root_of_unity};

use super::{parts, quadratic_graph};
use crate::job::{usage, Job, Result};
use crate::report::{Advisory, Report};

/// Tolerance for the closed form `sin(π/d)`.
pub const EPSILON_TOL: f64 = 1e-9;

pub fn epsilon(job: &Job, report: &mut Report) -> Result<()> {
    if let Some(points) = &job.params.points {
        return explicit(points, report);
    }
    if job.params.family.is_some() {
        return family(job, report);
    }
    match job.params.d {
        Some(d) => half_circle(d, report),
        None => usage("give --d, --points, or --family with --q"),
    }
}

fn explicit(points: &[[f64; 2]], report: &mut Report) -> Result<()> {
    report.claim = "distance from 0 to the convex hull of the given points".into();
    let pts: Vec<Complex64> = points.iter().map(|&[x, y]| Complex64::new(x, y)).collect();
    let Some(e) = epsilon_star(&pts) else {
        return usage("--points is empty");
    };
    report.margin("epsilon_star", e.epsilon_star);
    report.count("points", pts.len() as u64);
    report.count("lower_bounded", u64::from(e.epsilon_star > EPSILON_TOL));
    Ok(())
}

/// `{e^{2πij/d} : 0 <= j < d/2}` has hull distance `sin(π/d) >= π/d - π/d^2`.
fn half_circle(d: u64, report: &mut Report) -> Result<()> {
    report.claim = format!("epsilon_star of the first half of the {d}-th roots of unity is sin(pi/d) >= pi/d - pi/d^2");
    if d < 2 {
        return usage("--d must be at least 2");
    }
    let pts: Vec<Complex64> = (0..d.div_ceil(2)).map(|j| root_of_unity(j, d)).collect();
    let e = epsilon_star(&pts).expect("d >= 2 gives points").epsilon_star;
    let df = d as f64;
    let closed = (PI / df).sin();
    let lower = PI / df - PI / (df * df);
    report.margin("epsilon_star", e);
    report.margin("sin_pi_over_d", closed);
    report.margin("lemma_lower", lower);
    report.margin("closed_form_error", (e - closed).abs());
    if d % 2 == 1 {
        report.note("odd d: the closed form is stated for even d");
    }
    if (e - closed).abs() > EPSILON_TOL || e < lower - EPSILON_TOL {
        report.refute();
    }
    Ok(())
}

/// Best `ε` over nontrivial characters for a connection set on `F_{q^2}`.
fn family(job: &Job, report: &mut Report) -> Result<()> {
    let q = job.base_order()?;
    let (p, n) = parts(q)?;
    report.claim = "largest epsilon for which the character image of S is epsilon-lower bounded".into();
    let g = quadratic_graph(job, report, q, &job.spec(crate::job::Family::Paley)?)?;
    let t = g.tower();
    let mut best: Option<(f64, u64)> = None;
    for chi in t.characters().filter(|c| !c.is_trivial()) {
        let img = connection_set_char_image(g.connection(), &chi);
        let e = img.epsilon_star().map_or(0.0, |b| b.epsilon_star);
        if best.map_or(true, |(b, _)| e > b + EPSILON_TOL) {
            best = Some((e, chi.index()));
        }
    }
    let (eps, chi) = best.expect("F_{q^2} has nontrivial characters");
    report.margin("epsilon_star", eps);
    report.count("best_chi", chi);
    report.count("characters", t.group_order() - 1);
    if eps > EPSILON_TOL {
        let nn = f64::from(n * n);
        let mut main = Advisory::new("p > 4.1 n^2 / eps^2 (n >= 2)", 4.1 * nn / (eps * eps), p);
        main.inside &= n >= 2;
        report.advisory.push(main);
        report.advisory.push(Advisory::new("p > 4 n^2 (proof step)", 4.0 * nn, p));
    } else {
        report.note("no nontrivial character has a lower-bounded image");
    }
    Ok(())
}
