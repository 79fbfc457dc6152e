//! Theorem-level verification commands.

mod charsum;
mod cliques;
mod directions;
mod epsilon;
mod maximal;

use std::sync::Arc;
use std::time::Instant;

use pclab_core::cayley::{CayleyGraph, ConnectionSpec};
use pclab_core::ff::FieldTower;
use serde::{Deserialize, Serialize};

use crate::job::{HarnessError, Job, Result};
use crate::report::{Report, Verdict};

/// Every command the harness knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Vlm,
    Mullin,
    Sziklai,
    Gpstar,
    MaximalPeisert,
    MaximalGp,
    CorImprovement,
    Stability,
    Charsum,
    Epsilon,
    Directions,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Vlm => "vlm",
            Command::Mullin => "mullin",
            Command::Sziklai => "sziklai",
            Command::Gpstar => "gpstar",
            Command::MaximalPeisert => "maximal-peisert",
            Command::MaximalGp => "maximal-gp",
            Command::CorImprovement => "cor-improvement",
            Command::Stability => "stability",
            Command::Charsum => "charsum",
            Command::Epsilon => "epsilon",
            Command::Directions => "directions",
        }
    }
}

/// Runs one command. Inapplicable hypotheses and exhausted budgets become
/// reports; invalid parameters are errors.
pub fn execute(cmd: Command, job: &Job) -> Result<Report> {
    let start = Instant::now();
    let mut report = Report::new(cmd.name(), "", &job.params);
    let outcome = match cmd {
        Command::Vlm => cliques::vlm(job, &mut report),
        Command::Mullin => cliques::mullin(job, &mut report),
        Command::Sziklai => cliques::sziklai(job, &mut report),
        Command::Gpstar => cliques::gpstar(job, &mut report),
        Command::CorImprovement => cliques::cor_improvement(job, &mut report),
        Command::Stability => cliques::stability(job, &mut report),
        Command::MaximalPeisert => maximal::maximal_peisert(job, &mut report),
        Command::MaximalGp => maximal::maximal_gp(job, &mut report),
        Command::Charsum => charsum::charsum(job, &mut report),
        Command::Epsilon => epsilon::epsilon(job, &mut report),
        Command::Directions => directions::directions(job, &mut report),
    };
    match outcome {
        Ok(()) => {}
        Err(HarnessError::NotApplicable(msg)) => {
            report.verdict = Verdict::HypothesisNotApplicable;
            report.note(msg);
        }
        Err(HarnessError::Timeout(bounds)) => {
            report.verdict = Verdict::Timeout;
            report.metrics.bounds = Some(bounds);
            if report.metrics.omega.is_none() && bounds.lower == bounds.upper {
                report.metrics.omega = Some(bounds.lower);
            }
        }
        Err(e) => return Err(e),
    }
    debug_assert!(
        report.verdict != Verdict::Refuted || !report.witnesses.is_empty(),
        "{} refuted without witnesses",
        cmd.name()
    );
    report.timing("total", elapsed_ms(start));
    Ok(report)
}

pub(crate) fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Tower `F_q ⊂ F_{q^big_n}`, recorded in the report.
pub(crate) fn tower(job: &Job, report: &mut Report, q: u64, big_n: u32) -> Result<Arc<FieldTower>> {
    let start = Instant::now();
    let t = job.tower(q, big_n)?;
    report.field = Some(t.info());
    report.timing("tower", elapsed_ms(start));
    Ok(t)
}

/// Cayley graph on `F_{q^2}`.
pub(crate) fn quadratic_graph(
    job: &Job,
    report: &mut Report,
    q: u64,
    spec: &ConnectionSpec,
) -> Result<CayleyGraph> {
    let t = tower(job, report, q, 2)?;
    let g = CayleyGraph::from_spec(t, spec)?;
    report.count("degree", g.degree() as u64);
    Ok(g)
}

/// `(p, n)` with `q = p^n`.
pub(crate) fn parts(q: u64) -> Result<(u64, u32)> {
    pclab_core::ff::arith::prime_power_parts(q)
        .filter(|&(p, _)| p > 2)
        .ok_or_else(|| HarnessError::Usage(format!("{q} is not an odd prime power")))
}
