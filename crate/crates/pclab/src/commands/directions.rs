//! Direction sets in `AG(2, q)`.

use std::collections::BTreeSet;
use std::time::Instant;

use pclab_core::cayley::CayleyGraph;
use pclab_core::clique::clique_report;
use pclab_core::directions::{
    clique_directions, search_extension, verify_ball_dichotomy, Embedding, Plane, PointSet,
    EXTENSION_MAX_Q,
};
use pclab_core::ff::Elem;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{elapsed_ms, parts, quadratic_graph, tower};
use crate::job::{not_applicable, usage, Family, Job, Result};
use crate::report::Report;

pub fn directions(job: &Job, report: &mut Report) -> Result<()> {
    match job.params.mode.as_deref() {
        Some("ball") => ball(job, report),
        Some("cliques") => cliques(job, report),
        Some("extension") => extension(job, report),
        Some(other) => usage(format!("unknown --mode {other}")),
        None => usage("--mode is required (ball, cliques, extension)"),
    }
}

/// `x ↦ Σ a_i x^{p^i}` on the coordinate field.
fn additive_function(plane: &Plane, rng: &mut ChaCha8Rng) -> Vec<Elem> {
    let t = plane.tower();
    let elems = plane.elements();
    let degree = (plane.q() as f64).log(t.p() as f64).round() as u32;
    let coeffs: Vec<Elem> = (0..degree).map(|_| *elems.choose(rng).expect("nonempty")).collect();
    elems
        .iter()
        .map(|&x| {
            coeffs.iter().enumerate().fold(Elem::ZERO, |acc, (i, &a)| {
                t.add(acc, t.mul(a, t.pow(x, t.p().pow(i as u32))))
            })
        })
        .collect()
}

fn ball(job: &Job, report: &mut Report) -> Result<()> {
    let q = job.base_order()?;
    parts(q)?;
    report.claim = format!(
        "every function on F_{q} determines >= (q+3)/2 directions or has a K-linear graph with >= q/|K| + 1 directions"
    );
    let t = tower(job, report, q, 1)?;
    let plane = Plane::base(&t);
    let samples = job.params.samples.unwrap_or(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(job.params.seed);
    let (mut additive, mut linear, mut failures) = (0u64, 0u64, 0u64);
    let mut min_dirs = usize::MAX;
    let start = Instant::now();
    for _ in 0..samples {
        // a quarter of the samples are additive, to reach the linear branch
        let f = if rng.gen_ratio(1, 4) {
            additive += 1;
            additive_function(&plane, &mut rng)
        } else {
            (0..plane.q())
                .map(|_| *plane.elements().choose(&mut rng).expect("nonempty"))
                .collect()
        };
        let v = verify_ball_dichotomy(&plane, &f)?;
        min_dirs = min_dirs.min(v.directions);
        linear += u64::from(v.linear_over.is_some());
        if !v.holds {
            failures += 1;
            report.refute();
            report.witnesses.push(f.iter().map(|x| x.dlog_code()).collect());
        }
    }
    report.timing("sweep", elapsed_ms(start));
    report.count("samples", samples);
    report.count("additive_samples", additive);
    report.count("linear", linear);
    report.count("failures", failures);
    if samples > 0 {
        report.count("min_directions", min_dirs as u64);
    }
    if failures > 0 {
        report.note("witnesses are function tables, values listed in the coordinate field's dlog order");
    }
    Ok(())
}

fn peisert_type_graph(job: &Job, report: &mut Report, q: u64) -> Result<CayleyGraph> {
    let g = quadratic_graph(job, report, q, &job.spec(Family::Paley)?)?;
    if !g.is_peisert_type().is_yes() {
        return not_applicable("the graph is not of Peisert type");
    }
    Ok(g)
}

fn cliques(job: &Job, report: &mut Report) -> Result<()> {
    let q = job.base_order()?;
    parts(q)?;
    report.claim =
        "each maximum clique through 0 embeds avoiding infinity, with at most m directions D and 1 + D v inside S".into();
    let g = peisert_type_graph(job, report, q)?;
    let start = Instant::now();
    let r = clique_report(&g, &job.search_options())?;
    report.metrics.omega = Some(r.omega);
    let mut failures = 0u64;
    let mut max_dirs = 0usize;
    for e in &r.max_cliques_zero {
        let cd = clique_directions(&g, &e.clique)?;
        max_dirs = max_dirs.max(cd.directions.len());
        report.count("m", cd.m as u64);
        if !cd.all_hold() {
            failures += 1;
            report.refute();
            report.witness_set(&e.clique);
        }
    }
    report.timing("directions", elapsed_ms(start));
    report.count("cliques", r.max_cliques_zero.len() as u64);
    report.count("max_directions", max_dirs as u64);
    report.count("failures", failures);
    Ok(())
}

/// Removes up to `√q` points from embedded maximum cliques and searches for
/// a completion to `q` points with the same directions.
fn extension(job: &Job, report: &mut Report) -> Result<()> {
    let q = job.base_order()?;
    parts(q)?;
    report.claim =
        "a set of q - k points with few directions extends to q points determining the same directions".into();
    if q > EXTENSION_MAX_Q {
        return usage(format!("extension search is limited to q <= {EXTENSION_MAX_Q}"));
    }
    let g = peisert_type_graph(job, report, q)?;
    let t = g.tower();
    let r = clique_report(&g, &job.search_options())?;
    let emb = Embedding::for_graph(&g)?;
    let plane = Plane::base(t);
    let images: Vec<PointSet> = r.max_cliques_zero.iter().map(|e| emb.embed(&e.clique.elems())).collect();
    let kmax = (q as f64).sqrt().floor() as usize;
    let samples = job.params.samples.unwrap_or(20);
    let mut rng = ChaCha8Rng::seed_from_u64(job.params.seed);
    let (mut hyp, mut found, mut contradictions) = (0u64, 0u64, 0u64);
    let start = Instant::now();
    for _ in 0..samples {
        let full = images.choose(&mut rng).expect("cliques exist");
        let k = rng.gen_range(1..=kmax);
        let mut pts: Vec<_> = full.iter().copied().collect();
        pts.shuffle(&mut rng);
        let u: PointSet = pts[k..].iter().copied().collect::<BTreeSet<_>>();
        let e = search_extension(&plane, &u)?;
        hyp += u64::from(e.hypothesis);
        found += u64::from(e.extension.is_some());
        if e.contradiction {
            contradictions += 1;
            report.refute();
            report.witness_elems(&emb.preimage(t, &u));
        }
    }
    report.timing("search", elapsed_ms(start));
    report.count("samples", samples);
    report.count("hypothesis_holds", hyp);
    report.count("extended", found);
    report.count("contradictions", contradictions);
    Ok(())
}
