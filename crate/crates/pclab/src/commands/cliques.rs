//! Maximum-clique structure in Peisert-type graphs on `F_{q^2}`.

use std::f64::consts::PI;
use std::time::Instant;

use pclab_core::cayley::{CayleyGraph, ConnectionSpec, PeisertTypeVerdict};
use pclab_core::clique::{
    clique_report, stability_scan, unique_01_max_clique, verify_stability, CliqueEntry,
    SearchOptions, Uniqueness,
};
use pclab_core::directions::clique_directions;

use super::{elapsed_ms, parts, quadratic_graph};
use crate::job::{not_applicable, Family, Job, Result};
use crate::report::{Advisory, Report};

struct Survey {
    omega: usize,
    entries: Vec<CliqueEntry>,
}

/// Clique number and every maximum clique through 0, with structure counts.
fn survey(graph: &CayleyGraph, opts: &SearchOptions, report: &mut Report) -> Result<Survey> {
    let start = Instant::now();
    let r = clique_report(graph, opts)?;
    report.timing("cliques", elapsed_ms(start));
    report.metrics.omega = Some(r.omega);
    let count = |f: fn(&CliqueEntry) -> bool| r.max_cliques_zero.iter().filter(|e| f(e)).count() as u64;
    report.count("max_cliques_zero", r.max_cliques_zero.len() as u64);
    report.count("subspace_cliques_zero", count(|e| e.flags.is_additive_subgroup));
    report.count("fq_lines_zero", count(|e| e.flags.is_fq_coset_line));
    Ok(Survey {
        omega: r.omega,
        entries: r.max_cliques_zero,
    })
}

/// Records the 0,1 uniqueness result; returns whether `F_q` is unique.
fn uniqueness(graph: &CayleyGraph, opts: &SearchOptions, report: &mut Report) -> Result<(bool, Vec<Vec<i64>>)> {
    let start = Instant::now();
    let u = unique_01_max_clique(graph, opts)?;
    report.timing("uniqueness", elapsed_ms(start));
    Ok(match u {
        Uniqueness::UniqueSubfield => {
            report.count("max_cliques_01", 1);
            (true, Vec::new())
        }
        Uniqueness::Violation {
            subfield_is_max_clique,
            cliques,
            ..
        } => {
            report.count("max_cliques_01", cliques.len() as u64 + u64::from(subfield_is_max_clique));
            report.count("subfield_is_max_clique", u64::from(subfield_is_max_clique));
            (false, cliques.iter().map(|c| c.dlog_list()).collect())
        }
    })
}

/// Direction-set facts for each maximum clique through 0; refutes on failure.
fn directions(graph: &CayleyGraph, entries: &[CliqueEntry], report: &mut Report) -> Result<()> {
    let start = Instant::now();
    let mut failures = 0u64;
    for e in entries {
        if !clique_directions(graph, &e.clique)?.all_hold() {
            failures += 1;
            report.witness_set(&e.clique);
        }
    }
    report.count("direction_checks", entries.len() as u64);
    report.count("direction_failures", failures);
    report.timing("directions", elapsed_ms(start));
    if failures > 0 {
        report.refute();
        report.note("some maximum clique through 0 violates the direction-set invariants");
    }
    Ok(())
}

/// ω = q, uniqueness of `F_q` through 0 and 1, subspace structure of every
/// maximum clique through 0 and their direction sets. With `lines`, every
/// such clique must also be an `F_q`-line.
fn peisert_type_suite(graph: &CayleyGraph, q: u64, lines: bool, job: &Job, report: &mut Report) -> Result<()> {
    let opts = job.search_options();
    let s = survey(graph, &opts, report)?;
    if s.omega as u64 != q {
        report.refute();
        report.note(format!("clique number {} differs from q = {q}", s.omega));
        if let Some(e) = s.entries.first() {
            report.witness_set(&e.clique);
        }
    }
    let (unique, violations) = uniqueness(graph, &opts, report)?;
    if !unique {
        report.refute();
        report.note("F_q is not the only maximum clique through 0 and 1");
        report.witnesses.extend(violations);
    }
    for e in &s.entries {
        if !e.flags.is_additive_subgroup || (lines && !e.flags.is_fq_coset_line) {
            report.refute();
            report.witness_set(&e.clique);
        }
    }
    directions(graph, &s.entries, report)
}

/// `p > c·n^2` style advisory for theorems stated for `n >= 2`.
fn subfield_advisory(name: &str, threshold: f64, q: u64, needs_n2: bool) -> Result<Advisory> {
    let (p, n) = parts(q)?;
    let mut a = Advisory::new(name, threshold * f64::from(n * n), p);
    if needs_n2 && n < 2 {
        a.inside = false;
    }
    Ok(a)
}

pub fn vlm(job: &Job, report: &mut Report) -> Result<()> {
    let q = job.base_order()?;
    parts(q)?;
    report.claim = format!(
        "in P_{}, omega = q and F_q is the only maximum clique containing 0 and 1",
        q * q
    );
    report.advisory.push(subfield_advisory("p > 4.1 n^2 (eps = 1, n >= 2)", 4.1, q, true)?);
    let g = quadratic_graph(job, report, q, &ConnectionSpec::Paley)?;
    peisert_type_suite(&g, q, false, job, report)
}

pub fn mullin(job: &Job, report: &mut Report) -> Result<()> {
    let q = job.base_order()?;
    parts(q)?;
    report.claim = format!(
        "in P*_{}, F_q is the only maximum clique containing 0 and 1",
        q * q
    );
    report.advisory.push(subfield_advisory("p > 8.2 n^2", 8.2, q, false)?);
    if q % 4 != 3 {
        return not_applicable(format!("needs q = 3 mod 4, got q = {q}"));
    }
    let g = quadratic_graph(job, report, q, &ConnectionSpec::Peisert)?;
    peisert_type_suite(&g, q, false, job, report)
}

pub fn sziklai(job: &Job, report: &mut Report) -> Result<()> {
    let q = job.base_order()?;
    parts(q)?;
    let d = job.require_d()?;
    report.claim = format!(
        "in GP({}, {d}), F_q is the only maximum clique containing 0 and 1 and every maximum clique through 0 is an F_q-line",
        q * q
    );
    report.advisory.push(subfield_advisory("p > 4.1 n^2 (eps = 1, n >= 2)", 4.1, q, true)?);
    if d < 2 || (q + 1) % d != 0 {
        return not_applicable(format!("needs d >= 2 dividing q + 1 = {}", q + 1));
    }
    let g = quadratic_graph(job, report, q, &ConnectionSpec::GPaley(d))?;
    peisert_type_suite(&g, q, true, job, report)
}

/// The advisory bound for generalized Peisert graphs.
pub fn gpstar_threshold(n: u32, d: u64) -> f64 {
    let (n, d) = (f64::from(n), d as f64);
    4.1 * n * n * d.powi(4) / (PI * PI * (d - 1.0).powi(2))
}

pub fn gpstar(job: &Job, report: &mut Report) -> Result<()> {
    let q = job.base_order()?;
    let (p, n) = parts(q)?;
    let d = job.require_d()?;
    let expect = job.params.expect_count;
    report.claim = match expect {
        Some(c) => format!("GP*({}, {d}) has exactly {c} maximum cliques containing 0", q * q),
        None => format!("count maximum cliques containing 0 in GP*({}, {d})", q * q),
    };
    let mut adv = Advisory::new("p > 4.1 n^2 d^4 / pi^2 (d-1)^2", gpstar_threshold(n, d), p);
    let hypothesis = n >= 2 && d >= 4 && d % 2 == 0 && (q + 1) % d == 0;
    adv.inside &= hypothesis;
    report.advisory.push(adv);
    let g = quadratic_graph(job, report, q, &ConnectionSpec::GPeisert(d))?;
    let opts = job.search_options();
    let s = survey(&g, &opts, report)?;
    if let Some(c) = expect {
        if s.entries.len() as u64 != c {
            report.refute();
            report.note(format!("found {} maximum cliques through 0", s.entries.len()));
            for e in &s.entries {
                report.witness_set(&e.clique);
            }
        }
    }
    if !g.is_peisert_type().is_yes() {
        report.note("not of Peisert type; structure checks skipped");
        return Ok(());
    }
    let bad: Vec<_> = s
        .entries
        .iter()
        .filter(|e| s.omega as u64 != q || !e.flags.is_additive_subgroup)
        .collect();
    if !bad.is_empty() {
        report.refute();
        report.note("a Peisert-type graph must have omega = q with subspace maximum cliques");
        for e in bad {
            report.witness_set(&e.clique);
        }
    }
    let (unique, violations) = uniqueness(&g, &opts, report)?;
    if !unique {
        if report.advisory[0].inside {
            report.refute();
            report.witnesses.extend(violations);
            report.note("F_q is not the only maximum clique through 0 and 1 inside the advisory regime");
        } else {
            report.note("F_q is not the only maximum clique through 0 and 1; p is below the advisory bound");
        }
    }
    Ok(())
}

/// Largest proper divisor of `n`, or 0 when `n = 1`.
pub fn largest_proper_divisor(n: u32) -> u32 {
    (1..n).rev().find(|k| n % k == 0).unwrap_or(0)
}

pub fn cor_improvement(job: &Job, report: &mut Report) -> Result<()> {
    let q = job.base_order()?;
    let (p, n) = parts(q)?;
    report.claim = "m <= p^(n-k) implies F_q is the only maximum clique containing 0 and 1".into();
    let g = quadratic_graph(job, report, q, &job.spec(Family::Paley)?)?;
    let m = match g.is_peisert_type() {
        PeisertTypeVerdict::Yes { m, .. } => m as u64,
        PeisertTypeVerdict::No(reason) => return not_applicable(format!("not of Peisert type: {reason:?}")),
    };
    let k = largest_proper_divisor(n);
    let bound = p.pow(n - k);
    report.count("m", m);
    report.count("k", u64::from(k));
    report.count("coset_bound", bound);
    if m > bound {
        return not_applicable(format!("m = {m} exceeds p^(n-k) = {bound}"));
    }
    let opts = job.search_options();
    let (unique, violations) = uniqueness(&g, &opts, report)?;
    if !unique {
        report.refute();
        report.witnesses.extend(violations);
    }
    Ok(())
}

pub fn stability(job: &Job, report: &mut Report) -> Result<()> {
    let q = job.base_order()?;
    parts(q)?;
    report.claim = "every maximal clique through 0 above the stability threshold lies in a subspace maximum clique".into();
    let g = quadratic_graph(job, report, q, &job.spec(Family::Paley)?)?;
    let m = match g.is_peisert_type() {
        PeisertTypeVerdict::Yes { m, .. } => m as u64,
        PeisertTypeVerdict::No(reason) => return not_applicable(format!("not of Peisert type: {reason:?}")),
    };
    let opts = job.search_options();
    let inside = 2 * m < q + 1;
    let start = Instant::now();
    let r = if inside {
        verify_stability(&g, &opts)?
    } else {
        stability_scan(&g, &opts)?
    };
    report.timing("scan", elapsed_ms(start));
    report.metrics.omega = Some(r.omega);
    report.count("m", m);
    report.count("min_size", r.threshold.min_size() as u64);
    report.margin("threshold", r.threshold.value);
    report.count("subspace_cliques_zero", r.subspace_cliques.len() as u64);
    report.count("large_cliques", r.large_cliques.len() as u64);
    let outside: Vec<_> = r.large_cliques.iter().filter(|c| !c.contained).collect();
    report.count("uncontained", outside.len() as u64);
    for c in &outside {
        report.witness_set(&c.clique);
    }
    if !inside {
        return not_applicable(format!(
            "m = {m} is not below (q+1)/2; containment {} for all {} large cliques (empirical)",
            if r.holds { "holds" } else { "fails" },
            r.large_cliques.len()
        ));
    }
    if !r.holds {
        report.refute();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proper_divisors() {
        assert_eq!(largest_proper_divisor(1), 0);
        assert_eq!(largest_proper_divisor(2), 1);
        assert_eq!(largest_proper_divisor(6), 3);
        assert_eq!(largest_proper_divisor(9), 3);
    }

    #[test]
    fn gpstar_threshold_values() {
        // d = 10, n = 2: 4.1·4·10^4/(π^2·81)
        let t = gpstar_threshold(2, 10);
        assert!((t - 164000.0 / (PI * PI * 81.0)).abs() < 1e-9);
    }
}
