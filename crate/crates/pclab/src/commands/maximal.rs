//! Maximality of subfield cliques.

use std::time::Instant;

use pclab_core::bitset::VertexSet;
use pclab_core::cayley::{CayleyGraph, ConnectionSpec};
use pclab_core::clique::{
    find_subspace_extension, is_maximal_clique, max_clique, subfield_clique_condition, CliqueError,
    Maximality,
};
use pclab_core::ff::{arith, Elem};

use super::{elapsed_ms, parts, tower};
use crate::job::{not_applicable, Job, Result};
use crate::report::Report;

/// Maximality scan of `k`; a non-clique refutes with the offending pair.
fn scan(graph: &CayleyGraph, k: &VertexSet, report: &mut Report) -> Result<Option<Maximality>> {
    let start = Instant::now();
    let m = match is_maximal_clique(graph, k) {
        Ok(m) => m,
        Err(CliqueError::NotAClique { a, b }) => {
            report.refute();
            report.note("the subfield is not a clique");
            report.witness_elems(&[a, b]);
            return Ok(None);
        }
        Err(e) => return Err(e.into()),
    };
    report.timing("maximality", elapsed_ms(start));
    report.count("maximal", u64::from(m.is_maximal()));
    Ok(Some(m))
}

fn refute_with_extension(k: &VertexSet, witness: Elem, report: &mut Report) {
    let mut bigger = k.clone();
    bigger.insert(witness);
    report.refute();
    report.witness_set(&bigger);
}

pub fn maximal_peisert(job: &Job, report: &mut Report) -> Result<()> {
    let q = job.base_order()?;
    let (p, _) = parts(q)?;
    report.claim = format!("F_q is a maximal clique in P*_{}", q.pow(4));
    if p % 4 != 3 {
        return not_applicable(format!("needs p = 3 mod 4, got p = {p}"));
    }
    if q == 3 {
        report.note("q = 3 lies outside the theorem (q > 3); the fallback structure is checked instead");
    }
    let t = tower(job, report, q, 4)?;
    let g = CayleyGraph::from_spec(t, &ConnectionSpec::Peisert)?;
    let k = VertexSet::from_elems(g.order(), g.tower().base_field());
    let Some(Maximality::Extendable { witness }) = scan(&g, &k, report)? else {
        return Ok(());
    };
    refute_with_extension(&k, witness, report);
    // not maximal: omega must be q^2, attained by some F_q ⊕ hF_q
    let start = Instant::now();
    let ext = find_subspace_extension(&g, &k)?;
    let omega = max_clique(&g, &job.search_options())?.omega;
    report.timing("structure", elapsed_ms(start));
    report.metrics.omega = Some(omega);
    let structure = match ext {
        Some(v) => {
            report.count("extension_size", v.len() as u64);
            report.witness_set(&v);
            v.len() as u64 == q * q && omega as u64 == q * q
        }
        None => false,
    };
    report.count("structure_holds", u64::from(structure));
    if !structure {
        report.note("no F_q + hF_q maximum clique of size q^2 was found");
    }
    Ok(())
}

/// Largest `r | R` with `d | (p^R - 1)/(p^r - 1)`.
pub fn conjectured_subfield_degree(p: u64, big_r: u32, d: u64) -> Option<u32> {
    let order = arith::checked_pow(p, big_r)? - 1;
    (1..=big_r)
        .rev()
        .filter(|r| big_r % r == 0)
        .find(|&r| (order / (p.pow(r) - 1)) % d == 0)
}

pub fn maximal_gp(job: &Job, report: &mut Report) -> Result<()> {
    let q = job.base_order()?;
    let (p, n) = parts(q)?;
    let d = job.require_d()?;
    let big_n = job.params.ext.unwrap_or(3);
    let big_q = arith::checked_pow(q, big_n)
        .ok_or_else(|| crate::job::HarnessError::Usage("q^N overflows".into()))?;
    if d < 2 {
        return crate::job::usage("--d must be at least 2");
    }
    if (big_q - 1) % (2 * d) != 0 {
        report.claim = format!("GP({big_q}, {d}) maximal subfield clique");
        return not_applicable(format!("GP({big_q}, {d}) needs q^N = 1 mod 2d"));
    }
    let t = tower(job, report, q, big_n)?;
    let g = CayleyGraph::from_spec(t.clone(), &ConnectionSpec::GPaley(d))?;
    let theorem = big_n > 2 && arith::is_prime(u64::from(big_n)) && q > u64::from(big_n * big_n);
    let cond = subfield_clique_condition(&t, d);
    report.count("divides", u64::from(cond.divides));
    let k = if theorem && cond.divides {
        report.claim = format!("F_{q} is a maximal clique in GP({big_q}, {d})");
        if cond.verified_clique != Some(true) {
            report.refute();
            report.note("d divides (q^N - 1)/(q - 1) but F_q is not a clique");
            return Ok(());
        }
        VertexSet::from_elems(g.order(), t.base_field())
    } else {
        let big_r = n * big_n;
        let Some(r) = conjectured_subfield_degree(p, big_r, d) else {
            report.claim = format!("GP({big_q}, {d}) maximal subfield clique");
            return not_applicable("no subfield degree r with d | (Q-1)/(p^r-1)");
        };
        report.claim = format!("F_{} is a maximal clique in GP({big_q}, {d})", p.pow(r));
        report.note("conjecture instance: r is the largest divisor of the degree with d | (Q-1)/(p^r-1)");
        report.count("r", u64::from(r));
        VertexSet::from_elems(g.order(), t.prime_subfield(r)?)
    };
    if let Some(Maximality::Extendable { witness }) = scan(&g, &k, report)? {
        refute_with_extension(&k, witness, report);
    }
    Ok(())
}
