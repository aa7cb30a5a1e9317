//! Command implementations shared by the binary and the test suites. Each
//! command assembles a deterministic report; timings and cache statistics
//! are attached afterwards by the caller.

use crate::parser::{parse_expr, AtomPolicy};
use crate::report::Report;
use crate::suites::{self, SuiteParams};
use anyhow::{anyhow, bail, Result};
use tautring::betti::betti_table;
use tautring::integrator;
use tautring::perversity::{almost_perversity, default_k_cap, filtration_member, FiltrationQuery};
use tautring::rat::q_str;
use tautring::recursion::{is_zero, IntegralCache};
use tautring::ring::RingContext;

pub fn cmd_integrate(
    n: u32,
    d: u32,
    expr: &str,
    backend: &str,
    cache: &IntegralCache,
) -> Result<Report> {
    let ctx = RingContext::hilb(n, d)?;
    let x = parse_expr(expr, &ctx, AtomPolicy::All)?;
    let engine = integrator::lookup(backend)
        .ok_or_else(|| anyhow!("unknown backend '{}'; registered: recursion, bott", backend))?;
    let value = engine.integrate(&x, cache).map_err(|e| anyhow!("{}", e))?;
    let mut r = Report::new("integrate");
    r.param("n", n).param("d", d).param("expr", expr);
    r.param("backend", engine.name());
    if engine.name() == "bott" {
        r.seeds = tautring::bott::seed_labels();
    }
    r.verdict("integrate", true, format!("value = {}", q_str(&value)));
    Ok(r)
}

pub fn cmd_is_zero(n: u32, d: u32, expr: &str, cache: &IntegralCache) -> Result<Report> {
    let ctx = RingContext::hilb(n, d)?;
    let x = parse_expr(expr, &ctx, AtomPolicy::All)?;
    let (zero, cert) = is_zero(&x, cache).map_err(|e| anyhow!("{}", e))?;
    let mut r = Report::new("is-zero");
    r.param("n", n).param("d", d).param("expr", expr);
    let detail = match cert.witness {
        Some(w) => format!(
            "nonzero: pairing against {} = {}",
            cert.monomials[w], cert.integrals[w]
        ),
        None => format!("zero: all {} pairings vanish", cert.monomials.len()),
    };
    r.verdict("is-zero", true, format!("verdict = {}; {}", zero, detail));
    r.certificates = serde_json::to_value(&cert)?;
    Ok(r)
}

pub fn cmd_perversity(
    n: u32,
    d: u32,
    expr: &str,
    k: Option<i64>,
    k_cap: Option<u32>,
    cache: &IntegralCache,
) -> Result<Report> {
    let ctx = RingContext::hilb_times_linsys(n, d)?;
    let gamma = parse_expr(expr, &ctx, AtomPolicy::GammaOnly)?;
    let cap = k_cap.unwrap_or_else(|| default_k_cap(n));
    let mut r = Report::new("perversity");
    r.param("n", n).param("d", d).param("expr", expr).param("k_cap", cap);
    match k {
        Some(k) => {
            let (member, cert) = filtration_member(
                &FiltrationQuery {
                    gamma,
                    k,
                    k_cap: cap,
                },
                cache,
            )
            .map_err(|e| anyhow!("{}", e))?;
            r.param("k", k);
            r.verdict(
                format!("member[k={}]", k),
                true,
                format!(
                    "member = {}; system {}x{} rank {} vs {}",
                    member, cert.equations, cert.unknowns, cert.rank_lhs, cert.rank_augmented
                ),
            );
            r.certificates = serde_json::to_value(&cert)?;
        }
        None => {
            let rep = almost_perversity(expr, &gamma, cap, cache).map_err(|e| anyhow!("{}", e))?;
            r.verdict(
                "almost-perversity",
                true,
                format!("value = {}", rep.almost_perversity),
            );
            r.certificates = serde_json::to_value(&rep)?;
        }
    }
    Ok(r)
}

pub fn cmd_verify(id: &str, p: &SuiteParams, cache: &IntegralCache) -> Result<Report> {
    let Some(suite) = suites::lookup(id) else {
        bail!(
            "unknown lemma id '{}'; registered: {}",
            id,
            suites::suite_ids().join(", ")
        );
    };
    let mut r = Report::new("verify");
    r.param("lemma", id).param("n", p.n).param("d", p.d);
    if let Some(c) = p.k_cap {
        r.param("k_cap", c);
    }
    suite.run(p, cache, &mut r)?;
    Ok(r)
}

pub fn cmd_betti(n: u32) -> Result<Report> {
    let b = betti_table(n);
    let mut r = Report::new("betti");
    r.param("n", n);
    let total: u64 = b.iter().sum();
    r.verdict(
        "betti",
        true,
        format!(
            "even betti numbers = [{}], total = {}",
            b.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            total
        ),
    );
    Ok(r)
}

pub fn cmd_oracle_integrate(n: u32, d: u32, expr: &str, cache: &IntegralCache) -> Result<Report> {
    let mut r = cmd_integrate(n, d, expr, "bott", cache)?;
    r.command = "oracle-integrate".into();
    Ok(r)
}

pub fn cmd_cache_stats(dir_label: &str, cache: &IntegralCache) -> Result<Report> {
    let entries = cache.entries();
    let (total, rec, ora) = crate::cache::stats(&entries);
    let mut r = Report::new("cache");
    r.param("dir", dir_label);
    r.verdict(
        "cache",
        true,
        format!(
            "{} entries ({} recursion, {} oracle)",
            total, rec, ora
        ),
    );
    Ok(r)
}
